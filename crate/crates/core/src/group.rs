//! Finite groups given by a Cayley table, with a declared ordering of the
//! conjugacy classes and of the irreducible dimensions.
//!
//! Class and irreducible labels are taken in file order and never reordered;
//! the first class must be `{identity}`. Characters are optional and only
//! used to validate the table.

use num::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct FiniteGroupData {
    name: String,
    elements: Vec<String>,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    dims: Vec<u64>,
    chars: Option<Vec<Vec<Complex64>>>,
    warnings: Vec<String>,
}

#[derive(Debug, Deserialize, Serialize)]
struct GroupFile {
    name: String,
    elements: Vec<String>,
    cayley: Vec<Vec<usize>>,
    classes: Vec<Vec<usize>>,
    dims: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chars: Option<Vec<Vec<[f64; 2]>>>,
}

/// Result of the column-orthogonality check on the character table.
#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub max_deviation: f64,
    pub worst_pair: (usize, usize),
    pub passed: bool,
}

pub const BUILTIN_GROUPS: [&str; 4] = ["trivial", "Z2", "Z3", "S3"];

impl FiniteGroupData {
    /// Parses and validates a group document (JSON).
    pub fn from_json(document: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(document).map_err(|e| Error::Schema(e.to_string()))?;
        let chars = file.chars.map(|rows| {
            rows.into_iter().map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect()
        });
        Self::from_parts(file.name, file.elements, file.cayley, file.classes, file.dims, chars)
    }

    pub fn to_json(&self) -> String {
        let file = GroupFile {
            name: self.name.clone(),
            elements: self.elements.clone(),
            cayley: self.cayley.clone(),
            classes: self.classes.clone(),
            dims: self.dims.clone(),
            chars: self
                .chars
                .as_ref()
                .map(|rows| rows.iter().map(|row| row.iter().map(|c| [c.re, c.im]).collect()).collect()),
        };
        serde_json::to_string_pretty(&file).expect("group serializes")
    }

    pub fn from_parts(
        name: String,
        elements: Vec<String>,
        cayley: Vec<Vec<usize>>,
        classes: Vec<Vec<usize>>,
        dims: Vec<u64>,
        chars: Option<Vec<Vec<Complex64>>>,
    ) -> Result<Self> {
        let order = elements.len();
        if order == 0 {
            return Err(Error::Schema("group has no elements".into()));
        }
        if cayley.len() != order || cayley.iter().any(|row| row.len() != order) {
            return Err(Error::Schema(format!("cayley table must be {order}x{order}")));
        }
        if let Some((a, b)) = iter_pairs(order).find(|&(a, b)| cayley[a][b] >= order) {
            return Err(Error::Schema(format!("cayley[{a}][{b}] = {} out of range", cayley[a][b])));
        }
        let mul = |a: usize, b: usize| cayley[a][b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or_else(|| Error::GroupAxiom("no identity element".into()))?;
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(Error::GroupAxiom(format!(
                            "associativity fails at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(order);
        for (g, label) in elements.iter().enumerate() {
            let inv = (0..order)
                .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                .ok_or_else(|| Error::GroupAxiom(format!("{label} has no inverse")))?;
            inverses.push(inv);
        }

        let k = classes.len();
        let mut class_of = vec![usize::MAX; order];
        for (c, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::ClassPartition(format!("class {} is empty", c + 1)));
            }
            for &g in members {
                if g >= order {
                    return Err(Error::ClassPartition(format!("class {} lists index {g} out of range", c + 1)));
                }
                if class_of[g] != usize::MAX {
                    return Err(Error::ClassPartition(format!("{} appears in two classes", elements[g])));
                }
                class_of[g] = c;
            }
        }
        if let Some(g) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::ClassPartition(format!("{} belongs to no class", elements[g])));
        }
        if classes[0] != [identity] {
            return Err(Error::ClassPartition("the first class must be exactly {identity}".into()));
        }
        for (c, members) in classes.iter().enumerate() {
            let rep = members[0];
            let mut orbit: Vec<usize> = (0..order).map(|h| mul(mul(h, rep), inverses[h])).collect();
            orbit.sort_unstable();
            orbit.dedup();
            let mut sorted = members.clone();
            sorted.sort_unstable();
            if orbit != sorted {
                return Err(Error::ClassPartition(format!(
                    "class {} is not a conjugation orbit (orbit of {} has {} elements, class has {})",
                    c + 1,
                    elements[rep],
                    orbit.len(),
                    sorted.len()
                )));
            }
        }

        if dims.len() != k {
            return Err(Error::DimensionSum(format!("{} dimensions for {k} classes", dims.len())));
        }
        if dims.contains(&0) {
            return Err(Error::DimensionSum("irreducible dimensions must be positive".into()));
        }
        let square_sum: u64 = dims.iter().map(|d| d * d).sum();
        if square_sum != order as u64 {
            return Err(Error::DimensionSum(format!("sum of squared dimensions {square_sum} != |G| = {order}")));
        }
        if let Some(table) = &chars {
            if table.len() != k || table.iter().any(|row| row.len() != k) {
                return Err(Error::Schema(format!("character table must be {k}x{k}")));
            }
        }

        let warnings = classes
            .iter()
            .enumerate()
            .filter(|(_, members)| !order.is_multiple_of(members.len()))
            .map(|(c, members)| format!("class {} size {} does not divide |G| = {order}", c + 1, members.len()))
            .collect();

        Ok(FiniteGroupData { name, elements, cayley, identity, inverses, classes, class_of, dims, chars, warnings })
    }

    /// One of [`BUILTIN_GROUPS`].
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "trivial" => cyclic(1, "trivial"),
            "Z2" => cyclic(2, "Z2"),
            "Z3" => cyclic(3, "Z3"),
            "S3" => symmetric3(),
            other => Err(Error::InvalidArgument(format!(
                "unknown builtin group {other:?}; expected one of {BUILTIN_GROUPS:?}"
            ))),
        }
    }

    /// A builtin name or a path to a group JSON file.
    pub fn load(spec: &str) -> Result<Self> {
        if BUILTIN_GROUPS.contains(&spec) {
            return Self::builtin(spec);
        }
        let text = std::fs::read_to_string(spec)?;
        Self::from_json(&text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_index(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// Number of conjugacy classes.
    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Index of the class containing `g` (0-based, file order).
    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn dim(&self, j: usize) -> Rational {
        Rational::from_integer(BigInt::from(self.dims[j]))
    }

    /// `ζ_{c_l} = |G| / |c_l|` as an exact rational.
    pub fn zeta(&self, l: usize) -> Rational {
        Rational::new(BigInt::from(self.order()), BigInt::from(self.classes[l].len()))
    }

    pub fn zetas(&self) -> Vec<Rational> {
        (0..self.k()).map(|l| self.zeta(l)).collect()
    }

    pub fn characters(&self) -> Option<&[Vec<Complex64>]> {
        self.chars.as_deref()
    }

    /// Non-fatal findings from validation (e.g. a class size not dividing |G|).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Column orthogonality `Σ_j (|c_l|/|G|) γ^j(c_l) conj(γ^j(c_i)) = δ_{l,i}`.
    pub fn check_orthogonality(&self, tol: f64) -> Result<OrthogonalityReport> {
        let table = self.chars.as_ref().ok_or(Error::MissingCharacters)?;
        let k = self.k();
        let order = self.order() as f64;
        let mut max_deviation = 0.0f64;
        let mut worst_pair = (0, 0);
        for l in 0..k {
            let weight = self.classes[l].len() as f64 / order;
            for i in 0..k {
                let sum: Complex64 = (0..k).map(|j| table[j][l] * table[j][i].conj()).sum::<Complex64>() * weight;
                let target = if l == i { 1.0 } else { 0.0 };
                let dev = (sum - Complex64::new(target, 0.0)).norm();
                if dev > max_deviation {
                    max_deviation = dev;
                    worst_pair = (l, i);
                }
            }
        }
        Ok(OrthogonalityReport { max_deviation, worst_pair, passed: max_deviation <= tol })
    }
}

fn iter_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn cyclic(n: usize, name: &str) -> Result<FiniteGroupData> {
    let elements: Vec<String> = (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("g{i}") }).collect();
    let cayley = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let classes = (0..n).map(|i| vec![i]).collect();
    let dims = vec![1; n];
    let chars = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let angle = 2.0 * std::f64::consts::PI * ((i * j) % n) as f64 / n as f64;
                    round_unit(Complex64::from_polar(1.0, angle))
                })
                .collect()
        })
        .collect();
    FiniteGroupData::from_parts(name.to_string(), elements, cayley, classes, dims, Some(chars))
}

fn round_unit(z: Complex64) -> Complex64 {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    Complex64::new(clean(z.re), clean(z.im))
}

/// Permutations of {1,2,3} in one-line form, labelled by cycle notation;
/// products compose right to left, `(gh)(x) = g(h(x))`.
fn symmetric3() -> Result<FiniteGroupData> {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let elements: Vec<String> = perms.iter().map(|p| cycle_notation(p)).collect();
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed under composition");
    let cayley = perms.iter().map(|g| perms.iter().map(|h| index([g[h[0]], g[h[1]], g[h[2]]])).collect()).collect();
    let classes = vec![vec![0], vec![1, 2, 3], vec![4, 5]];
    let dims = vec![1, 1, 2];
    let c = |re: f64| Complex64::new(re, 0.0);
    let chars = vec![vec![c(1.0), c(1.0), c(1.0)], vec![c(1.0), c(-1.0), c(1.0)], vec![c(2.0), c(0.0), c(-1.0)]];
    FiniteGroupData::from_parts("S3".into(), elements, cayley, classes, dims, Some(chars))
}

/// Cycle notation for a 0-based one-line permutation, 1-based labels,
/// fixed points omitted, identity as `()`.
pub fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            out.push_str(&(cur + 1).to_string());
            cur = perm[cur];
        }
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Parses cycle notation like `(1)(23)` or `(132)` on `{1..n}` into a
/// 0-based one-line permutation.
pub fn parse_cycle_notation(s: &str, n: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let bad = |msg: &str| Error::Parse(format!("bad cycle notation {s:?}: {msg}"));
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body_end = rest.find(')').ok_or_else(|| bad("unclosed cycle"))?;
        if !rest.starts_with('(') {
            return Err(bad("expected '('"));
        }
        let body = &rest[1..body_end];
        // single-digit points may be written without separators: (132)
        let tokens: Vec<String> = if body.contains([',', ' ']) {
            body.split([',', ' ']).filter(|p| !p.is_empty()).map(str::to_string).collect()
        } else {
            body.chars().map(String::from).collect()
        };
        let points = tokens
            .iter()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad("non-numeric point"))?;
        if points.iter().any(|&p| p == 0 || p > n) {
            return Err(bad("point out of range"));
        }
        for (idx, &p) in points.iter().enumerate() {
            perm[p - 1] = points[(idx + 1) % points.len()] - 1;
        }
        rest = rest[body_end + 1..].trim_start();
    }
    let mut check = perm.clone();
    check.sort_unstable();
    if check != (0..n).collect::<Vec<_>>() {
        return Err(bad("cycles overlap"));
    }
    Ok(perm)
}
