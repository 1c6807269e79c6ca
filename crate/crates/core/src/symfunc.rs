//! Symmetric functions with exact coefficients: monomial and power-sum bases,
//! Jack polynomials `P_λ(·;θ)`, the Pieri rule for `p_1`, and polynomials in
//! the shifted power sums `p*_r`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num::{BigInt, One, Signed, Zero};

use crate::branching::chi_theta;
use crate::error::{Error, Result};
use crate::memo::OnceMap;
use crate::partition::{enumerate_partitions, YoungDiagram};
use crate::rational::{format_rational, Rational};
use crate::scalar::Scalar;

/// Largest degree the CLI expands exactly unless told otherwise.
pub const DEFAULT_DEGREE_BOUND: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Monomial,
    PowerSum,
}

/// A finite linear combination of `m_λ` or of `p_ρ = Π p_{ρ_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymFuncExpr {
    basis: Basis,
    terms: BTreeMap<YoungDiagram, Rational>,
}

impl SymFuncExpr {
    pub fn zero(basis: Basis) -> Self {
        SymFuncExpr { basis, terms: BTreeMap::new() }
    }

    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (YoungDiagram, Rational)>) -> Self {
        let mut expr = Self::zero(basis);
        for (lambda, c) in terms {
            expr.add_term(lambda, c);
        }
        expr
    }

    pub fn monomial(lambda: YoungDiagram) -> Self {
        Self::from_terms(Basis::Monomial, [(lambda, Rational::one())])
    }

    pub fn powersum(rho: YoungDiagram) -> Self {
        Self::from_terms(Basis::PowerSum, [(rho, Rational::one())])
    }

    pub fn constant(basis: Basis, c: Rational) -> Self {
        Self::from_terms(basis, [(YoungDiagram::empty(), c)])
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<YoungDiagram, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, lambda: &YoungDiagram) -> Rational {
        self.terms.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest size of an index partition; 0 for the zero expression.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(YoungDiagram::size).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, lambda: YoungDiagram, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SymFuncExpr) -> Result<SymFuncExpr> {
        if self.basis != other.basis {
            return Err(Error::InvalidArgument("cannot add expressions in different bases".into()));
        }
        let mut out = self.clone();
        for (lambda, c) in &other.terms {
            out.add_term(lambda.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> SymFuncExpr {
        Self::from_terms(self.basis, self.terms.iter().map(|(l, c)| (l.clone(), c * factor)))
    }

    /// The terms of exactly degree `d`.
    pub fn homogeneous_component(&self, d: usize) -> SymFuncExpr {
        Self::from_terms(
            self.basis,
            self.terms.iter().filter(|(l, _)| l.size() == d).map(|(l, c)| (l.clone(), c.clone())),
        )
    }

    pub fn to_powersum(&self) -> SymFuncExpr {
        match self.basis {
            Basis::PowerSum => self.clone(),
            Basis::Monomial => {
                let mut out = Self::zero(Basis::PowerSum);
                for (lambda, c) in &self.terms {
                    let change = basis_change(lambda.size());
                    let row = &change.m_in_p[change.index[lambda]];
                    for (rho, coeff) in change.parts.iter().zip(row) {
                        out.add_term(rho.clone(), c * coeff);
                    }
                }
                out
            }
        }
    }

    pub fn to_monomial(&self) -> SymFuncExpr {
        match self.basis {
            Basis::Monomial => self.clone(),
            Basis::PowerSum => {
                let mut out = Self::zero(Basis::Monomial);
                for (rho, c) in &self.terms {
                    let change = basis_change(rho.size());
                    let row = &change.p_in_m[change.index[rho]];
                    for (lambda, coeff) in change.parts.iter().zip(row) {
                        if !coeff.is_zero() {
                            out.add_term(lambda.clone(), c * coeff);
                        }
                    }
                }
                out
            }
        }
    }

    /// Product of two power-sum expressions.
    pub fn mul_powersum(&self, other: &SymFuncExpr) -> SymFuncExpr {
        let (a, b) = (self.to_powersum(), other.to_powersum());
        let mut out = Self::zero(Basis::PowerSum);
        for (rho, c) in &a.terms {
            for (sigma, d) in &b.terms {
                let mut parts = rho.rows().to_vec();
                parts.extend_from_slice(sigma.rows());
                out.add_term(YoungDiagram::from_parts(parts), c * d);
            }
        }
        out
    }

    /// Substitutes `p_r ↦ power(r)` in the power-sum expansion.
    pub fn eval_powersum<S: Scalar>(&self, power: impl Fn(usize) -> S) -> S {
        let expr = self.to_powersum();
        let mut cache: HashMap<usize, S> = HashMap::new();
        let mut total = S::zero();
        for (rho, c) in &expr.terms {
            let mut term = S::from_rational(c);
            for &r in rho.rows() {
                let value = cache.entry(r).or_insert_with(|| power(r)).clone();
                term = term * value;
            }
            total = total + term;
        }
        total
    }

    /// Evaluates at finitely many variables (all others zero).
    pub fn eval_at<S: Scalar>(&self, vars: &[S]) -> S {
        self.eval_powersum(|r| vars.iter().fold(S::zero(), |acc, x| acc + x.powi(r)))
    }
}

impl fmt::Display for SymFuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let symbol = match self.basis {
            Basis::Monomial => "m",
            Basis::PowerSum => "p",
        };
        // largest index first, matching the enumeration order
        for (idx, (lambda, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            if lambda.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{symbol}({lambda})")?;
            } else {
                write!(f, "{}*{symbol}({lambda})", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

/// `m_λ` written in power sums.
pub fn monomial_to_powersum(e: &SymFuncExpr) -> SymFuncExpr {
    e.to_powersum()
}

pub fn powersum_to_monomial(e: &SymFuncExpr) -> SymFuncExpr {
    e.to_monomial()
}

pub fn eval_powersum_numeric(e: &SymFuncExpr, atoms: &[f64]) -> f64 {
    e.eval_at(atoms)
}

pub fn hook_product(lambda: &YoungDiagram, theta: &Rational) -> Rational {
    lambda.hook_product(theta)
}

/// Transition matrices between `{p_ρ}` and `{m_λ}` in one degree.
struct BasisChange {
    parts: Vec<YoungDiagram>,
    index: HashMap<YoungDiagram, usize>,
    /// `p_in_m[ρ][λ]`: coefficient of `m_λ` in `p_ρ`.
    p_in_m: Vec<Vec<Rational>>,
    /// `m_in_p[λ][ρ]`: coefficient of `p_ρ` in `m_λ`.
    m_in_p: Vec<Vec<Rational>>,
}

fn basis_change(n: usize) -> Arc<BasisChange> {
    static TABLES: OnceLock<OnceMap<usize, Arc<BasisChange>>> = OnceLock::new();
    TABLES.get_or_init(OnceMap::new).get_or_compute(&n, || Arc::new(build_basis_change(n)))
}

fn build_basis_change(n: usize) -> BasisChange {
    let parts = enumerate_partitions(n);
    let index = parts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let p_in_m: Vec<Vec<Rational>> = parts
        .iter()
        .map(|rho| parts.iter().map(|lambda| Rational::from_integer(block_assignments(rho, lambda).into())).collect())
        .collect();
    let m_in_p = invert(&p_in_m).expect("power sums form a basis over the rationals");
    BasisChange { parts, index, p_in_m, m_in_p }
}

/// Number of maps from the parts of `ρ` to the rows of `λ` whose fibres sum
/// to the row lengths: the coefficient of `x^λ` in `p_ρ`.
fn block_assignments(rho: &YoungDiagram, lambda: &YoungDiagram) -> u128 {
    fn go(parts: &[usize], caps: Vec<usize>, memo: &mut HashMap<(usize, Vec<usize>), u128>) -> u128 {
        if parts.is_empty() {
            return u128::from(caps.iter().all(|&c| c == 0));
        }
        let key = (parts.len(), caps.clone());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut total = 0;
        for slot in 0..caps.len() {
            if caps[slot] >= parts[0] {
                let mut next = caps.clone();
                next[slot] -= parts[0];
                next.sort_unstable();
                total += go(&parts[1..], next, memo);
            }
        }
        memo.insert(key, total);
        total
    }
    if rho.size() != lambda.size() {
        return 0;
    }
    let mut caps = lambda.rows().to_vec();
    caps.sort_unstable();
    go(rho.rows(), caps, &mut HashMap::new())
}

/// Exact Gauss-Jordan inverse; `None` when singular.
fn invert(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let identity: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    solve_many(a.to_vec(), identity)
}

/// Solves `A X = B` exactly for square `A`; `None` when `A` is singular.
pub(crate) fn solve_many(mut a: Vec<Vec<Rational>>, mut b: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for v in b[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let (pivot_a, pivot_b) = (a[col].clone(), b[col].clone());
            for (v, p) in a[r].iter_mut().zip(&pivot_a) {
                *v -= &factor * p;
            }
            for (v, p) in b[r].iter_mut().zip(&pivot_b) {
                *v -= &factor * p;
            }
        }
    }
    Some(b)
}

/// Jack polynomials of one degree at one θ, as power-sum coordinates.
struct JackTable {
    /// `p_coords[i][ρ]` is the coefficient of `p_ρ` in `P_{parts[i]}`.
    p_coords: Vec<Vec<Rational>>,
}

fn jack_table(n: usize, theta: &Rational) -> Arc<JackTable> {
    static TABLES: OnceLock<OnceMap<(usize, Rational), Arc<JackTable>>> = OnceLock::new();
    TABLES.get_or_init(OnceMap::new).get_or_compute(&(n, theta.clone()), || Arc::new(build_jack_table(n, theta)))
}

fn build_jack_table(n: usize, theta: &Rational) -> JackTable {
    let change = basis_change(n);
    let size = change.parts.len();
    if theta.is_zero() {
        return JackTable { p_coords: change.m_in_p.clone() };
    }
    // ⟨p_ρ, p_σ⟩ = δ z_ρ θ^{-l(ρ)}
    let weights: Vec<Rational> = change
        .parts
        .iter()
        .map(|rho| Rational::from_integer(rho.centralizer_order()) / num::pow(theta.clone(), rho.len()))
        .collect();
    let inner = |u: &[Rational], v: &[Rational]| -> Rational {
        u.iter().zip(v).zip(&weights).map(|((a, b), w)| a * b * w).sum()
    };
    let mut p_coords: Vec<Vec<Rational>> = vec![Vec::new(); size];
    let mut norms: Vec<Rational> = vec![Rational::zero(); size];
    // reverse-lex ascending extends dominance, so orthogonalize from the bottom up
    for i in (0..size).rev() {
        let mut v = change.m_in_p[i].clone();
        for j in (i + 1)..size {
            let c = inner(&change.m_in_p[i], &p_coords[j]) / &norms[j];
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(&p_coords[j]) {
                *x -= &c * y;
            }
        }
        norms[i] = inner(&v, &v);
        p_coords[i] = v;
    }
    JackTable { p_coords }
}

/// `P_λ(·;θ)` in the monomial basis; `m_λ` at θ = 0.
pub fn jack_p(lambda: &YoungDiagram, theta: &Rational) -> SymFuncExpr {
    jack_p_powersum(lambda, theta).to_monomial()
}

/// `P_λ(·;θ)` in the power-sum basis.
pub fn jack_p_powersum(lambda: &YoungDiagram, theta: &Rational) -> SymFuncExpr {
    let n = lambda.size();
    let change = basis_change(n);
    let table = jack_table(n, theta);
    let row = &table.p_coords[change.index[lambda]];
    SymFuncExpr::from_terms(Basis::PowerSum, change.parts.iter().cloned().zip(row.iter().cloned()))
}

/// Re-expands `e` (homogeneous of degree `n`) in the Jack basis by peeling
/// off leading monomials in dominance order.
pub fn expand_in_jack_basis(e: &SymFuncExpr, n: usize, theta: &Rational) -> Result<BTreeMap<YoungDiagram, Rational>> {
    let mut rest = e.to_monomial();
    if rest.terms.keys().any(|l| l.size() != n) {
        return Err(Error::InvalidArgument(format!("expression is not homogeneous of degree {n}")));
    }
    let mut out = BTreeMap::new();
    for lambda in enumerate_partitions(n) {
        let c = rest.coefficient(&lambda);
        if c.is_zero() {
            continue;
        }
        let jack = jack_p(&lambda, theta).scale(&c);
        rest = rest.add(&jack.scale(&-Rational::one()))?;
        out.insert(lambda, c);
    }
    if !rest.is_zero() {
        return Err(Error::Consistency(format!("residual {rest} after Jack expansion")));
    }
    Ok(out)
}

/// Expands `p_1 · P_μ` in the Jack basis and checks every coefficient against
/// the closed-form edge multiplicity.
pub fn pieri_check(mu: &YoungDiagram, theta: &Rational) -> Result<BTreeMap<YoungDiagram, Rational>> {
    let product = jack_p_powersum(mu, theta).mul_powersum(&SymFuncExpr::powersum(YoungDiagram::from_parts(vec![1])));
    let coefficients = expand_in_jack_basis(&product, mu.size() + 1, theta)?;
    for lambda in enumerate_partitions(mu.size() + 1) {
        let got = coefficients.get(&lambda).cloned().unwrap_or_else(Rational::zero);
        let expected = chi_theta(mu, &lambda, theta);
        if got != expected {
            return Err(Error::Consistency(format!(
                "Pieri coefficient mismatch at mu={mu}, lambda={lambda}, theta={}: expansion gives {}, multiplicity formula gives {}",
                format_rational(theta),
                format_rational(&got),
                format_rational(&expected)
            )));
        }
    }
    Ok(coefficients)
}

/// `p*_r(λ;θ) = Σ_{i=1}^N (λ_i − θi)^r − (−θi)^r`.
pub fn shifted_powersum(r: usize, lambda: &YoungDiagram, theta: &Rational, vars: usize) -> Result<Rational> {
    if r == 0 {
        return Err(Error::InvalidArgument("shifted power sums start at r = 1".into()));
    }
    if vars < lambda.len() {
        return Err(Error::InvalidArgument(format!("N = {vars} is below the length {} of {lambda}", lambda.len())));
    }
    Ok(shifted_powersum_unchecked(r, lambda, theta))
}

fn shifted_powersum_unchecked(r: usize, lambda: &YoungDiagram, theta: &Rational) -> Rational {
    // rows beyond l(λ) contribute zero
    (1..=lambda.len())
        .map(|i| {
            let shift = theta * Rational::from_integer(BigInt::from(i));
            let part = Rational::from_integer(BigInt::from(lambda.row(i - 1)));
            num::pow(part - &shift, r) - num::pow(-shift, r)
        })
        .sum()
}

/// A polynomial in the shifted power sums: each key `ρ` stands for
/// `p*_{ρ_1} p*_{ρ_2} ⋯`, with the empty key the constant term.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ShiftedExpr {
    terms: BTreeMap<YoungDiagram, Rational>,
}

impl ShiftedExpr {
    pub fn from_terms(terms: impl IntoIterator<Item = (YoungDiagram, Rational)>) -> Self {
        let mut map = BTreeMap::new();
        for (rho, c) in terms {
            let entry = map.entry(rho).or_insert_with(Rational::zero);
            *entry += c;
        }
        map.retain(|_, c: &mut Rational| !c.is_zero());
        ShiftedExpr { terms: map }
    }

    pub fn generator(r: usize) -> Self {
        Self::from_terms([(YoungDiagram::from_parts(vec![r]), Rational::one())])
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms([(YoungDiagram::empty(), c)])
    }

    pub fn terms(&self) -> &BTreeMap<YoungDiagram, Rational> {
        &self.terms
    }

    /// Total degree, counting `p*_r` with degree `r`.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(YoungDiagram::size).max().unwrap_or(0)
    }

    pub fn evaluate(&self, lambda: &YoungDiagram, theta: &Rational) -> Rational {
        let mut cache: HashMap<usize, Rational> = HashMap::new();
        let mut total = Rational::zero();
        for (rho, c) in &self.terms {
            let mut term = c.clone();
            for &r in rho.rows() {
                term *= cache.entry(r).or_insert_with(|| shifted_powersum_unchecked(r, lambda, theta)).clone();
            }
            total += term;
        }
        total
    }

    /// Keeps the top-degree terms and reads each `p*_r` as `p_r`.
    pub fn top_degree_map(&self) -> SymFuncExpr {
        let top = self.degree();
        SymFuncExpr::from_terms(
            Basis::PowerSum,
            self.terms.iter().filter(|(rho, _)| rho.size() == top).map(|(rho, c)| (rho.clone(), c.clone())),
        )
    }
}

pub fn top_degree_map(e: &ShiftedExpr) -> SymFuncExpr {
    e.top_degree_map()
}

/// The shifted Jack polynomial `P*_μ(·;θ)` as a polynomial in `p*_r`, found
/// by interpolation: it has degree `|μ|`, equals `H_θ(μ)` at `μ` and vanishes
/// at every other diagram of size at most `|μ|`. `None` if the interpolation
/// system is singular at this θ.
pub fn shifted_jack(mu: &YoungDiagram, theta: &Rational) -> Option<Arc<ShiftedExpr>> {
    type Table = OnceMap<(YoungDiagram, Rational), Option<Arc<ShiftedExpr>>>;
    static TABLES: OnceLock<Table> = OnceLock::new();
    TABLES
        .get_or_init(OnceMap::new)
        .get_or_compute(&(mu.clone(), theta.clone()), || build_shifted_jack(mu, theta).map(Arc::new))
}

fn build_shifted_jack(mu: &YoungDiagram, theta: &Rational) -> Option<ShiftedExpr> {
    let m = mu.size();
    let nodes: Vec<YoungDiagram> = (0..=m).flat_map(enumerate_partitions).collect();
    // generator monomials of degree ≤ m are indexed by the same diagrams
    let matrix: Vec<Vec<Rational>> = nodes
        .iter()
        .map(|nu| {
            let sums: Vec<Rational> = (1..=m).map(|r| shifted_powersum_unchecked(r, nu, theta)).collect();
            nodes.iter().map(|rho| rho.rows().iter().map(|&r| sums[r - 1].clone()).product()).collect()
        })
        .collect();
    let rhs: Vec<Vec<Rational>> =
        nodes.iter().map(|nu| vec![if nu == mu { mu.hook_product(theta) } else { Rational::zero() }]).collect();
    let solution = solve_many(matrix, rhs)?;
    Some(ShiftedExpr::from_terms(nodes.into_iter().zip(solution.into_iter().map(|mut row| row.remove(0)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn d(rows: &[usize]) -> YoungDiagram {
        YoungDiagram::from_parts(rows.to_vec())
    }

    fn thetas() -> Vec<Rational> {
        vec![int(0), ratio(1, 3), ratio(1, 2), int(1), int(2)]
    }

    #[test]
    fn small_basis_changes() {
        assert_eq!(monomial_to_powersum(&SymFuncExpr::monomial(d(&[1]))), SymFuncExpr::powersum(d(&[1])));
        assert_eq!(monomial_to_powersum(&SymFuncExpr::monomial(d(&[2]))), SymFuncExpr::powersum(d(&[2])));
        let m11 = monomial_to_powersum(&SymFuncExpr::monomial(d(&[1, 1])));
        let expected = SymFuncExpr::from_terms(Basis::PowerSum, [(d(&[1, 1]), ratio(1, 2)), (d(&[2]), ratio(-1, 2))]);
        assert_eq!(m11, expected);
    }

    #[test]
    fn basis_change_round_trips_to_degree_eight() {
        for n in 0..=8 {
            for lambda in enumerate_partitions(n) {
                let m = SymFuncExpr::monomial(lambda.clone());
                assert_eq!(powersum_to_monomial(&monomial_to_powersum(&m)), m);
                let p = SymFuncExpr::powersum(lambda);
                assert_eq!(monomial_to_powersum(&powersum_to_monomial(&p)), p);
            }
        }
    }

    // brute-force monomial sum over distinct index assignments
    fn monomial_by_brute_force(lambda: &YoungDiagram, x: &[Rational]) -> Rational {
        fn go(parts: &[usize], x: &[Rational], used: &mut Vec<bool>) -> Rational {
            let Some((&first, rest)) = parts.split_first() else {
                return Rational::one();
            };
            let mut total = Rational::zero();
            for i in 0..x.len() {
                if !used[i] {
                    used[i] = true;
                    total += num::pow(x[i].clone(), first) * go(rest, x, used);
                    used[i] = false;
                }
            }
            total
        }
        let raw = go(lambda.rows(), x, &mut vec![false; x.len()]);
        // ordered assignments overcount each monomial by Π r_j!
        let overcount: BigInt = lambda.row_multiplicities().values().map(|&r| crate::rational::factorial(r)).product();
        raw / Rational::from_integer(overcount)
    }

    #[test]
    fn powersum_evaluation_matches_monomial_sums() {
        let x = vec![ratio(1, 2), ratio(1, 3), ratio(1, 7), ratio(2, 5)];
        for n in 0..=5 {
            for lambda in enumerate_partitions(n) {
                let via_p = SymFuncExpr::monomial(lambda.clone()).eval_at(&x);
                assert_eq!(via_p, monomial_by_brute_force(&lambda, &x), "{lambda}");
            }
        }
        let m11 = SymFuncExpr::monomial(d(&[1, 1]));
        assert!((eval_powersum_numeric(&m11, &[0.5, 0.25]) - 0.125).abs() < 1e-15);
        assert_eq!(eval_powersum_numeric(&SymFuncExpr::powersum(d(&[1])), &[0.5, 0.25]), 0.75);
        assert_eq!(eval_powersum_numeric(&SymFuncExpr::constant(Basis::PowerSum, int(3)), &[]), 3.0);
    }

    #[test]
    fn jack_two_rows() {
        for theta in thetas() {
            let p2 = jack_p(&d(&[2]), &theta);
            let c = int(2) * &theta / (int(1) + &theta);
            let expected = SymFuncExpr::from_terms(Basis::Monomial, [(d(&[2]), int(1)), (d(&[1, 1]), c)]);
            assert_eq!(p2, expected);
            assert_eq!(jack_p(&d(&[1]), &theta), SymFuncExpr::monomial(d(&[1])));
            assert_eq!(jack_p(&d(&[1, 1]), &theta), SymFuncExpr::monomial(d(&[1, 1])));
        }
    }

    #[test]
    fn jack_at_zero_is_monomial() {
        for n in 0..=8 {
            for lambda in enumerate_partitions(n) {
                assert_eq!(jack_p(&lambda, &int(0)), SymFuncExpr::monomial(lambda));
            }
        }
    }

    // Schur coefficient of m_μ is the Kostka number: semistandard tableaux of
    // shape λ and content μ, counted by peeling horizontal strips.
    fn kostka(lambda: &YoungDiagram, content: &[usize]) -> u64 {
        let Some((&last, rest)) = content.split_last() else {
            return u64::from(lambda.is_empty());
        };
        // remove a horizontal strip of size `last` from λ
        let mut total = 0;
        let rows = lambda.rows().to_vec();
        fn strips(rows: &[usize], i: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == rows.len() {
                if left == 0 {
                    out.push(current.clone());
                }
                return;
            }
            let lower = rows.get(i + 1).copied().unwrap_or(0);
            for take in 0..=left.min(rows[i] - lower) {
                current.push(rows[i] - take);
                strips(rows, i + 1, left - take, current, out);
                current.pop();
            }
        }
        let mut out = Vec::new();
        strips(&rows, 0, last, &mut Vec::new(), &mut out);
        for smaller in out {
            total += kostka(&YoungDiagram::from_parts(smaller), rest);
        }
        total
    }

    #[test]
    fn jack_at_one_is_schur() {
        for n in 0..=6 {
            for lambda in enumerate_partitions(n) {
                let expected = SymFuncExpr::from_terms(
                    Basis::Monomial,
                    enumerate_partitions(n).into_iter().map(|mu| {
                        let k = kostka(&lambda, mu.rows());
                        (mu, Rational::from_integer(k.into()))
                    }),
                );
                assert_eq!(jack_p(&lambda, &int(1)), expected, "{lambda}");
            }
        }
    }

    #[test]
    fn pieri_small_cases() {
        let out = pieri_check(&YoungDiagram::empty(), &ratio(1, 2)).unwrap();
        assert_eq!(out, BTreeMap::from([(d(&[1]), int(1))]));
        let out = pieri_check(&d(&[1]), &int(1)).unwrap();
        assert_eq!(out, BTreeMap::from([(d(&[2]), int(1)), (d(&[1, 1]), int(1))]));
        let out = pieri_check(&d(&[1]), &ratio(1, 2)).unwrap();
        assert_eq!(out, BTreeMap::from([(d(&[2]), int(1)), (d(&[1, 1]), ratio(4, 3))]));
        let out = pieri_check(&d(&[1]), &int(0)).unwrap();
        assert_eq!(out, BTreeMap::from([(d(&[2]), int(1)), (d(&[1, 1]), int(2))]));
    }

    #[test]
    fn pieri_up_to_four() {
        for theta in thetas() {
            for n in 0..=4 {
                for mu in enumerate_partitions(n) {
                    pieri_check(&mu, &theta).unwrap();
                }
            }
        }
    }

    #[test]
    fn hook_products() {
        assert_eq!(hook_product(&YoungDiagram::empty(), &ratio(3, 7)), int(1));
        assert_eq!(hook_product(&d(&[2]), &ratio(3, 7)), int(2));
        assert_eq!(hook_product(&d(&[1, 1]), &int(1)), int(2));
    }

    #[test]
    fn shifted_powersum_examples() {
        assert_eq!(shifted_powersum(1, &d(&[3, 1]), &ratio(5, 2), 2).unwrap(), int(4));
        assert_eq!(shifted_powersum(2, &d(&[2]), &int(1), 1).unwrap(), int(0));
        assert_eq!(shifted_powersum(2, &YoungDiagram::empty(), &int(1), 0).unwrap(), int(0));
        assert!(shifted_powersum(2, &d(&[2, 1]), &int(1), 1).is_err());
        let lambda = d(&[4, 2, 2, 1]);
        for r in 1..=4 {
            let base = shifted_powersum(r, &lambda, &ratio(1, 3), 4).unwrap();
            for vars in 5..=9 {
                assert_eq!(shifted_powersum(r, &lambda, &ratio(1, 3), vars).unwrap(), base);
            }
        }
    }

    #[test]
    fn top_degree_worked_example() {
        let e = ShiftedExpr::from_terms([(d(&[3, 3, 1]), int(2)), (d(&[5, 2]), int(3)), (d(&[3, 1, 1]), int(-27))]);
        assert_eq!(e.degree(), 7);
        let expected = SymFuncExpr::from_terms(Basis::PowerSum, [(d(&[3, 3, 1]), int(2)), (d(&[5, 2]), int(3))]);
        assert_eq!(top_degree_map(&e), expected);
        assert_eq!(ShiftedExpr::generator(4).top_degree_map(), SymFuncExpr::powersum(d(&[4])));
        assert_eq!(ShiftedExpr::constant(int(5)).top_degree_map(), SymFuncExpr::constant(Basis::PowerSum, int(5)));
    }

    #[test]
    fn shifted_jack_characterization() {
        for theta in [ratio(1, 2), int(1), int(2)] {
            for m in 0..=4 {
                for mu in enumerate_partitions(m) {
                    let poly = shifted_jack(&mu, &theta).expect("nonsingular for positive theta");
                    assert_eq!(poly.evaluate(&mu, &theta), mu.hook_product(&theta));
                    for size in 0..=m + 2 {
                        for nu in enumerate_partitions(size) {
                            if !nu.contains(&mu) {
                                assert_eq!(poly.evaluate(&nu, &theta), int(0), "{mu} at {nu}");
                            }
                        }
                    }
                    // the top-degree part is the ordinary Jack polynomial
                    assert_eq!(poly.top_degree_map(), jack_p_powersum(&mu, &theta), "{mu}");
                }
            }
        }
        let p1 = shifted_jack(&d(&[1]), &int(1)).unwrap();
        assert_eq!(p1.evaluate(&d(&[5, 3]), &int(1)), int(8));
    }
}
