//! Young diagrams, multiple partitions and the box relations between them.
//!
//! Diagrams are immutable values: adding or removing a box returns a new
//! diagram. Rows and columns are 0-based in the API; the text forms used by
//! the CLI (`3,1`, `3,1|-|2`) list row lengths only.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn empty() -> Self {
        YoungDiagram { rows: Vec::new() }
    }

    /// Builds a diagram from weakly decreasing positive row lengths.
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.contains(&0) {
            return Err(Error::InvalidArgument(format!("zero row in diagram {rows:?}")));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("rows not weakly decreasing: {rows:?}")));
        }
        Ok(YoungDiagram { rows })
    }

    /// Sorts and drops zero parts; for internal construction from counts.
    pub fn from_parts(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        YoungDiagram { rows: parts }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Row `i` (0-based), zero beyond the last row.
    pub fn row(&self, i: usize) -> usize {
        self.rows.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Number of rows, `l(λ)`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn conjugate(&self) -> YoungDiagram {
        let width = self.row(0);
        let rows = (0..width).map(|j| self.rows.iter().take_while(|&&r| r > j).count()).collect();
        YoungDiagram { rows }
    }

    /// Length of column `j` (0-based).
    pub fn column(&self, j: usize) -> usize {
        self.rows.iter().take_while(|&&r| r > j).count()
    }

    pub fn contains(&self, other: &YoungDiagram) -> bool {
        other.len() <= self.len() && other.rows.iter().zip(&self.rows).all(|(a, b)| a <= b)
    }

    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, &r)| (0..r).map(move |j| (i, j)))
    }

    /// Rows where a box can be added, in increasing row order (the last entry
    /// opens a new row).
    pub fn addable_rows(&self) -> Vec<usize> {
        (0..=self.len()).filter(|&i| i == 0 || self.rows[i - 1] > self.row(i)).collect()
    }

    /// Rows whose last box can be removed.
    pub fn removable_rows(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.row(i) > self.row(i + 1)).collect()
    }

    pub fn add_box(&self, row: usize) -> Option<YoungDiagram> {
        if row > self.len() || (row > 0 && self.rows[row - 1] <= self.row(row)) {
            return None;
        }
        let mut rows = self.rows.clone();
        if row == rows.len() {
            rows.push(1);
        } else {
            rows[row] += 1;
        }
        Some(YoungDiagram { rows })
    }

    pub fn remove_box(&self, row: usize) -> Option<YoungDiagram> {
        if row >= self.len() || self.row(row) <= self.row(row + 1) {
            return None;
        }
        let mut rows = self.rows.clone();
        rows[row] -= 1;
        if rows[row] == 0 {
            rows.pop();
        }
        Some(YoungDiagram { rows })
    }

    /// All diagrams obtained by adding one box, with the row of the new box.
    pub fn successors(&self) -> Vec<(usize, YoungDiagram)> {
        self.addable_rows().into_iter().map(|i| (i, self.add_box(i).expect("addable row"))).collect()
    }

    /// All diagrams obtained by removing one box, with the row it left.
    pub fn predecessors(&self) -> Vec<(usize, YoungDiagram)> {
        self.removable_rows().into_iter().map(|i| (i, self.remove_box(i).expect("removable row"))).collect()
    }

    /// If `bigger` is this diagram plus one box, the (row, column) of that box.
    pub fn added_box(&self, bigger: &YoungDiagram) -> Option<(usize, usize)> {
        if bigger.size() != self.size() + 1 || !bigger.contains(self) {
            return None;
        }
        (0..bigger.len()).find(|&i| bigger.row(i) != self.row(i)).map(|i| (i, self.row(i)))
    }

    /// `r_j(λ)`: the number of rows equal to `j`, for every occurring `j`.
    pub fn row_multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for &r in &self.rows {
            *counts.entry(r).or_insert(0) += 1;
        }
        counts
    }

    /// `z_λ = Π_j j^{r_j} r_j!`, the centralizer order of cycle type `λ` in `S(|λ|)`.
    pub fn centralizer_order(&self) -> BigInt {
        self.row_multiplicities().iter().map(|(&j, &r)| num::pow(BigInt::from(j), r) * factorial(r)).product()
    }

    /// `Π_i λ_i!`.
    pub fn row_factorial_product(&self) -> BigInt {
        self.rows.iter().map(|&r| factorial(r)).product()
    }

    pub fn multiplicity(&self, j: usize) -> usize {
        self.rows.iter().filter(|&&r| r == j).count()
    }

    /// Splits the boxes by the sign of the θ-content `c = j − θ i` (0-based
    /// `i`, `j`): `a` lists the row lengths of the strictly positive part,
    /// `b` the column lengths of the rest, both in decreasing order.
    pub fn theta_content_split(&self, theta: &Rational) -> (Vec<usize>, Vec<usize>) {
        let mut positive_rows = vec![0usize; self.len()];
        let mut negative_cols = vec![0usize; self.row(0)];
        for (i, j) in self.boxes() {
            let content = Rational::from_integer(j.into()) - theta * Rational::from_integer(i.into());
            if content > Rational::zero() {
                positive_rows[i] += 1;
            } else {
                negative_cols[j] += 1;
            }
        }
        let mut a: Vec<usize> = positive_rows.into_iter().filter(|&c| c > 0).collect();
        let mut b: Vec<usize> = negative_cols.into_iter().filter(|&c| c > 0).collect();
        a.sort_unstable_by(|x, y| y.cmp(x));
        b.sort_unstable_by(|x, y| y.cmp(x));
        (a, b)
    }

    /// `H_θ(λ) = Π (λ_i − j + θ(λ'_j − i) + 1)` over boxes (1-based form).
    pub fn hook_product(&self, theta: &Rational) -> Rational {
        let conj = self.conjugate();
        let mut acc = Rational::one();
        for (i, j) in self.boxes() {
            let arm = Rational::from_integer((self.rows[i] - j - 1).into());
            let leg = Rational::from_integer((conj.rows[j] - i - 1).into());
            acc *= arm + theta * leg + Rational::one();
        }
        acc
    }
}

impl TryFrom<Vec<usize>> for YoungDiagram {
    type Error = Error;

    fn try_from(rows: Vec<usize>) -> Result<Self> {
        YoungDiagram::new(rows)
    }
}

impl From<YoungDiagram> for Vec<usize> {
    fn from(d: YoungDiagram) -> Self {
        d.rows
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for YoungDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if s.is_empty() || s == "-" || s == "∅" {
            return Ok(YoungDiagram::empty());
        }
        let rows = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad row {p:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        YoungDiagram::new(rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPartition {
    components: Vec<YoungDiagram>,
}

impl MultiPartition {
    pub fn new(components: Vec<YoungDiagram>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("a multipartition needs at least one component".into()));
        }
        Ok(MultiPartition { components })
    }

    /// `Λ_0 = (∅, …, ∅)`.
    pub fn empty(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        MultiPartition { components: vec![YoungDiagram::empty(); k] }
    }

    pub fn single(d: YoungDiagram) -> Self {
        MultiPartition { components: vec![d] }
    }

    pub fn components(&self) -> &[YoungDiagram] {
        &self.components
    }

    pub fn component(&self, l: usize) -> &YoungDiagram {
        &self.components[l]
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn total(&self) -> usize {
        self.components.iter().map(YoungDiagram::size).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(YoungDiagram::size).collect()
    }

    pub fn contains(&self, other: &MultiPartition) -> bool {
        self.k() == other.k() && self.components.iter().zip(&other.components).all(|(a, b)| a.contains(b))
    }

    fn with_component(&self, l: usize, d: YoungDiagram) -> MultiPartition {
        let mut components = self.components.clone();
        components[l] = d;
        MultiPartition { components }
    }

    /// All `Λ̃` with `Λ ↗ Λ̃`, paired with the component that received the box.
    pub fn covering_pairs(&self) -> Vec<(usize, MultiPartition)> {
        let mut out = Vec::new();
        for (l, d) in self.components.iter().enumerate() {
            for (_, bigger) in d.successors() {
                out.push((l, self.with_component(l, bigger)));
            }
        }
        out
    }

    /// All `Λ̃` with `Λ̃ ↗ Λ`, paired with the component that lost a box.
    pub fn covered_pairs(&self) -> Vec<(usize, MultiPartition)> {
        let mut out = Vec::new();
        for (l, d) in self.components.iter().enumerate() {
            for (_, smaller) in d.predecessors() {
                out.push((l, self.with_component(l, smaller)));
            }
        }
        out
    }

    /// When `bigger` covers `self`, the component index where they differ.
    pub fn cover_component(&self, bigger: &MultiPartition) -> Option<usize> {
        if self.k() != bigger.k() || bigger.total() != self.total() + 1 {
            return None;
        }
        let mut differing = self.components.iter().zip(&bigger.components).enumerate().filter(|(_, (a, b))| a != b);
        let (l, (small, big)) = differing.next()?;
        if differing.next().is_some() {
            return None;
        }
        small.added_box(big).map(|_| l)
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join("|"))
    }
}

impl FromStr for MultiPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let components = s.split('|').map(str::parse).collect::<Result<Vec<YoungDiagram>>>()?;
        MultiPartition::new(components)
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<YoungDiagram> {
    fn go(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if remaining == 0 {
            out.push(YoungDiagram { rows: prefix.clone() });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            go(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Weak compositions of `n` into `k` parts, largest first part first.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            go(remaining - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    assert!(k >= 1, "k must be positive");
    let mut out = Vec::new();
    go(n, k, &mut Vec::new(), &mut out);
    out
}

/// All of `Y_n^(k)`: compositions of `n` (largest first component first),
/// then per-component partitions in reverse-lexicographic order.
pub fn enumerate_multipartitions(n: usize, k: usize) -> Vec<MultiPartition> {
    let tables: Vec<Vec<YoungDiagram>> = (0..=n).map(enumerate_partitions).collect();
    let mut out = Vec::new();
    for comp in compositions(n, k) {
        let mut partial: Vec<Vec<YoungDiagram>> = vec![Vec::new()];
        for &m in &comp {
            partial = partial
                .into_iter()
                .flat_map(|prefix| {
                    tables[m].iter().map(move |d| {
                        let mut next = prefix.clone();
                        next.push(d.clone());
                        next
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(|components| MultiPartition { components }));
    }
    out
}
