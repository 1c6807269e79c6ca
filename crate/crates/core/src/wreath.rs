//! Elements of the wreath product G∼S(n), their conjugacy types and class sizes.

use num::BigInt;

use crate::error::{Error, Result};
use crate::group::FiniteGroupData;
use crate::partition::{MultiPartition, YoungDiagram};
use crate::rational::{factorial, Rational};

/// Default cap on `|G|^n · n!` for exhaustive enumeration.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// `((g_1,…,g_n), s)` with `s` in 0-based one-line form: `perm[i] = s(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    colors: Vec<usize>,
    perm: Vec<usize>,
}

impl WreathElement {
    pub fn new(colors: Vec<usize>, perm: Vec<usize>) -> Result<Self> {
        if colors.len() != perm.len() {
            return Err(Error::SizeMismatch(format!("{} colors for a permutation of {}", colors.len(), perm.len())));
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(WreathElement { colors, perm })
    }

    /// Builds an element from a 1-based one-line permutation.
    pub fn from_one_based(colors: Vec<usize>, perm: &[usize]) -> Result<Self> {
        if perm.contains(&0) {
            return Err(Error::InvalidArgument("one-line permutation entries start at 1".into()));
        }
        Self::new(colors, perm.iter().map(|p| p - 1).collect())
    }

    pub fn identity(n: usize, group: &FiniteGroupData) -> Self {
        WreathElement { colors: vec![group.identity(); n], perm: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self, group: &FiniteGroupData) -> Self {
        let n = self.n();
        let mut inv_perm = vec![0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            inv_perm[p] = i;
        }
        let colors = (0..n).map(|j| group.inverse(self.colors[self.perm[j]])).collect();
        WreathElement { colors, perm: inv_perm }
    }

    /// Cycles of the permutation, each starting at its smallest point and
    /// following `i ↦ s(i)`.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.perm[cur];
            }
            out.push(cycle);
        }
        out
    }

    /// `g_{i_r} ⋯ g_{i_1}` for a cycle `(i_1 … i_r)` with `s(i_1) = i_2`.
    pub fn cycle_product(&self, cycle: &[usize], group: &FiniteGroupData) -> usize {
        cycle.iter().fold(group.identity(), |acc, &i| group.mul(self.colors[i], acc))
    }

    /// `[x]_{c_l}` for every class: the number of cycles whose cycle-product lies in `c_l`.
    pub fn cycle_class_counts(&self, group: &FiniteGroupData) -> Vec<usize> {
        let mut counts = vec![0; group.k()];
        for cycle in self.cycles() {
            counts[group.class_of(self.cycle_product(&cycle, group))] += 1;
        }
        counts
    }
}

/// `((g_i h_{s⁻¹(i)})_i, s∘t)`.
pub fn wreath_multiply(x: &WreathElement, y: &WreathElement, group: &FiniteGroupData) -> Result<WreathElement> {
    let n = x.n();
    if y.n() != n {
        return Err(Error::SizeMismatch(format!("cannot multiply elements of G~S({n}) and G~S({})", y.n())));
    }
    let mut s_inv = vec![0; n];
    for (i, &p) in x.perm.iter().enumerate() {
        s_inv[p] = i;
    }
    let colors = (0..n).map(|i| group.mul(x.colors[i], y.colors[s_inv[i]])).collect();
    let perm = (0..n).map(|i| x.perm[y.perm[i]]).collect();
    Ok(WreathElement { colors, perm })
}

/// The multipartition whose component `l` lists the lengths of cycles with
/// cycle-product in class `c_l`.
pub fn conjugacy_type(x: &WreathElement, group: &FiniteGroupData) -> MultiPartition {
    let mut parts = vec![Vec::new(); group.k()];
    for cycle in x.cycles() {
        parts[group.class_of(x.cycle_product(&cycle, group))].push(cycle.len());
    }
    MultiPartition::new(parts.into_iter().map(YoungDiagram::from_parts).collect()).expect("k >= 1")
}

/// Size of the conjugacy class of type `Λ` in `G∼S(n)`.
pub fn class_size(lambda: &MultiPartition, group: &FiniteGroupData) -> Result<Rational> {
    if lambda.k() != group.k() {
        return Err(Error::ComponentMismatch { expected: group.k(), got: lambda.k() });
    }
    let n = lambda.total();
    let order = BigInt::from(group.order());
    let mut numer = factorial(n) * num::pow(order, n);
    let mut denom = BigInt::from(1);
    for (l, diagram) in lambda.components().iter().enumerate() {
        for (&j, &r) in &diagram.row_multiplicities() {
            denom *= num::pow(BigInt::from(j), r) * factorial(r);
        }
        let zeta = group.zeta(l);
        let zeta_pow = num::pow(zeta, diagram.len());
        numer *= zeta_pow.denom();
        denom *= zeta_pow.numer();
    }
    Ok(Rational::new(numer, denom))
}

/// Enumeration budget: `MPK_BUDGET` if set and parseable, else [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u128 {
    std::env::var("MPK_BUDGET").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// `|G|^n · n!`, saturating.
pub fn wreath_order(n: usize, group: &FiniteGroupData) -> u128 {
    let mut total: u128 = 1;
    for i in 1..=n {
        total = total.saturating_mul(group.order() as u128).saturating_mul(i as u128);
    }
    total
}

/// Every element of `G∼S(n)` exactly once, provided the order fits `budget`.
pub fn enumerate_wreath(n: usize, group: &FiniteGroupData, budget: u128) -> Result<WreathIter<'_>> {
    let needed = wreath_order(n, group);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(WreathIter { group, perms: permutations(n), perm_idx: 0, colors: vec![0; n], done: false })
}

pub struct WreathIter<'g> {
    group: &'g FiniteGroupData,
    perms: Vec<Vec<usize>>,
    perm_idx: usize,
    colors: Vec<usize>,
    done: bool,
}

impl Iterator for WreathIter<'_> {
    type Item = WreathElement;

    fn next(&mut self) -> Option<WreathElement> {
        if self.done || self.perm_idx >= self.perms.len() {
            return None;
        }
        let item = WreathElement { colors: self.colors.clone(), perm: self.perms[self.perm_idx].clone() };
        // odometer over colors, then advance the permutation
        let order = self.group.order();
        let mut pos = 0;
        loop {
            if pos == self.colors.len() {
                self.colors.iter_mut().for_each(|c| *c = 0);
                self.perm_idx += 1;
                if self.perm_idx >= self.perms.len() {
                    self.done = true;
                }
                break;
            }
            self.colors[pos] += 1;
            if self.colors[pos] < order {
                break;
            }
            self.colors[pos] = 0;
            pos += 1;
        }
        Some(item)
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("pivot exists");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}
