//! The branching graph over multipartitions: edge multiplicities, path-count
//! dimensions, the Martin kernel, the propagator and the graph Laplacian.

use std::collections::HashMap;
use std::sync::Arc;

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteGroupData;
use crate::memo::OnceMap;
use crate::partition::{MultiPartition, YoungDiagram};
use crate::rational::{factorial_q, falling, format_rational, Rational};
use crate::symfunc::shifted_jack;

/// Levels up to which the two DIM routes and the two Martin-kernel routes
/// are compared on every call (when cross-checking is enabled).
pub const CROSS_CHECK_LIMIT: usize = 7;

/// Jack edge multiplicity `χ_θ(μ, λ)`; zero unless `λ` is `μ` plus one box.
/// At θ = 0 this is the Kingman multiplicity `r_L(λ)`, `L` the length of the
/// row of `λ` that received the box.
pub fn chi_theta(mu: &YoungDiagram, lambda: &YoungDiagram, theta: &Rational) -> Rational {
    let Some((new_row, new_col)) = mu.added_box(lambda) else {
        return Rational::zero();
    };
    if theta.is_zero() {
        let row_len = lambda.row(new_row);
        return Rational::from_integer(lambda.multiplicity(row_len).into());
    }
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let col_height = mu.column(new_col);
    let mut acc = Rational::one();
    for i in 0..col_height {
        // 1-based arm and leg of the box (i+1, new_col+1)
        let arm = Rational::from_integer((mu.row(i) - new_col - 1).into());
        let leg = Rational::from_integer((col_height - i - 1).into());
        let num = (&arm + (&leg + &two) * theta) * (&arm + &one + &leg * theta);
        let den = (&arm + &one + (&leg + &one) * theta) * (&arm + (&leg + &one) * theta);
        acc *= num / den;
    }
    acc
}

/// `dim_0(λ) = |λ|!/Π λ_i!`.
pub fn kingman_dim(lambda: &YoungDiagram) -> Rational {
    factorial_q(lambda.size()) / Rational::from_integer(lambda.row_factorial_product())
}

/// Memoized single-graph dimensions `dim_θ(μ, λ)` at a fixed θ.
pub struct JackGraph {
    theta: Rational,
    memo: OnceMap<(YoungDiagram, YoungDiagram), Rational>,
}

impl JackGraph {
    pub fn new(theta: Rational) -> Self {
        JackGraph { theta, memo: OnceMap::new() }
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    /// Weighted count of monotone paths from `μ` up to `λ`.
    pub fn dim(&self, mu: &YoungDiagram, lambda: &YoungDiagram) -> Rational {
        if !lambda.contains(mu) {
            return Rational::zero();
        }
        if mu == lambda {
            return Rational::one();
        }
        self.memo.get_or_compute(&(mu.clone(), lambda.clone()), || {
            lambda
                .predecessors()
                .into_iter()
                .filter(|(_, nu)| nu.contains(mu))
                .map(|(_, nu)| self.dim(mu, &nu) * chi_theta(&nu, lambda, &self.theta))
                .sum()
        })
    }

    /// `P*_μ(λ;θ) = |λ|↓|μ| · dim_θ(μ,λ)/dim_θ(λ)`.
    pub fn shifted_jack_ratio(&self, mu: &YoungDiagram, lambda: &YoungDiagram) -> Rational {
        if lambda.size() < mu.size() || !lambda.contains(mu) {
            return Rational::zero();
        }
        let full = self.dim(&YoungDiagram::empty(), lambda);
        falling(lambda.size(), mu.size()) * self.dim(mu, lambda) / full
    }
}

pub fn dim_theta(mu: &YoungDiagram, lambda: &YoungDiagram, theta: &Rational) -> Rational {
    JackGraph::new(theta.clone()).dim(mu, lambda)
}

pub fn shifted_jack_eval(mu: &YoungDiagram, lambda: &YoungDiagram, theta: &Rational) -> Rational {
    JackGraph::new(theta.clone()).shifted_jack_ratio(mu, lambda)
}

/// The graph over `G` at one θ, with its memo tables. Cheap to create;
/// discard it to release memory.
pub struct GraphContext {
    group: Arc<FiniteGroupData>,
    dims: Vec<Rational>,
    jack: JackGraph,
    big: OnceMap<(MultiPartition, MultiPartition), Rational>,
    cross_check: bool,
}

impl GraphContext {
    pub fn new(group: &FiniteGroupData, theta: Rational) -> Result<Self> {
        if theta < Rational::zero() {
            return Err(Error::InvalidArgument(format!("theta must be non-negative, got {}", format_rational(&theta))));
        }
        let dims = (0..group.k()).map(|l| group.dim(l)).collect();
        Ok(GraphContext {
            group: Arc::new(group.clone()),
            dims,
            jack: JackGraph::new(theta),
            big: OnceMap::new(),
            cross_check: true,
        })
    }

    /// Enables or disables the internal route comparisons below
    /// [`CROSS_CHECK_LIMIT`].
    pub fn with_cross_check(mut self, on: bool) -> Self {
        self.cross_check = on;
        self
    }

    pub fn group(&self) -> &FiniteGroupData {
        &self.group
    }

    pub fn theta(&self) -> &Rational {
        self.jack.theta()
    }

    pub fn k(&self) -> usize {
        self.dims.len()
    }

    pub fn irreducible_dim(&self, l: usize) -> &Rational {
        &self.dims[l]
    }

    pub fn jack_graph(&self) -> &JackGraph {
        &self.jack
    }

    fn check_k(&self, lambda: &MultiPartition) -> Result<()> {
        if lambda.k() != self.k() {
            return Err(Error::ComponentMismatch { expected: self.k(), got: lambda.k() });
        }
        Ok(())
    }

    /// `Υ_θ(Λ, Λ̃) = d_l χ_θ(λ^(l), λ̃^(l))` when `Λ̃` adds a box to component `l`.
    pub fn upsilon(&self, lower: &MultiPartition, upper: &MultiPartition) -> Result<Rational> {
        self.check_k(lower)?;
        self.check_k(upper)?;
        Ok(match lower.cover_component(upper) {
            Some(l) => &self.dims[l] * chi_theta(lower.component(l), upper.component(l), self.theta()),
            None => Rational::zero(),
        })
    }

    fn upsilon_unchecked(&self, lower: &MultiPartition, l: usize, upper: &MultiPartition) -> Rational {
        &self.dims[l] * chi_theta(lower.component(l), upper.component(l), self.theta())
    }

    pub fn dim_theta(&self, mu: &YoungDiagram, lambda: &YoungDiagram) -> Rational {
        self.jack.dim(mu, lambda)
    }

    /// `DIM(Λ̃, Λ)` by the recursion over the last edge.
    pub fn big_dim_recursive(&self, lower: &MultiPartition, upper: &MultiPartition) -> Result<Rational> {
        self.check_k(lower)?;
        self.check_k(upper)?;
        Ok(self.big_dim_rec(lower, upper))
    }

    fn big_dim_rec(&self, lower: &MultiPartition, upper: &MultiPartition) -> Rational {
        if !upper.contains(lower) {
            return Rational::zero();
        }
        if lower == upper {
            return Rational::one();
        }
        self.big.get_or_compute(&(lower.clone(), upper.clone()), || {
            upper
                .covered_pairs()
                .into_iter()
                .filter(|(_, theta)| theta.contains(lower))
                .map(|(l, theta)| self.big_dim_rec(lower, &theta) * self.upsilon_unchecked(&theta, l, upper))
                .sum()
        })
    }

    /// `DIM(Λ̃, Λ) = (n−m)! Π_l d_l^{Δ_l}/Δ_l! · dim_θ(μ^(l), λ^(l))`.
    pub fn big_dim_closed(&self, lower: &MultiPartition, upper: &MultiPartition) -> Result<Rational> {
        self.check_k(lower)?;
        self.check_k(upper)?;
        if !upper.contains(lower) {
            return Ok(Rational::zero());
        }
        let mut acc = factorial_q(upper.total() - lower.total());
        for l in 0..self.k() {
            let (mu, lambda) = (lower.component(l), upper.component(l));
            let gap = lambda.size() - mu.size();
            acc *= num::pow(self.dims[l].clone(), gap) / factorial_q(gap) * self.jack.dim(mu, lambda);
        }
        Ok(acc)
    }

    /// `DIM(Λ̃, Λ)`, from the closed form, compared against the recursion when
    /// cross-checking is on and `|Λ| ≤ CROSS_CHECK_LIMIT`.
    pub fn big_dim(&self, lower: &MultiPartition, upper: &MultiPartition) -> Result<Rational> {
        let closed = self.big_dim_closed(lower, upper)?;
        if self.cross_check && upper.total() <= CROSS_CHECK_LIMIT {
            let recursive = self.big_dim_rec(lower, upper);
            if recursive != closed {
                return Err(Error::Consistency(format!(
                    "DIM({lower}, {upper}): recursion gives {}, closed form gives {}",
                    format_rational(&recursive),
                    format_rational(&closed)
                )));
            }
        }
        Ok(closed)
    }

    /// `DIM(Λ) = DIM(∅, Λ)`.
    pub fn dim(&self, lambda: &MultiPartition) -> Result<Rational> {
        self.big_dim(&MultiPartition::empty(self.k()), lambda)
    }

    /// `DIM(start, Λ)` for every `Λ ⊇ start` with `|Λ| ≤ max_level`, by a
    /// forward sweep over levels.
    pub fn dims_above(&self, start: &MultiPartition, max_level: usize) -> Result<HashMap<MultiPartition, Rational>> {
        self.check_k(start)?;
        let mut all = HashMap::new();
        let mut level: HashMap<MultiPartition, Rational> = HashMap::from([(start.clone(), Rational::one())]);
        for _ in start.total()..max_level {
            let mut next: HashMap<MultiPartition, Rational> = HashMap::new();
            for (lower, value) in &level {
                for (l, upper) in lower.covering_pairs() {
                    let weight = self.upsilon_unchecked(lower, l, &upper);
                    *next.entry(upper).or_insert_with(Rational::zero) += value * weight;
                }
            }
            all.extend(level);
            level = next;
        }
        all.extend(level);
        Ok(all)
    }

    /// `(1/n↓m) Π_l d_l^{−|μ^(l)|} P*_{μ^(l)}(λ^(l);θ)`, with `P*` from the
    /// interpolation polynomial (falling back to the dimension ratio if the
    /// interpolation is singular).
    pub fn martin_kernel_shifted(&self, lower: &MultiPartition, upper: &MultiPartition) -> Result<Rational> {
        self.check_k(lower)?;
        self.check_k(upper)?;
        let (m, n) = (lower.total(), upper.total());
        if m > n {
            return Err(Error::InvalidArgument(format!("level of {lower} exceeds level of {upper}")));
        }
        let mut acc = Rational::one() / falling(n, m);
        for l in 0..self.k() {
            let (mu, lambda) = (lower.component(l), upper.component(l));
            let value = match shifted_jack(mu, self.theta()) {
                Some(poly) => poly.evaluate(lambda, self.theta()),
                None => self.jack.shifted_jack_ratio(mu, lambda),
            };
            acc *= value / num::pow(self.dims[l].clone(), mu.size());
        }
        Ok(acc)
    }

    /// `K(Λ̃, Λ) = DIM(Λ̃, Λ)/DIM(Λ)`. Up to [`CROSS_CHECK_LIMIT`] both routes
    /// are computed and compared; beyond it the shifted-Jack route is used.
    pub fn martin_kernel(&self, lower: &MultiPartition, upper: &MultiPartition) -> Result<Rational> {
        self.check_k(lower)?;
        self.check_k(upper)?;
        let (m, n) = (lower.total(), upper.total());
        if m > n {
            return Err(Error::InvalidArgument(format!("level of {lower} exceeds level of {upper}")));
        }
        if n > CROSS_CHECK_LIMIT {
            return self.martin_kernel_shifted(lower, upper);
        }
        let definitional = self.big_dim(lower, upper)? / self.dim(upper)?;
        if self.cross_check {
            let shifted = self.martin_kernel_shifted(lower, upper)?;
            if shifted != definitional {
                return Err(Error::Consistency(format!(
                    "K({lower}, {upper}): DIM ratio gives {}, shifted Jack form gives {}",
                    format_rational(&definitional),
                    format_rational(&shifted)
                )));
            }
        }
        Ok(definitional)
    }

    /// `W(Λ, Λ̃) = DIM(Λ̃, Λ) DIM(Λ̃)/DIM(Λ)`.
    pub fn propagator(&self, upper: &MultiPartition, lower: &MultiPartition) -> Result<Rational> {
        if lower.total() > upper.total() {
            return Err(Error::InvalidArgument(format!("level of {lower} exceeds level of {upper}")));
        }
        Ok(self.big_dim(lower, upper)? * self.dim(lower)? / self.dim(upper)?)
    }

    /// `(Δf)(Λ) = −f(Λ) + Σ_{Λ ↗ Λ̃} Υ(Λ, Λ̃) f(Λ̃)`.
    pub fn laplacian_apply(&self, f: &HashMap<MultiPartition, Rational>, lambda: &MultiPartition) -> Result<Rational> {
        self.check_k(lambda)?;
        let value = |x: &MultiPartition| {
            f.get(x).cloned().ok_or_else(|| Error::InvalidArgument(format!("function undefined at {x}")))
        };
        let mut acc = -value(lambda)?;
        for (l, upper) in lambda.covering_pairs() {
            acc += self.upsilon_unchecked(lambda, l, &upper) * value(&upper)?;
        }
        Ok(acc)
    }
}

pub fn graph_laplacian_apply(
    f: &HashMap<MultiPartition, Rational>,
    lambda: &MultiPartition,
    ctx: &GraphContext,
) -> Result<Rational> {
    ctx.laplacian_apply(f, lambda)
}

/// Number of standard Young tableaux of shape `λ`, by removing corners.
pub fn standard_tableaux(lambda: &YoungDiagram) -> BigInt {
    fn go(lambda: &YoungDiagram, memo: &mut HashMap<YoungDiagram, BigInt>) -> BigInt {
        if lambda.is_empty() {
            return BigInt::one();
        }
        if let Some(v) = memo.get(lambda) {
            return v.clone();
        }
        let v = lambda.predecessors().iter().map(|(_, nu)| go(nu, memo)).sum();
        memo.insert(lambda.clone(), v);
        memo[lambda].clone()
    }
    go(lambda, &mut HashMap::new())
}
