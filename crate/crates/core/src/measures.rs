//! Ewens measures on wreath products and on multipartitions, the ball-deletion
//! kernel, and exact verifiers for consistency, coherence and harmonicity.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use rayon::prelude::*;

use crate::branching::GraphContext;
use crate::error::{Error, Result};
use crate::group::FiniteGroupData;
use crate::partition::{compositions, enumerate_multipartitions, MultiPartition, YoungDiagram};
use crate::rational::{factorial_q, format_rational, rising, Rational};
use crate::wreath::WreathElement;

/// A (possibly unnormalized) measure on `Y_n^(k)`; absent keys weigh zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMeasure {
    pub n: usize,
    pub k: usize,
    pub weights: BTreeMap<MultiPartition, Rational>,
}

impl LevelMeasure {
    pub fn new(n: usize, k: usize) -> Self {
        LevelMeasure { n, k, weights: BTreeMap::new() }
    }

    pub fn weight(&self, lambda: &MultiPartition) -> Rational {
        self.weights.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.weights.values().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.total().is_one() && self.weights.values().all(|w| *w >= Rational::zero())
    }
}

/// Ewens parameters `t_l > 0` together with `T_l = t_l/ζ_{c_l}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EwensParams {
    t: Vec<Rational>,
    big_t: Vec<Rational>,
}

impl EwensParams {
    pub fn new(t: Vec<Rational>, group: &FiniteGroupData) -> Result<Self> {
        if t.len() != group.k() {
            return Err(Error::ComponentMismatch { expected: group.k(), got: t.len() });
        }
        if let Some(bad) = t.iter().find(|x| **x <= Rational::zero()) {
            return Err(Error::InvalidArgument(format!(
                "Ewens parameters must be positive, got {}",
                format_rational(bad)
            )));
        }
        let big_t = t.iter().enumerate().map(|(l, x)| x / group.zeta(l)).collect();
        Ok(EwensParams { t, big_t })
    }

    pub fn t(&self) -> &[Rational] {
        &self.t
    }

    /// `T_l = t_l/ζ_{c_l}`.
    pub fn big_t(&self) -> &[Rational] {
        &self.big_t
    }

    pub fn big_t_sum(&self) -> Rational {
        self.big_t.iter().sum()
    }
}

/// `Π t_l^{[x]_{c_l}} / (|G|^n (ΣT)_n)`.
pub fn ewens_weight(x: &WreathElement, params: &EwensParams, group: &FiniteGroupData) -> Rational {
    let counts = x.cycle_class_counts(group);
    let numer: Rational = params.t.iter().zip(&counts).map(|(t, &c)| num::pow(t.clone(), c)).product();
    let order = Rational::from_integer(group.order().into());
    numer / (num::pow(order, x.n()) * rising(&params.big_t_sum(), x.n()))
}

/// `n!/z_λ · t^{l(λ)}/(t)_n`.
pub fn ewens_single(lambda: &YoungDiagram, t: &Rational) -> Rational {
    let n = lambda.size();
    factorial_q(n) / Rational::from_integer(lambda.centralizer_order()) * num::pow(t.clone(), lambda.len())
        / rising(t, n)
}

/// The multiple Ewens measure of `Λ`.
pub fn ewens_multi(lambda: &MultiPartition, params: &EwensParams) -> Result<Rational> {
    if lambda.k() != params.big_t.len() {
        return Err(Error::ComponentMismatch { expected: params.big_t.len(), got: lambda.k() });
    }
    let n = lambda.total();
    let mut acc = factorial_q(n) / rising(&params.big_t_sum(), n);
    for (component, big_t) in lambda.components().iter().zip(&params.big_t) {
        let m = component.size();
        acc *= rising(big_t, m) / factorial_q(m) * ewens_single(component, big_t);
    }
    Ok(acc)
}

/// `ewens_multi` over all of `Y_n^(k)`.
pub fn ewens_level(n: usize, params: &EwensParams) -> LevelMeasure {
    let k = params.big_t.len();
    let weights = enumerate_multipartitions(n, k)
        .into_par_iter()
        .map(|lambda| {
            let w = ewens_multi(&lambda, params).expect("k matches by construction");
            (lambda, w)
        })
        .collect::<Vec<_>>();
    LevelMeasure { n, k, weights: weights.into_iter().collect() }
}

/// Probability of reaching `Λ̃` from `Λ` by deleting a uniformly chosen ball:
/// `(1/n) r_L(λ^(l)) L`, `L` the length of the row of `λ^(l)` that loses a box.
pub fn deletion_transition(upper: &MultiPartition, lower: &MultiPartition) -> Rational {
    let Some(l) = lower.cover_component(upper) else {
        return Rational::zero();
    };
    let (small, big) = (lower.component(l), upper.component(l));
    let (row, _) = small.added_box(big).expect("cover implies one added box");
    let length = big.row(row);
    Rational::new((big.multiplicity(length) * length).into(), upper.total().into())
}

/// Outcome of an exhaustive identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl CheckReport {
    fn from_results(results: Vec<Option<String>>) -> Self {
        let checked = results.len();
        let witness = results.into_iter().flatten().next();
        CheckReport { passed: witness.is_none(), checked, witness }
    }

    fn merge(self, other: CheckReport) -> CheckReport {
        CheckReport {
            passed: self.passed && other.passed,
            checked: self.checked + other.checked,
            witness: self.witness.or(other.witness),
        }
    }

    fn empty() -> Self {
        CheckReport { passed: true, checked: 0, witness: None }
    }
}

fn check_consecutive(
    lower_level: &LevelMeasure,
    upper_level: &LevelMeasure,
    transition: impl Fn(&MultiPartition, &MultiPartition) -> Result<Rational> + Sync,
) -> Result<CheckReport> {
    let results = enumerate_multipartitions(lower_level.n, lower_level.k)
        .into_par_iter()
        .map(|lower| -> Result<Option<String>> {
            let mut pushed = Rational::zero();
            for (_, upper) in lower.covering_pairs() {
                let w = upper_level.weight(&upper);
                if !w.is_zero() {
                    pushed += transition(&upper, &lower)? * w;
                }
            }
            let direct = lower_level.weight(&lower);
            Ok((pushed != direct).then(|| {
                format!(
                    "level {} at {lower}: measure {} but pushed-down mass {}",
                    lower_level.n,
                    format_rational(&direct),
                    format_rational(&pushed)
                )
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::from_results(results))
}

fn check_sequence(seq: &[LevelMeasure]) -> Result<()> {
    for pair in seq.windows(2) {
        if pair[1].n != pair[0].n + 1 || pair[1].k != pair[0].k {
            return Err(Error::InvalidArgument(format!("levels {} and {} are not consecutive", pair[0].n, pair[1].n)));
        }
    }
    Ok(())
}

/// Exact check of `𝓜_{n−1}(Λ̃) = Σ_Λ Prob(Λ̃|Λ) 𝓜_n(Λ)` at every consecutive pair.
pub fn check_mps_consistency(seq: &[LevelMeasure]) -> Result<CheckReport> {
    check_sequence(seq)?;
    let mut report = CheckReport::empty();
    for pair in seq.windows(2) {
        report = report.merge(check_consecutive(&pair[0], &pair[1], |u, l| Ok(deletion_transition(u, l)))?);
        if !report.passed {
            break;
        }
    }
    Ok(report)
}

/// Exact check of coherence along the graph:
/// `𝓜_{n−1}(Λ̃) = Σ_Λ Υ(Λ̃,Λ) DIM(Λ̃)/DIM(Λ) 𝓜_n(Λ)`.
pub fn check_coherence(seq: &[LevelMeasure], ctx: &GraphContext) -> Result<CheckReport> {
    check_sequence(seq)?;
    let mut report = CheckReport::empty();
    for pair in seq.windows(2) {
        let transition = |upper: &MultiPartition, lower: &MultiPartition| -> Result<Rational> {
            Ok(ctx.upsilon(lower, upper)? * ctx.dim(lower)? / ctx.dim(upper)?)
        };
        report = report.merge(check_consecutive(&pair[0], &pair[1], transition)?);
        if !report.passed {
            break;
        }
    }
    Ok(report)
}

/// Exact check of `φ(Λ̃) = Σ_Λ Υ(Λ̃,Λ) φ(Λ)` for every `Λ̃ ∈ Y_{n−1}^(k)`;
/// absent keys of `phi` count as zero.
pub fn check_harmonicity(phi: &HashMap<MultiPartition, Rational>, n: usize, ctx: &GraphContext) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("harmonicity relates levels n-1 and n, so n >= 1".into()));
    }
    let value = |x: &MultiPartition| phi.get(x).cloned().unwrap_or_else(Rational::zero);
    let results = enumerate_multipartitions(n - 1, ctx.k())
        .into_par_iter()
        .map(|lower| -> Result<Option<String>> {
            let mut sum = Rational::zero();
            for (_, upper) in lower.covering_pairs() {
                sum += ctx.upsilon(&lower, &upper)? * value(&upper);
            }
            let direct = value(&lower);
            Ok((sum != direct).then(|| {
                format!(
                    "at {lower}: phi = {} but the upward sum is {}",
                    format_rational(&direct),
                    format_rational(&sum)
                )
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::from_results(results))
}

/// `φ(Λ) = Π(τ_l)_{|λ^(l)|}/(Στ)_n · Π ψ_l(λ^(l))/d_l^{|λ^(l)|}` on `Y_n^(k)` for
/// every `n` in `levels`. Each `ψ_l` must cover all diagrams of the needed sizes.
pub fn harmonic_from_product(
    psi: &[HashMap<YoungDiagram, Rational>],
    tau: &[Rational],
    ctx: &GraphContext,
    levels: std::ops::RangeInclusive<usize>,
) -> Result<HashMap<MultiPartition, Rational>> {
    let k = ctx.k();
    if psi.len() != k || tau.len() != k {
        return Err(Error::ComponentMismatch { expected: k, got: psi.len().min(tau.len()) });
    }
    let tau_sum: Rational = tau.iter().sum();
    let mut out = HashMap::new();
    for n in levels {
        for lambda in enumerate_multipartitions(n, k) {
            let mut acc = Rational::one() / rising(&tau_sum, n);
            for (l, component) in lambda.components().iter().enumerate() {
                let value = psi[l]
                    .get(component)
                    .ok_or_else(|| Error::InvalidArgument(format!("psi_{} undefined at {component}", l + 1)))?;
                acc *= rising(&tau[l], component.size()) * value
                    / num::pow(ctx.irreducible_dim(l).clone(), component.size());
            }
            out.insert(lambda, acc);
        }
    }
    Ok(out)
}

/// `(n! Σ_{m_1+…+m_k=n} Π (T_l)_{m_l}/m_l!, (ΣT)_n)`.
pub fn pochhammer_simplex_identity(big_t: &[Rational], n: usize) -> Result<(Rational, Rational)> {
    if big_t.is_empty() {
        return Err(Error::InvalidArgument("need at least one parameter".into()));
    }
    let sum: Rational = compositions(n, big_t.len())
        .iter()
        .map(|comp| comp.iter().zip(big_t).map(|(&m, t)| rising(t, m) / factorial_q(m)).product::<Rational>())
        .sum();
    let lhs = factorial_q(n) * sum;
    let rhs = rising(&big_t.iter().sum(), n);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::{kingman_dim, GraphContext};
    use crate::partition::enumerate_partitions;
    use crate::rational::{int, ratio};
    use crate::wreath::{conjugacy_type, enumerate_wreath, DEFAULT_BUDGET};

    fn mp(s: &str) -> MultiPartition {
        s.parse().unwrap()
    }

    fn d(rows: &[usize]) -> YoungDiagram {
        YoungDiagram::from_parts(rows.to_vec())
    }

    #[test]
    fn single_ewens_examples() {
        let t = ratio(7, 3);
        assert_eq!(ewens_single(&d(&[1]), &t), int(1));
        assert_eq!(ewens_single(&d(&[2]), &t), int(1) / (&t + int(1)));
        assert_eq!(ewens_single(&d(&[1, 1]), &t), &t / (&t + int(1)));
        let total: Rational = enumerate_partitions(5).iter().map(|l| ewens_single(l, &t)).sum();
        assert_eq!(total, int(1));
    }

    #[test]
    fn wreath_weight_examples() {
        let z2 = FiniteGroupData::builtin("Z2").unwrap();
        let params = EwensParams::new(vec![int(1), int(1)], &z2).unwrap();
        assert_eq!(ewens_weight(&WreathElement::identity(2, &z2), &params, &z2), ratio(1, 8));
        let trivial = FiniteGroupData::builtin("trivial").unwrap();
        let t = ratio(3, 2);
        let params = EwensParams::new(vec![t.clone()], &trivial).unwrap();
        for x in enumerate_wreath(3, &trivial, DEFAULT_BUDGET).unwrap() {
            let cycles = x.cycles().len();
            assert_eq!(ewens_weight(&x, &params, &trivial), num::pow(t.clone(), cycles) / rising(&t, 3));
        }
        assert!(EwensParams::new(vec![int(0), int(1)], &z2).is_err());
        assert!(EwensParams::new(vec![int(1)], &z2).is_err());
    }

    #[test]
    fn pushforward_matches_multi_for_z2() {
        let z2 = FiniteGroupData::builtin("Z2").unwrap();
        let params = EwensParams::new(vec![ratio(1, 3), int(2)], &z2).unwrap();
        for n in 0..=3 {
            let mut buckets: HashMap<MultiPartition, Rational> = HashMap::new();
            for x in enumerate_wreath(n, &z2, DEFAULT_BUDGET).unwrap() {
                *buckets.entry(conjugacy_type(&x, &z2)).or_insert_with(Rational::zero) +=
                    ewens_weight(&x, &params, &z2);
            }
            for lambda in enumerate_multipartitions(n, 2) {
                assert_eq!(
                    buckets.get(&lambda).cloned().unwrap_or_else(Rational::zero),
                    ewens_multi(&lambda, &params).unwrap()
                );
            }
        }
    }

    #[test]
    fn multi_reduces_to_single_and_normalizes() {
        let trivial = FiniteGroupData::builtin("trivial").unwrap();
        let params = EwensParams::new(vec![ratio(5, 4)], &trivial).unwrap();
        for lambda in enumerate_partitions(5) {
            assert_eq!(
                ewens_multi(&MultiPartition::single(lambda.clone()), &params).unwrap(),
                ewens_single(&lambda, &ratio(5, 4))
            );
        }
        let z2 = FiniteGroupData::builtin("Z2").unwrap();
        let params = EwensParams::new(vec![int(1), int(2)], &z2).unwrap();
        assert!(ewens_level(4, &params).is_normalized());
    }

    #[test]
    fn deletion_examples() {
        assert_eq!(deletion_transition(&mp("1"), &mp("-")), int(1));
        assert_eq!(deletion_transition(&mp("2,1"), &mp("1,1")), ratio(2, 3));
        assert_eq!(deletion_transition(&mp("2,1"), &mp("2")), ratio(1, 3));
        assert_eq!(deletion_transition(&mp("2,1"), &mp("3")), int(0));
        for n in 1..=6 {
            for upper in enumerate_multipartitions(n, 2) {
                let total: Rational = upper.covered_pairs().iter().map(|(_, l)| deletion_transition(&upper, l)).sum();
                assert_eq!(total, int(1));
            }
        }
    }

    #[test]
    fn consistency_with_negative_control() {
        let trivial = FiniteGroupData::builtin("trivial").unwrap();
        let params = EwensParams::new(vec![int(1)], &trivial).unwrap();
        let mut seq: Vec<LevelMeasure> = (0..=6).map(|n| ewens_level(n, &params)).collect();
        assert!(check_mps_consistency(&seq).unwrap().passed);
        let key = mp("2,1,1");
        let bumped = seq[4].weight(&key) + ratio(1, 100);
        seq[4].weights.insert(key, bumped);
        let report = check_mps_consistency(&seq).unwrap();
        assert!(!report.passed);
        assert!(report.witness.is_some());
    }

    #[test]
    fn kingman_coherence_equals_deletion_consistency() {
        let s3 = FiniteGroupData::builtin("S3").unwrap();
        let ctx = GraphContext::new(&s3, int(0)).unwrap();
        for n in 1..=4 {
            for upper in enumerate_multipartitions(n, 3) {
                for (_, lower) in upper.covered_pairs() {
                    let via_graph =
                        ctx.upsilon(&lower, &upper).unwrap() * ctx.dim(&lower).unwrap() / ctx.dim(&upper).unwrap();
                    assert_eq!(via_graph, deletion_transition(&upper, &lower));
                }
            }
        }
    }

    #[test]
    fn harmonicity_checks() {
        let z2 = FiniteGroupData::builtin("Z2").unwrap();
        let ctx = GraphContext::new(&z2, int(0)).unwrap();
        let params = EwensParams::new(vec![ratio(1, 2), int(3)], &z2).unwrap();
        let mut phi = HashMap::new();
        for n in 0..=4 {
            for lambda in enumerate_multipartitions(n, 2) {
                let value = ewens_multi(&lambda, &params).unwrap() / ctx.dim(&lambda).unwrap();
                phi.insert(lambda, value);
            }
        }
        for n in 1..=4 {
            assert!(check_harmonicity(&phi, n, &ctx).unwrap().passed);
        }
        let ones: HashMap<_, _> = phi.keys().map(|k| (k.clone(), int(1))).collect();
        assert!(!check_harmonicity(&ones, 2, &ctx).unwrap().passed);
    }

    #[test]
    fn product_harmonic_from_single_ewens() {
        let s3 = FiniteGroupData::builtin("S3").unwrap();
        let ctx = GraphContext::new(&s3, int(0)).unwrap();
        let params = EwensParams::new(vec![ratio(1, 2), int(2), int(3)], &s3).unwrap();
        let psi: Vec<HashMap<YoungDiagram, Rational>> = params
            .big_t()
            .iter()
            .map(|t| {
                (0..=4)
                    .flat_map(enumerate_partitions)
                    .map(|l| {
                        let v = ewens_single(&l, t) / kingman_dim(&l);
                        (l, v)
                    })
                    .collect()
            })
            .collect();
        let phi = harmonic_from_product(&psi, params.big_t(), &ctx, 0..=4).unwrap();
        assert_eq!(phi[&MultiPartition::empty(3)], int(1));
        for (lambda, value) in &phi {
            assert_eq!(*value, ewens_multi(lambda, &params).unwrap() / ctx.dim(lambda).unwrap(), "{lambda}");
        }
        for n in 1..=4 {
            assert!(check_harmonicity(&phi, n, &ctx).unwrap().passed);
        }
    }

    #[test]
    fn pochhammer_identity_examples() {
        assert_eq!(pochhammer_simplex_identity(&[ratio(3, 7)], 0).unwrap(), (int(1), int(1)));
        let (l, r) = pochhammer_simplex_identity(&[ratio(3, 7)], 5).unwrap();
        assert_eq!((l.clone(), r), (rising(&ratio(3, 7), 5), l));
        let (l, r) = pochhammer_simplex_identity(&[ratio(1, 2), int(2), int(3)], 6).unwrap();
        assert_eq!(l, r);
    }
}
