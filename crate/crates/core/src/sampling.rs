//! Dirichlet, Poisson-Dirichlet and multiple Poisson-Dirichlet samplers,
//! Monte Carlo estimates of Ewens weights, and correlation functions.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Gamma};
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::group::FiniteGroupData;
use crate::partition::MultiPartition;
use crate::rational::{to_f64, Rational};
use crate::symfunc::SymFuncExpr;

/// Default stick-breaking cutoff: stop once the unbroken remainder is below it.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Samples per Monte Carlo batch; each batch draws from its own stream.
pub const BATCH_SIZE: usize = 4096;

/// Smallest sample count accepted by [`mc_estimate_ewens`].
pub const MIN_SAMPLES: usize = 1000;

/// A reproducible random stream: ChaCha8 keyed by `seed`, on stream `id`.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(id);
        RngStream { seed, id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn id(&self) -> u64 {
        self.id
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn check_positive(params: &[f64]) -> Result<()> {
    if params.is_empty() || params.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::InvalidArgument(format!("parameters must be positive and finite, got {params:?}")));
    }
    Ok(())
}

/// Dirichlet(T) via normalized Gamma(T_l, 1) draws.
pub fn sample_dirichlet(big_t: &[f64], rng: &mut impl RngCore) -> Result<Vec<f64>> {
    check_positive(big_t)?;
    if big_t.len() == 1 {
        return Ok(vec![1.0]);
    }
    let draws: Vec<f64> = big_t.iter().map(|&t| Gamma::new(t, 1.0).expect("positive shape").sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    Ok(draws.into_iter().map(|g| g / total).collect())
}

/// Ranked atoms of a truncated PD(t) draw and the unbroken remainder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PdSample {
    pub atoms: Vec<f64>,
    pub tail: f64,
}

/// Stick-breaking with Beta(1, t) fractions until the remainder drops below
/// `epsilon`; atoms are returned in decreasing order.
pub fn sample_pd(t: f64, rng: &mut impl RngCore, epsilon: f64) -> Result<PdSample> {
    check_positive(&[t])?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let fraction = Beta::new(1.0, t).expect("positive parameters");
    let mut remaining = 1.0f64;
    let mut atoms = Vec::new();
    while remaining >= epsilon {
        let piece = remaining * fraction.sample(rng);
        atoms.push(piece);
        remaining -= piece;
    }
    atoms.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(PdSample { atoms, tail: remaining })
}

/// One draw of `(δ^(1)x^(1), …, δ^(k)x^(k))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MpdSample {
    pub x: Vec<Vec<f64>>,
    pub delta: Vec<f64>,
    pub truncation_mass: Vec<f64>,
}

/// `T_l = t_l/ζ_l`.
pub fn component_parameters(t: &[f64], zeta: &[f64]) -> Result<Vec<f64>> {
    if t.len() != zeta.len() {
        return Err(Error::SizeMismatch(format!("{} parameters for {} classes", t.len(), zeta.len())));
    }
    check_positive(t)?;
    check_positive(zeta)?;
    Ok(t.iter().zip(zeta).map(|(t, z)| t / z).collect())
}

/// Independent PD(T_l) sequences scaled by a Dirichlet(T) weight vector.
pub fn sample_mpd(t: &[f64], zeta: &[f64], rng: &mut impl RngCore, epsilon: f64) -> Result<MpdSample> {
    let big_t = component_parameters(t, zeta)?;
    sample_mpd_components(&big_t, rng, epsilon)
}

fn sample_mpd_components(big_t: &[f64], rng: &mut impl RngCore, epsilon: f64) -> Result<MpdSample> {
    let delta = sample_dirichlet(big_t, rng)?;
    let mut atoms = Vec::with_capacity(big_t.len());
    let mut tail = Vec::with_capacity(big_t.len());
    // child generators keep the parent's consumption independent of epsilon
    let seeds: Vec<u64> = big_t.iter().map(|_| rng.next_u64()).collect();
    for ((&t, &d), seed) in big_t.iter().zip(&delta).zip(seeds) {
        let pd = sample_pd(t, &mut ChaCha8Rng::seed_from_u64(seed), epsilon)?;
        atoms.push(pd.atoms.into_iter().map(|x| x * d).collect());
        tail.push(pd.tail * d);
    }
    Ok(MpdSample { x: atoms, delta, truncation_mass: tail })
}

/// `count` MPD draws; draw `i` comes from batch `i / BATCH_SIZE` on its own
/// stream, so the output is independent of the thread count.
pub fn sample_mpd_many(t: &[f64], zeta: &[f64], seed: u64, count: usize, epsilon: f64) -> Result<Vec<MpdSample>> {
    let big_t = component_parameters(t, zeta)?;
    let batches: Vec<Vec<MpdSample>> = (0..count.div_ceil(BATCH_SIZE))
        .into_par_iter()
        .map(|b| {
            let mut rng = RngStream::new(seed, b as u64);
            (0..BATCH_SIZE.min(count - b * BATCH_SIZE))
                .map(|_| sample_mpd_components(&big_t, &mut rng, epsilon))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(batches.into_iter().flatten().collect())
}

/// Running mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
    }

    fn combine(self, other: Moments) -> Moments {
        if self.count == 0.0 {
            return other;
        }
        if other.count == 0.0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * other.count / count,
            m2: self.m2 + other.m2 + delta * delta * self.count * other.count / count,
        }
    }

    fn standard_error(&self) -> f64 {
        if self.count < 2.0 {
            return f64::NAN;
        }
        (self.m2 / (self.count - 1.0) / self.count).sqrt()
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Averages `f` over `samples` draws, split into fixed batches on streams
/// `0, 1, …` of `seed`; the result does not depend on the thread count.
pub fn monte_carlo<F>(samples: usize, seed: u64, f: F) -> McEstimate
where
    F: Fn(&mut RngStream) -> f64 + Sync,
{
    let batches = samples.div_ceil(BATCH_SIZE);
    let moments: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = RngStream::new(seed, b as u64);
            let size = BATCH_SIZE.min(samples - b * BATCH_SIZE);
            let mut m = Moments::default();
            for _ in 0..size {
                m.push(f(&mut rng));
            }
            m
        })
        .collect();
    let total = moments.into_iter().fold(Moments::default(), Moments::combine);
    McEstimate { estimate: total.mean, std_error: total.standard_error(), samples }
}

/// A power-sum polynomial with float coefficients, evaluated with `p_1`
/// supplied separately.
struct FloatPolynomial {
    terms: Vec<(Vec<usize>, f64)>,
    max_power: usize,
}

impl FloatPolynomial {
    fn new(expr: &SymFuncExpr) -> Self {
        let expr = expr.to_powersum();
        let terms: Vec<(Vec<usize>, f64)> =
            expr.terms().iter().map(|(rho, c)| (rho.rows().to_vec(), to_f64(c))).collect();
        let max_power = terms.iter().flat_map(|(rho, _)| rho.iter().copied()).max().unwrap_or(0);
        FloatPolynomial { terms, max_power }
    }

    fn eval(&self, atoms: &[f64], mass: f64) -> f64 {
        let mut powers = vec![0.0; self.max_power + 1];
        if self.max_power >= 1 {
            powers[1] = mass;
        }
        for (r, power) in powers.iter_mut().enumerate().skip(2) {
            *power = atoms.iter().map(|a| a.powi(r as i32)).sum();
        }
        self.terms.iter().map(|(rho, c)| c * rho.iter().map(|&r| powers[r]).product::<f64>()).sum()
    }
}

/// Monte Carlo estimate of the multiple Ewens weight of `Λ` from its integral
/// representation: the average over MPD draws of
/// `(n!/Π_l Π_i λ^(l)_i!) Π_l m_{λ^(l)}(δ^(l)x^(l))`.
pub fn mc_estimate_ewens(
    lambda: &MultiPartition,
    t: &[Rational],
    group: &FiniteGroupData,
    seed: u64,
    samples: usize,
    epsilon: f64,
) -> Result<McEstimate> {
    if lambda.k() != group.k() || t.len() != group.k() {
        return Err(Error::ComponentMismatch { expected: group.k(), got: lambda.k().min(t.len()) });
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let t_float: Vec<f64> = t.iter().map(to_f64).collect();
    let zeta: Vec<f64> = group.zetas().iter().map(to_f64).collect();
    let big_t = component_parameters(&t_float, &zeta)?;
    let denom: num::BigInt = lambda.components().iter().map(|c| c.row_factorial_product()).product();
    let prefactor = to_f64(&(crate::rational::factorial_q(lambda.total()) / Rational::from_integer(denom)));
    let polys: Vec<FloatPolynomial> =
        lambda.components().iter().map(|c| FloatPolynomial::new(&SymFuncExpr::monomial(c.clone()))).collect();
    Ok(monte_carlo(samples, seed, |rng| {
        let draw = sample_mpd_components(&big_t, rng, epsilon).expect("parameters validated");
        let value: f64 = polys.iter().enumerate().map(|(l, poly)| poly.eval(&draw.x[l], draw.delta[l])).product();
        // monomials are non-negative; clamp float cancellation noise
        (prefactor * value).max(0.0)
    }))
}

/// `t^n/(x_1⋯x_n) (1 − Σx)^{t−1}` on the open simplex, zero elsewhere.
pub fn pd_correlation(points: &[f64], t: f64) -> f64 {
    let total: f64 = points.iter().sum();
    if points.iter().any(|&x| x <= 0.0) || total >= 1.0 {
        return 0.0;
    }
    let n = points.len() as i32;
    t.powi(n) / points.iter().product::<f64>() * (1.0 - total).powf(t - 1.0)
}

/// A quadrature result with its reliability flags.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationValue {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    /// Some `T_l ≤ n_l`, where the displayed Dirichlet exponent `T_l − n_l − 1`
    /// is below −1.
    pub singular_exponent: bool,
}

/// Double-exponential quadrature of `f` over `(a, b)` to relative tolerance `rel_tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> (f64, f64, bool) {
    if b <= a {
        return (0.0, 0.0, true);
    }
    let rough = quadrature::double_exponential::integrate(&f, a, b, 1e-6);
    let target = (rel_tol * rough.integral.abs()).max(1e-300);
    let fine = quadrature::double_exponential::integrate(&f, a, b, target);
    let converged = fine.error_estimate <= rel_tol * fine.integral.abs().max(f64::MIN_POSITIVE) || fine.integral == 0.0;
    (fine.integral, fine.error_estimate, converged)
}

/// Correlation function of the atoms of PD(t_1,…,t_k) with the
/// points `points[l]` in component `l`: the integral over the weight simplex
/// of `Γ(ΣT)/ΠΓ(T_l) Π δ_l^{T_l−n_l−1} ρ^{PD(T_l)}_{n_l}(x^(l)/δ_l)`.
pub fn mpd_correlation(points: &[Vec<f64>], big_t: &[f64], rel_tol: f64) -> Result<CorrelationValue> {
    check_positive(big_t)?;
    let k = big_t.len();
    if points.len() != k {
        return Err(Error::SizeMismatch(format!("{} point groups for {k} components", points.len())));
    }
    if k > 3 {
        return Err(Error::InvalidArgument("mpd_correlation supports at most 3 components".into()));
    }
    let singular_exponent = points.iter().zip(big_t).any(|(p, &t)| t <= p.len() as f64);
    if points.iter().flatten().any(|&x| x <= 0.0 || x >= 1.0) {
        return Ok(CorrelationValue { value: 0.0, error_estimate: 0.0, converged: true, singular_exponent });
    }
    if k == 1 {
        return Ok(CorrelationValue {
            value: pd_correlation(&points[0], big_t[0]),
            error_estimate: 0.0,
            converged: true,
            singular_exponent,
        });
    }
    let log_const = ln_gamma(big_t.iter().sum()) - big_t.iter().map(|&t| ln_gamma(t)).sum::<f64>();
    let constant = log_const.exp();
    let width = 1.0 - points.iter().flatten().sum::<f64>();
    if width <= 0.0 {
        return Ok(CorrelationValue { value: 0.0, error_estimate: 0.0, converged: true, singular_exponent });
    }
    // after rescaling, component l contributes T^n/Πx (δ_l − s_l)^{T_l − 1};
    // integrate over the gaps δ_l − s_l, which sum to `width`
    let prefactor: f64 =
        points.iter().zip(big_t).map(|(p, &t)| t.powi(p.len() as i32) / p.iter().product::<f64>()).product();
    let (value, error, converged) = if k == 2 {
        split_integrate(width, big_t[0], big_t[1], rel_tol, |_, _| 1.0)
    } else {
        let inner_ok = std::cell::Cell::new(true);
        let outer_exponent = big_t[1] + big_t[2];
        let outer = split_integrate(width, big_t[0], outer_exponent, rel_tol, |_, rest| {
            let inner = split_integrate(rest, big_t[1], big_t[2], rel_tol, |_, _| 1.0);
            if !inner.2 {
                inner_ok.set(false);
            }
            inner.0 / rest.powf(outer_exponent - 1.0)
        });
        (outer.0, outer.1, outer.2 && inner_ok.get())
    };
    let scale = constant * prefactor;
    Ok(CorrelationValue { value: scale * value, error_estimate: scale * error, converged, singular_exponent })
}

/// Integrates `a^{pa−1} b^{pb−1} f(a, b)` with `b = width − a` over
/// `a ∈ (0, width)`. Each half is integrated in `w = gap^p`, with the gap
/// that vanishes at its endpoint, so the power singularity drops out.
fn split_integrate(width: f64, pa: f64, pb: f64, rel_tol: f64, f: impl Fn(f64, f64) -> f64) -> (f64, f64, bool) {
    if width <= 0.0 {
        return (0.0, 0.0, true);
    }
    let half = width / 2.0;
    let left = integrate(
        |w| {
            let a = w.powf(1.0 / pa);
            (width - a).powf(pb - 1.0) * f(a, width - a) / pa
        },
        0.0,
        half.powf(pa),
        rel_tol,
    );
    let right = integrate(
        |w| {
            let b = w.powf(1.0 / pb);
            (width - b).powf(pa - 1.0) * f(width - b, b) / pb
        },
        0.0,
        half.powf(pb),
        rel_tol,
    );
    (left.0 + right.0, left.1 + right.1, left.2 && right.2)
}
