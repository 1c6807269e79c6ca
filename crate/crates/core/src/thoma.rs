//! Points of the generalized Thoma set, the θ-extended power sums and Jack
//! functions evaluated there, the limiting kernels, and the embedding of
//! diagrams as Thoma points.

use num::{BigInt, FromPrimitive, One};
use serde_json::Value;

use crate::branching::GraphContext;
use crate::error::{Error, Result};
use crate::group::FiniteGroupData;
use crate::partition::{MultiPartition, YoungDiagram};
use crate::rational::{factorial_q, parse_rational, Rational};
use crate::scalar::Scalar;
use crate::symfunc::{jack_p_powersum, SymFuncExpr};

/// `ω = (α, β, δ)` with finitely many nonzero atoms per component; the dust
/// `δ^(l) − Σ(α+β)^(l)` is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct ThomaPoint<S> {
    pub alpha: Vec<Vec<S>>,
    pub beta: Vec<Vec<S>>,
    pub delta: Vec<S>,
}

impl<S: Scalar> ThomaPoint<S> {
    /// Validates shapes, ordering, the per-component mass bound and `Σδ = 1`
    /// (the last within `tol`; pass 0 for exact scalars).
    pub fn new(alpha: Vec<Vec<S>>, beta: Vec<Vec<S>>, delta: Vec<S>, tol: f64) -> Result<Self> {
        let k = delta.len();
        if k == 0 || alpha.len() != k || beta.len() != k {
            return Err(Error::InvalidArgument(format!(
                "alpha, beta and delta need the same positive number of components (got {}, {}, {k})",
                alpha.len(),
                beta.len()
            )));
        }
        let zero = S::zero();
        for (name, seqs) in [("alpha", &alpha), ("beta", &beta)] {
            for (l, seq) in seqs.iter().enumerate() {
                if seq.iter().any(|x| *x < zero) || seq.windows(2).any(|w| w[0] < w[1]) {
                    return Err(Error::InvalidArgument(format!(
                        "{name}^({}) must be non-negative and decreasing",
                        l + 1
                    )));
                }
            }
        }
        for l in 0..k {
            if delta[l] < zero {
                return Err(Error::InvalidArgument(format!("delta^({}) is negative", l + 1)));
            }
            let mass = sum(&alpha[l]) + sum(&beta[l]);
            if (mass - delta[l].clone()).to_float() > tol {
                return Err(Error::InvalidArgument(format!("atoms of component {} exceed delta", l + 1)));
            }
        }
        if (sum(&delta) - S::one()).to_float().abs() > tol {
            return Err(Error::InvalidArgument("delta weights must sum to 1".into()));
        }
        Ok(ThomaPoint { alpha, beta, delta })
    }

    pub fn k(&self) -> usize {
        self.delta.len()
    }

    pub fn has_beta(&self) -> bool {
        self.beta.iter().any(|b| b.iter().any(|x| !x.is_zero()))
    }
}

impl ThomaPoint<Rational> {
    pub fn to_float(&self) -> ThomaPoint<f64> {
        let conv = |v: &Vec<Rational>| v.iter().map(Scalar::to_float).collect::<Vec<f64>>();
        ThomaPoint {
            alpha: self.alpha.iter().map(conv).collect(),
            beta: self.beta.iter().map(conv).collect(),
            delta: conv(&self.delta),
        }
    }

    /// Parses `{"alpha": [[…]], "beta": [[…]], "delta": […]}` with entries as
    /// `"p/q"` strings or JSON numbers (converted exactly).
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let field = |name: &str| value.get(name).ok_or_else(|| Error::Schema(format!("missing key {name:?}")));
        let delta = scalar_list(field("delta")?)?;
        let nested = |name: &str| -> Result<Vec<Vec<Rational>>> {
            match value.get(name) {
                None => Ok(vec![Vec::new(); delta.len()]),
                Some(Value::Array(rows)) => rows.iter().map(scalar_list).collect(),
                Some(_) => Err(Error::Schema(format!("{name} must be an array of arrays"))),
            }
        };
        let (alpha, beta) = (nested("alpha")?, nested("beta")?);
        ThomaPoint::new(alpha, beta, delta, 0.0)
    }

    pub fn to_json(&self) -> Value {
        let conv = |v: &Vec<Rational>| {
            Value::Array(v.iter().map(|x| Value::String(crate::rational::format_rational(x))).collect())
        };
        serde_json::json!({
            "alpha": self.alpha.iter().map(conv).collect::<Vec<_>>(),
            "beta": self.beta.iter().map(conv).collect::<Vec<_>>(),
            "delta": conv(&self.delta),
        })
    }
}

fn scalar_list(v: &Value) -> Result<Vec<Rational>> {
    let Value::Array(items) = v else {
        return Err(Error::Schema(format!("expected an array, got {v}")));
    };
    items
        .iter()
        .map(|item| match item {
            Value::String(s) => parse_rational(s),
            Value::Number(num) => match parse_rational(&num.to_string()) {
                Ok(r) => Ok(r),
                // exponent notation: take the exact binary value of the float
                Err(_) => num
                    .as_f64()
                    .and_then(Rational::from_f64)
                    .ok_or_else(|| Error::Parse(format!("unrepresentable number {num}"))),
            },
            other => Err(Error::Schema(format!("expected a number or \"p/q\" string, got {other}"))),
        })
        .collect()
}

fn sum<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::zero(), |acc, x| acc + x.clone())
}

/// `p°_r` on component `l`: `δ^(l)` for r = 1, else `Σα^r + (−θ)^{r−1} Σβ^r`.
pub fn extended_powersum<S: Scalar>(r: usize, l: usize, omega: &ThomaPoint<S>, theta: &Rational) -> S {
    if r == 1 {
        return omega.delta[l].clone();
    }
    let alpha = omega.alpha[l].iter().fold(S::zero(), |acc, a| acc + a.powi(r));
    let beta = omega.beta[l].iter().fold(S::zero(), |acc, b| acc + b.powi(r));
    alpha + S::from_rational(&-theta.clone()).powi(r - 1) * beta
}

/// `P_λ(·;θ)` with every `p_r` replaced by `p°_r` on component `l`.
pub fn extended_jack<S: Scalar>(lambda: &YoungDiagram, l: usize, omega: &ThomaPoint<S>, theta: &Rational) -> S {
    jack_p_powersum(lambda, theta).eval_powersum(|r| extended_powersum(r, l, omega, theta))
}

/// `Σ_p (δ − Σx)^p/p! · m_{λ minus p parts equal to 1}(x)`.
pub fn extended_monomial<S: Scalar>(lambda: &YoungDiagram, x: &[S], delta: &S) -> Result<S> {
    let dust = delta.clone() - sum(x);
    if dust < S::zero() {
        return Err(Error::InvalidArgument("atoms exceed the available mass".into()));
    }
    let ones = lambda.multiplicity(1);
    let mut total = S::zero();
    for p in 0..=ones {
        let mut parts = lambda.rows().to_vec();
        parts.truncate(parts.len() - p);
        let m = SymFuncExpr::monomial(YoungDiagram::from_parts(parts)).eval_at(x);
        total = total + dust.powi(p) * S::from_rational(&(Rational::one() / factorial_q(p))) * m;
    }
    Ok(total)
}

/// `Π_l d_l^{−|λ^(l)|} P°_{λ^(l)}(ω^(l);θ)`.
pub fn kernel_theta<S: Scalar>(lambda: &MultiPartition, omega: &ThomaPoint<S>, ctx: &GraphContext) -> Result<S> {
    if lambda.k() != ctx.k() || omega.k() != ctx.k() {
        return Err(Error::ComponentMismatch { expected: ctx.k(), got: lambda.k().min(omega.k()) });
    }
    let mut acc = S::one();
    for (l, component) in lambda.components().iter().enumerate() {
        let scale = Rational::one() / num::pow(ctx.irreducible_dim(l).clone(), component.size());
        acc = acc * S::from_rational(&scale) * extended_jack(component, l, omega, ctx.theta());
    }
    Ok(acc)
}

/// `(n!/Π_l Π_i λ^(l)_i!) Π_l M_{λ^(l)}(α^(l), δ^(l))`, for points without β.
pub fn kernel_kingman<S: Scalar>(lambda: &MultiPartition, omega: &ThomaPoint<S>, group: &FiniteGroupData) -> Result<S> {
    if lambda.k() != group.k() || omega.k() != group.k() {
        return Err(Error::ComponentMismatch { expected: group.k(), got: lambda.k().min(omega.k()) });
    }
    if omega.has_beta() {
        return Err(Error::InvalidArgument("the Kingman kernel is defined for beta = 0 only".into()));
    }
    let denom: BigInt = lambda.components().iter().map(YoungDiagram::row_factorial_product).product();
    let mut acc = S::from_rational(&(factorial_q(lambda.total()) / Rational::from_integer(denom)));
    for (l, component) in lambda.components().iter().enumerate() {
        acc = acc * extended_monomial(component, &omega.alpha[l], &omega.delta[l])?;
    }
    Ok(acc)
}

/// `(1/n) W_Λ`: rows of the positive-content part and columns of the rest,
/// scaled by `1/n`, with `δ^(l) = |λ^(l)|/n`.
pub fn embed_diagram(lambda: &MultiPartition, theta: &Rational) -> Result<ThomaPoint<Rational>> {
    let n = lambda.total();
    if n == 0 {
        return Err(Error::InvalidArgument("cannot embed the empty multipartition".into()));
    }
    let scale = |v: Vec<usize>| v.into_iter().map(|x| Rational::new(x.into(), n.into())).collect::<Vec<_>>();
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut delta = Vec::new();
    for component in lambda.components() {
        let (a, b) = component.theta_content_split(theta);
        alpha.push(scale(a));
        beta.push(scale(b));
        delta.push(Rational::new(component.size().into(), n.into()));
    }
    ThomaPoint::new(alpha, beta, delta, 0.0)
}

/// `|K(Λ̃, Λ_n) − 𝕂_θ(Λ̃, (1/n)W_{Λ_n})|` along a sequence of growing levels.
pub fn asymptotic_gap(lower: &MultiPartition, sequence: &[MultiPartition], ctx: &GraphContext) -> Result<Vec<f64>> {
    if sequence.windows(2).any(|w| w[1].total() <= w[0].total()) {
        return Err(Error::InvalidArgument("sequence levels must be strictly increasing".into()));
    }
    sequence
        .iter()
        .map(|upper| {
            let kernel = ctx.martin_kernel(lower, upper)?;
            let limit = kernel_theta(lower, &embed_diagram(upper, ctx.theta())?, ctx)?;
            Ok((kernel - limit).to_float().abs())
        })
        .collect()
}

/// `|p*_r(λ)/n^r − (Σa^r + (−θ)^{r−1}Σb^r)/n^r|` with `(a, b)` the θ-content split.
pub fn shifted_powersum_gap(r: usize, lambda: &YoungDiagram, theta: &Rational) -> Result<f64> {
    let n = lambda.size();
    if n == 0 {
        return Err(Error::InvalidArgument("empty diagram".into()));
    }
    let shifted = crate::symfunc::shifted_powersum(r, lambda, theta, lambda.len())?;
    let (a, b) = lambda.theta_content_split(theta);
    let pow_sum = |v: &[usize]| -> Rational { v.iter().map(|&x| num::pow(Rational::from_integer(x.into()), r)).sum() };
    let sign = num::pow(-theta.clone(), r - 1);
    let approx = pow_sum(&a) + sign * pow_sum(&b);
    let scale = num::pow(Rational::from_integer(n.into()), r);
    Ok(((shifted - approx) / scale).to_float().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate_multipartitions, enumerate_partitions};
    use crate::rational::{int, ratio};

    fn d(rows: &[usize]) -> YoungDiagram {
        YoungDiagram::from_parts(rows.to_vec())
    }

    fn mp(s: &str) -> MultiPartition {
        s.parse().unwrap()
    }

    fn point(alpha: Vec<Vec<Rational>>, beta: Vec<Vec<Rational>>, delta: Vec<Rational>) -> ThomaPoint<Rational> {
        ThomaPoint::new(alpha, beta, delta, 0.0).unwrap()
    }

    #[test]
    fn extended_powersum_examples() {
        let omega = point(vec![vec![ratio(1, 2)]], vec![vec![ratio(1, 4)]], vec![int(1)]);
        assert_eq!(extended_powersum(1, 0, &omega, &int(1)), int(1));
        assert_eq!(extended_powersum(2, 0, &omega, &int(1)), ratio(3, 16));
        let beta_only = point(vec![vec![]], vec![vec![ratio(1, 3)]], vec![int(1)]);
        assert!(extended_powersum(3, 0, &beta_only, &int(1)) > int(0));
    }

    #[test]
    fn extended_jack_examples() {
        let omega = point(vec![vec![ratio(1, 2)]], vec![vec![]], vec![int(1)]);
        assert_eq!(extended_jack(&d(&[1]), 0, &omega, &ratio(2, 3)), int(1));
        assert_eq!(extended_jack(&d(&[2]), 0, &omega, &int(1)), ratio(5, 8));
        let omega = point(vec![vec![ratio(1, 3), ratio(1, 5)]], vec![vec![]], vec![int(1)]);
        for n in 0..=5 {
            for lambda in enumerate_partitions(n) {
                let via_jack = extended_jack(&lambda, 0, &omega, &int(0));
                let direct = extended_monomial(&lambda, &omega.alpha[0], &omega.delta[0]).unwrap();
                assert_eq!(via_jack, direct, "{lambda}");
            }
        }
    }

    #[test]
    fn extended_monomial_examples() {
        let x = vec![ratio(1, 2), ratio(1, 5)];
        assert_eq!(extended_monomial(&d(&[1]), &x, &ratio(9, 10)).unwrap(), ratio(9, 10));
        assert_eq!(
            extended_monomial(&d(&[2, 1]), &x, &ratio(7, 10)).unwrap(),
            SymFuncExpr::monomial(d(&[2, 1])).eval_at(&x)
        );
        assert_eq!(extended_monomial(&d(&[2]), &[ratio(1, 2)], &int(1)).unwrap(), ratio(1, 4));
        assert!(extended_monomial(&d(&[1]), &x, &ratio(1, 2)).is_err());
    }

    #[test]
    fn kernel_normalization_and_harmonicity() {
        let s3 = FiniteGroupData::builtin("S3").unwrap();
        let omega = point(
            vec![vec![ratio(1, 5)], vec![], vec![ratio(1, 4), ratio(1, 10)]],
            vec![vec![ratio(1, 10)], vec![ratio(1, 8)], vec![]],
            vec![ratio(2, 5), ratio(1, 5), ratio(2, 5)],
        );
        for theta in [ratio(1, 2), int(1)] {
            let ctx = GraphContext::new(&s3, theta).unwrap();
            for m in 0..=3 {
                let total: Rational = enumerate_multipartitions(m, 3)
                    .iter()
                    .map(|l| ctx.dim(l).unwrap() * kernel_theta(l, &omega, &ctx).unwrap())
                    .sum();
                assert_eq!(total, int(1));
            }
            for lower in enumerate_multipartitions(2, 3) {
                let up: Rational = lower
                    .covering_pairs()
                    .iter()
                    .map(|(_, u)| ctx.upsilon(&lower, u).unwrap() * kernel_theta(u, &omega, &ctx).unwrap())
                    .sum();
                assert_eq!(up, kernel_theta(&lower, &omega, &ctx).unwrap());
            }
        }
    }

    #[test]
    fn kingman_kernel_matches_theta_zero() {
        let trivial = FiniteGroupData::builtin("trivial").unwrap();
        let empty_point = point(vec![vec![]], vec![vec![]], vec![int(1)]);
        assert_eq!(kernel_kingman(&mp("1,1"), &empty_point, &trivial).unwrap(), int(1));
        assert_eq!(kernel_kingman(&mp("-"), &empty_point, &trivial).unwrap(), int(1));
        let z2 = FiniteGroupData::builtin("Z2").unwrap();
        let ctx = GraphContext::new(&z2, int(0)).unwrap();
        let omega = point(
            vec![vec![ratio(1, 3)], vec![ratio(1, 4), ratio(1, 8)]],
            vec![vec![], vec![]],
            vec![ratio(1, 2), ratio(1, 2)],
        );
        for lambda in enumerate_multipartitions(3, 2) {
            let via_theta = ctx.dim(&lambda).unwrap() * kernel_theta(&lambda, &omega, &ctx).unwrap();
            assert_eq!(kernel_kingman(&lambda, &omega, &z2).unwrap(), via_theta, "{lambda}");
        }
        let with_beta = point(vec![vec![], vec![]], vec![vec![ratio(1, 4)], vec![]], vec![ratio(1, 2), ratio(1, 2)]);
        assert!(kernel_kingman(&mp("1|-"), &with_beta, &z2).is_err());
    }

    #[test]
    fn embedding_examples() {
        let omega = embed_diagram(&mp("3,1"), &int(1)).unwrap();
        assert_eq!(omega, point(vec![vec![ratio(1, 2)]], vec![vec![ratio(1, 2)]], vec![int(1)]));
        let omega = embed_diagram(&mp("1|-"), &ratio(3, 2)).unwrap();
        assert_eq!(omega, point(vec![vec![], vec![]], vec![vec![int(1)], vec![]], vec![int(1), int(0)]));
        assert!(embed_diagram(&mp("-|-"), &int(1)).is_err());
        for lambda in enumerate_multipartitions(5, 2) {
            let omega = embed_diagram(&lambda, &ratio(1, 3)).unwrap();
            for l in 0..2 {
                assert_eq!(sum(&omega.alpha[l]) + sum(&omega.beta[l]), omega.delta[l]);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"alpha": [["1/2"], []], "beta": [[], [0.125]], "delta": ["3/4", 0.25]}"#;
        let omega = ThomaPoint::from_json(text).unwrap();
        assert_eq!(omega.beta[1], vec![ratio(1, 8)]);
        assert_eq!(ThomaPoint::from_json(&omega.to_json().to_string()).unwrap(), omega);
        assert!(ThomaPoint::from_json(r#"{"alpha": [["1/2"]], "delta": ["1/4"]}"#).is_err());
        assert!(ThomaPoint::from_json(r#"{"alpha": [["3/4", "1/2"]], "delta": [1]}"#).is_err());
    }

    #[test]
    fn gaps_vanish_for_empty_lower() {
        let ctx = GraphContext::new(&FiniteGroupData::builtin("trivial").unwrap(), int(1)).unwrap();
        let seq = [mp("2,1,1"), mp("4,2,2")];
        assert_eq!(asymptotic_gap(&mp("-"), &seq, &ctx).unwrap(), vec![0.0, 0.0]);
        assert!(asymptotic_gap(&mp("-"), &[mp("4,2,2"), mp("2,1,1")], &ctx).is_err());
        assert_eq!(shifted_powersum_gap(1, &d(&[4, 2, 2]), &int(1)).unwrap(), 0.0);
    }
}
