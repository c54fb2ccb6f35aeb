//! Rational special-function layer: multivariate Pochhammer symbols, the
//! kernel shift constants, and truncated stratified kernel expansions.
//!
//! Everything here is exact big-rational arithmetic. The shift constant
//! `C_l^n(lambda)` is the factor by which multiplying a component kernel by
//! determinant powers shifts its partition by the full `n x l` rectangle;
//! the stratified expansion assembles, step by step, the coefficient maps
//! of the kernels attached to each stratum of a partition ideal.

use crate::exec;
use crate::partitions::{Part, Partition, PartitionError, StepForm};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum KernelError {
    #[error("shift by {n} exceeds partition {lambda} (needs every part >= {n})")]
    ShiftExceedsPartition { lambda: String, n: Part },
    #[error("degenerate parameters: Pochhammer factor vanishes for {context}")]
    DegenerateParameter { context: String },
    #[error("step index {s} out of range 1..={t}")]
    StepOutOfRange { s: usize, t: usize },
    #[error("partition rank {got} does not match expected rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Multivariate Pochhammer symbol with multiplicity `a`: the product over
/// rows `j` of the classical rising factorial `(s - (j-1) a/2)` with
/// `lambda_j` factors.
pub fn pochhammer(sval: &BigRational, lambda: &Partition, a: &BigRational) -> BigRational {
    let half_a = a / BigRational::from_integer(BigInt::from(2));
    let mut acc = BigRational::one();
    for (j, &lj) in lambda.parts().iter().enumerate() {
        let base = sval - &half_a * BigRational::from_integer(BigInt::from(j));
        for i in 0..lj {
            acc *= &base + BigRational::from_integer(BigInt::from(i));
        }
    }
    acc
}

/// Shift constant `C_l^n(lambda)`: the reciprocal product of the rising
/// factorials `(lambda_j - n + 1 + (a/2)(l - j))_n` over `j = 1..=l`.
/// Requires `lambda >= n^(l)` so every factor base stays positive for the
/// rectangular multiplicity; a vanishing factor for exotic `a` is reported
/// as a degenerate-parameter error.
pub fn cconst(
    level: usize,
    n: Part,
    lambda: &Partition,
    a: &BigRational,
) -> Result<BigRational, KernelError> {
    if lambda.rank() != level {
        return Err(KernelError::RankMismatch {
            expected: level,
            got: lambda.rank(),
        });
    }
    if level > 0 && lambda.parts().last().copied().unwrap_or(0) < n {
        return Err(KernelError::ShiftExceedsPartition {
            lambda: lambda.to_string(),
            n,
        });
    }
    let half_a = a / BigRational::from_integer(BigInt::from(2));
    let mut denom = BigRational::one();
    for j in 1..=level {
        let base =
            BigRational::from_integer(BigInt::from(lambda.part(j - 1) as i64 - n as i64 + 1))
                + &half_a * BigRational::from_integer(BigInt::from((level - j) as i64));
        for i in 0..n {
            let factor = &base + BigRational::from_integer(BigInt::from(i));
            if factor.is_zero() {
                return Err(KernelError::DegenerateParameter {
                    context: format!("C_{level}^{n}({lambda}), row {j}"),
                });
            }
            denom *= factor;
        }
    }
    Ok(denom.recip())
}

/// Peter-Weyl coefficient function of a kernel, evaluated on partitions of
/// the full rank. Two built-ins cover the standard modules: the flat
/// function (Fischer-Fock kernel) and the Pochhammer-weighted family
/// `a_mu = 1/(c)_mu`.
#[derive(Clone)]
pub enum KernelCoefficients {
    Flat,
    PochhammerWeighted { c: BigRational },
    Custom(Arc<dyn Fn(&Partition) -> BigRational + Send + Sync>),
}

impl std::fmt::Debug for KernelCoefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelCoefficients::Flat => write!(f, "Flat"),
            KernelCoefficients::PochhammerWeighted { c } => {
                write!(f, "PochhammerWeighted(1/({c})_mu)")
            }
            KernelCoefficients::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl KernelCoefficients {
    pub fn eval(&self, mu: &Partition, mult_a: &BigRational) -> Result<BigRational, KernelError> {
        match self {
            KernelCoefficients::Flat => Ok(BigRational::one()),
            KernelCoefficients::PochhammerWeighted { c } => {
                let p = pochhammer(c, mu, mult_a);
                if p.is_zero() {
                    return Err(KernelError::DegenerateParameter {
                        context: format!("({c})_{mu} = 0"),
                    });
                }
                Ok(p.recip())
            }
            KernelCoefficients::Custom(f) => Ok(f(mu)),
        }
    }
}

/// Truncated coefficient map of a stratified kernel: partition keys of a
/// fixed rank context, weights bounded by the truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelExpansion {
    rank_context: usize,
    weight_bound: Part,
    coefficients: BTreeMap<Partition, BigRational>,
}

impl Serialize for KernelExpansion {
    /// Keys as comma-joined part lists, values as exact `[num, den]` pairs.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut coeffs = serde_json::Map::new();
        for (key, value) in &self.coefficients {
            let name = key
                .parts()
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let num = serde_json::Number::from_string_unchecked(value.numer().to_string());
            let den = serde_json::Number::from_string_unchecked(value.denom().to_string());
            coeffs.insert(name, serde_json::Value::Array(vec![num.into(), den.into()]));
        }
        let mut st = serializer.serialize_struct("KernelExpansion", 3)?;
        st.serialize_field("rank_context", &self.rank_context)?;
        st.serialize_field("weight_bound", &self.weight_bound)?;
        st.serialize_field("coefficients", &coeffs)?;
        st.end()
    }
}

impl KernelExpansion {
    pub fn rank_context(&self) -> usize {
        self.rank_context
    }

    pub fn weight_bound(&self) -> Part {
        self.weight_bound
    }

    /// Keys in lexicographic order.
    pub fn coefficients(&self) -> &BTreeMap<Partition, BigRational> {
        &self.coefficients
    }

    pub fn coefficient(&self, key: &Partition) -> BigRational {
        self.coefficients
            .get(key)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// The `s`-th stratified kernel of the partition `lambda`, as a truncated
/// coefficient map.
///
/// Writing `lambda` in step form with heights `n_1 > ... > n_t` and cuts
/// `l_1 < ... < l_t`, the kernel attached to step `s` expands over
/// partitions `mu` of rank `l_s` dominating the head `lambda_1^s`. Each
/// `mu` contributes, at the key `mu - n_s^(l_s)` zero-padded back to the
/// ambient rank, the coefficient
///
/// ```text
/// a(mu, lambda_{s+1}^t)  *  prod_{k=s..t} C_{l_k}^{n_k - n_{k+1}}((mu, lambda_{s+1}^k) - n_{k+1}^(l_k))
/// ```
///
/// with `n_{t+1} = 0`. The truncation `weight_bound` applies to the output
/// key, not to `mu`. Evaluation over the candidate `mu` is data-parallel;
/// output ordering is lexicographic on the keys either way.
pub fn k_s_expansion(
    coeffs: &KernelCoefficients,
    lambda: &Partition,
    s: usize,
    weight_bound: Part,
    mult_a: &BigRational,
) -> Result<KernelExpansion, KernelError> {
    let rank = lambda.rank();
    let step = lambda.step_form();
    let t = step.len();
    if s == 0 || s > t {
        return Err(KernelError::StepOutOfRange { s, t });
    }
    let l_s = step.cut(s);
    let n_s = step.height(s);
    let head = step.slice(1, s);

    // mu >= head with |mu - n_s^(l_s)| <= weight_bound
    let mu_weight_cap = weight_bound + n_s * l_s as Part;
    let candidates: Vec<Partition> =
        crate::partitions::partitions_bounded(l_s, mu_weight_cap, mu_weight_cap)
            .into_iter()
            .filter(|mu| head.leq(mu).expect("rank l_s"))
            .collect();

    let entries = exec::map_range(candidates.len(), |idx| -> Result<_, KernelError> {
        let mu = &candidates[idx];
        let key = mu.subtract_rect(n_s).expect("mu dominates the head");
        if key.weight() > weight_bound {
            return Ok(None);
        }
        // full-rank index (mu, lambda_{s+1}^t, 0...) for the coefficient function
        let full = mu
            .concat(&step.slice(s + 1, t))
            .expect("suffix heights stay below n_s")
            .pad_to(rank)?;
        let mut value = coeffs.eval(&full, mult_a)?;
        for k in s..=t {
            let n_next = step.height_or_zero(k + 1);
            let shifted = mu
                .concat(&step.slice(s + 1, k))
                .expect("suffix heights stay below n_s")
                .subtract_rect(n_next)
                .expect("suffix heights dominate the next height");
            value *= cconst(step.cut(k), step.height(k) - n_next, &shifted, mult_a)?;
        }
        Ok(Some((key.pad_to(rank)?, value)))
    });

    let mut coefficients = BTreeMap::new();
    for entry in entries {
        if let Some((key, value)) = entry? {
            if !value.is_zero() {
                coefficients.insert(key, value);
            }
        }
    }
    Ok(KernelExpansion {
        rank_context: rank,
        weight_bound,
        coefficients,
    })
}

/// Step data of a partition, re-exported for callers driving
/// [`k_s_expansion`] by hand.
pub fn step_data(lambda: &Partition) -> StepForm {
    lambda.step_form()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partitions_bounded;
    use crate::scalar::ratio;

    fn p(parts: &[Part]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn pochhammer_examples() {
        // single factor
        assert_eq!(pochhammer(&q(2, 1), &p(&[1]), &q(2, 1)), q(2, 1));
        // classical (1)_m = m!
        assert_eq!(pochhammer(&q(1, 1), &p(&[4]), &q(2, 1)), q(24, 1));
        // two rows with a = 2: 2 * (2 - 1) = 2
        assert_eq!(pochhammer(&q(2, 1), &p(&[1, 1]), &q(2, 1)), q(2, 1));
        // empty partition gives 1
        assert_eq!(pochhammer(&q(7, 3), &Partition::zero(0), &q(2, 1)), q(1, 1));
    }

    #[test]
    fn pochhammer_telescoping_identity() {
        let a = q(2, 1);
        let half_a = q(1, 1);
        for sval in [q(2, 1), q(5, 2), q(-1, 3)] {
            for lam in partitions_bounded(3, 4, 9) {
                let lhs = pochhammer(&sval, &lam.add_rect(1), &a);
                let rhs = pochhammer(&sval, &lam, &a);
                let mut factor = BigRational::one();
                for j in 0..3i64 {
                    factor *= &sval - &half_a * q(j, 1) + q(lam.part(j as usize) as i64, 1);
                }
                assert_eq!(lhs, rhs * factor, "s = {sval}, lambda = {lam}");
            }
        }
    }

    #[test]
    fn cconst_examples() {
        // rank-1 calibration: C_1^1((m)) = 1/m
        for m in 1..=6u64 {
            assert_eq!(cconst(1, 1, &p(&[m]), &q(2, 1)).unwrap(), q(1, m as i64));
        }
        // (2-1+1+1)_1 * (1-1+1)_1 = 3
        assert_eq!(cconst(2, 1, &p(&[2, 1]), &q(2, 1)).unwrap(), q(1, 3));
        // n = 0 gives the empty product
        assert_eq!(cconst(2, 0, &p(&[5, 0]), &q(2, 1)).unwrap(), q(1, 1));
        // guard: lambda must dominate the rectangle
        assert!(matches!(
            cconst(2, 2, &p(&[3, 1]), &q(2, 1)),
            Err(KernelError::ShiftExceedsPartition { .. })
        ));
        // degenerate multiplicity makes a factor vanish
        assert!(matches!(
            cconst(2, 1, &p(&[1, 1]), &q(-2, 1)),
            Err(KernelError::DegenerateParameter { .. })
        ));
    }

    #[test]
    fn cconst_composes_under_iterated_shifts() {
        // C_l^{n+m}(lambda) = C_l^n(lambda) * C_l^m(lambda - n^(l))
        let a = q(2, 1);
        for level in 1..=3usize {
            for n in 0..=4u64 {
                for m in 0..=(4 - n) {
                    for lam in partitions_bounded(level, n + m + 3, 3 * (n + m + 3)) {
                        if lam.parts().last().copied().unwrap_or(0) < n + m {
                            continue;
                        }
                        let total = cconst(level, n + m, &lam, &a).unwrap();
                        let first = cconst(level, n, &lam, &a).unwrap();
                        let second = cconst(level, m, &lam.subtract_rect(n).unwrap(), &a).unwrap();
                        assert_eq!(total, first * second, "lambda = {lam}, n={n}, m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_of_a_rank_one_step() {
        // lambda = (1,0): keys are the single-row partitions (m-1, 0) with
        // coefficient C_1^1((m)) = 1/m; frozen from expanding the sum by
        // hand at rank 1
        let exp = k_s_expansion(&KernelCoefficients::Flat, &p(&[1, 0]), 1, 2, &q(2, 1)).unwrap();
        assert_eq!(exp.rank_context(), 2);
        let expected: Vec<(Partition, BigRational)> = vec![
            (p(&[0, 0]), q(1, 1)),
            (p(&[1, 0]), q(1, 2)),
            (p(&[2, 0]), q(1, 3)),
        ];
        assert_eq!(
            exp.coefficients()
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect::<Vec<_>>(),
            expected
        );
        // two-row keys never arise from a rank-1 step
        assert!(exp.coefficient(&p(&[1, 1])).is_zero());
    }

    #[test]
    fn single_step_expansion_is_coefficient_times_cconst() {
        // t = 1 with lambda = n^(l): coefficient at mu - n^(l) is a(mu) C_l^n(mu)
        let a = q(2, 1);
        let lam = p(&[2, 2, 0]);
        let weighted = KernelCoefficients::PochhammerWeighted { c: q(7, 2) };
        let exp = k_s_expansion(&weighted, &lam, 1, 3, &a).unwrap();
        assert!(!exp.is_empty());
        for (key, value) in exp.coefficients() {
            assert_eq!(key.part(2), 0);
            let mu = Partition::new(vec![key.part(0) + 2, key.part(1) + 2]).unwrap();
            let a_mu = weighted.eval(&mu.pad_to(3).unwrap(), &a).unwrap();
            let expected = a_mu * cconst(2, 2, &mu, &a).unwrap();
            assert_eq!(value, &expected, "key {key}");
        }
    }

    #[test]
    fn weight_zero_truncation_keeps_only_the_base_key() {
        let exp = k_s_expansion(&KernelCoefficients::Flat, &p(&[3, 3, 0]), 1, 0, &q(2, 1)).unwrap();
        assert_eq!(exp.coefficients().len(), 1);
        assert!(!exp.coefficient(&Partition::zero(3)).is_zero());
    }

    #[test]
    fn two_step_expansion_matches_hand_formula() {
        // lambda = (2,1): steps (2@1), (1@2). s = 2 sums over rank-2
        // partitions mu >= (2,1); s = 1 over rank-1 mu >= (2).
        let a = q(2, 1);
        let lam = p(&[2, 1]);
        // s = 2: key mu - 1^(2), coefficient C_2^1(mu)
        let exp2 = k_s_expansion(&KernelCoefficients::Flat, &lam, 2, 2, &a).unwrap();
        for (key, value) in exp2.coefficients() {
            let mu = key.add_rect(1);
            let expected = cconst(2, 1, &mu, &a).unwrap();
            assert_eq!(value, &expected, "key {key}");
        }
        // spot-check: mu = (2,1) -> key (1,0), C_2^1((2,1)) = 1/3
        assert_eq!(exp2.coefficient(&p(&[1, 0])), q(1, 3));
        // s = 1: key (mu) - 2^(1), coefficient C_1^1((mu - 1)) C_2^1((mu, 1))
        let exp1 = k_s_expansion(&KernelCoefficients::Flat, &lam, 1, 2, &a).unwrap();
        assert!(!exp1.is_empty());
        for (key, value) in exp1.coefficients() {
            assert_eq!(key.part(1), 0, "rank-1 step keys are single-row");
            let m = key.part(0) + 2;
            let inner = cconst(1, 1, &p(&[m - 1]), &a).unwrap();
            let outer = cconst(2, 1, &p(&[m, 1]), &a).unwrap();
            assert_eq!(value, &(inner * outer), "key {key}");
        }
        assert!(k_s_expansion(&KernelCoefficients::Flat, &lam, 3, 2, &a).is_err());
    }
}
