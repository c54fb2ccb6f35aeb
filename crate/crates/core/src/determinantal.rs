//! Determinantal ideal supports: joint symbolic powers along the rank
//! stratification of the matrix space.
//!
//! A tuple of vanishing orders `nu = (n_1 >= ... >= n_r)` selects the
//! polynomials vanishing to order at least `n_j` along the variety of
//! matrices of rank below `j`. The support of that ideal is the up-set of
//! partitions whose tail weights dominate `nu`; this module computes the
//! support predicate, its minimal generating antichain, the closed-form
//! single-stratum family, and the vanishing order of a conical polynomial
//! on each stratum.

use crate::exec;
use crate::ideals::{IdealError, IdealSupport};
use crate::partitions::{
    partitions_bounded, partitions_of_weight, Part, Partition, PartitionError,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum DeterminantalError {
    #[error("vanishing orders are not weakly decreasing: {0:?}")]
    OrdersNotDecreasing(Vec<Part>),
    #[error("rank mismatch: partition has rank {partition}, spec has rank {spec}")]
    RankMismatch { partition: usize, spec: usize },
    #[error("stratum index {j} out of range for rank {rank}")]
    StratumOutOfRange { j: usize, rank: usize },
    #[error("tripotent level {level} must be below the rank {rank}")]
    LevelOutOfRange { level: usize, rank: usize },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Weakly decreasing vanishing orders along the rank strata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Part>", into = "Vec<Part>")]
pub struct SymbolicPowerSpec {
    orders: Vec<Part>,
}

impl TryFrom<Vec<Part>> for SymbolicPowerSpec {
    type Error = DeterminantalError;
    fn try_from(orders: Vec<Part>) -> Result<Self, Self::Error> {
        SymbolicPowerSpec::new(orders)
    }
}

impl From<SymbolicPowerSpec> for Vec<Part> {
    fn from(s: SymbolicPowerSpec) -> Vec<Part> {
        s.orders
    }
}

impl SymbolicPowerSpec {
    pub fn new(orders: Vec<Part>) -> Result<Self, DeterminantalError> {
        if orders.windows(2).any(|w| w[0] < w[1]) {
            return Err(DeterminantalError::OrdersNotDecreasing(orders));
        }
        Ok(SymbolicPowerSpec { orders })
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[Part] {
        &self.orders
    }

    /// Order along the stratum of corank `j` (1-based).
    pub fn order(&self, j: usize) -> Part {
        self.orders[j - 1]
    }

    /// Sum of all orders; a weight bound for any minimal support element.
    pub fn total(&self) -> Part {
        self.orders.iter().sum()
    }
}

/// Support predicate: `lambda` lies in the support iff the tail weight
/// `lambda_j + ... + lambda_r` reaches `n_j` for every `j`.
pub fn in_support(lambda: &Partition, nu: &SymbolicPowerSpec) -> Result<bool, DeterminantalError> {
    if lambda.rank() != nu.rank() {
        return Err(DeterminantalError::RankMismatch {
            partition: lambda.rank(),
            spec: nu.rank(),
        });
    }
    Ok((1..=nu.rank()).all(|j| lambda.tail_weight(j - 1) >= nu.order(j)))
}

/// Vanishing order of the conical polynomial of `lambda` at a rank-`j`
/// base point: the tail weight `lambda_{j+1} + ... + lambda_r`.
pub fn order_on_stratum(lambda: &Partition, j: usize) -> Result<Part, DeterminantalError> {
    if j > lambda.rank() {
        return Err(DeterminantalError::StratumOutOfRange {
            j,
            rank: lambda.rank(),
        });
    }
    Ok(lambda.tail_weight(j))
}

/// Minimality certificate: every single-box removal that is still a
/// partition must leave the support. Sufficient because the support is an
/// up-set and box removals connect `lambda` to everything below it.
fn is_minimal(lambda: &Partition, nu: &SymbolicPowerSpec) -> bool {
    lambda
        .box_removals()
        .iter()
        .all(|mu| !in_support(mu, nu).expect("same rank"))
}

/// The exact minimal generating antichain of the joint symbolic power.
///
/// Enumerates the box `lambda_1 <= n_1`, `|lambda| <= n_1 + ... + n_r`:
/// any support member can be shrunk into that box without leaving the
/// support, and minimal elements spend at most `n_j` boxes per constraint.
/// The candidate scan is data-parallel; the result is sorted and
/// deterministic either way.
pub fn minimal_generators(nu: &SymbolicPowerSpec) -> IdealSupport {
    let rank = nu.rank();
    if rank == 0 {
        return IdealSupport::minimal_full_set(0, [Partition::zero(0)]).expect("rank 0");
    }
    let candidates = partitions_bounded(rank, nu.order(1), nu.total());
    let mut minimal = exec::filter(candidates, |lam| {
        in_support(lam, nu).expect("same rank") && is_minimal(lam, nu)
    });
    minimal.sort_unstable();
    IdealSupport::minimal_full_set(rank, minimal).expect("antichain of equal rank")
}

/// Minimal generators of the single-stratum power: vanishing order `n`
/// along the rank-`level` locus. These are the hats of the weight-`n`
/// partitions of rank `r - level`, and agree with
/// [`minimal_generators`] of the corresponding order tuple.
pub fn step1_generators(
    level: usize,
    n: Part,
    rank: usize,
) -> Result<IdealSupport, DeterminantalError> {
    if level >= rank {
        return Err(DeterminantalError::LevelOutOfRange { level, rank });
    }
    let mut gens = Vec::new();
    for alpha in partitions_of_weight(rank - level, n) {
        gens.push(Partition::hat(&alpha, level, rank)?);
    }
    Ok(IdealSupport::minimal_full_set(rank, gens)?)
}

/// The order tuple `(n^(level+1), 0, ...)` whose symbolic power
/// [`step1_generators`] generates.
pub fn step1_spec(
    level: usize,
    n: Part,
    rank: usize,
) -> Result<SymbolicPowerSpec, DeterminantalError> {
    if level >= rank {
        return Err(DeterminantalError::LevelOutOfRange { level, rank });
    }
    let mut orders = vec![n; level + 1];
    orders.resize(rank, 0);
    SymbolicPowerSpec::new(orders)
}

/// Curated reference generator lists for well-known order tuples. The
/// enumeration in [`minimal_generators`] is authoritative; these lists are
/// kept for regression comparison and are allowed to be proper subsets of
/// the computed antichain.
pub fn reference_minimal_partitions(nu: &SymbolicPowerSpec) -> Option<Vec<Partition>> {
    let mk = |rows: &[&[Part]]| {
        rows.iter()
            .map(|r| Partition::new(r.to_vec()).expect("reference data"))
            .collect::<Vec<_>>()
    };
    match nu.orders() {
        [10, 5, 1] => Some(mk(&[&[5, 4, 1], &[5, 3, 2]])),
        [15, 5, 1] => Some(mk(&[
            &[10, 4, 1],
            &[9, 5, 1],
            &[8, 6, 1],
            &[10, 3, 2],
            &[9, 4, 2],
            &[8, 5, 2],
            &[9, 3, 3],
            &[8, 4, 3],
        ])),
        _ => None,
    }
}

/// [`minimal_generators`] plus the comparison against the curated
/// reference list, when one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalSetReport {
    pub nu: SymbolicPowerSpec,
    pub generators: Vec<Partition>,
    /// True iff every reference partition is among the computed generators;
    /// absent when no reference list is known for `nu`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_subset_ok: Option<bool>,
    /// Computed minimal elements missing from the reference list.
    pub extra_minimal: Vec<Partition>,
}

pub fn minimal_generators_report(nu: &SymbolicPowerSpec) -> MinimalSetReport {
    let support = minimal_generators(nu);
    let generators = support.generators().to_vec();
    match reference_minimal_partitions(nu) {
        Some(reference) => {
            let subset_ok = reference.iter().all(|r| generators.contains(r));
            let extra: Vec<Partition> = generators
                .iter()
                .filter(|g| !reference.contains(g))
                .cloned()
                .collect();
            MinimalSetReport {
                nu: nu.clone(),
                generators,
                reference_subset_ok: Some(subset_ok),
                extra_minimal: extra,
            }
        }
        None => MinimalSetReport {
            nu: nu.clone(),
            generators,
            reference_subset_ok: None,
            extra_minimal: Vec::new(),
        },
    }
}
