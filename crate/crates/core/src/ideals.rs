//! Supports of K-invariant polynomial ideals on a rank-`r` matrix space.
//!
//! A K-invariant ideal is determined by the set of partitions indexing the
//! Peter-Weyl components it contains, and that set is an up-set in the
//! containment order. [`IdealSupport`] stores the unique minimal antichain
//! generating the up-set; every operation (sum, intersection, localization,
//! maximal fibre) works on that normal form.

use crate::partitions::{partitions_of_weight, Part, Partition, PartitionError};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum IdealError {
    #[error("generator rank {got} does not match ideal rank {expected}")]
    GeneratorRankMismatch { expected: usize, got: usize },
    #[error("ideal ranks differ: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("localization level {level} out of range for rank {rank}")]
    LocalizeOutOfRange { level: usize, rank: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// The minimal antichain of partitions generating a K-invariant ideal.
///
/// The empty antichain is the zero ideal; the singleton zero partition is
/// the full polynomial ring. Generators are kept sorted for deterministic
/// output.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSupport", into = "RawSupport")]
pub struct IdealSupport {
    rank: usize,
    generators: Vec<Partition>,
}

#[derive(Serialize, Deserialize)]
struct RawSupport {
    rank: usize,
    generators: Vec<Partition>,
}

impl TryFrom<RawSupport> for IdealSupport {
    type Error = IdealError;
    fn try_from(raw: RawSupport) -> Result<Self, IdealError> {
        IdealSupport::minimal_full_set(raw.rank, raw.generators)
    }
}

impl From<IdealSupport> for RawSupport {
    fn from(i: IdealSupport) -> RawSupport {
        RawSupport {
            rank: i.rank,
            generators: i.generators,
        }
    }
}

impl fmt::Debug for IdealSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealSupport(rank {})[", self.rank)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

impl IdealSupport {
    /// Reduces an arbitrary finite generating set to the antichain of its
    /// minimal elements. The result generates the same up-set and the
    /// reduction is idempotent; an empty input yields the zero ideal.
    pub fn minimal_full_set(
        rank: usize,
        generators: impl IntoIterator<Item = Partition>,
    ) -> Result<Self, IdealError> {
        let mut gens: Vec<Partition> = Vec::new();
        for g in generators {
            if g.rank() != rank {
                return Err(IdealError::GeneratorRankMismatch {
                    expected: rank,
                    got: g.rank(),
                });
            }
            gens.push(g);
        }
        gens.sort_unstable();
        gens.dedup();
        let mut minimal: Vec<Partition> = Vec::with_capacity(gens.len());
        'outer: for g in &gens {
            for h in &gens {
                if h != g && h.leq(g)? {
                    continue 'outer;
                }
            }
            minimal.push(g.clone());
        }
        Ok(IdealSupport {
            rank,
            generators: minimal,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Partition] {
        &self.generators
    }

    /// Zero ideal: no generators, empty support.
    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// Membership of the Peter-Weyl component indexed by `mu`: true iff
    /// `mu` dominates some generator.
    pub fn contains_partition(&self, mu: &Partition) -> Result<bool, IdealError> {
        if mu.rank() != self.rank {
            return Err(IdealError::GeneratorRankMismatch {
                expected: self.rank,
                got: mu.rank(),
            });
        }
        for g in &self.generators {
            if g.leq(mu)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn check_rank(&self, other: &IdealSupport) -> Result<(), IdealError> {
        if self.rank != other.rank {
            return Err(IdealError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    /// Ideal sum: union of the up-sets.
    pub fn sum(&self, other: &IdealSupport) -> Result<IdealSupport, IdealError> {
        self.check_rank(other)?;
        IdealSupport::minimal_full_set(
            self.rank,
            self.generators
                .iter()
                .chain(&other.generators)
                .cloned()
                .collect::<Vec<_>>(),
        )
    }

    /// Ideal intersection at the support level: the up-set intersection,
    /// generated by pairwise joins.
    pub fn intersect(&self, other: &IdealSupport) -> Result<IdealSupport, IdealError> {
        self.check_rank(other)?;
        let mut joins = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                joins.push(a.join(b)?);
            }
        }
        IdealSupport::minimal_full_set(self.rank, joins)
    }

    /// The n-th power of the maximal ideal at the origin: generated by all
    /// partitions of weight exactly `n`.
    pub fn power_of_max_ideal(n: Part, rank: usize) -> IdealSupport {
        let mut generators = partitions_of_weight(rank, n);
        generators.sort_unstable();
        IdealSupport { rank, generators }
    }

    /// Support of the ideal seen from the normal slice of a rank-`level`
    /// tripotent: truncate every generator and re-minimize. The result has
    /// rank `r - level`.
    pub fn localize(&self, level: usize) -> Result<IdealSupport, IdealError> {
        if level > self.rank {
            return Err(IdealError::LocalizeOutOfRange {
                level,
                rank: self.rank,
            });
        }
        let truncated = self
            .generators
            .iter()
            .map(|g| g.truncate(level))
            .collect::<Result<Vec<_>, _>>()?;
        IdealSupport::minimal_full_set(self.rank - level, truncated)
    }

    /// The fibre of the ideal at the origin decomposes as the direct sum of
    /// the Peter-Weyl components named by the minimal generators.
    pub fn maximal_fibre(&self) -> &[Partition] {
        &self.generators
    }
}
