//! Partitions of fixed rank and the containment (Young diagram) order.
//!
//! Every index object in this crate is a [`Partition`]: a weakly decreasing
//! tuple of nonnegative integers with *positional* rank, so trailing zeros
//! are significant. The module provides the containment order, truncation
//! and hat constructions, the step decomposition, and the small enumeration
//! helpers the ideal layers are built on.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A single entry of a partition.
pub type Part = u64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PartitionError {
    #[error("parts are not weakly decreasing: {0:?}")]
    NotWeaklyDecreasing(Vec<Part>),
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("truncation level {level} out of range for rank {rank}")]
    TruncationOutOfRange { level: usize, rank: usize },
    #[error("hat expects rank(alpha) = {expected} for level {level} and rank {rank}, got {got}")]
    HatRankMismatch {
        expected: usize,
        got: usize,
        level: usize,
        rank: usize,
    },
    #[error("step heights must be strictly decreasing and positive: {0:?}")]
    StepHeightsNotDecreasing(Vec<Part>),
    #[error("step cuts must be strictly increasing: {0:?}")]
    StepCutsNotIncreasing(Vec<usize>),
    #[error("step cut {cut} exceeds rank {rank}")]
    StepCutExceedsRank { cut: usize, rank: usize },
    #[error("concat not weakly decreasing at the seam: {left} < {right}")]
    ConcatNotMonotone { left: Part, right: Part },
    #[error("cannot subtract {n} from every part: smallest part is {min_part}")]
    SubtractUnderflow { min_part: Part, n: Part },
}

/// Weakly decreasing tuple of nonnegative integers with explicit rank.
///
/// The derived `Ord` is (plain) lexicographic on the parts and is used only
/// for deterministic normalization of outputs; the mathematical containment
/// order is [`Partition::leq`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Part>", into = "Vec<Part>")]
pub struct Partition {
    parts: Vec<Part>,
}

impl TryFrom<Vec<Part>> for Partition {
    type Error = PartitionError;
    fn try_from(parts: Vec<Part>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<Part> {
    fn from(p: Partition) -> Vec<Part> {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Partition {
    /// Validates weak monotonicity. Rank is the length of `parts`, zeros included.
    pub fn new(parts: Vec<Part>) -> Result<Self, PartitionError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotWeaklyDecreasing(parts));
        }
        Ok(Partition { parts })
    }

    /// The zero partition `(0,...,0)` of the given rank.
    pub fn zero(rank: usize) -> Self {
        Partition {
            parts: vec![0; rank],
        }
    }

    /// The rectangular partition `n^(m)` padded with zeros to `rank`.
    pub fn rectangle(n: Part, m: usize, rank: usize) -> Result<Self, PartitionError> {
        if m > rank {
            return Err(PartitionError::StepCutExceedsRank { cut: m, rank });
        }
        let mut parts = vec![n; m];
        parts.resize(rank, 0);
        Ok(Partition { parts })
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> Part {
        self.parts[i]
    }

    /// Sum of all parts.
    pub fn weight(&self) -> Part {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.iter().filter(|&&p| p > 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|&p| p == 0)
    }

    /// Sum of the parts strictly after position `j` (1-based cut, so `j = 0`
    /// gives the full weight and `j = rank` gives 0).
    pub fn tail_weight(&self, j: usize) -> Part {
        self.parts.iter().skip(j).sum()
    }

    fn check_rank(&self, other: &Partition) -> Result<(), PartitionError> {
        if self.rank() != other.rank() {
            return Err(PartitionError::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        Ok(())
    }

    /// Containment order: `self <= other` iff every part of `self` is
    /// bounded by the corresponding part of `other` (Young diagram inclusion).
    pub fn leq(&self, other: &Partition) -> Result<bool, PartitionError> {
        self.check_rank(other)?;
        Ok(self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b))
    }

    /// Strict containment: `leq` and not equal.
    pub fn lt(&self, other: &Partition) -> Result<bool, PartitionError> {
        Ok(self.leq(other)? && self != other)
    }

    /// Drops the first `level` parts, producing a partition of rank `r - level`.
    pub fn truncate(&self, level: usize) -> Result<Partition, PartitionError> {
        if level > self.rank() {
            return Err(PartitionError::TruncationOutOfRange {
                level,
                rank: self.rank(),
            });
        }
        Ok(Partition {
            parts: self.parts[level..].to_vec(),
        })
    }

    /// Prepends `level` copies of the first part of `alpha`, lifting a rank
    /// `r - level` partition back to rank `r`. Inverse to [`Partition::truncate`]
    /// in the sense `hat(alpha, l, r).truncate(l) == alpha`.
    pub fn hat(alpha: &Partition, level: usize, rank: usize) -> Result<Partition, PartitionError> {
        if level > rank || alpha.rank() != rank - level {
            return Err(PartitionError::HatRankMismatch {
                expected: rank.saturating_sub(level),
                got: alpha.rank(),
                level,
                rank,
            });
        }
        let head = alpha.parts.first().copied().unwrap_or(0);
        let mut parts = vec![head; level];
        parts.extend_from_slice(&alpha.parts);
        Ok(Partition { parts })
    }

    /// Appends `suffix` below `self`; fails unless the seam stays weakly
    /// decreasing (the last part of `self` must dominate the first part of
    /// `suffix`).
    pub fn concat(&self, suffix: &Partition) -> Result<Partition, PartitionError> {
        if let (Some(&left), Some(&right)) = (self.parts.last(), suffix.parts.first()) {
            if left < right {
                return Err(PartitionError::ConcatNotMonotone { left, right });
            }
        }
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&suffix.parts);
        Ok(Partition { parts })
    }

    /// Subtracts `n` from every part; requires the smallest part to be at
    /// least `n` (containment of the full `n x rank` rectangle).
    pub fn subtract_rect(&self, n: Part) -> Result<Partition, PartitionError> {
        let min_part = self.parts.last().copied().unwrap_or(0);
        if !self.parts.is_empty() && min_part < n {
            return Err(PartitionError::SubtractUnderflow { min_part, n });
        }
        Ok(Partition {
            parts: self.parts.iter().map(|p| p - n).collect(),
        })
    }

    /// Adds `n` to every part.
    pub fn add_rect(&self, n: Part) -> Partition {
        Partition {
            parts: self.parts.iter().map(|p| p + n).collect(),
        }
    }

    /// Componentwise maximum: the least common upper bound in the
    /// containment order.
    pub fn join(&self, other: &Partition) -> Result<Partition, PartitionError> {
        self.check_rank(other)?;
        Ok(Partition {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| *a.max(b))
                .collect(),
        })
    }

    /// Zero-pads on the right up to `rank`.
    pub fn pad_to(&self, rank: usize) -> Result<Partition, PartitionError> {
        if rank < self.rank() {
            return Err(PartitionError::TruncationOutOfRange {
                level: rank,
                rank: self.rank(),
            });
        }
        let mut parts = self.parts.clone();
        parts.resize(rank, 0);
        Ok(Partition { parts })
    }

    /// Decomposes into maximal constant runs. The zero partition has an
    /// empty step list.
    pub fn step_form(&self) -> StepForm {
        let mut steps = Vec::new();
        for (i, &p) in self.parts.iter().enumerate() {
            if p == 0 {
                break;
            }
            if i == 0 || p < self.parts[i - 1] {
                steps.push(Step {
                    height: p,
                    cut: i + 1,
                });
            } else {
                steps.last_mut().expect("run started").cut = i + 1;
            }
        }
        StepForm { steps }
    }

    /// All ways of removing one box that leave a valid partition of the
    /// same rank.
    pub fn box_removals(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            if self.parts[i] == 0 {
                continue;
            }
            if i + 1 < self.rank() && self.parts[i] == self.parts[i + 1] {
                continue;
            }
            let mut parts = self.parts.clone();
            parts[i] -= 1;
            out.push(Partition { parts });
        }
        out
    }
}

/// One constant run of a partition: `height` repeated through position `cut`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub height: Part,
    /// 1-based position of the last part equal to `height`.
    pub cut: usize,
}

/// Run-length form of a partition: strictly decreasing heights at strictly
/// increasing cuts, zeros omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepForm {
    steps: Vec<Step>,
}

impl StepForm {
    pub fn new(steps: Vec<Step>) -> Result<Self, PartitionError> {
        if steps.windows(2).any(|w| w[0].height <= w[1].height)
            || steps.iter().any(|s| s.height == 0)
        {
            return Err(PartitionError::StepHeightsNotDecreasing(
                steps.iter().map(|s| s.height).collect(),
            ));
        }
        if steps.windows(2).any(|w| w[0].cut >= w[1].cut) || steps.iter().any(|s| s.cut == 0) {
            return Err(PartitionError::StepCutsNotIncreasing(
                steps.iter().map(|s| s.cut).collect(),
            ));
        }
        Ok(StepForm { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of steps `t`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Height `n_k` of the k-th step (1-based).
    pub fn height(&self, k: usize) -> Part {
        self.steps[k - 1].height
    }

    /// Height `n_k` for `k` in `1..=t`, and 0 for `k = t + 1`.
    pub fn height_or_zero(&self, k: usize) -> Part {
        if k <= self.steps.len() {
            self.steps[k - 1].height
        } else {
            0
        }
    }

    /// Cut `l_k` of the k-th step (1-based); `cut(0) = 0` by convention.
    pub fn cut(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            self.steps[k - 1].cut
        }
    }

    /// Expands back to a partition of the given rank.
    pub fn to_partition(&self, rank: usize) -> Result<Partition, PartitionError> {
        if let Some(last) = self.steps.last() {
            if last.cut > rank {
                return Err(PartitionError::StepCutExceedsRank {
                    cut: last.cut,
                    rank,
                });
            }
        }
        let mut parts = Vec::with_capacity(rank);
        for s in &self.steps {
            parts.resize(s.cut, s.height);
        }
        parts.resize(rank, 0);
        Ok(Partition { parts })
    }

    /// The sub-run from step `h` through step `k` (1-based, inclusive) as a
    /// partition of rank `cut(k) - cut(h-1)`; empty when `h > k`.
    pub fn slice(&self, h: usize, k: usize) -> Partition {
        let mut parts = Vec::new();
        if h <= k {
            for s in h..=k {
                let width = self.cut(s) - self.cut(s - 1);
                parts.extend(std::iter::repeat_n(self.height(s), width));
            }
        }
        Partition { parts }
    }
}

/// All partitions of rank `rank` with first part at most `max_first` and
/// weight at most `max_weight`, in lexicographic order.
pub fn partitions_bounded(rank: usize, max_first: Part, max_weight: Part) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(rank);
    descend(rank, max_first, max_weight, &mut current, &mut out);
    out
}

fn descend(
    rank: usize,
    cap: Part,
    budget: Part,
    current: &mut Vec<Part>,
    out: &mut Vec<Partition>,
) {
    if current.len() == rank {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for p in 0..=cap.min(budget) {
        current.push(p);
        descend(rank, p, budget - p, current, out);
        current.pop();
    }
}

/// All partitions of rank `rank` with weight exactly `weight`.
pub fn partitions_of_weight(rank: usize, weight: Part) -> Vec<Partition> {
    partitions_bounded(rank, weight, weight)
        .into_iter()
        .filter(|p| p.weight() == weight)
        .collect()
}
