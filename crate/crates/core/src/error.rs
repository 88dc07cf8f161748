use thiserror::Error;

/// Hypotheses that the structure theorems check eagerly before searching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// The ambient group has more than one element.
    NonTrivialGroup,
    /// Every operand is non-empty.
    NonEmpty,
    /// `|A+B| <= |A|+|B|-1`.
    SmallSumset,
    /// `pi(A+B) = {0}` or `mu(A,B) = 1`.
    KempermanCondition,
    /// `A+B != G` or `mu(A,B) = 1`.
    SparseElement,
    /// `|A| <= |G|/2`.
    AtMostHalf,
    /// `|B| >= 2`.
    SecondAtLeastTwo,
    /// `|A+B| <= |G|-2`.
    SumsetMissesTwo,
    /// `|2A| < 2|A|`.
    SmallDoubling,
    /// Every element has order at most two.
    ExponentTwo,
    /// The sumset is a coset, or a coset with one element removed.
    CosetShapedSumset,
    /// The chosen element has exactly one representation.
    UniqueRepresentation,
}

impl Hypothesis {
    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::NonTrivialGroup => "non_trivial_group",
            Hypothesis::NonEmpty => "non_empty",
            Hypothesis::SmallSumset => "small_sumset",
            Hypothesis::KempermanCondition => "kemperman_condition",
            Hypothesis::SparseElement => "sumset_proper_or_unique_rep",
            Hypothesis::AtMostHalf => "at_most_half",
            Hypothesis::SecondAtLeastTwo => "second_at_least_two",
            Hypothesis::SumsetMissesTwo => "sumset_misses_two",
            Hypothesis::SmallDoubling => "small_doubling",
            Hypothesis::ExponentTwo => "exponent_two",
            Hypothesis::CosetShapedSumset => "coset_shaped_sumset",
            Hypothesis::UniqueRepresentation => "unique_representation",
        }
    }
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("hypothesis `{hypothesis}` fails: {detail}")]
    Precondition {
        hypothesis: Hypothesis,
        detail: String,
    },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("usage: {0}")]
    Usage(String),

    /// A search that a theorem guarantees to succeed came up empty.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn precondition(hypothesis: Hypothesis, detail: impl Into<String>) -> Self {
        Error::Precondition {
            hypothesis,
            detail: detail.into(),
        }
    }

    /// Short machine-readable tag, used in JSON error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Domain(_) => "domain",
            Error::Precondition { .. } => "precondition",
            Error::Contract(_) => "contract",
            Error::Resource(_) => "resource",
            Error::Usage(_) => "usage",
            Error::Invariant(_) => "invariant",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
