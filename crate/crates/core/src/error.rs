use crate::frac::Frac;

pub type Result<T, E = FvrError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FvrError {
    #[error("instance must have at least one candidate")]
    NoCandidates,
    #[error("instance must have at least one voter")]
    NoVoters,
    #[error("voter {voter} approves candidate {index}, but there are only {m} candidates")]
    ApprovalOutOfRange {
        voter: usize,
        index: usize,
        m: usize,
    },
    #[error("voter index {voter} out of range (n = {n})")]
    VoterOutOfRange { voter: usize, n: usize },
    #[error("candidate index {candidate} out of range (m = {m})")]
    CandidateOutOfRange { candidate: usize, m: usize },
    #[error("flexibility {0} is outside the open interval (0, 1)")]
    FlexibilityOutOfRange(Frac),
    #[error("weight table has no entry for flexibility {0}")]
    MissingTableEntry(Frac),
    #[error("invalid weight function: {0}")]
    InvalidWeight(String),
    #[error("weight function is trivial: w(f) = 0 everywhere it is evaluated")]
    TrivialWeight,
    #[error("{0}")]
    UnsupportedFamily(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid committee: {0}")]
    InvalidCommittee(String),
    #[error(
        "{what} would need {count} items, over the limit of {limit}; \
         use the sequential rule for large committee spaces"
    )]
    SizeLimit {
        what: &'static str,
        count: String,
        limit: usize,
    },
    #[error("enumeration of {count} profiles exceeds the budget of {budget}")]
    BudgetExceeded { count: String, budget: usize },
    #[error("invalid ranking: {0}")]
    InvalidRanking(String),
}
