use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("machine index {machine} out of range (m = {machines})")]
    MachineOutOfRange { machine: usize, machines: usize },

    #[error("job index {job} out of range (n = {jobs})")]
    JobOutOfRange { job: usize, jobs: usize },

    #[error("scenario has {deviating} deviating jobs but the budget is {gamma}")]
    BudgetExceeded { deviating: usize, gamma: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A subroutine broke its accept/reject contract, or a verified bound did
    /// not hold.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
