use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or values; exit code 2.
    #[error("{0}")]
    Usage(String),
    #[error("supercritical: {0}")]
    Supercritical(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// A computation could not be carried out; exit code 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

impl From<sg_tree_core::TreeError> for CliError {
    fn from(e: sg_tree_core::TreeError) -> Self {
        match e {
            sg_tree_core::TreeError::Supercritical(_) => CliError::Supercritical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<sg_rule_engine::RuleError> for CliError {
    fn from(e: sg_rule_engine::RuleError) -> Self {
        match e {
            sg_rule_engine::RuleError::Inconsistent { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<sg_moment_diagrams::MomentError> for CliError {
    fn from(e: sg_moment_diagrams::MomentError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<sg_power_counting::PowerError> for CliError {
    fn from(e: sg_power_counting::PowerError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<sg_stochastic::StochError> for CliError {
    fn from(e: sg_stochastic::StochError) -> Self {
        use sg_stochastic::StochError::*;
        match e {
            Diverged { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
