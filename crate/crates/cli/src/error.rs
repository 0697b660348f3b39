use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] selfless_core::Error),

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for hypothesis and argument problems, 3 for exhausted budgets,
    /// 4 for malformed input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use selfless_core::Error as E;
        match self {
            CliError::Core(E::Hypothesis(_) | E::InvalidArgument(_) | E::ContextMismatch(_)) => 2,
            CliError::Core(E::BudgetExceeded { .. } | E::CoefficientTooLarge { .. }) => 3,
            CliError::Core(E::Parse { .. }) => 4,
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Csv(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        use selfless_core::Error as E;
        match self {
            CliError::Core(E::Hypothesis(_)) => "hypothesis",
            CliError::Core(E::InvalidArgument(_)) | CliError::Usage(_) => "invalid_argument",
            CliError::Core(E::ContextMismatch(_)) => "context_mismatch",
            CliError::Core(E::BudgetExceeded { .. }) => "budget_exceeded",
            CliError::Core(E::CoefficientTooLarge { .. }) => "coefficient_too_large",
            CliError::Core(E::Parse { .. }) => "parse",
            CliError::Io { .. } => "io",
            CliError::Csv(_) => "csv",
        }
    }

    pub fn to_json(&self) -> Value {
        use selfless_core::Error as E;
        let mut obj = json!({
            "kind": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        let extra = match self {
            CliError::Core(E::Parse { pos, .. }) => json!({ "position": pos }),
            CliError::Core(E::BudgetExceeded {
                what,
                predicted,
                budget,
            }) => json!({
                "operation": what,
                "predicted_terms": predicted.to_string(),
                "budget": budget.to_string(),
            }),
            CliError::Core(E::CoefficientTooLarge { bits, cap }) => {
                json!({ "bits": bits, "cap": cap })
            }
            _ => json!({}),
        };
        if let (Some(o), Value::Object(e)) = (obj.as_object_mut(), extra) {
            o.extend(e);
        }
        json!({ "error": obj })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
