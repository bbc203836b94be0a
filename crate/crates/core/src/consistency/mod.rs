//! Consistency scores from repeated, paraphrased causal questions.

mod build;
mod matrix;
mod oracle;
mod prompt;
mod record;
mod synth;

pub use build::{build_matrix, BuildConfig, BuildOutcome, FailurePolicy};
pub use matrix::{format_decimal, parse_rational, score_pair, ConsistencyMatrix, MatrixJson};
pub use oracle::{FnOracle, HttpOracle, Oracle};
pub use prompt::{parse_answer, render_prompt, PromptTemplate, DEFAULT_VERBS};
pub use record::{CacheKey, QueryRecord, ResponseCache};
pub use synth::{synth_matrix, Sampling, SynthNoiseConfig};

use serde::{Deserialize, Serialize};

/// A variable and the free-text description used in prompts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    #[serde(default)]
    pub description: String,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, description: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
        }
    }

    /// Description, or the name when no description is given.
    pub fn prompt_text(&self) -> &str {
        if self.description.trim().is_empty() {
            &self.name
        } else {
            &self.description
        }
    }
}

/// Names must be non-empty and unique.
pub fn validate_variables(vars: &[VariableSpec]) -> crate::Result<()> {
    let mut seen = std::collections::HashSet::new();
    for v in vars {
        if v.name.trim().is_empty() {
            return Err(crate::Error::Validation("variable with empty name".into()));
        }
        if !seen.insert(v.name.as_str()) {
            return Err(crate::Error::Validation(format!(
                "duplicate variable name {:?}",
                v.name
            )));
        }
    }
    Ok(())
}
