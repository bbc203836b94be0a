use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::VariableSpec;
use crate::{Error, Result};

/// One causal verb per repetition; the first `repeats` are used.
pub const DEFAULT_VERBS: [&str; 10] = [
    "cause",
    "provoke",
    "affect",
    "influence",
    "lead to",
    "impact",
    "drive",
    "induce",
    "trigger",
    "determine",
];

/// Question template. `preamble` holds the `{source}`, `{target}` and
/// `{verb}` placeholders; `answer_instruction` is appended after a space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub preamble: String,
    pub verbs: Vec<String>,
    pub answer_instruction: String,
}

impl Default for PromptTemplate {
    fn default() -> Self {
        Self {
            preamble: "Consider two variables: \"{source}\" and \"{target}\"; \
                       Does the first {verb} the second?"
                .into(),
            verbs: DEFAULT_VERBS.iter().map(|v| v.to_string()).collect(),
            answer_instruction: "Reply only with a true or a false".into(),
        }
    }
}

impl PromptTemplate {
    pub fn with_verbs(verbs: Vec<String>) -> Result<Self> {
        let t = Self {
            verbs,
            ..Self::default()
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.verbs.is_empty() {
            return Err(Error::Config(
                "prompt template needs at least one verb".into(),
            ));
        }
        for (i, v) in self.verbs.iter().enumerate() {
            if v.trim().is_empty() {
                return Err(Error::Config("empty verb in template".into()));
            }
            if self.verbs[..i].contains(v) {
                return Err(Error::Config(format!("verb {v:?} listed twice")));
            }
        }
        for placeholder in ["{source}", "{target}", "{verb}"] {
            if self.preamble.matches(placeholder).count() != 1 {
                return Err(Error::Config(format!(
                    "preamble must contain {placeholder} exactly once"
                )));
            }
        }
        Ok(())
    }

    /// Short stable digest of the template, part of every cache key.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.preamble.as_bytes());
        h.update([0]);
        for v in &self.verbs {
            h.update(v.as_bytes());
            h.update([0]);
        }
        h.update(self.answer_instruction.as_bytes());
        hex::encode(&h.finalize()[..8])
    }
}

/// Fills the template for `source -> target` with `verbs[verb_index]`.
///
/// Substitution is a single left-to-right pass, so placeholder-like text
/// inside a description is copied verbatim.
pub fn render_prompt(
    template: &PromptTemplate,
    source: &VariableSpec,
    target: &VariableSpec,
    verb_index: usize,
) -> Result<String> {
    let verb = template.verbs.get(verb_index).ok_or_else(|| {
        Error::Config(format!(
            "verb index {verb_index} out of range for {} verbs",
            template.verbs.len()
        ))
    })?;
    if source.name == target.name {
        return Err(Error::Config(format!(
            "prompt pair must be two different variables, got {:?} twice",
            source.name
        )));
    }
    let mut out = String::with_capacity(template.preamble.len() + 64);
    let mut rest = template.preamble.as_str();
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start]);
        let tail = &rest[start..];
        let (value, len) = if tail.starts_with("{source}") {
            (source.prompt_text(), "{source}".len())
        } else if tail.starts_with("{target}") {
            (target.prompt_text(), "{target}".len())
        } else if tail.starts_with("{verb}") {
            (verb.as_str(), "{verb}".len())
        } else {
            ("{", 1)
        };
        out.push_str(value);
        rest = &tail[len..];
    }
    out.push_str(rest);
    if !template.answer_instruction.is_empty() {
        out.push(' ');
        out.push_str(&template.answer_instruction);
    }
    Ok(out)
}

/// `Some(true)` / `Some(false)` when the first alphabetic token of the reply
/// is "true" / "false" (any case), `None` otherwise.
pub fn parse_answer(raw: &str) -> Option<bool> {
    let token: String = raw
        .chars()
        .skip_while(|c| !c.is_alphabetic())
        .take_while(|c| c.is_alphabetic())
        .collect();
    match token.to_lowercase().as_str() {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}
