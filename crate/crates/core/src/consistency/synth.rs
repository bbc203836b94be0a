use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::{ConsistencyMatrix, VariableSpec};
use crate::metrics::TrueDag;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Count drawn from `Binomial(repeats, p)`.
    #[default]
    Binomial,
    /// Count fixed at `round(p * repeats)`; no sampling noise.
    Expected,
}

/// Answer probabilities for the synthetic oracle, keyed on the ancestral
/// relation of the asked pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthNoiseConfig {
    /// `j` descends from `i`, asked as `i -> j`.
    pub p_true: f64,
    /// `i` descends from `j`, asked as `i -> j`.
    pub p_false: f64,
    /// Neither descends from the other.
    pub p_unrelated: f64,
    pub repeats: u32,
    #[serde(default)]
    pub sampling: Sampling,
}

impl Default for SynthNoiseConfig {
    fn default() -> Self {
        Self {
            p_true: 0.9,
            p_false: 0.1,
            p_unrelated: 0.5,
            repeats: 10,
            sampling: Sampling::Binomial,
        }
    }
}

impl SynthNoiseConfig {
    pub fn zero_noise(repeats: u32) -> Self {
        Self {
            p_true: 1.0,
            p_false: 0.0,
            p_unrelated: 0.5,
            repeats,
            sampling: Sampling::Expected,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p_true", self.p_true),
            ("p_false", self.p_false),
            ("p_unrelated", self.p_unrelated),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} = {p} is outside [0, 1]")));
            }
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        Ok(())
    }
}

/// Consistency matrix an oracle with the given noise would produce for
/// `dag`. Cells are drawn row-major from one seeded stream.
pub fn synth_matrix(
    dag: &TrueDag,
    noise: &SynthNoiseConfig,
    seed: u64,
) -> Result<ConsistencyMatrix> {
    noise.validate()?;
    let n = dag.len();
    let desc = dag.descendants();
    let vars = dag
        .names()
        .iter()
        .map(|name| VariableSpec::new(name.clone(), ""))
        .collect();
    let mut matrix = ConsistencyMatrix::new(vars, noise.repeats)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let repeats = noise.repeats;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let p = if desc.has_edge(i, j) {
                noise.p_true
            } else if desc.has_edge(j, i) {
                noise.p_false
            } else {
                noise.p_unrelated
            };
            let count = match noise.sampling {
                Sampling::Expected => (p * repeats as f64).round() as u32,
                Sampling::Binomial => {
                    let dist = Binomial::new(repeats as u64, p)
                        .map_err(|e| Error::Config(format!("binomial({repeats}, {p}): {e}")))?;
                    dist.sample(&mut rng) as u32
                }
            };
            matrix.set_count(i, j, count)?;
        }
    }
    Ok(matrix)
}
