use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{
    parse_answer, render_prompt, validate_variables, CacheKey, ConsistencyMatrix, Oracle,
    PromptTemplate, QueryRecord, ResponseCache, VariableSpec,
};
use crate::{Error, Result};

/// What to do with a question whose every attempt came back unparseable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailurePolicy {
    /// Keep it in the denominator as a "false".
    #[default]
    CountAsFalse,
    /// Ask again with the next verb not used by the regular repetitions.
    ReaskNextVerb,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildConfig {
    pub dataset: String,
    pub model: String,
    pub repeats: usize,
    /// Attempts per question, counting the first.
    pub retry_limit: u32,
    pub failure_policy: FailurePolicy,
    pub parallelism: usize,
}

impl BuildConfig {
    pub fn new(dataset: impl Into<String>, model: impl Into<String>, repeats: usize) -> Self {
        Self {
            dataset: dataset.into(),
            model: model.into(),
            repeats,
            retry_limit: 3,
            failure_policy: FailurePolicy::default(),
            parallelism: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub matrix: ConsistencyMatrix,
    /// Oracle calls made (zero on a full cache hit).
    pub queried: usize,
    /// Questions settled by the failure policy.
    pub policy_resolved: usize,
}

struct Ctx<'a> {
    vars: &'a [VariableSpec],
    oracle: Option<&'a dyn Oracle>,
    template: &'a PromptTemplate,
    template_hash: String,
    cache: &'a ResponseCache,
    config: &'a BuildConfig,
    queried: AtomicUsize,
}

struct PairResult {
    trues: u32,
    policy_resolved: usize,
}

/// Fills every off-diagonal cell by asking `repeats` paraphrased questions
/// per ordered pair.
///
/// Answers already in `cache` are reused. With no oracle the cache must hold
/// every needed answer (replay); otherwise misses are queried and appended.
pub fn build_matrix(
    vars: &[VariableSpec],
    oracle: Option<&dyn Oracle>,
    template: &PromptTemplate,
    cache: &ResponseCache,
    config: &BuildConfig,
) -> Result<BuildOutcome> {
    validate_variables(vars)?;
    template.validate()?;
    if config.repeats == 0 || config.repeats > template.verbs.len() {
        return Err(Error::Config(format!(
            "repeats must be between 1 and the {} available verbs, got {}",
            template.verbs.len(),
            config.repeats
        )));
    }
    if config.retry_limit == 0 {
        return Err(Error::Config("retry limit must be at least 1".into()));
    }
    let ctx = Ctx {
        vars,
        oracle,
        template,
        template_hash: template.hash(),
        cache,
        config,
        queried: AtomicUsize::new(0),
    };
    let n = vars.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let results: Vec<Mutex<Option<Result<PairResult>>>> =
        pairs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = config.parallelism.clamp(1, pairs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, j)) = pairs.get(k) else { break };
                let r = ctx.pair(i, j);
                let failed = r.is_err();
                *results[k].lock().expect("result lock") = Some(r);
                if failed {
                    // Let other workers drain quickly.
                    next.fetch_add(pairs.len(), Ordering::Relaxed);
                }
            });
        }
    });

    let mut matrix = ConsistencyMatrix::new(vars.to_vec(), config.repeats as u32)?;
    let mut policy_resolved = 0;
    // Report the first failure in pair order so errors are reproducible.
    for (k, &(i, j)) in pairs.iter().enumerate() {
        match results[k].lock().expect("result lock").take() {
            Some(Ok(r)) => {
                matrix.set_count(i, j, r.trues)?;
                policy_resolved += r.policy_resolved;
            }
            Some(Err(e)) => return Err(e),
            None => {}
        }
    }
    if let Some((i, j)) = matrix.first_missing() {
        return Err(Error::Internal(format!(
            "pair {} -> {} was never scored",
            vars[i].name, vars[j].name
        )));
    }
    Ok(BuildOutcome {
        matrix,
        queried: ctx.queried.into_inner(),
        policy_resolved,
    })
}

impl Ctx<'_> {
    fn pair(&self, i: usize, j: usize) -> Result<PairResult> {
        let repeats = self.config.repeats;
        let mut spare = repeats..self.template.verbs.len();
        let mut trues = 0;
        let mut policy_resolved = 0;
        for k in 0..repeats {
            let mut verb = k;
            loop {
                match self.answer(i, j, verb)? {
                    Some(b) => {
                        trues += u32::from(b);
                        break;
                    }
                    None => match self.config.failure_policy {
                        FailurePolicy::CountAsFalse => {
                            policy_resolved += 1;
                            break;
                        }
                        FailurePolicy::ReaskNextVerb => {
                            verb = spare.next().ok_or_else(|| Error::InsufficientData {
                                from: self.vars[i].name.clone(),
                                to: self.vars[j].name.clone(),
                                reason: "unparseable answers and no spare verbs left".into(),
                            })?;
                            policy_resolved += 1;
                        }
                    },
                }
            }
        }
        Ok(PairResult {
            trues,
            policy_resolved,
        })
    }

    fn key(&self, i: usize, j: usize, verb: usize) -> CacheKey {
        CacheKey {
            dataset: self.config.dataset.clone(),
            model: self.config.model.clone(),
            source: self.vars[i].name.clone(),
            target: self.vars[j].name.clone(),
            verb: self.template.verbs[verb].clone(),
            template_hash: self.template_hash.clone(),
        }
    }

    /// First parsed answer for one question, querying while attempts remain.
    /// `None` once the attempts are used up without a parseable reply.
    fn answer(&self, i: usize, j: usize, verb: usize) -> Result<Option<bool>> {
        let key = self.key(i, j, verb);
        let cached = self.cache.get(&key);
        if let Some(b) = cached.iter().find_map(|r| r.parsed) {
            return Ok(Some(b));
        }
        let Some(oracle) = self.oracle else {
            if cached.is_empty() {
                return Err(Error::FixtureMiss {
                    key: key.to_string(),
                });
            }
            return Ok(None);
        };
        let prompt = render_prompt(self.template, &self.vars[i], &self.vars[j], verb)?;
        let mut attempt = cached.iter().map(|r| r.attempt + 1).max().unwrap_or(0);
        let mut transport_failures = 0;
        while attempt < self.config.retry_limit {
            self.queried.fetch_add(1, Ordering::Relaxed);
            let raw = match oracle.ask(&prompt) {
                Ok(raw) => raw,
                Err(message) => {
                    transport_failures += 1;
                    if transport_failures >= self.config.retry_limit {
                        return Err(Error::Transport {
                            from: key.source,
                            to: key.target,
                            verb: key.verb,
                            message,
                        });
                    }
                    continue;
                }
            };
            let parsed = parse_answer(&raw);
            self.cache.append(QueryRecord {
                dataset: key.dataset.clone(),
                model: key.model.clone(),
                source: key.source.clone(),
                target: key.target.clone(),
                source_index: i,
                target_index: j,
                verb: key.verb.clone(),
                template_hash: key.template_hash.clone(),
                attempt,
                raw_response: raw,
                parsed,
                timestamp: now(),
            })?;
            if parsed.is_some() {
                return Ok(parsed);
            }
            attempt += 1;
        }
        Ok(None)
    }
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consistency::FnOracle;
    use crate::Rational;

    fn vars() -> Vec<VariableSpec> {
        vec![
            VariableSpec::new("rain", "it rains"),
            VariableSpec::new("wet", "the grass is wet"),
        ]
    }

    // "rain -> wet" is always true; the reverse is true for the first verb only.
    fn scripted(prompt: &str) -> Result<String, String> {
        let forward = prompt.find("it rains").unwrap() < prompt.find("the grass").unwrap();
        Ok(if forward || prompt.contains(" cause ") {
            "True"
        } else {
            "False"
        }
        .into())
    }

    #[test]
    fn builds_and_replays() {
        let cache = ResponseCache::in_memory();
        let oracle = FnOracle::new("m", scripted);
        let template = PromptTemplate::default();
        let cfg = BuildConfig::new("toy", "m", 4);
        let out = build_matrix(&vars(), Some(&oracle), &template, &cache, &cfg).unwrap();
        assert_eq!(out.queried, 8);
        assert_eq!(out.matrix.score(0, 1), Some(Rational::from_integer(1)));
        assert_eq!(out.matrix.score(1, 0), Some(Rational::new(1, 4)));

        let replay = build_matrix(&vars(), None, &template, &cache, &cfg).unwrap();
        assert_eq!(replay.queried, 0);
        assert_eq!(replay.matrix, out.matrix);

        let wider = BuildConfig::new("toy", "m", 5);
        assert!(matches!(
            build_matrix(&vars(), None, &template, &cache, &wider),
            Err(Error::FixtureMiss { .. })
        ));
    }

    #[test]
    fn unparseable_answers_follow_policy() {
        let template = PromptTemplate::default();
        let oracle = FnOracle::new("m", |p: &str| {
            Ok(if p.contains(" affect ") {
                "maybe"
            } else {
                "true"
            }
            .into())
        });
        let cache = ResponseCache::in_memory();
        let cfg = BuildConfig::new("toy", "m", 3);
        let out = build_matrix(&vars(), Some(&oracle), &template, &cache, &cfg).unwrap();
        assert_eq!(out.matrix.count(0, 1), Some(2));
        assert_eq!(out.policy_resolved, 2);
        // two good questions plus three attempts at the bad one, per pair
        assert_eq!(out.queried, 10);

        let cfg = BuildConfig {
            failure_policy: FailurePolicy::ReaskNextVerb,
            ..cfg
        };
        let cache = ResponseCache::in_memory();
        let out = build_matrix(&vars(), Some(&oracle), &template, &cache, &cfg).unwrap();
        assert_eq!(out.matrix.count(0, 1), Some(3));
    }

    #[test]
    fn transport_failure_is_reported() {
        let oracle = FnOracle::new("m", |_: &str| Err("connection refused".into()));
        let cache = ResponseCache::in_memory();
        let cfg = BuildConfig::new("toy", "m", 2);
        match build_matrix(
            &vars(),
            Some(&oracle),
            &PromptTemplate::default(),
            &cache,
            &cfg,
        ) {
            Err(Error::Transport { from, to, .. }) => {
                assert_eq!((from.as_str(), to.as_str()), ("rain", "wet"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn flaky_transport_is_retried() {
        let calls = AtomicUsize::new(0);
        let oracle = FnOracle::new("m", |_: &str| {
            if calls.fetch_add(1, Ordering::SeqCst).is_multiple_of(2) {
                Err("timeout".into())
            } else {
                Ok("false".into())
            }
        });
        let cfg = BuildConfig {
            parallelism: 1,
            ..BuildConfig::new("toy", "m", 2)
        };
        let out = build_matrix(
            &vars(),
            Some(&oracle),
            &PromptTemplate::default(),
            &ResponseCache::in_memory(),
            &cfg,
        )
        .unwrap();
        assert_eq!(out.matrix.count(0, 1), Some(0));
    }

    #[test]
    fn repeats_bounded_by_verbs() {
        let t = PromptTemplate::with_verbs(vec!["cause".into()]).unwrap();
        let cfg = BuildConfig::new("toy", "m", 2);
        assert!(matches!(
            build_matrix(&vars(), None, &t, &ResponseCache::in_memory(), &cfg),
            Err(Error::Config(_))
        ));
    }
}
