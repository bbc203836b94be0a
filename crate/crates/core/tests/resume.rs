use std::sync::atomic::{AtomicUsize, Ordering};

use lcos_core::consistency::{
    build_matrix, BuildConfig, FnOracle, PromptTemplate, ResponseCache, VariableSpec,
};
use lcos_core::Error;

fn vars() -> Vec<VariableSpec> {
    ["smoking", "tar", "cancer", "cough"]
        .iter()
        .map(|n| VariableSpec::new(*n, format!("the level of {n}")))
        .collect()
}

// Deterministic answer per prompt text.
fn answer(prompt: &str) -> String {
    let h = prompt
        .bytes()
        .fold(7u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
    match h % 7 {
        0 => "not sure".into(),
        1..=3 => "True".into(),
        _ => "false".into(),
    }
}

#[test]
fn interrupted_run_resumes_to_the_same_matrix() {
    let template = PromptTemplate::default();
    let config = BuildConfig {
        parallelism: 3,
        ..BuildConfig::new("resume", "m", 6)
    };
    let reference = {
        let oracle = FnOracle::new("m", |p: &str| Ok(answer(p)));
        build_matrix(
            &vars(),
            Some(&oracle),
            &template,
            &ResponseCache::in_memory(),
            &config,
        )
        .unwrap()
        .matrix
    };

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let calls = AtomicUsize::new(0);
    let dying = FnOracle::new("m", |p: &str| {
        if calls.fetch_add(1, Ordering::SeqCst) >= 25 {
            Err("connection reset".into())
        } else {
            Ok(answer(p))
        }
    });
    let first = build_matrix(
        &vars(),
        Some(&dying),
        &template,
        &ResponseCache::open(&path).unwrap(),
        &config,
    );
    assert!(matches!(first, Err(Error::Transport { .. })));

    // Simulate a crash mid-write.
    let mut bytes = std::fs::read(&path).unwrap();
    bytes.extend_from_slice(b"{\"dataset\":\"resu");
    std::fs::write(&path, bytes).unwrap();

    let cache = ResponseCache::open(&path).unwrap();
    let cached = cache.len();
    assert!(cached >= 20);
    let oracle = FnOracle::new("m", |p: &str| Ok(answer(p)));
    let resumed = build_matrix(&vars(), Some(&oracle), &template, &cache, &config).unwrap();
    assert_eq!(resumed.matrix, reference);
    assert_eq!(resumed.queried + cached, cache.len());

    let replay = build_matrix(
        &vars(),
        None,
        &template,
        &ResponseCache::open(&path).unwrap(),
        &config,
    )
    .unwrap();
    assert_eq!(replay.queried, 0);
    assert_eq!(replay.matrix, reference);
}
