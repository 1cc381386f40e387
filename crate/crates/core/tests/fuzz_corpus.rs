//! Replays the fuzzing corpus seeds through the parser checks.

use std::path::Path;

use sl2_lyapunov::coeffs::{build_coefficients, classify_zeros};
use sl2_lyapunov::config::{ModelConfig, SweepSpec};

fn seeds(dir: &str) -> Vec<(String, String)> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(dir);
    let mut out: Vec<(String, String)> = std::fs::read_dir(&root)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn config_seeds() {
    let mut resolved = 0;
    for (name, text) in seeds("config_json") {
        let Ok(cfg) = ModelConfig::from_json(&text) else {
            continue;
        };
        if let Ok(r) = cfg.resolve() {
            r.model.validate().unwrap();
            classify_zeros(&build_coefficients(&r.model));
            resolved += 1;
        } else {
            assert_eq!(name, "indefinite.json");
        }
    }
    assert_eq!(resolved, 5);
}

#[test]
fn sweep_seeds() {
    for (name, text) in seeds("sweep") {
        match SweepSpec::parse(&text) {
            Ok(s) => {
                let v = s.values();
                assert_eq!((v.len(), v[0], v[s.n - 1]), (s.n, s.start, s.stop));
            }
            Err(_) => assert!(name.starts_with("bad"), "{name}"),
        }
    }
}
