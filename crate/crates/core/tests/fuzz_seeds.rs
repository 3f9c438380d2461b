//! Replays the checked-in fuzz seeds through the parser entry points, so the
//! seeds stay valid inputs as formats evolve.

use std::fs;
use std::path::PathBuf;

use vrcaptcha_core::agents::{read_corpus, write_corpus};
use vrcaptcha_core::challenge::Catalog;
use vrcaptcha_core::gateway::wire::route;
use vrcaptcha_core::gateway::{Gateway, GatewayConfig};
use vrcaptcha_core::humanness::CalibrationArtifact;
use vrcaptcha_core::model::InteractionTrace;
use vrcaptcha_core::verify::Answer;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

#[test]
fn trace_seeds() {
    for (name, data) in seeds("trace_json") {
        let parsed = InteractionTrace::from_json(text(&data));
        assert_eq!(parsed.is_ok(), name != "unordered.json", "{name}");
    }
}

#[test]
fn answer_seeds_all_parse() {
    for (name, data) in seeds("answer_json") {
        serde_json::from_str::<Answer>(text(&data)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn config_catalog_and_calibration_seeds_load() {
    for (name, data) in seeds("gateway_config_toml") {
        GatewayConfig::from_toml_str(text(&data)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for (_, data) in seeds("catalog_toml") {
        Catalog::from_toml_str(text(&data)).unwrap();
    }
    for (_, data) in seeds("calibration_json") {
        assert_eq!(&CalibrationArtifact::from_json(text(&data)).unwrap(), CalibrationArtifact::builtin());
    }
    for (_, data) in seeds("corpus_jsonl") {
        let records = read_corpus(data.as_slice()).unwrap();
        let mut out = Vec::new();
        write_corpus(&mut out, &records).unwrap();
        assert_eq!(out, data);
    }
}

#[test]
fn wire_seeds_get_json_responses() {
    let gw = Gateway::new(GatewayConfig::default()).unwrap().with_seed(0);
    for (name, data) in seeds("wire_route") {
        let (&selector, body) = data.split_first().unwrap();
        let r = match selector % 3 {
            0 => route(&gw, "POST", "/v1/challenges", body),
            1 => route(&gw, "POST", "/v1/challenges/x/answer", body),
            _ => route(&gw, "GET", "/v1/health", body),
        };
        assert!(serde_json::from_str::<serde_json::Value>(&r.body).is_ok(), "{name}");
    }
}
