#![no_main]

use libfuzzer_sys::fuzz_target;
use vrcaptcha_core::humanness::CalibrationArtifact;

fuzz_target!(|data: &str| {
    if let Ok(artifact) = CalibrationArtifact::from_json(data) {
        let again = CalibrationArtifact::from_json(&artifact.to_json()).expect("round trip");
        assert_eq!(again, artifact);
    }
});
