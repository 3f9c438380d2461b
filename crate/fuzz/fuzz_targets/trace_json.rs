#![no_main]

use libfuzzer_sys::fuzz_target;
use vrcaptcha_core::humanness::extract_features;
use vrcaptcha_core::model::InteractionTrace;

fuzz_target!(|data: &str| {
    if let Ok(trace) = InteractionTrace::from_json(data) {
        // canonical form must parse back to a trace with the same shape
        let again = InteractionTrace::from_json(&trace.to_canonical_json()).expect("canonical form parses");
        assert_eq!(again.len(), trace.len());
        let _ = trace.normalize().resample(50.0);
        if let Ok(f) = extract_features(&trace) {
            assert!(f.to_array().iter().all(|v| v.is_finite()));
        }
    }
});
