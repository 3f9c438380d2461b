#![no_main]

use libfuzzer_sys::fuzz_target;
use vrcaptcha_core::challenge::{generate, Catalog, GenerationParams};
use vrcaptcha_core::model::ChallengeKind;

fuzz_target!(|data: &str| {
    if let Ok(catalog) = Catalog::from_toml_str(data) {
        for kind in ChallengeKind::ALL {
            let _ = generate(kind, 1, &catalog, &GenerationParams::default());
        }
    }
});
