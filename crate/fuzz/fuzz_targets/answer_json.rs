#![no_main]

use libfuzzer_sys::fuzz_target;
use vrcaptcha_core::challenge::{generate, Catalog, GenerationParams};
use vrcaptcha_core::verify::{verify, Answer, VerifyConfig};

fuzz_target!(|data: &str| {
    if let Ok(answer) = serde_json::from_str::<Answer>(data) {
        let challenge =
            generate(answer.kind(), data.len() as u64, &Catalog::builtin(), &GenerationParams::default())
                .expect("default generation succeeds");
        let v = verify(&challenge, &answer, &VerifyConfig::default());
        assert!((0.0..=1.0).contains(&v.correctness()));
    }
});
