#![no_main]

use libfuzzer_sys::fuzz_target;
use vrcaptcha_core::gateway::GatewayConfig;

fuzz_target!(|data: &str| {
    if let Ok(mut cfg) = GatewayConfig::from_toml_str(data) {
        let _ = cfg.apply_env([("VRCAPTCHA_GATING", data)]);
    }
});
