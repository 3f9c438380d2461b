#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use vrcaptcha_core::gateway::wire::route;
use vrcaptcha_core::gateway::{Gateway, GatewayConfig};

fn gateway() -> &'static Gateway {
    static GW: OnceLock<Gateway> = OnceLock::new();
    GW.get_or_init(|| Gateway::new(GatewayConfig::default()).expect("default gateway").with_seed(0))
}

// first byte picks the endpoint, the rest is the request body
fuzz_target!(|data: &[u8]| {
    let Some((&selector, body)) = data.split_first() else { return };
    let gw = gateway();
    let r = match selector % 3 {
        0 => route(gw, "POST", "/v1/challenges", body),
        1 => route(gw, "POST", "/v1/challenges/x/answer", body),
        _ => route(gw, "GET", "/v1/health", body),
    };
    assert!(serde_json::from_str::<serde_json::Value>(&r.body).is_ok());
    gw.sweep_expired(f64::INFINITY);
});
