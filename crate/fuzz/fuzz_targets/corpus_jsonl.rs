#![no_main]

use libfuzzer_sys::fuzz_target;
use vrcaptcha_core::agents::{read_corpus, write_corpus};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_corpus(data) {
        let mut out = Vec::new();
        write_corpus(&mut out, &records).expect("writing to memory succeeds");
    }
});
