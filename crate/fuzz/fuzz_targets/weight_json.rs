#![no_main]

use coadjoint::rootdata::{weight_from_json, weight_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = weight_from_json(s) {
        assert_eq!(weight_from_json(&weight_to_json(&w)).expect("round trip"), w);
    }
});
