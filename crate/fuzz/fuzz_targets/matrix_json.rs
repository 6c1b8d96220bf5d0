#![no_main]

use coadjoint::json::{algebra_from_json, group_from_json, matrix_from_str};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(v) = serde_json::from_str::<serde_json::Value>(s) else { return };
    let _ = matrix_from_str(s);
    let _ = algebra_from_json(&v);
    let _ = group_from_json(&v);
});
