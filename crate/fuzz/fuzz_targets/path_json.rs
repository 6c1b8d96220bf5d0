#![no_main]

use coadjoint::json::{path_from_str, path_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = path_from_str(s) {
        let _ = p.endpoint();
        let _ = path_to_json(&p);
        let _ = p.point(0.5);
    }
});
