#![no_main]

use coadjoint::quantops::UeaElement;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(e) = s.parse::<UeaElement>() {
        // Display is canonical: reparsing gives the same element.
        let back: UeaElement = e.to_string().parse().expect("display output parses");
        assert_eq!(back, e);
    }
});
