#![no_main]

use coadjoint_cli::JobConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = JobConfig::parse(s, "fuzz") {
        // Validation only; running a job is unbounded work.
        let _ = cfg.resolve();
    }
});
