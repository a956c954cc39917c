#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    qgame_cli::fuzz_checks::psdp_result(data);
});
