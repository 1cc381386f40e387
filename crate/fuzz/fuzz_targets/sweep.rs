#![no_main]

use libfuzzer_sys::fuzz_target;
use sl2_lyapunov::config::SweepSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = SweepSpec::parse(text) {
        if s.n <= 1 << 16 {
            let v = s.values();
            assert_eq!(v.len(), s.n);
            assert_eq!(v[0], s.start);
            assert_eq!(v[s.n - 1], s.stop);
        }
    }
});
