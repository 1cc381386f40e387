#![no_main]

use libfuzzer_sys::fuzz_target;
use sl2_lyapunov::config::ModelConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ModelConfig::from_json(text) {
        if let Ok(r) = cfg.resolve() {
            // a resolved model always passes validation and classification
            r.model.validate().expect("resolved model is valid");
            let _ = sl2_lyapunov::coeffs::classify_zeros(&sl2_lyapunov::coeffs::build_coefficients(&r.model));
        }
    }
});
