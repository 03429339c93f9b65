#![no_main]
use libfuzzer_sys::fuzz_target;
use qes::experiments::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    if data.len() > 64 * 1024 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::from_toml(s) {
        let text = cfg.to_toml();
        let back = ExperimentConfig::from_toml(&text).expect("printed config reparses");
        assert_eq!(back.to_toml(), text);
    }
});
