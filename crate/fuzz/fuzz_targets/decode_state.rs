#![no_main]
use libfuzzer_sys::fuzz_target;
use qes::fock::StateVector;

fuzz_target!(|data: &[u8]| {
    if let Ok(v) = StateVector::from_bytes(data) {
        assert_eq!(v.to_bytes(), data);
    }
});
