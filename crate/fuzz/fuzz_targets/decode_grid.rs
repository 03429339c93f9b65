#![no_main]
use libfuzzer_sys::fuzz_target;
use qes::classical::{decode_grid, GridDump};

fuzz_target!(|data: &[u8]| {
    match decode_grid(data) {
        Ok(GridDump::Density(rho)) => assert_eq!(rho.to_bytes(), data),
        Ok(GridDump::Field(psi)) => assert_eq!(psi.to_bytes(), data),
        Err(_) => {}
    }
});
