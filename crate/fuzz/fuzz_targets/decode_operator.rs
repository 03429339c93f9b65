#![no_main]
use libfuzzer_sys::fuzz_target;
use qes::fock::SparseOperator;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = SparseOperator::from_bytes(data) {
        let again = SparseOperator::from_bytes(&m.to_bytes()).expect("encoded operator decodes");
        assert_eq!(again.to_bytes(), m.to_bytes());
        let _ = m.matvec(&vec![Default::default(); m.dim()]);
    }
});
