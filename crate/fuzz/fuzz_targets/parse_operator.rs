#![no_main]
use libfuzzer_sys::fuzz_target;
use qes::algebra::parse_expr;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(a) = parse_expr(s) {
        // printing is lossless for finite coefficients
        if a.terms().iter().all(|t| t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
            let b = parse_expr(&a.to_string()).expect("printed form reparses");
            assert_eq!(a, b);
        }
        let _ = a.wick_reorder();
        let _ = a.normal_order();
    }
});
