//! Replays the checked-in fuzz corpus, plus truncated and bit-flipped
//! copies of every seed, through the same checks the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use qes::algebra::parse_expr;
use qes::classical::{decode_grid, GridDump};
use qes::experiments::ExperimentConfig;
use qes::fock::{SparseOperator, StateVector};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files.iter().map(|p| fs::read(p).unwrap()).collect()
}

/// Each seed, each of its strict prefixes, and one copy per byte with that
/// byte inverted.
fn variants(seed: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![seed.to_vec()];
    out.extend((0..seed.len()).map(|n| seed[..n].to_vec()));
    for i in 0..seed.len() {
        let mut v = seed.to_vec();
        v[i] = !v[i];
        out.push(v);
    }
    out
}

fn operator_text(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(a) = parse_expr(s) {
        if a.terms().iter().all(|t| t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
            assert_eq!(parse_expr(&a.to_string()).unwrap(), a);
        }
        let _ = a.wick_reorder();
        let _ = a.normal_order();
    }
}

fn state(data: &[u8]) {
    if let Ok(v) = StateVector::from_bytes(data) {
        assert_eq!(v.to_bytes(), data);
    }
}

fn operator(data: &[u8]) {
    if let Ok(m) = SparseOperator::from_bytes(data) {
        let again = SparseOperator::from_bytes(&m.to_bytes()).unwrap();
        assert_eq!(again.to_bytes(), m.to_bytes());
        let _ = m.matvec(&vec![Default::default(); m.dim()]);
    }
}

fn grid(data: &[u8]) {
    match decode_grid(data) {
        Ok(GridDump::Density(rho)) => assert_eq!(rho.to_bytes(), data),
        Ok(GridDump::Field(psi)) => assert_eq!(psi.to_bytes(), data),
        Err(_) => {}
    }
}

fn config(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::from_toml(s) {
        let text = cfg.to_toml();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap().to_toml(), text);
    }
}

#[test]
fn operator_seeds() {
    let all = seeds("parse_operator");
    assert!(all.iter().filter(|s| parse_expr(std::str::from_utf8(s).unwrap()).is_ok()).count() >= 5);
    for s in &all {
        variants(s).iter().for_each(|v| operator_text(v));
    }
}

#[test]
fn state_seeds() {
    for s in seeds("decode_state") {
        assert!(StateVector::from_bytes(&s).is_ok());
        variants(&s).iter().for_each(|v| state(v));
    }
}

#[test]
fn sparse_operator_seeds() {
    for s in seeds("decode_operator") {
        assert!(SparseOperator::from_bytes(&s).is_ok());
        variants(&s).iter().for_each(|v| operator(v));
    }
}

#[test]
fn grid_seeds() {
    for s in seeds("decode_grid") {
        assert!(decode_grid(&s).is_ok());
        variants(&s).iter().for_each(|v| grid(v));
    }
}

#[test]
fn config_seeds() {
    for s in seeds("parse_config") {
        assert!(ExperimentConfig::from_toml(std::str::from_utf8(&s).unwrap()).is_ok());
        variants(&s).iter().for_each(|v| config(v));
    }
}
