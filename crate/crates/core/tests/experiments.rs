use qes::experiments::*;
use qes::fock::Sector;

fn free_theory() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.model.charge = 0.0;
    cfg
}

#[test]
fn partial_ordering_breaks_immunity() {
    let rec = run_single_electron_immunity(&ExperimentConfig::default()).unwrap();
    assert!(rec.passed());
    assert!(rec.scalars["partial_block_max"] > 0.0);
    assert!(rec.scalars["partial_evolution_deviation"] > 1e-6);
    // pair creation is real but tiny at this coupling
    assert!(rec.scalars["dressed_leakage"] > 0.0 && rec.scalars["dressed_leakage"] < 1e-6);
    assert!(rec.total_dropped() > 0);
}

#[test]
fn free_theory_has_empty_blocks() {
    let rec = run_single_electron_immunity(&free_theory()).unwrap();
    assert_eq!(rec.verdict("full_block_max").unwrap().value, 0.0);
    assert_eq!(rec.scalars["partial_block_max"], 0.0);
    let signs = run_sign_of_forces(&free_theory()).unwrap();
    assert!(signs.passed());
    for n in ["ee_expectation", "ep_expectation", "pp_expectation"] {
        assert_eq!(signs.verdict(n).unwrap().value, 0.0);
    }
}

#[test]
fn empty_sector_is_an_error() {
    let mut cfg = ExperimentConfig::default();
    cfg.immunity.sector = Sector::all().with_particles(1).with_charge(-3);
    assert!(run_single_electron_immunity(&cfg).is_err());
}

#[test]
fn short_runs_fail_the_period_check() {
    let mut cfg = ExperimentConfig::default();
    cfg.immunity.time.periods = 2.0;
    cfg.immunity.dressed_max_particles = None;
    let rec = run_single_electron_immunity(&cfg).unwrap();
    assert!(!rec.verdict("periods_spanned").unwrap().passed);
    assert!(!rec.passed());
}

#[test]
fn spread_curves_start_together() {
    let rec = run_spreading_comparison(&ExperimentConfig::default()).unwrap();
    let s = &rec.series["spread"];
    assert_eq!(s.columns, ["t", "free", "full", "bad"]);
    assert_eq!(s.rows.len(), 41);
    assert!(s.rows[0][1] == s.rows[0][3] && s.rows[0][1] > 0.0);
    assert_eq!(s.column("free"), s.column("full"));
    assert!(rec.notes["bound_state"].contains("energy higher"));
}

#[test]
fn vacuum_needs_the_vacuum() {
    let mut cfg = ExperimentConfig::default();
    cfg.vacuum.sector = Sector::all().with_particles(2).with_charge(0);
    assert!(run_vacuum_instability(&cfg).is_err());
}

#[test]
fn seed_changes_the_immunity_state() {
    let a = run_single_electron_immunity(&ExperimentConfig::default()).unwrap();
    let mut cfg = ExperimentConfig::default();
    cfg.seed = 99;
    let b = run_single_electron_immunity(&cfg).unwrap();
    assert_ne!(a.config_hash, b.config_hash);
    assert_ne!(a.series["deviation"], b.series["deviation"]);
    assert!(b.passed());
}

#[test]
fn classical_tables() {
    let rec = run_classical_suite(&ExperimentConfig::default()).unwrap();
    let t = &rec.series["scaling"];
    assert_eq!(t.rows.len(), 3);
    let sig = t.column("sigma").unwrap();
    assert_eq!(sig, [0.25, 0.5, 1.0]);
    let u = t.column("energy").unwrap();
    assert!(u[0] > u[1] && u[1] > u[2]);
    assert_eq!(rec.series["decomposition"].rows.len(), 2);
}

#[test]
fn records_write_their_files() {
    let dir = std::env::temp_dir().join(format!("qes-exp-{}", std::process::id()));
    let rec = run_sign_of_forces(&ExperimentConfig::default()).unwrap();
    let files = rec.write(&dir, false).unwrap();
    let names: Vec<String> = files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names, ["signs.json", "signs.timing.json"]);
    let back: ResultRecord = serde_json::from_str(&std::fs::read_to_string(&files[0]).unwrap()).unwrap();
    assert_eq!(back.verdicts, rec.verdicts);
    std::fs::remove_dir_all(&dir).unwrap();
}
