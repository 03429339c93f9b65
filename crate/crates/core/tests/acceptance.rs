//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status
//! if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qes::algebra::{Ladder, Mode, OperatorExpr, Species};
use qes::experiments::{
    run_by_name, run_classical_suite, run_sign_of_forces, run_single_electron_immunity, run_spreading_comparison,
    run_vacuum_instability, ExperimentConfig, ResultRecord, EXPERIMENTS,
};
use qes::fock::{apply_ladder, to_matrix, Basis, ModeSet, Sector, SparseOperator, StateVector};
use qes::model::{gaussian_packet, Model, ModelConfig};
use qes::Complex64;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// All verdicts of `names` must pass; lists them as `name value rel threshold`.
fn verdicts(rec: &ResultRecord, names: &[&str]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in names {
        match rec.verdict(n) {
            Some(v) => {
                ok &= v.passed;
                parts.push(format!("{n} {:e} {} {:e}", v.value, v.relation.symbol(), v.threshold));
            }
            None => {
                ok = false;
                parts.push(format!("{n} missing"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn within(secs: f64, limit: f64) -> (bool, String) {
    (secs <= limit, format!("{secs:.2} s <= {limit} s"))
}

fn random_word(rng: &mut ChaCha8Rng, modes: &[Mode]) -> OperatorExpr {
    let n = rng.random_range(0..=4);
    let factors: Vec<Ladder> = (0..n)
        .map(|_| {
            let m = modes[rng.random_range(0..modes.len())];
            if rng.random::<bool>() {
                m.create()
            } else {
                m.annihilate()
            }
        })
        .collect();
    let c = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    OperatorExpr::product(c, factors)
}

fn wick_equivalence() -> Outcome {
    let start = Instant::now();
    let mut modes = Vec::new();
    for s in 1..=2 {
        for p in [[0, 0, 0], [1, 0, 0]] {
            modes.push(Mode::electron(s, p));
            modes.push(Mode::positron(s, p));
        }
    }
    let set = Arc::new(ModeSet::new(modes.clone()).unwrap());
    let basis = Basis::enumerate(set, &Sector::all()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut acting = 0;
    for _ in 0..500 {
        let a = random_word(&mut rng, &modes);
        let lhs = to_matrix(&a.wick_reorder(), &basis).unwrap();
        let rhs = to_matrix(&a, &basis).unwrap();
        acting += !rhs.is_zero() as usize;
        worst = worst.max((&lhs - &rhs).max_abs());
    }
    let (fast, t) = within(start.elapsed().as_secs_f64(), 60.0);
    outcome(
        worst <= 1e-12 && fast && basis.len() == 256,
        format!("500 words on 8 modes (dim {}, {acting} nonzero): max |diff| {worst:e} <= 1e-12; {t}", basis.len()),
    )
}

fn immunity(rec: &ResultRecord) -> Outcome {
    let (ok, d) = verdicts(rec, &["full_block_max", "evolution_deviation", "periods_spanned"]);
    let (fast, t) = within(rec.wall_time_s, 120.0);
    outcome(ok && fast, format!("{d}; {t}"))
}

fn self_repulsion(cfg: &ModelConfig, rec: &ResultRecord) -> Outcome {
    let model = Model::new(cfg).unwrap();
    let b = Basis::enumerate(model.modes(), &Sector::all().with_particles(1).with_charge(-1)).unwrap();
    let h = to_matrix(&model.bad_electron_term(), &b).unwrap();
    let diag_ok = (0..b.len()).all(|i| {
        let d = h.get(i, i);
        d.re > 0.0 && d.im == 0.0
    });
    let (ok, d) = verdicts(rec, &["bad_vs_free"]);
    let (fast, t) = within(rec.wall_time_s, 120.0);
    outcome(
        h.max_abs() > 0.0 && diag_ok && ok && fast,
        format!("block max {:e} > 0; diagonal positive real: {diag_ok}; {d}; {t}", h.max_abs()),
    )
}

fn completeness() -> Outcome {
    let mut worst = 0.0f64;
    let mut sectors = 0;
    for cfg in [ModelConfig::default(), ModelConfig::one_dimensional()] {
        let model = Model::new(&cfg).unwrap();
        let full = model.coulomb_full();
        let pieces = model.coulomb_pieces();
        let cap = cfg.max_particles;
        let mut list = vec![model.sector()];
        for n in 0..=cap {
            for q in -(n as i32)..=(n as i32) {
                if (q + n as i32) % 2 == 0 {
                    list.push(Sector::all().with_particles(n).with_charge(q));
                }
            }
        }
        for sector in list {
            let b = Basis::enumerate(model.modes(), &sector).unwrap();
            let whole = to_matrix(&full, &b).unwrap();
            let mut sum = SparseOperator::zeros(b.len());
            for (_, p) in pieces.named() {
                sum = &sum + &to_matrix(p, &b).unwrap();
            }
            worst = worst.max((&whole - &sum).max_abs());
            sectors += 1;
        }
    }
    outcome(worst == 0.0, format!("{sectors} default sectors (3D and 1D): max |full - sum of pieces| = {worst:e}, exact"))
}

/// `<psi| expr |psi>` by applying every term's ladders to every basis
/// component, independent of matrix assembly.
fn brute_expectation(expr: &OperatorExpr, basis: &Basis, psi: &StateVector) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &a) in psi.amplitudes().iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for t in expr.terms() {
            let mut state = Some((1.0, basis.state(j)));
            for l in t.factors.iter().rev() {
                state = state.and_then(|(s, st)| apply_ladder(basis.modes(), *l, st).unwrap().map(|(s2, n)| (s * s2, n)));
            }
            if let Some((sign, image)) = state {
                if let Some(i) = basis.index_of(image) {
                    acc += psi.amplitudes()[i].conj() * t.coeff * sign * a;
                }
            }
        }
    }
    acc
}

fn signs(ec: &ExperimentConfig, rec: &ResultRecord) -> Outcome {
    let (ok, d) = verdicts(rec, &["ee_expectation", "ep_expectation", "pp_expectation"]);
    let model = Model::new(&ec.model).unwrap();
    let pieces = model.coulomb_pieces();
    let p = &ec.signs;
    let packet = |sp, spin| gaussian_packet(&model, sp, spin, p.center, p.sigma, [0.0; 3]);
    let mut oracle_ok = true;
    let mut values = Vec::new();
    for (name, piece, q, a, b, want) in [
        ("ee", &pieces.ee, -2, Species::Electron, Species::Electron, 1.0),
        ("ep", &pieces.ep, 0, Species::Electron, Species::Positron, -1.0),
        ("pp", &pieces.pp, 2, Species::Positron, Species::Positron, 1.0),
    ] {
        let basis = Basis::enumerate(model.modes(), &Sector::all().with_particles(2).with_charge(q)).unwrap();
        let spin_b = if a == b { 2 } else { 1 };
        let psi = StateVector::from_orbitals(&basis, &[packet(a, 1), packet(b, spin_b)]).unwrap().normalized();
        let v = brute_expectation(piece, &basis, &psi).re;
        oracle_ok &= v * want > 0.0;
        values.push(format!("{name} {v:e}"));
    }
    outcome(ok && oracle_ok, format!("{d}; oracle {}", values.join(", ")))
}

fn vacuum(rec: &ResultRecord) -> Outcome {
    let (ok, d) = verdicts(
        rec,
        &[
            "vacuum_expectation",
            "coulomb_acts_on_vacuum",
            "ground_energy_negative",
            "ground_pair_weight",
            "monotone_in_coupling",
            "coupling_count",
            "dense_sector_dimension",
            "dense_energy_match",
            "dense_vector_match",
        ],
    );
    outcome(ok, d)
}

fn classical_scaling(ec: &ExperimentConfig, rec: &ResultRecord) -> Outcome {
    let (ok, d) = verdicts(rec, &["energy_times_sigma_constant", "scaling_matches_reference", "fft_matches_direct"]);
    let c = &ec.classical;
    let small = c.oracle_points_3d <= 32 && c.oracle_points_1d <= 32;
    let (fast, t) = within(rec.wall_time_s, 60.0);
    outcome(ok && small && fast, format!("{d}; {t}"))
}

fn figure_two(rec: &ResultRecord) -> Outcome {
    let (ok, d) = verdicts(rec, &["split_invariance", "top_bottom_self_energy_excess"]);
    outcome(ok, d)
}

fn determinism(ec: &ExperimentConfig) -> Outcome {
    let mut mismatched = Vec::new();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    for name in EXPERIMENTS {
        let a = run_by_name(name, ec).unwrap();
        let b = single.install(|| run_by_name(name, ec)).unwrap();
        let csv = |r: &ResultRecord| r.series.values().map(|s| s.to_csv()).collect::<Vec<_>>();
        if a.to_json() != b.to_json() || csv(&a) != csv(&b) {
            mismatched.push(name);
        }
    }
    outcome(
        mismatched.is_empty(),
        format!("5 experiments rerun on one thread: JSON and CSV byte-identical; mismatches {mismatched:?}"),
    )
}

fn main() -> ExitCode {
    let ec = ExperimentConfig::default();
    let rec_immunity = run_single_electron_immunity(&ec).unwrap();
    let rec_spread = run_spreading_comparison(&ec).unwrap();
    let rec_signs = run_sign_of_forces(&ec).unwrap();
    let rec_vacuum = run_vacuum_instability(&ec).unwrap();
    let rec_classical = run_classical_suite(&ec).unwrap();

    let results = [
        ("wick equivalence", wick_equivalence()),
        ("single-electron immunity", immunity(&rec_immunity)),
        ("self-repulsion artifact", self_repulsion(&ec.model, &rec_spread)),
        ("decomposition completeness", completeness()),
        ("interaction signs", signs(&ec, &rec_signs)),
        ("vacuum instability", vacuum(&rec_vacuum)),
        ("classical Coulomb scaling", classical_scaling(&ec, &rec_classical)),
        ("figure-2 decomposition", figure_two(&rec_classical)),
        ("determinism", determinism(&ec)),
    ];
    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        all &= o.passed;
        println!("criterion {} {} {name}: {}", i + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
