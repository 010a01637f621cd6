//! Acceptance criteria 1-11. Each test prints one PASS/FAIL line to stderr.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use fsgap::criteria::{closed_form_bound, default_lambda, kset, LatticeKind};
use fsgap::gapver::{
    one_magnon_gap, one_magnon_gap_graph, spectral_gap, verify_pipeline, Boundary, EdOptions,
    SpinSystem,
};
use fsgap::profiles::CoefficientProfile;
use fsgap::scalars::QuadraticScalar;
use fsgap::tuner::{
    asymptotic_probe, optimize_lambda, paper_default_threshold, published, read_table_csv,
    TuneConfig, TABLE_TOLERANCE,
};
use fsgap::weight_oracle::{build_torus, census_vs_kset, run_census, SimpleGraph};

// criteria run one at a time so wall-clock budgets are not shared
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(n: u32, name: &str, ok: bool, elapsed: Duration, budget: Duration, detail: &str) -> bool {
    let in_time = elapsed <= budget;
    let pass = ok && in_time;
    let mut line = format!(
        "acceptance criterion {n:>2} {}: {name}; {:.2}s of {}s; {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    if ok && !in_time {
        line.push_str("; over time budget");
    }
    let _ = writeln!(std::io::stderr(), "{line}");
    pass
}

fn run_tables(args: &[&str], expected: &[f64]) -> (bool, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_fsgap"))
        .args(args)
        .output()
        .expect("binary runs");
    let rows = match read_table_csv(o.stdout.as_slice()) {
        Ok(r) => r,
        Err(e) => return (false, format!("unreadable CSV: {e}")),
    };
    let mut worst = 0.0f64;
    let mut all = rows.len() == expected.len();
    for (r, p) in rows.iter().zip(expected) {
        let rounded = (r.t_ell * 1000.0).round() / 1000.0;
        let d = (rounded - p).abs();
        worst = worst.max(d);
        all &= r.feasible && d <= TABLE_TOLERANCE + 1e-12;
    }
    let ok = all && o.status.code() == Some(0);
    (
        ok,
        format!(
            "{} rows, max |diff| {worst:.4}, exit {:?}",
            rows.len(),
            o.status.code()
        ),
    )
}

#[test]
fn criterion_01_table_one() {
    let _g = serial();
    let t = Instant::now();
    let (ok, detail) = run_tables(
        &[
            "tables",
            "--lattice",
            "hypercubic",
            "--dim",
            "2",
            "--ell",
            "2..9",
            "--compare",
            "paper",
        ],
        &published::HYPERCUBIC_D2.1,
    );
    assert!(report(
        1,
        "hypercubic D=2 table",
        ok,
        t.elapsed(),
        Duration::from_secs(10),
        &detail
    ));
}

#[test]
fn criterion_02_table_two() {
    let _g = serial();
    let t = Instant::now();
    let (ok, detail) = run_tables(
        &[
            "tables",
            "--lattice",
            "hypercubic",
            "--dim",
            "3",
            "--ell",
            "2..9",
            "--compare",
            "paper",
        ],
        &published::HYPERCUBIC_D3.1,
    );
    assert!(report(
        2,
        "hypercubic D=3 table",
        ok,
        t.elapsed(),
        Duration::from_secs(10),
        &detail
    ));
}

#[test]
fn criterion_03_tables_three_and_four() {
    let _g = serial();
    let t = Instant::now();
    let (ok_h, det_h) = run_tables(
        &[
            "tables",
            "--lattice",
            "honeycomb",
            "--ell",
            "3..9",
            "--compare",
            "paper",
        ],
        &published::HONEYCOMB.1,
    );
    let th = t.elapsed();
    let t2 = Instant::now();
    let (ok_t, det_t) = run_tables(
        &[
            "tables",
            "--lattice",
            "triangular",
            "--ell",
            "3..9",
            "--compare",
            "paper",
        ],
        &published::TRIANGULAR.1,
    );
    let tt = t2.elapsed();
    let budget = Duration::from_secs(10);
    let ok = ok_h && ok_t && th <= budget && tt <= budget;
    let detail = format!(
        "honeycomb {det_h} in {:.2}s; triangular {det_t} in {:.2}s",
        th.as_secs_f64(),
        tt.as_secs_f64()
    );
    assert!(report(
        3,
        "honeycomb and triangular tables",
        ok,
        t.elapsed(),
        Duration::from_secs(20),
        &detail
    ));
}

#[test]
fn criterion_04_asymptotics() {
    let _g = serial();
    let t = Instant::now();
    let targets = [
        (LatticeKind::Hypercubic { dim: 2 }, 7.2),
        (LatticeKind::Honeycomb, 228.0 / 55.0),
        (LatticeKind::Triangular, 28.8),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (lat, target) in targets {
        let p = asymptotic_probe(lat, &[10_000]).unwrap();
        let v = p[0].ell_sq_t_float;
        let rel = (v - target).abs() / target;
        ok &= rel <= 0.01;
        parts.push(format!(
            "{} {v:.4} vs {target:.4} ({:.3}%)",
            lat.name(),
            100.0 * rel
        ));
    }
    assert!(report(
        4,
        "asymptotic l^2 t at l=10^4",
        ok,
        t.elapsed(),
        Duration::from_secs(5),
        &parts.join(", ")
    ));
}

#[test]
fn criterion_05_bounds_dominate() {
    let _g = serial();
    let t = Instant::now();
    let lattices = [
        LatticeKind::Hypercubic { dim: 2 },
        LatticeKind::Honeycomb,
        LatticeKind::Triangular,
    ];
    let mut failures = Vec::new();
    for lat in lattices {
        for ell in 10..=100 {
            let r = paper_default_threshold(lat, ell).unwrap();
            let b = QuadraticScalar::rational(closed_form_bound(lat, ell).unwrap());
            if r.t_ell.cmp_exact(&b).unwrap() == Ordering::Greater {
                failures.push(format!("{} l={ell}", lat.name()));
            }
        }
    }
    let detail = if failures.is_empty() {
        "273 exact comparisons".to_string()
    } else {
        format!("exceeded at {}", failures.join(", "))
    };
    assert!(report(
        5,
        "closed-form bounds dominate",
        failures.is_empty(),
        t.elapsed(),
        Duration::from_secs(5),
        &detail
    ));
}

#[test]
fn criterion_06_census_equality() {
    let _g = serial();
    let t = Instant::now();
    let lattices = [
        LatticeKind::Hypercubic { dim: 2 },
        LatticeKind::Hypercubic { dim: 3 },
        LatticeKind::Honeycomb,
        LatticeKind::Triangular,
    ];
    let mut failures = Vec::new();
    let mut count = 0;
    for lat in lattices {
        for ell in [2, 3] {
            let profiles = [
                ("uniform", CoefficientProfile::uniform(ell).unwrap()),
                (
                    "quadratic",
                    CoefficientProfile::quadratic(ell, default_lambda(lat, ell)).unwrap(),
                ),
            ];
            for (label, p) in profiles {
                count += 1;
                let (_, c) = run_census(lat, &p, Some(2 * ell + 1)).unwrap();
                let rep = census_vs_kset(&c, &kset(lat, &p).unwrap()).unwrap();
                for row in rep.rows.iter().filter(|r| !r.equal) {
                    failures.push(format!(
                        "{lat} l={ell} {label} {} census {} vs closed form {}",
                        row.name,
                        row.census
                            .as_ref()
                            .map(|x| x.to_string())
                            .unwrap_or_default(),
                        row.formula
                    ));
                }
                if !rep.residual_ok {
                    failures.push(format!(
                        "{lat} l={ell} {label} residual above {}",
                        rep.dominating
                    ));
                }
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("{count} configurations equal")
    } else {
        format!("{} mismatches: {}", failures.len(), failures.join("; "))
    };
    assert!(report(
        6,
        "census oracle equality",
        failures.is_empty(),
        t.elapsed(),
        Duration::from_secs(60),
        &detail
    ));
}

#[test]
fn criterion_07_feasibility_sweep() {
    let _g = serial();
    let t = Instant::now();
    let mut failures = Vec::new();
    for ell in 3..=200 {
        let lat = LatticeKind::Hypercubic { dim: 2 };
        let k = kset(
            lat,
            &CoefficientProfile::quadratic(ell, default_lambda(lat, ell)).unwrap(),
        )
        .unwrap();
        let k3 = k.get("K3").unwrap();
        if k3 < k.get("K_collinear").unwrap() || k3 < k.get("K_parallel").unwrap() {
            failures.push(format!("hypercubic l={ell}"));
        }
        let lat = LatticeKind::Triangular;
        let k = kset(
            lat,
            &CoefficientProfile::quadratic(ell, default_lambda(lat, ell)).unwrap(),
        )
        .unwrap();
        let k2 = k.get("K2").unwrap();
        if k2 < k.get("K1").unwrap() || k2 < k.get("K3").unwrap() {
            failures.push(format!("triangular l={ell}"));
        }
    }
    let detail = if failures.is_empty() {
        "l=3..200 feasible on both lattices".to_string()
    } else {
        failures.join(", ")
    };
    assert!(report(
        7,
        "feasibility sweep",
        failures.is_empty(),
        t.elapsed(),
        Duration::from_secs(10),
        &detail
    ));
}

#[test]
fn criterion_08_prefactor_bounds() {
    let _g = serial();
    let t = Instant::now();
    let half = QuadraticScalar::from_ratio(1, 2).unwrap();
    let mut failures = Vec::new();
    for ell in 10..=100 {
        for dim in 2..=4 {
            let lat = LatticeKind::Hypercubic { dim };
            let k = kset(
                lat,
                &CoefficientProfile::quadratic(ell, default_lambda(lat, ell)).unwrap(),
            )
            .unwrap();
            let ratio = k.get("K4").unwrap() / k.get("K3").unwrap();
            if ratio < QuadraticScalar::from_ratio(5, 6).unwrap().pow(dim as u32) {
                failures.push(format!("D={dim} l={ell}"));
            }
        }
        let lat = LatticeKind::Honeycomb;
        let k = kset(
            lat,
            &CoefficientProfile::quadratic(ell, default_lambda(lat, ell)).unwrap(),
        )
        .unwrap();
        if k.get("K3").unwrap() / k.get("K1").unwrap() < half {
            failures.push(format!("honeycomb l={ell}"));
        }
        let lat = LatticeKind::Triangular;
        let k = kset(
            lat,
            &CoefficientProfile::quadratic(ell, default_lambda(lat, ell)).unwrap(),
        )
        .unwrap();
        if k.get("K5").unwrap() / k.get("K2").unwrap() < half {
            failures.push(format!("triangular l={ell}"));
        }
    }
    let detail = if failures.is_empty() {
        "all exact comparisons hold for l=10..100".to_string()
    } else {
        failures.join(", ")
    };
    assert!(report(
        8,
        "prefactor bounds",
        failures.is_empty(),
        t.elapsed(),
        Duration::from_secs(10),
        &detail
    ));
}

#[test]
fn criterion_09_ed_identities() {
    let _g = serial();
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut chain_err = 0.0f64;
    for n in 2..=8 {
        let g = SimpleGraph::open_chain(n);
        let ed = spectral_gap(&SpinSystem::heisenberg(g.clone()).unwrap())
            .unwrap()
            .gamma;
        let err = (ed - (1.0 - (PI / n as f64).cos())).abs();
        chain_err = chain_err.max(err);
        if err > 1e-10 {
            failures.push(format!("chain N={n} error {err:e}"));
        }
        if ed > one_magnon_gap_graph(&g).unwrap() + 1e-8 {
            failures.push(format!("chain N={n} above one-magnon"));
        }
    }
    let mut torus_err = 0.0f64;
    for l in 3..=12 {
        let g = one_magnon_gap(LatticeKind::Hypercubic { dim: 2 }, l, Boundary::Periodic).unwrap();
        let err = (g - (1.0 - (2.0 * PI / l as f64).cos())).abs();
        torus_err = torus_err.max(err);
        if err > 1e-12 {
            failures.push(format!("square torus L={l} error {err:e}"));
        }
    }
    let graphs = [
        (LatticeKind::Hypercubic { dim: 2 }, 3),
        (LatticeKind::Hypercubic { dim: 2 }, 4),
        (LatticeKind::Triangular, 3),
        (LatticeKind::Honeycomb, 2),
    ];
    for (lat, l) in graphs {
        let g = build_torus(lat, l).unwrap().to_graph();
        let ed = spectral_gap(&SpinSystem::heisenberg(g.clone()).unwrap())
            .unwrap()
            .gamma;
        let magnon = one_magnon_gap_graph(&g).unwrap();
        if ed > magnon + 1e-8 {
            failures.push(format!(
                "{lat} torus L={l}: ED {ed} above one-magnon {magnon}"
            ));
        }
    }
    let detail = if failures.is_empty() {
        format!("chain max error {chain_err:.1e}, torus max error {torus_err:.1e}, ED <= one-magnon on 11 graphs")
    } else {
        failures.join("; ")
    };
    assert!(report(
        9,
        "ED identities",
        failures.is_empty(),
        t.elapsed(),
        Duration::from_secs(60),
        &detail
    ));
}

#[test]
fn criterion_10_criterion_soundness() {
    let _g = serial();
    let t = Instant::now();
    let lat = LatticeKind::Hypercubic { dim: 2 };
    let tuned = optimize_lambda(&TuneConfig::new(lat, 2)).unwrap().report;
    let res = verify_pipeline(lat, 4, 2, &tuned, &EdOptions::default()).unwrap();
    let v = &res.verdict;
    let detail = format!(
        "L=4 torus gamma {:.6} ({:?}), 3x3 open gamma {:.6}, t {:.4}, prefactor {:.4}, margin {:.4}, certifying {}",
        v.gamma_l, res.torus.method, v.gamma_ell, v.t_ell, v.prefactor, v.margin, v.certifying
    );
    assert!(report(
        10,
        "criterion soundness",
        v.holds,
        t.elapsed(),
        Duration::from_secs(300),
        &detail
    ));
}

#[test]
fn criterion_11_spin_wave_constants() {
    let _g = serial();
    let t = Instant::now();
    let ell = 200;
    let mut parts = Vec::new();
    let mut within = true;
    for (lat, target) in [
        (LatticeKind::Honeycomb, 0.9),
        (LatticeKind::Triangular, 5.3),
    ] {
        let l2 = (ell * ell) as f64;
        let open = l2 * one_magnon_gap(lat, ell, Boundary::Open).unwrap();
        let torus = l2 * one_magnon_gap(lat, ell, Boundary::Periodic).unwrap();
        let rel = (open - target).abs() / target;
        within &= rel <= 0.2;
        parts.push(format!(
            "{} open box {open:.3} vs {target} ({:.1}%), torus {torus:.3}",
            lat.name(),
            100.0 * rel
        ));
    }
    parts.push(
        "normalization: singlet projectors, one-magnon gap = half graph Laplacian, open slanted box of side l; soft".into(),
    );
    let elapsed = t.elapsed();
    // soft criterion: a miss is reported, not failed
    report(
        11,
        "spin-wave constants",
        within,
        elapsed,
        Duration::from_secs(30),
        &parts.join(", "),
    );
}
