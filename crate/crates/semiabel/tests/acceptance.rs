//! One PASS/FAIL line per acceptance criterion.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiabel::classifier::{detect_cm, motivic_galois_dims, non_cm_curve, table_instance, ClassifierConfig, TableRow};
use semiabel::periods::periods_from_invariants;
use semiabel::relation::detect_integer_relation;
use semiabel::report::{run_verification_suite, CurveSpec, JobConfig, OutputFormat, Payload, Task, VerificationReport};
use semiabel::Lattice;

struct Outcome {
    pass: bool,
    detail: String,
}

fn lattices() -> Vec<(String, Lattice)> {
    let mut out = vec![
        ("square".to_string(), periods_from_invariants(&semiabel::classifier::cm_curve()).unwrap()),
        (
            "hexagonal".to_string(),
            Lattice::new(Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, PI / 3.0)).unwrap(),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (i, y) in [0.25, 1.7, 4.8].into_iter().enumerate() {
        let w1 = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI));
        let tau = Complex64::new(rng.gen_range(-0.5..0.5), y);
        out.push((format!("random{}", i + 1), Lattice::new(w1, w1 * tau).unwrap()));
    }
    out
}

fn suite(l: &Lattice, seed: u64) -> VerificationReport {
    let cfg = JobConfig {
        task: Task::Verify,
        curve: CurveSpec::Lattice(l.clone()),
        tol: 1e-9,
        n_max: 64,
        max_height: 1000,
        seed,
        format: OutputFormat::Json,
        payload: Payload::None,
    };
    run_verification_suite(&cfg).unwrap()
}

/// Worst residual and total time of the named entries over all lattices.
fn from_suites(reports: &[(String, VerificationReport)], names: &[&str], limit: Duration) -> Outcome {
    let mut pass = true;
    let mut elapsed = Duration::ZERO;
    let mut parts = Vec::new();
    for name in names {
        let mut worst: f64 = 0.0;
        for (label, r) in reports {
            let e = r.entries.iter().find(|e| e.name == *name).unwrap_or_else(|| panic!("no entry {name}"));
            if !e.pass {
                pass = false;
                parts.push(format!("{name} fails on {label}"));
            }
            worst = worst.max(e.max_residual);
            elapsed += e.elapsed;
        }
        let tol = reports[0].1.entries.iter().find(|e| e.name == *name).unwrap().tolerance;
        parts.push(format!("{name} max {worst:.2e} (tol {tol:.0e})"));
    }
    if elapsed > limit {
        pass = false;
    }
    parts.push(format!("{:.3}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs_f64()));
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn primitive(mut c: Vec<i64>) -> Vec<i64> {
    let g = c.iter().fold(0i64, |g, &x| g.gcd(&x));
    c.iter_mut().for_each(|x| *x /= g);
    if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        c.iter_mut().for_each(|x| *x = -*x);
    }
    c
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let cfg = ClassifierConfig::default();
    let mut mismatches = Vec::new();
    let non_cm = periods_from_invariants(&non_cm_curve()).unwrap();
    if detect_cm(&non_cm, 1000, 1e-9).is_some() {
        mismatches.push("non-CM lattice detected as CM".to_string());
    }
    for row in TableRow::ROWS {
        let (ur, gal_cm, gal_non_cm) = row.expected().unwrap();
        for cm in [true, false] {
            match (table_instance(row, cm), cm, gal_non_cm) {
                (Err(_), false, None) => {}
                (Err(e), _, _) => mismatches.push(format!("row {row:?} cm={cm}: {e}")),
                (Ok(m), _, _) => {
                    let r = motivic_galois_dims(&m, cfg).unwrap();
                    let gal = if cm { Some(gal_cm) } else { gal_non_cm };
                    if r.table_row != row || r.dim_ur != ur || Some(r.dim_gal) != gal {
                        mismatches.push(format!("row {row:?} cm={cm}: got {:?} UR {} Gal {}", r.table_row, r.dim_ur, r.dim_gal));
                    }
                    if !cm && (r.deficient == Some(true) || r.table_row == TableRow::DependentDeficient) {
                        mismatches.push(format!("row {row:?}: non-CM deficient"));
                    }
                }
            }
        }
    }
    let deficient = table_instance(TableRow::DependentDeficient, true).and_then(|m| motivic_galois_dims(&m, cfg));
    let dependent = table_instance(TableRow::DependentNotDeficient, true).and_then(|m| motivic_galois_dims(&m, cfg));
    match (deficient, dependent) {
        (Ok(a), Ok(b)) if a.dim_ur == 2 && b.dim_ur == 3 => {}
        _ => mismatches.push("deficient/not-deficient UR must be 2/3".to_string()),
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && elapsed < Duration::from_secs(5);
    Outcome {
        pass,
        detail: format!("{} mismatches {:?}; {:.3}s (limit 5s)", mismatches.len(), mismatches, elapsed.as_secs_f64()),
    }
}

fn formula_consistency() -> Outcome {
    let cfg = ClassifierConfig::default();
    let mut checked = 0;
    let mut bad = 0;
    for cm in [true, false] {
        for row in TableRow::ROWS {
            let Ok(m) = table_instance(row, cm) else { continue };
            let r = motivic_galois_dims(&m, cfg).unwrap();
            checked += 1;
            if r.dim_ur != 2 * r.dim_b + r.dim_z1 || r.dim_gal != r.dim_ur + r.dim_gal_a {
                bad += 1;
            }
        }
    }
    Outcome {
        pass: bad == 0 && checked == 15,
        detail: format!("{checked} instances, {bad} violations"),
    }
}

fn relation_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rand_c = |rng: &mut ChaCha8Rng| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut missed = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=6usize);
        let mut v: Vec<Complex64> = (0..n - 1).map(|_| rand_c(&mut rng)).collect();
        let mut c: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-100..=100)).collect();
        let last = rng.gen_range(1..=100i64);
        let s: Complex64 = c.iter().zip(&v).map(|(&k, x)| x * k as f64).sum();
        v.push(-s / last as f64);
        c.push(last);
        if detect_integer_relation(&v, 1000, 1e-9).map(|r| r.coefficients) != Some(primitive(c)) {
            missed += 1;
        }
    }
    let mut spurious = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=6usize);
        let v: Vec<Complex64> = (0..n).map(|_| rand_c(&mut rng)).collect();
        if detect_integer_relation(&v, 1000, 1e-9).is_some() {
            spurious += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: missed == 0 && spurious == 0 && elapsed < Duration::from_secs(10),
        detail: format!(
            "planted missed {missed}/100, relation-free spurious {spurious}/100 (2..=6 values); {:.3}s (limit 10s)",
            elapsed.as_secs_f64()
        ),
    }
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("semiabel-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("verify.json");
    std::fs::write(&path, r#"{"task":"verify","curve":{"g2":4,"g3":0}}"#).unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_semiabel"))
            .args(["verify", "--config"])
            .arg(&path)
            .args(["--json", "--seed", "42"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let _ = std::fs::remove_dir_all(&dir);
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome {
        pass: same && a.status.success() && b.status.success(),
        detail: format!(
            "{} bytes, identical: {same}, exit codes {:?}/{:?}",
            a.stdout.len(),
            a.status.code(),
            b.status.code()
        ),
    }
}

fn main() {
    let reports: Vec<(String, VerificationReport)> = lattices().into_iter().map(|(name, l)| (name, suite(&l, 7))).collect();
    let s = |names: &[&str], secs: f64| from_suites(&reports, names, Duration::from_secs_f64(secs));
    let criteria: Vec<(u32, &str, Outcome)> = vec![
        (1, "Legendre relation", s(&["legendre_relation"], 1.0)),
        (2, "Weierstrass differential equation", s(&["weierstrass_ode_grid"], 2.0)),
        (3, "linear eta closed form", s(&["eta_linear_closed_form"], 1.0)),
        (4, "theta automorphy factor", s(&["theta_automorphy"], 1.0)),
        (
            5,
            "quasi-quasi-periods",
            s(&["quasi_quasi_periods_multiplier", "quasi_quasi_periods_contour"], 5.0),
        ),
        (6, "ratio identity", s(&["ratio_identity", "ratio_lattice_pairs"], 1.0)),
        (7, "exp_G/log_G round trip", s(&["expg_logg_round_trip"], 2.0)),
        (8, "torsion Weil pairing", s(&["weil_torsion_roots"], 1.0)),
        (9, "dimension table reproduction", table_reproduction()),
        (10, "formula/table consistency", formula_consistency()),
        (11, "relation engine soundness", relation_soundness()),
        (12, "determinism", determinism()),
    ];
    println!();
    let mut failed = 0;
    for (n, title, o) in &criteria {
        println!("criterion {n:>2} {}: {title}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
