//! Acceptance criteria. Run with `--nocapture` to see one PASS/FAIL line per criterion.
//!
//! Criteria hold a shared lock so the pinned runtimes are measured without
//! other tests competing for the CPU.

use std::path::Path;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use dpcount_core::verify::{self, DEFAULT_SEED, MINUS_ONE_COUNTS, PLANE_COUNTS};
use dpcount_core::{DivisorClass, GwEngine, SuiteReport, SurfaceModel};
use num_bigint::BigInt;

static SERIAL: Mutex<()> = Mutex::new(());

struct Outcome {
    ok: bool,
    detail: String,
}

fn criterion(id: u32, title: &str, limit: Option<Duration>, gating: bool, body: impl FnOnce() -> Outcome) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let pass = out.ok && in_time;
    let budget = limit.map_or("no limit".to_string(), |l| format!("limit {:.0?}", l));
    let status = match (pass, gating) {
        (true, _) => "PASS",
        (false, true) => "FAIL",
        (false, false) => "FLAG",
    };
    println!(
        "[criterion {id}] {status} {title}: {} ({:.3}s, {budget})",
        out.detail,
        elapsed.as_secs_f64()
    );
    if gating {
        assert!(out.ok, "criterion {id}: {}", out.detail);
        assert!(in_time, "criterion {id}: took {elapsed:?}, {budget}");
    }
}

fn from_report(rep: SuiteReport) -> Outcome {
    let mut detail = format!("{} checks, {} failures", rep.checks, rep.failures.len());
    for f in rep.failures.iter().take(10) {
        detail.push_str("\n    ");
        detail.push_str(f);
    }
    Outcome {
        ok: rep.passed() && rep.checks > 0,
        detail,
    }
}

#[test]
fn criterion_01_plane_counts() {
    criterion(1, "N_dL for d = 1..7", Some(Duration::from_secs(1)), true, || {
        let engine = GwEngine::new();
        let plane = SurfaceModel::new(0).unwrap();
        let mut bad = Vec::new();
        for (i, &expect) in PLANE_COUNTS.iter().enumerate() {
            let d = i as i64 + 1;
            let n = engine.n_beta(&plane, &DivisorClass::new(d, vec![])).unwrap();
            if n != BigInt::from(expect) {
                bad.push(format!("d={d}: {n} != {expect}"));
            }
        }
        Outcome {
            ok: bad.is_empty(),
            detail: if bad.is_empty() { "7/7 exact".into() } else { bad.join("; ") },
        }
    });
}

#[test]
fn criterion_02_minus_one_counts() {
    criterion(2, "(-1)-class counts for k = 1..8", Some(Duration::from_secs(1)), true, || {
        let got: Vec<usize> = (1..=8)
            .map(|k| SurfaceModel::new(k).unwrap().minus_one_classes().len())
            .collect();
        Outcome {
            ok: got == MINUS_ONE_COUNTS[1..],
            detail: format!("{got:?}"),
        }
    });
}

#[test]
fn criterion_03_plane_cusp_counts() {
    criterion(3, "C at 3L, 4L, 5L, 2L", Some(Duration::from_secs(1)), true, || {
        let engine = GwEngine::new();
        let plane = SurfaceModel::new(0).unwrap();
        let mut got = Vec::new();
        let mut ok = true;
        for (d, expect) in [(3, 24), (4, 2304), (5, 435168), (2, 0)] {
            let c = engine.c_beta(&plane, &DivisorClass::new(d, vec![])).unwrap();
            ok &= c.value == BigInt::from(expect);
            got.push(format!("C_{d}L={}", c.value));
        }
        Outcome { ok, detail: got.join(" ") }
    });
}

#[test]
fn criterion_04_blowup_invariance() {
    criterion(4, "blow-up invariance, d = 2..5, k <= 3", Some(Duration::from_secs(10)), true, || {
        from_report(verify::blowup(&GwEngine::new(), 5, 3))
    });
}

#[test]
fn criterion_05_specialization() {
    criterion(5, "specialization, d <= 5, k <= 4", Some(Duration::from_secs(30)), true, || {
        from_report(verify::specialization(&GwEngine::new(), 5, 4))
    });
}

#[test]
fn criterion_06_consistency() {
    criterion(6, "relation consistency, 200 classes, k <= 4, delta <= 10", Some(Duration::from_secs(120)), true, || {
        let engine = GwEngine::new();
        let sample = verify::random_classes(&engine, 200, 10, DEFAULT_SEED);
        assert_eq!(sample.len(), 200);
        from_report(verify::consistency(&engine, 200, DEFAULT_SEED))
    });
}

#[test]
fn criterion_07_integrality() {
    criterion(7, "integrality, k <= 4, delta <= 14", Some(Duration::from_secs(120)), true, || {
        from_report(verify::integrality(&GwEngine::new(), 4, 14))
    });
}

#[test]
fn criterion_08_symmetry() {
    criterion(8, "permutation symmetry, 100 classes", Some(Duration::from_secs(30)), true, || {
        from_report(verify::symmetry(&GwEngine::new(), 100, DEFAULT_SEED))
    });
}

fn table_run(jobs: &str, cache: Option<&Path>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dpcount"));
    cmd.env_remove("DPCOUNT_CACHE");
    if let Some(p) = cache {
        cmd.arg("--cache-path").arg(p);
    }
    let out = cmd
        .args(["--jobs", jobs, "table", "--k", "2", "--dmax", "6"])
        .output()
        .expect("spawn dpcount");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn criterion_09_determinism() {
    criterion(9, "table --k 2 --dmax 6 is byte-identical", None, true, || {
        let dir = tempfile::tempdir().unwrap();
        let cache = dir.path().join("counts.tsv");
        let reference = table_run("1", None);
        let mut runs = Vec::new();
        for jobs in ["1", "8"] {
            for _ in 0..3 {
                runs.push((format!("jobs={jobs} no cache"), table_run(jobs, None)));
            }
        }
        // The first cached run starts cold; later ones read what it wrote.
        for jobs in ["1", "8", "1", "8"] {
            runs.push((format!("jobs={jobs} cache"), table_run(jobs, Some(&cache))));
        }
        let differing: Vec<&str> = runs
            .iter()
            .filter(|(_, out)| *out != reference)
            .map(|(name, _)| name.as_str())
            .collect();
        let lines = reference.iter().filter(|&&b| b == b'\n').count();
        Outcome {
            ok: differing.is_empty() && lines > 0 && cache.exists(),
            detail: if differing.is_empty() {
                format!("{} runs, {lines} lines each", runs.len() + 1)
            } else {
                format!("differs: {}", differing.join(", "))
            },
        }
    });
}

#[test]
fn criterion_10_cremona_report() {
    criterion(10, "Cremona invariance, k = 3, 4 (non-gating)", None, false, || {
        from_report(verify::cremona(&GwEngine::new(), 6))
    });
}
