//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the verdict lines always reach the
//! console under `cargo test`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use fidmap_core::charact::{is_rank_one, order_totality_probe, rank_one_certificate};
use fidmap_core::fidelity::{fidelity, partial_fidelity, trace_product};
use fidmap_core::mapzoo::{classify_map, make_map, replay_witness, MapKind, MapSpec};
use fidmap_core::random;
use fidmap_core::wigner::{
    apply_symmetry, extend_normalized, reconstruct, symmetry_distance, DensityMap, FnMap, Parity,
    ReconstructOptions, SymmetryOperator,
};
use fidmap_core::DensityOperator;

/// Verdict of one criterion: `Ok(summary)` or `Err(first failure)`.
type Outcome = Result<String, String>;

type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fv(a: &DensityOperator, b: &DensityOperator) -> f64 {
    fidelity(a, b).expect("same dimension").value()
}

fn fidelity_identities() -> Outcome {
    let mut worst = [0.0f64; 4];
    for d in [2, 4, 8] {
        let mut rng = random::rng(1, d as u64);
        for i in 0..1000 {
            let a = random::random_mixed_rank_density(&mut rng, d);
            let b = random::random_mixed_rank_density(&mut rng, d);
            let x = random::random_pure_state(&mut rng, d);
            let y = random::random_pure_state(&mut rng, d);
            let (p, q) = (x.projection(), y.projection());
            let quad = x.amplitudes().dotc(&(a.entries() * x.amplitudes())).re.max(0.0).sqrt();
            let errs = [
                (fv(&a, &a) - a.trace()).abs(),
                (fv(&a, &b) - fv(&b, &a)).abs(),
                (fv(&a, &p) - quad).abs(),
                (fv(&p, &q).powi(2) - trace_product(&p, &q).unwrap()).abs(),
            ];
            let tols = [1e-9, 1e-8, 1e-9, 1e-9];
            for k in 0..4 {
                worst[k] = worst[k].max(errs[k]);
                ensure(errs[k] <= tols[k], || format!("d={d} instance {i} identity {k}: error {:e}", errs[k]))?;
            }
        }
    }
    Ok(format!(
        "3000 instances; max errors self {:.1e}, symmetry {:.1e}, projection {:.1e}, pure {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn monotonicity() -> Outcome {
    let mut rng = random::rng(2, 0);
    let mut slack = f64::INFINITY;
    for i in 0..1000 {
        let d = 2 + i % 7;
        let a = random::random_mixed_rank_density(&mut rng, d);
        let c = random::random_mixed_rank_density(&mut rng, d);
        let b = a.add(&random::random_mixed_rank_density(&mut rng, d)).unwrap();
        let (fac, fbc) = (fv(&a, &c), fv(&b, &c));
        slack = slack.min(fbc - fac);
        ensure(fac <= fbc + 1e-9, || format!("triple {i}: F(A,C) {fac} > F(B,C) {fbc}"))?;
        let (la, lb) = (a.spectrum().unwrap(), b.spectrum().unwrap());
        for (k, (x, y)) in la.eigenvalues().iter().zip(lb.eigenvalues()).enumerate() {
            ensure(*x <= *y + 1e-9, || format!("triple {i}: λ_{k} {x} > {y}"))?;
        }
        for (x, y) in [(&a, &c), (&b, &c)] {
            let chain: Vec<f64> = (1..=d).map(|m| partial_fidelity(x, y, m).unwrap().value()).collect();
            for m in 1..d {
                let gap = chain[m] - chain[m - 1];
                ensure(gap >= -1e-12, || format!("triple {i}: partial gap {gap:e} at m={m}"))?;
            }
            ensure(chain[d - 1] == fv(x, y), || format!("triple {i}: F_d⁺ differs from F"))?;
        }
    }
    Ok(format!("1000 triples, d 2..8; min F(B,C) − F(A,C) = {slack:.1e}"))
}

fn invariance() -> Outcome {
    let mut worst = 0.0f64;
    for d in [2, 4, 8] {
        let mut rng = random::rng(3, d as u64);
        for i in 0..500 {
            let a = random::random_mixed_rank_density(&mut rng, d);
            let b = random::random_mixed_rank_density(&mut rng, d);
            let u = SymmetryOperator::new(Parity::Unitary, random::haar_unitary(&mut rng, d)).unwrap();
            let f = fv(&a, &b);
            let rotated = fv(&apply_symmetry(&u, &a).unwrap(), &apply_symmetry(&u, &b).unwrap());
            let conjugated = fv(&a.conj(), &b.conj());
            let err = (rotated - f).abs().max((conjugated - f).abs());
            worst = worst.max(err);
            ensure(err <= 1e-9, || format!("d={d} trial {i}: error {err:e}"))?;
        }
    }
    Ok(format!("1500 trials; max error {worst:.1e}"))
}

fn reconstruction_round_trip() -> Outcome {
    let (mut worst_dist, mut worst_res) = (0.0f64, 0.0f64);
    let mut count = 0;
    for d in 2..=8 {
        for parity in [Parity::Unitary, Parity::Antiunitary] {
            for k in 0..50u64 {
                let seed = 1000 * d as u64 + k;
                let truth = SymmetryOperator::new(parity, random::haar_unitary(&mut random::rng(seed, 0), d)).unwrap();
                let report = reconstruct(&truth, &ReconstructOptions { seed, ..Default::default() });
                ensure(report.is_certified(), || format!("d={d} {parity:?} seed {seed}: {:?}", report.status))?;
                let got = report.symmetry.as_ref().unwrap();
                ensure(got.parity() == parity, || format!("d={d} seed {seed}: wrong parity"))?;
                let dist = symmetry_distance(got, &truth).unwrap();
                worst_dist = worst_dist.max(dist);
                worst_res = worst_res.max(report.residual_max);
                ensure(dist <= 1e-8, || format!("d={d} {parity:?} seed {seed}: distance {dist:e}"))?;
                ensure(report.residual_max <= 1e-7, || {
                    format!("d={d} {parity:?} seed {seed}: residual {:e}", report.residual_max)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} oracles certified; max distance {worst_dist:.1e}, max residual {worst_res:.1e}"))
}

fn rejection() -> Outcome {
    let mut depol_witness = f64::INFINITY;
    let mut runs = 0;
    for d in [2, 4] {
        for seed in 1..=10u64 {
            let sigma = random::random_density(&mut random::rng(seed, 99), d, d, 1.0);
            let specs = [
                MapSpec::new(MapKind::Depolarizing, d).with_p(0.1),
                MapSpec::new(MapKind::Depolarizing, d).with_p(0.5),
                MapSpec::new(MapKind::Depolarizing, d).with_p(1.0),
                MapSpec::new(MapKind::Mix, d).with_p(0.5).with_sigma(&sigma),
                MapSpec::new(MapKind::Dephase, d),
                MapSpec::new(MapKind::SpectralScramble, d),
            ];
            for spec in specs {
                let label = format!("{} p={:?} d={d} seed {seed}", spec.kind.name(), spec.params.p);
                let oracle = make_map(&spec, seed).map_err(|e| format!("{label}: {e}"))?;
                let report = classify_map(&oracle, 200, seed);
                ensure(!report.preserving, || format!("{label}: classified preserving"))?;
                let witness = report.witness_pair.as_ref().ok_or_else(|| format!("{label}: no witness"))?;
                let replayed = replay_witness(&oracle, witness).map_err(|e| format!("{label}: {e}"))?;
                ensure((replayed - report.worst_violation).abs() <= 1e-12, || {
                    format!("{label}: replay {replayed} vs {}", report.worst_violation)
                })?;
                if spec.kind == MapKind::Depolarizing && spec.params.p == Some(0.5) && d == 2 {
                    depol_witness = depol_witness.min(report.worst_violation);
                    ensure(report.worst_violation >= 0.86, || {
                        format!("{label}: witness violation {} < 0.86", report.worst_violation)
                    })?;
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs rejected with replayable witnesses; depolarizing p=0.5 d=2 min violation {depol_witness:.6}"))
}

fn characterization() -> Outcome {
    let mut checked = 0;
    for d in 1..=8 {
        let mut rng = random::rng(6, d as u64);
        for rank in 1..=d {
            for i in 0..500 {
                let trace = random::random_trace(&mut rng);
                let a = random::random_density(&mut rng, d, rank, trace);
                let certified = rank_one_certificate(&a).map_err(|e| e.to_string())?.is_certified();
                let r1 = is_rank_one(&a);
                ensure(certified == r1, || format!("d={d} rank {rank} #{i}: certificate {certified}, rank one {r1}"))?;
                ensure(r1 == (rank == 1), || format!("d={d} rank {rank} #{i}: is_rank_one {r1}"))?;
                checked += 1;
            }
        }
    }
    let mut agree = 0;
    let trials = 500;
    let mut rng = random::rng(6, 100);
    for t in 0..trials {
        let d = 2 + t % 3;
        let rank = if t % 2 == 0 { 1 } else { 2 + (t / 2) % (d - 1) };
        let trace = random::random_trace(&mut rng);
        let a = random::random_density(&mut rng, d, rank, trace);
        let total = order_totality_probe(&a, 200, t as u64).map_err(|e| e.to_string())?;
        if total == is_rank_one(&a) {
            agree += 1;
        }
    }
    let rate = agree as f64 / trials as f64;
    ensure(rate >= 0.99, || format!("probe agreement {agree}/{trials}"))?;
    Ok(format!("{checked} certificate checks agree; probe agreement {agree}/{trials}"))
}

fn normalization_extension() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for d in 2..=8 {
        for parity in [Parity::Unitary, Parity::Antiunitary] {
            let seed = 7000 + d as u64;
            let truth = SymmetryOperator::new(parity, random::haar_unitary(&mut random::rng(seed, 0), d)).unwrap();
            let restricted = FnMap::new(d, |rho: &DensityOperator| {
                assert!((rho.trace() - 1.0).abs() <= 1e-12, "restricted oracle called off the unit-trace slice");
                truth.apply(rho)
            });
            let opts = ReconstructOptions { seed, ..Default::default() };
            let direct = reconstruct(&truth, &opts);
            let extended = reconstruct(&extend_normalized(restricted), &opts);
            ensure(direct.is_certified() && extended.is_certified(), || format!("d={d} {parity:?}: not certified"))?;
            let (s1, s2) = (direct.symmetry.unwrap(), extended.symmetry.unwrap());
            let dist = symmetry_distance(&s1, &s2).unwrap();
            worst = worst.max(dist);
            ensure(dist <= 1e-8, || format!("d={d} {parity:?}: distance {dist:e}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} restricted oracles; max distance {worst:.1e}"))
}

fn phase_uniqueness() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for d in 2..=8 {
        for parity in [Parity::Unitary, Parity::Antiunitary] {
            for k in 0..5u64 {
                let seed = 8000 + 10 * d as u64 + k;
                let oracle =
                    SymmetryOperator::new(parity, random::haar_unitary(&mut random::rng(seed, 0), d)).unwrap();
                let r1 = reconstruct(&oracle, &ReconstructOptions { seed: 1, ..Default::default() });
                let r2 = reconstruct(&oracle, &ReconstructOptions { seed: 2, ..Default::default() });
                let both = r1.is_certified() && r2.is_certified();
                let (s1, s2) = match (r1.symmetry, r2.symmetry) {
                    (Some(s1), Some(s2)) if both => (s1, s2),
                    _ => return Err(format!("d={d} seed {seed}: reconstruction not certified")),
                };
                ensure(s1.parity() == s2.parity(), || format!("d={d} seed {seed}: parities differ"))?;
                let dist = symmetry_distance(&s1, &s2).unwrap();
                worst = worst.max(dist);
                ensure(dist <= 1e-8, || format!("d={d} seed {seed}: distance {dist:e}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} oracle pairs; max distance {worst:.1e}"))
}

fn cli_determinism() -> Outcome {
    let cases: [(&str, &[&str]); 4] = [
        ("fidelity_diag", &["fidelity", "--a", "diag_05_05.json", "--b", "diag_09_01.json"]),
        ("reconstruct_transpose", &["reconstruct", "--map", "transpose_d2.json", "--out", "{out}"]),
        (
            "classify_depolarizing",
            &["classify", "--map", "depolarizing_p05_d2.json", "--trials", "100", "--seed", "1", "--out", "{out}"],
        ),
        ("verify_d2", &["verify", "--dim", "2", "--trials", "200", "--seed", "42", "--out", "{out}"]),
    ];
    for (case, args) in cases {
        let path = common::golden_path(case);
        let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(common::transcript(args) == expected, || format!("{case}: output differs from golden file"))?;
        ensure(common::transcript(args) == expected, || format!("{case}: second run differs"))?;
    }
    Ok("fidelity, reconstruct, classify, verify match golden files on two runs".to_string())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("fidelity identities", fidelity_identities),
        ("monotonicity, Weyl, partial chain", monotonicity),
        ("unitary and antiunitary invariance", invariance),
        ("reconstruction round-trip", reconstruction_round_trip),
        ("rejection of non-preserving maps", rejection),
        ("characterization agreement", characterization),
        ("normalization extension", normalization_extension),
        ("phase uniqueness", phase_uniqueness),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(summary) => println!("PASS {}. {name} ({secs:.1}s): {summary}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {}. {name} ({secs:.1}s): {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
