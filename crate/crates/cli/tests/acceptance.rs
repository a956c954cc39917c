//! Acceptance checks. Each criterion prints one PASS or FAIL line; the
//! process exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use common::{cli, instance};
use qgame::game::identity_map_choi;
use qgame::herm::{eig, hs_inner, mat_exp, HermMatrix};
use qgame::mmw::{Reduction, RegretBounds};
use qgame::psdp::feasibility_residuals;
use qgame::random;
use qgame::{
    classical_minimax_oracle, solve, solve_psdp, GameSuperOp, PayoffObservable, SolverParams,
    SuperOpSdp,
};
use qgame_cli::exit;
use qgame_cli::format::{parse_instance, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Ok(detail.into())
    } else {
        Err(detail.into())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn load_game(name: &str) -> PayoffObservable {
    match parse_instance(&std::fs::read(instance(name)).unwrap()).unwrap() {
        Instance::Observable(obs) => obs,
        Instance::Measurement(meas) => PayoffObservable::from_measurement(&meas).unwrap(),
        other => panic!("{name} has kind {}", other.kind()),
    }
}

// ---------------------------------------------------------------------------

const DESK_EPSILON: f64 = 0.2;
const DESK_RUNS: u64 = 20;
const DESK_SECONDS: f64 = 10.0;

fn desk_scale(bounds: &mut Vec<RegretBounds>) -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    let mut failures = Vec::new();
    for k in 0..DESK_RUNS {
        let obs = random::unit_psd_observable(&mut rng(1000 + k), 4, 4).unwrap();
        let start = Instant::now();
        let res = solve(&obs, &SolverParams::new(DESK_EPSILON).with_trace()).unwrap();
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        worst = worst.max(res.certified_epsilon);
        if res.reduction != Reduction::Direct || res.mu != 0.025 || res.iterations != 4437 {
            failures.push(format!("run {k}: {:?}, μ = {}, N = {}", res.reduction, res.mu, res.iterations));
        }
        if res.certified_epsilon > DESK_EPSILON {
            failures.push(format!("run {k}: certified ε = {}", res.certified_epsilon));
        }
        bounds.push(res.trace.expect("trace recorded").bounds);
    }
    check(
        failures.is_empty() && slowest <= DESK_SECONDS,
        format!(
            "{DESK_RUNS} runs, n = m = 4, μ = 0.025, N = 4437: max certified ε = {worst:.4}, \
             slowest run {slowest:.2} s{}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn regret_bounds(bounds: &[RegretBounds]) -> Outcome {
    const SLACK: f64 = 1e-6;
    let held = bounds.iter().filter(|b| b.holds(SLACK)).count();
    let margin = bounds
        .iter()
        .map(|b| (b.alice_rhs - b.alice_lhs).min(b.bob_lhs - b.bob_rhs))
        .fold(f64::INFINITY, f64::min);
    check(
        !bounds.is_empty() && held == bounds.len() && bounds.len() == DESK_RUNS as usize,
        format!("{held}/{} runs satisfy both regret inequalities (slack 1e-6), min margin {margin:.3e}", bounds.len()),
    )
}

fn known_values() -> Outcome {
    const EPSILON: f64 = 0.1;
    // Φ(σ) = σ/2 for the EPR projector on C^m ⊗ C^m, so the value is
    // min_σ λ_max(σ)/2 = 1/(2m)
    let epr_truth = 1.0 / (2.0 * 2.0);
    let pennies_truth = classical_minimax_oracle([[1.0, 0.0], [0.0, 1.0]]).value;
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, truth) in [("epr.json", epr_truth), ("matching-pennies.json", pennies_truth)] {
        let res = solve(&load_game(name), &SolverParams::new(EPSILON)).unwrap();
        let inside = res.value_lo <= truth && truth <= res.value_hi;
        let close = (res.value_mid - truth).abs() <= EPSILON / 2.0;
        ok &= inside && close;
        lines.push(format!(
            "{name}: truth {truth}, mid {:.6}, bracket [{:.6}, {:.6}]",
            res.value_mid, res.value_lo, res.value_hi
        ));
    }
    check(ok, lines.join("; "))
}

fn classical_games() -> Outcome {
    const EPSILON: f64 = 0.1;
    const GAMES: usize = 50;
    let mut r = rng(4242);
    let mut contained = 0;
    let mut within = 0;
    let mut worst = 0.0f64;
    for _ in 0..GAMES {
        let mut g = [[0.0; 2]; 2];
        for x in g.iter_mut().flatten() {
            *x = r.random::<f64>() * 2.0 - 1.0;
        }
        let truth = classical_minimax_oracle(g).value;
        let obs = PayoffObservable::new(
            2,
            2,
            HermMatrix::from_diagonal(&[g[0][0], g[0][1], g[1][0], g[1][1]]),
        )
        .unwrap();
        // iterate on the rescaled game at ε itself, so the guarantee on
        // the original game is δ ≤ 2ε
        let mut params = SolverParams::new(EPSILON);
        params.guarantee_on_original = false;
        let res = solve(&obs, &params).unwrap();
        if res.value_lo <= truth + 1e-12 && truth <= res.value_hi + 1e-12 {
            contained += 1;
        }
        if res.certified_epsilon <= 2.0 * EPSILON {
            within += 1;
        }
        worst = worst.max(res.certified_epsilon);
    }
    check(
        contained == GAMES && within == GAMES,
        format!(
            "{contained}/{GAMES} brackets contain the exact value, {within}/{GAMES} certified δ ≤ 2ε = {}, max δ {worst:.4}",
            2.0 * EPSILON
        ),
    )
}

fn properties() -> Outcome {
    const TRIALS: u64 = 200;
    let mut failed: Vec<String> = Vec::new();
    let mut fail = |name: &str, trial: u64, detail: String| {
        if failed.len() < 5 {
            failed.push(format!("{name} trial {trial}: {detail}"));
        }
    };
    let lambda_min = |m: &HermMatrix| eig(m).unwrap().min();
    for t in 0..TRIALS {
        let mut r = rng(900_000 + t);
        let d = r.random_range(2..=6usize);
        let n = r.random_range(2..=6usize);
        let m = r.random_range(2..=6usize);

        let x = random::hermitian(&mut r, d);
        let y = random::hermitian(&mut r, d);
        let lhs = mat_exp(&(&x + &y)).unwrap().trace();
        let rhs = (mat_exp(&x).unwrap().as_matrix() * mat_exp(&y).unwrap().as_matrix()).trace().re;
        if lhs > rhs * (1.0 + 1e-12) + 1e-12 {
            fail("Golden-Thompson", t, format!("{lhs} > {rhs}"));
        }

        let p = random::unit_psd(&mut r, d).unwrap();
        let mu: f64 = r.random_range(1e-3..=2.0);
        let upper = &p.scale(mu * mu.exp()).shift(1.0) - &mat_exp(&p.scale(mu)).unwrap();
        let lower = &p.scale(-mu * (-mu).exp()).shift(1.0) - &mat_exp(&p.scale(-mu)).unwrap();
        if lambda_min(&upper) < -1e-9 || lambda_min(&lower) < -1e-9 {
            fail("exponential bounds", t, format!("μ = {mu}"));
        }

        let obs = random::observable(&mut r, n, m).unwrap();
        let back = GameSuperOp::from_observable(&obs).to_observable();
        let diff = back.matrix().max_abs_diff(obs.matrix());
        if diff > 1e-12 {
            fail("CJ round trip", t, format!("{diff:e}"));
        }

        let phi = obs.superop();
        let a = random::hermitian(&mut r, n);
        let b = random::hermitian(&mut r, m);
        let lhs = hs_inner(&a, &phi.apply(&b).unwrap()).unwrap();
        let rhs = hs_inner(&phi.apply_adjoint(&a).unwrap(), &b).unwrap();
        if (lhs - rhs).abs() > 1e-10 {
            fail("adjoint identity", t, format!("{lhs} vs {rhs}"));
        }

        let cp = GameSuperOp::from_choi(n, m, random::psd(&mut r, n * m)).unwrap();
        let pb = random::psd(&mut r, m);
        let pa = random::psd(&mut r, n);
        if lambda_min(&cp.apply(&pb).unwrap()) < -1e-9 || lambda_min(&cp.apply_adjoint(&pa).unwrap()) < -1e-9 {
            fail("positivity transfer", t, String::new());
        }

        let unit = random::unit_psd_observable(&mut r, n, m).unwrap().superop();
        let sigma = random::density(&mut r, m);
        let rho = random::density(&mut r, n);
        for image in [unit.apply(sigma.as_herm()).unwrap(), unit.apply_adjoint(rho.as_herm()).unwrap()] {
            let s = eig(&image).unwrap();
            if s.min() < -1e-9 || s.max() > 1.0 + 1e-9 {
                fail("norm bound", t, format!("spectrum [{}, {}]", s.min(), s.max()));
            }
        }
    }
    check(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{TRIALS} trials each of Golden-Thompson, exponential bounds, CJ round trip, adjoint identity, positivity transfer, norm bound")
        } else {
            failed.join("; ")
        },
    )
}

fn psdp_identity_family() -> Outcome {
    const EPSILON: f64 = 0.05;
    let mut ok = true;
    let mut lines = Vec::new();
    for m in 2..=4usize {
        let sdp = SuperOpSdp::new(HermMatrix::identity(m), HermMatrix::identity(m), identity_map_choi(m)).unwrap();
        let res = solve_psdp(&sdp, EPSILON).unwrap();
        let opt = m as f64;
        let (primal, dual) = feasibility_residuals(&sdp, &res).unwrap();
        // α = 1/opt and the iterated game has ‖R‖ = choi_norm; with
        // t = ε‖R‖/α the estimate lies in [opt/(1+t), opt/(1−t)] and the
        // bracket ratio is at most (1+t)/(1−t)
        let t = EPSILON * res.choi_norm * opt;
        let contains = res.opt_lo <= opt && opt <= res.opt_hi;
        let feasible = primal <= 1e-8 && dual >= -1e-8;
        let estimate_ok = opt / (1.0 + t) <= res.opt_estimate && (t >= 1.0 || res.opt_estimate <= opt / (1.0 - t));
        let width_ok = t >= 1.0 || res.opt_hi / res.opt_lo <= (1.0 + t) / (1.0 - t);
        ok &= contains && feasible && estimate_ok && width_ok;
        lines.push(format!(
            "m = {m}: [{:.6}, {:.6}], residuals {primal:.1e}/{dual:.1e}, ratio {:.4} vs bound {:.4}",
            res.opt_lo,
            res.opt_hi,
            res.opt_hi / res.opt_lo,
            (1.0 + t) / (1.0 - t)
        ));
    }
    check(ok, lines.join("; "))
}

/// The result document with the wall-clock field removed.
fn without_wall_time(path: &Path) -> Value {
    let mut v: Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_seconds");
    v
}

fn determinism_and_cli() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    let mut problems = Vec::new();

    for kind in ["observable", "psd-observable", "measurement", "psdp"] {
        for name in ["a.json", "b.json"] {
            cli(["gen", "--kind", kind, "--n", "2", "--m", "2", "--seed", "7", "--out"].map(std::ffi::OsStr::new).into_iter().chain([p(name).as_os_str()]));
        }
        if std::fs::read(p("a.json")).unwrap() != std::fs::read(p("b.json")).unwrap() {
            problems.push(format!("gen {kind} differs between runs"));
        }
    }

    for name in ["r1.json", "r2.json"] {
        let input = instance("matching-pennies.json");
        cli(["solve".as_ref(), input.as_os_str(), "--epsilon".as_ref(), "0.2".as_ref(), "--trace".as_ref(), "--out".as_ref(), p(name).as_os_str()]);
    }
    if without_wall_time(&p("r1.json")) != without_wall_time(&p("r2.json")) {
        problems.push("repeated solve differs".into());
    }
    for name in ["q1.json", "q2.json"] {
        let input = instance("psdp-identity-2.json");
        cli(["psdp".as_ref(), input.as_os_str(), "--out".as_ref(), p(name).as_os_str()]);
    }
    if without_wall_time(&p("q1.json")) != without_wall_time(&p("q2.json")) {
        problems.push("repeated psdp differs".into());
    }

    let kinds = ["observable", "psd-observable", "measurement"];
    let mut closed = 0;
    for k in 0..10u64 {
        let kind = kinds[k as usize % kinds.len()];
        let (n, m) = (2 + k % 2, 2 + (k / 2) % 2);
        let input = p(&format!("inst{k}.json"));
        let result = p(&format!("res{k}.json"));
        let gen = cli(
            ["gen".to_string(), "--kind".into(), kind.into(), "--n".into(), n.to_string(), "--m".into(), m.to_string(), "--seed".into(), (100 + k).to_string(), "--out".into(), input.display().to_string()],
        );
        let solved = cli(["solve".as_ref(), input.as_os_str(), "--epsilon".as_ref(), "0.2".as_ref(), "--out".as_ref(), result.as_os_str()]);
        let verified = cli(["verify".as_ref(), input.as_os_str(), result.as_os_str()]);
        if gen.code == exit::OK && solved.code == exit::OK && verified.code == exit::OK {
            closed += 1;
        } else {
            problems.push(format!("instance {k} ({kind}): gen {}, solve {}, verify {}", gen.code, solved.code, verified.code));
        }
    }
    check(
        problems.is_empty(),
        format!("repeated gen/solve/psdp identical; solve → verify exit 0 on {closed}/10 instances{}",
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }),
    )
}

fn run(number: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail, ok) = match outcome {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    println!("criterion {number} [{tag}] {title} ({secs:.1} s): {detail}");
    ok
}

fn main() {
    let mut bounds = Vec::new();
    let results = [
        run(1, "certified accuracy on random unit observables", || desk_scale(&mut bounds)),
        run(2, "per-run regret inequalities", || regret_bounds(&bounds)),
        run(3, "known-value games", known_values),
        run(4, "classical 2x2 games against the exact minimax value", classical_games),
        run(5, "randomized property suites", properties),
        run(6, "identity PSDP family", psdp_identity_family),
        run(7, "determinism and the solve/verify contract", determinism_and_cli),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
