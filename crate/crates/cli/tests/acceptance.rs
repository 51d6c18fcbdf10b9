//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, UnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use paraflow::example::{four_node_base_flow, four_node_network};
use paraflow::expand::expand;
use paraflow::labels::ls;
use paraflow::qdp::{augmentation_cap, breakpoint_candidate, path_coefficients};
use paraflow::random::{random_instance, RandomParams};
use paraflow::residual::{build_residual, residual_of, DynPath};
use paraflow::solver::interval_cap;
use paraflow::static_flow::{min_flow, StaticFlow};
use paraflow::{
    evaluate_value, solve_with_base_flow, verify, DynamicNetwork, ParametricSolution, Rational,
};
use paraflow_cli::format::SolutionDoc;

const RANDOM_INSTANCES: u64 = 150;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn golden() -> ParametricSolution {
    solve_with_base_flow(&four_node_network(), &four_node_base_flow())
        .expect("reference instance solves")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_breakpoints() -> Result<String, String> {
    let start = Instant::now();
    let sol = golden();
    let elapsed = start.elapsed();
    let expected = vec![q("0"), q("1/4"), q("3/5"), q("1")];
    ensure(sol.breakpoints == expected, || {
        format!("breakpoints {:?}", strings(&sol.breakpoints))
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "BP = {{{}}} in {elapsed:.2?}",
        strings(&sol.breakpoints).join(", ")
    ))
}

const P1: &[(usize, usize)] = &[(1, 1), (3, 2), (2, 1), (4, 2)];
const P2: &[(usize, usize)] = &[(1, 0), (2, 1), (4, 2)];
const P3: &[(usize, usize)] = &[(1, 0), (3, 1), (4, 3)];
const P4: &[(usize, usize)] = &[(1, 0), (2, 1), (3, 2), (4, 3)];

/// Per subinterval: `λ_k`, then (path, capacity `c + d·λ`) in order, then `λ_{k+1}`.
type Trace = (
    &'static str,
    [(&'static [(usize, usize)], &'static str, &'static str); 4],
    &'static str,
);

const TRACE: [Trace; 3] = [
    (
        "0",
        [
            (P1, "1", "-1"),
            (P2, "1", "1"),
            (P3, "3", "0"),
            (P4, "1", "1"),
        ],
        "1/4",
    ),
    (
        "1/4",
        [
            (P1, "1", "-1"),
            (P2, "1", "1"),
            (P3, "4", "-4"),
            (P4, "1", "1"),
        ],
        "3/5",
    ),
    (
        "3/5",
        [
            (P1, "1", "-1"),
            (P2, "1", "1"),
            (P3, "4", "-4"),
            (P4, "4", "-4"),
        ],
        "1",
    ),
];

fn golden_trace() -> Result<String, String> {
    let sol = golden();
    ensure(sol.intervals.len() == TRACE.len(), || {
        format!("{} subintervals", sol.intervals.len())
    })?;
    for (interval, (lambda_k, rows, next)) in sol.intervals.iter().zip(TRACE) {
        ensure(interval.lambda_lo == q(lambda_k), || {
            format!("subinterval starts at {}", interval.lambda_lo)
        })?;
        ensure(interval.lambda_hi == q(next), || {
            format!("λ_k={lambda_k}: ends at {}", interval.lambda_hi)
        })?;
        ensure(interval.augmentations.len() == rows.len(), || {
            format!("λ_k={lambda_k}: {} paths", interval.augmentations.len())
        })?;
        for (aug, (path, c, d)) in interval.augmentations.iter().zip(rows) {
            ensure(aug.path.pairs() == path, || {
                format!("λ_k={lambda_k}: got path {}", aug.path)
            })?;
            let cap = aug.capacity(&interval.lambda_lo);
            ensure(cap == (q(c), q(d)), || {
                format!(
                    "λ_k={lambda_k}, path {}: capacity {} + {}λ",
                    aug.path, cap.0, cap.1
                )
            })?;
        }
    }
    Ok("3 subintervals × 4 paths match, λ_2 = 3/5".into())
}

fn golden_scalars() -> Result<String, String> {
    let net = four_node_network();
    let state = build_residual(&net, &four_node_base_flow(), &q("0")).map_err(|e| e.to_string())?;
    let first = path_of(P1);
    let (alpha, beta) = path_coefficients(&first, &state).map_err(|e| e.to_string())?;
    ensure((alpha.clone(), beta.clone()) == (q("1"), q("-1")), || {
        format!("α={alpha}, β={beta}")
    })?;

    // Third path at λ = 0: α = 3, β = 0; its (1,3)@0 arc has α_k = 4, β_k = −4.
    let third = path_of(P3);
    let (a3, b3) = path_coefficients(&third, &state).map_err(|e| e.to_string())?;
    let crossing = (q("4") - q("3")) / (q("0") + q("4"));
    ensure(crossing == q("1/4"), || format!("(4−3)/(0+4) = {crossing}"))?;
    let bound = breakpoint_candidate(&third, &state, &a3, &b3, &q("1"));
    ensure(bound == q("1/4"), || format!("third-path bound {bound}"))?;
    let bound = breakpoint_candidate(&third, &state, &a3, &b3, &q("3/5"));
    ensure(bound == q("1/4"), || format!("min{{1/4, 3/5}} = {bound}"))?;

    let sol = golden();
    let aug = &sol.intervals[0].augmentations[0];
    ensure(
        (aug.alpha.clone(), aug.beta.clone()) == (q("1"), q("-1")),
        || "solver's first path differs".into(),
    )?;
    Ok("α=1, β=−1, (4−3)/(0+4)=1/4, min{1/4,3/5}=1/4".into())
}

/// The residual path through `pairs` as the solver reported it.
fn path_of(pairs: &[(usize, usize)]) -> DynPath {
    golden()
        .intervals
        .iter()
        .flat_map(|iv| &iv.augmentations)
        .map(|a| &a.path)
        .find(|p| p.pairs() == pairs)
        .cloned()
        .unwrap_or_else(|| panic!("solver never used path {pairs:?}"))
}

fn oracle_equivalence() -> Result<String, String> {
    let net = four_node_network();
    let sol = golden();
    let mut shown = Vec::new();
    for lambda in ["0", "1/8", "1/4", "17/40", "3/5", "4/5", "1"].map(q) {
        let parametric = evaluate_value(&sol, &lambda).map_err(|e| e.to_string())?;
        let (oracle, _) = min_flow(&expand(&net, &lambda)).map_err(|e| e.to_string())?;
        ensure(parametric == oracle, || {
            format!("λ={lambda}: {parametric} vs oracle {oracle}")
        })?;
        shown.push(format!("v({lambda})={parametric}"));
    }
    ensure(evaluate_value(&sol, &q("0")).unwrap() == q("6"), || {
        "v(0) ≠ 6".into()
    })?;
    Ok(shown.join(", "))
}

/// Checks conservation and bounds of each interval flow at both ends.
fn endpoint_flows_feasible(net: &DynamicNetwork, sol: &ParametricSolution) -> Result<(), String> {
    for (k, interval) in sol.intervals.iter().enumerate() {
        for lambda in [&interval.lambda_lo, &interval.lambda_hi] {
            let flow = sol.flow_at(k, lambda);
            let tnet = expand(net, lambda);
            let values = tnet.arcs.iter().map(|a| flow[a.origin].clone()).collect();
            StaticFlow { values }
                .check_feasible(&tnet)
                .map_err(|e| format!("interval {k} at λ={lambda}: {e}"))?;
        }
    }
    Ok(())
}

fn property_suite() -> Result<String, String> {
    let start = Instant::now();
    let params = RandomParams::default();
    let (mut samples, mut multi) = (0, 0);
    for seed in 0..RANDOM_INSTANCES {
        let inst = random_instance(seed, &params);
        let net = &inst.network;
        ensure(
            net.node_count <= 6 && net.arcs.len() <= 10 && net.horizon <= 5,
            || format!("seed {seed}: too large"),
        )?;
        let sol =
            solve_with_base_flow(net, &inst.base_flow).map_err(|e| format!("seed {seed}: {e}"))?;
        let report = verify(&sol, net, 3, seed);
        ensure(report.all_match, || {
            format!("seed {seed}: mismatches {:?}", report.mismatches)
        })?;
        samples += report.samples.len();
        ensure(sol.breakpoints.windows(2).all(|w| w[0] < w[1]), || {
            format!("seed {seed}: breakpoints not increasing")
        })?;
        for w in sol.pieces.windows(2) {
            ensure(w[0].at(&w[0].lambda_hi) == w[1].at(&w[1].lambda_lo), || {
                format!("seed {seed}: jump at λ={}", w[0].lambda_hi)
            })?;
        }
        endpoint_flows_feasible(net, &sol).map_err(|e| format!("seed {seed}: {e}"))?;
        if sol.interval_count() > 1 {
            multi += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(multi > 0, || {
        "no instance had an interior breakpoint".into()
    })?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{RANDOM_INSTANCES} instances ({multi} with interior breakpoints), {samples} oracle samples, {elapsed:.2?}"
    ))
}

fn termination() -> Result<String, String> {
    let params = RandomParams::default();
    let (mut max_k, mut qdp_calls) = (0, 0);
    for seed in 0..RANDOM_INSTANCES {
        let inst = random_instance(seed, &params);
        let net = &inst.network;
        let sol =
            solve_with_base_flow(net, &inst.base_flow).map_err(|e| format!("seed {seed}: {e}"))?;
        let cap = interval_cap(net);
        ensure(sol.interval_count() <= cap, || {
            format!("seed {seed}: K={} over cap {cap}", sol.interval_count())
        })?;
        max_k = max_k.max(sol.interval_count());
        for interval in &sol.intervals {
            qdp_calls += 1;
            ensure(interval.lambda_hi > interval.lambda_lo, || {
                format!("seed {seed}: no progress at λ={}", interval.lambda_lo)
            })?;
            ensure(
                interval.augmentations.len() <= augmentation_cap(net),
                || format!("seed {seed}: too many paths"),
            )?;
            let state =
                residual_of(net, &interval.flow, &interval.lambda_lo).map_err(|e| e.to_string())?;
            ensure(!ls(&state, net).reachable(), || {
                format!("seed {seed}: path remains after λ_k={}", interval.lambda_lo)
            })?;
        }
    }
    Ok(format!(
        "{qdp_calls} subinterval solves all advanced and ended with C=0; max K = {max_k}"
    ))
}

fn fault_detection() -> Result<String, String> {
    let net = four_node_network();
    let mut sol = golden();
    sol.pieces[1].slope += Rational::one();
    let report = verify(&sol, &net, 3, 0);
    ensure(!report.all_match, || {
        "library verify missed the perturbed slope".into()
    })?;
    ensure(report.mismatches.iter().all(|s| s.piece == 1), || {
        "mismatch outside the perturbed piece".into()
    })?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let input = data.join("four_node_network.json");
    let solution = dir.path().join("solution.json");
    let bin = env!("CARGO_BIN_EXE_paraflow");
    let status = Command::new(bin)
        .arg("solve")
        .arg("--input")
        .arg(&input)
        .arg("--feasible-flow")
        .arg(data.join("four_node_base_flow.json"))
        .arg("--output")
        .arg(&solution)
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.code() == Some(0), || {
        format!("solve exited with {status}")
    })?;

    let text = std::fs::read_to_string(&solution).map_err(|e| e.to_string())?;
    let mut doc: SolutionDoc = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    doc.pieces[1].slope += Rational::one();
    std::fs::write(&solution, serde_json::to_string(&doc).unwrap()).map_err(|e| e.to_string())?;
    let out = Command::new(bin)
        .arg("verify")
        .arg("--input")
        .arg(&input)
        .arg("--solution")
        .arg(&solution)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(3), || {
        format!("verify exited with {}", out.status)
    })?;
    Ok(format!(
        "{} of {} samples flagged; CLI exit 3",
        report.mismatches.len(),
        report.samples.len()
    ))
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(Rational::to_string).collect()
}

fn check(
    number: usize,
    title: &str,
    f: impl FnOnce() -> Result<String, String> + UnwindSafe,
) -> bool {
    let outcome = catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
    let (verdict, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {number} [PRIMARY] {title}: {verdict} — {detail}");
    outcome.is_ok()
}

fn main() {
    let results = [
        check(1, "golden breakpoints", golden_breakpoints),
        check(2, "golden trace", golden_trace),
        check(3, "golden scalars", golden_scalars),
        check(
            4,
            "oracle equivalence on the reference network",
            oracle_equivalence,
        ),
        check(5, "random property suite", property_suite),
        check(6, "termination and progress", termination),
        check(7, "fault detection", fault_detection),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
