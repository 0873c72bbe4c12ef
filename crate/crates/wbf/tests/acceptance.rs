//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails. Runs without the libtest harness so the lines
//! always reach the log.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wbf::commands::{cmd_simulate, cmd_sweep};
use wbf::formats::read_sweep_csv;
use wbf::Runner;
use wbf_core::faultsim::{
    cell_seed, p_failure_exact, p_failure_stirling, ChannelModel, FaultReport, NetworkScenario, StirlingParams,
    TrialSource,
};
use wbf_core::routing::{level_offset, trusted_region, verify_independence, MultipathPlan};
use wbf_core::trust::effective_redundancy;
use wbf_core::{Butterfly, NodeId, TrustRadius};

const SEED: u64 = 0xACCE_0001;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// Undirected BFS over explicit butterfly arithmetic, skipping `removed`.
fn distances(m: u32, src: NodeId, removed: &BTreeSet<NodeId>) -> HashMap<NodeId, u32> {
    let mut d = HashMap::from([(src, 0)]);
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        let up = (u.level + m - 1) % m;
        for x in [
            NodeId::new((u.level + 1) % m, u.place),
            NodeId::new((u.level + 1) % m, u.place ^ (1 << u.level)),
            NodeId::new(up, u.place),
            NodeId::new(up, u.place ^ (1 << up)),
        ] {
            if !d.contains_key(&x) && !removed.contains(&x) {
                d.insert(x, d[&u] + 1);
                q.push_back(x);
            }
        }
    }
    d
}

fn is_directed_edge(m: u32, a: NodeId, b: NodeId) -> bool {
    b.level == (a.level + 1) % m && (a.place ^ b.place) & !(1 << a.level) == 0
}

/// Distinct directed walks of exactly `len` hops from the origin to `w`.
fn count_walks(m: u32, w: NodeId, len: u32) -> usize {
    let mut ends = 0;
    for choice in 0u64..(1 << len) {
        let mut place = 0u32;
        for t in 0..len {
            if choice >> t & 1 == 1 {
                place ^= 1 << (t % m);
            }
        }
        // a walk is fixed by its choice bits, so each match is distinct
        ends += (len % m == w.level && place == w.place) as usize;
    }
    ends
}

struct RouteSweep {
    configurations: usize,
    routes: usize,
    violations: Vec<String>,
    bad_hops: Vec<String>,
    bad_lengths: Vec<String>,
    literal_length: usize,
    wrapped_length: usize,
    shortcuts: usize,
}

fn route_sweep() -> RouteSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = RouteSweep {
        configurations: 0,
        routes: 0,
        violations: Vec::new(),
        bad_hops: Vec::new(),
        bad_lengths: Vec::new(),
        literal_length: 0,
        wrapped_length: 0,
        shortcuts: 0,
    };
    for m in 4..=8u32 {
        let g = Butterfly::with_dimension(m).unwrap();
        let v = NodeId::new(0, 0);
        let dv = distances(m, v, &BTreeSet::new());
        for h in 1..=m / 2 {
            let hr = TrustRadius::new(h).unwrap();
            let mut targets: Vec<NodeId> = g.nodes().filter(|w| dv[w] >= 2 * h).collect();
            targets.shuffle(&mut rng);
            targets.truncate(50);
            for w in targets {
                out.configurations += 1;
                let tag = format!("m={m} h={h} w={}", g.label_of(w));
                let plan = MultipathPlan::new(&g, v, w, hr).unwrap();
                let routes = plan.routes();
                out.routes += routes.len();
                if routes.len() != 1 << h {
                    out.violations.push(format!("{tag}: {} routes", routes.len()));
                }
                // library verdict
                let lib = verify_independence(&routes, &trusted_region(&g, v, w, hr).unwrap());
                for x in &lib.violations {
                    out.violations.push(format!("{tag}: routes {} {} share {}", x.s, x.s_prime, g.label_of(x.node)));
                }
                // independent oracle
                let dw = distances(m, w, &BTreeSet::new());
                let untrusted = |u: &NodeId| dv[u] >= h && dw[u] >= h;
                let mut owner: HashMap<NodeId, usize> = HashMap::new();
                let mut oracle_bad = 0;
                for (s, r) in routes.iter().enumerate() {
                    for u in r.hops.iter().filter(|u| untrusted(u)) {
                        if let Some(&o) = owner.get(u) {
                            oracle_bad += (o != s) as usize;
                        } else {
                            owner.insert(*u, s);
                        }
                    }
                }
                if (oracle_bad > 0) != !lib.passed() {
                    out.violations.push(format!("{tag}: oracle and library disagree"));
                } else if oracle_bad > 0 && lib.passed() {
                    out.violations.push(format!("{tag}: oracle found {oracle_bad} shared nodes"));
                }
                let offset = level_offset(m, h, w.level);
                for (s, r) in routes.iter().enumerate() {
                    let hops_ok = r.hops[0] == v
                        && *r.hops.last().unwrap() == w
                        && r.hops.windows(2).all(|p| is_directed_edge(m, p[0], p[1]));
                    if !hops_ok || !r.is_valid_in(&g) {
                        out.bad_hops.push(format!("{tag} s={s}"));
                    }
                    if plan.is_shortcut(s as u32) {
                        out.shortcuts += 1;
                        continue;
                    }
                    if r.len() as u32 != m + offset {
                        out.bad_lengths.push(format!("{tag} s={s}: {} hops", r.len()));
                    } else if offset == w.level {
                        out.literal_length += 1;
                    } else {
                        out.wrapped_length += 1;
                    }
                }
            }
        }
    }
    out
}

fn criterion_1(sweep: &RouteSweep) -> Verdict {
    let pass = sweep.violations.is_empty();
    let mut detail = format!(
        "m in 4..=8, every h, up to 50 random destinations with d >= 2h: {} configurations, {} routes, {} violations",
        sweep.configurations,
        sweep.routes,
        sweep.violations.len()
    );
    for v in sweep.violations.iter().take(20) {
        detail.push_str(&format!("\n    {v}"));
    }
    verdict(pass, detail)
}

fn criterion_2(sweep: &RouteSweep) -> Verdict {
    // Below l_w = h the literal length m + l_w admits at most 2^l_w walks
    // at all, fewer than the 2^h routes criterion 1 needs. Confirm that by
    // enumeration, then hold routes to m + L with L = l_w + m there.
    let mut bound_ok = true;
    let mut counts = Vec::new();
    for m in 4..=6u32 {
        for l_w in 0..m / 2 {
            for place in [0u32, (1 << m) - 1, 0b0101 & ((1 << m) - 1)] {
                let n = count_walks(m, NodeId::new(l_w, place), m + l_w);
                bound_ok &= n <= 1 << l_w;
                counts.push(n);
            }
        }
    }
    let pass = sweep.bad_hops.is_empty() && sweep.bad_lengths.is_empty() && bound_ok;
    let mut detail = format!(
        "{} hops-invalid routes, {} wrong lengths; {} routes with l_w >= h have m + l_w hops, {} routes with \
         l_w < h have m + l_w + m hops ({} shortcut routes end early by design); walks of exactly m + l_w hops \
         when l_w < h, by enumeration, never exceed 2^l_w (max seen {})",
        sweep.bad_hops.len(),
        sweep.bad_lengths.len(),
        sweep.literal_length,
        sweep.wrapped_length,
        sweep.shortcuts,
        counts.iter().max().unwrap()
    );
    for v in sweep.bad_hops.iter().chain(&sweep.bad_lengths).take(20) {
        detail.push_str(&format!("\n    {v}"));
    }
    verdict(pass, detail)
}

fn criterion_3() -> Verdict {
    let mut worst = 0.0f64;
    let mut cells = 0;
    let mut pass = true;
    for delta in 1..=10u32 {
        let subsets = |size: u32| (0u32..1 << delta).filter(move |s| s.count_ones() == size).collect::<Vec<_>>();
        for k in 1..=delta {
            let ks = subsets(k);
            for c in 0..=delta {
                let cs = subsets(c);
                let hits: u64 = ks.iter().map(|&a| cs.iter().filter(|&&b| a & b == a).count() as u64).sum();
                let brute = hits as f64 / (ks.len() as f64 * cs.len() as f64);
                let p = p_failure_exact(ChannelModel::new(delta, k, c).unwrap());
                let rel = if brute == 0.0 { if p == 0.0 { 0.0 } else { f64::INFINITY } } else { (p - brute).abs() / brute };
                worst = worst.max(rel);
                pass &= rel <= 1e-12;
                cells += 1;
            }
        }
    }
    verdict(pass, format!("{cells} (delta,k,c) cells with delta <= 10, worst relative error {worst:.3e}"))
}

fn criterion_4(runner: &Runner) -> Verdict {
    let (mut cells, mut inside) = (0, 0);
    let mut outside = Vec::new();
    for delta in [4u32, 8, 16] {
        for k in 1..=delta {
            for c in 0..=delta {
                let model = ChannelModel::new(delta, k, c).unwrap();
                let seed = cell_seed(SEED, delta, k, c);
                let r = FaultReport::new(model, seed, runner.tally(&model, seed, 100_000));
                cells += 1;
                if r.within(3.0) {
                    inside += 1;
                } else {
                    outside.push(format!("({delta},{k},{c}) est {} exact {:.6}", r.estimate, r.exact));
                }
            }
        }
    }
    let frac = inside as f64 / cells as f64;
    let mut detail = format!("{inside}/{cells} cells within 3 SE ({:.2}%), 1e5 trials each", 100.0 * frac);
    if !outside.is_empty() {
        detail.push_str(&format!("; outside: {}", outside.join(", ")));
    }
    verdict(frac >= 0.99, detail)
}

fn criterion_5() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (a, b) in [(0.25, 0.5), (0.25, 0.75), (0.5, 0.75)] {
        let mut errs = Vec::new();
        for delta in [16u32, 32, 64, 128] {
            let k = (a * delta as f64).round() as u32;
            let c = (b * delta as f64).round() as u32;
            let model = ChannelModel::new(delta, k, c).unwrap();
            let approx = p_failure_stirling(StirlingParams::new(a, b, delta as f64).unwrap());
            errs.push((approx / p_failure_exact(model) - 1.0).abs());
        }
        pass &= errs.windows(2).all(|w| w[1] < w[0]) && errs[3] < 0.25;
        let shown: Vec<String> = errs.iter().map(|e| format!("{e:.2e}")).collect();
        parts.push(format!("({a},{b}): {}", shown.join(" > ")));
    }
    verdict(pass, format!("relative error at delta 16,32,64,128: {}", parts.join("; ")))
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut pass = true;
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut min_ratio = f64::INFINITY;
    for m in 5..=7u32 {
        let g = Butterfly::with_dimension(m).unwrap();
        for h in 1..=2u32 {
            let hr = TrustRadius::new(h).unwrap();
            let mut done = 0;
            while done < 100 {
                let v = g.node_at(rng.gen_range(0..g.node_total()));
                let w = g.node_at(rng.gen_range(0..g.node_total()));
                let dv = distances(m, v, &BTreeSet::new());
                if dv[&w] < 2 * h {
                    continue;
                }
                done += 1;
                checked += 1;
                let dw = distances(m, w, &BTreeSet::new());
                let bv = dv.values().filter(|&&d| d == h).count();
                let bw = dw.values().filter(|&&d| d == h).count();
                let r = effective_redundancy(&g, g.index_of(v), g.index_of(w), hr).unwrap();
                let delta = r.delta as usize;
                let cut: BTreeSet<NodeId> = r.min_cut.iter().map(|&i| g.node_at(i)).collect();
                let cut_untrusted = cut.iter().all(|u| dv[u] >= h && dw[u] >= h);
                let disconnects = !distances(m, v, &cut).contains_key(&w);
                let ok = (1 << h) <= delta
                    && delta <= bv.min(bw)
                    && r.boundary_bound() == bv.min(bw)
                    && cut.len() == delta
                    && cut_untrusted
                    && disconnects;
                min_ratio = min_ratio.min(delta as f64 / (1u32 << h) as f64);
                if !ok {
                    pass = false;
                    failures.push(format!(
                        "m={m} h={h} v={} w={}: delta {delta}, bound {}, cut {} disconnects {disconnects}",
                        g.label_of(v),
                        g.label_of(w),
                        bv.min(bw),
                        cut.len()
                    ));
                }
            }
        }
    }
    let mut detail = format!(
        "{checked} pairs on WBF(5..7), h in 1..2: 2^h <= delta <= min boundary, |cut| = delta, cut disconnects \
         (min delta/2^h = {min_ratio:.2})"
    );
    for f in failures.iter().take(10) {
        detail.push_str(&format!("\n    {f}"));
    }
    verdict(pass, detail)
}

fn criterion_7(runner: &Runner) -> Verdict {
    let g = Butterfly::with_dimension(6).unwrap();
    let v = NodeId::new(0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let dv = distances(6, v, &BTreeSet::new());
    let mut eligible: Vec<NodeId> = g.nodes().filter(|w| dv[w] >= 4).collect();
    eligible.shuffle(&mut rng);
    let mut parts = Vec::new();
    let mut pass = true;
    for &w in eligible.iter().take(5) {
        let scenario = NetworkScenario::new(&g, v, w, TrustRadius::new(2).unwrap(), 2, 3).unwrap();
        let seed = SEED ^ g.index_of(w) as u64;
        let r = FaultReport::new(scenario.channel_model(), seed, runner.tally(&scenario, seed, 10_000));
        pass &= r.within(3.0) && (r.exact - 0.5).abs() < 1e-12;
        parts.push(format!("{} {:.4}", g.label_of(w), r.estimate));
    }
    verdict(pass, format!("m=6 h=2 k=2 c=3, 1e4 trials, exact 0.5, SE 0.005; failure rate per destination: {}", parts.join(", ")))
}

fn criterion_8(runner: &Runner) -> Verdict {
    let csv = cmd_sweep(32, 10_000, SEED, runner).unwrap();
    let rows = read_sweep_csv(&csv).unwrap();
    let at = |k: u32, c: u32| &rows[((k - 1) * 33 + c) as usize];
    let mut pass = rows.len() == 32 * 33;
    let (mut k_bad, mut c_bad, mut zero_bad) = (0, 0, 0);
    for k in 1..=32 {
        for c in 0..=32 {
            let r = at(k, c);
            pass &= r.k == k && r.c == c;
            if k > 1 && r.exact > at(k - 1, c).exact {
                k_bad += 1;
            }
            if c > 0 && r.exact < at(k, c - 1).exact {
                c_bad += 1;
            }
            if k > c && (r.exact != 0.0 || r.estimate != 0.0) {
                zero_bad += 1;
            }
        }
    }
    pass &= k_bad == 0 && c_bad == 0 && zero_bad == 0;
    verdict(
        pass,
        format!(
            "{} rows; exact p_f increases with k in {k_bad} places, decreases with c in {c_bad}; {zero_bad} \
             nonzero cells with k > c",
            rows.len()
        ),
    )
}

fn criterion_9() -> Verdict {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let sweep = |r: &Runner| cmd_sweep(8, 5_000, SEED, r).unwrap();
    let sim = |r: &Runner| cmd_simulate(6, 2, None, "(3,011011)", 2, 3, 20_000, SEED, r).unwrap();
    let (one, many) = (Runner::serial(), Runner::new(Some(workers)).unwrap());
    let lib_ok = sweep(&one) == sweep(&many) && sweep(&many) == sweep(&one) && sim(&one) == sim(&many);

    let bin = env!("CARGO_BIN_EXE_wbf");
    let run = |args: &[&str], w: usize| {
        let out = Command::new(bin).args(args).args(["--workers", &w.to_string()]).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let sweep_args = ["sweep", "--delta", "8", "--trials", "5000", "--seed", "99"];
    let sim_args = ["simulate", "--m", "6", "--h", "2", "--w", "(3,011011)", "--k", "2", "--c", "3", "--seed", "99"];
    let mut bin_ok = true;
    for args in [&sweep_args[..], &sim_args[..]] {
        let runs = [run(args, 1), run(args, 1), run(args, workers), run(args, workers)];
        bin_ok &= runs.iter().all(|r| r == &runs[0]);
    }
    verdict(
        lib_ok && bin_ok,
        format!("sweep and simulate byte-identical across repeated runs and 1 vs {workers} workers (library and binary)"),
    )
}

fn main() {
    // `cargo test -- --list` and filters pass flags; there is one target
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let runner = Runner::new(None).unwrap();
    let start = Instant::now();
    let sweep = route_sweep();
    let checks: Vec<(u32, Box<dyn Fn() -> Verdict + '_>)> = vec![
        (1, Box::new(|| criterion_1(&sweep))),
        (2, Box::new(|| criterion_2(&sweep))),
        (3, Box::new(criterion_3)),
        (4, Box::new(|| criterion_4(&runner))),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(|| criterion_7(&runner))),
        (8, Box::new(|| criterion_8(&runner))),
        (9, Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (n, check) in checks {
        let t = Instant::now();
        let v = check();
        failed += !v.pass as u32;
        println!(
            "criterion {n} {} ({:.1}s): {}",
            if v.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} of 9 criteria passed in {:.1}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
