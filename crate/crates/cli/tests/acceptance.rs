//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treesum_core::distribution::{hellinger, hellinger_counts};
use treesum_core::greedy::lazy_greedy;
use treesum_core::io::tree_to_json;
use treesum_core::metrics::diversity;
use treesum_core::{
    all_scores, brute_force_opt, build_tree, common_tree, evaluate, feq, load_tree_pair, pass_up,
    save_tree_pair, svdt_greedy, synth_generate, GreedyOptions, NodeId, NodeSpec, ScoreModel, Side,
    SummarySelection, WeightModel, WeightedTreePair,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize, max_w: u64) -> WeightedTreePair {
    let mut parents = vec![None];
    for i in 1..n {
        parents.push(Some(NodeId(rng.gen_range(0..i))));
    }
    let (mut w1, mut w2) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let a = rng.gen_range(0..=max_w);
        let (x, y) = match rng.gen_range(0..6) {
            0 => (a, a),
            1 => (a, 0),
            2 => (0, a),
            3 => (0, 0),
            _ => (a, rng.gen_range(0..=max_w)),
        };
        w1.push(x);
        w2.push(y);
    }
    let labels = (0..n).map(|i| format!("n{i}")).collect();
    WeightedTreePair::from_parents(labels, parents, w1, w2).unwrap()
}

fn f1() -> WeightedTreePair {
    build_tree(&[
        NodeSpec::new("r", None, 10, 10),
        NodeSpec::new("a", Some("r"), 100, 0),
        NodeSpec::new("b", Some("r"), 50, 45),
    ])
    .unwrap()
}

fn worked_example() -> Outcome {
    let pair = f1();
    let d = pass_up(&pair, 1).map_err(|e| e.to_string())?;
    check(d[0].sim_vector() == vec![50, 45], || {
        format!("Sim_D(r) = {:?}", d[0].sim_vector())
    })?;
    check(d[0].dif_vector() == vec![100, 0], || {
        format!("Dif_D(r) = {:?}", d[0].dif_vector())
    })?;
    let (p1, p2) = (50.0_f64 / 95.0, 45.0_f64 / 95.0);
    let hand = (0.5 * ((p1.sqrt() - 1.0).powi(2) + p2)).sqrt();
    let got = all_scores(&pair, 1).map_err(|e| e.to_string())?[0];
    check((got - hand).abs() < 1e-12, || {
        format!("score {got} vs oracle {hand}")
    })?;
    check((got - 0.52395).abs() < 1e-4, || format!("score {got}"))?;
    Ok(format!("SimDif(r) = {got:.5}"))
}

fn random_probability(rng: &mut ChaCha8Rng, len: usize, support: &[bool]) -> Vec<f64> {
    let raw: Vec<f64> = (0..len)
        .map(|i| {
            if support[i] {
                rng.gen_range(0.01..1.0)
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

fn hellinger_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..10_000 {
        let beta = rng.gen_range(1..=8);
        let len = 2 * beta;
        let sim: Vec<u64> = (0..len).map(|_| rng.gen_range(0..50)).collect();
        let dif: Vec<u64> = (0..len).map(|_| rng.gen_range(0..50)).collect();
        let h = hellinger_counts(&sim, &dif);
        check((0.0..=1.0).contains(&h), || format!("pair {i}: score {h}"))?;
        check(
            hellinger_counts(&sim, &sim).abs() <= 1e-12 || sim.iter().all(|&v| v == 0),
            || {
                format!(
                    "pair {i}: identical inputs gave {}",
                    hellinger_counts(&sim, &sim)
                )
            },
        )?;

        let all = vec![true; len];
        let p = random_probability(&mut rng, len, &all);
        let q = random_probability(&mut rng, len, &all);
        let h = hellinger(&p, &q);
        check((0.0..=1.0).contains(&h), || {
            format!("pair {i}: probability score {h}")
        })?;
        check(hellinger(&p, &p).abs() <= 1e-12, || {
            format!("pair {i}: identity")
        })?;

        let split = rng.gen_range(1..len);
        let left: Vec<bool> = (0..len).map(|j| j < split).collect();
        let right: Vec<bool> = left.iter().map(|b| !b).collect();
        let p = random_probability(&mut rng, len, &left);
        let q = random_probability(&mut rng, len, &right);
        let h = hellinger(&p, &q);
        check((h - 1.0).abs() <= 1e-12, || {
            format!("pair {i}: disjoint supports gave {h}")
        })?;
    }
    Ok("10000 pairs".into())
}

fn approximation_guarantee() -> Outcome {
    let bound = 1.0 - 1.0 / std::f64::consts::E;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = f64::INFINITY;
    let instances = 150;
    for i in 0..instances {
        let n = rng.gen_range(1..=12);
        let pair = random_pair(&mut rng, n, 60);
        let k = rng.gen_range(1..=3);
        let beta = rng.gen_range(1..=2);
        let model = ScoreModel::new(&pair, beta).map_err(|e| e.to_string())?;
        let (greedy, _) = svdt_greedy(&pair, k, beta).map_err(|e| e.to_string())?;
        let g = model.summary_score(&greedy).0;
        let (_, opt) = brute_force_opt(&pair, k, beta).map_err(|e| e.to_string())?;
        check(g >= bound * opt - 1e-9, || {
            format!("instance {i}: greedy {g} < 0.632 x opt {opt}")
        })?;
        if opt > 0.0 {
            worst = worst.min(g / opt);
        }
    }
    Ok(format!("{instances} instances, worst ratio {worst:.4}"))
}

fn submodularity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut samples = 0;
    while samples < 1500 {
        let n = rng.gen_range(2..=15);
        let pair = random_pair(&mut rng, n, 80);
        let beta = rng.gen_range(1..=3);
        let model = ScoreModel::new(&pair, beta).map_err(|e| e.to_string())?;

        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let x = NodeId(order[0]);
        let side = if rng.gen_bool(0.5) {
            Side::Sim
        } else {
            Side::Dif
        };
        let b_size = rng.gen_range(0..n);
        let a_size = rng.gen_range(0..=b_size);

        let mut chain = SummarySelection::new(n);
        let mut prev = model.summary_score(&chain).0;
        let mut a = None;
        for (j, &id) in order[1..=b_size].iter().enumerate() {
            if j == a_size {
                a = Some(chain.clone());
            }
            let s = if rng.gen_bool(0.5) {
                Side::Sim
            } else {
                Side::Dif
            };
            chain.insert(NodeId(id), s).map_err(|e| e.to_string())?;
            let cur = model.summary_score(&chain).0;
            check(cur >= prev - 1e-9, || {
                format!("sample {samples}: score fell {prev} -> {cur}")
            })?;
            prev = cur;
        }
        let a = a.unwrap_or_else(|| chain.clone());
        let ga = model
            .marginal_gain(x, &a, side)
            .map_err(|e| e.to_string())?;
        let gb = model
            .marginal_gain(x, &chain, side)
            .map_err(|e| e.to_string())?;
        check(ga >= gb - 1e-9, || {
            format!("sample {samples}: gain {ga} on subset < {gb} on superset")
        })?;
        samples += 1;
    }
    Ok(format!("{samples} samples"))
}

fn naive_greedy(model: &ScoreModel<'_>, k: usize) -> SummarySelection {
    let pair = model.pair();
    let mut sel = SummarySelection::new(k);
    while sel.len() < k.min(pair.len()) {
        let mut best: Option<(f64, NodeId, Side)> = None;
        for x in pair.nodes().filter(|&x| !sel.contains(x)) {
            let gs = model.marginal_gain(x, &sel, Side::Sim).unwrap();
            let gd = model.marginal_gain(x, &sel, Side::Dif).unwrap();
            let (g, side) = if gs >= gd {
                (gs, Side::Sim)
            } else {
                (gd, Side::Dif)
            };
            if best.is_none_or(|(b, _, _)| g > b) {
                best = Some((g, x, side));
            }
        }
        let Some((g, x, side)) = best else { break };
        if g <= 0.0 {
            break;
        }
        sel.insert(x, side).unwrap();
    }
    sel
}

fn lazy_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..50 {
        let n = rng.gen_range(1..=200);
        let pair = random_pair(&mut rng, n, 100);
        let beta = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=12);
        let model = ScoreModel::new(&pair, beta).map_err(|e| e.to_string())?;
        let (lazy, _) =
            lazy_greedy(&model, &GreedyOptions::new(k, beta)).map_err(|e| e.to_string())?;
        let naive = naive_greedy(&model, k);
        check(lazy.s1 == naive.s1 && lazy.s2 == naive.s2, || {
            format!(
                "tree {i}: lazy {:?}/{:?} vs naive {:?}/{:?}",
                lazy.s1, lazy.s2, naive.s1, naive.s2
            )
        })?;
        let (a, b) = (model.summary_score(&lazy).0, model.summary_score(&naive).0);
        check((a - b).abs() <= 1e-9, || {
            format!("tree {i}: score {a} vs {b}")
        })?;
    }
    Ok("50 trees".into())
}

fn timed_selection(n: usize) -> Result<Duration, String> {
    let pair = synth_generate(n, 8, WeightModel::Uniform { lo: 0, hi: 1000 }, 6)
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let (sel, _) = svdt_greedy(&pair, 10, 3).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(!sel.is_empty(), || format!("empty selection on {n} nodes"))?;
    Ok(elapsed)
}

fn scalability() -> Outcome {
    // best of three damps scheduler noise on the small tree
    let small = (0..3)
        .map(|_| timed_selection(10_000))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .min()
        .unwrap();
    let large = timed_selection(100_000)?;
    let ratio = large.as_secs_f64() / small.as_secs_f64().max(1e-9);
    check(ratio <= 20.0, || format!("ratio {ratio:.2}"))?;
    Ok(format!(
        "1e4: {:.3}s, 1e5: {:.3}s, ratio {ratio:.2}",
        small.as_secs_f64(),
        large.as_secs_f64()
    ))
}

fn metric_trend() -> Outcome {
    let model = WeightModel::Hotspot {
        lo: 1,
        hi: 100,
        hotspots: 3,
        damp: 0.1,
    };
    let mut report = Vec::new();
    let mut ok = true;
    for k in [5, 10] {
        let mut wins = 0;
        for seed in 0..50 {
            let pair = synth_generate(1000, 4, model, seed).map_err(|e| e.to_string())?;
            let (svdt, _) = svdt_greedy(&pair, k, 50).map_err(|e| e.to_string())?;
            let picked: BTreeSet<NodeId> = feq(&common_tree(&pair), k);
            let base = SummarySelection::from_sets(picked, [], k).map_err(|e| e.to_string())?;
            if diversity(&svdt, &pair) >= diversity(&base, &pair) {
                wins += 1;
            }
        }
        ok &= wins >= 45;
        report.push(format!("k={k}: {wins}/50"));
    }
    let text = report.join(", ");
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = treesum_cli::run(
        std::iter::once("treesum").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    if code != 0 {
        return Err(format!(
            "{args:?} exited {code}: {}",
            String::from_utf8_lossy(&err)
        ));
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let pair = synth_generate(
        300,
        5,
        WeightModel::Correlated {
            lo: 0,
            hi: 500,
            rho: 0.7,
        },
        8,
    )
    .map_err(|e| e.to_string())?;
    save_tree_pair(&pair, &first).map_err(|e| e.to_string())?;
    let loaded = load_tree_pair(std::slice::from_ref(&first)).map_err(|e| e.to_string())?;
    save_tree_pair(&loaded, &second).map_err(|e| e.to_string())?;
    let (a, b) = (
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap(),
    );
    check(a == b, || "saved bytes differ after reload".into())?;
    check(tree_to_json(&loaded) == tree_to_json(&pair), || {
        "reloaded tree differs".into()
    })?;

    let input = first.to_str().unwrap();
    let dot1 = run_cli(&["viz", "--input", input, "--k", "8", "--beta", "3"])?;
    let dot2 = run_cli(&["viz", "--input", input, "--k", "8", "--beta", "3"])?;
    check(dot1 == dot2 && !dot1.is_empty(), || {
        "viz output differs between runs".into()
    })?;

    let summary = dir.path().join("summary.json");
    run_cli(&[
        "summarize",
        "--input",
        input,
        "--k",
        "8",
        "--beta",
        "3",
        "--output",
        summary.to_str().unwrap(),
    ])?;
    let m1 = run_cli(&[
        "metrics",
        "--input",
        input,
        "--summary",
        summary.to_str().unwrap(),
        "--seed",
        "11",
    ])?;
    let m2 = run_cli(&[
        "metrics",
        "--input",
        input,
        "--summary",
        summary.to_str().unwrap(),
        "--seed",
        "11",
    ])?;
    check(m1 == m2, || "metric output differs between runs".into())?;

    // saved ids follow pre-order, so compare against the reloaded tree
    let (sel, _) = svdt_greedy(&loaded, 8, 3).map_err(|e| e.to_string())?;
    let r1 = evaluate(&sel, &loaded, 11, 500).map_err(|e| e.to_string())?;
    let r2 = evaluate(&sel, &loaded, 11, 500).map_err(|e| e.to_string())?;
    check(r1 == r2, || format!("{r1:?} vs {r2:?}"))?;
    check(m1 == r1.to_tsv().into_bytes(), || {
        "cli metrics differ from library metrics".into()
    })?;
    Ok("round-trip, DOT and metrics stable".into())
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "worked example pipeline",
            limit: Some(Duration::from_secs(1)),
            run: worked_example,
        },
        Criterion {
            id: 2,
            name: "hellinger bounds",
            limit: Some(Duration::from_secs(5)),
            run: hellinger_bounds,
        },
        Criterion {
            id: 3,
            name: "approximation guarantee",
            limit: Some(Duration::from_secs(60)),
            run: approximation_guarantee,
        },
        Criterion {
            id: 4,
            name: "submodularity and monotonicity",
            limit: Some(Duration::from_secs(60)),
            run: submodularity,
        },
        Criterion {
            id: 5,
            name: "lazy greedy equivalence",
            limit: Some(Duration::from_secs(60)),
            run: lazy_equivalence,
        },
        Criterion {
            id: 6,
            name: "scalability shape",
            limit: Some(Duration::from_secs(120)),
            run: scalability,
        },
        Criterion {
            id: 7,
            name: "diversity trend",
            limit: None,
            run: metric_trend,
        },
        Criterion {
            id: 8,
            name: "determinism and round-trip",
            limit: None,
            run: determinism,
        },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(detail), Some(limit)) if elapsed > limit => Err(format!(
                "{detail}; took {:.2}s, limit {}s",
                elapsed.as_secs_f64(),
                limit.as_secs()
            )),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!(
                "PASS [{}] {} ({detail}; {:.2}s)",
                c.id,
                c.name,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failures += 1;
                println!(
                    "FAIL [{}] {} ({why}; {:.2}s)",
                    c.id,
                    c.name,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
