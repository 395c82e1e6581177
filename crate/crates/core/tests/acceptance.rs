//! Acceptance suite: one PASS/FAIL/SKIP line per criterion.

use morph_qec::decoder::{boundary, local_modify, syndrome_of, Decoder, Matching};
use morph_qec::hct::{generate, LatticeEdge, Method};
use morph_qec::matching::min_weight_perfect_matching;
use morph_qec::morph;
use morph_qec::msd::{self, CczSlot, NoiseSpec};
use morph_qec::scenarios::{run_scenario, Report, ScenarioOptions, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};

struct Outcome {
    status: Status,
    detail: String,
}

fn pass_if(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into() }
}

fn from_reports(reports: &[Report], elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.anchors.iter().filter(|a| a.status == Status::Fail).map(move |a| format!("{}/{}: {}", r.scenario, a.label, a.actual)))
        .collect();
    let n: usize = reports.iter().map(|r| r.anchors.iter().filter(|a| a.status == Status::Pass).count()).sum();
    let slow = limit.is_some_and(|l| elapsed > l);
    let shown: Vec<String> = reports.iter().flat_map(|r| r.anchors.iter().filter(|a| a.status == Status::Pass).map(|a| format!("{} = {}", a.label, a.actual))).collect();
    let mut detail = if n <= 4 { shown.join("; ") } else { format!("{n} anchors pass") };
    detail += &format!(" ({elapsed:.2?})");
    if !failed.is_empty() {
        detail = failed.join("; ");
    }
    if slow {
        detail += &format!("; over time limit {:?}", limit.unwrap());
    }
    pass_if(failed.is_empty() && !slow, detail)
}

fn scenarios(names: &[&str], opts: &ScenarioOptions, limit: Option<Duration>) -> Outcome {
    let t = Instant::now();
    let reports: Vec<Report> = names.iter().map(|n| run_scenario(n, opts).expect("registered scenario")).collect();
    from_reports(&reports, t.elapsed(), limit)
}

/// Floating-point enumeration over the hand-written [[10,1,2]] generators.
fn float_oracle_10(p: f64) -> (f64, f64) {
    let code = morph::reference_10_1_2();
    let mask = |v: &morph_qec::gf2::BitVec| v.iter_ones().fold(0u32, |m, i| m | 1 << i);
    let xs: Vec<u32> = code.x_stabs().iter().map(mask).collect();
    let lx: Vec<u32> = code.logical_x().iter().map(mask).collect();
    let (mut ps, mut bad) = (0.0, 0.0);
    for z in 0u32..1 << 10 {
        let t = z & 0x7f;
        let b = z >> 7;
        let w = t.count_ones() as i32;
        let pr = p.powi(w) * (1.0 - p).powi(7 - w) * if b == 0 { 1.0 - p } else { p / 7.0 };
        if xs.iter().all(|&s| (s & z).count_ones() % 2 == 0) {
            ps += pr;
            if lx.iter().any(|&l| (l & z).count_ones() % 2 == 1) {
                bad += pr;
            }
        }
    }
    (ps, bad)
}

fn c1() -> Outcome {
    let t = Instant::now();
    let (_, a) = msd::ten_to_one().expect("analysis");
    let elapsed = t.elapsed();
    let int = |v: i64| num_rational::BigRational::from_integer(v.into());
    let ps_ok = (0..3).all(|i| a.p_s.coeff(i) == int([1, -8, 29][i]));
    let series = a.p_out_series(3);
    let out_ok = (0..4).all(|i| series.coeff(i) == int([0, 0, 1, 9][i]));
    let num = &a.p_out_numerator;
    let num_coeffs: Vec<String> = (0..4).map(|i| num.coeff(i).to_string()).collect();
    let oracle_ok = [0.001, 0.01, 0.05, 0.1].iter().all(|&p| {
        let (ps, bad) = float_oracle_10(p);
        (ps - a.p_s.eval(p)).abs() < 1e-12 && (bad - num.eval(p)).abs() < 1e-12
    });
    // consistency: explicit optimistic noise spec gives the same polynomials
    let (code, slots, triple) = msd::ten_one_two_setup().expect("setup");
    let again = msd::analyze(&code, &NoiseSpec { t_slots: slots, ccz: vec![CczSlot { qubits: triple, branches: msd::optimistic_branches() }] }).expect("analysis");
    pass_if(
        ps_ok && out_ok && oracle_ok && again == a && elapsed < Duration::from_secs(1),
        format!(
            "p_s = {} + O(p^3); p_out = p^2 + 9p^3 + O(p^4) conditioned on success (numerator coefficients [{}]); float oracle {}; {:.2?}",
            msd::Poly::from_coeffs((0..3).map(|i| a.p_s.coeff(i)).collect()),
            num_coeffs.join(", "),
            if oracle_ok { "agrees" } else { "disagrees" },
            elapsed
        ),
    )
}

fn c2() -> Outcome {
    let t = Instant::now();
    let (_, a) = msd::fifteen_to_one().expect("analysis");
    let elapsed = t.elapsed();
    let s = a.p_out_series(3);
    let ok = s == msd::Poly::from_ints(&[0, 0, 0, 35]) && elapsed < Duration::from_secs(5);
    pass_if(ok, format!("p_out = {s} + O(p^4); {elapsed:.2?}"))
}

fn c4(opts: &ScenarioOptions) -> (Outcome, Option<Outcome>) {
    let t = Instant::now();
    let r = run_scenario("msd-cost", opts).expect("registered");
    let skipped: Vec<&str> = r.anchors.iter().filter(|a| a.status == Status::Skip).map(|a| a.actual.as_str()).collect();
    let main = from_reports(std::slice::from_ref(&r), t.elapsed(), None);
    let extra = (!skipped.is_empty()).then(|| Outcome { status: Status::Skip, detail: format!("10-to-2 column: {}", skipped.join("; ")) });
    (main, extra)
}

fn brute_force_pairing(w: &[Vec<i64>], left: &mut Vec<usize>) -> i64 {
    if left.is_empty() {
        return 0;
    }
    let a = left.remove(0);
    let mut best = i64::MAX;
    for i in 0..left.len() {
        let b = left.remove(i);
        best = best.min(w[a][b] + brute_force_pairing(w, left));
        left.insert(i, b);
    }
    left.insert(0, a);
    best
}

fn matching_optimality(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for case in 0..300 {
        let n = 2 * rng.random_range(1..=5);
        let mut w = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                w[i][j] = rng.random_range(0..50);
                w[j][i] = w[i][j];
            }
        }
        let m = min_weight_perfect_matching(n, |i, j| Some(w[i][j])).ok_or("no matching")?;
        let got: i64 = m.iter().map(|&(i, j)| w[i][j]).sum();
        let want = brute_force_pairing(&w, &mut (0..n).collect());
        if got != want {
            return Err(format!("case {case}: weight {got} vs optimum {want}"));
        }
    }
    Ok("300 graphs up to 10 defects optimal".into())
}

fn modify_boundary(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let lats: Vec<_> = (0..20).map(|s| generate(9, Method::B, 0.6, s).expect("lattice")).collect();
    let mut changed = 0;
    for i in 0..10_000usize {
        let lat = &lats[i % lats.len()];
        let rr: Vec<usize> = (0..lat.cc_edges().len()).filter(|&e| lat.cc_edges()[e].color == 0).collect();
        let mut m = Matching::new(1 + (i % 2) as u8);
        for _ in 0..rng.random_range(1..8) {
            if !rr.is_empty() && rng.random_bool(0.5) {
                m.toggle(LatticeEdge::Cc(rr[rng.random_range(0..rr.len())]));
            } else {
                m.toggle(LatticeEdge::Base(rng.random_range(0..lat.base().count(1))));
            }
        }
        let out = local_modify(lat, &m).map_err(|e| format!("instance {i}: {e}"))?;
        if boundary(lat, &m) != boundary(lat, &out) {
            return Err(format!("instance {i}: boundary changed"));
        }
        changed += (out != m) as usize;
    }
    Ok(format!("10^4 instances ({changed} rewritten)"))
}

fn decode_consistency() -> Result<String, String> {
    let cases: Vec<(Method, f64, u64)> =
        [Method::A1, Method::A2, Method::B, Method::C].iter().flat_map(|&m| [0.0, 0.5, 1.0].map(|q| (m, q))).enumerate().map(|(i, (m, q))| (m, q, i as u64)).collect();
    let per = 100_000usize.div_ceil(cases.len());
    let results: Result<Vec<usize>, String> = cases
        .par_iter()
        .map(|&(method, q, seed)| {
            let lat = generate(9, method, q, seed).map_err(|e| e.to_string())?;
            let dec = Decoder::new(&lat);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdec0de);
            for t in 0..per {
                let p = 0.02 + 0.1 * (t % 10) as f64 / 10.0;
                let err: Vec<usize> = (0..lat.n_qubits()).filter(|_| rng.random_bool(p)).collect();
                let s = syndrome_of(&lat, &err).map_err(|e| e.to_string())?;
                let c = dec.decode(&s).map_err(|e| format!("{method} q={q}: {e}"))?;
                if syndrome_of(&lat, &c).map_err(|e| e.to_string())? != s {
                    return Err(format!("{method} q={q} trial {t}: syndrome mismatch"));
                }
            }
            Ok(per)
        })
        .collect();
    Ok(format!("{} decodes reproduce their syndrome", results?.iter().sum::<usize>()))
}

fn single_qubit_errors() -> Result<String, String> {
    let mut tested = 0;
    for l in [6, 9] {
        for method in [Method::A1, Method::A2, Method::B, Method::C] {
            for q in [0.0, 0.3, 0.7, 1.0] {
                for seed in 0..2 {
                    let lat = generate(l, method, q, seed).map_err(|e| e.to_string())?;
                    let dec = Decoder::new(&lat);
                    for e in 0..lat.n_qubits() {
                        let s = syndrome_of(&lat, &[e]).map_err(|e| e.to_string())?;
                        let c = dec.decode(&s).map_err(|e| e.to_string())?;
                        if !dec.judge(&[e], &c).map_err(|e| e.to_string())? {
                            return Err(format!("L={l} {method} q={q} seed={seed} qubit {e}"));
                        }
                        tested += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{tested} single-qubit errors corrected"))
}

fn c11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let parts = [matching_optimality(&mut rng), modify_boundary(&mut rng), decode_consistency(), single_qubit_errors()];
    let ok = parts.iter().all(Result::is_ok);
    let detail: Vec<String> = parts.into_iter().map(|p| p.unwrap_or_else(|e| format!("FAILED {e}"))).collect();
    pass_if(ok, detail.join("; "))
}

fn main() {
    let opts = ScenarioOptions::default();
    let mut lines: Vec<(String, Outcome)> = Vec::new();
    let mut record = |id: &str, o: Outcome| {
        println!("criterion {id}: {} - {}", o.status, o.detail);
        lines.push((id.to_string(), o));
    };
    record("1", c1());
    record("2", c2());
    record("3", scenarios(&["msd-crossover"], &opts, None));
    let (main, extra) = c4(&opts);
    record("4", main);
    if let Some(e) = extra {
        record("4 (external)", e);
    }
    record("5", scenarios(&["morph-steane", "morph-qrm3"], &opts, Some(Duration::from_secs(10))));
    let w2 = [(2, 2usize), (3, 3)].map(|(d, want)| {
        let cx = morph_qec::colex::Colex::nested_simplex(d);
        let parent = morph_qec::colex::color_code(&cx);
        let ball = cx.ball(d + 1).expect("ball");
        let hubs = morph_qec::colex::default_hubs(&cx, &ball);
        let m = morph::morph(&morph::MorphSpec::ball(&cx, &parent, &ball, &hubs).expect("spec")).expect("morph");
        (m.code.count_weight2_logical_z(), want)
    });
    record("6", pass_if(w2.iter().all(|(g, w)| g == w), format!("weight-2 logical counts {:?} (expected 2, 3)", w2.map(|x| x.0))));
    record("7", scenarios(&["morph-steane", "morph-qrm3", "gates-ckz"], &opts, Some(Duration::from_secs(30))));
    record("8", scenarios(&["ball-codes"], &opts, None));
    record("9", scenarios(&["toric-limit"], &opts, None));
    record("10", scenarios(&["threshold-a1", "threshold-c"], &opts, None));
    record("11", c11());
    let failed: Vec<&str> = lines.iter().filter(|(_, o)| o.status == Status::Fail).map(|(id, _)| id.as_str()).collect();
    if !failed.is_empty() {
        println!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
