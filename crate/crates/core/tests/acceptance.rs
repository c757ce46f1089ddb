//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use lssd_core::certificate::{certify_upper_bound, grid_check};
use lssd_core::classical::example1_pc;
use lssd_core::hypergraph::{fractional_matching, game_distribution, max_matching};
use lssd_core::nosignaling::{pns_binary_inputs, RelabeledQk};
use lssd_core::quantum::{cqq_seesaw, eval_strategy, example2_state, naimark_dilate, optimize_qubit, paper_strategy};
use lssd_core::rational::{int, noisy_bit_threshold, ratio, to_f64};
use lssd_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg.into()) }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.2?}, limit {limit:?}"))
}

fn t_star() -> f64 {
    (16.0 + 13f64.sqrt()) / 45.0
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (v, _) = pc_bruteforce(&theorem1_game()).map_err(|e| e.to_string())?;
    ensure(v == ratio(2, 5), format!("p_c = {v}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("p_c = {v} in {:.2?}", start.elapsed()))
}

/// Equal to `reference` on the support up to a common shift of output labels
/// mod k, a symmetry of `Q^k`.
fn same_pattern(w: &RelabeledQk, reference: &RelabeledQk, g: &JointDistribution) -> bool {
    w.k == reference.k
        && (0..w.k).any(|c| {
            g.support().all(|(x, ab, _)| {
                (w.f[ab[0]][x] + c) % w.k == reference.f[ab[0]][x] && (w.g[ab[1]][x] + c) % w.k == reference.g[ab[1]][x]
            })
        })
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let g = theorem1_game();
    let (v, b) = pns_exact(&g).map_err(|e| e.to_string())?;
    ensure(v == ratio(1, 2), format!("LP p_ns = {v}"))?;
    ensure(b.validate().is_ok() && b.winning_probability(&g) == v, "LP box does not certify its value")?;
    let bin = pns_binary_inputs(&g).map_err(|e| e.to_string())?;
    ensure(bin.value == ratio(1, 2), format!("binary-input formula = {}", bin.value))?;
    let (wv, w) = bin.best_extremal.ok_or("no extremal witness")?;
    let table1 = RelabeledQk { k: 2, f: [vec![2, 1, 0], vec![0, 1, 2]], g: [vec![0, 1, 2], vec![1, 2, 0]] };
    ensure(wv == ratio(1, 2) && w.k == 2 && w.covers_support(&g), format!("witness {w:?} has value {wv}"))?;
    ensure(same_pattern(&w, &table1, &g), format!("witness {w:?} differs from the reference relabeling"))?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("p_ns = {v}, k = 2 witness, {:.2?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let g = theorem1_game();
    let v = eval_strategy(&g, &paper_strategy()).map_err(|e| e.to_string())?;
    ensure((v - t_star()).abs() < 1e-10, format!("reference strategy gives {v:.15}"))?;
    let (best, s) = optimize_qubit(&g, 20, 2000).map_err(|e| e.to_string())?;
    ensure(best >= t_star() - 1e-6, format!("optimizer reached {best:.12}"))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("reference {v:.12}, optimizer {best:.12} with pattern {:?}, {:.2?}", s.pattern, start.elapsed()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let rep = certify_upper_bound().map_err(|e| e.to_string())?;
    ensure(rep.identity_ok, "polynomial identity fails")?;
    for (i, p) in rep.psd.iter().enumerate() {
        ensure(p.psd, format!("Q{} is not PSD", i + 1))?;
    }
    let grid = grid_check(201);
    ensure(
        grid.max_eigenvalue <= t_star() + 1e-9,
        format!("grid maximum {:.15} at {:?}", grid.max_eigenvalue, grid.argmax),
    )?;
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "identity exact, Q1..Q4 PSD (ranks {:?}), grid max {:.12}, {:.2?}",
        rep.psd.iter().map(|p| p.rank).collect::<Vec<_>>(),
        grid.max_eigenvalue,
        start.elapsed()
    ))
}

fn criterion_5() -> Outcome {
    let s13 = 13f64.sqrt();
    let mut want = [(16.0 + s13) / 45.0, (25.0 + s13) / 90.0, (7.0 + s13) / 45.0, (19.0 - 5.0 * s13) / 90.0];
    want.sort_by(|a, b| b.total_cmp(a));
    let omega = paper_strategy().omega(&theorem1_game()).map_err(|e| e.to_string())?;
    let got = omega.eigh().map_err(|e| e.to_string())?.values;
    let worst = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(worst < 1e-9, format!("eigenvalues {got:?}, expected {want:?}"))?;
    Ok(format!("max deviation {worst:.2e}"))
}

fn criterion_6() -> Outcome {
    for i in 0..50 {
        let alpha = ratio(i, 98);
        let g = noisy_bit_game(&alpha).map_err(|e| e.to_string())?;
        let (v, _) = pc_bruteforce(&g).map_err(|e| e.to_string())?;
        let formula = example1_pc(&alpha).map_err(|e| e.to_string())?;
        ensure(v == formula, format!("alpha = {alpha}: brute force {v}, formula {formula}"))?;
    }
    let alpha = noisy_bit_threshold(1_000_000);
    let single = noisy_bit_game(&alpha).map_err(|e| e.to_string())?;
    let (s, _) = pc_bruteforce(&single).map_err(|e| e.to_string())?;
    let product = product_game(&single, &single).map_err(|e| e.to_string())?;
    let (p, _) = pc_bruteforce(&product).map_err(|e| e.to_string())?;
    let (pf, sf, af) = (to_f64(&p), to_f64(&s), to_f64(&alpha));
    ensure(pf > sf * sf + 1e-3, format!("product {pf} vs squared single {}", sf * sf))?;
    let expected = 0.25 * (1.0 - af * af).powi(2) + 0.25 * (1.0 - af).powi(4);
    ensure((pf - expected).abs() < 1e-9, format!("product {pf:.12}, expected {expected:.12}"))?;
    Ok(format!("50/50 exact; alpha = {alpha}: product {pf:.6} > single^2 {:.6}", sf * sf))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let r = cqq_seesaw(&example2_state(), 8, 60).map_err(|e| e.to_string())?;
    ensure(r.value >= 9.0 / 16.0 - 1e-4, format!("see-saw reached {:.10}", r.value))?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("see-saw value {:.10}, {:.2?}", r.value, start.elapsed()))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..1000 {
        let x = if i < 500 { 2 } else { rng.gen_range(3..=4) };
        let g = random_game(&mut rng, x, &[2, 2], 12);
        let (pc, _) = pc_bruteforce(&g).map_err(|e| e.to_string())?;
        let (pns, _) = pns_exact(&g).map_err(|e| e.to_string())?;
        ensure(pc <= pns, format!("game {i}: p_c = {pc} > p_ns = {pns}"))?;
        if x == 2 {
            ensure(pc == pns, format!("game {i}: p_c = {pc}, p_ns = {pns}"))?;
        } else {
            let cap = (int(2) * &pc).min(&pc + ratio(1, 8));
            ensure(pns <= cap, format!("game {i}: p_ns = {pns} above {cap}"))?;
        }
    }
    Ok("500 two-outcome games with p_c = p_ns, 500 games within the cap".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (rank, count) in [(3, 200), (2, 100)] {
        for i in 0..count {
            let h = random_hypergraph(&mut rng, rank, 3, 8);
            let g = game_distribution(&h).map_err(|e| e.to_string())?;
            let e = int(h.edges().len() as i64);
            let (nu, _) = max_matching(&h).map_err(|e| e.to_string())?;
            ensure(nu == matching_number_by_subsets(&h), format!("r = {rank}, #{i}: matching {nu} disagrees with subset scan"))?;
            let nu_f = fractional_matching(&h).map_err(|e| e.to_string())?;
            let (pc, _) = pc_bruteforce(&g).map_err(|e| e.to_string())?;
            let (pns, _) = pns_exact(&g).map_err(|e| e.to_string())?;
            let nu = int(nu as i64);
            ensure(&pc * &e == nu, format!("r = {rank}, #{i}: p_c |E| = {} but nu = {nu}", &pc * &e))?;
            ensure(&pns * &e <= nu_f, format!("r = {rank}, #{i}: p_ns |E| = {} above nu_f = {nu_f}", &pns * &e))?;
            ensure(nu_f <= int(rank as i64 - 1) * &nu, format!("r = {rank}, #{i}: nu_f = {nu_f}, nu = {nu}"))?;
            if rank == 2 {
                ensure(pc == pns, format!("bipartite #{i}: p_c = {pc}, p_ns = {pns}"))?;
            }
        }
    }
    Ok("200 three-partite and 100 bipartite hypergraphs".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (d, n) = (rng.gen_range(1..=4), rng.gen_range(1..=5));
        let m = random_povm(&mut rng, d, n);
        let (u, proj) = naimark_dilate(&m).map_err(|e| e.to_string())?;
        worst = worst.max(u.gram().max_abs_diff(&ComplexMatrix::identity(d)));
        for i in 0..n {
            worst = worst.max(u.compress(proj.element(i)).max_abs_diff(m.element(i)));
        }
    }
    ensure(worst < 1e-10, format!("max deviation {worst:.2e}"))?;
    Ok(format!("100 POVMs, max deviation {worst:.2e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("classical value of the three-outcome game", criterion_1),
        ("no-signaling value and k = 2 witness", criterion_2),
        ("qubit lower bound", criterion_3),
        ("sum-of-squares upper bound", criterion_4),
        ("spectrum at the reference strategy", criterion_5),
        ("noisy-bit game and its square", criterion_6),
        ("see-saw on the qutrit example", criterion_7),
        ("binary-input random suite", criterion_8),
        ("hypergraph random suite", criterion_9),
        ("Naimark dilation", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
