use std::path::Path;

use anyhow::{bail, Context, Result};
use lssd_core::certificate::{certify_upper_bound, grid_check, Q13Scalar};
use lssd_core::classical::{example1_pc, pc_bruteforce_with_budget};
use lssd_core::game::{load_game, write_game};
use lssd_core::hypergraph::{fractional_matching, max_matching, verify_theorem3, RPartiteHypergraph};
use lssd_core::nosignaling::{build_ns_lp, NsError};
use lssd_core::quantum::{
    cqq_seesaw_with, eval_strategy, example2_state, optimize_qubit_with, paper_strategy, OptimizeOptions,
    SeesawOptions,
};
use lssd_core::rational::{noisy_bit_threshold, parse_rational, ratio, to_f64};
use lssd_core::{noisy_bit_game, pc_bruteforce, pns_exact, point_mass, product_game, theorem1_game};
use lssd_core::{JointDistribution, NoSignalingBox, Rational};
use serde_json::json;

use crate::format::{frac, sig12};
use crate::{BuiltinGame, Command};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    CheckFailed,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok { Self::Pass } else { Self::CheckFailed }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok { "PASS" } else { "FAIL" }
}

fn t_star() -> f64 {
    (16.0 + 13f64.sqrt()) / 45.0
}

fn game(path: &Path) -> Result<JointDistribution> {
    load_game(path).with_context(|| format!("reading game {}", path.display()))
}

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::Pc { game: path, budget } => pc(&path, budget),
        Command::Pns { game: path, dump_lp, box_out } => pns(&path, dump_lp, box_out.as_deref()),
        Command::ValidateBox { box_file, game } => validate_box(&box_file, game.as_deref()),
        Command::PqLower { game: path, seeds, budget, seed, paper_strategy, out } => {
            pq_lower(&path, seeds, budget, seed, paper_strategy, out.as_deref())
        }
        Command::VerifySos { grid } => verify_sos(grid),
        Command::Theorem1 { json, seeds, budget, seed } => theorem1(json, seeds, budget, seed),
        Command::Example1 { alpha, denominator } => example1(&alpha, denominator),
        Command::Example1Product { denominator } => example1_product(denominator),
        Command::Example2 { restarts, iters, seed } => example2(restarts, iters, seed),
        Command::Hypergraph { file, verify } => hypergraph(&file, verify),
        Command::WriteGame { name, alpha, output } => write_builtin(name, &alpha, output.as_deref()),
    }
}

fn pc(path: &Path, budget: u128) -> Result<Status> {
    let dist = game(path)?;
    let (value, strat) = pc_bruteforce_with_budget(&dist, budget)?;
    println!("{}", frac(&value));
    for (k, table) in strat.tables.iter().enumerate() {
        let outs: Vec<String> = table.iter().map(usize::to_string).collect();
        println!("party {k}: {}", outs.join(" "));
    }
    Ok(Status::Pass)
}

fn pns(path: &Path, dump_lp: bool, box_out: Option<&Path>) -> Result<Status> {
    let dist = game(path)?;
    if dump_lp {
        print!("{}", build_ns_lp(&dist)?.dump());
        return Ok(Status::Pass);
    }
    let (value, b) = pns_exact(&dist)?;
    println!("{}", frac(&value));
    match box_out {
        Some(out) => std::fs::write(out, b.write()).with_context(|| format!("writing {}", out.display()))?,
        None => print!("{}", b.write()),
    }
    Ok(Status::Pass)
}

fn validate_box(path: &Path, game_path: Option<&Path>) -> Result<Status> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading box {}", path.display()))?;
    let b = match NoSignalingBox::parse(&text) {
        Ok(b) => b,
        Err(NsError::InvalidBox(why)) => {
            println!("invalid: {why}");
            return Ok(Status::CheckFailed);
        }
        Err(e) => return Err(e.into()),
    };
    println!("valid no-signaling box: {} parties, {} outputs", b.num_parties(), b.outputs());
    if let Some(g) = game_path {
        println!("winning probability {}", frac(&b.winning_probability(&game(g)?)));
    }
    Ok(Status::Pass)
}

fn pq_lower(
    path: &Path,
    seeds: usize,
    budget: usize,
    seed: u64,
    reference: bool,
    out: Option<&Path>,
) -> Result<Status> {
    let dist = game(path)?;
    let strategy = if reference {
        paper_strategy()
    } else {
        optimize_qubit_with(&dist, &OptimizeOptions { seeds, budget, rng_seed: seed, patterns: None })?.1
    };
    let value = eval_strategy(&dist, &strategy)?;
    let report = strategy.report(&dist)?;
    let text = serde_json::to_string_pretty(&report)?;
    println!("p_q >= {}", sig12(value));
    match out {
        Some(out) => std::fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?,
        None => println!("{text}"),
    }
    Ok(Status::Pass)
}

fn scalar(s: &Q13Scalar) -> String {
    s.to_string()
}

fn verify_sos(grid: usize) -> Result<Status> {
    let rep = certify_upper_bound()?;
    let sweep = grid_check(grid.max(1));
    let grid_ok = sweep.max_eigenvalue <= t_star() + 1e-9;
    let matrices: Vec<_> = rep
        .psd
        .iter()
        .enumerate()
        .map(|(i, p)| {
            json!({
                "name": format!("Q{}", i + 1),
                "psd_ok": p.psd,
                "rank": p.rank,
                "pivots": p.pivots.iter().map(scalar).collect::<Vec<_>>(),
            })
        })
        .collect();
    let valid = rep.valid() && grid_ok;
    let out = json!({
        "identity_ok": rep.identity_ok,
        "matrices": matrices,
        "lambda": scalar(&rep.lambda),
        "t_star": scalar(&rep.t_star),
        "grid_points": sweep.points,
        "grid_max_eigenvalue": sweep.max_eigenvalue,
        "grid_ok": grid_ok,
        "valid": valid,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(Status::from_bool(valid))
}

fn theorem1(as_json: bool, seeds: usize, budget: usize, seed: u64) -> Result<Status> {
    let dist = theorem1_game();
    let (pc, _) = pc_bruteforce(&dist)?;
    let (pns, _) = pns_exact(&dist)?;
    let (pq, strategy) = optimize_qubit_with(&dist, &OptimizeOptions { seeds, budget, rng_seed: seed, patterns: None })?;
    let certified = certify_upper_bound()?.valid();
    let pc_ok = pc == ratio(2, 5);
    let pq_ok = pq >= t_star() - 1e-6 && pq <= t_star() + 1e-9 && certified;
    let pns_ok = pns == ratio(1, 2);
    let all = pc_ok && pq_ok && pns_ok;
    if as_json {
        let out = json!({
            "pc": frac(&pc),
            "pc_expected": "2/5",
            "pc_pass": pc_ok,
            "pq_lower": pq,
            "pq_expected": t_star(),
            "pq_upper_certified": certified,
            "pq_pattern": strategy.pattern.map(|(f, s)| [f, s]),
            "pq_pass": pq_ok,
            "pns": frac(&pns),
            "pns_expected": "1/2",
            "pns_pass": pns_ok,
            "all_pass": all,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{:<6} {:<16} {:<34} status", "value", "computed", "expected");
        println!("{:<6} {:<16} {:<34} {}", "p_c", frac(&pc), "2/5", verdict(pc_ok));
        let expected = format!("{} = (16+sqrt(13))/45", sig12(t_star()));
        println!("{:<6} {:<16} {:<34} {}", "p_q", sig12(pq), expected, verdict(pq_ok));
        println!("{:<6} {:<16} {:<34} {}", "p_ns", frac(&pns), "1/2", verdict(pns_ok));
        println!("upper bound on p_q certified exactly: {certified}");
    }
    Ok(Status::from_bool(all))
}

fn parse_alpha(alpha: &str, denominator: i64) -> Result<Rational> {
    if denominator <= 0 {
        bail!("denominator must be positive");
    }
    if alpha.trim() == "threshold" {
        return Ok(noisy_bit_threshold(denominator));
    }
    Ok(parse_rational(alpha)?)
}

fn example1(alpha: &str, denominator: i64) -> Result<Status> {
    let alpha = parse_alpha(alpha, denominator)?;
    let dist = noisy_bit_game(&alpha)?;
    let (value, _) = pc_bruteforce(&dist)?;
    let formula = example1_pc(&alpha)?;
    let ok = value == formula;
    println!("alpha = {}", frac(&alpha));
    println!("p_c = {}", frac(&value));
    println!("closed form = {} {}", frac(&formula), verdict(ok));
    Ok(Status::from_bool(ok))
}

fn example1_product(denominator: i64) -> Result<Status> {
    let alpha = parse_alpha("threshold", denominator)?;
    let single = noisy_bit_game(&alpha)?;
    let (s, _) = pc_bruteforce(&single)?;
    let (p, _) = pc_bruteforce(&product_game(&single, &single)?)?;
    let (sf, pf, af) = (to_f64(&s), to_f64(&p), to_f64(&alpha));
    let expected = 0.25 * (1.0 - af * af).powi(2) + 0.25 * (1.0 - af).powi(4);
    let gap_ok = pf > sf * sf + 1e-3;
    let formula_ok = (pf - expected).abs() < 1e-9;
    println!("alpha = {}", frac(&alpha));
    println!("single p_c = {} ({})", frac(&s), sig12(sf));
    println!("single p_c squared = {}", sig12(sf * sf));
    println!("product p_c = {} ({})", frac(&p), sig12(pf));
    println!("product exceeds square by more than 1e-3: {}", verdict(gap_ok));
    println!("(1-a^2)^2/4 + (1-a)^4/4 = {} {}", sig12(expected), verdict(formula_ok));
    Ok(Status::from_bool(gap_ok && formula_ok))
}

fn example2(restarts: usize, iters: usize, seed: u64) -> Result<Status> {
    let opts = SeesawOptions { restarts, iters, rng_seed: seed, ..Default::default() };
    let r = cqq_seesaw_with(&example2_state(), &opts)?;
    let ok = r.value >= 9.0 / 16.0 - 1e-4;
    println!("see-saw value = {}", sig12(r.value));
    println!("target 9/16 = {} {}", sig12(9.0 / 16.0), verdict(ok));
    Ok(Status::from_bool(ok))
}

fn hypergraph(path: &Path, verify: bool) -> Result<Status> {
    let g = RPartiteHypergraph::load(path).with_context(|| format!("reading hypergraph {}", path.display()))?;
    if !verify {
        let (nu, witness) = max_matching(&g)?;
        let nu_f = fractional_matching(&g)?;
        println!("edges = {}", g.edges().len());
        println!("nu = {nu}");
        println!("matching = {witness:?}");
        println!("nu_f = {}", frac(&nu_f));
        return Ok(Status::Pass);
    }
    let rep = verify_theorem3(&g)?;
    println!("edges = {}", rep.edges);
    println!("nu = {}", rep.nu);
    println!("matching = {:?}", rep.matching);
    println!("nu_f = {}", frac(&rep.nu_f));
    println!("p_c = {}", frac(&rep.pc));
    println!("p_ns = {}", frac(&rep.pns));
    println!("p_c |E| = nu: {}", verdict(rep.pc_equals_nu));
    println!("p_ns |E| <= nu_f: {}", verdict(rep.pns_within_nu_f));
    println!("nu <= nu_f <= (r-1) nu: {}", verdict(rep.nu_f_sandwich));
    if let Some(eq) = rep.bipartite_equal {
        println!("p_c = p_ns (two parts): {}", verdict(eq));
    }
    Ok(Status::from_bool(rep.all_pass()))
}

fn write_builtin(name: BuiltinGame, alpha: &str, output: Option<&Path>) -> Result<Status> {
    let dist = match name {
        BuiltinGame::Theorem1 => theorem1_game(),
        BuiltinGame::NoisyBit => noisy_bit_game(&parse_rational(alpha)?)?,
        BuiltinGame::PointMass => point_mass(2, vec![2, 2]),
    };
    let text = write_game(&dist);
    match output {
        Some(out) => std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?,
        None => print!("{text}"),
    }
    Ok(Status::Pass)
}
