use std::path::{Path, PathBuf};

use persuasion_core::chain::{solve_chain_detailed, solve_chain_exact, solve_chain_with, ChainSolution};
use persuasion_core::domination::{collection_violation, set_violation};
use persuasion_core::single::{best_garbling, solve_single_with, sweep_single_detailed, SingleSolveResult};
use persuasion_core::utility::concavify_with_distribution;
use persuasion_core::{
    concavify_unconstrained, expected_utility, membership_m_eps, verify_backward_induction, Belief, BeliefGrid,
    ChainSolveResult, FiniteBeliefDistribution, Prior, Rational, Scalar, SolverConfig, UtilityFunction,
};

use crate::error::{CliError, CliResult};
use crate::format::{parse_number, sig12};
use crate::problem::Problem;
use crate::report::{Atom, Garbling, Payload, Solution, SweepRow, Violation};

pub const CSV_HEADER: [&str; 4] = ["prior", "v_s", "cav_unconstrained", "cav_constrained"];

fn atoms(dist: &FiniteBeliefDistribution, exact: Option<&[String]>) -> Vec<Atom> {
    dist.iter()
        .enumerate()
        .map(|(i, (b, w))| Atom {
            belief: b.coordinates(),
            weight: w,
            exact_weight: exact.map(|e| e[i].clone()),
        })
        .collect()
}

fn is_point_mass_at(dist: &FiniteBeliefDistribution, p: &Prior) -> bool {
    dist.len() == 1 && dist.support()[0].approx_eq(&p.belief, 1e-12)
}

fn from_single(r: &SingleSolveResult) -> Solution {
    let dist = r.distribution();
    Solution {
        solver: "single".into(),
        value: r.value,
        exact_value: None,
        support_size: dist.len(),
        distribution: atoms(&dist, None),
        used_no_information: r.used_no_information,
        feasible_set_sizes: Vec::new(),
        lattice: None,
    }
}

fn from_chain(r: ChainSolveResult, prior: &Prior) -> Solution {
    Solution {
        solver: if r.mediators == 0 { "direct".into() } else { "chain".into() },
        value: r.value,
        exact_value: r.exact_value.clone(),
        support_size: r.optimal_distribution.len(),
        distribution: atoms(&r.optimal_distribution, r.exact_weights.as_deref()),
        used_no_information: is_point_mass_at(&r.optimal_distribution, prior),
        feasible_set_sizes: r.feasible_set_sizes,
        lattice: r.lattice,
    }
}

/// One mediator at `eps = 0` in float mode uses the pair solver; everything
/// else with mediators goes through the lattice.
pub fn uses_lattice(problem: &Problem, rational: bool) -> bool {
    match problem.mediators.len() {
        0 => false,
        1 => rational || problem.eps > 0.0,
        _ => true,
    }
}

pub fn solve(problem: &Problem, rational: bool, config: &SolverConfig, warnings: &mut Vec<String>) -> CliResult<Solution> {
    if problem.mediators.is_empty() {
        if rational {
            warnings.push("no mediators: the direct concavification runs in floating point".into());
        }
        let (value, dist) = concavify_with_distribution(&problem.sender, &problem.grid, &problem.prior.belief)?;
        return Ok(Solution {
            solver: "direct".into(),
            value,
            exact_value: None,
            support_size: dist.len(),
            used_no_information: is_point_mass_at(&dist, &problem.prior),
            distribution: atoms(&dist, None),
            feasible_set_sizes: Vec::new(),
            lattice: None,
        });
    }
    if !uses_lattice(problem, rational) {
        let r = solve_single_with(&problem.sender, &problem.mediators[0], &problem.prior.belief, &problem.grid, config)?;
        if r.approximate {
            warnings.push("three or more states: only grid tuples of posteriors were searched".into());
        }
        return Ok(from_single(&r));
    }
    let chain = problem.chain()?;
    if !problem.grid.contains_vertices() {
        warnings.push("simplex vertices were added to the lattice grid".into());
    }
    let r = if rational { solve_chain_exact(&chain, config)? } else { solve_chain_with(&chain, config)? };
    if r.lattice.as_ref().is_some_and(|l| l.full_information_appended) {
        warnings.push("full information is not a multiple of 1/Q and was appended to the lattice".into());
    }
    Ok(from_chain(r, &problem.prior))
}

/// Priors `from, from + step, ..., to`, rounded to 12 decimals.
pub fn prior_range(from: f64, to: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0) || !(from <= to) || from < 0.0 || to > 1.0 {
        return Err(CliError::input(format!("bad prior range {from}..{to} step {step}")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| ((from + k as f64 * step) * 1e12).round() / 1e12).collect())
}

pub fn sweep(problem: &Problem, priors: &[f64], config: &SolverConfig, warnings: &mut Vec<String>) -> CliResult<(String, Vec<SweepRow>)> {
    if problem.states() != 2 {
        return Err(CliError::input("sweeps run over binary priors only"));
    }
    let beliefs: Vec<Belief> = priors.iter().map(|&p| Belief::binary(p)).collect::<Result<_, _>>()?;
    let constrained: Vec<f64>;
    let solver;
    if problem.mediators.len() == 1 && !uses_lattice(problem, false) {
        solver = "single";
        let prior_grid = BeliefGrid::explicit(beliefs.clone())?;
        let results = sweep_single_detailed(&problem.sender, &problem.mediators[0], &prior_grid, &problem.grid, config)?;
        // The prior grid is sorted; `priors` is ascending already.
        constrained = results.iter().map(|r| r.value).collect();
    } else {
        solver = if problem.mediators.is_empty() { "direct" } else { "chain" };
        let mut vals = Vec::with_capacity(beliefs.len());
        for b in &beliefs {
            let mut at = problem.clone();
            at.prior = Prior::from(b.clone());
            vals.push(solve(&at, false, config, warnings)?.value);
        }
        constrained = vals;
    }
    let mut rows = Vec::with_capacity(beliefs.len());
    for (b, c) in beliefs.iter().zip(constrained) {
        rows.push(SweepRow {
            prior: b.x(),
            v_s: problem.sender.eval(b)?,
            cav_unconstrained: concavify_unconstrained(&problem.sender, &problem.grid, b)?,
            cav_constrained: c,
        });
    }
    warnings.sort();
    warnings.dedup();
    Ok((solver.into(), rows))
}

pub fn write_csv(rows: &[SweepRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record([sig12(r.prior), sig12(r.v_s), sig12(r.cav_unconstrained), sig12(r.cav_constrained)])
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_csv(path: &Path) -> CliResult<Vec<SweepRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_csv(&text, &path.display().to_string())
}

pub fn parse_csv(text: &str, origin: &str) -> CliResult<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| CliError::input(format!("{origin}: {e}")))?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(CliError::input(format!("{origin}: expected header `{}`", CSV_HEADER.join(","))));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::input(format!("{origin}: {e}")))?;
        let line = i + 2;
        let num = |k: usize| -> CliResult<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::input(format!("{origin}:{line}: column `{}` is not a number", CSV_HEADER[k])))
        };
        rows.push(SweepRow { prior: num(0)?, v_s: num(1)?, cav_unconstrained: num(2)?, cav_constrained: num(3)? });
    }
    if rows.is_empty() {
        return Err(CliError::input(format!("{origin}: no data rows")));
    }
    Ok(rows)
}

/// `0.25` for two states, `a:b:c` for full coordinates.
pub fn parse_belief(token: &str, states: usize) -> CliResult<Belief> {
    let parts: Vec<&str> = token.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| parse_number(p).ok_or_else(|| CliError::input(format!("`{token}` is not a belief"))))
        .collect::<CliResult<_>>()?;
    let b = if nums.len() == 1 && states == 2 {
        Belief::binary(nums[0])
    } else if nums.len() == states {
        Belief::new(&nums)
    } else {
        return Err(CliError::input(format!("`{token}` does not match {states} states")));
    };
    b.map_err(|e| CliError::input(format!("`{token}`: {e}")))
}

pub fn parse_beliefs(list: &str, states: usize) -> CliResult<Vec<Belief>> {
    list.split(',').map(|t| parse_belief(t.trim(), states)).collect()
}

pub enum Query {
    Pair(String),
    Set(String),
    Dist(String),
}

pub fn check(problem: &Problem, mediator: usize, query: &Query, config: &SolverConfig) -> CliResult<Payload> {
    let n = problem.mediators.len();
    if mediator == 0 || mediator > n {
        return Err(CliError::input(format!("--mediator must be between 1 and {n}")));
    }
    let u: &UtilityFunction = &problem.mediators[mediator - 1];
    let k = problem.states();
    let (text, verdict, violation, garbling) = match query {
        Query::Pair(s) => {
            let beliefs = parse_beliefs(s, k)?;
            if beliefs.len() != 2 {
                return Err(CliError::input("--pair takes exactly two beliefs"));
            }
            let v = collection_violation(u, &beliefs, config)?;
            let violation = v.map(|v| Violation { weights: v.weights, mean: v.mean.coordinates(), gap: v.gap });
            (format!("pair {s}"), violation.is_none(), violation, None)
        }
        Query::Set(s) => {
            let beliefs = parse_beliefs(s, k)?;
            let v = set_violation(u, &beliefs, &problem.grid, config)?;
            let violation = v.map(|v| Violation { weights: Vec::new(), mean: v.mean.coordinates(), gap: v.value - v.envelope });
            (format!("set {s}"), violation.is_none(), violation, None)
        }
        Query::Dist(s) => {
            let weights: Vec<f64> = s
                .split(',')
                .map(|t| parse_number(t).ok_or_else(|| CliError::input(format!("`{t}` is not a weight"))))
                .collect::<CliResult<_>>()?;
            if weights.len() != problem.grid.len() {
                return Err(CliError::input(format!(
                    "--dist needs one weight per grid point ({} points)",
                    problem.grid.len()
                )));
            }
            let mu = FiniteBeliefDistribution::new(problem.grid.points().to_vec(), weights)
                .map_err(|e| CliError::input(format!("--dist: {e}")))?;
            let ok = membership_m_eps(&mu, u, &problem.grid, problem.eps)?;
            let (best, nu) = best_garbling(&mu, u, &problem.grid)?;
            let gain = best - expected_utility(u, &mu)?;
            (format!("dist {s}"), ok, None, Some(Garbling { gain, distribution: atoms(&nu, None) }))
        }
    };
    Ok(Payload::Check { mediator, query: text, verdict, violation, garbling })
}

pub struct Verified {
    pub chain_value: f64,
    pub backward_induction_value: f64,
    pub exact_values: Option<(String, String)>,
    pub elements: usize,
    pub pass: bool,
}

fn verify_with<S: Scalar>(problem: &Problem, config: &SolverConfig, cap: usize) -> CliResult<Verified> {
    let chain = problem.chain()?;
    let sol: ChainSolution<S> = solve_chain_detailed::<S>(&chain, config)?;
    let game = sol.poset_game()?;
    let (bi, _) = verify_backward_induction(&game, &sol.eps, cap)?;
    let chain_value = sol.sender_values[sol.optimal_index].clone();
    Ok(Verified {
        chain_value: chain_value.to_f64(),
        backward_induction_value: bi.to_f64(),
        exact_values: S::EXACT.then(|| (chain_value.render(), bi.render())),
        elements: sol.lattice.len(),
        pass: chain_value == bi,
    })
}

pub fn verify(problem: &Problem, rational: bool, config: &SolverConfig, cap: usize) -> CliResult<Verified> {
    if rational {
        verify_with::<Rational>(problem, config, cap)
    } else {
        verify_with::<f64>(problem, config, cap)
    }
}

pub fn write_file(path: &PathBuf, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
