//! Search for the matching whose product module is closest to a target.
//!
//! Candidates pair off-diagonal points partially injectively. Every unmatched
//! point goes to the diagonal at its projection or at a critical coordinate of
//! the target. Stored diagonal points always go to the diagonal.

use std::collections::BTreeSet;
use std::fmt;

use log::{debug, info};
use rayon::prelude::*;

use super::bottleneck::diagonal_projection;
use super::interleaving::{interleaving_exact_with, DEFAULT_BUDGET};
use super::matching_distance::{matching_distance_estimate, LineSampling};
use super::{Distance, DistanceError};
use crate::grid::{evaluate_hooks_in, GridModule};
use crate::persistence::PersistenceDiagram;
use crate::product::{build_product, hooks_of_product, MatchEntry, Matching};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    ExactInterleaving,
    MatchingDistance,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::ExactInterleaving => "exact_interleaving",
            Objective::MatchingDistance => "matching_distance_estimate",
        })
    }
}

/// `Auto` uses the exact objective when every candidate fits the budget and
/// otherwise scores every candidate with the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObjectiveChoice {
    #[default]
    Auto,
    Exact,
    Matching,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub objective: ObjectiveChoice,
    /// Largest number of off-diagonal points per diagram.
    pub max_points: usize,
    pub max_candidates: usize,
    /// Free-coefficient budget for the exact objective.
    pub budget: usize,
    /// Largest shift tried by the exact objective; defaults to the box size.
    pub max_eps: Option<u64>,
    pub sampling: LineSampling,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            objective: ObjectiveChoice::Auto,
            max_points: 8,
            max_candidates: 200_000,
            budget: DEFAULT_BUDGET,
            max_eps: None,
            sampling: LineSampling::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub best_matching: Matching,
    pub best_value: Distance,
    pub objective: Objective,
    /// Candidates scored.
    pub evaluations: usize,
    /// Candidates attaining the best value, the reported one included.
    pub tied_minimizers: usize,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "objective: {}", self.objective)?;
        writeln!(f, "best_value: {}", self.best_value)?;
        writeln!(f, "evaluations: {}", self.evaluations)?;
        writeln!(f, "tied_minimizers: {}", self.tied_minimizers)?;
        writeln!(f, "best_matching:")?;
        f.write_str(&self.best_matching.to_text())
    }
}

fn check_points(pd: &PersistenceDiagram, config: &SearchConfig) -> Result<(), DistanceError> {
    let n = pd.off_diagonal().count();
    if n > config.max_points {
        return Err(DistanceError::BudgetExceeded {
            what: format!("{n} off-diagonal points, limit {}", config.max_points),
            partial: None,
        });
    }
    Ok(())
}

/// Diagonal parameters for an unmatched point: its projection and every
/// critical coordinate strictly inside the box.
fn diagonal_choices(p: crate::persistence::DiagramPoint, axis: &[u64], edge: u64) -> Vec<u64> {
    let set: BTreeSet<u64> = std::iter::once(diagonal_projection(p))
        .chain(axis.iter().copied().filter(|&c| c < edge))
        .collect();
    set.into_iter().collect()
}

/// All candidate matchings, sorted.
pub fn enumerate_candidates(
    pd_f: &PersistenceDiagram,
    pd_g: &PersistenceDiagram,
    target: &GridModule,
    config: &SearchConfig,
) -> Result<Vec<Matching>, DistanceError> {
    check_points(pd_f, config)?;
    check_points(pd_g, config)?;
    let bound = target.bound();
    let f_off: Vec<usize> = pd_f.off_diagonal().map(|(i, _)| i).collect();
    let g_off: Vec<usize> = pd_g.off_diagonal().map(|(i, _)| i).collect();
    // an unmatched f-point meets the diagonal of the g side, so its copy sits on the y axis
    let f_choices: Vec<Vec<u64>> = f_off
        .iter()
        .map(|&i| diagonal_choices(pd_f.point(i), target.ys(), bound.y))
        .collect();
    let g_choices: Vec<Vec<u64>> = g_off
        .iter()
        .map(|&j| diagonal_choices(pd_g.point(j), target.xs(), bound.x))
        .collect();

    let mut fixed = Vec::new();
    for (i, p) in pd_f.points().iter().enumerate() {
        if p.is_diagonal() {
            fixed.push(MatchEntry::FDiag { f: i, t: p.birth });
        }
    }
    for (j, p) in pd_g.points().iter().enumerate() {
        if p.is_diagonal() {
            fixed.push(MatchEntry::GDiag { t: p.birth, g: j });
        }
    }

    // partial injections f_off -> g_off, as assignment vectors
    let mut injections = Vec::new();
    let mut current = vec![None; f_off.len()];
    let mut used = vec![false; g_off.len()];
    partial_injections(0, &mut current, &mut used, &mut injections);

    let mut total = 0usize;
    for inj in &injections {
        let mut count = 1usize;
        for (a, slot) in inj.iter().enumerate() {
            if slot.is_none() {
                count = count.saturating_mul(f_choices[a].len());
            }
        }
        for (b, choices) in g_choices.iter().enumerate() {
            if !inj.contains(&Some(b)) {
                count = count.saturating_mul(choices.len());
            }
        }
        total = total.saturating_add(count);
    }
    if total > config.max_candidates {
        return Err(DistanceError::BudgetExceeded {
            what: format!(
                "{total} candidate matchings, limit {}",
                config.max_candidates
            ),
            partial: None,
        });
    }

    let mut out = Vec::with_capacity(total);
    for inj in &injections {
        let mut base = fixed.clone();
        // one slot per unmatched point, each with its list of diagonal entries
        let mut slots: Vec<Vec<MatchEntry>> = Vec::new();
        for (a, slot) in inj.iter().enumerate() {
            match slot {
                Some(b) => base.push(MatchEntry::Pair {
                    f: f_off[a],
                    g: g_off[*b],
                }),
                None => slots.push(
                    f_choices[a]
                        .iter()
                        .map(|&t| MatchEntry::FDiag { f: f_off[a], t })
                        .collect(),
                ),
            }
        }
        for (b, choices) in g_choices.iter().enumerate() {
            if !inj.contains(&Some(b)) {
                slots.push(
                    choices
                        .iter()
                        .map(|&t| MatchEntry::GDiag { t, g: g_off[b] })
                        .collect(),
                );
            }
        }
        let mut idx = vec![0usize; slots.len()];
        loop {
            let mut entries = base.clone();
            entries.extend(slots.iter().zip(&idx).map(|(s, &k)| s[k]));
            out.push(Matching::new(entries));
            let mut pos = 0;
            while pos < slots.len() {
                idx[pos] += 1;
                if idx[pos] < slots[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == slots.len() {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn partial_injections(
    a: usize,
    current: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<Option<usize>>>,
) {
    if a == current.len() {
        out.push(current.clone());
        return;
    }
    current[a] = None;
    partial_injections(a + 1, current, used, out);
    for b in 0..used.len() {
        if !used[b] {
            used[b] = true;
            current[a] = Some(b);
            partial_injections(a + 1, current, used, out);
            used[b] = false;
        }
    }
    current[a] = None;
}

/// Objective value of one matching against the target.
pub fn score_matching(
    pd_f: &PersistenceDiagram,
    pd_g: &PersistenceDiagram,
    gamma: &Matching,
    target: &GridModule,
    objective: Objective,
    config: &SearchConfig,
) -> Result<Distance, DistanceError> {
    let product = build_product(pd_f, pd_g, gamma)?;
    let module = evaluate_hooks_in(&hooks_of_product(&product), target.bound(), target.field());
    match objective {
        Objective::ExactInterleaving => {
            let bound = target.bound();
            let max_eps = config.max_eps.unwrap_or(bound.x.max(bound.y));
            Ok(interleaving_exact_with(&module, target, max_eps, config.budget)?.distance())
        }
        Objective::MatchingDistance => {
            matching_distance_estimate(&module, target, &config.sampling)
        }
    }
}

fn report(scored: &[(Distance, &Matching)], objective: Objective) -> Option<SearchReport> {
    let best = scored
        .iter()
        .min_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(y.1)))?;
    Some(SearchReport {
        best_matching: best.1.clone(),
        best_value: best.0,
        objective,
        evaluations: scored.len(),
        tied_minimizers: scored.iter().filter(|s| s.0 == best.0).count(),
    })
}

fn run(
    pd_f: &PersistenceDiagram,
    pd_g: &PersistenceDiagram,
    target: &GridModule,
    candidates: &[Matching],
    objective: Objective,
    config: &SearchConfig,
) -> Result<SearchReport, DistanceError> {
    let results: Vec<Result<Distance, DistanceError>> = candidates
        .par_iter()
        .map(|m| score_matching(pd_f, pd_g, m, target, objective, config))
        .collect();
    let mut scored = Vec::with_capacity(candidates.len());
    let mut failure = None;
    for (m, r) in candidates.iter().zip(results) {
        match r {
            Ok(d) => scored.push((d, m)),
            Err(DistanceError::BudgetExceeded { what, .. }) => {
                failure.get_or_insert(what);
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(what) = failure {
        return Err(DistanceError::BudgetExceeded {
            what,
            partial: report(&scored, objective).map(Box::new),
        });
    }
    Ok(report(&scored, objective).expect("at least one candidate"))
}

/// Minimizes the configured objective over all candidate matchings.
///
/// Ties go to the smallest matching in the derived order.
pub fn gamma_bar_search(
    pd_f: &PersistenceDiagram,
    pd_g: &PersistenceDiagram,
    target: &GridModule,
    config: &SearchConfig,
) -> Result<SearchReport, DistanceError> {
    let candidates = enumerate_candidates(pd_f, pd_g, target, config)?;
    info!("scoring {} candidate matchings", candidates.len());
    match config.objective {
        ObjectiveChoice::Exact => run(
            pd_f,
            pd_g,
            target,
            &candidates,
            Objective::ExactInterleaving,
            config,
        ),
        ObjectiveChoice::Matching => run(
            pd_f,
            pd_g,
            target,
            &candidates,
            Objective::MatchingDistance,
            config,
        ),
        ObjectiveChoice::Auto => {
            match run(
                pd_f,
                pd_g,
                target,
                &candidates,
                Objective::ExactInterleaving,
                config,
            ) {
                Err(DistanceError::BudgetExceeded { what, .. }) => {
                    debug!("exact objective infeasible ({what}); using the estimate for every candidate");
                    run(
                        pd_f,
                        pd_g,
                        target,
                        &candidates,
                        Objective::MatchingDistance,
                        config,
                    )
                }
                other => other,
            }
        }
    }
}
