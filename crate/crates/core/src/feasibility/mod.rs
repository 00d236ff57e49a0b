//! Layered cluster feasibility: capacity, then the arborescence bound per
//! window, then exact routing.

pub mod arborescence;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Instance, Seconds, Tour, Weight};
use crate::router::{self, RouterConfig, RoutingMode, RoutingRequest, RoutingStatus};

use self::arborescence::min_arborescence_any_root;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictLevel {
    CapacityInfeasible,
    TreeInfeasible,
    TimeInfeasible,
    /// The router ran out of time; nothing is known about time-feasibility.
    BudgetExhausted,
    Feasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub level: VerdictLevel,
    pub witness: Option<Tour>,
}

impl FeasibilityVerdict {
    pub fn is_feasible(&self) -> bool {
        self.level == VerdictLevel::Feasible
    }

    fn rejected(level: VerdictLevel) -> Self {
        FeasibilityVerdict { level, witness: None }
    }
}

pub fn capacity_feasible(cluster: &[usize], instance: &Instance) -> bool {
    cluster.iter().map(|&c| instance.customer(c).weight).sum::<Weight>() <= instance.capacity()
}

/// Minimum over roots of the minimum spanning arborescence on `nodes`, with
/// arc weight `t(u, v) + s(u)`.
pub fn min_arborescence_length(nodes: &[usize], instance: &Instance) -> Result<Seconds> {
    if nodes.is_empty() {
        return Err(Error::Domain("arborescence of an empty node set".into()));
    }
    let weights: Vec<Vec<Seconds>> = nodes
        .iter()
        .map(|&u| {
            nodes
                .iter()
                .map(|&v| {
                    if u == v {
                        0
                    } else {
                        instance.between(u, v) + instance.customer(u).service
                    }
                })
                .collect()
        })
        .collect();
    Ok(min_arborescence_any_root(&weights))
}

/// Necessary condition for time-feasibility: within every window, the
/// cluster's customers admit a spanning arborescence no longer than the window.
pub fn tree_feasible(cluster: &[usize], instance: &Instance) -> bool {
    let mut by_window: Vec<Vec<usize>> = vec![Vec::new(); instance.windows().len()];
    for &c in cluster {
        by_window[instance.customer(c).window].push(c);
    }
    by_window.iter().enumerate().all(|(w, members)| {
        members.len() <= 1
            || min_arborescence_length(members, instance).expect("nonempty")
                <= instance.windows()[w].len()
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    pub checks: usize,
    pub memo_hits: usize,
    pub capacity_rejects: usize,
    pub tree_rejects: usize,
    pub router_calls: usize,
    pub router_rejects: usize,
    pub budget_exhausted: usize,
}

/// Cluster checker with a per-run memo keyed by the sorted customer set.
///
/// Owned by one sweep run at a time; run several checkers to work in parallel.
pub struct FeasibilityChecker<'a> {
    instance: &'a Instance,
    config: RouterConfig,
    memo: HashMap<Vec<usize>, FeasibilityVerdict>,
    stats: CheckStats,
}

impl<'a> FeasibilityChecker<'a> {
    pub fn new(instance: &'a Instance, config: RouterConfig) -> Self {
        FeasibilityChecker {
            instance,
            config,
            memo: HashMap::new(),
            stats: CheckStats::default(),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn stats(&self) -> CheckStats {
        self.stats
    }

    pub fn check(&mut self, cluster: &[usize]) -> Result<FeasibilityVerdict> {
        self.stats.checks += 1;
        let mut key = cluster.to_vec();
        key.sort_unstable();
        if let Some(v) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(v.clone());
        }
        let verdict = self.evaluate(&key)?;
        self.memo.insert(key, verdict.clone());
        Ok(verdict)
    }

    /// [`FeasibilityChecker::check`] collapsed to a yes/no answer; budget
    /// exhaustion becomes an error instead of a silent rejection.
    pub fn admits(&mut self, cluster: &[usize]) -> Result<bool> {
        let verdict = self.check(cluster)?;
        if verdict.level == VerdictLevel::BudgetExhausted {
            return Err(Error::BudgetExhausted {
                cluster_size: cluster.len(),
            });
        }
        Ok(verdict.is_feasible())
    }

    fn evaluate(&mut self, cluster: &[usize]) -> Result<FeasibilityVerdict> {
        if !capacity_feasible(cluster, self.instance) {
            self.stats.capacity_rejects += 1;
            return Ok(FeasibilityVerdict::rejected(VerdictLevel::CapacityInfeasible));
        }
        if cluster.is_empty() {
            return Ok(FeasibilityVerdict {
                level: VerdictLevel::Feasible,
                witness: Some(Tour::default()),
            });
        }
        if !tree_feasible(cluster, self.instance) {
            self.stats.tree_rejects += 1;
            return Ok(FeasibilityVerdict::rejected(VerdictLevel::TreeInfeasible));
        }
        self.stats.router_calls += 1;
        let result = router::solve(&RoutingRequest {
            instance: self.instance,
            customers: cluster,
            mode: RoutingMode::Feasibility,
            budget: self.config.budget,
        })?;
        Ok(match result.status {
            RoutingStatus::Feasible => FeasibilityVerdict {
                level: VerdictLevel::Feasible,
                witness: result.tour,
            },
            RoutingStatus::Infeasible => {
                self.stats.router_rejects += 1;
                FeasibilityVerdict::rejected(VerdictLevel::TimeInfeasible)
            }
            RoutingStatus::BudgetExhausted => {
                self.stats.budget_exhausted += 1;
                FeasibilityVerdict::rejected(VerdictLevel::BudgetExhausted)
            }
        })
    }
}
