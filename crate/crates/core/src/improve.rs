//! Local improvement by boundary perturbation: each move shifts one
//! window-dependent boundary past a single customer, moving that customer
//! into the neighboring cluster. Moves are accepted when they strictly
//! improve the lexicographic schedule objective.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{capacity_feasible, tree_feasible};
use crate::model::{Instance, Objective, Seconds};
use crate::router::{self, RouterConfig, RoutingMode, RoutingRequest, RoutingStatus};
use crate::sweep::{fit_boundaries, AngularOrder, Clustering, ClusteringKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveDirection {
    /// Boundary angle drops: the last customer of the lower cluster moves up.
    Decrease,
    /// Boundary angle grows: the first customer of the upper cluster moves down.
    Increase,
}

/// One boundary shift. `boundary` separates clusters `boundary - 1` and
/// `boundary`; `customer` travels from `source` to `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveCandidate {
    pub boundary: usize,
    pub window: usize,
    pub direction: MoveDirection,
    pub customer: usize,
    pub source: usize,
    pub target: usize,
}

/// State needed to revert an applied move.
#[derive(Clone, Debug, PartialEq)]
pub struct MoveUndo {
    candidate: MoveCandidate,
    old_cut: usize,
    old_thetas: Vec<f64>,
}

impl Clustering {
    /// The move across `boundary` in window `window`, if a customer is there to cross it.
    pub fn candidate(
        &self,
        order: &AngularOrder,
        boundary: usize,
        window: usize,
        direction: MoveDirection,
    ) -> Option<MoveCandidate> {
        assert_eq!(self.kind, ClusteringKind::WindowAngles, "moves need window angles");
        let cuts = &self.cuts[window];
        let (lo, mid, hi) = (cuts[boundary - 1], cuts[boundary], cuts[boundary + 1]);
        let row = order.window(window);
        match direction {
            MoveDirection::Decrease if mid > lo => Some(MoveCandidate {
                boundary,
                window,
                direction,
                customer: row[mid - 1],
                source: boundary - 1,
                target: boundary,
            }),
            MoveDirection::Increase if hi > mid => Some(MoveCandidate {
                boundary,
                window,
                direction,
                customer: row[mid],
                source: boundary,
                target: boundary - 1,
            }),
            _ => None,
        }
    }

    pub fn apply_move(&mut self, order: &AngularOrder, candidate: &MoveCandidate) -> MoveUndo {
        let (b, j) = (candidate.boundary, candidate.window);
        let undo = MoveUndo {
            candidate: *candidate,
            old_cut: self.cuts[j][b],
            old_thetas: self.boundaries[j].clone(),
        };
        match candidate.direction {
            MoveDirection::Decrease => self.cuts[j][b] -= 1,
            MoveDirection::Increase => self.cuts[j][b] += 1,
        }
        self.boundaries[j][b] = f64::NAN;
        fit_boundaries(order.window(j), order.view(), &self.cuts[j], &mut self.boundaries[j]);

        let source = &mut self.clusters[candidate.source];
        let at = source.binary_search(&candidate.customer).expect("customer in source");
        source.remove(at);
        let target = &mut self.clusters[candidate.target];
        let at = target.binary_search(&candidate.customer).unwrap_err();
        target.insert(at, candidate.customer);
        undo
    }

    pub fn undo_move(&mut self, undo: MoveUndo) {
        let c = undo.candidate;
        self.cuts[c.window][c.boundary] = undo.old_cut;
        self.boundaries[c.window] = undo.old_thetas;
        let target = &mut self.clusters[c.target];
        let at = target.binary_search(&c.customer).expect("customer in target");
        target.remove(at);
        let source = &mut self.clusters[c.source];
        let at = source.binary_search(&c.customer).unwrap_err();
        source.insert(at, c.customer);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptedMove {
    pub candidate: MoveCandidate,
    pub before: Objective,
    pub after: Objective,
}

#[derive(Clone, Debug)]
pub struct ImproveOutcome {
    pub clustering: Clustering,
    pub trace: Vec<AcceptedMove>,
    /// Candidates dropped because the router ran out of budget.
    pub skipped: usize,
    pub scans: usize,
    pub initial: Objective,
    pub final_objective: Objective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Routed {
    Empty,
    Infeasible,
    Exhausted,
    Cost(Seconds, Seconds),
}

struct RouteCache<'a> {
    instance: &'a Instance,
    config: RouterConfig,
    memo: HashMap<Vec<usize>, Routed>,
}

impl RouteCache<'_> {
    fn route(&mut self, cluster: &[usize]) -> Result<Routed> {
        if cluster.is_empty() {
            return Ok(Routed::Empty);
        }
        if let Some(&r) = self.memo.get(cluster) {
            return Ok(r);
        }
        let routed = if !capacity_feasible(cluster, self.instance) || !tree_feasible(cluster, self.instance) {
            Routed::Infeasible
        } else {
            let result = router::solve(&RoutingRequest {
                instance: self.instance,
                customers: cluster,
                mode: RoutingMode::Optimize,
                budget: self.config.budget,
            })?;
            match result.status {
                RoutingStatus::Feasible => {
                    let (d, t) = result.objective.expect("optimize mode reports objective");
                    Routed::Cost(d, t)
                }
                RoutingStatus::Infeasible => Routed::Infeasible,
                RoutingStatus::BudgetExhausted => Routed::Exhausted,
            }
        };
        // exhaustion depends on the clock, so it is not remembered
        if routed != Routed::Exhausted {
            self.memo.insert(cluster.to_vec(), routed);
        }
        Ok(routed)
    }
}

fn contribution(r: Routed) -> Objective {
    match r {
        Routed::Cost(d, t) => Objective::new(1, d, t),
        _ => Objective::default(),
    }
}

fn combine(total: Objective, minus: [Routed; 2], plus: [Routed; 2]) -> Objective {
    let mut o = total;
    for r in minus {
        let c = contribution(r);
        o.vehicles -= c.vehicles;
        o.duration -= c.duration;
        o.travel -= c.travel;
    }
    for r in plus {
        let c = contribution(r);
        o.vehicles += c.vehicles;
        o.duration += c.duration;
        o.travel += c.travel;
    }
    o
}

/// Runs first-improvement local search to a local minimum.
///
/// Every cluster of `clustering` must be routable. Global-angle input is
/// lifted to window angles first. Fails with [`Error::IterationBound`] if
/// more than `n²` moves are accepted.
pub fn improve(
    clustering: &Clustering,
    order: &AngularOrder,
    instance: &Instance,
    config: RouterConfig,
) -> Result<ImproveOutcome> {
    let mut clustering = clustering.to_window_angles(order);
    let mut cache = RouteCache {
        instance,
        config,
        memo: HashMap::new(),
    };
    let mut routes = Vec::with_capacity(clustering.len());
    for cluster in clustering.clusters() {
        match cache.route(cluster)? {
            Routed::Infeasible => return Err(Error::Domain("improve needs a feasible clustering".into())),
            Routed::Exhausted => {
                return Err(Error::BudgetExhausted {
                    cluster_size: cluster.len(),
                })
            }
            r => routes.push(r),
        }
    }
    let initial = routes.iter().fold(Objective::default(), |acc, &r| combine(acc, [Routed::Empty; 2], [r, Routed::Empty]));

    let bound = instance.len().saturating_mul(instance.len()).max(1);
    let mut current = initial;
    let mut trace = Vec::new();
    let mut skipped = 0;
    let mut scans = 0;

    loop {
        scans += 1;
        let mut accepted_in_scan = false;
        let mut b = 1;
        while b < clustering.len() {
            for j in 0..order.windows() {
                for direction in [MoveDirection::Decrease, MoveDirection::Increase] {
                    if b >= clustering.len() {
                        break;
                    }
                    let Some(candidate) = clustering.candidate(order, b, j, direction) else {
                        continue;
                    };
                    let undo = clustering.apply_move(order, &candidate);
                    let new_source = cache.route(&clustering.clusters[candidate.source])?;
                    let new_target = cache.route(&clustering.clusters[candidate.target])?;
                    let verdict = match (new_source, new_target) {
                        (Routed::Exhausted, _) | (_, Routed::Exhausted) => None,
                        (Routed::Infeasible, _) | (_, Routed::Infeasible) => Some(None),
                        _ => Some(Some(combine(
                            current,
                            [routes[candidate.source], routes[candidate.target]],
                            [new_source, new_target],
                        ))),
                    };
                    match verdict {
                        Some(Some(after)) if after < current => {
                            log::info!(
                                "move customer {} from cluster {} to {}: {} -> {}",
                                instance.customer(candidate.customer).id,
                                candidate.source,
                                candidate.target,
                                current,
                                after
                            );
                            trace.push(AcceptedMove {
                                candidate,
                                before: current,
                                after,
                            });
                            if trace.len() > bound {
                                return Err(Error::IterationBound { bound });
                            }
                            current = after;
                            routes[candidate.source] = new_source;
                            routes[candidate.target] = new_target;
                            accepted_in_scan = true;
                            if new_source == Routed::Empty {
                                clustering.remove_cluster(candidate.source);
                                routes.remove(candidate.source);
                            }
                        }
                        other => {
                            if other.is_none() {
                                skipped += 1;
                            }
                            clustering.undo_move(undo);
                        }
                    }
                }
            }
            b += 1;
        }
        if !accepted_in_scan {
            break;
        }
    }

    Ok(ImproveOutcome {
        clustering,
        trace,
        skipped,
        scans,
        initial,
        final_objective: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Direction, PolarView};
    use crate::model::tests::{customer, unit_speed_instance, window};
    use crate::router::optimize_clusters;
    use crate::sweep::{sweep_variant_a, traditional_sweep};
    use crate::feasibility::FeasibilityChecker;

    fn fixed_order(instance: &Instance) -> AngularOrder {
        AngularOrder::from_view(instance, PolarView::with_zero_angle(instance, 0.0, Direction::Counterclockwise))
    }

    fn objective_of(instance: &Instance, clusters: &[Vec<usize>]) -> Objective {
        optimize_clusters(instance, clusters, RouterConfig::default()).unwrap().unwrap().1
    }

    /// Customers 0-2 form a group east of the depot with 2 in its middle;
    /// 3 is angularly past the group but sits next to it; 4 and 5 are far
    /// out along 80°.
    fn misplaced_instance() -> Instance {
        let cs = vec![
            customer(1, 2000.0, 100.0, 0, 1.0, 300),
            customer(2, 1000.0, 100.0, 0, 1.0, 300),
            customer(3, 1500.0, 400.0, 0, 1.0, 300),
            customer(4, 1200.0, 500.0, 0, 1.0, 300),
            customer(5, 700.0, 3000.0, 0, 1.0, 300),
            customer(6, 600.0, 3400.0, 0, 2.0, 300),
        ];
        unit_speed_instance(cs, vec![window(1, 0, 36000)], 5.0)
    }

    fn split_in_half(order: &AngularOrder) -> Clustering {
        Clustering::from_cut_rows(order, ClusteringKind::GlobalAngles, vec![vec![0, 3, 6]])
    }

    #[test]
    fn boundary_move_into_geographic_neighbor_is_accepted() {
        let inst = misplaced_instance();
        let order = fixed_order(&inst);
        let start = split_in_half(&order);
        assert_eq!(start.clusters(), &[vec![0, 1, 2], vec![3, 4, 5]]);
        let before = objective_of(&inst, start.clusters());
        let moved = objective_of(&inst, &[vec![0, 1, 2, 3], vec![4, 5]]);
        assert!(moved.travel < before.travel);

        let out = improve(&start, &order, &inst, RouterConfig::default()).unwrap();
        assert!(!out.trace.is_empty());
        assert!(out.final_objective < before);
        assert_eq!(out.initial, before);
        assert_eq!(out.trace[0].candidate.customer, 3);
        assert_eq!(out.trace[0].after, moved);
        assert_eq!(out.final_objective, objective_of(&inst, out.clustering.clusters()));
        assert_eq!(out.final_objective.vehicles, 2);
        assert!(out.final_objective.travel < before.travel);
    }

    #[test]
    fn local_minimum_is_fixed_point() {
        let inst = misplaced_instance();
        let order = fixed_order(&inst);
        let start = split_in_half(&order);
        let first = improve(&start, &order, &inst, RouterConfig::default()).unwrap();
        let second = improve(&first.clustering, &order, &inst, RouterConfig::default()).unwrap();
        assert!(second.trace.is_empty());
        assert_eq!(second.scans, 1);
        assert_eq!(second.clustering.fingerprint(), first.clustering.fingerprint());
        assert_eq!(second.final_objective, first.final_objective);
    }

    #[test]
    fn trace_strictly_decreases() {
        let inst = misplaced_instance();
        let order = fixed_order(&inst);
        let start = split_in_half(&order);
        let out = improve(&start, &order, &inst, RouterConfig::default()).unwrap();
        let mut prev = out.initial;
        for m in &out.trace {
            assert_eq!(m.before, prev);
            assert!(m.after < m.before);
            prev = m.after;
        }
        assert_eq!(prev, out.final_objective);
    }

    #[test]
    fn apply_then_undo_restores_clustering() {
        let inst = misplaced_instance();
        let order = fixed_order(&inst);
        let start = split_in_half(&order).to_window_angles(&order);
        for direction in [MoveDirection::Decrease, MoveDirection::Increase] {
            let mut c = start.clone();
            let candidate = c.candidate(&order, 1, 0, direction).unwrap();
            let undo = c.apply_move(&order, &candidate);
            assert_ne!(c.fingerprint(), start.fingerprint());
            assert_eq!(c.clusters_from_boundaries(&order, &inst).unwrap(), c.clusters());
            c.undo_move(undo);
            assert_eq!(c.fingerprint(), start.fingerprint());
            assert_eq!(c, start);
        }
    }

    #[test]
    fn moves_need_a_customer_to_cross() {
        let cs = vec![customer(1, 1000.0, 100.0, 0, 1.0, 300), customer(2, -1000.0, 100.0, 1, 1.0, 300)];
        let inst = unit_speed_instance(cs, vec![window(1, 0, 3600), window(2, 3600, 7200)], 1.0);
        let order = fixed_order(&inst);
        let c = traditional_sweep(&inst, &order).unwrap().to_window_angles(&order);
        assert_eq!(c.len(), 2);
        // window 2 holds no customer of cluster 0
        assert!(c.candidate(&order, 1, 1, MoveDirection::Decrease).is_none());
        assert!(c.candidate(&order, 1, 0, MoveDirection::Increase).is_none());
        assert!(c.candidate(&order, 1, 0, MoveDirection::Decrease).is_some());
    }

    #[test]
    fn emptied_cluster_is_removed() {
        // A lone customer next to a cluster with spare capacity: moving it
        // saves a vehicle.
        let cs = vec![
            customer(1, 1000.0, 100.0, 0, 1.0, 300),
            customer(2, 1000.0, 200.0, 0, 1.0, 300),
            customer(3, 1000.0, 300.0, 0, 1.0, 300),
        ];
        let inst = unit_speed_instance(cs, vec![window(1, 0, 36000)], 10.0);
        let order = fixed_order(&inst);
        let c = Clustering::from_cut_rows(&order, ClusteringKind::GlobalAngles, vec![vec![0, 2, 3]]);
        assert_eq!(c.clusters(), &[vec![0, 1], vec![2]]);
        let out = improve(&c, &order, &inst, RouterConfig::default()).unwrap();
        assert_eq!(out.final_objective.vehicles, 1);
        assert_eq!(out.clustering.len(), 1);
        assert_eq!(out.clustering.clusters_from_boundaries(&order, &inst).unwrap(), out.clustering.clusters());
    }

    #[test]
    fn infeasible_input_is_rejected() {
        let cs = vec![customer(1, 2000.0, 10.0, 0, 1.0, 300), customer(2, -2000.0, 20.0, 0, 1.0, 300)];
        let inst = unit_speed_instance(cs, vec![window(1, 0, 3600)], 10.0);
        let order = fixed_order(&inst);
        let c = traditional_sweep(&inst, &order).unwrap();
        assert!(matches!(improve(&c, &order, &inst, RouterConfig::default()), Err(Error::Domain(_))));
        let mut checker = FeasibilityChecker::new(&inst, RouterConfig::default());
        let a = sweep_variant_a(&order, &mut checker).unwrap();
        assert!(improve(&a, &order, &inst, RouterConfig::default()).is_ok());
    }
}
