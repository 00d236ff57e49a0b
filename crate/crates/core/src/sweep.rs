//! Sweep clustering: the capacity-only sweep and three time-window aware
//! variants, plus the wrapper that tries both sweep directions.
//!
//! A clustering is stored as rows of cut positions into angularly sorted
//! customer lists, one row for global angles or one per window for
//! window-dependent angles. Cluster `i` of a row is the slice between cuts
//! `i` and `i + 1`. Each row also carries boundary angles consistent with its
//! cuts: a boundary always lies strictly after the last customer on its left
//! and at or before the first customer on its right.

use std::collections::hash_map::DefaultHasher;
use std::f64::consts::TAU;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{capacity_feasible, tree_feasible, FeasibilityChecker};
use crate::geometry::{Direction, PolarView};
use crate::model::{Instance, Objective, Schedule};
use crate::router::{optimize_clusters, RouterConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Capacity-only sweep.
    Traditional,
    /// Global angles, each cluster checked for full time-feasibility.
    A,
    /// Window-dependent angles filled window by window.
    B,
    /// Capacity/arborescence sectors refined window by window.
    C,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Traditional, Variant::A, Variant::B, Variant::C];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Traditional => "traditional",
            Variant::A => "a",
            Variant::B => "b",
            Variant::C => "c",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "traditional" | "t" => Ok(Variant::Traditional),
            "a" => Ok(Variant::A),
            "b" => Ok(Variant::B),
            "c" => Ok(Variant::C),
            other => Err(Error::Config(format!("unknown sweep variant {other:?}"))),
        }
    }
}

/// Customers in sweep order, globally and per window.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularOrder {
    view: PolarView,
    global: Vec<usize>,
    by_window: Vec<Vec<usize>>,
    rank: Vec<usize>,
}

impl AngularOrder {
    pub fn new(instance: &Instance, direction: Direction) -> Self {
        Self::from_view(instance, PolarView::new(instance, direction))
    }

    pub fn from_view(instance: &Instance, view: PolarView) -> Self {
        let global = view.sorted((0..instance.len()).collect());
        let mut rank = vec![0; instance.len()];
        for (r, &c) in global.iter().enumerate() {
            rank[c] = r;
        }
        let mut by_window = vec![Vec::new(); instance.windows().len()];
        for &c in &global {
            by_window[instance.customer(c).window].push(c);
        }
        AngularOrder {
            view,
            global,
            by_window,
            rank,
        }
    }

    pub fn view(&self) -> &PolarView {
        &self.view
    }

    pub fn direction(&self) -> Direction {
        self.view.direction()
    }

    pub fn global(&self) -> &[usize] {
        &self.global
    }

    pub fn window(&self, j: usize) -> &[usize] {
        &self.by_window[j]
    }

    pub fn windows(&self) -> usize {
        self.by_window.len()
    }

    fn row(&self, kind: ClusteringKind, r: usize) -> &[usize] {
        match kind {
            ClusteringKind::GlobalAngles => &self.global,
            ClusteringKind::WindowAngles => &self.by_window[r],
        }
    }

    /// Number of customers in `row` with angle strictly below `theta`.
    fn cut_at(&self, row: &[usize], theta: f64) -> usize {
        row.partition_point(|&c| self.view.angle(c) < theta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusteringKind {
    GlobalAngles,
    WindowAngles,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Clustering {
    pub(crate) kind: ClusteringKind,
    /// `boundaries[row][i]` for `i` in `0..=m`; first is 0, last is 2π.
    pub(crate) boundaries: Vec<Vec<f64>>,
    pub(crate) cuts: Vec<Vec<usize>>,
    /// Members of each cluster, ascending by customer index.
    pub(crate) clusters: Vec<Vec<usize>>,
}

impl Clustering {
    fn from_cuts(
        kind: ClusteringKind,
        order: &AngularOrder,
        cuts: Vec<Vec<usize>>,
        prior: Option<Vec<Vec<f64>>>,
    ) -> Self {
        let m = cuts[0].len() - 1;
        let mut boundaries = prior.unwrap_or_else(|| vec![vec![f64::NAN; m + 1]; cuts.len()]);
        for (r, row_cuts) in cuts.iter().enumerate() {
            fit_boundaries(order.row(kind, r), order.view(), row_cuts, &mut boundaries[r]);
        }
        let mut clustering = Clustering {
            kind,
            boundaries,
            cuts,
            clusters: Vec::new(),
        };
        clustering.clusters = (0..m).map(|i| clustering.collect_members(order, i)).collect();
        clustering
    }

    /// Clustering with the given cut rows (one row for global angles, one
    /// per window otherwise) and midpoint boundaries.
    pub fn from_cut_rows(order: &AngularOrder, kind: ClusteringKind, cuts: Vec<Vec<usize>>) -> Self {
        Clustering::from_cuts(kind, order, cuts, None)
    }

    fn collect_members(&self, order: &AngularOrder, i: usize) -> Vec<usize> {
        let mut members: Vec<usize> = self
            .cuts
            .iter()
            .enumerate()
            .flat_map(|(r, cuts)| order.row(self.kind, r)[cuts[i]..cuts[i + 1]].iter().copied())
            .collect();
        members.sort_unstable();
        members
    }

    pub fn kind(&self) -> ClusteringKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn boundaries(&self) -> &[Vec<f64>] {
        &self.boundaries
    }

    pub fn cuts(&self) -> &[Vec<usize>] {
        &self.cuts
    }

    /// Cluster membership rebuilt from boundary angles alone via sector queries.
    pub fn clusters_from_boundaries(&self, order: &AngularOrder, instance: &Instance) -> Result<Vec<Vec<usize>>> {
        let view = order.view();
        (0..self.len())
            .map(|i| {
                let mut members = Vec::new();
                for (r, row) in self.boundaries.iter().enumerate() {
                    let part = match self.kind {
                        ClusteringKind::GlobalAngles => view.sector(row[i], row[i + 1])?,
                        ClusteringKind::WindowAngles => view.sector_in_window(instance, r, row[i], row[i + 1])?,
                    };
                    members.extend(part);
                }
                members.sort_unstable();
                Ok(members)
            })
            .collect()
    }

    /// Window-dependent copy with every window boundary equal to the global one.
    pub fn to_window_angles(&self, order: &AngularOrder) -> Clustering {
        if self.kind == ClusteringKind::WindowAngles {
            return self.clone();
        }
        let global_cuts = &self.cuts[0];
        let cuts: Vec<Vec<usize>> = (0..order.windows())
            .map(|j| {
                let row = order.window(j);
                global_cuts
                    .iter()
                    .map(|&g| row.partition_point(|&c| order.rank[c] < g))
                    .collect()
            })
            .collect();
        let prior = vec![self.boundaries[0].clone(); order.windows()];
        Clustering::from_cuts(ClusteringKind::WindowAngles, order, cuts, Some(prior))
    }

    /// Stable hash of cuts, boundary bits and membership.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.kind.hash(&mut h);
        self.cuts.hash(&mut h);
        for row in &self.boundaries {
            for b in row {
                b.to_bits().hash(&mut h);
            }
        }
        self.clusters.hash(&mut h);
        h.finish()
    }

    /// Drops cluster `i`, which must be empty.
    pub(crate) fn remove_cluster(&mut self, i: usize) {
        assert!(self.clusters[i].is_empty(), "only empty clusters can be removed");
        let m = self.len();
        let col = if i + 1 < m { i + 1 } else { i };
        for r in 0..self.cuts.len() {
            self.cuts[r].remove(col);
            self.boundaries[r].remove(col);
        }
        self.clusters.remove(i);
    }
}

/// Sets boundary angles consistent with `cuts`, keeping prior angles that
/// are still consistent and using gap midpoints otherwise.
pub(crate) fn fit_boundaries(row: &[usize], view: &PolarView, cuts: &[usize], thetas: &mut Vec<f64>) {
    let m = cuts.len() - 1;
    thetas.resize(m + 1, f64::NAN);
    thetas[0] = 0.0;
    if m == 0 {
        return;
    }
    thetas[m] = TAU;
    for i in 1..m {
        let c = cuts[i];
        let lo = if c > 0 { view.angle(row[c - 1]) } else { 0.0 };
        let hi = if c < row.len() { view.angle(row[c]) } else { TAU };
        let old = thetas[i];
        let valid = old.is_finite() && (old > lo || (c == 0 && old >= lo)) && old <= hi;
        let theta = if valid { old } else { lo + (hi - lo) / 2.0 };
        thetas[i] = theta.max(thetas[i - 1]);
    }
}

/// One angular pass: grow the current sector while `admit` accepts it.
fn global_sweep(
    instance: &Instance,
    order: &AngularOrder,
    mut admit: impl FnMut(&[usize]) -> Result<bool>,
) -> Result<Clustering> {
    let mut cuts = vec![0];
    let mut current: Vec<usize> = Vec::new();
    for (pos, &a) in order.global().iter().enumerate() {
        current.push(a);
        if admit(&current)? {
            continue;
        }
        current.pop();
        if current.is_empty() {
            return Err(unservable(instance, a));
        }
        cuts.push(pos);
        current.clear();
        current.push(a);
        if !admit(&current)? {
            return Err(unservable(instance, a));
        }
    }
    if !order.global().is_empty() {
        cuts.push(order.global().len());
    }
    Ok(Clustering::from_cuts(ClusteringKind::GlobalAngles, order, vec![cuts], None))
}

fn unservable(instance: &Instance, idx: usize) -> Error {
    Error::InfeasibleCustomer {
        id: instance.customer(idx).id,
        reason: "no feasible single-customer tour".into(),
    }
}

pub fn traditional_sweep(instance: &Instance, order: &AngularOrder) -> Result<Clustering> {
    global_sweep(instance, order, |c| Ok(capacity_feasible(c, instance)))
}

pub fn sweep_variant_a(order: &AngularOrder, checker: &mut FeasibilityChecker<'_>) -> Result<Clustering> {
    let instance = checker.instance();
    global_sweep(instance, order, |c| checker.admits(c))
}

pub fn sweep_variant_b(order: &AngularOrder, checker: &mut FeasibilityChecker<'_>) -> Result<Clustering> {
    let instance = checker.instance();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(order.windows());

    for j in 0..order.windows() {
        let row = order.window(j);
        let mut cuts = vec![0];
        let mut i = 0;
        let mut pos = 0;
        while pos < row.len() {
            if i == clusters.len() {
                clusters.push(Vec::new());
            }
            let a = row[pos];
            clusters[i].push(a);
            if checker.admits(&clusters[i])? {
                pos += 1;
                continue;
            }
            clusters[i].pop();
            if clusters[i].is_empty() {
                return Err(unservable(instance, a));
            }
            i += 1;
            cuts.push(pos);
        }
        rows.push(cuts);
    }

    let m = clusters.len();
    for (j, cuts) in rows.iter_mut().enumerate() {
        cuts.resize(m + 1, order.window(j).len());
        cuts[0] = 0;
    }
    Ok(Clustering::from_cuts(ClusteringKind::WindowAngles, order, rows, None))
}

/// Working state of the window-by-window phase of variant C.
struct WindowPass<'o> {
    row: &'o [usize],
    base: Vec<Vec<usize>>,
    cuts: Vec<usize>,
}

impl WindowPass<'_> {
    fn members(&self, i: usize) -> Vec<usize> {
        let mut m = self.base[i].clone();
        m.extend_from_slice(&self.row[self.cuts[i]..self.cuts[i + 1]]);
        m
    }

    fn admits(&self, checker: &mut FeasibilityChecker<'_>, i: usize) -> Result<bool> {
        checker.admits(&self.members(i))
    }

    /// Moves leading window customers of cluster `i` into earlier clusters,
    /// possibly passing one customer down a chain of clusters, until `i`
    /// becomes feasible. Leaves the cuts untouched on failure.
    fn shift_backward(&mut self, checker: &mut FeasibilityChecker<'_>, i: usize) -> Result<bool> {
        if i == 0 {
            return Ok(false);
        }
        let saved = self.cuts.clone();
        loop {
            if self.cuts[i] == self.cuts[i + 1] {
                self.cuts = saved;
                return Ok(false);
            }
            let mut moved = false;
            for k in (0..i).rev() {
                for c in k + 1..=i {
                    self.cuts[c] += 1;
                }
                let mut ok = true;
                for c in k..i {
                    if !self.admits(checker, c)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    moved = true;
                    break;
                }
                for c in k + 1..=i {
                    self.cuts[c] -= 1;
                }
            }
            if !moved {
                self.cuts = saved;
                return Ok(false);
            }
            if self.admits(checker, i)? {
                return Ok(true);
            }
        }
    }
}

pub fn sweep_variant_c(order: &AngularOrder, checker: &mut FeasibilityChecker<'_>) -> Result<Clustering> {
    let instance = checker.instance();
    if instance.is_empty() {
        return global_sweep(instance, order, |_| Ok(true)).map(|c| c.to_window_angles(order));
    }
    let sectors = global_sweep(instance, order, |c| {
        Ok(capacity_feasible(c, instance) && tree_feasible(c, instance))
    })?;

    let mut thetas = sectors.boundaries[0].clone();
    let mut base: Vec<Vec<usize>> = vec![Vec::new(); sectors.len()];
    let mut row_cuts: Vec<Vec<usize>> = Vec::with_capacity(order.windows());
    let mut row_thetas: Vec<Vec<f64>> = Vec::with_capacity(order.windows());

    for j in 0..order.windows() {
        let row = order.window(j);
        let mut cuts: Vec<usize> = thetas.iter().map(|&t| order.cut_at(row, t)).collect();
        cuts[0] = 0;
        *cuts.last_mut().unwrap() = row.len();
        let mut pass = WindowPass {
            row,
            base: std::mem::take(&mut base),
            cuts,
        };

        let mut i = 0;
        while i + 1 < pass.cuts.len() {
            if !pass.admits(checker, i)? && !pass.shift_backward(checker, i)? {
                // defer trailing window customers to the next cluster
                loop {
                    if pass.cuts[i + 1] == pass.cuts[i] {
                        return Err(Error::Domain(format!(
                            "cluster {i} is infeasible without window {} customers",
                            instance.windows()[j].id
                        )));
                    }
                    if i + 2 == pass.cuts.len() {
                        pass.cuts.push(row.len());
                        pass.base.push(Vec::new());
                        thetas.push(TAU);
                        for (r, cuts) in row_cuts.iter_mut().enumerate() {
                            cuts.push(order.window(r).len());
                            row_thetas[r].push(TAU);
                        }
                    }
                    pass.cuts[i + 1] -= 1;
                    if pass.admits(checker, i)? {
                        break;
                    }
                }
            }
            i += 1;
        }

        let mut fitted = thetas.clone();
        fit_boundaries(row, order.view(), &pass.cuts, &mut fitted);
        for (i, members) in pass.base.iter_mut().enumerate() {
            members.extend_from_slice(&row[pass.cuts[i]..pass.cuts[i + 1]]);
        }
        base = pass.base;
        row_cuts.push(pass.cuts);
        row_thetas.push(fitted.clone());
        thetas = fitted;
    }

    let mut clustering = Clustering::from_cuts(ClusteringKind::WindowAngles, order, row_cuts, Some(row_thetas));
    while let Some(empty) = clustering.clusters.iter().position(|c| c.is_empty()) {
        clustering.remove_cluster(empty);
    }
    Ok(clustering)
}

pub fn run_variant(
    variant: Variant,
    order: &AngularOrder,
    checker: &mut FeasibilityChecker<'_>,
) -> Result<Clustering> {
    match variant {
        Variant::Traditional => traditional_sweep(checker.instance(), order),
        Variant::A => sweep_variant_a(order, checker),
        Variant::B => sweep_variant_b(order, checker),
        Variant::C => sweep_variant_c(order, checker),
    }
}

/// A clustering together with its sweep order and, when every cluster is
/// routable, the optimal schedule for it.
#[derive(Clone, Debug)]
pub struct DirectedClustering {
    pub order: AngularOrder,
    pub clustering: Clustering,
    pub routed: Option<(Schedule, Objective)>,
}

impl DirectedClustering {
    pub fn direction(&self) -> Direction {
        self.order.direction()
    }

    pub fn objective(&self) -> Option<Objective> {
        self.routed.as_ref().map(|(_, o)| *o)
    }
}

/// Runs `variant` in one direction and routes the result.
pub fn sweep(instance: &Instance, variant: Variant, direction: Direction, config: RouterConfig) -> Result<DirectedClustering> {
    let order = AngularOrder::new(instance, direction);
    let mut checker = FeasibilityChecker::new(instance, config);
    let clustering = run_variant(variant, &order, &mut checker)?;
    log::debug!(
        "variant {} {}: {} clusters, {:?}",
        variant.name(),
        direction.short_name(),
        clustering.len(),
        checker.stats()
    );
    let routed = optimize_clusters(instance, clustering.clusters(), config)?;
    Ok(DirectedClustering {
        order,
        clustering,
        routed,
    })
}

/// Runs both directions and keeps the lexicographically better schedule;
/// ties and double failures to route go to counterclockwise.
pub fn best_of_directions(instance: &Instance, variant: Variant, config: RouterConfig) -> Result<DirectedClustering> {
    let (ccw, cw) = rayon::join(
        || sweep(instance, variant, Direction::Counterclockwise, config),
        || sweep(instance, variant, Direction::Clockwise, config),
    );
    match (ccw, cw) {
        (Ok(ccw), Ok(cw)) => Ok(match (ccw.objective(), cw.objective()) {
            (Some(a), Some(b)) if b < a => cw,
            (None, Some(_)) => cw,
            _ => ccw,
        }),
        (Ok(ccw), Err(e)) => {
            log::warn!("clockwise sweep failed: {e}");
            Ok(ccw)
        }
        (Err(e), Ok(cw)) => {
            log::warn!("counterclockwise sweep failed: {e}");
            Ok(cw)
        }
        (Err(e), Err(_)) => Err(e),
    }
}
