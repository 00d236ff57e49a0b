//! Exact single-vehicle routing for structured time windows.
//!
//! Windows never overlap and service times are positive, so every feasible
//! tour visits customers window by window. The search space is therefore the
//! product of per-window orderings, which we explore with a Held-Karp style
//! dynamic program per window, chained across windows.
//!
//! For a fixed visit sequence the earliest arrival at the last customer, as a
//! function of the start time `x`, has the form `max(x + A, B)`. Delaying the
//! start never hurts, so the minimum duration is reached at the latest feasible
//! start. In the dynamic program a partial path ending at customer `l` is
//! summarised by the least "duration so far" needed to reach `l` at time `τ`:
//!
//! ```text
//! g(τ) = max(p, τ + q)    for τ in [earliest, end(l)]
//! ```
//!
//! together with its accumulated travel time. Extending to the next customer
//! keeps that shape, so labels stay four integers and dominance is a pointwise
//! comparison of two convex piecewise-linear functions.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::feasibility::arborescence::min_arborescence_any_root;
use crate::model::{Instance, Objective, Schedule, Seconds, Tour};

/// Windows with more customers than this are searched by branch and bound.
pub const MAX_DP_WINDOW: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoutingMode {
    Feasibility,
    Optimize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RouterConfig {
    /// Wall-clock limit per solve.
    pub budget: Option<Duration>,
}

#[derive(Clone, Copy, Debug)]
pub struct RoutingRequest<'a> {
    pub instance: &'a Instance,
    pub customers: &'a [usize],
    pub mode: RoutingMode,
    pub budget: Option<Duration>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoutingStatus {
    Feasible,
    Infeasible,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingResult {
    pub status: RoutingStatus,
    pub tour: Option<Tour>,
    /// `(duration, travel)`, present for feasible results in optimize mode.
    pub objective: Option<(Seconds, Seconds)>,
}

impl RoutingResult {
    fn infeasible() -> Self {
        RoutingResult {
            status: RoutingStatus::Infeasible,
            tour: None,
            objective: None,
        }
    }

    fn exhausted() -> Self {
        RoutingResult {
            status: RoutingStatus::BudgetExhausted,
            tour: None,
            objective: None,
        }
    }
}

/// Timing of a fixed visit sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTiming {
    pub duration: Seconds,
    pub travel: Seconds,
    /// Latest feasible start, then earliest arrivals.
    pub arrivals: Vec<Seconds>,
}

/// Minimum-duration timing of `sequence`, or `None` if no feasible arrival
/// vector exists (including sequences that go back in window order).
pub fn min_duration_for_sequence(sequence: &[usize], instance: &Instance) -> Option<SequenceTiming> {
    let k = sequence.len();
    if k == 0 {
        return None;
    }
    if sequence
        .windows(2)
        .any(|w| instance.customer(w[1]).window < instance.customer(w[0]).window)
    {
        return None;
    }
    let start = |i: usize| instance.window_of(sequence[i]).start;
    let end = |i: usize| instance.window_of(sequence[i]).end;
    // minimal gap between consecutive arrivals
    let gaps: Vec<Seconds> = sequence
        .windows(2)
        .map(|w| instance.customer(w[0]).service + instance.between(w[0], w[1]))
        .collect();

    let mut earliest = start(0);
    for i in 1..k {
        earliest = start(i).max(earliest + gaps[i - 1]);
        if earliest > end(i) {
            return None;
        }
    }
    let mut latest = end(k - 1);
    for i in (0..k - 1).rev() {
        latest = end(i).min(latest - gaps[i]);
    }
    if latest < start(0) {
        return None;
    }

    let mut arrivals = Vec::with_capacity(k);
    arrivals.push(latest);
    for i in 1..k {
        arrivals.push(start(i).max(arrivals[i - 1] + gaps[i - 1]));
    }
    let (first, last) = (sequence[0], sequence[k - 1]);
    let out = instance.from_depot(first);
    let back = instance.to_depot(last);
    let legs: Seconds = sequence.windows(2).map(|w| instance.between(w[0], w[1])).sum();
    Some(SequenceTiming {
        duration: out + arrivals[k - 1] - arrivals[0] + instance.customer(last).service + back,
        travel: out + legs + back,
        arrivals,
    })
}

pub fn solve(request: &RoutingRequest<'_>) -> Result<RoutingResult> {
    let instance = request.instance;
    if request.customers.is_empty() {
        return Err(Error::Domain("routing request has no customers".into()));
    }
    let mut ids = request.customers.to_vec();
    ids.sort_unstable();
    if let Some(&bad) = ids.iter().find(|&&c| c >= instance.len()) {
        return Err(Error::Domain(format!("unknown customer index {bad}")));
    }
    if ids.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("routing request repeats a customer".into()));
    }

    let local = Local::new(instance, ids);
    let mut deadline = Deadline::new(request.budget);
    let searched = if local.groups.iter().any(|g| g.len() > MAX_DP_WINDOW) {
        branch_and_bound(&local, request.mode, &mut deadline)
    } else {
        match request.mode {
            RoutingMode::Feasibility => earliest_arrival_dp(&local, &mut deadline),
            RoutingMode::Optimize => label_dp(&local, &mut deadline),
        }
    };
    let sequence = match searched {
        Search::Exhausted => return Ok(RoutingResult::exhausted()),
        Search::Done(None) => return Ok(RoutingResult::infeasible()),
        Search::Done(Some(seq)) => seq,
    };
    let sequence: Vec<usize> = sequence.into_iter().map(|i| local.ids[i]).collect();
    let timing = min_duration_for_sequence(&sequence, instance)
        .expect("search returned a sequence the timing kernel rejects");
    let objective = match request.mode {
        RoutingMode::Optimize => Some((timing.duration, timing.travel)),
        RoutingMode::Feasibility => None,
    };
    Ok(RoutingResult {
        status: RoutingStatus::Feasible,
        tour: Some(Tour {
            customers: sequence,
            arrivals: timing.arrivals,
        }),
        objective,
    })
}

/// Optimal tours for every nonempty cluster. `Ok(None)` when some cluster has
/// no time-feasible tour; budget exhaustion is an error.
pub fn optimize_clusters(
    instance: &Instance,
    clusters: &[Vec<usize>],
    config: RouterConfig,
) -> Result<Option<(Schedule, Objective)>> {
    let mut schedule = Schedule::default();
    let mut objective = Objective::default();
    for cluster in clusters.iter().filter(|c| !c.is_empty()) {
        let result = solve(&RoutingRequest {
            instance,
            customers: cluster,
            mode: RoutingMode::Optimize,
            budget: config.budget,
        })?;
        match result.status {
            RoutingStatus::Feasible => {
                let (duration, travel) = result.objective.expect("optimize mode reports objective");
                objective.vehicles += 1;
                objective.duration += duration;
                objective.travel += travel;
                schedule.tours.push(result.tour.expect("feasible result carries a tour"));
            }
            RoutingStatus::Infeasible => return Ok(None),
            RoutingStatus::BudgetExhausted => {
                return Err(Error::BudgetExhausted {
                    cluster_size: cluster.len(),
                })
            }
        }
    }
    Ok(Some((schedule, objective)))
}

enum Search<T> {
    Done(T),
    Exhausted,
}

struct Deadline {
    until: Option<Instant>,
    ticks: u32,
}

impl Deadline {
    fn new(budget: Option<Duration>) -> Self {
        Deadline {
            until: budget.map(|b| Instant::now() + b),
            ticks: 0,
        }
    }

    fn expired(&mut self) -> bool {
        let Some(until) = self.until else {
            return false;
        };
        self.ticks = self.ticks.wrapping_add(1);
        self.ticks.is_multiple_of(256) && Instant::now() >= until
    }
}

/// The request's customers with dense local indices and a local travel matrix.
struct Local {
    ids: Vec<usize>,
    start: Vec<Seconds>,
    end: Vec<Seconds>,
    service: Vec<Seconds>,
    out: Vec<Seconds>,
    back: Vec<Seconds>,
    travel: Vec<Vec<Seconds>>,
    /// Local indices per nonempty window, in window order.
    groups: Vec<Vec<usize>>,
}

impl Local {
    fn new(instance: &Instance, ids: Vec<usize>) -> Self {
        let window = |i: usize| instance.window_of(ids[i]);
        let k = ids.len();
        let travel = (0..k)
            .map(|a| (0..k).map(|b| if a == b { 0 } else { instance.between(ids[a], ids[b]) }).collect())
            .collect();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| (instance.customer(ids[i]).window, i));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut current = usize::MAX;
        for i in order {
            let w = instance.customer(ids[i]).window;
            if w != current {
                groups.push(Vec::new());
                current = w;
            }
            groups.last_mut().unwrap().push(i);
        }
        Local {
            start: (0..k).map(|i| window(i).start).collect(),
            end: (0..k).map(|i| window(i).end).collect(),
            service: ids.iter().map(|&c| instance.customer(c).service).collect(),
            out: ids.iter().map(|&c| instance.from_depot(c)).collect(),
            back: ids.iter().map(|&c| instance.to_depot(c)).collect(),
            travel,
            groups,
            ids,
        }
    }

    fn gap(&self, a: usize, b: usize) -> Seconds {
        self.service[a] + self.travel[a][b]
    }
}

const NO_PRED: usize = usize::MAX;

struct FeasibilityLayer {
    best: Vec<Seconds>,
    pred: Vec<usize>,
    /// For each entry position, the last customer of the previous window.
    entry_from: Vec<usize>,
}

/// Earliest-arrival Held-Karp: for feasibility only the earliest arrival at
/// the last customer matters.
fn earliest_arrival_dp(local: &Local, deadline: &mut Deadline) -> Search<Option<Vec<usize>>> {
    let mut layers: Vec<FeasibilityLayer> = Vec::with_capacity(local.groups.len());
    for (k, group) in local.groups.iter().enumerate() {
        let g = group.len();
        let full = (1usize << g) - 1;
        let mut best = vec![Seconds::MAX; (full + 1) * g];
        let mut pred = vec![NO_PRED; (full + 1) * g];
        let mut entry_from = vec![NO_PRED; g];

        for (p, &a) in group.iter().enumerate() {
            let entry = if k == 0 {
                Some((local.start[a], NO_PRED))
            } else {
                let prev = &layers[k - 1];
                let prev_group = &local.groups[k - 1];
                let pg = prev_group.len();
                let prev_full = (1usize << pg) - 1;
                (0..pg)
                    .filter_map(|lp| {
                        let t = prev.best[prev_full * pg + lp];
                        (t != Seconds::MAX).then(|| {
                            let l = prev_group[lp];
                            (local.start[a].max(t + local.gap(l, a)), l)
                        })
                    })
                    .min_by_key(|&(t, _)| t)
            };
            if let Some((t, from)) = entry {
                if t <= local.end[a] {
                    best[(1 << p) * g + p] = t;
                    entry_from[p] = from;
                }
            }
        }

        for mask in 1..=full {
            if deadline.expired() {
                return Search::Exhausted;
            }
            for p in 0..g {
                let t = best[mask * g + p];
                if t == Seconds::MAX {
                    continue;
                }
                let a = group[p];
                for (r, &b) in group.iter().enumerate() {
                    if mask & (1 << r) != 0 {
                        continue;
                    }
                    let arrive = local.start[b].max(t + local.gap(a, b));
                    let slot = (mask | (1 << r)) * g + r;
                    if arrive <= local.end[b] && arrive < best[slot] {
                        best[slot] = arrive;
                        pred[slot] = p;
                    }
                }
            }
        }

        if best[full * g..].iter().all(|&t| t == Seconds::MAX) {
            return Search::Done(None);
        }
        layers.push(FeasibilityLayer {
            best,
            pred,
            entry_from,
        });
    }

    // walk back from the best final state
    let mut sequence = Vec::with_capacity(local.ids.len());
    let last = local.groups.len() - 1;
    let g = local.groups[last].len();
    let full = (1usize << g) - 1;
    let mut p = (0..g)
        .min_by_key(|&p| layers[last].best[full * g + p])
        .expect("nonempty group");
    for k in (0..local.groups.len()).rev() {
        let group = &local.groups[k];
        let g = group.len();
        let mut mask = (1usize << g) - 1;
        loop {
            sequence.push(group[p]);
            let prev = layers[k].pred[mask * g + p];
            if prev == NO_PRED {
                if k > 0 {
                    let from = layers[k].entry_from[p];
                    p = local.groups[k - 1].iter().position(|&c| c == from).unwrap();
                }
                break;
            }
            mask ^= 1 << p;
            p = prev;
        }
    }
    sequence.reverse();
    Search::Done(Some(sequence))
}

/// Partial path summary; see the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Label {
    p: Seconds,
    q: Seconds,
    earliest: Seconds,
    travel: Seconds,
    node: u32,
}

impl Label {
    fn value(&self, tau: Seconds) -> Seconds {
        self.p.max(tau + self.q)
    }

    /// `self` is at least as good as `other` for every completion, in both
    /// duration and travel. Both labels end at the same customer.
    fn dominates(&self, other: &Label, end: Seconds) -> bool {
        if self.earliest > other.earliest || self.travel > other.travel {
            return false;
        }
        let kink = (other.p - other.q).clamp(other.earliest, end);
        [other.earliest, kink, end]
            .iter()
            .all(|&t| self.value(t) <= other.value(t))
    }
}

/// Arena of path nodes: `(local customer, predecessor node)`.
struct Paths(Vec<(usize, u32)>);

impl Paths {
    const ROOT: u32 = u32::MAX;

    fn push(&mut self, customer: usize, prev: u32) -> u32 {
        self.0.push((customer, prev));
        (self.0.len() - 1) as u32
    }

    fn last(&self, node: u32) -> usize {
        self.0[node as usize].0
    }

    fn sequence(&self, mut node: u32) -> Vec<usize> {
        let mut seq = Vec::new();
        while node != Self::ROOT {
            let (c, prev) = self.0[node as usize];
            seq.push(c);
            node = prev;
        }
        seq.reverse();
        seq
    }
}

fn start_label(local: &Local, a: usize, paths: &mut Paths) -> Label {
    let p = local.out[a];
    Label {
        p,
        q: p - local.end[a],
        earliest: local.start[a],
        travel: p,
        node: paths.push(a, Paths::ROOT),
    }
}

fn extend(local: &Local, label: &Label, from: usize, to: usize, paths: &mut Paths) -> Option<Label> {
    let gap = local.gap(from, to);
    let earliest = local.start[to].max(label.earliest + gap);
    if earliest > local.end[to] {
        return None;
    }
    let p = label.p + gap;
    Some(Label {
        p,
        q: label.q.max(p - local.end[to]),
        earliest,
        travel: label.travel + local.travel[from][to],
        node: paths.push(to, label.node),
    })
}

/// `(duration, travel)` of a complete tour ending with `label` at `last`.
fn close(local: &Local, label: &Label, last: usize) -> (Seconds, Seconds) {
    (
        label.value(label.earliest) + local.service[last] + local.back[last],
        label.travel + local.back[last],
    )
}

fn insert(bucket: &mut Vec<Label>, label: Label, end: Seconds) {
    if bucket.iter().any(|l| l.dominates(&label, end)) {
        return;
    }
    bucket.retain(|l| !label.dominates(l, end));
    bucket.push(label);
}

/// Held-Karp over Pareto labels, exact for `(duration, travel)` lexicographically.
fn label_dp(local: &Local, deadline: &mut Deadline) -> Search<Option<Vec<usize>>> {
    let mut paths = Paths(Vec::new());
    let mut finals: Vec<Label> = Vec::new();

    for (k, group) in local.groups.iter().enumerate() {
        let g = group.len();
        let full = (1usize << g) - 1;
        let mut buckets: Vec<Vec<Label>> = vec![Vec::new(); (full + 1) * g];

        for (p, &a) in group.iter().enumerate() {
            let slot = (1 << p) * g + p;
            if k == 0 {
                let label = start_label(local, a, &mut paths);
                insert(&mut buckets[slot], label, local.end[a]);
            } else {
                for prev in &finals {
                    let from = paths.last(prev.node);
                    if let Some(label) = extend(local, prev, from, a, &mut paths) {
                        insert(&mut buckets[slot], label, local.end[a]);
                    }
                }
            }
        }

        for mask in 1..full {
            for p in 0..g {
                if deadline.expired() {
                    return Search::Exhausted;
                }
                let slot = mask * g + p;
                if buckets[slot].is_empty() {
                    continue;
                }
                let labels = std::mem::take(&mut buckets[slot]);
                let a = group[p];
                for (r, &b) in group.iter().enumerate() {
                    if mask & (1 << r) != 0 {
                        continue;
                    }
                    let target = (mask | (1 << r)) * g + r;
                    for label in &labels {
                        if let Some(next) = extend(local, label, a, b, &mut paths) {
                            insert(&mut buckets[target], next, local.end[b]);
                        }
                    }
                }
                buckets[slot] = labels;
            }
        }

        finals = buckets.drain(full * g..).flatten().collect();
        if finals.is_empty() {
            return Search::Done(None);
        }
    }

    let best = finals
        .iter()
        .min_by_key(|l| close(local, l, paths.last(l.node)))
        .expect("nonempty finals");
    Search::Done(Some(paths.sequence(best.node)))
}

/// Depth-first branch and bound over window-respecting sequences, for
/// windows too large for the subset dynamic program.
fn branch_and_bound(local: &Local, mode: RoutingMode, deadline: &mut Deadline) -> Search<Option<Vec<usize>>> {
    struct Bnb<'a> {
        local: &'a Local,
        mode: RoutingMode,
        paths: Paths,
        visited: Vec<bool>,
        remaining_service: Seconds,
        best: Option<((Seconds, Seconds), u32)>,
        exhausted: bool,
    }

    impl Bnb<'_> {
        /// Returns true when the search can stop.
        fn descend(&mut self, k: usize, label: Label, last: usize, deadline: &mut Deadline) -> bool {
            if deadline.expired() {
                self.exhausted = true;
                return true;
            }
            let local = self.local;
            let group = &local.groups[k];
            let open: Vec<usize> = group.iter().copied().filter(|&c| !self.visited[c]).collect();

            if open.is_empty() && k + 1 == local.groups.len() {
                let value = close(local, &label, last);
                if self.best.is_none_or(|(b, _)| value < b) {
                    self.best = Some((value, label.node));
                }
                return self.mode == RoutingMode::Feasibility;
            }
            if let Some(((best2, best3), _)) = self.best {
                let lb2 = label.p + local.service[last] + self.remaining_service;
                if lb2 > best2 || (lb2 == best2 && label.travel >= best3) {
                    return false;
                }
            }
            // the rest of this window must fit a spanning arborescence
            if open.len() >= 2 && group.contains(&last) {
                let mut nodes = open.clone();
                nodes.push(last);
                let weights: Vec<Vec<Seconds>> = nodes
                    .iter()
                    .map(|&a| nodes.iter().map(|&b| if a == b { 0 } else { local.gap(a, b) }).collect())
                    .collect();
                if label.earliest + min_arborescence_any_root(&weights) > local.end[last] {
                    return false;
                }
            }

            let (next_k, candidates) = if open.is_empty() {
                (k + 1, local.groups[k + 1].clone())
            } else {
                (k, open)
            };
            let mut children: Vec<(Label, usize)> = candidates
                .into_iter()
                .filter_map(|c| extend(local, &label, last, c, &mut self.paths).map(|l| (l, c)))
                .collect();
            children.sort_by_key(|(l, c)| (l.earliest, *c));
            for (child, c) in children {
                self.visited[c] = true;
                self.remaining_service -= local.service[c];
                let stop = self.descend(next_k, child, c, deadline);
                self.visited[c] = false;
                self.remaining_service += local.service[c];
                if stop {
                    return true;
                }
            }
            false
        }
    }

    let mut bnb = Bnb {
        local,
        mode,
        paths: Paths(Vec::new()),
        visited: vec![false; local.ids.len()],
        remaining_service: local.service.iter().sum(),
        best: None,
        exhausted: false,
    };
    let mut firsts: Vec<(Label, usize)> = local.groups[0]
        .iter()
        .map(|&a| (start_label(local, a, &mut bnb.paths), a))
        .collect();
    firsts.sort_by_key(|(l, a)| (l.p, *a));
    for (label, a) in firsts {
        bnb.visited[a] = true;
        bnb.remaining_service -= local.service[a];
        let stop = bnb.descend(0, label, a, deadline);
        bnb.visited[a] = false;
        bnb.remaining_service += local.service[a];
        if stop {
            break;
        }
    }
    if bnb.exhausted {
        return Search::Exhausted;
    }
    Search::Done(bnb.best.map(|(_, node)| bnb.paths.sequence(node)))
}
