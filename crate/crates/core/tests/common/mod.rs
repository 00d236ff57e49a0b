//! Independent oracles and instance builders shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use vrpstw::model::{Customer, Instance, Point, Seconds, TimeWindow, Weight};

pub fn instance(customers: &[(f64, f64, usize, f64, Seconds)], windows: &[(Seconds, Seconds)], capacity: f64, speed_kmh: f64) -> Instance {
    let customers = customers
        .iter()
        .enumerate()
        .map(|(i, &(x, y, window, weight, service))| Customer {
            id: i as u32 + 1,
            location: Point::new(x, y),
            window,
            weight: Weight::from_units(weight),
            service,
        })
        .collect();
    let windows = windows
        .iter()
        .enumerate()
        .map(|(j, &(start, end))| TimeWindow {
            id: j as u32 + 1,
            start,
            end,
        })
        .collect();
    Instance::new(customers, Point::new(0.0, 0.0), windows, Weight::from_units(capacity), speed_kmh).unwrap()
}

/// Up to `max_customers` customers around the origin over one to three
/// consecutive windows with random gaps.
pub fn random_cluster_instance(rng: &mut impl Rng, max_customers: usize) -> Instance {
    let q = rng.random_range(1..=3);
    let mut windows = Vec::new();
    let mut t = rng.random_range(0..1200);
    for _ in 0..q {
        let len = rng.random_range(300..=1500);
        windows.push((t, t + len));
        t += len + rng.random_range(0..=600);
    }
    let k = rng.random_range(1..=max_customers);
    let customers: Vec<_> = (0..k)
        .map(|_| {
            (
                rng.random_range(-1500.0..1500.0),
                rng.random_range(-1500.0..1500.0),
                rng.random_range(0..q),
                1.0,
                rng.random_range(60..=300),
            )
        })
        .collect();
    instance(&customers, &windows, 100.0, 20.0)
}

/// Duration and travel of `sequence` when the first arrival is `start` and
/// every later arrival is as early as possible.
fn timing_from_start(sequence: &[usize], start: Seconds, inst: &Instance) -> Option<(Seconds, Seconds)> {
    let mut arrival = start;
    for w in sequence.windows(2) {
        let window = inst.window_of(w[1]);
        arrival = window.start.max(arrival + inst.customer(w[0]).service + inst.between(w[0], w[1]));
        if arrival > window.end {
            return None;
        }
    }
    let (first, last) = (sequence[0], *sequence.last().unwrap());
    let legs: Seconds = sequence.windows(2).map(|w| inst.between(w[0], w[1])).sum();
    let out = inst.from_depot(first);
    let back = inst.to_depot(last);
    Some((out + arrival - start + inst.customer(last).service + back, out + legs + back))
}

/// Lexicographic minimum `(duration, travel)` over every window-respecting
/// visit order and every integer first-arrival time.
pub fn brute_force_route(customers: &[usize], inst: &Instance) -> Option<(Seconds, Seconds)> {
    let mut best: Option<(Seconds, Seconds)> = None;
    let mut seq = Vec::with_capacity(customers.len());
    let mut used = vec![false; customers.len()];
    permute(customers, inst, &mut seq, &mut used, &mut best);
    best
}

fn permute(pool: &[usize], inst: &Instance, seq: &mut Vec<usize>, used: &mut [bool], best: &mut Option<(Seconds, Seconds)>) {
    if seq.len() == pool.len() {
        let first = inst.window_of(seq[0]);
        for start in first.start..=first.end {
            match timing_from_start(seq, start, inst) {
                Some(cost) => {
                    if best.is_none_or(|b| cost < b) {
                        *best = Some(cost);
                    }
                }
                // later starts only push every arrival later
                None => break,
            }
        }
        return;
    }
    for i in 0..pool.len() {
        if used[i] {
            continue;
        }
        let c = pool[i];
        if let Some(&prev) = seq.last() {
            if inst.customer(c).window < inst.customer(prev).window {
                continue;
            }
        }
        seq.push(c);
        // a prefix infeasible from the earliest start stays infeasible
        let prefix_ok = timing_from_start(seq, inst.window_of(seq[0]).start, inst).is_some();
        if prefix_ok {
            used[i] = true;
            permute(pool, inst, seq, used, best);
            used[i] = false;
        }
        seq.pop();
    }
}

/// Minimum spanning arborescence rooted at `root` by enumerating every
/// parent assignment.
pub fn brute_force_arborescence(weights: &[Vec<i64>], root: usize) -> i64 {
    let n = weights.len();
    let others: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut parent = vec![usize::MAX; n];
    let mut best = i64::MAX;
    assign(weights, root, &others, 0, &mut parent, &mut best);
    best
}

fn assign(weights: &[Vec<i64>], root: usize, others: &[usize], k: usize, parent: &mut [usize], best: &mut i64) {
    let n = weights.len();
    if k == others.len() {
        let reaches_root = |mut v: usize| {
            for _ in 0..n {
                if v == root {
                    return true;
                }
                v = parent[v];
            }
            v == root
        };
        if others.iter().all(|&v| reaches_root(v)) {
            let cost = others.iter().map(|&v| weights[parent[v]][v]).sum();
            *best = (*best).min(cost);
        }
        return;
    }
    let v = others[k];
    for p in 0..n {
        if p != v {
            parent[v] = p;
            assign(weights, root, others, k + 1, parent, best);
        }
    }
}
