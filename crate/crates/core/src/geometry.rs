//! Polar coordinates of customers around the depot.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Customer, Instance, Point};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Counterclockwise,
    Clockwise,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Counterclockwise, Direction::Clockwise];

    pub fn short_name(self) -> &'static str {
        match self {
            Direction::Counterclockwise => "ccw",
            Direction::Clockwise => "cw",
        }
    }
}

/// Maps any finite angle into `[0, 2π)`.
pub fn normalize(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Counterclockwise angle of `p` seen from `origin`, in `[0, 2π)`.
/// Points at the origin get angle 0.
pub fn raw_angle(p: Point, origin: Point) -> f64 {
    let (dx, dy) = (p.x - origin.x, p.y - origin.y);
    if dx == 0.0 && dy == 0.0 {
        return 0.0;
    }
    normalize(dy.atan2(dx))
}

pub fn angle_of(customer: &Customer, depot: Point, zero_angle: f64, direction: Direction) -> f64 {
    if customer.location == depot {
        return 0.0;
    }
    let rel = normalize(raw_angle(customer.location, depot) - zero_angle);
    match direction {
        Direction::Counterclockwise => rel,
        Direction::Clockwise => normalize(TAU - rel),
    }
}

/// Midpoint of the widest empty circular gap between consecutive customers.
///
/// Customers located exactly at the depot carry no direction and are
/// ignored. Ties go to the first widest gap in ascending angle order.
pub fn choose_zero_angle(customers: &[Customer], depot: Point) -> Result<f64> {
    if customers.is_empty() {
        return Err(Error::Domain("zero angle needs at least one customer".into()));
    }
    let mut angles: Vec<f64> = customers
        .iter()
        .filter(|c| c.location != depot)
        .map(|c| raw_angle(c.location, depot))
        .collect();
    if angles.is_empty() {
        return Ok(0.0);
    }
    angles.sort_by(f64::total_cmp);

    let mut best_gap = -1.0;
    let mut best_mid = 0.0;
    for i in 0..angles.len() {
        let from = angles[i];
        let to = if i + 1 < angles.len() {
            angles[i + 1]
        } else {
            angles[0] + TAU
        };
        let gap = to - from;
        if gap > best_gap {
            best_gap = gap;
            best_mid = from + gap / 2.0;
        }
    }
    Ok(normalize(best_mid))
}

/// Normalized sweep angles of every customer for a fixed zero angle and direction.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarView {
    zero_angle: f64,
    direction: Direction,
    angles: Vec<f64>,
    radii: Vec<f64>,
}

impl PolarView {
    /// Uses [`choose_zero_angle`]; an empty instance gets zero angle 0.
    pub fn new(instance: &Instance, direction: Direction) -> Self {
        let zero = choose_zero_angle(instance.customers(), instance.depot()).unwrap_or(0.0);
        Self::with_zero_angle(instance, zero, direction)
    }

    pub fn with_zero_angle(instance: &Instance, zero_angle: f64, direction: Direction) -> Self {
        let depot = instance.depot();
        let angles = instance
            .customers()
            .iter()
            .map(|c| angle_of(c, depot, zero_angle, direction))
            .collect();
        let radii = instance.customers().iter().map(|c| c.location.distance(&depot)).collect();
        PolarView {
            zero_angle,
            direction,
            angles,
            radii,
        }
    }

    pub fn zero_angle(&self) -> f64 {
        self.zero_angle
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn angle(&self, idx: usize) -> f64 {
        self.angles[idx]
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Sweep order: angle, then distance to the depot, then index.
    pub fn compare(&self, a: usize, b: usize) -> Ordering {
        self.angles[a]
            .total_cmp(&self.angles[b])
            .then(self.radii[a].total_cmp(&self.radii[b]))
            .then(a.cmp(&b))
    }

    pub fn sorted(&self, mut customers: Vec<usize>) -> Vec<usize> {
        customers.sort_by(|&a, &b| self.compare(a, b));
        customers
    }

    /// Customers whose angle lies in `[from, to)`.
    pub fn sector(&self, from: f64, to: f64) -> Result<Vec<usize>> {
        if from > to {
            return Err(Error::Domain(format!("sector bounds out of order: {from} > {to}")));
        }
        let members = (0..self.angles.len())
            .filter(|&i| from <= self.angles[i] && self.angles[i] < to)
            .collect();
        Ok(self.sorted(members))
    }

    /// [`PolarView::sector`] restricted to customers of window index `window`.
    pub fn sector_in_window(
        &self,
        instance: &Instance,
        window: usize,
        from: f64,
        to: f64,
    ) -> Result<Vec<usize>> {
        Ok(self
            .sector(from, to)?
            .into_iter()
            .filter(|&i| instance.customer(i).window == window)
            .collect())
    }
}
