//! Seeded benchmark instances resembling urban settlement structure: a
//! fifth of the customers uniform over a square grid, the rest drawn from
//! rotated Gaussian clusters.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Customer, Instance, Point, Seconds, TimeWindow, Weight};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepotPlacement {
    #[default]
    Center,
    Corner,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n: usize,
    /// Vehicle capacity in weight units.
    pub capacity: f64,
    pub seed: u64,
    /// Side length of the square grid in meters.
    pub grid: f64,
    pub speed_kmh: f64,
    pub window_count: usize,
    pub window_len: Seconds,
    pub service: Seconds,
    pub weight_mean: f64,
    pub weight_sd: f64,
    pub weight_min: f64,
    pub weight_max: f64,
    pub depot: DepotPlacement,
}

impl GenConfig {
    pub fn new(n: usize, capacity: f64, seed: u64) -> Self {
        GenConfig {
            n,
            capacity,
            seed,
            ..GenConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.n == 0 {
            return fail("n must be at least 1");
        }
        if !(self.grid > 0.0 && self.grid.is_finite()) {
            return fail("grid must be positive");
        }
        if !(self.speed_kmh > 0.0 && self.speed_kmh.is_finite()) {
            return fail("speed must be positive");
        }
        if self.window_count == 0 || self.window_len <= 0 {
            return fail("need at least one window of positive length");
        }
        if self.service <= 0 {
            return fail("service time must be positive");
        }
        if !(self.weight_min > 0.0 && self.weight_min <= self.weight_max) {
            return fail("weight bounds must satisfy 0 < min <= max");
        }
        if !(self.weight_sd >= 0.0 && self.weight_sd.is_finite()) {
            return fail("weight standard deviation must be nonnegative");
        }
        if !(self.weight_mean >= self.weight_min && self.weight_mean <= self.weight_max) {
            return fail("weight mean must lie within the weight bounds");
        }
        if self.capacity.partial_cmp(&self.weight_max).is_none_or(|o| o.is_lt()) {
            return fail("capacity must be at least the maximum weight");
        }
        Ok(())
    }

    /// Number of customers placed uniformly over the grid: ⌈n / 5⌉.
    pub fn uniform_count(&self) -> usize {
        self.n.div_ceil(5)
    }
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 250,
            capacity: 200.0,
            seed: 0,
            grid: 20_000.0,
            speed_kmh: 20.0,
            window_count: 10,
            window_len: 3600,
            service: 300,
            weight_mean: 5.0,
            weight_sd: 1.5,
            weight_min: 1.0,
            weight_max: 10.0,
            depot: DepotPlacement::Center,
        }
    }
}

/// How a customer location was sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocationSource {
    Uniform,
    Cluster(usize),
}

struct Blob {
    center: Point,
    sigma: (f64, f64),
    rotation: f64,
}

impl Blob {
    fn sample(&self, rng: &mut ChaCha8Rng, grid: f64) -> Point {
        let (sin, cos) = self.rotation.sin_cos();
        loop {
            let u: f64 = StandardNormal.sample(rng);
            let v: f64 = StandardNormal.sample(rng);
            let (dx, dy) = (u * self.sigma.0, v * self.sigma.1);
            let p = Point::new(self.center.x + cos * dx - sin * dy, self.center.y + sin * dx + cos * dy);
            if (0.0..=grid).contains(&p.x) && (0.0..=grid).contains(&p.y) {
                return p;
            }
        }
    }
}

pub fn generate(config: &GenConfig) -> Result<Instance> {
    generate_with_sources(config).map(|(inst, _)| inst)
}

/// Like [`generate`], also reporting how each customer's location was drawn.
pub fn generate_with_sources(config: &GenConfig) -> Result<(Instance, Vec<LocationSource>)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let grid = config.grid;

    let uniform = config.uniform_count();
    let mut locations = Vec::with_capacity(config.n);
    let mut sources = Vec::with_capacity(config.n);
    for _ in 0..uniform {
        locations.push(Point::new(rng.random_range(0.0..=grid), rng.random_range(0.0..=grid)));
        sources.push(LocationSource::Uniform);
    }

    let blobs: Vec<Blob> = (0..rng.random_range(3..=8))
        .map(|_| Blob {
            center: Point::new(rng.random_range(0.0..=grid), rng.random_range(0.0..=grid)),
            sigma: (rng.random_range(500.0..=2000.0), rng.random_range(500.0..=2000.0)),
            rotation: rng.random_range(0.0..TAU),
        })
        .collect();
    for _ in uniform..config.n {
        let k = rng.random_range(0..blobs.len());
        locations.push(blobs[k].sample(&mut rng, grid));
        sources.push(LocationSource::Cluster(k));
    }

    let weight_dist = Normal::new(config.weight_mean, config.weight_sd)
        .map_err(|e| Error::Config(format!("weight distribution: {e}")))?;
    let customers: Vec<Customer> = locations
        .into_iter()
        .enumerate()
        .map(|(i, location)| {
            let weight = loop {
                let w = weight_dist.sample(&mut rng);
                if (config.weight_min..=config.weight_max).contains(&w) {
                    break w;
                }
            };
            Customer {
                id: i as u32 + 1,
                location,
                window: rng.random_range(0..config.window_count),
                weight: Weight::from_units(weight),
                service: config.service,
            }
        })
        .collect();

    let windows = (0..config.window_count)
        .map(|j| TimeWindow {
            id: j as u32 + 1,
            start: j as Seconds * config.window_len,
            end: (j as Seconds + 1) * config.window_len,
        })
        .collect();
    let depot = match config.depot {
        DepotPlacement::Center => Point::new(grid / 2.0, grid / 2.0),
        DepotPlacement::Corner => Point::new(0.0, 0.0),
    };
    let mut instance = Instance::new(
        customers,
        depot,
        windows,
        Weight::from_units(config.capacity),
        config.speed_kmh,
    )?;
    instance.provenance = Some(serde_json::json!({
        "generator": config,
        "cluster_count": blobs.len(),
        "uniform_count": uniform,
    }));
    Ok((instance, sources))
}
