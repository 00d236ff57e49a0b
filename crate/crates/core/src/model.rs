//! Problem data: windows, customers, instances, tours and schedules, plus
//! objective evaluation and full schedule validation.
//!
//! Times are integer seconds throughout. Order weights are fixed-point
//! decimals with three fractional digits so that capacity checks are exact.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Seconds = i64;

/// Order weight in thousandths of a unit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(i64);

impl Weight {
    pub const SCALE: i64 = 1000;

    pub const fn from_milli(milli: i64) -> Self {
        Weight(milli)
    }

    /// Rounds `units` to the nearest thousandth.
    pub fn from_units(units: f64) -> Self {
        Weight((units * Self::SCALE as f64).round() as i64)
    }

    pub const fn milli(self) -> i64 {
        self.0
    }

    pub fn units(self) -> f64 {
        self.0 as f64 / Self::SCALE as f64
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight(self.0 - rhs.0)
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::default(), Add::add)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.abs();
        write!(f, "{sign}{}.{:03}", abs / Self::SCALE, abs % Self::SCALE)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Travel time in whole seconds between two points at `speed` meters per second.
pub fn travel_time(p: Point, q: Point, speed: f64) -> Result<Seconds> {
    if !speed.is_finite() || speed <= 0.0 {
        return Err(Error::Config(format!("speed must be positive, got {speed}")));
    }
    Ok(rounded_time(p, q, speed))
}

fn rounded_time(p: Point, q: Point, speed: f64) -> Seconds {
    (p.distance(&q) / speed).round() as Seconds
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TimeWindow {
    pub id: u32,
    pub start: Seconds,
    pub end: Seconds,
}

impl TimeWindow {
    pub fn len(&self) -> Seconds {
        self.end - self.start
    }

    pub fn contains(&self, t: Seconds) -> bool {
        self.start <= t && t <= self.end
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Customer {
    pub id: u32,
    pub location: Point,
    /// Index into [`Instance::windows`].
    pub window: usize,
    pub weight: Weight,
    pub service: Seconds,
}

/// A node of the travel graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Depot,
    Customer(usize),
}

/// Source of travel times between depot and customers.
///
/// [`Instance`] computes times on demand from coordinates; other providers
/// (e.g. a precomputed matrix) can implement this trait.
pub trait TravelTimes {
    fn travel(&self, from: Node, to: Node) -> Seconds;
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    customers: Vec<Customer>,
    depot: Point,
    windows: Vec<TimeWindow>,
    capacity: Weight,
    speed_kmh: f64,
    speed_mps: f64,
    index: HashMap<u32, usize>,
    /// Free-form generator metadata carried along for provenance.
    pub provenance: Option<serde_json::Value>,
}

impl Instance {
    pub fn new(
        customers: Vec<Customer>,
        depot: Point,
        windows: Vec<TimeWindow>,
        capacity: Weight,
        speed_kmh: f64,
    ) -> Result<Self> {
        if !speed_kmh.is_finite() || speed_kmh <= 0.0 {
            return Err(Error::Config(format!(
                "speed must be positive, got {speed_kmh} km/h"
            )));
        }
        if capacity.milli() <= 0 {
            return Err(Error::InvalidInstance(format!(
                "capacity must be positive, got {capacity}"
            )));
        }
        for (i, w) in windows.iter().enumerate() {
            if w.start >= w.end {
                return Err(Error::InvalidInstance(format!(
                    "window {} has start {} >= end {}",
                    w.id, w.start, w.end
                )));
            }
            if i > 0 && w.start < windows[i - 1].end {
                return Err(Error::InvalidInstance(format!(
                    "windows {} and {} overlap or are out of order",
                    windows[i - 1].id,
                    w.id
                )));
            }
        }
        let mut index = HashMap::with_capacity(customers.len());
        for (i, c) in customers.iter().enumerate() {
            if index.insert(c.id, i).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate customer id {}", c.id)));
            }
            if c.window >= windows.len() {
                return Err(Error::InvalidInstance(format!(
                    "customer {} references a missing window",
                    c.id
                )));
            }
            if c.weight.milli() <= 0 || c.weight > capacity {
                return Err(Error::InvalidInstance(format!(
                    "customer {} has weight {} outside ]0, {}]",
                    c.id, c.weight, capacity
                )));
            }
            if c.service <= 0 {
                return Err(Error::InvalidInstance(format!(
                    "customer {} has non-positive service time {}",
                    c.id, c.service
                )));
            }
        }
        Ok(Instance {
            customers,
            depot,
            windows,
            capacity,
            speed_kmh,
            speed_mps: speed_kmh / 3.6,
            index,
            provenance: None,
        })
    }

    pub fn customers(&self) -> &[Customer] {
        &self.customers
    }

    pub fn customer(&self, idx: usize) -> &Customer {
        &self.customers[idx]
    }

    pub fn len(&self) -> usize {
        self.customers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.customers.is_empty()
    }

    pub fn depot(&self) -> Point {
        self.depot
    }

    pub fn windows(&self) -> &[TimeWindow] {
        &self.windows
    }

    pub fn window_of(&self, idx: usize) -> &TimeWindow {
        &self.windows[self.customers[idx].window]
    }

    pub fn capacity(&self) -> Weight {
        self.capacity
    }

    pub fn speed_kmh(&self) -> f64 {
        self.speed_kmh
    }

    /// Position of the customer with external id `id`.
    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn total_weight(&self) -> Weight {
        self.customers.iter().map(|c| c.weight).sum()
    }

    fn location(&self, node: Node) -> Point {
        match node {
            Node::Depot => self.depot,
            Node::Customer(i) => self.customers[i].location,
        }
    }

    pub fn from_depot(&self, idx: usize) -> Seconds {
        self.travel(Node::Depot, Node::Customer(idx))
    }

    pub fn to_depot(&self, idx: usize) -> Seconds {
        self.travel(Node::Customer(idx), Node::Depot)
    }

    pub fn between(&self, a: usize, b: usize) -> Seconds {
        self.travel(Node::Customer(a), Node::Customer(b))
    }
}

impl TravelTimes for Instance {
    fn travel(&self, from: Node, to: Node) -> Seconds {
        rounded_time(self.location(from), self.location(to), self.speed_mps)
    }
}

/// One vehicle's visit sequence; `customers` holds instance indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Tour {
    pub customers: Vec<usize>,
    pub arrivals: Vec<Seconds>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub tours: Vec<Tour>,
}

/// Lexicographic objective: vehicles, then total duration, then total travel.
///
/// The derived ordering compares fields in declaration order, which is the
/// lexicographic order on `(vehicles, duration, travel)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Objective {
    pub vehicles: usize,
    pub duration: Seconds,
    pub travel: Seconds,
}

impl Objective {
    pub const fn new(vehicles: usize, duration: Seconds, travel: Seconds) -> Self {
        Objective {
            vehicles,
            duration,
            travel,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.vehicles, self.duration, self.travel)
    }
}

pub fn lex_compare(a: &Objective, b: &Objective) -> Ordering {
    a.cmp(b)
}

/// Duration and travel time of a single tour.
pub fn tour_objectives(tour: &Tour, instance: &Instance) -> Result<(Seconds, Seconds)> {
    let (first, last) = match (tour.customers.first(), tour.customers.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(Error::Domain("empty tour has no objective".into())),
    };
    if tour.arrivals.len() != tour.customers.len() {
        return Err(Error::Domain(format!(
            "tour has {} customers but {} arrivals",
            tour.customers.len(),
            tour.arrivals.len()
        )));
    }
    if let Some(&bad) = tour.customers.iter().find(|&&c| c >= instance.len()) {
        return Err(Error::Domain(format!("tour references unknown customer index {bad}")));
    }
    let out = instance.from_depot(first);
    let back = instance.to_depot(last);
    let span = tour.arrivals[tour.arrivals.len() - 1] - tour.arrivals[0];
    let duration = out + span + instance.customer(last).service + back;
    let legs: Seconds = tour
        .customers
        .windows(2)
        .map(|w| instance.between(w[0], w[1]))
        .sum();
    Ok((duration, out + legs + back))
}

pub fn schedule_objective(schedule: &Schedule, instance: &Instance) -> Result<Objective> {
    let mut obj = Objective::new(schedule.tours.len(), 0, 0);
    for tour in &schedule.tours {
        let (duration, travel) = tour_objectives(tour, instance)?;
        obj.duration += duration;
        obj.travel += travel;
    }
    Ok(obj)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyTour {
        tour: usize,
    },
    ArrivalCount {
        tour: usize,
        customers: usize,
        arrivals: usize,
    },
    UnknownCustomer {
        tour: usize,
        index: usize,
    },
    CapacityExceeded {
        tour: usize,
        load: Weight,
        capacity: Weight,
    },
    WindowMissed {
        tour: usize,
        customer: u32,
        arrival: Seconds,
        start: Seconds,
        end: Seconds,
    },
    Chaining {
        tour: usize,
        from: u32,
        to: u32,
        gap: Seconds,
        required: Seconds,
    },
    Duplicate {
        customer: u32,
    },
    Missing {
        customer: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyTour { tour } => write!(f, "tour {tour} is empty"),
            Violation::ArrivalCount {
                tour,
                customers,
                arrivals,
            } => write!(f, "tour {tour} has {customers} customers but {arrivals} arrivals"),
            Violation::UnknownCustomer { tour, index } => {
                write!(f, "tour {tour} references unknown customer index {index}")
            }
            Violation::CapacityExceeded {
                tour,
                load,
                capacity,
            } => write!(f, "tour {tour} carries {load} > capacity {capacity}"),
            Violation::WindowMissed {
                tour,
                customer,
                arrival,
                start,
                end,
            } => write!(
                f,
                "tour {tour}: customer {customer} reached at {arrival} outside [{start}, {end}]"
            ),
            Violation::Chaining {
                tour,
                from,
                to,
                gap,
                required,
            } => write!(
                f,
                "tour {tour}: only {gap} s between customers {from} and {to}, need {required} s"
            ),
            Violation::Duplicate { customer } => {
                write!(f, "customer {customer} is served more than once")
            }
            Violation::Missing { customer } => write!(f, "customer {customer} is never served"),
        }
    }
}

/// Checks capacity, window containment, chaining and the partition property.
pub fn validate_schedule(schedule: &Schedule, instance: &Instance) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    let mut seen = vec![0usize; instance.len()];

    for (t, tour) in schedule.tours.iter().enumerate() {
        if tour.customers.is_empty() {
            violations.push(Violation::EmptyTour { tour: t });
            continue;
        }
        if tour.arrivals.len() != tour.customers.len() {
            violations.push(Violation::ArrivalCount {
                tour: t,
                customers: tour.customers.len(),
                arrivals: tour.arrivals.len(),
            });
            continue;
        }
        if let Some(&index) = tour.customers.iter().find(|&&c| c >= instance.len()) {
            violations.push(Violation::UnknownCustomer { tour: t, index });
            continue;
        }

        let load: Weight = tour.customers.iter().map(|&c| instance.customer(c).weight).sum();
        if load > instance.capacity() {
            violations.push(Violation::CapacityExceeded {
                tour: t,
                load,
                capacity: instance.capacity(),
            });
        }
        for (&c, &arrival) in tour.customers.iter().zip(&tour.arrivals) {
            seen[c] += 1;
            let w = instance.window_of(c);
            if !w.contains(arrival) {
                violations.push(Violation::WindowMissed {
                    tour: t,
                    customer: instance.customer(c).id,
                    arrival,
                    start: w.start,
                    end: w.end,
                });
            }
        }
        for k in 1..tour.customers.len() {
            let (a, b) = (tour.customers[k - 1], tour.customers[k]);
            let gap = tour.arrivals[k] - tour.arrivals[k - 1];
            let required = instance.customer(a).service + instance.between(a, b);
            if gap < required {
                violations.push(Violation::Chaining {
                    tour: t,
                    from: instance.customer(a).id,
                    to: instance.customer(b).id,
                    gap,
                    required,
                });
            }
        }
    }

    for (c, &count) in seen.iter().enumerate() {
        let customer = instance.customer(c).id;
        match count {
            0 => violations.push(Violation::Missing { customer }),
            1 => {}
            _ => violations.push(Violation::Duplicate { customer }),
        }
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn window(id: u32, start: Seconds, end: Seconds) -> TimeWindow {
        TimeWindow { id, start, end }
    }

    pub(crate) fn customer(id: u32, x: f64, y: f64, window: usize, weight: f64, service: Seconds) -> Customer {
        Customer {
            id,
            location: Point::new(x, y),
            window,
            weight: Weight::from_units(weight),
            service,
        }
    }

    /// 1 m/s makes travel times equal rounded distances.
    pub(crate) fn unit_speed_instance(
        customers: Vec<Customer>,
        windows: Vec<TimeWindow>,
        capacity: f64,
    ) -> Instance {
        Instance::new(customers, Point::new(0.0, 0.0), windows, Weight::from_units(capacity), 3.6)
            .unwrap()
    }

    #[test]
    fn travel_time_examples() {
        let kmh20 = 20.0 / 3.6;
        let o = Point::new(0.0, 0.0);
        assert_eq!(travel_time(o, o, 5.5556).unwrap(), 0);
        assert_eq!(travel_time(o, Point::new(20000.0, 0.0), kmh20).unwrap(), 3600);
        assert_eq!(travel_time(o, Point::new(300.0, 400.0), kmh20).unwrap(), 90);
        assert!(matches!(travel_time(o, o, 0.0), Err(Error::Config(_))));
        assert!(matches!(travel_time(o, o, -1.0), Err(Error::Config(_))));
    }

    #[test]
    fn instance_travel_uses_kmh() {
        let inst = Instance::new(
            vec![customer(1, 20000.0, 0.0, 0, 1.0, 300)],
            Point::new(0.0, 0.0),
            vec![window(1, 0, 3600)],
            Weight::from_units(10.0),
            20.0,
        )
        .unwrap();
        assert_eq!(inst.from_depot(0), 3600);
        assert_eq!(inst.to_depot(0), 3600);
    }

    #[test]
    fn instance_rejects_bad_data() {
        let w = vec![window(1, 0, 100), window(2, 50, 200)];
        let err = Instance::new(vec![], Point::default(), w, Weight::from_units(1.0), 20.0);
        assert!(matches!(err, Err(Error::InvalidInstance(_))));

        let w = vec![window(1, 0, 100)];
        let heavy = vec![customer(1, 1.0, 1.0, 0, 11.0, 300)];
        let err = Instance::new(heavy, Point::default(), w.clone(), Weight::from_units(10.0), 20.0);
        assert!(matches!(err, Err(Error::InvalidInstance(_))));

        let dup = vec![customer(1, 1.0, 1.0, 0, 1.0, 300), customer(1, 2.0, 1.0, 0, 1.0, 300)];
        let err = Instance::new(dup, Point::default(), w.clone(), Weight::from_units(10.0), 20.0);
        assert!(matches!(err, Err(Error::InvalidInstance(_))));

        let orphan = vec![customer(1, 1.0, 1.0, 3, 1.0, 300)];
        let err = Instance::new(orphan, Point::default(), w.clone(), Weight::from_units(10.0), 20.0);
        assert!(matches!(err, Err(Error::InvalidInstance(_))));

        let err = Instance::new(vec![], Point::default(), w, Weight::from_units(10.0), 0.0);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn touching_windows_are_allowed() {
        let w = vec![window(1, 0, 3600), window(2, 3600, 7200)];
        assert!(Instance::new(vec![], Point::default(), w, Weight::from_units(1.0), 20.0).is_ok());
    }

    #[test]
    fn single_customer_tour_objectives() {
        // t(d, a) = 90 at unit speed
        let inst = unit_speed_instance(
            vec![customer(1, 90.0, 0.0, 0, 1.0, 300)],
            vec![window(1, 0, 3600)],
            10.0,
        );
        let tour = Tour {
            customers: vec![0],
            arrivals: vec![1000],
        };
        assert_eq!(tour_objectives(&tour, &inst).unwrap(), (480, 180));
    }

    /// a1 at distance 100 from the depot, a2 at distance 150, 200 apart.
    pub(crate) fn two_customer_instance() -> Instance {
        // Triangle with sides 100 (d-a1), 200 (a1-a2), 150 (a2-d).
        // Place a1 = (100, 0); a2 on the circle |p| = 150 with |p - a1| = 200.
        let x = (100.0f64 * 100.0 + 150.0 * 150.0 - 200.0 * 200.0) / (2.0 * 100.0);
        let y = (150.0f64 * 150.0 - x * x).sqrt();
        unit_speed_instance(
            vec![
                customer(1, 100.0, 0.0, 0, 1.0, 300),
                customer(2, x, y, 0, 1.0, 300),
            ],
            vec![window(1, 3000, 7200)],
            10.0,
        )
    }

    #[test]
    fn two_customer_tour_objectives() {
        let inst = two_customer_instance();
        assert_eq!(inst.from_depot(0), 100);
        assert_eq!(inst.between(0, 1), 200);
        assert_eq!(inst.to_depot(1), 150);
        let tour = Tour {
            customers: vec![0, 1],
            arrivals: vec![3600, 4100],
        };
        assert_eq!(tour_objectives(&tour, &inst).unwrap(), (1050, 450));

        let waiting = Tour {
            customers: vec![0, 1],
            arrivals: vec![3600, 4500],
        };
        let (d, t) = tour_objectives(&waiting, &inst).unwrap();
        assert!(d > 1050);
        assert_eq!(t, 450);

        let schedule = Schedule {
            tours: vec![tour.clone(), tour],
        };
        // Not a valid partition, but the objective is a plain sum.
        assert_eq!(schedule_objective(&schedule, &inst).unwrap(), Objective::new(2, 2100, 900));
    }

    #[test]
    fn empty_tour_and_schedule() {
        let inst = two_customer_instance();
        assert!(matches!(tour_objectives(&Tour::default(), &inst), Err(Error::Domain(_))));
        assert_eq!(
            schedule_objective(&Schedule::default(), &inst).unwrap(),
            Objective::new(0, 0, 0)
        );
    }

    #[test]
    fn lex_compare_examples() {
        use Ordering::*;
        let o = Objective::new;
        assert_eq!(lex_compare(&o(53, 9999, 9999), &o(54, 1, 1)), Less);
        assert_eq!(lex_compare(&o(54, 480, 999), &o(54, 507, 1)), Less);
        assert_eq!(lex_compare(&o(54, 480, 330), &o(54, 480, 330)), Equal);
    }

    #[test]
    fn validate_feasible_and_broken_schedules() {
        let inst = two_customer_instance();
        let good = Schedule {
            tours: vec![Tour {
                customers: vec![0, 1],
                arrivals: vec![3600, 4100],
            }],
        };
        assert_eq!(validate_schedule(&good, &inst), Ok(()));

        let late = Schedule {
            tours: vec![Tour {
                customers: vec![0, 1],
                arrivals: vec![3600, 7201],
            }],
        };
        let v = validate_schedule(&late, &inst).unwrap_err();
        assert!(matches!(v[0], Violation::WindowMissed { customer: 2, .. }));

        let tight = Schedule {
            tours: vec![Tour {
                customers: vec![0, 1],
                arrivals: vec![3600, 4099],
            }],
        };
        let v = validate_schedule(&tight, &inst).unwrap_err();
        assert!(matches!(v[0], Violation::Chaining { gap: 499, required: 500, .. }));

        let dup = Schedule {
            tours: vec![
                Tour {
                    customers: vec![0, 1],
                    arrivals: vec![3600, 4100],
                },
                Tour {
                    customers: vec![1],
                    arrivals: vec![5000],
                },
            ],
        };
        let v = validate_schedule(&dup, &inst).unwrap_err();
        assert_eq!(v, vec![Violation::Duplicate { customer: 2 }]);

        let missing = Schedule {
            tours: vec![Tour {
                customers: vec![0],
                arrivals: vec![3600],
            }],
        };
        let v = validate_schedule(&missing, &inst).unwrap_err();
        assert_eq!(v, vec![Violation::Missing { customer: 2 }]);
    }

    #[test]
    fn capacity_boundary() {
        let w = vec![window(1, 0, 36000)];
        let cs = vec![
            customer(1, 10.0, 0.0, 0, 5.0, 10),
            customer(2, 20.0, 0.0, 0, 5.0, 10),
            customer(3, 30.0, 0.0, 0, 5.001, 10),
        ];
        let inst = unit_speed_instance(cs, w, 15.0);
        let schedule = Schedule {
            tours: vec![Tour {
                customers: vec![0, 1, 2],
                arrivals: vec![10, 30, 50],
            }],
        };
        let v = validate_schedule(&schedule, &inst).unwrap_err();
        assert_eq!(
            v,
            vec![Violation::CapacityExceeded {
                tour: 0,
                load: Weight::from_milli(15001),
                capacity: Weight::from_milli(15000),
            }]
        );
    }

    #[test]
    fn weight_display_and_rounding() {
        assert_eq!(Weight::from_units(4.9995).milli(), 5000);
        assert_eq!(Weight::from_units(5.123).to_string(), "5.123");
        assert_eq!(Weight::from_milli(-1500).to_string(), "-1.500");
    }

    proptest! {
        #[test]
        fn travel_time_is_symmetric(
            ax in -1e5f64..1e5, ay in -1e5f64..1e5,
            bx in -1e5f64..1e5, by in -1e5f64..1e5,
            speed in 0.1f64..50.0,
        ) {
            let (a, b) = (Point::new(ax, ay), Point::new(bx, by));
            prop_assert_eq!(travel_time(a, b, speed).unwrap(), travel_time(b, a, speed).unwrap());
        }

        #[test]
        fn lex_compare_is_a_total_order(
            a in (0usize..4, 0i64..4, 0i64..4),
            b in (0usize..4, 0i64..4, 0i64..4),
            c in (0usize..4, 0i64..4, 0i64..4),
        ) {
            let a = Objective::new(a.0, a.1, a.2);
            let b = Objective::new(b.0, b.1, b.2);
            let c = Objective::new(c.0, c.1, c.2);
            prop_assert_eq!(lex_compare(&a, &b), lex_compare(&b, &a).reverse());
            if lex_compare(&a, &b) != Ordering::Greater && lex_compare(&b, &c) != Ordering::Greater {
                prop_assert_ne!(lex_compare(&a, &c), Ordering::Greater);
            }
            prop_assert_eq!(lex_compare(&a, &b) == Ordering::Equal, a == b);
        }
    }
}
