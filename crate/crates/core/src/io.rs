//! JSON formats for instances, schedules and clusters.
//!
//! Output is canonical: object keys sorted, two-space indentation, and
//! numbers in shortest round-trip form, so equal values give equal bytes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Customer, Instance, Point, Schedule, Seconds, TimeWindow, Tour, Weight};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowFile {
    id: u32,
    start_s: Seconds,
    end_s: Seconds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomerFile {
    id: u32,
    x: f64,
    y: f64,
    /// Window id, not index.
    window: u32,
    weight: f64,
    service_s: Seconds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    capacity: f64,
    speed_kmh: f64,
    depot: [f64; 2],
    windows: Vec<WindowFile>,
    customers: Vec<CustomerFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TourFile {
    customers: Vec<u32>,
    arrivals_s: Vec<Seconds>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    tours: Vec<TourFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterFile {
    customers: Vec<u32>,
}

/// Serializes `value` with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value).map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
    let mut text = serde_json::to_string_pretty(&value).expect("a JSON value always serializes");
    text.push('\n');
    Ok(text)
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error(text, &e))
}

fn parse_error(text: &str, err: &serde_json::Error) -> Error {
    let (line, column) = (err.line(), err.column());
    let offset = if line == 0 {
        0
    } else {
        let line_start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
        (line_start + column.saturating_sub(1)).min(text.len())
    };
    let message = err.to_string();
    let message = match message.rfind(" at line ") {
        Some(cut) => message[..cut].to_string(),
        None => message,
    };
    Error::Parse {
        line,
        column,
        offset,
        message,
    }
}

pub fn instance_to_json(instance: &Instance) -> Result<String> {
    let file = InstanceFile {
        capacity: instance.capacity().units(),
        speed_kmh: instance.speed_kmh(),
        depot: [instance.depot().x, instance.depot().y],
        windows: instance
            .windows()
            .iter()
            .map(|w| WindowFile {
                id: w.id,
                start_s: w.start,
                end_s: w.end,
            })
            .collect(),
        customers: instance
            .customers()
            .iter()
            .map(|c| CustomerFile {
                id: c.id,
                x: c.location.x,
                y: c.location.y,
                window: instance.windows()[c.window].id,
                weight: c.weight.units(),
                service_s: c.service,
            })
            .collect(),
        generator: instance.provenance.clone(),
    };
    to_canonical_json(&file)
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let file: InstanceFile = parse(text)?;
    let windows: Vec<TimeWindow> = file
        .windows
        .iter()
        .map(|w| TimeWindow {
            id: w.id,
            start: w.start_s,
            end: w.end_s,
        })
        .collect();
    let customers = file
        .customers
        .iter()
        .map(|c| {
            let window = windows.iter().position(|w| w.id == c.window).ok_or_else(|| {
                Error::InvalidInstance(format!("customer {} references unknown window {}", c.id, c.window))
            })?;
            Ok(Customer {
                id: c.id,
                location: Point::new(c.x, c.y),
                window,
                weight: Weight::from_units(c.weight),
                service: c.service_s,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut instance = Instance::new(
        customers,
        Point::new(file.depot[0], file.depot[1]),
        windows,
        Weight::from_units(file.capacity),
        file.speed_kmh,
    )?;
    instance.provenance = file.generator;
    Ok(instance)
}

pub fn schedule_to_json(schedule: &Schedule, instance: &Instance) -> Result<String> {
    let file = ScheduleFile {
        tours: schedule
            .tours
            .iter()
            .map(|t| TourFile {
                customers: t.customers.iter().map(|&i| instance.customer(i).id).collect(),
                arrivals_s: t.arrivals.clone(),
            })
            .collect(),
    };
    to_canonical_json(&file)
}

fn indices(ids: &[u32], instance: &Instance) -> Result<Vec<usize>> {
    ids.iter()
        .map(|&id| {
            instance
                .index_of(id)
                .ok_or_else(|| Error::Domain(format!("unknown customer id {id}")))
        })
        .collect()
}

/// Parses a schedule against `instance`; customer ids become indices.
pub fn schedule_from_json(text: &str, instance: &Instance) -> Result<Schedule> {
    let file: ScheduleFile = parse(text)?;
    let tours = file
        .tours
        .iter()
        .map(|t| {
            Ok(Tour {
                customers: indices(&t.customers, instance)?,
                arrivals: t.arrivals_s.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Schedule { tours })
}

/// Parses `{"customers": [ids]}` into instance indices.
pub fn cluster_from_json(text: &str, instance: &Instance) -> Result<Vec<usize>> {
    let file: ClusterFile = parse(text)?;
    indices(&file.customers, instance)
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    instance_from_json(&fs::read_to_string(path)?)
}

pub fn read_schedule(path: &Path, instance: &Instance) -> Result<Schedule> {
    schedule_from_json(&fs::read_to_string(path)?, instance)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, GenConfig};
    use crate::model::tests::two_customer_instance;

    #[test]
    fn generated_instance_roundtrips() {
        let inst = generate(&GenConfig::new(40, 200.0, 3)).unwrap();
        let text = instance_to_json(&inst).unwrap();
        let back = instance_from_json(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(instance_to_json(&back).unwrap(), text);
    }

    #[test]
    fn keys_are_sorted() {
        let text = instance_to_json(&two_customer_instance()).unwrap();
        let cap = text.find("\"capacity\"").unwrap();
        let cust = text.find("\"customers\"").unwrap();
        let win = text.find("\"windows\"").unwrap();
        assert!(cap < cust && cust < win);
    }

    #[test]
    fn schedule_with_waits_roundtrips() {
        let inst = two_customer_instance();
        let schedule = Schedule {
            tours: vec![Tour {
                customers: vec![1, 0],
                arrivals: vec![3599, 4080],
            }],
        };
        let text = schedule_to_json(&schedule, &inst).unwrap();
        assert_eq!(schedule_from_json(&text, &inst).unwrap(), schedule);
    }

    #[test]
    fn truncated_file_reports_offset() {
        let text = instance_to_json(&two_customer_instance()).unwrap();
        let cut = &text[..text.len() / 2];
        match instance_from_json(cut) {
            Err(Error::Parse { offset, line, .. }) => {
                assert!(line > 1);
                assert!(offset > 0 && offset <= cut.len());
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_field_type_points_at_it() {
        let text = "{\n  \"customers\": \"oops\"\n}";
        match instance_from_json(text) {
            Err(Error::Parse { line, offset, .. }) => {
                assert_eq!(line, 2);
                assert!(&text[offset.saturating_sub(6)..offset].contains("oops"));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let inst = two_customer_instance();
        let err = cluster_from_json("{\"customers\": [1, 99]}", &inst).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert_eq!(cluster_from_json("{\"customers\": [2]}", &inst).unwrap(), vec![1]);
    }

    #[test]
    fn unknown_window_reference() {
        let text = r#"{"capacity": 10, "speed_kmh": 20, "depot": [0, 0],
            "windows": [{"id": 1, "start_s": 0, "end_s": 10}],
            "customers": [{"id": 1, "x": 1, "y": 1, "window": 7, "weight": 1, "service_s": 1}]}"#;
        assert!(matches!(instance_from_json(text), Err(Error::InvalidInstance(_))));
    }
}
