#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use pipeclimber::design::RobotDesign;
use pipeclimber::netspec::{self, SourceError};
use pipeclimber::pipe::{
    resolve_pipe_spec, PipeNetwork, PipeSegment, PipeSource, Schedule, ScheduleTable, TurnDirection,
};
use proptest::prelude::*;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    fs::read_to_string(fixture(name)).unwrap()
}

pub struct InvalidCase {
    pub name: String,
    pub text: String,
    pub expected: (usize, usize),
}

impl InvalidCase {
    pub fn parse(&self) -> Result<(), SourceError> {
        if self.name.ends_with(".pcr") {
            netspec::parse_design(&self.text).map(|_| ())
        } else {
            netspec::parse_network(&self.text).map(|_| ())
        }
    }
}

/// Every file under `fixtures/invalid`. A leading `# expect L:C` line gives
/// the error position; files without one expect 1:1.
pub fn invalid_corpus() -> Vec<InvalidCase> {
    let mut entries: Vec<_> = fs::read_dir(fixture("invalid"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    entries
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).unwrap();
            let expected = text
                .lines()
                .next()
                .and_then(|l| l.trim_end_matches('\r').strip_prefix("# expect "))
                .map(|pos| {
                    let (l, c) = pos.split_once(':').unwrap();
                    (l.parse().unwrap(), c.parse().unwrap())
                })
                .unwrap_or((1, 1));
            InvalidCase {
                name: path.file_name().unwrap().to_string_lossy().into_owned(),
                text,
                expected,
            }
        })
        .collect()
}

fn finite(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    prop_oneof![
        lo..hi,
        (1u32..2000).prop_map(move |n| (lo + f64::from(n) * 0.25).min(hi))
    ]
}

fn segment(first: bool) -> impl Strategy<Value = PipeSegment> {
    let incline = if first {
        prop::option::of(-90.0..=90.0f64).boxed()
    } else {
        Just(None).boxed()
    };
    prop_oneof![
        (finite(1e-3, 5e3), incline)
            .prop_map(|(length, incline)| PipeSegment::Straight { length, incline }),
        (
            prop_oneof![1e-6..=90.0f64, Just(90.0), Just(45.0)],
            finite(1e-3, 1e4),
            prop_oneof![
                Just(TurnDirection::Up),
                Just(TurnDirection::Down),
                Just(TurnDirection::Left),
                Just(TurnDirection::Right)
            ]
        )
            .prop_map(|(angle, radius, direction)| PipeSegment::Bend {
                angle,
                radius,
                direction
            }),
    ]
}

pub fn network() -> impl Strategy<Value = PipeNetwork> {
    let source = prop_oneof![
        finite(1.0, 2000.0).prop_map(|d| PipeSource::Explicit { inner_diameter: d }),
        (
            prop_oneof![Just("4"), Just("6"), Just("8")],
            prop_oneof![
                Just(Schedule::Sch40),
                Just(Schedule::Sch80),
                Just(Schedule::Sch120)
            ]
        )
            .prop_map(|(nps, schedule)| PipeSource::Standard {
                nps: nps.to_string(),
                schedule
            }),
    ];
    (
        source,
        segment(true),
        prop::collection::vec(segment(false), 0..8),
    )
        .prop_map(|(src, first, rest)| {
            let pipe = resolve_pipe_spec(src, ScheduleTable::builtin()).unwrap();
            let mut segs = vec![first];
            segs.extend(rest);
            PipeNetwork::new(pipe, segs).unwrap()
        })
}

pub fn design() -> impl Strategy<Value = RobotDesign> {
    (
        (
            finite(0.01, 50.0),
            finite(10.0, 1000.0),
            finite(1.0, 500.0),
            0.01..0.99f64,
        ),
        (
            finite(0.1, 500.0),
            0.0..0.2f64,
            0.0..0.99f64,
            0.05..1.0f64,
            0.0..1.0f64,
        ),
        (
            prop::option::of(0.001..0.5f64),
            1u32..40,
            0.0..1.0f64,
            finite(1.0, 300.0),
            1u32..6,
            1u32..8,
        ),
    )
        .prop_map(
            |(
                (mass, length, d_max, dmin_frac),
                (k, x, spacing_frac, mu_k, mu_extra),
                (r_wheel, lugs, contact_frac, lug_radius, modules, springs),
            )| {
                let mut d = RobotDesign::prototype();
                d.mass = mass;
                d.length = length;
                d.d_max = d_max;
                d.d_min = d_max * dmin_frac;
                d.spring_stiffness = k;
                d.preload_compression = x;
                d.spring_spacing = length * spacing_frac;
                d.mu_kinetic = mu_k;
                d.mu_static = (mu_k + mu_extra).min(2.0);
                d.r_wheel = r_wheel;
                d.lug.lug_count = lugs;
                d.lug.min_contact_count = (f64::from(lugs) * contact_frac) as u32;
                d.lug.lug_radius = lug_radius;
                d.n_modules = modules;
                d.springs_per_module = springs;
                d
            },
        )
}
