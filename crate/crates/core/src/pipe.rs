//! Pipe cross-sections and pipe networks.
//!
//! A network is an ordered chain of straight runs and planar circular bends,
//! parametrized by centerline arc length `s` in millimetres. Orientation is
//! carried in a parallel-transported frame `(axis, up, left)`: bends rotate
//! the axis toward one of the two frame normals and never twist the frame.
//!
//! World frame: `z` is up. The first segment's axis lies in the `x`–`z` plane
//! at its incline above horizontal; its `up` normal is the in-plane
//! perpendicular (for a vertical start that is `-x`) and `left` is `+y`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{sin_cos_deg, Vec3};

/// Environment variable naming an alternate schedule table file.
pub const SCHEDULE_TABLE_ENV: &str = "PIPECLIMBER_SCHEDULE_TABLE";

/// Incline used when the first segment does not state one: a vertical climb.
pub const DEFAULT_INCLINE_DEG: f64 = 90.0;

const BUILTIN_TABLE: &str = include_str!("../data/schedules.txt");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipeError {
    #[error("no schedule table entry for NPS {nps} schedule {schedule}")]
    UnknownSchedule { nps: String, schedule: Schedule },
    #[error("inner diameter must be positive, got {0} mm")]
    InvalidDiameter(f64),
    #[error("invalid segment {index}: {reason}")]
    InvalidSegment { index: usize, reason: String },
    #[error("a pipe network needs at least one segment")]
    EmptyNetwork,
    #[error("arc position {s} mm outside network [0, {total}] mm")]
    OutOfRange { s: f64, total: f64 },
    #[error("segment index {index} out of range (network has {len} segments)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("schedule table line {line}: {message}")]
    TableFormat { line: usize, message: String },
    #[error("cannot read schedule table {path}: {message}")]
    TableIo { path: String, message: String },
}

/// Wall-thickness class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Schedule {
    #[serde(rename = "40")]
    Sch40,
    #[serde(rename = "80")]
    Sch80,
    #[serde(rename = "120")]
    Sch120,
}

impl Schedule {
    pub fn number(self) -> u32 {
        match self {
            Schedule::Sch40 => 40,
            Schedule::Sch80 => 80,
            Schedule::Sch120 => 120,
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Schedule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "40" => Ok(Schedule::Sch40),
            "80" => Ok(Schedule::Sch80),
            "120" => Ok(Schedule::Sch120),
            other => Err(format!("schedule must be 40, 80 or 120, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleRow {
    pub nps: String,
    pub schedule: Schedule,
    pub od_mm: f64,
    pub wall_mm: f64,
}

impl ScheduleRow {
    pub fn inner_diameter(&self) -> f64 {
        self.od_mm - 2.0 * self.wall_mm
    }
}

/// Pipe dimension table: `nps schedule od_mm wall_mm` rows, `#` comments.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleTable {
    rows: Vec<ScheduleRow>,
}

impl ScheduleTable {
    pub fn parse(text: &str) -> Result<Self, PipeError> {
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| PipeError::TableFormat {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(bad(format!("expected 4 fields, found {}", fields.len())));
            }
            let schedule: Schedule = fields[1].parse().map_err(bad)?;
            let num = |s: &str, what: &str| -> Result<f64, PipeError> {
                match s.parse::<f64>() {
                    Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
                    _ => Err(bad(format!("{what} must be a positive number, got `{s}`"))),
                }
            };
            let od_mm = num(fields[2], "od_mm")?;
            let wall_mm = num(fields[3], "wall_mm")?;
            if 2.0 * wall_mm >= od_mm {
                return Err(bad(format!(
                    "wall {wall_mm} mm leaves no bore in od {od_mm} mm"
                )));
            }
            let nps = fields[0].to_string();
            if rows
                .iter()
                .any(|r: &ScheduleRow| r.nps == nps && r.schedule == schedule)
            {
                return Err(bad(format!(
                    "duplicate entry NPS {nps} schedule {schedule}"
                )));
            }
            rows.push(ScheduleRow {
                nps,
                schedule,
                od_mm,
                wall_mm,
            });
        }
        Ok(Self { rows })
    }

    /// The table shipped with the crate.
    pub fn builtin() -> &'static ScheduleTable {
        static TABLE: OnceLock<ScheduleTable> = OnceLock::new();
        TABLE.get_or_init(|| ScheduleTable::parse(BUILTIN_TABLE).expect("builtin schedule table"))
    }

    /// Loads the table named by `PIPECLIMBER_SCHEDULE_TABLE`, or the builtin one.
    pub fn from_env() -> Result<ScheduleTable, PipeError> {
        match std::env::var_os(SCHEDULE_TABLE_ENV) {
            Some(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| PipeError::TableIo {
                    path: path.to_string_lossy().into_owned(),
                    message: e.to_string(),
                })?;
                ScheduleTable::parse(&text)
            }
            None => Ok(ScheduleTable::builtin().clone()),
        }
    }

    pub fn rows(&self) -> &[ScheduleRow] {
        &self.rows
    }

    pub fn lookup(&self, nps: &str, schedule: Schedule) -> Option<&ScheduleRow> {
        self.rows
            .iter()
            .find(|r| r.nps == nps && r.schedule == schedule)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PipeSource {
    Standard { nps: String, schedule: Schedule },
    Explicit { inner_diameter: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipeSpec {
    pub source: PipeSource,
    /// Resolved bore, mm.
    pub inner_diameter: f64,
    pub outer_diameter: Option<f64>,
}

pub fn resolve_pipe_spec(source: PipeSource, table: &ScheduleTable) -> Result<PipeSpec, PipeError> {
    match source {
        PipeSource::Explicit { inner_diameter } => {
            if !(inner_diameter.is_finite() && inner_diameter > 0.0) {
                return Err(PipeError::InvalidDiameter(inner_diameter));
            }
            Ok(PipeSpec {
                source,
                inner_diameter,
                outer_diameter: None,
            })
        }
        PipeSource::Standard { ref nps, schedule } => {
            let row = table
                .lookup(nps, schedule)
                .ok_or_else(|| PipeError::UnknownSchedule {
                    nps: nps.clone(),
                    schedule,
                })?;
            let (inner_diameter, od) = (row.inner_diameter(), row.od_mm);
            Ok(PipeSpec {
                source,
                inner_diameter,
                outer_diameter: Some(od),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnDirection {
    Up,
    Down,
    Left,
    Right,
}

impl TurnDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            TurnDirection::Up => "up",
            TurnDirection::Down => "down",
            TurnDirection::Left => "left",
            TurnDirection::Right => "right",
        }
    }

    /// Direction toward the bend centre in frame coordinates `(up, left)`.
    pub fn frame_coords(self) -> (f64, f64) {
        match self {
            TurnDirection::Up => (1.0, 0.0),
            TurnDirection::Down => (-1.0, 0.0),
            TurnDirection::Left => (0.0, 1.0),
            TurnDirection::Right => (0.0, -1.0),
        }
    }
}

impl fmt::Display for TurnDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TurnDirection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "up" => Ok(TurnDirection::Up),
            "down" => Ok(TurnDirection::Down),
            "left" => Ok(TurnDirection::Left),
            "right" => Ok(TurnDirection::Right),
            other => Err(format!(
                "direction must be up, down, left or right, got `{other}`"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PipeSegment {
    /// `incline` (degrees above horizontal) is only meaningful on the first segment.
    Straight { length: f64, incline: Option<f64> },
    Bend {
        angle: f64,
        radius: f64,
        direction: TurnDirection,
    },
}

impl PipeSegment {
    /// Centerline arc length, mm.
    pub fn arc_length(&self) -> f64 {
        match *self {
            PipeSegment::Straight { length, .. } => length,
            PipeSegment::Bend { angle, radius, .. } => radius * angle.to_radians(),
        }
    }

    pub fn is_bend(&self) -> bool {
        matches!(self, PipeSegment::Bend { .. })
    }

    fn validate(&self, index: usize) -> Result<(), PipeError> {
        let bad = |reason: String| Err(PipeError::InvalidSegment { index, reason });
        match *self {
            PipeSegment::Straight { length, incline } => {
                if !(length.is_finite() && length > 0.0) {
                    return bad(format!("straight length must be > 0, got {length}"));
                }
                if let Some(inc) = incline {
                    if index != 0 {
                        return bad("incline is only allowed on the first segment".into());
                    }
                    if !(inc.is_finite() && (-90.0..=90.0).contains(&inc)) {
                        return bad(format!("incline must be in [-90, 90] degrees, got {inc}"));
                    }
                }
            }
            PipeSegment::Bend { angle, radius, .. } => {
                if !(angle.is_finite() && angle > 0.0 && angle <= 90.0) {
                    return bad(format!(
                        "bend angle must be in (0, 90] degrees, got {angle}"
                    ));
                }
                if !(radius.is_finite() && radius > 0.0) {
                    return bad(format!("bend radius must be > 0, got {radius}"));
                }
            }
        }
        Ok(())
    }
}

/// Parallel-transported frame plus centerline position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Frame {
    pub position: Vec3,
    pub axis: Vec3,
    pub up: Vec3,
    pub left: Vec3,
}

impl Frame {
    fn initial(incline_deg: f64) -> Frame {
        let (s, c) = sin_cos_deg(incline_deg);
        Frame {
            position: Vec3::ZERO,
            axis: Vec3::new(c, 0.0, s),
            up: Vec3::new(-s, 0.0, c),
            left: Vec3::new(0.0, 1.0, 0.0),
        }
    }

    /// Unit vector with frame coordinates `(a_up, a_left)`.
    pub fn radial(&self, a_up: f64, a_left: f64) -> Vec3 {
        self.up * a_up + self.left * a_left
    }

    fn advance_straight(&self, distance: f64) -> Frame {
        Frame {
            position: self.position + self.axis * distance,
            ..*self
        }
    }

    /// Frame after turning `(sin, cos)` of the swept angle along a bend of `radius`.
    fn advance_bend(&self, radius: f64, direction: TurnDirection, sin: f64, cos: f64) -> Frame {
        let (a_up, a_left) = direction.frame_coords();
        let toward = self.radial(a_up, a_left);
        let centre = self.position + toward * radius;
        let axis = self.axis * cos + toward * sin;
        let toward_now = toward * cos - self.axis * sin;
        let position = centre - toward_now * radius;
        let (up, left) = match direction {
            TurnDirection::Up => (toward_now, self.left),
            TurnDirection::Down => (-toward_now, self.left),
            TurnDirection::Left => (self.up, toward_now),
            TurnDirection::Right => (self.up, -toward_now),
        };
        Frame {
            position,
            axis,
            up,
            left,
        }
    }
}

/// Pose of the centerline at one arc position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPose {
    pub s: f64,
    pub segment_index: usize,
    pub axis_direction: Vec3,
    /// Frame normals, parallel-transported from the network start.
    pub up: Vec3,
    pub left: Vec3,
    pub position: Vec3,
    /// `axis · world_up`: 1 climbing vertically, 0 horizontal, −1 descending.
    pub gravity_axial_component: f64,
}

impl PathPose {
    fn from_frame(s: f64, segment_index: usize, f: Frame) -> PathPose {
        PathPose {
            s,
            segment_index,
            axis_direction: f.axis,
            up: f.up,
            left: f.left,
            position: f.position,
            gravity_axial_component: f.axis.dot(Vec3::UP).clamp(-1.0, 1.0),
        }
    }

    pub(crate) fn frame(&self) -> Frame {
        Frame {
            position: self.position,
            axis: self.axis_direction,
            up: self.up,
            left: self.left,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipeNetwork {
    pipe: PipeSpec,
    segments: Vec<PipeSegment>,
    total_arc_length: f64,
    starts: Vec<f64>,
    frames: Vec<Frame>,
    end_frame: Frame,
}

impl PipeNetwork {
    pub fn new(pipe: PipeSpec, segments: Vec<PipeSegment>) -> Result<Self, PipeError> {
        if !(pipe.inner_diameter.is_finite() && pipe.inner_diameter > 0.0) {
            return Err(PipeError::InvalidDiameter(pipe.inner_diameter));
        }
        if segments.is_empty() {
            return Err(PipeError::EmptyNetwork);
        }
        for (i, seg) in segments.iter().enumerate() {
            seg.validate(i)?;
        }
        let incline = match segments[0] {
            PipeSegment::Straight {
                incline: Some(inc), ..
            } => inc,
            _ => DEFAULT_INCLINE_DEG,
        };
        let mut frame = Frame::initial(incline);
        let mut s = 0.0;
        let mut starts = Vec::with_capacity(segments.len());
        let mut frames = Vec::with_capacity(segments.len());
        for seg in &segments {
            starts.push(s);
            frames.push(frame);
            frame = match *seg {
                PipeSegment::Straight { length, .. } => frame.advance_straight(length),
                PipeSegment::Bend {
                    angle,
                    radius,
                    direction,
                } => {
                    let (sin, cos) = sin_cos_deg(angle);
                    frame.advance_bend(radius, direction, sin, cos)
                }
            };
            s += seg.arc_length();
        }
        Ok(Self {
            pipe,
            segments,
            total_arc_length: s,
            starts,
            frames,
            end_frame: frame,
        })
    }

    pub fn pipe(&self) -> &PipeSpec {
        &self.pipe
    }

    pub fn inner_diameter(&self) -> f64 {
        self.pipe.inner_diameter
    }

    pub fn segments(&self) -> &[PipeSegment] {
        &self.segments
    }

    pub fn total_arc_length(&self) -> f64 {
        self.total_arc_length
    }

    /// Arc-length interval `[s_start, s_end]` of one segment.
    pub fn arc_bounds(&self, index: usize) -> Result<(f64, f64), PipeError> {
        let seg = self.segments.get(index).ok_or(PipeError::IndexOutOfRange {
            index,
            len: self.segments.len(),
        })?;
        let start = self.starts[index];
        let end = if index + 1 < self.starts.len() {
            self.starts[index + 1]
        } else {
            self.total_arc_length
        };
        debug_assert!((end - start - seg.arc_length()).abs() <= 1e-9 * end.abs().max(1.0));
        Ok((start, end))
    }

    /// Index of the segment containing `s` (joints belong to the later segment).
    pub fn segment_at(&self, s: f64) -> usize {
        self.starts.partition_point(|&st| st <= s).saturating_sub(1)
    }

    pub fn pose_at(&self, s: f64) -> Result<PathPose, PipeError> {
        if !(s >= 0.0 && s <= self.total_arc_length) {
            return Err(PipeError::OutOfRange {
                s,
                total: self.total_arc_length,
            });
        }
        Ok(self.pose_extended(s))
    }

    /// Like [`pose_at`](Self::pose_at) but continues the end tangents as straight
    /// lines for `s` outside the network.
    pub fn pose_extended(&self, s: f64) -> PathPose {
        if s < 0.0 {
            return PathPose::from_frame(s, 0, self.frames[0].advance_straight(s));
        }
        if s >= self.total_arc_length {
            let last = self.segments.len() - 1;
            let over = s - self.total_arc_length;
            return PathPose::from_frame(s, last, self.end_frame.advance_straight(over));
        }
        let i = self.segment_at(s);
        let local = s - self.starts[i];
        let start = &self.frames[i];
        let frame = match self.segments[i] {
            PipeSegment::Straight { .. } => start.advance_straight(local),
            PipeSegment::Bend {
                radius, direction, ..
            } => {
                let (sin, cos) = (local / radius).sin_cos();
                start.advance_bend(radius, direction, sin, cos)
            }
        };
        PathPose::from_frame(s, i, frame)
    }

    /// Bends in path order.
    pub fn bends(&self) -> impl Iterator<Item = BendSpan> + '_ {
        self.segments
            .iter()
            .enumerate()
            .filter_map(move |(i, seg)| match *seg {
                PipeSegment::Bend {
                    angle,
                    radius,
                    direction,
                } => {
                    let (s_start, s_end) = self.arc_bounds(i).expect("index in range");
                    Some(BendSpan {
                        segment_index: i,
                        s_start,
                        s_end,
                        angle,
                        radius,
                        direction,
                    })
                }
                PipeSegment::Straight { .. } => None,
            })
    }
}

/// A bend located on its network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendSpan {
    pub segment_index: usize,
    pub s_start: f64,
    pub s_end: f64,
    pub angle: f64,
    pub radius: f64,
    pub direction: TurnDirection,
}

impl BendSpan {
    pub fn contains(&self, s: f64) -> bool {
        s >= self.s_start && s <= self.s_end
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn explicit(d: f64) -> PipeSpec {
        resolve_pipe_spec(
            PipeSource::Explicit { inner_diameter: d },
            ScheduleTable::builtin(),
        )
        .unwrap()
    }

    fn straight(length: f64, incline: Option<f64>) -> PipeSegment {
        PipeSegment::Straight { length, incline }
    }

    fn bend(angle: f64, direction: TurnDirection) -> PipeSegment {
        PipeSegment::Bend {
            angle,
            radius: 90.0,
            direction,
        }
    }

    #[test]
    fn explicit_diameter_resolves() {
        assert_eq!(explicit(160.0).inner_diameter, 160.0);
        let err = resolve_pipe_spec(
            PipeSource::Explicit {
                inner_diameter: 0.0,
            },
            ScheduleTable::builtin(),
        );
        assert_eq!(err, Err(PipeError::InvalidDiameter(0.0)));
    }

    #[test]
    fn nps6_schedules_match_od_minus_two_walls() {
        let table = ScheduleTable::builtin();
        let spec = resolve_pipe_spec(
            PipeSource::Standard {
                nps: "6".into(),
                schedule: Schedule::Sch40,
            },
            table,
        )
        .unwrap();
        // 6.625 in OD, 0.280 in wall.
        assert!((spec.inner_diameter - 154.051).abs() < 1e-9);
        assert_eq!(spec.outer_diameter, Some(168.275));
        for row in table.rows() {
            assert!((row.inner_diameter() - (row.od_mm - 2.0 * row.wall_mm)).abs() < 1e-12);
        }
        let ids: Vec<f64> = [Schedule::Sch40, Schedule::Sch80, Schedule::Sch120]
            .iter()
            .map(|&s| table.lookup("6", s).unwrap().inner_diameter())
            .collect();
        assert!(ids[0] > ids[1] && ids[1] > ids[2]);
    }

    #[test]
    fn unknown_schedule_names_the_pair() {
        let err = resolve_pipe_spec(
            PipeSource::Standard {
                nps: "7".into(),
                schedule: Schedule::Sch80,
            },
            ScheduleTable::builtin(),
        )
        .unwrap_err();
        assert_eq!(
            err.to_string(),
            "no schedule table entry for NPS 7 schedule 80"
        );
    }

    #[test]
    fn table_rejects_malformed_rows() {
        assert!(matches!(
            ScheduleTable::parse("6 40 168.275"),
            Err(PipeError::TableFormat { line: 1, .. })
        ));
        assert!(matches!(
            ScheduleTable::parse("# c\n6 60 168.275 7.1"),
            Err(PipeError::TableFormat { line: 2, .. })
        ));
        assert!(matches!(
            ScheduleTable::parse("6 40 10 5"),
            Err(PipeError::TableFormat { line: 1, .. })
        ));
    }

    #[test]
    fn arc_bounds_of_bends_and_straights() {
        let net = PipeNetwork::new(
            explicit(160.0),
            vec![
                straight(500.0, Some(90.0)),
                bend(90.0, TurnDirection::Left),
                PipeSegment::Bend {
                    angle: 45.0,
                    radius: 90.0,
                    direction: TurnDirection::Up,
                },
            ],
        )
        .unwrap();
        let (a, b) = net.arc_bounds(0).unwrap();
        assert_eq!((a, b), (0.0, 500.0));
        let (a, b) = net.arc_bounds(1).unwrap();
        assert!((b - a - 141.3716694115407).abs() < 1e-9);
        let (a, b) = net.arc_bounds(2).unwrap();
        assert!((b - a - 70.68583470577035).abs() < 1e-9);
        assert_eq!(
            net.arc_bounds(3),
            Err(PipeError::IndexOutOfRange { index: 3, len: 3 })
        );
    }

    #[test]
    fn vertical_and_horizontal_gravity_components() {
        let up = PipeNetwork::new(explicit(160.0), vec![straight(500.0, Some(90.0))]).unwrap();
        for s in [0.0, 17.3, 250.0, 500.0] {
            assert_eq!(up.pose_at(s).unwrap().gravity_axial_component, 1.0);
        }
        let flat = PipeNetwork::new(explicit(160.0), vec![straight(500.0, Some(0.0))]).unwrap();
        assert_eq!(flat.pose_at(123.0).unwrap().gravity_axial_component, 0.0);
    }

    #[test]
    fn mid_bend_gravity_is_cos_45() {
        for dir in [
            TurnDirection::Up,
            TurnDirection::Down,
            TurnDirection::Left,
            TurnDirection::Right,
        ] {
            let net = PipeNetwork::new(
                explicit(160.0),
                vec![
                    straight(500.0, Some(90.0)),
                    bend(90.0, dir),
                    straight(300.0, None),
                ],
            )
            .unwrap();
            let (a, b) = net.arc_bounds(1).unwrap();
            let pose = net.pose_at(0.5 * (a + b)).unwrap();
            assert!(
                (pose.gravity_axial_component - 0.5f64.sqrt()).abs() < 1e-12,
                "{dir}"
            );
            assert_eq!(pose.segment_index, 1);
            let after = net.pose_at(b + 10.0).unwrap();
            assert!(after.gravity_axial_component.abs() < 1e-15);
        }
    }

    #[test]
    fn bend_geometry_lands_on_quarter_circle() {
        let net = PipeNetwork::new(
            explicit(160.0),
            vec![straight(100.0, Some(90.0)), bend(90.0, TurnDirection::Left)],
        )
        .unwrap();
        let end = net.pose_at(net.total_arc_length()).unwrap();
        // Start (0,0,100), centre (0,90,100): end at (0,90,190) heading +y.
        assert!((end.position - Vec3::new(0.0, 90.0, 190.0)).norm() < 1e-9);
        assert!((end.axis_direction - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-12);
        // Bend-centre side ends up pointing down.
        assert!((end.left - Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn pose_out_of_range_is_an_error() {
        let net = PipeNetwork::new(explicit(160.0), vec![straight(10.0, None)]).unwrap();
        assert!(net.pose_at(-0.1).is_err());
        assert!(net.pose_at(10.1).is_err());
        assert!(net.pose_at(f64::NAN).is_err());
        assert!(net.pose_at(10.0).is_ok());
    }

    #[test]
    fn segment_validation() {
        let pipe = explicit(160.0);
        assert_eq!(
            PipeNetwork::new(pipe.clone(), vec![]),
            Err(PipeError::EmptyNetwork)
        );
        assert!(PipeNetwork::new(pipe.clone(), vec![straight(0.0, None)]).is_err());
        assert!(PipeNetwork::new(pipe.clone(), vec![bend(120.0, TurnDirection::Up)]).is_err());
        assert!(PipeNetwork::new(pipe.clone(), vec![bend(0.0, TurnDirection::Up)]).is_err());
        let err = PipeNetwork::new(pipe, vec![straight(10.0, None), straight(10.0, Some(0.0))])
            .unwrap_err();
        assert!(matches!(err, PipeError::InvalidSegment { index: 1, .. }));
    }
}
