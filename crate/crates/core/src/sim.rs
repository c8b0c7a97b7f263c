//! Time-stepped quasi-static traversal of a pipe network.
//!
//! The robot centroid advances along the centerline at constant speed. At
//! every step each module's front and rear spring stations (at `s ± σ/2`)
//! get a compression change relative to the vertical-climb preload:
//!
//! ```text
//! δ_k(p) = (D − d_avail(p)) / 2          bend chord squeeze, all modules
//!        + gravity_k(p)                  radial weight on downward modules
//!        − room_k(p)                     tilted-body clearance in the bore
//! ```
//!
//! clamped to the shaft (fully compressed at `d_min`) and bracket (fully
//! extended at `d_max`) limits. `d_avail` follows the bend chord relation
//! with the in-bend extent `L_in` taken as the station's distance to the
//! nearer bend boundary. `room_k` is the extra radial clearance module `k`
//! sees when the body, approximated by the chord of length `L` centred on the
//! station, is tilted by `ψ` against the local pipe axis: the bore section
//! normal to the body is then an ellipse.
//!
//! Every station response depends only on the station's own arc position,
//! so the rear springs replay the front springs `σ / v` seconds later.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bend::{self, BendError, ContactOffset, SpeedPlan, MODULES};
use crate::design::{DesignError, FrictionSign, RobotDesign, DEFAULT_GRAVITY};
use crate::geom::{sin_cos_deg, Vec3};
use crate::pipe::{BendSpan, PathPose, PipeError, PipeNetwork};

/// Longest centroid advance per step, mm.
pub const MAX_STEP_MM: f64 = 5.0;

/// Column header of the trace CSV.
pub const CSV_HEADER: &str = "t,s,seg,m0_front_mm,m0_rear_mm,m1_front_mm,m1_rear_mm,m2_front_mm,m2_rear_mm,m0_N,m1_N,m2_N,m0_slip_N,m1_slip_N,m2_slip_N,g_axial";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Pipe(#[from] PipeError),
    #[error(transparent)]
    Bend(#[from] BendError),
    #[error("invalid {field}: {reason}")]
    Config { field: &'static str, reason: String },
    #[error("segment {segment_index} is not traversable: {reason}")]
    InfeasibleBend {
        segment_index: usize,
        reason: String,
    },
    #[error("pipe bore {diameter} mm is outside the robot diameter range ({d_min}, {d_max}] mm")]
    NoWallContact {
        diameter: f64,
        d_min: f64,
        d_max: f64,
    },
    #[error("simulation supports exactly {MODULES} modules, design has {0}")]
    UnsupportedModuleCount(u32),
}

fn config_err(field: &'static str, reason: impl Into<String>) -> SimError {
    SimError::Config {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Centroid speed along the centerline, mm/s.
    pub velocity: f64,
    /// s.
    pub dt: f64,
    /// Rotation of module 0 away from the first bend's outer side, degrees.
    pub roll: f64,
    pub friction_sign: FrictionSign,
    /// m/s².
    pub gravity: f64,
    pub contact_offset: ContactOffset,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            velocity: 100.0,
            dt: 0.001,
            roll: 0.0,
            friction_sign: FrictionSign::Paper,
            gravity: DEFAULT_GRAVITY,
            contact_offset: ContactOffset::Geometric,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.velocity.is_finite() && self.velocity > 0.0) {
            return Err(config_err(
                "velocity",
                format!("must be > 0, got {}", self.velocity),
            ));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(config_err("dt", format!("must be > 0, got {}", self.dt)));
        }
        if self.velocity * self.dt > MAX_STEP_MM {
            return Err(config_err(
                "dt",
                format!(
                    "step {} mm exceeds the {MAX_STEP_MM} mm bound",
                    self.velocity * self.dt
                ),
            ));
        }
        if !self.roll.is_finite() {
            return Err(config_err("roll", "must be finite"));
        }
        if !(self.gravity.is_finite() && self.gravity >= 0.0) {
            return Err(config_err(
                "gravity",
                format!("must be >= 0, got {}", self.gravity),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Station {
    Front,
    Rear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpringState {
    pub module_id: usize,
    pub station: Station,
    /// mm relative to the vertical-climb preload; positive is further compressed.
    pub compression_delta: f64,
    /// Wall force of the springs at this station, N.
    pub normal_force: f64,
    /// The demanded compression hit the shaft or bracket limit.
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub s: f64,
    pub segment_index: usize,
    /// `[m0 front, m0 rear, m1 front, m1 rear, m2 front, m2 rear]`.
    pub springs: [SpringState; 2 * MODULES],
    /// Per-module wall force, N.
    pub module_normal_force: [f64; MODULES],
    pub slip_margin: [f64; MODULES],
    pub speed_scale: [f64; MODULES],
    pub gravity_axial_component: f64,
    /// Quasi-static tractive effort under the configured friction sign, N.
    pub tractive_effort: f64,
}

impl TraceRow {
    pub fn spring(&self, module: usize, station: Station) -> &SpringState {
        let offset = match station {
            Station::Front => 0,
            Station::Rear => 1,
        };
        &self.springs[2 * module + offset]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraversalTrace {
    pub rows: Vec<TraceRow>,
    pub config: SimConfig,
    pub spring_spacing: f64,
    pub layout: ModuleLayout,
    /// Bend-by-bend speed plans, in path order.
    pub bend_plans: Vec<(BendSpan, SpeedPlan)>,
    pub warnings: Vec<String>,
}

/// Module radial directions in parallel-transported frame coordinates `(up, left)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuleLayout {
    pub coords: [(f64, f64); MODULES],
    /// Frame direction that `roll` is measured from.
    pub reference: (f64, f64),
    pub roll: f64,
}

fn rotate(v: (f64, f64), deg: f64) -> (f64, f64) {
    let (s, c) = sin_cos_deg(deg);
    (c * v.0 + s * v.1, c * v.1 - s * v.0)
}

impl ModuleLayout {
    /// Module 0 at `roll` degrees from `reference`, the others every 120°.
    pub fn from_reference(reference: (f64, f64), roll: f64) -> Self {
        let coords = bend::module_azimuths(roll).map(|az| rotate(reference, az));
        Self {
            coords,
            reference,
            roll,
        }
    }

    /// Roll measured from the outer side of the network's first bend (the
    /// frame's `up` side when there is no bend).
    pub fn for_network(network: &PipeNetwork, roll: f64) -> Self {
        let reference = network
            .bends()
            .next()
            .map(|b| {
                let (u, l) = b.direction.frame_coords();
                (-u, -l)
            })
            .unwrap_or((1.0, 0.0));
        Self::from_reference(reference, roll)
    }

    pub fn directions(&self, pose: &PathPose) -> [Vec3; MODULES] {
        let frame = pose.frame();
        self.coords.map(|(u, l)| frame.radial(u, l))
    }

    /// Roll of module 0 measured from the outer side of `bend`.
    pub fn roll_in(&self, bend: &BendSpan) -> f64 {
        let (u, l) = bend.direction.frame_coords();
        let outward = (-u, -l);
        let quarter = [0.0, 90.0, 180.0, 270.0]
            .into_iter()
            .find(|&q| {
                let r = rotate(self.reference, q);
                (r.0 - outward.0).abs() < 1e-12 && (r.1 - outward.1).abs() < 1e-12
            })
            .expect("bend directions are quarter turns of the frame");
        self.roll - quarter
    }
}

/// Diameter the body can occupy when `l_in` mm of it lies inside a bend.
pub fn diameter_for_in_bend_extent(radius: f64, diameter: f64, l_in: f64) -> f64 {
    let outer = radius + diameter / 2.0;
    (outer * outer - l_in * l_in).max(0.0).sqrt() - (radius - diameter / 2.0)
}

fn available_in(bends: &[BendSpan], diameter: f64, p: f64, span: f64) -> f64 {
    let mut d = diameter;
    for b in bends.iter().filter(|b| b.contains(p)) {
        let l_in = (p - b.s_start).min(b.s_end - p).clamp(0.0, span);
        let floor = bend::min_diameter_bounds(b.radius, diameter, b.angle)
            .map(|bd| bd.d_lower)
            .unwrap_or(0.0);
        let local = diameter_for_in_bend_extent(b.radius, diameter, l_in).clamp(floor, diameter);
        d = d.min(local);
    }
    d
}

/// Local diameter (mm) available to a body of axial extent `span` whose
/// spring station sits at arc position `station_s`.
pub fn available_diameter(
    network: &PipeNetwork,
    station_s: f64,
    span: f64,
) -> Result<f64, SimError> {
    let total = network.total_arc_length();
    if !(station_s >= 0.0 && station_s <= total) {
        return Err(PipeError::OutOfRange {
            s: station_s,
            total,
        }
        .into());
    }
    if !(span.is_finite() && span >= 0.0) {
        return Err(config_err("span", format!("must be >= 0, got {span}")));
    }
    let bends: Vec<BendSpan> = network.bends().collect();
    Ok(available_in(
        &bends,
        network.inner_diameter(),
        station_s,
        span,
    ))
}

/// Radial weight carried by each module at one pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityLoad {
    pub load: [f64; MODULES],
    /// Extra compression each load causes, mm, before any travel limit.
    pub extra_compression: [f64; MODULES],
}

impl GravityLoad {
    /// Compression limited to `max_travel`, with saturation flags.
    pub fn clamped(&self, max_travel: f64) -> ([f64; MODULES], [bool; MODULES]) {
        (
            self.extra_compression.map(|c| c.min(max_travel)),
            self.extra_compression.map(|c| c > max_travel),
        )
    }
}

/// Shares the radial part of the weight among modules whose outward
/// direction points down, in proportion to that projection.
pub fn gravity_load_distribution(
    pose: &PathPose,
    design: &RobotDesign,
    layout: &ModuleLayout,
    gravity: f64,
) -> GravityLoad {
    let dirs = layout.directions(pose);
    gravity_load_for(&dirs, pose.axis_direction, design, gravity)
}

fn gravity_load_for(
    dirs: &[Vec3; MODULES],
    axis: Vec3,
    design: &RobotDesign,
    gravity: f64,
) -> GravityLoad {
    let zero = GravityLoad {
        load: [0.0; MODULES],
        extra_compression: [0.0; MODULES],
    };
    let g = Vec3::UP * -gravity;
    let radial = g - axis * g.dot(axis);
    let magnitude = radial.norm();
    if magnitude < 1e-12 {
        return zero;
    }
    let down = radial * (1.0 / magnitude);
    let weights = dirs.map(|u| u.dot(down).max(0.0));
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return zero;
    }
    let load = weights.map(|w| design.mass * magnitude * w / sum);
    let per_module_rate = f64::from(design.springs_per_module) * design.spring_stiffness;
    GravityLoad {
        load,
        extra_compression: load.map(|l| 1000.0 * l / per_module_rate),
    }
}

/// Extra radial room (mm) for each module when the body chord centred on the
/// station is tilted against the local pipe axis.
fn tilt_room(
    network: &PipeNetwork,
    pose: &PathPose,
    dirs: &[Vec3; MODULES],
    span: f64,
    diameter: f64,
) -> [f64; MODULES] {
    let behind = network.pose_extended(pose.s - span / 2.0).position;
    let ahead = network.pose_extended(pose.s + span / 2.0).position;
    let axis = pose.axis_direction;
    let Some(body) = (ahead - behind).normalized() else {
        return [0.0; MODULES];
    };
    if axis.dot(body) >= 1.0 - 1e-15 {
        return [0.0; MODULES];
    }
    let half = diameter / 2.0;
    dirs.map(|u| {
        let Some(e) = (u - body * u.dot(body)).normalized() else {
            return 0.0;
        };
        let along = e.dot(axis);
        let denom = (1.0 - along * along).max(1e-12);
        half / denom.sqrt() - half
    })
}

struct Model<'a> {
    network: &'a PipeNetwork,
    design: &'a RobotDesign,
    cfg: SimConfig,
    layout: ModuleLayout,
    bends: Vec<BendSpan>,
    plans: Vec<SpeedPlan>,
    diameter: f64,
    /// Allowed δ range: bracket (negative) to shaft (positive) limit.
    delta_min: f64,
    delta_max: f64,
}

struct StationResponse {
    delta: [f64; MODULES],
    saturated: [bool; MODULES],
}

impl<'a> Model<'a> {
    fn new(
        network: &'a PipeNetwork,
        design: &'a RobotDesign,
        cfg: SimConfig,
    ) -> Result<Self, SimError> {
        design.validate()?;
        cfg.validate()?;
        if design.n_modules as usize != MODULES {
            return Err(SimError::UnsupportedModuleCount(design.n_modules));
        }
        let diameter = network.inner_diameter();
        if !(diameter > design.d_min && diameter <= design.d_max) {
            return Err(SimError::NoWallContact {
                diameter,
                d_min: design.d_min,
                d_max: design.d_max,
            });
        }
        let layout = ModuleLayout::for_network(network, cfg.roll);
        let bends: Vec<BendSpan> = network.bends().collect();
        let mut plans = Vec::with_capacity(bends.len());
        for b in &bends {
            let bounds = bend::min_diameter_bounds(b.radius, diameter, b.angle)?;
            if !(design.d_min > bounds.d_lower && design.d_min < bounds.d_upper) {
                return Err(SimError::InfeasibleBend {
                    segment_index: b.segment_index,
                    reason: format!(
                        "robot minimum diameter {} mm outside ({:.2}, {:.2}) mm",
                        design.d_min, bounds.d_lower, bounds.d_upper
                    ),
                });
            }
            let segment = &network.segments()[b.segment_index];
            let plan = bend::speed_plan(segment, design, layout.roll_in(b), cfg.contact_offset)
                .map_err(|e| SimError::InfeasibleBend {
                    segment_index: b.segment_index,
                    reason: e.to_string(),
                })?;
            plans.push(plan);
        }
        Ok(Self {
            network,
            design,
            cfg,
            layout,
            bends,
            plans,
            diameter,
            delta_min: -(design.d_max - diameter) / 2.0,
            delta_max: (diameter - design.d_min) / 2.0,
        })
    }

    fn length_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for b in &self.bends {
            match bend::max_length(b.radius, self.diameter, self.design.d_min) {
                Ok(l_max) if self.design.length > l_max => out.push(format!(
                    "segment {}: body length {} mm exceeds the chord bound {:.2} mm",
                    b.segment_index, self.design.length, l_max
                )),
                Ok(_) => {}
                Err(e) => out.push(format!("segment {}: {e}", b.segment_index)),
            }
        }
        out
    }

    fn station(&self, p: f64) -> StationResponse {
        let pose = self.network.pose_extended(p);
        let dirs = self.layout.directions(&pose);
        let span = self.design.length;
        let squeeze = (self.diameter - available_in(&self.bends, self.diameter, p, span)) / 2.0;
        let gravity = gravity_load_for(&dirs, pose.axis_direction, self.design, self.cfg.gravity);
        let room = tilt_room(self.network, &pose, &dirs, span, self.diameter);
        let mut delta = [0.0; MODULES];
        let mut saturated = [false; MODULES];
        for k in 0..MODULES {
            let raw = squeeze + gravity.extra_compression[k] - room[k];
            saturated[k] = raw > self.delta_max || raw < self.delta_min;
            delta[k] = raw.clamp(self.delta_min, self.delta_max);
        }
        StationResponse { delta, saturated }
    }

    fn plan_at(&self, s: f64) -> [f64; MODULES] {
        self.bends
            .iter()
            .zip(&self.plans)
            .find(|(b, _)| b.contains(s))
            .map(|(_, p)| p.per_module_speed_scale)
            .unwrap_or([1.0; MODULES])
    }

    fn row(&self, i: usize) -> TraceRow {
        let d = self.design;
        let t = i as f64 * self.cfg.dt;
        let s = self.cfg.velocity * t;
        let half = d.spring_spacing / 2.0;
        let front = self.station(s + half);
        let rear = self.station(s - half);
        let per_station = f64::from(d.springs_per_module) / 2.0;
        let force = |delta: f64| {
            per_station * d.spring_stiffness * (d.preload_compression + delta / 1000.0)
        };

        let springs: [SpringState; 2 * MODULES] = std::array::from_fn(|j| {
            let k = j / 2;
            let (resp, station) = if j % 2 == 0 {
                (&front, Station::Front)
            } else {
                (&rear, Station::Rear)
            };
            SpringState {
                module_id: k,
                station,
                compression_delta: resp.delta[k],
                normal_force: force(resp.delta[k]),
                saturated: resp.saturated[k],
            }
        });
        let module_normal_force: [f64; MODULES] =
            std::array::from_fn(|k| springs[2 * k].normal_force + springs[2 * k + 1].normal_force);

        let pose = self.network.pose_extended(s);
        let g_axial = pose.gravity_axial_component;
        let hold = d.mass * self.cfg.gravity * g_axial.abs();
        let speed_scale = self.plan_at(s);
        let scale_sum: f64 = speed_scale.iter().sum();
        let slip_margin: [f64; MODULES] = std::array::from_fn(|k| {
            d.mu_static * module_normal_force[k] - hold * speed_scale[k] / scale_sum
        });
        let friction = d.mu_kinetic * module_normal_force.iter().sum::<f64>();
        let tractive_effort =
            d.mass * self.cfg.gravity * g_axial + self.cfg.friction_sign.factor() * friction;

        TraceRow {
            t,
            s,
            segment_index: self
                .network
                .segment_at(s.min(self.network.total_arc_length())),
            springs,
            module_normal_force,
            slip_margin,
            speed_scale,
            gravity_axial_component: g_axial,
            tractive_effort,
        }
    }
}

/// Number of trace rows for a network length and step.
pub fn row_count(total_arc_length: f64, velocity: f64, dt: f64) -> usize {
    let steps = (total_arc_length / (velocity * dt) - 1e-9).ceil().max(0.0);
    steps as usize + 1
}

/// Runs the traversal from `s = 0` until the centroid has covered the network.
pub fn simulate(
    network: &PipeNetwork,
    design: &RobotDesign,
    cfg: &SimConfig,
) -> Result<TraversalTrace, SimError> {
    let model = Model::new(network, design, *cfg)?;
    let n = row_count(network.total_arc_length(), cfg.velocity, cfg.dt);
    let rows: Vec<TraceRow> = (0..n).map(|i| model.row(i)).collect();
    let mut warnings = model.length_warnings();
    if let Some(row) = rows.iter().find(|r| r.slip_margin.iter().any(|&m| m < 0.0)) {
        let count = rows
            .iter()
            .filter(|r| r.slip_margin.iter().any(|&m| m < 0.0))
            .count();
        warnings.push(format!(
            "negative slip margin on {count} of {} steps, first at t = {:.3} s",
            rows.len(),
            row.t
        ));
    }
    let saturated = rows
        .iter()
        .flat_map(|r| r.springs.iter())
        .filter(|sp| sp.saturated)
        .count();
    if saturated > 0 {
        warnings.push(format!("{saturated} spring samples hit a travel limit"));
    }
    Ok(TraversalTrace {
        rows,
        config: *cfg,
        spring_spacing: design.spring_spacing,
        layout: model.layout,
        bend_plans: model.bends.into_iter().zip(model.plans).collect(),
        warnings,
    })
}

fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

impl TraversalTrace {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        let mut line = String::with_capacity(200);
        for r in &self.rows {
            line.clear();
            line.push_str(&fmt6(r.t));
            line.push(',');
            line.push_str(&fmt6(r.s));
            line.push(',');
            line.push_str(&r.segment_index.to_string());
            let values = r
                .springs
                .iter()
                .map(|sp| sp.compression_delta)
                .chain(r.module_normal_force)
                .chain(r.slip_margin)
                .chain(std::iter::once(r.gravity_axial_component));
            for v in values {
                line.push(',');
                line.push_str(&fmt6(v));
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is ascii")
    }

    pub fn min_slip_margin(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.slip_margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_compression(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.springs.iter().map(|s| s.compression_delta))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn saturation_events(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.springs.iter())
            .filter(|s| s.saturated)
            .count()
    }

    fn station_mean(&self, row: &TraceRow, station: Station) -> f64 {
        (0..MODULES)
            .map(|k| row.spring(k, station).compression_delta)
            .sum::<f64>()
            / MODULES as f64
    }

    fn first_reach(&self, station: Station, fraction: f64) -> Option<f64> {
        let series: Vec<f64> = self
            .rows
            .iter()
            .map(|r| self.station_mean(r, station))
            .collect();
        let peak = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if peak.is_nan() || peak <= 1e-9 {
            return None;
        }
        series
            .iter()
            .position(|&v| v >= fraction * peak)
            .map(|i| self.rows[i].t)
    }

    pub fn summarize(&self) -> SimSummary {
        let front90 = self.first_reach(Station::Front, 0.9);
        let rear90 = self.first_reach(Station::Rear, 0.9);
        let delay = match (front90, rear90) {
            (Some(f), Some(r)) => Some(r - f),
            _ => None,
        };

        let half = self.spring_spacing / 2.0;
        let expansion = self.bend_plans.first().and_then(|(b, _)| {
            let expanded = |r: &TraceRow| {
                r.s + half > b.s_end
                    && (0..MODULES).any(|k| r.spring(k, Station::Front).compression_delta < -1e-9)
            };
            let start = self.rows.iter().position(expanded)?;
            let len = self.rows[start..]
                .iter()
                .take_while(|r| expanded(r))
                .count();
            Some((self.rows[start].t, self.rows[start + len - 1].t))
        });

        let last = self.rows.last().expect("trace has rows");
        let final_compression: [f64; MODULES] = std::array::from_fn(|k| {
            (last.spring(k, Station::Front).compression_delta
                + last.spring(k, Station::Rear).compression_delta)
                / 2.0
        });
        let outer_module = self.bend_plans.last().map(|(_, p)| p.outer_module());

        let mut peak_front = [f64::NEG_INFINITY; MODULES];
        let mut peak_rear = [f64::NEG_INFINITY; MODULES];
        for r in &self.rows {
            for k in 0..MODULES {
                peak_front[k] = peak_front[k].max(r.spring(k, Station::Front).compression_delta);
                peak_rear[k] = peak_rear[k].max(r.spring(k, Station::Rear).compression_delta);
            }
        }
        let peak_tractive_effort = self
            .rows
            .iter()
            .map(|r| r.tractive_effort)
            .fold(f64::NEG_INFINITY, f64::max);

        SimSummary {
            rows: self.rows.len(),
            duration: last.t,
            min_slip_margin: self.min_slip_margin(),
            slip_detected: self.min_slip_margin() < 0.0,
            peak_front_compression: peak_front,
            peak_rear_compression: peak_rear,
            max_compression: self.max_compression(),
            saturation_events: self.saturation_events(),
            rear_front_delay: delay,
            front_expansion_after_exit: expansion,
            final_compression,
            outer_module,
            peak_tractive_effort,
            warnings: self.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub rows: usize,
    /// s.
    pub duration: f64,
    /// N.
    pub min_slip_margin: f64,
    pub slip_detected: bool,
    pub peak_front_compression: [f64; MODULES],
    pub peak_rear_compression: [f64; MODULES],
    pub max_compression: f64,
    pub saturation_events: usize,
    /// Time from the front springs to the rear springs first reaching 90% of
    /// their peak (module mean), s. `None` when nothing compresses.
    pub rear_front_delay: Option<f64>,
    /// First interval `[t0, t1]` after the front springs leave the first bend
    /// during which any front spring is extended past preload.
    pub front_expansion_after_exit: Option<(f64, f64)>,
    /// Mean of front and rear compression at the last step, per module.
    pub final_compression: [f64; MODULES],
    /// Module on the longest path of the last bend.
    pub outer_module: Option<usize>,
    pub peak_tractive_effort: f64,
    pub warnings: Vec<String>,
}

impl SimSummary {
    pub fn to_text(&self) -> String {
        let arr = |a: &[f64; MODULES]| {
            a.iter()
                .map(|v| format!("{v:.4}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::new();
        out.push_str(&format!("rows = {}\n", self.rows));
        out.push_str(&format!("duration_s = {:.3}\n", self.duration));
        out.push_str(&format!(
            "min_slip_margin_N = {:.4}\n",
            self.min_slip_margin
        ));
        out.push_str(&format!("slip_detected = {}\n", self.slip_detected));
        out.push_str(&format!(
            "peak_front_mm = {}\n",
            arr(&self.peak_front_compression)
        ));
        out.push_str(&format!(
            "peak_rear_mm = {}\n",
            arr(&self.peak_rear_compression)
        ));
        out.push_str(&format!(
            "max_compression_mm = {:.4}\n",
            self.max_compression
        ));
        out.push_str(&format!("saturation_events = {}\n", self.saturation_events));
        match self.rear_front_delay {
            Some(d) => out.push_str(&format!("rear_front_delay_s = {d:.3}\n")),
            None => out.push_str("rear_front_delay_s = n/a\n"),
        }
        match self.front_expansion_after_exit {
            Some((a, b)) => out.push_str(&format!("front_expansion_s = {a:.3}..{b:.3}\n")),
            None => out.push_str("front_expansion_s = none\n"),
        }
        out.push_str(&format!(
            "final_compression_mm = {}\n",
            arr(&self.final_compression)
        ));
        match self.outer_module {
            Some(m) => out.push_str(&format!("outer_module = {m}\n")),
            None => out.push_str("outer_module = n/a\n"),
        }
        out.push_str(&format!(
            "peak_tractive_effort_N = {:.4}\n",
            self.peak_tractive_effort
        ));
        for w in &self.warnings {
            out.push_str(&format!("warning = {w}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// `lo:hi:step` stiffness grid, N/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl StiffnessRange {
    pub fn validate(&self) -> Result<(), SimError> {
        let StiffnessRange { lo, hi, step } = *self;
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(config_err("stiffness", "bounds must be finite"));
        }
        if !(lo > 0.0 && lo < hi) {
            return Err(config_err(
                "stiffness",
                format!("need 0 < lo < hi, got {lo}:{hi}"),
            ));
        }
        if step <= 0.0 {
            return Err(config_err(
                "stiffness",
                format!("step must be > 0, got {step}"),
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let k = self.lo + f64::from(i) * self.step;
            if k > self.hi + 1e-9 * self.hi.abs() {
                break;
            }
            out.push(k);
            i += 1;
        }
        out
    }
}

impl std::str::FromStr for StiffnessRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:step, got `{s}`"));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{p}` is not a number"))
        };
        Ok(StiffnessRange {
            lo: num(parts[0])?,
            hi: num(parts[1])?,
            step: num(parts[2])?,
        })
    }
}

impl Default for StiffnessRange {
    fn default() -> Self {
        Self {
            lo: 16.0,
            hi: 26.0,
            step: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub stiffness: f64,
    pub min_slip_margin: f64,
    pub max_compression: f64,
    pub saturation_events: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    /// Index of the lowest stiffness whose minimum slip margin is >= 0.
    pub first_feasible: Option<usize>,
}

impl SweepSummary {
    pub fn to_text(&self) -> String {
        let mut out = String::from(
            "K_s_N_per_m,min_slip_N,max_compression_mm,saturation_events,first_feasible\n",
        );
        for (i, r) in self.rows.iter().enumerate() {
            out.push_str(&format!(
                "{:.4},{},{},{},{}\n",
                r.stiffness,
                fmt6(r.min_slip_margin),
                fmt6(r.max_compression),
                r.saturation_events,
                if self.first_feasible == Some(i) {
                    "*"
                } else {
                    ""
                }
            ));
        }
        out
    }
}

/// Simulates one traversal per stiffness value; rows come back in grid order.
pub fn sweep_stiffness(
    network: &PipeNetwork,
    design: &RobotDesign,
    cfg: &SimConfig,
    range: &StiffnessRange,
) -> Result<SweepSummary, SimError> {
    range.validate()?;
    let rows = range
        .values()
        .into_par_iter()
        .map(|k| {
            let d = RobotDesign {
                spring_stiffness: k,
                ..design.clone()
            };
            let trace = simulate(network, &d, cfg)?;
            Ok(SweepRow {
                stiffness: k,
                min_slip_margin: trace.min_slip_margin(),
                max_compression: trace.max_compression(),
                saturation_events: trace.saturation_events(),
            })
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    let first_feasible = rows.iter().position(|r| r.min_slip_margin >= 0.0);
    Ok(SweepSummary {
        rows,
        first_feasible,
    })
}
