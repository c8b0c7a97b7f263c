//! Planar bend geometry: diameter and length bounds for passing a bend, and
//! the per-track speed plan that lets all three tracks cross it without slip.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::{reference, RobotDesign};
use crate::geom::sin_cos_deg;
use crate::pipe::PipeSegment;

/// Number of track modules the speed planner and simulator handle.
pub const MODULES: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BendError {
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("infeasible geometry: {0}")]
    InfeasibleGeometry(String),
    #[error("module path radius {radius:.3} mm is not positive (bend radius {bend_radius} mm too tight for contact offset {offset:.3} mm)")]
    DegeneratePath {
        radius: f64,
        bend_radius: f64,
        offset: f64,
    },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> BendError {
    BendError::Invalid {
        field,
        reason: reason.into(),
    }
}

fn positive(field: &'static str, v: f64) -> Result<(), BendError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(
            field,
            format!("must be a positive number, got {v}"),
        ))
    }
}

fn bend_angle(angle: f64) -> Result<(), BendError> {
    if angle.is_finite() && angle > 0.0 && angle <= 90.0 {
        Ok(())
    } else {
        Err(invalid(
            "angle",
            format!("must be in (0, 90] degrees, got {angle}"),
        ))
    }
}

/// Admissible band for the robot's minimum diameter in one bend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterBounds {
    /// mm; 0 when the bend imposes no lower bound.
    pub d_lower: f64,
    /// mm; always the pipe bore.
    pub d_upper: f64,
    /// The unclamped lower bound was negative.
    pub lower_clamped: bool,
    /// Angle other than 90°, computed with the half-angle form.
    pub extension: bool,
}

/// `(R + D/2)·sin(θ/2) − (R − D/2) < d < D`.
pub fn min_diameter_bounds(
    radius: f64,
    diameter: f64,
    angle: f64,
) -> Result<DiameterBounds, BendError> {
    positive("R", radius)?;
    positive("D", diameter)?;
    bend_angle(angle)?;
    let (half_sin, _) = sin_cos_deg(angle / 2.0);
    let raw = (radius + diameter / 2.0) * half_sin - (radius - diameter / 2.0);
    Ok(DiameterBounds {
        d_lower: raw.max(0.0),
        d_upper: diameter,
        lower_clamped: raw < 0.0,
        extension: angle != 90.0,
    })
}

/// Longest rigid body of minimum diameter `d` that fits the bend chord, mm.
pub fn max_length(radius: f64, diameter: f64, d: f64) -> Result<f64, BendError> {
    positive("R", radius)?;
    positive("D", diameter)?;
    positive("d", d)?;
    let outer = radius + diameter / 2.0;
    let inner = radius - diameter / 2.0 + d;
    let radicand = outer * outer - inner * inner;
    if radicand < -1e-12 * outer * outer {
        return Err(BendError::InfeasibleGeometry(format!(
            "robot diameter {d} mm does not fit a bend of radius {radius} mm in a {diameter} mm pipe"
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Pass/fail verdict for one bend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BendFeasibility {
    pub d_lower: f64,
    pub d_upper: f64,
    #[serde(rename = "L_max")]
    pub l_max: Option<f64>,
    /// `None` unless both the robot diameter and length were supplied.
    pub feasible: Option<bool>,
    pub lower_clamped: bool,
    pub extension: bool,
    pub notes: Vec<String>,
}

impl BendFeasibility {
    /// Fixed-order text block.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "d_lower = {:.2} mm\nd_upper = {:.2} mm\n",
            self.d_lower, self.d_upper
        );
        match self.l_max {
            Some(l) => out.push_str(&format!("L_max = {l:.2} mm\n")),
            None => out.push_str("L_max = n/a\n"),
        }
        match self.feasible {
            Some(f) => out.push_str(&format!("feasible = {f}\n")),
            None => out.push_str("feasible = n/a\n"),
        }
        for n in &self.notes {
            out.push_str(&format!("note = {n}\n"));
        }
        out
    }
}

/// Combines the diameter band and length bound for a robot of minimum
/// diameter `d` and body `length`.
pub fn check_bend(
    radius: f64,
    diameter: f64,
    angle: f64,
    d: Option<f64>,
    length: Option<f64>,
) -> Result<BendFeasibility, BendError> {
    let bounds = min_diameter_bounds(radius, diameter, angle)?;
    if let Some(len) = length {
        positive("length", len)?;
    }
    let mut notes = Vec::new();
    if bounds.extension {
        notes.push(format!(
            "extension: bounds for a {angle} degree bend use the half-angle generalization"
        ));
    }
    if bounds.lower_clamped {
        notes.push("bend imposes no lower bound on the robot diameter".to_string());
    }
    let l_max = match d {
        Some(d) => match max_length(radius, diameter, d) {
            Ok(l) => Some(l),
            Err(BendError::InfeasibleGeometry(msg)) => {
                notes.push(msg);
                None
            }
            Err(e) => return Err(e),
        },
        None => None,
    };
    if let (Some(d), Some(l)) = (d, l_max) {
        if reference::matches(radius, reference::BEND_RADIUS_MM)
            && reference::matches(diameter, reference::PIPE_DIAMETER_MM)
            && reference::matches(d, reference::D_MIN_MM)
            && angle == 90.0
        {
            notes.push(format!(
                "L_max {:.2} mm differs from the published prototype length {} mm",
                l,
                reference::LENGTH_MM
            ));
        }
    }
    let feasible = match (d, length) {
        (Some(d), Some(len)) => {
            Some(d > bounds.d_lower && d < bounds.d_upper && l_max.is_some_and(|l| len <= l))
        }
        _ => None,
    };
    Ok(BendFeasibility {
        d_lower: bounds.d_lower,
        d_upper: bounds.d_upper,
        l_max,
        feasible,
        lower_clamped: bounds.lower_clamped,
        extension: bounds.extension,
        notes,
    })
}

/// Azimuths of the three modules in degrees, measured from the bend's outer
/// side (away from the bend centre).
pub fn module_azimuths(roll: f64) -> [f64; MODULES] {
    let step = 360.0 / MODULES as f64;
    std::array::from_fn(|k| roll + step * k as f64)
}

/// Centerline-relative path radius of each module's contact in a bend.
///
/// Module `k` sits at azimuth `roll + 120°·k`; its path radius is
/// `R + ρ_k·cos(azimuth)`, with `ρ_k` the outer offset on the outer half of
/// the section and the inner offset on the inner half.
pub fn module_path_radii(
    radius: f64,
    contact_outer: f64,
    contact_inner: f64,
    roll: f64,
) -> Result<[f64; MODULES], BendError> {
    positive("R", radius)?;
    for (field, v) in [
        ("contact_radius_outer", contact_outer),
        ("contact_radius_inner", contact_inner),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(invalid(field, format!("must be >= 0, got {v}")));
        }
    }
    if !roll.is_finite() {
        return Err(invalid("roll", "must be finite"));
    }
    Ok(module_azimuths(roll).map(|az| {
        let (_, c) = sin_cos_deg(az);
        let rho = if c >= 0.0 {
            contact_outer
        } else {
            contact_inner
        };
        radius + rho * c
    }))
}

/// Contact offset that makes the outer/inner path radius ratio equal `ratio`.
pub fn calibrate_contact_offset(radius: f64, ratio: f64, roll: f64) -> Result<f64, BendError> {
    positive("R", radius)?;
    if !(ratio.is_finite() && ratio >= 1.0) {
        return Err(invalid(
            "calibrate_ratio",
            format!("must be >= 1, got {ratio}"),
        ));
    }
    let cosines = module_azimuths(roll).map(|az| sin_cos_deg(az).1);
    let c_max = cosines.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c_min = cosines.iter().copied().fold(f64::INFINITY, f64::min);
    let denom = c_max - ratio * c_min;
    if denom <= 0.0 {
        return Err(invalid(
            "calibrate_ratio",
            format!("ratio {ratio} unreachable at roll {roll} degrees"),
        ));
    }
    Ok(radius * (ratio - 1.0) / denom)
}

/// How the contact offset for path radii is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ContactOffset {
    /// Half the robot's minimum diameter (fully compressed in a tight bend).
    #[default]
    Geometric,
    /// Back-solved so the outer/inner ratio equals the given value.
    CalibratedRatio(f64),
    /// A fixed offset in mm.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedPlan {
    /// `None` on straight segments.
    pub per_module_path_radius: Option<[f64; MODULES]>,
    pub per_module_speed_scale: [f64; MODULES],
    pub reference_ratio_outer_to_inner: f64,
    /// Contact offset used, mm.
    pub contact_offset: Option<f64>,
}

impl SpeedPlan {
    pub fn straight() -> Self {
        Self {
            per_module_path_radius: None,
            per_module_speed_scale: [1.0; MODULES],
            reference_ratio_outer_to_inner: 1.0,
            contact_offset: None,
        }
    }

    /// Builds scales from path radii: proportional, normalized to max 1.
    pub fn from_radii(radii: [f64; MODULES], contact_offset: Option<f64>) -> Self {
        let max = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = radii.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            per_module_path_radius: Some(radii),
            per_module_speed_scale: radii.map(|r| r / max),
            reference_ratio_outer_to_inner: max / min,
            contact_offset,
        }
    }

    /// Index of the module on the longest path.
    pub fn outer_module(&self) -> usize {
        argmax(&self.per_module_speed_scale)
    }

    /// Index of the module on the shortest path.
    pub fn inner_module(&self) -> usize {
        argmax(&self.per_module_speed_scale.map(|s| -s))
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Per-track speed scaling for one segment.
pub fn speed_plan(
    segment: &PipeSegment,
    design: &RobotDesign,
    roll: f64,
    offset: ContactOffset,
) -> Result<SpeedPlan, BendError> {
    let radius = match *segment {
        PipeSegment::Straight { .. } => return Ok(SpeedPlan::straight()),
        PipeSegment::Bend { radius, .. } => radius,
    };
    let rho = match offset {
        ContactOffset::Geometric => design.d_min / 2.0,
        ContactOffset::CalibratedRatio(r) => calibrate_contact_offset(radius, r, roll)?,
        ContactOffset::Fixed(rho) => rho,
    };
    let radii = module_path_radii(radius, rho, rho, roll)?;
    if let Some(&bad) = radii.iter().find(|&&r| r <= 0.0) {
        return Err(BendError::DegeneratePath {
            radius: bad,
            bend_radius: radius,
            offset: rho,
        });
    }
    Ok(SpeedPlan::from_radii(radii, Some(rho)))
}
