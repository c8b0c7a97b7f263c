//! Static and quasi-static force balances for spring and motor sizing.
//!
//! Units follow the robot description: forces in newtons, stiffness in N/m,
//! preload compression and wheel radius in metres, body dimensions in mm.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Standard gravity used when the caller does not override it, m/s².
pub const DEFAULT_GRAVITY: f64 = 9.81;

/// Published prototype values used for discrepancy notes.
pub mod reference {
    pub const MASS_KG: f64 = 0.470;
    pub const PRELOAD_M: f64 = 0.026;
    pub const MU: f64 = 0.7;
    pub const STIFFNESS_N_PER_M: f64 = 18.06;
    pub const TORQUE_NM: f64 = 0.23;
    pub const LENGTH_MM: f64 = 150.0;
    pub const D_MAX_MM: f64 = 163.33;
    pub const D_MIN_MM: f64 = 129.54;
    pub const BEND_RADIUS_MM: f64 = 90.0;
    pub const PIPE_DIAMETER_MM: f64 = 160.0;
    /// Selected motor torque, N·m.
    pub const MOTOR_TORQUE_NM: f64 = 0.88;
    /// Relative difference above which a discrepancy note is emitted.
    pub const NOTE_THRESHOLD: f64 = 0.05;

    pub(crate) fn matches(value: f64, reference: f64) -> bool {
        (value - reference).abs() <= 1e-9 * reference.abs().max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("static hold is infeasible: {0}")]
    InfeasibleHold(String),
    #[error("wheel radius (r_wheel_m) is required to compute motor torque")]
    MissingWheelRadius,
}

fn invalid(field: &'static str, reason: impl Into<String>) -> DesignError {
    DesignError::Invalid {
        field,
        reason: reason.into(),
    }
}

fn check_finite(field: &'static str, v: f64) -> Result<(), DesignError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite, got {v}")))
    }
}

fn check_non_negative(field: &'static str, v: f64) -> Result<(), DesignError> {
    check_finite(field, v)?;
    if v < 0.0 {
        return Err(invalid(field, format!("must be >= 0, got {v}")));
    }
    Ok(())
}

fn check_positive(field: &'static str, v: f64) -> Result<(), DesignError> {
    check_finite(field, v)?;
    if v <= 0.0 {
        return Err(invalid(field, format!("must be > 0, got {v}")));
    }
    Ok(())
}

fn check_counts(n_modules: u32, springs_per_module: u32) -> Result<(), DesignError> {
    if n_modules == 0 {
        return Err(invalid("n_modules", "must be >= 1"));
    }
    if springs_per_module == 0 {
        return Err(invalid("springs_per_module", "must be >= 1"));
    }
    Ok(())
}

/// Track lug geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LugSpec {
    pub lug_count: u32,
    pub min_contact_count: u32,
    pub lug_radius: f64,
}

impl Default for LugSpec {
    fn default() -> Self {
        Self {
            lug_count: 22,
            min_contact_count: 9,
            lug_radius: 80.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorSpec {
    /// N·m.
    pub stall_torque: f64,
    /// RPM.
    pub rated_speed: f64,
    pub gear_ratio: f64,
}

impl MotorSpec {
    /// Gearmotor with the given torque and the prototype's 35 RPM, 1000:1 gearing.
    pub fn with_torque(stall_torque: f64) -> Self {
        Self {
            stall_torque,
            rated_speed: 35.0,
            gear_ratio: 1000.0,
        }
    }

    pub fn validate(&self) -> Result<(), DesignError> {
        check_positive("stall_torque", self.stall_torque)?;
        check_positive("rated_speed", self.rated_speed)?;
        check_positive("gear_ratio", self.gear_ratio)
    }
}

/// Robot description. Diameters and lengths in mm, stiffness in N/m,
/// preload and wheel radius in m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotDesign {
    pub mass: f64,
    pub length: f64,
    pub d_max: f64,
    pub d_min: f64,
    pub n_modules: u32,
    pub springs_per_module: u32,
    pub spring_stiffness: f64,
    pub preload_compression: f64,
    /// Axial distance between front and rear spring stations, mm.
    pub spring_spacing: f64,
    pub mu_static: f64,
    pub mu_kinetic: f64,
    pub r_wheel: Option<f64>,
    pub lug: LugSpec,
}

impl RobotDesign {
    /// The published prototype. The wheel radius was never published and is left unset.
    pub fn prototype() -> Self {
        Self {
            mass: reference::MASS_KG,
            length: reference::LENGTH_MM,
            d_max: reference::D_MAX_MM,
            d_min: reference::D_MIN_MM,
            n_modules: 3,
            springs_per_module: 4,
            spring_stiffness: reference::STIFFNESS_N_PER_M,
            preload_compression: reference::PRELOAD_M,
            spring_spacing: 30.0,
            mu_static: reference::MU,
            mu_kinetic: reference::MU,
            r_wheel: None,
            lug: LugSpec::default(),
        }
    }

    /// Radial travel available to each module, mm.
    pub fn max_travel(&self) -> f64 {
        (self.d_max - self.d_min) / 2.0
    }

    pub fn validate(&self) -> Result<(), DesignError> {
        check_positive("mass", self.mass)?;
        check_positive("length", self.length)?;
        check_positive("d_min", self.d_min)?;
        check_positive("d_max", self.d_max)?;
        if self.d_min >= self.d_max {
            return Err(invalid(
                "d_min",
                format!(
                    "d_min ({}) must be below d_max ({})",
                    self.d_min, self.d_max
                ),
            ));
        }
        check_counts(self.n_modules, self.springs_per_module)?;
        check_positive("spring_stiffness", self.spring_stiffness)?;
        check_non_negative("preload_compression", self.preload_compression)?;
        check_non_negative("spring_spacing", self.spring_spacing)?;
        if self.spring_spacing >= self.length {
            return Err(invalid(
                "spring_spacing",
                format!(
                    "spacing ({}) must be below length ({})",
                    self.spring_spacing, self.length
                ),
            ));
        }
        check_positive("mu_kinetic", self.mu_kinetic)?;
        check_positive("mu_static", self.mu_static)?;
        if self.mu_kinetic > self.mu_static {
            return Err(invalid(
                "mu_static",
                format!(
                    "mu_s ({}) must be >= mu_k ({})",
                    self.mu_static, self.mu_kinetic
                ),
            ));
        }
        if self.mu_static > 2.0 {
            return Err(invalid(
                "mu_static",
                format!("must be <= 2, got {}", self.mu_static),
            ));
        }
        if let Some(r) = self.r_wheel {
            check_positive("r_wheel", r)?;
        }
        if self.lug.min_contact_count > self.lug.lug_count {
            return Err(invalid(
                "lug",
                format!(
                    "contact count ({}) exceeds lug count ({})",
                    self.lug.min_contact_count, self.lug.lug_count
                ),
            ));
        }
        check_positive("lug_radius", self.lug.lug_radius)
    }

    /// Springs pressing on the wall across all modules.
    pub fn total_springs(&self) -> f64 {
        f64::from(self.n_modules) * f64::from(self.springs_per_module)
    }
}

/// Minimum spring stiffness (N/m) that holds the robot in a vertical pipe
/// on static friction: `n_modules·springs_per_module·μ_s·K_s·x = m·g`.
pub fn required_stiffness(
    mass: f64,
    preload: f64,
    mu_static: f64,
    gravity: f64,
    n_modules: u32,
    springs_per_module: u32,
) -> Result<f64, DesignError> {
    check_non_negative("mass", mass)?;
    check_non_negative("preload_compression", preload)?;
    check_non_negative("mu_static", mu_static)?;
    check_non_negative("gravity", gravity)?;
    check_counts(n_modules, springs_per_module)?;
    if preload == 0.0 {
        return Err(DesignError::InfeasibleHold(
            "zero preload produces no normal force".into(),
        ));
    }
    if mu_static == 0.0 {
        return Err(DesignError::InfeasibleHold(
            "zero static friction cannot hold the robot".into(),
        ));
    }
    let springs = f64::from(n_modules) * f64::from(springs_per_module);
    Ok(mass * gravity / (springs * mu_static * preload))
}

/// Total wall normal force, N.
pub fn normal_force(
    stiffness: f64,
    preload: f64,
    n_modules: u32,
    springs_per_module: u32,
) -> Result<f64, DesignError> {
    check_non_negative("spring_stiffness", stiffness)?;
    check_non_negative("preload_compression", preload)?;
    check_counts(n_modules, springs_per_module)?;
    Ok(f64::from(n_modules) * f64::from(springs_per_module) * stiffness * preload)
}

pub fn rolling_resistance(normal: f64, c_r: f64) -> Result<f64, DesignError> {
    check_non_negative("normal_force", normal)?;
    check_non_negative("c_r", c_r)?;
    Ok(normal * c_r)
}

pub fn sliding_friction(
    mu_kinetic: f64,
    stiffness: f64,
    preload: f64,
    n_modules: u32,
    springs_per_module: u32,
) -> Result<f64, DesignError> {
    check_non_negative("mu_kinetic", mu_kinetic)?;
    Ok(mu_kinetic * normal_force(stiffness, preload, n_modules, springs_per_module)?)
}

/// How wall friction enters the tractive effort balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrictionSign {
    /// `TTE = RR + m·a − f + m·g`, the published balance.
    #[default]
    Paper,
    /// `TTE = RR + m·a + f + m·g`: friction opposes the climb.
    Physical,
}

impl FrictionSign {
    pub fn factor(self) -> f64 {
        match self {
            FrictionSign::Paper => -1.0,
            FrictionSign::Physical => 1.0,
        }
    }

    pub fn other(self) -> FrictionSign {
        match self {
            FrictionSign::Paper => FrictionSign::Physical,
            FrictionSign::Physical => FrictionSign::Paper,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FrictionSign::Paper => "paper",
            FrictionSign::Physical => "physical",
        }
    }
}

impl std::str::FromStr for FrictionSign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(FrictionSign::Paper),
            "physical" => Ok(FrictionSign::Physical),
            other => Err(format!(
                "friction sign must be `paper` or `physical`, got `{other}`"
            )),
        }
    }
}

/// Total tractive effort for a vertical climb, N.
pub fn tractive_effort(
    mass: f64,
    accel: f64,
    gravity: f64,
    friction: f64,
    rolling: f64,
    sign: FrictionSign,
) -> Result<f64, DesignError> {
    for (field, v) in [
        ("mass", mass),
        ("acceleration", accel),
        ("gravity", gravity),
        ("friction", friction),
        ("rolling_resistance", rolling),
    ] {
        check_finite(field, v)?;
    }
    Ok(rolling + mass * accel + sign.factor() * friction + mass * gravity)
}

/// Total drive torque, N·m.
pub fn motor_torque(tractive: f64, r_wheel: f64) -> Result<f64, DesignError> {
    check_finite("tractive_effort", tractive)?;
    check_positive("r_wheel", r_wheel)?;
    Ok(tractive * r_wheel)
}

/// Inputs to [`design_report`] beyond the robot itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportParams {
    pub gravity: f64,
    pub accel: f64,
    pub c_r: f64,
    pub safety_factor: f64,
    pub friction_sign: FrictionSign,
    pub motor: MotorSpec,
}

impl Default for ReportParams {
    fn default() -> Self {
        Self {
            gravity: DEFAULT_GRAVITY,
            accel: 0.0,
            c_r: 0.0,
            safety_factor: 2.0,
            friction_sign: FrictionSign::Paper,
            motor: MotorSpec::with_torque(reference::MOTOR_TORQUE_NM),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    #[serde(rename = "N")]
    pub normal_force_total: f64,
    #[serde(rename = "RR")]
    pub rolling_resistance: f64,
    #[serde(rename = "f")]
    pub sliding_friction: f64,
    #[serde(rename = "F_a")]
    pub inertial_force: f64,
    #[serde(rename = "TTE")]
    pub tractive_effort: f64,
    /// Tractive effort under the other friction sign convention.
    #[serde(rename = "TTE_alternate")]
    pub tractive_effort_alternate: f64,
    #[serde(rename = "tau_total")]
    pub required_torque: Option<f64>,
    #[serde(rename = "tau_per_motor")]
    pub required_torque_per_motor: Option<f64>,
    #[serde(rename = "tau_total_alternate")]
    pub required_torque_alternate: Option<f64>,
    #[serde(rename = "K_s_required")]
    pub required_stiffness: f64,
    pub torque_ok: bool,
    pub friction_sign: FrictionSign,
    pub safety_factor_applied: f64,
    pub motor_torque: f64,
    pub r_wheel: Option<f64>,
    #[serde(rename = "g")]
    pub gravity: f64,
    #[serde(rename = "a")]
    pub acceleration: f64,
    #[serde(rename = "notes")]
    pub discrepancy_notes: Vec<String>,
}

fn relative_gap(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}

/// Runs the full stiffness and torque chain for a design.
pub fn design_report(
    design: &RobotDesign,
    params: &ReportParams,
) -> Result<DesignReport, DesignError> {
    design.validate()?;
    params.motor.validate()?;
    check_positive("gravity", params.gravity)?;
    check_finite("acceleration", params.accel)?;
    check_non_negative("c_r", params.c_r)?;
    check_positive("safety_factor", params.safety_factor)?;

    let (k, x) = (design.spring_stiffness, design.preload_compression);
    let (nm, sp) = (design.n_modules, design.springs_per_module);
    let normal = normal_force(k, x, nm, sp)?;
    let rolling = rolling_resistance(normal, params.c_r)?;
    let friction = sliding_friction(design.mu_kinetic, k, x, nm, sp)?;
    let inertial = design.mass * params.accel;
    let sign = params.friction_sign;
    let tte = tractive_effort(
        design.mass,
        params.accel,
        params.gravity,
        friction,
        rolling,
        sign,
    )?;
    let tte_alt = tractive_effort(
        design.mass,
        params.accel,
        params.gravity,
        friction,
        rolling,
        sign.other(),
    )?;
    let k_required = required_stiffness(design.mass, x, design.mu_static, params.gravity, nm, sp)?;

    let mut notes = Vec::new();
    let (torque, torque_alt) = match design.r_wheel {
        Some(r) => (Some(motor_torque(tte, r)?), Some(motor_torque(tte_alt, r)?)),
        None => {
            notes.push("r_wheel_m not provided; motor torque was not computed".to_string());
            (None, None)
        }
    };
    let per_motor = torque.map(|t| t / f64::from(nm));
    let torque_ok = per_motor
        .map(|t| params.motor.stall_torque >= params.safety_factor * t)
        .unwrap_or(false);

    let reference_inputs = reference::matches(design.mass, reference::MASS_KG)
        && reference::matches(x, reference::PRELOAD_M);
    if reference_inputs && reference::matches(design.mu_static, reference::MU) {
        let gap = relative_gap(k_required, reference::STIFFNESS_N_PER_M);
        if gap > reference::NOTE_THRESHOLD {
            notes.push(format!(
                "required stiffness {:.2} N/m differs from the published {:.2} N/m by {:.1}%",
                k_required,
                reference::STIFFNESS_N_PER_M,
                100.0 * gap
            ));
        }
    }
    if reference_inputs
        && reference::matches(design.mu_kinetic, reference::MU)
        && reference::matches(k, reference::STIFFNESS_N_PER_M)
    {
        if let Some(t) = torque {
            let gap = relative_gap(t, reference::TORQUE_NM);
            if gap > reference::NOTE_THRESHOLD {
                notes.push(format!(
                    "total torque {:.4} N·m differs from the published {:.2} N·m by {:.1}% \
                     ({} friction sign, r_wheel {} m)",
                    t,
                    reference::TORQUE_NM,
                    100.0 * gap,
                    sign.as_str(),
                    design.r_wheel.unwrap_or(f64::NAN)
                ));
            }
        }
    }

    Ok(DesignReport {
        normal_force_total: normal,
        rolling_resistance: rolling,
        sliding_friction: friction,
        inertial_force: inertial,
        tractive_effort: tte,
        tractive_effort_alternate: tte_alt,
        required_torque: torque,
        required_torque_per_motor: per_motor,
        required_torque_alternate: torque_alt,
        required_stiffness: k_required,
        torque_ok,
        friction_sign: sign,
        safety_factor_applied: params.safety_factor,
        motor_torque: params.motor.stall_torque,
        r_wheel: design.r_wheel,
        gravity: params.gravity,
        acceleration: params.accel,
        discrepancy_notes: notes,
    })
}

impl DesignReport {
    /// Flat `key = value` rendering in a fixed order.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>, prec: usize| match v {
            Some(v) => format!("{v:.prec$}"),
            None => "n/a".to_string(),
        };
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("N", format!("{:.4}", self.normal_force_total));
        kv("RR", format!("{:.4}", self.rolling_resistance));
        kv("f", format!("{:.4}", self.sliding_friction));
        kv("F_a", format!("{:.4}", self.inertial_force));
        kv("TTE", format!("{:.4}", self.tractive_effort));
        kv(
            "TTE_alternate",
            format!("{:.4}", self.tractive_effort_alternate),
        );
        kv("tau_total", opt(self.required_torque, 4));
        kv("tau_per_motor", opt(self.required_torque_per_motor, 4));
        kv(
            "tau_total_alternate",
            opt(self.required_torque_alternate, 4),
        );
        kv("K_s_required", format!("{:.2}", self.required_stiffness));
        kv("torque_ok", self.torque_ok.to_string());
        kv("friction_sign", self.friction_sign.as_str().to_string());
        kv("safety_factor", format!("{}", self.safety_factor_applied));
        kv("motor_torque", format!("{}", self.motor_torque));
        kv("r_wheel", opt(self.r_wheel, 4));
        kv("g", format!("{}", self.gravity));
        kv("a", format!("{}", self.acceleration));
        for note in &self.discrepancy_notes {
            kv("note", note.clone());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: f64 = 9.81;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn stiffness_for_prototype_inputs() {
        let k = required_stiffness(0.470, 0.026, 0.7, G, 3, 4).unwrap();
        assert!(close(k, 21.111263736, 1e-6), "{k}");
        assert_eq!(required_stiffness(0.0, 0.026, 0.7, G, 3, 4).unwrap(), 0.0);
        let k2 = required_stiffness(0.470, 0.026, 1.4, G, 3, 4).unwrap();
        assert!(close(k2 * 2.0, k, 1e-12));
    }

    #[test]
    fn stiffness_rejects_zero_preload_or_friction() {
        assert!(matches!(
            required_stiffness(0.47, 0.0, 0.7, G, 3, 4),
            Err(DesignError::InfeasibleHold(_))
        ));
        assert!(matches!(
            required_stiffness(0.47, 0.026, 0.0, G, 3, 4),
            Err(DesignError::InfeasibleHold(_))
        ));
        assert!(required_stiffness(0.47, 0.026, 0.7, G, 0, 4).is_err());
    }

    #[test]
    fn normal_force_examples() {
        assert!(close(
            normal_force(18.06, 0.026, 3, 4).unwrap(),
            5.63472,
            1e-9
        ));
        assert_eq!(normal_force(42.0, 0.0, 3, 4).unwrap(), 0.0);
        let n = normal_force(21.11, 0.026, 3, 4).unwrap();
        assert!(close(n, 6.58632, 1e-9));
        assert!(close(0.7 * n, 0.470 * G, 2e-3));
    }

    #[test]
    fn rolling_resistance_examples() {
        assert_eq!(rolling_resistance(5.635, 0.0).unwrap(), 0.0);
        assert!(close(
            rolling_resistance(5.635, 0.01).unwrap(),
            0.05635,
            1e-12
        ));
        assert_eq!(rolling_resistance(0.0, 3.0).unwrap(), 0.0);
        assert!(rolling_resistance(-1.0, 0.0).is_err());
    }

    #[test]
    fn friction_and_tractive_effort() {
        let f = sliding_friction(0.7, 18.06, 0.026, 3, 4).unwrap();
        assert!(close(f, 3.944304, 1e-9));
        assert_eq!(sliding_friction(0.0, 18.06, 0.026, 3, 4).unwrap(), 0.0);
        let f2 = sliding_friction(0.7, 21.11, 0.026, 3, 4).unwrap();
        assert!(close(f2, 4.610424, 1e-9));

        let paper = tractive_effort(0.470, 0.0, G, f, 0.0, FrictionSign::Paper).unwrap();
        assert!(close(paper, 0.666396, 1e-9));
        let bare = tractive_effort(0.470, 0.0, G, 0.0, 0.0, FrictionSign::Paper).unwrap();
        assert_eq!(bare, 0.470 * G);
        let phys = tractive_effort(0.470, 0.0, G, f, 0.0, FrictionSign::Physical).unwrap();
        assert!(close(phys, 8.555004, 1e-9));
    }

    #[test]
    fn torque_examples() {
        assert!(close(motor_torque(0.666, 0.020).unwrap(), 0.01332, 1e-12));
        assert_eq!(motor_torque(0.0, 0.05).unwrap(), 0.0);
        assert!(close(motor_torque(8.555, 0.027).unwrap(), 0.230985, 1e-9));
        assert!(motor_torque(1.0, 0.0).is_err());
        assert!(motor_torque(1.0, -0.1).is_err());
    }

    #[test]
    fn report_for_prototype_notes_stiffness_gap() {
        let mut design = RobotDesign::prototype();
        design.r_wheel = Some(0.027);
        let report = design_report(&design, &ReportParams::default()).unwrap();
        assert!(close(report.required_stiffness, 21.1113, 1e-4));
        assert!(report.discrepancy_notes.iter().any(|n| n.contains("18.06")));
        assert!(report.torque_ok);
        assert!(close(report.normal_force_total, 5.63472, 1e-9));
        let tau = report.required_torque.unwrap();
        assert!(close(tau, 0.666396 * 0.027, 1e-9));
        assert!(close(
            report.required_torque_per_motor.unwrap(),
            tau / 3.0,
            1e-15
        ));
        assert!(close(
            report.required_torque_alternate.unwrap(),
            8.555004 * 0.027,
            1e-9
        ));
    }

    #[test]
    fn torque_ok_against_safety_factor() {
        // Choose a wheel radius so the per-motor torque is 0.08 N·m.
        let mut design = RobotDesign::prototype();
        let tte = 8.555004;
        design.r_wheel = Some(0.08 * 3.0 / tte);
        let params = ReportParams {
            friction_sign: FrictionSign::Physical,
            ..ReportParams::default()
        };
        let report = design_report(&design, &params).unwrap();
        assert!(close(report.required_torque_per_motor.unwrap(), 0.08, 1e-6));
        assert!(report.torque_ok);
        let strict = ReportParams {
            safety_factor: 12.0,
            ..params
        };
        assert!(!design_report(&design, &strict).unwrap().torque_ok);
    }

    #[test]
    fn zero_safety_factor_is_rejected() {
        let params = ReportParams {
            safety_factor: 0.0,
            ..ReportParams::default()
        };
        let err = design_report(&RobotDesign::prototype(), &params).unwrap_err();
        assert!(matches!(
            err,
            DesignError::Invalid {
                field: "safety_factor",
                ..
            }
        ));
    }

    #[test]
    fn missing_wheel_radius_leaves_torque_unset() {
        let report = design_report(&RobotDesign::prototype(), &ReportParams::default()).unwrap();
        assert_eq!(report.required_torque, None);
        assert!(!report.torque_ok);
        assert!(report
            .discrepancy_notes
            .iter()
            .any(|n| n.contains("r_wheel")));
    }

    #[test]
    fn json_uses_fixed_field_names() {
        let mut design = RobotDesign::prototype();
        design.r_wheel = Some(0.02);
        let report = design_report(&design, &ReportParams::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in [
            "N",
            "RR",
            "f",
            "F_a",
            "TTE",
            "tau_total",
            "tau_per_motor",
            "K_s_required",
            "torque_ok",
            "notes",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(v["notes"].is_array());
    }

    #[test]
    fn design_validation() {
        let mut d = RobotDesign::prototype();
        assert!(d.validate().is_ok());
        d.d_min = 170.0;
        assert!(d.validate().is_err());
        let mut d = RobotDesign::prototype();
        d.mu_static = 0.5;
        assert!(d.validate().is_err());
        let mut d = RobotDesign::prototype();
        d.spring_spacing = 150.0;
        assert!(d.validate().is_err());
        assert!((RobotDesign::prototype().max_travel() - 16.895).abs() < 1e-9);
    }
}
