//! The `pipeclimber` command line. Exit codes: 0 success, 1 computed but
//! infeasible (torque short, bend infeasible, slip), 2 usage or parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bend::{self, ContactOffset, SpeedPlan};
use crate::design::{self, FrictionSign, MotorSpec, ReportParams, RobotDesign};
use crate::netspec;
use crate::pipe::{PipeNetwork, PipeSegment, ScheduleTable};
use crate::sim::{self, ModuleLayout, SimConfig, SimError, StiffnessRange};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pipeclimber",
    version,
    about = "Sizing and traversal simulation for a three-module in-pipe climbing robot"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Paper,
    Physical,
}

impl From<SignArg> for FrictionSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Paper => FrictionSign::Paper,
            SignArg::Physical => FrictionSign::Physical,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spring stiffness, tractive effort and motor torque for a robot.
    Design {
        #[arg(long)]
        robot: PathBuf,
        /// m/s².
        #[arg(long, default_value_t = design::DEFAULT_GRAVITY)]
        gravity: f64,
        /// m/s².
        #[arg(long, default_value_t = 0.0)]
        accel: f64,
        /// Rolling resistance coefficient.
        #[arg(long, default_value_t = 0.0)]
        cr: f64,
        /// Required motor torque margin over demand. The prototype's 0.88 N·m motors
        /// against its 0.23 N·m demand correspond to about 3.8.
        #[arg(long, default_value_t = 2.0)]
        safety: f64,
        /// Motor torque, N·m.
        #[arg(long = "motor-torque", default_value_t = design::reference::MOTOR_TORQUE_NM)]
        motor_torque: f64,
        #[arg(long = "friction-sign", value_enum, default_value_t = SignArg::Paper)]
        friction_sign: SignArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Diameter band and body length bound for one bend.
    CheckBend {
        /// Bend centerline radius, mm.
        #[arg(long = "R")]
        radius: f64,
        /// Pipe bore, mm.
        #[arg(long = "D")]
        diameter: f64,
        /// Bend angle, degrees.
        #[arg(long, default_value_t = 90.0)]
        angle: f64,
        /// Robot minimum diameter, mm.
        #[arg(long = "d")]
        d: Option<f64>,
        /// Robot body length, mm.
        #[arg(long)]
        length: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Per-track speed scales for every segment of a network.
    SpeedPlan {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        robot: PathBuf,
        /// Module 0 rotation from the first bend's outer side, degrees.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        roll: f64,
        /// Back-solve the contact offset for this outer/inner ratio.
        #[arg(long = "calibrate-ratio")]
        calibrate_ratio: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Time-stepped traversal with spring and slip trace.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Trace CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        summary: Format,
    },
    /// Repeats the traversal over a grid of spring stiffness values.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// N/m grid as lo:hi:step.
        #[arg(long, default_value = "16:26:0.5")]
        stiffness: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long)]
    robot: PathBuf,
    /// mm/s.
    #[arg(long, default_value_t = 100.0)]
    velocity: f64,
    /// s.
    #[arg(long, default_value_t = 0.001)]
    dt: f64,
    /// Module 0 rotation from the first bend's outer side, degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    roll: f64,
    #[arg(long = "friction-sign", value_enum, default_value_t = SignArg::Paper)]
    friction_sign: SignArg,
}

impl RunArgs {
    fn config(&self) -> SimConfig {
        SimConfig {
            velocity: self.velocity,
            dt: self.dt,
            roll: self.roll,
            friction_sign: self.friction_sign.into(),
            ..SimConfig::default()
        }
    }
}

/// A failed command: message for standard error and the exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_design(path: &Path) -> Result<RobotDesign, Failure> {
    let text = read(path)?;
    netspec::parse_design(&text).map_err(|e| usage(e.render(&path.display().to_string(), &text)))
}

fn load_network(path: &Path) -> Result<PipeNetwork, Failure> {
    let table = ScheduleTable::from_env().map_err(|e| usage(e.to_string()))?;
    let text = read(path)?;
    netspec::parse_network_with(&text, &table)
        .map_err(|e| usage(e.render(&path.display().to_string(), &text)))
}

fn sim_failure(e: SimError) -> Failure {
    let code = match e {
        SimError::InfeasibleBend { .. } | SimError::NoWallContact { .. } => EXIT_INFEASIBLE,
        _ => EXIT_USAGE,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output") + "\n"
}

/// Parses `args` (program name first) and runs the command, writing reports
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok((code, text)) => match out.write_all(text.as_bytes()) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_USAGE
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command) -> Result<(i32, String), Failure> {
    match command {
        Command::Design {
            robot,
            gravity,
            accel,
            cr,
            safety,
            motor_torque,
            friction_sign,
            format,
        } => {
            let design = load_design(&robot)?;
            let params = ReportParams {
                gravity,
                accel,
                c_r: cr,
                safety_factor: safety,
                friction_sign: friction_sign.into(),
                motor: MotorSpec::with_torque(motor_torque),
            };
            let report =
                design::design_report(&design, &params).map_err(|e| usage(e.to_string()))?;
            let code = if report.torque_ok {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            };
            let text = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            Ok((code, text))
        }
        Command::CheckBend {
            radius,
            diameter,
            angle,
            d,
            length,
            format,
        } => {
            let verdict = bend::check_bend(radius, diameter, angle, d, length)
                .map_err(|e| usage(e.to_string()))?;
            let code = if verdict.feasible == Some(false) {
                EXIT_INFEASIBLE
            } else {
                EXIT_OK
            };
            let text = match format {
                Format::Text => verdict.to_text(),
                Format::Json => json(&verdict),
            };
            Ok((code, text))
        }
        Command::SpeedPlan {
            network,
            robot,
            roll,
            calibrate_ratio,
            format,
        } => {
            let design = load_design(&robot)?;
            let net = load_network(&network)?;
            if !roll.is_finite() {
                return Err(usage("roll must be finite"));
            }
            let offset = match calibrate_ratio {
                Some(r) => ContactOffset::CalibratedRatio(r),
                None => ContactOffset::Geometric,
            };
            speed_plan_table(&net, &design, roll, offset, format)
        }
        Command::Simulate { run, out, summary } => {
            let design = load_design(&run.robot)?;
            let net = load_network(&run.network)?;
            let trace = sim::simulate(&net, &design, &run.config()).map_err(sim_failure)?;
            if let Some(path) = out {
                let file = fs::File::create(&path)
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                let mut w = std::io::BufWriter::new(file);
                trace
                    .write_csv(&mut w)
                    .and_then(|_| w.flush())
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            let s = trace.summarize();
            let code = if s.slip_detected {
                EXIT_INFEASIBLE
            } else {
                EXIT_OK
            };
            let text = match summary {
                Format::Text => s.to_text(),
                Format::Json => s.to_json() + "\n",
            };
            Ok((code, text))
        }
        Command::Sweep {
            run,
            stiffness,
            format,
        } => {
            let range: StiffnessRange = stiffness.parse().map_err(|e: String| usage(e))?;
            range.validate().map_err(|e| usage(e.to_string()))?;
            let design = load_design(&run.robot)?;
            let net = load_network(&run.network)?;
            let sweep =
                sim::sweep_stiffness(&net, &design, &run.config(), &range).map_err(sim_failure)?;
            let code = if sweep.first_feasible.is_some() {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            };
            let text = match format {
                Format::Text => sweep.to_text(),
                Format::Json => json(&sweep),
            };
            Ok((code, text))
        }
    }
}

#[derive(Serialize)]
struct PlanRow {
    segment: usize,
    kind: &'static str,
    #[serde(flatten)]
    plan: SpeedPlan,
}

fn speed_plan_table(
    net: &PipeNetwork,
    design: &RobotDesign,
    roll: f64,
    offset: ContactOffset,
    format: Format,
) -> Result<(i32, String), Failure> {
    let layout = ModuleLayout::for_network(net, roll);
    let mut bends = net.bends();
    let mut rows = Vec::new();
    for (i, seg) in net.segments().iter().enumerate() {
        let (kind, plan) = match seg {
            PipeSegment::Straight { .. } => ("straight", SpeedPlan::straight()),
            PipeSegment::Bend { .. } => {
                let span = bends.next().expect("bend spans follow segments");
                let plan = bend::speed_plan(seg, design, layout.roll_in(&span), offset)
                    .map_err(|e| usage(format!("segment {i}: {e}")))?;
                ("bend", plan)
            }
        };
        rows.push(PlanRow {
            segment: i,
            kind,
            plan,
        });
    }
    let text = match format {
        Format::Json => json(&rows),
        Format::Text => {
            let mut t = String::from(
                "segment,kind,scale_m0,scale_m1,scale_m2,ratio_outer_inner,contact_offset_mm\n",
            );
            for r in &rows {
                let s = r.plan.per_module_speed_scale;
                let rho = r
                    .plan
                    .contact_offset
                    .map(|v| format!("{v:.4}"))
                    .unwrap_or_else(|| "n/a".into());
                t.push_str(&format!(
                    "{},{},{:.4},{:.4},{:.4},{:.4},{rho}\n",
                    r.segment, r.kind, s[0], s[1], s[2], r.plan.reference_ratio_outer_to_inner
                ));
            }
            t
        }
    };
    Ok((EXIT_OK, text))
}
