//! One PASS/FAIL line per acceptance criterion. Exits non-zero on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pipeclimber::bend::{self, ContactOffset};
use pipeclimber::cli;
use pipeclimber::design::{self, FrictionSign, ReportParams, RobotDesign};
use pipeclimber::netspec::{emit_design, emit_network, parse_design, parse_network};
use pipeclimber::sim::{self, SimConfig, StiffnessRange};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run_cli(args: &[&str]) -> (i32, String, Duration) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let start = Instant::now();
    let code = cli::run(
        std::iter::once("pipeclimber").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    let elapsed = start.elapsed();
    (code, String::from_utf8(out).unwrap(), elapsed)
}

fn value(text: &str, key: &str) -> Result<f64, String> {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .and_then(|v| v.trim_end_matches(" mm").parse().ok())
        .ok_or_else(|| format!("no numeric `{key}` in output"))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn diameter_band() -> Outcome {
    let args = ["check-bend", "--R", "90", "--D", "160", "--angle", "90"];
    run_cli(&args);
    let (code, out, elapsed) = run_cli(&args);
    let lower = value(&out, "d_lower")?;
    let upper = value(&out, "d_upper")?;
    ensure(code == 0, format!("exit {code}"))?;
    ensure(
        (lower - 110.21).abs() < 0.005 && (lower - 110.0).abs() <= 0.5,
        format!("d_lower {lower}"),
    )?;
    ensure(upper == 160.0, format!("d_upper {upper}"))?;
    ensure(
        elapsed < Duration::from_millis(10),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "d_lower {lower:.2} mm, d_upper {upper:.2} mm in {:.2} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn length_bound() -> Outcome {
    let (_, out, _) = run_cli(&[
        "check-bend",
        "--R",
        "90",
        "--D",
        "160",
        "--angle",
        "90",
        "--d",
        "129.54",
    ]);
    let l_max = value(&out, "L_max")?;
    ensure((l_max - 97.10).abs() <= 0.01, format!("L_max {l_max}"))?;
    let exact = bend::max_length(90.0, 160.0, 129.54).map_err(|e| e.to_string())?;
    ensure(
        (exact - 97.10091863623124).abs() < 1e-9,
        format!("library L_max {exact}"),
    )?;
    ensure(
        out.lines()
            .any(|l| l.starts_with("note = ") && l.contains("150 mm")),
        "no 150 mm note",
    )?;
    Ok(format!("L_max {l_max:.2} mm with note against 150 mm"))
}

fn hold_stiffness() -> Outcome {
    let mut r = runner(1000);
    r.run(
        &(0.01..100.0f64, 1e-4..0.2f64, 0.05..2.0f64),
        |(m, x, mu)| {
            let k = design::required_stiffness(m, x, mu, 9.81, 3, 4).unwrap();
            let lhs = mu * 12.0 * k * x;
            prop_assert!((lhs - m * 9.81).abs() <= 1e-9 * (m * 9.81));
            Ok(())
        },
    )
    .map_err(|e| e.to_string())?;
    let report = design::design_report(&RobotDesign::prototype(), &ReportParams::default())
        .map_err(|e| e.to_string())?;
    let k = report.required_stiffness;
    ensure((k - 21.11).abs() <= 0.01, format!("K_s {k}"))?;
    ensure(
        report.discrepancy_notes.iter().any(|n| n.contains("18.06")),
        "no 18.06 note",
    )?;
    Ok(format!(
        "1000 triples closed to 1e-9, prototype K_s {k:.2} N/m with note vs 18.06"
    ))
}

fn tractive_chain() -> Outcome {
    let tte = |sign| -> Result<f64, String> {
        let d = RobotDesign::prototype();
        let f = design::sliding_friction(
            d.mu_kinetic,
            d.spring_stiffness,
            d.preload_compression,
            3,
            4,
        )
        .map_err(|e| e.to_string())?;
        design::tractive_effort(d.mass, 0.0, 9.81, f, 0.0, sign).map_err(|e| e.to_string())
    };
    let paper = tte(FrictionSign::Paper)?;
    let physical = tte(FrictionSign::Physical)?;
    ensure((paper - 0.666).abs() <= 0.001, format!("paper TTE {paper}"))?;
    ensure(
        (physical - 8.555).abs() <= 0.001,
        format!("physical TTE {physical}"),
    )?;
    let mut r = runner(1000);
    r.run(
        &(-50.0..50.0f64, 1e-3..0.5f64, 0.1..10.0f64),
        |(t, rw, k)| {
            let a = design::motor_torque(t, rw).unwrap();
            let b = design::motor_torque(t, rw * k).unwrap();
            prop_assert!((b - k * a).abs() <= 1e-12 * (1.0 + b.abs()));
            Ok(())
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(format!(
        "TTE paper {paper:.3} N, physical {physical:.3} N, torque linear in r_wheel"
    ))
}

fn speed_plan() -> Outcome {
    let net = common::fixture("bend90.pcn");
    let robot = common::fixture("prototype.pcr");
    let (net, robot) = (net.to_str().unwrap(), robot.to_str().unwrap());
    let (code, out, _) = run_cli(&[
        "speed-plan",
        "--network",
        net,
        "--robot",
        robot,
        "--calibrate-ratio",
        "2.54",
    ]);
    ensure(code == 0, format!("exit {code}"))?;
    let row = out
        .lines()
        .find(|l| l.starts_with("1,bend,"))
        .ok_or("no bend row")?;
    let cols: Vec<&str> = row.split(',').collect();
    ensure(cols[5] == "2.5400", format!("ratio column {}", cols[5]))?;
    let inner: f64 = cols[3].parse().map_err(|_| "bad inner scale")?;
    ensure(
        (inner - 0.3937).abs() <= 0.0001,
        format!("inner scale {inner}"),
    )?;

    let design = parse_design(&common::read_fixture("prototype.pcr")).map_err(|e| e.to_string())?;
    let seg = parse_network(&common::read_fixture("bend90.pcn"))
        .map_err(|e| e.to_string())?
        .segments()[1]
        .clone();
    let cal = bend::speed_plan(&seg, &design, 0.0, ContactOffset::CalibratedRatio(2.54))
        .map_err(|e| e.to_string())?;
    ensure(
        (cal.reference_ratio_outer_to_inner - 2.54).abs() < 1e-12,
        "calibrated ratio not exact",
    )?;
    let geo = bend::speed_plan(&seg, &design, 0.0, ContactOffset::Geometric)
        .map_err(|e| e.to_string())?;
    let ratio = geo.reference_ratio_outer_to_inner;
    ensure(
        (ratio - 2.686).abs() <= 0.005,
        format!("geometric ratio {ratio}"),
    )?;
    Ok(format!(
        "calibrated 2.54 with inner {inner:.4}, geometric {ratio:.3}"
    ))
}

fn bend_events() -> Outcome {
    let net = parse_network(&common::read_fixture("bend90.pcn")).map_err(|e| e.to_string())?;
    let design = parse_design(&common::read_fixture("prototype.pcr")).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let trace = sim::simulate(&net, &design, &SimConfig::default()).map_err(|e| e.to_string())?;
    let summary = trace.summarize();
    let elapsed = start.elapsed();
    let delay = summary.rear_front_delay.ok_or("no delay measured")?;
    ensure(
        (delay - 0.300).abs() <= 0.001 + 1e-12,
        format!("delay {delay}"),
    )?;
    let (t0, t1) = summary
        .front_expansion_after_exit
        .ok_or("no post-exit expansion")?;
    let outer = summary.outer_module.ok_or("no outer module")?;
    let fin = summary.final_compression;
    ensure(
        (0..3).filter(|&k| k != outer).all(|k| fin[k] > fin[outer]),
        format!("final {fin:?}"),
    )?;
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "delay {delay:.3} s, expansion {t0:.3}..{t1:.3} s, final inner {:.2} mm > outer {:.2} mm, {} rows in {:.0} ms",
        fin[(outer + 1) % 3],
        fin[outer],
        trace.rows.len(),
        elapsed.as_secs_f64() * 1e3
    ))
}

fn sweep() -> Outcome {
    let net = parse_network(&common::read_fixture("vertical.pcn")).map_err(|e| e.to_string())?;
    let design = RobotDesign::prototype();
    let s = sim::sweep_stiffness(
        &net,
        &design,
        &SimConfig::default(),
        &StiffnessRange::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(s.rows.len() == 21, format!("{} rows", s.rows.len()))?;
    ensure(
        s.rows
            .windows(2)
            .all(|w| w[1].min_slip_margin > w[0].min_slip_margin),
        "not strictly increasing",
    )?;
    let first = s.first_feasible.ok_or("no feasible row")?;
    let k = s.rows[first].stiffness;
    ensure(k == 21.5, format!("first feasible {k}"))?;
    Ok(format!(
        "strictly increasing over 16..26 N/m, first feasible {k} N/m"
    ))
}

fn parser_robustness() -> Outcome {
    let mut r = runner(1000);
    r.run(&common::network(), |n| {
        prop_assert_eq!(parse_network(&emit_network(&n)).unwrap(), n);
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    r.run(&common::design(), |d| {
        prop_assert_eq!(parse_design(&emit_design(&d)).unwrap(), d);
        Ok(())
    })
    .map_err(|e| e.to_string())?;

    let corpus = common::invalid_corpus();
    for case in &corpus {
        match case.parse() {
            Ok(()) => return Err(format!("{} parsed", case.name)),
            Err(e) if (e.line, e.column) != case.expected => {
                return Err(format!(
                    "{}: at {}:{}, expected {:?}",
                    case.name, e.line, e.column, case.expected
                ))
            }
            Err(_) => {}
        }
    }

    let net = parse_network(&common::read_fixture("bend90.pcn")).map_err(|e| e.to_string())?;
    let design = parse_design(&common::read_fixture("prototype.pcr")).map_err(|e| e.to_string())?;
    let a = sim::simulate(&net, &design, &SimConfig::default())
        .map_err(|e| e.to_string())?
        .to_csv_string();
    let b = sim::simulate(&net, &design, &SimConfig::default())
        .map_err(|e| e.to_string())?
        .to_csv_string();
    ensure(a.as_bytes() == b.as_bytes(), "CSV differs between runs")?;
    Ok(format!(
        "1000 networks and 1000 designs round-trip, {} invalid fixtures located, CSV byte-identical",
        corpus.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("bend diameter band", diameter_band),
        ("bend length bound", length_bound),
        ("hold stiffness closure", hold_stiffness),
        ("tractive effort chain", tractive_chain),
        ("differential speed plan", speed_plan),
        ("bend event structure", bend_events),
        ("stiffness sweep", sweep),
        ("parser robustness", parser_robustness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
