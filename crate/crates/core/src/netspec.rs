//! Line-oriented text formats for pipe networks (`.pcn`) and robot designs
//! (`.pcr`).
//!
//! ```text
//! format=1                                   # optional header
//! pipe inner_diameter=160                    # or: pipe nps=6 schedule=40
//! segment straight length=500 incline=90
//! segment bend angle=90 radius=90 direction=left
//! segment straight length=500
//! ```
//!
//! ```text
//! robot mass_kg=0.47 length_mm=150 dmax_mm=163.33 dmin_mm=129.54 stiffness_n_per_m=18.06 preload_m=0.026 mu_k=0.7
//! ```

use std::fmt;

use thiserror::Error;

use crate::design::{DesignError, LugSpec, RobotDesign};
use crate::pipe::{
    resolve_pipe_spec, PipeError, PipeNetwork, PipeSegment, PipeSource, Schedule, ScheduleTable,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: expected {expected}, found {found}")]
pub struct SourceError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

impl SourceError {
    fn new(
        line: usize,
        column: usize,
        expected: impl Into<String>,
        found: impl Into<String>,
    ) -> Self {
        Self {
            line,
            column,
            expected: expected.into(),
            found: found.into(),
        }
    }

    /// `name:line:column: message` followed by the offending line and a caret.
    pub fn render(&self, name: &str, text: &str) -> String {
        let mut out = format!(
            "{name}:{}:{}: expected {}, found {}",
            self.line, self.column, self.expected, self.found
        );
        if let Some(src) = text.lines().nth(self.line - 1) {
            let src = src.trim_end_matches('\r');
            out.push_str(&format!("\n  {src}\n  {}^", " ".repeat(self.column - 1)));
        }
        out
    }
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    /// 1-based character column.
    col: usize,
}

#[derive(Debug)]
struct Pair<'a> {
    key: &'a str,
    key_col: usize,
    value: &'a str,
    value_col: usize,
}

#[derive(Debug)]
struct Line<'a> {
    number: usize,
    /// Characters excluding the line ending.
    width: usize,
    tokens: Vec<Token<'a>>,
}

fn lex(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| {
            let raw = raw.strip_suffix('\r').unwrap_or(raw);
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start: Option<(usize, usize)> = None;
            let mut col = 0;
            for (byte, ch) in body.char_indices() {
                col += 1;
                if ch.is_whitespace() {
                    if let Some((b, c)) = start.take() {
                        tokens.push(Token {
                            text: &body[b..byte],
                            col: c,
                        });
                    }
                } else if start.is_none() {
                    start = Some((byte, col));
                }
            }
            if let Some((b, c)) = start {
                tokens.push(Token {
                    text: &body[b..],
                    col: c,
                });
            }
            Line {
                number: i + 1,
                width: raw.chars().count(),
                tokens,
            }
        })
        .collect()
}

fn end_of_input(text: &str) -> (usize, usize) {
    match text.lines().enumerate().last() {
        Some((i, l)) => (i + 1, l.trim_end_matches('\r').chars().count() + 1),
        None => (1, 1),
    }
}

fn quote(s: &str) -> String {
    format!("`{s}`")
}

/// Key/value pairs of one directive, with duplicate and unknown-key checks.
struct Directive<'a> {
    line: usize,
    col: usize,
    pairs: Vec<Pair<'a>>,
}

impl<'a> Directive<'a> {
    fn parse(
        line: &Line<'a>,
        keyword: &Token<'a>,
        rest: &[Token<'a>],
        allowed: &[&str],
    ) -> Result<Self, SourceError> {
        let mut pairs: Vec<Pair<'a>> = Vec::new();
        for tok in rest {
            let Some((key, value)) = tok.text.split_once('=') else {
                return Err(SourceError::new(
                    line.number,
                    tok.col,
                    "key=value",
                    quote(tok.text),
                ));
            };
            if !allowed.contains(&key) {
                return Err(SourceError::new(
                    line.number,
                    tok.col,
                    format!(
                        "one of {}",
                        allowed
                            .iter()
                            .map(|k| quote(k))
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                    quote(key),
                ));
            }
            if pairs.iter().any(|p| p.key == key) {
                return Err(SourceError::new(
                    line.number,
                    tok.col,
                    "each key at most once",
                    format!("duplicate {}", quote(key)),
                ));
            }
            let value_col = tok.col + key.chars().count() + 1;
            if value.is_empty() {
                return Err(SourceError::new(
                    line.number,
                    value_col,
                    format!("a value for {}", quote(key)),
                    "nothing",
                ));
            }
            pairs.push(Pair {
                key,
                key_col: tok.col,
                value,
                value_col,
            });
        }
        Ok(Self {
            line: line.number,
            col: keyword.col,
            pairs,
        })
    }

    fn get(&self, key: &str) -> Option<&Pair<'a>> {
        self.pairs.iter().find(|p| p.key == key)
    }

    fn require(&self, key: &str) -> Result<&Pair<'a>, SourceError> {
        self.get(key).ok_or_else(|| {
            SourceError::new(
                self.line,
                self.col,
                quote(&format!("{key}=")),
                "directive without it",
            )
        })
    }

    fn err_value(&self, pair: &Pair<'_>, expected: impl Into<String>) -> SourceError {
        SourceError::new(self.line, pair.value_col, expected, quote(pair.value))
    }

    fn number(&self, pair: &Pair<'_>) -> Result<f64, SourceError> {
        match pair.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err_value(pair, "a finite number")),
        }
    }

    fn count(&self, pair: &Pair<'_>) -> Result<u32, SourceError> {
        pair.value
            .parse::<u32>()
            .map_err(|_| self.err_value(pair, "a non-negative integer"))
    }

    fn opt_number(&self, key: &str) -> Result<Option<f64>, SourceError> {
        self.get(key).map(|p| self.number(p)).transpose()
    }

    fn opt_count(&self, key: &str) -> Result<Option<u32>, SourceError> {
        self.get(key).map(|p| self.count(p)).transpose()
    }

    fn req_number(&self, key: &str) -> Result<f64, SourceError> {
        let p = self.require(key)?;
        self.number(p)
    }
}

/// Skips blank/comment lines and an optional leading `format=1` header.
fn content_lines<'a>(lines: &'a [Line<'a>]) -> Result<Vec<&'a Line<'a>>, SourceError> {
    let mut out: Vec<&Line> = lines.iter().filter(|l| !l.tokens.is_empty()).collect();
    if let Some(first) = out.first() {
        let tok = &first.tokens[0];
        if let Some(v) = tok.text.strip_prefix("format=") {
            if v != "1" {
                return Err(SourceError::new(
                    first.number,
                    tok.col + 7,
                    "format version `1`",
                    quote(v),
                ));
            }
            if let Some(extra) = first.tokens.get(1) {
                return Err(SourceError::new(
                    first.number,
                    extra.col,
                    "end of line after format header",
                    quote(extra.text),
                ));
            }
            out.remove(0);
        }
    }
    Ok(out)
}

pub fn parse_network(text: &str) -> Result<PipeNetwork, SourceError> {
    parse_network_with(text, ScheduleTable::builtin())
}

/// Parses a network, resolving `nps`/`schedule` pipes against `table`.
pub fn parse_network_with(text: &str, table: &ScheduleTable) -> Result<PipeNetwork, SourceError> {
    let lines = lex(text);
    let content = content_lines(&lines)?;
    let mut pipe = None;
    let mut segments = Vec::new();
    let mut segment_lines = Vec::new();

    for line in content {
        let kw = &line.tokens[0];
        match kw.text {
            "pipe" if pipe.is_none() => {
                let d = Directive::parse(
                    line,
                    kw,
                    &line.tokens[1..],
                    &["nps", "schedule", "inner_diameter"],
                )?;
                pipe = Some(parse_pipe(&d, table)?);
            }
            "pipe" => {
                return Err(SourceError::new(
                    line.number,
                    kw.col,
                    quote("segment"),
                    "a second `pipe`",
                ));
            }
            "segment" if pipe.is_some() => {
                let seg = parse_segment(line, kw, segments.is_empty())?;
                segments.push(seg);
                segment_lines.push(line.number);
            }
            "segment" => {
                return Err(SourceError::new(
                    line.number,
                    kw.col,
                    quote("pipe"),
                    quote(kw.text),
                ));
            }
            other => {
                let expected = if pipe.is_none() {
                    quote("pipe")
                } else {
                    quote("segment")
                };
                return Err(SourceError::new(
                    line.number,
                    kw.col,
                    expected,
                    quote(other),
                ));
            }
        }
    }

    let (eof_line, eof_col) = end_of_input(text);
    let Some(pipe) = pipe else {
        return Err(SourceError::new(
            eof_line,
            eof_col,
            quote("pipe"),
            "end of input",
        ));
    };
    if segments.is_empty() {
        return Err(SourceError::new(
            eof_line,
            eof_col,
            quote("segment"),
            "end of input",
        ));
    }
    PipeNetwork::new(pipe, segments).map_err(|e| {
        let line = match e {
            PipeError::InvalidSegment { index, .. } => {
                segment_lines.get(index).copied().unwrap_or(1)
            }
            _ => 1,
        };
        SourceError::new(line, 1, "a valid network", e.to_string())
    })
}

fn parse_pipe(
    d: &Directive<'_>,
    table: &ScheduleTable,
) -> Result<crate::pipe::PipeSpec, SourceError> {
    let source = match (d.get("inner_diameter"), d.get("nps")) {
        (Some(id), None) => {
            if let Some(p) = d.get("schedule") {
                return Err(SourceError::new(
                    d.line,
                    p.key_col,
                    "no `schedule` with `inner_diameter`",
                    quote(p.key),
                ));
            }
            let v = d.number(id)?;
            if v <= 0.0 {
                return Err(d.err_value(id, "a diameter > 0"));
            }
            PipeSource::Explicit { inner_diameter: v }
        }
        (Some(_), Some(nps)) => {
            return Err(SourceError::new(
                d.line,
                nps.key_col,
                "either `nps` or `inner_diameter`",
                "both",
            ));
        }
        (None, Some(nps)) => {
            let sch = d.require("schedule")?;
            let schedule: Schedule = sch
                .value
                .parse()
                .map_err(|_| d.err_value(sch, "schedule 40, 80 or 120"))?;
            if table.lookup(nps.value, schedule).is_none() {
                return Err(d.err_value(
                    nps,
                    format!("an NPS size listed for schedule {}", schedule.number()),
                ));
            }
            PipeSource::Standard {
                nps: nps.value.to_string(),
                schedule,
            }
        }
        (None, None) => {
            return Err(SourceError::new(
                d.line,
                d.col,
                "`inner_diameter=` or `nps=`",
                "directive without either",
            ));
        }
    };
    resolve_pipe_spec(source, table)
        .map_err(|e| SourceError::new(d.line, d.col, "a resolvable pipe", e.to_string()))
}

fn parse_segment(line: &Line<'_>, kw: &Token<'_>, first: bool) -> Result<PipeSegment, SourceError> {
    let Some(kind) = line.tokens.get(1) else {
        return Err(SourceError::new(
            line.number,
            line.width + 1,
            "`straight` or `bend`",
            "end of line",
        ));
    };
    match kind.text {
        "straight" => {
            let d = Directive::parse(line, kw, &line.tokens[2..], &["length", "incline"])?;
            let lp = d.require("length")?;
            let length = d.number(lp)?;
            if length <= 0.0 {
                return Err(d.err_value(lp, "a length > 0"));
            }
            let incline = match d.get("incline") {
                Some(p) if !first => {
                    return Err(SourceError::new(
                        d.line,
                        p.key_col,
                        "`incline` only on the first segment",
                        quote(p.key),
                    ));
                }
                Some(p) => {
                    let v = d.number(p)?;
                    if !(-90.0..=90.0).contains(&v) {
                        return Err(d.err_value(p, "an incline in [-90, 90]"));
                    }
                    Some(v)
                }
                None => None,
            };
            Ok(PipeSegment::Straight { length, incline })
        }
        "bend" => {
            let d = Directive::parse(
                line,
                kw,
                &line.tokens[2..],
                &["angle", "radius", "direction"],
            )?;
            let ap = d.require("angle")?;
            let angle = d.number(ap)?;
            if !(angle > 0.0 && angle <= 90.0) {
                return Err(d.err_value(ap, "an angle in (0, 90]"));
            }
            let rp = d.require("radius")?;
            let radius = d.number(rp)?;
            if radius <= 0.0 {
                return Err(d.err_value(rp, "a radius > 0"));
            }
            let dp = d.require("direction")?;
            let direction = dp
                .value
                .parse()
                .map_err(|_| d.err_value(dp, "up, down, left or right"))?;
            Ok(PipeSegment::Bend {
                angle,
                radius,
                direction,
            })
        }
        other => Err(SourceError::new(
            line.number,
            kind.col,
            "`straight` or `bend`",
            quote(other),
        )),
    }
}

const ROBOT_REQUIRED: [&str; 7] = [
    "mass_kg",
    "length_mm",
    "dmax_mm",
    "dmin_mm",
    "stiffness_n_per_m",
    "preload_m",
    "mu_k",
];

const ROBOT_KEYS: [&str; 15] = [
    "mass_kg",
    "length_mm",
    "dmax_mm",
    "dmin_mm",
    "stiffness_n_per_m",
    "preload_m",
    "spacing_mm",
    "mu_s",
    "mu_k",
    "r_wheel_m",
    "lugs",
    "lugs_contact",
    "lug_radius_mm",
    "modules",
    "springs_per_module",
];

/// Default axial front/rear spring spacing, mm.
pub const DEFAULT_SPACING_MM: f64 = 30.0;

fn key_for_field(field: &str) -> &'static str {
    match field {
        "mass" => "mass_kg",
        "length" => "length_mm",
        "d_min" => "dmin_mm",
        "d_max" => "dmax_mm",
        "n_modules" => "modules",
        "springs_per_module" => "springs_per_module",
        "spring_stiffness" => "stiffness_n_per_m",
        "preload_compression" => "preload_m",
        "spring_spacing" => "spacing_mm",
        "mu_static" => "mu_s",
        "mu_kinetic" => "mu_k",
        "r_wheel" => "r_wheel_m",
        "lug" => "lugs_contact",
        "lug_radius" => "lug_radius_mm",
        _ => "robot",
    }
}

pub fn parse_design(text: &str) -> Result<RobotDesign, SourceError> {
    let lines = lex(text);
    let content = content_lines(&lines)?;
    let mut design = None;
    for line in content {
        let kw = &line.tokens[0];
        match kw.text {
            "robot" if design.is_none() => {
                let d = Directive::parse(line, kw, &line.tokens[1..], &ROBOT_KEYS)?;
                design = Some(build_design(&d)?);
            }
            "robot" => {
                return Err(SourceError::new(
                    line.number,
                    kw.col,
                    "end of input",
                    "a second `robot`",
                ))
            }
            other => {
                return Err(SourceError::new(
                    line.number,
                    kw.col,
                    quote("robot"),
                    quote(other),
                ))
            }
        }
    }
    design.ok_or_else(|| {
        let (l, c) = end_of_input(text);
        SourceError::new(l, c, quote("robot"), "end of input")
    })
}

fn build_design(d: &Directive<'_>) -> Result<RobotDesign, SourceError> {
    for key in ROBOT_REQUIRED {
        d.require(key)?;
    }
    let mu_kinetic = d.req_number("mu_k")?;
    let lug_default = LugSpec::default();
    let design = RobotDesign {
        mass: d.req_number("mass_kg")?,
        length: d.req_number("length_mm")?,
        d_max: d.req_number("dmax_mm")?,
        d_min: d.req_number("dmin_mm")?,
        n_modules: d.opt_count("modules")?.unwrap_or(3),
        springs_per_module: d.opt_count("springs_per_module")?.unwrap_or(4),
        spring_stiffness: d.req_number("stiffness_n_per_m")?,
        preload_compression: d.req_number("preload_m")?,
        spring_spacing: d.opt_number("spacing_mm")?.unwrap_or(DEFAULT_SPACING_MM),
        mu_static: d.opt_number("mu_s")?.unwrap_or(mu_kinetic),
        mu_kinetic,
        r_wheel: d.opt_number("r_wheel_m")?,
        lug: LugSpec {
            lug_count: d.opt_count("lugs")?.unwrap_or(lug_default.lug_count),
            min_contact_count: d
                .opt_count("lugs_contact")?
                .unwrap_or(lug_default.min_contact_count),
            lug_radius: d
                .opt_number("lug_radius_mm")?
                .unwrap_or(lug_default.lug_radius),
        },
    };
    design.validate().map_err(|e| {
        let (field, reason) = match &e {
            DesignError::Invalid { field, reason } => (*field, reason.clone()),
            other => ("robot", other.to_string()),
        };
        let mut key = key_for_field(field);
        if key == "mu_s" && d.get("mu_s").is_none() {
            key = "mu_k";
        }
        match d.get(key) {
            Some(p) => SourceError::new(
                d.line,
                p.value_col,
                format!("valid {key} ({reason})"),
                quote(p.value),
            ),
            None => SourceError::new(
                d.line,
                d.col,
                format!("valid {key} ({reason})"),
                "default value",
            ),
        }
    })?;
    Ok(design)
}

struct Num(f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `Display` for f64 is the shortest string that parses back exactly.
        write!(f, "{}", self.0)
    }
}

/// Canonical text of a network. `parse_network(emit_network(n)) == n`.
pub fn emit_network(network: &PipeNetwork) -> String {
    let mut out = String::new();
    match &network.pipe().source {
        PipeSource::Standard { nps, schedule } => {
            out.push_str(&format!("pipe nps={nps} schedule={}\n", schedule.number()));
        }
        PipeSource::Explicit { inner_diameter } => {
            out.push_str(&format!("pipe inner_diameter={}\n", Num(*inner_diameter)));
        }
    }
    for seg in network.segments() {
        match seg {
            PipeSegment::Straight { length, incline } => {
                out.push_str(&format!("segment straight length={}", Num(*length)));
                if let Some(i) = incline {
                    out.push_str(&format!(" incline={}", Num(*i)));
                }
                out.push('\n');
            }
            PipeSegment::Bend {
                angle,
                radius,
                direction,
            } => {
                out.push_str(&format!(
                    "segment bend angle={} radius={} direction={direction}\n",
                    Num(*angle),
                    Num(*radius)
                ));
            }
        }
    }
    out
}

/// Canonical text of a design with every key spelled out.
pub fn emit_design(design: &RobotDesign) -> String {
    let mut fields: Vec<(&str, String)> = vec![
        ("mass_kg", Num(design.mass).to_string()),
        ("length_mm", Num(design.length).to_string()),
        ("dmax_mm", Num(design.d_max).to_string()),
        ("dmin_mm", Num(design.d_min).to_string()),
        (
            "stiffness_n_per_m",
            Num(design.spring_stiffness).to_string(),
        ),
        ("preload_m", Num(design.preload_compression).to_string()),
        ("spacing_mm", Num(design.spring_spacing).to_string()),
        ("mu_s", Num(design.mu_static).to_string()),
        ("mu_k", Num(design.mu_kinetic).to_string()),
    ];
    if let Some(r) = design.r_wheel {
        fields.push(("r_wheel_m", Num(r).to_string()));
    }
    fields.extend([
        ("lugs", design.lug.lug_count.to_string()),
        ("lugs_contact", design.lug.min_contact_count.to_string()),
        ("lug_radius_mm", Num(design.lug.lug_radius).to_string()),
        ("modules", design.n_modules.to_string()),
        ("springs_per_module", design.springs_per_module.to_string()),
    ]);
    let body: Vec<String> = fields
        .into_iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    format!("robot {}\n", body.join(" "))
}
