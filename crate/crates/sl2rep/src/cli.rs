//! Command-line front end. Every subcommand prints the computed value next to
//! its closed form or brute-force counterpart and a PASS/FAIL verdict.

use std::io::Write;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::asymptotics::{self, Family, InducingDatum, MPSubgroup, Parity};
use crate::error::{invalid, Error, Result};
use crate::localfield::{self, CharacterSpec};
use crate::meataxe;
use crate::packets::{self, Gl2ReplDescriptor, Gl2Variant};
use crate::reps::{self, IrrepLabel, Setting};
use crate::whittakerf2;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "sl2rep", version, about = "Representations of GL2/SL2 over finite and p-adic fields")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Skip the brute-force cross-checks.
    #[arg(long, global = true)]
    pub fast: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Irreducible representations of GL2(F_q) with dimensions and restriction lengths.
    Irreps {
        q: u64,
        #[arg(long = "char", default_value_t = 0)]
        char_r: u64,
    },
    /// Length of the restriction of one irreducible to SL2(F_q).
    Restrict {
        q: u64,
        label: String,
        #[arg(long = "char", default_value_t = 0)]
        char_r: u64,
    },
    /// Reduction mod ell of a characteristic-0 irreducible.
    ModEll { q: u64, label: String, ell: u64 },
    /// L-packet report for a GL2(F) descriptor (JSON, or @path).
    Packet { descriptor: String },
    /// |X_sigma| for a character of a quadratic extension (JSON, or @path).
    XSigma { character: String },
    /// Length of the reduction mod ell of the attached supercuspidal.
    ScModEll { character: String, ell: u64 },
    /// |B'\G'/H_j| for a filtration family (K, dK, I, I-half).
    Census { p: u64, family: String, j: u32 },
    /// dim Pi^H over a range of filtration subgroups. Datum: `[+|-]Cusp(t)[#k]`.
    Invariants {
        q: u64,
        #[arg(allow_hyphen_values = true)]
        datum: String,
        family: String,
        js: String,
    },
    /// Germ identity for the depth-zero size-4 packet against ind_B'^G' 1.
    GermCheck {
        q: u64,
        js: String,
        #[arg(long)]
        label: Option<String>,
        /// Leave out one packet member (negative control), 1-based.
        #[arg(long)]
        drop: Option<usize>,
        #[arg(long, default_value = "I")]
        family: String,
    },
    /// Lattice exponent of I_0/I_r on F_2^d and the doubling inclusion.
    Whittaker { d: u32, r: u32 },
}

/// One output record. Text output renders `text`; JSON and CSV carry `fields`.
#[derive(Clone, Debug)]
pub struct Line {
    pub fields: Vec<(String, Value)>,
    pub text: String,
    pub pass: Option<bool>,
}

impl Line {
    fn new(text: impl Into<String>) -> Line {
        Line { fields: Vec::new(), text: text.into(), pass: None }
    }
    fn field(mut self, k: &str, v: impl Serialize) -> Line {
        self.fields.push((k.into(), serde_json::to_value(v).unwrap_or(Value::Null)));
        self
    }
    fn check(mut self, ok: bool) -> Line {
        self.pass = Some(ok);
        self
    }
    fn rendered(&self) -> String {
        match self.pass {
            Some(true) => format!("{} PASS", self.text),
            Some(false) => format!("{} FAIL", self.text),
            None => self.text.clone(),
        }
    }
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.fields {
            m.insert(k.clone(), v.clone());
        }
        if let Some(p) = self.pass {
            m.insert("pass".into(), Value::Bool(p));
        }
        Value::Object(m)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub lines: Vec<Line>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass != Some(false))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Text => Ok(self.lines.iter().map(|l| l.rendered() + "\n").collect()),
            Format::Json => {
                let v = json!({
                    "command": self.command,
                    "pass": self.passed(),
                    "lines": self.lines.iter().map(Line::to_json).collect::<Vec<_>>(),
                });
                Ok(serde_json::to_string_pretty(&v).map_err(|e| Error::Internal(e.to_string()))? + "\n")
            }
            Format::Csv => {
                let mut keys: Vec<String> = Vec::new();
                for l in &self.lines {
                    for (k, _) in &l.fields {
                        if !keys.contains(k) {
                            keys.push(k.clone());
                        }
                    }
                }
                keys.push("pass".into());
                let mut w = csv::Writer::from_writer(Vec::new());
                let err = |e: csv::Error| Error::Internal(e.to_string());
                w.write_record(&keys).map_err(err)?;
                for l in &self.lines {
                    let obj = l.to_json();
                    let row: Vec<String> = keys
                        .iter()
                        .map(|k| match obj.get(k) {
                            None | Some(Value::Null) => String::new(),
                            Some(Value::String(s)) => s.clone(),
                            Some(v) => v.to_string(),
                        })
                        .collect();
                    w.write_record(&row).map_err(err)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
            }
        }
    }
}

/// Label syntax of `IrrepLabel`, plus `Cusp(theta:b->orderN)`: the cuspidal whose
/// character takes a value of order `N` on an element `b` of order `q+1`.
pub fn parse_label(s: &str, q: u64) -> Result<IrrepLabel> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("Cusp(theta:b->order").and_then(|r| r.strip_suffix(')')) {
        let n: u64 = rest.parse().map_err(|_| Error::InvalidInput(format!("bad order in {s:?}")))?;
        if n < 2 || (q + 1) % n != 0 {
            return invalid(format!("no element of order {n} in the kernel of the norm for q = {q}"));
        }
        // theta_t(b) = zeta^{t(q-1)} has order (q+1)/gcd(t, q+1)
        return Ok(IrrepLabel::Cusp((q + 1) / n));
    }
    t.parse()
}

fn read_json_arg(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    serde_json::from_str(&read_json_arg(arg)?).map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))
}

/// `a..b`, `a..=b`, `a-b` or a single integer; inclusive.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u32>> {
    let bad = || Error::InvalidInput(format!("bad range {s:?}"));
    let num = |x: &str| x.trim().parse::<u32>().map_err(|_| bad());
    let (a, b) = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let a = num(s)?;
        (a, a)
    };
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn irreps(q: u64, char_r: u64, fast: bool, seed: u64) -> Result<Report> {
    let s = Setting::new(q, char_r)?;
    let mut lines = Vec::new();
    let labels = s.labels();
    let mut sum_sq = 0u128;
    for l in &labels {
        let dim = l.dim(q);
        let closed = l.restriction_length(&s);
        let mut line = Line::new("").field("label", l.to_string()).field("kind", l.kind()).field("dim", dim).field("restriction_length", closed);
        let mut text = format!("{l}: dim {dim}, restriction length {closed}");
        if !fast {
            let rep = reps::construct(&s, l)?;
            let measured = meataxe::composition_factors(&reps::restrict_to_sl2(&s, &rep)?, seed)?.len();
            text += &format!("; meataxe: {measured}");
            line = line.field("meataxe", measured).check(measured == closed);
            if char_r == 0 {
                sum_sq += (rep.dim * rep.dim) as u128;
            }
        } else {
            sum_sq += (dim * dim) as u128;
        }
        line.text = text;
        lines.push(line);
    }
    let count = labels.len() as u64;
    if char_r == 0 {
        let order = s.gl2.spec.order_formula();
        lines.push(Line::new(format!("count {count} (formula q^2-1: {})", q * q - 1)).field("count", count).field("formula", q * q - 1).check(count == q * q - 1));
        lines.push(
            Line::new(format!("sum of squared dimensions {sum_sq} (|GL2(F_q)|: {order})"))
                .field("sum_dim_squared", sum_sq as u64)
                .field("group_order", order as u64)
                .check(sum_sq == order),
        );
    } else {
        let regular = s.gl2.regular_classes(char_r).len() as u64;
        lines.push(
            Line::new(format!("count {count} ({char_r}-regular classes: {regular})"))
                .field("count", count)
                .field("regular_classes", regular)
                .check(count == regular),
        );
    }
    Ok(Report { command: "irreps".into(), lines })
}

fn restrict(q: u64, label: &str, char_r: u64, fast: bool, seed: u64) -> Result<Report> {
    let s = Setting::new(q, char_r)?;
    let l = parse_label(label, q)?.normalize(&s)?;
    let closed = l.restriction_length(&s);
    let mut line = Line::new(format!("length {closed}")).field("label", l.to_string()).field("length", closed);
    if !fast {
        let measured = meataxe::restriction_length_measured(&s, &l, seed)?;
        line.text = format!("length {closed}; meataxe: {measured}");
        line = line.field("meataxe", measured).check(measured == closed);
    }
    Ok(Report { command: "restrict".into(), lines: vec![line] })
}

fn join_labels(v: &[(IrrepLabel, usize)]) -> String {
    v.iter()
        .map(|(l, m)| if *m == 1 { l.to_string() } else { format!("{m}*{l}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn mod_ell(q: u64, label: &str, ell: u64, fast: bool, seed: u64) -> Result<Report> {
    let s0 = Setting::new(q, 0)?;
    let sl = Setting::new(q, ell)?;
    let l = parse_label(label, q)?.normalize(&s0)?;
    let closed = l.reduction(&sl)?;
    let mut line = Line::new(format!("{l} mod {ell}: {}", join_labels(&closed)))
        .field("label", l.to_string())
        .field("ell", ell)
        .field("reduction", closed.iter().map(|(x, m)| json!({"label": x.to_string(), "multiplicity": m})).collect::<Vec<_>>());
    if !fast {
        let lattice = reps::integral_model(&sl, &l)?;
        let report = meataxe::decompose(&lattice, seed)?;
        let mut matched = report.constituents.len() == closed.len();
        for (target, m) in &closed {
            let rep = reps::construct(&sl, target)?.map_field(&report.field)?;
            let hit = report.constituents.iter().try_fold(false, |acc, (c, cm)| -> Result<bool> {
                Ok(acc || (cm == m && meataxe::isomorphic_irreducibles(c, &rep)?))
            })?;
            matched &= hit;
        }
        line.text += &format!("; meataxe: dims {:?}, semisimple {}", report.dims(), report.semisimple);
        line = line.field("meataxe_dims", report.dims()).field("semisimple", report.semisimple).check(matched);
    }
    Ok(Report { command: "mod-ell".into(), lines: vec![line] })
}

fn packet(arg: &str, fast: bool, seed: u64) -> Result<Report> {
    let d: Gl2ReplDescriptor = parse_json(arg)?;
    let r = packets::packet_report(&d)?;
    let mut lines = vec![Line::new(format!(
        "size {}; component group {}; E_Pi {}; {}; {}",
        r.size,
        r.component_group,
        r.e_pi.description,
        tag(&r.level),
        tag(&r.cuspidal_class)
    ))
    .field("size", r.size)
    .field("component_group", &r.component_group)
    .field("e_pi", &r.e_pi)
    .field("level", r.level)
    .field("cuspidal_class", r.cuspidal_class)];
    if let Ok(g) = packets::germ_constant(&d) {
        lines.push(Line::new(format!("a_Pi {}; per member {}", g.a_pi, g.per_packet())).field("a_pi", g.a_pi).field("per_member", g.per_packet()));
    }
    if !fast {
        if let Gl2Variant::DepthZeroSc { label } = &d.variant {
            let s = Setting::new(d.q, d.char_r)?;
            let l = parse_label(label, d.q)?.normalize(&s)?;
            let measured = meataxe::restriction_length_measured(&s, &l, seed)?;
            lines.push(
                Line::new(format!("meataxe: restriction length {measured}, size {} (report: {})", 2 * measured, r.size))
                    .field("meataxe_size", 2 * measured)
                    .check(2 * measured == r.size),
            );
        }
    }
    Ok(Report { command: "packet".into(), lines })
}

fn tag(v: &impl Serialize) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn x_sigma(arg: &str, fast: bool) -> Result<Report> {
    let spec: CharacterSpec = parse_json(arg)?;
    let chi = spec.build()?;
    let x = localfield::x_sigma(&chi)?;
    let mut line = Line::new(format!("|X_sigma| {}", x.size)).field("size", x.size).field("biquadratic", x.biquadratic).field("characters", &x.characters);
    if !fast {
        let brute = localfield::x_sigma_by_enumeration(&chi);
        line.text += &format!(" (enumeration: {brute})");
        line = line.field("enumeration", brute).check(brute == x.size);
    }
    Ok(Report { command: "x-sigma".into(), lines: vec![line] })
}

fn sc_mod_ell(arg: &str, ell: u64) -> Result<Report> {
    let spec: CharacterSpec = parse_json(arg)?;
    let chi = spec.build()?;
    let n = localfield::mod_ell_sc_length(&chi, ell)?;
    Ok(Report { command: "sc-mod-ell".into(), lines: vec![Line::new(format!("length {n}")).field("ell", ell).field("length", n)] })
}

fn census(p: u64, family: &str, j: u32, fast: bool) -> Result<Report> {
    let f: Family = family.parse()?;
    let formula = asymptotics::census_formula(f, p, j);
    let name = match f {
        Family::K | Family::KConj => "(q+1)q^j",
        _ => "2q^j",
    };
    let h = asymptotics::census_subgroup(f, j);
    let mut lines = Vec::new();
    if fast {
        lines.push(Line::new(format!("formula {name}: {formula}")).field("subgroup", h.name()).field("formula", formula));
    } else {
        let n = asymptotics::coset_census(f, p, j)?;
        lines.push(
            Line::new(format!("{n} (formula {name}: {formula})"))
                .field("subgroup", h.name())
                .field("count", n)
                .field("formula", formula)
                .check(n == formula),
        );
        let gl = asymptotics::orbit_count(p, &h, false)?;
        lines.push(Line::new(format!("GL2 side {gl} (SL2 side: {n})")).field("gl2_count", gl).check(gl == n));
    }
    Ok(Report { command: "census".into(), lines })
}

fn parse_datum(s: &Arc<Setting>, datum: &str, seed: u64) -> Result<InducingDatum> {
    let t = datum.trim();
    let (parity, rest) = match t.chars().next() {
        Some('+') => (Parity::Plus, &t[1..]),
        Some('-') => (Parity::Minus, &t[1..]),
        _ => (Parity::Both, t),
    };
    let (label, member) = match rest.split_once('#') {
        Some((l, k)) => (l, Some(k.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad member index in {datum:?}")))?)),
        None => (rest, None),
    };
    let label = parse_label(label, s.q)?;
    match member {
        None => InducingDatum::new(s, &label, parity),
        Some(k) => {
            if parity == Parity::Both {
                return invalid("a packet member needs a sign, e.g. +Cusp(2)#1");
            }
            let members: Vec<InducingDatum> = InducingDatum::packet_members(s, &label, seed)?.into_iter().filter(|m| m.parity == parity).collect();
            members.into_iter().nth(k.wrapping_sub(1)).ok_or_else(|| Error::InvalidInput(format!("no member #{k} in {datum:?}")))
        }
    }
}

fn invariants(q: u64, datum: &str, family: &str, js: &str, fast: bool, seed: u64) -> Result<Report> {
    let s = Setting::new(q, 0)?;
    let d = parse_datum(&s, datum, seed)?;
    let f: Family = family.parse()?;
    let mut lines = Vec::new();
    for j in parse_range(js)? {
        let h = MPSubgroup::new(f, j);
        let formula = d.formula(&h);
        let mut line = Line::new("").field("datum", &d.name).field("subgroup", h.name()).field("j", j).field("formula", formula);
        if fast {
            line.text = format!("{}: formula {}", h.name(), formula.map_or("-".into(), |x| x.to_string()));
        } else {
            let sum = asymptotics::invariant_dim(&d, &h)?;
            line.text = format!("{}: {} (formula: {})", h.name(), sum.total, formula.map_or("-".into(), |x| x.to_string()));
            line = line.field("dim", sum.total).field("terms", &sum.terms);
            if let Some(x) = formula {
                line = line.check(x == sum.total as i64);
            }
        }
        lines.push(line);
    }
    Ok(Report { command: "invariants".into(), lines })
}

fn germ_check(q: u64, js: &str, label: Option<&str>, drop: Option<usize>, family: &str, seed: u64) -> Result<Report> {
    let s = Setting::new(q, 0)?;
    let label = match label {
        Some(l) => parse_label(l, q)?.normalize(&s)?,
        None => s
            .cusp_exponents()
            .into_iter()
            .map(IrrepLabel::Cusp)
            .find(|l| l.restriction_length(&s) == 2)
            .ok_or_else(|| Error::InvalidInput(format!("no depth-zero packet of size 4 for q = {q}")))?,
    };
    let mut members = InducingDatum::packet_members(&s, &label, seed)?;
    if let Some(k) = drop {
        if k == 0 || k > members.len() {
            return invalid(format!("member {k} out of range 1..={}", members.len()));
        }
        members.remove(k - 1);
    }
    let g = asymptotics::germ_identity_check(&members, family.parse()?, parse_range(js)?)?;
    let mut lines: Vec<Line> = g
        .rows
        .iter()
        .map(|r| {
            Line::new(format!("j={}: target {} - members {:?} = {}", r.j, r.target, r.members, r.difference))
                .field("j", r.j)
                .field("target", r.target)
                .field("members", &r.members)
                .field("difference", r.difference)
        })
        .collect();
    let stable = g.a0.is_some();
    let expect_stable = drop.is_none();
    let text = match (g.threshold, g.a0) {
        (Some(t), Some(a)) => format!("stabilizes from j={t} at a0 = {a}"),
        _ => "does not stabilize".to_string(),
    };
    let text = if expect_stable { text } else { format!("{text} (negative control)") };
    lines.push(
        Line::new(text)
            .field("members", &g.members)
            .field("threshold", g.threshold)
            .field("a0", g.a0)
            .field("negative_control", !expect_stable)
            .check(stable == expect_stable),
    );
    Ok(Report { command: "germ-check".into(), lines })
}

fn whittaker(d: u32, r: u32, fast: bool) -> Result<Report> {
    let rep = whittakerf2::lattice_report(d, r)?;
    let expect = 1u64 << r;
    let mut lines = vec![Line::new(format!("exponent {} (2^r: {expect})", rep.exponent))
        .field("d", d)
        .field("r", r)
        .field("exponent", rep.exponent)
        .field("generators", rep.generators)
        .field("invariant_factors", &rep.invariant_factors)
        .check(rep.exponent == expect)];
    if r > 0 && !fast {
        let ok = whittakerf2::doubling_inclusion_check(d, r)?;
        lines.push(Line::new(format!("2*I_{} in I_{r}: {ok}", r - 1)).field("doubling_inclusion", ok).check(ok));
    }
    Ok(Report { command: "whittaker".into(), lines })
}

pub fn execute(cfg: &RunConfig) -> Result<Report> {
    let (fast, seed) = (cfg.fast, cfg.seed);
    match &cfg.command {
        Command::Irreps { q, char_r } => irreps(*q, *char_r, fast, seed),
        Command::Restrict { q, label, char_r } => restrict(*q, label, *char_r, fast, seed),
        Command::ModEll { q, label, ell } => mod_ell(*q, label, *ell, fast, seed),
        Command::Packet { descriptor } => packet(descriptor, fast, seed),
        Command::XSigma { character } => x_sigma(character, fast),
        Command::ScModEll { character, ell } => sc_mod_ell(character, *ell),
        Command::Census { p, family, j } => census(*p, family, *j, fast),
        Command::Invariants { q, datum, family, js } => invariants(*q, datum, family, js, fast, seed),
        Command::GermCheck { q, js, label, drop, family } => germ_check(*q, js, label.as_deref(), *drop, family, seed),
        Command::Whittaker { d, r } => whittaker(*d, *r, fast),
    }
}

/// Exit status for an error: 2 for bad input, 3 for resource limits, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => 3,
        Error::InvalidInput(_) | Error::InvalidField(_) | Error::NotRegular | Error::NotIntegral | Error::Unsupported(_) => 2,
        Error::NeedsLargerField | Error::Internal(_) => 1,
    }
}

/// Run with explicit arguments; returns the exit status and what would go to stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (2, String::new(), text) };
        }
    };
    let report = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => return (exit_code(&e), String::new(), format!("error: {e}\n")),
    };
    let out = match report.render(cfg.format) {
        Ok(o) => o,
        Err(e) => return (exit_code(&e), String::new(), format!("error: {e}\n")),
    };
    let mut err = String::new();
    for l in report.lines.iter().filter(|l| l.pass == Some(false)) {
        err += &format!("cross-check failed: {}\n", l.text);
    }
    let code = if report.passed() { 0 } else { 1 };
    if let Some(path) = &cfg.output {
        if let Err(e) = std::fs::write(path, &out) {
            return (2, String::new(), format!("error: cannot write {}: {e}\n", path.display()));
        }
        return (code, String::new(), err);
    }
    (code, out, err)
}

pub fn main() -> i32 {
    let (code, out, err) = run(std::env::args_os());
    print!("{out}");
    let _ = std::io::stdout().flush();
    eprint!("{err}");
    code
}
