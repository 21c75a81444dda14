use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use heightforge::arithmetic::{
    alpha_v, arithmetic_escape_rate, height_report, sample_v, samples_to_csv, specialize_pair, BITS,
};
use heightforge::catalog::{
    divergent_alpha_sequence, itinerary_escape_rate, named_example, parse_m_sequence, reproduce,
    Itinerary,
};
use heightforge::exact::{parse_rat, PlaceK, PlaceQ, Rat};
use heightforge::fatou::{
    check_hole_avoiding_any_lift, search_fatou_certificate, CertificateBudget,
};
use heightforge::format::{self, DIGITS};
use heightforge::geometric::{divisor_of, geometric_escape_rate, EscapeOptions};
use heightforge::lift::{precision_cap, LiftK, PointK, PrecisionPolicy};
use heightforge::Error;

#[derive(Parser)]
#[command(
    name = "heightforge",
    version,
    about = "Escape rates and canonical heights over Q(t)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Escape rate at a place of Q(t) (--place-k), of Q after specializing
    /// (--place-q with --t), or alpha_v (--place-k with --place-q).
    EscapeRate(Common),
    /// Divisor of escape rates over the singular set.
    Divisor(Common),
    /// Hole-avoidance verdict at a place of Q(t).
    HoleAvoiding(Common),
    /// Searches for a coordinate change making the pair hole-avoiding.
    FatouCertificate(Common),
    /// Canonical height, Weil height and V_v at one parameter.
    Vheight(Common),
    /// V_v over a parameter grid.
    SampleV(Common),
    /// Runs a built-in example against its known values.
    Reproduce {
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// JSON map file.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Built-in example name.
    #[arg(long)]
    example: Option<String>,
    /// "inf", comma-separated coefficients of a(t), or a JSON point.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long = "place-k")]
    place_k: Option<String>,
    #[arg(long = "place-q")]
    place_q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// "a:b:n", n evenly spaced rational parameters from a to b.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long = "max-iter", default_value_t = 200)]
    max_iter: usize,
    /// Starting jet precision.
    #[arg(long)]
    precision: Option<usize>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Itinerary such as "+(+-)*" (cantor-julia).
    #[arg(long, allow_hyphen_values = true)]
    itinerary: Option<String>,
    /// Comma-separated integers (divergent-alpha).
    #[arg(long)]
    m: Option<String>,
}

enum Failure {
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn parse_err(msg: impl Into<String>) -> Failure {
    Failure::Lib(Error::Parse(msg.into()))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::InvalidInput(_)
        | Error::DegenerateMap
        | Error::InconsistentItinerary(_) => 2,
        Error::ExcludedParameter(_) | Error::IrrationalPlace(_) | Error::OnSupport => 3,
        Error::PrecisionExhausted(_) | Error::ToleranceUnreachable(_) | Error::ResourceLimit(_) => {
            4
        }
        _ => 1,
    }
}

impl Common {
    fn pair(&self) -> Res<(LiftK, PointK)> {
        let (f, a) = match (&self.map, &self.example) {
            (Some(_), Some(_)) => {
                return Err(parse_err("give either --map or --example, not both"))
            }
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
                let f = format::parse_map(&text)?;
                let a = self
                    .point
                    .as_deref()
                    .ok_or_else(|| parse_err("--map needs --point"))?;
                (f, format::parse_point(a)?)
            }
            (None, Some(name)) => {
                let ex = named_example(name).map_err(|e| parse_err(e.to_string()))?;
                let a = match &self.point {
                    Some(p) => format::parse_point(p)?,
                    None => ex.a,
                };
                (ex.f, a)
            }
            (None, None) => return Err(parse_err("need --map or --example")),
        };
        Ok((f, a))
    }

    fn place_k(&self) -> Res<Option<PlaceK>> {
        self.place_k
            .as_deref()
            .map(|s| s.parse::<PlaceK>().map_err(|e| parse_err(e.to_string())))
            .transpose()
    }

    fn place_q(&self) -> Res<Option<PlaceQ>> {
        self.place_q
            .as_deref()
            .map(|s| s.parse::<PlaceQ>().map_err(|e| parse_err(e.to_string())))
            .transpose()
    }

    fn t0(&self) -> Res<Option<Rat>> {
        self.t
            .as_deref()
            .map(|s| parse_rat(s).map_err(Failure::from))
            .transpose()
    }

    fn tol(&self) -> Res<f64> {
        if self.tol > 0.0 && self.tol.is_finite() {
            Ok(self.tol)
        } else {
            Err(parse_err("--tol must be positive"))
        }
    }

    fn options(&self) -> Res<EscapeOptions> {
        let cap = precision_cap();
        let start = self.precision.unwrap_or(PrecisionPolicy::default().start);
        if start == 0 || start > cap {
            return Err(parse_err(format!("--precision must lie in 1..={cap}")));
        }
        Ok(EscapeOptions {
            max_iter: self.max_iter,
            policy: PrecisionPolicy { start, cap },
            ..EscapeOptions::default()
        })
    }

    fn require_json(&self, what: &str) -> Res<()> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(parse_err(format!("{what} has no CSV form"))),
        }
    }
}

fn parse_grid(s: &str) -> Res<Vec<Rat>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(parse_err(format!("grid must be \"a:b:n\", got {s:?}")));
    };
    let a = parse_rat(a)?;
    let b = parse_rat(b)?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| parse_err(format!("bad grid count {n:?}")))?;
    if n == 0 {
        return Err(parse_err("grid needs at least one point"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = (&b - &a) / Rat::from_integer((n as i64 - 1).into());
    Ok((0..n)
        .map(|k| &a + &step * Rat::from_integer((k as i64).into()))
        .collect())
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn escape_rate(c: &Common) -> Res<String> {
    c.require_json("escape-rate")?;
    let (f, a) = c.pair()?;
    let opts = c.options()?;
    if let Some(s) = &c.itinerary {
        if c.example.as_deref() != Some("cantor-julia") {
            return Err(parse_err("--itinerary applies to --example cantor-julia"));
        }
        let it: Itinerary = s.parse()?;
        let mut v = format::escape_result_json(&itinerary_escape_rate(&it, c.max_iter));
        v["itinerary"] = json!(it.to_string());
        return Ok(json_text(&v));
    }
    let v = match (c.place_k()?, c.place_q()?, c.t0()?) {
        (Some(g), None, None) => {
            format::escape_result_json(&geometric_escape_rate(&f, &a, &g, &opts)?)
        }
        (None, Some(v), Some(t0)) => {
            let sp = specialize_pair(&f, &a, &t0)?;
            let g = arithmetic_escape_rate(&sp, &v, c.tol()?)?;
            json!({ "t": t0.to_string(), "escape_rate": format::log_value_json(&g) })
        }
        (Some(g), Some(v), None) => {
            let al = alpha_v(&f, &a, &g, &v, c.tol()?)?;
            json!({ "place_k": g.to_string(), "alpha": format::log_value_json(&al) })
        }
        _ => {
            return Err(parse_err(
                "use --place-k, --place-q with --t, or --place-k with --place-q",
            ))
        }
    };
    Ok(json_text(&v))
}

fn divisor(c: &Common) -> Res<String> {
    let (f, a) = c.pair()?;
    let d = divisor_of(&f, &a, &c.options()?)?;
    Ok(match c.format {
        Format::Json => json_text(&format::divisor_json(&d)),
        Format::Csv => {
            let rows: Vec<Vec<String>> = d
                .results
                .iter()
                .map(|(g, r)| {
                    vec![
                        g.to_string(),
                        r.value.lo().to_string(),
                        r.value.hi().to_string(),
                        r.certification.name().into(),
                    ]
                })
                .collect();
            csv_string(&["place", "lo", "hi", "certification"], &rows)
        }
    })
}

fn hole_avoiding(c: &Common) -> Res<String> {
    c.require_json("hole-avoiding")?;
    let (f, a) = c.pair()?;
    let g = c
        .place_k()?
        .ok_or_else(|| parse_err("hole-avoiding needs --place-k"))?;
    let verdict = check_hole_avoiding_any_lift(&f, &a, &g, c.max_iter)?;
    let mut v = serde_json::to_value(&verdict).expect("plain data");
    v["place"] = json!(g.to_string());
    Ok(json_text(&v))
}

fn fatou_certificate(c: &Common) -> Res<String> {
    c.require_json("fatou-certificate")?;
    let (f, a) = c.pair()?;
    let g = c
        .place_k()?
        .ok_or_else(|| parse_err("fatou-certificate needs --place-k"))?;
    let budget = CertificateBudget {
        max_iter: c.max_iter,
        ..CertificateBudget::default()
    };
    let v = match search_fatou_certificate(&f, &a, &g, &budget) {
        Some(cert) => {
            json!({ "place": g.to_string(), "found": true, "certificate": format::certificate_json(&cert) })
        }
        None => json!({ "place": g.to_string(), "found": false, "certificate": null }),
    };
    Ok(json_text(&v))
}

fn vheight(c: &Common) -> Res<String> {
    let (f, a) = c.pair()?;
    let t0 = c.t0()?.ok_or_else(|| parse_err("vheight needs --t"))?;
    let div = divisor_of(&f, &a, &c.options()?)?;
    let r = height_report(&f, &a, &div, &t0, c.tol()?)?;
    Ok(match c.format {
        Format::Json => json_text(&format::height_report_json(&r)),
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .per_place
                .iter()
                .map(|(v, g)| {
                    let (glo, ghi) = g.to_interval(BITS).to_decimal(DIGITS);
                    let (vlo, vhi) = r.v[v].to_interval(BITS).to_decimal(DIGITS);
                    vec![v.to_string(), glo, ghi, vlo, vhi]
                })
                .collect();
            csv_string(&["place", "G_lo", "G_hi", "V_lo", "V_hi"], &rows)
        }
    })
}

fn sample(c: &Common) -> Res<String> {
    let (f, a) = c.pair()?;
    let v = c
        .place_q()?
        .ok_or_else(|| parse_err("sample-v needs --place-q"))?;
    let grid = parse_grid(
        c.grid
            .as_deref()
            .ok_or_else(|| parse_err("sample-v needs --grid"))?,
    )?;
    let div = divisor_of(&f, &a, &c.options()?)?;
    let rows = sample_v(&f, &a, &div, &grid, &v, c.tol()?)?;
    Ok(match c.format {
        Format::Csv => samples_to_csv(&rows, DIGITS),
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "t": r.t0.to_string(),
                        "G": format::log_value_json(&r.g),
                        "hD": format::log_value_json(&r.hd),
                        "V": format::log_value_json(&r.v),
                    })
                })
                .collect();
            json_text(&json!({ "place": v.to_string(), "samples": rows }))
        }
    })
}

fn reproduce_cmd(name: &str, c: &Common) -> Res<String> {
    let m = c.m.as_deref().map(parse_m_sequence).transpose()?;
    let checks = reproduce(name, m.as_deref())?;
    let pass = checks.iter().all(|k| k.pass);
    let out = match c.format {
        Format::Json => {
            let list: Vec<Value> = checks
                .iter()
                .map(|k| json!({ "label": k.label, "expected": k.expected, "got": k.got, "pass": k.pass }))
                .collect();
            let mut v = json!({ "example": name, "status": if pass { "PASS" } else { "FAIL" }, "checks": list });
            if name == "divergent-alpha" {
                let m = m.unwrap_or_else(|| vec![2, 50]);
                let n = (m.iter().sum::<u64>() + m.len() as u64 - 1).min(64) as usize;
                let da = divergent_alpha_sequence(&m, n)?;
                let route = |xs: &[heightforge::exact::LogValue]| -> Vec<Value> {
                    xs.iter().map(format::log_value_json).collect()
                };
                v["routes"] = json!({
                    "m": m,
                    "closed_form": route(&da.closed_form),
                    "jet": da.jet.as_deref().map(route),
                });
            }
            json_text(&v)
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|k| {
                    vec![
                        k.label.clone(),
                        k.expected.clone(),
                        k.got.clone(),
                        k.pass.to_string(),
                    ]
                })
                .collect();
            csv_string(&["label", "expected", "got", "pass"], &rows)
        }
    };
    if pass {
        Ok(out)
    } else {
        Err(Failure::Mismatch(out))
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::EscapeRate(c) => (c, escape_rate(c)),
        Command::Divisor(c) => (c, divisor(c)),
        Command::HoleAvoiding(c) => (c, hole_avoiding(c)),
        Command::FatouCertificate(c) => (c, fatou_certificate(c)),
        Command::Vheight(c) => (c, vheight(c)),
        Command::SampleV(c) => (c, sample(c)),
        Command::Reproduce { name, common } => (common, reproduce_cmd(name, common)),
    };
    let (text, code) = match result {
        Ok(t) => (t, 0),
        Err(Failure::Mismatch(t)) => (t, 1),
        Err(Failure::Lib(e)) => {
            eprintln!("heightforge: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Err(e) = emit(&text, common.out.as_ref()) {
        eprintln!("heightforge: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
