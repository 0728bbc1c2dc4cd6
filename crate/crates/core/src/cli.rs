//! The `coneq` command line.
//!
//! Every invocation writes one JSON document (CSV for `torus`) to standard
//! output or `--out`, and a short human summary to standard error.
//! Exit codes: 0 success, 1 failed verification, 2 usage or input error.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::Error;
use crate::pseudoherm::{sample_cone_point, sample_pseudo_unitary, CVector, ConePoint, Signature};
use crate::quotients::{canonicalize_ray, torus_coords, Split};
use crate::suites::{self, RunReport};
use crate::tangent::{
    cotangent_metric_qtilde, cotangent_metric_via_dualization, induced_metric, FrameChoice,
};
use crate::witt::{
    aperp_classify, aperp_dimension_estimate, chart_inverse, is_perp, kappa, kappa0, make_chart,
    ChartFrame,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "coneq",
    version,
    about = "Isotropic cones of pseudo-Hermitian forms and their quotients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Signature as `p,q`.
    #[arg(long, value_parser = parse_sig, default_value = "2,2")]
    sig: Signature,
    /// Base seed; falls back to CONEQ_SEED, then 0.
    #[arg(long, env = "CONEQ_SEED", default_value_t = 0)]
    seed: u64,
    /// Number of trials or samples.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Tolerance for isotropy and orthogonality of inputs; for `verify`
    /// and `oracle`, overrides the suite residual thresholds.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the document here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Cone,
    Unitary,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Frame {
    Adapted,
    Epsilon,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Route {
    Direct,
    Dual,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample cone points or pseudo-unitary matrices.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "cone")]
        kind: Kind,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Run across every test signature instead of `--sig`.
        #[arg(long)]
        battery: bool,
    },
    /// κ chart conversion.
    Chart {
        #[command(subcommand)]
        op: ChartOp,
    },
    /// Induced metric on Q′ at a cone point.
    Metric {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: PointArg,
        #[arg(long, value_enum, default_value = "adapted")]
        frame: Frame,
    },
    /// Degenerate cotangent metric on Q̃ at a cone point.
    Cometric {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: PointArg,
        #[arg(long, value_enum, default_value = "direct")]
        route: Route,
    },
    /// The boundary a⊥ of a chart.
    Aperp {
        #[command(subcommand)]
        op: AperpOp,
    },
    /// Plot data for the (1,1) torus: U(1) fiber orbits and null curves.
    Torus {
        #[command(flatten)]
        common: Common,
        /// Points per curve.
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
    /// Exact-arithmetic twin checks.
    Oracle {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args)]
struct PointArg {
    /// Cone point, re/im interleaved; sampled from the seed if omitted.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    x: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
struct CenterArg {
    /// Chart centre, re/im interleaved; defaults to e₁ + eₙ.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    center: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
enum ChartOp {
    /// (r, y) ↦ κ(r, y).
    Forward {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        center: CenterArg,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        r: f64,
        /// M_u coordinates, re/im interleaved; zero if omitted.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        y: Option<Vec<f64>>,
    },
    /// b ↦ (r, y), or InAperp.
    Inverse {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        center: CenterArg,
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            required = true
        )]
        b: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum AperpOp {
    /// Apex / Generic classification of a point of a⊥.
    Classify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        center: CenterArg,
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            required = true
        )]
        b: Vec<f64>,
    },
    /// Numerical dimension of the generic stratum.
    Dim {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        center: CenterArg,
    },
}

impl Common {
    fn input_tol(&self) -> f64 {
        self.tol.unwrap_or(crate::tol::DEFAULT_TOL)
    }
}

fn parse_sig(s: &str) -> Result<Signature, String> {
    let (p, q) = s.split_once(',').ok_or("expected p,q")?;
    let p: usize = p.trim().parse().map_err(|e| format!("p: {e}"))?;
    let q: usize = q.trim().parse().map_err(|e| format!("q: {e}"))?;
    Signature::new(p, q).map_err(|e| e.to_string())
}

/// Outcome of a command before it is written out.
struct Output {
    body: String,
    summary: String,
    code: i32,
}

impl Output {
    fn json(value: &Value, summary: String, code: i32) -> Self {
        let mut body = serde_json::to_string_pretty(value).expect("serializable");
        body.push('\n');
        Output {
            body,
            summary,
            code,
        }
    }
}

/// Run the command line `argv` (including the program name).
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let out_path = common(&cli.command).out.clone();
    match dispatch(cli.command) {
        Ok(output) => {
            let written = match &out_path {
                Some(path) => std::fs::write(path, &output.body).map_err(|e| e.to_string()),
                None => stdout
                    .write_all(output.body.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return EXIT_USAGE;
            }
            let _ = writeln!(stderr, "{}", output.summary);
            output.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Sample { common, .. }
        | Command::Verify { common, .. }
        | Command::Metric { common, .. }
        | Command::Cometric { common, .. }
        | Command::Torus { common, .. }
        | Command::Oracle { common } => common,
        Command::Chart { op } => match op {
            ChartOp::Forward { common, .. } | ChartOp::Inverse { common, .. } => common,
        },
        Command::Aperp { op } => match op {
            AperpOp::Classify { common, .. } | AperpOp::Dim { common, .. } => common,
        },
    }
}

fn dispatch(cmd: Command) -> Result<Output, Error> {
    let is_torus = matches!(cmd, Command::Torus { .. });
    if !is_torus && common(&cmd).format == Some(Format::Csv) {
        return Err(Error::Unsupported(
            "CSV output is only available for `torus`".into(),
        ));
    }
    match cmd {
        Command::Sample { common, kind } => sample(&common, kind),
        Command::Verify {
            common,
            suite,
            battery,
        } => verify(&common, &suite, battery),
        Command::Chart { op } => match op {
            ChartOp::Forward {
                common,
                center,
                r,
                y,
            } => chart_forward(&common, &center, r, y.as_deref()),
            ChartOp::Inverse { common, center, b } => chart_inv(&common, &center, &b),
        },
        Command::Metric {
            common,
            point,
            frame,
        } => metric(&common, &point, frame),
        Command::Cometric {
            common,
            point,
            route,
        } => cometric(&common, &point, route),
        Command::Aperp { op } => match op {
            AperpOp::Classify { common, center, b } => aperp(&common, &center, &b),
            AperpOp::Dim { common, center } => aperp_dim(&common, &center),
        },
        Command::Torus { common, steps } => torus(&common, steps),
        Command::Oracle { common } => oracle(&common),
    }
}

fn cone_point(sig: Signature, values: &[f64], tol: f64) -> Result<ConePoint, Error> {
    ConePoint::with_tol(CVector::from_interleaved(sig, values)?, tol)
}

fn point_or_sample(c: &Common, p: &PointArg) -> Result<ConePoint, Error> {
    match &p.x {
        Some(v) => cone_point(c.sig, v, c.input_tol()),
        None => Ok(sample_cone_point(c.sig, c.seed)),
    }
}

fn chart(c: &Common, center: &CenterArg) -> Result<ChartFrame, Error> {
    let x = match &center.center {
        Some(v) => cone_point(c.sig, v, c.input_tol())?,
        None => {
            let n = c.sig.n();
            ConePoint::new(&CVector::basis(c.sig, 0) + &CVector::basis(c.sig, n - 1))?
        }
    };
    make_chart(&x)
}

fn complex_coords(values: &[f64]) -> Result<Vec<Complex64>, Error> {
    if !values.len().is_multiple_of(2) {
        return Err(Error::DegenerateInput(
            "coordinates must be re/im pairs".into(),
        ));
    }
    Ok(values
        .chunks(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect())
}

fn sample(c: &Common, kind: Kind) -> Result<Output, Error> {
    let seeds = (0..c.trials as u64).map(|k| crate::rng::child_seed(c.seed, k));
    let samples: Vec<Value> = match kind {
        Kind::Cone => seeds
            .map(|s| json!(sample_cone_point(c.sig, s).vector()))
            .collect(),
        Kind::Unitary => seeds
            .map(|s| {
                let g = sample_pseudo_unitary(c.sig, s);
                let m = g.matrix();
                let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
                    .map(|i| {
                        (0..m.ncols())
                            .map(|j| [m[(i, j)].re, m[(i, j)].im])
                            .collect()
                    })
                    .collect();
                json!({ "matrix": rows, "isometry_residual": g.isometry_residual() })
            })
            .collect(),
    };
    let summary = format!(
        "sampled {} {:?} element(s) in signature {}",
        samples.len(),
        kind,
        c.sig
    );
    let doc = json!({ "signature": c.sig, "seed": c.seed, "kind": format!("{kind:?}").to_lowercase(), "samples": samples });
    Ok(Output::json(&doc, summary, EXIT_OK))
}

fn summarize(reports: &[RunReport]) -> (String, bool) {
    let mut s = String::new();
    let mut ok = true;
    for r in reports {
        ok &= r.ok();
        let _ = writeln!(
            s,
            "{} {:<20} {} {}/{} worst {:.2e} (threshold {:.0e})",
            if r.ok() { "PASS" } else { "FAIL" },
            r.suite,
            r.signature,
            r.passed,
            r.trials,
            r.worst_residual,
            r.threshold
        );
        if let Some(ce) = &r.counterexample {
            let _ = writeln!(s, "  counterexample: {ce}");
        }
    }
    s.pop();
    (s, ok)
}

/// Inapplicable suites are skipped, except when a single suite was named
/// for a single signature.
fn run_reports(c: &Common, names: &[&str], battery: bool) -> Result<Vec<RunReport>, Error> {
    let strict = names.len() == 1 && !battery;
    let sigs = if battery {
        Signature::test_battery()
    } else {
        vec![c.sig]
    };
    let mut reports = Vec::new();
    for sig in sigs {
        for name in names {
            let suite = suites::find_suite(name)
                .ok_or_else(|| Error::Unsupported(format!("unknown suite {name:?}")))?;
            if strict && !suite.applies_to(sig) {
                return Err(Error::Unsupported(format!(
                    "suite {name} does not apply to signature {sig}"
                )));
            }
            if suite.applies_to(sig) {
                reports.push(suites::run_suite_with_threshold(
                    name, sig, c.seed, c.trials, c.tol,
                )?);
            }
        }
    }
    Ok(reports)
}

fn verify(c: &Common, suite: &str, battery: bool) -> Result<Output, Error> {
    let names: Vec<&str> = if suite == "all" {
        suites::suites().iter().map(|s| s.name).collect()
    } else {
        vec![suite]
    };
    let reports = run_reports(c, &names, battery)?;
    let (summary, ok) = summarize(&reports);
    let doc = json!({ "ok": ok, "reports": reports });
    Ok(Output::json(
        &doc,
        summary,
        if ok { EXIT_OK } else { EXIT_FAILED },
    ))
}

fn chart_forward(
    c: &Common,
    center: &CenterArg,
    r: f64,
    y: Option<&[f64]>,
) -> Result<Output, Error> {
    let ch = chart(c, center)?;
    let y = match y {
        Some(v) => complex_coords(v)?,
        None => vec![Complex64::new(0.0, 0.0); ch.mu_basis().len()],
    };
    let k0 = kappa0(&ch, r, &y)?;
    let k = kappa(&ch, r, &y)?;
    let doc = json!({ "chart": ch, "r": r, "y": y, "kappa0": k0.vector(), "class": k });
    let summary = format!(
        "κ({r}, y) in signature {}, isotropy residual {:.1e}",
        c.sig,
        k0.isotropy_residual()
    );
    Ok(Output::json(&doc, summary, EXIT_OK))
}

fn chart_inv(c: &Common, center: &CenterArg, b: &[f64]) -> Result<Output, Error> {
    let ch = chart(c, center)?;
    let b = cone_point(c.sig, b, c.input_tol())?;
    let inv = chart_inverse(&ch, &b)?;
    let summary = match inv.point() {
        Some(p) => format!(
            "b = κ({}, y) with |y| = {:.3e}",
            p.r,
            p.y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
        ),
        None => "b lies in a⊥".to_string(),
    };
    Ok(Output::json(
        &serde_json::to_value(&inv).expect("serializable"),
        summary,
        EXIT_OK,
    ))
}

fn metric(c: &Common, p: &PointArg, frame: Frame) -> Result<Output, Error> {
    let x = point_or_sample(c, p)?;
    let choice = match frame {
        Frame::Adapted => FrameChoice::Adapted,
        Frame::Epsilon => FrameChoice::Epsilon,
    };
    let g = induced_metric(&x, choice)?;
    let summary = format!(
        "metric on T_xQ′ ({frame:?} frame): signature {:?}",
        g.signature()
    );
    Ok(Output::json(
        &serde_json::to_value(&g).expect("serializable"),
        summary,
        EXIT_OK,
    ))
}

fn cometric(c: &Common, p: &PointArg, route: Route) -> Result<Output, Error> {
    let x = point_or_sample(c, p)?;
    let g = match route {
        Route::Direct => cotangent_metric_qtilde(&x)?,
        Route::Dual => cotangent_metric_via_dualization(&x)?,
    };
    let summary = format!(
        "cometric on T*Q̃: rank {} of {}, radical dimension {}",
        g.rank(),
        g.dim(),
        g.radical_basis().len()
    );
    Ok(Output::json(
        &serde_json::to_value(&g).expect("serializable"),
        summary,
        EXIT_OK,
    ))
}

fn aperp(c: &Common, center: &CenterArg, b: &[f64]) -> Result<Output, Error> {
    let ch = chart(c, center)?;
    let b = cone_point(c.sig, b, c.input_tol())?;
    if !is_perp(ch.x(), &b, c.input_tol()) {
        return Err(Error::Domain(
            "b is not orthogonal to the chart centre".into(),
        ));
    }
    let class = aperp_classify(&ch, &b)?;
    let summary = format!(
        "a⊥ class: {}",
        serde_json::to_value(&class).expect("serializable")["kind"]
    );
    Ok(Output::json(
        &serde_json::to_value(&class).expect("serializable"),
        summary,
        EXIT_OK,
    ))
}

fn aperp_dim(c: &Common, center: &CenterArg) -> Result<Output, Error> {
    let ch = chart(c, center)?;
    let dim = aperp_dimension_estimate(&ch, c.seed)?;
    let expected = 2 * c.sig.n() - 5;
    let doc = json!({ "signature": c.sig, "seed": c.seed, "dimension": dim, "expected": expected });
    let summary = format!("generic stratum of a⊥: numerical dimension {dim} (2n−5 = {expected})");
    Ok(Output::json(
        &doc,
        summary,
        if dim == expected {
            EXIT_OK
        } else {
            EXIT_FAILED
        },
    ))
}

/// Curves on `Q′ ≅ S¹ × S¹` in torus angles: the U(1) orbit through each
/// sample, and the two null curves of `diag(1, −1)` through it.
fn torus(c: &Common, steps: usize) -> Result<Output, Error> {
    if c.sig.p() != 1 || c.sig.q() != 1 {
        return Err(Error::UnsupportedSignature(c.sig));
    }
    let split = Split::standard(c.sig);
    let mut rows: Vec<(String, usize, usize, f64, f64)> = Vec::new();
    for k in 0..c.trials {
        let x = sample_cone_point(c.sig, crate::rng::child_seed(c.seed, k as u64));
        let x = canonicalize_ray(&x, &split)?.vector().clone();
        let (a, b) = torus_coords(&x)?;
        for s in 0..steps {
            let t = TAU * s as f64 / steps as f64;
            let (fa, fb) = torus_coords(&x.scaled(Complex64::from_polar(1.0, t))?)?;
            rows.push(("fiber".into(), k, s, fa, fb));
            rows.push(("null_plus".into(), k, s, (a + t) % TAU, (b + t) % TAU));
            rows.push((
                "null_minus".into(),
                k,
                s,
                (a + t) % TAU,
                (b - t).rem_euclid(TAU),
            ));
        }
    }
    let summary = format!(
        "{} curve(s) of {steps} point(s) on the (1,1) torus",
        3 * c.trials
    );
    let body = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("curve,point,step,phi1,phi2\n");
            for (kind, k, step, a, b) in &rows {
                let _ = writeln!(s, "{kind},{k},{step},{a:.17e},{b:.17e}");
            }
            s
        }
        Format::Json => {
            let pts: Vec<Value> = rows
                .iter()
                .map(|(kind, k, step, a, b)| json!({ "curve": kind, "point": k, "step": step, "phi1": a, "phi2": b }))
                .collect();
            let mut s = serde_json::to_string_pretty(
                &json!({ "signature": c.sig, "seed": c.seed, "rows": pts }),
            )
            .expect("serializable");
            s.push('\n');
            s
        }
    };
    Ok(Output {
        body,
        summary,
        code: EXIT_OK,
    })
}

fn oracle(c: &Common) -> Result<Output, Error> {
    let reports = run_reports(c, &["field_axioms", "twin_agreement", "exact_twin"], false)?;
    let (summary, ok) = summarize(&reports);
    let doc = json!({ "ok": ok, "reports": reports });
    Ok(Output::json(
        &doc,
        summary,
        if ok { EXIT_OK } else { EXIT_FAILED },
    ))
}
