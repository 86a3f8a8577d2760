// SPDX-License-Identifier: Apache-2.0

//! btheta: command-line front end for the binary theta library.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use binary_theta::classgroup::ClassGroup;
use binary_theta::numerics::PrecisionContext;
use binary_theta::petersson::{closed_form_vv, petersson_gram, PeterssonValue};
use binary_theta::scalartheta::{fmt_float, theta_ideal};
use binary_theta::verify::{verify_discriminant, vv_nmax};
use binary_theta::vvtheta::{base_lattice, vv_theta, vv_theta_psi};
use binary_theta::weilrep::{lift_coefficients, WeilRep};
use binary_theta::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const CHARACTER_HELP: &str = "Characters are addressed by index into the canonical list printed by \
`classgroup`: the trivial character first, then by exponent vector in lexicographic order. \
Classes are addressed by index into the list of reduced forms.";

#[derive(Parser, Debug)]
#[command(name = "btheta", version, about = "Binary theta series, their vector-valued lifts and Petersson products")]
#[command(after_help = CHARACTER_HELP)]
struct RunConfig {
    /// Fundamental discriminant D < 0
    #[arg(long, global = true, allow_hyphen_values = true, default_value_t = -23)]
    disc: i64,
    /// Working precision in bits
    #[arg(long, global = true, default_value_t = 128)]
    prec_bits: u32,
    /// Coefficient bound, in units of e(m tau)
    #[arg(long, global = true, default_value_t = 50)]
    nmax: usize,
    /// Gauss-Legendre nodes per direction for the quadrature
    #[arg(long, global = true, default_value_t = 32)]
    quad_nodes: usize,
    /// Height splitting the scalar quadrature from the strip integral
    #[arg(long = "height-T", global = true, default_value_t = 12.0)]
    height_t: f64,
    /// Emit JSON (the default; accepted for scripting clarity)
    #[arg(long, global = true)]
    json: bool,
    /// Pretty-print the JSON output
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced forms, group structure, characters and CM points
    Classgroup,
    /// Scalar theta series of a class
    Theta {
        #[arg(long, default_value_t = 0)]
        class: usize,
    },
    /// Vector-valued theta series Theta_P(tau, h) with P in class a
    Vvtheta {
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long, default_value_t = 0)]
        h: usize,
    },
    /// Coefficients of the lift of the theta series of a class
    Lift {
        #[arg(long, default_value_t = 0)]
        class: usize,
        /// class of the lattice carrying the Weil representation
        #[arg(long, default_value_t = 0)]
        a: usize,
    },
    /// Petersson product of Theta_P(psi) and Theta_P(chi)
    Petersson {
        #[arg(long)]
        psi: usize,
        #[arg(long)]
        chi: usize,
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long, value_enum, default_value_t = Method::ClosedForm)]
        method: Method,
    },
    /// Run every check for one discriminant
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    #[value(name = "quadrature")]
    Quadrature,
    #[value(name = "closed_form")]
    ClosedForm,
    #[value(name = "both")]
    Both,
}

/// Failure modes mapped to exit codes.
enum Failure {
    Verification(String),
    Input(Error),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Truncation(_) | Error::Invariant(_) | Error::SearchExhausted(_) => Failure::Numeric(e),
            _ => Failure::Input(e),
        }
    }
}

fn context(cfg: &RunConfig) -> PrecisionContext {
    let mut ctx = PrecisionContext::with_bits(cfg.prec_bits).with_nodes(cfg.quad_nodes, cfg.quad_nodes);
    ctx.height_t = cfg.height_t;
    ctx
}

fn cmd_classgroup(cfg: &RunConfig) -> Result<Value, Failure> {
    let cg = ClassGroup::new(cfg.disc)?;
    let prec = cfg.prec_bits;
    let forms: Vec<Value> = cg.classes.iter().map(|f| json!([f.a, f.b, f.c])).collect();
    let characters: Vec<Value> = cg
        .characters()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "index": i,
                "exponents": c.exponents,
                "order": c.order(),
                // value on class j is zeta_m^labels[j]
                "m": c.m,
                "labels": c.labels,
            })
        })
        .collect();
    let cm: Vec<Value> = (0..cg.h)
        .map(|b| {
            let p = cg.cm_point(b, prec);
            json!([fmt_float(&p.u), fmt_float(&p.v)])
        })
        .collect();
    Ok(json!({
        "disc": cg.d(),
        "h": cg.h,
        "forms": forms,
        "structure": cg.cyclic_orders,
        "generators": cg.generators,
        "characters": characters,
        "cm_points": cm,
    }))
}

fn cmd_theta(cfg: &RunConfig, class: usize) -> Result<Value, Failure> {
    let cg = ClassGroup::new(cfg.disc)?;
    let th = theta_ideal(&cg, class, cfg.nmax)?;
    let coeffs: Vec<String> =
        (0..=cfg.nmax).map(|n| th.int_coeff(n).map(|c| c.to_string()).unwrap_or_default()).collect();
    Ok(json!({
        "disc": cg.d(),
        "class": class,
        "form": cg.classes[class].to_string(),
        "weight": "1",
        "coeffs": coeffs,
    }))
}

fn cmd_vvtheta(cfg: &RunConfig, a: usize, h: usize) -> Result<Value, Failure> {
    let cg = ClassGroup::new(cfg.disc)?;
    let vt = vv_theta(&cg, a, h, cfg.nmax * cg.disc.abs() as usize)?;
    let mut out = vt.form.to_json(cfg.prec_bits);
    out["a"] = json!(a);
    out["h"] = json!(h);
    out["acted_class"] = json!(vt.acted_class);
    out["component_zero"] = json!(vt.component_zero_scalar().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    Ok(out)
}

fn cmd_lift(cfg: &RunConfig, class: usize, a: usize) -> Result<Value, Failure> {
    let cg = ClassGroup::new(cfg.disc)?;
    cg.check_class(class)?;
    let ctx = context(cfg);
    let (_, df) = base_lattice(&cg, a)?;
    let weil = WeilRep::new(df, cfg.prec_bits);
    let mut terms = 1024;
    let lifted = loop {
        let f = theta_ideal(&cg, class, terms)?.numeric(cfg.prec_bits);
        match lift_coefficients(&f, &weil, cfg.nmax * df.n as usize, &ctx) {
            Err(Error::Truncation(_)) if terms < 1 << 16 => terms *= 2,
            other => break other?,
        }
    };
    let mut out = lifted.to_json();
    out["class"] = json!(class);
    out["a"] = json!(a);
    out["flagged"] = json!(lifted.flagged);
    Ok(out)
}

fn value_json(v: &PeterssonValue, psi: usize, chi: usize) -> Value {
    v.to_json((&psi.to_string(), &chi.to_string()))
}

fn cmd_petersson(cfg: &RunConfig, psi: usize, chi: usize, a: usize, method: Method) -> Result<Value, Failure> {
    let cg = ClassGroup::new(cfg.disc)?;
    let ctx = context(cfg);
    let chars = cg.characters();
    let cf = closed_form_vv(&cg, psi, chi, a, &ctx)?;
    if method == Method::ClosedForm {
        return Ok(value_json(&cf, psi, chi));
    }
    let n_max = vv_nmax(cg.disc.abs(), ctx.bits);
    let f = vv_theta_psi(&cg, a, &chars[psi], n_max)?.to_numeric(ctx.bits);
    let g = vv_theta_psi(&cg, a, &chars[chi], n_max)?.to_numeric(ctx.bits);
    let q = petersson_gram(&[f, g], &[(0, 1)], 1, &ctx)?.remove(0);
    if method == Method::Quadrature {
        return Ok(value_json(&q, psi, chi));
    }
    let diff = (q.re() - cf.re()).hypot(q.im() - cf.im());
    let tol = q.error + cf.error + 1e-5 * cf.abs().max(1.0);
    let report = json!({
        "values": [value_json(&q, psi, chi), value_json(&cf, psi, chi)],
        "difference": format!("{diff:e}"),
        "tolerance": format!("{tol:e}"),
        "agree": diff <= tol,
    });
    if diff > tol {
        return Err(Failure::Verification(format!("quadrature and closed form differ by {diff:e}\n{report}")));
    }
    Ok(report)
}

fn cmd_verify(cfg: &RunConfig) -> Result<Value, Failure> {
    let ctx = context(cfg);
    let checks = verify_discriminant(cfg.disc, &ctx)?;
    for c in &checks {
        eprintln!("{}", c.line());
    }
    let passed = checks.iter().all(|c| c.passed);
    let report = json!({ "disc": cfg.disc, "passed": passed, "checks": checks });
    if !passed {
        let names: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        return Err(Failure::Verification(format!("failed: {}\n{report}", names.join(", "))));
    }
    Ok(report)
}

fn emit(cfg: &RunConfig, v: &Value) -> std::io::Result<()> {
    let text = if cfg.pretty { serde_json::to_string_pretty(v)? } else { v.to_string() };
    match &cfg.output {
        Some(path) => std::fs::write(path, text + "\n"),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    }
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let result = match &cfg.cmd {
        Command::Classgroup => cmd_classgroup(&cfg),
        Command::Theta { class } => cmd_theta(&cfg, *class),
        Command::Vvtheta { a, h } => cmd_vvtheta(&cfg, *a, *h),
        Command::Lift { class, a } => cmd_lift(&cfg, *class, *a),
        Command::Petersson { psi, chi, a, method } => cmd_petersson(&cfg, *psi, *chi, *a, *method),
        Command::Verify => cmd_verify(&cfg),
    };
    match result {
        Ok(v) => match emit(&cfg, &v) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(1)
        }
    }
}
