//! `clifsym`: builds certificates, prints summaries, gates on failed checks.
//!
//! Exit codes: 0 when every check passes, 2 when a check fails, 1 on usage
//! or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clifsym_core::certificate::{
    render_report, run, Certificate, Command, Expectation, InputSpec,
};
use clifsym_core::models::Variant;
use clifsym_core::scalar::parse_rational;
use clifsym_core::symmetry::{Ansatz, CLASSIFICATION_COLUMNS};
use clifsym_core::{Error, ExactScalar, Extension};
use num_rational::BigRational;

#[derive(Parser, Debug)]
#[command(name = "clifsym", version, about = "Exact discrete-symmetry audits for Dirac-type Hamiltonians")]
struct Cli {
    /// Write the certificate (or report) to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the full JSON certificate instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for classification cells.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for random momenta.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Spatial dimension.
    #[arg(long, default_value_t = 4)]
    dim: usize,
    /// single, single-, doubled or massless.
    #[arg(long, default_value = "single")]
    variant: String,
    /// Mass κ as an integer, fraction or decimal.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    mass: String,
    /// sigma3 or sigma2.
    #[arg(long, default_value = "sigma3")]
    extension: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build the gamma system for one dimension and check its relations.
    Gamma {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value = "sigma3")]
        extension: String,
    },
    /// Solve the intertwiner equations for selected symmetries.
    SolveTau {
        #[command(flatten)]
        model: ModelArgs,
        /// Symmetry name; repeat or comma-separate. Default: all columns.
        #[arg(long, value_delimiter = ',')]
        symmetry: Vec<String>,
        /// full, clifford2 or clifford2-identity.
        #[arg(long, default_value = "full")]
        ansatz: String,
    },
    /// Existence table over dimensions and variants.
    Classify {
        #[arg(long, value_delimiter = ',', default_value = "4")]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "single")]
        variants: Vec<String>,
        #[arg(long, default_value = "1")]
        mass: String,
        #[arg(long, default_value = "sigma3")]
        extension: String,
        #[arg(long, default_value = "full")]
        ansatz: String,
        /// Expected verdict, e.g. `Tw:no`; repeatable.
        #[arg(long)]
        expect: Vec<String>,
    },
    /// Dispersion proofs and mass-profile summaries.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// Momentum components, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Vec<String>,
        /// Mass profile as JSON `[[m2, weight], ...]`.
        #[arg(long)]
        profile: Option<String>,
        /// Number of additional random rational momenta.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Rest-frame little-group labels (d = 4, massive).
    Labels {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Render a summary of existing certificate files.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Checks(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn rational(s: &str) -> Result<BigRational, Failure> {
    parse_rational(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn extension(s: &str) -> Result<Extension, Failure> {
    match s {
        "sigma3" => Ok(Extension::Sigma3),
        "sigma2" => Ok(Extension::Sigma2),
        other => Err(Failure::Usage(format!("unknown extension {other:?}"))),
    }
}

fn variants(v: &[String]) -> Result<Vec<Variant>, Failure> {
    v.iter().map(|s| Variant::parse(s).map_err(Failure::from)).collect()
}

fn model_input(cmd: Command, m: &ModelArgs) -> Result<InputSpec, Failure> {
    let mut i = InputSpec::new(cmd);
    i.dims = vec![m.dim];
    i.variants = variants(std::slice::from_ref(&m.variant))?;
    i.mass = rational(&m.mass)?;
    i.extension = extension(&m.extension)?;
    Ok(i)
}

fn profile(text: &str) -> Result<Vec<(ExactScalar, ExactScalar)>, Failure> {
    let bad = |m: String| Failure::Usage(format!("invalid --profile: {m}"));
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let entry = |x: &serde_json::Value| -> Result<ExactScalar, Failure> {
        let s = match x {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            other => return Err(bad(format!("{other} is not a number"))),
        };
        Ok(ExactScalar::real(rational(&s)?))
    };
    v.as_array()
        .ok_or_else(|| bad("expected an array of pairs".into()))?
        .iter()
        .map(|pair| match pair.as_array().map(|a| a.as_slice()) {
            Some([m2, g]) => Ok((entry(m2)?, entry(g)?)),
            _ => Err(bad(format!("{pair} is not a pair"))),
        })
        .collect()
}

fn input_for(cli: &Cli) -> Result<Option<InputSpec>, Failure> {
    let mut input = match &cli.command {
        Cmd::Gamma { dim, extension: e } => {
            let mut i = InputSpec::new(Command::Gamma);
            i.dims = vec![*dim];
            i.extension = extension(e)?;
            i
        }
        Cmd::SolveTau { model, symmetry, ansatz } => {
            let mut i = model_input(Command::SolveTau, model)?;
            for s in symmetry {
                if !CLASSIFICATION_COLUMNS.contains(&s.as_str()) && s != "Tp-literal" {
                    return Err(Failure::Usage(format!("unknown symmetry {s:?}")));
                }
            }
            i.symmetries = symmetry.clone();
            i.ansatz = Ansatz::parse(ansatz)?;
            i
        }
        Cmd::Classify { dims, variants: vs, mass, extension: e, ansatz, expect } => {
            let mut i = InputSpec::new(Command::Classify);
            i.dims = dims.clone();
            i.variants = variants(vs)?;
            i.mass = rational(mass)?;
            i.extension = extension(e)?;
            i.ansatz = Ansatz::parse(ansatz)?;
            i.expect = expect
                .iter()
                .map(|s| Expectation::parse(s))
                .collect::<Result<_, _>>()?;
            i
        }
        Cmd::Spectrum { model, p, profile: prof, random } => {
            let mut i = model_input(Command::Spectrum, model)?;
            i.momentum = p
                .iter()
                .map(|s| rational(s).map(ExactScalar::real))
                .collect::<Result<_, _>>()?;
            if !i.momentum.is_empty() && i.momentum.len() != model.dim {
                return Err(Failure::Usage(format!(
                    "--p has {} components, expected {}",
                    i.momentum.len(),
                    model.dim
                )));
            }
            if let Some(text) = prof {
                i.profile = profile(text)?;
            }
            i.random_momenta = *random;
            i
        }
        Cmd::Labels { model } => model_input(Command::Labels, model)?,
        Cmd::Report { .. } => return Ok(None),
    };
    input.seed = cli.seed;
    Ok(Some(input))
}

fn summary(cert: &Certificate) -> String {
    let r = &cert.results;
    let mut out = String::new();
    for g in &r.gamma {
        let failing = g.relations.iter().filter(|x| !x.holds).count();
        out += &format!(
            "d={} {}: {} gammas of size {}, {} relation pairs, {}\n",
            g.d,
            g.extension.label(),
            g.gammas.len(),
            g.rep_dim,
            g.relations.len(),
            if failing == 0 { "all hold".to_string() } else { format!("{failing} fail") }
        );
    }
    if !r.tau_solutions.is_empty() {
        let text = serde_json::to_string_pretty(&r.tau_solutions).expect("serializable");
        out += &text;
        out.push('\n');
    }
    if !r.classification.is_empty() {
        out += &render_report(std::slice::from_ref(cert));
    }
    for p in &r.dispersion {
        let comps: Vec<String> = p.p.iter().map(|c| c.to_string()).collect();
        out += &format!(
            "d={} p=({}): ω² = {}, H² scalar {}, traceless {}, multiplicity {}\n",
            p.d,
            comps.join(", "),
            p.omega_sq,
            p.square_is_scalar,
            p.traceless,
            p.multiplicity
        );
    }
    if let Some(prof) = &r.profile {
        out += &format!(
            "profile: support [{}, {}], mean m² = {}\n",
            prof.support_lo, prof.support_hi, prof.mean_mass_sq
        );
    }
    for b in &r.labels {
        out += &format!("d={} {}:", b.d, b.variant.label());
        for l in &b.labels {
            let sign = if l.energy_sign > 0 { "+" } else { "-" };
            out += &format!(" E{sign} ({}, {})×{}", l.j1, l.j2, l.multiplicity);
        }
        out += &format!("; labelled dimension {}\n", b.labelled_dimension);
    }
    out
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let Some(input) = input_for(cli)? else {
        let Cmd::Report { files } = &cli.command else { unreachable!() };
        let certs = files
            .iter()
            .map(|f| {
                let text = std::fs::read_to_string(f)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", f.display())))?;
                Certificate::parse(&text)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", f.display())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let text = render_report(&certs);
        if let Some(path) = &cli.out {
            write(path, &text)?;
        }
        return Ok(text);
    };
    let cert = run(&input)?;
    if let Some(path) = &cli.out {
        write(path, &cert.emit())?;
    }
    let text = if cli.json { cert.emit() } else { summary(&cert) };
    let failed: Vec<String> = cert
        .failed_checks()
        .map(|c| format!("FAIL {}: expected {}, found {}", c.claim, c.expected, c.found))
        .collect();
    if failed.is_empty() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Checks(failed))
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Checks(lines)) => {
            for l in lines {
                eprintln!("{l}");
            }
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
