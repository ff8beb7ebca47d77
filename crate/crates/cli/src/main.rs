//! `acm-wild`: construct kernel bundles, print their cohomology and certify
//! wild representation type of ACM varieties.
//!
//! Exit codes: 0 success (or a passing certificate), 1 a failed certificate
//! or a refused precondition, 2 invalid input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use acm_wild::cohomology::{closed_form_table, cohomology_table_exact, default_window, CohomologyTable};
use acm_wild::moduli::{
    embedding_dimension, family_dimension, kac_discriminant, stabilizer_dimension, veronese_bound,
    wildness_certificate, StabilizerReport, TOOL_VERSION,
};
use acm_wild::presentation::{build_kernel_bundle, BuiltBundle, SampleRecord, DEFAULT_MAX_RESAMPLE};
use acm_wild::report::{table_markdown, to_canonical_json, verdict_text, wildness_markdown};
use acm_wild::restriction::{
    acm_with_respect_to_s, make_ci_variety, restricted_cohomology_table, restriction_vanishing_certificate,
    AcmVarietyDescriptor, AcmVerdict, VanishingChaseTrace,
};
use acm_wild::{Error, FieldSpec, LinearFormMatrix, SeededRng, SurjectivityCertificate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "acm-wild",
    version,
    about = "Kernel bundles on P^n and wildness certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a general presentation and certify it.
    Construct(RunConfig),
    /// Exact cohomology table of E_{n,a}(t) on P^n.
    Table(RunConfig),
    /// Exact cohomology table of E_{n,a} restricted to a complete intersection.
    Restrict(RunConfig),
    /// Stabilizer dimension of the dual presentation.
    Simplicity(RunConfig),
    /// Full wildness certificate for X embedded by O_X(s).
    Certify(RunConfig),
    /// Closed-form constants: family dimension, Veronese bound, Kac value.
    Bound(RunConfig),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Dimension of the ambient projective space.
    #[arg(long)]
    n: u32,
    /// Multiplicity: E has rank n*a.
    #[arg(long, default_value_t = 1)]
    a: usize,
    /// Twist of the re-embedding O_X(s).
    #[arg(long, default_value_t = 3)]
    s: u32,
    #[arg(long, default_value_t = 32003)]
    prime: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Defaults to -n-4.
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<i64>,
    /// Defaults to 4.
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<i64>,
    /// Degrees of the complete intersection X, comma separated. Empty means X = P^n.
    #[arg(long, value_delimiter = ',')]
    ci_degrees: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl RunConfig {
    fn field(&self) -> Result<FieldSpec, Error> {
        FieldSpec::prime(self.prime)
    }

    fn window(&self) -> (i64, i64) {
        let (lo, hi) = default_window(self.n);
        (self.t_min.unwrap_or(lo), self.t_max.unwrap_or(hi))
    }
}

/// A rendered report plus whether it counts as success.
struct Outcome {
    json: String,
    markdown: String,
    ok: bool,
}

fn outcome<T: Serialize>(value: &T, markdown: String, ok: bool) -> Outcome {
    Outcome {
        json: to_canonical_json(value),
        markdown,
        ok,
    }
}

#[derive(Serialize)]
struct ConstructReport {
    tool_version: String,
    prime: u64,
    seed: u64,
    n: u32,
    a: usize,
    rank: usize,
    sample: SampleRecord,
    presentation: LinearFormMatrix,
    surjectivity: SurjectivityCertificate,
}

#[derive(Serialize)]
struct TableReport {
    tool_version: String,
    prime: u64,
    seed: u64,
    n: u32,
    a: usize,
    sample: SampleRecord,
    table: CohomologyTable,
    /// Cells `(i, t, exact, closed form)` where the two disagree.
    closed_form_mismatches: Vec<(usize, i64, u64, u64)>,
}

#[derive(Serialize)]
struct RestrictReport {
    tool_version: String,
    prime: u64,
    seed: u64,
    n: u32,
    a: usize,
    s: u32,
    variety: AcmVarietyDescriptor,
    sample: SampleRecord,
    vanishing: Vec<VanishingChaseTrace>,
    table: CohomologyTable,
    acm: AcmVerdict,
}

#[derive(Serialize)]
struct SimplicityReport {
    tool_version: String,
    prime: u64,
    seed: u64,
    n: u32,
    a: usize,
    sample: SampleRecord,
    stabilizer: StabilizerReport,
}

#[derive(Serialize)]
struct BoundReport {
    tool_version: String,
    n: u32,
    a: usize,
    s: u32,
    rank: usize,
    family_dimension: u64,
    veronese_bound: u64,
    kac_value: i64,
    embedding_dimension: u64,
    variety: String,
}

fn bundle(cfg: &RunConfig, rng: &mut SeededRng) -> Result<BuiltBundle, Error> {
    build_kernel_bundle(cfg.n, cfg.a, rng, cfg.field()?, DEFAULT_MAX_RESAMPLE)
}

fn construct(cfg: &RunConfig) -> Result<Outcome, Error> {
    let mut rng = SeededRng::new(cfg.seed);
    let built = bundle(cfg, &mut rng)?;
    let report = ConstructReport {
        tool_version: TOOL_VERSION.into(),
        prime: cfg.prime,
        seed: cfg.seed,
        n: cfg.n,
        a: cfg.a,
        rank: built.bundle.rank(),
        sample: built.sample,
        presentation: built.bundle.phi,
        surjectivity: built.certificate,
    };
    let md = format!(
        "# E_{{{},{}}} on P^{}\n\n- rank {}\n- accepted at attempt {}\n- graded cokernel vanishes from t = {}\n- H^0(phi(1)) iso: {}\n",
        report.n,
        report.a,
        report.n,
        report.rank,
        report.sample.attempt,
        report.surjectivity.surjective_at_degree.map_or("none".into(), |t| t.to_string()),
        report.surjectivity.h0_phi1_iso,
    );
    Ok(outcome(&report, md, true))
}

fn table(cfg: &RunConfig) -> Result<Outcome, Error> {
    let mut rng = SeededRng::new(cfg.seed);
    let built = bundle(cfg, &mut rng)?;
    let (lo, hi) = cfg.window();
    let table = cohomology_table_exact(&built.bundle, lo, hi);
    let closed = closed_form_table(cfg.n, cfg.a, lo, hi);
    let report = TableReport {
        tool_version: TOOL_VERSION.into(),
        prime: cfg.prime,
        seed: cfg.seed,
        n: cfg.n,
        a: cfg.a,
        sample: built.sample,
        closed_form_mismatches: table.differences(&closed),
        table,
    };
    let mut md = format!("# h^i(E_{{{},{}}}(t)) on P^{}\n\n", cfg.n, cfg.a, cfg.n);
    md.push_str(&table_markdown(&report.table));
    md.push_str(&format!(
        "\ncells differing from the closed form: {}\n",
        report.closed_form_mismatches.len()
    ));
    Ok(outcome(&report, md, true))
}

fn restrict(cfg: &RunConfig) -> Result<Outcome, Error> {
    let field = cfg.field()?;
    let mut rng = SeededRng::new(cfg.seed);
    let x = make_ci_variety(cfg.n, &cfg.ci_degrees, Some(&mut rng), field)?;
    let built = bundle(cfg, &mut rng)?;
    let vanishing = restriction_vanishing_certificate(&x, cfg.n, cfg.a)?;
    let (lo, hi) = cfg.window();
    let table = restricted_cohomology_table(&built.bundle, &x, lo, hi)?;
    let acm = acm_with_respect_to_s(&table, cfg.s, x.dim())?;
    let mut md = format!("# h^i(X, E_{{{},{}}}(t)), X = {}\n\n", cfg.n, cfg.a, x.summary());
    md.push_str(&table_markdown(&table));
    md.push_str(&format!("\nwith respect to O_X({}): {}\n", cfg.s, verdict_text(&acm)));
    let report = RestrictReport {
        tool_version: TOOL_VERSION.into(),
        prime: cfg.prime,
        seed: cfg.seed,
        n: cfg.n,
        a: cfg.a,
        s: cfg.s,
        variety: x,
        sample: built.sample,
        vanishing,
        table,
        acm,
    };
    Ok(outcome(&report, md, true))
}

fn simplicity(cfg: &RunConfig) -> Result<Outcome, Error> {
    let mut rng = SeededRng::new(cfg.seed);
    let built = bundle(cfg, &mut rng)?;
    let stabilizer = stabilizer_dimension(&built.bundle.phi.transpose())?;
    let md = format!(
        "# Stabilizer of E_{{{},{}}}\n\n- dimension {} ({} equations, {} unknowns)\n- simple: {}\n- Kac value {}\n",
        cfg.n,
        cfg.a,
        stabilizer.stab_dimension,
        stabilizer.equations,
        stabilizer.unknowns,
        stabilizer.simple,
        stabilizer.kac_value
    );
    let ok = stabilizer.simple;
    let report = SimplicityReport {
        tool_version: TOOL_VERSION.into(),
        prime: cfg.prime,
        seed: cfg.seed,
        n: cfg.n,
        a: cfg.a,
        sample: built.sample,
        stabilizer,
    };
    Ok(outcome(&report, md, ok))
}

fn certify(cfg: &RunConfig) -> Result<Outcome, Error> {
    let field = cfg.field()?;
    if cfg.s < 3 {
        return Err(Error::TwistTooSmall { s: cfg.s });
    }
    let mut rng = SeededRng::new(cfg.seed);
    let x = make_ci_variety(cfg.n, &cfg.ci_degrees, Some(&mut rng), field)?;
    let report = wildness_certificate(&x, cfg.s, cfg.a, &mut rng, field)?;
    let md = wildness_markdown(&report);
    let ok = report.verdict;
    Ok(outcome(&report, md, ok))
}

fn bound(cfg: &RunConfig) -> Result<Outcome, Error> {
    let x = make_ci_variety(cfg.n, &cfg.ci_degrees, None, cfg.field()?)?;
    let report = BoundReport {
        tool_version: TOOL_VERSION.into(),
        n: cfg.n,
        a: cfg.a,
        s: cfg.s,
        rank: cfg.n as usize * cfg.a,
        family_dimension: family_dimension(cfg.n, cfg.a),
        veronese_bound: veronese_bound(cfg.n),
        kac_value: kac_discriminant(cfg.n, cfg.a),
        embedding_dimension: embedding_dimension(&x, cfg.s),
        variety: x.summary(),
    };
    let md = format!(
        "# Constants for n = {}, a = {}\n\n| quantity | value |\n|---|---|\n| rank | {} |\n| family dimension | {} |\n| Veronese bound C(n+3,3)-1 | {} |\n| Kac value | {} |\n| h^0(O_X({})) - 1 for X = {} | {} |\n",
        report.n,
        report.a,
        report.rank,
        report.family_dimension,
        report.veronese_bound,
        report.kac_value,
        report.s,
        report.variety,
        report.embedding_dimension
    );
    Ok(outcome(&report, md, true))
}

fn run(cli: &Cli) -> Result<(Outcome, &RunConfig), Error> {
    let (result, cfg) = match &cli.command {
        Command::Construct(c) => (construct(c), c),
        Command::Table(c) => (table(c), c),
        Command::Restrict(c) => (restrict(c), c),
        Command::Simplicity(c) => (simplicity(c), c),
        Command::Certify(c) => (certify(c), c),
        Command::Bound(c) => (bound(c), c),
    };
    result.map(|o| (o, cfg))
}

/// What a process run produces: exit code and the two streams.
struct Execution {
    code: u8,
    stdout: String,
    stderr: String,
}

impl Execution {
    fn fail(code: u8, stderr: String) -> Self {
        Execution {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code() as u8;
            return if e.use_stderr() {
                Execution::fail(code, text)
            } else {
                Execution {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let (out, cfg) = match run(&cli) {
        Ok(v) => v,
        Err(e) => return Execution::fail(if e.is_refusal() { 1 } else { 2 }, format!("acm-wild: {e}\n")),
    };
    let body = match cfg.format {
        Format::Json => out.json,
        Format::Markdown => out.markdown,
    };
    let stdout = match &cfg.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &body) {
                return Execution::fail(2, format!("acm-wild: cannot write {}: {e}\n", path.display()));
            }
            String::new()
        }
        None => body,
    };
    if out.ok {
        Execution {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    } else {
        Execution {
            code: 1,
            stdout,
            stderr: "acm-wild: certificate failed\n".into(),
        }
    }
}

fn main() -> ExitCode {
    let ex = execute(std::env::args_os());
    print!("{}", ex.stdout);
    eprint!("{}", ex.stderr);
    ExitCode::from(ex.code)
}

#[cfg(test)]
mod tests;
