//! The `dec` command line. Exit codes: 0 success, 1 numerical or verification
//! failure, 2 invalid input or arguments.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::checks::{self, CheckConfig, Suite};
use crate::cohomology;
use crate::error::DecError;
use crate::grid_complex::GridShape;
use crate::hodge;
use crate::io::{FormDocument, InhomogeneousDocument, IoError, MatrixDocument, ReferenceFixtures};
use crate::operators::{Op, OrderingKind};

/// Largest decomposition residual accepted by `decompose`.
pub const DECOMPOSE_RESIDUAL_LIMIT: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "dec", version, about = "Discrete exterior calculus on grid complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = parse_op)]
    pub op: Op,
    #[arg(long, default_value = "canonical", value_parser = parse_ordering)]
    pub ordering: OrderingKind,
    #[arg(long, value_enum, default_value = "json")]
    pub format: MatrixFormat,
    /// Compare with the stored 2x2 reference matrices.
    #[arg(long)]
    pub verify_paper: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print an operator matrix on the n x m torus.
    Matrices(MatrixArgs),
    /// Betti numbers of the n x m torus.
    Cohomology {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        with_generators: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Hodge decomposition of a form given as JSON.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve (d + δ)Ω = F for an inhomogeneous F given as JSON.
    SolveDirac {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run randomized identity checks.
    Check {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn parse_op(s: &str) -> Result<Op, String> {
    s.parse::<Op>().map_err(|e| e.to_string())
}

fn parse_ordering(s: &str) -> Result<OrderingKind, String> {
    s.parse::<OrderingKind>().map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// A failed command: message for stderr and exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Failure {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn numeric(message: impl ToString) -> Failure {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<DecError> for Failure {
    fn from(e: DecError) -> Self {
        match e {
            DecError::NotInRange { .. } | DecError::SolverFailure(_) => Failure::numeric(e),
            _ => Failure::input(e),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Dec(inner) => inner.into(),
            other => Failure::input(other),
        }
    }
}

type CmdResult = Result<i32, Failure>;

fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(e.to_string())),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn torus(n: usize, m: usize) -> Result<GridShape, Failure> {
    Ok(GridShape::torus(n, m)?)
}

fn matrices(args: MatrixArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let MatrixArgs {
        n,
        m,
        op,
        ordering,
        format,
        verify_paper: verify,
        output,
    } = args;
    let shape = torus(n, m)?;
    if verify && (ordering != OrderingKind::Reference2x2 || shape.n() != 2 || shape.m() != 2) {
        return Err(Failure::input("--verify-paper needs --n 2 --m 2 --ordering paper2x2"));
    }
    let matrix = op.assemble(shape, ordering)?;
    let doc = MatrixDocument::new(op, &matrix);
    let text = match format {
        MatrixFormat::Json => to_json(&doc),
        MatrixFormat::Csv => doc.to_csv()?,
    };
    emit(output.as_deref(), &text, stdout)?;
    if verify {
        let fixtures = ReferenceFixtures::load()?;
        if fixtures.matches(op, &matrix) {
            let _ = writeln!(stderr, "{}: matches the 2x2 reference", op.name());
        } else {
            let expected = fixtures.expected(op);
            let actual = matrix.entries();
            let _ = writeln!(stderr, "{}: MISMATCH with the 2x2 reference", op.name());
            let (rows, cols) = expected.shape();
            if actual.shape() == expected.shape() {
                for i in 0..rows {
                    for j in 0..cols {
                        if actual[(i, j)] != expected[(i, j)] {
                            let _ = writeln!(
                                stderr,
                                "  [{}, {}] got {} expected {}",
                                matrix.rows().label_strings()[i],
                                matrix.cols().label_strings()[j],
                                actual[(i, j)],
                                expected[(i, j)]
                            );
                        }
                    }
                }
            }
            return Ok(1);
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct GeneratorsDocument {
    betti: [usize; 3],
    generators: [Vec<FormDocument>; 3],
}

fn cohomology_cmd(shape: GridShape, with_generators: bool, output: Option<&Path>, stdout: &mut dyn Write) -> CmdResult {
    let betti = cohomology::betti_numbers(shape)?;
    let mut text = format!("b0={} b1={} b2={}\n", betti[0], betti[1], betti[2]);
    if with_generators {
        let result = cohomology::cohomology(shape)?;
        let doc = GeneratorsDocument {
            betti,
            generators: result.generators.map(|g| g.iter().map(FormDocument::from_form).collect()),
        };
        text.push_str(&to_json(&doc));
    }
    emit(output, &text, stdout)?;
    Ok(0)
}

#[derive(Serialize)]
struct InnerProducts {
    exact_coexact: f64,
    exact_harmonic: f64,
    coexact_harmonic: f64,
}

#[derive(Serialize)]
struct DecompositionDocument {
    residual_norm: f64,
    inner_products: InnerProducts,
    exact: FormDocument,
    coexact: FormDocument,
    harmonic: FormDocument,
}

fn decompose_cmd(input: &Path, output: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let form = FormDocument::parse(&read_input(input)?)?.to_form()?;
    form.shape().require_torus()?;
    let parts = hodge::decompose(&form)?;
    let doc = DecompositionDocument {
        residual_norm: parts.residual_norm,
        inner_products: InnerProducts {
            exact_coexact: parts.exact.dot(&parts.coexact),
            exact_harmonic: parts.exact.dot(&parts.harmonic),
            coexact_harmonic: parts.coexact.dot(&parts.harmonic),
        },
        exact: FormDocument::from_form(&parts.exact),
        coexact: FormDocument::from_form(&parts.coexact),
        harmonic: FormDocument::from_form(&parts.harmonic),
    };
    emit(output, &to_json(&doc), stdout)?;
    if parts.residual_norm > DECOMPOSE_RESIDUAL_LIMIT {
        let _ = writeln!(stderr, "residual norm {:e} exceeds {:e}", parts.residual_norm, DECOMPOSE_RESIDUAL_LIMIT);
        return Ok(1);
    }
    Ok(0)
}

#[derive(Serialize)]
struct DiracDocument {
    residual: f64,
    omega: InhomogeneousDocument,
}

fn solve_dirac_cmd(input: &Path, output: Option<&Path>, stdout: &mut dyn Write) -> CmdResult {
    let text = read_input(input)?;
    let rhs = serde_json::from_str::<InhomogeneousDocument>(&text)
        .map_err(IoError::from)?
        .to_form()?;
    rhs.shape().require_torus()?;
    let solution = match hodge::solve_dirac(&rhs) {
        Err(DecError::NotInRange { harmonic_norm }) => {
            return Err(Failure::numeric(format!(
                "F has harmonic component (norm {harmonic_norm:e})"
            )))
        }
        other => other?,
    };
    let doc = DiracDocument {
        residual: solution.residual,
        omega: InhomogeneousDocument::from_form(&solution.omega),
    };
    emit(output, &to_json(&doc), stdout)?;
    Ok(0)
}

fn check_cmd(suite: Suite, config: CheckConfig, stdout: &mut dyn Write) -> CmdResult {
    let report = checks::run(suite, config)?;
    emit(None, &report.render(), stdout)?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    match cli.command {
        Command::Matrices(args) => matrices(args, stdout, stderr),
        Command::Cohomology {
            n,
            m,
            with_generators,
            output,
        } => cohomology_cmd(torus(n, m)?, with_generators, output.as_deref(), stdout),
        Command::Decompose { input, output } => decompose_cmd(&input, output.as_deref(), stdout, stderr),
        Command::SolveDirac { input, output } => solve_dirac_cmd(&input, output.as_deref(), stdout),
        Command::Check {
            suite,
            n,
            m,
            seed,
            trials,
        } => check_cmd(suite, CheckConfig { n, m, seed, trials }, stdout),
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = target.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
