mod report;

use std::fs::{self, File};
use std::io::{self, BufReader, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpgraph::blockops::{BlockSystem, Which};
use mpgraph::census::{render_table, run_census, CensusError, CensusOptions, CensusRow, TableFormat};
use mpgraph::constructions::{
    pendant_paths, pendant_paths_inverse, pendant_vertices, pendant_vertices_pinv, InverseMode,
    MAX_CLOSED_FORM_PATH,
};
use mpgraph::graphio::{export_dot, export_edgelist, parse_graph6, write_graph6};
use mpgraph::signability::{classify_matrix, pseudo_inverse_of_matrix, Convention};
use mpgraph::spectral::{
    block_lmi_check, direct_lmi_check, lambda_minus_by_bisection, lambda_plus_by_bisection, spectral_summary,
    Side,
};
use mpgraph::{Error, Graph, MathError, RatMatrix, WeightedGraph};
use serde_json::{json, Value};

use report::{classification_json, matrix_json, print_json, sig12};

#[derive(Parser, Debug)]
#[command(name = "mpgraph", version, about = "Exact pseudo-inverses and signability of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moore-Penrose pseudo-inverse of a matrix file.
    Pinv(MatrixArgs),
    /// Inverse of a matrix file.
    Inv(MatrixArgs),
    /// Determinant, rank and signability class of a graph or matrix.
    Classify(SubjectArgs),
    /// The weighted pseudo-inverse graph of a graph or matrix.
    PinvGraph(PinvGraphArgs),
    /// Eigenvalues, least positive / largest negative eigenvalue, gap.
    Spectrum(SpectrumArgs),
    /// Schur complements, compatibility and block pseudo-inverse of ((A, K), (Kᵀ, B)).
    Block(BlockArgs),
    /// Pendant-vertex or pendant-path graph over a base graph.
    Construct(ConstructArgs),
    /// Classification counts for one graph6 list.
    Census(CensusArgs),
    /// Table over several orders, from graph6 lists or saved census JSON.
    Table(TableArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    /// Matrix file (`rows cols` header, then rows of rationals); `-` reads stdin.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct SubjectArgs {
    /// A graph6 string.
    #[arg(required_unless_present = "matrix", conflicts_with = "matrix")]
    graph6: Option<String>,
    /// Read a symmetric matrix file instead of a graph.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    PreferPositive,
    Positive,
    Negative,
}

#[derive(Args, Debug)]
struct PinvGraphArgs {
    #[command(flatten)]
    subject: SubjectInput,
    #[arg(long, value_enum, default_value_t = ConventionArg::PreferPositive)]
    convention: ConventionArg,
    /// Text prints the weighted edge list.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for `--format dot`.
    #[arg(long)]
    dot: bool,
}

#[derive(Args, Debug)]
struct SubjectInput {
    /// A graph6 string.
    #[arg(required_unless_present = "matrix", conflicts_with = "matrix")]
    graph6: Option<String>,
    /// Read a symmetric matrix file instead of a graph.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    subject: SubjectInput,
    /// Also compute λ₊ and λ₋ by bisection on the Löwner inequalities.
    #[arg(long)]
    bisection: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Auto,
    A,
    B,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Plus,
    Minus,
}

#[derive(Args, Debug)]
struct BlockArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    k: PathBuf,
    /// `a` or `b` fail unless that form's premises hold; `auto` picks one if possible.
    #[arg(long, value_enum, default_value_t = FormArg::Auto)]
    form: FormArg,
    /// Evaluate the block LMI at this μ and compare with the direct test.
    #[arg(long)]
    lmi: Option<f64>,
    #[arg(long, value_enum, default_value_t = SideArg::Plus)]
    side: SideArg,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// Base graph as graph6.
    #[arg(long)]
    base: String,
    #[arg(long, conflicts_with = "pendant_paths", required_unless_present = "pendant_paths")]
    pendant_vertices: Option<usize>,
    #[arg(long)]
    pendant_paths: Option<usize>,
    /// Also print the closed-form (pseudo-)inverse as a weighted edge list.
    #[arg(long)]
    inverse: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct JobsArg {
    /// Worker threads.
    #[arg(long, env = "MPGRAPH_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct CensusArgs {
    /// graph6 list, one graph per line; `-` reads stdin.
    #[arg(long)]
    file: PathBuf,
    /// Vertex count of every graph in the list.
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    jobs: JobsArg,
    #[arg(long)]
    json: bool,
    /// Progress file for resumable runs.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    verify_connected: bool,
    /// Fail if a graph classified Both is not bipartite.
    #[arg(long)]
    assert_bipartite: bool,
    /// Allow orders of 9 and above.
    #[arg(long)]
    large: bool,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Directory holding `graph{m}c.g6` files.
    #[arg(long, conflicts_with = "rows", required_unless_present = "rows")]
    dir: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    min_m: usize,
    #[arg(long, default_value_t = 8)]
    max_m: usize,
    /// Census JSON outputs to merge into one table.
    #[arg(long, num_args = 1..)]
    rows: Vec<PathBuf>,
    #[command(flatten)]
    jobs: JobsArg,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    large: bool,
}

/// Exit status 1: the input was well-formed but the operation does not apply.
/// Exit status 2: the input could not be read or parsed.
enum Failure {
    Domain { kind: &'static str, message: String },
    Input { kind: &'static str, message: String, line: Option<usize> },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = e.kind();
        let message = e.to_string();
        match e {
            Error::Math(MathError::Parse(_)) | Error::Graph6(_) | Error::NotAGraph(_) => Failure::Input {
                kind,
                message,
                line: None,
            },
            _ => Failure::Domain { kind, message },
        }
    }
}

impl From<MathError> for Failure {
    fn from(e: MathError) -> Self {
        Error::from(e).into()
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        let line = e.line();
        let kind = match &e {
            CensusError::Parse { .. } => "ParseError",
            CensusError::Io(_) => "IoError",
            CensusError::WrongOrder { .. } => "WrongOrder",
            CensusError::Disconnected { .. } => "Disconnected",
            CensusError::BothNotBipartite { .. } => "BothNotBipartite",
            CensusError::LargeOrder(_) => "LargeOrder",
            CensusError::Checkpoint { .. } => "CheckpointError",
        };
        let message = e.to_string();
        match e {
            CensusError::BothNotBipartite { .. } | CensusError::Checkpoint { .. } => Failure::Domain { kind, message },
            _ => Failure::Input { kind, message, line },
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Input {
        kind: "IoError",
        message: format!("{}: {e}", path.display()),
        line: None,
    }
}

type Outcome = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| io_failure(path, e))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| io_failure(path, e))
    }
}

fn read_matrix(path: &Path) -> Result<RatMatrix, Failure> {
    RatMatrix::from_text(&read_text(path)?).map_err(|e| match e {
        MathError::Parse(msg) => Failure::Input {
            kind: "ParseError",
            message: format!("{}: {msg}", path.display()),
            line: None,
        },
        other => other.into(),
    })
}

fn parse_graph(text: &str) -> Result<Graph, Failure> {
    Ok(parse_graph6(text.trim()).map_err(Error::from)?)
}

/// The adjacency matrix of the graph6 argument or the `--matrix` file.
fn subject(graph6: &Option<String>, matrix: &Option<PathBuf>) -> Result<(RatMatrix, Option<Graph>), Failure> {
    match (graph6, matrix) {
        (Some(g6), _) => {
            let g = parse_graph(g6)?;
            Ok((g.adjacency(), Some(g)))
        }
        (None, Some(path)) => Ok((read_matrix(path)?, None)),
        (None, None) => unreachable!("clap requires one input"),
    }
}

fn print_matrix(m: &RatMatrix, format: Format) {
    match format {
        Format::Json => print_json(&matrix_json(m)),
        _ => print!("{m}"),
    }
}

fn cmd_pinv(args: &MatrixArgs) -> Outcome {
    print_matrix(&read_matrix(&args.file)?.pinv(), args.format);
    Ok(())
}

fn cmd_inv(args: &MatrixArgs) -> Outcome {
    let m = read_matrix(&args.file)?;
    if !m.is_square() {
        return Err(MathError::Shape(format!("{}x{} matrix has no inverse", m.rows(), m.cols())).into());
    }
    print_matrix(&m.inv()?, args.format);
    Ok(())
}

fn cmd_classify(args: &SubjectArgs) -> Outcome {
    let (a, graph) = subject(&args.graph6, &args.matrix)?;
    let c = classify_matrix(&a)?;
    let mut v = classification_json(&c);
    if let Some(g) = &graph {
        v["graph6"] = json!(write_graph6(g));
        v["bipartite"] = json!(g.is_bipartite());
    }
    match args.format {
        Format::Json => print_json(&v),
        _ => {
            println!("class: {}", c.report.class.name());
            println!("det: {}", c.det);
            println!("rank: {}", c.rank);
            println!("invertible: {}", c.invertible);
            println!("integral: {}", c.integral);
        }
    }
    Ok(())
}

fn cmd_pinv_graph(args: &PinvGraphArgs) -> Outcome {
    let (a, _) = subject(&args.subject.graph6, &args.subject.matrix)?;
    let convention = match args.convention {
        ConventionArg::PreferPositive => Convention::PreferPositive,
        ConventionArg::Positive => Convention::Positive,
        ConventionArg::Negative => Convention::Negative,
    };
    let p = pseudo_inverse_of_matrix(&a, convention)?;
    let format = if args.dot { Format::Dot } else { args.format };
    match format {
        Format::Text => print!("{}", export_edgelist(&p.graph)),
        Format::Dot => print!("{}", export_dot(&p.graph)),
        Format::Json => print_json(&json!({
            "target": format!("{:?}", p.target),
            "signature": p.signature,
            "order": p.graph.order(),
            "edges": p.graph.weights().map(|((u, v), w)| json!([u, v, w.to_string()])).collect::<Vec<_>>(),
        })),
    }
    Ok(())
}

fn cmd_spectrum(args: &SpectrumArgs) -> Outcome {
    let (a, _) = subject(&args.subject.graph6, &args.subject.matrix)?;
    let s = spectral_summary(&a)?;
    let opt = |x: Option<f64>| x.map(sig12);
    let mut v = json!({
        "eigenvalues": s.eigenvalues.iter().copied().map(sig12).collect::<Vec<_>>(),
        "lambda_plus": opt(s.lambda_plus),
        "lambda_minus": opt(s.lambda_minus),
        "gap": opt(s.gap),
        "index": opt(s.index),
        "reciprocal_check": s.reciprocal_check,
    });
    if args.bisection {
        v["lambda_plus_bisection"] = json!(lambda_plus_by_bisection(&a).ok().map(sig12));
        v["lambda_minus_bisection"] = json!(lambda_minus_by_bisection(&a).ok().map(sig12));
    }
    match args.format {
        Format::Json => print_json(&v),
        _ => {
            for (key, value) in v.as_object().expect("object") {
                println!("{key}: {value}");
            }
        }
    }
    Ok(())
}

fn cmd_block(args: &BlockArgs) -> Outcome {
    let sys = BlockSystem::new(read_matrix(&args.a)?, read_matrix(&args.b)?, read_matrix(&args.k)?)?;
    let c = sys.compatibility();
    let (form, pinv) = match args.form {
        FormArg::A => (Some("A"), Some(sys.banachiewicz_schur(Which::A)?)),
        FormArg::B => (Some("B"), Some(sys.banachiewicz_schur(Which::B)?)),
        FormArg::Auto if c.k_is_compatible() => (Some("A"), Some(sys.banachiewicz_schur(Which::A)?)),
        FormArg::Auto if c.kt_is_compatible() => (Some("B"), Some(sys.banachiewicz_schur(Which::B)?)),
        FormArg::Auto => (None, None),
    };
    let identities = if c.fully_compatible() {
        Some(sys.schur_identities()?)
    } else {
        None
    };
    let w = sys.sufficient_signature();
    let mut v = json!({
        "n": sys.n(),
        "m": sys.m(),
        "compatibility": c,
        "schur_a": matrix_json(&sys.schur_complement(Which::A)),
        "schur_b": matrix_json(&sys.schur_complement(Which::B)),
        "form": form,
        "pinv": pinv.as_ref().map(matrix_json),
        "identities": identities,
        "sufficient_signature": { "positive": w.positive, "negative": w.negative },
    });
    if let Some(mu) = args.lmi {
        let side = match args.side {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        };
        let block = block_lmi_check(&sys, mu, side)?;
        let direct = direct_lmi_check(&sys.assemble().pinv(), mu, side)?;
        v["lmi"] = json!({ "mu": mu, "side": format!("{side:?}"), "block": block, "direct": direct });
    }
    print_json(&v);
    Ok(())
}

fn cmd_construct(args: &ConstructArgs) -> Outcome {
    let base = parse_graph(&args.base)?;
    let (graph, inverse) = match (args.pendant_vertices, args.pendant_paths) {
        (Some(k), _) => {
            if k == 0 {
                return Err(usage("--pendant-vertices must be at least 1"));
            }
            let inv = args.inverse.then(|| pendant_vertices_pinv(&base, k)).transpose()?;
            (pendant_vertices(&base, k), inv)
        }
        (None, Some(l)) => {
            if l == 0 {
                return Err(usage("--pendant-paths must be at least 1"));
            }
            let mode = if l <= MAX_CLOSED_FORM_PATH {
                InverseMode::ClosedForm
            } else {
                InverseMode::General
            };
            let inv = args.inverse.then(|| pendant_paths_inverse(&base, l, mode)).transpose()?;
            (pendant_paths(&base, l), inv)
        }
        (None, None) => unreachable!("clap requires one construction"),
    };
    let g6 = write_graph6(&graph);
    match args.format {
        Format::Json => {
            let mut v = json!({ "graph6": g6, "order": graph.order(), "size": graph.size() });
            if let Some(inv) = &inverse {
                v["inverse"] = matrix_json(inv);
            }
            print_json(&v);
        }
        _ => {
            println!("{g6}");
            if let Some(inv) = &inverse {
                print!("{}", export_edgelist(&WeightedGraph::from_symmetric(inv)));
            }
        }
    }
    Ok(())
}

fn usage(message: &str) -> Failure {
    Failure::Input {
        kind: "UsageError",
        message: message.to_string(),
        line: None,
    }
}

fn census_one(path: &Path, m: usize, opts: &CensusOptions) -> Result<CensusRow, Failure> {
    if path == Path::new("-") {
        return Ok(run_census(io::stdin().lock(), m, opts)?);
    }
    let file = File::open(path).map_err(|e| io_failure(path, e))?;
    Ok(run_census(BufReader::new(file), m, opts)?)
}

fn table_format(json: bool) -> TableFormat {
    if json {
        TableFormat::Json
    } else {
        TableFormat::Text
    }
}

fn cmd_census(args: &CensusArgs) -> Outcome {
    let opts = CensusOptions {
        jobs: args.jobs.jobs,
        verify_connected: args.verify_connected,
        assert_both_bipartite: args.assert_bipartite,
        allow_large: args.large,
        checkpoint: args.checkpoint.clone(),
        ..Default::default()
    };
    let row = census_one(&args.file, args.m, &opts)?;
    print!("{}", render_table(&[row], table_format(args.json)));
    Ok(())
}

fn cmd_table(args: &TableArgs) -> Outcome {
    let mut rows = Vec::new();
    if let Some(dir) = &args.dir {
        let opts = CensusOptions {
            jobs: args.jobs.jobs,
            allow_large: args.large,
            ..Default::default()
        };
        for m in args.min_m..=args.max_m {
            rows.push(census_one(&dir.join(format!("graph{m}c.g6")), m, &opts)?);
        }
    }
    for path in &args.rows {
        let text = read_text(path)?;
        let parsed: Vec<CensusRow> = serde_json::from_str(&text).map_err(|e| Failure::Input {
            kind: "ParseError",
            message: format!("{}: {e}", path.display()),
            line: Some(e.line()),
        })?;
        rows.extend(parsed);
    }
    rows.sort_by_key(|r| r.m);
    print!("{}", render_table(&rows, table_format(args.json)));
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Pinv(a) => cmd_pinv(a),
        Command::Inv(a) => cmd_inv(a),
        Command::Classify(a) => cmd_classify(a),
        Command::PinvGraph(a) => cmd_pinv_graph(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Block(a) => cmd_block(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Census(a) => cmd_census(a),
        Command::Table(a) => cmd_table(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain { kind, message }) => {
            eprintln!("{}", json!({ "error": kind, "message": message }));
            ExitCode::from(1)
        }
        Err(Failure::Input { kind, message, line }) => {
            let mut v: Value = json!({ "error": kind, "message": message });
            if let Some(line) = line {
                v["line"] = json!(line);
            }
            eprintln!("{v}");
            ExitCode::from(2)
        }
    }
}
