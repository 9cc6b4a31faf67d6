//! Command-line surface: the Coxeter tables, Deligne-Lusztig counts, vertex lattices with
//! their incidence graph, the split tree, and the verification suites.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::hermitian::{tally, DlLabel, HermSpace, Side};
use crate::padlat::{LatticeSpace, PointSearch, SplitOps, VertexType, WindowLattice};
use crate::verify::{self, CheckReport, Suite};
use crate::weyl::{self, Case};

/// Largest `q^2` for which `dl` enumerates a Fermat variety.
const DL_BOUND: u64 = 1 << 22;

#[derive(Parser, Debug)]
#[command(name = "rz-strata", version, about = "Bruhat-Tits strata of GU(2,2) Rapoport-Zink spaces over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The sigma-Coxeter elements of EO^K(mu) with their face types.
    Tables {
        #[arg(long, value_enum)]
        case: Case,
        #[command(flatten)]
        out: Output,
    },
    /// Deligne-Lusztig label counts on Y^(-) or Y^(+).
    Dl {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "minus")]
        side: Side,
        #[command(flatten)]
        out: Output,
    },
    /// Vertex lattices of the window and their incidence graph, or the points of the standard stratum.
    Lattices {
        #[command(flatten)]
        field: FieldArgs,
        /// Window: lattices between p^a L_std and p^-a L_std.
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, value_enum, default_value = "inert")]
        case: Case,
        /// Radius of the ball in the split case.
        #[arg(long, default_value_t = 2)]
        radius: u32,
        /// List the points of the stratum of L_std instead of the vertex lattices.
        #[arg(long)]
        points: bool,
        /// Require tau D ⊆ D^v and pD^v ⊆ tau D for points.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        strict_tau: bool,
        #[command(flatten)]
        out: Output,
    },
    /// The ball around L_std in the tree of split vertex lattices.
    Tree {
        #[command(flatten)]
        field: FieldArgs,
        /// Window: lattices between p^a L_std and p^-a L_std.
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_values = ["all"])]
        suite: Vec<Suite>,
        #[command(flatten)]
        field: FieldArgs,
        /// Window: lattices between p^a L_std and p^-a L_std.
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct FieldArgs {
    /// Odd prime.
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    /// Points are taken over F_{p^{2m}}.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

/// A run that could not start: bad flag combinations or bounds.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn allow(format: Format, allowed: &[Format], command: &str) -> std::result::Result<(), Usage> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Usage(format!("{command} does not support --format {}", format_name(format))))
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Dot => "dot",
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn set_text(s: &[usize]) -> String {
    let items: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn emit(text: &str, output: &Option<PathBuf>) -> std::result::Result<(), Usage> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                // a closed pipe downstream (`| head`) is not an error of ours
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Usage(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

#[derive(Serialize)]
struct TablesOut<'a> {
    case: Case,
    rows: &'a [weyl::CoxeterTableRow],
}

fn cmd_tables(case: Case, out: &Output) -> std::result::Result<String, Usage> {
    allow(out.format, &[Format::Text, Format::Json, Format::Csv], "tables")?;
    let rows = weyl::coxeter_table(case);
    Ok(match out.format {
        Format::Json => json(&TablesOut { case, rows: &rows }),
        Format::Csv => csv_table(
            &["sigma_set", "w", "complement", "supp_sigma"],
            rows.iter().map(|r| vec![set_text(&r.sigma_set), r.w.clone(), set_text(&r.complement), set_text(&r.supp_sigma)]),
        ),
        _ => {
            let mut s = format!("case {}\n", case.name());
            let _ = writeln!(s, "{:<8} {:<12} {:<10} supp_sigma", "Sigma", "w", "S-Sigma");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:<8} {:<12} {:<10} {}",
                    set_text(&r.sigma_set),
                    r.w,
                    set_text(&r.complement),
                    set_text(&r.supp_sigma)
                );
            }
            s
        }
    })
}

fn field(args: FieldArgs) -> Result<Arc<Field>> {
    Ok(Arc::new(Field::new(args.p, args.m)?))
}

fn cmd_dl(args: FieldArgs, side: Side, out: &Output) -> std::result::Result<String, Usage> {
    allow(out.format, &[Format::Text, Format::Json, Format::Csv], "dl")?;
    let f = field(args)?;
    let q = f.order() as u64;
    if q * q > DL_BOUND {
        return Err(Usage(format!("F_{q} is beyond the desk-scale bound for dl")));
    }
    let herm = HermSpace::standard(f, 4);
    let points = herm.points(side);
    let labels = crate::par::map(&points, |u| herm.classify(side, u));
    let labels = labels.into_iter().collect::<Result<Vec<DlLabel>>>()?;
    let counts: std::collections::BTreeMap<String, usize> =
        tally(labels).into_iter().map(|(l, n)| (l.name().to_string(), n)).collect();
    Ok(match out.format {
        Format::Json => json(&counts),
        Format::Csv => csv_table(&["label", "count"], counts.iter().map(|(l, n)| vec![l.clone(), n.to_string()])),
        _ => {
            let side_name = if side == Side::Minus { "minus" } else { "plus" };
            let mut s = format!("side {side_name} p {} m {} points {}\n", args.p, args.m, points.len());
            for (l, n) in &counts {
                let _ = writeln!(s, "{l} {n}");
            }
            s
        }
    })
}

/// Canonical matrix as one digit string: rows, then entries, then coefficients.
fn matrix_key(space: &LatticeSpace, l: &WindowLattice) -> String {
    space
        .matrix(l)
        .iter()
        .map(|row| row.iter().map(|x| x.iter().map(u64::to_string).collect::<Vec<_>>().join(".")).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Serialize)]
struct NodeOut {
    index: usize,
    kind: String,
    fingerprint: String,
    vol: i64,
    matrix: Vec<Vec<Vec<u64>>>,
}

#[derive(Serialize)]
struct GraphOut {
    p: u32,
    m: u32,
    a: u32,
    case: Case,
    nodes: Vec<NodeOut>,
    edges: Vec<(usize, usize)>,
}

fn graph_text(g: &GraphOut, space: &LatticeSpace, nodes: &[WindowLattice], format: Format) -> String {
    match format {
        Format::Json => json(g),
        Format::Csv => csv_table(
            &["index", "kind", "fingerprint", "vol", "matrix"],
            g.nodes.iter().zip(nodes).map(|(n, l)| {
                vec![n.index.to_string(), n.kind.clone(), n.fingerprint.clone(), n.vol.to_string(), matrix_key(space, l)]
            }),
        ),
        Format::Dot => {
            let name = if g.case == Case::Split { "split_tree" } else { "vertex_lattices" };
            let mut s = format!("graph {name} {{\n");
            for (n, l) in g.nodes.iter().zip(nodes) {
                let _ = writeln!(
                    s,
                    "  n{} [label=\"{} {}\", matrix=\"{}\"];",
                    n.fingerprint,
                    n.kind,
                    n.fingerprint,
                    matrix_key(space, l)
                );
            }
            for &(i, j) in &g.edges {
                let (a, b) = (&g.nodes[i], &g.nodes[j]);
                // the smaller lattice sits inside the larger one
                let (inner, outer) = if a.vol > b.vol { (a, b) } else { (b, a) };
                let _ = writeln!(
                    s,
                    "  n{} -- n{} [label=\"{}⊂{}\"];",
                    a.fingerprint,
                    b.fingerprint,
                    inner.kind,
                    outer.kind
                );
            }
            s.push_str("}\n");
            s
        }
        Format::Text => {
            let mut s = format!("nodes {} edges {}\n", g.nodes.len(), g.edges.len());
            for n in &g.nodes {
                let _ = writeln!(s, "{} {} {} vol {}", n.index, n.kind, n.fingerprint, n.vol);
            }
            for (i, j) in &g.edges {
                let _ = writeln!(s, "{i} -- {j}");
            }
            s
        }
    }
}

fn split_graph(space: &LatticeSpace, radius: u32, a: u32) -> Result<(GraphOut, Vec<WindowLattice>)> {
    let tree = space.split_tree(radius)?;
    let nodes = tree
        .nodes
        .iter()
        .enumerate()
        .map(|(index, l)| NodeOut {
            index,
            kind: if space.vol(l) % 2 == 0 { "even" } else { "odd" }.to_string(),
            fingerprint: l.fingerprint(),
            vol: space.vol(l),
            matrix: space.matrix(l),
        })
        .collect();
    let f = space.field();
    let g = GraphOut { p: f.p(), m: f.m(), a, case: Case::Split, nodes, edges: tree.edges };
    Ok((g, tree.nodes))
}

#[derive(Serialize)]
struct PointOut {
    fingerprint: String,
    stratum: String,
    matrix: Vec<Vec<Vec<u64>>>,
}

fn cmd_lattices(
    args: FieldArgs,
    a: u32,
    case: Case,
    radius: u32,
    points: bool,
    strict_tau: bool,
    out: &Output,
) -> std::result::Result<String, Usage> {
    let f = field(args)?;
    let space = LatticeSpace::new(f.clone(), a)?;
    if case == Case::Split {
        if points {
            return Err(Usage("--points lists inert points; use --case inert".into()));
        }
        let (g, nodes) = split_graph(&space, radius, a)?;
        return Ok(graph_text(&g, &space, &nodes, out.format));
    }
    if a > 1 {
        return Err(Usage("the inert vertex complex is enumerated for windows a <= 1".into()));
    }
    if points {
        allow(out.format, &[Format::Text, Format::Json, Format::Csv], "lattices --points")?;
        let found = space.enumerate_rz_points(&space.standard(), PointSearch::Model, strict_tau)?;
        let tagged: Vec<PointOut> = found
            .iter()
            .map(|d| PointOut {
                fingerprint: d.fingerprint(),
                stratum: match space.vertex_hull(d) {
                    Ok(h) => format!("{:?}", h.stratum).to_lowercase(),
                    Err(e) => format!("error: {e}"),
                },
                matrix: space.matrix(d),
            })
            .collect();
        return Ok(match out.format {
            Format::Json => json(&tagged),
            Format::Csv => csv_table(
                &["fingerprint", "stratum"],
                tagged.iter().map(|t| vec![t.fingerprint.clone(), t.stratum.clone()]),
            ),
            _ => {
                let mut s = format!("points {}\n", tagged.len());
                for t in &tagged {
                    let _ = writeln!(s, "{} {}", t.fingerprint, t.stratum);
                }
                s
            }
        });
    }
    let complex = space.enumerate_vertex_lattices()?;
    let nodes: Vec<NodeOut> = complex
        .nodes
        .iter()
        .enumerate()
        .map(|(index, (l, t))| NodeOut {
            index,
            kind: t.name().to_string(),
            fingerprint: l.fingerprint(),
            vol: space.vol(l),
            matrix: space.matrix(l),
        })
        .collect();
    let lattices: Vec<WindowLattice> = complex.nodes.iter().map(|(l, _)| l.clone()).collect();
    let g = GraphOut { p: f.p(), m: f.m(), a, case, nodes, edges: complex.edges.clone() };
    let mut text = graph_text(&g, &space, &lattices, out.format);
    if out.format == Format::Text {
        let counts: Vec<String> = [VertexType::One, VertexType::ZeroTwo, VertexType::Three]
            .iter()
            .map(|&t| format!("type {} {}", t, complex.count(t)))
            .collect();
        text = format!("{}\n{text}", counts.join(", "));
    }
    Ok(text)
}

fn cmd_tree(args: FieldArgs, a: u32, radius: u32, format: Format) -> std::result::Result<String, Usage> {
    allow(format, &[Format::Dot, Format::Json, Format::Text], "tree")?;
    let space = LatticeSpace::new(field(args)?, a)?;
    let (g, nodes) = split_graph(&space, radius, a)?;
    Ok(graph_text(&g, &space, &nodes, format))
}

fn verify_text(reports: &[CheckReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(s, "{}", r.summary());
        for n in &r.notes {
            let _ = writeln!(s, "    note: {n}");
        }
        for w in &r.witnesses {
            let _ = writeln!(s, "    witness: {}", w.reason);
        }
    }
    s
}

/// Parses the arguments, runs the command, and maps the outcome to an exit code:
/// 0 success, 1 a failed check, 2 a usage error.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> std::result::Result<ExitCode, Usage> {
    match cli.command {
        Command::Tables { case, out } => emit(&cmd_tables(case, &out)?, &out.output)?,
        Command::Dl { field, side, out } => emit(&cmd_dl(field, side, &out)?, &out.output)?,
        Command::Lattices { field, a, case, radius, points, strict_tau, out } => {
            emit(&cmd_lattices(field, a, case, radius, points, strict_tau, &out)?, &out.output)?
        }
        Command::Tree { field, a, radius, format, output } => emit(&cmd_tree(field, a, radius, format)?, &output)?,
        Command::Verify { suite, field, a, out } => {
            allow(out.format, &[Format::Text, Format::Json], "verify")?;
            let reports = verify::run_suites(&suite, field.p, field.m, a)?;
            let text = match out.format {
                Format::Json => json(&reports),
                _ => verify_text(&reports),
            };
            emit(&text, &out.output)?;
            if reports.iter().any(|r| !r.passed()) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
