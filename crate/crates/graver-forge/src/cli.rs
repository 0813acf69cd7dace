//! Command-line front end: analysis, sparsification, instance generation and
//! the validation suites.
//!
//! Exit codes: 0 success / Transformed, 1 usage or parse error, 2
//! NotEquivalent verdict, 3 budget exceeded, 4 validation failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::depth::{csdd_depth, Exactness, SubspaceConfig};
use crate::forge::{gn_family, hardness_instance, HardnessVariant};
use crate::graph::{incidence_graph, tree_depth, Graph};
use crate::matrix::{entry_complexity, RatMatrix, Rational};
use crate::matroid::FieldSpec;
use crate::precondition::{
    alg_td_d, alg_td_p, incidence_sparsify, Bounds, PreconditionError, PreconditionOutcome,
};
use crate::report::{analyze_matrix, render_text, AnalysisConfig, SCHEMA};
use crate::validate::{run_suite, SuiteConfig, SUITES};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NOT_EQUIVALENT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_VALIDATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "graver-forge",
    about = "Exact depth parameters, preconditioners, circuits and Graver bases of rational matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Debug)]
struct FieldArg(FieldSpec);

fn parse_field(s: &str) -> Result<FieldArg, String> {
    if s == "q" {
        return Ok(FieldArg(FieldSpec::Rationals));
    }
    if let Some(p) = s.strip_prefix("gf:") {
        let p: u64 = p.parse().map_err(|_| format!("bad prime in field selector {s:?}"))?;
        if !crate::field::is_prime_u64(p) {
            return Err(format!("{p} is not prime"));
        }
        return Ok(FieldArg(FieldSpec::PrimeField(p)));
    }
    Err(format!("unknown field {s:?}; use q or gf:P"))
}

#[derive(Args, Clone)]
struct Common {
    /// Field for matroid computations: q or gf:P
    #[arg(long, value_parser = parse_field, default_value = "q")]
    field: FieldArg,
    /// Depth-search budget
    #[arg(long)]
    budget_depth: Option<usize>,
    /// Extra ∞-norm margin for the Graver verification box
    #[arg(long)]
    graver_box: Option<u64>,
    /// Override for the scaling constant κ₀ (primal) or circuit bound k (dual)
    #[arg(long)]
    kappa: Option<i64>,
    /// Coefficient bound for candidate subspace generators
    #[arg(long)]
    gen_bound: Option<i64>,
    /// Seed for randomized corpora
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Target {
    Primal,
    Dual,
    Incidence,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Gn,
    Hardness,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Variant {
    /// M_F(G′) with the csd threshold
    Cstar,
    /// 2·M_F(G′) with the cd threshold
    Cd2m,
    /// (|G′|+1)-fold clone with the cdd threshold
    CddClone,
    /// (|G′|+1)-fold clone with the csdd threshold
    CsddClone,
    /// Dual of 2·M_F(G′) with the dd threshold
    DdDual,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report every depth parameter, circuit and Graver statistic of a matrix
    Analyze {
        matrix: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Include decomposition-tree witnesses in JSON output
        #[arg(long)]
        witnesses: bool,
    },
    /// Row-reduce a matrix to certified small primal/dual/incidence tree-depth
    Sparsify {
        target: Target,
        matrix: PathBuf,
        /// Target depth d
        #[arg(short = 'd', long, default_value_t = 4)]
        depth: u32,
        /// Entry-complexity budget e in bits (primal target; default: from input)
        #[arg(short = 'e', long)]
        entry_bits: Option<u32>,
        /// Write the transformed matrix here
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Generate hardness-reduction and recursive-gadget instances
    Generate {
        family: Family,
        /// Gadget index n (gn family)
        #[arg(short = 'n', long, default_value_t = 2)]
        n: usize,
        /// Cross edges of the bipartite graph, e.g. "0-2,1-3" (hardness family)
        #[arg(long, default_value = "")]
        edges: String,
        /// Left part, e.g. "0,1"
        #[arg(long, default_value = "0,1")]
        x: String,
        /// Right part, e.g. "2,3"
        #[arg(long, default_value = "2,3")]
        y: String,
        /// Balanced-independent-set size parameter
        #[arg(short = 'k', long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Variant::Cstar)]
        variant: Variant,
        /// Output directory
        #[arg(short = 'o', long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a seeded validation suite
    Validate {
        /// One of: tdP tdI orig-eq equiv circuit-bound graph-reduction a-contract gn graver
        suite: String,
        /// Corpus size override (0 = suite default)
        #[arg(long, default_value_t = 0)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap's help/version "errors" exit 0; real usage errors exit 1
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.cmd {
        Cmd::Analyze { matrix, common, witnesses } => cmd_analyze(&matrix, &common, witnesses),
        Cmd::Sparsify { target, matrix, depth, entry_bits, out, common } => {
            cmd_sparsify(target, &matrix, depth, entry_bits, out.as_deref(), &common)
        }
        Cmd::Generate { family, n, edges, x, y, k, variant, out, common } => {
            cmd_generate(family, n, &edges, &x, &y, k, variant, &out, &common)
        }
        Cmd::Validate { suite, count, common } => cmd_validate(&suite, count, &common),
    };
    ExitCode::from(code.unwrap_or_else(|msg| {
        eprintln!("error: {msg}");
        EXIT_USAGE
    }))
}

fn read_matrix(path: &Path) -> Result<RatMatrix, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    RatMatrix::parse_rmx(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn subspace_config(common: &Common) -> SubspaceConfig {
    let mut sub = SubspaceConfig::default();
    if let Some(b) = common.gen_bound {
        sub.bound = b;
    }
    sub
}

fn cmd_analyze(path: &Path, common: &Common, witnesses: bool) -> Result<u8, String> {
    let a = read_matrix(path)?;
    let cfg = AnalysisConfig {
        field: common.field.0,
        budget_depth: common.budget_depth,
        graver_box: common.graver_box,
        subspace: subspace_config(common),
        witnesses,
    };
    let report = analyze_matrix(&a, &cfg);
    if common.json {
        println!("{}", report.json);
    } else {
        print!("{}", render_text(&report));
    }
    Ok(if report.budget_hit { EXIT_BUDGET } else { EXIT_OK })
}

fn outcome_code(outcome: &PreconditionOutcome) -> u8 {
    match outcome {
        PreconditionOutcome::Transformed { .. } => EXIT_OK,
        PreconditionOutcome::NotEquivalent { .. } => EXIT_NOT_EQUIVALENT,
    }
}

fn emit_outcome(
    outcome: &PreconditionOutcome,
    out: Option<&Path>,
    common: &Common,
) -> Result<u8, String> {
    if let (Some(path), PreconditionOutcome::Transformed { matrix, .. }) = (out, outcome) {
        std::fs::write(path, matrix.to_rmx()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if common.json {
        println!("{}", outcome.to_json());
    } else {
        match outcome {
            PreconditionOutcome::Transformed { matrix, bounds, exactness, .. } => {
                println!(
                    "transformed: tree-depth {}{}, entry complexity {}",
                    bounds.td,
                    if *exactness == Exactness::Exact { "" } else { " (upper bound)" },
                    bounds.ec
                );
                if out.is_none() {
                    print!("{}", matrix.to_rmx());
                }
            }
            PreconditionOutcome::NotEquivalent { reason } => {
                println!("not equivalent: {reason}");
            }
        }
    }
    Ok(outcome_code(outcome))
}

fn precondition_code(e: PreconditionError) -> Result<u8, String> {
    match e {
        PreconditionError::BudgetExceeded(msg) => {
            eprintln!("budget exceeded: {msg}");
            Ok(EXIT_BUDGET)
        }
        other => Err(other.to_string()),
    }
}

fn cmd_sparsify(
    target: Target,
    path: &Path,
    d: u32,
    entry_bits: Option<u32>,
    out: Option<&Path>,
    common: &Common,
) -> Result<u8, String> {
    let a = read_matrix(path)?;
    let kappa = common.kappa.map(BigInt::from);
    match target {
        Target::Primal => {
            let e = entry_bits.unwrap_or_else(|| max_entry_bits(&a));
            match alg_td_p(&a, d, e, kappa) {
                Ok(outcome) => emit_outcome(&outcome, out, common),
                Err(err) => precondition_code(err),
            }
        }
        Target::Dual => match alg_td_d(&a, d, kappa) {
            Ok(outcome) => emit_outcome(&outcome, out, common),
            Err(err) => precondition_code(err),
        },
        Target::Incidence => {
            let m = crate::matroid::LinearMatroid::matroid_of(&a, FieldSpec::Rationals)
                .map_err(|e| e.to_string())?;
            let sub = subspace_config(common);
            let rep = match csdd_depth(&m, common.budget_depth, &sub) {
                Ok(r) => r,
                Err(crate::depth::DepthError::ExceedsBudget(b)) => {
                    eprintln!("budget exceeded: csdd > {b}");
                    return Ok(EXIT_BUDGET);
                }
                Err(e) => return Err(e.to_string()),
            };
            let b = match incidence_sparsify(&a, &rep.witness) {
                Ok(b) => b,
                Err(err) => return precondition_code(err),
            };
            let td = tree_depth(&incidence_graph(&b), None).unwrap().0;
            let outcome = PreconditionOutcome::Transformed {
                bounds: Bounds { td, ec: entry_complexity(&b), c1: None },
                certificate: Some(rep.witness),
                exactness: rep.exactness,
                matrix: b,
            };
            emit_outcome(&outcome, out, common)
        }
    }
}

fn max_entry_bits(a: &RatMatrix) -> u32 {
    let mut e = 1u64;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.at(i, j);
            e = e.max(x.numer().magnitude().bits()).max(x.denom().magnitude().bits());
        }
    }
    e as u32
}

fn parse_vertex_list(s: &str) -> Result<Vec<usize>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad vertex {t:?}")))
        .collect()
}

fn parse_edge_list(s: &str) -> Result<Vec<(usize, usize)>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let (u, v) = t.trim().split_once('-').ok_or_else(|| format!("bad edge {t:?}"))?;
            Ok((
                u.parse().map_err(|_| format!("bad edge {t:?}"))?,
                v.parse().map_err(|_| format!("bad edge {t:?}"))?,
            ))
        })
        .collect()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, String> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(path)
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    family: Family,
    n: usize,
    edges: &str,
    x: &str,
    y: &str,
    k: usize,
    variant: Variant,
    out: &Path,
    common: &Common,
) -> Result<u8, String> {
    std::fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    let manifest = match family {
        Family::Gn => {
            if n == 0 || n > 6 {
                return Err("gadget index n must be in 1..=6".to_string());
            }
            let inst = gn_family(n);
            // columns of the cycle-matroid representation: e_u - e_v per edge
            let mut a = RatMatrix::zero(inst.vertices, inst.edges.len());
            for (j, &(u, v)) in inst.edges.iter().enumerate() {
                *a.at_mut(u, j) = Rational::from_integer(1.into());
                *a.at_mut(v, j) = Rational::from_integer((-1).into());
            }
            let rmx = write_file(out, &format!("gn_{n}.rmx"), &a.to_rmx())?;
            let manifest = json!({
                "schema": SCHEMA,
                "kind": "gn-instance",
                "n": n,
                "vertices": inst.vertices,
                "edges": inst.edges,
                "r": inst.r,
                "b": inst.b,
                "matrix": rmx.file_name().unwrap().to_str(),
                "expected": {
                    "path_length_range": [n, 2 * n],
                    "max_circuit": 4 * n,
                    "cd_lower_bound": n * (n - 1) / 2,
                },
            });
            write_file(out, &format!("gn_{n}.json"), &format!("{manifest}\n"))?;
            manifest
        }
        Family::Hardness => {
            let xs = parse_vertex_list(x)?;
            let ys = parse_vertex_list(y)?;
            let es = parse_edge_list(edges)?;
            let nverts = xs.iter().chain(&ys).copied().max().map_or(0, |m| m + 1);
            let mut g = Graph::new(nverts);
            for &(u, v) in &es {
                if u >= nverts || v >= nverts {
                    return Err(format!("edge {u}-{v} outside the vertex set"));
                }
                g.add_edge(u, v);
            }
            let which = match variant {
                Variant::Cstar => HardnessVariant::Cstar,
                Variant::Cd2m => HardnessVariant::Cd2M,
                Variant::CddClone => HardnessVariant::CddClone,
                Variant::CsddClone => HardnessVariant::CsddClone,
                Variant::DdDual => HardnessVariant::DdDual,
            };
            let inst = hardness_instance(&g, &xs, &ys, k, common.field.0, which)
                .map_err(|e| e.to_string())?;
            let gr = write_file(out, "hardness.gr", &inst.completed_graph.to_gr())?;
            let mtx = write_file(out, "hardness.matroid", &inst.matroid.to_text())?;
            let manifest = json!({
                "schema": SCHEMA,
                "kind": "hardness-instance",
                "x": xs,
                "y": ys,
                "k": k,
                "variant": format!("{:?}", which),
                "threshold": inst.threshold,
                "graph": gr.file_name().unwrap().to_str(),
                "matroid": mtx.file_name().unwrap().to_str(),
                "ground_size": inst.matroid.ground_size(),
            });
            write_file(out, "hardness.json", &format!("{manifest}\n"))?;
            manifest
        }
    };
    if common.json {
        println!("{manifest}");
    } else {
        println!("wrote instance files to {}", out.display());
    }
    Ok(EXIT_OK)
}

fn cmd_validate(suite: &str, count: usize, common: &Common) -> Result<u8, String> {
    let cfg = SuiteConfig { seed: common.seed, count, field: common.field.0 };
    let outcome = run_suite(suite, &cfg)
        .ok_or_else(|| format!("unknown suite {suite:?}; available: {}", SUITES.join(" ")))?;
    if common.json {
        println!("{}", outcome.to_json());
    } else {
        println!(
            "suite {}: {} cases, {}",
            outcome.suite,
            outcome.cases,
            if outcome.pass() { "pass" } else { "FAIL" }
        );
        for f in &outcome.failures {
            println!("  failure: {f}");
        }
        for n in &outcome.notes {
            println!("  {n}");
        }
    }
    Ok(if outcome.pass() { EXIT_OK } else { EXIT_VALIDATION })
}
