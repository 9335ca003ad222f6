//! `borbit`: enumerate and manipulate B-orbits of G/H from an active-root spec file.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use borbit_core::linalg::parse_q;
use borbit_core::orbits::format_class_set;
use borbit_core::rootsys::parse_word;
use borbit_core::{
    knop_check, ActiveRootSpec, Budget, EngineError, OrbitEngine, OrbitRecord, PolytopeModel, RootSystem,
    RootSystemError, SpecError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "borbit", version, about = "B-orbits on G/H for strongly solvable spherical subgroups H ⊆ B")]
struct Cli {
    /// Override the cap on the Weyl group order.
    #[arg(long, global = true, env = "BORBIT_MAX_WEYL")]
    max_weyl: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Spec file (JSON).
    spec: PathBuf,
}

#[derive(Args, Debug)]
struct OrbitArg {
    /// Orbit name such as `w=1,2;I=0` (`e` = empty word, `-` = empty I).
    #[arg(long)]
    orbit: String,
}

#[derive(Copy, Clone, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the necessary conditions on (Ψ, δ).
    Validate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Orbit count by the formula and by brute-force reduction of all pairs.
    Count {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// List every orbit with its representative interval and offsets.
    Orbits {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Apply a Weyl group element (word of 1-based simple indices) to an orbit.
    Act {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        orbit: OrbitArg,
        #[arg(long)]
        word: String,
    },
    /// Apply the Richardson–Springer monoid element of a word to an orbit.
    Mact {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        orbit: OrbitArg,
        #[arg(long)]
        word: String,
    },
    /// Stabilizer of an orbit in W.
    Stab {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        orbit: OrbitArg,
    },
    /// JSON export of the subpolytopes conv(wW_Iλ).
    Polytope {
        #[command(flatten)]
        spec: SpecArg,
        /// Regular dominant weight in fundamental-weight coordinates, e.g. `1,2/3`.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// The weak order induced by the monoid action.
    WeakOrder {
        #[command(flatten)]
        spec: SpecArg,
        /// Emit a DOT digraph instead of an edge list.
        #[arg(long)]
        dot: bool,
    },
    /// Compare the orbit count with TU′ and the maximal-rank reduction.
    Knop {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Write the TU′ spec file for a Cartan type.
    TuPrime {
        #[arg(long = "type")]
        label: String,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure(i32, String);

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::RootSystem(r) => r.into(),
            other => Failure(EXIT_USAGE, other.to_string()),
        }
    }
}

impl From<RootSystemError> for Failure {
    fn from(e: RootSystemError) -> Self {
        let code = if matches!(e, RootSystemError::Budget { .. }) { EXIT_BUDGET } else { EXIT_USAGE };
        Failure(code, e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::RootSystem(r) => r.into(),
            EngineError::BadOrbit(..) => Failure(EXIT_USAGE, e.to_string()),
            other => Failure(EXIT_INVALID, other.to_string()),
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure(EXIT_USAGE, e.to_string())
}

/// Parses `args` (including the program name), runs the verb and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let mut budget = Budget::default();
    if let Some(m) = cli.max_weyl {
        budget.max_weyl = m;
    }
    match dispatch(cli.command, &budget, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "borbit: {msg}");
            code
        }
    }
}

fn load(path: &Path, budget: &Budget) -> Result<ActiveRootSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    Ok(ActiveRootSpec::from_json(&text, budget)?)
}

fn engine(path: &Path, budget: &Budget) -> Result<OrbitEngine, Failure> {
    Ok(OrbitEngine::new(load(path, budget)?, budget)?)
}

fn word(e: &OrbitEngine, s: &str) -> Result<Vec<usize>, Failure> {
    parse_word(s, e.root_system().rank()).map_err(|x| Failure(EXIT_USAGE, format!("bad word `{s}`: {x}")))
}

fn record_json(e: &OrbitEngine, r: &OrbitRecord) -> Value {
    let mut v = json!({
        "orbit": e.format_orbit(r.id),
        "extended": e.format_extended(r.extended),
        "m": format_class_set(r.interval.0),
        "M": format_class_set(r.interval.1),
        "length": e.group().length(r.id.w),
        "rank_offset": r.rank_offset,
        "dim_offset": r.dim_offset,
        "closed": r.closed,
        "stabilizer_order": r.stabilizer_order.to_string(),
    });
    if let (Some(d), Some(k)) = (e.absolute_dim(r.id), e.absolute_rank(r.id)) {
        v["dim"] = json!(d);
        v["rank"] = json!(k);
    }
    v
}

fn dispatch(cmd: Command, budget: &Budget, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Validate { spec, format } => {
            let s = load(&spec.spec, budget)?;
            let report = s.validate();
            match format {
                Format::Table => write!(out, "{report}").map_err(io)?,
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable")).map_err(io)?
                }
            }
            Ok(if report.ok { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Count { spec } => {
            let e = engine(&spec.spec, budget)?;
            let (f, b) = (e.formula_count(), e.brute_count() as u128);
            let tag = if f == b { "ok" } else { "MISMATCH" };
            writeln!(out, "formula={f} brute={b} {tag}").map_err(io)?;
            Ok(if f == b { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Orbits { spec, format } => {
            let e = engine(&spec.spec, budget)?;
            let records = e.enumerate_orbits();
            match format {
                Format::Json => {
                    let v: Vec<Value> = records.iter().map(|r| record_json(&e, r)).collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable")).map_err(io)?;
                }
                Format::Table => {
                    writeln!(out, "orbit\textended\tm\tM\trank_offset\tdim_offset\tclosed\tstabilizer").map_err(io)?;
                    for r in &records {
                        writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            e.format_orbit(r.id),
                            e.format_extended(r.extended),
                            format_class_set(r.interval.0),
                            format_class_set(r.interval.1),
                            r.rank_offset,
                            r.dim_offset,
                            r.closed,
                            r.stabilizer_order
                        )
                        .map_err(io)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Act { spec, orbit, word: w } => {
            let e = engine(&spec.spec, budget)?;
            let id = e.parse_orbit(&orbit.orbit)?;
            let v = e.group().from_word(&word(&e, &w)?)?;
            writeln!(out, "{}", e.format_orbit(e.weyl_action(v, id)?)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Mact { spec, orbit, word: w } => {
            let e = engine(&spec.spec, budget)?;
            let id = e.parse_orbit(&orbit.orbit)?;
            let res = e.monoid_word(&word(&e, &w)?, e.extend(id));
            writeln!(out, "{}", e.format_orbit(e.reduce(res))).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Stab { spec, orbit } => {
            let e = engine(&spec.spec, budget)?;
            let st = e.stabilizer(e.parse_orbit(&orbit.orbit)?);
            let gens: Vec<String> = st.generators.iter().map(|r| r.to_string()).collect();
            writeln!(out, "order={}", st.order).map_err(io)?;
            writeln!(out, "generators={}", gens.join(" ")).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Polytope { spec, lambda } => {
            let e = engine(&spec.spec, budget)?;
            let model = match lambda {
                None => PolytopeModel::with_rho(&e),
                Some(s) => {
                    let coords = s
                        .split(',')
                        .map(|t| parse_q(t).ok_or_else(|| Failure(EXIT_USAGE, format!("bad rational `{t}` in λ"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    PolytopeModel::new(&e, coords).map_err(|x| Failure(EXIT_USAGE, x.to_string()))?
                }
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&model.export_json()).expect("serializable")).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::WeakOrder { spec, dot } => {
            let e = engine(&spec.spec, budget)?;
            let g = e.weak_order_graph();
            if dot {
                write!(out, "{}", e.weak_order_dot(&g)).map_err(io)?;
            } else {
                for &(a, b, i) in &g.edges {
                    writeln!(out, "{} -> {} [{}]", e.format_orbit(g.nodes[a]), e.format_orbit(g.nodes[b]), i + 1)
                        .map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Knop { spec, format } => {
            let e = engine(&spec.spec, budget)?;
            let r = knop_check(&e)?;
            match format {
                Format::Json => {
                    let v = json!({
                        "count_h": r.count_h.to_string(),
                        "count_tu": r.count_tu.to_string(),
                        "count_reduction": r.count_reduction.to_string(),
                        "satisfied": r.satisfied,
                        "chain": r.chain_holds(),
                        "reduction_spec": serde_json::to_value(r.reduction_spec.to_file()).expect("serializable"),
                        "warnings": r.warnings,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable")).map_err(io)?;
                }
                Format::Table => {
                    writeln!(
                        out,
                        "count_h={} count_reduction={} count_tu={} satisfied={} chain={}",
                        r.count_h,
                        r.count_reduction,
                        r.count_tu,
                        r.satisfied,
                        r.chain_holds()
                    )
                    .map_err(io)?;
                    writeln!(out, "reduction={}", r.reduction_spec.to_json()).map_err(io)?;
                    for w in &r.warnings {
                        writeln!(out, "warning: {w}").map_err(io)?;
                    }
                }
            }
            Ok(if r.satisfied && r.chain_holds() { EXIT_OK } else { EXIT_INVALID })
        }
        Command::TuPrime { label, out: path } => {
            let rs = RootSystem::new(&label, budget)?;
            let text = serde_json::to_string_pretty(&ActiveRootSpec::tu_prime(rs.into()).to_file()).expect("serializable");
            match path {
                Some(p) => std::fs::write(&p, text + "\n").map_err(|x| Failure(EXIT_USAGE, format!("{}: {x}", p.display())))?,
                None => writeln!(out, "{text}").map_err(io)?,
            }
            Ok(EXIT_OK)
        }
    }
}

