//! The `weaklaw` command line: argument parsing, dispatch to the checkers
//! and rendering of the resulting report.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use weaklaw::barr::{barr_lift, check_weakly_cartesian_functor, check_weakly_cartesian_nat, Component};
use weaklaw::catalog::catalog;
use weaklaw::finrel::{FinFn, FinRel, FinSet};
use weaklaw::lawengine::{
    barr_extension, check_delta_algebra, check_equivalences, check_law, check_weak_lifting_on, compare_laws,
    law_by_name, law_from_extension, CompositeMonad, DeltaAlgebra, DistLaw, Strength, WeakLifting, LAW_NAMES,
};
use weaklaw::monadkit::{check_algebra, check_monad_laws, enumerate_algebras, functor_of, AlgebraSpec, CheckConfig, MonadRef};
use weaklaw::showcase::{
    composite_is_filter_monad, lattice_delta_algebra, lattice_scan, nonempty_variant_demo, normal_band_demo,
    order_value, quantale_demo, subsemigroup_demo, vietoris_delta_matches_extension, vietoris_monad_fin, CommMonoid,
    FinBand, FinLattice,
};
use weaklaw::zoo;
use weaklaw::{Budget, Error, LawReport, Status};

mod dot;
pub mod instances;

#[derive(Parser, Debug)]
#[command(name = "weaklaw", version, about = "Check monads, relation liftings and weak distributive laws on small finite sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Carrier sizes: `N` for 0..=N, `A..B`, or a list `0,2,3`.
    #[arg(long, global = true, default_value = "2")]
    pub size: String,
    /// Element budget for listed carriers.
    #[arg(long, global = true, env = "WEAKLAW_BUDGET")]
    pub budget: Option<u128>,
    /// Treat the law as weak (three diagrams).
    #[arg(long, global = true)]
    pub weak: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = CheckConfig::DEFAULT_SEED)]
    pub seed: u64,
    /// JSON report on stdout.
    #[arg(long, global = true, conflicts_with = "dot")]
    pub json: bool,
    /// Graphviz output of the report tree and any witness.
    #[arg(long, global = true)]
    pub dot: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    /// JSON file holding the instance (`-` for stdin).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// A named lattice: chain(n), m3, n5, diamond, powerset(n), reverse-powerset(n), all(n).
    #[arg(long)]
    pub lattice: Option<String>,
    /// A named commutative monoid: cyclic(n).
    #[arg(long)]
    pub monoid: Option<String>,
    /// A named normal band: free(n), chain(n).
    #[arg(long)]
    pub band: Option<String>,
    /// A discrete space on n points.
    #[arg(long)]
    pub discrete: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Monad axioms, functoriality and naturality.
    CheckMonad { monad: String },
    /// The algebra (or semialgebra) axioms for one action, or a count of all algebras.
    CheckAlgebra {
        monad: String,
        #[command(flatten)]
        source: Source,
        /// Drop the unit axiom.
        #[arg(long)]
        semi: bool,
        /// Enumerate the algebras on each carrier size instead.
        #[arg(long)]
        enumerate: bool,
    },
    /// The Barr extension of a functor applied to a relation.
    LiftRelation {
        functor: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Weak cartesianness of a functor, its unit or its multiplication.
    CheckWc {
        monad: String,
        #[arg(long, value_enum)]
        component: Option<WcPart>,
    },
    /// The law of P over a monad derived from its Barr extension.
    DeriveLaw { monad: String },
    /// The (weak) distributive law diagrams.
    CheckLaw { law: String },
    /// Split the lifted semialgebra of one algebra.
    WeakLift {
        law: String,
        #[command(flatten)]
        source: Source,
    },
    /// Monad axioms for the composite monad of a law.
    Composite { law: String },
    /// The compatibility square of a δ-algebra.
    CheckDeltaAlgebra {
        law: String,
        #[command(flatten)]
        source: Source,
    },
    /// δ-algebras, composite-monad algebras and lifted-monad algebras agree.
    CheckEquivalences { law: String },
    /// Worked examples: vietoris, quantale, semilattice, normal-band, nonempty, lattice-scan.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
    /// Shipped monads, laws and demos.
    Catalog,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WcPart {
    Functor,
    Unit,
    Mult,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemoName {
    Vietoris,
    Quantale,
    Semilattice,
    NormalBand,
    Nonempty,
    LatticeScan,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// What one run prints, and how it exits.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad --size {s:?}"));
    let sizes: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..=b).collect()
    } else if s.contains(',') {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    } else {
        (0..=s.parse::<usize>().map_err(|_| bad())?).collect()
    };
    if sizes.is_empty() {
        bail!(Error::Parse(format!("--size {s:?} names no sizes")));
    }
    Ok(sizes)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn source_instance(s: &Source) -> Result<Option<instances::Instance>> {
    let named = [("lattice", &s.lattice), ("monoid", &s.monoid), ("band", &s.band), ("discrete", &s.discrete)];
    let given: Vec<_> = named.iter().filter_map(|(k, v)| v.as_ref().map(|v| (*k, v))).collect();
    match given.as_slice() {
        [] => Ok(None),
        [(k, v)] => Ok(Some(instances::parse(k, v)?)),
        _ => bail!(Error::Parse("give at most one of --lattice, --monoid, --band, --discrete".into())),
    }
}

fn algebra_from(m: &MonadRef, s: &Source) -> Result<AlgebraSpec> {
    if let Some(p) = &s.input {
        let f: FinFn = read_json(p)?;
        return Ok(AlgebraSpec::from_fn(m, &f)?);
    }
    let inst = source_instance(s)?.context(Error::Parse("an algebra needs --input or a named instance".into()))?;
    instances::algebra(m, &inst)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaInput {
    t: FinFn,
    s: FinFn,
}

fn with_strength(d: DistLaw, weak: bool) -> DistLaw {
    d.with_strength(if weak { Strength::Weak } else { Strength::Strict })
}

fn demo(name: DemoName, sizes: &[usize], cfg: &CheckConfig) -> Result<LawReport> {
    let positive: Vec<usize> = sizes.iter().copied().filter(|&n| n > 0).collect();
    Ok(match name {
        DemoName::Vietoris => {
            let mut r = vietoris_monad_fin(sizes, cfg)?;
            let small: Vec<usize> = sizes.iter().copied().filter(|&n| n <= 2).collect();
            for n in small {
                r.push(vietoris_delta_matches_extension(&FinSet::standard(n), cfg.budget)?);
            }
            r.push(composite_is_filter_monad(sizes, cfg)?);
            r
        }
        DemoName::Quantale => {
            let mut groups = vec![quantale_demo(&CommMonoid::cyclic(2))?];
            for &n in &positive {
                let all = CommMonoid::all(n).iter().map(quantale_demo).collect::<weaklaw::Result<Vec<_>>>()?;
                groups.push(LawReport::group(format!("commutative monoids of size {n}"), "", all));
            }
            LawReport::group("quantales from commutative monoids", "P of a commutative monoid is a commutative unital quantale", groups)
        }
        DemoName::Semilattice => {
            let mut groups = vec![subsemigroup_demo(&FinLattice::diamond())?];
            for &n in &positive {
                let all: Vec<LawReport> = FinLattice::all(n)
                    .iter()
                    .map(|l| Ok(subsemigroup_demo(l)?.with_fact("order", order_value(l))))
                    .collect::<weaklaw::Result<_>>()?;
                groups.push(LawReport::group(format!("semilattices of size {n}"), "", all));
            }
            LawReport::group("subsemigroups of semilattices", "the weak lifting of P to semilattices", groups)
        }
        DemoName::NormalBand => {
            let mut bands = Vec::new();
            for &n in &positive {
                if n <= 2 {
                    bands.push(FinBand::free(n)?);
                }
                bands.push(FinBand::from_semilattice(&FinLattice::chain(n))?);
            }
            normal_band_demo(&bands, zoo::DEFAULT_DEGREE, cfg)?
        }
        DemoName::Nonempty => nonempty_variant_demo(sizes, cfg)?,
        DemoName::LatticeScan => lattice_scan(&positive, 3)?,
    })
}

fn dispatch(cli: &Cli) -> Result<Rendered> {
    let o = &cli.opts;
    let sizes = parse_sizes(&o.size)?;
    let budget = match o.budget {
        Some(0) => bail!(Error::Parse("--budget must be at least 1".into())),
        Some(b) => Budget::new(b),
        None => Budget::default(),
    };
    let cfg = CheckConfig::with_budget(budget).seeded(o.seed);
    let monad = |name: &str| -> Result<MonadRef> { Ok(zoo::by_name(name, budget)?) };
    let law = |name: &str| -> Result<DistLaw> { Ok(law_by_name(name, budget)?) };
    let max = *sizes.iter().max().expect("sizes are nonempty");
    let report = match &cli.command {
        Command::Catalog => return Ok(Rendered::Catalog),
        Command::CheckMonad { monad: m } => check_monad_laws(&monad(m)?, &sizes, &cfg)?,
        Command::CheckAlgebra { monad: m, source, semi, enumerate } => {
            let m = monad(m)?;
            if *enumerate {
                let mut groups = Vec::new();
                for &n in &sizes {
                    let algs = enumerate_algebras(&m, &FinSet::standard(n), &cfg)?;
                    groups.push(LawReport::pass(format!("algebras on {n} points"), "", 1).with_fact("algebras", algs.len()));
                }
                LawReport::group(format!("{}-algebras", m.name()), "", groups)
            } else {
                check_algebra(&algebra_from(&m, source)?, !semi, &cfg)?
            }
        }
        Command::LiftRelation { functor, input } => {
            let f = functor_of(&monad(functor)?);
            let r: FinRel = read_json(input)?;
            let lifted = barr_lift(&f, &r)?;
            LawReport::pass(format!("{} lifted along {}", r.dom().name(), f.name()), "F̃(R) = (Fq)_*(Fp)^*", 1)
                .with_fact("pairs", lifted.pairs().len())
                .with_fact("relation", &lifted)
        }
        Command::CheckWc { monad: m, component } => {
            let m = monad(m)?;
            let f = functor_of(&m);
            let parts = match component {
                Some(p) => vec![*p],
                None => vec![WcPart::Functor, WcPart::Unit, WcPart::Mult],
            };
            let mut out = Vec::new();
            for p in parts {
                out.push(match p {
                    WcPart::Functor => check_weakly_cartesian_functor(&f, max, &cfg)?,
                    WcPart::Unit => check_weakly_cartesian_nat(&m, Component::Unit, max, &cfg)?,
                    WcPart::Mult => check_weakly_cartesian_nat(&m, Component::Mult, max, &cfg)?,
                });
            }
            if out.len() == 1 {
                out.pop().expect("one report")
            } else {
                LawReport::group(format!("weak cartesianness of {}", m.name()), "", out)
            }
        }
        Command::DeriveLaw { monad: m } => {
            let t = monad(m)?;
            let strength = if o.weak { Strength::Weak } else { Strength::Strict };
            let derived = law_from_extension(&format!("derived-p-over-{}", t.name()), &barr_extension(&t), strength);
            let mut children = vec![check_law(&derived, &sizes, &cfg)?];
            for name in LAW_NAMES {
                let shipped = law(name)?;
                if shipped.t().name() == t.name() && shipped.s().name() == derived.s().name() {
                    children.push(compare_laws(&shipped, &derived, &sizes, &cfg)?);
                }
            }
            LawReport::group(format!("law derived from the Barr extension of {}", t.name()), "", children)
        }
        Command::CheckLaw { law: l } => check_law(&with_strength(law(l)?, o.weak), &sizes, &cfg)?,
        Command::WeakLift { law: l, source } => {
            let d = law(l)?;
            let a = algebra_from(d.t(), source)?;
            let w = WeakLifting::from_law(&d);
            let lifted = w.lift(&a)?;
            let mut r = check_weak_lifting_on(&w, std::slice::from_ref(&a), &cfg)?;
            r.set_fact("carrier", lifted.algebra.carrier.len());
            r.set_fact("lifted", lifted.iota.images().to_vec());
            r
        }
        Command::Composite { law: l } => {
            let d = law(l)?;
            let d = if o.weak { d.with_strength(Strength::Weak) } else { d };
            let c: MonadRef = Arc::new(CompositeMonad::new(&d));
            check_monad_laws(&c, &sizes, &cfg)?
        }
        Command::CheckDeltaAlgebra { law: l, source } => {
            let d = law(l)?;
            if let Some(p) = &source.input {
                let inp: DeltaInput = read_json(p)?;
                check_delta_algebra(&d, &DeltaAlgebra::new(&inp.t, &inp.s)?, &cfg)?
            } else {
                let spec = source.lattice.as_deref().context(Error::Parse("give --input or --lattice".into()))?;
                let mut out = Vec::new();
                for lat in instances::lattices(spec)? {
                    out.push(
                        check_delta_algebra(&d, &lattice_delta_algebra(&d, &lat)?, &cfg)?
                            .with_fact("distributive", lat.is_distributive())
                            .with_fact("order", order_value(&lat)),
                    );
                }
                if out.len() == 1 {
                    out.pop().expect("one report")
                } else {
                    LawReport::group(format!("δ-algebras on {spec}"), "", out)
                }
            }
        }
        Command::CheckEquivalences { law: l } => check_equivalences(&law(l)?, &sizes, &cfg)?,
        Command::Demo { name } => demo(*name, &sizes, &cfg)?,
    };
    Ok(Rendered::Report(report))
}

enum Rendered {
    Report(LawReport),
    Catalog,
}

fn exit_for_error(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(err) if err.is_budget() => EXIT_BUDGET,
        _ => EXIT_PARSE,
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let rendered = match dispatch(cli) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {e:#}\n"),
                code: exit_for_error(&e),
            }
        }
    };
    let o = &cli.opts;
    match rendered {
        Rendered::Catalog => {
            let c = catalog();
            Outcome {
                stdout: if o.json { c.to_json() + "\n" } else { c.to_text() },
                stderr: String::new(),
                code: EXIT_PASS,
            }
        }
        Rendered::Report(r) => {
            let stdout = if o.json {
                r.to_json() + "\n"
            } else if o.dot {
                dot::render(&r)
            } else {
                r.to_text()
            };
            let (code, stderr) = match r.status {
                Status::Pass => (EXIT_PASS, String::new()),
                Status::SampledPass => (EXIT_PASS, "warning: some checks were sampled, not exhaustive\n".to_string()),
                Status::Fail => (EXIT_FAIL, String::new()),
                Status::BudgetExceeded => (EXIT_BUDGET, "error: element budget exceeded before a verdict\n".to_string()),
            };
            Outcome { stdout, stderr, code }
        }
    }
}

/// Parses and runs `args` (program name first), as the binary does.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
            let text = e.render().to_string();
            if code == EXIT_PASS {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            }
        }
    }
}
