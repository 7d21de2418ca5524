//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 input error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::algfunctor::{
    algebra_ft, check_exponential, match_reference, parse_algebra, reconstruct_lattice, verify_algebra_structure,
    verify_product_union, AlgebraFunctorRep,
};
use crate::functors::{constant, functor_ft, hom_solver, representable, tensor, zero, FunctorRep, RModule};
use crate::lattices::{named, Lattice};
use crate::relations::Correspondence;
use crate::suite::{criterion_reports, small_functors, CRITERIA, PAIRING_SAMPLES};
use crate::sweep::Execution;
use crate::theorems::{
    tau_component, verify_adjunction_dims, verify_composition_laws, verify_functoriality, verify_internal_hom_constant,
    verify_internal_hom_dual, verify_internal_hom_representable, verify_lev_tensor, verify_pairing_bijection,
    verify_representable_tensor, verify_tau, SweepConfig, VerificationReport,
};

/// Largest accepted `--bound`; the largest one runs with a warning.
pub const MAX_BOUND: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "corrfunctor", version, about = "Correspondence functors over finite lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Largest set size represented.
    #[arg(long, global = true, default_value_t = 3)]
    pub bound: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random size-3 correspondences per sweep.
    #[arg(long, global = true, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, global = true)]
    pub json: bool,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// A built-in lattice name (chain0..chain4, powerset1..3, m3, n5, diamond) or a lattice file.
    #[arg(long, global = true)]
    pub lattice: Vec<String>,
    /// `ft:<lattice>` or an algebra file.
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    /// `const`, `zero`, `rep:<e>` or `ft:<lattice>`.
    #[arg(long, global = true)]
    pub functor: Vec<String>,
    /// `regular:<e>`, `trivial:<e>` or `zero:<e>`.
    #[arg(long, global = true)]
    pub module: Vec<String>,
    /// Sizes of the sets `E` for representable verifiers.
    #[arg(long = "e", global = true)]
    pub e: Vec<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Composite `V∘U` of two correspondence files.
    Compose { v: PathBuf, u: PathBuf },
    /// Parses a lattice and prints its covers and tables.
    LatticeCheck,
    /// `dim F_T(n)` for `n ≤ bound`.
    FtDims,
    /// Dimensions of `F_T ⊗ F_T'` and `F_{T×T'}`, and whether `τ` is a basis bijection.
    TensorDims,
    /// Runs a verifier by id, or `all` for the acceptance suite.
    Verify { id: String },
    /// Recovers a lattice from an algebra functor.
    Reconstruct,
    /// `dim Hom(M, M')` for two functors.
    HomDims,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Verification,
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn input<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Input(msg.into()))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_lattice(arg: &str) -> Result<Lattice, Failure> {
    if let Ok(l) = named(arg) {
        return Ok(l);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return input(format!("unknown lattice `{arg}` (not a built-in name or a file)"));
    }
    Lattice::parse(&read_file(path)?).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

fn load_functor(arg: &str, bound: usize) -> Result<FunctorRep, Failure> {
    match arg.split_once(':') {
        None if arg == "const" || arg == "constant" => Ok(constant(bound)),
        None if arg == "zero" => Ok(zero(bound)),
        Some(("rep", e)) => e
            .parse()
            .map(|e| representable(e, bound))
            .map_err(|_| Failure::Input(format!("bad size in `{arg}`"))),
        Some(("ft", l)) => Ok(functor_ft(Arc::new(load_lattice(l)?), bound)),
        _ => input(format!("unknown functor `{arg}` (const, zero, rep:<e>, ft:<lattice>)")),
    }
}

fn load_module(arg: &str) -> Result<RModule, Failure> {
    let (kind, e) = arg.split_once(':').unwrap_or((arg, "1"));
    let e: usize = e.parse().map_err(|_| Failure::Input(format!("bad size in `{arg}`")))?;
    match kind {
        "regular" => Ok(RModule::regular(e)),
        "trivial" => Ok(RModule::trivial(e)),
        "zero" => Ok(RModule::zero(e)),
        _ => input(format!("unknown module `{arg}` (regular:<e>, trivial:<e>, zero:<e>)")),
    }
}

/// Returns the algebra and, for `ft:` inputs, the lattice it came from.
fn load_algebra(arg: &str, bound: usize) -> Result<(AlgebraFunctorRep, Option<(String, Lattice)>), Failure> {
    if let Some(l) = arg.strip_prefix("ft:") {
        let t = load_lattice(l)?;
        return Ok((algebra_ft(Arc::new(t.clone()), bound), Some((l.to_string(), t))));
    }
    let a = parse_algebra(&read_file(Path::new(arg))?).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
    Ok((a, None))
}

fn join(v: &[usize]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
}

struct Ctx<'a> {
    cli: &'a Cli,
    cfg: SweepConfig,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn lattices(&self, n: usize, default: &[&str]) -> Result<Vec<(String, Lattice)>, Failure> {
        let names: Vec<String> = if self.cli.lattice.is_empty() {
            default.iter().map(|s| s.to_string()).collect()
        } else {
            self.cli.lattice.clone()
        };
        if names.len() != n {
            return input(format!("expected {n} --lattice argument(s), got {}", names.len()));
        }
        names.into_iter().map(|s| load_lattice(&s).map(|l| (s, l))).collect()
    }

    fn functors(&self, default: &[&str]) -> Result<Vec<FunctorRep>, Failure> {
        let specs: Vec<String> = if self.cli.functor.is_empty() {
            default.iter().map(|s| s.to_string()).collect()
        } else {
            self.cli.functor.clone()
        };
        specs.iter().map(|s| load_functor(s, self.cli.bound)).collect()
    }

    fn algebra(&self) -> Result<(AlgebraFunctorRep, Option<(String, Lattice)>), Failure> {
        match &self.cli.algebra {
            Some(arg) => load_algebra(arg, self.cli.bound),
            None => match self.cli.lattice.first() {
                Some(l) => load_algebra(&format!("ft:{l}"), self.cli.bound),
                None => input("--algebra is required"),
            },
        }
    }

    fn report(&mut self, reports: &[VerificationReport]) -> Outcome {
        for r in reports {
            if self.cli.json {
                writeln!(self.out, "{}", r.to_json())?;
            } else {
                writeln!(self.out, "{r}")?;
            }
        }
        if reports.iter().all(VerificationReport::passed) {
            Ok(())
        } else {
            Err(Failure::Verification)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    if cli.bound > MAX_BOUND {
        let _ = writeln!(err, "error: --bound {} exceeds the supported maximum {MAX_BOUND}", cli.bound);
        return 2;
    }
    if cli.bound == MAX_BOUND {
        let _ = writeln!(err, "warning: bound {MAX_BOUND} enumerates 2^16 correspondences per shape; expect long runtimes");
    }
    let cfg = SweepConfig {
        samples: cli.samples,
        seed: cli.seed,
        exec: if cli.sequential { Execution::Sequential } else { Execution::default() },
    };
    let mut ctx = Ctx { cli: &cli, cfg, out };
    let result = dispatch(&mut ctx);
    let _ = ctx.out.flush();
    match result {
        Ok(()) => 0,
        Err(Failure::Verification) => 1,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>) -> Outcome {
    let cli = ctx.cli;
    let bound = cli.bound;
    match &cli.command {
        Command::Compose { v, u } => {
            let parse = |p: &PathBuf| {
                Correspondence::parse(&read_file(p)?).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
            };
            let (v, u) = (parse(v)?, parse(u)?);
            let w = v.compose(&u).map_err(|e| Failure::Input(e.to_string()))?;
            if cli.json {
                let rows: Vec<String> = w.to_text().lines().skip(1).map(str::to_string).collect();
                writeln!(ctx.out, "{}", json!({"target": w.target(), "source": w.source(), "rows": rows}))?;
            } else {
                write!(ctx.out, "{}", w.to_text())?;
            }
            Ok(())
        }
        Command::LatticeCheck => {
            let (name, t) = ctx.lattices(1, &[])?.remove(0);
            if cli.json {
                let covers: Vec<[usize; 2]> = t.covers().into_iter().map(|(a, b)| [a, b]).collect();
                let v = json!({"lattice": name, "size": t.size(), "covers": covers, "bottom": t.bottom(),
                    "top": t.top(), "distributive": t.is_distributive()});
                writeln!(ctx.out, "{v}")?;
            } else {
                write!(ctx.out, "{}", t.to_text())?;
                writeln!(ctx.out, "distributive {}", if t.is_distributive() { "yes" } else { "no" })?;
                write!(ctx.out, "{}", t.tables_text())?;
            }
            Ok(())
        }
        Command::FtDims => {
            let (name, t) = ctx.lattices(1, &[])?.remove(0);
            let dims = functor_ft(Arc::new(t), bound).dims();
            if cli.json {
                writeln!(ctx.out, "{}", json!({"lattice": name, "bound": bound, "dims": dims}))?;
            } else {
                writeln!(ctx.out, "{}", join(&dims))?;
            }
            Ok(())
        }
        Command::TensorDims => {
            let ls = ctx.lattices(2, &[])?;
            let (t, t2) = (Arc::new(ls[0].1.clone()), Arc::new(ls[1].1.clone()));
            let lhs = tensor(&functor_ft(t.clone(), bound), &functor_ft(t2.clone(), bound))
                .map_err(|e| Failure::Input(e.to_string()))?
                .dims();
            let rhs = functor_ft(Arc::new(t.product(&t2)), bound).dims();
            let bijective = (0..=bound).all(|n| {
                let m = tau_component(&t, &t2, n);
                m.basis_map().is_some() && crate::algfunctor::is_invertible(&m)
            });
            if cli.json {
                writeln!(ctx.out, "{}", json!({"tensor": lhs, "product": rhs, "tau_bijective": bijective}))?;
            } else {
                writeln!(ctx.out, "tensor {}", join(&lhs))?;
                writeln!(ctx.out, "product {}", join(&rhs))?;
                writeln!(ctx.out, "tau bijective {}", if bijective { "yes" } else { "no" })?;
            }
            if lhs == rhs && bijective {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Verify { id } => verify(ctx, id),
        Command::Reconstruct => reconstruct(ctx),
        Command::HomDims => {
            let fs = ctx.functors(&[])?;
            if fs.len() != 2 {
                return input("hom-dims needs exactly two --functor arguments");
            }
            let h = hom_solver(&fs[0], &fs[1], ctx.cfg.exec).map_err(|e| Failure::Input(e.to_string()))?;
            let (a, b) = (fs[0].describe(), fs[1].describe());
            if cli.json {
                writeln!(ctx.out, "{}", json!({"source": a, "target": b, "bound": bound, "dim": h.dim(), "exact": h.exact}))?;
            } else {
                let kind = if h.exact { "exact" } else { "upper bound at this truncation" };
                writeln!(ctx.out, "dim Hom({a}, {b}) = {} ({kind})", h.dim())?;
            }
            Ok(())
        }
    }
}

fn verify(ctx: &mut Ctx<'_>, id: &str) -> Outcome {
    let cli = ctx.cli;
    let (bound, cfg) = (cli.bound, ctx.cfg);
    let e_at = |i: usize, default: usize| cli.e.get(i).copied().unwrap_or(default);
    let reports = match id {
        "all" => {
            let mut failed = false;
            for (k, name) in CRITERIA.iter().enumerate() {
                let reports = criterion_reports(k + 1, bound, &cfg);
                let pass = ctx.report(&reports).is_ok();
                failed |= !pass;
                writeln!(ctx.out, "CRITERION {} {} {}", k + 1, if pass { "PASS" } else { "FAIL" }, name)?;
            }
            return if failed { Err(Failure::Verification) } else { Ok(()) };
        }
        "tau" => {
            let ls = ctx.lattices(2, &["chain1", "chain1"])?;
            let label = format!("{},{}", ls[0].0, ls[1].0);
            vec![verify_tau(&Arc::new(ls[0].1.clone()), &Arc::new(ls[1].1.clone()), bound, &cfg, &label)]
        }
        "representable-tensor" => vec![verify_representable_tensor(e_at(0, 1), e_at(1, 1), bound, &cfg)],
        "lev-tensor" => {
            let specs = if cli.module.is_empty() { vec!["regular:1".into(), "regular:1".into()] } else { cli.module.clone() };
            if specs.len() != 2 {
                return input("lev-tensor needs two --module arguments");
            }
            vec![verify_lev_tensor(&load_module(&specs[0])?, &load_module(&specs[1])?, bound, &cfg)]
        }
        "adjunction" => {
            let fs = ctx.functors(&["const", "ft:chain1", "rep:1"])?;
            if fs.len() != 3 {
                return input("adjunction needs three --functor arguments: M, M', M''");
            }
            vec![verify_adjunction_dims(&fs[0], &fs[1], &fs[2], &cfg)]
        }
        "internal-hom-representable" => {
            let fs = ctx.functors(&["ft:chain1"])?;
            fs.iter().map(|n| verify_internal_hom_representable(n, e_at(0, 1), &cfg)).collect()
        }
        "internal-hom-constant" => ctx.functors(&["ft:chain1"])?.iter().map(|n| verify_internal_hom_constant(n, &cfg)).collect(),
        "internal-hom-dual" => ctx.functors(&["ft:chain1"])?.iter().map(|m| verify_internal_hom_dual(m, &cfg)).collect(),
        "pairing-bijection" => {
            let pool = if cli.functor.is_empty() { small_functors(bound) } else { ctx.functors(&[])? };
            vec![verify_pairing_bijection(&pool, PAIRING_SAMPLES, &cfg)]
        }
        "composition-laws" => vec![verify_composition_laws(&cfg)],
        "functoriality" => ctx.functors(&["ft:chain1"])?.iter().map(|m| verify_functoriality(m, &cfg)).collect(),
        "exponential" => vec![check_exponential(&ctx.algebra()?.0)],
        "algebra-structure" => vec![verify_algebra_structure(&ctx.algebra()?.0, &cfg)],
        "product-union" => {
            let (a, _) = ctx.algebra()?;
            match reconstruct_lattice(&a, &cfg) {
                Ok(r) => vec![verify_product_union(&a, &r.g, &cfg)],
                Err(e) => {
                    writeln!(ctx.out, "FAIL reconstruction needed for the g basis: {e}")?;
                    return Err(Failure::Verification);
                }
            }
        }
        "reconstruction" => {
            let ls = ctx.lattices(1, &["diamond"])?;
            let (name, t) = &ls[0];
            vec![crate::algfunctor::verify_reconstruction(&Arc::new(t.clone()), name, bound, &cfg.with_samples(200))]
        }
        other => return input(format!("unknown theorem id `{other}`")),
    };
    ctx.report(&reports)
}

fn reconstruct(ctx: &mut Ctx<'_>) -> Outcome {
    let (a, source) = ctx.algebra()?;
    let cfg = ctx.cfg.with_samples(ctx.cfg.samples.min(200));
    if let Err(e) = a.validate(&cfg) {
        writeln!(ctx.out, "FAIL input is not an algebra functor: {e}")?;
        return Err(Failure::Verification);
    }
    let r = match reconstruct_lattice(&a, &cfg) {
        Ok(r) => r,
        Err(e) => {
            writeln!(ctx.out, "FAIL {e}")?;
            return Err(Failure::Verification);
        }
    };
    let matched = source.as_ref().map(|(name, t)| (name.clone(), match_reference(&r, t)));
    if ctx.cli.json {
        let covers: Vec<[usize; 2]> = r.lattice.covers().into_iter().map(|(x, y)| [x, y]).collect();
        let mut v = json!({"algebra": a.name, "bound": a.bound(), "size": r.lattice.size(), "covers": covers,
            "top": r.lattice.top(), "bottom": r.lattice.bottom(),
            "checked_cases": r.checked.total()});
        if let Some((name, m)) = &matched {
            v["reference"] = json!(name);
            v["relabeling"] = match m {
                Ok(p) => json!(p),
                Err(w) => json!({"error": w}),
            };
        }
        writeln!(ctx.out, "{v}")?;
    } else {
        writeln!(ctx.out, "# recovered from {} at bound {}", a.name, a.bound())?;
        write!(ctx.out, "{}", r.lattice.to_text())?;
        writeln!(ctx.out, "# bottom {} top {}", r.lattice.bottom(), r.lattice.top())?;
        writeln!(ctx.out, "# λ invertible, multiplicative and natural: {} cases", r.checked.total())?;
        match &matched {
            Some((name, Ok(p))) => writeln!(ctx.out, "# isomorphic to {name} via {}", join(p))?,
            Some((name, Err(w))) => writeln!(ctx.out, "# not matched with {name}: {w}")?,
            None => {}
        }
    }
    match matched {
        Some((_, Err(_))) => Err(Failure::Verification),
        _ => Ok(()),
    }
}
