//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the process exit code: 0 on success, 1 on a negative
//! verification, 2 on a usage or input error.

pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::blaschke::{self, DesignOptions};
use crate::families::{self, DiagVariant};
use crate::hankel::{self, DEFAULT_RANK_TOL};
use crate::io;
use crate::laurent::{LaurentPoly, Role};
use crate::linalg::{self, c, CMat};
use crate::realization;

/// Default numerical tolerance, overridden by `PUFIR_TOL` or `--tol`.
pub const DEFAULT_TOL: f64 = 1e-9;
pub const TOL_ENV: &str = "PUFIR_TOL";

#[derive(Debug, Parser)]
#[command(name = "pufir", version, about = "Para-unitary FIR analysis, synthesis and transformation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Causality, dimensions, McMillan degree and para-unitarity of a polynomial file.
    Check(CheckArgs),
    /// McMillan degree from the two Hankel ranks.
    Degree(DegreeArgs),
    /// Polynomial from an angle-parameter file.
    Synth(SynthArgs),
    /// Random member of given dimensions and degree.
    Sample(SampleArgs),
    /// Family constructions on polynomial files.
    Family(FamilyArgs),
    /// Minimal realization, Gramians and unitarity class of a causal polynomial.
    Realize(RealizeArgs),
    /// Derivative-free design over the angle chart.
    Optimize(OptimizeArgs),
    /// Reproduce the embedded worked examples.
    VerifyExamples(VerifyArgs),
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Membership tolerance [default: $PUFIR_TOL or 1e-9].
    #[arg(long)]
    tol: Option<f64>,
    /// Relative singular-value threshold for numerical rank.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
}

#[derive(Debug, Args)]
struct CheckArgs {
    file: PathBuf,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct DegreeArgs {
    file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Angle-parameter file.
    angles: PathBuf,
    /// Output polynomial file [default: stdout].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    d: usize,
    /// Number of anti-causal factors.
    #[arg(long, default_value_t = 0)]
    gamma: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the sampled angles to this file.
    #[arg(long)]
    angles_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[command(subcommand)]
    op: FamilyOp,
    /// Output polynomial file [default: stdout].
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    Diag,
    AntiDiag,
}

#[derive(Debug, Subcommand)]
enum FamilyOp {
    /// Reverse the coefficient order, keeping `q`.
    Reverse { input: PathBuf },
    /// j-fold block reorganization.
    Reblock {
        input: PathBuf,
        #[arg(long)]
        j: usize,
    },
    /// Substitute `z -> z^gamma` and shift by `a`.
    Dilate {
        input: PathBuf,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        gamma: usize,
    },
    /// Row stacking into rho interleaved phases.
    Stack {
        input: PathBuf,
        #[arg(long)]
        rho: usize,
    },
    /// Column widening into rho interleaved phases.
    Widen {
        input: PathBuf,
        #[arg(long)]
        rho: usize,
    },
    /// Block-diagonal or block-anti-diagonal composition.
    Compose {
        b: PathBuf,
        c: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Diag)]
        variant: Variant,
    },
    /// Row mixture `[sqrt(alpha) B; sqrt(1 - alpha) C]`.
    MixRows {
        b: PathBuf,
        c: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    /// Column mixture `[sqrt(alpha) B, sqrt(1 - alpha) C]`.
    MixCols {
        b: PathBuf,
        c: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    /// Product through the Hankel-Toeplitz identity.
    Product { b: PathBuf, c: PathBuf },
}

#[derive(Debug, Args)]
struct RealizeArgs {
    file: PathBuf,
    /// Normalization mode [default: the polynomial's role].
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Iso,
    Coiso,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Objective {
    /// Frobenius distance of `F(1)` from `[I; 0]` (or `[I, 0]`).
    IdentityAtOne,
    /// Negative squared Frobenius norm of the leading coefficient.
    LeadingEnergy,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    gamma: usize,
    #[arg(long, value_enum, default_value_t = Objective::IdentityAtOne)]
    objective: Objective,
    #[arg(long, default_value_t = 5000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the optimal polynomial to this file.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the optimal angles to this file.
    #[arg(long)]
    angles_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Negative control: perturb the first coefficient of one example.
    #[arg(long, value_enum)]
    perturb: Option<verify::ExampleId>,
    #[arg(long, default_value_t = 1e-3, requires = "perturb")]
    perturb_size: f64,
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Success,
    Negative,
}

type CmdResult = std::result::Result<Status, String>;

fn lib(e: crate::Error) -> String {
    e.to_string()
}

fn io_err(e: std::io::Error) -> String {
    e.to_string()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(Status::Success) => 0,
        Ok(Status::Negative) => 1,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Check(a) => cmd_check(&a, out),
        Command::Degree(a) => cmd_degree(&a, out),
        Command::Synth(a) => cmd_synth(&a, out),
        Command::Sample(a) => cmd_sample(&a, out),
        Command::Family(a) => cmd_family(&a, out),
        Command::Realize(a) => cmd_realize(&a, out),
        Command::Optimize(a) => cmd_optimize(&a, out),
        Command::VerifyExamples(a) => cmd_verify(&a, out),
    }
}

/// `--tol`, else `PUFIR_TOL`, else [`DEFAULT_TOL`].
fn resolve_tol(flag: Option<f64>) -> std::result::Result<f64, String> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("{TOL_ENV} is not a number: {s:?}"))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(format!("tolerance must be positive and finite, got {tol}"));
    }
    Ok(tol)
}

fn rank_tol(t: f64) -> std::result::Result<f64, String> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(format!("rank tolerance must be positive and finite, got {t}"))
    }
}

fn read_poly(path: &Path) -> std::result::Result<LaurentPoly, String> {
    io::read_poly(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit_poly(f: &LaurentPoly, output: Option<&Path>, out: &mut dyn Write) -> std::result::Result<(), String> {
    match output {
        Some(path) => io::write_poly(path, f).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(io::poly_to_json(f).map_err(lib)?.as_bytes()).map_err(io_err),
    }
}

fn emit_json(v: &Value, out: &mut dyn Write) -> std::result::Result<(), String> {
    writeln!(out, "{}", io::to_json_string(v)).map_err(io_err)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn num_list(xs: &[f64]) -> String {
    if xs.is_empty() {
        "(none)".into()
    } else {
        xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
    }
}

fn write_matrix(out: &mut dyn Write, name: &str, mat: &CMat) -> std::io::Result<()> {
    writeln!(out, "{name}: {}x{}", mat.nrows(), mat.ncols())?;
    let real = mat.iter().all(|z| z.im == 0.0);
    for i in 0..mat.nrows() {
        let row: Vec<String> = (0..mat.ncols())
            .map(|j| {
                let z = mat[(i, j)];
                if real {
                    num(z.re)
                } else {
                    format!("({}, {})", num(z.re), num(z.im))
                }
            })
            .collect();
        writeln!(out, "  {}", row.join(" "))?;
    }
    Ok(())
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Isometry => "isometry",
        Role::CoIsometry => "co-isometry",
    }
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> CmdResult {
    let tol = resolve_tol(a.tol.tol)?;
    let rtol = rank_tol(a.tol.rank_tol)?;
    let f = read_poly(&a.file)?;
    let causality = f.causality();
    let degree = hankel::mcmillan_degree_report(&f, rtol);
    let pair = hankel::hankel_pair(&f);
    let sv = pair.h.singular_values();
    let sv_hat = pair.h_hat.singular_values();
    let chk = hankel::is_paraunitary_hankel(&f, tol).map_err(lib)?;
    let defect = f.unitary_defect(f.default_samples());
    let member = chk.member && defect <= tol;
    let structure = if member {
        Some(hankel::defect_structure(&f, tol).map_err(lib)?)
    } else {
        None
    };
    let toeplitz = hankel::toeplitz_gram_residual(&f);

    if a.json {
        let structure_v = structure.as_ref().map(|s| {
            json!({
                "zero_block_ok": s.zero_block_ok,
                "coupling_ok": s.coupling_ok,
                "delta": io::matrix_value(&s.delta),
                "delta_eigenvalues": s.delta_eigenvalues,
                "delta_psd": s.delta_psd,
                "delta_contraction": s.delta_contraction,
                "delta_projection": s.delta_projection,
            })
        });
        let v = json!({
            "polynomial": io::poly_value(&f),
            "dimensions": [f.rows(), f.cols()],
            "causality": causality.label(),
            "causality_flags": causality.flags(),
            "mcmillan_degree": degree.degree,
            "rank_h": degree.rank_h,
            "rank_h_hat": degree.rank_h_hat,
            "rank_ambiguous": degree.ambiguous,
            "hankel_singular_values": sv,
            "hankel_singular_values_anticausal": sv_hat,
            "role": role_name(chk.role),
            "tolerance": tol,
            "hankel_member": chk.member,
            "hankel_residual": chk.residual_hankel,
            "coefficient_residual": chk.residual_coeff,
            "sampled_defect": defect,
            "member": member,
            "defect_structure": structure_v,
            "toeplitz_gram_residual": toeplitz,
        });
        emit_json(&v, out)?;
    } else {
        (|| -> std::io::Result<()> {
            writeln!(out, "dimensions: {}x{}", f.rows(), f.cols())?;
            writeln!(out, "q: {}", f.q())?;
            writeln!(out, "n: {}", f.len())?;
            writeln!(out, "causality: {} [{}]", causality.label(), causality.flags().join(", "))?;
            writeln!(
                out,
                "mcmillan_degree: {} (anti-causal rank {}, causal rank {}{})",
                degree.degree,
                degree.rank_h_hat,
                degree.rank_h,
                if degree.ambiguous { ", rank ambiguous" } else { "" }
            )?;
            writeln!(out, "hankel_singular_values: {}", num_list(&sv))?;
            writeln!(out, "hankel_singular_values_anticausal: {}", num_list(&sv_hat))?;
            writeln!(out, "role: {}", role_name(chk.role))?;
            writeln!(out, "tolerance: {}", num(tol))?;
            writeln!(out, "hankel_test: {} (residual {})", chk.member, num(chk.residual_hankel))?;
            writeln!(out, "coefficient_test: {} (residual {})", chk.member, num(chk.residual_coeff))?;
            writeln!(out, "sampled_defect: {}", num(defect))?;
            writeln!(out, "member: {member}")?;
            if let Some(s) = &structure {
                writeln!(
                    out,
                    "defect_structure: zero block {}, coupling {}, delta {}x{}, psd {}, contraction {}, projection {}",
                    s.zero_block_ok,
                    s.coupling_ok,
                    s.delta.nrows(),
                    s.delta.ncols(),
                    s.delta_psd,
                    s.delta_contraction,
                    s.delta_projection
                )?;
                writeln!(out, "delta_eigenvalues: {}", num_list(&s.delta_eigenvalues))?;
            }
            writeln!(out, "toeplitz_gram_residual: {}", num(toeplitz))
        })()
        .map_err(io_err)?;
    }
    Ok(if member { Status::Success } else { Status::Negative })
}

fn cmd_degree(a: &DegreeArgs, out: &mut dyn Write) -> CmdResult {
    let rtol = rank_tol(a.rank_tol)?;
    let f = read_poly(&a.file)?;
    let rep = hankel::mcmillan_degree_report(&f, rtol);
    if a.json {
        emit_json(&serde_json::to_value(rep).map_err(|e| e.to_string())?, out)?;
    } else {
        writeln!(
            out,
            "mcmillan_degree: {}\nrank_h: {}\nrank_h_hat: {}\nambiguous: {}",
            rep.degree, rep.rank_h, rep.rank_h_hat, rep.ambiguous
        )
        .map_err(io_err)?;
    }
    Ok(Status::Success)
}

fn cmd_synth(a: &SynthArgs, out: &mut dyn Write) -> CmdResult {
    let params = io::read_angles(&a.angles).map_err(|e| format!("{}: {e}", a.angles.display()))?;
    let prod = blaschke::decode_angles(&params).map_err(lib)?;
    emit_poly(&blaschke::synth(&prod), a.output.as_deref(), out)?;
    Ok(Status::Success)
}

fn cmd_sample(a: &SampleArgs, out: &mut dyn Write) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let side = Role::for_dims(a.p, a.m);
    let params = blaschke::random_angles(side, a.p, a.m, a.d, a.gamma, &mut rng).map_err(lib)?;
    let prod = blaschke::decode_angles(&params).map_err(lib)?;
    if let Some(path) = &a.angles_out {
        std::fs::write(path, io::angles_to_json(&params).map_err(lib)?).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    emit_poly(&blaschke::synth(&prod), a.output.as_deref(), out)?;
    Ok(Status::Success)
}

fn cmd_family(a: &FamilyArgs, out: &mut dyn Write) -> CmdResult {
    let g = match &a.op {
        FamilyOp::Reverse { input } => families::reverse_poly(&read_poly(input)?),
        FamilyOp::Reblock { input, j } => families::reblock(&read_poly(input)?, *j).map_err(lib)?,
        FamilyOp::Dilate { input, a, gamma } => families::dilate(&read_poly(input)?, *a, *gamma).map_err(lib)?,
        FamilyOp::Stack { input, rho } => families::rect_stack(&read_poly(input)?, *rho).map_err(lib)?,
        FamilyOp::Widen { input, rho } => families::rect_widen(&read_poly(input)?, *rho).map_err(lib)?,
        FamilyOp::Compose { b, c, variant } => {
            let variant = match variant {
                Variant::Diag => DiagVariant::Diag,
                Variant::AntiDiag => DiagVariant::AntiDiag,
            };
            families::compose_diag(&read_poly(b)?, &read_poly(c)?, variant).map_err(lib)?
        }
        FamilyOp::MixRows { b, c, alpha } => {
            families::compose_mix_rows(&read_poly(b)?, &read_poly(c)?, *alpha).map_err(lib)?
        }
        FamilyOp::MixCols { b, c, alpha } => {
            families::compose_mix_cols(&read_poly(b)?, &read_poly(c)?, *alpha).map_err(lib)?
        }
        FamilyOp::Product { b, c } => families::product_via_hankel(&read_poly(b)?, &read_poly(c)?).map_err(lib)?,
    };
    emit_poly(&g, a.output.as_deref(), out)?;
    Ok(Status::Success)
}

fn cmd_realize(a: &RealizeArgs, out: &mut dyn Write) -> CmdResult {
    let tol = resolve_tol(a.tol.tol)?;
    let rtol = rank_tol(a.tol.rank_tol)?;
    let f = read_poly(&a.file)?;
    let mode = match a.mode {
        Some(Mode::Iso) => Role::Isometry,
        Some(Mode::Coiso) => Role::CoIsometry,
        None => f.role(),
    };
    let minimal = realization::minimal_realization(&f, rtol).map_err(lib)?;
    let norm = realization::gramian_normalize(&minimal, mode, tol).map_err(lib)?;
    let r = &norm.realization;
    let g = &norm.gramians;
    let unitary = realization::check_unitary_realization(r, tol);
    let sv = hankel::hankel_causal(&f, 0).map_err(lib)?.singular_values();
    let ok = unitary.class.satisfies(mode);

    if a.json {
        let v = json!({
            "state_dim": r.state_dim(),
            "mode": role_name(mode),
            "rank_ambiguous": minimal.rank_ambiguous,
            "a": io::matrix_value(&r.a),
            "b": io::matrix_value(&r.b),
            "c": io::matrix_value(&r.c),
            "d": io::matrix_value(&r.d),
            "w_cont": io::matrix_value(&g.w_cont),
            "w_obs": io::matrix_value(&g.w_obs),
            "stein_residuals": [g.residual_cont, g.residual_obs],
            "class": unitary.class.label(),
            "residual_iso": unitary.residual_iso,
            "residual_coiso": unitary.residual_coiso,
            "complementary_contractive": norm.complementary_contractive,
            "hankel_singular_values": sv,
        });
        emit_json(&v, out)?;
    } else {
        (|| -> std::io::Result<()> {
            writeln!(out, "state_dim: {}", r.state_dim())?;
            writeln!(out, "mode: {}", role_name(mode))?;
            if minimal.rank_ambiguous {
                writeln!(out, "warning: numerical rank is ambiguous")?;
            }
            write_matrix(out, "A", &clean(&r.a))?;
            write_matrix(out, "B", &clean(&r.b))?;
            write_matrix(out, "C", &clean(&r.c))?;
            write_matrix(out, "D", &clean(&r.d))?;
            write_matrix(out, "W_cont", &clean(&g.w_cont))?;
            write_matrix(out, "W_obs", &clean(&g.w_obs))?;
            writeln!(out, "stein_residuals: {} {}", num(g.residual_cont), num(g.residual_obs))?;
            writeln!(out, "class: {}", unitary.class.label())?;
            writeln!(out, "residual_iso: {}", num(unitary.residual_iso))?;
            writeln!(out, "residual_coiso: {}", num(unitary.residual_coiso))?;
            writeln!(out, "complementary_contractive: {}", norm.complementary_contractive)?;
            writeln!(out, "hankel_singular_values: {}", num_list(&sv))
        })()
        .map_err(io_err)?;
    }
    Ok(if ok { Status::Success } else { Status::Negative })
}

/// Rounds entries below `1e-15` in magnitude to zero for display.
fn clean(mat: &CMat) -> CMat {
    mat.map(|z| {
        let re = if z.re.abs() < 1e-15 { 0.0 } else { z.re };
        let im = if z.im.abs() < 1e-15 { 0.0 } else { z.im };
        c(re, im)
    })
}

fn cmd_optimize(a: &OptimizeArgs, out: &mut dyn Write) -> CmdResult {
    let opts = DesignOptions {
        budget: a.budget,
        seed: a.seed,
        ..Default::default()
    };
    let target = basepoint(a.p, a.m);
    let objective = a.objective;
    let res = blaschke::design_optimize(
        |f| match objective {
            Objective::IdentityAtOne => match f.eval(c(1.0, 0.0)) {
                Ok(v) => linalg::frobenius(&(v - &target)),
                Err(_) => f64::INFINITY,
            },
            Objective::LeadingEnergy => -linalg::frobenius(&f.coeffs()[0]).powi(2),
        },
        a.p,
        a.m,
        a.d,
        a.gamma,
        &opts,
    )
    .map_err(lib)?;
    if let Some(path) = &a.angles_out {
        std::fs::write(path, io::angles_to_json(&res.params).map_err(lib)?)
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(path) = &a.output {
        io::write_poly(path, &res.poly).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let v = json!({
        "value": res.value,
        "evaluations": res.evaluations,
        "sampled_defect": res.poly.unitary_defect(res.poly.default_samples()),
        "angles": res.params.angles,
    });
    emit_json(&v, out)?;
    Ok(Status::Success)
}

/// `[I; 0]` for tall and `[I, 0]` for wide shapes.
fn basepoint(p: usize, m: usize) -> CMat {
    let mut t = linalg::zeros(p, m);
    for i in 0..p.min(m) {
        t[(i, i)] = c(1.0, 0.0);
    }
    t
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let mut ex = verify::Examples::embedded();
    if let Some(id) = a.perturb {
        ex = ex.perturbed(id, a.perturb_size);
    }
    let results = verify::run_checks(&ex);
    let mut failed = 0;
    for r in &results {
        if !r.pass {
            failed += 1;
        }
        writeln!(out, "{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail).map_err(io_err)?;
    }
    writeln!(out, "{} checks, {} failed", results.len(), failed).map_err(io_err)?;
    Ok(if failed == 0 { Status::Success } else { Status::Negative })
}
