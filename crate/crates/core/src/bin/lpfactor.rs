use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use lpfactor::{
    factor_scalar, factor_seq, gen_instance, run_sweep, solve_lp, verify_certificate, Error, Exponent,
    FactorizationCertificate, Instance, InstanceKind, InstanceSpec, ScalarBox, Solver, Strategy, SweepConfig,
    SweepKind, DEFAULT_PRODUCT_TOLERANCE,
};

const EXIT_FEASIBILITY: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "lpfactor", version, about = "Factor targets near a product into an exact product of nearby factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lp,
    Seq,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the scalar problem z = uv with |u - x| < r, |v - y| < R.
    Lemma1 {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long)]
        r: f64,
        #[arg(long = "R")]
        big_r: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        #[arg(long)]
        json: bool,
    },
    /// Factor an L_p instance and print the certificate.
    Factor {
        #[arg(long)]
        instance: PathBuf,
        /// Overrides the exponent stored in the instance.
        #[arg(long)]
        p: Option<Exponent>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value = "auto")]
        solver: Solver,
        /// Print the quantization parameters to stderr.
        #[arg(long)]
        emit_params: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Factor a sequence instance and print the certificate.
    FactorSeq {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check a certificate against its instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PRODUCT_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Generate a feasible random instance.
    Gen {
        #[arg(long, value_enum, default_value = "lp")]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[arg(long, default_value = "2")]
        p: Exponent,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 0.5)]
        defect_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        infinite_atoms: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Generate, solve and verify many instances.
    Sweep {
        #[arg(long, value_enum, default_value = "lp")]
        kind: Kind,
        #[arg(long, default_value = "2")]
        p: Exponent,
        #[arg(long, default_value = "general")]
        solver: Solver,
        #[arg(long, default_value = "finite")]
        strategy: Strategy,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 0.99)]
        max_fraction: f64,
        /// Rescale f and g to norms in [LO, HI].
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        norm_range: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_PRODUCT_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Lemma1 { x, y, r, big_r, z, json } => {
            let pair = factor_scalar(&ScalarBox::new(x, y, r, big_r)?, z)?;
            if json {
                println!("{}", pretty(&pair));
            } else {
                println!("u = {}\nv = {}\ncase = {}", pair.u, pair.v, pair.case);
            }
        }
        Command::Factor { instance, p, eps, solver, emit_params, output } => {
            let Instance::Lp(inst) = read_instance(&instance)? else {
                bail!("{} is a sequence instance; use factor-seq", instance.display());
            };
            let p = p.or(inst.p).ok_or(Error::MissingExponent)?;
            let eps = eps.or(inst.eps).ok_or_else(|| anyhow!("no --eps given and none stored in the instance"))?;
            let solution = solve_lp(&inst, p, eps, solver)?;
            if emit_params {
                match &solution.params {
                    Some(params) => eprintln!("{}", pretty(params)),
                    None => eprintln!("null"),
                }
            }
            emit(&pretty(&solution.certificate), output.as_deref())?;
        }
        Command::FactorSeq { instance, eps, strategy, output } => {
            let Instance::Seq(inst) = read_instance(&instance)? else {
                bail!("{} is not a sequence instance; use factor", instance.display());
            };
            let eps = eps.or(inst.eps).ok_or_else(|| anyhow!("no --eps given and none stored in the instance"))?;
            let out = factor_seq(&inst.x, &inst.y, &inst.z, eps, strategy)?;
            emit(&pretty(&out.certificate), output.as_deref())?;
        }
        Command::Verify { instance, certificate, tol, json } => {
            let inst = read_instance(&instance)?;
            let text = fs::read_to_string(&certificate).with_context(|| format!("reading {}", certificate.display()))?;
            let cert: FactorizationCertificate =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", certificate.display()))?;
            let report = verify_certificate(&inst, &cert, tol)?;
            if json {
                println!("{}", pretty(&report));
            } else {
                println!(
                    "{}: product error {:e}, ||u - f|| = {:e} (radius {}), ||v - g|| = {:e} (radius {})",
                    if report.passed() { "PASS" } else { "FAIL" },
                    report.product_max_rel_error,
                    report.norm_u_dist,
                    report.radius_u,
                    report.norm_v_dist,
                    report.radius_v,
                );
            }
            if !report.passed() {
                return Ok(EXIT_VERIFY);
            }
        }
        Command::Gen { kind, size, p, eps, defect_fraction, seed, infinite_atoms, output } => {
            let mut spec = match kind {
                Kind::Lp => InstanceSpec::lp(size, p, eps, defect_fraction, seed),
                Kind::Seq => InstanceSpec::seq(size, eps, defect_fraction, seed),
            };
            spec.infinite_atoms = infinite_atoms && spec.kind == InstanceKind::Lp;
            emit(&gen_instance(&spec)?.to_json(), output.as_deref())?;
        }
        Command::Sweep { kind, p, solver, strategy, count, seed, eps, max_fraction, norm_range, tol, json } => {
            let mut config = match kind {
                Kind::Lp => SweepConfig { kind: SweepKind::Lp { p, solver }, ..SweepConfig::lp(p, count, seed) },
                Kind::Seq => SweepConfig::seq(strategy, count, seed),
            };
            config.eps = eps;
            config.max_fraction = max_fraction;
            config.tol = tol;
            config.norm_range = norm_range.map(|r| (r[0], r[1]));
            let report = run_sweep(&config);
            if json {
                println!("{}", pretty(&report));
            } else {
                println!("{}/{} passed", report.passed, report.total);
                for f in &report.failures {
                    println!("  #{} (seed {}): {}", f.index, f.seed, f.reason);
                }
            }
            if !report.all_passed() {
                return Ok(EXIT_VERIFY);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let feasibility = matches!(err.downcast_ref::<Error>(), Some(Error::Feasibility { .. }));
            ExitCode::from(if feasibility { EXIT_FEASIBILITY } else { 1 })
        }
    }
}
