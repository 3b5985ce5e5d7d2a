use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use idep_core::oracle::{domain_advisor, solve_grid_spectrum};
use idep_core::potential::{default_registry, find_molecule, load_molecule_registry, MoleculeParams};
use idep_core::report::{
    format_value, run_scan, run_validation, FixedParams, ScanKind, ScanRequest, Sweep, ValidationRequest,
};
use idep_core::spectrum::{solve_quantization, WavefunctionSpec, DEFAULT_QUADRATURE_ORDER};
use idep_core::{derive_coefficients, evaluate_potential, momentum_eigenvalue, BetaVariant, EigenvalueVariant, Error, PotentialConfig, UnitSystem};

#[derive(Parser, Debug)]
#[command(name = "idep", version, about = "Quantized momenta of the improved deformed exponential-type potential")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Potential range parameter (1/ns).
    #[arg(long, global = true, default_value_t = 0.5, allow_hyphen_values = true)]
    alpha: f64,
    /// Eigenvalue reading: as-printed-eq22, beta-times-a, quantization-root.
    #[arg(long, global = true, default_value = "quantization-root")]
    variant: EigenvalueVariant,
    /// beta prefactor: dimension-corrected or as-printed.
    #[arg(long, global = true, default_value = "dimension-corrected")]
    beta: BetaVariant,
    /// Molecule registry file (`name,De,te,mu,t0,q` per line).
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    /// TOML file with a `[constants]` table overriding hbar and the amu energy.
    #[arg(long, global = true)]
    constants: Option<PathBuf>,
    /// Output directory for scan and validation files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate V(t) in eV.
    Potential {
        #[arg(long, short)]
        molecule: String,
        /// Times in ns.
        #[arg(long, short, num_args = 1.., required = true, allow_negative_numbers = true)]
        t: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
    },
    /// Momentum eigenvalues cP_n in eV.
    Spectrum {
        #[arg(long, short)]
        molecule: String,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        /// Print every variant instead of the selected one.
        #[arg(long)]
        all_variants: bool,
        /// Also solve the finite-difference grid.
        #[arg(long)]
        grid: bool,
    },
    /// Normalised eigenfunction on s in (0, 1); needs q > 0.
    Wavefunction {
        #[arg(long, short)]
        molecule: String,
        #[arg(long, short, default_value_t = 0)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Parameter sweep written as CSV and SVG.
    Scan {
        #[arg(long)]
        kind: ScanKind,
        /// Comma-separated names; defaults to the whole registry.
        #[arg(long, value_delimiter = ',')]
        molecules: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, allow_hyphen_values = true)]
        stop: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        levels: Vec<usize>,
        /// Comma-separated variants, or `all`.
        #[arg(long, value_delimiter = ',')]
        variants: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        /// File stem inside --out; defaults to the scan kind.
        #[arg(long)]
        stem: Option<String>,
    },
    /// Closed-form values against the grid, with a discrepancy ledger.
    Validate {
        #[arg(long, value_delimiter = ',')]
        molecules: Vec<String>,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long)]
        num_points: Option<usize>,
        #[arg(long, default_value = "validation")]
        stem: String,
    },
    /// List the registry.
    Molecules,
}

struct Context {
    registry: Vec<MoleculeParams>,
    units: UnitSystem,
}

impl Context {
    fn load(g: &Global) -> Result<Self, Error> {
        let registry = match &g.registry {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| Error::Io {
                    path: p.clone(),
                    source,
                })?;
                load_molecule_registry(&text)?
            }
            None => default_registry(),
        };
        let units = match &g.constants {
            Some(p) => UnitSystem::from_toml_file(p)?,
            None => UnitSystem::default(),
        };
        Ok(Self { registry, units })
    }

    fn config(&self, g: &Global, name: &str, q: Option<f64>) -> Result<PotentialConfig, Error> {
        let mut m = find_molecule(&self.registry, name)?.clone();
        if let Some(q) = q {
            m.q = q;
        }
        PotentialConfig::new(m, g.alpha, g.beta)
    }

    fn names(&self, given: Vec<String>) -> Vec<String> {
        if given.is_empty() {
            self.registry.iter().map(|m| m.name.clone()).collect()
        } else {
            given
        }
    }
}

fn parse_variants(list: &[String], default: EigenvalueVariant) -> Result<Vec<EigenvalueVariant>, Error> {
    if list.is_empty() {
        return Ok(vec![default]);
    }
    if list.iter().any(|v| v == "all") {
        return Ok(EigenvalueVariant::ALL.to_vec());
    }
    list.iter().map(|v| v.parse()).collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    let g = &cli.global;
    let ctx = Context::load(g)?;
    match cli.command {
        Command::Potential { molecule, t, q } => {
            let c = ctx.config(g, &molecule, q)?;
            println!("t_ns,V_eV");
            for t in t {
                println!("{},{}", format_value(t), format_value(evaluate_potential(&c, t)?));
            }
        }
        Command::Spectrum {
            molecule,
            n_max,
            q,
            all_variants,
            grid,
        } => {
            let c = ctx.config(g, &molecule, q)?;
            let d = derive_coefficients(&c, &ctx.units)?;
            let variants = if all_variants { EigenvalueVariant::ALL.to_vec() } else { vec![g.variant] };
            let oracle = if grid {
                let spec = domain_advisor(&c, &ctx.units)?;
                Some(solve_grid_spectrum(&c, &ctx.units, spec, n_max + 1)?)
            } else {
                None
            };
            print!("n");
            for v in &variants {
                print!(",{v}");
            }
            println!("{}", if oracle.is_some() { ",grid" } else { "" });
            for n in 0..=n_max {
                print!("{n}");
                for &v in &variants {
                    match momentum_eigenvalue(&d, n, v)? {
                        Ok(cp) => print!(",{}", format_value(cp)),
                        Err(_) => print!(",excluded"),
                    }
                }
                match &oracle {
                    Some(sol) => println!(",{}", format_value(sol.eigenvalues[n])),
                    None => println!(),
                }
            }
        }
        Command::Wavefunction { molecule, n, q, points } => {
            let c = ctx.config(g, &molecule, q)?;
            let d = derive_coefficients(&c, &ctx.units)?;
            if d.domain != idep_core::SolutionDomain::UnitInterval {
                return Err(Error::Precondition(format!(
                    "{molecule} has q = {} < 0: s lies outside (0, 1), pass --q with a positive value",
                    c.molecule.q
                )));
            }
            let level = solve_quantization(&d, n)?
                .map_err(|why| Error::Precondition(format!("level {n} excluded: {why}")))?;
            let spec = WavefunctionSpec::for_level(&level, DEFAULT_QUADRATURE_ORDER)?;
            if points < 2 {
                return Err(Error::Precondition("points must be at least 2".into()));
            }
            println!("s,psi");
            for i in 0..points {
                let s = (i as f64 + 0.5) / points as f64;
                println!("{},{}", format_value(s), format_value(idep_core::spectrum::wavefunction(&spec, s)?));
            }
        }
        Command::Scan {
            kind,
            molecules,
            start,
            stop,
            steps,
            levels,
            variants,
            q,
            stem,
        } => {
            let request = ScanRequest {
                kind,
                molecules: ctx.names(molecules),
                sweep: Sweep::new(start, stop, steps)?,
                fixed: FixedParams {
                    alpha: g.alpha,
                    q,
                    levels,
                    beta_variant: g.beta,
                },
                variants: parse_variants(&variants, g.variant)?,
                output: g.out.join(stem.unwrap_or_else(|| kind.label().to_string())),
            };
            let out = run_scan(&request, &ctx.registry, &ctx.units)?;
            println!("{}", out.csv_path.display());
            println!("{}", out.svg_path.display());
        }
        Command::Validate {
            molecules,
            n_max,
            num_points,
            stem,
        } => {
            let request = ValidationRequest {
                molecules: ctx.names(molecules),
                alpha: g.alpha,
                levels: (0..=n_max).collect(),
                beta_variant: g.beta,
                num_points,
            };
            let report = run_validation(&request, &ctx.registry, &ctx.units)?;
            let (txt, csv) = report.write(&g.out.join(stem))?;
            print!("{}", report.to_text());
            println!("\n{}\n{}", txt.display(), csv.display());
        }
        Command::Molecules => {
            println!("name,De_eV,te_ns,mu_amu,t0_ns,q");
            for m in &ctx.registry {
                println!("{},{},{},{},{},{}", m.name, m.de, m.te, m.mu, m.t0, m.q);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
