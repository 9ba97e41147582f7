use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand as ClapSub};
use gspin6::harness::{self, ConfigError, HarnessError, RunConfig, RunOutput, Subcommand};

/// Directory for relative output paths and fixture files.
const OUT_DIR_VAR: &str = "GSPIN6_OUT_DIR";

#[derive(Parser)]
#[command(name = "gspin6", version, about = "Exact and numerical checks for GU(2,2), GSpin6 and their L-factors")]
struct Cli {
    /// Flat `key = value` file applied before the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Work over Q(sqrt -d).
    #[arg(long, global = true)]
    d: Option<String>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(ClapSub)]
enum Cmd {
    /// Reciprocal Euler polynomial of one representation.
    Euler {
        #[arg(long)]
        rep: String,
        #[arg(long, allow_hyphen_values = true)]
        params: String,
    },
    /// Exterior square and standard factorization identities on seeded triples.
    VerifyEuler,
    /// V6 and group-action invariants, the r_* identities, and optionally P_T modularity.
    VerifyGroup {
        #[arg(long)]
        modularity: bool,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Quaternion ring, lattice stability and f_T identities.
    VerifyAit {
        #[arg(long = "T", allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// p-adic character sums, measures, alpha_chi and the f m lemma on the default grid.
    VerifyPadic {
        /// Comma-separated primes.
        #[arg(long)]
        p: Option<String>,
        /// inert, split or both.
        #[arg(long)]
        splitting: Option<String>,
        /// Lower bound a,b for the precision window.
        #[arg(long)]
        window: Option<String>,
        /// Only `default` is available.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Integral solutions of q(v) = -2 det T in a height box.
    Reps {
        #[arg(long = "T", allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Truncated P_T(Z) with its tail estimate.
    EvalPt {
        #[arg(long = "T", allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long = "Z", allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Archimedean identities: norm, fourier, gamma or assembly.
    VerifyArch {
        #[arg(long)]
        which: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Write a named JSON fixture.
    EmitFixture { name: String },
    /// Run the subcommand named in the config file.
    Run,
}

impl Cmd {
    fn subcommand(&self) -> Option<Subcommand> {
        Some(match self {
            Cmd::Euler { .. } => Subcommand::Euler,
            Cmd::VerifyEuler => Subcommand::VerifyEuler,
            Cmd::VerifyGroup { .. } => Subcommand::VerifyGroup,
            Cmd::VerifyAit { .. } => Subcommand::VerifyAit,
            Cmd::VerifyPadic { .. } => Subcommand::VerifyPadic,
            Cmd::Reps { .. } => Subcommand::Reps,
            Cmd::EvalPt { .. } => Subcommand::EvalPt,
            Cmd::VerifyArch { .. } => Subcommand::VerifyArch,
            Cmd::EmitFixture { .. } => Subcommand::EmitFixture,
            Cmd::Run => return None,
        })
    }

    /// Flags as config keys.
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut put = |k: &'static str, v: &Option<String>| {
            if let Some(v) = v {
                out.push((k, v.clone()));
            }
        };
        match self {
            Cmd::Euler { rep, params } => {
                put("rep", &Some(rep.clone()));
                put("params", &Some(params.clone()));
            }
            Cmd::VerifyGroup { modularity, bound } => {
                if *modularity {
                    put("modularity", &Some("true".into()));
                }
                put("bound", bound);
            }
            Cmd::VerifyAit { t } => put("T", t),
            Cmd::VerifyPadic { p, splitting, window, .. } => {
                put("primes", p);
                put("splitting", splitting);
                put("window", window);
            }
            Cmd::Reps { t, bound } => {
                put("T", t);
                put("bound", bound);
            }
            Cmd::EvalPt { t, r, z, bound } => {
                put("T", t);
                put("r", r);
                put("Z", z);
                put("bound", bound);
            }
            Cmd::VerifyArch { which, r, grid } => {
                put("which", which);
                put("r", r);
                put("grid", grid);
            }
            Cmd::EmitFixture { name } => put("fixture", &Some(name.clone())),
            Cmd::VerifyEuler | Cmd::Run => {}
        }
        out
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, HarnessError> {
    if let Cmd::VerifyPadic { grid: Some(g), .. } = &cli.cmd {
        if g != "default" {
            return Err(HarnessError::Input(format!("unknown grid {g:?}; only \"default\" exists")));
        }
    }
    let text = match &cli.config {
        Some(p) => Some(
            std::fs::read_to_string(p).map_err(|e| HarnessError::Input(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    let mut cfg = match (cli.cmd.subcommand(), &text) {
        (None, Some(t)) => RunConfig::parse(t)?,
        (None, None) => return Err(HarnessError::Input("`run` needs --config".into())),
        (Some(sub), t) => {
            let mut cfg = RunConfig::new(sub);
            if let Some(t) = t {
                cfg.apply_text(t)?;
            }
            cfg.subcommand = sub;
            cfg
        }
    };
    let global = [("seed", &cli.seed), ("d", &cli.d), ("output", &cli.output)];
    let flags = global
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
        .chain(cli.cmd.pairs());
    for (key, value) in flags {
        cfg.set(key, &value)
            .map_err(|msg| ConfigError::Value { key: format!("--{key}"), msg })?;
    }
    Ok(cfg)
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::Input(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))
}

fn main_inner(cli: &Cli) -> Result<bool, HarnessError> {
    let cfg = build_config(cli)?;
    let out_dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    let result = harness::run(&cfg)?;
    let text = result.to_text();
    let path = match (cfg.output_path(out_dir.as_deref()), cfg.subcommand) {
        (Some(p), _) => Some(p),
        (None, Subcommand::EmitFixture) => {
            let name = format!("{}.json", cfg.fixture.as_deref().unwrap_or("fixture"));
            Some(out_dir.map_or_else(|| PathBuf::from(&name), |d| d.join(&name)))
        }
        (None, _) => None,
    };
    match &path {
        Some(p) => {
            write(p, &text)?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    if let RunOutput::Report(rep) = &result {
        let s = rep.summary();
        eprintln!("{}: {} checks, {} passed, {} failed", cfg.subcommand, s.total, s.passed, s.failed);
        for f in rep.failures() {
            eprintln!("  FAILED {} ({})", f.name, f.anchor);
        }
    }
    Ok(result.success())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
