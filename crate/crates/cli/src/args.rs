//! Command-line argument types and configuration resolution.
//!
//! Precedence for the system model: built-in defaults, then a `--config`
//! file, then explicit flags. Figure presets insert their base values between
//! the defaults and the config file.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ris_secrecy::{Setup, SystemConfig};

#[derive(Parser, Debug)]
#[command(
    name = "ris-secrecy",
    version,
    about = "Intercept probability of a dual-hop relayed link assisted by \
             reconfigurable surfaces, with cooperative jamming",
    long_about = None,
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the resolved configuration and derived model parameters as JSON.
    Describe {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Compute the intercept probability at one operating point.
    Point {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        compute: ComputeArgs,
    },
    /// Sweep one or two parameters and emit a CSV of estimates.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        compute: ComputeArgs,
        /// Sweep axis, e.g. `snr_db=0:5:35` (start:step:stop) or
        /// `nb=1,2,3,5` (explicit list). May be given twice; the first axis
        /// varies fastest. Axes: m_elems/M, n_elems/N, elems (M=N jointly),
        /// nb1, nb2, nb (both registers), snr_sr_db, snr_rd_db, snr_db
        /// (both hops), snr_re_db, snr_je_db (list may include `none`),
        /// setup (dual|first|second).
        #[arg(long = "axis", value_name = "NAME=VALUES", required = true, num_args = 1)]
        axes: Vec<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Emit the CSV behind one of the built-in figure presets.
    Figure {
        /// Preset name (see --list).
        name: Option<String>,
        /// List the available presets and exit.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        compute: ComputeArgs,
        /// Write the CSV here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the self-validation suite and print a JSON report.
    Validate {
        /// Master seed for the statistical checks.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// System-model flags shared by the computing subcommands.
#[derive(Args, Debug, Clone, Default)]
pub struct ConfigArgs {
    /// Key=value configuration file (`#` comments allowed).
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// First-hop surface element count.
    #[arg(long = "M", value_name = "COUNT")]
    pub m_elems: Option<u32>,
    /// Second-hop surface element count.
    #[arg(long = "N", value_name = "COUNT")]
    pub n_elems: Option<u32>,
    /// Phase register width in bits for both surfaces.
    #[arg(long, value_name = "BITS", conflicts_with_all = ["nb1", "nb2"])]
    pub nb: Option<u32>,
    /// Phase register width in bits for the first-hop surface.
    #[arg(long, value_name = "BITS")]
    pub nb1: Option<u32>,
    /// Phase register width in bits for the second-hop surface.
    #[arg(long, value_name = "BITS")]
    pub nb2: Option<u32>,
    /// Average first-hop SNR in dB.
    #[arg(long, value_name = "DB")]
    pub snr_sr_db: Option<f64>,
    /// Average second-hop SNR in dB.
    #[arg(long, value_name = "DB")]
    pub snr_rd_db: Option<f64>,
    /// Average eavesdropper SNR in dB.
    #[arg(long, value_name = "DB")]
    pub snr_re_db: Option<f64>,
    /// Average jammer-to-eavesdropper SNR in dB, or `none` to disable
    /// jamming.
    #[arg(long, value_name = "DB|none")]
    pub snr_je_db: Option<String>,
    /// Surface placement: dual, first, or second.
    #[arg(long, value_name = "SETUP")]
    pub setup: Option<String>,
}

/// Estimation controls shared by the computing subcommands.
#[derive(Args, Debug, Clone)]
pub struct ComputeArgs {
    /// Monte Carlo sample count per point.
    #[arg(long, default_value_t = 300_000)]
    pub samples: u64,
    /// Master random seed (per-point seeds derive from it).
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated routes to compute: mc, quad, asym, or `all`.
    /// Defaults to `all` (figure presets pick their own mix).
    #[arg(long, value_name = "LIST")]
    pub methods: Option<String>,
}

/// Parse a jammer SNR flag value: a dB number or `none`/`off`.
pub fn parse_jammer_db(raw: &str) -> Result<Option<f64>> {
    let t = raw.trim();
    if t.eq_ignore_ascii_case("none") || t.eq_ignore_ascii_case("off") {
        return Ok(None);
    }
    let v: f64 = t
        .parse()
        .with_context(|| format!("invalid jammer SNR '{raw}': expected a dB value or 'none'"))?;
    Ok(Some(v))
}

impl ConfigArgs {
    /// Resolve to a validated system configuration, starting from `base`.
    pub fn resolve_from(&self, mut cfg: SystemConfig) -> Result<SystemConfig> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            crate::config_file::apply(&mut cfg, &text)
                .with_context(|| format!("in config file {}", path.display()))?;
        }
        if let Some(m) = self.m_elems {
            cfg.m_elems = m;
        }
        if let Some(n) = self.n_elems {
            cfg.n_elems = n;
        }
        if let Some(nb) = self.nb {
            cfg.nb1 = nb;
            cfg.nb2 = nb;
        }
        if let Some(nb1) = self.nb1 {
            cfg.nb1 = nb1;
        }
        if let Some(nb2) = self.nb2 {
            cfg.nb2 = nb2;
        }
        if let Some(v) = self.snr_sr_db {
            cfg.snr_sr_db = v;
        }
        if let Some(v) = self.snr_rd_db {
            cfg.snr_rd_db = v;
        }
        if let Some(v) = self.snr_re_db {
            cfg.snr_re_db = v;
        }
        if let Some(raw) = &self.snr_je_db {
            cfg.snr_je_db = parse_jammer_db(raw)?;
        }
        if let Some(raw) = &self.setup {
            cfg.setup = raw
                .parse::<Setup>()
                .map_err(|e| anyhow::anyhow!("{e}"))?;
        }
        cfg.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(cfg)
    }

    /// Resolve starting from the built-in defaults.
    pub fn resolve(&self) -> Result<SystemConfig> {
        self.resolve_from(SystemConfig::default())
    }
}

/// Which computation routes a command should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Methods {
    pub mc: bool,
    pub quad: bool,
    pub asym: bool,
}

impl Methods {
    pub const ALL: Methods = Methods {
        mc: true,
        quad: true,
        asym: true,
    };

    pub fn parse(raw: &str) -> Result<Methods> {
        let mut m = Methods {
            mc: false,
            quad: false,
            asym: false,
        };
        for part in raw.split(',') {
            match part.trim().to_ascii_lowercase().as_str() {
                "all" => m = Methods::ALL,
                "mc" | "montecarlo" | "monte-carlo" => m.mc = true,
                "quad" | "quadrature" => m.quad = true,
                "asym" | "asymptotic" => m.asym = true,
                "" => {}
                other => bail!(
                    "unknown method '{other}' (expected mc, quad, asym, or all)"
                ),
            }
        }
        if !(m.mc || m.quad || m.asym) {
            bail!("no methods selected");
        }
        Ok(m)
    }
}
