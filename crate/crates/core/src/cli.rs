//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{parse_config, SimConfig};
use crate::dynamics::DriveConfig;
use crate::emission::{coherent_fraction, spectrum_for_emitter, SidebandMethod};
use crate::error::{Error, Result};
use crate::grid::{geometric_grid, interpolate_linear};
use crate::hom::{dip_depth_sweep_with_bath, hom_for_emitter};
use crate::model::{Emitter, Treatment};
use crate::output::{format_summary, sibling_path, write_csv, write_summary, Table};
use crate::phonon::{sideband_power_fraction, PhononBath, PhononEnvironment};

pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "polaron", version, about = "Phonon-dressed emission of a driven quantum dot")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace phonon correlations by their long-time values.
    #[arg(long)]
    markovian: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sideband {
    Simplified,
    Exact,
}

#[derive(Debug, Args)]
struct SaturationRange {
    #[arg(long)]
    s_min: Option<f64>,
    #[arg(long)]
    s_max: Option<f64>,
    #[arg(long)]
    s_points: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Incoherent emission spectrum.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Saturation parameter √2·Ω/γ, overriding omega_psinv.
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, value_enum, default_value = "simplified")]
        sideband: Sideband,
    },
    /// Coherent scattering fraction against drive strength, per temperature.
    CoherentFraction {
        #[command(flatten)]
        common: Common,
        /// Temperatures in K.
        #[arg(long, value_delimiter = ',', default_value = "0,4,15")]
        temps: Vec<f64>,
        #[command(flatten)]
        range: SaturationRange,
    },
    /// Raw and detector-convolved HOM coincidences.
    Hom {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s: Option<f64>,
    },
    /// HOM dip depth against saturation.
    SweepDip {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: SaturationRange,
    },
    /// Renormalization factor and polaron rates.
    PhononInfo {
        #[command(flatten)]
        common: Common,
    },
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::ConfigKey { .. } => EXIT_USAGE,
                _ => EXIT_NUMERIC,
            }
        }
    }
}

fn load(common: &Common) -> Result<SimConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => SimConfig::default(),
    };
    if common.markovian {
        cfg.treatment = Treatment::Markovian;
    }
    cfg.output_path = common.out.clone();
    Ok(cfg)
}

fn out_path(cfg: &SimConfig, default: &str) -> PathBuf {
    cfg.output_path.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn echo_config(cfg: &SimConfig, csv: &Path) -> Result<()> {
    fs::write(sibling_path(csv, ".config.txt"), cfg.to_config_text())?;
    Ok(())
}

fn apply_saturation(cfg: &mut SimConfig, s: Option<f64>) -> Result<()> {
    if let Some(s) = s {
        cfg.drive = DriveConfig::from_saturation(s, cfg.drive.gamma).map_err(|e| Error::Config(format!("--s: {e}")))?;
    }
    Ok(())
}

fn saturation_grid(range: &SaturationRange, defaults: (f64, f64, usize)) -> Result<Vec<f64>> {
    let lo = range.s_min.unwrap_or(defaults.0);
    let hi = range.s_max.unwrap_or(defaults.1);
    let n = range.s_points.unwrap_or(defaults.2);
    if !(lo > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) || n == 0 {
        return Err(Error::Config(format!(
            "saturation range needs 0 < s_min ≤ s_max and s_points ≥ 1, got {lo}, {hi}, {n}"
        )));
    }
    if n == 1 || hi == lo {
        return Ok(vec![lo]);
    }
    geometric_grid(lo, hi, n).map_err(|e| Error::Config(e.to_string()))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Spectrum { common, s, sideband } => {
            let mut cfg = load(&common)?;
            apply_saturation(&mut cfg, s)?;
            let method = match sideband {
                Sideband::Simplified => SidebandMethod::Simplified,
                Sideband::Exact => SidebandMethod::ExactProduct,
            };
            let bath = PhononBath::new(cfg.phonon, cfg.grids.phonon)?;
            let emitter = Emitter::new(&bath, cfg.drive)?;
            let spectrum = spectrum_for_emitter(&emitter, &cfg.grids, cfg.treatment, method)?;
            let fraction = spectrum.sideband_power_fraction();
            let norm = spectrum.normalized();
            let path = out_path(&cfg, "spectrum.csv");
            let table = Table::from_columns(
                &["delta_omega_psinv", "S_total", "S_zpl", "S_sideband"],
                &[&norm.delta_omega, &norm.total, &norm.zpl, &norm.sideband],
            )?;
            write_csv(&path, &table)?;
            let summary = [
                ("coherent_weight", spectrum.coherent_weight.to_string()),
                ("coherent_weight_normalized", norm.coherent_weight.to_string()),
                ("sideband_fraction", fraction.to_string()),
                ("one_minus_B2", (1.0 - bath.b() * bath.b()).to_string()),
                ("g0_zero", spectrum.g0_zero.to_string()),
            ];
            write_summary(&sibling_path(&path, ".summary.txt"), &summary)?;
            echo_config(&cfg, &path)?;
            print!("{}", format_summary(&summary));
        }
        Command::CoherentFraction { common, temps, range } => {
            let cfg = load(&common)?;
            let s_values = saturation_grid(&range, (0.01, 10.0, 40))?;
            if temps.is_empty() || temps.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
                return Err(Error::Config("--temps must list non-negative temperatures".into()));
            }
            let base = out_path(&cfg, "coherent_fraction.csv");
            for &t in &temps {
                let env = PhononEnvironment {
                    temperature: t,
                    ..cfg.phonon
                };
                let bath = PhononBath::new(env, cfg.grids.phonon)?;
                let mut table = Table::new(&["omega_psinv", "s", "fraction"]);
                for &s in &s_values {
                    let drive = DriveConfig::from_saturation(s, cfg.drive.gamma)?;
                    let emitter = Emitter::new(&bath, drive)?;
                    let f = coherent_fraction(&emitter.rho_ss, bath.correlations(), cfg.treatment)?;
                    table.push(vec![drive.omega, s, f])?;
                }
                let path = sibling_path(&base, &format!("_T{t}K.csv"));
                write_csv(&path, &table)?;
                let mut echo = cfg.clone();
                echo.phonon = env;
                echo_config(&echo, &path)?;
                println!("{}", path.display());
            }
        }
        Command::Hom { common, s } => {
            let mut cfg = load(&common)?;
            apply_saturation(&mut cfg, s)?;
            let bath = PhononBath::new(cfg.phonon, cfg.grids.phonon)?;
            let emitter = Emitter::new(&bath, cfg.drive)?;
            let hom = hom_for_emitter(&emitter, &cfg.detector, &cfg.grids, cfg.treatment)?;
            let conv_tau = &hom.convolved.tau;
            let conv = hom.convolved.real();
            let convolved_on_raw: Vec<f64> = hom
                .raw
                .tau
                .iter()
                .map(|&t| {
                    interpolate_linear(conv_tau, &conv, t.min(*conv_tau.last().unwrap_or(&0.0))).unwrap_or(f64::NAN)
                })
                .collect();
            let path = out_path(&cfg, "hom.csv");
            let table = Table::from_columns(
                &["tau_ps", "g2_raw", "g2_convolved"],
                &[&hom.raw.tau, &hom.raw.real(), &convolved_on_raw],
            )?;
            write_csv(&path, &table)?;
            let summary = [
                ("s", cfg.drive.saturation().to_string()),
                ("dip_depth", hom.dip_depth.to_string()),
                ("g2_convolved_zero", (1.0 - hom.dip_depth).to_string()),
                ("asymptote_before_rescale", hom.asymptote.to_string()),
            ];
            write_summary(&sibling_path(&path, ".summary.txt"), &summary)?;
            echo_config(&cfg, &path)?;
            print!("{}", format_summary(&summary));
        }
        Command::SweepDip { common, range } => {
            let cfg = load(&common)?;
            let s_values = saturation_grid(&range, (0.05, 20.0, 30))?;
            let bath = PhononBath::new(cfg.phonon, cfg.grids.phonon)?;
            let points =
                dip_depth_sweep_with_bath(&bath, &cfg.drive, &cfg.detector, &s_values, cfg.treatment, &cfg.grids)?;
            let mut table = Table::new(&["s", "dip_depth"]);
            let mut failures = 0;
            for p in &points {
                let d = match &p.dip_depth {
                    Ok(d) => *d,
                    Err(e) => {
                        eprintln!("s = {}: {e}", p.s);
                        failures += 1;
                        f64::NAN
                    }
                };
                table.push(vec![p.s, d])?;
            }
            let path = out_path(&cfg, "sweep_dip.csv");
            write_csv(&path, &table)?;
            echo_config(&cfg, &path)?;
            if failures > 0 {
                return Err(Error::Domain(format!("{failures} sweep point(s) failed")));
            }
            println!("{}", path.display());
        }
        Command::PhononInfo { common } => {
            let cfg = load(&common)?;
            let bath = PhononBath::new(cfg.phonon, cfg.grids.phonon)?;
            let q = bath.rates(cfg.drive.omega)?;
            let b = bath.b();
            let summary = [
                ("B", b.to_string()),
                ("B2", (b * b).to_string()),
                ("one_minus_B2", (1.0 - b * b).to_string()),
                ("sideband_fraction", sideband_power_fraction(&cfg.phonon)?.to_string()),
                ("omega_r_psinv", q.omega_r.to_string()),
                ("gamma_x_re", q.gamma_x.re.to_string()),
                ("gamma_x_im", q.gamma_x.im.to_string()),
                ("chi_y_re", q.chi_y.re.to_string()),
                ("chi_y_im", q.chi_y.im.to_string()),
                ("chi_z_re", q.chi_z.re.to_string()),
                ("chi_z_im", q.chi_z.im.to_string()),
            ];
            if let Some(path) = &cfg.output_path {
                write_summary(path, &summary)?;
                echo_config(&cfg, path)?;
            }
            print!("{}", format_summary(&summary));
        }
    }
    Ok(())
}
