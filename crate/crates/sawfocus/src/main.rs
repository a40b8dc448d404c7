use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sawfocus::commands::{self, WaistRange};
use sawfocus::config::Device;
use sawfocus::{Error, Result};

/// Focusing SAW resonator design and analysis.
#[derive(Parser)]
#[command(name = "sawfocus", version)]
struct Cli {
    /// Device configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; defaults to the config's `output_dir`, or `.` for
    /// commands without a config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Use the `±w0` IDT aperture regardless of the config.
    #[arg(long, global = true)]
    apodized: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resonance table and S21 trace.
    Spectrum,
    /// Transverse splitting against waist.
    Sweep {
        /// First waist (m); defaults to the config waist.
        #[arg(long)]
        w0_start: Option<f64>,
        /// Last waist (m); defaults to `--w0-start`.
        #[arg(long)]
        w0_stop: Option<f64>,
        /// Waist increment (m).
        #[arg(long, default_value_t = 0.5e-6)]
        w0_step: f64,
        /// Transverse indices; defaults to the config's `modes.l`.
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<u32>>,
    },
    /// Electrode polygons as JSON and SVG.
    Layout,
    /// Complex field map of one mode on the configured grid.
    Field {
        /// Transverse index.
        #[arg(long, default_value_t = 0)]
        l: u32,
    },
    /// Magnitude and phase PNGs of a field CSV.
    Raster {
        /// Field CSV written by `field`.
        #[arg(long)]
        field: PathBuf,
    },
    /// Normalized transducer efficiency ladder.
    Ladder {
        /// Highest transverse index.
        #[arg(long, default_value_t = 16)]
        l_max: u32,
    },
    /// Gaussian waist fit of a scan.
    Fit {
        /// Scan CSV.
        #[arg(long)]
        scan: PathBuf,
        /// Column to fit (m).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x_slice: f64,
    },
    /// Hermite-Gauss projection of a scan.
    Classify {
        /// Scan CSV.
        #[arg(long)]
        scan: PathBuf,
        /// Highest transverse index in the basis.
        #[arg(long, default_value_t = 6)]
        l_max: u32,
        /// Dominant-fraction threshold below which the scan is spurious.
        #[arg(long, default_value_t = sawfocus_core::imaging::SPURIOUS_THRESHOLD)]
        threshold: f64,
    },
    /// Synthetic scan from a JSON parameter file.
    SynthScan {
        /// Generator parameters.
        #[arg(long)]
        params: PathBuf,
    },
    /// Writes the built-in reference anisotropy profiles as CSV.
    ReferenceProfiles,
}

fn device(cli: &Cli) -> Result<Device> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("this command needs --config".into()))?;
    Device::load(path, cli.apodized)
}

fn plain_out(cli: &Cli) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    match &cli.command {
        Command::Spectrum => {
            let dev = device(cli)?;
            commands::spectrum(&dev, &dev.output_dir(cli.out.as_deref()))
        }
        Command::Sweep {
            w0_start,
            w0_stop,
            w0_step,
            modes,
        } => {
            let dev = device(cli)?;
            let start = w0_start.unwrap_or(dev.config.waist_m);
            let range = WaistRange {
                start,
                stop: w0_stop.unwrap_or(start),
                step: *w0_step,
            };
            let modes = modes.clone().unwrap_or_else(|| dev.config.modes.l.clone());
            commands::sweep(&dev, range, &modes, &dev.output_dir(cli.out.as_deref()))
        }
        Command::Layout => {
            let dev = device(cli)?;
            commands::layout(&dev, &dev.output_dir(cli.out.as_deref()))
        }
        Command::Field { l } => {
            let dev = device(cli)?;
            commands::field(&dev, *l, &dev.output_dir(cli.out.as_deref()))
        }
        Command::Raster { field } => commands::raster(field, &plain_out(cli)),
        Command::Ladder { l_max } => {
            let dev = device(cli)?;
            commands::ladder(&dev, *l_max, &dev.output_dir(cli.out.as_deref()))
        }
        Command::Fit { scan, x_slice } => commands::fit(scan, *x_slice, &plain_out(cli)),
        Command::Classify { scan, l_max, threshold } => {
            let dev = device(cli)?;
            commands::classify(&dev, scan, *l_max, *threshold, &dev.output_dir(cli.out.as_deref()))
        }
        Command::SynthScan { params } => commands::synth_scan(params, &plain_out(cli)),
        Command::ReferenceProfiles => commands::reference_profiles(&plain_out(cli)),
    }
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", show(&f));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sawfocus: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
