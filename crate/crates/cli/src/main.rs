use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ringcodec::channel::EbN0Convention;
use ringcodec_cli::commands::{self, Overrides};
use ringcodec_cli::CliError;

/// Kerdock and Preparata codes over Z4: inspect, encode, decode, simulate.
#[derive(Parser, Debug)]
#[command(name = "ringcodec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the parameters of a code preset (nr8, k8, p8, k32, p32, k128, p128, k512, p512).
    Info { code: String },
    /// Encode an information word given as digits (`0123`) or a comma list.
    Encode { code: String, word: String },
    /// Decode channel samples: interleaved re,im values, `-` reads stdin.
    Decode {
        code: String,
        decoder: String,
        #[arg(allow_negative_numbers = true)]
        ebn0_db: f64,
        samples: PathBuf,
        #[arg(long)]
        ebn0_convention: Option<EbN0Convention>,
    },
    /// Run the sweep described by a config file and emit CSV.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        max_frames: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        ebn0_convention: Option<EbN0Convention>,
    },
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Runtime(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Info { code } => print!("{}", commands::info(&code)?),
        Command::Encode { code, word } => print!("{}", commands::encode(&code, &word)?),
        Command::Decode {
            code,
            decoder,
            ebn0_db,
            samples,
            ebn0_convention,
        } => {
            let text = read_input(&samples)?;
            let convention = ebn0_convention.unwrap_or_default();
            print!("{}", commands::decode(&code, &decoder, ebn0_db, &text, convention)?);
        }
        Command::Simulate {
            config,
            seed,
            delta,
            max_frames,
            out,
            ebn0_convention,
        } => {
            let overrides = Overrides {
                seed,
                delta,
                max_frames,
                out,
                convention: ebn0_convention,
            };
            let config = commands::load_config(&config, &overrides)?;
            let rule = config.stop_rule()?;
            eprintln!(
                "# delta={} min_frame_errors={} max_frames={} ebn0_convention={}",
                rule.delta, rule.min_frame_errors, rule.max_frames, config.convention
            );
            let records = commands::simulate(&config)?;
            for r in records.iter().filter(|r| r.capped) {
                eprintln!(
                    "# {} {} at {} dB hit the frame cap with {} errors",
                    r.code, r.decoder, r.ebn0_db, r.frame_errors
                );
            }
            if let Some(csv) = commands::write_records(&config, &records)? {
                print!("{csv}");
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
            eprintln!("ringcodec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
