use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use locfan_cli::parse::{parse_region, parse_rows, parse_vector, HomogChoice, Mode};
use locfan_cli::{check_document, parse_problem, run, Output, RunError, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Json,
    Summary,
}

/// Global and local Gröbner fans of ideals in polynomial rings and Weyl algebras over ℚ.
#[derive(Debug, Parser)]
#[command(name = "locfan", version)]
struct Cli {
    /// global-fan, local-fan, normal-fan, compare-initials or check-fan
    #[arg(long)]
    mode: Option<String>,
    /// Problem file, or a fan document for check-fan; `-` reads stdin
    #[arg(long, default_value = "-")]
    input: String,
    /// Weight subspace as a file or inline rows "[[1,0],[0,1]]"
    #[arg(long)]
    subspace: Option<String>,
    /// Base point, e.g. "-1/2,-1/2"
    #[arg(long)]
    base_point: Option<String>,
    /// auto, alpha[(a,..)], h11, double or double-generators
    #[arg(long)]
    homogenization: Option<String>,
    /// local, global or full
    #[arg(long)]
    region: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "summary")]
    emit: Emit,
    /// Validate the fan axioms of the output
    #[arg(long)]
    validate: bool,
}

fn usage(msg: String) -> RunError {
    RunError::Usage(msg)
}

fn read_input(path: &str) -> Result<String, RunError> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn options(cli: &Cli) -> Result<RunOptions, RunError> {
    let mode = cli.mode.as_deref().map(|m| Mode::from_name(m).ok_or_else(|| usage(format!("unknown mode '{m}'")))).transpose()?;
    let subspace = match &cli.subspace {
        Some(s) if Path::new(s).is_file() => Some(parse_rows(&read_input(s)?)?),
        Some(s) => Some(parse_rows(s)?),
        None => None,
    };
    let base_point = cli.base_point.as_deref().map(parse_vector).transpose()?;
    let homogenization = cli
        .homogenization
        .as_deref()
        .map(|h| HomogChoice::parse(h).ok_or_else(|| usage(format!("unknown homogenization '{h}'"))))
        .transpose()?;
    let region = cli.region.as_deref().map(|r| parse_region(r).ok_or_else(|| usage(format!("unknown region '{r}'")))).transpose()?;
    Ok(RunOptions { mode, subspace, base_point, homogenization, region, validate: cli.validate })
}

fn execute(cli: &Cli) -> Result<String, RunError> {
    let opts = options(cli)?;
    let text = read_input(&cli.input)?;
    let output = if opts.mode == Some(Mode::CheckFan) {
        Output::Fan(check_document(&text)?)
    } else {
        let input = parse_problem(&text)?;
        if input.mode == Some(Mode::CheckFan) && opts.mode.is_none() {
            return Err(usage("check-fan reads a fan document; pass --mode check-fan".into()));
        }
        run(&input, &opts)?
    };
    Ok(match cli.emit {
        Emit::Json => output.json(),
        Emit::Summary => output.summary(),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
