use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use qorder::cli::{render_data, render_text, run, Command, Document, JobSpec, Options, RunError, SpecError};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Data,
}

#[derive(Debug, Parser)]
#[command(name = "qorder", version, about = "Exact checks on quantum algebras at roots of unity")]
struct Args {
    /// check, center, strata, locate, count, oracle, stabilizer or verify
    #[arg(value_parser = parse_command)]
    command: Command,
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Adds seeded random characters to `verify`.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_command(s: &str) -> Result<Command, String> {
    Command::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
        format!("unknown command {s:?}, expected one of {}", names.join(", "))
    })
}

fn emit(doc: &Document, args: &Args) -> Result<(), String> {
    let text = match args.format {
        Format::Text => render_text(doc),
        Format::Data => render_data(doc),
    };
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let opts = Options { jobs: args.jobs, seed: args.seed };
    let result = std::fs::read_to_string(&args.spec)
        .map_err(|e| RunError::Spec(SpecError::Field { field: "--spec".into(), msg: format!("{}: {e}", args.spec.display()) }))
        .and_then(|text| JobSpec::parse(&text).map_err(RunError::from))
        .and_then(|spec| run(args.command, &spec, &opts));
    let (doc, code) = match result {
        Ok(o) => (o.document, o.status.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            (e.document(args.command.name()), e.exit_code())
        }
    };
    if let Err(e) = emit(&doc, &args) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
