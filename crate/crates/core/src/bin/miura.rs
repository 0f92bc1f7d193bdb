use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use miura::script::{parse_script, Entry, Session, Transcript};

#[derive(Parser)]
#[command(name = "miura", version, about = "Jacobian arithmetic on Miura curves")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script file
    Run { file: PathBuf },
    /// Read statements from standard input
    Repl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn emit(entry: &Entry, format: Format) {
    let line = match format {
        Format::Text => entry.render_text(),
        Format::Json => entry.render_json(),
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(io::stdout(), "{line}");
}

fn run(file: &PathBuf, format: Format) -> u8 {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return 2;
        }
    };
    let stmts = match parse_script(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut transcript = Transcript::default();
    Session::new().run(&stmts, &mut transcript);
    for entry in &transcript.entries {
        emit(entry, format);
    }
    if let Some(e) = &transcript.error {
        eprintln!("error: {e}");
    }
    transcript.exit_code() as u8
}

fn repl(format: Format) -> u8 {
    let interactive = io::stdin().is_terminal();
    let mut session = Session::new();
    let mut status = 0u8;
    let mut lines = io::stdin().lock().lines();
    loop {
        if interactive {
            print!("miura> ");
            let _ = io::stdout().flush();
        }
        let Some(Ok(line)) = lines.next() else { break };
        let stmts = match parse_script(&line) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                status = 2;
                continue;
            }
        };
        for stmt in &stmts {
            match session.execute(stmt) {
                Ok(Some(entry)) => {
                    if matches!(entry, Entry::Assertion { passed: false, .. }) && status == 0 {
                        status = 1;
                    }
                    emit(&entry, format);
                }
                Ok(None) => {}
                Err(e) => {
                    eprintln!("error: {e}");
                    status = 2;
                    break;
                }
            }
        }
        if session.has_quit() {
            break;
        }
    }
    status
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Run { file } => run(file, cli.format),
        Command::Repl => repl(cli.format),
    };
    ExitCode::from(code)
}
