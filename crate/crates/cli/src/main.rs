mod args;
mod commands;
mod error;
mod report;
mod session;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::Output;

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn render(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports are plain JSON");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let (text, code) = match commands::run(&cli, argv.clone()) {
        Ok(outcome) => match &outcome.output {
            Output::Json(v) => {
                // a report with limited rows is complete but not exact
                let limited = v["limited"] == serde_json::Value::Bool(true);
                let code = if limited && outcome.exit_code == 0 {
                    3
                } else {
                    outcome.exit_code
                };
                (render(v), code)
            }
            Output::Text(t) => (t.clone(), outcome.exit_code),
        },
        Err(err) => {
            eprintln!("froblab: {err}");
            let v = report::error_report(argv, err.kind(), err.exit_code(), &err.to_string());
            (render(&v), err.exit_code())
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("froblab: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
