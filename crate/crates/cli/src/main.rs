mod args;
mod ops;
mod output;
mod sweep;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

use args::{Cli, Command, EvalCmd, MeanArg, SweepCmd};
use ops::{Ctrl, Failure, Outcome};
use output::{error_value, render};

fn run(cli: &Cli, ctrl: &Ctrl) -> Vec<(String, Outcome)> {
    match &cli.cmd {
        Command::Eval(cmd) => {
            let op = match cmd {
                EvalCmd::Fs(_) => "eval fs",
                EvalCmd::Ft(_) => "eval ft",
                EvalCmd::Hyp2f1 { .. } => "eval 2f1",
            };
            vec![(op.into(), ops::eval(cmd, ctrl))]
        }
        Command::Theta { tau, ch } => vec![("theta".into(), ops::theta(tau, ch.as_deref()))],
        Command::Periods { z } => vec![("periods".into(), ops::periods(z, ctrl))],
        Command::Agm { kind, c, limit_formula, iter_tol, maxit } => {
            let op = match kind {
                MeanArg::D4 => "agm d4",
                MeanArg::Borchardt => "agm borchardt",
            };
            vec![(op.into(), ops::agm(*kind, c, *limit_formula, *iter_tol, *maxit, ctrl))]
        }
        Command::Verify(cmd) => vec![(ops::verify_name(cmd).into(), ops::verify(cmd, ctrl))],
        Command::Sweep(SweepCmd::VerifyAll { seed, n }) => sweep::verify_all(*seed, *n, ctrl),
    }
}

fn usage(message: &str) -> ExitCode {
    println!("{}", error_value("", "usage", message));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            return usage(first);
        }
    };
    let ctrl = match Ctrl::from_config(&cli.cfg) {
        Ok(c) => c,
        Err(f) => return usage(f.message()),
    };

    let outcomes = run(&cli, &ctrl);
    let mut code = 0u8;
    let mut lines: Vec<Value> = Vec::with_capacity(outcomes.len());
    for (op, out) in &outcomes {
        match out {
            Ok(rec) => {
                if !rec.pass && code == 0 {
                    code = 1;
                }
                lines.push(rec.to_value());
            }
            Err(f) => {
                code = code.max(f.code() as u8);
                lines.push(error_value(op, f.kind(), f.message()));
            }
        }
    }
    let text = render(&lines, cli.cfg.format, cli.cfg.precision);
    let written = match &cli.cfg.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let f = Failure::Usage(format!("cannot write output: {e}"));
        return usage(f.message());
    }
    ExitCode::from(code)
}
