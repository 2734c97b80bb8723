//! Command-line front end for `xorbounds`.
//!
//! Every command writes one record per line (JSON Lines by default, CSV or
//! plain text on request) so long runs can be inspected while they go.
//! Output depends only on the arguments: items are processed in parallel
//! but written in input order.

pub mod args;
pub mod emit;
pub mod lift;
pub mod measure;
pub mod modbound;
pub mod suites;
pub mod sweep;

use args::{Cli, Command, RunConfig};
use clap::Parser;
use std::io::Write;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    CheckFailed = 1,
    Usage = 2,
    Capacity = 3,
}

impl Exit {
    /// The more severe of two outcomes. Capacity outranks a failed check
    /// because the run did not finish what it was asked to do.
    pub fn worst(self, other: Exit) -> Exit {
        let rank = |e: Exit| match e {
            Exit::Ok => 0,
            Exit::CheckFailed => 1,
            Exit::Capacity => 2,
            Exit::Usage => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }

    pub fn of_error(e: &xorbounds::Error) -> Exit {
        match e {
            xorbounds::Error::Capacity { .. } => Exit::Capacity,
            xorbounds::Error::Parse { .. } => Exit::Usage,
            xorbounds::Error::Defect(_) => Exit::CheckFailed,
            _ => Exit::Ok,
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Ok };
            let _ = if code == Exit::Ok {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let config = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return Exit::Usage;
        }
    };
    xorbounds::lp::set_capacity(config.max_lp);
    // The global pool can be sized once per process; later calls keep it.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build_global();
    let result = match &cli.command {
        Command::Measure(a) => measure::run(&config, a, out),
        Command::Verify(a) => suites::run(&config, a, out),
        Command::Sweep(a) => sweep::run(&config, a, out),
        Command::Lift(a) => lift::run(&config, a, out),
        Command::Modbound(a) => modbound::run(&config, a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.exit
        }
    }
}

/// A failure that ends the whole command.
#[derive(Debug)]
pub struct Fatal {
    pub exit: Exit,
    pub message: String,
}

impl Fatal {
    pub fn usage(msg: impl Into<String>) -> Self {
        Fatal {
            exit: Exit::Usage,
            message: msg.into(),
        }
    }
}

impl From<xorbounds::Error> for Fatal {
    fn from(e: xorbounds::Error) -> Self {
        let exit = match Exit::of_error(&e) {
            Exit::Ok => Exit::Usage,
            x => x,
        };
        Fatal {
            exit,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Fatal {
    fn from(e: std::io::Error) -> Self {
        Fatal {
            exit: Exit::CheckFailed,
            message: format!("write failed: {e}"),
        }
    }
}

pub type Outcome = std::result::Result<Exit, Fatal>;
