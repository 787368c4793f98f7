//! Batch front end: parses a job, runs it against an optional on-disk cache and
//! renders the result as TSV or versioned JSON.

pub mod run;
pub mod spec;
pub mod table;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use run::{execute, exit_code, Outcome};
pub use spec::{Cli, Command, Format, JobSpec};
pub use table::Table;

/// Runs one invocation and returns the process exit status.
///
/// 0 on success, 1 when a `verify` suite has failing cases, 2 on bad input or a
/// failed precondition, 3 when a budget or guard is exhausted.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let (spec, print_spec) = match cli.command.into_spec() {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    if print_spec {
        let _ = writeln!(out, "{}", spec.to_json());
        return 0;
    }
    match execute(&spec) {
        Ok(o) => {
            let _ = out.write_all(o.table.render(spec.format).as_bytes());
            if o.failures > 0 {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
