//! Command-line front end for `nhssh`: argument parsing, figure presets and
//! artifact writing. The binary is a thin wrapper around [`main_with`].

pub mod config;
pub mod figures;
pub mod run;

pub use config::{parse_args, CommandKind, CommandParams, OutputFormat, ParseError, RunConfig};
pub use figures::Figure;
pub use run::run;

/// Parses `argv`, runs the command and returns the process exit code:
/// 0 on success, 1 when the computation fails, 2 on usage errors.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_args(argv) {
        Ok(c) => c,
        Err(ParseError::Clap(e)) => {
            let _ = e.print();
            return e.exit_code();
        }
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match run(&config) {
        Ok(summary) => {
            if config.output_path.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
