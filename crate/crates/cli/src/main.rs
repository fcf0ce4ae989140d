mod commands;
mod output;
mod svg;

use clap::Parser;

use commands::Cli;

/// Exit codes: 0 success, 2 usage error, 3 infeasible input, 4 solver failure.
fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap already renders help/version with code 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<multihelix::Error>() {
                Some(multihelix::Error::Infeasible(_)) => 3,
                Some(multihelix::Error::SolverFailure(_)) => 4,
                Some(multihelix::Error::InvalidParameter(_))
                | Some(multihelix::Error::OutOfDomain(_)) => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}
