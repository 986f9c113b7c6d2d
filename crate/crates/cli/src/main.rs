use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    // Pin the BLAS thread count before the first LAPACK call so identical
    // configurations produce identical bytes regardless of machine size.
    if std::env::var_os("OPENBLAS_NUM_THREADS").is_none() {
        std::env::set_var("OPENBLAS_NUM_THREADS", "1");
    }
    let cli = dicke_cli::Cli::parse();
    match dicke_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
