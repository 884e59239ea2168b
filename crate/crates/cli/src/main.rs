use std::io::Write;
use std::process::ExitCode;

use basinscope_cli::{parse_args, run, CliError, WORKERS_ENV};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let env_workers = std::env::var(WORKERS_ENV).ok();
    let result = parse_args(std::env::args_os(), env_workers.as_deref()).and_then(|cfg| run(&cfg));
    match result {
        Ok(text) => {
            print!("{text}");
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(e)) => {
            // clap renders help, version and usage errors itself
            let code = e.exit_code();
            let _ = e.print();
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("basinscope: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
