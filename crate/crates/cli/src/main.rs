use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use stegabot::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("STEGABOT_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(5);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("stegabot: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
