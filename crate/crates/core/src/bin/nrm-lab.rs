use clap::Parser;

use nrm_lab::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = execute(cli, &mut stdout.lock()) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
