use clap::Parser;
use kacgeron::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("kacgeron: {e}");
        std::process::exit(e.exit_code());
    }
}
