use clap::Parser;

use decotrade::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("decotrade: {e}");
        std::process::exit(e.exit_code());
    }
}
