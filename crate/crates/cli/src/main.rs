use clap::Parser;

use rebalance_cli::args::Cli;
use rebalance_cli::commands;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = commands::dispatch(cli) {
        eprintln!("error: {}", e.one_line());
        std::process::exit(e.exit_code());
    }
}
