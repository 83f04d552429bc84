mod args;
mod commands;
mod output;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::OptimizeQ(a) => commands::optimize_q_cmd(a),
        Command::Design(a) => commands::design_cmd(a),
        Command::Evolve(a) => commands::evolve_cmd(a),
        Command::Sweep(a) => commands::sweep_cmd(a),
        Command::Reproduce(a) => commands::reproduce_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
    };
    if let Err(failure) = result {
        eprintln!("{}", failure.to_json());
        std::process::exit(failure.exit_code());
    }
}
