use clap::Parser;

use vakit_cli::app::{render, run, Cli};

fn main() {
    let cli = Cli::parse();
    let env = run(&cli);
    if let Some(e) = &env.error {
        eprintln!("error: {e}");
    }
    print!("{}", render(&env));
    std::process::exit(env.exit_code);
}
