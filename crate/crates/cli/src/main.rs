use std::io::Write;

use clap::Parser;
use diffalg_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
