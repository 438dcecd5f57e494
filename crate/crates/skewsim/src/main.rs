use clap::Parser;
use skewsim::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
