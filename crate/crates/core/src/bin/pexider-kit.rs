use clap::Parser;
use pexider::cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PEXIDER_LOG", "off")).init();
    std::process::exit(run(&Cli::parse()));
}
