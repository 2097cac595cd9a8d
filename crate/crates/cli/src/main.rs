use clap::Parser;

fn main() {
    let args = alphacap_cli::Args::parse();
    std::process::exit(alphacap_cli::run(&args));
}
