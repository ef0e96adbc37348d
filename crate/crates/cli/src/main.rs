use clap::Parser;

fn main() {
    let code = sccat_cli::run(sccat_cli::Cli::parse());
    std::process::exit(code);
}
