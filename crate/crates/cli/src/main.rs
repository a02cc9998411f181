use clap::Parser;

fn main() {
    let cli = stp_cli::Cli::parse();
    let code = stp_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
