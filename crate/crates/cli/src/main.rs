use clap::Parser;

fn main() {
    let cli = foon_cli::Cli::parse();
    let code = foon_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
