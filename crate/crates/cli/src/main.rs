use clap::Parser;

fn main() {
    let cli = autok3_cli::Cli::parse();
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    std::process::exit(autok3_cli::run(&cli, &mut out, &mut err));
}
