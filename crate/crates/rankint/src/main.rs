use clap::Parser;

fn main() {
    let cli = rankint::cli::Cli::parse();
    let code = match rankint::cli::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}
