use clap::Parser;

fn main() {
    let cli = fibertap_cli::Cli::parse();
    match fibertap_cli::run(cli) {
        Ok(written) => {
            for path in written {
                println!("{}", path.display());
            }
        }
        Err(e) => {
            eprintln!("fibertap: {e}");
            std::process::exit(e.code());
        }
    }
}
