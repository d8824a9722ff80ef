use clap::Parser;
use zerosum::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(cli);
    println!("{}", serde_json::to_string_pretty(&out.json).expect("valid JSON"));
    std::process::exit(out.exit);
}
