use clap::error::ErrorKind;
use clap::Parser;

use nilbohr_cli::{run, ExperimentConfig};

fn main() {
    let cfg = match ExperimentConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            // clap uses 2 for usage errors; 2 is reserved for negative results here
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            std::process::exit(code);
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            if cfg.out.is_some() {
                println!("{}", outcome.summary);
            } else {
                eprintln!("{}", outcome.summary);
            }
            std::process::exit(outcome.status.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
