use specdet_cli::config::{load, ConfigError};
use specdet_cli::run::{run, EXIT_USAGE};

fn main() {
    if let Ok(n) = std::env::var("SPECDET_THREADS") {
        match n.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: SPECDET_THREADS must be a positive integer");
                std::process::exit(EXIT_USAGE);
            }
        }
    }
    let argv: Vec<String> = std::env::args().collect();
    let config = match load(&argv) {
        Ok(c) => c,
        Err(ConfigError::Info(msg)) => {
            print!("{msg}");
            std::process::exit(0);
        }
        Err(ConfigError::Usage(msg)) => {
            eprint!("{msg}");
            std::process::exit(EXIT_USAGE);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_USAGE);
        }
    };
    let code = run(&config, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
