use clap::Parser;
use hennie_cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match execute(cli, &mut stdout) {
        Ok(status) => std::process::exit(status.code()),
        Err(e) => {
            // Error types that wrap a source often repeat its message; print
            // each distinct part of the chain once.
            let mut msg = e.to_string();
            for cause in e.chain().skip(1) {
                let c = cause.to_string();
                if !msg.ends_with(&c) {
                    msg.push_str(": ");
                    msg.push_str(&c);
                }
            }
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
