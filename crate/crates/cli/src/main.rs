use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;
use unialg_cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };

    let input = match &cli.input {
        Some(path) => std::fs::read(path),
        None => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).map(|_| buf)
        }
    };
    let input = match input {
        Ok(bytes) => bytes,
        Err(e) => {
            eprintln!("error: cannot read input: {e}");
            return ExitCode::from(2);
        }
    };

    let (out, code) = run(&config, &input);
    if code != 0 {
        let _ = std::io::stderr().write_all(&out);
        return ExitCode::from(code as u8);
    }
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &out),
        None => std::io::stdout().write_all(&out),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
