use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = doughnut_cli::run(std::env::args_os());
    if let Some(payload) = &outcome.payload {
        let _ = std::io::stdout().write_all(payload.as_bytes());
    }
    if outcome.code == doughnut_cli::EXIT_OK && outcome.payload.is_none() && outcome.payload_path.is_none() {
        // Help and version text.
        print!("{}", outcome.summary);
    } else {
        eprintln!("{}", outcome.summary.trim_end());
        if let Some(path) = &outcome.payload_path {
            eprintln!("wrote {}", path.display());
        }
    }
    ExitCode::from(outcome.code as u8)
}
