//! Command-line front end (placeholder while the library grows).

/// Entry point used by the `hscat` binary; returns the process exit code.
pub fn run_command(_args: &[String]) -> u8 {
    eprintln!("hscat: command surface not wired up yet");
    2
}
