fn main() -> std::process::ExitCode {
    hirzebruch_bps::cli::main_entry()
}
