fn main() {
    // Die quietly when stdout closes early (e.g. piping into `head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(contact_curves::cli::run(std::env::args().skip(1)))
}
