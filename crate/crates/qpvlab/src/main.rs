fn main() { std::process::exit(qpvlab::cli::dispatch_env()); }
