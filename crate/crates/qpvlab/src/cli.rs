//! Command-line front end (under construction).
pub fn dispatch_env() -> i32 { 0 }
