fn main() {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    std::process::exit(spaceform_lab::cli::main_with_args(args));
}
