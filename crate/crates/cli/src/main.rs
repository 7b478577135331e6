fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CONTACTSIM_LOG", "warn")).init();
    std::process::exit(contactsim_cli::cli_main(std::env::args_os()));
}
