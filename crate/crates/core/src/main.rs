use clap::Parser;

fn main() {
    faer::set_global_parallelism(faer::Par::Seq);
    let args = band_lt::cli::Args::parse();
    std::process::exit(band_lt::cli::main_with_args(args));
}
