fn main() {
    if let Some(threads) = std::env::var("WORDMAP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    std::process::exit(wordmap::cli::run(std::env::args_os()));
}
