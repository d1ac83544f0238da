//! Driving the command line from code, e.g. to script a batch of runs.

fn main() {
    let dir = std::env::temp_dir().join("blowup-example");
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("cor1.json");
    std::fs::write(&config, r#"{"scenario": "cor1", "p": 3, "lambda-min": 10, "lambda-max": 1e4, "lambda-n": 7}"#).unwrap();

    let out = dir.join("cor1.csv");
    let code = blowup::cli::run([
        "blowup",
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    println!("exit code {code}");
    print!("{}", std::fs::read_to_string(&out).unwrap());
}
