//! Runs the identity checks on a curve given on the command line as `g2 g3`.

use semiabel::report::{parse_config, render_text, run_verification_suite};

fn main() -> semiabel::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (g2, g3) = match args.as_slice() {
        [a, b] => (a.clone(), b.clone()),
        _ => ("4".into(), "0".into()),
    };
    let cfg = parse_config(&format!(r#"{{"task":"verify","curve":{{"g2":{g2},"g3":{g3}}},"seed":1}}"#))?;
    let report = run_verification_suite(&cfg)?;
    print!("{}", render_text(&report.to_json()));
    std::process::exit(if report.overall { 0 } else { 2 });
}
