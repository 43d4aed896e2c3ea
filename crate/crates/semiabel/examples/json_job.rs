//! Any job document through the library, printed as JSON.

use semiabel::report::{parse_config, render_json, run_job};

const JOB: &str = r#"{
  "task": "pairing",
  "curve": {"lattice": {"w1": {"re": 1, "im": 0}, "w2": {"re": 0.2, "im": 1.3}}},
  "pairs": [{"z": {"re": 0.3, "im": 0.4}, "zstar": {"re": 0.1, "im": -0.2}}],
  "torsion": [{"p": {"re": 0.5, "im": 0}, "qstar": {"re": 0, "im": 0.25}, "n": 4}]
}"#;

fn main() -> semiabel::Result<()> {
    let text = std::env::args()
        .nth(1)
        .map(std::fs::read_to_string)
        .transpose()
        .map_err(|e| semiabel::Error::schema("", e.to_string()))?;
    let out = run_job(&parse_config(text.as_deref().unwrap_or(JOB))?)?;
    print!("{}", render_json(&out.document));
    Ok(())
}
