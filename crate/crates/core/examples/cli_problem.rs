//! Runs the command-line front end on a small problem file.

use std::fs;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join(format!("polyrefine-example-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let input = dir.join("problem.json");
    fs::write(
        &input,
        r#"{
  "coeffs": [["-2", "0"], ["0", "0"], ["1", "0"]],
  "discs": [{"cx": "1.5", "cy": "0", "r": "0.2", "isolation": 9}],
  "mode": "refine"
}"#,
    )?;
    let args = ["polyrefine", "--input", input.to_str().unwrap(), "--eps-bits", "128"];
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = polyrefine::cli::run(args, &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit code {code}");
    fs::remove_dir_all(&dir)
}
