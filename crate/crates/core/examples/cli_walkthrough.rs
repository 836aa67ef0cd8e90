// Drives the command-line front end in process: build a bank, verify it,
// and watch a broken bank fail with exit code 1.

use std::path::Path;

use wavelab::cli::run;
use wavelab::Result;

fn wavelab(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("wavelab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err),
    )
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

pub fn run_example() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("wavelab-walkthrough-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let bank = path(&dir, "bank.json");

    let (code, _) = wavelab(&[
        "ifs",
        "build-filter",
        "--kind",
        "indicator",
        "--N",
        "2",
        "--out",
        &bank,
    ]);
    println!("build-filter exit {code}");
    let (code, _) = wavelab(&["ifs", "verify-filter", "--bank", &bank, "--depth", "4"]);
    println!("verify-filter exit {code}");

    let broken = path(&dir, "broken.json");
    std::fs::write(
        &broken,
        r#"{"spec":{"N":2},"filters":[{"N":2,"depth":0,"values":[[1,0]]},{"N":2,"depth":0,"values":[[1,0]]}]}"#,
    )?;
    let (code, _) = wavelab(&["ifs", "verify-filter", "--bank", &broken]);
    println!("verify-filter on m1 = m2 = 1 exit {code}");

    let (code, text) = wavelab(&["examples", "logistic", "--degree", "4", "--nodes", "16"]);
    println!("examples logistic exit {code}:\n{text}");
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
