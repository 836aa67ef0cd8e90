// Affine fractals: code-to-point map, a seeded chaos game and z-scores of
// the strong-invariance moment identities.

use wavelab::geometry::{code_to_point, strong_invariance_check, AffineIfs};
use wavelab::{Result, Word};

pub fn run_example() -> Result<()> {
    let tri = AffineIfs::sierpinski();
    let p = code_to_point(&tri, &Word::new(3, vec![2, 3])?)?;
    println!("V(2 3) = ({}, {})", p[0], p[1]);
    println!("analytic mean {:?}", tri.mean().as_slice());

    let report = strong_invariance_check(&tri, 100_000, 7, 2)?;
    for c in &report.checks {
        println!(
            "{:28} expected {:+.6} observed {:+.6} z {:+.3}",
            c.statistic, c.expected, c.observed, c.z
        );
    }

    let unit = AffineIfs::new(vec![vec![2]], vec![vec![0], vec![1]], None)?;
    let report = strong_invariance_check(&unit, 100_000, 3, 2)?;
    println!("binary digits: max |z| = {:.3}", report.max_abs_z);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
