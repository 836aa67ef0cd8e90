// Shift, transfer operator, conditional expectation and a Ruelle fixed point
// on the code space of a two-branch IFS with unequal weights.

use wavelab::code_space::{harmonic_solve, ruelle_apply, weighted_adjoint, weighted_compose};
use wavelab::{CylinderFn, IfsSpec, Result, Word, C64};

pub fn run_example() -> Result<()> {
    let spec = IfsSpec::with_weights(vec![0.25, 0.75])?;
    let f = CylinderFn::from_real(&spec, 2, &[1.0, 2.0, 3.0, 4.0])?;

    let sf = f.compose_sigma()?;
    let back = sf.adjoint_sigma();
    println!(
        "S f has depth {}, |S*S f - f| = {:e}",
        sf.depth(),
        back.sup_distance(&f)?
    );

    let e = f.conditional_expectation()?;
    let ee = e.conditional_expectation()?;
    println!("E_sigma idempotence residual {:e}", ee.sup_distance(&e)?);
    println!(
        "integral of f = {}, of E_sigma f = {}",
        f.integrate(),
        e.integrate()
    );

    let m = CylinderFn::from_real(&spec, 1, &[2.0, 2.0 / 3.0f64.sqrt()])?;
    let g = CylinderFn::from_real(&spec, 1, &[0.5, -1.0])?;
    let lhs = weighted_compose(&m, &f)?.inner_product(&g)?;
    let rhs = f.inner_product(&weighted_adjoint(&m, &g)?)?;
    println!("<S_m f, g> = {lhs}, <f, S_m* g> = {rhs}");

    let uniform = IfsSpec::uniform(2)?;
    let w = CylinderFn::from_real(&uniform, 2, &[1.5, 0.5, 0.3, 1.7])?;
    let h = harmonic_solve(&w, 1, 1e-13, 100_000)?;
    let rh = ruelle_apply(&w, &h)?;
    println!(
        "harmonic h = {:?}, |R_W h - h| = {:e}",
        h.values().iter().map(|v| v.re).collect::<Vec<_>>(),
        rh.sup_distance(&h)?
    );

    let cyl = Word::new(2, vec![2, 1])?;
    println!("mu([2 1]) = {}", cyl.measure(&spec));
    let ind = CylinderFn::indicator(&spec, &cyl)?;
    assert!((ind.integrate() - C64::new(cyl.measure(&spec), 0.0)).norm() < 1e-15);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
