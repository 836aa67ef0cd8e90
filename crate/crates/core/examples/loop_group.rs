// The loop group acting on filter banks: the unitary field connecting the
// indicator and roots-of-unity banks is the normalized Fourier matrix.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use wavelab::ifs_filters::{
    apply_loop_group, build_indicator, build_roots_of_unity, connecting_unitary, verify_filter,
    MatrixField,
};
use wavelab::{IfsSpec, Result, C64};

pub fn run_example() -> Result<()> {
    let n = 3;
    let spec = IfsSpec::uniform(n)?;
    let ind = build_indicator(&spec)?;
    let roots = build_roots_of_unity(&spec)?;

    let u = connecting_unitary(&ind, &roots)?;
    let fourier = DMatrix::from_fn(n, n, |k, j| {
        C64::from_polar(
            1.0 / (n as f64).sqrt(),
            2.0 * PI * ((k + 1) * (j + 1) % n) as f64 / n as f64,
        )
    });
    let want = MatrixField::constant(&spec, &fourier)?;
    println!("|U - Fourier| = {:e}", u.distance(&want)?);
    println!("U unitarity residual {:e}", u.unitarity_residual()?);

    let moved = apply_loop_group(&ind, &u)?;
    let err = moved
        .filters()
        .iter()
        .zip(roots.filters())
        .map(|(a, b)| a.sup_distance(b))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("m.(U o sigma) vs target: {err:e}");

    // Acting by U* undoes the action.
    let undone = apply_loop_group(&moved, &u.adjoint())?;
    println!(
        "inverse action passes verification: {}",
        verify_filter(&undone, 3, 1e-12)?.pass
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
