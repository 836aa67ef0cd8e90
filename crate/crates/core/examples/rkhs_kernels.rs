// The Szegő kernel on a squaring-closed point set: refinement identity,
// infinite-product kernel and preimage orthogonality for roots-of-unity data.

use std::f64::consts::PI;

use wavelab::rkhs::{
    contraction_check, discrete_cuntz_check, preimage_orthogonality, product_kernel,
    refinement_residual, FinitePointSet, KernelMatrix,
};
use wavelab::{Result, C64};

pub fn run_example() -> Result<()> {
    let ps =
        FinitePointSet::squaring_grid(&[C64::from_polar(0.5, 0.7), C64::from_polar(0.2, -2.1)])?;
    println!("{} points", ps.len());
    let k = KernelMatrix::szego(&ps)?;
    let filters = vec![ps.sample(|_| C64::new(1.0, 0.0)), ps.sample(|z| z)];
    println!(
        "refinement residual {:e}",
        refinement_residual(&k, &filters, &ps)?
    );
    for (i, m) in filters.iter().enumerate() {
        let c = contraction_check(&k, m, &ps)?;
        println!(
            "filter {i}: contraction {} (min eigenvalue {:e})",
            c.contraction, c.min_eigenvalue
        );
    }
    let pk = product_kernel(&filters, &ps, 30)?;
    println!(
        "product kernel vs Szegő {:e}, tail {:e}",
        pk.kernel.max_distance(&k),
        pk.tail
    );
    let dc = discrete_cuntz_check(&k, &filters, &ps)?;
    println!("kernel completeness {:e}", dc.kernel_completeness);

    let roots: Vec<C64> = (0..8)
        .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / 8.0))
        .collect();
    let circle = FinitePointSet::orbit_closure(&roots, |z| z * z, 1e-12, 64)?;
    let data = vec![circle.sample(|_| C64::new(1.0, 0.0)), circle.sample(|z| z)];
    let pre = preimage_orthogonality(&data, &circle)?;
    println!("preimage orthogonality on 8th roots: {:e}", pre.max);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
