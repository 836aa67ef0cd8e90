// Matrix Blaschke products `V Π (I − P + B_a(z^N) P)` are unitary on the
// circle and invariant under `z ↦ εz`; a loop acting on a filter matrix keeps
// it unitary.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavelab::circle_filters::{
    build_m_matrix, loop_action_circle, periodicity_residual, unit_circle_grid, unitarity_residual,
    BlaschkeFactor, Convention, LaurentPoly, Pole, RationalMatrixProduct,
};
use wavelab::{Result, C64};

fn rank_one(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    let v = DVector::from_fn(n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (&v * v.adjoint()).unscale(v.norm_squared())
}

pub fn run_example() -> Result<()> {
    let grid = unit_circle_grid(256);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2usize, 3] {
        let poles = [
            Pole::Finite(C64::new(0.0, 0.0)),
            Pole::Finite(C64::from_polar(0.5, 1.0)),
            Pole::Finite(C64::from_polar(2.0, -0.4)),
            Pole::Infinity,
        ];
        let factors = poles
            .iter()
            .map(|&a| BlaschkeFactor::new(a, rank_one(&mut rng, n), n))
            .collect::<Result<Vec<_>>>()?;
        let product = RationalMatrixProduct::new(DMatrix::identity(n, n), factors)?;
        println!(
            "N={n}: unitarity {:e}, periodicity {:e}",
            unitarity_residual(&product, &grid).max,
            periodicity_residual(&product, n, &grid).max
        );
    }

    let r = std::f64::consts::FRAC_1_SQRT_2;
    let haar = vec![
        LaurentPoly::from_real(0, &[r, r]),
        LaurentPoly::from_real(0, &[r, -r]),
    ];
    let g = RationalMatrixProduct::new(
        DMatrix::identity(2, 2),
        vec![BlaschkeFactor::new(
            Pole::Finite(C64::new(0.3, 0.1)),
            rank_one(&mut rng, 2),
            1,
        )?],
    )?;
    let act = loop_action_circle(g, build_m_matrix(&haar, Convention::Averaged), 2, &grid)?;
    println!(
        "G(z^2) M(z): unitarity {:e}, warning {:?}",
        unitarity_residual(&act, &grid).max,
        act.warning
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
