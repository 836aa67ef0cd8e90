// Circle filters: Haar and Daubechies-4 Cuntz residuals, CQF completion and
// the filter matrix on a grid.

use wavelab::circle_filters::{
    build_m_matrix, cqf_complete, cqf_partner, cuntz_residuals, marseille_residual,
    shift_relation_residual, unit_circle_grid, unitarity_residual, Convention, LaurentPoly,
};
use wavelab::Result;

const D4: [f64; 4] = [
    0.482_962_913_144_534_1,
    0.836_516_303_737_807_9,
    0.224_143_868_042_013_4,
    -0.129_409_522_551_260_4,
];

pub fn run_example() -> Result<()> {
    let grid = unit_circle_grid(256);
    let r = std::f64::consts::FRAC_1_SQRT_2;

    let haar = vec![
        LaurentPoly::from_real(0, &[r, r]),
        LaurentPoly::from_real(0, &[r, -r]),
    ];
    let rep = cuntz_residuals(&haar, 2, Convention::Averaged)?;
    println!("Haar (averaged) residual {:e}", rep.max());
    let m = build_m_matrix(&haar, Convention::Averaged);
    println!(
        "Haar matrix: unitarity {:e}, shift relation {:e}",
        unitarity_residual(&m, &grid).max,
        shift_relation_residual(&m, &grid).max
    );

    let m0 = LaurentPoly::from_real(0, &[0.5, 0.5]);
    let full = cqf_complete(&m0, Convention::UnitSum);
    println!(
        "CQF of (1+z)/2: unitarity {:e}",
        unitarity_residual(&full, &grid).max
    );

    // These taps sum to sqrt(2), the averaged normalization.
    let d4 = LaurentPoly::from_real(0, &D4);
    let bank = vec![d4.clone(), cqf_partner(&d4)];
    println!(
        "D4 Cuntz residual {:e}, quadrature identity residual {:e}",
        cuntz_residuals(&bank, 2, Convention::Averaged)?.max(),
        marseille_residual(&d4, Convention::Averaged, &grid)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
