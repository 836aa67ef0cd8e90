// The cascade algorithm for Haar and Daubechies-4, the D4 wavelet, the shift
// Gram matrix and the infinite product for the Fourier transform of φ.

use wavelab::circle_filters::LaurentPoly;
use wavelab::classic_mra::{
    cascade, fourier_product, harmonic_profile, shift_orthonormality, wavelet_detail, CascadeSeed,
};
use wavelab::Result;

const D4: [f64; 4] = [
    0.482_962_913_144_534_1,
    0.836_516_303_737_807_9,
    0.224_143_868_042_013_4,
    -0.129_409_522_551_260_4,
];

pub fn run_example() -> Result<()> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let haar = cascade(&[r, r], 2, 3, 64, CascadeSeed::default())?;
    println!("Haar residuals {:?}", haar.residuals);

    let d4 = cascade(&D4, 2, 20, 1024, CascadeSeed::default())?;
    println!(
        "D4: seed {:?}, last residual {:e}, integral {:.15}",
        d4.seed_used,
        d4.last_residual(),
        d4.integral()
    );
    println!("phi(1) = {:.15}", d4.phi.values[1024]);

    let slow = cascade(&D4, 2, 20, 1024, CascadeSeed::UnitBox)?;
    println!(
        "D4 from the unit box: last residual {:e}",
        slow.last_residual()
    );

    let detail: Vec<f64> = (0..4)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * D4[3 - k])
        .collect();
    let psi = wavelet_detail(&d4, &detail)?;
    println!(
        "psi: integral {:e}, <phi, psi> {:e}",
        psi.integral(),
        d4.phi.inner(&psi)?
    );

    let gram = shift_orthonormality(&d4.phi);
    println!("shift Gram deviation {:e}", gram.deviation);
    let h = harmonic_profile(&d4.phi, &[0.0, 1.0, 2.0]);
    println!("h_phi at 0, 1, 2: {h:?}");

    let m0 = LaurentPoly::from_real(0, &D4);
    for t in [0.0, 1.0, 10.0] {
        let p = fourier_product(&m0, 2, t, 30)?;
        println!("phi_hat({t}) ~ {:.12} (tail {:e})", p.value, p.tail);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
