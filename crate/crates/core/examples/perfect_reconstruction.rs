// A random complex signal through Haar and Daubechies-4 two-channel banks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavelab::circle_filters::{cqf_partner, LaurentPoly};
use wavelab::classic_mra::{analysis_taps, filterbank_roundtrip};
use wavelab::{Result, C64};

const D4: [f64; 4] = [
    0.482_962_913_144_534_1,
    0.836_516_303_737_807_9,
    0.224_143_868_042_013_4,
    -0.129_409_522_551_260_4,
];

pub fn run_example() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let x: Vec<C64> = (0..1024)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();

    let r = std::f64::consts::FRAC_1_SQRT_2;
    let banks = [
        ("Haar", LaurentPoly::from_real(0, &[r, r])),
        ("D4", LaurentPoly::from_real(0, &D4)),
    ];
    for (name, m0) in banks {
        let synth = vec![m0.clone(), cqf_partner(&m0)];
        let rt = filterbank_roundtrip(&x, &analysis_taps(&synth), &synth, 2)?;
        println!(
            "{name}: PR error {:e}, energy error {:e}",
            rt.pr_error, rt.energy_error
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
