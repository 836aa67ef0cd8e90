// Building and verifying wavelet filter banks on a code space, then using
// them for one-level analysis/synthesis and a packet decomposition.

use wavelab::ifs_filters::{
    analysis, build_indicator, build_roots_of_unity, gram_schmidt_module, multires_decompose,
    multires_reconstruct, synthesis, verify_filter, DecomposeMode,
};
use wavelab::{CylinderFn, IfsSpec, Result, C64};

pub fn run_example() -> Result<()> {
    for n in 2..=4 {
        let spec = IfsSpec::uniform(n)?;
        for (name, bank) in [
            ("roots", build_roots_of_unity(&spec)?),
            ("indicator", build_indicator(&spec)?),
        ] {
            let r = verify_filter(&bank, 5, 1e-13)?;
            println!(
                "N={n} {name:9} orthonormality {:.1e} completeness {:.1e} pass {}",
                r.orthonormality_max, r.completeness, r.pass
            );
        }
    }

    // Weighted indicator bank m_n = 1_[n]/sqrt(p_n).
    let spec = IfsSpec::with_weights(vec![0.2, 0.3, 0.5])?;
    let bank = build_indicator(&spec)?;
    println!(
        "weighted indicator bank passes: {}",
        verify_filter(&bank, 4, 1e-13)?.pass
    );

    let f = CylinderFn::from_fn(&spec, 3, |w| {
        let i = w.index(3) as f64;
        C64::new(i.cos(), 0.1 * i)
    })?;
    let parts = analysis(&bank, &f)?;
    let back = synthesis(&bank, &parts)?;
    println!(
        "one-level reconstruction error {:e}",
        back.sup_distance(&f)?
    );

    let tree = multires_decompose(&bank, &f, 3, DecomposeMode::Packet)?;
    let back = multires_reconstruct(&bank, &tree)?;
    println!(
        "packet tree: {} leaves, energy {:.12} vs {:.12}, error {:e}",
        tree.leaves().len(),
        tree.energy(),
        f.norm_sq(),
        back.sup_distance(&f)?
    );

    // Module Gram-Schmidt from generic generators.
    let spec = IfsSpec::uniform(2)?;
    let g1 = CylinderFn::from_real(&spec, 1, &[1.0, 0.5])?;
    let g2 = CylinderFn::from_real(&spec, 1, &[0.3, -1.0])?;
    let gs = gram_schmidt_module(&spec, &[g1, g2])?;
    println!(
        "Gram-Schmidt bank passes: {}",
        verify_filter(&gs, 4, 1e-12)?.pass
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
