// Path-space moments on the solenoid and the unitary dilation of `S_m`.

use wavelab::ifs_filters::build_indicator;
use wavelab::solenoid::{
    axiom_check, dilation_check, marginal_check, measure_change_check, moment, w0_isometry_check,
    HarmonicChoice, MomentSpec, PathFn, SolenoidMeasure,
};
use wavelab::{CylinderFn, IfsSpec, Result};

pub fn run_example() -> Result<()> {
    let spec = IfsSpec::uniform(2)?;
    let w = CylinderFn::from_real(&spec, 2, &[1.5, 0.5, 0.3, 1.7])?;
    let f0 = CylinderFn::from_real(&spec, 1, &[1.0, -2.0])?;
    let f1 = CylinderFn::from_real(&spec, 2, &[0.5, 1.0, 0.0, 2.0])?;

    let ms = MomentSpec {
        spec: spec.clone(),
        w: w.clone(),
        h: HarmonicChoice::Auto(wavelab::solenoid::AutoTag::Auto),
        coords: vec![f0.clone(), f1.clone()],
    };
    let r = moment(&ms)?;
    println!(
        "moment {} (harmonic residual {:e})",
        r.value, r.harmonic_residual
    );

    let measure = SolenoidMeasure::from_weight(w)?;
    let ones = measure.moment(&vec![CylinderFn::one(&spec); 3])?;
    println!("total mass {ones}");
    let (a, b) = marginal_check(&measure, &f0, 3)?;
    println!("marginal: {a} vs {b}");
    let probe = PathFn::product(&spec, &[f0.clone(), f1.clone()])?;
    let (a, b) = measure_change_check(&measure, &probe)?;
    println!("measure change: {a} vs {b}");
    let (a, b) = w0_isometry_check(&measure, &f0, &f1)?;
    println!("W_0 isometry: {a} vs {b}");

    // Indicator filter: m vanishes off one cylinder, so negative powers go through the adjoint.
    let m = build_indicator(&spec)?.filter(0).clone();
    for n in -2..=2 {
        let d = dilation_check(&m, &f0, &f1, n)?;
        println!("n={n:2}: residual {:e} via {:?}", d.residual, d.route);
    }
    let ax = axiom_check(&m, &f0, &f1)?;
    println!("axioms ({:?}): {:e}", ax.form, ax.max());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
