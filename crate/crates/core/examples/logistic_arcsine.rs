// The arcsine law is invariant under `x ↦ 4x(1 − x)`. The adjoint report
// prints three pairings side by side without a verdict.

use wavelab::geometry::{
    arcsine_moment, logistic_adjoint_compare, logistic_invariance, ChebyshevRule, Poly,
};
use wavelab::Result;

pub fn run_example() -> Result<()> {
    let rule = ChebyshevRule::new(64)?;
    let worst = (0..64)
        .map(|k| (rule.integrate(|x| x.powi(k as i32)) - arcsine_moment(k)).abs())
        .fold(0.0, f64::max);
    println!("Chebyshev rule vs C(2k,k)/4^k: {worst:e}");

    let inv = logistic_invariance(8, 64)?;
    println!("invariance residual up to degree 8: {:e}", inv.max);

    let cases = [
        ("1", "1", Poly(vec![1.0]), Poly(vec![1.0])),
        ("x", "x", Poly::monomial(1), Poly::monomial(1)),
        ("x^2", "x", Poly::monomial(2), Poly::monomial(1)),
    ];
    for (fname, gname, f, g) in cases {
        let r = logistic_adjoint_compare(&f, &g, 32)?;
        println!(
            "f={fname}, g={gname}: <Ff,g> = {:.15}, <f,Sg> = {:.15}, <S*f,g> = {:.15}",
            r.branch_average, r.composition, r.mean_antiderivative
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
