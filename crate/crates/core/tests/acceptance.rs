// Acceptance criteria 1-11. Runs without the libtest harness so that one
// PASS/FAIL line per criterion is always printed. Each criterion also fails
// when it exceeds its wall-time budget.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wavelab::circle_filters::{
    build_m_matrix, cqf_complete, cqf_partner, cuntz_residuals, periodicity_residual,
    shift_relation_residual, unit_circle_grid, unitarity_residual, BlaschkeFactor, Convention,
    LaurentPoly, Pole, RationalMatrixProduct,
};
use wavelab::classic_mra::{
    analysis_taps, cascade, filterbank_roundtrip, shift_orthonormality, CascadeSeed,
};
use wavelab::geometry::{
    arcsine_moment, chaos_game, invariance_from_samples, logistic_invariance, AffineIfs,
    ChebyshevRule,
};
use wavelab::ifs_filters::{
    apply_loop_group, build_indicator, build_roots_of_unity, connecting_unitary, verify_filter,
    FilterBank, MatrixField,
};
use wavelab::rkhs::{
    preimage_orthogonality, product_kernel, refinement_residual, FinitePointSet, KernelMatrix,
};
use wavelab::solenoid::{
    dilation_check, marginal_check, measure_change_check, w0_isometry_check, PathFn,
    SolenoidMeasure,
};
use wavelab::{CylinderFn, IfsSpec, Result, C64};

const C1_TOL: f64 = 1e-13;
const C1_DEPTH: usize = 5;
const C1_SECS: f64 = 5.0;

const C2_TOL: f64 = 1e-12;
const C2_TRIALS: usize = 200;
const C2_SECS: f64 = 10.0;

const C3_FOURIER_TOL: f64 = 1e-13;
const C3_ACTION_TOL: f64 = 1e-15;
const C3_ROUND_TRIP_TOL: f64 = 1e-12;
const C3_SECS: f64 = 2.0;

const C4_TOL: f64 = 1e-13;
const C4_GRID: usize = 256;
const C4_SECS: f64 = 2.0;

const C5_TOL: f64 = 1e-12;
const C5_GRID: usize = 256;
const C5_PRODUCTS: usize = 40;
const C5_SECS: f64 = 2.0;

const C6_TOL: f64 = 1e-10;
const C6_LEN: usize = 1024;
const C6_SECS: f64 = 1.0;

const C7_CONVERGED: f64 = 1e-6;
const C7_ITERS: usize = 20;
const C7_RESOLUTION: usize = 1024;
const C7_INTEGRAL_TOL: f64 = 1e-9;
const C7_GRAM_TOL: f64 = 1e-3;
const C7_SECS: f64 = 10.0;

const C8_TOL: f64 = 1e-12;
const C8_SPECS: usize = 50;
const C8_SECS: f64 = 5.0;

const C9_REFINEMENT_TOL: f64 = 1e-14;
const C9_PRODUCT_TOL: f64 = 1e-10;
const C9_TERMS: usize = 30;
const C9_SECS: f64 = 2.0;

const C10_INVARIANCE_TOL: f64 = 1e-12;
const C10_MOMENT_TOL: f64 = 1e-14;
const C10_Z: f64 = 4.0;
const C10_SAMPLES: usize = 1_000_000;
const C10_SEED: u64 = 7;
const C10_SECS: f64 = 30.0;

const C11_SECS: f64 = 1.0;

const D4: [f64; 4] = [
    0.482_962_913_144_534_1,
    0.836_516_303_737_807_9,
    0.224_143_868_042_013_4,
    -0.129_409_522_551_260_4,
];

type Verdict = Result<(bool, String)>;
type Criterion = (u32, &'static str, f64, fn() -> Verdict);

fn random_spec(rng: &mut ChaCha8Rng, n: usize) -> Result<IfsSpec> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    IfsSpec::with_weights(raw.iter().map(|w| w / total).collect())
}

fn random_fn(rng: &mut ChaCha8Rng, spec: &IfsSpec, depth: usize) -> Result<CylinderFn> {
    let cells = spec.cells(depth)?;
    let values = (0..cells)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    CylinderFn::from_values(spec, depth, values)
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    let a = DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    a.qr().q()
}

fn random_field(rng: &mut ChaCha8Rng, spec: &IfsSpec, depth: usize) -> Result<MatrixField> {
    let n = spec.n();
    let cells = spec.cells(depth)?;
    let us: Vec<DMatrix<C64>> = (0..cells).map(|_| random_unitary(rng, n)).collect();
    let entries = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    CylinderFn::from_values(spec, depth, us.iter().map(|u| u[(j, k)]).collect())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixField::new(spec, entries)
}

fn bank_distance(a: &FilterBank, b: &FilterBank) -> Result<f64> {
    a.filters()
        .iter()
        .zip(b.filters())
        .try_fold(0.0, |acc: f64, (x, y)| Ok(acc.max(x.sup_distance(y)?)))
}

fn c1() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut all = true;
    for n in 2..=4 {
        let spec = IfsSpec::uniform(n)?;
        for bank in [build_roots_of_unity(&spec)?, build_indicator(&spec)?] {
            let r = verify_filter(&bank, C1_DEPTH, C1_TOL)?;
            worst = worst.max(r.orthonormality_max).max(r.completeness);
            all &= r.pass;
        }
    }
    Ok((
        all && worst < C1_TOL,
        format!("max residual {worst:.2e} < {C1_TOL:e}"),
    ))
}

fn c2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = [0.0f64; 7];
    for _ in 0..C2_TRIALS {
        let n = rng.random_range(2..=3);
        let spec = random_spec(&mut rng, n)?;
        let d = rng.random_range(0..=3);
        let f = random_fn(&mut rng, &spec, d)?;
        let dg = rng.random_range(0..=3);
        let g = random_fn(&mut rng, &spec, dg)?;
        let dh = rng.random_range(0..=4);
        let h = random_fn(&mut rng, &spec, dh)?;

        // S*((f∘σ)·h) = f·S*(h)
        let lhs = f.compose_sigma()?.multiply(&h)?.adjoint_sigma();
        worst[0] = worst[0].max(lhs.sup_distance(&f.multiply(&h.adjoint_sigma())?)?);
        // E_σ(h·(g∘σ)) = (g∘σ)·E_σ(h)
        let gs = g.compose_sigma()?;
        let lhs = h.multiply(&gs)?.conditional_expectation()?;
        worst[1] = worst[1].max(lhs.sup_distance(&gs.multiply(&h.conditional_expectation()?)?)?);
        // S*(h·E_σ k) = (S*h)(S*k)
        let dk = rng.random_range(0..=4);
        let k = random_fn(&mut rng, &spec, dk)?;
        let lhs = h.multiply(&k.conditional_expectation()?)?.adjoint_sigma();
        worst[2] =
            worst[2].max(lhs.sup_distance(&h.adjoint_sigma().multiply(&k.adjoint_sigma())?)?);
        // S*S = id
        worst[3] = worst[3].max(f.compose_sigma()?.adjoint_sigma().sup_distance(&f)?);
        // E_σ² = E_σ and ⟨E_σ h, k⟩ = ⟨h, E_σ k⟩
        let eh = h.conditional_expectation()?;
        worst[4] = worst[4].max(eh.conditional_expectation()?.sup_distance(&eh)?);
        let a = eh.inner_product(&k)?;
        let b = h.inner_product(&k.conditional_expectation()?)?;
        worst[5] = worst[5].max((a - b).norm());
        // ∫ f∘σ = ∫ f
        worst[6] = worst[6].max((f.compose_sigma()?.integrate() - f.integrate()).norm());
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    Ok((
        max < C2_TOL,
        format!("{C2_TRIALS} trials per identity, max residual {max:.2e} < {C2_TOL:e}"),
    ))
}

fn c3() -> Verdict {
    let mut fourier: f64 = 0.0;
    let mut action: f64 = 0.0;
    let mut round: f64 = 0.0;
    for n in 2..=4 {
        let spec = IfsSpec::uniform(n)?;
        let ind = build_indicator(&spec)?;
        let roots = build_roots_of_unity(&spec)?;
        let u = connecting_unitary(&ind, &roots)?;
        let f = DMatrix::from_fn(n, n, |j, k| {
            C64::from_polar(
                1.0 / (n as f64).sqrt(),
                2.0 * PI * (((j + 1) * (k + 1)) % n) as f64 / n as f64,
            )
        });
        fourier = fourier.max(u.distance(&MatrixField::constant(&spec, &f)?)?);
        action = action.max(bank_distance(&apply_loop_group(&ind, &u)?, &roots)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let n = rng.random_range(2..=3);
        let spec = IfsSpec::uniform(n)?;
        let bank = apply_loop_group(
            &build_roots_of_unity(&spec)?,
            &random_field(&mut rng, &spec, 1)?,
        )?;
        let u = random_field(&mut rng, &spec, 2)?;
        let v = random_field(&mut rng, &spec, 1)?;
        let two_steps = apply_loop_group(&apply_loop_group(&bank, &u)?, &v)?;
        let product = apply_loop_group(&bank, &u.mul(&v)?)?;
        round = round.max(bank_distance(&two_steps, &product)?);
        let back = apply_loop_group(&apply_loop_group(&bank, &u)?, &u.adjoint())?;
        round = round.max(bank_distance(&back, &bank)?);
    }
    Ok((
        fourier < C3_FOURIER_TOL && action < C3_ACTION_TOL && round < C3_ROUND_TRIP_TOL,
        format!("Fourier {fourier:.2e}, action {action:.2e}, group law/inverse {round:.2e}"),
    ))
}

fn c4() -> Verdict {
    let grid = unit_circle_grid(C4_GRID);
    let r = SQRT_2.recip();
    let haar = vec![
        LaurentPoly::from_real(0, &[r, r]),
        LaurentPoly::from_real(0, &[r, -r]),
    ];
    let exact = cuntz_residuals(&haar, 2, Convention::Averaged)?.max();
    let d4 = LaurentPoly::from_real(0, &D4);
    let mut unit: f64 = 0.0;
    let mut shift: f64 = 0.0;
    for bank in [haar, vec![d4.clone(), cqf_partner(&d4)]] {
        let m = build_m_matrix(&bank, Convention::Averaged);
        unit = unit.max(unitarity_residual(&m, &grid).max);
        shift = shift.max(shift_relation_residual(&m, &grid).max);
    }
    let cqf = unitarity_residual(
        &cqf_complete(&LaurentPoly::from_real(0, &[0.5, 0.5]), Convention::UnitSum),
        &grid,
    )
    .max;
    Ok((
        exact == 0.0 && unit < C4_TOL && shift < C4_TOL && cqf < C4_TOL,
        format!(
            "Haar coefficients {exact:e}, unitarity {unit:.2e}, shift {shift:.2e}, CQF {cqf:.2e}"
        ),
    ))
}

fn c5() -> Verdict {
    let grid = unit_circle_grid(C5_GRID);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut unit: f64 = 0.0;
    let mut periodic: f64 = 0.0;
    for i in 0..C5_PRODUCTS {
        let n = 2 + i % 2;
        let count = rng.random_range(1..=5);
        let factors = (0..count)
            .map(|_| {
                let theta = rng.random_range(0.0..2.0 * PI);
                let a = match rng.random_range(0..4) {
                    0 => Pole::Finite(C64::new(0.0, 0.0)),
                    1 => Pole::Finite(C64::from_polar(0.5, theta)),
                    2 => Pole::Finite(C64::from_polar(2.0, theta)),
                    _ => Pole::Infinity,
                };
                let v = DVector::from_fn(n, |_, _| {
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                });
                let p = (&v * v.adjoint()).unscale(v.norm_squared());
                BlaschkeFactor::new(a, p, n)
            })
            .collect::<Result<Vec<_>>>()?;
        let prod = RationalMatrixProduct::new(random_unitary(&mut rng, n), factors)?;
        unit = unit.max(unitarity_residual(&prod, &grid).max);
        periodic = periodic.max(periodicity_residual(&prod, n, &grid).max);
    }
    Ok((
        unit < C5_TOL && periodic < C5_TOL,
        format!("{C5_PRODUCTS} products, unitarity {unit:.2e}, periodicity {periodic:.2e}"),
    ))
}

fn c6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let x: Vec<C64> = (0..C6_LEN)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let r = SQRT_2.recip();
    let mut pr: f64 = 0.0;
    let mut energy: f64 = 0.0;
    for m0 in [
        LaurentPoly::from_real(0, &[r, r]),
        LaurentPoly::from_real(0, &D4),
    ] {
        let bank = vec![m0.clone(), cqf_partner(&m0)];
        let rt = filterbank_roundtrip(&x, &analysis_taps(&bank), &bank, 2)?;
        pr = pr.max(rt.pr_error);
        energy = energy.max(rt.energy_error);
    }
    Ok((
        pr < C6_TOL && energy < C6_TOL,
        format!("PR {pr:.2e}, energy {energy:.2e}"),
    ))
}

fn c7() -> Verdict {
    let r = SQRT_2.recip();
    let haar = cascade(&[r, r], 2, 3, 64, CascadeSeed::default())?;
    let haar_exact = haar.residuals.iter().all(|&v| v == 0.0);
    let d4 = cascade(&D4, 2, C7_ITERS, C7_RESOLUTION, CascadeSeed::default())?;
    let hit = d4.residuals.iter().position(|&v| v < C7_CONVERGED);
    let integral = (d4.integral() - 1.0).abs();
    let gram = shift_orthonormality(&d4.phi).deviation;
    Ok((
        haar_exact && hit.is_some() && integral < C7_INTEGRAL_TOL && gram < C7_GRAM_TOL,
        format!(
            "Haar exact {haar_exact}, D4 below {C7_CONVERGED:e} at iteration {}, |integral - 1| {integral:.2e}, Gram {gram:.2e}",
            hit.map_or("none".to_string(), |i| (i + 1).to_string())
        ),
    ))
}

fn c8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..C8_SPECS {
        let n = rng.random_range(2..=3);
        let spec = random_spec(&mut rng, n)?;
        let m = build_indicator(&spec)?
            .filter(rng.random_range(0..n))
            .clone();
        let measure = SolenoidMeasure::from_weight(m.abs2())?;
        let k = rng.random_range(0..=3);
        let ones = measure.moment(&vec![CylinderFn::one(&spec); k + 1])?;
        worst = worst.max((ones - 1.0).norm());

        let f0 = random_fn(&mut rng, &spec, 2)?;
        let f1 = random_fn(&mut rng, &spec, 1)?;
        let (a, b) = marginal_check(&measure, &f0, k)?;
        worst = worst.max((a - b).norm());
        let probe = PathFn::product(&spec, &[f0.clone(), f1.clone()])?;
        let (a, b) = measure_change_check(&measure, &probe)?;
        worst = worst.max((a - b).norm());
        let (a, b) = w0_isometry_check(&measure, &f0, &f1)?;
        worst = worst.max((a - b).norm());
        for p in -2..=2 {
            worst = worst.max(dilation_check(&m, &f0, &f1, p)?.residual);
        }
    }
    Ok((
        worst < C8_TOL,
        format!("{C8_SPECS} specs, max residual {worst:.2e}"),
    ))
}

fn c9() -> Verdict {
    let ps =
        FinitePointSet::squaring_grid(&[C64::from_polar(0.5, 0.7), C64::from_polar(0.2, -2.1)])?;
    let k = KernelMatrix::szego(&ps)?;
    let filters = vec![ps.sample(|_| C64::new(1.0, 0.0)), ps.sample(|z| z)];
    let refinement = refinement_residual(&k, &filters, &ps)?;
    let product = product_kernel(&filters, &ps, C9_TERMS)?
        .kernel
        .max_distance(&k);

    // Fourth roots of unity are exact in floating point.
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let roots = FinitePointSet::new(vec![one, i, -one, -i], vec![0, 2, 0, 2])?;
    let data = vec![roots.sample(|_| one), roots.sample(|z| z)];
    let pre = preimage_orthogonality(&data, &roots)?.max;
    Ok((
        ps.len() == 12 && refinement < C9_REFINEMENT_TOL && product < C9_PRODUCT_TOL && pre == 0.0,
        format!(
            "{} points, refinement {refinement:.2e}, product kernel {product:.2e}, preimage {pre:e}",
            ps.len()
        ),
    ))
}

fn c10() -> Verdict {
    let inv = logistic_invariance(8, 64)?.max;
    let rule = ChebyshevRule::new(64)?;
    let moments = (0..64)
        .map(|k| (rule.integrate(|x| x.powi(k as i32)) - arcsine_moment(k)).abs())
        .fold(0.0, f64::max);

    let tri = AffineIfs::sierpinski();
    let pts = chaos_game(&tri, C10_SAMPLES, C10_SEED)?;
    let rep = invariance_from_samples(&tri, &pts, 1)?;
    let mean_z = rep
        .checks
        .iter()
        .filter(|c| c.statistic.starts_with("E["))
        .map(|c| c.z.abs())
        .fold(0.0, f64::max);

    let unit = AffineIfs::new(vec![vec![2]], vec![vec![0], vec![1]], None)?;
    let pts = chaos_game(&unit, C10_SAMPLES, C10_SEED)?;
    let unit_z = invariance_from_samples(&unit, &pts, 2)?.max_abs_z;
    Ok((
        inv < C10_INVARIANCE_TOL && moments < C10_MOMENT_TOL && mean_z < C10_Z && unit_z < C10_Z,
        format!(
            "invariance {inv:.2e}, moments {moments:.2e}, Sierpinski mean |z| {mean_z:.2}, binary |z| {unit_z:.2}"
        ),
    ))
}

fn cli(args: &[&str]) -> i32 {
    let mut out = Vec::new();
    let mut err = Vec::new();
    wavelab::cli::run(
        std::iter::once("wavelab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    )
}

fn c11() -> Verdict {
    let dir = tempfile::tempdir()?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    std::fs::write(
        p("bank.json"),
        r#"{"spec":{"N":2},"filters":[{"N":2,"depth":0,"values":[[1,0]]},{"N":2,"depth":0,"values":[[1,0]]}]}"#,
    )?;
    std::fs::write(
        p("g.json"),
        r#"{"entries":[[{"min_degree":0,"coeffs":[[2,0]]},{"min_degree":0,"coeffs":[]}],[{"min_degree":0,"coeffs":[]},{"min_degree":0,"coeffs":[[1,0]]}]]}"#,
    )?;
    let r = SQRT_2.recip();
    std::fs::write(
        p("haar.json"),
        format!(
            r#"[{{"min_degree":0,"coeffs":[[{r},0],[{r},0]]}},{{"min_degree":0,"coeffs":[[{r},0],[{},0]]}}]"#,
            -r
        ),
    )?;
    std::fs::write(p("taps.json"), "[0.5, 0.5]")?;
    let codes = [
        cli(&["ifs", "verify-filter", "--bank", &p("bank.json")]),
        cli(&[
            "circle",
            "loop-act",
            "--g",
            &p("g.json"),
            "--filters",
            &p("haar.json"),
        ]),
        cli(&["mra", "cascade", "--taps", &p("taps.json")]),
    ];
    Ok((codes == [1, 1, 1], format!("exit codes {codes:?}")))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "Cuntz filter verification", C1_SECS, c1),
        (2, "operator identities", C2_SECS, c2),
        (3, "loop group", C3_SECS, c3),
        (4, "circle case", C4_SECS, c4),
        (5, "Blaschke synthesis", C5_SECS, c5),
        (6, "perfect reconstruction", C6_SECS, c6),
        (7, "cascade", C7_SECS, c7),
        (8, "solenoid", C8_SECS, c8),
        (9, "kernels", C9_SECS, c9),
        (10, "geometry", C10_SECS, c10),
        (11, "negative controls", C11_SECS, c11),
    ];
    let mut failed = 0;
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && secs < budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id:2} {:4} {name}: {detail} ({secs:.2} s, budget {budget} s)",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
