use crate::code_space::{weighted_adjoint, weighted_compose, CylinderFn, Word, C64};
use crate::error::{input, Result, WavelabError};

use super::{verify_filter, FilterBank, MatrixField};

const CONNECT_TOL: f64 = 1e-12;

/// `U_jk = S*(conj(m_j) m̃_k)`, the unique unitary field with `m·(U∘σ) = m̃`.
pub fn connecting_unitary(from: &FilterBank, to: &FilterBank) -> Result<MatrixField> {
    if from.spec() != to.spec() {
        return input("banks live on different code spaces");
    }
    for (name, bank) in [("source", from), ("target", to)] {
        let report = verify_filter(bank, bank.depth().max(1), CONNECT_TOL)?;
        if !report.pass {
            return Err(WavelabError::Precondition(format!(
                "{name} bank is not a wavelet filter (orthonormality {:e}, completeness {:e})",
                report.orthonormality_max, report.completeness
            )));
        }
    }
    let entries = from
        .filters()
        .iter()
        .map(|mj| {
            to.filters()
                .iter()
                .map(|mk| weighted_adjoint(mj, mk))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixField::new(from.spec(), entries)
}

/// `m̃_k = Σ_j m_j · (U_jk ∘ σ)`.
pub fn apply_loop_group(bank: &FilterBank, u: &MatrixField) -> Result<FilterBank> {
    if u.dim() != bank.len() {
        return input(format!(
            "a {}x{} field cannot act on {} filters",
            u.dim(),
            u.dim(),
            bank.len()
        ));
    }
    if u.spec() != bank.spec() {
        return input("field and bank live on different code spaces");
    }
    let n = bank.len();
    let filters = (0..n)
        .map(|k| {
            let mut acc = weighted_compose(bank.filter(0), u.entry(0, k))?;
            for j in 1..n {
                acc = acc.add(&weighted_compose(bank.filter(j), u.entry(j, k))?)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    FilterBank::new(bank.spec(), filters)
}

/// `M_jk = √p_k · m_j ∘ τ_k`; unitary-valued exactly when the bank is a
/// wavelet filter.
pub fn matrix_field_m(bank: &FilterBank) -> Result<MatrixField> {
    let spec = bank.spec();
    let n = spec.n();
    let entries = bank
        .filters()
        .iter()
        .map(|m| {
            (1..=n)
                .map(|k| {
                    Ok(m.precompose_branch(k)?
                        .scale(C64::new(spec.weight(k).sqrt(), 0.0)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixField::new(spec, entries)
}

/// `max_g ‖Σ_n S_n(f · S_n* g) − (f∘σ)·g‖∞` over indicator probes `g`.
pub fn endomorphism_check(bank: &FilterBank, f: &CylinderFn, probe_depth: usize) -> Result<f64> {
    let spec = bank.spec();
    if f.spec() != spec {
        return input("function and bank live on different code spaces");
    }
    let sf = f.compose_sigma()?;
    let cells = spec.cells(probe_depth)?;
    let mut worst: f64 = 0.0;
    for i in 0..cells {
        let g = CylinderFn::indicator(spec, &Word::from_index(spec.n(), probe_depth, i))?;
        let mut lhs: Option<CylinderFn> = None;
        for m in bank.filters() {
            let inner = f.multiply(&weighted_adjoint(m, &g)?)?;
            let term = weighted_compose(m, &inner)?;
            lhs = Some(match lhs {
                Some(a) => a.add(&term)?,
                None => term,
            });
        }
        let rhs = sf.multiply(&g)?;
        worst = worst.max(lhs.expect("nonempty bank").sup_distance(&rhs)?);
    }
    Ok(worst)
}
