use serde::{Deserialize, Serialize};

use crate::code_space::CylinderFn;
use crate::error::{input, Result};

use super::{analysis, synthesis, FilterBank};

/// Which parts are split again at the next level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecomposeMode {
    /// Every part is split (full wavelet packet tree).
    #[default]
    Packet,
    /// Only the part of the first filter is split again.
    SingleBranch,
}

/// Output of [`multires_decompose`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientTree {
    Leaf(CylinderFn),
    Node(Vec<CoefficientTree>),
}

impl CoefficientTree {
    pub fn leaves(&self) -> Vec<&CylinderFn> {
        match self {
            CoefficientTree::Leaf(f) => vec![f],
            CoefficientTree::Node(children) => children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    /// `Σ ‖leaf‖²`.
    pub fn energy(&self) -> f64 {
        self.leaves().iter().map(|f| f.norm_sq()).sum()
    }
}

pub fn multires_decompose(
    bank: &FilterBank,
    f: &CylinderFn,
    levels: usize,
    mode: DecomposeMode,
) -> Result<CoefficientTree> {
    if levels > f.depth() {
        return input(format!(
            "{levels} levels requested for a function of depth {}",
            f.depth()
        ));
    }
    split(bank, f, levels, mode)
}

fn split(
    bank: &FilterBank,
    f: &CylinderFn,
    levels: usize,
    mode: DecomposeMode,
) -> Result<CoefficientTree> {
    if levels == 0 {
        return Ok(CoefficientTree::Leaf(f.clone()));
    }
    let parts = analysis(bank, f)?;
    let children = parts
        .into_iter()
        .enumerate()
        .map(|(i, part)| match mode {
            DecomposeMode::SingleBranch if i > 0 => Ok(CoefficientTree::Leaf(part)),
            _ => split(bank, &part, levels - 1, mode),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientTree::Node(children))
}

pub fn multires_reconstruct(bank: &FilterBank, tree: &CoefficientTree) -> Result<CylinderFn> {
    match tree {
        CoefficientTree::Leaf(f) => Ok(f.clone()),
        CoefficientTree::Node(children) => {
            let parts = children
                .iter()
                .map(|c| multires_reconstruct(bank, c))
                .collect::<Result<Vec<_>>>()?;
            synthesis(bank, &parts)
        }
    }
}
