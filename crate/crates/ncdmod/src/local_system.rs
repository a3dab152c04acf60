//! Local system data and meromorphic Deligne extensions.
//!
//! A local system on the complement of the coordinate hyperplanes is
//! given block-wise: each block carries one exponent per axis, with the
//! monodromy around `{z_i = 0}` acting as `e^{-2πi(α_i + N_i)}` for a
//! commuting family of rational nilpotents `N_i`. The Deligne extension
//! places each block on the grid so that `Θ_i = α_i + N_i`: axes with
//! `α_i = 0` contribute the boundary pair of slices with `var_i = id`
//! and `can_i = N_i`, all other axes a single interior slice. The
//! transcendental factor `-1/2πi` relating `N_i` to the actual monodromy
//! logarithm is absorbed formally; every reported dimension and exponent
//! is invariant under a uniform nonzero rescaling of the nilpotents.

use crate::matrix::Matrix;
use crate::module::{Exponent, GridIndex, ModuleError, NCModule, SliceData};
use crate::morphism::direct_sum;
use crate::rat::{is_integer, rat, Rat};
use num::{Signed, Zero};
use std::collections::BTreeMap;

/// One block of a local system: an exponent tuple in `(-1, 0]^n`, a
/// dimension, and one commuting nilpotent per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemBlock {
    pub alpha: Vec<Rat>,
    pub dim: usize,
    pub nilpotents: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSystemSpec {
    pub axes: usize,
    pub blocks: Vec<SystemBlock>,
}

impl LocalSystemSpec {
    /// Rank-one system with the given exponents and no nilpotent part.
    pub fn rank_one(alpha: Vec<Rat>) -> LocalSystemSpec {
        let axes = alpha.len();
        LocalSystemSpec {
            axes,
            blocks: vec![SystemBlock {
                alpha,
                dim: 1,
                nilpotents: vec![Matrix::zeros(1, 1); axes],
            }],
        }
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn validate(&self) -> Result<(), ModuleError> {
        if self.axes == 0 {
            return Err(ModuleError::InvalidSpec("local system needs at least one axis".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for block in &self.blocks {
            if block.dim == 0 {
                return Err(ModuleError::InvalidSpec("zero-dimensional block".into()));
            }
            if block.alpha.len() != self.axes {
                return Err(ModuleError::InvalidSpec("alpha length mismatch".into()));
            }
            for a in &block.alpha {
                if a > &Rat::zero() || a <= &rat(-1) {
                    return Err(ModuleError::InvalidSpec(format!(
                        "exponent {a} outside (-1, 0]"
                    )));
                }
            }
            if !seen.insert(block.alpha.clone()) {
                return Err(ModuleError::InvalidSpec("duplicate alpha tuple".into()));
            }
            if block.nilpotents.len() != self.axes {
                return Err(ModuleError::InvalidSpec("nilpotent count mismatch".into()));
            }
            for n in &block.nilpotents {
                if n.rows() != block.dim || n.cols() != block.dim {
                    return Err(ModuleError::InvalidSpec("nilpotent shape mismatch".into()));
                }
                if !n.is_nilpotent() {
                    return Err(ModuleError::InvalidSpec("block operator is not nilpotent".into()));
                }
            }
            for i in 0..self.axes {
                for j in i + 1..self.axes {
                    if !block.nilpotents[i].commutes_with(&block.nilpotents[j]) {
                        return Err(ModuleError::InvalidSpec(
                            "block nilpotents do not commute".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Uniform rescaling of every nilpotent part; all observable output
    /// downstream is invariant under this.
    pub fn rescale_nilpotents(&self, factor: &Rat) -> LocalSystemSpec {
        assert!(!factor.is_zero(), "rescaling factor must be nonzero");
        LocalSystemSpec {
            axes: self.axes,
            blocks: self
                .blocks
                .iter()
                .map(|b| SystemBlock {
                    alpha: b.alpha.clone(),
                    dim: b.dim,
                    nilpotents: b.nilpotents.iter().map(|n| n.scale(factor)).collect(),
                })
                .collect(),
        }
    }
}

fn deligne_block(axes: usize, block: &SystemBlock) -> NCModule {
    // Axes with α = 0 get both boundary slices; interior axes one slice.
    let boundary: Vec<bool> = block.alpha.iter().map(|a| a.is_zero()).collect();
    let boundary_axes: Vec<usize> = (0..axes).filter(|&i| boundary[i]).collect();
    let mut slices = BTreeMap::new();
    let mut var = BTreeMap::new();
    let mut can = BTreeMap::new();
    for mask in 0u32..(1 << boundary_axes.len()) {
        let mut coords = Vec::with_capacity(axes);
        for i in 0..axes {
            if boundary[i] {
                let pos = boundary_axes.iter().position(|&b| b == i).unwrap();
                if mask & (1 << pos) != 0 {
                    coords.push(Exponent::minus_one());
                } else {
                    coords.push(Exponent::zero());
                }
            } else {
                coords.push(Exponent::new(block.alpha[i].clone()).expect("validated exponent"));
            }
        }
        let index = GridIndex(coords);
        let theta = (0..axes)
            .map(|i| {
                // Θ_i = N_i + (slice exponent): 0 or -1 on boundary
                // slices, α_i on interior ones.
                &block.nilpotents[i] + &Matrix::scalar(block.dim, index.coord(i).value())
            })
            .collect();
        slices.insert(index.clone(), SliceData { dim: block.dim, theta });
        for i in 0..axes {
            if index.coord(i).is_minus_one() {
                var.insert((i, index.clone()), Matrix::identity(block.dim));
                can.insert((i, index.clone()), block.nilpotents[i].clone());
            }
        }
    }
    NCModule::assemble(axes, slices, var, can)
}

/// The meromorphic Deligne extension of a local system, as a grid
/// module localized along every axis.
pub fn deligne_meromorphic(spec: &LocalSystemSpec) -> Result<NCModule, ModuleError> {
    spec.validate()?;
    let mut module = NCModule::zero(spec.axes);
    for block in &spec.blocks {
        module = direct_sum(&module, &deligne_block(spec.axes, block));
    }
    debug_assert!(module.validate().is_empty());
    Ok(module)
}

/// Residue conventions for the one-dimensional dictionary: eigenvalues
/// of the logarithm of monodromy normalized into `[0,1)` or `(-1,0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentInterval {
    ZeroOne,
    MinusOneZero,
}

impl ExponentInterval {
    fn contains(&self, x: &Rat) -> bool {
        match self {
            ExponentInterval::ZeroOne => !x.is_negative() && x < &rat(1),
            ExponentInterval::MinusOneZero => x > &rat(-1) && !x.is_positive(),
        }
    }
}

/// Single-operator residue data: exponent-tagged nilpotent blocks with
/// a declared normalization interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueData {
    pub interval: ExponentInterval,
    pub blocks: Vec<(Rat, Matrix)>,
}

impl ResidueData {
    pub fn validate(&self) -> Result<(), ModuleError> {
        for (alpha, n) in &self.blocks {
            if !self.interval.contains(alpha) {
                return Err(ModuleError::InvalidSpec(format!(
                    "residue exponent {alpha} outside declared interval"
                )));
            }
            if !n.is_nilpotent() {
                return Err(ModuleError::InvalidSpec("residue block not nilpotent".into()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|(_, n)| n.rows()).sum()
    }
}

/// Shifts exponents by integers between the `[0,1)` and `(-1,0]`
/// conventions, keeping nilpotent parts. `0` is fixed by both; applying
/// the conversion twice with swapped targets is the identity.
pub fn rh_convert(data: &ResidueData, target: ExponentInterval) -> ResidueData {
    let blocks = data
        .blocks
        .iter()
        .map(|(alpha, n)| {
            let shifted = match target {
                ExponentInterval::ZeroOne => {
                    if is_integer(alpha) {
                        Rat::zero()
                    } else {
                        crate::rat::frac(alpha)
                    }
                }
                ExponentInterval::MinusOneZero => {
                    if is_integer(alpha) {
                        Rat::zero()
                    } else {
                        crate::rat::frac(alpha) - rat(1)
                    }
                }
            };
            (shifted, n.clone())
        })
        .collect();
    ResidueData { interval: target, blocks }
}
