//! The holonomic duality functor on the grid model.
//!
//! Interior exponents reflect through `ν ↦ -1 - ν` (inverting the
//! monodromy eigenvalue `e^{-2πiν}`), the boundary slices stay in place
//! with their roles exchanged: the dual of `can` is built from `var`
//! and vice versa,
//!
//! ```text
//!   Θ_i^D - δ(ν)_i = -(Θ_i - ν_i)ᵀ,   can_i^D = -var_iᵀ,   var_i^D = can_iᵀ.
//! ```
//!
//! With these signs `D` is contravariant, exact, and `D∘D` is the
//! signed identity `(-1)^{#{i : ν_i = -1}}`, which the category theory
//! requires but never observes. The convention is pinned by the classic
//! disk pictures: the structure sheaf and the delta module are
//! self-dual, and the dual of the meromorphic extension is the
//! extension by zero.

use crate::matrix::Matrix;
use crate::module::{GridIndex, ModuleError, NCModule, SliceData};
use crate::morphism::NCMorphism;
use crate::rat::rat;
use std::collections::BTreeMap;

fn reflect_index(index: &GridIndex) -> GridIndex {
    GridIndex(index.0.iter().map(|e| e.dual_reflect()).collect())
}

/// The dual module.
pub fn dual(module: &NCModule) -> Result<NCModule, ModuleError> {
    module.require_valid()?;
    let axes = module.axes();
    let mut slices = BTreeMap::new();
    let mut var = BTreeMap::new();
    let mut can = BTreeMap::new();
    for (index, slice) in module.slices() {
        let dual_index = reflect_index(index);
        let theta = (0..axes)
            .map(|axis| {
                let nu = index.coord(axis).value();
                let dual_nu = dual_index.coord(axis).value();
                let nilpotent = &slice.theta[axis] - &Matrix::scalar(slice.dim, nu);
                &Matrix::scalar(slice.dim, dual_nu) - &nilpotent.transpose()
            })
            .collect();
        slices.insert(dual_index.clone(), SliceData { dim: slice.dim, theta });
        for axis in 0..axes {
            if index.coord(axis).is_minus_one() {
                // The original pair at ν (boundary fixed) dualizes in place.
                var.insert((axis, dual_index.clone()), module.can(axis, index).transpose());
                can.insert(
                    (axis, dual_index.clone()),
                    -&module.var(axis, index).transpose(),
                );
            }
        }
    }
    Ok(NCModule::assemble(axes, slices, var, can))
}

/// Contravariant action on morphisms: `D(f) : D(N) → D(M)` is the
/// slice-wise transpose at the reflected index.
pub fn dual_morphism(f: &NCMorphism) -> Result<NCMorphism, ModuleError> {
    let dual_source = dual(f.target())?;
    let dual_target = dual(f.source())?;
    let mut maps = BTreeMap::new();
    for index in dual_source.indices().chain(dual_target.indices()) {
        maps.insert(index.clone(), f.map_at(&reflect_index(index)).transpose());
    }
    Ok(NCMorphism::new(dual_source, dual_target, maps))
}

/// The natural isomorphism `M → D(D(M))`: the signed identity with sign
/// `(-1)^{#{i : ν_i = -1}}` per slice.
pub fn double_dual_iso(module: &NCModule) -> Result<NCMorphism, ModuleError> {
    let double = dual(&dual(module)?)?;
    let mut maps = BTreeMap::new();
    for (index, slice) in module.slices() {
        let minus_ones = (0..module.axes())
            .filter(|&axis| index.coord(axis).is_minus_one())
            .count();
        let sign = if minus_ones % 2 == 0 { rat(1) } else { rat(-1) };
        maps.insert(index.clone(), Matrix::scalar(slice.dim, &sign));
    }
    Ok(NCMorphism::new(module.clone(), double, maps))
}
