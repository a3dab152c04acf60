//! Divisor localization: the functor making `z_i` act invertibly.
//!
//! Localizing along axis `i` replaces the `ν_i = -1` slices by copies of
//! the matching `ν_i = 0` slices: the new slice carries `var_i = id`,
//! `can_i = Θ_i` (of the 0 slice) and `Θ_i - (-1) = Θ_i(0 slice)`, so
//! `z_i` becomes an isomorphism there. The unit `M → M(*Z_i)` is the
//! identity away from the `-1` slices and `var_i` on them. The functor
//! is exact and idempotent on the nose.

use crate::matrix::Matrix;
use crate::module::{ModuleError, NCModule, SliceData};
use crate::morphism::NCMorphism;
use std::collections::BTreeMap;

fn localize_axis(module: &NCModule, axis: usize) -> (NCModule, NCMorphism) {
    let axes = module.axes();
    let mut slices = BTreeMap::new();
    let mut var = BTreeMap::new();
    let mut can = BTreeMap::new();

    for (index, slice) in module.slices() {
        if index.coord(axis).is_minus_one() {
            continue;
        }
        slices.insert(index.clone(), slice.clone());
        for other in 0..axes {
            if index.coord(other).is_minus_one() {
                var.insert((other, index.clone()), module.var(other, index));
                can.insert((other, index.clone()), module.can(other, index));
            }
        }
    }

    // Fresh -1 slices copied from the 0 side.
    for (index, slice) in module.slices() {
        if !index.coord(axis).is_zero() {
            continue;
        }
        let down = index.with_coord(axis, crate::module::Exponent::minus_one());
        let theta_axis = slice.theta[axis].clone();
        let theta = (0..axes)
            .map(|other| {
                if other == axis {
                    &theta_axis - &Matrix::identity(slice.dim)
                } else {
                    slice.theta[other].clone()
                }
            })
            .collect();
        slices.insert(down.clone(), SliceData { dim: slice.dim, theta });
        var.insert((axis, down.clone()), Matrix::identity(slice.dim));
        can.insert((axis, down.clone()), theta_axis);
        for other in 0..axes {
            if other != axis && down.coord(other).is_minus_one() {
                // Maps between copied slices are the copied maps.
                var.insert((other, down.clone()), module.var(other, index));
                can.insert((other, down.clone()), module.can(other, index));
            }
        }
    }

    let localized = NCModule::assemble(axes, slices, var, can);
    let mut unit_maps = BTreeMap::new();
    for index in module.indices() {
        let m = if index.coord(axis).is_minus_one() {
            module.var(axis, index)
        } else {
            Matrix::identity(module.dim(index))
        };
        unit_maps.insert(index.clone(), m);
    }
    let unit = NCMorphism::new(module.clone(), localized.clone(), unit_maps);
    (localized, unit)
}

/// Localizes along every axis in `axes` (deduplicated, ascending) and
/// returns the localized module with the unit morphism.
pub fn localize(module: &NCModule, axes: &[usize]) -> Result<(NCModule, NCMorphism), ModuleError> {
    module.require_valid()?;
    for &axis in axes {
        if axis >= module.axes() {
            return Err(ModuleError::InvalidSpec(format!(
                "axis {} out of range (module has {})",
                axis + 1,
                module.axes()
            )));
        }
    }
    let mut sorted: Vec<usize> = axes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut current = module.clone();
    let mut unit = NCMorphism::identity(module);
    for axis in sorted {
        let (next, step) = localize_axis(&current, axis);
        unit = NCMorphism::compose(&step, &unit);
        current = next;
    }
    Ok((current, unit))
}

/// Functorial action of localization on a morphism.
pub fn localize_morphism(f: &NCMorphism, axes: &[usize]) -> Result<NCMorphism, ModuleError> {
    let (loc_source, _) = localize(f.source(), axes)?;
    let (loc_target, _) = localize(f.target(), axes)?;
    let mut sorted: Vec<usize> = axes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut maps = BTreeMap::new();
    for index in loc_source.indices().chain(loc_target.indices()) {
        // The localized map at ν copies f from the index with every
        // localized -1 coordinate raised to 0.
        let mut origin = index.clone();
        for &axis in &sorted {
            if origin.coord(axis).is_minus_one() {
                origin = origin.up(axis);
            }
        }
        maps.insert(index.clone(), f.map_at(&origin));
    }
    Ok(NCMorphism::new(loc_source, loc_target, maps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::module::{Exponent, GridIndex};
    use crate::rat::rat;

    #[test]
    fn structure_sheaf_localizes_to_meromorphic_model() {
        let o = NCModule::structure_sheaf(1);
        let (loc, unit) = localize(&o, &[0]).unwrap();
        assert!(loc.validate().is_empty());
        let neg = GridIndex(vec![Exponent::minus_one()]);
        let zero = GridIndex(vec![Exponent::zero()]);
        assert_eq!(loc.dim(&neg), 1);
        assert_eq!(loc.dim(&zero), 1);
        assert!(loc.var(0, &neg).is_identity());
        assert!(loc.can(0, &neg).is_zero());
        assert_eq!(loc.theta(0, &neg), Matrix::scalar(1, &rat(-1)));
        assert!(unit.validate().is_empty());
        assert!(unit.is_mono());
    }

    #[test]
    fn delta_module_localizes_to_zero() {
        let (loc, unit) = localize(&NCModule::delta(), &[0]).unwrap();
        assert!(loc.is_zero());
        assert!(unit.is_zero());
    }

    #[test]
    fn localization_is_idempotent() {
        let o = NCModule::structure_sheaf(2);
        let (loc1, _) = localize(&o, &[0, 1]).unwrap();
        let (loc2, unit2) = localize(&loc1, &[0, 1]).unwrap();
        assert_eq!(loc1, loc2);
        assert!(unit2.is_iso());
    }

    #[test]
    fn localization_order_does_not_matter() {
        let o = NCModule::structure_sheaf(2);
        let (a, _) = localize(&o, &[0, 1]).unwrap();
        let (b, _) = localize(&localize(&o, &[1]).unwrap().0, &[0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn localized_morphism_of_identity_is_identity() {
        let o = NCModule::structure_sheaf(1);
        let f = localize_morphism(&NCMorphism::identity(&o), &[0]).unwrap();
        assert!(f.is_iso());
        assert!(f.validate().is_empty());
    }
}
