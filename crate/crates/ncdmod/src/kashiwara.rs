//! Push and pull along coordinate hyperplane embeddings.
//!
//! A module supported on `{z_new = 0}` is the same thing as a module on
//! the hyperplane: pushing inserts a new axis with everything placed on
//! the `ν_new = -1` slice and `Θ_new = -id` (forced by `can∘var = Θ+id`
//! through the empty `0` slice), and pulling drops the axis again.

use crate::module::{Exponent, GridIndex, ModuleError, NCModule, SliceData};
use crate::morphism::NCMorphism;
use std::collections::BTreeMap;

fn insert_coord(index: &GridIndex, position: usize, e: Exponent) -> GridIndex {
    let mut coords = index.0.clone();
    coords.insert(position, e);
    GridIndex(coords)
}

fn remove_coord(index: &GridIndex, position: usize) -> GridIndex {
    let mut coords = index.0.clone();
    coords.remove(position);
    GridIndex(coords)
}

/// Direct image along the embedding that inserts a new coordinate at
/// `position` (0-based, `position <= axes`).
pub fn kashiwara_push(module: &NCModule, position: usize) -> NCModule {
    assert!(position <= module.axes(), "insert position out of range");
    let axes = module.axes() + 1;
    let shift = |old_axis: usize| if old_axis < position { old_axis } else { old_axis + 1 };
    let mut slices = BTreeMap::new();
    let mut var = BTreeMap::new();
    let mut can = BTreeMap::new();
    for (index, slice) in module.slices() {
        let new_index = insert_coord(index, position, Exponent::minus_one());
        let mut theta = vec![crate::matrix::Matrix::zeros(slice.dim, slice.dim); axes];
        theta[position] = crate::matrix::Matrix::scalar(slice.dim, &crate::rat::rat(-1));
        for old_axis in 0..module.axes() {
            theta[shift(old_axis)] = slice.theta[old_axis].clone();
        }
        slices.insert(new_index.clone(), SliceData { dim: slice.dim, theta });
        for old_axis in 0..module.axes() {
            if index.coord(old_axis).is_minus_one() {
                var.insert((shift(old_axis), new_index.clone()), module.var(old_axis, index));
                can.insert((shift(old_axis), new_index.clone()), module.can(old_axis, index));
            }
        }
        // The new axis has no 0 slice; assemble fills the empty maps.
    }
    NCModule::assemble(axes, slices, var, can)
}

/// Inverse of the push: drops `axis`, keeping the `ν_axis = -1` slices.
/// Fails with `NotSupported` unless the localization along `axis`
/// vanishes (every stored slice sits at `ν_axis = -1`).
pub fn kashiwara_pull(module: &NCModule, axis: usize) -> Result<NCModule, ModuleError> {
    module.require_valid()?;
    if axis >= module.axes() {
        return Err(ModuleError::InvalidSpec(format!(
            "axis {} out of range (module has {})",
            axis + 1,
            module.axes()
        )));
    }
    if module.indices().any(|index| !index.coord(axis).is_minus_one()) {
        return Err(ModuleError::NotSupported);
    }
    let axes = module.axes() - 1;
    let unshift = |new_axis: usize| if new_axis < axis { new_axis } else { new_axis + 1 };
    let mut slices = BTreeMap::new();
    let mut var = BTreeMap::new();
    let mut can = BTreeMap::new();
    for (index, slice) in module.slices() {
        let new_index = remove_coord(index, axis);
        let theta = (0..axes).map(|a| slice.theta[unshift(a)].clone()).collect();
        slices.insert(new_index.clone(), SliceData { dim: slice.dim, theta });
        for a in 0..axes {
            if new_index.coord(a).is_minus_one() {
                var.insert((a, new_index.clone()), module.var(unshift(a), index));
                can.insert((a, new_index.clone()), module.can(unshift(a), index));
            }
        }
    }
    Ok(NCModule::assemble(axes, slices, var, can))
}

/// The unit morphism whose kernel/cokernel detect support: localization
/// along the pushed axis of a pushforward is zero.
pub fn push_is_supported(module: &NCModule, position: usize) -> Result<bool, ModuleError> {
    let pushed = kashiwara_push(module, position);
    let (loc, unit) = crate::localize::localize(&pushed, &[position])?;
    let _ = unit;
    Ok(loc.is_zero())
}

/// Identity-on-the-nose round trip used by the equivalence tests.
pub fn push_pull_round_trip(module: &NCModule, position: usize) -> Result<bool, ModuleError> {
    let pushed = kashiwara_push(module, position);
    let pulled = kashiwara_pull(&pushed, position)?;
    Ok(&pulled == module)
}

/// Morphisms push forward slice-by-slice.
pub fn kashiwara_push_morphism(f: &NCMorphism, position: usize) -> NCMorphism {
    let source = kashiwara_push(f.source(), position);
    let target = kashiwara_push(f.target(), position);
    let mut maps = BTreeMap::new();
    for index in f.source().indices().chain(f.target().indices()) {
        let new_index = insert_coord(index, position, Exponent::minus_one());
        maps.insert(new_index, f.map_at(index));
    }
    NCMorphism::new(source, target, maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_pushes_to_delta() {
        let point = NCModule::point();
        let pushed = kashiwara_push(&point, 0);
        assert_eq!(pushed, NCModule::delta());
        assert!(pushed.validate().is_empty());
    }

    #[test]
    fn push_structure_sheaf_into_second_axis() {
        let o = NCModule::structure_sheaf(1);
        let pushed = kashiwara_push(&o, 1);
        assert!(pushed.validate().is_empty());
        assert_eq!(pushed.axes(), 2);
        let index = GridIndex(vec![Exponent::zero(), Exponent::minus_one()]);
        assert_eq!(pushed.dim(&index), 1);
        assert_eq!(
            pushed.theta(1, &index),
            crate::matrix::Matrix::scalar(1, &crate::rat::rat(-1))
        );
    }

    #[test]
    fn pull_delta_gives_point() {
        let pulled = kashiwara_pull(&NCModule::delta(), 0).unwrap();
        assert_eq!(pulled, NCModule::point());
    }

    #[test]
    fn pull_of_unsupported_module_fails() {
        let merom = crate::localize::localize(&NCModule::structure_sheaf(1), &[0]).unwrap().0;
        assert_eq!(kashiwara_pull(&merom, 0), Err(ModuleError::NotSupported));
    }

    #[test]
    fn round_trip_and_support() {
        for m in [NCModule::structure_sheaf(2), NCModule::delta()] {
            for position in 0..=m.axes() {
                assert!(push_pull_round_trip(&m, position).unwrap());
                assert!(push_is_supported(&m, position).unwrap());
            }
        }
    }
}
