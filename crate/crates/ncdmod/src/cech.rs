//! Algebraic local cohomology along unions and intersections of
//! coordinate divisors, by Čech complexes of localizations.
//!
//! The subvariety is `Y = ∩_k Z_k` where each `Z_k = ∪_{i∈I_k} {z_i=0}`
//! is a union of coordinate hyperplanes. The Čech complex has degree-`j`
//! term `⊕_{|S|=j} M(*Z_S)` with `Z_S = ∪_{k∈S} Z_k` and alternating
//! unit maps; its cohomology is `H^j_{[Y]} M`. Dropping the first term
//! and shifting computes `H^j_{[X|Y]} M`, with
//! `H^0_{[X|Y]} = ker(⊕_k M(*Z_k) → ⊕_{k<l} M(*Z_{k∪l}))`.

use crate::complex::NCComplex;
use crate::localize::localize;
use crate::module::{ModuleError, NCModule};
use crate::morphism::{direct_sum_with_maps, NCMorphism};
use std::collections::BTreeMap;

/// A coordinate subvariety `Y = ∩ (∪_{i∈I} {z_i = 0})`: one axis set
/// per divisor in the intersection. Axes are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateDivisorSpec {
    pub unions: Vec<Vec<usize>>,
}

impl CoordinateDivisorSpec {
    pub fn new(unions: Vec<Vec<usize>>) -> Self {
        let unions = unions
            .into_iter()
            .map(|mut u| {
                u.sort_unstable();
                u.dedup();
                u
            })
            .collect();
        CoordinateDivisorSpec { unions }
    }

    /// A single divisor `∪_{i∈axes} {z_i = 0}`.
    pub fn divisor(axes: Vec<usize>) -> Self {
        CoordinateDivisorSpec::new(vec![axes])
    }

    /// The origin of an `n`-dimensional grid: `∩_i {z_i = 0}`.
    pub fn origin(n: usize) -> Self {
        CoordinateDivisorSpec::new((0..n).map(|i| vec![i]).collect())
    }

    pub fn validate(&self, axes: usize) -> Result<(), ModuleError> {
        if self.unions.is_empty() {
            return Err(ModuleError::InvalidSpec("empty divisor list".into()));
        }
        for union in &self.unions {
            if union.is_empty() {
                return Err(ModuleError::InvalidSpec("empty axis union".into()));
            }
            if union.iter().any(|&i| i >= axes) {
                return Err(ModuleError::InvalidSpec(format!(
                    "axis out of range in divisor spec (module has {axes})"
                )));
            }
        }
        Ok(())
    }

    /// Union of the axis sets selected by the bitmask of divisors.
    fn axes_of_subset(&self, mask: u32) -> Vec<usize> {
        let mut axes: Vec<usize> = self
            .unions
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .flat_map(|(_, u)| u.iter().copied())
            .collect();
        axes.sort_unstable();
        axes.dedup();
        axes
    }
}

pub type GradedResult = BTreeMap<i64, NCModule>;

/// Both sides of the local cohomology triangle, plus the underlying
/// Čech complex for callers that need the maps.
#[derive(Debug, Clone)]
pub struct LocalCohomology {
    /// `H^j_{[Y]} M`, degrees `0..=r`.
    pub gamma: GradedResult,
    /// `H^j_{[X|Y]} M`, degrees `0..=r-1`.
    pub cogamma: GradedResult,
}

/// The Čech complex of localizations for `M` and a divisor spec.
pub fn cech_complex(
    module: &NCModule,
    spec: &CoordinateDivisorSpec,
) -> Result<NCComplex, ModuleError> {
    module.require_valid()?;
    spec.validate(module.axes())?;
    let r = spec.unions.len();
    assert!(r <= 16, "too many divisor unions");

    // Localizations per subset, indexed by bitmask.
    let mut localized: BTreeMap<u32, NCModule> = BTreeMap::new();
    for mask in 0u32..(1 << r) {
        let axes = spec.axes_of_subset(mask);
        localized.insert(mask, localize(module, &axes)?.0);
    }

    // Terms: direct sums over subsets of fixed cardinality, with the
    // injection/projection maps to wire the differentials.
    let mut subsets: Vec<Vec<u32>> = vec![Vec::new(); r + 1];
    for mask in 0u32..(1 << r) {
        subsets[mask.count_ones() as usize].push(mask);
    }

    struct Term {
        module: NCModule,
        injections: BTreeMap<u32, NCMorphism>,
        projections: BTreeMap<u32, NCMorphism>,
    }

    let mut terms = Vec::with_capacity(r + 1);
    for level in &subsets {
        let mut module_acc = NCModule::zero(module.axes());
        let mut injections: BTreeMap<u32, NCMorphism> = BTreeMap::new();
        let mut projections: BTreeMap<u32, NCMorphism> = BTreeMap::new();
        for &mask in level {
            let summand = localized[&mask].clone();
            let (sum, inj_old, inj_new, proj_old, proj_new) =
                direct_sum_with_maps(&module_acc, &summand);
            for (_, inj) in injections.iter_mut() {
                *inj = NCMorphism::compose(&inj_old, inj);
            }
            for (_, proj) in projections.iter_mut() {
                *proj = NCMorphism::compose(proj, &proj_old);
            }
            injections.insert(mask, inj_new);
            projections.insert(mask, proj_new);
            module_acc = sum;
        }
        terms.push(Term { module: module_acc, injections, projections });
    }

    let mut diffs = Vec::with_capacity(r);
    for j in 0..r {
        let mut diff = NCMorphism::zero(&terms[j].module, &terms[j + 1].module);
        for &source_mask in &subsets[j] {
            for k in 0..r {
                if source_mask & (1 << k) != 0 {
                    continue;
                }
                let target_mask = source_mask | (1 << k);
                let below = (source_mask & ((1 << k) - 1)).count_ones();
                let extra_axes = spec.axes_of_subset(target_mask);
                let (_, unit) = localize(&localized[&source_mask], &extra_axes)?;
                // Localizing an already localized module along a larger
                // axis set lands exactly in the target summand.
                let component = NCMorphism::compose(
                    &terms[j + 1].injections[&target_mask],
                    &NCMorphism::compose(&unit, &terms[j].projections[&source_mask]),
                );
                let signed = if below % 2 == 0 {
                    component
                } else {
                    component.scale(&crate::rat::rat(-1))
                };
                diff = diff.add(&signed);
            }
        }
        diffs.push(diff);
    }

    NCComplex::new(terms.into_iter().map(|t| t.module).collect(), diffs)
}

/// `H^j_{[Y]}` and `H^j_{[X|Y]}` for a coordinate subvariety.
pub fn local_cohomology(
    module: &NCModule,
    spec: &CoordinateDivisorSpec,
) -> Result<LocalCohomology, ModuleError> {
    let complex = cech_complex(module, spec)?;
    let r = complex.diffs.len();
    let mut gamma = GradedResult::new();
    for (j, h) in complex.cohomology()?.into_iter().enumerate() {
        if !h.is_zero() {
            gamma.insert(j as i64, h);
        }
    }
    // The truncated complex differs from the full one only in degrees
    // 0 and 1, so its cohomology is the kernel of the first Čech map in
    // degree 0 and agrees with gamma above that.
    let mut cogamma = GradedResult::new();
    if r >= 1 {
        let truncated = NCComplex::new(
            complex.terms[1..].to_vec(),
            complex.diffs[1..].to_vec(),
        )?;
        let h0 = truncated.cohomology_at(0)?;
        if !h0.is_zero() {
            cogamma.insert(0, h0);
        }
        for j in 1..r {
            if let Some(h) = gamma.get(&(j as i64 + 1)) {
                cogamma.insert(j as i64, h.clone());
            }
        }
    }
    Ok(LocalCohomology { gamma, cogamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{Exponent, GridIndex};

    fn dims_of(graded: &GradedResult) -> BTreeMap<i64, usize> {
        graded.iter().map(|(&j, m)| (j, m.total_dim())).collect()
    }

    #[test]
    fn disk_structure_sheaf_at_the_origin() {
        let o = NCModule::structure_sheaf(1);
        let spec = CoordinateDivisorSpec::divisor(vec![0]);
        let lc = local_cohomology(&o, &spec).unwrap();
        assert_eq!(dims_of(&lc.gamma), [(1i64, 1usize)].into_iter().collect());
        let h1 = &lc.gamma[&1];
        assert_eq!(h1.dims(), NCModule::delta().dims());
        assert_eq!(dims_of(&lc.cogamma), [(0i64, 2usize)].into_iter().collect());
    }

    #[test]
    fn two_axes_origin() {
        let o = NCModule::structure_sheaf(2);
        let spec = CoordinateDivisorSpec::origin(2);
        let lc = local_cohomology(&o, &spec).unwrap();
        assert_eq!(dims_of(&lc.gamma), [(2i64, 1usize)].into_iter().collect());
        let h2 = &lc.gamma[&2];
        let corner = GridIndex(vec![Exponent::minus_one(), Exponent::minus_one()]);
        assert_eq!(h2.dim(&corner), 1);
        assert!(h2.validate().is_empty());
    }

    #[test]
    fn supported_module_has_gamma_zero_only() {
        let delta = NCModule::delta();
        let spec = CoordinateDivisorSpec::divisor(vec![0]);
        let lc = local_cohomology(&delta, &spec).unwrap();
        assert_eq!(dims_of(&lc.gamma), [(0i64, 1usize)].into_iter().collect());
        assert!(lc.cogamma.is_empty());
    }
}
