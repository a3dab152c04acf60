//! Dual local cohomology, the two four-term exact sequences around a
//! module, and minimal extension across a coordinate divisor.
//!
//! Writing `Γ = H^0_{[Y]}` (largest submodule supported in `Y`) and
//! `Λ = H^0_{[X|Y]}` (localization side), every module sits in
//!
//! ```text
//!   0 → H^0_{[Y]}M → M → H^0_{[X|Y]}M → H^1_{[Y]}M → 0
//!   0 → ∨H^{-1}_{[Y]}M → ∨H^0_{[X|Y]}M → M → ∨H^0_{[Y]}M → 0
//! ```
//!
//! where `∨H^j := D ∘ H^{-j} ∘ D` is the dual local cohomology (indexed
//! in non-positive degrees). The canonical morphism
//! `ι : ∨H^0_{[X|Y]}M → H^0_{[X|Y]}M` factors through `M`, and its image
//! is the minimal extension: the unique submodule of the localization
//! with no nonzero sub- or quotient object supported in `Y`.

use crate::cech::{cech_complex, CoordinateDivisorSpec, GradedResult};
use crate::dual::{double_dual_iso, dual, dual_morphism};
use crate::localize::localize;
use crate::module::{ModuleError, NCModule};
use crate::morphism::{cokernel, factor_through_kernel, image, NCMorphism};

/// The four-term sequence
/// `0 → H^0_{[Y]}M → M → H^0_{[X|Y]}M → H^1_{[Y]}M → 0`
/// with its three maps.
#[derive(Debug, Clone)]
pub struct FourTerm {
    pub sub: NCModule,
    pub middle_source: NCModule,
    pub localization_side: NCModule,
    pub quotient: NCModule,
    pub include: NCMorphism,
    pub to_localization: NCMorphism,
    pub project: NCMorphism,
}

impl FourTerm {
    /// Exactness of the whole sequence, checked with the actual maps.
    pub fn verify_exact(&self) -> Result<bool, ModuleError> {
        Ok(self.include.is_mono()
            && self.project.is_epi()
            && crate::morphism::is_exact(&self.include, &self.to_localization)?
            && crate::morphism::is_exact(&self.to_localization, &self.project)?)
    }
}

/// Builds the first four-term sequence from the Čech complex.
pub fn four_term(
    module: &NCModule,
    spec: &CoordinateDivisorSpec,
) -> Result<FourTerm, ModuleError> {
    let complex = cech_complex(module, spec)?;
    let (gamma0, include) = complex.cycle_space(0)?;
    let (cocycles1, incl1) = complex.cycle_space(1)?;
    let to_localization = factor_through_kernel(&complex.diffs[0], &incl1);
    let (quotient, project) = cokernel(&to_localization)?;
    Ok(FourTerm {
        sub: gamma0,
        middle_source: module.clone(),
        localization_side: cocycles1,
        quotient,
        include,
        to_localization,
        project,
    })
}

/// The dual four-term sequence
/// `0 → ∨H^{-1}_{[Y]}M → ∨H^0_{[X|Y]}M → M → ∨H^0_{[Y]}M → 0`,
/// obtained by dualizing the first sequence of `D(M)` and straightening
/// `D(D(M))` with the signed identity.
#[derive(Debug, Clone)]
pub struct DualFourTerm {
    pub sub: NCModule,
    pub colocalization_side: NCModule,
    pub middle_target: NCModule,
    pub quotient: NCModule,
    pub include: NCMorphism,
    pub from_colocalization: NCMorphism,
    pub project: NCMorphism,
}

impl DualFourTerm {
    pub fn verify_exact(&self) -> Result<bool, ModuleError> {
        Ok(self.include.is_mono()
            && self.project.is_epi()
            && crate::morphism::is_exact(&self.include, &self.from_colocalization)?
            && crate::morphism::is_exact(&self.from_colocalization, &self.project)?)
    }
}

pub fn dual_four_term(
    module: &NCModule,
    spec: &CoordinateDivisorSpec,
) -> Result<DualFourTerm, ModuleError> {
    let dualized = dual(module)?;
    let ft = four_term(&dualized, spec)?;
    // Dualizing 0 → S → DM → L → Q → 0 gives
    // 0 → D(Q) → D(L) → D(DM) → D(S) → 0; straighten D(DM) to M.
    let eps = double_dual_iso(module)?;
    let eps_inv = eps.inverse()?;
    let include = dual_morphism(&ft.project)?;
    let from_colocalization =
        NCMorphism::compose(&eps_inv, &dual_morphism(&ft.to_localization)?);
    let project = NCMorphism::compose(&dual_morphism(&ft.include)?, &eps);
    Ok(DualFourTerm {
        sub: dual(&ft.quotient)?,
        colocalization_side: dual(&ft.localization_side)?,
        middle_target: module.clone(),
        quotient: dual(&ft.sub)?,
        include,
        from_colocalization,
        project,
    })
}

/// Both graded pieces of the dual local cohomology:
/// `∨H^j_{[Y]} = D H^{-j}_{[Y]} D` and `∨H^j_{[X|Y]} = D H^{-j}_{[X|Y]} D`,
/// supported in degrees `-r..=0` and `-(r-1)..=0`.
pub fn dual_local_cohomology(
    module: &NCModule,
    spec: &CoordinateDivisorSpec,
) -> Result<(GradedResult, GradedResult), ModuleError> {
    let dualized = dual(module)?;
    let lc = crate::cech::local_cohomology(&dualized, spec)?;
    let mut vgamma = GradedResult::new();
    for (&j, h) in &lc.gamma {
        vgamma.insert(-j, dual(h)?);
    }
    let mut vcogamma = GradedResult::new();
    for (&j, h) in &lc.cogamma {
        vcogamma.insert(-j, dual(h)?);
    }
    Ok((vgamma, vcogamma))
}

/// The canonical morphism `ι : ∨H^0_{[X|Y]}M → H^0_{[X|Y]}M` for a
/// single-union divisor, where both sides are plain localizations.
pub fn iota(
    module: &NCModule,
    axes: &[usize],
) -> Result<NCMorphism, ModuleError> {
    let dualized = dual(module)?;
    let (_, unit_dual) = localize(&dualized, axes)?;
    let eps_inv = double_dual_iso(module)?.inverse()?;
    let to_module = NCMorphism::compose(&eps_inv, &dual_morphism(&unit_dual)?);
    let (_, unit) = localize(module, axes)?;
    Ok(NCMorphism::compose(&unit, &to_module))
}

/// Minimal extension across the divisor `∪_{i∈axes} {z_i = 0}`: the
/// image of `ι`. Requires `M` to be isomorphic to its localization.
pub fn minimal_extension(module: &NCModule, axes: &[usize]) -> Result<NCModule, ModuleError> {
    let (_, unit) = localize(module, axes)?;
    if !unit.is_iso() {
        return Err(ModuleError::NotLocalized);
    }
    let iota_map = iota(module, axes)?;
    let (ext, _) = image(&iota_map)?;
    debug_assert!(ext.validate().is_empty());
    Ok(ext)
}

/// `H^0_{[Y]}` with its inclusion, for submodule comparisons.
pub fn gamma0_with_inclusion(
    module: &NCModule,
    spec: &CoordinateDivisorSpec,
) -> Result<(NCModule, NCMorphism), ModuleError> {
    let complex = cech_complex(module, spec)?;
    complex.cycle_space(0)
}

/// Largest quotient supported in `Y`: `∨H^0_{[Y]}M` with its projection.
pub fn cogamma0_with_projection(
    module: &NCModule,
    spec: &CoordinateDivisorSpec,
) -> Result<(NCModule, NCMorphism), ModuleError> {
    let dft = dual_four_term(module, spec)?;
    Ok((dft.quotient, dft.project))
}
