//! Exact combinatorial calculus for regular holonomic D-modules of
//! normal crossing type.
//!
//! Modules over the ring of differential operators that are regular
//! holonomic of normal crossing type are determined by a finite grid of
//! vector spaces indexed by exponent tuples in `[-1, 0]^n`, together with
//! the Euler operators `Θ_i = z_i ∂_{z_i}` and the two boundary maps
//! `can_i = ∂_{z_i}` and `var_i = z_i` between the `ν_i = 0` and
//! `ν_i = -1` slices. Everything here works with that finite model in
//! exact rational arithmetic:
//!
//! * [`matrix`], [`poly`], [`koszul`], [`projector`] — the exact linear
//!   algebra bedrock (kernels, images, Koszul complexes of commuting
//!   operators, polynomial projector decompositions);
//! * [`module`], [`morphism`], [`complex`] — the abelian category of
//!   grid modules: validation, kernels, cokernels, images, exactness;
//! * [`localize`], [`cech`], [`dual`], [`minext`], [`kashiwara`] — the
//!   functor calculus: divisor localization, Čech local cohomology,
//!   duality, minimal extension, push/pull along coordinate subspaces;
//! * [`local_system`], [`monodromy`] — Deligne extensions built from
//!   commuting monodromy data;
//! * [`derham`], [`spectrum`] — de Rham stalk cohomology and
//!   nearby-cycle monodromy spectra of monomial functions, with an
//!   independent lattice/covering-space oracle;
//! * [`weyl`] — the finite-order symbol involution and the left/right
//!   module side change.
//!
//! All scalars are arbitrary-precision rationals; there is no floating
//! point and no tolerance anywhere.

pub mod cech;
pub mod complex;
pub mod derham;
pub mod dual;
pub mod kashiwara;
pub mod koszul;
pub mod lattice;
pub mod local_system;
pub mod localize;
pub mod matrix;
pub mod minext;
pub mod module;
pub mod monodromy;
pub mod morphism;
pub mod poly;
pub mod projector;
pub mod rat;
pub mod spectrum;
pub mod weyl;

pub use cech::{local_cohomology, CoordinateDivisorSpec, GradedResult, LocalCohomology};
pub use complex::NCComplex;
pub use derham::{dr_global_punctured, dr_stalk, DrStalk};
pub use dual::{double_dual_iso, dual, dual_morphism};
pub use kashiwara::{kashiwara_pull, kashiwara_push};
pub use koszul::{koszul_cohomology, KoszulResult};
pub use local_system::{
    deligne_meromorphic, rh_convert, ExponentInterval, LocalSystemSpec, ResidueData, SystemBlock,
};
pub use localize::{localize, localize_morphism};
pub use matrix::{rank_kernel_image, LinalgError, Matrix};
pub use minext::{dual_four_term, dual_local_cohomology, four_term, minimal_extension};
pub use module::{Exponent, GridIndex, ModuleError, NCModule, SliceData, Violation};
pub use monodromy::monodromy_to_spec;
pub use morphism::{cokernel, direct_sum, image, is_exact, kernel, NCMorphism};
pub use poly::Poly;
pub use projector::{bezout_cofactors, exp_nilpotent, nilpotent_log, primary_projectors};
pub use rat::Rat;
pub use spectrum::{
    nearby_cycles_for_system, nearby_cycles_monomial, psi_oracle, MonomialSpec, SpecError,
    SpectrumEntry, SpectrumReport,
};
pub use weyl::{involution_iota, side_change, SymbolElement, SymbolError};
