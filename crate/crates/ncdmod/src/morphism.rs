//! Morphisms of grid modules and the abelian-category operations.
//!
//! A morphism is a family of matrices `f_ν : V_ν → W_ν`, one per stored
//! index, commuting with every `Θ_i`, `var_i` and `can_i`. Kernels,
//! cokernels and images are computed slice-wise; the structure maps
//! restrict and descend because they commute with `f`. Basis choices
//! come from the deterministic echelon routines in [`crate::matrix`],
//! so repeated runs produce identical output.

use crate::matrix::{cokernel_projection, Matrix};
use crate::module::{GridIndex, ModuleError, NCModule, SliceData, Violation};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCMorphism {
    source: NCModule,
    target: NCModule,
    maps: BTreeMap<GridIndex, Matrix>,
}

impl NCMorphism {
    /// Builds a morphism from per-slice matrices. Maps on indices absent
    /// from both modules are dropped; missing maps default to zero.
    pub fn new(
        source: NCModule,
        target: NCModule,
        maps: BTreeMap<GridIndex, Matrix>,
    ) -> NCMorphism {
        let maps = maps
            .into_iter()
            .filter(|(index, _)| source.dim(index) > 0 && target.dim(index) > 0)
            .collect();
        NCMorphism { source, target, maps }
    }

    pub fn identity(module: &NCModule) -> NCMorphism {
        let maps = module
            .slices()
            .iter()
            .map(|(index, slice)| (index.clone(), Matrix::identity(slice.dim)))
            .collect();
        NCMorphism { source: module.clone(), target: module.clone(), maps }
    }

    pub fn zero(source: &NCModule, target: &NCModule) -> NCMorphism {
        NCMorphism { source: source.clone(), target: target.clone(), maps: BTreeMap::new() }
    }

    pub fn source(&self) -> &NCModule {
        &self.source
    }

    pub fn target(&self) -> &NCModule {
        &self.target
    }

    /// The matrix at `index`, with the correct (possibly empty) shape.
    pub fn map_at(&self, index: &GridIndex) -> Matrix {
        self.maps
            .get(index)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(index), self.source.dim(index)))
    }

    fn relevant_indices(&self) -> BTreeSet<GridIndex> {
        self.source.indices().chain(self.target.indices()).cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(|m| m.is_zero())
    }

    /// Slice-wise invertibility.
    pub fn is_iso(&self) -> bool {
        self.relevant_indices().iter().all(|index| {
            let m = self.map_at(index);
            m.is_square() && m.rank() == m.rows()
        })
    }

    pub fn is_mono(&self) -> bool {
        self.relevant_indices()
            .iter()
            .all(|index| self.map_at(index).rank() == self.source.dim(index))
    }

    pub fn is_epi(&self) -> bool {
        self.relevant_indices()
            .iter()
            .all(|index| self.map_at(index).rank() == self.target.dim(index))
    }

    /// Commutation with every structure map, exactly.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.source.axes() != self.target.axes() {
            out.push(Violation { axis: None, index: None, identity: "axis count".into() });
            return out;
        }
        let axes = self.source.axes();
        for index in self.relevant_indices() {
            let f = self.map_at(&index);
            if f.rows() != self.target.dim(&index) || f.cols() != self.source.dim(&index) {
                out.push(Violation {
                    axis: None,
                    index: Some(index.clone()),
                    identity: "map shape".into(),
                });
                continue;
            }
            for axis in 0..axes {
                let theta_s = self.source.theta(axis, &index);
                let theta_t = self.target.theta(axis, &index);
                if &f * &theta_s != &theta_t * &f {
                    out.push(Violation {
                        axis: Some(axis),
                        index: Some(index.clone()),
                        identity: "theta square".into(),
                    });
                }
                if index.coord(axis).is_minus_one() {
                    let up = index.up(axis);
                    let f_up = self.map_at(&up);
                    let var_s = self.source.var(axis, &index);
                    let var_t = self.target.var(axis, &index);
                    if &f_up * &var_s != &var_t * &f {
                        out.push(Violation {
                            axis: Some(axis),
                            index: Some(index.clone()),
                            identity: "var square".into(),
                        });
                    }
                    let can_s = self.source.can(axis, &index);
                    let can_t = self.target.can(axis, &index);
                    if &f * &can_s != &can_t * &f_up {
                        out.push(Violation {
                            axis: Some(axis),
                            index: Some(index.clone()),
                            identity: "can square".into(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn require_valid(&self) -> Result<(), ModuleError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ModuleError::InvalidMorphism(violations))
        }
    }

    /// `g ∘ f`; panics if the middle modules differ.
    pub fn compose(g: &NCMorphism, f: &NCMorphism) -> NCMorphism {
        assert_eq!(f.target, g.source, "composition mismatch");
        let indices: BTreeSet<GridIndex> =
            f.source.indices().chain(g.target.indices()).cloned().collect();
        let maps = indices
            .into_iter()
            .map(|index| {
                let m = &g.map_at(&index) * &f.map_at(&index);
                (index, m)
            })
            .collect();
        NCMorphism::new(f.source.clone(), g.target.clone(), maps)
    }

    /// Pointwise sum of parallel morphisms.
    pub fn add(&self, other: &NCMorphism) -> NCMorphism {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let indices: BTreeSet<GridIndex> = self.relevant_indices();
        let maps = indices
            .into_iter()
            .map(|index| {
                let m = &self.map_at(&index) + &other.map_at(&index);
                (index, m)
            })
            .collect();
        NCMorphism::new(self.source.clone(), self.target.clone(), maps)
    }

    pub fn scale(&self, factor: &crate::rat::Rat) -> NCMorphism {
        let maps = self.maps.iter().map(|(k, m)| (k.clone(), m.scale(factor))).collect();
        NCMorphism { source: self.source.clone(), target: self.target.clone(), maps }
    }

    /// Slice-wise inverse; requires `is_iso`.
    pub fn inverse(&self) -> Result<NCMorphism, ModuleError> {
        if !self.is_iso() {
            return Err(ModuleError::InvalidMorphism(vec![Violation {
                axis: None,
                index: None,
                identity: "not invertible".into(),
            }]));
        }
        let maps = self
            .relevant_indices()
            .into_iter()
            .map(|index| {
                let inv = self.map_at(&index).inverse().expect("checked invertible");
                (index, inv)
            })
            .collect();
        Ok(NCMorphism::new(self.target.clone(), self.source.clone(), maps))
    }
}

/// Restricts the structure maps of `module` to a family of subspaces
/// given by full-column-rank basis matrices, producing the submodule and
/// its inclusion.
fn restrict_to_subspaces(
    module: &NCModule,
    bases: &BTreeMap<GridIndex, Matrix>,
) -> (NCModule, NCMorphism) {
    let axes = module.axes();
    let basis_at = |index: &GridIndex| -> Matrix {
        bases
            .get(index)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(module.dim(index), 0))
    };
    let mut slices = BTreeMap::new();
    let mut var = BTreeMap::new();
    let mut can = BTreeMap::new();
    for index in module.indices() {
        let basis = basis_at(index);
        if basis.cols() == 0 {
            continue;
        }
        let theta = (0..axes)
            .map(|axis| {
                basis
                    .solve(&(&module.theta(axis, index) * &basis))
                    .expect("theta preserves the subspace")
            })
            .collect();
        slices.insert(index.clone(), SliceData { dim: basis.cols(), theta });
        for axis in 0..axes {
            if index.coord(axis).is_minus_one() {
                let up = index.up(axis);
                let up_basis = basis_at(&up);
                let v = up_basis
                    .solve(&(&module.var(axis, index) * &basis))
                    .expect("var preserves the subspace");
                var.insert((axis, index.clone()), v);
                let c = basis
                    .solve(&(&module.can(axis, index) * &up_basis))
                    .expect("can preserves the subspace");
                can.insert((axis, index.clone()), c);
            }
        }
    }
    let sub = NCModule::assemble(axes, slices, var, can);
    let inclusion = NCMorphism::new(sub.clone(), module.clone(), bases.clone());
    (sub, inclusion)
}

/// Kernel of a morphism with its inclusion, computed slice-wise.
pub fn kernel(f: &NCMorphism) -> Result<(NCModule, NCMorphism), ModuleError> {
    f.require_valid()?;
    let mut bases = BTreeMap::new();
    for index in f.source().indices() {
        bases.insert(index.clone(), f.map_at(index).kernel_basis());
    }
    Ok(restrict_to_subspaces(f.source(), &bases))
}

/// Cokernel of a morphism with its projection.
pub fn cokernel(f: &NCMorphism) -> Result<(NCModule, NCMorphism), ModuleError> {
    f.require_valid()?;
    let target = f.target();
    let axes = target.axes();
    let mut projections = BTreeMap::new();
    let mut sections = BTreeMap::new();
    for index in target.indices() {
        let (proj, section) = cokernel_projection(&f.map_at(index));
        projections.insert(index.clone(), proj);
        sections.insert(index.clone(), section);
    }
    let proj_at = |index: &GridIndex| -> Matrix {
        projections
            .get(index)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(0, target.dim(index)))
    };
    let sec_at = |index: &GridIndex| -> Matrix {
        sections
            .get(index)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(target.dim(index), 0))
    };
    let mut slices = BTreeMap::new();
    let mut var = BTreeMap::new();
    let mut can = BTreeMap::new();
    for index in target.indices() {
        let proj = proj_at(index);
        if proj.rows() == 0 {
            continue;
        }
        let section = sec_at(index);
        let theta = (0..axes)
            .map(|axis| &(&proj * &target.theta(axis, index)) * &section)
            .collect();
        slices.insert(index.clone(), SliceData { dim: proj.rows(), theta });
        for axis in 0..axes {
            if index.coord(axis).is_minus_one() {
                let up = index.up(axis);
                let v = &(&proj_at(&up) * &target.var(axis, index)) * &section;
                var.insert((axis, index.clone()), v);
                let c = &(&proj * &target.can(axis, index)) * &sec_at(&up);
                can.insert((axis, index.clone()), c);
            }
        }
    }
    let quotient = NCModule::assemble(axes, slices, var, can);
    let projection = NCMorphism::new(target.clone(), quotient, projections);
    Ok((projection.target().clone(), projection))
}

/// Image of a morphism as the kernel of its cokernel projection,
/// returned with the inclusion into the target.
pub fn image(f: &NCMorphism) -> Result<(NCModule, NCMorphism), ModuleError> {
    let (_, projection) = cokernel(f)?;
    kernel(&projection)
}

/// Factors `g : A → C` through a kernel inclusion `incl : K ↪ C`;
/// requires (and relies on) the image of `g` lying inside `K`.
pub fn factor_through_kernel(g: &NCMorphism, incl: &NCMorphism) -> NCMorphism {
    assert_eq!(g.target(), incl.target(), "factor target mismatch");
    let mut maps = BTreeMap::new();
    for index in g.source().indices() {
        let lifted = incl
            .map_at(index)
            .solve(&g.map_at(index))
            .expect("image not contained in kernel");
        maps.insert(index.clone(), lifted);
    }
    NCMorphism::new(g.source().clone(), incl.source().clone(), maps)
}

/// Factors `g : C → B` through a cokernel projection `proj : C ↠ Q`,
/// producing the induced `Q → B`; requires `g` to kill the kernel of
/// `proj`.
pub fn factor_through_cokernel(g: &NCMorphism, proj: &NCMorphism) -> NCMorphism {
    assert_eq!(g.source(), proj.source(), "factor source mismatch");
    let mut maps = BTreeMap::new();
    for index in proj.target().indices() {
        // Solve X · proj = g, i.e. projᵀ · Xᵀ = gᵀ.
        let x = proj
            .map_at(index)
            .transpose()
            .solve(&g.map_at(index).transpose())
            .expect("morphism does not descend to the quotient");
        maps.insert(index.clone(), x.transpose());
    }
    NCMorphism::new(proj.target().clone(), g.target().clone(), maps)
}

/// Corestriction of `f` onto its image: the epimorphism `M ↠ im f` with
/// `incl ∘ corestriction = f`.
pub fn corestrict_to_image(f: &NCMorphism, incl: &NCMorphism) -> NCMorphism {
    factor_through_kernel(f, incl)
}

/// Direct sum with the four canonical maps `(i_1, i_2, p_1, p_2)`.
pub fn direct_sum_with_maps(
    a: &NCModule,
    b: &NCModule,
) -> (NCModule, NCMorphism, NCMorphism, NCMorphism, NCMorphism) {
    assert_eq!(a.axes(), b.axes(), "direct sum axis mismatch");
    let axes = a.axes();
    let indices: BTreeSet<GridIndex> = a.indices().chain(b.indices()).cloned().collect();
    let mut slices = BTreeMap::new();
    let mut var = BTreeMap::new();
    let mut can = BTreeMap::new();
    for index in &indices {
        let (da, db) = (a.dim(index), b.dim(index));
        if da + db == 0 {
            continue;
        }
        let theta = (0..axes)
            .map(|axis| Matrix::block_diag(&[&a.theta(axis, index), &b.theta(axis, index)]))
            .collect();
        slices.insert(index.clone(), SliceData { dim: da + db, theta });
        for axis in 0..axes {
            if index.coord(axis).is_minus_one() {
                var.insert(
                    (axis, index.clone()),
                    Matrix::block_diag(&[&a.var(axis, index), &b.var(axis, index)]),
                );
                can.insert(
                    (axis, index.clone()),
                    Matrix::block_diag(&[&a.can(axis, index), &b.can(axis, index)]),
                );
            }
        }
    }
    let sum = NCModule::assemble(axes, slices, var, can);
    let mut inj_a = BTreeMap::new();
    let mut inj_b = BTreeMap::new();
    let mut proj_a = BTreeMap::new();
    let mut proj_b = BTreeMap::new();
    for index in &indices {
        let (da, db) = (a.dim(index), b.dim(index));
        let ia = Matrix::from_fn(da + db, da, |r, c| {
            if r == c {
                crate::rat::one()
            } else {
                crate::rat::zero()
            }
        });
        let ib = Matrix::from_fn(da + db, db, |r, c| {
            if r == da + c {
                crate::rat::one()
            } else {
                crate::rat::zero()
            }
        });
        proj_a.insert(index.clone(), ia.transpose());
        proj_b.insert(index.clone(), ib.transpose());
        inj_a.insert(index.clone(), ia);
        inj_b.insert(index.clone(), ib);
    }
    (
        sum.clone(),
        NCMorphism::new(a.clone(), sum.clone(), inj_a),
        NCMorphism::new(b.clone(), sum.clone(), inj_b),
        NCMorphism::new(sum.clone(), a.clone(), proj_a),
        NCMorphism::new(sum, b.clone(), proj_b),
    )
}

pub fn direct_sum(a: &NCModule, b: &NCModule) -> NCModule {
    direct_sum_with_maps(a, b).0
}

/// Exactness of `M →f→ N →g→ P` at `N`: requires `g∘f = 0` and checks
/// `rank f_ν + rank g_ν = dim N_ν` on every slice.
pub fn is_exact(f: &NCMorphism, g: &NCMorphism) -> Result<bool, ModuleError> {
    assert_eq!(f.target(), g.source(), "is_exact middle mismatch");
    if !NCMorphism::compose(g, f).is_zero() {
        return Err(ModuleError::CompositionNonzero);
    }
    Ok(g.source().indices().all(|index| {
        f.map_at(index).rank() + g.map_at(index).rank() == g.source().dim(index)
    }))
}
