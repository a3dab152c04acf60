//! Grid modules: the finite combinatorial model of regular holonomic
//! D-modules of normal crossing type.
//!
//! An `NCModule` on `n` axes stores, for finitely many exponent tuples
//! `ν ∈ [-1, 0]^n`, a finite-dimensional rational vector space `V_ν`
//! together with
//!
//! * the Euler operators `Θ_i[ν]` (the action of `z_i ∂_{z_i}`), whose
//!   nilpotent part is `Θ_i[ν] - ν_i`;
//! * for every stored `ν` with `ν_i = -1`, the pair
//!   `var_i[ν] : V_ν → V_{ν+1_i}` (multiplication by `z_i`) and
//!   `can_i[ν] : V_{ν+1_i} → V_ν` (the action of `∂_{z_i}`), subject to
//!   `can∘var = Θ + id` on the `ν_i = -1` slice and `var∘can = Θ` on the
//!   `ν_i = 0` slice.
//!
//! Slices at all other integer translates of the grid are implicit:
//! multiplication by `z_i` is bijective between the slices at `ν_i` and
//! `ν_i + 1` whenever `ν_i ≠ -1`, so the reduced grid determines the
//! whole module. Only nonzero slices are stored; structure maps into an
//! absent slice are the zero map to the zero space.

use crate::matrix::Matrix;
use crate::rat::{is_integer, rat, Rat};
use num::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleError {
    /// The module data violates a grid identity.
    InvalidModule(Vec<Violation>),
    /// The morphism does not commute with the structure maps.
    InvalidMorphism(Vec<Violation>),
    /// `is_exact` was called on a pair with nonzero composition.
    CompositionNonzero,
    /// The module is not isomorphic to its localization.
    NotLocalized,
    /// The module is not supported on the requested hyperplane.
    NotSupported,
    /// Malformed input data (dimensions, exponent ranges, shapes).
    InvalidSpec(String),
}

impl fmt::Display for ModuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleError::InvalidModule(v) => {
                write!(f, "invalid module ({} violations)", v.len())?;
                for violation in v.iter().take(3) {
                    write!(f, "; {violation}")?;
                }
                Ok(())
            }
            ModuleError::InvalidMorphism(v) => {
                write!(f, "invalid morphism ({} violations)", v.len())?;
                for violation in v.iter().take(3) {
                    write!(f, "; {violation}")?;
                }
                Ok(())
            }
            ModuleError::CompositionNonzero => write!(f, "composition g∘f is not zero"),
            ModuleError::NotLocalized => {
                write!(f, "module is not isomorphic to its localization")
            }
            ModuleError::NotSupported => {
                write!(f, "module is not supported on the hyperplane")
            }
            ModuleError::InvalidSpec(s) => write!(f, "invalid data: {s}"),
        }
    }
}

impl std::error::Error for ModuleError {}

/// A failed identity, naming the axis and grid index where it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axis: Option<usize>,
    pub index: Option<GridIndex>,
    pub identity: String,
}

impl Violation {
    fn new(axis: Option<usize>, index: Option<GridIndex>, identity: impl Into<String>) -> Self {
        Violation { axis, index, identity: identity.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.identity)?;
        if let Some(axis) = self.axis {
            write!(f, " [axis {}]", axis + 1)?;
        }
        if let Some(index) = &self.index {
            write!(f, " [index {index}]")?;
        }
        Ok(())
    }
}

/// A grid exponent: a rational in `[-1, 0]`. The endpoints `0` and `-1`
/// are the boundary slices joined by `can`/`var`; interior exponents
/// carry invertible `z_i` and `∂_{z_i}` actions and stand alone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Exponent(Rat);

impl Exponent {
    pub fn new(value: Rat) -> Result<Self, ModuleError> {
        if value > Rat::zero() || value < rat(-1) {
            return Err(ModuleError::InvalidSpec(format!(
                "exponent {value} outside [-1, 0]"
            )));
        }
        Ok(Exponent(value))
    }

    pub fn zero() -> Self {
        Exponent(Rat::zero())
    }

    pub fn minus_one() -> Self {
        Exponent(rat(-1))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_minus_one(&self) -> bool {
        self.0 == rat(-1)
    }

    pub fn is_interior(&self) -> bool {
        !self.is_zero() && !self.is_minus_one()
    }

    /// Index involution of the dual: interior exponents reflect to
    /// `-1 - ν`, the boundary exponents `0` and `-1` stay put (their
    /// roles are exchanged by swapping `can` and `var` instead).
    pub fn dual_reflect(&self) -> Exponent {
        if self.is_interior() {
            Exponent(rat(-1) - &self.0)
        } else {
            self.clone()
        }
    }

    /// Full reflection `ν ↦ -1 - ν`, swapping the boundary points; this
    /// is the left/right side-change relabeling.
    pub fn full_reflect(&self) -> Exponent {
        Exponent(rat(-1) - &self.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of the reduced grid: one exponent per axis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GridIndex(pub Vec<Exponent>);

impl GridIndex {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coord(&self, axis: usize) -> &Exponent {
        &self.0[axis]
    }

    /// Replaces the coordinate on one axis.
    pub fn with_coord(&self, axis: usize, e: Exponent) -> GridIndex {
        let mut coords = self.0.clone();
        coords[axis] = e;
        GridIndex(coords)
    }

    /// The index one step up along `axis` (`-1 ↦ 0`); caller must ensure
    /// the coordinate is `-1`.
    pub fn up(&self, axis: usize) -> GridIndex {
        debug_assert!(self.coord(axis).is_minus_one());
        self.with_coord(axis, Exponent::zero())
    }

    pub fn from_rats(coords: Vec<Rat>) -> Result<Self, ModuleError> {
        Ok(GridIndex(coords.into_iter().map(Exponent::new).collect::<Result<_, _>>()?))
    }
}

impl fmt::Display for GridIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// One stored slice: its dimension and the Euler operator per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceData {
    pub dim: usize,
    pub theta: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCModule {
    axes: usize,
    slices: BTreeMap<GridIndex, SliceData>,
    var: BTreeMap<(usize, GridIndex), Matrix>,
    can: BTreeMap<(usize, GridIndex), Matrix>,
}

impl NCModule {
    /// Assembles a module from raw parts, dropping zero-dimensional
    /// slices and filling in the implicit empty `can`/`var` maps. Shape
    /// errors are violations reported by [`NCModule::validate`], not
    /// construction failures.
    pub fn assemble(
        axes: usize,
        slices: BTreeMap<GridIndex, SliceData>,
        var: BTreeMap<(usize, GridIndex), Matrix>,
        can: BTreeMap<(usize, GridIndex), Matrix>,
    ) -> NCModule {
        let slices: BTreeMap<GridIndex, SliceData> =
            slices.into_iter().filter(|(_, s)| s.dim > 0).collect();
        let mut module = NCModule { axes, slices, var: BTreeMap::new(), can: BTreeMap::new() };
        for (index, slice) in &module.slices {
            for axis in 0..axes {
                if !index.coord(axis).is_minus_one() {
                    continue;
                }
                let up_dim = module.dim(&index.up(axis));
                let key = (axis, index.clone());
                let v = var
                    .get(&key)
                    .cloned()
                    .unwrap_or_else(|| Matrix::zeros(up_dim, slice.dim));
                let c = can
                    .get(&key)
                    .cloned()
                    .unwrap_or_else(|| Matrix::zeros(slice.dim, up_dim));
                module.var.insert(key.clone(), v);
                module.can.insert(key, c);
            }
        }
        module
    }

    /// The zero module on `axes` axes.
    pub fn zero(axes: usize) -> NCModule {
        NCModule { axes, slices: BTreeMap::new(), var: BTreeMap::new(), can: BTreeMap::new() }
    }

    /// The structure sheaf model: one slice at `ν = 0` with `Θ = 0`.
    pub fn structure_sheaf(axes: usize) -> NCModule {
        let index = GridIndex(vec![Exponent::zero(); axes]);
        let mut slices = BTreeMap::new();
        slices.insert(index, SliceData { dim: 1, theta: vec![Matrix::zeros(1, 1); axes] });
        NCModule::assemble(axes, slices, BTreeMap::new(), BTreeMap::new())
    }

    /// The point module on zero axes: a single 1-dimensional space.
    pub fn point() -> NCModule {
        let mut slices = BTreeMap::new();
        slices.insert(GridIndex(Vec::new()), SliceData { dim: 1, theta: Vec::new() });
        NCModule::assemble(0, slices, BTreeMap::new(), BTreeMap::new())
    }

    /// The delta module on one axis: one slice at `ν = -1` with `Θ = -1`.
    pub fn delta() -> NCModule {
        let index = GridIndex(vec![Exponent::minus_one()]);
        let mut slices = BTreeMap::new();
        slices.insert(index, SliceData { dim: 1, theta: vec![Matrix::scalar(1, &rat(-1))] });
        NCModule::assemble(1, slices, BTreeMap::new(), BTreeMap::new())
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    pub fn slices(&self) -> &BTreeMap<GridIndex, SliceData> {
        &self.slices
    }

    pub fn indices(&self) -> impl Iterator<Item = &GridIndex> {
        self.slices.keys()
    }

    pub fn dim(&self, index: &GridIndex) -> usize {
        self.slices.get(index).map_or(0, |s| s.dim)
    }

    pub fn total_dim(&self) -> usize {
        self.slices.values().map(|s| s.dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn theta(&self, axis: usize, index: &GridIndex) -> Matrix {
        self.slices
            .get(index)
            .map(|s| s.theta[axis].clone())
            .unwrap_or_else(|| Matrix::zeros(0, 0))
    }

    /// `var_i[ν] : V_ν → V_{ν+1_i}`, defined for `ν_i = -1`.
    pub fn var(&self, axis: usize, index: &GridIndex) -> Matrix {
        debug_assert!(index.coord(axis).is_minus_one());
        self.var
            .get(&(axis, index.clone()))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(&index.up(axis)), self.dim(index)))
    }

    /// `can_i[ν] : V_{ν+1_i} → V_ν`, defined for `ν_i = -1`.
    pub fn can(&self, axis: usize, index: &GridIndex) -> Matrix {
        debug_assert!(index.coord(axis).is_minus_one());
        self.can
            .get(&(axis, index.clone()))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(index), self.dim(&index.up(axis))))
    }

    /// Map of slice dimensions, for reporting and dimension tests.
    pub fn dims(&self) -> BTreeMap<GridIndex, usize> {
        self.slices.iter().map(|(k, s)| (k.clone(), s.dim)).collect()
    }

    /// All grid identities, exactly. An empty list means the data is a
    /// genuine module.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.axes == 0 {
            // A point module: a bare vector space, nothing to check.
            for (index, _) in &self.slices {
                if !index.is_empty() {
                    out.push(Violation::new(None, Some(index.clone()), "index length"));
                }
            }
            return out;
        }
        for (index, slice) in &self.slices {
            if index.len() != self.axes {
                out.push(Violation::new(None, Some(index.clone()), "index length"));
                continue;
            }
            if slice.theta.len() != self.axes {
                out.push(Violation::new(None, Some(index.clone()), "theta count"));
                continue;
            }
            for axis in 0..self.axes {
                let theta = &slice.theta[axis];
                if theta.rows() != slice.dim || theta.cols() != slice.dim {
                    out.push(Violation::new(
                        Some(axis),
                        Some(index.clone()),
                        "theta shape",
                    ));
                    continue;
                }
                let shifted = theta - &Matrix::scalar(slice.dim, index.coord(axis).value());
                if !shifted.pow(slice.dim.max(1)).is_zero() {
                    out.push(Violation::new(
                        Some(axis),
                        Some(index.clone()),
                        "nilpotency of theta - ν",
                    ));
                }
                for other in axis + 1..self.axes {
                    if !theta.commutes_with(&slice.theta[other]) {
                        out.push(Violation::new(
                            Some(axis),
                            Some(index.clone()),
                            format!("theta commutation with axis {}", other + 1),
                        ));
                    }
                }
            }
        }
        if !out.is_empty() {
            // Shape problems make the relation checks meaningless.
            return out;
        }

        for (index, slice) in &self.slices {
            for axis in 0..self.axes {
                if !index.coord(axis).is_minus_one() {
                    continue;
                }
                let up = index.up(axis);
                let up_dim = self.dim(&up);
                let var = self.var(axis, index);
                let can = self.can(axis, index);
                if var.rows() != up_dim || var.cols() != slice.dim {
                    out.push(Violation::new(Some(axis), Some(index.clone()), "var shape"));
                    continue;
                }
                if can.rows() != slice.dim || can.cols() != up_dim {
                    out.push(Violation::new(Some(axis), Some(index.clone()), "can shape"));
                    continue;
                }
                let theta = &slice.theta[axis];
                let expected = theta + &Matrix::identity(slice.dim);
                if &can * &var != expected {
                    out.push(Violation::new(
                        Some(axis),
                        Some(index.clone()),
                        "can∘var = theta + id",
                    ));
                }
                if up_dim > 0 {
                    let theta_up = self.theta(axis, &up);
                    if &var * &can != theta_up {
                        out.push(Violation::new(
                            Some(axis),
                            Some(up.clone()),
                            "var∘can = theta",
                        ));
                    }
                } else if !(&var * &can).is_zero() {
                    out.push(Violation::new(Some(axis), Some(up.clone()), "var∘can = theta"));
                }

                // Structure maps of the other axes commute with this pair.
                for other in 0..self.axes {
                    if other == axis {
                        continue;
                    }
                    let theta_src = &slice.theta[other];
                    let theta_dst = self.theta(other, &up);
                    if &theta_dst * &var != &var * theta_src {
                        out.push(Violation::new(
                            Some(other),
                            Some(index.clone()),
                            format!("theta/var square with axis {}", axis + 1),
                        ));
                    }
                    if theta_src * &can != &can * &theta_dst {
                        out.push(Violation::new(
                            Some(other),
                            Some(index.clone()),
                            format!("theta/can square with axis {}", axis + 1),
                        ));
                    }
                    if index.coord(other).is_minus_one() {
                        let up_other = index.up(other);
                        let var_i = self.var(axis, index);
                        let var_j = self.var(other, index);
                        let var_i_shift = self.var(axis, &up_other);
                        let var_j_shift = self.var(other, &up);
                        let can_i = self.can(axis, index);
                        let can_j = self.can(other, index);
                        let can_i_shift = self.can(axis, &up_other);
                        let can_j_shift = self.can(other, &up);
                        if other > axis {
                            if &var_j_shift * &var_i != &var_i_shift * &var_j {
                                out.push(Violation::new(
                                    Some(axis),
                                    Some(index.clone()),
                                    format!("var/var square with axis {}", other + 1),
                                ));
                            }
                            if &can_j * &can_i_shift != &can_i * &can_j_shift {
                                out.push(Violation::new(
                                    Some(axis),
                                    Some(index.clone()),
                                    format!("can/can square with axis {}", other + 1),
                                ));
                            }
                        }
                        // var_i ∘ can_j = can_j ∘ var_i across the shifted pair.
                        if &var_i * &can_j != &can_j_shift * &var_i_shift {
                            out.push(Violation::new(
                                Some(axis),
                                Some(index.clone()),
                                format!("var/can square with axis {}", other + 1),
                            ));
                        }
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
            Err(ModuleError::InvalidModule(violations))
        }
    }

    /// Dimension of the eigenslice of the full (non-reduced) module at
    /// an arbitrary rational exponent tuple: each coordinate is
    /// translated by an integer onto the reduced grid — integers `≥ 0`
    /// land on the `0` slice, integers `≤ -1` on the `-1` slice, and
    /// fractional values on their representative in `(-1, 0)`.
    pub fn eigenspace_dim(&self, point: &[Rat]) -> usize {
        assert_eq!(point.len(), self.axes, "exponent tuple length");
        let mut coords = Vec::with_capacity(self.axes);
        for x in point {
            let e = if is_integer(x) {
                if x.is_negative() {
                    Exponent::minus_one()
                } else {
                    Exponent::zero()
                }
            } else {
                let rep = x - x.floor() - rat(1);
                Exponent::new(rep).expect("fractional representative is interior")
            };
            coords.push(e);
        }
        self.dim(&GridIndex(coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;

    pub(crate) fn meromorphic_disk() -> NCModule {
        // The z-inverted structure sheaf on the disk: slices of dimension
        // one at 0 and -1, var = 1, can = 0.
        let zero_idx = GridIndex(vec![Exponent::zero()]);
        let neg_idx = GridIndex(vec![Exponent::minus_one()]);
        let mut slices = BTreeMap::new();
        slices.insert(zero_idx, SliceData { dim: 1, theta: vec![Matrix::zeros(1, 1)] });
        slices.insert(
            neg_idx.clone(),
            SliceData { dim: 1, theta: vec![Matrix::scalar(1, &rat(-1))] },
        );
        let mut var = BTreeMap::new();
        var.insert((0, neg_idx.clone()), Matrix::identity(1));
        let mut can = BTreeMap::new();
        can.insert((0, neg_idx), Matrix::zeros(1, 1));
        NCModule::assemble(1, slices, var, can)
    }

    #[test]
    fn structure_sheaf_is_valid() {
        assert!(NCModule::structure_sheaf(1).validate().is_empty());
        assert!(NCModule::structure_sheaf(3).validate().is_empty());
        assert!(NCModule::delta().validate().is_empty());
        assert!(meromorphic_disk().validate().is_empty());
    }

    #[test]
    fn fractional_theta_on_zero_slice_is_reported() {
        let index = GridIndex(vec![Exponent::zero()]);
        let mut slices = BTreeMap::new();
        slices.insert(
            index,
            SliceData { dim: 1, theta: vec![Matrix::scalar(1, &ratio(1, 2))] },
        );
        let m = NCModule::assemble(1, slices, BTreeMap::new(), BTreeMap::new());
        let violations = m.validate();
        assert_eq!(violations.len(), 1);
        assert!(violations[0].identity.contains("nilpotency"));
    }

    #[test]
    fn broken_can_var_relation_is_reported() {
        let mut m = meromorphic_disk();
        // Perturb one entry: can = 1 makes can∘var = 1 ≠ theta + id = 0.
        let neg_idx = GridIndex(vec![Exponent::minus_one()]);
        m.can.insert((0, neg_idx), Matrix::identity(1));
        let violations = m.validate();
        assert!(violations.iter().any(|v| v.identity.contains("can∘var")));
        assert!(violations.iter().any(|v| v.identity.contains("var∘can")));
    }

    #[test]
    fn supported_slice_needs_theta_minus_one() {
        // A -1 slice with no 0 partner forces theta = -1 exactly.
        let index = GridIndex(vec![Exponent::minus_one()]);
        let mut slices = BTreeMap::new();
        slices.insert(
            index,
            SliceData { dim: 1, theta: vec![Matrix::scalar(1, &ratio(-1, 1)).scale(&ratio(1, 2))] },
        );
        let m = NCModule::assemble(1, slices, BTreeMap::new(), BTreeMap::new());
        assert!(!m.validate().is_empty());
    }

    #[test]
    fn eigenspace_translation() {
        let merom = meromorphic_disk();
        for k in -3i64..=3 {
            assert_eq!(merom.eigenspace_dim(&[rat(k)]), 1, "k = {k}");
        }
        assert_eq!(merom.eigenspace_dim(&[ratio(1, 2)]), 0);

        let delta = NCModule::delta();
        for k in 1i64..=4 {
            assert_eq!(delta.eigenspace_dim(&[rat(-k)]), 1);
        }
        assert_eq!(delta.eigenspace_dim(&[rat(0)]), 0);
        assert_eq!(delta.eigenspace_dim(&[rat(2)]), 0);

        let o = NCModule::structure_sheaf(1);
        assert_eq!(o.eigenspace_dim(&[rat(5)]), 1);
        assert_eq!(o.eigenspace_dim(&[rat(-1)]), 0);
        assert_eq!(o.eigenspace_dim(&[ratio(-5, 2)]), 0);
    }
}
