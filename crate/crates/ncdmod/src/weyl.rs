//! Finite-order symbol calculus: the duality involution on truncated
//! induced modules and the left/right side change on grid modules.
//!
//! Symbols are finite sums of `η∂^μ ⊗ ∂^ν` with formal basis labels on
//! the left; the involution exchanges the two module structures,
//!
//! ```text
//!   ι(η ⊗ ∂^ν) = Σ_{k ≤ ν} C(ν, k) · η∂^{ν-k} ⊗ (-∂)^k,
//! ```
//!
//! extended by right-multiplication bookkeeping on the labels. It is an
//! involution, exhaustively checkable degree by degree.

use crate::matrix::Matrix;
use crate::module::{GridIndex, ModuleError, NCModule, SliceData};
use crate::rat::{rat, Rat};
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolError {
    /// Re-expansion left the configured order bound.
    OrderOverflow,
    /// Malformed multi-indices.
    InvalidElement(String),
}

impl fmt::Display for SymbolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolError::OrderOverflow => write!(f, "symbol order bound exceeded"),
            SymbolError::InvalidElement(s) => write!(f, "invalid symbol element: {s}"),
        }
    }
}

impl std::error::Error for SymbolError {}

pub type MultiIndex = Vec<u32>;

fn total(index: &MultiIndex) -> u32 {
    index.iter().sum()
}

/// A finite sum of basis symbols `η∂^μ ⊗ ∂^ν` with rational weights.
/// Both multi-indices are bounded by `order_bound` in total degree; no
/// zero-weight terms are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolElement {
    vars: usize,
    order_bound: u32,
    terms: BTreeMap<(MultiIndex, MultiIndex), Rat>,
}

pub const DEFAULT_ORDER_BOUND: u32 = 4;

impl SymbolElement {
    pub fn new(
        vars: usize,
        order_bound: u32,
        terms: BTreeMap<(MultiIndex, MultiIndex), Rat>,
    ) -> Result<SymbolElement, SymbolError> {
        for ((label, right), _) in &terms {
            if label.len() != vars || right.len() != vars {
                return Err(SymbolError::InvalidElement("multi-index length mismatch".into()));
            }
            if total(label) > order_bound || total(right) > order_bound {
                return Err(SymbolError::OrderOverflow);
            }
        }
        let terms = terms.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(SymbolElement { vars, order_bound, terms })
    }

    /// The basis symbol `η∂^label ⊗ ∂^right`.
    pub fn basis(
        vars: usize,
        order_bound: u32,
        label: MultiIndex,
        right: MultiIndex,
    ) -> Result<SymbolElement, SymbolError> {
        let mut terms = BTreeMap::new();
        terms.insert((label, right), rat(1));
        SymbolElement::new(vars, order_bound, terms)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<(MultiIndex, MultiIndex), Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn binomial_rat(n: u32, k: u32) -> Rat {
    let mut result = 1i64;
    for i in 0..k.min(n - k) {
        result = result * (n - i) as i64 / (i + 1) as i64;
    }
    rat(result)
}

/// Iterates over all `k ≤ ν` componentwise.
fn sub_indices(nu: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for &limit in nu {
        let mut next = Vec::with_capacity(out.len() * (limit as usize + 1));
        for prefix in out {
            for k in 0..=limit {
                let mut index = prefix.clone();
                index.push(k);
                next.push(index);
            }
        }
        out = next;
    }
    out
}

/// The involution exchanging the two right-module structures of the
/// induced module: term-wise
/// `η∂^μ ⊗ ∂^ν ↦ Σ_{k≤ν} (-1)^{|k|} C(ν,k) η∂^{μ+ν-k} ⊗ ∂^k`.
pub fn involution_iota(x: &SymbolElement) -> Result<SymbolElement, SymbolError> {
    let mut terms: BTreeMap<(MultiIndex, MultiIndex), Rat> = BTreeMap::new();
    for ((label, right), weight) in &x.terms {
        for k in sub_indices(right) {
            let mut coefficient = weight.clone();
            let mut new_label = label.clone();
            for i in 0..x.vars {
                coefficient = coefficient * binomial_rat(right[i], k[i]);
                new_label[i] = new_label[i] + right[i] - k[i];
            }
            if total(&k) % 2 == 1 {
                coefficient = -coefficient;
            }
            if total(&new_label) > x.order_bound {
                return Err(SymbolError::OrderOverflow);
            }
            let entry = terms.entry((new_label, k)).or_insert_with(Rat::zero);
            *entry += coefficient;
        }
    }
    SymbolElement::new(x.vars, x.order_bound, terms)
}

/// Left/right side change on a grid module: the index relabeling
/// `ν ↦ -1-ν` with `Θ ↦ -id-Θ`, `var ↦ -can`, `can ↦ var` (the sign is
/// forced by `can∘var = Θ + id`). Applying it twice negates both
/// boundary maps, which is canonically isomorphic to the identity via
/// the signed identity morphism.
pub fn side_change(module: &NCModule) -> Result<NCModule, ModuleError> {
    module.require_valid()?;
    let axes = module.axes();
    let reflect = |index: &GridIndex| -> GridIndex {
        GridIndex(index.0.iter().map(|e| e.full_reflect()).collect())
    };
    let mut slices = BTreeMap::new();
    let mut var = BTreeMap::new();
    let mut can = BTreeMap::new();
    for (index, slice) in module.slices() {
        let new_index = reflect(index);
        let theta = (0..axes)
            .map(|axis| {
                &(-&slice.theta[axis]) - &Matrix::identity(slice.dim)
            })
            .collect();
        slices.insert(new_index.clone(), SliceData { dim: slice.dim, theta });
        for axis in 0..axes {
            if new_index.coord(axis).is_minus_one() {
                // The original pair lives at the reflected index with the
                // axis coordinate lowered: ν = reflect(new_index).down(axis).
                let original = index.with_coord(axis, crate::module::Exponent::minus_one());
                debug_assert!(index.coord(axis).is_zero());
                var.insert((axis, new_index.clone()), -&module.can(axis, &original));
                can.insert((axis, new_index.clone()), module.var(axis, &original));
            }
        }
    }
    Ok(NCModule::assemble(axes, slices, var, can))
}
