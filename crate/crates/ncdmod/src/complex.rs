//! Finite complexes of grid modules and their cohomology.

use crate::module::{ModuleError, NCModule};
use crate::morphism::{cokernel, factor_through_kernel, kernel, NCMorphism};

/// A complex `C^0 → C^1 → … → C^m` of grid modules;
/// `diffs[j] : terms[j] → terms[j+1]` and consecutive differentials
/// compose to zero.
#[derive(Debug, Clone)]
pub struct NCComplex {
    pub terms: Vec<NCModule>,
    pub diffs: Vec<NCMorphism>,
}

impl NCComplex {
    pub fn new(terms: Vec<NCModule>, diffs: Vec<NCMorphism>) -> Result<NCComplex, ModuleError> {
        assert_eq!(diffs.len() + 1, terms.len(), "differential count");
        for (j, d) in diffs.iter().enumerate() {
            assert_eq!(d.source(), &terms[j], "differential source");
            assert_eq!(d.target(), &terms[j + 1], "differential target");
            d.require_valid()?;
            if j + 1 < diffs.len() {
                let dd = NCMorphism::compose(&diffs[j + 1], d);
                if !dd.is_zero() {
                    return Err(ModuleError::InvalidSpec(format!(
                        "d∘d ≠ 0 between degrees {j} and {}",
                        j + 2
                    )));
                }
            }
        }
        Ok(NCComplex { terms, diffs })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Kernel of the outgoing differential at `j` (the whole term for
    /// the last position), with its inclusion.
    pub fn cycle_space(&self, j: usize) -> Result<(NCModule, NCMorphism), ModuleError> {
        match self.diffs.get(j) {
            Some(d) => kernel(d),
            None => {
                let m = self.terms[j].clone();
                Ok((m.clone(), NCMorphism::identity(&m)))
            }
        }
    }

    /// `H^j = ker d^j / im d^{j-1}`.
    pub fn cohomology_at(&self, j: usize) -> Result<NCModule, ModuleError> {
        let (cycles, incl) = self.cycle_space(j)?;
        if j == 0 {
            return Ok(cycles);
        }
        let lifted = factor_through_kernel(&self.diffs[j - 1], &incl);
        Ok(cokernel(&lifted)?.0)
    }

    pub fn cohomology(&self) -> Result<Vec<NCModule>, ModuleError> {
        (0..self.len()).map(|j| self.cohomology_at(j)).collect()
    }
}
