//! Koszul complexes of commuting operators and cohomology of finite
//! complexes of rational vector spaces.
//!
//! The Koszul complex of commuting operators `a_1, …, a_n` on `V` has
//! degree-`j` term `V ⊗ Λ^j` and differential
//! `v ⊗ e_I ↦ Σ_{i∉I} a_i v ⊗ e_i ∧ e_I` with the standard alternating
//! sign for sorting `e_i` into `e_I`. Cohomology is returned with
//! explicit representing cocycles and with the maps induced by any extra
//! commuting operators, so monodromy data can be carried through.

use crate::matrix::{LinalgError, Matrix, SpanTracker};
use std::collections::BTreeMap;

/// Cohomology of one degree of a complex: dimension, a matrix whose
/// columns are representing cocycles in the ambient term, and the
/// operators induced on cohomology by the carried maps.
#[derive(Debug, Clone)]
pub struct CohomologySummand {
    pub dim: usize,
    pub basis: Matrix,
    pub induced: Vec<Matrix>,
}

/// Cohomology of a Koszul complex, per degree `0..=n`.
#[derive(Debug, Clone)]
pub struct KoszulResult {
    pub degrees: BTreeMap<usize, CohomologySummand>,
}

impl KoszulResult {
    pub fn dim(&self, degree: usize) -> usize {
        self.degrees.get(&degree).map_or(0, |s| s.dim)
    }

    pub fn dims(&self) -> BTreeMap<usize, usize> {
        self.degrees.iter().filter(|(_, s)| s.dim > 0).map(|(&j, s)| (j, s.dim)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(|s| s.dim).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|(&j, s)| if j % 2 == 0 { s.dim as i64 } else { -(s.dim as i64) })
            .sum()
    }
}

/// Cohomology of a finite complex `V_0 → V_1 → … → V_m` given by the
/// term dimensions and differentials (`diffs[j]: V_j → V_{j+1}`), with
/// `carried[j]` a family of operators on `V_j` forming chain maps.
/// Representatives are chosen deterministically: kernel basis columns
/// are kept in order when independent modulo the image.
pub fn complex_cohomology(
    dims: &[usize],
    diffs: &[Matrix],
    carried: &[Vec<Matrix>],
) -> Vec<CohomologySummand> {
    assert_eq!(diffs.len() + 1, dims.len(), "differential count");
    assert_eq!(carried.len(), dims.len(), "carried operator count");
    for (j, d) in diffs.iter().enumerate() {
        assert_eq!(d.cols(), dims[j], "differential domain");
        assert_eq!(d.rows(), dims[j + 1], "differential codomain");
        if j + 1 < diffs.len() {
            debug_assert!((&diffs[j + 1] * d).is_zero(), "d² ≠ 0");
        }
    }

    let mut result = Vec::with_capacity(dims.len());
    for j in 0..dims.len() {
        let kernel = match diffs.get(j) {
            Some(d) => d.kernel_basis(),
            None => Matrix::identity(dims[j]),
        };
        let image = if j == 0 { Matrix::zeros(dims[0], 0) } else { diffs[j - 1].image_basis() };

        let mut tracker = SpanTracker::new(dims[j]);
        for c in 0..image.cols() {
            tracker.add(&image.column(c));
        }
        let mut representatives = Vec::new();
        for c in 0..kernel.cols() {
            let col = kernel.column(c);
            if tracker.add(&col) {
                representatives.push(c);
            }
        }
        let basis = kernel.select_columns(&representatives);
        let dim = basis.cols();

        let induced = if dim == 0 {
            carried[j].iter().map(|_| Matrix::zeros(0, 0)).collect()
        } else {
            let ambient = if image.cols() == 0 {
                basis.clone()
            } else {
                Matrix::hstack(&[&image, &basis])
            };
            carried[j]
                .iter()
                .map(|op| {
                    let coords = ambient
                        .solve(&(op * &basis))
                        .expect("carried operator preserves kernel and image");
                    Matrix::from_fn(dim, dim, |r, c| coords.at(image.cols() + r, c).clone())
                })
                .collect()
        };

        result.push(CohomologySummand { dim, basis, induced });
    }
    result
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut result = 1usize;
    for i in 0..k.min(n - k) {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// Cohomology of the Koszul complex of the commuting operators `ops`,
/// carrying the `extra` operators (which must commute with every op)
/// onto each cohomology space.
pub fn koszul_cohomology(ops: &[Matrix], extra: &[Matrix]) -> Result<KoszulResult, LinalgError> {
    assert!(!ops.is_empty(), "need at least one operator");
    let dim = ops[0].rows();
    for op in ops.iter().chain(extra) {
        if !op.is_square() || op.rows() != dim {
            return Err(LinalgError::ShapeMismatch("koszul operators"));
        }
    }
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if !a.commutes_with(b) {
                return Err(LinalgError::NonCommuting);
            }
        }
        for x in extra {
            if !a.commutes_with(x) {
                return Err(LinalgError::NonCommuting);
            }
        }
    }

    let n = ops.len();
    // Subsets of {0..n-1} by ascending bitmask within each cardinality.
    let mut subsets: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for mask in 0..(1u32 << n) {
        subsets[mask.count_ones() as usize].push(mask);
    }
    let positions: Vec<BTreeMap<u32, usize>> = subsets
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, &m)| (m, i)).collect())
        .collect();

    let dims: Vec<usize> = (0..=n).map(|j| dim * binomial(n, j)).collect();
    let mut diffs = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = Matrix::zeros(dims[j + 1], dims[j]);
        for (source_pos, &mask) in subsets[j].iter().enumerate() {
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let target_mask = mask | (1 << i);
                let target_pos = positions[j + 1][&target_mask];
                let below = (mask & ((1 << i) - 1)).count_ones();
                let block = if below % 2 == 0 { ops[i].clone() } else { -&ops[i] };
                d.add_block(target_pos * dim, source_pos * dim, &block);
            }
        }
        diffs.push(d);
    }

    let carried: Vec<Vec<Matrix>> = (0..=n)
        .map(|j| {
            extra
                .iter()
                .map(|x| {
                    let copies: Vec<&Matrix> =
                        std::iter::repeat(x).take(binomial(n, j)).collect();
                    Matrix::block_diag(&copies)
                })
                .collect()
        })
        .collect();

    let summands = complex_cohomology(&dims, &diffs, &carried);
    Ok(KoszulResult { degrees: summands.into_iter().enumerate().collect() })
}
