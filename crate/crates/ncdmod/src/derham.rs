//! De Rham stalk cohomology of grid modules.
//!
//! The stalk of the de Rham complex at the origin only sees the boundary
//! sub-grid: the tensor product over all axes of the two-term pieces
//! `[V(ν_i=0) --can_i--> V(ν_i=-1)]`. Interior slices carry invertible
//! Euler operators and contribute nothing. Degrees are reported in
//! `[-n, 0]` with the all-zero corner in degree `-n`, so the dimensions
//! agree with the cohomology of the punctured polydisk placed in
//! degrees `[0, n]` shifted down by `n`.

use crate::koszul::{complex_cohomology, koszul_cohomology};
use crate::local_system::LocalSystemSpec;
use crate::matrix::Matrix;
use crate::module::{Exponent, GridIndex, ModuleError, NCModule};
use std::collections::BTreeMap;

/// Per-degree stalk cohomology with the nilpotent parts of the Euler
/// operators carried onto it (the Euler operators themselves commute
/// with `can` only up to the eigenvalue shift, so the nilpotent parts
/// are the honest chain maps).
#[derive(Debug, Clone)]
pub struct DrStalk {
    pub degrees: BTreeMap<i64, DrDegree>,
}

#[derive(Debug, Clone)]
pub struct DrDegree {
    pub dim: usize,
    pub euler_nilpotents: Vec<Matrix>,
}

impl DrStalk {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().filter(|(_, d)| d.dim > 0).map(|(&j, d)| (j, d.dim)).collect()
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, |d| d.dim)
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(|d| d.dim).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|(&j, d)| if j.rem_euclid(2) == 0 { d.dim as i64 } else { -(d.dim as i64) })
            .sum()
    }
}

/// Cohomology of the boundary corner complex of `module`, reported in
/// degrees `[-n, 0]`, with the induced Euler operators per degree.
pub fn dr_stalk(module: &NCModule) -> Result<DrStalk, ModuleError> {
    module.require_valid()?;
    let n = module.axes();

    // Corners: stored indices with every coordinate 0 or -1, arranged by
    // complex position = n - #zeros.
    let mut corners: Vec<Vec<GridIndex>> = vec![Vec::new(); n + 1];
    for index in module.indices() {
        if (0..n).all(|i| !index.coord(i).is_interior()) {
            let zeros = (0..n).filter(|&i| index.coord(i).is_zero()).count();
            corners[n - zeros].push(index.clone());
        }
    }
    let mut offsets: Vec<BTreeMap<GridIndex, usize>> = Vec::with_capacity(n + 1);
    let mut dims = Vec::with_capacity(n + 1);
    for level in &corners {
        let mut map = BTreeMap::new();
        let mut total = 0;
        for index in level {
            map.insert(index.clone(), total);
            total += module.dim(index);
        }
        offsets.push(map);
        dims.push(total);
    }

    let mut diffs = Vec::with_capacity(n);
    for p in 0..n {
        let mut d = Matrix::zeros(dims[p + 1], dims[p]);
        for index in &corners[p] {
            let col = offsets[p][index];
            for axis in 0..n {
                if !index.coord(axis).is_zero() {
                    continue;
                }
                let down = index.with_coord(axis, Exponent::minus_one());
                let Some(&row) = offsets[p + 1].get(&down) else {
                    continue;
                };
                // Tensor-complex sign: parity of -1 coordinates on
                // earlier axes.
                let sign =
                    (0..axis).filter(|&j| index.coord(j).is_minus_one()).count() % 2;
                let block = module.can(axis, &down);
                let signed = if sign == 0 { block } else { -&block };
                d.add_block(row, col, &signed);
            }
        }
        diffs.push(d);
    }

    let carried: Vec<Vec<Matrix>> = (0..=n)
        .map(|p| {
            (0..n)
                .map(|axis| {
                    let blocks: Vec<Matrix> = corners[p]
                        .iter()
                        .map(|index| {
                            let dim = module.dim(index);
                            &module.theta(axis, index)
                                - &Matrix::scalar(dim, index.coord(axis).value())
                        })
                        .collect();
                    let refs: Vec<&Matrix> = blocks.iter().collect();
                    if refs.is_empty() {
                        Matrix::zeros(0, 0)
                    } else {
                        Matrix::block_diag(&refs)
                    }
                })
                .collect()
        })
        .collect();

    let summands = complex_cohomology(&dims, &diffs, &carried);
    let degrees = summands
        .into_iter()
        .enumerate()
        .map(|(p, s)| {
            (p as i64 - n as i64, DrDegree { dim: s.dim, euler_nilpotents: s.induced })
        })
        .collect();
    Ok(DrStalk { degrees })
}

/// Cohomology dimensions of the punctured polydisk with coefficients in
/// the local system: the Koszul cohomology of the Euler operators
/// `Θ_i = α_i + N_i` on the total block space, in degrees `[0, n]`.
pub fn dr_global_punctured(
    spec: &LocalSystemSpec,
) -> Result<BTreeMap<usize, usize>, ModuleError> {
    spec.validate()?;
    let thetas: Vec<Matrix> = (0..spec.axes)
        .map(|axis| {
            let blocks: Vec<Matrix> = spec
                .blocks
                .iter()
                .map(|b| &b.nilpotents[axis] + &Matrix::scalar(b.dim, &b.alpha[axis]))
                .collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            Matrix::block_diag(&refs)
        })
        .collect();
    let result = koszul_cohomology(&thetas, &[])
        .map_err(|e| ModuleError::InvalidSpec(e.to_string()))?;
    Ok(result.dims())
}
