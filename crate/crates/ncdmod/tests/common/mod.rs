//! Shared helpers for the integration suites: seeded random module and
//! morphism generators, a Hom-space solver for small modules, and an
//! isomorphism search used to verify "canonically isomorphic" claims.

#![allow(dead_code)]

use ncdmod::dual::dual;
use ncdmod::kashiwara::kashiwara_push;
use ncdmod::local_system::{deligne_meromorphic, LocalSystemSpec, SystemBlock};
use ncdmod::localize::localize;
use ncdmod::matrix::Matrix;
use ncdmod::module::{GridIndex, NCModule};
use ncdmod::morphism::{cokernel, direct_sum, image, kernel, NCMorphism};
use ncdmod::rat::{rat, ratio, Rat};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn small_rat(rng: &mut StdRng) -> Rat {
    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

fn nonzero_small_rat(rng: &mut StdRng) -> Rat {
    loop {
        let x = small_rat(rng);
        if x != rat(0) {
            return x;
        }
    }
}

/// A random exponent from a small pool, biased toward 0 so boundary
/// pairs show up often.
fn random_alpha(rng: &mut StdRng) -> Rat {
    match rng.gen_range(0..6) {
        0 | 1 | 2 => rat(0),
        3 => ratio(-1, 2),
        4 => ratio(-1, 3),
        _ => ratio(-3, 4),
    }
}

/// Random commuting nilpotents: rational multiples of powers of one
/// upper-shift matrix.
fn random_nilpotents(rng: &mut StdRng, dim: usize, axes: usize) -> Vec<Matrix> {
    let mut shift = Matrix::zeros(dim, dim);
    for i in 0..dim.saturating_sub(1) {
        shift.set(i, i + 1, rat(1));
    }
    (0..axes)
        .map(|_| {
            let power = rng.gen_range(1..=dim.max(1));
            shift.pow(power).scale(&small_rat(rng))
        })
        .collect()
}

pub fn random_local_system(rng: &mut StdRng, axes: usize, max_blocks: usize) -> LocalSystemSpec {
    let block_count = rng.gen_range(1..=max_blocks);
    let mut blocks: Vec<SystemBlock> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..block_count {
        let alpha: Vec<Rat> = (0..axes).map(|_| random_alpha(rng)).collect();
        if !seen.insert(alpha.clone()) {
            continue;
        }
        let dim = rng.gen_range(1..=2);
        blocks.push(SystemBlock {
            alpha,
            dim,
            nilpotents: random_nilpotents(rng, dim, axes),
        });
    }
    LocalSystemSpec { axes, blocks }
}

/// Random valid module: Deligne extensions, duals, pushforwards, direct
/// sums, kernels and cokernels of random endomorphisms.
pub fn random_module(rng: &mut StdRng, axes: usize) -> NCModule {
    let base = deligne_meromorphic(&random_local_system(rng, axes, 2)).unwrap();
    let mut module = match rng.gen_range(0..4) {
        0 => base,
        1 => dual(&base).unwrap(),
        2 => {
            if axes >= 2 {
                let inner = deligne_meromorphic(&random_local_system(rng, axes - 1, 2)).unwrap();
                let pushed = kashiwara_push(&inner, rng.gen_range(0..axes));
                direct_sum(&base, &pushed)
            } else {
                direct_sum(&base, &NCModule::delta())
            }
        }
        _ => {
            let f = random_endomorphism(rng, &base);
            if rng.gen_bool(0.5) {
                kernel(&f).unwrap().0
            } else {
                cokernel(&f).unwrap().0
            }
        }
    };
    if module.is_zero() {
        module = deligne_meromorphic(&LocalSystemSpec::rank_one(vec![rat(0); axes])).unwrap();
    }
    assert!(module.validate().is_empty());
    module
}

/// A random endomorphism: a polynomial in the commuting nilpotent parts
/// of the Euler operators plus a scalar. These always commute with all
/// structure maps.
pub fn random_endomorphism(rng: &mut StdRng, module: &NCModule) -> NCMorphism {
    let axes = module.axes();
    let scalar = small_rat(rng);
    let monomials: Vec<(Rat, Vec<usize>)> = (0..rng.gen_range(1..=2))
        .map(|_| {
            let exps: Vec<usize> = (0..axes).map(|_| rng.gen_range(0..=1)).collect();
            (small_rat(rng), exps)
        })
        .collect();
    let maps: BTreeMap<GridIndex, Matrix> = module
        .slices()
        .iter()
        .map(|(index, slice)| {
            let mut total = Matrix::scalar(slice.dim, &scalar);
            for (coefficient, exps) in &monomials {
                if exps.iter().all(|&e| e == 0) {
                    total = &total + &Matrix::scalar(slice.dim, coefficient);
                    continue;
                }
                let mut product = Matrix::identity(slice.dim);
                for axis in 0..axes {
                    let nilpotent = &module.theta(axis, index)
                        - &Matrix::scalar(slice.dim, index.coord(axis).value());
                    for _ in 0..exps[axis] {
                        product = &product * &nilpotent;
                    }
                }
                total = &total + &product.scale(coefficient);
            }
            (index.clone(), total)
        })
        .collect();
    NCMorphism::new(module.clone(), module.clone(), maps)
}

/// Random morphism built from canonical maps decorated with random
/// endomorphisms, so sources and targets vary.
pub fn random_morphism(rng: &mut StdRng, axes: usize) -> NCMorphism {
    let module = random_module(rng, axes);
    let core = match rng.gen_range(0..5) {
        0 => NCMorphism::identity(&module),
        1 => localize(&module, &[rng.gen_range(0..axes)]).unwrap().1,
        2 => {
            let f = random_endomorphism(rng, &module);
            kernel(&f).unwrap().1
        }
        3 => {
            let f = random_endomorphism(rng, &module);
            cokernel(&f).unwrap().1
        }
        _ => random_endomorphism(rng, &module),
    };
    let pre = random_endomorphism(rng, core.source());
    let post = random_endomorphism(rng, core.target());
    NCMorphism::compose(&post, &NCMorphism::compose(&core, &pre))
}

/// Short exact sequence `0 → ker f → M → im f → 0` from a morphism.
pub fn ses_of_morphism(
    f: &NCMorphism,
) -> (NCMorphism, NCMorphism) {
    let (_, incl) = kernel(f).unwrap();
    let (_, img_incl) = image(f).unwrap();
    let cores = ncdmod::morphism::corestrict_to_image(f, &img_incl);
    (incl, cores)
}

/// Basis of the space of morphisms `M → N`, found by solving the
/// commutation constraints exactly. Meant for small modules.
pub fn hom_basis(source: &NCModule, target: &NCModule) -> Vec<NCMorphism> {
    assert_eq!(source.axes(), target.axes());
    let axes = source.axes();

    // Unknown blocks live on indices present in both modules.
    let mut offsets: BTreeMap<GridIndex, usize> = BTreeMap::new();
    let mut total_vars = 0usize;
    for index in source.indices() {
        let (dm, dn) = (source.dim(index), target.dim(index));
        if dm > 0 && dn > 0 {
            offsets.insert(index.clone(), total_vars);
            total_vars += dm * dn;
        }
    }
    if total_vars == 0 {
        return Vec::new();
    }

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let var_of = |offsets: &BTreeMap<GridIndex, usize>,
                  index: &GridIndex,
                  r: usize,
                  c: usize,
                  source: &NCModule| {
        offsets.get(index).map(|&base| base + r * source.dim(index) + c)
    };

    // Adds the equations for A·f_idx_right, accumulated into `row` form:
    // each scalar equation  Σ coeff·var = 0.
    let mut push_equation = |terms: Vec<(GridIndex, Matrix, Matrix, Rat)>| {
        // Each term is (index, left, right, sign): sign · left · f_index · right.
        let mut shape: Option<(usize, usize)> = None;
        for (_, left, right, _) in &terms {
            let s = (left.rows(), right.cols());
            assert!(shape.is_none() || shape == Some(s));
            shape = Some(s);
        }
        let Some((rows_out, cols_out)) = shape else { return };
        for r in 0..rows_out {
            for c in 0..cols_out {
                let mut row = vec![Rat::from_integer(0.into()); total_vars];
                let mut nontrivial = false;
                for (index, left, right, sign) in &terms {
                    let dm = source.dim(index);
                    let dn = target.dim(index);
                    if dm == 0 || dn == 0 {
                        continue;
                    }
                    for i in 0..dn {
                        for j in 0..dm {
                            let coeff = left.at(r, i) * right.at(j, c) * sign;
                            if coeff != rat(0) {
                                if let Some(v) = var_of(&offsets, index, i, j, source) {
                                    row[v] += coeff;
                                    nontrivial = true;
                                }
                            }
                        }
                    }
                }
                if nontrivial {
                    rows.push(row);
                }
            }
        }
    };

    let all_indices: Vec<GridIndex> =
        source.indices().chain(target.indices()).cloned().collect();
    for index in &all_indices {
        let dm = source.dim(index);
        let dn = target.dim(index);
        for axis in 0..axes {
            if dm > 0 && dn > 0 {
                // f Θ^M - Θ^N f = 0.
                push_equation(vec![
                    (
                        index.clone(),
                        Matrix::identity(dn),
                        source.theta(axis, index),
                        rat(1),
                    ),
                    (
                        index.clone(),
                        target.theta(axis, index),
                        Matrix::identity(dm),
                        rat(-1),
                    ),
                ]);
            }
            if index.coord(axis).is_minus_one() {
                let up = index.up(axis);
                // f_up var^M - var^N f = 0.
                push_equation(vec![
                    (
                        up.clone(),
                        Matrix::identity(target.dim(&up)),
                        source.var(axis, index),
                        rat(1),
                    ),
                    (
                        index.clone(),
                        target.var(axis, index),
                        Matrix::identity(dm),
                        rat(-1),
                    ),
                ]);
                // f can^M - can^N f_up = 0.
                push_equation(vec![
                    (
                        index.clone(),
                        Matrix::identity(dn),
                        source.can(axis, index),
                        rat(1),
                    ),
                    (
                        up.clone(),
                        target.can(axis, index),
                        Matrix::identity(source.dim(&up)),
                        rat(-1),
                    ),
                ]);
            }
        }
    }

    let constraint = if rows.is_empty() {
        Matrix::zeros(0, total_vars)
    } else {
        Matrix::from_fn(rows.len(), total_vars, |r, c| rows[r][c].clone())
    };
    let kernel_basis = constraint.kernel_basis();

    (0..kernel_basis.cols())
        .map(|k| {
            let mut maps = BTreeMap::new();
            for (index, &base) in &offsets {
                let (dm, dn) = (source.dim(index), target.dim(index));
                let m = Matrix::from_fn(dn, dm, |r, c| {
                    kernel_basis.at(base + r * dm + c, k).clone()
                });
                maps.insert(index.clone(), m);
            }
            NCMorphism::new(source.clone(), target.clone(), maps)
        })
        .collect()
}

/// Searches for a slice-wise invertible morphism `M → N`; sound for the
/// small modules used in tests (an isomorphism exists iff a generic
/// element of the morphism space is invertible).
pub fn modules_isomorphic(rng: &mut StdRng, a: &NCModule, b: &NCModule) -> bool {
    if a.dims() != b.dims() {
        return false;
    }
    if a.is_zero() {
        return true;
    }
    let basis = hom_basis(a, b);
    if basis.is_empty() {
        return false;
    }
    for candidate in &basis {
        if candidate.is_iso() {
            assert!(candidate.validate().is_empty());
            return true;
        }
    }
    for _ in 0..25 {
        let mut combo = NCMorphism::zero(a, b);
        for element in &basis {
            combo = combo.add(&element.scale(&nonzero_small_rat(rng)));
        }
        if combo.is_iso() {
            assert!(combo.validate().is_empty());
            return true;
        }
    }
    false
}

/// Total dimension per degree of a graded result.
pub fn graded_dims(graded: &ncdmod::cech::GradedResult) -> BTreeMap<i64, usize> {
    graded.iter().map(|(&j, m)| (j, m.total_dim())).collect()
}
