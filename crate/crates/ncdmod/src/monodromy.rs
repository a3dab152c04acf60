//! Ingestion of commuting quasi-unipotent monodromy matrices.
//!
//! Over the rationals the eigenvalues of a quasi-unipotent operator are
//! roots of unity that come in Galois orbits, so the joint primary
//! decomposition of a commuting family is computed entirely with
//! polynomial projectors: split by the cyclotomic-power factors of each
//! characteristic polynomial, then refine with the finite group
//! generated by the semisimple parts until every component carries a
//! single orbit of joint eigenvalue tuples. Orbits are expanded
//! symbolically — one block per orbit member, never by adjoining roots
//! of unity — and nilpotent parts are the exact logarithms of the
//! unipotent factors (the transcendental `-1/2πi` scale is absorbed, see
//! the crate docs on rescaling invariance).

use crate::local_system::{LocalSystemSpec, SystemBlock};
use crate::matrix::{LinalgError, Matrix};
use crate::poly::{char_poly, cyclotomic, euler_phi, Poly};
use crate::projector::{exp_nilpotent, nilpotent_log, primary_projectors};
use crate::rat::{rat, Rat};
use num::One;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonodromyError {
    /// Some characteristic polynomial has a non-cyclotomic factor.
    NotQuasiUnipotent,
    /// The supplied operators do not commute.
    NonCommuting,
    /// Joint nilpotent structure on a nontrivial Galois orbit cannot be
    /// realized over the rationals by this routine.
    OrbitNilpotentUnsupported,
    /// Invalid input shapes.
    InvalidInput(String),
}

impl fmt::Display for MonodromyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonodromyError::NotQuasiUnipotent => {
                write!(f, "operator is not quasi-unipotent (non-cyclotomic factor)")
            }
            MonodromyError::NonCommuting => write!(f, "monodromy operators do not commute"),
            MonodromyError::OrbitNilpotentUnsupported => write!(
                f,
                "nontrivial Galois orbit with incompatible joint nilpotent structure"
            ),
            MonodromyError::InvalidInput(s) => write!(f, "invalid monodromy input: {s}"),
        }
    }
}

impl std::error::Error for MonodromyError {}

impl From<LinalgError> for MonodromyError {
    fn from(e: LinalgError) -> Self {
        MonodromyError::InvalidInput(e.to_string())
    }
}

/// Factors a characteristic polynomial as a product of cyclotomic
/// powers `∏ Φ_d^{k_d}`; fails if a non-cyclotomic factor remains.
/// Candidates are the `d` with `φ(d) ≤ deg`, which covers every
/// cyclotomic divisor of a polynomial of that degree.
fn cyclotomic_factorization(p: &Poly) -> Result<BTreeMap<usize, usize>, MonodromyError> {
    let deg = p.degree().ok_or(MonodromyError::NotQuasiUnipotent)?;
    let mut remaining = p.monic();
    let mut powers = BTreeMap::new();
    let bound = 2 * deg * deg + 2;
    for d in 1..=bound.max(2) {
        if euler_phi(d) > deg {
            continue;
        }
        let phi = cyclotomic(d);
        let mut count = 0;
        while let Some(q) = remaining.exact_div(&phi) {
            remaining = q;
            count += 1;
        }
        if count > 0 {
            powers.insert(d, count);
        }
        if remaining.is_one() {
            break;
        }
    }
    if remaining.is_one() {
        Ok(powers)
    } else {
        Err(MonodromyError::NotQuasiUnipotent)
    }
}

/// One joint-primary component of the decomposition: a basis of the
/// subspace (columns in ambient coordinates) plus the restrictions of
/// the operators.
struct Component {
    basis: Matrix,
    ops: Vec<Matrix>,
}

impl Component {
    fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Splits off the projector images of `projectors` (in component
    /// coordinates), restricting all carried operators.
    fn split(&self, projectors: &[Matrix]) -> Vec<Component> {
        let mut out = Vec::new();
        for projector in projectors {
            let sub = projector.image_basis();
            if sub.cols() == 0 {
                continue;
            }
            let ops = self
                .ops
                .iter()
                .map(|op| sub.solve(&(op * &sub)).expect("projector image is invariant"))
                .collect();
            out.push(Component { basis: &self.basis * &sub, ops });
        }
        out
    }
}

/// Order of a matrix of finite order, probing the divisors of `bound`.
fn matrix_order(m: &Matrix, bound: usize) -> usize {
    let mut divisors: Vec<usize> = (1..=bound).filter(|d| bound % d == 0).collect();
    divisors.sort_unstable();
    for d in divisors {
        if m.pow(d).is_identity() {
            return d;
        }
    }
    panic!("order does not divide the bound");
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Combines commuting elements of finite order into one of order
/// `lcm(ord a, ord b)` by the coprime-power trick.
fn combine_generators(a: &Matrix, ord_a: usize, b: &Matrix, ord_b: usize) -> (Matrix, usize) {
    let target = lcm(ord_a, ord_b);
    // Split target = m' · n' with m' | ord_a, n' | ord_b, gcd(m',n') = 1:
    // give each prime power of target to a side whose order contains it.
    let mut m_part = 1usize;
    let mut n_part = 1usize;
    let mut t = target;
    let mut p = 2;
    while p * p <= t {
        if t % p == 0 {
            let mut power = 1;
            while t % p == 0 {
                t /= p;
                power *= p;
            }
            if ord_a % power == 0 {
                m_part *= power;
            } else {
                n_part *= power;
            }
        }
        p += 1;
    }
    if t > 1 {
        if ord_a % t == 0 {
            m_part *= t;
        } else {
            n_part *= t;
        }
    }
    let g = &a.pow(ord_a / m_part) * &b.pow(ord_b / n_part);
    (g, target)
}

/// Jordan partition of a nilpotent from its rank sequence, as block
/// sizes in descending order.
fn jordan_sizes_from_ranks(dim: usize, ranks: &[usize]) -> Vec<usize> {
    // ranks[k] = rank(N^{k+1}); blocks of size ≥ k+1: r_k - r_{k+1}.
    let mut full = Vec::with_capacity(ranks.len() + 1);
    full.push(dim);
    full.extend_from_slice(ranks);
    full.push(0);
    let mut sizes = Vec::new();
    for k in 1..full.len() - 1 {
        // Number of blocks of size exactly k: r_{k-1} - 2 r_k + r_{k+1}.
        let count = (full[k - 1] + full[k + 1]).saturating_sub(2 * full[k]);
        for _ in 0..count {
            sizes.push(k);
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(sizes.iter().sum::<usize>(), dim);
    sizes
}

fn jordan_nilpotent(sizes: &[usize]) -> Matrix {
    let dim: usize = sizes.iter().sum();
    let mut m = Matrix::zeros(dim, dim);
    let mut offset = 0;
    for &size in sizes {
        for i in 0..size.saturating_sub(1) {
            m.set(offset + i, offset + i + 1, rat(1));
        }
        offset += size;
    }
    m
}

/// Converts commuting quasi-unipotent rational matrices into local
/// system data: exponents in `(-1, 0]` per joint Galois orbit member,
/// dimensions from the orbit multiplicity, and nilpotent parts from the
/// exact logarithms of the unipotent factors.
pub fn monodromy_to_spec(operators: &[Matrix]) -> Result<LocalSystemSpec, MonodromyError> {
    if operators.is_empty() {
        return Err(MonodromyError::InvalidInput("no operators".into()));
    }
    let dim = operators[0].rows();
    for op in operators {
        if !op.is_square() || op.rows() != dim {
            return Err(MonodromyError::InvalidInput("operators must be square, equal size".into()));
        }
    }
    for (i, a) in operators.iter().enumerate() {
        for b in &operators[i + 1..] {
            if !a.commutes_with(b) {
                return Err(MonodromyError::NonCommuting);
            }
        }
    }
    if dim == 0 {
        return Err(MonodromyError::InvalidInput("zero-dimensional input".into()));
    }
    let axes = operators.len();

    // Axis-by-axis cyclotomic primary splitting.
    let mut components = vec![Component {
        basis: Matrix::identity(dim),
        ops: operators.to_vec(),
    }];
    for axis in 0..axes {
        let mut next = Vec::new();
        for component in components {
            let chi = char_poly(&component.ops[axis]);
            let powers = cyclotomic_factorization(&chi)?;
            if powers.len() == 1 {
                next.push(component);
                continue;
            }
            let factors: Vec<Poly> =
                powers.iter().map(|(&d, &k)| cyclotomic(d).pow(k)).collect();
            let projectors = primary_projectors(&component.ops[axis], &factors)?;
            next.extend(component.split(&projectors));
        }
        components = next;
    }

    // Semisimple/unipotent factorizations per component, then refine by
    // the finite abelian group generated by the semisimple parts until
    // every element has a single cyclotomic order on the component.
    let mut finished: Vec<Component> = Vec::new();
    let mut queue = components;
    while let Some(component) = queue.pop() {
        let mut semis = Vec::with_capacity(axes);
        for op in &component.ops {
            let chi = char_poly(op);
            let powers = cyclotomic_factorization(&chi)?;
            debug_assert_eq!(powers.len(), 1);
            let d = *powers.keys().next().unwrap();
            let log_u = nilpotent_log(&op.pow(d))?.scale(&inverse_of(d));
            let semi = op * &exp_nilpotent(&(-&log_u))?;
            semis.push(semi);
        }
        // Enumerate the group generated by the semisimple parts.
        let mut group: Vec<Matrix> = vec![Matrix::identity(component.dim())];
        let mut frontier = group.clone();
        while !frontier.is_empty() {
            let mut fresh = Vec::new();
            for g in &frontier {
                for s in &semis {
                    let h = g * s;
                    if !group.contains(&h) && !fresh.contains(&h) {
                        fresh.push(h);
                    }
                }
            }
            group.extend(fresh.iter().cloned());
            frontier = fresh;
        }
        let mut split_happened = false;
        for w in &group {
            let powers = cyclotomic_factorization(&char_poly(w))?;
            if powers.len() > 1 {
                let factors: Vec<Poly> =
                    powers.iter().map(|(&d, &k)| cyclotomic(d).pow(k)).collect();
                let projectors = primary_projectors(w, &factors)?;
                queue.extend(component.split(&projectors));
                split_happened = true;
                break;
            }
        }
        if !split_happened {
            finished.push(component);
        }
    }

    // Expand each joint-primary component into one block per orbit
    // member of its joint eigenvalue tuple.
    let mut blocks: BTreeMap<Vec<Rat>, SystemBlock> = BTreeMap::new();
    for component in finished {
        let d = component.dim();
        let mut orders = Vec::with_capacity(axes);
        let mut semis = Vec::with_capacity(axes);
        let mut logs = Vec::with_capacity(axes);
        for op in &component.ops {
            let chi = char_poly(op);
            let powers = cyclotomic_factorization(&chi)?;
            let ord = *powers.keys().next().unwrap();
            let log_u = nilpotent_log(&op.pow(ord))?.scale(&inverse_of(ord));
            let semi = op * &exp_nilpotent(&(-&log_u))?;
            debug_assert_eq!(op, &(&semi * &exp_nilpotent(&log_u).unwrap()));
            orders.push(ord);
            semis.push(semi);
            logs.push(log_u);
        }
        // Find a generator of the (cyclic) group of semisimple parts.
        let exponent_bound = orders.iter().copied().fold(1, lcm);
        let mut generator = Matrix::identity(d);
        let mut gen_order = 1;
        for (semi, &ord) in semis.iter().zip(&orders) {
            let actual = matrix_order(semi, ord);
            let (g, o) = combine_generators(&generator, gen_order, semi, actual);
            generator = g;
            gen_order = o;
        }
        debug_assert_eq!(exponent_bound % gen_order, 0);
        let e = gen_order;
        // Discrete logarithms of each semisimple part w.r.t. the generator.
        let mut exponents = Vec::with_capacity(axes);
        for semi in &semis {
            let mut power = Matrix::identity(d);
            let mut found = None;
            for a in 0..e {
                if &power == semi {
                    found = Some(a);
                    break;
                }
                power = &power * &generator;
            }
            exponents.push(found.expect("semisimple part lies in the cyclic group"));
        }

        let orbit_size = euler_phi(e);
        if d % orbit_size != 0 {
            return Err(MonodromyError::InvalidInput(
                "component dimension incompatible with orbit size".into(),
            ));
        }
        let member_dim = d / orbit_size;

        // Per-axis nilpotents for the orbit members.
        let member_nilpotents: Vec<Matrix> = if orbit_size == 1 {
            logs.clone()
        } else if logs.iter().all(|n| n.is_zero()) {
            vec![Matrix::zeros(member_dim, member_dim); axes]
        } else {
            // Jordan type per axis from scaled rank sequences. The joint
            // structure across axes is checked by monomial ranks below.
            let mut candidates = Vec::with_capacity(axes);
            for log_u in &logs {
                let mut ranks = Vec::new();
                let mut power = log_u.clone();
                for _ in 1..=member_dim {
                    let r = power.rank();
                    if r % orbit_size != 0 {
                        return Err(MonodromyError::OrbitNilpotentUnsupported);
                    }
                    ranks.push(r / orbit_size);
                    power = &power * log_u;
                }
                candidates.push(jordan_nilpotent(&jordan_sizes_from_ranks(member_dim, &ranks)));
            }
            for (i, a) in candidates.iter().enumerate() {
                for b in &candidates[i + 1..] {
                    if !a.commutes_with(b) {
                        return Err(MonodromyError::OrbitNilpotentUnsupported);
                    }
                }
            }
            // Verify the joint monomial ranks scale correctly.
            for mask in 1u32..(1 << axes.min(8)) {
                let mut product_full = Matrix::identity(d);
                let mut product_member = Matrix::identity(member_dim);
                for axis in 0..axes {
                    if mask & (1 << axis) != 0 {
                        product_full = &product_full * &logs[axis];
                        product_member = &product_member * &candidates[axis];
                    }
                }
                if product_full.rank() != orbit_size * product_member.rank() {
                    return Err(MonodromyError::OrbitNilpotentUnsupported);
                }
            }
            candidates
        };

        for j in 1..=e {
            if gcd(j, e) != 1 {
                continue;
            }
            // The member tagged by the Galois automorphism ζ ↦ ζ^j: the
            // eigenvalue of T_i is e^{-2πi·(j·a_i/e)}, normalized into
            // (-1, 0] as an exponent.
            let alpha: Vec<Rat> = exponents
                .iter()
                .map(|&a| {
                    let x = crate::rat::frac(&(rat((j * a) as i64) / rat(e as i64)));
                    if num::Zero::is_zero(&x) {
                        x
                    } else {
                        x - rat(1)
                    }
                })
                .collect();
            blocks
                .entry(alpha.clone())
                .and_modify(|block| {
                    let merged: Vec<Matrix> = block
                        .nilpotents
                        .iter()
                        .zip(&member_nilpotents)
                        .map(|(a, b)| Matrix::block_diag(&[a, b]))
                        .collect();
                    block.dim += member_dim;
                    block.nilpotents = merged;
                })
                .or_insert_with(|| SystemBlock {
                    alpha,
                    dim: member_dim,
                    nilpotents: member_nilpotents.clone(),
                });
        }
    }

    let spec = LocalSystemSpec { axes, blocks: blocks.into_values().collect() };
    spec.validate().map_err(|e| MonodromyError::InvalidInput(e.to_string()))?;
    Ok(spec)
}

/// Characteristic polynomial of axis `i` predicted by a spec: blocks
/// regrouped into Galois orbits contribute cyclotomic powers. Used to
/// verify round trips on ingested monodromy.
pub fn predicted_char_poly(spec: &LocalSystemSpec, axis: usize) -> Poly {
    // A block exponent -k/d in lowest terms means an eigenvalue of
    // order d; the φ(d) conjugate blocks together contribute Φ_d^dim.
    let mut result = Poly::one();
    let mut order_dims: BTreeMap<usize, usize> = BTreeMap::new();
    for block in &spec.blocks {
        let alpha = &block.alpha[axis];
        let x = crate::rat::frac(&(-alpha.clone()));
        let d: usize = x.denom().to_string().parse().expect("small denominator");
        order_dims.entry(d).and_modify(|t| *t += block.dim).or_insert(block.dim);
    }
    for (d, total) in order_dims {
        let phi = euler_phi(d);
        assert_eq!(total % phi, 0, "incomplete Galois orbit in spec");
        result = &result * &cyclotomic(d).pow(total / phi);
    }
    result
}

fn inverse_of(d: usize) -> Rat {
    Rat::one() / rat(d as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;
    use num::Zero;

    #[test]
    fn unipotent_jordan_block() {
        let t = Matrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        let spec = monodromy_to_spec(&[t]).unwrap();
        assert_eq!(spec.blocks.len(), 1);
        let block = &spec.blocks[0];
        assert_eq!(block.alpha, vec![Rat::zero()]);
        assert_eq!(block.dim, 2);
        assert_eq!(block.nilpotents[0], Matrix::from_int_rows(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn minus_one_gives_half_exponent() {
        let t = Matrix::from_int_rows(&[&[-1]]);
        let spec = monodromy_to_spec(&[t]).unwrap();
        assert_eq!(spec.blocks.len(), 1);
        assert_eq!(spec.blocks[0].alpha, vec![ratio(-1, 2)]);
        assert!(spec.blocks[0].nilpotents[0].is_zero());
    }

    #[test]
    fn order_four_rotation_carries_orbit() {
        let t = Matrix::from_int_rows(&[&[0, -1], &[1, 0]]);
        let spec = monodromy_to_spec(&[t]).unwrap();
        let alphas: Vec<Vec<Rat>> = spec.blocks.iter().map(|b| b.alpha.clone()).collect();
        assert_eq!(alphas, vec![vec![ratio(-3, 4)], vec![ratio(-1, 4)]]);
        assert!(spec.blocks.iter().all(|b| b.dim == 1));
    }

    #[test]
    fn joint_structure_distinguishes_inverse() {
        let t = Matrix::from_int_rows(&[&[0, -1], &[1, 0]]);
        let tinv = Matrix::from_int_rows(&[&[0, 1], &[-1, 0]]);
        let same = monodromy_to_spec(&[t.clone(), t.clone()]).unwrap();
        let inverse = monodromy_to_spec(&[t, tinv]).unwrap();
        let tuples =
            |s: &LocalSystemSpec| s.blocks.iter().map(|b| b.alpha.clone()).collect::<Vec<_>>();
        assert_eq!(
            tuples(&same),
            vec![vec![ratio(-3, 4), ratio(-3, 4)], vec![ratio(-1, 4), ratio(-1, 4)]]
        );
        assert_eq!(
            tuples(&inverse),
            vec![vec![ratio(-3, 4), ratio(-1, 4)], vec![ratio(-1, 4), ratio(-3, 4)]]
        );
    }

    #[test]
    fn char_poly_reproduction() {
        // Mixed: a -1 eigenvalue block and a unipotent Jordan block.
        let t = Matrix::from_int_rows(&[&[-1, 0, 0], &[0, 1, 1], &[0, 0, 1]]);
        let spec = monodromy_to_spec(&[t.clone()]).unwrap();
        assert_eq!(predicted_char_poly(&spec, 0), char_poly(&t).monic());
    }

    #[test]
    fn rejects_non_quasi_unipotent() {
        let t = Matrix::from_int_rows(&[&[2]]);
        assert_eq!(monodromy_to_spec(&[t]), Err(MonodromyError::NotQuasiUnipotent));
    }

    #[test]
    fn rejects_non_commuting() {
        let a = Matrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        let b = Matrix::from_int_rows(&[&[1, 0], &[1, 1]]);
        assert_eq!(monodromy_to_spec(&[a, b]), Err(MonodromyError::NonCommuting));
    }

    #[test]
    fn conjugated_order_six() {
        // A 2x2 integer matrix of order 6: eigenvalues are primitive
        // sixth roots of unity.
        let t = Matrix::from_int_rows(&[&[1, -1], &[1, 0]]);
        assert!(t.pow(6).is_identity());
        let spec = monodromy_to_spec(&[t]).unwrap();
        let alphas: Vec<Vec<Rat>> = spec.blocks.iter().map(|b| b.alpha.clone()).collect();
        assert_eq!(alphas, vec![vec![ratio(-5, 6)], vec![ratio(-1, 6)]]);
    }
}
