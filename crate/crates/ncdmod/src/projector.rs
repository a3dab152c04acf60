//! Polynomial projector decompositions and nilpotent logarithms.
//!
//! Given an operator annihilated by a product of pairwise coprime
//! polynomial factors, Bezout cofactors yield mutually orthogonal
//! projectors onto the primary components — the generalized Jordan
//! decomposition over a field that need not be algebraically closed.

use crate::matrix::{LinalgError, Matrix};
use crate::poly::Poly;
use crate::rat::{rat, Rat};
use num::One;

/// Cofactors `R_i` with `Σ R_i · P_i^∨ = 1`, where `P_i^∨` is the
/// product of all factors other than `P_i`. Each `R_i` is reduced modulo
/// `P_i`, which makes the answer unique.
pub fn bezout_cofactors(factors: &[Poly]) -> Result<Vec<Poly>, LinalgError> {
    if factors.iter().any(|p| p.is_zero()) {
        return Err(LinalgError::NotCoprime);
    }
    let mut cofactors = Vec::with_capacity(factors.len());
    for (i, p) in factors.iter().enumerate() {
        let mut complement = Poly::one();
        for (j, q) in factors.iter().enumerate() {
            if i != j {
                complement = &complement * q;
            }
        }
        let (g, s, _) = Poly::extended_gcd(&complement, p);
        if !g.is_one() {
            return Err(LinalgError::NotCoprime);
        }
        let r = if p.is_constant() { s } else { s.divrem(p).1 };
        cofactors.push(r);
    }
    let mut total = Poly::zero();
    for (i, r) in cofactors.iter().enumerate() {
        let mut complement = Poly::one();
        for (j, q) in factors.iter().enumerate() {
            if i != j {
                complement = &complement * q;
            }
        }
        total = &total + &(r * &complement);
    }
    debug_assert!(total.is_one(), "Bezout certificate failed");
    Ok(cofactors)
}

/// Mutually orthogonal projectors `π_i = Q_i(T)` onto the primary
/// components of `T` for an annihilating factorization `∏ P_i(T) = 0`
/// into pairwise coprime factors. The projectors satisfy
/// `π_i² = π_i`, `π_i π_j = 0` for `i ≠ j`, `Σ π_i = id` and
/// `P_i(T) ∘ π_i = 0`, and being polynomials in `T` they commute with
/// everything commuting with `T`.
pub fn primary_projectors(t: &Matrix, factors: &[Poly]) -> Result<Vec<Matrix>, LinalgError> {
    if !t.is_square() {
        return Err(LinalgError::ShapeMismatch("primary_projectors"));
    }
    let mut product = Poly::one();
    for p in factors {
        product = &product * p;
    }
    if !product.eval_matrix(t).is_zero() {
        return Err(LinalgError::NotAnnihilating);
    }
    let cofactors = bezout_cofactors(factors)?;
    let mut projectors = Vec::with_capacity(factors.len());
    for (i, r) in cofactors.iter().enumerate() {
        let mut complement = Poly::one();
        for (j, q) in factors.iter().enumerate() {
            if i != j {
                complement = &complement * q;
            }
        }
        projectors.push((r * &complement).eval_matrix(t));
    }
    Ok(projectors)
}

/// Logarithm of a unipotent matrix: the finite series
/// `Σ_{k≥1} (-1)^{k+1} (U - id)^k / k`, a nilpotent rational matrix.
pub fn nilpotent_log(u: &Matrix) -> Result<Matrix, LinalgError> {
    if !u.is_square() {
        return Err(LinalgError::ShapeMismatch("nilpotent_log"));
    }
    let n = u.rows();
    let e = u - &Matrix::identity(n);
    if !e.pow(n).is_zero() {
        return Err(LinalgError::NotUnipotent);
    }
    let mut log = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for k in 1..=n {
        power = &power * &e;
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
        log = &log + &power.scale(&(sign / rat(k as i64)));
    }
    Ok(log)
}

/// Exponential of a nilpotent matrix: the finite series `Σ N^k / k!`.
pub fn exp_nilpotent(n: &Matrix) -> Result<Matrix, LinalgError> {
    if !n.is_square() {
        return Err(LinalgError::ShapeMismatch("exp_nilpotent"));
    }
    let dim = n.rows();
    if !n.pow(dim).is_zero() {
        return Err(LinalgError::NotUnipotent);
    }
    let mut exp = Matrix::identity(dim);
    let mut power = Matrix::identity(dim);
    let mut factorial = Rat::one();
    for k in 1..=dim {
        power = &power * n;
        if power.is_zero() {
            break;
        }
        factorial *= rat(k as i64);
        exp = &exp + &power.scale(&(Rat::one() / factorial.clone()));
    }
    Ok(exp)
}
