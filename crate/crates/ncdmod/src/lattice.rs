//! Integer lattice kernels via unimodular column reduction.
//!
//! Used by the topological nearby-cycle oracle: the Milnor fiber of a
//! monomial inside the torus is governed by the kernel of the degree map
//! `ℤ^n → ℤ`, and a unimodular change of basis exhibits both a basis of
//! that kernel and a lift of the generator of the image.

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

/// Reduction of a single integer row `deg` by unimodular column
/// operations. Returns `(g, columns)` where `g > 0` generates the image
/// of `deg`, `columns[0]` maps to `g`, and `columns[1..]` form a basis
/// of the kernel lattice of `deg`.
pub fn row_reduce_unimodular(deg: &[i64]) -> (i64, Vec<Vec<i64>>) {
    let n = deg.len();
    assert!(n > 0, "empty degree vector");
    let mut r = deg.to_vec();
    let mut cols: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1 } else { 0 }).collect())
        .collect();

    // Make sure position 0 carries a nonzero entry.
    if r[0] == 0 {
        if let Some(j) = (1..n).find(|&j| r[j] != 0) {
            r.swap(0, j);
            cols.swap(0, j);
        } else {
            panic!("zero degree vector");
        }
    }

    for j in 1..n {
        if r[j] == 0 {
            continue;
        }
        let (a, b) = (r[0], r[j]);
        let (g, s, t) = ext_gcd(a, b);
        let col0 = cols[0].clone();
        let colj = cols[j].clone();
        for i in 0..n {
            cols[0][i] = s * col0[i] + t * colj[i];
            cols[j][i] = -(b / g) * col0[i] + (a / g) * colj[i];
        }
        r[0] = g;
        r[j] = 0;
    }

    if r[0] < 0 {
        for v in cols[0].iter_mut() {
            *v = -*v;
        }
        r[0] = -r[0];
    }
    (r[0], cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn single_entry() {
        let (g, cols) = row_reduce_unimodular(&[3]);
        assert_eq!(g, 3);
        assert_eq!(cols, vec![vec![1]]);
    }

    #[test]
    fn reduction_certificates() {
        for deg in [vec![1, 1], vec![2, 3], vec![2, 2], vec![2, 4, 6], vec![3, 0, 2, 0]] {
            let (g, cols) = row_reduce_unimodular(&deg);
            let expected: i64 = deg.iter().fold(0, |acc, &m| {
                let (gg, _, _) = ext_gcd(acc, m);
                gg
            });
            assert_eq!(g, expected.abs().max(expected));
            assert_eq!(dot(&deg, &cols[0]), g);
            for col in &cols[1..] {
                assert_eq!(dot(&deg, col), 0);
            }
            // Unimodularity: the columns span all of ℤ^n, checked on the
            // standard basis via exact rational solve plus integrality.
            use crate::matrix::Matrix;
            use crate::rat::rat;
            let n = deg.len();
            let u = Matrix::from_fn(n, n, |i, j| rat(cols[j][i]));
            let solved = u.solve(&Matrix::identity(n)).unwrap();
            for e in solved.entries() {
                assert!(crate::rat::is_integer(e), "non-unimodular reduction");
            }
        }
    }
}
