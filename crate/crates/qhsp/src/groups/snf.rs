//! Integer matrices, Smith normal form and Hermite-style column reduction.
//!
//! All arithmetic is arbitrary precision so that the unimodular
//! accumulations in the transform matrices can never overflow.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from rows of machine integers.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].len();
        assert!(cols > 0, "matrix needs at least one column");
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(l, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let pivot = (k + 1..n).find(|&i| !a[(i, k)].is_zero());
                match pivot {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(r, j)]);
            self[(r, j)] = v;
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let sub = q * &self[(src, j)];
            self[(dst, j)] -= sub;
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let sub = q * &self[(i, src)];
            self[(i, dst)] -= sub;
        }
    }

    /// row[dst] += row[src]
    fn add_row(&mut self, dst: usize, src: usize) {
        for j in 0..self.cols {
            let add = self[(src, j)].clone();
            self[(dst, j)] += add;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Result of a Smith decomposition: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal with a divisibility chain.
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithNormalForm {
    /// Diagonal entries of `d` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form by elementary row/column reduction.
///
/// Invariants on return: `u * m * v = d`; `|det u| = |det v| = 1`;
/// `d` is diagonal with non-negative entries and `d[i] | d[i+1]`.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let steps = rows.min(cols);

    for t in 0..steps {
        'pivot: loop {
            // Smallest nonzero entry of the remaining submatrix becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if d[(bi, bj)].abs() <= d[(i, j)].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let (pi, pj) = match best {
                Some(p) => p,
                None => break 'pivot, // remaining submatrix is zero
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                let q = &d[(i, t)] / &d[(t, t)];
                d.sub_row(i, t, &q);
                u.sub_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = &d[(t, j)] / &d[(t, t)];
                d.sub_col(j, t, &q);
                v.sub_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot; // residues left behind, shrink the pivot again
            }
            // Fold in any entry the pivot does not divide yet.
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        d.add_row(t, i);
                        u.add_row(t, i);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithNormalForm { u, d, v }
}

/// Hermite-style column reduction of the lattice spanned by `columns`
/// (each of length `dim`). The lattice must have full rank `dim`; the
/// result is a lower-triangular basis with positive diagonal and
/// off-diagonal entries reduced modulo the diagonal below them.
pub fn column_hermite_basis(dim: usize, columns: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let mut work: Vec<Vec<BigInt>> = columns
        .iter()
        .map(|c| {
            assert_eq!(c.len(), dim, "column length mismatch");
            c.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(dim);

    for r in 0..dim {
        // gcd-combine all work columns on row r, leaving one pivot column
        loop {
            let mut nz: Vec<usize> = (0..work.len()).filter(|&c| !work[c][r].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| work[a][r].abs().cmp(&work[b][r].abs()));
            let small = nz[0];
            for &c in &nz[1..] {
                let q = &work[c][r] / &work[small][r];
                for row in 0..dim {
                    let sub = &q * &work[small][row];
                    work[c][row] -= sub;
                }
            }
        }
        let pivot_idx = (0..work.len()).find(|&c| !work[c][r].is_zero())?;
        let mut pivot = work.swap_remove(pivot_idx);
        if pivot[r].is_negative() {
            for e in pivot.iter_mut() {
                *e = -std::mem::take(e);
            }
        }
        basis.push(pivot);
    }

    // Reduce entries below each pivot modulo the later pivots.
    for j in (0..dim).rev() {
        for i in j + 1..dim {
            let q = basis[j][i].div_euclid(&basis[i][i]);
            if q.is_zero() {
                continue;
            }
            let reducer = basis[i].clone();
            for row in 0..dim {
                let sub = &q * &reducer[row];
                basis[j][row] -= sub;
            }
        }
    }

    let out: Vec<Vec<i64>> = basis
        .iter()
        .map(|col| {
            col.iter()
                .map(|e| i64::try_from(e).expect("hermite basis entry exceeds i64"))
                .collect()
        })
        .collect();
    Some(out)
}

trait DivEuclidBig {
    fn div_euclid(&self, rhs: &BigInt) -> BigInt;
}

impl DivEuclidBig for BigInt {
    fn div_euclid(&self, rhs: &BigInt) -> BigInt {
        let (q, r) = num_integer::Integer::div_rem(self, rhs);
        if r.is_negative() {
            if rhs.is_negative() {
                q + 1
            } else {
                q - 1
            }
        } else {
            q
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_snf_contract(m: &IntegerMatrix) {
        let snf = smith_normal_form(m);
        // u * m * v = d
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d);
        // unimodular transforms
        assert_eq!(snf.u.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().abs(), BigInt::one());
        // diagonal with divisibility chain
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "chain broken: {:?}", diag);
            } else {
                assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn snf_2x2_example() {
        // d1 = gcd of entries = 2, d1*d2 = |det| = 8
        let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![4, 4]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_snf_contract(&m);
    }

    #[test]
    fn snf_identity_and_scalar() {
        let id = IntegerMatrix::identity(2);
        let snf = smith_normal_form(&id);
        assert_eq!(snf.diagonal(), vec![BigInt::one(), BigInt::one()]);
        let m = IntegerMatrix::from_rows(&[vec![6]]);
        assert_eq!(smith_normal_form(&m).diagonal(), vec![BigInt::from(6)]);
    }

    #[test]
    fn snf_random_matrices_hold_contract() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_517f);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-20..=20)).collect())
                .collect();
            let m = IntegerMatrix::from_rows(&data);
            assert_snf_contract(&m);

            // independent cross-checks on square nonsingular matrices
            if rows == cols {
                let det = m.determinant().abs();
                if !det.is_zero() {
                    let prod = smith_normal_form(&m)
                        .diagonal()
                        .iter()
                        .product::<BigInt>();
                    assert_eq!(prod, det);
                }
            }
            let gcd_all = data
                .iter()
                .flatten()
                .fold(BigInt::zero(), |acc, &x| num_integer::Integer::gcd(&acc, &BigInt::from(x)));
            let d1 = smith_normal_form(&m).diagonal()[0].clone();
            assert_eq!(d1, gcd_all.abs());
        }
    }

    #[test]
    fn hermite_basis_is_lower_triangular() {
        // lattice of <(2,1)> inside Z_4 x Z_2, relations included
        let cols = vec![vec![2, 1], vec![4, 0], vec![0, 2]];
        let basis = column_hermite_basis(2, &cols).unwrap();
        for (j, col) in basis.iter().enumerate() {
            for (i, &e) in col.iter().enumerate() {
                if i < j {
                    assert_eq!(e, 0);
                }
                if i == j {
                    assert!(e > 0);
                }
            }
        }
        // index of the lattice in Z^2 = product of pivots = 4, so |H| = 8/4 = 2
        let det: i64 = (0..2).map(|i| basis[i][i]).product();
        assert_eq!(det, 4);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntegerMatrix::from_rows(&[vec![3, 1, 2], vec![0, -2, 5], vec![7, 0, 1]]);
        // 3*(-2*1-5*0) - 1*(0*1-5*7) + 2*(0*0+2*7) = -6 + 35 + 28 = 57
        assert_eq!(m.determinant(), BigInt::from(57));
    }
}
