//! Linear algebra over F_2 on bit-vector rows.
//!
//! Vectors are `u64` masks (bit `j` = coordinate `j`), so anything up to
//! 64 columns fits; the solvers here never need more than a dozen.

/// Rectangular matrix over F_2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<u64>,
}

impl F2Matrix {
    pub fn new(cols: usize) -> Self {
        assert!(cols <= 64);
        F2Matrix { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, rows: Vec<u64>) -> Self {
        assert!(cols <= 64);
        let mask = mask(cols);
        F2Matrix {
            cols,
            rows: rows.into_iter().map(|r| r & mask).collect(),
        }
    }

    pub fn push_row(&mut self, row: u64) {
        self.rows.push(row & mask(self.cols));
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        reduce(self.rows.clone()).len()
    }

    /// Basis of `{x : Mx = 0}`; its size is `cols - rank`.
    pub fn nullspace(&self) -> Vec<u64> {
        // Row-reduce, remember pivot columns, then read one basis vector
        // off each free column.
        let mut rows = self.rows.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(sel) = (r..rows.len()).find(|&i| rows[i] >> c & 1 == 1) else {
                continue;
            };
            rows.swap(r, sel);
            let pivot_row = rows[r];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && *row >> c & 1 == 1 {
                    *row ^= pivot_row;
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        let pivot_set: u64 = pivots.iter().fold(0, |m, &c| m | 1 << c);
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set >> free & 1 == 1 {
                continue;
            }
            let mut v: u64 = 1 << free;
            for (i, &pc) in pivots.iter().enumerate() {
                if rows[i] >> free & 1 == 1 {
                    v |= 1 << pc;
                }
            }
            basis.push(v);
        }
        basis
    }
}

fn mask(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

fn reduce(mut rows: Vec<u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in rows.drain(..) {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// Solve `Mx = b` over F_2. Returns a particular solution and a basis of
/// the homogeneous nullspace, or `None` when inconsistent.
pub fn solve_affine(m: &F2Matrix, rhs: &[bool]) -> Option<(u64, Vec<u64>)> {
    assert_eq!(m.rows().len(), rhs.len());
    let cols = m.cols();
    // augment with the rhs in bit position `cols`
    let mut rows: Vec<u64> = m
        .rows()
        .iter()
        .zip(rhs)
        .map(|(&r, &b)| r | (u64::from(b) << cols))
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i] >> c & 1 == 1) else {
            continue;
        };
        rows.swap(r, sel);
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row >> c & 1 == 1 {
                *row ^= pivot_row;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    // leftover rows must be 0 = 0
    if rows[r..].iter().any(|&row| row >> cols & 1 == 1) {
        return None;
    }
    let mut particular = 0u64;
    for (i, &pc) in pivots.iter().enumerate() {
        if rows[i] >> cols & 1 == 1 {
            particular |= 1 << pc;
        }
    }
    Some((particular, m.nullspace()))
}

/// Incrementally maintained span of bit-vectors.
#[derive(Debug, Clone, Default)]
pub struct F2Span {
    cols: usize,
    basis: Vec<u64>,
}

impl F2Span {
    pub fn new(cols: usize) -> Self {
        assert!(cols <= 64);
        F2Span { cols, basis: Vec::new() }
    }

    /// Insert a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: u64) -> bool {
        let mut v = v & mask(self.cols);
        for &b in &self.basis {
            v = v.min(v ^ b);
        }
        if v == 0 {
            return false;
        }
        self.basis.push(v);
        self.basis.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn contains(&self, v: u64) -> bool {
        let mut v = v & mask(self.cols);
        for &b in &self.basis {
            v = v.min(v ^ b);
        }
        v == 0
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Basis of the orthogonal complement under the dot-product pairing.
    pub fn complement(&self) -> Vec<u64> {
        F2Matrix::from_rows(self.cols, self.basis.clone()).nullspace()
    }
}
