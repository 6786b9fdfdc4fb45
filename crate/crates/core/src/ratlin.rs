//! Exact rational and integer linear algebra.
//!
//! Everything here works over `BigRational` (or `i64` for the lattice
//! normal forms). There is no floating point anywhere in the crate, so two
//! runs on the same input produce bit-identical matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
pub struct DimensionMismatch {
    pub left_rows: usize,
    pub left_cols: usize,
    pub right_rows: usize,
    pub right_cols: usize,
}

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        RatMatrix { rows: nrows, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged column");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn try_mul(&self, other: &RatMatrix) -> Result<RatMatrix, DimensionMismatch> {
        if self.cols != other.rows {
            return Err(DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Panics on a dimension mismatch; use [`RatMatrix::try_mul`] otherwise.
    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        self.try_mul(other).expect("matrix product")
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> RatMatrix {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] / &pivot;
                for j in c..n {
                    let v = &f * &a[(c, j)];
                    a[(r, j)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Some solution `x` of `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = rref(&aug);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(fmt_rational).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// Reduced row echelon form and the strictly increasing pivot columns.
///
/// The pivot in each column is the first nonzero entry at or below the
/// current row, so the result depends only on the input.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, row);
        let inv = a[(row, col)].recip();
        for j in col..a.cols {
            let v = &a[(row, j)] * &inv;
            a[(row, j)] = v;
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let f = a[(r, col)].clone();
            for j in col..a.cols {
                let v = &f * &a[(row, j)];
                a[(r, j)] -= v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Basis of the right kernel, one vector per free column of the RREF in
/// increasing column order.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let mut basis = Vec::new();
    let mut next_pivot = 0;
    for free in 0..m.cols() {
        if next_pivot < pivots.len() && pivots[next_pivot] == free {
            next_pivot += 1;
            continue;
        }
        let mut v = vec![Rational::zero(); m.cols()];
        v[free] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Rescales a rational vector to a primitive integer vector with the same
/// direction.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

// ---------------------------------------------------------------------------
// Integer matrices: Hermite and Smith normal forms.

/// Dense `i64` matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(cols, rows)
    }

    pub fn from_rows_with_cols(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend_from_slice(r);
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn to_rational(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = rat(self[(i, j)]);
            }
        }
        m
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// col_a <- p*col_a + q*col_b, col_b <- r*col_a + s*col_b (simultaneously).
    fn combine_cols(&mut self, a: usize, b: usize, p: i64, q: i64, r: i64, s: i64) {
        for i in 0..self.rows {
            let x = self[(i, a)];
            let y = self[(i, b)];
            self[(i, a)] = p * x + q * y;
            self[(i, b)] = r * x + s * y;
        }
    }

    fn combine_rows(&mut self, a: usize, b: usize, p: i64, q: i64, r: i64, s: i64) {
        for j in 0..self.cols {
            let x = self[(a, j)];
            let y = self[(b, j)];
            self[(a, j)] = p * x + q * y;
            self[(b, j)] = r * x + s * y;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Column-style Hermite normal form `H = M * V` with `V` unimodular.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub v: IntMatrix,
    /// Pivot position `(row, col)` of each nonzero column of `h`.
    pub pivots: Vec<(usize, usize)>,
}

/// `H` is lower echelon: column `c` has its leading entry at `pivots[c].0`,
/// the leading entries are positive, entries to the left of a pivot are
/// reduced into `[0, pivot)` and columns past the rank are zero.
pub fn hermite_normal_form(m: &IntMatrix) -> HermiteForm {
    let mut h = m.clone();
    let mut v = IntMatrix::identity(m.cols());
    let mut pivots = Vec::new();
    let mut c = 0;
    for row in 0..h.rows() {
        if c == h.cols() {
            break;
        }
        for j in c + 1..h.cols() {
            let b = h[(row, j)];
            if b == 0 {
                continue;
            }
            let a = h[(row, c)];
            let (g, x, y) = ext_gcd(a, b);
            // [a b] * [[x, -b/g], [y, a/g]] = [g 0]; the 2x2 block has det 1.
            let (p, q, r, s) = (x, y, -b / g, a / g);
            h.combine_cols(c, j, p, q, r, s);
            v.combine_cols(c, j, p, q, r, s);
        }
        if h[(row, c)] == 0 {
            continue;
        }
        if h[(row, c)] < 0 {
            for i in 0..h.rows() {
                h[(i, c)] = -h[(i, c)];
            }
            for i in 0..v.rows() {
                v[(i, c)] = -v[(i, c)];
            }
        }
        let pivot = h[(row, c)];
        for j in 0..c {
            let q = Integer::div_floor(&h[(row, j)], &pivot);
            if q != 0 {
                for i in 0..h.rows() {
                    h[(i, j)] -= q * h[(i, c)];
                }
                for i in 0..v.rows() {
                    v[(i, j)] -= q * v[(i, c)];
                }
            }
        }
        pivots.push((row, c));
        c += 1;
    }
    HermiteForm { h, v, pivots }
}

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub invariants: Vec<i64>,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut invariants = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d[(i, j)].abs();
                    if x != 0 && best.is_none_or(|(bi, bj)| x < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { d, u, v, invariants };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let pivot = d[(t, t)];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = Integer::div_floor(&d[(i, t)], &pivot);
                if q != 0 {
                    d.combine_rows(t, i, 1, 0, -q, 1);
                    u.combine_rows(t, i, 1, 0, -q, 1);
                }
                dirty |= d[(i, t)] != 0;
            }
            for j in t + 1..cols {
                let q = Integer::div_floor(&d[(t, j)], &pivot);
                if q != 0 {
                    d.combine_cols(t, j, 1, 0, -q, 1);
                    v.combine_cols(t, j, 1, 0, -q, 1);
                }
                dirty |= d[(t, j)] != 0;
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[(i, j)] % pivot != 0));
            if let Some(i) = bad {
                d.combine_rows(t, i, 1, 1, 0, 1);
                u.combine_rows(t, i, 1, 1, 0, 1);
                continue;
            }
            if pivot < 0 {
                for j in 0..cols {
                    d[(t, j)] = -d[(t, j)];
                }
                for j in 0..rows {
                    u[(t, j)] = -u[(t, j)];
                }
            }
            invariants.push(d[(t, t)]);
            break;
        }
    }
    SmithForm { d, u, v, invariants }
}

/// Both normal forms of an integer matrix.
pub fn hermite_and_smith(m: &IntMatrix) -> (HermiteForm, SmithForm) {
    (hermite_normal_form(m), smith_normal_form(m))
}

/// Coordinates of an element of `Z^n / im(M)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientCoords {
    pub free: Vec<i64>,
    /// Residues in `[0, modulus)`, one per invariant factor greater than 1.
    pub torsion: Vec<i64>,
}

/// The finitely generated group `Z^n / im(M)` for an integer `n x r`
/// matrix `M`, presented through its Smith normal form.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    ambient: usize,
    free_rows: Vec<Vec<i64>>,
    torsion_rows: Vec<(Vec<i64>, i64)>,
}

impl LatticeQuotient {
    pub fn new(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        let n = m.rows();
        let r = snf.invariants.len();
        let torsion_rows = (0..r)
            .filter(|&i| snf.invariants[i] > 1)
            .map(|i| (snf.u.row(i).to_vec(), snf.invariants[i]))
            .collect();
        // Put the free part in a canonical row-echelon shape so the
        // coordinates do not depend on how the elimination happened to run.
        let free: Vec<Vec<i64>> = (r..n).map(|i| snf.u.row(i).to_vec()).collect();
        let free_rows = if free.is_empty() {
            free
        } else {
            let hnf = hermite_normal_form(&IntMatrix::from_rows_with_cols(n, &free).transpose());
            let t = hnf.h.transpose();
            (0..free.len()).map(|i| t.row(i).to_vec()).collect()
        };
        LatticeQuotient { ambient: n, free_rows, torsion_rows }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn free_rank(&self) -> usize {
        self.free_rows.len()
    }

    pub fn torsion_moduli(&self) -> Vec<i64> {
        self.torsion_rows.iter().map(|(_, d)| *d).collect()
    }

    /// Integer functionals giving the free coordinates; they vanish on
    /// `im(M)`.
    pub fn free_functionals(&self) -> &[Vec<i64>] {
        &self.free_rows
    }

    pub fn coords(&self, a: &[i64]) -> QuotientCoords {
        assert_eq!(a.len(), self.ambient);
        let ev = |row: &[i64]| row.iter().zip(a).map(|(x, y)| x * y).sum::<i64>();
        QuotientCoords {
            free: self.free_rows.iter().map(|r| ev(r)).collect(),
            torsion: self.torsion_rows.iter().map(|(r, d)| ev(r).rem_euclid(*d)).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Mixed strict / non-strict linear feasibility by Fourier-Motzkin.

/// `coeffs . x < bound` when `strict`, else `coeffs . x <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
    pub strict: bool,
}

/// A conjunction of linear equalities and (strict or weak) inequalities in
/// a fixed ambient dimension.
#[derive(Clone, Debug, Default)]
pub struct StrictSystem {
    dim: usize,
    equalities: Vec<(Vec<Rational>, Rational)>,
    inequalities: Vec<Inequality>,
}

impl StrictSystem {
    pub fn new(dim: usize) -> Self {
        StrictSystem { dim, equalities: Vec::new(), inequalities: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_equality(&mut self, coeffs: Vec<Rational>, value: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.dim);
        self.equalities.push((coeffs, value));
        self
    }

    /// `lower < coeffs . x < upper`.
    pub fn add_strict_range(&mut self, coeffs: Vec<Rational>, lower: Rational, upper: Rational) -> &mut Self {
        self.add_lower(coeffs.clone(), lower, true);
        self.add_upper(coeffs, upper, true)
    }

    pub fn add_upper(&mut self, coeffs: Vec<Rational>, bound: Rational, strict: bool) -> &mut Self {
        assert_eq!(coeffs.len(), self.dim);
        self.inequalities.push(Inequality { coeffs, bound, strict });
        self
    }

    pub fn add_lower(&mut self, coeffs: Vec<Rational>, bound: Rational, strict: bool) -> &mut Self {
        let coeffs = coeffs.into_iter().map(|c| -c).collect();
        self.add_upper(coeffs, -bound, strict)
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|(c, v)| &dot(c, x) == v)
            && self.inequalities.iter().all(|ineq| {
                let lhs = dot(&ineq.coeffs, x);
                if ineq.strict {
                    lhs < ineq.bound
                } else {
                    lhs <= ineq.bound
                }
            })
    }

    pub fn feasible_interior_point(&self) -> Option<Vec<Rational>> {
        feasible_interior_point(self)
    }
}

/// Finds an exact point satisfying every constraint of `system`, or `None`
/// when the system is infeasible.
///
/// The equalities are solved first and the remaining inequalities are
/// rewritten in coordinates of the solution space. Fourier-Motzkin then
/// eliminates those coordinates one at a time; back-substitution picks the
/// midpoint of each open interval (or the bound itself for a half-line).
pub fn feasible_interior_point(system: &StrictSystem) -> Option<Vec<Rational>> {
    let dim = system.dim;
    // x = base + basis * t
    let (base, basis) = if system.equalities.is_empty() {
        let basis = (0..dim)
            .map(|j| (0..dim).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        (vec![Rational::zero(); dim], basis)
    } else {
        let e = RatMatrix::from_rows(dim, system.equalities.iter().map(|(c, _)| c.clone()).collect());
        let rhs: Vec<Rational> = system.equalities.iter().map(|(_, v)| v.clone()).collect();
        let base = e.solve(&rhs)?;
        (base, kernel_basis(&e))
    };
    let params = basis.len();

    let mut current: Vec<Inequality> = Vec::new();
    for ineq in &system.inequalities {
        let coeffs = basis.iter().map(|b| dot(&ineq.coeffs, b)).collect();
        let bound = &ineq.bound - dot(&ineq.coeffs, &base);
        current.push(Inequality { coeffs, bound, strict: ineq.strict });
    }
    current = normalize_constraints(current)?;

    // levels[j] holds the system over variables 0..=j, before eliminating j.
    let mut levels: Vec<Vec<Inequality>> = vec![Vec::new(); params];
    for j in (0..params).rev() {
        levels[j] = current.clone();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let mut next = Vec::new();
        for c in current {
            if c.coeffs[j].is_positive() {
                upper.push(c);
            } else if c.coeffs[j].is_negative() {
                lower.push(c);
            } else {
                next.push(c);
            }
        }
        for u in &upper {
            let su = u.coeffs[j].recip();
            for l in &lower {
                let sl = -l.coeffs[j].recip();
                let coeffs = u.coeffs.iter().zip(&l.coeffs).map(|(a, b)| a * &su + b * &sl).collect();
                let bound = &u.bound * &su + &l.bound * &sl;
                next.push(Inequality { coeffs, bound, strict: u.strict || l.strict });
            }
        }
        current = normalize_constraints(next)?;
    }

    let mut t: Vec<Rational> = Vec::with_capacity(params);
    for (j, level) in levels.iter().enumerate() {
        let mut lo: Option<(Rational, bool)> = None;
        let mut hi: Option<(Rational, bool)> = None;
        for c in level {
            let cj = &c.coeffs[j];
            if cj.is_zero() {
                continue;
            }
            let rest = c.coeffs[..j].iter().zip(&t).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
            let val = (&c.bound - rest) / cj;
            if cj.is_positive() {
                hi = Some(match hi {
                    None => (val, c.strict),
                    Some((h, _)) if val < h => (val, c.strict),
                    Some((h, s)) if val == h => (h, s || c.strict),
                    Some(prev) => prev,
                });
            } else {
                lo = Some(match lo {
                    None => (val, c.strict),
                    Some((l, _)) if val > l => (val, c.strict),
                    Some((l, s)) if val == l => (l, s || c.strict),
                    Some(prev) => prev,
                });
            }
        }
        let value = match (lo, hi) {
            (None, None) => Rational::zero(),
            (Some((l, strict)), None) => if strict { l + Rational::one() } else { l },
            (None, Some((h, strict))) => if strict { h - Rational::one() } else { h },
            (Some((l, _)), Some((h, _))) if l == h => l,
            (Some((l, _)), Some((h, _))) => (l + h) / rat(2),
        };
        t.push(value);
    }

    let mut x = base;
    for (tj, b) in t.iter().zip(&basis) {
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += tj * bi;
        }
    }
    debug_assert!(system.is_satisfied_by(&x));
    Some(x)
}

/// Scales each constraint so its leading coefficient has absolute value 1,
/// keeps the tightest bound per direction and checks constant constraints.
/// Returns `None` when a constant constraint is violated.
fn normalize_constraints(cs: Vec<Inequality>) -> Option<Vec<Inequality>> {
    let mut tightest: BTreeMap<Vec<Rational>, (Rational, bool)> = BTreeMap::new();
    for c in cs {
        let Some(lead) = c.coeffs.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else {
            let ok = if c.strict { c.bound.is_positive() } else { !c.bound.is_negative() };
            if !ok {
                return None;
            }
            continue;
        };
        let coeffs: Vec<Rational> = c.coeffs.iter().map(|x| x / &lead).collect();
        let bound = c.bound / &lead;
        tightest
            .entry(coeffs)
            .and_modify(|(b, s)| {
                if bound < *b || (bound == *b && c.strict) {
                    *s = c.strict || (bound == *b && *s);
                    *b = bound.clone();
                }
            })
            .or_insert((bound.clone(), c.strict));
    }
    Some(
        tightest
            .into_iter()
            .map(|(coeffs, (bound, strict))| Inequality { coeffs, bound, strict })
            .collect(),
    )
}
