//! Multivariate polynomials over the rationals and matrices of them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::ratlin::{fmt_rational, parse_rational, rat, DimensionMismatch, RatMatrix, Rational};

/// Exponent vector; always of length `nvars`.
pub type Exponent = Vec<u32>;

/// A polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exponent: Exponent, c: Rational) -> Self {
        let nvars = exponent.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Poly { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Replaces each variable in `assignment` by the given polynomial. The
    /// replacements must live in the same ring.
    pub fn substitute(&self, assignment: &BTreeMap<usize, Poly>) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut kept = vec![0; self.nvars];
            let mut term = Poly::one(self.nvars);
            for (i, &k) in e.iter().enumerate() {
                match assignment.get(&i) {
                    Some(p) if k > 0 => term = term.mul(&p.pow(k)),
                    _ => kept[i] = k,
                }
            }
            out.add_assign(&term.mul(&Poly::monomial(kept, c.clone())));
        }
        out
    }

    /// Terms in descending graded-lex order.
    fn sorted_terms(&self) -> Vec<(&Exponent, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| grlex(b, a));
        ts
    }

    /// Canonical text form, e.g. `-1/4*y^3 + 2*x`.
    pub fn to_text(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            if mono.is_empty() {
                out.push_str(&fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&fmt_rational(&abs));
                out.push('*');
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    /// Parses the canonical text form (and anything else made of signed
    /// products of rationals and `var^k` factors).
    pub fn parse(s: &str, names: &[String]) -> Result<Poly, PolyParseError> {
        let nvars = names.len();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(PolyParseError::Empty);
        }
        let mut out = Poly::zero(nvars);
        let bytes: Vec<char> = compact.chars().collect();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = Rational::one();
            while pos < bytes.len() && (bytes[pos] == '+' || bytes[pos] == '-') {
                if bytes[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos] != '+' && bytes[pos] != '-' {
                pos += 1;
            }
            let term: String = bytes[start..pos].iter().collect();
            if term.is_empty() {
                return Err(PolyParseError::BadTerm(compact.clone()));
            }
            let mut coeff = sign;
            let mut e = vec![0u32; nvars];
            for factor in term.split('*') {
                if let Some(q) = parse_rational(factor) {
                    coeff *= q;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((n, p)) => (n, p.parse::<u32>().map_err(|_| PolyParseError::BadTerm(factor.to_string()))?),
                    None => (factor, 1),
                };
                let i = names
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| PolyParseError::UnknownVariable(name.to_string()))?;
                e[i] += power;
            }
            out.add_term(e, coeff);
        }
        Ok(out)
    }
}

/// Graded-lex comparison of exponent vectors.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&default_names(self.nvars)))
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyParseError {
    #[error("empty polynomial")]
    Empty,
    #[error("cannot parse term `{0}`")]
    BadTerm(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Dense matrix of polynomials, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, data: vec![Poly::zero(nvars); rows * cols] }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            m.set(i, i, Poly::one(nvars));
        }
        m
    }

    pub fn from_rational(m: &RatMatrix, nvars: usize) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols(), nvars);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, Poly::constant(nvars, m[(i, j)].clone()));
            }
        }
        out
    }

    pub fn from_rows(nvars: usize, cols: usize, rows: Vec<Vec<Poly>>) -> Self {
        let mut m = Self::zeros(rows.len(), cols, nvars);
        for (i, r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row");
            for (j, p) in r.into_iter().enumerate() {
                m.set(i, j, p);
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

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.nvars, self.nvars);
        self.data[i * self.cols + j] = p;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Poly {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.data.iter().position(|p| !p.is_zero()).map(|k| (k / self.cols, k % self.cols))
    }

    pub fn matmul(&self, other: &PolyMatrix) -> Result<PolyMatrix, DimensionMismatch> {
        if self.cols != other.rows {
            return Err(DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let prod = a.mul(b);
                        out.entry_mut(i, j).add_assign(&prod);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product that panics on mismatched shapes; for internal use where the
    /// shapes are fixed by construction.
    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        self.matmul(other).expect("polynomial matrix product")
    }

    pub fn mul_rat(&self, other: &RatMatrix) -> PolyMatrix {
        self.mul(&PolyMatrix::from_rational(other, self.nvars))
    }

    pub fn rat_mul(left: &RatMatrix, right: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_rational(left, right.nvars).mul(right)
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, data }
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, data }
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        let data = self.data.iter().map(|a| a.scale(c)).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, data }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = Self::zeros(self.cols, self.rows, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, data: self.data.iter().map(f).collect() }
    }

    pub fn to_text_rows(&self, names: &[String]) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_text(names)).collect()).collect()
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        write!(f, "{:?}", self.to_text_rows(&names))
    }
}

/// Entrywise coefficient of the zero exponent: the matrix obtained by
/// setting every variable to zero.
pub fn constant_part(a: &PolyMatrix) -> RatMatrix {
    let mut out = RatMatrix::zeros(a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(i, j)] = a.get(i, j).constant_term();
        }
    }
    out
}

pub fn substitute(p: &Poly, assignment: &BTreeMap<usize, Poly>) -> Poly {
    p.substitute(assignment)
}

/// `x^e` for a 0/1 (or general) exponent given as integers.
pub fn monomial_from_i64(e: &[i64], c: i64) -> Poly {
    Poly::monomial(e.iter().map(|&x| u32::try_from(x).expect("negative exponent")).collect(), rat(c))
}
