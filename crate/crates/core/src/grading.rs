//! Bondal-Thomsen classes, the positivity certificate for the filtration,
//! the per-class Borel-Moore complexes and their Betti numbers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::Zero;

use crate::hhl::HhlComplex;
use crate::polyring::constant_part;
use crate::ratlin::{dot, kernel_basis, rat, LatticeQuotient, QuotientCoords, RatMatrix, Rational, StrictSystem};
use crate::strat::Quadruple;

/// Coordinates of `-a` in `Z^n / im(psi^T)`: the free part in a canonical
/// basis of functionals, then torsion residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl From<QuotientCoords> for ClassId {
    fn from(c: QuotientCoords) -> Self {
        ClassId { free: c.free, torsion: c.torsion }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = self.free.iter().map(i64::to_string).collect();
        write!(f, "[{}", free.join(","))?;
        if !self.torsion.is_empty() {
            let t: Vec<String> = self.torsion.iter().map(i64::to_string).collect();
            write!(f, ";{}", t.join(","))?;
        }
        write!(f, "]")
    }
}

/// The group `Z^n / im(psi^T)` in which bundle classes live.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    quotient: LatticeQuotient,
}

impl ClassGroup {
    pub fn new(q: &Quadruple) -> Self {
        ClassGroup { quotient: LatticeQuotient::new(&q.psi_transpose()) }
    }

    /// Class of `O(-sum a_i D_i)`.
    pub fn class_of_bundle(&self, a: &[i64]) -> ClassId {
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        self.quotient.coords(&neg).into()
    }

    pub fn free_rank(&self) -> usize {
        self.quotient.free_rank()
    }

    pub fn torsion_moduli(&self) -> Vec<i64> {
        self.quotient.torsion_moduli()
    }

    pub fn free_functionals(&self) -> &[Vec<i64>] {
        self.quotient.free_functionals()
    }
}

pub fn class_map(a: &[i64], q: &Quadruple) -> ClassId {
    ClassGroup::new(q).class_of_bundle(a)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GradingError {
    #[error("no positive grading: the exponent {epsilon:?} cannot be made positive on ker(psi); the filtration is not strictly compatible")]
    NoPositiveGrading { epsilon: Vec<i64> },
    #[error("constant part of d_{degree} has a nonzero entry ({row}, {col}) between different classes")]
    InconsistentGrading { degree: usize, row: usize, col: usize },
    #[error("harmonic basis for class {class} in degree {degree}: {reason}")]
    BadUserBasis { class: ClassId, degree: usize, reason: String },
}

/// A functional `theta` vanishing on `im(psi^T)` with `theta . eps >= 1` on
/// every monomial exponent of the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub theta: Vec<Rational>,
}

impl Grading {
    /// Grade of a bundle vector `a`; constant on classes.
    pub fn grade(&self, a: &[i64]) -> Rational {
        let a: Vec<Rational> = a.iter().map(|&x| rat(x)).collect();
        dot(&self.theta, &a)
    }
}

/// Distinct nonzero exponents occurring in the HHL differential.
pub fn occurring_exponents(hhl: &HhlComplex) -> Vec<Vec<i64>> {
    let set: BTreeSet<Vec<i64>> =
        hhl.strat.all_incidences().filter(|i| i.epsilon.iter().any(|&e| e != 0)).map(|i| i.epsilon.clone()).collect();
    set.into_iter().collect()
}

pub fn find_positive_grading(hhl: &HhlComplex) -> Result<Grading, GradingError> {
    let q = hhl.quadruple();
    let mut base = StrictSystem::new(q.n);
    for r in 0..q.k {
        base.add_equality(q.psi.row(r).iter().map(|&x| rat(x)).collect(), Rational::zero());
    }
    let exponents = occurring_exponents(hhl);
    let mut system = base.clone();
    for eps in &exponents {
        system.add_lower(eps.iter().map(|&x| rat(x)).collect(), rat(1), false);
    }
    if let Some(theta) = system.feasible_interior_point() {
        return Ok(Grading { theta });
    }
    let mut partial = base;
    for eps in &exponents {
        partial.add_lower(eps.iter().map(|&x| rat(x)).collect(), rat(1), false);
        if partial.feasible_interior_point().is_none() {
            return Err(GradingError::NoPositiveGrading { epsilon: eps.clone() });
        }
    }
    unreachable!("the full system is infeasible, so some prefix is")
}

/// The Borel-Moore complex of one class: the block of `constant_part(d)` on
/// the cells of that class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmComplex {
    pub class: ClassId,
    pub grade: Rational,
    /// Positions (within the HHL term of that degree) of the class's cells.
    pub positions: Vec<Vec<usize>>,
    /// `boundary[i - 1]` is `d_i` restricted to the class.
    pub boundary: Vec<RatMatrix>,
}

impl BmComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.positions.iter().map(Vec::len).collect()
    }

    /// `d_i` for `1 <= i <= len`; `None` outside that range.
    pub fn d(&self, i: usize) -> Option<&RatMatrix> {
        if i == 0 {
            None
        } else {
            self.boundary.get(i - 1)
        }
    }

    pub fn rank_d(&self, i: usize) -> usize {
        self.d(i).map_or(0, RatMatrix::rank)
    }

    /// `dim H_i = |cells_i| - rank d_i - rank d_{i+1}`.
    pub fn betti(&self, i: usize) -> usize {
        self.positions[i].len() - self.rank_d(i) - self.rank_d(i + 1)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims().iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }
}

/// Per-class blocks of the constant part of the HHL differential, ordered
/// by class.
pub fn build_bm_complexes(hhl: &HhlComplex, grading: &Grading) -> Result<Vec<BmComplex>, GradingError> {
    let c = &hhl.complex;
    let len = c.length();
    let mut by_class: BTreeMap<ClassId, (Rational, Vec<Vec<usize>>)> = BTreeMap::new();
    let mut class_of: Vec<Vec<ClassId>> = Vec::new();
    for (i, gens) in c.terms.iter().enumerate() {
        let mut row = Vec::new();
        for (pos, g) in gens.iter().enumerate() {
            let class = hhl.classes.class_of_bundle(&g.bundle);
            let entry =
                by_class.entry(class.clone()).or_insert_with(|| (grading.grade(&g.bundle), vec![Vec::new(); len + 1]));
            entry.1[i].push(pos);
            row.push(class);
        }
        class_of.push(row);
    }
    let constant: Vec<RatMatrix> = c.differentials.iter().map(constant_part).collect();
    for (idx, m) in constant.iter().enumerate() {
        let i = idx + 1;
        for row in 0..m.rows() {
            for col in 0..m.cols() {
                if !m[(row, col)].is_zero() && class_of[i - 1][row] != class_of[i][col] {
                    return Err(GradingError::InconsistentGrading { degree: i, row, col });
                }
            }
        }
    }
    Ok(by_class
        .into_iter()
        .map(|(class, (grade, positions))| {
            let boundary = (1..=len).map(|i| constant[i - 1].submatrix(&positions[i - 1], &positions[i])).collect();
            BmComplex { class, grade, positions, boundary }
        })
        .collect())
}

/// `beta_{i,[a]}` for every degree and class, zeros included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub length: usize,
    pub entries: BTreeMap<ClassId, Vec<usize>>,
}

impl BettiTable {
    pub fn get(&self, i: usize, class: &ClassId) -> usize {
        self.entries.get(class).and_then(|v| v.get(i).copied()).unwrap_or(0)
    }

    pub fn totals(&self) -> Vec<usize> {
        (0..=self.length).map(|i| self.entries.values().map(|v| v[i]).sum()).collect()
    }

    /// Nonzero entries as `(degree, class, beta)`, by degree then class.
    pub fn nonzero(&self) -> Vec<(usize, ClassId, usize)> {
        let mut out = Vec::new();
        for i in 0..=self.length {
            for (class, v) in &self.entries {
                if v[i] > 0 {
                    out.push((i, class.clone(), v[i]));
                }
            }
        }
        out
    }
}

pub fn betti_table(bms: &[BmComplex]) -> BettiTable {
    let length = bms.first().map_or(0, |b| b.positions.len() - 1);
    let entries = bms.iter().map(|b| (b.class.clone(), (0..=length).map(|i| b.betti(i)).collect())).collect();
    BettiTable { length, entries }
}

/// `sum (-1)^i beta_{i,a} = sum (-1)^i |S_{[a],i}|` for every class.
pub fn euler_consistent(bms: &[BmComplex], table: &BettiTable) -> bool {
    bms.iter().all(|b| {
        let chi: i64 = (0..b.positions.len())
            .map(|i| {
                let v = table.get(i, &b.class) as i64;
                if i % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum();
        chi == b.euler_characteristic()
    })
}

/// Stacked `[d_i ; d_{i+1}^T]`, whose kernel is the harmonic space.
fn laplacian_rows(b: &BmComplex, i: usize) -> RatMatrix {
    let n = b.positions[i].len();
    let mut m = RatMatrix::zeros(0, n);
    if let Some(d) = b.d(i) {
        m = m.vstack(d);
    }
    if let Some(d) = b.d(i + 1) {
        m = m.vstack(&d.transpose());
    }
    m
}

/// Canonical basis of `ker d_i  ∩  ker d_{i+1}^T`.
pub fn harmonic_basis(b: &BmComplex, i: usize) -> Vec<Vec<Rational>> {
    kernel_basis(&laplacian_rows(b, i))
}

/// Checks that user vectors form a basis of the harmonic space.
pub fn validate_harmonic_basis(b: &BmComplex, i: usize, vectors: &[Vec<Rational>]) -> Result<(), GradingError> {
    let bad = |reason: String| GradingError::BadUserBasis { class: b.class.clone(), degree: i, reason };
    let n = b.positions[i].len();
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(bad(format!("vector has length {} but the class has {n} cells in this degree", v.len())));
    }
    let stacked = laplacian_rows(b, i);
    for (j, v) in vectors.iter().enumerate() {
        if stacked.apply(v).iter().any(|x| !x.is_zero()) {
            return Err(bad(format!("vector {} is not harmonic", j + 1)));
        }
    }
    let beta = b.betti(i);
    if vectors.len() != beta {
        return Err(bad(format!("expected {beta} vectors, got {}", vectors.len())));
    }
    if beta > 0 && RatMatrix::from_rows(n, vectors.to_vec()).rank() != beta {
        return Err(bad("vectors are linearly dependent".to_string()));
    }
    Ok(())
}

/// `im d_{i+1}`, the harmonic space and `im d_i^T` are pairwise orthogonal
/// and their dimensions add up to the number of cells.
pub fn hodge_decomposition_holds(b: &BmComplex, i: usize) -> bool {
    let n = b.positions[i].len();
    let harmonic = harmonic_basis(b, i);
    let boundaries: Vec<Vec<Rational>> = b.d(i + 1).map(|d| (0..d.cols()).map(|c| d.column(c)).collect()).unwrap_or_default();
    let coboundaries: Vec<Vec<Rational>> = b.d(i).map(RatMatrix::to_rows).unwrap_or_default();
    let orth = |xs: &[Vec<Rational>], ys: &[Vec<Rational>]| xs.iter().all(|x| ys.iter().all(|y| dot(x, y).is_zero()));
    orth(&boundaries, &harmonic)
        && orth(&boundaries, &coboundaries)
        && orth(&harmonic, &coboundaries)
        && n == b.rank_d(i + 1) + harmonic.len() + b.rank_d(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hhl::build_hhl_complex;

    fn p311() -> HhlComplex {
        build_hhl_complex(&Quadruple::new(vec![vec![1, 0, -3], vec![0, 1, -1]]).unwrap()).unwrap()
    }

    #[test]
    fn weighted_projective_plane_grading() {
        let h = p311();
        let g = find_positive_grading(&h).unwrap();
        assert_eq!(g.theta, vec![rat(3), rat(1), rat(1)]);
    }

    #[test]
    fn projective_line_grading() {
        let h = build_hhl_complex(&Quadruple::new(vec![vec![1, -1]]).unwrap()).unwrap();
        let g = find_positive_grading(&h).unwrap();
        assert_eq!(g.theta, vec![rat(1), rat(1)]);
        let bms = build_bm_complexes(&h, &g).unwrap();
        let t = betti_table(&bms);
        assert_eq!(t.totals(), vec![1, 1]);
        assert!(bms.iter().all(|b| b.dims().iter().sum::<usize>() == 1));
    }

    #[test]
    fn affine_plane_is_rejected() {
        let q = Quadruple::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let h = build_hhl_complex(&q).unwrap();
        assert_eq!(ClassGroup::new(&q).free_rank(), 0);
        let classes: BTreeSet<ClassId> = h.strat.cells.iter().map(|c| h.class_of(c.id)).collect();
        assert_eq!(classes.len(), 1);
        assert!(matches!(find_positive_grading(&h), Err(GradingError::NoPositiveGrading { .. })));
    }

    #[test]
    fn class_is_deck_invariant() {
        let q = Quadruple::new(vec![vec![1, 0, -3], vec![0, 1, -1]]).unwrap();
        let a = vec![1, 1, 0];
        let moved: Vec<i64> = a.iter().zip(q.psi_transpose().apply(&[2, -5])).map(|(x, y)| x + y).collect();
        assert_eq!(class_map(&a, &q), class_map(&moved, &q));
        assert_eq!(class_map(&a, &q), ClassId { free: vec![-4], torsion: vec![] });
    }

    #[test]
    fn weighted_projective_plane_betti_and_harmonics() {
        let h = p311();
        let g = find_positive_grading(&h).unwrap();
        let bms = build_bm_complexes(&h, &g).unwrap();
        let t = betti_table(&bms);
        assert_eq!(t.totals(), vec![1, 2, 1]);
        let c = |x: i64| ClassId { free: vec![x], torsion: vec![] };
        assert_eq!(t.get(0, &c(0)), 1);
        assert_eq!(t.get(1, &c(-1)), 1);
        assert_eq!(t.get(1, &c(-3)), 1);
        assert_eq!(t.get(2, &c(-4)), 1);
        assert_eq!(t.nonzero().len(), 4);
        assert!(euler_consistent(&bms, &t));
        for b in &bms {
            for i in 0..=2 {
                assert!(hodge_decomposition_holds(b, i));
            }
        }
        let minus_one = bms.iter().find(|b| b.class == c(-1)).unwrap();
        assert_eq!(minus_one.dims(), vec![1, 3, 1]);
        let basis = harmonic_basis(minus_one, 1);
        assert_eq!(basis.len(), 1);
        let minus_four = bms.iter().find(|b| b.class == c(-4)).unwrap();
        assert_eq!(minus_four.dims(), vec![0, 0, 1]);
        assert!(harmonic_basis(minus_four, 2).len() == 1);
    }

    #[test]
    fn user_basis_validation() {
        let h = p311();
        let g = find_positive_grading(&h).unwrap();
        let bms = build_bm_complexes(&h, &g).unwrap();
        let b = bms.iter().find(|b| b.class.free == vec![-1]).unwrap();
        let canonical = harmonic_basis(b, 1);
        let doubled: Vec<Rational> = canonical[0].iter().map(|x| x * rat(2)).collect();
        validate_harmonic_basis(b, 1, std::slice::from_ref(&doubled)).unwrap();
        assert!(validate_harmonic_basis(b, 1, &[vec![rat(1), rat(0), rat(0)]]).is_err());
        assert!(validate_harmonic_basis(b, 1, &[doubled.clone(), doubled]).is_err());
        assert!(validate_harmonic_basis(b, 1, &[vec![rat(1)]]).is_err());
    }
}
