//! The perturbation series as a sum over zig-zag paths.
//!
//! A path from `sigma` to `tau` alternates steps down along the HHL
//! differential into a strictly lower class (type I) with steps back up
//! inside one class (type II) weighted by the class's Moore-Penrose
//! inverse. Its contribution is `(-1)^l` times the product of all weights,
//! `l` being the number of type II steps.

use std::collections::HashMap;

use num::Zero;

use crate::grading::{BmComplex, ClassId, Grading};
use crate::hhl::HhlComplex;
use crate::hpl::SdrDatum;
use crate::pinv::{mp_inverse, mp_inverse_hedge, DEFAULT_HEDGE_BOUND};
use crate::polyring::{Poly, PolyMatrix};
use crate::ratlin::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PathsError {
    #[error("({sigma}, {tau}) is not a type I pair")]
    NotTypeI { sigma: String, tau: String },
    #[error("({sigma}, {tau}) is not a type II pair")]
    NotTypeII { sigma: String, tau: String },
    #[error("Sigma_{degree} differs at ({tau}, {sigma}): paths give {paths}, the series gives {series}")]
    Mismatch { degree: usize, sigma: String, tau: String, paths: String, series: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    TypeI,
    TypeII,
    NotAdjacent,
}

/// Where type II weights come from.
#[derive(Clone, Copy, Debug)]
pub enum WeightSource<'a> {
    /// Hedge-formula pseudoinverse of each class block, falling back to the
    /// rank factorization above the enumeration bound.
    Hedge,
    /// `-h` of an explicit contraction.
    Homotopy(&'a SdrDatum),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    TypeI { sigma: usize, tau: usize, weight: Poly },
    TypeII { sigma: usize, tau: usize, weight: Rational },
}

/// `sigma_0, tau_0, sigma_1, ..., tau_m` with its step weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZigZagPath {
    pub cells: Vec<usize>,
    pub steps: Vec<Step>,
}

impl ZigZagPath {
    /// Number of type II steps.
    pub fn length(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::TypeII { .. })).count()
    }

    pub fn weight(&self, nvars: usize) -> Poly {
        self.steps.iter().fold(Poly::one(nvars), |acc, s| match s {
            Step::TypeI { weight, .. } => acc.mul(weight),
            Step::TypeII { weight, .. } => acc.scale(weight),
        })
    }

    pub fn signed_weight(&self, nvars: usize) -> Poly {
        let w = self.weight(nvars);
        if self.length().is_multiple_of(2) {
            w
        } else {
            w.neg()
        }
    }
}

/// Pair classification and path sums over one HHL complex.
pub struct PathOracle<'a> {
    hhl: &'a HhlComplex,
    class: Vec<ClassId>,
    grade: Vec<Rational>,
    /// Type I steps out of each cell.
    down: Vec<Vec<(usize, Poly)>>,
    /// Nonzero type II steps into each cell.
    up: Vec<Vec<(usize, Rational)>>,
    type_two: HashMap<(usize, usize), Rational>,
}

impl<'a> PathOracle<'a> {
    pub fn new(hhl: &'a HhlComplex, grading: &Grading, bms: &[BmComplex], source: WeightSource<'_>) -> Self {
        let strat = &hhl.strat;
        let n = strat.cells.len();
        let class: Vec<ClassId> = (0..n).map(|c| hhl.class_of(c)).collect();
        let grade: Vec<Rational> = strat.cells.iter().map(|c| grading.grade(&c.ceiling)).collect();

        let mut down = vec![Vec::new(); n];
        for s in 0..n {
            let mut targets: Vec<usize> = strat.facets(s).iter().map(|f| f.child).collect();
            targets.sort_unstable();
            targets.dedup();
            for t in targets {
                let w = hhl.entry(s, t);
                if grade[t] < grade[s] && !w.is_zero() {
                    down[s].push((t, w.clone()));
                }
            }
        }

        let mut type_two = HashMap::new();
        for b in bms {
            for i in 1..b.positions.len() {
                let weights = match source {
                    WeightSource::Hedge => {
                        let a = b.d(i).expect("degree in range");
                        mp_inverse_hedge(a, DEFAULT_HEDGE_BOUND).unwrap_or_else(|_| mp_inverse(a))
                    }
                    WeightSource::Homotopy(sdr) => {
                        let h = sdr.h(i).expect("degree in range");
                        h.submatrix(&b.positions[i], &b.positions[i - 1]).neg()
                    }
                };
                for (r, &sp) in b.positions[i].iter().enumerate() {
                    for (c, &tp) in b.positions[i - 1].iter().enumerate() {
                        type_two.insert((hhl.cell_at(i, sp), hhl.cell_at(i - 1, tp)), weights[(r, c)].clone());
                    }
                }
            }
        }
        let mut up = vec![Vec::new(); n];
        for (&(s, t), w) in &type_two {
            if !w.is_zero() {
                up[t].push((s, w.clone()));
            }
        }
        for list in &mut up {
            list.sort_by_key(|(s, _)| *s);
        }
        PathOracle { hhl, class, grade, down, up, type_two }
    }

    fn name(&self, cell: usize) -> String {
        self.hhl.strat.cell(cell).name.clone()
    }

    fn nvars(&self) -> usize {
        self.hhl.complex.nvars()
    }

    fn adjacent(&self, sigma: usize, tau: usize) -> bool {
        self.hhl.strat.facets(sigma).iter().any(|f| f.child == tau)
    }

    /// Type I: a facet pair into a strictly lower grade. Type II: one
    /// dimension apart in the same class, and either incident or joined by
    /// a nonzero pseudoinverse entry.
    pub fn classify_pair(&self, sigma: usize, tau: usize) -> PairClass {
        let strat = &self.hhl.strat;
        if strat.cell(sigma).dim != strat.cell(tau).dim + 1 {
            return PairClass::NotAdjacent;
        }
        if self.down[sigma].iter().any(|(t, _)| *t == tau) {
            return PairClass::TypeI;
        }
        if self.class[sigma] == self.class[tau] {
            let nonzero = self.type_two.get(&(sigma, tau)).is_some_and(|w| !w.is_zero());
            if nonzero || self.adjacent(sigma, tau) {
                return PairClass::TypeII;
            }
        }
        PairClass::NotAdjacent
    }

    /// The `(tau, sigma)` entry of the HHL differential.
    pub fn hhl_weight(&self, sigma: usize, tau: usize) -> Result<Poly, PathsError> {
        match self.classify_pair(sigma, tau) {
            PairClass::TypeI => Ok(self.hhl.entry(sigma, tau).clone()),
            _ => Err(PathsError::NotTypeI { sigma: self.name(sigma), tau: self.name(tau) }),
        }
    }

    /// Coefficient of `sigma` in the pseudoinverse image of `tau`.
    pub fn mp_weight(&self, sigma: usize, tau: usize) -> Result<Rational, PathsError> {
        match self.classify_pair(sigma, tau) {
            PairClass::TypeII => Ok(self.type_two.get(&(sigma, tau)).cloned().unwrap_or_else(Rational::zero)),
            _ => Err(PathsError::NotTypeII { sigma: self.name(sigma), tau: self.name(tau) }),
        }
    }

    /// Every path with nonzero step weights, depth first.
    pub fn enumerate_paths(&self, sigma: usize, tau: usize) -> Vec<ZigZagPath> {
        let strat = &self.hhl.strat;
        let mut out = Vec::new();
        if strat.cell(sigma).dim != strat.cell(tau).dim + 1 {
            return out;
        }
        let mut cells = vec![sigma];
        let mut steps = Vec::new();
        self.extend_paths(tau, &mut cells, &mut steps, &mut out);
        out
    }

    fn extend_paths(&self, tau: usize, cells: &mut Vec<usize>, steps: &mut Vec<Step>, out: &mut Vec<ZigZagPath>) {
        let s = *cells.last().expect("path starts at sigma");
        for (t0, w) in &self.down[s] {
            cells.push(*t0);
            steps.push(Step::TypeI { sigma: s, tau: *t0, weight: w.clone() });
            if *t0 == tau {
                out.push(ZigZagPath { cells: cells.clone(), steps: steps.clone() });
            }
            if self.grade[*t0] > self.grade[tau] {
                for (s1, mw) in &self.up[*t0] {
                    cells.push(*s1);
                    steps.push(Step::TypeII { sigma: *s1, tau: *t0, weight: mw.clone() });
                    self.extend_paths(tau, cells, steps, out);
                    cells.pop();
                    steps.pop();
                }
            }
            cells.pop();
            steps.pop();
        }
    }

    /// `sum over paths of (-1)^l w`, by memoized recursion on the first
    /// type I step.
    pub fn sigma_via_paths(&self, sigma: usize, tau: usize) -> Poly {
        self.path_sum(sigma, tau, &mut HashMap::new())
    }

    fn path_sum(&self, s: usize, tau: usize, memo: &mut HashMap<(usize, usize), Poly>) -> Poly {
        if let Some(p) = memo.get(&(s, tau)) {
            return p.clone();
        }
        let mut total = Poly::zero(self.nvars());
        for (t0, w) in &self.down[s] {
            if *t0 == tau {
                total.add_assign(w);
            }
            if self.grade[*t0] <= self.grade[tau] {
                continue;
            }
            let mut tail = Poly::zero(self.nvars());
            for (s1, mw) in &self.up[*t0] {
                tail.add_assign(&self.path_sum(*s1, tau, memo).scale(&-mw.clone()));
            }
            if !tail.is_zero() {
                total.add_assign(&w.mul(&tail));
            }
        }
        memo.insert((s, tau), total.clone());
        total
    }

    /// `Sigma_i` for every degree, assembled from path sums.
    pub fn path_sigma_matrices(&self) -> Vec<PolyMatrix> {
        let c = &self.hhl.complex;
        let mut memo = HashMap::new();
        (1..=c.length())
            .map(|i| {
                let mut m = PolyMatrix::zeros(c.rank(i - 1), c.rank(i), c.nvars());
                for col in 0..c.rank(i) {
                    for row in 0..c.rank(i - 1) {
                        let p = self.path_sum(self.hhl.cell_at(i, col), self.hhl.cell_at(i - 1, row), &mut memo);
                        m.set(row, col, p);
                    }
                }
                m
            })
            .collect()
    }

    /// Entrywise comparison of two families of `Sigma_i` matrices.
    pub fn compare_sigma(&self, paths: &[PolyMatrix], series: &[PolyMatrix]) -> Result<(), PathsError> {
        let names = &self.hhl.complex.variables;
        for (idx, (a, b)) in paths.iter().zip(series).enumerate() {
            if let Some((row, col)) = a.sub(b).first_nonzero() {
                let i = idx + 1;
                return Err(PathsError::Mismatch {
                    degree: i,
                    sigma: self.name(self.hhl.cell_at(i, col)),
                    tau: self.name(self.hhl.cell_at(i - 1, row)),
                    paths: a.get(row, col).to_text(names),
                    series: b.get(row, col).to_text(names),
                });
            }
        }
        Ok(())
    }

    pub fn crosscheck_sigma(&self, series: &[PolyMatrix]) -> Result<(), PathsError> {
        self.compare_sigma(&self.path_sigma_matrices(), series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpl::{minimal_resolution, MinresOptions};
    use crate::strat::Quadruple;

    #[test]
    fn paths_agree_with_series_on_small_inputs() {
        for psi in [vec![vec![1, -1]], vec![vec![1, 0, -3], vec![0, 1, -1]], vec![vec![2, -1, -1]]] {
            let m = minimal_resolution(&Quadruple::new(psi).unwrap(), &MinresOptions::default()).unwrap();
            let oracle = PathOracle::new(&m.hhl, &m.grading, &m.bms, WeightSource::Hedge);
            oracle.crosscheck_sigma(&m.perturbed.sigma).unwrap();
            let from_h = PathOracle::new(&m.hhl, &m.grading, &m.bms, WeightSource::Homotopy(&m.sdr));
            from_h.crosscheck_sigma(&m.perturbed.sigma).unwrap();
        }
    }

    #[test]
    fn dimension_gap_is_not_adjacent() {
        let m = minimal_resolution(&Quadruple::new(vec![vec![1, 0, -3], vec![0, 1, -1]]).unwrap(), &MinresOptions::default())
            .unwrap();
        let oracle = PathOracle::new(&m.hhl, &m.grading, &m.bms, WeightSource::Hedge);
        let v = m.hhl.strat.cells_of_dim(0)[0];
        let f = m.hhl.strat.cells_of_dim(2)[0];
        assert_eq!(oracle.classify_pair(f, v), PairClass::NotAdjacent);
        assert!(oracle.enumerate_paths(f, v).is_empty());
        assert!(oracle.hhl_weight(f, v).is_err());
        assert!(oracle.mp_weight(f, v).is_err());
    }
}
