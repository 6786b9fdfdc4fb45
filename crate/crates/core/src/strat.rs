//! The Bondal stratification of the real torus `R^k / Z^k` cut out by the
//! periodic hyperplanes `<f, b_i> in Z`, where `b_i` are the columns of
//! `psi`.
//!
//! A cell of the arrangement in the universal cover is described by a
//! [`CellLabel`]: for every `i`, either `H_i = m` or `m < H_i < m + 1`.
//! Torus cells are deck-translation orbits of such cells; each orbit is
//! represented by the lexicographically smallest label whose relative
//! interior meets the half-open unit cube `[0,1)^k`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{One, Signed, Zero};

use crate::ratlin::{
    dot, kernel_basis, rat, IntMatrix, LatticeQuotient, QuotientCoords, RatMatrix, Rational, StrictSystem,
};

/// Largest torus dimension accepted.
pub const MAX_TORUS_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StratError {
    #[error("psi has rank {rank} but k = {k}; the cokernel must be finite")]
    RankDeficient { rank: usize, k: usize },
    #[error("torus dimension k = {k} exceeds the supported maximum of {max}")]
    DimensionTooLarge { k: usize, max: usize },
    #[error("psi must have at least one row and one column")]
    Empty,
    #[error("psi rows have inconsistent lengths")]
    Ragged,
    #[error("expected {expected} variable names, got {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("fan cone {cone:?} refers to a ray outside 1..={n}")]
    BadFan { cone: Vec<usize>, n: usize },
}

/// Cox-style input: `n` rays mapped by `psi` into a rank-`k` lattice.
///
/// The fan and the group are carried along for reporting only; the
/// stratification and every matrix depend on `psi` alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadruple {
    pub n: usize,
    pub k: usize,
    pub psi: IntMatrix,
    pub fan: Option<Vec<Vec<usize>>>,
    pub variables: Vec<String>,
    pub group: Option<String>,
}

impl Quadruple {
    pub fn new(psi_rows: Vec<Vec<i64>>) -> Result<Self, StratError> {
        let k = psi_rows.len();
        let n = psi_rows.first().map_or(0, Vec::len);
        if k == 0 || n == 0 {
            return Err(StratError::Empty);
        }
        if psi_rows.iter().any(|r| r.len() != n) {
            return Err(StratError::Ragged);
        }
        let q = Quadruple {
            n,
            k,
            psi: IntMatrix::from_rows(&psi_rows),
            fan: None,
            variables: crate::polyring::default_names(n),
            group: None,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_variables(mut self, names: Vec<String>) -> Result<Self, StratError> {
        if names.len() != self.n {
            return Err(StratError::VariableCount { expected: self.n, got: names.len() });
        }
        self.variables = names;
        Ok(self)
    }

    /// Cones are lists of 1-based ray indices.
    pub fn with_fan(mut self, fan: Vec<Vec<usize>>) -> Result<Self, StratError> {
        for cone in &fan {
            if cone.iter().any(|&i| i == 0 || i > self.n) {
                return Err(StratError::BadFan { cone: cone.clone(), n: self.n });
            }
        }
        self.fan = Some(fan);
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), StratError> {
        if self.k > MAX_TORUS_DIM {
            return Err(StratError::DimensionTooLarge { k: self.k, max: MAX_TORUS_DIM });
        }
        let rank = self.psi.to_rational().rank();
        if rank < self.k {
            return Err(StratError::RankDeficient { rank, k: self.k });
        }
        Ok(())
    }

    /// `b_i = psi(v_i)`.
    pub fn ray_image(&self, i: usize) -> Vec<i64> {
        self.psi.column(i)
    }

    pub fn ray_image_rational(&self, i: usize) -> Vec<Rational> {
        self.ray_image(i).into_iter().map(rat).collect()
    }

    pub fn psi_transpose(&self) -> IntMatrix {
        self.psi.transpose()
    }

    /// `H_i(f) = <f, b_i>`.
    pub fn h_value(&self, i: usize, f: &[Rational]) -> Rational {
        dot(&self.ray_image_rational(i), f)
    }
}

/// One coordinate of a cell label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    /// `H_i = m`
    Eq(i64),
    /// `m < H_i < m + 1`
    Int(i64),
}

impl Coord {
    pub fn floor(self) -> i64 {
        match self {
            Coord::Eq(m) | Coord::Int(m) => m,
        }
    }

    pub fn is_eq(self) -> bool {
        matches!(self, Coord::Eq(_))
    }

    /// `ceil(H_i)` on the cell.
    pub fn ceiling(self) -> i64 {
        match self {
            Coord::Eq(m) => m,
            Coord::Int(m) => m + 1,
        }
    }

    fn key(self) -> (i64, u8) {
        match self {
            Coord::Eq(m) => (m, 0),
            Coord::Int(m) => (m, 1),
        }
    }

    fn shifted(self, by: i64) -> Coord {
        match self {
            Coord::Eq(m) => Coord::Eq(m + by),
            Coord::Int(m) => Coord::Int(m + by),
        }
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Eq(m) => write!(f, "{m}"),
            Coord::Int(m) => write!(f, "({m},{})", m + 1),
        }
    }
}

/// A cell of the arrangement in the universal cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellLabel(pub Vec<Coord>);

impl CellLabel {
    /// The label of the cell containing `f` in its relative interior.
    pub fn from_point(q: &Quadruple, f: &[Rational]) -> CellLabel {
        CellLabel(
            (0..q.n)
                .map(|i| {
                    let v = q.h_value(i, f);
                    if v.is_integer() {
                        Coord::Eq(to_i64(&v))
                    } else {
                        Coord::Int(to_i64(&v.floor()))
                    }
                })
                .collect(),
        )
    }

    /// Constraint system whose solutions are the relative interior.
    pub fn system(&self, q: &Quadruple) -> StrictSystem {
        let mut s = StrictSystem::new(q.k);
        self.add_to(q, &mut s);
        s
    }

    fn add_to(&self, q: &Quadruple, s: &mut StrictSystem) {
        for (i, c) in self.0.iter().enumerate() {
            push_coord(q, i, *c, s);
        }
    }

    pub fn pattern(&self) -> Vec<bool> {
        self.0.iter().map(|c| c.is_eq()).collect()
    }

    pub fn floors(&self) -> Vec<i64> {
        self.0.iter().map(|c| c.floor()).collect()
    }

    /// Deck translation by `lambda`: every `H_i` moves by `<lambda, b_i>`.
    pub fn translated(&self, q: &Quadruple, lambda: &[i64]) -> CellLabel {
        let shift = q.psi_transpose().apply(lambda);
        CellLabel(self.0.iter().zip(shift).map(|(c, s)| c.shifted(s)).collect())
    }

    /// Rays whose hyperplane contains the cell.
    pub fn equality_rows(&self, q: &Quadruple) -> RatMatrix {
        let rows: Vec<Vec<Rational>> =
            (0..q.n).filter(|&i| self.0[i].is_eq()).map(|i| q.ray_image_rational(i)).collect();
        RatMatrix::from_rows(q.k, rows)
    }

    pub fn dimension(&self, q: &Quadruple) -> usize {
        q.k - self.equality_rows(q).rank()
    }
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Coord::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// `a_i = m_i` on `H_i = m_i`, `m_i + 1` on `m_i < H_i < m_i + 1`.
pub fn ceiling_vector(label: &CellLabel) -> Vec<i64> {
    label.0.iter().map(|c| c.ceiling()).collect()
}

fn push_coord(q: &Quadruple, i: usize, c: Coord, s: &mut StrictSystem) {
    let b = q.ray_image_rational(i);
    match c {
        Coord::Eq(m) => {
            s.add_equality(b, rat(m));
        }
        Coord::Int(m) => {
            s.add_strict_range(b, rat(m), rat(m + 1));
        }
    }
}

fn to_i64(q: &Rational) -> i64 {
    use num::ToPrimitive;
    q.to_integer().to_i64().expect("label value out of i64 range")
}

/// A cell of the torus, stored through its canonical lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCell {
    /// Index in [`Stratification::cells`].
    pub id: usize,
    /// Position among cells of the same dimension.
    pub index_in_dim: usize,
    /// `V1`, `E3`, `F2`, `C1`, ... by dimension.
    pub name: String,
    pub dim: usize,
    pub label: CellLabel,
    /// Ceiling vector of the canonical lift.
    pub ceiling: Vec<i64>,
    /// Ordered basis of the tangent space; orients every lift.
    pub orientation: Vec<Vec<Rational>>,
    /// A point in the relative interior of the canonical lift, inside
    /// `[0,1)^k`.
    pub interior: Vec<Rational>,
}

/// A facet `child` of a lift of `parent`, i.e. one monomial of the HHL
/// differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetIncidence {
    pub parent: usize,
    pub child: usize,
    /// Label of the facet in the universal cover.
    pub child_lift: CellLabel,
    /// Deck shift taking the canonical lift of `child` onto `child_lift`.
    pub shift: Vec<i64>,
    /// `ceil H(parent lift) - ceil H(child lift)`, entries in {0, 1}.
    pub epsilon: Vec<i64>,
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct Stratification {
    pub quadruple: Quadruple,
    pub cells: Vec<TorusCell>,
    by_dim: Vec<Vec<usize>>,
    orbits: LatticeQuotient,
    orbit_index: HashMap<(Vec<bool>, QuotientCoords), usize>,
    facets: Vec<Vec<FacetIncidence>>,
}

const DIM_PREFIX: [&str; 4] = ["V", "E", "F", "C"];

impl Stratification {
    pub fn new(q: &Quadruple) -> Result<Self, StratError> {
        q.validate()?;
        let orbits = LatticeQuotient::new(&q.psi_transpose());
        let orbit_key = |label: &CellLabel| (label.pattern(), orbits.coords(&label.floors()));

        let mut canonical: BTreeMap<(Vec<bool>, QuotientCoords), CellLabel> = BTreeMap::new();
        for label in labels_meeting_unit_cube(q) {
            canonical
                .entry(orbit_key(&label))
                .and_modify(|best| {
                    if label < *best {
                        *best = label.clone();
                    }
                })
                .or_insert(label);
        }

        let mut cells: Vec<TorusCell> = canonical
            .into_values()
            .map(|label| {
                let eq_rows = label.equality_rows(q);
                let orientation = kernel_basis(&eq_rows);
                let interior = interior_point_in_cube(q, &label).expect("enumerated label meets the unit cube");
                TorusCell {
                    id: 0,
                    index_in_dim: 0,
                    name: String::new(),
                    dim: orientation.len(),
                    ceiling: ceiling_vector(&label),
                    label,
                    orientation,
                    interior,
                }
            })
            .collect();
        cells.sort_by(|a, b| (a.dim, &a.label).cmp(&(b.dim, &b.label)));

        let mut by_dim = vec![Vec::new(); q.k + 1];
        for (id, cell) in cells.iter_mut().enumerate() {
            cell.id = id;
            cell.index_in_dim = by_dim[cell.dim].len();
            cell.name = format!("{}{}", DIM_PREFIX[cell.dim], cell.index_in_dim + 1);
            by_dim[cell.dim].push(id);
        }
        let orbit_index = cells.iter().map(|c| (orbit_key(&c.label), c.id)).collect();

        let mut strat = Stratification {
            quadruple: q.clone(),
            cells,
            by_dim,
            orbits,
            orbit_index,
            facets: Vec::new(),
        };
        strat.facets = (0..strat.cells.len()).map(|id| strat.compute_facets(id)).collect();
        Ok(strat)
    }

    pub fn cell(&self, id: usize) -> &TorusCell {
        &self.cells[id]
    }

    pub fn cells_of_dim(&self, dim: usize) -> &[usize] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn counts_by_dim(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }

    pub fn facets(&self, id: usize) -> &[FacetIncidence] {
        &self.facets[id]
    }

    pub fn all_incidences(&self) -> impl Iterator<Item = &FacetIncidence> {
        self.facets.iter().flatten()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.name == name)
    }

    /// The torus cell whose lift has this label, with the deck shift from
    /// the canonical lift.
    pub fn orbit_of(&self, label: &CellLabel) -> Option<(usize, Vec<i64>)> {
        let key = (label.pattern(), self.orbits.coords(&label.floors()));
        let id = *self.orbit_index.get(&key)?;
        let q = &self.quadruple;
        let diff: Vec<Rational> =
            label.floors().iter().zip(self.cells[id].label.floors()).map(|(a, b)| rat(a - b)).collect();
        let lambda = q.psi_transpose().to_rational().solve(&diff)?;
        Some((id, lambda.iter().map(to_i64).collect()))
    }

    /// The torus cell containing the image of `f` in its relative interior.
    pub fn locate(&self, f: &[Rational]) -> Option<usize> {
        self.orbit_of(&CellLabel::from_point(&self.quadruple, f)).map(|(id, _)| id)
    }

    fn compute_facets(&self, id: usize) -> Vec<FacetIncidence> {
        let q = &self.quadruple;
        let parent = &self.cells[id];
        if parent.dim == 0 {
            return Vec::new();
        }
        let eq_rows = parent.label.equality_rows(q);
        let base_rank = eq_rows.rank();
        let mut lifts: BTreeMap<CellLabel, Vec<Rational>> = BTreeMap::new();
        for (i, coord) in parent.label.0.iter().enumerate() {
            let Coord::Int(m) = *coord else { continue };
            let rows = eq_rows.vstack(&RatMatrix::from_rows(q.k, vec![q.ray_image_rational(i)]));
            if rows.rank() != base_rank + 1 {
                continue;
            }
            let directions = kernel_basis(&rows);
            for end in [m, m + 1] {
                let mut rhs: Vec<Rational> =
                    parent.label.0.iter().filter(|c| c.is_eq()).map(|c| rat(c.floor())).collect();
                rhs.push(rat(end));
                let Some(base) = rows.solve(&rhs) else { continue };
                let Some(label) = self.facet_label(&parent.label, i, end, &base, &directions) else { continue };
                if lifts.contains_key(&label) {
                    continue;
                }
                if let Some(p) = label.system(q).feasible_interior_point() {
                    lifts.insert(label, p);
                }
            }
        }
        lifts
            .into_iter()
            .map(|(child_lift, point)| {
                let (child, shift) = self.orbit_of(&child_lift).expect("facet lift belongs to an enumerated orbit");
                let epsilon = parent.ceiling.iter().zip(ceiling_vector(&child_lift)).map(|(a, b)| a - b).collect();
                let outward: Vec<Rational> = point.iter().zip(&parent.interior).map(|(a, b)| a - b).collect();
                let sign = boundary_sign(&parent.orientation, &outward, &self.cells[child].orientation);
                FacetIncidence { parent: id, child, child_lift, shift, epsilon, sign }
            })
            .collect()
    }

    /// Label of the facet of `parent` lying on `H_i = end`, if the
    /// coordinates constant on that hyperplane section are compatible.
    fn facet_label(
        &self,
        parent: &CellLabel,
        i: usize,
        end: i64,
        base: &[Rational],
        directions: &[Vec<Rational>],
    ) -> Option<CellLabel> {
        let q = &self.quadruple;
        let mut coords = Vec::with_capacity(q.n);
        for (j, c) in parent.0.iter().enumerate() {
            let next = match *c {
                _ if j == i => Coord::Eq(end),
                Coord::Eq(m) => Coord::Eq(m),
                Coord::Int(m) => {
                    let b = q.ray_image_rational(j);
                    if directions.iter().all(|d| dot(&b, d).is_zero()) {
                        let v = dot(&b, base);
                        if v == rat(m) {
                            Coord::Eq(m)
                        } else if v == rat(m + 1) {
                            Coord::Eq(m + 1)
                        } else if v > rat(m) && v < rat(m + 1) {
                            Coord::Int(m)
                        } else {
                            return None;
                        }
                    } else {
                        Coord::Int(m)
                    }
                }
            };
            coords.push(next);
        }
        Some(CellLabel(coords))
    }
}

/// Sign of `det(outward, child basis)` in the coordinates of the parent
/// orientation basis: +1 when the child orientation agrees with the
/// outward-normal-first boundary orientation.
fn boundary_sign(parent_basis: &[Vec<Rational>], outward: &[Rational], child_basis: &[Vec<Rational>]) -> i8 {
    let k = outward.len();
    let b = RatMatrix::from_columns(k, parent_basis);
    let mut cols = vec![b.solve(outward).expect("outward vector lies in the parent span")];
    for w in child_basis {
        cols.push(b.solve(w).expect("child tangent lies in the parent span"));
    }
    let m = RatMatrix::from_columns(parent_basis.len(), &cols);
    let det = m.determinant();
    assert!(!det.is_zero(), "degenerate facet orientation");
    if det.is_positive() {
        1
    } else {
        -1
    }
}

/// `0 <= f_j < 1` for every `j`.
fn unit_cube(k: usize) -> StrictSystem {
    let mut cube = StrictSystem::new(k);
    for j in 0..k {
        let e: Vec<Rational> = (0..k).map(|l| if l == j { Rational::one() } else { Rational::zero() }).collect();
        cube.add_lower(e.clone(), Rational::zero(), false);
        cube.add_upper(e, Rational::one(), true);
    }
    cube
}

/// A point of the relative interior of `label` inside `[0,1)^k`.
fn interior_point_in_cube(q: &Quadruple, label: &CellLabel) -> Option<Vec<Rational>> {
    let mut s = unit_cube(q.k);
    for (i, &c) in label.0.iter().enumerate() {
        push_coord(q, i, c, &mut s);
    }
    s.feasible_interior_point()
}

/// Every feasible label whose relative interior meets `[0,1)^k`, found by
/// fixing one coordinate at a time and pruning infeasible prefixes.
fn labels_meeting_unit_cube(q: &Quadruple) -> Vec<CellLabel> {
    let cube = unit_cube(q.k);
    let candidates: Vec<Vec<Coord>> = (0..q.n)
        .map(|i| {
            let b = q.ray_image(i);
            let lo: i64 = b.iter().map(|&x| x.min(0)).sum();
            let hi: i64 = b.iter().map(|&x| x.max(0)).sum();
            let mut cs: Vec<Coord> = (lo - 1..=hi + 1).map(Coord::Eq).collect();
            cs.extend((lo - 1..=hi).map(Coord::Int));
            cs.sort();
            cs
        })
        .collect();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(q.n);
    extend_labels(q, &candidates, &cube, &mut prefix, &mut out);
    out
}

fn extend_labels(
    q: &Quadruple,
    candidates: &[Vec<Coord>],
    system: &StrictSystem,
    prefix: &mut Vec<Coord>,
    out: &mut Vec<CellLabel>,
) {
    let i = prefix.len();
    if i == q.n {
        out.push(CellLabel(prefix.clone()));
        return;
    }
    for &c in &candidates[i] {
        let mut next = system.clone();
        push_coord(q, i, c, &mut next);
        if next.feasible_interior_point().is_some() {
            prefix.push(c);
            extend_labels(q, candidates, &next, prefix, out);
            prefix.pop();
        }
    }
}

/// All torus cells, ordered by dimension and then by canonical label.
pub fn enumerate_cells(q: &Quadruple) -> Result<Vec<TorusCell>, StratError> {
    Ok(Stratification::new(q)?.cells)
}

/// Facet incidences of the canonical lift of `cell`.
pub fn facet_lifts(strat: &Stratification, cell: usize) -> Vec<FacetIncidence> {
    strat.facets(cell).to_vec()
}
