//! Strong deformation retracts and the homological perturbation lemma.
//!
//! The big complex `C` is the HHL complex with its constant part `d_C` as
//! differential; the small complex `H` is its homology, class by class,
//! with zero differential. Perturbing by `delta = d - d_C` yields the
//! minimal differential `d_min = p Sigma i`.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::grading::{
    betti_table, build_bm_complexes, find_positive_grading, harmonic_basis, validate_harmonic_basis, BettiTable,
    BmComplex, ClassId, GradingError, Grading,
};
use crate::hhl::{build_hhl_complex, verify_complex, Generator, HhlComplex, LineBundleComplex};
use crate::pinv::mp_inverse;
use crate::polyring::{constant_part, PolyMatrix};
use crate::ratlin::{rref, RatMatrix, Rational};
use crate::strat::Quadruple;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HplError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("contraction fails {identity} in degree {degree} at entry ({row}, {col})")]
    InvalidContraction { identity: String, degree: usize, row: usize, col: usize },
    #[error("h*delta is not nilpotent in degree {degree} after {iterations} terms")]
    NonNilpotent { degree: usize, iterations: usize },
    #[error("perturbed datum fails {identity} in degree {degree} at entry ({row}, {col})")]
    IdentityFailure { identity: String, degree: usize, row: usize, col: usize },
    #[error("d_min in degree {degree} has a unit entry at ({row}, {col})")]
    NotMinimal { degree: usize, row: usize, col: usize },
}

/// Where the homotopy came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    MoorePenrose,
    UserSupplied,
}

/// One entry `h(source) = ... + value * target + ...`, with `target` one
/// dimension above `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyEntry {
    pub source: usize,
    pub target: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum ContractionSpec {
    /// `h = -d^+` on every class.
    #[default]
    MoorePenrose,
    /// Explicit homotopy entries between cells.
    Homotopy(Vec<HomotopyEntry>),
    /// Matched pairs of cells (either order); each pair `(tau, sigma)` with
    /// `d_C` coefficient `c` contributes `h(tau) = -sigma / c`.
    Matching(Vec<(usize, usize)>),
}

/// A vector of homology representatives given by cell coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitVector {
    pub degree: usize,
    pub coefficients: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum HarmonicSpec {
    #[default]
    Canonical,
    /// Replaces the canonical basis for every (degree, class) it touches.
    Explicit(Vec<ExplicitVector>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinresOptions {
    pub contraction: ContractionSpec,
    pub harmonic: HarmonicSpec,
}

/// A generator of the small complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallGenerator {
    pub class: ClassId,
    /// Bundle vector of a representative cell.
    pub bundle: Vec<i64>,
    /// Index within the class's basis in this degree.
    pub index: usize,
    /// Coordinates in the big complex.
    pub vector: Vec<Rational>,
}

/// `(i, p, h)` between `(C, d_C)` and `(H, 0)`, all maps rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdrDatum {
    pub nvars: usize,
    pub big_dims: Vec<usize>,
    pub small: Vec<Vec<SmallGenerator>>,
    /// `d_c[i - 1] : C_i -> C_{i-1}`.
    pub d_c: Vec<RatMatrix>,
    /// `inclusion[i] : H_i -> C_i`.
    pub inclusion: Vec<RatMatrix>,
    /// `projection[i] : C_i -> H_i`.
    pub projection: Vec<RatMatrix>,
    /// `homotopy[i - 1] = h_i : C_{i-1} -> C_i`.
    pub homotopy: Vec<RatMatrix>,
    pub provenance: Provenance,
}

impl SdrDatum {
    pub fn length(&self) -> usize {
        self.big_dims.len() - 1
    }

    pub fn small_dims(&self) -> Vec<usize> {
        self.small.iter().map(Vec::len).collect()
    }

    /// `h_i`, or `None` outside `1..=len`.
    pub fn h(&self, i: usize) -> Option<&RatMatrix> {
        if i == 0 {
            None
        } else {
            self.homotopy.get(i - 1)
        }
    }

    pub fn dc(&self, i: usize) -> Option<&RatMatrix> {
        if i == 0 {
            None
        } else {
            self.d_c.get(i - 1)
        }
    }

    /// `id + d_C h + h d_C` on `C_i`.
    pub fn pi(&self, i: usize) -> RatMatrix {
        projector(&self.d_c, &self.homotopy, &self.big_dims, i)
    }

    /// The five axioms `pi = id`, `ip = id + dh + hd`, `h^2 = 0`,
    /// `hi = 0`, `ph = 0`.
    pub fn check_axioms(&self) -> Result<(), HplError> {
        let fail = |identity: &str, degree: usize, (row, col): (usize, usize)| HplError::InvalidContraction {
            identity: identity.to_string(),
            degree,
            row,
            col,
        };
        for i in 0..=self.length() {
            let pi = self.projection[i].mul(&self.inclusion[i]);
            if let Some(w) = first_difference(&pi, &RatMatrix::identity(self.small[i].len())) {
                return Err(fail("p i = id", i, w));
            }
            let ip = self.inclusion[i].mul(&self.projection[i]);
            if let Some(w) = first_difference(&ip, &self.pi(i)) {
                return Err(fail("i p = id + d h + h d", i, w));
            }
            if let (Some(h1), Some(h0)) = (self.h(i + 1), self.h(i)) {
                if let Some(w) = first_nonzero(&h1.mul(h0)) {
                    return Err(fail("h h = 0", i, w));
                }
            }
            if let Some(h1) = self.h(i + 1) {
                if let Some(w) = first_nonzero(&h1.mul(&self.inclusion[i])) {
                    return Err(fail("h i = 0", i, w));
                }
            }
            if let Some(h0) = self.h(i) {
                if let Some(w) = first_nonzero(&self.projection[i].mul(h0)) {
                    return Err(fail("p h = 0", i, w));
                }
            }
        }
        Ok(())
    }
}

fn first_nonzero(m: &RatMatrix) -> Option<(usize, usize)> {
    (0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| (r, c))).find(|&(r, c)| !m[(r, c)].is_zero())
}

fn first_difference(a: &RatMatrix, b: &RatMatrix) -> Option<(usize, usize)> {
    first_nonzero(&a.sub(b))
}

fn projector(d_c: &[RatMatrix], homotopy: &[RatMatrix], dims: &[usize], i: usize) -> RatMatrix {
    let mut pi = RatMatrix::identity(dims[i]);
    let len = dims.len() - 1;
    if i < len {
        pi = pi.add(&d_c[i].mul(&homotopy[i]));
    }
    if i > 0 {
        pi = pi.add(&homotopy[i - 1].mul(&d_c[i - 1]));
    }
    pi
}

/// The homotopy matrices for `spec`, before any validation beyond shape
/// and class compatibility.
fn homotopy_matrices(hhl: &HhlComplex, bms: &[BmComplex], d_c: &[RatMatrix], spec: &ContractionSpec) -> Result<Vec<RatMatrix>, HplError> {
    let dims = hhl.complex.ranks();
    let len = hhl.complex.length();
    let mut h: Vec<RatMatrix> = (1..=len).map(|i| RatMatrix::zeros(dims[i], dims[i - 1])).collect();
    let invalid = |identity: &str, degree: usize, row: usize, col: usize| HplError::InvalidContraction {
        identity: identity.to_string(),
        degree,
        row,
        col,
    };
    match spec {
        ContractionSpec::MoorePenrose => {
            for b in bms {
                for i in 1..=len {
                    let plus = mp_inverse(b.d(i).expect("degree in range"));
                    for (r, &row) in b.positions[i].iter().enumerate() {
                        for (c, &col) in b.positions[i - 1].iter().enumerate() {
                            h[i - 1][(row, col)] = -plus[(r, c)].clone();
                        }
                    }
                }
            }
        }
        ContractionSpec::Homotopy(entries) => {
            for e in entries {
                let (si, sp) = hhl.position(e.source);
                let (ti, tp) = hhl.position(e.target);
                if ti != si + 1 {
                    return Err(invalid("h raises degree by one", si, tp, sp));
                }
                if hhl.class_of(e.source) != hhl.class_of(e.target) {
                    return Err(invalid("h is block-diagonal by class", ti, tp, sp));
                }
                h[ti - 1][(tp, sp)] = e.value.clone();
            }
        }
        ContractionSpec::Matching(pairs) => {
            for &(a, b) in pairs {
                let (lower, upper) = if hhl.position(a).0 < hhl.position(b).0 { (a, b) } else { (b, a) };
                let (li, lp) = hhl.position(lower);
                let (ui, up) = hhl.position(upper);
                if ui != li + 1 {
                    return Err(invalid("matched cells differ in dimension by one", ui, up, lp));
                }
                let c = &d_c[ui - 1][(lp, up)];
                if c.is_zero() {
                    return Err(invalid("matched cells have a nonzero d_C coefficient", ui, lp, up));
                }
                h[ui - 1][(up, lp)] = -(Rational::one() / c);
            }
        }
    }
    Ok(h)
}

/// Checks `h^2 = 0`, `h pi = 0`, `pi h = 0` and `pi d_C pi = 0`.
fn validate_user_homotopy(d_c: &[RatMatrix], h: &[RatMatrix], dims: &[usize]) -> Result<(), HplError> {
    let len = dims.len() - 1;
    let pis: Vec<RatMatrix> = (0..=len).map(|i| projector(d_c, h, dims, i)).collect();
    let fail = |identity: &str, degree: usize, (row, col): (usize, usize)| HplError::InvalidContraction {
        identity: identity.to_string(),
        degree,
        row,
        col,
    };
    for i in 1..=len {
        if i < len {
            if let Some(w) = first_nonzero(&h[i].mul(&h[i - 1])) {
                return Err(fail("h h = 0", i, w));
            }
        }
        if let Some(w) = first_nonzero(&h[i - 1].mul(&pis[i - 1])) {
            return Err(fail("h pi = 0", i, w));
        }
        if let Some(w) = first_nonzero(&pis[i].mul(&h[i - 1])) {
            return Err(fail("pi h = 0", i, w));
        }
        if let Some(w) = first_nonzero(&pis[i - 1].mul(&d_c[i - 1]).mul(&pis[i])) {
            return Err(fail("pi d pi = 0", i, w));
        }
    }
    Ok(())
}

type HarmonicVectors = BTreeMap<(usize, ClassId), Vec<Vec<Rational>>>;

/// Collects explicit vectors by `(degree, class)`, in cell coordinates of
/// that class.
fn explicit_bases(
    hhl: &HhlComplex,
    bms: &[BmComplex],
    spec: &HarmonicSpec,
) -> Result<HarmonicVectors, HplError> {
    let mut out: HarmonicVectors = BTreeMap::new();
    let HarmonicSpec::Explicit(vectors) = spec else { return Ok(out) };
    for v in vectors {
        let bad = |class: ClassId, reason: String| GradingError::BadUserBasis { class, degree: v.degree, reason };
        let classes: BTreeSet<ClassId> = v.coefficients.iter().map(|(cell, _)| hhl.class_of(*cell)).collect();
        let Some(class) = classes.iter().next().cloned() else {
            return Err(bad(ClassId { free: vec![], torsion: vec![] }, "empty vector".to_string()).into());
        };
        if classes.len() > 1 {
            return Err(bad(class, "vector mixes cells of different classes".to_string()).into());
        }
        let b = bms.iter().find(|b| b.class == class).expect("every cell class has a complex");
        let mut coords = vec![Rational::zero(); b.positions.get(v.degree).map_or(0, Vec::len)];
        for (cell, value) in &v.coefficients {
            let (deg, pos) = hhl.position(*cell);
            if deg != v.degree {
                return Err(bad(class, format!("cell {} is not in degree {}", hhl.strat.cell(*cell).name, v.degree)).into());
            }
            let slot = b.positions[deg].iter().position(|&p| p == pos).expect("cell belongs to its class");
            coords[slot] += value;
        }
        out.entry((v.degree, class)).or_default().push(coords);
    }
    Ok(out)
}

/// Basis of `im pi` from the pivot columns of `pi`.
fn image_basis(pi: &RatMatrix) -> Vec<Vec<Rational>> {
    let (_, pivots) = rref(pi);
    pivots.into_iter().map(|c| pi.column(c)).collect()
}

/// Builds `(i, p, h)` for the given contraction and harmonic choice and
/// checks the SDR axioms.
pub fn build_base_sdr(
    hhl: &HhlComplex,
    bms: &[BmComplex],
    contraction: &ContractionSpec,
    harmonic: &HarmonicSpec,
) -> Result<SdrDatum, HplError> {
    let c = &hhl.complex;
    let dims = c.ranks();
    let len = c.length();
    let d_c: Vec<RatMatrix> = c.differentials.iter().map(constant_part).collect();
    let homotopy = homotopy_matrices(hhl, bms, &d_c, contraction)?;
    let provenance = match contraction {
        ContractionSpec::MoorePenrose => Provenance::MoorePenrose,
        _ => Provenance::UserSupplied,
    };
    if provenance == Provenance::UserSupplied {
        validate_user_homotopy(&d_c, &homotopy, &dims)?;
    }
    let user = explicit_bases(hhl, bms, harmonic)?;

    let mut small: Vec<Vec<SmallGenerator>> = vec![Vec::new(); len + 1];
    let mut proj_rows: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); len + 1];
    for i in 0..=len {
        let pi = projector(&d_c, &homotopy, &dims, i);
        for b in bms {
            let pos = &b.positions[i];
            let block = pi.submatrix(pos, pos);
            let beta = b.betti(i);
            if block.rank() != beta {
                return Err(HplError::InvalidContraction {
                    identity: format!("rank pi = betti number for class {}", b.class),
                    degree: i,
                    row: 0,
                    col: 0,
                });
            }
            let basis = match user.get(&(i, b.class.clone())) {
                Some(vs) => {
                    check_user_basis(b, i, vs, &block, provenance)?;
                    vs.clone()
                }
                None if provenance == Provenance::MoorePenrose => harmonic_basis(b, i),
                None => image_basis(&block),
            };
            if basis.is_empty() {
                continue;
            }
            let bm = RatMatrix::from_columns(pos.len(), &basis);
            let bt = bm.transpose();
            let coords = bt.mul(&bm).inverse().expect("basis is independent").mul(&bt).mul(&block);
            let first_cell = hhl.cell_at(i, pos[0]);
            for (j, v) in basis.iter().enumerate() {
                let mut full = vec![Rational::zero(); dims[i]];
                let mut row = vec![Rational::zero(); dims[i]];
                for (slot, &p) in pos.iter().enumerate() {
                    full[p] = v[slot].clone();
                    row[p] = coords[(j, slot)].clone();
                }
                small[i].push(SmallGenerator {
                    class: b.class.clone(),
                    bundle: hhl.strat.cell(first_cell).ceiling.clone(),
                    index: j,
                    vector: full,
                });
                proj_rows[i].push(row);
            }
        }
    }
    let inclusion = (0..=len)
        .map(|i| RatMatrix::from_columns(dims[i], &small[i].iter().map(|g| g.vector.clone()).collect::<Vec<_>>()))
        .collect();
    let projection = (0..=len).map(|i| RatMatrix::from_rows(dims[i], proj_rows[i].clone())).collect();
    let sdr = SdrDatum { nvars: c.nvars(), big_dims: dims, small, d_c, inclusion, projection, homotopy, provenance };
    sdr.check_axioms()?;
    Ok(sdr)
}

fn check_user_basis(
    b: &BmComplex,
    i: usize,
    vectors: &[Vec<Rational>],
    pi_block: &RatMatrix,
    provenance: Provenance,
) -> Result<(), HplError> {
    if provenance == Provenance::MoorePenrose {
        return Ok(validate_harmonic_basis(b, i, vectors)?);
    }
    let bad = |reason: String| GradingError::BadUserBasis { class: b.class.clone(), degree: i, reason };
    let beta = b.betti(i);
    if vectors.len() != beta {
        return Err(bad(format!("expected {beta} vectors, got {}", vectors.len())).into());
    }
    for (j, v) in vectors.iter().enumerate() {
        if pi_block.apply(v) != *v {
            return Err(bad(format!("vector {} is not fixed by the contraction's projector", j + 1)).into());
        }
    }
    if RatMatrix::from_rows(pi_block.cols(), vectors.to_vec()).rank() != beta {
        return Err(bad("vectors are linearly dependent".to_string()).into());
    }
    Ok(())
}

/// Output of the perturbation lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbed {
    /// `sigma[i - 1] = Sigma_i = sum_j delta_i (h_i delta_i)^j`.
    pub sigma: Vec<PolyMatrix>,
    /// `d_min[i - 1] : H_i -> H_{i-1}`.
    pub d_min: Vec<PolyMatrix>,
    pub i_inf: Vec<PolyMatrix>,
    pub p_inf: Vec<PolyMatrix>,
    /// `h_inf[i - 1] : C_{i-1} -> C_i`.
    pub h_inf: Vec<PolyMatrix>,
    /// Terms summed for each `Sigma_i`.
    pub iterations: Vec<usize>,
}

/// Runs the perturbation series with at most `max_terms` terms per degree.
pub fn perturb(sdr: &SdrDatum, delta: &[PolyMatrix], max_terms: usize) -> Result<Perturbed, HplError> {
    let len = sdr.length();
    let nvars = sdr.nvars;
    let mut sigma = Vec::with_capacity(len);
    let mut iterations = Vec::with_capacity(len);
    for i in 1..=len {
        let d = &delta[i - 1];
        let h = sdr.h(i).expect("degree in range");
        let mut acc = PolyMatrix::zeros(d.rows(), d.cols(), nvars);
        let mut term = d.clone();
        let mut n = 0;
        while !term.is_zero() {
            if n >= max_terms {
                return Err(HplError::NonNilpotent { degree: i, iterations: n });
            }
            acc = acc.add(&term);
            term = d.mul(&PolyMatrix::rat_mul(h, &term));
            n += 1;
        }
        sigma.push(acc);
        iterations.push(n);
    }
    let poly = |m: &RatMatrix| PolyMatrix::from_rational(m, nvars);
    let d_min = (1..=len)
        .map(|i| PolyMatrix::rat_mul(&sdr.projection[i - 1], &sigma[i - 1]).mul_rat(&sdr.inclusion[i]))
        .collect();
    let i_inf = (0..=len)
        .map(|i| {
            let base = poly(&sdr.inclusion[i]);
            match sdr.h(i) {
                Some(h) => base.add(&PolyMatrix::rat_mul(h, &sigma[i - 1].mul_rat(&sdr.inclusion[i]))),
                None => base,
            }
        })
        .collect();
    let p_inf = (0..=len)
        .map(|i| {
            let base = poly(&sdr.projection[i]);
            match sdr.h(i + 1) {
                Some(h) => base.add(&PolyMatrix::rat_mul(&sdr.projection[i], &sigma[i]).mul_rat(h)),
                None => base,
            }
        })
        .collect();
    let h_inf = (1..=len)
        .map(|i| {
            let h = sdr.h(i).expect("degree in range");
            poly(h).add(&PolyMatrix::rat_mul(h, &sigma[i - 1]).mul_rat(h))
        })
        .collect();
    Ok(Perturbed { sigma, d_min, i_inf, p_inf, h_inf, iterations })
}

fn compare(identity: &str, degree: usize, lhs: &PolyMatrix, rhs: &PolyMatrix) -> Result<(), HplError> {
    match lhs.sub(rhs).first_nonzero() {
        None => Ok(()),
        Some((row, col)) => Err(HplError::IdentityFailure { identity: identity.to_string(), degree, row, col }),
    }
}

fn zero_check(identity: &str, degree: usize, m: &PolyMatrix) -> Result<(), HplError> {
    match m.first_nonzero() {
        None => Ok(()),
        Some((row, col)) => Err(HplError::IdentityFailure { identity: identity.to_string(), degree, row, col }),
    }
}

/// The eight identities making `(i_inf, p_inf, h_inf)` an SDR between
/// `(C, d)` and `(H, d_min)`.
pub fn verify_sdr_perturbed(d: &[PolyMatrix], sdr: &SdrDatum, pert: &Perturbed) -> Result<(), HplError> {
    let len = sdr.length();
    let nvars = sdr.nvars;
    let dm = |i: usize| if i == 0 || i > len { None } else { Some(&d[i - 1]) };
    let hinf = |i: usize| if i == 0 || i > len { None } else { Some(&pert.h_inf[i - 1]) };
    let dmin = |i: usize| if i == 0 || i > len { None } else { Some(&pert.d_min[i - 1]) };
    for i in 0..=len {
        let ii = &pert.i_inf[i];
        let pi = &pert.p_inf[i];
        compare("p_inf i_inf = id", i, &pi.mul(ii), &PolyMatrix::identity(sdr.small[i].len(), nvars))?;
        let mut rhs = PolyMatrix::identity(sdr.big_dims[i], nvars);
        if let (Some(dd), Some(h)) = (dm(i + 1), hinf(i + 1)) {
            rhs = rhs.add(&dd.mul(h));
        }
        if let (Some(h), Some(dd)) = (hinf(i), dm(i)) {
            rhs = rhs.add(&h.mul(dd));
        }
        compare("i_inf p_inf = id + d h_inf + h_inf d", i, &ii.mul(pi), &rhs)?;
        if let (Some(h1), Some(h0)) = (hinf(i + 1), hinf(i)) {
            zero_check("h_inf h_inf = 0", i, &h1.mul(h0))?;
        }
        if let Some(h1) = hinf(i + 1) {
            zero_check("h_inf i_inf = 0", i, &h1.mul(ii))?;
        }
        if let Some(h0) = hinf(i) {
            zero_check("p_inf h_inf = 0", i, &pi.mul(h0))?;
        }
        if let (Some(dd), Some(dmn)) = (dm(i), dmin(i)) {
            compare("i_inf d_min = d i_inf", i, &pert.i_inf[i - 1].mul(dmn), &dd.mul(ii))?;
            compare("p_inf d = d_min p_inf", i, &pert.p_inf[i - 1].mul(dd), &dmn.mul(pi))?;
        }
        if let (Some(a), Some(b)) = (dmin(i), dmin(i + 1)) {
            zero_check("d_min d_min = 0", i, &a.mul(b))?;
        }
    }
    Ok(())
}

/// `delta h Sigma = Sigma h delta = Sigma - delta` and
/// `Sigma i p Sigma + Sigma d_C + d_C Sigma = 0`.
pub fn verify_lemma_identities(delta: &[PolyMatrix], sdr: &SdrDatum, pert: &Perturbed) -> Result<(), HplError> {
    let len = sdr.length();
    for i in 1..=len {
        let s = &pert.sigma[i - 1];
        let dl = &delta[i - 1];
        let h = sdr.h(i).expect("degree in range");
        let target = s.sub(dl);
        compare("delta h Sigma = Sigma - delta", i, &dl.mul(&PolyMatrix::rat_mul(h, s)), &target)?;
        compare("Sigma h delta = Sigma - delta", i, &s.mul_rat(h).mul(dl), &target)?;
        if i < len {
            let s_up = &pert.sigma[i];
            let ip = sdr.inclusion[i].mul(&sdr.projection[i]);
            let total = s
                .mul_rat(&ip)
                .mul(s_up)
                .add(&s.mul_rat(&sdr.d_c[i]))
                .add(&PolyMatrix::rat_mul(&sdr.d_c[i - 1], s_up));
            zero_check("Sigma i p Sigma + Sigma d_C + d_C Sigma = 0", i, &total)?;
        }
    }
    Ok(())
}

/// No entry of any differential has a nonzero constant term.
pub fn verify_minimality(d_min: &[PolyMatrix]) -> bool {
    minimality_witness(d_min).is_none()
}

fn minimality_witness(d_min: &[PolyMatrix]) -> Option<(usize, usize, usize)> {
    for (idx, m) in d_min.iter().enumerate() {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !m.get(r, c).constant_term().is_zero() {
                    return Some((idx + 1, r, c));
                }
            }
        }
    }
    None
}

/// Everything computed on the way to the minimal resolution.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    pub hhl: HhlComplex,
    pub grading: Grading,
    pub bms: Vec<BmComplex>,
    pub betti: BettiTable,
    pub sdr: SdrDatum,
    /// `delta[i - 1] = d_i - constant_part(d_i)`.
    pub delta: Vec<PolyMatrix>,
    pub perturbed: Perturbed,
    pub complex: LineBundleComplex,
}

impl MinimalResolution {
    /// Every symbolic check: `d^2 = 0`, the SDR axioms, the lemma
    /// identities, the eight perturbed identities and minimality.
    pub fn verify(&self) -> Result<(), crate::Error> {
        verify_complex(&self.hhl.complex)?;
        self.sdr.check_axioms()?;
        verify_lemma_identities(&self.delta, &self.sdr, &self.perturbed)?;
        verify_sdr_perturbed(&self.hhl.complex.differentials, &self.sdr, &self.perturbed)?;
        if let Some((degree, row, col)) = minimality_witness(&self.perturbed.d_min) {
            return Err(HplError::NotMinimal { degree, row, col }.into());
        }
        Ok(())
    }
}

/// Number of distinct grades among classes, plus one: a bound on the
/// length of any strictly grade-decreasing chain.
pub fn nilpotence_bound(bms: &[BmComplex]) -> usize {
    bms.iter().map(|b| b.grade.clone()).collect::<BTreeSet<_>>().len() + 1
}

/// Runs the whole pipeline on `q`.
pub fn minimal_resolution(q: &Quadruple, options: &MinresOptions) -> Result<MinimalResolution, crate::Error> {
    let hhl = build_hhl_complex(q)?;
    minimal_resolution_from(hhl, options)
}

pub fn minimal_resolution_from(hhl: HhlComplex, options: &MinresOptions) -> Result<MinimalResolution, crate::Error> {
    verify_complex(&hhl.complex)?;
    let grading = find_positive_grading(&hhl)?;
    let bms = build_bm_complexes(&hhl, &grading)?;
    let betti = betti_table(&bms);
    let sdr = build_base_sdr(&hhl, &bms, &options.contraction, &options.harmonic)?;
    let nvars = hhl.complex.nvars();
    let delta: Vec<PolyMatrix> = hhl
        .complex
        .differentials
        .iter()
        .zip(&sdr.d_c)
        .map(|(d, c)| d.sub(&PolyMatrix::from_rational(c, nvars)))
        .collect();
    let perturbed = perturb(&sdr, &delta, nilpotence_bound(&bms))?;
    for (idx, pair) in perturbed.d_min.windows(2).enumerate() {
        if let Some((row, col)) = pair[0].mul(&pair[1]).first_nonzero() {
            return Err(HplError::IdentityFailure { identity: "d_min d_min = 0".to_string(), degree: idx + 1, row, col }.into());
        }
    }
    if let Some((degree, row, col)) = minimality_witness(&perturbed.d_min) {
        return Err(HplError::NotMinimal { degree, row, col }.into());
    }
    let terms = sdr
        .small
        .iter()
        .map(|gens| {
            gens.iter()
                .map(|g| {
                    let count = gens.iter().filter(|o| o.class == g.class).count();
                    let name = if count > 1 { format!("{}#{}", g.class, g.index + 1) } else { g.class.to_string() };
                    Generator { cell: None, name, bundle: g.bundle.clone(), class: Some(g.class.clone()) }
                })
                .collect()
        })
        .collect();
    let complex = LineBundleComplex {
        variables: hhl.complex.variables.clone(),
        terms,
        differentials: perturbed.d_min.clone(),
    };
    Ok(MinimalResolution { hhl, grading, bms, betti, sdr, delta, perturbed, complex })
}
