//! Seeded random inputs and the per-instance property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grading::{euler_consistent, hodge_decomposition_holds, GradingError};
use crate::hhl::verify_complex;
use crate::hpl::{minimal_resolution, MinimalResolution, MinresOptions};
use crate::paths::{PathOracle, WeightSource};
use crate::pinv::{mp_entry, mp_inverse, mp_inverse_hedge, verify_penrose, DEFAULT_HEDGE_BOUND};
use crate::ratlin::RatMatrix;
use crate::strat::Quadruple;
use crate::Error;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rank-`k` matrix with `k` in `{1, 2}`, `k <= n <= max_n` and entries in
/// `[-bound, bound]`.
pub fn random_quadruple(rng: &mut ChaCha8Rng, max_n: usize, bound: i64) -> Quadruple {
    loop {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(k..=max_n.max(k));
        let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        if let Ok(q) = Quadruple::new(rows) {
            return q;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> RatMatrix {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    RatMatrix::from_i64(&rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    /// No positive grading exists; nothing to minimize.
    Skipped,
}

/// Every invariant of one instance on top of [`MinimalResolution::verify`]:
/// the Hodge rank identity per class, Euler consistency and the path-sum
/// cross-check.
pub fn check_resolution(m: &MinimalResolution) -> Result<(), Error> {
    m.verify()?;
    for b in &m.bms {
        for i in 0..b.positions.len() {
            if !hodge_decomposition_holds(b, i) {
                return Err(Error::Invariant {
                    check: "Hodge rank identity",
                    witness: format!("class {} in degree {i}", b.class),
                });
            }
        }
    }
    if !euler_consistent(&m.bms, &m.betti) {
        return Err(Error::Invariant {
            check: "Euler consistency",
            witness: "Betti numbers disagree with cell counts".to_string(),
        });
    }
    let source = match m.sdr.provenance {
        crate::hpl::Provenance::MoorePenrose => WeightSource::Hedge,
        crate::hpl::Provenance::UserSupplied => WeightSource::Homotopy(&m.sdr),
    };
    PathOracle::new(&m.hhl, &m.grading, &m.bms, source).crosscheck_sigma(&m.perturbed.sigma)?;
    Ok(())
}

pub fn check_instance(q: &Quadruple) -> Result<Outcome, Error> {
    match minimal_resolution(q, &MinresOptions::default()) {
        Ok(m) => check_resolution(&m).map(|_| Outcome::Passed),
        Err(Error::Grading(GradingError::NoPositiveGrading { .. })) => {
            verify_complex(&crate::build_hhl_complex(q)?.complex)?;
            Ok(Outcome::Skipped)
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteSummary {
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<(Vec<Vec<i64>>, String)>,
}

/// Draws instances until `target` of them admit a positive grading (or
/// `10 * target` draws) and checks each one.
pub fn run_quadruple_suite(seed: u64, target: usize, max_n: usize, bound: i64) -> SuiteSummary {
    let mut rng = rng(seed);
    let mut out = SuiteSummary::default();
    let mut draws = 0;
    while out.passed + out.failures.len() < target && draws < 10 * target {
        draws += 1;
        let q = random_quadruple(&mut rng, max_n, bound);
        match check_instance(&q) {
            Ok(Outcome::Passed) => out.passed += 1,
            Ok(Outcome::Skipped) => out.skipped += 1,
            Err(e) => out.failures.push((q.psi.to_rows(), e.to_string())),
        }
    }
    out
}

/// The four Penrose identities, agreement with the hedge formula and the
/// entry formula.
pub fn check_matrix(a: &RatMatrix) -> Result<(), String> {
    let p = mp_inverse(a);
    if !verify_penrose(a, &p) {
        return Err("Penrose identities".to_string());
    }
    let hedge = mp_inverse_hedge(a, DEFAULT_HEDGE_BOUND).map_err(|e| e.to_string())?;
    if hedge != p {
        return Err("hedge formula disagrees".to_string());
    }
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            if mp_entry(a, i, j, DEFAULT_HEDGE_BOUND).map_err(|e| e.to_string())? != p[(i, j)] {
                return Err(format!("entry formula disagrees at ({i}, {j})"));
            }
        }
    }
    Ok(())
}

/// Checks `count` random matrices; returns the failures.
pub fn run_matrix_suite(seed: u64, count: usize, max_dim: usize, bound: i64) -> Vec<(RatMatrix, String)> {
    let mut rng = rng(seed);
    (0..count)
        .filter_map(|_| {
            let a = random_matrix(&mut rng, max_dim, bound);
            check_matrix(&a).err().map(|e| (a, e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_quadruple(&mut rng(7), 6, 3);
        let b = random_quadruple(&mut rng(7), 6, 3);
        assert_eq!(a, b);
        assert!(a.k <= 2 && a.n <= 6);
        let m = random_matrix(&mut rng(7), 6, 3);
        assert!(m.rows() <= 6 && m.cols() <= 6);
    }

    #[test]
    fn small_suite_passes() {
        let s = run_quadruple_suite(1, 10, 4, 2);
        assert!(s.failures.is_empty(), "{:?}", s.failures);
        assert_eq!(s.passed, 10);
        assert!(run_matrix_suite(1, 10, 4, 3).is_empty());
    }
}
