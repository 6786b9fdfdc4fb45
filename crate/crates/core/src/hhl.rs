//! The HHL complex: one line bundle `O(-a(sigma))` per torus cell, with
//! differentials `sum sign * x^epsilon` over the facet lifts.

use crate::grading::{ClassGroup, ClassId};
use crate::polyring::{monomial_from_i64, PolyMatrix};
use crate::strat::{Quadruple, StratError, Stratification};

/// One free summand of a complex of line bundles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// Torus cell behind the summand, if any.
    pub cell: Option<usize>,
    pub name: String,
    /// The bundle is `O(-sum a_i D_i)`.
    pub bundle: Vec<i64>,
    pub class: Option<ClassId>,
}

/// A bounded complex `0 -> F_len -> ... -> F_0 -> 0` of sums of line
/// bundles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleComplex {
    pub variables: Vec<String>,
    /// Generators per homological degree `0..=len`.
    pub terms: Vec<Vec<Generator>>,
    /// `differentials[i - 1]` is `d_i : F_i -> F_{i-1}`, sized
    /// `rank F_{i-1} x rank F_i`.
    pub differentials: Vec<PolyMatrix>,
}

impl LineBundleComplex {
    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    pub fn rank(&self, i: usize) -> usize {
        self.terms.get(i).map_or(0, Vec::len)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(Vec::len).collect()
    }

    /// `d_i` for `1 <= i <= length`.
    pub fn d(&self, i: usize) -> &PolyMatrix {
        &self.differentials[i - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("d_{degree} * d_{} is nonzero at entry ({row}, {col})", degree + 1)]
pub struct NotAComplex {
    pub degree: usize,
    pub row: usize,
    pub col: usize,
}

/// The HHL complex together with the stratification it was built from.
#[derive(Clone, Debug)]
pub struct HhlComplex {
    pub strat: Stratification,
    pub classes: ClassGroup,
    pub complex: LineBundleComplex,
}

impl HhlComplex {
    pub fn quadruple(&self) -> &Quadruple {
        &self.strat.quadruple
    }

    /// Cell id of the generator at `position` in degree `i`.
    pub fn cell_at(&self, i: usize, position: usize) -> usize {
        self.strat.cells_of_dim(i)[position]
    }

    /// `(degree, position)` of a cell.
    pub fn position(&self, cell: usize) -> (usize, usize) {
        let c = self.strat.cell(cell);
        (c.dim, c.index_in_dim)
    }

    pub fn class_of(&self, cell: usize) -> ClassId {
        self.classes.class_of_bundle(&self.strat.cell(cell).ceiling)
    }

    /// `d` entry for the pair (child row, parent column).
    pub fn entry(&self, parent: usize, child: usize) -> &crate::polyring::Poly {
        let (i, col) = self.position(parent);
        let (j, row) = self.position(child);
        assert_eq!(j + 1, i, "entry requested between non-consecutive degrees");
        self.complex.d(i).get(row, col)
    }
}

pub fn build_hhl_complex(q: &Quadruple) -> Result<HhlComplex, StratError> {
    let strat = Stratification::new(q)?;
    Ok(hhl_from_stratification(strat))
}

pub fn hhl_from_stratification(strat: Stratification) -> HhlComplex {
    let q = &strat.quadruple;
    let nvars = q.n;
    let classes = ClassGroup::new(q);
    let terms: Vec<Vec<crate::hhl::Generator>> = (0..=q.k)
        .map(|dim| {
            strat
                .cells_of_dim(dim)
                .iter()
                .map(|&id| {
                    let cell = strat.cell(id);
                    Generator {
                        cell: Some(id),
                        name: cell.name.clone(),
                        bundle: cell.ceiling.clone(),
                        class: Some(classes.class_of_bundle(&cell.ceiling)),
                    }
                })
                .collect()
        })
        .collect();
    let mut differentials: Vec<PolyMatrix> =
        (1..=q.k).map(|i| PolyMatrix::zeros(terms[i - 1].len(), terms[i].len(), nvars)).collect();
    for inc in strat.all_incidences() {
        let parent = strat.cell(inc.parent);
        let child = strat.cell(inc.child);
        let term = monomial_from_i64(&inc.epsilon, inc.sign as i64);
        differentials[parent.dim - 1].entry_mut(child.index_in_dim, parent.index_in_dim).add_assign(&term);
    }
    let complex = LineBundleComplex { variables: q.variables.clone(), terms, differentials };
    HhlComplex { strat, classes, complex }
}

/// Checks `d_i d_{i+1} = 0` for every `i`, reporting the first failing
/// entry of the first failing product.
pub fn verify_complex(c: &LineBundleComplex) -> Result<(), NotAComplex> {
    for i in 1..c.differentials.len() {
        let product = c.d(i).mul(c.d(i + 1));
        if let Some((row, col)) = product.first_nonzero() {
            return Err(NotAComplex { degree: i, row, col });
        }
    }
    Ok(())
}
