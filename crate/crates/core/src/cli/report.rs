//! The JSON report. Every field is built from sorted data so that reports
//! are byte-identical across runs.

use num::Zero;
use serde::Serialize;

use crate::grading::{BettiTable, Grading};
use crate::hhl::{HhlComplex, LineBundleComplex};
use crate::hpl::{MinimalResolution, Provenance};
use crate::ratlin::{fmt_rational, Rational};
use crate::strat::{Quadruple, Stratification};

#[derive(Clone, Debug, Serialize)]
pub struct QuadrupleReport {
    pub n: usize,
    pub k: usize,
    pub psi: Vec<Vec<i64>>,
    pub variables: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub name: String,
    pub dim: usize,
    pub label: String,
    pub ceiling: Vec<i64>,
    pub class: String,
    pub point: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratificationReport {
    pub counts: Vec<usize>,
    pub euler_characteristic: i64,
    pub cells: Vec<CellReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub class: String,
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorReport {
    pub name: String,
    pub bundle: Vec<i64>,
    pub class: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixReport {
    pub name: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexReport {
    pub ranks: Vec<usize>,
    pub terms: Vec<Vec<GeneratorReport>>,
    pub differentials: Vec<MatrixReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiReport {
    pub totals: Vec<usize>,
    pub table: Vec<BettiRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiRow {
    pub class: String,
    pub betti: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyEntryReport {
    pub from: String,
    pub to: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub provenance: &'static str,
    pub homotopy: Vec<HomotopyEntryReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub result: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadruple: Option<QuadrupleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stratification: Option<StratificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hhl: Option<ComplexReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<BettiReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ContractionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_resolution: Option<ComplexReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), ..Default::default() }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn texts(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

pub fn quadruple_report(q: &Quadruple) -> QuadrupleReport {
    QuadrupleReport {
        n: q.n,
        k: q.k,
        psi: q.psi.to_rows(),
        variables: q.variables.clone(),
        fan: q.fan.clone(),
        group: q.group.clone(),
    }
}

pub fn stratification_report(hhl: &HhlComplex) -> StratificationReport {
    let s: &Stratification = &hhl.strat;
    let cells = s
        .cells
        .iter()
        .map(|c| CellReport {
            name: c.name.clone(),
            dim: c.dim,
            label: c.label.to_string(),
            ceiling: c.ceiling.clone(),
            class: hhl.class_of(c.id).to_string(),
            point: texts(&c.interior),
        })
        .collect();
    StratificationReport { counts: s.counts_by_dim(), euler_characteristic: s.euler_characteristic(), cells }
}

/// Cells grouped by class, classes in their natural order.
pub fn class_report(hhl: &HhlComplex) -> Vec<ClassReport> {
    let mut groups: std::collections::BTreeMap<crate::ClassId, Vec<String>> = Default::default();
    for c in &hhl.strat.cells {
        groups.entry(hhl.class_of(c.id)).or_default().push(c.name.clone());
    }
    groups.into_iter().map(|(class, cells)| ClassReport { class: class.to_string(), cells }).collect()
}

pub fn complex_report(c: &LineBundleComplex) -> ComplexReport {
    let terms: Vec<Vec<GeneratorReport>> = c
        .terms
        .iter()
        .map(|gens| {
            gens.iter()
                .map(|g| GeneratorReport {
                    name: g.name.clone(),
                    bundle: g.bundle.clone(),
                    class: g.class.as_ref().map_or_else(String::new, ToString::to_string),
                })
                .collect()
        })
        .collect();
    let differentials = (1..=c.length())
        .map(|i| {
            let d = c.d(i);
            MatrixReport {
                name: format!("d{i}"),
                rows: c.terms[i - 1].iter().map(|g| g.name.clone()).collect(),
                cols: c.terms[i].iter().map(|g| g.name.clone()).collect(),
                entries: (0..d.rows()).map(|r| (0..d.cols()).map(|col| d.get(r, col).to_text(&c.variables)).collect()).collect(),
            }
        })
        .collect();
    ComplexReport { ranks: c.ranks(), terms, differentials }
}

pub fn grading_report(g: &Grading) -> Vec<String> {
    texts(&g.theta)
}

pub fn betti_report(b: &BettiTable) -> BettiReport {
    BettiReport {
        totals: b.totals(),
        table: b
            .entries
            .iter()
            .filter(|(_, v)| v.iter().any(|&x| x > 0))
            .map(|(class, v)| BettiRow { class: class.to_string(), betti: v.clone() })
            .collect(),
    }
}

/// Nonzero homotopy entries `h(from) = ... + value * to`.
pub fn contraction_report(m: &MinimalResolution) -> ContractionReport {
    let hhl = &m.hhl;
    let mut homotopy = Vec::new();
    for (idx, h) in m.sdr.homotopy.iter().enumerate() {
        let i = idx + 1;
        for col in 0..h.cols() {
            for row in 0..h.rows() {
                let v = &h[(row, col)];
                if !v.is_zero() {
                    homotopy.push(HomotopyEntryReport {
                        from: hhl.strat.cell(hhl.cell_at(i - 1, col)).name.clone(),
                        to: hhl.strat.cell(hhl.cell_at(i, row)).name.clone(),
                        value: fmt_rational(v),
                    });
                }
            }
        }
    }
    let provenance = match m.sdr.provenance {
        Provenance::MoorePenrose => "moore-penrose",
        Provenance::UserSupplied => "user-supplied",
    };
    ContractionReport { provenance, homotopy }
}
