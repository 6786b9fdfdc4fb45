//! Input files: a quadruple or an embedding, plus run options.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::hhl::HhlComplex;
use crate::hpl::{ContractionSpec, ExplicitVector, HarmonicSpec, HomotopyEntry};
use crate::ratlin::{fmt_rational, parse_rational, smith_normal_form, IntMatrix, Rational};
use crate::strat::{Quadruple, StratError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("sublattice is not saturated: the cokernel has torsion {invariants:?}")]
    NotSaturated { invariants: Vec<i64> },
    #[error("sublattice generators have rank {rank}, expected {expected}")]
    RankError { rank: usize, expected: usize },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl InputError {
    pub fn exit_code(&self) -> i32 {
        match self {
            InputError::Parse { .. } => 2,
            InputError::Io { .. } => 1,
            _ => 3,
        }
    }

    fn validation(field: &str, message: impl Into<String>) -> Self {
        InputError::Validation { field: field.to_string(), message: message.into() }
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn read_text(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path)
        .map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// How to pick the homotopy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractionChoice {
    MoorePenrose,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HarmonicChoice {
    Canonical,
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmitFormat {
    Report,
    Matrices,
    M2,
    Svg,
}

impl std::str::FromStr for EmitFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "report" => Ok(EmitFormat::Report),
            "matrices" => Ok(EmitFormat::Matrices),
            "m2" => Ok(EmitFormat::M2),
            "svg" => Ok(EmitFormat::Svg),
            other => Err(format!("unknown format `{other}`; expected report, matrices, m2 or svg")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub contraction: ContractionChoice,
    pub harmonic_basis: HarmonicChoice,
    pub emit: Vec<EmitFormat>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            contraction: ContractionChoice::MoorePenrose,
            harmonic_basis: HarmonicChoice::Canonical,
            emit: vec![EmitFormat::Report],
        }
    }
}

/// A validated input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpec {
    pub quadruple: Quadruple,
    pub options: RunOptions,
}

/// A toric variety with rays in `Z^d` and a saturated sublattice whose
/// quotient carries the subvariety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSpec {
    /// `n` rays, each of length `d`.
    pub rays: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<Vec<Vec<usize>>>,
    /// Generators of the sublattice, each of length `d`.
    #[serde(default)]
    pub sublattice: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    contraction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    harmonic_basis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    emit: Option<Vec<EmitFormat>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    psi: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    embedding: Option<EmbeddingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fan: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    options: Option<RawOptions>,
}

/// Parses an input document. Relative option paths resolve against
/// `base_dir`.
pub fn parse_input(text: &str, base_dir: &Path) -> Result<InputSpec, InputError> {
    let raw: RawInput = serde_json::from_str(text)?;
    let (psi, fan) = match (&raw.psi, &raw.embedding) {
        (Some(_), Some(_)) => return Err(InputError::validation("embedding", "give either psi or embedding, not both")),
        (None, None) => return Err(InputError::validation("psi", "missing; give psi or embedding")),
        (Some(psi), None) => (psi.clone(), raw.fan.clone()),
        (None, Some(e)) => {
            if raw.fan.is_some() && e.fan.is_some() {
                return Err(InputError::validation("fan", "given both at top level and in embedding"));
            }
            (embedding_to_psi(e)?, raw.fan.clone().or_else(|| e.fan.clone()))
        }
    };
    let k = psi.len();
    let n = psi.first().map_or(0, Vec::len);
    if let Some(rn) = raw.n {
        if rn != n {
            return Err(InputError::validation("n", format!("says {rn} but psi has {n} columns")));
        }
    }
    if let Some(rk) = raw.k {
        if rk != k {
            return Err(InputError::validation("k", format!("says {rk} but psi has {k} rows")));
        }
    }
    let mut q = Quadruple::new(psi).map_err(|e| strat_validation("psi", e))?;
    if let Some(names) = raw.variables.clone() {
        if names.iter().any(|s| s.is_empty() || !s.chars().all(|c| c.is_alphanumeric() || c == '_')) {
            return Err(InputError::validation("variables", "names must be nonempty alphanumeric"));
        }
        q = q.with_variables(names).map_err(|e| strat_validation("variables", e))?;
    }
    if let Some(fan) = fan {
        q = q.with_fan(fan).map_err(|e| strat_validation("fan", e))?;
    }
    q.group = raw.group.clone();
    let options = resolve_options(raw.options.as_ref(), base_dir);
    Ok(InputSpec { quadruple: q, options })
}

fn strat_validation(field: &str, e: StratError) -> InputError {
    InputError::validation(field, e.to_string())
}

fn resolve_options(raw: Option<&RawOptions>, base_dir: &Path) -> RunOptions {
    let mut out = RunOptions::default();
    let Some(raw) = raw else { return out };
    if let Some(c) = &raw.contraction {
        out.contraction = parse_contraction_choice(c, base_dir);
    }
    if let Some(h) = &raw.harmonic_basis {
        out.harmonic_basis = parse_harmonic_choice(h, base_dir);
    }
    if let Some(e) = &raw.emit {
        out.emit = e.clone();
    }
    out
}

pub fn parse_contraction_choice(s: &str, base_dir: &Path) -> ContractionChoice {
    match s {
        "mp" | "moore-penrose" => ContractionChoice::MoorePenrose,
        path => ContractionChoice::File(base_dir.join(path)),
    }
}

pub fn parse_harmonic_choice(s: &str, base_dir: &Path) -> HarmonicChoice {
    match s {
        "canonical" => HarmonicChoice::Canonical,
        path => HarmonicChoice::File(base_dir.join(path)),
    }
}

pub fn read_input(path: &Path) -> Result<InputSpec, InputError> {
    let text = read_text(path)?;
    parse_input(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Serializes a spec in the input grammar. Option paths are written as
/// given.
pub fn emit_input(spec: &InputSpec) -> String {
    let q = &spec.quadruple;
    let path_text = |p: &Path| p.to_string_lossy().into_owned();
    let defaults = RunOptions::default();
    let options = if spec.options == defaults {
        None
    } else {
        Some(RawOptions {
            contraction: Some(match &spec.options.contraction {
                ContractionChoice::MoorePenrose => "moore-penrose".to_string(),
                ContractionChoice::File(p) => path_text(p),
            }),
            harmonic_basis: Some(match &spec.options.harmonic_basis {
                HarmonicChoice::Canonical => "canonical".to_string(),
                HarmonicChoice::File(p) => path_text(p),
            }),
            emit: Some(spec.options.emit.clone()),
        })
    };
    let raw = RawInput {
        n: Some(q.n),
        k: Some(q.k),
        psi: Some(q.psi.to_rows()),
        embedding: None,
        variables: Some(q.variables.clone()),
        fan: q.fan.clone(),
        group: q.group.clone(),
        options,
    };
    serde_json::to_string_pretty(&raw).expect("input grammar serializes")
}

/// `psi = (rows m.. of U) * rays` where `U phi V` is the Smith form of the
/// sublattice matrix `phi`.
pub fn embedding_to_psi(e: &EmbeddingSpec) -> Result<Vec<Vec<i64>>, InputError> {
    let d = e.rays.first().map_or(0, Vec::len);
    if e.rays.is_empty() || d == 0 {
        return Err(InputError::validation("embedding.rays", "need at least one nonzero-length ray"));
    }
    if e.rays.iter().any(|r| r.len() != d) {
        return Err(InputError::validation("embedding.rays", "rays have different lengths"));
    }
    if e.sublattice.iter().any(|g| g.len() != d) {
        return Err(InputError::validation("embedding.sublattice", format!("generators must have length {d}")));
    }
    let m = e.sublattice.len();
    let phi = IntMatrix::from_rows_with_cols(m, &(0..d).map(|i| e.sublattice.iter().map(|g| g[i]).collect()).collect::<Vec<_>>());
    let snf = smith_normal_form(&phi);
    if snf.invariants.len() < m {
        return Err(InputError::RankError { rank: snf.invariants.len(), expected: m });
    }
    if snf.invariants.iter().any(|&x| x != 1) {
        return Err(InputError::NotSaturated { invariants: snf.invariants.clone() });
    }
    if m == d {
        return Err(InputError::validation("embedding.sublattice", "the sublattice is everything; k = 0 leaves nothing to resolve"));
    }
    let rays = IntMatrix::from_rows_with_cols(e.rays.len(), &(0..d).map(|i| e.rays.iter().map(|r| r[i]).collect()).collect::<Vec<_>>());
    let quotient: Vec<Vec<i64>> = (m..d).map(|i| snf.u.row(i).to_vec()).collect();
    Ok(IntMatrix::from_rows_with_cols(d, &quotient).mul(&rays).to_rows())
}

pub fn embedding_to_quadruple(e: &EmbeddingSpec) -> Result<Quadruple, InputError> {
    let mut q = Quadruple::new(embedding_to_psi(e)?).map_err(|err| strat_validation("embedding", err))?;
    if let Some(fan) = &e.fan {
        q = q.with_fan(fan.clone()).map_err(|err| strat_validation("embedding.fan", err))?;
    }
    Ok(q)
}

/// A rational written as a JSON integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    pub fn value(&self, field: &str) -> Result<Rational, InputError> {
        match self {
            RationalText::Int(i) => Ok(crate::ratlin::rat(*i)),
            RationalText::Text(s) => parse_rational(s)
                .ok_or_else(|| InputError::validation(field, format!("`{s}` is not a rational number"))),
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        if q.is_integer() {
            if let Ok(i) = fmt_rational(q).parse::<i64>() {
                return RationalText::Int(i);
            }
        }
        RationalText::Text(fmt_rational(q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHomotopyEntry {
    from: String,
    to: String,
    value: RationalText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContraction {
    #[serde(default)]
    matching: Option<Vec<[String; 2]>>,
    #[serde(default)]
    homotopy: Option<Vec<RawHomotopyEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVector {
    degree: usize,
    coefficients: BTreeMap<String, RationalText>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHarmonic {
    vectors: Vec<RawVector>,
}

fn cell_id(hhl: &HhlComplex, name: &str, field: &str) -> Result<usize, InputError> {
    hhl.strat.find(name).ok_or_else(|| InputError::validation(field, format!("no cell named `{name}`")))
}

/// Parses a contraction file: `{"matching": [["V2","E3"], ...]}` or
/// `{"homotopy": [{"from": "E1", "to": "F4", "value": "-1/3"}, ...]}`.
pub fn parse_contraction(text: &str, hhl: &HhlComplex) -> Result<ContractionSpec, InputError> {
    let raw: RawContraction = serde_json::from_str(text)?;
    match (raw.matching, raw.homotopy) {
        (Some(pairs), None) => {
            let mut out = Vec::new();
            for [a, b] in &pairs {
                out.push((cell_id(hhl, a, "matching")?, cell_id(hhl, b, "matching")?));
            }
            Ok(ContractionSpec::Matching(out))
        }
        (None, Some(entries)) => {
            let mut out = Vec::new();
            for e in &entries {
                out.push(HomotopyEntry {
                    source: cell_id(hhl, &e.from, "homotopy.from")?,
                    target: cell_id(hhl, &e.to, "homotopy.to")?,
                    value: e.value.value("homotopy.value")?,
                });
            }
            Ok(ContractionSpec::Homotopy(out))
        }
        _ => Err(InputError::validation("contraction", "give exactly one of `matching` or `homotopy`")),
    }
}

/// Parses `{"vectors": [{"degree": 1, "coefficients": {"E1": -2, ...}}]}`.
pub fn parse_harmonic(text: &str, hhl: &HhlComplex) -> Result<HarmonicSpec, InputError> {
    let raw: RawHarmonic = serde_json::from_str(text)?;
    let mut out = Vec::new();
    for v in &raw.vectors {
        let mut coefficients = Vec::new();
        for (name, value) in &v.coefficients {
            coefficients.push((cell_id(hhl, name, "vectors.coefficients")?, value.value("vectors.coefficients")?));
        }
        out.push(ExplicitVector { degree: v.degree, coefficients });
    }
    Ok(HarmonicSpec::Explicit(out))
}

pub fn load_contraction(choice: &ContractionChoice, hhl: &HhlComplex) -> Result<ContractionSpec, InputError> {
    match choice {
        ContractionChoice::MoorePenrose => Ok(ContractionSpec::MoorePenrose),
        ContractionChoice::File(p) => parse_contraction(&read_text(p)?, hhl),
    }
}

pub fn load_harmonic(choice: &HarmonicChoice, hhl: &HhlComplex) -> Result<HarmonicSpec, InputError> {
    match choice {
        HarmonicChoice::Canonical => Ok(HarmonicSpec::Canonical),
        HarmonicChoice::File(p) => parse_harmonic(&read_text(p)?, hhl),
    }
}

/// A matrix of rationals, as a JSON array of rows.
pub fn parse_matrix(text: &str) -> Result<crate::ratlin::RatMatrix, InputError> {
    let rows: Vec<Vec<RationalText>> = serde_json::from_str(text)?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(InputError::validation("matrix", "rows have different lengths"));
    }
    let mut out = Vec::with_capacity(rows.len());
    for r in &rows {
        out.push(r.iter().map(|x| x.value("matrix")).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(crate::ratlin::RatMatrix::from_rows(cols, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P311: &str = r#"{"n": 3, "k": 2, "psi": [[1, 0, -3], [0, 1, -1]], "variables": ["x", "y", "z"]}"#;

    #[test]
    fn parses_weighted_projective_plane() {
        let spec = parse_input(P311, Path::new(".")).unwrap();
        assert_eq!(spec.quadruple.k, 2);
        assert_eq!(spec.quadruple.variables, vec!["x", "y", "z"]);
        assert_eq!(spec.options, RunOptions::default());
    }

    #[test]
    fn rejects_rank_deficient_psi() {
        let err = parse_input(r#"{"psi": [[1, 2], [2, 4]]}"#, Path::new(".")).unwrap_err();
        assert!(matches!(err, InputError::Validation { ref field, .. } if field == "psi"));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn rejects_unknown_keys_with_position() {
        let text = "{\n  \"psi\": [[1]],\n  \"options\": {\"colour\": \"red\"}\n}";
        match parse_input(text, Path::new(".")).unwrap_err() {
            InputError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn embedding_of_a_point() {
        let e = EmbeddingSpec { rays: vec![vec![1, 0], vec![0, 1], vec![-3, -1]], fan: None, sublattice: vec![] };
        assert_eq!(embedding_to_psi(&e).unwrap(), vec![vec![1, 0, -3], vec![0, 1, -1]]);
    }

    #[test]
    fn embedding_rejections() {
        let full = EmbeddingSpec { rays: vec![vec![1], vec![-1]], fan: None, sublattice: vec![vec![1]] };
        assert!(matches!(embedding_to_psi(&full), Err(InputError::Validation { .. })));
        let doubled = EmbeddingSpec { rays: vec![vec![1], vec![-1]], fan: None, sublattice: vec![vec![2]] };
        assert_eq!(embedding_to_psi(&doubled), Err(InputError::NotSaturated { invariants: vec![2] }));
    }

    #[test]
    fn embedding_of_a_line_in_the_plane() {
        // a curve in P^1 x P^1 cut out along the diagonal direction
        let e = EmbeddingSpec {
            rays: vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            fan: None,
            sublattice: vec![vec![1, 1]],
        };
        let psi = embedding_to_psi(&e).unwrap();
        assert_eq!(psi.len(), 1);
        let row = &psi[0];
        assert!(row == &vec![1, -1, -1, 1] || row == &vec![-1, 1, 1, -1]);
    }

    #[test]
    fn matrix_text() {
        let m = parse_matrix(r#"[[1, "1/2"], [0, -3]]"#).unwrap();
        assert_eq!(m[(0, 1)], crate::ratlin::ratio(1, 2));
        assert!(parse_matrix("[[1], [1, 2]]").is_err());
    }

    fn spec_strategy() -> impl Strategy<Value = InputSpec> {
        let psi = prop_oneof![
            (-3i64..=3, -3i64..=3).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0).prop_map(|(a, b)| vec![vec![a, b]]),
            Just(vec![vec![1, 0, -3], vec![0, 1, -1]]),
        ];
        (psi, proptest::bool::ANY, proptest::bool::ANY).prop_map(|(psi, fan, opts)| {
            let mut q = Quadruple::new(psi).unwrap();
            if fan {
                q = q.with_fan(vec![vec![1]]).unwrap();
                q.group = Some("trivial".into());
            }
            let options = if opts {
                RunOptions {
                    contraction: ContractionChoice::File(PathBuf::from("morse.json")),
                    harmonic_basis: HarmonicChoice::Canonical,
                    emit: vec![EmitFormat::Report, EmitFormat::M2],
                }
            } else {
                RunOptions::default()
            };
            InputSpec { quadruple: q, options }
        })
    }

    proptest! {
        #[test]
        fn emitted_input_parses_back(spec in spec_strategy()) {
            let text = emit_input(&spec);
            prop_assert_eq!(parse_input(&text, Path::new("")).unwrap(), spec);
        }
    }
}
