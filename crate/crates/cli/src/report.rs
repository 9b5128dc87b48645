//! JSON reports for each command.
//!
//! Coordinates and multi-index positions are 1-based here. Object keys are
//! sorted and every list of multi-indices is in graded-lex order, so a
//! report depends only on the input and the flags.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use toric_core::exact::{BigFloat, ComplexBig, PhaseVector, Precision, Rational};
use toric_core::germ::{
    commutation_check, flow_normal_form_check, flow_numeric, pd_normalize, recognize_symbol_values,
    Germ, JetMap, JetVectorField, Monomial, Normalization, Scalar, Spectrum,
};
use toric_core::lattice::{
    cominimal_elements, default_cominimal_bound, grlex_cmp, grlex_cmp_u32, integer_kernel, paper_minimal_elements, IntMatrix,
};
use toric_core::toric::{
    classify_with, enumerate_resonances, normalization_verdict, resonance_descriptor, verdict_from_classification, Classification,
    ClassificationKind, NotFoundReason, SearchOptions, SimplifyOutcome, ToricTuple, DEFAULT_VERIFY_DEGREE,
};

use crate::error::CliError;
use crate::parse::{parse_germ_file, parse_phase_file};
use crate::print::{gaussian_text, phase_terms};

pub const DEFAULT_MAX_DEGREE: u64 = 6;
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Resonances,
    Classify,
    Simplify,
    Normalize,
    Flow,
    CheckCommute,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Self::Analyze,
        Self::Resonances,
        Self::Classify,
        Self::Simplify,
        Self::Normalize,
        Self::Flow,
        Self::CheckCommute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Analyze => "analyze",
            Self::Resonances => "resonances",
            Self::Classify => "classify",
            Self::Simplify => "simplify",
            Self::Normalize => "normalize",
            Self::Flow => "flow",
            Self::CheckCommute => "check-commute",
        }
    }

    /// Whether the input is a germ file rather than a phase file.
    pub fn reads_germ(self) -> bool {
        matches!(self, Self::Normalize | Self::Flow | Self::CheckCommute)
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::parse(format!("unknown command `{s}`")))
    }
}

/// Options shared by all commands; `None` selects the documented default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Flags {
    /// Enumeration degree: resonance listing (default 6) and cross-checks
    /// of simple tuples (default 12).
    pub max_degree: Option<u64>,
    pub precision: Option<u32>,
    pub strict: bool,
    pub comin_bound: Option<u64>,
    /// 1-based coordinate for `resonances`; all coordinates when absent.
    pub coordinate: Option<usize>,
    /// Weight matrix for `check-commute`, rows separated by `;`.
    pub weights: Option<String>,
    /// Flow time for `flow`, a rational `p` or `p/q` (default 1).
    pub time: Option<String>,
    /// The linear part has nontrivial Jordan blocks.
    pub non_diagonalizable: bool,
}

impl Flags {
    fn precision(&self) -> Result<Precision, CliError> {
        Ok(Precision::new(self.precision.unwrap_or(DEFAULT_PRECISION))?)
    }

    fn search(&self) -> SearchOptions {
        SearchOptions {
            max_degree: self.max_degree.unwrap_or(DEFAULT_VERIFY_DEGREE),
            strict: self.strict,
        }
    }
}

/// Runs `command` on the text of its input file and returns the JSON report.
pub fn run(command: Command, input: &str, flags: &Flags) -> Result<String, CliError> {
    let report = match command {
        Command::Analyze => analyze(&parse_phase_file(input)?, flags)?,
        Command::Resonances => resonances(&parse_phase_file(input)?, flags)?,
        Command::Classify => classify_report(&parse_phase_file(input)?, flags)?,
        Command::Simplify => simplify(&parse_phase_file(input)?, flags)?,
        Command::Normalize => normalize(&parse_germ_file(input)?, flags)?,
        Command::Flow => flow(&parse_germ_file(input)?, flags)?,
        Command::CheckCommute => check_commute(&parse_germ_file(input)?, flags)?,
    };
    let mut text = String::new();
    render(&report, 0, &mut text);
    text.push('\n');
    Ok(text)
}

/// Indented JSON with arrays that hold no objects kept on one line.
pub fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, val)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                render(val, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            out.push_str("[\n");
            for (k, val) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(val, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

/// Machine integers when they fit, decimal strings otherwise.
fn int(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn index(q: &[u32]) -> Value {
    json!(q)
}

fn sorted(mut vs: Vec<Vec<BigInt>>) -> Value {
    vs.sort_by(|a, b| grlex_cmp(a, b));
    Value::Array(vs.iter().map(|v| ints(v)).collect())
}

fn one_based(flags: &[bool]) -> Value {
    json!(flags.iter().enumerate().filter(|(_, &f)| f).map(|(j, _)| j + 1).collect::<Vec<_>>())
}

/// Rows of the `n × r` matrix whose columns are `cols`.
fn rows_of(cols: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|j| cols.iter().map(|c| c[j].clone()).collect()).collect()
}

fn matrix(rows: &[Vec<BigInt>]) -> Value {
    Value::Array(rows.iter().map(|r| ints(r)).collect())
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn tuple_json(t: &ToricTuple) -> Value {
    json!({
        "vectors": matrix(t.vectors()),
        "coefficients": t.coefficients().iter().map(|c| c.display(t.basis())).collect::<Vec<_>>(),
        "reduced": t.is_reduced(),
        "m": t.m().map_or(Value::Null, int),
    })
}

fn phases_json(phi: &PhaseVector) -> Value {
    json!((0..phi.dim()).map(|j| phase_terms(phi, j)).collect::<Vec<_>>())
}

fn classification(phi: &PhaseVector, flags: &Flags) -> Result<Classification, CliError> {
    Ok(classify_with(phi, &flags.search())?)
}

fn simplification_json(outcome: &SimplifyOutcome) -> Value {
    match outcome {
        SimplifyOutcome::Simplified(s) => json!({
            "status": "simplified",
            "H": ints(&s.h),
            "simple_tuple": tuple_json(&s.tuple),
            "verified_up_to": s.verified_up_to,
            "certified": true,
        }),
        SimplifyOutcome::NotFound {
            reason,
            system_rows,
            search_bound,
            certified,
        } => json!({
            "status": "not_found",
            "reason": match reason {
                NotFoundReason::Infeasible => "infeasible",
                NotFoundReason::VerificationFailed => "verification_failed",
            },
            "system_rows": system_rows,
            "search_bound": search_bound,
            "certified": certified,
        }),
    }
}

fn analyze(phi: &PhaseVector, flags: &Flags) -> Result<Value, CliError> {
    let c = classification(phi, flags)?;
    let v = verdict_from_classification(phi, &c, !flags.non_diagonalizable)?;
    let a = &c.analysis;
    Ok(json!({
        "dimension": phi.dim(),
        "phases": phases_json(phi),
        "toric_degree": a.degree,
        "tuple": tuple_json(&a.tuple),
        "torsion": {
            "m": int(&a.torsion.m),
            "q": int(&a.torsion.q),
            "tau": int(&a.torsion.tau),
        },
        "classification": c.kind.as_str(),
        "impure_coordinates": one_based(&c.impure_coordinates),
        "verdict": {
            "torus_dimension": v.torus_dimension,
            "weight_matrix": matrix(&rows_of(&v.weight_matrix, phi.dim())),
            "criterion": v.criterion.as_str(),
            "compatibility_required": v.compatibility_required,
            "compatible": v.compatible,
            "certified": v.certified,
        },
        "certified": v.certified,
    }))
}

fn resonance_entry(phi: &PhaseVector, j: usize, max_degree: u64) -> Result<Value, CliError> {
    let d = resonance_descriptor(phi, j)?;
    let members = enumerate_resonances(phi, j, max_degree)?;
    Ok(json!({
        "coordinate": j + 1,
        "max_degree": max_degree,
        "resonant_multi_indices": members.iter().map(|q| index(q)).collect::<Vec<_>>(),
        "generators": {
            "homogeneous": sorted(d.homogeneous().to_vec()),
            "particular": sorted(d.effective_particular()),
        },
        "equal_phase": d.equal_phase().iter().map(|h| h + 1).collect::<Vec<_>>(),
        "certified": true,
    }))
}

fn resonances(phi: &PhaseVector, flags: &Flags) -> Result<Value, CliError> {
    let max_degree = flags.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
    match flags.coordinate {
        Some(j) => {
            if j == 0 || j > phi.dim() {
                return Err(CliError::precondition(format!("coordinate {j} outside 1..={}", phi.dim())));
            }
            resonance_entry(phi, j - 1, max_degree)
        }
        None => {
            let all = (0..phi.dim()).map(|j| resonance_entry(phi, j, max_degree)).collect::<Result<Vec<_>, _>>()?;
            Ok(json!({ "max_degree": max_degree, "resonances": all }))
        }
    }
}

fn classify_report(phi: &PhaseVector, flags: &Flags) -> Result<Value, CliError> {
    let c = classification(phi, flags)?;
    let simplification = c.simplification.as_ref().map_or(Value::Null, simplification_json);
    let certified = !matches!(
        c.simplification,
        Some(SimplifyOutcome::NotFound { certified: false, .. })
    );
    Ok(json!({
        "classification": c.kind.as_str(),
        "toric_degree": c.analysis.degree,
        "torsion": {
            "m": int(&c.analysis.torsion.m),
            "q": int(&c.analysis.torsion.q),
            "tau": int(&c.analysis.torsion.tau),
        },
        "impure_coordinates": one_based(&c.impure_coordinates),
        "simplification": simplification,
        "certified": certified,
    }))
}

fn simplify(phi: &PhaseVector, flags: &Flags) -> Result<Value, CliError> {
    let c = classification(phi, flags)?;
    match c.kind {
        ClassificationKind::TorsionFree => {
            return Err(CliError::precondition("the phases are torsion-free; there is nothing to simplify"))
        }
        ClassificationKind::ImpureTorsion => {
            return Err(CliError::precondition("impure torsion: the resonances never need the first vector"))
        }
        _ => {}
    }
    let outcome = c.simplification.as_ref().expect("pure torsion carries a search outcome");
    let mut report = simplification_json(outcome);
    // The lattice cut out by the non-leading vectors, with its minimal and
    // cominimal elements.
    let t = &c.analysis.tuple;
    let n = phi.dim();
    let eq = IntMatrix::from_rows(t.vectors()[1..].to_vec(), n).map_err(|e| CliError::precondition(e.to_string()))?;
    let lattice = integer_kernel(&eq);
    let mins = paper_minimal_elements(&lattice);
    let bound = flags.comin_bound.unwrap_or_else(|| default_cominimal_bound(&mins));
    let comin = cominimal_elements(&lattice, &mins, bound);
    report["monoid"] = json!({
        "minimal_elements": sorted(mins.elements().to_vec()),
        "cominimal_elements": sorted(comin.elements.clone()),
        "cominimal_bound": comin.search_bound,
        "certified": comin.certified,
    });
    let outcome_certified = report["certified"].as_bool().unwrap_or(false);
    report["certified"] = json!(outcome_certified && comin.certified);
    Ok(report)
}

fn jet_table<S: Scalar>(f: &JetMap<S>, show: impl Fn(&S) -> String) -> Value {
    let mut rows = Vec::new();
    for (j, p) in f.components().iter().enumerate() {
        for (q, c) in p.terms() {
            rows.push(json!({
                "coordinate": j + 1,
                "multi_index": index(&q.0),
                "coefficient": show(c),
            }));
        }
    }
    Value::Array(rows)
}

fn normalize(germ: &Germ, flags: &Flags) -> Result<Value, CliError> {
    let prec = flags.precision()?;
    let out = pd_normalize(germ, prec)?;
    let mut report = match &out {
        Normalization::Exact(r) => json!({
            "mode": "exact",
            "psi": jet_table(&r.psi, gaussian_text),
            "g": jet_table(&r.g, gaussian_text),
        }),
        Normalization::Numeric(r) => json!({
            "mode": "phase",
            "precision": prec.bits(),
            "psi": jet_table(&r.psi, ComplexBig::to_decimal),
            "g": jet_table(&r.g, ComplexBig::to_decimal),
        }),
    };
    report["dimension"] = json!(germ.dim());
    report["max_degree"] = json!(germ.degree());
    report["residual_max"] = out.residual_log2().map_or(json!(0), |l| float(l.exp2()));
    report["residual_log2"] = out.residual_log2().map_or(Value::Null, float);
    report["relative_residual_log2"] = out.relative_residual_log2().map_or(Value::Null, float);
    report["certified"] = json!(true);
    Ok(report)
}

/// `2πi φ_j` for phase-linked eigenvalues, `λ_j` itself otherwise.
fn field_diagonal(germ: &Germ, prec: Precision) -> Result<Vec<ComplexBig>, CliError> {
    match germ.spectrum() {
        Spectrum::Exact(l) => Ok(l.iter().map(|x| ComplexBig::from_gaussian(x, prec)).collect()),
        Spectrum::Phase { phases, .. } => {
            let w = prec.extend(32);
            let sym: Vec<ComplexBig> = recognize_symbol_values(phases.basis())?.iter().map(|v| v.evaluate(w)).collect();
            let two_pi_i = ComplexBig::new(BigFloat::zero(), BigFloat::pi(w).mul_pow2(1), w);
            Ok(phases
                .entries()
                .iter()
                .map(|e| {
                    let mut v = ComplexBig::from_rational(e.rational_part(), w);
                    for (s, c) in e.coeffs() {
                        v = v.add(&sym[*s].mul(&ComplexBig::from_rational(c, w)));
                    }
                    two_pi_i.mul(&v).with_precision(prec)
                })
                .collect())
        }
    }
}

fn germ_field(germ: &Germ, prec: Precision) -> Result<JetVectorField<ComplexBig>, CliError> {
    let n = germ.dim();
    let mut x = JetVectorField::zero(n, germ.degree(), prec);
    for (j, l) in field_diagonal(germ, prec)?.into_iter().enumerate() {
        x.add_term(Monomial::unit(n, j).0, j, l)?;
        if germ.eps()[j] {
            x.add_term(Monomial::unit(n, j - 1).0, j, ComplexBig::one(prec))?;
        }
    }
    for (j, p) in germ.terms().iter().enumerate() {
        for (q, c) in p.terms() {
            x.add_term(q.0.clone(), j, ComplexBig::from_gaussian(c, prec))?;
        }
    }
    Ok(x)
}

fn witness_json(w: &Option<(Vec<u32>, usize)>) -> Value {
    w.as_ref().map_or(Value::Null, |(q, j)| json!({ "coordinate": j + 1, "multi_index": index(q) }))
}

fn flow(germ: &Germ, flags: &Flags) -> Result<Value, CliError> {
    let prec = flags.precision()?;
    let t = match &flags.time {
        None => Rational::from_integer(BigInt::from(1)),
        Some(s) => Rational::from_str(s.trim()).map_err(|_| CliError::parse(format!("invalid flow time `{s}`")))?,
    };
    let x = germ_field(germ, prec)?;
    let f = flow_numeric(&x, &ComplexBig::from_rational(&t, prec))?;
    let check = flow_normal_form_check(&x)?;
    Ok(json!({
        "mode": match germ.spectrum() { Spectrum::Exact(_) => "exact", Spectrum::Phase { .. } => "phase" },
        "dimension": germ.dim(),
        "max_degree": germ.degree(),
        "precision": prec.bits(),
        "time": t.to_string(),
        "flow": jet_table(&f, ComplexBig::to_decimal),
        "normal_form_check": {
            "passed": check.passed,
            "normal_form": check.normal_form,
            "witness": witness_json(&check.witness),
            "deviation_log2": check.deviation_log2.map_or(Value::Null, float),
        },
        "certified": true,
    }))
}

/// `"1,0;1,1;2,1"`: one row of weights per coordinate.
pub fn parse_weights(text: &str, n: usize) -> Result<IntMatrix, CliError> {
    let rows: Vec<Vec<BigInt>> = text
        .split(';')
        .map(|r| {
            let r = r.trim();
            if r.is_empty() {
                return Ok(Vec::new());
            }
            r.split(',')
                .map(|x| BigInt::from_str(x.trim()).map_err(|_| CliError::parse(format!("invalid weight `{}`", x.trim()))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.len() != n {
        return Err(CliError::precondition(format!("weight matrix has {} rows, expected {n}", rows.len())));
    }
    let cols = rows[0].len();
    IntMatrix::from_rows(rows, cols).map_err(|e| CliError::parse(format!("invalid weight matrix: {e}")))
}

fn check_commute(germ: &Germ, flags: &Flags) -> Result<Value, CliError> {
    let n = germ.dim();
    let (theta, source) = match (&flags.weights, germ.spectrum()) {
        (Some(w), _) => (parse_weights(w, n)?, "flag"),
        (None, Spectrum::Phase { phases, .. }) => {
            let diagonalizable = germ.eps().iter().all(|e| !e);
            let cols = normalization_verdict(phases, diagonalizable)?.weight_matrix;
            let rows = rows_of(&cols, n);
            (IntMatrix::from_rows(rows, cols.len()).map_err(|e| CliError::precondition(e.to_string()))?, "verdict")
        }
        (None, Spectrum::Exact(_)) => {
            return Err(CliError::precondition("exact eigenvalues carry no toric data; pass --weights"))
        }
    };
    let report = match germ.exact_jet() {
        Some(f) => commutation_check(&f, &theta)?,
        None => commutation_check(&germ.numeric_jet(flags.precision()?), &theta)?,
    };
    let mut witnesses: Vec<&(Vec<u32>, usize)> = report.witnesses.iter().collect();
    witnesses.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| grlex_cmp_u32(&a.0, &b.0)));
    Ok(json!({
        "weight_matrix": matrix(&theta.to_rows()),
        "weights_source": source,
        "commutes": report.commutes,
        "witnesses": witnesses.iter().map(|(q, j)| json!({ "coordinate": j + 1, "multi_index": index(q) })).collect::<Vec<_>>(),
        "certified": true,
    }))
}
