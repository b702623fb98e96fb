//! Derivation of spin operators from eigenpairs by exact linear solving.
//!
//! Each active matrix entry is an unknown differential operator
//! `sum_{order} sum_{atom} u * atom * d^order`, with `u` ranging over
//! [`Scalar`]. Substituting every eigenpair `(s, lambda)` into `op(s) = lambda s`
//! and collecting coefficients of each exponential atom gives an exact linear
//! system in the `u`s, which is solved by Gauss-Jordan elimination.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diffop::{DiffOp, MatrixOp, MultiIndex};
use crate::error::{AnsatzError, AnsatzFileError};
use crate::expr::{Expr, FreqVec};
use crate::parser::{parse, parse_constant, print, PrintStyle};
use crate::scalar::Scalar;
use crate::spinor::{Sign, Spinor, SpinorId};

/// Matrix position of an operator entry: `[[A, B], [C, D]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Entry {
    A,
    B,
    C,
    D,
}

impl Entry {
    pub const ALL: [Entry; 4] = [Entry::A, Entry::B, Entry::C, Entry::D];

    pub fn position(self) -> (usize, usize) {
        match self {
            Entry::A => (0, 0),
            Entry::B => (0, 1),
            Entry::C => (1, 0),
            Entry::D => (1, 1),
        }
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, Entry::A | Entry::D)
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenpair {
    pub spinor: Spinor,
    pub eigenvalue: Scalar,
}

impl Eigenpair {
    pub fn new(spinor: Spinor, eigenvalue: Scalar) -> Self {
        Eigenpair { spinor, eigenvalue }
    }

    /// A built-in family member with its own `+-1/2` label.
    pub fn labelled(spinor: Spinor) -> Self {
        let eigenvalue = spinor.meta.sign.eigenvalue();
        Eigenpair { spinor, eigenvalue }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub eigenpairs: Vec<Eigenpair>,
    pub pattern: BTreeSet<Entry>,
    pub derivative_orders: Vec<MultiIndex>,
    /// Atoms spanning each unknown coefficient function.
    pub basis: Vec<FreqVec>,
}

/// `{exp(i*(m*theta + n*phi)/2) : m, n in {-2, 0, 2}}`.
pub fn default_basis() -> Vec<FreqVec> {
    let ms = [-2, 0, 2];
    ms.iter().flat_map(|&m| ms.iter().map(move |&n| FreqVec::theta_phi(m, n))).collect()
}

pub fn default_orders() -> Vec<MultiIndex> {
    vec![MultiIndex::D_THETA, MultiIndex::D_PHI]
}

/// All four entries.
pub fn full_pattern() -> BTreeSet<Entry> {
    Entry::ALL.into_iter().collect()
}

pub fn diagonal_pattern() -> BTreeSet<Entry> {
    [Entry::A, Entry::D].into_iter().collect()
}

impl AnsatzSpec {
    /// First-order ansatz over the default coefficient basis.
    pub fn new(eigenpairs: Vec<Eigenpair>, pattern: BTreeSet<Entry>) -> Self {
        AnsatzSpec { eigenpairs, pattern, derivative_orders: default_orders(), basis: default_basis() }
    }

    pub fn with_basis(mut self, basis: Vec<FreqVec>) -> Self {
        self.basis = basis;
        self
    }

    pub fn with_orders(mut self, orders: Vec<MultiIndex>) -> Self {
        self.derivative_orders = orders;
        self
    }

    pub fn validate(&self) -> Result<(), AnsatzError> {
        if self.eigenpairs.is_empty() {
            return Err(AnsatzError::NoEigenpairs);
        }
        if let Some(k) = self.eigenpairs.iter().position(|p| p.spinor.is_zero()) {
            return Err(AnsatzError::ZeroSpinor(k));
        }
        let mut seen = BTreeSet::new();
        for f in &self.basis {
            if !seen.insert(*f) {
                return Err(AnsatzError::DuplicateBasisAtom(f.to_string()));
            }
        }
        let mut seen = BTreeSet::new();
        for o in &self.derivative_orders {
            if !seen.insert(*o) {
                return Err(AnsatzError::DuplicateDerivative(o.to_string()));
            }
        }
        Ok(())
    }

    /// Unknowns in declaration order: entry, then derivative order, then atom.
    pub fn unknowns(&self) -> Vec<Unknown> {
        let mut out = Vec::new();
        for &entry in &self.pattern {
            for &order in &self.derivative_orders {
                for &atom in &self.basis {
                    out.push(Unknown { entry, order, atom });
                }
            }
        }
        out
    }
}

/// One scalar unknown: the coefficient of `atom * d^order` in `entry`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Unknown {
    pub entry: Entry,
    pub order: MultiIndex,
    pub atom: FreqVec,
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}@({},{})", self.entry, self.order, self.atom.m_theta, self.atom.m_phi)
    }
}

/// Which eigenpair, spinor component and atom a row of the system comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RowProvenance {
    pub eigenpair: usize,
    pub component: usize,
    pub freq: FreqVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Scalar>,
    pub rhs: Scalar,
    pub provenance: RowProvenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub unknowns: Vec<Unknown>,
    pub rows: Vec<Row>,
}

/// Builds the exact system `sum_k u_k col_k = lambda s` over the atom basis.
pub fn assemble(spec: &AnsatzSpec) -> Result<LinearSystem, AnsatzError> {
    spec.validate()?;
    let unknowns = spec.unknowns();
    let mut rows = Vec::new();
    for (e, pair) in spec.eigenpairs.iter().enumerate() {
        let s = &pair.spinor;
        for component in 0..2 {
            // Column function of each unknown in this component's equation.
            let columns: Vec<Option<Expr>> = unknowns
                .iter()
                .map(|u| {
                    let (r, c) = u.entry.position();
                    (r == component).then(|| {
                        let d = DiffOp::term(u.order, Expr::atom(u.atom));
                        d.apply(s.component(c))
                    })
                })
                .collect();
            let target = s.component(component).scale(&pair.eigenvalue);
            let mut freqs: BTreeSet<FreqVec> = target.terms().map(|(f, _)| *f).collect();
            for col in columns.iter().flatten() {
                freqs.extend(col.terms().map(|(f, _)| *f));
            }
            for freq in freqs {
                let coeffs = columns.iter().map(|c| c.as_ref().map(|e| e.coeff(&freq)).unwrap_or_default()).collect();
                rows.push(Row {
                    coeffs,
                    rhs: target.coeff(&freq),
                    provenance: RowProvenance { eigenpair: e, component, freq },
                });
            }
        }
    }
    Ok(LinearSystem { unknowns, rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Unique,
    Parametric,
    Infeasible,
}

impl SolveStatus {
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Unique => "unique",
            SolveStatus::Parametric => "parametric",
            SolveStatus::Infeasible => "infeasible",
        }
    }
}

/// A combination of original rows whose left-hand side cancels while the
/// right-hand side does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub combination: Vec<(usize, Scalar)>,
    pub rhs: Scalar,
    pub provenance: Vec<RowProvenance>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub rank: usize,
    /// Full assignment, when unique.
    pub solution: Option<Vec<Scalar>>,
    /// Assignment with every free unknown set to zero, when parametric.
    pub particular: Option<Vec<Scalar>>,
    pub nullspace: Vec<Vec<Scalar>>,
    pub witness: Option<Witness>,
}

impl SolveResult {
    /// The unique solution or, failing that, the particular one.
    pub fn assignment(&self) -> Option<&[Scalar]> {
        self.solution.as_deref().or(self.particular.as_deref())
    }
}

type SparseRow = BTreeMap<usize, Scalar>;

#[derive(Clone)]
struct WorkRow {
    coeffs: SparseRow,
    rhs: Scalar,
    /// Multipliers of the original rows that produced this one.
    combo: SparseRow,
}

fn axpy(dst: &mut SparseRow, factor: &Scalar, src: &SparseRow) {
    for (k, v) in src {
        let delta = factor * v;
        let remove = match dst.get_mut(k) {
            Some(x) => {
                *x -= &delta;
                x.is_zero()
            }
            None => {
                dst.insert(*k, -delta);
                false
            }
        };
        if remove {
            dst.remove(k);
        }
    }
}

/// Gauss-Jordan elimination over `Q(i, sqrt2)`. Columns are pivoted in
/// declaration order, each on the first remaining row with a nonzero entry.
pub fn solve(ls: &LinearSystem) -> SolveResult {
    let n = ls.unknowns.len();
    let mut rows: Vec<WorkRow> = ls
        .rows
        .iter()
        .enumerate()
        .map(|(k, r)| WorkRow {
            coeffs: r.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect(),
            rhs: r.rhs.clone(),
            combo: [(k, Scalar::one())].into_iter().collect(),
        })
        .collect();
    let m = rows.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut next = 0;
    for col in 0..n {
        let Some(p) = (next..m).find(|&r| rows[r].coeffs.contains_key(&col)) else {
            continue;
        };
        rows.swap(next, p);
        let inv = rows[next].coeffs[&col].inverse().expect("pivot is nonzero");
        {
            let pr = &mut rows[next];
            for v in pr.coeffs.values_mut() {
                *v *= &inv;
            }
            for v in pr.combo.values_mut() {
                *v *= &inv;
            }
            pr.rhs *= &inv;
        }
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next {
                continue;
            }
            let Some(factor) = row.coeffs.get(&col).cloned() else {
                continue;
            };
            axpy(&mut row.coeffs, &factor, &pivot.coeffs);
            axpy(&mut row.combo, &factor, &pivot.combo);
            row.rhs -= &(&factor * &pivot.rhs);
        }
        pivots.push(col);
        next += 1;
    }
    let rank = pivots.len();

    if let Some(bad) = rows[rank..].iter().find(|r| !r.rhs.is_zero()) {
        let combination: Vec<(usize, Scalar)> = bad.combo.iter().map(|(k, v)| (*k, v.clone())).collect();
        let provenance = combination.iter().map(|(k, _)| ls.rows[*k].provenance).collect();
        return SolveResult {
            status: SolveStatus::Infeasible,
            rank,
            solution: None,
            particular: None,
            nullspace: Vec::new(),
            witness: Some(Witness { combination, rhs: bad.rhs.clone(), provenance }),
        };
    }

    let mut values = vec![Scalar::zero(); n];
    for (k, &col) in pivots.iter().enumerate() {
        values[col] = rows[k].rhs.clone();
    }
    if rank == n {
        return SolveResult {
            status: SolveStatus::Unique,
            rank,
            solution: Some(values),
            particular: None,
            nullspace: Vec::new(),
            witness: None,
        };
    }
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let nullspace = (0..n)
        .filter(|c| !pivot_set.contains(c))
        .map(|free| {
            let mut v = vec![Scalar::zero(); n];
            v[free] = Scalar::one();
            for (k, &col) in pivots.iter().enumerate() {
                if let Some(x) = rows[k].coeffs.get(&free) {
                    v[col] = -x;
                }
            }
            v
        })
        .collect();
    SolveResult {
        status: SolveStatus::Parametric,
        rank,
        solution: None,
        particular: Some(values),
        nullspace,
        witness: None,
    }
}

/// Recomputes a witness from the original rows: the combined left-hand side
/// must vanish and the combined right-hand side must equal the reported
/// nonzero value.
pub fn witness_is_valid(ls: &LinearSystem, w: &Witness) -> bool {
    let n = ls.unknowns.len();
    let mut lhs = vec![Scalar::zero(); n];
    let mut rhs = Scalar::zero();
    for (k, mult) in &w.combination {
        let Some(row) = ls.rows.get(*k) else {
            return false;
        };
        for (j, c) in row.coeffs.iter().enumerate() {
            lhs[j] += &(mult * c);
        }
        rhs += &(mult * &row.rhs);
    }
    lhs.iter().all(Scalar::is_zero) && !rhs.is_zero() && rhs == w.rhs
}

/// `true` when `values` satisfies every row exactly.
pub fn satisfies(ls: &LinearSystem, values: &[Scalar]) -> bool {
    ls.rows.iter().all(|row| {
        let mut acc = Scalar::zero();
        for (c, v) in row.coeffs.iter().zip(values) {
            if !c.is_zero() && !v.is_zero() {
                acc += &(c * v);
            }
        }
        acc == row.rhs
    })
}

/// The operator whose unknown coefficients take the given values.
pub fn operator_from_values(unknowns: &[Unknown], values: &[Scalar]) -> MatrixOp {
    let mut entries: [[DiffOp; 2]; 2] = Default::default();
    for (u, v) in unknowns.iter().zip(values) {
        if v.is_zero() {
            continue;
        }
        let (r, c) = u.entry.position();
        let term = DiffOp::term(u.order, Expr::term(u.atom, v.clone()));
        entries[r][c] = entries[r][c].add(&term);
    }
    MatrixOp::new(entries)
}

/// Assembles the solved operator; requires a unique solution.
pub fn reconstruct(spec: &AnsatzSpec, result: &SolveResult) -> Result<MatrixOp, AnsatzError> {
    match (&result.status, &result.solution) {
        (SolveStatus::Unique, Some(values)) => Ok(operator_from_values(&spec.unknowns(), values)),
        _ => Err(AnsatzError::NotUnique(result.status.name())),
    }
}

/// Coefficient function of `entry` at `order` under an assignment.
pub fn coefficient_function(unknowns: &[Unknown], values: &[Scalar], entry: Entry, order: MultiIndex) -> Expr {
    Expr::from_terms(
        unknowns
            .iter()
            .zip(values)
            .filter(|(u, _)| u.entry == entry && u.order == order)
            .map(|(u, v)| (u.atom, v.clone())),
    )
}

/// Outcome of trying one per-vector theta phase assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseAssignment {
    /// Half-frequency of `exp(i*m*theta/2)` multiplied onto the + vector.
    pub plus_theta_freq: i32,
    pub minus_theta_freq: i32,
    pub status: SolveStatus,
    pub operator: Option<MatrixOp>,
}

/// Tries every pair of `exp(i*m*theta/2)` phases from `candidates` on a
/// `(+, -)` spinor pair and solves the diagonal first-order ansatz for each.
pub fn search_theta_phases(plus: &Spinor, minus: &Spinor, candidates: &[i32]) -> Vec<PhaseAssignment> {
    let mut out = Vec::new();
    for &mp in candidates {
        for &mm in candidates {
            let phase = |m: i32| Expr::exp_half(crate::expr::Angle::Theta, m);
            let p = plus.map(|e| &phase(mp) * e);
            let q = minus.map(|e| &phase(mm) * e);
            let spec = AnsatzSpec::new(
                vec![Eigenpair::new(p, Sign::Plus.eigenvalue()), Eigenpair::new(q, Sign::Minus.eigenvalue())],
                diagonal_pattern(),
            );
            let ls = assemble(&spec).expect("nonzero built-in spinors");
            let res = solve(&ls);
            let operator = reconstruct(&spec, &res).ok();
            out.push(PhaseAssignment { plus_theta_freq: mp, minus_theta_freq: mm, status: res.status, operator });
        }
    }
    out
}

// Ansatz documents.

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnsatzDocument {
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    eigenpairs: Vec<EigenpairDocument>,
    pattern: Vec<Entry>,
    #[serde(default)]
    derivative_orders: Option<Vec<[u32; 2]>>,
    #[serde(default)]
    basis: Option<Vec<[i32; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EigenpairDocument {
    spinor: SpinorDocument,
    eigenvalue: EigenvalueDocument,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SpinorDocument {
    Named(String),
    Explicit { top: String, bottom: String },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum EigenvalueDocument {
    Text(String),
    Integer(i64),
}

impl AnsatzSpec {
    /// Reads the JSON ansatz format.
    pub fn from_json(text: &str) -> Result<AnsatzSpec, AnsatzFileError> {
        let doc: AnsatzDocument = serde_json::from_str(text).map_err(|e| AnsatzFileError::Schema(e.to_string()))?;
        if doc.eigenpairs.is_empty() {
            return Err(AnsatzFileError::Schema("`eigenpairs` must not be empty".into()));
        }
        let mut eigenpairs = Vec::with_capacity(doc.eigenpairs.len());
        for (index, ep) in doc.eigenpairs.into_iter().enumerate() {
            let eigenvalue = match ep.eigenvalue {
                EigenvalueDocument::Integer(n) => Scalar::from_int(n),
                EigenvalueDocument::Text(t) => parse_constant(t.trim_start_matches('+'))
                    .map_err(|source| AnsatzFileError::Expression { index, field: "eigenvalue", source })?,
            };
            let sign = if eigenvalue == Sign::Minus.eigenvalue() { Sign::Minus } else { Sign::Plus };
            let spinor = match ep.spinor {
                SpinorDocument::Named(name) => name.parse::<SpinorId>()?.build(),
                SpinorDocument::Explicit { top, bottom } => {
                    let top =
                        parse(&top).map_err(|source| AnsatzFileError::Expression { index, field: "top", source })?;
                    let bottom = parse(&bottom).map_err(|source| AnsatzFileError::Expression {
                        index,
                        field: "bottom",
                        source,
                    })?;
                    Spinor::custom(top, bottom, sign)
                }
            };
            eigenpairs.push(Eigenpair::new(spinor, eigenvalue));
        }
        let mut spec = AnsatzSpec::new(eigenpairs, doc.pattern.into_iter().collect());
        if let Some(orders) = doc.derivative_orders {
            spec.derivative_orders = orders.into_iter().map(|[t, p]| MultiIndex::new(t, p)).collect();
        }
        if let Some(basis) = doc.basis {
            spec.basis = basis.into_iter().map(|[m, n]| FreqVec::theta_phi(m, n)).collect();
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<AnsatzSpec, AnsatzFileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| AnsatzFileError::Io { path: path.display().to_string(), source })?;
        AnsatzSpec::from_json(&text)
    }
}

// Reporting.

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientLine {
    pub entry: Entry,
    pub derivative: [u32; 2],
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessLine {
    pub row: usize,
    pub multiplier: String,
    pub eigenpair: usize,
    pub component: usize,
    pub freq: [i32; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub rows: Vec<WitnessLine>,
    pub rhs: String,
    pub valid: bool,
}

/// Serializable summary of a solve, as printed by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub unknowns: usize,
    pub rows: usize,
    pub rank: usize,
    pub nullspace_dimension: usize,
    /// Coefficient functions of the unique (or particular) solution.
    pub coefficients: Vec<CoefficientLine>,
    /// Operator entries `[[A, B], [C, D]]` in grammar syntax.
    pub operator: Option<[[String; 2]; 2]>,
    pub witness: Option<WitnessReport>,
}

impl SolveReport {
    pub fn new(spec: &AnsatzSpec, ls: &LinearSystem, res: &SolveResult) -> Self {
        let mut coefficients = Vec::new();
        let mut operator = None;
        if let Some(values) = res.assignment() {
            for &entry in &spec.pattern {
                for &order in &spec.derivative_orders {
                    let f = coefficient_function(&ls.unknowns, values, entry, order);
                    coefficients.push(CoefficientLine {
                        entry,
                        derivative: [order.theta, order.phi],
                        value: print(&f, PrintStyle::Trig),
                    });
                }
            }
            operator = Some(operator_from_values(&ls.unknowns, values).entry_texts(PrintStyle::Trig));
        }
        let witness = res.witness.as_ref().map(|w| WitnessReport {
            rows: w
                .combination
                .iter()
                .zip(&w.provenance)
                .map(|((row, mult), p)| WitnessLine {
                    row: *row,
                    multiplier: mult.to_string(),
                    eigenpair: p.eigenpair,
                    component: p.component,
                    freq: [p.freq.m_theta, p.freq.m_phi],
                })
                .collect(),
            rhs: w.rhs.to_string(),
            valid: witness_is_valid(ls, w),
        });
        SolveReport {
            status: res.status,
            unknowns: ls.unknowns.len(),
            rows: ls.rows.len(),
            rank: res.rank,
            nullspace_dimension: res.nullspace.len(),
            coefficients,
            operator,
            witness,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "status: {}\nunknowns: {}  rows: {}  rank: {}  nullspace dimension: {}\n",
            self.status.name(),
            self.unknowns,
            self.rows,
            self.rank,
            self.nullspace_dimension
        );
        if !self.coefficients.is_empty() {
            if self.status == SolveStatus::Parametric {
                out.push_str("particular solution (free unknowns set to 0):\n");
            }
            for c in &self.coefficients {
                let d = MultiIndex::new(c.derivative[0], c.derivative[1]);
                out.push_str(&format!("  {} {}: {}\n", c.entry, d, c.value));
            }
        }
        if let Some(op) = &self.operator {
            out.push_str(&format!(
                "operator:\n  [1,1]: {}\n  [1,2]: {}\n  [2,1]: {}\n  [2,2]: {}\n",
                op[0][0], op[0][1], op[1][0], op[1][1]
            ));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!(
                "witness (valid: {}): combination has zero left-hand side, rhs = {}\n",
                w.valid, w.rhs
            ));
            for line in &w.rows {
                out.push_str(&format!(
                    "  {} x row {} (eigenpair {}, component {}, freq [{}, {}])\n",
                    line.multiplier, line.row, line.eigenpair, line.component, line.freq[0], line.freq[1]
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{build_spin_op, SpinAxis};
    use crate::spinor::Family;

    fn family_pairs(f: Family) -> Vec<Eigenpair> {
        [Sign::Plus, Sign::Minus].map(|s| Eigenpair::labelled(f.build(s))).to_vec()
    }

    #[test]
    fn unknown_counts() {
        let spec = AnsatzSpec::new(family_pairs(Family::Z), full_pattern());
        let ls = assemble(&spec).unwrap();
        // 4 entries x 2 derivative orders x 9 atoms
        assert_eq!(ls.unknowns.len(), 72);
        assert_eq!(ls.unknowns.iter().filter(|u| u.entry == Entry::A).count(), 18);
        assert!(ls.rows.iter().all(|r| r.coeffs.len() == 72));
    }

    #[test]
    fn constant_spinors_give_zero_lhs() {
        let spec = AnsatzSpec::new(family_pairs(Family::Pauli), full_pattern());
        let ls = assemble(&spec).unwrap();
        assert!(!ls.rows.is_empty());
        for r in &ls.rows {
            assert!(r.coeffs.iter().all(Scalar::is_zero));
            assert!(!r.rhs.is_zero());
        }
        assert_eq!(solve(&ls).status, SolveStatus::Infeasible);
    }

    #[test]
    fn empty_pattern() {
        let spec = AnsatzSpec::new(family_pairs(Family::Z), BTreeSet::new());
        let ls = assemble(&spec).unwrap();
        assert!(ls.unknowns.is_empty());
        let res = solve(&ls);
        assert_eq!(res.status, SolveStatus::Infeasible);
        assert!(witness_is_valid(&ls, res.witness.as_ref().unwrap()));
    }

    #[test]
    fn rejects_degenerate_specs() {
        let zero = Eigenpair::new(Spinor::custom(Expr::zero(), Expr::zero(), Sign::Plus), Scalar::one());
        let spec = AnsatzSpec::new(vec![zero], full_pattern());
        assert_eq!(assemble(&spec).unwrap_err(), AnsatzError::ZeroSpinor(0));
        let spec = AnsatzSpec::new(vec![], full_pattern());
        assert_eq!(assemble(&spec).unwrap_err(), AnsatzError::NoEigenpairs);
        let spec =
            AnsatzSpec::new(family_pairs(Family::Z), full_pattern()).with_basis(vec![FreqVec::ZERO, FreqVec::ZERO]);
        assert!(matches!(assemble(&spec).unwrap_err(), AnsatzError::DuplicateBasisAtom(_)));
    }

    #[test]
    fn z_diagonal_recovers_sz() {
        let spec = AnsatzSpec::new(family_pairs(Family::Z), diagonal_pattern());
        let res = solve(&assemble(&spec).unwrap());
        assert_eq!(res.status, SolveStatus::Unique);
        assert_eq!(reconstruct(&spec, &res).unwrap(), build_spin_op(SpinAxis::Z));
    }

    #[test]
    fn x_diagonal_recovers_sx() {
        let spec = AnsatzSpec::new(family_pairs(Family::X), diagonal_pattern());
        let res = solve(&assemble(&spec).unwrap());
        assert_eq!(res.status, SolveStatus::Unique);
        assert_eq!(reconstruct(&spec, &res).unwrap(), build_spin_op(SpinAxis::X));
    }

    #[test]
    fn y_corrected_recovers_sy() {
        let spec = AnsatzSpec::new(family_pairs(Family::YCorrected), diagonal_pattern());
        let res = solve(&assemble(&spec).unwrap());
        assert_eq!(res.status, SolveStatus::Unique);
        assert_eq!(reconstruct(&spec, &res).unwrap(), build_spin_op(SpinAxis::Y));
    }

    #[test]
    fn y_without_phase_is_infeasible() {
        let spec = AnsatzSpec::new(family_pairs(Family::YUnphased), diagonal_pattern());
        let ls = assemble(&spec).unwrap();
        let res = solve(&ls);
        assert_eq!(res.status, SolveStatus::Infeasible);
        let w = res.witness.unwrap();
        assert!(witness_is_valid(&ls, &w));
        // Both eigenpairs are involved: identical tops, opposite eigenvalues.
        let pairs: BTreeSet<usize> = w.provenance.iter().map(|p| p.eigenpair).collect();
        assert_eq!(pairs, [0, 1].into_iter().collect());
        assert!(reconstruct(&spec, &solve(&ls)).is_err());
    }

    #[test]
    fn z_full_pattern_has_off_diagonal_freedom() {
        let spec = AnsatzSpec::new(family_pairs(Family::Z), full_pattern());
        let ls = assemble(&spec).unwrap();
        let res = solve(&ls);
        assert_eq!(res.status, SolveStatus::Parametric);
        let particular = res.particular.as_ref().unwrap();
        assert!(satisfies(&ls, particular));
        assert!(!res.nullspace.is_empty());
        let sz = build_spin_op(SpinAxis::Z);
        let sz_values: Vec<Scalar> = ls
            .unknowns
            .iter()
            .map(|u| {
                let (r, c) = u.entry.position();
                sz.entry(r, c).coeff(&u.order).coeff(&u.atom)
            })
            .collect();
        assert!(satisfies(&ls, &sz_values));
        // Pivoting on C before D yields a different, equally valid operator.
        assert_ne!(operator_from_values(&ls.unknowns, particular), sz);
        for v in &res.nullspace {
            let mut shifted = particular.clone();
            for (x, d) in shifted.iter_mut().zip(v) {
                *x += d;
            }
            assert!(satisfies(&ls, &shifted));
        }
    }

    #[test]
    fn phase_search_finds_two_consistent_assignments() {
        let plus = Family::YUnphased.build(Sign::Plus);
        let minus = Family::YUnphased.build(Sign::Minus);
        let found = search_theta_phases(&plus, &minus, &[-1, 1]);
        let feasible: Vec<(i32, i32)> = found
            .iter()
            .filter(|a| a.status == SolveStatus::Unique)
            .map(|a| (a.plus_theta_freq, a.minus_theta_freq))
            .collect();
        assert_eq!(feasible, vec![(-1, 1), (1, -1)]);
        let sy = found.iter().find(|a| a.plus_theta_freq == 1).unwrap();
        assert_eq!(sy.operator.as_ref().unwrap(), &build_spin_op(SpinAxis::Y));
    }

    #[test]
    fn json_document() {
        let text = r#"{
            "eigenpairs": [
                {"spinor": "z+", "eigenvalue": "+1/2"},
                {"spinor": {"top": "exp(-i*phi/2)*sin(theta/2)", "bottom": "exp(i*phi/2)*cos(theta/2)"}, "eigenvalue": "-1/2"}
            ],
            "pattern": ["A", "D"],
            "derivative_orders": [[1, 0], [0, 1]],
            "basis": [[-2, 0], [0, 0], [2, 0]]
        }"#;
        let spec = AnsatzSpec::from_json(text).unwrap();
        assert_eq!(spec.basis.len(), 3);
        let res = solve(&assemble(&spec).unwrap());
        assert_eq!(reconstruct(&spec, &res).unwrap(), build_spin_op(SpinAxis::Z));
    }

    #[test]
    fn json_errors() {
        let empty = r#"{"eigenpairs": [], "pattern": ["A"]}"#;
        assert!(matches!(AnsatzSpec::from_json(empty), Err(AnsatzFileError::Schema(_))));
        let bad_entry = r#"{"eigenpairs": [{"spinor": "z+", "eigenvalue": "1/2"}], "pattern": ["E"]}"#;
        assert!(matches!(AnsatzSpec::from_json(bad_entry), Err(AnsatzFileError::Schema(_))));
        let bad_expr = r#"{"eigenpairs": [{"spinor": {"top": "sin(theta/3)", "bottom": "1"}, "eigenvalue": "1/2"}], "pattern": ["A"]}"#;
        match AnsatzSpec::from_json(bad_expr) {
            Err(AnsatzFileError::Expression { source, .. }) => assert_eq!(source.offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        let unknown = r#"{"eigenpairs": [{"spinor": "q+", "eigenvalue": "1/2"}], "pattern": ["A"]}"#;
        assert!(matches!(AnsatzSpec::from_json(unknown), Err(AnsatzFileError::Spinor(_))));
    }
}
