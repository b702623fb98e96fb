//! Fixed verification suites and their reports.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ansatz::{
    assemble, diagonal_pattern, full_pattern, operator_from_values, satisfies, search_theta_phases, solve,
    witness_is_valid, AnsatzSpec, Eigenpair, SolveStatus,
};
use crate::diffop::{build_s2_closed, build_s2_composed, build_spin_op, MatrixOp, SpinAxis};
use crate::expr::{Expr, FreqVec};
use crate::numeric::{crosscheck, SamplePlan, DEFAULT_SEED, DEFAULT_STEP};
use crate::parser::PrintStyle;
use crate::scalar::Scalar;
use crate::spinor::{inner, specialize, Family, Sign, Spinor};

/// Absolute tolerance for the oracle suite.
pub const ORACLE_TOLERANCE: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Eigen,
    Commutators,
    S2,
    Solver,
    Numeric,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::All, Suite::Eigen, Suite::Commutators, Suite::S2, Suite::Solver, Suite::Numeric];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Eigen => "eigen",
            Suite::Commutators => "commutators",
            Suite::S2 => "s2",
            Suite::Solver => "solver",
            Suite::Numeric => "numeric",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            format!("unknown suite `{s}` (expected one of all, eigen, commutators, s2, solver, numeric)")
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItemStatus {
    Pass,
    Fail,
    DocumentedDiscrepancy,
}

impl ItemStatus {
    pub fn label(self) -> &'static str {
        match self {
            ItemStatus::Pass => "PASS",
            ItemStatus::Fail => "FAIL",
            ItemStatus::DocumentedDiscrepancy => "DISCREPANCY",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            ItemStatus::Pass
        } else {
            ItemStatus::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericDeviation {
    pub samples: usize,
    pub tolerance: f64,
    pub fd_deviation: f64,
    pub eigen_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportItem {
    pub id: String,
    pub description: String,
    pub status: ItemStatus,
    pub lhs: String,
    pub rhs: String,
    pub numeric: Option<NumericDeviation>,
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub documented_discrepancy: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub tool_version: String,
    pub seed: u64,
    pub items: Vec<ReportItem>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.has_failures())
    }

    pub fn item(&self, id: &str) -> Option<&ReportItem> {
        self.items.iter().find(|i| i.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("spindiff {} suite={} seed={}\n", self.tool_version, self.suite, self.seed);
        for item in &self.items {
            out.push_str(&format!("[{}] {}: {}\n", item.status.label(), item.id, item.description));
            if item.status != ItemStatus::Pass {
                out.push_str(&format!("    lhs: {}\n    rhs: {}\n", item.lhs, item.rhs));
            }
            if let Some(n) = &item.numeric {
                out.push_str(&format!("    fd deviation: {:.3e}", n.fd_deviation));
                if let Some(e) = n.eigen_deviation {
                    out.push_str(&format!(", eigen deviation: {e:.3e}"));
                }
                out.push_str(&format!(" ({} samples, tol {:e})\n", n.samples, n.tolerance));
            }
            if let Some(note) = &item.note {
                out.push_str(&format!("    note: {note}\n"));
            }
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} items: {} pass, {} fail, {} documented-discrepancy\n",
            s.total, s.pass, s.fail, s.documented_discrepancy
        ));
        out
    }
}

fn spinor_text(s: &Spinor) -> String {
    let [t, b] = s.to_text(PrintStyle::Trig);
    format!("({t}, {b})")
}

fn op_text(op: &MatrixOp) -> String {
    let [[a, b], [c, d]] = op.entry_texts(PrintStyle::Trig);
    format!("[[{a}, {b}], [{c}, {d}]]")
}

fn item(id: &str, description: &str, status: ItemStatus, lhs: String, rhs: String) -> ReportItem {
    ReportItem { id: id.to_string(), description: description.to_string(), status, lhs, rhs, numeric: None, note: None }
}

fn pm_pairs(f: Family) -> [Spinor; 2] {
    [f.build(Sign::Plus), f.build(Sign::Minus)]
}

/// `op(s) == lambda * s` for both members of a family, as one item.
fn eigen_item(id: &str, description: &str, op: &MatrixOp, family: Family, lambdas: [Scalar; 2]) -> ReportItem {
    let mut ok = true;
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (s, l) in pm_pairs(family).iter().zip(&lambdas) {
        let applied = op.apply(s);
        let want = s.scale(l);
        ok &= applied.same_components(&want);
        lhs.push(spinor_text(&applied));
        rhs.push(spinor_text(&want));
    }
    item(id, description, ItemStatus::from_bool(ok), lhs.join("; "), rhs.join("; "))
}

fn half() -> Scalar {
    Scalar::from_ratio(1, 2)
}

fn pm_half() -> [Scalar; 2] {
    [half(), -half()]
}

fn eigen_suite() -> Vec<ReportItem> {
    let sz = build_spin_op(SpinAxis::Z);
    let sx = build_spin_op(SpinAxis::X);
    let sy = build_spin_op(SpinAxis::Y);
    let mut items = vec![
        eigen_item("eigen.sz", "Sz on the symmetrized z eigenvectors gives +-1/2", &sz, Family::Z, pm_half()),
        eigen_item("eigen.sx", "Sx on the x eigenvectors gives +-1/2", &sx, Family::X, pm_half()),
        eigen_item(
            "eigen.sy",
            "Sy on the phase-corrected y eigenvectors gives +-1/2",
            &sy,
            Family::YCorrected,
            pm_half(),
        ),
    ];

    // Printed y vectors: both come out with factor -1/2.
    let printed = pm_pairs(Family::YPrinted);
    let factors: Vec<Option<Scalar>> = printed.iter().map(|s| sy.apply(s).ratio_to(s)).collect();
    let shown = |f: &Option<Scalar>| f.as_ref().map_or("none".to_string(), |x| x.to_string());
    let expected = Some(-half());
    let status =
        if factors.iter().all(|f| *f == expected) { ItemStatus::DocumentedDiscrepancy } else { ItemStatus::Fail };
    let mut it = item(
        "eigen.sy.printed",
        "Sy on the printed y vectors",
        status,
        format!("factors ({}, {})", shown(&factors[0]), shown(&factors[1])),
        "labels (1/2, -1/2)".to_string(),
    );
    it.note = Some(
        "both printed vectors are eigenvectors of Sy with eigenvalue -1/2; the + label is inconsistent with the operator"
            .to_string(),
    );
    items.push(it);

    // Negative control: unsymmetrized z vectors are not eigenvectors of Sz.
    let unsym = pm_pairs(Family::ZUnsymmetrized);
    let mut ok = true;
    let mut lhs = Vec::new();
    for (s, l) in unsym.iter().zip(pm_half()) {
        let applied = sz.apply(s);
        ok &= !applied.same_components(&s.scale(&l)) && applied.ratio_to(s).is_none();
        lhs.push(spinor_text(&applied));
    }
    items.push(item(
        "eigen.sz.unsymmetrized",
        "Sz on the unsymmetrized z vectors is not a multiple of them (negative control)",
        ItemStatus::from_bool(ok),
        lhs.join("; "),
        unsym.iter().map(spinor_text).collect::<Vec<_>>().join("; "),
    ));

    // Generalized vectors at theta' = phi' = 0.
    let mut ok = true;
    let mut lhs = Vec::new();
    for (g, z) in pm_pairs(Family::Generalized).iter().zip(&unsym) {
        match specialize(g) {
            Ok(s) => {
                ok &= s.same_components(z);
                lhs.push(spinor_text(&s));
            }
            Err(e) => {
                ok = false;
                lhs.push(e.to_string());
            }
        }
    }
    items.push(item(
        "eigen.generalized.specialize",
        "generalized vectors at theta' = phi' = 0 reduce to the z vectors",
        ItemStatus::from_bool(ok),
        lhs.join("; "),
        unsym.iter().map(spinor_text).collect::<Vec<_>>().join("; "),
    ));

    // Normalization and orthogonality of every family.
    let mut bad = Vec::new();
    for f in Family::ALL {
        let [p, m] = pm_pairs(f);
        if inner(&p, &p) != Expr::one() || inner(&m, &m) != Expr::one() {
            bad.push(format!("{} not normalized", f.stem()));
        }
        if !inner(&p, &m).is_zero() {
            bad.push(format!("{}{} not orthogonal", f.stem(), if f == Family::ZUnsymmetrized { " unsym" } else { "" }));
        }
    }
    items.push(item(
        "eigen.orthonormal",
        "every family is normalized and orthogonal in +- pairs",
        ItemStatus::from_bool(bad.is_empty()),
        if bad.is_empty() { "<s,s> = 1, <s+,s-> = 0".to_string() } else { bad.join(", ") },
        "<s,s> = 1, <s+,s-> = 0".to_string(),
    ));
    items
}

fn commutator_suite() -> Vec<ReportItem> {
    let mut items = Vec::new();
    for (id, axis) in [("comm.xy", SpinAxis::X), ("comm.yz", SpinAxis::Y), ("comm.zx", SpinAxis::Z)] {
        let (j, k) = (axis.next(), axis.next().next());
        let c = build_spin_op(axis).commutator(&build_spin_op(j));
        let want = build_spin_op(k).scale(&Scalar::i());
        items.push(item(
            id,
            &format!("[S{}, S{}] = i S{}", axis.name(), j.name(), k.name()),
            ItemStatus::from_bool(c == want),
            op_text(&c),
            op_text(&want),
        ));
    }
    let s2 = build_s2_closed();
    let nonzero: Vec<String> = [SpinAxis::X, SpinAxis::Y, SpinAxis::Z]
        .into_iter()
        .filter(|a| !build_spin_op(*a).commutator(&s2).is_zero())
        .map(|a| format!("S{}", a.name()))
        .collect();
    items.push(item(
        "comm.s2",
        "[Si, S^2] = 0 for i = x, y, z",
        ItemStatus::from_bool(nonzero.is_empty()),
        if nonzero.is_empty() { "0".to_string() } else { format!("nonzero for {}", nonzero.join(", ")) },
        "0".to_string(),
    ));
    items
}

fn s2_suite() -> Vec<ReportItem> {
    let closed = build_s2_closed();
    let composed = build_s2_composed();
    let mut items = vec![item(
        "s2.closed-form",
        "Sx^2 + Sy^2 + Sz^2 equals the closed form",
        ItemStatus::from_bool(closed == composed),
        op_text(&composed),
        op_text(&closed),
    )];
    let three_quarters = Scalar::from_ratio(3, 4);
    for f in Family::SYMMETRIZED {
        items.push(eigen_item(
            &format!("s2.eigen.{}", f.stem()),
            &format!("S^2 on the {} eigenvectors gives 3/4", f.stem()),
            &closed,
            f,
            [three_quarters.clone(), three_quarters.clone()],
        ));
    }
    items
}

fn family_spec(f: Family, pattern: std::collections::BTreeSet<crate::ansatz::Entry>) -> AnsatzSpec {
    AnsatzSpec::new(pm_pairs(f).into_iter().map(Eigenpair::labelled).collect(), pattern)
}

fn all_gaussian(op: &MatrixOp) -> bool {
    (0..2)
        .all(|r| (0..2).all(|c| op.entry(r, c).terms().all(|(_, e)| e.terms().all(|(_, s)| s.is_gaussian_rational()))))
}

fn unique_item(id: &str, description: &str, spec: &AnsatzSpec, want: &MatrixOp) -> ReportItem {
    let res = solve(&assemble(spec).expect("built-in spec is valid"));
    match crate::ansatz::reconstruct(spec, &res) {
        Ok(op) => {
            let mut it = item(
                id,
                description,
                ItemStatus::from_bool(op == *want && all_gaussian(&op)),
                op_text(&op),
                op_text(want),
            );
            it.note = Some("unique; coefficients are Gaussian rationals".to_string());
            it
        }
        Err(_) => item(id, description, ItemStatus::Fail, format!("status {}", res.status.name()), op_text(want)),
    }
}

/// Full 2x2 pattern: the claimed operator must lie in the solution set, but
/// the set is not a single point.
fn full_pattern_item(id: &str, description: &str, family: Family, want: &MatrixOp) -> ReportItem {
    let spec = family_spec(family, full_pattern());
    let ls = assemble(&spec).expect("built-in spec is valid");
    let res = solve(&ls);
    let want_values: Vec<Scalar> = ls
        .unknowns
        .iter()
        .map(|u| {
            let (r, c) = u.entry.position();
            want.entry(r, c).coeff(&u.order).coeff(&u.atom)
        })
        .collect();
    let contains = satisfies(&ls, &want_values);
    let (status, lhs) = match res.status {
        SolveStatus::Unique => {
            let op = operator_from_values(&ls.unknowns, res.solution.as_deref().unwrap_or_default());
            (ItemStatus::from_bool(op == *want), op_text(&op))
        }
        SolveStatus::Parametric if contains => (
            ItemStatus::DocumentedDiscrepancy,
            format!(
                "parametric: rank {} of {} unknowns, nullspace dimension {}",
                res.rank,
                ls.unknowns.len(),
                res.nullspace.len()
            ),
        ),
        _ => (ItemStatus::Fail, format!("status {}, claimed operator in solution set: {contains}", res.status.name())),
    };
    let mut it = item(id, description, status, lhs, format!("unique {}", op_text(want)));
    if status == ItemStatus::DocumentedDiscrepancy {
        it.note = Some(
            "the claimed operator solves the system but off-diagonal entries are not forced to zero; uniqueness holds only under the diagonal pattern"
                .to_string(),
        );
    }
    it
}

fn solver_suite() -> Vec<ReportItem> {
    let sz = build_spin_op(SpinAxis::Z);
    let sx = build_spin_op(SpinAxis::X);
    let sy = build_spin_op(SpinAxis::Y);
    let mut items = vec![
        unique_item(
            "solver.z.diagonal",
            "z eigenpairs, diagonal ansatz recover Sz",
            &family_spec(Family::Z, diagonal_pattern()),
            &sz,
        ),
        full_pattern_item(
            "solver.z.full",
            "z eigenpairs, full 2x2 ansatz force zero off-diagonal entries",
            Family::Z,
            &sz,
        ),
        unique_item(
            "solver.x.diagonal",
            "x eigenpairs, diagonal ansatz recover Sx",
            &family_spec(Family::X, diagonal_pattern()),
            &sx,
        ),
        full_pattern_item(
            "solver.x.full",
            "x eigenpairs, full 2x2 ansatz force zero off-diagonal entries",
            Family::X,
            &sx,
        ),
    ];

    // Enlarged basis leaves the unique solutions unchanged.
    let wide: Vec<FreqVec> = (-2..=2).flat_map(|m| (-2..=2).map(move |n| FreqVec::theta_phi(2 * m, 2 * n))).collect();
    for (f, want, id) in [(Family::Z, &sz, "solver.z.wide-basis"), (Family::X, &sx, "solver.x.wide-basis")] {
        let spec = family_spec(f, diagonal_pattern()).with_basis(wide.clone());
        items.push(unique_item(
            id,
            &format!("{} eigenpairs over a 25-atom basis give the same operator", f.stem()),
            &spec,
            want,
        ));
    }

    // y without phase: infeasible, with a checkable witness.
    let spec = family_spec(Family::YUnphased, diagonal_pattern());
    let ls = assemble(&spec).expect("built-in spec is valid");
    let res = solve(&ls);
    let witness_ok = res.witness.as_ref().is_some_and(|w| witness_is_valid(&ls, w));
    let mut it = item(
        "solver.y.unphased",
        "y eigenpairs without phase, diagonal ansatz are infeasible",
        ItemStatus::from_bool(res.status == SolveStatus::Infeasible && witness_ok),
        format!("status {}, witness valid: {witness_ok}", res.status.name()),
        "status infeasible".to_string(),
    );
    if let Some(w) = &res.witness {
        let rows: Vec<String> = w
            .provenance
            .iter()
            .zip(&w.combination)
            .map(|(p, (_, m))| {
                format!(
                    "{m} x (pair {}, component {}, freq [{}, {}])",
                    p.eigenpair, p.component, p.freq.m_theta, p.freq.m_phi
                )
            })
            .collect();
        it.note = Some(format!("witness: {} -> 0 = {}", rows.join(" + "), w.rhs));
    }
    items.push(it);

    // Printed y vectors under their printed labels.
    let spec = family_spec(Family::YPrinted, diagonal_pattern());
    let res = solve(&assemble(&spec).expect("built-in spec is valid"));
    let mut it = item(
        "solver.y.printed",
        "printed y eigenpairs (phase included, printed labels), diagonal ansatz",
        if res.status == SolveStatus::Infeasible { ItemStatus::DocumentedDiscrepancy } else { ItemStatus::Fail },
        format!("status {}", res.status.name()),
        "operator -i d_theta on both diagonal entries".to_string(),
    );
    it.note = Some("with the printed labels no first-order diagonal operator exists; see solver.y.phases".to_string());
    items.push(it);

    // Which per-vector phase assignment is consistent.
    let found =
        search_theta_phases(&Family::YUnphased.build(Sign::Plus), &Family::YUnphased.build(Sign::Minus), &[-1, 1]);
    let phase = |m: i32| if m > 0 { "exp(i*theta/2)" } else { "exp(-i*theta/2)" };
    let mut lines = Vec::new();
    let mut sy_assignment = None;
    for a in &found {
        let desc = format!("+: {}, -: {} -> {}", phase(a.plus_theta_freq), phase(a.minus_theta_freq), a.status.name());
        if a.operator.as_ref() == Some(&sy) {
            sy_assignment = Some((a.plus_theta_freq, a.minus_theta_freq));
        }
        lines.push(desc);
    }
    let consistent = found.iter().filter(|a| a.status == SolveStatus::Unique).count();
    let mut it = item(
        "solver.y.phases",
        "per-vector theta phase assignments for the y vectors",
        ItemStatus::from_bool(sy_assignment == Some((1, -1)) && consistent == 2),
        lines.join("; "),
        "exactly one assignment reproduces Sy".to_string(),
    );
    it.note = Some(
        "exp(i*theta/2) on the + vector and exp(-i*theta/2) on the - vector gives -i d_theta on both diagonal entries; the swapped assignment gives +i d_theta (that is -Sy)"
            .to_string(),
    );
    items.push(it);

    items.push(unique_item(
        "solver.y.corrected",
        "phase-corrected y eigenpairs, diagonal ansatz recover Sy",
        &family_spec(Family::YCorrected, diagonal_pattern()),
        &sy,
    ));
    items
}

/// Every (operator, spinor, eigenvalue) triple the symbolic suites assert.
pub fn oracle_cases() -> Vec<(String, MatrixOp, Spinor, Scalar)> {
    let mut out = Vec::new();
    let ops = [
        ("Sz", build_spin_op(SpinAxis::Z), Family::Z),
        ("Sx", build_spin_op(SpinAxis::X), Family::X),
        ("Sy", build_spin_op(SpinAxis::Y), Family::YCorrected),
    ];
    for (name, op, f) in &ops {
        for sign in [Sign::Plus, Sign::Minus] {
            out.push((format!("{name}.{}", f.id(sign)), op.clone(), f.build(sign), sign.eigenvalue()));
        }
    }
    for sign in [Sign::Plus, Sign::Minus] {
        out.push((
            format!("Sy.{}", Family::YPrinted.id(sign)),
            ops[2].1.clone(),
            Family::YPrinted.build(sign),
            -half(),
        ));
    }
    let s2 = build_s2_closed();
    for f in Family::SYMMETRIZED {
        for sign in [Sign::Plus, Sign::Minus] {
            out.push((format!("S2.{}", f.id(sign)), s2.clone(), f.build(sign), Scalar::from_ratio(3, 4)));
        }
    }
    out
}

fn numeric_suite(seed: u64) -> Vec<ReportItem> {
    let plan = SamplePlan { seed, fd_step: DEFAULT_STEP, tolerance: ORACLE_TOLERANCE, ..SamplePlan::default() };
    let mut items = Vec::new();
    for (name, op, s, lambda) in oracle_cases() {
        let r = crosscheck(&op, &s, Some(&lambda), &plan);
        let mut it = item(
            &format!("numeric.{name}"),
            &format!("finite differences agree with symbolic apply and eigenvalue {lambda}"),
            ItemStatus::from_bool(r.passed()),
            format!("fd deviation {:.3e}", r.fd_deviation),
            format!("< {:e}", plan.tolerance),
        );
        it.numeric = Some(NumericDeviation {
            samples: r.samples,
            tolerance: r.tolerance,
            fd_deviation: r.fd_deviation,
            eigen_deviation: r.eigen_deviation,
        });
        it.note = r.note;
        items.push(it);
    }
    // Negative control: the oracle sees the unsymmetrized failure too.
    let sz = build_spin_op(SpinAxis::Z);
    for sign in [Sign::Plus, Sign::Minus] {
        let s = Family::ZUnsymmetrized.build(sign);
        let r = crosscheck(&sz, &s, Some(&sign.eigenvalue()), &plan);
        let dev = r.eigen_deviation.unwrap_or(0.0);
        let mut it = item(
            &format!("numeric.Sz.{}", Family::ZUnsymmetrized.id(sign)),
            "finite differences agree with symbolic apply; eigenvalue check fails (negative control)",
            ItemStatus::from_bool(r.fd_pass && (plan.count == 0 || dev > 0.1)),
            format!("eigen deviation {dev:.3e}"),
            "> 1e-1".to_string(),
        );
        it.numeric = Some(NumericDeviation {
            samples: r.samples,
            tolerance: r.tolerance,
            fd_deviation: r.fd_deviation,
            eigen_deviation: r.eigen_deviation,
        });
        items.push(it);
    }
    items
}

pub fn verify(suite: Suite, seed: u64) -> VerificationReport {
    let mut items = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Eigen) {
        items.extend(eigen_suite());
    }
    if want(Suite::Commutators) {
        items.extend(commutator_suite());
    }
    if want(Suite::S2) {
        items.extend(s2_suite());
    }
    if want(Suite::Solver) {
        items.extend(solver_suite());
    }
    if want(Suite::Numeric) {
        items.extend(numeric_suite(seed));
    }
    let mut summary = Summary { total: items.len(), ..Summary::default() };
    for it in &items {
        match it.status {
            ItemStatus::Pass => summary.pass += 1,
            ItemStatus::Fail => summary.fail += 1,
            ItemStatus::DocumentedDiscrepancy => summary.documented_discrepancy += 1,
        }
    }
    VerificationReport { suite, tool_version: crate::VERSION.to_string(), seed, items, summary }
}

pub fn verify_default(suite: Suite) -> VerificationReport {
    verify(suite, DEFAULT_SEED)
}
