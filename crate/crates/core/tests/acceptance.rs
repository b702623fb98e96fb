//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so every line is printed; exits non-zero if any criterion fails.

mod common;

use std::process::{Command, ExitCode};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spindiff::ansatz::{
    assemble, diagonal_pattern, full_pattern, operator_from_values, reconstruct, solve, witness_is_valid, AnsatzSpec,
    Eigenpair, Entry, SolveStatus,
};
use spindiff::diffop::{build_s2_closed, build_s2_composed, build_spin_op};
use spindiff::numeric::{crosscheck, SamplePlan};
use spindiff::spinor::inner;
use spindiff::verify::{oracle_cases, verify, ItemStatus, Suite, ORACLE_TOLERANCE};
use spindiff::{parse, print, spinor, Expr, Family, MatrixOp, PrintStyle, Scalar, Sign, SpinAxis};

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.pass = false;
        }
        self.details.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(format!("     {}", what.into()));
    }
}

fn pairs(f: Family) -> Vec<Eigenpair> {
    [Sign::Plus, Sign::Minus].map(|s| Eigenpair::labelled(f.build(s))).to_vec()
}

fn is_eigen(op: &MatrixOp, f: Family, sign: Sign, lambda: &Scalar) -> bool {
    let s = f.build(sign);
    op.apply(&s).same_components(&s.scale(lambda))
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    for (axis, f) in [(SpinAxis::Z, Family::Z), (SpinAxis::X, Family::X)] {
        let op = build_spin_op(axis);
        for sign in [Sign::Plus, Sign::Minus] {
            let l = sign.eigenvalue();
            o.check(is_eigen(&op, f, sign, &l), format!("S{} {} = ({l}) {}", axis.name(), f.id(sign), f.id(sign)));
        }
    }
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let sz = build_spin_op(SpinAxis::Z);
    let spec = AnsatzSpec::new(pairs(Family::Z), full_pattern());
    let ls = assemble(&spec).unwrap();
    let res = solve(&ls);
    o.check(
        res.status == SolveStatus::Unique,
        format!(
            "z, full 2x2 pattern, default basis: status {} (rank {} of {} unknowns, nullspace dimension {})",
            res.status.name(),
            res.rank,
            ls.unknowns.len(),
            res.nullspace.len()
        ),
    );
    match reconstruct(&spec, &res) {
        Ok(op) => o.check(op == sz, "z full-pattern solution equals Sz with zero off-diagonal entries"),
        Err(_) => {
            // Show that the freedom is real: the particular solution is a
            // different operator that also has the z vectors as eigenvectors.
            if let Some(values) = &res.particular {
                let alt = operator_from_values(&ls.unknowns, values);
                let holds = [Sign::Plus, Sign::Minus].iter().all(|&s| is_eigen(&alt, Family::Z, s, &s.eigenvalue()));
                o.note(format!(
                    "alternative solution with nonzero C entry: [2,1] = {}",
                    alt.entry(1, 0).to_text(PrintStyle::Trig)
                ));
                o.note(format!("alternative solution satisfies both z eigenrelations exactly: {holds}"));
            }
            let off_free = res
                .nullspace
                .iter()
                .filter(|v| {
                    v.iter().zip(&ls.unknowns).any(|(x, u)| !x.is_zero() && matches!(u.entry, Entry::B | Entry::C))
                })
                .count();
            o.note(format!("{off_free} nullspace directions move off-diagonal unknowns"));
        }
    }
    let spec = AnsatzSpec::new(pairs(Family::Z), diagonal_pattern());
    let z_diag = reconstruct(&spec, &solve(&assemble(&spec).unwrap()));
    o.check(z_diag.as_ref() == Ok(&sz), "z, diagonal pattern: unique, equals (-sin, i cos), (sin, i cos)");
    let spec = AnsatzSpec::new(pairs(Family::X), diagonal_pattern());
    let x_diag = reconstruct(&spec, &solve(&assemble(&spec).unwrap()));
    o.check(
        x_diag.as_ref() == Ok(&build_spin_op(SpinAxis::X)),
        "x, diagonal pattern: unique, equals (cos, i sin), (-cos, i sin)",
    );
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let spec = AnsatzSpec::new(pairs(Family::YUnphased), diagonal_pattern());
    let ls = assemble(&spec).unwrap();
    let res = solve(&ls);
    let valid = res.witness.as_ref().is_some_and(|w| witness_is_valid(&ls, w));
    o.check(
        res.status == SolveStatus::Infeasible && valid,
        format!("y without phase: {} with valid witness: {valid}", res.status.name()),
    );
    let spec = AnsatzSpec::new(pairs(Family::YCorrected), diagonal_pattern());
    let op = reconstruct(&spec, &solve(&assemble(&spec).unwrap()));
    let want = MatrixOp::diagonal(
        spindiff::DiffOp::term(spindiff::MultiIndex::D_THETA, Expr::constant(-Scalar::i())),
        spindiff::DiffOp::term(spindiff::MultiIndex::D_THETA, Expr::constant(-Scalar::i())),
    );
    o.check(op.as_ref() == Ok(&want), "phase-adjusted y: unique -i d_theta on both diagonal entries");
    let report = verify(Suite::All, spindiff::numeric::DEFAULT_SEED);
    let phases = report.item("solver.y.phases");
    o.check(phases.is_some_and(|i| i.status == ItemStatus::Pass), "report states the consistent phase assignment");
    if let Some(i) = phases {
        o.note(i.note.clone().unwrap_or_default());
    }
    let printed = report.item("eigen.sy.printed");
    o.check(
        printed.is_some_and(|i| i.status == ItemStatus::DocumentedDiscrepancy && i.lhs == "factors (-1/2, -1/2)"),
        "printed y labeling flagged as documented-discrepancy with factors (-1/2, -1/2)",
    );
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    for a in [SpinAxis::X, SpinAxis::Y, SpinAxis::Z] {
        let (b, c) = (a.next(), a.next().next());
        let lhs = build_spin_op(a).commutator(&build_spin_op(b));
        o.check(
            lhs == build_spin_op(c).scale(&Scalar::i()),
            format!("[S{}, S{}] = i S{}", a.name(), b.name(), c.name()),
        );
    }
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let s2 = build_s2_closed();
    o.check(build_s2_composed() == s2, "Sx^2 + Sy^2 + Sz^2 equals the closed form");
    for a in [SpinAxis::X, SpinAxis::Y, SpinAxis::Z] {
        o.check(build_spin_op(a).commutator(&s2).is_zero(), format!("[S{}, S^2] = 0", a.name()));
    }
    let l = Scalar::from_ratio(3, 4);
    for f in Family::SYMMETRIZED {
        for sign in [Sign::Plus, Sign::Minus] {
            o.check(is_eigen(&s2, f, sign, &l), format!("S^2 {} = (3/4) {}", f.id(sign), f.id(sign)));
        }
    }
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let g = spinor::specialize(&Family::Generalized.build(sign)).unwrap();
        o.check(
            g.same_components(&Family::ZUnsymmetrized.build(sign)),
            format!("{} at theta' = phi' = 0 equals {}", Family::Generalized.id(sign), Family::ZUnsymmetrized.id(sign)),
        );
    }
    for f in Family::ALL {
        let (p, m) = (f.build(Sign::Plus), f.build(Sign::Minus));
        let norm = inner(&p, &p) == Expr::one() && inner(&m, &m) == Expr::one();
        o.check(norm && inner(&p, &m).is_zero(), format!("{} / {} orthonormal", f.id(Sign::Plus), f.id(Sign::Minus)));
    }
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let sz = build_spin_op(SpinAxis::Z);
    for sign in [Sign::Plus, Sign::Minus] {
        let s = Family::ZUnsymmetrized.build(sign);
        let applied = sz.apply(&s);
        o.check(
            !applied.same_components(&s.scale(&sign.eigenvalue())) && applied.ratio_to(&s).is_none(),
            format!(
                "Sz {id} is not ({}) {id}, nor any multiple of it",
                sign.eigenvalue(),
                id = Family::ZUnsymmetrized.id(sign)
            ),
        );
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let plan = SamplePlan { tolerance: ORACLE_TOLERANCE, ..SamplePlan::default() };
    let mut worst: f64 = 0.0;
    for (name, op, s, l) in oracle_cases() {
        let r = crosscheck(&op, &s, Some(&l), &plan);
        worst = worst.max(r.fd_deviation);
        if !r.passed() {
            o.check(
                false,
                format!("{name}: fd deviation {:.3e}, eigen deviation {:?}", r.fd_deviation, r.eigen_deviation),
            );
        }
    }
    o.check(
        worst < ORACLE_TOLERANCE,
        format!(
            "{} cases x {} samples, max fd deviation {worst:.3e} < {ORACLE_TOLERANCE:e}",
            oracle_cases().len(),
            plan.count
        ),
    );
    let a = verify(Suite::Numeric, plan.seed).to_json();
    let b = verify(Suite::Numeric, plan.seed).to_json();
    o.check(a == b, "numeric report is byte-identical across runs with the same seed");
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for style in [PrintStyle::Exponential, PrintStyle::Trig] {
        let mut bad = 0;
        for _ in 0..1000 {
            let e = common::random_expr(&mut rng);
            if parse(&print(&e, style)).as_ref() != Ok(&e) {
                bad += 1;
            }
        }
        o.check(bad == 0, format!("1000 random expressions round-trip in {style:?} style ({bad} mismatches)"));
    }
    let exe = env!("CARGO_BIN_EXE_spindiff");
    for (text, kind, offset) in [
        ("cos(theta/2", "syntax error", 11),
        ("sin(theta/3)", "lattice violation", 4),
        ("exp(theta)", "non-imaginary exponent", 4),
    ] {
        let out = Command::new(exe).args(["eval", "--expr", text, "--theta", "0.5"]).output().unwrap();
        let err = String::from_utf8_lossy(&out.stderr);
        let ok = out.status.code() == Some(2) && err.contains(kind) && err.contains(&format!("offset {offset}"));
        o.check(ok, format!("`{text}`: exit {:?}, {}", out.status.code(), err.lines().next().unwrap_or("")));
    }
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exact eigenrelations for Sz and Sx", criterion_1),
        ("solver reproduces Sz from the full 2x2 ansatz and Sx", criterion_2),
        ("y phase-factor finding", criterion_3),
        ("commutation relations", criterion_4),
        ("S^2 closed form, commutators and eigenvalue 3/4", criterion_5),
        ("generalized vectors specialize; families orthonormal", criterion_6),
        ("negative control on unsymmetrized z vectors", criterion_7),
        ("finite-difference oracle agreement and determinism", criterion_8),
        ("parser round trip and error exit codes", criterion_9),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let outcome = run();
        println!("criterion {}: {} - {title}", k + 1, if outcome.pass { "PASS" } else { "FAIL" });
        for d in &outcome.details {
            println!("    {d}");
        }
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
