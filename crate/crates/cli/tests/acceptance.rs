//! One PASS/FAIL line per acceptance criterion. Criteria that hold on this
//! implementation are also asserted; the rest are printed and left red.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use vakit::builders::{adjoint_module, by_name, diffeps3, exterior, free_module, one_dim, upper_triangular, EXAMPLES};
use vakit::c2::{
    all_pass, beta_commutative_suite, c2_algebra, c2_module, co_c2_coalgebra, co_c2_comodule, copoisson_comodule_suite,
    copoisson_duality_iso, copoisson_duality_iso_comodule, copoisson_suite, gamma_algebra_suite, poisson_duality_iso,
    poisson_duality_iso_module, poisson_module_suite, poisson_suite,
};
use vakit::defects::{catalogue, tweak_algebra, Slot, Tweak};
use vakit::duality::{
    agrees_under_double_dual, dualize_algebra, dualize_coalgebra, dualize_comodule, dualize_module, module_agrees_under_double_dual,
};
use vakit::gamma::{beta_relation_suite, relation_holds};
use vakit::vertex::{
    algebra_suite, beta0_associativity_suite, binom_delta_suite, coalgebra_suite, comodule_suite, hypothesis_domain, module_suite,
    ExponentBox,
};
use vakit::{BetaSpec, CheckReport, GradedSpace, GroupElement, GroupSpec, RelationKind, Verdict, VertexAlgebra, VertexModule};
use vakit_cli::{parse, serialize};

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn failing(r: &CheckReport) -> String {
    r.failing_ids().join(",")
}

fn families() -> Vec<(&'static str, VertexAlgebra)> {
    vec![("diffeps3", diffeps3()), ("upper_triangular", upper_triangular()), ("exterior2", exterior(2)), ("exterior3", exterior(3))]
}

/// Fixtures that are vertex algebras in the full sense.
fn vertex_algebras() -> Vec<(&'static str, VertexAlgebra)> {
    vec![
        ("one_dim", one_dim()),
        ("diffeps3", diffeps3()),
        ("exterior1", exterior(1)),
        ("exterior2", exterior(2)),
        ("exterior3", exterior(3)),
    ]
}

fn modules() -> Vec<(String, VertexModule)> {
    let mut out = Vec::new();
    for (n, a) in [("one_dim", one_dim()), ("diffeps3", diffeps3()), ("exterior1", exterior(1)), ("exterior2", exterior(2))] {
        out.push((format!("{n}.adjoint"), adjoint_module(&a)));
        out.push((format!("{n}.free2"), free_module(&a, 2)));
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (name, a) in families() {
        let r = algebra_suite(&a, Some(ExponentBox::symmetric(4))).run();
        if !all_pass(&r) {
            bad.push(format!("{name} fails [{}]", failing(&r)));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let fast = secs < 10.0;
    let detail = format!("{:.2}s; {}", secs, if bad.is_empty() { "all four pass".to_string() } else { bad.join("; ") });
    ok(bad.is_empty() && fast, detail)
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for (name, a) in vertex_algebras() {
        n += 1;
        let (c, _) = dualize_algebra(&a).unwrap();
        let r = coalgebra_suite(&c, Some(ExponentBox::symmetric(4))).unwrap().run();
        let (back, _) = dualize_coalgebra(&c).unwrap();
        if !all_pass(&r) || !agrees_under_double_dual(&a, &back) {
            bad.push(name.to_string());
        }
    }
    for (name, m) in modules() {
        n += 1;
        if !all_pass(&module_suite(&m, None).run()) {
            bad.push(format!("{name} (not a module)"));
            continue;
        }
        let (d, _) = dualize_module(&m).unwrap();
        let r = comodule_suite(&d, None).unwrap().run();
        let (back, _) = dualize_comodule(&d).unwrap();
        if !all_pass(&r) || !module_agrees_under_double_dual(&m, &back) {
            bad.push(name);
        }
    }
    ok(bad.is_empty(), format!("{n} structures; failures: [{}]", bad.join(",")))
}

fn multiplicative(spaces: &[&GradedSpace], beta: &BetaSpec) -> bool {
    let spec = spaces[0].spec();
    relation_holds(spec, beta, &spec.zero(), RelationKind::Multiplicative, &hypothesis_domain(spaces))
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let mut poisson = 0;
    for (name, a) in vertex_algebras() {
        let p = c2_algebra(&a).unwrap();
        if !all_pass(&gamma_algebra_suite(&p).run()) || !all_pass(&beta_commutative_suite(&p).run()) {
            bad.push(format!("{name}: R(V) not beta-commutative"));
        }
        if multiplicative(&[&p.carrier], &p.beta) {
            poisson += 1;
            if !all_pass(&poisson_suite(&p).run()) {
                bad.push(format!("{name}: R(V) not Poisson"));
            }
        }
        let (c, _) = dualize_algebra(&a).unwrap();
        let k = co_c2_coalgebra(&c).unwrap();
        let r = copoisson_suite(&k).unwrap().run();
        if !all_pass(&r) {
            bad.push(format!("{name}: co-C2 [{}]", failing(&r)));
        }
    }
    for (name, m) in modules() {
        let (p, pm) = c2_module(&m).unwrap();
        if !all_pass(&poisson_module_suite(&p, &pm).run()) {
            bad.push(format!("{name}: C2 module"));
        }
        let (n, _) = dualize_module(&m).unwrap();
        let (k, km) = co_c2_comodule(&n).unwrap();
        if !all_pass(&copoisson_comodule_suite(&k, &km).unwrap().run()) {
            bad.push(format!("{name}: co-C2 comodule"));
        }
    }
    let d = c2_algebra(&diffeps3()).unwrap().carrier.dim();
    if d != 2 {
        bad.push(format!("dim R(diffeps3) = {d}"));
    }
    // upper_triangular is outside the hypothesis (it breaks jacobi); report only
    let outside = match c2_algebra(&upper_triangular()) {
        Ok(p) => {
            let mut r = gamma_algebra_suite(&p).run();
            r.results.extend(beta_commutative_suite(&p).run().results);
            format!("upper_triangular (not a vertex algebra) fails [{}]", failing(&r))
        }
        Err(e) => format!("upper_triangular: {e}"),
    };
    ok(
        bad.is_empty(),
        format!(
            "{} algebras, {} modules, Poisson on {poisson}; dim R(diffeps3) = {d}; failures: [{}]; {outside}",
            vertex_algebras().len(),
            modules().len(),
            bad.join("; ")
        ),
    )
}

fn dims_match(a: &GradedSpace, b: &GradedSpace) -> bool {
    let degs: BTreeSet<GroupElement> = a.support().into_iter().chain(b.support().into_iter().map(|g| b.spec().neg(&g))).collect();
    degs.iter().all(|g| a.dim_at(g) == b.dim_at(&a.spec().neg(g)))
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for name in EXAMPLES {
        let a = by_name(name).unwrap();
        let (c, _) = dualize_algebra(&a).unwrap();
        for (label, o) in [("7.5", poisson_duality_iso(&a)), ("7.6", copoisson_duality_iso(&c))] {
            n += 1;
            if !all_pass(&o.report) || o.map.is_none() {
                bad.push(format!("{name} {label} [{}]", failing(&o.report)));
            }
        }
        if let (Ok(p), Ok(k)) = (c2_algebra(&a), co_c2_coalgebra(&c)) {
            if !dims_match(&p.carrier, &k.carrier) {
                bad.push(format!("{name}: dimensions"));
            }
        }
    }
    for (name, m) in modules() {
        let (d, _) = dualize_module(&m).unwrap();
        for (label, o) in [("7.10", poisson_duality_iso_module(&m)), ("7.12", copoisson_duality_iso_comodule(&d))] {
            n += 1;
            if !all_pass(&o.report) || o.map.is_none() {
                bad.push(format!("{name} {label} [{}]", failing(&o.report)));
            }
        }
        let (_, pm) = c2_module(&m).unwrap();
        let (_, km) = co_c2_comodule(&d).unwrap();
        if !dims_match(&pm.carrier, &km.carrier) {
            bad.push(format!("{name}: dimensions"));
        }
    }
    ok(bad.is_empty(), format!("{n} isomorphisms; failures: [{}]", bad.join("; ")))
}

fn criterion_5() -> Outcome {
    use RelationKind::*;
    let spec = GroupSpec::integers();
    let dom = spec.box_elements(-3, 3);
    let g0 = spec.zero();
    let verdicts = |beta: &BetaSpec| -> Vec<Verdict> {
        beta_relation_suite(&spec, beta, &g0, &RelationKind::ALL, &dom).run().results.into_iter().map(|r| r.verdict).collect()
    };
    let mut bad = Vec::new();
    type Case = (&'static str, BetaSpec, Vec<(RelationKind, Verdict)>);
    let cases: [Case; 3] = [
        ("One", BetaSpec::One, RelationKind::ALL.iter().map(|r| (*r, Verdict::Pass)).collect()),
        (
            "SignBilinear",
            BetaSpec::Sign(vec![vec![1]]),
            [Parity, Multiplicative, Cocycle, UnitRight, InverseSym, Shift2Gamma0].into_iter().map(|r| (r, Verdict::Pass)).collect(),
        ),
        (
            "Zero",
            BetaSpec::Zero,
            vec![
                (Parity, Verdict::Pass),
                (Multiplicative, Verdict::Pass),
                (Cocycle, Verdict::Pass),
                (UnitRight, Verdict::Fail),
                (InverseSym, Verdict::Fail),
            ],
        ),
    ];
    for (name, beta, want) in cases {
        let got = verdicts(&beta);
        for (rel, v) in want {
            let g = got[RelationKind::ALL.iter().position(|r| *r == rel).unwrap()];
            if g != v {
                bad.push(format!("{name} {}: {g:?}", rel.id()));
            }
        }
    }
    ok(bad.is_empty(), format!("box [-3,3]^2; mismatches: [{}]", bad.join(", ")))
}

fn criterion_6() -> Outcome {
    let binom = binom_delta_suite((-6, 6), (0, 8)).run();
    let mut notes = vec![format!("binom_delta {}", if all_pass(&binom) { "pass" } else { "FAIL" })];
    let planted = tweak_algebra(&upper_triangular(), &[Tweak { slot: Slot::Op(-1), col: 0, row: 0, delta: 1 }]).unwrap();
    let mut agree = true;
    for (name, a) in [("upper_triangular", upper_triangular()), ("planted", planted)] {
        let r = beta0_associativity_suite(&a, Some(ExponentBox::symmetric(4))).run();
        let eq = r.results.iter().find(|x| x.id == "assoc_equivalence").unwrap();
        agree &= eq.verdict == Verdict::Pass;
        let w = eq.witness.as_ref().map(|w| format!(" at {:?}", w.exponents)).unwrap_or_default();
        notes.push(format!("{name}: equivalence {:?}{w}, failing [{}]", eq.verdict, failing(&r)));
    }
    ok(all_pass(&binom) && agree, notes.join("; "))
}

fn criterion_7() -> Outcome {
    let defects = catalogue();
    let mut isolated = 0;
    let mut replayed = 0;
    let mut coupled = Vec::new();
    for d in &defects {
        let o = d.evaluate().unwrap();
        if o.isolated {
            isolated += 1;
        } else {
            coupled.push(format!("{} also breaks {:?}", d.clause, o.failing.iter().filter(|c| c.as_str() != d.clause).collect::<Vec<_>>()));
        }
        replayed += o.replayed as usize;
    }
    let n = defects.len();
    ok(
        isolated == n && replayed == n,
        format!("{n} clauses; isolated {isolated}/{n}; replayed {replayed}/{n}; coupled: [{}]", coupled.join("; ")),
    )
}

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut out: Vec<PathBuf> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == "vk")).collect();
    out.sort();
    out
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let files = fixtures();
    for p in &files {
        let text = std::fs::read_to_string(p).unwrap();
        let s = parse(&text).unwrap().structure;
        let canon = serialize(&s).unwrap();
        if canon != text || parse(&canon).unwrap().structure != s {
            bad.push(format!("{} round trip", p.display()));
        }
        let run = |threads: &str| {
            Command::new(env!("CARGO_BIN_EXE_vakit"))
                .args(["check", p.to_str().unwrap(), "--no-timing", "--threads", threads])
                .output()
                .unwrap()
                .stdout
        };
        let first = run("1");
        if first != run("1") || first != run("4") {
            bad.push(format!("{} report differs", p.display()));
        }
    }
    ok(bad.is_empty(), format!("{} fixtures; failures: [{}]", files.len(), bad.join("; ")))
}

fn main() {
    // (number, name, check, expected to pass here)
    type Row = (u32, &'static str, fn() -> Outcome, bool);
    let criteria: [Row; 8] = [
        (1, "fixture_soundness", criterion_1, false),
        (2, "duality_round_trip", criterion_2, true),
        (3, "c2_theorems", criterion_3, true),
        (4, "duality_isomorphisms", criterion_4, true),
        (5, "beta_landscape", criterion_5, true),
        (6, "binomial_and_associativity", criterion_6, false),
        (7, "negative_coverage", criterion_7, false),
        (8, "determinism_round_trip", criterion_8, true),
    ];
    let mut regressions = Vec::new();
    for (n, name, f, expected) in criteria {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        println!("{} criterion {n} {name} ({secs:.2}s): {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if expected && !o.pass {
            regressions.push(n);
        }
    }
    if !regressions.is_empty() {
        eprintln!("criteria expected to pass failed: {regressions:?}");
        std::process::exit(1);
    }
}
