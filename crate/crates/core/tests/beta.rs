use vakit::gamma::{beta_relation_suite, RelationKind};
use vakit::{BetaSpec, GroupSpec, Verdict};

use RelationKind::*;

fn verdicts(spec: &GroupSpec, beta: &BetaSpec) -> Vec<(RelationKind, Verdict)> {
    let dom = spec.box_elements(-3, 3);
    let g0 = spec.zero();
    let r = beta_relation_suite(spec, beta, &g0, &RelationKind::ALL, &dom).run();
    RelationKind::ALL.into_iter().zip(r.results.into_iter().map(|x| x.verdict)).collect()
}

fn landscape(spec: &GroupSpec, form: Vec<Vec<i64>>) {
    for (rel, v) in verdicts(spec, &BetaSpec::One) {
        assert_eq!(v, Verdict::Pass, "One {rel:?}");
    }
    for (rel, v) in verdicts(spec, &BetaSpec::Sign(form)) {
        if rel != Unit2Gamma0Left {
            assert_eq!(v, Verdict::Pass, "Sign {rel:?}");
        }
    }
    for (rel, v) in verdicts(spec, &BetaSpec::Zero) {
        match rel {
            Parity | Multiplicative | Cocycle => assert_eq!(v, Verdict::Pass, "Zero {rel:?}"),
            UnitRight | InverseSym => assert_eq!(v, Verdict::Fail, "Zero {rel:?}"),
            _ => {}
        }
    }
}

#[test]
fn landscape_on_integers() {
    landscape(&GroupSpec::integers(), vec![vec![1]]);
}

#[test]
fn landscape_on_rank_two() {
    landscape(&GroupSpec::new(2, vec![]), vec![vec![1, 0], vec![0, 1]]);
}

// B + B^T odd off the diagonal
#[test]
fn asymmetric_sign_form_is_not_inverse_symmetric() {
    let spec = GroupSpec::new(2, vec![]);
    let v = verdicts(&spec, &BetaSpec::Sign(vec![vec![1, 1], vec![0, 1]]));
    assert!(v.contains(&(InverseSym, Verdict::Fail)));
    assert!(v.contains(&(Multiplicative, Verdict::Pass)));
}

#[test]
fn failing_relation_has_a_witness() {
    let spec = GroupSpec::integers();
    let r = beta_relation_suite(&spec, &BetaSpec::Zero, &spec.zero(), &[UnitRight], &spec.box_elements(-3, 3)).run();
    let w = r.results[0].witness.clone().unwrap();
    assert_ne!(w.lhs, w.rhs);
}
