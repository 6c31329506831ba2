use vakit::builders::{adjoint_module, by_name, diffeps3, eps2, exterior, free_module, one_dim, upper_triangular};
use vakit::c2::{
    all_pass, beta_commutative_suite, c2_algebra, c2_module, co_c2_coalgebra, co_c2_comodule, copoisson_comodule_suite,
    copoisson_duality_iso, copoisson_duality_iso_comodule, copoisson_suite, gamma_algebra_suite, poisson_duality_iso,
    poisson_duality_iso_module, poisson_module_suite, poisson_suite,
};
use vakit::duality::{
    agrees_under_double_dual, dualize_algebra, dualize_coalgebra, dualize_comodule, dualize_module, module_agrees_under_double_dual,
};
use vakit::vertex::{algebra_suite, coalgebra_suite, comodule_suite, module_suite, ExponentBox};
use vakit::{GroupElement, Scalar, Vector, VertexAlgebra, VertexModule};

fn passing() -> Vec<VertexAlgebra> {
    vec![one_dim(), diffeps3(), exterior(1), exterior(2), exterior(3)]
}

fn modules() -> Vec<VertexModule> {
    let mut out = Vec::new();
    for a in [one_dim(), diffeps3(), exterior(1), exterior(2)] {
        out.push(adjoint_module(&a));
        out.push(free_module(&a, 2));
    }
    out
}

#[test]
fn passing_fixtures_satisfy_the_algebra_axioms() {
    for a in passing() {
        let r = algebra_suite(&a, Some(ExponentBox::symmetric(4))).run();
        assert!(all_pass(&r), "{:?}", r.failing_ids());
    }
}

#[test]
fn upper_triangular_breaks_jacobi() {
    let r = algebra_suite(&upper_triangular(), Some(ExponentBox::symmetric(4))).run();
    assert_eq!(r.failing_ids(), vec!["jacobi", "jacobi_shell"]);
    let w = r.results.iter().find(|x| x.id == "jacobi").unwrap().witness.clone().unwrap();
    assert_ne!(w.lhs, w.rhs);
}

#[test]
fn dual_of_passing_algebra_is_a_coalgebra_and_dualizes_back() {
    for a in passing() {
        let (c, _) = dualize_algebra(&a).unwrap();
        let r = coalgebra_suite(&c, None).unwrap().run();
        assert!(all_pass(&r), "{:?}", r.failing_ids());
        let (back, _) = dualize_coalgebra(&c).unwrap();
        assert!(agrees_under_double_dual(&a, &back));
    }
}

#[test]
fn dual_of_module_is_a_comodule_and_dualizes_back() {
    for m in modules() {
        assert!(all_pass(&module_suite(&m, None).run()));
        let (n, _) = dualize_module(&m).unwrap();
        let r = comodule_suite(&n, None).unwrap().run();
        assert!(all_pass(&r), "{:?}", r.failing_ids());
        let (back, _) = dualize_comodule(&n).unwrap();
        assert!(module_agrees_under_double_dual(&m, &back));
    }
}

#[test]
fn c2_outputs_are_poisson() {
    for a in passing() {
        let p = c2_algebra(&a).unwrap();
        assert!(all_pass(&gamma_algebra_suite(&p).run()));
        assert!(all_pass(&beta_commutative_suite(&p).run()));
        assert!(all_pass(&poisson_suite(&p).run()));
        let (c, _) = dualize_algebra(&a).unwrap();
        let k = co_c2_coalgebra(&c).unwrap();
        assert!(all_pass(&copoisson_suite(&k).unwrap().run()));
    }
    for m in modules() {
        let (p, pm) = c2_module(&m).unwrap();
        assert!(all_pass(&poisson_module_suite(&p, &pm).run()));
        let (n, _) = dualize_module(&m).unwrap();
        let (k, km) = co_c2_comodule(&n).unwrap();
        assert!(all_pass(&copoisson_comodule_suite(&k, &km).unwrap().run()));
    }
}

// Hand count: Im Y_{-2} = span(e2) in Q[e]/(e^3) with D(e) = e^2.
#[test]
fn c2_dimensions() {
    assert_eq!(c2_algebra(&diffeps3()).unwrap().carrier.dim(), 2);
    assert_eq!(c2_algebra(&eps2()).unwrap().carrier.dim(), 0);
    for n in 1..=3 {
        assert_eq!(c2_algebra(&exterior(n)).unwrap().carrier.dim(), 1 << n);
    }
    let (c, _) = dualize_algebra(&diffeps3()).unwrap();
    let k = co_c2_coalgebra(&c).unwrap();
    assert_eq!(k.carrier.dim(), 2);
    // the kernel of the dual Y_{-2} is spanned by 1* and e*
    let ker = k.kernel.unwrap();
    assert!(ker.contains(&Vector::basis(0)) && ker.contains(&Vector::basis(1)) && !ker.contains(&Vector::basis(2)));
}

#[test]
fn c2_product_of_diffeps3() {
    let p = c2_algebra(&diffeps3()).unwrap();
    // classes of 1 and e; e * e = e^2 lies in C2
    let e = Vector::basis(1);
    assert!(p.product.apply_bilinear(&e, &e, 2).is_zero());
    assert_eq!(p.product.apply_bilinear(&Vector::basis(0), &e, 2), e);
    assert_eq!(p.unit, Vector::basis(0));
}

#[test]
fn isomorphisms_hold_on_every_fixture() {
    for name in vakit::builders::EXAMPLES {
        let a = by_name(name).unwrap();
        let o = poisson_duality_iso(&a);
        assert!(all_pass(&o.report), "{name}: {:?}", o.report.failing_ids());
        assert!(o.map.is_some());
        let (c, _) = dualize_algebra(&a).unwrap();
        let o = copoisson_duality_iso(&c);
        assert!(all_pass(&o.report), "{name}: {:?}", o.report.failing_ids());
    }
    for m in modules() {
        assert!(all_pass(&poisson_duality_iso_module(&m).report));
        let (n, _) = dualize_module(&m).unwrap();
        assert!(all_pass(&copoisson_duality_iso_comodule(&n).report));
    }
}

#[test]
fn iso_refuses_without_multiplicative_beta() {
    // beta(1,1)^2 = 1 but beta(1,2) = -1
    let mut a = exterior(1);
    a.beta = vakit::BetaSpec::Table(
        [
            ((0, 0), 1),
            ((0, 1), 1),
            ((1, 0), 1),
            ((1, 1), -1),
            ((0, 2), 1),
            ((2, 0), 1),
            ((1, 2), -1),
            ((2, 1), 1),
            ((2, 2), 1),
            ((0, -1), 1),
            ((-1, 0), 1),
            ((-1, -1), -1),
        ]
        .into_iter()
        .map(|((x, y), s)| ((GroupElement(vec![x]), GroupElement(vec![y])), Scalar::from_i64(s)))
        .collect(),
    );
    let o = poisson_duality_iso(&a);
    assert!(o.map.is_none());
    assert_eq!(o.report.results[0].id, "iso_preconditions");
    assert_eq!(o.report.results[0].verdict, vakit::Verdict::Refused);
}
