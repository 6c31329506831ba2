use num::{BigInt, One, Zero};
use proptest::prelude::*;
use vakit::builders::{diffeps3, exterior, one_dim};
use vakit::c2::{c2_algebra, c2_subspace};
use vakit::graded::{double_dual_identify, intersect_tensor};
use vakit::scalars::{cyclotomic_polynomial, euler_phi};
use vakit::vertex::{binom_delta_suite, binom_delta_value};
use vakit::{GradedSpace, GradedSubspace, GroupElement, GroupSpec, Rational, Scalar, Vector, Verdict};

const CONDUCTORS: [u32; 7] = [1, 3, 4, 5, 8, 12, 24];

fn rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn elem(n: u32) -> impl Strategy<Value = Scalar> {
    prop::collection::vec(rat(), euler_phi(n)).prop_map(move |c| Scalar::from_coeffs(n, &c).unwrap())
}

fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| (elem(n), elem(n), elem(n)))
}

fn space(degs: &[i64]) -> GradedSpace {
    GradedSpace::new(
        GroupSpec::integers(),
        (0..degs.len()).map(|i| format!("b{i}")).collect(),
        degs.iter().map(|d| GroupElement(vec![*d])).collect(),
    )
    .unwrap()
}

fn degs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 1..=4)
}

fn coeff_vec(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-2i64..=2, dim).prop_map(|v| Vector::from_dense(&v.into_iter().map(Scalar::from_i64).collect::<Vec<_>>()))
}

/// A space with degrees `degs` and a random subspace.
fn with_subspace() -> impl Strategy<Value = (Vec<i64>, Vec<Vector>)> {
    degs().prop_flat_map(|d| {
        let n = d.len();
        (Just(d), prop::collection::vec(coeff_vec(n), 0..=3))
    })
}

fn mobius(n: u32) -> i32 {
    let (mut n, mut sign, mut p) = (n, 1, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[test]
fn cyclotomic_values_at_two_match_mobius_product() {
    for n in 1..=30u32 {
        let (mut num, mut den) = (BigInt::one(), BigInt::one());
        for d in (1..=n).filter(|d| n % d == 0) {
            let f = (BigInt::one() << d as usize) - 1;
            match mobius(n / d) {
                1 => num *= f,
                -1 => den *= f,
                _ => {}
            }
        }
        let poly = cyclotomic_polynomial(n);
        assert_eq!(poly.len() - 1, euler_phi(n), "degree of Phi_{n}");
        let at2 = poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * 2 + c);
        assert_eq!(&num % &den, BigInt::zero());
        assert_eq!(at2, num / den, "Phi_{n}(2)");
    }
}

#[test]
fn zeta_has_exact_order() {
    for n in CONDUCTORS.into_iter().chain([7, 9, 15]) {
        let z = Scalar::zeta(n).unwrap();
        assert!(z.pow(n as i64).unwrap().is_one());
        for k in 1..n as i64 {
            assert!(!z.pow(k).unwrap().is_one(), "zeta_{n}^{k}");
        }
        assert_eq!(z.pow(-1).unwrap().checked_mul(&z).unwrap(), Scalar::one());
    }
}

#[test]
fn binom_delta_over_the_acceptance_range() {
    let r = binom_delta_suite((-6, 6), (0, 8)).run();
    assert!(r.results.iter().all(|x| x.verdict == Verdict::Pass));
    // closed form: sum_i C(m,i) C(m-i,k-i) (-1)^(k-i) = C(m,k) (1-1)^k
    for m in -6..=6 {
        for k in 0..=8 {
            let expect = if k == 0 { Scalar::one() } else { Scalar::zero() };
            assert_eq!(binom_delta_value(m, k), expect);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        let add = |x: &Scalar, y: &Scalar| x.checked_add(y).unwrap();
        let mul = |x: &Scalar, y: &Scalar| x.checked_mul(y).unwrap();
        prop_assert_eq!(add(&a, &add(&b, &c)), add(&add(&a, &b), &c));
        prop_assert_eq!(mul(&a, &mul(&b, &c)), mul(&mul(&a, &b), &c));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        prop_assert!(add(&a, &a.neg_ref()).is_zero());
        if !a.is_zero() {
            prop_assert!(mul(&a, &a.checked_inv().unwrap()).is_one());
            prop_assert_eq!(mul(&b, &a).checked_div(&a).unwrap(), b.clone());
        } else {
            prop_assert!(a.checked_inv().is_err());
        }
    }

    #[test]
    fn scalar_display_parses_back((a, _, _) in triple()) {
        let text = a.to_string();
        prop_assert_eq!(Scalar::parse(&text, a.conductor().max(1)).unwrap(), a);
    }

    #[test]
    fn tensor_is_associative_on_shapes(a in degs(), b in degs(), c in degs()) {
        let (u, v, w) = (space(&a), space(&b), space(&c));
        let l = u.tensor(&v).unwrap().tensor(&w).unwrap();
        let r = u.tensor(&v.tensor(&w).unwrap()).unwrap();
        prop_assert_eq!(l.degrees(), r.degrees());
        prop_assert_eq!(l.dim(), a.len() * b.len() * c.len());
    }

    #[test]
    fn dual_is_an_involution(a in degs()) {
        let v = space(&a);
        let d = v.dual();
        for g in v.support() {
            prop_assert_eq!(d.dim_at(&GroupElement(vec![-g.0[0]])), v.dim_at(&g));
        }
        prop_assert!(d.dual().same_shape(&v));
        let id = double_dual_identify(&v);
        prop_assert!(id.check_homogeneous().is_ok());
        for i in 0..v.dim() {
            prop_assert_eq!(id.col(i), &Vector::basis(i));
        }
    }

    #[test]
    fn annihilator_has_complementary_dimension((d, gens) in with_subspace()) {
        let v = space(&d);
        let w = GradedSubspace::span(&v, gens);
        let ann = w.annihilator();
        prop_assert_eq!(ann.dim(), v.dim() - w.dim());
        for g in v.support() {
            let neg = GroupElement(vec![-g.0[0]]);
            prop_assert_eq!(ann.dim_at(&neg), v.dim_at(&g) - w.dim_at(&g));
        }
        // every functional kills every vector of w
        for f in ann.basis() {
            for x in w.basis() {
                let pair = x.entries().iter().fold(Scalar::zero(), |acc, (i, c)| acc + c * &f.coeff(*i));
                prop_assert!(pair.is_zero());
            }
        }
    }

    #[test]
    fn tensor_intersection_is_tensor_of_subspaces((d1, g1) in with_subspace(), (d2, g2) in with_subspace()) {
        let w1 = GradedSubspace::span(&space(&d1), g1);
        let w2 = GradedSubspace::span(&space(&d2), g2);
        let t = intersect_tensor(&w1, &w2).unwrap();
        prop_assert!(t.matches());
        prop_assert_eq!(t.intersection.dim(), w1.dim() * w2.dim());
    }

    #[test]
    fn quotient_lift_then_project_is_identity((d, gens) in with_subspace(), seed in prop::collection::vec(-3i64..=3, 4)) {
        let v = space(&d);
        let w = GradedSubspace::span(&v, gens);
        let q = w.quotient();
        let x = Vector::from_dense(&seed.into_iter().take(q.space().dim()).map(Scalar::from_i64).collect::<Vec<_>>());
        prop_assert_eq!(q.project(&q.lift(&x)), x);
        for b in w.basis() {
            prop_assert!(q.project(b).is_zero());
        }
    }

    /// The C2 product and bracket do not depend on which lifts are chosen.
    #[test]
    fn c2_operations_ignore_the_choice_of_lift(
        which in 0usize..4,
        xs in prop::collection::vec(-3i64..=3, 8),
        ys in prop::collection::vec(-3i64..=3, 8),
        cs in prop::collection::vec(-3i64..=3, 16),
    ) {
        let a = [one_dim(), diffeps3(), exterior(1), exterior(2)][which].clone();
        let p = c2_algebra(&a).unwrap();
        let q = p.quotient.clone().unwrap();
        let c2 = c2_subspace(&a);
        let n = p.carrier.dim();
        let class = |s: &[i64]| Vector::from_dense(&s[..n].iter().map(|v| Scalar::from_i64(*v)).collect::<Vec<_>>());
        let (x, y) = (class(&xs), class(&ys));
        let noise = |off: usize| {
            c2.basis().iter().enumerate().fold(Vector::zero(), |acc, (i, b)| acc.add_scaled(b, &Scalar::from_i64(cs[(off + i) % cs.len()])))
        };
        let lx = q.lift(&x).add(&noise(0));
        let ly = q.lift(&y).add(&noise(7));
        let dim = a.space.dim();
        let prod = q.project(&a.op(-1).unwrap().apply_bilinear(&lx, &ly, dim));
        prop_assert_eq!(prod, p.product.apply_bilinear(&x, &y, n));
        let br = a.op(0).map(|y0| q.project(&y0.apply_bilinear(&lx, &ly, dim))).unwrap_or_default();
        prop_assert_eq!(br, p.bracket.apply_bilinear(&x, &y, n));
    }
}
