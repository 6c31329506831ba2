//! C2 quotients and kernels with their (co-)Poisson structures, the standalone axiom
//! checkers for (co-)Poisson (co)algebras and (co)modules, and the duality isomorphisms
//! between them.

use thiserror::Error;

use crate::duality::{
    dual_of_coproduct, dual_of_product, dualize_algebra, dualize_coalgebra, dualize_comodule, dualize_module, DualityError,
};
use crate::gamma::{check_beta_relation, BetaSpec, GroupElement, RelationKind};
use crate::graded::{intersect_tensor, nullspace, xi_beta, GradedError, GradedMap, GradedSpace, GradedSubspace, Quotient, Vector};
use crate::report::{AxiomResult, CheckReport, Clause, Suite, Verdict};
use crate::scalars::{Rational, Scalar};
use crate::vertex::{
    beta_at, counit_left, counit_right, hypothesis_domain, left_apply, names, power_apply, right_apply, swap, swap_last_two, VertexAlgebra,
    VertexCoalgebra, VertexComodule, VertexModule,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum C2Error {
    #[error("induced operations are not well defined: {}", .0.failing_ids().join(", "))]
    NotWellDefined(CheckReport),
    #[error("cooperations do not preserve the kernel: {}", .0.failing_ids().join(", "))]
    NotContained(CheckReport),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Duality(#[from] DualityError),
}

/// Carrier with product, unit and bracket; C2 outputs also record their quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonAlgebra {
    pub carrier: GradedSpace,
    pub product: GradedMap,
    pub unit: Vector,
    pub bracket: GradedMap,
    pub beta: BetaSpec,
    pub quotient: Option<Quotient>,
}

/// Left module over a [`PoissonAlgebra`]: action and Lie action A (x) M -> M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonModule {
    pub carrier: GradedSpace,
    pub action: GradedMap,
    pub lie_action: GradedMap,
    pub quotient: Option<Quotient>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoPoissonCoalgebra {
    pub carrier: GradedSpace,
    pub coproduct: GradedMap,
    /// Counit as a functional: coefficient i is its value on basis vector i.
    pub counit: Vector,
    pub cobracket: GradedMap,
    pub beta: BetaSpec,
    pub kernel: Option<GradedSubspace>,
}

/// Right comodule: coaction and Lie coaction M -> M (x) C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoPoissonComodule {
    pub carrier: GradedSpace,
    pub coaction: GradedMap,
    pub lie_coaction: GradedMap,
    pub kernel: Option<GradedSubspace>,
}

fn op_or_zero(
    ops: &std::collections::BTreeMap<i64, GradedMap>,
    n: i64,
    source: &GradedSpace,
    target: &GradedSpace,
    degree: GroupElement,
) -> GradedMap {
    ops.get(&n).cloned().unwrap_or_else(|| GradedMap::zero(source, target, degree))
}

fn y_op(a: &VertexAlgebra, n: i64) -> GradedMap {
    let vv = a.space.tensor(&a.space).expect("same spec");
    op_or_zero(&a.ops, n, &vv, &a.space, a.spec().scale(n, &a.gamma0))
}

fn coy_op(c: &VertexCoalgebra, n: i64) -> GradedMap {
    let vv = c.space.tensor(&c.space).expect("same spec");
    op_or_zero(&c.coops, n, &c.space, &vv, c.spec().scale(n, &c.gamma0))
}

fn ym_op(m: &VertexModule, n: i64) -> GradedMap {
    let vm = m.base.space.tensor(&m.mspace).expect("same spec");
    op_or_zero(&m.mops, n, &vm, &m.mspace, m.base.spec().scale(n, &m.base.gamma0))
}

fn coym_op(m: &VertexComodule, n: i64) -> GradedMap {
    let mv = m.mspace.tensor(&m.base.space).expect("same spec");
    op_or_zero(&m.comops, n, &m.mspace, &mv, m.base.spec().scale(n, &m.base.gamma0))
}

/// C2(V) = Im Y_{-2}.
pub fn c2_subspace(a: &VertexAlgebra) -> GradedSubspace {
    GradedSubspace::image(&y_op(a, -2))
}

/// C2(M) = Im Y^M_{-2}.
pub fn c2_subspace_module(m: &VertexModule) -> GradedSubspace {
    GradedSubspace::image(&ym_op(m, -2))
}

/// Ker Y_{-2} for a coalgebra.
pub fn co_c2_subspace(c: &VertexCoalgebra) -> GradedSubspace {
    GradedSubspace::kernel(&coy_op(c, -2))
}

pub fn co_c2_subspace_comodule(m: &VertexComodule) -> GradedSubspace {
    GradedSubspace::kernel(&coym_op(m, -2))
}

fn inv_factorial(j: i64) -> Scalar {
    Scalar::from_rational(Rational::new(1.into(), crate::scalars::factorial(j as u64)))
}

fn lower_modes(window: &crate::vertex::Window) -> Vec<Vec<i64>> {
    (0..).map(|n: i64| -2 - n).take_while(|k| *k >= window.lo).filter(|k| window.contains(*k)).map(|k| vec![-2 - k]).collect()
}

// ---------------------------------------------------------------------------
// higher modes

/// Y_{-2-n} = Y_{-2}(D (x) id)^n / (n+1)! and Im Y_{-2-n} inside C2(V).
pub fn lemma_higher_modes(a: &VertexAlgebra) -> Suite<'_> {
    let mut s = Suite::new("c2");
    let v = a.space.clone();
    let d = a.derive_d();
    let dv = a.dim();
    let c2 = c2_subspace(a);
    let ns = lower_modes(&a.window);
    let y = move |n: i64| a.op(n);
    let d1 = d.clone();
    s.push_clause(Clause::new(
        "higher_modes",
        "higher_modes",
        names(&["n"]),
        ns.clone(),
        vec![v.clone(), v.clone()],
        Some(v.clone()),
        move |e, idx| {
            let n = e[0];
            let (ep, eq) = (Vector::basis(idx[0]), Vector::basis(idx[1]));
            let lhs = y(-2 - n).map_or_else(Vector::zero, |f| f.apply_bilinear(&ep, &eq, dv));
            let rhs =
                y(-2).map_or_else(Vector::zero, |f| f.apply_bilinear(&power_apply(&d1, &ep, n), &eq, dv)).scale(&inv_factorial(n + 1));
            Ok((lhs, rhs))
        },
    ));
    s.push_clause(Clause::new("higher_modes_c2", "higher_modes", names(&["n"]), ns, vec![v.clone(), v.clone()], Some(v), move |e, idx| {
        let img = y(-2 - e[0]).map_or_else(Vector::zero, |f| f.apply_bilinear(&Vector::basis(idx[0]), &Vector::basis(idx[1]), dv));
        Ok((c2.reduce(&img), Vector::zero()))
    }));
    s
}

/// Y_{-2-n} = (id (x) D)^n Y_{-2} / (n+1)! and Ker Y_{-2} inside Ker Y_{-2-n}.
pub fn lemma_higher_modes_coalgebra(c: &VertexCoalgebra) -> Result<Suite<'_>, GradedError> {
    let mut s = Suite::new("c2");
    let v = c.space.clone();
    let vv = v.tensor(&v)?;
    let d = c.derive_d();
    let dv = c.dim();
    let ns = lower_modes(&c.window);
    let kernel = co_c2_subspace(c);
    let kspace = kernel.as_space();
    let y = move |n: i64| c.coop(n);
    s.push_clause(Clause::new(
        "co_higher_modes",
        "co_higher_modes",
        names(&["n"]),
        ns.clone(),
        vec![v.clone()],
        Some(vv.clone()),
        move |e, idx| {
            let n = e[0];
            let ep = Vector::basis(idx[0]);
            let lhs = y(-2 - n).map_or_else(Vector::zero, |f| f.apply(&ep));
            let mut rhs = y(-2).map_or_else(Vector::zero, |f| f.apply(&ep));
            for _ in 0..n {
                rhs = right_apply(|k| d.col(k).clone(), &rhs, dv, dv);
            }
            Ok((lhs, rhs.scale(&inv_factorial(n + 1))))
        },
    ));
    let basis = kernel.basis().to_vec();
    s.push_clause(Clause::new("co_higher_modes_kernel", "co_higher_modes", names(&["n"]), ns, vec![kspace], Some(vv), move |e, idx| {
        Ok((y(-2 - e[0]).map_or_else(Vector::zero, |f| f.apply(&basis[idx[0]])), Vector::zero()))
    }));
    Ok(s)
}

pub fn lemma_higher_modes_module(m: &VertexModule) -> Suite<'_> {
    let mut s = Suite::new("c2");
    let (v, x) = (m.base.space.clone(), m.mspace.clone());
    let d = m.base.derive_d();
    let dx = m.dim();
    let c2 = c2_subspace_module(m);
    let ns = lower_modes(&m.window);
    let y = move |n: i64| m.mop(n);
    s.push_clause(Clause::new(
        "higher_modes_mod",
        "module_higher_modes",
        names(&["n"]),
        ns.clone(),
        vec![v.clone(), x.clone()],
        Some(x.clone()),
        move |e, idx| {
            let n = e[0];
            let (ep, em) = (Vector::basis(idx[0]), Vector::basis(idx[1]));
            let lhs = y(-2 - n).map_or_else(Vector::zero, |f| f.apply_bilinear(&ep, &em, dx));
            let rhs = y(-2).map_or_else(Vector::zero, |f| f.apply_bilinear(&power_apply(&d, &ep, n), &em, dx)).scale(&inv_factorial(n + 1));
            Ok((lhs, rhs))
        },
    ));
    s.push_clause(Clause::new(
        "higher_modes_mod_c2",
        "module_higher_modes",
        names(&["n"]),
        ns,
        vec![v, x.clone()],
        Some(x),
        move |e, idx| {
            let img = y(-2 - e[0]).map_or_else(Vector::zero, |f| f.apply_bilinear(&Vector::basis(idx[0]), &Vector::basis(idx[1]), dx));
            Ok((c2.reduce(&img), Vector::zero()))
        },
    ));
    s
}

pub fn lemma_higher_modes_comodule(m: &VertexComodule) -> Result<Suite<'_>, GradedError> {
    let mut s = Suite::new("c2");
    let x = m.mspace.clone();
    let xv = x.tensor(&m.base.space)?;
    let d = m.base.derive_d();
    let dv = m.base.dim();
    let ns = lower_modes(&m.window);
    let kernel = co_c2_subspace_comodule(m);
    let kspace = kernel.as_space();
    let y = move |n: i64| m.comop(n);
    s.push_clause(Clause::new(
        "co_higher_modes_mod",
        "comodule_higher_modes",
        names(&["n"]),
        ns.clone(),
        vec![x.clone()],
        Some(xv.clone()),
        move |e, idx| {
            let n = e[0];
            let em = Vector::basis(idx[0]);
            let lhs = y(-2 - n).map_or_else(Vector::zero, |f| f.apply(&em));
            let mut rhs = y(-2).map_or_else(Vector::zero, |f| f.apply(&em));
            for _ in 0..n {
                rhs = right_apply(|k| d.col(k).clone(), &rhs, dv, dv);
            }
            Ok((lhs, rhs.scale(&inv_factorial(n + 1))))
        },
    ));
    let basis = kernel.basis().to_vec();
    s.push_clause(Clause::new(
        "co_higher_modes_mod_kernel",
        "comodule_higher_modes",
        names(&["n"]),
        ns,
        vec![kspace],
        Some(xv),
        move |e, idx| Ok((y(-2 - e[0]).map_or_else(Vector::zero, |f| f.apply(&basis[idx[0]])), Vector::zero())),
    ));
    Ok(s)
}

// ---------------------------------------------------------------------------
// C2 algebra and module

/// Congruences making Y_{-1} and Y_0 descend to V / C2(V).
pub fn c2_well_definedness(a: &VertexAlgebra) -> Suite<'_> {
    let mut s = Suite::new("c2");
    let v = a.space.clone();
    let dv = a.dim();
    let c2 = c2_subspace(a);
    let y2 = y_op(a, -2);
    for (n, name) in [(-1, "product"), (0, "bracket")] {
        let y = y_op(a, n);
        for right in [true, false] {
            let (y, y2, c2) = (y.clone(), y2.clone(), c2.clone());
            let id = format!("c2_{name}_{}", if right { "right" } else { "left" });
            s.push_clause(Clause::new(&id, "c2_congruence", vec![], vec![vec![]], vec![v.clone(); 3], Some(v.clone()), move |_, idx| {
                let inner = y2.apply_bilinear(&Vector::basis(idx[1]), &Vector::basis(idx[2]), dv);
                let out = if right {
                    y.apply_bilinear(&Vector::basis(idx[0]), &inner, dv)
                } else {
                    y.apply_bilinear(&inner, &Vector::basis(idx[0]), dv)
                };
                Ok((c2.reduce(&out), Vector::zero()))
            }));
        }
    }
    s
}

fn induced(q: &Quotient, f: &GradedMap, dv: usize) -> GradedMap {
    let reps = q.representatives();
    let d = reps.len();
    let cols = (0..d * d).map(|k| q.project(&f.apply_bilinear(&Vector::basis(reps[k / d]), &Vector::basis(reps[k % d]), dv))).collect();
    let qq = q.space().tensor(q.space()).expect("same spec");
    GradedMap::new_unchecked(qq, q.space().clone(), f.degree().clone(), cols).expect("shape")
}

pub fn c2_algebra(a: &VertexAlgebra) -> Result<PoissonAlgebra, C2Error> {
    let wd = c2_well_definedness(a).run();
    if !wd.passed() {
        return Err(C2Error::NotWellDefined(wd));
    }
    let q = c2_subspace(a).quotient();
    let dv = a.dim();
    Ok(PoissonAlgebra {
        carrier: q.space().clone(),
        product: induced(&q, &y_op(a, -1), dv),
        unit: q.project(&a.vacuum),
        bracket: induced(&q, &y_op(a, 0), dv),
        beta: a.beta.clone(),
        quotient: Some(q),
    })
}

pub fn c2_module_well_definedness(m: &VertexModule) -> Suite<'_> {
    let mut s = Suite::new("c2");
    let (v, x) = (m.base.space.clone(), m.mspace.clone());
    let (dv, dx) = (m.base.dim(), m.dim());
    let c2m = c2_subspace_module(m);
    let ym2 = ym_op(m, -2);
    let y2 = y_op(&m.base, -2);
    for (n, name) in [(-1, "action"), (0, "lie_action")] {
        let y = ym_op(m, n);
        let (yr, ym2r, c2r) = (y.clone(), ym2.clone(), c2m.clone());
        s.push_clause(Clause::new(
            &format!("c2m_{name}_right"),
            "c2_module_congruence",
            vec![],
            vec![vec![]],
            vec![v.clone(), v.clone(), x.clone()],
            Some(x.clone()),
            move |_, idx| {
                let inner = ym2r.apply_bilinear(&Vector::basis(idx[1]), &Vector::basis(idx[2]), dx);
                Ok((c2r.reduce(&yr.apply_bilinear(&Vector::basis(idx[0]), &inner, dx)), Vector::zero()))
            },
        ));
        let (yl, y2l, c2l) = (y, y2.clone(), c2m.clone());
        s.push_clause(Clause::new(
            &format!("c2m_{name}_left"),
            "c2_module_congruence",
            vec![],
            vec![vec![]],
            vec![v.clone(), v.clone(), x.clone()],
            Some(x.clone()),
            move |_, idx| {
                let inner = y2l.apply_bilinear(&Vector::basis(idx[0]), &Vector::basis(idx[1]), dv);
                Ok((c2l.reduce(&yl.apply_bilinear(&inner, &Vector::basis(idx[2]), dx)), Vector::zero()))
            },
        ));
    }
    s
}

/// R(V) and R(M) = M / C2(M) with the induced action and Lie action.
pub fn c2_module(m: &VertexModule) -> Result<(PoissonAlgebra, PoissonModule), C2Error> {
    let base = c2_algebra(&m.base)?;
    let wd = c2_module_well_definedness(m).run();
    if !wd.passed() {
        return Err(C2Error::NotWellDefined(wd));
    }
    let qv = base.quotient.clone().expect("c2 output");
    let qm = c2_subspace_module(m).quotient();
    let dx = m.dim();
    let induce = |f: &GradedMap| {
        let (rv, rm) = (qv.representatives(), qm.representatives());
        let dm = rm.len();
        let cols =
            (0..rv.len() * dm).map(|k| qm.project(&f.apply_bilinear(&Vector::basis(rv[k / dm]), &Vector::basis(rm[k % dm]), dx))).collect();
        GradedMap::new_unchecked(qv.space().tensor(qm.space()).expect("same spec"), qm.space().clone(), f.degree().clone(), cols)
            .expect("shape")
    };
    let module =
        PoissonModule { carrier: qm.space().clone(), action: induce(&ym_op(m, -1)), lie_action: induce(&ym_op(m, 0)), quotient: Some(qm) };
    Ok((base, module))
}

// ---------------------------------------------------------------------------
// C2 coalgebra and comodule

/// Coordinates of x in K1 (x) K2 in the basis r_s (x) t_t, read off at pivot pairs.
fn pivot_coordinates(x: &Vector, k1: &GradedSubspace, k2: &GradedSubspace) -> Vector {
    let d2 = k2.ambient().dim();
    let (p1, p2) = (k1.pivots(), k2.pivots());
    let mut entries = Vec::new();
    for (s, a) in p1.iter().enumerate() {
        for (t, b) in p2.iter().enumerate() {
            let c = x.coeff(a * d2 + b);
            if !c.is_zero() {
                entries.push((s * p2.len() + t, c));
            }
        }
    }
    Vector::from_entries(entries)
}

fn restrict(f: &GradedMap, k: &GradedSubspace, k1: &GradedSubspace, k2: &GradedSubspace) -> Result<GradedMap, GradedError> {
    let cols = k.basis().iter().map(|r| pivot_coordinates(&f.apply(r), k1, k2)).collect();
    GradedMap::new_unchecked(k.as_space(), k1.as_space().tensor(&k2.as_space())?, f.degree().clone(), cols)
}

/// Containment of Y_{-1} and Y_0 images of Ker Y_{-2} in Ker Y_{-2} (x) Ker Y_{-2}.
pub fn co_c2_containment(c: &VertexCoalgebra) -> Result<Suite<'_>, GradedError> {
    let mut s = Suite::new("c2");
    let v = c.space.clone();
    let vv = v.tensor(&v)?;
    let dv = c.dim();
    let kernel = co_c2_subspace(c);
    let ti = intersect_tensor(&kernel, &kernel)?;
    let lemma = if ti.matches() {
        AxiomResult::pass("kernel_tensor_intersection", "tensor_intersection", 1)
    } else {
        AxiomResult::fail("kernel_tensor_intersection", "tensor_intersection", "intersection differs from K (x) K")
    };
    s.push(lemma);
    let kspace = kernel.as_space();
    let y2 = coy_op(c, -2);
    for (n, name) in [(-1, "coproduct"), (0, "cobracket")] {
        let y = coy_op(c, n);
        let basis = kernel.basis().to_vec();
        let (yl, y2l, bl) = (y.clone(), y2.clone(), basis.clone());
        s.push_clause(Clause::new(
            &format!("co_c2_{name}_left"),
            "co_c2_containment",
            vec![],
            vec![vec![]],
            vec![kspace.clone()],
            Some(vv.tensor(&v)?),
            move |_, idx| {
                let w = yl.apply(&bl[idx[0]]);
                Ok((left_apply(|k| y2l.col(k).clone(), &w, dv), Vector::zero()))
            },
        ));
        let (yr, y2r, br) = (y.clone(), y2.clone(), basis.clone());
        s.push_clause(Clause::new(
            &format!("co_c2_{name}_right"),
            "co_c2_containment",
            vec![],
            vec![vec![]],
            vec![kspace.clone()],
            Some(v.tensor(&vv)?),
            move |_, idx| {
                let w = yr.apply(&br[idx[0]]);
                Ok((right_apply(|k| y2r.col(k).clone(), &w, dv, dv * dv), Vector::zero()))
            },
        ));
        let inter = ti.intersection.clone();
        s.push_clause(Clause::new(
            &format!("co_c2_{name}_carrier"),
            "co_c2_containment",
            vec![],
            vec![vec![]],
            vec![kspace.clone()],
            Some(vv.clone()),
            move |_, idx| Ok((inter.reduce(&y.apply(&basis[idx[0]])), Vector::zero())),
        ));
    }
    Ok(s)
}

pub fn co_c2_coalgebra(c: &VertexCoalgebra) -> Result<CoPoissonCoalgebra, C2Error> {
    let rep = co_c2_containment(c)?.run();
    if !rep.passed() {
        return Err(C2Error::NotContained(rep));
    }
    let kernel = co_c2_subspace(c);
    let counit = Vector::from_entries(
        kernel
            .basis()
            .iter()
            .enumerate()
            .map(|(s, r)| {
                let mut acc = Scalar::zero();
                for (i, x) in r.entries() {
                    acc += &(x * &c.covacuum.coeff(*i));
                }
                (s, acc)
            })
            .collect(),
    );
    Ok(CoPoissonCoalgebra {
        carrier: kernel.as_space(),
        coproduct: restrict(&coy_op(c, -1), &kernel, &kernel, &kernel)?,
        counit,
        cobracket: restrict(&coy_op(c, 0), &kernel, &kernel, &kernel)?,
        beta: c.beta.clone(),
        kernel: Some(kernel),
    })
}

pub fn co_c2_comodule_containment(m: &VertexComodule) -> Result<Suite<'_>, GradedError> {
    let mut s = Suite::new("c2");
    let x = m.mspace.clone();
    let v = m.base.space.clone();
    let xv = x.tensor(&v)?;
    let dv = m.base.dim();
    let km = co_c2_subspace_comodule(m);
    let kv = co_c2_subspace(&m.base);
    let ti = intersect_tensor(&km, &kv)?;
    s.push(if ti.matches() {
        AxiomResult::pass("comodule_tensor_intersection", "tensor_intersection", 1)
    } else {
        AxiomResult::fail("comodule_tensor_intersection", "tensor_intersection", "intersection differs from K_M (x) K_V")
    });
    let kspace = km.as_space();
    let ym2 = coym_op(m, -2);
    let y2 = coy_op(&m.base, -2);
    for (n, name) in [(-1, "coaction"), (0, "lie_coaction")] {
        let y = coym_op(m, n);
        let basis = km.basis().to_vec();
        let (yl, ym2l, bl) = (y.clone(), ym2.clone(), basis.clone());
        s.push_clause(Clause::new(
            &format!("co_c2m_{name}_left"),
            "co_c2_comodule_containment",
            vec![],
            vec![vec![]],
            vec![kspace.clone()],
            Some(xv.tensor(&v)?),
            move |_, idx| Ok((left_apply(|k| ym2l.col(k).clone(), &yl.apply(&bl[idx[0]]), dv), Vector::zero())),
        ));
        let (yr, y2r, br) = (y.clone(), y2.clone(), basis.clone());
        s.push_clause(Clause::new(
            &format!("co_c2m_{name}_right"),
            "co_c2_comodule_containment",
            vec![],
            vec![vec![]],
            vec![kspace.clone()],
            Some(x.tensor(&v.tensor(&v)?)?),
            move |_, idx| Ok((right_apply(|k| y2r.col(k).clone(), &yr.apply(&br[idx[0]]), dv, dv * dv), Vector::zero())),
        ));
        let inter = ti.intersection.clone();
        s.push_clause(Clause::new(
            &format!("co_c2m_{name}_carrier"),
            "co_c2_comodule_containment",
            vec![],
            vec![vec![]],
            vec![kspace.clone()],
            Some(xv.clone()),
            move |_, idx| Ok((inter.reduce(&y.apply(&basis[idx[0]])), Vector::zero())),
        ));
    }
    Ok(s)
}

/// R(V) for the base coalgebra and R(M) = Ker Y^M_{-2} with the restricted coactions.
pub fn co_c2_comodule(m: &VertexComodule) -> Result<(CoPoissonCoalgebra, CoPoissonComodule), C2Error> {
    let base = co_c2_coalgebra(&m.base)?;
    let rep = co_c2_comodule_containment(m)?.run();
    if !rep.passed() {
        return Err(C2Error::NotContained(rep));
    }
    let km = co_c2_subspace_comodule(m);
    let kv = base.kernel.clone().expect("c2 output");
    let module = CoPoissonComodule {
        carrier: km.as_space(),
        coaction: restrict(&coym_op(m, -1), &km, &km, &kv)?,
        lie_coaction: restrict(&coym_op(m, 0), &km, &km, &kv)?,
        kernel: Some(km),
    };
    Ok((base, module))
}

// ---------------------------------------------------------------------------
// standalone checkers: algebras, Lie algebras, Poisson algebras

type Triple = (usize, usize, usize);

/// f(g (x) id) on a vector of A (x) B (x) X with g: A (x) B -> C, f: C (x) X -> Y.
fn comp_left(f: &GradedMap, g: &GradedMap, t: &Vector, dims: Triple) -> Vector {
    let (_, d2, d3) = dims;
    let mut out = Vector::zero();
    for (k, c) in t.entries() {
        let (ab, x) = (k / d3, k % d3);
        let inner = g.apply_bilinear(&Vector::basis(ab / d2), &Vector::basis(ab % d2), d2);
        out.add_scaled_assign(&f.apply_bilinear(&inner, &Vector::basis(x), d3), c);
    }
    out
}

/// f(id (x) g) on a vector of A (x) B (x) X with g: B (x) X -> C, f: A (x) C -> Y.
fn comp_right(f: &GradedMap, g: &GradedMap, t: &Vector, dims: Triple) -> Vector {
    let (_, d2, d3) = dims;
    let dc = g.target().dim();
    let mut out = Vector::zero();
    for (k, c) in t.entries() {
        let (a, bx) = (k / (d2 * d3), k % (d2 * d3));
        let inner = g.apply_bilinear(&Vector::basis(bx / d3), &Vector::basis(bx % d3), d3);
        out.add_scaled_assign(&f.apply_bilinear(&Vector::basis(a), &inner, dc), c);
    }
    out
}

fn triple(idx: &[usize], dims: Triple) -> Vector {
    Vector::basis((idx[0] * dims.1 + idx[1]) * dims.2 + idx[2])
}

/// (T^beta (x) id_X) on A (x) A (x) X.
fn swap_first_two(t: &Vector, a: &GradedSpace, dx: usize, beta: &BetaSpec) -> Result<Vector, String> {
    let da = a.dim();
    let mut entries = Vec::new();
    for (k, c) in t.entries() {
        let (p, q, x) = (k / (da * dx), (k / dx) % da, k % dx);
        let f = beta_at(beta, a.degree(p), a.degree(q))?;
        if !f.is_zero() {
            entries.push(((q * da + p) * dx + x, c * &f));
        }
    }
    Ok(Vector::from_entries(entries))
}

fn xi_or_err(v: &GradedSpace, beta: &BetaSpec) -> Result<GradedMap, String> {
    xi_beta(v, beta).map_err(|e| e.to_string())
}

/// Associativity and the two unit laws.
pub fn gamma_algebra_suite(p: &PoissonAlgebra) -> Suite<'_> {
    let mut s = Suite::new("poisson");
    let c = p.carrier.clone();
    let d = c.dim();
    let dims = (d, d, d);
    let pr = &p.product;
    s.push_clause(Clause::new(
        "associativity",
        "algebra_associativity",
        vec![],
        vec![vec![]],
        vec![c.clone(); 3],
        Some(c.clone()),
        move |_, idx| {
            let t = triple(idx, dims);
            Ok((comp_left(pr, pr, &t, dims), comp_right(pr, pr, &t, dims)))
        },
    ));
    let unit = &p.unit;
    s.push_clause(Clause::new("unit_left", "algebra_unit", vec![], vec![vec![]], vec![c.clone()], Some(c.clone()), move |_, idx| {
        Ok((pr.apply_bilinear(unit, &Vector::basis(idx[0]), d), Vector::basis(idx[0])))
    }));
    s.push_clause(Clause::new("unit_right", "algebra_unit", vec![], vec![vec![]], vec![c.clone()], Some(c), move |_, idx| {
        Ok((pr.apply_bilinear(&Vector::basis(idx[0]), unit, d), Vector::basis(idx[0])))
    }));
    s
}

pub fn beta_commutative_suite(p: &PoissonAlgebra) -> Suite<'_> {
    let mut s = Suite::new("poisson");
    let c = p.carrier.clone();
    let d = c.dim();
    let (pr, beta, cs) = (&p.product, &p.beta, c.clone());
    s.push_clause(Clause::new(
        "beta_commutativity",
        "beta_commutativity",
        vec![],
        vec![vec![]],
        vec![c.clone(), c.clone()],
        Some(c),
        move |_, idx| {
            let t = swap(&Vector::basis(idx[0] * d + idx[1]), &cs, beta)?;
            Ok((pr.apply(&t), pr.apply_bilinear(&Vector::basis(idx[0]), &Vector::basis(idx[1]), d)))
        },
    ));
    s
}

/// Skew-symmetry and Jacobi for a bracket on any carrier.
pub fn lie_suite<'a>(carrier: &GradedSpace, bracket: &'a GradedMap, beta: &'a BetaSpec) -> Suite<'a> {
    let mut s = Suite::new("lie");
    let c = carrier.clone();
    let d = c.dim();
    let dims = (d, d, d);
    let cs = c.clone();
    s.push_clause(Clause::new("lie_skew", "lie_skew", vec![], vec![vec![]], vec![c.clone(), c.clone()], Some(c.clone()), move |_, idx| {
        let e = Vector::basis(idx[0] * d + idx[1]);
        Ok((bracket.apply(&e).add(&bracket.apply(&swap(&e, &cs, beta)?)), Vector::zero()))
    }));
    let cs = c.clone();
    s.push_clause(Clause::new("lie_jacobi", "lie_jacobi", vec![], vec![vec![]], vec![c.clone(); 3], Some(c), move |_, idx| {
        let xi = xi_or_err(&cs, beta)?;
        let t = triple(idx, dims);
        let t1 = xi.apply(&t);
        let t2 = xi.apply(&t1);
        let sum = t.add(&t1).add(&t2);
        Ok((comp_left(bracket, bracket, &sum, dims), Vector::zero()))
    }));
    s
}

fn relation_refusal(id: &str, spaces: &[&GradedSpace], beta: &BetaSpec, rels: &[RelationKind]) -> Option<AxiomResult> {
    let spec = spaces[0].spec();
    let domain = hypothesis_domain(spaces);
    for rel in rels {
        let r = check_beta_relation(spec, beta, &spec.zero(), *rel, &domain);
        if !r.is_pass() {
            let mut out = AxiomResult::refused(id, rel.anchor(), format!("precondition {} fails on the support box", rel.id()));
            out.witness = r.witness;
            return Some(out);
        }
    }
    None
}

/// Algebra, Lie and Leibniz clauses; refused unless the multiplicative relation holds.
pub fn poisson_suite(p: &PoissonAlgebra) -> Suite<'_> {
    let mut s = Suite::new("poisson");
    if let Some(r) = relation_refusal("poisson", &[&p.carrier], &p.beta, &[RelationKind::Multiplicative]) {
        s.push(r);
        return s;
    }
    s.append(gamma_algebra_suite(p));
    s.append(lie_suite(&p.carrier, &p.bracket, &p.beta));
    let c = p.carrier.clone();
    let d = c.dim();
    let dims = (d, d, d);
    let (pr, br, beta, cs) = (&p.product, &p.bracket, &p.beta, c.clone());
    s.push_clause(Clause::new("leibniz", "poisson_leibniz", vec![], vec![vec![]], vec![c.clone(); 3], Some(c), move |_, idx| {
        let t = triple(idx, dims);
        let xi = xi_or_err(&cs, beta)?;
        let lhs = comp_right(br, pr, &t, dims);
        let rhs = comp_left(pr, br, &t, dims).sub(&comp_right(pr, br, &xi.apply(&t), dims));
        Ok((lhs, rhs))
    }));
    s
}

/// Module laws for the action: associativity and unit.
pub fn algebra_module_suite<'a>(a: &'a PoissonAlgebra, m: &'a PoissonModule) -> Suite<'a> {
    let mut s = Suite::new("poisson_module");
    let (av, mv) = (a.carrier.clone(), m.carrier.clone());
    let (da, dm) = (av.dim(), mv.dim());
    let dims = (da, da, dm);
    let (pr, act) = (&a.product, &m.action);
    s.push_clause(Clause::new(
        "module_associativity",
        "module_associativity",
        vec![],
        vec![vec![]],
        vec![av.clone(), av.clone(), mv.clone()],
        Some(mv.clone()),
        move |_, idx| {
            let t = triple(idx, dims);
            Ok((comp_left(act, pr, &t, dims), comp_right(act, act, &t, dims)))
        },
    ));
    let unit = &a.unit;
    s.push_clause(Clause::new("module_unit", "module_unit", vec![], vec![vec![]], vec![mv.clone()], Some(mv), move |_, idx| {
        Ok((act.apply_bilinear(unit, &Vector::basis(idx[0]), dm), Vector::basis(idx[0])))
    }));
    s
}

pub fn lie_module_suite<'a>(a: &'a PoissonAlgebra, m: &'a PoissonModule) -> Suite<'a> {
    let mut s = Suite::new("poisson_module");
    let (av, mv) = (a.carrier.clone(), m.carrier.clone());
    let (da, dm) = (av.dim(), mv.dim());
    let dims = (da, da, dm);
    let (br, lie, beta, avs) = (&a.bracket, &m.lie_action, &a.beta, av.clone());
    s.push_clause(Clause::new(
        "lie_module",
        "lie_module",
        vec![],
        vec![vec![]],
        vec![av.clone(), av, mv.clone()],
        Some(mv),
        move |_, idx| {
            let t = triple(idx, dims);
            let lhs = comp_left(lie, br, &t, dims);
            let twisted = swap_first_two(&t, &avs, dm, beta)?;
            let rhs = comp_right(lie, lie, &t, dims).sub(&comp_right(lie, lie, &twisted, dims));
            Ok((lhs, rhs))
        },
    ));
    s
}

/// All four module items; refused unless the multiplicative relation holds.
pub fn poisson_module_suite<'a>(a: &'a PoissonAlgebra, m: &'a PoissonModule) -> Suite<'a> {
    let mut s = Suite::new("poisson_module");
    if let Some(r) = relation_refusal("poisson_module", &[&a.carrier, &m.carrier], &a.beta, &[RelationKind::Multiplicative]) {
        s.push(r);
        return s;
    }
    s.append(algebra_module_suite(a, m));
    s.append(lie_module_suite(a, m));
    let (av, mv) = (a.carrier.clone(), m.carrier.clone());
    let (da, dm) = (av.dim(), mv.dim());
    let dims = (da, da, dm);
    let (pr, br, act, lie, beta) = (&a.product, &a.bracket, &m.action, &m.lie_action, &a.beta);
    let avs = av.clone();
    s.push_clause(Clause::new(
        "poisson_module_3",
        "poisson_module_bracket_action",
        vec![],
        vec![vec![]],
        vec![av.clone(), av.clone(), mv.clone()],
        Some(mv.clone()),
        move |_, idx| {
            let t = triple(idx, dims);
            let twisted = swap_first_two(&t, &avs, dm, beta)?;
            let lhs = comp_right(lie, act, &t, dims);
            let rhs = comp_left(act, br, &t, dims).add(&comp_right(act, lie, &twisted, dims));
            Ok((lhs, rhs))
        },
    ));
    let avs = av.clone();
    s.push_clause(Clause::new(
        "poisson_module_4",
        "poisson_module_product_action",
        vec![],
        vec![vec![]],
        vec![av.clone(), av, mv.clone()],
        Some(mv),
        move |_, idx| {
            let t = triple(idx, dims);
            let twisted = swap_first_two(&t, &avs, dm, beta)?;
            let lhs = comp_left(lie, pr, &t, dims);
            let rhs = comp_right(act, lie, &t, dims).add(&comp_right(act, lie, &twisted, dims));
            Ok((lhs, rhs))
        },
    ));
    s
}

// ---------------------------------------------------------------------------
// standalone checkers: coalgebras, Lie coalgebras, co-Poisson coalgebras

fn cols_fn(f: &GradedMap) -> impl Fn(usize) -> Vector + '_ {
    move |k| f.col(k).clone()
}

pub fn gamma_coalgebra_suite(p: &CoPoissonCoalgebra) -> Result<Suite<'_>, GradedError> {
    let mut s = Suite::new("copoisson");
    let c = p.carrier.clone();
    let d = c.dim();
    let ccc = c.tensor(&c)?.tensor(&c)?;
    let del = &p.coproduct;
    s.push_clause(Clause::new(
        "coassociativity",
        "coalgebra_coassociativity",
        vec![],
        vec![vec![]],
        vec![c.clone()],
        Some(ccc),
        move |_, idx| {
            let w = del.apply(&Vector::basis(idx[0]));
            Ok((right_apply(cols_fn(del), &w, d, d * d), left_apply(cols_fn(del), &w, d)))
        },
    ));
    let eps = &p.counit;
    s.push_clause(Clause::new("counit_left", "coalgebra_counit", vec![], vec![vec![]], vec![c.clone()], Some(c.clone()), move |_, idx| {
        Ok((counit_left(&del.apply(&Vector::basis(idx[0])), eps, d), Vector::basis(idx[0])))
    }));
    s.push_clause(Clause::new("counit_right", "coalgebra_counit", vec![], vec![vec![]], vec![c.clone()], Some(c), move |_, idx| {
        Ok((counit_right(&del.apply(&Vector::basis(idx[0])), eps, d), Vector::basis(idx[0])))
    }));
    Ok(s)
}

pub fn beta_cocommutative_suite(p: &CoPoissonCoalgebra) -> Result<Suite<'_>, GradedError> {
    let mut s = Suite::new("copoisson");
    let c = p.carrier.clone();
    let cc = c.tensor(&c)?;
    let (del, beta, cs) = (&p.coproduct, &p.beta, c.clone());
    s.push_clause(Clause::new("beta_cocommutativity", "beta_cocommutativity", vec![], vec![vec![]], vec![c], Some(cc), move |_, idx| {
        let w = del.apply(&Vector::basis(idx[0]));
        Ok((swap(&w, &cs, beta)?, w))
    }));
    Ok(s)
}

pub fn colie_suite<'a>(carrier: &GradedSpace, cobracket: &'a GradedMap, beta: &'a BetaSpec) -> Result<Suite<'a>, GradedError> {
    let mut s = Suite::new("colie");
    let c = carrier.clone();
    let d = c.dim();
    let cc = c.tensor(&c)?;
    let ccc = cc.tensor(&c)?;
    let cs = c.clone();
    s.push_clause(Clause::new("colie_skew", "colie_skew", vec![], vec![vec![]], vec![c.clone()], Some(cc), move |_, idx| {
        let w = cobracket.apply(&Vector::basis(idx[0]));
        Ok((w.add(&swap(&w, &cs, beta)?), Vector::zero()))
    }));
    let cs = c.clone();
    s.push_clause(Clause::new("colie_jacobi", "colie_jacobi", vec![], vec![vec![]], vec![c], Some(ccc), move |_, idx| {
        let xi = xi_or_err(&cs, beta)?;
        let w = right_apply(cols_fn(cobracket), &cobracket.apply(&Vector::basis(idx[0])), d, d * d);
        let w1 = xi.apply(&w);
        let w2 = xi.apply(&w1);
        Ok((w.add(&w1).add(&w2), Vector::zero()))
    }));
    Ok(s)
}

pub fn copoisson_suite(p: &CoPoissonCoalgebra) -> Result<Suite<'_>, GradedError> {
    let mut s = Suite::new("copoisson");
    if let Some(r) = relation_refusal("copoisson", &[&p.carrier], &p.beta, &[RelationKind::Multiplicative]) {
        s.push(r);
        return Ok(s);
    }
    s.append(gamma_coalgebra_suite(p)?);
    s.append(colie_suite(&p.carrier, &p.cobracket, &p.beta)?);
    let c = p.carrier.clone();
    let d = c.dim();
    let ccc = c.tensor(&c)?.tensor(&c)?;
    let (del, del0, beta, cs) = (&p.coproduct, &p.cobracket, &p.beta, c.clone());
    s.push_clause(Clause::new(
        "copoisson_compatibility",
        "copoisson_compatibility",
        vec![],
        vec![vec![]],
        vec![c],
        Some(ccc),
        move |_, idx| {
            let xi = xi_or_err(&cs, beta)?;
            let e = Vector::basis(idx[0]);
            let lhs = left_apply(cols_fn(del), &del0.apply(&e), d);
            let w = del.apply(&e);
            let rhs = right_apply(cols_fn(del0), &w, d, d * d).sub(&xi.apply(&left_apply(cols_fn(del0), &w, d)));
            Ok((lhs, rhs))
        },
    ));
    Ok(s)
}

pub fn coalgebra_comodule_suite<'a>(c: &'a CoPoissonCoalgebra, m: &'a CoPoissonComodule) -> Result<Suite<'a>, GradedError> {
    let mut s = Suite::new("copoisson_comodule");
    let (cv, mv) = (c.carrier.clone(), m.carrier.clone());
    let dc = cv.dim();
    let mcc = mv.tensor(&cv)?.tensor(&cv)?;
    let (del, co) = (&c.coproduct, &m.coaction);
    s.push_clause(Clause::new(
        "comodule_coassociativity",
        "comodule_coassociativity",
        vec![],
        vec![vec![]],
        vec![mv.clone()],
        Some(mcc),
        move |_, idx| {
            let w = co.apply(&Vector::basis(idx[0]));
            Ok((right_apply(cols_fn(del), &w, dc, dc * dc), left_apply(cols_fn(co), &w, dc)))
        },
    ));
    let eps = &c.counit;
    s.push_clause(Clause::new("comodule_counit", "comodule_counit", vec![], vec![vec![]], vec![mv.clone()], Some(mv), move |_, idx| {
        Ok((counit_right(&co.apply(&Vector::basis(idx[0])), eps, dc), Vector::basis(idx[0])))
    }));
    Ok(s)
}

pub fn lie_comodule_suite<'a>(c: &'a CoPoissonCoalgebra, m: &'a CoPoissonComodule) -> Result<Suite<'a>, GradedError> {
    let mut s = Suite::new("copoisson_comodule");
    let (cv, mv) = (c.carrier.clone(), m.carrier.clone());
    let dc = cv.dim();
    let mcc = mv.tensor(&cv)?.tensor(&cv)?;
    let (del0, lie, beta, cs) = (&c.cobracket, &m.lie_coaction, &c.beta, cv.clone());
    s.push_clause(Clause::new("lie_comodule", "lie_comodule", vec![], vec![vec![]], vec![mv], Some(mcc), move |_, idx| {
        let w = lie.apply(&Vector::basis(idx[0]));
        let lhs = right_apply(cols_fn(del0), &w, dc, dc * dc);
        let twice = left_apply(cols_fn(lie), &w, dc);
        Ok((lhs, twice.sub(&swap_last_two(&twice, &cs, beta)?)))
    }));
    Ok(s)
}

pub fn copoisson_comodule_suite<'a>(c: &'a CoPoissonCoalgebra, m: &'a CoPoissonComodule) -> Result<Suite<'a>, GradedError> {
    let mut s = Suite::new("copoisson_comodule");
    if let Some(r) = relation_refusal("copoisson_comodule", &[&c.carrier, &m.carrier], &c.beta, &[RelationKind::Multiplicative]) {
        s.push(r);
        return Ok(s);
    }
    s.append(coalgebra_comodule_suite(c, m)?);
    s.append(lie_comodule_suite(c, m)?);
    let (cv, mv) = (c.carrier.clone(), m.carrier.clone());
    let dc = cv.dim();
    let mcc = mv.tensor(&cv)?.tensor(&cv)?;
    let (del, del0, co, lie, beta) = (&c.coproduct, &c.cobracket, &m.coaction, &m.lie_coaction, &c.beta);
    let cs = cv.clone();
    s.push_clause(Clause::new(
        "copoisson_comodule_3",
        "copoisson_comodule_cobracket_coaction",
        vec![],
        vec![vec![]],
        vec![mv.clone()],
        Some(mcc.clone()),
        move |_, idx| {
            let e = Vector::basis(idx[0]);
            let lhs = left_apply(cols_fn(co), &lie.apply(&e), dc);
            let w = co.apply(&e);
            let mixed = left_apply(cols_fn(lie), &w, dc);
            let rhs = right_apply(cols_fn(del0), &w, dc, dc * dc).add(&swap_last_two(&mixed, &cs, beta)?);
            Ok((lhs, rhs))
        },
    ));
    let cs = cv.clone();
    s.push_clause(Clause::new(
        "copoisson_comodule_4",
        "copoisson_comodule_coproduct_coaction",
        vec![],
        vec![vec![]],
        vec![mv],
        Some(mcc),
        move |_, idx| {
            let e = Vector::basis(idx[0]);
            let lhs = right_apply(cols_fn(del), &lie.apply(&e), dc, dc * dc);
            let mixed = left_apply(cols_fn(lie), &co.apply(&e), dc);
            let rhs = mixed.add(&swap_last_two(&mixed, &cs, beta)?);
            Ok((lhs, rhs))
        },
    ));
    Ok(s)
}

// ---------------------------------------------------------------------------
// duality isomorphisms

/// Result of an isomorphism construction: the map (absent on refusal) and its checks.
#[derive(Clone, Debug)]
pub struct IsoOutcome {
    pub map: Option<GradedMap>,
    pub report: CheckReport,
}

impl IsoOutcome {
    fn refused(suite: &str, r: AxiomResult) -> Self {
        let mut report = CheckReport::new(suite);
        report.push(r);
        IsoOutcome { map: None, report }
    }
}

fn iso_preconditions(suite: &str, spaces: &[&GradedSpace], beta: &BetaSpec) -> Option<IsoOutcome> {
    relation_refusal("iso_preconditions", spaces, beta, &[RelationKind::Parity, RelationKind::Multiplicative])
        .map(|r| IsoOutcome::refused(suite, r))
}

fn error_outcome(suite: &str, e: impl std::fmt::Display) -> IsoOutcome {
    IsoOutcome::refused(suite, AxiomResult::refused("construction", "c2_construction", e.to_string()))
}

/// m[s][k] = r_s(e_{j_k}): kernel vectors of X' evaluated on quotient representatives in X.
fn evaluation(q: &Quotient, kernel: &GradedSubspace) -> Vec<Vec<Scalar>> {
    kernel.basis().iter().map(|r| q.representatives().iter().map(|j| r.coeff(*j)).collect()).collect()
}

/// Class k of X/W to sum_s r_s(e_{j_k}) r_s*.
fn phi_map(q: &Quotient, kernel: &GradedSubspace, target: &GradedSpace) -> GradedMap {
    let m = evaluation(q, kernel);
    let cols =
        (0..q.space().dim()).map(|k| Vector::from_entries(m.iter().enumerate().map(|(s, row)| (s, row[k].clone())).collect())).collect();
    GradedMap::new_unchecked(q.space().clone(), target.clone(), q.space().spec().zero(), cols).expect("shape")
}

/// r_s to sum_k r_s(e_{j_k}) q_k*.
fn psi_map(q: &Quotient, kernel: &GradedSubspace, source: &GradedSpace, target: &GradedSpace) -> GradedMap {
    let m = evaluation(q, kernel);
    let cols = m.into_iter().map(|row| Vector::from_dense(&row)).collect();
    GradedMap::new_unchecked(source.clone(), target.clone(), source.spec().zero(), cols).expect("shape")
}

fn bijective(f: &GradedMap) -> AxiomResult {
    let square = f.source().dim() == f.target().dim();
    if square && nullspace(f.cols()).is_empty() {
        AxiomResult::pass("bijective", "iso_bijective", f.source().dim() as u64)
    } else {
        AxiomResult::fail(
            "bijective",
            "iso_bijective",
            format!("{} -> {} map has a kernel or is not square", f.source().dim(), f.target().dim()),
        )
    }
}

/// dim R_g = dim K_{-g} for every degree in either support.
fn dimension_identity(quotient: &GradedSpace, kernel: &GradedSpace) -> AxiomResult {
    let spec = quotient.spec();
    let mut degrees = quotient.support();
    degrees.extend(kernel.support().iter().map(|g| spec.neg(g)));
    degrees.sort();
    degrees.dedup();
    for g in &degrees {
        let (a, b) = (quotient.dim_at(g), kernel.dim_at(&spec.neg(g)));
        if a != b {
            let mut r = AxiomResult::fail("dimension_identity", "annihilator_dimensions", format!("degree {g}: {a} vs {b}"));
            r.witness =
                Some(crate::report::Witness { degrees: vec![g.to_string()], lhs: a.to_string(), rhs: b.to_string(), ..Default::default() });
            return r;
        }
    }
    AxiomResult::pass("dimension_identity", "annihilator_dimensions", degrees.len() as u64)
}

fn same_subspace(a: &GradedSubspace, b: &GradedSubspace) -> AxiomResult {
    if a.basis() == b.basis() {
        AxiomResult::pass("annihilator_identity", "annihilator_identity", a.dim() as u64)
    } else {
        AxiomResult::fail(
            "annihilator_identity",
            "annihilator_identity",
            format!("kernel of dimension {} differs from annihilator of dimension {}", a.dim(), b.dim()),
        )
    }
}

/// f(x (x) y) mapped by h against g(h x (x) h' y), on basis pairs.
fn preserves_binary(
    id: &str,
    anchor: &str,
    h1: &GradedMap,
    h2: &GradedMap,
    h_out: &GradedMap,
    f: &GradedMap,
    g: &GradedMap,
) -> AxiomResult {
    let (d1, d2) = (h1.source().dim(), h2.source().dim());
    let dt2 = h2.target().dim();
    let c = Clause::new(
        id,
        anchor,
        vec![],
        vec![vec![]],
        vec![h1.source().clone(), h2.source().clone()],
        Some(h_out.target().clone()),
        move |_, idx| {
            let (x, y) = (Vector::basis(idx[0]), Vector::basis(idx[1]));
            let lhs = h_out.apply(&f.apply_bilinear(&x, &y, d2));
            let rhs = g.apply_bilinear(&h1.apply(&x), &h2.apply(&y), dt2);
            Ok((lhs, rhs))
        },
    );
    let _ = d1;
    c.run()
}

/// (h1 (x) h2) f(x) against g(h_in x), on basis vectors.
fn preserves_co(id: &str, anchor: &str, h_in: &GradedMap, h1: &GradedMap, h2: &GradedMap, f: &GradedMap, g: &GradedMap) -> AxiomResult {
    let hh = match h1.tensor(h2) {
        Ok(m) => m,
        Err(e) => return AxiomResult::refused(id, anchor, e.to_string()),
    };
    let c = Clause::new(id, anchor, vec![], vec![vec![]], vec![h_in.source().clone()], Some(hh.target().clone()), move |_, idx| {
        let x = Vector::basis(idx[0]);
        Ok((hh.apply(&f.apply(&x)), g.apply(&h_in.apply(&x))))
    });
    c.run()
}

/// R(V) to the dual of Ker Y'_{-2}, with all structure checks.
pub fn poisson_duality_iso(a: &VertexAlgebra) -> IsoOutcome {
    let suite = "iso-7.5";
    if let Some(o) = iso_preconditions(suite, &[&a.space], &a.beta) {
        return o;
    }
    let r = match c2_algebra(a) {
        Ok(r) => r,
        Err(e) => return error_outcome(suite, e),
    };
    let k = match dualize_algebra(a).map_err(C2Error::from).and_then(|(c, _)| co_c2_coalgebra(&c)) {
        Ok(k) => k,
        Err(e) => return error_outcome(suite, e),
    };
    let q = r.quotient.as_ref().expect("c2 output");
    let kernel = k.kernel.as_ref().expect("c2 output");
    let kd = k.carrier.dual();
    let mut report = CheckReport::new(suite);
    report.push(same_subspace(kernel, &c2_subspace(a).annihilator()));
    report.push(dimension_identity(&r.carrier, &k.carrier));
    let phi = phi_map(q, kernel, &kd);
    report.push(bijective(&phi));
    let star = dual_of_coproduct(&k.coproduct, &k.carrier, &k.carrier);
    let brace = dual_of_coproduct(&k.cobracket, &k.carrier, &k.carrier);
    match (star, brace) {
        (Ok(star), Ok(brace)) => {
            report.push(preserves_binary("product_preserved", "iso_product", &phi, &phi, &phi, &r.product, &star));
            report.push(preserves_binary("bracket_preserved", "iso_bracket", &phi, &phi, &phi, &r.bracket, &brace));
        }
        (Err(e), _) | (_, Err(e)) => report.push(AxiomResult::refused("product_preserved", "iso_product", e.to_string())),
    }
    let unit_ok = phi.apply(&r.unit) == k.counit;
    report.push(if unit_ok {
        AxiomResult::pass("unit_preserved", "iso_unit", 1)
    } else {
        AxiomResult::fail("unit_preserved", "iso_unit", "image of the unit differs from the counit")
    });
    IsoOutcome { map: Some(phi), report }
}

/// Ker Y_{-2} to the dual of R(V'), with all structure checks.
pub fn copoisson_duality_iso(c: &VertexCoalgebra) -> IsoOutcome {
    let suite = "iso-7.6";
    if let Some(o) = iso_preconditions(suite, &[&c.space], &c.beta) {
        return o;
    }
    let k = match co_c2_coalgebra(c) {
        Ok(k) => k,
        Err(e) => return error_outcome(suite, e),
    };
    let (a, _) = match dualize_coalgebra(c) {
        Ok(x) => x,
        Err(e) => return error_outcome(suite, e),
    };
    let r = match c2_algebra(&a) {
        Ok(r) => r,
        Err(e) => return error_outcome(suite, e),
    };
    let q = r.quotient.as_ref().expect("c2 output");
    let kernel = k.kernel.as_ref().expect("c2 output");
    let rd = r.carrier.dual();
    let mut report = CheckReport::new(suite);
    let ann = c2_subspace(&a).annihilator().in_ambient(&c.space);
    report.push(same_subspace(kernel, &ann));
    report.push(dimension_identity(&r.carrier, &k.carrier));
    let psi = psi_map(q, kernel, &k.carrier, &rd);
    report.push(bijective(&psi));
    match (dual_of_product(&r.product, &r.carrier, &r.carrier), dual_of_product(&r.bracket, &r.carrier, &r.carrier)) {
        (Ok(delta), Ok(delta0)) => {
            report.push(preserves_co("coproduct_preserved", "iso_coproduct", &psi, &psi, &psi, &k.coproduct, &delta));
            report.push(preserves_co("cobracket_preserved", "iso_cobracket", &psi, &psi, &psi, &k.cobracket, &delta0));
        }
        (Err(e), _) | (_, Err(e)) => report.push(AxiomResult::refused("coproduct_preserved", "iso_coproduct", e.to_string())),
    }
    // counit of R(V')' is evaluation at the unit class
    let counit_ok = (0..k.carrier.dim()).all(|s| {
        let img = psi.col(s);
        let mut acc = Scalar::zero();
        for (i, x) in img.entries() {
            acc += &(x * &r.unit.coeff(*i));
        }
        acc == k.counit.coeff(s)
    });
    report.push(if counit_ok {
        AxiomResult::pass("counit_preserved", "iso_counit", k.carrier.dim() as u64)
    } else {
        AxiomResult::fail("counit_preserved", "iso_counit", "counit is not carried to evaluation at the unit")
    });
    IsoOutcome { map: Some(psi), report }
}

/// R(M) to the dual of Ker Y^{M'}_{-2}, through the algebra isomorphism.
pub fn poisson_duality_iso_module(m: &VertexModule) -> IsoOutcome {
    let suite = "iso-7.10";
    if let Some(o) = iso_preconditions(suite, &[&m.base.space, &m.mspace], &m.base.beta) {
        return o;
    }
    let (rv, rm) = match c2_module(m) {
        Ok(x) => x,
        Err(e) => return error_outcome(suite, e),
    };
    let (kv, km) = match dualize_module(m).map_err(C2Error::from).and_then(|(n, _)| co_c2_comodule(&n)) {
        Ok(x) => x,
        Err(e) => return error_outcome(suite, e),
    };
    let (qv, qm) = (rv.quotient.as_ref().expect("c2"), rm.quotient.as_ref().expect("c2"));
    let (kerv, kerm) = (kv.kernel.as_ref().expect("c2"), km.kernel.as_ref().expect("c2"));
    let mut report = CheckReport::new(suite);
    report.push(same_subspace(kerm, &c2_subspace_module(m).annihilator()));
    report.push(dimension_identity(&rm.carrier, &km.carrier));
    let phi_v = phi_map(qv, kerv, &kv.carrier.dual());
    let phi_m = phi_map(qm, kerm, &km.carrier.dual());
    report.push(bijective(&phi_v).with_id("bijective_base"));
    report.push(bijective(&phi_m));
    match (dual_of_coproduct(&km.coaction, &km.carrier, &kv.carrier), dual_of_coproduct(&km.lie_coaction, &km.carrier, &kv.carrier)) {
        (Ok(act), Ok(lie)) => {
            report.push(preserves_binary("action_preserved", "iso_action", &phi_v, &phi_m, &phi_m, &rm.action, &act));
            report.push(preserves_binary("lie_action_preserved", "iso_lie_action", &phi_v, &phi_m, &phi_m, &rm.lie_action, &lie));
        }
        (Err(e), _) | (_, Err(e)) => report.push(AxiomResult::refused("action_preserved", "iso_action", e.to_string())),
    }
    IsoOutcome { map: Some(phi_m), report }
}

/// Ker Y^M_{-2} to the dual of R(M'), through the coalgebra isomorphism.
pub fn copoisson_duality_iso_comodule(n: &VertexComodule) -> IsoOutcome {
    let suite = "iso-7.12";
    if let Some(o) = iso_preconditions(suite, &[&n.base.space, &n.mspace], &n.base.beta) {
        return o;
    }
    let (kv, km) = match co_c2_comodule(n) {
        Ok(x) => x,
        Err(e) => return error_outcome(suite, e),
    };
    let (rv, rm) = match dualize_comodule(n).map_err(C2Error::from).and_then(|(m, _)| c2_module(&m)) {
        Ok(x) => x,
        Err(e) => return error_outcome(suite, e),
    };
    let (qv, qm) = (rv.quotient.as_ref().expect("c2"), rm.quotient.as_ref().expect("c2"));
    let (kerv, kerm) = (kv.kernel.as_ref().expect("c2"), km.kernel.as_ref().expect("c2"));
    let mut report = CheckReport::new(suite);
    report.push(dimension_identity(&rm.carrier, &km.carrier));
    let psi_v = psi_map(qv, kerv, &kv.carrier, &rv.carrier.dual());
    let psi_m = psi_map(qm, kerm, &km.carrier, &rm.carrier.dual());
    report.push(bijective(&psi_v).with_id("bijective_base"));
    report.push(bijective(&psi_m));
    match (dual_of_product(&rm.action, &rv.carrier, &rm.carrier), dual_of_product(&rm.lie_action, &rv.carrier, &rm.carrier)) {
        (Ok(co), Ok(lie)) => {
            report.push(preserves_co("coaction_preserved", "iso_coaction", &psi_m, &psi_m, &psi_v, &km.coaction, &co));
            report.push(preserves_co("lie_coaction_preserved", "iso_lie_coaction", &psi_m, &psi_m, &psi_v, &km.lie_coaction, &lie));
        }
        (Err(e), _) | (_, Err(e)) => report.push(AxiomResult::refused("coaction_preserved", "iso_coaction", e.to_string())),
    }
    IsoOutcome { map: Some(psi_m), report }
}

/// True when every entry passed (used by the CLI summary).
pub fn all_pass(r: &CheckReport) -> bool {
    r.results.iter().all(|x| matches!(x.verdict, Verdict::Pass | Verdict::Info | Verdict::Skipped))
}
