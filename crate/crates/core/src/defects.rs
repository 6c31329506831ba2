//! Planted-defect fixtures. Each entry perturbs a passing structure by a few structure
//! constants and names the clause it is aimed at; [`Defect::evaluate`] runs the checker
//! that owns the clause and replays the first failing witness.

use std::collections::{BTreeMap, BTreeSet};

use crate::builders::{adjoint_module, by_name, endo, product_from_table, ungraded};
use crate::c2::{
    algebra_module_suite, beta_cocommutative_suite, beta_commutative_suite, coalgebra_comodule_suite, colie_suite,
    copoisson_comodule_suite, copoisson_suite, gamma_algebra_suite, gamma_coalgebra_suite, lie_comodule_suite, lie_module_suite, lie_suite,
    poisson_module_suite, poisson_suite, CoPoissonCoalgebra, CoPoissonComodule, PoissonAlgebra, PoissonModule,
};
use crate::duality::{dual_of_product, dualize_algebra, dualize_module};
use crate::gamma::BetaSpec;
use crate::graded::{GradedMap, GradedSpace, Vector};
use crate::report::{CheckReport, Suite, Verdict};
use crate::scalars::Scalar;
use crate::vertex::{
    algebra_suite, coalgebra_suite, comodule_suite, module_suite, VertexAlgebra, VertexCoalgebra, VertexComodule, VertexError,
    VertexModule, Window,
};

/// Which structure constant a tweak touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Y_n, or Y^M_n for modules.
    Op(i64),
    /// D^M.
    ModuleD,
    Product,
    Bracket,
    Unit,
    Action,
    LieAction,
}

/// Add `delta` to the `row` coefficient of column `col` of the map in `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tweak {
    pub slot: Slot,
    pub col: usize,
    pub row: usize,
    pub delta: i64,
}

const fn tw(slot: Slot, col: usize, row: usize, delta: i64) -> Tweak {
    Tweak { slot, col, row, delta }
}

fn bump(v: &Vector, row: usize, delta: i64) -> Vector {
    v.add(&Vector::from_entries(vec![(row, Scalar::from_i64(delta))]))
}

fn bump_map(f: &GradedMap, t: &Tweak) -> GradedMap {
    let mut cols = f.cols().to_vec();
    cols[t.col] = bump(&cols[t.col], t.row, t.delta);
    GradedMap::new_unchecked(f.source().clone(), f.target().clone(), f.degree().clone(), cols).expect("shape is unchanged")
}

fn bump_ops(
    ops: &mut BTreeMap<i64, GradedMap>,
    window: &mut Window,
    n: i64,
    source: &GradedSpace,
    target: &GradedSpace,
    degree: crate::gamma::GroupElement,
    t: &Tweak,
) {
    let f = ops.remove(&n).unwrap_or_else(|| GradedMap::zero(source, target, degree));
    ops.insert(n, bump_map(&f, t));
    *window = window.hull(&Window::new(n, n));
}

pub fn tweak_algebra(a: &VertexAlgebra, tweaks: &[Tweak]) -> Result<VertexAlgebra, VertexError> {
    let vv = a.space.tensor(&a.space).expect("same spec");
    let (mut ops, mut w, mut vac) = (a.ops.clone(), a.window, a.vacuum.clone());
    for t in tweaks {
        match t.slot {
            Slot::Op(n) => bump_ops(&mut ops, &mut w, n, &vv, &a.space, a.spec().scale(n, &a.gamma0), t),
            Slot::Unit => vac = bump(&vac, t.row, t.delta),
            other => panic!("{other:?} is not a vertex algebra slot"),
        }
    }
    VertexAlgebra::new(a.space.clone(), a.gamma0.clone(), a.beta.clone(), w, ops, vac)
}

pub fn tweak_module(m: &VertexModule, tweaks: &[Tweak]) -> Result<VertexModule, VertexError> {
    let vm = m.base.space.tensor(&m.mspace).expect("same spec");
    let (mut ops, mut w, mut d_m) = (m.mops.clone(), m.window, m.d_m.clone());
    for t in tweaks {
        match t.slot {
            Slot::Op(n) => bump_ops(&mut ops, &mut w, n, &vm, &m.mspace, m.base.spec().scale(n, &m.base.gamma0), t),
            Slot::ModuleD => {
                let d = d_m.unwrap_or_else(|| GradedMap::zero(&m.mspace, &m.mspace, m.base.spec().scale(-2, &m.base.gamma0)));
                d_m = Some(bump_map(&d, t));
            }
            other => panic!("{other:?} is not a vertex module slot"),
        }
    }
    VertexModule::new(m.base.clone(), m.mspace.clone(), w, ops, d_m, m.omega.clone())
}

pub fn tweak_poisson(p: &PoissonAlgebra, tweaks: &[Tweak]) -> PoissonAlgebra {
    let mut q = p.clone();
    for t in tweaks {
        match t.slot {
            Slot::Product => q.product = bump_map(&q.product, t),
            Slot::Bracket => q.bracket = bump_map(&q.bracket, t),
            Slot::Unit => q.unit = bump(&q.unit, t.row, t.delta),
            other => panic!("{other:?} is not a Poisson algebra slot"),
        }
    }
    q
}

pub fn tweak_poisson_module(m: &PoissonModule, tweaks: &[Tweak]) -> PoissonModule {
    let mut q = m.clone();
    for t in tweaks {
        match t.slot {
            Slot::Action => q.action = bump_map(&q.action, t),
            Slot::LieAction => q.lie_action = bump_map(&q.lie_action, t),
            other => panic!("{other:?} is not a Poisson module slot"),
        }
    }
    q
}

/// k1 + L with L the two-dimensional non-abelian Lie algebra [e, f] = f: square-zero
/// product, bracket vanishing on 1.
pub fn square_zero_poisson() -> PoissonAlgebra {
    let c = ungraded(&["1", "e", "f"]);
    let product = product_from_table(&c, |i, j| match (i, j) {
        (0, k) | (k, 0) => Vector::basis(k),
        _ => Vector::zero(),
    });
    let bracket = product_from_table(&c, |i, j| match (i, j) {
        (1, 2) => Vector::basis(2),
        (2, 1) => Vector::basis(2).neg(),
        _ => Vector::zero(),
    });
    PoissonAlgebra { carrier: c, product, unit: Vector::basis(0), bracket, beta: BetaSpec::One, quotient: None }
}

/// Q[x]/(x^2) with zero bracket.
pub fn dual_numbers_poisson() -> PoissonAlgebra {
    let c = ungraded(&["1", "x"]);
    let product = product_from_table(&c, |i, j| if i + j < 2 { Vector::basis(i + j) } else { Vector::zero() });
    let bracket = product_from_table(&c, |_, _| Vector::zero());
    PoissonAlgebra { carrier: c, product, unit: Vector::basis(0), bracket, beta: BetaSpec::One, quotient: None }
}

/// 2x2 upper-triangular matrices, zero bracket.
pub fn matrix_poisson() -> PoissonAlgebra {
    let spec = crate::builders::upper_triangular_spec();
    let c = spec.space;
    let bracket = product_from_table(&c, |_, _| Vector::zero());
    PoissonAlgebra { carrier: c, product: spec.product, unit: spec.unit, bracket, beta: BetaSpec::One, quotient: None }
}

/// The algebra acting on itself.
pub fn adjoint_poisson_module(p: &PoissonAlgebra) -> PoissonModule {
    PoissonModule { carrier: p.carrier.clone(), action: p.product.clone(), lie_action: p.bracket.clone(), quotient: None }
}

/// Transposed structure on the dual carrier.
pub fn transpose_poisson(p: &PoissonAlgebra) -> CoPoissonCoalgebra {
    let c = &p.carrier;
    CoPoissonCoalgebra {
        carrier: c.dual(),
        coproduct: dual_of_product(&p.product, c, c).expect("same spec"),
        counit: p.unit.clone(),
        cobracket: dual_of_product(&p.bracket, c, c).expect("same spec"),
        beta: p.beta.clone(),
        kernel: None,
    }
}

/// Transposed comodule over [`transpose_poisson`] of the base.
pub fn transpose_poisson_module(p: &PoissonAlgebra, m: &PoissonModule) -> CoPoissonComodule {
    let (a, x) = (&p.carrier, &m.carrier);
    CoPoissonComodule {
        carrier: x.dual(),
        coaction: dual_of_product(&m.action, a, x).expect("same spec"),
        lie_coaction: dual_of_product(&m.lie_action, a, x).expect("same spec"),
        kernel: None,
    }
}

/// One-dimensional module on which every Y^M_n vanishes, D^M = 0.
pub fn null_module(a: &VertexAlgebra) -> VertexModule {
    let x = ungraded(&["m"]);
    let d = endo(&x, vec![Vector::zero()]);
    VertexModule::new(a.clone(), x, Window::empty(), BTreeMap::new(), Some(d), None).expect("no ops to check")
}

/// The checker a planted defect is run against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Checker {
    Algebra,
    Coalgebra,
    Module,
    Comodule,
    GammaAlgebra,
    /// Algebra clauses together with beta-commutativity.
    CommutativeAlgebra,
    Lie,
    Poisson,
    AlgebraModule,
    LieModule,
    PoissonModule,
    GammaCoalgebra,
    CocommutativeCoalgebra,
    CoLie,
    CoPoisson,
    CoalgebraComodule,
    LieComodule,
    CoPoissonComodule,
}

#[derive(Clone, Debug)]
pub enum Fixture {
    Algebra(VertexAlgebra),
    Coalgebra(VertexCoalgebra),
    Module(VertexModule),
    Comodule(VertexComodule),
    Poisson(PoissonAlgebra, PoissonModule),
    CoPoisson(CoPoissonCoalgebra, CoPoissonComodule),
}

#[derive(Clone, Debug)]
pub struct Defect {
    /// Target clause id.
    pub clause: &'static str,
    /// Base fixture and tweak list, for display.
    pub recipe: String,
    pub checker: Checker,
    pub fixture: Fixture,
}

#[derive(Clone, Debug)]
pub struct DefectOutcome {
    pub report: CheckReport,
    /// Failing clause ids, boundary shells folded into their clause.
    pub failing: BTreeSet<String>,
    /// The target fails and nothing else does.
    pub isolated: bool,
    /// Replaying the recorded witness of the target reproduces the failure with the same sides.
    pub replayed: bool,
}

fn clause_of(id: &str) -> String {
    id.strip_suffix("_shell").unwrap_or(id).to_string()
}

fn suite_for<'a>(checker: Checker, f: &'a Fixture) -> Result<Suite<'a>, String> {
    let mismatch = || format!("{checker:?} does not apply to this fixture");
    let e = |e: crate::graded::GradedError| e.to_string();
    Ok(match (checker, f) {
        (Checker::Algebra, Fixture::Algebra(a)) => algebra_suite(a, None),
        (Checker::Coalgebra, Fixture::Coalgebra(c)) => coalgebra_suite(c, None).map_err(e)?,
        (Checker::Module, Fixture::Module(m)) => module_suite(m, None),
        (Checker::Comodule, Fixture::Comodule(m)) => comodule_suite(m, None).map_err(e)?,
        (Checker::GammaAlgebra, Fixture::Poisson(p, _)) => gamma_algebra_suite(p),
        (Checker::CommutativeAlgebra, Fixture::Poisson(p, _)) => {
            let mut s = gamma_algebra_suite(p);
            s.append(beta_commutative_suite(p));
            s
        }
        (Checker::Lie, Fixture::Poisson(p, _)) => lie_suite(&p.carrier, &p.bracket, &p.beta),
        (Checker::Poisson, Fixture::Poisson(p, _)) => poisson_suite(p),
        (Checker::AlgebraModule, Fixture::Poisson(p, m)) => algebra_module_suite(p, m),
        (Checker::LieModule, Fixture::Poisson(p, m)) => lie_module_suite(p, m),
        (Checker::PoissonModule, Fixture::Poisson(p, m)) => poisson_module_suite(p, m),
        (Checker::GammaCoalgebra, Fixture::CoPoisson(c, _)) => gamma_coalgebra_suite(c).map_err(e)?,
        (Checker::CocommutativeCoalgebra, Fixture::CoPoisson(c, _)) => {
            let mut s = gamma_coalgebra_suite(c).map_err(e)?;
            s.append(beta_cocommutative_suite(c).map_err(e)?);
            s
        }
        (Checker::CoLie, Fixture::CoPoisson(c, _)) => colie_suite(&c.carrier, &c.cobracket, &c.beta).map_err(e)?,
        (Checker::CoPoisson, Fixture::CoPoisson(c, _)) => copoisson_suite(c).map_err(e)?,
        (Checker::CoalgebraComodule, Fixture::CoPoisson(c, m)) => coalgebra_comodule_suite(c, m).map_err(e)?,
        (Checker::LieComodule, Fixture::CoPoisson(c, m)) => lie_comodule_suite(c, m).map_err(e)?,
        (Checker::CoPoissonComodule, Fixture::CoPoisson(c, m)) => copoisson_comodule_suite(c, m).map_err(e)?,
        _ => return Err(mismatch()),
    })
}

impl Defect {
    pub fn evaluate(&self) -> Result<DefectOutcome, String> {
        let suite = suite_for(self.checker, &self.fixture)?;
        let report = suite.run();
        let failing: BTreeSet<String> = report.results.iter().filter(|r| r.verdict == Verdict::Fail).map(|r| clause_of(&r.id)).collect();
        let isolated = failing.len() == 1 && failing.contains(self.clause);
        let recorded = report.results.iter().find(|r| r.verdict == Verdict::Fail && clause_of(&r.id) == self.clause && r.witness.is_some());
        let replayed = match recorded {
            Some(r) => {
                let w = r.witness.as_ref().expect("filtered on witness");
                let again = suite.replay(&r.id, w)?;
                again.verdict == Verdict::Fail && again.witness.as_ref().is_some_and(|x| x.lhs == w.lhs && x.rhs == w.rhs)
            }
            None => false,
        };
        Ok(DefectOutcome { report, failing, isolated, replayed })
    }
}

/// Frozen tweak table: (target clause, base, tweaks).
type Row = (&'static str, &'static str, &'static [Tweak]);

use Slot::*;

const ALGEBRA: &[Row] = &[
    ("vacuum", "one_dim", &[tw(Op(-1), 0, 0, 1)]),
    ("creation", "exterior1", &[tw(Op(-1), 2, 1, -1)]),
    ("truncation", "exterior2", &[tw(Op(-2), 4, 3, 1)]),
    ("jacobi", "diffeps3", &[tw(Op(-1), 4, 0, 1)]),
    ("derivation_1", "diffeps3", &[tw(Op(-1), 4, 1, 1)]),
    ("derivation_2", "diffeps3", &[tw(Op(-1), 7, 0, 1)]),
];

/// Tweaks of the adjoint module of the base.
const MODULE: &[Row] = &[
    ("vacuum_mod", "one_dim", &[tw(Op(-1), 0, 0, -1)]),
    ("truncation_mod", "exterior2", &[tw(Op(-1), 4, 3, 1)]),
    ("jacobi_mod", "diffeps3", &[tw(Op(-1), 3, 0, 1)]),
    ("derivation_mod_1", "exterior1", &[tw(ModuleD, 0, 0, 1)]),
    ("derivation_mod_2", "diffeps3", &[tw(Op(-1), 6, 0, 1)]),
];

/// Tweaks of a Poisson algebra and its adjoint module.
const POISSON: &[(&str, Checker, &str, &[Tweak])] = &[
    ("associativity", Checker::GammaAlgebra, "square_zero", &[tw(Product, 4, 0, 1)]),
    ("unit_left", Checker::GammaAlgebra, "square_zero", &[tw(Product, 1, 1, -1)]),
    ("unit_right", Checker::GammaAlgebra, "square_zero", &[tw(Product, 3, 1, -1)]),
    ("beta_commutativity", Checker::CommutativeAlgebra, "matrix", &[]),
    ("lie_skew", Checker::Lie, "square_zero", &[tw(Bracket, 3, 0, 1)]),
    ("lie_jacobi", Checker::Lie, "square_zero", &[tw(Bracket, 1, 1, 1), tw(Bracket, 3, 1, -1)]),
    ("leibniz", Checker::Poisson, "square_zero", &[tw(Product, 4, 1, 1)]),
    ("module_associativity", Checker::AlgebraModule, "square_zero", &[tw(Action, 3, 0, 1)]),
    ("module_unit", Checker::AlgebraModule, "square_zero", &[tw(Action, 1, 1, -1), tw(Action, 3, 1, -1)]),
    ("lie_module", Checker::LieModule, "square_zero", &[tw(LieAction, 3, 1, 1)]),
    ("poisson_module_3", Checker::PoissonModule, "square_zero", &[tw(Action, 3, 1, 1)]),
    ("poisson_module_4", Checker::PoissonModule, "dual_numbers", &[tw(LieAction, 0, 0, 1), tw(LieAction, 1, 1, 1)]),
];

/// Co-side clause id and checker for each Poisson row, applied to the transposed fixture.
const CO_POISSON: &[(&str, Checker, &str)] = &[
    ("associativity", Checker::GammaCoalgebra, "coassociativity"),
    ("unit_left", Checker::GammaCoalgebra, "counit_right"),
    ("unit_right", Checker::GammaCoalgebra, "counit_left"),
    ("beta_commutativity", Checker::CocommutativeCoalgebra, "beta_cocommutativity"),
    ("lie_skew", Checker::CoLie, "colie_skew"),
    ("lie_jacobi", Checker::CoLie, "colie_jacobi"),
    ("leibniz", Checker::CoPoisson, "copoisson_compatibility"),
    ("module_associativity", Checker::CoalgebraComodule, "comodule_coassociativity"),
    ("module_unit", Checker::CoalgebraComodule, "comodule_counit"),
    ("lie_module", Checker::LieComodule, "lie_comodule"),
    ("poisson_module_3", Checker::CoPoissonComodule, "copoisson_comodule_3"),
    ("poisson_module_4", Checker::CoPoissonComodule, "copoisson_comodule_4"),
];

const CO_VERTEX: &[(&str, &str)] = &[
    ("vacuum", "covacuum"),
    ("creation", "cocreation"),
    ("truncation", "cotruncation"),
    ("jacobi", "cojacobi"),
    ("derivation_1", "coderivation_1"),
    ("derivation_2", "coderivation_2"),
    ("vacuum_mod", "covacuum_mod"),
    ("truncation_mod", "cotruncation_mod"),
    ("jacobi_mod", "cojacobi_mod"),
    ("derivation_mod_1", "coderivation_mod_1"),
    ("derivation_mod_2", "coderivation_mod_2"),
];

fn co_id(table: &[(&'static str, &'static str)], id: &str) -> &'static str {
    table.iter().find(|(a, _)| *a == id).map(|(_, b)| *b).expect("every row has a dual id")
}

fn recipe(base: &str, tweaks: &[Tweak]) -> String {
    let parts: Vec<String> = tweaks.iter().map(|t| format!("{:?}[{}][{}]{:+}", t.slot, t.col, t.row, t.delta)).collect();
    if parts.is_empty() {
        base.to_string()
    } else {
        format!("{base} {}", parts.join(" "))
    }
}

fn poisson_base(name: &str) -> PoissonAlgebra {
    match name {
        "square_zero" => square_zero_poisson(),
        "dual_numbers" => dual_numbers_poisson(),
        "matrix" => matrix_poisson(),
        _ => unreachable!("table names a known base"),
    }
}

/// Every planted defect, vertex rows first, then their duals, then the Poisson rows and
/// their transposes.
pub fn catalogue() -> Vec<Defect> {
    let mut out = Vec::new();
    let mut co = Vec::new();
    for (clause, base, tweaks) in ALGEBRA {
        let a = tweak_algebra(&by_name(base).expect("known base"), tweaks).expect("tweak keeps the shape");
        let r = recipe(base, tweaks);
        let (c, _) = dualize_algebra(&a).expect("parity holds on every base");
        co.push(Defect {
            clause: co_id(CO_VERTEX, clause),
            recipe: format!("dual of {r}"),
            checker: Checker::Coalgebra,
            fixture: Fixture::Coalgebra(c),
        });
        out.push(Defect { clause, recipe: r, checker: Checker::Algebra, fixture: Fixture::Algebra(a) });
    }
    for (clause, base, tweaks) in MODULE {
        let m = tweak_module(&adjoint_module(&by_name(base).expect("known base")), tweaks).expect("tweak keeps the shape");
        let r = recipe(&format!("adjoint({base})"), tweaks);
        let (c, _) = dualize_module(&m).expect("parity holds on every base");
        co.push(Defect {
            clause: co_id(CO_VERTEX, clause),
            recipe: format!("dual of {r}"),
            checker: Checker::Comodule,
            fixture: Fixture::Comodule(c),
        });
        out.push(Defect { clause, recipe: r, checker: Checker::Module, fixture: Fixture::Module(m) });
    }
    out.append(&mut co);
    let mut co = Vec::new();
    for (clause, checker, base, tweaks) in POISSON {
        let p0 = poisson_base(base);
        let m0 = adjoint_poisson_module(&p0);
        let (pt, mt): (Vec<Tweak>, Vec<Tweak>) = tweaks.iter().partition(|t| matches!(t.slot, Product | Bracket | Unit));
        let p = tweak_poisson(&p0, &pt);
        let m = tweak_poisson_module(&m0, &mt);
        let r = recipe(base, tweaks);
        let (co_clause, co_checker) =
            CO_POISSON.iter().find(|(c, _, _)| c == clause).map(|(_, k, d)| (*d, *k)).expect("every row has a transpose");
        co.push(Defect {
            clause: co_clause,
            recipe: format!("transpose of {r}"),
            checker: co_checker,
            fixture: Fixture::CoPoisson(transpose_poisson(&p), transpose_poisson_module(&p, &m)),
        });
        out.push(Defect { clause, recipe: r, checker: *checker, fixture: Fixture::Poisson(p, m) });
    }
    out.append(&mut co);
    out
}
