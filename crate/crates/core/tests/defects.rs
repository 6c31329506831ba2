use std::collections::BTreeSet;

use vakit::builders::{adjoint_module, diffeps3};
use vakit::c2::{
    algebra_module_suite, beta_cocommutative_suite, beta_commutative_suite, c2_module, co_c2_comodule, coalgebra_comodule_suite,
    colie_suite, copoisson_comodule_suite, copoisson_suite, gamma_algebra_suite, gamma_coalgebra_suite, lie_comodule_suite,
    lie_module_suite, lie_suite, poisson_module_suite, poisson_suite,
};
use vakit::defects::catalogue;
use vakit::duality::{dualize_algebra, dualize_module};
use vakit::report::Suite;
use vakit::vertex::{algebra_suite, coalgebra_suite, comodule_suite, module_suite};
use vakit::Verdict;

/// Clauses that no single planted defect can break alone: jacobi together with
/// creation forces them, so any fixture breaking one breaks a partner as well.
const COUPLED: [&str; 8] =
    ["vacuum", "derivation_1", "derivation_2", "derivation_mod_2", "covacuum", "coderivation_1", "coderivation_2", "coderivation_mod_2"];

fn fold(id: &str) -> String {
    id.strip_suffix("_shell").unwrap_or(id).to_string()
}

/// Checked clause ids of a suite; informational entries are not clauses.
fn clauses(s: Suite<'_>) -> Vec<String> {
    s.run().results.into_iter().filter(|r| r.verdict != Verdict::Info).map(|r| fold(&r.id)).collect()
}

fn every_definition_clause() -> BTreeSet<String> {
    let a = diffeps3();
    let m = adjoint_module(&a);
    let (c, _) = dualize_algebra(&a).unwrap();
    let (n, _) = dualize_module(&m).unwrap();
    let (p, pm) = c2_module(&m).unwrap();
    let (k, km) = co_c2_comodule(&n).unwrap();
    let mut ids = Vec::new();
    ids.extend(clauses(algebra_suite(&a, None)));
    ids.extend(clauses(coalgebra_suite(&c, None).unwrap()));
    ids.extend(clauses(module_suite(&m, None)));
    ids.extend(clauses(comodule_suite(&n, None).unwrap()));
    ids.extend(clauses(gamma_algebra_suite(&p)));
    ids.extend(clauses(beta_commutative_suite(&p)));
    ids.extend(clauses(lie_suite(&p.carrier, &p.bracket, &p.beta)));
    ids.extend(clauses(poisson_suite(&p)));
    ids.extend(clauses(algebra_module_suite(&p, &pm)));
    ids.extend(clauses(lie_module_suite(&p, &pm)));
    ids.extend(clauses(poisson_module_suite(&p, &pm)));
    ids.extend(clauses(gamma_coalgebra_suite(&k).unwrap()));
    ids.extend(clauses(beta_cocommutative_suite(&k).unwrap()));
    ids.extend(clauses(colie_suite(&k.carrier, &k.cobracket, &k.beta).unwrap()));
    ids.extend(clauses(copoisson_suite(&k).unwrap()));
    ids.extend(clauses(coalgebra_comodule_suite(&k, &km).unwrap()));
    ids.extend(clauses(lie_comodule_suite(&k, &km).unwrap()));
    ids.extend(clauses(copoisson_comodule_suite(&k, &km).unwrap()));
    ids.into_iter().collect()
}

#[test]
fn catalogue_covers_every_clause() {
    let targets: BTreeSet<String> = catalogue().iter().map(|d| d.clause.to_string()).collect();
    let missing: Vec<_> = every_definition_clause().difference(&targets).cloned().collect();
    assert!(missing.is_empty(), "no defect for {missing:?}");
}

#[test]
fn every_defect_fails_its_clause_and_replays() {
    let mut isolated = BTreeSet::new();
    for d in catalogue() {
        let o = d.evaluate().unwrap();
        assert!(o.failing.contains(d.clause), "{} ({}) fails {:?}", d.clause, d.recipe, o.failing);
        assert!(o.replayed, "{} does not replay", d.clause);
        if o.isolated {
            isolated.insert(d.clause);
        }
    }
    let all: BTreeSet<&str> = catalogue().iter().map(|d| d.clause).collect();
    let coupled: BTreeSet<&str> = all.difference(&isolated).copied().collect();
    assert_eq!(coupled, COUPLED.into_iter().collect());
}
