//! Restricted duals: vertex algebra <-> vertex coalgebra on V', module <-> comodule on M'.
//!
//! Pairing convention: <f (x) g, u (x) v> = g(u) f(v).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamma::{check_beta_relation, RelationKind};
use crate::graded::{GradedError, GradedMap, GradedSpace, Vector};
use crate::report::AxiomResult;
use crate::vertex::{hypothesis_domain, VertexAlgebra, VertexCoalgebra, VertexComodule, VertexError, VertexModule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualityError {
    #[error("precondition refused: {}", .0.note.clone().unwrap_or_default())]
    Refused(Box<AxiomResult>),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Vertex(#[from] VertexError),
}

/// One degree block of the pairing V'_{-g} (x) V_g -> k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingBlock {
    pub degree: String,
    pub dual_labels: Vec<String>,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityWitness {
    pub source: String,
    pub target: String,
    pub pairing: Vec<PairingBlock>,
}

/// Dual-basis pairing blocks between `v` and `v.dual()`.
pub fn pairing_blocks(v: &GradedSpace) -> Vec<PairingBlock> {
    let dual = v.dual();
    let mut by_degree: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for i in 0..v.dim() {
        by_degree.entry(v.degree(i).clone()).or_default().push(i);
    }
    by_degree
        .into_iter()
        .map(|(d, idx)| PairingBlock {
            degree: d.to_string(),
            dual_labels: idx.iter().map(|i| dual.label(*i).to_string()).collect(),
            labels: idx.iter().map(|i| v.label(*i).to_string()).collect(),
            matrix: idx.iter().map(|r| idx.iter().map(|c| if r == c { "1".to_string() } else { "0".to_string() }).collect()).collect(),
        })
        .collect()
}

/// f: A (x) B -> C gives C' -> B' (x) A'; the coefficient of b_p* (x) a_q* in the image
/// of c_c* is the c-coefficient of f(a_q (x) b_p).
pub fn dual_of_product(f: &GradedMap, a: &GradedSpace, b: &GradedSpace) -> Result<GradedMap, GradedError> {
    let c = f.target();
    let (da, db) = (a.dim(), b.dim());
    let mut cols = vec![Vec::new(); c.dim()];
    for q in 0..da {
        for p in 0..db {
            for (k, x) in f.col(q * db + p).entries() {
                cols[*k].push((p * da + q, x.clone()));
            }
        }
    }
    GradedMap::new_unchecked(
        c.dual(),
        b.dual().tensor(&a.dual())?,
        f.degree().clone(),
        cols.into_iter().map(Vector::from_entries).collect(),
    )
}

/// g: C -> A (x) B gives B' (x) A' -> C'; the image of b_p* (x) a_q* has c-coefficient
/// equal to the (a_q (x) b_p)-coefficient of g(c_c).
pub fn dual_of_coproduct(g: &GradedMap, a: &GradedSpace, b: &GradedSpace) -> Result<GradedMap, GradedError> {
    let c = g.source();
    let (da, db) = (a.dim(), b.dim());
    let mut cols = vec![Vec::new(); da * db];
    for k in 0..c.dim() {
        for (idx, x) in g.col(k).entries() {
            let (q, p) = (idx / db, idx % db);
            cols[p * da + q].push((k, x.clone()));
        }
    }
    GradedMap::new_unchecked(
        b.dual().tensor(&a.dual())?,
        c.dual(),
        g.degree().clone(),
        cols.into_iter().map(Vector::from_entries).collect(),
    )
}

fn require_parity(spaces: &[&GradedSpace], beta: &crate::gamma::BetaSpec, gamma0: &crate::gamma::GroupElement) -> Result<(), DualityError> {
    let domain = hypothesis_domain(spaces);
    let r = check_beta_relation(spaces[0].spec(), beta, gamma0, RelationKind::Parity, &domain);
    if r.is_pass() {
        Ok(())
    } else {
        let note = "beta fails the parity relation on the support box".to_string();
        Err(DualityError::Refused(Box::new(AxiomResult { note: Some(note), ..r })))
    }
}

fn witness(source: &str, target: &str, v: &GradedSpace) -> DualityWitness {
    DualityWitness { source: source.into(), target: target.into(), pairing: pairing_blocks(v) }
}

pub fn dualize_algebra(a: &VertexAlgebra) -> Result<(VertexCoalgebra, DualityWitness), DualityError> {
    require_parity(&[&a.space], &a.beta, &a.gamma0)?;
    let v = &a.space;
    let coops = a.ops.iter().map(|(n, y)| Ok((*n, dual_of_product(y, v, v)?))).collect::<Result<BTreeMap<_, _>, GradedError>>()?;
    let c = VertexCoalgebra::new(v.dual(), a.gamma0.clone(), a.beta.clone(), a.window, coops, a.vacuum.clone())?;
    Ok((c, witness("vertex algebra", "vertex coalgebra", v)))
}

pub fn dualize_coalgebra(c: &VertexCoalgebra) -> Result<(VertexAlgebra, DualityWitness), DualityError> {
    require_parity(&[&c.space], &c.beta, &c.gamma0)?;
    let v = &c.space;
    let ops = c.coops.iter().map(|(n, y)| Ok((*n, dual_of_coproduct(y, v, v)?))).collect::<Result<BTreeMap<_, _>, GradedError>>()?;
    let a = VertexAlgebra::new(v.dual(), c.gamma0.clone(), c.beta.clone(), c.window, ops, c.covacuum.clone())?;
    Ok((a, witness("vertex coalgebra", "vertex algebra", v)))
}

pub fn dualize_module(m: &VertexModule) -> Result<(VertexComodule, DualityWitness), DualityError> {
    require_parity(&[&m.base.space, &m.mspace], &m.base.beta, &m.base.gamma0)?;
    let (base, _) = dualize_algebra(&m.base)?;
    let comops = m
        .mops
        .iter()
        .map(|(n, y)| Ok((*n, dual_of_product(y, &m.base.space, &m.mspace)?)))
        .collect::<Result<BTreeMap<_, _>, GradedError>>()?;
    let cod_m = m.d_m.as_ref().map(|d| d.transpose());
    let c = VertexComodule::new(base, m.mspace.dual(), m.window, comops, cod_m, m.omega.clone())?;
    Ok((c, witness("vertex module", "vertex comodule", &m.mspace)))
}

pub fn dualize_comodule(n: &VertexComodule) -> Result<(VertexModule, DualityWitness), DualityError> {
    require_parity(&[&n.base.space, &n.mspace], &n.base.beta, &n.base.gamma0)?;
    let (base, _) = dualize_coalgebra(&n.base)?;
    let mops = n
        .comops
        .iter()
        .map(|(k, y)| Ok((*k, dual_of_coproduct(y, &n.mspace, &n.base.space)?)))
        .collect::<Result<BTreeMap<_, _>, GradedError>>()?;
    let d_m = n.cod_m.as_ref().map(|d| d.transpose());
    let m = VertexModule::new(base, n.mspace.dual(), n.window, mops, d_m, n.rho.clone())?;
    Ok((m, witness("vertex comodule", "vertex module", &n.mspace)))
}

fn same_map(f: &GradedMap, g: &GradedMap) -> bool {
    f.degree() == g.degree()
        && f.cols() == g.cols()
        && f.source().degrees() == g.source().degrees()
        && f.target().degrees() == g.target().degrees()
}

fn same_ops(a: &BTreeMap<i64, GradedMap>, b: &BTreeMap<i64, GradedMap>) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|((n, f), (k, g))| n == k && same_map(f, g))
}

/// Equality of `a` and `b` after identifying V with V'' by the canonical evaluation map.
pub fn agrees_under_double_dual(a: &VertexAlgebra, b: &VertexAlgebra) -> bool {
    let id = crate::graded::double_dual_identify(&a.space);
    id.target().degrees() == b.space.degrees()
        && id.cols().iter().enumerate().all(|(i, c)| c == &Vector::basis(i))
        && a.gamma0 == b.gamma0
        && a.beta == b.beta
        && a.window == b.window
        && a.vacuum == b.vacuum
        && same_ops(&a.ops, &b.ops)
}

pub fn module_agrees_under_double_dual(m: &VertexModule, n: &VertexModule) -> bool {
    agrees_under_double_dual(&m.base, &n.base)
        && m.mspace.degrees() == n.mspace.degrees()
        && m.window == n.window
        && same_ops(&m.mops, &n.mops)
        && match (&m.d_m, &n.d_m) {
            (Some(x), Some(y)) => same_map(x, y),
            (None, None) => true,
            _ => false,
        }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{one_dim, upper_triangular};
    use crate::scalars::Scalar;

    #[test]
    fn one_dim_dual() {
        let a = one_dim();
        let (c, w) = dualize_algebra(&a).unwrap();
        assert_eq!(c.coop(-1).unwrap().col(0), &Vector::basis(0));
        assert_eq!(c.covacuum.coeff(0), Scalar::one());
        assert_eq!(c.space.label(0), "1*");
        assert_eq!(w.pairing.len(), 1);
    }

    #[test]
    fn slot_convention() {
        // Y(e11 (x) e12) = e12 and Y(e12 (x) e11) = 0 in the upper-triangular algebra.
        let a = upper_triangular();
        let (c, _) = dualize_algebra(&a).unwrap();
        let y = c.coop(-1).unwrap();
        let d = 3;
        let at = |i: usize, j: usize| y.col(1).coeff(i * d + j);
        // coefficient of e12* (x) e11* in Y(e12*) is y^{e12}_{e11,e12} = 1
        assert_eq!(at(1, 0), Scalar::one());
        assert_eq!(at(0, 1), Scalar::zero());
    }
}
