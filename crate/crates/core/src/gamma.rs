//! Finitely generated abelian groups, the twisting maps beta and their relations.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::report::{AxiomResult, Clause, Suite};
use crate::scalars::{Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GammaError {
    #[error("group mismatch: element has {got} coordinates, group expects {expected}")]
    SpecMismatch { expected: usize, got: usize },
    #[error("beta table has no entry for ({0}, {1})")]
    TableMiss(GroupElement, GroupElement),
    #[error("beta matrix is {rows}x{cols}, group rank is {rank}")]
    FormShape { rows: usize, cols: usize, rank: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Z^r x Z/m_1 x ... x Z/m_s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupSpec {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement(pub Vec<i64>);

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl GroupSpec {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Self {
        assert!(torsion.iter().all(|m| *m >= 2), "torsion moduli must be >= 2");
        GroupSpec { free_rank, torsion }
    }

    /// The group Z.
    pub fn integers() -> Self {
        GroupSpec::new(1, vec![])
    }

    pub fn trivial() -> Self {
        GroupSpec::new(0, vec![])
    }

    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    fn reduce_in_place(&self, v: &mut [i64]) {
        for (k, m) in self.torsion.iter().enumerate() {
            let c = &mut v[self.free_rank + k];
            *c = c.rem_euclid(*m);
        }
    }

    /// Element with torsion coordinates reduced; the bool reports whether any reduction happened.
    pub fn element_reporting(&self, coords: Vec<i64>) -> Result<(GroupElement, bool), GammaError> {
        if coords.len() != self.rank() {
            return Err(GammaError::SpecMismatch { expected: self.rank(), got: coords.len() });
        }
        let mut v = coords.clone();
        self.reduce_in_place(&mut v);
        let changed = v != coords;
        Ok((GroupElement(v), changed))
    }

    pub fn element(&self, coords: Vec<i64>) -> Result<GroupElement, GammaError> {
        Ok(self.element_reporting(coords)?.0)
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.rank() && self.torsion.iter().enumerate().all(|(k, m)| (0..*m).contains(&g.0[self.free_rank + k]))
    }

    fn check(&self, g: &GroupElement) -> Result<(), GammaError> {
        if g.0.len() != self.rank() {
            return Err(GammaError::SpecMismatch { expected: self.rank(), got: g.0.len() });
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GammaError> {
        self.check(a)?;
        self.check(b)?;
        let mut v: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        self.reduce_in_place(&mut v);
        Ok(GroupElement(v))
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let mut v: Vec<i64> = a.0.iter().map(|x| -x).collect();
        self.reduce_in_place(&mut v);
        GroupElement(v)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GammaError> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        let mut v: Vec<i64> = a.0.iter().map(|x| x * k).collect();
        self.reduce_in_place(&mut v);
        GroupElement(v)
    }

    /// Every element whose free coordinates lie in [lo, hi]; torsion coordinates range fully.
    pub fn box_elements(&self, lo: i64, hi: i64) -> Vec<GroupElement> {
        let ranges: Vec<(i64, i64)> = (0..self.free_rank).map(|_| (lo, hi)).chain(self.torsion.iter().map(|m| (0, m - 1))).collect();
        box_product(&ranges).into_iter().map(GroupElement).collect()
    }

    /// Elements in the coordinatewise hull of `support` scaled by `factor` (free part only).
    pub fn hull(&self, support: &[GroupElement], factor: i64) -> Vec<GroupElement> {
        let mut ranges: Vec<(i64, i64)> = Vec::new();
        for k in 0..self.free_rank {
            let lo = support.iter().map(|g| g.0[k]).min().unwrap_or(0).min(0);
            let hi = support.iter().map(|g| g.0[k]).max().unwrap_or(0).max(0);
            ranges.push((factor * lo, factor * hi));
        }
        for m in &self.torsion {
            ranges.push((0, m - 1));
        }
        box_product(&ranges).into_iter().map(GroupElement).collect()
    }
}

pub(crate) fn box_product(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (lo, hi) in ranges {
        let mut next = Vec::new();
        for prefix in &out {
            for c in *lo..=*hi {
                let mut p = prefix.clone();
                p.push(c);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaSpec {
    One,
    Zero,
    /// (-1)^(a^T B b)
    Sign(Vec<Vec<i64>>),
    /// q^(a^T B b)
    QBilinear {
        q: Scalar,
        form: Vec<Vec<i64>>,
    },
    Table(BTreeMap<(GroupElement, GroupElement), Scalar>),
    Product(Vec<BetaSpec>),
}

fn bilinear(form: &[Vec<i64>], a: &GroupElement, b: &GroupElement) -> Result<i64, GammaError> {
    let rank = a.0.len();
    if form.len() != rank || form.iter().any(|r| r.len() != rank) {
        return Err(GammaError::FormShape { rows: form.len(), cols: form.first().map_or(0, |r| r.len()), rank });
    }
    let mut e = 0i64;
    for (i, row) in form.iter().enumerate() {
        for (j, bij) in row.iter().enumerate() {
            e += a.0[i] * bij * b.0[j];
        }
    }
    Ok(e)
}

impl BetaSpec {
    pub fn eval(&self, a: &GroupElement, b: &GroupElement) -> Result<Scalar, GammaError> {
        match self {
            BetaSpec::One => Ok(Scalar::one()),
            BetaSpec::Zero => Ok(Scalar::zero()),
            BetaSpec::Sign(form) => {
                let e = bilinear(form, a, b)?;
                Ok(Scalar::from_i64(if e.rem_euclid(2) == 0 { 1 } else { -1 }))
            }
            BetaSpec::QBilinear { q, form } => {
                let e = bilinear(form, a, b)?;
                Ok(q.pow(e)?)
            }
            BetaSpec::Table(t) => t.get(&(a.clone(), b.clone())).cloned().ok_or_else(|| GammaError::TableMiss(a.clone(), b.clone())),
            BetaSpec::Product(parts) => {
                let mut acc = Scalar::one();
                for p in parts {
                    acc = acc.checked_mul(&p.eval(a, b)?)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn is_zero_kind(&self) -> bool {
        matches!(self, BetaSpec::Zero)
    }
}

/// beta(a, b).
pub fn beta_eval(beta: &BetaSpec, a: &GroupElement, b: &GroupElement) -> Result<Scalar, GammaError> {
    beta.eval(a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelationKind {
    Parity,
    Multiplicative,
    Cocycle,
    UnitRight,
    InverseSym,
    Shift2Gamma0,
    Unit2Gamma0Left,
}

impl RelationKind {
    pub const ALL: [RelationKind; 7] = [
        RelationKind::Parity,
        RelationKind::Multiplicative,
        RelationKind::Cocycle,
        RelationKind::UnitRight,
        RelationKind::InverseSym,
        RelationKind::Shift2Gamma0,
        RelationKind::Unit2Gamma0Left,
    ];

    pub fn arity(self) -> usize {
        match self {
            RelationKind::UnitRight | RelationKind::Unit2Gamma0Left => 1,
            RelationKind::Parity | RelationKind::InverseSym | RelationKind::Shift2Gamma0 => 2,
            RelationKind::Multiplicative | RelationKind::Cocycle => 3,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            RelationKind::Parity => "beta_parity",
            RelationKind::Multiplicative => "beta_multiplicative",
            RelationKind::Cocycle => "beta_cocycle",
            RelationKind::UnitRight => "beta_unit_right",
            RelationKind::InverseSym => "beta_inverse_symmetric",
            RelationKind::Shift2Gamma0 => "beta_shift_2gamma0",
            RelationKind::Unit2Gamma0Left => "beta_unit_2gamma0_left",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            RelationKind::Parity => "relation_parity",
            RelationKind::Multiplicative => "relation_multiplicative",
            RelationKind::Cocycle => "relation_cocycle",
            RelationKind::UnitRight => "translation_hyp_unit",
            RelationKind::InverseSym => "translation_hyp_inverse",
            RelationKind::Shift2Gamma0 => "translation_hyp_shift",
            RelationKind::Unit2Gamma0Left => "module_translation_hyp",
        }
    }

    pub fn from_id(s: &str) -> Option<RelationKind> {
        RelationKind::ALL.into_iter().find(|r| r.id() == s)
    }
}

fn scalar_pair(l: Scalar, r: Scalar) -> (crate::graded::Vector, crate::graded::Vector) {
    (crate::graded::Vector::scalar(l), crate::graded::Vector::scalar(r))
}

/// Both sides of a relation at one tuple of group elements.
pub fn relation_sides(
    spec: &GroupSpec,
    beta: &BetaSpec,
    gamma0: &GroupElement,
    rel: RelationKind,
    g: &[GroupElement],
) -> Result<(Scalar, Scalar), GammaError> {
    let b = |x: &GroupElement, y: &GroupElement| beta.eval(x, y);
    let two_g0 = spec.scale(2, gamma0);
    Ok(match rel {
        RelationKind::Parity => (b(&g[0], &g[1])?, b(&spec.neg(&g[0]), &spec.neg(&g[1]))?),
        RelationKind::Multiplicative => (b(&g[0], &g[1])?.checked_mul(&b(&g[0], &g[2])?)?, b(&g[0], &spec.add(&g[1], &g[2])?)?),
        RelationKind::Cocycle => {
            let ab = spec.add(&g[0], &g[1])?;
            let bc = spec.add(&g[1], &g[2])?;
            (b(&g[0], &g[1])?.checked_mul(&b(&ab, &g[2])?)?, b(&g[1], &g[2])?.checked_mul(&b(&g[0], &bc)?)?)
        }
        RelationKind::UnitRight => (b(&g[0], &spec.zero())?, Scalar::one()),
        RelationKind::InverseSym => (b(&g[0], &g[1])?.checked_mul(&b(&g[1], &g[0])?)?, Scalar::one()),
        RelationKind::Shift2Gamma0 => (b(&g[0], &g[1])?, b(&g[0], &spec.sub(&g[1], &two_g0)?)?),
        RelationKind::Unit2Gamma0Left => {
            let l = b(&spec.neg(&two_g0), &g[0])?;
            let r = b(&two_g0, &g[0])?;
            // both must be 1; report the first one that is not
            if !l.is_one() {
                (l, Scalar::one())
            } else {
                (r, Scalar::one())
            }
        }
    })
}

/// Clause checking one relation on all tuples drawn from `domain`.
pub fn relation_clause<'a>(
    spec: &'a GroupSpec,
    beta: &'a BetaSpec,
    gamma0: &'a GroupElement,
    rel: RelationKind,
    domain: &[GroupElement],
) -> Clause<'a> {
    let arity = rel.arity();
    let rank = spec.rank();
    let mut names = Vec::new();
    for k in 0..arity {
        for c in 0..rank {
            names.push(format!("g{}.{}", k + 1, c));
        }
    }
    let mut outer = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for prefix in &outer {
            for g in domain {
                let mut p: Vec<i64> = prefix.clone();
                p.extend_from_slice(&g.0);
                next.push(p);
            }
        }
        outer = next;
    }
    Clause::new(rel.id(), rel.anchor(), names, outer, vec![], None, move |exps, _| {
        let g: Vec<GroupElement> = exps.chunks(rank.max(1)).take(arity).map(|c| GroupElement(c[..rank].to_vec())).collect();
        let g = if rank == 0 { vec![GroupElement(vec![]); arity] } else { g };
        let (l, r) = relation_sides(spec, beta, gamma0, rel, &g).map_err(|e| e.to_string())?;
        Ok(scalar_pair(l, r))
    })
}

/// Suite of the requested relations on a finite box of group elements.
pub fn beta_relation_suite<'a>(
    spec: &'a GroupSpec,
    beta: &'a BetaSpec,
    gamma0: &'a GroupElement,
    relations: &[RelationKind],
    domain: &[GroupElement],
) -> Suite<'a> {
    let mut suite = Suite::new("beta");
    for rel in relations {
        if domain.is_empty() {
            suite.push(AxiomResult::refused(rel.id(), rel.anchor(), "empty sample domain"));
        } else {
            suite.push_clause(relation_clause(spec, beta, gamma0, *rel, domain));
        }
    }
    suite
}

/// Runs a single relation check and returns its result.
pub fn check_beta_relation(
    spec: &GroupSpec,
    beta: &BetaSpec,
    gamma0: &GroupElement,
    rel: RelationKind,
    domain: &[GroupElement],
) -> AxiomResult {
    beta_relation_suite(spec, beta, gamma0, &[rel], domain).run().results.remove(0)
}

/// True iff the relation holds on every tuple of the domain (errors count as failure).
pub fn relation_holds(spec: &GroupSpec, beta: &BetaSpec, gamma0: &GroupElement, rel: RelationKind, domain: &[GroupElement]) -> bool {
    check_beta_relation(spec, beta, gamma0, rel, domain).verdict == crate::report::Verdict::Pass
}

/// The cactus relation for beta on three graded spaces, with both transpositions twisted.
///
/// Compares beta(|a|,|b|) beta(|a|+|b|,|c|) with beta(|b|,|c|) beta(|a|,|b|+|c|) on every
/// basis triple; the cocycle relation on the degree box is checked first.
pub fn cactus_suite<'a>(beta: &'a BetaSpec, spaces: [&'a crate::graded::GradedSpace; 3]) -> Suite<'a> {
    let mut suite = Suite::new("beta");
    let spec = spaces[0].spec();
    let mut degs: Vec<GroupElement> = Vec::new();
    for s in spaces {
        for d in s.degrees() {
            if !degs.contains(d) {
                degs.push(d.clone());
            }
        }
    }
    degs.sort();
    let items: Vec<Vec<i64>> = {
        let mut out = Vec::new();
        for a in &degs {
            for b in &degs {
                for c in &degs {
                    let mut v = a.0.clone();
                    v.extend_from_slice(&b.0);
                    v.extend_from_slice(&c.0);
                    out.push(v);
                }
            }
        }
        out
    };
    let rank = spec.rank();
    let cocycle_ok = items.iter().all(|v| {
        let g: Vec<GroupElement> = (0..3).map(|k| GroupElement(v[k * rank..(k + 1) * rank].to_vec())).collect();
        matches!(
            relation_sides(spec, beta, &spec.zero(), RelationKind::Cocycle, &g),
            Ok((l, r)) if l == r
        )
    });
    if !cocycle_ok {
        suite.push(AxiomResult::refused("cactus", "cactus_relation", "beta fails the cocycle relation on the degree box"));
        return suite;
    }
    let spec = spaces[0].spec();
    suite.push_clause(Clause::new(
        "cactus",
        "cactus_relation",
        vec![],
        vec![vec![]],
        spaces.iter().map(|s| (*s).clone()).collect(),
        None,
        move |_, idx| {
            let da = spaces[0].degree(idx[0]);
            let db = spaces[1].degree(idx[1]);
            let dc = spaces[2].degree(idx[2]);
            let e = |e: GammaError| e.to_string();
            let ab = spec.add(da, db).map_err(e)?;
            let bc = spec.add(db, dc).map_err(e)?;
            let l = beta.eval(da, db).map_err(e)? * beta.eval(&ab, dc).map_err(e)?;
            let r = beta.eval(db, dc).map_err(e)? * beta.eval(da, &bc).map_err(e)?;
            Ok(scalar_pair(l, r))
        },
    ));
    suite
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_add() {
        let z2 = GroupSpec::new(2, vec![]);
        let a = z2.element(vec![1, 0]).unwrap();
        let b = z2.element(vec![0, 1]).unwrap();
        assert_eq!(z2.add(&a, &b).unwrap(), GroupElement(vec![1, 1]));
        let t = GroupSpec::new(0, vec![2]);
        let one = t.element(vec![1]).unwrap();
        assert_eq!(t.add(&one, &one).unwrap(), GroupElement(vec![0]));
        let z = GroupSpec::integers();
        assert_eq!(z.add(&GroupElement(vec![3]), &GroupElement(vec![-1])).unwrap(), GroupElement(vec![2]));
        assert!(z.add(&GroupElement(vec![3]), &GroupElement(vec![1, 1])).is_err());
    }

    #[test]
    fn beta_values() {
        let s = BetaSpec::Sign(vec![vec![1]]);
        assert_eq!(s.eval(&GroupElement(vec![2]), &GroupElement(vec![3])).unwrap(), Scalar::one());
        assert_eq!(s.eval(&GroupElement(vec![3]), &GroupElement(vec![3])).unwrap(), Scalar::from_i64(-1));
        let q = BetaSpec::QBilinear { q: Scalar::zeta(4).unwrap(), form: vec![vec![0, 1], vec![-1, 0]] };
        assert_eq!(q.eval(&GroupElement(vec![1, 0]), &GroupElement(vec![0, 1])).unwrap(), Scalar::zeta(4).unwrap());
        let t = BetaSpec::Table(BTreeMap::new());
        assert!(matches!(t.eval(&GroupElement(vec![0]), &GroupElement(vec![0])), Err(GammaError::TableMiss(..))));
    }
}
