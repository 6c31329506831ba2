//! Fixture constructors: vertex algebras from algebras with a nilpotent derivation,
//! exterior algebras, and free/adjoint modules.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gamma::{BetaSpec, GroupElement, GroupSpec};
use crate::graded::{GradedError, GradedMap, GradedSpace, Vector};
use crate::scalars::{factorial, Rational, Scalar};
use crate::vertex::{VertexAlgebra, VertexError, VertexModule, Window};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuilderError {
    #[error("product is not commutative on ({0}, {1})")]
    NotCommutative(String, String),
    #[error("product is not associative on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("unit is not a two-sided unit on {0}")]
    NotUnital(String),
    #[error("D(1) is not zero")]
    DOfUnit,
    #[error("D is not a derivation on ({0}, {1})")]
    NotDerivation(String, String),
    #[error("D is not nilpotent")]
    NotNilpotent,
    #[error("the product must have degree 0 and D degree 0")]
    Degree,
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Vertex(#[from] VertexError),
}

/// A finite-dimensional unital algebra with a derivation, as structure constants.
#[derive(Clone, Debug)]
pub struct DifferentialAlgebraSpec {
    pub space: GradedSpace,
    /// V (x) V -> V.
    pub product: GradedMap,
    pub unit: Vector,
    /// V -> V.
    pub derivation: GradedMap,
}

impl DifferentialAlgebraSpec {
    fn mul(&self, a: &Vector, b: &Vector) -> Vector {
        self.product.apply_bilinear(a, b, self.space.dim())
    }

    fn label(&self, i: usize) -> String {
        self.space.label(i).to_string()
    }

    fn check_associative_unital(&self) -> Result<(), BuilderError> {
        let d = self.space.dim();
        for i in 0..d {
            let e = Vector::basis(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(BuilderError::NotUnital(self.label(i)));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = self.mul(&Vector::basis(i), &Vector::basis(j));
                for k in 0..d {
                    let ek = Vector::basis(k);
                    let left = self.mul(&ij, &ek);
                    let right = self.mul(&Vector::basis(i), &self.mul(&Vector::basis(j), &ek));
                    if left != right {
                        return Err(BuilderError::NotAssociative(self.label(i), self.label(j), self.label(k)));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_commutative(&self) -> Result<(), BuilderError> {
        let d = self.space.dim();
        for i in 0..d {
            for j in i + 1..d {
                let (a, b) = (Vector::basis(i), Vector::basis(j));
                if self.mul(&a, &b) != self.mul(&b, &a) {
                    return Err(BuilderError::NotCommutative(self.label(i), self.label(j)));
                }
            }
        }
        Ok(())
    }

    fn check_derivation(&self) -> Result<(), BuilderError> {
        if !self.derivation.apply(&self.unit).is_zero() {
            return Err(BuilderError::DOfUnit);
        }
        let d = self.space.dim();
        for i in 0..d {
            for j in 0..d {
                let (a, b) = (Vector::basis(i), Vector::basis(j));
                let lhs = self.derivation.apply(&self.mul(&a, &b));
                let rhs = self.mul(&self.derivation.apply(&a), &b).add(&self.mul(&a, &self.derivation.apply(&b)));
                if lhs != rhs {
                    return Err(BuilderError::NotDerivation(self.label(i), self.label(j)));
                }
            }
        }
        Ok(())
    }

    /// Least k with D^k = 0.
    fn nilpotency_index(&self) -> Result<i64, BuilderError> {
        let d = self.space.dim();
        for k in 0..=d as i64 {
            let dead = (0..d).all(|i| {
                let mut v = Vector::basis(i);
                for _ in 0..k {
                    v = self.derivation.apply(&v);
                }
                v.is_zero()
            });
            if dead {
                return Ok(k.max(1));
            }
        }
        Err(BuilderError::NotNilpotent)
    }

    fn check_degrees(&self) -> Result<(), BuilderError> {
        let zero = self.space.spec().zero();
        if self.product.degree() != &zero || self.derivation.degree() != &zero {
            return Err(BuilderError::Degree);
        }
        Ok(())
    }
}

/// Y_n(u (x) v) = D^(-n-1)(u) v / (-n-1)! for n <= -1, with no checks on the input.
pub fn from_formula(spec: &DifferentialAlgebraSpec, beta: BetaSpec, depth: i64) -> Result<VertexAlgebra, BuilderError> {
    let v = &spec.space;
    let vv = v.tensor(v)?;
    let d = v.dim();
    let mut ops = BTreeMap::new();
    for j in 0..depth {
        let n = -j - 1;
        let inv = Scalar::from_rational(Rational::new(1.into(), factorial(j as u64)));
        let cols: Vec<Vector> = (0..d * d)
            .map(|k| {
                let mut u = Vector::basis(k / d);
                for _ in 0..j {
                    u = spec.derivation.apply(&u);
                }
                spec.mul(&u, &Vector::basis(k % d)).scale(&inv)
            })
            .collect();
        if cols.iter().any(|c| !c.is_zero()) {
            ops.insert(n, GradedMap::new_unchecked(vv.clone(), v.clone(), v.spec().zero(), cols)?);
        }
    }
    let window = Window::new(-depth, -1);
    Ok(VertexAlgebra::new(v.clone(), v.spec().zero(), beta, window, ops, spec.unit.clone())?)
}

/// Commutative algebra with a nilpotent derivation; beta = One.
pub fn from_differential_algebra(spec: &DifferentialAlgebraSpec) -> Result<VertexAlgebra, BuilderError> {
    spec.check_degrees()?;
    spec.check_associative_unital()?;
    spec.check_commutative()?;
    spec.check_derivation()?;
    let k = spec.nilpotency_index()?;
    from_formula(spec, BetaSpec::One, k)
}

/// Associative algebra with a nilpotent derivation; beta = Zero.
pub fn from_associative_with_derivation(spec: &DifferentialAlgebraSpec) -> Result<VertexAlgebra, BuilderError> {
    spec.check_degrees()?;
    spec.check_associative_unital()?;
    spec.check_derivation()?;
    let k = spec.nilpotency_index()?;
    from_formula(spec, BetaSpec::Zero, k)
}

pub(crate) fn ungraded(labels: &[&str]) -> GradedSpace {
    let spec = GroupSpec::integers();
    let zero = spec.zero();
    GradedSpace::new(spec, labels.iter().map(|s| s.to_string()).collect(), vec![zero; labels.len()]).expect("distinct labels")
}

pub(crate) fn product_from_table(v: &GradedSpace, table: impl Fn(usize, usize) -> Vector) -> GradedMap {
    let d = v.dim();
    let vv = v.tensor(v).expect("same spec");
    GradedMap::new_unchecked(vv, v.clone(), v.spec().zero(), (0..d * d).map(|k| table(k / d, k % d)).collect()).expect("shape")
}

pub(crate) fn endo(v: &GradedSpace, cols: Vec<Vector>) -> GradedMap {
    GradedMap::new_unchecked(v.clone(), v.clone(), v.spec().zero(), cols).expect("shape")
}

fn int(n: i64) -> Scalar {
    Scalar::from_i64(n)
}

/// Q[e]/(e^3) with the given D(e), as the input spec.
pub fn truncated_polynomial_spec(d_of_e: Vector) -> DifferentialAlgebraSpec {
    let v = ungraded(&["1", "e", "e2"]);
    let product = product_from_table(&v, |i, j| if i + j < 3 { Vector::basis(i + j) } else { Vector::zero() });
    // D(e^2) = 2 e D(e)
    let prod = |a: &Vector, b: &Vector| product.apply_bilinear(a, b, 3);
    let d_e2 = prod(&Vector::basis(1), &d_of_e).scale(&int(2));
    let derivation = endo(&v, vec![Vector::zero(), d_of_e, d_e2]);
    DifferentialAlgebraSpec { space: v, product, unit: Vector::basis(0), derivation }
}

/// Q[e]/(e^3) with D(e) = e^2.
pub fn diffeps3() -> VertexAlgebra {
    from_differential_algebra(&truncated_polynomial_spec(Vector::basis(2))).expect("valid fixture")
}

/// Q[e]/(e^2) with D(e) = 1. Not a derivation: raw data for the C2 computation only.
pub fn eps2() -> VertexAlgebra {
    let v = ungraded(&["1", "e"]);
    let product = product_from_table(&v, |i, j| if i + j < 2 { Vector::basis(i + j) } else { Vector::zero() });
    let derivation = endo(&v, vec![Vector::zero(), Vector::basis(0)]);
    let spec = DifferentialAlgebraSpec { space: v, product, unit: Vector::basis(0), derivation };
    from_formula(&spec, BetaSpec::One, 2).expect("shapes are fixed")
}

/// 2x2 upper-triangular matrices with D = [e12, .].
pub fn upper_triangular_spec() -> DifferentialAlgebraSpec {
    let v = ungraded(&["e11", "e12", "e22"]);
    // matrix units: (row, col)
    let unit_of = [(1, 1), (1, 2), (2, 2)];
    let product = product_from_table(&v, |i, j| {
        let (a, b) = unit_of[i];
        let (c, d) = unit_of[j];
        if b == c {
            Vector::basis(unit_of.iter().position(|u| *u == (a, d)).expect("upper triangular"))
        } else {
            Vector::zero()
        }
    });
    let derivation = endo(&v, vec![Vector::basis(1).scale(&int(-1)), Vector::zero(), Vector::basis(1)]);
    let unit = Vector::from_entries(vec![(0, int(1)), (2, int(1))]);
    DifferentialAlgebraSpec { space: v, product, unit, derivation }
}

pub fn upper_triangular() -> VertexAlgebra {
    from_associative_with_derivation(&upper_triangular_spec()).expect("valid fixture")
}

/// Subsets of {1..n} ordered by size, then lexicographically.
fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0u32..1 << n).map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()).collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

fn subset_label(s: &[usize]) -> String {
    if s.is_empty() {
        "1".into()
    } else {
        s.iter().map(|i| format!("t{i}")).collect()
    }
}

/// Exterior algebra on n generators, graded by word length, beta(m,n) = (-1)^(mn).
pub fn exterior(n: usize) -> VertexAlgebra {
    let spec = GroupSpec::integers();
    let subs = subsets(n);
    let labels = subs.iter().map(|s| subset_label(s)).collect();
    let degrees = subs.iter().map(|s| GroupElement(vec![s.len() as i64])).collect();
    let v = GradedSpace::new(spec.clone(), labels, degrees).expect("distinct labels");
    let index: BTreeMap<&Vec<usize>, usize> = subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let wedge = product_from_table(&v, |i, j| {
        let (a, b) = (&subs[i], &subs[j]);
        if a.iter().any(|x| b.contains(x)) {
            return Vector::zero();
        }
        let inversions = a.iter().map(|x| b.iter().filter(|y| *y < x).count()).sum::<usize>();
        let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
        merged.sort();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Vector::basis(index[&merged]).scale(&int(sign))
    });
    let ops = BTreeMap::from([(-1, wedge)]);
    VertexAlgebra::new(v, spec.zero(), BetaSpec::Sign(vec![vec![1]]), Window::new(-1, -1), ops, Vector::basis(0)).expect("valid fixture")
}

/// V = k1 with Y_{-1} = id.
pub fn one_dim() -> VertexAlgebra {
    let v = ungraded(&["1"]);
    let product = product_from_table(&v, |_, _| Vector::basis(0));
    let spec = DifferentialAlgebraSpec { space: v.clone(), product, unit: Vector::basis(0), derivation: endo(&v, vec![Vector::zero()]) };
    from_differential_algebra(&spec).expect("valid fixture")
}

/// V (x) k^rank with labels "label@k" and the action on the first factor.
pub fn free_module(a: &VertexAlgebra, rank: usize) -> VertexModule {
    let dv = a.dim();
    let v = &a.space;
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    for k in 0..rank {
        for i in 0..dv {
            labels.push(format!("{}@{}", v.label(i), k + 1));
            degrees.push(v.degree(i).clone());
        }
    }
    let m = GradedSpace::new(v.spec().clone(), labels, degrees).expect("distinct labels");
    let vm = v.tensor(&m).expect("same spec");
    let dm_dim = m.dim();
    let mops = a
        .ops
        .iter()
        .map(|(n, y)| {
            let cols = (0..dv * dm_dim)
                .map(|c| {
                    let (p, x) = (c / dm_dim, c % dm_dim);
                    let (k, q) = (x / dv, x % dv);
                    y.col(p * dv + q).reindex(|i| k * dv + i)
                })
                .collect();
            (*n, GradedMap::new_unchecked(vm.clone(), m.clone(), y.degree().clone(), cols).expect("shape"))
        })
        .collect();
    let d = a.derive_d();
    let d_m = GradedMap::new_unchecked(
        m.clone(),
        m.clone(),
        d.degree().clone(),
        (0..dm_dim).map(|x| d.col(x % dv).reindex(|i| (x / dv) * dv + i)).collect(),
    )
    .expect("shape");
    VertexModule::new(a.clone(), m, a.window, mops, Some(d_m), None).expect("valid fixture")
}

/// M = V with Y^M = Y.
pub fn adjoint_module(a: &VertexAlgebra) -> VertexModule {
    VertexModule::new(a.clone(), a.space.clone(), a.window, a.ops.clone(), Some(a.derive_d()), None).expect("valid fixture")
}

/// Names accepted by [`by_name`].
pub const EXAMPLES: &[&str] = &["diffeps3", "eps2", "upper_triangular", "exterior1", "exterior2", "exterior3", "one_dim"];

pub fn by_name(name: &str) -> Option<VertexAlgebra> {
    Some(match name {
        "diffeps3" => diffeps3(),
        "eps2" => eps2(),
        "upper_triangular" => upper_triangular(),
        "one_dim" => one_dim(),
        _ => {
            let n: usize = name.strip_prefix("exterior")?.parse().ok()?;
            if n == 0 || n > 6 {
                return None;
            }
            exterior(n)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diffeps3_modes() {
        let a = diffeps3();
        let y = a.apply(&Vector::basis(1), &Vector::basis(0));
        assert_eq!(y[&-1], Vector::basis(1));
        assert_eq!(y[&-2], Vector::basis(2));
        assert_eq!(a.window, Window::new(-2, -1));
    }

    #[test]
    fn exterior_signs() {
        let a = exterior(2);
        let v = &a.space;
        let (t1, t2) = (v.index_of("t1").unwrap(), v.index_of("t2").unwrap());
        let t12 = v.index_of("t1t2").unwrap();
        let y = a.apply(&Vector::basis(t2), &Vector::basis(t1));
        assert_eq!(y[&-1], Vector::basis(t12).scale(&int(-1)));
        assert_eq!(v.degree(t12), &GroupElement(vec![2]));
        let y = a.apply(&Vector::basis(t1), &Vector::basis(t1));
        assert!(y[&-1].is_zero());
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = upper_triangular_spec();
        assert!(matches!(from_differential_algebra(&s), Err(BuilderError::NotCommutative(..))));
        s.derivation = endo(&s.space, vec![Vector::basis(0), Vector::zero(), Vector::zero()]);
        assert!(from_associative_with_derivation(&s).is_err());
        let bad = truncated_polynomial_spec(Vector::basis(0));
        assert!(matches!(from_differential_algebra(&bad), Err(BuilderError::NotDerivation(..))));
    }
}
