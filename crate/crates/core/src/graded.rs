//! Compact graded linear algebra: spaces, sparse vectors, homogeneous maps and subspaces.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gamma::{BetaSpec, GammaError, GroupElement, GroupSpec};
use crate::scalars::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("spaces live over different groups")]
    SpecMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("duplicate basis label {0}")]
    DuplicateLabel(String),
    #[error("map is not homogeneous: column {column} ({label}) has a component outside degree {expected}")]
    NotHomogeneous { column: usize, label: String, expected: GroupElement },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

#[derive(Debug, PartialEq, Eq)]
struct SpaceInner {
    spec: GroupSpec,
    labels: Vec<String>,
    degrees: Vec<GroupElement>,
}

/// Finite-dimensional graded space with a labelled homogeneous basis.
///
/// Basis vectors keep the order they were declared in; tensor products use the
/// index `i * dim(W) + j` for `v_i (x) w_j`.
#[derive(Clone, Debug)]
pub struct GradedSpace(Arc<SpaceInner>);

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for GradedSpace {}

fn dual_label(l: &str) -> String {
    if l.contains('⊗') {
        format!("({l})*")
    } else {
        format!("{l}*")
    }
}

impl GradedSpace {
    pub fn new(spec: GroupSpec, labels: Vec<String>, degrees: Vec<GroupElement>) -> Result<Self, GradedError> {
        if labels.len() != degrees.len() {
            return Err(GradedError::DimMismatch { expected: labels.len(), got: degrees.len() });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GradedError::DuplicateLabel(l.clone()));
            }
        }
        let degrees = degrees.into_iter().map(|d| spec.element(d.0)).collect::<Result<Vec<_>, _>>()?;
        Ok(GradedSpace(Arc::new(SpaceInner { spec, labels, degrees })))
    }

    /// Space from (degree, labels) components in the given order.
    pub fn from_components(spec: GroupSpec, comps: Vec<(GroupElement, Vec<String>)>) -> Result<Self, GradedError> {
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        for (d, ls) in comps {
            for l in ls {
                labels.push(l);
                degrees.push(d.clone());
            }
        }
        Self::new(spec, labels, degrees)
    }

    pub fn zero_space(spec: GroupSpec) -> Self {
        Self::new(spec, vec![], vec![]).unwrap()
    }

    /// One-dimensional space concentrated in `degree`.
    pub fn line(spec: GroupSpec, degree: GroupElement, label: &str) -> Result<Self, GradedError> {
        Self::new(spec, vec![label.to_string()], vec![degree])
    }

    /// The unit object k in degree 0.
    pub fn unit(spec: GroupSpec) -> Self {
        let z = spec.zero();
        Self::line(spec, z, "1").unwrap()
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.0.spec
    }

    pub fn dim(&self) -> usize {
        self.0.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn degree(&self, i: usize) -> &GroupElement {
        &self.0.degrees[i]
    }

    /// Degree of each basis vector, in basis order.
    pub fn degrees(&self) -> &[GroupElement] {
        &self.0.degrees
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.labels.iter().position(|l| l == label)
    }

    /// Distinct degrees carrying a non-zero component, sorted.
    pub fn support(&self) -> Vec<GroupElement> {
        let mut s: Vec<GroupElement> = self.0.degrees.clone();
        s.sort();
        s.dedup();
        s
    }

    /// Degree -> dimension.
    pub fn components(&self) -> BTreeMap<GroupElement, usize> {
        let mut m = BTreeMap::new();
        for d in &self.0.degrees {
            *m.entry(d.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn component(&self, d: &GroupElement) -> Vec<usize> {
        (0..self.dim()).filter(|i| &self.0.degrees[*i] == d).collect()
    }

    pub fn dim_at(&self, d: &GroupElement) -> usize {
        self.0.degrees.iter().filter(|x| *x == d).count()
    }

    /// Same degree data up to relabelling.
    pub fn same_shape(&self, other: &GradedSpace) -> bool {
        self.0.spec == other.0.spec && self.0.degrees == other.0.degrees
    }

    pub fn tensor(&self, other: &GradedSpace) -> Result<GradedSpace, GradedError> {
        if self.spec() != other.spec() {
            return Err(GradedError::SpecMismatch);
        }
        let mut labels = Vec::with_capacity(self.dim() * other.dim());
        let mut degrees = Vec::with_capacity(self.dim() * other.dim());
        for i in 0..self.dim() {
            for j in 0..other.dim() {
                labels.push(format!("{}⊗{}", self.label(i), other.label(j)));
                degrees.push(self.spec().add(self.degree(i), other.degree(j))?);
            }
        }
        Ok(GradedSpace(Arc::new(SpaceInner { spec: self.spec().clone(), labels, degrees })))
    }

    /// Restricted dual: basis `x*` of degree `-|x|`, same index order.
    pub fn dual(&self) -> GradedSpace {
        let spec = self.spec().clone();
        let labels = self.0.labels.iter().map(|l| dual_label(l)).collect();
        let degrees = self.0.degrees.iter().map(|d| spec.neg(d)).collect();
        GradedSpace(Arc::new(SpaceInner { spec, labels, degrees }))
    }

    /// Hom(V, W) for compact V, realised as V' (x) W.
    pub fn internal_hom(&self, w: &GradedSpace) -> Result<GradedSpace, GradedError> {
        self.dual().tensor(w)
    }

    /// Copy of this space with other labels.
    pub fn relabel(&self, labels: Vec<String>) -> Result<GradedSpace, GradedError> {
        GradedSpace::new(self.spec().clone(), labels, self.0.degrees.clone())
    }

    pub fn format_vector(&self, v: &Vector) -> String {
        format_terms(v.entries().iter().map(|(i, c)| (self.label(*i).to_string(), c.clone())))
    }
}

/// Formats `c1 l1 + c2 l2 ...`; cyclotomic coefficients are parenthesised.
pub fn format_terms(terms: impl Iterator<Item = (String, Scalar)>) -> String {
    let mut out = String::new();
    for (label, c) in terms {
        let (neg, body) = match &c {
            Scalar::Rat(r) => {
                let neg = r < &num::Zero::zero();
                let a = if neg { -r.clone() } else { r.clone() };
                let coef = if num::One::is_one(&a) { String::new() } else { format!("{a} ") };
                (neg, format!("{coef}{label}"))
            }
            Scalar::Cyc(_) => (false, format!("({c}) {label}")),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Sparse vector: sorted `(index, coefficient)` pairs with non-zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vector(Vec<(usize, Scalar)>);

impl Vector {
    pub fn zero() -> Self {
        Vector(Vec::new())
    }

    pub fn basis(i: usize) -> Self {
        Vector(vec![(i, Scalar::one())])
    }

    /// A scalar stored at index 0.
    pub fn scalar(s: Scalar) -> Self {
        Vector::from_entries(vec![(0, s)])
    }

    pub fn from_entries(mut entries: Vec<(usize, Scalar)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Vector(out)
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        Vector(values.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect())
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Scalar> {
        let mut d = vec![Scalar::zero(); dim];
        for (i, c) in &self.0 {
            d[*i] = c.clone();
        }
        d
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        match self.0.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.0[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// Largest index with non-zero coefficient.
    pub fn last_index(&self) -> Option<usize> {
        self.0.last().map(|e| e.0)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.last_index()
    }

    /// self + c * other
    pub fn add_scaled(&self, other: &Vector, c: &Scalar) -> Vector {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * c));
                j += 1;
            } else {
                let s = &a[i].1 + &(&b[j].1 * c);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        Vector(out)
    }

    pub fn add_scaled_assign(&mut self, other: &Vector, c: &Scalar) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        *self = self.add_scaled(other, c);
    }

    pub fn add(&self, other: &Vector) -> Vector {
        self.add_scaled(other, &Scalar::one())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add_scaled(other, &Scalar::from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|(i, x)| (*i, -x)).collect())
    }

    /// a (x) b in a tensor space whose second factor has dimension `dim_b`.
    pub fn tensor(a: &Vector, b: &Vector, dim_b: usize) -> Vector {
        let mut out = Vec::with_capacity(a.0.len() * b.0.len());
        for (i, x) in &a.0 {
            for (j, y) in &b.0 {
                out.push((i * dim_b + j, x * y));
            }
        }
        Vector(out)
    }

    /// Applies an index map; colliding indices are summed.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> Vector {
        Vector::from_entries(self.0.iter().map(|(i, c)| (f(*i), c.clone())).collect())
    }

    /// Component of each homogeneous degree.
    pub fn homogeneous_parts(&self, space: &GradedSpace) -> BTreeMap<GroupElement, Vector> {
        let mut m: BTreeMap<GroupElement, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (i, c) in &self.0 {
            m.entry(space.degree(*i).clone()).or_default().push((*i, c.clone()));
        }
        m.into_iter().map(|(d, e)| (d, Vector(e))).collect()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_terms(self.0.iter().map(|(i, c)| (format!("e{i}"), c.clone()))))
    }
}

/// Homogeneous linear map, stored as sparse columns (images of source basis vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    degree: GroupElement,
    cols: Vec<Vector>,
}

impl GradedMap {
    /// Validates shapes and homogeneity of degree `degree`.
    pub fn new(source: GradedSpace, target: GradedSpace, degree: GroupElement, cols: Vec<Vector>) -> Result<Self, GradedError> {
        let m = Self::new_unchecked(source, target, degree, cols)?;
        m.check_homogeneous()?;
        Ok(m)
    }

    /// Validates shapes only; homogeneity can be tested later with [`GradedMap::check_homogeneous`].
    pub fn new_unchecked(source: GradedSpace, target: GradedSpace, degree: GroupElement, cols: Vec<Vector>) -> Result<Self, GradedError> {
        if source.spec() != target.spec() {
            return Err(GradedError::SpecMismatch);
        }
        if cols.len() != source.dim() {
            return Err(GradedError::DimMismatch { expected: source.dim(), got: cols.len() });
        }
        for c in &cols {
            if let Some(i) = c.last_index() {
                if i >= target.dim() {
                    return Err(GradedError::IndexOutOfRange { index: i, dim: target.dim() });
                }
            }
        }
        let degree = source.spec().element(degree.0)?;
        Ok(GradedMap { source, target, degree, cols })
    }

    pub fn check_homogeneous(&self) -> Result<(), GradedError> {
        let spec = self.source.spec();
        for (k, c) in self.cols.iter().enumerate() {
            let expected = spec.add(self.source.degree(k), &self.degree)?;
            if c.entries().iter().any(|(i, _)| self.target.degree(*i) != &expected) {
                return Err(GradedError::NotHomogeneous { column: k, label: self.source.label(k).to_string(), expected });
            }
        }
        Ok(())
    }

    pub fn zero(source: &GradedSpace, target: &GradedSpace, degree: GroupElement) -> Self {
        GradedMap { source: source.clone(), target: target.clone(), degree, cols: vec![Vector::zero(); source.dim()] }
    }

    pub fn identity(v: &GradedSpace) -> Self {
        GradedMap { source: v.clone(), target: v.clone(), degree: v.spec().zero(), cols: (0..v.dim()).map(Vector::basis).collect() }
    }

    pub fn from_fn(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: GroupElement,
        f: impl Fn(usize) -> Vector,
    ) -> Result<Self, GradedError> {
        Self::new(source.clone(), target.clone(), degree, (0..source.dim()).map(f).collect())
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn degree(&self) -> &GroupElement {
        &self.degree
    }

    pub fn col(&self, i: usize) -> &Vector {
        &self.cols[i]
    }

    pub fn cols(&self) -> &[Vector] {
        &self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> Scalar {
        self.cols[col].coeff(row)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, c) in v.entries() {
            out.add_scaled_assign(&self.cols[*i], c);
        }
        out
    }

    /// For a map out of A (x) B: the image of `a (x) b`, where B has dimension `dim_b`.
    pub fn apply_bilinear(&self, a: &Vector, b: &Vector, dim_b: usize) -> Vector {
        let mut out = Vector::zero();
        for (i, x) in a.entries() {
            for (j, y) in b.entries() {
                out.add_scaled_assign(&self.cols[i * dim_b + j], &(x * y));
            }
        }
        out
    }

    /// self o f
    pub fn compose(&self, f: &GradedMap) -> Result<GradedMap, GradedError> {
        if f.target != self.source {
            return Err(GradedError::DimMismatch { expected: self.source.dim(), got: f.target.dim() });
        }
        Ok(GradedMap {
            source: f.source.clone(),
            target: self.target.clone(),
            degree: self.source.spec().add(&self.degree, &f.degree)?,
            cols: f.cols.iter().map(|c| self.apply(c)).collect(),
        })
    }

    /// f (x) g on the tensor products of sources and targets.
    pub fn tensor(&self, g: &GradedMap) -> Result<GradedMap, GradedError> {
        let source = self.source.tensor(&g.source)?;
        let target = self.target.tensor(&g.target)?;
        let dt = g.target.dim();
        let mut cols = Vec::with_capacity(source.dim());
        for i in 0..self.source.dim() {
            for j in 0..g.source.dim() {
                cols.push(Vector::tensor(&self.cols[i], &g.cols[j], dt));
            }
        }
        Ok(GradedMap { source, target, degree: self.source.spec().add(&self.degree, &g.degree)?, cols })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, GradedError> {
        self.combine(other, &Scalar::one())
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap, GradedError> {
        self.combine(other, &Scalar::from_i64(-1))
    }

    /// self + c * other
    pub fn combine(&self, other: &GradedMap, c: &Scalar) -> Result<GradedMap, GradedError> {
        if self.source != other.source || self.target != other.target {
            return Err(GradedError::DimMismatch { expected: self.source.dim(), got: other.source.dim() });
        }
        Ok(GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree.clone(),
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add_scaled(b, c)).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        GradedMap { cols: self.cols.iter().map(|v| v.scale(c)).collect(), ..self.clone() }
    }

    /// Dual map W' -> V' in dual bases; it has the same degree.
    pub fn transpose(&self) -> GradedMap {
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.target.dim()];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c.entries() {
                rows[*i].push((j, x.clone()));
            }
        }
        GradedMap {
            source: self.target.dual(),
            target: self.source.dual(),
            degree: self.degree.clone(),
            cols: rows.into_iter().map(Vector::from_entries).collect(),
        }
    }

    /// Same matrix between other spaces of the same dimensions.
    pub fn retarget(&self, source: &GradedSpace, target: &GradedSpace) -> Result<GradedMap, GradedError> {
        GradedMap::new(source.clone(), target.clone(), self.degree.clone(), self.cols.clone())
    }

    /// Per-degree matrices: block at gamma maps V_gamma to W_{gamma + degree}; rows and
    /// columns follow basis order within each component.
    pub fn blocks(&self) -> BTreeMap<GroupElement, Vec<Vec<Scalar>>> {
        let mut out = BTreeMap::new();
        for d in self.source.support() {
            let src = self.source.component(&d);
            let Ok(td) = self.source.spec().add(&d, &self.degree) else { continue };
            let tgt = self.target.component(&td);
            let m: Vec<Vec<Scalar>> = tgt.iter().map(|r| src.iter().map(|c| self.cols[*c].coeff(*r)).collect()).collect();
            if m.iter().flatten().any(|x| !x.is_zero()) {
                out.insert(d, m);
            }
        }
        out
    }
}

/// T^beta: V (x) W -> W (x) V, v (x) w -> beta(|v|, |w|) w (x) v.
pub fn t_beta(v: &GradedSpace, w: &GradedSpace, beta: &BetaSpec) -> Result<GradedMap, GradedError> {
    let source = v.tensor(w)?;
    let target = w.tensor(v)?;
    let (dv, dw) = (v.dim(), w.dim());
    let mut cols = Vec::with_capacity(dv * dw);
    for i in 0..dv {
        for j in 0..dw {
            let b = beta.eval(v.degree(i), w.degree(j))?;
            cols.push(Vector::from_entries(vec![(j * dv + i, b)]));
        }
    }
    GradedMap::new(source, target, v.spec().zero(), cols)
}

/// xi^beta = (id (x) T^beta)(T^beta (x) id) on V^(x)3.
pub fn xi_beta(v: &GradedSpace, beta: &BetaSpec) -> Result<GradedMap, GradedError> {
    let t = t_beta(v, v, beta)?;
    let id = GradedMap::identity(v);
    let first = t.tensor(&id)?;
    let second = id.tensor(&t)?;
    second.compose(&first)
}

/// Reduced echelon basis: each vector has pivot (last non-zero index) coefficient 1
/// and vanishes at every other pivot; sorted by pivot.
fn echelonize(gens: impl IntoIterator<Item = Vector>) -> Vec<Vector> {
    let mut by_pivot: BTreeMap<usize, Vector> = BTreeMap::new();
    for g in gens {
        let mut v = g;
        while let Some(p) = v.last_index() {
            match by_pivot.get(&p) {
                Some(b) => {
                    let f = v.coeff(p);
                    v = v.add_scaled(b, &-f);
                }
                None => {
                    let inv = v.coeff(p).checked_inv().expect("non-zero pivot");
                    by_pivot.insert(p, v.scale(&inv));
                    break;
                }
            }
        }
    }
    let pivots: Vec<usize> = by_pivot.keys().copied().collect();
    let mut out = Vec::with_capacity(pivots.len());
    for (k, p) in pivots.iter().enumerate() {
        let mut v = by_pivot[p].clone();
        for q in pivots[..k].iter().rev() {
            let f = v.coeff(*q);
            if !f.is_zero() {
                v = v.add_scaled(&by_pivot[q], &-f);
            }
        }
        out.push(v);
    }
    out
}

/// Linear dependencies among `cols`: coefficient vectors c with sum c_i cols_i = 0, a basis.
pub fn nullspace(cols: &[Vector]) -> Vec<Vector> {
    let mut by_pivot: BTreeMap<usize, (Vector, Vector)> = BTreeMap::new();
    let mut null = Vec::new();
    for (k, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        let mut c = Vector::basis(k);
        loop {
            match v.last_index() {
                None => {
                    null.push(c);
                    break;
                }
                Some(p) => match by_pivot.get(&p) {
                    Some((b, bc)) => {
                        let f = -v.coeff(p);
                        v = v.add_scaled(b, &f);
                        c = c.add_scaled(bc, &f);
                    }
                    None => {
                        let inv = v.coeff(p).checked_inv().expect("non-zero pivot");
                        by_pivot.insert(p, (v.scale(&inv), c.scale(&inv)));
                        break;
                    }
                },
            }
        }
    }
    null
}

/// Subspace with a canonical reduced echelon basis of homogeneous vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    ambient: GradedSpace,
    basis: Vec<Vector>,
}

impl GradedSubspace {
    /// Span of the homogeneous parts of `gens`.
    pub fn span(ambient: &GradedSpace, gens: impl IntoIterator<Item = Vector>) -> Self {
        let mut parts = Vec::new();
        for g in gens {
            parts.extend(g.homogeneous_parts(ambient).into_values());
        }
        GradedSubspace { ambient: ambient.clone(), basis: echelonize(parts) }
    }

    pub fn zero(ambient: &GradedSpace) -> Self {
        GradedSubspace { ambient: ambient.clone(), basis: Vec::new() }
    }

    pub fn full(ambient: &GradedSpace) -> Self {
        GradedSubspace { ambient: ambient.clone(), basis: (0..ambient.dim()).map(Vector::basis).collect() }
    }

    pub fn ambient(&self) -> &GradedSpace {
        &self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.last_index().unwrap()).collect()
    }

    pub fn dim_at(&self, d: &GroupElement) -> usize {
        self.pivots().into_iter().filter(|p| self.ambient.degree(*p) == d).count()
    }

    /// Degree of the i-th basis vector.
    pub fn degree(&self, i: usize) -> &GroupElement {
        self.ambient.degree(self.basis[i].last_index().unwrap())
    }

    /// Canonical representative of v modulo the subspace (zero at every pivot).
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        for b in &self.basis {
            let p = b.last_index().unwrap();
            let f = r.coeff(p);
            if !f.is_zero() {
                r = r.add_scaled(b, &-f);
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of a member in the echelon basis (the pivot coefficients).
    pub fn coordinates(&self, v: &Vector) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(Vector::from_entries(self.basis.iter().enumerate().map(|(k, b)| (k, v.coeff(b.last_index().unwrap()))).collect()))
    }

    pub fn is_subspace_of(&self, other: &GradedSubspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn image(f: &GradedMap) -> Self {
        GradedSubspace::span(f.target(), f.cols().iter().cloned())
    }

    pub fn kernel(f: &GradedMap) -> Self {
        GradedSubspace::span(f.source(), nullspace(f.cols()))
    }

    pub fn intersect(&self, other: &GradedSubspace) -> GradedSubspace {
        let reduced: Vec<Vector> = self.basis.iter().map(|b| other.reduce(b)).collect();
        let combos = nullspace(&reduced);
        let gens = combos.into_iter().map(|c| {
            let mut v = Vector::zero();
            for (k, x) in c.entries() {
                v.add_scaled_assign(&self.basis[*k], x);
            }
            v
        });
        GradedSubspace::span(&self.ambient, gens)
    }

    pub fn sum(&self, other: &GradedSubspace) -> GradedSubspace {
        GradedSubspace::span(&self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    /// Functionals in V' vanishing on the subspace.
    pub fn annihilator(&self) -> GradedSubspace {
        let dual = self.ambient.dual();
        let pivots = self.pivots();
        let mut gens = Vec::new();
        for k in 0..self.ambient.dim() {
            if pivots.contains(&k) {
                continue;
            }
            let mut f = Vector::basis(k);
            for (b, p) in self.basis.iter().zip(&pivots) {
                let c = b.coeff(k);
                if !c.is_zero() {
                    f.add_scaled_assign(&Vector::basis(*p), &-c);
                }
            }
            gens.push(f);
        }
        GradedSubspace::span(&dual, gens)
    }

    /// W1 (x) W2 inside V1 (x) V2.
    pub fn tensor(&self, other: &GradedSubspace) -> Result<GradedSubspace, GradedError> {
        let amb = self.ambient.tensor(&other.ambient)?;
        let d2 = other.ambient.dim();
        let mut gens = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                gens.push(Vector::tensor(a, b, d2));
            }
        }
        Ok(GradedSubspace::span(&amb, gens))
    }

    /// Same vectors, reinterpreted in another ambient space of equal shape.
    pub fn in_ambient(&self, ambient: &GradedSpace) -> GradedSubspace {
        GradedSubspace { ambient: ambient.clone(), basis: self.basis.clone() }
    }

    pub fn quotient(&self) -> Quotient {
        Quotient::new(self.clone())
    }

    /// The subspace as a standalone graded space; basis labels are those of the pivots.
    pub fn as_space(&self) -> GradedSpace {
        let piv = self.pivots();
        GradedSpace::new(
            self.ambient.spec().clone(),
            piv.iter().map(|p| self.ambient.label(*p).to_string()).collect(),
            piv.iter().map(|p| self.ambient.degree(*p).clone()).collect(),
        )
        .expect("pivot labels are distinct")
    }

    /// Inclusion of [`GradedSubspace::as_space`] into the ambient space.
    pub fn inclusion(&self) -> GradedMap {
        let sp = self.as_space();
        GradedMap::new(sp, self.ambient.clone(), self.ambient.spec().zero(), self.basis.clone()).expect("echelon basis is homogeneous")
    }
}

/// V / W with the section given by the non-pivot basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    sub: GradedSubspace,
    reps: Vec<usize>,
    space: GradedSpace,
}

impl Quotient {
    fn new(sub: GradedSubspace) -> Self {
        let amb = sub.ambient.clone();
        let piv = sub.pivots();
        let reps: Vec<usize> = (0..amb.dim()).filter(|k| !piv.contains(k)).collect();
        let space = GradedSpace::new(
            amb.spec().clone(),
            reps.iter().map(|k| amb.label(*k).to_string()).collect(),
            reps.iter().map(|k| amb.degree(*k).clone()).collect(),
        )
        .expect("labels are distinct");
        Quotient { sub, reps, space }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn subspace(&self) -> &GradedSubspace {
        &self.sub
    }

    pub fn ambient(&self) -> &GradedSpace {
        self.sub.ambient()
    }

    /// Ambient index of the representative of each quotient basis vector.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn project(&self, v: &Vector) -> Vector {
        let r = self.sub.reduce(v);
        Vector::from_entries(self.reps.iter().enumerate().map(|(k, a)| (k, r.coeff(*a))).collect())
    }

    pub fn lift(&self, q: &Vector) -> Vector {
        q.reindex(|k| self.reps[k])
    }

    pub fn projection(&self) -> GradedMap {
        let amb = self.ambient();
        GradedMap::new(
            amb.clone(),
            self.space.clone(),
            amb.spec().zero(),
            (0..amb.dim()).map(|i| self.project(&Vector::basis(i))).collect(),
        )
        .expect("projection is homogeneous")
    }

    pub fn section(&self) -> GradedMap {
        let amb = self.ambient();
        GradedMap::new(
            self.space.clone(),
            amb.clone(),
            amb.spec().zero(),
            (0..self.space.dim()).map(|k| Vector::basis(self.reps[k])).collect(),
        )
        .expect("section is homogeneous")
    }
}

/// Result of intersecting (W1 (x) V2) with (V1 (x) W2).
#[derive(Clone, Debug)]
pub struct TensorIntersection {
    pub intersection: GradedSubspace,
    pub expected: GradedSubspace,
}

impl TensorIntersection {
    pub fn matches(&self) -> bool {
        self.intersection == self.expected
    }
}

pub fn intersect_tensor(w1: &GradedSubspace, w2: &GradedSubspace) -> Result<TensorIntersection, GradedError> {
    let left = w1.tensor(&GradedSubspace::full(w2.ambient()))?;
    let right = GradedSubspace::full(w1.ambient()).tensor(w2)?;
    Ok(TensorIntersection { intersection: left.intersect(&right), expected: w1.tensor(w2)? })
}

/// Canonical V -> V'' (identity matrix in dual-dual bases).
pub fn double_dual_identify(v: &GradedSpace) -> GradedMap {
    let dd = v.dual().dual();
    GradedMap::new(v.clone(), dd, v.spec().zero(), (0..v.dim()).map(Vector::basis).collect()).expect("identity is homogeneous")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> GroupSpec {
        GroupSpec::integers()
    }

    fn g(n: i64) -> GroupElement {
        GroupElement(vec![n])
    }

    fn sp(degs: &[i64]) -> GradedSpace {
        GradedSpace::new(z(), (0..degs.len()).map(|i| format!("b{i}")).collect(), degs.iter().map(|d| g(*d)).collect()).unwrap()
    }

    #[test]
    fn tensor_dims() {
        let v = sp(&[1, 1]);
        let w = sp(&[1, 1, 1]);
        assert_eq!(v.tensor(&w).unwrap().dim_at(&g(2)), 6);
        let a = sp(&[0, 1]);
        assert_eq!(a.tensor(&a).unwrap().support(), vec![g(0), g(1), g(2)]);
    }

    #[test]
    fn dual_degrees() {
        let v = sp(&[1, 1]);
        assert_eq!(v.dual().dim_at(&g(-1)), 2);
        assert_eq!(v.dual().dual().labels(), &["b0**".to_string(), "b1**".to_string()]);
        let hom = GradedSpace::line(z(), g(2), "a").unwrap().internal_hom(&GradedSpace::line(z(), g(5), "b").unwrap()).unwrap();
        assert_eq!(hom.support(), vec![g(3)]);
    }

    #[test]
    fn quotient_representative() {
        let v = sp(&[0, 0]);
        let w = GradedSubspace::span(&v, vec![Vector::from_dense(&[Scalar::one(), Scalar::one()])]);
        let q = w.quotient();
        assert_eq!(q.space().dim(), 1);
        assert_eq!(q.representatives(), &[0]);
        assert_eq!(q.project(&Vector::basis(1)), Vector::from_entries(vec![(0, Scalar::from_i64(-1))]));
    }

    #[test]
    fn kernel_and_image() {
        let v = sp(&[0, 0, 1]);
        let zero = GradedMap::zero(&v, &v, g(0));
        assert_eq!(GradedSubspace::kernel(&zero).dim(), 3);
        assert_eq!(GradedSubspace::image(&GradedMap::identity(&v)).dim(), 3);
    }

    #[test]
    fn t_beta_sign() {
        let v = sp(&[1]);
        let t = t_beta(&v, &v, &BetaSpec::Sign(vec![vec![1]])).unwrap();
        assert_eq!(t.col(0), &Vector::from_entries(vec![(0, Scalar::from_i64(-1))]));
        let zero = t_beta(&v, &v, &BetaSpec::Zero).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn xi_one_cycles() {
        let v = sp(&[0, 0]);
        let xi = xi_beta(&v, &BetaSpec::One).unwrap();
        // u (x) v (x) w -> v (x) w (x) u
        let idx = |a: usize, b: usize, c: usize| a * 4 + b * 2 + c;
        assert_eq!(xi.col(idx(0, 1, 1)), &Vector::basis(idx(1, 1, 0)));
    }

    #[test]
    fn annihilator_pairs_to_zero() {
        let v = sp(&[0, 0, 0]);
        let w = GradedSubspace::span(&v, vec![Vector::from_dense(&[Scalar::one(), Scalar::from_i64(2), Scalar::zero()])]);
        let ann = w.annihilator();
        assert_eq!(ann.dim(), 2);
        for f in ann.basis() {
            let pairing: Scalar = f.entries().iter().fold(Scalar::zero(), |acc, (i, c)| acc + c * &w.basis()[0].coeff(*i));
            assert!(pairing.is_zero());
        }
    }
}
