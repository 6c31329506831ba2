//! Verdicts, witnesses and the clause runner shared by every checker.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graded::{GradedSpace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Refused,
    Skipped,
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Witness {
    pub exponents: BTreeMap<String, i64>,
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
    pub degrees: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub id: String,
    pub anchor: String,
    pub verdict: Verdict,
    pub points: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl AxiomResult {
    fn bare(id: &str, anchor: &str, verdict: Verdict, note: Option<String>) -> Self {
        AxiomResult { id: id.into(), anchor: anchor.into(), verdict, points: 0, witness: None, note }
    }

    pub fn pass(id: &str, anchor: &str, points: u64) -> Self {
        AxiomResult { points, ..Self::bare(id, anchor, Verdict::Pass, None) }
    }

    pub fn fail(id: &str, anchor: &str, note: impl Into<String>) -> Self {
        Self::bare(id, anchor, Verdict::Fail, Some(note.into()))
    }

    pub fn refused(id: &str, anchor: &str, note: impl Into<String>) -> Self {
        Self::bare(id, anchor, Verdict::Refused, Some(note.into()))
    }

    pub fn skipped(id: &str, anchor: &str, note: impl Into<String>) -> Self {
        Self::bare(id, anchor, Verdict::Skipped, Some(note.into()))
    }

    pub fn info(id: &str, anchor: &str, note: impl Into<String>) -> Self {
        Self::bare(id, anchor, Verdict::Info, Some(note.into()))
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_id(mut self, id: &str) -> Self {
        self.id = id.into();
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub results: Vec<AxiomResult>,
}

impl CheckReport {
    pub fn new(suite: &str) -> Self {
        CheckReport { suite: suite.into(), results: Vec::new() }
    }

    pub fn push(&mut self, r: AxiomResult) {
        self.results.push(r);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.results.extend(other.results);
    }

    pub fn get(&self, id: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn verdict(&self, id: &str) -> Option<Verdict> {
        self.get(id).map(|r| r.verdict)
    }

    pub fn has_fail(&self) -> bool {
        self.results.iter().any(|r| r.verdict == Verdict::Fail)
    }

    pub fn has_refusal(&self) -> bool {
        self.results.iter().any(|r| r.verdict == Verdict::Refused)
    }

    /// No failures and no refusals; skipped and info entries are neutral.
    pub fn passed(&self) -> bool {
        !self.has_fail() && !self.has_refusal()
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.results.iter().filter(|r| r.verdict == Verdict::Fail).map(|r| r.id.as_str()).collect()
    }
}

type EvalFn<'a> = dyn Fn(&[i64], &[usize]) -> Result<(Vector, Vector), String> + Send + Sync + 'a;

/// One identity `lhs == rhs` to be verified on every point of a finite domain.
///
/// The domain is `outer x inner`: outer entries are integer tuples (exponents, or group
/// coordinates), inner entries are basis-index tuples over `inputs`. Points are ordered
/// lexicographically, outer first, so the first failure found is the minimal witness.
pub struct Clause<'a> {
    pub id: String,
    pub anchor: String,
    pub exp_names: Vec<String>,
    pub outer: Vec<Vec<i64>>,
    pub inputs: Vec<GradedSpace>,
    /// Space the two sides live in; `None` means scalars stored at index 0.
    pub target: Option<GradedSpace>,
    eval: Box<EvalFn<'a>>,
}

pub enum Item<'a> {
    Clause(Clause<'a>),
    /// A clause whose passing result carries a note.
    Noted(Clause<'a>, String),
    Fixed(AxiomResult),
}

impl<'a> Clause<'a> {
    pub fn new<F>(
        id: &str,
        anchor: &str,
        exp_names: Vec<String>,
        outer: Vec<Vec<i64>>,
        inputs: Vec<GradedSpace>,
        target: Option<GradedSpace>,
        eval: F,
    ) -> Self
    where
        F: Fn(&[i64], &[usize]) -> Result<(Vector, Vector), String> + Send + Sync + 'a,
    {
        Clause { id: id.into(), anchor: anchor.into(), exp_names, outer, inputs, target, eval: Box::new(eval) }
    }

    fn inner_count(&self) -> u64 {
        self.inputs.iter().map(|s| s.dim() as u64).product()
    }

    pub fn points(&self) -> u64 {
        self.outer.len() as u64 * self.inner_count()
    }

    fn render(&self, v: &Vector) -> String {
        match &self.target {
            Some(space) => space.format_vector(v),
            None => v.coeff(0).to_string(),
        }
    }

    /// Evaluates a single point; `Ok(None)` when both sides agree.
    pub fn eval_point(&self, exps: &[i64], idx: &[usize]) -> Result<Option<Witness>, String> {
        let (l, r) = (self.eval)(exps, idx)?;
        if l == r {
            return Ok(None);
        }
        Ok(Some(Witness {
            exponents: self.exp_names.iter().cloned().zip(exps.iter().copied()).collect(),
            indices: idx.to_vec(),
            labels: idx.iter().zip(&self.inputs).map(|(i, s)| s.label(*i).to_string()).collect(),
            degrees: idx.iter().zip(&self.inputs).map(|(i, s)| s.degree(*i).to_string()).collect(),
            lhs: self.render(&l),
            rhs: self.render(&r),
        }))
    }

    fn first_failure_at(&self, exps: &[i64]) -> Option<Result<Witness, (Vec<usize>, String)>> {
        let dims: Vec<usize> = self.inputs.iter().map(|s| s.dim()).collect();
        if dims.contains(&0) {
            return None;
        }
        let mut idx = vec![0usize; dims.len()];
        loop {
            match self.eval_point(exps, &idx) {
                Ok(None) => {}
                Ok(Some(w)) => return Some(Ok(w)),
                Err(e) => return Some(Err((idx, e))),
            }
            // odometer increment, last slot fastest
            let mut k = dims.len();
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    pub fn run(&self) -> AxiomResult {
        let points = self.points();
        let found = self.outer.par_iter().find_map_first(|exps| self.first_failure_at(exps).map(|r| (exps.clone(), r)));
        match found {
            None => AxiomResult::pass(&self.id, &self.anchor, points),
            Some((_, Ok(w))) => AxiomResult {
                id: self.id.clone(),
                anchor: self.anchor.clone(),
                verdict: Verdict::Fail,
                points,
                witness: Some(w),
                note: None,
            },
            Some((exps, Err((idx, e)))) => {
                let mut r = AxiomResult::refused(&self.id, &self.anchor, e);
                r.points = points;
                r.witness = Some(Witness {
                    exponents: self.exp_names.iter().cloned().zip(exps.iter().copied()).collect(),
                    indices: idx,
                    ..Witness::default()
                });
                r
            }
        }
    }

    /// Re-evaluates the point recorded in `w`.
    pub fn replay(&self, w: &Witness) -> Result<AxiomResult, String> {
        let exps: Vec<i64> = self
            .exp_names
            .iter()
            .map(|n| w.exponents.get(n).copied().ok_or_else(|| format!("witness lacks exponent {n}")))
            .collect::<Result<_, _>>()?;
        if w.indices.len() != self.inputs.len() {
            return Err(format!("witness has {} indices, clause expects {}", w.indices.len(), self.inputs.len()));
        }
        for (i, s) in w.indices.iter().zip(&self.inputs) {
            if *i >= s.dim() {
                return Err(format!("index {i} out of range"));
            }
        }
        Ok(match self.eval_point(&exps, &w.indices) {
            Ok(None) => AxiomResult::pass(&self.id, &self.anchor, 1),
            Ok(Some(found)) => AxiomResult {
                id: self.id.clone(),
                anchor: self.anchor.clone(),
                verdict: Verdict::Fail,
                points: 1,
                witness: Some(found),
                note: None,
            },
            Err(e) => AxiomResult::refused(&self.id, &self.anchor, e),
        })
    }
}

/// Ordered list of clauses and precomputed results.
pub struct Suite<'a> {
    pub name: String,
    pub items: Vec<Item<'a>>,
}

impl<'a> Suite<'a> {
    pub fn new(name: &str) -> Self {
        Suite { name: name.into(), items: Vec::new() }
    }

    pub fn push(&mut self, r: AxiomResult) {
        self.items.push(Item::Fixed(r));
    }

    pub fn push_clause(&mut self, c: Clause<'a>) {
        self.items.push(Item::Clause(c));
    }

    pub fn push_noted(&mut self, c: Clause<'a>, note: String) {
        self.items.push(Item::Noted(c, note));
    }

    pub fn append(&mut self, other: Suite<'a>) {
        self.items.extend(other.items);
    }

    pub fn clause(&self, id: &str) -> Option<&Clause<'a>> {
        self.items.iter().find_map(|it| match it {
            Item::Clause(c) | Item::Noted(c, _) if c.id == id => Some(c),
            _ => None,
        })
    }

    pub fn ids(&self) -> Vec<String> {
        self.items
            .iter()
            .map(|it| match it {
                Item::Clause(c) | Item::Noted(c, _) => c.id.clone(),
                Item::Fixed(r) => r.id.clone(),
            })
            .collect()
    }

    pub fn run(&self) -> CheckReport {
        CheckReport {
            suite: self.name.clone(),
            results: self
                .items
                .iter()
                .map(|it| match it {
                    Item::Clause(c) => c.run(),
                    Item::Noted(c, note) => {
                        let mut r = c.run();
                        if r.verdict == Verdict::Pass {
                            r.note = Some(note.clone());
                        }
                        r
                    }
                    Item::Fixed(r) => r.clone(),
                })
                .collect(),
        }
    }

    pub fn replay(&self, id: &str, w: &Witness) -> Result<AxiomResult, String> {
        self.clause(id).ok_or_else(|| format!("no replayable clause named {id}"))?.replay(w)
    }
}
