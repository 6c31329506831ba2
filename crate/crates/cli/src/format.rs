//! Line-oriented structure files.
//!
//! ```text
//! [scalars]
//! conductor = 1
//! [group]
//! free_rank = 1
//! torsion =
//! gamma0 = (0)
//! [beta]
//! kind = sign
//! form = 1
//! [space]
//! 1 = (0)
//! t1 = (1)
//! [window]
//! lo = -1
//! hi = -1
//! [vacuum]
//! 1 = 1
//! [Y]
//! -1 | 1 t1 -> t1 = 1
//! ```
//!
//! Coalgebras use `[covacuum]` and `[coY]` (`n | c -> a b = s`). Module files add
//! `[module-of]` (`base = algebra`, `window = lo hi`), `[mspace]`, `[YM]`
//! (`n | a m -> m2 = s`) and optionally `[DM]` (`m -> m2 = s`) and `[omega]`. Comodule
//! files use `base = coalgebra`, `[coYM]` (`n | m -> m2 a = s`), `[coDM]` and `[rho]`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use vakit::vertex::{VertexAlgebra, VertexCoalgebra, VertexComodule, VertexModule, Window};
use vakit::{BetaSpec, GradedMap, GradedSpace, GroupElement, GroupSpec, Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Algebra(VertexAlgebra),
    Coalgebra(VertexCoalgebra),
    Module(VertexModule),
    Comodule(VertexComodule),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Algebra(_) => "algebra",
            Structure::Coalgebra(_) => "coalgebra",
            Structure::Module(_) => "module",
            Structure::Comodule(_) => "comodule",
        }
    }
}

/// Parsed structure plus warnings (torsion coordinates that were reduced).
#[derive(Clone, Debug)]
pub struct Parsed {
    pub structure: Structure,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
struct Line<'a> {
    no: usize,
    text: &'a str,
    /// byte offset of `text` in the raw line
    offset: usize,
}

impl Line<'_> {
    fn err(&self, at: &str, message: impl Into<String>) -> ParseError {
        let col = self.offset + offset_in(self.text, at) + 1;
        ParseError { line: self.no, column: col, message: message.into() }
    }
}

fn offset_in(base: &str, part: &str) -> usize {
    let b = base.as_ptr() as usize;
    let p = part.as_ptr() as usize;
    if p >= b && p <= b + base.len() {
        p - b
    } else {
        0
    }
}

fn global(message: impl Into<String>) -> ParseError {
    ParseError { line: 0, column: 0, message: message.into() }
}

const SECTIONS: &[&str] = &[
    "scalars",
    "group",
    "beta",
    "space",
    "window",
    "vacuum",
    "covacuum",
    "Y",
    "coY",
    "module-of",
    "mspace",
    "YM",
    "coYM",
    "DM",
    "coDM",
    "omega",
    "rho",
];

fn split_sections(src: &str) -> Result<BTreeMap<&'static str, (usize, Vec<Line<'_>>)>, ParseError> {
    let mut out: BTreeMap<&'static str, (usize, Vec<Line<'_>>)> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (i, raw) in src.lines().enumerate() {
        let no = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let text = body.trim();
        if text.is_empty() {
            continue;
        }
        let offset = offset_in(raw, text);
        if let Some(name) = text.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(ParseError { line: no, column: offset + text.len() + 1, message: "expected ']'".into() });
            };
            let Some(known) = SECTIONS.iter().find(|s| **s == name) else {
                return Err(ParseError { line: no, column: offset + 2, message: format!("unknown section [{name}]") });
            };
            if out.contains_key(known) {
                return Err(ParseError { line: no, column: offset + 1, message: format!("duplicate section [{name}]") });
            }
            out.insert(known, (no, Vec::new()));
            current = Some(known);
            continue;
        }
        let Some(sec) = current else {
            return Err(ParseError { line: no, column: offset + 1, message: "expected a section header".into() });
        };
        out.get_mut(sec).expect("inserted").1.push(Line { no, text, offset });
    }
    Ok(out)
}

fn key_value<'a>(line: &Line<'a>) -> Result<(&'a str, &'a str), ParseError> {
    let Some(eq) = line.text.find('=') else {
        return Err(line.err(line.text, "expected 'key = value'"));
    };
    Ok((line.text[..eq].trim(), line.text[eq + 1..].trim()))
}

fn parse_i64(line: &Line<'_>, tok: &str) -> Result<i64, ParseError> {
    tok.parse().map_err(|_| line.err(tok, format!("expected an integer, found '{tok}'")))
}

struct Ctx {
    conductor: u32,
    spec: GroupSpec,
    warnings: Vec<String>,
}

impl Ctx {
    fn degree(&mut self, line: &Line<'_>, tok: &str) -> Result<GroupElement, ParseError> {
        let inner = tok
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| line.err(tok, "expected a degree such as (0) or (1,0)"))?;
        let coords = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(|c| parse_i64(line, c.trim())).collect::<Result<Vec<_>, _>>()?
        };
        let (g, reduced) = self.spec.element_reporting(coords).map_err(|e| line.err(tok, e.to_string()))?;
        if reduced {
            self.warnings.push(format!("line {}: torsion coordinate of {tok} reduced to {g}", line.no));
        }
        Ok(g)
    }

    fn scalar(&self, line: &Line<'_>, tok: &str) -> Result<Scalar, ParseError> {
        Scalar::parse(tok, self.conductor).map_err(|e| {
            let mut err = line.err(tok, format!("scalar: {}", e.message));
            err.column += e.column.saturating_sub(1);
            err
        })
    }
}

fn required<'s, 'a>(secs: &'s BTreeMap<&'static str, (usize, Vec<Line<'a>>)>, name: &str) -> Result<&'s [Line<'a>], ParseError> {
    secs.get(name).map(|(_, l)| l.as_slice()).ok_or_else(|| global(format!("missing section [{name}]")))
}

fn parse_space(ctx: &mut Ctx, lines: &[Line<'_>]) -> Result<GradedSpace, ParseError> {
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    for line in lines {
        let (label, deg) = key_value(line)?;
        if label.is_empty() || label.contains(char::is_whitespace) || label.contains(['|', '(', ')']) {
            return Err(line.err(label, format!("invalid basis label '{label}'")));
        }
        if labels.iter().any(|l| l == label) {
            return Err(line.err(label, format!("duplicate basis label '{label}'")));
        }
        labels.push(label.to_string());
        degrees.push(ctx.degree(line, deg)?);
    }
    GradedSpace::new(ctx.spec.clone(), labels, degrees).map_err(|e| global(e.to_string()))
}

fn label_index(line: &Line<'_>, space: &GradedSpace, tok: &str) -> Result<usize, ParseError> {
    space.index_of(tok).ok_or_else(|| line.err(tok, format!("undeclared basis label '{tok}'")))
}

fn parse_vector(ctx: &Ctx, lines: &[Line<'_>], space: &GradedSpace) -> Result<Vector, ParseError> {
    let mut entries = Vec::new();
    for line in lines {
        let (label, coef) = key_value(line)?;
        let i = label_index(line, space, label)?;
        if entries.iter().any(|(j, _)| *j == i) {
            return Err(line.err(label, format!("repeated entry for '{label}'")));
        }
        entries.push((i, ctx.scalar(line, coef)?));
    }
    Ok(Vector::from_entries(entries))
}

fn parse_window(line: &Line<'_>, text: &str) -> Result<Window, ParseError> {
    if text == "empty" {
        return Ok(Window::empty());
    }
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(line.err(text, "expected 'lo hi' or 'empty'"));
    }
    Ok(Window::new(parse_i64(line, toks[0])?, parse_i64(line, toks[1])?))
}

/// Shape of an operator line: which spaces appear left and right of `->`.
struct OpShape<'s> {
    inputs: Vec<&'s GradedSpace>,
    outputs: Vec<&'s GradedSpace>,
}

impl OpShape<'_> {
    fn index(spaces: &[&GradedSpace], idx: &[usize]) -> usize {
        let mut k = 0;
        for (s, i) in spaces.iter().zip(idx) {
            k = k * s.dim() + i;
        }
        k
    }
}

type OpEntries = BTreeMap<i64, BTreeMap<(usize, usize), Scalar>>;

/// Entries `(n, source index, target index, scalar)` of an operator section.
fn parse_op_lines(
    ctx: &Ctx,
    lines: &[Line<'_>],
    shape: &OpShape<'_>,
    gamma0: &GroupElement,
    indexed: bool,
) -> Result<OpEntries, ParseError> {
    let spec = &ctx.spec;
    let mut out: OpEntries = BTreeMap::new();
    for line in lines {
        let (n, rest) = if indexed {
            let Some(bar) = line.text.find('|') else {
                return Err(line.err(line.text, "expected 'n | ... -> ... = scalar'"));
            };
            (parse_i64(line, line.text[..bar].trim())?, &line.text[bar + 1..])
        } else {
            // unindexed maps carry their whole degree in `gamma0`
            (1, line.text)
        };
        let Some(eq) = rest.rfind('=') else {
            return Err(line.err(rest, "expected '= scalar'"));
        };
        let (lhs, coef) = (&rest[..eq], rest[eq + 1..].trim());
        let Some(arrow) = lhs.find("->") else {
            return Err(line.err(lhs, "expected '->'"));
        };
        let ins: Vec<&str> = lhs[..arrow].split_whitespace().collect();
        let outs: Vec<&str> = lhs[arrow + 2..].split_whitespace().collect();
        if ins.len() != shape.inputs.len() {
            return Err(line.err(lhs, format!("expected {} input label(s), found {}", shape.inputs.len(), ins.len())));
        }
        if outs.len() != shape.outputs.len() {
            return Err(line.err(&lhs[arrow..], format!("expected {} output label(s), found {}", shape.outputs.len(), outs.len())));
        }
        let mut src = Vec::new();
        let mut deg_in = spec.zero();
        for (tok, s) in ins.iter().zip(&shape.inputs) {
            let i = label_index(line, s, tok)?;
            deg_in = spec.add(&deg_in, s.degree(i)).map_err(|e| line.err(tok, e.to_string()))?;
            src.push(i);
        }
        let mut tgt = Vec::new();
        let mut deg_out = spec.zero();
        for (tok, s) in outs.iter().zip(&shape.outputs) {
            let i = label_index(line, s, tok)?;
            deg_out = spec.add(&deg_out, s.degree(i)).map_err(|e| line.err(tok, e.to_string()))?;
            tgt.push(i);
        }
        let shift = spec.scale(n, gamma0);
        let expected = spec.add(&deg_in, &shift).map_err(|e| line.err(lhs, e.to_string()))?;
        if expected != deg_out {
            return Err(line.err(&lhs[arrow..], format!("degree mismatch: inputs give {expected}, outputs have {deg_out}")));
        }
        let s = ctx.scalar(line, coef)?;
        let key = (OpShape::index(&shape.inputs, &src), OpShape::index(&shape.outputs, &tgt));
        let slot = out.entry(n).or_default();
        if slot.contains_key(&key) {
            return Err(line.err(lhs, "repeated entry"));
        }
        if !s.is_zero() {
            slot.insert(key, s);
        }
    }
    Ok(out)
}

fn tensor_all(spaces: &[&GradedSpace]) -> Result<GradedSpace, ParseError> {
    let mut acc = spaces[0].clone();
    for s in &spaces[1..] {
        acc = acc.tensor(s).map_err(|e| global(e.to_string()))?;
    }
    Ok(acc)
}

fn build_map(shape: &OpShape<'_>, degree: GroupElement, entries: &BTreeMap<(usize, usize), Scalar>) -> Result<GradedMap, ParseError> {
    let source = tensor_all(&shape.inputs)?;
    let target = tensor_all(&shape.outputs)?;
    let mut cols = vec![Vec::new(); source.dim()];
    for ((s, t), x) in entries {
        cols[*s].push((*t, x.clone()));
    }
    GradedMap::new(source, target, degree, cols.into_iter().map(Vector::from_entries).collect()).map_err(|e| global(e.to_string()))
}

fn build_ops(shape: &OpShape<'_>, spec: &GroupSpec, gamma0: &GroupElement, raw: OpEntries) -> Result<BTreeMap<i64, GradedMap>, ParseError> {
    raw.into_iter().filter(|(_, e)| !e.is_empty()).map(|(n, e)| Ok((n, build_map(shape, spec.scale(n, gamma0), &e)?))).collect()
}

fn parse_beta(ctx: &mut Ctx, lines: &[Line<'_>]) -> Result<BetaSpec, ParseError> {
    let mut kind = None;
    let mut form: Option<Vec<Vec<i64>>> = None;
    let mut q = None;
    let mut table = BTreeMap::new();
    for line in lines {
        let (k, v) = key_value(line)?;
        match k {
            "kind" => kind = Some((*line, v)),
            "form" => {
                let rows = v
                    .split(';')
                    .map(|r| r.split_whitespace().map(|t| parse_i64(line, t)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                form = Some(rows);
            }
            "q" => q = Some(ctx.scalar(line, v)?),
            "entry" => {
                // entry = (a) (b) : s
                let Some(colon) = v.find(':') else {
                    return Err(line.err(v, "expected 'entry = (a) (b) : scalar'"));
                };
                let degs: Vec<&str> = v[..colon].split_whitespace().collect();
                if degs.len() != 2 {
                    return Err(line.err(v, "expected two degrees"));
                }
                let a = ctx.degree(line, degs[0])?;
                let b = ctx.degree(line, degs[1])?;
                table.insert((a, b), ctx.scalar(line, v[colon + 1..].trim())?);
            }
            _ => return Err(line.err(k, format!("unknown key '{k}' in [beta]"))),
        }
    }
    let Some((line, kind)) = kind else {
        return Err(global("missing 'kind' in [beta]"));
    };
    let rank = ctx.spec.rank();
    let need_form = |form: Option<Vec<Vec<i64>>>| {
        let f = form.ok_or_else(|| global("missing 'form' in [beta]"))?;
        if f.len() != rank || f.iter().any(|r| r.len() != rank) {
            return Err(global(format!("[beta] form must be {rank}x{rank}")));
        }
        Ok(f)
    };
    match kind {
        "one" => Ok(BetaSpec::One),
        "zero" => Ok(BetaSpec::Zero),
        "sign" => Ok(BetaSpec::Sign(need_form(form)?)),
        "qbilinear" => Ok(BetaSpec::QBilinear { q: q.ok_or_else(|| global("missing 'q' in [beta]"))?, form: need_form(form)? }),
        "table" => Ok(BetaSpec::Table(table)),
        other => Err(line.err(other, format!("unknown beta kind '{other}'"))),
    }
}

/// Parses the text of a structure file.
pub fn parse(src: &str) -> Result<Parsed, ParseError> {
    let secs = split_sections(src)?;
    let mut conductor = 1u32;
    for line in required(&secs, "scalars")? {
        match key_value(line)? {
            ("conductor", v) => {
                conductor = v.parse().ok().filter(|n| *n >= 1).ok_or_else(|| line.err(v, "expected a positive conductor"))?;
            }
            (k, _) => return Err(line.err(k, format!("unknown key '{k}' in [scalars]"))),
        }
    }
    let mut free_rank = None;
    let mut torsion = Vec::new();
    let mut gamma0_line = None;
    for line in required(&secs, "group")? {
        match key_value(line)? {
            ("free_rank", v) => free_rank = Some(parse_i64(line, v)?),
            ("torsion", v) => {
                torsion = v.split_whitespace().map(|t| parse_i64(line, t)).collect::<Result<Vec<_>, _>>()?;
                if let Some(bad) = v.split_whitespace().find(|t| t.parse::<i64>().is_ok_and(|m| m < 2)) {
                    return Err(line.err(bad, "torsion moduli must be at least 2"));
                }
            }
            ("gamma0", v) => gamma0_line = Some((*line, v)),
            (k, _) => return Err(line.err(k, format!("unknown key '{k}' in [group]"))),
        }
    }
    let free_rank = free_rank.ok_or_else(|| global("missing 'free_rank' in [group]"))?;
    if free_rank < 0 {
        return Err(global("free_rank must be non-negative"));
    }
    let mut ctx = Ctx { conductor, spec: GroupSpec::new(free_rank as usize, torsion), warnings: Vec::new() };
    let gamma0 = match gamma0_line {
        Some((line, v)) => ctx.degree(&line, v)?,
        None => ctx.spec.zero(),
    };
    let beta = parse_beta(&mut ctx, required(&secs, "beta")?)?;
    let space = parse_space(&mut ctx, required(&secs, "space")?)?;
    let (mut lo, mut hi) = (None, None);
    let mut empty = false;
    for line in required(&secs, "window")? {
        match (line.text, key_value(line)) {
            ("empty", _) => empty = true,
            (_, Ok(("lo", v))) => lo = Some(parse_i64(line, v)?),
            (_, Ok(("hi", v))) => hi = Some(parse_i64(line, v)?),
            (_, Ok((k, _))) => return Err(line.err(k, format!("unknown key '{k}' in [window]"))),
            (_, Err(e)) => return Err(e),
        }
    }
    let window = if empty {
        Window::empty()
    } else {
        Window::new(lo.ok_or_else(|| global("missing 'lo' in [window]"))?, hi.ok_or_else(|| global("missing 'hi' in [window]"))?)
    };

    let module_of = secs.get("module-of");
    let is_co = secs.contains_key("coY");
    if is_co && secs.contains_key("Y") {
        return Err(global("a file holds either [Y] or [coY], not both"));
    }
    let spec = ctx.spec.clone();
    let structure = if !is_co {
        let vacuum = parse_vector(&ctx, required(&secs, "vacuum")?, &space)?;
        let shape = OpShape { inputs: vec![&space, &space], outputs: vec![&space] };
        let raw = parse_op_lines(&ctx, required(&secs, "Y")?, &shape, &gamma0, true)?;
        let ops = build_ops(&shape, &spec, &gamma0, raw)?;
        let a = VertexAlgebra::new(space.clone(), gamma0.clone(), beta, window, ops, vacuum).map_err(|e| global(e.to_string()))?;
        match module_of {
            None => Structure::Algebra(a),
            Some((_, lines)) => Structure::Module(parse_module(&mut ctx, &secs, lines, a)?),
        }
    } else {
        let covacuum = parse_vector(&ctx, required(&secs, "covacuum")?, &space)?;
        let shape = OpShape { inputs: vec![&space], outputs: vec![&space, &space] };
        let raw = parse_op_lines(&ctx, required(&secs, "coY")?, &shape, &gamma0, true)?;
        let coops = build_ops(&shape, &spec, &gamma0, raw)?;
        let c = VertexCoalgebra::new(space.clone(), gamma0.clone(), beta, window, coops, covacuum).map_err(|e| global(e.to_string()))?;
        match module_of {
            None => Structure::Coalgebra(c),
            Some((_, lines)) => Structure::Comodule(parse_comodule(&mut ctx, &secs, lines, c)?),
        }
    };
    Ok(Parsed { structure, warnings: ctx.warnings })
}

fn module_header(lines: &[Line<'_>], expected: &str) -> Result<Window, ParseError> {
    let mut window = None;
    let mut base = None;
    for line in lines {
        match key_value(line)? {
            ("base", v) => {
                if v != expected {
                    return Err(line.err(v, format!("expected base = {expected}")));
                }
                base = Some(v);
            }
            ("window", v) => window = Some(parse_window(line, v)?),
            (k, _) => return Err(line.err(k, format!("unknown key '{k}' in [module-of]"))),
        }
    }
    base.ok_or_else(|| global("missing 'base' in [module-of]"))?;
    window.ok_or_else(|| global("missing 'window' in [module-of]"))
}

type Sections<'a> = BTreeMap<&'static str, (usize, Vec<Line<'a>>)>;

fn parse_endo(ctx: &Ctx, secs: &Sections<'_>, name: &str, m: &GradedSpace, degree: GroupElement) -> Result<Option<GradedMap>, ParseError> {
    let Some((_, lines)) = secs.get(name) else { return Ok(None) };
    let shape = OpShape { inputs: vec![m], outputs: vec![m] };
    let raw = parse_op_lines(ctx, lines, &shape, &degree, false)?;
    let entries = raw.into_values().next().unwrap_or_default();
    Ok(Some(build_map(&shape, degree, &entries)?))
}

fn parse_module(ctx: &mut Ctx, secs: &Sections<'_>, header: &[Line<'_>], a: VertexAlgebra) -> Result<VertexModule, ParseError> {
    let window = module_header(header, "algebra")?;
    let m = parse_space(ctx, required(secs, "mspace")?)?;
    let shape = OpShape { inputs: vec![&a.space, &m], outputs: vec![&m] };
    let raw = parse_op_lines(ctx, required(secs, "YM")?, &shape, &a.gamma0, true)?;
    let mops = build_ops(&shape, &ctx.spec, &a.gamma0, raw)?;
    let dm = parse_endo(ctx, secs, "DM", &m, ctx.spec.scale(-2, &a.gamma0))?;
    let omega = secs.get("omega").map(|(_, l)| parse_vector(ctx, l, &a.space)).transpose()?;
    VertexModule::new(a, m, window, mops, dm, omega).map_err(|e| global(e.to_string()))
}

fn parse_comodule(ctx: &mut Ctx, secs: &Sections<'_>, header: &[Line<'_>], c: VertexCoalgebra) -> Result<VertexComodule, ParseError> {
    let window = module_header(header, "coalgebra")?;
    let m = parse_space(ctx, required(secs, "mspace")?)?;
    let shape = OpShape { inputs: vec![&m], outputs: vec![&m, &c.space] };
    let raw = parse_op_lines(ctx, required(secs, "coYM")?, &shape, &c.gamma0, true)?;
    let comops = build_ops(&shape, &ctx.spec, &c.gamma0, raw)?;
    let dm = parse_endo(ctx, secs, "coDM", &m, ctx.spec.scale(2, &c.gamma0))?;
    let rho = secs.get("rho").map(|(_, l)| parse_vector(ctx, l, &c.space)).transpose()?;
    VertexComodule::new(c, m, window, comops, dm, rho).map_err(|e| global(e.to_string()))
}

// ---------------------------------------------------------------------------
// serialization

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerializeError(pub String);

impl fmt::Display for SerializeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SerializeError {}

fn write_header(out: &mut String, spec: &GroupSpec, gamma0: &GroupElement, beta: &BetaSpec) -> Result<(), SerializeError> {
    let conductor = beta_conductor(beta);
    writeln!(out, "[scalars]\nconductor = {conductor}\n").unwrap();
    let torsion: Vec<String> = spec.torsion.iter().map(|m| m.to_string()).collect();
    let torsion = if torsion.is_empty() { String::new() } else { format!(" {}", torsion.join(" ")) };
    writeln!(out, "[group]\nfree_rank = {}\ntorsion ={torsion}\ngamma0 = {gamma0}\n", spec.free_rank).unwrap();
    out.push_str("[beta]\n");
    let form_text =
        |f: &[Vec<i64>]| f.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("; ");
    match beta {
        BetaSpec::One => out.push_str("kind = one\n"),
        BetaSpec::Zero => out.push_str("kind = zero\n"),
        BetaSpec::Sign(f) => writeln!(out, "kind = sign\nform = {}", form_text(f)).unwrap(),
        BetaSpec::QBilinear { q, form } => writeln!(out, "kind = qbilinear\nq = {q}\nform = {}", form_text(form)).unwrap(),
        BetaSpec::Table(t) => {
            out.push_str("kind = table\n");
            for ((a, b), s) in t {
                writeln!(out, "entry = {a} {b} : {s}").unwrap();
            }
        }
        BetaSpec::Product(_) => return Err(SerializeError("product beta has no file form".into())),
    }
    out.push('\n');
    Ok(())
}

fn beta_conductor(beta: &BetaSpec) -> u32 {
    match beta {
        BetaSpec::QBilinear { q, .. } => q.conductor(),
        BetaSpec::Table(t) => t.values().map(|s| s.conductor()).fold(1, lcm),
        BetaSpec::Product(p) => p.iter().map(beta_conductor).fold(1, lcm),
        _ => 1,
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    let g = num_gcd(a, b);
    a / g * b
}

fn num_gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn maps_conductor<'a>(maps: impl Iterator<Item = &'a GradedMap>) -> u32 {
    let mut c = 1;
    for m in maps {
        for col in m.cols() {
            for (_, x) in col.entries() {
                c = lcm(c, x.conductor());
            }
        }
    }
    c
}

fn write_space(out: &mut String, name: &str, v: &GradedSpace) {
    writeln!(out, "[{name}]").unwrap();
    for i in 0..v.dim() {
        writeln!(out, "{} = {}", v.label(i), v.degree(i)).unwrap();
    }
    out.push('\n');
}

fn write_window(w: &Window) -> String {
    if w.is_empty() {
        "empty".into()
    } else {
        format!("{} {}", w.lo, w.hi)
    }
}

fn write_vector(out: &mut String, name: &str, v: &GradedSpace, x: &Vector) {
    writeln!(out, "[{name}]").unwrap();
    for (i, s) in x.entries() {
        writeln!(out, "{} = {s}", v.label(*i)).unwrap();
    }
    out.push('\n');
}

fn labels_of(spaces: &[&GradedSpace], mut k: usize) -> Vec<String> {
    let mut out = vec![String::new(); spaces.len()];
    for (slot, s) in spaces.iter().enumerate().rev() {
        out[slot] = s.label(k % s.dim()).to_string();
        k /= s.dim();
    }
    out
}

fn write_ops(out: &mut String, name: &str, ops: &BTreeMap<i64, GradedMap>, ins: &[&GradedSpace], outs: &[&GradedSpace]) {
    writeln!(out, "[{name}]").unwrap();
    for (n, f) in ops {
        for (s, col) in f.cols().iter().enumerate() {
            for (t, x) in col.entries() {
                writeln!(out, "{n} | {} -> {} = {x}", labels_of(ins, s).join(" "), labels_of(outs, *t).join(" ")).unwrap();
            }
        }
    }
    out.push('\n');
}

fn write_endo(out: &mut String, name: &str, f: &GradedMap, m: &GradedSpace) {
    writeln!(out, "[{name}]").unwrap();
    for (s, col) in f.cols().iter().enumerate() {
        for (t, x) in col.entries() {
            writeln!(out, "{} -> {} = {x}", m.label(s), m.label(*t)).unwrap();
        }
    }
    out.push('\n');
}

fn vec_conductor(v: &Vector) -> u32 {
    v.entries().iter().map(|(_, x)| x.conductor()).fold(1, lcm)
}

fn write_algebra(out: &mut String, a: &VertexAlgebra) -> Result<(), SerializeError> {
    write_header(out, a.spec(), &a.gamma0, &a.beta)?;
    bump_conductor(out, lcm(maps_conductor(a.ops.values()), vec_conductor(&a.vacuum)));
    write_space(out, "space", &a.space);
    writeln!(out, "[window]\nlo = {}\nhi = {}\n", a.window.lo, a.window.hi).unwrap();
    write_vector(out, "vacuum", &a.space, &a.vacuum);
    write_ops(out, "Y", &a.ops, &[&a.space, &a.space], &[&a.space]);
    Ok(())
}

fn write_coalgebra(out: &mut String, c: &VertexCoalgebra) -> Result<(), SerializeError> {
    write_header(out, c.spec(), &c.gamma0, &c.beta)?;
    bump_conductor(out, lcm(maps_conductor(c.coops.values()), vec_conductor(&c.covacuum)));
    write_space(out, "space", &c.space);
    writeln!(out, "[window]\nlo = {}\nhi = {}\n", c.window.lo, c.window.hi).unwrap();
    write_vector(out, "covacuum", &c.space, &c.covacuum);
    write_ops(out, "coY", &c.coops, &[&c.space], &[&c.space, &c.space]);
    Ok(())
}

/// Canonical text of a structure; `parse` of the output gives back an equal structure.
pub fn serialize(s: &Structure) -> Result<String, SerializeError> {
    let mut out = String::new();
    match s {
        Structure::Algebra(a) => write_algebra(&mut out, a)?,
        Structure::Coalgebra(c) => write_coalgebra(&mut out, c)?,
        Structure::Module(m) => {
            // module coefficients may need a larger field than the base
            let k = lcm(maps_conductor(m.mops.values().chain(m.d_m.iter())), m.omega.as_ref().map_or(1, vec_conductor));
            write_algebra(&mut out, &m.base)?;
            bump_conductor(&mut out, k);
            writeln!(out, "[module-of]\nbase = algebra\nwindow = {}\n", write_window(&m.window)).unwrap();
            write_space(&mut out, "mspace", &m.mspace);
            write_ops(&mut out, "YM", &m.mops, &[&m.base.space, &m.mspace], &[&m.mspace]);
            if let Some(d) = &m.d_m {
                write_endo(&mut out, "DM", d, &m.mspace);
            }
            if let Some(w) = &m.omega {
                write_vector(&mut out, "omega", &m.base.space, w);
            }
        }
        Structure::Comodule(m) => {
            let k = lcm(maps_conductor(m.comops.values().chain(m.cod_m.iter())), m.rho.as_ref().map_or(1, vec_conductor));
            write_coalgebra(&mut out, &m.base)?;
            bump_conductor(&mut out, k);
            writeln!(out, "[module-of]\nbase = coalgebra\nwindow = {}\n", write_window(&m.window)).unwrap();
            write_space(&mut out, "mspace", &m.mspace);
            write_ops(&mut out, "coYM", &m.comops, &[&m.mspace], &[&m.mspace, &m.base.space]);
            if let Some(d) = &m.cod_m {
                write_endo(&mut out, "coDM", d, &m.mspace);
            }
            if let Some(r) = &m.rho {
                write_vector(&mut out, "rho", &m.base.space, r);
            }
        }
    }
    while out.ends_with("\n\n") {
        out.pop();
    }
    Ok(out)
}

fn bump_conductor(out: &mut String, k: u32) {
    if k <= 1 {
        return;
    }
    let start = out.find("conductor = ").expect("header written") + "conductor = ".len();
    let end = start + out[start..].find('\n').expect("line end");
    let old: u32 = out[start..end].parse().expect("written by us");
    out.replace_range(start..end, &lcm(old, k).to_string());
}
