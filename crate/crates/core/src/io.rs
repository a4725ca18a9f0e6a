//! JSON files for quivers, representations and results, and DOT output for
//! knitted components.
//!
//! Every document carries `"schema": "arknit/1"`. Vertices and arrows are
//! referred to by their string labels; matrices are lists of rows whose
//! entries are integers or strings such as `"-1/2"`.
//!
//! Quivers:
//!
//! ```json
//! {"preset": "line"}
//! {"preset": "linear_a", "params": {"n": 3}}
//! {"vertices": ["1", "2"], "arrows": [["1", "2", "a"], ["1", "2", "b"]]}
//! ```
//!
//! Representations are constructor trees with one key per node: `zero`,
//! `proj`, `inj`, `simple`, `thin`, `explicit`, `coker_proj`, `ker_inj`,
//! `glue`, `sum`, `dual` and `restrict`.
//!
//! ```
//! use arknit_core::io::{emit_rep, parse_quiver, parse_rep};
//! use arknit_core::{Budget, Rat};
//! use serde_json::json;
//! let q = parse_quiver(&json!({"preset": "line"})).unwrap();
//! let p = parse_rep::<Rat>(&q, &json!({"proj": 0})).unwrap();
//! assert_eq!(p.dim(q.vertex("-4").unwrap()).unwrap(), 1);
//! assert_eq!(emit_rep(&p, &Budget::default()).unwrap(), json!({"proj": "0"}));
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::ar::{canonical_form, AlmostSplitReport, ArComponent, ShapeHypothesis};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::{ExtSpace, FiniteExtension, HomSpace, Ses};
use crate::linalg::Mat;
use crate::present::Presentation;
use crate::quiver::{window, Arrow, Path, Preset, Quiver, Vertex, VertexSet};
use crate::rep::{Cocycle, Morphism, PathComb, PathMatrix, Rep, RepNode, Side};
use crate::structure::{Evidence, Membership};
use crate::Budget;

pub const SCHEMA: &str = "arknit/1";

fn fail<T>(path: &str, msg: impl fmt::Display) -> Result<T> {
    let at = if path.is_empty() { "/" } else { path };
    Err(Error::Malformed(format!("{at}: {msg}")))
}

fn child(path: &str, key: impl fmt::Display) -> String {
    let key = key.to_string().replace('~', "~0").replace('/', "~1");
    format!("{path}/{key}")
}

/// Parses JSON text; errors carry the line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.rfind(" at line ").map_or(msg.as_str(), |i| &msg[..i]).to_string();
        Error::Malformed(format!("line {}, column {}: {msg}", e.line(), e.column()))
    })
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().map_or_else(|| fail(path, "expected an object"), Ok)
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().map_or_else(|| fail(path, "expected an array"), Ok)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).map_or_else(|| fail(path, format!("missing key '{key}'")), Ok)
}

fn only_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return fail(&child(path, k), format!("unexpected key, expected one of {allowed:?}"));
        }
    }
    if let Some(s) = obj.get("schema") {
        if s.as_str() != Some(SCHEMA) {
            return fail(&child(path, "schema"), format!("unsupported schema, expected \"{SCHEMA}\""));
        }
    }
    Ok(())
}

fn uint(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map_or_else(|| fail(path, "expected a non-negative integer"), |n| Ok(n as usize))
}

fn label_of(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() => Ok(n.to_string()),
        _ => fail(path, "expected a label (string or integer)"),
    }
}

fn flag(obj: &Map<String, Value>, key: &str, path: &str) -> Result<bool> {
    match obj.get(key) {
        None => Ok(false),
        Some(Value::Bool(b)) => Ok(*b),
        Some(_) => fail(&child(path, key), "expected a boolean"),
    }
}

// ---------------------------------------------------------------- quivers

fn finite_preset(name: &str, params: &Map<String, Value>, path: &str) -> Result<Option<Arc<Quiver>>> {
    let p = child(path, "params");
    match name {
        "linear_a" | "a" => {
            only_keys(params, &["n"], &p)?;
            let n = uint(field(params, "n", &p)?, &child(&p, "n"))?;
            if n == 0 {
                return fail(&child(&p, "n"), "needs at least one vertex");
            }
            Ok(Some(Quiver::linear_a(n)))
        }
        "kronecker" => {
            only_keys(params, &["arrows"], &p)?;
            let m = match params.get("arrows") {
                Some(v) => uint(v, &child(&p, "arrows"))?,
                None => 2,
            };
            if m == 2 {
                return Ok(Some(Quiver::kronecker()));
            }
            let labels: Vec<String> = (1..=m).map(|i| format!("a{i}")).collect();
            let arrows: Vec<(&str, &str, &str)> = labels.iter().map(|l| ("1", "2", l.as_str())).collect();
            Quiver::finite(&["1", "2"], &arrows).map(Some)
        }
        _ => Ok(None),
    }
}

/// Reads a quiver spec.
///
/// ```
/// use arknit_core::io::parse_quiver;
/// let q = parse_quiver(&serde_json::json!({"preset": "line"})).unwrap();
/// assert_eq!(q.describe(), "line");
/// let e = parse_quiver(&serde_json::json!({"vertices": ["1"], "arrows": [["1", "2", "a"]]})).unwrap_err();
/// assert!(e.to_string().contains("/arrows/0"));
/// ```
pub fn parse_quiver(v: &Value) -> Result<Arc<Quiver>> {
    quiver_at(v, "")
}

fn quiver_at(v: &Value, path: &str) -> Result<Arc<Quiver>> {
    let obj = object(v, path)?;
    let q = if let Some(name) = obj.get("preset") {
        only_keys(obj, &["schema", "preset", "params", "opposite"], path)?;
        let name = name.as_str().map_or_else(|| fail(&child(path, "preset"), "expected a preset name"), Ok)?;
        let empty = Map::new();
        let params = match obj.get("params") {
            Some(p) => object(p, &child(path, "params"))?,
            None => &empty,
        };
        match finite_preset(name, params, path)? {
            Some(q) => q,
            None => match Preset::from_name(name) {
                Some(p) => {
                    only_keys(params, &[], &child(path, "params"))?;
                    Quiver::preset(p)
                }
                None => return fail(&child(path, "preset"), format!("unknown preset '{name}'")),
            },
        }
    } else {
        only_keys(obj, &["schema", "vertices", "arrows", "opposite"], path)?;
        let vp = child(path, "vertices");
        let labels = array(field(obj, "vertices", path)?, &vp)?
            .iter()
            .enumerate()
            .map(|(i, x)| label_of(x, &child(&vp, i)))
            .collect::<Result<Vec<String>>>()?;
        let ap = child(path, "arrows");
        let mut arrows = Vec::new();
        let empty = Vec::new();
        let list = match obj.get("arrows") {
            Some(a) => array(a, &ap)?,
            None => &empty,
        };
        for (i, a) in list.iter().enumerate() {
            let p = child(&ap, i);
            let parts = array(a, &p)?;
            if !(2..=3).contains(&parts.len()) {
                return fail(&p, "expected [source, target, label]");
            }
            let s = label_of(&parts[0], &child(&p, 0))?;
            let t = label_of(&parts[1], &child(&p, 1))?;
            for (j, x) in [(0, &s), (1, &t)] {
                if !labels.contains(x) {
                    return fail(&child(&p, j), format!("unknown vertex '{x}'"));
                }
            }
            let l = match parts.get(2) {
                Some(l) => label_of(l, &child(&p, 2))?,
                None => format!("{s}->{t}"),
            };
            arrows.push((s, t, l));
        }
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let arefs: Vec<(&str, &str, &str)> = arrows.iter().map(|(s, t, l)| (s.as_str(), t.as_str(), l.as_str())).collect();
        Quiver::finite(&refs, &arefs).or_else(|e| fail(path, e))?
    };
    Ok(if flag(obj, "opposite", path)? { q.opposite() } else { q })
}

/// Canonical spec of a quiver. Finite quivers are written out in full.
pub fn emit_quiver(q: &Quiver) -> Value {
    if q.is_reversed() {
        let mut v = emit_quiver(&q.opposite());
        v["opposite"] = Value::Bool(true);
        return v;
    }
    match q.preset_kind() {
        Some(p) => json!({ "preset": p.name() }),
        None => {
            let vs = q.vertices().unwrap_or_default();
            let arrows: Vec<Value> = q
                .arrows()
                .unwrap_or_default()
                .into_iter()
                .map(|a| json!([q.vertex_label(a.src), q.vertex_label(a.dst), q.arrow_label(a)]))
                .collect();
            json!({
                "vertices": vs.iter().map(|&v| q.vertex_label(v)).collect::<Vec<_>>(),
                "arrows": arrows,
            })
        }
    }
}

fn vertex_at(q: &Quiver, v: &Value, path: &str) -> Result<Vertex> {
    let l = label_of(v, path)?;
    q.vertex(&l).map_or_else(|| fail(path, format!("unknown vertex '{l}'")), Ok)
}

fn vertices_at(q: &Quiver, v: &Value, path: &str) -> Result<Vec<Vertex>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| vertex_at(q, x, &child(path, i))).collect()
}

fn arrow_at(q: &Quiver, label: &str, path: &str) -> Result<Arrow> {
    q.arrow(label).map_or_else(|| fail(path, format!("unknown arrow '{label}'")), Ok)
}

fn labels(q: &Quiver, vs: impl IntoIterator<Item = Vertex>) -> Value {
    Value::Array(vs.into_iter().map(|v| Value::String(q.vertex_label(v))).collect())
}

fn arrow_labels(q: &Quiver, arrows: &[Arrow]) -> Value {
    Value::Array(arrows.iter().map(|&a| Value::String(q.arrow_label(a))).collect())
}

// ------------------------------------------------------------ vertex sets

/// Reads a vertex set: `"all"`, `"empty"`, or one of `finite`,
/// `successors`, `predecessors`, `range`, `closure`, `union`,
/// `intersection`, `complement`.
pub fn parse_vertex_set(q: &Quiver, v: &Value) -> Result<VertexSet> {
    vset_at(q, v, "")
}

fn vset_at(q: &Quiver, v: &Value, path: &str) -> Result<VertexSet> {
    match v {
        Value::String(s) if s == "all" => return Ok(VertexSet::All),
        Value::String(s) if s == "empty" => return Ok(VertexSet::Empty),
        _ => {}
    }
    let obj = object(v, path)?;
    if obj.len() != 1 {
        return fail(path, "expected exactly one vertex set constructor");
    }
    let (key, body) = obj.iter().next().expect("one entry");
    let p = child(path, key);
    let set = |x: &Value| -> Result<BTreeSet<Vertex>> { Ok(vertices_at(q, x, &p)?.into_iter().collect()) };
    let optional_int = |o: &Map<String, Value>, k: &str| -> Result<Option<i64>> {
        match o.get(k) {
            None | Some(Value::Null) => Ok(None),
            Some(x) => x.as_i64().map_or_else(|| fail(&child(&p, k), "expected an integer"), |n| Ok(Some(n))),
        }
    };
    Ok(match key.as_str() {
        "finite" => VertexSet::Finite(set(body)?),
        "successors" => VertexSet::Successors(set(body)?),
        "predecessors" => VertexSet::Predecessors(set(body)?),
        "range" => {
            let o = object(body, &p)?;
            only_keys(o, &["lane", "lo", "hi"], &p)?;
            let lane = match o.get("lane") {
                None => Some(0),
                Some(Value::String(s)) if s == "any" => None,
                Some(x) => match x.as_u64() {
                    Some(n) if n <= 1 => Some(n as u8),
                    _ => return fail(&child(&p, "lane"), "expected 0, 1 or \"any\""),
                },
            };
            VertexSet::Range { lane, lo: optional_int(o, "lo")?, hi: optional_int(o, "hi")? }
        }
        "closure" => {
            let o = object(body, &p)?;
            only_keys(o, &["seeds", "forward", "within"], &p)?;
            let seeds = vertices_at(q, field(o, "seeds", &p)?, &child(&p, "seeds"))?.into_iter().collect();
            let forward = match o.get("forward") {
                None => true,
                Some(_) => flag(o, "forward", &p)?,
            };
            let within = match o.get("within") {
                None => VertexSet::All,
                Some(w) => vset_at(q, w, &child(&p, "within"))?,
            };
            VertexSet::Closure { seeds, forward, within: Box::new(within) }
        }
        "union" | "intersection" => {
            let parts = array(body, &p)?
                .iter()
                .enumerate()
                .map(|(i, x)| vset_at(q, x, &child(&p, i)))
                .collect::<Result<Vec<_>>>()?;
            if key == "union" {
                VertexSet::Union(parts)
            } else {
                VertexSet::Intersection(parts)
            }
        }
        "complement" => VertexSet::Complement(Box::new(vset_at(q, body, &p)?)),
        other => return fail(&p, format!("unknown vertex set constructor '{other}'")),
    })
}

pub fn emit_vertex_set(q: &Quiver, s: &VertexSet) -> Result<Value> {
    Ok(match s {
        VertexSet::Empty => json!("empty"),
        VertexSet::All => json!("all"),
        VertexSet::Finite(v) => json!({ "finite": labels(q, v.iter().copied()) }),
        VertexSet::Successors(v) => json!({ "successors": labels(q, v.iter().copied()) }),
        VertexSet::Predecessors(v) => json!({ "predecessors": labels(q, v.iter().copied()) }),
        VertexSet::Range { lane, lo, hi } => {
            let mut o = Map::new();
            o.insert("lane".into(), lane.map_or_else(|| json!("any"), |l| json!(l)));
            if let Some(lo) = lo {
                o.insert("lo".into(), json!(lo));
            }
            if let Some(hi) = hi {
                o.insert("hi".into(), json!(hi));
            }
            json!({ "range": o })
        }
        VertexSet::Closure { seeds, forward, within } => json!({ "closure": {
            "seeds": labels(q, seeds.iter().copied()),
            "forward": forward,
            "within": emit_vertex_set(q, within)?,
        }}),
        VertexSet::Union(p) => json!({ "union": p.iter().map(|x| emit_vertex_set(q, x)).collect::<Result<Vec<_>>>()? }),
        VertexSet::Intersection(p) => {
            json!({ "intersection": p.iter().map(|x| emit_vertex_set(q, x)).collect::<Result<Vec<_>>>()? })
        }
        VertexSet::Complement(x) => json!({ "complement": emit_vertex_set(q, x)? }),
        VertexSet::Oracle(_, name) => {
            return Err(Error::Malformed(format!("vertex set '{name}' has no finite description")))
        }
    })
}

// ---------------------------------------------------------------- scalars

pub fn parse_scalar<F: Field>(v: &Value, path: &str) -> Result<F> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(F::from_i64(i)),
            None => F::parse_scalar(&n.to_string()).map_or_else(|| fail(path, "expected an exact scalar"), Ok),
        },
        Value::String(s) => F::parse_scalar(s.trim()).map_or_else(|| fail(path, format!("bad scalar '{s}'")), Ok),
        _ => fail(path, "expected an integer or a string like \"-1/2\""),
    }
}

pub fn emit_scalar<F: Field>(x: &F) -> Value {
    let s = x.to_string();
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => Value::String(s),
    }
}

/// Reads a `rows × cols` matrix given as a list of rows.
pub fn parse_matrix<F: Field>(v: &Value, rows: usize, cols: usize, path: &str) -> Result<Mat<F>> {
    let list = array(v, path)?;
    if list.len() != rows {
        return fail(path, format!("expected {rows} rows, found {}", list.len()));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, r) in list.iter().enumerate() {
        let rp = child(path, i);
        let entries = array(r, &rp)?;
        if entries.len() != cols {
            return fail(&rp, format!("expected {cols} entries, found {}", entries.len()));
        }
        out.push(entries.iter().enumerate().map(|(j, x)| parse_scalar(x, &child(&rp, j))).collect::<Result<Vec<F>>>()?);
    }
    Mat::from_rows(out, cols).or_else(|e| fail(path, e))
}

pub fn emit_matrix<F: Field>(m: &Mat<F>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(emit_scalar).collect())).collect())
}

// ------------------------------------------------------- representations

/// Reads a representation spec over `q`.
///
/// ```
/// use arknit_core::io::{parse_quiver, parse_rep};
/// use arknit_core::Rat;
/// use serde_json::json;
/// let q = parse_quiver(&json!({"preset": "linear_a", "params": {"n": 3}})).unwrap();
/// let m = parse_rep::<Rat>(&q, &json!({"explicit": {"dims": {"1": 1, "2": 1}, "maps": {"1->2": [[1]]}}})).unwrap();
/// assert_eq!(m.dim(q.vertex("2").unwrap()).unwrap(), 1);
/// let e = parse_rep::<Rat>(&q, &json!({"sum": [{"proj": "1"}, {"simple": "9"}]})).unwrap_err();
/// assert!(e.to_string().contains("/sum/1/simple"));
/// ```
pub fn parse_rep<F: Field>(q: &Arc<Quiver>, v: &Value) -> Result<Rep<F>> {
    rep_at(q, v, "")
}

fn rep_at<F: Field>(q: &Arc<Quiver>, v: &Value, path: &str) -> Result<Rep<F>> {
    if v.as_str() == Some("zero") {
        return Ok(Rep::zero(q));
    }
    let obj = object(v, path)?;
    let keys: Vec<&String> = obj.keys().filter(|k| k.as_str() != "schema").collect();
    if keys.len() != 1 {
        return fail(path, "expected exactly one constructor key");
    }
    only_keys(obj, &["schema", keys[0].as_str()], path)?;
    let key = keys[0].as_str();
    let body = &obj[key];
    let p = child(path, key);
    let wrap = |r: Result<Rep<F>>| r.or_else(|e| fail(&p, e));
    match key {
        "zero" => Ok(Rep::zero(q)),
        "proj" => wrap(Rep::projective(q, vertex_at(q, body, &p)?)),
        "inj" => wrap(Rep::injective(q, vertex_at(q, body, &p)?)),
        "simple" => wrap(Rep::simple(q, vertex_at(q, body, &p)?)),
        "thin" => Ok(Rep::thin(q, vset_at(q, body, &p)?)),
        "explicit" => explicit_at(q, body, &p),
        "coker_proj" => wrap(Rep::coker_proj(q, path_matrix_at(q, Side::Projective, body, &p)?)),
        "ker_inj" => wrap(Rep::ker_inj(q, path_matrix_at(q, Side::Injective, body, &p)?)),
        "glue" => {
            let o = object(body, &p)?;
            only_keys(o, &["sub", "quot", "cocycle"], &p)?;
            let sub = rep_at(q, field(o, "sub", &p)?, &child(&p, "sub"))?;
            let quot = rep_at(q, field(o, "quot", &p)?, &child(&p, "quot"))?;
            let cocycle = match o.get("cocycle") {
                Some(c) => cocycle_at(q, &sub, &quot, c, &child(&p, "cocycle"))?,
                None => Cocycle::new(),
            };
            wrap(Rep::glue(&sub, &quot, cocycle))
        }
        "sum" => {
            let parts = array(body, &p)?
                .iter()
                .enumerate()
                .map(|(i, x)| rep_at(q, x, &child(&p, i)))
                .collect::<Result<Vec<_>>>()?;
            wrap(Rep::direct_sum(q, parts))
        }
        "dual" => Ok(rep_at::<F>(&q.opposite(), body, &p)?.dual()),
        "restrict" => {
            let o = object(body, &p)?;
            only_keys(o, &["rep", "to"], &p)?;
            let inner = rep_at(q, field(o, "rep", &p)?, &child(&p, "rep"))?;
            Ok(inner.restrict(vset_at(q, field(o, "to", &p)?, &child(&p, "to"))?))
        }
        other => fail(&p, format!("unknown constructor '{other}'")),
    }
}

fn explicit_at<F: Field>(q: &Arc<Quiver>, body: &Value, path: &str) -> Result<Rep<F>> {
    let o = object(body, path)?;
    only_keys(o, &["dims", "maps", "basis"], path)?;
    let dp = child(path, "dims");
    let mut dims = BTreeMap::new();
    for (l, d) in object(field(o, "dims", path)?, &dp)? {
        let v = vertex_at(q, &Value::String(l.clone()), &child(&dp, l))?;
        dims.insert(v, uint(d, &child(&dp, l))?);
    }
    let dim = |v: Vertex| dims.get(&v).copied().unwrap_or(0);
    let mut maps = BTreeMap::new();
    if let Some(m) = o.get("maps") {
        let mp = child(path, "maps");
        for (l, x) in object(m, &mp)? {
            let ap = child(&mp, l);
            let a = arrow_at(q, l, &ap)?;
            maps.insert(a, parse_matrix(x, dim(a.dst), dim(a.src), &ap)?);
        }
    }
    let mut basis = BTreeMap::new();
    if let Some(b) = o.get("basis") {
        let bp = child(path, "basis");
        for (l, x) in object(b, &bp)? {
            let lp = child(&bp, l);
            let v = vertex_at(q, &Value::String(l.clone()), &lp)?;
            let names = array(x, &lp)?
                .iter()
                .enumerate()
                .map(|(i, n)| label_of(n, &child(&lp, i)))
                .collect::<Result<Vec<_>>>()?;
            basis.insert(v, names);
        }
    }
    Rep::explicit_labeled(q, dims, basis, maps).or_else(|e| fail(path, e))
}

fn cocycle_at<F: Field>(q: &Quiver, sub: &Rep<F>, quot: &Rep<F>, v: &Value, path: &str) -> Result<Cocycle<F>> {
    let mut c = Cocycle::new();
    for (l, x) in object(v, path)? {
        let ap = child(path, l);
        let a = arrow_at(q, l, &ap)?;
        let (rows, cols) = (sub.dim(a.dst).or_else(|e| fail(&ap, e))?, quot.dim(a.src).or_else(|e| fail(&ap, e))?);
        c = c.with(a, parse_matrix(x, rows, cols, &ap)?);
    }
    Ok(c)
}

fn path_matrix_at<F: Field>(q: &Quiver, side: Side, v: &Value, path: &str) -> Result<PathMatrix<F>> {
    let o = object(v, path)?;
    only_keys(o, &["domain", "codomain", "entries"], path)?;
    let domain = vertices_at(q, field(o, "domain", path)?, &child(path, "domain"))?;
    let codomain = vertices_at(q, field(o, "codomain", path)?, &child(path, "codomain"))?;
    let ep = child(path, "entries");
    let rows = match o.get("entries") {
        Some(e) => array(e, &ep)?.clone(),
        None => Vec::new(),
    };
    if rows.is_empty() {
        return Ok(PathMatrix::zero(side, domain, codomain));
    }
    if rows.len() != codomain.len() {
        return fail(&ep, format!("expected {} rows, one per codomain summand", codomain.len()));
    }
    let mut entries = Vec::with_capacity(rows.len());
    for (j, r) in rows.iter().enumerate() {
        let rp = child(&ep, j);
        let cells = array(r, &rp)?;
        if cells.len() != domain.len() {
            return fail(&rp, format!("expected {} entries, one per domain summand", domain.len()));
        }
        let mut row = Vec::with_capacity(cells.len());
        for (i, cell) in cells.iter().enumerate() {
            let cp = child(&rp, i);
            let mut terms = Vec::new();
            for (k, t) in array(cell, &cp)?.iter().enumerate() {
                let tp = child(&cp, k);
                let to = object(t, &tp)?;
                only_keys(to, &["coeff", "start", "arrows"], &tp)?;
                let start = vertex_at(q, field(to, "start", &tp)?, &child(&tp, "start"))?;
                let mut arrows = Vec::new();
                if let Some(list) = to.get("arrows") {
                    let lp = child(&tp, "arrows");
                    for (n, l) in array(list, &lp)?.iter().enumerate() {
                        let np = child(&lp, n);
                        arrows.push(arrow_at(q, &label_of(l, &np)?, &np)?);
                    }
                }
                let coeff = match to.get("coeff") {
                    Some(c) => parse_scalar(c, &child(&tp, "coeff"))?,
                    None => F::one(),
                };
                terms.push((Path::new(start, arrows).or_else(|e| fail(&tp, e))?, coeff));
            }
            row.push(PathComb::from_terms(terms));
        }
        entries.push(row);
    }
    PathMatrix::new(side, domain, codomain, entries).or_else(|e| fail(path, e))
}

pub fn emit_path_matrix<F: Field>(q: &Quiver, pm: &PathMatrix<F>) -> Value {
    let entries: Vec<Value> = pm
        .entries()
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|c| {
                        Value::Array(
                            c.terms()
                                .map(|(p, x)| {
                                    json!({
                                        "coeff": emit_scalar(x),
                                        "start": q.vertex_label(p.start()),
                                        "arrows": arrow_labels(q, p.arrows()),
                                    })
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    json!({
        "domain": labels(q, pm.domain().iter().copied()),
        "codomain": labels(q, pm.codomain().iter().copied()),
        "entries": entries,
    })
}

pub fn emit_cocycle<F: Field>(q: &Quiver, c: &Cocycle<F>) -> Value {
    Value::Object(c.entries.iter().map(|(a, m)| (q.arrow_label(*a), emit_matrix(m))).collect())
}

/// Spec of a representation. Kernels, cokernels and images have no spec of
/// their own and are replaced by an explicit, presented or copresented form.
pub fn emit_rep<F: Field>(m: &Rep<F>, budget: &Budget) -> Result<Value> {
    let q = m.quiver();
    Ok(match m.node() {
        RepNode::Zero => json!({ "zero": null }),
        RepNode::Proj(v) => json!({ "proj": q.vertex_label(*v) }),
        RepNode::Inj(v) => json!({ "inj": q.vertex_label(*v) }),
        RepNode::Simple(v) => json!({ "simple": q.vertex_label(*v) }),
        RepNode::Thin(s) => json!({ "thin": emit_vertex_set(q, s)? }),
        RepNode::Explicit(d) => {
            let dims: Map<String, Value> = d.dims.iter().map(|(v, n)| (q.vertex_label(*v), json!(n))).collect();
            let maps: Map<String, Value> = d.maps.iter().map(|(a, x)| (q.arrow_label(*a), emit_matrix(x))).collect();
            let mut body = json!({ "dims": dims, "maps": maps });
            if !d.labels.is_empty() {
                let basis: Map<String, Value> = d.labels.iter().map(|(v, l)| (q.vertex_label(*v), json!(l))).collect();
                body["basis"] = Value::Object(basis);
            }
            json!({ "explicit": body })
        }
        RepNode::CokerProj(pm) => json!({ "coker_proj": emit_path_matrix(q, pm) }),
        RepNode::KerInj(pm) => json!({ "ker_inj": emit_path_matrix(q, pm) }),
        RepNode::Glue { sub, quot, cocycle } => json!({ "glue": {
            "sub": emit_rep(sub, budget)?,
            "quot": emit_rep(quot, budget)?,
            "cocycle": emit_cocycle(q, cocycle),
        }}),
        RepNode::DirectSum(parts) => {
            json!({ "sum": parts.iter().map(|p| emit_rep(p, budget)).collect::<Result<Vec<_>>>()? })
        }
        RepNode::Dual(inner) => json!({ "dual": emit_rep(inner, budget)? }),
        RepNode::Restrict(inner, s) => json!({ "restrict": {
            "rep": emit_rep(inner, budget)?,
            "to": emit_vertex_set(q, s)?,
        }}),
        RepNode::Kernel(_) | RepNode::Cokernel(_) | RepNode::Image(_) => {
            let c = canonical_form(m, budget)?;
            if matches!(c.node(), RepNode::Kernel(_) | RepNode::Cokernel(_) | RepNode::Image(_)) {
                return Err(Error::BudgetExhausted(format!(
                    "no finite description of {} found within radius {}",
                    m.describe(),
                    budget.max_radius
                )));
            }
            emit_rep(&c, budget)?
        }
    })
}

// --------------------------------------------------------------- results

/// Vertices on which certificates are written out: everything for finite
/// quivers, a window around `anchors` otherwise.
pub fn certificate_window(q: &Quiver, anchors: &[Vertex], radius: usize) -> BTreeSet<Vertex> {
    match q.vertices() {
        Some(all) => all.into_iter().collect(),
        None => window(q, anchors, radius).vertices,
    }
}

pub fn emit_dims<F: Field>(m: &Rep<F>, verts: &BTreeSet<Vertex>) -> Result<Value> {
    let q = m.quiver();
    let mut o = Map::new();
    for &v in verts {
        let d = m.dim(v)?;
        if d > 0 {
            o.insert(q.vertex_label(v), json!(d));
        }
    }
    Ok(Value::Object(o))
}

/// Matrices of `f` at the vertices of `verts` where both sides are nonzero.
pub fn emit_morphism<F: Field>(f: &Morphism<F>, verts: &BTreeSet<Vertex>) -> Result<Value> {
    let q = f.domain().quiver();
    let mut o = Map::new();
    for &v in verts {
        if f.domain().dim(v)? > 0 && f.codomain().dim(v)? > 0 {
            o.insert(q.vertex_label(v), emit_matrix(&f.at(v)?));
        }
    }
    Ok(Value::Object(o))
}

pub fn emit_budget(b: &Budget) -> Value {
    json!({ "radius": b.radius, "step": b.step, "max_radius": b.max_radius })
}

pub fn emit_ses<F: Field>(s: &Ses<F>, budget: &Budget) -> Result<Value> {
    let q = s.middle.quiver();
    let verts = certificate_window(q, &s.anchors(), budget.radius);
    Ok(json!({
        "sub": emit_rep(&s.sub, budget)?,
        "middle": emit_rep(&s.middle, budget)?,
        "quot": emit_rep(&s.quot, budget)?,
        "cocycle": s.cocycle.as_ref().map(|c| emit_cocycle(q, c)),
        "window": labels(q, verts.iter().copied()),
        "dims": {
            "sub": emit_dims(&s.sub, &verts)?,
            "middle": emit_dims(&s.middle, &verts)?,
            "quot": emit_dims(&s.quot, &verts)?,
        },
        "inclusion": emit_morphism(&s.inclusion, &verts)?,
        "projection": emit_morphism(&s.projection, &verts)?,
    }))
}

pub fn emit_hom<F: Field>(h: &HomSpace<F>, budget: &Budget) -> Result<Value> {
    let q = h.domain.quiver();
    let basis = h.basis.iter().map(|f| emit_morphism(f, &h.determining)).collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "domain": emit_rep(&h.domain, budget)?,
        "codomain": emit_rep(&h.codomain, budget)?,
        "dim": h.dim(),
        "route": h.route.name(),
        "determining": labels(q, h.determining.iter().copied()),
        "radii": [h.radii.0, h.radii.1],
        "basis": basis,
    }))
}

pub fn emit_ext<F: Field>(e: &ExtSpace<F>, budget: &Budget) -> Result<Value> {
    let q = e.quot.quiver();
    Ok(json!({
        "quot": emit_rep(&e.quot, budget)?,
        "sub": emit_rep(&e.sub, budget)?,
        "dim": e.dim(),
        "window": labels(q, e.window.iter().copied()),
        "window_relative": e.window_relative,
        "classes": e.classes.iter().map(|c| emit_cocycle(q, c)).collect::<Vec<_>>(),
    }))
}

pub fn emit_presentation<F: Field>(p: &Presentation<F>) -> Value {
    let q = p.object.quiver();
    json!({
        "side": match p.side() { Side::Projective => "projective", Side::Injective => "injective" },
        "zeroth": labels(q, p.zeroth().iter().copied()),
        "first": labels(q, p.first().iter().copied()),
        "path_matrix": emit_path_matrix(q, &p.pm),
        "radii": [p.radii.0, p.radii.1],
    })
}

pub fn emit_finite_extension(q: &Quiver, r: &FiniteExtension) -> Value {
    json!({
        "finite": r.finite,
        "witness": arrow_labels(q, &r.witness),
        "growth": r.growth.iter().map(|(r, n)| json!([r, n])).collect::<Vec<_>>(),
        "definitional": r.definitional,
    })
}

pub fn emit_report(r: &AlmostSplitReport) -> Value {
    json!({
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed })).collect::<Vec<_>>(),
        "battery": r.battery,
    })
}

pub fn emit_membership<F: Field>(q: &Quiver, m: &Membership<F>, budget: &Budget) -> Result<Value> {
    let evidence = match &m.evidence {
        Evidence::FiniteSupport(s) => json!({ "kind": "finiteSupport", "support": labels(q, s.iter().copied()) }),
        Evidence::Presentation(p) => json!({ "kind": "presentation", "presentation": emit_presentation(p) }),
        Evidence::Copresentation(p) => json!({ "kind": "copresentation", "copresentation": emit_presentation(p) }),
        Evidence::StandardExt(s) => {
            json!({
                "kind": "standardExt",
                "omega": emit_vertex_set(q, &s.omega)?,
                "ses": emit_ses(&s.ses, budget)?,
                "report": emit_finite_extension(q, &s.report),
            })
        }
        Evidence::NoInfinitePaths { sources, sinks, growth } => json!({
            "kind": "noInfinitePaths",
            "sources": labels(q, sources.iter().copied()),
            "sinks": labels(q, sinks.iter().copied()),
            "growth": growth.iter().map(|(r, a, b)| json!([r, a, b])).collect::<Vec<_>>(),
        }),
        Evidence::InfiniteGluing { omega, report, .. } => {
            json!({
                "kind": "infiniteGluing",
                "omega": emit_vertex_set(q, omega)?,
                "report": emit_finite_extension(q, report),
            })
        }
        Evidence::Inconclusive { radius } => json!({ "kind": "inconclusive", "radius": radius }),
    };
    Ok(json!({
        "verdict": m.verdict.name(),
        "in_rrep": m.verdict.in_rrep(),
        "evidence": evidence,
        "budget": emit_budget(&m.budget),
    }))
}

pub fn emit_shape(h: &ShapeHypothesis) -> Value {
    json!({ "shape": h.shape.name(), "certificate": h.certificate })
}

/// Full payload of a knitted component.
pub fn emit_component<F: Field>(c: &ArComponent<F>) -> Result<Value> {
    let q = &c.quiver;
    let budget = c.options.budget;
    let vertices = c
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            Ok(json!({
                "id": i,
                "rep": emit_rep(&v.rep, &budget)?,
                "tag": v.class.tag(),
                "fp": v.class.fp,
                "fc": v.class.fc,
                "projective": v.class.projective,
                "injective": v.class.injective,
                "depth": v.depth,
                "open": v.open,
                "snapshot": v.snapshot,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let arrows: Vec<Value> = c
        .arrows
        .iter()
        .map(|a| {
            json!({
                "src": a.src,
                "dst": a.dst,
                "multiplicity": a.multiplicity(),
                "valuation": [a.into_dst, a.out_of_src],
            })
        })
        .collect();
    let tau: Vec<Value> = c.tau.iter().map(|(x, t)| json!({ "vertex": x, "translate": t })).collect();
    let reports: Vec<Value> = c
        .reports
        .iter()
        .map(|(x, r)| {
            let mut v = emit_report(r);
            v["vertex"] = json!(x);
            v
        })
        .collect();
    Ok(json!({
        "field": F::name(),
        "quiver": emit_quiver(q),
        "options": {
            "depth": c.options.depth,
            "verify": c.options.verify,
            "budget": emit_budget(&budget),
        },
        "vertices": vertices,
        "arrows": arrows,
        "tau": tau,
        "reports": reports,
        "shape": emit_shape(&crate::ar::classify_component(c)),
    }))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT text for a component: one node per vertex labelled by its dimension
/// snapshot and class tag, one edge per unit of multiplicity, and a dashed
/// edge from each vertex to its translate.
///
/// ```
/// use arknit_core::{ar::{knit, KnitOptions}, io::emit_dot, quiver::Quiver, rep::Rep, Rat};
/// let q = Quiver::kronecker();
/// let p2 = Rep::<Rat>::projective(&q, q.vertex("2").unwrap()).unwrap();
/// let c = knit(&p2, &KnitOptions { depth: 1, ..Default::default() }).unwrap();
/// let dot = emit_dot(&c);
/// assert!(dot.starts_with("digraph ar {"));
/// assert_eq!(dot.matches("n0 -> n1;").count(), 2);
/// ```
pub fn emit_dot<F: Field>(c: &ArComponent<F>) -> String {
    let mut out = String::new();
    out.push_str("digraph ar {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box, fontname=\"monospace\"];\n");
    for (i, v) in c.vertices.iter().enumerate() {
        let mut label = format!("{}\\n{}", dot_escape(&v.snapshot), v.class.tag());
        if v.open {
            label.push_str(" open");
        }
        let _ = writeln!(out, "  n{i} [label=\"{label}\"];");
    }
    for a in &c.arrows {
        for _ in 0..a.multiplicity() {
            let _ = writeln!(out, "  n{} -> n{};", a.src, a.dst);
        }
    }
    for (x, t) in &c.tau {
        let _ = writeln!(out, "  n{x} -> n{t} [style=dashed, constraint=false];");
    }
    out.push_str("}\n");
    out
}

/// Wraps a payload into a versioned document.
pub fn document(kind: &str, payload: Value) -> Value {
    let mut o = Map::new();
    o.insert("schema".into(), json!(SCHEMA));
    o.insert("kind".into(), json!(kind));
    if let Value::Object(p) = payload {
        o.extend(p);
    } else {
        o.insert("result".into(), payload);
    }
    Value::Object(o)
}
