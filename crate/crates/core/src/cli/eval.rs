//! Evaluation of check-file values and dispatch of check kinds.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};

use super::syntax::VExpr;
use crate::algebroid::{
    check_im_foliation, check_im_two_form, check_lie_algebroid, check_lie_bialgebra,
    check_lie_bialgebroid, check_linearity, dual_linear_poisson, AlgebroidPatch, LieBialgebraData,
};
use crate::cartan::{
    exterior_derivative, lie_bracket, schouten_jacobiator, Bivector, KForm, VField,
};
use crate::courant::{
    bfield_transform, check_dirac, check_lagrangian, foliation_frame, graph_bivector,
    graph_two_form, Frame, GSec,
};
use crate::error::Error;
use crate::groupoid::{
    abelian_group, check_ca_identities, check_groupoid_axioms, check_multiplicative_bivector,
    check_multiplicative_frame, check_multiplicative_two_form, coboundary, heisenberg3,
    induced_dual_bracket, induced_im_foliation, induced_im_two_form, lie_algebroid_of,
    pair_groupoid, pair_section, tangent_groupoid, CaFamily, GroupoidPatch,
};
use crate::report::{label, Report, Witness};
use crate::symalg::{span_contains, BigRational, Expr, Node, Patch};
use crate::tanlift::{
    check_involution_identities, check_legendre_antisymplectic, check_lift_bracket_identities,
    check_lift_identities, check_tangent_dirac, check_tangent_mu_identity,
    check_tulczyjew_identities, tangent_lift_dirac,
};

#[derive(Clone, Debug)]
pub enum Value {
    Poly(Expr),
    Form(KForm),
    Vector(VField),
    Bivector(Bivector),
    Sec(GSec),
    Frame(Frame),
    Algebroid(AlgebroidPatch),
    Groupoid(GroupoidPatch),
    Patch(Patch),
    Family(CaFamily),
    List(Vec<Value>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Poly(_) => "function",
            Value::Form(_) => "form",
            Value::Vector(_) => "vector field",
            Value::Bivector(_) => "bivector",
            Value::Sec(_) => "generalized section",
            Value::Frame(_) => "frame",
            Value::Algebroid(_) => "algebroid",
            Value::Groupoid(_) => "groupoid",
            Value::Patch(_) => "patch",
            Value::Family(_) => "section family",
            Value::List(_) => "list",
        }
    }

    /// The patch a value lives on, for `use`.
    pub fn patch(&self) -> Option<Patch> {
        Some(match self {
            Value::Poly(e) => e.patch().clone(),
            Value::Form(w) => w.patch().clone(),
            Value::Vector(x) => x.patch().clone(),
            Value::Bivector(p) => p.patch().clone(),
            Value::Sec(s) => s.patch().clone(),
            Value::Frame(l) => l.patch().clone(),
            Value::Algebroid(a) => a.base().clone(),
            Value::Groupoid(g) => g.total().clone(),
            Value::Patch(p) => p.clone(),
            Value::Family(_) | Value::List(_) => return None,
        })
    }
}

/// Why evaluation stopped.
#[derive(Debug)]
pub enum EvalError {
    Unknown(String),
    Type(String),
    Module(Error),
}

impl From<Error> for EvalError {
    fn from(e: Error) -> Self {
        EvalError::Module(e)
    }
}

type EResult<T> = std::result::Result<T, EvalError>;

fn type_err<T>(m: impl Into<String>) -> EResult<T> {
    Err(EvalError::Type(m.into()))
}

/// Names in scope: declared patches, let-bound values and the current patch.
#[derive(Clone, Debug)]
pub struct Env {
    pub patches: BTreeMap<String, Patch>,
    pub values: BTreeMap<String, Value>,
    pub current: Patch,
}

impl Default for Env {
    fn default() -> Self {
        Env {
            patches: BTreeMap::new(),
            values: BTreeMap::new(),
            current: Patch::point(),
        }
    }
}

impl Env {
    pub fn is_bound(&self, name: &str) -> bool {
        self.values.contains_key(name) || self.patches.contains_key(name)
    }

    fn lookup(&self, name: &str) -> EResult<Value> {
        if let Some(v) = self.values.get(name) {
            return Ok(v.clone());
        }
        if let Some(p) = self.patches.get(name) {
            return Ok(Value::Patch(p.clone()));
        }
        let p = &self.current;
        if let Some(i) = p.index_of(name) {
            return Ok(Value::Poly(Expr::var(p, i)));
        }
        if let Some(i) = name.strip_prefix('d').and_then(|c| p.index_of(c)) {
            return Ok(Value::Form(KForm::coord(p, i)));
        }
        if let Some(i) = name.strip_prefix('D').and_then(|c| p.index_of(c)) {
            return Ok(Value::Vector(VField::coord(p, i)));
        }
        Err(EvalError::Unknown(name.to_string()))
    }

    pub fn eval(&self, v: &VExpr) -> EResult<Value> {
        match v {
            VExpr::Lit(n) => self.eval_node(n),
            VExpr::List(items) => Ok(Value::List(
                items.iter().map(|i| self.eval(i)).collect::<EResult<_>>()?,
            )),
            VExpr::Call { name, args } => {
                let args = args.iter().map(|a| self.eval(a)).collect::<EResult<Vec<_>>>()?;
                self.construct(name, args)
            }
        }
    }

    fn eval_node(&self, n: &Node) -> EResult<Value> {
        Ok(match n {
            Node::Num(q) => Value::Poly(Expr::constant(&self.current, q.clone())),
            Node::Sym(s) => self.lookup(s)?,
            Node::Neg(a) => scale(self.eval_node(a)?, &Expr::int(&self.current, -1))?,
            Node::Add(a, b) => add(self.eval_node(a)?, self.eval_node(b)?)?,
            Node::Sub(a, b) => {
                let b = scale(self.eval_node(b)?, &Expr::int(&self.current, -1))?;
                add(self.eval_node(a)?, b)?
            }
            Node::Mul(a, b) => mul(self.eval_node(a)?, self.eval_node(b)?)?,
            Node::Wedge(a, b) => wedge(self.eval_node(a)?, self.eval_node(b)?)?,
            Node::Pow(a, k) => match self.eval_node(a)? {
                Value::Poly(e) => Value::Poly(e.pow(*k)),
                other => return type_err(format!("cannot raise a {} to a power", other.kind())),
            },
        })
    }

    fn construct(&self, name: &str, args: Vec<Value>) -> EResult<Value> {
        let cur = &self.current;
        let arity = |n: usize| -> EResult<()> {
            if args.len() == n {
                Ok(())
            } else {
                type_err(format!("{name} takes {n} argument(s), got {}", args.len()))
            }
        };
        Ok(match name {
            "graph_two_form" => {
                arity(1)?;
                Value::Frame(graph_two_form(&as_form(&args[0], 2)?)?)
            }
            "graph_bivector" => {
                arity(1)?;
                Value::Frame(graph_bivector(&as_bivector(&args[0], cur)?)?)
            }
            "foliation" => {
                let fields = flatten(args)
                    .iter()
                    .map(|v| as_vector(v, cur))
                    .collect::<EResult<Vec<_>>>()?;
                let p = fields.first().map_or(cur.clone(), |f| f.patch().clone());
                Value::Frame(foliation_frame(&p, &fields)?)
            }
            "frame" => {
                let secs = flatten(args)
                    .iter()
                    .map(|v| as_sec(v, cur))
                    .collect::<EResult<Vec<_>>>()?;
                let p = secs.first().map_or(cur.clone(), |s| s.patch().clone());
                Value::Frame(Frame::new(&p, secs)?)
            }
            "bfield" => {
                arity(2)?;
                Value::Frame(bfield_transform(&as_frame(&args[0])?, &as_form(&args[1], 2)?)?)
            }
            "tangent_lift" => {
                arity(1)?;
                Value::Frame(tangent_lift_dirac(&as_frame(&args[0])?)?)
            }
            "tangent_algebroid" => match args.as_slice() {
                [] => Value::Algebroid(AlgebroidPatch::tangent(cur)),
                [p] => Value::Algebroid(AlgebroidPatch::tangent(&as_patch(p)?)),
                _ => return type_err("tangent_algebroid takes at most one patch"),
            },
            "lie_algebra" => {
                let (r, rest) = split_rank(name, &args)?;
                let mut c = vec![vec![vec![BigRational::zero(); r]; r]; r];
                for entry in rest {
                    let (a, b, k, v) = bracket_entry(entry, r)?;
                    let v = as_rational(&v)?;
                    c[k][a][b] = v.clone();
                    c[k][b][a] = -v;
                }
                Value::Algebroid(AlgebroidPatch::lie_algebra(&c)?)
            }
            "algebroid" => {
                // algebroid(r, [anchor fields], [a, b, k, coeff]...)
                let (r, rest) = split_rank(name, &args)?;
                let mut out = AlgebroidPatch::trivial(cur, r);
                let mut rest = rest.iter();
                if let Some(Value::List(anchor)) = rest.clone().next() {
                    if anchor.len() != r {
                        return type_err(format!("algebroid anchor needs {r} vector fields"));
                    }
                    for (a, f) in anchor.iter().enumerate() {
                        out = out.with_anchor_column(a, &as_vector(f, cur)?)?;
                    }
                    rest.next();
                }
                let mut brackets: BTreeMap<(usize, usize), Vec<Expr>> = BTreeMap::new();
                for entry in rest {
                    let (a, b, k, v) = bracket_entry(entry, r)?;
                    let slot = brackets
                        .entry((a, b))
                        .or_insert_with(|| vec![Expr::zero(cur); r]);
                    slot[k] = &slot[k] + &as_poly(&v, cur)?;
                }
                for ((a, b), coeffs) in brackets {
                    out = out.with_bracket(a, b, coeffs)?;
                }
                Value::Algebroid(out)
            }
            "dual_poisson" => {
                arity(1)?;
                Value::Bivector(dual_linear_poisson(&as_algebroid(&args[0])?)?)
            }
            "pair_groupoid" => match args.as_slice() {
                [] => Value::Groupoid(pair_groupoid(cur)?),
                [p] => Value::Groupoid(pair_groupoid(&as_patch(p)?)?),
                _ => return type_err("pair_groupoid takes at most one patch"),
            },
            "abelian_group" => {
                arity(1)?;
                Value::Groupoid(abelian_group(as_index(&args[0])?)?)
            }
            "heisenberg" => {
                arity(0)?;
                Value::Groupoid(heisenberg3()?)
            }
            "tangent_groupoid" => {
                arity(1)?;
                Value::Groupoid(tangent_groupoid(&as_groupoid(&args[0])?)?)
            }
            "lie_algebroid_of" => {
                arity(1)?;
                Value::Algebroid(lie_algebroid_of(&as_groupoid(&args[0])?)?)
            }
            "coboundary" => {
                arity(2)?;
                Value::Form(coboundary(&as_groupoid(&args[0])?, &as_form(&args[1], 2)?)?)
            }
            "induced_dual" => {
                arity(2)?;
                let g = as_groupoid(&args[0])?;
                let p = as_bivector(&args[1], g.total())?;
                Value::Algebroid(induced_dual_bracket(&g, &p)?)
            }
            "pair_section" => {
                arity(3)?;
                let g = as_groupoid(&args[0])?;
                let x = as_vector(&args[1], g.base())?;
                let b = as_form(&args[2], 1)?;
                Value::Sec(pair_section(&g, &x, &b)?)
            }
            "uniform" => {
                arity(2)?;
                Value::Family(CaFamily::uniform(as_sec(&args[0], cur)?, as_sec(&args[1], cur)?))
            }
            "family" => {
                arity(6)?;
                let s = args.iter().map(|v| as_sec(v, cur)).collect::<EResult<Vec<_>>>()?;
                Value::Family(CaFamily {
                    a: [s[0].clone(), s[1].clone(), s[2].clone()],
                    b: [s[3].clone(), s[4].clone(), s[5].clone()],
                })
            }
            other => return Err(EvalError::Unknown(format!("{other}(...)"))),
        })
    }
}

fn flatten(args: Vec<Value>) -> Vec<Value> {
    let mut out = Vec::new();
    for a in args {
        match a {
            Value::List(items) => out.extend(flatten(items)),
            v => out.push(v),
        }
    }
    out
}

fn split_rank<'a>(name: &str, args: &'a [Value]) -> EResult<(usize, &'a [Value])> {
    match args.split_first() {
        Some((r, rest)) => Ok((as_index(r)?, rest)),
        None => type_err(format!("{name} needs a rank")),
    }
}

/// `[a, b, k, coeff]` with 1-based indices: `[e_a, e_b]` has `coeff` on `e_k`.
fn bracket_entry(v: &Value, r: usize) -> EResult<(usize, usize, usize, Value)> {
    match v {
        Value::List(items) if items.len() == 4 => {
            let idx = |v: &Value| -> EResult<usize> {
                let i = as_index(v)?;
                if i == 0 || i > r {
                    return type_err(format!("index {i} out of range 1..{r}"));
                }
                Ok(i - 1)
            };
            Ok((idx(&items[0])?, idx(&items[1])?, idx(&items[2])?, items[3].clone()))
        }
        _ => type_err("bracket entries are [a, b, k, coefficient]"),
    }
}

fn is_zero_poly(v: &Value) -> bool {
    matches!(v, Value::Poly(e) if e.is_zero())
}

pub fn as_poly(v: &Value, p: &Patch) -> EResult<Expr> {
    match v {
        Value::Poly(e) if e.is_constant() => Ok(Expr::constant(p, e.constant_value().unwrap_or_else(BigRational::zero))),
        Value::Poly(e) => Ok(e.clone()),
        other => type_err(format!("expected a function, found a {}", other.kind())),
    }
}

fn as_rational(v: &Value) -> EResult<BigRational> {
    match v {
        Value::Poly(e) => match e.constant_value() {
            Some(q) => Ok(q),
            None => type_err(format!("expected a constant, found `{e}`")),
        },
        other => type_err(format!("expected a constant, found a {}", other.kind())),
    }
}

fn as_index(v: &Value) -> EResult<usize> {
    let q = as_rational(v)?;
    if !q.denom().is_one() {
        return type_err(format!("expected an integer, found {q}"));
    }
    q.numer()
        .to_usize()
        .map_or_else(|| type_err(format!("expected a non-negative integer, found {q}")), Ok)
}

fn as_form(v: &Value, degree: usize) -> EResult<KForm> {
    match v {
        Value::Form(w) if w.degree() == degree => Ok(w.clone()),
        Value::Form(w) => type_err(format!("expected a {degree}-form, found a {}-form", w.degree())),
        Value::Poly(e) if e.is_zero() => Ok(KForm::zero(e.patch(), degree)?),
        Value::Poly(e) if degree == 0 => Ok(KForm::function(e.clone())),
        other => type_err(format!("expected a {degree}-form, found a {}", other.kind())),
    }
}

fn as_vector(v: &Value, p: &Patch) -> EResult<VField> {
    match v {
        Value::Vector(x) => Ok(x.clone()),
        v if is_zero_poly(v) => Ok(VField::zero(p)),
        other => type_err(format!("expected a vector field, found a {}", other.kind())),
    }
}

fn as_bivector(v: &Value, p: &Patch) -> EResult<Bivector> {
    match v {
        Value::Bivector(b) => Ok(b.clone()),
        v if is_zero_poly(v) => Ok(Bivector::zero(p)),
        other => type_err(format!("expected a bivector, found a {}", other.kind())),
    }
}

fn as_sec(v: &Value, p: &Patch) -> EResult<GSec> {
    match v {
        Value::Sec(s) => Ok(s.clone()),
        Value::Vector(x) => Ok(GSec::vector(x.clone())),
        Value::Form(w) if w.degree() == 1 => Ok(GSec::form(w.clone())?),
        v if is_zero_poly(v) => Ok(GSec::zero(p)),
        other => type_err(format!("expected a generalized section, found a {}", other.kind())),
    }
}

fn as_frame(v: &Value) -> EResult<Frame> {
    match v {
        Value::Frame(l) => Ok(l.clone()),
        other => type_err(format!("expected a frame, found a {}", other.kind())),
    }
}

fn as_algebroid(v: &Value) -> EResult<AlgebroidPatch> {
    match v {
        Value::Algebroid(a) => Ok(a.clone()),
        other => type_err(format!("expected an algebroid, found a {}", other.kind())),
    }
}

fn as_groupoid(v: &Value) -> EResult<GroupoidPatch> {
    match v {
        Value::Groupoid(g) => Ok(g.clone()),
        other => type_err(format!("expected a groupoid, found a {}", other.kind())),
    }
}

fn as_patch(v: &Value) -> EResult<Patch> {
    match v {
        Value::Patch(p) => Ok(p.clone()),
        other => type_err(format!("expected a patch, found a {}", other.kind())),
    }
}

fn scale(v: Value, f: &Expr) -> EResult<Value> {
    let f = &f.embed_like(&v);
    Ok(match v {
        Value::Poly(e) => Value::Poly(&e * f),
        Value::Form(w) => Value::Form(w.scale(f)),
        Value::Vector(x) => Value::Vector(x.scale(f)),
        Value::Bivector(b) => Value::Bivector(b.scale(f)),
        Value::Sec(s) => Value::Sec(s.scale(f)),
        other => return type_err(format!("cannot scale a {}", other.kind())),
    })
}

trait EmbedLike {
    fn embed_like(&self, v: &Value) -> Expr;
}

impl EmbedLike for Expr {
    /// Constants move to the patch of `v`, so that `2*w` works for a value
    /// that lives elsewhere than the current patch.
    fn embed_like(&self, v: &Value) -> Expr {
        match (self.constant_value(), v.patch()) {
            (Some(q), Some(p)) => Expr::constant(&p, q),
            _ => self.clone(),
        }
    }
}

fn add(a: Value, b: Value) -> EResult<Value> {
    if is_zero_poly(&a) && !matches!(b, Value::Poly(_)) {
        return Ok(b);
    }
    if is_zero_poly(&b) && !matches!(a, Value::Poly(_)) {
        return Ok(a);
    }
    Ok(match (a, b) {
        (Value::Poly(x), Value::Poly(y)) => {
            let y = y.embed_like(&Value::Poly(x.clone()));
            let x = x.embed_like(&Value::Poly(y.clone()));
            Value::Poly(x.checked_add(&y)?)
        }
        (Value::Form(x), Value::Form(y)) if x.degree() == y.degree() => Value::Form(x.add(&y)?),
        (Value::Vector(x), Value::Vector(y)) => Value::Vector(x.add(&y)?),
        (Value::Bivector(x), Value::Bivector(y)) => Value::Bivector(x.add(&y)?),
        (Value::Vector(x), Value::Form(w)) | (Value::Form(w), Value::Vector(x)) if w.degree() == 1 => {
            Value::Sec(GSec::new(x, w)?)
        }
        (Value::Sec(s), other) | (other, Value::Sec(s)) => {
            let p = s.patch().clone();
            Value::Sec(s.add(&as_sec(&other, &p)?)?)
        }
        (a, b) => return type_err(format!("cannot add a {} and a {}", a.kind(), b.kind())),
    })
}

fn mul(a: Value, b: Value) -> EResult<Value> {
    match (a, b) {
        (Value::Poly(x), Value::Poly(y)) => {
            let y = y.embed_like(&Value::Poly(x.clone()));
            let x = x.embed_like(&Value::Poly(y.clone()));
            Ok(Value::Poly(x.checked_mul(&y)?))
        }
        (Value::Poly(f), v) | (v, Value::Poly(f)) => scale(v, &f),
        (a, b) => type_err(format!("cannot multiply a {} and a {}", a.kind(), b.kind())),
    }
}

fn wedge(a: Value, b: Value) -> EResult<Value> {
    match (a, b) {
        (Value::Form(x), Value::Form(y)) => Ok(Value::Form(x.wedge(&y)?)),
        (Value::Vector(x), Value::Vector(y)) => Ok(Value::Bivector(Bivector::wedge(&x, &y)?)),
        (Value::Poly(f), v) | (v, Value::Poly(f)) if !matches!(v, Value::Poly(_)) => scale(v, &f),
        (a, b) => type_err(format!("cannot wedge a {} and a {}", a.kind(), b.kind())),
    }
}

/// What a check found, before it is compared with the expectation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Violated(String),
    Errored(String),
}

fn from_report(r: &Report) -> Outcome {
    match r.first_failure().and_then(|f| f.witness.as_ref()) {
        None => Outcome::Holds,
        Some(w) => Outcome::Violated(w.to_string()),
    }
}

fn from_witness(w: Option<Witness>) -> Outcome {
    w.map_or(Outcome::Holds, |w| Outcome::Violated(w.to_string()))
}

/// Check kinds understood by `check`.
pub const CHECK_KINDS: &[&str] = &[
    "dirac",
    "lagrangian",
    "closed",
    "poisson",
    "involutive",
    "lie_algebroid",
    "bialgebroid",
    "bialgebra",
    "linear",
    "structure_constant",
    "same_algebroid",
    "groupoid",
    "multiplicative_two_form",
    "multiplicative_bivector",
    "multiplicative_frame",
    "im_two_form",
    "im_foliation",
    "ca_identities",
    "tangent_dirac",
    "tangent_mu",
    "lift_identities",
    "lift_brackets",
    "involution",
    "tulczyjew",
    "legendre",
];

/// Runs one check on evaluated arguments. Module errors raised by the check
/// itself become `Outcome::Errored`; argument mistakes are `EvalError::Type`.
pub fn run_check(kind: &str, args: &[Value], cur: &Patch) -> EResult<Outcome> {
    match check_inner(kind, args, cur) {
        Err(EvalError::Module(e)) => Ok(Outcome::Errored(e.to_string())),
        other => other,
    }
}

fn check_inner(kind: &str, args: &[Value], cur: &Patch) -> EResult<Outcome> {
    let arity = |n: usize| -> EResult<()> {
        if args.len() == n {
            Ok(())
        } else {
            type_err(format!("check {kind} takes {n} argument(s), got {}", args.len()))
        }
    };
    Ok(match kind {
        "dirac" => {
            arity(1)?;
            from_report(&check_dirac(&as_frame(&args[0])?)?.to_report())
        }
        "lagrangian" => {
            arity(1)?;
            from_report(&check_lagrangian(&as_frame(&args[0])?)?.to_report())
        }
        "closed" => {
            arity(1)?;
            let w = match &args[0] {
                Value::Form(w) => w.clone(),
                other => return type_err(format!("expected a form, found a {}", other.kind())),
            };
            let d = exterior_derivative(&w)?;
            let coords = d.patch().coords().to_vec();
            let first = d.terms().next().map(|(idx, c)| (idx.clone(), c.clone()));
            from_witness(first.map(|(idx, c)| Witness::Value {
                at: format!(
                    "dw on {}",
                    idx.iter().map(|&i| format!("d{}", coords[i])).collect::<Vec<_>>().join("^")
                ),
                value: c,
            }))
        }
        "poisson" => {
            arity(1)?;
            let p = as_bivector(&args[0], cur)?;
            from_witness(schouten_jacobiator(&p).first_nonzero().map(|(idx, v)| Witness::Value {
                at: label("[pi,pi]", &idx),
                value: v,
            }))
        }
        "involutive" => {
            let fields = flatten(args.to_vec())
                .iter()
                .map(|v| as_vector(v, cur))
                .collect::<EResult<Vec<_>>>()?;
            let Some(p) = fields.first().map(|f| f.patch().clone()) else {
                return Ok(Outcome::Holds);
            };
            let span: Vec<Vec<Expr>> = fields.iter().map(|f| f.comps().to_vec()).collect();
            let mut w = None;
            'pairs: for i in 0..fields.len() {
                for j in i + 1..fields.len() {
                    let br = lie_bracket(&fields[i], &fields[j])?;
                    if !span_contains(&p, &span, br.comps()) {
                        w = Some(Witness::Text(format!(
                            "{} = {br} leaves the distribution",
                            label("[X,X]", &[i, j])
                        )));
                        break 'pairs;
                    }
                }
            }
            from_witness(w)
        }
        "lie_algebroid" => {
            arity(1)?;
            from_report(&check_lie_algebroid(&as_algebroid(&args[0])?))
        }
        "bialgebroid" => {
            arity(2)?;
            from_report(&check_lie_bialgebroid(&as_algebroid(&args[0])?, &as_algebroid(&args[1])?)?)
        }
        "bialgebra" => {
            if !(2..=3).contains(&args.len()) {
                return type_err("check bialgebra takes g, g* and an optional ideal");
            }
            let data = LieBialgebraData::new(as_algebroid(&args[0])?, as_algebroid(&args[1])?)?;
            let ideal = match args.get(2) {
                None => None,
                Some(Value::List(vs)) => Some(
                    vs.iter()
                        .map(|v| match v {
                            Value::List(xs) => xs.iter().map(as_rational).collect::<EResult<Vec<_>>>(),
                            _ => type_err("an ideal is a list of vectors"),
                        })
                        .collect::<EResult<Vec<_>>>()?,
                ),
                Some(_) => return type_err("an ideal is a list of vectors"),
            };
            from_report(&check_lie_bialgebra(&data, ideal.as_deref())?)
        }
        "linear" => {
            arity(2)?;
            from_report(&check_linearity(&as_frame(&args[0])?, as_index(&args[1])?)?)
        }
        "structure_constant" => {
            // structure_constant A, k, a, b, value: c^k_ab == value
            arity(5)?;
            let a = as_algebroid(&args[0])?;
            let r = a.rank();
            let mut idx = [0usize; 3];
            for (slot, v) in idx.iter_mut().zip(&args[1..4]) {
                let i = as_index(v)?;
                if i == 0 || i > r {
                    return type_err(format!("index {i} out of range 1..{r}"));
                }
                *slot = i - 1;
            }
            let want = as_poly(&args[4], a.base())?;
            let d = a.c(idx[0], idx[1], idx[2]) - &want;
            from_witness((!d.is_zero()).then(|| Witness::Value {
                at: format!("{} - ({want})", label("c", &idx)),
                value: d,
            }))
        }
        "same_algebroid" => {
            arity(2)?;
            from_witness(algebroid_difference(&as_algebroid(&args[0])?, &as_algebroid(&args[1])?))
        }
        "groupoid" => {
            arity(1)?;
            from_report(&check_groupoid_axioms(&as_groupoid(&args[0])?)?)
        }
        "multiplicative_two_form" => {
            arity(2)?;
            let g = as_groupoid(&args[0])?;
            from_report(&check_multiplicative_two_form(&g, &as_form(&args[1], 2)?)?)
        }
        "multiplicative_bivector" => {
            arity(2)?;
            let g = as_groupoid(&args[0])?;
            let p = as_bivector(&args[1], g.total())?;
            from_report(&check_multiplicative_bivector(&g, &p)?)
        }
        "multiplicative_frame" => {
            arity(2)?;
            from_report(&check_multiplicative_frame(&as_groupoid(&args[0])?, &as_frame(&args[1])?)?)
        }
        "im_two_form" => {
            // the IM 2-form induced by a multiplicative 2-form on G
            arity(2)?;
            let g = as_groupoid(&args[0])?;
            let (a, s) = induced_im_two_form(&g, &as_form(&args[1], 2)?)?;
            from_report(&check_im_two_form(&a, &s)?)
        }
        "im_foliation" => {
            let g = match args.first() {
                Some(v) => as_groupoid(v)?,
                None => return type_err("check im_foliation takes a groupoid and vector fields"),
            };
            let fields = flatten(args[1..].to_vec())
                .iter()
                .map(|v| as_vector(v, g.total()))
                .collect::<EResult<Vec<_>>>()?;
            let (a, f) = induced_im_foliation(&g, &fields)?;
            from_report(&check_im_foliation(&a, &f)?)
        }
        "ca_identities" => {
            let g = match args.first() {
                Some(v) => as_groupoid(v)?,
                None => return type_err("check ca_identities takes a groupoid and families"),
            };
            let fams = flatten(args[1..].to_vec())
                .into_iter()
                .map(|v| match v {
                    Value::Family(f) => Ok(f),
                    other => type_err(format!("expected a section family, found a {}", other.kind())),
                })
                .collect::<EResult<Vec<_>>>()?;
            from_report(&check_ca_identities(&g, &fams)?)
        }
        "tangent_dirac" => {
            arity(1)?;
            from_report(&check_tangent_dirac(&as_frame(&args[0])?)?)
        }
        "tangent_mu" => {
            arity(1)?;
            from_report(&check_tangent_mu_identity(&as_frame(&args[0])?)?)
        }
        "lift_identities" => {
            arity(3)?;
            let x = as_vector(&args[0], cur)?;
            let p = x.patch().clone();
            let a = as_form(&args[1], 1)?;
            let f = as_poly(&args[2], &p)?;
            from_report(&check_lift_identities(&x, &a, &f)?)
        }
        "lift_brackets" => {
            arity(2)?;
            from_report(&check_lift_bracket_identities(&as_sec(&args[0], cur)?, &as_sec(&args[1], cur)?)?)
        }
        "involution" => {
            arity(1)?;
            from_report(&check_involution_identities(&as_vector(&args[0], cur)?)?)
        }
        "tulczyjew" => {
            arity(1)?;
            from_report(&check_tulczyjew_identities(&as_form(&args[0], 1)?)?)
        }
        "legendre" => {
            // legendre r  or  legendre M, r
            let (p, r) = match args {
                [r] => (cur.clone(), as_index(r)?),
                [p, r] => (as_patch(p)?, as_index(r)?),
                _ => return type_err("check legendre takes an optional patch and a rank"),
            };
            from_report(&check_legendre_antisymplectic(&p, r)?)
        }
        other => return Err(EvalError::Unknown(format!("check kind `{other}`"))),
    })
}

fn algebroid_difference(a: &AlgebroidPatch, b: &AlgebroidPatch) -> Option<Witness> {
    if a.base() != b.base() || a.rank() != b.rank() {
        return Some(Witness::Text(format!(
            "shapes differ: rank {} over {} vs rank {} over {}",
            a.rank(),
            a.base(),
            b.rank(),
            b.base()
        )));
    }
    let r = a.rank();
    for i in 0..a.base().dim() {
        for k in 0..r {
            let d = a.anchor().get(i, k) - b.anchor().get(i, k);
            if !d.is_zero() {
                return Some(Witness::Value {
                    at: format!("{} difference", label("rho", &[i, k])),
                    value: d,
                });
            }
        }
    }
    for k in 0..r {
        for x in 0..r {
            for y in x + 1..r {
                let d = a.c(k, x, y) - b.c(k, x, y);
                if !d.is_zero() {
                    return Some(Witness::Value {
                        at: format!("{} difference", label("c", &[k, x, y])),
                        value: d,
                    });
                }
            }
        }
    }
    None
}
