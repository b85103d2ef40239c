//! Evaluation of parsed statements against a session environment.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value as Json};
use vext::lazy::{check_relation, derivative, lift_value_fn, st_numeric, Derivative, StNumeric, Truth3, UnivariateExpr, ValueFn};
use vext::ratfunc::Sign;
use vext::seqcore::Limits;
use vext::vreal::{classify, standard_part, vr_arith, vr_compare, vr_div, ArithOp, EventualTruth, Magnitude, Undefined, VirtualReal};
use vext::{LazySeq, Rational};

use crate::diag::{DiagKind, Diagnostic, Pos};
use crate::syntax::{parse_line, BinOp, Expr, ExprKind, Stmt};

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub horizon: u64,
    pub tol: f64,
    pub limits: Limits,
}

impl Default for Settings {
    fn default() -> Self {
        Self { horizon: vext::lazy::DEFAULT_HORIZON, tol: vext::lazy::DEFAULT_TOL, limits: Limits::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(VirtualReal),
    Lazy(LazySeq),
    Truth(EventualTruth),
    Sampled(Truth3),
    Standard(Rational),
    Numeric(StNumeric),
    Magnitude(Magnitude),
    Signs(Vec<Sign>),
    Derivative(Derivative),
    Undefined(Undefined),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Exact(_) => "exact",
            Value::Lazy(_) => "lazy",
            Value::Truth(_) => "truth",
            Value::Sampled(_) => "sampled",
            Value::Standard(_) => "standard",
            Value::Numeric(_) => "numeric",
            Value::Magnitude(_) => "magnitude",
            Value::Signs(_) => "sign",
            Value::Derivative(_) => "derivative",
            Value::Undefined(_) => "undefined",
        }
    }
}

/// A value rendered with the settings it was computed under.
pub struct Shown<'a> {
    pub value: &'a Value,
    pub settings: &'a Settings,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Value::Exact(v) => write!(f, "{v}"),
            Value::Lazy(s) => write!(f, "{s} (lazy; H={}, tol={:e})", self.settings.horizon, self.settings.tol),
            Value::Truth(t) => write!(f, "{t}"),
            Value::Sampled(t) => write!(f, "{t}"),
            Value::Standard(q) => write!(f, "{q}"),
            Value::Numeric(st) => write!(f, "{st}"),
            Value::Magnitude(m) => write!(f, "{m}"),
            Value::Signs(s) => write!(f, "{}", signs_text(s)),
            Value::Derivative(d) => write!(f, "{d}"),
            Value::Undefined(u) => write!(f, "{u}"),
        }
    }
}

fn signs_text(s: &[Sign]) -> String {
    match s {
        [only] => only.to_string(),
        _ => format!("cyc{{{}}}", s.iter().map(Sign::to_string).collect::<Vec<_>>().join("; ")),
    }
}

/// Result of one statement.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub name: Option<String>,
    pub value: Value,
}

impl Output {
    pub fn text(&self, settings: &Settings) -> String {
        let shown = Shown { value: &self.value, settings };
        match &self.name {
            Some(n) => format!("{n} = {shown}"),
            None => shown.to_string(),
        }
    }

    pub fn to_json(&self, input: &str, settings: &Settings) -> Json {
        let text = Shown { value: &self.value, settings }.to_string();
        let mut obj = json!({ "kind": self.value.kind(), "input": input.trim(), "text": text });
        let extra = match &self.value {
            Value::Exact(v) => json!({
                "value": v.to_string(),
                "period": v.period(),
                "canonical": serde_json::to_value(v.value()).unwrap_or(Json::Null),
            }),
            Value::Lazy(s) => json!({ "expr": s.to_string(), "horizon": settings.horizon, "tol": settings.tol }),
            Value::Truth(t) => match t {
                EventualTruth::Mixed(b) => json!({ "value": "mixed", "branches": b }),
                t => json!({ "value": t.holds() }),
            },
            Value::Sampled(t) => match t {
                Truth3::TrueUpTo { horizon, tol } => json!({ "value": "true", "horizon": horizon, "tol": tol }),
                Truth3::FalseWithWitness { index, lhs, rhs } => {
                    json!({ "value": "false", "index": index, "lhs": lhs, "rhs": rhs })
                }
                Truth3::Inconclusive { horizon, index } => {
                    json!({ "value": "inconclusive", "horizon": horizon, "index": index })
                }
            },
            Value::Standard(q) => json!({ "value": q.to_string() }),
            Value::Numeric(st) => serde_json::to_value(st).unwrap_or(Json::Null),
            Value::Magnitude(m) => json!({ "value": m.to_string() }),
            Value::Signs(s) => json!({ "value": s.iter().map(Sign::to_string).collect::<Vec<_>>() }),
            Value::Derivative(Derivative::Exact(q)) => json!({ "value": q.to_string(), "exact": true }),
            Value::Derivative(Derivative::Numeric(st)) => {
                json!({ "value": st.value, "exact": false, "status": st.status })
            }
            Value::Undefined(u) => json!({ "value": u.to_string() }),
        };
        if let (Json::Object(o), Json::Object(e)) = (&mut obj, extra) {
            o.extend(e);
            if let Some(n) = &self.name {
                o.insert("name".into(), json!(n));
            }
        }
        obj
    }
}

enum Num {
    Exact(VirtualReal),
    Lazy(LazySeq),
}

impl Num {
    fn lazy(self) -> LazySeq {
        match self {
            Num::Exact(v) => v.into(),
            Num::Lazy(s) => s,
        }
    }

    fn into_value(self) -> Value {
        match self {
            Num::Exact(v) => Value::Exact(v),
            Num::Lazy(s) => Value::Lazy(s),
        }
    }
}

#[derive(Default)]
pub struct Session {
    pub settings: Settings,
    env: BTreeMap<String, Value>,
}

impl Session {
    pub fn new(settings: Settings) -> Self {
        Self { settings, env: BTreeMap::new() }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.env.get(name)
    }

    /// Parses and evaluates one line. `None` for blank lines.
    pub fn run_line(&mut self, text: &str, line: usize) -> Result<Option<Output>, Diagnostic> {
        let Some(stmt) = parse_line(text, line)? else {
            return Ok(None);
        };
        Ok(Some(match stmt {
            Stmt::Assign { name, expr, .. } => {
                let value = self.eval(&expr)?;
                self.env.insert(name.clone(), value.clone());
                Output { name: Some(name), value }
            }
            Stmt::Expr(e) => Output { name: None, value: self.eval(&e)? },
        }))
    }

    fn lib<T>(&self, r: vext::Result<T>, pos: Pos) -> Result<T, Diagnostic> {
        r.map_err(|e| Diagnostic::from_error(e, pos))
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, Diagnostic> {
        let limits = &self.settings.limits;
        Ok(match &e.kind {
            ExprKind::Number(q) => Value::Exact(VirtualReal::from_rational(q.clone())),
            ExprKind::Index | ExprKind::Inf => Value::Exact(VirtualReal::infinity()),
            ExprKind::Eps => Value::Exact(VirtualReal::epsilon()),
            ExprKind::Ident(name) => self
                .env
                .get(name)
                .cloned()
                .ok_or_else(|| Diagnostic::new(DiagKind::Name, e.pos, format!("unknown name {name}")))?,
            ExprKind::Cyc(items) => {
                let mut branches = Vec::with_capacity(items.len());
                for item in items {
                    match self.num(item)? {
                        Num::Exact(v) if v.period() == 1 => branches.extend(v.branch_funcs()),
                        _ => {
                            return Err(Diagnostic::new(
                                DiagKind::Type,
                                item.pos,
                                "cyc entries must be exact values of period 1",
                            ))
                        }
                    }
                }
                Value::Exact(self.lib(VirtualReal::cyclic_with(branches, limits), e.pos)?)
            }
            ExprKind::Neg(a) => match self.num(a)? {
                Num::Exact(v) => Value::Exact(self.lib(vr_arith(ArithOp::Neg, &v, None, limits), e.pos)?),
                Num::Lazy(s) => Value::Lazy(s.neg()),
            },
            ExprKind::Pow(a, k) => match self.num(a)? {
                Num::Exact(v) => Value::Exact(self.lib(vr_arith(ArithOp::Pow(*k), &v, None, limits), e.pos)?),
                Num::Lazy(s) => Value::Lazy(s.powi(*k)),
            },
            ExprKind::Binary(op, a, b) => match (self.num(a)?, self.num(b)?) {
                (Num::Exact(x), Num::Exact(y)) => Value::Exact(self.lib(
                    match op {
                        BinOp::Add => vr_arith(ArithOp::Add, &x, Some(&y), limits),
                        BinOp::Sub => vr_arith(ArithOp::Sub, &x, Some(&y), limits),
                        BinOp::Mul => vr_arith(ArithOp::Mul, &x, Some(&y), limits),
                        BinOp::Div => vr_div(&x, &y, limits),
                    },
                    e.pos,
                )?),
                (x, y) => {
                    let (x, y) = (x.lazy(), y.lazy());
                    Value::Lazy(match op {
                        BinOp::Add => x.add(y),
                        BinOp::Sub => x.sub(y),
                        BinOp::Mul => x.mul(y),
                        BinOp::Div => x.div(y),
                    })
                }
            },
            ExprKind::Compare(op, a, b) => match (self.num(a)?, self.num(b)?) {
                (Num::Exact(x), Num::Exact(y)) => Value::Truth(vr_compare(&x, *op, &y)),
                (x, y) => Value::Sampled(check_relation(
                    &x.lazy(),
                    *op,
                    &y.lazy(),
                    self.settings.tol,
                    self.settings.horizon,
                )),
            },
            ExprKind::Call(name, args) => self.call(name, args, e.pos)?,
        })
    }

    fn num(&self, e: &Expr) -> Result<Num, Diagnostic> {
        match self.eval(e)? {
            Value::Exact(v) => Ok(Num::Exact(v)),
            Value::Standard(q) => Ok(Num::Exact(VirtualReal::from_rational(q))),
            Value::Derivative(Derivative::Exact(q)) => Ok(Num::Exact(VirtualReal::from_rational(q))),
            Value::Lazy(s) => Ok(Num::Lazy(s)),
            other => Err(Diagnostic::new(
                DiagKind::Type,
                e.pos,
                format!("expected a number, found a {} value", other.kind()),
            )),
        }
    }

    fn exact(&self, e: &Expr, what: &str) -> Result<VirtualReal, Diagnostic> {
        match self.num(e)? {
            Num::Exact(v) => Ok(v),
            Num::Lazy(_) => Err(Diagnostic::new(
                DiagKind::Type,
                e.pos,
                format!("{what} needs an exact value; this one is lazy{}", if what == "st" { " (use st~)" } else { "" }),
            )),
        }
    }

    fn call(&self, name: &str, args: &[Expr], pos: Pos) -> Result<Value, Diagnostic> {
        let arity = match name {
            "deriv" => 3,
            "st" | "st~" | "sign" | "classify" => 1,
            _ if ValueFn::from_name(name).is_some() => 1,
            _ => return Err(Diagnostic::new(DiagKind::Name, pos, format!("unknown function {name}"))),
        };
        if args.len() != arity {
            return Err(Diagnostic::new(
                DiagKind::Type,
                pos,
                format!("{name} takes {arity} argument{}, found {}", if arity == 1 { "" } else { "s" }, args.len()),
            ));
        }
        let a = &args[0];
        Ok(match name {
            "st" => exact_st(&self.exact(a, "st")?),
            "st~" => match self.num(a)? {
                Num::Exact(v) => exact_st(&v),
                Num::Lazy(s) => Value::Numeric(st_numeric(&s, self.settings.tol, self.settings.horizon)),
            },
            "sign" => Value::Signs(self.exact(a, "sign")?.signs()),
            "classify" => Value::Magnitude(classify(&self.exact(a, "classify")?)),
            "deriv" => self.deriv(args, pos)?,
            _ => {
                let f = ValueFn::from_name(name).expect("checked above");
                let arg = self.num(a)?;
                let lifted = match arg {
                    Num::Exact(v) => lift_value_fn::<f64>(f, v),
                    Num::Lazy(s) => lift_value_fn(f, s),
                };
                Num::Lazy(self.lib(lifted, pos)?).into_value()
            }
        })
    }

    fn deriv(&self, args: &[Expr], pos: Pos) -> Result<Value, Diagnostic> {
        let ExprKind::Ident(var) = &args[1].kind else {
            return Err(Diagnostic::new(DiagKind::Type, args[1].pos, "the second argument of deriv must be a variable name"));
        };
        let f = self.univariate(&args[0], var)?;
        let x0 = self
            .exact(&args[2], "deriv")?
            .as_rational()
            .ok_or_else(|| Diagnostic::new(DiagKind::Type, args[2].pos, "the point of deriv must be a standard rational"))?;
        let d = self.lib(derivative(&f, &x0, self.settings.tol, self.settings.horizon), pos)?;
        Ok(Value::Derivative(d))
    }

    /// Reads `e` as a function of `var`; other names must be bound to
    /// standard rationals.
    fn univariate(&self, e: &Expr, var: &str) -> Result<UnivariateExpr, Diagnostic> {
        use UnivariateExpr as U;
        let b = |x: &Expr| self.univariate(x, var).map(Box::new);
        Ok(match &e.kind {
            ExprKind::Number(q) => U::Const(q.clone()),
            ExprKind::Ident(name) if name == var => U::Var,
            ExprKind::Ident(_) => {
                let v = self.exact(e, "deriv")?;
                U::Const(v.as_rational().ok_or_else(|| {
                    Diagnostic::new(DiagKind::Type, e.pos, "constants inside deriv must be standard rationals")
                })?)
            }
            ExprKind::Neg(a) => U::Neg(b(a)?),
            ExprKind::Pow(a, k) => U::Pow(b(a)?, *k),
            ExprKind::Binary(op, x, y) => {
                let (x, y) = (b(x)?, b(y)?);
                match op {
                    BinOp::Add => U::Add(x, y),
                    BinOp::Sub => U::Sub(x, y),
                    BinOp::Mul => U::Mul(x, y),
                    BinOp::Div => U::Div(x, y),
                }
            }
            ExprKind::Call(name, args) if args.len() == 1 && ValueFn::from_name(name).is_some() => {
                U::call(ValueFn::from_name(name).expect("checked"), self.univariate(&args[0], var)?)
            }
            _ => {
                return Err(Diagnostic::new(
                    DiagKind::Type,
                    e.pos,
                    "deriv takes an expression in one real variable built from + - * / ^, ln, exp, sin and cos",
                ))
            }
        })
    }
}

fn exact_st(v: &VirtualReal) -> Value {
    match standard_part(v) {
        Ok(q) => Value::Standard(q),
        Err(u) => Value::Undefined(u),
    }
}
