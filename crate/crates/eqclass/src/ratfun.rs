//! Exact rational functions: quotients of sparse Laurent polynomials.
//!
//! Invariants:
//! - the denominator is never zero
//! - equality is decided by cross-multiplication, never by GCD
//! - the stored representative is lightly normalized: common monomial factors
//!   between numerator and denominator are cancelled, the denominator is
//!   scaled to coprime integer coefficients, and its display-leading term has
//!   a positive coefficient (so `1/(1-T)` prints that way round)

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::context::VarContext;
use crate::error::{EqError, Result};
use crate::poly::{format_rational, LaurentPoly};

/// A rational function `num/den` over a shared variable context.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Output styles for [`format_expr`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Plain,
    Factored,
    Json,
}

impl RatFun {
    // -----------------------------------------------------------------
    // Construction
    // -----------------------------------------------------------------

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<RatFun> {
        num.check_context(&den)?;
        if den.is_zero() {
            return Err(EqError::DivisionByZero);
        }
        let mut f = RatFun { num, den };
        f.normalize();
        Ok(f)
    }

    pub fn from_poly(num: LaurentPoly) -> RatFun {
        let den = LaurentPoly::one(num.context());
        RatFun { num, den }
    }

    pub fn zero(ctx: &Arc<VarContext>) -> RatFun {
        Self::from_poly(LaurentPoly::zero(ctx))
    }

    pub fn one(ctx: &Arc<VarContext>) -> RatFun {
        Self::from_poly(LaurentPoly::one(ctx))
    }

    pub fn from_int(ctx: &Arc<VarContext>, n: i64) -> RatFun {
        Self::from_poly(LaurentPoly::from_int(ctx, n))
    }

    pub fn var(ctx: &Arc<VarContext>, idx: usize) -> RatFun {
        Self::from_poly(LaurentPoly::var(ctx, idx))
    }

    pub fn constant(ctx: &Arc<VarContext>, c: BigRational) -> RatFun {
        Self::from_poly(LaurentPoly::constant(ctx, c))
    }

    // -----------------------------------------------------------------
    // Accessors
    // -----------------------------------------------------------------

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.num.context()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is the constant 1 after normalization.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    // -----------------------------------------------------------------
    // Normalization (representation only; equality is cross-multiplied)
    // -----------------------------------------------------------------

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly::one(self.num.context());
            return;
        }
        // cancel common monomial factors and clear negative exponents in den
        let n = self.context().len();
        let mut shift = vec![0i32; n];
        let mut nontrivial = false;
        for v in 0..n {
            let m = self.num.min_exponent(v).min(self.den.min_exponent(v));
            if m != 0 {
                shift[v] = -m;
                nontrivial = true;
            }
        }
        if nontrivial {
            let one = BigRational::one();
            self.num = self.num.mul_monomial(&one, &shift);
            self.den = self.den.mul_monomial(&one, &shift);
        }
        // scale so den is integer-primitive with positive display-leading coeff
        let mut c = self.den.content();
        if self.den.leading_sign() < 0 {
            c = -c;
        }
        if !c.is_one() {
            let inv = BigRational::one() / c;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        // a denominator that is a single monomial folds into the numerator
        if self.den.num_terms() == 1 && !self.den.is_one() {
            let (e, c) = self.den.terms().next().unwrap();
            let inv_e: Vec<i32> = e.iter().map(|&x| -x).collect();
            let inv_c = BigRational::one() / c.clone();
            self.num = self.num.mul_monomial(&inv_c, &inv_e);
            self.den = LaurentPoly::one(self.num.context());
        }
    }

    /// Cancel every factor of `f` (with multiplicity) that exactly divides
    /// both parts; used to keep representatives small when the factorization
    /// of the denominator is known. Correctness never depends on this.
    pub fn cancel_factor(&mut self, f: &LaurentPoly) {
        loop {
            let (Some(n2), Some(d2)) = (
                self.num.checked_div_exact(f),
                self.den.checked_div_exact(f),
            ) else {
                break;
            };
            self.num = n2;
            self.den = d2;
        }
        self.normalize();
    }

    // -----------------------------------------------------------------
    // Field arithmetic
    // -----------------------------------------------------------------

    pub fn add(&self, other: &RatFun) -> Result<RatFun> {
        self.num.check_context(&other.num)?;
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFun::new(num, den)
    }

    pub fn sub(&self, other: &RatFun) -> Result<RatFun> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFun) -> Result<RatFun> {
        self.num.check_context(&other.num)?;
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        self.num.check_context(&other.num)?;
        if other.is_zero() {
            return Err(EqError::DivisionByZero);
        }
        RatFun::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(EqError::DivisionByZero);
        }
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i32) -> Result<RatFun> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        RatFun::new(self.num.pow(n as u32), self.den.pow(n as u32))
    }

    /// Equality by cross-multiplication: `a.num*b.den == b.num*a.den`.
    pub fn eq_ratfun(&self, other: &RatFun) -> Result<bool> {
        self.num.check_context(&other.num)?;
        Ok(self.num.mul(&other.den) == other.num.mul(&self.den))
    }

    pub fn scale(&self, c: &BigRational) -> RatFun {
        RatFun::new(self.num.scale(c), self.den.clone()).expect("nonzero den")
    }

    // -----------------------------------------------------------------
    // Substitution
    // -----------------------------------------------------------------

    /// Simultaneous substitution of rational functions for variables;
    /// unbound variables pass through. Fails if the denominator becomes
    /// identically zero.
    pub fn substitute(&self, bindings: &[(usize, RatFun)]) -> Result<RatFun> {
        for (_, v) in bindings {
            self.num.check_context(v.num())?;
        }
        let num = eval_poly_at(&self.num, bindings)?;
        let den = eval_poly_at(&self.den, bindings)?;
        if den.is_zero() {
            return Err(EqError::DenominatorVanishes);
        }
        num.div(&den)
    }

    /// Project onto a smaller context: every variable used by this value
    /// must appear (by name) in the target context.
    pub fn project(&self, target: &Arc<VarContext>) -> Result<RatFun> {
        let src = self.context();
        let mut map: Vec<Option<usize>> = Vec::with_capacity(src.len());
        let mut used_missing = None;
        for i in 0..src.len() {
            match target.index_of(src.name(i)) {
                Some(j) => map.push(Some(j)),
                None => {
                    map.push(None);
                    let uses = self.num.terms().any(|(e, _)| e[i] != 0)
                        || self.den.terms().any(|(e, _)| e[i] != 0);
                    if uses {
                        used_missing = Some(src.name(i).to_string());
                    }
                }
            }
        }
        if let Some(name) = used_missing {
            return Err(EqError::Invalid(format!(
                "variable '{}' is used but missing from the target context",
                name
            )));
        }
        RatFun::new(self.num.remap(target, &map), self.den.remap(target, &map))
    }
}

/// Evaluate a Laurent polynomial at rational-function arguments; unbound
/// variables stay as themselves.
fn eval_poly_at(p: &LaurentPoly, bindings: &[(usize, RatFun)]) -> Result<RatFun> {
    let ctx = p.context();
    let mut bound: Vec<Option<&RatFun>> = vec![None; ctx.len()];
    for (i, v) in bindings {
        bound[*i] = Some(v);
    }
    let mut acc = RatFun::zero(ctx);
    let mut pow_cache: rustc_hash::FxHashMap<(usize, i32), RatFun> = Default::default();
    for (e, c) in p.terms() {
        // split the monomial into pass-through part and bound part
        let mut passthrough = vec![0i32; ctx.len()];
        let mut term = RatFun::constant(ctx, c.clone());
        for (i, &x) in e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            match bound[i] {
                None => passthrough[i] = x,
                Some(v) => {
                    let key = (i, x);
                    let p = match pow_cache.get(&key) {
                        Some(p) => p.clone(),
                        None => {
                            let p = v.pow(x)?;
                            pow_cache.insert(key, p.clone());
                            p
                        }
                    };
                    term = term.mul(&p)?;
                }
            }
        }
        let mono = RatFun::from_poly(LaurentPoly::monomial(
            ctx,
            BigRational::one(),
            &passthrough,
        ));
        acc = acc.add(&term.mul(&mono)?)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Display and JSON
// ---------------------------------------------------------------------------

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.num_terms() > 1 {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Deterministic text form of a rational function in the requested style.
/// `Factored` applies to values whose denominator factorization is tracked
/// elsewhere (normal forms); for a bare `RatFun` it coincides with `Plain`.
pub fn format_expr(f: &RatFun, style: Style) -> String {
    match style {
        Style::Plain | Style::Factored => f.to_string(),
        Style::Json => to_json(f).to_string(),
    }
}

/// JSON encoding: `{"vars":[...], "num":[[e1,...,ek,"p/q"],...], "den":[...]}`
/// with exponent arrays parallel to `vars`.
pub fn to_json(f: &RatFun) -> serde_json::Value {
    use serde_json::{json, Value};
    let poly_json = |p: &LaurentPoly| -> Value {
        let mut rows = Vec::new();
        for (e, c) in p.sorted_terms() {
            let mut row: Vec<Value> =
                e.iter().map(|&x| Value::from(x)).collect();
            row.push(Value::from(format_rational(c)));
            rows.push(Value::from(row));
        }
        Value::from(rows)
    };
    json!({
        "vars": f.context().names(),
        "num": poly_json(&f.num),
        "den": poly_json(&f.den),
    })
}

/// Inverse of [`to_json`].
pub fn from_json(v: &serde_json::Value) -> Result<RatFun> {
    let obj = v.as_object().ok_or_else(|| EqError::Json("expected object".into()))?;
    let vars = obj
        .get("vars")
        .and_then(|v| v.as_array())
        .ok_or_else(|| EqError::Json("missing vars".into()))?;
    let names: Vec<String> = vars
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| EqError::Json("vars must be strings".into()))
        })
        .collect::<Result<_>>()?;
    let ctx = VarContext::new(names);
    let read_poly = |key: &str| -> Result<LaurentPoly> {
        let rows = obj
            .get(key)
            .and_then(|v| v.as_array())
            .ok_or_else(|| EqError::Json(format!("missing {}", key)))?;
        let mut p = LaurentPoly::zero(&ctx);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| EqError::Json("term must be an array".into()))?;
            if row.len() != ctx.len() + 1 {
                return Err(EqError::Json("term arity mismatch".into()));
            }
            let mut exps = vec![0i32; ctx.len()];
            for (i, e) in row[..ctx.len()].iter().enumerate() {
                exps[i] = e
                    .as_i64()
                    .and_then(|x| i32::try_from(x).ok())
                    .ok_or_else(|| EqError::Json("bad exponent".into()))?;
            }
            let cs = row[ctx.len()]
                .as_str()
                .ok_or_else(|| EqError::Json("coefficient must be a string".into()))?;
            let c = parse_rational_str(cs)
                .ok_or_else(|| EqError::Json(format!("bad rational '{}'", cs)))?;
            p.add_term(exps.into_boxed_slice(), c);
        }
        Ok(p)
    };
    RatFun::new(read_poly("num")?, read_poly("den")?)
}

fn parse_rational_str(s: &str) -> Option<BigRational> {
    use num_bigint::BigInt;
    use std::str::FromStr;
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        Some((n, d)) => {
            let n = BigInt::from_str(n).ok()?;
            let d = BigInt::from_str(d).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
    }
}
