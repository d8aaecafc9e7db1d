//! Truncated multivariate power series and expansion utilities.
//!
//! A [`PowerSeries`] is a polynomial with nonnegative exponents kept only up
//! to a total-degree cap. Arithmetic results carry the minimum cap of the
//! operands; operations never silently extend precision.
//!
//! Also here: series exponentials, quotient with pole-order detection via the
//! lowest homogeneous part of the denominator, and Laurent-coefficient
//! extraction of a rational function in one distinguished variable (the
//! workhorse behind residues at infinity and the y -> -1 limits).

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::context::{same_context, VarContext};
use crate::error::{EqError, Result};
use crate::poly::{exps_add, Exps, LaurentPoly};
use crate::ratfun::RatFun;

/// A power series truncated at a total-degree cap.
///
/// Invariants: all exponents are nonnegative, no stored term exceeds the cap,
/// no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    ctx: Arc<VarContext>,
    cap: u32,
    terms: FxHashMap<Exps, BigRational>,
}

fn total_degree(e: &[i32]) -> i64 {
    e.iter().map(|&x| x as i64).sum()
}

impl PowerSeries {
    pub fn zero(ctx: &Arc<VarContext>, cap: u32) -> Self {
        PowerSeries { ctx: ctx.clone(), cap, terms: FxHashMap::default() }
    }

    pub fn one(ctx: &Arc<VarContext>, cap: u32) -> Self {
        Self::constant(ctx, BigRational::one(), cap)
    }

    pub fn constant(ctx: &Arc<VarContext>, c: BigRational, cap: u32) -> Self {
        let mut s = Self::zero(ctx, cap);
        s.add_term(vec![0i32; ctx.len()].into_boxed_slice(), c);
        s
    }

    pub fn var(ctx: &Arc<VarContext>, idx: usize, cap: u32) -> Self {
        let mut e = vec![0i32; ctx.len()];
        e[idx] = 1;
        let mut s = Self::zero(ctx, cap);
        s.add_term(e.into_boxed_slice(), BigRational::one());
        s
    }

    /// Truncate a polynomial to a series. Fails on negative exponents.
    pub fn from_poly(p: &LaurentPoly, cap: u32) -> Result<Self> {
        let mut s = Self::zero(p.context(), cap);
        for (e, c) in p.terms() {
            if e.iter().any(|&x| x < 0) {
                return Err(EqError::Invalid(
                    "negative exponent cannot enter a power series".into(),
                ));
            }
            s.add_term(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0i32; self.ctx.len()])
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() || total_degree(&e) > self.cap as i64 {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// Lowest total degree among stored terms.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e) as u32).min()
    }

    /// The homogeneous component of a given total degree, as a polynomial.
    pub fn homogeneous_part(&self, deg: u32) -> LaurentPoly {
        LaurentPoly::from_terms(
            &self.ctx,
            self.terms
                .iter()
                .filter(|(e, _)| total_degree(e) == deg as i64)
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            &self.ctx,
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    // -----------------------------------------------------------------
    // Arithmetic (cap = min of operands)
    // -----------------------------------------------------------------

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(same_context(&self.ctx, &other.ctx));
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(&self.ctx, cap);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ctx, self.cap);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * s;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(same_context(&self.ctx, &other.ctx));
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(&self.ctx, cap);
        for (ea, ca) in &self.terms {
            if total_degree(ea) > cap as i64 {
                continue;
            }
            for (eb, cb) in &other.terms {
                if total_degree(ea) + total_degree(eb) > cap as i64 {
                    continue;
                }
                out.add_term(exps_add(ea, eb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.ctx, self.cap);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(EqError::Invalid(
                "series exponential needs a zero constant term".into(),
            ));
        }
        let mut out = Self::one(&self.ctx, self.cap);
        let mut pow = Self::one(&self.ctx, self.cap);
        let mut factorial = BigRational::one();
        for k in 1..=self.cap as u64 {
            pow = pow.mul(self);
            if pow.is_zero() {
                break;
            }
            factorial *= BigRational::from_integer(k.into());
            out = out.add(&pow.scale(&(BigRational::one() / &factorial)));
        }
        Ok(out)
    }

    /// Quotient `self / den`. The denominator's lowest homogeneous part must
    /// divide, order by order, what remains of the numerator; otherwise the
    /// quotient has a pole and an error is returned. The result cap drops by
    /// the denominator's valuation.
    pub fn div(&self, den: &Self) -> Result<Self> {
        debug_assert!(same_context(&self.ctx, &den.ctx));
        let Some(v) = den.valuation() else {
            return Err(EqError::DivisionByZero);
        };
        let cap = self.cap.min(den.cap);
        if let Some(nv) = self.valuation() {
            if nv < v {
                return Err(EqError::Pole { order: (v - nv) as usize });
            }
        } else {
            return Ok(Self::zero(&self.ctx, cap.saturating_sub(v)));
        }
        let den_low = den.homogeneous_part(v);
        let out_cap = cap - v;
        let mut quot = Self::zero(&self.ctx, out_cap);
        // rem holds numerator minus quotient*den so far, at full precision
        let mut rem = self.clone();
        rem.cap = cap;
        rem.terms.retain(|e, _| total_degree(e) <= cap as i64);
        for k in 0..=out_cap {
            let target = rem.homogeneous_part(v + k);
            if target.is_zero() {
                continue;
            }
            let qk = target.checked_div_exact(&den_low).ok_or(EqError::Pole {
                order: 1,
            })?;
            let qk_series = Self::from_poly(&qk, cap)?;
            rem = rem.sub(&qk_series.mul(den));
            for (e, c) in qk_series.terms {
                quot.add_term(e, c);
            }
        }
        Ok(quot)
    }
}

// ---------------------------------------------------------------------------
// Rational-function expansion
// ---------------------------------------------------------------------------

/// Expand a rational function into a truncated series by substituting a
/// series for every variable. Bindings must cover each variable that the
/// value actually uses.
pub fn series_expand(
    f: &RatFun,
    bindings: &[(usize, PowerSeries)],
    cap: u32,
) -> Result<PowerSeries> {
    let src = f.context();
    let Some((_, first)) = bindings.first() else {
        return Err(EqError::Invalid("series_expand needs at least one binding".into()));
    };
    let target = first.context().clone();
    let mut bound: Vec<Option<&PowerSeries>> = vec![None; src.len()];
    for (i, s) in bindings {
        if !same_context(s.context(), &target) {
            return Err(EqError::ContextMismatch {
                left: target.to_string(),
                right: s.context().to_string(),
            });
        }
        bound[*i] = Some(s);
    }
    let eval = |p: &LaurentPoly| -> Result<PowerSeries> {
        let mut acc = PowerSeries::zero(&target, cap);
        let mut cache: FxHashMap<(usize, i32), PowerSeries> = FxHashMap::default();
        for (e, c) in p.terms() {
            let mut term = PowerSeries::constant(&target, c.clone(), cap);
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let s = bound[i].ok_or_else(|| {
                    EqError::Invalid(format!(
                        "variable '{}' is used but not bound",
                        src.name(i)
                    ))
                })?;
                let p = if x > 0 {
                    cache
                        .entry((i, x))
                        .or_insert_with(|| s.pow(x as u32))
                        .clone()
                } else {
                    // negative power of a series with a unit constant term
                    let inv = PowerSeries::one(&target, cap).div(s)?;
                    cache
                        .entry((i, x))
                        .or_insert_with(|| inv.pow((-x) as u32))
                        .clone()
                };
                term = term.mul(&p);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    };
    let num = eval(f.num())?;
    let den = eval(f.den())?;
    num.div(&den)
}

// ---------------------------------------------------------------------------
// Laurent coefficients in one variable
// ---------------------------------------------------------------------------

/// The Laurent expansion of `f` at `var = 0` in the single variable `var`:
/// returns the valuation `v` and the coefficients of `var^v .. var^hi` as
/// rational functions in the remaining variables (still over the same
/// context, with `var`-exponent zero).
pub fn laurent_coeffs_in(f: &RatFun, var: usize, hi: i32) -> Result<(i32, Vec<RatFun>)> {
    let ctx = f.context();
    if f.is_zero() {
        return Ok((0, vec![]));
    }
    let num_val = f.num().min_exponent(var);
    let den_val = f.den().min_exponent(var);
    let shift = |p: &LaurentPoly, v: i32| -> LaurentPoly {
        let mut e = vec![0i32; ctx.len()];
        e[var] = -v;
        p.mul_monomial(&BigRational::one(), &e)
    };
    // f = var^(num_val-den_val) * N / D with N, D regular and D(var=0) != 0
    let n0 = shift(f.num(), num_val);
    let d0 = shift(f.den(), den_val);
    let val = num_val - den_val;
    let order = hi - val;
    if order < 0 {
        return Ok((val, vec![]));
    }
    let eval_at_zero = |p: &LaurentPoly| -> LaurentPoly {
        LaurentPoly::from_terms(
            ctx,
            p.terms()
                .filter(|(e, _)| e[var] == 0)
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    };
    let shift_down = |p: &LaurentPoly| -> LaurentPoly {
        let mut e = vec![0i32; ctx.len()];
        e[var] = -1;
        p.mul_monomial(&BigRational::one(), &e)
    };
    let d_const = eval_at_zero(&d0);
    debug_assert!(!d_const.is_zero());
    let d_const_rf = RatFun::from_poly(d_const.clone());
    // series coefficients: c_k = N_k(var=0) / d_const^(k+1), with
    // N_{k+1} = (N_k * d_const - N_k(0) * D) / var
    let mut coeffs = Vec::with_capacity(order as usize + 1);
    let mut n_cur = n0;
    let mut den_pow = RatFun::one(ctx);
    for _ in 0..=order {
        let head = eval_at_zero(&n_cur);
        den_pow = den_pow.mul(&d_const_rf)?;
        coeffs.push(RatFun::from_poly(head.clone()).div(&den_pow)?);
        n_cur = shift_down(&n_cur.mul(&d_const).sub(&head.mul(&d0)));
    }
    Ok((val, coeffs))
}

/// Convenience: the single coefficient of `var^k` in the expansion of `f`
/// at `var = 0`.
pub fn laurent_coeff_at(f: &RatFun, var: usize, k: i32) -> Result<RatFun> {
    let (val, coeffs) = laurent_coeffs_in(f, var, k)?;
    let idx = k - val;
    if idx < 0 || (idx as usize) >= coeffs.len() {
        return Ok(RatFun::zero(f.context()));
    }
    Ok(coeffs[idx as usize].clone())
}

// ---------------------------------------------------------------------------
// Classical coefficient sequences
// ---------------------------------------------------------------------------

/// Coefficients of `t/(1-exp(-t))` through the given order.
pub fn todd_series_coeffs(order: u32) -> Vec<BigRational> {
    let ctx = VarContext::new(vec!["t"]);
    let cap = order + 1;
    let t = PowerSeries::var(&ctx, 0, cap);
    let em = t.neg().exp().expect("zero constant term");
    let den = PowerSeries::one(&ctx, cap).sub(&em); // 1 - exp(-t), valuation 1
    let q = t.div(&den).expect("unit lowest part");
    (0..=order)
        .map(|k| q.coeff(&[k as i32]))
        .collect()
}

/// Coefficients of `exp(c)` through the given order (Chern character of a
/// line bundle).
pub fn ch_series_coeffs(order: u32) -> Vec<BigRational> {
    let ctx = VarContext::new(vec!["c"]);
    let c = PowerSeries::var(&ctx, 0, order);
    let e = c.exp().expect("zero constant term");
    (0..=order).map(|k| e.coeff(&[k as i32])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn geometric_series() {
        let ctx = VarContext::new(vec!["T"]);
        let f = parse_expr("1/(1-T)", &ctx).unwrap();
        let t = PowerSeries::var(&ctx, 0, 3);
        let s = series_expand(&f, &[(0, t)], 3).unwrap();
        for k in 0..=3 {
            assert_eq!(s.coeff(&[k]), q(1, 1));
        }
    }

    #[test]
    fn todd_series_matches_classical_values() {
        let c = todd_series_coeffs(6);
        assert_eq!(
            c,
            vec![
                q(1, 1),
                q(1, 2),
                q(1, 12),
                q(0, 1),
                q(-1, 720),
                q(0, 1),
                q(1, 30240)
            ]
        );
    }

    #[test]
    fn ch_series_is_reciprocal_factorials() {
        let c = ch_series_coeffs(4);
        assert_eq!(c, vec![q(1, 1), q(1, 1), q(1, 2), q(1, 6), q(1, 24)]);
    }

    #[test]
    fn exp_of_zero_is_one() {
        let ctx = VarContext::new(vec!["t"]);
        let z = PowerSeries::zero(&ctx, 5);
        assert_eq!(z.exp().unwrap(), PowerSeries::one(&ctx, 5));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let ctx = VarContext::new(vec!["t"]);
        let s = PowerSeries::one(&ctx, 5);
        assert!(s.exp().is_err());
    }

    #[test]
    fn exp_is_multiplicative() {
        // exp(a+b) = exp(a)*exp(b) on a couple of small series
        let ctx = VarContext::new(vec!["a", "b"]);
        let cap = 6;
        let a = PowerSeries::var(&ctx, 0, cap);
        let b = PowerSeries::var(&ctx, 1, cap).scale(&q(3, 2));
        let a2 = a.mul(&a).scale(&q(-1, 3));
        let s1 = a.add(&b).add(&a2);
        let s2 = b.mul(&b).scale(&q(2, 5)).add(&a);
        let lhs = s1.add(&s2).exp().unwrap();
        let rhs = s1.exp().unwrap().mul(&s2.exp().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_oracle_u_to_zero() {
        // (1-exp(-u*a))/(1-exp(-u*b)) -> a/b as u -> 0. The series quotient
        // has no power-series form (b does not divide a); the univariate
        // Laurent machinery over the mixed context recovers the limit.
        let ctx = VarContext::new(vec!["u", "a", "b"]);
        let cap = 4;
        let u = PowerSeries::var(&ctx, 0, cap);
        let a = PowerSeries::var(&ctx, 1, cap);
        let b = PowerSeries::var(&ctx, 2, cap);
        let one = PowerSeries::one(&ctx, cap);
        let na = one.sub(&u.mul(&a).neg().exp().unwrap());
        let nb = one.sub(&u.mul(&b).neg().exp().unwrap());
        assert!(na.div(&nb).is_err());

        let g = RatFun::new(na.to_poly(), nb.to_poly()).unwrap();
        let c0 = laurent_coeff_at(&g, 0, 0).unwrap();
        let expected = parse_expr("a/b", &ctx).unwrap();
        assert!(c0.eq_ratfun(&expected).unwrap());
    }

    #[test]
    fn laurent_coeffs_of_simple_pole() {
        let ctx = VarContext::new(vec!["w", "t"]);
        // 1/(w*(1-t*w)) = w^-1 + t + t^2 w + ...
        let f = parse_expr("1/(w*(1-t*w))", &ctx).unwrap();
        let (val, coeffs) = laurent_coeffs_in(&f, 0, 1).unwrap();
        assert_eq!(val, -1);
        let t = parse_expr("t", &ctx).unwrap();
        assert!(coeffs[0].eq_ratfun(&RatFun::one(&ctx)).unwrap());
        assert!(coeffs[1].eq_ratfun(&t).unwrap());
        assert!(coeffs[2].eq_ratfun(&t.pow(2).unwrap()).unwrap());
    }
}
