//! Fixed-point localization.
//!
//! Local contributions are rational functions over the multiplicative
//! context (T-variables and y) of the form `prod (1+y*exp(-w))/(1-exp(-w))`
//! over tangent weights `w`; integration sums `a|_p / e(p)` over fixed
//! points in the additive context. Sums are accumulated over a shared pool
//! of canonical denominator factors so that the final cancellation down to
//! a polynomial (or to the printed normal form) is an exact division, never
//! a GCD.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::context::{same_context, VarContext};
use crate::error::{EqError, Result};
use crate::poly::LaurentPoly;
use crate::ratfun::RatFun;
use crate::series::{laurent_coeff_at, PowerSeries};
use crate::space::SpaceModel;
use crate::weight::{ClassVars, Weight};

// ---------------------------------------------------------------------------
// Localized classes
// ---------------------------------------------------------------------------

/// The value `td_y(X -> M)|_p / e(p)` at a fixed point, over the
/// multiplicative context. When the reduced denominator is a product of
/// `(1 - exp(-w))` factors the weights are kept for factored display.
#[derive(Clone, Debug)]
pub struct LocalizedClass {
    pub point_label: String,
    pub value: RatFun,
    pub den_weights: Option<Vec<Weight>>,
}

/// The normal form `W / prod (1 - exp(-w_i))` with polynomial numerator.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub w: LaurentPoly,
    pub weights: Vec<Weight>,
}

impl NormalForm {
    /// Reassemble the rational function.
    pub fn value(&self, vars: &ClassVars) -> Result<RatFun> {
        let mut den = LaurentPoly::one(vars.mult_ctx());
        for w in &self.weights {
            den = den.mul(&one_minus_monomial_poly(vars, w)?);
        }
        RatFun::new(self.w.clone(), den)
    }

    /// `(W)/((1-M1)*(1-M2)*...)` with the denominator kept in factors.
    pub fn format_factored(&self, vars: &ClassVars) -> String {
        let num = if self.w.num_terms() > 1 {
            format!("({})", self.w)
        } else {
            self.w.to_string()
        };
        if self.weights.is_empty() {
            return num;
        }
        let factors: Vec<String> = self
            .weights
            .iter()
            .map(|w| {
                let m = vars.monomial(w).expect("weight rank");
                format!("(1-{})", m)
            })
            .collect();
        if factors.len() == 1 {
            format!("{}/{}", num, factors[0])
        } else {
            format!("{}/({})", num, factors.join("*"))
        }
    }
}

fn one_minus_monomial_poly(vars: &ClassVars, w: &Weight) -> Result<LaurentPoly> {
    let m = vars.monomial(w)?;
    Ok(LaurentPoly::one(vars.mult_ctx()).sub(&m))
}

// ---------------------------------------------------------------------------
// Euler class and smooth local contribution
// ---------------------------------------------------------------------------

/// Product of the tangent characters as linear forms (additive convention).
pub fn euler_class(vars: &ClassVars, weights: &[Weight]) -> Result<RatFun> {
    let mut p = LaurentPoly::one(vars.add_ctx());
    for w in weights {
        if w.is_zero() {
            return Err(EqError::ZeroWeight);
        }
        p = p.mul(&vars.linear_form(w)?);
    }
    Ok(RatFun::from_poly(p))
}

/// `prod (1 + y exp(-w)) / (1 - exp(-w))` over the given tangent weights;
/// `with_y = false` specializes y = 0, giving `prod 1/(1-exp(-w))`.
pub fn smooth_local_class(
    label: &str,
    vars: &ClassVars,
    weights: &[Weight],
    with_y: bool,
) -> Result<LocalizedClass> {
    let mut sum = FracSum::new(vars.mult_ctx());
    sum.add_smooth_term(vars, &LaurentPoly::one(vars.mult_ctx()), weights, with_y)?;
    let value = sum.into_ratfun()?;
    Ok(LocalizedClass {
        point_label: label.to_string(),
        value,
        den_weights: Some(weights.to_vec()),
    })
}

// ---------------------------------------------------------------------------
// Fraction sums over a shared factor pool
// ---------------------------------------------------------------------------

/// Exact accumulator for sums of fractions whose denominators are products
/// of recurring irreducible-in-practice factors. Factors are interned in
/// canonical form (primitive, positive display-leading coefficient, cleared
/// of monomials); the running value is `num / prod factors[i]^mult[i]`.
pub struct FracSum {
    ctx: Arc<VarContext>,
    pool: Vec<LaurentPoly>,
    mult: Vec<u32>,
    num: LaurentPoly,
}

/// A reduced fraction with its denominator factorization.
pub struct ReducedFrac {
    pub num: LaurentPoly,
    pub factors: Vec<(LaurentPoly, u32)>,
}

impl ReducedFrac {
    pub fn to_ratfun(&self) -> Result<RatFun> {
        let mut den = LaurentPoly::one(self.num.context());
        for (f, m) in &self.factors {
            den = den.mul(&f.pow(*m));
        }
        RatFun::new(self.num.clone(), den)
    }

    /// `(num)/((f1)*(f2)^k*...)` with the denominator kept in factors, in
    /// pool order.
    pub fn format_factored(&self) -> String {
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        if self.factors.is_empty() {
            return num;
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(f, m)| {
                if *m == 1 {
                    format!("({})", f)
                } else {
                    format!("({})^{}", f, m)
                }
            })
            .collect();
        if parts.len() == 1 && self.factors[0].1 == 1 {
            format!("{}/{}", num, parts[0])
        } else {
            format!("{}/({})", num, parts.join("*"))
        }
    }
}

impl FracSum {
    pub fn new(ctx: &Arc<VarContext>) -> FracSum {
        FracSum {
            ctx: ctx.clone(),
            pool: Vec::new(),
            mult: Vec::new(),
            num: LaurentPoly::zero(ctx),
        }
    }

    /// Intern a nonzero factor: `f = unit * monomial * F` with `F`
    /// canonical. Returns the pool index and the Laurent-monomial unit to
    /// divide out of the accompanying numerator.
    fn intern(&mut self, f: &LaurentPoly) -> (usize, BigRational, Vec<i32>) {
        assert!(!f.is_zero(), "zero denominator factor");
        let n = self.ctx.len();
        let shift: Vec<i32> = (0..n).map(|v| f.min_exponent(v)).collect();
        let mut g = if shift.iter().any(|&x| x != 0) {
            let neg: Vec<i32> = shift.iter().map(|&x| -x).collect();
            f.mul_monomial(&BigRational::one(), &neg)
        } else {
            f.clone()
        };
        let mut unit = g.content();
        if g.leading_sign() < 0 {
            unit = -unit;
        }
        if !unit.is_one() {
            g = g.scale(&(BigRational::one() / &unit));
        }
        for (i, h) in self.pool.iter().enumerate() {
            if h == &g {
                return (i, unit, shift);
            }
        }
        self.pool.push(g);
        self.mult.push(0);
        (self.pool.len() - 1, unit, shift)
    }

    /// Add `num / prod raw_factors` to the running sum.
    pub fn add_term(&mut self, num: LaurentPoly, raw_factors: &[LaurentPoly]) {
        let mut term_num = num;
        let mut term_mult = vec![0u32; self.pool.len()];
        for f in raw_factors {
            let (i, unit, shift) = self.intern(f);
            if i >= term_mult.len() {
                term_mult.resize(self.pool.len(), 0);
            }
            term_mult[i] += 1;
            // dividing by f = unit * V^shift * F means multiplying the
            // numerator by unit^-1 * V^-shift and the denominator by F
            let inv_shift: Vec<i32> = shift.iter().map(|&x| -x).collect();
            term_num = term_num.mul_monomial(&(BigRational::one() / unit), &inv_shift);
        }
        term_mult.resize(self.pool.len(), 0);
        self.mult.resize(self.pool.len(), 0);
        // align both sides on the factor-wise max multiplicity
        let target: Vec<u32> = self
            .mult
            .iter()
            .zip(&term_mult)
            .map(|(a, b)| *a.max(b))
            .collect();
        for (i, (&have, &want)) in self.mult.iter().zip(&target).enumerate() {
            if want > have {
                self.num = self.num.mul(&self.pool[i].pow(want - have));
            }
        }
        for (i, (&have, &want)) in term_mult.iter().zip(&target).enumerate() {
            if want > have {
                term_num = term_num.mul(&self.pool[i].pow(want - have));
            }
        }
        self.num = self.num.add(&term_num);
        self.mult = target;
    }

    /// Add a smooth-point contribution `extra * prod (1+y m)/(1-m)`.
    pub fn add_smooth_term(
        &mut self,
        vars: &ClassVars,
        extra: &LaurentPoly,
        weights: &[Weight],
        with_y: bool,
    ) -> Result<()> {
        let ctx = vars.mult_ctx();
        debug_assert!(same_context(ctx, &self.ctx));
        let mut num = extra.clone();
        let mut dens = Vec::with_capacity(weights.len());
        let one = LaurentPoly::one(ctx);
        for w in weights {
            if w.is_zero() {
                return Err(EqError::ZeroWeight);
            }
            let m = vars.monomial(w)?;
            if with_y {
                let y = LaurentPoly::var(ctx, vars.y_index());
                num = num.mul(&one.add(&y.mul(&m)));
            }
            dens.push(one.sub(&m));
        }
        self.add_term(num, &dens);
        Ok(())
    }

    /// Add a general rational function (sign-scaled), interning its whole
    /// denominator as one factor.
    pub fn add_ratfun(&mut self, f: &RatFun, negate: bool) {
        let num = if negate { f.num().neg() } else { f.num().clone() };
        if f.is_polynomial() {
            self.add_term(num, &[]);
        } else {
            self.add_term(num, std::slice::from_ref(f.den()));
        }
    }

    /// Cancel every pooled factor that divides the numerator and return the
    /// reduced fraction.
    pub fn reduce(mut self) -> ReducedFrac {
        let mut factors = Vec::new();
        for (i, f) in self.pool.iter().enumerate() {
            let mut m = self.mult[i];
            while m > 0 {
                match self.num.checked_div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        m -= 1;
                    }
                    None => break,
                }
            }
            if m > 0 {
                factors.push((f.clone(), m));
            }
        }
        ReducedFrac { num: self.num, factors }
    }

    pub fn into_ratfun(self) -> Result<RatFun> {
        self.reduce().to_ratfun()
    }
}

// ---------------------------------------------------------------------------
// Integration and chi_y by localization
// ---------------------------------------------------------------------------

/// Berline-Vergne/Atiyah-Bott integration: `sum_p a|_p / e(p)` in the
/// additive convention. When the restrictions come from a genuine global
/// class the sum collapses to a polynomial; a non-polynomial outcome is an
/// error carrying the residual.
pub fn integrate(
    vars: &ClassVars,
    space: &SpaceModel,
    restrictions: &HashMap<String, RatFun>,
) -> Result<RatFun> {
    let mut sum = FracSum::new(vars.add_ctx());
    for p in &space.points {
        let r = restrictions.get(&p.label).ok_or_else(|| {
            EqError::Invalid(format!("no restriction supplied at '{}'", p.label))
        })?;
        let mut raw: Vec<LaurentPoly> = Vec::with_capacity(p.ambient.len() + 1);
        for w in &p.ambient {
            if w.is_zero() {
                return Err(EqError::ZeroWeight);
            }
            raw.push(vars.linear_form(w)?);
        }
        if !r.is_polynomial() {
            raw.push(r.den().clone());
        }
        sum.add_term(r.num().clone(), &raw);
    }
    let value = sum.into_ratfun()?;
    if !value.is_polynomial() {
        return Err(EqError::NotPolynomial { residual: value.to_string() });
    }
    Ok(value)
}

/// `chi_y` genus by localization over smooth fixed-point data; the result
/// must collapse to a polynomial in y alone.
pub fn chi_y_genus(vars: &ClassVars, space: &SpaceModel, with_y: bool) -> Result<LaurentPoly> {
    let mut sum = FracSum::new(vars.mult_ctx());
    let one = LaurentPoly::one(vars.mult_ctx());
    for p in &space.points {
        let ws = p.tangent.as_ref().unwrap_or(&p.ambient);
        sum.add_smooth_term(vars, &one, ws, with_y)?;
    }
    let value = sum.into_ratfun()?;
    if !value.is_polynomial() || !value.num().uses_only(&[vars.y_index()]) {
        return Err(EqError::NotPolynomial { residual: value.to_string() });
    }
    Ok(value.num().clone())
}

/// Extraction at the unique singular fixed point: global chi_y minus the
/// smooth contributions.
pub fn extract_singular(
    vars: &ClassVars,
    singular_label: &str,
    global_chi_y: &LaurentPoly,
    smooth: &[LocalizedClass],
) -> Result<LocalizedClass> {
    let mut sum = FracSum::new(vars.mult_ctx());
    sum.add_term(global_chi_y.clone(), &[]);
    for c in smooth {
        match &c.den_weights {
            Some(ws) => {
                let nf = normal_form(vars, &c.value, ws)?;
                let mut raw = Vec::with_capacity(ws.len());
                for w in ws {
                    raw.push(one_minus_monomial_poly(vars, w)?);
                }
                sum.add_term(nf.w.neg(), &raw);
            }
            None => sum.add_ratfun(&c.value, true),
        }
    }
    let value = sum.into_ratfun()?;
    Ok(LocalizedClass {
        point_label: singular_label.to_string(),
        value,
        den_weights: None,
    })
}

/// Clear the given denominator weights from a localized value: the result
/// `W = c * prod (1 - exp(-w))` must be a Laurent polynomial.
pub fn normal_form(vars: &ClassVars, value: &RatFun, weights: &[Weight]) -> Result<NormalForm> {
    let mut prod = value.num().clone();
    for w in weights {
        prod = prod.mul(&one_minus_monomial_poly(vars, w)?);
    }
    let w = prod.checked_div_exact(value.den()).ok_or_else(|| {
        EqError::NotPolynomial { residual: format!("numerator over {:?} is not polynomial", weights) }
    })?;
    Ok(NormalForm { w, weights: weights.to_vec() })
}

// ---------------------------------------------------------------------------
// Residue at infinity
// ---------------------------------------------------------------------------

/// `Res_{z=inf} f := -(coefficient of z^-1 at infinity)`, computed by the
/// substitution `z = 1/w` as `Res_{w=0} [-w^-2 f(1/w)]`.
pub fn residue_at_infinity(f: &RatFun, z: usize) -> Result<RatFun> {
    let ctx = f.context();
    let negate = |p: &LaurentPoly| -> LaurentPoly {
        LaurentPoly::from_terms(
            ctx,
            p.terms().map(|(e, c)| {
                let mut e2: Vec<i32> = e.to_vec();
                e2[z] = -e2[z];
                (e2.into_boxed_slice(), c.clone())
            }),
        )
    };
    // g(w) = -f(1/w) / w^2, with w living in the z slot
    let mut shift = vec![0i32; ctx.len()];
    shift[z] = -2;
    let gnum = negate(f.num())
        .mul_monomial(&(-BigRational::one()), &shift);
    let g = RatFun::new(gnum, negate(f.den()))?;
    laurent_coeff_at(&g, z, -1)
}

// ---------------------------------------------------------------------------
// The y -> -1 limit (Chern-Schwartz-MacPherson direction)
// ---------------------------------------------------------------------------

/// Substitute `y = u - 1` and `T_i = exp(-u * tau_i)` for the given linear
/// forms `tau_i`, expand around `u = 0`, and return the finite limit as a
/// rational function in the tau variables. A pole is reported with its
/// order.
///
/// Every monomial of the substituted series satisfies
/// `tau-degree <= u-degree`, so the coefficient of `u^k` is complete once
/// the truncation cap reaches `2k`; the cap doubles until the denominator
/// valuation is certified.
pub fn csm_limit(
    value: &RatFun,
    directions: &[Weight],
    tau_ctx: &Arc<VarContext>,
) -> Result<RatFun> {
    let src = value.context();
    let nvars = src.len();
    if directions.len() != nvars && directions.len() != nvars - 1 {
        return Err(EqError::Invalid(
            "need one direction per multiplicative variable".into(),
        ));
    }
    let has_y = directions.len() == nvars - 1;
    let y_slot = if has_y { Some(nvars - 1) } else { None };

    // group the monomials of a polynomial by frequency vector: the image of
    // T^a y^e is determined by (sum_i a_i * tau_i, e), and distinct
    // frequencies stay independent in the expansion
    type Grouped = HashMap<(Vec<i64>, i32), BigRational>;
    let group = |p: &LaurentPoly| -> Grouped {
        let mut out: Grouped = HashMap::new();
        for (e, c) in p.terms() {
            let mut freq = vec![0i64; tau_ctx.len()];
            let mut yexp = 0i32;
            for (i, &x) in e.iter().enumerate() {
                if Some(i) == y_slot {
                    yexp = x;
                    continue;
                }
                for (j, &d) in directions[i].0.iter().enumerate() {
                    freq[j] += d * (x as i64);
                }
            }
            let entry = out.entry((freq, yexp)).or_insert_with(BigRational::zero);
            *entry += c;
            // zero entries are pruned below
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    let num_g = group(value.num());
    let den_g = group(value.den());
    if den_g.is_empty() {
        return Err(EqError::DenominatorVanishes);
    }
    if num_g.is_empty() {
        return Ok(RatFun::zero(tau_ctx));
    }

    // expansion context: u first, then the tau variables
    let mut names: Vec<String> = vec!["u".into()];
    names.extend(tau_ctx.names().iter().cloned());
    let ectx = VarContext::new(names);

    let build = |g: &Grouped, cap: u32| -> Result<PowerSeries> {
        let mut acc = PowerSeries::zero(&ectx, cap);
        let u = PowerSeries::var(&ectx, 0, cap);
        let u_minus_1 = u.sub(&PowerSeries::one(&ectx, cap));
        let mut exp_cache: HashMap<Vec<i64>, PowerSeries> = HashMap::new();
        for ((freq, yexp), c) in g {
            if *yexp < 0 {
                return Err(EqError::Invalid("negative power of y".into()));
            }
            let e = exp_cache.entry(freq.clone()).or_insert_with(|| {
                // exp(-u * sum_j freq_j tau_j)
                let mut lin = PowerSeries::zero(&ectx, cap);
                for (j, &d) in freq.iter().enumerate() {
                    if d != 0 {
                        lin = lin.add(
                            &PowerSeries::var(&ectx, j + 1, cap)
                                .scale(&BigRational::from_integer(d.into())),
                        );
                    }
                }
                u.mul(&lin).neg().exp().expect("zero constant term")
            });
            let term = e.mul(&u_minus_1.pow(*yexp as u32)).scale(c);
            acc = acc.add(&term);
        }
        Ok(acc)
    };

    let u_val = |s: &PowerSeries| -> Option<u32> {
        s.terms().map(|(e, _)| e[0] as u32).min()
    };

    let mut cap: u32 = 8;
    loop {
        let n = build(&num_g, cap)?;
        let d = build(&den_g, cap)?;
        let Some(vd) = u_val(&d) else {
            cap *= 2;
            if cap > 4096 {
                return Err(EqError::Invalid("csm limit did not stabilize".into()));
            }
            continue;
        };
        if 2 * vd > cap {
            cap = 2 * vd.max(cap);
            continue;
        }
        // coefficients of u^k for k <= vd are now complete
        let vn = u_val(&n);
        match vn {
            Some(vn) if vn < vd => {
                return Err(EqError::Pole { order: (vd - vn) as usize });
            }
            Some(vn) if vn > vd => return Ok(RatFun::zero(tau_ctx)),
            Some(_) => {
                let slice = |s: &PowerSeries| -> LaurentPoly {
                    let mut p = LaurentPoly::zero(tau_ctx);
                    for (e, c) in s.terms() {
                        if e[0] as u32 == vd {
                            let te: Vec<i32> = e[1..].to_vec();
                            p.add_term(te.into_boxed_slice(), c.clone());
                        }
                    }
                    p
                };
                return RatFun::new(slice(&n), slice(&d));
            }
            None => {
                // numerator valuation exceeds everything visible: it is
                // either > vd (limit 0) once certified, or terms appear at
                // a larger cap
                if cap >= 2 * (vd + 1) {
                    return Ok(RatFun::zero(tau_ctx));
                }
                cap *= 2;
                if cap > 4096 {
                    return Err(EqError::Invalid("csm limit did not stabilize".into()));
                }
            }
        }
    }
}
