//! Sparse multivariate Laurent polynomials with exact rational coefficients.
//!
//! A [`LaurentPoly`] stores a map from exponent vectors (signed, one entry per
//! context variable) to nonzero `BigRational` coefficients.
//!
//! Invariants:
//! - no stored coefficient is zero (enforced on every operation)
//! - every exponent vector has length equal to the context size
//! - two polynomials are equal iff their term maps are equal
//!
//! Exponents are machine-width signed integers; overflow aborts with a
//! diagnostic rather than wrapping.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use crate::context::{same_context, VarContext};
use crate::error::{EqError, Result};

/// Exponent vector, one signed entry per context variable.
pub type Exps = Box<[i32]>;

/// Add exponent vectors, aborting on overflow.
pub fn exps_add(a: &[i32], b: &[i32]) -> Exps {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
        .collect()
}

fn exps_sub(a: &[i32], b: &[i32]) -> Exps {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.checked_sub(*y).expect("exponent overflow"))
        .collect()
}

fn total_degree(e: &[i32]) -> i64 {
    e.iter().map(|&x| x as i64).sum()
}

/// Display order: lower total degree first; within a degree, the term with
/// the larger exponent on the earliest differing variable comes first. This
/// is the graded-lexicographic order used for canonical printing, with the
/// constant term (when present) leading.
pub fn display_cmp(a: &[i32], b: &[i32]) -> Ordering {
    match total_degree(a).cmp(&total_degree(b)) {
        Ordering::Equal => {
            for i in 0..a.len() {
                if a[i] != b[i] {
                    return b[i].cmp(&a[i]);
                }
            }
            Ordering::Equal
        }
        ord => ord,
    }
}

/// Key for division: graded-lex with the *largest* element as the division
/// leading term. Tuple ordering: degree first, then lexicographic exponents.
#[derive(PartialEq, Eq, PartialOrd, Ord, Clone)]
struct DivKey(i64, Exps);

/// A sparse multivariate Laurent polynomial.
#[derive(Clone)]
pub struct LaurentPoly {
    ctx: Arc<VarContext>,
    terms: FxHashMap<Exps, BigRational>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl LaurentPoly {
    // -----------------------------------------------------------------
    // Construction
    // -----------------------------------------------------------------

    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        LaurentPoly { ctx: ctx.clone(), terms: FxHashMap::default() }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, BigRational::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: BigRational) -> Self {
        let mut terms = FxHashMap::default();
        if !c.is_zero() {
            terms.insert(vec![0i32; ctx.len()].into_boxed_slice(), c);
        }
        LaurentPoly { ctx: ctx.clone(), terms }
    }

    pub fn from_int(ctx: &Arc<VarContext>, n: i64) -> Self {
        Self::constant(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    /// The variable at `idx`, to the first power.
    pub fn var(ctx: &Arc<VarContext>, idx: usize) -> Self {
        Self::monomial(ctx, BigRational::one(), &{
            let mut e = vec![0i32; ctx.len()];
            e[idx] = 1;
            e
        })
    }

    pub fn monomial(ctx: &Arc<VarContext>, c: BigRational, exps: &[i32]) -> Self {
        assert_eq!(exps.len(), ctx.len(), "exponent vector length mismatch");
        let mut terms = FxHashMap::default();
        if !c.is_zero() {
            terms.insert(exps.to_vec().into_boxed_slice(), c);
        }
        LaurentPoly { ctx: ctx.clone(), terms }
    }

    pub fn from_terms(ctx: &Arc<VarContext>, it: impl IntoIterator<Item = (Exps, BigRational)>) -> Self {
        let mut p = Self::zero(ctx);
        for (e, c) in it {
            assert_eq!(e.len(), ctx.len(), "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    // -----------------------------------------------------------------
    // Accessors
    // -----------------------------------------------------------------

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    /// Coefficient of an exponent vector (zero if absent).
    pub fn coeff(&self, exps: &[i32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0i32; self.ctx.len()])
    }

    /// True if the polynomial uses only the given variable (all other
    /// exponents zero everywhere).
    pub fn uses_only(&self, vars: &[usize]) -> bool {
        self.terms.keys().all(|e| {
            e.iter()
                .enumerate()
                .all(|(i, &x)| x == 0 || vars.contains(&i))
        })
    }

    /// Maximum total degree among terms (None for the zero polynomial).
    pub fn max_total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    /// Minimum exponent of a variable over all terms (0 for zero polynomial).
    pub fn min_exponent(&self, var: usize) -> i32 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    pub fn max_exponent(&self, var: usize) -> i32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    // -----------------------------------------------------------------
    // Term-level mutation
    // -----------------------------------------------------------------

    /// Add `c` to the coefficient of `exps`, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// self += scale * other (exact, in place).
    pub fn add_scaled(&mut self, other: &LaurentPoly, scale: &BigRational) {
        debug_assert!(same_context(&self.ctx, &other.ctx));
        if scale.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * scale);
        }
    }

    // -----------------------------------------------------------------
    // Arithmetic
    // -----------------------------------------------------------------

    pub fn check_context(&self, other: &LaurentPoly) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(EqError::ContextMismatch {
                left: self.ctx.to_string(),
                right: other.ctx.to_string(),
            })
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        debug_assert!(same_context(&self.ctx, &other.ctx));
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> LaurentPoly {
        if s.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * s;
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        debug_assert!(same_context(&self.ctx, &other.ctx));
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = LaurentPoly::zero(&self.ctx);
        out.terms.reserve(big.terms.len());
        for (eb, cb) in &small.terms {
            for (ea, ca) in &big.terms {
                out.add_term(exps_add(ea, eb), ca * cb);
            }
        }
        out
    }

    /// Multiply by a single monomial (cheap shift).
    pub fn mul_monomial(&self, c: &BigRational, exps: &[i32]) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = LaurentPoly::zero(&self.ctx);
        for (e, k) in &self.terms {
            out.terms.insert(exps_add(e, exps), k * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Product of many polynomials, smallest pairs first.
    pub fn product(ctx: &Arc<VarContext>, factors: &[LaurentPoly]) -> LaurentPoly {
        let mut fs: Vec<LaurentPoly> = factors.to_vec();
        if fs.is_empty() {
            return Self::one(ctx);
        }
        fs.sort_by_key(|p| p.num_terms());
        let mut acc = fs[0].clone();
        for f in &fs[1..] {
            acc = acc.mul(f);
        }
        acc
    }

    // -----------------------------------------------------------------
    // Leading terms, content, normalization
    // -----------------------------------------------------------------

    /// The term that prints first in canonical display order.
    pub fn display_leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms
            .iter()
            .min_by(|(a, _), (b, _)| display_cmp(a, b))
    }

    /// Sign of the display-leading coefficient (+1/-1, 0 for zero).
    pub fn leading_sign(&self) -> i32 {
        match self.display_leading() {
            None => 0,
            Some((_, c)) => {
                if c.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Returns 1 for the zero polynomial.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// Sorted terms in canonical display order.
    pub fn sorted_terms(&self) -> Vec<(&Exps, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| display_cmp(a, b));
        v
    }

    // -----------------------------------------------------------------
    // Exact division
    // -----------------------------------------------------------------

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Uses leading-term elimination in graded-lex order; for an
    /// exact quotient this terminates without backtracking. Laurent inputs
    /// are shifted to ordinary polynomials first.
    pub fn checked_div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        debug_assert!(same_context(&self.ctx, &divisor.ctx));
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(&self.ctx));
        }
        let nvars = self.ctx.len();
        let shift_f: Vec<i32> = (0..nvars).map(|v| self.min_exponent(v)).collect();
        let shift_d: Vec<i32> = (0..nvars).map(|v| divisor.min_exponent(v)).collect();

        let mut rem: BTreeMap<DivKey, BigRational> = BTreeMap::new();
        for (e, c) in &self.terms {
            let e = exps_sub(e, &shift_f);
            rem.insert(DivKey(total_degree(&e), e), c.clone());
        }
        let mut div_terms: Vec<(Exps, BigRational)> = divisor
            .terms
            .iter()
            .map(|(e, c)| (exps_sub(e, &shift_d), c.clone()))
            .collect();
        div_terms.sort_by(|(a, _), (b, _)| {
            DivKey(total_degree(a), a.clone()).cmp(&DivKey(total_degree(b), b.clone()))
        });
        let (lead_e, lead_c) = div_terms.pop().expect("nonzero divisor");

        let mut quot: FxHashMap<Exps, BigRational> = FxHashMap::default();
        while let Some((DivKey(_, re), rc)) = rem.pop_last() {
            // lead(rem) must be divisible by lead(divisor)
            let qe: Vec<i32> = re
                .iter()
                .zip(lead_e.iter())
                .map(|(a, b)| a - b)
                .collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let qc = &rc / &lead_c;
            // rem -= q_term * divisor  (leading term cancels by construction)
            for (de, dc) in &div_terms {
                let e = exps_add(de, &qe);
                let delta = dc * &qc;
                let key = DivKey(total_degree(&e), e);
                let entry = rem.entry(key.clone()).or_insert_with(BigRational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.insert(qe.into_boxed_slice(), qc);
        }

        // shift back: quotient exponents + (shift_f - shift_d)
        let back = exps_sub(&shift_f, &shift_d);
        let mut out = LaurentPoly::zero(&self.ctx);
        for (e, c) in quot {
            out.terms.insert(exps_add(&e, &back), c);
        }
        Some(out)
    }

    // -----------------------------------------------------------------
    // Variable remapping and substitution
    // -----------------------------------------------------------------

    /// Remap variables onto a target context. `map[i]` gives the target
    /// index of source variable `i`, or `None` to substitute 1 for it.
    /// Distinct source variables may map to a common target variable.
    pub fn remap(&self, target: &Arc<VarContext>, map: &[Option<usize>]) -> LaurentPoly {
        assert_eq!(map.len(), self.ctx.len());
        let mut out = LaurentPoly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0i32; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    match map[i] {
                        Some(j) => {
                            ne[j] = ne[j].checked_add(x).expect("exponent overflow");
                        }
                        None => {} // variable set to 1
                    }
                }
            }
            out.add_term(ne.into_boxed_slice(), c.clone());
        }
        out
    }

    /// Permute variables within the same context: source var `i` becomes
    /// `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(&self.ctx);
        for (e, c) in &self.terms {
            let mut ne = vec![0i32; e.len()];
            for (i, &x) in e.iter().enumerate() {
                ne[perm[i]] = x;
            }
            out.terms.insert(ne.into_boxed_slice(), c.clone());
        }
        out
    }

    /// Substitute `value` for the variable `var`, keeping the context.
    /// Negative exponents of `var` require `value` to be invertible as a
    /// monomial; general negative powers are not supported here.
    pub fn substitute_poly(&self, var: usize, value: &LaurentPoly) -> LaurentPoly {
        debug_assert!(same_context(&self.ctx, &value.ctx));
        // group by exponent of `var`
        let mut by_exp: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var];
            let mut e0: Vec<i32> = e.to_vec();
            e0[var] = 0;
            by_exp
                .entry(k)
                .or_insert_with(|| LaurentPoly::zero(&self.ctx))
                .add_term(e0.into_boxed_slice(), c.clone());
        }
        let mut out = LaurentPoly::zero(&self.ctx);
        let mut pow_cache: FxHashMap<i32, LaurentPoly> = FxHashMap::default();
        for (k, part) in by_exp {
            let vk = if k == 0 {
                LaurentPoly::one(&self.ctx)
            } else if k > 0 {
                pow_cache
                    .entry(k)
                    .or_insert_with(|| value.pow(k as u32))
                    .clone()
            } else {
                // negative power: value must be a single monomial
                assert_eq!(value.num_terms(), 1, "negative power of a non-monomial substitution");
                let (e, c) = value.terms.iter().next().unwrap();
                let inv_e: Vec<i32> = e.iter().map(|&x| -x).collect();
                LaurentPoly::monomial(&self.ctx, BigRational::one() / c, &inv_e).pow((-k) as u32)
            };
            out = out.add(&part.mul(&vk));
        }
        out
    }

    /// Evaluate at an exact rational point (used by tests and spot checks).
    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.ctx.len());
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    let mut p = BigRational::one();
                    let b = if x > 0 {
                        point[i].clone()
                    } else {
                        BigRational::one() / point[i].clone()
                    };
                    for _ in 0..x.unsigned_abs() {
                        p *= &b;
                    }
                    term *= p;
                }
            }
            acc += term;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Display
// ---------------------------------------------------------------------------

/// Format a rational in the grammar's `int ('/' posint)?` shape.
pub fn format_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_term(ctx: &VarContext, exps: &[i32], coef: &BigRational, first: bool) -> String {
    let mut vars = String::new();
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !vars.is_empty() {
            vars.push('*');
        }
        vars.push_str(ctx.name(i));
        if e != 1 {
            vars.push('^');
            vars.push_str(&e.to_string());
        }
    }
    let abs = coef.abs();
    // a leading "-x^2" would re-parse as (-x)^2 under the grammar, so the
    // unit coefficient is spelled out when the first variable carries an
    // exponent
    let leading_minus_hazard = first
        && coef.is_negative()
        && exps.iter().find(|&&e| e != 0).is_some_and(|&e| e != 1);
    let mut body = if vars.is_empty() {
        format_rational(&abs)
    } else if abs.is_one() && !leading_minus_hazard {
        vars
    } else {
        format!("{}*{}", format_rational(&abs), vars)
    };
    if coef.is_negative() {
        body = format!("-{}", body);
    } else if !first {
        body = format!("+{}", body);
    }
    body
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            write!(f, "{}", format_term(&self.ctx, e, c, first))?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
