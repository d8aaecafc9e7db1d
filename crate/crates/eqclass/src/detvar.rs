//! Local Hirzebruch classes of determinant varieties.
//!
//! The determinant hypersurface `{det = 0}` in the n x n matrix space
//! compactifies to the codimension-one Schubert variety `X_n` in
//! Gr_n(C^2n), with the torus acting through characters `-s_1..-s_n` on the
//! source block and `t_1..t_n` on the target block. A fixed point is a
//! coordinate n-plane; writing `m` for the number of its s-indices, the
//! germ of `X_n` there is a size-m determinant germ (chart weights
//! `s_a + t_b` over the s-block indices in the point and the t-block
//! indices absent from it) times a smooth factor on the remaining tangent
//! directions. Summing all fixed-point contributions reproduces
//! `chi_y(X_n)` from its cell decomposition, which pins the one unknown
//! contribution at the fully singular point; induction on `m` yields every
//! class.
//!
//! Accumulation strategy for the big ranks: every contribution is put over
//! the shared denominator `VS * VT * P`, where `VS`, `VT` are the products
//! of the `(S_i - S_j)`, `(T_i - T_j)` differences and
//! `P = prod (1 - S_i T_j)`. Orbits of the (S_n x S_n)-action are summed by
//! permuting one representative numerator; each orbit sum is divisible by
//! `VS * VT` exactly (its difference-poles cancel in transposition pairs),
//! leaving the polynomial numerator over `P`.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Mutex;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{EqError, Result};
use crate::localize::{normal_form, LocalizedClass, NormalForm};
use crate::poly::LaurentPoly;
use crate::ratfun::{from_json, to_json, RatFun};
use crate::space::{cell_chi_y, schubert_cell_dims, SubsetPoint};
use crate::weight::{ClassVars, Weight};

// ---------------------------------------------------------------------------
// Germ classification
// ---------------------------------------------------------------------------

/// Decomposition of the Schubert-variety germ at a fixed point into a
/// smaller determinant germ times smooth linear factors.
///
/// Indices are 0-based block positions: `det_block_s` lists the s-indices
/// of the point, `det_block_t` the t-indices absent from it; the determinant
/// germ has chart weights `s_a + t_b` over those blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermDescriptor {
    pub m: usize,
    pub det_block_s: Vec<usize>,
    pub det_block_t: Vec<usize>,
    pub smooth_factor_weights: Vec<Weight>,
}

/// Weight of the chart coordinate `s_a + t_b` (0-based blocks) in Z^(2n).
pub fn det_entry_weight(n: usize, a: usize, b: usize) -> Weight {
    let mut v = vec![0i64; 2 * n];
    v[a] += 1;
    v[n + b] += 1;
    Weight(v)
}

/// Classify a fixed point of Gr_n(C^2n): `m = 0` lies outside the Schubert
/// variety, `m = 1` is a smooth point, `m >= 2` is singular.
pub fn classify_fixed_point(n: usize, point: &SubsetPoint) -> GermDescriptor {
    let det_block_s: Vec<usize> = point.0.iter().copied().filter(|&i| i < n).collect();
    let det_block_t: Vec<usize> = (0..n).filter(|j| !point.contains(n + j)).collect();
    let m = det_block_s.len();
    debug_assert_eq!(det_block_t.len(), m);
    let chars = crate::space::det_characters(n);
    let full = crate::space::grassmannian_tangent_weights(&chars, point);
    // remove the m^2 determinant-block weights from the tangent multiset
    let mut smooth = full;
    for &a in &det_block_s {
        for &b in &det_block_t {
            let w = det_entry_weight(n, a, b);
            let pos = smooth
                .iter()
                .position(|x| *x == w)
                .expect("det block weight is tangent");
            smooth.remove(pos);
        }
    }
    GermDescriptor { m, det_block_s, det_block_t, smooth_factor_weights: smooth }
}

// ---------------------------------------------------------------------------
// The memo table
// ---------------------------------------------------------------------------

/// A computed determinant class: numerator `w` over `prod (1 - S_i T_j)`.
#[derive(Clone, Debug)]
pub struct DetClass {
    pub n: usize,
    pub with_y: bool,
    pub w: LaurentPoly,
}

impl DetClass {
    pub fn vars(&self) -> ClassVars {
        ClassVars::split_st(self.n)
    }

    pub fn denominator_weights(&self) -> Vec<Weight> {
        let mut ws = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                ws.push(det_entry_weight(self.n, i, j));
            }
        }
        ws
    }

    pub fn normal_form(&self) -> NormalForm {
        NormalForm { w: self.w.clone(), weights: self.denominator_weights() }
    }

    /// The class in lowest terms (cancels any denominator factor that
    /// happens to divide the numerator, as at n = 1).
    pub fn value(&self) -> Result<RatFun> {
        let vars = self.vars();
        let ctx = vars.mult_ctx();
        let one = LaurentPoly::one(ctx);
        let mut sum = crate::localize::FracSum::new(ctx);
        let factors: Vec<LaurentPoly> = self
            .denominator_weights()
            .iter()
            .map(|w| one.sub(&vars.monomial(w).expect("weight rank")))
            .collect();
        sum.add_term(self.w.clone(), &factors);
        sum.into_ratfun()
    }

    pub fn to_localized(&self) -> Result<LocalizedClass> {
        Ok(LocalizedClass {
            point_label: format!("det{}", self.n),
            value: self.value()?,
            den_weights: Some(self.denominator_weights()),
        })
    }
}

/// Write-once memo of determinant classes keyed by (n, y-mode), optionally
/// persisted to a cache directory as RatFun JSON. Readers of a key that is
/// being computed block until the first computation lands.
pub struct DetClassTable {
    cache_dir: Option<PathBuf>,
    memo: Mutex<HashMap<(usize, bool), std::sync::Arc<std::sync::OnceLock<Result<DetClass>>>>>,
}

impl DetClassTable {
    pub fn new(cache_dir: Option<PathBuf>) -> DetClassTable {
        DetClassTable { cache_dir, memo: Mutex::new(HashMap::new()) }
    }

    /// Honor the `EQCLASS_CACHE` environment variable.
    pub fn from_env() -> DetClassTable {
        Self::new(std::env::var_os("EQCLASS_CACHE").map(PathBuf::from))
    }

    fn cache_path(&self, n: usize, with_y: bool) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| {
            d.join(format!("det_n{}_{}.json", n, if with_y { "y" } else { "y0" }))
        })
    }

    fn load_cached(&self, n: usize, with_y: bool) -> Option<DetClass> {
        let path = self.cache_path(n, with_y)?;
        let text = std::fs::read_to_string(path).ok()?;
        let json: serde_json::Value = serde_json::from_str(&text).ok()?;
        let value = from_json(&json).ok()?;
        let vars = ClassVars::split_st(n);
        if value.context().names() != vars.mult_ctx().names() {
            return None;
        }
        let value = value.project(vars.mult_ctx()).ok()?;
        let ws: Vec<Weight> = (0..n)
            .flat_map(|i| (0..n).map(move |j| det_entry_weight(n, i, j)))
            .collect();
        let nf = normal_form(&vars, &value, &ws).ok()?;
        Some(DetClass { n, with_y, w: nf.w })
    }

    fn store_cached(&self, class: &DetClass) {
        let Some(path) = self.cache_path(class.n, class.with_y) else {
            return;
        };
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        if let Ok(value) = class.value() {
            let _ = std::fs::write(path, to_json(&value).to_string());
        }
    }
}

/// The local class of `{det = 0}` at the origin, memoized per (n, y-mode).
pub fn det_local_class(n: usize, with_y: bool, table: &DetClassTable) -> Result<DetClass> {
    if n == 0 {
        return Err(EqError::Invalid("determinant size must be positive".into()));
    }
    let cell = {
        let mut memo = table.memo.lock().unwrap();
        memo.entry((n, with_y)).or_default().clone()
    };
    cell.get_or_init(|| {
        if let Some(c) = table.load_cached(n, with_y) {
            return Ok(c);
        }
        let class = compute_det_class(n, with_y, table)?;
        table.store_cached(&class);
        Ok(class)
    })
    .clone()
}

// ---------------------------------------------------------------------------
// The extraction
// ---------------------------------------------------------------------------

struct DetCtx {
    n: usize,
    vars: ClassVars,
}

impl DetCtx {
    fn ctx(&self) -> &std::sync::Arc<crate::context::VarContext> {
        self.vars.mult_ctx()
    }

    fn s_slot(&self, i: usize) -> usize {
        i
    }

    fn t_slot(&self, j: usize) -> usize {
        self.n + j
    }

    fn y_slot(&self) -> usize {
        2 * self.n
    }

    fn s_var(&self, i: usize) -> LaurentPoly {
        LaurentPoly::var(self.ctx(), self.s_slot(i))
    }

    fn t_var(&self, j: usize) -> LaurentPoly {
        LaurentPoly::var(self.ctx(), self.t_slot(j))
    }

    fn y_var(&self) -> LaurentPoly {
        LaurentPoly::var(self.ctx(), self.y_slot())
    }

    /// 1 - S_i T_j
    fn one_minus_st(&self, i: usize, j: usize) -> LaurentPoly {
        let one = LaurentPoly::one(self.ctx());
        one.sub(&self.s_var(i).mul(&self.t_var(j)))
    }

    /// The canonical difference (X_a - X_b), a < b, in the S or T block.
    fn s_diff(&self, a: usize, b: usize) -> LaurentPoly {
        self.s_var(a).sub(&self.s_var(b))
    }

    fn t_diff(&self, a: usize, b: usize) -> LaurentPoly {
        self.t_var(a).sub(&self.t_var(b))
    }

    /// `prod over all pairs (1 - S_i T_j)`.
    fn full_st_product(&self) -> LaurentPoly {
        let mut fs = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                fs.push(self.one_minus_st(i, j));
            }
        }
        LaurentPoly::product(self.ctx(), &fs)
    }
}

/// Parity of the permutation sending sorted block data to a subset layout.
fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// The block permutation of {0..n-1} sending {0..m-1} to `chosen` (sorted)
/// and {m..n-1} to its complement (sorted).
fn block_permutation(n: usize, chosen: &[usize]) -> Vec<usize> {
    let m = chosen.len();
    let complement: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
    let mut perm = vec![0usize; n];
    for (k, &c) in chosen.iter().enumerate() {
        perm[k] = c;
    }
    for (k, &c) in complement.iter().enumerate() {
        perm[m + k] = c;
    }
    perm
}

/// Numerator, over the shared denominator `VS * VT * P`, of the
/// representative contribution for germ size `m`: the point with
/// `A = {0..m-1}` (s-block) and the t-block complement `B' = {0..m-1}`.
/// Returned split as (S-only part, rest): the S-only part is invariant
/// under the T-block permutations and stays out of the first orbit sum.
fn representative_numerator(
    d: &DetCtx,
    m: usize,
    w_m: &LaurentPoly,
    with_y: bool,
) -> (LaurentPoly, LaurentPoly) {
    let n = d.n;
    let y = d.y_var();
    let mut s_factors: Vec<LaurentPoly> = Vec::new();
    let mut factors: Vec<LaurentPoly> = vec![w_m.clone()];

    // smooth-factor numerator binomials; each carries a sign -1 from
    // clearing (1 - monomial) to its canonical difference factor
    let mut sign_flips = 0usize;
    // s-pairs: weights s_i - s_j for i in A, j in A'
    for i in 0..m {
        for j in m..n {
            let b = if with_y {
                d.s_var(j).add(&y.mul(&d.s_var(i)))
            } else {
                d.s_var(j)
            };
            s_factors.push(b);
            sign_flips += 1;
        }
    }
    // mixed: weights -s_j - t_i for j in A' (s-side), i in B (t-side)
    for j in m..n {
        for i in m..n {
            let st = d.s_var(j).mul(&d.t_var(i));
            let b = if with_y { st.add(&y) } else { st };
            factors.push(b);
            sign_flips += 1;
        }
    }
    // t-pairs: weights t_j - t_i for j in B', i in B
    for j in 0..m {
        for i in m..n {
            let b = if with_y {
                d.t_var(i).add(&y.mul(&d.t_var(j)))
            } else {
                d.t_var(i)
            };
            factors.push(b);
            sign_flips += 1;
        }
    }
    debug_assert_eq!(sign_flips, n * n - m * m);

    // cofactors completing the point's denominator to VS * VT * P:
    // ST pairs outside (A x B') u (A' x B)
    for i in 0..n {
        for j in 0..n {
            let in_det = i < m && j < m;
            let in_mixed = i >= m && j >= m;
            if !in_det && !in_mixed {
                factors.push(d.one_minus_st(i, j));
            }
        }
    }
    // S-differences within A and within A'
    for a in 0..n {
        for b in a + 1..n {
            let used = a < m && b >= m;
            if !used {
                s_factors.push(d.s_diff(a, b));
            }
        }
    }
    // T-differences within B' and within B
    for a in 0..n {
        for b in a + 1..n {
            let used = a < m && b >= m;
            if !used {
                factors.push(d.t_diff(a, b));
            }
        }
    }

    let mut rest = LaurentPoly::product(d.ctx(), &factors);
    if sign_flips % 2 == 1 {
        rest = rest.neg();
    }
    (LaurentPoly::product(d.ctx(), &s_factors), rest)
}

/// Divide an orbit sum by one block's Vandermonde factors; panics on a
/// remainder, which would mean the orbit sum failed to be polynomial.
fn divide_by_vandermonde(d: &DetCtx, mut acc: LaurentPoly, t_block: bool) -> LaurentPoly {
    let n = d.n;
    for a in 0..n {
        for b in a + 1..n {
            let f = if t_block { d.t_diff(a, b) } else { d.s_diff(a, b) };
            acc = acc
                .checked_div_exact(&f)
                .expect("orbit sum divisible by the block difference");
        }
    }
    acc
}

/// All m-subsets of {0..n-1}.
fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    crate::space::k_subsets(n, m).into_iter().map(|s| s.0).collect()
}

fn compute_det_class(n: usize, with_y: bool, table: &DetClassTable) -> Result<DetClass> {
    let vars = ClassVars::split_st(n);
    let d = DetCtx { n, vars };
    if n == 1 {
        // the 1x1 determinant germ is the origin in C; its localized class
        // is 1, i.e. W = 1 - S1 T1 over the single denominator factor
        return Ok(DetClass { n, with_y, w: d.one_minus_st(0, 0) });
    }

    // smaller classes, renamed into this context per germ block below
    let mut smaller: Vec<LaurentPoly> = Vec::with_capacity(n);
    smaller.push(LaurentPoly::zero(d.ctx())); // unused slot m=0
    for m in 1..n {
        let c = det_local_class(m, with_y, table)?;
        let mut map: Vec<Option<usize>> = Vec::with_capacity(2 * m + 1);
        for i in 0..m {
            map.push(Some(d.s_slot(i)));
        }
        for j in 0..m {
            map.push(Some(d.t_slot(j)));
        }
        map.push(Some(d.y_slot()));
        smaller.push(c.w.remap(d.ctx(), &map));
    }

    // chi_y of the Schubert variety from its cells
    let chi = if with_y {
        cell_chi_y(&schubert_cell_dims(n), d.ctx(), d.y_slot())
    } else {
        LaurentPoly::one(d.ctx())
    };

    let p = d.full_st_product();

    // Sum the orbits of fixed points with m < n singular size. The T-block
    // orbit is summed and cleared of its Vandermonde first; the partial sum
    // over all B' (for the fixed representative A) is already free of
    // T-difference poles because each T-transposition pairs the points with
    // cancelling residues. The S-block pass then repeats the argument.
    let mut total_q = LaurentPoly::zero(d.ctx());
    for m in 1..n {
        let (s_part, rest) = representative_numerator(&d, m, &smaller[m], with_y);
        let blocks = subsets(n, m);
        let t_orbit = blocks
            .par_iter()
            .map(|bp| {
                let tp = block_permutation(n, bp);
                let sign = permutation_sign(&tp);
                let mut perm: Vec<usize> = (0..2 * n + 1).collect();
                for i in 0..n {
                    perm[n + i] = n + tp[i];
                }
                let mut q = rest.permute_vars(&perm);
                if sign < 0 {
                    q = q.neg();
                }
                q
            })
            .reduce(|| LaurentPoly::zero(d.ctx()), |a, b| a.add(&b));
        // the S-only part is coprime to the T-Vandermonde, so it multiplies
        // back in after the division
        let t_cleared = divide_by_vandermonde(&d, t_orbit, true).mul(&s_part);
        let s_orbit = blocks
            .par_iter()
            .map(|a| {
                let sp = block_permutation(n, a);
                let sign = permutation_sign(&sp);
                let mut perm: Vec<usize> = (0..2 * n + 1).collect();
                for i in 0..n {
                    perm[i] = sp[i];
                }
                let mut q = t_cleared.permute_vars(&perm);
                if sign < 0 {
                    q = q.neg();
                }
                q
            })
            .reduce(|| LaurentPoly::zero(d.ctx()), |a, b| a.add(&b));
        total_q = total_q.add(&divide_by_vandermonde(&d, s_orbit, false));
    }

    // W_n = chi * P - (sum of smooth-side contributions cleared to P)
    let w = chi.mul(&p).sub(&total_q);
    // smooth-limit normalization: the constant term of W is chi at the
    // smooth model, always 1
    debug_assert!(w.constant_term().is_one());
    Ok(DetClass { n, with_y, w })
}

// ---------------------------------------------------------------------------
// Open cell, L-class form, radial table, positivity, csm
// ---------------------------------------------------------------------------

/// Numerator of the ambient class `prod (1+y S_i T_j)/(1-S_i T_j)` over the
/// shared denominator.
fn ambient_numerator(d: &DetCtx, with_y: bool) -> LaurentPoly {
    if !with_y {
        return LaurentPoly::one(d.ctx());
    }
    let one = LaurentPoly::one(d.ctx());
    let y = d.y_var();
    let mut fs = Vec::with_capacity(d.n * d.n);
    for i in 0..d.n {
        for j in 0..d.n {
            fs.push(one.add(&y.mul(&d.s_var(i)).mul(&d.t_var(j))));
        }
    }
    LaurentPoly::product(d.ctx(), &fs)
}

/// The class of the open cell `C^(n^2) minus {det=0}`: ambient minus the
/// determinant class, as a normal form over `prod (1 - S_i T_j)`.
pub fn open_cell_class(n: usize, with_y: bool, table: &DetClassTable) -> Result<DetClass> {
    let det = det_local_class(n, with_y, table)?;
    let vars = ClassVars::split_st(n);
    let d = DetCtx { n, vars };
    let w = ambient_numerator(&d, with_y).sub(&det.w);
    Ok(DetClass { n, with_y, w })
}

/// Check the closed L-class form at y = 1:
/// `2^n * prod_{i<j}(S_i+S_j) * prod_{i<j}(T_i+T_j) * prod_i S_i T_i`
/// against the open-cell class.
pub fn lclass_check(n: usize, table: &DetClassTable) -> Result<bool> {
    let open = open_cell_class(n, true, table)?;
    let vars = ClassVars::split_st(n);
    let d = DetCtx { n, vars };
    let w1 = open.w.substitute_poly(d.y_slot(), &LaurentPoly::one(d.ctx()));
    let mut closed = LaurentPoly::from_int(d.ctx(), 1 << n);
    for i in 0..n {
        for j in i + 1..n {
            closed = closed.mul(&d.s_var(i).add(&d.s_var(j)));
            closed = closed.mul(&d.t_var(i).add(&d.t_var(j)));
        }
    }
    for i in 0..n {
        closed = closed.mul(&d.s_var(i)).mul(&d.t_var(i));
    }
    Ok(w1 == closed)
}

/// Context for radial data: variables T and y.
pub fn radial_ctx() -> std::sync::Arc<crate::context::VarContext> {
    crate::context::VarContext::new(vec!["T", "y"])
}

/// Radial specialization `S_i -> 1, T_i -> T` of a numerator over
/// `prod(1 - S_i T_j)`, whose denominator becomes `(1-T)^(n^2)`.
fn radialize(n: usize, w: &LaurentPoly) -> LaurentPoly {
    let rctx = radial_ctx();
    let mut map: Vec<Option<usize>> = Vec::with_capacity(2 * n + 1);
    for _ in 0..n {
        map.push(None); // S_i -> 1
    }
    for _ in 0..n {
        map.push(Some(0)); // T_i -> T
    }
    map.push(Some(1)); // y
    w.remap(&rctx, &map)
}

/// The radial coefficient table: specialize the open-cell class radially,
/// factor `(1+y)^n T^n` out of the numerator, and return the coefficient
/// polynomials `p_0(y) .. p_{n(n-1)}(y)` of the remaining sum in powers of
/// T.
pub fn radial_table(n: usize, table: &DetClassTable) -> Result<Vec<LaurentPoly>> {
    let open = open_cell_class(n, true, table)?;
    let rctx = radial_ctx();
    let mut num = radialize(n, &open.w);
    // divide the common factor (1+y)^n T^n out exactly
    let one_plus_y = LaurentPoly::one(&rctx).add(&LaurentPoly::var(&rctx, 1));
    for _ in 0..n {
        num = num.checked_div_exact(&one_plus_y).ok_or_else(|| {
            EqError::Invalid("common factor (1+y)^n does not divide the radial numerator".into())
        })?;
    }
    if num.min_exponent(0) < n as i32 {
        return Err(EqError::Invalid(
            "common factor T^n does not divide the radial numerator".into(),
        ));
    }
    let shift = [-(n as i32), 0];
    num = num.mul_monomial(&BigRational::one(), &shift);
    // split by T-powers into polynomials in y
    let top = n * (n - 1);
    let yctx = crate::context::VarContext::new(vec!["y"]);
    let mut out = vec![LaurentPoly::zero(&yctx); top + 1];
    for (e, c) in num.terms() {
        let k = e[0] as usize;
        if k > top {
            return Err(EqError::Invalid("radial numerator exceeds expected degree".into()));
        }
        out[k].add_term(vec![e[1]].into_boxed_slice(), c.clone());
    }
    Ok(out)
}

/// Positivity after `y = -1-d`, `T = 1+S`: every coefficient of the
/// substituted radial sum must be nonnegative.
pub fn positivity_check(n: usize, table: &DetClassTable) -> Result<bool> {
    let rows = radial_table(n, table)?;
    Ok(positivity_of_table(&rows))
}

/// The same check on an explicit table (used for synthetic inputs).
pub fn positivity_of_table(rows: &[LaurentPoly]) -> bool {
    let ds_ctx = crate::context::VarContext::new(vec!["d", "S"]);
    let one = LaurentPoly::one(&ds_ctx);
    let s_plus_1 = one.add(&LaurentPoly::var(&ds_ctx, 1));
    let minus_1_minus_d = LaurentPoly::from_int(&ds_ctx, -1).sub(&LaurentPoly::var(&ds_ctx, 0));
    let mut total = LaurentPoly::zero(&ds_ctx);
    for (k, p) in rows.iter().enumerate() {
        // p_k(-1-d) * (1+S)^k
        let mut sub = LaurentPoly::zero(&ds_ctx);
        for (e, c) in p.terms() {
            sub = sub.add(&minus_1_minus_d.pow(e[0] as u32).scale(c));
        }
        total = total.add(&sub.mul(&s_plus_1.pow(k as u32)));
    }
    use num_traits::Signed;
    let ok = total.terms().all(|(_, c)| !c.is_negative());
    ok
}

/// Chern-Schwartz-MacPherson limit of the radial determinant class: the
/// `y -> -1` limit along `T = exp(-(y+1) t)`.
pub fn csm_det(n: usize, table: &DetClassTable) -> Result<RatFun> {
    let det = det_local_class(n, true, table)?;
    let rctx = radial_ctx();
    let num = radialize(n, &det.w);
    let one_minus_t = LaurentPoly::one(&rctx).sub(&LaurentPoly::var(&rctx, 0));
    let value = RatFun::new(num, one_minus_t.pow((n * n) as u32))?;
    let tau = crate::context::VarContext::new(vec!["t"]);
    crate::localize::csm_limit(&value, &[Weight(vec![1])], &tau)
}
