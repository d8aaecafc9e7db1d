//! Weights (torus characters) and the variable conventions attached to a
//! torus rank.
//!
//! A [`Weight`] is an integer vector in the character lattice Z^r. It can be
//! read additively as the linear form `sum_j a_j t_j` or multiplicatively as
//! the Laurent monomial `prod_j T_j^(a_j)` under the convention
//! `T_j = exp(-t_j)`.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use crate::context::VarContext;
use crate::error::{EqError, Result};
use crate::poly::LaurentPoly;
use crate::ratfun::RatFun;

/// An integer character vector of length equal to the torus rank.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Weight {
        Weight(vec![0; rank])
    }

    /// The j-th basis character.
    pub fn basis(rank: usize, j: usize) -> Weight {
        let mut v = vec![0; rank];
        v[j] = 1;
        Weight(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|&x| -x).collect())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("weight overflow"))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|&x| x * k).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.0)
    }
}

/// The pair of variable contexts attached to a torus of rank r:
/// additive names for linear forms (Euler classes, residues) and
/// multiplicative names plus a trailing `y` for localized classes.
#[derive(Clone, Debug)]
pub struct ClassVars {
    rank: usize,
    add_ctx: Arc<VarContext>,
    mult_ctx: Arc<VarContext>,
}

impl ClassVars {
    /// Build from explicit additive and multiplicative variable names; `y`
    /// is appended to the multiplicative context.
    pub fn new(add_names: Vec<String>, mult_names: Vec<String>) -> ClassVars {
        assert_eq!(add_names.len(), mult_names.len());
        let rank = add_names.len();
        let mut m = mult_names;
        m.push("y".to_string());
        ClassVars {
            rank,
            add_ctx: VarContext::new(add_names),
            mult_ctx: VarContext::new(m),
        }
    }

    /// Names t{start}..t{start+r-1} / T{start}.. for a JSON-supplied space.
    pub fn indexed(rank: usize, start: usize) -> ClassVars {
        let add = (0..rank).map(|i| format!("t{}", start + i)).collect();
        let mult = (0..rank).map(|i| format!("T{}", start + i)).collect();
        ClassVars::new(add, mult)
    }

    /// Names s1..sn,t1..tn / S1..Sn,T1..Tn for the determinant program on
    /// Gr_n(C^2n).
    pub fn split_st(n: usize) -> ClassVars {
        let mut add = Vec::with_capacity(2 * n);
        let mut mult = Vec::with_capacity(2 * n);
        for i in 1..=n {
            add.push(format!("s{}", i));
            mult.push(format!("S{}", i));
        }
        for i in 1..=n {
            add.push(format!("t{}", i));
            mult.push(format!("T{}", i));
        }
        ClassVars::new(add, mult)
    }

    /// Rank-1 convention with bare names `t` / `T` (quasihomogeneous cusp).
    pub fn single() -> ClassVars {
        ClassVars::new(vec!["t".into()], vec!["T".into()])
    }

    /// Rank-2 convention `t1,t2` / `T1,T2` (Whitney umbrella).
    pub fn pair() -> ClassVars {
        ClassVars::new(
            vec!["t1".into(), "t2".into()],
            vec!["T1".into(), "T2".into()],
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add_ctx(&self) -> &Arc<VarContext> {
        &self.add_ctx
    }

    pub fn mult_ctx(&self) -> &Arc<VarContext> {
        &self.mult_ctx
    }

    /// Index of `y` in the multiplicative context.
    pub fn y_index(&self) -> usize {
        self.rank
    }

    pub fn y(&self) -> RatFun {
        RatFun::var(&self.mult_ctx, self.y_index())
    }

    fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank {
            return Err(EqError::Invalid(format!(
                "weight rank {} does not match torus rank {}",
                w.rank(),
                self.rank
            )));
        }
        Ok(())
    }

    /// The additive linear form `sum_j a_j t_j`.
    pub fn linear_form(&self, w: &Weight) -> Result<LaurentPoly> {
        self.check_rank(w)?;
        let mut p = LaurentPoly::zero(&self.add_ctx);
        for (j, &a) in w.0.iter().enumerate() {
            if a != 0 {
                let mut e = vec![0i32; self.add_ctx.len()];
                e[j] = 1;
                p.add_term(
                    e.into_boxed_slice(),
                    BigRational::from_integer(a.into()),
                );
            }
        }
        Ok(p)
    }

    /// The multiplicative monomial `exp(-w) = prod_j T_j^(a_j)`.
    pub fn monomial(&self, w: &Weight) -> Result<LaurentPoly> {
        self.check_rank(w)?;
        let mut e = vec![0i32; self.mult_ctx.len()];
        for (j, &a) in w.0.iter().enumerate() {
            e[j] = i32::try_from(a).expect("weight exceeds exponent range");
        }
        Ok(LaurentPoly::monomial(
            &self.mult_ctx,
            BigRational::one(),
            &e,
        ))
    }

    /// `1 - exp(-w)` as a rational function over the multiplicative context.
    pub fn one_minus_monomial(&self, w: &Weight) -> Result<RatFun> {
        let m = self.monomial(w)?;
        Ok(RatFun::from_poly(
            LaurentPoly::one(&self.mult_ctx).sub(&m),
        ))
    }
}
