//! Fixed-point models of torus actions.
//!
//! A [`SpaceModel`] presents a torus action as a finite list of fixed points
//! with tangent-weight lists, optionally with the dimensions of an algebraic
//! cell decomposition. Built-in constructors cover affine and projective
//! spaces, Grassmannians, and the codimension-one Schubert variety of
//! Gr_2(C^4); anything else enters through the JSON schema.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{EqError, Result};
use crate::poly::LaurentPoly;
use crate::weight::Weight;

/// A fixed point with its tangent data.
///
/// `tangent` (the subvariety tangent weights) is present iff the point is a
/// smooth point of the subvariety; for the ambient space itself it equals
/// `ambient`.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub label: String,
    pub ambient: Vec<Weight>,
    pub tangent: Option<Vec<Weight>>,
}

/// A torus action presented by its fixed points.
#[derive(Clone, Debug)]
pub struct SpaceModel {
    pub rank: usize,
    pub dim: usize,
    pub points: Vec<FixedPoint>,
    pub cell_dims: Option<Vec<usize>>,
}

impl SpaceModel {
    fn validate(&self) -> Result<()> {
        for p in &self.points {
            for w in p.ambient.iter().chain(p.tangent.iter().flatten()) {
                if w.rank() != self.rank {
                    return Err(EqError::Invalid(format!(
                        "weight rank mismatch at point '{}'",
                        p.label
                    )));
                }
                if w.is_zero() {
                    return Err(EqError::ZeroWeight);
                }
            }
        }
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                if self.points[i].label == self.points[j].label {
                    return Err(EqError::Invalid(format!(
                        "duplicate fixed-point label '{}'",
                        self.points[i].label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn point(&self, label: &str) -> Option<&FixedPoint> {
        self.points.iter().find(|p| p.label == label)
    }
}

// ---------------------------------------------------------------------------
// Subsets as Grassmannian fixed points
// ---------------------------------------------------------------------------

/// A k-element subset of {0..n-1} indexing a coordinate plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetPoint(pub Vec<usize>);

impl SubsetPoint {
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        format!("p{}", parts.join("_"))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }
}

/// All k-subsets of {0..n-1} in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<SubsetPoint> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<SubsetPoint>) {
        if cur.len() == k {
            out.push(SubsetPoint(cur.clone()));
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Tangent weights of the Grassmannian at the coordinate subspace `I`:
/// `chars[j] - chars[i]` for `i` in `I`, `j` outside.
pub fn grassmannian_tangent_weights(chars: &[Weight], point: &SubsetPoint) -> Vec<Weight> {
    let mut ws = Vec::new();
    for &i in &point.0 {
        for (j, cj) in chars.iter().enumerate() {
            if !point.contains(j) {
                ws.push(cj.sub(&chars[i]));
            }
        }
    }
    ws
}

fn check_distinct_chars(chars: &[Weight]) -> Result<()> {
    for i in 0..chars.len() {
        for j in i + 1..chars.len() {
            if chars[i] == chars[j] {
                return Err(EqError::RepeatedCharacters);
            }
        }
    }
    Ok(())
}

/// The Grassmannian Gr_k(C^n) with the torus acting through the given
/// characters (one per coordinate line, pairwise distinct).
pub fn grassmannian_space(k: usize, n: usize, chars: &[Weight]) -> Result<SpaceModel> {
    if k == 0 || k >= n {
        return Err(EqError::Invalid("need 0 < k < n".into()));
    }
    if chars.len() != n {
        return Err(EqError::Invalid("need one character per coordinate".into()));
    }
    check_distinct_chars(chars)?;
    let rank = chars[0].rank();
    let dim = k * (n - k);
    let mut points = Vec::new();
    for subset in k_subsets(n, k) {
        let ws = grassmannian_tangent_weights(chars, &subset);
        points.push(FixedPoint {
            label: subset.label(),
            ambient: ws,
            tangent: None,
        });
    }
    let space = SpaceModel {
        rank,
        dim,
        points,
        cell_dims: Some(grassmannian_cell_dims(k, n - k)),
    };
    space.validate()?;
    Ok(space)
}

/// Projective space P^n with one fixed point per character; tangent weights
/// at p_i are `t_j - t_i`.
pub fn projective_space(chars: &[Weight]) -> Result<SpaceModel> {
    if chars.is_empty() {
        return Err(EqError::Invalid("need at least one character".into()));
    }
    check_distinct_chars(chars)?;
    let n = chars.len() - 1;
    let rank = chars[0].rank();
    let mut points = Vec::new();
    for (i, ci) in chars.iter().enumerate() {
        let ws: Vec<Weight> = chars
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, cj)| cj.sub(ci))
            .collect();
        points.push(FixedPoint {
            label: format!("p{}", i),
            ambient: ws,
            tangent: None,
        });
    }
    let space = SpaceModel {
        rank,
        dim: n,
        points,
        cell_dims: Some((0..=n).collect()),
    };
    space.validate()?;
    Ok(space)
}

// ---------------------------------------------------------------------------
// The codimension-one Schubert condition
// ---------------------------------------------------------------------------

/// Membership of a Grassmannian fixed point in the Schubert variety
/// `{V : V meets the span of the s-indexed coordinates}`.
pub fn schubert_membership(point: &SubsetPoint, s_indices: &[usize]) -> bool {
    point.0.iter().any(|i| s_indices.contains(i))
}

/// Tangent weights of the codimension-one Schubert variety at a smooth fixed
/// point: the point must contain exactly one s-index, and the weight moving
/// it off the Schubert condition (into the unique free t-line) is removed
/// from the Grassmannian tangent weights.
pub fn schubert_smooth_tangent_weights(
    chars: &[Weight],
    point: &SubsetPoint,
    s_indices: &[usize],
) -> Result<Vec<Weight>> {
    let in_s: Vec<usize> = point
        .0
        .iter()
        .copied()
        .filter(|i| s_indices.contains(i))
        .collect();
    if in_s.is_empty() {
        return Err(EqError::Invalid("point is not in the Schubert variety".into()));
    }
    if in_s.len() > 1 {
        return Err(EqError::Invalid(
            "point is a singular point of the Schubert variety".into(),
        ));
    }
    let a = in_s[0];
    // the t-indices absent from the point; exactly one in the smooth case
    let free_t: Vec<usize> = (0..chars.len())
        .filter(|j| !s_indices.contains(j) && !point.contains(*j))
        .collect();
    if free_t.len() != 1 {
        return Err(EqError::Invalid(
            "smooth Schubert points have exactly one free t-line".into(),
        ));
    }
    let removed = chars[free_t[0]].sub(&chars[a]);
    let mut ws = grassmannian_tangent_weights(chars, point);
    let pos = ws
        .iter()
        .position(|w| *w == removed)
        .expect("removed weight is a tangent weight");
    ws.remove(pos);
    Ok(ws)
}

// ---------------------------------------------------------------------------
// Cells and chi_y
// ---------------------------------------------------------------------------

/// Number of partitions of each size inside a k x m box: entry `s` counts
/// partitions of `s` with at most k parts, each at most m.
pub fn partitions_in_box(k: usize, m: usize) -> Vec<u64> {
    // f[rows][size]: partitions of `size` into exactly `rows` parts of value
    // <= m, built by inserting rows of each width v in increasing order.
    let top = k * m;
    let mut f = vec![vec![0u64; top + 1]; k + 1];
    f[0][0] = 1;
    for v in 1..=m {
        // increasing row order lets a width repeat (multiple rows of size v)
        for rows in 0..k {
            for size in 0..=top.saturating_sub(v) {
                if f[rows][size] != 0 {
                    f[rows + 1][size + v] += f[rows][size];
                }
            }
        }
    }
    let mut out = vec![0u64; top + 1];
    for row in &f {
        for (size, &c) in row.iter().enumerate() {
            out[size] += c;
        }
    }
    out
}

/// Cell dimensions of Gr_k(C^(k+m)): one cell of dimension `km - |lambda|`
/// for each partition `lambda` in the k x m box.
pub fn grassmannian_cell_dims(k: usize, m: usize) -> Vec<usize> {
    let counts = partitions_in_box(k, m);
    let top = k * m;
    let mut dims = Vec::new();
    for (size, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            dims.push(top - size);
        }
    }
    dims.sort_unstable();
    dims
}

/// Cell dimensions of the codimension-one Schubert variety in Gr_n(C^2n):
/// all Grassmannian cells except the open one (partitions != empty).
pub fn schubert_cell_dims(n: usize) -> Vec<usize> {
    let mut dims = grassmannian_cell_dims(n, n);
    let top = n * n;
    let pos = dims.iter().position(|&d| d == top).expect("open cell");
    dims.remove(pos);
    dims
}

/// `chi_y` of a cell decomposition: sum over cells of `(-y)^dim`, returned
/// as a polynomial in a context that contains `y` at `y_index`.
pub fn cell_chi_y(
    cell_dims: &[usize],
    ctx: &std::sync::Arc<crate::context::VarContext>,
    y_index: usize,
) -> LaurentPoly {
    let mut p = LaurentPoly::zero(ctx);
    for &d in cell_dims {
        let mut e = vec![0i32; ctx.len()];
        e[y_index] = d as i32;
        let sign = if d % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        p.add_term(e.into_boxed_slice(), sign);
    }
    p
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

/// Encode per the schema
/// `{"rank":r,"dim":n,"points":[{"label":..,"ambient":[[..]],"tangent":[[..]]|null}],"cells":[..]}`.
pub fn space_to_json(space: &SpaceModel) -> serde_json::Value {
    use serde_json::{json, Value};
    let weight_rows = |ws: &[Weight]| -> Value {
        Value::from(
            ws.iter()
                .map(|w| Value::from(w.0.clone()))
                .collect::<Vec<_>>(),
        )
    };
    let points: Vec<Value> = space
        .points
        .iter()
        .map(|p| {
            json!({
                "label": p.label,
                "ambient": weight_rows(&p.ambient),
                "tangent": p.tangent.as_ref().map(|t| weight_rows(t)),
            })
        })
        .collect();
    let mut obj = json!({
        "rank": space.rank,
        "dim": space.dim,
        "points": points,
    });
    if let Some(cells) = &space.cell_dims {
        obj["cells"] = serde_json::Value::from(cells.clone());
    }
    obj
}

pub fn space_from_json(v: &serde_json::Value) -> Result<SpaceModel> {
    let obj = v
        .as_object()
        .ok_or_else(|| EqError::Json("expected object".into()))?;
    let rank = obj
        .get("rank")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| EqError::Json("missing rank".into()))? as usize;
    let dim = obj
        .get("dim")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| EqError::Json("missing dim".into()))? as usize;
    let read_weights = |v: &serde_json::Value| -> Result<Vec<Weight>> {
        v.as_array()
            .ok_or_else(|| EqError::Json("weights must be an array".into()))?
            .iter()
            .map(|row| {
                let row = row
                    .as_array()
                    .ok_or_else(|| EqError::Json("weight must be an array".into()))?;
                let coeffs: Result<Vec<i64>> = row
                    .iter()
                    .map(|x| {
                        x.as_i64()
                            .ok_or_else(|| EqError::Json("weight entries are integers".into()))
                    })
                    .collect();
                Ok(Weight(coeffs?))
            })
            .collect()
    };
    let mut points = Vec::new();
    for p in obj
        .get("points")
        .and_then(|x| x.as_array())
        .ok_or_else(|| EqError::Json("missing points".into()))?
    {
        let po = p
            .as_object()
            .ok_or_else(|| EqError::Json("point must be an object".into()))?;
        let label = po
            .get("label")
            .and_then(|x| x.as_str())
            .ok_or_else(|| EqError::Json("missing label".into()))?
            .to_string();
        let ambient = read_weights(
            po.get("ambient")
                .ok_or_else(|| EqError::Json("missing ambient".into()))?,
        )?;
        let tangent = match po.get("tangent") {
            None | Some(serde_json::Value::Null) => None,
            Some(t) => Some(read_weights(t)?),
        };
        points.push(FixedPoint { label, ambient, tangent });
    }
    let cell_dims = match obj.get("cells") {
        None | Some(serde_json::Value::Null) => None,
        Some(c) => Some(
            c.as_array()
                .ok_or_else(|| EqError::Json("cells must be an array".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|d| d as usize)
                        .ok_or_else(|| EqError::Json("cell dims are integers".into()))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let space = SpaceModel { rank, dim, points, cell_dims };
    space.validate()?;
    Ok(space)
}

// ---------------------------------------------------------------------------
// Standard instances
// ---------------------------------------------------------------------------

/// P^2 with characters t0, t1, t2 (the worked projective-plane example).
pub fn p2_space() -> SpaceModel {
    let chars: Vec<Weight> = (0..3).map(|j| Weight::basis(3, j)).collect();
    projective_space(&chars).expect("distinct characters")
}

/// Characters of C^2n = C^n_s + C^n_t for the determinant program: the s
/// block acts through negative characters `-s_i`, the t block through `t_j`.
pub fn det_characters(n: usize) -> Vec<Weight> {
    let rank = 2 * n;
    let mut chars = Vec::with_capacity(rank);
    for i in 0..n {
        chars.push(Weight::basis(rank, i).neg());
    }
    for j in 0..n {
        chars.push(Weight::basis(rank, n + j));
    }
    chars
}
