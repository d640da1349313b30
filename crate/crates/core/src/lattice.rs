//! The character lattice of the torus acting on the affine cone over the
//! block-product hypersurface: the quotient M = Z^{l x d} / L where L is
//! generated by eps_1 - eps_i (eps_i the i-th block row sum), canonical
//! coset representatives, the piecewise-linear grading function phi, the
//! facet functionals of the generator cone, graded point enumeration, and
//! a Hilbert-function cross-check against the coordinate ring.


use num::traits::Zero;
use num::BigInt;

use crate::error::{Error, Result};
use crate::exact::{binomial, IntPoly};

/// Default cap on the number of enumerated lattice points.
pub const DEFAULT_ENUM_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeCtx {
    l: usize,
    d: usize,
    cap: usize,
}

impl LatticeCtx {
    pub fn new(l: usize, d: usize) -> Result<Self> {
        if l < 1 || d < 2 {
            return Err(Error::InvalidParameter(format!(
                "lattice context needs l >= 1 and d >= 2, got ({l}, {d})"
            )));
        }
        Ok(Self {
            l,
            d,
            cap: DEFAULT_ENUM_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Rank of M: l*d - l + 1.
    pub fn rank(&self) -> usize {
        self.l * self.d - self.l + 1
    }
}

/// Canonical representative of a coset in M: an l x d integer matrix whose
/// row sums, for rows 2..l, lie in [0, d-1]. Row 1 absorbs all shifts, so
/// equality of values is equality of representations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVec {
    l: usize,
    d: usize,
    rep: Vec<i64>,
}

impl LatticeVec {
    pub fn rep(&self) -> &[i64] {
        &self.rep
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.rep[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.rep.chunks(self.d)
    }

    /// Total degree: the sum of all entries, well defined on cosets.
    pub fn deg(&self) -> i64 {
        self.rep.iter().sum()
    }

    /// phi(u): the sum over rows of the minimal entry, well defined on
    /// cosets. Vanishes exactly on the boundary of the generator cone.
    pub fn phi(&self) -> i64 {
        self.rows().map(|r| r.iter().copied().min().unwrap()).sum()
    }

    /// Membership in the cone spanned by the generators e_ij.
    pub fn in_cone(&self) -> bool {
        self.phi() >= 0
    }

    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(|&x| x == 0)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.l != other.l || self.d != other.d {
            return Err(Error::InvalidParameter(
                "lattice vectors from different lattices".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let raw: Vec<i64> = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(a, b)| a + b)
            .collect();
        canonicalize(LatticeCtx::new(self.l, self.d)?, &raw)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let raw: Vec<i64> = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(a, b)| a - b)
            .collect();
        canonicalize(LatticeCtx::new(self.l, self.d)?, &raw)
    }

    /// Injective linear coordinates on M: the in-row differences
    /// a_ij - a_id for j < d, followed by the total degree.
    pub fn embed(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.l * (self.d - 1) + 1);
        for row in self.rows() {
            let last = row[self.d - 1];
            for &v in &row[..self.d - 1] {
                out.push(v - last);
            }
        }
        out.push(self.deg());
        out
    }
}

/// Canonical representative of the coset of `raw` (entries row-major).
pub fn canonicalize(ctx: LatticeCtx, raw: &[i64]) -> Result<LatticeVec> {
    let (l, d) = (ctx.l, ctx.d);
    if raw.len() != l * d {
        return Err(Error::InvalidParameter(format!(
            "expected {} entries, got {}",
            l * d,
            raw.len()
        )));
    }
    let mut rep = raw.to_vec();
    let mut shift_first = 0i64;
    for i in 1..l {
        let s: i64 = rep[i * d..(i + 1) * d].iter().sum();
        let k = s.div_euclid(d as i64);
        if k != 0 {
            for v in &mut rep[i * d..(i + 1) * d] {
                *v -= k;
            }
            shift_first += k;
        }
    }
    if shift_first != 0 {
        for v in &mut rep[..d] {
            *v += shift_first;
        }
    }
    Ok(LatticeVec { l, d, rep })
}

/// The generator e_ij (0-indexed block i, slot j).
pub fn generator(ctx: LatticeCtx, i: usize, j: usize) -> Result<LatticeVec> {
    if i >= ctx.l || j >= ctx.d {
        return Err(Error::InvalidParameter(format!(
            "generator index ({i}, {j}) out of range"
        )));
    }
    let mut raw = vec![0i64; ctx.l * ctx.d];
    raw[i * ctx.d + j] = 1;
    canonicalize(ctx, &raw)
}

/// The common image eps of the block row sums; its canonical
/// representative is the all-ones first row.
pub fn epsilon(ctx: LatticeCtx) -> LatticeVec {
    let mut raw = vec![0i64; ctx.l * ctx.d];
    raw[..ctx.d].fill(1);
    canonicalize(ctx, &raw).expect("epsilon is well formed")
}

pub fn zero(ctx: LatticeCtx) -> LatticeVec {
    canonicalize(ctx, &vec![0i64; ctx.l * ctx.d]).expect("zero is well formed")
}

/// Unique decomposition u = phi(u) * eps + sum b_ij e_ij with b >= 0 and
/// every row of b attaining 0. Errors outside the cone.
pub fn decompose(v: &LatticeVec) -> Result<(i64, Vec<i64>)> {
    if !v.in_cone() {
        return Err(Error::InvalidParameter(
            "decompose: element lies outside the cone".into(),
        ));
    }
    let (l, d) = (v.l, v.d);
    let phi = v.phi();
    let mut b = v.rep.clone();
    let mut carried = 0i64;
    for i in 1..l {
        let m = *b[i * d..(i + 1) * d].iter().min().unwrap();
        for e in &mut b[i * d..(i + 1) * d] {
            *e -= m;
        }
        carried += m;
    }
    for e in &mut b[..d] {
        *e += carried - phi;
    }
    debug_assert!(b.iter().all(|&x| x >= 0));
    debug_assert!(b.chunks(d).all(|r| r.contains(&0)));
    Ok((phi, b))
}

/// Inverse of `decompose`.
pub fn compose(ctx: LatticeCtx, c: i64, b: &[i64]) -> Result<LatticeVec> {
    if b.len() != ctx.l * ctx.d {
        return Err(Error::InvalidParameter(format!(
            "expected {} entries, got {}",
            ctx.l * ctx.d,
            b.len()
        )));
    }
    let mut raw = b.to_vec();
    for e in &mut raw[..ctx.d] {
        *e += c;
    }
    canonicalize(ctx, &raw)
}

/// Generating series of per-row patterns: the coefficient of x^s counts
/// nonnegative d-tuples with sum s and minimum 0.
fn row_count_series(d: usize, max_deg: usize) -> Result<IntPoly> {
    let mut coeffs = Vec::with_capacity(max_deg + 1);
    for s in 0..=max_deg as i64 {
        let all = binomial(s + d as i64 - 1, d as i64 - 1)?;
        // tuples with all entries >= 1; none exist for s = 0
        let positive = if s >= 1 {
            binomial(s - 1, d as i64 - 1)?
        } else {
            BigInt::zero()
        };
        coeffs.push(all - positive);
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

/// Number of cone lattice points of a given total degree, by counting the
/// canonical decompositions (phi coefficient plus min-0 rows).
pub fn count_points(ctx: LatticeCtx, k: i64) -> Result<BigInt> {
    if k < 0 {
        return Err(Error::InvalidParameter("negative degree".into()));
    }
    let series = row_count_series(ctx.d, k as usize)?;
    let g = series.pow_trunc(ctx.l as u32, k as usize);
    let mut total = BigInt::zero();
    let d = ctx.d as i64;
    for c in 0..=(k / d) {
        total += g.coeff((k - c * d) as usize);
    }
    Ok(total)
}

fn min_zero_rows(d: usize, s: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    fn rec(d: usize, remaining: i64, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if current.len() + 1 == d {
            current.push(remaining);
            if current.contains(&0) {
                out.push(current.clone());
            }
            current.pop();
            return;
        }
        for v in 0..=remaining {
            current.push(v);
            rec(d, remaining - v, current, out);
            current.pop();
        }
    }
    rec(d, s, &mut current, &mut out);
    out
}

/// All cone lattice points of total degree k, as canonical representatives
/// in increasing lexicographic order. Errors if the point count exceeds
/// the context cap.
pub fn enumerate(ctx: LatticeCtx, k: i64) -> Result<Vec<LatticeVec>> {
    if k < 0 {
        return Err(Error::InvalidParameter("negative degree".into()));
    }
    let expected = count_points(ctx, k)?;
    if expected > BigInt::from(ctx.cap as u64) {
        return Err(Error::CapExceeded { cap: ctx.cap });
    }
    let d = ctx.d as i64;
    let mut out = Vec::new();
    for c in 0..=(k / d) {
        let s = k - c * d;
        let mut b = vec![0i64; ctx.l * ctx.d];
        distribute_rows(ctx, c, s, 0, &mut b, &mut out)?;
    }
    out.sort_unstable();
    debug_assert_eq!(BigInt::from(out.len() as u64), expected);
    Ok(out)
}

fn distribute_rows(
    ctx: LatticeCtx,
    c: i64,
    remaining: i64,
    row: usize,
    b: &mut Vec<i64>,
    out: &mut Vec<LatticeVec>,
) -> Result<()> {
    if row == ctx.l {
        if remaining == 0 {
            out.push(compose(ctx, c, b)?);
        }
        return Ok(());
    }
    // the last row takes whatever is left
    let lo = if row + 1 == ctx.l { remaining } else { 0 };
    for s in lo..=remaining {
        for pattern in min_zero_rows(ctx.d, s) {
            b[row * ctx.d..(row + 1) * ctx.d].copy_from_slice(&pattern);
            distribute_rows(ctx, c, remaining - s, row + 1, b, out)?;
        }
        b[row * ctx.d..(row + 1) * ctx.d].fill(0);
    }
    Ok(())
}

/// Counts N_m of cone points with phi = m at total degree N*d*(l-1), for
/// m = 0..=(l-1)*N.
pub fn count_by_phi(ctx: LatticeCtx, n: i64) -> Result<Vec<BigInt>> {
    if n < 0 {
        return Err(Error::InvalidParameter("negative scaling".into()));
    }
    let k = n * ctx.d as i64 * (ctx.l as i64 - 1);
    let top = (ctx.l as i64 - 1) * n;
    let series = row_count_series(ctx.d, k as usize)?;
    let g = series.pow_trunc(ctx.l as u32, k as usize);
    Ok((0..=top)
        .map(|m| g.coeff((k - m * ctx.d as i64) as usize))
        .collect())
}

/// Two independently computed sides of the Hilbert-function identity at
/// degree k: the graded pieces of the cone coordinate ring counted through
/// the phi-decomposition versus the hypersurface Hilbert function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertCheck {
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl HilbertCheck {
    pub fn ok(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Sum of binom(phi(u) + l - 2, l - 2) over degree-k cone points against
/// dim R_k = binom(ld-1+k, ld-1) - binom(ld-1+k-d, ld-1).
pub fn hilbert_crosscheck(ctx: LatticeCtx, k: i64) -> Result<HilbertCheck> {
    if ctx.l < 2 {
        return Err(Error::InvalidParameter(
            "hilbert_crosscheck needs l >= 2".into(),
        ));
    }
    let mut lhs = BigInt::zero();
    for point in enumerate(ctx, k)? {
        lhs += binomial(point.phi() + ctx.l as i64 - 2, ctx.l as i64 - 2)?;
    }
    let amb = (ctx.l * ctx.d - 1) as i64;
    let rhs = binomial(amb + k, amb)? - binomial(amb + k - ctx.d as i64, amb)?;
    Ok(HilbertCheck { lhs, rhs })
}

/// One facet functional of the generator cone: it picks the selected slot
/// from each block row and sums. There are d^l of them; their minimum over
/// all selections is phi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetFunctional {
    selector: Vec<usize>,
}

impl FacetFunctional {
    pub fn selector(&self) -> &[usize] {
        &self.selector
    }

    pub fn apply(&self, v: &LatticeVec) -> i64 {
        self.selector
            .iter()
            .enumerate()
            .map(|(i, &j)| v.row(i)[j])
            .sum()
    }
}

/// All d^l facet functionals, in lexicographic selector order.
pub fn facets(ctx: LatticeCtx) -> Result<Vec<FacetFunctional>> {
    let count = (ctx.d as u128).checked_pow(ctx.l as u32);
    match count {
        Some(c) if c <= ctx.cap as u128 => {}
        _ => return Err(Error::CapExceeded { cap: ctx.cap }),
    }
    let mut out = Vec::new();
    let mut selector = vec![0usize; ctx.l];
    loop {
        out.push(FacetFunctional {
            selector: selector.clone(),
        });
        let mut i = ctx.l;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            selector[i] += 1;
            if selector[i] < ctx.d {
                break;
            }
            selector[i] = 0;
        }
    }
}
