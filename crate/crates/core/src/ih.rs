//! Intersection-cohomology Betti series of the block-product hypersurfaces:
//! kernel-dimension tables of the block weight spaces, the per-profile
//! series g_nu, the defect class, and the closed-form generating series with
//! an independent second route through the singular-cohomology Euler class.

use num::traits::{One, Signed, Zero};
use num::{BigInt, BigRational};

use crate::error::{Error, Result};
use crate::exact::{binomial, int_pow, multinomial, IntPoly, TateClass};
use crate::hodge::{euler_class, xld_cohomology};
use crate::linalg;

/// Maximum total block size accepted by the explicit matrix-rank oracle.
pub const VT_ORACLE_CAP: u32 = 24;

/// Dimension table of the graded space attached to a tuple of block sizes
/// t = (t_1, ..., t_l), 2 <= t_i, together with the dimensions of the
/// primitive parts (kernels of the lowering map).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VtTable {
    t: Vec<u32>,
    dims: Vec<BigInt>,
    prim_dims: Vec<BigInt>,
}

impl VtTable {
    pub fn new(t: &[u32]) -> Result<Self> {
        let dims = vt_dims(t)?;
        let prim_dims = vt_prim_dims(t)?;
        Ok(Self {
            t: t.to_vec(),
            dims,
            prim_dims,
        })
    }

    pub fn block_sizes(&self) -> &[u32] {
        &self.t
    }

    pub fn dims(&self) -> &[BigInt] {
        &self.dims
    }

    pub fn prim_dims(&self) -> &[BigInt] {
        &self.prim_dims
    }
}

fn validate_block_sizes(t: &[u32]) -> Result<()> {
    if t.is_empty() {
        return Err(Error::InvalidParameter("empty block-size tuple".into()));
    }
    if t.iter().any(|&ti| ti < 2) {
        return Err(Error::InvalidParameter(
            "block sizes must be at least 2".into(),
        ));
    }
    Ok(())
}

/// Coefficients of prod_i (1 + q + ... + q^{t_i - 2}).
pub fn vt_dims(t: &[u32]) -> Result<Vec<BigInt>> {
    validate_block_sizes(t)?;
    let mut p = IntPoly::one();
    for &ti in t {
        p = &p * &IntPoly::geometric((ti - 1) as usize);
    }
    Ok(p.coeffs().to_vec())
}

/// Dimensions of the primitive parts, by the closed form
/// tau_{< |t|/2 - l + 1} ( (1 - q) * prod_i (q^{t_i-1} - 1)/(q - 1) ).
pub fn vt_prim_dims(t: &[u32]) -> Result<Vec<BigInt>> {
    validate_block_sizes(t)?;
    let mut p = IntPoly::from_i64s(&[1, -1]);
    for &ti in t {
        p = &p * &IntPoly::geometric((ti - 1) as usize);
    }
    let total: i64 = t.iter().map(|&ti| ti as i64).sum();
    let l = t.len() as i64;
    // |t|/2 - l + 1
    let threshold = BigRational::new(BigInt::from(total - 2 * l + 2), BigInt::from(2));
    Ok(p.truncate_below(&threshold).coeffs().to_vec())
}

/// Independent route for `vt_prim_dims`: build the lowering map on the
/// explicit monomial-tuple basis and take kernel dimensions by exact rank.
pub fn vt_prim_dims_oracle(t: &[u32]) -> Result<Vec<BigInt>> {
    validate_block_sizes(t)?;
    let total: u32 = t.iter().sum();
    if total > VT_ORACLE_CAP {
        return Err(Error::CapExceeded {
            cap: VT_ORACLE_CAP as usize,
        });
    }
    let top: u32 = t.iter().map(|&ti| ti - 2).sum();
    let mut prev_basis = basis_tuples(t, 0);
    let mut out = Vec::new();
    for m in 0..=top {
        let basis = if m == 0 {
            prev_basis.clone()
        } else {
            basis_tuples(t, m)
        };
        let rank = if m == 0 {
            0
        } else {
            // matrix of the lowering map: one column per basis tuple of
            // level m, rows indexed by level m-1
            let row_index: std::collections::BTreeMap<&Vec<u32>, usize> =
                prev_basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
            let mut cols = Vec::with_capacity(basis.len());
            for tuple in &basis {
                let mut col = vec![BigRational::zero(); prev_basis.len()];
                for i in 0..tuple.len() {
                    if tuple[i] == 0 {
                        continue;
                    }
                    let mut lowered = tuple.clone();
                    lowered[i] -= 1;
                    let r = row_index[&lowered];
                    col[r] += BigRational::one();
                }
                cols.push(col);
            }
            linalg::rank(cols)
        };
        out.push(BigInt::from(basis.len() - rank));
        prev_basis = basis;
    }
    let mut trimmed = out;
    while trimmed.last().is_some_and(|c| c.is_zero()) {
        trimmed.pop();
    }
    Ok(trimmed)
}

fn basis_tuples(t: &[u32], m: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(t.len());
    fill_tuples(t, m, &mut current, &mut out);
    out
}

fn fill_tuples(t: &[u32], remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if current.len() == t.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    let cap = t[current.len()] - 2;
    for v in 0..=cap.min(remaining) {
        current.push(v);
        fill_tuples(t, remaining - v, current, out);
        current.pop();
    }
}

/// Block-size profile nu = (nu_2, ..., nu_d): nu_k counts blocks of size k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuProfile {
    counts: Vec<u64>,
}

impl NuProfile {
    /// counts[k - 2] is the number of blocks of size k, for k = 2..=d.
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidParameter("empty profile".into()));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn block_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max_size(&self) -> usize {
        self.counts.len() + 1
    }

    /// |nu| = sum_k k * nu_k, the total number of variables involved.
    pub fn norm(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 2) * c)
            .sum()
    }
}

/// All profiles with nu_2 + ... + nu_d = l and nu_d != l, in lexicographic
/// order.
pub fn nu_profiles(l: usize, d: usize) -> Result<Vec<NuProfile>> {
    if l < 1 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "nu_profiles: need l >= 1 and d >= 2, got ({l}, {d})"
        )));
    }
    let mut out = Vec::new();
    let mut current = vec![0u64; d - 1];
    fill_profiles(l as u64, d - 1, 0, &mut current, &mut out);
    out.retain(|p| p.counts[d - 2] != l as u64);
    Ok(out)
}

fn fill_profiles(
    remaining: u64,
    parts: usize,
    idx: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<NuProfile>,
) {
    if idx + 1 == parts {
        current[idx] = remaining;
        out.push(NuProfile {
            counts: current.clone(),
        });
        current[idx] = 0;
        return;
    }
    for v in 0..=remaining {
        current[idx] = v;
        fill_profiles(remaining - v, parts, idx + 1, current, out);
    }
    current[idx] = 0;
}

/// The series attached to one profile:
/// (-1)^{|nu|} (q^{ld - |nu|} - 1)/(q - 1)
///   * tau_{< |nu|/2} ( (1 - q) q^{l-1} prod_k ((q^{k-1} - 1)/(q - 1))^{nu_k} ).
pub fn g_nu(nu: &NuProfile, l: usize, d: usize) -> Result<IntPoly> {
    if nu.max_size() != d {
        return Err(Error::InvalidParameter(format!(
            "profile has maximal block size {} but d = {d}",
            nu.max_size()
        )));
    }
    if nu.block_count() != l as u64 {
        return Err(Error::InvalidParameter(format!(
            "profile has {} blocks but l = {l}",
            nu.block_count()
        )));
    }
    if nu.counts()[d - 2] == l as u64 {
        return Err(Error::InvalidParameter(
            "profile with all blocks of maximal size is excluded".into(),
        ));
    }
    let norm = nu.norm();
    let mut inner = &IntPoly::from_i64s(&[1, -1]) * &IntPoly::monomial(BigInt::one(), l - 1);
    for (i, &count) in nu.counts().iter().enumerate() {
        let k = i + 2;
        inner = &inner * &IntPoly::geometric(k - 1).pow(count as u32);
    }
    let threshold = BigRational::new(BigInt::from(norm), BigInt::from(2));
    let tau = inner.truncate_below(&threshold);
    let series = IntPoly::geometric(l * d - norm as usize);
    let signed = if norm % 2 == 1 { -&tau } else { tau };
    Ok(&series * &signed)
}

/// Alternating-sum class of the defect object, as a polynomial in u:
/// sum over profiles of multinomial(l; nu) * prod_k binom(d, k)^{nu_k} * g_nu.
pub fn defect_class(l: usize, d: usize) -> Result<IntPoly> {
    let mut total = IntPoly::zero();
    for nu in nu_profiles(l, d)? {
        let parts: Vec<i64> = nu.counts().iter().map(|&c| c as i64).collect();
        let mut weight = multinomial(l as i64, &parts)?;
        for (i, &count) in nu.counts().iter().enumerate() {
            let k = i as i64 + 2;
            weight *= int_pow(&binomial(d as i64, k)?, count as u32);
        }
        let term = g_nu(&nu, l, d)?;
        let scaled = IntPoly::from_coeffs(term.coeffs().iter().map(|c| c * &weight).collect());
        total = &total + &scaled;
    }
    Ok(total)
}

/// Closed-form generating series of the intersection Betti numbers: the
/// coefficient of q^i is dim IH^{2i}. Odd intersection cohomology vanishes;
/// a nonnegativity guard rejects any input that would contradict purity.
pub fn ih_series(l: usize, d: usize) -> Result<IntPoly> {
    if l < 1 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "ih_series: need l >= 1 and d >= 2, got ({l}, {d})"
        )));
    }
    let hyper = IntPoly::geometric(l * d - 1);
    let base = &IntPoly::monomial(BigInt::one(), d - 1) - &IntPoly::from_i64s(&[-1, 1]).pow((d - 1) as u32);
    let middle = &base.pow(l as u32) * &IntPoly::monomial(BigInt::one(), l - 1);
    let series = &(&hyper + &middle) + &defect_class(l, d)?;
    if series.coeffs().iter().any(|c| c.is_negative()) {
        return Err(Error::PurityViolated(format!(
            "series for ({l}, {d}) has a negative coefficient: {:?}",
            series.coeffs()
        )));
    }
    Ok(series)
}

/// Independent route: defect class plus the Euler class of the singular
/// cohomology (with hyperplane powers), read as a Betti series by purity.
pub fn ih_oracle(l: usize, d: usize) -> Result<IntPoly> {
    let defect = defect_class(l, d)?;
    let euler = euler_class(&xld_cohomology(l, d)?, true)?;
    let total = &TateClass::from_poly(&defect) + &euler;
    total.into_betti_series()
}

/// Coefficient-list palindromicity against the expected degree.
pub fn is_palindromic(p: &IntPoly, degree: usize) -> bool {
    if p.degree() != Some(degree) {
        return false;
    }
    (0..=degree).all(|i| p.coeff(i) == p.coeff(degree - i))
}

/// Nondecreasing coefficients up to the middle exponent.
pub fn is_unimodal_to_middle(p: &IntPoly) -> bool {
    let Some(deg) = p.degree() else { return true };
    (1..=deg / 2).all(|i| p.coeff(i) >= p.coeff(i - 1))
}
