//! Torus stability: Hilbert-Mumford weights of monomial supports, exact
//! polystability of weight supports via a rational linear program, the
//! first-order deformation weights of the block-product hypersurface, the
//! per-block-count family verdicts, the appending inequality for weight
//! systems, and automorphism-group data.

use std::collections::BTreeSet;

use num::traits::{One, Signed, ToPrimitive, Zero};
use num::{BigInt, BigRational};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, int_pow};
use crate::lattice::{canonicalize, enumerate, epsilon, LatticeCtx, LatticeVec};
use crate::lp::{maximize, LpOutcome};

/// A rational weight vector, one entry per homogeneous coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem(pub Vec<BigRational>);

impl WeightSystem {
    pub fn from_i64s(v: &[i64]) -> Self {
        Self(
            v.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> BigRational {
        self.0.iter().fold(BigRational::zero(), |acc, w| acc + w)
    }
}

/// The set of exponent vectors of the monomials occurring in a homogeneous
/// polynomial; coefficients only matter through being nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSupport {
    exponents: Vec<Vec<u32>>,
    degree: u32,
}

impl MonomialSupport {
    pub fn new(exponents: Vec<Vec<u32>>) -> Result<Self> {
        let first = exponents
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty monomial support".into()))?;
        let nvars = first.len();
        let degree: u32 = first.iter().sum();
        for alpha in &exponents {
            if alpha.len() != nvars {
                return Err(Error::InvalidParameter(
                    "support mixes different variable counts".into(),
                ));
            }
            if alpha.iter().sum::<u32>() != degree {
                return Err(Error::InvalidParameter(
                    "support mixes different total degrees".into(),
                ));
            }
        }
        Ok(Self { exponents, degree })
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exponents[0].len()
    }
}

/// Hilbert-Mumford weight: the minimum of <w, alpha> over the support.
pub fn hm_weight(support: &MonomialSupport, w: &WeightSystem) -> Result<BigRational> {
    if w.len() != support.nvars() {
        return Err(Error::InvalidParameter(format!(
            "weight system has {} entries for {} variables",
            w.len(),
            support.nvars()
        )));
    }
    support
        .exponents()
        .iter()
        .map(|alpha| {
            alpha
                .iter()
                .zip(&w.0)
                .fold(BigRational::zero(), |acc, (&a, wi)| {
                    acc + wi * BigRational::from_integer(BigInt::from(a))
                })
        })
        .min()
        .ok_or_else(|| Error::InvalidParameter("empty monomial support".into()))
}

/// A finite multiset of integer lattice weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightSupport {
    entries: Vec<(Vec<i64>, u64)>,
}

impl WeightSupport {
    pub fn new(entries: Vec<(Vec<i64>, u64)>) -> Result<Self> {
        if let Some(dim) = entries.first().map(|(v, _)| v.len()) {
            if entries.iter().any(|(v, _)| v.len() != dim) {
                return Err(Error::InvalidParameter(
                    "weight support mixes ambient dimensions".into(),
                ));
            }
        }
        if entries.iter().any(|&(_, m)| m == 0) {
            return Err(Error::InvalidParameter(
                "weight multiplicities must be positive".into(),
            ));
        }
        Ok(Self { entries })
    }

    pub fn from_vectors(vectors: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(vectors.into_iter().map(|v| (v, 1)).collect())
    }

    pub fn from_lattice(vectors: &[LatticeVec]) -> Result<Self> {
        Self::from_vectors(vectors.iter().map(|v| v.embed()).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Vec<i64>, u64)] {
        &self.entries
    }

    fn distinct_vectors(&self) -> Vec<&[i64]> {
        let set: BTreeSet<&[i64]> = self.entries.iter().map(|(v, _)| v.as_slice()).collect();
        set.into_iter().collect()
    }
}

/// Weight support of a homogeneous polynomial under a diagonal torus whose
/// coordinate weights are the rows of `generator_weights`.
pub fn monomial_weight_support(
    support: &MonomialSupport,
    generator_weights: &[Vec<i64>],
) -> Result<WeightSupport> {
    if generator_weights.len() != support.nvars() {
        return Err(Error::InvalidParameter(
            "one generator weight per variable is required".into(),
        ));
    }
    let dim = generator_weights
        .first()
        .map(|v| v.len())
        .unwrap_or_default();
    if generator_weights.iter().any(|v| v.len() != dim) {
        return Err(Error::InvalidParameter(
            "generator weights mix ambient dimensions".into(),
        ));
    }
    let mut vectors = Vec::with_capacity(support.exponents().len());
    for alpha in support.exponents() {
        let mut w = vec![0i64; dim];
        for (a, gen) in alpha.iter().zip(generator_weights) {
            for (slot, g) in w.iter_mut().zip(gen) {
                *slot += i64::from(*a) * g;
            }
        }
        vectors.push(w);
    }
    WeightSupport::from_vectors(vectors)
}

/// Exact stability verdict for a diagonal torus action with the given
/// occurring weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    /// 0 lies in the relative interior of the weight polytope.
    pub polystable: bool,
    /// 0 lies in the weight polytope.
    pub semistable: bool,
    /// The support was empty (the zero tangent vector); declared
    /// polystable by convention.
    pub empty_support: bool,
    /// Optimal value of the certificate program: the largest t such that 0
    /// is a convex combination with all coefficients >= t. None when 0 is
    /// not in the affine hull of the support.
    pub certificate: Option<BigRational>,
}

/// Decide membership of the origin in the convex hull and its relative
/// interior, by maximizing the minimal barycentric coefficient; exact.
pub fn torus_stability(support: &WeightSupport) -> Result<StabilityVerdict> {
    if support.is_empty() {
        return Ok(StabilityVerdict {
            polystable: true,
            semistable: true,
            empty_support: true,
            certificate: None,
        });
    }
    let vectors = support.distinct_vectors();
    let n = vectors.len();
    let dim = vectors[0].len();

    // Variables: mu_1..mu_n, t_plus, t_minus with lambda_i = mu_i + t.
    // max t  s.t.  sum lambda = 1, sum lambda_i u_i = 0, lambda_i >= t.
    let ncols = n + 2;
    let mut c = vec![BigRational::zero(); ncols];
    c[n] = BigRational::one();
    c[n + 1] = -BigRational::one();

    let mut a = Vec::with_capacity(dim + 1);
    let mut b = Vec::with_capacity(dim + 1);
    let mut row = vec![BigRational::one(); ncols];
    row[n] = BigRational::from_integer(BigInt::from(n as u64));
    row[n + 1] = -BigRational::from_integer(BigInt::from(n as u64));
    a.push(row);
    b.push(BigRational::one());
    for j in 0..dim {
        let mut row = vec![BigRational::zero(); ncols];
        let mut total = BigInt::zero();
        for (i, v) in vectors.iter().enumerate() {
            row[i] = BigRational::from_integer(BigInt::from(v[j]));
            total += BigInt::from(v[j]);
        }
        row[n] = BigRational::from_integer(total.clone());
        row[n + 1] = BigRational::from_integer(-total);
        a.push(row);
        b.push(BigRational::zero());
    }

    match maximize(&c, &a, &b)? {
        LpOutcome::Infeasible => Ok(StabilityVerdict {
            polystable: false,
            semistable: false,
            empty_support: false,
            certificate: None,
        }),
        LpOutcome::Optimal { value, .. } => Ok(StabilityVerdict {
            polystable: value.is_positive(),
            semistable: !value.is_negative(),
            empty_support: false,
            certificate: Some(value),
        }),
    }
}

pub fn torus_polystable(support: &WeightSupport) -> Result<bool> {
    Ok(torus_stability(support)?.polystable)
}

pub fn torus_semistable(support: &WeightSupport) -> Result<bool> {
    Ok(torus_stability(support)?.semistable)
}

/// The classes e_ij - e_i'j' that are quotiented away from the
/// degree-d weight set.
fn excluded_classes(ctx: LatticeCtx) -> Result<BTreeSet<LatticeVec>> {
    let (l, d) = (ctx.l(), ctx.d());
    let mut out = BTreeSet::new();
    for i in 0..l {
        for j in 0..d {
            for i2 in 0..l {
                for j2 in 0..d {
                    let mut raw = vec![0i64; l * d];
                    raw[i * d + j] += 1;
                    raw[i2 * d + j2] -= 1;
                    out.insert(canonicalize(ctx, &raw)?);
                }
            }
        }
    }
    Ok(out)
}

/// Torus weights of the first-order deformation space: classes u with
/// u + eps in the generator cone, minus the classes of e_ij - e_i'j'.
/// Each surviving weight has a one-dimensional eigenspace.
pub fn t1_weights(ctx: LatticeCtx) -> Result<Vec<LatticeVec>> {
    let eps = epsilon(ctx);
    let excluded = excluded_classes(ctx)?;
    let mut out = Vec::new();
    for point in enumerate(ctx, ctx.d() as i64)? {
        let u = point.sub(&eps)?;
        if !excluded.contains(&u) {
            out.push(u);
        }
    }
    Ok(out)
}

/// Independent dimension count of the deformation space: the number of
/// degree-d monomials in the l*d variables minus the number of distinct
/// relation monomials x^{eps_i - e_ij + e_i'j'}.
pub fn t1_dim_oracle(l: usize, d: usize) -> Result<u64> {
    if l < 1 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "t1_dim_oracle: need l >= 1 and d >= 2, got ({l}, {d})"
        )));
    }
    let monomials = binomial((l * d + d - 1) as i64, d as i64)?;
    let mut relations: BTreeSet<Vec<i64>> = BTreeSet::new();
    for i in 0..l {
        for j in 0..d {
            for i2 in 0..l {
                for j2 in 0..d {
                    let mut mono = vec![0i64; l * d];
                    for slot in 0..d {
                        mono[i * d + slot] += 1;
                    }
                    mono[i * d + j] -= 1;
                    mono[i2 * d + j2] += 1;
                    relations.insert(mono);
                }
            }
        }
    }
    let dim = monomials - BigInt::from(relations.len() as u64);
    dim.to_u64()
        .ok_or_else(|| Error::Overflow("deformation dimension".into()))
}

/// Verdict for the family that keeps the first `t` blocks generic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyVerdict {
    pub t: usize,
    pub support_size: usize,
    pub empty_support: bool,
    pub polystable: bool,
}

/// The deformation weights supported on the first `t` blocks.
pub fn family_support(ctx: LatticeCtx, t: usize) -> Result<Vec<LatticeVec>> {
    if t < 1 || t > ctx.l() {
        return Err(Error::InvalidParameter(format!(
            "family_support: need 1 <= t <= l = {}, got {t}",
            ctx.l()
        )));
    }
    Ok(t1_weights(ctx)?
        .into_iter()
        .filter(|u| (t..ctx.l()).all(|i| u.row(i).iter().all(|&x| x == 0)))
        .collect())
}

/// Polystability of the deformation family with `t` generic blocks, via the
/// exact relative-interior test on its weight support.
pub fn family_polystable(l: usize, d: usize, t: usize) -> Result<FamilyVerdict> {
    let ctx = LatticeCtx::new(l, d)?;
    let support = family_support(ctx, t)?;
    let verdict = torus_stability(&WeightSupport::from_lattice(&support)?)?;
    Ok(FamilyVerdict {
        t,
        support_size: support.len(),
        empty_support: verdict.empty_support,
        polystable: verdict.polystable,
    })
}

/// The two sides of the appending inequality for weight systems, with the
/// exact tightness condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GitCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
    pub tight: bool,
    /// sum w = (d / (m+2)) sum v, the predicted tightness criterion.
    pub tight_condition: bool,
}

/// min{ sum w, (d/(m+2)) sum v } <= (d/(m+d+2)) (sum w + sum v), a weighted
/// mean bound; equality holds exactly when the two compared terms agree.
pub fn append_git_inequality(
    w: &WeightSystem,
    v: &WeightSystem,
    m: usize,
    d: usize,
) -> Result<GitCheck> {
    if d < 1 || w.len() != d {
        return Err(Error::InvalidParameter(format!(
            "block weight system must have d = {d} entries, got {}",
            w.len()
        )));
    }
    if v.len() != m + 2 {
        return Err(Error::InvalidParameter(format!(
            "ambient weight system must have m + 2 = {} entries, got {}",
            m + 2,
            v.len()
        )));
    }
    let sw = w.total();
    let sv = v.total();
    let d_rat = BigRational::from_integer(BigInt::from(d as u64));
    let scaled = &d_rat * &sv / BigRational::from_integer(BigInt::from((m + 2) as u64));
    let lhs = sw.clone().min(scaled.clone());
    let rhs = &d_rat * (&sw + &sv) / BigRational::from_integer(BigInt::from((m + d + 2) as u64));
    Ok(GitCheck {
        holds: lhs <= rhs,
        tight: lhs == rhs,
        tight_condition: sw == scaled,
        lhs,
        rhs,
    })
}

/// Order of the finite part (d!)^l * l! and the rank l(d-1) of the
/// automorphism torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutData {
    pub finite_order: BigInt,
    pub torus_rank: usize,
}

pub fn aut_group_data(l: usize, d: usize) -> Result<AutData> {
    if l < 1 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "aut_group_data: need l >= 1 and d >= 2, got ({l}, {d})"
        )));
    }
    let finite_order = int_pow(&factorial(d as u64), l as u32) * factorial(l as u64);
    Ok(AutData {
        finite_order,
        torus_rank: l * (d - 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn hm_weight_examples() {
        // support {x_0^d}, w = (1, 0, ...): weight d
        let s = MonomialSupport::new(vec![vec![3, 0, 0]]).unwrap();
        let w = WeightSystem::from_i64s(&[1, 0, 0]);
        assert_eq!(hm_weight(&s, &w).unwrap(), rat(3));

        // x11 x12 + x21 x22 with w = (1,1,0,0): min(2, 0) = 0
        let s = MonomialSupport::new(vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]]).unwrap();
        let w = WeightSystem::from_i64s(&[1, 1, 0, 0]);
        assert_eq!(hm_weight(&s, &w).unwrap(), rat(0));

        let zero = WeightSystem::from_i64s(&[0, 0, 0, 0]);
        assert_eq!(hm_weight(&s, &zero).unwrap(), rat(0));

        let short = WeightSystem::from_i64s(&[1, 0]);
        assert!(hm_weight(&s, &short).is_err());
        assert!(MonomialSupport::new(vec![]).is_err());
        assert!(MonomialSupport::new(vec![vec![2, 0], vec![1, 0]]).is_err());
    }

    #[test]
    fn polystability_small_supports() {
        let sym = WeightSupport::from_vectors(vec![vec![1], vec![-1]]).unwrap();
        assert!(torus_polystable(&sym).unwrap());

        let single = WeightSupport::from_vectors(vec![vec![1]]).unwrap();
        assert!(!torus_polystable(&single).unwrap());
        assert!(!torus_semistable(&single).unwrap());

        // 0 on the boundary: semistable, not polystable
        let boundary =
            WeightSupport::from_vectors(vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let verdict = torus_stability(&boundary).unwrap();
        assert!(verdict.semistable);
        assert!(!verdict.polystable);

        // a segment through 0 inside the plane: relative interior counts
        let segment = WeightSupport::from_vectors(vec![vec![2, 0], vec![-2, 0]]).unwrap();
        assert!(torus_polystable(&segment).unwrap());

        // the zero weight alone is its own relative interior
        let origin = WeightSupport::from_vectors(vec![vec![0, 0]]).unwrap();
        assert!(torus_polystable(&origin).unwrap());

        let empty = WeightSupport::from_vectors(vec![]).unwrap();
        let verdict = torus_stability(&empty).unwrap();
        assert!(verdict.polystable && verdict.empty_support);
    }

    #[test]
    fn polystability_is_coordinate_free() {
        // apply a unimodular change of coordinates; the verdict must not move
        let supports = [
            vec![vec![1, 0], vec![-1, 2], vec![0, -1]],
            vec![vec![1, 1], vec![2, 3]],
        ];
        for vectors in supports {
            let before =
                torus_stability(&WeightSupport::from_vectors(vectors.clone()).unwrap()).unwrap();
            // (x, y) -> (x + y, x + 2y), determinant 1
            let moved: Vec<Vec<i64>> = vectors
                .iter()
                .map(|v| vec![v[0] + v[1], v[0] + 2 * v[1]])
                .collect();
            let after = torus_stability(&WeightSupport::from_vectors(moved).unwrap()).unwrap();
            assert_eq!(before.polystable, after.polystable);
            assert_eq!(before.semistable, after.semistable);
        }
    }

    #[test]
    fn monomial_weight_supports() {
        // x^2 and y^2 under the standard diagonal weights
        let s = MonomialSupport::new(vec![vec![2, 0], vec![0, 2]]).unwrap();
        let gens = vec![vec![1, 0], vec![0, 1]];
        let support = monomial_weight_support(&s, &gens).unwrap();
        assert_eq!(support.len(), 2);
        assert!(!torus_semistable(&support).unwrap());

        // xy is semistable for the determinant-zero weights (1, -1)
        let s = MonomialSupport::new(vec![vec![1, 1]]).unwrap();
        let gens = vec![vec![1], vec![-1]];
        let support = monomial_weight_support(&s, &gens).unwrap();
        assert!(torus_polystable(&support).unwrap());
    }

    #[test]
    fn t1_small_grid() {
        let c22 = LatticeCtx::new(2, 2).unwrap();
        assert_eq!(t1_weights(c22).unwrap().len(), 0);
        assert_eq!(t1_dim_oracle(2, 2).unwrap(), 0);

        let c12 = LatticeCtx::new(1, 2).unwrap();
        assert_eq!(t1_weights(c12).unwrap().len(), 0);
        assert_eq!(t1_dim_oracle(1, 2).unwrap(), 0);

        // frozen regression value for the cubic fourfold case
        let c23 = LatticeCtx::new(2, 3).unwrap();
        assert_eq!(t1_weights(c23).unwrap().len(), 24);
        assert_eq!(t1_dim_oracle(2, 3).unwrap(), 24);
    }

    #[test]
    fn family_verdicts() {
        let verdict = family_polystable(2, 3, 1).unwrap();
        assert!(verdict.polystable);
        assert_eq!(verdict.support_size, 3);

        let verdict = family_polystable(3, 3, 2).unwrap();
        assert!(verdict.polystable);
        assert!(!verdict.empty_support);

        // the quadric is rigid: empty support, polystable by convention
        // with the degenerate case flagged
        let verdict = family_polystable(2, 2, 1).unwrap();
        assert!(verdict.polystable);
        assert!(verdict.empty_support);
        assert_eq!(verdict.support_size, 0);

        assert!(family_polystable(2, 3, 0).is_err());
    }

    #[test]
    fn family_support_sums_to_zero_and_spans() {
        use crate::linalg;
        for (l, d, t) in [(2, 3, 1), (3, 3, 2), (3, 3, 1), (2, 4, 1)] {
            let ctx = LatticeCtx::new(l, d).unwrap();
            let support = family_support(ctx, t).unwrap();
            let sum = support
                .iter()
                .fold(crate::lattice::zero(ctx), |acc, u| acc.add(u).unwrap());
            assert!(sum.is_zero(), "({l}, {d}, {t})");
            let rows: Vec<Vec<BigRational>> = support
                .iter()
                .map(|u| u.embed().into_iter().map(rat).collect())
                .collect();
            assert_eq!(linalg::rank(rows), t * (d - 1), "({l}, {d}, {t})");
        }
    }

    #[test]
    fn git_inequality_cases() {
        // all-ones weights: both sides equal d
        let check = append_git_inequality(
            &WeightSystem::from_i64s(&[1, 1, 1]),
            &WeightSystem::from_i64s(&[1, 1, 1, 1]),
            2,
            3,
        )
        .unwrap();
        assert!(check.holds && check.tight && check.tight_condition);
        assert_eq!(check.lhs, rat(3));

        // sum w = 0 while sum v > 0: strict
        let check = append_git_inequality(
            &WeightSystem::from_i64s(&[1, -1]),
            &WeightSystem::from_i64s(&[2, 1, 1]),
            1,
            2,
        )
        .unwrap();
        assert!(check.holds && !check.tight && !check.tight_condition);

        assert!(append_git_inequality(
            &WeightSystem::from_i64s(&[1]),
            &WeightSystem::from_i64s(&[1, 1]),
            0,
            2
        )
        .is_err());
    }

    #[test]
    fn aut_data_values() {
        let a = aut_group_data(2, 3).unwrap();
        assert_eq!(a.finite_order, BigInt::from(72));
        assert_eq!(a.torus_rank, 4);

        let a = aut_group_data(3, 3).unwrap();
        assert_eq!(a.finite_order, BigInt::from(1296));
        assert_eq!(a.torus_rank, 6);

        let a = aut_group_data(1, 5).unwrap();
        assert_eq!(a.finite_order, BigInt::from(120));
        assert_eq!(a.torus_rank, 4);
    }
}
