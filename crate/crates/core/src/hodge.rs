//! Multiplicity vectors of block sums, primitive Hodge numbers of smooth
//! hypersurfaces, the appending operation on graded Hodge structures, and
//! Hodge-Du Bois diamond assembly.
//!
//! For a hypersurface the model stores the reduced cohomology `Hbar`
//! (singular cohomology modulo the powers of the hyperplane class); the
//! hyperplane summands are added back once, when a diamond is assembled.

use std::collections::BTreeMap;

use num::traits::{One, ToPrimitive, Zero};
use num::BigInt;

use crate::error::{Error, Result};
use crate::exact::{IntPoly, TateClass};

/// A pure Hodge structure recorded as its Hodge numbers: multiplicity of
/// each bidegree (p, q). All bidegrees of one summand share the weight p+q.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PureSummand {
    hodge: BTreeMap<(i64, i64), u64>,
}

impl PureSummand {
    /// The Tate structure Q(-k), one-dimensional of bidegree (k, k).
    pub fn tate(k: i64) -> Self {
        let mut hodge = BTreeMap::new();
        hodge.insert((k, k), 1);
        Self { hodge }
    }

    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((i64, i64), u64)>,
    {
        let mut hodge: BTreeMap<(i64, i64), u64> = BTreeMap::new();
        for ((p, q), mult) in entries {
            if mult == 0 {
                continue;
            }
            let slot = hodge.entry((p, q)).or_insert(0);
            *slot = slot
                .checked_add(mult)
                .ok_or_else(|| Error::Overflow("Hodge multiplicity".into()))?;
        }
        let mut weights = hodge.keys().map(|&(p, q)| p + q);
        if let Some(w) = weights.next() {
            if weights.any(|w2| w2 != w) {
                return Err(Error::InvalidParameter(
                    "pure summand mixes different weights".into(),
                ));
            }
        }
        Ok(Self { hodge })
    }

    pub fn multiplicity(&self, p: i64, q: i64) -> u64 {
        self.hodge.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), u64)> + '_ {
        self.hodge.iter().map(|(&k, &m)| (k, m))
    }

    pub fn is_empty(&self) -> bool {
        self.hodge.is_empty()
    }

    pub fn weight(&self) -> Option<i64> {
        self.hodge.keys().next().map(|&(p, q)| p + q)
    }

    pub fn dim(&self) -> u64 {
        self.hodge.values().fold(0u64, |acc, &m| acc.saturating_add(m))
    }

    /// Tate twist by k: shifts every bidegree (p, q) to (p+k, q+k).
    pub fn twist(&self, k: i64) -> Self {
        Self {
            hodge: self
                .hodge
                .iter()
                .map(|(&(p, q), &m)| ((p + k, q + k), m))
                .collect(),
        }
    }

    pub fn scaled(&self, mult: u64) -> Result<Self> {
        if mult == 0 {
            return Ok(Self::default());
        }
        let mut hodge = BTreeMap::new();
        for (&k, &m) in &self.hodge {
            let scaled = m
                .checked_mul(mult)
                .ok_or_else(|| Error::Overflow("Hodge multiplicity".into()))?;
            hodge.insert(k, scaled);
        }
        Ok(Self { hodge })
    }

    pub fn is_symmetric(&self) -> bool {
        self.hodge
            .iter()
            .all(|(&(p, q), &m)| self.multiplicity(q, p) == m)
    }

    /// Some((k, m)) when the summand is Q(-k)^m, None otherwise.
    pub fn as_tate(&self) -> Option<(i64, u64)> {
        if self.hodge.len() != 1 {
            return None;
        }
        let (&(p, q), &m) = self.hodge.iter().next().unwrap();
        (p == q).then_some((p, m))
    }

    /// Dimension of the p-th graded piece of the Hodge filtration.
    pub fn f_graded_dim(&self, p: i64) -> u64 {
        self.hodge
            .iter()
            .filter(|(&(p1, _), _)| p1 == p)
            .fold(0u64, |acc, (_, &m)| acc.saturating_add(m))
    }
}

/// Reduced cohomology of a projective variety, degree by degree, as a list
/// of pure summands. Only multiplicities are stored, never bases.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedMhs {
    dim_x: usize,
    entries: BTreeMap<usize, Vec<PureSummand>>,
}

impl GradedMhs {
    pub fn new(dim_x: usize) -> Self {
        Self {
            dim_x,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim_x
    }

    pub fn push(&mut self, degree: usize, summand: PureSummand) -> Result<()> {
        if degree > 2 * self.dim_x {
            return Err(Error::DegreeOutOfRange(format!(
                "degree {degree} exceeds 2 * dim = {}",
                2 * self.dim_x
            )));
        }
        if !summand.is_empty() {
            self.entries.entry(degree).or_default().push(summand);
        }
        Ok(())
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn summands(&self, degree: usize) -> &[PureSummand] {
        self.entries.get(&degree).map_or(&[], |v| v.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[PureSummand])> {
        self.entries.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All summands of one degree merged into a single Hodge table; two
    /// graded structures agree exactly when these tables agree in every
    /// degree.
    pub fn degree_hodge_table(&self, degree: usize) -> BTreeMap<(i64, i64), u64> {
        let mut table = BTreeMap::new();
        for s in self.summands(degree) {
            for (key, mult) in s.entries() {
                *table.entry(key).or_insert(0) += mult;
            }
        }
        table
    }
}

/// Multiplicity vector of the degree-d block sum with l blocks: the
/// coefficients of ((1+q)^{d-1} - q^{d-1})^l, of length l(d-2)+1 and all
/// positive.
pub fn multiplicities(l: usize, d: usize) -> Result<Vec<BigInt>> {
    if l < 1 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "multiplicities: need l >= 1 and d >= 2, got ({l}, {d})"
        )));
    }
    let base = &IntPoly::from_i64s(&[1, 1]).pow((d - 1) as u32)
        - &IntPoly::monomial(BigInt::one(), d - 1);
    let p = base.pow(l as u32);
    let coeffs = p.coeffs().to_vec();
    debug_assert_eq!(coeffs.len(), l * (d - 2) + 1);
    Ok(coeffs)
}

/// Primitive middle-cohomology Hodge numbers of a smooth hypersurface of
/// dimension n and degree d, via the Poincare series of the Jacobian ring:
/// h^{n-q,q}_prim is the coefficient of t^{(q+1)d - n - 2} in
/// ((1 - t^{d-1}) / (1 - t))^{n+2}.
pub fn smooth_primitive_hodge(n: usize, d: usize) -> Result<PureSummand> {
    if n < 1 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "smooth_primitive_hodge: need n >= 1 and d >= 2, got ({n}, {d})"
        )));
    }
    let jac = IntPoly::geometric(d - 1).pow((n + 2) as u32);
    let mut entries = Vec::new();
    for q in 0..=n {
        let exp = ((q + 1) * d) as i64 - n as i64 - 2;
        if exp < 0 {
            continue;
        }
        let c = jac.coeff(exp as usize);
        if c.is_zero() {
            continue;
        }
        let mult = c
            .to_u64()
            .ok_or_else(|| Error::Overflow("primitive Hodge number".into()))?;
        entries.push((((n - q) as i64, q as i64), mult));
    }
    PureSummand::from_entries(entries)
}

/// Reduced cohomology of the hypersurface obtained from an n-dimensional
/// hypersurface X (with reduced cohomology `xbar`) by adding l fresh
/// degree-d blocks of pairwise distinct variables.
///
/// Each summand of Hbar^{m+i0}(X) reappears in degree m + l*d + i0 + j,
/// Tate-twisted by l + j, with multiplicity a_j for j = 0..l(d-2).
pub fn append_blocks(xbar: &GradedMhs, m: usize, l: usize, d: usize) -> Result<GradedMhs> {
    if xbar.dim() != m {
        return Err(Error::InvalidParameter(format!(
            "append_blocks: input has dimension {} but m = {m}",
            xbar.dim()
        )));
    }
    if let Some(k) = xbar.degrees().find(|&k| k < m) {
        return Err(Error::InvalidParameter(format!(
            "append_blocks: reduced cohomology below the middle degree (degree {k}) is not supported"
        )));
    }
    let a = multiplicities(l, d)?;
    let mut out = GradedMhs::new(m + l * d);
    for (kx, summands) in xbar.iter() {
        let i0 = kx - m;
        for (j, aj) in a.iter().enumerate() {
            let mult = aj
                .to_u64()
                .ok_or_else(|| Error::Overflow("block multiplicity".into()))?;
            for s in summands {
                out.push(m + l * d + i0 + j, s.twist((l + j) as i64).scaled(mult)?)?;
            }
        }
    }
    Ok(out)
}

/// Reduced cohomology of the block-product hypersurface with l blocks of
/// degree d: Hbar^{ld-2+i} = Q(-(l-1+i))^{a_i}.
pub fn xld_cohomology(l: usize, d: usize) -> Result<GradedMhs> {
    let a = multiplicities(l, d)?;
    let dim = l * d - 2;
    let mut out = GradedMhs::new(dim);
    for (i, ai) in a.iter().enumerate() {
        let mult = ai
            .to_u64()
            .ok_or_else(|| Error::Overflow("block multiplicity".into()))?;
        out.push(dim + i, PureSummand::tate((l - 1 + i) as i64).scaled(mult)?)?;
    }
    Ok(out)
}

/// The table of Hodge-Du Bois numbers h^{p,q} = dim gr_F^p H^{p+q}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDiamond {
    dim_x: usize,
    table: Vec<Vec<u64>>,
}

impl HodgeDiamond {
    pub fn dim(&self) -> usize {
        self.dim_x
    }

    pub fn entry(&self, p: usize, q: usize) -> u64 {
        self.table[p][q]
    }

    /// Rows by cohomological degree k = 2*dim down to 0; within a row the
    /// entries run from h^{p_max, k - p_max} down to h^{p_min, k - p_min},
    /// i.e. left to right with p decreasing.
    pub fn rows_by_degree(&self) -> Vec<Vec<u64>> {
        let n = self.dim_x;
        (0..=2 * n)
            .rev()
            .map(|k| {
                let p_hi = k.min(n);
                let p_lo = k - p_hi;
                (p_lo..=p_hi)
                    .rev()
                    .map(|p| self.table[p][k - p])
                    .collect()
            })
            .collect()
    }
}

/// Assemble the full diamond from reduced cohomology at and above the
/// middle degree: every even degree 2j gains the hyperplane class Q(-j),
/// and degrees below the middle carry nothing else (Lefschetz).
pub fn assemble_diamond(gmhs: &GradedMhs) -> Result<HodgeDiamond> {
    let n = gmhs.dim();
    if let Some(k) = gmhs.degrees().find(|&k| k < n) {
        return Err(Error::InvalidParameter(format!(
            "assemble_diamond: reduced cohomology in degree {k} below the middle {n}"
        )));
    }
    let mut table = vec![vec![0u64; n + 1]; n + 1];
    for (j, row) in table.iter_mut().enumerate() {
        row[j] = 1;
    }
    for (k, summands) in gmhs.iter() {
        for s in summands {
            for ((p, _), mult) in s.entries() {
                if p < 0 || p as usize > n || p > k as i64 || (k as i64 - p) > n as i64 {
                    return Err(Error::DegreeOutOfRange(format!(
                        "Hodge level {p} out of range in degree {k}"
                    )));
                }
                let (p, q) = (p as usize, k - p as usize);
                table[p][q] = table[p][q]
                    .checked_add(mult)
                    .ok_or_else(|| Error::Overflow("diamond entry".into()))?;
            }
        }
    }
    Ok(HodgeDiamond { dim_x: n, table })
}

/// Alternating sum of the cohomology classes as a Laurent polynomial in the
/// Tate symbol u; requires every summand to be of Tate type. With
/// `include_hyperplane` the class of the hyperplane powers,
/// 1 + u + ... + u^dim, is added.
pub fn euler_class(gmhs: &GradedMhs, include_hyperplane: bool) -> Result<TateClass> {
    let mut cls = TateClass::zero();
    if include_hyperplane {
        for j in 0..=gmhs.dim() {
            cls.add_term(j as i64, &BigInt::one());
        }
    }
    for (k, summands) in gmhs.iter() {
        let sign = if k % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        for s in summands {
            let (tw, mult) = s.as_tate().ok_or_else(|| {
                Error::NonTateSummand(format!("degree {k} has a non-Tate summand"))
            })?;
            cls.add_term(tw, &(&sign * BigInt::from(mult)));
        }
    }
    Ok(cls)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bigs(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn multiplicity_vectors() {
        assert_eq!(multiplicities(1, 3).unwrap(), bigs(&[1, 2]));
        assert_eq!(multiplicities(2, 2).unwrap(), bigs(&[1]));
        assert_eq!(multiplicities(3, 3).unwrap(), bigs(&[1, 6, 12, 8]));
        assert!(multiplicities(0, 3).is_err());
        assert!(multiplicities(2, 1).is_err());
    }

    #[test]
    fn multiplicities_total_mass() {
        // sum a_i = (2^{d-1} - 1)^l
        for d in 2..=6usize {
            for l in 1..=5usize {
                let total: BigInt = multiplicities(l, d).unwrap().into_iter().sum();
                let expected = crate::exact::int_pow(
                    &BigInt::from((1u64 << (d - 1)) - 1),
                    l as u32,
                );
                assert_eq!(total, expected, "(l, d) = ({l}, {d})");
            }
        }
    }

    #[test]
    fn smooth_cubic_hodge_numbers() {
        let fourfold = smooth_primitive_hodge(4, 3).unwrap();
        assert_eq!(fourfold.multiplicity(3, 1), 1);
        assert_eq!(fourfold.multiplicity(2, 2), 20);
        assert_eq!(fourfold.multiplicity(1, 3), 1);
        assert!(fourfold.is_symmetric());

        let sevenfold = smooth_primitive_hodge(7, 3).unwrap();
        let dims: Vec<u64> = (0..=7).map(|q| sevenfold.multiplicity(7 - q, q)).collect();
        assert_eq!(dims, vec![0, 0, 1, 84, 84, 1, 0, 0]);

        let curve = smooth_primitive_hodge(1, 3).unwrap();
        assert_eq!(curve.multiplicity(1, 0), 1);
        assert_eq!(curve.multiplicity(0, 1), 1);
    }

    #[test]
    fn append_cubic_fourfold() {
        // one block appended to a smooth cubic fourfold: degree 8 carries
        // H^4_prim(X)(-2) twice
        let mut xbar = GradedMhs::new(4);
        xbar.push(4, smooth_primitive_hodge(4, 3).unwrap()).unwrap();
        let y = append_blocks(&xbar, 4, 1, 3).unwrap();
        assert_eq!(y.dim(), 7);

        let deg8: Vec<_> = y.summands(8).to_vec();
        assert_eq!(deg8.len(), 1);
        assert_eq!(deg8[0].multiplicity(5, 3), 2);
        assert_eq!(deg8[0].multiplicity(4, 4), 40);
        assert_eq!(deg8[0].multiplicity(3, 5), 2);
    }

    #[test]
    fn append_empty_input_stays_empty() {
        let xbar = GradedMhs::new(2);
        let y = append_blocks(&xbar, 2, 2, 3).unwrap();
        assert!(y.is_empty());
    }

    #[test]
    fn append_elliptic_curve_two_blocks() {
        let mut xbar = GradedMhs::new(1);
        xbar.push(1, smooth_primitive_hodge(1, 3).unwrap()).unwrap();
        let y = append_blocks(&xbar, 1, 2, 3).unwrap();
        // degree 7 carries H^1(E)(-2)
        let deg7 = y.summands(7);
        assert_eq!(deg7.len(), 1);
        assert_eq!(deg7[0].multiplicity(3, 2), 1);
        assert_eq!(deg7[0].multiplicity(2, 3), 1);
    }

    #[test]
    fn xld_small_cases() {
        let quadric = xld_cohomology(2, 2).unwrap();
        assert_eq!(quadric.dim(), 2);
        assert_eq!(quadric.summands(2).len(), 1);
        assert_eq!(quadric.summands(2)[0].as_tate(), Some((1, 1)));
        assert!(quadric.summands(3).is_empty());

        let x33 = xld_cohomology(3, 3).unwrap();
        let expect = [(7usize, 2i64, 1u64), (8, 3, 6), (9, 4, 12), (10, 5, 8)];
        for (deg, tw, mult) in expect {
            assert_eq!(x33.summands(deg).len(), 1);
            assert_eq!(x33.summands(deg)[0].as_tate(), Some((tw, mult)));
        }

        // single block: Hbar^{d-2+i} = Q(-i)^{binom(d-1, i)}
        let x14 = xld_cohomology(1, 4).unwrap();
        for i in 0..=2usize {
            let s = x14.summands(2 + i);
            assert_eq!(s.len(), 1);
            let expected = crate::exact::binomial(3, i as i64).unwrap().to_u64().unwrap();
            assert_eq!(s[0].as_tate(), Some((i as i64, expected)));
        }
    }

    #[test]
    fn quadric_surface_diamond() {
        let diamond = assemble_diamond(&xld_cohomology(2, 2).unwrap()).unwrap();
        assert_eq!(diamond.entry(0, 0), 1);
        assert_eq!(diamond.entry(1, 1), 2);
        assert_eq!(diamond.entry(2, 2), 1);
        assert_eq!(diamond.entry(1, 0), 0);
        assert_eq!(diamond.entry(2, 1), 0);
    }

    #[test]
    fn diamond_below_middle_is_projective_space() {
        let diamond = assemble_diamond(&xld_cohomology(3, 3).unwrap()).unwrap();
        for k in 0..7usize {
            for p in 0..=k.min(7) {
                let q = k - p;
                if q > 7 {
                    continue;
                }
                let expected = if p == q { 1 } else { 0 };
                assert_eq!(diamond.entry(p, q), expected, "({p}, {q})");
            }
        }
    }

    #[test]
    fn euler_class_examples() {
        let e = euler_class(&xld_cohomology(2, 3).unwrap(), true).unwrap();
        let expected = [(0, 1), (1, 2), (2, -3), (3, 5), (4, 1)];
        for (exp, c) in expected {
            assert_eq!(e.coeff(exp), BigInt::from(c));
        }

        let quadric = euler_class(&xld_cohomology(2, 2).unwrap(), true).unwrap();
        assert_eq!(quadric.coeff(0), BigInt::one());
        assert_eq!(quadric.coeff(1), BigInt::from(2));
        assert_eq!(quadric.coeff(2), BigInt::one());

        assert!(euler_class(&GradedMhs::new(3), false).unwrap().is_zero());

        // non-Tate summands are rejected
        let mut smooth = GradedMhs::new(4);
        smooth
            .push(4, smooth_primitive_hodge(4, 3).unwrap())
            .unwrap();
        assert!(matches!(
            euler_class(&smooth, false),
            Err(Error::NonTateSummand(_))
        ));
    }
}
