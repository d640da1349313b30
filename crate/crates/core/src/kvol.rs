//! Anticanonical volumes and S-invariants transferred between projective
//! space and the block-product hypersurface, the beta-integral identity
//! behind the transfer constant, and the A/S certificates used to bound
//! the stability threshold over invariant valuations.
//!
//! All integrands are piecewise polynomials with rational coefficients, so
//! integration is exact term-by-term; floats never enter the computation.

use num::traits::{One, Signed, Zero};
use num::{BigInt, BigRational};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, int_pow, RatPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuationKind {
    /// No filtration; only the raw volume at alpha = 0 is meaningful.
    Trivial,
    /// Vanishing order along a hyperplane: vol(x; >= a) = (x - a)^n, A = 1.
    HyperplaneOrder,
    /// Exceptional divisor of a point blow-up: vol = x^n - min(a, x)^n,
    /// A = n.
    PointBlowup,
}

impl ValuationKind {
    pub fn name(&self) -> &'static str {
        match self {
            ValuationKind::Trivial => "trivial",
            ValuationKind::HyperplaneOrder => "hyperplane-order",
            ValuationKind::PointBlowup => "point-blowup",
        }
    }
}

/// A valuation profile on projective space of dimension n, with an optional
/// positive rational rescaling of the valuation.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationModel {
    kind: ValuationKind,
    n: usize,
    scale: BigRational,
}

impl ValuationModel {
    pub fn trivial(n: usize) -> Self {
        Self {
            kind: ValuationKind::Trivial,
            n,
            scale: BigRational::one(),
        }
    }

    pub fn hyperplane_order(n: usize) -> Self {
        Self {
            kind: ValuationKind::HyperplaneOrder,
            n,
            scale: BigRational::one(),
        }
    }

    pub fn point_blowup(n: usize) -> Self {
        Self {
            kind: ValuationKind::PointBlowup,
            n,
            scale: BigRational::one(),
        }
    }

    /// Replace the valuation v by scale * v.
    pub fn with_scale(mut self, scale: BigRational) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidModel("scale must be positive".into()));
        }
        self.scale = scale;
        Ok(self)
    }

    /// The two witness models on the base of the family attached to l
    /// blocks; defined for l >= 3.
    pub fn witnesses(l: usize) -> Result<Vec<Self>> {
        if l < 3 {
            return Err(Error::InvalidModel(format!(
                "witness valuations live on a positive-dimensional base; need l >= 3, got {l}"
            )));
        }
        Ok(vec![
            Self::hyperplane_order(l - 2),
            Self::point_blowup(l - 2),
        ])
    }

    pub fn kind(&self) -> ValuationKind {
        self.kind
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    fn require_divisorial(&self) -> Result<()> {
        if self.kind == ValuationKind::Trivial {
            return Err(Error::InvalidModel(
                "the trivial valuation carries no filtration data".into(),
            ));
        }
        if self.n == 0 {
            return Err(Error::InvalidModel(
                "divisorial models need ambient dimension >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Log discrepancy on projective n-space.
    pub fn log_discrepancy(&self) -> Result<BigRational> {
        self.require_divisorial()?;
        let base = match self.kind {
            ValuationKind::HyperplaneOrder => BigRational::one(),
            ValuationKind::PointBlowup => BigRational::from_integer(BigInt::from(self.n as u64)),
            ValuationKind::Trivial => unreachable!(),
        };
        Ok(&self.scale * base)
    }

    /// vol(x * O(1); v >= alpha) as sum_k beta^k p_k(x) in the normalized
    /// level beta = alpha / scale, valid on 0 <= beta <= x and zero beyond.
    fn beta_terms(&self) -> Result<Vec<(usize, RatPoly)>> {
        self.require_divisorial()?;
        let n = self.n;
        match self.kind {
            ValuationKind::HyperplaneOrder => {
                // (x - beta)^n
                let mut terms = Vec::with_capacity(n + 1);
                for k in 0..=n {
                    let mut c = BigRational::from_integer(binomial(n as i64, k as i64)?);
                    if k % 2 == 1 {
                        c = -c;
                    }
                    terms.push((k, RatPoly::monomial(c, n - k)));
                }
                Ok(terms)
            }
            ValuationKind::PointBlowup => Ok(vec![
                (0, RatPoly::monomial(BigRational::one(), n)),
                (n, RatPoly::constant(-BigRational::one())),
            ]),
            ValuationKind::Trivial => unreachable!(),
        }
    }

    /// Exact evaluation of the volume profile.
    pub fn vol(&self, x: &BigRational, alpha: &BigRational) -> Result<BigRational> {
        if x.is_negative() || alpha.is_negative() {
            return Err(Error::InvalidParameter(
                "volume profile needs x >= 0 and alpha >= 0".into(),
            ));
        }
        if self.kind == ValuationKind::Trivial {
            return Ok(if alpha.is_zero() {
                rat_pow(x, self.n)
            } else {
                BigRational::zero()
            });
        }
        let beta = alpha / &self.scale;
        if beta >= *x {
            return Ok(BigRational::zero());
        }
        let mut total = BigRational::zero();
        for (k, p) in self.beta_terms()? {
            total += rat_pow(&beta, k) * p.eval(x);
        }
        Ok(total)
    }
}

fn rat_pow(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// S-invariant of the model on projective n-space with its anticanonical
/// polarization (n+1) * O(1): exact one-dimensional integral of the
/// volume profile.
pub fn s_p(model: &ValuationModel) -> Result<BigRational> {
    model.require_divisorial()?;
    let n = model.ambient_dim();
    let x0 = rat_int(n as i64 + 1);
    // profile in beta at fixed x = n + 1, supported on [0, x0]
    let mut profile = RatPoly::zero();
    for (k, p) in model.beta_terms()? {
        profile = &profile + &RatPoly::monomial(p.eval(&x0), k);
    }
    // integral over alpha = scale * integral over beta
    let mass = model.scale() * profile.definite_integral(&BigRational::zero(), &x0);
    Ok(mass / rat_pow(&x0, n))
}

fn check_family(l: usize, d: usize) -> Result<()> {
    if l < 2 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "family needs l >= 2 and d >= 2, got ({l}, {d})"
        )));
    }
    Ok(())
}

/// Anticanonical volume of the block-product hypersurface:
/// d^{ld-1} (l-1)^{ld-2}.
pub fn vol_minus_k(l: usize, d: usize) -> Result<BigInt> {
    check_family(l, d)?;
    Ok(int_pow(&BigInt::from(d as u64), (l * d - 1) as u32)
        * int_pow(&BigInt::from(l as u64 - 1), (l * d - 2) as u32))
}

/// The constant (ld-2)! d^{ld-1} / ((l-2)! (ld-l-1)!) in front of the
/// fibered volume integral.
fn vol_x_constant(l: usize, d: usize) -> BigRational {
    let num = factorial((l * d - 2) as u64) * int_pow(&BigInt::from(d as u64), (l * d - 1) as u32);
    let den = factorial((l - 2) as u64) * factorial((l * d - l - 1) as u64);
    BigRational::new(num, den)
}

fn weight_poly(l: usize, d: usize) -> RatPoly {
    // (l - 1 - x)^{l(d-1) - 1}
    RatPoly::linear(rat_int(l as i64 - 1), -BigRational::one()).pow((l * (d - 1) - 1) as u32)
}

/// vol(-K; v >= alpha) of the hypersurface attached to a base valuation
/// model, by exact integration of the weighted base volume profile.
pub fn vol_x(l: usize, d: usize, model: &ValuationModel, alpha: &BigRational) -> Result<BigRational> {
    check_family(l, d)?;
    if alpha.is_negative() {
        return Err(Error::InvalidParameter("alpha must be >= 0".into()));
    }
    if model.ambient_dim() != l - 2 {
        return Err(Error::InvalidModel(format!(
            "model lives on projective {}-space but l - 2 = {}",
            model.ambient_dim(),
            l - 2
        )));
    }
    let c = vol_x_constant(l, d);
    let hi = rat_int(l as i64 - 1);
    if model.kind() == ValuationKind::Trivial {
        if !alpha.is_zero() {
            return Ok(BigRational::zero());
        }
        let integrand = &weight_poly(l, d) * &RatPoly::monomial(BigRational::one(), l - 2);
        return Ok(c * integrand.definite_integral(&BigRational::zero(), &hi));
    }
    let beta = alpha / model.scale();
    if beta >= hi {
        return Ok(BigRational::zero());
    }
    let weight = weight_poly(l, d);
    let mut total = BigRational::zero();
    for (k, p) in model.beta_terms()? {
        total += rat_pow(&beta, k) * (&weight * &p).definite_integral(&beta, &hi);
    }
    Ok(c * total)
}

/// vol_x as an exact polynomial in beta = alpha / scale on [0, l-1]
/// (without the leading constant).
fn vol_x_beta_poly(l: usize, d: usize, model: &ValuationModel) -> Result<RatPoly> {
    let weight = weight_poly(l, d);
    let hi = rat_int(l as i64 - 1);
    let mut poly = RatPoly::zero();
    for (k, p) in model.beta_terms()? {
        let antiderivative = (&weight * &p).integrate();
        let fixed = RatPoly::monomial(antiderivative.eval(&hi), k);
        let moving = antiderivative.shift(k);
        poly = &poly + &(&fixed - &moving);
    }
    Ok(poly)
}

/// S-invariant of the hypersurface by direct double integration of the
/// fibered volume.
pub fn s_x_direct(l: usize, d: usize, model: &ValuationModel) -> Result<BigRational> {
    check_family(l, d)?;
    if model.ambient_dim() != l - 2 {
        return Err(Error::InvalidModel(format!(
            "model lives on projective {}-space but l - 2 = {}",
            model.ambient_dim(),
            l - 2
        )));
    }
    model.require_divisorial()?;
    let poly = vol_x_beta_poly(l, d, model)?;
    let hi = rat_int(l as i64 - 1);
    let c = vol_x_constant(l, d);
    let volume = BigRational::from_integer(vol_minus_k(l, d)?);
    // d alpha = scale * d beta
    Ok(c * model.scale() * poly.definite_integral(&BigRational::zero(), &hi) / volume)
}

/// S-invariant of the hypersurface by the transfer law
/// S = (l-1)/(ld-1) * S_base.
pub fn s_x_transfer(l: usize, d: usize, model: &ValuationModel) -> Result<BigRational> {
    check_family(l, d)?;
    let ratio = BigRational::new(BigInt::from(l as u64 - 1), BigInt::from((l * d - 1) as u64));
    Ok(ratio * s_p(model)?)
}

/// Both routes, compared exactly.
pub fn s_x(l: usize, d: usize, model: &ValuationModel) -> Result<BigRational> {
    let direct = s_x_direct(l, d, model)?;
    let transfer = s_x_transfer(l, d, model)?;
    if direct != transfer {
        return Err(Error::OracleMismatch(format!(
            "S-invariant routes disagree: direct {direct} vs transfer {transfer}"
        )));
    }
    Ok(direct)
}

/// The exact identity
/// (l-1) C(ld-2, l-1) (l(d-1)-1)! (l-1)! / (ld-1)! = (l-1)/(ld-1)
/// behind the transfer constant.
pub fn beta_identity(l: usize, d: usize) -> Result<bool> {
    check_family(l, d)?;
    let lhs = BigRational::new(
        BigInt::from(l as u64 - 1)
            * binomial((l * d - 2) as i64, l as i64 - 1)?
            * factorial((l * (d - 1) - 1) as u64)
            * factorial((l - 1) as u64),
        factorial((l * d - 1) as u64),
    );
    let rhs = BigRational::new(BigInt::from(l as u64 - 1), BigInt::from((l * d - 1) as u64));
    Ok(lhs == rhs)
}

/// One row of the stability certificate: the A/S ratio of a witness model
/// against the structural bound (ld-1)/(l-1).
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationReport {
    /// None for the bound-only report of the zero-dimensional base.
    pub model: Option<ValuationKind>,
    pub log_discrepancy: Option<BigRational>,
    pub s_base: Option<BigRational>,
    pub s_value: Option<BigRational>,
    pub ratio: Option<BigRational>,
    pub bound: BigRational,
    pub certified: bool,
}

/// A/S certificates for the given witness models. For l = 2 the base is a
/// point and carries no divisorial valuation: the report then records only
/// the structural bound (2d-1) > 1.
pub fn delta_certificate(
    l: usize,
    d: usize,
    models: &[ValuationModel],
) -> Result<Vec<ValuationReport>> {
    check_family(l, d)?;
    let bound = BigRational::new(BigInt::from((l * d - 1) as u64), BigInt::from(l as u64 - 1));
    if l == 2 {
        return Ok(vec![ValuationReport {
            model: None,
            log_discrepancy: None,
            s_base: None,
            s_value: None,
            ratio: None,
            certified: bound > BigRational::one(),
            bound,
        }]);
    }
    let mut out = Vec::with_capacity(models.len());
    for model in models {
        let a = model.log_discrepancy()?;
        let s_base = s_p(model)?;
        let s_value = s_x(l, d, model)?;
        let ratio = &a / &s_value;
        let certified = ratio >= bound && ratio > BigRational::one();
        out.push(ValuationReport {
            model: Some(model.kind()),
            log_discrepancy: Some(a),
            s_base: Some(s_base),
            s_value: Some(s_value),
            ratio: Some(ratio),
            bound: bound.clone(),
            certified,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn s_base_values() {
        // hyperplane order on the projective line: S = 1
        assert_eq!(s_p(&ValuationModel::hyperplane_order(1)).unwrap(), rat(1, 1));
        // point blow-up on the projective plane: S = n = 2
        assert_eq!(s_p(&ValuationModel::point_blowup(2)).unwrap(), rat(2, 1));
        // hyperplane order on any n-space has S = 1
        for n in 1..=5 {
            assert_eq!(s_p(&ValuationModel::hyperplane_order(n)).unwrap(), rat(1, 1));
        }
        assert!(s_p(&ValuationModel::trivial(2)).is_err());
    }

    #[test]
    fn s_base_scales_linearly() {
        let model = ValuationModel::point_blowup(2);
        let scaled = model.clone().with_scale(rat(3, 2)).unwrap();
        assert_eq!(
            s_p(&scaled).unwrap(),
            rat(3, 2) * s_p(&model).unwrap()
        );
        assert!(model.clone().with_scale(rat(0, 1)).is_err());
    }

    #[test]
    fn anticanonical_volume() {
        assert_eq!(vol_minus_k(2, 3).unwrap(), BigInt::from(243));
        assert_eq!(vol_minus_k(3, 2).unwrap(), BigInt::from(512));
        assert_eq!(vol_minus_k(3, 3).unwrap(), BigInt::from(839808));
        // full-volume evaluation at alpha = 0 with the trivial model
        for (l, d) in [(2usize, 3usize), (3, 2), (3, 3)] {
            let v = vol_x(l, d, &ValuationModel::trivial(l - 2), &rat(0, 1)).unwrap();
            assert_eq!(v, BigRational::from_integer(vol_minus_k(l, d).unwrap()));
        }
        // a divisorial model at alpha = 0 also recovers the full volume
        let v = vol_x(3, 2, &ValuationModel::point_blowup(1), &rat(0, 1)).unwrap();
        assert_eq!(v, rat(512, 1));
    }

    #[test]
    fn volume_is_monotone_in_alpha() {
        let model = ValuationModel::point_blowup(1);
        let mut last = vol_x(3, 2, &model, &rat(0, 1)).unwrap();
        assert!(last.is_positive());
        for step in 1..=8 {
            let alpha = rat(step, 4);
            let v = vol_x(3, 2, &model, &alpha).unwrap();
            assert!(v <= last);
            assert!(!v.is_negative());
            last = v;
        }
        // exhausted far past the pseudoeffective threshold
        assert!(vol_x(3, 2, &model, &rat(100, 1)).unwrap().is_zero());
    }

    #[test]
    fn s_routes_agree_small() {
        let model = ValuationModel::hyperplane_order(1);
        assert_eq!(s_x(3, 2, &model).unwrap(), rat(2, 5));
        let model = ValuationModel::point_blowup(1);
        assert_eq!(s_x(3, 2, &model).unwrap(), rat(2, 5));
        // scaling the valuation scales S
        let scaled = ValuationModel::hyperplane_order(1)
            .with_scale(rat(7, 3))
            .unwrap();
        assert_eq!(s_x(3, 2, &scaled).unwrap(), rat(7, 3) * rat(2, 5));
    }

    #[test]
    fn beta_identity_examples() {
        assert!(beta_identity(2, 3).unwrap());
        assert!(beta_identity(3, 3).unwrap());
        assert!(beta_identity(2, 2).unwrap());
        // hand values behind the identity
        let lhs = BigRational::new(
            BigInt::from(1) * binomial(4, 1).unwrap() * factorial(3) * factorial(1),
            factorial(5),
        );
        assert_eq!(lhs, rat(1, 5));
    }

    #[test]
    fn delta_reports() {
        let models = ValuationModel::witnesses(3).unwrap();
        let reports = delta_certificate(3, 3, &models).unwrap();
        assert_eq!(reports.len(), 2);
        for r in &reports {
            assert!(r.certified);
            assert_eq!(r.ratio, Some(rat(4, 1)));
        }

        // l = 2: bound-only report
        let reports = delta_certificate(2, 4, &[]).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].bound, rat(7, 1));
        assert!(reports[0].certified);
        assert!(reports[0].model.is_none());

        assert!(ValuationModel::witnesses(2).is_err());
    }
}
