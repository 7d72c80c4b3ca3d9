//! Long Weierstrass curves with the exact chord-tangent group law, the
//! universal 4-torsion family E_k, normalization of a rational 4-torsion
//! point into E_k form, and the quadratic twists of Y^2 = X^3 + 5X^2 + 4X.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, QuadExt, Rat};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a1: Rat,
    pub a2: Rat,
    pub a3: Rat,
    pub a4: Rat,
    pub a6: Rat,
}

/// Affine point or the identity at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine(Rat, Rat),
}

impl CurvePoint {
    pub fn affine(x: Rat, y: Rat) -> Self {
        CurvePoint::Affine(x, y)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn xy(&self) -> Option<(&Rat, &Rat)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(x, y) => Some((x, y)),
        }
    }
}

impl WeierstrassCurve {
    pub fn new(a1: Rat, a2: Rat, a3: Rat, a4: Rat, a6: Rat) -> Self {
        WeierstrassCurve { a1, a2, a3, a4, a6 }
    }

    pub fn b2(&self) -> Rat {
        &self.a1 * &self.a1 + int(4) * &self.a2
    }

    pub fn b4(&self) -> Rat {
        &self.a1 * &self.a3 + int(2) * &self.a4
    }

    pub fn b6(&self) -> Rat {
        &self.a3 * &self.a3 + int(4) * &self.a6
    }

    pub fn b8(&self) -> Rat {
        &self.a1 * &self.a1 * &self.a6 + int(4) * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4
    }

    pub fn c4(&self) -> Rat {
        let b2 = self.b2();
        &b2 * &b2 - int(24) * self.b4()
    }

    /// Discriminant -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6.
    pub fn discriminant(&self) -> Rat {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -&b2 * &b2 * &b8 - int(8) * &b4 * &b4 * &b4 - int(27) * &b6 * &b6 + int(9) * &b2 * &b4 * &b6
    }

    pub fn is_elliptic(&self) -> bool {
        !self.discriminant().is_zero()
    }

    /// j-invariant c4^3 / Delta.
    pub fn j_invariant(&self) -> Result<Rat> {
        let delta = self.discriminant();
        if delta.is_zero() {
            return Err(Error::SingularCurve("j undefined, discriminant zero".into()));
        }
        let c4 = self.c4();
        Ok(&c4 * &c4 * &c4 / delta)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => {
                y * y + &self.a1 * x * y + &self.a3 * y
                    == x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6
            }
        }
    }

    /// Curve membership for coordinates in a quadratic extension.
    pub fn contains_quadext(&self, x: &QuadExt, y: &QuadExt) -> Result<bool> {
        let lhs = y
            .square()
            .add(&x.mul(y)?.scale(&self.a1))?
            .add(&y.scale(&self.a3))?;
        let rhs = x
            .square()
            .mul(x)?
            .add(&x.square().scale(&self.a2))?
            .add(&x.scale(&self.a4))?
            .add(&QuadExt::from_rat(self.a6.clone()))?;
        Ok(lhs.sub(&rhs)?.is_zero())
    }

    /// Negation y -> -y - a1 x - a3.
    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                CurvePoint::Affine(x.clone(), -y - &self.a1 * x - &self.a3)
            }
        }
    }

    /// Chord-tangent addition on the long form, no short-form reduction.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::PointNotOnCurve);
        }
        let (x1, y1) = match p.xy() {
            None => return Ok(q.clone()),
            Some(v) => v,
        };
        let (x2, y2) = match q.xy() {
            None => return Ok(p.clone()),
            Some(v) => v,
        };
        let (lambda, nu) = if x1 != x2 {
            let lambda = (y2 - y1) / (x2 - x1);
            let nu = y1 - &lambda * x1;
            (lambda, nu)
        } else {
            // x1 == x2: either inverse points, or a tangent doubling
            let neg_y = -y2 - &self.a1 * x2 - &self.a3;
            if *y1 == neg_y {
                return Ok(CurvePoint::Infinity);
            }
            let den = int(2) * y1 + &self.a1 * x1 + &self.a3;
            let lambda =
                (int(3) * x1 * x1 + int(2) * &self.a2 * x1 + &self.a4 - &self.a1 * y1) / &den;
            let nu = (-(x1 * x1 * x1) + &self.a4 * x1 + int(2) * &self.a6 - &self.a3 * y1) / &den;
            (lambda, nu)
        };
        let x3 = &lambda * &lambda + &self.a1 * &lambda - &self.a2 - x1 - x2;
        let y3 = -(&lambda + &self.a1) * &x3 - &nu - &self.a3;
        Ok(CurvePoint::Affine(x3, y3))
    }

    /// n-fold sum by double-and-add; negative n negates.
    pub fn mul(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        if !self.contains(p) {
            return Err(Error::PointNotOnCurve);
        }
        let (mut n, mut base) = if n < 0 {
            (n.unsigned_abs(), self.neg(p))
        } else {
            (n as u64, p.clone())
        };
        let mut acc = CurvePoint::Infinity;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Exact order of a torsion point, capped at 12 (Mazur's bound over Q).
    pub fn order_up_to_12(&self, p: &CurvePoint) -> Result<Option<u32>> {
        let mut acc = p.clone();
        for n in 1..=12u32 {
            if acc.is_infinity() {
                return Ok(Some(n));
            }
            acc = self.add(&acc, p)?;
        }
        Ok(None) // order > 12 or infinite
    }

    /// Change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t, giving
    /// the model in the primed coordinates.
    pub fn transform(&self, u: &Rat, r: &Rat, s: &Rat, t: &Rat) -> Result<WeierstrassCurve> {
        if u.is_zero() {
            return Err(Error::InvalidInput("u must be nonzero".into()));
        }
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        let a1 = (&self.a1 + int(2) * s) / u;
        let a2 = (&self.a2 - s * &self.a1 + int(3) * r - s * s) / &u2;
        let a3 = (&self.a3 + r * &self.a1 + int(2) * t) / &u3;
        let a4 = (&self.a4 - s * &self.a3 + int(2) * r * &self.a2 - (t + r * s) * &self.a1
            + int(3) * r * r
            - int(2) * s * t)
            / &u4;
        let a6 = (&self.a6 + r * &self.a4 + r * r * &self.a2 + r * r * r
            - t * &self.a3
            - t * t
            - r * t * &self.a1)
            / &u6;
        Ok(WeierstrassCurve::new(a1, a2, a3, a4, a6))
    }

    /// Image of a point under the same change of variables:
    /// x' = (x - r)/u^2, y' = (y - s(x - r) - t)/u^3.
    pub fn transform_point(u: &Rat, r: &Rat, s: &Rat, t: &Rat, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                let u2 = u * u;
                let u3 = &u2 * u;
                let xr = x - r;
                CurvePoint::Affine(&xr / &u2, (y - s * &xr - t) / &u3)
            }
        }
    }
}

/// The family E_k: Y^2 + 4XY + 4kY = X^3 + kX^2, elliptic iff k is outside {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EkCurve {
    k: Rat,
    curve: WeierstrassCurve,
}

impl EkCurve {
    pub fn new(k: Rat) -> Result<Self> {
        if k.is_zero() || k.is_one() {
            return Err(Error::ExcludedModulus(crate::exact::format_rat(&k)));
        }
        let curve = ek_model(&k);
        Ok(EkCurve { k, curve })
    }

    pub fn k(&self) -> &Rat {
        &self.k
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    /// The marked 4-torsion point (0, 0).
    pub fn torsion_point(&self) -> CurvePoint {
        CurvePoint::Affine(int(0), int(0))
    }
}

/// The Weierstrass model of E_k, without the k exclusion (the k in {0,1}
/// degenerations are used by the singular-parametrization path).
pub fn ek_model(k: &Rat) -> WeierstrassCurve {
    WeierstrassCurve::new(int(4), k.clone(), int(4) * k, int(0), int(0))
}

/// [4](0:0:1) on Y^2 + 4XY + 4 k3 Y = X^3 + k2 X^2, as the projective triple
/// (4 k2 (k3-k2)(16 k3^2 - 16 k3 k2 + k2^3) :
///  k2^3 (32 k3^2 - 48 k3 k2 + 16 k2^2 + k2^3) : 64 (k3-k2)^3).
pub fn four_mult_formula(k2: &Rat, k3: &Rat) -> Result<(Rat, Rat, Rat)> {
    let curve = WeierstrassCurve::new(int(4), k2.clone(), int(4) * k3, int(0), int(0));
    if !curve.is_elliptic() {
        return Err(Error::SingularCurve(format!(
            "k2 = {}, k3 = {}",
            crate::exact::format_rat(k2),
            crate::exact::format_rat(k3)
        )));
    }
    let d = k3 - k2;
    let x = int(4) * k2 * &d * (int(16) * k3 * k3 - int(16) * k3 * k2 + k2 * k2 * k2);
    let y = k2
        * k2
        * k2
        * (int(32) * k3 * k3 - int(48) * k3 * k2 + int(16) * k2 * k2 + k2 * k2 * k2);
    let z = int(64) * &d * &d * &d;
    Ok((x, y, z))
}

/// Projective equality of a (X:Y:Z) triple with an affine-or-infinity point
/// on a Weierstrass model: Z = 0 matches Infinity, otherwise (X/Z, Y/Z).
pub fn proj_triple_eq(triple: &(Rat, Rat, Rat), p: &CurvePoint) -> bool {
    let (x, y, z) = triple;
    if z.is_zero() {
        // the only point at infinity on a Weierstrass model is (0:1:0)
        return p.is_infinity() && x.is_zero() && !y.is_zero();
    }
    match p.xy() {
        None => false,
        Some((px, py)) => &(x / z) == px && &(y / z) == py,
    }
}

/// Change-of-variables data taking a curve with a rational 4-torsion point
/// into E_k form with the point at (0, 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub k: Rat,
    pub k1: Rat,
    pub x0: Rat,
    pub y0: Rat,
    /// a1 of the source curve, needed to replay the substitution.
    pub a1: Rat,
}

impl Normalization {
    /// X = 16 k1^2 (x - x0), Y = 64 k1^3 (y - y0) + 32 k1^2 (a1 k1 - 1)(x - x0).
    pub fn apply(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                let k1 = &self.k1;
                let dx = x - &self.x0;
                let dy = y - &self.y0;
                let big_x = int(16) * k1 * k1 * &dx;
                let big_y = int(64) * k1 * k1 * k1 * &dy
                    + int(32) * k1 * k1 * (&self.a1 * k1 - int(1)) * &dx;
                CurvePoint::Affine(big_x, big_y)
            }
        }
    }
}

/// Normalize a curve with an affine point of order 4 into E_k form.
///
/// Computes k1, k2, k3 from the b-invariants, demands k2 = k3 (the order-4
/// condition) and k outside {0, 1}, and returns the substitution data. The
/// image of P is (0, 0) on E_k.
pub fn normalize_four_torsion(
    curve: &WeierstrassCurve,
    p: &CurvePoint,
) -> Result<(EkCurve, Normalization)> {
    if !curve.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let (x0, y0) = p.xy().ok_or(Error::PointAtInfinity)?;
    let (b2, b4, b6, b8) = (curve.b2(), curve.b4(), curve.b6(), curve.b8());
    let den = int(6) * x0 * x0 + &b2 * x0 + &b4;
    if den.is_zero() {
        return Err(Error::NotOrderFour("point is 2-torsion (zero denominator)".into()));
    }
    let num1 = int(2) * y0 + &curve.a1 * x0 + &curve.a3;
    let k1 = &num1 / &den;
    let k2 = int(16)
        * (int(3) * x0 * x0 * x0 * x0
            + &b2 * x0 * x0 * x0
            + int(3) * &b4 * x0 * x0
            + int(3) * &b6 * x0
            + &b8)
        / (&den * &den);
    let k3 = int(16) * &num1 * &num1 * &num1 * &num1 / (&den * &den * &den);
    if k2 != k3 {
        return Err(Error::NotOrderFour("k2 != k3".into()));
    }
    let ek = EkCurve::new(k2)?;
    let norm = Normalization {
        k: ek.k().clone(),
        k1,
        x0: x0.clone(),
        y0: y0.clone(),
        a1: curve.a1.clone(),
    };
    Ok((ek, norm))
}

/// The quadratic twist Y^2 = X^3 + 5kX^2 + 4k^2 X of Y^2 = X^3 + 5X^2 + 4X.
pub fn twist_x024(k: &Rat) -> Result<WeierstrassCurve> {
    if k.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(WeierstrassCurve::new(int(0), int(5) * k, int(0), int(4) * k * k, int(0)))
}

/// The untwisted curve Y^2 = X^3 + 5X^2 + 4X.
pub fn x024_curve() -> WeierstrassCurve {
    WeierstrassCurve::new(int(0), int(5), int(0), int(4), int(0))
}

/// Lift a point (U, V) on the k-twist to the point (U/k, (V/k^2) sqrt(k))
/// on Y^2 = X^3 + 5X^2 + 4X over Q(sqrt(k)).
pub fn lift_twist_point(k: &Rat, u: &Rat, v: &Rat) -> Result<(QuadExt, QuadExt)> {
    let twist = twist_x024(k)?;
    if !twist.contains(&CurvePoint::Affine(u.clone(), v.clone())) {
        return Err(Error::PointNotOnCurve);
    }
    let x = QuadExt::from_rat(u / k);
    let sqrt_k = QuadExt::sqrt_of_rat(k)?;
    let y = sqrt_k.scale(&(v / (k * k)));
    Ok((x, y))
}
