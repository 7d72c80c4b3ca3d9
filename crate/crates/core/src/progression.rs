//! The core construction: from (conic, map, t0) compute the modulus k, build
//! E_k, and send each rational point of E_k to a 3-term arithmetic
//! progression with common difference delta; sequence extension, the D4
//! action, and the square / congruum / Frey specializations.

use num_traits::{One, Zero};

use crate::conic::{disc_poly, eval_map, on_conic, point_at, Conic, LinFracMap, ProjPoint, QuadPoly, Sign};
use crate::curve::{ek_model, CurvePoint, EkCurve, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::exact::{height, int, is_rat_square, rat_sqrt, QuadExt, Rat};

use num_bigint::BigInt;
use num_integer::Integer;

/// A validated progression seed: t0 with Disc(t0) a nonzero rational square,
/// Disc'(t0) nonzero, and modulus k outside {0, 1}.
#[derive(Debug, Clone)]
pub struct ProgressionSeed {
    pub conic: Conic,
    pub map: LinFracMap,
    pub t0: Rat,
    pub disc: QuadPoly,
    pub sqrt_disc_t0: Rat,
    pub k: Rat,
}

/// The slopes u, v of the square-root secants at t +- delta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopePair {
    pub u: Rat,
    pub v: Rat,
}

/// Three conic points whose map values form an exact arithmetic progression.
#[derive(Debug, Clone)]
pub struct ApTriple {
    pub points: [ProjPoint; 3],
    pub delta: Rat,
    pub t_values: [Rat; 3],
}

/// The gap quantities A, B, C of the discriminant around t (renamed to avoid
/// clashing with the conic coefficients); gapC = gapA + gapB.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyTriple {
    pub gap_a: Rat,
    pub gap_b: Rat,
    pub gap_c: Rat,
}

/// Rational triangle with angle data kept in cos(theta) only; sin(theta)
/// enters relations exclusively in squared form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub cos_theta: Rat,
}

impl QuadPoly {
    /// c_n = Disc^(n)(t) / (n! Disc(t)) for n = 1, 2.
    pub fn c_quantities(&self, t: &Rat) -> Result<(Rat, Rat)> {
        let d = self.eval(t);
        if d.is_zero() {
            return Err(Error::DiscZeroAtSeed);
        }
        Ok((self.deriv(t) / &d, &self.c2 / &d))
    }
}

/// k = (Disc'(t0)^2 - 2 Disc(t0) Disc''(t0)) / Disc'(t0)^2.
pub fn modulus_k(disc: &QuadPoly, t0: &Rat) -> Result<Rat> {
    let d = disc.eval(t0);
    if d.is_zero() {
        return Err(Error::DiscZeroAtSeed);
    }
    let d1 = disc.deriv(t0);
    if d1.is_zero() {
        return Err(Error::DiscDerivZeroAtSeed);
    }
    let d2 = disc.deriv2();
    Ok((&d1 * &d1 - int(2) * &d * &d2) / (&d1 * &d1))
}

impl ProgressionSeed {
    pub fn new(conic: Conic, map: LinFracMap, t0: Rat) -> Result<Self> {
        if !conic.is_smooth() {
            return Err(Error::DegenerateConic);
        }
        let disc = disc_poly(&conic, &map);
        let d0 = disc.eval(&t0);
        if d0.is_zero() {
            return Err(Error::DiscZeroAtSeed);
        }
        let sqrt_disc_t0 = rat_sqrt(&d0).ok_or(Error::DiscNotSquare)?;
        let k = modulus_k(&disc, &t0)?;
        if k.is_zero() || k.is_one() {
            return Err(Error::ExcludedModulus(crate::exact::format_rat(&k)));
        }
        Ok(ProgressionSeed { conic, map, t0, disc, sqrt_disc_t0, k })
    }

    pub fn ek(&self) -> EkCurve {
        EkCurve::new(self.k.clone()).expect("seed k is outside {0,1}")
    }
}

/// delta = -(Disc(t0)/Disc'(t0)) * 4XY / (Y^2 + 2XY + kX^2).
///
/// delta = 0 exactly when XY = 0 (the 4-torsion orbit, constant progressions).
pub fn common_difference(disc: &QuadPoly, t0: &Rat, k: &Rat, p: &CurvePoint) -> Result<Rat> {
    let (x, y) = p.xy().ok_or(Error::PointAtInfinity)?;
    if x.is_zero() || y.is_zero() {
        // the 4-torsion orbit: delta = 0 (the formula is 0/0 at (0,0) itself)
        return Ok(Rat::zero());
    }
    let den = y * y + int(2) * x * y + k * x * x;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let d = disc.eval(t0);
    let d1 = disc.deriv(t0);
    if d1.is_zero() {
        return Err(Error::DiscDerivZeroAtSeed);
    }
    Ok(-(&d / &d1) * int(4) * x * y / &den)
}

/// Map an E_k point to the 3-term progression at t0 - delta, t0, t0 + delta.
pub fn three_term_ap(seed: &ProgressionSeed, p: &CurvePoint, sign: Sign) -> Result<ApTriple> {
    if !seed.ek().curve().contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let delta = common_difference(&seed.disc, &seed.t0, &seed.k, p)?;
    if delta.is_zero() {
        return Err(Error::TrivialProgression);
    }
    let t_values = [&seed.t0 - &delta, seed.t0.clone(), &seed.t0 + &delta];
    // guaranteed rational squares by the construction; asserted anyway
    for t in &t_values {
        if !is_rat_square(&seed.disc.eval(t)) {
            return Err(Error::DiscNotSquare);
        }
    }
    let points = [
        point_at(&seed.conic, &seed.map, &t_values[0], sign)?,
        point_at(&seed.conic, &seed.map, &t_values[1], sign)?,
        point_at(&seed.conic, &seed.map, &t_values[2], sign)?,
    ];
    for (pt, t) in points.iter().zip(&t_values) {
        debug_assert!(on_conic(&seed.conic, pt));
        debug_assert_eq!(eval_map(&seed.map, pt)?.as_rat(), Some(t));
    }
    Ok(ApTriple { points, delta, t_values })
}

/// One step of the sequence extension: t -> t + (c1 - 2u)/(u^2 - c2), which
/// keeps sqrt(Disc) rational.
pub fn extend_sequence(disc: &QuadPoly, t: &Rat, u: &Rat) -> Result<Rat> {
    let d = disc.eval(t);
    if d.is_zero() {
        return Err(Error::DiscZeroAtSeed);
    }
    if !is_rat_square(&d) {
        return Err(Error::DiscNotSquare);
    }
    let (c1, c2) = disc.c_quantities(t)?;
    let u2 = u * u;
    if u2 == c2 {
        return Err(Error::ExcludedLocus("u^2 = c2: delta infinite".into()));
    }
    let delta = (&c1 - int(2) * u) / (&u2 - &c2);
    Ok(t + delta)
}

/// Birational map (u, v) -> (X, Y) on E_k: X = 2k c1/(v - u - c1),
/// Y = 2k(2u - c1)/(v - u - c1).
pub fn uv_to_xy(k: &Rat, c1: &Rat, pair: &SlopePair) -> Result<CurvePoint> {
    let den = &pair.v - &pair.u - c1;
    if den.is_zero() {
        return Err(Error::ExcludedLocus("v - u - c1 = 0".into()));
    }
    let x = int(2) * k * c1 / &den;
    let y = int(2) * k * (int(2) * &pair.u - c1) / &den;
    Ok(CurvePoint::affine(x, y))
}

/// Inverse map: u = c1(Y + X)/(2X), v = c1(Y + 3X + 4k)/(2X).
pub fn xy_to_uv(k: &Rat, c1: &Rat, p: &CurvePoint) -> Result<SlopePair> {
    let (x, y) = p.xy().ok_or(Error::PointAtInfinity)?;
    if x.is_zero() {
        return Err(Error::ExcludedLocus("X = 0".into()));
    }
    let u = c1 * (y + x) / (int(2) * x);
    let v = c1 * (y + int(3) * x + int(4) * k) / (int(2) * x);
    Ok(SlopePair { u, v })
}

/// Translation by the 4-torsion point: sigma(P) = (0,0) + P. For X != 0 this
/// is the rational form X -> -4kY/X^2, Y -> 4k^2(X^2 - 4Y)/X^3; the
/// remaining points go through the group law.
pub fn sigma_action(k: &Rat, p: &CurvePoint) -> Result<CurvePoint> {
    let curve = ek_model(k);
    if !curve.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    if let Some((x, y)) = p.xy() {
        if !x.is_zero() {
            let x2 = x * x;
            let x3 = &x2 * x;
            let nx = int(-4) * k * y / &x2;
            let ny = int(4) * k * k * (&x2 - int(4) * y) / &x3;
            return Ok(CurvePoint::affine(nx, ny));
        }
    }
    curve.add(&CurvePoint::affine(int(0), int(0)), p)
}

/// Inversion: tau(P) = -P, i.e. X -> X, Y -> -Y - 4X - 4k.
pub fn tau_action(k: &Rat, p: &CurvePoint) -> Result<CurvePoint> {
    let curve = ek_model(k);
    if !curve.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    Ok(curve.neg(p))
}

/// Rational parametrization of the singular cubic E_1 (the node is (-2, 2)):
/// X = -4t/(t+1)^2, Y = 4(t-1)/(t+1)^3.
pub fn singular_param(t: &Rat) -> Result<CurvePoint> {
    let tp1 = t + int(1);
    if tp1.is_zero() {
        return Err(Error::ExcludedLocus("t = -1".into()));
    }
    let x = int(-4) * t / (&tp1 * &tp1);
    let y = int(4) * (t - int(1)) / (&tp1 * &tp1 * &tp1);
    Ok(CurvePoint::affine(x, y))
}

/// Recover the parameter: t = -(Y + 3X + 4)/(Y + X).
pub fn singular_param_inverse(p: &CurvePoint) -> Result<Rat> {
    let (x, y) = p.xy().ok_or(Error::PointAtInfinity)?;
    let den = y + x;
    if den.is_zero() {
        return Err(Error::ExcludedLocus("Y + X = 0".into()));
    }
    Ok(-(y + int(3) * x + int(4)) / &den)
}

/// Three squares in arithmetic progression:
/// ((t^2-2t-1)^2 : (t^2+1)^2 : (t^2+2t-1)^2).
pub fn three_squares_param(t: &Rat) -> (Rat, Rat, Rat) {
    let t2 = t * t;
    let y1 = &t2 - int(2) * t - int(1);
    let y2 = &t2 + int(1);
    let y3 = &t2 + int(2) * t - int(1);
    (&y1 * &y1, &y2 * &y2, &y3 * &y3)
}

/// Recover t = (x1 - x3)/(x1 - 2x2 + x3) from the square roots.
pub fn three_squares_recover(x1: &Rat, x2: &Rat, x3: &Rat) -> Result<Rat> {
    let den = x1 - int(2) * x2 + x3;
    if den.is_zero() {
        return Err(Error::ExcludedLocus("x1 - 2x2 + x3 = 0".into()));
    }
    Ok((x1 - x3) / &den)
}

/// The congruent-number curve Y^2 = X^3 - delta^2 X.
pub fn congruum_curve(delta: &Rat) -> WeierstrassCurve {
    WeierstrassCurve::new(int(0), int(0), int(0), -(delta * delta), int(0))
}

/// AP of square roots -> point: X = (x1-x3) delta / (x1-2x2+x3),
/// Y = -2 delta^2 / (x1-2x2+x3).
pub fn congruum_ap_to_curve(x1: &Rat, x2: &Rat, x3: &Rat, delta: &Rat) -> Result<(Rat, Rat)> {
    if delta.is_zero() {
        return Err(Error::ZeroInput);
    }
    if &(x2 * x2 - x1 * x1) != delta || &(x3 * x3 - x2 * x2) != delta {
        return Err(Error::NotArithmeticProgression);
    }
    let den = x1 - int(2) * x2 + x3;
    if den.is_zero() {
        return Err(Error::ExcludedLocus("x1 - 2x2 + x3 = 0".into()));
    }
    let x = (x1 - x3) * delta / &den;
    let y = int(-2) * delta * delta / &den;
    Ok((x, y))
}

/// Point -> AP of square roots: x1 = (X^2 - 2 delta X - delta^2)/(2Y), etc.
pub fn congruum_curve_to_ap(x: &Rat, y: &Rat, delta: &Rat) -> Result<(Rat, Rat, Rat)> {
    if y.is_zero() {
        return Err(Error::ExcludedLocus("Y = 0".into()));
    }
    let x2 = x * x;
    let d2 = delta * delta;
    let two_y = int(2) * y;
    let r1 = (&x2 - int(2) * delta * x - &d2) / &two_y;
    let r2 = (&x2 + &d2) / &two_y;
    let r3 = (&x2 + int(2) * delta * x - &d2) / &two_y;
    Ok((r1, r2, r3))
}

/// Point -> right triangle: a = (X^2 - delta^2)/Y, b = 2 delta X / Y,
/// c = (X^2 + delta^2)/Y; area (1/2)ab = delta.
pub fn congruum_curve_to_triangle(x: &Rat, y: &Rat, delta: &Rat) -> Result<Triangle> {
    if y.is_zero() {
        return Err(Error::ExcludedLocus("Y = 0".into()));
    }
    let x2 = x * x;
    let d2 = delta * delta;
    Ok(Triangle {
        a: (&x2 - &d2) / y,
        b: int(2) * delta * x / y,
        c: (&x2 + &d2) / y,
        cos_theta: int(0),
    })
}

/// Right triangle -> point: X = b delta/(c - a), Y = 2 delta^2/(c - a),
/// with delta = (1/2) a b.
pub fn congruum_triangle_to_curve(a: &Rat, b: &Rat, c: &Rat) -> Result<(Rat, Rat, Rat)> {
    if a * a + b * b != c * c {
        return Err(Error::InvalidInput("not a right triangle: a^2 + b^2 != c^2".into()));
    }
    let delta = a * b / int(2);
    if delta.is_zero() {
        return Err(Error::ZeroInput);
    }
    let den = c - a;
    if den.is_zero() {
        return Err(Error::ExcludedLocus("c = a".into()));
    }
    let x = b * &delta / &den;
    let y = int(2) * &delta * &delta / &den;
    Ok((x, y, delta))
}

/// Four squares in AP -> point on Y^2 = X^3 + 5X^2 + 4X:
/// X = 2(x1 - 3x2 - 3x3 + x4)/(x1 + 3x2 + 3x3 + x4),
/// Y = 6(x1 - x2 + x3 - x4)/(x1 + 3x2 + 3x3 + x4).
///
/// The transformation's indeterminacy locus hits two of the eight rational
/// points; those resolve to Infinity and (0, 0).
pub fn four_squares_to_curve(x1: &Rat, x2: &Rat, x3: &Rat, x4: &Rat) -> Result<CurvePoint> {
    let sq = |v: &Rat| v * v;
    if sq(x1) - int(2) * sq(x2) + sq(x3) != int(0) || sq(x2) - int(2) * sq(x3) + sq(x4) != int(0) {
        return Err(Error::NotArithmeticProgression);
    }
    let den = x1 + int(3) * x2 + int(3) * x3 + x4;
    let xnum = int(2) * (x1 - int(3) * x2 - int(3) * x3 + x4);
    let ynum = int(6) * (x1 - x2 + x3 - x4);
    if den.is_zero() {
        // both exceptional rays have xnum = 0 too; the Y-numerator separates
        // them: (-1 : -1 : 1 : 1) -> infinity, (-1 : 1 : -1 : 1) -> (0, 0)
        debug_assert!(xnum.is_zero());
        return if ynum.is_zero() {
            Ok(CurvePoint::Infinity)
        } else {
            Ok(CurvePoint::affine(int(0), int(0)))
        };
    }
    Ok(CurvePoint::affine(xnum / &den, ynum / &den))
}

/// Point -> four-square root ratios (x1 : x2 : x3 : x4), normalized to x4 = 1
/// away from the exceptional fibers.
pub fn four_squares_from_curve(p: &CurvePoint) -> Result<(Rat, Rat, Rat, Rat)> {
    let (x, y) = match p.xy() {
        None => return Ok((int(-1), int(-1), int(1), int(1))),
        Some(v) => v,
    };
    let den = int(6) * x + int(3) * x * x + int(2) * y - x * y;
    if den.is_zero() {
        if x.is_zero() && y.is_zero() {
            return Ok((int(-1), int(1), int(-1), int(1)));
        }
        return Err(Error::ExcludedLocus("6X + 3X^2 + 2Y - XY = 0".into()));
    }
    let r1 = (int(6) * x + int(3) * x * x - int(2) * y + x * y) / &den;
    let r2 = (int(2) * x - x * x - int(2) * y - x * y) / &den;
    let r3 = (int(2) * x - x * x + int(2) * y + x * y) / &den;
    Ok((r1, r2, r3, int(1)))
}

/// Four squares in arithmetic progression over Q(sqrt(k)) from a rational
/// point (U, V) on the twist Y^2 = X^3 + 5kX^2 + 4k^2 X with V != 0:
///
///   y1 = (3kU(2k+U) - sqrt(k) V (2k-U))^2
///   y2 = ( kU(2k-U) - sqrt(k) V (2k+U))^2
///   y3 = ( kU(2k-U) + sqrt(k) V (2k+U))^2
///   y4 = (3kU(2k+U) + sqrt(k) V (2k-U))^2
pub fn four_squares_from_twist(k: &Rat, u: &Rat, v: &Rat) -> Result<[QuadExt; 4]> {
    let twist = crate::curve::twist_x024(k)?;
    if !twist.contains(&CurvePoint::affine(u.clone(), v.clone())) {
        return Err(Error::PointNotOnCurve);
    }
    if v.is_zero() {
        return Err(Error::ExcludedLocus("V = 0 (2-torsion)".into()));
    }
    let sqrt_k = QuadExt::sqrt_of_rat(k)?;
    let p = k * u * (int(2) * k - u); // inner X-term
    let r = int(3) * k * u * (int(2) * k + u); // outer X-term
    let q = sqrt_k.scale(&(v * (int(2) * k + u))); // inner surd term
    let s = sqrt_k.scale(&(v * (int(2) * k - u))); // outer surd term
    let rq = QuadExt::from_rat(r);
    let pq = QuadExt::from_rat(p);
    Ok([
        rq.sub(&s)?.square(),
        pq.sub(&q)?.square(),
        pq.add(&q)?.square(),
        rq.add(&s)?.square(),
    ])
}

/// The gap quantities of Disc around t: gapA = Disc(t) - Disc(t - delta),
/// gapB = Disc(t + delta) - Disc(t), gapC = gapA + gapB. The Taylor closed
/// forms via Disc' and Disc'' are exact since Disc is quadratic.
pub fn frey_quantities(disc: &QuadPoly, t: &Rat, delta: &Rat) -> FreyTriple {
    let d0 = disc.eval(t);
    let gap_a = &d0 - disc.eval(&(t - delta));
    let gap_b = disc.eval(&(t + delta)) - &d0;
    let gap_c = &gap_a + &gap_b;
    FreyTriple { gap_a, gap_b, gap_c }
}

impl FreyTriple {
    /// Closed form gapA = Disc'(t) delta - Disc''(t) delta^2/2, gapB with +.
    pub fn closed_form(disc: &QuadPoly, t: &Rat, delta: &Rat) -> FreyTriple {
        let d1 = disc.deriv(t);
        let d2 = disc.deriv2();
        let half_quad = &d2 * delta * delta / int(2);
        let gap_a = &d1 * delta - &half_quad;
        let gap_b = &d1 * delta + &half_quad;
        let gap_c = &gap_a + &gap_b;
        FreyTriple { gap_a, gap_b, gap_c }
    }

    /// The Frey curve Y^2 = X(X - A)(X + B).
    pub fn curve(&self) -> WeierstrassCurve {
        let b_minus_a = &self.gap_b - &self.gap_a;
        let ab = &self.gap_a * &self.gap_b;
        WeierstrassCurve::new(int(0), b_minus_a, int(0), -ab, int(0))
    }
}

/// AP of square roots with gaps (A, B) -> point on the Frey curve:
/// X = AB(x1 - x3)/(B x1 - C x2 + A x3), Y = -ABC/(same).
pub fn frey_ap_to_curve(x1: &Rat, x2: &Rat, x3: &Rat, triple: &FreyTriple) -> Result<(Rat, Rat)> {
    let (a, b, c) = (&triple.gap_a, &triple.gap_b, &triple.gap_c);
    if &(x2 * x2 - x1 * x1) != a || &(x3 * x3 - x2 * x2) != b {
        return Err(Error::NotArithmeticProgression);
    }
    let den = b * x1 - c * x2 + a * x3;
    if den.is_zero() {
        return Err(Error::ExcludedLocus("B x1 - C x2 + A x3 = 0".into()));
    }
    let x = a * b * (x1 - x3) / &den;
    let y = -(a * b * c) / &den;
    Ok((x, y))
}

/// Point -> AP of square roots: x1 = (X^2 - 2AX - AB)/(2Y), x2 = (X^2 + AB)/(2Y),
/// x3 = (X^2 + 2BX - AB)/(2Y).
pub fn frey_curve_to_ap(x: &Rat, y: &Rat, triple: &FreyTriple) -> Result<(Rat, Rat, Rat)> {
    if y.is_zero() {
        return Err(Error::ExcludedLocus("Y = 0".into()));
    }
    let (a, b) = (&triple.gap_a, &triple.gap_b);
    let x2 = x * x;
    let ab = a * b;
    let two_y = int(2) * y;
    let r1 = (&x2 - int(2) * a * x - &ab) / &two_y;
    let r2 = (&x2 + &ab) / &two_y;
    let r3 = (&x2 + int(2) * b * x - &ab) / &two_y;
    Ok((r1, r2, r3))
}

/// Point -> theta-triangle: a = (X^2 + (B-A)X - AB)/Y, b = CX/Y,
/// c = (X^2 + AB)/Y, cos(theta) = (B - A)/C.
pub fn frey_curve_to_triangle(x: &Rat, y: &Rat, triple: &FreyTriple) -> Result<Triangle> {
    if y.is_zero() {
        return Err(Error::ExcludedLocus("Y = 0".into()));
    }
    let (a, b, c) = (&triple.gap_a, &triple.gap_b, &triple.gap_c);
    if c.is_zero() {
        return Err(Error::ExcludedLocus("C = 0: theta undefined".into()));
    }
    let x2 = x * x;
    let ab = a * b;
    Ok(Triangle {
        a: (&x2 + (b - a) * x - &ab) / y,
        b: c * x / y,
        c: (&x2 + &ab) / y,
        cos_theta: (b - a) / c,
    })
}

/// theta-triangle -> point: X = 2ABb/((B-A)b + C(c-a)), Y = 2ABC/(same).
pub fn frey_triangle_to_curve(tri: &Triangle, triple: &FreyTriple) -> Result<(Rat, Rat)> {
    let (a, b, c) = (&triple.gap_a, &triple.gap_b, &triple.gap_c);
    let den = (b - a) * &tri.b + c * (&tri.c - &tri.a);
    if den.is_zero() {
        return Err(Error::ExcludedLocus("(B-A)b + C(c-a) = 0".into()));
    }
    let x = int(2) * a * b * &tri.b / &den;
    let y = int(2) * a * b * c / &den;
    Ok((x, y))
}

impl Triangle {
    /// a^2 - 2ab cos(theta) + b^2 = c^2.
    pub fn law_of_cosines_holds(&self) -> bool {
        &self.a * &self.a - int(2) * &self.a * &self.b * &self.cos_theta + &self.b * &self.b
            == &self.c * &self.c
    }

    /// Squared-area relation (ab)^2 (1 - cos^2 theta) = 4AB, kept rational.
    pub fn squared_area_matches(&self, triple: &FreyTriple) -> bool {
        let ab = &self.a * &self.b;
        &ab * &ab * (int(1) - &self.cos_theta * &self.cos_theta)
            == int(4) * &triple.gap_a * &triple.gap_b
    }
}

/// All rationals p/q in lowest terms with max(|p|, q) <= bound, 0 included.
pub fn rationals_up_to_height(bound: u32) -> Vec<Rat> {
    let mut out = Vec::new();
    let b = bound as i64;
    for den in 1..=b {
        for num in -b..=b {
            if BigInt::from(num).gcd(&BigInt::from(den)) == BigInt::one() {
                out.push(crate::exact::rat(num, den));
            }
        }
    }
    out.sort();
    out
}

/// Deterministic grid search for points of E_k: every X of height <= bound
/// whose Y-quadratic has a rational root, both roots, sorted by
/// (height(X), X, Y). Includes the 4-torsion orbit when it lands in range.
pub fn ek_point_search(k: &Rat, bound: u32) -> Vec<CurvePoint> {
    let curve = ek_model(k);
    let mut found = Vec::new();
    for x in rationals_up_to_height(bound) {
        // Y^2 + (4X + 4k) Y - (X^3 + kX^2) = 0
        let p = int(4) * &x + int(4) * k;
        let q = -(&x * &x * &x + k * &x * &x);
        let disc = &p * &p - int(4) * &q;
        if let Some(s) = rat_sqrt(&disc) {
            let y1 = (-&p + &s) / int(2);
            let y2 = (-&p - &s) / int(2);
            let pt1 = CurvePoint::affine(x.clone(), y1);
            debug_assert!(curve.contains(&pt1));
            found.push(pt1);
            if !s.is_zero() {
                found.push(CurvePoint::affine(x.clone(), y2));
            }
        }
    }
    found.sort_by(|a, b| {
        let ha = a.xy().map(|(x, _)| height(x));
        let hb = b.xy().map(|(x, _)| height(x));
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    found.dedup();
    found
}

/// Full progression search: build the seed, search E_k points up to the
/// height bound, and emit every nontrivial 3-term progression. The singular
/// modulus k = 1 is routed through the nodal parametrization of E_1; k = 0
/// is rejected.
pub fn ap_search(
    conic: &Conic,
    map: &LinFracMap,
    t0: &Rat,
    bound: u32,
    sign: Sign,
) -> Result<Vec<ApTriple>> {
    if !conic.is_smooth() {
        return Err(Error::DegenerateConic);
    }
    let disc = disc_poly(conic, map);
    let d0 = disc.eval(t0);
    if d0.is_zero() {
        return Err(Error::DiscZeroAtSeed);
    }
    let sqrt_disc_t0 = rat_sqrt(&d0).ok_or(Error::DiscNotSquare)?;
    let _ = sqrt_disc_t0;
    let k = modulus_k(&disc, t0)?;
    if k.is_zero() {
        return Err(Error::ExcludedModulus("0".into()));
    }

    let mut out: Vec<ApTriple> = Vec::new();
    let push_unique = |triple: ApTriple, out: &mut Vec<ApTriple>| {
        if !out.iter().any(|t| t.delta == triple.delta && t.t_values == triple.t_values) {
            out.push(triple);
        }
    };

    if k.is_one() {
        // singular route: rational parametrization of the nodal cubic E_1
        for t_param in rationals_up_to_height(bound) {
            let p = match singular_param(&t_param) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let delta = match common_difference(&disc, t0, &k, &p) {
                Ok(d) => d,
                Err(_) => continue,
            };
            if delta.is_zero() {
                continue;
            }
            if let Some(triple) = build_triple(conic, map, &disc, t0, &delta, sign) {
                push_unique(triple, &mut out);
            }
        }
    } else {
        let seed = ProgressionSeed::new(conic.clone(), map.clone(), t0.clone())?;
        for p in ek_point_search(&k, bound) {
            match three_term_ap(&seed, &p, sign) {
                Ok(triple) => push_unique(triple, &mut out),
                Err(Error::TrivialProgression) | Err(Error::PointAtInfinity) => continue,
                Err(Error::DivisionByZero) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

fn build_triple(
    conic: &Conic,
    map: &LinFracMap,
    disc: &QuadPoly,
    t0: &Rat,
    delta: &Rat,
    sign: Sign,
) -> Option<ApTriple> {
    let t_values = [t0 - delta, t0.clone(), t0 + delta];
    for t in &t_values {
        if !is_rat_square(&disc.eval(t)) {
            return None;
        }
    }
    let points = [
        point_at(conic, map, &t_values[0], sign).ok()?,
        point_at(conic, map, &t_values[1], sign).ok()?,
        point_at(conic, map, &t_values[2], sign).ok()?,
    ];
    Some(ApTriple { points, delta: delta.clone(), t_values })
}
