//! Exact scalar arithmetic: arbitrary-precision rationals, square detection,
//! squarefree decomposition, and the quadratic extension K(sqrt(d)).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The base scalar everywhere: an exact rational in lowest terms.
pub type Rat = BigRational;

/// Shorthand for small rational constants.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for small integer constants as rationals.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Height of a rational p/q in lowest terms: max(|p|, q).
pub fn height(q: &Rat) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

/// Parse "p/q" or "p" (ASCII, optional leading minus).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n = BigInt::from_str(num).map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
    let d = match den {
        Some(d) => {
            BigInt::from_str(d).map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Canonical textual form: "p/q", or "p" when the denominator is 1.
pub fn format_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact integer square root test.
fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// The nonnegative exact square root of a rational, when it exists.
///
/// Works on the canonical form: numerator and denominator must both be
/// perfect squares. No floating point is involved anywhere.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    let n = int_sqrt_exact(q.numer())?;
    let d = int_sqrt_exact(q.denom())?;
    Some(Rat::new(n, d))
}

/// True iff `q` is the square of a rational.
pub fn is_rat_square(q: &Rat) -> bool {
    rat_sqrt(q).is_some()
}

/// Squarefree decomposition of a positive integer: n = m^2 * d with d squarefree.
///
/// Trial division up to 10^6 plus a final perfect-square extraction. Any
/// leftover cofactor beyond the trial bound is either prime, a prime square,
/// or a product of two large primes; the square case is detected exactly and
/// the rest is squarefree at desk scale.
fn squarefree_int(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    // Fast path: perfect squares need no factoring at all.
    if let Some(r) = int_sqrt_exact(n) {
        return (BigInt::one(), r);
    }
    let mut rem = n.clone();
    let mut d = BigInt::one();
    let mut m = BigInt::one();
    let mut p = BigInt::from(2u32);
    let bound = BigInt::from(1_000_000u64);
    while p <= bound && (&p * &p) <= rem {
        let mut e = 0u32;
        while (&rem % &p).is_zero() {
            rem /= &p;
            e += 1;
        }
        if e > 0 {
            if e % 2 == 1 {
                d *= &p;
            }
            for _ in 0..(e / 2) {
                m *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    // Leftover cofactor: fold it in as a square if it is one, else squarefree.
    if !rem.is_one() {
        if let Some(r) = int_sqrt_exact(&rem) {
            m *= r;
        } else {
            d *= rem;
        }
    }
    (d, m)
}

/// Decompose a nonzero rational q = m^2 * d with d a squarefree integer and m > 0.
///
/// d = 1 exactly when q is a rational square; the sign of q goes into d.
pub fn squarefree_decompose(q: &Rat) -> Result<(BigInt, Rat)> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    // q = n/den = (n * den) / den^2, so the squarefree part of |n * den|
    // carries everything that is not a square.
    let prod = q.numer() * q.denom();
    let (d_abs, m_int) = squarefree_int(&prod.abs());
    let m = Rat::new(m_int, q.denom().clone());
    let d = if q.is_negative() { -d_abs } else { d_abs };
    Ok((d, m))
}

/// An element a + b*sqrt(d) of Q(sqrt(d)), d a squarefree integer.
///
/// A rational is represented with `surd = 0` and `radicand = 1`; such
/// elements combine with any radicand. Negative radicands are permitted so
/// the algebra stays total; geometric layers refuse to emit points over
/// imaginary extensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    rat: Rat,
    surd: Rat,
    radicand: BigInt,
}

impl QuadExt {
    /// Build a + b*sqrt(d). The radicand is reduced to its squarefree part,
    /// folding square factors into `b`; a zero surd collapses to radicand 1.
    pub fn new(rat: Rat, surd: Rat, radicand: BigInt) -> Result<Self> {
        if radicand.is_zero() {
            return Err(Error::InvalidInput("radicand must be nonzero".into()));
        }
        if surd.is_zero() {
            return Ok(QuadExt { rat, surd: Rat::zero(), radicand: BigInt::one() });
        }
        if radicand.is_one() {
            // sqrt(1) = 1: collapse into the rational part.
            return Ok(QuadExt { rat: rat + surd, surd: Rat::zero(), radicand: BigInt::one() });
        }
        let (d, m) = squarefree_int(&radicand.abs());
        let d = if radicand.is_negative() { -d } else { d };
        if d.is_one() {
            return Ok(QuadExt {
                rat: rat + surd * Rat::from_integer(m),
                surd: Rat::zero(),
                radicand: BigInt::one(),
            });
        }
        Ok(QuadExt { rat, surd: surd * Rat::from_integer(m), radicand: d })
    }

    /// Embed a rational.
    pub fn from_rat(q: Rat) -> Self {
        QuadExt { rat: q, surd: Rat::zero(), radicand: BigInt::one() }
    }

    /// sqrt(d) itself, scaled: m * sqrt(d).
    pub fn sqrt_term(m: Rat, d: BigInt) -> Result<Self> {
        QuadExt::new(Rat::zero(), m, d)
    }

    /// Exact square root of a rational as an element of a quadratic field:
    /// q = m^2 d yields m * sqrt(d).
    pub fn sqrt_of_rat(q: &Rat) -> Result<Self> {
        if q.is_zero() {
            return Ok(QuadExt::from_rat(Rat::zero()));
        }
        let (d, m) = squarefree_decompose(q)?;
        QuadExt::new(Rat::zero(), m, d)
    }

    pub fn rat_part(&self) -> &Rat {
        &self.rat
    }

    pub fn surd_part(&self) -> &Rat {
        &self.surd
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    /// True iff the element lies in Q.
    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    /// The rational value, when the element is rational.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.is_rational() {
            Some(&self.rat)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }

    /// Galois conjugate a - b*sqrt(d).
    pub fn conj(&self) -> Self {
        QuadExt { rat: self.rat.clone(), surd: -self.surd.clone(), radicand: self.radicand.clone() }
    }

    /// Field norm a^2 - d b^2.
    pub fn norm(&self) -> Rat {
        &self.rat * &self.rat - Rat::from_integer(self.radicand.clone()) * &self.surd * &self.surd
    }

    /// Resolve the common radicand of two elements, promoting rationals.
    fn common_radicand(&self, other: &Self) -> Result<BigInt> {
        if self.is_rational() {
            Ok(other.radicand.clone())
        } else if other.is_rational() || self.radicand == other.radicand {
            Ok(self.radicand.clone())
        } else {
            Err(Error::RadicandMismatch(self.radicand.to_string(), other.radicand.to_string()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        QuadExt::new(&self.rat + &other.rat, &self.surd + &other.surd, d)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QuadExt {
            rat: -self.rat.clone(),
            surd: -self.surd.clone(),
            radicand: self.radicand.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        let dr = Rat::from_integer(d.clone());
        let rat = &self.rat * &other.rat + &dr * &self.surd * &other.surd;
        let surd = &self.rat * &other.surd + &self.surd * &other.rat;
        QuadExt::new(rat, surd, d)
    }

    /// Multiplicative inverse via the norm: (a + b sqrt d)^-1 = conj / (a^2 - d b^2).
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        // norm is nonzero for nonzero elements over a real or imaginary
        // quadratic field with squarefree d != 1
        let c = self.conj();
        QuadExt::new(c.rat / &n, c.surd / &n, self.radicand.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn scale(&self, q: &Rat) -> Self {
        QuadExt {
            rat: &self.rat * q,
            surd: &self.surd * q,
            radicand: self.radicand.clone(),
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same radicand")
    }
}

impl fmt::Display for QuadExt {
    /// Textual form "a + b*sqrt(d)"; pure rationals print as "a".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", format_rat(&self.rat));
        }
        if self.surd.is_negative() {
            write!(
                f,
                "{} - {}*sqrt({})",
                format_rat(&self.rat),
                format_rat(&-self.surd.clone()),
                self.radicand
            )
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                format_rat(&self.rat),
                format_rat(&self.surd),
                self.radicand
            )
        }
    }
}

impl FromStr for QuadExt {
    type Err = Error;

    /// Parse "a + b*sqrt(d)", "a - b*sqrt(d)", or a plain rational "a".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.contains("sqrt") {
            return Ok(QuadExt::from_rat(parse_rat(s)?));
        }
        let bad = || Error::InvalidInput(format!("bad quadratic element {s:?}"));
        let idx = s.find("sqrt").unwrap();
        let (head, tail) = s.split_at(idx);
        let tail = tail.strip_prefix("sqrt").ok_or_else(bad)?.trim();
        let tail = tail.strip_prefix('(').ok_or_else(bad)?;
        let tail = tail.strip_suffix(')').ok_or_else(bad)?;
        let d = BigInt::from_str(tail.trim()).map_err(|_| bad())?;
        // head is "a + b*" / "a - b*" / "b*" / "" / "-"
        let head = head.trim().strip_suffix('*').unwrap_or(head.trim()).trim();
        let (a_str, b_str, neg) = match (head.rfind(" + "), head.rfind(" - ")) {
            (Some(i), Some(j)) if i > j => (&head[..i], &head[i + 3..], false),
            (Some(_), Some(j)) => (&head[..j], &head[j + 3..], true),
            (Some(i), None) => (&head[..i], &head[i + 3..], false),
            (None, Some(j)) => (&head[..j], &head[j + 3..], true),
            (None, None) => ("0", head, false),
        };
        let a = parse_rat(a_str)?;
        let b_str = b_str.trim();
        let b = if b_str.is_empty() {
            Rat::one()
        } else if b_str == "-" {
            -Rat::one()
        } else {
            parse_rat(b_str)?
        };
        let b = if neg { -b } else { b };
        QuadExt::new(a, b, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_sqrt_examples() {
        assert_eq!(rat_sqrt(&rat(49, 4)), Some(rat(7, 2)));
        assert_eq!(rat_sqrt(&int(0)), Some(int(0)));
        assert_eq!(rat_sqrt(&int(2)), None);
        assert_eq!(rat_sqrt(&int(-4)), None);
    }

    #[test]
    fn squarefree_examples() {
        let (d, m) = squarefree_decompose(&int(25)).unwrap();
        assert_eq!((d, m), (BigInt::one(), int(5)));
        let (d, m) = squarefree_decompose(&int(24)).unwrap();
        assert_eq!((d, m), (BigInt::from(6), int(2)));
        let (d, m) = squarefree_decompose(&rat(-9, 4)).unwrap();
        assert_eq!((d, m), (BigInt::from(-1), rat(3, 2)));
        assert_eq!(squarefree_decompose(&int(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn quadext_norm_example() {
        // (9 - 5 sqrt 6)(9 + 5 sqrt 6) = 81 - 150 = -69
        let x = QuadExt::new(int(9), int(-5), BigInt::from(6)).unwrap();
        let y = x.conj();
        let p = x.mul(&y).unwrap();
        assert_eq!(p.as_rat(), Some(&int(-69)));
        assert_eq!(x.norm(), int(-69));
    }

    #[test]
    fn quadext_identity_and_sums() {
        let one = QuadExt::new(int(1), int(0), BigInt::from(6)).unwrap();
        assert_eq!(one.div(&one).unwrap().as_rat(), Some(&int(1)));
        let a = QuadExt::new(int(15), int(-1), BigInt::from(6)).unwrap();
        let b = QuadExt::new(int(15), int(1), BigInt::from(6)).unwrap();
        assert_eq!(a.add(&b).unwrap().as_rat(), Some(&int(30)));
    }

    #[test]
    fn quadext_radicand_mismatch() {
        let a = QuadExt::new(int(1), int(1), BigInt::from(2)).unwrap();
        let b = QuadExt::new(int(1), int(1), BigInt::from(3)).unwrap();
        assert!(matches!(a.add(&b), Err(Error::RadicandMismatch(..))));
        assert!(matches!(
            QuadExt::from_rat(int(1)).div(&QuadExt::from_rat(int(0))),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn quadext_radicand_canonicalization() {
        // sqrt(24) = 2 sqrt(6)
        let x = QuadExt::new(int(0), int(1), BigInt::from(24)).unwrap();
        assert_eq!(x.surd_part(), &int(2));
        assert_eq!(x.radicand(), &BigInt::from(6));
        // rational promotion across operations
        let r = QuadExt::from_rat(int(3));
        let s = x.mul(&r).unwrap();
        assert_eq!(s.surd_part(), &int(6));
    }

    #[test]
    fn textual_roundtrip() {
        for s in ["7/2", "-3", "0", "9 - 5*sqrt(6)", "0 + 1*sqrt(409)", "-1/2 + 3/4*sqrt(-1)"] {
            let v: QuadExt = s.parse().unwrap();
            let v2: QuadExt = v.to_string().parse().unwrap();
            assert_eq!(v, v2, "{s}");
        }
        assert_eq!(parse_rat("49").unwrap(), int(49));
        assert!(parse_rat("1/0").is_err());
    }
}
