//! Truncated formal Laurent q-expansions over exact rationals: the hauptmodul
//! k(tau), the intermediate modulus r(tau), the j-invariant, and the
//! coefficientwise tower identities connecting them.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, Rat};

use num_bigint::BigInt;

/// A formal Laurent series sum_{n >= lead} a_n q^n truncated after the
/// coefficient of q^(prec - 1); all arithmetic tracks the common precision
/// exactly (no floating point anywhere).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    /// Exponent of the first stored coefficient (may be negative).
    pub lead: i64,
    /// Coefficients of q^lead, q^(lead+1), ...
    pub coeffs: Vec<Rat>,
    /// Exponent at which truncation begins: terms q^n for n >= prec are unknown.
    pub prec: i64,
}

impl QSeries {
    pub fn new(lead: i64, coeffs: Vec<Rat>, prec: i64) -> Self {
        let mut s = QSeries { lead, coeffs, prec };
        s.normalize();
        s
    }

    /// The zero series known to the given precision.
    pub fn zero(prec: i64) -> Self {
        QSeries { lead: prec, coeffs: Vec::new(), prec }
    }

    /// A single term c * q^n, known to precision prec.
    pub fn monomial(c: Rat, n: i64, prec: i64) -> Self {
        QSeries::new(n, vec![c], prec)
    }

    pub fn one(prec: i64) -> Self {
        QSeries::monomial(int(1), 0, prec)
    }

    fn normalize(&mut self) {
        // drop leading zeros and anything at or beyond the precision horizon
        while let Some(first) = self.coeffs.first() {
            if first.is_zero() {
                self.coeffs.remove(0);
                self.lead += 1;
            } else {
                break;
            }
        }
        let keep = (self.prec - self.lead).max(0) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.lead = self.prec;
        }
    }

    /// Coefficient of q^n, or None if n is beyond the precision horizon.
    pub fn coeff(&self, n: i64) -> Option<Rat> {
        if n >= self.prec {
            return None;
        }
        if n < self.lead || n - self.lead >= self.coeffs.len() as i64 {
            return Some(Rat::zero());
        }
        Some(self.coeffs[(n - self.lead) as usize].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let prec = self.prec.min(other.prec);
        let lead = self.lead.min(other.lead).min(prec);
        let len = (prec - lead).max(0) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (s, sign) in [(self, 1), (other, 1)] {
            let _ = sign;
            for (i, c) in s.coeffs.iter().enumerate() {
                let n = s.lead + i as i64;
                if n < prec {
                    coeffs[(n - lead) as usize] += c;
                }
            }
        }
        QSeries::new(lead, coeffs, prec)
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        if self.is_zero() || other.is_zero() {
            return QSeries::zero(self.prec.min(other.prec));
        }
        // truncation of a product: unknown terms of one factor meet the lead
        // of the other
        let prec = (self.prec + other.lead).min(other.prec + self.lead);
        let lead = self.lead + other.lead;
        let len = (prec - lead).max(0) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let n = lead + (i + j) as i64;
                if n >= prec {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        QSeries::new(lead, coeffs, prec)
    }

    pub fn scale(&self, c: &Rat) -> QSeries {
        QSeries::new(
            self.lead,
            self.coeffs.iter().map(|a| a * c).collect(),
            self.prec,
        )
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn invert(&self) -> Result<QSeries> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a0 = &self.coeffs[0];
        let lead = -self.lead;
        let prec = self.prec - 2 * self.lead;
        let len = (prec - lead).max(0) as usize;
        let mut inv = vec![Rat::zero(); len];
        if len == 0 {
            return Ok(QSeries::new(lead, inv, prec));
        }
        inv[0] = Rat::one() / a0;
        for n in 1..len {
            // sum_{m=0}^{n} a_m * inv_{n-m} = 0
            let mut acc = Rat::zero();
            for m in 1..=n.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[m] * &inv[n - m];
            }
            inv[n] = -acc / a0;
        }
        Ok(QSeries::new(lead, inv, prec))
    }

    pub fn div(&self, other: &QSeries) -> Result<QSeries> {
        Ok(self.mul(&other.invert()?))
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut out = QSeries::one(self.prec + (e as i64 - 1).max(0) * self.lead);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

/// sigma_3(n): sum of cubes of divisors.
pub fn divisor_sum_3(n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(3);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(3);
            }
        }
        d += 1;
    }
    s
}

/// prod_{n >= 1} (1 + sign * q^(step * n))^e as a truncated series; negative
/// e inverts each factor.
fn infinite_product(prec: i64, step: u64, sign: i64, e: i32) -> QSeries {
    let mut out = QSeries::one(prec);
    let mut n = step;
    while (n as i64) < prec.max(1) {
        let factor = QSeries::one(prec).add(&QSeries::monomial(int(sign), n as i64, prec));
        let powed = if e >= 0 {
            factor.pow(e as u32)
        } else {
            factor.invert().expect("unit").pow((-e) as u32)
        };
        out = out.mul(&powed);
        n += step;
    }
    out
}

/// Hauptmodul of the modular curve below E_k:
/// k(tau) = -1 / (16 q prod (1 + q^n)^8 (1 + q^(2n))^8)
///        = -1/16 q^-1 + 1/2 - 5/4 q + ....
pub fn k_series(prec: i64) -> QSeries {
    let work = prec + 2;
    let den = infinite_product(work, 1, 1, 8).mul(&infinite_product(work, 2, 1, 8));
    QSeries::monomial(crate::exact::rat(-1, 16), -1, work)
        .mul(&den.invert().expect("unit leading term"))
}

/// Modulus of the degree-2 cover in the middle of the tower:
/// r(tau) = 1 / (q prod (1 + q^n)^24) = q^-1 - 24 + 276 q - ....
pub fn r_series(prec: i64) -> QSeries {
    let work = prec + 2;
    QSeries::monomial(int(1), -1, work)
        .mul(&infinite_product(work, 1, 1, -24))
}

/// j(tau) = q^-1 + 744 + 196884 q + ... from E_4^3 / Delta with
/// E_4 = 1 + 240 sum sigma_3(n) q^n and Delta = q prod (1-q^n)^24.
pub fn j_series(prec: i64) -> QSeries {
    // Delta has lead 1, so inverting it costs two orders of precision
    let work = prec + 2;
    let mut e4_coeffs = vec![int(1)];
    for n in 1..work.max(1) {
        e4_coeffs.push(Rat::from(divisor_sum_3(n as u64) * BigInt::from(240)));
    }
    let e4 = QSeries::new(0, e4_coeffs, work);
    let delta = QSeries::monomial(int(1), 1, work).mul(&infinite_product(work, 1, -1, 24));
    e4.pow(3).div(&delta).expect("Delta has unit leading term")
}

/// r -> j on the nose: j = (r + 256)^3 / r^2.
pub fn j_of_r(r: &Rat) -> Result<Rat> {
    if r.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let s = r + int(256);
    Ok(&s * &s * &s / (r * r))
}

/// k -> r: r = 16 k^2 / (1 - k).
pub fn r_of_k(k: &Rat) -> Result<Rat> {
    let den = int(1) - k;
    if den.is_zero() {
        return Err(Error::ExcludedModulus("1".into()));
    }
    Ok(int(16) * k * k / &den)
}

/// First mismatching exponent of two series over their common known range.
pub fn first_mismatch(a: &QSeries, b: &QSeries) -> Option<i64> {
    let prec = a.prec.min(b.prec);
    let lead = a.lead.min(b.lead);
    (lead..prec).find(|&n| a.coeff(n) != b.coeff(n))
}

/// Verify the tower identities coefficientwise through q^(n_max - 1):
/// j r^2 = (r + 256)^3 and r (1 - k) = 16 k^2. Returns the first mismatch
/// exponent per identity, or None when both hold.
pub fn verify_tower(n_max: i64) -> (Option<i64>, Option<i64>) {
    let prec = n_max;
    // j r^2 has lead -3; build everything with enough working precision
    let work = prec + 4;
    let j = j_series(work);
    let r = r_series(work);
    let k = k_series(work);
    let lhs1 = j.mul(&r).mul(&r);
    let c256 = QSeries::monomial(int(256), 0, work);
    let rp = r.add(&c256);
    let rhs1 = rp.mul(&rp).mul(&rp);
    let m1 = first_mismatch_below(&lhs1, &rhs1, prec);
    let one = QSeries::one(work);
    let lhs2 = r.mul(&one.sub(&k));
    let rhs2 = k.mul(&k).scale(&int(16));
    let m2 = first_mismatch_below(&lhs2, &rhs2, prec);
    (m1, m2)
}

fn first_mismatch_below(a: &QSeries, b: &QSeries, cutoff: i64) -> Option<i64> {
    let prec = a.prec.min(b.prec).min(cutoff);
    let lead = a.lead.min(b.lead);
    (lead..prec).find(|&n| a.coeff(n) != b.coeff(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn series_ring_basics() {
        let a = QSeries::new(-1, vec![int(1), int(2), int(3)], 2);
        let b = QSeries::new(0, vec![int(1), int(-1)], 2);
        let s = a.add(&b);
        assert_eq!(s.coeff(-1), Some(int(1)));
        assert_eq!(s.coeff(0), Some(int(3)));
        assert_eq!(s.coeff(1), Some(int(2)));
        assert_eq!(s.coeff(2), None);
        let p = a.mul(&b);
        // lead -1: 1; q^0: 2 - 1 = 1; precision capped at prec(b) + lead(a) = 1
        assert_eq!(p.lead, -1);
        assert_eq!(p.coeff(-1), Some(int(1)));
        assert_eq!(p.coeff(0), Some(int(1)));
        assert_eq!(p.coeff(1), None);
    }

    #[test]
    fn series_inverse_roundtrip() {
        let a = QSeries::new(-1, vec![int(1), int(-24), int(276), int(5), rat(1, 7)], 6);
        let inv = a.invert().unwrap();
        let prod = a.mul(&inv);
        assert_eq!(prod.coeff(0), Some(int(1)));
        for n in 1..prod.prec {
            assert_eq!(prod.coeff(n), Some(int(0)), "q^{n}");
        }
        assert!(QSeries::zero(5).invert().is_err());
    }

    #[test]
    fn divisor_sum_values() {
        assert_eq!(divisor_sum_3(1), BigInt::from(1));
        assert_eq!(divisor_sum_3(2), BigInt::from(9));
        assert_eq!(divisor_sum_3(3), BigInt::from(28));
        assert_eq!(divisor_sum_3(4), BigInt::from(73));
        assert_eq!(divisor_sum_3(6), BigInt::from(252));
    }

    #[test]
    fn j_expansion_leading_terms() {
        let j = j_series(3);
        assert_eq!(j.coeff(-1), Some(int(1)));
        assert_eq!(j.coeff(0), Some(int(744)));
        assert_eq!(j.coeff(1), Some(int(196884)));
        assert_eq!(j.coeff(2), Some(int(21493760)));
    }

    #[test]
    fn r_expansion_leading_terms() {
        let r = r_series(2);
        assert_eq!(r.coeff(-1), Some(int(1)));
        assert_eq!(r.coeff(0), Some(int(-24)));
        assert_eq!(r.coeff(1), Some(int(276)));
    }

    #[test]
    fn k_expansion_leading_terms() {
        let k = k_series(2);
        assert_eq!(k.coeff(-1), Some(rat(-1, 16)));
        assert_eq!(k.coeff(0), Some(rat(1, 2)));
        assert_eq!(k.coeff(1), Some(rat(-5, 4)));
    }

    #[test]
    fn tower_identities_hold() {
        let (m1, m2) = verify_tower(20);
        assert_eq!(m1, None, "j r^2 = (r + 256)^3 fails first at q^{m1:?}");
        assert_eq!(m2, None, "r (1 - k) = 16 k^2 fails first at q^{m2:?}");
    }

    #[test]
    fn tower_detects_perturbation() {
        let work = 12;
        let j = j_series(work);
        let r = r_series(work);
        // corrupt one coefficient of j and the identity must report exactly
        // the matching exponent
        let bad_j = j.add(&QSeries::monomial(int(1), 3, work));
        let lhs = bad_j.mul(&r).mul(&r);
        let c256 = QSeries::monomial(int(256), 0, work);
        let rp = r.add(&c256);
        let rhs = rp.mul(&rp).mul(&rp);
        // j differs at q^3; j r^2 then differs first at q^(3 - 2) = q^1
        assert_eq!(first_mismatch_below(&lhs, &rhs, 8), Some(1));
    }

    #[test]
    fn scalar_tower_maps() {
        // r(k) and j(r) compose to the j-invariant of E_k
        for k in [int(-1), int(2), int(3), rat(1, 2), rat(25, 9), rat(25, 16)] {
            let r = r_of_k(&k).unwrap();
            let j = j_of_r(&r).unwrap();
            let curve = crate::curve::ek_model(&k);
            assert_eq!(j, curve.j_invariant().unwrap(), "k = {k}");
        }
        assert_eq!(r_of_k(&int(-1)).unwrap(), int(8));
        assert!(r_of_k(&int(1)).is_err());
        assert!(j_of_r(&int(0)).is_err());
    }
}
