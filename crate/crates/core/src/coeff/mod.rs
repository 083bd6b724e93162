//! Coefficient rings: the rationals and localizations `Z_S` of the integers
//! with a finite set `S` of primes inverted (2 always in `S`).

mod scalar;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use scalar::{ParseScalarError, Scalar};

use crate::error::{MildError, Result};

/// The least prime that is not a unit, or infinity for a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeOrInfinity {
    Prime(u64),
    Infinity,
}

impl PrimeOrInfinity {
    /// `factor * self`, saturating at infinity.
    pub fn times(self, factor: u64) -> PrimeOrInfinity {
        match self {
            PrimeOrInfinity::Prime(p) => PrimeOrInfinity::Prime(p.saturating_mul(factor)),
            PrimeOrInfinity::Infinity => PrimeOrInfinity::Infinity,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            PrimeOrInfinity::Prime(p) => Some(p),
            PrimeOrInfinity::Infinity => None,
        }
    }
}

impl fmt::Display for PrimeOrInfinity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeOrInfinity::Prime(p) => write!(f, "{p}"),
            PrimeOrInfinity::Infinity => write!(f, "inf"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn next_prime(n: u64) -> u64 {
    let mut p = n + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// A principal ideal domain of the form `Q` or `Z_S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoefficientRing {
    Rationals,
    LocalizedIntegers { inverted_primes: BTreeSet<u64> },
}

impl CoefficientRing {
    pub fn rationals() -> Self {
        CoefficientRing::Rationals
    }

    /// `Z` with the given primes inverted. 2 is added when missing.
    pub fn localized<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        set.insert(2);
        for p in primes {
            if !is_prime(p) {
                return Err(MildError::Ring(format!("{p} is not a prime")));
            }
            set.insert(p);
        }
        Ok(CoefficientRing::LocalizedIntegers { inverted_primes: set })
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoefficientRing::Rationals)
    }

    pub fn inverted_primes(&self) -> Option<&BTreeSet<u64>> {
        match self {
            CoefficientRing::Rationals => None,
            CoefficientRing::LocalizedIntegers { inverted_primes } => Some(inverted_primes),
        }
    }

    pub fn rho(&self) -> PrimeOrInfinity {
        match self {
            CoefficientRing::Rationals => PrimeOrInfinity::Infinity,
            CoefficientRing::LocalizedIntegers { inverted_primes } => {
                let mut p = 2;
                while inverted_primes.contains(&p) {
                    p = next_prime(p);
                }
                PrimeOrInfinity::Prime(p)
            }
        }
    }

    /// Strip the inverted primes from a positive integer.
    fn strip(&self, n: &BigInt) -> BigInt {
        let mut n = n.abs();
        if let CoefficientRing::LocalizedIntegers { inverted_primes } = self {
            for &p in inverted_primes {
                let p = BigInt::from(p);
                while !n.is_zero() && (&n % &p).is_zero() {
                    n /= &p;
                }
            }
        }
        n
    }

    fn strip_small(&self, n: i64) -> i64 {
        let mut n = n.unsigned_abs();
        if let CoefficientRing::LocalizedIntegers { inverted_primes } = self {
            for &p in inverted_primes {
                while n != 0 && n % p == 0 {
                    n /= p;
                }
            }
        }
        n as i64
    }

    /// Whether `x` is an element of this ring.
    pub fn contains(&self, x: &Scalar) -> bool {
        match self {
            CoefficientRing::Rationals => true,
            CoefficientRing::LocalizedIntegers { .. } => match x.as_small() {
                Some((_, d)) => self.strip_small(d) == 1,
                None => self.strip(&x.denom()).is_one(),
            },
        }
    }

    /// The canonical associate: 0, or the positive integer unit-equivalent
    /// to `x` whose factorization avoids the inverted primes.
    pub fn canon(&self, x: &Scalar) -> Scalar {
        if x.is_zero() {
            return Scalar::zero();
        }
        match self {
            CoefficientRing::Rationals => Scalar::one(),
            CoefficientRing::LocalizedIntegers { .. } => match x.as_small() {
                Some((n, _)) => Scalar::from_int(self.strip_small(n)),
                None => Scalar::from_bigint(self.strip(&x.numer())),
            },
        }
    }

    /// `x / canon(x)`, a unit; 1 for zero.
    pub fn unit_part(&self, x: &Scalar) -> Scalar {
        if x.is_zero() {
            Scalar::one()
        } else {
            x / &self.canon(x)
        }
    }

    pub fn is_unit(&self, x: &Scalar) -> bool {
        !x.is_zero() && self.canon(x).is_one()
    }

    /// `b / a` when `a` divides `b` in the ring.
    pub fn exact_div(&self, b: &Scalar, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return if b.is_zero() { Some(Scalar::zero()) } else { None };
        }
        let q = b / a;
        self.contains(&q).then_some(q)
    }

    pub fn divides(&self, a: &Scalar, b: &Scalar) -> bool {
        self.exact_div(b, a).is_some()
    }

    /// Canonical generator of the ideal `(a, b)`.
    pub fn gcd(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let (ca, cb) = (self.canon(a), self.canon(b));
        if ca.is_zero() {
            return cb;
        }
        if cb.is_zero() {
            return ca;
        }
        Scalar::from_bigint(ca.numer().gcd(&cb.numer()))
    }

    /// `(s, t, g)` with `s*a + t*b = g = gcd(a, b)`.
    pub fn bezout(&self, a: &Scalar, b: &Scalar) -> (Scalar, Scalar, Scalar) {
        if a.is_zero() && b.is_zero() {
            return (Scalar::one(), Scalar::zero(), Scalar::zero());
        }
        if b.is_zero() {
            return (self.unit_part(a).recip(), Scalar::zero(), self.canon(a));
        }
        if a.is_zero() {
            return (Scalar::zero(), self.unit_part(b).recip(), self.canon(b));
        }
        let (ca, cb) = (self.canon(a).numer(), self.canon(b).numer());
        let e = ca.extended_gcd(&cb);
        let s = &Scalar::from_bigint(e.x) / &self.unit_part(a);
        let t = &Scalar::from_bigint(e.y) / &self.unit_part(b);
        (s, t, Scalar::from_bigint(e.gcd))
    }

    /// Smallest set of extra inverted primes with `rho(new) >= factor * rho(self)`.
    pub fn enlarge(&self, factor: u64) -> CoefficientRing {
        match self {
            CoefficientRing::Rationals => CoefficientRing::Rationals,
            CoefficientRing::LocalizedIntegers { inverted_primes } => {
                let target = self.rho().times(factor.max(1));
                let mut set = inverted_primes.clone();
                let mut ring = CoefficientRing::LocalizedIntegers { inverted_primes: set.clone() };
                while ring.rho().finite().unwrap() < target.finite().unwrap() {
                    set.insert(ring.rho().finite().unwrap());
                    ring = CoefficientRing::LocalizedIntegers { inverted_primes: set.clone() };
                }
                ring
            }
        }
    }

    /// Reduce `x` modulo the ideal `(m)`: for `Z_S` the representative is
    /// `canon`-coordinate reduction of the numerator, for `Q` it is 0.
    pub fn reduce_mod(&self, x: &Scalar, m: &Scalar) -> Scalar {
        if m.is_zero() {
            return x.clone();
        }
        if self.is_unit(m) {
            return Scalar::zero();
        }
        // x = n/d with d a unit; modulo m (canonical, coprime to S),
        // x is congruent to n * d^{-1} mod m.
        let mint = self.canon(m).numer();
        let n = x.numer();
        let d = x.denom();
        let dinv = d.extended_gcd(&mint).x;
        let r = (n * dinv).mod_floor(&mint);
        Scalar::from_bigint(r)
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::LocalizedIntegers { inverted_primes } => {
                write!(f, "Z[1/")?;
                let ps: Vec<String> = inverted_primes.iter().map(|p| p.to_string()).collect();
                write!(f, "{}]", ps.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> CoefficientRing {
        CoefficientRing::localized([2]).unwrap()
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rho_values() {
        assert_eq!(CoefficientRing::rationals().rho(), PrimeOrInfinity::Infinity);
        assert_eq!(z2().rho(), PrimeOrInfinity::Prime(3));
        let r = CoefficientRing::localized([2, 3, 5, 7]).unwrap();
        assert_eq!(r.rho(), PrimeOrInfinity::Prime(11));
    }

    #[test]
    fn two_is_forced() {
        let r = CoefficientRing::localized([3]).unwrap();
        assert!(r.inverted_primes().unwrap().contains(&2));
        assert!(CoefficientRing::localized([4]).is_err());
    }

    #[test]
    fn invertibility() {
        assert!(z2().is_unit(&Scalar::new(1, 2)));
        assert!(!z2().is_unit(&s(3)));
        assert!(!z2().is_unit(&s(0)));
        assert!(!CoefficientRing::rationals().is_unit(&s(0)));
        assert!(CoefficientRing::rationals().is_unit(&s(3)));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(z2().gcd(&s(6), &s(4)), s(1));
        assert_eq!(z2().gcd(&s(3), &s(9)), s(3));
        assert_eq!(z2().gcd(&s(0), &s(0)), s(0));
    }

    #[test]
    fn membership() {
        assert!(z2().contains(&Scalar::new(3, 8)));
        assert!(!z2().contains(&Scalar::new(1, 3)));
    }

    #[test]
    fn enlargement() {
        let r = z2().enlarge(2);
        assert_eq!(r.inverted_primes().unwrap().iter().copied().collect::<Vec<_>>(), vec![2, 3, 5]);
        assert_eq!(r.rho(), PrimeOrInfinity::Prime(7));
        assert_eq!(z2().enlarge(1), z2());
        assert_eq!(CoefficientRing::rationals().enlarge(5), CoefficientRing::rationals());
    }

    #[test]
    fn reduce_mod_handles_units_in_denominator() {
        // 1/2 mod 3 = 2 since 2*2 = 4 = 1 mod 3
        assert_eq!(z2().reduce_mod(&Scalar::new(1, 2), &s(3)), s(2));
        assert_eq!(z2().reduce_mod(&s(7), &s(3)), s(1));
    }
}
