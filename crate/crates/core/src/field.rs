//! Exact scalar arithmetic: arbitrary-precision rationals and prime fields
//! with a runtime modulus.
//!
//! Algorithms are generic over a field *context* ([`Field`]) with an
//! associated element type, so the same elimination and interpolation code
//! runs over ℚ and over 𝔽_p. There is deliberately no floating-point
//! instantiation.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Rat = BigRational;

/// A commutative ring context in which exact division is decidable.
/// Elements carry no reference to the ring; all arithmetic goes through
/// the context. This is all that fraction-free elimination needs, so
/// polynomial rings implement it too.
pub trait Domain: Clone {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `a / b` when `b` divides `a` exactly, `None` otherwise.
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
}

/// A field context.
pub trait Field: Domain {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for the rationals, p for 𝔽_p.
    fn characteristic(&self) -> u64;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|i| self.mul(a, &i))
    }

    /// Optional growth control applied to a row during elimination (e.g.
    /// clearing denominators over ℚ). Must scale the row by a nonzero
    /// constant only.
    fn simplify_row(&self, _row: &mut [Self::Elem]) {}

    fn fmt_elem(&self, e: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, String>;
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Domain for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn exact_div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        self.div(a, b)
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    /// Scales the row to a primitive integer vector (clears denominators,
    /// divides by the content), which keeps entry growth fraction-free
    /// during elimination.
    fn simplify_row(&self, row: &mut [BigRational]) {
        let mut lcm = BigInt::one();
        for e in row.iter() {
            if !e.is_zero() {
                lcm = num_integer::lcm(lcm, e.denom().clone());
            }
        }
        let mut gcd = BigInt::zero();
        for e in row.iter() {
            if !e.is_zero() {
                gcd = num_integer::gcd(gcd, (e.numer() * &lcm / e.denom()).abs());
            }
        }
        if gcd.is_zero() || (gcd.is_one() && lcm.is_one()) {
            return;
        }
        let scale = BigRational::new(lcm, gcd);
        for e in row.iter_mut() {
            *e *= &scale;
        }
    }

    fn fmt_elem(&self, e: &BigRational) -> String {
        if e.denom().is_one() {
            e.numer().to_string()
        } else {
            format!("{}/{}", e.numer(), e.denom())
        }
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational, String> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator {n:?}"))?;
                let d: BigInt = d
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad denominator {d:?}"))?;
                if d.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| format!("bad rational {s:?}"))?;
                Ok(BigRational::from_integer(n))
            }
        }
    }
}

/// The prime field 𝔽_p; elements are reduced residues stored as `u64`.
/// The modulus must be prime and small enough that products fit in `u64`
/// (p < 2³²).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> PrimeField {
        assert!((2..(1 << 32)).contains(&p), "modulus out of range");
        assert!(is_prime(p), "{p} is not prime");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Domain for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn exact_div(&self, a: &u64, b: &u64) -> Option<u64> {
        self.div(a, b)
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn fmt_elem(&self, e: &u64) -> String {
        e.to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<u64, String> {
        let n: i64 = s
            .trim()
            .parse()
            .map_err(|_| format!("bad field element {s:?}"))?;
        Ok(self.reduce_i64(n))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Deterministic xorshift generator for reproducible randomized tests.
#[derive(Clone, Debug)]
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_format() {
        let f = Rationals;
        let x = f.parse_elem("5/4").unwrap();
        assert_eq!(f.fmt_elem(&x), "5/4");
        let y = f.parse_elem("-7").unwrap();
        assert_eq!(f.fmt_elem(&y), "-7");
        assert!(f.parse_elem("1/0").is_err());
        assert_eq!(f.fmt_elem(&f.parse_elem("2/4").unwrap()), "1/2");
    }

    #[test]
    fn rational_row_simplify_scales_to_primitive() {
        let f = Rationals;
        let mut row = vec![
            f.parse_elem("1/2").unwrap(),
            f.parse_elem("3/4").unwrap(),
            f.zero(),
        ];
        f.simplify_row(&mut row);
        assert_eq!(
            row.iter().map(|e| f.fmt_elem(e)).collect::<Vec<_>>(),
            vec!["2", "3", "0"]
        );
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(19);
        assert_eq!(f.from_i64(-1), 18);
        for a in 1..19u64 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.characteristic(), 19);
    }

    #[test]
    #[should_panic(expected = "not prime")]
    fn composite_modulus_rejected() {
        PrimeField::new(21);
    }
}
