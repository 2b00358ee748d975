//! Exact field arithmetic: arbitrary-precision rationals and odd prime fields.
//!
//! Every computation in this crate is exact. The default field is `QQ`
//! (arbitrary-precision rationals); `FP(p)` with `p < 2^31` prime is available
//! as a faster alternative for large runs. Values never mix fields: a
//! `Scalar::Fp` carries its modulus so that a mismatch is caught immediately.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

/// Coefficient field selector stored in a ring context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// Arbitrary-precision rationals.
    Rat,
    /// Prime field `Z/p` with `p < 2^31`.
    Fp(u32),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rat => write!(f, "QQ"),
            Field::Fp(p) => write!(f, "FP:{p}"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { val: u32, p: u32 },
}

impl Scalar {
    pub fn zero(field: Field) -> Self {
        match field {
            Field::Rat => Scalar::Rat(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { val: 0, p },
        }
    }

    pub fn one(field: Field) -> Self {
        match field {
            Field::Rat => Scalar::Rat(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { val: 1 % p, p },
        }
    }

    pub fn from_i64(field: Field, n: i64) -> Self {
        match field {
            Field::Rat => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => {
                let m = n.rem_euclid(p as i64) as u32;
                Scalar::Fp { val: m, p }
            }
        }
    }

    /// Rational `num/den`; in `FP(p)` this is `num * den^-1`. `den` must be nonzero.
    pub fn from_ratio(field: Field, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        match field {
            Field::Rat => Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))),
            Field::Fp(_) => {
                let d = Scalar::from_i64(field, den);
                Scalar::from_i64(field, num).mul(&d.inv().expect("denominator divisible by p"))
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rat,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { val, p } => *val == 1 % p,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, p: q }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp { val: ((*a as u64 + *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { val, p } => Scalar::Fp { val: if *val == 0 { 0 } else { p - val }, p: *p },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, p: q }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp { val: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("field mismatch"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fp { val, p } => {
                if *val == 0 {
                    return None;
                }
                // Extended Euclid on (val, p).
                let (mut r0, mut r1) = (*val as i64, *p as i64);
                let (mut s0, mut s1) = (1i64, 0i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1, "modulus not prime or value not a unit");
                Some(Scalar::Fp { val: s0.rem_euclid(*p as i64) as u32, p: *p })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv().expect("division by zero"))
    }

    /// Sign as -1/0/1 for rationals; prime-field values report 1 unless zero.
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    0
                } else if a.is_negative() {
                    -1
                } else {
                    1
                }
            }
            Scalar::Fp { val, .. } => {
                if *val == 0 {
                    0
                } else {
                    1
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}
