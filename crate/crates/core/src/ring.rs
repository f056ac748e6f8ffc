//! Exact coefficient arithmetic over the supported base rings: the
//! integers, the integers modulo `m`, and the rationals.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

/// Which unital commutative ring coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RingConfig {
    Int,
    Mod(u64),
    Rat,
}

impl RingConfig {
    pub fn parse(s: &str) -> Option<RingConfig> {
        match s {
            "int" => Some(RingConfig::Int),
            "rat" => Some(RingConfig::Rat),
            _ => {
                let m = s.strip_prefix("mod:")?.parse::<u64>().ok()?;
                (m >= 2).then_some(RingConfig::Mod(m))
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            RingConfig::Int => Scalar::Int(BigInt::zero()),
            RingConfig::Mod(_) => Scalar::Mod(0),
            RingConfig::Rat => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            RingConfig::Int => Scalar::Int(BigInt::from(n)),
            RingConfig::Mod(m) => Scalar::Mod(n.rem_euclid(*m as i64) as u64),
            RingConfig::Rat => Scalar::Rat(BigRational::from(BigInt::from(n))),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (RingConfig::Int, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (RingConfig::Mod(m), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 + *y as u128) % *m as u128) as u64)
            }
            (RingConfig::Rat, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar does not belong to ring {self:?}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (RingConfig::Int, Scalar::Int(x)) => Scalar::Int(-x),
            (RingConfig::Mod(m), Scalar::Mod(x)) => Scalar::Mod((*m - *x) % *m),
            (RingConfig::Rat, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar does not belong to ring {self:?}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (RingConfig::Int, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (RingConfig::Mod(m), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *m as u128) as u64)
            }
            (RingConfig::Rat, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar does not belong to ring {self:?}"),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Int(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
            Scalar::Rat(x) => x.is_zero(),
        }
    }

    /// A few nonzero ring elements, for nonvanishing tests.
    pub fn sample_nonzero(&self) -> Vec<Scalar> {
        match self {
            RingConfig::Int => [1i64, -1, 2, 7]
                .iter()
                .map(|n| self.from_i64(*n))
                .collect(),
            RingConfig::Mod(m) => (1..*m).take(6).map(Scalar::Mod).collect(),
            RingConfig::Rat => vec![
                self.from_i64(1),
                self.from_i64(-3),
                Scalar::Rat(BigRational::new(BigInt::from(2), BigInt::from(5))),
            ],
        }
    }
}

/// An exact scalar. Values are only meaningful together with their
/// [`RingConfig`]; mixing rings panics.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Int(BigInt),
    Mod(u64),
    Rat(BigRational),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(x) => write!(f, "{x}"),
            Scalar::Mod(x) => write!(f, "{x}"),
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
        }
    }
}

impl Scalar {
    /// Whether the scalar prints as a bare `1` (used by the printer to
    /// suppress unit coefficients).
    pub fn is_display_one(&self) -> bool {
        match self {
            Scalar::Int(x) => x.is_one(),
            Scalar::Mod(x) => *x == 1,
            Scalar::Rat(x) => x.is_one(),
        }
    }

    pub fn is_display_minus_one(&self) -> bool {
        match self {
            Scalar::Int(x) => (-x).is_one(),
            Scalar::Mod(_) => false,
            Scalar::Rat(x) => (-x).is_one(),
        }
    }

    /// Split into (sign-is-negative, magnitude) for pretty-printing sums.
    pub fn display_signed(&self) -> (bool, Scalar) {
        match self {
            Scalar::Int(x) if x.is_negative() => (true, Scalar::Int(-x)),
            Scalar::Rat(x) if x.is_negative() => (true, Scalar::Rat(-x)),
            other => (false, other.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_arithmetic_wraps() {
        let r = RingConfig::Mod(4);
        let two = r.from_i64(2);
        assert_eq!(r.add(&two, &two), Scalar::Mod(0));
        assert_eq!(r.mul(&two, &two), Scalar::Mod(0));
        assert_eq!(r.neg(&r.from_i64(1)), Scalar::Mod(3));
        assert_eq!(r.from_i64(-1), Scalar::Mod(3));
        assert!(r.is_zero(&r.add(&r.from_i64(3), &r.from_i64(1))));
    }

    #[test]
    fn ring_parsing() {
        assert_eq!(RingConfig::parse("int"), Some(RingConfig::Int));
        assert_eq!(RingConfig::parse("mod:7"), Some(RingConfig::Mod(7)));
        assert_eq!(RingConfig::parse("mod:1"), None);
        assert_eq!(RingConfig::parse("rat"), Some(RingConfig::Rat));
        assert_eq!(RingConfig::parse("zzz"), None);
    }

    #[test]
    fn rational_display() {
        let r = RingConfig::Rat;
        let x = r.mul(
            &Scalar::Rat(BigRational::new(BigInt::from(1), BigInt::from(2))),
            &r.from_i64(3),
        );
        assert_eq!(x.to_string(), "3/2");
    }
}
