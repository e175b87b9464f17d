//! `Q_p` with exact rational scalars: valuations, absolute values and
//! residues in `F_p`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Result, ToricError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PAdicContext {
    prime: u64,
}

impl PAdicContext {
    pub fn new(prime: u64) -> Result<PAdicContext> {
        if !is_prime(prime) {
            return Err(ToricError::domain(format!("{prime} is not prime")));
        }
        Ok(PAdicContext { prime })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn valuation(&self, x: &BigRational) -> Option<i64> {
        p_valuation(x, self.prime)
    }

    pub fn norm(&self, x: &BigRational) -> GaussNorm {
        GaussNorm {
            prime: self.prime,
            valuation: self.valuation(x),
        }
    }

    /// Image of `x` in `F_p`, for `v_p(x) ≥ 0`.
    pub fn residue(&self, x: &BigRational) -> Result<u64> {
        match self.valuation(x) {
            None => Ok(0),
            Some(v) if v > 0 => Ok(0),
            Some(0) => {
                let p = BigInt::from(self.prime);
                let num = x.numer().mod_floor(&p).to_u64().expect("residue below p");
                let den = x.denom().mod_floor(&p).to_u64().expect("residue below p");
                Ok(mul_mod(num, inv_mod(den, self.prime), self.prime))
            }
            Some(_) => Err(ToricError::domain(format!("{x} is not in the unit ball"))),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn int_valuation(x: &BigInt, p: &BigInt) -> i64 {
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// `v_p(x)`; `None` stands for `+∞` (that is, `x = 0`).
pub fn p_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    Some(int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p))
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let g = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(p as i128) as u64
}

/// An absolute value `p^{−v}`, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussNorm {
    pub prime: u64,
    /// `None` for the zero norm.
    pub valuation: Option<i64>,
}

impl GaussNorm {
    pub fn zero(prime: u64) -> GaussNorm {
        GaussNorm { prime, valuation: None }
    }

    pub fn one(prime: u64) -> GaussNorm {
        GaussNorm {
            prime,
            valuation: Some(0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    pub fn value(&self) -> BigRational {
        match self.valuation {
            None => BigRational::zero(),
            Some(v) => {
                let p = BigRational::from_integer(BigInt::from(self.prime));
                let pow = num_traits::pow(p, v.unsigned_abs() as usize);
                if v <= 0 {
                    pow
                } else {
                    BigRational::one() / pow
                }
            }
        }
    }

    pub fn pow(&self, n: u32) -> GaussNorm {
        GaussNorm {
            prime: self.prime,
            valuation: if n == 0 { Some(0) } else { self.valuation.map(|v| v * n as i64) },
        }
    }
}

impl std::ops::Mul for GaussNorm {
    type Output = GaussNorm;
    // Norms multiply, valuations add.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: GaussNorm) -> GaussNorm {
        GaussNorm {
            prime: self.prime,
            valuation: match (self.valuation, rhs.valuation) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }
}

impl Ord for GaussNorm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.valuation, other.valuation) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl PartialOrd for GaussNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GaussNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for GaussNorm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            prime: u64,
            valuation: Option<i64>,
            value: String,
        }
        Repr {
            prime: self.prime,
            valuation: self.valuation,
            value: self.to_string(),
        }
        .serialize(s)
    }
}
