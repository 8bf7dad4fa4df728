use serde::{Deserialize, Serialize};

/// Modulus of the real quadratic character weighting products and divisor sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CharModulus {
    /// `Y2`: +1 for n ≡ 1, −1 for n ≡ 2, 0 for n ≡ 0 (mod 3).
    Three,
    /// `X2`, the Legendre symbol (n/5).
    Five,
}

impl CharModulus {
    pub fn value(self) -> u64 {
        match self {
            CharModulus::Three => 3,
            CharModulus::Five => 5,
        }
    }

    pub fn from_value(m: u64) -> Option<Self> {
        match m {
            3 => Some(CharModulus::Three),
            5 => Some(CharModulus::Five),
            _ => None,
        }
    }
}

pub fn character(n: u64, modulus: CharModulus) -> i8 {
    match modulus {
        CharModulus::Five => match n % 5 {
            1 | 4 => 1,
            2 | 3 => -1,
            _ => 0,
        },
        CharModulus::Three => match n % 3 {
            1 => 1,
            2 => -1,
            _ => 0,
        },
    }
}

/// `Σ_{d | n} χ(d)·d`, enumerating divisor pairs up to `√n`.
pub fn divisor_sum_chi(n: u64, modulus: CharModulus) -> i64 {
    assert!(n >= 1, "divisor_sum_chi is defined for n >= 1");
    let mut total = 0i64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += character(d, modulus) as i64 * d as i64;
            let e = n / d;
            if e != d {
                total += character(e, modulus) as i64 * e as i64;
            }
        }
        d += 1;
    }
    total
}
