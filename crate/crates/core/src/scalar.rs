//! The exact integer scalar abstraction shared by the integer linear algebra,
//! the kernel-lattice code and the weight families.
//!
//! Everything in this crate is exact. Machine integers (`i64`, `i128`) are
//! fine for the small matrices that show up in tests; [`num_bigint::BigInt`]
//! is the default wherever values can grow (weights built by the isolation
//! recursion exceed 64 bits quickly).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait IntScalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + FromStr
    + FromPrimitive
    + ToPrimitive
    + Hash
    + Send
    + Sync
    + 'static
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("every integer scalar holds an i64")
    }
}

impl<T> IntScalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Hash
        + Send
        + Sync
        + 'static
{
}

/// Nonnegative rational bound used by the strict norm/weight filters
/// (`norm < bound`).
pub type Bound = Ratio<u64>;

/// `value < bound`, exactly.
pub fn below(value: u64, bound: &Bound) -> bool {
    (value as u128) * (*bound.denom() as u128) < (*bound.numer() as u128)
}

/// Parses `"3/2"`, `"1.5"` or `"7"` into an exact bound.
pub fn parse_bound(text: &str) -> Option<Bound> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: u64 = n.trim().parse().ok()?;
        let d: u64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Ratio::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return None;
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let den = 10u64.pow(frac.len() as u32);
        let frac: u64 = frac.parse().ok()?;
        return Some(Ratio::new(int.checked_mul(den)?.checked_add(frac)?, den));
    }
    text.parse::<u64>().ok().map(Ratio::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_comparison() {
        let b = Ratio::new(3u64, 1);
        assert!(below(2, &b));
        assert!(!below(3, &b));
        let b = Ratio::new(9u64, 2);
        assert!(below(4, &b));
        assert!(!below(5, &b));
    }

    #[test]
    fn bound_parsing() {
        assert_eq!(parse_bound("1.5"), Some(Ratio::new(3, 2)));
        assert_eq!(parse_bound("3/2"), Some(Ratio::new(3, 2)));
        assert_eq!(parse_bound("4"), Some(Ratio::from_integer(4)));
        assert_eq!(parse_bound(".25"), Some(Ratio::new(1, 4)));
        assert_eq!(parse_bound("1/0"), None);
        assert_eq!(parse_bound("x"), None);
    }
}
