//! Number rendering for reports: exact decimal strings, two-digit scientific
//! notation (`5.9e10`) and rounded decimal forms of exact ratios.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Serializes a count as its exact decimal string.
pub fn serialize_decimal<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

fn pow10(n: u32) -> BigUint {
    BigUint::from(10u32).pow(n)
}

/// Scientific notation with two significant digits, e.g. `5.9e10`.
pub fn scientific(n: &BigUint) -> String {
    if n.is_zero() {
        return "0.0e0".into();
    }
    let digits = n.to_string();
    let mut exp = digits.len() - 1;
    let lead: Vec<u32> = digits
        .chars()
        .chain(std::iter::repeat('0'))
        .take(3)
        .map(|c| c.to_digit(10).unwrap())
        .collect();
    let mut two = lead[0] * 10 + lead[1];
    if lead[2] >= 5 {
        two += 1;
    }
    if two == 100 {
        two = 10;
        exp += 1;
    }
    format!("{}.{}e{}", two / 10, two % 10, exp)
}

/// `num / den` rounded half-up to `sig` significant digits, with trailing
/// zeros dropped. Values below `1e-5` or from `1e16` up use `d.ddde<exp>`.
///
/// Panics if `den` is zero or `sig` is zero.
pub fn decimal_ratio(num: &BigUint, den: &BigUint, sig: u32) -> String {
    assert!(!den.is_zero() && sig > 0);
    if num.is_zero() {
        return "0".into();
    }
    // 10^e <= num/den < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let at_least = |e: i64| {
        if e >= 0 {
            *num >= den * pow10(e as u32)
        } else {
            num * pow10((-e) as u32) >= *den
        }
    };
    if !at_least(e) {
        e -= 1;
    }
    let shift = sig as i64 - 1 - e;
    let (n2, d2) = if shift >= 0 {
        (num * pow10(shift as u32), den.clone())
    } else {
        (num.clone(), den * pow10((-shift) as u32))
    };
    let (mut q, r) = n2.div_rem(&d2);
    if r * 2u32 >= d2 {
        q += BigUint::one();
    }
    if q == pow10(sig) {
        q = pow10(sig - 1);
        e += 1;
    }
    let ds = q.to_string();
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..16).contains(&e) {
        if e >= 0 {
            let int_len = e as usize + 1;
            if int_len >= ds.len() {
                format!("{ds}{}", "0".repeat(int_len - ds.len()))
            } else {
                trim(format!("{}.{}", &ds[..int_len], &ds[int_len..]))
            }
        } else {
            trim(format!("0.{}{ds}", "0".repeat((-e - 1) as usize)))
        }
    } else {
        let mantissa = trim(format!("{}.{}", &ds[..1], &ds[1..]));
        format!("{mantissa}e{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u128) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn scientific_two_digits() {
        assert_eq!(scientific(&b(0)), "0.0e0");
        assert_eq!(scientific(&b(5)), "5.0e0");
        assert_eq!(scientific(&b(16)), "1.6e1");
        assert_eq!(scientific(&b(59_000_000_000)), "5.9e10");
        assert_eq!(scientific(&b(58_960_000_000)), "5.9e10");
        assert_eq!(scientific(&b(995)), "1.0e3");
        assert_eq!(scientific(&b(1024)), "1.0e3");
        let big: BigUint = "99400000000000000000000000000000000000000000000000000000000000".parse().unwrap();
        assert_eq!(scientific(&big), "9.9e61");
    }

    #[test]
    fn decimal_forms() {
        assert_eq!(decimal_ratio(&b(6), &b(16), 4), "0.375");
        assert_eq!(decimal_ratio(&b(1), &b(2), 4), "0.5");
        assert_eq!(decimal_ratio(&b(2), &b(1), 4), "2");
        assert_eq!(decimal_ratio(&b(1), &b(3), 4), "0.3333");
        assert_eq!(decimal_ratio(&b(2), &b(3), 4), "0.6667");
        assert_eq!(decimal_ratio(&b(99995), &b(100000), 4), "1");
        assert_eq!(decimal_ratio(&b(123456), &b(1), 4), "123500");
        assert_eq!(decimal_ratio(&b(1), &b(1000), 4), "0.001");
        assert_eq!(decimal_ratio(&b(0), &b(7), 4), "0");
        assert_eq!(decimal_ratio(&b(1), &b(10_000_000), 4), "1e-7");
        assert_eq!(
            decimal_ratio(&b(29_000_000_000_000_000_000_000_000_000_000_000), &b(59_000_000_000), 4),
            "4.915e23"
        );
    }
}
