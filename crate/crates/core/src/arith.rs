//! Small-integer number theory used by the order-finding driver.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `base^exp mod modulus` by square-and-multiply.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

/// Multiplicative order of `g` modulo `modulus` by brute force. Returns `None`
/// when `g` is not a unit.
pub fn multiplicative_order(g: u64, modulus: u64) -> Option<u64> {
    if modulus < 2 || gcd(g, modulus) != 1 {
        return None;
    }
    let g = g % modulus;
    let mut acc = g;
    let mut r = 1;
    while acc != 1 % modulus {
        acc = ((acc as u128 * g as u128) % modulus as u128) as u64;
        r += 1;
        if r > modulus {
            return None;
        }
    }
    Some(r)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// If `n = p^k` for a prime `p` and `k >= 2`, returns `p`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 4 {
        return None;
    }
    for k in 2..64u32 {
        let root = integer_root(n, k);
        if root < 2 {
            break;
        }
        if root.checked_pow(k) == Some(n) && is_prime(root) {
            return Some(root);
        }
    }
    None
}

fn integer_root(n: u64, k: u32) -> u64 {
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Number of bits needed to hold every label below `n`, i.e. `⌈log₂ n⌉`.
pub fn bits_for(n: u64) -> usize {
    if n <= 1 {
        0
    } else {
        (64 - (n - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_2_mod_15_is_4() {
        assert_eq!(multiplicative_order(2, 15), Some(4));
        assert_eq!(multiplicative_order(2, 21), Some(6));
        assert_eq!(multiplicative_order(3, 15), None);
    }

    #[test]
    fn mod_pow_matches_repeated_multiplication() {
        for base in 0..30u64 {
            for exp in 0..20u64 {
                let mut naive = 1;
                for _ in 0..exp {
                    naive = naive * base % 37;
                }
                assert_eq!(mod_pow(base, exp, 37), naive);
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_base(9), Some(3));
        assert_eq!(prime_power_base(27), Some(3));
        assert_eq!(prime_power_base(49), Some(7));
        assert_eq!(prime_power_base(15), None);
        assert_eq!(prime_power_base(36), None);
    }

    #[test]
    fn bits_for_register_width() {
        assert_eq!(bits_for(15), 4);
        assert_eq!(bits_for(16), 4);
        assert_eq!(bits_for(17), 5);
        assert_eq!(bits_for(21), 5);
    }
}
