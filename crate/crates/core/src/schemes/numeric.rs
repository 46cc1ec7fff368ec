//! Integer helpers: binary decompositions and the antimonotone jump
//! functions.

use std::collections::BTreeSet;

/// Exponents of the binary representation of `n`.
pub fn bits(n: u64) -> BTreeSet<u32> {
    (0..64).filter(|i| n >> i & 1 == 1).collect()
}

pub fn popcount(n: u64) -> u32 {
    n.count_ones()
}

/// `floor(log2(n))`; `n` must be positive.
pub fn floor_log2(n: u64) -> u32 {
    assert!(n > 0, "log of zero");
    63 - n.leading_zeros()
}

/// `ceil(log2(n))`; `n` must be positive.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n > 0, "log of zero");
    if n == 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// 2-adic valuation (trailing zero count) of a positive `n`.
pub fn v2(n: u64) -> u32 {
    assert!(n > 0, "valuation of zero");
    n.trailing_zeros()
}

/// Largest `t` with `3^t <= n`; `n` must be positive.
pub fn floor_log3(n: u64) -> u32 {
    assert!(n > 0, "log of zero");
    let mut t = 0;
    let mut p: u64 = 3;
    while p <= n {
        t += 1;
        match p.checked_mul(3) {
            Some(q) => p = q,
            None => break,
        }
    }
    t
}

fn pow3(k: u32) -> u64 {
    3u64.pow(k)
}

/// `Some(k)` when `n = 2^k - 1`.
fn mersenne_exponent(n: u64) -> Option<u32> {
    (n + 1).is_power_of_two().then(|| (n + 1).trailing_zeros())
}

/// `Some(k)` when `n = (3^k - 1) / 2`.
fn ternary_exponent(n: u64) -> Option<u32> {
    let m = 2 * n + 1;
    let k = floor_log3(m);
    (pow3(k) == m).then_some(k)
}

/// The order function of the simple antimonotone scheme, evaluated as
/// written: `k` on `2^k - 1`, otherwise recurse on `n - (2^(k-1) - 1)` for
/// the `k` with `2^(k-1) - 1 < n < 2^k - 1`.
pub fn antimonotone_g(n: u64) -> u64 {
    assert!(n > 0, "lengths start at 1");
    let mut n = n;
    loop {
        if let Some(k) = mersenne_exponent(n) {
            return k as u64;
        }
        let k = ceil_log2(n + 1);
        n -= (1u64 << (k - 1)) - 1;
    }
}

/// Jump target of the simple antimonotone scheme, evaluated as written.
/// Returns 0 wherever the formula is not positive.
pub fn antimonotone_f2(n: u64) -> u64 {
    assert!(n > 0, "lengths start at 1");
    let sub = match mersenne_exponent(n) {
        Some(k) => (1u64 << (k - 1)) + 1,
        None => 1u64 << antimonotone_g(n),
    };
    n.saturating_sub(sub)
}

/// The order function of the optimal antimonotone scheme, evaluated as
/// written.
pub fn antimonotone_h(n: u64) -> u64 {
    assert!(n > 0, "lengths start at 1");
    let mut n = n;
    loop {
        if let Some(k) = ternary_exponent(n) {
            return k as u64;
        }
        // (3^(k-1) - 1)/2 < n < (3^k - 1)/2
        let k = floor_log3(2 * n + 1) + 1;
        n -= (pow3(k - 1) - 1) / 2;
    }
}

/// Jump target of the optimal antimonotone scheme, evaluated as written.
/// Returns 0 wherever the formula is not positive.
pub fn antimonotone_f3(n: u64) -> u64 {
    assert!(n > 0, "lengths start at 1");
    let sub = match ternary_exponent(n) {
        Some(k) => pow3(k - 1) + 1,
        None => (pow3(antimonotone_h(n) as u32) - 1) / 2 + 1,
    };
    n.saturating_sub(sub)
}

/// Which of the two antimonotone families a helper refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    /// Two copies per generation.
    Binary,
    /// Three copies per generation.
    Ternary,
}

impl Arity {
    fn copies(self) -> u64 {
        match self {
            Arity::Binary => 2,
            Arity::Ternary => 3,
        }
    }

    /// Generation of `n`: `floor(log2 n)` or `floor(log3 2n)`.
    pub fn generation(self, n: u64) -> u32 {
        match self {
            Arity::Binary => floor_log2(n),
            Arity::Ternary => floor_log3(2 * n),
        }
    }

    /// Index of the vertebra of generation `t`: `2^(t+1) - 1` or
    /// `(3^(t+1) - 1) / 2`.
    pub fn vertebra(self, t: u32) -> u64 {
        match self {
            Arity::Binary => (1u64 << (t + 1)) - 1,
            Arity::Ternary => (pow3(t + 1) - 1) / 2,
        }
    }

    pub fn is_vertebra(self, n: u64) -> bool {
        n >= 1 && self.vertebra(self.generation(n)) == n
    }

    /// Jump target as written in closed form (0 when absent).
    pub fn formula_jump(self, n: u64) -> u64 {
        match self {
            Arity::Binary => antimonotone_f2(n),
            Arity::Ternary => antimonotone_f3(n),
        }
    }

    /// Order of `n` as used by the closed-form definitions.
    pub fn formula_order(self, n: u64) -> u64 {
        match self {
            Arity::Binary => antimonotone_g(n),
            Arity::Ternary => antimonotone_h(n),
        }
    }

    /// Jump target produced by the copy construction: the first `t + 1`
    /// generations are `copies` copies of the first `t` generations
    /// followed by a new vertebra. Copy `q` (0-based) has its spine jumps
    /// redirected to the vertebra closing copy `q - 1`, and the new vertebra
    /// jumps to the vertebra of generation `t`. Returns 0 when absent.
    pub fn recursive_jump(self, n: u64) -> u64 {
        assert!(n > 0, "lengths start at 1");
        let b = self.copies();
        let mut n = n;
        let mut offset = 0;
        loop {
            if n == 1 {
                return 0;
            }
            let t = self.generation(n);
            let v = self.vertebra(t);
            if n == v {
                return offset + self.vertebra(t - 1);
            }
            // n lies in copies 1..b-1 of the first t generations.
            let prev = self.vertebra(t - 1);
            let q = (n - 1) / prev;
            debug_assert!(q >= 1 && q < b);
            let m = n - q * prev;
            if self.is_vertebra(m) {
                return offset + q * prev;
            }
            offset += q * prev;
            n = m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_examples() {
        assert!(bits(0).is_empty());
        assert_eq!(bits(5), [0, 2].into_iter().collect());
        assert_eq!(bits(6), [1, 2].into_iter().collect());
        for n in 0..2000u64 {
            assert_eq!(bits(n).iter().map(|k| 1u64 << k).sum::<u64>(), n);
        }
    }

    #[test]
    fn logs() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(floor_log2(8), 3);
        assert_eq!(floor_log2(9), 3);
        assert_eq!(floor_log3(1), 0);
        assert_eq!(floor_log3(8), 1);
        assert_eq!(floor_log3(9), 2);
        assert_eq!(v2(12), 2);
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(antimonotone_g(1), 1);
        assert_eq!(antimonotone_f2(9), 7);
        assert_eq!(antimonotone_f2(7), 2);
        let f2: Vec<u64> = (4..=15).map(antimonotone_f2).collect();
        assert_eq!(f2, vec![2, 3, 2, 2, 6, 7, 6, 9, 10, 9, 6, 6]);
        for n in 1..=3 {
            assert_eq!(antimonotone_f2(n), 0);
        }
        assert_eq!(antimonotone_f3(3), 1);
        assert_eq!(antimonotone_f3(5), 3);
        assert_eq!(antimonotone_f3(13), 3);
        assert_eq!(antimonotone_f3(2), 0);
        assert_eq!(antimonotone_f3(4), 0);
    }

    #[test]
    fn closed_form_is_not_antimonotone() {
        // Literal evaluation breaks the claimed antimonotonicity at 4 < 5.
        assert!(antimonotone_f2(4) < antimonotone_f2(5));
    }

    #[test]
    fn generations_and_vertebrae() {
        let a = Arity::Binary;
        assert_eq!(a.generation(1), 0);
        assert_eq!(a.generation(9), 3);
        assert_eq!(a.vertebra(2), 7);
        let o = Arity::Ternary;
        assert_eq!(o.generation(4), 1);
        assert_eq!(o.generation(13), 2);
        assert_eq!(o.generation(12), 2);
        assert_eq!(o.vertebra(0), 1);
        assert_eq!(o.vertebra(2), 13);
        for t in 0..12 {
            assert_eq!(a.generation(a.vertebra(t)), t);
            assert_eq!(o.generation(o.vertebra(t)), t);
        }
    }

    #[test]
    fn recursive_jumps() {
        let a = Arity::Binary;
        assert_eq!(a.recursive_jump(1), 0);
        assert_eq!(a.recursive_jump(3), 1);
        assert_eq!(a.recursive_jump(6), 3);
        assert_eq!(a.recursive_jump(7), 3);
        assert_eq!(a.recursive_jump(8), 7);
        assert_eq!(a.recursive_jump(14), 7);
        assert_eq!(a.recursive_jump(15), 7);
        assert_eq!(a.recursive_jump(10), 7);
        assert_eq!(a.recursive_jump(13), 10);
        let o = Arity::Ternary;
        assert_eq!(o.recursive_jump(4), 1);
        assert_eq!(o.recursive_jump(8), 4);
        assert_eq!(o.recursive_jump(12), 8);
        assert_eq!(o.recursive_jump(13), 4);
        for n in 2..3000 {
            let j = a.recursive_jump(n);
            assert!(j >= 1 && j < n, "{n} -> {j}");
            let j = o.recursive_jump(n);
            assert!(j >= 1 && j < n, "{n} -> {j}");
        }
    }

    #[test]
    fn recursive_jumps_are_antimonotone_and_respect_the_spine() {
        for arity in [Arity::Binary, Arity::Ternary] {
            for n in 2..3000u64 {
                for m in n + 1..(n + 40).min(3000) {
                    let (jn, jm) = (arity.recursive_jump(n), arity.recursive_jump(m));
                    // Jumps never cross: f(n) < f(m) < n < m is impossible.
                    assert!(!(jn < jm && jm < n), "{arity:?}: {n}->{jn}, {m}->{jm}");
                }
                let v = arity.vertebra(arity.generation(n).saturating_sub(1));
                if n > v && !arity.is_vertebra(n) {
                    assert!(arity.recursive_jump(n) >= v);
                }
            }
        }
    }
}
