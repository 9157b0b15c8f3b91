//! Arithmetic over the prime field F_p: primality, primitive roots,
//! discrete-log and power tables, inverses, and the Legendre character.
//!
//! A [`PrimeField`] is immutable after construction and cheap to share
//! across threads. Every other module builds on the tables prepared here.

use crate::error::Error;

/// Largest supported modulus. Tables are O(p) and the verification sweeps
/// are O(p^2) or worse, so the crate targets desk-scale primes only.
pub const MAX_PRIME: u64 = 10_007;

/// Deterministic primality test by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d <= n / d {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp mod m` by square-and-multiply.
pub fn mod_pow(base: u64, exp: u64, m: u64) -> u64 {
    debug_assert!(m > 1);
    let mut base = base % m;
    let mut exp = exp;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of `b` modulo a prime `p`. `b` must be nonzero mod p.
pub fn mod_inv(b: u64, p: u64) -> u64 {
    debug_assert!(b % p != 0, "mod_inv of zero");
    mod_pow(b, p - 2, p)
}

/// Legendre character of `b` modulo an odd prime `p`, as +1 or -1.
/// `b` must be nonzero mod p.
pub fn legendre_symbol(b: u64, p: u64) -> i32 {
    debug_assert!(b % p != 0, "legendre of zero");
    if mod_pow(b, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Reduce a signed value into [0, p).
pub fn reduce_i64(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

fn is_primitive(a: u64, p: u64) -> bool {
    let a = a % p;
    if a == 0 {
        return false;
    }
    // Exhaustive order check: a^k != 1 for 1 <= k < p-1.
    let mut x = a;
    for _ in 1..p - 1 {
        if x == 1 {
            return false;
        }
        x = x * a % p;
    }
    x == 1
}

/// The prime field F_p with a fixed generator `a` of the multiplicative
/// group, plus forward (`a^k`) and inverse (`log_a b`) lookup tables.
#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u64,
    a: u64,
    /// `dlog[b] = Some(log_a b)` for b in [1, p-1]; index 0 stays `None`
    /// so that callers must handle the log-of-zero convention explicitly.
    dlog: Vec<Option<u64>>,
    /// `apow[k] = a^k mod p` for k in [0, p-2].
    apow: Vec<u64>,
}

impl PrimeField {
    /// Build the field for a prime `p >= 3`. When `generator` is `None` the
    /// smallest primitive root is used, which keeps the discrete-log tables
    /// (and everything derived from them) reproducible across runs.
    pub fn new(p: u64, generator: Option<u64>) -> Result<Self, Error> {
        if p > MAX_PRIME {
            return Err(Error::PTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let a = match generator {
            Some(a) => {
                if !(2..p).contains(&a) || !is_primitive(a, p) {
                    return Err(Error::NotGenerator { p, a });
                }
                a
            }
            None => (2..p)
                .find(|&a| is_primitive(a, p))
                .expect("every prime has a primitive root"),
        };
        let mut apow = vec![0u64; (p - 1) as usize];
        let mut dlog = vec![None; p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            apow[k as usize] = x;
            dlog[x as usize] = Some(k);
            x = x * a % p;
        }
        Ok(PrimeField { p, a, dlog, apow })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.a
    }

    /// `log_a b` for nonzero `b`. The zero case is an error, not a value:
    /// callers that need the `theta^(log_a 0) = 0` convention branch first.
    pub fn dlog(&self, b: u64) -> Result<u64, Error> {
        let b = b % self.p;
        if b == 0 {
            return Err(Error::LogOfZero);
        }
        Ok(self.dlog[b as usize].expect("populated for all nonzero residues"))
    }

    /// Legendre character of nonzero `b` as +1 or -1. Equals +1 exactly when
    /// `log_a b` is even.
    pub fn legendre(&self, b: u64) -> Result<i32, Error> {
        let b = b % self.p;
        if b == 0 {
            return Err(Error::LogOfZero);
        }
        Ok(if self.dlog(b)? % 2 == 0 { 1 } else { -1 })
    }

    /// Multiplicative inverse of nonzero `b`.
    pub fn inv(&self, b: u64) -> Result<u64, Error> {
        let b = b % self.p;
        if b == 0 {
            return Err(Error::DivisionByZero(self.p));
        }
        let k = self.dlog(b)?;
        Ok(self.apow[((self.p - 1 - k) % (self.p - 1)) as usize])
    }

    /// `a^k mod p`, with the exponent reduced mod p-1.
    pub fn pow_generator(&self, k: u64) -> u64 {
        self.apow[(k % (self.p - 1)) as usize]
    }

    /// The inverse of 2 mod p (p is odd).
    pub fn inv_two(&self) -> u64 {
        (self.p + 1) / 2
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        (x % self.p + y % self.p) % self.p
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        (x % self.p + self.p - y % self.p) % self.p
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        x % self.p * (y % self.p) % self.p
    }

    pub fn neg(&self, x: u64) -> u64 {
        (self.p - x % self.p) % self.p
    }
}
