//! Arithmetic in F_{2^n} = F_2[X]/(modulus) for 1 <= n <= 64.
//!
//! An element is a single `u64` coefficient word: bit j is the coefficient
//! of X^j in the residue representative. The modulus is carried separately
//! in a [`FieldSpec`] so one element type serves every degree.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An element of F_{2^n}, bit j = coefficient of X^j.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Fe, Error> {
        u64::from_str_radix(s.trim(), 16)
            .map(Fe)
            .map_err(|_| Error::BadHex(s.to_string()))
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe({:#x})", self.0)
    }
}

/// A binary field F_{2^n}: extension degree plus irreducible modulus.
///
/// The modulus lives in a `u128` so the top bit (X^n with n = 64) always
/// fits. Irreducibility is verified at construction.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    n: u32,
    modulus: u128,
}

impl FieldSpec {
    /// Build a field from an explicit modulus bit-vector (bit j = coeff of X^j).
    pub fn new(n: u32, modulus: u128) -> Result<FieldSpec, Error> {
        if n == 0 || n > 64 {
            return Err(Error::BadDegree(n));
        }
        if modulus >> n != 1 {
            return Err(Error::NotMonic);
        }
        if modulus & 1 == 0 || !is_irreducible(modulus) {
            return Err(Error::NotIrreducible(modulus));
        }
        Ok(FieldSpec { n, modulus })
    }

    /// The minimal-weight irreducible modulus of degree n: trinomial if one
    /// exists, else pentanomial, else a wider search (never needed for n <= 64).
    pub fn with_default_modulus(n: u32) -> Result<FieldSpec, Error> {
        let modulus = default_modulus(n)?;
        Ok(FieldSpec { n, modulus })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn modulus_hex(&self) -> String {
        format!("{:x}", self.modulus)
    }

    /// Mask of the n valid coefficient bits.
    pub fn mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 & !self.mask() == 0
    }

    /// Number of field elements as u128 (2^n).
    pub fn order(&self) -> u128 {
        1u128 << self.n
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(a.0 ^ b.0)
    }

    /// Carryless shift-XOR multiplication with modular reduction.
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let mut prod: u128 = 0;
        let mut a128 = a.0 as u128;
        let mut b64 = b.0;
        while b64 != 0 {
            if b64 & 1 == 1 {
                prod ^= a128;
            }
            a128 <<= 1;
            b64 >>= 1;
        }
        Fe(self.reduce(prod))
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    fn reduce(&self, mut prod: u128) -> u64 {
        let n = self.n;
        let top = 128 - prod.leading_zeros();
        if top <= n {
            return prod as u64;
        }
        for i in (n..top).rev() {
            if prod >> i & 1 == 1 {
                prod ^= self.modulus << (i - n);
            }
        }
        prod as u64
    }

    /// a^{2^i} by repeated squaring.
    pub fn frob_pow(&self, a: Fe, i: u32) -> Fe {
        let mut x = a;
        for _ in 0..i {
            x = self.square(x);
        }
        x
    }

    /// a^e by square-and-multiply.
    pub fn pow(&self, a: Fe, mut e: u128) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on
    /// polynomials over F_2.
    pub fn inv(&self, a: Fe) -> Result<Fe, Error> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // Invariant: g = s * a (mod f) for both (g0, s0) and (g1, s1).
        let mut g0: u128 = self.modulus;
        let mut g1: u128 = a.0 as u128;
        let mut s0: u128 = 0;
        let mut s1: u128 = 1;
        while g1 != 0 {
            while poly_deg(g0) >= poly_deg(g1) {
                let shift = (poly_deg(g0) - poly_deg(g1)) as u32;
                g0 ^= g1 << shift;
                s0 ^= s1 << shift;
                if g0 == 0 {
                    break;
                }
            }
            std::mem::swap(&mut g0, &mut g1);
            std::mem::swap(&mut s0, &mut s1);
        }
        debug_assert_eq!(g0, 1);
        Ok(Fe(self.reduce(s0)))
    }

    /// Inverse as a^{2^n - 2}; the exponentiation route, kept as an
    /// independent cross-check of `inv`.
    pub fn inv_by_pow(&self, a: Fe) -> Result<Fe, Error> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, (1u128 << self.n) - 2))
    }

    /// Absolute trace Tr_{2^n/2}(a) = sum of a^{2^i}, i < n.
    pub fn trace(&self, a: Fe) -> u8 {
        let mut acc = Fe::ZERO;
        let mut x = a;
        for _ in 0..self.n {
            acc = self.add(acc, x);
            x = self.square(x);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 as u8
    }
}

/// Common surface of the generic field and the table-backed fast path, so
/// evaluators can be written once and run on either.
pub trait FieldOps {
    fn spec(&self) -> &FieldSpec;
    fn mul(&self, a: Fe, b: Fe) -> Fe;
    fn inv(&self, a: Fe) -> Result<Fe, Error>;
    fn frob_pow(&self, a: Fe, i: u32) -> Fe;

    fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(a.0 ^ b.0)
    }
}

impl FieldOps for FieldSpec {
    fn spec(&self) -> &FieldSpec {
        self
    }
    fn mul(&self, a: Fe, b: Fe) -> Fe {
        FieldSpec::mul(self, a, b)
    }
    fn inv(&self, a: Fe) -> Result<Fe, Error> {
        FieldSpec::inv(self, a)
    }
    fn frob_pow(&self, a: Fe, i: u32) -> Fe {
        FieldSpec::frob_pow(self, a, i)
    }
}

impl FieldOps for DlogTable {
    fn spec(&self) -> &FieldSpec {
        &self.field
    }
    fn mul(&self, a: Fe, b: Fe) -> Fe {
        DlogTable::mul(self, a, b)
    }
    fn inv(&self, a: Fe) -> Result<Fe, Error> {
        DlogTable::inv(self, a)
    }
    fn frob_pow(&self, a: Fe, i: u32) -> Fe {
        DlogTable::frob_pow(self, a, i)
    }
}

/// a^e by square-and-multiply over any [`FieldOps`] backend.
pub fn pow_with<O: FieldOps>(ops: &O, a: Fe, mut e: u128) -> Fe {
    let mut base = a;
    let mut acc = Fe::ONE;
    while e != 0 {
        if e & 1 == 1 {
            acc = ops.mul(acc, base);
        }
        base = ops.mul(base, base);
        e >>= 1;
    }
    acc
}

pub(crate) fn poly_deg(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

pub(crate) fn poly_rem(mut a: u128, b: u128) -> u128 {
    let db = poly_deg(b);
    while poly_deg(a) >= db {
        a ^= b << (poly_deg(a) - db);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// X^{2^e} mod f, by squaring the residue of X repeatedly.
fn x_pow_pow2_mod(e: u32, f: u128) -> u128 {
    let mut x: u128 = poly_rem(2, f);
    for _ in 0..e {
        x = poly_mul_mod(x, x, f);
    }
    x
}

fn poly_mul_mod(a: u128, b: u128, f: u128) -> u128 {
    // Both operands are reduced mod f (degree < 64), so the raw product
    // fits in 128 bits.
    let mut prod: u128 = 0;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            prod ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    poly_rem(prod, f)
}

/// Irreducibility over F_2: X^{2^n} = X mod f, and X^{2^{n/p}} - X is
/// coprime to f for every prime p dividing n.
pub fn is_irreducible(f: u128) -> bool {
    let n = poly_deg(f);
    if n < 1 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f & 1 == 0 {
        return false; // X divides f
    }
    if x_pow_pow2_mod(n as u32, f) != poly_rem(2, f) {
        return false;
    }
    for p in prime_factors(n as u64) {
        let xp = x_pow_pow2_mod(n as u32 / p as u32, f);
        if poly_gcd(xp ^ 2, f) != 1 {
            return false;
        }
    }
    true
}

/// The least-weight irreducible of degree n, ties broken by numeric value:
/// trinomials first, then pentanomials, then increasing weight.
pub fn default_modulus(n: u32) -> Result<u128, Error> {
    if n == 0 || n > 64 {
        return Err(Error::BadDegree(n));
    }
    if n == 1 {
        return Ok(0b11); // X + 1
    }
    for weight in 3..=(n + 1) {
        let inner = weight - 2; // set bits strictly between X^0 and X^n
        let mut found: Option<u128> = None;
        enumerate_inner_bits(n, inner, 1, 0, &mut |cand| {
            let f = (1u128 << n) | cand | 1;
            if found.is_none() && is_irreducible(f) {
                found = Some(f);
            }
        });
        if let Some(f) = found {
            return Ok(f);
        }
    }
    Err(Error::NoModulusFound(n))
}

fn enumerate_inner_bits(n: u32, remaining: u32, lo: u32, acc: u128, visit: &mut impl FnMut(u128)) {
    if remaining == 0 {
        visit(acc);
        return;
    }
    // Lowest position first so candidates come out in increasing numeric order.
    for j in lo..n - remaining + 1 {
        enumerate_inner_bits(n, remaining - 1, j + 1, acc | 1u128 << j, visit);
    }
}

/// Exp/log tables over a primitive element, for hot loops at small n.
///
/// mul is two lookups and a modular add, inv is one lookup. Usable for
/// n <= 26 or so; the censuses and exhaustive sweeps all fit well below.
pub struct DlogTable {
    pub field: FieldSpec,
    exp: Vec<u64>,
    log: Vec<u32>,
    order: u32, // 2^n - 1
}

impl DlogTable {
    pub fn new(field: &FieldSpec) -> Result<DlogTable, Error> {
        let n = field.n();
        if n > 26 {
            return Err(Error::LimitExceeded(format!(
                "dlog table for n = {n} would need 2^{n} entries"
            )));
        }
        let order = (field.order() - 1) as u32;
        let g = find_generator(field);
        let size = 1usize << n;
        let mut exp = vec![0u64; size];
        let mut log = vec![0u32; size];
        let mut x = Fe::ONE;
        for i in 0..order {
            exp[i as usize] = x.0;
            log[x.0 as usize] = i;
            x = field.mul(x, g);
        }
        debug_assert_eq!(x, Fe::ONE);
        Ok(DlogTable {
            field: *field,
            exp,
            log,
            order,
        })
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let mut e = self.log[a.0 as usize] + self.log[b.0 as usize];
        if e >= self.order {
            e -= self.order;
        }
        Fe(self.exp[e as usize])
    }

    #[inline]
    pub fn inv(&self, a: Fe) -> Result<Fe, Error> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let e = self.log[a.0 as usize];
        let e = if e == 0 { 0 } else { self.order - e };
        Ok(Fe(self.exp[e as usize]))
    }

    #[inline]
    pub fn frob_pow(&self, a: Fe, i: u32) -> Fe {
        if a.is_zero() {
            return Fe::ZERO;
        }
        let e = ((self.log[a.0 as usize] as u64) << i) % self.order as u64;
        Fe(self.exp[e as usize])
    }
}

fn find_generator(field: &FieldSpec) -> Fe {
    let order = (field.order() - 1) as u64;
    if order == 1 {
        return Fe::ONE;
    }
    let primes = prime_factors(order);
    'outer: for c in 2..=field.mask() {
        let cand = Fe(c);
        for &p in &primes {
            if field.pow(cand, (order / p) as u128) == Fe::ONE {
                continue 'outer;
            }
        }
        return cand;
    }
    unreachable!("multiplicative group of a finite field is cyclic");
}

pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn f17() -> FieldSpec {
        FieldSpec::new(17, (1 << 17) | (1 << 3) | 1).unwrap()
    }

    fn random_fe(rng: &mut StdRng, f: &FieldSpec) -> Fe {
        Fe(rng.gen::<u64>() & f.mask())
    }

    #[test]
    fn reduction_x16_times_x() {
        // X^16 * X = X^17 = X^3 + 1 in F_2[X]/(X^17 + X^3 + 1)
        let f = f17();
        assert_eq!(f.mul(Fe(1 << 16), Fe(2)), Fe((1 << 3) | 1));
    }

    #[test]
    fn one_is_identity() {
        let f = f17();
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..50 {
            let a = random_fe(&mut rng, &f);
            assert_eq!(f.mul(Fe::ONE, a), a);
        }
    }

    #[test]
    fn squaring_in_char_2() {
        // (X + 1)^2 = X^2 + 1 whenever n >= 3
        for n in 3..=10 {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            assert_eq!(f.mul(Fe(0b11), Fe(0b11)), Fe(0b101));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f17();
        let mut rng = StdRng::seed_from_u64(2);
        assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
        for _ in 0..100 {
            let a = random_fe(&mut rng, &f);
            if a.is_zero() {
                continue;
            }
            assert_eq!(f.mul(f.inv(a).unwrap(), a), Fe::ONE);
        }
        assert!(f.inv(Fe::ZERO).is_err());
    }

    #[test]
    fn inv_of_x_in_gf8() {
        // X * (X^2 + 1) = X^3 + X = 1 mod X^3 + X + 1
        let f = FieldSpec::new(3, 0b1011).unwrap();
        assert_eq!(f.inv(Fe(0b10)).unwrap(), Fe(0b101));
    }

    #[test]
    fn euclid_agrees_with_pow() {
        for n in 2..=24 {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            let mut rng = StdRng::seed_from_u64(n as u64);
            for _ in 0..20 {
                let a = random_fe(&mut rng, &f);
                if a.is_zero() {
                    continue;
                }
                assert_eq!(f.inv(a).unwrap(), f.inv_by_pow(a).unwrap());
            }
        }
    }

    #[test]
    fn field_axioms_sampled() {
        for n in 2..=24 {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            let mut rng = StdRng::seed_from_u64(100 + n as u64);
            for _ in 0..20 {
                let a = random_fe(&mut rng, &f);
                let b = random_fe(&mut rng, &f);
                let c = random_fe(&mut rng, &f);
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }

    #[test]
    fn frobenius_fixed_points_and_automorphism() {
        for n in [4u32, 7, 11, 17] {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            let mut rng = StdRng::seed_from_u64(n as u64);
            for _ in 0..20 {
                let a = random_fe(&mut rng, &f);
                let b = random_fe(&mut rng, &f);
                assert_eq!(f.frob_pow(a, 0), a);
                assert_eq!(f.frob_pow(a, n), a);
                for i in 1..n {
                    assert_eq!(
                        f.frob_pow(f.add(a, b), i),
                        f.add(f.frob_pow(a, i), f.frob_pow(b, i))
                    );
                    assert_eq!(
                        f.frob_pow(f.mul(a, b), i),
                        f.mul(f.frob_pow(a, i), f.frob_pow(b, i))
                    );
                }
            }
        }
    }

    #[test]
    fn trace_basics_and_balance() {
        for n in 1..=16u32 {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            assert_eq!(f.trace(Fe::ZERO), 0);
            assert_eq!(f.trace(Fe::ONE), (n % 2) as u8);
            let zeros = (0..f.order() as u64).filter(|&a| f.trace(Fe(a)) == 0).count();
            assert_eq!(zeros as u128, f.order() / 2);
        }
    }

    #[test]
    fn irreducibility_known_cases() {
        assert!(is_irreducible((1 << 17) | (1 << 3) | 1)); // X^17 + X^3 + 1
        assert!(is_irreducible(
            (1 << 19) | (1 << 5) | (1 << 2) | (1 << 1) | 1
        )); // X^19 + X^5 + X^2 + X + 1
        assert!(!is_irreducible(0b101)); // X^2 + 1 = (X + 1)^2
        assert!(is_irreducible(0b111)); // X^2 + X + 1
        assert!(!is_irreducible(0b1111)); // (X + 1)(X^2 + X + 1)
    }

    #[test]
    fn default_modulus_all_degrees() {
        for n in 1..=64 {
            let f = default_modulus(n).unwrap();
            assert!(is_irreducible(f));
            assert_eq!(f >> n, 1);
            assert_eq!(f & 1, 1);
        }
        // spot-check against the classic minimal trinomials
        assert_eq!(default_modulus(2).unwrap(), 0b111);
        assert_eq!(default_modulus(3).unwrap(), 0b1011);
        assert_eq!(default_modulus(4).unwrap(), 0b10011);
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // number of monic irreducibles of degree n over F_2:
        // (1/n) sum_{d|n} mu(n/d) 2^d; n=4 -> 3, n=6 -> 9
        for (n, expect) in [(2u32, 1usize), (3, 2), (4, 3), (5, 6), (6, 9)] {
            let count = (0..1u128 << n)
                .map(|low| (1u128 << n) | low)
                .filter(|&f| is_irreducible(f))
                .count();
            assert_eq!(count, expect, "degree {n}");
        }
    }

    #[test]
    fn dlog_table_matches_generic_ops() {
        for n in [1u32, 2, 5, 9, 12] {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            let t = DlogTable::new(&f).unwrap();
            let mut rng = StdRng::seed_from_u64(n as u64);
            for _ in 0..200 {
                let a = random_fe(&mut rng, &f);
                let b = random_fe(&mut rng, &f);
                assert_eq!(t.mul(a, b), f.mul(a, b));
                if !a.is_zero() {
                    assert_eq!(t.inv(a).unwrap(), f.inv(a).unwrap());
                    for i in 0..n {
                        assert_eq!(t.frob_pow(a, i), f.frob_pow(a, i));
                    }
                }
            }
        }
    }

    #[test]
    fn hex_roundtrip() {
        let a = Fe(0x1abcd);
        assert_eq!(Fe::from_hex(&a.to_hex()).unwrap(), a);
        assert!(Fe::from_hex("zz").is_err());
    }
}
