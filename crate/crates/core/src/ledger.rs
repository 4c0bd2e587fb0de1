//! Deduction engine over facts "k is in K_n" (a k-dimensional zero-sum
//! subspace of F_{2^n} exists) and "k is in SF_n" (none exists), with
//! machine-checkable justification chains.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitlinalg::Subspace;
use crate::error::Error;
use crate::gf2n::{self, Fe, FieldSpec};
use crate::zerosum::{check_all_criteria, Witness};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Status {
    InK,
    InSf,
    Open,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::InK => "IN_K",
            Status::InSf => "IN_SF",
            Status::Open => "OPEN",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Justification {
    Axiom { note: String },
    Gcd { d: u32 },
    Symmetry { from: u32 },
    Sum { a: u32, b: u32 },
    Factor { poly_hex: String },
    Threshold { bound: f64 },
    WitnessImport { modulus: String, basis: Vec<String> },
}

impl Justification {
    pub fn rule_name(&self) -> &'static str {
        match self {
            Justification::Axiom { .. } => "axiom",
            Justification::Gcd { .. } => "gcd",
            Justification::Symmetry { .. } => "symmetry",
            Justification::Sum { .. } => "sum",
            Justification::Factor { .. } => "factor",
            Justification::Threshold { .. } => "threshold",
            Justification::WitnessImport { .. } => "witness",
        }
    }

    pub fn params(&self) -> String {
        match self {
            Justification::Axiom { note } => note.clone(),
            Justification::Gcd { d } => format!("d={d}"),
            Justification::Symmetry { from } => format!("from k={from}"),
            Justification::Sum { a, b } => format!("{a}+{b}"),
            Justification::Factor { poly_hex } => format!("poly=0x{poly_hex}"),
            Justification::Threshold { bound } => format!("bound={bound:.3}"),
            Justification::WitnessImport { basis, .. } => format!("basis={}", basis.join("|")),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fact {
    pub n: u32,
    pub k: u32,
    pub status: Status,
    pub justification: Justification,
}

/// Fact store for one n. Facts are insert-once: the first derivation of a
/// status wins and later rules only confirm it.
#[derive(Clone, Debug)]
pub struct Ledger {
    n: u32,
    facts: BTreeMap<u32, Fact>,
}

/// The three real-valued lower bounds on n from the irreducibility
/// argument, for a given k.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub k: u32,
    /// (13k - 19) * log2(1 + sqrt(21)) / 3
    pub exact_bound: f64,
    /// 10.8k - 15.7
    pub simplified_bound: f64,
    /// 2*log2 of the larger root of the per-k quadratic
    pub quadratic_root_bound: f64,
}

pub fn threshold_exact(k: u32) -> ThresholdReport {
    let kk = k as f64;
    let c = (1.0 + 21f64.sqrt()).log2() / 3.0;
    let exact_bound = c * (13.0 * kk - 19.0);
    let simplified_bound = 10.8 * kk - 15.7;
    let disc = 2f64.powf(4.0 * (kk - 1.0))
        + 20.0 * 2f64.powf(13.0 * (kk - 1.0) / 3.0)
        + 2f64.powf(2.0 * kk + 2.0);
    let y0 = (2f64.powf(2.0 * (kk - 1.0)) + disc.sqrt()) / 2.0;
    ThresholdReport {
        k,
        exact_bound,
        simplified_bound,
        quadratic_root_bound: 2.0 * y0.log2(),
    }
}

/// Larger root of 2^n - 210*2^{n/2} - (5*16^{13/3} + 31^2) = 0, by
/// bisection on (0, 40).
pub fn lemma52_root() -> f64 {
    let c = 5.0 * 16f64.powf(13.0 / 3.0) + 961.0;
    let g = |x: f64| 2f64.powf(x) - 210.0 * 2f64.powf(x / 2.0) - c;
    let (mut lo, mut hi) = (0.0f64, 40.0f64);
    assert!(g(lo) < 0.0 && g(hi) > 0.0);
    for _ in 0..80 {
        let mid = (lo + hi) / 2.0;
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn poly_mul(a: u128, b: u128) -> u128 {
    assert!(gf2n::poly_deg(a) + gf2n::poly_deg(b) < 128);
    let mut r = 0u128;
    let mut b = b;
    let mut a = a;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    r
}

fn ord2_mod(n: u32) -> u32 {
    assert!(n % 2 == 1 && n > 1);
    let mut x = 2u64 % n as u64;
    let mut m = 1u32;
    while x != 1 {
        x = x * 2 % n as u64;
        m += 1;
    }
    m
}

/// Irreducible factors of X^n - 1 over F_2 (n odd), as bit polynomials,
/// sorted by degree then value. One factor per cyclotomic coset of 2 mod
/// n; coefficients come out of a minimal-polynomial product in the
/// splitting field.
pub fn factor_x_n_minus_1(n: u32) -> Result<Vec<u128>, Error> {
    if n % 2 == 0 || n == 0 || n > 64 {
        return Err(Error::InvalidInput(format!("need odd n in 1..=64, got {n}")));
    }
    if n == 1 {
        return Ok(vec![0b11]);
    }
    let m = ord2_mod(n);
    if m > 64 {
        return Err(Error::SplittingFieldTooLarge(m));
    }
    let f = FieldSpec::with_default_modulus(m)?;
    let beta = nth_root_of_unity(&f, n);

    let mut seen = vec![false; n as usize];
    let mut factors = Vec::new();
    for s in 0..n {
        if seen[s as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut e = s;
        while !seen[e as usize] {
            seen[e as usize] = true;
            coset.push(e);
            e = e * 2 % n;
        }
        // product of (X + beta^e) over the coset, in the splitting field
        let mut coeffs = vec![Fe::ONE];
        for &e in &coset {
            let root = f.pow(beta, e as u128);
            let mut next = vec![Fe::ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = f.add(next[i + 1], c);
                next[i] = f.add(next[i], f.mul(c, root));
            }
            coeffs = next;
        }
        let mut p = 0u128;
        for (i, &c) in coeffs.iter().enumerate() {
            // coefficients of a minimal polynomial over F_2 land in F_2
            assert!(c == Fe::ZERO || c == Fe::ONE, "coset product left the base field");
            if c == Fe::ONE {
                p |= 1 << i;
            }
        }
        factors.push(p);
    }
    factors.sort_by_key(|&p| (gf2n::poly_deg(p), p));
    let product = factors.iter().copied().fold(1u128, poly_mul);
    assert_eq!(product, (1u128 << n) | 1);
    Ok(factors)
}

/// Element of multiplicative order exactly n in the splitting field.
fn nth_root_of_unity(f: &FieldSpec, n: u32) -> Fe {
    let e = (f.order() - 1) / n as u128;
    assert_eq!((f.order() - 1) % n as u128, 0);
    let primes = gf2n::prime_factors(n as u64);
    for c in 2..=f.mask() {
        let y = f.pow(Fe(c), e);
        if primes.iter().all(|&p| f.pow(y, (n as u64 / p) as u128) != Fe::ONE) {
            return y;
        }
    }
    unreachable!("cyclic group of order 2^m - 1 has an element of order n")
}

impl Ledger {
    pub fn new(n: u32) -> Ledger {
        assert!(n >= 2);
        Ledger {
            n,
            facts: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn status(&self, k: u32) -> Status {
        self.facts.get(&k).map_or(Status::Open, |f| f.status)
    }

    pub fn fact(&self, k: u32) -> Option<&Fact> {
        self.facts.get(&k)
    }

    pub fn k_set(&self) -> Vec<u32> {
        (1..self.n).filter(|&k| self.status(k) == Status::InK).collect()
    }

    pub fn sf_set(&self) -> Vec<u32> {
        (1..self.n).filter(|&k| self.status(k) == Status::InSf).collect()
    }

    pub fn open_set(&self) -> Vec<u32> {
        (1..self.n).filter(|&k| self.status(k) == Status::Open).collect()
    }

    pub(crate) fn insert(
        &mut self,
        k: u32,
        status: Status,
        justification: Justification,
    ) -> Result<bool, Error> {
        assert!(k >= 1 && k < self.n && status != Status::Open);
        match self.facts.get(&k) {
            Some(f) if f.status == status => Ok(false),
            Some(_) => Err(Error::ContradictionDetected { n: self.n, k }),
            None => {
                self.facts.insert(
                    k,
                    Fact {
                        n: self.n,
                        k,
                        status,
                        justification,
                    },
                );
                Ok(true)
            }
        }
    }

    /// Literature facts: 1 and n-1 are always sum-free, 2 and n-2 for odd
    /// n; 3, 4, 5 are in K_n from n = 6, 7, 8 on.
    pub fn seed_axioms(&mut self) -> Result<bool, Error> {
        let n = self.n;
        let mut changed = false;
        let ax = |note: &str| Justification::Axiom { note: note.into() };
        changed |= self.insert(1, Status::InSf, ax("lines are never zero-sum"))?;
        changed |= self.insert(n - 1, Status::InSf, ax("hyperplanes are never zero-sum"))?;
        if n % 2 == 1 && n >= 3 {
            changed |= self.insert(2, Status::InSf, ax("planes in odd-degree fields"))?;
            if n >= 4 {
                changed |= self.insert(n - 2, Status::InSf, ax("planes in odd-degree fields, dual"))?;
            }
        }
        for (k, n_min) in [(3u32, 6u32), (4, 7), (5, 8)] {
            if n >= n_min && k + 3 <= n {
                changed |= self.insert(k, Status::InK, ax("small-dimension constructions"))?;
            }
        }
        Ok(changed)
    }

    /// gcd(k, n) > 1 puts k in K_n: scale a k/d-dimensional
    /// F_{2^d}-subspace of the subfield tower.
    pub fn rule_gcd(&mut self) -> Result<bool, Error> {
        let mut changed = false;
        for k in 2..self.n {
            let d = gcd(k, self.n);
            if d > 1 {
                changed |= self.insert(k, Status::InK, Justification::Gcd { d })?;
            }
        }
        Ok(changed)
    }

    /// k and n-k always share their status.
    pub fn rule_symmetry(&mut self) -> Result<bool, Error> {
        let mut changed = false;
        let snapshot: Vec<(u32, Status)> =
            self.facts.values().map(|f| (f.k, f.status)).collect();
        for (k, status) in snapshot {
            let other = self.n - k;
            if (1..self.n).contains(&other) && self.facts.get(&other).is_none() {
                changed |= self.insert(other, status, Justification::Symmetry { from: k })?;
            }
        }
        Ok(changed)
    }

    /// k, l in K_n with kl < n gives k + l in K_n.
    pub fn rule_sum(&mut self) -> Result<bool, Error> {
        let mut changed = false;
        loop {
            let ks = self.k_set();
            let mut round = false;
            for (i, &a) in ks.iter().enumerate() {
                for &b in &ks[i..] {
                    let s = a + b;
                    if a * b < self.n && s < self.n && self.facts.get(&s).is_none() {
                        round |= self.insert(s, Status::InK, Justification::Sum { a, b })?;
                    }
                }
            }
            if !round {
                break;
            }
            changed = true;
        }
        Ok(changed)
    }

    /// n at or above the exact irreducibility threshold puts k in K_n.
    pub fn rule_threshold(&mut self) -> Result<bool, Error> {
        let mut changed = false;
        for k in 3..self.n.saturating_sub(2) {
            let bound = threshold_exact(k).exact_bound;
            if self.n as f64 + 1e-9 >= bound.ceil() {
                changed |= self.insert(k, Status::InK, Justification::Threshold { bound })?;
            }
        }
        Ok(changed)
    }

    /// A divisor of X^n - 1 of degree k with zero X-coefficient is the
    /// 2-associate of a linearized polynomial whose kernel is a
    /// k-dimensional zero-sum subspace.
    pub fn rule_factor(&mut self) -> Result<bool, Error> {
        if self.n % 2 == 0 {
            return Ok(false);
        }
        let factors = factor_x_n_minus_1(self.n)?;
        let mut changed = false;
        for mask in 1u32..1 << factors.len() {
            let mut p = 1u128;
            for (i, &f) in factors.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    p = poly_mul(p, f);
                }
            }
            let k = gf2n::poly_deg(p) as u32;
            if (2..self.n).contains(&k) && p & 2 == 0 && self.facts.get(&k).is_none() {
                changed |= self.insert(
                    k,
                    Status::InK,
                    Justification::Factor {
                        poly_hex: format!("{p:x}"),
                    },
                )?;
            }
        }
        Ok(changed)
    }

    /// Import externally found subspaces; each record is re-verified by
    /// all three criteria before it can justify a fact.
    pub fn rule_witness_import(&mut self, witnesses: &[Witness]) -> Result<bool, Error> {
        let mut changed = false;
        for w in witnesses {
            if w.n != self.n {
                continue;
            }
            if !w.verify()? {
                return Err(Error::InvalidInput(format!(
                    "witness for (n, k) = ({}, {}) failed re-verification",
                    w.n, w.k
                )));
            }
            changed |= self.insert(
                w.k,
                Status::InK,
                Justification::WitnessImport {
                    modulus: w.modulus.clone(),
                    basis: w.basis.clone(),
                },
            )?;
        }
        Ok(changed)
    }

    /// Replay every justification: premises present, side conditions
    /// satisfied, witnesses re-verified.
    pub fn audit(&self) -> Result<(), Error> {
        let n = self.n;
        let fail = |k: u32, what: &str| {
            Err(Error::InvalidInput(format!(
                "audit failure at (n, k) = ({n}, {k}): {what}"
            )))
        };
        for fact in self.facts.values() {
            let k = fact.k;
            match &fact.justification {
                Justification::Axiom { .. } => {
                    let ok = match fact.status {
                        Status::InSf => {
                            k == 1 || k == n - 1 || (n % 2 == 1 && (k == 2 || k == n - 2))
                        }
                        Status::InK => {
                            matches!((k, n >= k + 3), (3, true) if n >= 6)
                                || matches!((k, n >= k + 3), (4, true) if n >= 7)
                                || matches!((k, n >= k + 3), (5, true) if n >= 8)
                        }
                        Status::Open => false,
                    };
                    if !ok {
                        return fail(k, "axiom does not apply");
                    }
                }
                Justification::Gcd { d } => {
                    if fact.status != Status::InK || *d < 2 || k % d != 0 || n % d != 0 {
                        return fail(k, "gcd side condition");
                    }
                }
                Justification::Symmetry { from } => {
                    if *from != n - k || self.status(*from) != fact.status {
                        return fail(k, "symmetry premise");
                    }
                }
                Justification::Sum { a, b } => {
                    if fact.status != Status::InK
                        || a + b != k
                        || a * b >= n
                        || self.status(*a) != Status::InK
                        || self.status(*b) != Status::InK
                    {
                        return fail(k, "sum premise or side condition");
                    }
                }
                Justification::Factor { poly_hex } => {
                    let p = u128::from_str_radix(poly_hex, 16)
                        .map_err(|_| Error::BadHex(poly_hex.clone()))?;
                    if fact.status != Status::InK
                        || gf2n::poly_deg(p) as u32 != k
                        || p & 2 != 0
                        || p & 1 != 1
                        || gf2n::poly_rem((1u128 << n) | 1, p) != 0
                    {
                        return fail(k, "factor polynomial check");
                    }
                }
                Justification::Threshold { bound } => {
                    let expect = threshold_exact(k).exact_bound;
                    if fact.status != Status::InK
                        || (bound - expect).abs() > 1e-6
                        || (n as f64) + 1e-9 < bound.ceil()
                    {
                        return fail(k, "threshold bound");
                    }
                }
                Justification::WitnessImport { modulus, basis } => {
                    let m = u128::from_str_radix(modulus, 16)
                        .map_err(|_| Error::BadHex(modulus.clone()))?;
                    let f = FieldSpec::new(n, m)?;
                    let rows: Result<Vec<Fe>, Error> =
                        basis.iter().map(|h| Fe::from_hex(h)).collect();
                    let e = Subspace::from_span(&rows?, &f);
                    if e.dim() != k as usize {
                        return fail(k, "witness basis rank");
                    }
                    let report = check_all_criteria(&e)?;
                    if fact.status != Status::InK || !report.agree() || !report.all_zero_sum() {
                        return fail(k, "witness re-verification");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("n,k,status,rule,premises\n");
        for k in 1..self.n {
            match self.facts.get(&k) {
                Some(f) => out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    self.n,
                    k,
                    f.status.name(),
                    f.justification.rule_name(),
                    f.justification.params().replace(',', ";")
                )),
                None => out.push_str(&format!("{},{},OPEN,,\n", self.n, k)),
            }
        }
        out
    }

    pub fn report_text(&self) -> String {
        let mut out = format!("classification of dimensions 1..{} for n = {}\n", self.n - 1, self.n);
        for k in 1..self.n {
            match self.facts.get(&k) {
                Some(f) => out.push_str(&format!(
                    "  k = {:2}  {:5}  via {} ({})\n",
                    k,
                    f.status.name(),
                    f.justification.rule_name(),
                    f.justification.params()
                )),
                None => out.push_str(&format!("  k = {k:2}  OPEN   not derivable by these rules\n")),
            }
        }
        out
    }
}

/// Run axioms and all rules to a fixed point, then audit the chains.
pub fn derive(n: u32) -> Result<Ledger, Error> {
    derive_with_witnesses(n, &[])
}

pub fn derive_with_witnesses(n: u32, witnesses: &[Witness]) -> Result<Ledger, Error> {
    if !(2..=64).contains(&n) {
        return Err(Error::InvalidInput(format!("need 2 <= n <= 64, got {n}")));
    }
    let mut ledger = Ledger::new(n);
    ledger.seed_axioms()?;
    ledger.rule_witness_import(witnesses)?;
    // these three do not depend on other facts, so once is enough
    ledger.rule_gcd()?;
    ledger.rule_threshold()?;
    ledger.rule_factor()?;
    loop {
        let mut changed = false;
        changed |= ledger.rule_sum()?;
        changed |= ledger.rule_symmetry()?;
        if !changed {
            break;
        }
    }
    ledger.audit()?;
    Ok(ledger)
}
