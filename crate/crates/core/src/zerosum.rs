//! Zero-sum subspace predicates, the three-way criterion cross-check,
//! witness search, exact Z_k counts, and the full-grid tuple censuses.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitlinalg::{gaussian_binomial, Subspace, SubspaceEnumerator};
use crate::error::Error;
use crate::gf2n::{DlogTable, Fe, FieldOps, FieldSpec};
use crate::pointeval::{delta_eval_product, fk_eval, theta_eval, ThetaPlan};
use crate::subcalc::gamma;
use crate::sympoly::{self, MPoly};

/// Work budget for exhaustive certifications: subspace count times 2^k.
const EXHAUSTION_BUDGET: u128 = 1 << 36;

/// Largest dimension accepted by the criteria cross-check.
pub const CRITERIA_DIM_CAP: usize = 11;

/// Sum of 1/u over the nonzero elements of E.
pub fn inverse_sum(e: &Subspace) -> Result<Fe, Error> {
    inverse_sum_with(e, e.field())
}

fn inverse_sum_with<O: FieldOps>(e: &Subspace, ops: &O) -> Result<Fe, Error> {
    let k = e.dim();
    if k == 0 || k > 30 {
        return Err(Error::LimitExceeded(format!("dim {k} outside 1..=30")));
    }
    let basis = e.basis_elements();
    let mut acc = Fe::ZERO;
    let mut cur = Fe::ZERO;
    // Gray code: one XOR then one inversion per element
    for g in 1u64..1 << k {
        cur = ops.add(cur, basis[g.trailing_zeros() as usize]);
        acc = ops.add(acc, ops.inv(cur)?);
    }
    Ok(acc)
}

pub fn is_zero_sum(e: &Subspace) -> Result<bool, Error> {
    Ok(inverse_sum(e)?.is_zero())
}

/// Outcome of the three equivalent zero-sum tests on one subspace.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CriteriaReport {
    /// sum of inverses over E vanishes
    pub zero_sum: bool,
    /// F_k vanishes on E's canonical basis
    pub fk_zero: bool,
    /// Theta_k vanishes on the canonical basis of gamma(E)
    pub theta_zero: bool,
}

impl CriteriaReport {
    /// The three predicates are provably equivalent; disagreement is a
    /// correctness failure, not a mathematical outcome.
    pub fn agree(&self) -> bool {
        self.zero_sum == self.fk_zero && self.fk_zero == self.theta_zero
    }

    pub fn all_zero_sum(&self) -> bool {
        self.zero_sum && self.fk_zero && self.theta_zero
    }
}

/// Run the direct sum, the determinant-quotient criterion, and the theta
/// criterion on one subspace.
pub fn check_all_criteria(e: &Subspace) -> Result<CriteriaReport, Error> {
    let k = e.dim();
    if k == 0 || k > CRITERIA_DIM_CAP {
        return Err(Error::LimitExceeded(format!(
            "dim {k} outside 1..={CRITERIA_DIM_CAP}"
        )));
    }
    let f = e.field();
    let zero_sum = is_zero_sum(e)?;
    let fk = fk_eval(&e.basis_elements(), f)?;
    let v_basis = gamma(e).basis_elements();
    let theta = theta_eval(&v_basis, f)?;
    Ok(CriteriaReport {
        zero_sum,
        fk_zero: fk.is_zero(),
        theta_zero: theta.is_zero(),
    })
}

/// Exact number of k-dimensional zero-sum subspaces, by exhaustive
/// enumeration.
pub fn zk_count(n: u32, k: u32, f: &FieldSpec) -> Result<u128, Error> {
    assert_eq!(f.n(), n);
    let total = gaussian_binomial(n, k)?;
    let work = total.checked_mul(1 << k).ok_or(Error::Overflow)?;
    if work > EXHAUSTION_BUDGET {
        return Err(Error::LimitExceeded(format!(
            "zk_count work {work} exceeds 2^36"
        )));
    }
    if k == 0 {
        return Ok(0);
    }
    if f.n() <= 20 {
        zk_count_with(n, k, f, &DlogTable::new(f)?, total)
    } else {
        zk_count_with(n, k, f, f, total)
    }
}

fn zk_count_with<O: FieldOps + Sync>(
    n: u32,
    k: u32,
    f: &FieldSpec,
    ops: &O,
    total: u128,
) -> Result<u128, Error> {
    let shards: u128 = 64.min(total);
    let counts: u128 = (0..shards)
        .into_par_iter()
        .map(|s| {
            let lo = total * s / shards;
            let hi = total * (s + 1) / shards;
            let mut c = 0u128;
            for m in SubspaceEnumerator::with_range(n, k, lo, hi).expect("range valid") {
                let e = Subspace::from_rref_basis(m, f);
                if inverse_sum_with(&e, ops).expect("dim >= 1").is_zero() {
                    c += 1;
                }
            }
            c
        })
        .sum();
    Ok(counts)
}

/// Which criterion polynomial a census sweeps.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum PolySelector {
    Fk,
    Theta,
}

impl PolySelector {
    pub fn name(&self) -> &'static str {
        match self {
            PolySelector::Fk => "fk",
            PolySelector::Theta => "theta",
        }
    }
}

/// Zero counts of one polynomial over the full grid F_{2^n}^k, split by
/// whether the Moore determinant vanishes at the tuple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusResult {
    pub n: u32,
    pub k: u32,
    pub selector: PolySelector,
    pub zeros_off_delta: u128,
    /// `None` when the on-variety value of F_k is unavailable (k > 4: the
    /// symbolic quotient is not expanded).
    pub zeros_on_delta: Option<u128>,
    pub swept: u128,
}

impl CensusResult {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.k,
            self.selector.name(),
            self.zeros_off_delta,
            self.zeros_on_delta
                .map_or_else(|| "not-computed".to_string(), |v| v.to_string()),
            self.swept
        )
    }
}

/// Rank of up to 16 n-bit rows over F_2; the census reject test.
#[inline]
fn bit_rank(rows: &[u64]) -> usize {
    let mut basis = [0u64; 16];
    let mut rank = 0;
    for &r in rows {
        let mut x = r;
        for &b in &basis[..rank] {
            let low = b & b.wrapping_neg();
            if x & low != 0 {
                x ^= b;
            }
        }
        if x != 0 {
            basis[rank] = x;
            rank += 1;
        }
    }
    rank
}

/// Sweep all 2^{nk} tuples and classify zeros of the selected polynomial
/// by delta = 0 / delta != 0. Deterministic regardless of shard count.
pub fn census(selector: PolySelector, n: u32, k: u32, f: &FieldSpec) -> Result<CensusResult, Error> {
    assert_eq!(f.n(), n);
    if n * k > 28 {
        return Err(Error::LimitExceeded(format!(
            "census sweep 2^{} exceeds 2^28 tuples",
            n * k
        )));
    }
    if k == 0 {
        return Err(Error::InvalidInput("census needs k >= 1".into()));
    }
    if n <= 20 {
        census_with(selector, n, k, f, &DlogTable::new(f)?)
    } else {
        census_with(selector, n, k, f, f)
    }
}

fn census_with<O: FieldOps + Sync>(
    selector: PolySelector,
    n: u32,
    k: u32,
    f: &FieldSpec,
    ops: &O,
) -> Result<CensusResult, Error> {
    let theta_plan = match selector {
        PolySelector::Theta => Some(ThetaPlan::new(k)?),
        PolySelector::Fk => None,
    };
    // on-variety values of F_k need the symbolic quotient
    let fk_poly: Option<MPoly> = match selector {
        PolySelector::Fk if k <= sympoly::FK_SYM_CAP => Some(sympoly::fk_sym(k)?),
        _ => None,
    };
    let delta1_perms = permutations(k as usize);
    let delta1_logs: Vec<u32> = (0..k).map(|i| if i == 0 { 0 } else { i + 1 }).collect();

    let swept: u64 = 1 << (n * k);
    let mask = f.mask();
    let shards = 256u64.min(swept);
    let (off, on) = (0..shards)
        .into_par_iter()
        .map(|s| {
            let lo = swept / shards * s;
            let hi = if s + 1 == shards { swept } else { swept / shards * (s + 1) };
            let mut off = 0u128;
            let mut on = 0u128;
            let mut pts = vec![Fe::ZERO; k as usize];
            let mut rows = vec![0u64; k as usize];
            for t in lo..hi {
                for j in 0..k as usize {
                    rows[j] = t >> (j as u32 * n) & mask;
                    pts[j] = Fe(rows[j]);
                }
                let full_rank = bit_rank(&rows) == k as usize;
                match selector {
                    PolySelector::Theta => {
                        let v = theta_plan.as_ref().unwrap().eval(&pts, ops);
                        if v.is_zero() {
                            if full_rank {
                                off += 1;
                            } else {
                                on += 1;
                            }
                        }
                    }
                    PolySelector::Fk => {
                        if full_rank {
                            let d = delta_eval_product(&pts, ops);
                            let d1 = delta1_permanent(&pts, &delta1_perms, &delta1_logs, ops);
                            let v = ops.mul(d1, ops.inv(d).expect("full rank"));
                            if v.is_zero() {
                                off += 1;
                            }
                        } else if let Some(p) = &fk_poly {
                            if p.eval_with(&pts, ops).expect("arity").is_zero() {
                                on += 1;
                            }
                        }
                    }
                }
            }
            (off, on)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let zeros_on_delta = match selector {
        PolySelector::Theta => Some(on),
        PolySelector::Fk => fk_poly.is_some().then_some(on),
    };
    Ok(CensusResult {
        n,
        k,
        selector,
        zeros_off_delta: off,
        zeros_on_delta,
        swept: swept as u128,
    })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        out.push(perm.clone());
        if !sympoly::next_permutation(&mut perm) {
            break;
        }
    }
    out
}

/// Permanent-style expansion of the skipped-row determinant (char 2: the
/// determinant equals the permanent), for the census hot loop.
fn delta1_permanent<O: FieldOps>(
    points: &[Fe],
    perms: &[Vec<usize>],
    row_logs: &[u32],
    ops: &O,
) -> Fe {
    let k = points.len();
    // powers[j][i] = points[j]^{2^{row_logs[i]}}
    let mut powers = vec![[Fe::ZERO; 8]; k];
    for (j, &p) in points.iter().enumerate() {
        for (i, &log) in row_logs.iter().enumerate() {
            powers[j][i] = ops.frob_pow(p, log);
        }
    }
    let mut acc = Fe::ZERO;
    for perm in perms {
        let mut m = Fe::ONE;
        for (j, &i) in perm.iter().enumerate() {
            m = ops.mul(m, powers[j][i]);
            if m.is_zero() {
                break;
            }
        }
        acc = ops.add(acc, m);
    }
    acc
}

/// A verified zero-sum subspace record, as persisted in the JSON-lines
/// witness store.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub n: u32,
    pub modulus: String,
    pub k: u32,
    /// RREF-canonical basis rows, hex, row i = coordinates of basis vector i.
    pub basis: Vec<String>,
    pub checks: WitnessChecks,
    pub strategy: String,
    pub seed: u64,
    pub trials: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessChecks {
    pub inverse_sum: bool,
    pub fk: bool,
    pub theta: bool,
}

impl Witness {
    pub fn field(&self) -> Result<FieldSpec, Error> {
        let modulus = u128::from_str_radix(&self.modulus, 16)
            .map_err(|_| Error::BadHex(self.modulus.clone()))?;
        FieldSpec::new(self.n, modulus)
    }

    pub fn subspace(&self) -> Result<Subspace, Error> {
        let f = self.field()?;
        let rows: Result<Vec<Fe>, Error> = self.basis.iter().map(|h| Fe::from_hex(h)).collect();
        let s = Subspace::from_span(&rows?, &f);
        if s.dim() != self.k as usize {
            return Err(Error::InvalidInput(format!(
                "stored basis has rank {} != k = {}",
                s.dim(),
                self.k
            )));
        }
        Ok(s)
    }

    /// Re-run all three criteria; a stored witness must still verify.
    pub fn verify(&self) -> Result<bool, Error> {
        let report = check_all_criteria(&self.subspace()?)?;
        Ok(report.agree() && report.all_zero_sum())
    }
}

fn witness_from_subspace(e: &Subspace, strategy: &str, seed: u64, trials: u64) -> Result<Option<Witness>, Error> {
    let report = check_all_criteria(e)?;
    assert!(report.agree(), "criteria disagreement: implementation bug");
    if !report.all_zero_sum() {
        return Ok(None);
    }
    Ok(Some(Witness {
        n: e.field().n(),
        modulus: e.field().modulus_hex(),
        k: e.dim() as u32,
        basis: e.basis_elements().iter().map(|b| b.to_hex()).collect(),
        checks: WitnessChecks {
            inverse_sum: report.zero_sum,
            fk: report.fk_zero,
            theta: report.theta_zero,
        },
        strategy: strategy.to_string(),
        seed,
        trials,
    }))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchStrategy {
    Exhaustive,
    Random,
}

/// Search for a k-dimensional zero-sum subspace. Returns a fully verified
/// witness, or `None` when the budget runs out (not an error).
pub fn find_witness(
    n: u32,
    k: u32,
    strategy: SearchStrategy,
    budget: u64,
    seed: u64,
    f: &FieldSpec,
) -> Result<Option<Witness>, Error> {
    assert_eq!(f.n(), n);
    if k == 0 || k >= n {
        return Ok(None);
    }
    let table = if n <= 20 { DlogTable::new(f).ok() } else { None };
    match strategy {
        SearchStrategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = vec![0u64; k as usize];
            for trial in 0..budget {
                for r in rows.iter_mut() {
                    *r = rng.gen::<u64>() & f.mask();
                }
                if bit_rank(&rows) != k as usize {
                    continue;
                }
                let fes: Vec<Fe> = rows.iter().map(|&r| Fe(r)).collect();
                let e = Subspace::from_span(&fes, f);
                let zero = match &table {
                    Some(t) => inverse_sum_with(&e, t)?.is_zero(),
                    None => inverse_sum(&e)?.is_zero(),
                };
                if zero {
                    if let Some(w) = witness_from_subspace(&e, "random", seed, trial + 1)? {
                        return Ok(Some(w));
                    }
                }
            }
            Ok(None)
        }
        SearchStrategy::Exhaustive => {
            let total = gaussian_binomial(n, k)?;
            let work = total.checked_mul(1 << k).ok_or(Error::Overflow)?;
            if work > EXHAUSTION_BUDGET {
                return Err(Error::LimitExceeded(format!(
                    "exhaustive search work {work} exceeds 2^36"
                )));
            }
            let mut trials = 0u64;
            for m in SubspaceEnumerator::new(n, k)? {
                trials += 1;
                let e = Subspace::from_rref_basis(m, f);
                let zero = match &table {
                    Some(t) => inverse_sum_with(&e, t)?.is_zero(),
                    None => inverse_sum(&e)?.is_zero(),
                };
                if zero {
                    if let Some(w) = witness_from_subspace(&e, "exhaustive", seed, trials)? {
                        return Ok(Some(w));
                    }
                }
            }
            Ok(None)
        }
    }
}

/// How one entry of an SF table was settled.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SfMethod {
    /// a verified zero-sum subspace exists, so k is in K_n
    Witness(Witness),
    /// every k-dimensional subspace was enumerated and none is zero-sum
    Exhausted { subspaces: u128 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SfEntry {
    pub k: u32,
    pub sum_free: bool,
    pub method: SfMethod,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SfTable {
    pub n: u32,
    pub modulus: String,
    pub entries: Vec<SfEntry>,
}

impl SfTable {
    pub fn sf_set(&self) -> Vec<u32> {
        self.entries
            .iter()
            .filter(|e| e.sum_free)
            .map(|e| e.k)
            .collect()
    }
}

/// Certify SF_n for every 1 <= k <= n-1: a random witness search first,
/// then full exhaustion when no witness turns up.
pub fn sf_table(n: u32, f: &FieldSpec, seed: u64) -> Result<SfTable, Error> {
    assert_eq!(f.n(), n);
    if n > 12 {
        return Err(Error::LimitExceeded(format!(
            "full certification capped at n <= 12, got {n}"
        )));
    }
    let mut entries = Vec::new();
    for k in 1..n {
        // zero-sum density off the determinant variety is about 2^-n, so
        // this budget leaves a comfortable margin
        let budget = 1u64 << (n + 5);
        let entry = match find_witness(n, k, SearchStrategy::Random, budget, seed ^ k as u64, f)? {
            Some(w) => SfEntry {
                k,
                sum_free: false,
                method: SfMethod::Witness(w),
            },
            None => match find_witness(n, k, SearchStrategy::Exhaustive, 0, seed, f)? {
                Some(w) => SfEntry {
                    k,
                    sum_free: false,
                    method: SfMethod::Witness(w),
                },
                None => SfEntry {
                    k,
                    sum_free: true,
                    method: SfMethod::Exhausted {
                        subspaces: gaussian_binomial(n, k)?,
                    },
                },
            },
        };
        entries.push(entry);
    }
    Ok(SfTable {
        n,
        modulus: f.modulus_hex(),
        entries,
    })
}

/// Append one witness to a JSON-lines store.
pub fn append_witness(path: &Path, w: &Witness) -> Result<(), Error> {
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    writeln!(file, "{}", serde_json::to_string(w)?)?;
    Ok(())
}

/// Load all witnesses from a JSON-lines store.
pub fn load_witnesses(path: &Path) -> Result<Vec<Witness>, Error> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitlinalg::gl2_order;
    use rand::rngs::StdRng;

    #[test]
    fn span_of_one_is_not_zero_sum() {
        let f = FieldSpec::with_default_modulus(8).unwrap();
        let e = Subspace::from_span(&[Fe::ONE], &f);
        assert_eq!(inverse_sum(&e).unwrap(), Fe::ONE);
        assert!(!is_zero_sum(&e).unwrap());
    }

    #[test]
    fn f4_lines_in_f16_are_zero_sum() {
        // E = u*F_4 inside F_16: 1/u (1 + w + w^2) with 1 + w + w^2 = 0
        let f = FieldSpec::with_default_modulus(4).unwrap();
        let mut zero_sum_dims = Vec::new();
        for m in SubspaceEnumerator::new(4, 2).unwrap() {
            let e = Subspace::from_rref_basis(m, &f);
            if is_zero_sum(&e).unwrap() {
                zero_sum_dims.push(e);
            }
        }
        assert_eq!(zero_sum_dims.len(), 5);
        // each is an F_4-line u*F_4: the ratio of two nonzero elements is
        // a nontrivial cube root of unity
        for e in &zero_sum_dims {
            let els: Vec<Fe> = e
                .elements()
                .unwrap()
                .into_iter()
                .filter(|x| !x.is_zero())
                .collect();
            let r = f.mul(els[1], f.inv(els[0]).unwrap());
            assert_ne!(r, Fe::ONE);
            assert_eq!(f.pow(r, 3), Fe::ONE);
        }
    }

    #[test]
    fn zk_counts_small() {
        let f4 = FieldSpec::with_default_modulus(4).unwrap();
        assert_eq!(zk_count(4, 2, &f4).unwrap(), 5);
        assert_eq!(zk_count(4, 1, &f4).unwrap(), 0);
        for n in [5u32, 7, 9] {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            assert_eq!(zk_count(n, 2, &f).unwrap(), 0, "2 in SF_{n} for odd n");
        }
    }

    #[test]
    fn census_4_2_both_selectors() {
        let f = FieldSpec::with_default_modulus(4).unwrap();
        let cf = census(PolySelector::Fk, 4, 2, &f).unwrap();
        let ct = census(PolySelector::Theta, 4, 2, &f).unwrap();
        assert_eq!(cf.zeros_off_delta, 30); // Z_2 * |GL(2,2)| = 5 * 6
        assert_eq!(ct.zeros_off_delta, 30);
        assert_eq!(cf.swept, 256);
        assert!(cf.zeros_on_delta.is_some());
    }

    #[test]
    fn census_matches_counting_identity() {
        for (n, k) in [(4u32, 2u32), (6, 2), (6, 3), (7, 3)] {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            let cf = census(PolySelector::Fk, n, k, &f).unwrap();
            let ct = census(PolySelector::Theta, n, k, &f).unwrap();
            let expect = zk_count(n, k, &f).unwrap() * gl2_order(k).unwrap();
            assert_eq!(cf.zeros_off_delta, expect, "(n,k)=({n},{k})");
            assert_eq!(ct.zeros_off_delta, expect, "(n,k)=({n},{k})");
            assert_eq!(cf.zeros_off_delta % gl2_order(k).unwrap(), 0);
        }
    }

    #[test]
    fn census_shard_count_does_not_change_result() {
        // the shard reduction is a plain sum, so rerunning must agree
        let f = FieldSpec::with_default_modulus(6).unwrap();
        let a = census(PolySelector::Theta, 6, 2, &f).unwrap();
        let b = census(PolySelector::Theta, 6, 2, &f).unwrap();
        assert_eq!(a.zeros_off_delta, b.zeros_off_delta);
        assert_eq!(a.zeros_on_delta, b.zeros_on_delta);
    }

    #[test]
    fn criteria_agree_on_random_subspaces() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..100 {
            let n = Rng::gen_range(&mut rng, 5..=14u32);
            let f = FieldSpec::with_default_modulus(n).unwrap();
            let k = Rng::gen_range(&mut rng, 1..=4u32.min(n - 1));
            let e = loop {
                let rows: Vec<Fe> = (0..k)
                    .map(|_| Fe(Rng::gen::<u64>(&mut rng) & f.mask()))
                    .collect();
                let s = Subspace::from_span(&rows, &f);
                if s.dim() == k as usize {
                    break s;
                }
            };
            let report = check_all_criteria(&e).unwrap();
            assert!(report.agree(), "n={n} k={k}");
        }
    }

    #[test]
    fn scaling_preserves_zero_sum() {
        let f = FieldSpec::with_default_modulus(8).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let k = Rng::gen_range(&mut rng, 1..=4usize);
            let rows: Vec<Fe> = (0..k)
                .map(|_| Fe(Rng::gen::<u64>(&mut rng) & f.mask()))
                .collect();
            let e = Subspace::from_span(&rows, &f);
            if e.dim() == 0 {
                continue;
            }
            let c = Fe((Rng::gen::<u64>(&mut rng) & f.mask()) | 1);
            let scaled = e.scaled(c);
            // inverse_sum(cE) = inverse_sum(E) / c
            let lhs = inverse_sum(&scaled).unwrap();
            let rhs = f.mul(inverse_sum(&e).unwrap(), f.inv(c).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn affine_cosets_never_sum_to_zero() {
        // sum of 1/x over an affine subspace not containing 0 is nonzero
        let mut rng = StdRng::seed_from_u64(13);
        for trial in 0..200 {
            let n = 5 + (trial % 8) as u32;
            let f = FieldSpec::with_default_modulus(n).unwrap();
            let k = Rng::gen_range(&mut rng, 1..=4usize.min(n as usize - 1));
            let rows: Vec<Fe> = (0..k)
                .map(|_| Fe(Rng::gen::<u64>(&mut rng) & f.mask()))
                .collect();
            let e = Subspace::from_span(&rows, &f);
            if e.dim() == 0 {
                continue;
            }
            let shift = loop {
                let s = Fe(Rng::gen::<u64>(&mut rng) & f.mask());
                if !e.contains(s) {
                    break s;
                }
            };
            let mut acc = Fe::ZERO;
            for x in e.elements().unwrap() {
                acc = f.add(acc, f.inv(f.add(x, shift)).unwrap());
            }
            assert!(!acc.is_zero(), "n={n} k={k}");
        }
    }

    #[test]
    fn witness_search_and_verification() {
        // gcd(2, 8) > 1, so a 2-dimensional witness exists in F_256
        let f = FieldSpec::with_default_modulus(8).unwrap();
        let w = find_witness(8, 2, SearchStrategy::Random, 1 << 14, 1, &f)
            .unwrap()
            .expect("witness exists for (8, 2)");
        assert!(w.verify().unwrap());
        // odd n: no 2-dimensional witness at all
        let f7 = FieldSpec::with_default_modulus(7).unwrap();
        let none = find_witness(7, 2, SearchStrategy::Exhaustive, 0, 1, &f7).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn witness_store_roundtrip() {
        let f = FieldSpec::with_default_modulus(4).unwrap();
        let w = find_witness(4, 2, SearchStrategy::Exhaustive, 0, 1, &f)
            .unwrap()
            .unwrap();
        let dir = std::env::temp_dir().join(format!("witness_store_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("witnesses.jsonl");
        append_witness(&path, &w).unwrap();
        append_witness(&path, &w).unwrap();
        let loaded = load_witnesses(&path).unwrap();
        assert_eq!(loaded.len(), 2);
        assert!(loaded[0].verify().unwrap());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn sf_table_small_even_and_odd() {
        let f6 = FieldSpec::with_default_modulus(6).unwrap();
        assert_eq!(sf_table(6, &f6, 1).unwrap().sf_set(), vec![1, 5]);
        let f5 = FieldSpec::with_default_modulus(5).unwrap();
        assert_eq!(sf_table(5, &f5, 1).unwrap().sf_set(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn bit_rank_small_cases() {
        assert_eq!(bit_rank(&[0]), 0);
        assert_eq!(bit_rank(&[1, 2, 3]), 2);
        assert_eq!(bit_rank(&[1, 2, 4]), 3);
        assert_eq!(bit_rank(&[5, 5]), 1);
    }
}
