//! Sparse multivariate polynomials over F_2 and the symbolic construction
//! of the Moore determinants, their quotient, and the theta criterion
//! polynomial built from 2-adic partitions.
//!
//! All coefficients are implicitly 1; a polynomial is a set of exponent
//! vectors and addition is the symmetric difference.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::gf2n::{Fe, FieldSpec};

/// Largest k for which theta is expanded symbolically.
pub const THETA_SYM_CAP: u32 = 7;
/// Largest k for which the Moore determinants are expanded symbolically.
pub const MOORE_SYM_CAP: u32 = 6;
/// Largest k for which the exact quotient of the two determinants is taken.
pub const FK_SYM_CAP: u32 = 4;

/// A sparse multivariate polynomial over F_2 in k variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    k: usize,
    terms: BTreeSet<Vec<u32>>,
}

impl MPoly {
    pub fn zero(k: usize) -> MPoly {
        MPoly {
            k,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(k: usize) -> MPoly {
        MPoly::from_terms(k, vec![vec![0; k]])
    }

    pub fn from_terms(k: usize, terms: Vec<Vec<u32>>) -> MPoly {
        let mut p = MPoly::zero(k);
        for t in terms {
            assert_eq!(t.len(), k);
            p.toggle(t);
        }
        p
    }

    fn toggle(&mut self, t: Vec<u32>) {
        if !self.terms.insert(t.clone()) {
            self.terms.remove(&t);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.k
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.terms.iter()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|t| t.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.k, other.k);
        let mut out = self.clone();
        for t in &other.terms {
            out.toggle(t.clone());
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.k, other.k);
        let mut out = MPoly::zero(self.k);
        for a in &self.terms {
            for b in &other.terms {
                let t: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.toggle(t);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.k);
        let mut base = self.clone();
        let mut e = e;
        while e != 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Apply a permutation of the variables: new exponent of variable
    /// perm[i] is the old exponent of variable i.
    pub fn permute_vars(&self, perm: &[usize]) -> MPoly {
        assert_eq!(perm.len(), self.k);
        let mut out = MPoly::zero(self.k);
        for t in &self.terms {
            let mut nt = vec![0u32; self.k];
            for (i, &e) in t.iter().enumerate() {
                nt[perm[i]] = e;
            }
            out.toggle(nt);
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        // transpositions of adjacent variables generate the symmetric group
        for i in 0..self.k.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..self.k).collect();
            perm.swap(i, i + 1);
            if self.permute_vars(&perm) != *self {
                return false;
            }
        }
        true
    }

    /// Plain substitution over a field.
    pub fn eval(&self, point: &[Fe], f: &FieldSpec) -> Result<Fe, Error> {
        self.eval_with(point, f)
    }

    /// Substitution over any arithmetic backend.
    pub fn eval_with<O: crate::gf2n::FieldOps>(&self, point: &[Fe], ops: &O) -> Result<Fe, Error> {
        if point.len() != self.k {
            return Err(Error::ArityMismatch {
                expected: self.k,
                got: point.len(),
            });
        }
        let mut acc = Fe::ZERO;
        for t in &self.terms {
            let mut m = Fe::ONE;
            for (x, &e) in point.iter().zip(t) {
                if e != 0 {
                    m = ops.mul(m, crate::gf2n::pow_with(ops, *x, e as u128));
                }
            }
            acc = ops.add(acc, m);
        }
        Ok(acc)
    }

    /// Text dump: one monomial per line, space-separated exponents, in the
    /// set's canonical order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            let line: Vec<String> = t.iter().map(|e| e.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if t.iter().all(|&e| e == 0) {
                write!(f, "1")?;
                continue;
            }
            let mut vars = Vec::new();
            for (i, &e) in t.iter().enumerate() {
                match e {
                    0 => {}
                    1 => vars.push(format!("X{}", i + 1)),
                    _ => vars.push(format!("X{}^{}", i + 1, e)),
                }
            }
            write!(f, "{}", vars.join("*"))?;
        }
        Ok(())
    }
}

/// An integer partition whose parts are all powers of 2, nonincreasing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition2Adic {
    parts: Vec<u32>,
}

impl Partition2Adic {
    pub fn new(parts: Vec<u32>) -> Partition2Adic {
        assert!(parts.iter().all(|p| p.is_power_of_two()));
        assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition2Adic { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn sum(&self) -> u32 {
        self.parts.iter().sum()
    }
}

impl fmt::Display for Partition2Adic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All 2-adic partitions of 2^{k-1} with at most k parts, in decreasing
/// lexicographic order.
pub fn lambda_set(k: u32) -> Vec<Partition2Adic> {
    assert!(k >= 1);
    let target = 1u32 << (k - 1);
    let mut out = Vec::new();
    let mut acc = Vec::new();
    gen_2adic(target, target, k as usize, &mut acc, &mut out);
    out
}

fn gen_2adic(
    remaining: u32,
    max_part: u32,
    max_count: usize,
    acc: &mut Vec<u32>,
    out: &mut Vec<Partition2Adic>,
) {
    if remaining == 0 {
        out.push(Partition2Adic::new(acc.clone()));
        return;
    }
    if max_count == 0 {
        return;
    }
    // largest admissible power of 2 first gives decreasing lex order
    let mut p = 1u32 << (31 - remaining.leading_zeros());
    p = p.min(max_part);
    while p >= 1 {
        acc.push(p);
        gen_2adic(remaining - p, p, max_count - 1, acc, out);
        acc.pop();
        p >>= 1;
    }
}

/// The monomial symmetric polynomial m_lambda in k variables: the sum of
/// all distinct monomials whose exponent multiset is lambda.
pub fn monomial_sym(lambda: &Partition2Adic, k: u32) -> MPoly {
    let k = k as usize;
    assert!(lambda.parts.len() <= k);
    let mut exps: Vec<u32> = lambda.parts.clone();
    exps.resize(k, 0);
    exps.sort_unstable(); // ascending start for next_permutation
    let mut out = MPoly::zero(k);
    loop {
        let inserted = out.terms.insert(exps.clone());
        debug_assert!(inserted);
        if !next_permutation(&mut exps) {
            break;
        }
    }
    out
}

/// Lexicographic next permutation of a multiset; false once exhausted.
pub(crate) fn next_permutation<T: Ord + Copy>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Theta_k = sum over lambda in Lambda_k of m_lambda, over F_2.
pub fn theta_sym(k: u32) -> Result<MPoly, Error> {
    if k == 0 || k > THETA_SYM_CAP {
        return Err(Error::LimitExceeded(format!(
            "symbolic theta capped at k <= {THETA_SYM_CAP}, got {k}"
        )));
    }
    let mut out = MPoly::zero(k as usize);
    for lambda in lambda_set(k) {
        for t in monomial_sym(&lambda, k).terms {
            // distinct partitions give disjoint monomial sets, so no
            // cancellation can occur here
            let inserted = out.terms.insert(t);
            assert!(inserted);
        }
    }
    Ok(out)
}

/// Symbolic Moore determinant: row exponents 2^0, 2^1, ..., 2^{k-1}.
pub fn moore_sym(k: u32) -> Result<MPoly, Error> {
    moore_like(k, &row_exponents_delta(k))
}

/// Moore-like determinant with the exponent-2 row skipped:
/// row exponents 2^0, 2^2, 2^3, ..., 2^k.
pub fn moore1_sym(k: u32) -> Result<MPoly, Error> {
    moore_like(k, &row_exponents_delta1(k))
}

pub(crate) fn row_exponents_delta(k: u32) -> Vec<u32> {
    (0..k).map(|i| 1u32 << i).collect()
}

pub(crate) fn row_exponents_delta1(k: u32) -> Vec<u32> {
    (0..k)
        .map(|i| if i == 0 { 1 } else { 1u32 << (i + 1) })
        .collect()
}

fn moore_like(k: u32, row_exps: &[u32]) -> Result<MPoly, Error> {
    if k == 0 || k > MOORE_SYM_CAP {
        return Err(Error::LimitExceeded(format!(
            "symbolic determinant capped at k <= {MOORE_SYM_CAP}, got {k}"
        )));
    }
    // char 2: the determinant is the plain permanent, one monomial per
    // permutation, and all k! monomials are distinct
    let k = k as usize;
    let mut out = MPoly::zero(k);
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let t: Vec<u32> = (0..k).map(|j| row_exps[perm[j]]).collect();
        out.toggle(t);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

/// Exact multivariate division f / g with graded-lex leading-term
/// elimination. Errors if a nonzero remainder would arise.
pub fn exact_div(f: &MPoly, g: &MPoly) -> Result<MPoly, Error> {
    assert_eq!(f.k, g.k);
    assert!(!g.is_zero());
    let lt_g = leading_term(g).unwrap().clone();
    let mut r = f.clone();
    let mut q = MPoly::zero(f.k);
    while let Some(lt_r) = leading_term(&r) {
        let Some(t) = monomial_quotient(lt_r, &lt_g) else {
            return Err(Error::NotDivisible);
        };
        q.toggle(t.clone());
        let t_poly = MPoly::from_terms(f.k, vec![t]);
        r = r.add(&t_poly.mul(g));
    }
    Ok(q)
}

/// Largest term under graded lexicographic order.
fn leading_term(p: &MPoly) -> Option<&Vec<u32>> {
    p.terms.iter().max_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| a.cmp(b))
    })
}

fn monomial_quotient(num: &[u32], den: &[u32]) -> Option<Vec<u32>> {
    num.iter()
        .zip(den)
        .map(|(a, b)| a.checked_sub(*b))
        .collect()
}

/// F_k as a polynomial: the exact quotient of the two determinants.
pub fn fk_sym(k: u32) -> Result<MPoly, Error> {
    if k == 0 || k > FK_SYM_CAP {
        return Err(Error::LimitExceeded(format!(
            "symbolic quotient capped at k <= {FK_SYM_CAP}, got {k}"
        )));
    }
    exact_div(&moore1_sym(k)?, &moore_sym(k)?)
}

/// Does the linear form sum_{j in support(a)} X_j divide f?
///
/// Substitutes the lowest-index variable of the form by the sum of the
/// others (char 2) and tests whether the result collapses to zero.
pub fn linear_form_divides(f: &MPoly, a: u32) -> Result<bool, Error> {
    if a == 0 {
        return Err(Error::InvalidInput("zero linear form".into()));
    }
    let k = f.k;
    if a >> k != 0 {
        return Err(Error::ArityMismatch {
            expected: k,
            got: 32 - a.leading_zeros() as usize,
        });
    }
    let pivot = a.trailing_zeros() as usize;
    // replacement = sum of the other variables in the support
    let mut repl = MPoly::zero(k);
    for j in 0..k {
        if j != pivot && a >> j & 1 == 1 {
            let mut t = vec![0u32; k];
            t[j] = 1;
            repl.toggle(t);
        }
    }
    let mut acc = MPoly::zero(k);
    for t in &f.terms {
        let e = t[pivot];
        let mut rest = t.clone();
        rest[pivot] = 0;
        let rest_poly = MPoly::from_terms(k, vec![rest]);
        let sub = if e == 0 {
            rest_poly
        } else if repl.is_zero() {
            continue; // X_pivot := 0 kills the term
        } else {
            rest_poly.mul(&repl.pow(e))
        };
        acc = acc.add(&sub);
    }
    Ok(acc.is_zero())
}
