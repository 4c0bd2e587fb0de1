//! Linear algebra over F_2: bit-matrices, canonical subspaces, subspace
//! enumeration by RREF pivot profiles, and Gaussian-binomial counting.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gf2n::{Fe, FieldSpec};

/// A rows x cols matrix over F_2, one 64-bit word per row, bit j = column j.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> BitMatrix {
        assert!(cols <= 64);
        BitMatrix {
            rows,
            cols,
            data: vec![0; rows],
        }
    }

    pub fn identity(n: usize) -> BitMatrix {
        let mut m = BitMatrix::zero(n, n);
        for i in 0..n {
            m.data[i] = 1 << i;
        }
        m
    }

    pub fn from_rows(rows: Vec<u64>, cols: usize) -> BitMatrix {
        assert!(cols <= 64);
        let mask = if cols == 64 { u64::MAX } else { (1 << cols) - 1 };
        assert!(rows.iter().all(|&r| r & !mask == 0));
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn row(&self, i: usize) -> u64 {
        self.data[i]
    }

    pub fn rows_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    /// Reduced row echelon form (in place on a copy) and the rank.
    pub fn rref(&self) -> (BitMatrix, usize) {
        let mut m = self.clone();
        let rank = rref_in_place(&mut m.data, m.cols);
        (m, rank)
    }
}

/// RREF with pivot columns ascending; returns the rank. Zero rows sink to
/// the bottom.
pub(crate) fn rref_in_place(rows: &mut [u64], cols: usize) -> usize {
    let mut rank = 0;
    for j in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> j & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && *row >> j & 1 == 1 {
                *row ^= pivot_row;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A k-dimensional F_2-subspace of F_{2^n}, held as its unique RREF basis.
///
/// Rows are coordinate vectors w.r.t. the polynomial basis X^0..X^{n-1},
/// which makes subspace equality a word-wise comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    field: FieldSpec,
    basis: BitMatrix,
}

impl Subspace {
    /// Span of the given elements, canonicalized.
    pub fn from_span(vectors: &[Fe], field: &FieldSpec) -> Subspace {
        let mut rows: Vec<u64> = vectors.iter().map(|v| v.0).collect();
        let rank = rref_in_place(&mut rows, field.n() as usize);
        rows.truncate(rank);
        Subspace {
            field: *field,
            basis: BitMatrix::from_rows(rows, field.n() as usize),
        }
    }

    pub(crate) fn from_rref_basis(basis: BitMatrix, field: &FieldSpec) -> Subspace {
        debug_assert_eq!(basis.cols, field.n() as usize);
        Subspace {
            field: *field,
            basis,
        }
    }

    pub fn zero(field: &FieldSpec) -> Subspace {
        Subspace::from_span(&[], field)
    }

    pub fn full(field: &FieldSpec) -> Subspace {
        let rows = (0..field.n() as usize).map(|i| 1u64 << i).collect();
        Subspace {
            field: *field,
            basis: BitMatrix::from_rows(rows, field.n() as usize),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn basis_elements(&self) -> Vec<Fe> {
        self.basis.rows_slice().iter().map(|&r| Fe(r)).collect()
    }

    pub fn contains(&self, a: Fe) -> bool {
        // reduce a against the RREF rows
        let mut x = a.0;
        for &row in self.basis.rows_slice() {
            let pivot = row.trailing_zeros();
            if x >> pivot & 1 == 1 {
                x ^= row;
            }
        }
        x == 0
    }

    /// All 2^k elements, Gray-code order: consecutive elements differ by one
    /// basis vector, so callers pay one XOR per step.
    pub fn elements(&self) -> Result<Vec<Fe>, Error> {
        let k = self.dim();
        if k > 30 {
            return Err(Error::LimitExceeded(format!("2^{k} elements")));
        }
        let mut out = Vec::with_capacity(1 << k);
        let mut cur = Fe::ZERO;
        out.push(cur);
        for i in 1u64..1 << k {
            cur = Fe(cur.0 ^ self.basis.row(i.trailing_zeros() as usize));
            out.push(cur);
        }
        Ok(out)
    }

    /// Scale every element by a nonzero constant; the result is a subspace.
    pub fn scaled(&self, c: Fe) -> Subspace {
        let rows: Vec<Fe> = self
            .basis_elements()
            .iter()
            .map(|&b| self.field.mul(b, c))
            .collect();
        Subspace::from_span(&rows, &self.field)
    }
}

/// Basis of the solution space of the homogeneous system given by
/// `equations` (bit j of row i = coefficient of x_j), over F_2.
pub fn nullspace(equations: &[u64], ncols: usize) -> Vec<u64> {
    let mut rows = equations.to_vec();
    let rank = rref_in_place(&mut rows, ncols);
    rows.truncate(rank);
    let pivots: Vec<u32> = rows.iter().map(|r| r.trailing_zeros()).collect();
    let mut basis = Vec::with_capacity(ncols - rank);
    for j in 0..ncols as u32 {
        if pivots.contains(&j) {
            continue;
        }
        let mut v = 1u64 << j;
        for (i, &p) in pivots.iter().enumerate() {
            if rows[i] >> j & 1 == 1 {
                v |= 1 << p;
            }
        }
        basis.push(v);
    }
    basis
}

/// [n k]_2: the number of k-dimensional subspaces of F_2^n, exact in u128.
pub fn gaussian_binomial(n: u32, k: u32) -> Result<u128, Error> {
    if k > n {
        return Ok(0);
    }
    if n >= 128 {
        return Err(Error::Overflow);
    }
    let mut acc: u128 = 1;
    // partial products are Gaussian binomials themselves, so each division
    // below is exact
    for i in 1..=k {
        let num = (1u128 << (n - k + i)) - 1;
        let den = (1u128 << i) - 1;
        acc = acc.checked_mul(num).ok_or(Error::Overflow)?;
        debug_assert_eq!(acc % den, 0);
        acc /= den;
    }
    Ok(acc)
}

/// |GL(k, F_2)| = prod_{i<k} (2^k - 2^i).
pub fn gl2_order(k: u32) -> Result<u128, Error> {
    let mut acc: u128 = 1;
    for i in 0..k {
        let factor = (1u128 << k) - (1u128 << i);
        acc = acc.checked_mul(factor).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

/// Streams every k-dimensional subspace of F_2^n exactly once.
///
/// Order: pivot-column sets in lexicographic order, free entries as a
/// row-major binary counter. The order is deterministic, so sweeps can be
/// sharded by index range and resumed.
pub struct SubspaceEnumerator {
    n: usize,
    k: usize,
    pivots: Vec<usize>,
    counter: u128,
    counter_end: u128, // 2^(free entries) for the current pivot set
    index: u128,
    end: u128,
    exhausted: bool,
}

impl SubspaceEnumerator {
    pub fn new(n: u32, k: u32) -> Result<SubspaceEnumerator, Error> {
        let total = gaussian_binomial(n, k)?;
        Self::with_range(n, k, 0, total)
    }

    /// Enumerate only the global index range [lo, hi).
    pub fn with_range(n: u32, k: u32, lo: u128, hi: u128) -> Result<SubspaceEnumerator, Error> {
        if n > 40 {
            return Err(Error::LimitExceeded(format!("n = {n} > 40")));
        }
        let total = gaussian_binomial(n, k)?;
        let hi = hi.min(total);
        let mut e = SubspaceEnumerator {
            n: n as usize,
            k: k as usize,
            pivots: (0..k as usize).collect(),
            counter: 0,
            counter_end: 0,
            index: 0,
            end: hi,
            exhausted: k > n || lo >= hi,
        };
        if !e.exhausted {
            e.counter_end = 1u128 << e.free_count();
            // seek to lo, skipping whole pivot sets
            while e.index + e.counter_end <= lo {
                e.index += e.counter_end;
                if !e.advance_pivots() {
                    e.exhausted = true;
                    return Ok(e);
                }
                e.counter_end = 1u128 << e.free_count();
            }
            e.counter = lo - e.index;
            e.index = lo;
        }
        Ok(e)
    }

    pub fn total(n: u32, k: u32) -> Result<u128, Error> {
        gaussian_binomial(n, k)
    }

    fn free_count(&self) -> u32 {
        let mut f = 0;
        for (i, &p) in self.pivots.iter().enumerate() {
            // non-pivot columns to the right of pivot i
            let later_pivots = self.k - i - 1;
            f += (self.n - p - 1 - later_pivots) as u32;
        }
        f
    }

    fn advance_pivots(&mut self) -> bool {
        let k = self.k;
        if k == 0 {
            return false;
        }
        for i in (0..k).rev() {
            if self.pivots[i] < self.n - k + i {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[i] + (j - i);
                }
                return true;
            }
        }
        false
    }

    fn build(&self) -> BitMatrix {
        let mut rows = vec![0u64; self.k];
        let mut c = self.counter;
        for i in 0..self.k {
            rows[i] = 1 << self.pivots[i];
        }
        // row-major, ascending column, lowest counter bit first
        for i in 0..self.k {
            for j in self.pivots[i] + 1..self.n {
                if self.pivots.contains(&j) {
                    continue;
                }
                if c & 1 == 1 {
                    rows[i] |= 1 << j;
                }
                c >>= 1;
            }
        }
        BitMatrix::from_rows(rows, self.n)
    }
}

impl Iterator for SubspaceEnumerator {
    type Item = BitMatrix;

    fn next(&mut self) -> Option<BitMatrix> {
        if self.exhausted || self.index >= self.end {
            return None;
        }
        let m = self.build();
        self.index += 1;
        self.counter += 1;
        if self.counter == self.counter_end {
            self.counter = 0;
            if self.advance_pivots() {
                self.counter_end = 1u128 << self.free_count();
            } else {
                self.exhausted = true;
            }
        }
        Some(m)
    }
}

// -- serialization: hex row words plus (rows, cols) --

#[derive(Serialize, Deserialize)]
struct BitMatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<String>,
}

impl Serialize for BitMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BitMatrixRepr {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| format!("{r:x}")).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<BitMatrix, D::Error> {
        let repr = BitMatrixRepr::deserialize(d)?;
        let data: Result<Vec<u64>, _> = repr
            .data
            .iter()
            .map(|h| u64::from_str_radix(h, 16))
            .collect();
        let data = data.map_err(serde::de::Error::custom)?;
        if data.len() != repr.rows {
            return Err(serde::de::Error::custom("row count mismatch"));
        }
        Ok(BitMatrix::from_rows(data, repr.cols))
    }
}
