//! Subspace calculus over F_{2^n}: the annihilator 2-polynomial of a
//! subspace, its image, the trace dual, the composition linking the two
//! zero-sum criteria, and the companion-matrix kernel criterion.

use serde::{Deserialize, Serialize};

use crate::bitlinalg::{nullspace, Subspace};
use crate::error::Error;
use crate::gf2n::{Fe, FieldSpec};

/// A 2-polynomial L(x) = sum a_i x^{2^i} over F_{2^n}; a_k != 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinPoly {
    field: FieldSpec,
    coeffs: Vec<Fe>,
}

impl LinPoly {
    pub fn new(field: &FieldSpec, coeffs: Vec<Fe>) -> Result<LinPoly, Error> {
        if coeffs.is_empty() || coeffs.last().unwrap().is_zero() {
            return Err(Error::InvalidInput("leading coefficient must be nonzero".into()));
        }
        if coeffs.len() - 1 > field.n() as usize {
            return Err(Error::InvalidInput("2-degree exceeds field degree".into()));
        }
        Ok(LinPoly {
            field: *field,
            coeffs,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// k in L(x) = sum_{i<=k} a_i x^{2^i}.
    pub fn degree2(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        *self.coeffs.last().unwrap() == Fe::ONE
    }

    /// Divide through by the leading coefficient.
    pub fn monic(&self) -> LinPoly {
        let lead = *self.coeffs.last().unwrap();
        if lead == Fe::ONE {
            return self.clone();
        }
        let inv = self.field.inv(lead).expect("leading coefficient nonzero");
        let coeffs = self.coeffs.iter().map(|&c| self.field.mul(c, inv)).collect();
        LinPoly {
            field: self.field,
            coeffs,
        }
    }

    /// Evaluate L at x.
    pub fn apply(&self, x: Fe) -> Fe {
        let f = &self.field;
        let mut acc = Fe::ZERO;
        let mut xp = x; // x^{2^i}
        for &a in &self.coeffs {
            acc = f.add(acc, f.mul(a, xp));
            xp = f.square(xp);
        }
        acc
    }

    /// Coefficient hex words, index = log2 of the exponent.
    pub fn to_hex(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_hex()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct LinPolyRepr {
    n: u32,
    modulus: String,
    coeffs: Vec<String>,
}

impl Serialize for LinPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LinPolyRepr {
            n: self.field.n(),
            modulus: self.field.modulus_hex(),
            coeffs: self.to_hex(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<LinPoly, D::Error> {
        use serde::de::Error as _;
        let r = LinPolyRepr::deserialize(d)?;
        let modulus = u128::from_str_radix(&r.modulus, 16).map_err(D::Error::custom)?;
        let field = FieldSpec::new(r.n, modulus).map_err(D::Error::custom)?;
        let coeffs: Result<Vec<Fe>, _> = r.coeffs.iter().map(|h| Fe::from_hex(h)).collect();
        LinPoly::new(&field, coeffs.map_err(D::Error::custom)?).map_err(D::Error::custom)
    }
}

/// The monic 2-polynomial of degree 2^k whose kernel is exactly E:
/// the product of (X - u) over u in E.
///
/// Built iteratively: extending the span by u maps L to L^2 + L(u) L,
/// which costs O(k) coefficient ops per step instead of the 2^k-term
/// product.
pub fn annihilator(e: &Subspace) -> LinPoly {
    let f = *e.field();
    // E = {0}: the empty product convention gives L(x) = x
    let mut coeffs = vec![Fe::ONE];
    for b in e.basis_elements() {
        // t = L(u) for the current L
        let cur = LinPoly {
            field: f,
            coeffs: coeffs.clone(),
        };
        let t = cur.apply(b);
        debug_assert!(!t.is_zero(), "basis rows are independent");
        let mut next = vec![Fe::ZERO; coeffs.len() + 1];
        for (i, &a) in coeffs.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], f.square(a)); // from L^2
            next[i] = f.add(next[i], f.mul(t, a)); // from L(u) * L
        }
        coeffs = next;
    }
    LinPoly { field: f, coeffs }
}

/// The image L(F_{2^n}) as a canonical subspace: apply L to the n
/// polynomial-basis elements and span.
pub fn image(l: &LinPoly) -> Subspace {
    let f = l.field();
    let images: Vec<Fe> = (0..f.n()).map(|j| l.apply(Fe(1u64 << j))).collect();
    Subspace::from_span(&images, f)
}

/// Kernel of L as a subspace, by solving the F_2 linear system L(x) = 0.
pub fn kernel(l: &LinPoly) -> Subspace {
    let f = l.field();
    let n = f.n() as usize;
    // column j of the F_2 matrix of L is L(X^j); equation rows are the
    // output coordinates
    let cols: Vec<u64> = (0..n).map(|j| l.apply(Fe(1u64 << j)).0).collect();
    let mut equations = vec![0u64; n];
    for (j, c) in cols.iter().enumerate() {
        for (i, eq) in equations.iter_mut().enumerate() {
            *eq |= (c >> i & 1) << j;
        }
    }
    let basis: Vec<Fe> = nullspace(&equations, n).into_iter().map(Fe).collect();
    Subspace::from_span(&basis, f)
}

/// Trace dual: { x : Tr(x y) = 0 for all y in E }.
pub fn trace_dual(e: &Subspace) -> Subspace {
    let f = e.field();
    let n = f.n() as usize;
    let equations: Vec<u64> = e
        .basis_elements()
        .iter()
        .map(|&b| {
            let mut row = 0u64;
            for j in 0..n {
                let prod = f.mul(Fe(1u64 << j), b);
                row |= (f.trace(prod) as u64) << j;
            }
            row
        })
        .collect();
    let basis: Vec<Fe> = nullspace(&equations, n).into_iter().map(Fe).collect();
    Subspace::from_span(&basis, f)
}

/// The bijection E -> (E')^perp on k-dimensional subspaces; this carries a
/// basis for the first zero-sum criterion to one for the second.
pub fn gamma(e: &Subspace) -> Subspace {
    trace_dual(&image(&annihilator(e)))
}

/// Inverse of [`gamma`]: E -> (E^perp)'.
pub fn gamma_inv(e: &Subspace) -> Subspace {
    image(&annihilator(&trace_dual(e)))
}

/// Companion-matrix criterion: the product of the n Frobenius twists of
/// the k x k companion matrix of L equals the identity iff dim ker L = k.
pub fn matrix_criterion(l: &LinPoly) -> bool {
    let f = l.field();
    let k = l.degree2();
    if k == 0 {
        return true; // ker = {0}, dimension 0
    }
    let lead_inv = f.inv(*l.coeffs().last().unwrap()).expect("a_k nonzero");
    // companion matrix: subdiagonal 1s, last column a_i / a_k (char 2)
    let mut c = vec![vec![Fe::ZERO; k]; k];
    for i in 0..k {
        if i + 1 < k {
            c[i + 1][i] = Fe::ONE;
        }
        c[i][k - 1] = f.mul(l.coeffs()[i], lead_inv);
    }
    let mut prod = identity_matrix(k);
    let mut twist = c;
    for step in 0..f.n() {
        if step > 0 {
            for row in twist.iter_mut() {
                for v in row.iter_mut() {
                    *v = f.square(*v);
                }
            }
        }
        prod = mat_mul(&prod, &twist, f);
    }
    prod == identity_matrix(k)
}

fn identity_matrix(k: usize) -> Vec<Vec<Fe>> {
    let mut m = vec![vec![Fe::ZERO; k]; k];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Fe::ONE;
    }
    m
}

fn mat_mul(a: &[Vec<Fe>], b: &[Vec<Fe>], f: &FieldSpec) -> Vec<Vec<Fe>> {
    let k = a.len();
    let mut out = vec![vec![Fe::ZERO; k]; k];
    for i in 0..k {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..k {
                let t = f.mul(a[i][l], b[l][j]);
                out[i][j] = f.add(out[i][j], t);
            }
        }
    }
    out
}

/// The coordinate form of [`gamma`] on annihilators: coefficient list
/// (a_k^{2^0}, a_{k-1}^{2^1}, ..., a_0^{2^k}), normalized monic. Its
/// kernel is gamma of the kernel of L.
pub fn gamma_coords(l: &LinPoly) -> Result<LinPoly, Error> {
    if !matrix_criterion(l) {
        return Err(Error::DependentBasis);
    }
    let f = l.field();
    let k = l.degree2();
    let coeffs: Vec<Fe> = (0..=k)
        .map(|i| f.frob_pow(l.coeffs()[k - i], i as u32))
        .collect();
    Ok(LinPoly::new(f, coeffs)?.monic())
}
