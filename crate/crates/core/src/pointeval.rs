//! Point evaluation of the two Moore determinants, their quotient, and the
//! theta criterion polynomial over F_{2^n}, without symbolic expansion.
//! This is the hot path for searches and censuses.

use crate::error::Error;
use crate::gf2n::{Fe, FieldOps};
use crate::sympoly::{lambda_set, next_permutation, row_exponents_delta, row_exponents_delta1};

/// Largest k accepted by [`theta_eval`]; arrangement counts grow fast.
pub const THETA_EVAL_CAP: u32 = 11;

/// Determinant of the k x k matrix with entry (i, j) = points[j]^{2^{log_exps[i]}},
/// by Gaussian elimination over the field.
fn moore_like_det<O: FieldOps>(points: &[Fe], row_exps: &[u32], ops: &O) -> Result<Fe, Error> {
    let k = points.len();
    debug_assert_eq!(row_exps.len(), k);
    let mut m: Vec<Vec<Fe>> = row_exps
        .iter()
        .map(|&e| {
            let log = e.trailing_zeros();
            points.iter().map(|&x| ops.frob_pow(x, log)).collect()
        })
        .collect();
    let mut det = Fe::ONE;
    for col in 0..k {
        let Some(p) = (col..k).find(|&r| !m[r][col].is_zero()) else {
            return Ok(Fe::ZERO);
        };
        m.swap(col, p); // char 2: no sign to track
        let pivot = m[col][col];
        det = ops.mul(det, pivot);
        let pinv = ops.inv(pivot)?;
        for r in col + 1..k {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = ops.mul(m[r][col], pinv);
            for c in col..k {
                let sub = ops.mul(factor, m[col][c]);
                m[r][c] = ops.add(m[r][c], sub);
            }
        }
    }
    Ok(det)
}

/// Moore determinant at a point: nonzero iff the points are F_2-linearly
/// independent.
pub fn delta_eval<O: FieldOps>(points: &[Fe], ops: &O) -> Fe {
    let k = points.len() as u32;
    assert!(k >= 1 && k <= ops.spec().n());
    moore_like_det(points, &row_exponents_delta(k), ops).expect("pivot inverses are nonzero")
}

/// Product-formula route: the product of all nonzero F_2-combinations of
/// the points. Equal to [`delta_eval`]; kept as an independent oracle and
/// as the cheaper path for very small k.
pub fn delta_eval_product<O: FieldOps>(points: &[Fe], ops: &O) -> Fe {
    let k = points.len();
    assert!(k <= 20);
    let mut prod = Fe::ONE;
    let mut comb = Fe::ZERO;
    // Gray code over the 2^k - 1 nonzero combinations
    for g in 1u32..1 << k {
        comb = ops.add(comb, points[g.trailing_zeros() as usize]);
        prod = ops.mul(prod, comb);
        if prod.is_zero() {
            return Fe::ZERO;
        }
    }
    prod
}

/// The companion determinant with the exponent-2 row skipped: row
/// exponents 2^0, 2^2, 2^3, ..., 2^k.
pub fn delta1_eval<O: FieldOps>(points: &[Fe], ops: &O) -> Fe {
    let k = points.len() as u32;
    assert!(k >= 1 && k <= ops.spec().n());
    moore_like_det(points, &row_exponents_delta1(k), ops).expect("pivot inverses are nonzero")
}

/// F_k at an independent tuple: delta1 / delta in the field.
///
/// Errors with `DependentBasis` when delta vanishes; the quotient does not
/// define F_k there.
pub fn fk_eval<O: FieldOps>(points: &[Fe], ops: &O) -> Result<Fe, Error> {
    let d = delta_eval(points, ops);
    if d.is_zero() {
        return Err(Error::DependentBasis);
    }
    let d1 = delta1_eval(points, ops);
    Ok(ops.mul(d1, ops.inv(d)?))
}

/// Precomputed evaluation plan for theta: every distinct arrangement of
/// every partition's exponent multiset, with exponents kept as log2.
///
/// Build once, evaluate many times; the census sweeps reuse one plan for
/// hundreds of millions of points.
pub struct ThetaPlan {
    k: usize,
    // each arrangement: (variable index, log2 of exponent), zeros skipped
    arrangements: Vec<Vec<(usize, u32)>>,
}

impl ThetaPlan {
    pub fn new(k: u32) -> Result<ThetaPlan, Error> {
        if k == 0 || k > THETA_EVAL_CAP {
            return Err(Error::LimitExceeded(format!(
                "theta evaluation capped at k <= {THETA_EVAL_CAP}, got {k}"
            )));
        }
        let mut arrangements = Vec::new();
        for lambda in lambda_set(k) {
            let mut exps: Vec<u32> = lambda.parts().to_vec();
            exps.resize(k as usize, 0);
            exps.sort_unstable();
            loop {
                let arr: Vec<(usize, u32)> = exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(j, &e)| (j, e.trailing_zeros()))
                    .collect();
                arrangements.push(arr);
                if !next_permutation(&mut exps) {
                    break;
                }
            }
        }
        Ok(ThetaPlan {
            k: k as usize,
            arrangements,
        })
    }

    pub fn num_arrangements(&self) -> usize {
        self.arrangements.len()
    }

    pub fn eval<O: FieldOps>(&self, points: &[Fe], ops: &O) -> Fe {
        assert_eq!(points.len(), self.k);
        let mut acc = Fe::ZERO;
        'arr: for arr in &self.arrangements {
            let mut m = Fe::ONE;
            for &(j, log_e) in arr {
                if points[j].is_zero() {
                    continue 'arr;
                }
                m = ops.mul(m, ops.frob_pow(points[j], log_e));
            }
            acc = ops.add(acc, m);
        }
        acc
    }
}

/// Theta_k at a point: the sum over all 2-adic partitions of 2^{k-1} with
/// at most k parts of the monomial symmetric polynomial values.
pub fn theta_eval<O: FieldOps>(points: &[Fe], ops: &O) -> Result<Fe, Error> {
    let plan = ThetaPlan::new(points.len() as u32)?;
    Ok(plan.eval(points, ops))
}

/// Test oracle: the minor of the (k+1)-row Moore matrix over `points`
/// (row exponents 2^0..2^k) obtained by deleting row `skip`. The
/// annihilator coefficient a_skip equals this minor divided by the minor
/// that deletes the top-degree row.
#[cfg(test)]
pub(crate) fn moore_minor_oracle<O: FieldOps>(points: &[Fe], skip: usize, ops: &O) -> Fe {
    let k = points.len();
    let row_exps: Vec<u32> = (0..=k as u32).filter(|&i| i as usize != skip).map(|i| 1 << i).collect();
    moore_like_det(points, &row_exps, ops).expect("pivot inverses are nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitlinalg::Subspace;
    use crate::gf2n::{Fe, FieldSpec};
    use crate::sympoly;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_fe(rng: &mut StdRng, f: &FieldSpec) -> Fe {
        Fe(rng.gen::<u64>() & f.mask())
    }

    #[test]
    fn delta_zero_on_dependent_tuples() {
        let f = FieldSpec::with_default_modulus(8).unwrap();
        assert_eq!(delta_eval(&[Fe(7), Fe::ZERO], &f), Fe::ZERO);
        assert_eq!(delta_eval(&[Fe(7), Fe(7)], &f), Fe::ZERO);
    }

    #[test]
    fn delta_2x2_by_hand() {
        // (1, X) in F_2[X]/(X^3+X+1): det = 1*X^2 + X*1 = X^2 + X
        let f = FieldSpec::new(3, 0b1011).unwrap();
        assert_eq!(delta_eval(&[Fe(1), Fe(2)], &f), Fe(0b110));
    }

    #[test]
    fn delta_nonzero_iff_independent() {
        for n in [6u32, 11, 17] {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            let mut rng = StdRng::seed_from_u64(n as u64);
            for _ in 0..200 {
                let k = rng.gen_range(1..=4usize);
                let pts: Vec<Fe> = (0..k).map(|_| random_fe(&mut rng, &f)).collect();
                let rank = Subspace::from_span(&pts, &f).dim();
                assert_eq!(delta_eval(&pts, &f).is_zero(), rank < k);
            }
        }
    }

    #[test]
    fn delta_product_formula_agrees() {
        let f = FieldSpec::with_default_modulus(14).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let k = rng.gen_range(1..=5usize);
            let pts: Vec<Fe> = (0..k).map(|_| random_fe(&mut rng, &f)).collect();
            assert_eq!(delta_eval(&pts, &f), delta_eval_product(&pts, &f));
        }
    }

    #[test]
    fn delta1_2x2_expansion() {
        let f = FieldSpec::with_default_modulus(9).unwrap();
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..50 {
            let u = random_fe(&mut rng, &f);
            let v = random_fe(&mut rng, &f);
            let expect = f.add(
                f.mul(u, f.pow(v, 4)),
                f.mul(v, f.pow(u, 4)),
            );
            assert_eq!(delta1_eval(&[u, v], &f), expect);
        }
    }

    #[test]
    fn determinants_match_symbolic_oracle() {
        let f = FieldSpec::with_default_modulus(10).unwrap();
        let d3 = sympoly::moore_sym(3).unwrap();
        let d13 = sympoly::moore1_sym(3).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let pts: Vec<Fe> = (0..3).map(|_| random_fe(&mut rng, &f)).collect();
            assert_eq!(delta_eval(&pts, &f), d3.eval(&pts, &f).unwrap());
            assert_eq!(delta1_eval(&pts, &f), d13.eval(&pts, &f).unwrap());
        }
    }

    #[test]
    fn fk_quotient_identity() {
        for n in [8u32, 16, 24] {
            let f = FieldSpec::with_default_modulus(n).unwrap();
            let mut rng = StdRng::seed_from_u64(n as u64 + 9);
            for _ in 0..50 {
                let k = rng.gen_range(2..=6usize).min(n as usize);
                let pts: Vec<Fe> = (0..k).map(|_| random_fe(&mut rng, &f)).collect();
                let d = delta_eval(&pts, &f);
                if d.is_zero() {
                    assert!(matches!(fk_eval(&pts, &f), Err(Error::DependentBasis)));
                    continue;
                }
                let q = fk_eval(&pts, &f).unwrap();
                assert_eq!(f.mul(q, d), delta1_eval(&pts, &f));
            }
        }
    }

    #[test]
    fn fk_k2_closed_form() {
        // F_2 = X1^2 + X1*X2 + X2^2
        let f = FieldSpec::with_default_modulus(7).unwrap();
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..50 {
            let u = random_fe(&mut rng, &f);
            let v = random_fe(&mut rng, &f);
            if delta_eval(&[u, v], &f).is_zero() {
                continue;
            }
            let expect = f.add(f.add(f.square(u), f.mul(u, v)), f.square(v));
            assert_eq!(fk_eval(&[u, v], &f).unwrap(), expect);
        }
    }

    #[test]
    fn theta_matches_symbolic_oracle() {
        let f = FieldSpec::with_default_modulus(9).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for k in 1..=5u32 {
            let sym = sympoly::theta_sym(k).unwrap();
            let plan = ThetaPlan::new(k).unwrap();
            for _ in 0..40 {
                let pts: Vec<Fe> = (0..k).map(|_| random_fe(&mut rng, &f)).collect();
                assert_eq!(plan.eval(&pts, &f), sym.eval(&pts, &f).unwrap());
            }
        }
    }

    #[test]
    fn theta_unit_points() {
        let f = FieldSpec::with_default_modulus(13).unwrap();
        for k in 1..=7usize {
            let mut e1 = vec![Fe::ZERO; k];
            e1[0] = Fe::ONE;
            assert_eq!(theta_eval(&e1, &f).unwrap(), Fe::ONE);
            if k >= 2 {
                let mut e11 = vec![Fe::ZERO; k];
                e11[0] = Fe::ONE;
                e11[1] = Fe::ONE;
                assert_eq!(theta_eval(&e11, &f).unwrap(), Fe::ONE);
            }
        }
    }

    #[test]
    fn symmetry_under_permutations() {
        let f = FieldSpec::with_default_modulus(11).unwrap();
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..50 {
            let k = rng.gen_range(2..=4usize);
            let pts: Vec<Fe> = (0..k).map(|_| random_fe(&mut rng, &f)).collect();
            let mut shuffled = pts.clone();
            for _ in 0..5 {
                let i = rng.gen_range(0..k);
                let j = rng.gen_range(0..k);
                shuffled.swap(i, j);
            }
            assert_eq!(
                theta_eval(&pts, &f).unwrap(),
                theta_eval(&shuffled, &f).unwrap()
            );
            assert_eq!(delta1_eval(&pts, &f), delta1_eval(&shuffled, &f));
            match (fk_eval(&pts, &f), fk_eval(&shuffled, &f)) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                _ => panic!("fk symmetry broken"),
            }
        }
    }

    #[test]
    fn homogeneity_scaling() {
        let f = FieldSpec::with_default_modulus(12).unwrap();
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..50 {
            let k = rng.gen_range(2..=4usize);
            let pts: Vec<Fe> = (0..k).map(|_| random_fe(&mut rng, &f)).collect();
            let c = loop {
                let c = random_fe(&mut rng, &f);
                if !c.is_zero() {
                    break c;
                }
            };
            let scaled: Vec<Fe> = pts.iter().map(|&p| f.mul(p, c)).collect();
            let th = theta_eval(&pts, &f).unwrap();
            let th_scaled = theta_eval(&scaled, &f).unwrap();
            assert_eq!(th_scaled, f.mul(f.pow(c, 1 << (k - 1)), th));
            if let Ok(fk) = fk_eval(&pts, &f) {
                let fk_scaled = fk_eval(&scaled, &f).unwrap();
                assert_eq!(fk_scaled, f.mul(f.pow(c, (1 << k) - 2), fk));
            }
        }
    }

    #[test]
    fn fk_zero_invariant_under_change_of_basis() {
        let f = FieldSpec::with_default_modulus(16).unwrap();
        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..50 {
            let k = rng.gen_range(2..=4usize);
            let pts: Vec<Fe> = (0..k).map(|_| random_fe(&mut rng, &f)).collect();
            if delta_eval(&pts, &f).is_zero() {
                continue;
            }
            let mut alt = pts.clone();
            for _ in 0..10 {
                let i = rng.gen_range(0..k);
                let j = rng.gen_range(0..k);
                if i != j {
                    alt[i] = f.add(alt[i], alt[j]);
                }
            }
            assert_eq!(
                fk_eval(&pts, &f).unwrap().is_zero(),
                fk_eval(&alt, &f).unwrap().is_zero()
            );
        }
    }
}
