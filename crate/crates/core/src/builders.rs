//! Programmatic builders for the bundled algebras: the Taft algebras (the
//! Sweedler algebra is N = 2), cyclic group algebras, and the dual numbers.
//! Structure tables are expanded from the defining relations rather than
//! typed by hand.

use crate::algebra::{tensor_algebra, Algebra, AlgebraRef, SparseVec};
use crate::field::{primitive_root_of_unity, FieldDescriptor, FieldElement, FieldError};
use crate::hopf::{CoproductTable, HopfAlgebra, HopfRef};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuilderError {
    #[error("bad characteristic: {0}")]
    BadCharacteristic(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The Sweedler algebra H_4: Taft with N = 2 on the basis {1, g, x, gx}.
pub fn sweedler(field: FieldDescriptor) -> Result<HopfRef, BuilderError> {
    if field.characteristic() == 2 {
        return Err(BuilderError::BadCharacteristic(
            "the Sweedler algebra requires characteristic != 2".into(),
        ));
    }
    taft(2, field)
}

/// The Taft algebra of order N^2: g^N = 1, x^N = 0, x g = omega g x, with
/// Delta(g) = g (x) g, Delta(x) = 1 (x) x + x (x) g, S(g) = g^{-1},
/// S(x) = -x g^{-1}. Basis g^i x^j ordered with i varying fastest.
pub fn taft(n: u32, field: FieldDescriptor) -> Result<HopfRef, BuilderError> {
    assert!(n >= 2, "Taft algebras need N >= 2");
    let p = field.characteristic();
    if p != 0 && n as u64 % p == 0 {
        return Err(BuilderError::BadCharacteristic(format!(
            "characteristic {p} divides N = {n}"
        )));
    }
    let omega = primitive_root_of_unity(field, n)?;
    let nn = n as usize;
    let dim = nn * nn;
    let idx = |i: usize, j: usize| j * nn + i; // g^i x^j, i fastest
    let mut labels = Vec::with_capacity(dim);
    for j in 0..nn {
        for i in 0..nn {
            let g_part = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            let x_part = match j {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{j}"),
            };
            let label = match (g_part.is_empty(), x_part.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => x_part,
                (false, true) => g_part,
                (false, false) => format!("{g_part}{x_part}"),
            };
            labels.push(label);
        }
    }
    // (g^a x^b)(g^c x^d) = omega^(bc) g^(a+c) x^(b+d), zero once the x-power
    // reaches N.
    let mut mult = vec![vec![SparseVec::new(); dim]; dim];
    for a in 0..nn {
        for b in 0..nn {
            for c in 0..nn {
                for d in 0..nn {
                    if b + d >= nn {
                        continue;
                    }
                    let coef = omega.pow((b * c) as u64);
                    mult[idx(a, b)][idx(c, d)] = vec![(idx((a + c) % nn, b + d), coef)];
                }
            }
        }
    }
    let mut unit = vec![field.zero(); dim];
    unit[idx(0, 0)] = field.one();
    let algebra = Algebra::new(field, labels, unit, mult).expect("table is square");

    // Coproduct via powers inside A (x) A.
    let square = tensor_algebra(&algebra, &algebra).expect("same field");
    let flat = |u: usize, v: usize| u * dim + v;
    let mut delta_g = vec![field.zero(); dim * dim];
    delta_g[flat(idx(1, 0), idx(1, 0))] = field.one();
    let mut delta_x = vec![field.zero(); dim * dim];
    delta_x[flat(idx(0, 0), idx(0, 1))] = field.one();
    delta_x[flat(idx(0, 1), idx(1, 0))] = field.one();
    let mut coproduct: CoproductTable = vec![Vec::new(); dim];
    for a in 0..nn {
        for b in 0..nn {
            let mut acc = {
                let mut u = vec![field.zero(); dim * dim];
                u[flat(idx(0, 0), idx(0, 0))] = field.one();
                u
            };
            for _ in 0..a {
                acc = square.mul_elements(&acc, &delta_g);
            }
            for _ in 0..b {
                acc = square.mul_elements(&acc, &delta_x);
            }
            let mut terms = Vec::new();
            for (t, c) in acc.into_iter().enumerate() {
                if !c.is_zero() {
                    terms.push((c, t / dim, t % dim));
                }
            }
            coproduct[idx(a, b)] = terms;
        }
    }

    let counit: Vec<FieldElement> = (0..dim)
        .map(|t| if t / nn == 0 { field.one() } else { field.zero() })
        .collect();

    // S(g^a x^b) = S(x)^b S(g)^a with S(g) = g^{-1}, S(x) = -x g^{-1}.
    let s_g = {
        let mut v = vec![field.zero(); dim];
        v[idx((nn - 1) % nn, 0)] = field.one();
        v
    };
    let s_x = {
        // -x g^{-1} = -x g^{N-1} = -omega^{N-1} g^{N-1} x
        let mut v = vec![field.zero(); dim];
        let coef = -omega.pow((nn - 1) as u64);
        v[idx(nn - 1, 1)] = coef;
        v
    };
    let mut antipode = Matrix::zero(field, dim, dim);
    for a in 0..nn {
        for b in 0..nn {
            let mut acc = algebra.unit().to_vec();
            for _ in 0..b {
                acc = algebra.mul_elements(&acc, &s_x);
            }
            for _ in 0..a {
                acc = algebra.mul_elements(&acc, &s_g);
            }
            for (r, v) in acc.into_iter().enumerate() {
                antipode.set(r, idx(a, b), v);
            }
        }
    }

    let hopf = HopfAlgebra::new(algebra, coproduct, counit, antipode);
    let report = hopf.validate();
    assert!(report.is_valid(), "Taft builder produced invalid data:\n{report}");
    hopf.install_frobenius();
    Ok(hopf)
}

/// The group algebra k[Z_n] with its usual Hopf structure.
pub fn cyclic_group_algebra(n: u32, field: FieldDescriptor) -> HopfRef {
    let nn = n as usize;
    let labels = (0..nn)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        })
        .collect();
    let mut unit = vec![field.zero(); nn];
    unit[0] = field.one();
    let mut mult = vec![vec![SparseVec::new(); nn]; nn];
    for i in 0..nn {
        for j in 0..nn {
            mult[i][j] = vec![((i + j) % nn, field.one())];
        }
    }
    let algebra = Algebra::new(field, labels, unit, mult).expect("table is square");
    let coproduct: CoproductTable = (0..nn).map(|i| vec![(field.one(), i, i)]).collect();
    let counit = vec![field.one(); nn];
    let mut antipode = Matrix::zero(field, nn, nn);
    for i in 0..nn {
        antipode.set((nn - i) % nn, i, field.one());
    }
    let hopf = HopfAlgebra::new(algebra, coproduct, counit, antipode);
    debug_assert!(hopf.validate().is_valid());
    hopf.install_frobenius();
    hopf
}

/// k[t]/(t^2) as a plain algebra: the non-Hopf Frobenius calibration input.
pub fn dual_numbers(field: FieldDescriptor) -> AlgebraRef {
    let labels = vec!["1".to_string(), "t".to_string()];
    let unit = vec![field.one(), field.zero()];
    let e = |i: usize| vec![(i, field.one())];
    let mult = vec![vec![e(0), e(1)], vec![e(1), Vec::new()]];
    Algebra::new(field, labels, unit, mult).expect("table is square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{Location, Side};

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    #[test]
    fn sweedler_is_a_valid_hopf_algebra() {
        let h = sweedler(q()).unwrap();
        assert_eq!(h.dim(), 4);
        assert!(h.validate().is_valid());
        assert_eq!(h.algebra().labels(), &["1", "g", "x", "gx"]);
    }

    #[test]
    fn sweedler_rejects_characteristic_two() {
        let f2 = FieldDescriptor::prime(2).unwrap();
        assert!(matches!(
            sweedler(f2),
            Err(BuilderError::BadCharacteristic(_))
        ));
    }

    #[test]
    fn sweedler_antipode_has_order_four() {
        let h = sweedler(q()).unwrap();
        assert_eq!(h.antipode_order(64), Some(4));
    }

    #[test]
    fn sweedler_relations() {
        let h = sweedler(q()).unwrap();
        let a = h.algebra();
        let g = a.basis_element(1);
        let x = a.basis_element(2);
        // g^2 = 1, x^2 = 0, xg = -gx.
        assert_eq!(a.mul_elements(&g, &g), a.unit());
        assert!(a.mul_elements(&x, &x).iter().all(|v| v.is_zero()));
        let xg = a.mul_elements(&x, &g);
        let gx = a.mul_elements(&g, &x);
        let neg: Vec<_> = gx.iter().map(|v| -v).collect();
        assert_eq!(xg, neg);
    }

    #[test]
    fn taft3_over_cyclotomic_field() {
        let f = FieldDescriptor::cyclotomic(3).unwrap();
        let h = taft(3, f).unwrap();
        assert_eq!(h.dim(), 9);
        assert!(h.validate().is_valid());
    }

    #[test]
    fn taft3_over_f7_uses_omega_two() {
        let f7 = FieldDescriptor::prime(7).unwrap();
        let h = taft(3, f7).unwrap();
        assert!(h.validate().is_valid());
        // xg = omega gx with omega = 2.
        let a = h.algebra();
        let g = a.basis_element(1);
        let x = a.basis_element(3);
        let xg = a.mul_elements(&x, &g);
        let gx = a.mul_elements(&g, &x);
        let twice: Vec<_> = gx.iter().map(|v| v * &f7.from_i64(2)).collect();
        assert_eq!(xg, twice);
    }

    #[test]
    fn taft_rejects_characteristic_dividing_n() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        assert!(matches!(taft(3, f3), Err(BuilderError::BadCharacteristic(_))));
    }

    #[test]
    fn taft_rejects_fields_without_roots() {
        assert!(matches!(taft(3, q()), Err(BuilderError::Field(_))));
    }

    #[test]
    fn taft2_equals_sweedler_structurally() {
        let s = sweedler(q()).unwrap();
        let t = taft(2, q()).unwrap();
        assert_eq!(*s.algebra().as_ref(), *t.algebra().as_ref());
        assert_eq!(s.antipode(), t.antipode());
    }

    #[test]
    fn cyclic_group_algebra_is_valid() {
        let h3 = cyclic_group_algebra(3, FieldDescriptor::cyclotomic(3).unwrap());
        assert!(h3.validate().is_valid());
        let h2 = cyclic_group_algebra(2, FieldDescriptor::prime(2).unwrap());
        assert!(h2.validate().is_valid());
        // Commutative and cocommutative: S^2 = 1.
        assert!(h2.antipode_order(8).unwrap() <= 2);
    }

    #[test]
    fn dual_numbers_radical() {
        let a = dual_numbers(q());
        assert!(a.validate().is_valid());
        let rad = crate::module::algebra_radical(&a).unwrap();
        assert_eq!(rad.basis.len(), 1);
    }

    #[test]
    fn sweedler_integrals_match_known_spans() {
        let h = sweedler(q()).unwrap();
        // Left: x + gx, right: x - gx (up to scaling).
        let left = h.integrals(Side::Left, Location::Algebra);
        assert_eq!(left.len(), 1);
        let l = &left[0];
        assert!(l[0].is_zero() && l[1].is_zero());
        assert_eq!(l[2], l[3]);
        let right = h.integrals(Side::Right, Location::Algebra);
        assert_eq!(right.len(), 1);
        let r = &right[0];
        assert!(r[0].is_zero() && r[1].is_zero());
        assert_eq!(r[2], -&r[3]);
    }
}
