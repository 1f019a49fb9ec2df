//! Structural facts about the bundled Hopf algebras: integral spans, the
//! modular function, the Nakayama automorphism by both routes, the adjoint
//! module splitting and the enveloping-algebra embedding.

use tatecoh::algebra::{enveloping, opposite};
use tatecoh::builders::{cyclic_group_algebra, sweedler, taft};
use tatecoh::field::FieldDescriptor;
use tatecoh::hopf::{HopfRef, LinearFunctional, Location, Side};
use tatecoh::linalg::Matrix;
use tatecoh::module::{
    hom_space, is_projective, modules_isomorphic, Module,
};
use tatecoh::FieldElement;

fn q() -> FieldDescriptor {
    FieldDescriptor::rationals()
}

fn c3() -> FieldDescriptor {
    FieldDescriptor::cyclotomic(3).unwrap()
}

fn h4() -> HopfRef {
    sweedler(q()).unwrap()
}

/// Index helpers for the Taft basis g^i x^j with i fastest.
fn taft_idx(n: usize, i: usize, j: usize) -> usize {
    j * n + i
}

#[test]
fn sweedler_modular_function() {
    let h = h4();
    let alpha = h.modular_function().unwrap();
    // alpha(1) = 1, alpha(g) = -1, alpha(x) = alpha(gx) = 0.
    assert_eq!(alpha.coords[0], q().one());
    assert_eq!(alpha.coords[1], q().from_i64(-1));
    assert!(alpha.coords[2].is_zero());
    assert!(alpha.coords[3].is_zero());
}

/// The two routes are each verified against their own defining property and
/// may differ by an inner automorphism; this finds the witnessing unit among
/// the group-like basis elements.
fn nakayama_routes_agree_up_to_inner(h: &HopfRef) -> bool {
    let nu_m = h.nakayama_via_modular().unwrap();
    let nu_f = h.nakayama_via_frobenius().unwrap();
    if nu_m == nu_f {
        return true;
    }
    let a = h.algebra();
    for u in 0..h.dim() {
        let ucol = a.basis_element(u);
        let l = a.left_mult_matrix(&ucol);
        let r = a.right_mult_matrix(&ucol);
        if let (Ok(_), Ok(rinv)) = (l.inverse(), r.inverse()) {
            // x -> u nu_m(x) u^{-1}
            let conj = l.mul(&rinv).mul(&nu_m);
            if conj == nu_f {
                return true;
            }
        }
    }
    false
}

#[test]
fn sweedler_nakayama_both_routes() {
    let h = h4();
    let nu1 = h.nakayama_via_modular().unwrap();
    // The formula route reproduces nu(g) = -g, nu(x) = -x.
    let neg = |i: usize| {
        let mut v = vec![q().zero(); 4];
        v[i] = q().from_i64(-1);
        v
    };
    assert_eq!(nu1.col_vec(1), neg(1));
    assert_eq!(nu1.col_vec(2), neg(2));
    // Routes agree up to the inner automorphism I_g.
    assert!(nakayama_routes_agree_up_to_inner(&h));
    let (nu_sq, is_id) = h.nakayama_square().unwrap();
    assert!(is_id);
    assert_eq!(nu_sq, Matrix::identity(q(), 4));
    assert_eq!(h.nakayama_order(&nu1), Some(2));
}

#[test]
fn sweedler_frobenius_form_nondegenerate() {
    let h = h4();
    let (_, gram) = h.frobenius_form().unwrap();
    assert!(gram.inverse().is_ok());
}

#[test]
fn taft3_structural_facts_cyclotomic() {
    taft3_structural_facts(c3());
}

#[test]
fn taft3_structural_facts_f7() {
    taft3_structural_facts(FieldDescriptor::prime(7).unwrap());
}

fn taft3_structural_facts(field: FieldDescriptor) {
    let n = 3usize;
    let h = taft(3, field).unwrap();
    let omega = tatecoh::field::primitive_root_of_unity(field, 3).unwrap();
    // Right integral: span of sum_j x^{N-1} g^j.
    let right = h.integrals(Side::Right, Location::Algebra);
    assert_eq!(right.len(), 1);
    let t = &right[0];
    // sum_j x^{N-1} g^j = sum_j omega^{(N-1)j} g^j x^{N-1} in the g-first
    // basis order.
    let mut expected = vec![field.zero(); n * n];
    for j in 0..n {
        expected[taft_idx(n, j, n - 1)] = omega.pow(((n - 1) * j) as u64);
    }
    // Compare up to scaling by the first nonzero coordinate.
    let pivot = t.iter().position(|v| !v.is_zero()).unwrap();
    let scale = expected[pivot].div(&t[pivot]).unwrap();
    let scaled: Vec<FieldElement> = t.iter().map(|v| v * &scale).collect();
    assert_eq!(scaled, expected);
    // alpha(g) = omega, alpha(x) = 0, alpha(1) = 1.
    let alpha = h.modular_function().unwrap();
    assert!(alpha.coords[taft_idx(n, 0, 0)].is_one());
    assert_eq!(alpha.coords[taft_idx(n, 1, 0)], omega);
    assert!(alpha.coords[taft_idx(n, 0, 1)].is_zero());
    // nu(g) = omega g, nu(x) = omega x, and nu^2 != id.
    let nu = h.nakayama_via_modular().unwrap();
    assert!(nakayama_routes_agree_up_to_inner(&h));
    let g = taft_idx(n, 1, 0);
    let x = taft_idx(n, 0, 1);
    let mut exp_g = vec![field.zero(); n * n];
    exp_g[g] = omega.clone();
    let mut exp_x = vec![field.zero(); n * n];
    exp_x[x] = omega.clone();
    assert_eq!(nu.col_vec(g), exp_g);
    assert_eq!(nu.col_vec(x), exp_x);
    let (_, is_id) = h.nakayama_square().unwrap();
    assert!(!is_id, "nu^2 is not the identity for N = 3");
    // Finite order dividing 2 dim.
    let order = h.nakayama_order(&nu).unwrap();
    assert_eq!((2 * h.dim()) % order, 0);
}

#[test]
fn taft3_antipode_order_is_six() {
    // S^2 is conjugation-like of order N, so S has order 2N.
    let h = taft(3, c3()).unwrap();
    assert_eq!(h.antipode_order(2 * 81), Some(6));
    let s = h.antipode();
    let sbar = h.antipode_inverse().unwrap();
    assert_eq!(s.mul(sbar), Matrix::identity(c3(), 9));
}

#[test]
fn group_algebra_is_unimodular_and_symmetric() {
    for (n, field) in [(3u32, c3()), (2, q())] {
        let h = cyclic_group_algebra(n, field);
        let alpha = h.modular_function().unwrap();
        // alpha = eps.
        assert_eq!(alpha.coords, h.counit().to_vec());
        let nu = h.nakayama_via_modular().unwrap();
        assert_eq!(nu, Matrix::identity(field, n as usize));
        // Integrals: span of sum of group elements.
        let left = h.integrals(Side::Left, Location::Algebra);
        assert_eq!(left.len(), 1);
        let l = &left[0];
        for i in 1..n as usize {
            assert_eq!(l[i], l[0]);
        }
    }
}

#[test]
fn convolution_unit_and_associativity() {
    let h = h4();
    let eps = LinearFunctional { coords: h.counit().to_vec() };
    let f = LinearFunctional {
        coords: vec![q().from_i64(2), q().from_i64(-1), q().from_i64(5), q().zero()],
    };
    assert_eq!(h.convolve(&f, &eps), f);
    assert_eq!(h.convolve(&eps, &f), f);
    let g = LinearFunctional {
        coords: vec![q().one(), q().one(), q().from_i64(3), q().from_i64(-2)],
    };
    let k = LinearFunctional {
        coords: vec![q().zero(), q().from_i64(4), q().one(), q().one()],
    };
    let lhs = h.convolve(&h.convolve(&f, &g), &k);
    let rhs = h.convolve(&f, &h.convolve(&g, &k));
    assert_eq!(lhs, rhs);
}

#[test]
fn dual_basis_idempotents_in_kz2() {
    let h = cyclic_group_algebra(2, q());
    let d1 = LinearFunctional { coords: vec![q().one(), q().zero()] };
    assert_eq!(h.convolve(&d1, &d1), d1);
}

#[test]
fn adjoint_action_and_kernel_splitting() {
    let h = h4();
    let adj = h.adjoint_module();
    assert!(adj.validate_full().is_valid());
    // g . x = gxS(g) = gxg = -x.
    let gx_col = adj.action(1).col_vec(2);
    assert_eq!(gx_col, vec![q().zero(), q().zero(), q().from_i64(-1), q().zero()]);
    let (kernel, iso) = h.counit_kernel_module().unwrap();
    assert_eq!(kernel.dim(), 3);
    assert!(iso.matrix.inverse().is_ok());
    assert!(iso.is_intertwiner());
}

#[test]
fn trivial_module_action() {
    let h = h4();
    let k = h.trivial_module();
    assert!(k.validate_full().is_valid());
    assert_eq!(k.action(1).at(0, 0), &q().one());
}

#[test]
fn hopf_dual_of_trivial_is_trivial() {
    let h = h4();
    let k = h.trivial_module();
    let dk = h.hopf_dual_module(&k);
    assert_eq!(*k, *dk);
}

#[test]
fn hopf_dual_of_regular_is_projective() {
    let h = h4();
    let reg = Module::regular(h.algebra(), true);
    let d = h.hopf_dual_module(&reg);
    assert_eq!(d.dim(), 4);
    assert!(d.validate_full().is_valid());
    let (proj, cert) = is_projective(&d).unwrap();
    assert!(proj);
    assert!(cert.is_some());
}

#[test]
fn sigma_embedding_and_induction() {
    let h = h4();
    let sigma = h.enveloping_embedding().unwrap();
    // sigma(1) = 1 (x) 1.
    let mut expected = vec![q().zero(); 16];
    expected[0] = q().one();
    assert_eq!(sigma.col_vec(0), expected);
    // Induced module of the trivial module is A as a bimodule.
    let k = h.trivial_module();
    let ind = h.induced_module(&k).unwrap();
    assert_eq!(ind.dim(), h.dim());
    let bimod = h.as_bimodule();
    assert!(modules_isomorphic(&ind, &bimod, 17).is_isomorphic());
}

#[test]
fn enveloping_restricted_along_sigma_is_projective() {
    let h = h4();
    let a = h.algebra();
    let e = enveloping(a);
    let sigma = h.enveloping_embedding().unwrap();
    // A^e as a right A-module via sigma, i.e. a left module over A^op.
    let op = opposite(a);
    let action: Vec<Matrix> = (0..a.dim())
        .map(|i| e.right_mult_matrix(&sigma.col_vec(i)))
        .collect();
    let m = Module::new(op, action).unwrap();
    let (proj, cert) = is_projective(&m).unwrap();
    assert!(proj, "A^e must restrict to a projective A-module");
    assert!(cert.is_some());
}

#[test]
fn hom_space_dimensions_from_known_structure() {
    let h = h4();
    let k = h.trivial_module();
    // Hom(k, k) is one dimensional.
    assert_eq!(hom_space(&k, &k).len(), 1);
    // Hom(k, A) is one dimensional, spanned by the left integral embedding.
    let reg = Module::regular(h.algebra(), true);
    let maps = hom_space(&k, &reg);
    assert_eq!(maps.len(), 1);
    let img = maps[0].col_vec(0);
    // The image is a left integral: x + gx up to scaling.
    assert!(img[0].is_zero() && img[1].is_zero());
    assert_eq!(img[2], img[3]);
    // Semisimple group algebra: Hom over kZ_3 of the regular module with
    // itself has dimension 3.
    let h3 = cyclic_group_algebra(3, c3());
    let reg3 = Module::regular(h3.algebra(), true);
    assert_eq!(hom_space(&reg3, &reg3).len(), 3);
}

#[test]
fn dual_actions_are_module_actions() {
    let h = h4();
    let alpha = h.modular_function().unwrap();
    // a <- alpha is the right action used in the Nakayama formula; check
    // associativity (a <- f) <- g = a <- (f * g) on basis elements.
    let beta = LinearFunctional {
        coords: vec![q().one(), q().from_i64(2), q().zero(), q().from_i64(1)],
    };
    for i in 0..4 {
        let a = {
            let mut v = vec![q().zero(); 4];
            v[i] = q().one();
            v
        };
        let lhs = h.dual_acts_right(&h.dual_acts_right(&a, &alpha), &beta);
        let rhs = h.dual_acts_right(&a, &h.convolve(&alpha, &beta));
        assert_eq!(lhs, rhs);
        let lhs2 = h.dual_acts_left(&beta, &h.dual_acts_left(&alpha, &a));
        let rhs2 = h.dual_acts_left(&h.convolve(&beta, &alpha), &a);
        assert_eq!(lhs2, rhs2);
    }
}
