//! Hopf structure on top of a structure-constant algebra: coproduct, counit
//! and antipode with full axiom validation, integrals, the modular function,
//! the Nakayama automorphism by two independent routes, and the module
//! constructions (trivial, adjoint, induced) the cohomology engines consume.

use std::sync::Arc;

use once_cell::sync::OnceCell;

use crate::algebra::{enveloping, tensor_algebra, AlgebraRef, ValidationReport};
use crate::field::{FieldDescriptor, FieldElement};
use crate::linalg::{Matrix, Subspace};
use crate::module::{
    direct_sum, quotient_module, set_frobenius_functional, submodule, Module, ModuleError,
    ModuleMap, ModuleRef,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HopfError {
    #[error("integral space has dimension {dim}, expected 1 ({which})")]
    IntegralDimension { which: String, dim: usize },
    #[error("basis element {index} does not act on the integral as a scalar")]
    NotEigenvector { index: usize },
    #[error("Nakayama candidate is not an algebra automorphism: {0}")]
    NotAutomorphism(String),
    #[error("Frobenius form is degenerate")]
    DegenerateForm,
    #[error("antipode matrix is singular")]
    SingularAntipode,
    #[error(transparent)]
    Module(#[from] ModuleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Algebra,
    Dual,
}

/// An element of the dual space, stored against the algebra basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFunctional {
    pub coords: Vec<FieldElement>,
}

impl LinearFunctional {
    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        let f = self.coords[0].field();
        let mut acc = f.zero();
        for (c, v) in self.coords.iter().zip(x) {
            if !c.is_zero() && !v.is_zero() {
                acc = &acc + &(c * v);
            }
        }
        acc
    }
}

/// Coproduct term list: Delta(b_i) = sum of coef * b_j (x) b_k.
pub type CoproductTable = Vec<Vec<(FieldElement, usize, usize)>>;

#[derive(Debug)]
pub struct HopfAlgebra {
    algebra: AlgebraRef,
    coproduct: CoproductTable,
    counit: Vec<FieldElement>,
    antipode: Matrix,
    antipode_inv: OnceCell<Matrix>,
    tensor_square: OnceCell<AlgebraRef>,
}

pub type HopfRef = Arc<HopfAlgebra>;

impl HopfAlgebra {
    pub fn new(
        algebra: AlgebraRef,
        coproduct: CoproductTable,
        counit: Vec<FieldElement>,
        antipode: Matrix,
    ) -> HopfRef {
        assert_eq!(coproduct.len(), algebra.dim());
        assert_eq!(counit.len(), algebra.dim());
        assert_eq!(antipode.rows(), algebra.dim());
        assert_eq!(antipode.cols(), algebra.dim());
        Arc::new(HopfAlgebra {
            algebra,
            coproduct,
            counit,
            antipode,
            antipode_inv: OnceCell::new(),
            tensor_square: OnceCell::new(),
        })
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn field(&self) -> FieldDescriptor {
        self.algebra.field()
    }

    pub fn counit(&self) -> &[FieldElement] {
        &self.counit
    }

    pub fn counit_of(&self, x: &[FieldElement]) -> FieldElement {
        let f = self.field();
        let mut acc = f.zero();
        for (c, v) in self.counit.iter().zip(x) {
            if !c.is_zero() && !v.is_zero() {
                acc = &acc + &(c * v);
            }
        }
        acc
    }

    pub fn antipode(&self) -> &Matrix {
        &self.antipode
    }

    pub fn apply_antipode(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        self.antipode.mul_vec(x)
    }

    pub fn coproduct_terms(&self, i: usize) -> &[(FieldElement, usize, usize)] {
        &self.coproduct[i]
    }

    /// Coproduct of an arbitrary element as a dense vector over the
    /// row-major basis of A (x) A.
    pub fn coproduct_of(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.field();
        let n = self.dim();
        let mut out = vec![f.zero(); n * n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (c, j, k) in &self.coproduct[i] {
                let idx = j * n + k;
                out[idx] = &out[idx] + &(xi * c);
            }
        }
        out
    }

    /// A (x) A with its componentwise product, used for the bialgebra
    /// axiom and for coproducts of products.
    pub fn tensor_square(&self) -> AlgebraRef {
        self.tensor_square
            .get_or_init(|| tensor_algebra(&self.algebra, &self.algebra).expect("same field"))
            .clone()
    }

    /// S is invertible for finite dimensional Hopf algebras; the inverse is
    /// cached.
    pub fn antipode_inverse(&self) -> Result<&Matrix, HopfError> {
        if let Some(m) = self.antipode_inv.get() {
            return Ok(m);
        }
        let inv = self.antipode.inverse().map_err(|_| HopfError::SingularAntipode)?;
        Ok(self.antipode_inv.get_or_init(|| inv))
    }

    /// Least m <= bound with S^m = id.
    pub fn antipode_order(&self, bound: usize) -> Option<usize> {
        let id = Matrix::identity(self.field(), self.dim());
        let mut p = self.antipode.clone();
        for m in 1..=bound {
            if p == id {
                return Some(m);
            }
            p = p.mul(&self.antipode);
        }
        None
    }

    /// Convolution product on the dual: (f * g)(a) = sum f(a_1) g(a_2).
    pub fn convolve(&self, f: &LinearFunctional, g: &LinearFunctional) -> LinearFunctional {
        let fd = self.field();
        let coords = (0..self.dim())
            .map(|i| {
                let mut acc = fd.zero();
                for (c, j, k) in &self.coproduct[i] {
                    let term = &(c * &f.coords[*j]) * &g.coords[*k];
                    acc = &acc + &term;
                }
                acc
            })
            .collect();
        LinearFunctional { coords }
    }

    /// Left action of the dual: f -> a = sum f(a_2) a_1.
    pub fn dual_acts_left(&self, f: &LinearFunctional, a: &[FieldElement]) -> Vec<FieldElement> {
        let fd = self.field();
        let n = self.dim();
        let mut out = vec![fd.zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (c, j, k) in &self.coproduct[i] {
                let term = &(ai * c) * &f.coords[*k];
                out[*j] = &out[*j] + &term;
            }
        }
        out
    }

    /// Right action of the dual: a <- f = sum f(a_1) a_2.
    pub fn dual_acts_right(&self, a: &[FieldElement], f: &LinearFunctional) -> Vec<FieldElement> {
        let fd = self.field();
        let n = self.dim();
        let mut out = vec![fd.zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (c, j, k) in &self.coproduct[i] {
                let term = &(ai * c) * &f.coords[*j];
                out[*k] = &out[*k] + &term;
            }
        }
        out
    }

    /// Full Hopf axiom check; every violation is reported with a witness.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.algebra.validate();
        let f = self.field();
        let n = self.dim();
        // Coassociativity in A (x) A (x) A, flattened (x, y, z) -> xn^2+yn+z.
        for i in 0..n {
            let mut lhs = vec![f.zero(); n * n * n];
            let mut rhs = vec![f.zero(); n * n * n];
            for (c, j, k) in &self.coproduct[i] {
                for (c2, a, b) in &self.coproduct[*j] {
                    let idx = a * n * n + b * n + k;
                    lhs[idx] = &lhs[idx] + &(c * c2);
                }
                for (c2, a, b) in &self.coproduct[*k] {
                    let idx = j * n * n + a * n + b;
                    rhs[idx] = &rhs[idx] + &(c * c2);
                }
            }
            if lhs != rhs {
                report
                    .violations
                    .push(format!("coassociativity fails on basis element {i}"));
            }
        }
        // Counit axiom.
        for i in 0..n {
            let mut left = vec![f.zero(); n];
            let mut right = vec![f.zero(); n];
            for (c, j, k) in &self.coproduct[i] {
                left[*k] = &left[*k] + &(c * &self.counit[*j]);
                right[*j] = &right[*j] + &(c * &self.counit[*k]);
            }
            let e = self.algebra.basis_element(i);
            if left != e {
                report
                    .violations
                    .push(format!("(eps (x) id) Delta != id on basis element {i}"));
            }
            if right != e {
                report
                    .violations
                    .push(format!("(id (x) eps) Delta != id on basis element {i}"));
            }
        }
        // Bialgebra: Delta and eps are algebra maps.
        let sq = self.tensor_square();
        for i in 0..n {
            for j in 0..n {
                let di = self.coproduct_of(&self.algebra.basis_element(i));
                let dj = self.coproduct_of(&self.algebra.basis_element(j));
                let prod = sq.mul_elements(&di, &dj);
                let mut direct = vec![f.zero(); n * n];
                let mut eps_prod = f.zero();
                for (k, c) in self.algebra.basis_product(i, j) {
                    for (c2, a, b) in &self.coproduct[*k] {
                        let idx = a * n + b;
                        direct[idx] = &direct[idx] + &(c * c2);
                    }
                    eps_prod = &eps_prod + &(c * &self.counit[*k]);
                }
                if prod != direct {
                    report.violations.push(format!(
                        "Delta is not multiplicative on basis pair ({i}, {j})"
                    ));
                }
                if eps_prod != &self.counit[i] * &self.counit[j] {
                    report.violations.push(format!(
                        "counit is not multiplicative on basis pair ({i}, {j})"
                    ));
                }
            }
        }
        if self.coproduct_of(self.algebra.unit()) != {
            let mut u = vec![f.zero(); n * n];
            let unit = self.algebra.unit();
            for (i, a) in unit.iter().enumerate() {
                for (j, b) in unit.iter().enumerate() {
                    u[i * n + j] = &u[i * n + j] + &(a * b);
                }
            }
            u
        } {
            report.violations.push("Delta(1) != 1 (x) 1".into());
        }
        if !self.counit_of(self.algebra.unit()).is_one() {
            report.violations.push("eps(1) != 1".into());
        }
        // Antipode identity: sum S(a_1) a_2 = eps(a) 1 = sum a_1 S(a_2).
        for i in 0..n {
            let mut left = vec![f.zero(); n];
            let mut right = vec![f.zero(); n];
            for (c, j, k) in &self.coproduct[i] {
                let sj = self.antipode.col_vec(*j);
                let sk = self.antipode.col_vec(*k);
                let l = self
                    .algebra
                    .mul_elements(&sj, &self.algebra.basis_element(*k));
                let r = self
                    .algebra
                    .mul_elements(&self.algebra.basis_element(*j), &sk);
                for (t, v) in l.iter().enumerate() {
                    left[t] = &left[t] + &(c * v);
                }
                for (t, v) in r.iter().enumerate() {
                    right[t] = &right[t] + &(c * v);
                }
            }
            let target: Vec<FieldElement> = self
                .algebra
                .unit()
                .iter()
                .map(|u| u * &self.counit[i])
                .collect();
            if left != target {
                report
                    .violations
                    .push(format!("antipode identity (left) fails on basis element {i}"));
            }
            if right != target {
                report
                    .violations
                    .push(format!("antipode identity (right) fails on basis element {i}"));
            }
        }
        if self.antipode.inverse().is_err() {
            report.violations.push("antipode is not invertible".into());
        }
        report
    }

    /// Basis of the requested integral space: x with hx = eps(h)x (left) or
    /// xh = eps(h)x (right); in the dual, f with p * f = p(1) f (left) or
    /// f * p = p(1) f (right) under convolution.
    pub fn integrals(&self, side: Side, location: Location) -> Vec<Vec<FieldElement>> {
        let f = self.field();
        let n = self.dim();
        let mut stacked: Option<Matrix> = None;
        for i in 0..n {
            let op = match location {
                Location::Algebra => {
                    let m = match side {
                        Side::Left => self.algebra.left_mult_matrix(&self.algebra.basis_element(i)),
                        Side::Right => self.algebra.right_mult_matrix(&self.algebra.basis_element(i)),
                    };
                    m.sub(&Matrix::identity(f, n).scale(&self.counit[i]))
                }
                Location::Dual => {
                    // (delta_i * f)(b_m) = sum over Delta(b_m) with j = i, or
                    // (f * delta_i)(b_m) with k = i; eigenvalue delta_i(1).
                    let mut m = Matrix::zero(f, n, n);
                    for row in 0..n {
                        for (c, j, k) in &self.coproduct[row] {
                            match side {
                                Side::Left if *j == i => {
                                    m.set(row, *k, m.at(row, *k) + c);
                                }
                                Side::Right if *k == i => {
                                    m.set(row, *j, m.at(row, *j) + c);
                                }
                                _ => {}
                            }
                        }
                    }
                    let unit_i = &self.algebra.unit()[i];
                    m.sub(&Matrix::identity(f, n).scale(unit_i))
                }
            };
            stacked = Some(match stacked {
                None => op,
                Some(s) => s.vstack(&op),
            });
        }
        let ker = stacked.expect("dim >= 1").kernel_basis();
        (0..ker.cols()).map(|c| ker.col_vec(c)).collect()
    }

    /// The right modular function alpha with a t = alpha(a) t for a right
    /// integral t; verified to be an algebra homomorphism with alpha(1) = 1.
    pub fn modular_function(&self) -> Result<LinearFunctional, HopfError> {
        let ints = self.integrals(Side::Right, Location::Algebra);
        if ints.len() != 1 {
            return Err(HopfError::IntegralDimension {
                which: "right integrals of the algebra".into(),
                dim: ints.len(),
            });
        }
        let t = &ints[0];
        let pivot = t.iter().position(|x| !x.is_zero()).expect("nonzero integral");
        let pivot_inv = t[pivot].inv().unwrap();
        let f = self.field();
        let mut coords = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let at = self.algebra.mul_elements(&self.algebra.basis_element(i), t);
            let alpha_i = &at[pivot] * &pivot_inv;
            // a t must equal alpha(a) t exactly.
            let check: Vec<FieldElement> = t.iter().map(|x| x * &alpha_i).collect();
            if at != check {
                return Err(HopfError::NotEigenvector { index: i });
            }
            coords.push(alpha_i);
        }
        let alpha = LinearFunctional { coords };
        // Algebra homomorphism checks.
        if !alpha.eval(self.algebra.unit()).is_one() {
            return Err(HopfError::NotAutomorphism("alpha(1) != 1".into()));
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let mut lhs = f.zero();
                for (k, c) in self.algebra.basis_product(i, j) {
                    lhs = &lhs + &(c * &alpha.coords[*k]);
                }
                if lhs != &alpha.coords[i] * &alpha.coords[j] {
                    return Err(HopfError::NotAutomorphism(format!(
                        "alpha is not multiplicative on ({i}, {j})"
                    )));
                }
            }
        }
        Ok(alpha)
    }

    /// Nakayama automorphism from the modular function:
    /// nu(a) = Sbar^2(a <- alpha).
    pub fn nakayama_via_modular(&self) -> Result<Matrix, HopfError> {
        let alpha = self.modular_function()?;
        let sbar = self.antipode_inverse()?.clone();
        let sbar2 = sbar.mul(&sbar);
        let f = self.field();
        let n = self.dim();
        let mut nu = Matrix::zero(f, n, n);
        for i in 0..n {
            let pulled = self.dual_acts_right(&self.algebra.basis_element(i), &alpha);
            let img = sbar2.mul_vec(&pulled);
            for (r, v) in img.into_iter().enumerate() {
                nu.set(r, i, v);
            }
        }
        self.verify_automorphism(&nu)?;
        Ok(nu)
    }

    /// The Frobenius form B(x, b) = f(xb) for a left integral f of the dual,
    /// with its Gram matrix.
    pub fn frobenius_form(&self) -> Result<(LinearFunctional, Matrix), HopfError> {
        let ints = self.integrals(Side::Left, Location::Dual);
        if ints.len() != 1 {
            return Err(HopfError::IntegralDimension {
                which: "left integrals of the dual".into(),
                dim: ints.len(),
            });
        }
        let func = LinearFunctional { coords: ints[0].clone() };
        let f = self.field();
        let n = self.dim();
        let gram = Matrix::from_fn(f, n, n, |i, j| {
            let mut v = f.zero();
            for (k, c) in self.algebra.basis_product(i, j) {
                v = &v + &(c * &func.coords[*k]);
            }
            v
        });
        if gram.inverse().is_err() {
            return Err(HopfError::DegenerateForm);
        }
        Ok((func, gram))
    }

    /// Nakayama automorphism solving the defining identity
    /// f(x b) = f(b nu(x)) against the Frobenius form. This can differ from
    /// the modular-function route by an inner automorphism; the identity
    /// below is the ground truth for this normalization.
    pub fn nakayama_via_frobenius(&self) -> Result<Matrix, HopfError> {
        let (func, gram) = self.frobenius_form()?;
        let f = self.field();
        let n = self.dim();
        let mut nu = Matrix::zero(f, n, n);
        for i in 0..n {
            // Solve G v = (row i of G)^T: f(b_i b_j) = f(b_j nu(b_i)).
            let rhs = gram.row_vec(i);
            let v = gram.solve(&rhs).map_err(|_| HopfError::DegenerateForm)?;
            for (r, x) in v.into_iter().enumerate() {
                nu.set(r, i, x);
            }
        }
        self.verify_automorphism(&nu)?;
        // Re-verify the defining identity on every basis pair.
        for i in 0..n {
            for j in 0..n {
                let lhs = {
                    let prod = self
                        .algebra
                        .mul_elements(&self.algebra.basis_element(i), &self.algebra.basis_element(j));
                    func.eval(&prod)
                };
                let rhs = {
                    let prod = self
                        .algebra
                        .mul_elements(&self.algebra.basis_element(j), &nu.col_vec(i));
                    func.eval(&prod)
                };
                if lhs != rhs {
                    return Err(HopfError::NotAutomorphism(format!(
                        "defining identity fails on ({i}, {j})"
                    )));
                }
            }
        }
        Ok(nu)
    }

    fn verify_automorphism(&self, nu: &Matrix) -> Result<(), HopfError> {
        if nu.inverse().is_err() {
            return Err(HopfError::NotAutomorphism("matrix is singular".into()));
        }
        if nu.mul_vec(self.algebra.unit()) != self.algebra.unit() {
            return Err(HopfError::NotAutomorphism("does not fix the unit".into()));
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let lhs = {
                    let mut acc = vec![self.field().zero(); self.dim()];
                    for (k, c) in self.algebra.basis_product(i, j) {
                        let col = nu.col_vec(*k);
                        for (t, v) in col.iter().enumerate() {
                            acc[t] = &acc[t] + &(c * v);
                        }
                    }
                    acc
                };
                let rhs = self
                    .algebra
                    .mul_elements(&nu.col_vec(i), &nu.col_vec(j));
                if lhs != rhs {
                    return Err(HopfError::NotAutomorphism(format!(
                        "not multiplicative on ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Least m <= 2 dim with nu^m = id.
    pub fn nakayama_order(&self, nu: &Matrix) -> Option<usize> {
        let id = Matrix::identity(self.field(), self.dim());
        let mut p = nu.clone();
        for m in 1..=2 * self.dim() {
            if p == id {
                return Some(m);
            }
            p = p.mul(nu);
        }
        None
    }

    /// nu^2 together with the closed form (Sbar^4 a) <- alpha^2; the two are
    /// asserted equal and the identity flag is returned.
    pub fn nakayama_square(&self) -> Result<(Matrix, bool), HopfError> {
        let nu = self.nakayama_via_modular()?;
        let nu2 = nu.mul(&nu);
        let alpha = self.modular_function()?;
        let alpha2 = self.convolve(&alpha, &alpha);
        let sbar = self.antipode_inverse()?.clone();
        let sbar4 = sbar.mul(&sbar).mul(&sbar).mul(&sbar);
        let f = self.field();
        let n = self.dim();
        let mut closed = Matrix::zero(f, n, n);
        for i in 0..n {
            let u = sbar4.col_vec(i);
            let img = self.dual_acts_right(&u, &alpha2);
            for (r, v) in img.into_iter().enumerate() {
                closed.set(r, i, v);
            }
        }
        assert_eq!(nu2, closed, "nu^2 must match its closed form");
        let is_id = nu2 == Matrix::identity(f, n);
        Ok((nu2, is_id))
    }

    /// Install the Frobenius functional (left integral of the dual) on the
    /// underlying algebra so the module layer can use closed-form Hom(M, A).
    pub fn install_frobenius(&self) {
        if let Ok((func, _)) = self.frobenius_form() {
            let _ = set_frobenius_functional(&self.algebra, func.coords);
        }
    }

    // -- modules ----------------------------------------------------------

    /// k as a module via the counit.
    pub fn trivial_module(&self) -> ModuleRef {
        let f = self.field();
        let action = (0..self.dim())
            .map(|i| {
                let mut m = Matrix::zero(f, 1, 1);
                m.set(0, 0, self.counit[i].clone());
                m
            })
            .collect();
        Module::new_unchecked(self.algebra.clone(), action)
    }

    /// A acting on itself by the left adjoint action a . b = sum a_1 b S(a_2).
    pub fn adjoint_module(&self) -> ModuleRef {
        let f = self.field();
        let n = self.dim();
        let action = (0..n)
            .map(|i| {
                let mut m = Matrix::zero(f, n, n);
                for (c, j, k) in &self.coproduct[i] {
                    let l = self.algebra.left_mult_matrix(&self.algebra.basis_element(*j));
                    let r = self.algebra.right_mult_matrix(&self.antipode.col_vec(*k));
                    m = m.add(&l.mul(&r).scale(c));
                }
                m
            })
            .collect();
        Module::new_unchecked(self.algebra.clone(), action)
    }

    /// Ker(eps) as a submodule of the adjoint module, together with the
    /// certified splitting adjoint = trivial (+) kernel.
    pub fn counit_kernel_module(&self) -> Result<(ModuleRef, ModuleMap), HopfError> {
        let f = self.field();
        let n = self.dim();
        let adjoint = self.adjoint_module();
        let eps_row = Matrix::from_fn(f, 1, n, |_, c| self.counit[c].clone());
        let ker = eps_row.kernel_basis();
        let (kernel, _) = submodule(&adjoint, &ker);
        // Splitting: columns [unit | kernel basis] give an isomorphism
        // trivial (+) kernel -> adjoint.
        let triv = self.trivial_module();
        let sum = direct_sum(&triv, &kernel);
        let iso_cols = Matrix::from_fn(f, n, n, |r, c| {
            if c == 0 {
                self.algebra.unit()[r].clone()
            } else {
                ker.at(r, c - 1).clone()
            }
        });
        let iso = ModuleMap::new(sum, adjoint, iso_cols)?;
        if iso.matrix.inverse().is_err() {
            return Err(HopfError::NotAutomorphism(
                "splitting of the adjoint module is not invertible".into(),
            ));
        }
        Ok((kernel, iso))
    }

    /// The twisted diagonal embedding a -> sum a_1 (x) S(a_2) of A into its
    /// enveloping algebra, verified injective and multiplicative.
    pub fn enveloping_embedding(&self) -> Result<Matrix, HopfError> {
        let e = enveloping(&self.algebra);
        let f = self.field();
        let n = self.dim();
        let mut sigma = Matrix::zero(f, n * n, n);
        for i in 0..n {
            for (c, j, k) in &self.coproduct[i] {
                let s = self.antipode.col_vec(*k);
                for (l, v) in s.iter().enumerate() {
                    if !v.is_zero() {
                        let idx = j * n + l;
                        sigma.set(idx, i, sigma.at(idx, i) + &(c * v));
                    }
                }
            }
        }
        if sigma.rank() != n {
            return Err(HopfError::NotAutomorphism("sigma is not injective".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = e.mul_elements(&sigma.col_vec(i), &sigma.col_vec(j));
                let mut rhs = vec![f.zero(); n * n];
                for (k, c) in self.algebra.basis_product(i, j) {
                    for (t, v) in sigma.col_vec(*k).iter().enumerate() {
                        rhs[t] = &rhs[t] + &(c * v);
                    }
                }
                if lhs != rhs {
                    return Err(HopfError::NotAutomorphism(format!(
                        "sigma is not multiplicative on ({i}, {j})"
                    )));
                }
            }
        }
        Ok(sigma)
    }

    /// A as a left module over its enveloping algebra: (a (x) b) . m = a m b.
    pub fn as_bimodule(&self) -> ModuleRef {
        let e = enveloping(&self.algebra);
        let n = self.dim();
        let action = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let l = self.algebra.left_mult_matrix(&self.algebra.basis_element(i));
                let r = self.algebra.right_mult_matrix(&self.algebra.basis_element(j));
                l.mul(&r)
            })
            .collect();
        Module::new_unchecked(e, action)
    }

    /// The induced module A^e (x)_A M: quotient of the free module A^e (x) M
    /// by the balancing relations over the embedded copy of A.
    pub fn induced_module(&self, m: &ModuleRef) -> Result<ModuleRef, HopfError> {
        let e = enveloping(&self.algebra);
        let sigma = self.enveloping_embedding()?;
        let f = self.field();
        let n2 = e.dim();
        let md = m.dim();
        let ambient = Module::free(&e, md);
        // Relations: (y sigma(a)) (x) v - y (x) (a v), for y in the basis of
        // A^e, a in a generating set of A, v in the basis of M.
        let mut rels: Vec<Vec<FieldElement>> = Vec::new();
        for y in 0..n2 {
            for &g in self.algebra.generating_set() {
                let ysig = e.mul_elements(&e.basis_element(y), &sigma.col_vec(g));
                for v in 0..md {
                    let mut rel = vec![f.zero(); n2 * md];
                    for (t, c) in ysig.iter().enumerate() {
                        if !c.is_zero() {
                            rel[v * n2 + t] = c.clone();
                        }
                    }
                    let av = m.action(g).col_vec(v);
                    for (w, c) in av.iter().enumerate() {
                        if !c.is_zero() {
                            rel[w * n2 + y] = &rel[w * n2 + y] - c;
                        }
                    }
                    rels.push(rel);
                }
            }
        }
        let sub = Subspace::span(f, n2 * md, &rels);
        let (quot, _) = quotient_module(&ambient, &sub);
        Ok(quot)
    }

    /// The k-dual of a module, as a left module again via the antipode:
    /// (a . f)(m) = f(S(a) m).
    pub fn hopf_dual_module(&self, m: &ModuleRef) -> ModuleRef {
        let n = self.dim();
        let action = (0..n)
            .map(|i| {
                let s = self.antipode.col_vec(i);
                m.act_element(&s).transpose()
            })
            .collect();
        Module::new_unchecked(self.algebra.clone(), action)
    }
}
