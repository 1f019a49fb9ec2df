//! Finite dimensional module representation theory over a structure-constant
//! algebra: Hom spaces, radical and socle, projective covers by two engines,
//! syzygy and cosyzygy operators, projectivity certificates and stable Hom.
//!
//! The minimal engine rests on lifting primitive idempotents from the
//! semisimple quotient A/J, which is assumed split and commutative for the
//! algebras this crate bundles; when that assumption fails the free engine
//! takes over and everything stays correct in the stable category, only
//! larger.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use once_cell::sync::OnceCell;
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::algebra::{opposite, Algebra, AlgebraRef, ValidationReport};
use crate::field::{FieldDescriptor, FieldElement};
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::poly;

static NEXT_MODULE_ID: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModuleError {
    #[error("modules live over different algebras")]
    MixedAlgebras,
    #[error("action matrices do not define a module: {0}")]
    NotAModule(String),
    #[error("radical candidate failed verification: {0}")]
    RadicalVerificationFailed(String),
    #[error("semisimple quotient is not split commutative: {0}")]
    NotSplitCommutative(String),
    #[error("isomorphism search exhausted after {tries} attempts")]
    IsoUndecided { tries: usize },
    #[error("no Frobenius functional available for this algebra")]
    NoFrobeniusFunctional,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

// ---------------------------------------------------------------------------
// Modules and module maps
// ---------------------------------------------------------------------------

/// A finite dimensional left module: one action matrix per algebra basis
/// element, acting on column vectors.
#[derive(Debug)]
pub struct Module {
    algebra: AlgebraRef,
    dim: usize,
    action: Vec<Matrix>,
    id: u64,
    pub(crate) dual_cache: OnceCell<ModuleRef>,
}

pub type ModuleRef = Arc<Module>;

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.action == other.action
    }
}

pub fn same_algebra(a: &AlgebraRef, b: &AlgebraRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Module {
    /// Validated constructor. The certificate checks the unit action and
    /// multiplicativity against a generating set, which pins the whole
    /// multiplication table by bilinearity.
    pub fn new(algebra: AlgebraRef, action: Vec<Matrix>) -> Result<ModuleRef, ModuleError> {
        let m = Module::new_unchecked(algebra, action);
        m.validate_certificate()?;
        Ok(m)
    }

    pub fn new_unchecked(algebra: AlgebraRef, action: Vec<Matrix>) -> ModuleRef {
        assert_eq!(action.len(), algebra.dim(), "one action matrix per basis element");
        let dim = action.first().map_or(0, |m| m.rows());
        for a in &action {
            assert_eq!(a.rows(), dim);
            assert_eq!(a.cols(), dim);
            assert_eq!(a.field(), algebra.field());
        }
        Arc::new(Module {
            algebra,
            dim,
            action,
            id: NEXT_MODULE_ID.fetch_add(1, Ordering::Relaxed),
            dual_cache: OnceCell::new(),
        })
    }

    pub fn zero(algebra: AlgebraRef) -> ModuleRef {
        let f = algebra.field();
        let action = vec![Matrix::zero(f, 0, 0); algebra.dim()];
        Module::new_unchecked(algebra, action)
    }

    /// The regular module: left multiplication, or right multiplication
    /// viewed as a left module over the opposite algebra.
    pub fn regular(algebra: &AlgebraRef, left: bool) -> ModuleRef {
        if left {
            let action = (0..algebra.dim())
                .map(|i| algebra.left_mult_matrix(&algebra.basis_element(i)))
                .collect();
            Module::new_unchecked(algebra.clone(), action)
        } else {
            let op = opposite(algebra);
            let action = (0..algebra.dim())
                .map(|i| algebra.right_mult_matrix(&algebra.basis_element(i)))
                .collect();
            Module::new_unchecked(op, action)
        }
    }

    pub fn free(algebra: &AlgebraRef, rank: usize) -> ModuleRef {
        let reg = Module::regular(algebra, true);
        let mut out = Module::zero(algebra.clone());
        for _ in 0..rank {
            out = direct_sum(&out, &reg);
        }
        out
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act_element(&self, coords: &[FieldElement]) -> Matrix {
        let f = self.algebra.field();
        let mut out = Matrix::zero(f, self.dim, self.dim);
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&self.action[i].scale(c));
        }
        out
    }

    pub fn validate_certificate(&self) -> Result<(), ModuleError> {
        let f = self.algebra.field();
        let unit_act = self.act_element(self.algebra.unit());
        if unit_act != Matrix::identity(f, self.dim) {
            return Err(ModuleError::NotAModule("unit does not act as identity".into()));
        }
        for &g in self.algebra.generating_set() {
            for j in 0..self.algebra.dim() {
                let lhs = self.action[g].mul(&self.action[j]);
                let mut rhs = Matrix::zero(f, self.dim, self.dim);
                for (k, c) in self.algebra.basis_product(g, j) {
                    rhs = rhs.add(&self.action[*k].scale(c));
                }
                if lhs != rhs {
                    return Err(ModuleError::NotAModule(format!(
                        "action not multiplicative on generator {g} and basis element {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive pairwise check, used on external input and in tests.
    pub fn validate_full(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let f = self.algebra.field();
        if self.act_element(self.algebra.unit()) != Matrix::identity(f, self.dim) {
            report.violations.push("unit does not act as identity".into());
        }
        for i in 0..self.algebra.dim() {
            for j in 0..self.algebra.dim() {
                let lhs = self.action[i].mul(&self.action[j]);
                let mut rhs = Matrix::zero(f, self.dim, self.dim);
                for (k, c) in self.algebra.basis_product(i, j) {
                    rhs = rhs.add(&self.action[*k].scale(c));
                }
                if lhs != rhs {
                    report
                        .violations
                        .push(format!("rho(b{i})rho(b{j}) != rho(b{i} b{j})"));
                }
            }
        }
        report
    }
}

/// An intertwiner between modules over the same algebra. The intertwiner
/// property is re-verified (on a generating set) at construction.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: ModuleRef,
    pub target: ModuleRef,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: ModuleRef, target: ModuleRef, matrix: Matrix) -> Result<ModuleMap, ModuleError> {
        if !same_algebra(source.algebra(), target.algebra()) {
            return Err(ModuleError::MixedAlgebras);
        }
        assert_eq!(matrix.rows(), target.dim());
        assert_eq!(matrix.cols(), source.dim());
        let map = ModuleMap { source, target, matrix };
        if !map.is_intertwiner() {
            return Err(ModuleError::NotAModule("matrix is not an intertwiner".into()));
        }
        Ok(map)
    }

    pub fn identity(m: &ModuleRef) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.algebra().field(), m.dim()),
        }
    }

    pub fn is_intertwiner(&self) -> bool {
        for &g in self.source.algebra().generating_set() {
            let lhs = self.matrix.mul(self.source.action(g));
            let rhs = self.target.action(g).mul(&self.matrix);
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    pub fn compose(&self, inner: &ModuleMap) -> ModuleMap {
        assert!(Arc::ptr_eq(&self.source, &inner.target), "composition mismatch");
        ModuleMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        }
    }
}

// ---------------------------------------------------------------------------
// Frobenius data: closed-form Hom(M, A)
// ---------------------------------------------------------------------------

/// A linear functional with invertible Gram matrix G[i][j] = f(b_i b_j).
/// Existence makes Hom(M, A) computable in closed form, which the stripping
/// and stable-Hom machinery leans on.
#[derive(Debug)]
pub struct FrobeniusData {
    pub functional: Vec<FieldElement>,
    pub gram: Matrix,
    pub gram_inv: Matrix,
}

impl FrobeniusData {
    pub fn gram_of(a: &Algebra, functional: &[FieldElement]) -> Matrix {
        let f = a.field();
        Matrix::from_fn(f, a.dim(), a.dim(), |i, j| {
            let mut v = f.zero();
            for (k, c) in a.basis_product(i, j) {
                v = &v + &(c * &functional[*k]);
            }
            v
        })
    }

    /// Build from a functional already known to be nondegenerate.
    pub fn build_unchecked(a: &AlgebraRef, functional: Vec<FieldElement>) -> FrobeniusData {
        let gram = FrobeniusData::gram_of(a, &functional);
        let gram_inv = gram.inverse().expect("Frobenius Gram matrix must be invertible");
        FrobeniusData { functional, gram, gram_inv }
    }

    pub fn try_build(a: &AlgebraRef, functional: Vec<FieldElement>) -> Option<FrobeniusData> {
        let gram = FrobeniusData::gram_of(a, &functional);
        let gram_inv = gram.inverse().ok()?;
        Some(FrobeniusData { functional, gram, gram_inv })
    }
}

/// Install a known Frobenius functional (the Hopf layer uses the left
/// integral of the dual).
pub fn set_frobenius_functional(a: &AlgebraRef, functional: Vec<FieldElement>) -> bool {
    match FrobeniusData::try_build(a, functional) {
        Some(data) => {
            let _ = a.frobenius_cache.set(Some(Arc::new(data)));
            true
        }
        None => false,
    }
}

/// Frobenius data if the algebra has any: the associative trace form first,
/// then a bounded seeded search over random functionals.
pub fn frobenius_data(a: &AlgebraRef) -> Option<Arc<FrobeniusData>> {
    a.frobenius_cache
        .get_or_init(|| {
            let trace = a.trace_vector();
            if let Some(d) = FrobeniusData::try_build(a, trace) {
                return Some(Arc::new(d));
            }
            let f = a.field();
            let mut rng = StdRng::seed_from_u64(0x46524F42);
            for _ in 0..16 {
                let cand: Vec<FieldElement> = (0..a.dim()).map(|_| f.sample(&mut rng)).collect();
                if let Some(d) = FrobeniusData::try_build(a, cand) {
                    return Some(Arc::new(d));
                }
            }
            None
        })
        .clone()
}

// ---------------------------------------------------------------------------
// Radical
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct RadicalData {
    /// Basis of the Jacobson radical J.
    pub basis: Vec<Vec<FieldElement>>,
    pub space: Subspace,
    /// A small set generating J as a left ideal; J M is the action closure
    /// of their images.
    pub ideal_generators: Vec<Vec<FieldElement>>,
    /// Least m with J^m = 0.
    pub nilpotency: usize,
    /// The semisimple quotient A/J with projection and a linear section.
    pub quotient: AlgebraRef,
    pub proj: Matrix,
    pub lift: Matrix,
}

/// The Jacobson radical with mandatory verification: the candidate must be
/// a two-sided nilpotent ideal with semisimple quotient (nondegenerate trace
/// form on A/J). The trace-form kernel is tried first; over a prime field a
/// commutative algebra falls back to the Frobenius-power kernel.
pub fn algebra_radical(a: &AlgebraRef) -> Result<Arc<RadicalData>, ModuleError> {
    a.radical_cache
        .get_or_init(|| {
            let candidates = radical_candidates(a);
            let mut last_err = ModuleError::RadicalVerificationFailed("no candidate produced".into());
            for cand in candidates {
                match verify_radical(a, cand) {
                    Ok(data) => return Ok(Arc::new(data)),
                    Err(e) => last_err = e,
                }
            }
            Err(last_err)
        })
        .clone()
}

fn radical_candidates(a: &AlgebraRef) -> Vec<Vec<Vec<FieldElement>>> {
    let f = a.field();
    let n = a.dim();
    let mut out = Vec::new();
    // Trace-form kernel: x in J iff tr L_{x b_j} = 0 for all j.
    let tau = a.trace_vector();
    let gram = Matrix::from_fn(f, n, n, |i, j| {
        let mut v = f.zero();
        for (k, c) in a.basis_product(i, j) {
            v = &v + &(c * &tau[*k]);
        }
        v
    });
    let ker = gram.transpose().kernel_basis();
    out.push((0..ker.cols()).map(|c| ker.col_vec(c)).collect());
    // Frobenius-power kernel: valid for commutative algebras over F_p, where
    // x -> x^p is linear and the radical is the nilradical.
    let p = f.characteristic();
    if p > 0 && a.is_commutative() {
        let mut frob = Matrix::zero(f, n, n);
        for i in 0..n {
            let mut x = a.basis_element(i);
            let mut acc = a.unit().to_vec();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = a.mul_elements(&acc, &x);
                }
                x = a.mul_elements(&x, &x);
                e >>= 1;
            }
            for (r, v) in acc.into_iter().enumerate() {
                frob.set(r, i, v);
            }
        }
        let mut power = frob.clone();
        let mut bound = 1u64;
        while bound < n as u64 {
            power = frob.mul(&power);
            bound *= p;
        }
        let ker = power.kernel_basis();
        out.push((0..ker.cols()).map(|c| ker.col_vec(c)).collect());
    }
    out
}

fn verify_radical(
    a: &AlgebraRef,
    basis: Vec<Vec<FieldElement>>,
) -> Result<RadicalData, ModuleError> {
    let f = a.field();
    let n = a.dim();
    let space = Subspace::span(f, n, &basis);
    // Two-sided ideal.
    for v in &basis {
        for i in 0..n {
            let bi = a.basis_element(i);
            if !space.contains(&a.mul_elements(&bi, v)) || !space.contains(&a.mul_elements(v, &bi)) {
                return Err(ModuleError::RadicalVerificationFailed(
                    "candidate is not a two-sided ideal".into(),
                ));
            }
        }
    }
    // Nilpotent: iterate J^(m+1) = J * J^m.
    let mut nilpotency = 1usize;
    let mut current = basis.clone();
    while !current.is_empty() {
        if nilpotency > n {
            return Err(ModuleError::RadicalVerificationFailed(
                "candidate is not nilpotent".into(),
            ));
        }
        let mut next_vecs = Vec::new();
        for v in &basis {
            for w in &current {
                next_vecs.push(a.mul_elements(v, w));
            }
        }
        let next_space = Subspace::span(f, n, &next_vecs);
        if next_space.dim() == 0 {
            nilpotency += 1;
            break;
        }
        // Reduced spanning set for the next power.
        let rows = next_space.basis_rows();
        current = (0..rows.rows()).map(|r| rows.row_vec(r)).collect();
        nilpotency += 1;
    }
    if basis.is_empty() {
        nilpotency = 1;
    }
    // Quotient algebra on the complement coordinates.
    let q = space.quotient_dim();
    let ambient_positions: Vec<usize> = {
        let mut pivots = Vec::new();
        for c in 0..n {
            let e = unit_vec(f, n, c);
            if space.quotient_coords(&e).iter().any(|x| !x.is_zero()) {
                pivots.push(c);
            }
        }
        pivots
    };
    // lift: q columns, the ambient standard vectors at non-pivot positions.
    let lift = Matrix::from_fn(f, n, q, |r, c| {
        if r == ambient_positions[c] {
            f.one()
        } else {
            f.zero()
        }
    });
    let proj = Matrix::from_fn(f, q, n, |r, c| {
        let e = unit_vec(f, n, c);
        space.quotient_coords(&e)[r].clone()
    });
    let mut mult = vec![vec![Vec::new(); q]; q];
    for i in 0..q {
        for j in 0..q {
            let prod = a.mul_elements(&lift.col_vec(i), &lift.col_vec(j));
            let coords = space.quotient_coords(&prod);
            let entry: Vec<(usize, FieldElement)> = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            mult[i][j] = entry;
        }
    }
    let unit_q = space.quotient_coords(a.unit());
    let labels = (0..q).map(|i| format!("q{i}")).collect();
    let quotient = Algebra::new(f, labels, unit_q, mult)
        .map_err(|e| ModuleError::RadicalVerificationFailed(e.to_string()))?;
    // Semisimple quotient: nondegenerate trace form.
    let tau = quotient.trace_vector();
    let gram = Matrix::from_fn(f, q, q, |i, j| {
        let mut v = f.zero();
        for (k, c) in quotient.basis_product(i, j) {
            v = &v + &(c * &tau[*k]);
        }
        v
    });
    if q > 0 && gram.rank() != q {
        return Err(ModuleError::RadicalVerificationFailed(
            "trace form on the quotient is degenerate".into(),
        ));
    }
    // Greedy left-ideal generating set for J.
    let mut ideal_generators: Vec<Vec<FieldElement>> = Vec::new();
    {
        let mut gen_span = Subspace::span(f, n, &[]);
        while gen_span.dim() < basis.len() {
            let next = basis
                .iter()
                .find(|v| !gen_span.contains(v))
                .expect("span is proper")
                .clone();
            ideal_generators.push(next.clone());
            let mut seed: Vec<Vec<FieldElement>> = Vec::new();
            for g in &ideal_generators {
                seed.push(g.clone());
            }
            let closed = left_multiplication_closure(a, seed);
            gen_span = Subspace::span(f, n, &closed);
        }
    }
    Ok(RadicalData {
        basis,
        space,
        ideal_generators,
        nilpotency,
        quotient,
        proj,
        lift,
    })
}

/// Close a set of algebra elements under left multiplication by the
/// algebra's generating set (and hence the whole algebra).
fn left_multiplication_closure(
    a: &AlgebraRef,
    seed: Vec<Vec<FieldElement>>,
) -> Vec<Vec<FieldElement>> {
    let f = a.field();
    let n = a.dim();
    let mut vecs = seed;
    let mut span = Subspace::span(f, n, &vecs);
    let mut queue: Vec<Vec<FieldElement>> = vecs.clone();
    while let Some(v) = queue.pop() {
        for &g in a.generating_set() {
            let gv = a.mul_elements(&a.basis_element(g), &v);
            if !span.contains(&gv) {
                vecs.push(gv.clone());
                span = Subspace::span(f, n, &vecs);
                queue.push(gv);
            }
        }
    }
    vecs
}

/// Close a set of module vectors under the module action.
pub fn action_closure(m: &ModuleRef, seed: Vec<Vec<FieldElement>>) -> Subspace {
    let f = m.algebra().field();
    let mut vecs = seed;
    let mut span = Subspace::span(f, m.dim(), &vecs);
    let mut queue: Vec<Vec<FieldElement>> = vecs.clone();
    while let Some(v) = queue.pop() {
        for &g in m.algebra().generating_set() {
            let gv = m.action(g).mul_vec(&v);
            if !span.contains(&gv) {
                vecs.push(gv.clone());
                span = Subspace::span(f, m.dim(), &vecs);
                queue.push(gv);
            }
        }
    }
    span
}

fn unit_vec(f: FieldDescriptor, n: usize, i: usize) -> Vec<FieldElement> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

// ---------------------------------------------------------------------------
// Primitive idempotents and PIMs (minimal engine)
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct Pim {
    /// Orthogonal primitive idempotent e of A.
    pub idem: Vec<FieldElement>,
    /// Basis of Ae as a subspace of A, one column per basis vector.
    pub basis: Matrix,
    /// Coordinates of e itself in that basis.
    pub gen_coords: Vec<FieldElement>,
    /// Ae as a left module in that basis.
    pub module: ModuleRef,
}

#[derive(Debug)]
pub struct PimData {
    pub pims: Vec<Pim>,
}

pub fn pim_data(a: &AlgebraRef) -> Result<Arc<PimData>, ModuleError> {
    a.pim_cache
        .get_or_init(|| compute_pim_data(a).map(Arc::new))
        .clone()
}

fn compute_pim_data(a: &AlgebraRef) -> Result<PimData, ModuleError> {
    let rad = algebra_radical(a)?;
    let q = &rad.quotient;
    if !q.is_commutative() {
        return Err(ModuleError::NotSplitCommutative(
            "A/J is not commutative".into(),
        ));
    }
    let idems_q = split_commutative_semisimple(q)?;
    // Lift to orthogonal idempotents of A by Newton refinement inside
    // successive corners.
    let f = a.field();
    let n = a.dim();
    let mut lifted: Vec<Vec<FieldElement>> = Vec::new();
    for (t, eq) in idems_q.iter().enumerate() {
        if t + 1 == idems_q.len() {
            // Force the exact partition of unity.
            let mut e = a.unit().to_vec();
            for prev in &lifted {
                for (i, x) in prev.iter().enumerate() {
                    e[i] = &e[i] - x;
                }
            }
            lifted.push(e);
            break;
        }
        let mut corner_one = a.unit().to_vec();
        for prev in &lifted {
            for (i, x) in prev.iter().enumerate() {
                corner_one[i] = &corner_one[i] - x;
            }
        }
        let raw = rad.lift.mul_vec(eq);
        let mut e = a.mul_elements(&a.mul_elements(&corner_one, &raw), &corner_one);
        let mut steps = 0;
        loop {
            let e2 = a.mul_elements(&e, &e);
            if e2 == e {
                break;
            }
            steps += 1;
            if steps > 64 {
                return Err(ModuleError::NotSplitCommutative(
                    "idempotent refinement did not converge".into(),
                ));
            }
            // e <- 3e^2 - 2e^3
            let e3 = a.mul_elements(&e2, &e);
            let three = f.from_i64(3);
            let two = f.from_i64(2);
            e = e2
                .iter()
                .zip(&e3)
                .map(|(x2, x3)| &(&three * x2) - &(&two * x3))
                .collect();
        }
        lifted.push(e);
    }
    // Verify: idempotent, orthogonal, sum to one.
    let mut sum = vec![f.zero(); n];
    for e in &lifted {
        if a.mul_elements(e, e) != *e {
            return Err(ModuleError::NotSplitCommutative("lifted element not idempotent".into()));
        }
        for (i, x) in e.iter().enumerate() {
            sum[i] = &sum[i] + x;
        }
    }
    if sum != a.unit() {
        return Err(ModuleError::NotSplitCommutative("idempotents do not sum to 1".into()));
    }
    for i in 0..lifted.len() {
        for j in 0..lifted.len() {
            if i != j && a.mul_elements(&lifted[i], &lifted[j]).iter().any(|x| !x.is_zero()) {
                return Err(ModuleError::NotSplitCommutative("lifted idempotents not orthogonal".into()));
            }
        }
    }
    let mut pims = Vec::new();
    for e in lifted {
        // Basis of Ae: independent columns among b_j * e.
        let cols = Matrix::from_fn(f, n, n, |r, c| {
            a.mul_elements(&a.basis_element(c), &e)[r].clone()
        });
        let basis = cols.image_basis();
        let gen_coords = basis.solve(&e).expect("e lies in Ae");
        let action = (0..n)
            .map(|i| {
                let li = a.left_mult_matrix(&a.basis_element(i));
                basis.solve_matrix(&li.mul(&basis)).expect("Ae is a submodule")
            })
            .collect();
        let module = Module::new_unchecked(a.clone(), action);
        pims.push(Pim { idem: e, basis, gen_coords, module });
    }
    Ok(PimData { pims })
}

/// Primitive orthogonal idempotents of a split commutative semisimple
/// algebra, by repeated eigen-splitting. Roots are searched among rational
/// candidates, roots of unity of the coefficient field, and gcds with
/// x^d - 1; genuinely unreachable factorizations surface as
/// `NotSplitCommutative`.
fn split_commutative_semisimple(q: &AlgebraRef) -> Result<Vec<Vec<FieldElement>>, ModuleError> {
    let f = q.field();
    let dim = q.dim();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let mut rng = StdRng::seed_from_u64(0x53504C49);
    // Block: (basis vectors spanning an ideal, identity element of the ideal).
    let mut todo: Vec<(Vec<Vec<FieldElement>>, Vec<FieldElement>)> =
        vec![((0..dim).map(|i| q.basis_element(i)).collect(), q.unit().to_vec())];
    let mut done: Vec<Vec<FieldElement>> = Vec::new();
    while let Some((block, ident)) = todo.pop() {
        let d = block.len();
        if d == 1 {
            done.push(ident);
            continue;
        }
        let basis_m = Matrix::from_fn(f, dim, d, |r, c| block[c][r].clone());
        let mut candidates: Vec<Vec<FieldElement>> = block.clone();
        for _ in 0..8 {
            let combo: Vec<FieldElement> = {
                let mut v = vec![f.zero(); dim];
                for b in &block {
                    let c = f.sample(&mut rng);
                    for (i, x) in b.iter().enumerate() {
                        v[i] = &v[i] + &(&c * x);
                    }
                }
                v
            };
            candidates.push(combo);
        }
        let mut split = None;
        'cand: for u in &candidates {
            let mu = min_poly_on_block(q, u, &basis_m, &ident)?;
            if poly::degree(&mu) < Some(2) {
                continue;
            }
            // Semisimple commutative: minimal polynomials are squarefree.
            let der = poly::derivative(&mu, f);
            if poly::degree(&poly::gcd(&mu, &der, f)) != Some(0) {
                return Err(ModuleError::NotSplitCommutative(
                    "minimal polynomial not squarefree; quotient not semisimple".into(),
                ));
            }
            if let Some((p1, p2)) = coprime_factor(&mu, f) {
                // Bezout: u1 p1 + u2 p2 = 1; e = (u1 p1)(u) is the idempotent
                // projecting onto the p2-kernel part.
                let (g, u1, _) = poly::ext_gcd(&p1, &p2, f);
                assert_eq!(poly::degree(&g), Some(0));
                let up = poly::mul(&u1, &p1, f);
                let e1 = eval_in_algebra(q, &up, u, &ident);
                let e2: Vec<FieldElement> =
                    ident.iter().zip(&e1).map(|(a, b)| a - b).collect();
                if q.mul_elements(&e1, &e1) != e1 || e1.iter().all(|x| x.is_zero()) || e2.iter().all(|x| x.is_zero()) {
                    continue 'cand;
                }
                split = Some((e1, e2));
                break 'cand;
            }
        }
        match split {
            Some((e1, e2)) => {
                for e in [e1, e2] {
                    let cols = Matrix::from_fn(f, dim, d, |r, c| {
                        q.mul_elements(&e, &block[c])[r].clone()
                    });
                    let sub = cols.image_basis();
                    let vecs: Vec<Vec<FieldElement>> =
                        (0..sub.cols()).map(|c| sub.col_vec(c)).collect();
                    todo.push((vecs, e));
                }
            }
            None => {
                return Err(ModuleError::NotSplitCommutative(format!(
                    "could not split a {d}-dimensional block; quotient may be a field extension"
                )))
            }
        }
    }
    // Deterministic order for reproducible PIM numbering.
    done.sort_by(|a, b| {
        a.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .cmp(&b.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    });
    Ok(done)
}

fn min_poly_on_block(
    q: &AlgebraRef,
    u: &[FieldElement],
    block_basis: &Matrix,
    ident: &[FieldElement],
) -> Result<Vec<FieldElement>, ModuleError> {
    let f = q.field();
    let d = block_basis.cols();
    // Powers of u (as elements of the block) expressed in block coordinates.
    let mut powers: Vec<Vec<FieldElement>> = Vec::new();
    let mut cur = ident.to_vec();
    loop {
        let coords = block_basis
            .solve(&cur)
            .map_err(|_| ModuleError::NotSplitCommutative("element escapes its block".into()))?;
        powers.push(coords);
        let t = powers.len();
        let m = Matrix::from_fn(f, d, t, |r, c| powers[c][r].clone());
        let ker = m.kernel_basis();
        if ker.cols() > 0 {
            let coeffs = ker.col_vec(0);
            let lead = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
            let inv = coeffs[lead].inv().unwrap();
            let mu: Vec<FieldElement> = coeffs[..=lead].iter().map(|c| c * &inv).collect();
            return Ok(mu);
        }
        if t > d {
            return Err(ModuleError::NotSplitCommutative(
                "minimal polynomial search overran the block dimension".into(),
            ));
        }
        cur = q.mul_elements(&cur, u);
    }
}

fn eval_in_algebra(
    q: &AlgebraRef,
    p: &[FieldElement],
    u: &[FieldElement],
    ident: &[FieldElement],
) -> Vec<FieldElement> {
    let f = q.field();
    let mut acc = vec![f.zero(); q.dim()];
    for c in p.iter().rev() {
        acc = q.mul_elements(&acc, u);
        for (i, id) in ident.iter().enumerate() {
            acc[i] = &acc[i] + &(c * id);
        }
    }
    acc
}

/// A nontrivial coprime factorization of a squarefree polynomial that splits
/// over the field, or None if the candidate search fails.
fn coprime_factor(
    mu: &[FieldElement],
    f: FieldDescriptor,
) -> Option<(Vec<FieldElement>, Vec<FieldElement>)> {
    let deg = poly::degree(mu)?;
    // Root candidates.
    let mut cands: Vec<FieldElement> = Vec::new();
    let mut base: Vec<FieldElement> = vec![
        f.zero(),
        f.one(),
        f.from_i64(-1),
        f.from_i64(2),
        f.from_i64(-2),
        f.from_i64(3),
        f.from_i64(-3),
    ];
    if f.characteristic() == 0 {
        base.push(f.from_ratio(1, 2));
        base.push(f.from_ratio(-1, 2));
        base.push(f.from_ratio(1, 3));
        base.push(f.from_ratio(-1, 3));
    }
    match f {
        FieldDescriptor::PrimeField(p) if p <= 4096 => {
            cands.extend((0..p).map(|v| f.from_i64(v as i64)));
        }
        FieldDescriptor::Cyclotomic(n) => {
            let w = f.generator().unwrap();
            for b in &base {
                for j in 0..n {
                    cands.push(b * &w.pow(j as u64));
                }
            }
        }
        _ => cands.extend(base.iter().cloned()),
    }
    for lambda in &cands {
        if poly::eval(mu, lambda, f).is_zero() {
            let lin = vec![-lambda, f.one()];
            let (quot, rem) = poly::divmod(mu, &lin, f);
            debug_assert!(poly::degree(&rem).is_none());
            if poly::degree(&quot) >= Some(1) {
                return Some((lin, quot));
            }
        }
    }
    // gcd with x^d - 1 splits off root-of-unity eigenvalues without naming
    // them individually.
    let dmax = match f {
        FieldDescriptor::Cyclotomic(n) => (2 * n as usize).max(12),
        FieldDescriptor::PrimeField(p) => ((p - 1).min(24)) as usize,
        FieldDescriptor::Rationals => 2,
    };
    for d in 1..=dmax {
        let g = poly::gcd(mu, &poly::unity_minus_one(d, f), f);
        if let Some(dg) = poly::degree(&g) {
            if dg >= 1 && dg < deg {
                let (quot, rem) = poly::divmod(mu, &g, f);
                debug_assert!(poly::degree(&rem).is_none());
                return Some((g, quot));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Submodules, quotients, radical/top/socle of modules
// ---------------------------------------------------------------------------

/// Submodule spanned by the columns of `basis` (must be action-invariant).
pub fn submodule(m: &ModuleRef, basis: &Matrix) -> (ModuleRef, Matrix) {
    let a = m.algebra();
    let action = (0..a.dim())
        .map(|i| {
            basis
                .solve_matrix(&m.action(i).mul(basis))
                .expect("columns span an invariant subspace")
        })
        .collect();
    (Module::new_unchecked(a.clone(), action), basis.clone())
}

/// Quotient by an invariant subspace; returns the projection matrix.
pub fn quotient_module(m: &ModuleRef, sub: &Subspace) -> (ModuleRef, Matrix) {
    let a = m.algebra();
    let f = a.field();
    let q = sub.quotient_dim();
    let amb = m.dim();
    let proj = Matrix::from_fn(f, q, amb, |r, c| {
        sub.quotient_coords(&unit_vec(f, amb, c))[r].clone()
    });
    // Representative of the r-th quotient coordinate: the ambient standard
    // vector at the r-th non-pivot position (those are fixed by reduce).
    let nonpivot: Vec<usize> = (0..amb)
        .filter(|&c| {
            let e = unit_vec(f, amb, c);
            sub.reduce(&e) == e
        })
        .collect();
    assert_eq!(nonpivot.len(), q, "quotient coordinate bookkeeping");
    let action = (0..a.dim())
        .map(|i| {
            Matrix::from_fn(f, q, q, |r, c| {
                let rep = unit_vec(f, amb, nonpivot[c]);
                let img = m.action(i).mul_vec(&rep);
                sub.quotient_coords(&img)[r].clone()
            })
        })
        .collect();
    (Module::new_unchecked(a.clone(), action), proj)
}

/// Span of J * M: with J = sum of A s_t, this is the action closure of the
/// images of the ideal generators.
pub fn module_radical_subspace(m: &ModuleRef) -> Result<Subspace, ModuleError> {
    let rad = algebra_radical(m.algebra())?;
    let mut seed = Vec::new();
    for s in &rad.ideal_generators {
        let act = m.act_element(s);
        let im = act.image_basis();
        for c in 0..im.cols() {
            seed.push(im.col_vec(c));
        }
    }
    Ok(action_closure(m, seed))
}

pub fn radical_of_module(m: &ModuleRef) -> Result<(ModuleRef, Matrix), ModuleError> {
    let sub = module_radical_subspace(m)?;
    let f = m.algebra().field();
    let rows = sub.basis_rows();
    let basis = Matrix::from_fn(f, m.dim(), sub.dim(), |r, c| rows.at(c, r).clone());
    Ok(submodule(m, &basis))
}

pub fn top_of_module(m: &ModuleRef) -> Result<(ModuleRef, Matrix), ModuleError> {
    let sub = module_radical_subspace(m)?;
    Ok(quotient_module(m, &sub))
}

/// soc M = elements killed by the radical.
pub fn socle_of_module(m: &ModuleRef) -> Result<(ModuleRef, Matrix), ModuleError> {
    let rad = algebra_radical(m.algebra())?;
    let f = m.algebra().field();
    if rad.basis.is_empty() {
        let id = Matrix::identity(f, m.dim());
        return Ok(submodule(m, &id));
    }
    let mut stacked: Option<Matrix> = None;
    for v in &rad.basis {
        let act = m.act_element(v);
        stacked = Some(match stacked {
            None => act,
            Some(s) => s.vstack(&act),
        });
    }
    let ker = stacked.unwrap().kernel_basis();
    Ok(submodule(m, &ker))
}

// ---------------------------------------------------------------------------
// Covers
// ---------------------------------------------------------------------------

/// One cyclic projective summand Ae of a cover, with enough data to write
/// Hom(Ae, Y) in closed form and to lift maps through epimorphisms.
#[derive(Debug, Clone)]
pub struct Summand {
    pub offset: usize,
    pub dim: usize,
    /// e as an element of the algebra (the unit for free summands).
    pub idem: Vec<FieldElement>,
    /// Basis of Ae inside A, one column per summand coordinate.
    pub basis_in_algebra: Matrix,
    /// Coordinates of e in that basis.
    pub gen_in_summand: Vec<FieldElement>,
}

#[derive(Debug, Clone)]
pub struct Cover {
    pub module: ModuleRef,
    pub target: ModuleRef,
    /// target.dim x module.dim
    pub epi: Matrix,
    pub summands: Vec<Summand>,
    pub minimal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Minimal,
    Free,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Engine::Minimal => write!(f, "minimal"),
            Engine::Free => write!(f, "free"),
        }
    }
}

fn assemble_cover(
    m: &ModuleRef,
    pieces: Vec<(ModuleRef, Vec<FieldElement>, Matrix, Vec<FieldElement>, Vec<FieldElement>)>,
    minimal: bool,
) -> Cover {
    // pieces: (block module, idem, basis_in_algebra, gen_in_summand, generator image in M)
    let a = m.algebra();
    let f = a.field();
    let mut total = Module::zero(a.clone());
    let mut summands = Vec::new();
    let mut epi_cols: Vec<Vec<FieldElement>> = Vec::new();
    for (block, idem, basis, gen, target_gen) in pieces {
        let offset = total.dim();
        let d = block.dim();
        total = direct_sum(&total, &block);
        for t in 0..d {
            // Column: the action of the t-th basis vector of Ae on the
            // chosen generator image.
            let elt = basis.col_vec(t);
            epi_cols.push(m.act_element(&elt).mul_vec(&target_gen));
        }
        summands.push(Summand {
            offset,
            dim: d,
            idem,
            basis_in_algebra: basis,
            gen_in_summand: gen,
        });
    }
    let epi = Matrix::from_fn(f, m.dim(), total.dim(), |r, c| epi_cols[c][r].clone());
    Cover {
        module: total,
        target: m.clone(),
        epi,
        summands,
        minimal,
    }
}

/// Free cover A^g with g = dim top(M); the epi lifts a basis of the top.
pub fn free_cover(m: &ModuleRef) -> Result<Cover, ModuleError> {
    let a = m.algebra();
    let f = a.field();
    if m.dim() == 0 {
        return Ok(Cover {
            module: Module::zero(a.clone()),
            target: m.clone(),
            epi: Matrix::zero(f, 0, 0),
            summands: Vec::new(),
            minimal: true,
        });
    }
    let sub = module_radical_subspace(m)?;
    let reg = Module::regular(a, true);
    let identity = Matrix::identity(f, a.dim());
    let mut pieces = Vec::new();
    // One free summand per top coordinate, generated by the lift of the
    // corresponding non-pivot ambient standard vector.
    for c in 0..m.dim() {
        let e = unit_vec(f, m.dim(), c);
        if sub.reduce(&e) == e {
            pieces.push((
                reg.clone(),
                a.unit().to_vec(),
                identity.clone(),
                a.unit().to_vec(),
                e,
            ));
        }
    }
    assert_eq!(pieces.len(), sub.quotient_dim(), "one free summand per top coordinate");
    let cover = assemble_cover(m, pieces, false);
    debug_assert_eq!(cover.epi.rank(), m.dim(), "cover must be surjective");
    Ok(cover)
}

/// Minimal cover assembled from PIMs matching the isotypic pieces of
/// top(M). Requires the split-commutative machinery.
pub fn projective_cover(m: &ModuleRef) -> Result<Cover, ModuleError> {
    let a = m.algebra();
    let f = a.field();
    if m.dim() == 0 {
        return Ok(Cover {
            module: Module::zero(a.clone()),
            target: m.clone(),
            epi: Matrix::zero(f, 0, 0),
            summands: Vec::new(),
            minimal: true,
        });
    }
    let pims = pim_data(a)?;
    let sub = module_radical_subspace(m)?;
    let q = sub.quotient_dim();
    let nonpivot: Vec<usize> = (0..m.dim())
        .filter(|&c| {
            let e = unit_vec(f, m.dim(), c);
            sub.reduce(&e) == e
        })
        .collect();
    assert_eq!(nonpivot.len(), q);
    let mut pieces = Vec::new();
    for pim in &pims.pims {
        // Action of e on the top, in quotient coordinates.
        let act = m.act_element(&pim.idem);
        let t_mat = Matrix::from_fn(f, q, q, |r, c| {
            let img = act.mul_vec(&unit_vec(f, m.dim(), nonpivot[c]));
            sub.quotient_coords(&img)[r].clone()
        });
        let im = t_mat.image_basis();
        for c in 0..im.cols() {
            // Lift the top vector and project into the e-part.
            let target: Vec<FieldElement> = im.col_vec(c);
            let mut ambient = vec![f.zero(); m.dim()];
            for (r, &pos) in nonpivot.iter().enumerate() {
                ambient[pos] = target[r].clone();
            }
            let gen_image = act.mul_vec(&ambient);
            pieces.push((
                pim.module.clone(),
                pim.idem.clone(),
                pim.basis.clone(),
                pim.gen_coords.clone(),
                gen_image,
            ));
        }
    }
    let cover = assemble_cover(m, pieces, true);
    assert_eq!(cover.epi.rank(), m.dim(), "minimal cover must be surjective");
    // Minimality certificate: kernel inside rad(P).
    let ker = cover.epi.kernel_basis();
    if ker.cols() > 0 {
        let radp = module_radical_subspace(&cover.module)?;
        for c in 0..ker.cols() {
            if !radp.contains(&ker.col_vec(c)) {
                return Err(ModuleError::NotSplitCommutative(
                    "cover kernel escapes the radical; minimality violated".into(),
                ));
            }
        }
    }
    Ok(cover)
}

/// Cover selection: the minimal engine falls back to the free cover when
/// the split-commutative machinery is unavailable.
pub fn cover(m: &ModuleRef, engine: Engine) -> Result<Cover, ModuleError> {
    match engine {
        Engine::Minimal => match projective_cover(m) {
            Ok(c) => Ok(c),
            Err(ModuleError::NotSplitCommutative(_)) => free_cover(m),
            Err(e) => Err(e),
        },
        Engine::Free => free_cover(m),
    }
}

// ---------------------------------------------------------------------------
// Syzygies
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SyzygyStep {
    pub cover: Cover,
    pub kernel: ModuleRef,
    /// cover.module.dim x kernel.dim inclusion.
    pub inclusion: Matrix,
}

pub fn syzygy_step(m: &ModuleRef, engine: Engine) -> Result<SyzygyStep, ModuleError> {
    let c = cover(m, engine)?;
    let ker = c.epi.kernel_basis();
    let (kernel, inclusion) = if ker.cols() == 0 {
        (Module::zero(m.algebra().clone()), ker)
    } else {
        let (km, incl) = submodule(&c.module, &ker);
        (km, incl)
    };
    Ok(SyzygyStep { cover: c, kernel, inclusion })
}

/// The Heller operator. The free engine strips projective summands from the
/// kernel to keep towers desk-sized; the stable class is unaffected.
pub fn syzygy(m: &ModuleRef, engine: Engine) -> Result<ModuleRef, ModuleError> {
    let step = syzygy_step(m, engine)?;
    match engine {
        Engine::Minimal => Ok(step.kernel),
        Engine::Free => {
            let mut rng = StdRng::seed_from_u64(0x53545249);
            strip_projective_summands(&step.kernel, &mut rng)
        }
    }
}

/// Plain dual as a left module over the opposite algebra; cached and
/// back-linked so the double dual is pointer-identical to the original.
pub fn dual_module(m: &ModuleRef) -> ModuleRef {
    m.dual_cache
        .get_or_init(|| {
            let op = opposite(m.algebra());
            let action = (0..op.dim()).map(|i| m.action(i).transpose()).collect();
            let d = Module::new_unchecked(op, action);
            let _ = d.dual_cache.set(m.clone());
            d
        })
        .clone()
}

/// Inverse Heller operator via the dual: D(Omega_{A^op}(D M)).
pub fn cosyzygy(m: &ModuleRef, engine: Engine) -> Result<ModuleRef, ModuleError> {
    let d = dual_module(m);
    let o = syzygy(&d, engine)?;
    Ok(dual_module(&o))
}

// ---------------------------------------------------------------------------
// Hom spaces
// ---------------------------------------------------------------------------

/// Basis of the space of module maps M -> N, via intersecting the
/// commutation constraints of a generating set of the algebra.
pub fn hom_space(m: &ModuleRef, n: &ModuleRef) -> Vec<Matrix> {
    assert!(same_algebra(m.algebra(), n.algebra()), "mixed algebras");
    let f = m.algebra().field();
    let (dm, dn) = (m.dim(), n.dim());
    if dm == 0 || dn == 0 {
        return Vec::new();
    }
    let gens = m.algebra().generating_set();
    let full = dn * dm;
    // Current solution space, one flattened matrix per column.
    let mut basis: Option<Matrix> = None;
    for &g in gens {
        match basis {
            None => {
                let k = n
                    .action(g)
                    .kronecker(&Matrix::identity(f, dm))
                    .sub(&Matrix::identity(f, dn).kronecker(&m.action(g).transpose()));
                let ker = k.kernel_basis();
                if ker.cols() == 0 {
                    return Vec::new();
                }
                basis = Some(ker);
            }
            Some(b) => {
                let mut images = Matrix::zero(f, full, b.cols());
                for c in 0..b.cols() {
                    let x = Matrix::unflatten(f, dn, dm, &b.col_vec(c));
                    let y = n.action(g).mul(&x).sub(&x.mul(m.action(g)));
                    for (r, v) in y.flatten().into_iter().enumerate() {
                        images.set(r, c, v);
                    }
                }
                let coeff = images.kernel_basis();
                if coeff.cols() == 0 {
                    return Vec::new();
                }
                let nb = b.mul(&coeff);
                basis = Some(nb);
            }
        }
    }
    let b = match basis {
        Some(b) => b,
        // Algebra generated by the unit alone: every linear map intertwines.
        None => Matrix::identity(f, full),
    };
    let out: Vec<Matrix> = (0..b.cols())
        .map(|c| Matrix::unflatten(f, dn, dm, &b.col_vec(c)))
        .collect();
    debug_assert!(out.iter().all(|h| {
        gens.iter()
            .all(|&g| h.mul(m.action(g)) == n.action(g).mul(h))
    }));
    out
}

/// Closed-form basis of Hom(M, A) when a Frobenius functional is available:
/// Hom_A(M, A) = D(M) via theta -> (m -> G^{-1} [theta(b_i m)]_i).
pub fn hom_to_regular(m: &ModuleRef) -> Option<Vec<Matrix>> {
    let a = m.algebra();
    let frob = frobenius_data(a)?;
    let f = a.field();
    let n = a.dim();
    let out = (0..m.dim())
        .map(|r| {
            // theta = r-th coordinate functional.
            let raw = Matrix::from_fn(f, n, m.dim(), |i, s| m.action(i).at(r, s).clone());
            frob.gram_inv.mul(&raw)
        })
        .collect();
    Some(out)
}

/// Evaluate the closed-form hom for a single functional theta at a single
/// vector y: the unique image in A of y under the map associated to theta.
fn hom_to_regular_eval(
    m: &ModuleRef,
    frob: &FrobeniusData,
    theta: &[FieldElement],
    y: &[FieldElement],
) -> Vec<FieldElement> {
    let a = m.algebra();
    let f = a.field();
    let n = a.dim();
    let mut rhs = vec![f.zero(); n];
    for (i, slot) in rhs.iter_mut().enumerate() {
        let img = m.action(i).mul_vec(y);
        let mut acc = f.zero();
        for (t, th) in theta.iter().enumerate() {
            if !th.is_zero() && !img[t].is_zero() {
                acc = &acc + &(th * &img[t]);
            }
        }
        *slot = acc;
    }
    frob.gram_inv.mul_vec(&rhs)
}

/// Basis of Hom(Ae, N) = eN for a cyclic projective summand: each basis
/// vector y of eN yields the map x e -> x y.
pub fn hom_from_summand(s: &Summand, n: &ModuleRef) -> Vec<Matrix> {
    let f = n.algebra().field();
    let act_e = n.act_element(&s.idem);
    let image = act_e.image_basis();
    (0..image.cols())
        .map(|c| {
            let y = image.col_vec(c);
            Matrix::from_fn(f, n.dim(), s.dim, |r, t| {
                let elt = s.basis_in_algebra.col_vec(t);
                n.act_element(&elt).mul_vec(&y)[r].clone()
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Projectivity and stripping
// ---------------------------------------------------------------------------

/// Projectivity test with certificate. With PIM data the minimal cover
/// decides it by dimension count and the certificate is the inverse of the
/// cover epi; otherwise a splitting section of the free cover is sought
/// directly.
pub fn is_projective(m: &ModuleRef) -> Result<(bool, Option<Matrix>), ModuleError> {
    if m.dim() == 0 {
        return Ok((true, Some(Matrix::zero(m.algebra().field(), 0, 0))));
    }
    match projective_cover(m) {
        Ok(c) => {
            if c.module.dim() == m.dim() {
                let section = c.epi.inverse().expect("square surjective epi");
                Ok((true, Some(section)))
            } else {
                Ok((false, None))
            }
        }
        Err(ModuleError::NotSplitCommutative(_)) => {
            let c = free_cover(m)?;
            // Look for a section: a module map s with epi . s = id.
            let homs = match hom_to_regular(m) {
                Some(_) => {
                    // Hom(M, A^g) assembled blockwise from Hom(M, A).
                    let base = hom_to_regular(m).unwrap();
                    let f = m.algebra().field();
                    let blocks = c.summands.len();
                    let mut out = Vec::new();
                    for b in 0..blocks {
                        for h in &base {
                            let mut big = Matrix::zero(f, c.module.dim(), m.dim());
                            for r in 0..h.rows() {
                                for cc in 0..h.cols() {
                                    big.set(c.summands[b].offset + r, cc, h.at(r, cc).clone());
                                }
                            }
                            out.push(big);
                        }
                    }
                    out
                }
                None => hom_space(m, &c.module),
            };
            if homs.is_empty() {
                return Ok((false, None));
            }
            let f = m.algebra().field();
            let d = m.dim();
            let target = Matrix::identity(f, d).flatten();
            let sys = Matrix::from_fn(f, d * d, homs.len(), |r, cc| {
                c.epi.mul(&homs[cc]).flatten()[r].clone()
            });
            match sys.solve(&target) {
                Ok(coeffs) => {
                    let mut section = Matrix::zero(f, c.module.dim(), d);
                    for (h, co) in homs.iter().zip(&coeffs) {
                        if !co.is_zero() {
                            section = section.add(&h.scale(co));
                        }
                    }
                    Ok((true, Some(section)))
                }
                Err(_) => Ok((false, None)),
            }
        }
        Err(e) => Err(e),
    }
}

/// Split off free rank-1 summands by scanning Hom(M, A) for surjections:
/// a surjection onto the regular module always splits.
pub fn strip_free_summands(m: &ModuleRef, rng: &mut StdRng) -> Result<ModuleRef, ModuleError> {
    let mut current = m.clone();
    'outer: loop {
        let a = current.algebra().clone();
        let n = a.dim();
        if current.dim() < n {
            return Ok(current);
        }
        let homs = match hom_to_regular(&current) {
            Some(h) => h,
            None => {
                if n * current.dim() > 4096 {
                    return Ok(current);
                }
                let reg = Module::regular(&a, true);
                hom_space(&current, &reg)
            }
        };
        let mut candidates: Vec<Matrix> = homs.clone();
        let f = a.field();
        for _ in 0..16 {
            let mut combo = Matrix::zero(f, n, current.dim());
            for h in &homs {
                combo = combo.add(&h.scale(&f.sample(rng)));
            }
            candidates.push(combo);
        }
        for cand in candidates {
            if cand.rank() == n {
                let ker = cand.kernel_basis();
                let (sub, _) = submodule(&current, &ker);
                current = sub;
                continue 'outer;
            }
        }
        return Ok(current);
    }
}

/// Split off arbitrary PIM summands. For a candidate generator y of a copy
/// of Ae inside M, a retraction exists iff the identity of End(Ae) is a
/// combination of the composites (R_e . F_theta) . phi_y over functionals
/// theta; the combination is found by one linear solve and the winning
/// functional materializes a single closed-form Hom map.
pub fn strip_projective_summands(
    m: &ModuleRef,
    rng: &mut StdRng,
) -> Result<ModuleRef, ModuleError> {
    let a = m.algebra().clone();
    let pims = match pim_data(&a) {
        Ok(p) => p,
        Err(ModuleError::NotSplitCommutative(_)) => return Ok(m.clone()),
        Err(e) => return Err(e),
    };
    let frob = match frobenius_data(&a) {
        Some(fd) => fd,
        None => return Ok(m.clone()),
    };
    let f = a.field();
    let n = a.dim();
    let mut current = m.clone();
    'outer: loop {
        let md = current.dim();
        if md == 0 {
            return Ok(current);
        }
        for pim in &pims.pims {
            let d = pim.basis.cols();
            if md < d {
                continue;
            }
            let e_im = current.act_element(&pim.idem).image_basis();
            if e_im.cols() == 0 {
                continue;
            }
            let mut ys: Vec<Vec<FieldElement>> =
                (0..e_im.cols().min(3)).map(|c| e_im.col_vec(c)).collect();
            for _ in 0..2 {
                let mut v = vec![f.zero(); md];
                for c in 0..e_im.cols() {
                    let k = f.sample(rng);
                    for (i, x) in e_im.col_vec(c).iter().enumerate() {
                        v[i] = &v[i] + &(&k * x);
                    }
                }
                ys.push(v);
            }
            for y in &ys {
                // phi_y: Ae -> M must be injective for a summand copy.
                let closure = action_closure(&current, vec![y.clone()]);
                if closure.dim() != d {
                    continue;
                }
                // All functional evaluations at once: W[i][r] = (b_i y)_r,
                // V = G^{-1} W, so column r of V is F_{e_r}(y) in A.
                let mut w = Matrix::zero(f, n, md);
                for i in 0..n {
                    let img = current.action(i).mul_vec(y);
                    for (r, v) in img.into_iter().enumerate() {
                        w.set(i, r, v);
                    }
                }
                let v_all = frob.gram_inv.mul(&w);
                // Composite matrices C_r of Ae -> M -> Ae, flattened.
                let pim_acts: Vec<Matrix> = (0..d)
                    .map(|t| pim.module.act_element(&pim.basis.col_vec(t)))
                    .collect();
                let mut comp_cols: Vec<Vec<FieldElement>> = Vec::with_capacity(md);
                for r in 0..md {
                    let ve = a.mul_elements(&v_all.col_vec(r), &pim.idem);
                    let Ok(c_in_pim) = pim.basis.solve(&ve) else {
                        comp_cols.push(vec![f.zero(); d * d]);
                        continue;
                    };
                    let comp = Matrix::from_fn(f, d, d, |row, t| {
                        pim_acts[t].mul_vec(&c_in_pim)[row].clone()
                    });
                    comp_cols.push(comp.flatten());
                }
                // Solve sum_r c_r C_r = id.
                let sys = Matrix::from_fn(f, d * d, md, |rr, cc| comp_cols[cc][rr].clone());
                let id_flat = Matrix::identity(f, d).flatten();
                let Ok(coeffs) = sys.solve(&id_flat) else { continue };
                // theta* = sum c_r e_r gives the retraction in one map.
                let psi = {
                    let mut raw = Matrix::zero(f, n, md);
                    for i in 0..n {
                        for s in 0..md {
                            // theta*(b_i e_s) = sum_r c_r (b_i e_s)_r
                            let col = current.action(i).col_vec(s);
                            let mut acc = f.zero();
                            for (r, c) in coeffs.iter().enumerate() {
                                if !c.is_zero() && !col[r].is_zero() {
                                    acc = &acc + &(c * &col[r]);
                                }
                            }
                            raw.set(i, s, acc);
                        }
                    }
                    let full = frob.gram_inv.mul(&raw);
                    // Cut to Ae and express in PIM coordinates.
                    let mut psi = Matrix::zero(f, d, md);
                    for s in 0..md {
                        let ve = a.mul_elements(&full.col_vec(s), &pim.idem);
                        let cc = pim.basis.solve(&ve).expect("lands in Ae");
                        for (r, v) in cc.into_iter().enumerate() {
                            psi.set(r, s, v);
                        }
                    }
                    psi
                };
                // Certify the retraction against phi_y exactly.
                let phi = Matrix::from_fn(f, md, d, |r, t| {
                    let u = pim.basis.col_vec(t);
                    current.act_element(&u).mul_vec(y)[r].clone()
                });
                let comp = psi.mul(&phi);
                assert_eq!(comp, Matrix::identity(f, d), "retraction certificate");
                let ker = psi.kernel_basis();
                assert_eq!(ker.cols(), md - d);
                let (sub, _) = submodule(&current, &ker);
                current = sub;
                continue 'outer;
            }
        }
        return Ok(current);
    }
}

// ---------------------------------------------------------------------------
// Stable Hom
// ---------------------------------------------------------------------------

/// Hom(M, N) together with the subspace of maps factoring through a
/// projective, and coset representatives for the quotient.
#[derive(Debug)]
pub struct StableHom {
    pub hom: Vec<Matrix>,
    /// Subspace of coordinates (w.r.t. `hom`) spanned by projective factors.
    pub phom: Subspace,
    pub dim: usize,
    pub reps: Vec<Matrix>,
}

impl StableHom {
    /// Coordinates of the stable class of a map, in the quotient basis.
    pub fn class_coords(&self, map: &Matrix) -> Option<Vec<FieldElement>> {
        if self.hom.is_empty() {
            return if map.is_zero() { Some(Vec::new()) } else { None };
        }
        let f = map.field();
        let full = self.hom[0].rows() * self.hom[0].cols();
        let hmat = Matrix::from_fn(f, full, self.hom.len(), |r, c| self.hom[c].flatten()[r].clone());
        let coords = hmat.solve(&map.flatten()).ok()?;
        Some(self.phom.quotient_coords(&coords))
    }

    pub fn is_stably_zero(&self, map: &Matrix) -> bool {
        match self.class_coords(map) {
            Some(c) => c.iter().all(|x| x.is_zero()),
            None => false,
        }
    }
}

/// stable Hom(M, N): Hom modulo maps factoring through the chosen
/// projective cover of N (equivalently through any projective).
pub fn stable_hom(m: &ModuleRef, n: &ModuleRef) -> Result<StableHom, ModuleError> {
    let f = m.algebra().field();
    let hom = hom_space(m, n);
    if hom.is_empty() {
        return Ok(StableHom {
            hom,
            phom: Subspace::span(f, 0, &[]),
            dim: 0,
            reps: Vec::new(),
        });
    }
    let c = cover(n, Engine::Minimal)?;
    let mut phom_maps: Vec<Matrix> = Vec::new();
    let frob = frobenius_data(m.algebra());
    for s in &c.summands {
        // Hom(M, Ae) for this summand, then compose with the epi block.
        let epi_block = c.epi.select_columns(&(s.offset..s.offset + s.dim).collect::<Vec<_>>());
        let maps_into_summand: Vec<Matrix> = match &frob {
            Some(fd) => {
                // R_e . F_theta for each coordinate functional theta.
                (0..m.dim())
                    .map(|r| {
                        let theta = unit_vec(f, m.dim(), r);
                        let mut mat = Matrix::zero(f, s.dim, m.dim());
                        for col in 0..m.dim() {
                            let v = hom_to_regular_eval(m, fd, &theta, &unit_vec(f, m.dim(), col));
                            let ve = m.algebra().mul_elements(&v, &s.idem);
                            let cc = s.basis_in_algebra.solve(&ve).expect("lands in Ae");
                            for (rr, x) in cc.into_iter().enumerate() {
                                mat.set(rr, col, x);
                            }
                        }
                        mat
                    })
                    .collect()
            }
            None => {
                let (blk, _) = submodule_from_summand(m.algebra(), s);
                hom_space(m, &blk)
            }
        };
        for h in maps_into_summand {
            phom_maps.push(epi_block.mul(&h));
        }
    }
    // Express the projective factors in hom coordinates.
    let full = n.dim() * m.dim();
    let hmat = Matrix::from_fn(f, full, hom.len(), |r, c| hom[c].flatten()[r].clone());
    let mut coord_vecs = Vec::new();
    for pm in &phom_maps {
        let coords = hmat.solve(&pm.flatten()).expect("projective factors are module maps");
        coord_vecs.push(coords);
    }
    let phom = Subspace::span(f, hom.len(), &coord_vecs);
    let dim = phom.quotient_dim();
    let mut reps = Vec::new();
    for cidx in 0..hom.len() {
        let e = unit_vec(f, hom.len(), cidx);
        if phom.reduce(&e) == e {
            reps.push(hom[cidx].clone());
        }
    }
    assert_eq!(reps.len(), dim, "one representative per free coordinate");
    Ok(StableHom { hom, phom, dim, reps })
}

fn submodule_from_summand(a: &AlgebraRef, s: &Summand) -> (ModuleRef, Matrix) {
    let action = (0..a.dim())
        .map(|i| {
            let li = a.left_mult_matrix(&a.basis_element(i));
            s.basis_in_algebra
                .solve_matrix(&li.mul(&s.basis_in_algebra))
                .expect("Ae is invariant")
        })
        .collect();
    (Module::new_unchecked(a.clone(), action), s.basis_in_algebra.clone())
}

// ---------------------------------------------------------------------------
// Direct sums and isomorphism testing
// ---------------------------------------------------------------------------

pub fn direct_sum(m: &ModuleRef, n: &ModuleRef) -> ModuleRef {
    assert!(same_algebra(m.algebra(), n.algebra()), "mixed algebras");
    let a = m.algebra();
    let f = a.field();
    let (dm, dn) = (m.dim(), n.dim());
    let action = (0..a.dim())
        .map(|i| {
            Matrix::from_fn(f, dm + dn, dm + dn, |r, c| {
                if r < dm && c < dm {
                    m.action(i).at(r, c).clone()
                } else if r >= dm && c >= dm {
                    n.action(i).at(r - dm, c - dm).clone()
                } else {
                    f.zero()
                }
            })
        })
        .collect();
    Module::new_unchecked(a.clone(), action)
}

#[derive(Debug, Clone)]
pub enum IsoResult {
    Isomorphic(Matrix),
    NotIsomorphic(String),
    Undecided { tries: usize },
}

impl IsoResult {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoResult::Isomorphic(_))
    }
}

/// Isomorphism search with certificate: scan the Hom basis, then bounded
/// seeded random combinations. Definite negatives come from dimension or
/// Hom-space obstructions, everything else is reported honestly as
/// undecided.
pub fn modules_isomorphic(m: &ModuleRef, n: &ModuleRef, seed: u64) -> IsoResult {
    if m.dim() != n.dim() {
        return IsoResult::NotIsomorphic("dimensions differ".into());
    }
    if m.dim() == 0 {
        return IsoResult::Isomorphic(Matrix::zero(m.algebra().field(), 0, 0));
    }
    let hom = hom_space(m, n);
    if hom.is_empty() {
        return IsoResult::NotIsomorphic("Hom space is zero".into());
    }
    for h in &hom {
        if h.rank() == m.dim() {
            return IsoResult::Isomorphic(h.clone());
        }
    }
    let f = m.algebra().field();
    let mut rng = StdRng::seed_from_u64(seed);
    // Over a tiny prime field, enumerate every combination before giving up.
    if let FieldDescriptor::PrimeField(p) = f {
        let total = (p as u128).checked_pow(hom.len() as u32).unwrap_or(u128::MAX);
        if total <= 4096 {
            let mut idx = vec![0u64; hom.len()];
            loop {
                let mut combo = Matrix::zero(f, n.dim(), m.dim());
                for (h, &k) in hom.iter().zip(&idx) {
                    if k != 0 {
                        combo = combo.add(&h.scale(&f.from_i64(k as i64)));
                    }
                }
                if combo.rank() == m.dim() {
                    return IsoResult::Isomorphic(combo);
                }
                let mut carry = 0;
                loop {
                    if carry == idx.len() {
                        return IsoResult::NotIsomorphic(
                            "no invertible intertwiner exists (exhaustive search)".into(),
                        );
                    }
                    idx[carry] += 1;
                    if idx[carry] == p {
                        idx[carry] = 0;
                        carry += 1;
                    } else {
                        break;
                    }
                }
            }
        }
    }
    let tries = 64;
    for _ in 0..tries {
        let mut combo = Matrix::zero(f, n.dim(), m.dim());
        for h in &hom {
            combo = combo.add(&h.scale(&f.sample(&mut rng)));
        }
        if combo.rank() == m.dim() {
            return IsoResult::Isomorphic(combo);
        }
    }
    IsoResult::Undecided { tries }
}

// ---------------------------------------------------------------------------
// Map functors: Omega and its inverse on morphisms
// ---------------------------------------------------------------------------

/// Lift phi: X -> Y through covers: h: P_X -> P_Y with epi_Y h = phi epi_X,
/// assembled per cyclic summand by solving for the image of each generator.
pub fn lift_through_covers(phi: &Matrix, cx: &Cover, cy: &Cover) -> Matrix {
    let a = cx.target.algebra();
    let f = a.field();
    let (px, py) = (&cx.module, &cy.module);
    let mut h = Matrix::zero(f, py.dim(), px.dim());
    for s in &cx.summands {
        // Generator of this summand inside P_X.
        let mut gen = vec![f.zero(); px.dim()];
        for (r, v) in s.gen_in_summand.iter().enumerate() {
            gen[s.offset + r] = v.clone();
        }
        let w = phi.mul_vec(&cy_target_coords(&cx.epi, &gen));
        // Solve epi_Y(y) = w with y in the e-part of P_Y.
        let act_e = py.act_element(&s.idem);
        let sys = cy.epi.vstack(&act_e.sub(&Matrix::identity(f, py.dim())));
        let mut rhs = w.clone();
        rhs.extend(vec![f.zero(); py.dim()]);
        let y = sys.solve(&rhs).expect("comparison lift exists");
        // Columns: h(embed(u_t)) = u_t . y.
        for t in 0..s.dim {
            let u = s.basis_in_algebra.col_vec(t);
            let img = py.act_element(&u).mul_vec(&y);
            for (r, v) in img.into_iter().enumerate() {
                h.set(r, s.offset + t, v);
            }
        }
    }
    debug_assert_eq!(cy.epi.mul(&h), phi.mul(&cx.epi));
    h
}

fn cy_target_coords(epi: &Matrix, gen: &[FieldElement]) -> Vec<FieldElement> {
    epi.mul_vec(gen)
}

/// Omega as a functor on maps: restrict the cover lift to kernels.
pub fn omega_map(phi: &Matrix, sx: &SyzygyStep, sy: &SyzygyStep) -> Matrix {
    let h = lift_through_covers(phi, &sx.cover, &sy.cover);
    sy.inclusion
        .solve_matrix(&h.mul(&sx.inclusion))
        .expect("lift preserves kernels")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    fn dual_numbers() -> AlgebraRef {
        let f = q();
        let e = |i: usize| vec![(i, f.one())];
        crate::algebra::Algebra::new(
            f,
            vec!["1".into(), "t".into()],
            vec![f.one(), f.zero()],
            vec![vec![e(0), e(1)], vec![e(1), vec![]]],
        )
        .unwrap()
    }

    #[test]
    fn radical_of_dual_numbers() {
        let a = dual_numbers();
        let rad = algebra_radical(&a).unwrap();
        assert_eq!(rad.basis.len(), 1);
        assert_eq!(rad.basis[0], vec![q().zero(), q().one()]);
        assert_eq!(rad.nilpotency, 2);
        assert_eq!(rad.quotient.dim(), 1);
    }

    #[test]
    fn trivial_module_and_syzygy_over_dual_numbers() {
        let a = dual_numbers();
        // k with t acting by 0.
        let k = Module::new(
            a.clone(),
            vec![Matrix::identity(q(), 1), Matrix::zero(q(), 1, 1)],
        )
        .unwrap();
        let (proj, _) = is_projective(&k).unwrap();
        assert!(!proj);
        let s = syzygy(&k, Engine::Minimal).unwrap();
        assert_eq!(s.dim(), 1);
        // Periodicity: repeated syzygies all have dimension 1.
        let s2 = syzygy(&s, Engine::Minimal).unwrap();
        assert_eq!(s2.dim(), 1);
        let reg = Module::regular(&a, true);
        let (projreg, cert) = is_projective(&reg).unwrap();
        assert!(projreg);
        assert!(cert.is_some());
    }

    #[test]
    fn stable_hom_k_k_over_dual_numbers() {
        let a = dual_numbers();
        let k = Module::new(
            a.clone(),
            vec![Matrix::identity(q(), 1), Matrix::zero(q(), 1, 1)],
        )
        .unwrap();
        let sh = stable_hom(&k, &k).unwrap();
        assert_eq!(sh.dim, 1);
        let reg = Module::regular(&a, true);
        let sh2 = stable_hom(&reg, &k).unwrap();
        assert_eq!(sh2.dim, 0, "projective source has zero stable Hom");
    }

    #[test]
    fn strip_recovers_summand() {
        let a = dual_numbers();
        let k = Module::new(
            a.clone(),
            vec![Matrix::identity(q(), 1), Matrix::zero(q(), 1, 1)],
        )
        .unwrap();
        let reg = Module::regular(&a, true);
        let sum = direct_sum(&reg, &k);
        let mut rng = StdRng::seed_from_u64(7);
        let stripped = strip_free_summands(&sum, &mut rng).unwrap();
        assert_eq!(stripped.dim(), 1);
        let sh = stable_hom(&stripped, &k).unwrap();
        assert_eq!(sh.dim, 1);
    }

    #[test]
    fn cosyzygy_inverts_syzygy_stably() {
        let a = dual_numbers();
        let k = Module::new(
            a.clone(),
            vec![Matrix::identity(q(), 1), Matrix::zero(q(), 1, 1)],
        )
        .unwrap();
        let o = syzygy(&k, Engine::Minimal).unwrap();
        let back = cosyzygy(&o, Engine::Minimal).unwrap();
        match modules_isomorphic(&k, &back, 11) {
            IsoResult::Isomorphic(_) => {}
            other => panic!("expected isomorphism, got {other:?}"),
        }
    }

    #[test]
    fn double_dual_is_pointer_identical() {
        let a = dual_numbers();
        let reg = Module::regular(&a, true);
        let dd = dual_module(&dual_module(&reg));
        assert!(Arc::ptr_eq(&reg, &dd));
    }
}
