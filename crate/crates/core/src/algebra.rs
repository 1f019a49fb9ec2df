//! Finite dimensional associative unital algebras presented by a basis and
//! structure constants, with the opposite, tensor and enveloping
//! constructions layered on top.
//!
//! Structure constants are stored sparsely per basis pair: every bundled
//! algebra is monomial-like, so a product of basis elements usually has a
//! single term.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use once_cell::sync::OnceCell;

use crate::field::{FieldDescriptor, FieldElement};
use crate::linalg::{Matrix, Subspace};
use crate::module::{FrobeniusData, ModuleError, PimData, RadicalData};

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operands belong to algebras over different fields")]
    MixedFields,
    #[error("structure table has wrong shape: {0}")]
    BadShape(String),
}

/// Sparse coordinate vector: (basis index, coefficient), sorted by index,
/// no zero coefficients.
pub type SparseVec = Vec<(usize, FieldElement)>;

fn sparse_normalize(mut v: SparseVec) -> SparseVec {
    v.retain(|(_, c)| !c.is_zero());
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, acc)) if *j == i => {
                *acc = &*acc + &c;
            }
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

#[allow(dead_code)]
fn sparse_to_dense(field: FieldDescriptor, dim: usize, v: &SparseVec) -> Vec<FieldElement> {
    let mut out = vec![field.zero(); dim];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

#[derive(Debug)]
pub struct Algebra {
    field: FieldDescriptor,
    dim: usize,
    labels: Vec<String>,
    unit: Vec<FieldElement>,
    /// mult[i][j] = b_i * b_j.
    mult: Vec<Vec<SparseVec>>,
    id: u64,
    // Lazily computed structural data, filled in by the module layer.
    generators: OnceCell<Vec<usize>>,
    pub(crate) opposite_cache: OnceCell<AlgebraRef>,
    pub(crate) enveloping_cache: OnceCell<AlgebraRef>,
    pub(crate) radical_cache: OnceCell<Result<Arc<RadicalData>, ModuleError>>,
    pub(crate) pim_cache: OnceCell<Result<Arc<PimData>, ModuleError>>,
    pub(crate) frobenius_cache: OnceCell<Option<Arc<FrobeniusData>>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.labels == other.labels
            && self.unit == other.unit
            && self.mult == other.mult
    }
}

pub type AlgebraRef = Arc<Algebra>;

/// One axiom violation with its witnessing basis indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    UnitLeft { i: usize },
    UnitRight { i: usize },
    Associativity { i: usize, j: usize, k: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UnitLeft { i } => write!(f, "unit law fails on the left of basis element {i}"),
            Violation::UnitRight { i } => write!(f, "unit law fails on the right of basis element {i}"),
            Violation::Associativity { i, j, k } => {
                write!(f, "(b{i} b{j}) b{k} != b{i} (b{j} b{k})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

impl Algebra {
    pub fn new(
        field: FieldDescriptor,
        labels: Vec<String>,
        unit: Vec<FieldElement>,
        mult: Vec<Vec<SparseVec>>,
    ) -> Result<AlgebraRef, AlgebraError> {
        let dim = labels.len();
        if unit.len() != dim {
            return Err(AlgebraError::BadShape(format!(
                "unit vector has length {}, expected {dim}",
                unit.len()
            )));
        }
        if mult.len() != dim || mult.iter().any(|row| row.len() != dim) {
            return Err(AlgebraError::BadShape("mult table is not dim x dim".into()));
        }
        for c in unit.iter().chain(mult.iter().flatten().flat_map(|v| v.iter().map(|(_, c)| c))) {
            if c.field() != field {
                return Err(AlgebraError::MixedFields);
            }
        }
        let mult = mult
            .into_iter()
            .map(|row| row.into_iter().map(sparse_normalize).collect())
            .collect();
        Ok(Arc::new(Algebra {
            field,
            dim,
            labels,
            unit,
            mult,
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            generators: OnceCell::new(),
            opposite_cache: OnceCell::new(),
            enveloping_cache: OnceCell::new(),
            radical_cache: OnceCell::new(),
            pim_cache: OnceCell::new(),
            frobenius_cache: OnceCell::new(),
        }))
    }

    /// Stable per-instance identity used as a cache key.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[FieldElement] {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    pub fn basis_element(&self, i: usize) -> Vec<FieldElement> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    /// Product of two coordinate vectors.
    pub fn mul_elements(&self, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(a.len(), self.dim);
        assert_eq!(b.len(), self.dim);
        let mut out = vec![self.field.zero(); self.dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let scale = ai * bj;
                for (k, c) in &self.mult[i][j] {
                    out[*k] = &out[*k] + &(&scale * c);
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by the element with these coordinates.
    pub fn left_mult_matrix(&self, a: &[FieldElement]) -> Matrix {
        let mut m = Matrix::zero(self.field, self.dim, self.dim);
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, c) in &self.mult[i][j] {
                    m.set(*k, j, m.at(*k, j) + &(ai * c));
                }
            }
        }
        m
    }

    pub fn right_mult_matrix(&self, a: &[FieldElement]) -> Matrix {
        let mut m = Matrix::zero(self.field, self.dim, self.dim);
        for (j, aj) in a.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            for i in 0..self.dim {
                for (k, c) in &self.mult[i][j] {
                    m.set(*k, i, m.at(*k, i) + &(aj * c));
                }
            }
        }
        m
    }

    /// Trace of left multiplication by each basis element; the associative
    /// trace form is B(b_i, b_j) = tr L_{b_i b_j}.
    pub fn trace_vector(&self) -> Vec<FieldElement> {
        (0..self.dim)
            .map(|k| {
                let mut t = self.field.zero();
                for j in 0..self.dim {
                    for (l, c) in &self.mult[k][j] {
                        if *l == j {
                            t = &t + c;
                        }
                    }
                }
                t
            })
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..i {
                if self.mult[i][j] != self.mult[j][i] {
                    return false;
                }
            }
        }
        true
    }

    /// A small unital generating set, computed greedily and cached. Hom
    /// spaces and module checks only need to look at these indices.
    pub fn generating_set(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let mut gens: Vec<usize> = Vec::new();
            let mut span_vectors: Vec<Vec<FieldElement>> = vec![self.unit.clone()];
            let mut span = Subspace::span(self.field, self.dim, &span_vectors);
            while span.dim() < self.dim {
                let next = (0..self.dim)
                    .find(|&i| !span.contains(&self.basis_element(i)))
                    .expect("span is proper, so some basis element is missing");
                gens.push(next);
                // Close under left multiplication by all generators.
                let mut queue: Vec<Vec<FieldElement>> = span_vectors.clone();
                while let Some(v) = queue.pop() {
                    for &g in &gens {
                        let gv = self.mul_elements(&self.basis_element(g), &v);
                        if !span.contains(&gv) {
                            span_vectors.push(gv.clone());
                            span = Subspace::span(self.field, self.dim, &span_vectors);
                            queue.push(gv);
                        }
                    }
                }
            }
            gens
        })
    }

    /// Full axiom check over every basis triple; violations are reported
    /// with their witnesses rather than raised.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for i in 0..self.dim {
            let bi = self.basis_element(i);
            if self.mul_elements(&self.unit, &bi) != bi {
                report.violations.push(Violation::UnitLeft { i }.to_string());
            }
            if self.mul_elements(&bi, &self.unit) != bi {
                report.violations.push(Violation::UnitRight { i }.to_string());
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = &self.mult[i][j];
                for k in 0..self.dim {
                    // (b_i b_j) b_k vs b_i (b_j b_k), accumulated sparsely.
                    let mut lhs = vec![self.field.zero(); self.dim];
                    for (r, c) in ij {
                        for (s, d) in &self.mult[*r][k] {
                            lhs[*s] = &lhs[*s] + &(c * d);
                        }
                    }
                    let mut rhs = vec![self.field.zero(); self.dim];
                    for (r, c) in &self.mult[j][k] {
                        for (s, d) in &self.mult[i][*r] {
                            rhs[*s] = &rhs[*s] + &(c * d);
                        }
                    }
                    if lhs != rhs {
                        report
                            .violations
                            .push(Violation::Associativity { i, j, k }.to_string());
                    }
                }
            }
        }
        report
    }
}

/// Structure constants transposed in the two lower indices. Labels toggle
/// an `^op` tag so that the double opposite is identical to the original.
/// The result is cached and back-linked, so `opposite(&opposite(a))` is
/// pointer-equal to `a`.
pub fn opposite(a: &AlgebraRef) -> AlgebraRef {
    a.opposite_cache
        .get_or_init(|| {
            let labels = a
                .labels
                .iter()
                .map(|l| match l.strip_suffix("^op") {
                    Some(base) => base.to_string(),
                    None => format!("{l}^op"),
                })
                .collect();
            let mult = (0..a.dim)
                .map(|i| (0..a.dim).map(|j| a.mult[j][i].clone()).collect())
                .collect();
            let op = Algebra::new(a.field, labels, a.unit.clone(), mult).expect("shape preserved");
            let _ = op.opposite_cache.set(a.clone());
            if let Some(frob) = a.frobenius_cache.get() {
                let _ = op.frobenius_cache.set(frob.as_ref().map(|d| {
                    Arc::new(crate::module::FrobeniusData::build_unchecked(
                        &op,
                        d.functional.clone(),
                    ))
                }));
            }
            op
        })
        .clone()
}

/// Tensor product algebra with the row-major basis order
/// (i, j) -> i * dim(b) + j and componentwise multiplication.
pub fn tensor_algebra(a: &Algebra, b: &Algebra) -> Result<AlgebraRef, AlgebraError> {
    if a.field != b.field {
        return Err(AlgebraError::MixedFields);
    }
    let dim = a.dim * b.dim;
    let flat = |i: usize, j: usize| i * b.dim + j;
    let mut labels = Vec::with_capacity(dim);
    for i in 0..a.dim {
        for j in 0..b.dim {
            labels.push(format!("{}⊗{}", a.labels[i], b.labels[j]));
        }
    }
    let mut unit = vec![a.field.zero(); dim];
    for (i, ua) in a.unit.iter().enumerate() {
        if ua.is_zero() {
            continue;
        }
        for (j, ub) in b.unit.iter().enumerate() {
            if !ub.is_zero() {
                unit[flat(i, j)] = ua * ub;
            }
        }
    }
    let mut mult = vec![vec![SparseVec::new(); dim]; dim];
    for i1 in 0..a.dim {
        for j1 in 0..b.dim {
            for i2 in 0..a.dim {
                for j2 in 0..b.dim {
                    let pa = &a.mult[i1][i2];
                    let pb = &b.mult[j1][j2];
                    let mut entry = SparseVec::with_capacity(pa.len() * pb.len());
                    for (r, c) in pa {
                        for (s, d) in pb {
                            entry.push((flat(*r, *s), c * d));
                        }
                    }
                    mult[flat(i1, j1)][flat(i2, j2)] = sparse_normalize(entry);
                }
            }
        }
    }
    Algebra::new(a.field, labels, unit, mult)
}

/// The enveloping algebra A tensor A^op; bimodules over A are left modules
/// over this. Cached per algebra, and a Frobenius functional on A induces
/// one on the enveloping algebra.
pub fn enveloping(a: &AlgebraRef) -> AlgebraRef {
    a.enveloping_cache
        .get_or_init(|| {
            let op = opposite(a);
            let e = tensor_algebra(a, &op).expect("same field");
            if let Some(Some(frob)) = a.frobenius_cache.get() {
                let lambda = &frob.functional;
                let mut le = Vec::with_capacity(a.dim * a.dim);
                for li in lambda.iter() {
                    for lj in lambda.iter() {
                        le.push(li * lj);
                    }
                }
                let _ = e
                    .frobenius_cache
                    .set(Some(Arc::new(crate::module::FrobeniusData::build_unchecked(&e, le))));
            }
            e
        })
        .clone()
}

/// An element tagged with its algebra, for call sites where raw coordinate
/// vectors get unreadable.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub algebra: AlgebraRef,
    pub coords: Vec<FieldElement>,
}

impl AlgebraElement {
    pub fn new(algebra: AlgebraRef, coords: Vec<FieldElement>) -> AlgebraElement {
        assert_eq!(coords.len(), algebra.dim());
        AlgebraElement { algebra, coords }
    }

    pub fn basis(algebra: AlgebraRef, i: usize) -> AlgebraElement {
        let coords = algebra.basis_element(i);
        AlgebraElement { algebra, coords }
    }

    pub fn unit(algebra: AlgebraRef) -> AlgebraElement {
        let coords = algebra.unit().to_vec();
        AlgebraElement { algebra, coords }
    }

    pub fn mul(&self, rhs: &AlgebraElement) -> AlgebraElement {
        assert!(Arc::ptr_eq(&self.algebra, &rhs.algebra) || *self.algebra == *rhs.algebra);
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.algebra.mul_elements(&self.coords, &rhs.coords),
        }
    }

    pub fn add(&self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn scale(&self, k: &FieldElement) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().map(|x| x * k).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
}

pub(crate) fn dense_from_sparse(a: &Algebra, v: &SparseVec) -> Vec<FieldElement> {
    sparse_to_dense(a.field, a.dim, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    /// Q[t]/(t^2) with basis {1, t}.
    fn dual_numbers() -> AlgebraRef {
        let f = q();
        let e = |i: usize| vec![(i, f.one())];
        let mult = vec![
            vec![e(0), e(1)],
            vec![e(1), vec![]],
        ];
        Algebra::new(
            f,
            vec!["1".into(), "t".into()],
            vec![f.one(), f.zero()],
            mult,
        )
        .unwrap()
    }

    #[test]
    fn dual_numbers_is_valid() {
        assert!(dual_numbers().validate().is_valid());
    }

    #[test]
    fn broken_associativity_is_reported_with_witness() {
        let f = q();
        let e = |i: usize| vec![(i, f.one())];
        // t * t = 1 but 1 stays the unit: (t t) t = t while t (t t) = t, fine;
        // instead break it asymmetrically: t * t = t on one side order.
        let mult = vec![
            vec![e(0), e(1)],
            vec![vec![], e(0)], // t*1 = 0 breaks the unit law and associativity
        ];
        let a = Algebra::new(
            f,
            vec!["1".into(), "t".into()],
            vec![f.one(), f.zero()],
            mult,
        )
        .unwrap();
        let report = a.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("unit law")));
    }

    #[test]
    fn opposite_is_involutive_and_preserves_commutative_tables() {
        let a = dual_numbers();
        let op = opposite(&a);
        // Commutative algebra: structure tensor unchanged.
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(op.basis_product(i, j), a.basis_product(i, j));
            }
        }
        assert_eq!(*opposite(&op), *a);
        assert!(op.validate().is_valid());
    }

    #[test]
    fn tensor_with_trivial_algebra() {
        let f = q();
        let triv = Algebra::new(f, vec!["1".into()], vec![f.one()], vec![vec![vec![(0, f.one())]]])
            .unwrap();
        let a = dual_numbers();
        let t = tensor_algebra(&a, &triv).unwrap();
        assert_eq!(t.dim(), 2);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t.basis_product(i, j), a.basis_product(i, j));
            }
        }
        assert_eq!(t.unit(), a.unit());
    }

    #[test]
    fn enveloping_dimension_and_validity() {
        let a = dual_numbers();
        let e = enveloping(&a);
        assert_eq!(e.dim(), 4);
        assert!(e.validate().is_valid());
        // unit of A tensor A^op is 1 tensor 1
        let mut expected = vec![q().zero(); 4];
        expected[0] = q().one();
        assert_eq!(e.unit(), &expected[..]);
    }

    #[test]
    fn tensor_is_associative_under_flattening() {
        let a = dual_numbers();
        let ab = tensor_algebra(&a, &a).unwrap();
        let left = tensor_algebra(&ab, &a).unwrap();
        let bc = tensor_algebra(&a, &a).unwrap();
        let right = tensor_algebra(&a, &bc).unwrap();
        // (i*2+j)*2+k = i*4+(j*2+k): identical flattening, identical tensors.
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(left.basis_product(i, j), right.basis_product(i, j));
            }
        }
    }

    #[test]
    fn generating_set_of_dual_numbers() {
        let a = dual_numbers();
        assert_eq!(a.generating_set(), &[1]);
    }

    #[test]
    fn mult_matrices_agree_with_products() {
        let a = dual_numbers();
        let t = a.basis_element(1);
        let l = a.left_mult_matrix(&t);
        assert_eq!(l.mul_vec(&a.basis_element(0)), t);
        assert_eq!(l.mul_vec(&t), vec![q().zero(), q().zero()]);
        let r = a.right_mult_matrix(&t);
        assert_eq!(r.mul_vec(&a.basis_element(0)), t);
    }
}
