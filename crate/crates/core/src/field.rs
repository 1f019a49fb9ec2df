//! Exact scalar arithmetic over the supported coefficient fields: the
//! rationals, prime fields `F_p`, and cyclotomic extensions `Q(w)` with
//! `w` a primitive N-th root of unity.
//!
//! Every element is kept in a unique canonical form, so `==` is semantic
//! equality and no epsilon comparisons exist anywhere downstream.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use once_cell::sync::Lazy;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclotomic order must be >= 1")]
    BadCyclotomicOrder,
    #[error("no primitive root of unity of order {order} in {field}: {reason}")]
    NoPrimitiveRoot {
        field: String,
        order: u32,
        reason: String,
    },
    #[error("cannot parse scalar {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// One of the supported exact coefficient fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    /// `F_p` for a prime `p`.
    PrimeField(u64),
    /// `Q(w)` where `w` is a root of the N-th cyclotomic polynomial.
    Cyclotomic(u32),
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::PrimeField(p) => write!(f, "F_{p}"),
            FieldDescriptor::Cyclotomic(n) => write!(f, "Q(zeta_{n})"),
        }
    }
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor::Rationals
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime_u64(p) {
            Ok(FieldDescriptor::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn cyclotomic(n: u32) -> Result<Self, FieldError> {
        if n >= 1 {
            Ok(FieldDescriptor::Cyclotomic(n))
        } else {
            Err(FieldError::BadCyclotomicOrder)
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::PrimeField(p) => *p,
            _ => 0,
        }
    }

    /// Dimension over the prime field: 1 except for cyclotomic fields,
    /// where it is Euler's totient of N.
    pub fn extension_degree(&self) -> usize {
        match self {
            FieldDescriptor::Cyclotomic(n) => euler_totient(*n) as usize,
            _ => 1,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            FieldDescriptor::Rationals => FieldElement {
                desc: *self,
                payload: Payload::Rat(BigRational::zero()),
            },
            FieldDescriptor::PrimeField(_) => FieldElement {
                desc: *self,
                payload: Payload::Mod(0),
            },
            FieldDescriptor::Cyclotomic(n) => FieldElement {
                desc: *self,
                payload: Payload::Cyc(vec![BigRational::zero(); euler_totient(*n) as usize]),
            },
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match self {
            FieldDescriptor::Rationals => FieldElement {
                desc: *self,
                payload: Payload::Rat(BigRational::from_integer(BigInt::from(v))),
            },
            FieldDescriptor::PrimeField(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                FieldElement {
                    desc: *self,
                    payload: Payload::Mod(r % *p),
                }
            }
            FieldDescriptor::Cyclotomic(_) => {
                let mut z = self.zero();
                if let Payload::Cyc(ref mut c) = z.payload {
                    c[0] = BigRational::from_integer(BigInt::from(v));
                }
                z
            }
        }
    }

    pub fn from_ratio(&self, numer: i64, denom: i64) -> FieldElement {
        assert!(denom != 0, "zero denominator");
        match self {
            FieldDescriptor::Rationals => FieldElement {
                desc: *self,
                payload: Payload::Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom))),
            },
            FieldDescriptor::PrimeField(_) => {
                let d = self.from_i64(denom);
                self.from_i64(numer)
                    .div(&d)
                    .expect("denominator invertible mod p")
            }
            FieldDescriptor::Cyclotomic(_) => {
                let mut z = self.zero();
                if let Payload::Cyc(ref mut c) = z.payload {
                    c[0] = BigRational::new(BigInt::from(numer), BigInt::from(denom));
                }
                z
            }
        }
    }

    /// The canonical generator `w` of a cyclotomic field; `None` elsewhere.
    pub fn generator(&self) -> Option<FieldElement> {
        match self {
            FieldDescriptor::Cyclotomic(n) => {
                let phi = euler_totient(*n) as usize;
                let mut c = vec![BigRational::zero(); phi];
                if phi == 1 {
                    // Phi_1 = x - 1 or Phi_2 = x + 1: w is rational.
                    c[0] = if *n == 1 {
                        BigRational::one()
                    } else {
                        -BigRational::one()
                    };
                } else {
                    c[1] = BigRational::one();
                }
                Some(FieldElement {
                    desc: *self,
                    payload: Payload::Cyc(c),
                })
            }
            _ => None,
        }
    }

    /// Uniformly small random element, used by randomized searches and
    /// property tests. Not cryptographic.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> FieldElement {
        match self {
            FieldDescriptor::Rationals => {
                let n = rng.gen_range(-6i64..=6);
                let d = rng.gen_range(1i64..=4);
                self.from_ratio(n, d)
            }
            FieldDescriptor::PrimeField(p) => self.from_i64(rng.gen_range(0..*p) as i64),
            FieldDescriptor::Cyclotomic(n) => {
                let phi = euler_totient(*n) as usize;
                let mut c = vec![BigRational::zero(); phi];
                for ci in c.iter_mut() {
                    *ci = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
                }
                FieldElement {
                    desc: *self,
                    payload: Payload::Cyc(c),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Payload {
    Rat(BigRational),
    Mod(u64),
    /// Coefficients of 1, w, ..., w^(phi-1); always exactly phi entries.
    Cyc(Vec<BigRational>),
}

/// An exact scalar tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    desc: FieldDescriptor,
    payload: Payload,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn field(&self) -> FieldDescriptor {
        self.desc
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::Rat(r) => r.is_zero(),
            Payload::Mod(m) => *m == 0,
            Payload::Cyc(c) => c.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.desc.one()
    }

    /// Checked entry point carrying the full error contract; the operator
    /// impls below panic on mixed fields instead.
    pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
        if a.desc != b.desc {
            return Err(FieldError::MixedFields);
        }
        match op {
            ArithOp::Add => Ok(a.add_ref(b)),
            ArithOp::Sub => Ok(a.sub_ref(b)),
            ArithOp::Mul => Ok(a.mul_ref(b)),
            ArithOp::Div => a.div(b),
        }
    }

    fn add_ref(&self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.desc, rhs.desc);
        let payload = match (&self.payload, &rhs.payload) {
            (Payload::Rat(a), Payload::Rat(b)) => Payload::Rat(a + b),
            (Payload::Mod(a), Payload::Mod(b)) => {
                let p = self.desc.characteristic();
                Payload::Mod(((*a as u128 + *b as u128) % p as u128) as u64)
            }
            (Payload::Cyc(a), Payload::Cyc(b)) => {
                Payload::Cyc(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!("payload kind matches descriptor"),
        };
        FieldElement { desc: self.desc, payload }
    }

    fn sub_ref(&self, rhs: &FieldElement) -> FieldElement {
        self.add_ref(&rhs.neg_ref())
    }

    fn neg_ref(&self) -> FieldElement {
        let payload = match &self.payload {
            Payload::Rat(a) => Payload::Rat(-a),
            Payload::Mod(a) => {
                let p = self.desc.characteristic();
                Payload::Mod(if *a == 0 { 0 } else { p - *a })
            }
            Payload::Cyc(a) => Payload::Cyc(a.iter().map(|x| -x).collect()),
        };
        FieldElement { desc: self.desc, payload }
    }

    fn mul_ref(&self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.desc, rhs.desc);
        let payload = match (&self.payload, &rhs.payload) {
            (Payload::Rat(a), Payload::Rat(b)) => Payload::Rat(a * b),
            (Payload::Mod(a), Payload::Mod(b)) => {
                let p = self.desc.characteristic();
                Payload::Mod(((*a as u128 * *b as u128) % p as u128) as u64)
            }
            (Payload::Cyc(a), Payload::Cyc(b)) => {
                let n = match self.desc {
                    FieldDescriptor::Cyclotomic(n) => n,
                    _ => unreachable!(),
                };
                Payload::Cyc(cyclo_table(n).mul(a, b))
            }
            _ => unreachable!("payload kind matches descriptor"),
        };
        FieldElement { desc: self.desc, payload }
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let payload = match &self.payload {
            Payload::Rat(a) => Payload::Rat(a.recip()),
            Payload::Mod(a) => {
                let p = self.desc.characteristic();
                Payload::Mod(mod_inverse(*a, p))
            }
            Payload::Cyc(a) => {
                let n = match self.desc {
                    FieldDescriptor::Cyclotomic(n) => n,
                    _ => unreachable!(),
                };
                Payload::Cyc(cyclo_table(n).inv(a))
            }
        };
        Ok(FieldElement { desc: self.desc, payload })
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul_ref(&rhs.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.desc.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    /// Coefficients over the prime-field basis 1, w, ..., w^(phi-1).
    /// Rational and prime-field elements report a single coordinate.
    pub(crate) fn cyclotomic_coords(&self) -> Option<&[BigRational]> {
        match &self.payload {
            Payload::Cyc(c) => Some(c),
            _ => None,
        }
    }

    pub(crate) fn rational_value(&self) -> Option<&BigRational> {
        match &self.payload {
            Payload::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub(crate) fn residue_value(&self) -> Option<u64> {
        match &self.payload {
            Payload::Mod(m) => Some(*m),
            _ => None,
        }
    }

    pub(crate) fn from_cyclotomic_coords(n: u32, mut c: Vec<BigRational>) -> FieldElement {
        let phi = euler_totient(n) as usize;
        c.resize(phi, BigRational::zero());
        FieldElement {
            desc: FieldDescriptor::Cyclotomic(n),
            payload: Payload::Cyc(c),
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $m:ident, $inner:ident) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                assert_eq!(self.desc, rhs.desc, "mixed fields");
                self.$inner(rhs)
            }
        }
        impl std::ops::$trait for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, add_ref);
impl_binop!(Sub, sub, sub_ref);
impl_binop!(Mul, mul, mul_ref);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic machinery
// ---------------------------------------------------------------------------

struct CycloTable {
    phi: usize,
    /// Phi_N as integer coefficients, monic, degree phi.
    modulus: Vec<BigInt>,
    /// Row r holds w^(phi+r) expressed over 1, w, ..., w^(phi-1).
    /// Integral because Phi_N is monic.
    reduction: Vec<Vec<BigInt>>,
}

impl CycloTable {
    fn build(n: u32) -> CycloTable {
        let modulus = cyclotomic_polynomial(n);
        let phi = modulus.len() - 1;
        // w^phi = -(c_0 + c_1 w + ... + c_{phi-1} w^{phi-1})
        let mut reduction: Vec<Vec<BigInt>> = Vec::with_capacity(phi.max(1));
        let first: Vec<BigInt> = modulus[..phi].iter().map(|c| -c).collect();
        reduction.push(first);
        for r in 1..phi {
            // w^(phi+r) = w * w^(phi+r-1)
            let prev = &reduction[r - 1];
            let mut next = vec![BigInt::zero(); phi];
            for i in 0..phi {
                if prev[i].is_zero() {
                    continue;
                }
                if i + 1 < phi {
                    next[i + 1] += &prev[i];
                } else {
                    for (k, c) in reduction[0].iter().enumerate() {
                        next[k] += &prev[i] * c;
                    }
                }
            }
            reduction.push(next);
        }
        CycloTable { phi, modulus, reduction }
    }

    fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let phi = self.phi;
        let mut raw = vec![BigRational::zero(); 2 * phi - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                raw[i + j] += ai * bj;
            }
        }
        let mut out: Vec<BigRational> = raw[..phi].to_vec();
        for r in phi..2 * phi - 1 {
            if raw[r].is_zero() {
                continue;
            }
            for (k, c) in self.reduction[r - phi].iter().enumerate() {
                if !c.is_zero() {
                    out[k] += &raw[r] * BigRational::from_integer(c.clone());
                }
            }
        }
        out
    }

    /// Extended Euclid in Q[x] against Phi_N, which is irreducible over Q,
    /// so the gcd with any nonzero reduced payload is 1.
    fn inv(&self, a: &[BigRational]) -> Vec<BigRational> {
        let modulus: Vec<BigRational> = self
            .modulus
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let a_poly: Vec<BigRational> = a.to_vec();
        let (g, _, v) = poly_ext_gcd(&modulus, &a_poly);
        // g is a nonzero constant; the inverse is v / g.
        assert_eq!(poly_degree(&g), Some(0), "Phi_N must be coprime to payload");
        let ginv = g[0].recip();
        let mut out: Vec<BigRational> = v.iter().map(|c| c * &ginv).collect();
        out.resize(self.phi, BigRational::zero());
        // v has degree < phi already since deg a < phi, but normalize anyway.
        out.truncate(self.phi);
        out
    }
}

static CYCLO_TABLES: Lazy<Mutex<HashMap<u32, Arc<CycloTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn cyclo_table(n: u32) -> Arc<CycloTable> {
    let mut map = CYCLO_TABLES.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| Arc::new(CycloTable::build(n)))
        .clone()
}

/// The N-th cyclotomic polynomial as integer coefficients (constant first,
/// monic). Computed by dividing x^N - 1 by the product of Phi_d over the
/// proper divisors d of N.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic order must be >= 1");
    // x^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    let mut den = vec![BigInt::one()];
    for d in 1..n {
        if n % d == 0 {
            den = poly_mul_int(&den, &cyclotomic_polynomial(d));
        }
    }
    poly_div_exact_int(&num, &den)
}

pub fn euler_totient(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2u32;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// A primitive N-th root of unity in the given field, or an error naming
/// the obstruction.
pub fn primitive_root_of_unity(field: FieldDescriptor, n: u32) -> Result<FieldElement, FieldError> {
    assert!(n >= 1);
    let fail = |reason: String| FieldError::NoPrimitiveRoot {
        field: field.to_string(),
        order: n,
        reason,
    };
    match field {
        FieldDescriptor::Rationals => match n {
            1 => Ok(field.one()),
            2 => Ok(field.from_i64(-1)),
            _ => Err(fail("the rationals only contain roots of unity of order 1 and 2".into())),
        },
        FieldDescriptor::PrimeField(p) => {
            if n as u64 % p == 0 {
                return Err(fail(format!("order is divisible by the characteristic {p}")));
            }
            if (p - 1) % n as u64 != 0 {
                return Err(fail(format!("{n} does not divide p - 1 = {}", p - 1)));
            }
            for c in 1..p {
                let cand = field.from_i64(c as i64);
                if element_has_order(&cand, n) {
                    return Ok(cand);
                }
            }
            Err(fail("exhaustive search failed (non-cyclic unit group cannot happen)".into()))
        }
        FieldDescriptor::Cyclotomic(m) => {
            // The roots of unity of Q(zeta_m) form a cyclic group of order
            // m for even m and 2m for odd m.
            let full = if m % 2 == 0 { m } else { 2 * m };
            if full % n != 0 {
                return Err(fail(format!(
                    "the roots of unity in this field have order dividing {full}"
                )));
            }
            let w = field.generator().unwrap();
            let root = if m % n == 0 {
                w.pow((m / n) as u64)
            } else {
                // m odd: -w generates the full group of order 2m.
                (-&w).pow((full / n) as u64)
            };
            debug_assert!(element_has_order(&root, n));
            Ok(root)
        }
    }
}

fn element_has_order(x: &FieldElement, n: u32) -> bool {
    if !x.pow(n as u64).is_one() {
        return false;
    }
    for q in 2..=n {
        if n % q == 0 && is_prime_u64(q as u64) && x.pow((n / q) as u64).is_one() {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Integer / rational polynomial helpers
// ---------------------------------------------------------------------------

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Exact division of integer polynomials; panics on nonzero remainder.
fn poly_div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        if c.is_zero() {
            continue;
        }
        for i in 0..=dd {
            rem[k + i] -= &c * &den[i];
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

pub(crate) fn poly_degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Extended gcd for rational polynomials: returns (g, u, v) with
/// u*a + v*b = g.
fn poly_ext_gcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let zero = || vec![BigRational::zero()];
    let one = || vec![BigRational::one()];
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (one(), zero());
    let (mut t0, mut t1) = (zero(), one());
    while poly_degree(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        let t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if poly_degree(a).is_none() || poly_degree(b).is_none() {
        return vec![BigRational::zero()];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = poly_degree(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    let da = match poly_degree(&rem) {
        Some(d) => d,
        None => return (vec![BigRational::zero()], rem),
    };
    if da < db {
        return (vec![BigRational::zero()], rem);
    }
    let lead_inv = b[db].recip();
    let mut quot = vec![BigRational::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = &rem[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for i in 0..=db {
            let delta = &c * &b[i];
            rem[k + i] -= delta;
        }
    }
    (quot, rem)
}

// ---------------------------------------------------------------------------
// u64 modular arithmetic
// ---------------------------------------------------------------------------

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b: u128 = base as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    base = acc as u64;
    base
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// String syntax
// ---------------------------------------------------------------------------

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Rat(r) => write!(f, "{r}"),
            Payload::Mod(m) => write!(f, "{m}"),
            Payload::Cyc(c) => write!(f, "{}", format_cyclotomic(c)),
        }
    }
}

fn format_cyclotomic(coeffs: &[BigRational]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match k {
            0 => String::new(),
            1 => "w".to_string(),
            _ => format!("w^{k}"),
        };
        if k == 0 {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{mag}*{var}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl FieldDescriptor {
    /// Parse the canonical string syntax: "a/b" or "a" over Q, a decimal
    /// residue over F_p, and polynomial strings like "1 - 2/3*w + w^2" over
    /// cyclotomic fields.
    pub fn parse(&self, text: &str) -> Result<FieldElement, FieldError> {
        let err = |reason: &str| FieldError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let s = text.trim();
        if s.is_empty() {
            return Err(err("empty string"));
        }
        match self {
            FieldDescriptor::Rationals => {
                let r = parse_rational(s).ok_or_else(|| err("expected a/b or a"))?;
                Ok(FieldElement {
                    desc: *self,
                    payload: Payload::Rat(r),
                })
            }
            FieldDescriptor::PrimeField(p) => {
                let v: i128 = s.parse().map_err(|_| err("expected a decimal integer"))?;
                let r = v.rem_euclid(*p as i128) as u64;
                Ok(FieldElement {
                    desc: *self,
                    payload: Payload::Mod(r),
                })
            }
            FieldDescriptor::Cyclotomic(n) => {
                let phi = euler_totient(*n) as usize;
                let mut coeffs = vec![BigRational::zero(); phi.max(1)];
                for (sign, term) in split_signed_terms(s).ok_or_else(|| err("bad sign structure"))? {
                    let (coef, power) = parse_cyclo_term(&term).ok_or_else(|| err("bad term"))?;
                    let coef = if sign { -coef } else { coef };
                    if power >= coeffs.len() {
                        // Reduce w^power via field multiplication.
                        let w = self.generator().unwrap().pow(power as u64);
                        let contrib = FieldElement::from_cyclotomic_coords(*n, vec![coef])
                            .mul_ref(&w);
                        if let Payload::Cyc(c) = contrib.payload {
                            for (i, x) in c.into_iter().enumerate() {
                                coeffs[i] += x;
                            }
                        }
                    } else {
                        coeffs[power] += coef;
                    }
                }
                Ok(FieldElement::from_cyclotomic_coords(*n, coeffs))
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Split "1 - 2/3*w + w^2" into [(false,"1"), (true,"2/3*w"), (false,"w^2")].
fn split_signed_terms(s: &str) -> Option<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut sign = false;
    let mut seen_any = false;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '+' | '-' if seen_any && !cur.trim().is_empty() => {
                out.push((sign, cur.trim().to_string()));
                cur = String::new();
                sign = ch == '-';
            }
            '-' if i == 0 || cur.trim().is_empty() && !seen_any => {
                sign = true;
                seen_any = true;
            }
            '+' if cur.trim().is_empty() => {
                // leading plus
                seen_any = true;
            }
            _ => {
                cur.push(ch);
                seen_any = true;
            }
        }
    }
    if cur.trim().is_empty() {
        return None;
    }
    out.push((sign, cur.trim().to_string()));
    Some(out)
}

/// Parse one term: "2/3*w^4", "w^2", "w", "5".
fn parse_cyclo_term(term: &str) -> Option<(BigRational, usize)> {
    let t = term.trim();
    if let Some(idx) = t.find('w') {
        let coef_part = t[..idx].trim().trim_end_matches('*').trim();
        let coef = if coef_part.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coef_part)?
        };
        let rest = t[idx + 1..].trim();
        let power = if rest.is_empty() {
            1usize
        } else {
            let rest = rest.strip_prefix('^')?.trim();
            rest.parse().ok()?
        };
        Some((coef, power))
    } else {
        Some((parse_rational(t)?, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    #[test]
    fn rational_arithmetic() {
        let a = q().from_ratio(1, 2);
        let b = q().from_ratio(1, 3);
        assert_eq!(&a + &b, q().from_ratio(5, 6));
        assert_eq!(&a - &b, q().from_ratio(1, 6));
        assert_eq!(&a * &b, q().from_ratio(1, 6));
        assert_eq!(a.div(&b).unwrap(), q().from_ratio(3, 2));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = q().one();
        let b = FieldDescriptor::prime(5).unwrap().one();
        assert_eq!(
            FieldElement::arith(&a, &b, ArithOp::Add),
            Err(FieldError::MixedFields)
        );
    }

    #[test]
    fn division_by_zero_rejected() {
        let a = q().one();
        assert_eq!(a.div(&q().zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn cyclotomic4_squares_to_minus_one() {
        // Phi_4 = w^2 + 1, so w * w = -1.
        let f = FieldDescriptor::cyclotomic(4).unwrap();
        let w = f.generator().unwrap();
        assert_eq!(&w * &w, f.from_i64(-1));
    }

    #[test]
    fn cyclotomic3_sum_of_roots_vanishes() {
        // Phi_3 = w^2 + w + 1 forces 1 + w + w^2 = 0.
        let f = FieldDescriptor::cyclotomic(3).unwrap();
        let w = f.generator().unwrap();
        let sum = &(&f.one() + &w) + &w.pow(2);
        assert!(sum.is_zero());
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        let as_i64 = |p: Vec<BigInt>| -> Vec<i64> {
            p.iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(as_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        // Derived by dividing x^6 - 1 by Phi_1 Phi_2 Phi_3.
        assert_eq!(as_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn cyclotomic_product_identity() {
        // Product of Phi_d over d | n equals x^n - 1.
        for n in 1..=24u32 {
            let mut prod = vec![BigInt::one()];
            for d in 1..=n {
                if n % d == 0 {
                    prod = poly_mul_int(&prod, &cyclotomic_polynomial(d));
                }
            }
            let mut expect = vec![BigInt::zero(); n as usize + 1];
            expect[0] = BigInt::from(-1);
            expect[n as usize] = BigInt::one();
            assert_eq!(prod, expect, "n = {n}");
        }
    }

    #[test]
    fn primitive_roots() {
        let c3 = FieldDescriptor::cyclotomic(3).unwrap();
        assert_eq!(
            primitive_root_of_unity(c3, 3).unwrap(),
            c3.generator().unwrap()
        );
        assert_eq!(primitive_root_of_unity(q(), 2).unwrap(), q().from_i64(-1));
        // 2 is the least primitive cube root in F_7: 2^3 = 8 = 1, 2^1, 2^2 != 1.
        let f7 = FieldDescriptor::prime(7).unwrap();
        assert_eq!(primitive_root_of_unity(f7, 3).unwrap(), f7.from_i64(2));
        assert!(primitive_root_of_unity(q(), 3).is_err());
        assert!(primitive_root_of_unity(f7, 5).is_err());
    }

    #[test]
    fn primitive_root_odd_cyclotomic_even_order() {
        // Q(zeta_3) contains -w of order 6.
        let c3 = FieldDescriptor::cyclotomic(3).unwrap();
        let r = primitive_root_of_unity(c3, 6).unwrap();
        assert!(element_has_order(&r, 6));
    }

    #[test]
    fn roots_of_unity_distinct() {
        for n in [1u32, 2, 3, 4, 6, 12] {
            let f = FieldDescriptor::cyclotomic(n).unwrap();
            let w = f.generator().unwrap();
            assert!(w.pow(n as u64).is_one());
            let powers: Vec<_> = (0..n).map(|k| w.pow(k as u64)).collect();
            for i in 0..powers.len() {
                for j in 0..i {
                    assert_ne!(powers[i], powers[j], "n = {n}");
                }
            }
        }
    }

    #[test]
    fn inverse_in_cyclotomic_field() {
        let f = FieldDescriptor::cyclotomic(5).unwrap();
        let w = f.generator().unwrap();
        let x = &(&f.from_ratio(2, 3) + &w) - &w.pow(3);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
    }

    #[test]
    fn prime_field_inverses() {
        let f = FieldDescriptor::prime(101).unwrap();
        for v in 1..101 {
            let x = f.from_i64(v);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn prime_check() {
        assert!(FieldDescriptor::prime(2).is_ok());
        assert!(FieldDescriptor::prime(7).is_ok());
        assert_eq!(FieldDescriptor::prime(1), Err(FieldError::NotPrime(1)));
        assert_eq!(FieldDescriptor::prime(91), Err(FieldError::NotPrime(91)));
    }

    #[test]
    fn string_round_trip() {
        let cases: Vec<(FieldDescriptor, &str)> = vec![
            (q(), "5/6"),
            (q(), "-2"),
            (q(), "0"),
            (FieldDescriptor::prime(7).unwrap(), "3"),
            (FieldDescriptor::cyclotomic(3).unwrap(), "1 - 2/3*w"),
            (FieldDescriptor::cyclotomic(5).unwrap(), "1/2 + w - 3*w^3"),
            (FieldDescriptor::cyclotomic(5).unwrap(), "-w^2"),
            (FieldDescriptor::cyclotomic(4).unwrap(), "0"),
        ];
        for (f, s) in cases {
            let x = f.parse(s).unwrap();
            assert_eq!(x.to_string(), s, "canonical form of {s:?}");
            assert_eq!(f.parse(&x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn parse_reduces_high_powers() {
        let f = FieldDescriptor::cyclotomic(4).unwrap();
        // w^2 = -1 under Phi_4.
        let x = f.parse("w^2").unwrap();
        assert_eq!(x, f.from_i64(-1));
        let y = f.parse("3 + w^5").unwrap();
        assert_eq!(y, &f.from_i64(3) + &f.generator().unwrap());
    }
}
