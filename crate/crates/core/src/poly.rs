//! Polynomial helpers over an arbitrary exact coefficient field, used by the
//! idempotent-splitting machinery. Coefficients are listed constant-first.

use crate::field::{FieldDescriptor, FieldElement};

pub fn degree(p: &[FieldElement]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn trim(mut p: Vec<FieldElement>, field: FieldDescriptor) -> Vec<FieldElement> {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    if p.is_empty() {
        p.push(field.zero());
    }
    p
}

pub fn mul(a: &[FieldElement], b: &[FieldElement], field: FieldDescriptor) -> Vec<FieldElement> {
    if degree(a).is_none() || degree(b).is_none() {
        return vec![field.zero()];
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    trim(out, field)
}

pub fn sub(a: &[FieldElement], b: &[FieldElement], field: FieldDescriptor) -> Vec<FieldElement> {
    let n = a.len().max(b.len());
    let mut out = vec![field.zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] = &out[i] + c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] - c;
    }
    trim(out, field)
}

pub fn divmod(
    a: &[FieldElement],
    b: &[FieldElement],
    field: FieldDescriptor,
) -> (Vec<FieldElement>, Vec<FieldElement>) {
    let db = degree(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    let da = match degree(&rem) {
        Some(d) => d,
        None => return (vec![field.zero()], trim(rem, field)),
    };
    if da < db {
        return (vec![field.zero()], trim(rem, field));
    }
    let lead_inv = b[db].inv().expect("leading coefficient nonzero");
    let mut quot = vec![field.zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = &rem[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for i in 0..=db {
            let delta = &c * &b[i];
            rem[k + i] = &rem[k + i] - &delta;
        }
    }
    (trim(quot, field), trim(rem, field))
}

/// Monic gcd.
pub fn gcd(a: &[FieldElement], b: &[FieldElement], field: FieldDescriptor) -> Vec<FieldElement> {
    let mut r0 = trim(a.to_vec(), field);
    let mut r1 = trim(b.to_vec(), field);
    while degree(&r1).is_some() {
        let (_, r) = divmod(&r0, &r1, field);
        r0 = std::mem::replace(&mut r1, r);
    }
    if let Some(d) = degree(&r0) {
        let inv = r0[d].inv().unwrap();
        r0 = r0.iter().map(|c| c * &inv).collect();
    }
    r0
}

/// Extended gcd: (g, u, v) with u*a + v*b = g, g monic.
pub fn ext_gcd(
    a: &[FieldElement],
    b: &[FieldElement],
    field: FieldDescriptor,
) -> (Vec<FieldElement>, Vec<FieldElement>, Vec<FieldElement>) {
    let zero = || vec![field.zero()];
    let one = || vec![field.one()];
    let (mut r0, mut r1) = (trim(a.to_vec(), field), trim(b.to_vec(), field));
    let (mut s0, mut s1) = (one(), zero());
    let (mut t0, mut t1) = (zero(), one());
    while degree(&r1).is_some() {
        let (q, r) = divmod(&r0, &r1, field);
        let s = sub(&s0, &mul(&q, &s1, field), field);
        let t = sub(&t0, &mul(&q, &t1, field), field);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if let Some(d) = degree(&r0) {
        let inv = r0[d].inv().unwrap();
        let norm = |p: &[FieldElement]| p.iter().map(|c| c * &inv).collect::<Vec<_>>();
        return (norm(&r0), norm(&s0), norm(&t0));
    }
    (r0, s0, t0)
}

pub fn eval(p: &[FieldElement], x: &FieldElement, field: FieldDescriptor) -> FieldElement {
    let mut acc = field.zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Formal derivative.
pub fn derivative(p: &[FieldElement], field: FieldDescriptor) -> Vec<FieldElement> {
    if p.len() <= 1 {
        return vec![field.zero()];
    }
    let mut out = Vec::with_capacity(p.len() - 1);
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(c * &field.from_i64(i as i64));
    }
    trim(out, field)
}

/// x^d - 1.
pub fn unity_minus_one(d: usize, field: FieldDescriptor) -> Vec<FieldElement> {
    let mut p = vec![field.zero(); d + 1];
    p[0] = field.from_i64(-1);
    p[d] = field.one();
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    #[test]
    fn divmod_and_gcd() {
        let f = FieldDescriptor::rationals();
        let c = |v: &[i64]| v.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        // (x-1)(x-2) = x^2 - 3x + 2
        let p = c(&[2, -3, 1]);
        let d = c(&[-1, 1]);
        let (q, r) = divmod(&p, &d, f);
        assert_eq!(q, c(&[-2, 1]));
        assert_eq!(degree(&r), None);
        let g = gcd(&p, &c(&[-1, 1]), f);
        assert_eq!(g, c(&[-1, 1]));
        let (g2, u, v) = ext_gcd(&c(&[-1, 1]), &c(&[-2, 1]), f);
        assert_eq!(degree(&g2), Some(0));
        let lhs = sub(
            &mul(&u, &c(&[-1, 1]), f),
            &mul(&v, &c(&[2, -1]), f),
            f,
        );
        assert_eq!(lhs, g2);
    }

    #[test]
    fn eval_horner() {
        let f = FieldDescriptor::rationals();
        let p: Vec<_> = [1i64, 0, -1].iter().map(|&x| f.from_i64(x)).collect();
        assert!(eval(&p, &f.from_i64(1), f).is_zero());
        assert_eq!(eval(&p, &f.from_i64(3), f), f.from_i64(-8));
    }
}
