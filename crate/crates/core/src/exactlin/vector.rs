//! Coefficient vectors are plain `Vec<Scalar>`; these are the few helpers
//! the rest of the crate needs.

use super::field::{Field, Scalar};

pub fn add_assign(a: &mut [Scalar], b: &[Scalar]) {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += y;
        }
    }
}

pub fn sub_assign(a: &mut [Scalar], b: &[Scalar]) {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x -= y;
        }
    }
}

/// `a += c * b`
pub fn axpy(a: &mut [Scalar], c: &Scalar, b: &[Scalar]) {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    if c.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            x.add_mul(c, y);
        }
    }
}

pub fn scale(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * c).collect()
}

pub fn neg(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = a.to_vec();
    sub_assign(&mut out, b);
    out
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = a.to_vec();
    add_assign(&mut out, b);
    out
}

pub fn is_zero(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

pub fn unit(field: Field, n: usize, k: usize) -> Vec<Scalar> {
    let mut v = field.zeros(n);
    v[k] = field.one();
    v
}
