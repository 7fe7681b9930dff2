//! Polynomials over the rationals, coefficients listed from the constant
//! term up, with no trailing zeros (the zero polynomial is empty).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{identity, mul, Matrix, Q};
use crate::rational::Rational;

pub type Poly = Vec<Rational>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Rational]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
                let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
                x - y
            })
            .collect(),
    )
}

pub fn mul_poly(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[Rational], b: &[Rational]) -> (Poly, Poly) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r: Poly = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] -= &c * y;
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn monic(p: &[Rational]) -> Poly {
    match p.last() {
        Some(lead) => p.iter().map(|c| c / lead).collect(),
        None => Vec::new(),
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[Rational], b: &[Rational]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

pub fn derivative(p: &[Rational]) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
}

/// Product of the distinct irreducible factors, made monic.
pub fn square_free(p: &[Rational]) -> Poly {
    let g = gcd(p, &derivative(p));
    monic(&divrem(p, &g).0)
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Integer multiple with coprime coefficients and positive leading term.
pub fn primitive(p: &[Rational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    primitive_int(&ints)
}

pub fn primitive_int(p: &[BigInt]) -> Vec<BigInt> {
    let g = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return Vec::new();
    }
    let sign = if p.last().is_some_and(Signed::is_negative) { -BigInt::one() } else { BigInt::one() };
    let mut out: Vec<BigInt> = p.iter().map(|c| c / &g * &sign).collect();
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

pub fn to_rational(p: &[BigInt]) -> Poly {
    trim(p.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

/// Characteristic polynomial `det(xI - m)`, monic, by the Faddeev–LeVerrier
/// recursion.
pub fn charpoly(m: &Matrix<Rational>) -> Poly {
    let n = m.len();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk: Matrix<Rational> = vec![vec![Rational::zero(); n]; n];
    let id = identity(&Q, n);
    for k in 1..=n {
        let mut next = mul(&Q, m, &mk, n);
        for i in 0..n {
            next[i][i] += &c[n - k + 1] * &id[i][i];
        }
        let am = mul(&Q, m, &next, n);
        let tr: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / Rational::from_integer(BigInt::from(k));
        mk = next;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(cs: &[i64]) -> Poly {
        cs.iter().map(|&c| int(c)).collect()
    }

    #[test]
    fn charpoly_of_small_matrices() {
        // [[0,1],[1,0]] -> x^2 - 1
        let m = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(charpoly(&m), p(&[-1, 0, 1]));
        // upper triangular with diagonal 2, 3, 3
        let m = vec![vec![int(2), int(5), int(1)], vec![int(0), int(3), int(7)], vec![int(0), int(0), int(3)]];
        assert_eq!(charpoly(&m), p(&[-18, 21, -8, 1]));
        assert_eq!(charpoly(&Vec::new()), p(&[1]));
    }

    #[test]
    fn square_free_part_drops_repeats() {
        // (x-3)^2 (x+1)
        let f = mul_poly(&mul_poly(&p(&[-3, 1]), &p(&[-3, 1])), &p(&[1, 1]));
        assert_eq!(square_free(&f), mul_poly(&p(&[-3, 1]), &p(&[1, 1])));
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 0, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = divrem(&a, &b);
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_empty());
        assert_eq!(gcd(&a, &p(&[-1, 0, 1])), p(&[-1, 1]));
        assert_eq!(primitive(&[rat(1, 2), rat(-3, 4)]), vec![BigInt::from(-2), BigInt::from(3)]);
        assert_eq!(eval(&a, &int(2)), int(7));
    }
}
