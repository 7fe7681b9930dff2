//! The number field `Q[x]/(g)` for an irreducible `g`, elements stored as
//! coefficient vectors of length `deg g`.

use num_traits::{One, Zero};

use super::linalg::Field;
use super::poly::{divrem, monic, mul_poly, sub, trim, Poly};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct NumberField {
    modulus: Poly,
}

impl NumberField {
    /// `g` must be irreducible of degree at least 1.
    pub fn new(g: &[Rational]) -> Self {
        Self { modulus: monic(&trim(g.to_vec())) }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Rational] {
        &self.modulus
    }

    fn pad(&self, mut p: Poly) -> Vec<Rational> {
        p.resize(self.degree(), Rational::zero());
        p
    }

    fn reduce(&self, p: &[Rational]) -> Vec<Rational> {
        self.pad(divrem(&trim(p.to_vec()), &self.modulus).1)
    }

    pub fn from_rational(&self, q: Rational) -> Vec<Rational> {
        self.reduce(&[q])
    }

    /// The class of `x`, a root of the modulus.
    pub fn generator(&self) -> Vec<Rational> {
        self.reduce(&[Rational::zero(), Rational::one()])
    }
}

impl Field for NumberField {
    type Elem = Vec<Rational>;

    fn zero(&self) -> Self::Elem {
        vec![Rational::zero(); self.degree()]
    }

    fn one(&self) -> Self::Elem {
        self.from_rational(Rational::one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(&mul_poly(&trim(a.clone()), &trim(b.clone())))
    }

    /// Extended Euclid against the modulus; `a` must be nonzero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        let (mut r0, mut r1) = (self.modulus.clone(), trim(a.clone()));
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul_poly(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant since the modulus is irreducible.
        let c = r0[0].clone();
        self.reduce(&s0.iter().map(|x| x / &c).collect::<Vec<_>>())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(Zero::is_zero)
    }
}
