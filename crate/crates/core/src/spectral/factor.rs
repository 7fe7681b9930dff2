//! Factorisation of square-free integer polynomials over the rationals
//! (Zassenhaus): factor modulo one prime above the coefficient bound with
//! Cantor–Zassenhaus, then recombine subsets of the modular factors.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{divrem, primitive_int, to_rational};

type ZPoly = Vec<BigInt>;

struct Zp {
    p: BigInt,
}

impl Zp {
    fn reduce(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&self.p)
    }

    fn trim(&self, mut a: ZPoly) -> ZPoly {
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
        a
    }

    fn inv(&self, a: &BigInt) -> BigInt {
        a.modpow(&(&self.p - 2u32), &self.p)
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> ZPoly {
        let n = a.len().max(b.len());
        let zero = BigInt::zero();
        self.trim((0..n).map(|i| self.reduce(&(a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)))).collect())
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> ZPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.trim(out.iter().map(|c| self.reduce(c)).collect())
    }

    fn divrem(&self, a: &[BigInt], b: &[BigInt]) -> (ZPoly, ZPoly) {
        let db = b.len() - 1;
        let li = self.inv(&b[db]);
        let mut r: ZPoly = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), self.trim(r));
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let c = self.reduce(&(&r[i + db] * &li));
            if !c.is_zero() {
                for (j, y) in b.iter().enumerate() {
                    r[i + j] = self.reduce(&(&r[i + j] - &c * y));
                }
            }
            q[i] = c;
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    fn rem(&self, a: &[BigInt], b: &[BigInt]) -> ZPoly {
        self.divrem(a, b).1
    }

    fn monic(&self, a: &[BigInt]) -> ZPoly {
        let li = self.inv(a.last().unwrap());
        a.iter().map(|c| self.reduce(&(c * &li))).collect()
    }

    fn gcd(&self, a: &[BigInt], b: &[BigInt]) -> ZPoly {
        let (mut a, mut b) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    fn powmod(&self, base: &[BigInt], exp: &BigInt, m: &[BigInt]) -> ZPoly {
        let mut result = vec![BigInt::one()];
        let base = self.rem(base, m);
        for i in (0..exp.bits()).rev() {
            result = self.rem(&self.mul(&result, &result), m);
            if exp.bit(i) {
                result = self.rem(&self.mul(&result, &base), m);
            }
        }
        self.rem(&result, m)
    }

    fn derivative(&self, a: &[BigInt]) -> ZPoly {
        self.trim(a.iter().enumerate().skip(1).map(|(i, c)| self.reduce(&(c * BigInt::from(i)))).collect())
    }

    /// Distinct-degree factorisation of a monic square-free polynomial.
    fn ddf(&self, f: &[BigInt]) -> Vec<(ZPoly, usize)> {
        let x: ZPoly = vec![BigInt::zero(), BigInt::one()];
        let mut f = f.to_vec();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while f.len() > 2 * d {
            h = self.powmod(&h, &self.p, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let d = f.len() - 1;
            out.push((f, d));
        }
        out
    }

    /// Equal-degree splitting into irreducible factors of degree `d`.
    fn edf(&self, f: &[BigInt], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<ZPoly>) {
        let n = f.len() - 1;
        if n == d {
            out.push(f.to_vec());
            return;
        }
        let e = (self.p.pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: ZPoly = self.trim((0..n).map(|_| self.random(rng)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, f), &[BigInt::one()]);
            let g = self.gcd(&b, f);
            if g.len() > 1 && g.len() < f.len() {
                let rest = self.divrem(f, &g).0;
                self.edf(&g, d, rng, out);
                self.edf(&self.monic(&rest), d, rng, out);
                return;
            }
        }
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> BigInt {
        let mut bytes = vec![0u8; (self.p.bits() as usize).div_ceil(8) + 8];
        rng.fill_bytes(&mut bytes);
        self.reduce(&BigInt::from_bytes_le(Sign::Plus, &bytes))
    }

    fn symmetric(&self, a: &BigInt) -> BigInt {
        let r = self.reduce(a);
        if &r * 2u32 > self.p {
            r - &self.p
        } else {
            r
        }
    }
}

fn is_probable_prime(n: &BigInt) -> bool {
    const SMALL: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if *n < BigInt::from(2) {
        return false;
    }
    for &s in &SMALL {
        if n == &BigInt::from(s) {
            return true;
        }
        if (n % s).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut r = 0;
    while d.is_even() {
        d >>= 1;
        r += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..r {
            x = x.modpow(&BigInt::from(2), n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn next_prime(from: &BigInt) -> BigInt {
    let mut c = from.clone();
    if c.is_even() {
        c += 1;
    }
    while !is_probable_prime(&c) {
        c += 2;
    }
    c
}

/// Exact division test over the integers; returns the quotient.
fn divide_exact(f: &[BigInt], g: &[BigInt]) -> Option<ZPoly> {
    let (q, r) = divrem(&to_rational(f), &to_rational(g));
    if !r.is_empty() || q.iter().any(|c| !c.denom().is_one()) {
        return None;
    }
    Some(q.iter().map(|c| c.numer().clone()).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors over the rationals of a square-free integer
/// polynomial, each primitive with positive leading coefficient, sorted by
/// degree and then by coefficients.
pub fn factor_square_free(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let f = primitive_int(f);
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![f];
    }
    let lc = f[n].abs();
    let maxc = f.iter().map(Signed::abs).max().unwrap();
    // Mignotte: factor coefficients are at most 2^n ||f||_2 <= 2^n (n+1) max|f_i|;
    // recombined products carry an extra lc.
    let bound: BigInt = &lc * (BigInt::one() << n) * BigInt::from(n + 1) * &maxc;
    let mut p = next_prime(&(bound * 2u32 + 1u32).max(BigInt::one() << 64));
    let zp = loop {
        let zp = Zp { p: p.clone() };
        let fp = zp.trim(f.iter().map(|c| zp.reduce(c)).collect());
        if fp.len() == f.len() && zp.gcd(&fp, &zp.derivative(&fp)).len() == 1 {
            break zp;
        }
        p = next_prime(&(p + 2u32));
    };

    let fp = zp.monic(&zp.trim(f.iter().map(|c| zp.reduce(c)).collect()));
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e55);
    let mut modular = Vec::new();
    for (g, d) in zp.ddf(&fp) {
        zp.edf(&g, d, &mut rng, &mut modular);
    }

    let mut remaining = modular;
    let mut cur = f;
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut hit = None;
        for subset in combinations(remaining.len(), s) {
            let lc = cur.last().unwrap().clone();
            let mut g = vec![lc];
            for &i in &subset {
                g = zp.mul(&g, &remaining[i]);
            }
            let g: ZPoly = primitive_int(&g.iter().map(|c| zp.symmetric(c)).collect::<Vec<_>>());
            if let Some(q) = divide_exact(&cur, &g) {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                cur = primitive_int(&q);
                for &i in subset.iter().rev() {
                    remaining.remove(i);
                }
            }
            None => s += 1,
        }
    }
    if cur.len() > 1 {
        found.push(cur);
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found
}
