//! Exact decision of whether an operator has an eigenfunction supported in
//! a finite vertex set.
//!
//! With `K` the rows of the operator at `∂⁺S` restricted to columns `S`, any
//! such eigenfunction lies in `ker K` and is an eigenvector of `L_SS` there.
//! The largest `L_SS`-invariant subspace of `ker K` is computed by
//! intersecting preimages; it is nonzero exactly when an eigenfunction
//! exists, over any extension of the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::factor::factor_square_free;
use super::linalg::{from_columns, identity, kernel, mul, rref, solve, Field, Matrix, Q};
use super::numfield::NumberField;
use super::operator::{EllipticOperator, SupportSet};
use super::poly::{charpoly, primitive, square_free, to_rational};
use super::SpectralError;
use crate::patch::VertexId;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lambda {
    Rational(Rational),
    /// Root of an irreducible primitive integer polynomial of degree at
    /// least 2, coefficients from the constant term up. The eigenvector is
    /// valid for every root.
    Algebraic(Vec<BigInt>),
}

impl Lambda {
    pub fn degree(&self) -> usize {
        match self {
            Lambda::Rational(_) => 1,
            Lambda::Algebraic(p) => p.len() - 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Dimensions of `ker K` and of the successive invariant-subspace
    /// approximations, recorded each time they drop; ends in 0.
    NotFound { dims: Vec<usize> },
    /// `u` maps vertices of `S` to field elements written in the power
    /// basis `1, λ, ..., λ^{k-1}` (a single rational when λ is rational).
    /// Only nonzero entries are kept.
    Found { lambda: Lambda, u: BTreeMap<VertexId, Vec<Rational>>, dims: Vec<usize> },
}

impl Certificate {
    pub fn is_found(&self) -> bool {
        matches!(self, Certificate::Found { .. })
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            Certificate::NotFound { dims } | Certificate::Found { dims, .. } => dims,
        }
    }

    pub fn lambda(&self) -> Option<&Lambda> {
        match self {
            Certificate::Found { lambda, .. } => Some(lambda),
            Certificate::NotFound { .. } => None,
        }
    }

    /// The eigenvector as rationals, when λ is rational.
    pub fn rational_u(&self) -> Option<BTreeMap<VertexId, Rational>> {
        match self {
            Certificate::Found { lambda: Lambda::Rational(_), u, .. } => {
                Some(u.iter().map(|(v, c)| (*v, c[0].clone())).collect())
            }
            _ => None,
        }
    }

    /// `NOTFOUND dims=...` or `FOUND lambda=... u=...`.
    pub fn parse(line: &str) -> Result<Self, SpectralError> {
        let bad = |m: &str| SpectralError::Parse { line: 1, message: format!("{m} in {line:?}") };
        let mut parts = line.split_whitespace();
        let field = |part: Option<&str>, key: &str| -> Result<String, SpectralError> {
            part.and_then(|p| p.strip_prefix(key)).map(str::to_owned).ok_or_else(|| bad(&format!("missing {key}")))
        };
        let dims = |s: &str| -> Result<Vec<usize>, SpectralError> {
            s.split(',').map(|d| d.parse().map_err(|_| bad("bad dimension"))).collect()
        };
        match parts.next() {
            Some("NOTFOUND") => Ok(Certificate::NotFound { dims: dims(&field(parts.next(), "dims=")?)? }),
            Some("FOUND") => {
                let l = field(parts.next(), "lambda=")?;
                let lambda = match l.strip_prefix("minpoly:") {
                    Some(cs) => Lambda::Algebraic(
                        cs.split(',')
                            .map(|c| c.parse::<BigInt>().map_err(|_| bad("bad coefficient")))
                            .collect::<Result<_, _>>()?,
                    ),
                    None => Lambda::Rational(parse_rational(&l).ok_or_else(|| bad("bad lambda"))?),
                };
                let us = field(parts.next(), "u=")?;
                let mut u = BTreeMap::new();
                for item in us.split(',').filter(|s| !s.is_empty()) {
                    let (v, cs) = item.split_once(':').ok_or_else(|| bad("bad u entry"))?;
                    let v = VertexId(v.parse().map_err(|_| bad("bad vertex id"))?);
                    let cs = cs
                        .split('|')
                        .map(|c| parse_rational(c).ok_or_else(|| bad("bad rational")))
                        .collect::<Result<_, _>>()?;
                    u.insert(v, cs);
                }
                let dims = match parts.next() {
                    Some(d) => dims(d.strip_prefix("dims=").ok_or_else(|| bad("trailing field"))?)?,
                    None => Vec::new(),
                };
                Ok(Certificate::Found { lambda, u, dims })
            }
            _ => Err(bad("unknown certificate kind")),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |d: &[usize]| d.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            Certificate::NotFound { dims } => write!(f, "NOTFOUND dims={}", join(dims)),
            Certificate::Found { lambda, u, dims } => {
                match lambda {
                    Lambda::Rational(q) => write!(f, "FOUND lambda={}", format_rational(q))?,
                    Lambda::Algebraic(p) => write!(
                        f,
                        "FOUND lambda=minpoly:{}",
                        p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
                    )?,
                }
                let entries: Vec<String> = u
                    .iter()
                    .map(|(v, cs)| format!("{v}:{}", cs.iter().map(format_rational).collect::<Vec<_>>().join("|")))
                    .collect();
                write!(f, " u={} dims={}", entries.join(","), join(dims))
            }
        }
    }
}

fn block(op: &EllipticOperator<'_>, rows: &[VertexId], cols: &[VertexId]) -> Matrix<Rational> {
    rows.iter().map(|&v| cols.iter().map(|&w| op.get(v, w)).collect()).collect()
}

/// Columns completing `b` to a basis, chosen greedily from the
/// identity in ascending order.
fn complement(b: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let id = identity(&Q, n);
    let cols: Vec<Vec<Rational>> = b.iter().cloned().chain(id.iter().cloned()).collect();
    let mut m = from_columns(&cols, n);
    let pivots = rref(&Q, &mut m, cols.len());
    pivots.into_iter().filter(|&c| c >= b.len()).map(|c| id[c - b.len()].clone()).collect()
}

/// Largest `L_SS`-invariant subspace of `ker K`: the basis of
/// `ker K`, the matrix `P` of `L_SS` on it (modulo the complement), the
/// basis of the invariant subspace in `ker K` coordinates and the dims.
struct Reduction {
    kernel_basis: Vec<Vec<Rational>>,
    p: Matrix<Rational>,
    invariant: Vec<Vec<Rational>>,
    dims: Vec<usize>,
}

fn reduce(op: &EllipticOperator<'_>, s: &SupportSet) -> Reduction {
    let sv = s.vertices();
    let n = sv.len();
    let k = block(op, s.outer(), sv);
    let kb = kernel(&Q, &k, n);
    let d = kb.len();
    let mut dims = vec![d];
    if d == 0 {
        return Reduction { kernel_basis: kb, p: Vec::new(), invariant: Vec::new(), dims };
    }

    let bm = from_columns(&kb, n);
    let w = complement(&kb, n);
    let basis: Vec<Vec<Rational>> = kb.iter().chain(&w).cloned().collect();
    let e = from_columns(&basis, n);
    let lss = block(op, sv, sv);
    let lb = mul(&Q, &lss, &bm, d);
    let x = solve(&Q, &e, &lb, d).expect("extended basis is invertible");
    let p: Matrix<Rational> = x[..d].to_vec();
    let q: Matrix<Rational> = x[d..].to_vec();

    let mut c = kernel(&Q, &q, d);
    if c.len() < d {
        dims.push(c.len());
    }
    while !c.is_empty() {
        // Rows of `ann` span the annihilator of span(c).
        let ann = kernel(&Q, &c, d);
        if ann.is_empty() {
            break;
        }
        let cm = from_columns(&c, d);
        let pc = mul(&Q, &p, &cm, c.len());
        let apc = mul(&Q, &ann, &pc, c.len());
        let y = kernel(&Q, &apc, c.len());
        if y.len() == c.len() {
            break;
        }
        c = y.iter().map(|yv| super::linalg::mul_vec(&Q, &cm, yv)).collect();
        dims.push(c.len());
    }
    Reduction { kernel_basis: kb, p, invariant: c, dims }
}

/// Exact search for λ and `u ≠ 0` supported in `S` with `(L − λ)u = 0` at
/// every vertex.
pub fn cse_search(op: &EllipticOperator<'_>, s: &SupportSet) -> Result<Certificate, SpectralError> {
    if s.is_empty() {
        return Ok(Certificate::NotFound { dims: vec![0] });
    }
    let red = reduce(op, s);
    if red.invariant.is_empty() {
        return Ok(Certificate::NotFound { dims: red.dims });
    }
    let d = red.kernel_basis.len();
    let r = red.invariant.len();
    let cm = from_columns(&red.invariant, d);
    let pc = mul(&Q, &red.p, &cm, r);
    // P C = C M, solved on the pivot rows of C.
    let mut aug: Matrix<Rational> = cm.iter().zip(&pc).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
    rref(&Q, &mut aug, 2 * r);
    let m: Matrix<Rational> = aug[..r].iter().map(|row| row[r..].to_vec()).collect();

    let chi = charpoly(&m);
    let factors = factor_square_free(&primitive(&square_free(&chi)));
    let linear_roots: Vec<Rational> =
        factors.iter().filter(|f| f.len() == 2).map(|f| -Rational::new(f[0].clone(), f[1].clone())).collect();

    let n = s.len();
    let bm = from_columns(&red.kernel_basis, n);
    let cert = if let Some(lambda) = linear_roots.into_iter().min() {
        let y = eigenvector(&Q, &m, &lambda);
        let u = lift(&Q, &bm, &cm, &y);
        let u = normalise(&Q, u);
        Certificate::Found {
            lambda: Lambda::Rational(lambda),
            u: s.vertices().iter().zip(u).filter(|(_, x)| !x.is_zero()).map(|(v, x)| (*v, vec![x])).collect(),
            dims: red.dims,
        }
    } else {
        let g = factors.first().ok_or_else(|| SpectralError::Internal("empty characteristic polynomial".into()))?;
        let nf = NumberField::new(&to_rational(g));
        let lift_m = |a: &Matrix<Rational>| -> Matrix<Vec<Rational>> {
            a.iter().map(|row| row.iter().map(|x| nf.from_rational(x.clone())).collect()).collect()
        };
        let y = eigenvector(&nf, &lift_m(&m), &nf.generator());
        let u = lift(&nf, &lift_m(&bm), &lift_m(&cm), &y);
        let u = normalise(&nf, u);
        Certificate::Found {
            lambda: Lambda::Algebraic(g.clone()),
            u: s.vertices().iter().zip(u).filter(|(_, x)| !nf.is_zero(x)).map(|(v, x)| (*v, x)).collect(),
            dims: red.dims,
        }
    };
    if !verify(op, s, &cert)? {
        return Err(SpectralError::Internal("certificate failed re-verification".into()));
    }
    Ok(cert)
}

fn eigenvector<F: Field>(k: &F, m: &Matrix<F::Elem>, lambda: &F::Elem) -> Vec<F::Elem> {
    let r = m.len();
    let shifted: Matrix<F::Elem> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter().enumerate().map(|(j, x)| if i == j { k.sub(x, lambda) } else { x.clone() }).collect()
        })
        .collect();
    kernel(k, &shifted, r).into_iter().next().expect("λ is an eigenvalue")
}

fn lift<F: Field>(k: &F, bm: &Matrix<F::Elem>, cm: &Matrix<F::Elem>, y: &[F::Elem]) -> Vec<F::Elem> {
    let z = super::linalg::mul_vec(k, cm, y);
    super::linalg::mul_vec(k, bm, &z)
}

fn normalise<F: Field>(k: &F, u: Vec<F::Elem>) -> Vec<F::Elem> {
    match u.iter().find(|x| !k.is_zero(x)) {
        Some(first) => {
            let inv = k.inv(first);
            u.iter().map(|x| k.mul(x, &inv)).collect()
        }
        None => u,
    }
}

fn check<F: Field>(
    k: &F,
    op: &EllipticOperator<'_>,
    s: &SupportSet,
    lambda: &F::Elem,
    u: &BTreeMap<VertexId, F::Elem>,
    embed: impl Fn(&Rational) -> F::Elem,
) -> bool {
    if u.is_empty() || u.values().all(|x| k.is_zero(x)) || u.keys().any(|v| !s.contains(*v)) {
        return false;
    }
    let patch = op.patch();
    let at = |x: VertexId| u.get(&x).cloned().unwrap_or_else(|| k.zero());
    s.vertices().iter().chain(s.outer()).all(|&v| {
        let mut acc = k.mul(&k.sub(&embed(&op.get(v, v)), lambda), &at(v));
        for &w in patch.neighbors(v) {
            let a = op.get(v, w);
            if !a.is_zero() {
                acc = k.add(&acc, &k.mul(&embed(&a), &at(w)));
            }
        }
        k.is_zero(&acc)
    })
}

/// Re-checks a certificate exactly. `Found` must satisfy `(L − λ)u = 0` on
/// `S ∪ ∂⁺S` with `u` nonzero and supported in `S`; `NotFound` must have
/// strictly decreasing dims ending in 0.
pub fn verify(op: &EllipticOperator<'_>, s: &SupportSet, cert: &Certificate) -> Result<bool, SpectralError> {
    match cert {
        Certificate::NotFound { dims } => Ok(dims.last() == Some(&0) && dims.windows(2).all(|w| w[0] > w[1])),
        Certificate::Found { lambda: Lambda::Rational(l), u, .. } => {
            if u.values().any(|c| c.len() != 1) {
                return Ok(false);
            }
            let u: BTreeMap<VertexId, Rational> = u.iter().map(|(v, c)| (*v, c[0].clone())).collect();
            Ok(check(&Q, op, s, l, &u, Rational::clone))
        }
        Certificate::Found { lambda: Lambda::Algebraic(g), u, .. } => {
            if g.len() < 3 || factor_square_free(g).len() != 1 {
                return Ok(false);
            }
            let nf = NumberField::new(&to_rational(g));
            if u.values().any(|c| c.len() != nf.degree()) {
                return Ok(false);
            }
            Ok(check(&nf, op, s, &nf.generator(), u, |q| nf.from_rational(q.clone())))
        }
    }
}

/// λ as a float, or all complex roots of its minimal polynomial.
pub fn lambda_roots(lambda: &Lambda) -> Vec<nalgebra::Complex<f64>> {
    use crate::rational::to_f64;
    match lambda {
        Lambda::Rational(q) => vec![nalgebra::Complex::new(to_f64(q), 0.0)],
        Lambda::Algebraic(g) => {
            let k = g.len() - 1;
            let lead = to_f64(&Rational::from_integer(g[k].clone()));
            let comp = nalgebra::DMatrix::<f64>::from_fn(k, k, |i, j| {
                if j == k - 1 {
                    -to_f64(&Rational::from_integer(g[i].clone())) / lead
                } else if i == j + 1 {
                    1.0
                } else {
                    0.0
                }
            });
            comp.complex_eigenvalues().iter().copied().collect()
        }
    }
}
