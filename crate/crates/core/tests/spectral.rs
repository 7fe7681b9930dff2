use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use tess_core::generate::{generate_kagome, generate_regular};
use tess_core::rational::{int, rat, Rational};
use tess_core::spectral::{
    cse_search, cse_search_float, lambda_roots, unique_continuation_trace, verify, Certificate, EllipticOperator,
    Lambda, Rule, SupportSet, UcInput,
};
use tess_core::{validate_patch, FaceId, TessellationPatch, VertexId};

/// Wheel of six triangles around `z = 0` inside a hexagon `v_i = 1 + i`,
/// with apexes `t_i = 7 + i` over the hexagon edges and an incomplete rim
/// `o_i = 13 + i`.
fn wheel() -> TessellationPatch {
    let z = 0u32;
    let v = |i: usize| 1 + (i % 6) as u32;
    let t = |i: usize| 7 + (i % 6) as u32;
    let o = |i: usize| 13 + (i % 6) as u32;
    let pos = |x: u32| -> (f64, f64) {
        let (r, a) = match x {
            0 => (0.0, 0.0),
            1..=6 => (1.0, 60.0 * (x - 1) as f64),
            7..=12 => (2.0, 60.0 * (x - 7) as f64 + 30.0),
            _ => (3.0, 60.0 * (x - 13) as f64 + 60.0),
        };
        (r * a.to_radians().cos(), r * a.to_radians().sin())
    };
    let mut faces = Vec::new();
    for i in 0..6 {
        faces.push(vec![z, v(i), v(i + 1)]);
        faces.push(vec![v(i), t(i), v(i + 1)]);
        faces.push(vec![v(i + 1), t(i), t(i + 1)]);
        faces.push(vec![t(i), o(i), t(i + 1)]);
        faces.push(vec![t(i + 1), o(i), o(i + 1)]);
    }
    let faces: Vec<(FaceId, Vec<VertexId>)> = faces
        .into_iter()
        .enumerate()
        .map(|(i, mut c)| {
            let area: f64 = (0..c.len())
                .map(|j| {
                    let (a, b) = (pos(c[j]), pos(c[(j + 1) % c.len()]));
                    a.0 * b.1 - a.1 * b.0
                })
                .sum();
            if area < 0.0 {
                c.reverse();
            }
            (FaceId(i as u32), c.into_iter().map(VertexId).collect())
        })
        .collect();
    let complete: Vec<VertexId> = (0..13).map(VertexId).collect();
    let ids: Vec<FaceId> = faces.iter().map(|(f, _)| *f).collect();
    let patch = TessellationPatch::new(faces, complete, ids).unwrap();
    assert!(validate_patch(&patch).is_empty(), "{}", validate_patch(&patch));
    patch
}

fn wheel_operator(patch: &TessellationPatch) -> EllipticOperator<'_> {
    let mut entries = BTreeMap::new();
    for v in patch.vertices() {
        for &w in patch.neighbors(v) {
            entries.insert((v, w), int(1));
        }
    }
    for i in 0..6u32 {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        entries.insert((VertexId(1 + i), VertexId(1 + i)), int(2));
        entries.insert((VertexId(0), VertexId(1 + i)), int(sign));
        entries.insert((VertexId(1 + i), VertexId(0)), rat(sign, 3));
    }
    EllipticOperator::new(patch, entries).unwrap()
}

#[test]
fn wheel_has_sqrt_two_eigenfunction() {
    let patch = wheel();
    let op = wheel_operator(&patch);
    let s = SupportSet::new(&patch, (0..7).map(VertexId)).unwrap();
    let cert = cse_search(&op, &s).unwrap();
    let Certificate::Found { lambda: Lambda::Algebraic(g), u, dims } = &cert else {
        panic!("expected an algebraic certificate, got {cert}");
    };
    assert_eq!(g, &vec![BigInt::from(-2), BigInt::from(0), BigInt::from(1)]);
    assert_eq!(dims, &vec![2]);
    // u = e_z + (λ/6) h with h alternating on the hexagon.
    assert_eq!(u[&VertexId(0)], vec![int(1), int(0)]);
    for i in 0..6u32 {
        let s = if i % 2 == 0 { 1 } else { -1 };
        assert_eq!(u[&VertexId(1 + i)], vec![int(0), rat(s, 6)]);
    }
    assert!(verify(&op, &s, &cert).unwrap());
    assert_eq!(Certificate::parse(&cert.to_string()).unwrap(), cert);
    assert!(cert.to_string().starts_with("FOUND lambda=minpoly:-2,0,1 u=0:1/1|0/1,1:0/1|1/6,2:0/1|-1/6"));

    let roots = lambda_roots(cert.lambda().unwrap());
    let cands = cse_search_float(&op, &s, 1e-8);
    assert_eq!(cands.len(), 2);
    for c in &cands {
        assert!(roots.iter().any(|r| (r - c.lambda).norm() < 1e-9));
        assert!((c.lambda.re.abs() - 2f64.sqrt()).abs() < 1e-9);
    }
}

#[test]
fn tampered_certificates_fail_verification() {
    let patch = wheel();
    let op = wheel_operator(&patch);
    let s = SupportSet::new(&patch, (0..7).map(VertexId)).unwrap();
    let cert = cse_search(&op, &s).unwrap();
    let Certificate::Found { lambda, mut u, dims } = cert else { unreachable!() };
    u.insert(VertexId(0), vec![int(0), int(2)]);
    assert!(!verify(&op, &s, &Certificate::Found { lambda, u, dims }).unwrap());
    assert!(!verify(&op, &s, &Certificate::NotFound { dims: vec![2, 2] }).unwrap());
}

#[test]
fn kagome_hexagon_flat_band() {
    let (patch, base) = generate_kagome(3).unwrap();
    let op = EllipticOperator::adjacency(&patch);
    let s = SupportSet::face(&patch, base).unwrap();
    let cert = cse_search(&op, &s).unwrap();
    assert_eq!(cert.lambda(), Some(&Lambda::Rational(int(-2))));
    let u = cert.rational_u().unwrap();
    assert_eq!(u.len(), 6);
    let cycle = patch.cycle(base).unwrap();
    for i in 0..6 {
        assert_eq!(&u[&cycle[i]] + &u[&cycle[(i + 1) % 6]], int(0));
        assert_eq!(u[&cycle[i]].abs(), int(1));
    }
    // Direct application on S and its outer ring.
    for &v in s.vertices() {
        assert_eq!(op.apply(&u, v).unwrap(), int(-2) * &u[&v]);
    }
    for &v in s.outer() {
        assert_eq!(op.apply(&u, v).unwrap(), int(0));
    }
    let cands = cse_search_float(&op, &s, 1e-8);
    assert_eq!(cands.len(), 1);
    assert!((cands[0].lambda.re + 2.0).abs() < 1e-9 && cands[0].lambda.im.abs() < 1e-9);
}

#[test]
fn central_square_block_has_no_eigenfunction() {
    let (patch, _) = generate_regular(4, 4, 5).unwrap();
    // Vertex ball of radius 1 in the square grid is a plus; use the 3x3
    // block around a base-face corner: its ball of radius 1 plus diagonals.
    let c = VertexId(0);
    let mut block: Vec<VertexId> = vec![c];
    for &w in patch.neighbors(c) {
        block.push(w);
    }
    for &f in patch.faces_at(c) {
        block.extend(patch.cycle(f).unwrap());
    }
    let s = SupportSet::new(&patch, block).unwrap();
    assert_eq!(s.len(), 9);
    for seed in 1..=20 {
        let op = EllipticOperator::random(&patch, seed, 4).unwrap();
        let cert = cse_search(&op, &s).unwrap();
        assert!(!cert.is_found(), "seed {seed}: {cert}");
        assert!(verify(&op, &s, &cert).unwrap());
        assert!(cse_search_float(&op, &s, 1e-8).is_empty());
    }
}

#[test]
fn single_vertex_and_empty_support() {
    let (patch, _) = generate_regular(3, 7, 3).unwrap();
    let op = EllipticOperator::random(&patch, 5, 4).unwrap();
    let s = SupportSet::new(&patch, [VertexId(0)]).unwrap();
    assert_eq!(cse_search(&op, &s).unwrap(), Certificate::NotFound { dims: vec![0] });
    let empty = SupportSet::new(&patch, []).unwrap();
    assert!(!cse_search(&op, &empty).unwrap().is_found());
    assert!(cse_search_float(&op, &empty, 1e-8).is_empty());
}

#[test]
fn support_near_rim_is_a_margin_error() {
    let (patch, _) = generate_regular(4, 4, 2).unwrap();
    let rim = patch.vertices().find(|v| !patch.is_vertex_complete(*v)).unwrap();
    let inner = patch.neighbors(rim).iter().copied().find(|w| patch.is_vertex_complete(*w)).unwrap();
    assert!(SupportSet::new(&patch, [inner]).is_err());
}

fn permuted(patch: &TessellationPatch, salt: u32) -> (TessellationPatch, HashMap<VertexId, VertexId>) {
    let ids: Vec<VertexId> = patch.vertices().collect();
    let n = ids.len() as u32;
    let map: HashMap<VertexId, VertexId> = ids.iter().map(|&v| (v, VertexId((v.0 * 7919 + salt) % n + 1000))).collect();
    (patch.relabel_vertices(&map).unwrap(), map)
}

#[test]
fn scaling_and_relabelling_invariance() {
    let (patch, base) = generate_kagome(3).unwrap();
    let s = SupportSet::face(&patch, base).unwrap();
    let op = EllipticOperator::adjacency(&patch);
    let scaled = op.scaled(&rat(-3, 2));
    let cert = cse_search(&scaled, &s).unwrap();
    assert_eq!(cert.lambda(), Some(&Lambda::Rational(int(3))));

    let (q, map) = permuted(&patch, 11);
    let op_q =
        EllipticOperator::new(&q, op.entries().iter().map(|((v, w), a)| ((map[v], map[w]), a.clone())).collect())
            .unwrap();
    let s_q = SupportSet::new(&q, s.vertices().iter().map(|v| map[v])).unwrap();
    assert_eq!(cse_search(&op_q, &s_q).unwrap().lambda(), Some(&Lambda::Rational(int(-2))));

    let wheel = wheel();
    let wop = wheel_operator(&wheel);
    let ws = SupportSet::new(&wheel, (0..7).map(VertexId)).unwrap();
    let (wq, wmap) = permuted(&wheel, 3);
    let wop_q =
        EllipticOperator::new(&wq, wop.entries().iter().map(|((v, w), a)| ((wmap[v], wmap[w]), a.clone())).collect())
            .unwrap();
    let ws_q = SupportSet::new(&wq, ws.vertices().iter().map(|v| wmap[v])).unwrap();
    assert_eq!(cse_search(&wop_q, &ws_q).unwrap().lambda(), cse_search(&wop, &ws).unwrap().lambda());
    // λ² = 2 scales to λ² = 8.
    let c2 = cse_search(&wop.scaled(&int(2)), &ws).unwrap();
    assert_eq!(c2.lambda(), Some(&Lambda::Algebraic(vec![BigInt::from(-8), BigInt::from(0), BigInt::from(1)])));
}

#[test]
fn operator_text_survives_a_search() {
    let (patch, base) = generate_kagome(3).unwrap();
    let op = EllipticOperator::random(&patch, 9, 4).unwrap();
    let back = EllipticOperator::from_text(&patch, &op.to_text()).unwrap();
    let s = SupportSet::face(&patch, base).unwrap();
    assert_eq!(cse_search(&op, &s).unwrap(), cse_search(&back, &s).unwrap());
}

fn check_trace_citations(op: &EllipticOperator<'_>, trace: &tess_core::spectral::PropagationTrace) {
    for layer in &trace.layers {
        for e in &layer.eliminations {
            assert!(op.patch().adjacent(e.equation_at, e.vertex));
            assert!(!e.coefficient.is_zero());
            assert_eq!(op.get(e.equation_at, e.vertex), e.coefficient);
        }
    }
}

#[test]
fn vanishing_trace_on_flat_and_hyperbolic_tilings() {
    for (p, q) in [(4, 4), (3, 7), (6, 3), (4, 5)] {
        let (patch, base) = generate_regular(p, q, 6).unwrap();
        let op = EllipticOperator::random(&patch, 17, 4).unwrap();
        let trace = unique_continuation_trace(&op, base, &UcInput::Symbolic, 3).unwrap();
        assert!(trace.success, "({p},{q}): {:?}", trace.failure);
        assert_eq!(trace.layers.len(), 4);
        for layer in &trace.layers {
            assert!(layer.stalled.is_empty());
            for e in &layer.eliminations {
                assert!(layer.boundary.contains(&e.vertex), "({p},{q}) k={} vertex {}", layer.k, e.vertex);
            }
        }
        check_trace_citations(&op, &trace);
        assert!(
            trace.layers.iter().flat_map(|l| &l.eliminations).any(|e| e.rule == Rule::Boundary) || p == 6 || q == 7
        );
    }
}

#[test]
fn vanishing_trace_stalls_on_kagome() {
    let (patch, base) = generate_kagome(5).unwrap();
    let op = EllipticOperator::adjacency(&patch);
    let trace = unique_continuation_trace(&op, base, &UcInput::Symbolic, 2).unwrap();
    assert!(!trace.success);
    assert!(trace.failure.is_some());
    check_trace_citations(&op, &trace);
}

#[test]
fn concrete_trace_checks_the_given_function() {
    let (patch, base) = generate_kagome(5).unwrap();
    let op = EllipticOperator::adjacency(&patch);
    let s = SupportSet::face(&patch, base).unwrap();
    let u = cse_search(&op, &s).unwrap().rational_u().unwrap();
    let trace = unique_continuation_trace(&op, base, &UcInput::Concrete { u, lambda: int(-2) }, 2).unwrap();
    // The flat-band vector is a genuine eigenfunction, so no step may claim
    // a false zero; the trace stops where the argument stops.
    assert!(!trace.success);

    let (patch, base) = generate_regular(4, 4, 5).unwrap();
    let op = EllipticOperator::random(&patch, 1, 4).unwrap();
    let zero = UcInput::Concrete { u: BTreeMap::new(), lambda: int(0) };
    assert!(unique_continuation_trace(&op, base, &zero, 2).unwrap().success);
    let bump = UcInput::Concrete { u: BTreeMap::from([(VertexId(0), int(1))]), lambda: int(0) };
    let t = unique_continuation_trace(&op, base, &bump, 2).unwrap();
    assert!(!t.success && t.failure.unwrap().contains("fails"));
}

#[test]
fn trace_needs_margin() {
    let (patch, base) = generate_regular(4, 4, 4).unwrap();
    let op = EllipticOperator::laplacian(&patch);
    assert!(unique_continuation_trace(&op, base, &UcInput::Symbolic, 3).is_err());
    assert!(unique_continuation_trace(&op, base, &UcInput::Symbolic, 2).unwrap().success);
}

fn random_support(patch: &TessellationPatch, seed: u64, max: usize) -> SupportSet {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let eligible: Vec<VertexId> = patch
        .vertices()
        .filter(|&v| patch.is_vertex_complete(v) && patch.neighbors(v).iter().all(|w| patch.is_vertex_complete(*w)))
        .collect();
    let start = eligible[rng.random_range(0..eligible.len())];
    let mut set = vec![start];
    let target = rng.random_range(1..=max);
    while set.len() < target {
        let from = set[rng.random_range(0..set.len())];
        let nb = patch.neighbors(from);
        let w = nb[rng.random_range(0..nb.len())];
        if eligible.contains(&w) && !set.contains(&w) {
            set.push(w);
        }
    }
    SupportSet::new(patch, set).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn exact_and_float_agree_on_random_instances(seed in 0u64..10_000) {
        let (patch, _) = generate_regular(4, 4, 4).unwrap();
        let s = random_support(&patch, seed, 12);
        let op = EllipticOperator::random(&patch, seed, 4).unwrap();
        let cert = cse_search(&op, &s).unwrap();
        prop_assert!(verify(&op, &s, &cert).unwrap());
        prop_assert_eq!(cert.is_found(), !cse_search_float(&op, &s, 1e-8).is_empty());
    }

    #[test]
    fn kagome_supports_agree_with_oracle(seed in 0u64..10_000) {
        let (patch, _) = generate_kagome(3).unwrap();
        let s = random_support(&patch, seed, 14);
        let op = EllipticOperator::adjacency(&patch);
        let cert = cse_search(&op, &s).unwrap();
        prop_assert!(verify(&op, &s, &cert).unwrap());
        let cands = cse_search_float(&op, &s, 1e-8);
        prop_assert_eq!(cert.is_found(), !cands.is_empty());
        if let Some(Lambda::Rational(l)) = cert.lambda() {
            let lf = tess_core::rational::to_f64(l);
            prop_assert!(cands.iter().any(|c| (c.lambda.re - lf).abs() < 1e-6));
        }
    }

    #[test]
    fn theorem_holds_on_small_hyperbolic_balls(seed in 0u64..10_000, r in 1usize..=2) {
        let (patch, _) = generate_regular(3, 7, 5).unwrap();
        let op = EllipticOperator::random(&patch, seed, 4).unwrap();
        let s = SupportSet::ball(&patch, VertexId(0), r).unwrap();
        let cert = cse_search(&op, &s).unwrap();
        prop_assert!(!cert.is_found());
        prop_assert!(verify(&op, &s, &cert).unwrap());
    }
}

#[test]
fn certificate_text_forms() {
    let c = Certificate::NotFound { dims: vec![4, 1, 0] };
    assert_eq!(c.to_string(), "NOTFOUND dims=4,1,0");
    assert_eq!(Certificate::parse("NOTFOUND dims=4,1,0").unwrap(), c);
    let f = Certificate::Found {
        lambda: Lambda::Rational(rat(-2, 1)),
        u: BTreeMap::from([(VertexId(3), vec![int(1)]), (VertexId(5), vec![int(-1)])]),
        dims: vec![1],
    };
    assert_eq!(f.to_string(), "FOUND lambda=-2/1 u=3:1/1,5:-1/1 dims=1");
    assert_eq!(Certificate::parse(&f.to_string()).unwrap(), f);
    assert!(Certificate::parse("MAYBE").is_err());
    let _: Rational = rat(1, 2);
}
