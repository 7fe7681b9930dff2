use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use tess_core::generate::generate_regular;
use tess_core::metric::{
    check_forbidden_alternation, check_lemma28, cut_locus, distance_ball, enumerate_sphere, face_bfs, face_distance,
    growth_report, k_neighborhood, sphere_faces_touch_boundary, Label, Polygon,
};
use tess_core::rational::rat;
use tess_core::{FaceId, TessellationPatch};

/// Floyd–Warshall over the face adjacency graph.
fn all_pairs(patch: &TessellationPatch) -> HashMap<(FaceId, FaceId), usize> {
    let ids: Vec<FaceId> = patch.face_ids().collect();
    let n = ids.len();
    let idx: HashMap<FaceId, usize> = ids.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for g in patch.face_neighbors(ids[i]) {
            d[i][idx[&g]] = 1;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][m] + d[m][j] < d[i][j] {
                    d[i][j] = d[i][m] + d[m][j];
                }
            }
        }
    }
    let mut out = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            out.insert((ids[i], ids[j]), d[i][j]);
        }
    }
    out
}

fn labels(s: &str) -> Vec<Label> {
    s.chars()
        .map(|c| match c {
            'p' => Label::APlus,
            'a' => Label::A,
            _ => Label::B,
        })
        .collect()
}

fn is_rotation<T: PartialEq + Clone>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|s| a.iter().cycle().skip(s).take(a.len()).eq(b.iter()))
}

#[test]
fn ball_counts() {
    let (patch, base) = generate_regular(4, 4, 6).unwrap();
    for k in 0..=5 {
        let b = distance_ball(&patch, base, k).unwrap();
        assert_eq!(b.len(), 2 * k * k + 2 * k + 1, "k={k}");
    }
    let (patch, base) = generate_regular(6, 3, 3).unwrap();
    assert_eq!(distance_ball(&patch, base, 1).unwrap().len(), 7);
    let (patch, base) = generate_regular(3, 7, 3).unwrap();
    assert_eq!(distance_ball(&patch, base, 1).unwrap().len(), 4);
}

#[test]
fn ring_one_label_patterns() {
    for (p, q) in [(4, 4), (6, 3)] {
        let (patch, base) = generate_regular(p, q, 3).unwrap();
        let b1 = distance_ball(&patch, base, 1).unwrap();
        let seq = b1.label_sequence().unwrap();
        let want = labels(&"ppb".repeat(p));
        assert_eq!(seq.len(), 3 * p);
        assert!(is_rotation(&seq, &want), "({p},{q}): {seq:?}");
        assert_eq!(b1.is_admissible(), Ok(true));
    }
}

#[test]
fn plus_shape_degrees() {
    let (patch, base) = generate_regular(4, 4, 3).unwrap();
    let b1 = distance_ball(&patch, base, 1).unwrap();
    let corners: BTreeSet<_> = patch.cycle(base).unwrap().iter().copied().collect();
    for &v in b1.boundary() {
        let (i, e) = (b1.inner_degree(v).unwrap(), b1.exterior_degree(v).unwrap());
        if corners.contains(&v) {
            assert_eq!((i, e), (3, 1));
        } else {
            assert_eq!((i, e), (1, 3));
        }
    }
}

#[test]
fn bfs_matches_all_pairs_oracle() {
    for (p, q, r) in [(4, 4, 3), (3, 7, 2), (6, 3, 2), (5, 4, 1)] {
        let (patch, base) = generate_regular(p, q, r).unwrap();
        assert!(patch.face_count() <= 200, "({p},{q}) has {} faces", patch.face_count());
        let oracle = all_pairs(&patch);
        let layers = face_bfs(&patch, &[base], None);
        for f in patch.face_ids() {
            assert_eq!(layers.distance(f), Some(oracle[&(base, f)]));
        }
        let ids: Vec<FaceId> = patch.face_ids().collect();
        for &f in ids.iter().step_by(7) {
            for &g in ids.iter().step_by(3) {
                assert_eq!(face_distance(&patch, f, g).unwrap(), oracle[&(f, g)]);
            }
        }
    }
}

#[test]
fn geometry_lemmas_on_nonpositive_tilings() {
    for (p, q) in [(4, 4), (3, 6), (6, 3), (3, 7), (4, 5)] {
        let (patch, base) = generate_regular(p, q, 6).unwrap();
        assert!(cut_locus(&patch, base, 4).unwrap().is_empty(), "({p},{q})");
        for k in 0..=4 {
            let ball = distance_ball(&patch, base, k).unwrap();
            assert_eq!(ball.is_admissible(), Ok(true), "({p},{q}) k={k}");
            assert!(sphere_faces_touch_boundary(&patch, base, k).unwrap().is_empty());
            let en = enumerate_sphere(&patch, base, k).unwrap();
            check_lemma28(&en, &patch, base, k).unwrap();
            assert_eq!(check_forbidden_alternation(&patch, base, k), Ok(false));
            let tube = k_neighborhood(&ball, 1).unwrap();
            assert!(ball.tube_violations(&tube).is_empty(), "({p},{q}) k={k}");
            assert!(ball.belabel_violations(&tube).unwrap().is_empty(), "({p},{q}) k={k}");
            assert_eq!(tube.is_admissible(), Ok(true));
        }
    }
}

#[test]
fn neighbourhood_of_two_face_polygon() {
    let (patch, base) = generate_regular(3, 7, 4).unwrap();
    let nb = patch.face_neighbors(base)[0];
    let p = Polygon::new(&patch, [base, nb].into()).unwrap();
    assert_eq!(p.is_admissible(), Ok(true));
    let b1 = k_neighborhood(&p, 1).unwrap();
    assert_eq!(b1.is_admissible(), Ok(true));
    assert!(p.tube_violations(&b1).is_empty());
    assert_eq!(k_neighborhood(&p, 0).unwrap().faces(), p.faces());
    assert_eq!(
        k_neighborhood(&distance_ball(&patch, base, 0).unwrap(), 1).unwrap().faces(),
        distance_ball(&patch, base, 1).unwrap().faces()
    );
}

#[test]
fn growth_statistics() {
    let (patch, base) = generate_regular(4, 4, 6).unwrap();
    let rows = growth_report(&patch, base, 4).unwrap();
    let balls: Vec<usize> = rows.iter().map(|r| r.ball).collect();
    assert_eq!(balls, vec![1, 5, 13, 25, 41]);
    assert!(rows.iter().all(|r| r.mean_chi == rat(0, 1)));

    let (patch, base) = generate_regular(3, 7, 7).unwrap();
    let rows = growth_report(&patch, base, 5).unwrap();
    for r in &rows {
        assert_eq!(r.mean_chi, rat(-1, 14));
        if r.k >= 1 {
            assert!(r.ratio() >= rat(3, 2), "k={} ratio {}", r.k, r.ratio());
        }
    }
}

#[test]
fn kagome_cut_locus_is_computed() {
    let (patch, base) = tess_core::generate_kagome(6).unwrap();
    // No emptiness claim here; positive curvature is allowed to produce
    // local maxima.
    let _ = cut_locus(&patch, base, 4).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn distance_is_one_lipschitz(pq in prop::sample::select(vec![(4usize, 4usize), (3, 7), (6, 3), (5, 4)]), pick in 0usize..1000) {
        let (patch, base) = generate_regular(pq.0, pq.1, 3).unwrap();
        let ids: Vec<FaceId> = patch.face_ids().collect();
        let f = ids[pick % ids.len()];
        let layers = face_bfs(&patch, &[base], None);
        let df = layers.distance(f).unwrap();
        prop_assert_eq!(face_distance(&patch, f, base).unwrap(), df);
        for g in patch.face_neighbors(f) {
            let dg = layers.distance(g).unwrap();
            prop_assert!(df.abs_diff(dg) <= 1);
        }
    }
}

#[test]
fn bfs_sources_are_layer_zero() {
    let (patch, base) = generate_regular(4, 4, 2).unwrap();
    let nb = patch.face_neighbors(base);
    let layers = face_bfs(&patch, &[nb[1], nb[0]], Some(1));
    let mut want = vec![nb[0], nb[1]];
    want.sort();
    assert_eq!(layers.layers[0], want);
}
