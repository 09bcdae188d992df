use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::measures::lnknum;
use crate::polylink::fixtures::{hopf, ngon};
use crate::polylink::{transform, Component, Transform, ViewAxis, ViewOp};

fn trefoil(n: usize) -> PolyLink {
    let vs = (0..n)
        .map(|i| {
            // half-step phase keeps the crossings off the vertices
            let t = std::f64::consts::TAU * (i as f64 + 0.5) / n as f64;
            let rad = 3.0 + (3.0 * t).cos();
            Vec3::new(rad * (2.0 * t).cos(), rad * (2.0 * t).sin(), (3.0 * t).sin())
        })
        .collect();
    PolyLink::new(vec![Component::new(vs, true)])
}

/// Smallest code over every basepoint, both orientations and mirror image.
pub(crate) fn normalize_dt(code: &[i64]) -> Vec<i64> {
    let n = code.len();
    if n == 0 {
        return Vec::new();
    }
    let m = 2 * n;
    // partner[label] and over[label] for labels 1..=2n
    let mut partner = vec![0usize; m + 1];
    let mut over = vec![false; m + 1];
    for (k, &e) in code.iter().enumerate() {
        let odd = 2 * k + 1;
        let even = e.unsigned_abs() as usize;
        partner[odd] = even;
        partner[even] = odd;
        over[even] = e < 0;
        over[odd] = e > 0;
    }
    let mut best: Option<Vec<i64>> = None;
    for reverse in [false, true] {
        for s in 0..m {
            let relabel = |l: usize| {
                let l = if reverse { m + 1 - l } else { l };
                (l - 1 + m - s) % m + 1
            };
            let mut out = vec![0i64; n];
            for l in 1..=m {
                let nl = relabel(l);
                if nl % 2 == 1 {
                    let np = relabel(partner[l]);
                    out[nl / 2] = if over[partner[l]] { -(np as i64) } else { np as i64 };
                }
            }
            if out[0] < 0 {
                out.iter_mut().for_each(|x| *x = -*x);
            }
            if best.as_ref().is_none_or(|b| out < *b) {
                best = Some(out);
            }
        }
    }
    best.unwrap()
}

#[test]
fn convex_polygon_has_no_crossings() {
    let d = project_crossings(&ngon(20, 3.0), &ProjectionMode::Z).unwrap();
    assert!(d.is_empty());
    assert_eq!(dowker(&ngon(20, 3.0), &ProjectionMode::Z).unwrap(), Vec::<i64>::new());
}

#[test]
fn trefoil_diagram() {
    let t = trefoil(60);
    let d = project_crossings(&t, &ProjectionMode::Z).unwrap();
    assert_eq!(d.len(), 3);
    assert!(d.crossings.iter().all(|c| c.sign == d.crossings[0].sign));
    let dt = dowker(&t, &ProjectionMode::Z).unwrap();
    assert_eq!(normalize_dt(&dt), normalize_dt(&[4, 6, 2]));
    let mut abs: Vec<i64> = dt.iter().map(|x| x.abs()).collect();
    abs.sort();
    assert_eq!(abs, vec![2, 4, 6]);
    let egc = gauss_extended(&t, &ProjectionMode::Z).unwrap();
    assert_eq!(egc[0].len(), 6);
    for w in egc[0].windows(2) {
        assert_ne!(w[0].over, w[1].over);
    }
}

#[test]
fn dt_signs_follow_even_over() {
    // mirror image flips every sign
    let t = trefoil(60);
    let m = transform(&t, &Transform::Reflect { axes: [false, false, true], component: None }).unwrap();
    let a = dowker(&t, &ProjectionMode::Z).unwrap();
    let b = dowker(&m, &ProjectionMode::Z).unwrap();
    assert_eq!(a.iter().map(|x| -x).collect::<Vec<_>>(), b);
}

#[test]
fn hopf_diagram_matches_linking_number() {
    let h = hopf();
    let lk = lnknum(&h).unwrap()[(0, 1)];
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dir = crate::polylink::random_unit(&mut rng);
        let d = project_crossings(&h, &ProjectionMode::Direction(dir)).unwrap();
        assert_eq!(d.linking(0, 1), lk as f64);
        assert!(d.len() >= 2);
    }
    let egc = gauss_extended(&h, &ProjectionMode::Z).unwrap();
    let n = project_crossings(&h, &ProjectionMode::Z).unwrap().len();
    if n == 2 {
        for comp in &egc {
            assert_eq!(comp.iter().filter(|t| t.over).count(), 1);
            assert_eq!(comp.iter().filter(|t| !t.over).count(), 1);
        }
    }
    assert_eq!(dowker(&h, &ProjectionMode::Z), Err(KnotError::MultiComponent));
}

#[test]
fn stacked_squares_are_degenerate() {
    let sq = |z: f64| {
        Component::new(
            vec![
                Vec3::new(0.0, 0.0, z),
                Vec3::new(1.0, 0.0, z),
                Vec3::new(1.0, 1.0, z),
                Vec3::new(0.0, 1.0, z),
            ],
            true,
        )
    };
    let link = PolyLink::new(vec![sq(0.0), sq(1.0)]);
    assert!(matches!(project_crossings(&link, &ProjectionMode::Z), Err(KnotError::DegenerateProjection(_))));
}

fn random_link(rng: &mut ChaCha8Rng) -> PolyLink {
    let comps = rng.gen_range(1..=3);
    PolyLink::new(
        (0..comps)
            .map(|_| {
                let n = rng.gen_range(4..12);
                Component::new(
                    (0..n)
                        .map(|_| Vec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                        .collect(),
                    true,
                )
            })
            .collect(),
    )
}

#[test]
fn every_crossing_once_over_once_under() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let link = random_link(&mut rng);
        let code = gauss_extended(&link, &ProjectionMode::Z).unwrap();
        let n = code.iter().map(Vec::len).sum::<usize>() / 2;
        let mut o = vec![0; n + 1];
        let mut u = vec![0; n + 1];
        for t in code.iter().flatten() {
            if t.over {
                o[t.crossing] += 1;
            } else {
                u[t.crossing] += 1;
            }
        }
        assert!((1..=n).all(|k| o[k] == 1 && u[k] == 1));
        assert_eq!(count_crossings(&link, &Vec3::z()), n);
    }
}

#[test]
fn view_codes_equal_baked_codes() {
    let t = trefoil(60);
    let mut v = ViewTransform::default();
    v = crate::polylink::view_ops(&v, ViewOp::Rotate(ViewAxis::X, 40.0)).unwrap();
    v = crate::polylink::view_ops(&v, ViewOp::Rotate(ViewAxis::J, 25.0)).unwrap();
    let (baked, _) = crate::polylink::rotate_fix(&t, &v);
    assert_eq!(
        gauss_extended(&t, &ProjectionMode::View(v)).unwrap(),
        gauss_extended(&baked, &ProjectionMode::Z).unwrap()
    );
}

#[test]
fn xing_invariances() {
    let t = trefoil(48);
    let turned = transform(&t, &Transform::About { axis: 2, degrees: 37.0 }).unwrap();
    let scaled = transform(&t, &Transform::Scale(2.5)).unwrap();
    let n = xing(&t, &ProjectionMode::Z).unwrap();
    assert_eq!(xing(&turned, &ProjectionMode::Z).unwrap(), n);
    assert_eq!(xing(&scaled, &ProjectionMode::Z).unwrap(), n);
}

#[test]
fn formats() {
    assert_eq!(format_dowker(&[4, -6, 2]), "4 -6 2");
    let t = |over, crossing, sign| GaussToken { over, crossing, sign };
    let code = vec![vec![t(true, 1, 1), t(false, 2, -1)], vec![t(false, 1, 1), t(true, 2, -1)]];
    assert_eq!(format_gauss(&code), "O1+,U2-/U1+,O2-");
}
