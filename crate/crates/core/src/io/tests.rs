use std::collections::HashMap;
use std::path::Path;

use super::*;
use crate::codes::{xing, ProjectionMode};
use crate::construct::{torus, unknot, TorusSpec};
use crate::polylink::fixtures::hopf;

const HOPF: &str = "0.10 -3.29 -0.49\n1.11 0.69 0.13\n-1.64 -0.27 0.26\n\n0.01 2.30 0.44\n-0.07 2.10 -0.87\n0.48 -1.55 0.53\n";

fn trefoil() -> PolyLink {
    torus(&TorusSpec { p: 2, q: 3, n: 60, big_r: 3.0, small_r: 1.0 }).unwrap()
}

#[test]
fn text_hopf_listing() {
    let link = load_text(HOPF).unwrap();
    assert_eq!(link.components.len(), 2);
    assert!(link.components.iter().all(|c| c.closed && c.len() == 3));
    assert_eq!(link.components[1].vertices[2], Vec3::new(0.48, -1.55, 0.53));
    let saved = save_text(&link);
    assert_eq!(saved.lines().count(), 7);
    assert_eq!(saved.lines().nth(3), Some(""));
    assert_eq!(load_text(&saved).unwrap(), link);
}

#[test]
fn text_round_trip_and_errors() {
    let t = trefoil();
    let back = load_text(&save_text(&t)).unwrap();
    let a: Vec<_> = t.vertices().collect();
    let b: Vec<_> = back.vertices().collect();
    assert_eq!(a, b);
    assert!(save_text(&t).ends_with('\n'));
    assert_eq!(load_text(""), Err(KnotError::EmptyLink));
    assert_eq!(load_text("\n\n"), Err(KnotError::EmptyLink));
    assert_eq!(load_text("1 2 3\n1 2\n"), Err(KnotError::WrongArity { line: 2, found: 2 }));
    assert!(matches!(load_text("1 2 3\n1 x 3\n4 5 6\n"), Err(KnotError::Parse { position: 2, .. })));
    let commented = format!("% the Hopf link\n{HOPF}");
    assert_eq!(load_text(&commented).unwrap().components.len(), 2);
}

#[test]
fn native_round_trip() {
    let u = unknot(50, 5.0).unwrap();
    let bytes = save_native(&u);
    assert_eq!(&bytes[..5], b"KFRG1");
    let back = load_native(&bytes).unwrap();
    assert_eq!(save_native(&back), bytes);
    let a: Vec<_> = u.vertices().collect();
    let b: Vec<_> = back.vertices().collect();
    assert_eq!(a, b);

    let mut h = hopf();
    h.components[1].hidden = true;
    h.components[0].closed = false;
    let back = load_native(&save_native(&h)).unwrap();
    assert!(back.components[1].hidden && back.components[1].closed);
    assert!(!back.components[0].closed && !back.components[0].hidden);

    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert_eq!(load_native(&bad), Err(KnotError::BadMagic));
    assert_eq!(load_native(b"hello world"), Err(KnotError::BadMagic));
    assert_eq!(load_native(&bytes[..bytes.len() - 3]), Err(KnotError::Truncated));
    assert_eq!(load_native(b"KFR"), Err(KnotError::Truncated));
    let mut huge = b"KFRG1".to_vec();
    huge.extend(1u32.to_le_bytes());
    huge.extend([1u8; 13]);
    huge.extend(u32::MAX.to_le_bytes());
    assert_eq!(load_native(&huge), Err(KnotError::Truncated));
}

#[test]
fn vect_header() {
    let mut h = hopf();
    h.components[1].closed = false;
    let v = save_vect(&h);
    let lines: Vec<&str> = v.lines().collect();
    assert_eq!(lines[0], "VECT");
    assert_eq!(lines[1], "2 7 2");
    assert_eq!(lines[2], "4 3");
    assert_eq!(lines[3], "1 1");
    assert_eq!(lines[4], lines[7]);
    assert_eq!(lines.len(), 4 + 7 + 2);
}

#[test]
fn formats_by_extension() {
    assert_eq!(FileFormat::from_path(Path::new("knot")), FileFormat::Native);
    assert_eq!(FileFormat::from_path(Path::new("a/b.TXT")), FileFormat::Text);
    assert_eq!(FileFormat::from_path(Path::new("x.vect")), FileFormat::Vect);
    assert_eq!(FileFormat::from_path(Path::new("x.obj")), FileFormat::Obj);
    assert_eq!(FileFormat::from_path(Path::new("x.eps")), FileFormat::Eps);
}

/// Every undirected edge in exactly two faces, and each directed edge once,
/// so the surface is closed and consistently oriented.
fn audit(mesh: &TubeMesh) {
    let mut undirected: HashMap<(usize, usize), usize> = HashMap::new();
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &mesh.faces {
        assert!(f[0] != f[1] && f[1] != f[2] && f[0] != f[2]);
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            *undirected.entry((a.min(b), a.max(b))).or_default() += 1;
            *directed.entry((a, b)).or_default() += 1;
        }
    }
    assert!(undirected.values().all(|&n| n == 2));
    assert!(directed.values().all(|&n| n == 1));
}

#[test]
fn obj_tube_is_watertight() {
    let u = unknot(12, 3.0).unwrap();
    let p = TubeParams::new(0.3, 8, 4);
    let mesh = tube_mesh(&u, &p).unwrap();
    assert_eq!(mesh.vertices.len(), 12 * 4 * 8);
    audit(&mesh);
    // stepping back along the normal lands on the spline, close to the circle
    for (v, n) in mesh.vertices.iter().zip(&mesh.normals) {
        let c = v - n * 0.3;
        assert!(c.z.abs() < 1e-9 && (c.xy().norm() - 3.0).abs() < 0.05);
    }
    let obj = save_obj(&u, &p).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 384);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), mesh.faces.len());

    let line = crate::construct::line(Vec3::zeros(), Vec3::new(3.0, 1.0, 0.0), 5).unwrap();
    audit(&tube_mesh(&line, &p).unwrap());

    assert!(matches!(tube_mesh(&u, &TubeParams::new(0.3, 2, 4)), Err(KnotError::BadTubeParams(_))));
    assert!(matches!(tube_mesh(&u, &TubeParams::new(0.0, 8, 4)), Err(KnotError::BadTubeParams(_))));
    assert!(matches!(tube_mesh(&u, &TubeParams::new(0.3, 8, 0)), Err(KnotError::BadTubeParams(_))));
}

#[test]
fn trefoil_frame_is_continuous() {
    let t = trefoil();
    let mesh = tube_mesh(&t, &TubeParams::new(0.2, 6, 5)).unwrap();
    audit(&mesh);
    assert!(mesh.normals.iter().all(|n| n.iter().all(|x| x.is_finite()) && (n.norm() - 1.0).abs() < 1e-9));
    let f = rmf(&crate::spline::sample(&t.components[0].vertices, true, 5), true);
    for i in 0..f.normals.len() {
        assert!(f.normals[i].dot(&f.tangents[i]).abs() < 1e-9);
        let j = (i + 1) % f.normals.len();
        if j > 0 {
            // no flips between neighbouring rings
            assert!(f.normals[i].dot(&f.normals[j]) > 0.9);
        }
    }
}

#[test]
fn twfix_aligns_the_seam() {
    let u = unknot(30, 4.0).unwrap();
    let p = TubeParams::new(0.2, 8, 4);
    assert!(twfix(&u, 0, &p).unwrap().abs() < 1e-9);

    let t = trefoil();
    let mut p3 = TubeParams::new(0.2, 3, 6);
    let f = rmf(&crate::spline::sample(&t.components[0].vertices, true, 6), true);
    let fix = twfix(&t, 0, &p3).unwrap();
    let step = std::f64::consts::TAU / 3.0;
    assert!(fix > -step / 2.0 && fix <= step / 2.0);
    assert!(seam_mismatch(&f, 3, fix) < 1e-6);
    p3.twist = vec![fix];
    assert_eq!(twfix(&t, 0, &p3).unwrap(), fix);
    audit(&tube_mesh(&t, &p3).unwrap());

    let open = crate::construct::line(Vec3::zeros(), Vec3::x(), 4).unwrap();
    assert_eq!(twfix(&open, 0, &p), Err(KnotError::OpenComponent(0)));
}

/// Minimal EPS syntax check.
fn check_eps(eps: &str) -> [i64; 4] {
    let mut lines = eps.lines();
    assert_eq!(lines.next(), Some("%!PS-Adobe-3.0 EPSF-3.0"));
    let bbox = eps.lines().find_map(|l| l.strip_prefix("%%BoundingBox: ")).expect("bounding box");
    let b: Vec<i64> = bbox.split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(b.len(), 4);
    let count = |w: &str| eps.split_whitespace().filter(|t| *t == w).count();
    assert_eq!(count("save"), count("restore"));
    assert_eq!(count("gsave"), count("grestore"));
    assert!(eps.trim_end().ends_with("%%EOF"));
    [b[0], b[1], b[2], b[3]]
}

fn strokes(eps: &str) -> usize {
    eps.lines().filter(|l| *l == "stroke").count()
}

#[test]
fn eps_trefoil_breaks_each_under_strand() {
    let t = trefoil();
    let eps = psout(&t, &ProjectionMode::Z, &EpsOptions::default()).unwrap();
    check_eps(&eps);
    assert_eq!(strokes(&eps), xing(&t, &ProjectionMode::Z).unwrap());
    assert_eq!(eps.matches("closepath").count(), 0);
    assert_eq!(eps, psout(&t, &ProjectionMode::Z, &EpsOptions::default()).unwrap());

    let smooth = psout(&t, &ProjectionMode::Z, &EpsOptions { smooth: true, ..Default::default() }).unwrap();
    check_eps(&smooth);
    assert_eq!(strokes(&smooth), 3);
}

#[test]
fn eps_gap_length() {
    // each gap is pserase strand widths long
    let t = trefoil();
    let drawn = |pserase: f64| -> f64 {
        let eps = psout(&t, &ProjectionMode::Z, &EpsOptions { pserase, ..Default::default() }).unwrap();
        let mut total = 0.0;
        let mut last: Option<(f64, f64)> = None;
        for l in eps.lines() {
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() == 3 && (parts[2] == "moveto" || parts[2] == "lineto") {
                let p = (parts[0].parse::<f64>().unwrap(), parts[1].parse::<f64>().unwrap());
                if parts[2] == "lineto" {
                    let q = last.unwrap();
                    total += ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
                }
                last = Some(p);
            }
        }
        total
    };
    let full = drawn(0.0);
    let gapped = drawn(4.0);
    assert!((full - gapped - 3.0 * 4.0 * 1.5).abs() < 0.05, "{full} {gapped}");
}

#[test]
fn eps_plain_circle_and_options() {
    let u = unknot(24, 2.0).unwrap();
    let eps = psout(&u, &ProjectionMode::Z, &EpsOptions::default()).unwrap();
    check_eps(&eps);
    assert_eq!(strokes(&eps), 1);
    assert_eq!(eps.matches("closepath").count(), 1);

    let flat = crate::polylink::transform(&u, &crate::polylink::Transform::Scale(1.0)).unwrap();
    let mut squashed = flat.clone();
    for v in squashed.vertices_mut() {
        v.y *= 0.3;
    }
    let tight = check_eps(&psout(&squashed, &ProjectionMode::Z, &EpsOptions::default()).unwrap());
    assert!(tight[2] > tight[3]);
    let sq = EpsOptions { bbox: BBox::Square, ..Default::default() };
    let square = check_eps(&psout(&squashed, &ProjectionMode::Z, &sq).unwrap());
    assert_eq!(square[2], square[3]);

    let t = trefoil();
    for mode in [41, 45] {
        let eps = psout(&t, &ProjectionMode::Z, &EpsOptions { psmode: mode, ..Default::default() }).unwrap();
        check_eps(&eps);
        assert!(eps.contains(if mode == 45 { "eofill" } else { "1 setgray" }));
    }
    assert!(psout(&u, &ProjectionMode::Z, &EpsOptions { psmode: 45, ..Default::default() }).is_ok());
    assert_eq!(
        psout(&t, &ProjectionMode::Z, &EpsOptions { psmode: 42, ..Default::default() }),
        Err(KnotError::UnsupportedMode(42))
    );
}

#[test]
fn eps_rejects_degenerate_views() {
    let stacked = PolyLink::new(vec![
        Component::new(vec![Vec3::zeros(), Vec3::x(), Vec3::new(1.0, 1.0, 0.0)], true),
        Component::new(vec![Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 0.0, 1.0), Vec3::new(1.0, 1.0, 1.0)], true),
    ]);
    assert!(matches!(
        psout(&stacked, &ProjectionMode::Z, &EpsOptions::default()),
        Err(KnotError::DegenerateProjection(_))
    ));
}

#[test]
fn colours() {
    assert_eq!(parse_color("Red").unwrap(), Color::new(1.0, 0.0, 0.0));
    assert_eq!(parse_color("Navy Blue").unwrap(), parse_color("navyblue").unwrap());
    let c = parse_color("rgb:0.85/0.3/0.12").unwrap();
    assert!((c.r - 0.85).abs() < 1e-12 && (c.g - 0.3).abs() < 1e-12 && (c.b - 0.12).abs() < 1e-12);
    let c = parse_color("rgbi:199/102/255").unwrap();
    assert!((c.r - 199.0 / 255.0).abs() < 1e-12 && (c.b - 1.0).abs() < 1e-12);
    assert!(parse_color("rgb:.3/.5/1").is_ok());
    assert!(parse_color("rgb:1/2").is_err());
    assert!(parse_color("chartreuse-ish").is_err());
    assert!(color_names().count() >= 22);
}
