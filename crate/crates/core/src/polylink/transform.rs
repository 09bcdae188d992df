use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PolyLink;
use crate::error::{KnotError, Result};
use crate::geom::{axis_rotation, Mat3, Vec3};

/// Coordinate-changing transforms. None of them touch component structure,
/// closure flags or colours.
#[derive(Clone, Debug, PartialEq)]
pub enum Transform {
    /// Rotate the embedding about a coordinate axis (0 = x, 1 = y, 2 = z).
    About { axis: usize, degrees: f64 },
    Translate { offset: Vec3, component: Option<usize> },
    /// Rigidly move the link so vertex 0 of component 0 lands on the target.
    TranslateTo(Vec3),
    Scale(f64),
    ScaleXyz(Vec3),
    Reflect { axes: [bool; 3], component: Option<usize> },
    /// Reflect in one of the seven non-empty axis subsets, chosen uniformly.
    ReflectRandom { seed: u64 },
    /// Flatten each component onto the plane through its centroid
    /// perpendicular to `direction`.
    Project { direction: Vec3 },
    ProjectRandom { seed: u64 },
}

pub fn transform(link: &PolyLink, spec: &Transform) -> Result<PolyLink> {
    let mut out = link.clone();
    match spec {
        Transform::About { axis, degrees } => {
            let r = axis_rotation(*axis, *degrees);
            out.vertices_mut().for_each(|v| *v = r * *v);
            rotate_anchors(&mut out, &r);
        }
        Transform::Translate { offset, component } => {
            for (ci, c) in out.components.iter_mut().enumerate() {
                if component.is_none_or(|k| k == ci) {
                    c.vertices.iter_mut().for_each(|v| *v += offset);
                }
            }
            if let Some(k) = component {
                link.component(*k)?;
            }
        }
        Transform::TranslateTo(target) => {
            let first = link
                .components
                .first()
                .and_then(|c| c.vertices.first())
                .ok_or(KnotError::EmptyLink)?;
            let offset = target - first;
            out.vertices_mut().for_each(|v| *v += offset);
        }
        Transform::Scale(s) => {
            if *s == 0.0 {
                return Err(KnotError::ZeroScale);
            }
            out.vertices_mut().for_each(|v| *v *= *s);
        }
        Transform::ScaleXyz(s) => {
            if s.iter().any(|c| *c == 0.0) {
                return Err(KnotError::ZeroScale);
            }
            out.vertices_mut().for_each(|v| *v = v.component_mul(s));
        }
        Transform::Reflect { axes, component } => {
            if let Some(k) = component {
                link.component(*k)?;
            }
            let flip = Vec3::new(
                if axes[0] { -1.0 } else { 1.0 },
                if axes[1] { -1.0 } else { 1.0 },
                if axes[2] { -1.0 } else { 1.0 },
            );
            for (ci, c) in out.components.iter_mut().enumerate() {
                if component.is_none_or(|k| k == ci) {
                    c.vertices.iter_mut().for_each(|v| *v = v.component_mul(&flip));
                }
            }
        }
        Transform::ReflectRandom { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mask: u8 = rng.gen_range(1..8);
            let axes = [mask & 1 != 0, mask & 2 != 0, mask & 4 != 0];
            return transform(link, &Transform::Reflect { axes, component: None });
        }
        Transform::Project { direction } => {
            let n = direction.try_normalize(0.0).ok_or(KnotError::BadSpec("zero projection direction".into()))?;
            for c in out.components.iter_mut() {
                let mean = c.vertices.iter().map(|v| v.dot(&n)).sum::<f64>() / c.len() as f64;
                c.vertices.iter_mut().for_each(|v| *v += n * (mean - v.dot(&n)));
            }
        }
        Transform::ProjectRandom { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            return transform(link, &Transform::Project { direction: random_unit(&mut rng) });
        }
    }
    Ok(out)
}

pub(super) fn rotate_anchors(link: &mut PolyLink, r: &Mat3) {
    use super::Anchor;
    for c in link.components.iter_mut() {
        for a in c.anchors.iter_mut().flatten() {
            *a = match *a {
                Anchor::Spring(p) => Anchor::Spring(r * p),
                Anchor::Pin(p) => Anchor::Pin(r * p),
            };
        }
    }
}

/// Uniform direction on the unit sphere.
pub fn random_unit(rng: &mut impl Rng) -> Vec3 {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(r * phi.cos(), r * phi.sin(), z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitMode {
    Extent,
    MinDist,
    AvLength,
}

pub fn fitto(link: &PolyLink, mode: FitMode, value: f64) -> Result<PolyLink> {
    if !(value > 0.0) {
        return Err(KnotError::BadSpec(format!("fitto value must be positive, got {value}")));
    }
    if link.is_empty() {
        return Err(KnotError::EmptyLink);
    }
    match mode {
        FitMode::Extent => {
            let centred = centre(link, CentreMode::BoundingBox)?;
            let extent = centred.extent();
            if extent == 0.0 {
                return Err(KnotError::DegenerateLink);
            }
            let mut out = transform(&centred, &Transform::Scale(value / extent))?;
            // pin the maximum exactly despite rounding in the multiply
            let e = out.extent();
            for v in out.vertices_mut() {
                for c in v.iter_mut() {
                    if c.abs() == e {
                        *c = value.copysign(*c);
                    }
                }
            }
            Ok(out)
        }
        FitMode::MinDist => {
            let (d, _) = link.min_nonadjacent_distance()?;
            if d == 0.0 {
                return Err(KnotError::DegenerateLink);
            }
            transform(link, &Transform::Scale(value / d))
        }
        FitMode::AvLength => {
            let (total, count) = link
                .components
                .iter()
                .fold((0.0, 0usize), |(t, n), c| (t + c.arc_length(), n + c.edge_count()));
            if count == 0 || total == 0.0 {
                return Err(KnotError::DegenerateLink);
            }
            transform(link, &Transform::Scale(value * count as f64 / total))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentreMode {
    BoundingBox,
    Mass,
}

pub fn centre(link: &PolyLink, mode: CentreMode) -> Result<PolyLink> {
    let centroid = link.centroid().ok_or(KnotError::EmptyLink)?;
    let c = match mode {
        CentreMode::Mass => centroid,
        CentreMode::BoundingBox => {
            let mut lo = Vec3::repeat(f64::INFINITY);
            let mut hi = Vec3::repeat(f64::NEG_INFINITY);
            for v in link.vertices() {
                lo = lo.inf(v);
                hi = hi.sup(v);
            }
            (lo + hi) / 2.0
        }
    };
    transform(link, &Transform::Translate { offset: -c, component: None })
}

/// Result of principal-axis alignment. `degenerate` flags nearly equal
/// principal moments, in which case the chosen axes are arbitrary.
#[derive(Clone, Debug, PartialEq)]
pub struct Aligned {
    pub link: PolyLink,
    pub rotation: Mat3,
    pub moments: [f64; 3],
    pub degenerate: bool,
}

/// Centre the vertex set and rotate it so its principal axes coincide with
/// the coordinate axes: the direction of greatest spread on x, the least on z.
pub fn align_axes(link: &PolyLink) -> Result<Aligned> {
    let centred = centre(link, CentreMode::Mass)?;
    let mut m = Mat3::zeros();
    for v in centred.vertices() {
        m += v * v.transpose();
    }
    let n = centred.bead_count() as f64;
    m /= n;
    let eig = m.symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let moments = order.map(|i| eig.eigenvalues[i]);
    let scale = moments[0].abs().max(f64::MIN_POSITIVE);
    let degenerate = (moments[0] - moments[1]).abs() <= 1e-9 * scale || (moments[1] - moments[2]).abs() <= 1e-9 * scale;
    let mut axes: Vec<Vec3> = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    for a in axes.iter_mut().take(2) {
        // deterministic sign: largest component positive
        let k = a.iamax();
        if a[k] < 0.0 {
            *a = -*a;
        }
    }
    axes[2] = axes[0].cross(&axes[1]);
    let rotation = Mat3::from_rows(&[axes[0].transpose(), axes[1].transpose(), axes[2].transpose()]);
    let mut out = centred.clone();
    out.vertices_mut().for_each(|v| *v = rotation * *v);
    rotate_anchors(&mut out, &rotation);
    Ok(Aligned { link: out, rotation, moments, degenerate })
}
