//! The camera. Nothing here touches coordinates except [`rotate_fix`].

use super::PolyLink;
use crate::error::{KnotError, Result};
use crate::geom::{axis_rotation, Mat3, Vec2, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Projection {
    #[default]
    Perspective,
    Orthographic,
}

/// `X`, `Y`, `Z` are the model axes (possibly already rotated); `I`, `J`, `K`
/// are fixed to the screen, with `K` pointing into it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViewAxis {
    X,
    Y,
    Z,
    I,
    J,
    K,
}

impl std::str::FromStr for ViewAxis {
    type Err = KnotError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "x" | "X" => ViewAxis::X,
            "y" | "Y" => ViewAxis::Y,
            "z" | "Z" => ViewAxis::Z,
            "i" | "I" => ViewAxis::I,
            "j" | "J" => ViewAxis::J,
            "k" | "K" => ViewAxis::K,
            _ => return Err(KnotError::Parse { position: 0, message: format!("unknown axis '{s}'") }),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ViewTransform {
    pub rotation: Mat3,
    pub vscale: f64,
    pub pan: Vec3,
    pub projection: Projection,
    pub camera_distance: f64,
}

impl Default for ViewTransform {
    fn default() -> Self {
        ViewTransform {
            rotation: Mat3::identity(),
            vscale: 1.0,
            pan: Vec3::zeros(),
            projection: Projection::Perspective,
            camera_distance: 8.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ViewOp {
    Rotate(ViewAxis, f64),
    SetVscale(f64),
    SetProjection(Projection),
    Pan(Vec3),
    /// Drop all rotations.
    Unit,
    /// Drop rotations and pans.
    Untran,
}

pub fn view_ops(view: &ViewTransform, op: ViewOp) -> Result<ViewTransform> {
    let mut out = view.clone();
    match op {
        ViewOp::Rotate(axis, degrees) => {
            out.rotation = match axis {
                ViewAxis::X => view.rotation * axis_rotation(0, degrees),
                ViewAxis::Y => view.rotation * axis_rotation(1, degrees),
                ViewAxis::Z => view.rotation * axis_rotation(2, degrees),
                // k goes into the screen, i.e. along -z in eye space
                ViewAxis::I => axis_rotation(0, degrees) * view.rotation,
                ViewAxis::J => axis_rotation(1, degrees) * view.rotation,
                ViewAxis::K => axis_rotation(2, -degrees) * view.rotation,
            };
            reorthonormalize(&mut out.rotation);
        }
        ViewOp::SetVscale(v) => {
            if !(v > 0.0) || !v.is_finite() {
                return Err(KnotError::ZeroScale);
            }
            out.vscale = v;
        }
        ViewOp::SetProjection(p) => out.projection = p,
        ViewOp::Pan(d) => out.pan += d,
        ViewOp::Unit => out.rotation = Mat3::identity(),
        ViewOp::Untran => {
            out.rotation = Mat3::identity();
            out.pan = Vec3::zeros();
        }
    }
    Ok(out)
}

/// Keep long chains of small rotations from drifting off SO(3).
fn reorthonormalize(m: &mut Mat3) {
    let x = m.column(0).normalize();
    let y = (m.column(1) - x * x.dot(&m.column(1))).normalize();
    let z = x.cross(&y);
    *m = Mat3::from_columns(&[x, y, z]);
}

impl ViewTransform {
    /// Eye-space position of a model point.
    pub fn eye(&self, p: &Vec3) -> Vec3 {
        self.rotation * p * self.vscale + self.pan
    }

    /// Screen position of a model point. Perspective divides by the distance
    /// to the camera at `(0, 0, camera_distance)`; points at or behind the
    /// camera map to `None`.
    pub fn screen(&self, p: &Vec3) -> Option<Vec2> {
        let q = self.eye(p);
        match self.projection {
            Projection::Orthographic => Some(Vec2::new(q.x, q.y)),
            Projection::Perspective => {
                let depth = self.camera_distance - q.z;
                if depth <= 0.0 {
                    None
                } else {
                    let f = self.camera_distance / depth;
                    Some(Vec2::new(q.x * f, q.y * f))
                }
            }
        }
    }
}

/// Apply the view rotation to the coordinates and reset it, so the picture on
/// screen stays the same.
pub fn rotate_fix(link: &PolyLink, view: &ViewTransform) -> (PolyLink, ViewTransform) {
    let mut out = link.clone();
    let r = view.rotation;
    out.vertices_mut().for_each(|v| *v = r * *v);
    super::transform::rotate_anchors(&mut out, &r);
    let mut v = view.clone();
    v.rotation = Mat3::identity();
    (out, v)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{transform, Transform};
    use super::*;

    #[test]
    fn rotate_then_fix_matches_about() {
        let h = hopf();
        let v = view_ops(&ViewTransform::default(), ViewOp::Rotate(ViewAxis::X, 33.0)).unwrap();
        let (fixed, v2) = rotate_fix(&h, &v);
        assert_eq!(v2.rotation, Mat3::identity());
        let about = transform(&h, &Transform::About { axis: 0, degrees: 33.0 }).unwrap();
        for (a, b) in fixed.vertices().zip(about.vertices()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fix_preserves_screen_positions() {
        let h = hopf();
        let mut v = ViewTransform::default();
        for op in [
            ViewOp::Rotate(ViewAxis::X, 20.0),
            ViewOp::Rotate(ViewAxis::J, -47.0),
            ViewOp::Rotate(ViewAxis::Z, 101.0),
            ViewOp::SetVscale(0.7),
            ViewOp::Pan(Vec3::new(0.3, -0.2, 0.5)),
        ] {
            v = view_ops(&v, op).unwrap();
        }
        let (fixed, v2) = rotate_fix(&h, &v);
        for (p, q) in h.vertices().zip(fixed.vertices()) {
            let a = v.screen(p).unwrap();
            let b = v2.screen(q).unwrap();
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn unit_and_untran_reset() {
        let mut v = ViewTransform::default();
        for k in 0..40 {
            v = view_ops(&v, ViewOp::Rotate(ViewAxis::I, 7.0 + k as f64)).unwrap();
        }
        assert!((v.rotation.determinant() - 1.0).abs() < 1e-12);
        v = view_ops(&v, ViewOp::Pan(Vec3::new(1.0, 2.0, 3.0))).unwrap();
        let u = view_ops(&v, ViewOp::Unit).unwrap();
        assert_eq!(u.rotation, Mat3::identity());
        assert_eq!(u.pan, v.pan);
        let t = view_ops(&v, ViewOp::Untran).unwrap();
        assert_eq!(t.pan, Vec3::zeros());
        assert!(view_ops(&v, ViewOp::SetVscale(0.0)).is_err());
    }

    #[test]
    fn identity_fix_is_noop() {
        let h = hopf();
        let (f, _) = rotate_fix(&h, &ViewTransform::default());
        assert_eq!(f, h);
    }

    #[test]
    fn screen_axes_commute_differently() {
        // model-axis and screen-axis rotations agree from identity but not after
        // a prior rotation
        let base = view_ops(&ViewTransform::default(), ViewOp::Rotate(ViewAxis::Y, 90.0)).unwrap();
        let a = view_ops(&base, ViewOp::Rotate(ViewAxis::X, 30.0)).unwrap();
        let b = view_ops(&base, ViewOp::Rotate(ViewAxis::I, 30.0)).unwrap();
        assert!((a.rotation - b.rotation).norm() > 0.1);
    }

    #[test]
    fn perspective_shrinks_far_points() {
        let v = ViewTransform::default();
        let near = v.screen(&Vec3::new(1.0, 0.0, 2.0)).unwrap();
        let far = v.screen(&Vec3::new(1.0, 0.0, -2.0)).unwrap();
        assert!(near.x > far.x);
        let o = view_ops(&v, ViewOp::SetProjection(Projection::Orthographic)).unwrap();
        assert_eq!(o.screen(&Vec3::new(1.0, 0.0, -2.0)).unwrap(), Vec2::new(1.0, 0.0));
        assert!(v.screen(&Vec3::new(0.0, 0.0, 9.0)).is_none());
    }
}
