//! Geometric and topological quantities of a link.

mod gauss;

pub use gauss::{acn_writhe, component_writhes, gauss_pair, lnknum, AcnWrithe};

use crate::error::{KnotError, Result};
use crate::geom::Vec3;
use crate::polylink::{Component, PolyLink};

/// Min, max, mean and total of a list of values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub total: f64,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let total: f64 = values.iter().sum();
        Summary {
            count: values.len(),
            total,
            min: values.iter().cloned().fold(f64::INFINITY, f64::min),
            max: values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            mean: if values.is_empty() { f64::NAN } else { total / values.len() as f64 },
        }
    }

    /// `max / min`.
    pub fn ratio(&self) -> f64 {
        self.max / self.min
    }
}

/// Per-component summaries followed by one for the whole link.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub components: Vec<Summary>,
    pub all: Summary,
}

fn report(link: &PolyLink, per: impl Fn(&Component) -> Vec<f64>) -> MeasureReport {
    let lists: Vec<Vec<f64>> = link.components.iter().map(per).collect();
    let flat: Vec<f64> = lists.iter().flatten().copied().collect();
    MeasureReport { components: lists.iter().map(|l| Summary::of(l)).collect(), all: Summary::of(&flat) }
}

/// Edge lengths.
pub fn length_stats(link: &PolyLink) -> MeasureReport {
    report(link, Component::edge_lengths)
}

/// Internal angle in degrees at every vertex with two incident edges.
/// With `turning` the values are `180 - internal` instead.
pub fn angle_stats(link: &PolyLink, turning: bool) -> MeasureReport {
    report(link, |c| {
        internal_angles(c).into_iter().map(|a| if turning { 180.0 - a } else { a }).collect()
    })
}

fn internal_angles(c: &Component) -> Vec<f64> {
    let n = c.len();
    let inner: Box<dyn Iterator<Item = usize>> = if c.closed && n >= 3 {
        Box::new(0..n)
    } else {
        Box::new(1..n.saturating_sub(1))
    };
    inner
        .filter_map(|i| {
            let v = c.vertices[i];
            let a = c.vertices[(i + n - 1) % n] - v;
            let b = c.vertices[(i + 1) % n] - v;
            let (la, lb) = (a.norm(), b.norm());
            (la > 0.0 && lb > 0.0).then(|| (a.dot(&b) / (la * lb)).clamp(-1.0, 1.0).acos().to_degrees())
        })
        .collect()
}

/// Root-mean-square distance of the vertices from their centroid.
pub fn rog(link: &PolyLink) -> Result<f64> {
    let c = link.centroid().ok_or(KnotError::EmptyLink)?;
    let n = link.bead_count() as f64;
    Ok((link.vertices().map(|v| (v - c).norm_squared()).sum::<f64>() / n).sqrt())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Info {
    pub components: usize,
    pub beads: Vec<usize>,
    pub closed: Vec<bool>,
    pub total_beads: usize,
}

pub fn info(link: &PolyLink) -> Info {
    Info {
        components: link.components.len(),
        beads: link.components.iter().map(Component::len).collect(),
        closed: link.components.iter().map(|c| c.closed).collect(),
        total_beads: link.bead_count(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyModel {
    /// Minimum distance energy: `Σ lᵢ lⱼ / d(eᵢ, eⱼ)²`.
    Md,
    /// Symmetric energy: `Σ lᵢ lⱼ / |mᵢ − mⱼ|²` with `m` the edge midpoints.
    Symm,
    Nbeads,
}

/// Sums run over unordered non-adjacent edge pairs.
pub fn energy(link: &PolyLink, model: EnergyModel) -> Result<f64> {
    if model == EnergyModel::Nbeads {
        return Ok(link.bead_count() as f64);
    }
    let fe = link.flat_edges();
    let len: Vec<f64> = (0..fe.len()).map(|i| (fe.b[i] - fe.a[i]).norm()).collect();
    let mid: Vec<Vec3> = (0..fe.len()).map(|i| (fe.a[i] + fe.b[i]) / 2.0).collect();
    let mut total = 0.0;
    let mut touching = false;
    fe.for_each_nonadjacent(|i, j| {
        let d = match model {
            EnergyModel::Md => fe.distance(i, j),
            _ => (mid[i] - mid[j]).norm(),
        };
        if d == 0.0 {
            touching = true;
        }
        total += len[i] * len[j] / (d * d);
    });
    if touching {
        return Err(KnotError::TouchingSegments);
    }
    Ok(total)
}

/// A rough tube radius: the smaller of half the closest non-adjacent
/// approach and the tightest local turning radius `l / (2 sin(θ/2))`, where
/// θ is the turning angle at a vertex and `l` its shorter incident edge.
pub fn thickness(link: &PolyLink) -> Result<f64> {
    let global = match link.min_nonadjacent_distance() {
        Ok((d, _)) if d == 0.0 => return Err(KnotError::TouchingSegments),
        Ok((d, _)) => d / 2.0,
        Err(_) => f64::INFINITY,
    };
    let mut local = f64::INFINITY;
    for c in &link.components {
        let n = c.len();
        let range = if c.closed { 0..n } else { 1..n.saturating_sub(1) };
        for i in range {
            let v = c.vertices[i];
            let a = v - c.vertices[(i + n - 1) % n];
            let b = c.vertices[(i + 1) % n] - v;
            let (la, lb) = (a.norm(), b.norm());
            if la == 0.0 || lb == 0.0 {
                continue;
            }
            let turn = (a.dot(&b) / (la * lb)).clamp(-1.0, 1.0).acos();
            let s = (turn / 2.0).sin();
            if s > 0.0 {
                local = local.min(la.min(lb) / (2.0 * s));
            }
        }
    }
    Ok(global.min(local))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polylink::fixtures::{ngon, square};
    use crate::polylink::{edit_beads, transform, BeadEdit, Transform};
    use std::f64::consts::PI;

    #[test]
    fn regular_polygon_lengths_and_rog() {
        let p = ngon(50, 5.0);
        let r = length_stats(&p);
        let edge = 10.0 * (PI / 50.0).sin();
        assert!((r.all.min - edge).abs() < 1e-12 && (r.all.max - edge).abs() < 1e-12);
        assert!((r.all.ratio() - 1.0).abs() < 1e-12);
        assert!((rog(&p).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(energy(&p, EnergyModel::Nbeads).unwrap(), 50.0);
    }

    #[test]
    fn square_angles() {
        let r = angle_stats(&square(), false);
        assert!((r.all.min - 90.0).abs() < 1e-12 && (r.all.max - 90.0).abs() < 1e-12);
        let t = angle_stats(&square(), true);
        assert!((t.all.mean - 90.0).abs() < 1e-12);
        let chain = PolyLink::new(vec![Component::new(
            vec![Vec3::zeros(), Vec3::x(), Vec3::new(1.0, 1.0, 0.0)],
            false,
        )]);
        assert_eq!(angle_stats(&chain, false).all.count, 1);
    }

    #[test]
    fn md_energy() {
        assert!((energy(&square(), EnergyModel::Md).unwrap() - 2.0).abs() < 1e-12);
        let p = edit_beads(&ngon(12, 2.0), &BeadEdit::Jitter { magnitude: 0.3, seed: 2 }).unwrap();
        let big = transform(&p, &Transform::Scale(2.0)).unwrap();
        for m in [EnergyModel::Md, EnergyModel::Symm] {
            let (a, b) = (energy(&p, m).unwrap(), energy(&big, m).unwrap());
            assert!((a - b).abs() < 1e-9 * a, "{m:?}");
        }
        // opposite midpoints of the unit square are 1 apart too
        assert!((energy(&square(), EnergyModel::Symm).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn thickness_cases() {
        let p = ngon(50, 5.0);
        let t = thickness(&p).unwrap();
        let edge = 10.0 * (PI / 50.0).sin();
        let local = edge / (2.0 * (PI / 50.0).sin());
        // closest non-adjacent approach is between edges two apart
        let global = p.min_nonadjacent_distance().unwrap().0 / 2.0;
        assert!((t - global.min(local)).abs() < 1e-12 && t > 0.0);
        let t3 = thickness(&transform(&p, &Transform::Scale(3.0)).unwrap()).unwrap();
        assert!((t3 - 3.0 * t).abs() < 1e-9);
        let straight = PolyLink::new(vec![Component::new(
            (0..3).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect(),
            false,
        )]);
        assert!(thickness(&straight).unwrap().is_infinite());
        let longer = PolyLink::new(vec![Component::new(
            (0..5).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect(),
            false,
        )]);
        assert!((thickness(&longer).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn info_report() {
        let i = info(&crate::polylink::fixtures::hopf());
        assert_eq!(i.components, 2);
        assert_eq!(i.beads, vec![3, 3]);
        assert_eq!(i.total_beads, 6);
    }
}
