use super::{Beads, Damping, ForceKind, RelaxConfig, RelaxState};
use crate::error::{KnotError, Result};
use crate::geom::Vec3;
use crate::polylink::{random_in_ball, Anchor, PolyLink};

/// Net force on every bead, in global bead order.
pub fn compute_forces(link: &PolyLink, cfg: &RelaxConfig, state: &mut RelaxState) -> Result<Vec<Vec3>> {
    state.sync(link);
    let b = Beads::new(link);
    let n = b.pos.len();
    let mut f = vec![Vec3::zeros(); n];
    for spec in &cfg.forces {
        let m = spec.magnitude;
        match spec.kind {
            ForceKind::Elec => {
                if m == 0.0 {
                    continue;
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        if b.bonded(i, j) {
                            continue;
                        }
                        let d = b.pos[i] - b.pos[j];
                        let r = d.norm();
                        if r == 0.0 {
                            return Err(KnotError::CoincidentBeads(i, j));
                        }
                        let push = d * (m / r.powf(spec.power + 1.0));
                        f[i] += push;
                        f[j] -= push;
                    }
                }
            }
            ForceKind::Mech => {
                for &(u, w) in &b.edges {
                    let e = b.pos[w] - b.pos[u];
                    let pull = e * (m * e.norm());
                    f[u] += pull;
                    f[w] -= pull;
                }
            }
            ForceKind::Amech => {
                for &(u, w) in &b.edges {
                    let e = b.pos[w] - b.pos[u];
                    let len = e.norm();
                    if len == 0.0 {
                        continue;
                    }
                    let pull = e * (m * (len - cfg.spring) / len);
                    f[u] += pull;
                    f[w] -= pull;
                }
            }
            ForceKind::Velfo => {
                if cfg.mode == Damping::Undamped {
                    for (fi, v) in f.iter_mut().zip(&state.velocities) {
                        *fi -= v * m;
                    }
                }
            }
            ForceKind::Grav => {
                for fi in f.iter_mut() {
                    fi.z -= m;
                }
            }
            ForceKind::Anch => {
                for (i, a) in b.anchors.iter().enumerate() {
                    if let Some(Anchor::Spring(p)) = a {
                        f[i] += (p - b.pos[i]) * m;
                    }
                }
            }
            ForceKind::Therm => {
                if m == 0.0 {
                    continue;
                }
                let rng = state.rng();
                for fi in f.iter_mut() {
                    *fi += random_in_ball(rng) * m;
                }
            }
            ForceKind::Tanf => {
                for i in 0..n {
                    let dir = match (b.prev[i], b.next[i]) {
                        (_, Some(w)) => b.pos[w] - b.pos[i],
                        (Some(u), None) => b.pos[i] - b.pos[u],
                        (None, None) => continue,
                    };
                    let len = dir.norm();
                    if len > 0.0 {
                        f[i] += dir * (m / len);
                    }
                }
            }
        }
    }
    Ok(f)
}

/// Potential energy of the conservative forces in `cfg` (`elec`, `mech`,
/// `amech`, `grav`, `anch`), whose negative gradient is the force above.
pub fn model_energy(link: &PolyLink, cfg: &RelaxConfig) -> Result<f64> {
    let b = Beads::new(link);
    let n = b.pos.len();
    let mut total = 0.0;
    for spec in &cfg.forces {
        let m = spec.magnitude;
        match spec.kind {
            ForceKind::Elec => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        if b.bonded(i, j) {
                            continue;
                        }
                        let r = (b.pos[i] - b.pos[j]).norm();
                        if r == 0.0 {
                            return Err(KnotError::CoincidentBeads(i, j));
                        }
                        total += m / ((spec.power - 1.0) * r.powf(spec.power - 1.0));
                    }
                }
            }
            ForceKind::Mech => {
                total += b.edges.iter().map(|&(u, w)| m * (b.pos[w] - b.pos[u]).norm().powi(3) / 3.0).sum::<f64>();
            }
            ForceKind::Amech => {
                total += b
                    .edges
                    .iter()
                    .map(|&(u, w)| 0.5 * m * ((b.pos[w] - b.pos[u]).norm() - cfg.spring).powi(2))
                    .sum::<f64>();
            }
            ForceKind::Grav => total += b.pos.iter().map(|p| m * p.z).sum::<f64>(),
            ForceKind::Anch => {
                for (i, a) in b.anchors.iter().enumerate() {
                    if let Some(Anchor::Spring(p)) = a {
                        total += 0.5 * m * (p - b.pos[i]).norm_squared();
                    }
                }
            }
            ForceKind::Velfo | ForceKind::Therm | ForceKind::Tanf => {}
        }
    }
    Ok(total)
}
