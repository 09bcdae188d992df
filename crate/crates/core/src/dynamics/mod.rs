//! Knot-type preserving relaxation.
//!
//! Beads move one at a time, never further than `max_dir`. In fast collision
//! mode a move is rejected whenever it would bring one of the bead's two
//! edges closer than `close` to a non-adjacent edge. Since `max_dir < close`,
//! no edge can sweep through another, so the knot type is preserved.

mod forces;
mod simplify;

pub use forces::{compute_forces, model_energy};
pub use simplify::{delete_downto, mass_open, stuck_split};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{KnotError, Result};
use crate::geom::{seg_min_distance, Vec3};
use crate::polylink::{Anchor, EdgeRef, PolyLink};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Damping {
    #[default]
    Damped,
    Undamped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Collision {
    /// Reject moves that would break the safe position.
    #[default]
    Fast,
    /// Let strands pass through each other.
    Allow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ForceKind {
    Elec,
    Mech,
    Amech,
    Velfo,
    Grav,
    Anch,
    Therm,
    Tanf,
}

impl ForceKind {
    pub const ALL: [ForceKind; 8] = [
        ForceKind::Elec,
        ForceKind::Mech,
        ForceKind::Amech,
        ForceKind::Velfo,
        ForceKind::Grav,
        ForceKind::Anch,
        ForceKind::Therm,
        ForceKind::Tanf,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ForceKind::Elec => "elec",
            ForceKind::Mech => "mech",
            ForceKind::Amech => "amech",
            ForceKind::Velfo => "velfo",
            ForceKind::Grav => "grav",
            ForceKind::Anch => "anch",
            ForceKind::Therm => "therm",
            ForceKind::Tanf => "tanf",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForceSpec {
    pub kind: ForceKind,
    pub magnitude: f64,
    /// Falloff exponent, only used by `elec`.
    pub power: f64,
}

impl ForceSpec {
    pub fn new(kind: ForceKind, magnitude: f64) -> Self {
        ForceSpec { kind, magnitude, power: 4.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxConfig {
    pub close: f64,
    pub max_dir: f64,
    pub dt: f64,
    pub mode: Damping,
    pub collision: Collision,
    pub forces: Vec<ForceSpec>,
    /// Preferred edge length for `amech`.
    pub spring: f64,
    /// Steps between stuck-edge checks; 0 disables them.
    pub stusplit: u32,
    pub stuck_factor: f64,
    pub stuck_eps: f64,
    /// `delete_downto` never goes below this many beads.
    pub dbmin: usize,
    /// Steps between observer snapshots.
    pub dstep: u32,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        RelaxConfig {
            close: 0.12,
            max_dir: 0.1,
            dt: 0.05,
            mode: Damping::Damped,
            collision: Collision::Fast,
            forces: vec![ForceSpec::new(ForceKind::Elec, 1.0), ForceSpec::new(ForceKind::Mech, 1.0)],
            spring: 1.0,
            stusplit: 0,
            stuck_factor: 1.5,
            stuck_eps: 0.01,
            dbmin: 3,
            dstep: 1,
        }
    }
}

impl RelaxConfig {
    pub fn force(&self, kind: ForceKind) -> Option<&ForceSpec> {
        self.forces.iter().find(|f| f.kind == kind)
    }

    /// Enable (or update) a force.
    pub fn set_force(&mut self, spec: ForceSpec) {
        match self.forces.iter_mut().find(|f| f.kind == spec.kind) {
            Some(f) => *f = spec,
            None => self.forces.push(spec),
        }
    }

    pub fn remove_force(&mut self, kind: ForceKind) {
        self.forces.retain(|f| f.kind != kind);
    }

    pub fn only(forces: &[ForceSpec]) -> Self {
        RelaxConfig { forces: forces.to_vec(), ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.close > 0.0) || !(self.max_dir > 0.0) || !(self.dt > 0.0) {
            return Err(KnotError::BadSpec("close, max-dir and dt must be positive".into()));
        }
        if self.collision == Collision::Fast && self.max_dir >= self.close {
            return Err(KnotError::BadSpec(format!(
                "max-dir ({}) must be strictly less than close ({})",
                self.max_dir, self.close
            )));
        }
        for f in &self.forces {
            if !(f.magnitude >= 0.0) {
                return Err(KnotError::BadSpec(format!("{} magnitude must be non-negative", f.kind.name())));
            }
            if f.kind == ForceKind::Elec && !(f.power >= 2.0) {
                return Err(KnotError::BadSpec("elec power must be at least 2".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RelaxState {
    pub velocities: Vec<Vec3>,
    pub step_count: u64,
    pub seed: u64,
    rng: ChaCha8Rng,
    /// Positions at the previous stuck check.
    checkpoint: Vec<Vec3>,
    /// Positions (and threshold) last known to be safe.
    verified: Option<(f64, Vec<Vec3>)>,
}

impl PartialEq for RelaxState {
    fn eq(&self, other: &Self) -> bool {
        self.velocities == other.velocities
            && self.step_count == other.step_count
            && self.seed == other.seed
            && self.rng == other.rng
            && self.checkpoint == other.checkpoint
    }
}

impl RelaxState {
    pub fn new(link: &PolyLink, seed: u64) -> Self {
        RelaxState {
            velocities: vec![Vec3::zeros(); link.bead_count()],
            step_count: 0,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            checkpoint: link.vertices().copied().collect(),
            verified: None,
        }
    }

    /// Resize after the bead count changed underneath us.
    pub fn sync(&mut self, link: &PolyLink) {
        let n = link.bead_count();
        if self.velocities.len() != n {
            self.velocities = vec![Vec3::zeros(); n];
        }
        if self.checkpoint.len() != n {
            self.checkpoint = link.vertices().copied().collect();
        }
    }

    pub(crate) fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SafetyReport {
    pub safe: bool,
    /// `f64::INFINITY` when there are no non-adjacent pairs.
    pub min_distance: f64,
    pub offending_pair: Option<(EdgeRef, EdgeRef)>,
}

pub fn check_safe(link: &PolyLink, close: f64) -> SafetyReport {
    match link.flat_edges().min_nonadjacent_distance() {
        None => SafetyReport { safe: true, min_distance: f64::INFINITY, offending_pair: None },
        Some((d, pair)) => SafetyReport {
            safe: d >= close,
            min_distance: d,
            offending_pair: (d < close).then_some(pair),
        },
    }
}

/// Flat bead-level view of a link: every bead gets a global index, edges
/// are pairs of global indices.
#[derive(Clone, Debug)]
pub(crate) struct Beads {
    pub pos: Vec<Vec3>,
    pub prev: Vec<Option<usize>>,
    pub next: Vec<Option<usize>>,
    pub edges: Vec<(usize, usize)>,
    pub anchors: Vec<Option<Anchor>>,
}

impl Beads {
    pub fn new(link: &PolyLink) -> Self {
        let n = link.bead_count();
        let mut b = Beads {
            pos: Vec::with_capacity(n),
            prev: vec![None; n],
            next: vec![None; n],
            edges: Vec::with_capacity(link.edge_count()),
            anchors: Vec::with_capacity(n),
        };
        let mut base = 0;
        for c in &link.components {
            let m = c.len();
            for i in 0..m {
                b.pos.push(c.vertices[i]);
                b.anchors.push(c.anchor(i));
            }
            for i in 0..c.edge_count() {
                let (u, w) = (base + i, base + (i + 1) % m);
                b.edges.push((u, w));
                b.next[u] = Some(w);
                b.prev[w] = Some(u);
            }
            base += m;
        }
        b
    }

    pub fn write_back(&self, link: &mut PolyLink) {
        for (v, p) in link.vertices_mut().zip(&self.pos) {
            *v = *p;
        }
    }

    /// True when bead `j` shares an edge with bead `i`.
    pub fn bonded(&self, i: usize, j: usize) -> bool {
        self.prev[i] == Some(j) || self.next[i] == Some(j)
    }

    pub fn incident(&self, i: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.prev[i].map(|p| (p, i)).into_iter().chain(self.next[i].map(|n| (i, n)))
    }

    /// Would moving bead `i` to `p` put one of its edges closer than `close`
    /// to a non-adjacent edge?
    pub fn move_violates(&self, i: usize, p: &Vec3, close: f64) -> bool {
        let at = |k: usize| if k == i { *p } else { self.pos[k] };
        for (u, w) in self.incident(i) {
            let (a, b) = (at(u), at(w));
            let mid = (a + b) / 2.0;
            let half = (b - a).norm() / 2.0;
            for &(x, y) in &self.edges {
                if x == u || x == w || y == u || y == w {
                    continue;
                }
                let (c, d) = (self.pos[x], self.pos[y]);
                // cheap bound: the segments lie in balls around their midpoints
                let gap = (mid - (c + d) / 2.0).norm() - half - (d - c).norm() / 2.0;
                if gap >= close {
                    continue;
                }
                if seg_min_distance(&a, &b, &c, &d) < close {
                    return true;
                }
            }
        }
        false
    }
}

/// What happened during one step.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepReport {
    pub moved: usize,
    pub rejected: usize,
}

/// Advance the relaxation by one step, moving beads in index order.
pub fn step(link: &mut PolyLink, cfg: &RelaxConfig, state: &mut RelaxState) -> Result<StepReport> {
    cfg.validate()?;
    state.sync(link);
    let fast = cfg.collision == Collision::Fast;
    if fast {
        let current: Vec<Vec3> = link.vertices().copied().collect();
        let known = matches!(&state.verified, Some((c, v)) if *c == cfg.close && *v == current);
        if !known {
            let report = check_safe(link, cfg.close);
            if !report.safe {
                return Err(KnotError::UnsafeStart(report.min_distance));
            }
        }
    }
    let force = compute_forces(link, cfg, state)?;
    let mut beads = Beads::new(link);
    let mut report = StepReport::default();
    for i in 0..beads.pos.len() {
        if matches!(beads.anchors[i], Some(Anchor::Pin(_))) {
            state.velocities[i] = Vec3::zeros();
            continue;
        }
        let mut d = match cfg.mode {
            Damping::Damped => force[i] * cfg.dt,
            Damping::Undamped => {
                state.velocities[i] += force[i] * cfg.dt;
                state.velocities[i] * cfg.dt
            }
        };
        let len = d.norm();
        if len == 0.0 || !len.is_finite() {
            continue;
        }
        if len > cfg.max_dir {
            d *= cfg.max_dir / len;
        }
        let p = beads.pos[i] + d;
        if fast && beads.move_violates(i, &p, cfg.close) {
            state.velocities[i] = Vec3::zeros();
            report.rejected += 1;
        } else {
            beads.pos[i] = p;
            report.moved += 1;
        }
    }
    beads.write_back(link);
    state.step_count += 1;
    if fast {
        state.verified = Some((cfg.close, beads.pos));
    }
    Ok(report)
}

/// Pull bead `bead` (global index) toward `target` in moves of at most
/// `max_dir`, each accepted by the same rule as [`step`]. Stops at the first
/// rejected move, so a safe link stays safe in fast collision mode. Returns
/// whether the target was reached.
pub fn drag_bead(link: &mut PolyLink, bead: usize, target: Vec3, cfg: &RelaxConfig) -> Result<bool> {
    cfg.validate()?;
    link.locate_bead(bead).ok_or(KnotError::BadIndex(bead))?;
    if !target.iter().all(|x| x.is_finite()) {
        return Err(KnotError::BadSpec("drag target must be finite".into()));
    }
    let fast = cfg.collision == Collision::Fast;
    if fast {
        let report = check_safe(link, cfg.close);
        if !report.safe {
            return Err(KnotError::UnsafeStart(report.min_distance));
        }
    }
    let mut beads = Beads::new(link);
    let budget = ((target - beads.pos[bead]).norm() / cfg.max_dir).ceil() as usize + 1;
    let mut reached = false;
    for _ in 0..budget {
        let d = target - beads.pos[bead];
        let len = d.norm();
        if len == 0.0 {
            reached = true;
            break;
        }
        let p = if len > cfg.max_dir { beads.pos[bead] + d * (cfg.max_dir / len) } else { target };
        if fast && beads.move_violates(bead, &p, cfg.close) {
            break;
        }
        beads.pos[bead] = p;
    }
    reached |= beads.pos[bead] == target;
    beads.write_back(link);
    Ok(reached)
}

/// How many steps to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Steps {
    Count(u64),
    /// Until the stop signal fires.
    Forever,
}

/// Repeated [`step`], with stuck-edge splitting every `stusplit` steps and a
/// snapshot handed to `observer` every `dstep` steps. `stop` is polled
/// before every step.
pub fn run(
    link: &mut PolyLink,
    cfg: &RelaxConfig,
    state: &mut RelaxState,
    steps: Steps,
    mut observer: impl FnMut(&PolyLink, &RelaxState),
    stop: impl Fn() -> bool,
) -> Result<u64> {
    let mut done = 0u64;
    loop {
        if let Steps::Count(n) = steps {
            if done >= n {
                break;
            }
        }
        if stop() {
            break;
        }
        step(link, cfg, state)?;
        done += 1;
        if cfg.stusplit > 0 && state.step_count % cfg.stusplit as u64 == 0 {
            *link = stuck_split(link, cfg, state);
        }
        if cfg.dstep > 0 && done % cfg.dstep as u64 == 0 {
            observer(link, state);
        }
    }
    Ok(done)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::polylink::Component;

    pub fn ngon(n: usize, r: f64) -> PolyLink {
        let vs = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                Vec3::new(r * t.cos(), r * t.sin(), 0.0)
            })
            .collect();
        PolyLink::new(vec![Component::new(vs, true)])
    }

    #[test]
    fn safety_check_cases() {
        let p = ngon(50, 5.0);
        let r = check_safe(&p, 0.12);
        assert!(r.safe && r.min_distance > 0.5);
        let tiny = crate::polylink::transform(&p, &crate::polylink::Transform::Scale(1e-3)).unwrap();
        let r = check_safe(&tiny, 0.12);
        assert!(!r.safe && r.offending_pair.is_some());
        let tri = ngon(3, 1.0);
        let r = check_safe(&tri, 0.12);
        assert!(r.safe && r.min_distance.is_infinite());
    }

    #[test]
    fn drag_stays_safe() {
        let mut p = ngon(24, 3.0);
        let cfg = RelaxConfig::default();
        // pulling bead 0 across the polygon must stop before a collision
        let reached = drag_bead(&mut p, 0, Vec3::new(-3.0, 0.0, 0.0), &cfg).unwrap();
        assert!(!reached);
        assert!(check_safe(&p, cfg.close).safe);
        assert!(p.components[0].vertices[0].x < 3.0);
        let mut q = ngon(24, 3.0);
        let t = q.components[0].vertices[5] * 1.1;
        assert!(drag_bead(&mut q, 5, t, &cfg).unwrap());
        assert!(drag_bead(&mut q, 99, Vec3::zeros(), &cfg).is_err());
    }

    #[test]
    fn no_forces_no_motion() {
        let mut p = ngon(12, 2.0);
        let orig = p.clone();
        let cfg = RelaxConfig::only(&[]);
        let mut st = RelaxState::new(&p, 1);
        step(&mut p, &cfg, &mut st).unwrap();
        assert_eq!(p, orig);
        assert_eq!(st.step_count, 1);
    }

    #[test]
    fn unsafe_start_rejected() {
        let mut p = ngon(50, 0.005);
        let mut st = RelaxState::new(&p, 1);
        assert!(matches!(step(&mut p, &RelaxConfig::default(), &mut st), Err(KnotError::UnsafeStart(_))));
        let mut allow = RelaxConfig::default();
        allow.collision = Collision::Allow;
        assert!(step(&mut p, &allow, &mut st).is_ok());
    }

    #[test]
    fn max_dir_must_be_below_close() {
        let mut cfg = RelaxConfig::default();
        cfg.max_dir = 0.12;
        assert!(cfg.validate().is_err());
        cfg.collision = Collision::Allow;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn step_keeps_safe_and_caps_moves() {
        let mut p = ngon(20, 1.0);
        let cfg = RelaxConfig::default();
        let mut st = RelaxState::new(&p, 3);
        for _ in 0..200 {
            let before: Vec<Vec3> = p.vertices().copied().collect();
            step(&mut p, &cfg, &mut st).unwrap();
            for (a, b) in before.iter().zip(p.vertices()) {
                assert!((a - b).norm() <= cfg.max_dir + 1e-12);
            }
            assert!(check_safe(&p, cfg.close).safe);
        }
    }

    #[test]
    fn run_equals_repeated_steps() {
        let start = ngon(15, 1.5);
        let mut cfg = RelaxConfig::default();
        cfg.set_force(ForceSpec::new(ForceKind::Therm, 0.5));
        let mut a = start.clone();
        let mut sa = RelaxState::new(&a, 7);
        let n = run(&mut a, &cfg, &mut sa, Steps::Count(300), |_, _| {}, || false).unwrap();
        assert_eq!(n, 300);
        let mut b = start.clone();
        let mut sb = RelaxState::new(&b, 7);
        for _ in 0..300 {
            step(&mut b, &cfg, &mut sb).unwrap();
        }
        assert_eq!(a, b);
        assert_eq!(sa, sb);
    }

    #[test]
    fn run_honours_stop_and_dstep() {
        let mut p = ngon(10, 1.0);
        let orig = p.clone();
        let mut st = RelaxState::new(&p, 1);
        let cfg = RelaxConfig::default();
        let n = run(&mut p, &cfg, &mut st, Steps::Forever, |_, _| {}, || true).unwrap();
        assert_eq!(n, 0);
        assert_eq!(p, orig);
        let mut cfg = cfg;
        cfg.dstep = 5;
        let mut seen = 0;
        let counter = std::cell::Cell::new(0);
        run(
            &mut p,
            &cfg,
            &mut st,
            Steps::Forever,
            |_, _| seen += 1,
            || {
                counter.set(counter.get() + 1);
                counter.get() > 23
            },
        )
        .unwrap();
        assert_eq!(seen, 4);
    }

    #[test]
    fn pinned_beads_never_move() {
        let vs: Vec<Vec3> = (0..10).map(|i| Vec3::new(i as f64 * 0.5, (i as f64).sin(), 0.0)).collect();
        let link = PolyLink::new(vec![Component::new(vs, false)]);
        let mut link = mass_open(&link).unwrap();
        let (first, last) = (link.components[0].vertices[0], link.components[0].vertices[9]);
        let cfg = RelaxConfig::only(&[ForceSpec::new(ForceKind::Anch, 1.0), ForceSpec::new(ForceKind::Mech, 1.0)]);
        let mut st = RelaxState::new(&link, 1);
        for _ in 0..2000 {
            step(&mut link, &cfg, &mut st).unwrap();
        }
        assert_eq!(link.components[0].vertices[0], first);
        assert_eq!(link.components[0].vertices[9], last);
    }

    #[test]
    fn undamped_velocity_damping() {
        let mut p = ngon(12, 2.0);
        let mut cfg = RelaxConfig::default();
        cfg.mode = Damping::Undamped;
        cfg.set_force(ForceSpec::new(ForceKind::Velfo, 0.5));
        let mut st = RelaxState::new(&p, 1);
        for _ in 0..100 {
            step(&mut p, &cfg, &mut st).unwrap();
        }
        assert!(check_safe(&p, cfg.close).safe);
        assert!(st.velocities.iter().any(|v| v.norm() > 0.0));
    }
}
