//! The interpreter's mutable world and the line-level driver around
//! [`dispatch`](crate::commands).

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::time::Instant;

use knotforge_core::codes::ProjectionMode;
use knotforge_core::dynamics::{self, Collision, Damping, ForceKind, ForceSpec, RelaxConfig, RelaxState, Steps};
use knotforge_core::io::BBox;
use knotforge_core::measures::EnergyModel;
use knotforge_core::polylink::{fitto, FitMode, Palette, ViewTransform};
use knotforge_core::{Component, KnotError, PolyLink, Vec3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::parse::{parse_line, Invocation};
use crate::params::{ParamError, ParameterStore, Value};

/// Deepest nesting of aliases, includes and `until` loops.
pub const MAX_DEPTH: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DisplayMode {
    /// Beads and cylinders.
    #[default]
    BeadsCylinders,
    /// Smooth spline tubes.
    Smooth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DowkerProjection {
    #[default]
    Z,
    View,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Message {
    Output(String),
    /// Already carries the `***` prefix.
    Complaint(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    /// `exit` or `quit`.
    Exit,
    /// A complaint while `duc` is on.
    Die,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Response {
    pub messages: Vec<Message>,
    pub flow: Flow,
    /// Some command changed the link.
    pub mutated: bool,
}

impl Response {
    pub fn complaints(&self) -> impl Iterator<Item = &str> {
        self.messages.iter().filter_map(|m| match m {
            Message::Complaint(s) => Some(s.as_str()),
            _ => None,
        })
    }

    pub fn output(&self) -> String {
        self.messages
            .iter()
            .filter_map(|m| match m {
                Message::Output(s) => Some(s.as_str()),
                _ => None,
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// A command failed; the text becomes a complaint.
#[derive(Debug)]
pub(crate) struct Fail(pub String);

impl From<KnotError> for Fail {
    fn from(e: KnotError) -> Self {
        Fail(e.to_string())
    }
}

impl From<ParamError> for Fail {
    fn from(e: ParamError) -> Self {
        Fail(e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail(e.to_string())
    }
}

pub(crate) struct Queued {
    pub due: f64,
    pub command: String,
}

/// Remaining steps of an interactive `go`; `None` runs until stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Running {
    pub left: Option<u64>,
}

pub struct Session {
    pub link: PolyLink,
    pub view: ViewTransform,
    pub params: ParameterStore,
    pub aliases: BTreeMap<String, String>,
    pub relax: RelaxState,
    pub collision: Collision,
    pub display_mode: DisplayMode,
    pub dowker_projection: DowkerProjection,
    pub energy_model: EnergyModel,
    pub bbox: BBox,
    /// Tube twist per component, set by `twfix`.
    pub twist: Vec<f64>,
    pub draw_style: String,
    pub bead_color: Option<knotforge_core::Color>,
    /// No frame buffer: `go` is atomic, `nap` does not sleep.
    pub headless: bool,
    pub(crate) cwd: PathBuf,
    pub(crate) undo_slot: Option<PolyLink>,
    pub(crate) rng: ChaCha8Rng,
    pub(crate) seed: u64,
    pub(crate) angle_turning: bool,
    pub(crate) timers: HashMap<String, Instant>,
    pub(crate) queue: Vec<Queued>,
    /// Seconds of `nap` taken while headless.
    pub(crate) clock: f64,
    pub(crate) started: Instant,
    pub(crate) running: Option<Running>,
    pub(crate) depth: usize,
    /// Inside `run_script`, where `go` runs atomically in every mode.
    pub(crate) scripting: bool,
    flow: Flow,
    messages: Vec<Message>,
    mutated: bool,
}

impl Session {
    pub fn new(seed: u64, cwd: impl Into<PathBuf>, headless: bool) -> Self {
        let link = PolyLink::default();
        Session {
            relax: RelaxState::new(&link, seed),
            link,
            view: ViewTransform::default(),
            params: ParameterStore::default(),
            aliases: BTreeMap::new(),
            collision: Collision::Fast,
            display_mode: DisplayMode::default(),
            dowker_projection: DowkerProjection::default(),
            energy_model: EnergyModel::Md,
            bbox: BBox::Tight,
            twist: Vec::new(),
            draw_style: "normal".into(),
            bead_color: None,
            headless,
            cwd: cwd.into(),
            undo_slot: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            angle_turning: false,
            timers: HashMap::new(),
            queue: Vec::new(),
            clock: 0.0,
            started: Instant::now(),
            running: None,
            depth: 0,
            scripting: false,
            flow: Flow::Continue,
            messages: Vec::new(),
            mutated: false,
        }
    }

    pub fn cwd(&self) -> &Path {
        &self.cwd
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Link held for `undo`.
    pub fn undo_slot(&self) -> Option<&PolyLink> {
        self.undo_slot.as_ref()
    }

    pub fn is_running(&self) -> bool {
        self.running.is_some()
    }

    pub(crate) fn reseed(&mut self, seed: u64) {
        self.seed = seed;
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.relax = RelaxState::new(&self.link, seed);
    }

    pub fn palette(&self) -> Palette {
        let p = &self.params;
        Palette { hstart: p.real("hstart"), hincr: p.real("hincr"), satur: p.real("satur"), value: p.real("value") }
    }

    /// The dynamics settings currently selected by the parameters.
    pub fn relax_config(&self) -> RelaxConfig {
        let p = &self.params;
        let table = [
            ("elec", ForceKind::Elec, "charge"),
            ("mech", ForceKind::Mech, "hooke"),
            ("amech", ForceKind::Amech, "hooke"),
            ("velfo", ForceKind::Velfo, "velmag"),
            ("grav", ForceKind::Grav, "gravmag"),
            ("anch", ForceKind::Anch, "anchmag"),
            ("therm", ForceKind::Therm, "thermmag"),
            ("tanf", ForceKind::Tanf, "tanmag"),
        ];
        let forces = table
            .iter()
            .filter(|(toggle, _, _)| p.flag(toggle))
            .map(|(_, kind, mag)| ForceSpec { kind: *kind, magnitude: p.real(mag), power: p.real("power") })
            .collect();
        RelaxConfig {
            close: p.real("close"),
            max_dir: p.real("max-dir"),
            dt: p.real("dt"),
            mode: if p.flag("undamped") { Damping::Undamped } else { Damping::Damped },
            collision: self.collision,
            forces,
            spring: p.real("spring"),
            stusplit: p.count("stusplit").min(u32::MAX as usize) as u32,
            stuck_factor: p.real("stuck_factor"),
            stuck_eps: p.real("stuck_eps"),
            dbmin: p.count("dbmin"),
            dstep: p.count("dstep").min(u32::MAX as usize) as u32,
        }
    }

    pub fn dowker_mode(&self) -> ProjectionMode {
        match self.dowker_projection {
            DowkerProjection::Z => ProjectionMode::Z,
            DowkerProjection::View => ProjectionMode::View(self.view.clone()),
        }
    }

    /// Replace the link with a freshly built one, coloured by the palette.
    pub(crate) fn set_link(&mut self, mut link: PolyLink) {
        let palette = self.palette();
        for (i, c) in link.components.iter_mut().enumerate() {
            c.color = palette.color(i);
        }
        self.link = link;
        self.twist.clear();
    }

    pub(crate) fn say(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !text.is_empty() {
            self.messages.push(Message::Output(text));
        }
    }

    pub(crate) fn complain(&mut self, text: impl AsRef<str>) {
        self.messages.push(Message::Complaint(format!("*** {}", text.as_ref())));
        if self.params.flag("duc") {
            self.flow = Flow::Die;
        }
    }

    pub(crate) fn set_flow(&mut self, flow: Flow) {
        self.flow = flow;
    }

    pub(crate) fn flow(&self) -> Flow {
        self.flow
    }

    pub(crate) fn complaint_count(&self) -> usize {
        self.messages.iter().filter(|m| matches!(m, Message::Complaint(_))).count()
    }

    fn take_response(&mut self) -> Response {
        Response { messages: std::mem::take(&mut self.messages), flow: self.flow, mutated: std::mem::take(&mut self.mutated) }
    }

    /// Run one line of commands.
    /// Clear an `exit` or a duc panic so the session accepts commands
    /// again. Used by the network service, which outlives both.
    pub fn revive(&mut self) {
        self.flow = Flow::Continue;
    }

    pub fn execute(&mut self, line: &str) -> Response {
        if self.flow == Flow::Exit {
            self.flow = Flow::Continue;
        }
        if self.flow == Flow::Continue {
            self.drain_queue(false);
            self.run_text(line);
        }
        self.take_response()
    }

    /// Parse and run text at the current nesting depth.
    pub(crate) fn run_text(&mut self, line: &str) {
        match parse_line(line) {
            Err(e) => self.complain(format!("parse error at {e}")),
            Ok(invocations) => {
                for inv in invocations {
                    if self.flow != Flow::Continue {
                        break;
                    }
                    self.invoke(inv);
                }
            }
        }
    }

    fn invoke(&mut self, inv: Invocation) {
        match inv {
            Invocation::Assign { name, value } => {
                if let Err(Fail(msg)) = self.assign(&name, &value) {
                    self.complain(msg);
                }
            }
            Invocation::Include(file) => self.include(&file),
            Invocation::Command { name, args, redirect } => {
                let mark = self.messages.len();
                self.call(&name, &args);
                if let Some(file) = redirect {
                    let mut text = String::new();
                    let mut kept = Vec::new();
                    for m in self.messages.drain(mark..) {
                        match m {
                            Message::Output(s) => {
                                text.push_str(&s);
                                text.push('\n');
                            }
                            other => kept.push(other),
                        }
                    }
                    self.messages.extend(kept);
                    if let Err(e) = std::fs::write(self.cwd.join(&file), text) {
                        self.complain(format!("cannot write {file}: {e}"));
                    }
                }
            }
        }
    }

    fn assign(&mut self, name: &str, value: &str) -> Result<(), Fail> {
        let canon = self.params.canonical(name).ok_or_else(|| ParamError::Unknown(name.into()))?;
        let old = self.params.get(canon).unwrap();
        let new = self.params.set(canon, value)?;
        let check = match (canon, new) {
            ("vscale", Value::Real(v)) => {
                knotforge_core::polylink::view_ops(&self.view, knotforge_core::polylink::ViewOp::SetVscale(v))
                    .map(|view| self.view = view)
                    .map_err(Fail::from)
            }
            ("nseg", Value::Int(n)) if n < 3 => Err(Fail("nseg must be at least 3".into())),
            ("ncur", Value::Int(0)) => Err(Fail("ncur must be at least 1".into())),
            ("dstep", Value::Int(0)) => Err(Fail("dstep must be at least 1".into())),
            ("close" | "max-dir" | "dt" | "sradius" | "cradius" | "bradius" | "pswidth", Value::Real(x)) if x <= 0.0 => {
                Err(Fail(format!("{canon} must be positive")))
            }
            _ => Ok(()),
        };
        if check.is_err() {
            self.params.put(canon, old);
        }
        check
    }

    fn include(&mut self, file: &str) {
        if self.depth >= MAX_DEPTH {
            self.complain(format!("scripts nested too deeply at {file}"));
            return;
        }
        let text = match std::fs::read(self.cwd.join(file)) {
            Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
            Err(e) => {
                self.complain(format!("cannot read {file}: {e}"));
                return;
            }
        };
        self.depth += 1;
        for line in text.lines() {
            if self.flow != Flow::Continue {
                break;
            }
            self.run_text(line);
        }
        self.depth -= 1;
        // exit leaves only the included script
        if self.flow == Flow::Exit {
            self.flow = Flow::Continue;
        }
    }

    fn call(&mut self, name: &str, args: &[String]) {
        if let Some(template) = self.aliases.get(name).cloned() {
            if self.depth >= MAX_DEPTH {
                self.complain(format!("alias {name} nested too deeply"));
                return;
            }
            self.depth += 1;
            self.run_text(&crate::parse::expand_alias(&template, args));
            self.depth -= 1;
            return;
        }
        let lower = name.to_ascii_lowercase();
        let before = crate::commands::is_mutating(&lower, args, self.headless || self.scripting).then(|| self.link.clone());
        let view = self.view.clone();
        match crate::commands::dispatch(self, &lower, args) {
            Ok(text) => {
                self.say(text);
                if let Some(b) = before {
                    if lower != "undo" {
                        self.undo_slot = Some(b);
                    }
                    self.mutated = true;
                }
                if self.view != view {
                    self.mutated = true;
                }
            }
            Err(Fail(msg)) => self.complain(msg),
        }
    }

    /// Seconds since the session began, counting headless naps.
    pub(crate) fn now(&self) -> f64 {
        if self.headless {
            self.clock
        } else {
            self.started.elapsed().as_secs_f64() + self.clock
        }
    }

    /// Back to a fresh session, keeping the undo slot, pending messages and
    /// the working directory.
    pub(crate) fn reset_all(&mut self) {
        let mut fresh = Session::new(self.seed, self.cwd.clone(), self.headless);
        fresh.undo_slot = self.undo_slot.take();
        fresh.scripting = self.scripting;
        fresh.depth = self.depth;
        fresh.flow = self.flow;
        fresh.messages = std::mem::take(&mut self.messages);
        *self = fresh;
    }

    /// Run queued `tfunction` commands that are due, or all of them.
    pub(crate) fn drain_queue(&mut self, all: bool) {
        loop {
            let now = self.now();
            let next = self
                .queue
                .iter()
                .enumerate()
                .filter(|(_, q)| all || q.due <= now)
                .min_by(|a, b| a.1.due.total_cmp(&b.1.due))
                .map(|(i, _)| i);
            let Some(i) = next else { break };
            let q = self.queue.remove(i);
            if self.headless {
                self.clock = self.clock.max(q.due);
            }
            self.run_text(&q.command);
            if self.flow != Flow::Continue {
                break;
            }
        }
    }

    /// Run a whole script line by line, handing every message to `sink`.
    /// Returns how the script ended.
    pub fn run_script(&mut self, text: &str, mut sink: impl FnMut(&Message)) -> Flow {
        let outer = std::mem::replace(&mut self.scripting, true);
        let mut flow = Flow::Continue;
        for line in text.lines() {
            let r = self.execute(line);
            r.messages.iter().for_each(&mut sink);
            flow = r.flow;
            if flow != Flow::Continue {
                break;
            }
        }
        if flow == Flow::Continue {
            self.drain_queue(true);
            let r = self.take_response();
            r.messages.iter().for_each(&mut sink);
            flow = r.flow;
        }
        self.scripting = outer;
        flow
    }

    /// Advance an interactive `go` by up to `max_steps` steps.
    pub fn tick(&mut self, max_steps: u64) -> Response {
        let Some(Running { left }) = self.running else {
            return self.take_response();
        };
        let n = left.map_or(max_steps, |l| l.min(max_steps));
        let cfg = self.relax_config();
        let mut link = self.link.clone();
        match dynamics::run(&mut link, &cfg, &mut self.relax, Steps::Count(n), |_, _| {}, || false) {
            Ok(done) => {
                self.link = link;
                self.mutated = true;
                self.running = match left {
                    Some(l) if l <= done => None,
                    Some(l) => Some(Running { left: Some(l - done) }),
                    None => Some(Running { left: None }),
                };
                if self.running.is_none() {
                    self.say("relaxation finished");
                }
            }
            Err(e) => {
                self.running = None;
                self.complain(format!("go: {e}"));
            }
        }
        self.take_response()
    }

    /// Move a bead as a drag would, keeping the safe position in fast mode.
    pub fn drag(&mut self, component: usize, bead: usize, position: Vec3) -> Response {
        let result = self.link.component(component).map_err(Fail::from).and_then(|c| {
            if bead >= c.len() {
                return Err(Fail(format!("component {component} has no bead {bead}")));
            }
            let offset: usize = self.link.components[..component].iter().map(Component::len).sum();
            let mut link = self.link.clone();
            dynamics::drag_bead(&mut link, offset + bead, position, &self.relax_config())?;
            Ok(link)
        });
        match result {
            Ok(link) => {
                if link != self.link {
                    self.undo_slot = Some(std::mem::replace(&mut self.link, link));
                    self.mutated = true;
                }
            }
            Err(Fail(msg)) => self.complain(format!("drag: {msg}")),
        }
        self.take_response()
    }

    /// Replace the link with a sketched curve. An unsafe sketch is scaled
    /// with `fitto mindist` to 1.5 × close.
    pub fn sketch_commit(&mut self, points: &[Vec3], closed: bool) -> Response {
        let need = if closed { 3 } else { 2 };
        let result = if points.len() < need {
            Err(Fail(format!("a {} sketch needs at least {need} points", if closed { "closed" } else { "open" })))
        } else if points.iter().flat_map(|p| p.iter()).any(|x| !x.is_finite()) {
            Err(Fail("sketch points must be finite".into()))
        } else {
            let link = PolyLink::new(vec![Component::new(points.to_vec(), closed)]);
            let close = self.params.real("close");
            let report = dynamics::check_safe(&link, close);
            if report.safe {
                Ok((link, false))
            } else {
                fitto(&link, FitMode::MinDist, 1.5 * close).map(|l| (l, true)).map_err(Fail::from)
            }
        };
        match result {
            Ok((link, scaled)) => {
                self.undo_slot = Some(self.link.clone());
                self.set_link(link);
                self.mutated = true;
                if scaled {
                    self.say("sketch was unsafe; scaled with fitto mindist");
                }
            }
            Err(Fail(msg)) => self.complain(format!("sketch: {msg}")),
        }
        self.take_response()
    }
}
