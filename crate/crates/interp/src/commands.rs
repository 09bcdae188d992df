//! Command dispatch: each name maps onto a core operation.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use knotforge_core::codes::{self, ProjectionMode};
use knotforge_core::construct::{self, TorusSpec};
use knotforge_core::dynamics::{self, check_safe, Collision, Steps};
use knotforge_core::geom::seg_min_distance;
use knotforge_core::io::{self, parse_color, psout, BBox, EpsOptions, FileFormat, TubeParams};
use knotforge_core::measures::{self, EnergyModel, MeasureReport};
use knotforge_core::polylink::{
    align_axes, centre, edit_beads, edit_topology, fitto, rotate_fix, transform, view_ops, visibility, BeadEdit,
    CentreMode, Endpoint, FitMode, NbeadsMode, Projection, Selection, TopoEdit, Transform, ViewAxis, ViewOp,
    Visibility,
};
use knotforge_core::{Component, PolyLink, Vec3};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::catalogue;
use crate::session::{DisplayMode, DowkerProjection, Fail, Flow, Queued, Running, Session, MAX_DEPTH};

type Out = Result<String, Fail>;

/// Cap on `until` repetitions.
pub const MAX_UNTIL: usize = 1_000_000;

/// Steps taken by `go` and `ago` without a count.
pub const DEFAULT_STEPS: u64 = 1000;

/// Commands answered with an `unsupported` complaint.
pub const UNSUPPORTED: &[&str] =
    &["allocate", "celtic", "diagram", "id", "homfly-pt", "homfly", "homflypt", "flypmoth", "tangle", "mf", "lua"];

/// Commands whose pre-state goes into the undo slot.
pub fn is_mutating(name: &str, args: &[String], headless: bool) -> bool {
    let first = args.first().map(String::as_str);
    match name {
        "about" | "align" | "braid" | "centre" | "center" | "chain" | "close" | "open" | "colour" | "color"
        | "conway" | "cut" | "delete" | "duplicate" | "fitto" | "ago" | "head" | "hide" | "unhide" | "jitter"
        | "join" | "keep" | "knot" | "line" | "lissajous" | "load" | "mass" | "matrgb" | "nbeads" | "project"
        | "refine" | "reflect" | "revbeads" | "scale" | "shift" | "split" | "swap" | "torus" | "translate"
        | "undo" | "unknot" | "until" => true,
        "go" => headless,
        "rotate" => first == Some("fix"),
        "reset" => first == Some("all"),
        _ => false,
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail(msg.into()))
}

fn arg<T: FromStr>(args: &[String], i: usize, what: &str) -> Result<T, Fail> {
    match args.get(i) {
        None => fail(format!("missing {what}")),
        Some(s) => s.parse().map_err(|_| Fail(format!("bad {what} '{s}'"))),
    }
}

fn opt<T: FromStr>(args: &[String], i: usize, what: &str) -> Result<Option<T>, Fail> {
    match args.get(i) {
        None => Ok(None),
        Some(_) => arg(args, i, what).map(Some),
    }
}

fn finite(args: &[String], i: usize, what: &str) -> Result<f64, Fail> {
    let x: f64 = arg(args, i, what)?;
    if x.is_finite() {
        Ok(x)
    } else {
        fail(format!("bad {what} '{x}'"))
    }
}

fn selection(args: &[String], i: usize) -> Result<Selection, Fail> {
    match args.get(i).map(String::as_str) {
        Some("all") => Ok(Selection::All),
        Some(_) => Ok(Selection::One(arg(args, i, "component")?)),
        None => fail("missing component number or 'all'"),
    }
}

fn axis(s: Option<&String>) -> Result<usize, Fail> {
    match s.map(String::as_str) {
        Some("x" | "X") => Ok(0),
        Some("y" | "Y") => Ok(1),
        Some("z" | "Z") => Ok(2),
        Some(other) => fail(format!("bad axis '{other}'")),
        None => fail("missing axis"),
    }
}

fn vec3(args: &[String], i: usize) -> Result<Vec3, Fail> {
    Ok(Vec3::new(finite(args, i, "x")?, finite(args, i + 1, "y")?, finite(args, i + 2, "z")?))
}

fn no_args(name: &str, args: &[String]) -> Result<(), Fail> {
    if args.is_empty() {
        Ok(())
    } else {
        fail(format!("{name} takes no arguments"))
    }
}

fn summary_table(title: &str, r: &MeasureReport) -> String {
    let mut out = String::new();
    for (i, s) in r.components.iter().enumerate() {
        let _ = writeln!(
            out,
            "component {i}: {title} total {:.6} min {:.6} max {:.6} ratio {:.6} mean {:.6}",
            s.total,
            s.min,
            s.max,
            s.ratio(),
            s.mean
        );
    }
    out.trim_end().to_string()
}

fn model_name(m: EnergyModel) -> &'static str {
    match m {
        EnergyModel::Md => "md",
        EnergyModel::Symm => "symm",
        EnergyModel::Nbeads => "nbeads",
    }
}

fn with_ext(name: &str, ext: &str) -> String {
    if Path::new(name).extension().is_some_and(|e| e.eq_ignore_ascii_case(ext)) {
        name.to_string()
    } else {
        format!("{name}.{ext}")
    }
}

fn read_link(bytes: &[u8]) -> Result<PolyLink, Fail> {
    if bytes.starts_with(b"KFRG") {
        Ok(io::load_native(bytes)?)
    } else {
        Ok(io::load_text(&String::from_utf8_lossy(bytes))?)
    }
}

impl Session {
    /// A link by name: a file in the working directory first, then the
    /// built-in catalogue. The flag says whether it came from a file.
    fn resolve(&self, name: &str) -> Result<(PolyLink, bool), Fail> {
        let path = self.cwd.join(name);
        if path.is_file() {
            return Ok((read_link(&std::fs::read(&path)?)?, true));
        }
        match catalogue::lookup(name) {
            Some(link) => Ok((link?, false)),
            None => fail(format!("no file or catalogue entry named '{name}'")),
        }
    }

    fn write(&self, name: &str, bytes: &[u8]) -> Out {
        let path = self.cwd.join(name);
        std::fs::write(&path, bytes).map_err(|e| Fail(format!("cannot write {name}: {e}")))?;
        Ok(format!("wrote {name}"))
    }

    fn tube_params(&self) -> TubeParams {
        let p = &self.params;
        let radius = match self.display_mode {
            DisplayMode::Smooth => p.real("sradius"),
            DisplayMode::BeadsCylinders => p.real("cradius"),
        };
        let mut t = TubeParams::new(radius, p.count("nseg"), p.count("ncur"));
        t.twist = self.twist.clone();
        t
    }

    fn eps(&self) -> Result<String, Fail> {
        let p = &self.params;
        let opts = EpsOptions {
            psmode: p.int("psmode"),
            pserase: p.real("pserase"),
            bbox: self.bbox,
            strand_width: p.real("pswidth"),
            smooth: self.display_mode == DisplayMode::Smooth,
            ncur: p.count("ncur"),
        };
        Ok(psout(&self.link, &ProjectionMode::View(self.view.clone()), &opts)?)
    }

    fn load(&mut self, args: &[String]) -> Out {
        match args.first().map(String::as_str) {
            Some("combine") => {
                let name: String = arg(args, 1, "file name")?;
                let (other, _) = self.resolve(&name)?;
                let palette = self.palette();
                let base = self.link.components.len();
                for (i, mut c) in other.components.into_iter().enumerate() {
                    c.color = palette.color(base + i);
                    self.link.components.push(c);
                }
                Ok(format!("{} components", self.link.components.len()))
            }
            Some("sum") => {
                let name: String = arg(args, 1, "file name")?;
                let comp = opt(args, 2, "component")?.unwrap_or(0);
                let (other, _) = self.resolve(&name)?;
                self.link = connect_sum(&self.link, comp, &other)?;
                Ok(String::new())
            }
            Some(name) => {
                let (link, from_file) = self.resolve(name)?;
                if from_file {
                    self.link = link;
                    self.twist.clear();
                } else {
                    self.set_link(link);
                }
                Ok(String::new())
            }
            None => fail("missing file name"),
        }
    }

    fn save(&self, name: &str) -> Out {
        let path = Path::new(name);
        match FileFormat::from_path(path) {
            FileFormat::Native => self.write(name, &io::save_native(&self.link)),
            FileFormat::Text => self.write(name, io::save_text(&self.link).as_bytes()),
            FileFormat::Vect => self.write(name, io::save_vect(&self.link).as_bytes()),
            FileFormat::Obj => self.write(name, io::save_obj(&self.link, &self.tube_params())?.as_bytes()),
            FileFormat::Eps => self.write(name, self.eps()?.as_bytes()),
        }
    }

    fn relax_now(&mut self, steps: u64) -> Out {
        let cfg = self.relax_config();
        let mut link = self.link.clone();
        dynamics::run(&mut link, &cfg, &mut self.relax, Steps::Count(steps), |_, _| {}, || false)?;
        self.link = link;
        Ok(String::new())
    }

    fn go(&mut self, args: &[String]) -> Out {
        let steps: Option<u64> = opt(args, 0, "step count")?;
        if self.headless || self.scripting {
            return self.relax_now(steps.unwrap_or(DEFAULT_STEPS));
        }
        if self.running.take().is_some() {
            return Ok("relaxation stopped".into());
        }
        self.undo_slot = Some(self.link.clone());
        self.running = Some(Running { left: steps });
        Ok("relaxation running".into())
    }

    fn until(&mut self, args: &[String]) -> Out {
        if args.first().map(String::as_str) != Some("safe") {
            return fail("usage: until safe \"command\"");
        }
        let cmd = args[1..].join(" ");
        if cmd.trim().is_empty() {
            return fail("until safe needs a command");
        }
        if self.depth >= MAX_DEPTH {
            return fail("until nested too deeply");
        }
        self.depth += 1;
        let mut result = fail(format!("still unsafe after {MAX_UNTIL} repetitions"));
        for _ in 0..MAX_UNTIL {
            if check_safe(&self.link, self.params.real("close")).safe {
                result = Ok(String::new());
                break;
            }
            let before = self.complaint_count();
            self.run_text(&cmd);
            if self.complaint_count() > before || self.flow() != Flow::Continue {
                result = fail("until safe stopped after a complaint");
                break;
            }
        }
        self.depth -= 1;
        result
    }

    fn info(&self, short: bool) -> String {
        let i = measures::info(&self.link);
        if short {
            return format!("{} components, {} beads", i.components, i.total_beads);
        }
        let mut out = format!("components: {}\nbeads: {}", i.components, i.total_beads);
        for (k, (n, closed)) in i.beads.iter().zip(&i.closed).enumerate() {
            let hidden = if self.link.components[k].hidden { ", hidden" } else { "" };
            let _ = write!(out, "\ncomponent {k}: {n} beads, {}{hidden}", if *closed { "closed" } else { "open" });
        }
        out
    }

    fn shift(&mut self, args: &[String]) -> Out {
        let word: String = arg(args, 0, "shift amount")?;
        let extreme = match word.as_str() {
            "maxx" => Some((0, true)),
            "minx" => Some((0, false)),
            "maxy" => Some((1, true)),
            "miny" => Some((1, false)),
            "maxz" => Some((2, true)),
            "minz" => Some((2, false)),
            _ => None,
        };
        let sel = match args.get(1) {
            Some(_) => Selection::One(arg(args, 1, "component")?),
            None => Selection::All,
        };
        let Some((ax, max)) = extreme else {
            let by: usize = arg(args, 0, "shift amount")?;
            self.link = edit_topology(&self.link, &TopoEdit::Shift { by, selection: sel })?;
            return Ok(String::new());
        };
        let mut link = self.link.clone();
        for ci in 0..link.components.len() {
            if matches!(sel, Selection::One(k) if k != ci) || !link.components[ci].closed {
                continue;
            }
            let vs = &link.components[ci].vertices;
            let key = |i: usize| if max { vs[i][ax] } else { -vs[i][ax] };
            let by = (0..vs.len()).max_by(|&a, &b| key(a).total_cmp(&key(b))).unwrap_or(0);
            link = edit_topology(&link, &TopoEdit::Shift { by, selection: Selection::One(ci) })?;
        }
        if let Selection::One(k) = sel {
            self.link.component(k)?;
        }
        self.link = link;
        Ok(String::new())
    }

    fn line(&mut self, args: &[String]) -> Out {
        let nums: Vec<String> = args.iter().filter(|a| *a != "from" && *a != "to").cloned().collect();
        let (from, to, rest) = match nums.len() {
            3 | 4 => (Vec3::zeros(), vec3(&nums, 0)?, 3),
            6 | 7 => (vec3(&nums, 0)?, vec3(&nums, 3)?, 6),
            _ => return fail("usage: line [from] x y z [to] x y z [beads]"),
        };
        let n = opt(&nums, rest, "bead count")?.unwrap_or(11);
        self.set_link(construct::line(from, to, n)?);
        Ok(String::new())
    }
}

/// Splice component 0 of `other` into component `comp` of `base` where the
/// two come closest, after moving `other` just beyond `base` along +x.
/// Any further components of `other` are added unchanged.
pub(crate) fn connect_sum(base: &PolyLink, comp: usize, other: &PolyLink) -> Result<PolyLink, Fail> {
    let target = base.component(comp)?;
    let Some(summand) = other.components.first() else {
        return fail("nothing to sum with");
    };
    if !target.closed || !summand.closed {
        return fail("load sum needs closed components");
    }
    let gap = target.arc_length() / target.edge_count() as f64;
    let max_x = base.vertices().map(|v| v.x).fold(f64::NEG_INFINITY, f64::max);
    let min_x = other.vertices().map(|v| v.x).fold(f64::INFINITY, f64::min);
    let centre = |c: &Component| c.vertices.iter().sum::<Vec3>() / c.len() as f64;
    let (ct, cs) = (centre(target), centre(summand));
    let offset = Vec3::new(max_x + gap - min_x, ct.y - cs.y, ct.z - cs.z);
    let moved = transform(other, &Transform::Translate { offset, component: None })?;
    let mut s = moved.components[0].clone();
    let closest = |s: &Component| {
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..target.edge_count() {
            let (a, b) = target.edge(i);
            for j in 0..s.edge_count() {
                let (p, q) = s.edge(j);
                let d = seg_min_distance(&a, &b, &p, &q);
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        best
    };
    let (_, i, j) = closest(&s);
    let (a, b) = target.edge(i);
    let (p, q) = s.edge(j);
    if (b - a).dot(&(q - p)) > 0.0 {
        s = s.reversed();
    }
    let (_, i, j) = closest(&s);
    // walk b..a round the target, then q..p round the summand
    let n = target.len();
    let m = s.len();
    let mut vs: Vec<Vec3> = (1..=n).map(|k| target.vertices[(i + k) % n]).collect();
    vs.extend((1..=m).map(|k| s.vertices[(j + k) % m]));
    let mut joined = Component::new(vs, true);
    joined.color = target.color;
    joined.hidden = target.hidden;
    let mut out = base.clone();
    out.components[comp] = joined;
    out.components.extend(moved.components.into_iter().skip(1));
    Ok(out)
}

pub(crate) fn dispatch(s: &mut Session, name: &str, args: &[String]) -> Out {
    if UNSUPPORTED.contains(&name) {
        return fail(format!("unsupported command '{name}'"));
    }
    let first = args.first().map(String::as_str);
    match name {
        "about" => {
            let ax = axis(args.first())?;
            let degrees = finite(args, 1, "angle")?;
            s.link = transform(&s.link, &Transform::About { axis: ax, degrees })?;
            Ok(String::new())
        }
        "acn" => {
            let r = measures::acn_writhe(&s.link)?;
            Ok(format!("acn = {:.6}\nwrithe = {:.6}", r.acn, r.writhe))
        }
        "ago" => s.relax_now(opt(args, 0, "step count")?.unwrap_or(DEFAULT_STEPS)),
        "go" => s.go(args),
        "stop" => {
            s.running = None;
            Ok(String::new())
        }
        "alias" => match args.len() {
            0 => Ok(s.aliases.iter().map(|(k, v)| format!("{k} \"{v}\"")).collect::<Vec<_>>().join("\n")),
            1 => s.aliases.get(&args[0]).map(|v| format!("{} \"{v}\"", args[0])).ok_or(Fail(format!("no alias {}", args[0]))),
            _ => {
                s.aliases.insert(args[0].clone(), args[1..].join(" "));
                Ok(String::new())
            }
        },
        "align" => {
            if first != Some("axes") {
                return fail("usage: align axes");
            }
            let a = align_axes(&s.link)?;
            s.link = a.link;
            Ok(if a.degenerate { "principal moments nearly equal; axes are arbitrary".into() } else { String::new() })
        }
        "angle" => {
            if first == Some("turning") {
                s.angle_turning = !s.angle_turning;
            }
            let title = if s.angle_turning { "turning angle" } else { "internal angle" };
            Ok(summary_table(title, &measures::angle_stats(&s.link, s.angle_turning)))
        }
        "braid" => {
            let word = construct::parse_braid(&args.join(""))?;
            let link = construct::braid_close(&word)?;
            let text = format!("{} on {} strands", construct::render_braid(&word), word.strands);
            s.set_link(link);
            Ok(text)
        }
        "centre" | "center" => {
            let mode = if first == Some("mass") { CentreMode::Mass } else { CentreMode::BoundingBox };
            s.link = centre(&s.link, mode)?;
            Ok(String::new())
        }
        "chain" => {
            let k = arg(args, 0, "component count")?;
            let beads = opt(args, 1, "beads per component")?.unwrap_or(24);
            s.set_link(construct::chain(k, beads)?);
            Ok(String::new())
        }
        "cheapo" | "luxo" => {
            let (ncur, nseg) = if name == "cheapo" { ("3", "6") } else { ("11", "24") };
            s.params.set("ncur", ncur)?;
            s.params.set("nseg", nseg)?;
            Ok(String::new())
        }
        "close" | "open" => {
            let sel = selection(args, 0)?;
            let edit = if name == "close" { TopoEdit::Close(sel) } else { TopoEdit::Open(sel) };
            s.link = edit_topology(&s.link, &edit)?;
            Ok(String::new())
        }
        "collision" => {
            s.collision = match first {
                Some("allow") => Collision::Allow,
                Some("fast") => Collision::Fast,
                _ => return fail("usage: collision allow|fast"),
            };
            Ok(String::new())
        }
        "colour" | "color" => {
            let sel = selection(args, 0)?;
            let c = parse_color(&args[1..].join(""))?;
            if let Selection::One(i) = sel {
                s.link.component(i)?;
            }
            for (i, comp) in s.link.components.iter_mut().enumerate() {
                if matches!(sel, Selection::All) || sel == Selection::One(i) {
                    comp.color = c;
                }
            }
            Ok(String::new())
        }
        "conway" => {
            let (link, tangle) = construct::conway_pretzel(&args.join(""))?;
            s.set_link(link);
            Ok(format!("tangle {tangle}"))
        }
        "cut" => {
            let edit = match first {
                Some("outside") => TopoEdit::CutOutside { axis: axis(args.get(1))?, offset: finite(args, 2, "offset")? },
                Some("pieces") => TopoEdit::CutPieces(arg(args, 1, "piece count")?),
                _ => TopoEdit::Cut(arg(args, 0, "bead number")?),
            };
            s.link = edit_topology(&s.link, &edit)?;
            Ok(String::new())
        }
        "cwd" => Ok(s.cwd().display().to_string()),
        "delete" => {
            if first == Some("downto") {
                let target = arg(args, 1, "bead count")?;
                let before = s.link.bead_count();
                s.link = dynamics::delete_downto(&s.link, &s.relax_config(), target);
                return Ok(format!("{before} -> {} beads", s.link.bead_count()));
            }
            s.link = edit_topology(&s.link, &TopoEdit::Delete(selection(args, 0)?))?;
            Ok(String::new())
        }
        "display" | "panel" | "show" => Ok(String::new()),
        "imgout" => {
            if s.headless {
                Ok("imgout: no frame buffer, nothing written".into())
            } else {
                fail("unsupported command 'imgout' (use the viewer's screenshot button)")
            }
        }
        "distance" => {
            let (d, (e, f)) = s.link.min_nonadjacent_distance()?;
            Ok(format!(
                "minimum distance = {d:.6} between edges {}:{} and {}:{}",
                e.component, e.index, f.component, f.index
            ))
        }
        "dowker" | "gauss" => {
            if first == Some("projection") {
                s.dowker_projection = match args.get(1).map(String::as_str) {
                    Some("view") => DowkerProjection::View,
                    Some("z") => DowkerProjection::Z,
                    _ => return fail(format!("usage: {name} projection view|z")),
                };
                return Ok(String::new());
            }
            let proj = s.dowker_mode();
            if name == "dowker" {
                Ok(codes::format_dowker(&codes::dowker(&s.link, &proj)?))
            } else {
                Ok(codes::format_gauss(&codes::gauss_extended(&s.link, &proj)?))
            }
        }
        "draw" => match first {
            Some(style @ ("flat" | "hflat" | "normal" | "spectrum")) => {
                s.draw_style = style.to_string();
                Ok(String::new())
            }
            _ => fail("usage: draw flat|hflat|normal|spectrum"),
        },
        "duplicate" => {
            let k = opt(args, 0, "component")?.unwrap_or(0);
            s.link = edit_topology(&s.link, &TopoEdit::Duplicate(k))?;
            Ok(String::new())
        }
        "energy" => {
            if first == Some("model") {
                match args.get(1).map(|a| a.to_ascii_lowercase()).as_deref() {
                    None => {
                        return Ok(format!("energy models: md symm nbeads (current {})", model_name(s.energy_model)))
                    }
                    Some("md") => s.energy_model = EnergyModel::Md,
                    Some("symm") => s.energy_model = EnergyModel::Symm,
                    Some("nbeads") => s.energy_model = EnergyModel::Nbeads,
                    Some(other) => return fail(format!("unknown energy model '{other}'")),
                }
                return Ok(String::new());
            }
            let e = measures::energy(&s.link, s.energy_model)?;
            Ok(format!("energy ({}) = {e:.6}", model_name(s.energy_model)))
        }
        "exit" | "quit" => {
            s.set_flow(Flow::Exit);
            Ok(String::new())
        }
        "export" => {
            let file = with_ext(&arg::<String>(args, 0, "file name")?, "obj");
            let text = io::save_obj(&s.link, &s.tube_params())?;
            s.write(&file, text.as_bytes())
        }
        "fitto" => {
            let (mode, i) = match first {
                Some("mindist") => (FitMode::MinDist, 1),
                Some("avlength") => (FitMode::AvLength, 1),
                _ => (FitMode::Extent, 0),
            };
            s.link = fitto(&s.link, mode, finite(args, i, "size")?)?;
            Ok(String::new())
        }
        "head" => {
            let n = if first == Some("off") { None } else { Some(arg(args, 0, "bead count")?) };
            s.link = visibility(&s.link, Visibility::Head(n))?;
            Ok(String::new())
        }
        "hide" | "unhide" => {
            let sel = selection(args, 0)?;
            let v = if name == "hide" { Visibility::Hide(sel) } else { Visibility::Unhide(sel) };
            s.link = visibility(&s.link, v)?;
            Ok(String::new())
        }
        "info" => Ok(s.info(first == Some("s"))),
        "jitter" => {
            let magnitude = opt(args, 0, "magnitude")?.unwrap_or(0.1);
            let seed = s.rng.gen();
            s.link = edit_beads(&s.link, &BeadEdit::Jitter { magnitude, seed })?;
            Ok(String::new())
        }
        "join" => {
            let a: Endpoint = arg(args, 0, "endpoint")?;
            let b: Endpoint = arg(args, 1, "endpoint")?;
            s.link = edit_topology(&s.link, &TopoEdit::Join(a, b))?;
            Ok(String::new())
        }
        "keep" => {
            s.link = edit_topology(&s.link, &TopoEdit::Keep(arg(args, 0, "component")?))?;
            Ok(String::new())
        }
        "knot" => {
            let want: Option<usize> = opt(args, 0, "component count")?;
            let pool: Vec<&str> = catalogue::names()
                .filter(|n| want.is_none_or(|k| catalogue::components(n) == Some(k)))
                .collect();
            let Some(pick) = pool.choose(&mut s.rng).copied() else {
                return fail("no catalogue entry with that many components");
            };
            s.set_link(catalogue::lookup(pick).unwrap()?);
            Ok(pick.to_string())
        }
        "length" => Ok(summary_table("edge length", &measures::length_stats(&s.link))),
        "line" => s.line(args),
        "lissajous" => {
            let n = opt(args, 0, "bead count")?.unwrap_or(s.params.count("N-torus"));
            let seed = s.rng.gen();
            let (link, spec) = construct::lissajous_until_safe(n, 5.0, s.params.real("close"), seed, 10_000)?;
            s.set_link(link);
            Ok(format!("frequencies {:?}", spec.freq))
        }
        "lnknum" => {
            let m = measures::lnknum(&s.link)?;
            let rows: Vec<String> = m
                .row_iter()
                .map(|r| r.iter().map(|x| format!("{x:3}")).collect::<Vec<_>>().join(" "))
                .collect();
            Ok(rows.join("\n"))
        }
        "load" => s.load(args),
        "mass" => {
            if first != Some("open") {
                return fail("usage: mass open");
            }
            s.link = dynamics::mass_open(&s.link)?;
            Ok(String::new())
        }
        "matrgb" => {
            let c = knotforge_core::Color::new(
                finite(args, 1, "red")?,
                finite(args, 2, "green")?,
                finite(args, 3, "blue")?,
            );
            match first {
                Some("bead") => s.bead_color = Some(c),
                Some("knot") => s.link.components.iter_mut().for_each(|comp| comp.color = c),
                _ => return fail("usage: matrgb bead|knot r g b"),
            }
            Ok(String::new())
        }
        "mode" => {
            s.display_mode = match first {
                Some("cb") => DisplayMode::BeadsCylinders,
                Some("s") => DisplayMode::Smooth,
                _ => return fail("usage: mode cb|s"),
            };
            Ok(String::new())
        }
        "nap" => {
            let secs = finite(args, 0, "seconds")?.max(0.0);
            if s.headless {
                s.clock += secs;
            } else {
                std::thread::sleep(Duration::from_secs_f64(secs.min(3600.0)));
            }
            s.drain_queue(false);
            Ok(String::new())
        }
        "nbeads" => {
            let mode = match first {
                Some("mult") => NbeadsMode::Mult(finite(args, 1, "factor")?),
                Some(a) if a.starts_with('+') || a.starts_with('-') => NbeadsMode::Delta(arg(args, 0, "bead change")?),
                _ => NbeadsMode::Absolute(arg(args, 0, "bead count")?),
            };
            s.link = edit_beads(&s.link, &BeadEdit::Nbeads(mode))?;
            Ok(String::new())
        }
        "orthographic" | "ortho" | "perspective" => {
            let p = if name == "perspective" { Projection::Perspective } else { Projection::Orthographic };
            s.view = view_ops(&s.view, ViewOp::SetProjection(p))?;
            Ok(String::new())
        }
        "parameters" => {
            let prefix = first.unwrap_or("");
            Ok(s.params.with_prefix(prefix).map(|(n, v)| format!("{n} = {v}")).collect::<Vec<_>>().join("\n"))
        }
        "path" => Ok(format!(
            "Current execute path:\n   .\nCurrent write path:\n   .\nCurrent read path:\n   .\n   (built-in catalogue)\nwhere . is {}",
            s.cwd().display()
        )),
        "project" => {
            let spec = match first {
                Some("random") => Transform::ProjectRandom { seed: s.rng.gen() },
                _ => {
                    let mut d = Vec3::zeros();
                    d[axis(args.first())?] = 1.0;
                    Transform::Project { direction: d }
                }
            };
            s.link = transform(&s.link, &spec)?;
            Ok(String::new())
        }
        "psoption" => {
            if first != Some("bbox") {
                return fail("usage: psoption bbox square|tight");
            }
            s.bbox = match args.get(1).map(String::as_str) {
                Some("square") => BBox::Square,
                Some("tight") => BBox::Tight,
                _ => return fail("usage: psoption bbox square|tight"),
            };
            Ok(String::new())
        }
        "psout" => {
            let file = with_ext(&arg::<String>(args, 0, "file name")?, "eps");
            let text = s.eps()?;
            s.write(&file, text.as_bytes())
        }
        "refine" => {
            let edit = if first == Some("equilateral") {
                BeadEdit::RefineEquilateral(finite(args, 1, "edge length")?)
            } else {
                BeadEdit::Refine(arg(args, 0, "factor")?)
            };
            s.link = edit_beads(&s.link, &edit)?;
            Ok(String::new())
        }
        "reflect" => {
            let component = opt(args, 1, "component")?;
            let spec = match first {
                Some("r") => Transform::ReflectRandom { seed: s.rng.gen() },
                Some(axes) if !axes.is_empty() && axes.chars().all(|c| "xyzXYZ".contains(c)) => {
                    let mut flags = [false; 3];
                    for c in axes.chars() {
                        let i = "xyz".find(c.to_ascii_lowercase()).unwrap();
                        flags[i] = !flags[i];
                    }
                    Transform::Reflect { axes: flags, component }
                }
                _ => return fail("usage: reflect x|y|z|xy|...|r [component]"),
            };
            s.link = transform(&s.link, &spec)?;
            Ok(String::new())
        }
        "reset" => {
            if first == Some("all") {
                s.reset_all();
                return Ok(String::new());
            }
            s.view = Default::default();
            s.params.set("vscale", "1")?;
            s.display_mode = DisplayMode::default();
            s.draw_style = "normal".into();
            s.aliases.retain(|k, _| !k.starts_with('~'));
            Ok(String::new())
        }
        "revbeads" => {
            let sel = match args.first() {
                Some(_) => Selection::One(arg(args, 0, "component")?),
                None => Selection::All,
            };
            s.link = edit_topology(&s.link, &TopoEdit::RevBeads(sel))?;
            Ok(String::new())
        }
        "rog" => Ok(format!("radius of gyration = {:.6}", measures::rog(&s.link)?)),
        "rotate" => {
            match first {
                Some("fix") => {
                    let (link, view) = rotate_fix(&s.link, &s.view);
                    s.link = link;
                    s.view = view;
                }
                Some("unit") => s.view = view_ops(&s.view, ViewOp::Unit)?,
                Some(a) => {
                    let ax: ViewAxis = a.parse()?;
                    s.view = view_ops(&s.view, ViewOp::Rotate(ax, finite(args, 1, "angle")?))?;
                }
                None => return fail("usage: rotate x|y|z|i|j|k degrees, rotate fix, rotate unit"),
            }
            Ok(String::new())
        }
        "safe" => {
            let close = s.params.real("close");
            let r = check_safe(&s.link, close);
            Ok(format!(
                "{} (minimum distance {:.6}, close {close})",
                if r.safe { "safe" } else { "not safe" },
                r.min_distance
            ))
        }
        "save" => s.save(&arg::<String>(args, 0, "file name")?),
        "scale" => {
            let spec = match args.len() {
                1 => Transform::Scale(finite(args, 0, "factor")?),
                3 => Transform::ScaleXyz(vec3(args, 0)?),
                _ => return fail("usage: scale s | scale sx sy sz"),
            };
            s.link = transform(&s.link, &spec)?;
            Ok(String::new())
        }
        "seed" => {
            s.reseed(arg(args, 0, "seed")?);
            Ok(String::new())
        }
        "shift" => s.shift(args),
        "split" => {
            no_args(name, args)?;
            s.link = edit_beads(&s.link, &BeadEdit::Split)?;
            Ok(String::new())
        }
        "swap" => {
            let edit = if first == Some("random") {
                TopoEdit::SwapRandom { seed: s.rng.gen() }
            } else {
                TopoEdit::Swap(arg(args, 0, "component")?, arg(args, 1, "component")?)
            };
            s.link = edit_topology(&s.link, &edit)?;
            Ok(String::new())
        }
        "tfunction" => {
            let delay = finite(args, 0, "delay")?.max(0.0);
            let command = args[1..].join(" ");
            if command.trim().is_empty() {
                return fail("tfunction needs a command");
            }
            let due = s.now() + delay;
            s.queue.push(Queued { due, command });
            Ok(String::new())
        }
        "thickness" => Ok(format!("thickness = {:.6}", measures::thickness(&s.link)?)),
        "timer" => {
            let label: String = arg(args, 1, "timer name")?;
            match first {
                Some("start") => {
                    s.timers.insert(label, Instant::now());
                    Ok(String::new())
                }
                Some("check") => match s.timers.get(&label) {
                    Some(t) => Ok(format!("timer {label}: {:.3} s", t.elapsed().as_secs_f64())),
                    None => fail(format!("no timer named {label}")),
                },
                _ => fail("usage: timer start|check name"),
            }
        }
        "torus" => {
            let p = &s.params;
            let spec = TorusSpec {
                p: arg(args, 0, "p")?,
                q: arg(args, 1, "q")?,
                n: opt(args, 2, "bead count")?.unwrap_or(p.count("N-torus")),
                big_r: opt(args, 3, "radius")?.unwrap_or(p.real("R-torus")),
                small_r: opt(args, 4, "radius")?.unwrap_or(p.real("d-torus")),
            };
            s.set_link(construct::torus(&spec)?);
            Ok(String::new())
        }
        "translate" => {
            let spec = if first == Some("to") {
                Transform::TranslateTo(vec3(args, 1)?)
            } else {
                Transform::Translate { offset: vec3(args, 0)?, component: opt(args, 3, "component")? }
            };
            s.link = transform(&s.link, &spec)?;
            Ok(String::new())
        }
        "twfix" => {
            let params = s.tube_params();
            let mut twist = vec![0.0; s.link.components.len()];
            for (i, t) in twist.iter_mut().enumerate() {
                if s.link.components[i].closed {
                    *t = io::twfix(&s.link, i, &params)?;
                }
            }
            let text = twist.iter().map(|t| format!("{:.6}", t.to_degrees())).collect::<Vec<_>>().join(" ");
            s.twist = twist;
            Ok(format!("twist (degrees): {text}"))
        }
        "undo" => match s.undo_slot.take() {
            Some(prev) => {
                s.undo_slot = Some(std::mem::replace(&mut s.link, prev));
                Ok(String::new())
            }
            None => fail("nothing to undo"),
        },
        "unknot" => {
            let n = opt(args, 0, "bead count")?.unwrap_or(s.params.count("N-torus"));
            let r = opt(args, 1, "radius")?.unwrap_or(s.params.real("R-torus"));
            s.set_link(construct::unknot(n, r)?);
            Ok(String::new())
        }
        "untran" => {
            s.view = view_ops(&s.view, ViewOp::Untran)?;
            Ok(String::new())
        }
        "until" => s.until(args),
        "version" => Ok(format!("knotforge {}", env!("CARGO_PKG_VERSION"))),
        "xing" => Ok(format!("xing = {}", codes::xing(&s.link, &ProjectionMode::Z)?)),
        _ => fail(format!("unknown command '{name}'")),
    }
}
