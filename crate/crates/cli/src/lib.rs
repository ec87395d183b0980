//! Command-line front end. `run` never prints; `main` decides where the
//! summary and payload go.

use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use doughnut_core::angleform::{AngleForm, Assignment};
use doughnut_core::diagram::{catalog, develop, symbolic_checks, verify_existence, worst_residual, SeedPose};
use doughnut_core::diagram::EXISTENCE_TOLERANCE;
use doughnut_core::doughnut::{
    build_doughnut, check_overlaps, hole_polygon, isosceles_fill, limit_curve, limit_exponent, power_transform,
    renormalized_boundary, DEFAULT_MERGE_TOLERANCE,
};
use doughnut_core::geometry::BBox;
use doughnut_core::holonomy::cyclotomic_max_residual;
use doughnut_core::packing::{develop_packing, shapes_from_ratios, vertex_fit_check, PackingParams};
use doughnut_core::render::{flipbook, to_svg, AssignmentPolicy, RenderStyle, Scene, DEFAULT_FLIPBOOK_WEIGHTS};
use doughnut_core::search::{SearchBounds, SearchPlan, TriangulationPolicy};
use doughnut_core::{parse_angle, sector_unit, DiagramSpec, Error, PlacedDiagram, Point};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DOUGHNUTS_OUT_DIR";

const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutcome {
    pub code: i32,
    pub summary: String,
    /// Document for stdout when it was not written to `payload_path`.
    pub payload: Option<String>,
    pub payload_path: Option<PathBuf>,
}

impl CommandOutcome {
    fn failure(code: i32, summary: impl Into<String>) -> Self {
        CommandOutcome {
            code,
            summary: summary.into(),
            payload: None,
            payload_path: None,
        }
    }
}

fn angle(text: &str) -> Result<f64, String> {
    parse_angle(text).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "doughnut", version, about = "Construct and verify triangle diagrams")]
struct Cli {
    /// Default directory for output documents.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long = "out", value_enum, default_value = "json")]
    format: Format,
    /// Write the document here instead of stdout or the output directory.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Label triangles in SVG output.
    #[arg(long)]
    labels: bool,
}

#[derive(Args, Debug)]
struct Angles {
    /// Angle `a` (suffix deg, rad or tau; bare numbers are radians).
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Completed from `a + b + c = tau/(2n)` when omitted.
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    c: Option<f64>,
}

impl Angles {
    fn given(&self) -> bool {
        self.a.is_some() || self.b.is_some() || self.c.is_some()
    }

    fn assignment(&self, n: u32) -> Result<Assignment, Error> {
        match (self.a, self.b, self.c) {
            (Some(a), Some(b), Some(c)) => Assignment::new(a, b, c, n),
            (Some(a), Some(b), None) => Assignment::from_ab(a, b, n),
            (Some(a), None, Some(c)) => Assignment::new(a, sector_unit(n) - a - c, c, n),
            (None, Some(b), Some(c)) => Assignment::new(sector_unit(n) - b - c, b, c, n),
            _ => Err(Error::InvalidArgument("give at least two of --a, --b, --c".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    NoInteriorVertex,
    SingleInteriorVertex,
}

impl From<PolicyArg> for TriangulationPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::NoInteriorVertex => TriangulationPolicy::NoInteriorVertex,
            PolicyArg::SingleInteriorVertex => TriangulationPolicy::SingleInteriorVertex,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify that a diagram exists (catalog name or spec JSON file).
    Check {
        target: String,
        #[command(flatten)]
        angles: Angles,
        #[arg(long, default_value_t = EXISTENCE_TOLERANCE)]
        tol: f64,
        /// Random assignments used when no angles are given.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Build, develop and analyze the n-doughnut.
    Doughnut {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        angles: Angles,
        /// Attach the isosceles fill to the hole.
        #[arg(long)]
        fill: bool,
        /// Base angle of the fill as a form, e.g. `tau/20`; defaults to `tau/(2n)`.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Raise the hole boundary to this power about corner A.
        #[arg(long)]
        power: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the cyclotomic sine product identity on a grid.
    Identity {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        /// Relative perturbation of the constant `2^(n-1)`.
        #[arg(long, allow_hyphen_values = true)]
        perturb: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare renormalized hole boundaries against the limit curve.
    Asymptote {
        #[arg(long, value_parser = angle)]
        corner_angle: f64,
        #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
        n_list: Vec<u32>,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustive search for linear-form fillings of the hole.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        max_num: u32,
        #[arg(long, default_value_t = 4)]
        max_fill: usize,
        #[arg(long, value_enum, default_value = "no-interior-vertex")]
        policy: PolicyArg,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Work-item range `start..end`; the whole search when omitted.
        #[arg(long)]
        cursor: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Develop an exponential circle packing patch.
    Pack {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 6)]
        rows: usize,
        #[arg(long, default_value_t = 6)]
        cols: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Render doughnut frames for n = from, from-1, ..., to.
    Flipbook {
        #[arg(long, default_value_t = 8)]
        from: u32,
        #[arg(long, default_value_t = 2)]
        to: u32,
        /// Ratios a:b:c.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        weights: Option<Vec<f64>>,
        #[arg(long, conflicts_with = "weights")]
        equilateral: bool,
    },
}

fn code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidSpec(_)
        | Error::UnknownName(_)
        | Error::ConstraintViolation { .. }
        | Error::DegenerateAngle { .. } => EXIT_INVALID,
        _ => EXIT_DOMAIN,
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            return CommandOutcome::failure(code, err.render().to_string());
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => outcome,
        Err(Failure::Domain(err)) => CommandOutcome::failure(code_for(&err), format!("error: {err}")),
        Err(Failure::Io(msg)) => CommandOutcome::failure(EXIT_DOMAIN, format!("error: {msg}")),
    }
}

enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Domain(err)
    }
}

type Outcome = Result<CommandOutcome, Failure>;

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("payload types serialize")
}

/// Writes `document` to `explicit`, else to `out_dir/default_name`, else
/// hands it back for stdout.
fn deliver(
    code: i32,
    summary: String,
    document: String,
    explicit: Option<&Path>,
    out_dir: Option<&Path>,
    default_name: &str,
) -> Outcome {
    let path = explicit
        .map(Path::to_path_buf)
        .or_else(|| out_dir.map(|d| d.join(default_name)));
    match path {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| Failure::Io(format!("{}: {e}", parent.display())))?;
            }
            fs::write(&path, document).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(CommandOutcome {
                code,
                summary,
                payload: None,
                payload_path: Some(path),
            })
        }
        None => Ok(CommandOutcome {
            code,
            summary,
            payload: Some(document),
            payload_path: None,
        }),
    }
}

fn style(output: &Output) -> RenderStyle {
    RenderStyle {
        labels: output.labels,
        ..RenderStyle::default()
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let out_dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Check {
            target,
            angles,
            tol,
            trials,
            seed,
            output,
        } => check(target, angles, *tol, *trials, *seed, output, out_dir),
        Command::Doughnut {
            n,
            angles,
            fill,
            beta,
            power,
            output,
        } => doughnut(*n, angles, *fill, beta.as_deref(), *power, output, out_dir),
        Command::Identity {
            n,
            grid,
            perturb,
            out,
            output,
        } => identity(*n, *grid, *perturb, *out, output.as_deref(), out_dir),
        Command::Asymptote {
            corner_angle,
            n_list,
            samples,
            output,
        } => asymptote(*corner_angle, n_list, *samples, output, out_dir),
        Command::Search {
            n,
            max_num,
            max_fill,
            policy,
            samples,
            trials,
            seed,
            cursor,
            output,
        } => {
            let bounds = SearchBounds {
                max_numerator: *max_num,
                max_fill_triangles: *max_fill,
                policy: (*policy).into(),
                samples: *samples,
                numeric_trials: *trials,
                seed: *seed,
            };
            search(*n, bounds, cursor.as_deref(), output.as_deref(), out_dir)
        }
        Command::Pack {
            s,
            t,
            rows,
            cols,
            output,
        } => pack(*s, *t, *rows, *cols, output, out_dir),
        Command::Flipbook {
            from,
            to,
            weights,
            equilateral,
        } => flip(*from, *to, weights.as_deref(), *equilateral, out_dir),
    }
}

fn load_spec(target: &str) -> Result<DiagramSpec, Failure> {
    let path = Path::new(target);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{target}: {e}")))?;
        let spec = DiagramSpec::from_json(&text)?;
        spec.validate()?;
        Ok(spec)
    } else {
        Ok(catalog(target)?)
    }
}

fn check(
    target: &str,
    angles: &Angles,
    tol: f64,
    trials: usize,
    seed: u64,
    output: &Output,
    out_dir: Option<&Path>,
) -> Outcome {
    let spec = load_spec(target)?;
    let name = spec.name().unwrap_or(target).to_string();
    let (payload, exists, shown) = if angles.given() {
        let x = angles.assignment(spec.n)?;
        let report = verify_existence(&spec, &x, tol)?;
        let exists = report.exists;
        let payload = json!({
            "target": name,
            "n": spec.n,
            "mode": "assignment",
            "assignment": to_value(&x),
            "report": to_value(&report),
        });
        (payload, exists, x)
    } else {
        if trials == 0 {
            return Err(Error::InvalidArgument("--trials must be positive".into()).into());
        }
        let symbolic = symbolic_checks(&spec)?;
        let worst = worst_residual(&spec, trials, seed)?;
        let exists = symbolic.passes() && worst < tol;
        let payload = json!({
            "target": name,
            "n": spec.n,
            "mode": "random",
            "trials": trials,
            "seed": seed,
            "symbolic": to_value(&symbolic),
            "symbolic_passes": symbolic.passes(),
            "max_normalized_residual": worst,
            "tolerance": tol,
            "exists": exists,
        });
        (payload, exists, Assignment::equilateral(spec.n))
    };
    let verdict = if exists { "exists" } else { "does not exist" };
    let code = if exists { EXIT_OK } else { EXIT_DOMAIN };
    let summary = format!("{name}: {verdict}");
    let document = match output.format {
        Format::Json => json_text(&payload),
        Format::Svg => {
            let placed = develop(&spec, &shown, &SeedPose::default_for(&spec))?;
            to_svg(&Scene::new().with_placed(&placed, Some(&spec)), &style(output))?
        }
    };
    let file = format!("check-{}.{}", sanitize(&name), output.format.extension());
    deliver(code, summary, document, output.output.as_deref(), out_dir, &file)
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// The similarity sending corner A to 0 and corner B to 1.
fn normalize(placed: &PlacedDiagram, spec: &DiagramSpec) -> Result<PlacedDiagram, Error> {
    let corner = |name: &str| {
        placed
            .vertex(spec, name)
            .ok_or_else(|| Error::InvalidSpec(format!("missing corner {name}")))
    };
    let (a, b) = (corner("A")?, corner("B")?);
    let scale = Point::new(1.0, 0.0) / (b - a);
    Ok(placed.transformed(scale, -a * scale))
}

fn doughnut(
    n: u32,
    angles: &Angles,
    fill: bool,
    beta: Option<&str>,
    power: Option<f64>,
    output: &Output,
    out_dir: Option<&Path>,
) -> Outcome {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("doughnuts need n >= 2, got {n}")).into());
    }
    let x = if angles.given() {
        angles.assignment(n)?
    } else {
        Assignment::proportional(DEFAULT_FLIPBOOK_WEIGHTS, n)?
    };
    let mut spec = build_doughnut(n)?;
    let placed = normalize(&develop(&spec, &x, &SeedPose::default_for(&spec))?, &spec)?;
    check_overlaps(&placed, DEFAULT_MERGE_TOLERANCE)?;
    let hole = hole_polygon(&placed, &spec)?;
    let frame_area = doughnut_core::geometry::polygon_area(&[
        placed.vertex(&spec, "A").expect("corner A"),
        placed.vertex(&spec, "B").expect("corner B"),
        placed.vertex(&spec, "C").expect("corner C"),
    ]);
    let mut shown = placed.clone();
    let mut fill_value = Value::Null;
    if fill {
        let beta: AngleForm = match beta {
            Some(text) => text.parse()?,
            None => AngleForm::turns(1, 2 * i64::from(n)),
        };
        spec = isosceles_fill(&spec, &beta, &x)?;
        shown = normalize(&develop(&spec, &x, &SeedPose::default_for(&spec))?, &spec)?;
        fill_value = json!({
            "beta": beta.to_string(),
            "triangles": spec.triangles.len(),
            "normalized_residual": shown.normalized_residual(&spec),
        });
    }
    let powered = match power {
        Some(p) if !hole.is_empty() => Some(power_transform(&hole.vertices, p, Point::new(0.0, 0.0))?),
        Some(_) => return Err(Error::HoleAbsent { n }.into()),
        None => None,
    };
    let payload = json!({
        "n": n,
        "assignment": to_value(&x),
        "triangles": placed.ids.len(),
        "normalized_residual": placed.normalized_residual(&build_doughnut(n)?),
        "hole": {
            "vertices": hole.len(),
            "labels": hole.labels,
            "points": to_value(&hole.vertices),
            "area": hole.area(),
            "relative_area": hole.area() / frame_area,
        },
        "fill": fill_value,
        "power": powered.as_ref().map(|p| json!({"exponent": power, "points": to_value(p)})),
    });
    let summary = if hole.is_empty() {
        format!("{n}-doughnut: no hole")
    } else {
        format!("{n}-doughnut: hole with {} vertices", hole.len())
    };
    let document = match output.format {
        Format::Json => json_text(&payload),
        Format::Svg => {
            let mut scene = Scene::new().with_placed(&shown, Some(&spec));
            if !hole.is_empty() && !fill {
                scene = scene.with_polygon(hole.vertices.clone(), "hole");
            }
            if let Some(mut points) = powered {
                points.push(points[0]);
                scene = scene.with_curve(points, "power");
            }
            to_svg(&scene, &style(output))?
        }
    };
    let file = format!("doughnut-{n}.{}", output.format.extension());
    deliver(EXIT_OK, summary, document, output.output.as_deref(), out_dir, &file)
}

fn identity(
    n: u32,
    grid: usize,
    perturb: Option<f64>,
    format: Format,
    explicit: Option<&Path>,
    out_dir: Option<&Path>,
) -> Outcome {
    if n == 0 || grid == 0 {
        return Err(Error::InvalidArgument("--n and --grid must be positive".into()).into());
    }
    if format == Format::Svg {
        return Err(Error::InvalidArgument("identity has no SVG output".into()).into());
    }
    let base = 2f64.powi(n as i32 - 1);
    let constant = perturb.map(|p| base * (1.0 + p));
    let residual = cyclotomic_max_residual(n, grid, constant);
    let passes = residual < IDENTITY_TOLERANCE;
    let payload = json!({
        "n": n,
        "grid": grid,
        "constant": constant.unwrap_or(base),
        "max_residual": residual,
        "tolerance": IDENTITY_TOLERANCE,
        "passes": passes,
    });
    let summary = format!("n = {n}: max residual {residual:.3e} ({})", if passes { "pass" } else { "fail" });
    let code = if passes { EXIT_OK } else { EXIT_DOMAIN };
    deliver(code, summary, json_text(&payload), explicit, out_dir, &format!("identity-{n}.json"))
}

fn asymptote(corner_angle: f64, n_list: &[u32], samples: usize, output: &Output, out_dir: Option<&Path>) -> Outcome {
    let curve = limit_curve(corner_angle, samples)?;
    let mut studies = Vec::new();
    for &n in n_list {
        let unit = sector_unit(n);
        let a = corner_angle / f64::from(n);
        let rest = (unit - a) / 2.0;
        let x = Assignment::new(a, rest, rest, n)?;
        studies.push(renormalized_boundary(n, &x, 0)?);
    }
    let monotone = studies.windows(2).all(|w| w[1].max_distance < w[0].max_distance);
    let payload = json!({
        "corner_angle": corner_angle,
        "exponent": limit_exponent(corner_angle),
        "studies": studies.iter().map(|s| json!({
            "n": s.n,
            "max_distance": s.max_distance,
            "points": to_value(&s.points),
        })).collect::<Vec<_>>(),
        "monotone": monotone,
        "curve": to_value(&curve),
    });
    let summary = studies
        .iter()
        .map(|s| format!("n = {}: distance {:.3e}", s.n, s.max_distance))
        .collect::<Vec<_>>()
        .join("\n");
    let document = match output.format {
        Format::Json => json_text(&payload),
        Format::Svg => {
            let points: Vec<Point> = studies.iter().flat_map(|s| s.points.iter().copied()).collect();
            let mut viewport = BBox::of(points.iter().chain([Point::new(0.0, 0.0)].iter()))
                .ok_or(Error::EmptyScene)?;
            viewport.include(Point::new(0.0, 0.0));
            let near: Vec<Point> = curve.iter().copied().filter(|p| p.norm() <= 4.0).collect();
            let mut scene = Scene::new().with_curve(near, "limit").with_viewport(viewport);
            for s in &studies {
                scene = scene.with_points(s.points.clone(), &format!("boundary-{}", s.n));
            }
            to_svg(&scene, &style(output))?
        }
    };
    let file = format!("asymptote.{}", output.format.extension());
    deliver(EXIT_OK, summary, document, output.output.as_deref(), out_dir, &file)
}

fn parse_cursor(text: &str) -> Result<Range<usize>, Error> {
    let bad = || Error::Parse {
        input: text.to_string(),
        reason: "expected start..end".into(),
    };
    let (start, end) = text.split_once("..").ok_or_else(bad)?;
    let start: usize = start.trim().parse().map_err(|_| bad())?;
    let end: usize = end.trim().parse().map_err(|_| bad())?;
    if start > end {
        return Err(bad());
    }
    Ok(start..end)
}

fn search(
    n: u32,
    bounds: SearchBounds,
    cursor: Option<&str>,
    explicit: Option<&Path>,
    out_dir: Option<&Path>,
) -> Outcome {
    let plan = SearchPlan::new(n, bounds)?;
    let range = match cursor {
        Some(text) => parse_cursor(text)?,
        None => 0..plan.work_items(),
    };
    let result = plan.run(range);
    let found = result.solutions.len();
    let code = if found > 0 {
        EXIT_OK
    } else if result.is_complete() {
        EXIT_EXHAUSTED
    } else {
        EXIT_OK
    };
    let summary = format!(
        "n = {n}: {found} solution(s); {} candidates examined, {} symbolic passes, work items {:?} of {}",
        result.candidates_examined, result.symbolic_passes, result.cursor, result.work_items
    );
    deliver(code, summary, json_text(&to_value(&result)), explicit, out_dir, &format!("search-{n}.json"))
}

fn pack(s: f64, t: f64, rows: usize, cols: usize, output: &Output, out_dir: Option<&Path>) -> Outcome {
    let params = PackingParams::new(s, t, rows, cols)?;
    let (up, down) = shapes_from_ratios(s, t)?;
    let packing = develop_packing(&params)?;
    let payload = json!({
        "params": to_value(&params),
        "shapes": {"up": up, "down": down},
        "vertex_fit": vertex_fit_check(up, down),
        "tangency_residual": packing.tangency_residual(),
        "flat_vertex_residual": packing.flat_vertex_residual(),
        "circles": to_value(&packing.circles),
    });
    let summary = format!(
        "packing {rows}x{cols}: tangency residual {:.3e}, flat-vertex residual {:.3e}",
        packing.tangency_residual(),
        packing.flat_vertex_residual()
    );
    let document = match output.format {
        Format::Json => json_text(&payload),
        Format::Svg => {
            let circles = packing.circles.iter().map(|c| (c.center, c.radius)).collect();
            to_svg(
                &Scene::new().with_placed(&packing.placed, None).with_circles(circles),
                &style(output),
            )?
        }
    };
    let file = format!("pack.{}", output.format.extension());
    deliver(EXIT_OK, summary, document, output.output.as_deref(), out_dir, &file)
}

fn flip(from: u32, to: u32, weights: Option<&[f64]>, equilateral: bool, out_dir: Option<&Path>) -> Outcome {
    let dir = out_dir.ok_or_else(|| {
        Error::InvalidArgument(format!("flipbook needs --out-dir or {OUT_DIR_ENV}"))
    })?;
    if from < to {
        return Err(Error::InvalidArgument("flip-book ranges run downwards: --from >= --to".into()).into());
    }
    let policy = match (weights, equilateral) {
        (_, true) => AssignmentPolicy::equilateral(),
        (Some(w), false) => AssignmentPolicy::Proportional([w[0], w[1], w[2]]),
        (None, false) => AssignmentPolicy::default(),
    };
    let ns: Vec<u32> = (to..=from).rev().collect();
    let book = flipbook(&ns, &policy, &RenderStyle::default())?;
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let width = ns.len().to_string().len().max(2);
    let mut frames = Vec::new();
    for (i, frame) in book.frames.iter().enumerate() {
        let path = dir.join(format!("frame-{i:0width$}-n{}.svg", frame.n));
        fs::write(&path, &frame.svg).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        frames.push(json!({"n": frame.n, "path": path.display().to_string()}));
    }
    let failures: Vec<Value> = book
        .failures
        .iter()
        .map(|(n, e)| json!({"n": n, "error": e.to_string()}))
        .collect();
    let summary = format!("{} frame(s) written, {} failed", book.frames.len(), book.failures.len());
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_DOMAIN };
    let manifest = json!({"frames": frames, "failures": failures});
    Ok(CommandOutcome {
        code,
        summary,
        payload: Some(json_text(&manifest)),
        payload_path: None,
    })
}
