//! Scene files: a chart, a candidate pair `(J, ψ)` and a task list, with a
//! deterministic report.
//!
//! Forms are written as objects from basis monomials to coefficient
//! expressions, e.g. `{"dx1^dx2": "1/(1+x1^2)", "1": "2"}`. Structures are
//! tagged by `kind`; tasks by `op`. See `docs/scene-format.md`.

use crate::curvature::{gr_complex, gric_gr, moment_pairing, type00_gric};
use crate::error::{GkError, GkResult};
use crate::examples;
use crate::field::Field;
use crate::forms::{Chart, Form};
use crate::gk_pairs::{compatibility_check, type00_check, GKPair};
use crate::linalg::Mat;
use crate::sample::good_points;
use crate::spinor_gcs::{GCKind, GCStruct};
use crate::symexpr::{big_rat, cq_string, parse_expr, Cq, ScalarExpr};
use num::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCENE_SCHEMA: &str = "gkcurv-scene/1";
pub const REPORT_SCHEMA: &str = "gkcurv-report/1";

pub type FormSpec = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub coords: Vec<String>,
    pub periodic: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StructureSpec {
    Symplectic {
        #[serde(default)]
        b: FormSpec,
        omega: FormSpec,
    },
    ComplexVolume {
        dz: Vec<FormSpec>,
    },
    BetaDeform {
        beta: Vec<Vec<String>>,
        base: Box<StructureSpec>,
    },
    BTransform {
        b: FormSpec,
        base: Box<StructureSpec>,
    },
    Generic {
        phi: FormSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSpec {
    #[serde(default)]
    pub b: FormSpec,
    pub omega: FormSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gric_zero: Option<bool>,
    /// Exact `λ` in `GRic = λω`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_positive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gr: Option<String>,
}

fn default_points() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskSpec {
    Curvature {
        #[serde(default)]
        expect: CurvatureExpect,
    },
    Compatibility {
        #[serde(default = "default_points")]
        points: usize,
    },
    Integrability {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<bool>,
    },
    TypeNumber {
        point: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<u32>,
    },
    GrComplex {
        #[serde(default)]
        expect_zero: bool,
    },
    /// Type-(0,0) conditions and the closed curvature formula for
    /// `(e^{b+iω₁}, e^{iω₂})`, compared with the scene pair.
    Type00 {
        b: FormSpec,
        w1: FormSpec,
        w2: FormSpec,
        #[serde(default = "default_points")]
        points: usize,
    },
    MomentPairing {
        f: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub schema: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub chart: ChartSpec,
    pub j1: StructureSpec,
    pub psi: PsiSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

#[derive(Clone, Debug)]
enum Task {
    Curvature { gric_zero: Option<bool>, lambda: Option<Cq>, lambda_positive: Option<bool>, gr: Option<ScalarExpr> },
    Compatibility(usize),
    Integrability(Option<bool>),
    TypeNumber { point: Vec<BigRational>, expect: Option<u32> },
    GrComplex { expect_zero: bool },
    Type00 { b: Form, w1: Form, w2: Form, points: usize },
    MomentPairing(ScalarExpr),
}

/// A validated scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub file: SceneFile,
    pub pair: GKPair,
    tasks: Vec<Task>,
}

fn expr(chart: &Chart, src: &str, field: &str) -> GkResult<ScalarExpr> {
    parse_expr(src, chart.names()).map_err(|e| GkError::scene(field, e.to_string()))
}

fn rational(chart: &Chart, src: &str, field: &str) -> GkResult<BigRational> {
    let e = expr(chart, src, field)?;
    match e.const_value() {
        Some(c) if c.im == num::zero() => Ok(c.re),
        _ => Err(GkError::scene(field, format!("`{src}` is not a real rational constant"))),
    }
}

fn constant(chart: &Chart, src: &str, field: &str) -> GkResult<Cq> {
    expr(chart, src, field)?.const_value().ok_or_else(|| GkError::scene(field, format!("`{src}` is not constant")))
}

fn basis_key(chart: &Chart, key: &str, field: &str) -> GkResult<Form> {
    let key = key.trim();
    if key == "1" || key.is_empty() {
        return Ok(Form::one(chart));
    }
    let mut idx = Vec::new();
    for part in key.split('^') {
        let name = part.trim().strip_prefix('d').ok_or_else(|| GkError::scene(field, format!("basis factor `{part}` must be d<coord>")))?;
        let j = chart.names().iter().position(|n| n == name).ok_or_else(|| GkError::scene(field, format!("unknown coordinate `{name}`")))?;
        if idx.contains(&j) {
            return Ok(Form::zero(chart));
        }
        idx.push(j);
    }
    Ok(Form::dxs(chart, &idx))
}

pub fn parse_form(chart: &Chart, spec: &FormSpec, field: &str) -> GkResult<Form> {
    let mut f = Form::zero(chart);
    for (k, v) in spec {
        let fk = format!("{field}[\"{k}\"]");
        f = f.add(&basis_key(chart, k, &fk)?.scale(&expr(chart, v, &fk)?));
    }
    Ok(f)
}

fn structure(chart: &Chart, spec: &StructureSpec, field: &str) -> GkResult<GCStruct> {
    let wrap = |r: GkResult<GCStruct>| r.map_err(|e| GkError::scene(field, e.to_string()));
    match spec {
        StructureSpec::Symplectic { b, omega } => {
            wrap(GCStruct::symplectic(parse_form(chart, b, &format!("{field}.b"))?, parse_form(chart, omega, &format!("{field}.omega"))?))
        }
        StructureSpec::ComplexVolume { dz } => {
            if dz.len() != chart.n() {
                return Err(GkError::scene(format!("{field}.dz"), format!("expected {} one-forms, found {}", chart.n(), dz.len())));
            }
            let forms = dz.iter().enumerate().map(|(k, f)| parse_form(chart, f, &format!("{field}.dz[{k}]"))).collect::<GkResult<Vec<_>>>()?;
            wrap(GCStruct::complex_volume(forms))
        }
        StructureSpec::BetaDeform { beta, base } => {
            let d = chart.dim();
            if beta.len() != d || beta.iter().any(|r| r.len() != d) {
                return Err(GkError::scene(format!("{field}.beta"), format!("expected a {d}×{d} matrix")));
            }
            let mut m = Mat::zeros(d, d);
            for (r, row) in beta.iter().enumerate() {
                for (c, s) in row.iter().enumerate() {
                    m.set(r, c, expr(chart, s, &format!("{field}.beta[{r}][{c}]"))?);
                }
            }
            wrap(GCStruct::beta_deform(m, structure(chart, base, &format!("{field}.base"))?))
        }
        StructureSpec::BTransform { b, base } => {
            wrap(GCStruct::b_transform(parse_form(chart, b, &format!("{field}.b"))?, structure(chart, base, &format!("{field}.base"))?))
        }
        StructureSpec::Generic { phi } => Ok(GCStruct::generic(parse_form(chart, phi, &format!("{field}.phi"))?)),
    }
}

fn task(chart: &Chart, spec: &TaskSpec, k: usize) -> GkResult<Task> {
    let field = format!("tasks[{k}]");
    Ok(match spec {
        TaskSpec::Curvature { expect } => Task::Curvature {
            gric_zero: expect.gric_zero,
            lambda: expect.lambda.as_deref().map(|s| constant(chart, s, &format!("{field}.expect.lambda"))).transpose()?,
            lambda_positive: expect.lambda_positive,
            gr: expect.gr.as_deref().map(|s| expr(chart, s, &format!("{field}.expect.gr"))).transpose()?,
        },
        TaskSpec::Compatibility { points } => Task::Compatibility(*points),
        TaskSpec::Integrability { expect } => Task::Integrability(*expect),
        TaskSpec::TypeNumber { point, expect } => {
            if point.len() != chart.dim() {
                return Err(GkError::scene(format!("{field}.point"), format!("expected {} coordinates, found {}", chart.dim(), point.len())));
            }
            let p = point.iter().enumerate().map(|(j, s)| rational(chart, s, &format!("{field}.point[{j}]"))).collect::<GkResult<_>>()?;
            Task::TypeNumber { point: p, expect: *expect }
        }
        TaskSpec::GrComplex { expect_zero } => Task::GrComplex { expect_zero: *expect_zero },
        TaskSpec::Type00 { b, w1, w2, points } => Task::Type00 {
            b: parse_form(chart, b, &format!("{field}.b"))?,
            w1: parse_form(chart, w1, &format!("{field}.w1"))?,
            w2: parse_form(chart, w2, &format!("{field}.w2"))?,
            points: *points,
        },
        TaskSpec::MomentPairing { f } => Task::MomentPairing(expr(chart, f, &format!("{field}.f"))?),
    })
}

impl Scene {
    pub fn from_file(file: SceneFile) -> GkResult<Self> {
        if file.schema != SCENE_SCHEMA {
            return Err(GkError::scene("schema", format!("expected `{SCENE_SCHEMA}`, found `{}`", file.schema)));
        }
        let cs = &file.chart;
        if cs.coords.is_empty() || cs.coords.len() % 2 != 0 || cs.coords.len() > 8 {
            return Err(GkError::scene("chart.coords", "need an even number of coordinates, at most 8"));
        }
        if cs.periodic.len() != cs.coords.len() {
            return Err(GkError::scene("chart.periodic", format!("expected {} flags, found {}", cs.coords.len(), cs.periodic.len())));
        }
        let chart = Chart::new(cs.coords.clone(), cs.periodic.clone()).map_err(|e| GkError::scene("chart.coords", e.to_string()))?;
        let j1 = structure(&chart, &file.j1, "j1")?;
        let b = parse_form(&chart, &file.psi.b, "psi.b")?;
        let omega = parse_form(&chart, &file.psi.omega, "psi.omega")?;
        let pair = GKPair::new(j1, b, omega).map_err(|e| GkError::scene("psi", e.to_string()))?;
        let tasks = file.tasks.iter().enumerate().map(|(k, t)| task(&chart, t, k)).collect::<GkResult<_>>()?;
        Ok(Scene { file, pair, tasks })
    }

    pub fn from_json(src: &str) -> GkResult<Self> {
        let file: SceneFile = serde_json::from_str(src).map_err(|e| GkError::scene(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::from_file(file)
    }
}

pub fn load_scene(path: &std::path::Path) -> GkResult<Scene> {
    let src = std::fs::read_to_string(path).map_err(|e| GkError::scene(path.display().to_string(), e.to_string()))?;
    Scene::from_json(&src)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaskReport {
    pub name: String,
    pub status: Status,
    pub values: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: String,
    pub scene: String,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Significant digits for floats.
    pub precision: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: None, precision: 12 }
    }
}

struct Out {
    values: BTreeMap<String, String>,
    notes: Vec<String>,
    ok: bool,
    precision: usize,
}

impl Out {
    fn set(&mut self, k: &str, v: impl Into<String>) {
        self.values.insert(k.into(), v.into());
    }
    fn float(&mut self, k: &str, x: f64) {
        let p = self.precision.max(1) - 1;
        self.values.insert(k.into(), format!("f64:{x:.p$e}"));
    }
    fn check(&mut self, cond: bool, note: impl FnOnce() -> String) {
        if !cond {
            self.ok = false;
            self.notes.push(note());
        }
    }
}

fn op_name(t: &Task) -> &'static str {
    match t {
        Task::Curvature { .. } => "curvature",
        Task::Compatibility(_) => "compatibility",
        Task::Integrability(_) => "integrability",
        Task::TypeNumber { .. } => "type_number",
        Task::GrComplex { .. } => "gr_complex",
        Task::Type00 { .. } => "type00",
        Task::MomentPairing(_) => "moment_pairing",
    }
}

fn sample_points(pair: &GKPair, rng: &mut ChaCha8Rng, count: usize) -> Vec<crate::symexpr::Point> {
    let phi = pair.phi();
    let psi = pair.psi_form();
    let probe = phi.mukai_scalar(&phi.conj()).mul(&psi.mukai_scalar(&psi.conj()));
    good_points(pair.chart(), rng, count, &probe)
}

fn run_task(pair: &GKPair, t: &Task, seed: u64, o: &mut Out) -> GkResult<()> {
    let names = pair.chart().names().to_vec();
    let txt = |e: &ScalarExpr| e.to_string_with(&names);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match t {
        Task::Curvature { gric_zero, lambda, lambda_positive, gr } => {
            let r = gric_gr(pair)?;
            o.set("rho", txt(&r.rho));
            o.set("gric", r.gric.to_text());
            o.set("gr", txt(&r.gr));
            o.set("gric_closed", r.gric_closed.to_string());
            o.set("cross_check", r.cross_check.to_string());
            if let Some(l) = &r.lambda {
                o.set("lambda", cq_string(l));
            }
            o.check(r.gric_closed, || "GRic is not closed".into());
            o.check(r.cross_check, || "P, Q disagree with d(i_v b + θ), d(i_v ω)".into());
            if let Some(z) = gric_zero {
                o.check(r.gric.is_zero() == *z, || format!("expected GRic zero = {z}"));
            }
            if let Some(l) = lambda {
                o.check(r.lambda.as_ref() == Some(l), || format!("expected GRic = {} ω", cq_string(l)));
            }
            if let Some(p) = lambda_positive {
                let pos = r.lambda.as_ref().is_some_and(|l| l.im == num::zero() && l.re > num::zero());
                o.check(pos == *p, || format!("expected positive constant λ = {p}"));
            }
            if let Some(g) = gr {
                o.check(&r.gr == g, || format!("expected GR = {}", txt(g)));
            }
        }
        Task::Compatibility(n) => {
            let pts = sample_points(pair, &mut rng, *n);
            let r = compatibility_check(pair, &pts)?;
            o.set("points", r.points_checked.to_string());
            o.set("commute", r.commute.to_string());
            o.set("symmetric", r.symmetric.to_string());
            o.set("positive", r.positive.to_string());
            o.float("min_eigenvalue", r.min_eigenvalue);
            o.check(r.points_checked == *n, || "not enough sample points with exact values".into());
            o.check(r.ok(), || format!("compatibility failed: {}", r.notes.join("; ")));
        }
        Task::Integrability(expect) => {
            let en = pair.j1.eta_n()?;
            o.set("eta", format!("{:?}", en.eta.components().iter().map(txt).collect::<Vec<_>>()));
            o.set("n_zero", en.n.is_zero().to_string());
            if let Some(e) = expect {
                o.check(en.n.is_zero() == *e, || format!("expected integrable = {e}"));
            }
        }
        Task::TypeNumber { point, expect } => {
            let k = pair.j1.type_number(point)?;
            o.set("type", k.to_string());
            if let Some(e) = expect {
                o.check(k == *e, || format!("expected type {e}"));
            }
        }
        Task::GrComplex { expect_zero } => {
            let g = gr_complex(pair)?;
            o.set("gr_complex", txt(&g.value));
            o.set("literal", txt(&g.literal));
            if *expect_zero {
                o.check(g.value.is_zero(), || "GR^C is not zero".into());
            }
        }
        Task::Type00 { b, w1, w2, points } => {
            let pts = sample_points(pair, &mut rng, *points);
            let c = type00_check(b, w1, w2, &pts, &mut rng)?;
            o.set("conditions", c.ok().to_string());
            o.check(c.ok(), || format!("type (0,0) conditions fail: {}", c.notes.join("; ")));
            let closed = type00_gric(b, w1, w2)?;
            let spinor = gric_gr(pair)?;
            o.set("gric_closed_formula", closed.gric.to_text());
            o.set("gr_closed_formula", txt(&closed.gr));
            o.check(closed.gric == spinor.gric, || "closed formula GRic differs from the spinor route".into());
            o.check(closed.gr == spinor.gr, || "closed formula GR differs from the spinor route".into());
        }
        Task::MomentPairing(f) => {
            let r = moment_pairing(pair, f)?;
            o.set("coeff", cq_string(&r.coeff));
            o.set("pi_power", r.pi_power.to_string());
            o.float("value", r.to_f64().re);
        }
    }
    Ok(())
}

/// Run every task; tasks run concurrently and are reported in scene order.
pub fn run(scene: &Scene, opts: RunOptions) -> Report {
    let seed = opts.seed.unwrap_or(scene.file.seed);
    let reports: Vec<TaskReport> = std::thread::scope(|sc| {
        let hs: Vec<_> = scene
            .tasks
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let pair = &scene.pair;
                sc.spawn(move || {
                    let mut o = Out { values: BTreeMap::new(), notes: Vec::new(), ok: true, precision: opts.precision };
                    let status = match run_task(pair, t, seed.wrapping_add(k as u64), &mut o) {
                        Ok(()) if o.ok => Status::Pass,
                        Ok(()) => Status::Fail,
                        Err(e) => {
                            o.notes.push(e.to_string());
                            Status::Error
                        }
                    };
                    TaskReport { name: op_name(t).into(), status, values: o.values, notes: o.notes }
                })
            })
            .collect();
        hs.into_iter().map(|h| h.join().expect("task thread")).collect()
    });
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    Report {
        schema: REPORT_SCHEMA.into(),
        scene: scene.file.name.clone(),
        seed,
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        errors: count(Status::Error),
        tasks: reports,
    }
}

pub fn emit_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("serializable");
    s.push('\n');
    s
}

pub fn emit_text(r: &Report) -> String {
    let mut s = format!("scene {} (seed {})\n", r.scene, r.seed);
    for t in &r.tasks {
        let tag = match t.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        s.push_str(&format!("[{tag}] {}\n", t.name));
        for (k, v) in &t.values {
            s.push_str(&format!("    {k} = {v}\n"));
        }
        for n in &t.notes {
            s.push_str(&format!("    note: {n}\n"));
        }
    }
    s.push_str(&format!("{} passed, {} failed, {} errors\n", r.passed, r.failed, r.errors));
    s
}

pub fn form_spec(f: &Form) -> FormSpec {
    let names = f.chart().names();
    f.terms()
        .map(|(m, c)| {
            let key = if m == 0 {
                "1".to_string()
            } else {
                crate::forms::mask_indices(m).iter().map(|&j| format!("d{}", names[j])).collect::<Vec<_>>().join("^")
            };
            (key, c.to_string_with(names))
        })
        .collect()
}

pub fn structure_spec(s: &GCStruct) -> StructureSpec {
    let names = s.chart().names();
    match &s.kind {
        GCKind::Symplectic { b, omega } => StructureSpec::Symplectic { b: form_spec(b), omega: form_spec(omega) },
        GCKind::ComplexVolume { dz } => StructureSpec::ComplexVolume { dz: dz.iter().map(form_spec).collect() },
        GCKind::BetaDeform { beta, base } => StructureSpec::BetaDeform {
            beta: (0..beta.rows).map(|r| (0..beta.cols).map(|c| beta.get(r, c).to_string_with(names)).collect()).collect(),
            base: Box::new(structure_spec(base)),
        },
        GCKind::BTransform { b, base } => StructureSpec::BTransform { b: form_spec(b), base: Box::new(structure_spec(base)) },
        GCKind::Generic { phi } => StructureSpec::Generic { phi: form_spec(phi) },
    }
}

pub fn scene_from_pair(name: &str, description: &str, pair: &GKPair, seed: u64, tasks: Vec<TaskSpec>) -> SceneFile {
    let chart = pair.chart();
    SceneFile {
        schema: SCENE_SCHEMA.into(),
        name: name.into(),
        description: description.into(),
        chart: ChartSpec { coords: chart.names().to_vec(), periodic: chart.periodic().to_vec() },
        j1: structure_spec(&pair.j1),
        psi: PsiSpec { b: form_spec(pair.b()), omega: form_spec(pair.omega()) },
        seed,
        tasks,
    }
}

pub const EXAMPLE_NAMES: [&str; 11] = [
    "calabi_yau_pullback",
    "cp2_three_lines",
    "flat_c2_rotation",
    "flat_kahler_1",
    "flat_kahler_2",
    "flat_t4_translation",
    "fubini_study_1",
    "fubini_study_2",
    "hyperkahler_t4",
    "perturbed_type00",
    "sheared_almost_kahler",
];

const SEED: u64 = 2024;

fn curvature(gric_zero: Option<bool>, lambda: Option<&str>, lambda_positive: Option<bool>, gr: Option<&str>) -> TaskSpec {
    TaskSpec::Curvature {
        expect: CurvatureExpect { gric_zero, lambda: lambda.map(Into::into), lambda_positive, gr: gr.map(Into::into) },
    }
}

fn point(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn type00_task(d: &examples::Type00Data) -> TaskSpec {
    TaskSpec::Type00 { b: form_spec(&d.b), w1: form_spec(&d.w1), w2: form_spec(&d.w2), points: 3 }
}

/// A shipped example as a scene with its expected properties as tasks.
pub fn example_scene(name: &str) -> GkResult<SceneFile> {
    let (desc, pair, tasks) = example_parts(name)?;
    Ok(scene_from_pair(name, desc, &pair, SEED, tasks))
}

fn example_parts(name: &str) -> GkResult<(&'static str, GKPair, Vec<TaskSpec>)> {
    let l = examples::default_lambda();
    let compat = TaskSpec::Compatibility { points: 4 };
    let integ = |e: bool| TaskSpec::Integrability { expect: Some(e) };
    let (desc, pair, tasks) = match name {
        "flat_kahler_1" | "flat_kahler_2" => {
            let n = if name.ends_with('1') { 1 } else { 2 };
            let pt: Vec<&str> = ["1/2", "-1/3", "2/5", "3/7"][..2 * n].to_vec();
            (
                "Flat Kähler space: vanishing generalized Ricci form and scalar curvature",
                examples::flat_kahler(n)?,
                vec![curvature(Some(true), None, None, Some("0")), integ(true), TaskSpec::TypeNumber { point: point(&pt), expect: Some(n as u32) }, compat],
            )
        }
        "fubini_study_1" | "fubini_study_2" => {
            let n = if name.ends_with('1') { 1 } else { 2 };
            (
                "Affine chart of complex projective space with the Fubini–Study form",
                examples::fubini_study_chart(n)?,
                vec![curvature(None, None, Some(true), None), integ(true), compat],
            )
        }
        "hyperkahler_t4" => {
            let d = examples::hyperkahler_t4_data();
            (
                "Type (0,0) structure on the flat hyperkähler four-torus",
                d.pair()?,
                vec![curvature(Some(true), None, None, Some("0")), type00_task(&d), integ(true), compat],
            )
        }
        "perturbed_type00" => {
            let d = examples::perturbed_type00(big_rat(1, 5));
            (
                "Type (0,0) structure with non-constant volume ratio: spinor route against the closed formula",
                d.pair()?,
                vec![curvature(Some(false), None, None, None), type00_task(&d), compat],
            )
        }
        "calabi_yau_pullback" => (
            "Flat Kähler pair pulled back by a polynomial diffeomorphism; ⟨φ,φ̄⟩ = ⟨ψ,ψ̄⟩",
            examples::calabi_yau_pullback()?,
            vec![curvature(Some(true), None, None, Some("0")), TaskSpec::GrComplex { expect_zero: true }, compat],
        ),
        "sheared_almost_kahler" => (
            "Almost generalized Kähler pair with non-vanishing N",
            examples::sheared_almost_kahler(big_rat(1, 3), big_rat(1, 4))?,
            vec![integ(false), compat],
        ),
        "flat_c2_rotation" => (
            "Poisson deformation of flat C² by the rotation torus",
            examples::flat_c2_rotation_deform(l)?.deformed,
            vec![curvature(Some(true), None, None, Some("0")), integ(true), compat],
        ),
        "flat_t4_translation" => (
            "Poisson deformation of the flat Kähler four-torus by translations",
            examples::flat_t4_translation_deform(l)?.deformed,
            vec![curvature(Some(true), None, None, Some("0")), integ(true), TaskSpec::MomentPairing { f: "cos(x1)".into() }, compat],
        ),
        "cp2_three_lines" => {
            let pair = examples::cp2_three_lines(l)?.deformed;
            let fs = gric_gr(&examples::fubini_study_chart(2)?)?;
            let lam = fs.lambda.map(|c| cq_string(&c));
            (
                "Fubini–Study CP² deformed by a holomorphic Poisson structure vanishing on three lines",
                pair,
                vec![
                    curvature(None, lam.as_deref(), Some(true), None),
                    TaskSpec::TypeNumber { point: point(&["1/2", "-1/3", "2/5", "1/7"]), expect: Some(0) },
                    TaskSpec::TypeNumber { point: point(&["0", "0", "2/5", "1/7"]), expect: Some(2) },
                    integ(true),
                    compat,
                ],
            )
        }
        _ => return Err(GkError::scene("example", format!("unknown example `{name}`"))),
    };
    Ok((desc, pair, tasks))
}

pub fn scene_json(f: &SceneFile) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_round_trip_and_pass() {
        for name in EXAMPLE_NAMES {
            let f = example_scene(name).unwrap();
            let json = scene_json(&f);
            let s = Scene::from_json(&json).unwrap();
            assert_eq!(s.file, f);
            let (_, p, _) = example_parts(name).unwrap();
            assert_eq!(s.pair.phi(), p.phi(), "{name}");
            assert_eq!(s.pair.psi_form(), p.psi_form(), "{name}");
            let r = run(&s, RunOptions::default());
            assert!(r.all_pass(), "{name}: {}", emit_text(&r));
            let again = run(&s, RunOptions::default());
            assert_eq!(emit_json(&r), emit_json(&again));
        }
    }

    #[test]
    fn scene_errors_name_the_field() {
        let mut f = example_scene("flat_kahler_1").unwrap();
        f.psi.omega.insert("dx1^dy1".into(), "2*(x1".into());
        match Scene::from_file(f) {
            Err(GkError::Scene { field, .. }) => assert!(field.starts_with("psi.omega"), "{field}"),
            other => panic!("{other:?}"),
        }
        let mut f = example_scene("flat_kahler_1").unwrap();
        f.chart.periodic.push(false);
        assert!(matches!(Scene::from_file(f), Err(GkError::Scene { field, .. }) if field == "chart.periodic"));
        let mut f = example_scene("flat_kahler_2").unwrap();
        f.tasks.push(TaskSpec::TypeNumber { point: point(&["1"]), expect: None });
        assert!(matches!(Scene::from_file(f), Err(GkError::Scene { field, .. }) if field == "tasks[4].point"));
        assert!(matches!(Scene::from_json("{\"schema\": 3}"), Err(GkError::Scene { field, .. }) if field.starts_with("line 1")));
    }
}
