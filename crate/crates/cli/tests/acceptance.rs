//! Acceptance run: one line per criterion, non-zero exit on any failure.

use gkcore::curvature::{gr_complex, gric_gr, kahler_ricci_oracle, rho, type00_gric};
use gkcore::gk_pairs::type00_check;
use gkcore::sample::random_point;
use gkcore::symexpr::{cq_string, ScalarExpr};
use gkcore::{calibrate, checks, examples, lemmas, moment, GkResult};
use rand::SeedableRng;
use std::process::Command;
use std::time::{Duration, Instant};

const SEED: u64 = 2024;
const CALIBRATION_BUDGET: Duration = Duration::from_secs(5);
const LEMMA_BUDGET: Duration = Duration::from_secs(60);
const MOMENT_BUDGET: Duration = Duration::from_secs(600);
const MOMENT_TOLERANCE: f64 = 1e-6;
const MOMENT_DIRECTIONS: usize = 5;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> GkResult<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

fn c1() -> GkResult<Outcome> {
    let t = Instant::now();
    let c = calibrate::run_calibration()?;
    let lib = calibrate::to_json(&c) == calibrate::FIXTURE;
    let elapsed = t.elapsed();
    let out = Command::new(env!("CARGO_BIN_EXE_gkcurv")).arg("calibrate").output().expect("gkcurv runs");
    let cli = out.status.success() && out.stdout == calibrate::FIXTURE.as_bytes();
    let d4 = c.dims.iter().find(|d| d.dim == 4).expect("dim 4");
    outcome(
        lib && cli && within(elapsed, CALIBRATION_BUDGET),
        format!(
            "fixture bit-exact (library {lib}, cli {cli}); adjoint {:?}, polarization {:?}; {:.2?}",
            d4.adjoint_sign, d4.polarization_sign, elapsed
        ),
    )
}

fn c2() -> GkResult<Outcome> {
    let t = Instant::now();
    let rs = lemmas::run_suite(SEED)?;
    let elapsed = t.elapsed();
    let ok = rs.len() == 6
        && rs.iter().all(|r| r.ok() && r.instances >= lemmas::MIN_INSTANCES && r.dims.contains(&2) && r.dims.contains(&4));
    let parts: Vec<String> = rs.iter().map(|r| format!("{} {}/{}", r.name, r.instances - r.failures, r.instances)).collect();
    outcome(ok && within(elapsed, LEMMA_BUDGET), format!("{}; {:.2?}", parts.join(", "), elapsed))
}

fn c3() -> GkResult<Outcome> {
    let mut ok = true;
    for n in [1, 2] {
        let p = examples::flat_kahler(n)?;
        let en = p.j1.eta_n()?;
        let r = gric_gr(&p)?;
        ok &= rho(&p)? == ScalarExpr::one() && en.eta.is_zero() && en.n.is_zero() && r.gric.is_zero() && r.gr.is_zero();
    }
    outcome(ok, "n = 1, 2: ρ = 1, η = 0, N = 0, GRic = 0, GR = 0")
}

fn c4() -> GkResult<Outcome> {
    let d = examples::hyperkahler_t4_data();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
    let pts: Vec<_> = (0..4).map(|_| random_point(d.b.chart(), &mut rng)).collect();
    let rep = type00_check(&d.b, &d.w1, &d.w2, &pts, &mut rng)?;
    let four = [rep.b_wedge_w1, rep.b_wedge_w2, rep.w1_wedge_w2, rep.bb_equals_sum_nonzero].iter().all(|c| *c == Some(true));
    let spinor = gric_gr(&d.pair()?)?;
    let closed = type00_gric(&d.b, &d.w1, &d.w2)?;
    let zero = spinor.gric.is_zero() && spinor.gr.is_zero() && closed.gric.is_zero() && closed.gr.is_zero();
    outcome(four && rep.ok() && zero, format!("4-dim conditions {four}, tame {}, GRic = GR = 0 by both routes {zero}", rep.tame))
}

fn c5() -> GkResult<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [1, 2] {
        let p = examples::fubini_study_chart(n)?;
        let r = gric_gr(&p)?;
        let oracle = kahler_ricci_oracle(&p)? == r.gric;
        let pos = r.lambda.as_ref().is_some_and(|l| l.im == num::zero() && l.re > num::zero());
        ok &= oracle && pos && r.gric_closed;
        let lam = r.lambda.as_ref().map(cq_string).unwrap_or_else(|| "none".into());
        parts.push(format!("n={n}: λ = {lam} (oracle {oracle})"));
    }
    outcome(ok, format!("{}; reference constant 3 belongs to another normalisation of ω, here λ = 2(n+1)", parts.join(", ")))
}

fn c6() -> GkResult<Outcome> {
    let t = examples::flat_c2_rotation_deform(examples::default_lambda())?;
    let psi = &t.psi_transported == t.deformed.psi_form();
    let en = t.deformed.j1.eta_n()?;
    let eta = en.eta == t.eta_expected;
    outcome(psi && eta && en.n.is_zero(), format!("e^β·e^(iω) = e^(b+iω) {psi}, η = Σλ_ij(−n_j JV_i + n_i JV_j) {eta}, N = 0 {}", en.n.is_zero()))
}

fn c7() -> GkResult<Outcome> {
    let l = examples::default_lambda();
    let cp2 = examples::cp2_three_lines(l.clone())?;
    let t4 = examples::flat_t4_translation_deform(l)?;
    let a = gric_gr(&cp2.deformed)?.gric == gric_gr(&cp2.base)?.gric;
    let b = gric_gr(&t4.deformed)?.gric == gric_gr(&t4.base)?.gric;
    outcome(a && b, format!("cp2_three_lines {a}, flat_t4_translation {b}"))
}

fn c8() -> GkResult<Outcome> {
    let b = checks::bfield_invariance(SEED, 20)?;
    let a = checks::affine_equivariance(SEED + 1, 20)?;
    let c = checks::gric_closed_everywhere()?;
    outcome(
        b.ok() && a.ok() && c.ok() && b.instances == 20 && a.instances == 20,
        format!(
            "b-fields {}/{}, affine maps {}/{}, closed GRic {}/{}",
            b.instances - b.failures,
            b.instances,
            a.instances - a.failures,
            a.instances,
            c.instances - c.failures,
            c.instances
        ),
    )
}

fn c9() -> GkResult<Outcome> {
    let t = Instant::now();
    let rs = moment::flat_torus_suite(SEED, MOMENT_DIRECTIONS)?;
    let elapsed = t.elapsed();
    let worst = rs.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    let ratios: Vec<String> = rs.iter().map(|r| format!("{:.9}", r.ratio)).collect();
    outcome(
        rs.len() == MOMENT_DIRECTIONS && worst <= MOMENT_TOLERANCE && within(elapsed, MOMENT_BUDGET),
        format!(
            "max rel. error {worst:.2e} (tol {MOMENT_TOLERANCE:e}) after normalisation {}; lhs/rhs = [{}]; {:.2?}",
            moment::MOMENT_NORMALIZATION,
            ratios.join(", "),
            elapsed
        ),
    )
}

fn c10() -> GkResult<Outcome> {
    let t = examples::cp2_three_lines(examples::default_lambda())?;
    let q = |p: i64, r: i64| gkcore::symexpr::big_rat(p, r);
    let generic = t.deformed.j1.type_number(&[q(1, 2), q(-1, 3), q(2, 5), q(1, 7)])?;
    let line = t.deformed.j1.type_number(&[q(0, 1), q(0, 1), q(2, 5), q(1, 7)])?;
    outcome(generic == 0 && line == 2, format!("generic point type {generic}, point on z₁ = 0 type {line}"))
}

fn c11() -> GkResult<Outcome> {
    let p = examples::calabi_yau_pullback()?;
    let r = rho(&p)?;
    let g = gr_complex(&p)?;
    outcome(r == ScalarExpr::one() && g.value.is_zero() && g.literal.is_zero(), format!("ρ = {r}, GR^C = {}", g.value))
}

fn main() {
    let criteria: [(&str, fn() -> GkResult<Outcome>); 11] = [
        ("calibration fixture", c1),
        ("lemma suite", c2),
        ("flat Kähler", c3),
        ("hyperkähler type (0,0)", c4),
        ("Fubini–Study", c5),
        ("Poisson deformation closed forms", c6),
        ("deformation invariance of GRic", c7),
        ("invariance properties", c8),
        ("moment-map derivative", c9),
        ("type-number jumping", c10),
        ("Calabi–Yau GR^C", c11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match f() {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {detail} [{:.2?}]", k + 1, if ok { "PASS" } else { "FAIL" }, t.elapsed());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
