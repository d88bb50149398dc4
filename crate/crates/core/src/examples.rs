//! Constructors for the worked examples.
//!
//! Orientation: every Kähler-type fixture uses `ω = Σ dy_k∧dx_k` (and the
//! matching sign for Fubini–Study), which makes `−J₁J₂` positive for the
//! complex structure `dz = dx + i dy`.

use crate::error::{GkError, GkResult};
use crate::field::Field;
use crate::forms::{d_scalar, Chart, Form};
use crate::genalg::{ad_beta_form, apply, BiVec, GenVec};
use crate::gk_pairs::GKPair;
use crate::linalg::Mat;
use crate::spinor_gcs::GCStruct;
use crate::symexpr::{big_rat, ScalarExpr};
use num::BigRational;

fn x(j: usize) -> ScalarExpr {
    ScalarExpr::var(j)
}

fn c(p: i64, q: i64) -> ScalarExpr {
    ScalarExpr::rat(p, q)
}

/// `dz_k = dx_{2k} + i dx_{2k+1}`.
pub fn dz(chart: &Chart) -> Vec<Form> {
    (0..chart.n()).map(|k| Form::dx(chart, 2 * k).add(&Form::dx(chart, 2 * k + 1).scale(&ScalarExpr::i()))).collect()
}

/// `Σ dy_k∧dx_k`.
pub fn flat_omega(chart: &Chart) -> Form {
    (0..chart.n()).fold(Form::zero(chart), |acc, k| acc.add(&Form::dxs(chart, &[2 * k + 1, 2 * k])))
}

pub fn kahler_pair(dz: Vec<Form>, omega: Form) -> GkResult<GKPair> {
    let chart = omega.chart().clone();
    GKPair::new(GCStruct::complex_volume(dz)?, Form::zero(&chart), omega)
}

fn coord_names(n: usize) -> Vec<String> {
    (1..=n).flat_map(|k| [format!("x{k}"), format!("y{k}")]).collect()
}

pub fn complex_chart(n: usize, periodic: bool) -> Chart {
    Chart::new(coord_names(n), vec![periodic; 2 * n]).expect("valid chart")
}

/// Flat `ℂⁿ` with `φ = dz₁∧…∧dz_n`, `ψ = e^{iω}`.
pub fn flat_kahler(n: usize) -> GkResult<GKPair> {
    if n == 0 || n > 3 {
        return Err(GkError::DimensionMismatch(format!("flat_kahler needs 1 ≤ n ≤ 3, got {n}")));
    }
    let c = complex_chart(n, false);
    kahler_pair(dz(&c), flat_omega(&c))
}

/// The flat Kähler torus `T^{2n}`.
pub fn flat_kahler_torus(n: usize) -> GkResult<GKPair> {
    let c = complex_chart(n, true);
    kahler_pair(dz(&c), flat_omega(&c))
}

/// `1 + Σ|z_k|²`.
pub fn fs_potential_arg(chart: &Chart) -> ScalarExpr {
    (0..chart.dim()).fold(ScalarExpr::one(), |acc, j| acc.add(&x(j).mul(&x(j))))
}

/// `ω = −(i/2) Σ h_{jk̄} dz_j∧dz̄_k`, `h_{jk̄} = (s δ_jk − z̄_j z_k)/s²`.
pub fn fubini_study_omega(chart: &Chart) -> GkResult<Form> {
    let n = chart.n();
    let s = fs_potential_arg(chart);
    let s2 = s.mul(&s);
    let z: Vec<ScalarExpr> = (0..n).map(|k| x(2 * k).add(&x(2 * k + 1).mul(&ScalarExpr::i()))).collect();
    let dzs = dz(chart);
    let mut w = Form::zero(chart);
    for j in 0..n {
        for k in 0..n {
            let mut h = z[j].conj().mul(&z[k]).neg();
            if j == k {
                h = h.add(&s);
            }
            let h = h.checked_div(&s2)?;
            w = w.add(&dzs[j].wedge(&dzs[k].conj()).scale(&h));
        }
    }
    let w = w.scale(&ScalarExpr::i().mul(&c(-1, 2)));
    if !w.is_real() {
        return Err(GkError::DecompositionFailed("Fubini–Study form not real".into()));
    }
    Ok(w)
}

/// Affine chart of `ℂPⁿ` with the Fubini–Study Kähler form.
pub fn fubini_study_chart(n: usize) -> GkResult<GKPair> {
    if !(1..=2).contains(&n) {
        return Err(GkError::DimensionMismatch(format!("fubini_study_chart needs n ∈ {{1,2}}, got {n}")));
    }
    let ch = complex_chart(n, false);
    kahler_pair(dz(&ch), fubini_study_omega(&ch)?)
}

/// Standard hyperkähler triple on `ℝ⁴`.
pub fn hk_forms(chart: &Chart) -> (Form, Form, Form) {
    let e = |a: usize, b: usize| Form::dxs(chart, &[a, b]);
    let wi = e(0, 1).add(&e(2, 3));
    let wj = e(0, 2).sub(&e(1, 3));
    let wk = e(0, 3).add(&e(1, 2));
    (wi, wj, wk)
}

/// Type-(0,0) data `(B, ω₁, ω₂)`.
#[derive(Clone, Debug)]
pub struct Type00Data {
    pub b: Form,
    pub w1: Form,
    pub w2: Form,
}

impl Type00Data {
    pub fn pair(&self) -> GkResult<GKPair> {
        let chart = self.b.chart().clone();
        GKPair::new(GCStruct::symplectic(self.b.clone(), self.w1.clone())?, Form::zero(&chart), self.w2.clone())
    }
}

/// `B = ω_J`, `ω₁ = (ω_I+ω_K)/2`, `ω₂ = (ω_I−ω_K)/2` on `T⁴`; orientation
/// reversed so that the metric is positive in our conventions.
pub fn hyperkahler_t4_data() -> Type00Data {
    let ch = Chart::new(vec!["x1".into(), "x2".into(), "x3".into(), "x4".into()], vec![true; 4]).expect("chart");
    hk_data(&ch, None)
}

fn hk_data(ch: &Chart, shear: Option<&[ScalarExpr]>) -> Type00Data {
    let (wi, wj, wk) = hk_forms(ch);
    let wi = match shear {
        Some(f) => pullback_const(&wi, f),
        None => wi,
    };
    let half = c(1, 2);
    let w1 = wk.add(&wi).scale(&half);
    let w2 = wi.sub(&wk).scale(&half);
    Type00Data { b: wj.neg(), w1: w1.neg(), w2: w2.neg() }
}

pub fn hyperkahler_t4() -> GkResult<GKPair> {
    hyperkahler_t4_data().pair()
}

/// Pullback of a constant-coefficient form along the polynomial map `F`.
pub fn pullback_const(f: &Form, map: &[ScalarExpr]) -> Form {
    let chart = f.chart();
    let dfs: Vec<Form> = map.iter().map(|m| d_scalar(chart, m)).collect();
    let mut out = Form::zero(chart);
    for (mask, coeff) in f.terms() {
        let mut t = Form::scalar(chart, coeff.clone());
        for j in crate::forms::mask_indices(mask) {
            t = t.wedge(&dfs[j]);
        }
        out = out.add(&t);
    }
    out
}

/// Type-(0,0) structure with non-matched volumes: `ω_I` is replaced by its
/// pullback under the `ω_J`-symplectic shear
/// `(x₁, x₂, x₃ + ∂₁H, x₄ − ∂₂H)`, `H = ε x₁² x₂`.
pub fn perturbed_type00(eps: BigRational) -> Type00Data {
    let ch = Chart::euclidean(2);
    let e = ScalarExpr::constant(num::Complex::new(eps, num::zero()));
    let h = e.mul(&x(0)).mul(&x(0)).mul(&x(1));
    let map = vec![x(0), x(1), x(2).add(&h.partial(0)), x(3).sub(&h.partial(1))];
    hk_data(&ch, Some(&map))
}

/// A generalized Calabi–Yau metrical pair: flat Kähler `ℂ²` pulled back by
/// a polynomial diffeomorphism.
pub fn calabi_yau_pullback() -> GkResult<GKPair> {
    let ch = complex_chart(2, false);
    let map = vec![x(0), x(1).add(&c(1, 3).mul(&x(0)).mul(&x(0))), x(2).add(&c(1, 2).mul(&x(1)).mul(&x(3))), x(3)];
    let dzs: Vec<Form> = dz(&ch).iter().map(|f| pullback_const(f, &map)).collect();
    kahler_pair(dzs, pullback_const(&flat_omega(&ch), &map))
}

/// Almost-Kähler structure with `N ≠ 0`: `φ = θ₁∧θ₂`, `θ₁ = dz₁ − s dz̄₂`,
/// `θ₂ = dz₂ − s dz̄₁`, `s = a x₁ + b y₂` real; Lagrangian for `ω`.
pub fn sheared_almost_kahler(a: BigRational, b: BigRational) -> GkResult<GKPair> {
    let ch = complex_chart(2, false);
    let s = ScalarExpr::constant(num::Complex::new(a, num::zero()))
        .mul(&x(0))
        .add(&ScalarExpr::constant(num::Complex::new(b, num::zero())).mul(&x(3)));
    let z = dz(&ch);
    let t1 = z[0].sub(&z[1].conj().scale(&s));
    let t2 = z[1].sub(&z[0].conj().scale(&s));
    GKPair::new(GCStruct::generic(t1.wedge(&t2)), Form::zero(&ch), flat_omega(&ch))
}

/// Torus action data: commuting vector fields with moment maps and weights.
#[derive(Clone, Debug)]
pub struct TorusAction {
    pub fields: Vec<Vec<ScalarExpr>>,
    pub mu: Vec<ScalarExpr>,
    pub weights: Vec<i64>,
}

/// Rotations `x_k∂_{y_k} − y_k∂_{x_k}` with `μ_k = |z_k|²/2 · m`.
pub fn rotation_action(chart: &Chart, mu_den: Option<&ScalarExpr>) -> GkResult<TorusAction> {
    let d = chart.dim();
    let mut fields = Vec::new();
    let mut mu = Vec::new();
    for k in 0..chart.n() {
        let mut v = vec![ScalarExpr::zero(); d];
        v[2 * k] = x(2 * k + 1).neg();
        v[2 * k + 1] = x(2 * k);
        fields.push(v);
        let r2 = x(2 * k).mul(&x(2 * k)).add(&x(2 * k + 1).mul(&x(2 * k + 1))).mul(&c(1, 2));
        mu.push(match mu_den {
            Some(s) => r2.checked_div(s)?,
            None => r2,
        });
    }
    Ok(TorusAction { fields, mu, weights: vec![1; chart.n()] })
}

/// Translations `∂_{x_k}` with chart-local `μ_k = −y_k` and weight 0.
pub fn translation_action(chart: &Chart) -> TorusAction {
    let d = chart.dim();
    let mut fields = Vec::new();
    let mut mu = Vec::new();
    for k in 0..chart.n() {
        let mut v = vec![ScalarExpr::zero(); d];
        v[2 * k] = ScalarExpr::one();
        fields.push(v);
        mu.push(x(2 * k + 1).neg());
    }
    TorusAction { fields, mu, weights: vec![0; chart.n()] }
}

/// A torus-action Poisson deformation together with its closed forms.
#[derive(Clone, Debug)]
pub struct TorusDeformation {
    pub base: GKPair,
    pub deformed: GKPair,
    pub beta: Mat<ScalarExpr>,
    /// `e^{β}·ψ` computed by the Clifford exponential.
    pub psi_transported: Form,
    /// `Σλ_ij(−n_j J V_i + n_i J V_j)`.
    pub eta_expected: GenVec,
}

/// Deform a Kähler pair by `β_ℝ = Σ_{i,j} λ_ij V_i∧V_j`.
pub fn torus_poisson_deform(base: &GKPair, action: &TorusAction, lambda: &[Vec<BigRational>]) -> GkResult<TorusDeformation> {
    let chart = base.chart().clone();
    let d = chart.dim();
    let m = action.fields.len();
    if lambda.len() != m || lambda.iter().any(|r| r.len() != m) {
        return Err(GkError::DimensionMismatch("λ must be m×m".into()));
    }
    for i in 0..m {
        for j in 0..m {
            if lambda[i][j] != -lambda[j][i].clone() {
                return Err(GkError::NotBivector);
            }
        }
    }
    let w = base.omega();
    for (v, mu) in action.fields.iter().zip(&action.mu) {
        if w.interior_vec(v) != d_scalar(&chart, mu) {
            return Err(GkError::DecompositionFailed("i_V ω ≠ dμ".into()));
        }
    }
    for i in 0..m {
        for j in 0..m {
            if !w.interior_vec(&action.fields[i]).interior_vec(&action.fields[j]).is_zero() {
                return Err(GkError::DecompositionFailed("ω(V_i, V_j) ≠ 0".into()));
            }
        }
    }
    let lam = |i: usize, j: usize| ScalarExpr::constant(num::Complex::new(lambda[i][j].clone(), num::zero()));
    let mut beta = Mat::zeros(d, d);
    let mut b = Form::zero(&chart);
    for i in 0..m {
        for j in 0..m {
            if lambda[i][j] == num::zero() {
                continue;
            }
            let (vi, vj) = (&action.fields[i], &action.fields[j]);
            beta = beta.add(&Mat::from_fn(d, d, |a, c| vi[a].mul(&vj[c]).sub(&vj[a].mul(&vi[c]))).scale(&lam(i, j)));
            b = b.sub(&d_scalar(&chart, &action.mu[i]).wedge(&d_scalar(&chart, &action.mu[j])).scale(&lam(i, j)));
        }
    }
    let j1 = GCStruct::beta_deform(beta.clone(), base.j1.clone())?;
    let deformed = GKPair::new(j1, b, w.clone())?;
    let psi_transported = ad_beta_form(&BiVec::from_vector_bivector(&chart, &beta), base.psi_form())?;
    let jm = base.j1.j_matrix()?;
    let jv: Vec<GenVec> = action.fields.iter().map(|v| apply(&jm, &GenVec::vector(&chart, v.clone()))).collect();
    let mut eta = GenVec::zero(&chart);
    for i in 0..m {
        for j in 0..m {
            let ni = ScalarExpr::int(action.weights[i]);
            let nj = ScalarExpr::int(action.weights[j]);
            let t = jv[i].scale(&nj.neg()).add(&jv[j].scale(&ni));
            eta = eta.add(&t.scale(&lam(i, j)));
        }
    }
    Ok(TorusDeformation { base: base.clone(), deformed, beta, psi_transported, eta_expected: eta })
}

fn lambda2(l: BigRational) -> Vec<Vec<BigRational>> {
    vec![vec![num::zero(), l.clone()], vec![-l, num::zero()]]
}

/// Rotation deformation of flat `ℂ²`.
pub fn flat_c2_rotation_deform(l: BigRational) -> GkResult<TorusDeformation> {
    let base = flat_kahler(2)?;
    let act = rotation_action(base.chart(), None)?;
    torus_poisson_deform(&base, &act, &lambda2(l))
}

/// Translation deformation of the flat Kähler `T⁴`.
pub fn flat_t4_translation_deform(l: BigRational) -> GkResult<TorusDeformation> {
    let base = flat_kahler_torus(2)?;
    let act = translation_action(base.chart());
    torus_poisson_deform(&base, &act, &lambda2(l))
}

/// FS chart of `ℂP²` deformed by the `T²` rotation bivector; the
/// holomorphic Poisson structure vanishes on the three coordinate lines.
pub fn cp2_three_lines(l: BigRational) -> GkResult<TorusDeformation> {
    let base = fubini_study_chart(2)?;
    let s = fs_potential_arg(base.chart());
    let act = rotation_action(base.chart(), Some(&s))?;
    torus_poisson_deform(&base, &act, &lambda2(l))
}

pub fn default_lambda() -> BigRational {
    big_rat(1, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::gric_gr;
    use crate::gk_pairs::compatibility_check;
    use crate::sample::random_point;
    use rand::SeedableRng;

    fn compat(p: &GKPair, seed: u64) -> crate::gk_pairs::CompatReport {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<_> = (0..4).map(|_| random_point(p.chart(), &mut rng)).collect();
        compatibility_check(p, &pts).unwrap()
    }

    #[test]
    fn fixtures_are_generalized_kahler() {
        for (name, p) in [
            ("flat", flat_kahler(2).unwrap()),
            ("fs1", fubini_study_chart(1).unwrap()),
            ("fs2", fubini_study_chart(2).unwrap()),
            ("hk", hyperkahler_t4().unwrap()),
            ("cy", calabi_yau_pullback().unwrap()),
        ] {
            let r = compat(&p, 5);
            assert!(r.ok(), "{name}: {r:?}");
        }
    }

    #[test]
    fn rotation_deformation_closed_forms() {
        let t = flat_c2_rotation_deform(default_lambda()).unwrap();
        assert_eq!(&t.psi_transported, t.deformed.psi_form());
        let en = t.deformed.j1.eta_n().unwrap();
        assert!(en.n.is_zero());
        assert_eq!(en.eta, t.eta_expected);
    }

    #[test]
    fn fs2_curvature() {
        let r = gric_gr(&fubini_study_chart(2).unwrap()).unwrap();
        assert!(r.lambda.is_some() && r.gric_closed && r.cross_check);
    }

    #[test]
    fn perturbed_type00_two_routes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let hk = hyperkahler_t4_data();
        let pts: Vec<_> = (0..3).map(|_| random_point(hk.b.chart(), &mut rng)).collect();
        let rep = crate::gk_pairs::type00_check(&hk.b, &hk.w1, &hk.w2, &pts, &mut rng).unwrap();
        assert!(rep.ok(), "hk {rep:?}");
        let data = perturbed_type00(big_rat(1, 5));
        let probe = data.w1.wedge(&data.w1).top_coeff().mul(&data.w2.wedge(&data.w2).top_coeff());
        let pts = crate::sample::good_points(data.b.chart(), &mut rng, 4, &probe);
        let rep = crate::gk_pairs::type00_check(&data.b, &data.w1, &data.w2, &pts, &mut rng).unwrap();
        assert!(rep.ok(), "{rep:?}");
        let p = data.pair().unwrap();
        let c = compatibility_check(&p, &pts).unwrap();
        assert!(c.ok(), "{c:?}");
        let r = gric_gr(&p).unwrap();
        let t = crate::curvature::type00_gric(&data.b, &data.w1, &data.w2).unwrap();
        assert!(!r.gric.is_zero());
        assert_eq!(r.gric, t.gric);
        assert_eq!(r.gr, t.gr);
    }

    #[test]
    fn sheared_almost_kahler_is_not_integrable() {
        let p = sheared_almost_kahler(big_rat(1, 3), big_rat(1, 4)).unwrap();
        let r = compat(&p, 3);
        assert!(r.ok(), "{r:?}");
        let en = p.j1.eta_n().unwrap();
        assert!(!en.n.is_zero());
    }

    #[test]
    fn cp2_three_lines_deformation() {
        let t = cp2_three_lines(default_lambda()).unwrap();
        assert_eq!(&t.psi_transported, t.deformed.psi_form());
        let base = gric_gr(&t.base).unwrap();
        let def = gric_gr(&t.deformed).unwrap();
        assert_eq!(base.gric, def.gric);
    }

    #[test]
    fn t4_translation_deformation() {
        let t = flat_t4_translation_deform(default_lambda()).unwrap();
        assert_eq!(&t.psi_transported, t.deformed.psi_form());
        let base = gric_gr(&t.base).unwrap();
        let def = gric_gr(&t.deformed).unwrap();
        assert_eq!(base.gric, def.gric);
        assert!(t.deformed.j1.integrable().unwrap());
    }

    #[test]
    fn cp2_three_lines_type_jumps() {
        let t = cp2_three_lines(default_lambda()).unwrap();
        let generic = [big_rat(1, 2), big_rat(-1, 3), big_rat(2, 5), big_rat(1, 7)];
        let on_line = [big_rat(0, 1), big_rat(0, 1), big_rat(2, 5), big_rat(1, 7)];
        assert_eq!(t.deformed.j1.type_number(&generic).unwrap(), 0);
        assert_eq!(t.deformed.j1.type_number(&on_line).unwrap(), 2);
        assert_eq!(t.base.j1.type_number(&generic).unwrap(), 2);
    }

    #[test]
    fn calabi_yau_complex_scalar_curvature_vanishes() {
        let p = calabi_yau_pullback().unwrap();
        let rho = crate::curvature::rho(&p).unwrap();
        assert_eq!(rho, ScalarExpr::one());
        let g = crate::curvature::gr_complex(&p).unwrap();
        assert!(g.value.is_zero() && g.literal.is_zero());
    }
}
