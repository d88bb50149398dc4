//! Exhaustive sign calibration of the Mukai pairing against the Clifford action.
//!
//! For every basis generalized vector and every pair of basis monomials in
//! dimensions 2 and 4 this records, per degree of the left form:
//! the adjoint sign `a` in `⟨e·α, β⟩ = a ⟨α, e·β⟩`,
//! the polarization sign `s` in
//! `⟨e₁·α, e₂·β⟩ + ⟨e₂·α, e₁·β⟩ = s · 2⟨e₁,e₂⟩⟨α, β⟩`,
//! and the symmetry sign `m` in `⟨α, β⟩ = m ⟨β, α⟩`.

use crate::error::{GkError, GkResult};
use crate::field::Field;
use crate::forms::{Chart, Form};
use crate::genalg::GenVec;
use crate::symexpr::{cq_int, Cq};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

pub const FIXTURE: &str = include_str!("../fixtures/calibration.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub version: u32,
    pub conventions: Vec<String>,
    pub dims: Vec<DimCalibration>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimCalibration {
    pub dim: usize,
    /// Indexed by degree of the left form; `null` where no basis pair constrains it.
    pub adjoint_sign: Vec<Option<i32>>,
    pub polarization_sign: Vec<Option<i32>>,
    pub mukai_symmetry: Vec<Option<i32>>,
    pub adjoint_checks: usize,
    pub polarization_checks: usize,
    pub symmetry_checks: usize,
}

fn record(slot: &mut Option<i32>, lhs: &Cq, rhs: &Cq, what: &str, deg: u32) -> GkResult<bool> {
    if rhs.is_zero() {
        if lhs.is_zero() {
            return Ok(false);
        }
        return Err(GkError::DecompositionFailed(format!("{what}: nonzero left side against zero right side (degree {deg})")));
    }
    let s = if lhs == rhs {
        1
    } else if *lhs == rhs.neg() {
        -1
    } else {
        return Err(GkError::DecompositionFailed(format!("{what}: ratio is not a sign (degree {deg})")));
    };
    match slot {
        None => *slot = Some(s),
        Some(t) if *t != s => {
            return Err(GkError::DecompositionFailed(format!("{what}: sign depends on more than the degree ({deg})")))
        }
        _ => {}
    }
    Ok(true)
}

/// Run the brute force in one dimension.
pub fn calibrate_dim(dim: usize) -> GkResult<DimCalibration> {
    let names: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    let chart = Chart::new(names, vec![false; dim])?;
    let masks: Vec<u8> = (0..1u16 << dim).map(|m| m as u8).collect();
    let mono = |m: u8| Form::<Cq>::monomial(&chart, m, cq_int(1));
    let basis: Vec<GenVec<Cq>> = (0..2 * dim).map(|k| GenVec::basis(&chart, k)).collect();
    let deg = |m: u8| m.count_ones();

    let mut adj = vec![None; dim + 1];
    let mut pol = vec![None; dim + 1];
    let mut sym = vec![None; dim + 1];
    let (mut na, mut np, mut ns) = (0, 0, 0);

    let acted: Vec<Vec<Form<Cq>>> = basis.iter().map(|e| masks.iter().map(|&m| e.act(&mono(m))).collect()).collect();

    for &a in &masks {
        for &b in &masks {
            let pa = mono(a).mukai_scalar(&mono(b));
            let pb = mono(b).mukai_scalar(&mono(a));
            if record(&mut sym[deg(a) as usize], &pa, &pb, "symmetry", deg(a))? {
                ns += 1;
            }
        }
    }
    for (k, _) in basis.iter().enumerate() {
        for &a in &masks {
            for &b in &masks {
                let l = acted[k][a as usize].mukai_scalar(&mono(b));
                let r = mono(a).mukai_scalar(&acted[k][b as usize]);
                if record(&mut adj[deg(a) as usize], &l, &r, "adjoint", deg(a))? {
                    na += 1;
                }
            }
        }
    }
    for (k1, e1) in basis.iter().enumerate() {
        for (k2, e2) in basis.iter().enumerate() {
            let two_pair = e1.pair(e2).scale_cq(&cq_int(2));
            for &a in &masks {
                for &b in &masks {
                    let l = acted[k1][a as usize]
                        .mukai_scalar(&acted[k2][b as usize])
                        .add(&acted[k2][a as usize].mukai_scalar(&acted[k1][b as usize]));
                    let r = two_pair.mul(&mono(a).mukai_scalar(&mono(b)));
                    if record(&mut pol[deg(a) as usize], &l, &r, "polarization", deg(a))? {
                        np += 1;
                    }
                }
            }
        }
    }
    Ok(DimCalibration {
        dim,
        adjoint_sign: adj,
        polarization_sign: pol,
        mukai_symmetry: sym,
        adjoint_checks: na,
        polarization_checks: np,
        symmetry_checks: ns,
    })
}

pub fn run_calibration() -> GkResult<Calibration> {
    Ok(Calibration {
        version: 1,
        conventions: vec![
            "pairing <v+xi,u+eta> = (xi(u)+eta(v))/2".into(),
            "clifford (v+xi).a = i_v a + xi^a".into(),
            "mukai <a,b> = top(a ^ sigma b), sigma = + on degrees 0,1 mod 4".into(),
            "signs indexed by the degree of the left form".into(),
        ],
        dims: vec![calibrate_dim(2)?, calibrate_dim(4)?],
    })
}

pub fn to_json(c: &Calibration) -> String {
    let mut s = serde_json::to_string_pretty(c).expect("serializable");
    s.push('\n');
    s
}

/// The committed fixture.
pub fn committed() -> &'static Calibration {
    static C: OnceLock<Calibration> = OnceLock::new();
    C.get_or_init(|| serde_json::from_str(FIXTURE).expect("committed calibration fixture parses"))
}

impl Calibration {
    fn dim(&self, d: usize) -> &DimCalibration {
        self.dims.iter().find(|x| x.dim == d).expect("calibrated dimension")
    }
    pub fn adjoint(&self, dim: usize, deg: u32) -> i32 {
        self.dim(dim).adjoint_sign[deg as usize].unwrap_or(1)
    }
    pub fn polarization(&self, dim: usize, deg: u32) -> i32 {
        self.dim(dim).polarization_sign[deg as usize].unwrap_or(1)
    }
    pub fn symmetry(&self, dim: usize, deg: u32) -> i32 {
        self.dim(dim).mukai_symmetry[deg as usize].unwrap_or(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_matches_brute_force() {
        let c = run_calibration().unwrap();
        assert_eq!(to_json(&c), FIXTURE);
        assert_eq!(&c, committed());
    }
}
