//! Wire formats: JSON documents for polytopes, fans, families, verdicts
//! and polynomials.
//!
//! Rationals are serialized as `"p/q"` strings (plain `"p"` for integers)
//! so fixtures stay exact and diff cleanly. Loading a polytope rebuilds the
//! canonical value from the vertex list and cross-checks any provided
//! H-representation against it.

use serde::{Deserialize, Serialize};

use crate::anticanonical::{AnticanonicalStatus, AnticanonicalVerdict, Witness};
use crate::algebra::{GradedAlgebraSummary, HomogeneousPolynomial};
use crate::error::{Error, Result};
use crate::family::{
    ChamberedFamily, FamilyKind, GzShiftVerdict, LinearFamily, LinearityVerdict, ParameterCone,
};
use crate::fan::{Fan, FanProperties};
use crate::lattice::EhrhartQuasiPolynomial;
use crate::num::{format_rat, parse_rat, Int, Rat};
use crate::polytope::{HalfSpace, Polytope};

fn int_to_i64(x: &Int) -> Result<i64> {
    use num_traits::ToPrimitive;
    x.to_i64().ok_or_else(|| Error::InvalidInput(format!("integer {x} exceeds the i64 range")))
}

fn int_vec_to_i64(v: &[Int]) -> Result<Vec<i64>> {
    v.iter().map(int_to_i64).collect()
}

fn i64_vec_to_int(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn rat_vec_to_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn strings_to_rat_vec(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| parse_rat(s)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalfSpaceJson {
    pub normal: Vec<i64>,
    pub offset: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub ambient_dim: usize,
    pub hrep: Vec<HalfSpaceJson>,
    pub vrep: Vec<Vec<String>>,
}

pub fn polytope_to_json(p: &Polytope) -> Result<PolytopeJson> {
    Ok(PolytopeJson {
        ambient_dim: p.ambient_dim(),
        hrep: p
            .hrep()
            .iter()
            .map(|h| {
                Ok(HalfSpaceJson {
                    normal: int_vec_to_i64(&h.normal)?,
                    offset: format_rat(&h.offset),
                })
            })
            .collect::<Result<_>>()?,
        vrep: p.vertices().iter().map(|v| rat_vec_to_strings(v)).collect(),
    })
}

pub fn polytope_from_json(j: &PolytopeJson) -> Result<Polytope> {
    let hs: Vec<HalfSpace> = j
        .hrep
        .iter()
        .map(|h| HalfSpace::new(i64_vec_to_int(&h.normal), parse_rat(&h.offset)?))
        .collect::<Result<_>>()?;
    if j.vrep.is_empty() {
        if hs.is_empty() {
            return Ok(Polytope::empty(j.ambient_dim));
        }
        return Polytope::from_halfspaces(j.ambient_dim, hs);
    }
    let points: Vec<Vec<Rat>> =
        j.vrep.iter().map(|v| strings_to_rat_vec(v)).collect::<Result<_>>()?;
    let p = Polytope::from_points(j.ambient_dim, points)?;
    if !hs.is_empty() {
        let q = Polytope::from_halfspaces(j.ambient_dim, hs)?;
        if q != p {
            return Err(Error::InvalidInput(
                "hrep and vrep describe different polytopes".into(),
            ));
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FanJson {
    pub ambient_dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

pub fn fan_to_json(f: &Fan) -> Result<FanJson> {
    Ok(FanJson {
        ambient_dim: f.ambient_dim(),
        rays: f.rays().iter().map(|r| int_vec_to_i64(r)).collect::<Result<_>>()?,
        max_cones: f.max_cones().to_vec(),
    })
}

pub fn fan_from_json(j: &FanJson) -> Result<Fan> {
    Fan::new(
        j.ambient_dim,
        j.rays.iter().map(|r| i64_vec_to_int(r)).collect(),
        j.max_cones.clone(),
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FanPropertiesJson {
    pub complete: bool,
    pub simplicial: bool,
    pub smooth: bool,
}

pub fn fan_properties_to_json(p: FanProperties) -> FanPropertiesJson {
    FanPropertiesJson { complete: p.complete, simplicial: p.simplicial, smooth: p.smooth }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeJson {
    pub space_dim: usize,
    pub generators: Vec<Vec<String>>,
    pub hrep: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u32>,
    pub ambient_dim: usize,
    pub cone: ConeJson,
    pub normals: Vec<Vec<i64>>,
    pub offset_map: Vec<Vec<String>>,
    pub lattice: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChamberedFamilyJson {
    pub kind: String,
    pub space_dim: usize,
    pub chambers: Vec<FamilyJson>,
}

/// Either a linear family document or a chambered (projected) one.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AnyFamilyJson {
    Chambered(ChamberedFamilyJson),
    Linear(FamilyJson),
}

pub fn family_to_json(f: &LinearFamily) -> Result<FamilyJson> {
    let (kind, n, multiplicity) = match f.kind() {
        FamilyKind::Toric => ("toric", None, None),
        FamilyKind::GelfandZetlin { n } => ("gz", Some(*n), None),
        FamilyKind::Fibered { n, multiplicity } => ("fibered", Some(*n), Some(*multiplicity)),
        FamilyKind::Chamber => ("chamber", None, None),
        FamilyKind::Custom => ("custom", None, None),
    };
    Ok(FamilyJson {
        kind: kind.to_string(),
        n,
        multiplicity,
        ambient_dim: f.ambient_dim(),
        cone: ConeJson {
            space_dim: f.cone().space_dim(),
            generators: f.cone().generators().iter().map(|g| rat_vec_to_strings(g)).collect(),
            hrep: f.cone().hrep().iter().map(|h| int_vec_to_i64(h)).collect::<Result<_>>()?,
        },
        normals: f.normals().iter().map(|w| int_vec_to_i64(w)).collect::<Result<_>>()?,
        offset_map: f.offset_map().iter().map(|row| rat_vec_to_strings(row)).collect(),
        lattice: f.cone().lattice().iter().map(|r| int_vec_to_i64(r)).collect::<Result<_>>()?,
    })
}

pub fn family_from_json(j: &FamilyJson) -> Result<LinearFamily> {
    let kind = match j.kind.as_str() {
        "toric" => FamilyKind::Toric,
        "gz" => FamilyKind::GelfandZetlin {
            n: j.n.ok_or_else(|| Error::InvalidInput("gz family requires field n".into()))?,
        },
        "fibered" => FamilyKind::Fibered {
            n: j.n.ok_or_else(|| Error::InvalidInput("fibered family requires field n".into()))?,
            multiplicity: j.multiplicity.unwrap_or(1),
        },
        "chamber" => FamilyKind::Chamber,
        "custom" => FamilyKind::Custom,
        other => return Err(Error::InvalidInput(format!("unknown family kind {other:?}"))),
    };
    // The cone's generator list is derived from the hrep on load; the
    // serialized generators are informational.
    let cone = ParameterCone::from_hrep(
        j.cone.space_dim,
        j.cone.hrep.iter().map(|h| i64_vec_to_int(h)).collect(),
        j.lattice.iter().map(|r| i64_vec_to_int(r)).collect(),
    )?;
    let normals: Vec<Vec<Int>> = j.normals.iter().map(|w| i64_vec_to_int(w)).collect();
    let offset_map: Vec<Vec<Rat>> =
        j.offset_map.iter().map(|row| strings_to_rat_vec(row)).collect::<Result<_>>()?;
    LinearFamily::new(kind, cone, j.ambient_dim, normals, offset_map)
}

pub fn chambered_to_json(f: &ChamberedFamily) -> Result<ChamberedFamilyJson> {
    Ok(ChamberedFamilyJson {
        kind: "projected".to_string(),
        space_dim: f.space_dim(),
        chambers: f.chambers().iter().map(family_to_json).collect::<Result<_>>()?,
    })
}

pub fn chambered_from_json(j: &ChamberedFamilyJson) -> Result<ChamberedFamily> {
    if j.kind != "projected" {
        return Err(Error::InvalidInput(format!(
            "expected a projected family, found kind {:?}",
            j.kind
        )));
    }
    ChamberedFamily::new(
        j.space_dim,
        j.chambers.iter().map(family_from_json).collect::<Result<_>>()?,
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessJson {
    pub gamma: Vec<String>,
    pub count: u64,
    pub interior: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnticanonicalVerdictJson {
    pub status: String,
    pub kappa: Vec<String>,
    pub budget: u32,
    pub witness: Option<WitnessJson>,
    pub tested: Vec<Vec<String>>,
}

pub fn anticanonical_verdict_to_json(v: &AnticanonicalVerdict) -> AnticanonicalVerdictJson {
    AnticanonicalVerdictJson {
        status: match v.status {
            AnticanonicalStatus::VerifiedOnBudget => "verified-on-budget".to_string(),
            AnticanonicalStatus::Refuted => "refuted".to_string(),
            AnticanonicalStatus::NotApplicable => "not-applicable".to_string(),
        },
        kappa: rat_vec_to_strings(&v.kappa),
        budget: v.budget,
        witness: v.witness.as_ref().map(|w: &Witness| WitnessJson {
            gamma: rat_vec_to_strings(&w.gamma),
            count: w.count,
            interior: w.interior,
        }),
        tested: v.tested.iter().map(|g| rat_vec_to_strings(g)).collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearityWitnessJson {
    pub gamma1: Vec<String>,
    pub gamma2: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearityVerdictJson {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs_checked: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LinearityWitnessJson>,
}

pub fn linearity_verdict_to_json(v: &LinearityVerdict) -> LinearityVerdictJson {
    match v {
        LinearityVerdict::VerifiedOnBudget { budget, pairs_checked } => LinearityVerdictJson {
            status: "verified-on-budget".to_string(),
            budget: Some(*budget),
            pairs_checked: Some(*pairs_checked),
            witness: None,
        },
        LinearityVerdict::Refuted { gamma1, gamma2 } => LinearityVerdictJson {
            status: "refuted".to_string(),
            budget: None,
            pairs_checked: None,
            witness: Some(LinearityWitnessJson {
                gamma1: rat_vec_to_strings(gamma1),
                gamma2: rat_vec_to_strings(gamma2),
            }),
        },
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub num_vars: usize,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

pub fn polynomial_to_json(f: &HomogeneousPolynomial) -> PolynomialJson {
    PolynomialJson {
        num_vars: f.num_vars(),
        degree: f.degree(),
        terms: f
            .coefficients()
            .iter()
            .map(|(e, c)| TermJson { exponents: e.clone(), coeff: format_rat(c) })
            .collect(),
    }
}

pub fn polynomial_from_json(j: &PolynomialJson) -> Result<HomogeneousPolynomial> {
    let mut coeffs = std::collections::BTreeMap::new();
    for t in &j.terms {
        coeffs.insert(t.exponents.clone(), parse_rat(&t.coeff)?);
    }
    HomogeneousPolynomial::new(j.num_vars, j.degree, coeffs)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EhrhartJson {
    pub period: u32,
    pub constituents: Vec<Vec<String>>,
}

pub fn ehrhart_to_json(q: &EhrhartQuasiPolynomial) -> EhrhartJson {
    EhrhartJson {
        period: q.period,
        constituents: q.constituents.iter().map(|c| rat_vec_to_strings(c)).collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GzShiftJson {
    pub lambda: Vec<i64>,
    pub shifted_lambda: Vec<i64>,
    pub strict_count: u64,
    pub shifted_count: u64,
    pub equal: bool,
}

pub fn gz_shift_to_json(v: &GzShiftVerdict) -> Result<GzShiftJson> {
    Ok(GzShiftJson {
        lambda: int_vec_to_i64(&v.lambda)?,
        shifted_lambda: int_vec_to_i64(&v.shifted_lambda)?,
        strict_count: v.strict_count,
        shifted_count: v.shifted_count,
        equal: v.equal,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradedSummaryJson {
    pub dims: Vec<usize>,
    pub duality_ok: bool,
}

pub fn graded_summary_to_json(s: &GradedAlgebraSummary) -> GradedSummaryJson {
    GradedSummaryJson { dims: s.dims.clone(), duality_ok: s.duality_ok }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{gz_family, toric_family};
    use crate::num::{int_vec, ratz};

    fn p2_fan() -> Fan {
        Fan::new(
            2,
            vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    #[test]
    fn polytope_round_trip() {
        let p = Polytope::from_halfspaces(
            2,
            vec![
                HalfSpace::new(int_vec(&[1, 0]), ratz(1)).unwrap(),
                HalfSpace::new(int_vec(&[0, 1]), ratz(1)).unwrap(),
                HalfSpace::new(int_vec(&[-1, -1]), ratz(1)).unwrap(),
            ],
        )
        .unwrap();
        let j = polytope_to_json(&p).unwrap();
        let text = serde_json::to_string(&j).unwrap();
        let back: PolytopeJson = serde_json::from_str(&text).unwrap();
        assert_eq!(polytope_from_json(&back).unwrap(), p);
    }

    #[test]
    fn inconsistent_reps_rejected() {
        let j = PolytopeJson {
            ambient_dim: 1,
            hrep: vec![
                HalfSpaceJson { normal: vec![1], offset: "0".into() },
                HalfSpaceJson { normal: vec![-1], offset: "5".into() },
            ],
            vrep: vec![vec!["0".into()], vec!["1".into()]],
        };
        assert!(matches!(polytope_from_json(&j), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn fan_and_family_round_trip() {
        let fan = p2_fan();
        let j = fan_to_json(&fan).unwrap();
        assert_eq!(fan_from_json(&j).unwrap(), fan);

        let fam = toric_family(&fan).unwrap();
        let j = family_to_json(&fam).unwrap();
        let back = family_from_json(&j).unwrap();
        assert_eq!(back, fam);

        let fam = gz_family(3).unwrap();
        let j = family_to_json(&fam).unwrap();
        assert_eq!(j.kind, "gz");
        let back = family_from_json(&j).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn polynomial_round_trip() {
        let fam = toric_family(&p2_fan()).unwrap();
        let cert = fam.verify_linearity(8, 0);
        let f = crate::algebra::volume_polynomial(&fam, &cert).unwrap();
        let j = polynomial_to_json(&f);
        assert_eq!(polynomial_from_json(&j).unwrap(), f);
    }

    #[test]
    fn chambered_family_round_trip() {
        let chambered = crate::family::projected_family(
            3,
            vec![int_vec(&[0, 0, 1]), int_vec(&[1, 0, -1]), int_vec(&[0, 1, -1])],
            vec![
                vec![ratz(1), ratz(0), ratz(0)],
                vec![ratz(0), ratz(1), ratz(0)],
            ],
        )
        .unwrap();
        let j = chambered_to_json(&chambered).unwrap();
        let text = serde_json::to_string(&j).unwrap();
        let any: AnyFamilyJson = serde_json::from_str(&text).unwrap();
        let AnyFamilyJson::Chambered(back) = any else {
            panic!("chambered document must parse as chambered");
        };
        assert_eq!(chambered_from_json(&back).unwrap(), chambered);
    }
}
