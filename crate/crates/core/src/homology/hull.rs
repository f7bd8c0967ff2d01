use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::apcomplex::{
    abs_row_sums_equal, ap_complex, connectivity, perron_certificate, ComplexJson,
};
use crate::dataset::{validate_dataset, Check, PentagonDataset};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

use super::{
    coboundary, cohomology, direct_limit, induced_endomorphisms, smith_normal_form, AbelianGroup,
    DirectLimitResult,
};

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    /// Cohomology of the complex.
    pub complex_group: AbelianGroup,
    pub complex_group_text: String,
    /// Induced endomorphism, torsion generators first.
    pub induced: IntMatrix,
    /// Cohomology of the inverse limit.
    pub limit: DirectLimitResult,
}

#[derive(Clone, Debug, Serialize)]
pub struct HullCohomologyReport {
    pub checks: Vec<Check>,
    /// Smith invariants of the coboundaries in degrees 0 and 1.
    #[serde(serialize_with = "serialize_invariants")]
    pub coboundary_invariants: [Vec<BigInt>; 2],
    pub degrees: Vec<DegreeReport>,
    pub complex: ComplexJson,
}

fn serialize_invariants<S: serde::Serializer>(
    v: &[Vec<BigInt>; 2],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    for inv in v {
        seq.serialize_element(&crate::matrix::Ints(inv))?;
    }
    seq.end()
}

impl HullCohomologyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn rational_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.limit.rational_dim).collect()
    }
}

fn require(checks: &mut Vec<Check>, check: Check) -> Result<()> {
    let failed = !check.passed;
    let text = check.to_string();
    checks.push(check);
    if failed {
        return Err(Error::Derivation(format!("check failed: {text}")));
    }
    Ok(())
}

/// Dataset to complex to chain maps to cohomology to direct limits, with
/// every intermediate check attached. Aborts at the first failing check.
pub fn hull_cohomology(d: &PentagonDataset) -> Result<HullCohomologyReport> {
    let mut checks = Vec::new();
    for c in validate_dataset(d).checks {
        require(&mut checks, c)?;
    }
    let ap = ap_complex(d)?;
    let c = &ap.complex;
    let m = &ap.maps;
    require(
        &mut checks,
        Check::new(
            "placement-unique",
            "each rule has exactly one consistent child placement",
            ap.placement.ambiguities.is_empty(),
            format!("{} ambiguous rules", ap.placement.ambiguities.len()),
        ),
    )?;
    require(
        &mut checks,
        Check::new(
            "boundary-squared",
            "the composite of the boundary maps vanishes",
            (&c.boundary1 * &c.boundary2).is_zero(),
            "",
        ),
    )?;
    let chi = c.euler_characteristic();
    require(
        &mut checks,
        Check::new(
            "euler",
            "Euler characteristic is 1",
            chi == 1,
            format!("{chi}"),
        ),
    )?;
    let comps = connectivity(c);
    require(
        &mut checks,
        Check::new(
            "connected",
            "the 1-skeleton is connected",
            comps == 1,
            format!("{comps} components"),
        ),
    )?;
    let commutes = m.check_commutes(c);
    require(
        &mut checks,
        Check::new(
            "chain-maps",
            "the substitution maps commute with the boundaries",
            commutes.is_ok(),
            commutes.err().map(|e| e.to_string()).unwrap_or_default(),
        ),
    )?;
    require(
        &mut checks,
        Check::new(
            "row-sums",
            "row sums of |S2|, |S1|, |S0| are 6, 2, 1",
            abs_row_sums_equal(&m.s2, 6)
                && abs_row_sums_equal(&m.s1, 2)
                && abs_row_sums_equal(&m.s0, 1),
            "",
        ),
    )?;
    let perron = perron_certificate(m);
    require(
        &mut checks,
        Check::new(
            "perron",
            "6 is an eigenvalue of |S2|",
            perron.is_zero(),
            format!("det(|S2| - 6I) = {perron}"),
        ),
    )?;

    let h = cohomology(c);
    let ranks: Vec<i64> = h.iter().map(|g| g.group.rank as i64).collect();
    require(
        &mut checks,
        Check::new(
            "cohomology-euler",
            "alternating sum of cohomology ranks equals the Euler characteristic",
            ranks[0] - ranks[1] + ranks[2] == chi,
            format!("{} - {} + {}", ranks[0], ranks[1], ranks[2]),
        ),
    )?;
    require(
        &mut checks,
        Check::new(
            "h0-rank",
            "rank of H^0 equals the number of components",
            ranks[0] as usize == comps,
            format!("{}", ranks[0]),
        ),
    )?;
    let induced = induced_endomorphisms(c, &h, m)?;
    require(
        &mut checks,
        Check::new(
            "h0-identity",
            "the induced map on H^0 is the identity",
            induced[0].is_identity(),
            induced[0].to_string(),
        ),
    )?;

    let coboundary_invariants = [0, 1].map(|k| smith_normal_form(&coboundary(c, k)).invariants);
    let degrees = h
        .iter()
        .zip(induced)
        .map(|(g, f)| DegreeReport {
            degree: g.degree,
            complex_group: g.group.clone(),
            complex_group_text: g.group.to_string(),
            limit: direct_limit(&g.group, &f),
            induced: f,
        })
        .collect();
    Ok(HullCohomologyReport {
        checks,
        coboundary_invariants,
        degrees,
        complex: ap.to_json(d),
    })
}
