//! Reductions of the charts to `Spec F_p[S_σ]`, the patching data of the
//! reduced atlas, and its comparison with the toric scheme of the fan built
//! straight from the cones.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::atlas::{Atlas, Chart};
use crate::error::{Result, ToricError};
use crate::fan::Fan;
use crate::lattice::LatticeVector;
use crate::padic::PAdicContext;
use crate::semigroup::{semigroup_of_cone, AffineSemigroup, BinomialRelation};

/// Degree bound of the relations attached to a reduced chart.
pub const RELATION_DEGREE: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedChart {
    pub id: String,
    pub prime: u64,
    #[serde(serialize_with = "serialize_generators")]
    pub semigroup: Arc<AffineSemigroup>,
    pub relations: Vec<BinomialRelation>,
}

fn serialize_generators<S: serde::Serializer>(s: &Arc<AffineSemigroup>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    s.generators().serialize(ser)
}

/// The open immersion of the face's chart into the cone's chart, given by
/// inverting `χᵘ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Immersion {
    pub source: String,
    pub target: String,
    pub witness: LatticeVector,
}

/// Affine pieces over `F_p` and the immersions that patch them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeCharts {
    pub prime: u64,
    pub charts: Vec<ReducedChart>,
    pub immersions: Vec<Immersion>,
}

impl SchemeCharts {
    pub fn chart(&self, id: &str) -> Option<&ReducedChart> {
        self.charts.iter().find(|c| c.id == id)
    }
}

pub fn reduce_chart(chart: &Chart, p: u64) -> Result<ReducedChart> {
    let context = PAdicContext::new(p)?;
    Ok(reduced(&chart.cone_id, chart.semigroup.clone(), context.prime()))
}

fn reduced(id: &str, semigroup: Arc<AffineSemigroup>, prime: u64) -> ReducedChart {
    let relations = semigroup.binomial_relations(RELATION_DEGREE);
    ReducedChart {
        id: id.to_string(),
        prime,
        semigroup,
        relations,
    }
}

/// Reduces every chart of the atlas; immersions come from the atlas's own
/// overlap witnesses.
pub fn reduce_atlas(atlas: &Atlas, p: u64) -> Result<SchemeCharts> {
    let prime = PAdicContext::new(p)?.prime();
    let charts: Vec<ReducedChart> = atlas
        .charts()
        .par_iter()
        .map(|c| reduced(&c.cone_id, c.semigroup.clone(), prime))
        .collect();
    let mut immersions = Vec::new();
    for o in atlas.overlaps() {
        let (a, b) = o.pair;
        // overlaps of a cone with one of its faces are exactly the face relations
        for (face, cone, witness) in [(a, b, &o.witness_second), (b, a, &o.witness_first)] {
            if o.tau == face {
                immersions.push(Immersion {
                    source: atlas.charts()[face].cone_id.clone(),
                    target: atlas.charts()[cone].cone_id.clone(),
                    witness: witness.clone(),
                });
            }
        }
    }
    immersions.sort();
    Ok(SchemeCharts {
        prime,
        charts,
        immersions,
    })
}

/// Chart data of the toric scheme of `fan` over `F_p`, computed from the
/// cones and the fan's face relations without going through an atlas.
pub fn toric_scheme_charts(fan: &Fan, p: u64) -> Result<SchemeCharts> {
    let prime = PAdicContext::new(p)?.prime();
    let charts = fan
        .cones()
        .par_iter()
        .map(|c| Ok(reduced(&c.id, Arc::new(semigroup_of_cone(&c.cone)?), prime)))
        .collect::<Result<Vec<_>>>()?;
    let mut immersions: Vec<Immersion> = fan
        .face_relations()
        .iter()
        .map(|(&(face, cone), u)| Immersion {
            source: fan.cones()[face].id.clone(),
            target: fan.cones()[cone].id.clone(),
            witness: u.clone(),
        })
        .collect();
    immersions.sort();
    Ok(SchemeCharts {
        prime,
        charts,
        immersions,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub matches: bool,
    pub differences: Vec<String>,
}

pub fn compare(reduced: &SchemeCharts, scheme: &SchemeCharts) -> Comparison {
    let mut differences = Vec::new();
    if reduced.prime != scheme.prime {
        differences.push(format!("primes differ: {} vs {}", reduced.prime, scheme.prime));
    }
    if reduced.charts.len() != scheme.charts.len() {
        differences.push(format!(
            "chart counts differ: {} vs {}",
            reduced.charts.len(),
            scheme.charts.len()
        ));
    }
    for (a, b) in reduced.charts.iter().zip(&scheme.charts) {
        if a.id != b.id {
            differences.push(format!("chart ids differ: {} vs {}", a.id, b.id));
        }
        if a.semigroup != b.semigroup {
            differences.push(format!("semigroups of {} differ", a.id));
        }
        if a.relations != b.relations {
            differences.push(format!("relations of {} differ", a.id));
        }
    }
    for i in &reduced.immersions {
        if !scheme.immersions.contains(i) {
            differences.push(format!("immersion {} -> {} via {} only in the reduction", i.source, i.target, i.witness));
        }
    }
    for i in &scheme.immersions {
        if !reduced.immersions.contains(i) {
            differences.push(format!("immersion {} -> {} via {} only in the toric scheme", i.source, i.target, i.witness));
        }
    }
    Comparison {
        matches: differences.is_empty(),
        differences,
    }
}

pub fn reduction_equals_toric_scheme(atlas: &Atlas, p: u64) -> Result<Comparison> {
    Ok(compare(&reduce_atlas(atlas, p)?, &toric_scheme_charts(atlas.fan(), p)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionJson {
    pub prime: u64,
    pub charts: Vec<ReducedChart>,
    pub immersions: Vec<Immersion>,
    pub matches_toric_scheme: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub differences: Vec<String>,
}

pub fn reduction_json(atlas: &Atlas, p: u64) -> Result<ReductionJson> {
    let reduced = reduce_atlas(atlas, p)?;
    let comparison = compare(&reduced, &toric_scheme_charts(atlas.fan(), p)?);
    if reduced.charts.len() != atlas.charts().len() {
        return Err(ToricError::internal("reduction lost charts"));
    }
    Ok(ReductionJson {
        prime: reduced.prime,
        charts: reduced.charts,
        immersions: reduced.immersions,
        matches_toric_scheme: comparison.matches,
        differences: comparison.differences,
    })
}
