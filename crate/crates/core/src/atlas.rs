//! The chart system of the rigid space attached to a fan: one chart per cone,
//! overlap localizations for every pair, monomial transition data and
//! separatedness certificates.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{face_witness_with, Cone};
use crate::error::{Result, ToricError};
use crate::fan::Fan;
use crate::lattice::{solve_integer, LatticeVector};
use crate::semigroup::{
    semigroup_of_cone, sum_covers, AffineSemigroup, CoverCertificate, DEFAULT_MULTIPLICITY_BOUND,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub cone_id: String,
    pub cone: Cone,
    pub semigroup: Arc<AffineSemigroup>,
    pub labels: Vec<String>,
}

impl Chart {
    pub fn new(cone_id: impl Into<String>, cone: &Cone) -> Result<Chart> {
        let semigroup = Arc::new(semigroup_of_cone(cone)?);
        let labels = (1..=semigroup.generators().len()).map(|i| format!("X{i}")).collect();
        Ok(Chart {
            cone_id: cone_id.into(),
            cone: cone.clone(),
            semigroup,
            labels,
        })
    }

    pub fn generators(&self) -> &[LatticeVector] {
        self.semigroup.generators()
    }
}

/// The chart of the torus: `S = M`, generated by `±e_i`.
pub fn torus_chart(n: usize) -> Result<Chart> {
    if n == 0 {
        return Err(ToricError::domain("torus rank must be at least 1"));
    }
    Chart::new("origin", &Cone::zero(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    /// Chart indices, `first < second`.
    pub pair: (usize, usize),
    /// Chart index of `τ = σ ∩ σ₁`.
    pub tau: usize,
    pub witness_first: LatticeVector,
    pub witness_second: LatticeVector,
    pub semigroup: Arc<AffineSemigroup>,
}

/// Exponents of the generators of `S_τ` as Laurent monomials in the
/// generators of one chart: row `i` expresses generator `i` of `S_τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub from: String,
    pub to: String,
    pub tau: String,
    pub exponents: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCertificates {
    pub pair: (String, String),
    pub certificates: Vec<CoverCertificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Consistency {
    pub localizations_agree: bool,
    pub transitions_round_trip: bool,
    pub triple_intersections_associate: bool,
    pub functorial: bool,
}

impl Consistency {
    pub fn holds(&self) -> bool {
        self.localizations_agree && self.transitions_round_trip && self.triple_intersections_associate && self.functorial
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtlasOptions {
    /// Multiplicity bound for localization certificates.
    pub bound: u32,
    /// Search radius for separatedness certificates (`None`: derived from
    /// the generators).
    pub radius: Option<i64>,
    pub parallel: bool,
}

impl Default for AtlasOptions {
    fn default() -> Self {
        AtlasOptions {
            bound: DEFAULT_MULTIPLICITY_BOUND,
            radius: None,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Atlas {
    fan: Fan,
    charts: Vec<Chart>,
    overlaps: Vec<Overlap>,
    transitions: Vec<Transition>,
    certificates: Vec<PairCertificates>,
    consistency: Consistency,
}

fn collect<T, U, F>(items: &[T], parallel: bool, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

pub fn build_atlas(fan: &Fan) -> Result<Atlas> {
    build_atlas_with(fan, AtlasOptions::default())
}

pub fn build_atlas_with(fan: &Fan, options: AtlasOptions) -> Result<Atlas> {
    let charts: Vec<Chart> = collect(fan.cones(), options.parallel, |c| Chart::new(c.id.clone(), &c.cone))?;
    let n = charts.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();

    let overlaps: Vec<(Overlap, bool)> = collect(&pairs, options.parallel, |&(i, j)| overlap(fan, &charts, i, j, options.bound))?;
    let localizations_agree = overlaps.iter().all(|(_, agree)| *agree);
    let overlaps: Vec<Overlap> = overlaps.into_iter().map(|(o, _)| o).collect();

    let transitions: Vec<Vec<Transition>> = collect(&overlaps, options.parallel, |o| {
        Ok(vec![
            transition(&charts, o.pair.0, o.tau)?,
            transition(&charts, o.pair.1, o.tau)?,
        ])
    })?;
    let transitions: Vec<Transition> = transitions
        .into_iter()
        .zip(&overlaps)
        .flat_map(|(mut t, o)| {
            t[0].to = charts[o.pair.1].cone_id.clone();
            t[1].to = charts[o.pair.0].cone_id.clone();
            t
        })
        .collect();

    let certificates = collect(&overlaps, options.parallel, |o| {
        let (a, b) = (&charts[o.pair.0], &charts[o.pair.1]);
        let certificates = sum_covers(&a.semigroup, &b.semigroup, &o.semigroup, options.radius).map_err(|e| match e {
            ToricError::Inconclusive(msg) => {
                ToricError::Inconclusive(format!("pair ({}, {}): {msg}", a.cone_id, b.cone_id))
            }
            other => other,
        })?;
        Ok(PairCertificates {
            pair: (a.cone_id.clone(), b.cone_id.clone()),
            certificates,
        })
    })?;

    let consistency = Consistency {
        localizations_agree,
        transitions_round_trip: round_trips(&charts, &overlaps)?,
        triple_intersections_associate: triples_associate(fan, &charts),
        functorial: fan
            .face_relations()
            .keys()
            .all(|&(face, cone)| charts[cone].semigroup.is_subsemigroup_of(&charts[face].semigroup)),
    };
    if !consistency.holds() {
        return Err(ToricError::internal(format!("atlas is inconsistent: {consistency:?}")));
    }
    Ok(Atlas {
        fan: fan.clone(),
        charts,
        overlaps,
        transitions,
        certificates,
        consistency,
    })
}

/// Localizes both charts at their witnesses for `τ = σ_i ∩ σ_j` and checks
/// that the two localizations and the chart of `τ` coincide.
fn overlap(fan: &Fan, charts: &[Chart], i: usize, j: usize, bound: u32) -> Result<(Overlap, bool)> {
    let meet = charts[i].cone.intersect(&charts[j].cone)?;
    let tau = fan
        .index_of(&meet)
        .ok_or_else(|| ToricError::internal(format!("intersection {} missing from the fan", meet.label())))?;
    let witness = |k: usize| {
        face_witness_with(&meet, &charts[k].cone, charts[k].generators())
            .ok_or_else(|| ToricError::internal("intersection is not a face"))
    };
    let (wi, wj) = (witness(i)?, witness(j)?);
    let li = charts[i].semigroup.face_localization(&wi, bound)?;
    let lj = charts[j].semigroup.face_localization(&wj, bound)?;
    let agree = li.semigroup == lj.semigroup && li.semigroup == *charts[tau].semigroup;
    Ok((
        Overlap {
            pair: (i, j),
            tau,
            witness_first: wi,
            witness_second: wj,
            semigroup: charts[tau].semigroup.clone(),
        },
        agree,
    ))
}

fn express(columns: &[LatticeVector], w: &LatticeVector) -> Result<Vec<i64>> {
    solve_integer(columns, w)?
        .ok_or_else(|| ToricError::internal(format!("{w} is not an integer combination of the chart generators")))
}

fn transition(charts: &[Chart], from: usize, tau: usize) -> Result<Transition> {
    let exponents = charts[tau]
        .generators()
        .iter()
        .map(|w| express(charts[from].generators(), w))
        .collect::<Result<_>>()?;
    Ok(Transition {
        from: charts[from].cone_id.clone(),
        to: String::new(),
        tau: charts[tau].cone_id.clone(),
        exponents,
    })
}

fn evaluate(gens: &[LatticeVector], k: &[i64], rank: usize) -> LatticeVector {
    gens.iter()
        .zip(k)
        .fold(LatticeVector::zero(rank), |acc, (g, &c)| &acc + &g.scale(c))
}

/// Each overlap generator, written in chart A's monomials, then rewritten
/// through chart B's monomials, must come back to itself.
fn round_trips(charts: &[Chart], overlaps: &[Overlap]) -> Result<bool> {
    for o in overlaps {
        let (a, b) = (&charts[o.pair.0], &charts[o.pair.1]);
        let rank = a.cone.rank();
        let a_in_b: Vec<Vec<i64>> = a.generators().iter().map(|g| express(b.generators(), g)).collect::<Result<_>>()?;
        for w in o.semigroup.generators() {
            let ka = express(a.generators(), w)?;
            let mut kb = vec![0i64; b.generators().len()];
            for (coeff, row) in ka.iter().zip(&a_in_b) {
                for (slot, x) in kb.iter_mut().zip(row) {
                    *slot += coeff * x;
                }
            }
            if evaluate(a.generators(), &ka, rank) != *w || evaluate(b.generators(), &kb, rank) != *w {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn triples_associate(fan: &Fan, charts: &[Chart]) -> bool {
    let n = charts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let meet = |a: &Cone, b: &Cone| a.intersect(b).ok();
                let (ci, cj, ck) = (&charts[i].cone, &charts[j].cone, &charts[k].cone);
                let left = meet(ci, cj).and_then(|ij| meet(&ij, ck));
                let right = meet(cj, ck).and_then(|jk| meet(ci, &jk));
                match (left, right) {
                    (Some(l), Some(r)) if l == r => match fan.index_of(&l) {
                        Some(t) if charts[t].semigroup.cone().dual() == l => {}
                        _ => return false,
                    },
                    _ => return false,
                }
            }
        }
    }
    true
}

impl Atlas {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, id: &str) -> Option<&Chart> {
        self.fan.find(id).map(|i| &self.charts[i])
    }

    pub fn overlaps(&self) -> &[Overlap] {
        &self.overlaps
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn certificates(&self) -> &[PairCertificates] {
        &self.certificates
    }

    pub fn consistency(&self) -> Consistency {
        self.consistency
    }

    pub fn overlap(&self, a: &str, b: &str) -> Option<&Overlap> {
        let (i, j) = (self.fan.find(a)?, self.fan.find(b)?);
        let key = (i.min(j), i.max(j));
        self.overlaps.iter().find(|o| o.pair == key)
    }

    pub fn to_json(&self) -> AtlasJson {
        let id = |k: usize| self.charts[k].cone_id.clone();
        AtlasJson {
            rank: self.fan.rank(),
            charts: self
                .charts
                .iter()
                .map(|c| ChartJson {
                    id: c.cone_id.clone(),
                    rays: c.cone.rays().to_vec(),
                    generators: c.generators().to_vec(),
                    labels: c.labels.clone(),
                })
                .collect(),
            overlaps: self
                .overlaps
                .iter()
                .map(|o| OverlapJson {
                    pair: (id(o.pair.0), id(o.pair.1)),
                    tau: id(o.tau),
                    witnesses: (o.witness_first.clone(), o.witness_second.clone()),
                    generators: o.semigroup.generators().to_vec(),
                })
                .collect(),
            transitions: self.transitions.clone(),
            certificates: self.certificates.clone(),
            consistency: self.consistency,
        }
    }
}

/// Monomial expressions of the generators of `S_τ`, `τ = from ∩ to`, over
/// the generators of `from`.
pub fn transition_expression(atlas: &Atlas, from: &str, to: &str) -> Result<Vec<(LatticeVector, Vec<i64>)>> {
    let a = atlas
        .chart(from)
        .ok_or_else(|| ToricError::domain(format!("no chart {from}")))?;
    let b = atlas.chart(to).ok_or_else(|| ToricError::domain(format!("no chart {to}")))?;
    let meet = a.cone.intersect(&b.cone)?;
    let tau = atlas
        .fan
        .index_of(&meet)
        .ok_or_else(|| ToricError::internal("intersection missing from the fan"))?;
    atlas.charts[tau]
        .generators()
        .iter()
        .map(|w| Ok((w.clone(), express(a.generators(), w)?)))
        .collect()
}

/// Recomputes the separatedness certificates of every chart pair and checks
/// each one.
pub fn separatedness_check(atlas: &Atlas, radius: Option<i64>) -> Result<Vec<PairCertificates>> {
    atlas
        .overlaps
        .iter()
        .map(|o| {
            let (a, b) = (&atlas.charts[o.pair.0], &atlas.charts[o.pair.1]);
            let certificates = sum_covers(&a.semigroup, &b.semigroup, &o.semigroup, radius)?;
            if !certificates.iter().all(|c| c.verify(&a.semigroup, &b.semigroup)) {
                return Err(ToricError::internal("certificate does not verify"));
            }
            Ok(PairCertificates {
                pair: (a.cone_id.clone(), b.cone_id.clone()),
                certificates,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartJson {
    pub id: String,
    pub rays: Vec<LatticeVector>,
    pub generators: Vec<LatticeVector>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapJson {
    pub pair: (String, String),
    pub tau: String,
    pub witnesses: (LatticeVector, LatticeVector),
    pub generators: Vec<LatticeVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasJson {
    pub rank: usize,
    pub charts: Vec<ChartJson>,
    pub overlaps: Vec<OverlapJson>,
    pub transitions: Vec<Transition>,
    pub certificates: Vec<PairCertificates>,
    pub consistency: Consistency,
}

/// Chart generators keyed by cone id.
pub fn chart_generators(atlas: &Atlas) -> BTreeMap<String, Vec<LatticeVector>> {
    atlas
        .charts
        .iter()
        .map(|c| (c.cone_id.clone(), c.generators().to_vec()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{hirzebruch_fan, projective_fan, torus_fan};

    fn v<const N: usize>(c: [i64; N]) -> LatticeVector {
        LatticeVector::from(c)
    }

    #[test]
    fn projective_plane_atlas() {
        let atlas = build_atlas(&projective_fan(2).unwrap()).unwrap();
        assert_eq!(atlas.charts().len(), 7);
        assert_eq!(atlas.overlaps().len(), 21);
        let gens = chart_generators(&atlas);
        assert_eq!(gens["sigma[1,2]"], vec![v([0, 1]), v([1, 0])]);
        assert_eq!(gens["sigma[0,2]"], vec![v([-1, 0]), v([-1, 1])]);
        assert_eq!(gens["sigma[0,1]"], vec![v([0, -1]), v([1, -1])]);
        assert!(atlas.consistency().holds());
    }

    #[test]
    fn transitions_in_the_plane() {
        let atlas = build_atlas(&projective_fan(2).unwrap()).unwrap();
        // overlap of cone(e1,e2) and cone(v0,e2) is the ray through e2;
        // its semigroup is generated by (-1,0), (0,1), (1,0)
        let expr = transition_expression(&atlas, "sigma[1,2]", "sigma[0,2]").unwrap();
        let lookup: BTreeMap<_, _> = expr.into_iter().collect();
        // chart generators are ((0,1), (1,0)) = (X2, X1)
        assert_eq!(lookup[&v([-1, 0])], vec![0, -1]);
        assert_eq!(lookup[&v([0, 1])], vec![1, 0]);
        assert_eq!(lookup[&v([1, 0])], vec![0, 1]);
        // from the other side (-1,1) is a chart generator itself
        let expr = transition_expression(&atlas, "sigma[0,2]", "sigma[1,2]").unwrap();
        let lookup: BTreeMap<_, _> = expr.into_iter().collect();
        assert_eq!(lookup[&v([-1, 0])], vec![1, 0]);
        // (1,0) = -(-1,0), and (0,1) = (-1,1) - (-1,0)
        assert_eq!(lookup[&v([1, 0])], vec![-1, 0]);
        assert_eq!(lookup[&v([0, 1])], vec![-1, 1]);
    }

    #[test]
    fn torus_only() {
        let atlas = build_atlas(&torus_fan(2)).unwrap();
        assert_eq!(atlas.charts().len(), 1);
        assert!(atlas.certificates().is_empty());
        assert!(separatedness_check(&atlas, None).unwrap().is_empty());
        let c = torus_chart(2).unwrap();
        assert_eq!(c.generators(), &[v([-1, 0]), v([0, -1]), v([0, 1]), v([1, 0])]);
        assert_eq!(torus_chart(1).unwrap().generators(), &[v([-1]), v([1])]);
        assert_eq!(torus_chart(3).unwrap().generators().len(), 6);
        assert_eq!(c.labels, vec!["X1", "X2", "X3", "X4"]);
    }

    #[test]
    fn hirzebruch_charts() {
        let atlas = build_atlas(&hirzebruch_fan(2).unwrap()).unwrap();
        assert_eq!(atlas.charts().len(), 9);
        let gens = chart_generators(&atlas);
        assert_eq!(gens["sigma3"], vec![v([-2, -1]), v([-1, 0])]);
        assert_eq!(gens["sigma4"], vec![v([-1, 0]), v([2, 1])]);
    }

    #[test]
    fn certificates_verify() {
        let atlas = build_atlas(&projective_fan(2).unwrap()).unwrap();
        for pc in separatedness_check(&atlas, None).unwrap() {
            let a = atlas.chart(&pc.pair.0).unwrap();
            let b = atlas.chart(&pc.pair.1).unwrap();
            for c in &pc.certificates {
                assert!(c.verify(&a.semigroup, &b.semigroup));
            }
            if b.cone.contains_cone(&a.cone) {
                assert!(pc.certificates.iter().all(|c| c.sigma_part == c.generator));
            }
        }
        // the pair cone(v0,e2), cone(v0,e1) meets along the ray through v0
        let pc = atlas
            .certificates()
            .iter()
            .find(|pc| pc.pair == ("sigma[0,2]".to_string(), "sigma[0,1]".to_string()))
            .unwrap();
        let find = |w: [i64; 2]| pc.certificates.iter().find(|c| c.generator == v(w)).unwrap();
        assert_eq!(find([1, -1]).sigma_part, v([0, 0]));
        assert_eq!(find([1, -1]).tau_part, v([1, -1]));
        assert_eq!(find([-1, 1]).sigma_part, v([-1, 1]));
        assert_eq!(find([-1, 1]).tau_part, v([0, 0]));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let fan = hirzebruch_fan(3).unwrap();
        let par = build_atlas_with(&fan, AtlasOptions::default()).unwrap();
        let ser = build_atlas_with(
            &fan,
            AtlasOptions {
                parallel: false,
                ..AtlasOptions::default()
            },
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&par.to_json()).unwrap(),
            serde_json::to_string(&ser.to_json()).unwrap()
        );
    }
}
