//! The affine semigroups `S_σ = σ∨ ∩ M` and the combinatorics built on them:
//! minimal generators, membership and decomposition certificates, face
//! localization, covering certificates for overlaps, a monomial order, and
//! degree-bounded binomial relations.

mod decompose;
mod hilbert;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use decompose::{Decomposer, Decomposition};

use crate::cone::Cone;
use crate::error::{Result, ToricError};
use crate::lattice::{check_rank, rank_of, rational_coordinates, LatticeVector};

/// Default multiplicity bound for decomposition searches.
pub const DEFAULT_MULTIPLICITY_BOUND: u32 = 12;

/// `C ∩ M` for a rational cone `C`, together with its canonical minimal
/// generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSemigroup {
    rank: usize,
    cone: Cone,
    generators: Vec<LatticeVector>,
}

impl AffineSemigroup {
    /// Lattice points of an arbitrary rational cone.
    pub fn of_cone(cone: &Cone) -> Result<AffineSemigroup> {
        Ok(AffineSemigroup {
            rank: cone.rank(),
            cone: cone.clone(),
            generators: hilbert::minimal_generators(cone)?,
        })
    }

    /// The torus semigroup: all of `M`.
    pub fn lattice(rank: usize) -> AffineSemigroup {
        AffineSemigroup::of_cone(&Cone::whole_space(rank)).expect("whole space")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The cone this semigroup lives in (`σ∨` for `S_σ`).
    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    /// `u ∈ S`, i.e. `u` satisfies every facet inequality of the cone.
    pub fn contains(&self, u: &LatticeVector) -> bool {
        self.cone.contains(u)
    }

    /// Every generator of `self` lies in `other`.
    pub fn is_subsemigroup_of(&self, other: &AffineSemigroup) -> bool {
        self.rank == other.rank && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn decomposer(&self) -> Result<Decomposer> {
        Decomposer::new(self.rank, &self.generators)
    }

    pub fn decompose(&self, u: &LatticeVector, bound: u32) -> Result<Option<Decomposition>> {
        check_rank(u, self.rank)?;
        if !self.contains(u) {
            return Ok(None);
        }
        self.decomposer()?.decompose(u, bound)
    }

    /// Semigroup of the face `τ = σ ∩ u⊥`, where this semigroup is `S_σ`.
    ///
    /// The result is computed from `τ` directly and then checked against
    /// `S_τ = S_σ + Z≥0(−u)`: every generator `w` of `S_τ` gets a certificate
    /// `w = s − k·u` with `s ∈ S_σ`, `k ≤ bound`.
    pub fn face_localization(&self, u: &LatticeVector, bound: u32) -> Result<Localization> {
        check_rank(u, self.rank)?;
        if !self.contains(u) {
            return Err(ToricError::domain(format!("{u} is not in the semigroup")));
        }
        let sigma = self.cone.dual();
        let tau = sigma.intersect(&Cone::hyperplane(u))?;
        let semigroup = AffineSemigroup::of_cone(&tau.dual())?;
        let mut certificates = Vec::with_capacity(semigroup.generators.len());
        for w in &semigroup.generators {
            let shift = (0..=bound as i64)
                .find(|&k| self.contains(&(w + &u.scale(k))))
                .ok_or_else(|| {
                    ToricError::inconclusive(format!(
                        "no certificate {w} = s - k·{u} with k <= {bound}"
                    ))
                })?;
            certificates.push(LocalizationCertificate {
                generator: w.clone(),
                shift: shift as u32,
                base: w + &u.scale(shift),
            });
        }
        Ok(Localization {
            witness: u.clone(),
            semigroup,
            certificates,
        })
    }

    /// Deterministic `Q`-basis of `M_Q` drawn from the generators: scan the
    /// canonical generator list and keep each vector that raises the rank.
    pub fn order_basis(&self) -> Result<Vec<LatticeVector>> {
        let mut basis: Vec<LatticeVector> = Vec::with_capacity(self.rank);
        for g in &self.generators {
            basis.push(g.clone());
            if rank_of(&basis) < basis.len() {
                basis.pop();
            } else if basis.len() == self.rank {
                return Ok(basis);
            }
        }
        Err(ToricError::internal(format!(
            "generators span rank {} < {}",
            basis.len(),
            self.rank
        )))
    }

    pub fn binomial_relations(&self, degree_bound: u32) -> Vec<BinomialRelation> {
        binomial_relations(&self.generators, degree_bound)
    }
}

/// `S_σ` for a strongly convex cone `σ`.
pub fn semigroup_of_cone(sigma: &Cone) -> Result<AffineSemigroup> {
    if !sigma.is_strongly_convex() {
        return Err(ToricError::domain(format!("{} is not strongly convex", sigma.label())));
    }
    AffineSemigroup::of_cone(&sigma.dual())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationCertificate {
    pub generator: LatticeVector,
    /// `k` in `generator = base − k·u`.
    pub shift: u32,
    pub base: LatticeVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub witness: LatticeVector,
    pub semigroup: AffineSemigroup,
    pub certificates: Vec<LocalizationCertificate>,
}

/// `w = s + t` with `s ∈ S_σ`, `t ∈ S_τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverCertificate {
    pub generator: LatticeVector,
    pub sigma_part: LatticeVector,
    pub tau_part: LatticeVector,
}

impl CoverCertificate {
    pub fn verify(&self, s_sigma: &AffineSemigroup, s_tau: &AffineSemigroup) -> bool {
        s_sigma.contains(&self.sigma_part)
            && s_tau.contains(&self.tau_part)
            && &self.sigma_part + &self.tau_part == self.generator
    }
}

/// Default box radius for [`sum_covers`]: largest target coordinate plus the
/// largest coordinate of every generator of the two factors.
pub fn default_cover_radius(s_sigma: &AffineSemigroup, s_tau: &AffineSemigroup, s_rho: &AffineSemigroup) -> i64 {
    let target = s_rho.generators.iter().map(LatticeVector::max_abs).max().unwrap_or(0);
    let gens: i64 = s_sigma
        .generators
        .iter()
        .chain(&s_tau.generators)
        .map(LatticeVector::max_abs)
        .sum();
    (target + gens).max(1)
}

/// Certificates that `S_σ + S_τ` contains every generator of `S_ρ`, where
/// `ρ = σ ∩ τ`. The splits `w = w + 0` and `w = 0 + w` are tried first,
/// then lattice points of growing max-norm. The decomposition exists for every fan pair, so a search
/// that comes up empty at radius `r`, `2r` and `4r` is reported as
/// inconclusive rather than as a refutation.
pub fn sum_covers(
    s_sigma: &AffineSemigroup,
    s_tau: &AffineSemigroup,
    s_rho: &AffineSemigroup,
    radius: Option<i64>,
) -> Result<Vec<CoverCertificate>> {
    let expected = s_sigma.cone.sum(&s_tau.cone)?;
    if expected != s_rho.cone {
        return Err(ToricError::domain(
            "third semigroup is not the semigroup of the intersection of the first two cones",
        ));
    }
    let radius = radius.unwrap_or_else(|| default_cover_radius(s_sigma, s_tau, s_rho));
    s_rho
        .generators
        .iter()
        .map(|w| {
            let zero = LatticeVector::zero(w.rank());
            for s in [w, &zero] {
                if s_sigma.contains(s) && s_tau.contains(&(w - s)) {
                    return Ok(CoverCertificate {
                        generator: w.clone(),
                        tau_part: w - s,
                        sigma_part: s.clone(),
                    });
                }
            }
            let mut searched = 1;
            for r in [radius, 2 * radius, 4 * radius] {
                if let Some(s) = find_cover(s_sigma, s_tau, w, searched, r) {
                    return Ok(CoverCertificate {
                        generator: w.clone(),
                        tau_part: w - &s,
                        sigma_part: s,
                    });
                }
                searched = r + 1;
            }
            Err(ToricError::inconclusive(format!(
                "no cover of {w} found within radius {}",
                4 * radius
            )))
        })
        .collect()
}

fn find_cover(
    s_sigma: &AffineSemigroup,
    s_tau: &AffineSemigroup,
    w: &LatticeVector,
    from: i64,
    to: i64,
) -> Option<LatticeVector> {
    (from..=to).find_map(|r| {
        shell(s_sigma.rank, r)
            .into_iter()
            .find(|s| s_sigma.contains(s) && s_tau.contains(&(w - s)))
    })
}

/// Lattice points with max-norm exactly `r`, ordered by 1-norm, then
/// lexicographically.
fn shell(rank: usize, r: i64) -> Vec<LatticeVector> {
    if r == 0 {
        return vec![LatticeVector::zero(rank)];
    }
    let mut out = Vec::new();
    let mut x = vec![-r; rank];
    loop {
        if x.iter().any(|c| c.abs() == r) {
            out.push(LatticeVector::new(x.clone()));
        }
        let mut k = rank;
        loop {
            if k == 0 {
                out.sort_by(|a, b| a.l1().cmp(&b.l1()).then_with(|| a.cmp(b)));
                return out;
            }
            k -= 1;
            if x[k] < r {
                x[k] += 1;
                break;
            }
            x[k] = -r;
        }
    }
}

/// Compares `u` and `v` by their coordinates in `basis`, lexicographically.
pub fn term_order_compare(basis: &[LatticeVector], u: &LatticeVector, v: &LatticeVector) -> Result<Ordering> {
    let n = u.rank();
    check_rank(v, n)?;
    if basis.len() != n || rank_of(basis) != n {
        return Err(ToricError::domain("order basis is not a basis"));
    }
    let a = rational_coordinates(basis, u).ok_or_else(|| ToricError::domain("order basis is not a basis"))?;
    let b = rational_coordinates(basis, v).ok_or_else(|| ToricError::domain("order basis is not a basis"))?;
    Ok(a.cmp(&b))
}

/// Precomputed form of [`term_order_compare`] for repeated comparisons.
#[derive(Clone, Debug)]
pub struct TermOrder {
    basis: Vec<LatticeVector>,
}

impl TermOrder {
    pub fn new(basis: Vec<LatticeVector>) -> Result<TermOrder> {
        let n = basis.first().map(LatticeVector::rank).unwrap_or(0);
        if basis.len() != n || rank_of(&basis) != n {
            return Err(ToricError::domain("order basis is not a basis"));
        }
        Ok(TermOrder { basis })
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    pub fn key(&self, u: &LatticeVector) -> Vec<num_rational::BigRational> {
        rational_coordinates(&self.basis, u).expect("basis spans the lattice")
    }

    pub fn compare(&self, u: &LatticeVector, v: &LatticeVector) -> Ordering {
        self.key(u).cmp(&self.key(v))
    }
}

/// `Π ζ_i^{left_i} = Π ζ_i^{right_i}`, with `left` lexicographically greater.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BinomialRelation {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

/// Every pair of distinct multiplicity vectors of total degree at most
/// `degree_bound` with equal value.
pub fn binomial_relations(generators: &[LatticeVector], degree_bound: u32) -> Vec<BinomialRelation> {
    let m = generators.len();
    let Some(rank) = generators.first().map(LatticeVector::rank) else {
        return Vec::new();
    };
    let mut by_value: BTreeMap<LatticeVector, Vec<Vec<u32>>> = BTreeMap::new();
    let mut current = vec![0u32; m];
    enumerate_degrees(0, degree_bound, &mut current, &mut |a| {
        let value = a
            .iter()
            .zip(generators)
            .fold(LatticeVector::zero(rank), |acc, (&k, g)| &acc + &g.scale(k as i64));
        by_value.entry(value).or_default().push(a.to_vec());
    });
    let mut out = Vec::new();
    for group in by_value.values() {
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                let (left, right) = if a > b { (a, b) } else { (b, a) };
                out.push(BinomialRelation {
                    left: left.clone(),
                    right: right.clone(),
                });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn enumerate_degrees(pos: usize, budget: u32, current: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if pos == current.len() {
        f(current);
        return;
    }
    for k in 0..=budget {
        current[pos] = k;
        enumerate_degrees(pos + 1, budget - k, current, f);
    }
    current[pos] = 0;
}

#[derive(Serialize, Deserialize)]
struct SemigroupRepr {
    rank: usize,
    cone_rays: Vec<LatticeVector>,
    #[serde(default)]
    cone_lineality: Vec<LatticeVector>,
    #[serde(default)]
    generators: Option<Vec<LatticeVector>>,
}

impl Serialize for AffineSemigroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SemigroupRepr {
            rank: self.rank,
            cone_rays: self.cone.rays().to_vec(),
            cone_lineality: self.cone.lineality().to_vec(),
            generators: Some(self.generators.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineSemigroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SemigroupRepr::deserialize(d)?;
        let cone = Cone::from_generators(repr.rank, &repr.cone_rays, &repr.cone_lineality).map_err(D::Error::custom)?;
        let semigroup = AffineSemigroup::of_cone(&cone).map_err(D::Error::custom)?;
        if let Some(mut given) = repr.generators {
            given.sort();
            if given != semigroup.generators {
                return Err(D::Error::custom("generators do not match the cone's minimal generators"));
            }
        }
        Ok(semigroup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v<const N: usize>(c: [i64; N]) -> LatticeVector {
        LatticeVector::from(c)
    }

    fn cone2(rays: &[[i64; 2]]) -> Cone {
        let rays: Vec<LatticeVector> = rays.iter().map(|r| v(*r)).collect();
        Cone::from_rays(2, &rays).unwrap()
    }

    fn quadrant() -> AffineSemigroup {
        semigroup_of_cone(&cone2(&[[1, 0], [0, 1]])).unwrap()
    }

    #[test]
    fn semigroup_examples() {
        assert_eq!(quadrant().generators(), &[v([0, 1]), v([1, 0])]);
        let s = semigroup_of_cone(&cone2(&[[2, -1], [0, 1]])).unwrap();
        assert_eq!(s.cone().rays(), &[v([1, 0]), v([1, 2])]);
        assert_eq!(s.generators(), &[v([1, 0]), v([1, 1]), v([1, 2])]);
        let s = semigroup_of_cone(&cone2(&[[0, 1]])).unwrap();
        assert_eq!(s.generators(), &[v([-1, 0]), v([0, 1]), v([1, 0])]);
    }

    #[test]
    fn non_strongly_convex_is_rejected() {
        let half = Cone::from_halfspaces(2, &[v([0, 1])]).unwrap();
        assert!(matches!(semigroup_of_cone(&half), Err(ToricError::Domain(_))));
    }

    #[test]
    fn membership() {
        let q = quadrant();
        assert!(q.contains(&v([3, 5])));
        assert!(!q.contains(&v([-1, 0])));
        let s = semigroup_of_cone(&cone2(&[[2, -1], [0, 1]])).unwrap();
        assert!(s.contains(&v([1, 1])));
    }

    #[test]
    fn decompose_examples() {
        let q = quadrant();
        let d = q.decompose(&v([2, 1]), 8).unwrap().unwrap();
        assert_eq!(d.evaluate(q.generators(), 2), v([2, 1]));
        let s = semigroup_of_cone(&cone2(&[[2, -1], [0, 1]])).unwrap();
        let d = s.decompose(&v([2, 2]), 8).unwrap().unwrap();
        assert_eq!(d.multiplicities, BTreeMap::from([(0, 1), (2, 1)]));
        assert_eq!(q.decompose(&v([-1, 0]), 8).unwrap(), None);
    }

    #[test]
    fn localization_examples() {
        let q = quadrant();
        let loc = q.face_localization(&v([1, 0]), 12).unwrap();
        assert_eq!(loc.semigroup.generators(), &[v([-1, 0]), v([0, 1]), v([1, 0])]);
        let neg = loc.certificates.iter().find(|c| c.generator == v([-1, 0])).unwrap();
        assert_eq!((neg.shift, neg.base.clone()), (1, v([0, 0])));
        assert_eq!(q.face_localization(&v([0, 0]), 12).unwrap().semigroup, q);
        let torus = AffineSemigroup::lattice(2);
        for g in torus.generators() {
            assert_eq!(torus.face_localization(g, 12).unwrap().semigroup, torus);
        }
        assert!(matches!(q.face_localization(&v([-1, 0]), 12), Err(ToricError::Domain(_))));
    }

    #[test]
    fn covers_for_projective_plane_pair() {
        let s2 = semigroup_of_cone(&cone2(&[[-1, -1], [0, 1]])).unwrap();
        let s3 = semigroup_of_cone(&cone2(&[[-1, -1], [1, 0]])).unwrap();
        let rho = semigroup_of_cone(&cone2(&[[-1, -1]])).unwrap();
        let certs = sum_covers(&s2, &s3, &rho, None).unwrap();
        assert_eq!(certs.len(), rho.generators().len());
        let find = |w: LatticeVector| certs.iter().find(|c| c.generator == w).unwrap().clone();
        let c = find(v([1, -1]));
        assert_eq!((c.sigma_part, c.tau_part), (v([0, 0]), v([1, -1])));
        let c = find(v([-1, 1]));
        assert_eq!((c.sigma_part, c.tau_part), (v([-1, 1]), v([0, 0])));
        assert!(certs.iter().all(|c| c.verify(&s2, &s3)));
    }

    #[test]
    fn covers_for_identical_cones() {
        let q = quadrant();
        let certs = sum_covers(&q, &q, &q, None).unwrap();
        assert!(certs.iter().all(|c| c.sigma_part == c.generator && c.tau_part.is_zero()));
    }

    #[test]
    fn covers_reject_wrong_intersection() {
        let q = quadrant();
        let torus = AffineSemigroup::lattice(2);
        assert!(matches!(sum_covers(&q, &q, &torus, None), Err(ToricError::Domain(_))));
    }

    #[test]
    fn term_order_examples() {
        let e = [v([1, 0]), v([0, 1])];
        assert_eq!(term_order_compare(&e, &v([0, 1]), &v([1, 0])).unwrap(), Ordering::Less);
        assert_eq!(term_order_compare(&e, &v([1, 0]), &v([1, 0])).unwrap(), Ordering::Equal);
        let b = [v([1, 1]), v([1, 2])];
        assert_eq!(term_order_compare(&b, &v([2, 3]), &v([3, 4])).unwrap(), Ordering::Less);
        assert!(term_order_compare(&[v([1, 1]), v([2, 2])], &v([1, 0]), &v([0, 1])).is_err());
    }

    #[test]
    fn order_basis_examples() {
        assert_eq!(quadrant().order_basis().unwrap(), vec![v([0, 1]), v([1, 0])]);
        let s = semigroup_of_cone(&cone2(&[[2, -1], [0, 1]])).unwrap();
        assert_eq!(s.order_basis().unwrap(), vec![v([1, 0]), v([1, 1])]);
        assert_eq!(AffineSemigroup::lattice(2).order_basis().unwrap(), vec![v([-1, 0]), v([0, -1])]);
    }

    #[test]
    fn relation_examples() {
        let r = binomial_relations(&[v([1, 0]), v([1, 1]), v([1, 2])], 2);
        assert_eq!(
            r,
            vec![BinomialRelation {
                left: vec![1, 0, 1],
                right: vec![0, 2, 0]
            }]
        );
        assert!(quadrant().binomial_relations(3).is_empty());
        let r = binomial_relations(&[v([1, 0]), v([-1, 0]), v([0, 1])], 2);
        assert_eq!(
            r,
            vec![BinomialRelation {
                left: vec![1, 1, 0],
                right: vec![0, 0, 0]
            }]
        );
    }

    #[test]
    fn shells_are_ordered() {
        let s = shell(2, 1);
        assert_eq!(s.len(), 8);
        assert_eq!(s[0], v([-1, 0]));
        assert_eq!(s.last().unwrap(), &v([1, 1]));
    }

    #[test]
    fn serde_checks_generators() {
        let s = semigroup_of_cone(&cone2(&[[2, -1], [0, 1]])).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"rank":2,"cone_rays":[[1,0],[1,2]],"cone_lineality":[],"generators":[[1,0],[1,1],[1,2]]}"#
        );
        let back: AffineSemigroup = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"rank":2,"cone_rays":[[1,0],[1,2]],"generators":[[1,0],[1,2]]}"#;
        assert!(serde_json::from_str::<AffineSemigroup>(bad).is_err());
    }
}
