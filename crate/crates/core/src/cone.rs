//! Rational polyhedral cones held in a canonical dual form.
//!
//! A [`Cone`] stores both its generators (extreme rays of the pointed part plus
//! a basis of the lineality lattice) and the same data for its dual cone,
//! which doubles as the facet description `{x : ⟨normal, x⟩ ≥ 0}`. All lists
//! are primitive and lexicographically sorted, so two cones are equal as
//! values exactly when they are equal as sets.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ToricError};
use crate::lattice::{check_ranks, integer_kernel_basis, rank_of, LatticeVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    rank: usize,
    rays: Vec<LatticeVector>,
    lineality: Vec<LatticeVector>,
    dual_rays: Vec<LatticeVector>,
    dual_lineality: Vec<LatticeVector>,
}

/// Extreme rays and lineality basis of `{x ∈ Q^rank : ⟨a, x⟩ ≥ 0 ∀ a ∈ normals}`.
///
/// The lineality space `L` is the common kernel of the normals; the returned
/// rays are the extreme rays of the pointed cone obtained by intersecting with
/// the orthogonal complement of `L`. Computed by incremental double
/// description from an initial simplicial cone, in exact integer arithmetic.
pub fn extreme_rays_from_halfspaces(
    normals: &[LatticeVector],
    rank: usize,
) -> Result<(Vec<LatticeVector>, Vec<LatticeVector>)> {
    check_ranks(normals, rank)?;
    let normals: Vec<LatticeVector> = normals.iter().filter(|a| !a.is_zero()).cloned().collect();
    let lineality = integer_kernel_basis(&normals, rank)?;
    let dim = rank - lineality.len();
    if dim == 0 {
        return Ok((Vec::new(), lineality));
    }

    // Greedily pick `dim` independent normals for the starting simplicial cone.
    let mut basis_idx: Vec<usize> = Vec::with_capacity(dim);
    let mut chosen: Vec<LatticeVector> = Vec::with_capacity(dim);
    for (i, a) in normals.iter().enumerate() {
        chosen.push(a.clone());
        if rank_of(&chosen) == chosen.len() {
            basis_idx.push(i);
            if basis_idx.len() == dim {
                break;
            }
        } else {
            chosen.pop();
        }
    }
    debug_assert_eq!(basis_idx.len(), dim);

    let mut rays: Vec<LatticeVector> = Vec::with_capacity(dim);
    for &j in &basis_idx {
        let mut rows: Vec<LatticeVector> = basis_idx
            .iter()
            .filter(|&&i| i != j)
            .map(|&i| normals[i].clone())
            .collect();
        rows.extend(lineality.iter().cloned());
        let line = integer_kernel_basis(&rows, rank)?;
        let [r] = line.as_slice() else {
            return Err(ToricError::internal("simplicial start is not one-dimensional"));
        };
        rays.push(if normals[j].dot(r) > 0 { r.clone() } else { -r });
    }

    let mut processed: Vec<LatticeVector> = basis_idx.iter().map(|&i| normals[i].clone()).collect();
    for (i, a) in normals.iter().enumerate() {
        if basis_idx.contains(&i) {
            continue;
        }
        let values: Vec<i64> = rays.iter().map(|r| a.dot(r)).collect();
        if values.iter().all(|&x| x >= 0) {
            processed.push(a.clone());
            continue;
        }
        let mut next: Vec<LatticeVector> = rays
            .iter()
            .zip(&values)
            .filter(|(_, &x)| x >= 0)
            .map(|(r, _)| r.clone())
            .collect();
        if dim >= 2 {
            for (p, &vp) in rays.iter().zip(&values) {
                if vp <= 0 {
                    continue;
                }
                for (q, &vq) in rays.iter().zip(&values) {
                    if vq >= 0 || !adjacent(p, q, &processed, dim) {
                        continue;
                    }
                    let combo = &q.scale(vp) - &p.scale(vq);
                    if let Some(prim) = combo.primitive() {
                        next.push(prim);
                    }
                }
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(a.clone());
    }
    rays.sort();
    rays.dedup();
    Ok((rays, lineality))
}

fn adjacent(p: &LatticeVector, q: &LatticeVector, processed: &[LatticeVector], dim: usize) -> bool {
    let common: Vec<LatticeVector> = processed
        .iter()
        .filter(|a| a.dot(p) == 0 && a.dot(q) == 0)
        .cloned()
        .collect();
    common.len() + 2 >= dim && rank_of(&common) == dim - 2
}

fn with_negatives(vs: &[LatticeVector]) -> impl Iterator<Item = LatticeVector> + '_ {
    vs.iter().flat_map(|v| [v.clone(), -v])
}

impl Cone {
    /// The cone generated by `rays` plus the linear span of `lineality`.
    /// Inputs need not be primitive, extreme or distinct.
    pub fn from_generators(
        rank: usize,
        rays: &[LatticeVector],
        lineality: &[LatticeVector],
    ) -> Result<Cone> {
        check_ranks(rays.iter().chain(lineality), rank)?;
        let gens: Vec<LatticeVector> = rays.iter().cloned().chain(with_negatives(lineality)).collect();
        let (dual_rays, dual_lineality) = extreme_rays_from_halfspaces(&gens, rank)?;
        let normals: Vec<LatticeVector> = dual_rays.iter().cloned().chain(with_negatives(&dual_lineality)).collect();
        let (rays, lineality) = extreme_rays_from_halfspaces(&normals, rank)?;
        Ok(Cone {
            rank,
            rays,
            lineality,
            dual_rays,
            dual_lineality,
        })
    }

    pub fn from_rays(rank: usize, rays: &[LatticeVector]) -> Result<Cone> {
        Cone::from_generators(rank, rays, &[])
    }

    /// `{x : ⟨a, x⟩ ≥ 0 for every a in normals}`.
    pub fn from_halfspaces(rank: usize, normals: &[LatticeVector]) -> Result<Cone> {
        let (rays, lineality) = extreme_rays_from_halfspaces(normals, rank)?;
        let gens: Vec<LatticeVector> = rays.iter().cloned().chain(with_negatives(&lineality)).collect();
        let (dual_rays, dual_lineality) = extreme_rays_from_halfspaces(&gens, rank)?;
        Ok(Cone {
            rank,
            rays,
            lineality,
            dual_rays,
            dual_lineality,
        })
    }

    pub fn zero(rank: usize) -> Cone {
        Cone::from_rays(rank, &[]).expect("the zero cone is well formed")
    }

    pub fn whole_space(rank: usize) -> Cone {
        Cone::from_halfspaces(rank, &[]).expect("the whole space is well formed")
    }

    /// The hyperplane `u⊥` as a cone (the whole space when `u = 0`).
    pub fn hyperplane(u: &LatticeVector) -> Cone {
        Cone::from_halfspaces(u.rank(), &[u.clone(), -u]).expect("ranks agree")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    /// Extreme rays of the pointed part of the dual cone.
    pub fn dual_rays(&self) -> &[LatticeVector] {
        &self.dual_rays
    }

    pub fn dual_lineality(&self) -> &[LatticeVector] {
        &self.dual_lineality
    }

    /// Facet normals: the dual rays plus both signs of each dual lineality
    /// vector, sorted.
    pub fn normals(&self) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> = self
            .dual_rays
            .iter()
            .cloned()
            .chain(with_negatives(&self.dual_lineality))
            .collect();
        out.sort();
        out
    }

    /// Rays plus both signs of every lineality vector.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> =
            self.rays.iter().cloned().chain(with_negatives(&self.lineality)).collect();
        out.sort();
        out
    }

    pub fn dim(&self) -> usize {
        self.rank - self.dual_lineality.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dual_lineality.is_empty()
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        v.rank() == self.rank
            && self.dual_rays.iter().all(|a| a.dot(v) >= 0)
            && self.dual_lineality.iter().all(|a| a.dot(v) == 0)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rank == self.rank
            && other.rays.iter().all(|r| self.contains(r))
            && other.lineality.iter().all(|l| self.contains(l) && self.contains(&-l))
    }

    /// `σ∨ = {u : ⟨u, v⟩ ≥ 0 ∀ v ∈ σ}`. Its facet description is this cone's
    /// generators; its generators are recomputed by double description.
    pub fn dual(&self) -> Cone {
        let (rays, lineality) = extreme_rays_from_halfspaces(&self.generators(), self.rank)
            .expect("generators share the cone's rank");
        Cone {
            rank: self.rank,
            rays,
            lineality,
            dual_rays: self.rays.clone(),
            dual_lineality: self.lineality.clone(),
        }
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        self.check_same_rank(other)?;
        let mut normals = self.normals();
        normals.extend(other.normals());
        normals.sort();
        normals.dedup();
        Cone::from_halfspaces(self.rank, &normals)
    }

    /// Minkowski sum.
    pub fn sum(&self, other: &Cone) -> Result<Cone> {
        self.check_same_rank(other)?;
        let rays: Vec<LatticeVector> = self.rays.iter().chain(&other.rays).cloned().collect();
        let lin: Vec<LatticeVector> = self.lineality.iter().chain(&other.lineality).cloned().collect();
        Cone::from_generators(self.rank, &rays, &lin)
    }

    fn check_same_rank(&self, other: &Cone) -> Result<()> {
        if self.rank != other.rank {
            return Err(ToricError::Dimension {
                expected: self.rank,
                found: other.rank,
            });
        }
        Ok(())
    }

    /// All faces, from `{0}` (or the lineality space) up to the cone itself,
    /// in canonical order.
    pub fn faces(&self) -> Vec<Cone> {
        let all: BTreeSet<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut stack = vec![all];
        while let Some(set) = stack.pop() {
            if !seen.insert(set.clone()) {
                continue;
            }
            for a in &self.dual_rays {
                let sub: BTreeSet<usize> = set.iter().copied().filter(|&i| a.dot(&self.rays[i]) == 0).collect();
                if sub.len() < set.len() && !seen.contains(&sub) {
                    stack.push(sub);
                }
            }
        }
        let mut faces: Vec<Cone> = seen
            .into_iter()
            .map(|set| {
                let rays: Vec<LatticeVector> = set.into_iter().map(|i| self.rays[i].clone()).collect();
                Cone::from_generators(self.rank, &rays, &self.lineality).expect("ranks agree")
            })
            .collect();
        faces.sort();
        faces.dedup();
        faces
    }

    /// Short human-readable form such as `cone[(1,0),(0,1)]`.
    pub fn label(&self) -> String {
        let mut s = String::from("cone[");
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&r.to_string());
        }
        if !self.lineality.is_empty() {
            s.push_str(" + span");
            for l in &self.lineality {
                s.push_str(&l.to_string());
            }
        }
        s.push(']');
        s
    }

    /// Compact canonical ray string, `[[1,0],[0,1]]`.
    pub fn ray_key(&self) -> String {
        serde_json::to_string(&self.rays).expect("vectors serialize")
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank, self.dim(), &self.rays, &self.lineality).cmp(&(
            other.rank,
            other.dim(),
            &other.rays,
            &other.lineality,
        ))
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    rank: usize,
    rays: Vec<LatticeVector>,
    #[serde(default)]
    lineality: Vec<LatticeVector>,
    #[serde(default, skip_deserializing)]
    normals: Vec<LatticeVector>,
}

impl Serialize for Cone {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConeRepr {
            rank: self.rank,
            rays: self.rays.clone(),
            lineality: self.lineality.clone(),
            normals: self.normals(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ConeRepr::deserialize(d)?;
        Cone::from_generators(repr.rank, &repr.rays, &repr.lineality).map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`Cone::dual`].
pub fn dual_cone(sigma: &Cone) -> Cone {
    sigma.dual()
}

pub fn intersect(sigma: &Cone, tau: &Cone) -> Result<Cone> {
    sigma.intersect(tau)
}

pub fn cone_sum(a: &Cone, b: &Cone) -> Result<Cone> {
    a.sum(b)
}

/// Returns `u ∈ σ∨ ∩ M` with `σ ∩ u⊥ = τ` when `τ` is a face of `σ`.
///
/// `u` is the sum of the minimal generators of `S_σ` that vanish on `τ`
/// (zero when `τ = σ`).
pub fn face_witness(tau: &Cone, sigma: &Cone) -> Result<Option<LatticeVector>> {
    if tau.rank() != sigma.rank() {
        return Err(ToricError::Dimension {
            expected: sigma.rank(),
            found: tau.rank(),
        });
    }
    let semigroup = crate::semigroup::AffineSemigroup::of_cone(&sigma.dual())?;
    Ok(face_witness_with(tau, sigma, semigroup.generators()))
}

/// [`face_witness`] with the generators of `S_σ` supplied by the caller.
pub fn face_witness_with(tau: &Cone, sigma: &Cone, semigroup_generators: &[LatticeVector]) -> Option<LatticeVector> {
    if !sigma.contains_cone(tau) {
        return None;
    }
    let tau_gens = tau.generators();
    let u = semigroup_generators
        .iter()
        .filter(|g| tau_gens.iter().all(|v| g.dot(v) == 0))
        .fold(LatticeVector::zero(sigma.rank()), |acc, g| &acc + g);
    let face = sigma.intersect(&Cone::hyperplane(&u)).ok()?;
    (face == *tau).then_some(u)
}

/// Faces of `σ`, canonical and deduplicated.
pub fn faces(sigma: &Cone) -> Vec<Cone> {
    sigma.faces()
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

    #[test]
    fn halfspace_examples() {
        let (r, l) = extreme_rays_from_halfspaces(&[v([1, 0]), v([0, 1])], 2).unwrap();
        assert_eq!((r, l), (vec![v([0, 1]), v([1, 0])], vec![]));
        let (r, l) = extreme_rays_from_halfspaces(&[v([-1, -1]), v([0, 1])], 2).unwrap();
        assert_eq!((r, l), (vec![v([-1, 0]), v([-1, 1])], vec![]));
        let (r, l) = extreme_rays_from_halfspaces(&[v([0, 1])], 2).unwrap();
        assert_eq!((r, l), (vec![v([0, 1])], vec![v([1, 0])]));
    }

    #[test]
    fn infeasible_halfspaces_give_zero_cone() {
        let (r, l) = extreme_rays_from_halfspaces(&[v([1, 0]), v([0, 1]), v([-1, -1])], 2).unwrap();
        assert!(r.is_empty() && l.is_empty());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(cone2(&[[1, 0], [0, 1]]).dual().rays(), &[v([0, 1]), v([1, 0])]);
        assert_eq!(cone2(&[[-1, 2], [0, -1]]).dual().rays(), &[v([-2, -1]), v([-1, 0])]);
        let whole = Cone::zero(2).dual();
        assert!(whole.rays().is_empty());
        assert_eq!(whole.lineality(), &[v([0, 1]), v([1, 0])]);
        assert_eq!(whole, Cone::whole_space(2));
    }

    #[test]
    fn strong_convexity() {
        assert!(cone2(&[[1, 0], [0, 1]]).is_strongly_convex());
        assert!(!Cone::from_halfspaces(2, &[v([0, 1])]).unwrap().is_strongly_convex());
        assert!(cone2(&[[-1, -1], [0, 1]]).is_strongly_convex());
    }

    #[test]
    fn intersections() {
        let q = cone2(&[[1, 0], [0, 1]]);
        assert_eq!(q.intersect(&q).unwrap(), q);
        let s2 = cone2(&[[-1, -1], [0, 1]]);
        let s3 = cone2(&[[-1, -1], [1, 0]]);
        assert_eq!(q.intersect(&s2).unwrap(), cone2(&[[0, 1]]));
        assert_eq!(s2.intersect(&s3).unwrap(), cone2(&[[-1, -1]]));
    }

    #[test]
    fn sums() {
        let a = cone2(&[[1, 0], [0, 1]]);
        let b = cone2(&[[-1, 0], [-1, 1]]);
        let s = a.sum(&b).unwrap();
        assert_eq!(s.rays(), &[v([0, 1])]);
        assert_eq!(s.lineality(), &[v([1, 0])]);
        assert_eq!(a.sum(&Cone::zero(2)).unwrap(), a);
        let line = cone2(&[[1, 0]]).sum(&cone2(&[[-1, 0]])).unwrap();
        assert!(line.rays().is_empty());
        assert_eq!(line.lineality(), &[v([1, 0])]);
    }

    #[test]
    fn witnesses() {
        let q = cone2(&[[1, 0], [0, 1]]);
        assert_eq!(face_witness(&cone2(&[[0, 1]]), &q).unwrap(), Some(v([1, 0])));
        assert_eq!(face_witness(&q, &q).unwrap(), Some(v([0, 0])));
        assert_eq!(face_witness(&cone2(&[[1, 1]]), &q).unwrap(), None);
        assert_eq!(face_witness(&Cone::zero(2), &q).unwrap(), Some(v([1, 1])));
    }

    #[test]
    fn face_lists() {
        let q = cone2(&[[1, 0], [0, 1]]);
        let f = q.faces();
        assert_eq!(f.len(), 4);
        assert_eq!(f[0], Cone::zero(2));
        assert_eq!(f[3], q);
        assert_eq!(cone2(&[[1, 0]]).faces().len(), 2);
        let c = cone2(&[[1, 0], [1, 2]]);
        let f = c.faces();
        assert_eq!(f.len(), 4);
        assert!(f.contains(&cone2(&[[1, 2]])));
        assert!(f.contains(&cone2(&[[1, 0]])));
    }

    #[test]
    fn non_primitive_and_duplicate_inputs_normalize() {
        let a = cone2(&[[2, 0], [0, 3], [1, 0], [1, 1]]);
        assert_eq!(a, cone2(&[[1, 0], [0, 1]]));
    }

    #[test]
    fn serde_roundtrip() {
        let c = cone2(&[[-1, 2], [0, -1]]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"rank":2,"rays":[[-1,2],[0,-1]],"lineality":[],"normals":[[-2,-1],[-1,0]]}"#);
        let back: Cone = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
