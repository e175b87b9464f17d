//! Minimal generating sets of `C ∩ M` for a rational cone `C`.
//!
//! The lineality lattice is split off first; the pointed quotient cone is
//! triangulated, the half-open fundamental parallelepiped of each simplicial
//! piece is enumerated through a Hermite basis of its ray lattice, and a final
//! sweep drops every candidate that is a sum of two nonzero lattice points of
//! the cone.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cone::Cone;
use crate::error::{Result, ToricError};
use crate::lattice::{integer_kernel_basis, rank_of, saturated_basis, solve_integer, LatticeVector};

pub(crate) fn minimal_generators(cone: &Cone) -> Result<Vec<LatticeVector>> {
    let n = cone.rank();
    if cone.is_zero() {
        return Ok(Vec::new());
    }
    // Coordinates on span(C) ∩ M.
    let span = saturated_basis(&cone.generators(), n)?;
    let d = span.len();
    let to_span = |x: &LatticeVector| -> Result<LatticeVector> {
        solve_integer(&span, x)?
            .map(LatticeVector::new)
            .ok_or_else(|| ToricError::internal("cone generator outside its own span"))
    };
    let rays: Vec<LatticeVector> = cone.rays().iter().map(to_span).collect::<Result<_>>()?;
    let lin: Vec<LatticeVector> = cone.lineality().iter().map(to_span).collect::<Result<_>>()?;

    // Quotient map x ↦ Px with kernel exactly the lineality lattice.
    let quotient = integer_kernel_basis(&lin, d)?;
    let e = quotient.len();
    let project = |x: &LatticeVector| LatticeVector::new(quotient.iter().map(|row| row.dot(x)).collect());
    let images: Vec<LatticeVector> = rays.iter().map(|r| project(r).primitive().expect("rays lie off the lineality")).collect();
    let pointed = Cone::from_rays(e, &images)?;
    let hilbert = pointed_hilbert_basis(&pointed)?;

    let columns: Vec<LatticeVector> = (0..d)
        .map(|j| LatticeVector::new(quotient.iter().map(|row| row.coords()[j]).collect()))
        .collect();
    let mut pivoted: Vec<(usize, &LatticeVector)> = cone
        .lineality()
        .iter()
        .map(|l| (l.coords().iter().position(|&c| c != 0).expect("nonzero"), l))
        .collect();
    pivoted.sort_by_key(|(p, _)| *p);

    let mut out: Vec<LatticeVector> = Vec::new();
    for l in cone.lineality() {
        out.push(l.clone());
        out.push(-l);
    }
    for y in &hilbert {
        let x = solve_integer(&columns, y)?
            .ok_or_else(|| ToricError::internal("quotient map is not surjective"))?;
        let mut w = span
            .iter()
            .zip(&x)
            .fold(LatticeVector::zero(n), |acc, (b, &k)| &acc + &b.scale(k));
        for (pc, l) in &pivoted {
            let q = Integer::div_floor(&w.coords()[*pc], &l.coords()[*pc]);
            if q != 0 {
                w = &w - &l.scale(q);
            }
        }
        out.push(w);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Hilbert basis of a pointed, full-dimensional cone.
pub(crate) fn pointed_hilbert_basis(cone: &Cone) -> Result<Vec<LatticeVector>> {
    let e = cone.rank();
    if e == 0 || cone.is_zero() {
        return Ok(Vec::new());
    }
    if !cone.is_full_dimensional() || !cone.is_strongly_convex() {
        return Err(ToricError::internal("pointed Hilbert basis needs a full-dimensional pointed cone"));
    }
    let rays = cone.rays();
    let all: Vec<usize> = (0..rays.len()).collect();
    let simplices = triangulate(cone, &all, e);

    let mut candidates: BTreeSet<LatticeVector> = rays.iter().cloned().collect();
    for simplex in &simplices {
        let gens: Vec<LatticeVector> = simplex.iter().map(|&i| rays[i].clone()).collect();
        candidates.extend(parallelepiped_points(&gens)?);
    }
    candidates.remove(&LatticeVector::zero(e));

    let candidates: Vec<LatticeVector> = candidates.into_iter().collect();
    let minimal = candidates
        .iter()
        .filter(|c| {
            !candidates
                .iter()
                .any(|h| h != *c && cone.contains(&(*c - h)))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

/// Pulling triangulation of the face spanned by `face` (ray indices, of
/// dimension `dim`).
fn triangulate(cone: &Cone, face: &[usize], dim: usize) -> Vec<Vec<usize>> {
    if face.len() == dim {
        return vec![face.to_vec()];
    }
    let rays = cone.rays();
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in cone.dual_rays() {
        let sub: Vec<usize> = face.iter().copied().filter(|&i| a.dot(&rays[i]) == 0).collect();
        if sub.contains(&apex) || sub.len() + 1 < dim {
            continue;
        }
        let vecs: Vec<LatticeVector> = sub.iter().map(|&i| rays[i].clone()).collect();
        if rank_of(&vecs) == dim - 1 {
            facets.insert(sub);
        }
    }
    let mut out = Vec::new();
    for facet in facets {
        for mut simplex in triangulate(cone, &facet, dim - 1) {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
    out
}

/// Lattice points of `{Σ λ_i g_i : 0 ≤ λ_i < 1}` for linearly independent
/// `gens` spanning `Q^e`.
fn parallelepiped_points(gens: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    let e = gens.len();
    let inverse: Vec<Vec<BigRational>> = (0..e)
        .map(|j| {
            crate::lattice::rational_coordinates(gens, &LatticeVector::unit(e, j))
                .ok_or_else(|| ToricError::internal("simplex rays are dependent"))
        })
        .collect::<Result<_>>()?;
    // Residues of Z^e modulo the ray lattice: 0 ≤ x_i < h_i on a triangular basis.
    let diag = lattice_diagonal(gens);
    let mut points = Vec::new();
    let mut x = vec![0i64; e];
    loop {
        let mut lambda: Vec<BigRational> = vec![BigRational::zero(); e];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0 {
                let xj = BigRational::from_integer(xj.into());
                for (i, l) in lambda.iter_mut().enumerate() {
                    *l += &inverse[j][i] * &xj;
                }
            }
        }
        let mut point = vec![BigRational::zero(); e];
        for (i, l) in lambda.iter().enumerate() {
            let frac = l - l.floor();
            if frac.is_zero() {
                continue;
            }
            for (k, p) in point.iter_mut().enumerate() {
                *p += &frac * BigRational::from_integer(gens[i].coords()[k].into());
            }
        }
        let coords: Vec<i64> = point
            .iter()
            .map(|p| {
                debug_assert!(p.is_integer());
                p.to_integer().to_i64().expect("parallelepiped point fits i64")
            })
            .collect();
        points.push(LatticeVector::new(coords));

        // odometer over the residue box
        let mut k = 0;
        loop {
            if k == e {
                return Ok(points);
            }
            x[k] += 1;
            if x[k] < diag[k] {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

fn lattice_diagonal(gens: &[LatticeVector]) -> Vec<i64> {
    // Row Hermite form of the generators; its pivots are the diagonal of a
    // triangular basis of the same lattice (up to coordinate order).
    let e = gens.len();
    let h = crate::lattice::hermite_basis(gens, e).expect("ranks agree");
    let mut diag = vec![1i64; e];
    for row in &h {
        let pc = row.coords().iter().position(|&c| c != 0).expect("nonzero");
        diag[pc] = row.coords()[pc];
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v<const N: usize>(c: [i64; N]) -> LatticeVector {
        LatticeVector::from(c)
    }

    #[test]
    fn parallelepiped_of_a_singular_cone() {
        let pts = parallelepiped_points(&[v([1, 0]), v([1, 2])]).unwrap();
        let mut pts: Vec<_> = pts.into_iter().collect();
        pts.sort();
        assert_eq!(pts, vec![v([0, 0]), v([1, 1])]);
    }

    #[test]
    fn parallelepiped_counts_match_determinant() {
        let pts = parallelepiped_points(&[v([3, 1, 0]), v([0, 2, 1]), v([1, 0, 5])]).unwrap();
        // det = 3*10 - 1*(0 - 1) + 0 = 31
        assert_eq!(pts.len(), 31);
        let set: BTreeSet<_> = pts.into_iter().collect();
        assert_eq!(set.len(), 31);
    }

    #[test]
    fn hilbert_of_singular_cone() {
        let c = Cone::from_rays(2, &[v([1, 0]), v([1, 2])]).unwrap();
        assert_eq!(minimal_generators(&c).unwrap(), vec![v([1, 0]), v([1, 1]), v([1, 2])]);
        let c = Cone::from_rays(2, &[v([1, 0]), v([1, 3])]).unwrap();
        assert_eq!(
            minimal_generators(&c).unwrap(),
            vec![v([1, 0]), v([1, 1]), v([1, 2]), v([1, 3])]
        );
    }

    #[test]
    fn hilbert_with_lineality() {
        let half = Cone::from_halfspaces(2, &[v([0, 1])]).unwrap();
        assert_eq!(minimal_generators(&half).unwrap(), vec![v([-1, 0]), v([0, 1]), v([1, 0])]);
        // half-plane {2x - y >= 0}: lineality (1,2); quotient generator lifts to a
        // representative with first coordinate reduced into [0, 1).
        let tilted = Cone::from_halfspaces(2, &[v([2, -1])]).unwrap();
        let gens = minimal_generators(&tilted).unwrap();
        assert_eq!(gens.len(), 3);
        assert!(gens.contains(&v([1, 2])) && gens.contains(&v([-1, -2])));
        assert!(gens.contains(&v([0, -1])));
    }

    #[test]
    fn lower_dimensional_cone() {
        // a 2-dim cone inside the plane z = 0 of Z^3
        let c = Cone::from_rays(3, &[v([1, 0, 0]), v([1, 2, 0])]).unwrap();
        assert_eq!(
            minimal_generators(&c).unwrap(),
            vec![v([1, 0, 0]), v([1, 1, 0]), v([1, 2, 0])]
        );
    }
}
