//! Fans of strongly convex rational cones: validation of the two fan axioms,
//! face completion, the standard examples, completeness and fan maps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{face_witness_with, Cone};
use crate::error::{Result, ToricError};
use crate::lattice::{rank_of, rational_coordinates, LatticeVector};
use crate::semigroup::AffineSemigroup;

/// Identifier given to cones that only enter a fan through face completion.
pub fn derived_face_id(cone: &Cone) -> String {
    format!("face:{}", cone.ray_key())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanCone {
    pub id: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    pub cone: Cone,
}

/// A validated fan. Cones are kept in canonical order (dimension, then rays).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    cones: Vec<FanCone>,
    /// `(face index, cone index) -> u` with `cone ∩ u⊥ = face`, for every
    /// proper face.
    face_relations: BTreeMap<(usize, usize), LatticeVector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Rank,
    StrongConvexity,
    FaceClosure,
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub cones: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} [{}]: {}", self.axiom, self.cones.join(", "), self.detail)
    }
}

/// Checks both fan axioms. On success every proper face relation carries its
/// witness; on failure every violation found is returned.
pub fn validate_fan(rank: usize, cones: Vec<(String, Cone)>) -> std::result::Result<Fan, Vec<Violation>> {
    let mut violations = Vec::new();
    let mut by_cone: BTreeMap<Cone, FanCone> = BTreeMap::new();
    for (id, cone) in cones {
        if cone.rank() != rank {
            violations.push(Violation {
                axiom: Axiom::Rank,
                cones: vec![id],
                detail: format!("rank {} in a fan of rank {rank}", cone.rank()),
            });
            continue;
        }
        if !cone.is_strongly_convex() {
            violations.push(Violation {
                axiom: Axiom::StrongConvexity,
                cones: vec![id.clone()],
                detail: format!("{} contains a line", cone.label()),
            });
        }
        match by_cone.get_mut(&cone) {
            Some(existing) => existing.aliases.push(id),
            None => {
                by_cone.insert(
                    cone.clone(),
                    FanCone {
                        id,
                        aliases: Vec::new(),
                        cone,
                    },
                );
            }
        }
    }
    if !violations.is_empty() {
        violations.sort();
        return Err(violations);
    }
    let cones: Vec<FanCone> = by_cone.into_values().collect();
    let index: BTreeMap<&Cone, usize> = cones.iter().enumerate().map(|(i, c)| (&c.cone, i)).collect();

    let semigroups: Vec<AffineSemigroup> = match cones
        .par_iter()
        .map(|c| AffineSemigroup::of_cone(&c.cone.dual()))
        .collect::<Result<Vec<_>>>()
    {
        Ok(s) => s,
        Err(e) => {
            return Err(vec![Violation {
                axiom: Axiom::StrongConvexity,
                cones: Vec::new(),
                detail: e.to_string(),
            }])
        }
    };

    // Axiom 1: closure under faces.
    let face_lists: Vec<Vec<Cone>> = cones.par_iter().map(|c| c.cone.faces()).collect();
    let mut face_relations = BTreeMap::new();
    for (j, (fc, faces)) in cones.iter().zip(&face_lists).enumerate() {
        for face in faces {
            match index.get(face) {
                None => violations.push(Violation {
                    axiom: Axiom::FaceClosure,
                    cones: vec![fc.id.clone()],
                    detail: format!("face {} is missing", face.label()),
                }),
                Some(&i) if i != j => {
                    let u = face_witness_with(face, &fc.cone, semigroups[j].generators())
                        .expect("faces of a cone have witnesses");
                    face_relations.insert((i, j), u);
                }
                Some(_) => {}
            }
        }
    }

    // Axiom 2: pairwise intersections are common faces.
    let pairs: Vec<(usize, usize)> = (0..cones.len())
        .flat_map(|i| (i + 1..cones.len()).map(move |j| (i, j)))
        .collect();
    let pair_violations: Vec<Vec<Violation>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut out = Vec::new();
            let (a, b) = (&cones[i], &cones[j]);
            let meet = a.cone.intersect(&b.cone).expect("ranks agree");
            if !index.contains_key(&meet) {
                out.push(Violation {
                    axiom: Axiom::Intersection,
                    cones: vec![a.id.clone(), b.id.clone()],
                    detail: format!("intersection {} is not in the fan", meet.label()),
                });
            }
            for (k, c) in [(i, a), (j, b)] {
                if face_witness_with(&meet, &c.cone, semigroups[k].generators()).is_none() {
                    out.push(Violation {
                        axiom: Axiom::Intersection,
                        cones: vec![a.id.clone(), b.id.clone()],
                        detail: format!("intersection {} is not a face of {}", meet.label(), c.id),
                    });
                }
            }
            out
        })
        .collect();
    violations.extend(pair_violations.into_iter().flatten());

    if violations.is_empty() {
        Ok(Fan {
            rank,
            cones,
            face_relations,
        })
    } else {
        Err(violations)
    }
}

/// All faces of all input cones, deduplicated, in canonical order.
pub fn complete_faces(cones: &[Cone]) -> Vec<Cone> {
    let set: BTreeSet<Cone> = cones.iter().flat_map(Cone::faces).collect();
    set.into_iter().collect()
}

/// Completes `named` with derived faces and validates.
pub fn fan_from_maximal(rank: usize, named: Vec<(String, Cone)>) -> std::result::Result<Fan, Vec<Violation>> {
    let given: BTreeSet<Cone> = named.iter().map(|(_, c)| c.clone()).collect();
    let mut all = named.clone();
    let cones: Vec<Cone> = named.into_iter().map(|(_, c)| c).collect();
    for face in complete_faces(&cones) {
        if !given.contains(&face) {
            all.push((derived_face_id(&face), face));
        }
    }
    validate_fan(rank, all)
}

/// The fan of `P^n`: cones spanned by proper subsets of
/// `{v_0 = −Σ e_i, v_1 = e_1, …, v_n = e_n}`.
pub fn projective_fan(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(ToricError::domain("projective space needs n >= 1"));
    }
    let v = |i: usize| -> LatticeVector {
        if i == 0 {
            LatticeVector::new(vec![-1; n])
        } else {
            LatticeVector::unit(n, i - 1)
        }
    };
    let mut cones = Vec::new();
    for mask in 0u32..(1 << (n + 1)) - 1 {
        let subset: Vec<usize> = (0..=n).filter(|i| mask & (1 << i) != 0).collect();
        let rays: Vec<LatticeVector> = subset.iter().map(|&i| v(i)).collect();
        let id = format!(
            "sigma[{}]",
            subset.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        );
        cones.push((id, Cone::from_rays(n, &rays)?));
    }
    validate_fan(n, cones).map_err(violations_error)
}

/// The Hirzebruch fan with maximal cones `cone(e1, e2)`, `cone(e1, −e2)`,
/// `cone(−e1 + a·e2, −e2)` and `cone(−e1 + a·e2, e2)`.
pub fn hirzebruch_fan(a: i64) -> Result<Fan> {
    if a < 0 {
        return Err(ToricError::domain("Hirzebruch parameter must be nonnegative"));
    }
    let e1 = LatticeVector::from([1, 0]);
    let e2 = LatticeVector::from([0, 1]);
    let w = LatticeVector::from([-1, a]);
    let maximal = vec![
        ("sigma1".to_string(), Cone::from_rays(2, &[e1.clone(), e2.clone()])?),
        ("sigma2".to_string(), Cone::from_rays(2, &[e1, -&e2])?),
        ("sigma3".to_string(), Cone::from_rays(2, &[w.clone(), -&e2])?),
        ("sigma4".to_string(), Cone::from_rays(2, &[w, e2])?),
    ];
    fan_from_maximal(2, maximal).map_err(violations_error)
}

/// Product fan on `N × N'`: cones `σ × τ`.
pub fn product_fan(left: &Fan, right: &Fan) -> Result<Fan> {
    let n = left.rank + right.rank;
    let embed = |v: &LatticeVector, offset: usize| {
        let mut c = vec![0; n];
        c[offset..offset + v.rank()].copy_from_slice(v.coords());
        LatticeVector::new(c)
    };
    let mut cones = Vec::new();
    for a in &left.cones {
        for b in &right.cones {
            let rays: Vec<LatticeVector> = a
                .cone
                .rays()
                .iter()
                .map(|r| embed(r, 0))
                .chain(b.cone.rays().iter().map(|r| embed(r, left.rank)))
                .collect();
            cones.push((format!("{}x{}", a.id, b.id), Cone::from_rays(n, &rays)?));
        }
    }
    validate_fan(n, cones).map_err(violations_error)
}

/// The fan consisting of the zero cone only (its chart is the torus).
pub fn torus_fan(rank: usize) -> Fan {
    validate_fan(rank, vec![("origin".to_string(), Cone::zero(rank))]).expect("the zero cone is a fan")
}

fn violations_error(v: Vec<Violation>) -> ToricError {
    ToricError::internal(
        v.iter()
            .map(Violation::to_string)
            .collect::<Vec<_>>()
            .join("; "),
    )
}

impl Fan {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cones(&self) -> &[FanCone] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn index_of(&self, cone: &Cone) -> Option<usize> {
        self.cones.binary_search_by(|c| c.cone.cmp(cone)).ok()
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.cones
            .iter()
            .position(|c| c.id == id || c.aliases.iter().any(|a| a == id))
    }

    pub fn face_relations(&self) -> &BTreeMap<(usize, usize), LatticeVector> {
        &self.face_relations
    }

    /// Cones that are not a proper face of another cone.
    pub fn maximal_cones(&self) -> Vec<usize> {
        let covered: BTreeSet<usize> = self.face_relations.keys().map(|&(face, _)| face).collect();
        (0..self.cones.len()).filter(|i| !covered.contains(i)).collect()
    }

    /// All distinct rays of the fan, sorted.
    pub fn rays(&self) -> Vec<LatticeVector> {
        let set: BTreeSet<LatticeVector> = self.cones.iter().flat_map(|c| c.cone.rays().iter().cloned()).collect();
        set.into_iter().collect()
    }

    /// Support equals `N_R`: every codimension-one cone lies in exactly two
    /// full-dimensional cones (and there is at least one of those), and every
    /// nonzero vector of a small box lies in some cone.
    pub fn is_complete(&self) -> bool {
        let n = self.rank;
        let full: Vec<usize> = (0..self.cones.len()).filter(|&i| self.cones[i].cone.dim() == n).collect();
        if full.is_empty() {
            return false;
        }
        let mut wall_count: BTreeMap<usize, usize> = BTreeMap::new();
        for &(face, cone) in self.face_relations.keys() {
            if self.cones[face].cone.dim() + 1 == n && self.cones[cone].cone.dim() == n {
                *wall_count.entry(face).or_default() += 1;
            }
        }
        if wall_count.values().any(|&c| c != 2) {
            return false;
        }
        box_points(n, 2).iter().all(|v| self.cones.iter().any(|c| c.cone.contains(v)))
    }
}

fn box_points(rank: usize, r: i64) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    let mut x = vec![-r; rank];
    loop {
        let v = LatticeVector::new(x.clone());
        if !v.is_zero() {
            out.push(v);
        }
        let mut k = 0;
        loop {
            if k == rank {
                return out;
            }
            if x[k] < r {
                x[k] += 1;
                break;
            }
            x[k] = -r;
            k += 1;
        }
    }
}

/// One cone of a fan file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    pub rays: Vec<LatticeVector>,
}

/// The fan file format: `{"rank", "cones": [{"id", "rays"}], "complete_faces"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSpec {
    pub rank: usize,
    pub cones: Vec<ConeSpec>,
    #[serde(default)]
    pub complete_faces: bool,
}

/// Why a fan file was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanSpecError {
    Invalid(ToricError),
    Violations(Vec<Violation>),
}

impl From<ToricError> for FanSpecError {
    fn from(e: ToricError) -> Self {
        FanSpecError::Invalid(e)
    }
}

impl FanSpec {
    pub fn to_fan(&self) -> std::result::Result<Fan, FanSpecError> {
        let mut named = Vec::new();
        for c in &self.cones {
            if c.rays.iter().any(|r| r.rank() != self.rank) {
                return Err(FanSpecError::Violations(vec![Violation {
                    axiom: Axiom::Rank,
                    cones: vec![c.id.clone()],
                    detail: format!("rays of the wrong rank in a fan of rank {}", self.rank),
                }]));
            }
            let cone = Cone::from_rays(self.rank, &c.rays)?;
            named.push((c.id.clone(), cone.clone()));
            named.extend(c.aliases.iter().map(|a| (a.clone(), cone.clone())));
        }
        let result = if self.complete_faces {
            fan_from_maximal(self.rank, named)
        } else {
            validate_fan(self.rank, named)
        };
        result.map_err(FanSpecError::Violations)
    }
}

impl Fan {
    /// The face-complete fan file of this fan; reading it back gives the same fan.
    pub fn to_spec(&self) -> FanSpec {
        FanSpec {
            rank: self.rank,
            cones: self
                .cones
                .iter()
                .map(|c| ConeSpec {
                    id: c.id.clone(),
                    aliases: c.aliases.clone(),
                    rays: c.cone.rays().to_vec(),
                })
                .collect(),
            complete_faces: false,
        }
    }
}

/// Integer matrix `N → N₁`, row-major with `rows = rank(N₁)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeMap {
    pub rows: Vec<Vec<i64>>,
}

impl LatticeMap {
    pub fn new(rows: Vec<Vec<i64>>) -> LatticeMap {
        LatticeMap { rows }
    }

    pub fn identity(n: usize) -> LatticeMap {
        LatticeMap::new((0..n).map(|i| LatticeVector::unit(n, i).into_coords()).collect())
    }

    pub fn target_rank(&self) -> usize {
        self.rows.len()
    }

    pub fn source_rank(&self) -> Option<usize> {
        let n = self.rows.first()?.len();
        self.rows.iter().all(|r| r.len() == n).then_some(n)
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector::new(
            self.rows
                .iter()
                .map(|row| row.iter().zip(v.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn image(&self, cone: &Cone) -> Result<Cone> {
        let rays: Vec<LatticeVector> = cone.rays().iter().map(|r| self.apply(r)).collect();
        let lin: Vec<LatticeVector> = cone.lineality().iter().map(|l| self.apply(l)).collect();
        Cone::from_generators(self.target_rank(), &rays, &lin)
    }
}

/// A lattice map together with the target cone assigned to each source cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanMap {
    pub matrix: LatticeMap,
    /// Source cone id → target cone id.
    pub cone_assignment: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapViolation {
    pub source_cone: String,
    pub image: Cone,
}

/// Checks that `matrix` carries every cone of `source` into some cone of
/// `target`, picking the first such cone in canonical order.
pub fn fan_map_check(
    matrix: &LatticeMap,
    source: &Fan,
    target: &Fan,
) -> Result<std::result::Result<FanMap, Vec<MapViolation>>> {
    if matrix.source_rank() != Some(source.rank) || matrix.target_rank() != target.rank {
        return Err(ToricError::Dimension {
            expected: source.rank,
            found: matrix.source_rank().unwrap_or(0),
        });
    }
    let mut assignment = BTreeMap::new();
    let mut violations = Vec::new();
    for c in &source.cones {
        let image = matrix.image(&c.cone)?;
        match target.cones.iter().find(|t| t.cone.contains_cone(&image)) {
            Some(t) => {
                assignment.insert(c.id.clone(), t.id.clone());
            }
            None => violations.push(MapViolation {
                source_cone: c.id.clone(),
                image,
            }),
        }
    }
    Ok(if violations.is_empty() {
        Ok(FanMap {
            matrix: matrix.clone(),
            cone_assignment: assignment,
        })
    } else {
        Err(violations)
    })
}

/// Searches for a unimodular matrix with entries in `[−3, 3]` carrying the
/// rays and cones of `a` bijectively onto those of `b`.
pub fn fans_isomorphic(a: &Fan, b: &Fan) -> Option<LatticeMap> {
    const ENTRY_BOUND: i64 = 3;
    let n = a.rank;
    if b.rank != n || a.len() != b.len() {
        return None;
    }
    let cones_a: BTreeSet<&Cone> = a.cones.iter().map(|c| &c.cone).collect();
    let cones_b: BTreeSet<&Cone> = b.cones.iter().map(|c| &c.cone).collect();
    if cones_a == cones_b {
        return Some(LatticeMap::identity(n));
    }
    let rays_a = a.rays();
    let rays_b = b.rays();
    if rays_a.len() != rays_b.len() {
        return None;
    }
    let mut basis: Vec<LatticeVector> = Vec::new();
    for r in &rays_a {
        basis.push(r.clone());
        if rank_of(&basis) < basis.len() {
            basis.pop();
        }
    }
    if basis.len() != n {
        return None;
    }
    // rows of the basis matrix, used to solve A·B = R for each row of A
    let basis_rows: Vec<LatticeVector> = (0..n)
        .map(|k| LatticeVector::new(basis.iter().map(|b| b.coords()[k]).collect()))
        .collect();
    let ray_set_b: BTreeSet<&LatticeVector> = rays_b.iter().collect();

    let mut choice = vec![0usize; n];
    loop {
        let distinct = choice.iter().collect::<BTreeSet<_>>().len() == n;
        if distinct {
            if let Some(m) = solve_map(&basis_rows, &choice, &rays_b, ENTRY_BOUND) {
                let maps_rays = rays_a.iter().all(|r| ray_set_b.contains(&m.apply(r)));
                if maps_rays
                    && a.cones
                        .iter()
                        .all(|c| m.image(&c.cone).map(|img| cones_b.contains(&img)).unwrap_or(false))
                {
                    return Some(m);
                }
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < rays_b.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

fn solve_map(basis_rows: &[LatticeVector], choice: &[usize], rays_b: &[LatticeVector], bound: i64) -> Option<LatticeMap> {
    let n = choice.len();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let t = LatticeVector::new(choice.iter().map(|&j| rays_b[j].coords()[i]).collect());
        let coeffs = rational_coordinates(basis_rows, &t)?;
        let mut row = Vec::with_capacity(n);
        for c in coeffs {
            if !c.is_integer() {
                return None;
            }
            let x: i64 = num_traits::ToPrimitive::to_i64(&c.to_integer())?;
            if x.abs() > bound {
                return None;
            }
            row.push(x);
        }
        rows.push(row);
    }
    let det_rank = rank_of(&rows.iter().map(|r| LatticeVector::new(r.clone())).collect::<Vec<_>>());
    if det_rank != n || determinant(&rows).abs() != 1 {
        return None;
    }
    Some(LatticeMap::new(rows))
}

fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * determinant(&minor)
        })
        .sum()
}
