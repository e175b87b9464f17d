use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use toric_rigid::cone::{cone_sum, dual_cone, intersect, Cone};
use toric_rigid::lattice::LatticeVector;
use toric_rigid::padic::PAdicContext;
use toric_rigid::random::{random_element, random_semigroup, random_strongly_convex_cone, rng};
use toric_rigid::semigroup::semigroup_of_cone;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

/// Exact solve of `Σ λ_i s_i = v`; `None` when the `s_i` are dependent or
/// `v` is outside their span.
fn solve(columns: &[&LatticeVector], v: &LatticeVector) -> Option<Vec<BigRational>> {
    let n = v.rank();
    let k = columns.len();
    let q = |x: i64| BigRational::from_integer(x.into());
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|r| columns.iter().map(|c| q(c.coords()[r])).chain([q(v.coords()[r])]).collect())
        .collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let p = (row..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(row, p);
        let lead = m[row][col].clone();
        for x in &mut m[row] {
            *x /= &lead;
        }
        for r in 0..n {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=k {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| m[r][k].clone()).collect())
}

/// `v` is a nonnegative combination of `rays`, checked over every linearly
/// independent subset (Carathéodory).
fn in_cone_oracle(rays: &[LatticeVector], v: &LatticeVector) -> bool {
    if v.is_zero() {
        return true;
    }
    let n = rays.len();
    (1u32..1 << n).any(|mask| {
        let subset: Vec<&LatticeVector> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &rays[i]).collect();
        subset.len() <= v.rank()
            && solve(&subset, v).is_some_and(|l| l.iter().all(|x| !x.is_negative()))
    })
}

fn box_points(n: usize, r: i64) -> Vec<LatticeVector> {
    (0..(2 * r + 1).pow(n as u32))
        .map(|mut k| {
            LatticeVector::new(
                (0..n)
                    .map(|_| {
                        let c = k % (2 * r + 1) - r;
                        k /= 2 * r + 1;
                        c
                    })
                    .collect(),
            )
        })
        .collect()
}

fn cone_from_seed(seed: u64) -> Cone {
    let mut r = rng(seed);
    let rank = r.gen_range(1..=3);
    random_strongly_convex_cone(&mut r, rank, 5)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn double_dual_is_identity(seed in any::<u64>()) {
        let c = cone_from_seed(seed);
        prop_assert_eq!(dual_cone(&dual_cone(&c)), c);
    }

    #[test]
    fn sum_of_duals_is_dual_of_intersection(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let a = random_strongly_convex_cone(&mut r, rank, 5);
        let b = random_strongly_convex_cone(&mut r, rank, 5);
        prop_assert_eq!(
            cone_sum(&dual_cone(&a), &dual_cone(&b)).unwrap(),
            dual_cone(&intersect(&a, &b).unwrap())
        );
    }

    #[test]
    fn membership_agrees_with_ray_combinations(seed in any::<u64>()) {
        let c = cone_from_seed(seed);
        for v in box_points(c.rank(), 4).into_iter().filter(LatticeVector::is_primitive) {
            prop_assert_eq!(c.contains(&v), in_cone_oracle(c.rays(), &v), "{}", v);
        }
    }

    #[test]
    fn semigroup_generators_lie_in_the_dual(seed in any::<u64>()) {
        let c = cone_from_seed(seed);
        let s = semigroup_of_cone(&c).unwrap();
        for g in s.generators() {
            prop_assert!(c.generators().iter().all(|r| r.dot(g) >= 0));
        }
        for v in box_points(c.rank(), 3) {
            prop_assert_eq!(s.contains(&v), c.generators().iter().all(|r| r.dot(&v) >= 0));
        }
    }

    #[test]
    fn term_order_is_translation_invariant(seed in any::<u64>(), w in prop::collection::vec(-3i64..=3, 3)) {
        let mut r = rng(seed);
        let s = random_semigroup(&mut r);
        let order = toric_rigid::semigroup::TermOrder::new(s.order_basis().unwrap()).unwrap();
        let n = s.rank();
        let w = LatticeVector::new(w[..n].to_vec());
        let pts = box_points(n, 2);
        for u in pts.iter().step_by(3) {
            for v in pts.iter().step_by(5) {
                prop_assert_eq!(order.compare(u, v), order.compare(&(u + &w), &(v + &w)));
                prop_assert_eq!(order.compare(u, v) == Ordering::Equal, u == v);
            }
        }
    }

    #[test]
    fn gauss_norm_is_multiplicative_and_ultrametric(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let mut r = rng(seed);
        let ctx = PAdicContext::new(p).unwrap();
        let s = random_semigroup(&mut r);
        let f = random_element(&mut r, ctx, &s, 6, (-3, 3)).unwrap();
        let g = random_element(&mut r, ctx, &s, 6, (-3, 3)).unwrap();
        prop_assert_eq!(f.multiply(&g).unwrap().gauss_norm(), f.gauss_norm() * g.gauss_norm());
        let sum = f.add(&g).unwrap().gauss_norm();
        prop_assert!(sum <= f.gauss_norm().max(g.gauss_norm()));
        prop_assert_eq!(f.neg().gauss_norm(), f.gauss_norm());
    }

    #[test]
    fn reduction_is_a_ring_map_on_the_unit_ball(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let mut r = rng(seed);
        let ctx = PAdicContext::new(p).unwrap();
        let s = random_semigroup(&mut r);
        let f = random_element(&mut r, ctx, &s, 6, (0, 2)).unwrap();
        let g = random_element(&mut r, ctx, &s, 6, (0, 2)).unwrap();
        let (rf, rg) = (f.reduce_mod_p().unwrap(), g.reduce_mod_p().unwrap());
        prop_assert_eq!(f.multiply(&g).unwrap().reduce_mod_p().unwrap(), rf.multiply(&rg).unwrap());
        prop_assert_eq!(f.add(&g).unwrap().reduce_mod_p().unwrap(), rf.add(&rg).unwrap());
    }

    #[test]
    fn reduction_commutes_with_restriction_to_faces(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rank = r.gen_range(1..=3);
        let sigma = random_strongly_convex_cone(&mut r, rank, 4);
        let s_sigma = Arc::new(semigroup_of_cone(&sigma).unwrap());
        let ctx = PAdicContext::new(3).unwrap();
        let f = random_element(&mut r, ctx, &s_sigma, 5, (0, 2)).unwrap();
        for tau in sigma.faces() {
            let s_tau = Arc::new(semigroup_of_cone(&tau).unwrap());
            prop_assert_eq!(
                f.include_into(&s_tau).unwrap().reduce_mod_p().unwrap(),
                f.reduce_mod_p().unwrap().include_into(&s_tau).unwrap()
            );
        }
    }

    #[test]
    fn elements_survive_json(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = PAdicContext::new(5).unwrap();
        let s = random_semigroup(&mut r);
        let f = random_element(&mut r, ctx, &s, 6, (-3, 3)).unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back = toric_rigid::element::ToricElement::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }
}
