//! Seeded generators of random cones, fans and elements for property checks.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cone::Cone;
use crate::element::ToricElement;
use crate::error::Result;
use crate::fan::{fan_from_maximal, Fan};
use crate::lattice::LatticeVector;
use crate::padic::PAdicContext;
use crate::semigroup::{semigroup_of_cone, AffineSemigroup};

pub use rand::SeedableRng;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut impl Rng, rank: usize, bound: i64) -> LatticeVector {
    loop {
        let v = LatticeVector::new((0..rank).map(|_| rng.gen_range(-bound..=bound)).collect());
        if !v.is_zero() {
            return v;
        }
    }
}

/// A cone spanned by one to `rank + 2` random vectors with entries in
/// `[−bound, bound]`.
pub fn random_cone(rng: &mut impl Rng, rank: usize, bound: i64) -> Cone {
    let k = rng.gen_range(1..=rank + 2);
    let rays: Vec<LatticeVector> = (0..k).map(|_| random_vector(rng, rank, bound)).collect();
    Cone::from_rays(rank, &rays).expect("ranks agree")
}

/// Rejection-samples [`random_cone`] until the cone contains no line.
pub fn random_strongly_convex_cone(rng: &mut impl Rng, rank: usize, bound: i64) -> Cone {
    loop {
        let c = random_cone(rng, rank, bound);
        if c.is_strongly_convex() {
            return c;
        }
    }
}

/// A complete rank-2 fan: `k` random primitive rays in cyclic order, with
/// the sectors between neighbours as maximal cones.
pub fn random_complete_fan_2d(rng: &mut impl Rng, bound: i64) -> Fan {
    loop {
        let k = rng.gen_range(3..=7);
        let mut rays: Vec<LatticeVector> = (0..k)
            .map(|_| random_vector(rng, 2, bound).primitive().expect("nonzero"))
            .collect();
        rays.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
        rays.dedup();
        if rays.len() < 3 {
            continue;
        }
        let n = rays.len();
        let sectors_ok = (0..n).all(|i| {
            let (a, b) = (&rays[i], &rays[(i + 1) % n]);
            a.coords()[0] * b.coords()[1] - a.coords()[1] * b.coords()[0] > 0
        });
        if !sectors_ok {
            continue;
        }
        let maximal = (0..n)
            .map(|i| {
                let c = Cone::from_rays(2, &[rays[i].clone(), rays[(i + 1) % n].clone()]).expect("rank 2");
                (format!("c{i}"), c)
            })
            .collect();
        if let Ok(fan) = fan_from_maximal(2, maximal) {
            return fan;
        }
    }
}

fn angle(v: &LatticeVector) -> f64 {
    (v.coords()[1] as f64).atan2(v.coords()[0] as f64)
}

/// `S_σ` of a random strongly convex cone of rank 1 to 3.
pub fn random_semigroup(rng: &mut impl Rng) -> Arc<AffineSemigroup> {
    let rank = rng.gen_range(1..=3);
    let sigma = random_strongly_convex_cone(rng, rank, 3);
    Arc::new(semigroup_of_cone(&sigma).expect("strongly convex"))
}

/// `±p^v·a/b` with `v` in the given range and `a`, `b` prime to `p`.
pub fn random_scalar(rng: &mut impl Rng, p: u64, valuations: (i64, i64)) -> BigRational {
    let unit = |rng: &mut dyn rand::RngCore| loop {
        let x: u64 = rng.gen_range(1..=30);
        if x % p != 0 {
            return BigInt::from(x);
        }
    };
    let (a, b) = (unit(rng), unit(rng));
    let v = rng.gen_range(valuations.0..=valuations.1);
    let pv = num_traits::pow(BigInt::from(p), v.unsigned_abs() as usize);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    if v >= 0 {
        BigRational::new(a * pv * sign, b)
    } else {
        BigRational::new(a * sign, b * pv)
    }
}

/// A random element with up to `max_terms` terms; exponents are small
/// nonnegative combinations of the semigroup generators.
pub fn random_element(
    rng: &mut impl Rng,
    context: PAdicContext,
    semigroup: &Arc<AffineSemigroup>,
    max_terms: usize,
    valuations: (i64, i64),
) -> Result<ToricElement> {
    let rank = semigroup.rank();
    let k = rng.gen_range(1..=max_terms);
    let terms: Vec<(LatticeVector, BigRational)> = (0..k)
        .map(|_| {
            let u = semigroup
                .generators()
                .iter()
                .fold(LatticeVector::zero(rank), |acc, g| &acc + &g.scale(rng.gen_range(0..=3)));
            (u, random_scalar(rng, context.prime(), valuations))
        })
        .collect();
    ToricElement::new(context, semigroup.clone(), terms)
}

pub fn random_prime(rng: &mut impl Rng) -> u64 {
    *[2u64, 3, 5].choose(rng).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_repeat() {
        let a: Vec<Cone> = {
            let mut r = rng(7);
            (0..5).map(|_| random_strongly_convex_cone(&mut r, 3, 5)).collect()
        };
        let b: Vec<Cone> = {
            let mut r = rng(7);
            (0..5).map(|_| random_strongly_convex_cone(&mut r, 3, 5)).collect()
        };
        assert_eq!(a, b);
        assert!(a.iter().all(Cone::is_strongly_convex));
    }

    #[test]
    fn random_fans_are_complete() {
        let mut r = rng(1);
        for _ in 0..10 {
            assert!(random_complete_fan_2d(&mut r, 5).is_complete());
        }
    }

    #[test]
    fn scalars_have_the_requested_valuation_range() {
        let mut r = rng(3);
        for _ in 0..50 {
            let x = random_scalar(&mut r, 5, (-3, 3));
            let v = crate::padic::p_valuation(&x, 5).unwrap();
            assert!((-3..=3).contains(&v));
        }
    }
}
