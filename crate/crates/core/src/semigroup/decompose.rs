//! Bounded decomposition of lattice points over a list of generators.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cone::Cone;
use crate::error::{Result, ToricError};
use crate::lattice::{check_rank, LatticeVector};

/// Multiplicities (by generator index) of an N-combination hitting a target.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub multiplicities: BTreeMap<usize, u32>,
}

impl Decomposition {
    pub fn evaluate(&self, generators: &[LatticeVector], rank: usize) -> LatticeVector {
        self.multiplicities
            .iter()
            .fold(LatticeVector::zero(rank), |acc, (&i, &m)| &acc + &generators[i].scale(m as i64))
    }

    pub fn total(&self) -> u32 {
        self.multiplicities.values().sum()
    }
}

/// Precomputed search data for decomposing many targets over one generator
/// list.
///
/// Search order: generators of positive degree (for a grading that is
/// positive off the lineality space) come first in index order, each tried
/// from its largest feasible multiplicity downwards; the degree-zero
/// generators follow, tried from zero upwards. The first hit is returned.
#[derive(Clone, Debug)]
pub struct Decomposer {
    rank: usize,
    generators: Vec<LatticeVector>,
    order: Vec<usize>,
    degrees: Vec<i64>,
    grading: LatticeVector,
    cone: Cone,
    /// `tail_cones[k]` is the cone of the degree-zero generators at positions
    /// `k..` of `order` (only meaningful for positions in the degree-zero tail).
    tail_cones: Vec<Cone>,
    first_tail: usize,
}

enum Search {
    Found,
    Failed { truncated: bool },
}

impl Decomposer {
    pub fn new(rank: usize, generators: &[LatticeVector]) -> Result<Decomposer> {
        for g in generators {
            check_rank(g, rank)?;
        }
        let cone = Cone::from_rays(rank, generators)?;
        let grading = cone
            .dual_rays()
            .iter()
            .fold(LatticeVector::zero(rank), |acc, a| &acc + a);
        let degrees: Vec<i64> = generators.iter().map(|g| grading.dot(g)).collect();
        let mut order: Vec<usize> = (0..generators.len()).filter(|&i| degrees[i] > 0).collect();
        let first_tail = order.len();
        order.extend((0..generators.len()).filter(|&i| degrees[i] == 0));
        let mut tail_cones = vec![Cone::zero(rank); order.len() + 1];
        for k in (first_tail..order.len()).rev() {
            let rays: Vec<LatticeVector> = order[k..].iter().map(|&i| generators[i].clone()).collect();
            tail_cones[k] = Cone::from_rays(rank, &rays)?;
        }
        Ok(Decomposer {
            rank,
            generators: generators.to_vec(),
            order,
            degrees,
            grading,
            cone,
            tail_cones,
            first_tail,
        })
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    /// `Ok(None)` means no decomposition exists with multiplicities ≤ `bound`
    /// and the search never had to cut a branch because of the bound; when it
    /// did cut one, the answer is [`ToricError::Inconclusive`].
    pub fn decompose(&self, target: &LatticeVector, bound: u32) -> Result<Option<Decomposition>> {
        check_rank(target, self.rank)?;
        if !self.cone.contains(target) {
            return Ok(None);
        }
        let mut memo: HashMap<(usize, LatticeVector), bool> = HashMap::new();
        let mut mult = vec![0u32; self.generators.len()];
        match self.search(0, target.clone(), bound, &mut mult, &mut memo) {
            Search::Found => Ok(Some(Decomposition {
                multiplicities: mult
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0)
                    .map(|(i, &m)| (i, m))
                    .collect(),
            })),
            Search::Failed { truncated: false } => Ok(None),
            Search::Failed { truncated: true } => Err(ToricError::inconclusive(format!(
                "decomposition of {target} not settled with multiplicity bound {bound}"
            ))),
        }
    }

    fn search(
        &self,
        pos: usize,
        rem: LatticeVector,
        bound: u32,
        mult: &mut [u32],
        memo: &mut HashMap<(usize, LatticeVector), bool>,
    ) -> Search {
        if pos == self.order.len() {
            return if rem.is_zero() {
                Search::Found
            } else {
                Search::Failed { truncated: false }
            };
        }
        if pos >= self.first_tail && !self.tail_cones[pos].contains(&rem) {
            return Search::Failed { truncated: false };
        }
        if let Some(&truncated) = memo.get(&(pos, rem.clone())) {
            return Search::Failed { truncated };
        }
        let gi = self.order[pos];
        let g = &self.generators[gi];
        let mut truncated = false;
        if self.degrees[gi] > 0 {
            let rem_deg = self.grading.dot(&rem);
            if rem_deg < 0 {
                return Search::Failed { truncated: false };
            }
            let feasible = rem_deg / self.degrees[gi];
            let cap = feasible.min(bound as i64);
            truncated |= feasible > bound as i64;
            for m in (0..=cap).rev() {
                let next = &rem - &g.scale(m);
                if !self.cone.contains(&next) {
                    continue;
                }
                mult[gi] = m as u32;
                match self.search(pos + 1, next, bound, mult, memo) {
                    Search::Found => return Search::Found,
                    Search::Failed { truncated: t } => truncated |= t,
                }
            }
        } else {
            for m in 0..=bound as i64 {
                let next = &rem - &g.scale(m);
                if !self.tail_cones[pos + 1].contains(&next) {
                    continue;
                }
                mult[gi] = m as u32;
                match self.search(pos + 1, next, bound, mult, memo) {
                    Search::Found => return Search::Found,
                    Search::Failed { truncated: t } => truncated |= t,
                }
            }
            // a branch beyond the bound could still land in the remaining cone
            let beyond = &rem - &g.scale(bound as i64 + 1);
            truncated |= self.tail_cones[pos + 1].contains(&beyond);
        }
        mult[gi] = 0;
        memo.insert((pos, rem), truncated);
        Search::Failed { truncated }
    }
}
