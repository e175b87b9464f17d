//! Comultiplication, counit and antipode of the torus chart, and the
//! coaction of the torus on every chart, on finite-support elements.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::element::{SemigroupSpec, ToricElement};
use crate::error::{Result, ToricError};
use crate::lattice::LatticeVector;
use crate::padic::PAdicContext;
use crate::semigroup::AffineSemigroup;

/// A finite sum of pure tensors `c·χ^{u_1} ⊗ … ⊗ χ^{u_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    context: PAdicContext,
    factors: Vec<Arc<AffineSemigroup>>,
    terms: BTreeMap<Vec<LatticeVector>, BigRational>,
}

impl TensorElement {
    pub fn new<I>(context: PAdicContext, factors: Vec<Arc<AffineSemigroup>>, terms: I) -> Result<TensorElement>
    where
        I: IntoIterator<Item = (Vec<LatticeVector>, BigRational)>,
    {
        let mut map: BTreeMap<Vec<LatticeVector>, BigRational> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != factors.len() {
                return Err(ToricError::domain("tensor term has the wrong number of factors"));
            }
            if let Some((u, _)) = exps.iter().zip(&factors).find(|(u, s)| !s.contains(u)) {
                return Err(ToricError::domain(format!("exponent {u} is outside its factor")));
            }
            *map.entry(exps).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(TensorElement {
            context,
            factors,
            terms: map,
        })
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Arc<AffineSemigroup>] {
        &self.factors
    }

    pub fn terms(&self) -> &BTreeMap<Vec<LatticeVector>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies `m*` to factor `k`; the new factor after it is the torus.
    pub fn comultiply_factor(&self, k: usize) -> Result<TensorElement> {
        if k >= self.arity() {
            return Err(ToricError::domain("no such tensor factor"));
        }
        let mut factors = self.factors.clone();
        let rank = factors[k].rank();
        factors.insert(k + 1, Arc::new(AffineSemigroup::lattice(rank)));
        let terms = self.terms.iter().map(|(exps, c)| {
            let mut e = exps.clone();
            e.insert(k + 1, exps[k].clone());
            (e, c.clone())
        });
        TensorElement::new(self.context, factors, terms)
    }

    /// Applies the counit to factor `k`, dropping it.
    pub fn counit_factor(&self, k: usize) -> Result<TensorElement> {
        if k >= self.arity() {
            return Err(ToricError::domain("no such tensor factor"));
        }
        let mut factors = self.factors.clone();
        factors.remove(k);
        let terms = self.terms.iter().map(|(exps, c)| {
            let mut e = exps.clone();
            e.remove(k);
            (e, c.clone())
        });
        TensorElement::new(self.context, factors, terms)
    }

    /// A one-factor tensor as an element.
    pub fn into_element(self) -> Result<ToricElement> {
        if self.arity() != 1 {
            return Err(ToricError::domain("only a one-factor tensor is an element"));
        }
        let semigroup = self.factors[0].clone();
        ToricElement::new(
            self.context,
            semigroup,
            self.terms.into_iter().map(|(mut e, c)| (e.remove(0), c)),
        )
    }

    /// Rehouses factor `k` on a larger semigroup.
    pub fn include_factor(&self, k: usize, target: &Arc<AffineSemigroup>) -> Result<TensorElement> {
        if k >= self.arity() || !self.factors[k].is_subsemigroup_of(target) {
            return Err(ToricError::domain("factor is not contained in the target"));
        }
        let mut factors = self.factors.clone();
        factors[k] = target.clone();
        Ok(TensorElement {
            context: self.context,
            factors,
            terms: self.terms.clone(),
        })
    }

    pub fn to_json(&self) -> TensorJson {
        TensorJson {
            prime: self.context.prime(),
            semigroups: self.factors.iter().map(|s| SemigroupSpec::Inline((**s).clone())).collect(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TensorTermJson {
                    exp_pair: e.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorTermJson {
    pub exp_pair: Vec<LatticeVector>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorJson {
    pub prime: u64,
    pub semigroups: Vec<SemigroupSpec>,
    pub terms: Vec<TensorTermJson>,
}

fn single(f: &ToricElement) -> TensorElement {
    TensorElement {
        context: f.context(),
        factors: vec![f.semigroup().clone()],
        terms: f.terms().iter().map(|(u, c)| (vec![u.clone()], c.clone())).collect(),
    }
}

/// `χᵘ ↦ χᵘ ⊗ χᵘ`, right factor on the torus.
pub fn comultiply(f: &ToricElement) -> TensorElement {
    single(f).comultiply_factor(0).expect("one factor")
}

/// `χᵘ ↦ 1`.
pub fn counit(f: &ToricElement) -> BigRational {
    f.terms().values().fold(BigRational::zero(), |acc, c| acc + c)
}

/// `χᵘ ↦ χ^{−u}`; every `−u` has to lie in the semigroup.
pub fn coinverse(f: &ToricElement) -> Result<ToricElement> {
    if let Some(u) = f.terms().keys().find(|u| !f.semigroup().contains(&-*u)) {
        return Err(ToricError::domain(format!("{} is not in the semigroup", -u)));
    }
    ToricElement::new(
        f.context(),
        f.semigroup().clone(),
        f.terms().iter().map(|(u, c)| (-u, c.clone())),
    )
}

/// Every term of `m*(f)` has its left exponent in `f`'s semigroup and its
/// right exponent in `M`.
pub fn coaction_support_check(f: &ToricElement) -> bool {
    let t = comultiply(f);
    let rank = f.semigroup().rank();
    t.terms
        .keys()
        .all(|e| f.semigroup().contains(&e[0]) && e[1].rank() == rank && t.factors[1].contains(&e[1]))
}

/// `(m* ⊗ id)∘m* = (id ⊗ m*)∘m*`.
pub fn coassociative(f: &ToricElement) -> Result<bool> {
    let t = comultiply(f);
    let left = t.comultiply_factor(0)?;
    let right = t.comultiply_factor(1)?;
    Ok(left.terms == right.terms)
}

/// Collapsing either factor of `m*(f)` with the counit gives back `f`.
pub fn counit_law(f: &ToricElement) -> Result<bool> {
    let t = comultiply(f);
    let a = t.counit_factor(1)?.into_element()?;
    let b = t.counit_factor(0)?.into_element()?;
    Ok(a == *f && b.terms() == f.terms())
}

/// `μ∘(s ⊗ id)∘m* = μ∘(id ⊗ s)∘m* = ε(f)·1` for `f` on the torus.
pub fn antipode_law(f: &ToricElement) -> Result<bool> {
    let rank = f.semigroup().rank();
    if f.semigroup().cone().lineality().len() != rank {
        return Err(ToricError::domain("the antipode needs an element of the torus chart"));
    }
    let t = comultiply(f);
    let mut left = ToricElement::zero(f.context(), f.semigroup().clone());
    let mut right = left.clone();
    for (e, c) in &t.terms {
        let mono = |u: &LatticeVector| ToricElement::monomial(f.context(), f.semigroup().clone(), u.clone(), BigRational::one());
        let (a, b) = (mono(&e[0])?, mono(&e[1])?);
        left = left.add(&coinverse(&a)?.multiply(&b)?.scale(c))?;
        right = right.add(&a.multiply(&coinverse(&b)?)?.scale(c))?;
    }
    let expected = ToricElement::one(f.context(), f.semigroup().clone()).scale(&counit(f));
    Ok(left == expected && right == expected)
}

/// `m*(include(f)) = include(m*(f))` along `S_σ ⊆ S_τ`.
pub fn restriction_compatible(f: &ToricElement, target: &Arc<AffineSemigroup>) -> Result<bool> {
    let lhs = comultiply(&f.include_into(target)?);
    let rhs = comultiply(f).include_factor(0, target)?;
    Ok(lhs == rhs)
}
