//! Finite-support elements of `K[S_σ]` over `K = Q_p`, their Gauss norms,
//! leading exponents and reductions to `F_p[S_σ]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::Cone;
use crate::error::{Result, ToricError};
use crate::lattice::{check_rank, LatticeVector};
use crate::padic::{mul_mod, GaussNorm, PAdicContext};
use crate::semigroup::{semigroup_of_cone, AffineSemigroup, TermOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricElement {
    context: PAdicContext,
    semigroup: Arc<AffineSemigroup>,
    terms: BTreeMap<LatticeVector, BigRational>,
}

fn same_semigroup(a: &Arc<AffineSemigroup>, b: &Arc<AffineSemigroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ToricElement {
    /// Sums repeated exponents and drops zero coefficients.
    pub fn new<I>(context: PAdicContext, semigroup: Arc<AffineSemigroup>, terms: I) -> Result<ToricElement>
    where
        I: IntoIterator<Item = (LatticeVector, BigRational)>,
    {
        let mut map: BTreeMap<LatticeVector, BigRational> = BTreeMap::new();
        for (u, c) in terms {
            check_rank(&u, semigroup.rank())?;
            if !semigroup.contains(&u) {
                return Err(ToricError::domain(format!("exponent {u} is not in the semigroup")));
            }
            *map.entry(u).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(ToricElement {
            context,
            semigroup,
            terms: map,
        })
    }

    pub fn zero(context: PAdicContext, semigroup: Arc<AffineSemigroup>) -> ToricElement {
        ToricElement {
            context,
            semigroup,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(context: PAdicContext, semigroup: Arc<AffineSemigroup>) -> ToricElement {
        let rank = semigroup.rank();
        ToricElement::monomial(context, semigroup, LatticeVector::zero(rank), BigRational::one())
            .expect("0 lies in every semigroup")
    }

    /// `c·χᵘ`.
    pub fn monomial(
        context: PAdicContext,
        semigroup: Arc<AffineSemigroup>,
        u: LatticeVector,
        c: BigRational,
    ) -> Result<ToricElement> {
        ToricElement::new(context, semigroup, [(u, c)])
    }

    pub fn context(&self) -> PAdicContext {
        self.context
    }

    pub fn prime(&self) -> u64 {
        self.context.prime()
    }

    pub fn semigroup(&self) -> &Arc<AffineSemigroup> {
        &self.semigroup
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVector, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, u: &LatticeVector) -> BigRational {
        self.terms.get(u).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &ToricElement) -> Result<()> {
        if self.context != other.context {
            return Err(ToricError::domain(format!(
                "primes differ: {} and {}",
                self.prime(),
                other.prime()
            )));
        }
        if !same_semigroup(&self.semigroup, &other.semigroup) {
            return Err(ToricError::domain("elements live on different semigroups"));
        }
        Ok(())
    }

    fn with_terms(&self, terms: BTreeMap<LatticeVector, BigRational>) -> ToricElement {
        ToricElement {
            context: self.context,
            semigroup: self.semigroup.clone(),
            terms,
        }
    }

    pub fn add(&self, other: &ToricElement) -> Result<ToricElement> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        for (u, c) in &other.terms {
            let entry = terms.entry(u.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(u);
            }
        }
        Ok(self.with_terms(terms))
    }

    pub fn neg(&self) -> ToricElement {
        self.with_terms(self.terms.iter().map(|(u, c)| (u.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &ToricElement) -> Result<ToricElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> ToricElement {
        if k.is_zero() {
            return self.with_terms(BTreeMap::new());
        }
        self.with_terms(self.terms.iter().map(|(u, c)| (u.clone(), c * k)).collect())
    }

    pub fn multiply(&self, other: &ToricElement) -> Result<ToricElement> {
        self.check_compatible(other)?;
        let mut terms: BTreeMap<LatticeVector, BigRational> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (w, b) in &other.terms {
                *terms.entry(u + w).or_insert_with(BigRational::zero) += a * b;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(self.with_terms(terms))
    }

    pub fn pow(&self, n: u32) -> ToricElement {
        let mut acc = ToricElement::one(self.context, self.semigroup.clone());
        for _ in 0..n {
            acc = acc.multiply(self).expect("same ring");
        }
        acc
    }

    /// `max_u |c_u|`, which is the supremum norm on the affinoid.
    pub fn gauss_norm(&self) -> GaussNorm {
        self.terms
            .values()
            .map(|c| self.context.norm(c))
            .max()
            .unwrap_or_else(|| GaussNorm::zero(self.prime()))
    }

    /// The term order used by [`ToricElement::leading_exponent`].
    pub fn term_order(&self) -> Result<TermOrder> {
        TermOrder::new(self.semigroup.order_basis()?)
    }

    /// Smallest exponent (in the semigroup's term order) among those whose
    /// coefficient attains the Gauss norm.
    pub fn leading_exponent(&self) -> Result<LatticeVector> {
        let order = self.term_order()?;
        self.leading_exponent_with(&order)
    }

    pub fn leading_exponent_with(&self, order: &TermOrder) -> Result<LatticeVector> {
        if self.is_zero() {
            return Err(ToricError::domain("the zero element has no leading exponent"));
        }
        let norm = self.gauss_norm();
        self.terms
            .iter()
            .filter(|(_, c)| self.context.norm(c) == norm)
            .map(|(u, _)| u)
            .min_by(|a, b| order.compare(a, b))
            .cloned()
            .ok_or_else(|| ToricError::internal("no term attains the norm"))
    }

    /// Termwise reduction of a unit-ball element to `F_p[S]`.
    pub fn reduce_mod_p(&self) -> Result<ResidueElement> {
        if self.gauss_norm() > GaussNorm::one(self.prime()) {
            return Err(ToricError::domain(format!(
                "not in the unit ball: norm {}",
                self.gauss_norm()
            )));
        }
        let mut terms = BTreeMap::new();
        for (u, c) in &self.terms {
            let r = self.context.residue(c)?;
            if r != 0 {
                terms.insert(u.clone(), r);
            }
        }
        Ok(ResidueElement {
            prime: self.prime(),
            semigroup: self.semigroup.clone(),
            terms,
        })
    }

    /// Same terms, housed on a larger semigroup.
    pub fn include_into(&self, target: &Arc<AffineSemigroup>) -> Result<ToricElement> {
        if !self.semigroup.is_subsemigroup_of(target) {
            return Err(ToricError::domain("source semigroup is not contained in the target"));
        }
        Ok(ToricElement {
            context: self.context,
            semigroup: target.clone(),
            terms: self.terms.clone(),
        })
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            prime: self.prime(),
            semigroup: SemigroupSpec::Inline((*self.semigroup).clone()),
            terms: self
                .terms
                .iter()
                .map(|(u, c)| TermJson {
                    exp: u.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ElementJson) -> Result<ToricElement> {
        let context = PAdicContext::new(json.prime)?;
        let semigroup = Arc::new(json.semigroup.resolve()?);
        let terms = json
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), t.coefficient()?)))
            .collect::<Result<Vec<_>>>()?;
        ToricElement::new(context, semigroup, terms)
    }
}

impl fmt::Display for ToricElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(u, c)| format!("{c}*x^{u}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of `F_p[S]`, coefficients in `1..p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueElement {
    prime: u64,
    semigroup: Arc<AffineSemigroup>,
    terms: BTreeMap<LatticeVector, u64>,
}

impl ResidueElement {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn semigroup(&self) -> &Arc<AffineSemigroup> {
        &self.semigroup
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVector, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &ResidueElement) -> Result<()> {
        if self.prime != other.prime || !same_semigroup(&self.semigroup, &other.semigroup) {
            return Err(ToricError::domain("residue elements live in different rings"));
        }
        Ok(())
    }

    pub fn add(&self, other: &ResidueElement) -> Result<ResidueElement> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        for (u, &c) in &other.terms {
            let e = terms.entry(u.clone()).or_insert(0);
            *e = (*e + c) % self.prime;
            if *e == 0 {
                terms.remove(u);
            }
        }
        Ok(ResidueElement { terms, ..self.clone() })
    }

    pub fn multiply(&self, other: &ResidueElement) -> Result<ResidueElement> {
        self.check_compatible(other)?;
        let mut terms: BTreeMap<LatticeVector, u64> = BTreeMap::new();
        for (u, &a) in &self.terms {
            for (w, &b) in &other.terms {
                let e = terms.entry(u + w).or_insert(0);
                *e = (*e + mul_mod(a, b, self.prime)) % self.prime;
            }
        }
        terms.retain(|_, c| *c != 0);
        Ok(ResidueElement { terms, ..self.clone() })
    }

    pub fn include_into(&self, target: &Arc<AffineSemigroup>) -> Result<ResidueElement> {
        if !self.semigroup.is_subsemigroup_of(target) {
            return Err(ToricError::domain("source semigroup is not contained in the target"));
        }
        Ok(ResidueElement {
            semigroup: target.clone(),
            ..self.clone()
        })
    }
}

impl Serialize for ResidueElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exp: &'a LatticeVector,
            coeff: u64,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            prime: u64,
            terms: Vec<Term<'a>>,
        }
        Repr {
            prime: self.prime,
            terms: self.terms.iter().map(|(exp, &coeff)| Term { exp, coeff }).collect(),
        }
        .serialize(s)
    }
}

/// How an element names its semigroup: `S_σ` for a cone, the full lattice
/// `M` of a given rank, or an inline semigroup record.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SemigroupSpec {
    Sigma { sigma: Cone },
    Torus { torus: usize },
    Inline(AffineSemigroup),
}

impl SemigroupSpec {
    pub fn resolve(&self) -> Result<AffineSemigroup> {
        match self {
            SemigroupSpec::Sigma { sigma } => semigroup_of_cone(sigma),
            SemigroupSpec::Torus { torus } => Ok(AffineSemigroup::lattice(*torus)),
            SemigroupSpec::Inline(s) => Ok(s.clone()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: LatticeVector,
    pub num: String,
    #[serde(default = "one_string")]
    pub den: String,
}

fn one_string() -> String {
    "1".to_string()
}

impl TermJson {
    pub fn coefficient(&self) -> Result<BigRational> {
        let parse = |s: &str| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|e| ToricError::Parse(format!("bad integer {s:?}: {e}")))
        };
        let den = parse(&self.den)?;
        if den.is_zero() {
            return Err(ToricError::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(parse(&self.num)?, den))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementJson {
    pub prime: u64,
    pub semigroup: SemigroupSpec,
    pub terms: Vec<TermJson>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v<const N: usize>(c: [i64; N]) -> LatticeVector {
        LatticeVector::from(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn quadrant() -> Arc<AffineSemigroup> {
        Arc::new(semigroup_of_cone(&Cone::from_rays(2, &[v([1, 0]), v([0, 1])]).unwrap()).unwrap())
    }

    fn elem(p: u64, s: &Arc<AffineSemigroup>, terms: &[([i64; 2], BigRational)]) -> ToricElement {
        ToricElement::new(
            PAdicContext::new(p).unwrap(),
            s.clone(),
            terms.iter().map(|(u, c)| (v(*u), c.clone())),
        )
        .unwrap()
    }

    #[test]
    fn arithmetic() {
        let s = quadrant();
        let f = elem(5, &s, &[([1, 0], q(2, 1))]);
        let zero = ToricElement::zero(f.context(), s.clone());
        assert_eq!(f.add(&zero).unwrap(), f);
        assert!(f.add(&f.neg()).unwrap().is_zero());
        let g = elem(5, &s, &[([1, 0], q(3, 1))]);
        assert_eq!(f.add(&g).unwrap(), elem(5, &s, &[([1, 0], q(5, 1))]));
        let x = elem(5, &s, &[([1, 0], q(1, 1))]);
        let y = elem(5, &s, &[([0, 1], q(1, 1))]);
        assert_eq!(x.multiply(&y).unwrap(), elem(5, &s, &[([1, 1], q(1, 1))]));
        assert_eq!(f.multiply(&ToricElement::one(f.context(), s.clone())).unwrap(), f);
        let sum = x.add(&y).unwrap();
        let diff = x.sub(&y).unwrap();
        assert_eq!(
            sum.multiply(&diff).unwrap(),
            elem(5, &s, &[([2, 0], q(1, 1)), ([0, 2], q(-1, 1))])
        );
    }

    #[test]
    fn exponents_must_lie_in_the_semigroup() {
        let s = quadrant();
        let ctx = PAdicContext::new(5).unwrap();
        assert!(ToricElement::new(ctx, s, [(v([-1, 0]), q(1, 1))]).is_err());
    }

    #[test]
    fn norms() {
        let s = quadrant();
        let f = elem(5, &s, &[([1, 0], q(5, 1)), ([0, 1], q(3, 1))]);
        assert_eq!(f.gauss_norm().to_string(), "1");
        assert_eq!(elem(5, &s, &[([1, 1], q(1, 5))]).gauss_norm().to_string(), "5");
        assert_eq!(ToricElement::zero(f.context(), s).gauss_norm().to_string(), "0");
    }

    #[test]
    fn leading_exponents() {
        let s = quadrant();
        // order basis is ((0,1),(1,0)); (1,0) has coordinates (0,1) and
        // (0,1) has coordinates (1,0), so (1,0) comes first
        assert_eq!(s.order_basis().unwrap(), vec![v([0, 1]), v([1, 0])]);
        let f = elem(5, &s, &[([1, 0], q(1, 1)), ([0, 1], q(1, 1))]);
        assert_eq!(f.leading_exponent().unwrap(), v([1, 0]));
        let g = elem(5, &s, &[([2, 0], q(5, 1)), ([1, 1], q(1, 1))]);
        assert_eq!(g.leading_exponent().unwrap(), v([1, 1]));
        assert_eq!(elem(5, &s, &[([3, 2], q(7, 1))]).leading_exponent().unwrap(), v([3, 2]));
        assert!(ToricElement::zero(g.context(), s).leading_exponent().is_err());
    }

    #[test]
    fn reduction() {
        let s = quadrant();
        let f = elem(5, &s, &[([1, 0], q(5, 1)), ([0, 1], q(3, 1))]);
        let r = f.reduce_mod_p().unwrap();
        assert_eq!(r.terms().iter().collect::<Vec<_>>(), vec![(&v([0, 1]), &3)]);
        let c = elem(5, &s, &[([0, 0], q(7, 2))]).reduce_mod_p().unwrap();
        assert_eq!(c.terms()[&v([0, 0])], 1);
        assert!(elem(5, &s, &[([1, 0], q(1, 5))]).reduce_mod_p().is_err());
    }

    #[test]
    fn inclusion() {
        let s = quadrant();
        let half = Arc::new(semigroup_of_cone(&Cone::from_rays(2, &[v([0, 1])]).unwrap()).unwrap());
        let torus = Arc::new(AffineSemigroup::lattice(2));
        let x = elem(5, &s, &[([1, 0], q(1, 1))]);
        assert_eq!(x.include_into(&half).unwrap().terms(), x.terms());
        assert_eq!(x.include_into(&s).unwrap(), x);
        let y = elem(5, &s, &[([0, 1], q(1, 1))]);
        assert_eq!(y.include_into(&torus).unwrap().terms(), y.terms());
        let t = ToricElement::one(x.context(), torus);
        assert!(t.include_into(&s).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = quadrant();
        let f = elem(5, &s, &[([1, 0], q(5, 3)), ([0, 1], q(-1, 1))]);
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        assert_eq!(ToricElement::from_json(&back).unwrap(), f);
        let by_cone = r#"{"prime":5,"semigroup":{"sigma":{"rank":2,"rays":[[1,0],[0,1]]}},
            "terms":[{"exp":[1,0],"num":"5","den":"1"},{"exp":[0,1],"num":"3"}]}"#;
        let g = ToricElement::from_json(&serde_json::from_str(by_cone).unwrap()).unwrap();
        assert_eq!(g.gauss_norm().to_string(), "1");
        assert_eq!(g.semigroup().as_ref(), s.as_ref());
    }
}
