use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{MaybeOrdered, Rational, Ring};

/// Element of ℚ[t, z, z⁻¹], stored as a sparse map from `(t exponent, z exponent)`
/// to nonzero coefficients.
///
/// The subring ℚ[t², t³, z, z⁻¹] is exactly the set of elements with no term
/// of t-degree 1, see [`Laurent::in_subring`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    terms: BTreeMap<(u32, i32), Rational>,
}

/// One `c·t^t·z^z` record of the JSON encoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentTerm {
    pub t: u32,
    pub z: i32,
    pub c: Rational,
}

impl Laurent {
    pub fn monomial(c: Rational, t: u32, z: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((t, z), c);
        }
        Laurent { terms }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn z() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn z_inv() -> Self {
        Self::monomial(Rational::one(), 0, -1)
    }

    pub fn t_pow(e: u32) -> Self {
        Self::monomial(Rational::one(), e, 0)
    }

    pub fn from_terms<I: IntoIterator<Item = LaurentTerm>>(terms: I) -> Self {
        let mut out = Laurent::zero();
        for LaurentTerm { t, z, c } in terms {
            out.add_term(t, z, &c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = LaurentTerm> + '_ {
        self.terms.iter().map(|(&(t, z), c)| LaurentTerm { t, z, c: c.clone() })
    }

    pub fn coeff(&self, t: u32, z: i32) -> Rational {
        self.terms.get(&(t, z)).cloned().unwrap_or_else(Rational::zero)
    }

    /// True iff the element lies in ℚ[t², t³, z, z⁻¹]: no monomial has t-degree 1.
    pub fn in_subring(&self) -> bool {
        self.terms.keys().all(|&(t, _)| t != 1)
    }

    fn add_term(&mut self, t: u32, z: i32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((t, z)).or_insert_with(Rational::zero);
        entry.add_assign_ref(c);
        if entry.is_zero() {
            self.terms.remove(&(t, z));
        }
    }
}

impl Ring for Laurent {
    const TAG: &'static str = "Q[t2,t3,z,z-1]";

    fn zero() -> Self {
        Laurent::default()
    }
    fn one() -> Self {
        Self::constant(Rational::one())
    }
    fn from_int(v: i64) -> Self {
        Self::constant(Rational::from_int(v))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }
    fn times(&self, rhs: &Self) -> Self {
        let mut out = Laurent::zero();
        for (&(ta, za), ca) in &self.terms {
            for (&(tb, zb), cb) in &rhs.terms {
                out.add_term(ta + tb, za + zb, &(ca * cb));
            }
        }
        out
    }
    fn negated(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
    /// Units are the nonzero monomials `c·z^b`.
    fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(t, z), c) = self.terms.iter().next()?;
        if t != 0 {
            return None;
        }
        Some(Self::monomial(c.recip()?, 0, -z))
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        for (&(t, z), c) in &rhs.terms {
            self.add_term(t, z, c);
        }
    }
}

impl MaybeOrdered for Laurent {
    fn try_abs(&self) -> Option<Rational> {
        None
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (&(t, z), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if t > 0 {
                write!(f, "t^{t}")?;
            }
            if z != 0 {
                write!(f, "z^{z}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms())
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<LaurentTerm>::deserialize(d)?;
        Ok(Laurent::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distributes_over_z() {
        // (1 - z^-1) z = z - 1
        let lhs = Laurent::one().minus(&Laurent::z_inv()).times(&Laurent::z());
        assert_eq!(lhs, Laurent::z().minus(&Laurent::one()));
        let x = Laurent::z().plus(&Laurent::t_pow(3));
        assert!(x.plus(&x.negated()).is_zero());
    }

    #[test]
    fn subring_membership() {
        let e = Laurent::z_inv().minus(&Laurent::one()).times(&Laurent::t_pow(2));
        assert!(e.in_subring());
        assert!(!Laurent::t().in_subring());
        assert!(Laurent::one().in_subring());
        // t^2 * t^3 stays inside, t^3 - t^3 + t does not
        assert!(Laurent::t_pow(2).times(&Laurent::t_pow(3)).in_subring());
    }

    #[test]
    fn units_are_z_monomials() {
        let u = Laurent::monomial(Rational::new(2, 3), 0, 4);
        assert_eq!(u.times(&u.unit_inverse().unwrap()), Laurent::one());
        assert!(Laurent::t_pow(2).unit_inverse().is_none());
        assert!(Laurent::one().plus(&Laurent::z()).unit_inverse().is_none());
    }

    #[test]
    fn json_terms_sorted() {
        let e = Laurent::z().plus(&Laurent::monomial(Rational::new(-1, 2), 2, -1));
        let js = serde_json::to_string(&e).unwrap();
        assert_eq!(js, r#"[{"t":0,"z":1,"c":"1/1"},{"t":2,"z":-1,"c":"-1/2"}]"#);
        let back: Laurent = serde_json::from_str(&js).unwrap();
        assert_eq!(back, e);
    }

    fn arb_sub() -> impl Strategy<Value = Laurent> {
        prop::collection::vec((prop_oneof![Just(0u32), 2u32..6], -2i32..3, -5i64..6), 0..4).prop_map(|ts| {
            Laurent::from_terms(ts.into_iter().map(|(t, z, c)| LaurentTerm { t, z, c: Rational::from_int(c) }))
        })
    }

    proptest! {
        #[test]
        fn subring_closed(a in arb_sub(), b in arb_sub()) {
            prop_assert!(a.in_subring() && b.in_subring());
            prop_assert!(a.plus(&b).in_subring());
            prop_assert!(a.times(&b).in_subring());
        }
    }
}
