//! The `s`-fold tensor power `H*(X)^{⊗s} ≅ H*(X^s)`.
//!
//! Terms are keyed by `s`-tuples of basis monomials. In both supported
//! coefficient regimes the Koszul sign of the slotwise product is `+1`, so
//! multiplication is plain slotwise multiplication.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ring::{monomial_product, Element, Generator, Monomial, RingError, RingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("tensor power must have s >= 2 factors (got {0})")]
    TooFewSlots(u32),
    #[error("slot {slot} out of range 1..={s}")]
    SlotOutOfRange { slot: u32, s: u32 },
    #[error("tensor mismatch: {0} (s={1}) vs {2} (s={3})")]
    Mismatch(RingSpec, u32, RingSpec, u32),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `A[i,j]^{(l)}`: a generator pulled back from slot `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlottedGenerator {
    pub gen: Generator,
    pub slot: u32,
}

impl fmt::Display for SlottedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.gen, self.slot)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    spec: RingSpec,
    s: u32,
    terms: BTreeMap<Vec<Monomial>, BigInt>,
}

impl TensorElement {
    pub fn zero(spec: RingSpec, s: u32) -> Result<Self, TensorError> {
        if s < 2 {
            return Err(TensorError::TooFewSlots(s));
        }
        Ok(TensorElement { spec, s, terms: BTreeMap::new() })
    }

    pub fn one(spec: RingSpec, s: u32) -> Result<Self, TensorError> {
        let mut t = Self::zero(spec, s)?;
        t.add_term(vec![Monomial::one(); s as usize], BigInt::one());
        Ok(t)
    }

    /// Places `a` in slot `slot` (1-based) with units elsewhere.
    pub fn inject(a: &Element, slot: u32, s: u32) -> Result<Self, TensorError> {
        let mut t = Self::zero(a.spec(), s)?;
        if slot < 1 || slot > s {
            return Err(TensorError::SlotOutOfRange { slot, s });
        }
        for (m, c) in a.terms() {
            let mut key = vec![Monomial::one(); s as usize];
            key[slot as usize - 1] = m.clone();
            t.add_term(key, c.clone());
        }
        Ok(t)
    }

    pub fn slotted_generator(spec: RingSpec, s: u32, gen: Generator, slot: u32) -> Result<Self, TensorError> {
        let a = Element::generator(spec, gen.i, gen.j)?;
        Self::inject(&a, slot, s)
    }

    /// Builds a tensor from `(tuple, coefficient)` pairs; tuples must consist of
    /// basis monomials.
    pub fn from_terms<I>(spec: RingSpec, s: u32, terms: I) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (Vec<Monomial>, BigInt)>,
    {
        let mut t = Self::zero(spec, s)?;
        for (k, c) in terms {
            assert_eq!(k.len(), s as usize, "tuple length must equal s");
            t.add_term(k, c);
        }
        Ok(t)
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &[Monomial]) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Per-slot factor counts, if all terms share them.
    pub fn multidegree(&self) -> Option<Vec<usize>> {
        let mut it = self.terms.keys().map(|k| k.iter().map(Monomial::len).collect::<Vec<_>>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Total cohomological degree, if homogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|k| k.iter().map(Monomial::len).sum::<usize>());
        let first = it.next()?;
        it.all(|d| d == first)
            .then_some(first as u32 * self.spec.generator_degree())
    }

    fn add_term(&mut self, key: Vec<Monomial>, coeff: BigInt) {
        use std::collections::btree_map::Entry;
        let coeff = self.spec.coeff().reduce(coeff);
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if !coeff.is_zero() {
                    v.insert(coeff);
                }
            }
            Entry::Occupied(mut o) => {
                let c = self.spec.coeff().reduce(o.get() + coeff);
                if c.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), TensorError> {
        if self.spec != other.spec || self.s != other.s {
            return Err(TensorError::Mismatch(self.spec, self.s, other.spec, other.s));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.try_add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = TensorElement { spec: self.spec, s: self.s, terms: BTreeMap::new() };
        for (key, c) in &self.terms {
            out.add_term(key.clone(), c * k);
        }
        out
    }

    /// Slotwise product.
    pub fn tmultiply(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_same(other)?;
        let mut cache: HashMap<(&Monomial, &Monomial), Vec<(Monomial, i64)>> = HashMap::new();
        let mut acc: BTreeMap<Vec<Monomial>, BigInt> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            'pairs: for (kb, cb) in &other.terms {
                for (ma, mb) in ka.iter().zip(kb) {
                    let prod = cache
                        .entry((ma, mb))
                        .or_insert_with(|| monomial_product(&self.spec, ma, mb));
                    if prod.is_empty() {
                        continue 'pairs;
                    }
                }
                let slots: Vec<&[(Monomial, i64)]> =
                    ka.iter().zip(kb).map(|(ma, mb)| cache[&(ma, mb)].as_slice()).collect();
                expand_tuples(&slots, &(ca * cb), &mut acc);
            }
        }
        let mut out = TensorElement { spec: self.spec, s: self.s, terms: BTreeMap::new() };
        for (k, c) in acc {
            out.add_term(k, c);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.spec, self.s).expect("valid s");
        for _ in 0..e {
            acc = acc.tmultiply(self).expect("same tensor power");
        }
        acc
    }

    /// Relabels the points in every slot; see [`Element::relabel`].
    pub fn relabel(&self, perm: &[u32]) -> Result<Self, TensorError> {
        let mut out = Self::zero(self.spec, self.s)?;
        for (key, c) in &self.terms {
            let mut term = Self::one(self.spec, self.s)?.scale(c);
            for (l, m) in key.iter().enumerate() {
                let slot = Element::from_monomial(self.spec, m.clone(), BigInt::one()).relabel(perm)?;
                term = term.tmultiply(&Self::inject(&slot, l as u32 + 1, self.s)?)?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Pullback along the iterated diagonal `X -> X^s`: multiplies the slot
    /// components together inside the single ring.
    pub fn diagonal_pullback(&self) -> Element {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (key, c) in &self.terms {
            let mut partial: BTreeMap<Monomial, BigInt> = BTreeMap::new();
            partial.insert(Monomial::one(), c.clone());
            for m in key {
                let mut next: BTreeMap<Monomial, BigInt> = BTreeMap::new();
                for (pm, pc) in &partial {
                    for (r, k) in monomial_product(&self.spec, pm, m) {
                        *next.entry(r).or_default() += pc * k;
                    }
                }
                next.retain(|_, c| !c.is_zero());
                partial = next;
            }
            for (m, c) in partial {
                *acc.entry(m).or_default() += c;
            }
        }
        Element::from_map(self.spec, acc)
    }
}

fn expand_tuples(slots: &[&[(Monomial, i64)]], base: &BigInt, acc: &mut BTreeMap<Vec<Monomial>, BigInt>) {
    let mut key: Vec<Monomial> = Vec::with_capacity(slots.len());
    fn rec(
        slots: &[&[(Monomial, i64)]],
        depth: usize,
        coeff: i64,
        key: &mut Vec<Monomial>,
        base: &BigInt,
        acc: &mut BTreeMap<Vec<Monomial>, BigInt>,
    ) {
        if depth == slots.len() {
            *acc.entry(key.clone()).or_default() += base * coeff;
            return;
        }
        for (m, c) in slots[depth] {
            key.push(m.clone());
            rec(slots, depth + 1, coeff * c, key, base, acc);
            key.pop();
        }
    }
    rec(slots, 0, 1, &mut key, base, acc);
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<(&Vec<Monomial>, &BigInt)> = self.terms.iter().collect();
        keys.sort_by(|a, b| {
            let da: usize = a.0.iter().map(Monomial::len).sum();
            let db: usize = b.0.iter().map(Monomial::len).sum();
            (db, b.0).cmp(&(da, a.0))
        });
        let rendered: Vec<(Vec<String>, &BigInt)> = keys
            .iter()
            .map(|(k, c)| {
                let factors = k
                    .iter()
                    .enumerate()
                    .flat_map(|(l, m)| {
                        m.factors()
                            .iter()
                            .map(move |g| SlottedGenerator { gen: *g, slot: l as u32 + 1 }.to_string())
                    })
                    .collect();
                (factors, *c)
            })
            .collect();
        crate::expr::write_sum(f, rendered.iter().map(|(fs, c)| (&fs[..], *c)))
    }
}

/// Spanning set of the degree-`(m-1)` part of the kernel of the diagonal
/// pullback: `A[i,j]@l - A[i,j]@1` for every generator and `l = 2..=s`.
pub fn kernel_degree1_basis(spec: RingSpec, s: u32) -> Result<Vec<TensorElement>, TensorError> {
    let mut out = Vec::new();
    for g in spec.generators() {
        let first = TensorElement::slotted_generator(spec, s, g, 1)?;
        for l in 2..=s {
            out.push(TensorElement::slotted_generator(spec, s, g, l)?.try_sub(&first)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Coefficients;

    fn sg(spec: RingSpec, s: u32, i: u32, j: u32, l: u32) -> TensorElement {
        TensorElement::slotted_generator(spec, s, Generator::new(i, j), l).unwrap()
    }

    fn mono(gens: &[(u32, u32)]) -> Monomial {
        Monomial::from_generators(gens.iter().map(|&(i, j)| Generator::new(i, j)).collect()).unwrap()
    }

    #[test]
    fn inject_examples() {
        let spec = RingSpec::auto(3, 2, 0).unwrap();
        let a = Element::generator(spec, 2, 1).unwrap();
        let t = TensorElement::inject(&a, 1, 2).unwrap();
        assert_eq!(t.to_string(), "A[2,1]@1");
        let one = TensorElement::inject(&Element::one(spec), 2, 3).unwrap();
        assert_eq!(one, TensorElement::one(spec, 3).unwrap());
        assert!(matches!(
            TensorElement::inject(&a, 3, 2),
            Err(TensorError::SlotOutOfRange { slot: 3, s: 2 })
        ));
        assert!(matches!(TensorElement::one(spec, 1), Err(TensorError::TooFewSlots(1))));
    }

    #[test]
    fn mu_in_every_slot_is_a_basis_tuple() {
        let spec = RingSpec::auto(3, 4, 0).unwrap();
        let s = 3;
        let mu = Element::normal_form(
            spec,
            BigInt::one(),
            &[Generator::new(2, 1), Generator::new(3, 1), Generator::new(4, 1)],
        )
        .unwrap();
        let mut acc = TensorElement::one(spec, s).unwrap();
        for l in 1..=s {
            acc = acc.tmultiply(&TensorElement::inject(&mu, l, s).unwrap()).unwrap();
        }
        assert_eq!(acc.len(), 1);
        let m = mono(&[(4, 1), (3, 1), (2, 1)]);
        assert_eq!(acc.coefficient(&[m.clone(), m.clone(), m]), BigInt::one());
    }

    #[test]
    fn tmultiply_examples() {
        let spec = RingSpec::auto(3, 2, 0).unwrap();
        let a1 = sg(spec, 2, 2, 1, 1);
        let a2 = sg(spec, 2, 2, 1, 2);
        assert!(a1.tmultiply(&a1).unwrap().is_zero());
        let both = a1.tmultiply(&a2).unwrap();
        let m = mono(&[(2, 1)]);
        assert_eq!(both.len(), 1);
        assert_eq!(both.coefficient(&[m.clone(), m.clone()]), BigInt::one());

        let diff = a1.try_sub(&a2).unwrap();
        let sq = diff.tmultiply(&diff).unwrap();
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.coefficient(&[m.clone(), m]), BigInt::from(-2));
        assert_eq!(sq.to_string(), "-2*A[2,1]@1*A[2,1]@2");
    }

    #[test]
    fn koszul_sign_is_trivial() {
        // (x + y)^2 == x^2 + 2xy + y^2 for slot-disjoint degree-(m-1) classes
        for spec in [RingSpec::auto(3, 3, 0).unwrap(), RingSpec::auto(2, 3, 0).unwrap()] {
            let x = sg(spec, 2, 3, 1, 1);
            let y = sg(spec, 2, 3, 2, 2);
            let lhs = x.try_add(&y).unwrap().pow(2);
            let xy = x.tmultiply(&y).unwrap();
            let yx = y.tmultiply(&x).unwrap();
            assert_eq!(xy, yx);
            let rhs = x.pow(2).try_add(&xy.scale(&BigInt::from(2))).unwrap().try_add(&y.pow(2)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn diagonal_pullback_examples() {
        let spec = RingSpec::auto(3, 3, 0).unwrap();
        let s = 3;
        for l in 2..=s {
            let v = sg(spec, s, 3, 1, l).try_sub(&sg(spec, s, 3, 1, 1)).unwrap();
            assert!(v.diagonal_pullback().is_zero());
        }
        assert_eq!(sg(spec, s, 2, 1, 1).diagonal_pullback(), Element::generator(spec, 2, 1).unwrap());

        // sum_{l<s} A^{(l)} - (s-1) A^{(s)}
        let mut f = sg(spec, s, 2, 1, s).scale(&BigInt::from(-(s as i64 - 1)));
        for l in 1..s {
            f = f.try_add(&sg(spec, s, 2, 1, l)).unwrap();
        }
        assert!(f.diagonal_pullback().is_zero());
    }

    #[test]
    fn kernel_basis_counts() {
        let spec = RingSpec::auto(3, 2, 0).unwrap();
        let k = kernel_degree1_basis(spec, 2).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].to_string(), "-A[2,1]@1 + A[2,1]@2");

        let spec = RingSpec::new(2, 2, 2, Coefficients::Mod2).unwrap();
        let k = kernel_degree1_basis(spec, 2).unwrap();
        assert_eq!(k.len(), 5);
        for v in &k {
            assert!(v.diagonal_pullback().is_zero());
            assert_eq!(v.degree(), Some(1));
        }
        let spec = RingSpec::auto(3, 3, 1).unwrap();
        assert_eq!(kernel_degree1_basis(spec, 3).unwrap().len(), 2 * 6);
    }

    #[test]
    fn mismatch_is_reported() {
        let spec = RingSpec::auto(3, 2, 0).unwrap();
        let a = TensorElement::one(spec, 2).unwrap();
        let b = TensorElement::one(spec, 3).unwrap();
        assert!(matches!(a.tmultiply(&b), Err(TensorError::Mismatch(..))));
    }
}
