//! Cohomology rings of ordered configuration spaces.
//!
//! `H*(Conf(R^m, N))` is generated by classes `A[i,j]` (`1 <= j < i <= N`) of
//! degree `m - 1`, subject to `A[i,j]^2 = 0` and the Arnold relation
//! `A[i,k] A[i,j] = (A[i,k] - A[i,j]) A[k,j]` for `i > k > j`. Monomials with
//! pairwise distinct first indices form an additive basis; we keep them with
//! strictly decreasing first index.
//!
//! The punctured ring `H*(Conf(R^m - Q_p, n))` is the quotient of the ring on
//! `N = p + n` points by the ideal spanned by basis monomials containing a
//! generator `A[i,j]` with `i <= p`.
//!
//! Only two coefficient regimes are supported: integers for odd `m` (generators
//! have even degree, so everything commutes) and `Z/2` for any `m`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Integers,
    Mod2,
}

impl Coefficients {
    /// Integers for odd `m`, `Z/2` for even `m`.
    pub fn for_dimension(m: u32) -> Self {
        if m % 2 == 1 {
            Coefficients::Integers
        } else {
            Coefficients::Mod2
        }
    }

    pub(crate) fn reduce(self, c: BigInt) -> BigInt {
        match self {
            Coefficients::Integers => c,
            Coefficients::Mod2 => c.mod_floor(&BigInt::from(2)),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => f.write_str("integers"),
            Coefficients::Mod2 => f.write_str("mod2"),
        }
    }
}

impl std::str::FromStr for Coefficients {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "integers" | "z" | "int" => Ok(Coefficients::Integers),
            "mod2" | "z2" | "f2" => Ok(Coefficients::Mod2),
            other => Err(format!("unknown coefficient ring `{other}` (expected integers or mod2)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("unsupported-signed-even-m: integer coefficients require odd m (got m = {0})")]
    UnsupportedSignedEvenM(u32),
    #[error("ambient dimension must be at least 2 (got m = {0})")]
    DimensionTooSmall(u32),
    #[error("at least one robot is required")]
    NoRobots,
    #[error("invalid generator A[{i},{j}]: {reason}")]
    InvalidGenerator { i: u32, j: u32, reason: &'static str },
    #[error("ring mismatch: {0} vs {1}")]
    SpecMismatch(RingSpec, RingSpec),
    #[error("invalid relabeling: {0}")]
    InvalidPermutation(String),
    #[error("number of factors {r} exceeds the number of robots {n}")]
    TooManyFactors { r: usize, n: u32 },
}

/// Parameters fixing one ring: ambient dimension `m`, robots `n`, punctures `p`
/// and the coefficient regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    m: u32,
    n: u32,
    p: u32,
    coeff: Coefficients,
}

impl RingSpec {
    pub fn new(m: u32, n: u32, p: u32, coeff: Coefficients) -> Result<Self, RingError> {
        if m < 2 {
            return Err(RingError::DimensionTooSmall(m));
        }
        if n < 1 {
            return Err(RingError::NoRobots);
        }
        if coeff == Coefficients::Integers && m % 2 == 0 {
            return Err(RingError::UnsupportedSignedEvenM(m));
        }
        Ok(RingSpec { m, n, p, coeff })
    }

    /// Ring with the coefficient regime picked from the parity of `m`.
    pub fn auto(m: u32, n: u32, p: u32) -> Result<Self, RingError> {
        Self::new(m, n, p, Coefficients::for_dimension(m))
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeff(&self) -> Coefficients {
        self.coeff
    }

    /// Total number of points `p + n` of the ambient unpunctured ring.
    pub fn points(&self) -> u32 {
        self.p + self.n
    }

    pub fn generator_degree(&self) -> u32 {
        self.m - 1
    }

    pub fn is_punctured(&self) -> bool {
        self.p > 0
    }

    pub fn with_coeff(&self, coeff: Coefficients) -> Result<Self, RingError> {
        Self::new(self.m, self.n, self.p, coeff)
    }

    pub fn check_generator(&self, g: Generator) -> Result<(), RingError> {
        let bad = |reason| RingError::InvalidGenerator { i: g.i, j: g.j, reason };
        if g.j < 1 {
            return Err(bad("indices start at 1"));
        }
        if g.j >= g.i {
            return Err(bad("requires j < i"));
        }
        if g.i > self.points() {
            return Err(bad("first index exceeds p + n"));
        }
        if g.i <= self.p {
            return Err(bad("first index must exceed p (obstacle classes vanish)"));
        }
        Ok(())
    }

    /// All ring generators, ordered by `(i, j)`.
    pub fn generators(&self) -> Vec<Generator> {
        (self.p + 1..=self.points())
            .flat_map(|i| (1..i).map(move |j| Generator { i, j }))
            .collect()
    }

    /// Rank of the ring as a module: `(p + n)! / p!`.
    pub fn dimension(&self) -> BigInt {
        (self.p + 1..=self.points()).fold(BigInt::one(), |acc, k| acc * k)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, n={}, p={}, {})", self.m, self.n, self.p, self.coeff)
    }
}

/// The class `A[i,j]`, `j < i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub i: u32,
    pub j: u32,
}

impl Generator {
    pub fn new(i: u32, j: u32) -> Self {
        Generator { i, j }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A[{},{}]", self.i, self.j)
    }
}

/// Basis monomial: factors with strictly decreasing first index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Monomial(Vec<Generator>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Sorts the factors; `None` if two share a first index (not a basis word).
    pub fn from_generators(mut factors: Vec<Generator>) -> Option<Self> {
        factors.sort_by(|a, b| b.cmp(a));
        if factors.windows(2).any(|w| w[0].i == w[1].i) {
            return None;
        }
        Some(Monomial(factors))
    }

    pub fn factors(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn with_inserted(&self, g: Generator) -> Monomial {
        let mut f = self.0.clone();
        let pos = f.partition_point(|x| x.i > g.i);
        f.insert(pos, g);
        Monomial(f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Multiplies a basis monomial by one generator, accumulating `sign * result`
/// into `out`. Products landing in the puncture ideal (a factor with first
/// index `<= floor`) are dropped.
fn mul_generator(mono: &Monomial, g: Generator, sign: i64, floor: u32, out: &mut Vec<(Monomial, i64)>) {
    let pos = mono.0.partition_point(|x| x.i > g.i);
    if pos == mono.0.len() || mono.0[pos].i != g.i {
        out.push((mono.with_inserted(g), sign));
        return;
    }
    let k = mono.0[pos].j;
    if k == g.j {
        return;
    }
    let (hi, lo) = (k.max(g.j), k.min(g.j));
    let bridge = Generator { i: hi, j: lo };
    if bridge.i <= floor {
        return;
    }
    let mut rest = mono.0.clone();
    rest.remove(pos);
    let rest = Monomial(rest);
    // A[i,hi] A[i,lo] = A[i,hi] A[hi,lo] - A[i,lo] A[hi,lo]
    mul_generator(&rest.with_inserted(Generator { i: g.i, j: hi }), bridge, sign, floor, out);
    mul_generator(&rest.with_inserted(Generator { i: g.i, j: lo }), bridge, -sign, floor, out);
}

/// Product of two basis monomials as a list of `(basis monomial, coefficient)`
/// with distinct monomials and nonzero integer coefficients.
pub(crate) fn monomial_product(spec: &RingSpec, a: &Monomial, b: &Monomial) -> Vec<(Monomial, i64)> {
    let mut current: BTreeMap<Monomial, i64> = BTreeMap::new();
    current.insert(a.clone(), 1);
    for &g in &b.0 {
        let mut next: BTreeMap<Monomial, i64> = BTreeMap::new();
        let mut buf = Vec::new();
        for (mono, c) in &current {
            buf.clear();
            mul_generator(mono, g, 1, spec.p, &mut buf);
            for (m, s) in buf.drain(..) {
                *next.entry(m).or_insert(0) += s * c;
            }
        }
        next.retain(|_, c| *c != 0);
        if spec.coeff == Coefficients::Mod2 {
            next.retain(|_, c| *c % 2 != 0);
        }
        current = next;
    }
    current.into_iter().collect()
}

/// Normal-form monomials with `r` factors.
pub fn basis(spec: &RingSpec, r: usize) -> Result<Vec<Monomial>, RingError> {
    if r > spec.n as usize {
        return Err(RingError::TooManyFactors { r, n: spec.n });
    }
    let firsts: Vec<u32> = (spec.p + 1..=spec.points()).rev().collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    basis_rec(&firsts, 0, r, &mut current, &mut out);
    out.sort();
    Ok(out)
}

fn basis_rec(firsts: &[u32], start: usize, r: usize, current: &mut Vec<Generator>, out: &mut Vec<Monomial>) {
    if current.len() == r {
        out.push(Monomial(current.clone()));
        return;
    }
    for idx in start..firsts.len() {
        let i = firsts[idx];
        for j in 1..i {
            current.push(Generator { i, j });
            basis_rec(firsts, idx + 1, r, current, out);
            current.pop();
        }
    }
}

pub(crate) fn check_permutation(spec: &RingSpec, perm: &[u32]) -> Result<(), RingError> {
    let total = spec.points() as usize;
    if perm.len() != total {
        return Err(RingError::InvalidPermutation(format!(
            "expected {total} images, got {}",
            perm.len()
        )));
    }
    let mut seen = vec![false; total];
    for (k, &v) in perm.iter().enumerate() {
        if v < 1 || v as usize > total || seen[v as usize - 1] {
            return Err(RingError::InvalidPermutation(format!("{perm:?} is not a permutation")));
        }
        seen[v as usize - 1] = true;
        if (k as u32) < spec.p && v != k as u32 + 1 {
            return Err(RingError::InvalidPermutation(format!("obstacle {} must stay fixed", k + 1)));
        }
    }
    Ok(())
}

/// A sparse linear combination of basis monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    spec: RingSpec,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Element {
    pub fn zero(spec: RingSpec) -> Self {
        Element { spec, terms: BTreeMap::new() }
    }

    pub fn one(spec: RingSpec) -> Self {
        Self::from_monomial(spec, Monomial::one(), BigInt::one())
    }

    pub fn generator(spec: RingSpec, i: u32, j: u32) -> Result<Self, RingError> {
        let g = Generator { i, j };
        spec.check_generator(g)?;
        Ok(Self::from_monomial(spec, Monomial(vec![g]), BigInt::one()))
    }

    pub fn from_monomial(spec: RingSpec, mono: Monomial, coeff: BigInt) -> Self {
        let mut e = Element::zero(spec);
        e.add_term(mono, coeff);
        e
    }

    /// Reduces `coeff * g_1 * ... * g_k` to normal form.
    pub fn normal_form(spec: RingSpec, coeff: BigInt, word: &[Generator]) -> Result<Self, RingError> {
        let mut acc = Element::from_monomial(spec, Monomial::one(), coeff);
        for &g in word {
            spec.check_generator(g)?;
            acc = acc.multiply(&Element::from_monomial(spec, Monomial(vec![g]), BigInt::one()))?;
        }
        Ok(acc)
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of factors shared by all terms, if the element is homogeneous.
    pub fn factor_count(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Monomial::len);
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }

    /// Cohomological degree, if homogeneous.
    pub fn degree(&self) -> Option<u32> {
        self.factor_count().map(|r| r as u32 * self.spec.generator_degree())
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, coeff: BigInt) {
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                let c = self.spec.coeff.reduce(coeff);
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let c = self.spec.coeff.reduce(o.get() + coeff);
                if c.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    fn check_same(&self, other: &Element) -> Result<(), RingError> {
        if self.spec != other.spec {
            return Err(RingError::SpecMismatch(self.spec, other.spec));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, RingError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Element {
        let mut out = Element::zero(self.spec);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn multiply(&self, other: &Element) -> Result<Element, RingError> {
        self.check_same(other)?;
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let cab = ca * cb;
                for (m, k) in monomial_product(&self.spec, ma, mb) {
                    *acc.entry(m).or_default() += &cab * k;
                }
            }
        }
        Ok(Element::from_map(self.spec, acc))
    }

    pub(crate) fn from_map(spec: RingSpec, map: BTreeMap<Monomial, BigInt>) -> Element {
        let terms = map
            .into_iter()
            .map(|(m, c)| (m, spec.coeff.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Element { spec, terms }
    }

    /// Applies a relabeling of the points: `perm[k-1]` is the image of point
    /// `k`. Obstacle points `1..=p` must be fixed. Uses `A[j,i] = (-1)^m A[i,j]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Element, RingError> {
        check_permutation(&self.spec, perm)?;
        let mut out = Element::zero(self.spec);
        for (mono, c) in &self.terms {
            let mut coeff = c.clone();
            let mut word = Vec::with_capacity(mono.len());
            for g in mono.factors() {
                let (a, b) = (perm[g.i as usize - 1], perm[g.j as usize - 1]);
                if a > b {
                    word.push(Generator { i: a, j: b });
                } else {
                    if self.spec.m % 2 == 1 {
                        coeff = -coeff;
                    }
                    word.push(Generator { i: b, j: a });
                }
            }
            out = out.try_add(&Element::normal_form(self.spec, coeff, &word)?)?;
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Element {
        let mut acc = Element::one(self.spec);
        for _ in 0..e {
            acc = acc.multiply(self).expect("same spec");
        }
        acc
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Vec<String>, &BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.factors().iter().map(|g| g.to_string()).collect(), c))
            .collect();
        let mut order: Vec<usize> = (0..terms.len()).collect();
        let keys: Vec<(usize, &Monomial)> = self.terms.keys().map(|m| (m.len(), m)).collect();
        order.sort_by(|&a, &b| keys[b].cmp(&keys[a]));
        crate::expr::write_sum(f, order.into_iter().map(|k| (&terms[k].0[..], terms[k].1)))
    }
}

// Operators panic on mismatched specs; use the `try_*` / `multiply` methods to
// get an error instead.
impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_add(&-rhs).expect("ring mismatch")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.multiply(rhs).expect("ring mismatch")
    }
}
