//! Zero-divisor cup-length certificates.
//!
//! A certificate is a list of degree-`(m-1)` classes in `H*(X^s)` that pull
//! back to zero along the iterated diagonal, together with their expanded
//! product. A nonzero product of `r` such factors shows `cl_s(X) >= r`, hence
//! `TC_s(X) >= r`.
//!
//! The builders here produce the standard families:
//!
//! * `pi`: `prod_{i=2..n} (sum_{l<s} A[i,1]@l - (s-1) A[i,1]@s)^s` over the
//!   integers (odd `m`); the product is `(s!(1-s))^{n-1} mu@1 ... mu@s` with
//!   `mu = A[2,1] A[3,1] ... A[n,1]`.
//! * `mu_s`: `prod_{i,l} (A[i,1]@1 - A[i,1]@l) * prod_{i>=3} (A[i,2]@1 - A[i,2]@2)`
//!   over `Z/2`, `s(n-1) - 1` factors. `w_s = A[2,1]@1 * mu_s` witnesses
//!   `mu_s != 0`.
//! * `nu_s`: the punctured analogue with `p >= 2` obstacles, `sn` factors.
//! * `pi_punctured`: the `pi` pattern on robots `p+1..p+n`, `sn` factors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{reduce_tensor, ReduceError};
use crate::ring::{Coefficients, Generator, RingError, RingSpec};
use crate::tensor::{kernel_degree1_basis, TensorElement, TensorError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("{kind} requires {requirement} (got {spec}, s={s})")]
    Regime {
        kind: CertificateKind,
        requirement: &'static str,
        spec: RingSpec,
        s: u32,
    },
    #[error("search too large: {generators} generators x s={s} exceeds the guard of {limit}")]
    SizeGuard { generators: usize, s: u32, limit: usize },
    #[error("empty certificate")]
    Empty,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("bad certificate record: {0}")]
    Record(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Pi,
    MuS,
    WS,
    NuS,
    PiPunctured,
    Custom,
}

impl CertificateKind {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateKind::Pi => "pi",
            CertificateKind::MuS => "mu_s",
            CertificateKind::WS => "w_s",
            CertificateKind::NuS => "nu_s",
            CertificateKind::PiPunctured => "pi_punctured",
            CertificateKind::Custom => "custom",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CertificateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "pi" => CertificateKind::Pi,
            "mu_s" => CertificateKind::MuS,
            "w_s" => CertificateKind::WS,
            "nu_s" => CertificateKind::NuS,
            "pi_punctured" => CertificateKind::PiPunctured,
            "custom" => CertificateKind::Custom,
            other => return Err(format!("unknown certificate `{other}`")),
        })
    }
}

/// An auxiliary product `multiplier * product` whose nonvanishing implies the
/// product itself is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub multiplier: TensorElement,
    pub value: TensorElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    kind: CertificateKind,
    factors: Vec<TensorElement>,
    product: TensorElement,
    witness: Option<Witness>,
}

/// Left-to-right product of `factors`.
pub fn expand(factors: &[TensorElement]) -> Result<TensorElement, CertificateError> {
    let first = factors.first().ok_or(CertificateError::Empty)?;
    let mut acc = TensorElement::one(first.spec(), first.s())?;
    for f in factors {
        acc = acc.tmultiply(f)?;
    }
    Ok(acc)
}

impl Certificate {
    pub fn from_factors(kind: CertificateKind, factors: Vec<TensorElement>) -> Result<Self, CertificateError> {
        let product = expand(&factors)?;
        Ok(Certificate { kind, factors, product, witness: None })
    }

    pub fn kind(&self) -> CertificateKind {
        self.kind
    }

    pub fn spec(&self) -> RingSpec {
        self.product.spec()
    }

    pub fn s(&self) -> u32 {
        self.product.s()
    }

    pub fn coeff(&self) -> Coefficients {
        self.spec().coeff()
    }

    pub fn factors(&self) -> &[TensorElement] {
        &self.factors
    }

    pub fn product(&self) -> &TensorElement {
        &self.product
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    pub fn length(&self) -> usize {
        self.factors.len()
    }

    /// Applies a relabeling of the robots to every factor and re-expands.
    pub fn relabel(&self, perm: &[u32]) -> Result<Self, CertificateError> {
        let factors = self
            .factors
            .iter()
            .map(|f| f.relabel(perm))
            .collect::<Result<Vec<_>, _>>()?;
        Certificate::from_factors(self.kind, factors)
    }

    pub fn record(&self, report: &VerificationReport) -> CertificateRecord {
        let spec = self.spec();
        CertificateRecord {
            kind: self.kind,
            m: spec.m(),
            n: spec.n(),
            p: spec.p(),
            coeff: spec.coeff(),
            s: self.s(),
            length: self.length(),
            factors: self.factors.iter().map(|f| f.to_string()).collect(),
            product: self.product.to_string(),
            product_terms: self.product.len(),
            witness: self.witness.as_ref().map(|w| w.value.to_string()),
            witness_terms: self.witness.as_ref().map(|w| w.value.len()),
            kernel_ok: report.kernel_ok,
            nonzero_ok: report.nonzero_ok,
            lower_bound: report.lower_bound,
        }
    }

    /// Rebuilds a certificate from its serialized factors (the stored product
    /// is not trusted; it is recomputed).
    pub fn from_record(rec: &CertificateRecord) -> Result<Self, CertificateError> {
        let spec = RingSpec::new(rec.m, rec.n, rec.p, rec.coeff)?;
        let parse = |text: &str| {
            reduce_tensor(text, spec, rec.s).map_err(|e: ReduceError| CertificateError::Record(e.to_string()))
        };
        let factors = rec
            .factors
            .iter()
            .map(|f| parse(f))
            .collect::<Result<Vec<_>, _>>()?;
        let mut cert = Certificate::from_factors(rec.kind, factors)?;
        if rec.kind == CertificateKind::WS {
            let multiplier = a21_first_slot(spec, rec.s)?;
            let value = multiplier.tmultiply(&cert.product)?;
            cert.witness = Some(Witness { multiplier, value });
        }
        Ok(cert)
    }
}

/// Serialized certificate, also used as the golden-file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub kind: CertificateKind,
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub coeff: Coefficients,
    pub s: u32,
    pub length: usize,
    pub factors: Vec<String>,
    pub product: String,
    pub product_terms: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_terms: Option<usize>,
    pub kernel_ok: bool,
    pub nonzero_ok: bool,
    pub lower_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub kernel_ok: bool,
    /// First factor (0-based) that is not a degree-`(m-1)` kernel class.
    pub failing_factor: Option<usize>,
    pub product_matches: bool,
    pub nonzero_ok: bool,
    pub witness_ok: Option<bool>,
    pub lower_bound: Option<usize>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.lower_bound.is_some()
    }
}

/// Re-expands the product and checks every factor against the diagonal.
pub fn verify(cert: &Certificate) -> VerificationReport {
    let failing_factor = cert
        .factors
        .iter()
        .position(|f| f.degree() != Some(cert.spec().generator_degree()) || !f.diagonal_pullback().is_zero());
    let kernel_ok = failing_factor.is_none();
    let product_matches = expand(&cert.factors).map(|p| p == cert.product).unwrap_or(false);
    let nonzero_ok = !cert.product.is_zero();
    let witness_ok = cert.witness.as_ref().map(|w| {
        !w.value.is_zero()
            && w.multiplier
                .tmultiply(&cert.product)
                .map(|v| v == w.value)
                .unwrap_or(false)
    });
    let ok = kernel_ok && product_matches && nonzero_ok && witness_ok.unwrap_or(true);
    VerificationReport {
        kernel_ok,
        failing_factor,
        product_matches,
        nonzero_ok,
        witness_ok,
        lower_bound: ok.then_some(cert.length()),
    }
}

fn slotted(spec: RingSpec, s: u32, i: u32, j: u32, l: u32) -> Result<TensorElement, TensorError> {
    TensorElement::slotted_generator(spec, s, Generator::new(i, j), l)
}

/// `sum_{l<s} A[i,1]@l - (s-1) A[i,1]@s`.
fn pi_factor(spec: RingSpec, s: u32, i: u32) -> Result<TensorElement, TensorError> {
    let mut f = slotted(spec, s, i, 1, s)?.scale(&BigInt::from(-(s as i64 - 1)));
    for l in 1..s {
        f = f.try_add(&slotted(spec, s, i, 1, l)?)?;
    }
    Ok(f)
}

/// `A[i,j]@1 - A[i,j]@l`.
fn slot_difference(spec: RingSpec, s: u32, i: u32, j: u32, l: u32) -> Result<TensorElement, TensorError> {
    slotted(spec, s, i, j, 1)?.try_sub(&slotted(spec, s, i, j, l)?)
}

fn a21_first_slot(spec: RingSpec, s: u32) -> Result<TensorElement, TensorError> {
    slotted(spec, s, 2, 1, 1)
}

fn regime(kind: CertificateKind, requirement: &'static str, spec: RingSpec, s: u32) -> CertificateError {
    CertificateError::Regime { kind, requirement, spec, s }
}

fn check_s(kind: CertificateKind, spec: RingSpec, s: u32) -> Result<(), CertificateError> {
    if s < 2 {
        return Err(regime(kind, "s >= 2", spec, s));
    }
    Ok(())
}

pub fn build_pi(spec: RingSpec, s: u32) -> Result<Certificate, CertificateError> {
    let kind = CertificateKind::Pi;
    check_s(kind, spec, s)?;
    if spec.p() != 0 || spec.coeff() != Coefficients::Integers || spec.n() < 2 {
        return Err(regime(kind, "p = 0, n >= 2 and integer coefficients (odd m)", spec, s));
    }
    let mut factors = Vec::new();
    for i in 2..=spec.n() {
        let f = pi_factor(spec, s, i)?;
        factors.extend(std::iter::repeat_n(f, s as usize));
    }
    Certificate::from_factors(kind, factors)
}

fn mu_s_factors(spec: RingSpec, s: u32) -> Result<Vec<TensorElement>, CertificateError> {
    let kind = CertificateKind::MuS;
    check_s(kind, spec, s)?;
    if spec.p() > 1 || spec.coeff() != Coefficients::Mod2 || spec.points() < 2 {
        return Err(regime(kind, "p <= 1, p + n >= 2 and mod-2 coefficients", spec, s));
    }
    // With one obstacle the punctured ring is the ring on p + n points.
    let top = spec.points();
    let mut factors = Vec::new();
    for i in 2..=top {
        for l in 2..=s {
            factors.push(slot_difference(spec, s, i, 1, l)?);
        }
    }
    for i in 3..=top {
        factors.push(slot_difference(spec, s, i, 2, 2)?);
    }
    Ok(factors)
}

pub fn build_mu_s(spec: RingSpec, s: u32) -> Result<Certificate, CertificateError> {
    Certificate::from_factors(CertificateKind::MuS, mu_s_factors(spec, s)?)
}

/// `A[2,1]@1 * mu_s`.
pub fn build_w_s(spec: RingSpec, s: u32) -> Result<TensorElement, CertificateError> {
    let mu = build_mu_s(spec, s)?;
    Ok(a21_first_slot(spec, s)?.tmultiply(mu.product())?)
}

/// The `mu_s` certificate carrying `w_s` as its nonvanishing witness.
pub fn build_w_s_certificate(spec: RingSpec, s: u32) -> Result<Certificate, CertificateError> {
    let mut cert = Certificate::from_factors(CertificateKind::WS, mu_s_factors(spec, s)?)?;
    let multiplier = a21_first_slot(spec, s)?;
    let value = multiplier.tmultiply(&cert.product)?;
    cert.witness = Some(Witness { multiplier, value });
    Ok(cert)
}

pub fn build_nu_s(spec: RingSpec, s: u32) -> Result<Certificate, CertificateError> {
    let kind = CertificateKind::NuS;
    check_s(kind, spec, s)?;
    if spec.p() < 2 || spec.coeff() != Coefficients::Mod2 {
        return Err(regime(kind, "p >= 2 and mod-2 coefficients", spec, s));
    }
    let p = spec.p();
    let mut factors = Vec::new();
    for i in 1..=spec.n() {
        for l in 2..=s {
            factors.push(slot_difference(spec, s, p + i, 1, l)?);
        }
    }
    for i in 1..=spec.n() {
        factors.push(slot_difference(spec, s, p + i, 2, 2)?);
    }
    Certificate::from_factors(kind, factors)
}

pub fn build_pi_punctured(spec: RingSpec, s: u32) -> Result<Certificate, CertificateError> {
    let kind = CertificateKind::PiPunctured;
    check_s(kind, spec, s)?;
    if spec.p() < 1 || spec.coeff() != Coefficients::Integers {
        return Err(regime(kind, "p >= 1 and integer coefficients (odd m)", spec, s));
    }
    let mut factors = Vec::new();
    for i in 1..=spec.n() {
        let f = pi_factor(spec, s, spec.p() + i)?;
        factors.extend(std::iter::repeat_n(f, s as usize));
    }
    Certificate::from_factors(kind, factors)
}

pub fn build(kind: CertificateKind, spec: RingSpec, s: u32) -> Result<Certificate, CertificateError> {
    match kind {
        CertificateKind::Pi => build_pi(spec, s),
        CertificateKind::MuS => build_mu_s(spec, s),
        CertificateKind::WS => build_w_s_certificate(spec, s),
        CertificateKind::NuS => build_nu_s(spec, s),
        CertificateKind::PiPunctured => build_pi_punctured(spec, s),
        CertificateKind::Custom => Err(regime(kind, "explicit factors", spec, s)),
    }
}

/// The certificate family matching the TC table entry for `(m, n, p, s)`,
/// with coefficients chosen from the parity of `m`.
pub fn standard_certificate(m: u32, n: u32, p: u32, s: u32) -> Result<Certificate, CertificateError> {
    let spec = RingSpec::auto(m, n, p)?;
    let odd = m % 2 == 1;
    match (p, odd) {
        (0, true) => build_pi(spec, s),
        (0, false) | (1, false) => build_mu_s(spec, s),
        (_, true) => build_pi_punctured(spec, s),
        (_, false) => build_nu_s(spec, s),
    }
}

/// Largest number of generator-slot pairs the exhaustive search accepts.
pub const ZCL_SEARCH_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZclSearch {
    pub length: usize,
    /// Indices into `kernel` of a longest nonzero product found.
    pub witness: Vec<usize>,
    pub kernel: Vec<TensorElement>,
}

/// Exhaustive cup-length search restricted to degree-`(m-1)` kernel factors.
///
/// Products of the spanning set from [`kernel_degree1_basis`] are enumerated
/// as multisets (the ring is commutative). By multilinearity, if every
/// `(r+1)`-fold product of spanning elements vanishes, so does every product
/// of `r+1` degree-`(m-1)` kernel classes.
pub fn zcl_search(spec: RingSpec, s: u32, max_len: usize) -> Result<ZclSearch, CertificateError> {
    let generators = spec.generators().len();
    if generators * s as usize > ZCL_SEARCH_LIMIT {
        return Err(CertificateError::SizeGuard { generators, s, limit: ZCL_SEARCH_LIMIT });
    }
    let kernel = kernel_degree1_basis(spec, s)?;
    // no slot can hold more than n factors
    let cap = max_len.min((spec.n() * s) as usize);
    let mut best = Vec::new();
    let mut current = Vec::new();
    let one = TensorElement::one(spec, s)?;
    search(&kernel, 0, &one, cap, &mut current, &mut best)?;
    Ok(ZclSearch { length: best.len(), witness: best, kernel })
}

fn search(
    kernel: &[TensorElement],
    start: usize,
    prefix: &TensorElement,
    cap: usize,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
) -> Result<(), CertificateError> {
    if current.len() > best.len() {
        *best = current.clone();
    }
    if current.len() == cap || best.len() == cap {
        return Ok(());
    }
    for idx in start..kernel.len() {
        let next = prefix.tmultiply(&kernel[idx])?;
        if next.is_zero() {
            continue;
        }
        current.push(idx);
        search(kernel, idx, &next, cap, current, best)?;
        current.pop();
        if best.len() == cap {
            break;
        }
    }
    Ok(())
}

pub fn brute_force_zcl(spec: RingSpec, s: u32, max_len: usize) -> Result<usize, CertificateError> {
    Ok(zcl_search(spec, s, max_len)?.length)
}

/// Convenience used by tests and bindings: the integer `(s!(1-s))^k`.
pub fn pi_coefficient(s: u32, k: u32) -> BigInt {
    let fact: BigInt = (1..=s).fold(BigInt::one(), |acc, x| acc * x);
    let base = fact * (1 - s as i64);
    num_traits::pow(base, k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Monomial;

    fn mono(gens: &[(u32, u32)]) -> Monomial {
        Monomial::from_generators(gens.iter().map(|&(i, j)| Generator::new(i, j)).collect()).unwrap()
    }

    #[test]
    fn pi_smallest_case() {
        let spec = RingSpec::auto(3, 2, 0).unwrap();
        let cert = build_pi(spec, 2).unwrap();
        assert_eq!(cert.length(), 2);
        assert_eq!(cert.product().to_string(), "-2*A[2,1]@1*A[2,1]@2");
        let r = verify(&cert);
        assert!(r.kernel_ok && r.nonzero_ok && r.product_matches);
        assert_eq!(r.lower_bound, Some(2));
    }

    #[test]
    fn pi_three_robots_three_stages() {
        let spec = RingSpec::auto(3, 3, 0).unwrap();
        let cert = build_pi(spec, 3).unwrap();
        assert_eq!(cert.length(), 6);
        let mu = mono(&[(3, 1), (2, 1)]);
        assert_eq!(cert.product().len(), 1);
        assert_eq!(cert.product().coefficient(&[mu.clone(), mu.clone(), mu]), BigInt::from(144));
        assert_eq!(pi_coefficient(3, 2), BigInt::from(144));
    }

    #[test]
    fn w2_summand_counts() {
        for (n, expect) in [(3, 2), (4, 4)] {
            let spec = RingSpec::auto(2, n, 0).unwrap();
            let w = build_w_s(spec, 2).unwrap();
            assert_eq!(w.len(), expect, "n={n}");
        }
    }

    #[test]
    fn w_induction_step() {
        let spec = RingSpec::auto(2, 3, 0).unwrap();
        let w2 = build_w_s(spec, 2).unwrap();
        assert!(!w2.is_zero());
        // lift w_2 into the 3-fold power by placing its slots first
        let w3 = build_w_s(spec, 3).unwrap();
        let lifted = TensorElement::from_terms(
            spec,
            3,
            w2.terms().map(|(k, c)| {
                let mut k = k.clone();
                k.push(Monomial::one());
                (k, c.clone())
            }),
        )
        .unwrap();
        let mut tail = lifted;
        for i in 2..=3 {
            tail = tail.tmultiply(&slotted(spec, 3, i, 1, 3).unwrap()).unwrap();
        }
        assert_eq!(w3, tail);
    }

    #[test]
    fn nu_examples() {
        let spec = RingSpec::auto(2, 2, 2).unwrap();
        let cert = build_nu_s(spec, 2).unwrap();
        assert_eq!(cert.length(), 4);
        assert_eq!(cert.product().len(), 4);
        assert_eq!(verify(&cert).lower_bound, Some(4));
        for i in 1..=2 {
            let a = slotted(spec, 2, 2 + i, 1, 1).unwrap();
            assert!(cert.product().tmultiply(&a).unwrap().is_zero());
        }
        let cert = build_nu_s(spec, 3).unwrap();
        assert_eq!(verify(&cert).lower_bound, Some(6));
    }

    #[test]
    fn pi_punctured_examples() {
        let spec = RingSpec::auto(3, 1, 1).unwrap();
        let cert = build_pi_punctured(spec, 2).unwrap();
        assert_eq!(cert.length(), 2);
        assert_eq!(cert.product().to_string(), "-2*A[2,1]@1*A[2,1]@2");
        let spec = RingSpec::auto(3, 2, 2).unwrap();
        let cert = build_pi_punctured(spec, 2).unwrap();
        assert_eq!(cert.length(), 4);
        let mu = mono(&[(4, 1), (3, 1)]);
        assert_eq!(cert.product().coefficient(&[mu.clone(), mu]), pi_coefficient(2, 2));
        assert_eq!(verify(&cert).lower_bound, Some(4));
    }

    #[test]
    fn regime_violations() {
        let odd = RingSpec::auto(3, 3, 0).unwrap();
        let even = RingSpec::auto(2, 3, 0).unwrap();
        assert!(matches!(build_pi(even, 2), Err(CertificateError::Regime { .. })));
        assert!(matches!(build_mu_s(odd, 2), Err(CertificateError::Regime { .. })));
        assert!(build_nu_s(RingSpec::auto(2, 2, 1).unwrap(), 2).is_err());
        assert!(build_pi_punctured(odd, 2).is_err());
        assert!(build_pi(odd, 1).is_err());
    }

    #[test]
    fn non_kernel_factor_is_reported() {
        let spec = RingSpec::auto(3, 2, 0).unwrap();
        let bad = slotted(spec, 2, 2, 1, 1).unwrap();
        let good = slot_difference(spec, 2, 2, 1, 2).unwrap();
        let cert = Certificate::from_factors(CertificateKind::Custom, vec![good, bad]).unwrap();
        let r = verify(&cert);
        assert!(!r.kernel_ok);
        assert_eq!(r.failing_factor, Some(1));
        assert_eq!(r.lower_bound, None);
    }

    #[test]
    fn zero_product_is_reported() {
        let spec = RingSpec::auto(2, 2, 0).unwrap();
        let f = slot_difference(spec, 2, 2, 1, 2).unwrap();
        let cert = Certificate::from_factors(CertificateKind::Custom, vec![f.clone(), f]).unwrap();
        let r = verify(&cert);
        assert!(r.kernel_ok);
        assert!(!r.nonzero_ok);
        assert_eq!(r.lower_bound, None);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_zcl(RingSpec::auto(3, 2, 0).unwrap(), 2, 10), Ok(2));
        assert_eq!(brute_force_zcl(RingSpec::auto(2, 2, 0).unwrap(), 2, 10), Ok(1));
        assert_eq!(brute_force_zcl(RingSpec::auto(2, 2, 0).unwrap(), 3, 10), Ok(2));
        assert_eq!(brute_force_zcl(RingSpec::auto(3, 2, 0).unwrap(), 2, 1), Ok(1));
        assert!(matches!(
            brute_force_zcl(RingSpec::auto(3, 4, 0).unwrap(), 3, 10),
            Err(CertificateError::SizeGuard { .. })
        ));
    }

    #[test]
    fn record_round_trip() {
        let spec = RingSpec::auto(2, 3, 0).unwrap();
        let cert = build_w_s_certificate(spec, 2).unwrap();
        let report = verify(&cert);
        assert_eq!(report.witness_ok, Some(true));
        let rec = cert.record(&report);
        let json = serde_json::to_string(&rec).unwrap();
        let back: CertificateRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
        let rebuilt = Certificate::from_record(&back).unwrap();
        assert_eq!(rebuilt, cert);
    }
}
