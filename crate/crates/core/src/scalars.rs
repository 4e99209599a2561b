//! Exact arithmetic in cyclotomic fields ℚ(ζ_m).
//!
//! An element is stored as its coefficient vector in the power basis
//! `1, ζ, …, ζ^{φ(m)-1}` modulo the `m`-th cyclotomic polynomial. Per-conductor
//! data (the cyclotomic polynomial and the reduced form of every power `ζ^k`,
//! `0 ≤ k < m`) is computed once and cached process-wide, so multiplication and
//! conjugation reduce to table lookups.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational number. Always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("expected {expected} coefficients for conductor {conductor}, found {found}")]
    WrongLength {
        conductor: u32,
        expected: usize,
        found: usize,
    },
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

/// Formats a rational as `p/q`, omitting `/q` when `q = 1`.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let bad = || ScalarError::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p = BigInt::from_str(num).map_err(|_| bad())?;
    let q = BigInt::from_str(den).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Euler's totient.
pub fn totient(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Integer coefficients of Φ_m, lowest degree first, via
/// `x^m - 1 = ∏_{d | m} Φ_d`.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1);
    // numerator x^m - 1
    let mut poly = vec![0i64; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

#[derive(Debug)]
struct FieldData {
    phi: usize,
    cyclo: Vec<i64>,
    /// `powers[k]` = coefficients of ζ^k reduced mod Φ_m, for `0 ≤ k < m`.
    powers: Vec<Vec<i64>>,
}

impl FieldData {
    fn build(m: u32) -> Self {
        let cyclo = cyclotomic_polynomial(m);
        let phi = cyclo.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x, reduce with the monic Φ_m
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
            for i in 0..phi {
                next[i] -= top * cyclo[i];
            }
            cur = next;
        }
        FieldData {
            phi,
            cyclo,
            powers,
        }
    }
}

fn field(m: u32) -> Arc<FieldData> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(f) = cache.read().expect("field cache poisoned").get(&m) {
        return f.clone();
    }
    let data = Arc::new(FieldData::build(m));
    cache
        .write()
        .expect("field cache poisoned")
        .entry(m)
        .or_insert(data)
        .clone()
}

fn add_scaled(acc: &mut Rational, c: &Rational, k: i64) {
    match k {
        0 => {}
        1 => *acc += c,
        -1 => *acc -= c,
        _ => *acc += c * Rational::from_integer(BigInt::from(k)),
    }
}

/// Element of the cyclotomic field ℚ(ζ_m).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycScalar {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycScalar {
    pub fn zero(m: u32) -> Self {
        let f = field(m);
        CycScalar {
            conductor: m,
            coeffs: vec![Rational::zero(); f.phi],
        }
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(m, Rational::one())
    }

    pub fn from_int(m: u32, v: i64) -> Self {
        Self::from_rational(m, Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(m: u32, r: Rational) -> Self {
        let mut s = Self::zero(m);
        s.coeffs[0] = r;
        s
    }

    /// The primitive root ζ_m.
    pub fn root(m: u32) -> Self {
        Self::root_power(m, 1)
    }

    /// ζ_m^k for any integer `k`.
    pub fn root_power(m: u32, k: i64) -> Self {
        let f = field(m);
        let idx = k.rem_euclid(m as i64) as usize;
        CycScalar {
            conductor: m,
            coeffs: f.powers[idx]
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    /// Builds `Σ c_k ζ^k` from coefficients of any length, reducing mod Φ_m.
    pub fn from_power_coeffs(m: u32, coeffs: &[Rational]) -> Self {
        let f = field(m);
        let mut out = vec![Rational::zero(); f.phi];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, &p) in f.powers[k % m as usize].iter().enumerate() {
                add_scaled(&mut out[t], c, p);
            }
        }
        CycScalar {
            conductor: m,
            coeffs: out,
        }
    }

    /// Builds from exactly φ(m) reduced coefficients.
    pub fn from_reduced(m: u32, coeffs: Vec<Rational>) -> Result<Self, ScalarError> {
        if m == 0 {
            return Err(ScalarError::ZeroConductor);
        }
        let phi = totient(m);
        if coeffs.len() != phi {
            return Err(ScalarError::WrongLength {
                conductor: m,
                expected: phi,
                found: coeffs.len(),
            });
        }
        Ok(CycScalar {
            conductor: m,
            coeffs,
        })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Largest absolute numerator or denominator among the coefficients.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .flat_map(|c| [c.numer().abs(), c.denom().clone()])
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    fn check(&self, other: &Self) -> Result<(), ScalarError> {
        if self.conductor == other.conductor {
            Ok(())
        } else {
            Err(ScalarError::ConductorMismatch(
                self.conductor,
                other.conductor,
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(CycScalar {
            conductor: self.conductor,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        Ok(CycScalar {
            conductor: self.conductor,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check(other)?;
        let f = field(self.conductor);
        let phi = f.phi;
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        let mut raw = vec![Rational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let m = self.conductor as usize;
        let mut out: Vec<Rational> = raw.drain(..phi).collect();
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, &p) in f.powers[(k + phi) % m].iter().enumerate() {
                add_scaled(&mut out[t], c, p);
            }
        }
        Ok(CycScalar {
            conductor: self.conductor,
            coeffs: out,
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycScalar {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CycScalar {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_m.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.conductor, r.recip()));
        }
        let f = field(self.conductor);
        let modulus: Vec<Rational> = f
            .cyclo
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let mut r0 = modulus;
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let next_s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, next_s);
        }
        // r0 is a nonzero constant because Φ_m is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let s: Vec<Rational> = s0.iter().map(|x| x * &c).collect();
        Ok(Self::from_power_coeffs(self.conductor, &s))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.try_mul(&other.inv()?)
    }

    /// Complex conjugation, the field automorphism ζ ↦ ζ^{m-1}.
    pub fn conj(&self) -> Self {
        let f = field(self.conductor);
        let m = self.conductor as usize;
        let mut out = vec![Rational::zero(); f.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, &p) in f.powers[(m - j) % m].iter().enumerate() {
                add_scaled(&mut out[t], c, p);
            }
        }
        CycScalar {
            conductor: self.conductor,
            coeffs: out,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Evaluates at ζ = exp(2πi/m).
    pub fn embed(&self) -> Complex64 {
        let m = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / m;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(num.to_vec());
    let dn = den.len() - 1;
    let lead = den[dn].recip();
    if rem.len() < den.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - dn];
    while rem.len() >= den.len() {
        let k = rem.len() - 1 - dn;
        let c = &rem[rem.len() - 1] * &lead;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => rational_to_string(c),
                1 => format!("({})ζ{}", rational_to_string(c), self.conductor),
                _ => format!("({})ζ{}^{}", rational_to_string(c), self.conductor, k),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                self.$inner(rhs).expect("conductor mismatch")
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                (&self).$inner(&rhs).expect("conductor mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar::neg(self)
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar::neg(&self)
    }
}

#[derive(Serialize, Deserialize)]
struct CycScalarRepr {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CycScalarRepr {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(rational_to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CycScalarRepr::deserialize(deserializer)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        CycScalar::from_reduced(repr.conductor, coeffs).map_err(D::Error::custom)
    }
}
