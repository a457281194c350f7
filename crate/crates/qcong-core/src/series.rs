//! Truncated formal power series.
//!
//! A `TruncatedSeries` holds exactly the coefficients a(0)..a(trunc-1) of a
//! formal power series and nothing beyond; `trunc` is the truncation order.
//! Reading past the known prefix is a hard error, never a silent zero, so a
//! verification can only pass on coefficients that were actually computed.
//!
//! Coefficients live in one of two modes: exact (arbitrary-precision signed
//! integers) or modular (residues mod M in machine words, for long scans).
//! Binary operations require matching modes and take the minimum of the two
//! truncation orders; mathematical equality is likewise only defined up to
//! the shorter prefix, which is what [`compare`] reports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};

/// Ceiling for truncation growth in `substitute_power` and `shift_up`, and
/// for the truncation any expression evaluation may request.
static MAX_TRUNC: AtomicUsize = AtomicUsize::new(1_000_000);

pub fn max_truncation() -> usize {
    MAX_TRUNC.load(Ordering::Relaxed)
}

/// Replaces the truncation ceiling (clamped to at least 1) and returns the
/// previous value. The CLI wires this to the QCONG_MAX_TRUNC env var.
pub fn set_max_truncation(cap: usize) -> usize {
    MAX_TRUNC.swap(cap.max(1), Ordering::Relaxed)
}

/// Which coefficient ring a series lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffMode {
    Exact,
    Modular(u64),
}

impl CoeffMode {
    pub fn modulus(self) -> Option<u64> {
        match self {
            CoeffMode::Exact => None,
            CoeffMode::Modular(m) => Some(m),
        }
    }

    fn validate(self) -> Result<Self> {
        if let CoeffMode::Modular(m) = self {
            if m < 2 {
                return Err(Error::ModulusTooSmall(m));
            }
        }
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Store {
    Exact(Vec<BigInt>),
    Modular { modulus: u64, values: Vec<u64> },
}

/// A formal power series known up to (but excluding) its truncation order.
///
/// `PartialEq` is structural (same mode, same order, same coefficients); use
/// [`compare`] or [`agrees`] for the mathematical prefix comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    store: Store,
}

/// First disagreement found by [`compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Outcome of comparing two series on their common prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    /// How many coefficients were compared (the smaller truncation order).
    pub compared: usize,
    pub mismatch: Option<Mismatch>,
}

impl Comparison {
    pub fn agree(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares the common prefix of two same-mode series.
pub fn compare(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<Comparison> {
    same_mode(a, b)?;
    let n = a.trunc().min(b.trunc());
    for i in 0..n {
        let x = a.coeff(i)?;
        let y = b.coeff(i)?;
        if x != y {
            return Ok(Comparison {
                compared: n,
                mismatch: Some(Mismatch {
                    exponent: i,
                    lhs: x,
                    rhs: y,
                }),
            });
        }
    }
    Ok(Comparison {
        compared: n,
        mismatch: None,
    })
}

/// True when the common prefix of two same-mode series agrees.
pub fn agrees(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<bool> {
    Ok(compare(a, b)?.agree())
}

fn same_mode(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<()> {
    match (&a.store, &b.store) {
        (Store::Exact(_), Store::Exact(_)) => Ok(()),
        (Store::Modular { modulus: m1, .. }, Store::Modular { modulus: m2, .. }) => {
            if m1 == m2 {
                Ok(())
            } else {
                Err(Error::ModulusMismatch(*m1, *m2))
            }
        }
        _ => Err(Error::MixedModes),
    }
}

fn reduce_i64(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

fn reduce_big(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits")
}

/// Whether lazy u64 accumulation of products is overflow-safe for `terms`
/// additions of values below m².
fn lazy_ok(m: u64, terms: usize) -> bool {
    (m as u128) * (m as u128) <= (u64::MAX as u128) / (terms.max(1) as u128)
}

impl TruncatedSeries {
    // ---- constructors ---------------------------------------------------

    /// Builds an exact series from leading coefficients, zero-padded to
    /// `trunc`. Rejects `trunc == 0` and more coefficients than `trunc`.
    pub fn from_coeffs(coeffs: Vec<BigInt>, trunc: usize) -> Result<Self> {
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        if coeffs.len() > trunc {
            return Err(Error::TooManyCoefficients {
                given: coeffs.len(),
                trunc,
            });
        }
        let mut v = coeffs;
        v.resize(trunc, BigInt::zero());
        Ok(Self {
            store: Store::Exact(v),
        })
    }

    pub fn from_i64(coeffs: &[i64], trunc: usize) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect(), trunc)
    }

    /// Builds a modular series from residues (reduced on entry).
    pub fn from_residues(values: Vec<u64>, trunc: usize, modulus: u64) -> Result<Self> {
        CoeffMode::Modular(modulus).validate()?;
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        if values.len() > trunc {
            return Err(Error::TooManyCoefficients {
                given: values.len(),
                trunc,
            });
        }
        let mut v: Vec<u64> = values.into_iter().map(|x| x % modulus).collect();
        v.resize(trunc, 0);
        Ok(Self {
            store: Store::Modular { modulus, values: v },
        })
    }

    pub fn zero_in(mode: CoeffMode, trunc: usize) -> Result<Self> {
        mode.validate()?;
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        Ok(match mode {
            CoeffMode::Exact => Self {
                store: Store::Exact(vec![BigInt::zero(); trunc]),
            },
            CoeffMode::Modular(m) => Self {
                store: Store::Modular {
                    modulus: m,
                    values: vec![0; trunc],
                },
            },
        })
    }

    pub fn one_in(mode: CoeffMode, trunc: usize) -> Result<Self> {
        Self::monomial_in(mode, 1, 0, trunc)
    }

    /// c·q^k as a series; an exponent at or past `trunc` leaves a zero series.
    pub fn monomial_in(mode: CoeffMode, coeff: i64, exp: usize, trunc: usize) -> Result<Self> {
        let mut s = Self::zero_in(mode, trunc)?;
        if exp < trunc {
            match &mut s.store {
                Store::Exact(v) => v[exp] = BigInt::from(coeff),
                Store::Modular { modulus, values } => values[exp] = reduce_i64(coeff, *modulus),
            }
        }
        Ok(s)
    }

    // ---- accessors ------------------------------------------------------

    pub fn trunc(&self) -> usize {
        match &self.store {
            Store::Exact(v) => v.len(),
            Store::Modular { values, .. } => values.len(),
        }
    }

    pub fn mode(&self) -> CoeffMode {
        match &self.store {
            Store::Exact(_) => CoeffMode::Exact,
            Store::Modular { modulus, .. } => CoeffMode::Modular(*modulus),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        self.mode().modulus()
    }

    /// Coefficient of q^n. In modular mode the canonical residue is returned.
    /// Requesting n at or past the truncation order is an error.
    pub fn coeff(&self, n: usize) -> Result<BigInt> {
        if n >= self.trunc() {
            return Err(Error::CoeffBeyondTruncation {
                index: n,
                trunc: self.trunc(),
            });
        }
        Ok(match &self.store {
            Store::Exact(v) => v[n].clone(),
            Store::Modular { values, .. } => BigInt::from(values[n]),
        })
    }

    /// Residue of the coefficient of q^n in a modular series.
    pub fn residue(&self, n: usize) -> Result<u64> {
        match &self.store {
            Store::Exact(_) => Err(Error::NotModular),
            Store::Modular { values, .. } => {
                if n >= values.len() {
                    return Err(Error::CoeffBeyondTruncation {
                        index: n,
                        trunc: values.len(),
                    });
                }
                Ok(values[n])
            }
        }
    }

    /// All residues of a modular series, or None in exact mode.
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.store {
            Store::Exact(_) => None,
            Store::Modular { values, .. } => Some(values),
        }
    }

    /// All coefficients of an exact series, or None in modular mode.
    pub fn exact_coeffs(&self) -> Option<&[BigInt]> {
        match &self.store {
            Store::Exact(v) => Some(v),
            Store::Modular { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Exact(v) => v.iter().all(Zero::is_zero),
            Store::Modular { values, .. } => values.iter().all(|&x| x == 0),
        }
    }

    /// Restricts the series to a smaller truncation order.
    pub fn truncated(&self, trunc: usize) -> Result<Self> {
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        if trunc > self.trunc() {
            return Err(Error::InsufficientTruncation {
                need: trunc,
                have: self.trunc(),
            });
        }
        Ok(match &self.store {
            Store::Exact(v) => Self {
                store: Store::Exact(v[..trunc].to_vec()),
            },
            Store::Modular { modulus, values } => Self {
                store: Store::Modular {
                    modulus: *modulus,
                    values: values[..trunc].to_vec(),
                },
            },
        })
    }

    // ---- linear operations ----------------------------------------------

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        same_mode(self, rhs)?;
        let n = self.trunc().min(rhs.trunc());
        Ok(match (&self.store, &rhs.store) {
            (Store::Exact(a), Store::Exact(b)) => Self {
                store: Store::Exact((0..n).map(|i| &a[i] + &b[i]).collect()),
            },
            (Store::Modular { modulus, values: a }, Store::Modular { values: b, .. }) => Self {
                store: Store::Modular {
                    modulus: *modulus,
                    values: (0..n).map(|i| (a[i] + b[i]) % modulus).collect(),
                },
            },
            _ => unreachable!("same_mode checked"),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        same_mode(self, rhs)?;
        let n = self.trunc().min(rhs.trunc());
        Ok(match (&self.store, &rhs.store) {
            (Store::Exact(a), Store::Exact(b)) => Self {
                store: Store::Exact((0..n).map(|i| &a[i] - &b[i]).collect()),
            },
            (Store::Modular { modulus, values: a }, Store::Modular { values: b, .. }) => Self {
                store: Store::Modular {
                    modulus: *modulus,
                    values: (0..n).map(|i| (a[i] + modulus - b[i]) % modulus).collect(),
                },
            },
            _ => unreachable!("same_mode checked"),
        })
    }

    pub fn neg(&self) -> Self {
        match &self.store {
            Store::Exact(v) => Self {
                store: Store::Exact(v.iter().map(|x| -x).collect()),
            },
            Store::Modular { modulus, values } => Self {
                store: Store::Modular {
                    modulus: *modulus,
                    values: values.iter().map(|&x| (modulus - x) % modulus).collect(),
                },
            },
        }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        match &self.store {
            Store::Exact(v) => {
                let k = BigInt::from(k);
                Self {
                    store: Store::Exact(v.iter().map(|x| x * &k).collect()),
                }
            }
            Store::Modular { modulus, values } => {
                let kr = reduce_i64(k, *modulus);
                Self {
                    store: Store::Modular {
                        modulus: *modulus,
                        values: values.iter().map(|&x| mul_mod(x, kr, *modulus)).collect(),
                    },
                }
            }
        }
    }

    pub fn scale_big(&self, k: &BigInt) -> Self {
        match &self.store {
            Store::Exact(v) => Self {
                store: Store::Exact(v.iter().map(|x| x * k).collect()),
            },
            Store::Modular { modulus, values } => {
                let kr = reduce_big(k, *modulus);
                Self {
                    store: Store::Modular {
                        modulus: *modulus,
                        values: values.iter().map(|&x| mul_mod(x, kr, *modulus)).collect(),
                    },
                }
            }
        }
    }

    // ---- multiplicative operations ---------------------------------------

    /// Cauchy product on the common prefix. Schoolbook with zero-skipping,
    /// which collapses to O(n·nnz) when one operand is sparse (eta-type
    /// factors have O(sqrt n) nonzero terms).
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        same_mode(self, rhs)?;
        let n = self.trunc().min(rhs.trunc());
        match (&self.store, &rhs.store) {
            (Store::Exact(a), Store::Exact(b)) => {
                let nnz_a = a[..n].iter().filter(|x| !x.is_zero()).count();
                let nnz_b = b[..n].iter().filter(|x| !x.is_zero()).count();
                let (outer, inner) = if nnz_a <= nnz_b { (a, b) } else { (b, a) };
                let mut out = vec![BigInt::zero(); n];
                for (i, ai) in outer.iter().enumerate().take(n) {
                    if ai.is_zero() {
                        continue;
                    }
                    for (j, bj) in inner.iter().enumerate().take(n - i) {
                        if !bj.is_zero() {
                            out[i + j] += ai * bj;
                        }
                    }
                }
                Ok(Self {
                    store: Store::Exact(out),
                })
            }
            (Store::Modular { modulus, values: a }, Store::Modular { values: b, .. }) => {
                let m = *modulus;
                let nnz_a = a[..n].iter().filter(|&&x| x != 0).count();
                let nnz_b = b[..n].iter().filter(|&&x| x != 0).count();
                let (outer, inner) = if nnz_a <= nnz_b { (a, b) } else { (b, a) };
                let mut out = vec![0u64; n];
                if lazy_ok(m, n) {
                    for (i, &ai) in outer.iter().enumerate().take(n) {
                        if ai == 0 {
                            continue;
                        }
                        for (j, &bj) in inner.iter().enumerate().take(n - i) {
                            out[i + j] += ai * bj;
                        }
                    }
                    for x in &mut out {
                        *x %= m;
                    }
                } else {
                    for (i, &ai) in outer.iter().enumerate().take(n) {
                        if ai == 0 {
                            continue;
                        }
                        for (j, &bj) in inner.iter().enumerate().take(n - i) {
                            if bj != 0 {
                                out[i + j] = (out[i + j] + mul_mod(ai, bj, m)) % m;
                            }
                        }
                    }
                }
                Ok(Self {
                    store: Store::Modular {
                        modulus: m,
                        values: out,
                    },
                })
            }
            _ => unreachable!("same_mode checked"),
        }
    }

    /// Multiplicative inverse, as 1 divided by self. The constant term must
    /// be a unit: ±1 in exact mode, invertible mod M in modular mode.
    pub fn invert(&self) -> Result<Self> {
        Self::one_in(self.mode(), self.trunc())?.div(self)
    }

    /// Quotient via the division recurrence
    /// c(n) = (s(n) - Σ_{k≥1} d(k)·c(n-k)) / d(0). Costs O(trunc · nnz(rhs)),
    /// so dividing by a pentagonal-sparse factor stays near-linear — always
    /// prefer this over `rhs.invert()` followed by a dense multiply.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        same_mode(self, rhs)?;
        let n = self.trunc().min(rhs.trunc());
        match (&self.store, &rhs.store) {
            (Store::Exact(s), Store::Exact(d)) => {
                let d0 = &d[0];
                if !(d0.is_one() || (-d0).is_one()) {
                    return Err(Error::NonUnitConstant(d0.to_string()));
                }
                let nz: Vec<(usize, &BigInt)> = d
                    .iter()
                    .enumerate()
                    .take(n)
                    .skip(1)
                    .filter(|(_, x)| !x.is_zero())
                    .collect();
                let mut c = vec![BigInt::zero(); n];
                for i in 0..n {
                    let mut acc = s[i].clone();
                    for &(k, dk) in &nz {
                        if k > i {
                            break;
                        }
                        acc -= dk * &c[i - k];
                    }
                    c[i] = if d0.is_one() { acc } else { -acc };
                }
                Ok(Self {
                    store: Store::Exact(c),
                })
            }
            (Store::Modular { modulus, values: s }, Store::Modular { values: d, .. }) => {
                let m = *modulus;
                let inv0 =
                    inv_mod(d[0], m).ok_or_else(|| Error::NonUnitConstant(d[0].to_string()))?;
                let nz: Vec<(u32, u64)> = d
                    .iter()
                    .enumerate()
                    .take(n)
                    .skip(1)
                    .filter(|(_, &x)| x != 0)
                    .map(|(k, &x)| (k as u32, (m - x) % m))
                    .collect();
                let mut c = vec![0u64; n];
                if lazy_ok(m, n) {
                    for i in 0..n {
                        let mut acc = s[i];
                        for &(k, dk) in &nz {
                            let k = k as usize;
                            if k > i {
                                break;
                            }
                            acc += dk * c[i - k];
                        }
                        c[i] = mul_mod(inv0, acc % m, m);
                    }
                } else {
                    for i in 0..n {
                        let mut acc = s[i];
                        for &(k, dk) in &nz {
                            let k = k as usize;
                            if k > i {
                                break;
                            }
                            acc = (acc + mul_mod(dk, c[i - k], m)) % m;
                        }
                        c[i] = mul_mod(inv0, acc, m);
                    }
                }
                Ok(Self {
                    store: Store::Modular {
                        modulus: m,
                        values: c,
                    },
                })
            }
            _ => unreachable!("same_mode checked"),
        }
    }

    /// Integer power by repeated squaring; negative exponents invert once
    /// and then raise the inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let n = self.trunc();
        if e == 0 {
            return Self::one_in(self.mode(), n);
        }
        let mut base = if e < 0 { self.invert()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(r) => r.mul(&base)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.expect("e != 0"))
    }

    /// q -> q^m. The result's truncation order is trunc·m, capped by the
    /// configured ceiling (capping shrinks knowledge, never corrupts it).
    pub fn substitute_power(&self, m: usize) -> Result<Self> {
        self.substitute_power_capped(m, max_truncation())
    }

    pub(crate) fn substitute_power_capped(&self, m: usize, cap: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroSubstitutionStep);
        }
        let new_trunc = self
            .trunc()
            .checked_mul(m)
            .map_or(cap, |t| t.min(cap))
            .max(1);
        let mut out = Self::zero_in(self.mode(), new_trunc)?;
        match (&self.store, &mut out.store) {
            (Store::Exact(a), Store::Exact(v)) => {
                for (i, ai) in a.iter().enumerate() {
                    match i.checked_mul(m) {
                        Some(e) if e < new_trunc => v[e] = ai.clone(),
                        _ => break,
                    }
                }
            }
            (Store::Modular { values: a, .. }, Store::Modular { values: v, .. }) => {
                for (i, &ai) in a.iter().enumerate() {
                    match i.checked_mul(m) {
                        Some(e) if e < new_trunc => v[e] = ai,
                        _ => break,
                    }
                }
            }
            _ => unreachable!("modes match"),
        }
        Ok(out)
    }

    /// Extracts the arithmetic progression t·n + j: result(n) = a(t·n + j).
    /// The result order is ceil((trunc - j) / t); an empty extraction is an
    /// error rather than a zero-order series.
    pub fn dissect(&self, t: usize, j: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::ZeroDissectionStride);
        }
        if j >= t {
            return Err(Error::DissectionIndexTooLarge { t, j });
        }
        let trunc = self.trunc();
        if j >= trunc {
            return Err(Error::EmptyDissection { trunc, t, j });
        }
        let out_len = (trunc - j).div_ceil(t);
        Ok(match &self.store {
            Store::Exact(a) => Self {
                store: Store::Exact((0..out_len).map(|n| a[t * n + j].clone()).collect()),
            },
            Store::Modular { modulus, values } => Self {
                store: Store::Modular {
                    modulus: *modulus,
                    values: (0..out_len).map(|n| values[t * n + j]).collect(),
                },
            },
        })
    }

    /// Multiplies by q^k, extending the truncation order (capped).
    pub fn shift_up(&self, k: usize) -> Result<Self> {
        let cap = max_truncation();
        let new_trunc = self
            .trunc()
            .checked_add(k)
            .map_or(cap, |t| t.min(cap))
            .max(1);
        let mut out = Self::zero_in(self.mode(), new_trunc)?;
        match (&self.store, &mut out.store) {
            (Store::Exact(a), Store::Exact(v)) => {
                for (i, ai) in a.iter().enumerate() {
                    let e = match i.checked_add(k) {
                        Some(e) if e < new_trunc => e,
                        _ => break,
                    };
                    v[e] = ai.clone();
                }
            }
            (Store::Modular { values: a, .. }, Store::Modular { values: v, .. }) => {
                for (i, &ai) in a.iter().enumerate() {
                    let e = match i.checked_add(k) {
                        Some(e) if e < new_trunc => e,
                        _ => break,
                    };
                    v[e] = ai;
                }
            }
            _ => unreachable!("modes match"),
        }
        Ok(out)
    }

    /// Maps an exact series to residues mod `modulus`.
    pub fn reduce_mod(&self, modulus: u64) -> Result<Self> {
        CoeffMode::Modular(modulus).validate()?;
        match &self.store {
            Store::Exact(v) => Ok(Self {
                store: Store::Modular {
                    modulus,
                    values: v.iter().map(|x| reduce_big(x, modulus)).collect(),
                },
            }),
            Store::Modular { modulus: m, .. } => Err(Error::AlreadyModular(*m)),
        }
    }
}
