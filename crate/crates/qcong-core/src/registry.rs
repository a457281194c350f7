//! Identity registry and mechanical verification.
//!
//! Claims are data, not code: each registry entry stores both sides of an
//! identity as grammar text (see [`crate::expr`]) plus an optional modulus,
//! or an arithmetic-progression congruence as plain numbers. Verification
//! parses, expands both sides to a requested order, and reports either a
//! clean pass or the smallest exponent where the sides part ways — so a
//! failing claim always comes with a concrete counterexample.
//!
//! The same machinery checks the two classical dissections of Euler's
//! product into p arithmetic classes ([`verify_p_dissection`]): the summand
//! for class k is rebuilt from theta functions, the distinguished class is
//! matched against its closed form, and the class bookkeeping is replayed
//! both arithmetically and on the actual support of each summand.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::expr::parse;
use crate::qfactory::pochhammer_in;
use crate::series::{compare, CoeffMode, TruncatedSeries};

/// JSON for the built-in registry, compiled into the library.
pub const BUILTIN_REGISTRY_JSON: &str = include_str!("../registry/identities.json");

/// How an arithmetic-progression congruence should be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Generating-function expansion only.
    Series,
    /// Direct partition counting only.
    Oracle,
    /// Both, which must also agree with each other.
    Both,
}

/// One registry claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Entry {
    /// lhs = rhs as q-series, exactly or modulo `modulus`.
    Identity {
        id: String,
        lhs: String,
        rhs: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<u64>,
        anchor: String,
    },
    /// Coefficient of q^(m·n+r) is `residue` mod `modulus` for n < bound.
    ApCongruence {
        id: String,
        m: usize,
        r: usize,
        modulus: u64,
        residue: u64,
        bound: usize,
        source: Source,
        anchor: String,
    },
}

impl Entry {
    pub fn id(&self) -> &str {
        match self {
            Entry::Identity { id, .. } | Entry::ApCongruence { id, .. } => id,
        }
    }

    pub fn anchor(&self) -> &str {
        match self {
            Entry::Identity { anchor, .. } | Entry::ApCongruence { anchor, .. } => anchor,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Entry::Identity { .. })
    }
}

/// Id-keyed collection of entries; iteration is always sorted by id.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    entries: BTreeMap<String, Entry>,
}

impl Registry {
    /// The registry compiled into the library.
    pub fn builtin() -> Result<Self> {
        Self::from_json(BUILTIN_REGISTRY_JSON)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let list: Vec<Entry> =
            serde_json::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
        Self::from_entries(list)
    }

    pub fn from_entries(list: Vec<Entry>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for e in list {
            let id = e.id().to_string();
            if id.is_empty() {
                return Err(Error::MalformedEntry {
                    id,
                    reason: "empty id".into(),
                });
            }
            if entries.insert(id.clone(), e).is_some() {
                return Err(Error::DuplicateId(id));
            }
        }
        Ok(Self { entries })
    }

    pub fn to_json(&self) -> Result<String> {
        let list: Vec<&Entry> = self.entries().collect();
        serde_json::to_string_pretty(&list).map_err(|e| Error::Registry(e.to_string()))
    }

    pub fn get(&self, id: &str) -> Result<&Entry> {
        self.entries
            .get(id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.entries.values()
    }

    /// Entries whose id matches a shell-style glob (`*`, `?`), sorted by id.
    pub fn matching(&self, pattern: &str) -> Vec<&Entry> {
        self.entries()
            .filter(|e| glob_match(pattern, e.id()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Shell-style glob over ASCII ids: `*` any run, `?` any one byte.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<u8> = pattern.bytes().collect();
    let t: Vec<u8> = text.bytes().collect();
    // classic two-pointer matcher with single-star backtracking
    let (mut pi, mut ti) = (0usize, 0usize);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && (p[pi] == b'?' || p[pi] == t[ti]) {
            pi += 1;
            ti += 1;
        } else if pi < p.len() && p[pi] == b'*' {
            star = Some((pi, ti));
            pi += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    while pi < p.len() && p[pi] == b'*' {
        pi += 1;
    }
    pi == p.len()
}

/// Pass, or the smallest exponent where the two sides disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail {
        exponent: usize,
        lhs: String,
        rhs: String,
    },
}

/// Outcome of checking one claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    /// Coefficients actually compared.
    pub order_checked: usize,
    pub status: Status,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass)
    }
}

fn malformed(id: &str, what: &str, e: Error) -> Error {
    Error::MalformedEntry {
        id: id.to_string(),
        reason: format!("{what}: {e}"),
    }
}

/// Expands both sides of an identity entry to `trunc` coefficients and
/// compares them; `modulus_override` replaces the entry's stored modulus
/// (including imposing one on an exact entry).
pub fn verify_identity(
    registry: &Registry,
    id: &str,
    trunc: usize,
    modulus_override: Option<u64>,
) -> Result<VerificationReport> {
    let entry = registry.get(id)?;
    let Entry::Identity {
        lhs, rhs, modulus, ..
    } = entry
    else {
        return Err(Error::MalformedEntry {
            id: id.to_string(),
            reason: "arithmetic-progression entries are checked by the congruence layer".into(),
        });
    };
    let mode = match modulus_override.or(*modulus) {
        Some(m) => CoeffMode::Modular(m),
        None => CoeffMode::Exact,
    };
    let start = Instant::now();
    let lhs_ast = parse(lhs).map_err(|e| malformed(id, "lhs", e))?;
    let rhs_ast = parse(rhs).map_err(|e| malformed(id, "rhs", e))?;
    let l = lhs_ast.eval_in(mode, trunc)?;
    let r = rhs_ast.eval_in(mode, trunc)?;
    let cmp = compare(&l, &r)?;
    let status = match cmp.mismatch {
        None => Status::Pass,
        Some(m) => Status::Fail {
            exponent: m.exponent,
            lhs: m.lhs.to_string(),
            rhs: m.rhs.to_string(),
        },
    };
    Ok(VerificationReport {
        id: id.to_string(),
        order_checked: cmp.compared,
        status,
        elapsed: start.elapsed(),
    })
}

/// Verifies every identity entry at one order, sorted by id.
pub fn verify_all_identities(
    registry: &Registry,
    trunc: usize,
    modulus_override: Option<u64>,
) -> Result<Vec<VerificationReport>> {
    registry
        .entries()
        .filter(|e| e.is_identity())
        .map(|e| verify_identity(registry, e.id(), trunc, modulus_override))
        .collect()
}

// ---- p-dissections of Euler's product ---------------------------------------

/// Which classical dissection to replay.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DissectionTarget {
    /// (q;q)∞ split into p classes; needs gcd(p, 6) = 1.
    F1,
    /// (q;q)∞³ split into p classes; any odd prime.
    F1Cubed,
}

/// Replay of one dissection: reconstruction, support, and class bookkeeping.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DissectionCheck {
    pub p: u64,
    pub target: DissectionTarget,
    pub order_checked: usize,
    /// Exponent class mod p of the distinguished summand.
    pub distinguished_class: u64,
    /// Exponent class mod p of each ordinary summand, in k order.
    pub summand_classes: Vec<u64>,
    /// Sum of all summands reproduces the product to the checked order.
    pub sum_matches: bool,
    /// Every summand's nonzero exponents lie in its declared class.
    pub support_consistent: bool,
    /// No ordinary class collides with the distinguished class.
    pub classes_avoid_distinguished: bool,
    /// Smallest failing exponent of the reconstruction, if any.
    pub witness_exponent: Option<usize>,
}

impl DissectionCheck {
    pub fn passed(&self) -> bool {
        self.sum_matches && self.support_consistent && self.classes_avoid_distinguished
    }
}

/// Shifts a summand to its place, clips to the window, applies a sign.
fn placed(
    term: &TruncatedSeries,
    shift: usize,
    sign: i64,
    trunc: usize,
) -> Result<TruncatedSeries> {
    let shifted = term.shift_up(shift)?;
    Ok(shifted
        .truncated(trunc.min(shifted.trunc()))?
        .scale_i64(sign))
}

/// True when every nonzero exponent of `s` is ≡ class (mod p).
fn support_in_class(s: &TruncatedSeries, p: u64, class: u64) -> Result<bool> {
    for i in 0..s.trunc() {
        if !s.coeff(i)?.is_zero() && (i as u64) % p != class {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies the p-class dissection of Euler's product (or its cube) at a
/// given order: the p summands are rebuilt from their closed forms, summed,
/// and compared against the product itself, while each summand's support is
/// checked against the exponent class that the quadratic shift dictates.
pub fn verify_p_dissection(
    p: u64,
    target: DissectionTarget,
    trunc: usize,
) -> Result<DissectionCheck> {
    let min_p = match target {
        DissectionTarget::F1 => 5,
        DissectionTarget::F1Cubed => 3,
    };
    if !is_prime(p) || p < min_p {
        return Err(Error::UnusablePrime {
            p,
            reason: match target {
                DissectionTarget::F1 => "the product dissection needs a prime coprime to 6".into(),
                DissectionTarget::F1Cubed => "the cube dissection needs an odd prime".into(),
            },
        });
    }
    let mode = CoeffMode::Exact;
    let pi = p as i64;
    let psq = (p * p) as usize;
    let mut sum = TruncatedSeries::zero_in(mode, trunc)?;
    let mut summand_classes = Vec::new();
    let mut support_consistent = true;

    let distinguished_class = match target {
        DissectionTarget::F1 => {
            // k runs over -(p-1)/2 ..= (p-1)/2; the distinguished k has
            // 6k+1 ≡ 0 (mod p)
            let half = (pi - 1) / 2;
            let kstar = if p % 6 == 1 {
                (pi - 1) / 6
            } else {
                -(pi + 1) / 6
            };
            let dist_exp = ((p * p - 1) / 24) as usize;
            let dist_class = (dist_exp as u64) % p;
            for k in -half..=half {
                let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
                if k == kstar {
                    let tail = pochhammer_in(mode, psq, psq, trunc)?;
                    let term = placed(&tail, dist_exp, sign, trunc)?;
                    if !support_in_class(&term, p, dist_class)? {
                        support_consistent = false;
                    }
                    sum = sum.add(&term)?;
                    continue;
                }
                let shift = ((3 * k * k + k) / 2) as usize;
                let class = (shift as u64) % p;
                summand_classes.push(class);
                // f(-q^A, -q^B) with A+B = 3p² and A-B = (6k+1)p
                let a = ((3 * pi * pi + (6 * k + 1) * pi) / 2) as usize;
                let b = ((3 * pi * pi - (6 * k + 1) * pi) / 2) as usize;
                let theta = crate::qfactory::theta_f_in(mode, a, b, trunc)?;
                let term = placed(&theta, shift, sign, trunc)?;
                if !support_in_class(&term, p, class)? {
                    support_consistent = false;
                }
                sum = sum.add(&term)?;
            }
            dist_class
        }
        DissectionTarget::F1Cubed => {
            // k runs over 0 ..= p-1; the distinguished k has 2k+1 ≡ 0 (mod p)
            let kstar = (pi - 1) / 2;
            let dist_exp = ((p * p - 1) / 8) as usize;
            let dist_class = (dist_exp as u64) % p;
            for k in 0..pi {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                if k == kstar {
                    let tail = pochhammer_in(mode, psq, psq, trunc)?.pow(3)?;
                    let term = placed(&tail, dist_exp, sign * pi, trunc)?;
                    if !support_in_class(&term, p, dist_class)? {
                        support_consistent = false;
                    }
                    sum = sum.add(&term)?;
                    continue;
                }
                let shift = (k * (k + 1) / 2) as usize;
                let class = (shift as u64) % p;
                summand_classes.push(class);
                // Σ_{n≥0} (-1)^n (2pn+2k+1) q^{pn(pn+2k+1)/2}
                let mut coeffs = vec![0i64; trunc];
                let mut n = 0i64;
                loop {
                    let e = pi * n * (pi * n + 2 * k + 1) / 2;
                    if e >= trunc as i64 {
                        break;
                    }
                    let c = 2 * pi * n + 2 * k + 1;
                    coeffs[e as usize] = if n % 2 == 0 { c } else { -c };
                    n += 1;
                }
                let tail = TruncatedSeries::from_i64(&coeffs, trunc)?;
                let term = placed(&tail, shift, sign, trunc)?;
                if !support_in_class(&term, p, class)? {
                    support_consistent = false;
                }
                sum = sum.add(&term)?;
            }
            dist_class
        }
    };

    let product = match target {
        DissectionTarget::F1 => pochhammer_in(mode, 1, 1, trunc)?,
        DissectionTarget::F1Cubed => pochhammer_in(mode, 1, 1, trunc)?.pow(3)?,
    };
    let cmp = compare(&sum, &product)?;
    let classes_avoid_distinguished = summand_classes.iter().all(|&c| c != distinguished_class);

    Ok(DissectionCheck {
        p,
        target,
        order_checked: cmp.compared,
        distinguished_class,
        summand_classes,
        sum_matches: cmp.mismatch.is_none(),
        support_consistent,
        classes_avoid_distinguished,
        witness_exponent: cmp.mismatch.map(|m| m.exponent),
    })
}
