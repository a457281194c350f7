//! Congruence scanning over arithmetic progressions.
//!
//! Everything here checks statements of the shape "the coefficient at
//! q^(m·n+r) lies in a fixed residue class" — either against a precomputed
//! series, against the direct-counting oracle, or against both at once. A
//! scan never weakens silently: if the supplied series is too short for the
//! requested range the call fails with the order it would have needed, and
//! a modular series is accepted only when its modulus is a multiple of the
//! modulus being asserted.
//!
//! The deeper prime-power families are guarded by an explicit eligibility
//! test on p ([`eligible_prime`]), and the scanners reject primes for which
//! the hypothesis is known not to deliver the conclusion even though the
//! Legendre criterion passes (p = 5).

use std::time::Instant;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{is_prime, legendre};
use crate::error::{Error, Result};
use crate::oracle::{bprime_counts_mod, bregular_counts_mod};
use crate::registry::{Entry, Source, Status, VerificationReport};
use crate::series::TruncatedSeries;

/// One arithmetic-progression claim: coefficient of q^(m·n+r) is `residue`
/// mod `modulus` for all n < bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApAssertion {
    pub m: usize,
    pub r: usize,
    pub modulus: u64,
    pub residue: u64,
    pub bound: usize,
    pub source: Source,
}

impl ApAssertion {
    /// Largest coefficient index the scan will touch, plus one.
    pub fn needed_order(&self) -> Result<usize> {
        self.m
            .checked_mul(self.bound.saturating_sub(1))
            .and_then(|x| x.checked_add(self.r + 1))
            .ok_or(Error::Overflow("progression order"))
    }

    pub fn from_entry(entry: &Entry) -> Result<Self> {
        match entry {
            Entry::ApCongruence {
                m,
                r,
                modulus,
                residue,
                bound,
                source,
                ..
            } => Ok(Self {
                m: *m,
                r: *r,
                modulus: *modulus,
                residue: *residue,
                bound: *bound,
                source: *source,
            }),
            Entry::Identity { id, .. } => Err(Error::MalformedEntry {
                id: id.clone(),
                reason: "two-sided identities are checked by the registry layer".into(),
            }),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArgument(
                "progression step must be positive".into(),
            ));
        }
        if self.bound == 0 {
            return Err(Error::ZeroTruncation);
        }
        if self.modulus < 2 {
            return Err(Error::ModulusTooSmall(self.modulus));
        }
        if self.residue >= self.modulus {
            return Err(Error::InvalidArgument(format!(
                "residue {} is not reduced mod {}",
                self.residue, self.modulus
            )));
        }
        Ok(())
    }
}

/// Coefficient of q^idx reduced mod `m`, from an exact series or from a
/// modular one whose modulus is a multiple of `m`.
fn series_residue(s: &TruncatedSeries, idx: usize, m: u64) -> Result<u64> {
    if idx >= s.trunc() {
        return Err(Error::InsufficientTruncation {
            need: idx + 1,
            have: s.trunc(),
        });
    }
    match s.modulus() {
        None => {
            let c = s.coeff(idx)?;
            c.mod_floor(&m.into())
                .to_u64()
                .ok_or(Error::Overflow("residue extraction"))
        }
        Some(sm) => {
            if sm % m != 0 {
                return Err(Error::ModulusMismatch(sm, m));
            }
            Ok(s.residue(idx)? % m)
        }
    }
}

fn require_series(
    series: Option<&TruncatedSeries>,
    need: usize,
    modulus: u64,
) -> Result<&TruncatedSeries> {
    let s = series.ok_or_else(|| {
        Error::InvalidArgument("this source requires a generating-function series".into())
    })?;
    if s.trunc() < need {
        return Err(Error::InsufficientTruncation {
            need,
            have: s.trunc(),
        });
    }
    // fail fast on an unusable modulus rather than at the first index
    series_residue(s, 0, modulus)?;
    Ok(s)
}

/// Scans one arithmetic progression in the coefficients of the generating
/// function for partitions into distinct parts with no part divisible by 5.
/// `series` feeds the series route; the oracle route recounts from scratch.
pub fn verify_ap(
    id: &str,
    a: &ApAssertion,
    series: Option<&TruncatedSeries>,
) -> Result<VerificationReport> {
    a.validate()?;
    let start = Instant::now();
    let need = a.needed_order()?;

    let from_series = match a.source {
        Source::Series | Source::Both => Some(require_series(series, need, a.modulus)?),
        Source::Oracle => None,
    };
    let from_oracle = match a.source {
        Source::Oracle | Source::Both => Some(bprime_counts_mod(5, need, a.modulus)?),
        Source::Series => None,
    };

    let mut status = Status::Pass;
    'scan: for n in 0..a.bound {
        let idx = a.m * n + a.r;
        let mut seen: Option<u64> = None;
        if let Some(s) = from_series {
            seen = Some(series_residue(s, idx, a.modulus)?);
        }
        if let Some(table) = &from_oracle {
            let v = table[idx] % a.modulus;
            if let Some(prev) = seen {
                if prev != v {
                    // the two routes disagree: report the series value against
                    // the recount rather than against the asserted residue
                    status = Status::Fail {
                        exponent: idx,
                        lhs: prev.to_string(),
                        rhs: v.to_string(),
                    };
                    break 'scan;
                }
            }
            seen = Some(v);
        }
        let got = seen.expect("at least one source is always active");
        if got != a.residue {
            status = Status::Fail {
                exponent: idx,
                lhs: got.to_string(),
                rhs: a.residue.to_string(),
            };
            break 'scan;
        }
    }

    Ok(VerificationReport {
        id: id.to_string(),
        order_checked: a.bound,
        status,
        elapsed: start.elapsed(),
    })
}

/// The odd-index parity pattern: the coefficient at q^(2n+1) is odd exactly
/// when n = 15k² − 5k for some integer k. Checks every n < bound.
pub fn verify_parity_characterization(
    bound: usize,
    series: Option<&TruncatedSeries>,
) -> Result<VerificationReport> {
    if bound == 0 {
        return Err(Error::ZeroTruncation);
    }
    let start = Instant::now();
    let need = 2 * (bound - 1) + 2;
    let owned;
    let s = match series {
        Some(s) => require_series(Some(s), need, 2)?,
        None => {
            owned = crate::oracle::bprime_series_in(5, crate::series::CoeffMode::Modular(2), need)?;
            &owned
        }
    };

    let mut expected = vec![false; bound];
    let mut k: i64 = 0;
    loop {
        // 15k²−5k for k = 0, 1, -1, 2, -2, ...
        let n = 15 * k * k - 5 * k;
        let mut hit = false;
        if (n as usize) < bound {
            expected[n as usize] = true;
            hit = true;
        }
        let n_neg = 15 * k * k + 5 * k;
        if (n_neg as usize) < bound {
            expected[n_neg as usize] = true;
            hit = true;
        }
        if !hit && k > 0 {
            break;
        }
        k += 1;
    }

    let mut status = Status::Pass;
    for (n, want_odd) in expected.iter().enumerate() {
        let idx = 2 * n + 1;
        let odd = series_residue(s, idx, 2)? == 1;
        if odd != *want_odd {
            status = Status::Fail {
                exponent: idx,
                lhs: u64::from(odd).to_string(),
                rhs: u64::from(*want_odd).to_string(),
            };
            break;
        }
    }

    Ok(VerificationReport {
        id: "parity-2n+1".into(),
        order_checked: bound,
        status,
        elapsed: start.elapsed(),
    })
}

/// Legendre-symbol eligibility for the prime-power families: 3 and the
/// residue of −5 must land on opposite sides of the quadratic character.
pub fn eligible_prime(p: u64) -> Result<bool> {
    if p < 5 || !is_prime(p) {
        return Err(Error::UnusablePrime {
            p,
            reason: "the families are indexed by primes p ≥ 5".into(),
        });
    }
    Ok(legendre(3, p)? != legendre(-5, p)?)
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or(Error::Overflow("prime power"))
}

/// Offset (17·p^e + 1)/6, which is integral for every prime p ≥ 5.
fn family_offset(p: u64, e: u32) -> Result<usize> {
    let pe = checked_pow(p, e)?;
    let num = 17u64
        .checked_mul(pe)
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::Overflow("family offset"))?;
    if num % 6 != 0 {
        return Err(Error::InvalidArgument(format!(
            "offset (17·{p}^{e}+1)/6 is not integral"
        )));
    }
    usize::try_from(num / 6).map_err(|_| Error::Overflow("family offset"))
}

/// Scans the two mod-4 prime-power families against a series:
///
///   coefficient at 4·p^(2α)·(5n+j) + (17·p^(2α)+1)/6   for j ∈ {1, 3}
///   coefficient at 4·p^(2α+1)·(pn+j) + (17·p^(2α+2)+1)/6 for 0 < j < p
///
/// both ≡ 0 mod 4, for α ≤ alpha_max and every n below `bound` that keeps
/// the index inside the series. One report per family per α. p must pass
/// [`eligible_prime`]; p = 5 is rejected outright because the second family
/// already fails at its smallest admissible index there.
pub fn verify_thm12_families(
    p: u64,
    alpha_max: u32,
    bound: usize,
    series: &TruncatedSeries,
) -> Result<Vec<VerificationReport>> {
    if !eligible_prime(p)? {
        return Err(Error::UnusablePrime {
            p,
            reason: "the quadratic characters of 3 and -5 agree, so the families do not apply"
                .into(),
        });
    }
    if p == 5 {
        return Err(Error::UnusablePrime {
            p,
            reason: "5 divides the progression step, and the family fails at its first index"
                .into(),
        });
    }
    if bound == 0 {
        return Err(Error::ZeroTruncation);
    }
    // fail fast on an unusable modulus
    series_residue(series, 0, 4)?;
    let trunc = series.trunc();
    let mut reports = Vec::new();

    for alpha in 0..=alpha_max {
        // family one: step 4·p^(2α) on the progression 5n+j, j ∈ {1, 3}
        let start = Instant::now();
        let step = 4u128 * u128::from(checked_pow(p, 2 * alpha)?);
        let offset = family_offset(p, 2 * alpha)? as u128;
        let mut checked = 0usize;
        let mut status = Status::Pass;
        'one: for n in 0..bound as u128 {
            let mut any = false;
            for j in [1u128, 3] {
                let idx = step * (5 * n + j) + offset;
                if idx >= trunc as u128 {
                    continue;
                }
                any = true;
                checked += 1;
                let got = series_residue(series, idx as usize, 4)?;
                if got != 0 {
                    status = Status::Fail {
                        exponent: idx as usize,
                        lhs: got.to_string(),
                        rhs: "0".to_string(),
                    };
                    break 'one;
                }
            }
            if !any {
                break;
            }
        }
        reports.push(VerificationReport {
            id: format!("family1-p{p}-a{alpha}"),
            order_checked: checked,
            status,
            elapsed: start.elapsed(),
        });

        // family two: step 4·p^(2α+1) on the progression pn+j, 0 < j < p
        let start = Instant::now();
        let step = 4u128 * u128::from(checked_pow(p, 2 * alpha + 1)?);
        let offset = family_offset(p, 2 * alpha + 2)? as u128;
        let mut checked = 0usize;
        let mut status = Status::Pass;
        'two: for n in 0..bound as u128 {
            let mut any = false;
            for j in 1..p as u128 {
                let idx = step * (u128::from(p) * n + j) + offset;
                if idx >= trunc as u128 {
                    continue;
                }
                any = true;
                checked += 1;
                let got = series_residue(series, idx as usize, 4)?;
                if got != 0 {
                    status = Status::Fail {
                        exponent: idx as usize,
                        lhs: got.to_string(),
                        rhs: "0".to_string(),
                    };
                    break 'two;
                }
            }
            if !any {
                break;
            }
        }
        reports.push(VerificationReport {
            id: format!("family2-p{p}-a{alpha}"),
            order_checked: checked,
            status,
            elapsed: start.elapsed(),
        });
    }
    Ok(reports)
}

/// The mod-5 self-similarity: the coefficient at 5^(2α+1)·n + (5^(2α+1)+1)/6
/// matches the coefficient at 5n+1 modulo 5, for every index the series
/// covers (n < bound). One report per α ≤ alpha_max.
pub fn verify_internal_congruence(
    alpha_max: u32,
    bound: usize,
    series: &TruncatedSeries,
) -> Result<Vec<VerificationReport>> {
    if bound == 0 {
        return Err(Error::ZeroTruncation);
    }
    series_residue(series, 0, 5)?;
    let trunc = series.trunc() as u128;
    let mut reports = Vec::new();
    for alpha in 0..=alpha_max {
        let start = Instant::now();
        let step = u128::from(checked_pow(5, 2 * alpha + 1)?);
        let offset = (step + 1) / 6;
        let mut checked = 0usize;
        let mut status = Status::Pass;
        for n in 0..bound as u128 {
            let idx = step * n + offset;
            let base = 5 * n + 1;
            if idx >= trunc || base >= trunc {
                break;
            }
            checked += 1;
            let got = series_residue(series, idx as usize, 5)?;
            let want = series_residue(series, base as usize, 5)?;
            if got != want {
                status = Status::Fail {
                    exponent: idx as usize,
                    lhs: got.to_string(),
                    rhs: want.to_string(),
                };
                break;
            }
        }
        reports.push(VerificationReport {
            id: format!("internal-a{alpha}"),
            order_checked: checked,
            status,
            elapsed: start.elapsed(),
        });
    }
    Ok(reports)
}

/// Residues r mod ℓ for which 24r+1 is a quadratic nonresidue, so the
/// coefficients on ℓn+r are all even.
pub fn sellers_residues(ell: u64) -> Result<Vec<u64>> {
    if ell < 3 || !is_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    let mut out = Vec::new();
    for r in 0..ell {
        if legendre(((24 * r + 1) % ell) as i64, ell)? == -1 {
            out.push(r);
        }
    }
    Ok(out)
}

/// Parity bridge and its sibling congruences at a prime ℓ coprime to 6:
/// the coefficient of q^(ℓn + (ℓ²−1)/24) in the distinct-part function has
/// the parity of the count of ℓ-regular partitions of n, and the classes
/// from [`sellers_residues`] are all even. Both sides are recounted by the
/// oracle and re-expanded from the generating functions.
pub fn verify_cuigu(ell: u64, bound: usize) -> Result<Vec<VerificationReport>> {
    if ell < 5 || !is_prime(ell) || !(ell * ell - 1).is_multiple_of(24) {
        return Err(Error::UnusablePrime {
            p: ell,
            reason: "the parity bridge needs a prime coprime to 6".into(),
        });
    }
    if bound == 0 {
        return Err(Error::ZeroTruncation);
    }
    let offset = ((ell * ell - 1) / 24) as usize;
    let ell_us = ell as usize;
    let need = ell_us * (bound - 1) + offset + 1;

    let bprime_dp = bprime_counts_mod(ell, need, 2)?;
    let breg_dp = bregular_counts_mod(ell, bound, 2)?;
    let mode = crate::series::CoeffMode::Modular(2);
    let bprime_gf = crate::oracle::bprime_series_in(ell, mode, need)?;
    let breg_gf = crate::oracle::bregular_series_in(ell, mode, bound)?;

    let mut reports = Vec::new();

    let start = Instant::now();
    let mut status = Status::Pass;
    for (n, &rhs) in breg_dp.iter().enumerate().take(bound) {
        let idx = ell_us * n + offset;
        let lhs = bprime_dp[idx];
        let lhs_gf = bprime_gf.residue(idx)?;
        let rhs_gf = breg_gf.residue(n)?;
        if lhs != rhs || lhs_gf != lhs || rhs_gf != rhs {
            status = Status::Fail {
                exponent: idx,
                lhs: format!("{lhs} (recount {lhs_gf})"),
                rhs: format!("{rhs} (recount {rhs_gf})"),
            };
            break;
        }
    }
    reports.push(VerificationReport {
        id: format!("cuigu-l{ell}"),
        order_checked: bound,
        status,
        elapsed: start.elapsed(),
    });

    for r in sellers_residues(ell)? {
        let start = Instant::now();
        let mut status = Status::Pass;
        for n in 0..bound {
            let idx = ell_us * n + r as usize;
            if idx >= need {
                break;
            }
            let got = bprime_dp[idx];
            let got_gf = bprime_gf.residue(idx)?;
            if got != 0 || got_gf != 0 {
                status = Status::Fail {
                    exponent: idx,
                    lhs: format!("{got} (recount {got_gf})"),
                    rhs: "0".to_string(),
                };
                break;
            }
        }
        reports.push(VerificationReport {
            id: format!("sellers-l{ell}-r{r}"),
            order_checked: bound,
            status,
            elapsed: start.elapsed(),
        });
    }
    Ok(reports)
}
