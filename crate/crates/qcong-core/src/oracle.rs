//! Independent combinatorial ground truth.
//!
//! Everything in this module counts restricted partitions by dynamic
//! programming over explicit part lists — no q-series machinery involved —
//! so it can serve as the oracle against which series expansions are
//! verified. The three families, each filtered by a regularity modulus ℓ:
//!
//! * distinct parts, none divisible by ℓ (written b′_ℓ elsewhere),
//! * odd parts, none divisible by ℓ, repeats allowed,
//! * unrestricted parts, none divisible by ℓ (the ℓ-regular count b_ℓ).
//!
//! For odd ℓ the first two are equinumerous (Glaisher-type bijection:
//! doubling a part not divisible by ℓ stays off the multiples of ℓ exactly
//! when ℓ is odd); for even ℓ they genuinely differ, and the tests pin a
//! counterexample for each.
//!
//! Generating-function routes ([`bprime_series_in`], [`bregular_series_in`])
//! are provided for the *other* direction of every cross-check; they share
//! no code with the DP counters.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qfactory::QProduct;
use crate::series::{CoeffMode, TruncatedSeries};

/// Part-shape restriction applied on top of the "no part divisible by ℓ"
/// filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionVariant {
    /// Distinct parts (each used at most once).
    DistinctParts,
    /// Odd parts, repeats allowed.
    OddParts,
    /// Any parts, repeats allowed.
    UnrestrictedParts,
}

/// A single count request: partitions of `n` under `variant`, with no part
/// divisible by `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionQuery {
    pub ell: u64,
    pub n: usize,
    pub variant: PartitionVariant,
}

fn check_ell(ell: u64) -> Result<usize> {
    if ell < 2 {
        return Err(Error::InvalidArgument(format!(
            "regularity modulus must be at least 2, got {ell}"
        )));
    }
    usize::try_from(ell).map_err(|_| Error::Overflow("regularity modulus"))
}

fn dp_exact(bound: usize, distinct: bool, allow: impl Fn(usize) -> bool) -> Vec<BigInt> {
    let mut dp = vec![BigInt::zero(); bound];
    dp[0] = BigInt::from(1);
    for p in 1..bound {
        if !allow(p) {
            continue;
        }
        if distinct {
            for n in (p..bound).rev() {
                let add = dp[n - p].clone();
                dp[n] += add;
            }
        } else {
            for n in p..bound {
                let add = dp[n - p].clone();
                dp[n] += add;
            }
        }
    }
    dp
}

fn dp_mod(bound: usize, distinct: bool, allow: impl Fn(usize) -> bool, m: u64) -> Vec<u64> {
    let mut dp = vec![0u64; bound];
    dp[0] = 1 % m;
    for p in 1..bound {
        if !allow(p) {
            continue;
        }
        if distinct {
            for n in (p..bound).rev() {
                dp[n] = (dp[n] + dp[n - p]) % m;
            }
        } else {
            for n in p..bound {
                dp[n] = (dp[n] + dp[n - p]) % m;
            }
        }
    }
    dp
}

fn part_filter(ell: usize, variant: PartitionVariant) -> impl Fn(usize) -> bool {
    move |p: usize| {
        !p.is_multiple_of(ell)
            && match variant {
                PartitionVariant::OddParts => p % 2 == 1,
                _ => true,
            }
    }
}

/// Counts for n = 0 .. bound-1 under a variant, exactly.
pub fn counts(ell: u64, variant: PartitionVariant, bound: usize) -> Result<Vec<BigInt>> {
    let ell = check_ell(ell)?;
    if bound == 0 {
        return Err(Error::ZeroTruncation);
    }
    let distinct = variant == PartitionVariant::DistinctParts;
    Ok(dp_exact(bound, distinct, part_filter(ell, variant)))
}

/// Counts for n = 0 .. bound-1 under a variant, reduced mod `modulus`.
/// This is the oracle route for million-coefficient congruence scans.
pub fn counts_mod(
    ell: u64,
    variant: PartitionVariant,
    bound: usize,
    modulus: u64,
) -> Result<Vec<u64>> {
    let ell = check_ell(ell)?;
    if bound == 0 {
        return Err(Error::ZeroTruncation);
    }
    if modulus < 2 {
        return Err(Error::ModulusTooSmall(modulus));
    }
    let distinct = variant == PartitionVariant::DistinctParts;
    Ok(dp_mod(bound, distinct, part_filter(ell, variant), modulus))
}

/// Answers one [`PartitionQuery`].
pub fn count(query: PartitionQuery) -> Result<BigInt> {
    let mut v = counts(query.ell, query.variant, query.n + 1)?;
    Ok(v.pop().expect("bound >= 1"))
}

/// Partitions of n into distinct parts, none divisible by ell.
pub fn count_bprime(ell: u64, n: usize) -> Result<BigInt> {
    count(PartitionQuery {
        ell,
        n,
        variant: PartitionVariant::DistinctParts,
    })
}

/// Those counts for n = 0 .. bound-1.
pub fn bprime_counts(ell: u64, bound: usize) -> Result<Vec<BigInt>> {
    counts(ell, PartitionVariant::DistinctParts, bound)
}

/// Those counts mod `modulus`.
pub fn bprime_counts_mod(ell: u64, bound: usize, modulus: u64) -> Result<Vec<u64>> {
    counts_mod(ell, PartitionVariant::DistinctParts, bound, modulus)
}

/// Partitions of n into odd parts none divisible by ell, repeats allowed.
pub fn count_bprime_oddparts(ell: u64, n: usize) -> Result<BigInt> {
    count(PartitionQuery {
        ell,
        n,
        variant: PartitionVariant::OddParts,
    })
}

/// Partitions of n with no part divisible by ell (the ℓ-regular count).
pub fn count_bregular(ell: u64, n: usize) -> Result<BigInt> {
    count(PartitionQuery {
        ell,
        n,
        variant: PartitionVariant::UnrestrictedParts,
    })
}

/// ℓ-regular counts for n = 0 .. bound-1.
pub fn bregular_counts(ell: u64, bound: usize) -> Result<Vec<BigInt>> {
    counts(ell, PartitionVariant::UnrestrictedParts, bound)
}

/// ℓ-regular counts mod `modulus`.
pub fn bregular_counts_mod(ell: u64, bound: usize, modulus: u64) -> Result<Vec<u64>> {
    counts_mod(ell, PartitionVariant::UnrestrictedParts, bound, modulus)
}

/// Self-conjugate partition counts for n = 0 .. bound-1, via the principal
/// hook decomposition (distinct odd hook lengths).
pub fn selfconjugate_counts(bound: usize) -> Result<Vec<BigInt>> {
    if bound == 0 {
        return Err(Error::ZeroTruncation);
    }
    Ok(dp_exact(bound, true, |p| p % 2 == 1))
}

/// Generating function Σ b′_ℓ(n) qⁿ as the eta-type product
/// (q²;q²)(q^ℓ;q^ℓ) / ((q;q)(q^{2ℓ};q^{2ℓ})).
pub fn bprime_series_in(ell: u64, mode: CoeffMode, trunc: usize) -> Result<TruncatedSeries> {
    let ell = check_ell(ell)?;
    QProduct::new()
        .factor(2, 2, 1)
        .factor(ell, ell, 1)
        .factor(1, 1, -1)
        .factor(2 * ell, 2 * ell, -1)
        .expand_in(mode, trunc)
}

/// Exact-mode b′_ℓ generating function.
pub fn bprime_series(ell: u64, trunc: usize) -> Result<TruncatedSeries> {
    bprime_series_in(ell, CoeffMode::Exact, trunc)
}

/// Generating function Σ b_ℓ(n) qⁿ = (q^ℓ;q^ℓ) / (q;q).
pub fn bregular_series_in(ell: u64, mode: CoeffMode, trunc: usize) -> Result<TruncatedSeries> {
    let ell = check_ell(ell)?;
    QProduct::new()
        .factor(ell, ell, 1)
        .factor(1, 1, -1)
        .expand_in(mode, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Recursive enumeration, deliberately naive: the DP's own oracle.
    fn enumerate(ell: usize, n: usize, variant: PartitionVariant) -> u64 {
        fn rec(
            remaining: usize,
            max_part: usize,
            allow: &dyn Fn(usize) -> bool,
            distinct: bool,
        ) -> u64 {
            if remaining == 0 {
                return 1;
            }
            let mut total = 0;
            for p in (1..=remaining.min(max_part)).rev() {
                if allow(p) {
                    let cap = if distinct { p - 1 } else { p };
                    total += rec(remaining - p, cap, allow, distinct);
                }
            }
            total
        }
        let allow = part_filter(ell, variant);
        rec(n, n, &allow, variant == PartitionVariant::DistinctParts)
    }

    /// Counts self-conjugate partitions by building each partition and
    /// comparing with its transpose — no hook decomposition involved.
    fn selfconjugate_enumerate(n: usize) -> u64 {
        fn transpose(parts: &[usize]) -> Vec<usize> {
            let rows = parts.first().copied().unwrap_or(0);
            (1..=rows)
                .map(|i| parts.iter().filter(|&&p| p >= i).count())
                .collect()
        }
        fn rec(remaining: usize, max_part: usize, acc: &mut Vec<usize>, hits: &mut u64) {
            if remaining == 0 {
                if *acc == transpose(acc) {
                    *hits += 1;
                }
                return;
            }
            for p in (1..=remaining.min(max_part)).rev() {
                acc.push(p);
                rec(remaining - p, p, acc, hits);
                acc.pop();
            }
        }
        if n == 0 {
            return 1;
        }
        let mut hits = 0;
        rec(n, n, &mut Vec::new(), &mut hits);
        hits
    }

    #[test]
    fn distinct_counts_small_prefix() {
        let c = bprime_counts(5, 22).unwrap();
        let want = [
            1i64, 1, 1, 2, 2, 2, 3, 4, 4, 6, 7, 8, 10, 12, 14, 16, 19, 22, 26, 30, 35, 41,
        ];
        let got: Vec<BigInt> = want.iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(c, got);
    }

    #[test]
    fn distinct_count_at_100() {
        assert_eq!(count_bprime(5, 100).unwrap(), BigInt::from(86072));
    }

    #[test]
    fn series_route_matches_dp_route() {
        let dp = bprime_counts(5, 200).unwrap();
        let gf = bprime_series(5, 200).unwrap();
        for (n, want) in dp.iter().enumerate() {
            assert_eq!(&gf.coeff(n).unwrap(), want, "n = {n}");
        }
        let dp2 = bregular_counts(2, 60).unwrap();
        let gf2 = bregular_series_in(2, CoeffMode::Exact, 60).unwrap();
        for (n, want) in dp2.iter().enumerate() {
            assert_eq!(&gf2.coeff(n).unwrap(), want, "b_2({n})");
        }
    }

    #[test]
    fn modular_counts_match_reduced_exact() {
        let exact = bprime_counts(5, 300).unwrap();
        let m4 = bprime_counts_mod(5, 300, 4).unwrap();
        for n in 0..300 {
            assert_eq!(BigInt::from(m4[n]), &exact[n] % 4, "n = {n}");
        }
        let r2 = bregular_counts_mod(5, 120, 2).unwrap();
        let re = bregular_counts(5, 120).unwrap();
        for n in 0..120 {
            assert_eq!(BigInt::from(r2[n]), &re[n] % 2);
        }
    }

    #[test]
    fn equinumerosity_holds_for_odd_moduli() {
        for ell in [3u64, 5, 7, 9] {
            let distinct = counts(ell, PartitionVariant::DistinctParts, 201).unwrap();
            let odd = counts(ell, PartitionVariant::OddParts, 201).unwrap();
            assert_eq!(distinct, odd, "ell = {ell}");
        }
    }

    #[test]
    fn equinumerosity_fails_for_even_moduli() {
        // doubling a part can land on a multiple of an even modulus, so the
        // bijection breaks; these witnesses pin the first failures
        assert_eq!(count_bprime(2, 2).unwrap(), BigInt::from(0));
        assert_eq!(count_bprime_oddparts(2, 2).unwrap(), BigInt::from(1));
        assert_eq!(count_bprime(4, 4).unwrap(), BigInt::from(1));
        assert_eq!(count_bprime_oddparts(4, 4).unwrap(), BigInt::from(2));
    }

    #[test]
    fn oddparts_examples() {
        assert_eq!(count_bprime_oddparts(5, 10).unwrap(), BigInt::from(7));
        assert_eq!(count_bprime_oddparts(5, 0).unwrap(), BigInt::from(1));
        assert_eq!(
            count_bprime_oddparts(3, 5).unwrap(),
            count_bprime(3, 5).unwrap()
        );
    }

    #[test]
    fn regular_counts() {
        assert_eq!(count_bregular(2, 5).unwrap(), BigInt::from(3));
        let b5 = bregular_counts(5, 11).unwrap();
        let want = [1i64, 1, 2, 3, 5, 6, 10, 13, 19, 25, 34];
        for (n, &w) in want.iter().enumerate() {
            assert_eq!(b5[n], BigInt::from(w), "b_5({n})");
        }
    }

    #[test]
    fn distinct_counts_never_decrease() {
        let c = bprime_counts(5, 301).unwrap();
        for n in 1..c.len() {
            assert!(c[n] >= c[n - 1], "decrease at n = {n}");
        }
    }

    #[test]
    fn dp_matches_naive_enumeration() {
        for ell in [2u64, 3, 5] {
            for variant in [
                PartitionVariant::DistinctParts,
                PartitionVariant::OddParts,
                PartitionVariant::UnrestrictedParts,
            ] {
                let dp = counts(ell, variant, 31).unwrap();
                for (n, value) in dp.iter().enumerate() {
                    assert_eq!(
                        *value,
                        BigInt::from(enumerate(ell as usize, n, variant)),
                        "ell = {ell}, n = {n}, {variant:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn selfconjugate_counts_match_transpose_enumeration() {
        let dp = selfconjugate_counts(25).unwrap();
        for (n, value) in dp.iter().enumerate() {
            assert_eq!(*value, BigInt::from(selfconjugate_enumerate(n)), "n = {n}");
        }
        let prefix: Vec<BigInt> = [1i64, 1, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 3]
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        assert_eq!(&dp[..13], &prefix[..]);
    }

    #[test]
    fn selfconjugate_equals_distinct_odd() {
        // hooks of a self-conjugate shape are the distinct odd parts of a
        // 2-filtered distinct partition
        assert_eq!(
            selfconjugate_counts(80).unwrap(),
            bprime_counts(2, 80).unwrap()
        );
    }

    #[test]
    fn small_moduli_rejected() {
        assert!(count_bprime(1, 5).is_err());
        assert!(count_bprime(0, 5).is_err());
        assert!(bprime_counts_mod(5, 10, 1).is_err());
        assert!(bprime_series(1, 10).is_err());
    }
}
