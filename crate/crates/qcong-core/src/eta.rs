//! Eta-quotient modular-form bookkeeping.
//!
//! An [`EtaQuotient`] is a finite product Π η(δz)^{r_δ} over divisors δ of a
//! level N. This module computes the classical invariants needed to place
//! such a quotient in a space of holomorphic modular forms on Γ₀(N):
//!
//! * weight ½ Σ r_δ and the two mod-24 admissibility sums,
//! * the nebentypus character χ(d) = ((-1)^ℓ Π δ^{r_δ} / d) as a Kronecker
//!   symbol, reduced to its square class,
//! * the exact rational order of vanishing at each cusp c/d (which depends
//!   only on d), via the gcd formula,
//! * a holomorphy profile over all divisors of N.
//!
//! It also constructs the specific level-360 family `bk` whose q-expansion
//! reduces, modulo powers of 5, to generating-function slices of 5-regular
//! distinct-part partition counts, together with its divisor table of
//! rescaled cusp values; and an exact-rational residue-density report for
//! studying lacunarity of coefficient streams.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd_u64, kronecker};
use crate::error::{Error, Result};
use crate::qfactory::{expand_eta_quotient_in, EtaExpansion};
use crate::series::{CoeffMode, TruncatedSeries};

/// A cusp representative c/d on Γ₀(N); the invariants computed here depend
/// only on d, but c is carried for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CuspClass {
    pub d: u64,
    pub c: u64,
}

impl CuspClass {
    pub fn new(d: u64, c: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "cusp denominator must be positive".into(),
            ));
        }
        if gcd_u64(c, d) != 1 {
            return Err(Error::InvalidArgument(format!(
                "cusp numerator {c} must be coprime to denominator {d}"
            )));
        }
        Ok(Self { d, c })
    }

    /// The representative 1/d.
    pub fn at(d: u64) -> Result<Self> {
        Self::new(d, 1)
    }
}

/// The two mod-24 sums and weight-integrality that decide whether a quotient
/// transforms like a modular form on Γ₀(N) with a quadratic character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    /// Σ δ·r_δ
    pub delta_sum: i64,
    /// Σ (N/δ)·r_δ
    pub conjugate_sum: i64,
    pub weight: Ratio<i64>,
    pub admissible: bool,
}

/// Square-class-reduced upper argument of the character's Kronecker symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    /// True when the (-1)^ℓ sign factor is -1 (odd integer weight).
    pub negative: bool,
    /// Squarefree positive part after mod-2 exponent reduction.
    pub square_class: u64,
}

impl Character {
    /// The symbol's upper argument.
    pub fn top(&self) -> i64 {
        let s = self.square_class as i64;
        if self.negative {
            -s
        } else {
            s
        }
    }

    /// χ(d), a Kronecker symbol evaluation.
    pub fn chi(&self, d: i64) -> i64 {
        kronecker(self.top(), d)
    }
}

/// Full invariant bundle for one quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularFormProfile {
    pub level: u64,
    pub weight: Ratio<i64>,
    pub admissibility: Admissibility,
    /// Present when the weight is an integer.
    pub character: Option<Character>,
    /// (d, order at the cusp 1/d) for every divisor d of the level, ascending.
    pub cusp_orders: Vec<(u64, Ratio<i64>)>,
    /// True iff every cusp order is ≥ 0.
    pub holomorphic: bool,
}

/// Π η(δz)^{r_δ} with every δ dividing the level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    level: u64,
    terms: Vec<(u64, i64)>,
}

impl EtaQuotient {
    /// Validates divisibility, merges repeated δ, and drops zero exponents;
    /// a quotient with no surviving factor is rejected.
    pub fn new(level: u64, terms: &[(u64, i64)]) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        let mut merged: Vec<(u64, i64)> = Vec::new();
        for &(delta, r) in terms {
            if delta == 0 || !level.is_multiple_of(delta) {
                return Err(Error::EtaDeltaNotDivisor { delta, level });
            }
            match merged.iter_mut().find(|(d, _)| *d == delta) {
                Some((_, acc)) => {
                    *acc = acc.checked_add(r).ok_or(Error::Overflow("eta exponent"))?
                }
                None => merged.push((delta, r)),
            }
        }
        merged.retain(|&(_, r)| r != 0);
        merged.sort_unstable();
        if merged.is_empty() {
            return Err(Error::EmptyEtaQuotient);
        }
        Ok(Self {
            level,
            terms: merged,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// (δ, r_δ) pairs, ascending in δ, exponents nonzero.
    pub fn terms(&self) -> &[(u64, i64)] {
        &self.terms
    }

    /// ½ Σ r_δ.
    pub fn weight(&self) -> Ratio<i64> {
        Ratio::new(self.terms.iter().map(|&(_, r)| r).sum(), 2)
    }

    /// Both mod-24 sums plus integrality of the weight.
    pub fn admissibility(&self) -> Admissibility {
        let delta_sum: i64 = self.terms.iter().map(|&(d, r)| d as i64 * r).sum();
        let conjugate_sum: i64 = self
            .terms
            .iter()
            .map(|&(d, r)| (self.level / d) as i64 * r)
            .sum();
        let weight = self.weight();
        Admissibility {
            delta_sum,
            conjugate_sum,
            weight,
            admissible: delta_sum.rem_euclid(24) == 0
                && conjugate_sum.rem_euclid(24) == 0
                && weight.is_integer(),
        }
    }

    /// Order of vanishing at the cusp c/d:
    /// (N/24) Σ_δ gcd(d,δ)² r_δ / (gcd(d, N/d) · d · δ).
    pub fn cusp_order(&self, cusp: &CuspClass) -> Result<Ratio<i64>> {
        let d = cusp.d;
        if !self.level.is_multiple_of(d) {
            return Err(Error::EtaDeltaNotDivisor {
                delta: d,
                level: self.level,
            });
        }
        let n = self.level as i64;
        let co = gcd_u64(d, self.level / d) as i64;
        let mut total = Ratio::zero();
        for &(delta, r) in &self.terms {
            let g = gcd_u64(d, delta) as i64;
            total += Ratio::new(g * g * r, co * d as i64 * delta as i64);
        }
        Ok(total * Ratio::new(n, 24))
    }

    /// Square class of (-1)^ℓ Π δ^{r_δ}; requires integral weight ℓ.
    pub fn character(&self) -> Result<Character> {
        let weight = self.weight();
        if !weight.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "character needs integral weight, got {weight}"
            )));
        }
        let negative = weight.to_integer().rem_euclid(2) == 1;
        // accumulate exponent parity per prime across all δ^{r_δ}
        let mut parity: Vec<(u64, i64)> = Vec::new();
        for &(delta, r) in &self.terms {
            let mut rest = delta;
            let mut p = 2u64;
            while p * p <= rest {
                if rest % p == 0 {
                    let mut e = 0i64;
                    while rest % p == 0 {
                        rest /= p;
                        e += 1;
                    }
                    match parity.iter_mut().find(|(q, _)| *q == p) {
                        Some((_, acc)) => *acc += e * r,
                        None => parity.push((p, e * r)),
                    }
                }
                p += 1;
            }
            if rest > 1 {
                match parity.iter_mut().find(|(q, _)| *q == rest) {
                    Some((_, acc)) => *acc += r,
                    None => parity.push((rest, r)),
                }
            }
        }
        parity.retain(|&(_, e)| e.rem_euclid(2) == 1);
        parity.sort_unstable();
        let square_class = parity.iter().map(|&(p, _)| p).product::<u64>().max(1);
        Ok(Character {
            negative,
            square_class,
        })
    }

    /// Cusp orders at every divisor of the level, plus everything above.
    pub fn holomorphy(&self) -> ModularFormProfile {
        let cusp_orders: Vec<(u64, Ratio<i64>)> = divisors(self.level)
            .into_iter()
            .map(|d| {
                let order = self
                    .cusp_order(&CuspClass { d, c: 1 })
                    .expect("d divides level");
                (d, order)
            })
            .collect();
        let holomorphic = cusp_orders.iter().all(|(_, o)| !o.is_negative());
        ModularFormProfile {
            level: self.level,
            weight: self.weight(),
            admissibility: self.admissibility(),
            character: self.character().ok(),
            cusp_orders,
            holomorphic,
        }
    }

    /// q-expansion (prefactor exponent Σ δ r_δ / 24, series part).
    pub fn expand_in(&self, mode: CoeffMode, trunc: usize) -> Result<EtaExpansion> {
        expand_eta_quotient_in(&self.terms, mode, trunc)
    }
}

/// Largest k the level-360 family supports without i64 overflow in its
/// exponents (5^{k+1} must fit comfortably).
pub const BK_MAX_K: u32 = 24;

/// The level-360 quotient with r₆ = -3, r₁₂ = 5^{k+1}+1, r₃₀ = 3,
/// r₆₀ = -(5^k+1); weight 2·5^k. Requires k ≥ 1.
pub fn construct_bk(k: u32) -> Result<EtaQuotient> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "bk requires k >= 1 (the k = 0 quotient reduces trivially)".into(),
        ));
    }
    if k > BK_MAX_K {
        return Err(Error::Overflow("bk exponent"));
    }
    let p5k = 5i64.pow(k);
    EtaQuotient::new(
        360,
        &[(6, -3), (12, 5 * p5k + 1), (30, 3), (60, -(p5k + 1))],
    )
}

/// The combined q-expansion of the level-360 family member (its q-power
/// prefactor is exactly 1 for every k), truncated to `trunc`.
pub fn bk_series_in(k: u32, mode: CoeffMode, trunc: usize) -> Result<TruncatedSeries> {
    if trunc == 0 {
        return Err(Error::ZeroTruncation);
    }
    let expansion = construct_bk(k)?.expand_in(mode, trunc.max(2) - 1)?;
    let combined = expansion.combined()?;
    combined.truncated(trunc.min(combined.trunc()))
}

/// One row of the divisor table: a class of divisors of 360 sharing a
/// rescaled cusp value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BkTableRow {
    pub divisors: Vec<u64>,
    pub l_value: Ratio<i64>,
}

/// The conventional rescale carrying a cusp order at 1/d on Γ₀(360) to the
/// divisor-table normalization: positive for every d, so signs agree.
fn bk_rescale(d: u64) -> Ratio<i64> {
    let n = 360i64;
    let d = d as i64;
    let co = gcd_u64(d as u64, (n / d) as u64) as i64;
    let g60 = gcd_u64(d as u64, 60) as i64;
    Ratio::new(24 * co * d * 60, n * g60 * g60)
}

/// The four-row divisor table for the level-360 family: every divisor's
/// rescaled cusp value, grouped into the classes that share one value.
/// Errors if the family ever failed to be row-constant (it cannot).
pub fn bk_table(k: u32) -> Result<Vec<BkTableRow>> {
    const ROWS: [&[u64]; 4] = [
        &[1, 2, 3, 6, 9, 18],
        &[4, 8, 12, 24, 36, 72],
        &[5, 10, 15, 30, 45, 90],
        &[20, 40, 60, 120, 180, 360],
    ];
    let f = construct_bk(k)?;
    let mut out = Vec::with_capacity(4);
    for row in ROWS {
        let mut value: Option<Ratio<i64>> = None;
        for &d in row {
            let l = f.cusp_order(&CuspClass { d, c: 1 })? * bk_rescale(d);
            match value {
                None => value = Some(l),
                Some(v) if v == l => {}
                Some(v) => {
                    return Err(Error::InvalidArgument(format!(
                        "divisor table row not constant: d = {d} gives {l}, row holds {v}"
                    )))
                }
            }
        }
        out.push(BkTableRow {
            divisors: row.to_vec(),
            l_value: value.expect("rows are nonempty"),
        });
    }
    Ok(out)
}

/// One checkpoint of a residue-density report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub x: usize,
    /// #{ n < x : a(n) ≡ r (mod M) }
    pub count: usize,
    /// count / x, exact.
    pub density: Ratio<i64>,
}

/// Exact densities δ_r(F, M; X) of a coefficient stream at chosen cutoffs X,
/// counting indices in [0, X). Report-only: densities carry no pass/fail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub modulus: u64,
    pub residue: u64,
    pub points: Vec<DensityPoint>,
}

fn residue_stream(series: &TruncatedSeries, modulus: u64, upto: usize) -> Result<Vec<u64>> {
    match series.residues() {
        Some(values) => {
            let m = series.modulus().expect("modular");
            if !m.is_multiple_of(modulus) {
                return Err(Error::ModulusMismatch(m, modulus));
            }
            Ok(values[..upto].iter().map(|&v| v % modulus).collect())
        }
        None => {
            let m = BigInt::from(modulus);
            (0..upto)
                .map(|n| {
                    Ok(series
                        .coeff(n)?
                        .mod_floor(&m)
                        .to_u64()
                        .expect("residue fits"))
                })
                .collect()
        }
    }
}

/// Computes δ_r(series, modulus; X) at each checkpoint X (each ≤ trunc).
pub fn density(
    series: &TruncatedSeries,
    modulus: u64,
    residue: u64,
    checkpoints: &[usize],
) -> Result<DensityReport> {
    if modulus < 2 {
        return Err(Error::ModulusTooSmall(modulus));
    }
    if residue >= modulus {
        return Err(Error::InvalidArgument(format!(
            "residue {residue} must lie below modulus {modulus}"
        )));
    }
    let mut xs: Vec<usize> = checkpoints.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if xs.is_empty() || xs[0] == 0 {
        return Err(Error::InvalidArgument(
            "checkpoints must be positive".into(),
        ));
    }
    let max_x = *xs.last().expect("nonempty");
    if max_x > series.trunc() {
        return Err(Error::InsufficientTruncation {
            need: max_x,
            have: series.trunc(),
        });
    }
    let stream = residue_stream(series, modulus, max_x)?;
    let mut points = Vec::with_capacity(xs.len());
    let mut count = 0usize;
    let mut cursor = 0usize;
    for &x in &xs {
        while cursor < x {
            if stream[cursor] == residue {
                count += 1;
            }
            cursor += 1;
        }
        points.push(DensityPoint {
            x,
            count,
            density: Ratio::new(count as i64, x as i64),
        });
    }
    Ok(DensityReport {
        modulus,
        residue,
        points,
    })
}

impl DensityReport {
    /// Re-derives every checkpoint count from the raw residue stream and
    /// checks it against the stored value.
    pub fn recount(&self, series: &TruncatedSeries) -> Result<bool> {
        let max_x = match self.points.last() {
            Some(p) => p.x,
            None => return Ok(true),
        };
        if max_x > series.trunc() {
            return Err(Error::InsufficientTruncation {
                need: max_x,
                have: series.trunc(),
            });
        }
        let stream = residue_stream(series, self.modulus, max_x)?;
        for p in &self.points {
            let fresh = stream[..p.x].iter().filter(|&&v| v == self.residue).count();
            if fresh != p.count || p.density != Ratio::new(fresh as i64, p.x as i64) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn bk_exponents_and_weight() {
        let b1 = construct_bk(1).unwrap();
        assert_eq!(b1.level(), 360);
        assert_eq!(b1.terms(), &[(6, -3), (12, 26), (30, 3), (60, -6)]);
        assert_eq!(b1.weight(), Ratio::from_integer(10));
        assert_eq!(construct_bk(2).unwrap().weight(), Ratio::from_integer(50));
        assert!(construct_bk(0).is_err());
    }

    #[test]
    fn bk_admissibility_sums() {
        for k in 1..=6u32 {
            let adm = construct_bk(k).unwrap().admissibility();
            assert_eq!(adm.delta_sum, 24, "k = {k}");
            assert_eq!(adm.conjugate_sum, 144 * 5i64.pow(k) - 120, "k = {k}");
            assert!(adm.admissible);
            assert_eq!(adm.weight, Ratio::from_integer(2 * 5i64.pow(k)));
        }
    }

    #[test]
    fn single_eta_factor_is_inadmissible() {
        let eta = EtaQuotient::new(1, &[(1, 1)]).unwrap();
        let adm = eta.admissibility();
        assert_eq!(adm.delta_sum, 1);
        assert!(!adm.admissible);
        assert_eq!(adm.weight, Ratio::new(1, 2));
    }

    #[test]
    fn quotient_validation() {
        assert_eq!(
            EtaQuotient::new(360, &[(7, 1)]),
            Err(Error::EtaDeltaNotDivisor {
                delta: 7,
                level: 360
            })
        );
        // merged-away exponents leave nothing
        assert_eq!(
            EtaQuotient::new(12, &[(6, 2), (6, -2)]),
            Err(Error::EmptyEtaQuotient)
        );
        let merged = EtaQuotient::new(12, &[(6, 2), (6, 1), (12, 1)]).unwrap();
        assert_eq!(merged.terms(), &[(6, 3), (12, 1)]);
    }

    #[test]
    fn cusp_order_at_level_is_order_at_infinity() {
        for quotient in [
            construct_bk(1).unwrap(),
            EtaQuotient::new(360, &[(12, 5), (60, -1)]).unwrap(),
            EtaQuotient::new(40, &[(2, 3), (8, -1), (40, 2)]).unwrap(),
        ] {
            let at_top = quotient
                .cusp_order(&CuspClass::at(quotient.level()).unwrap())
                .unwrap();
            let delta_sum: i64 = quotient.terms().iter().map(|&(d, r)| d as i64 * r).sum();
            assert_eq!(at_top, Ratio::new(delta_sum, 24));
        }
    }

    #[test]
    fn b1_cusp_orders_at_extremes() {
        let b1 = construct_bk(1).unwrap();
        assert_eq!(
            b1.cusp_order(&CuspClass::at(1).unwrap()).unwrap(),
            Ratio::from_integer(25)
        );
        assert_eq!(
            b1.cusp_order(&CuspClass::at(360).unwrap()).unwrap(),
            Ratio::from_integer(1)
        );
        assert!(b1.cusp_order(&CuspClass { d: 7, c: 1 }).is_err());
    }

    #[test]
    fn bk_table_closed_forms() {
        for k in 1..=6u32 {
            let table = bk_table(k).unwrap();
            let p5k = 5i64.pow(k);
            assert_eq!(table[0].l_value, Ratio::from_integer(24 * p5k - 20));
            assert_eq!(table[1].l_value, Ratio::from_integer(24 * p5k - 2));
            assert_eq!(
                table[2].l_value,
                Ratio::new(5i64.pow(k + 2) + 5, 25) - p5k + Ratio::new(19, 5)
            );
            assert_eq!(
                table[3].l_value,
                Ratio::new(5i64.pow(k + 2) + 5, 25) - p5k + Ratio::new(1, 5)
            );
            for row in &table {
                assert!(!row.l_value.is_negative(), "k = {k}");
            }
        }
    }

    #[test]
    fn bk_table_signs_agree_with_raw_orders() {
        let b1 = construct_bk(1).unwrap();
        for row in bk_table(1).unwrap() {
            for d in row.divisors {
                let order = b1.cusp_order(&CuspClass::at(d).unwrap()).unwrap();
                assert_eq!(order.is_positive(), row.l_value.is_positive(), "d = {d}");
                assert_eq!(order.is_zero(), row.l_value.is_zero(), "d = {d}");
            }
        }
    }

    #[test]
    fn bk_family_is_holomorphic_but_bare_denominator_is_not() {
        assert!(construct_bk(1).unwrap().holomorphy().holomorphic);
        let broken = EtaQuotient::new(360, &[(6, -3)]).unwrap();
        let profile = broken.holomorphy();
        assert!(!profile.holomorphic);
        assert!(profile.cusp_orders.iter().any(|(_, o)| o.is_negative()));
    }

    #[test]
    fn character_square_classes() {
        for k in 1..=3u32 {
            let chi = construct_bk(k).unwrap().character().unwrap();
            assert!(!chi.negative, "k = {k}: even weight");
            assert_eq!(chi.square_class, 5, "k = {k}");
        }
        // weight-2 quotient: square class of 12^5/60 is also 5
        let a = EtaQuotient::new(360, &[(12, 5), (60, -1)]).unwrap();
        let chi = a.character().unwrap();
        assert_eq!(chi.top(), 5);
        assert_eq!(chi.chi(1), 1);
        // agreement with factor-multiplicative evaluation at odd d coprime
        // to the level
        for d in [7i64, 11, 13] {
            let direct = kronecker(12, d).pow(5) * kronecker(60, d);
            assert_eq!(chi.chi(d), direct, "d = {d}");
        }
        // half-integral weight has no quadratic character here
        assert!(EtaQuotient::new(1, &[(1, 1)]).unwrap().character().is_err());
    }

    #[test]
    fn odd_weight_flips_character_sign() {
        // η(z)² at level 1: weight 1, (-1)^1 · 1² → -1
        let f = EtaQuotient::new(1, &[(1, 2)]).unwrap();
        let chi = f.character().unwrap();
        assert!(chi.negative);
        assert_eq!(chi.square_class, 1);
        assert_eq!(chi.top(), -1);
    }

    #[test]
    fn bk_prefactor_is_one_and_bridge_holds_mod_25() {
        let e = construct_bk(1)
            .unwrap()
            .expand_in(CoeffMode::Exact, 300)
            .unwrap();
        assert_eq!(e.prefactor, Ratio::from_integer(1));
        let b1 = bk_series_in(1, CoeffMode::Modular(25), 301).unwrap();
        let counts = oracle::bprime_counts_mod(5, 5 * 50 + 2, 25).unwrap();
        for n in 0..301 {
            let r = b1.residue(n).unwrap();
            if n % 6 == 1 {
                assert_eq!(r, counts[5 * (n / 6) + 1], "exponent {n}");
            } else {
                assert_eq!(r, 0, "exponent {n} should vanish mod 25");
            }
        }
    }

    #[test]
    fn density_of_zero_series_is_one() {
        let z = TruncatedSeries::zero_in(CoeffMode::Exact, 50).unwrap();
        let rep = density(&z, 7, 0, &[10, 50]).unwrap();
        assert_eq!(rep.points[0].density, Ratio::from_integer(1));
        assert_eq!(rep.points[1].density, Ratio::from_integer(1));
        assert!(rep.recount(&z).unwrap());
    }

    #[test]
    fn density_counts_and_recounts() {
        let s = TruncatedSeries::from_i64(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9], 10).unwrap();
        let rep = density(&s, 3, 0, &[5, 10]).unwrap();
        assert_eq!(rep.points[0].count, 2); // 0, 3
        assert_eq!(rep.points[1].count, 4); // 0, 3, 6, 9
        assert_eq!(rep.points[1].density, Ratio::new(2, 5));
        assert!(rep.recount(&s).unwrap());
        // modular stream with an incompatible target modulus
        let m = s.reduce_mod(4).unwrap();
        assert_eq!(density(&m, 3, 0, &[5]), Err(Error::ModulusMismatch(4, 3)));
        let ok = density(&m, 2, 1, &[10]).unwrap();
        assert_eq!(ok.points[0].count, 5);
        // checkpoint beyond the known prefix is a hard error
        assert_eq!(
            density(&s, 3, 0, &[11]),
            Err(Error::InsufficientTruncation { need: 11, have: 10 })
        );
    }
}
