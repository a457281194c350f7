//! Factories for classical q-products.
//!
//! Everything here expands to a [`TruncatedSeries`] in a caller-chosen
//! coefficient mode: infinite Pochhammer products (q^a; q^b)∞, theta
//! products f(-q^a, -q^b), the Rogers-Ramanujan continued-fraction quotient
//! R(q), general product/quotient combinations, and eta-quotient expansions
//! carrying a fractional q-power prefactor.
//!
//! Two independent routes are provided where a classical identity connects
//! them — the pentagonal-number expansion vs. the telescoped product for
//! (q^b; q^b)∞, and the Jacobi-triple-product form vs. the bilateral series
//! for theta — so each can serve as an oracle for the other in tests.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{CoeffMode, TruncatedSeries};

fn sign_at(series: &mut [i64], e: usize, negative: bool) {
    series[e] += if negative { -1 } else { 1 };
}

/// Euler's expansion of (q^b; q^b)∞ as a sparse signed sum over generalized
/// pentagonal numbers b·k(3k±1)/2.
fn pentagonal_scaled(mode: CoeffMode, b: usize, trunc: usize) -> Result<TruncatedSeries> {
    let mut v = vec![0i64; trunc];
    sign_at(&mut v, 0, false);
    let mut k: usize = 1;
    loop {
        let e1 = b * (k * (3 * k - 1) / 2);
        if e1 >= trunc {
            break;
        }
        let negative = k % 2 == 1;
        sign_at(&mut v, e1, negative);
        let e2 = b * (k * (3 * k + 1) / 2);
        if e2 < trunc {
            sign_at(&mut v, e2, negative);
        }
        k += 1;
    }
    let exact = TruncatedSeries::from_i64(&v, trunc)?;
    match mode {
        CoeffMode::Exact => Ok(exact),
        CoeffMode::Modular(m) => exact.reduce_mod(m),
    }
}

/// (q^a; q^b)∞ by telescoping the factors (1 - q^{a+jb}) into a dense
/// accumulator; O(trunc²/b) but straight-line and allocation-free per factor.
pub fn pochhammer_product_in(
    mode: CoeffMode,
    a: usize,
    b: usize,
    trunc: usize,
) -> Result<TruncatedSeries> {
    if a == 0 || b == 0 {
        return Err(Error::BadPochhammer { a, b });
    }
    if trunc == 0 {
        return Err(Error::ZeroTruncation);
    }
    match mode {
        CoeffMode::Exact => {
            let mut v = vec![BigInt::zero(); trunc];
            v[0] = BigInt::from(1);
            let mut e = a;
            while e < trunc {
                // multiply by (1 - q^e) in place; descend so v[i-e] is stale
                for i in (e..trunc).rev() {
                    let d = v[i - e].clone();
                    v[i] -= d;
                }
                e += b;
            }
            TruncatedSeries::from_coeffs(v, trunc)
        }
        CoeffMode::Modular(m) => {
            let one = TruncatedSeries::one_in(mode, trunc)?;
            let mut v: Vec<u64> = one.residues().expect("modular").to_vec();
            let mut e = a;
            while e < trunc {
                for i in (e..trunc).rev() {
                    v[i] = (v[i] + m - v[i - e]) % m;
                }
                e += b;
            }
            TruncatedSeries::from_residues(v, trunc, m)
        }
    }
}

/// (q^a; q^b)∞. Uses the sparse pentagonal route when a == b, the dense
/// telescoped product otherwise.
pub fn pochhammer_in(mode: CoeffMode, a: usize, b: usize, trunc: usize) -> Result<TruncatedSeries> {
    if a == 0 || b == 0 {
        return Err(Error::BadPochhammer { a, b });
    }
    if trunc == 0 {
        return Err(Error::ZeroTruncation);
    }
    if a == b {
        pentagonal_scaled(mode, b, trunc)
    } else {
        pochhammer_product_in(mode, a, b, trunc)
    }
}

/// Exact-mode (q^a; q^b)∞.
pub fn pochhammer(a: usize, b: usize, trunc: usize) -> Result<TruncatedSeries> {
    pochhammer_in(CoeffMode::Exact, a, b, trunc)
}

/// Theta product f(-q^a, -q^b) = (q^a; q^{a+b})(q^b; q^{a+b})(q^{a+b}; q^{a+b}),
/// the Jacobi-triple-product form.
pub fn theta_f_in(mode: CoeffMode, a: usize, b: usize, trunc: usize) -> Result<TruncatedSeries> {
    if a == 0 || b == 0 {
        return Err(Error::BadTheta { a, b });
    }
    let s = a + b;
    let p1 = pochhammer_in(mode, a, s, trunc)?;
    let p2 = pochhammer_in(mode, b, s, trunc)?;
    let p3 = pochhammer_in(mode, s, s, trunc)?;
    p1.mul(&p2)?.mul(&p3)
}

/// Exact-mode theta product.
pub fn theta_f(a: usize, b: usize, trunc: usize) -> Result<TruncatedSeries> {
    theta_f_in(CoeffMode::Exact, a, b, trunc)
}

/// The bilateral series Σ_{k∈ℤ} (-1)^k q^{a·k(k+1)/2 + b·k(k-1)/2}, equal to
/// f(-q^a, -q^b) by the triple product identity. Kept as an independent
/// oracle for [`theta_f_in`].
pub fn theta_bilateral_in(
    mode: CoeffMode,
    a: usize,
    b: usize,
    trunc: usize,
) -> Result<TruncatedSeries> {
    if a == 0 || b == 0 {
        return Err(Error::BadTheta { a, b });
    }
    if trunc == 0 {
        return Err(Error::ZeroTruncation);
    }
    let exp = |k: i64| -> Option<usize> {
        let tri1 = k.checked_mul(k + 1)? / 2;
        let tri2 = k.checked_mul(k - 1)? / 2;
        let e = (a as i64)
            .checked_mul(tri1)?
            .checked_add((b as i64).checked_mul(tri2)?)?;
        usize::try_from(e).ok()
    };
    let mut v = vec![0i64; trunc];
    let mut k: i64 = 0;
    loop {
        let ep = exp(k).filter(|&e| e < trunc);
        let en = exp(-k).filter(|&e| e < trunc);
        if k > 0 && ep.is_none() && en.is_none() {
            break;
        }
        let negative = k % 2 == 1;
        if let Some(e) = ep {
            sign_at(&mut v, e, negative);
        }
        if k > 0 {
            if let Some(e) = en {
                sign_at(&mut v, e, negative);
            }
        }
        k += 1;
    }
    let exact = TruncatedSeries::from_i64(&v, trunc)?;
    match mode {
        CoeffMode::Exact => Ok(exact),
        CoeffMode::Modular(m) => exact.reduce_mod(m),
    }
}

/// The Rogers-Ramanujan quotient R(q) = (q; q⁵)(q⁴; q⁵) / ((q²; q⁵)(q³; q⁵)).
pub fn rr_quotient_in(mode: CoeffMode, trunc: usize) -> Result<TruncatedSeries> {
    QProduct::new()
        .factor(1, 5, 1)
        .factor(4, 5, 1)
        .factor(2, 5, -1)
        .factor(3, 5, -1)
        .expand_in(mode, trunc)
}

/// Exact-mode R(q).
pub fn rr_quotient(trunc: usize) -> Result<TruncatedSeries> {
    rr_quotient_in(CoeffMode::Exact, trunc)
}

/// A formal product Π (q^{a_i}; q^{b_i})∞^{e_i} with integer exponents.
///
/// Expansion multiplies each positive-power factor in and divides each
/// negative-power factor out, one Pochhammer at a time. Every factor is
/// sparse (O(√trunc) or O(trunc/b) nonzero terms), and both multiply and
/// divide cost O(trunc · nnz(factor)), so a fixed product expands in
/// near-linear time even at million-coefficient truncations — no dense
/// intermediate is ever inverted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QProduct {
    factors: Vec<(usize, usize, i64)>,
}

impl QProduct {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends (q^a; q^b)∞^e (builder style). e == 0 is dropped.
    pub fn factor(mut self, a: usize, b: usize, e: i64) -> Self {
        if e != 0 {
            self.factors.push((a, b, e));
        }
        self
    }

    pub fn factors(&self) -> &[(usize, usize, i64)] {
        &self.factors
    }

    pub fn expand_in(&self, mode: CoeffMode, trunc: usize) -> Result<TruncatedSeries> {
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        let mut acc = TruncatedSeries::one_in(mode, trunc)?;
        for &(a, b, e) in &self.factors {
            let base = pochhammer_in(mode, a, b, trunc)?;
            // small powers: repeated sparse multiply/divide stays near-linear;
            // big powers: squaring wins despite densifying
            if e.unsigned_abs() <= 32 {
                for _ in 0..e.unsigned_abs() {
                    acc = if e > 0 {
                        acc.mul(&base)?
                    } else {
                        acc.div(&base)?
                    };
                }
            } else {
                let p = base.pow(e.abs())?;
                acc = if e > 0 { acc.mul(&p)? } else { acc.div(&p)? };
            }
        }
        Ok(acc)
    }

    pub fn expand(&self, trunc: usize) -> Result<TruncatedSeries> {
        self.expand_in(CoeffMode::Exact, trunc)
    }
}

/// An eta-quotient expansion: q^prefactor · series, where the prefactor is
/// Σ δ·r_δ / 24 (often fractional) and the series is Π (q^δ; q^δ)∞^{r_δ}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaExpansion {
    pub prefactor: Ratio<i64>,
    pub series: TruncatedSeries,
}

impl EtaExpansion {
    /// Folds the prefactor into the series as a literal power of q. Errors
    /// when the prefactor is fractional or negative, since the result would
    /// not be a power series in q.
    pub fn combined(&self) -> Result<TruncatedSeries> {
        if !self.prefactor.is_integer() {
            return Err(Error::FractionalPrefactor(self.prefactor.to_string()));
        }
        if *self.prefactor.numer() < 0 {
            return Err(Error::NegativePrefactor(self.prefactor.to_string()));
        }
        let e =
            usize::try_from(*self.prefactor.numer()).map_err(|_| Error::Overflow("prefactor"))?;
        self.series.shift_up(e)
    }
}

/// Expands Π_δ η(δz)^{r_δ} with q = e^{2πiz}. Terms are (δ, r_δ) pairs;
/// δ = 0 and an empty list are rejected.
pub fn expand_eta_quotient_in(
    terms: &[(u64, i64)],
    mode: CoeffMode,
    trunc: usize,
) -> Result<EtaExpansion> {
    if terms.is_empty() {
        return Err(Error::EmptyEtaQuotient);
    }
    let mut num = 0i64;
    let mut product = QProduct::new();
    for &(delta, r) in terms {
        let d = usize::try_from(delta).map_err(|_| Error::Overflow("eta delta"))?;
        if d == 0 {
            return Err(Error::BadPochhammer { a: 0, b: 0 });
        }
        num = num
            .checked_add(
                (d as i64)
                    .checked_mul(r)
                    .ok_or(Error::Overflow("eta prefactor"))?,
            )
            .ok_or(Error::Overflow("eta prefactor"))?;
        product = product.factor(d, d, r);
    }
    Ok(EtaExpansion {
        prefactor: Ratio::new(num, 24),
        series: product.expand_in(mode, trunc)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{agrees, compare};

    fn exact(coeffs: &[i64], trunc: usize) -> TruncatedSeries {
        TruncatedSeries::from_i64(coeffs, trunc).unwrap()
    }

    #[test]
    fn pentagonal_prefix() {
        let f1 = pochhammer(1, 1, 8).unwrap();
        assert_eq!(f1, exact(&[1, -1, -1, 0, 0, 1, 0, 1], 8));
    }

    #[test]
    fn sparse_and_dense_pochhammer_agree() {
        for b in [1usize, 2, 3, 5, 10] {
            let sparse = pochhammer_in(CoeffMode::Exact, b, b, 60).unwrap();
            let dense = pochhammer_product_in(CoeffMode::Exact, b, b, 60).unwrap();
            assert_eq!(sparse, dense, "b = {b}");
        }
    }

    #[test]
    fn dense_pochhammer_prefixes() {
        assert_eq!(
            pochhammer(2, 5, 14).unwrap(),
            exact(&[1, 0, -1, 0, 0, 0, 0, -1, 0, 1, 0, 0, -1, 0], 14)
        );
        assert_eq!(
            pochhammer(3, 7, 16).unwrap(),
            exact(&[1, 0, 0, -1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0, 0], 16)
        );
    }

    #[test]
    fn pochhammer_rejects_zero_steps() {
        assert_eq!(
            pochhammer(0, 5, 10),
            Err(Error::BadPochhammer { a: 0, b: 5 })
        );
        assert_eq!(
            pochhammer(3, 0, 10),
            Err(Error::BadPochhammer { a: 3, b: 0 })
        );
    }

    #[test]
    fn modular_pochhammer_matches_reduced_exact() {
        for (a, b) in [(1usize, 1usize), (2, 5), (7, 10)] {
            let e = pochhammer(a, b, 50).unwrap().reduce_mod(4).unwrap();
            let m = pochhammer_in(CoeffMode::Modular(4), a, b, 50).unwrap();
            assert_eq!(e, m, "(q^{a}; q^{b})");
        }
    }

    #[test]
    fn theta_product_prefixes() {
        assert_eq!(
            theta_f(2, 3, 16).unwrap(),
            exact(&[1, 0, -1, -1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0], 16)
        );
        assert_eq!(
            theta_f(1, 1, 16).unwrap(),
            exact(&[1, -2, 0, 0, 2, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0], 16)
        );
    }

    #[test]
    fn theta_triple_product_matches_bilateral_sum() {
        for (a, b) in [(1usize, 1usize), (1, 2), (2, 3), (3, 4), (5, 7)] {
            let prod = theta_f(a, b, 48).unwrap();
            let sum = theta_bilateral_in(CoeffMode::Exact, a, b, 48).unwrap();
            assert_eq!(prod, sum, "f(-q^{a}, -q^{b})");
        }
    }

    #[test]
    fn theta_1_2_is_the_pentagonal_series() {
        let t = theta_f(1, 2, 40).unwrap();
        let f1 = pochhammer(1, 1, 40).unwrap();
        assert!(agrees(&t, &f1).unwrap());
    }

    #[test]
    fn theta_rejects_zero_arguments() {
        assert_eq!(theta_f(0, 2, 10), Err(Error::BadTheta { a: 0, b: 2 }));
        assert_eq!(
            theta_bilateral_in(CoeffMode::Exact, 1, 0, 10),
            Err(Error::BadTheta { a: 1, b: 0 })
        );
    }

    #[test]
    fn rogers_ramanujan_quotient_prefix() {
        assert_eq!(
            rr_quotient(16).unwrap(),
            exact(&[1, -1, 1, 0, -1, 1, -1, 1, 0, -1, 2, -3, 2, 0, -2, 4], 16)
        );
    }

    #[test]
    fn qproduct_single_inversion_equals_factorwise() {
        // (q²;q²)(q⁵;q⁵) / ((q;q)(q¹⁰;q¹⁰)) both ways
        let qp = QProduct::new()
            .factor(2, 2, 1)
            .factor(5, 5, 1)
            .factor(1, 1, -1)
            .factor(10, 10, -1)
            .expand(19)
            .unwrap();
        let expect = [
            1, 1, 1, 2, 2, 2, 3, 4, 4, 6, 7, 8, 10, 12, 14, 16, 19, 22, 26,
        ];
        assert_eq!(qp, exact(&expect, 19));
        let manual = pochhammer(2, 2, 19)
            .unwrap()
            .mul(&pochhammer(5, 5, 19).unwrap())
            .unwrap()
            .mul(&pochhammer(1, 1, 19).unwrap().invert().unwrap())
            .unwrap()
            .mul(&pochhammer(10, 10, 19).unwrap().invert().unwrap())
            .unwrap();
        assert_eq!(qp, manual);
    }

    #[test]
    fn qproduct_powers() {
        let cubed = QProduct::new().factor(1, 1, 3).expand(16).unwrap();
        assert_eq!(
            cubed,
            exact(&[1, -3, 0, 5, 0, 0, -7, 0, 0, 0, 9, 0, 0, 0, 0, -11], 16)
        );
        let inv_sq = QProduct::new().factor(1, 1, -2).expand(8).unwrap();
        let direct = pochhammer(1, 1, 8).unwrap().pow(-2).unwrap();
        assert_eq!(inv_sq, direct);
    }

    #[test]
    fn eta_quotient_prefactor_arithmetic() {
        // Σ δ·r / 24 = (6·(-3) + 12·26 + 30·3 + 60·(-6)) / 24 = 1
        let e = expand_eta_quotient_in(
            &[(6, -3), (12, 26), (30, 3), (60, -6)],
            CoeffMode::Exact,
            20,
        )
        .unwrap();
        assert_eq!(e.prefactor, Ratio::from_integer(1));
        let expect = [
            1, 0, 0, 0, 0, 0, 3, 0, 0, 0, 0, 0, -17, 0, 0, 0, 0, 0, -56, 0,
        ];
        assert_eq!(e.series, exact(&expect, 20));
        let c = e.combined().unwrap();
        assert_eq!(c.coeff(0).unwrap(), num_bigint::BigInt::from(0));
        assert_eq!(c.coeff(1).unwrap(), num_bigint::BigInt::from(1));
        assert_eq!(c.coeff(7).unwrap(), num_bigint::BigInt::from(3));
    }

    #[test]
    fn eta_quotient_rejects_unusable_prefactors() {
        let frac = expand_eta_quotient_in(&[(1, 1)], CoeffMode::Exact, 8).unwrap();
        assert_eq!(frac.prefactor, Ratio::new(1, 24));
        assert!(matches!(
            frac.combined(),
            Err(Error::FractionalPrefactor(_))
        ));
        let neg = expand_eta_quotient_in(&[(1, -24)], CoeffMode::Exact, 8).unwrap();
        assert_eq!(neg.prefactor, Ratio::from_integer(-1));
        assert!(matches!(neg.combined(), Err(Error::NegativePrefactor(_))));
        assert_eq!(
            expand_eta_quotient_in(&[], CoeffMode::Exact, 8),
            Err(Error::EmptyEtaQuotient)
        );
    }

    #[test]
    fn modular_qproduct_matches_reduced_exact() {
        let qp = QProduct::new()
            .factor(2, 2, 1)
            .factor(5, 5, 1)
            .factor(1, 1, -1)
            .factor(10, 10, -1);
        let e = qp.expand(80).unwrap().reduce_mod(4).unwrap();
        let m = qp.expand_in(CoeffMode::Modular(4), 80).unwrap();
        let c = compare(&e, &m).unwrap();
        assert!(c.agree(), "mismatch: {:?}", c.mismatch);
    }
}
