//! Command implementations and the run-manifest format behind the `qcong`
//! binary.
//!
//! Every subcommand is an ordinary function returning a [`RunManifest`] (or,
//! for `expand`, an [`ExpandOutput`]), so behavior is testable without
//! spawning a process. The binary in `main.rs` only parses flags, applies the
//! `QCONG_MAX_TRUNC` environment cap, renders text or JSON, and maps outcomes
//! to exit codes: 0 when every gated check passes, 1 when any fails, 2 when
//! the run could not produce a verdict (usage, parse, or resource errors).

#![forbid(unsafe_code)]

use std::collections::BTreeMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use qcong_core::congruence::{verify_ap, verify_parity_characterization, ApAssertion};
use qcong_core::eta::{bk_table, construct_bk, density, DensityReport, EtaQuotient};
use qcong_core::expr;
use qcong_core::oracle::{bprime_counts, bprime_series_in};
use qcong_core::registry::verify_identity;
use qcong_core::{CoeffMode, Entry, Error, Registry, Result, Source, Status, VerificationReport};

/// Overall verdict of a run: `pass` iff every gated result passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Pass,
    Fail,
}

/// One result inside a manifest: either a gated check or an informational
/// density report (which never fails a run).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ManifestResult {
    Verification(VerificationReport),
    Density(DensityReport),
}

impl ManifestResult {
    /// Density reports are informational and always count as passed.
    pub fn passed(&self) -> bool {
        match self {
            ManifestResult::Verification(r) => r.passed(),
            ManifestResult::Density(_) => true,
        }
    }

    /// Stable key used to order results inside a manifest.
    pub fn sort_id(&self) -> String {
        match self {
            ManifestResult::Verification(r) => r.id.clone(),
            ManifestResult::Density(d) => format!("density-m{}-r{}", d.modulus, d.residue),
        }
    }
}

/// Machine-readable record of one CLI run. Serializes to JSON and parses
/// back to an equal value, so manifests can be archived and diffed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand that produced the manifest.
    pub command: String,
    /// Flags and derived settings of the run, as plain strings.
    pub parameters: BTreeMap<String, String>,
    /// Individual results, sorted by [`ManifestResult::sort_id`].
    pub results: Vec<ManifestResult>,
    pub overall: Overall,
    /// Unix seconds at manifest creation.
    pub timestamp: u64,
    /// Version of this tool.
    pub version: String,
}

impl RunManifest {
    /// Sorts the results by id, derives the overall verdict, and stamps
    /// time and tool version.
    pub fn new(
        command: &str,
        parameters: BTreeMap<String, String>,
        mut results: Vec<ManifestResult>,
    ) -> Self {
        results.sort_by_key(ManifestResult::sort_id);
        let overall = if results.iter().all(ManifestResult::passed) {
            Overall::Pass
        } else {
            Overall::Fail
        };
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: command.to_string(),
            parameters,
            results,
            overall,
            timestamp,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == Overall::Pass
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Registry(format!("manifest: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Registry(format!("manifest: {e}")))
    }
}

/// Output of the `expand` subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandOutput {
    /// Canonical rendering of the parsed expression.
    pub expr: String,
    /// Number of coefficients produced.
    pub trunc: usize,
    /// Modulus the coefficients were reduced by, if any.
    pub modulus: Option<u64>,
    /// a(0), a(1), … as decimal strings.
    pub coefficients: Vec<String>,
}

fn mode_for(modulus: Option<u64>) -> CoeffMode {
    match modulus {
        Some(m) => CoeffMode::Modular(m),
        None => CoeffMode::Exact,
    }
}

/// Parses `spec`, expands it to `trunc` coefficients (exactly, or mod
/// `modulus` when given), and returns them as strings.
pub fn cmd_expand(spec: &str, trunc: usize, modulus: Option<u64>) -> Result<ExpandOutput> {
    let parsed = expr::parse(spec)?;
    let series = parsed.eval_in(mode_for(modulus), trunc)?;
    let coefficients = match series.residues() {
        Some(values) => values.iter().map(u64::to_string).collect(),
        None => (0..series.trunc())
            .map(|n| series.coeff(n).map(|c| c.to_string()))
            .collect::<Result<_>>()?,
    };
    Ok(ExpandOutput {
        expr: parsed.to_string(),
        trunc: series.trunc(),
        modulus,
        coefficients,
    })
}

/// Checks every registry entry whose id matches `filter` (a `*`/`?` glob).
///
/// Two-sided identities are compared to `trunc` coefficients, exactly or mod
/// `modulus_override`. Progression entries carry their own bound, modulus,
/// and source; the series route expands the distinct-part stream far enough
/// to reach the last scanned index. `registry_json` overrides the built-in
/// registry when given.
pub fn cmd_verify(
    registry_json: Option<&str>,
    filter: &str,
    trunc: usize,
    modulus_override: Option<u64>,
) -> Result<RunManifest> {
    let registry = match registry_json {
        Some(text) => Registry::from_json(text)?,
        None => Registry::builtin()?,
    };
    let selected = registry.matching(filter);
    if selected.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no registry entry matches filter {filter:?}"
        )));
    }
    let mut results = Vec::with_capacity(selected.len());
    for entry in selected {
        let report = match entry {
            Entry::Identity { id, .. } => verify_identity(&registry, id, trunc, modulus_override)?,
            Entry::ApCongruence { id, .. } => {
                let a = ApAssertion::from_entry(entry)?;
                let series = match a.source {
                    Source::Oracle => None,
                    _ => Some(bprime_series_in(
                        5,
                        CoeffMode::Modular(a.modulus),
                        a.needed_order()?,
                    )?),
                };
                verify_ap(id, &a, series.as_ref())?
            }
        };
        results.push(ManifestResult::Verification(report));
    }
    let mut parameters = BTreeMap::new();
    parameters.insert(
        "registry".into(),
        if registry_json.is_some() {
            "file".into()
        } else {
            "builtin".into()
        },
    );
    parameters.insert("filter".into(), filter.to_string());
    parameters.insert("trunc".into(), trunc.to_string());
    if let Some(m) = modulus_override {
        parameters.insert("mod".into(), m.to_string());
    }
    Ok(RunManifest::new("verify", parameters, results))
}

fn source_name(source: Source) -> &'static str {
    match source {
        Source::Series => "series",
        Source::Oracle => "oracle",
        Source::Both => "both",
    }
}

/// Checks a single progression claim: the coefficient of q^(m·n + r) in the
/// distinct-part stream is `residue` mod `modulus` for every n below `bound`.
pub fn cmd_congruence(
    m: usize,
    r: usize,
    modulus: u64,
    residue: u64,
    bound: usize,
    source: Source,
) -> Result<RunManifest> {
    let a = ApAssertion {
        m,
        r,
        modulus,
        residue,
        bound,
        source,
    };
    let series = match source {
        Source::Oracle => None,
        _ => Some(bprime_series_in(
            5,
            CoeffMode::Modular(modulus),
            a.needed_order()?,
        )?),
    };
    let id = format!("{m}n+{r} mod {modulus}");
    let report = verify_ap(&id, &a, series.as_ref())?;
    let mut parameters = BTreeMap::new();
    parameters.insert("m".into(), m.to_string());
    parameters.insert("r".into(), r.to_string());
    parameters.insert("mod".into(), modulus.to_string());
    parameters.insert("residue".into(), residue.to_string());
    parameters.insert("bound".into(), bound.to_string());
    parameters.insert("source".into(), source_name(source).into());
    Ok(RunManifest::new(
        "congruence",
        parameters,
        vec![ManifestResult::Verification(report)],
    ))
}

/// Checks the odd-index parity pattern of the distinct-part stream for every
/// n below `bound`: the coefficient at q^(2n+1) is odd exactly when
/// n = 15k² − 5k for some integer k.
pub fn cmd_parity(bound: usize) -> Result<RunManifest> {
    let report = verify_parity_characterization(bound, None)?;
    let mut parameters = BTreeMap::new();
    parameters.insert("bound".into(), bound.to_string());
    Ok(RunManifest::new(
        "parity",
        parameters,
        vec![ManifestResult::Verification(report)],
    ))
}

/// Reports the density of coefficients ≡ `residue` (mod `modulus`) in the
/// stream of `spec`, at each cutoff in `checkpoints`. The densities are
/// informational; the gated result is an independent recount of every stored
/// checkpoint from the raw residue stream.
pub fn cmd_density(
    spec: &str,
    modulus: u64,
    residue: u64,
    checkpoints: &[usize],
) -> Result<RunManifest> {
    let max_x = *checkpoints
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidArgument("at least one checkpoint is required".into()))?;
    let parsed = expr::parse(spec)?;
    let series = parsed.eval_in(CoeffMode::Modular(modulus), max_x)?;
    let report = density(&series, modulus, residue, checkpoints)?;
    let start = Instant::now();
    let consistent = report.recount(&series)?;
    let recount = VerificationReport {
        id: "recount".into(),
        order_checked: max_x,
        status: if consistent {
            Status::Pass
        } else {
            Status::Fail {
                exponent: 0,
                lhs: "stored checkpoint counts".into(),
                rhs: "recount from the residue stream".into(),
            }
        },
        elapsed: start.elapsed(),
    };
    let mut parameters = BTreeMap::new();
    parameters.insert("expr".into(), parsed.to_string());
    parameters.insert("mod".into(), modulus.to_string());
    parameters.insert("residue".into(), residue.to_string());
    parameters.insert(
        "checkpoints".into(),
        checkpoints
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    Ok(RunManifest::new(
        "density",
        parameters,
        vec![
            ManifestResult::Density(report),
            ManifestResult::Verification(recount),
        ],
    ))
}

/// What `eta-check` profiles: a member of the built-in 5-power family, or an
/// explicit quotient Π η(δz)^{r_δ} on Γ₀(level).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EtaTarget {
    Power(u32),
    Quotient { level: u64, terms: Vec<(u64, i64)> },
}

/// Parses a quotient spec of comma-separated `delta:exponent` pairs, for
/// example `1:-1,2:3,18:-2`.
pub fn parse_quotient(spec: &str) -> Result<Vec<(u64, i64)>> {
    let mut terms = Vec::new();
    for piece in spec.split(',') {
        let piece = piece.trim();
        let (d, r) = piece.split_once(':').ok_or_else(|| {
            Error::InvalidArgument(format!(
                "quotient term {piece:?} is not of the form delta:exponent"
            ))
        })?;
        let delta: u64 = d.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("quotient term {piece:?}: bad divisor {d:?}"))
        })?;
        let exponent: i64 = r.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("quotient term {piece:?}: bad exponent {r:?}"))
        })?;
        terms.push((delta, exponent));
    }
    Ok(terms)
}

/// The four divisor rows of the 5-power family's vanishing-order table, with
/// their closed-form values at family index k.
fn expected_rows(five_k: i64) -> [(Vec<u64>, Ratio<i64>); 4] {
    [
        (
            vec![1, 2, 3, 6, 9, 18],
            Ratio::from_integer(24 * five_k - 20),
        ),
        (
            vec![4, 8, 12, 24, 36, 72],
            Ratio::from_integer(24 * five_k - 2),
        ),
        (vec![5, 10, 15, 30, 45, 90], Ratio::from_integer(4)),
        (vec![20, 40, 60, 120, 180, 360], Ratio::new(2, 5)),
    ]
}

fn note_mismatch(status: &mut Status, index: usize, got: String, want: String) {
    if *status == Status::Pass {
        *status = Status::Fail {
            exponent: index,
            lhs: got,
            rhs: want,
        };
    }
}

fn insert_profile_parameters(
    parameters: &mut BTreeMap<String, String>,
    quotient: &EtaQuotient,
) -> Result<()> {
    let profile = quotient.holomorphy();
    parameters.insert("level".into(), profile.level.to_string());
    parameters.insert("weight".into(), profile.weight.to_string());
    parameters.insert(
        "delta-sum".into(),
        profile.admissibility.delta_sum.to_string(),
    );
    parameters.insert(
        "conjugate-sum".into(),
        profile.admissibility.conjugate_sum.to_string(),
    );
    parameters.insert(
        "admissible".into(),
        profile.admissibility.admissible.to_string(),
    );
    parameters.insert("holomorphic".into(), profile.holomorphic.to_string());
    if let Some(c) = &profile.character {
        parameters.insert("character-top".into(), c.top().to_string());
    }
    let width = profile
        .cusp_orders
        .iter()
        .map(|(d, _)| d.to_string().len())
        .max()
        .unwrap_or(1);
    for (d, order) in &profile.cusp_orders {
        parameters.insert(format!("order-at-1/{d:0width$}"), order.to_string());
    }
    parameters.insert(
        "quotient".into(),
        quotient
            .terms()
            .iter()
            .map(|(d, r)| format!("{d}:{r}"))
            .collect::<Vec<_>>()
            .join(","),
    );
    Ok(())
}

/// Profiles an eta quotient: weight, admissibility sums, character, and the
/// order at every cusp class.
///
/// For [`EtaTarget::Power`] the profile is additionally gated against the
/// family's closed forms — weight 2·5^k, divisor-sum 24, conjugate-sum
/// 144·5^k − 120, character square class 5, holomorphy, and the four
/// divisor-table rows. For an explicit quotient the gate is admissibility
/// plus holomorphy.
pub fn cmd_eta_check(target: &EtaTarget) -> Result<RunManifest> {
    let start = Instant::now();
    let mut parameters = BTreeMap::new();
    let report = match target {
        EtaTarget::Power(k) => {
            let quotient = construct_bk(*k)?;
            let profile = quotient.holomorphy();
            let five_k = 5i64
                .checked_pow(*k)
                .ok_or(Error::Overflow("power of five"))?;
            let mut status = Status::Pass;
            if !profile.admissibility.admissible {
                note_mismatch(&mut status, 0, "inadmissible".into(), "admissible".into());
            }
            if profile.admissibility.delta_sum != 24 {
                note_mismatch(
                    &mut status,
                    0,
                    format!("divisor sum {}", profile.admissibility.delta_sum),
                    "divisor sum 24".into(),
                );
            }
            let want_conjugate = 144 * five_k - 120;
            if profile.admissibility.conjugate_sum != want_conjugate {
                note_mismatch(
                    &mut status,
                    0,
                    format!("conjugate sum {}", profile.admissibility.conjugate_sum),
                    format!("conjugate sum {want_conjugate}"),
                );
            }
            if profile.weight != Ratio::from_integer(2 * five_k) {
                note_mismatch(
                    &mut status,
                    0,
                    format!("weight {}", profile.weight),
                    format!("weight {}", 2 * five_k),
                );
            }
            let character = quotient.character()?;
            if character.square_class != 5 {
                note_mismatch(
                    &mut status,
                    0,
                    format!("character square class {}", character.square_class),
                    "character square class 5".into(),
                );
            }
            if !profile.holomorphic {
                note_mismatch(
                    &mut status,
                    0,
                    "negative cusp order".into(),
                    "holomorphic".into(),
                );
            }
            let rows = bk_table(*k)?;
            let expected = expected_rows(five_k);
            if rows.len() != expected.len() {
                note_mismatch(
                    &mut status,
                    0,
                    format!("{} divisor rows", rows.len()),
                    format!("{} divisor rows", expected.len()),
                );
            }
            for (i, (row, (divisors, value))) in rows.iter().zip(&expected).enumerate() {
                if &row.divisors != divisors {
                    note_mismatch(
                        &mut status,
                        i,
                        format!("row divisors {:?}", row.divisors),
                        format!("row divisors {divisors:?}"),
                    );
                }
                if &row.l_value != value || row.l_value < Ratio::from_integer(0) {
                    note_mismatch(
                        &mut status,
                        i,
                        format!("row value {}", row.l_value),
                        format!("row value {value} (nonnegative)"),
                    );
                }
            }
            parameters.insert("k".into(), k.to_string());
            insert_profile_parameters(&mut parameters, &quotient)?;
            for (i, row) in rows.iter().enumerate() {
                parameters.insert(
                    format!("row-{i}-divisors"),
                    row.divisors
                        .iter()
                        .map(u64::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                );
                parameters.insert(format!("row-{i}-value"), row.l_value.to_string());
            }
            VerificationReport {
                id: format!("bk-{k}"),
                order_checked: profile.cusp_orders.len(),
                status,
                elapsed: start.elapsed(),
            }
        }
        EtaTarget::Quotient { level, terms } => {
            let quotient = EtaQuotient::new(*level, terms)?;
            let profile = quotient.holomorphy();
            let mut status = Status::Pass;
            if !profile.admissibility.admissible {
                note_mismatch(&mut status, 0, "inadmissible".into(), "admissible".into());
            }
            if !profile.holomorphic {
                note_mismatch(
                    &mut status,
                    0,
                    "negative cusp order".into(),
                    "holomorphic".into(),
                );
            }
            insert_profile_parameters(&mut parameters, &quotient)?;
            VerificationReport {
                id: "eta-quotient".into(),
                order_checked: profile.cusp_orders.len(),
                status,
                elapsed: start.elapsed(),
            }
        }
    };
    Ok(RunManifest::new(
        "eta-check",
        parameters,
        vec![ManifestResult::Verification(report)],
    ))
}

/// Expands the generating function of partitions into distinct parts with no
/// part divisible by `ell`, and compares every coefficient below `bound`
/// against direct enumeration of those partitions.
pub fn cmd_oracle_compare(ell: u64, bound: usize) -> Result<RunManifest> {
    let start = Instant::now();
    let series = bprime_series_in(ell, CoeffMode::Exact, bound)?;
    let counted = bprime_counts(ell, bound)?;
    let mut status = Status::Pass;
    for (n, want) in counted.iter().enumerate().take(bound) {
        let from_series = series.coeff(n)?;
        if &from_series != want {
            status = Status::Fail {
                exponent: n,
                lhs: from_series.to_string(),
                rhs: want.to_string(),
            };
            break;
        }
    }
    let report = VerificationReport {
        id: format!("oracle-l{ell}"),
        order_checked: bound,
        status,
        elapsed: start.elapsed(),
    };
    let mut parameters = BTreeMap::new();
    parameters.insert("ell".into(), ell.to_string());
    parameters.insert("bound".into(), bound.to_string());
    Ok(RunManifest::new(
        "oracle-compare",
        parameters,
        vec![ManifestResult::Verification(report)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    const GF: &str = "(q2;q2)(q5;q5)/((q;q)(q10;q10))";

    fn report(id: &str, pass: bool) -> ManifestResult {
        ManifestResult::Verification(VerificationReport {
            id: id.into(),
            order_checked: 1,
            status: if pass {
                Status::Pass
            } else {
                Status::Fail {
                    exponent: 0,
                    lhs: "0".into(),
                    rhs: "1".into(),
                }
            },
            elapsed: Duration::from_millis(1),
        })
    }

    #[test]
    fn expand_yields_the_frozen_prefix() {
        let out = cmd_expand(GF, 19, None).unwrap();
        let want = [
            1, 1, 1, 2, 2, 2, 3, 4, 4, 6, 7, 8, 10, 12, 14, 16, 19, 22, 26,
        ];
        let got: Vec<String> = want.iter().map(|v: &i32| v.to_string()).collect();
        assert_eq!(out.coefficients, got);
        assert_eq!(out.trunc, 19);
        assert_eq!(out.modulus, None);
    }

    #[test]
    fn expand_reduces_modulo_when_asked() {
        let out = cmd_expand("(q;q)", 8, Some(2)).unwrap();
        assert_eq!(out.coefficients, ["1", "1", "1", "0", "0", "1", "0", "1"]);
        assert_eq!(out.modulus, Some(2));
    }

    #[test]
    fn manifest_round_trips_through_json() {
        let m = cmd_congruence(20, 7, 4, 0, 10, Source::Oracle).unwrap();
        assert!(m.passed());
        let again = RunManifest::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn results_are_sorted_and_gate_the_overall_verdict() {
        let m = RunManifest::new(
            "verify",
            BTreeMap::new(),
            vec![report("zeta", true), report("alpha", true)],
        );
        let ids: Vec<String> = m.results.iter().map(ManifestResult::sort_id).collect();
        assert_eq!(ids, ["alpha", "zeta"]);
        assert_eq!(m.overall, Overall::Pass);

        let failing = RunManifest::new(
            "verify",
            BTreeMap::new(),
            vec![report("a", true), report("b", false)],
        );
        assert_eq!(failing.overall, Overall::Fail);
        assert!(!failing.passed());
    }

    #[test]
    fn verify_runs_a_single_identity() {
        let m = cmd_verify(None, "exact1", 80, None).unwrap();
        assert!(m.passed());
        assert_eq!(m.results.len(), 1);
        match &m.results[0] {
            ManifestResult::Verification(r) => {
                assert_eq!(r.id, "exact1");
                assert_eq!(r.order_checked, 80);
            }
            other => panic!("unexpected result {other:?}"),
        }
    }

    #[test]
    fn verify_rejects_a_filter_with_no_matches() {
        let err = cmd_verify(None, "no-such-entry-*", 10, None).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)), "{err:?}");
    }

    #[test]
    fn congruence_reports_the_first_bad_index() {
        let m = cmd_congruence(1, 0, 4, 3, 5, Source::Oracle).unwrap();
        assert!(!m.passed());
        match &m.results[0] {
            ManifestResult::Verification(r) => match &r.status {
                Status::Fail { exponent, lhs, rhs } => {
                    assert_eq!(*exponent, 0);
                    assert_eq!(lhs, "1");
                    assert_eq!(rhs, "3");
                }
                Status::Pass => panic!("expected a failure"),
            },
            other => panic!("unexpected result {other:?}"),
        }
    }

    #[test]
    fn density_is_informational_and_recount_gates() {
        let m = cmd_density(GF, 2, 0, &[50, 100]).unwrap();
        assert!(m.passed());
        assert_eq!(m.results.len(), 2);
        match &m.results[0] {
            ManifestResult::Density(d) => {
                assert_eq!(d.points.len(), 2);
                assert_eq!(d.points[1].x, 100);
            }
            other => panic!("expected the density report first, got {other:?}"),
        }
        match &m.results[1] {
            ManifestResult::Verification(r) => assert_eq!(r.id, "recount"),
            other => panic!("expected the recount second, got {other:?}"),
        }
    }

    #[test]
    fn eta_check_gates_the_family_profile() {
        let m = cmd_eta_check(&EtaTarget::Power(1)).unwrap();
        assert!(m.passed());
        assert_eq!(m.parameters["delta-sum"], "24");
        assert_eq!(m.parameters["weight"], "10");
        assert_eq!(m.parameters["row-3-value"], "2/5");
    }

    #[test]
    fn eta_check_fails_a_meromorphic_quotient() {
        let m = cmd_eta_check(&EtaTarget::Quotient {
            level: 1,
            terms: vec![(1, -24)],
        })
        .unwrap();
        assert!(!m.passed());
        assert_eq!(m.parameters["admissible"], "true");
        assert_eq!(m.parameters["holomorphic"], "false");
    }

    #[test]
    fn quotient_specs_parse_and_reject_garbage() {
        assert_eq!(
            parse_quotient("1:-1, 2:3,18:-2").unwrap(),
            vec![(1, -1), (2, 3), (18, -2)]
        );
        assert!(parse_quotient("1").is_err());
        assert!(parse_quotient("x:2").is_err());
        assert!(parse_quotient("2:y").is_err());
    }

    #[test]
    fn oracle_compare_agrees_for_small_streams() {
        for ell in [2, 3, 5, 7] {
            let m = cmd_oracle_compare(ell, 60).unwrap();
            assert!(m.passed(), "ell = {ell}");
        }
    }
}
