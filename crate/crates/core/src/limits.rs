//! Stratum constants and finite-degree estimates of the Siegel-Veech
//! constant `c = lim M/N`, the Lyapunov sum `L = κ + c` and the slope
//! `s = 12c/L`, together with the embedded reference table of limiting
//! slopes for genus 3 to 6.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{enumerate, Census, CensusError, EnumerateOptions};
use crate::orbits::{component_slope, decompose, ComponentLabel, OrbitError};
use crate::origami::StratumSignature;
use crate::rational::Rational;

/// Version of the embedded reference table.
pub const APPENDIX_B_VERSION: u32 = 1;
pub const APPENDIX_B_GENERA: std::ops::RangeInclusive<usize> = 3..=6;

const APPENDIX_B_CSV: &str = include_str!("../assets/appendix_b.csv");

#[derive(Debug, thiserror::Error)]
pub enum LimitsError {
    #[error("genus {0} is below 2")]
    GenusTooSmall(usize),
    #[error("genus {0} is outside table range 3..=6")]
    OutsideTable(usize),
    #[error("slope must be below 12, got {0}")]
    SlopeTooLarge(Rational),
    #[error("Lyapunov sum must be positive, got {0}")]
    NonPositiveL(Rational),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Orbits(#[from] OrbitError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `κ = (2g − 2 + Σ m/(m+1)) / 12`.
pub fn kappa(mu: &StratumSignature) -> Rational {
    let g = mu.genus() as i64;
    let sum: Rational = mu
        .mu()
        .iter()
        .map(|&m| Rational::new(m as i64, m as i64 + 1))
        .sum();
    (Rational::from_integer(2 * g - 2) + sum) / Rational::from_integer(12)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperellipticShape {
    /// `μ = (2g − 2)`.
    SingleZero,
    /// `μ = (g − 1, g − 1)`.
    TwoZeros,
}

impl HyperellipticShape {
    pub fn of(mu: &StratumSignature) -> Option<Self> {
        if mu.is_single_zero() {
            Some(HyperellipticShape::SingleZero)
        } else if mu.is_double_zero() {
            Some(HyperellipticShape::TwoZeros)
        } else {
            None
        }
    }

    pub fn stratum(self, g: usize) -> StratumSignature {
        let mu = match self {
            HyperellipticShape::SingleZero => vec![2 * g - 2],
            HyperellipticShape::TwoZeros => vec![g - 1, g - 1],
        };
        StratumSignature::new(mu).expect("g >= 2")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperellipticConstants {
    pub c: Rational,
    pub l: Rational,
    pub s: Rational,
}

/// Exact `c`, `L` and `s` of the hyperelliptic component in genus `g`.
pub fn hyperelliptic_constants(
    g: usize,
    shape: HyperellipticShape,
) -> Result<HyperellipticConstants, LimitsError> {
    if g < 2 {
        return Err(LimitsError::GenusTooSmall(g));
    }
    let g = g as i64;
    let (c, l) = match shape {
        HyperellipticShape::SingleZero => (
            Rational::new(g * (2 * g + 1), 3 * (2 * g - 1)),
            Rational::new(g * g, 2 * g - 1),
        ),
        HyperellipticShape::TwoZeros => (
            Rational::new((g + 1) * (2 * g + 1), 6 * g),
            Rational::new(g + 1, 2),
        ),
    };
    let s = s_from_c_l(&c, &l)?;
    assert_eq!(s, Rational::from_integer(8) + Rational::new(4, g));
    Ok(HyperellipticConstants { c, l, s })
}

/// `s = 12c/L`.
pub fn s_from_c_l(c: &Rational, l: &Rational) -> Result<Rational, LimitsError> {
    if !l.is_positive() {
        return Err(LimitsError::NonPositiveL(l.clone()));
    }
    Ok(Rational::from_integer(12) * c / l)
}

/// `L = 12κ/(12 − s)`.
pub fn l_from_s_kappa(s: &Rational, kappa: &Rational) -> Result<Rational, LimitsError> {
    let twelve = Rational::from_integer(12);
    if *s >= twelve {
        return Err(LimitsError::SlopeTooLarge(s.clone()));
    }
    let l = &twelve * kappa / (&twelve - s);
    if !l.is_positive() {
        return Err(LimitsError::NonPositiveL(l));
    }
    Ok(l)
}

/// `c = L − κ`.
pub fn c_from_l_kappa(l: &Rational, kappa: &Rational) -> Rational {
    l - kappa
}

/// One row of the embedded reference table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceRow {
    pub genus: usize,
    pub stratum: StratumSignature,
    pub label: ComponentLabel,
    pub s: Rational,
}

#[derive(Deserialize)]
struct RawRow {
    genus: usize,
    mu: String,
    label: String,
    s_num: i64,
    s_den: i64,
}

fn parse_label(s: &str) -> Option<ComponentLabel> {
    Some(match s {
        "hyp" => ComponentLabel::Hyp,
        "odd" => ComponentLabel::Odd,
        "even" => ComponentLabel::Even,
        "nonhyp" => ComponentLabel::Nonhyp,
        "" => ComponentLabel::Whole,
        _ => return None,
    })
}

fn parse_reference(text: &str) -> Result<Vec<ReferenceRow>, String> {
    let mut out = Vec::new();
    for (i, row) in csv::Reader::from_reader(text.as_bytes())
        .deserialize::<RawRow>()
        .enumerate()
    {
        let raw = row.map_err(|e| format!("row {}: {e}", i + 1))?;
        let stratum: StratumSignature =
            raw.mu.parse().map_err(|e| format!("row {}: {e}", i + 1))?;
        if stratum.genus() != raw.genus {
            return Err(format!(
                "row {}: {} is not in genus {}",
                i + 1,
                stratum,
                raw.genus
            ));
        }
        let label = parse_label(&raw.label)
            .ok_or_else(|| format!("row {}: label {:?}", i + 1, raw.label))?;
        if raw.s_den <= 0 {
            return Err(format!("row {}: denominator {}", i + 1, raw.s_den));
        }
        out.push(ReferenceRow {
            genus: raw.genus,
            stratum,
            label,
            s: Rational::new(raw.s_num, raw.s_den),
        });
    }
    Ok(out)
}

/// All reference rows, in table order.
pub fn reference_table() -> &'static [ReferenceRow] {
    static TABLE: OnceLock<Vec<ReferenceRow>> = OnceLock::new();
    TABLE.get_or_init(|| parse_reference(APPENDIX_B_CSV).expect("embedded table is well formed"))
}

pub fn reference_rows(g: usize) -> Result<Vec<&'static ReferenceRow>, LimitsError> {
    if !APPENDIX_B_GENERA.contains(&g) {
        return Err(LimitsError::OutsideTable(g));
    }
    Ok(reference_table().iter().filter(|r| r.genus == g).collect())
}

/// Exact constants known for a stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumConstants {
    pub mu: StratumSignature,
    pub kappa: Rational,
    /// Present for `(2g−2)` and `(g−1, g−1)`: the hyperelliptic component.
    pub hyperelliptic: Option<HyperellipticConstants>,
    pub reference: Vec<(ComponentLabel, Rational)>,
}

pub fn stratum_constants(mu: &StratumSignature) -> StratumConstants {
    let hyperelliptic = HyperellipticShape::of(mu)
        .and_then(|shape| hyperelliptic_constants(mu.genus(), shape).ok());
    StratumConstants {
        mu: mu.clone(),
        kappa: kappa(mu),
        hyperelliptic,
        reference: reference_table()
            .iter()
            .filter(|r| &r.stratum == mu)
            .map(|r| (r.label, r.s.clone()))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    WholeStratum,
    HyperellipticOnly,
    PerComponentClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub d: usize,
    pub scope: Scope,
    pub label: ComponentLabel,
    pub n: usize,
    pub m: Rational,
    pub ratio_mn: Rational,
    pub slope: Rational,
}

impl SweepRow {
    fn new(
        d: usize,
        scope: Scope,
        label: ComponentLabel,
        n: usize,
        m: Rational,
        mu: &StratumSignature,
    ) -> Result<Self, LimitsError> {
        let slope = component_slope(n, &m, mu)?;
        Ok(SweepRow {
            d,
            scope,
            label,
            n,
            ratio_mn: &m / &Rational::from_integer(n as i64),
            m,
            slope,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub at_degree: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub stratum: StratumSignature,
    pub scope: Scope,
    pub rows: Vec<SweepRow>,
    pub truncated: Option<Truncation>,
}

/// Rows for one census under `scope`.
pub fn rows_for(c: &Census, scope: Scope) -> Result<Vec<SweepRow>, LimitsError> {
    if c.is_empty() {
        return Ok(Vec::new());
    }
    let mu = c.stratum();
    let d = c.degree();
    match scope {
        Scope::WholeStratum => Ok(vec![SweepRow::new(
            d,
            scope,
            ComponentLabel::Whole,
            c.n(),
            c.m().clone(),
            mu,
        )?]),
        Scope::HyperellipticOnly => {
            let hyp: Vec<Rational> = c
                .members()
                .par_iter()
                .filter(|(_, o)| o.in_hyperelliptic_component())
                .map(|(_, o)| o.weight().clone())
                .collect();
            if hyp.is_empty() {
                return Ok(Vec::new());
            }
            let n = hyp.len();
            Ok(vec![SweepRow::new(
                d,
                scope,
                ComponentLabel::Hyp,
                n,
                hyp.into_iter().sum(),
                mu,
            )?])
        }
        Scope::PerComponentClass => {
            let mut classes: BTreeMap<ComponentLabel, (usize, Rational)> = BTreeMap::new();
            for comp in decompose(c)? {
                let e = classes
                    .entry(comp.label)
                    .or_insert_with(|| (0, Rational::zero()));
                e.0 += comp.n;
                e.1 = &e.1 + &comp.m;
            }
            classes
                .into_iter()
                .map(|(label, (n, m))| SweepRow::new(d, scope, label, n, m, mu))
                .collect()
        }
    }
}

/// Sweep over `d = 1..=d_max` with censuses from `census_for`. A resource
/// budget failure stops the sweep and marks the report truncated.
pub fn sweep_with<F>(
    mu: &StratumSignature,
    d_max: usize,
    scope: Scope,
    mut census_for: F,
) -> Result<SweepReport, LimitsError>
where
    F: FnMut(usize) -> Result<Census, CensusError>,
{
    let mut rows = Vec::new();
    let mut truncated = None;
    for d in mu.min_degree()..=d_max {
        match census_for(d) {
            Ok(c) => rows.extend(rows_for(&c, scope)?),
            Err(e @ CensusError::ResourceBudget { .. }) => {
                truncated = Some(Truncation {
                    at_degree: d,
                    reason: e.to_string(),
                });
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(SweepReport {
        stratum: mu.clone(),
        scope,
        rows,
        truncated,
    })
}

pub fn sweep(
    mu: &StratumSignature,
    d_max: usize,
    scope: Scope,
    opts: &EnumerateOptions,
) -> Result<SweepReport, LimitsError> {
    sweep_with(mu, d_max, scope, |d| enumerate(d, mu, opts))
}

/// One reference row joined with what was computed for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub reference: ReferenceRow,
    /// `8 + 4/g` for hyperelliptic rows.
    pub exact_s: Option<Rational>,
    pub exact_matches: Option<bool>,
    /// Row of the largest degree computed for this stratum and label.
    pub estimate: Option<SweepRow>,
}

impl ComparisonRow {
    /// `estimate − reference`, approximate.
    pub fn deviation(&self) -> Option<f64> {
        self.estimate
            .as_ref()
            .map(|e| (&e.slope - &self.reference.s).to_f64())
    }
}

fn row_matches(label: ComponentLabel, row: &SweepRow) -> bool {
    match label {
        ComponentLabel::Whole => row.scope == Scope::WholeStratum,
        other => row.scope != Scope::WholeStratum && row.label == other,
    }
}

/// Joins the genus-`g` reference rows with the exact hyperelliptic slopes and
/// the largest-degree estimates found in `sweeps`. No judgment is made on the
/// size of the deviations.
pub fn compare_appendix_b(
    g: usize,
    sweeps: &[SweepReport],
) -> Result<Vec<ComparisonRow>, LimitsError> {
    let refs = reference_rows(g)?;
    Ok(refs
        .into_iter()
        .map(|r| {
            let exact_s = (r.label == ComponentLabel::Hyp)
                .then(|| Rational::from_integer(8) + Rational::new(4, g as i64));
            let estimate = sweeps
                .iter()
                .filter(|s| s.stratum == r.stratum)
                .flat_map(|s| s.rows.iter())
                .filter(|row| row_matches(r.label, row))
                .max_by_key(|row| row.d)
                .cloned();
            ComparisonRow {
                exact_matches: exact_s.as_ref().map(|s| *s == r.s),
                exact_s,
                estimate,
                reference: r.clone(),
            }
        })
        .collect())
}

/// CSV with columns `stratum, component_label, d, N, M_num, M_den,
/// slope_num, slope_den`.
pub fn write_sweep_csv<W: Write>(reports: &[SweepReport], w: W) -> Result<(), LimitsError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "stratum",
        "component_label",
        "d",
        "N",
        "M_num",
        "M_den",
        "slope_num",
        "slope_den",
    ])?;
    for rep in reports {
        for r in &rep.rows {
            out.write_record([
                rep.stratum.to_string(),
                r.label.as_str().to_string(),
                r.d.to_string(),
                r.n.to_string(),
                r.m.numer().to_string(),
                r.m.denom().to_string(),
                r.slope.numer().to_string(),
                r.slope.denom().to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn sweep_json(rep: &SweepReport) -> serde_json::Value {
    serde_json::json!({
        "stratum": rep.stratum.to_string(),
        "mu": rep.stratum.mu(),
        "scope": rep.scope,
        "kappa": kappa(&rep.stratum).to_fraction_string(),
        "rows": rep.rows.iter().map(|r| serde_json::json!({
            "d": r.d,
            "component_label": r.label.as_str(),
            "n": r.n,
            "m": r.m.to_fraction_string(),
            "ratio_mn": r.ratio_mn.to_fraction_string(),
            "slope": r.slope.to_fraction_string(),
        })).collect::<Vec<_>>(),
        "truncated": rep.truncated.as_ref().map(|t| serde_json::json!({
            "at_degree": t.at_degree,
            "reason": t.reason,
        })),
    })
}

pub fn comparison_json(rows: &[ComparisonRow]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|c| {
                serde_json::json!({
                    "genus": c.reference.genus,
                    "stratum": c.reference.stratum.to_string(),
                    "component_label": c.reference.label.as_str(),
                    "reference_s": c.reference.s.to_fraction_string(),
                    "exact_s": c.exact_s.as_ref().map(Rational::to_fraction_string),
                    "exact_matches": c.exact_matches,
                    "estimate_d": c.estimate.as_ref().map(|e| e.d),
                    "estimate_s": c.estimate.as_ref().map(|e| e.slope.to_fraction_string()),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(s: &str) -> StratumSignature {
        s.parse().unwrap()
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(&mu("4")), Rational::new(2, 5));
        assert_eq!(kappa(&mu("2")), Rational::new(2, 9));
        assert_eq!(kappa(&mu("1,1")), Rational::new(1, 4));
    }

    #[test]
    fn hyperelliptic_identities() {
        let h = hyperelliptic_constants(2, HyperellipticShape::SingleZero).unwrap();
        assert_eq!(
            (h.c.clone(), h.l.clone(), h.s),
            (
                Rational::new(10, 9),
                Rational::new(4, 3),
                Rational::from_integer(10)
            )
        );
        assert_eq!(
            hyperelliptic_constants(3, HyperellipticShape::SingleZero)
                .unwrap()
                .s,
            Rational::new(28, 3)
        );
        let h = hyperelliptic_constants(5, HyperellipticShape::TwoZeros).unwrap();
        assert_eq!(h.l, Rational::from_integer(3));
        assert_eq!(h.s, Rational::new(44, 5));
        for g in 2..=12 {
            for shape in [HyperellipticShape::SingleZero, HyperellipticShape::TwoZeros] {
                let h = hyperelliptic_constants(g, shape).unwrap();
                let k = kappa(&shape.stratum(g));
                assert_eq!(h.l, &k + &h.c);
                assert_eq!(
                    h.s,
                    Rational::from_integer(12) - Rational::from_integer(12) * &k / &h.l
                );
                assert_eq!(l_from_s_kappa(&h.s, &k).unwrap(), h.l);
            }
        }
        assert!(matches!(
            hyperelliptic_constants(1, HyperellipticShape::SingleZero),
            Err(LimitsError::GenusTooSmall(1))
        ));
    }

    #[test]
    fn inversion() {
        let l = l_from_s_kappa(&Rational::from_integer(9), &Rational::new(2, 5)).unwrap();
        assert_eq!(l, Rational::new(8, 5));
        assert_eq!(
            c_from_l_kappa(&l, &Rational::new(2, 5)),
            Rational::new(6, 5)
        );
        assert_eq!(
            s_from_c_l(&Rational::new(10, 9), &Rational::new(4, 3)).unwrap(),
            Rational::from_integer(10)
        );
        assert!(l_from_s_kappa(&Rational::zero(), &Rational::zero()).is_err());
        assert!(l_from_s_kappa(&Rational::from_integer(12), &Rational::one()).is_err());
        assert!(s_from_c_l(&Rational::one(), &Rational::zero()).is_err());
    }

    #[test]
    fn table_parses() {
        let t = reference_table();
        assert!(t.len() > 80);
        let g3: Vec<String> = reference_rows(3)
            .unwrap()
            .iter()
            .map(|r| r.s.to_string())
            .collect();
        assert_eq!(g3, ["28/3", "9", "28/3", "44/5", "9", "98/11", "468/53"]);
        assert!(matches!(
            reference_rows(9),
            Err(LimitsError::OutsideTable(9))
        ));
        for r in t.iter().filter(|r| r.label == ComponentLabel::Hyp) {
            assert_eq!(
                r.s,
                Rational::from_integer(8) + Rational::new(4, r.genus as i64),
                "{}",
                r.stratum
            );
        }
    }

    #[test]
    fn bad_table_rows_are_rejected() {
        assert!(parse_reference("genus,mu,label,s_num,s_den\n3,\"4\",hyp,28,0\n").is_err());
        assert!(parse_reference("genus,mu,label,s_num,s_den\n4,\"4\",hyp,28,3\n").is_err());
        assert!(parse_reference("genus,mu,label,s_num,s_den\n3,\"4\",weird,28,3\n").is_err());
    }

    #[test]
    fn genus_two_sweep() {
        let opts = EnumerateOptions::default();
        let rep = sweep(&mu("2"), 6, Scope::WholeStratum, &opts).unwrap();
        assert_eq!(rep.rows.first().unwrap().d, 3);
        for r in &rep.rows {
            assert_eq!(r.ratio_mn, Rational::new(10, 9));
            assert_eq!(r.slope, Rational::from_integer(10));
        }
        assert!(rep.truncated.is_none());
    }

    #[test]
    fn sweep_scopes_at_degree_five() {
        let opts = EnumerateOptions::default();
        let hyp = sweep(&mu("4"), 5, Scope::HyperellipticOnly, &opts).unwrap();
        assert_eq!(hyp.rows.len(), 1);
        assert_eq!(hyp.rows[0].slope, Rational::new(28, 3));
        let classes = sweep(&mu("4"), 5, Scope::PerComponentClass, &opts).unwrap();
        let odd = classes
            .rows
            .iter()
            .find(|r| r.label == ComponentLabel::Odd)
            .unwrap();
        assert_eq!(odd.slope, Rational::from_integer(9));
        let whole = sweep(&mu("4"), 5, Scope::WholeStratum, &opts).unwrap();
        let n: usize = classes.rows.iter().map(|r| r.n).sum();
        let m: Rational = classes.rows.iter().map(|r| r.m.clone()).sum();
        assert_eq!((n, m), (whole.rows[0].n, whole.rows[0].m.clone()));
    }

    #[test]
    fn budget_truncates() {
        let opts = EnumerateOptions {
            budget: Some(3),
            ..EnumerateOptions::default()
        };
        let rep = sweep(&mu("2"), 6, Scope::WholeStratum, &opts).unwrap();
        let t = rep.truncated.unwrap();
        assert!(rep.rows.iter().all(|r| r.d < t.at_degree));
    }

    #[test]
    fn comparison_joins() {
        let opts = EnumerateOptions::default();
        let sweeps = vec![
            sweep(&mu("4"), 5, Scope::PerComponentClass, &opts).unwrap(),
            sweep(&mu("3,1"), 6, Scope::WholeStratum, &opts).unwrap(),
        ];
        let rows = compare_appendix_b(3, &sweeps).unwrap();
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[0].exact_matches, Some(true));
        assert_eq!(
            rows[0].estimate.as_ref().unwrap().slope,
            Rational::new(28, 3)
        );
        assert_eq!(
            rows[1].estimate.as_ref().unwrap().slope,
            Rational::from_integer(9)
        );
        assert!(rows[4].estimate.is_some());
        assert!(rows[6].estimate.is_none());
        assert!(compare_appendix_b(7, &sweeps).is_err());
    }
}
