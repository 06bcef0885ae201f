//! SL(2,Z) orbits on a census. The twists `h_α: (α, β) ↦ (α, αβ)` and
//! `h_β: (α, β) ↦ (βα, β)` generate the action; each orbit is one
//! Teichmüller curve, and cusps are the `⟨h_α⟩`-orbits inside it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::census::Census;
use crate::limits::kappa;
use crate::origami::{CanonicalKey, Origami, StratumSignature};
use crate::perm::CycleType;
use crate::rational::Rational;
use crate::spin::spin_parity;
use crate::unionfind::UnionFind;

/// How cusps are grouped; printed in every report.
pub const CUSP_CONVENTION: &str =
    "cusps are orbits of the horizontal twist h_alpha inside a component";

#[derive(Debug, thiserror::Error)]
pub enum OrbitError {
    #[error("the census is empty")]
    EmptyCensus,
    #[error("internal consistency: the image of {0} under {1} is not in the census")]
    LeftCensus(CanonicalKey, &'static str),
    #[error("internal consistency: {what} is not constant on component {component}")]
    NotConstant {
        what: &'static str,
        component: usize,
    },
    #[error("slope undefined: M is zero")]
    UndefinedSlope,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `(α, αβ)`.
pub fn act_h_alpha(o: &Origami) -> Origami {
    let beta = o.alpha().compose(o.beta()).expect("equal degrees");
    twisted(o, o.alpha().clone(), beta)
}

/// `(βα, β)`.
pub fn act_h_beta(o: &Origami) -> Origami {
    let alpha = o.beta().compose(o.alpha()).expect("equal degrees");
    twisted(o, alpha, o.beta().clone())
}

/// `(α, α⁻¹β)`.
pub fn act_h_alpha_inv(o: &Origami) -> Origami {
    let beta = o
        .alpha()
        .inverse()
        .compose(o.beta())
        .expect("equal degrees");
    twisted(o, o.alpha().clone(), beta)
}

/// `(β⁻¹α, β)`.
pub fn act_h_beta_inv(o: &Origami) -> Origami {
    let alpha = o
        .beta()
        .inverse()
        .compose(o.alpha())
        .expect("equal degrees");
    twisted(o, alpha, o.beta().clone())
}

fn twisted(
    o: &Origami,
    alpha: crate::perm::Permutation,
    beta: crate::perm::Permutation,
) -> Origami {
    let t = Origami::new(alpha, beta).expect("twists preserve transitivity and genus");
    assert_eq!(
        t.commutator_type(),
        o.commutator_type(),
        "twist changed the commutator class"
    );
    t
}

/// Component label in the usual stratum notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentLabel {
    Hyp,
    Even,
    Odd,
    Nonhyp,
    /// The stratum has no component structure to record.
    Whole,
}

impl ComponentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentLabel::Hyp => "hyp",
            ComponentLabel::Even => "even",
            ComponentLabel::Odd => "odd",
            ComponentLabel::Nonhyp => "nonhyp",
            ComponentLabel::Whole => "",
        }
    }

    pub fn of(stratum: &StratumSignature, hyperelliptic: bool, parity: Option<u8>) -> Self {
        match (hyperelliptic, parity) {
            (true, _) => ComponentLabel::Hyp,
            (false, Some(0)) => ComponentLabel::Even,
            (false, Some(_)) => ComponentLabel::Odd,
            (false, None) if stratum.has_hyperelliptic_component() => ComponentLabel::Nonhyp,
            (false, None) => ComponentLabel::Whole,
        }
    }
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cusp {
    pub size: usize,
    pub alpha_cycle_type: CycleType,
}

/// One SL(2,Z) orbit of the census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSummary {
    pub component_id: usize,
    pub member_keys: Vec<CanonicalKey>,
    pub n: usize,
    pub m: Rational,
    pub slope: Rational,
    /// Membership in the hyperelliptic connected component.
    pub hyperelliptic: bool,
    pub parity: Option<u8>,
    pub label: ComponentLabel,
    pub cusps: Vec<Cusp>,
}

impl ComponentSummary {
    pub fn size(&self) -> usize {
        self.member_keys.len()
    }

    pub fn cusp_count(&self) -> usize {
        self.cusps.len()
    }

    pub fn ratio_mn(&self) -> Rational {
        &self.m / &Rational::from_integer(self.n as i64)
    }
}

/// `12 / (1 + κ·N/M)`.
pub fn component_slope(
    n: usize,
    m: &Rational,
    mu: &StratumSignature,
) -> Result<Rational, OrbitError> {
    let inv_m = m.recip().ok_or(OrbitError::UndefinedSlope)?;
    let denom = Rational::one() + kappa(mu) * Rational::from_integer(n as i64) * inv_m;
    Ok(Rational::from_integer(12) / denom)
}

struct MemberData {
    neighbours: [usize; 4],
    in_hyp: bool,
    parity: Option<u8>,
}

/// Splits the census into SL(2,Z) orbits, ordered by minimal canonical key.
pub fn decompose(c: &Census) -> Result<Vec<ComponentSummary>, OrbitError> {
    if c.is_empty() {
        return Err(OrbitError::EmptyCensus);
    }
    let keys: Vec<&CanonicalKey> = c.members().keys().collect();
    let index: HashMap<&CanonicalKey, usize> =
        keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let stratum = c.stratum();
    let with_parity = stratum.all_even();

    type Move = (fn(&Origami) -> Origami, &'static str);
    const MOVES: [Move; 4] = [
        (act_h_alpha, "h_alpha"),
        (act_h_beta, "h_beta"),
        (act_h_alpha_inv, "h_alpha^-1"),
        (act_h_beta_inv, "h_beta^-1"),
    ];
    let data: Vec<MemberData> = c
        .members()
        .par_iter()
        .map(|(key, o)| {
            let mut neighbours = [0; 4];
            for (slot, (mv, name)) in neighbours.iter_mut().zip(MOVES) {
                let k = mv(o).canonical_key();
                *slot = *index
                    .get(&k)
                    .ok_or_else(|| OrbitError::LeftCensus(key.clone(), name))?;
            }
            let parity = if with_parity {
                Some(spin_parity(o).expect("parity is defined for even strata"))
            } else {
                None
            };
            Ok(MemberData {
                neighbours,
                in_hyp: o.in_hyperelliptic_component(),
                parity,
            })
        })
        .collect::<Result<_, OrbitError>>()?;

    let mut orbits = UnionFind::new(keys.len());
    let mut cusps = UnionFind::new(keys.len());
    for (i, m) in data.iter().enumerate() {
        for &j in &m.neighbours {
            orbits.union(i, j);
        }
        cusps.union(i, m.neighbours[0]);
    }

    // keys are sorted, so the first index seen in each set is its minimum
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut first: HashMap<usize, usize> = HashMap::new();
    for i in 0..keys.len() {
        let root = orbits.find(i);
        let lead = *first.entry(root).or_insert(i);
        groups.entry(lead).or_default().push(i);
    }

    let members: Vec<&Origami> = c.members().values().collect();
    let mut out = Vec::with_capacity(groups.len());
    for (id, idx) in groups.into_values().enumerate() {
        let component_id = id + 1;
        let lead = &data[idx[0]];
        for &i in &idx {
            if data[i].in_hyp != lead.in_hyp {
                return Err(OrbitError::NotConstant {
                    what: "hyperelliptic flag",
                    component: component_id,
                });
            }
            if data[i].parity != lead.parity {
                return Err(OrbitError::NotConstant {
                    what: "spin parity",
                    component: component_id,
                });
            }
        }
        let m: Rational = idx.iter().map(|&i| members[i].weight()).sum();
        let n = idx.len();
        let slope = component_slope(n, &m, stratum)?;

        let mut cusp_groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut cusp_first: HashMap<usize, usize> = HashMap::new();
        for &i in &idx {
            let root = cusps.find(i);
            let lead = *cusp_first.entry(root).or_insert(i);
            cusp_groups.entry(lead).or_default().push(i);
        }
        let cusps = cusp_groups
            .into_values()
            .map(|g| {
                let t = members[g[0]].alpha().cycle_type();
                assert!(g.iter().all(|&i| members[i].alpha().cycle_type() == t));
                Cusp {
                    size: g.len(),
                    alpha_cycle_type: t,
                }
            })
            .collect();

        out.push(ComponentSummary {
            component_id,
            member_keys: idx.iter().map(|&i| keys[i].clone()).collect(),
            n,
            m,
            slope,
            hyperelliptic: lead.in_hyp,
            parity: lead.parity,
            label: ComponentLabel::of(stratum, lead.in_hyp, lead.parity),
            cusps,
        });
    }
    Ok(out)
}

#[derive(Serialize)]
struct JsonComponent<'a> {
    component_id: usize,
    size: usize,
    n: usize,
    m: String,
    slope: String,
    hyperelliptic: bool,
    parity: Option<u8>,
    label: &'a str,
    cusp_count: usize,
    cusps: Vec<JsonCusp>,
    member_keys: Vec<String>,
}

#[derive(Serialize)]
struct JsonCusp {
    size: usize,
    alpha_cycle_type: String,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    degree: usize,
    mu: &'a [usize],
    n: usize,
    m: String,
    cusp_convention: &'a str,
    components: Vec<JsonComponent<'a>>,
}

/// JSON component report. Rationals are `"num/den"` strings.
pub fn components_json(c: &Census, comps: &[ComponentSummary]) -> serde_json::Value {
    let report = JsonReport {
        degree: c.degree(),
        mu: c.stratum().mu(),
        n: c.n(),
        m: c.m().to_fraction_string(),
        cusp_convention: CUSP_CONVENTION,
        components: comps
            .iter()
            .map(|s| JsonComponent {
                component_id: s.component_id,
                size: s.size(),
                n: s.n,
                m: s.m.to_fraction_string(),
                slope: s.slope.to_fraction_string(),
                hyperelliptic: s.hyperelliptic,
                parity: s.parity,
                label: s.label.as_str(),
                cusp_count: s.cusp_count(),
                cusps: s
                    .cusps
                    .iter()
                    .map(|k| JsonCusp {
                        size: k.size,
                        alpha_cycle_type: k.alpha_cycle_type.to_string(),
                    })
                    .collect(),
                member_keys: s.member_keys.iter().map(CanonicalKey::to_hex).collect(),
            })
            .collect(),
    };
    serde_json::to_value(report).expect("serializable")
}

/// CSV summary with one row per component, for one or more censuses.
pub fn write_components_csv<W: Write>(
    reports: &[(&Census, &[ComponentSummary])],
    w: W,
) -> Result<(), OrbitError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "stratum",
        "d",
        "component_id",
        "size",
        "M_num",
        "M_den",
        "slope_num",
        "slope_den",
        "hyperelliptic",
        "parity",
        "label",
        "cusp_count",
    ])?;
    for (c, s) in reports
        .iter()
        .flat_map(|(c, comps)| comps.iter().map(move |s| (c, s)))
    {
        out.write_record([
            c.stratum().to_string(),
            c.degree().to_string(),
            s.component_id.to_string(),
            s.size().to_string(),
            s.m.numer().to_string(),
            s.m.denom().to_string(),
            s.slope.numer().to_string(),
            s.slope.denom().to_string(),
            s.hyperelliptic.to_string(),
            s.parity.map(|p| p.to_string()).unwrap_or_default(),
            s.label.as_str().to_string(),
            s.cusp_count().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
