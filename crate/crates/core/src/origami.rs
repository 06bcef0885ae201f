//! Square-tiled surfaces given by a monodromy pair `(α, β)`: square `i` has
//! its right neighbour `α(i)` and its top neighbour `β(i)`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::perm::{self, CycleType, PermError, Permutation};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrigamiError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("disconnected cover: <alpha, beta> is not transitive")]
    DisconnectedCover,
    #[error("trivial stratum: the cover has genus {0} < 2")]
    TrivialStratum(usize),
    #[error("invalid stratum {0:?}")]
    InvalidStratum(String),
    #[error("odd total ramification {0}; not a commutator profile")]
    OddRamification(usize),
}

/// Zero orders `μ = (m_1, …, m_k)` of a stratum, descending, with
/// `Σ m_i = 2g − 2` and `g ≥ 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct StratumSignature {
    mu: Vec<usize>,
}

impl StratumSignature {
    pub fn new(mut mu: Vec<usize>) -> Result<Self, OrigamiError> {
        let bad = || OrigamiError::InvalidStratum(format!("{mu:?}"));
        if mu.is_empty() || mu.contains(&0) {
            return Err(bad());
        }
        let total: usize = mu.iter().sum();
        if total % 2 == 1 || total < 2 {
            return Err(bad());
        }
        mu.sort_unstable_by(|a, b| b.cmp(a));
        Ok(StratumSignature { mu })
    }

    pub fn mu(&self) -> &[usize] {
        &self.mu
    }

    pub fn genus(&self) -> usize {
        self.mu.iter().sum::<usize>() / 2 + 1
    }

    /// Smallest degree admitting the commutator class `(m_1+1)…(m_k+1)`.
    pub fn min_degree(&self) -> usize {
        self.mu.iter().map(|m| m + 1).sum()
    }

    /// The target conjugacy class of the commutator in `S_d`, if `d` is large enough.
    pub fn commutator_class(&self, degree: usize) -> Option<CycleType> {
        let lengths: Vec<usize> = self.mu.iter().map(|m| m + 1).collect();
        CycleType::padded(degree, &lengths).ok()
    }

    /// `μ = (2g − 2)`.
    pub fn is_single_zero(&self) -> bool {
        self.mu.len() == 1
    }

    /// `μ = (g − 1, g − 1)`.
    pub fn is_double_zero(&self) -> bool {
        self.mu.len() == 2 && self.mu[0] == self.mu[1]
    }

    /// Whether the stratum has a hyperelliptic connected component.
    pub fn has_hyperelliptic_component(&self) -> bool {
        self.is_single_zero() || self.is_double_zero()
    }

    /// Spin parity is defined when every zero has even order.
    pub fn all_even(&self) -> bool {
        self.mu.iter().all(|m| m % 2 == 0)
    }

    /// Comma-separated parts, e.g. `2,2`.
    pub fn parts_string(&self) -> String {
        self.mu
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for StratumSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({})", self.parts_string())
    }
}

impl fmt::Debug for StratumSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `4`, `1,1`, `(2,2)` or `H(3,1)`.
impl FromStr for StratumSignature {
    type Err = OrigamiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OrigamiError::InvalidStratum(s.to_string());
        let t = s.trim();
        let t = t.strip_prefix('H').unwrap_or(t).trim();
        let t = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(t);
        let mu = t
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        StratumSignature::new(mu).map_err(|_| bad())
    }
}

impl TryFrom<Vec<usize>> for StratumSignature {
    type Error = OrigamiError;
    fn try_from(mu: Vec<usize>) -> Result<Self, Self::Error> {
        StratumSignature::new(mu)
    }
}

impl From<StratumSignature> for Vec<usize> {
    fn from(s: StratumSignature) -> Vec<usize> {
        s.mu
    }
}

/// Genus of the cover whose commutator has cycle type `t`, by Riemann–Hurwitz.
pub fn genus_of(t: &CycleType) -> Result<usize, OrigamiError> {
    let ramification: usize = t.parts().iter().map(|c| c - 1).sum();
    if ramification % 2 == 1 {
        return Err(OrigamiError::OddRamification(ramification));
    }
    Ok(1 + ramification / 2)
}

/// A maximal horizontal cylinder; every cylinder of a square-tiled surface
/// built from unit squares has height 1 here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cylinder {
    pub width: usize,
    pub height: usize,
}

/// Bytes identifying the simultaneous-conjugation class of a transitive pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

/// An involution `τ` with `τ(α, β)τ⁻¹ = (α⁻¹, β⁻¹)` and the fixed points of
/// the induced involution of the surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionReport {
    pub tau: Permutation,
    /// Fixed square centers: letters fixed by `τ`.
    pub n: usize,
    /// Fixed vertical-edge midpoints: letters fixed by `τα`.
    pub n_a: usize,
    /// Fixed horizontal-edge midpoints: letters fixed by `τβ`.
    pub n_b: usize,
    /// Fixed unramified integer points: letters fixed by both `τβα` and the commutator.
    pub n_ba: usize,
    /// Zeros (ramification points) mapped to themselves.
    pub fixed_zeros: usize,
    /// `n + n_a + n_b + n_ba + fixed_zeros`; for a single zero this is
    /// `n + n_a + n_b + n_ba + 1`.
    pub total_fixed: usize,
}

/// A validated origami of genus at least 2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Origami {
    alpha: Permutation,
    beta: Permutation,
    commutator: Permutation,
    commutator_type: CycleType,
    stratum: StratumSignature,
    weight: Rational,
}

impl Origami {
    /// Validates the pair and derives its commutator class, stratum and weight.
    pub fn new(alpha: Permutation, beta: Permutation) -> Result<Self, OrigamiError> {
        if !perm::is_transitive(&alpha, &beta)? {
            return Err(OrigamiError::DisconnectedCover);
        }
        let commutator = perm::commutator_unchecked(&alpha, &beta);
        let commutator_type = commutator.cycle_type();
        let genus = genus_of(&commutator_type)?;
        if genus < 2 {
            return Err(OrigamiError::TrivialStratum(genus));
        }
        let mu: Vec<usize> = commutator_type
            .parts()
            .iter()
            .filter(|&&c| c >= 2)
            .map(|c| c - 1)
            .collect();
        let stratum = StratumSignature::new(mu)?;
        debug_assert_eq!(stratum.genus(), genus);
        let weight = weight_of(&alpha.cycle_type());
        Ok(Origami {
            alpha,
            beta,
            commutator,
            commutator_type,
            stratum,
            weight,
        })
    }

    /// Parses both permutations in cycle notation at the given degree.
    pub fn parse(alpha: &str, beta: &str, degree: usize) -> Result<Self, OrigamiError> {
        Origami::new(
            Permutation::parse_with_degree(alpha, degree)?,
            Permutation::parse_with_degree(beta, degree)?,
        )
    }

    pub fn alpha(&self) -> &Permutation {
        &self.alpha
    }

    pub fn beta(&self) -> &Permutation {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.alpha.degree()
    }

    pub fn commutator(&self) -> &Permutation {
        &self.commutator
    }

    pub fn commutator_type(&self) -> &CycleType {
        &self.commutator_type
    }

    pub fn stratum(&self) -> &StratumSignature {
        &self.stratum
    }

    pub fn genus(&self) -> usize {
        self.stratum.genus()
    }

    /// `Σ a_i / i` where `α` has `a_i` cycles of length `i`.
    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    /// One cylinder per cycle of `α`, in canonical cycle order.
    pub fn horizontal_cylinders(&self) -> Vec<Cylinder> {
        self.alpha
            .cycles()
            .iter()
            .map(|c| Cylinder {
                width: c.len(),
                height: 1,
            })
            .collect()
    }

    /// Simultaneous conjugation `(τατ⁻¹, τβτ⁻¹)`.
    pub fn conjugate_by(&self, tau: &Permutation) -> Result<Origami, OrigamiError> {
        Origami::new(self.alpha.conjugate_by(tau)?, self.beta.conjugate_by(tau)?)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        canonical_relabeling(&self.alpha, &self.beta).0
    }

    /// The key together with the relabeled representative realizing it.
    /// Equivalent origamis share both.
    pub fn canonical_form(&self) -> (CanonicalKey, Origami) {
        let (key, alpha, beta) = canonical_relabeling(&self.alpha, &self.beta);
        let o = Origami {
            commutator: perm::commutator_unchecked(&alpha, &beta),
            alpha,
            beta,
            commutator_type: self.commutator_type.clone(),
            stratum: self.stratum.clone(),
            weight: self.weight.clone(),
        };
        (key, o)
    }

    /// All involutions `τ` with `τ(α, β)τ⁻¹ = (α⁻¹, β⁻¹)`.
    pub fn find_anti_involutions(&self) -> Vec<InvolutionReport> {
        let (ai, bi) = (self.alpha.inverse(), self.beta.inverse());
        intertwiners(&self.alpha, &self.beta, &ai, &bi)
            .into_iter()
            .filter(Permutation::is_involution)
            .map(|tau| self.involution_report(tau))
            .collect()
    }

    /// Fixed-point data of the surface involution induced by an anti-involution `τ`.
    pub fn involution_report(&self, tau: Permutation) -> InvolutionReport {
        let d = self.degree();
        let ta = tau.compose_unchecked(&self.alpha);
        let tb = tau.compose_unchecked(&self.beta);
        let tba = tb.compose_unchecked(&self.alpha);
        let n = tau.fixed_point_count();
        let n_a = ta.fixed_point_count();
        let n_b = tb.fixed_point_count();
        let n_ba = (0..d)
            .filter(|&i| self.commutator.at(i) == i && tba.at(i) == i)
            .count();
        // The corner X_i goes to Z_τ(i), which sits at the vertex of the
        // letter α⁻¹β⁻¹τ(i); vertices are commutator cycles.
        let ab_inv = self.beta.compose_unchecked(&self.alpha).inverse();
        let mut cycle_of = vec![0usize; d];
        let cycles = self.commutator.cycles();
        for (k, c) in cycles.iter().enumerate() {
            for &x in c {
                cycle_of[x - 1] = k;
            }
        }
        let fixed_zeros = cycles
            .iter()
            .filter(|c| c.len() > 1)
            .filter(|c| {
                let i = c[0] - 1;
                cycle_of[ab_inv.at(tau.at(i))] == cycle_of[i]
            })
            .count();
        InvolutionReport {
            total_fixed: n + n_a + n_b + n_ba + fixed_zeros,
            tau,
            n,
            n_a,
            n_b,
            n_ba,
            fixed_zeros,
        }
    }

    /// Whether the surface is a hyperelliptic curve: some anti-involution
    /// has `2g + 2` fixed points.
    pub fn is_hyperelliptic(&self) -> bool {
        let target = 2 * self.genus() + 2;
        self.find_anti_involutions()
            .iter()
            .any(|r| r.total_fixed == target)
    }

    /// Whether the surface lies in the hyperelliptic connected component of
    /// its stratum. Only `(2g−2)` and `(g−1, g−1)` have one; for the latter
    /// the hyperelliptic involution must also swap the two zeros.
    pub fn in_hyperelliptic_component(&self) -> bool {
        if !self.stratum.has_hyperelliptic_component() {
            return false;
        }
        let target = 2 * self.genus() + 2;
        let zeros = self.stratum.mu().len();
        self.find_anti_involutions()
            .iter()
            .any(|r| r.total_fixed == target && (zeros == 1 || r.fixed_zeros == 0))
    }

    /// Whether a non-identity involution commutes with both `α` and `β`.
    pub fn has_order_two_automorphism(&self) -> bool {
        self.order_two_automorphisms().next().is_some()
    }

    pub fn order_two_automorphisms(&self) -> impl Iterator<Item = Permutation> {
        intertwiners(&self.alpha, &self.beta, &self.alpha, &self.beta)
            .into_iter()
            .filter(|t| !t.is_identity() && t.is_involution())
    }

    pub fn to_record(&self) -> OrigamiRecord {
        OrigamiRecord {
            degree: self.degree(),
            alpha: self.alpha.cycles(),
            beta: self.beta.cycles(),
        }
    }

    pub fn from_record(r: &OrigamiRecord) -> Result<Origami, OrigamiError> {
        Origami::new(
            Permutation::from_cycles(r.degree, &r.alpha)?,
            Permutation::from_cycles(r.degree, &r.beta)?,
        )
    }
}

impl fmt::Debug for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Origami(α={}, β={})", self.alpha, self.beta)
    }
}

/// JSON shape of one origami: 1-based cycles in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrigamiRecord {
    pub degree: usize,
    pub alpha: Vec<Vec<usize>>,
    pub beta: Vec<Vec<usize>>,
}

/// `Σ a_i / i` for a cycle type with `a_i` parts equal to `i`.
pub fn weight_of(t: &CycleType) -> Rational {
    t.parts().iter().map(|&p| Rational::new(1, p as i64)).sum()
}

/// Every permutation `τ` with `τ g τ⁻¹ = g'` and `τ h τ⁻¹ = h'`, where `⟨g, h⟩`
/// is transitive. Such a `τ` is fixed by `τ(1)`: it must send `w(1)` to
/// `w'(τ(1))` for every word `w`.
fn intertwiners(
    g: &Permutation,
    h: &Permutation,
    g2: &Permutation,
    h2: &Permutation,
) -> Vec<Permutation> {
    let d = g.degree();
    const UNSET: u8 = u8::MAX;
    let mut out = Vec::new();
    let mut queue = VecDeque::with_capacity(d);
    'start: for t in 0..d {
        let mut tau = vec![UNSET; d];
        let mut used = vec![false; d];
        tau[0] = t as u8;
        used[t] = true;
        queue.clear();
        queue.push_back(0usize);
        while let Some(x) = queue.pop_front() {
            let tx = tau[x] as usize;
            for (src, dst) in [(g, g2), (h, h2)] {
                let y = src.at(x);
                let ty = dst.at(tx);
                if tau[y] == UNSET {
                    if used[ty] {
                        continue 'start;
                    }
                    tau[y] = ty as u8;
                    used[ty] = true;
                    queue.push_back(y);
                } else if tau[y] as usize != ty {
                    continue 'start;
                }
            }
        }
        debug_assert!(tau.iter().all(|&x| x != UNSET));
        out.push(Permutation::from_table_unchecked(tau));
    }
    out
}

/// For every start letter, relabel by breadth-first discovery order along
/// `α` then `β`, and keep the lexicographically smallest encoding.
fn canonical_relabeling(
    alpha: &Permutation,
    beta: &Permutation,
) -> (CanonicalKey, Permutation, Permutation) {
    let d = alpha.degree();
    const UNSET: u8 = u8::MAX;
    let mut best: Option<Vec<u8>> = None;
    let mut label = vec![UNSET; d];
    let mut order = Vec::with_capacity(d);
    let mut bytes = vec![0u8; 2 * d];
    for s in 0..d {
        label.iter_mut().for_each(|l| *l = UNSET);
        order.clear();
        label[s] = 0;
        order.push(s);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for y in [alpha.at(x), beta.at(x)] {
                if label[y] == UNSET {
                    label[y] = order.len() as u8;
                    order.push(y);
                }
            }
        }
        debug_assert_eq!(order.len(), d, "canonical key needs a transitive pair");
        for (new, &old) in order.iter().enumerate() {
            bytes[new] = label[alpha.at(old)];
            bytes[d + new] = label[beta.at(old)];
        }
        if best.as_ref().is_none_or(|b| bytes < *b) {
            best = Some(bytes.clone());
        }
    }
    let best = best.expect("degree >= 1");
    let alpha = Permutation::from_table_unchecked(best[..d].to_vec());
    let beta = Permutation::from_table_unchecked(best[d..].to_vec());
    (CanonicalKey(best), alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::symmetric_group;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn o(a: &str, b: &str, d: usize) -> Origami {
        Origami::parse(a, b, d).unwrap()
    }

    fn example_4_1() -> Origami {
        o("(1,2,3,4)(5)", "(1,5)", 5)
    }

    #[test]
    fn make_origami_cases() {
        let e = example_4_1();
        assert_eq!(e.stratum().mu(), &[2]);
        assert_eq!(e.genus(), 2);
        assert_eq!(e.commutator_type().parts(), &[3, 1, 1]);
        assert_eq!(
            Origami::parse("(1,2)", "(3,4)", 4),
            Err(OrigamiError::DisconnectedCover)
        );
        assert_eq!(
            Origami::parse("", "", 1),
            Err(OrigamiError::TrivialStratum(1))
        );
        assert!(matches!(
            Origami::new(Permutation::identity(3), Permutation::identity(4)),
            Err(OrigamiError::Perm(PermError::DegreeMismatch(3, 4)))
        ));
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus_of(&CycleType::new(5, vec![3, 1, 1]).unwrap()), Ok(2));
        assert_eq!(genus_of(&CycleType::new(5, vec![5]).unwrap()), Ok(3));
        assert_eq!(genus_of(&CycleType::new(4, vec![1; 4]).unwrap()), Ok(1));
        assert_eq!(
            genus_of(&CycleType::new(2, vec![2]).unwrap()),
            Err(OrigamiError::OddRamification(1))
        );
    }

    #[test]
    fn stratum_parsing() {
        let s: StratumSignature = "1,1".parse().unwrap();
        assert_eq!(s.mu(), &[1, 1]);
        assert_eq!(s.genus(), 2);
        assert_eq!("H(1,3)".parse::<StratumSignature>().unwrap().mu(), &[3, 1]);
        assert_eq!(
            "(4)".parse::<StratumSignature>().unwrap().to_string(),
            "H(4)"
        );
        for bad in ["0", "3", "", "1,x", "2,0"] {
            assert!(bad.parse::<StratumSignature>().is_err(), "{bad}");
        }
        let s: StratumSignature = "2,2".parse().unwrap();
        assert!(s.is_double_zero() && s.all_even() && s.has_hyperelliptic_component());
        assert_eq!(s.commutator_class(6).unwrap().parts(), &[3, 3]);
        assert_eq!(s.commutator_class(5), None);
    }

    #[test]
    fn cylinders_and_weights() {
        let e = example_4_1();
        assert_eq!(
            e.horizontal_cylinders(),
            vec![
                Cylinder {
                    width: 4,
                    height: 1
                },
                Cylinder {
                    width: 1,
                    height: 1
                }
            ]
        );
        assert_eq!(e.weight(), &Rational::new(5, 4));
        let single = o("(1,2,3,5,4)", "(1,2)(3,4)", 5);
        assert_eq!(single.horizontal_cylinders().len(), 1);
        assert_eq!(single.weight(), &Rational::new(1, 5));
        let t = CycleType::new(4, vec![1; 4]).unwrap();
        assert_eq!(weight_of(&t), Rational::from_integer(4));
        let widths: usize = e.horizontal_cylinders().iter().map(|c| c.width).sum();
        assert_eq!(widths, 5);
    }

    #[test]
    fn identity_alpha_cylinders() {
        // α = id with a 3-cycle β has trivial commutator, so build the
        // cylinder list from the permutation directly.
        let cyl: Vec<usize> = Permutation::identity(3)
            .cycles()
            .iter()
            .map(Vec::len)
            .collect();
        assert_eq!(cyl, vec![1, 1, 1]);
    }

    #[test]
    fn example_4_1_anti_involution() {
        let e = example_4_1();
        let reports = e.find_anti_involutions();
        assert_eq!(reports.len(), 1);
        let r = &reports[0];
        assert_eq!(r.tau, Permutation::parse_with_degree("(2,4)", 5).unwrap());
        assert_eq!((r.n, r.n_a, r.n_b, r.n_ba), (3, 1, 1, 0));
        assert_eq!(r.fixed_zeros, 1);
        assert_eq!(r.total_fixed, 6);
        assert!(e.is_hyperelliptic());
        assert!(e.in_hyperelliptic_component());
    }

    #[test]
    fn example_4_3_involutions() {
        let c13 = o("(1,2,3,5,4)", "(1,2)(3,4)(5)", 5);
        let r = c13.find_anti_involutions();
        let r = r
            .iter()
            .find(|r| r.tau == Permutation::parse_with_degree("(1,2)(3,4)", 5).unwrap())
            .expect("tau = (12)(34)");
        assert_eq!((r.n, r.n_a, r.n_b, r.n_ba, r.total_fixed), (1, 1, 5, 0, 8));
        assert!(c13.is_hyperelliptic());

        let c8 = o("(1,2,4,3,5)", "(1,2,3)(4)(5)", 5);
        let reports = c8.find_anti_involutions();
        let r = reports
            .iter()
            .find(|r| r.tau == Permutation::parse_with_degree("(1,2)(4,5)", 5).unwrap())
            .expect("tau = (12)(45)");
        assert_eq!((r.n, r.n_a, r.n_b, r.n_ba, r.total_fixed), (1, 1, 1, 0, 4));
        assert!(!c8.is_hyperelliptic());
        // (12)(45) inverts the pair; it does not commute with it.
        assert!(!c8.has_order_two_automorphism());
    }

    #[test]
    fn canonical_key_is_conjugation_invariant() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let samples = [
            example_4_1(),
            o("(1,2,3,5,4)", "(1,2)(3,4)", 5),
            o("(1,2,3)", "(1,4)", 4),
            o("(1,2,3,4,5,6,7)", "(1,3)(2,5)", 7),
        ];
        for e in &samples {
            let key = e.canonical_key();
            let (k2, rep) = e.canonical_form();
            assert_eq!(key, k2);
            assert_eq!(rep.canonical_key(), key);
            for _ in 0..100 {
                let mut t: Vec<u8> = (0..e.degree() as u8).collect();
                t.shuffle(&mut rng);
                let tau = Permutation::from_table(t).unwrap();
                let c = e.conjugate_by(&tau).unwrap();
                assert_eq!(c.canonical_key(), key);
                assert_eq!(c.canonical_form().1, rep);
                assert_eq!(c.weight(), e.weight());
            }
        }
    }

    #[test]
    fn canonical_key_separates_classes() {
        // brute-force equivalence over S_4 for every valid pair
        let all: Vec<_> = symmetric_group(4).collect();
        let valid: Vec<Origami> = all
            .iter()
            .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
            .filter_map(|(a, b)| Origami::new(a, b).ok())
            .collect();
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..300 {
            let x = &valid[rng.gen_range(0..valid.len())];
            let y = &valid[rng.gen_range(0..valid.len())];
            let equivalent = all.iter().any(|t| x.conjugate_by(t).unwrap() == *y);
            assert_eq!(equivalent, x.canonical_key() == y.canonical_key());
        }
    }

    /// Vertex classes of the square complex from corner gluings, and the
    /// induced action of the central symmetry `τ`.
    fn fixed_zeros_by_corners(o: &Origami, tau: &Permutation) -> usize {
        use crate::unionfind::UnionFind;
        let d = o.degree();
        // corners: 0 = BL, 1 = BR, 2 = TR, 3 = TL
        let c = |i: usize, k: usize| 4 * i + k;
        let mut uf = UnionFind::new(4 * d);
        for i in 0..d {
            let a = o.alpha().at(i);
            let b = o.beta().at(i);
            uf.union(c(i, 1), c(a, 0));
            uf.union(c(i, 2), c(a, 3));
            uf.union(c(i, 3), c(b, 0));
            uf.union(c(i, 2), c(b, 1));
        }
        let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..4 * d {
            let r = uf.find(x);
            classes.entry(r).or_default().push(x);
        }
        let mut fixed = 0;
        for members in classes.values() {
            // each unramified vertex has exactly 4 corners
            if members.len() == 4 {
                continue;
            }
            let x = members[0];
            let (i, k) = (x / 4, x % 4);
            let image = c(tau.at(i), (k + 2) % 4);
            if uf.find(image) == uf.find(x) {
                fixed += 1;
            }
        }
        fixed
    }

    #[test]
    fn involution_reports_match_brute_force() {
        for d in 3..=6 {
            let all: Vec<_> = symmetric_group(d).collect();
            let involutions: Vec<_> = all.iter().filter(|t| t.is_involution()).cloned().collect();
            let (sa, sb) = if d <= 4 { (1, 1) } else { (7, 5) };
            let mut checked = 0;
            for a in all.iter().step_by(sa) {
                for b in all.iter().step_by(sb) {
                    let Ok(x) = Origami::new(a.clone(), b.clone()) else {
                        continue;
                    };
                    let fast = x.find_anti_involutions();
                    let (ai, bi) = (a.inverse(), b.inverse());
                    let brute: Vec<_> = involutions
                        .iter()
                        .filter(|t| {
                            a.conjugate_by(t).unwrap() == ai && b.conjugate_by(t).unwrap() == bi
                        })
                        .collect();
                    assert_eq!(fast.len(), brute.len(), "{x:?}");
                    for (r, t) in fast.iter().zip(brute) {
                        assert_eq!(&r.tau, t);
                        let ta = t.compose(a).unwrap();
                        let tb = t.compose(b).unwrap();
                        let tba = tb.compose(a).unwrap();
                        assert_eq!(r.n, t.fixed_point_count());
                        assert_eq!(r.n_a, ta.fixed_point_count());
                        assert_eq!(r.n_b, tb.fixed_point_count());
                        let comm = x.commutator();
                        let n_ba = (1..=d)
                            .filter(|&i| comm.apply(i) == i && tba.apply(i) == i)
                            .count();
                        assert_eq!(r.n_ba, n_ba);
                        assert_eq!(r.fixed_zeros, fixed_zeros_by_corners(&x, t), "{x:?} {t}");
                        if x.stratum().is_single_zero() {
                            assert_eq!(r.fixed_zeros, 1);
                        }
                    }
                    let brute_aut = involutions.iter().any(|t| {
                        !t.is_identity()
                            && a.conjugate_by(t).unwrap() == *a
                            && b.conjugate_by(t).unwrap() == *b
                    });
                    assert_eq!(x.has_order_two_automorphism(), brute_aut);
                    checked += 1;
                }
            }
            assert!(checked > 0);
        }
    }

    #[test]
    fn record_round_trip() {
        let e = example_4_1();
        let r = e.to_record();
        assert_eq!(r.alpha, vec![vec![1, 2, 3, 4], vec![5]]);
        assert_eq!(r.beta, vec![vec![1, 5], vec![2], vec![3], vec![4]]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"degree":5,"alpha":[[1,2,3,4],[5]],"beta":[[1,5],[2],[3],[4]]}"#
        );
        let back: OrigamiRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(Origami::from_record(&back).unwrap(), e);
    }
}
