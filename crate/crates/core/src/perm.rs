//! Permutations of the letters `1..=d`, cycle types and the small amount of
//! group theory the census needs.
//!
//! Composition follows the "right factor acts first" convention:
//! `p.compose(&q)` maps `i` to `p(q(i))`. Under this convention the
//! commutator `β⁻¹α⁻¹βα` of `α = (1,2,3,4)(5)` and `β = (1,5)` is `(1,5,4)`.
//!
//! Letters are 1-based in every public constructor, accessor and text
//! format; the internal image table is 0-based.

use std::fmt;
use std::str::FromStr;

use crate::unionfind::UnionFind;

/// Largest supported degree; images are stored as bytes.
pub const MAX_DEGREE: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree must be between 1 and {MAX_DEGREE}, got {0}")]
    BadDegree(usize),
    #[error("images do not form a bijection of 1..={0}")]
    NotBijective(usize),
    #[error("letter {letter} out of range 1..={degree}")]
    LetterOutOfRange { letter: usize, degree: usize },
    #[error("letter {0} appears more than once")]
    RepeatedLetter(usize),
    #[error("cannot parse cycle notation {0:?}")]
    Syntax(String),
    #[error("cycle type parts sum to {sum}, expected {degree}")]
    BadCycleType { sum: usize, degree: usize },
}

/// A bijection of `{1..d}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&degree), "bad degree {degree}");
        Permutation {
            images: (0..degree as u8).collect(),
        }
    }

    /// Builds from 1-based images: `images[i-1]` is the image of letter `i`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let d = images.len();
        if d == 0 || d > MAX_DEGREE {
            return Err(PermError::BadDegree(d));
        }
        let mut seen = vec![false; d];
        let mut table = Vec::with_capacity(d);
        for &x in images {
            if x == 0 || x > d || seen[x - 1] {
                return Err(PermError::NotBijective(d));
            }
            seen[x - 1] = true;
            table.push((x - 1) as u8);
        }
        Ok(Permutation { images: table })
    }

    /// Builds from a 0-based image table without copying. The table must be a
    /// bijection of `0..len`.
    pub fn from_table(table: Vec<u8>) -> Result<Self, PermError> {
        let d = table.len();
        if d == 0 || d > MAX_DEGREE {
            return Err(PermError::BadDegree(d));
        }
        let mut seen = vec![false; d];
        for &x in &table {
            let x = x as usize;
            if x >= d || seen[x] {
                return Err(PermError::NotBijective(d));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: table })
    }

    pub(crate) fn from_table_unchecked(table: Vec<u8>) -> Self {
        debug_assert!(Permutation::from_table(table.clone()).is_ok());
        Permutation { images: table }
    }

    /// Builds from 1-based cycles; letters not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(PermError::BadDegree(degree));
        }
        let mut table: Vec<u8> = (0..degree as u8).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for &x in cycle {
                if x == 0 || x > degree {
                    return Err(PermError::LetterOutOfRange { letter: x, degree });
                }
                if seen[x - 1] {
                    return Err(PermError::RepeatedLetter(x));
                }
                seen[x - 1] = true;
            }
            for (k, &x) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                table[x - 1] = (next - 1) as u8;
            }
        }
        Ok(Permutation { images: table })
    }

    /// Parses cycle notation with an explicit degree.
    pub fn parse_with_degree(s: &str, degree: usize) -> Result<Self, PermError> {
        parse_permutation(s, Some(degree))
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based letter `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// 0-based image table.
    pub fn table(&self) -> &[u8] {
        &self.images
    }

    #[inline]
    pub(crate) fn at(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    fn check_degree(&self, other: &Permutation) -> Result<(), PermError> {
        if self.degree() != other.degree() {
            Err(PermError::DegreeMismatch(self.degree(), other.degree()))
        } else {
            Ok(())
        }
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// `τ · self · τ⁻¹`, i.e. the relabeling of `self` along `τ`.
    pub fn conjugate_by(&self, tau: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(tau)?;
        let mut out = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            out[tau.at(i)] = tau.images[x as usize];
        }
        Ok(Permutation { images: out })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    pub fn is_involution(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| self.images[x as usize] as usize == i)
    }

    pub fn fixed_point_count(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x as usize)
            .count()
    }

    /// Cycles in canonical order: each rotated to start at its minimal letter,
    /// sorted by that letter; fixed points included. 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.at(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut parts: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType {
            degree: self.degree(),
            parts,
        }
    }
}

/// β⁻¹α⁻¹βα.
pub fn commutator(alpha: &Permutation, beta: &Permutation) -> Result<Permutation, PermError> {
    alpha.check_degree(beta)?;
    Ok(commutator_unchecked(alpha, beta))
}

pub(crate) fn commutator_unchecked(alpha: &Permutation, beta: &Permutation) -> Permutation {
    let ai = alpha.inverse();
    let bi = beta.inverse();
    let table = (0..alpha.degree())
        .map(|i| bi.images[ai.at(beta.at(alpha.at(i)))])
        .collect();
    Permutation { images: table }
}

/// Whether `⟨α, β⟩` acts transitively on the letters.
pub fn is_transitive(alpha: &Permutation, beta: &Permutation) -> Result<bool, PermError> {
    alpha.check_degree(beta)?;
    Ok(orbit_count(&[alpha, beta]) == 1)
}

/// Number of orbits of the group generated by `gens` (all of equal degree).
pub fn orbit_count(gens: &[&Permutation]) -> usize {
    let d = gens.first().map_or(0, |g| g.degree());
    let mut uf = UnionFind::new(d);
    for g in gens {
        for i in 0..d {
            uf.union(i, g.at(i));
        }
    }
    uf.set_count()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            f.write_str("(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cycle notation; the degree is the largest letter mentioned.
///
/// Letters inside a cycle are separated by commas or whitespace. Input with
/// no separators at all, like `(1234)(5)`, is read digit by digit when that
/// gives a permutation, and as whole numbers otherwise.
impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_permutation(s, None)
    }
}

fn cycle_bodies(s: &str) -> Result<Vec<&str>, PermError> {
    let syntax = || PermError::Syntax(s.to_string());
    let mut bodies = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body_start = rest.strip_prefix('(').ok_or_else(syntax)?;
        let close = body_start.find(')').ok_or_else(syntax)?;
        let body = body_start[..close].trim();
        rest = body_start[close + 1..].trim_start();
        if !body.is_empty() {
            bodies.push(body);
        }
    }
    Ok(bodies)
}

fn read_cycles(s: &str, bodies: &[&str], digits: bool) -> Result<Vec<Vec<usize>>, PermError> {
    let syntax = || PermError::Syntax(s.to_string());
    bodies
        .iter()
        .map(|body| {
            if digits {
                body.chars()
                    .map(|c| c.to_digit(10).map(|v| v as usize).ok_or_else(syntax))
                    .collect()
            } else {
                body.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| syntax()))
                    .collect()
            }
        })
        .collect()
}

/// Parses cycle notation and builds the permutation at `degree`, or at the
/// largest letter when `degree` is `None`. When no cycle uses a separator
/// the digit-by-digit reading is tried first and the multi-digit one second.
fn parse_permutation(s: &str, degree: Option<usize>) -> Result<Permutation, PermError> {
    let bodies = cycle_bodies(s)?;
    let separated = bodies
        .iter()
        .any(|b| b.contains(',') || b.contains(char::is_whitespace));
    let readings: &[bool] = if separated { &[false] } else { &[true, false] };
    let mut first_err = None;
    for &digits in readings {
        let built = read_cycles(s, &bodies, digits).and_then(|cycles| {
            let d = match degree {
                Some(d) => d,
                None => cycles.iter().flatten().copied().max().unwrap_or(0),
            };
            if d == 0 {
                return Err(PermError::Syntax(s.to_string()));
            }
            Permutation::from_cycles(d, &cycles)
        });
        match built {
            Ok(p) => return Ok(p),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one reading"))
}

/// A conjugacy class of `S_d`, as cycle lengths in descending order with
/// fixed points materialized as parts of size 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    degree: usize,
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(degree: usize, mut parts: Vec<usize>) -> Result<Self, PermError> {
        let sum: usize = parts.iter().sum();
        if sum != degree || parts.contains(&0) {
            return Err(PermError::BadCycleType { sum, degree });
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { degree, parts })
    }

    /// Non-trivial parts `lengths`, padded with fixed points up to `degree`.
    pub fn padded(degree: usize, lengths: &[usize]) -> Result<Self, PermError> {
        let used: usize = lengths.iter().sum();
        if used > degree {
            return Err(PermError::BadCycleType { sum: used, degree });
        }
        let mut parts = lengths.to_vec();
        parts.extend(std::iter::repeat_n(1, degree - used));
        CycleType::new(degree, parts)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Count of parts of each length: `multiplicities()[i]` cycles of length `i`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.degree + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    /// The block representative `(1..p1)(p1+1..)…`.
    pub fn class_representative(&self) -> Permutation {
        let mut table = Vec::with_capacity(self.degree);
        let mut start = 0usize;
        for &p in &self.parts {
            for k in 0..p {
                table.push((start + (k + 1) % p) as u8);
            }
            start += p;
        }
        Permutation::from_table_unchecked(table)
    }

    /// All cycle types of `S_d`, in descending lexicographic order.
    pub fn all(degree: usize) -> Vec<CycleType> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rem == 0 {
                out.push(cur.clone());
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(degree, degree, &mut Vec::new(), &mut out);
        out.into_iter()
            .map(|parts| CycleType { degree, parts })
            .collect()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Generators of the centralizer of `p` in `S_d`: for every cycle length,
/// the rotation along each cycle and the swaps of adjacent equal-length
/// cycles. Trivial generators are omitted.
pub fn centralizer_generators(p: &Permutation) -> Vec<Permutation> {
    let d = p.degree();
    let mut by_len: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d + 1];
    for c in p.cycles() {
        let len = c.len();
        by_len[len].push(c.into_iter().map(|x| x - 1).collect());
    }
    let mut gens = Vec::new();
    for (len, cycles) in by_len.iter().enumerate() {
        if len >= 2 {
            for c in cycles {
                let mut t: Vec<u8> = (0..d as u8).collect();
                for k in 0..len {
                    t[c[k]] = c[(k + 1) % len] as u8;
                }
                gens.push(Permutation::from_table_unchecked(t));
            }
        }
        for pair in cycles.windows(2) {
            let mut t: Vec<u8> = (0..d as u8).collect();
            for k in 0..len {
                t[pair[0][k]] = pair[1][k] as u8;
                t[pair[1][k]] = pair[0][k] as u8;
            }
            gens.push(Permutation::from_table_unchecked(t));
        }
    }
    gens
}

/// Rearranges `table` into the next permutation in lexicographic order.
/// Returns false (leaving `table` untouched) when it is the last one.
pub fn next_permutation(table: &mut [u8]) -> bool {
    let n = table.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && table[i - 1] >= table[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while table[j] <= table[i - 1] {
        j -= 1;
    }
    table.swap(i - 1, j);
    table[i..].reverse();
    true
}

/// `d!`, saturating.
pub fn factorial(d: usize) -> u64 {
    (1..=d as u64).fold(1u64, |a, b| a.saturating_mul(b))
}

/// The permutation of lexicographic rank `rank` in `S_d` (0-based table).
pub fn unrank_lex(degree: usize, mut rank: u64) -> Vec<u8> {
    let mut pool: Vec<u8> = (0..degree as u8).collect();
    let mut out = Vec::with_capacity(degree);
    for k in (0..degree).rev() {
        let f = factorial(k);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

/// Iterates `S_d` in lexicographic order of the one-line notation.
pub fn symmetric_group(degree: usize) -> impl Iterator<Item = Permutation> {
    let mut cur: Option<Vec<u8>> = Some((0..degree as u8).collect());
    std::iter::from_fn(move || {
        let t = cur.take()?;
        let mut next = t.clone();
        if next_permutation(&mut next) {
            cur = Some(next);
        }
        Some(Permutation::from_table_unchecked(t))
    })
}
