//! The covering set `Cov_{d,μ}`: classes of transitive pairs `(α, β)` in
//! `S_d × S_d`, up to simultaneous conjugation, whose commutator `β⁻¹α⁻¹βα`
//! has cycle type `(m_1+1)…(m_k+1)(1)…(1)`.
//!
//! Enumeration walks one representative `α` per cycle type and every `β` in
//! lexicographic order, keeps the pairs with the right commutator class,
//! collapses the `β`s that are conjugate under the centralizer of `α`, and
//! stores each class under its canonical key with its canonical
//! representative. Results do not depend on the worker count.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::origami::{CanonicalKey, Origami, OrigamiRecord, StratumSignature};
use crate::perm::{self, centralizer_generators, CycleType, Permutation};
use crate::rational::Rational;

/// Cache file format version.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest degree the brute-force oracle runs at without an override.
pub const BRUTE_FORCE_MAX_DEGREE: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum CensusError {
    #[error("resource budget exceeded: {needed} items held, budget is {budget}")]
    ResourceBudget { budget: usize, needed: usize },
    #[error("brute force at degree {0} exceeds the cost guard (max {BRUTE_FORCE_MAX_DEGREE})")]
    GuardExceeded(usize),
    #[error("cache schema version {found} is not supported (expected {SCHEMA_VERSION})")]
    VersionMismatch { found: u64 },
    #[error("corrupt census file: {0}")]
    Corrupt(String),
    #[error("census file violates the schema: {0}")]
    Schema(String),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    pub workers: usize,
    /// Maximum number of pairs or classes held in memory at once.
    pub budget: Option<usize>,
    /// Number of `β` candidates per work item.
    pub chunk_size: u64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: None,
            chunk_size: 5040,
        }
    }
}

impl EnumerateOptions {
    pub fn with_workers(workers: usize) -> Self {
        EnumerateOptions {
            workers: workers.max(1),
            ..Default::default()
        }
    }

    fn check_budget(&self, needed: usize) -> Result<(), CensusError> {
        match self.budget {
            Some(budget) if needed > budget => Err(CensusError::ResourceBudget { budget, needed }),
            _ => Ok(()),
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CensusError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .map_err(|e| CensusError::Pool(e.to_string()))
    }
}

/// `Cov_{d,μ}` with its exact totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    degree: usize,
    stratum: StratumSignature,
    members: BTreeMap<CanonicalKey, Origami>,
    m: Rational,
}

impl Census {
    /// Builds a census from canonical representatives, checking each one.
    pub fn from_members(
        degree: usize,
        stratum: StratumSignature,
        members: BTreeMap<CanonicalKey, Origami>,
    ) -> Self {
        let m = members.values().map(Origami::weight).sum();
        Census {
            degree,
            stratum,
            members,
            m,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn stratum(&self) -> &StratumSignature {
        &self.stratum
    }

    /// `N_{d,μ}`: the number of classes.
    pub fn n(&self) -> usize {
        self.members.len()
    }

    /// `M_{d,μ}`: the sum of the weights of all classes.
    pub fn m(&self) -> &Rational {
        &self.m
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &BTreeMap<CanonicalKey, Origami> {
        &self.members
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&Origami> {
        self.members.get(key)
    }

    pub fn contains_class_of(&self, o: &Origami) -> bool {
        self.members.contains_key(&o.canonical_key())
    }
}

/// Enumerates `Cov_{d,μ}`. A degree too small for `μ` gives an empty census.
pub fn enumerate(
    degree: usize,
    stratum: &StratumSignature,
    opts: &EnumerateOptions,
) -> Result<Census, CensusError> {
    let mut members = BTreeMap::new();
    let Some(target) = stratum.commutator_class(degree) else {
        return Ok(Census::from_members(degree, stratum.clone(), members));
    };
    let pool = opts.pool()?;
    let total = perm::factorial(degree);
    let chunk = opts.chunk_size.max(1);
    let ranges: Vec<(u64, u64)> = (0..total.div_ceil(chunk))
        .map(|k| (k * chunk, ((k + 1) * chunk).min(total)))
        .collect();

    pool.install(|| -> Result<(), CensusError> {
        for alpha_type in CycleType::all(degree) {
            let alpha = alpha_type.class_representative();
            let betas: Vec<Permutation> = ranges
                .par_iter()
                .flat_map_iter(|&(lo, hi)| admissible_betas(&alpha, &target, lo, hi))
                .collect();
            opts.check_budget(betas.len() + members.len())?;

            let reps = centralizer_orbit_representatives(&alpha, &betas);
            let found: Vec<(CanonicalKey, Origami)> = reps
                .into_par_iter()
                .map(|beta| {
                    let o = Origami::new(alpha.clone(), beta).expect("filtered pair is valid");
                    assert_eq!(o.commutator_type(), &target);
                    o.canonical_form()
                })
                .collect();
            for (key, o) in found {
                let previous = members.insert(key, o);
                assert!(
                    previous.is_none(),
                    "two centralizer orbits share a canonical key"
                );
            }
            opts.check_budget(members.len())?;
        }
        Ok(())
    })?;
    Ok(Census::from_members(degree, stratum.clone(), members))
}

/// `β`s of lexicographic rank in `lo..hi` such that `(α, β)` is transitive
/// with commutator of cycle type `target`.
fn admissible_betas(alpha: &Permutation, target: &CycleType, lo: u64, hi: u64) -> Vec<Permutation> {
    let d = alpha.degree();
    let a = alpha.table();
    let a_inv = alpha.inverse();
    let a_inv = a_inv.table();
    let target = target.parts();
    let mut beta = perm::unrank_lex(d, lo);
    let mut b_inv = vec![0u8; d];
    let mut comm = vec![0u8; d];
    let mut lens = Vec::with_capacity(d);
    let mut seen = vec![false; d];
    let mut stack = Vec::with_capacity(d);
    let mut out = Vec::new();
    for rank in lo..hi {
        if rank > lo {
            perm::next_permutation(&mut beta);
        }
        for (i, &x) in beta.iter().enumerate() {
            b_inv[x as usize] = i as u8;
        }
        for i in 0..d {
            comm[i] = b_inv[a_inv[beta[a[i] as usize] as usize] as usize];
        }
        // cycle type of the commutator
        lens.clear();
        seen.iter_mut().for_each(|s| *s = false);
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = comm[x] as usize;
                len += 1;
            }
            lens.push(len);
        }
        if lens.len() != target.len() {
            continue;
        }
        lens.sort_unstable_by(|x, y| y.cmp(x));
        if lens != target {
            continue;
        }
        // transitivity of <α, β>
        seen.iter_mut().for_each(|s| *s = false);
        seen[0] = true;
        stack.clear();
        stack.push(0usize);
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for y in [a[x] as usize, beta[x] as usize] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        if reached == d {
            out.push(Permutation::from_table_unchecked(beta.clone()));
        }
    }
    out
}

/// First element (in the given order) of every orbit of the centralizer of
/// `α` acting on `betas` by conjugation.
fn centralizer_orbit_representatives(
    alpha: &Permutation,
    betas: &[Permutation],
) -> Vec<Permutation> {
    let gens = centralizer_generators(alpha);
    let mut visited: HashSet<Permutation> = HashSet::with_capacity(betas.len());
    let mut reps = Vec::new();
    let mut stack = Vec::new();
    for beta in betas {
        if visited.contains(beta) {
            continue;
        }
        reps.push(beta.clone());
        visited.insert(beta.clone());
        stack.push(beta.clone());
        while let Some(b) = stack.pop() {
            for z in &gens {
                let c = b.conjugate_by(z).expect("equal degrees");
                if visited.insert(c.clone()) {
                    stack.push(c);
                }
            }
        }
    }
    reps
}

/// Test oracle: every pair of `S_d × S_d`, filtered and deduplicated by
/// canonical key. Refuses `d > 6` unless `allow_large` is set.
pub fn brute_force_census(
    degree: usize,
    stratum: &StratumSignature,
    allow_large: bool,
) -> Result<Census, CensusError> {
    if degree > BRUTE_FORCE_MAX_DEGREE && !allow_large {
        return Err(CensusError::GuardExceeded(degree));
    }
    let mut members = BTreeMap::new();
    let Some(target) = stratum.commutator_class(degree) else {
        return Ok(Census::from_members(degree, stratum.clone(), members));
    };
    let all: Vec<Permutation> = perm::symmetric_group(degree).collect();
    for alpha in &all {
        for beta in &all {
            let Ok(o) = Origami::new(alpha.clone(), beta.clone()) else {
                continue;
            };
            if o.commutator_type() != &target {
                continue;
            }
            let key = o.canonical_key();
            if !members.contains_key(&key) {
                let (key, rep) = o.canonical_form();
                members.insert(key, rep);
            }
        }
    }
    Ok(Census::from_members(degree, stratum.clone(), members))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    schema: u32,
    degree: usize,
    mu: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Trailer {
    n: usize,
    m: Rational,
}

/// Writes the JSON-lines cache format: header, one record per class in key
/// order, trailer with `N` and `M`.
pub fn write_census<W: Write>(c: &Census, mut w: W) -> Result<(), CensusError> {
    let header = Header {
        schema: SCHEMA_VERSION,
        degree: c.degree,
        mu: c.stratum.mu().to_vec(),
    };
    writeln!(
        w,
        "{}",
        serde_json::to_string(&header).expect("serializable")
    )?;
    for o in c.members.values() {
        writeln!(
            w,
            "{}",
            serde_json::to_string(&o.to_record()).expect("serializable")
        )?;
    }
    let trailer = Trailer {
        n: c.n(),
        m: c.m.clone(),
    };
    writeln!(
        w,
        "{}",
        serde_json::to_string(&trailer).expect("serializable")
    )?;
    w.flush()?;
    Ok(())
}

pub fn read_census<R: BufRead>(r: R) -> Result<Census, CensusError> {
    let mut lines = r.lines();
    let first = lines
        .next()
        .ok_or_else(|| CensusError::Corrupt("empty file".into()))??;
    let value: serde_json::Value =
        serde_json::from_str(&first).map_err(|e| CensusError::Corrupt(format!("header: {e}")))?;
    let found = value
        .get("schema")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| CensusError::Schema("header has no schema version".into()))?;
    if found != SCHEMA_VERSION as u64 {
        return Err(CensusError::VersionMismatch { found });
    }
    let header: Header =
        serde_json::from_value(value).map_err(|e| CensusError::Schema(format!("header: {e}")))?;
    let stratum = StratumSignature::new(header.mu.clone())
        .map_err(|e| CensusError::Schema(format!("header: {e}")))?;

    let mut members = BTreeMap::new();
    let mut trailer: Option<Trailer> = None;
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let at = lineno + 2;
        if trailer.is_some() {
            return Err(CensusError::Corrupt(format!(
                "line {at}: data after trailer"
            )));
        }
        let value: serde_json::Value = serde_json::from_str(&line)
            .map_err(|e| CensusError::Corrupt(format!("line {at}: {e}")))?;
        if value.get("n").is_some() {
            let t: Trailer = serde_json::from_value(value)
                .map_err(|e| CensusError::Schema(format!("line {at}: trailer: {e}")))?;
            trailer = Some(t);
            continue;
        }
        let record: OrigamiRecord = serde_json::from_value(value)
            .map_err(|e| CensusError::Schema(format!("line {at}: {e}")))?;
        if record.degree != header.degree {
            return Err(CensusError::Schema(format!(
                "line {at}: degree {}",
                record.degree
            )));
        }
        let o = Origami::from_record(&record)
            .map_err(|e| CensusError::Schema(format!("line {at}: {e}")))?;
        if o.stratum() != &stratum {
            return Err(CensusError::Schema(format!(
                "line {at}: stratum {}",
                o.stratum()
            )));
        }
        let (key, rep) = o.canonical_form();
        if rep != o {
            return Err(CensusError::Schema(format!(
                "line {at}: not a canonical representative"
            )));
        }
        if members.keys().next_back().is_some_and(|last| *last >= key) {
            return Err(CensusError::Schema(format!(
                "line {at}: records out of key order"
            )));
        }
        members.insert(key, o);
    }
    let trailer =
        trailer.ok_or_else(|| CensusError::Corrupt("missing trailer (truncated file)".into()))?;
    let census = Census::from_members(header.degree, stratum, members);
    if trailer.n != census.n() || trailer.m != census.m {
        return Err(CensusError::Corrupt(format!(
            "trailer says N={} M={}, records give N={} M={}",
            trailer.n,
            trailer.m,
            census.n(),
            census.m
        )));
    }
    Ok(census)
}

pub fn save_census(c: &Census, path: &Path) -> Result<(), CensusError> {
    let file = fs::File::create(path)?;
    write_census(c, BufWriter::new(file))
}

pub fn load_census(path: &Path) -> Result<Census, CensusError> {
    read_census(BufReader::new(fs::File::open(path)?))
}
