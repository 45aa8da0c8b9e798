//! Exhaustive enumeration of the labeled triangulations of the n-gon, and the
//! brute-force checks built on it.
//!
//! Triangulations are generated by the usual recursion: the root edge
//! `(0, n-1)` picks the apex of its triangle, and each resulting sub-polygon
//! is triangulated the same way. The choice of root apex splits the whole
//! space into `n - 2` independent shards, which is how the parallel driver
//! divides work. Visit order inside a shard is fixed, and shards are merged in
//! apex order, so every result here is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use rayon::prelude::*;
use thiserror::Error;

use crate::builders::{max_tcl, min_tcl, theta};
use crate::graph::{Chord, MopGraph};
use crate::value::{HalfInt, TclValue};

pub const DEFAULT_ENUM_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    /// Largest order that may be enumerated.
    pub cap: usize,
    /// Run shards on the rayon pool instead of serially.
    pub parallel: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            cap: DEFAULT_ENUM_CAP,
            parallel: false,
        }
    }
}

impl EnumConfig {
    pub fn with_cap(cap: usize) -> Self {
        EnumConfig { cap, ..Self::default() }
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    fn check(&self, n: usize) -> Result<(), EnumError> {
        if n < 3 {
            return Err(EnumError::InvalidOrder { n, min: 3 });
        }
        if n > self.cap {
            return Err(EnumError::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("order {n} exceeds the enumeration cap {cap}; raise the cap explicitly")]
    CapExceeded { n: usize, cap: usize },
    #[error("order {n} is below the minimum {min}")]
    InvalidOrder { n: usize, min: usize },
    #[error("theta(k) is only checked for k >= 1, got {0}")]
    InvalidTheta(u32),
    #[error("verification failed at n={n}: {claim}")]
    VerificationFailure {
        n: usize,
        claim: String,
        counterexample: Option<MopGraph>,
    },
}

/// Aggregate data from one enumeration (or one shard of it).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumStats {
    pub n: usize,
    pub count: u64,
    pub tcl_histogram: BTreeMap<TclValue, u64>,
    /// Ear counts observed at each total chord length.
    pub ears_by_tcl: BTreeMap<TclValue, BTreeSet<usize>>,
    /// Smallest and largest value of the per-graph maximum layer count.
    pub min_max_layer: Option<HalfInt>,
    pub max_max_layer: Option<HalfInt>,
    /// First graphs in visit order attaining the extremes above.
    pub min_witness: Option<MopGraph>,
    pub max_witness: Option<MopGraph>,
    pub min_layer_witness: Option<MopGraph>,
}

impl EnumStats {
    pub fn new(n: usize) -> Self {
        EnumStats {
            n,
            count: 0,
            tcl_histogram: BTreeMap::new(),
            ears_by_tcl: BTreeMap::new(),
            min_max_layer: None,
            max_max_layer: None,
            min_witness: None,
            max_witness: None,
            min_layer_witness: None,
        }
    }

    pub fn min_seen(&self) -> Option<TclValue> {
        self.tcl_histogram.keys().next().copied()
    }

    pub fn max_seen(&self) -> Option<TclValue> {
        self.tcl_histogram.keys().next_back().copied()
    }

    /// Ear counts among the graphs of largest total chord length.
    pub fn ears_at_max(&self) -> BTreeSet<usize> {
        self.max_seen()
            .and_then(|m| self.ears_by_tcl.get(&m).cloned())
            .unwrap_or_default()
    }

    fn record(&mut self, g: &MopGraph, layer_buf: &mut [i64]) {
        let tcl = g.tcl();
        let ears = g.count_ears();
        let layer = g.max_layer_with(layer_buf);
        if self.min_seen().is_none_or(|m| tcl < m) {
            self.min_witness = Some(g.clone());
        }
        if self.max_seen().is_none_or(|m| tcl > m) {
            self.max_witness = Some(g.clone());
        }
        if self.min_max_layer.is_none_or(|m| layer < m) {
            self.min_max_layer = Some(layer);
            self.min_layer_witness = Some(g.clone());
        }
        if self.max_max_layer.is_none_or(|m| layer > m) {
            self.max_max_layer = Some(layer);
        }
        self.count += 1;
        *self.tcl_histogram.entry(tcl).or_insert(0) += 1;
        let ear_set = self.ears_by_tcl.entry(tcl).or_default();
        if !ear_set.contains(&ears) {
            ear_set.insert(ears);
        }
    }

    /// Combines stats of a later shard into an earlier one. Associative; ties
    /// keep the earlier witness so merged results match a serial run.
    pub fn merge(mut self, other: EnumStats) -> EnumStats {
        assert_eq!(self.n, other.n, "merging stats of different orders");
        let take_min = match (self.min_seen(), other.min_seen()) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(a), Some(b)) => b < a,
        };
        let take_max = match (self.max_seen(), other.max_seen()) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(a), Some(b)) => b > a,
        };
        if take_min {
            self.min_witness = other.min_witness;
        }
        if take_max {
            self.max_witness = other.max_witness;
        }
        if let Some(b) = other.min_max_layer {
            if self.min_max_layer.is_none_or(|a| b < a) {
                self.min_max_layer = Some(b);
                self.min_layer_witness = other.min_layer_witness;
            }
        }
        if let Some(b) = other.max_max_layer {
            if self.max_max_layer.is_none_or(|a| b > a) {
                self.max_max_layer = Some(b);
            }
        }
        self.count += other.count;
        for (tcl, c) in other.tcl_histogram {
            *self.tcl_histogram.entry(tcl).or_insert(0) += c;
        }
        for (tcl, ears) in other.ears_by_tcl {
            self.ears_by_tcl.entry(tcl).or_default().extend(ears);
        }
        self
    }
}

/// Number of shards for order `n`: one per apex of the root triangle.
pub fn shard_count(n: usize) -> usize {
    n.saturating_sub(2)
}

struct Walker<'v, F> {
    chords: Vec<Chord>,
    pending: Vec<(usize, usize)>,
    scratch: MopGraph,
    visit: &'v mut F,
}

impl<F> Walker<'_, F>
where
    F: FnMut(&MopGraph) -> ControlFlow<()>,
{
    fn run(&mut self) -> ControlFlow<()> {
        let Some((i, j)) = self.pending.pop() else {
            self.scratch.refill_from(&self.chords);
            return (self.visit)(&self.scratch);
        };
        for apex in i + 1..j {
            let flow = self.with_apex(i, j, apex);
            if flow.is_break() {
                self.pending.push((i, j));
                return flow;
            }
        }
        self.pending.push((i, j));
        ControlFlow::Continue(())
    }

    fn with_apex(&mut self, i: usize, j: usize, apex: usize) -> ControlFlow<()> {
        let mark_chords = self.chords.len();
        let mark_pending = self.pending.len();
        if apex - i >= 2 {
            self.chords.push(Chord::new(i, apex));
            self.pending.push((i, apex));
        }
        if j - apex >= 2 {
            self.chords.push(Chord::new(apex, j));
            self.pending.push((apex, j));
        }
        let flow = self.run();
        self.chords.truncate(mark_chords);
        self.pending.truncate(mark_pending);
        flow
    }
}

/// Visits every triangulation of shard `shard` (root apex `shard + 1`).
fn walk_shard<F>(n: usize, shard: usize, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&MopGraph) -> ControlFlow<()>,
{
    let mut walker = Walker {
        chords: Vec::with_capacity(n - 3),
        pending: Vec::with_capacity(n),
        scratch: MopGraph::empty_scratch(n),
        visit,
    };
    walker.with_apex(0, n - 1, shard + 1)
}

fn walk_all<F>(n: usize, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&MopGraph) -> ControlFlow<()>,
{
    for shard in 0..shard_count(n) {
        walk_shard(n, shard, visit)?;
    }
    ControlFlow::Continue(())
}

/// Visits one shard serially and returns its stats.
pub fn enumerate_shard<F>(n: usize, shard: usize, config: &EnumConfig, mut visitor: F) -> Result<EnumStats, EnumError>
where
    F: FnMut(&MopGraph),
{
    config.check(n)?;
    assert!(shard < shard_count(n), "shard {shard} out of range for n={n}");
    let mut stats = EnumStats::new(n);
    let mut buf = vec![0i64; n + 1];
    let _ = walk_shard(n, shard, &mut |g: &MopGraph| {
        stats.record(g, &mut buf);
        visitor(g);
        ControlFlow::Continue(())
    });
    Ok(stats)
}

/// Visits every labeled triangulation of the `n`-gon exactly once, serially
/// and in a fixed order.
pub fn enumerate_all<F>(n: usize, config: &EnumConfig, mut visitor: F) -> Result<EnumStats, EnumError>
where
    F: FnMut(&MopGraph),
{
    config.check(n)?;
    let mut stats = EnumStats::new(n);
    for shard in 0..shard_count(n) {
        stats = stats.merge(enumerate_shard(n, shard, config, &mut visitor)?);
    }
    Ok(stats)
}

/// Like [`enumerate_all`] but runs the shards on the current rayon pool. The
/// visitor may be called from several threads at once; the returned stats
/// equal the serial result.
pub fn enumerate_all_parallel<F>(n: usize, config: &EnumConfig, visitor: F) -> Result<EnumStats, EnumError>
where
    F: Fn(&MopGraph) + Sync,
{
    config.check(n)?;
    let parts: Vec<Result<EnumStats, EnumError>> = (0..shard_count(n))
        .into_par_iter()
        .map(|shard| enumerate_shard(n, shard, config, &visitor))
        .collect();
    parts
        .into_iter()
        .try_fold(EnumStats::new(n), |acc, part| Ok(acc.merge(part?)))
}

/// Stats only, serial or parallel according to `config`.
pub fn enumerate_stats(n: usize, config: &EnumConfig) -> Result<EnumStats, EnumError> {
    if config.parallel {
        enumerate_all_parallel(n, config, |_| {})
    } else {
        enumerate_all(n, config, |_| {})
    }
}

/// First graph in visit order satisfying `pred`, and how many graphs were
/// visited before stopping (all of them when there is no match).
pub fn find_first<P>(n: usize, config: &EnumConfig, mut pred: P) -> Result<(Option<MopGraph>, u64), EnumError>
where
    P: FnMut(&MopGraph) -> bool,
{
    config.check(n)?;
    let mut found = None;
    let mut visited = 0u64;
    let _ = walk_all(n, &mut |g: &MopGraph| {
        visited += 1;
        if pred(g) {
            found = Some(g.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok((found, visited))
}

/// The exact set of total chord lengths realized at order `n`.
pub fn spectrum_by_enumeration(n: usize, config: &EnumConfig) -> Result<BTreeSet<TclValue>, EnumError> {
    Ok(enumerate_stats(n, config)?.tcl_histogram.into_keys().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremesReport {
    pub n: usize,
    pub count: u64,
    pub min: TclValue,
    pub max: TclValue,
    pub min_witness: MopGraph,
    pub max_witness: MopGraph,
}

/// Checks the enumerated minimum and maximum against the closed forms.
pub fn verify_extremes(n: usize, config: &EnumConfig) -> Result<ExtremesReport, EnumError> {
    let stats = enumerate_stats(n, config)?;
    let (min, max) = (stats.min_seen().expect("nonempty"), stats.max_seen().expect("nonempty"));
    let min_witness = stats.min_witness.expect("nonempty");
    let max_witness = stats.max_witness.expect("nonempty");
    if min != min_tcl(n) {
        return Err(EnumError::VerificationFailure {
            n,
            claim: format!("enumerated minimum {min} differs from formula {}", min_tcl(n)),
            counterexample: Some(min_witness),
        });
    }
    if max != max_tcl(n) {
        return Err(EnumError::VerificationFailure {
            n,
            claim: format!("enumerated maximum {max} differs from formula {}", max_tcl(n)),
            counterexample: Some(max_witness),
        });
    }
    Ok(ExtremesReport {
        n,
        count: stats.count,
        min,
        max,
        min_witness,
        max_witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EarsReport {
    pub n: usize,
    pub count: u64,
    pub max: TclValue,
    /// Graphs attaining the maximum, which are exactly the two-ear graphs.
    pub maximal_graphs: u64,
}

/// Checks that a graph has maximal total chord length exactly when it has two
/// ears.
pub fn verify_two_ears_characterization(n: usize, config: &EnumConfig) -> Result<EarsReport, EnumError> {
    if n < 5 {
        return Err(EnumError::InvalidOrder { n, min: 5 });
    }
    let stats = enumerate_stats(n, config)?;
    let max = stats.max_seen().expect("nonempty");
    let holds = stats.ears_by_tcl.iter().all(|(&tcl, ears)| {
        if tcl == max {
            ears.len() == 1 && ears.contains(&2)
        } else {
            !ears.contains(&2)
        }
    });
    if !holds {
        let (counterexample, _) = find_first(n, config, |g| (g.tcl() == max) != (g.count_ears() == 2))?;
        return Err(EnumError::VerificationFailure {
            n,
            claim: format!("maximal TCL {max} is not equivalent to having exactly two ears"),
            counterexample,
        });
    }
    Ok(EarsReport {
        n,
        count: stats.count,
        max,
        maximal_graphs: stats.tcl_histogram[&max],
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaReport {
    pub k: u32,
    /// Largest checked order with a graph whose layer counts are all `<= k`.
    pub theta: usize,
    pub witness: MopGraph,
    /// The order `theta(k) + 1`, exhausted without a witness.
    pub refuted_order: usize,
    pub refuted_count: u64,
}

/// Finds, for every order up to `3·2^k + 1`, whether some graph keeps every
/// layer count at most `k`, and checks that the largest such order is `3·2^k`.
///
/// Orders above `3·2^k + 1` are not examined.
pub fn verify_theta(k: u32, config: &EnumConfig) -> Result<ThetaReport, EnumError> {
    if k == 0 {
        return Err(EnumError::InvalidTheta(k));
    }
    let expected = theta(k);
    let refuted_order = expected + 1;
    config.check(refuted_order)?;
    let bound = HalfInt::from_int(k as u64);
    let mut largest = None;
    let mut refuted_count = 0;
    for n in 3..=refuted_order {
        let (found, visited) = find_first(n, config, |g| g.max_layer() <= bound)?;
        if let Some(g) = found {
            largest = Some((n, g));
        } else if n == refuted_order {
            refuted_count = visited;
        }
    }
    let (theta_found, witness) = largest.expect("the triangle always qualifies");
    if theta_found != expected {
        return Err(EnumError::VerificationFailure {
            n: theta_found,
            claim: format!("largest order with all layer counts <= {k} is {theta_found}, expected {expected}"),
            counterexample: Some(witness),
        });
    }
    Ok(ThetaReport {
        k,
        theta: theta_found,
        witness,
        refuted_order,
        refuted_count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub n: usize,
    pub min: TclValue,
    pub max: TclValue,
    pub values: BTreeSet<TclValue>,
}

/// Checks that the realized values are exactly the integers from the formula
/// minimum to the formula maximum.
pub fn verify_spectrum(n: usize, config: &EnumConfig) -> Result<SpectrumReport, EnumError> {
    let values = spectrum_by_enumeration(n, config)?;
    let (min, max) = (min_tcl(n), max_tcl(n));
    let expected: BTreeSet<TclValue> = (min.get()..=max.get()).map(TclValue).collect();
    if values != expected {
        let missing: Vec<String> = expected.difference(&values).map(|v| v.to_string()).collect();
        let extra: Vec<String> = values.difference(&expected).map(|v| v.to_string()).collect();
        return Err(EnumError::VerificationFailure {
            n,
            claim: format!(
                "spectrum mismatch: missing {{{}}}, unexpected {{{}}}",
                missing.join(","),
                extra.join(",")
            ),
            counterexample: None,
        });
    }
    Ok(SpectrumReport { n, min, max, values })
}
