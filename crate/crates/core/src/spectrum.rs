//! Witness graphs for every total chord length between the two extremes.
//!
//! The re-anchoring walk turns the shell graph into the greedy graph one flip
//! at a time. The shell is a fan at vertex 0 over the whole polygon. At each
//! stage the current anchor `a` has a fan over the untriangulated remainder
//! `R`; the chord from `a` to the vertex two steps ahead on `R` is frozen as
//! permanent (it is a chord of the greedy graph), the skipped vertex leaves
//! `R`, and every other fan chord at `a` is flipped, nearest first, onto the
//! far endpoint `b` of the frozen chord. Flipping `(a, p_i)` yields
//! `(b, p_{i+1})` where `p` lists `R` clockwise from `a`, so after the stage
//! `b` carries the fan and becomes the anchor.
//!
//! Walk values can jump by more than one. Targets the walk skips come from a
//! ladder built order by order: every value of order `m` keeps one graph, and
//! subdividing it at each cycle edge raises the value by two plus that edge's
//! layer count (three halves when a diameter is present). Together with the
//! walk of order `m + 1` this fills the next level. The flip path from the
//! shell to a ladder graph is the reverse of the flips that grow vertex 0 into
//! a full fan. A bounded best-first flip search from the nearest walk graph is
//! kept as a last resort, and every result is certified by recomputing the
//! chord length.

use std::cmp::Reverse;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BinaryHeap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use thiserror::Error;

use crate::builders::{build_shell, max_tcl, min_tcl};
use crate::graph::{Chord, MopError, MopGraph};
use crate::value::TclValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("order {n} is below the minimum {min}")]
    InvalidOrder { n: usize, min: usize },
    #[error("target {target} is outside [{min}, {max}] for order {n}")]
    OutOfRange {
        n: usize,
        target: TclValue,
        min: TclValue,
        max: TclValue,
    },
    #[error("no graph of order {n} with TCL {target} found after {explored} states (closest {closest})")]
    SearchExhausted {
        n: usize,
        target: TclValue,
        explored: usize,
        closest: TclValue,
    },
    #[error("re-anchoring step {step} is not a flip: {detail}")]
    WalkStuck { step: usize, detail: String },
    #[error("move replay failed: {0}")]
    Replay(#[from] MopError),
}

/// One chord replacement of the re-anchoring walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReanchorStep {
    pub removed: Chord,
    pub added: Chord,
    pub anchor_before: usize,
    pub anchor_after: usize,
    pub tcl_after: TclValue,
    /// Set on the first step of a stage: the chord frozen for the next stage.
    pub permanent_added: Option<Chord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReanchorWalk {
    pub n: usize,
    pub steps: Vec<ReanchorStep>,
    /// Permanent chords in the order they were frozen.
    pub permanent: Vec<Chord>,
}

impl ReanchorWalk {
    /// Total chord length before any step, then after each step.
    pub fn tcls(&self) -> Vec<TclValue> {
        std::iter::once(max_tcl(self.n))
            .chain(self.steps.iter().map(|s| s.tcl_after))
            .collect()
    }

    /// Every graph of the walk with its total chord length, starting with the
    /// shell.
    pub fn graphs(&self) -> Vec<(MopGraph, TclValue)> {
        let mut g = build_shell(self.n);
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push((g.clone(), g.tcl()));
        for step in &self.steps {
            g = g.replace_chord(step.removed, step.added);
            out.push((g.clone(), step.tcl_after));
        }
        out
    }

    pub fn final_graph(&self) -> MopGraph {
        self.steps
            .iter()
            .fold(build_shell(self.n), |g, s| g.replace_chord(s.removed, s.added))
    }
}

/// The re-anchoring walk from the shell, stopped at the first graph whose
/// total chord length is the minimum for its order.
pub fn reanchor_walk(n: usize) -> Result<ReanchorWalk, SpectrumError> {
    walk(n, true)
}

/// The re-anchoring walk run to completion; it ends at the greedy graph.
pub fn full_reanchor_walk(n: usize) -> Result<ReanchorWalk, SpectrumError> {
    walk(n, false)
}

fn walk(n: usize, stop_at_min: bool) -> Result<ReanchorWalk, SpectrumError> {
    if n < 5 {
        return Err(SpectrumError::InvalidOrder { n, min: 5 });
    }
    let target = min_tcl(n);
    let mut graph = build_shell(n);
    let mut tcl = graph.tcl();
    let mut steps = Vec::new();
    let mut permanent = Vec::new();
    if stop_at_min && tcl == target {
        return Ok(ReanchorWalk { n, steps, permanent });
    }
    // remainder polygon as a clockwise successor list
    let mut next: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
    let mut remaining = n;
    let mut anchor = 0;
    while remaining > 3 {
        let skipped = next[anchor];
        let far = next[skipped];
        let frozen = Chord::new(anchor, far);
        if !graph.contains_chord(frozen) {
            return Err(SpectrumError::WalkStuck {
                step: steps.len(),
                detail: format!("chord {frozen} to be frozen is missing from {graph}"),
            });
        }
        if permanent.last() != Some(&frozen) {
            permanent.push(frozen);
        }
        next[anchor] = far;
        remaining -= 1;
        let new_anchor = far;
        // p lists the remainder clockwise from the old anchor
        let mut p = Vec::with_capacity(remaining);
        let mut v = anchor;
        for _ in 0..remaining {
            p.push(v);
            v = next[v];
        }
        for i in 2..remaining.saturating_sub(1) {
            let removed = Chord::new(anchor, p[i]);
            let added = Chord::new(new_anchor, p[(i + 1) % remaining]);
            let partner = graph.flip_partner(removed).map_err(|e| SpectrumError::WalkStuck {
                step: steps.len(),
                detail: e.to_string(),
            })?;
            if partner != added {
                return Err(SpectrumError::WalkStuck {
                    step: steps.len(),
                    detail: format!("flipping {removed} gives {partner}, schedule expects {added}"),
                });
            }
            if permanent.contains(&removed) {
                return Err(SpectrumError::WalkStuck {
                    step: steps.len(),
                    detail: format!("schedule removes permanent chord {removed}"),
                });
            }
            tcl = TclValue(tcl.get() + graph.chord_length(added) as u64 - graph.chord_length(removed) as u64);
            graph = graph.replace_chord(removed, added);
            let permanent_added = (i == 2).then(|| {
                permanent.push(added);
                added
            });
            steps.push(ReanchorStep {
                removed,
                added,
                anchor_before: anchor,
                anchor_after: new_anchor,
                tcl_after: tcl,
                permanent_added,
            });
            if stop_at_min && tcl == target {
                return Ok(ReanchorWalk { n, steps, permanent });
            }
        }
        anchor = new_anchor;
    }
    Ok(ReanchorWalk { n, steps, permanent })
}

/// A move applied on the way from the shell graph to a witness. Both kinds
/// are diagonal flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Reanchor(ReanchorStep),
    Flip { removed: Chord, added: Chord },
}

impl Move {
    pub fn removed(&self) -> Chord {
        match self {
            Move::Reanchor(step) => step.removed,
            Move::Flip { removed, .. } => *removed,
        }
    }

    pub fn added(&self) -> Chord {
        match self {
            Move::Reanchor(step) => step.added,
            Move::Flip { added, .. } => *added,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub graph: MopGraph,
    pub target: TclValue,
    /// Moves from the shell graph of the same order to `graph`.
    pub moves: Vec<Move>,
    /// The total chord length recomputed from scratch equals `target`.
    pub certified: bool,
}

impl WitnessReport {
    /// Applies the moves to the shell graph, checking each one is a flip.
    pub fn replay(&self) -> Result<MopGraph, SpectrumError> {
        let mut g = build_shell(self.graph.n());
        for (i, mv) in self.moves.iter().enumerate() {
            let partner = g.flip_partner(mv.removed())?;
            if partner != mv.added() {
                return Err(SpectrumError::WalkStuck {
                    step: i,
                    detail: format!("move {i} expects {} but the flip gives {partner}", mv.added()),
                });
            }
            g = g.replace_chord(mv.removed(), partner);
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of flips away from the starting walk graph. `None`
    /// means the order of the graph.
    pub depth: Option<usize>,
    /// Maximum number of states generated by one search.
    pub frontier: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth: None,
            frontier: 100_000,
        }
    }
}

const CHECKPOINT_EVERY: usize = 64;

/// Answers witness queries for one order, reusing a single walk.
#[derive(Debug, Clone)]
pub struct WitnessFinder {
    n: usize,
    config: SearchConfig,
    walk: ReanchorWalk,
    tcls: Vec<TclValue>,
    checkpoints: Vec<MopGraph>,
    ladder: OnceLock<Result<BTreeMap<TclValue, MopGraph>, SpectrumError>>,
}

impl WitnessFinder {
    pub fn new(n: usize, config: SearchConfig) -> Result<WitnessFinder, SpectrumError> {
        let walk = reanchor_walk(n)?;
        let tcls = walk.tcls();
        let mut checkpoints = Vec::with_capacity(walk.steps.len() / CHECKPOINT_EVERY + 1);
        let mut g = build_shell(n);
        for (i, step) in walk.steps.iter().enumerate() {
            if i % CHECKPOINT_EVERY == 0 {
                checkpoints.push(g.clone());
            }
            g = g.replace_chord(step.removed, step.added);
        }
        if walk.steps.len() % CHECKPOINT_EVERY == 0 {
            checkpoints.push(g);
        }
        Ok(WitnessFinder {
            n,
            config,
            walk,
            tcls,
            checkpoints,
            ladder: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn walk(&self) -> &ReanchorWalk {
        &self.walk
    }

    /// The walk graph after `index` steps.
    fn walk_graph(&self, index: usize) -> MopGraph {
        let base = index / CHECKPOINT_EVERY;
        self.walk.steps[base * CHECKPOINT_EVERY..index]
            .iter()
            .fold(self.checkpoints[base].clone(), |g, s| {
                g.replace_chord(s.removed, s.added)
            })
    }

    pub fn find(&self, target: TclValue) -> Result<WitnessReport, SpectrumError> {
        let (min, max) = (min_tcl(self.n), max_tcl(self.n));
        if target < min || target > max {
            return Err(SpectrumError::OutOfRange {
                n: self.n,
                target,
                min,
                max,
            });
        }
        if let Some(hit) = self.tcls.iter().position(|&t| t == target) {
            let moves = self.walk.steps[..hit].iter().copied().map(Move::Reanchor).collect();
            return Ok(certify(self.walk_graph(hit), target, moves));
        }
        let ladder = self
            .ladder
            .get_or_init(|| ladder(self.n))
            .as_ref()
            .map_err(Clone::clone)?;
        if let Some(graph) = ladder.get(&target) {
            let moves = path_from_shell(graph)?;
            return Ok(certify(graph.clone(), target, moves));
        }
        let start = self
            .tcls
            .iter()
            .enumerate()
            .min_by_key(|&(i, t)| (t.abs_diff(target), i))
            .expect("walk is nonempty")
            .0;
        let mut moves: Vec<Move> = self.walk.steps[..start].iter().copied().map(Move::Reanchor).collect();
        let (graph, flips) = self.search(self.walk_graph(start), target)?;
        moves.extend(flips);
        Ok(certify(graph, target, moves))
    }

    /// Best-first flip search ordered by distance to the target, then depth,
    /// then generation order. The goal test runs as states are generated.
    fn search(&self, start: MopGraph, target: TclValue) -> Result<(MopGraph, Vec<Move>), SpectrumError> {
        struct Node {
            graph: MopGraph,
            tcl: TclValue,
            parent: Option<usize>,
            via: Option<(Chord, Chord)>,
        }

        let max_depth = self.config.depth.unwrap_or(self.n);
        let mut seen = HashSet::new();
        seen.insert(fingerprint(&start));
        let start_tcl = start.tcl();
        let mut nodes = vec![Node {
            graph: start,
            tcl: start_tcl,
            parent: None,
            via: None,
        }];
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((start_tcl.abs_diff(target), 0usize, 0usize)));
        let mut closest = start_tcl;

        while let Some(Reverse((_, depth, id))) = heap.pop() {
            if depth >= max_depth {
                continue;
            }
            let parent_tcl = nodes[id].tcl;
            let parent = nodes[id].graph.clone();
            for &chord in parent.chords() {
                let partner = parent.flip_partner(chord)?;
                let n = self.n;
                let tcl = TclValue(
                    parent_tcl.get() + crate::graph::chord_length(n, partner) as u64
                        - crate::graph::chord_length(n, chord) as u64,
                );
                let child = parent.replace_chord(chord, partner);
                if !seen.insert(fingerprint(&child)) {
                    continue;
                }
                if tcl.abs_diff(target) < closest.abs_diff(target) {
                    closest = tcl;
                }
                if tcl == target {
                    let mut flips = vec![Move::Flip {
                        removed: chord,
                        added: partner,
                    }];
                    let mut cursor = Some(id);
                    while let Some(at) = cursor {
                        if let Some((removed, added)) = nodes[at].via {
                            flips.push(Move::Flip { removed, added });
                        }
                        cursor = nodes[at].parent;
                    }
                    flips.reverse();
                    return Ok((child, flips));
                }
                if nodes.len() >= self.config.frontier {
                    return Err(SpectrumError::SearchExhausted {
                        n: self.n,
                        target,
                        explored: nodes.len(),
                        closest,
                    });
                }
                let child_id = nodes.len();
                nodes.push(Node {
                    graph: child,
                    tcl,
                    parent: Some(id),
                    via: Some((chord, partner)),
                });
                heap.push(Reverse((tcl.abs_diff(target), depth + 1, child_id)));
            }
        }
        Err(SpectrumError::SearchExhausted {
            n: self.n,
            target,
            explored: nodes.len(),
            closest,
        })
    }
}

fn certify(graph: MopGraph, target: TclValue, moves: Vec<Move>) -> WitnessReport {
    let certified = graph.tcl() == target;
    WitnessReport {
        graph,
        target,
        moves,
        certified,
    }
}

/// One graph for each value reached at order `n` by walks and subdivisions
/// starting from order 5.
fn ladder(n: usize) -> Result<BTreeMap<TclValue, MopGraph>, SpectrumError> {
    let mut level: BTreeMap<TclValue, MopGraph> = BTreeMap::new();
    for m in 5..=n {
        let mut next = BTreeMap::new();
        for (g, t) in reanchor_walk(m)?.graphs() {
            next.entry(t).or_insert(g);
        }
        for (&value, g) in &level {
            let extra = if g.has_diameter() { 3 } else { 4 };
            for (edge, layer) in g.layer_counts().into_iter().enumerate() {
                let raised = TclValue(value.get() + (extra + layer.doubled()) / 2);
                if let std::collections::btree_map::Entry::Vacant(slot) = next.entry(raised) {
                    slot.insert(g.subdivide(edge, (edge + 1) % g.n())?);
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// Flips leading from the shell to `target`: grow the fan at vertex 0 by
/// flipping the chord opposite it in some triangle, then play those flips
/// backwards.
fn path_from_shell(target: &MopGraph) -> Result<Vec<Move>, SpectrumError> {
    let mut g = target.clone();
    let mut undo = Vec::new();
    let last = target.n() - 1;
    loop {
        let touches_zero = |g: &MopGraph, x: usize| x == 1 || x == last || g.contains_chord(Chord::new(0, x));
        let blocker = g
            .chords()
            .iter()
            .copied()
            .filter(|c| !c.contains(0))
            .find(|c| touches_zero(&g, c.u()) && touches_zero(&g, c.v()));
        let Some(chord) = blocker else { break };
        let partner = g.flip_partner(chord)?;
        g = g.replace_chord(chord, partner);
        undo.push(Move::Flip {
            removed: partner,
            added: chord,
        });
    }
    undo.reverse();
    Ok(undo)
}

fn fingerprint(g: &MopGraph) -> u64 {
    let mut h = DefaultHasher::new();
    g.chords().hash(&mut h);
    h.finish()
}

/// A certified graph of order `n` whose total chord length is `target`.
pub fn find_graph_with_tcl(n: usize, target: TclValue, config: SearchConfig) -> Result<WitnessReport, SpectrumError> {
    if n < 5 {
        return Err(SpectrumError::InvalidOrder { n, min: 5 });
    }
    let (min, max) = (min_tcl(n), max_tcl(n));
    if target < min || target > max {
        return Err(SpectrumError::OutOfRange { n, target, min, max });
    }
    WitnessFinder::new(n, config)?.find(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_greedy;

    #[test]
    fn walk_twelve_runs_from_max_to_min() {
        let walk = reanchor_walk(12).unwrap();
        let tcls = walk.tcls();
        assert_eq!(tcls.first(), Some(&TclValue(34)));
        assert_eq!(tcls.last(), Some(&TclValue(24)));
        for (g, t) in walk.graphs() {
            assert!(g.is_valid());
            assert_eq!(g.tcl(), t);
        }
    }

    #[test]
    fn walk_six_reaches_minimum_in_one_flip() {
        let walk = reanchor_walk(6).unwrap();
        assert!(walk.steps.len() <= 2);
        assert_eq!(walk.steps[0].removed, Chord::new(0, 3));
        assert_eq!(walk.steps[0].added, Chord::new(2, 4));
        assert_eq!(walk.final_graph().tcl(), TclValue(6));
    }

    #[test]
    fn full_walk_ends_at_greedy_graph() {
        for n in 5..80 {
            let walk = full_reanchor_walk(n).unwrap();
            assert_eq!(walk.final_graph(), build_greedy(n).graph, "n={n}");
            assert_eq!(walk.steps.len(), (n - 4) * (n - 3) / 2);
            let mut frozen = walk.permanent.clone();
            frozen.sort_unstable();
            assert_eq!(frozen, build_greedy(n).graph.chords());
            assert_eq!(walk.permanent, build_greedy(n).chord_order);
        }
    }

    #[test]
    fn permanent_chords_persist() {
        let walk = full_reanchor_walk(12).unwrap();
        let graphs = walk.graphs();
        let mut frozen: Vec<Chord> = vec![walk.permanent[0]];
        for (step, (g, _)) in walk.steps.iter().zip(graphs.iter().skip(1)) {
            if let Some(c) = step.permanent_added {
                frozen.push(c);
            }
            for c in &frozen {
                assert!(g.contains_chord(*c), "permanent {c} lost in {g}");
            }
        }
        assert_eq!(frozen, walk.permanent);
    }

    #[test]
    fn witness_examples() {
        let cfg = SearchConfig::default();
        let w = find_graph_with_tcl(12, TclValue(29), cfg).unwrap();
        assert!(w.certified);
        assert_eq!(w.graph.tcl(), TclValue(29));
        assert_eq!(w.replay().unwrap(), w.graph);

        let w = find_graph_with_tcl(6, TclValue(7), cfg).unwrap();
        assert_eq!(w.graph, build_shell(6));
        assert!(w.moves.is_empty());

        assert_eq!(
            find_graph_with_tcl(6, TclValue(8), cfg).unwrap_err(),
            SpectrumError::OutOfRange {
                n: 6,
                target: TclValue(8),
                min: TclValue(6),
                max: TclValue(7)
            }
        );
        assert!(matches!(
            find_graph_with_tcl(4, TclValue(2), cfg),
            Err(SpectrumError::InvalidOrder { .. })
        ));
    }

    #[test]
    fn exhausted_search_is_reported() {
        let finder = WitnessFinder::new(
            30,
            SearchConfig {
                depth: Some(0),
                frontier: 10,
            },
        )
        .unwrap();
        let err = finder.search(build_shell(30), min_tcl(30)).unwrap_err();
        assert!(
            matches!(err, SpectrumError::SearchExhausted { explored: 1, .. }),
            "{err}"
        );
    }

    #[test]
    fn ladder_fills_every_value() {
        for n in 5..=40 {
            let level = ladder(n).unwrap();
            let values: Vec<u64> = level.keys().map(|t| t.get()).collect();
            let expected: Vec<u64> = (min_tcl(n).get()..=max_tcl(n).get()).collect();
            assert_eq!(values, expected, "n={n}");
            for (t, g) in &level {
                assert_eq!(g.tcl(), *t);
            }
        }
    }

    #[test]
    fn shell_path_reaches_random_graphs() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for n in [5, 9, 17, 40] {
            let g = MopGraph::random(n, &mut rng).unwrap();
            let report = certify(g.clone(), g.tcl(), path_from_shell(&g).unwrap());
            assert!(report.moves.len() <= n - 3);
            assert_eq!(report.replay().unwrap(), g);
        }
    }
}
