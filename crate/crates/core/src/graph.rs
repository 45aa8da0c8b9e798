//! Maximal outerplanar graphs drawn as an n-cycle plus a triangulation of its
//! interior.
//!
//! Vertices are `0..n` in clockwise order along the bounding cycle, and cycle
//! edge `i` joins `i` and `(i + 1) % n`. A graph is stored as its order plus
//! the sorted list of chords; two graphs are equal exactly when their chord
//! sets are.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::value::{HalfInt, TclValue};

/// Why a vertex pair was rejected as a chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordDefect {
    /// An endpoint is not a vertex of the graph.
    OutOfRange,
    /// Cyclic distance below 2: a loop or a cycle edge.
    TooShort,
    /// The chord appears more than once.
    Duplicate,
}

impl fmt::Display for ChordDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChordDefect::OutOfRange => "endpoint out of range",
            ChordDefect::TooShort => "cyclic distance below 2",
            ChordDefect::Duplicate => "duplicate chord",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MopError {
    #[error("order {n} is below the minimum {min}")]
    InvalidOrder { n: usize, min: usize },
    #[error("expected {expected} chords for this order, found {found}")]
    ChordCountMismatch { expected: usize, found: usize },
    #[error("chords {first} and {second} cross")]
    CrossingChords { first: Chord, second: Chord },
    #[error("invalid chord ({u},{v}): {defect}")]
    InvalidChord { u: usize, v: usize, defect: ChordDefect },
    #[error("({a},{b}) is not an edge of the bounding cycle")]
    NotACycleEdge { a: usize, b: usize },
    #[error("vertex {vertex} is not an ear tip (degree {degree})")]
    NotAnEar { vertex: usize, degree: usize },
    #[error("{0} is not a chord of the graph")]
    NotAChord(Chord),
}

/// An unordered vertex pair, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chord {
    u: u32,
    v: u32,
}

impl Chord {
    /// Normalizes the pair. Panics if `a == b`.
    pub fn new(a: usize, b: usize) -> Chord {
        assert_ne!(a, b, "a chord needs two distinct endpoints");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Chord {
            u: u as u32,
            v: v as u32,
        }
    }

    pub fn u(self) -> usize {
        self.u as usize
    }

    pub fn v(self) -> usize {
        self.v as usize
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.u(), self.v())
    }

    pub fn contains(self, x: usize) -> bool {
        self.u() == x || self.v() == x
    }

    /// The endpoint other than `x`, if `x` is an endpoint.
    pub fn other(self, x: usize) -> Option<usize> {
        if self.u() == x {
            Some(self.v())
        } else if self.v() == x {
            Some(self.u())
        } else {
            None
        }
    }

    /// Shortest boundary path length between the endpoints in an `n`-cycle.
    pub fn length(self, n: usize) -> usize {
        chord_length(n, self)
    }

    /// True when the two chords cross in the interior of the disk.
    pub fn crosses(self, other: Chord) -> bool {
        let inside = |x: u32| self.u < x && x < self.v;
        let shares = self.u == other.u || self.u == other.v || self.v == other.u || self.v == other.v;
        !shares && (inside(other.u) != inside(other.v))
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

impl From<(usize, usize)> for Chord {
    fn from((a, b): (usize, usize)) -> Chord {
        Chord::new(a, b)
    }
}

/// `min(d, n - d)` where `d = |u - v|`.
pub fn chord_length(n: usize, chord: Chord) -> usize {
    let d = chord.v() - chord.u();
    d.min(n - d)
}

/// Cyclic distance between two vertices of an `n`-cycle.
fn cyclic_distance(n: usize, a: usize, b: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

/// A labeled maximal outerplanar graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MopGraph {
    n: usize,
    chords: Vec<Chord>,
}

/// Checks a chord list against the definition and returns the normalized graph.
pub fn validate<I, P>(n: usize, chords: I) -> Result<MopGraph, MopError>
where
    I: IntoIterator<Item = P>,
    P: Into<(usize, usize)>,
{
    MopGraph::new(n, chords)
}

impl MopGraph {
    pub fn new<I, P>(n: usize, chords: I) -> Result<MopGraph, MopError>
    where
        I: IntoIterator<Item = P>,
        P: Into<(usize, usize)>,
    {
        if n < 3 {
            return Err(MopError::InvalidOrder { n, min: 3 });
        }
        let pairs: Vec<(usize, usize)> = chords.into_iter().map(Into::into).collect();
        if pairs.len() != n - 3 {
            return Err(MopError::ChordCountMismatch {
                expected: n - 3,
                found: pairs.len(),
            });
        }
        let mut normalized = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let defect = if a >= n || b >= n {
                Some(ChordDefect::OutOfRange)
            } else if cyclic_distance(n, a, b) < 2 {
                Some(ChordDefect::TooShort)
            } else {
                None
            };
            if let Some(defect) = defect {
                return Err(MopError::InvalidChord { u: a, v: b, defect });
            }
            normalized.push(Chord::new(a, b));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(MopError::InvalidChord {
                u: w[0].u(),
                v: w[0].v(),
                defect: ChordDefect::Duplicate,
            });
        }
        check_laminar(&normalized)?;
        let graph = MopGraph { n, chords: normalized };
        debug_assert!(graph.chords.iter().filter(|c| 2 * (c.v() - c.u()) == n).count() <= 1);
        Ok(graph)
    }

    /// Builds a graph from chords already known to be valid and sorted.
    pub(crate) fn from_sorted_unchecked(n: usize, chords: Vec<Chord>) -> MopGraph {
        let graph = MopGraph { n, chords };
        debug_assert!(graph.is_valid(), "internal construction produced an invalid graph");
        graph
    }

    /// Re-fills the chord buffer of a scratch graph in place.
    pub(crate) fn refill_from(&mut self, chords: &[Chord]) {
        self.chords.clear();
        self.chords.extend_from_slice(chords);
        self.chords.sort_unstable();
    }

    pub(crate) fn empty_scratch(n: usize) -> MopGraph {
        MopGraph {
            n,
            chords: Vec::with_capacity(n.saturating_sub(3)),
        }
    }

    /// Re-runs full validation. Internal constructions use this in debug builds.
    pub fn is_valid(&self) -> bool {
        MopGraph::new(self.n, self.chords.iter().map(|c| c.endpoints()))
            .map(|g| g == *self)
            .unwrap_or(false)
    }

    /// A random triangulation of the `n`-gon, built by choosing the apex of
    /// every sub-polygon uniformly. Not uniform over triangulations.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<MopGraph, MopError> {
        if n < 3 {
            return Err(MopError::InvalidOrder { n, min: 3 });
        }
        let mut chords = Vec::with_capacity(n - 3);
        let mut pending = vec![(0usize, n - 1)];
        while let Some((i, j)) = pending.pop() {
            if j - i < 2 {
                continue;
            }
            let apex = rng.gen_range(i + 1..j);
            if apex - i >= 2 {
                chords.push(Chord::new(i, apex));
            }
            if j - apex >= 2 {
                chords.push(Chord::new(apex, j));
            }
            pending.push((i, apex));
            pending.push((apex, j));
        }
        chords.sort_unstable();
        Ok(MopGraph::from_sorted_unchecked(n, chords))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Chords in lexicographic order.
    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn contains_chord(&self, chord: Chord) -> bool {
        self.chords.binary_search(&chord).is_ok()
    }

    pub fn chord_length(&self, chord: Chord) -> usize {
        chord_length(self.n, chord)
    }

    pub fn tcl(&self) -> TclValue {
        TclValue(self.chords.iter().map(|&c| chord_length(self.n, c) as u64).sum())
    }

    pub fn diameter(&self) -> Option<Chord> {
        self.chords.iter().copied().find(|c| 2 * (c.v() - c.u()) == self.n)
    }

    pub fn has_diameter(&self) -> bool {
        self.diameter().is_some()
    }

    /// Degree in the full graph (cycle edges plus chords).
    pub fn degree(&self, vertex: usize) -> usize {
        2 + self.chords.iter().filter(|c| c.contains(vertex)).count()
    }

    /// Number of vertices whose two cycle neighbours are joined by a chord.
    ///
    /// For `n >= 5` this is also the number of chords of length 2. At `n = 4`
    /// the single chord cuts off two ears; the triangle has none.
    pub fn count_ears(&self) -> usize {
        match self.n {
            3 => 0,
            4 => 2,
            _ => {
                let by_length = self.chords.iter().filter(|&&c| self.chord_length(c) == 2).count();
                debug_assert_eq!(by_length, self.degree_two_vertices(), "ear counts disagree");
                by_length
            }
        }
    }

    fn degree_two_vertices(&self) -> usize {
        let mut incident = vec![0usize; self.n];
        for c in &self.chords {
            incident[c.u()] += 1;
            incident[c.v()] += 1;
        }
        incident.iter().filter(|&&d| d == 0).count()
    }

    /// Index `i` of the cycle edge joining `a` and `b` (either orientation).
    pub fn cycle_edge_index(&self, a: usize, b: usize) -> Result<usize, MopError> {
        let n = self.n;
        if a < n && b < n {
            if b == (a + 1) % n {
                return Ok(a);
            }
            if a == (b + 1) % n {
                return Ok(b);
            }
        }
        Err(MopError::NotACycleEdge { a, b })
    }

    /// Layer counts of every cycle edge, indexed by the edge's first vertex.
    pub fn layer_counts(&self) -> Vec<HalfInt> {
        let mut diff = vec![0i64; self.n + 1];
        self.accumulate_layers(&mut diff);
        let mut out = Vec::with_capacity(self.n);
        let mut running = 0i64;
        for &d in &diff[..self.n] {
            running += d;
            out.push(HalfInt::from_doubled(running as u64));
        }
        out
    }

    /// Writes doubled layer deltas into `diff` (length `n + 1`, zeroed).
    fn accumulate_layers(&self, diff: &mut [i64]) {
        let n = self.n;
        let mut diameter = false;
        for c in &self.chords {
            let (u, v) = c.endpoints();
            let d = v - u;
            if 2 * d == n {
                diameter = true;
            } else if 2 * d < n {
                diff[u] += 2;
                diff[v] -= 2;
            } else {
                diff[v] += 2;
                diff[n] -= 2;
                diff[0] += 2;
                diff[u] -= 2;
            }
        }
        if diameter {
            diff[0] += 1;
            diff[n] -= 1;
        }
    }

    /// Largest layer count over all cycle edges, computed with a caller-owned
    /// buffer of length `n + 1`.
    pub(crate) fn max_layer_with(&self, diff: &mut [i64]) -> HalfInt {
        diff.iter_mut().for_each(|d| *d = 0);
        self.accumulate_layers(diff);
        let mut running = 0i64;
        let mut best = 0i64;
        for &d in &diff[..self.n] {
            running += d;
            best = best.max(running);
        }
        HalfInt::from_doubled(best as u64)
    }

    pub fn max_layer(&self) -> HalfInt {
        self.layer_counts().into_iter().max().unwrap_or(HalfInt::ZERO)
    }

    /// The number of chords layering the cycle edge `(a, b)`, plus one half
    /// when the graph has a diameter.
    pub fn layer_count(&self, a: usize, b: usize) -> Result<HalfInt, MopError> {
        let edge = self.cycle_edge_index(a, b)?;
        let n = self.n;
        let mut doubled = 0u64;
        for c in &self.chords {
            let (u, v) = c.endpoints();
            let d = v - u;
            if 2 * d == n {
                doubled += 1;
            } else if 2 * d < n {
                if u <= edge && edge < v {
                    doubled += 2;
                }
            } else if edge >= v || edge < u {
                doubled += 2;
            }
        }
        Ok(HalfInt::from_doubled(doubled))
    }

    /// Inserts a new vertex into the cycle edge `(a, b)` and keeps `(a, b)` as a
    /// chord, giving a graph of order `n + 1`.
    ///
    /// For edge `i` with `i < n - 1` the new vertex takes label `i + 1` and all
    /// labels above `i` shift up by one. For the closing edge `(n - 1, 0)` the
    /// new vertex is `n` and no label moves.
    pub fn subdivide(&self, a: usize, b: usize) -> Result<MopGraph, MopError> {
        let edge = self.cycle_edge_index(a, b)?;
        let n = self.n;
        let shift = |x: usize| if x > edge { x + 1 } else { x };
        let mut chords: Vec<Chord> = self
            .chords
            .iter()
            .map(|c| Chord::new(shift(c.u()), shift(c.v())))
            .collect();
        let promoted = if edge + 1 < n {
            Chord::new(edge, edge + 2)
        } else {
            Chord::new(0, n - 1)
        };
        chords.push(promoted);
        chords.sort_unstable();
        let out = MopGraph::from_sorted_unchecked(n + 1, chords);
        debug_assert_eq!(
            HalfInt::from(out.tcl()),
            HalfInt::from(self.tcl()) + self.subdivision_increment(edge),
            "subdivision changed TCL by an unexpected amount"
        );
        Ok(out)
    }

    /// `2 + layer` without a diameter, `3/2 + layer` with one.
    fn subdivision_increment(&self, edge: usize) -> HalfInt {
        let (a, b) = (edge, (edge + 1) % self.n);
        let layer = self.layer_count(a, b).expect("edge index is in range");
        if self.has_diameter() {
            HalfInt::from_doubled(3) + layer
        } else {
            HalfInt::from_int(2) + layer
        }
    }

    /// Removes a degree-2 vertex and turns its ear chord into a cycle edge.
    /// Inverse of [`MopGraph::subdivide`].
    pub fn contract_ear(&self, vertex: usize) -> Result<MopGraph, MopError> {
        let n = self.n;
        if n < 4 {
            return Err(MopError::InvalidOrder { n, min: 4 });
        }
        if vertex >= n {
            return Err(MopError::NotAnEar { vertex, degree: 0 });
        }
        let degree = self.degree(vertex);
        if degree != 2 {
            return Err(MopError::NotAnEar { vertex, degree });
        }
        let ear = Chord::new((vertex + n - 1) % n, (vertex + 1) % n);
        debug_assert!(self.contains_chord(ear));
        let unshift = |x: usize| if x > vertex { x - 1 } else { x };
        let mut chords: Vec<Chord> = self
            .chords
            .iter()
            .filter(|&&c| c != ear)
            .map(|c| Chord::new(unshift(c.u()), unshift(c.v())))
            .collect();
        chords.sort_unstable();
        Ok(MopGraph::from_sorted_unchecked(n - 1, chords))
    }

    /// The two triangle apexes opposite `chord`: one inside the interval
    /// `(u, v)` and one outside it.
    pub fn flip_partner(&self, chord: Chord) -> Result<Chord, MopError> {
        if !self.contains_chord(chord) {
            return Err(MopError::NotAChord(chord));
        }
        let n = self.n;
        let (u, v) = chord.endpoints();
        let neighbours = self
            .chords
            .iter()
            .filter_map(|c| c.other(u))
            .chain([(u + 1) % n, (u + n - 1) % n]);
        let mut inner = None::<usize>;
        let mut outer = None::<(usize, usize)>;
        for x in neighbours {
            if x == v {
                continue;
            }
            if u < x && x < v {
                inner = Some(inner.map_or(x, |w| w.max(x)));
            } else {
                let clockwise_from_v = (x + n - v) % n;
                if outer.is_none_or(|(best, _)| clockwise_from_v < best) {
                    outer = Some((clockwise_from_v, x));
                }
            }
        }
        let inner = inner.expect("a chord always has an inner triangle");
        let (_, outer) = outer.expect("a chord always has an outer triangle");
        Ok(Chord::new(inner, outer))
    }

    /// Replaces `chord` by the other diagonal of the quadrilateral formed by
    /// its two incident triangles.
    pub fn flip(&self, chord: Chord) -> Result<MopGraph, MopError> {
        let partner = self.flip_partner(chord)?;
        Ok(self.replace_chord(chord, partner))
    }

    pub(crate) fn replace_chord(&self, old: Chord, new: Chord) -> MopGraph {
        let mut chords = self.chords.clone();
        let at = chords.binary_search(&old).expect("chord to replace is present");
        chords.remove(at);
        let at = chords.binary_search(&new).expect_err("replacement chord is new");
        chords.insert(at, new);
        MopGraph::from_sorted_unchecked(self.n, chords)
    }
}

/// Normalized, sorted chords form a non-crossing family exactly when their
/// intervals are laminar: any two are nested or meet at most in an endpoint.
fn check_laminar(sorted: &[Chord]) -> Result<(), MopError> {
    let mut order: Vec<Chord> = sorted.to_vec();
    // by left endpoint, longer first on ties, so enclosing intervals come first
    order.sort_unstable_by(|a, b| a.u.cmp(&b.u).then(b.v.cmp(&a.v)));
    let mut open: Vec<Chord> = Vec::new();
    for c in order {
        while open.last().is_some_and(|top| top.v <= c.u) {
            open.pop();
        }
        if let Some(&top) = open.last() {
            if top.v < c.v {
                return Err(MopError::CrossingChords { first: top, second: c });
            }
        }
        open.push(c);
    }
    Ok(())
}

impl fmt::Display for MopGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MopGraph({}, [", self.n)?;
        for (i, c) in self.chords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("])")
    }
}
