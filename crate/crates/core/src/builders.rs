//! The two extremal families and their closed-form chord lengths.
//!
//! The greedy graph chains shortest clockwise chords starting at vertex 0 and
//! attains the minimum total chord length; the shell (a fan at vertex 0)
//! attains the maximum.

use crate::graph::{Chord, MopGraph};
use crate::value::TclValue;

/// The greedy graph together with how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    pub graph: MopGraph,
    /// Chords in insertion order.
    pub chord_order: Vec<Chord>,
    /// Anchor vertex before each insertion, then the final anchor.
    pub anchors: Vec<usize>,
    /// Anchors abandoned because no chord could start there. Always empty for
    /// this construction; kept so traces from other chaining rules compare.
    pub restarts: Vec<usize>,
}

/// Order `n` together with the exponent `k` satisfying `3·2^k <= n < 3·2^(k+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaParams {
    pub n: usize,
    pub k: u32,
}

impl FormulaParams {
    pub fn new(n: usize) -> FormulaParams {
        assert!(n >= 3, "formulas need n >= 3, got {n}");
        FormulaParams { n, k: (n / 3).ilog2() }
    }

    /// `n(k+2) - 3·2^(k+1)` evaluated at an explicit `k`.
    pub fn min_tcl_at(n: usize, k: u32) -> i128 {
        n as i128 * (k as i128 + 2) - 3 * (1i128 << (k + 1))
    }
}

/// Largest order admitting a graph whose layer counts are all at most `k`.
pub fn theta(k: u32) -> usize {
    3 << k
}

/// Minimum total chord length over graphs of order `n >= 3`.
pub fn min_tcl(n: usize) -> TclValue {
    let params = FormulaParams::new(n);
    let value = FormulaParams::min_tcl_at(n, params.k);
    TclValue(u64::try_from(value).expect("formula is nonnegative for n >= 3"))
}

/// Maximum total chord length over graphs of order `n >= 3`.
pub fn max_tcl(n: usize) -> TclValue {
    assert!(n >= 3, "formulas need n >= 3, got {n}");
    let sq = (n as u64) * (n as u64);
    let numerator = if n % 2 == 1 { sq - 9 } else { sq - 8 };
    assert_eq!(numerator % 4, 0);
    TclValue(numerator / 4)
}

/// Builds the greedy graph of order `n >= 3`.
///
/// From the current anchor the shortest admissible clockwise chord always ends
/// two steps ahead on the untriangulated remainder of the polygon: every
/// vertex nearer than that sits inside an already triangulated pocket. So the
/// construction walks a successor list and drops the skipped vertex each step.
pub fn build_greedy(n: usize) -> GreedyTrace {
    assert!(n >= 3, "greedy graph needs n >= 3, got {n}");
    let mut next: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
    let mut anchor = 0;
    let mut anchors = vec![anchor];
    let mut chord_order = Vec::with_capacity(n - 3);
    for _ in 0..n - 3 {
        let skipped = next[anchor];
        let end = next[skipped];
        chord_order.push(Chord::new(anchor, end));
        next[anchor] = end;
        anchor = end;
        anchors.push(anchor);
    }
    let mut chords = chord_order.clone();
    chords.sort_unstable();
    GreedyTrace {
        graph: MopGraph::from_sorted_unchecked(n, chords),
        chord_order,
        anchors,
        restarts: Vec::new(),
    }
}

/// The fan `(0,2), (0,3), ..., (0,n-2)`.
pub fn build_shell(n: usize) -> MopGraph {
    assert!(n >= 3, "shell graph needs n >= 3, got {n}");
    let chords = (2..n.saturating_sub(1)).map(|j| Chord::new(0, j)).collect();
    MopGraph::from_sorted_unchecked(n, chords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lengths(g: &MopGraph) -> Vec<usize> {
        let mut out: Vec<usize> = g.chords().iter().map(|&c| g.chord_length(c)).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn greedy_examples() {
        let six = build_greedy(6);
        assert_eq!(six.graph, MopGraph::new(6, [(0, 2), (2, 4), (0, 4)]).unwrap());
        assert_eq!(six.graph.tcl(), TclValue(6));
        assert_eq!(build_greedy(11).graph.tcl(), TclValue(21));
        let twelve = build_greedy(12);
        assert_eq!(lengths(&twelve.graph), vec![2, 2, 2, 2, 2, 2, 4, 4, 4]);
        assert_eq!(twelve.graph.tcl(), TclValue(24));
        assert_eq!(
            &twelve.chord_order[6..],
            &[Chord::new(0, 4), Chord::new(4, 8), Chord::new(0, 8)]
        );
    }

    #[test]
    fn greedy_chain_shares_endpoints() {
        for n in 4..200 {
            let trace = build_greedy(n);
            assert_eq!(trace.chord_order.len(), n - 3);
            assert!(trace.restarts.is_empty());
            assert_eq!(trace.anchors[0], 0);
            for (i, w) in trace.chord_order.windows(2).enumerate() {
                assert!(w[1].contains(trace.anchors[i + 1]));
                assert!(w[0].contains(trace.anchors[i + 1]));
            }
        }
    }

    #[test]
    fn small_orders() {
        assert!(build_greedy(3).graph.chords().is_empty());
        assert!(build_shell(3).chords().is_empty());
        assert_eq!(build_shell(4), MopGraph::new(4, [(0, 2)]).unwrap());
        assert_eq!(min_tcl(3), TclValue(0));
        assert_eq!(max_tcl(3), TclValue(0));
    }

    #[test]
    fn shell_examples() {
        assert_eq!(build_shell(6), MopGraph::new(6, [(0, 2), (0, 3), (0, 4)]).unwrap());
        assert_eq!(build_shell(6).tcl(), TclValue(7));
        assert_eq!(build_shell(12).tcl(), TclValue(34));
        assert_eq!(build_shell(5), MopGraph::new(5, [(0, 2), (0, 3)]).unwrap());
        assert_eq!(build_shell(5).tcl(), TclValue(4));
    }

    #[test]
    fn formula_examples() {
        assert_eq!(min_tcl(11), TclValue(21));
        assert_eq!(min_tcl(12), TclValue(24));
        assert_eq!(FormulaParams::min_tcl_at(12, 1), 24);
        assert_eq!(FormulaParams::min_tcl_at(12, 2), 24);
        assert_eq!(min_tcl(4), TclValue(2));
        assert_eq!(max_tcl(6), TclValue(7));
        assert_eq!(max_tcl(11), TclValue(28));
        assert_eq!(max_tcl(4), TclValue(2));
        assert_eq!(min_tcl(40), TclValue(152));
        assert_eq!(max_tcl(40), TclValue(398));
    }

    #[test]
    fn k_is_exact_at_boundaries() {
        for k in 0..20u32 {
            let n = 3usize << k;
            assert_eq!(FormulaParams::new(n).k, k);
            if k > 0 {
                assert_eq!(FormulaParams::new(n - 1).k, k - 1);
            }
            assert_eq!(FormulaParams::new(2 * n - 1).k, k);
            assert_eq!(
                FormulaParams::min_tcl_at(2 * n, k),
                FormulaParams::min_tcl_at(2 * n, k + 1),
                "boundary overlap disagrees at k={k}"
            );
        }
        assert_eq!(theta(1), 6);
        assert_eq!(theta(2), 12);
    }

    #[test]
    fn increment_laws() {
        for n in 5..600 {
            let shell_step = build_shell(n + 1).tcl().get() - build_shell(n).tcl().get();
            let expected = if n % 2 == 1 {
                (n as u64).div_ceil(2)
            } else {
                n as u64 / 2
            };
            assert_eq!(shell_step, expected, "shell increment at n={n}");
            let k = FormulaParams::new(n).k as u64;
            let greedy_step = build_greedy(n + 1).graph.tcl().get() - build_greedy(n).graph.tcl().get();
            assert_eq!(greedy_step, k + 2, "greedy increment at n={n}");
        }
    }

    #[test]
    fn shell_has_two_ears() {
        for n in 5..300 {
            assert_eq!(build_shell(n).count_ears(), 2);
        }
    }
}
