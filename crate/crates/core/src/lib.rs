//! Total chord length (TCL) of maximal outerplanar graphs.
//!
//! A maximal outerplanar graph of order `n` is drawn as an `n`-cycle whose
//! interior is triangulated by `n - 3` chords. The length of a chord is the
//! shorter boundary distance between its endpoints, and the TCL of a graph is
//! the sum of its chord lengths.
//!
//! * [`graph`]: the graph type, validation, measurements, and local moves.
//! * [`builders`]: the greedy (minimum) and shell (maximum) constructions and
//!   the closed forms for both extremes.
//! * [`enumeration`]: exhaustive generation of all triangulations and the
//!   brute-force checks that use it.
//! * [`spectrum`]: constructive witnesses for every TCL between the extremes.
//! * [`io`]: JSON and DOT documents.

pub mod builders;
pub mod enumeration;
pub mod graph;
pub mod io;
pub mod spectrum;
pub mod value;

pub use builders::{build_greedy, build_shell, max_tcl, min_tcl, GreedyTrace};
pub use enumeration::{EnumConfig, EnumError, EnumStats};
pub use graph::{chord_length, validate, Chord, MopError, MopGraph};
pub use spectrum::{find_graph_with_tcl, reanchor_walk, SearchConfig, SpectrumError, WitnessFinder, WitnessReport};
pub use value::{HalfInt, TclValue};
