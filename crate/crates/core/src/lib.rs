//! Exact thresholds for the existence of long paths in random subgraphs of
//! shift-like graphs, with brute-force pattern oracles, Monte Carlo
//! percolation experiments, and de Bruijn independence numbers.
//!
//! The crate is organized around five subsystems:
//!
//! - [`relations`]: order relations, equivalence patterns, cores, widths,
//!   and every closed-form threshold.
//! - [`graphs`]: finite truncations of pattern graphs, shift graphs, and
//!   de Bruijn graphs, with DAG utilities.
//! - [`pattern_oracle`]: exact rational probabilities of order-pattern
//!   events, extremal colorings, coloring searches, hierarchical sampling.
//! - [`percolation`]: reproducible Monte Carlo vertex percolation with
//!   coupled lambda sweeps.
//! - [`debruijn`]: independence numbers of de Bruijn graphs via the subset
//!   (directed-cut) reformulation and independent-set search.
//!
//! All exact values are rationals; floats appear only in Monte Carlo
//! estimates. Every stochastic routine is deterministic given its seed.
//!
//! ```
//! use shiftperc::pattern_oracle::{descent_measure_exact, ColoringSpec};
//! use shiftperc::relations::{vertex_threshold, OrderRelation};
//!
//! let shift = OrderRelation::shift(3);
//! assert_eq!(vertex_threshold(&shift).exact().unwrap(), shiftperc::rational(2, 3));
//!
//! // The brute-force oracle confirms the closed form: the lex-max coloring
//! // of the width-4 orbit wins on exactly 3/4 of the orderings.
//! let measure = descent_measure_exact(&shift, &ColoringSpec::LexMax).unwrap();
//! assert_eq!(measure.ratio(), shiftperc::rational(3, 4));
//! ```

pub mod debruijn;
pub mod exact;
pub mod graphs;
pub mod pattern_oracle;
pub mod percolation;
pub mod relations;
pub mod rng;

pub use exact::{rational, Rational};
