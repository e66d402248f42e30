//! Global shape: simplicity, convexity, four-vertex verdicts and invariance
//! checks.

mod invariance;
mod shape;
mod suites;
mod verdict;

pub use invariance::{verify_invariance, InvarianceCheck, InvarianceConfig, InvarianceReport, TransformFamily};
pub use shape::{
    convexity, is_simple_closed, zeros_isolated, ConvexCase, ConvexityVerdict, Crossing, SimplicityReport,
    SIMPLE_RESOLUTION,
};
pub use suites::{run_suite, Suite, SuiteCheck, COINCIDENCE_OFFSETS, COUNTEREXAMPLES};
pub use verdict::{four_vertex_verdict, Clause, FourVertexVerdict, Hypotheses};

#[cfg(test)]
mod tests;
