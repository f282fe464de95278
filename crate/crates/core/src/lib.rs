//! Effort-sharing engine for splitting the EU27 carbon budget across Member
//! States.
//!
//! The pipeline runs in a fixed order: [`trajectory`] builds the emission
//! pathways and integrates the EU27 budget, [`indices`] turns the input
//! panels into Capability, Decoupling and Inertia shares, [`blend`] mixes the
//! three resulting allocations over a parameter grid, and [`analysis`] derives
//! the gap, group and feasibility tables. [`report`] wires it all together and
//! compares the results against the bundled reference tables.
//!
//! ```
//! use carbon_quota::trajectory::{linear_to_zero, TrajectoryLabel};
//!
//! let eu = linear_to_zero(TrajectoryLabel::Eu27Total, 2020, 3875.48, 2050).unwrap();
//! assert!((eu.budget - 60069.94).abs() < 0.01);
//! ```

pub mod analysis;
pub mod blend;
pub mod bundled;
pub mod country;
pub mod indices;
pub mod ingest;
pub mod report;
pub mod trajectory;

pub use country::{CountryMap, MemberState, Region};
pub use ingest::{load_dataset, Dataset, DatasetPaths};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/loading.md")]
    mod loading {}
    #[doc = include_str!("../../../book/src/trajectories.md")]
    mod trajectories {}
    #[doc = include_str!("../../../book/src/indices.md")]
    mod indices {}
    #[doc = include_str!("../../../book/src/blending.md")]
    mod blending {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/reports.md")]
    mod reports {}
}
