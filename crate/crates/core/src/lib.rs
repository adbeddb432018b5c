//! Deterministic bilateral communication protocols over finite type spaces.
//!
//! An auctioneer implements a social choice rule by walking an extensive-form
//! query tree; bidders answer according to type-contingent strategies. This
//! crate models those protocols, derives what the auctioneer and each bidder
//! learn (as partitions of the type-profile space), detects privacy
//! violations, constructs the standard auction protocols (sealed-bid,
//! descending, ascending, ascending-join) and their compositions, and
//! certifies privacy-Pareto-frontier membership by exhaustive enumeration at
//! desk scale.
//!
//! The main modules mirror the pipeline:
//!
//! - [`model`]: type spaces, outcomes, choice rules, partitions.
//! - [`protocol`]: the query-tree object, validation, simulation, pruning.
//! - [`observation`]: induced auctioneer/bidder partitions.
//! - [`analysis`]: privacy detectors, dominance comparison, incentive checks.
//! - [`stitching`]: splitting a rule at a product preimage and composing
//!   sub-protocols.
//! - [`auctions`]: first-price / second-price instances and named protocols.
//! - [`frontier`]: exhaustive enumeration of implementing protocols and
//!   frontier certification.
//! - [`io`]: text formats for instances, protocols, partitions and reports.
//! - [`gen`]: seeded random instances and protocols for testing.

pub mod analysis;
pub mod auctions;
pub mod frontier;
pub mod gen;
pub mod io;
pub mod model;
pub mod observation;
pub mod protocol;
pub mod stitching;

pub use model::{
    ChoiceRule, MaskedProfile, ObservationStructure, Outcome, Partition, ProfileId,
    RefinementOrder, Rational, TypeLabel, TypeProfile, TypeSpace, UtilityModel,
};
pub use observation::PrivacyProfile;
pub use protocol::{ProtocolTree, Transcript};
