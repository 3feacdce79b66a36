//! Ordinal maximin-share fair division for groups of agents.
//!
//! Items are allocated to groups; every agent in a group shares the group's
//! bundle. An allocation is *1-out-of-p MMS* when each agent values her
//! group's bundle at least as much as the best worst bundle she could form by
//! splitting all items into `p` parts. This crate provides
//!
//! - exact and approximate maximin shares ([`mms`]),
//! - the two randomized group-allocation algorithms ([`alloc`]) and the
//!   bag-filling subroutine they rely on ([`bagfill`]),
//! - concrete two-group bounds and exact success fractions ([`two_group`]),
//! - covering designs ([`covering`]) and the lower-bound instance generators
//!   built from them ([`adversarial`]),
//! - a brute-force feasibility oracle ([`oracle`]),
//! - a seeded Monte Carlo harness ([`sim`]) and the command-line front end ([`cli`]).
//!
//! All feasibility decisions use exact rational arithmetic.
//!
//! ```
//! use groupmms::{adversarial, oracle};
//!
//! let inst = adversarial::footnote_instance();
//! assert_eq!(oracle::min_feasible_p(&inst, &oracle::OracleBudget::default()).unwrap(), 3);
//! ```

pub mod adversarial;
pub mod alloc;
pub mod bagfill;
pub mod cli;
pub mod covering;
pub mod error;
pub mod instance;
pub mod mms;
pub mod oracle;
pub mod rational;
pub mod sim;
pub mod two_group;

pub use error::{Error, Result, Violation};
pub use instance::{AgentId, Allocation, Bundle, Instance};
pub use mms::MmsResult;
pub use rational::Rational;

// Guide chapters compiled as doctests so the snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/maximin-shares.md")]
    mod maximin_shares {}
    #[doc = include_str!("../../../book/src/group-allocation.md")]
    mod group_allocation {}
    #[doc = include_str!("../../../book/src/two-groups.md")]
    mod two_groups {}
    #[doc = include_str!("../../../book/src/covering-designs.md")]
    mod covering_designs {}
    #[doc = include_str!("../../../book/src/lower-bounds.md")]
    mod lower_bounds {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
