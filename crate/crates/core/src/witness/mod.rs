//! Construction, verification and search for FNS and FN witnesses.

mod developable;
mod fns;
mod regular;
mod updown;

pub use developable::{developable_fn, DevelopableFn};
pub use fns::{fns_exists_within, search_fns, search_fns_within, trivial_fns, verify_fns, FnsSearch, FnsWitness};
pub use regular::{project_fn_to_ro, stone_lift, StoneLift};
pub use updown::{verify_fn, FnWitness};

/// Outcome of a witness check. A failing verdict names the offending pair
/// of member indices, which can be rechecked with
/// [`FnsWitness::separates`] or [`FnWitness::meets`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessVerdict {
    pub ok: bool,
    pub counterexample: Option<(usize, usize)>,
}

impl WitnessVerdict {
    pub fn pass() -> Self {
        WitnessVerdict { ok: true, counterexample: None }
    }

    pub fn fail(a: usize, b: usize) -> Self {
        WitnessVerdict { ok: false, counterexample: Some((a, b)) }
    }
}
