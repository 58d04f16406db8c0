//! Fault injection for testing the verifiers themselves. A mutation is active only
//! on the calling thread and only inside [`with_mutation`]; caches are bypassed
//! while one is active.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    None,
    /// Drop the Koszul factor in the boundary of a face of `P_n`.
    BoundaryKoszul,
    /// Drop the `(−1)^{Σ rank(D)}` factor from the pair sign on `B_n`.
    PairSignDeletion,
    /// Flip the sign of the quadratic part of the cobar differential.
    CobarQuadraticSign,
}

thread_local! {
    static ACTIVE: Cell<Mutation> = const { Cell::new(Mutation::None) };
}

pub fn active(m: Mutation) -> bool {
    ACTIVE.with(|a| a.get() == m)
}

pub fn any_active() -> bool {
    ACTIVE.with(|a| a.get() != Mutation::None)
}

/// Run `f` with `m` switched on.
pub fn with_mutation<T>(m: Mutation, f: impl FnOnce() -> T) -> T {
    struct Reset(Mutation);
    impl Drop for Reset {
        fn drop(&mut self) {
            ACTIVE.with(|a| a.set(self.0));
        }
    }
    let _reset = Reset(ACTIVE.with(|a| a.replace(m)));
    f()
}
