//! Execution policy for the data-parallel loops.
//!
//! Every parallel loop in the crate is a map over a fixed range of chunk
//! indices followed by an exact, commutative merge (integer tallies or exact
//! polynomial coefficients), so the sequential and parallel paths produce
//! identical results.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise runs
    /// sequentially.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Maps `map` over `0..chunks` and folds the results with `merge`.
///
/// `merge` must be associative and commutative.
pub fn map_reduce<T, M, R>(exec: Exec, chunks: usize, identity: impl Fn() -> T + Sync + Send, map: M, merge: R) -> T
where
    T: Send,
    M: Fn(usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..chunks).into_par_iter().map(map).reduce(identity, merge);
    }
    let _ = exec;
    (0..chunks).map(map).fold(identity(), merge)
}

/// Runs `f` on a pool with `threads` workers (0 keeps the global pool).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}
