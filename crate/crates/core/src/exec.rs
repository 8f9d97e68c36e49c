//! Batch execution strategy.
//!
//! Independent work items (logical basis inputs, schedule segments, sweep
//! points, channel matrix elements) are mapped either through rayon or a
//! plain iterator. Without the `parallel` feature both variants run
//! sequentially. Output order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

impl Exec {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Whether this strategy actually fans out across threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_preserve_order() {
        let items: Vec<u32> = (0..100).collect();
        let seq = Exec::Sequential.map(&items, |x| x * x);
        let par = Exec::Parallel.map(&items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
    }
}
