/// How batch work is scheduled.
///
/// `Parallel` only spreads work over threads when the crate is built with the
/// `parallel` feature; without it both variants run the same sequential loop.
/// Results are always returned in input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Map `f` over `items`, preserving order.
pub fn map_indexed<T, R, F>(items: &[T], mode: ExecMode, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()
        }
        _ => items.iter().enumerate().map(|(i, x)| f(i, x)).collect(),
    }
}
