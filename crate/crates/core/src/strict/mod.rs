//! Slices, pullback functors and their adjoints, and strictification of weak functors.

pub mod coalgebra;
pub mod functors;
pub mod slice;

pub use coalgebra::{phi_iso, strictify, Iso, Strictified};
pub use functors::{
    bang_pullback, pullback_functor, transpose, Adjunction, BangPullback, Direction, PullbackFunctor, Star,
    TableFunctor, WeakFunctor,
};
pub use slice::{slice_view, CheckedHom, SliceHom, SliceObj, SliceView};
