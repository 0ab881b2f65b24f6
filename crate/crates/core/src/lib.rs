//! Exact Niederreiter-type digital (0, e, d)-sequences and Halton sequences
//! together with torus pair-correlation statistics. Finite-N witnesses show
//! that these sequences do not have Poissonian pair correlations.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: the finite field F_q and its digit bijection φ.
//! * [`poly`]: polynomials over F_q, Laurent and base-q(x) expansions.
//! * [`genmat`]: generating matrices (Niederreiter, column-by-column,
//!   scrambler), NUT and (t, e, d) rank checks, row lengths.
//! * [`sequences`]: exact digital, Halton and van der Corput points, plus a
//!   floating Kronecker baseline.
//! * [`paircorr`]: torus sup-norm pair counting and F_N(s) curves.
//! * [`witness`]: the gap criterion and the digital / Halton witnesses.
//! * [`cli`]: the batch front end used by the `qmc-ppc` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod exact;
pub mod field;
pub mod genmat;
pub mod numtheory;
pub mod paircorr;
pub mod poly;
pub mod sequences;
pub mod witness;

pub use error::{Error, Result};
pub use field::{FieldElem, FieldSpec};
pub use poly::Poly;
