#![no_std]
// `!(x > 0.0)` style guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod controls;
pub mod fixpoint;
pub mod linf;
pub mod mateq;
pub mod matrix;
pub mod spectra;
