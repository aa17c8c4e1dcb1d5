//! Computations with local `A4`-extensions of `k[[s]]` in characteristic 2.
//!
//! * [`char2`]: binary fields, truncated Laurent series, rational functions.
//! * [`artin_schreier`]: standard forms, breaks, Galois classification.
//! * [`deformation`]: the break-lowering deformation and its ramification audit.
//! * [`padic`]: truncated arithmetic in `W(F_q)[pi]/(pi^e - 2)`.
//! * [`lifter`]: lift verification and the explicit lifts for breaks 1 and 5.
//! * [`cli`]: the `a4lift` command line and its JSON certificates.

pub mod artin_schreier;
pub mod char2;
pub mod cli;
pub mod deformation;
pub mod lifter;
pub mod padic;
