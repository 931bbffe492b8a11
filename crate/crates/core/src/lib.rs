//! Triangular numbers that are `k`-multiples of other triangular numbers.
//!
//! For non-square `k > 1` the equation `T_ξ = k·T_t` has infinitely many
//! solutions. This crate finds them by brute force ([`oracle`]), detects the
//! lag-`r` recurrence that generates them ([`params`]), runs the four
//! recurrences ([`recurrence`]) and evaluates any term directly from exact
//! closed forms over Q(√D) ([`closedform`]).

pub mod cli;
pub mod closedform;
pub mod exactmath;
pub mod oracle;
pub mod params;
pub mod recurrence;
