pub mod analysis;
pub mod arith;
pub mod cli;
pub mod forms;
pub mod maass;
pub mod poincare;
pub mod rigor;
pub mod weil;
