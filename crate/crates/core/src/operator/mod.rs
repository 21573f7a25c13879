//! Differential-operator algebra with `p = -i d/dx` and the three generator
//! conventions.

mod coeff;
mod diffop;
mod generators;

pub use coeff::{CoeffFn, MonoKey};
pub use diffop::{DiffOperator, Symmetry};
pub use generators::{
    factor, hamiltonian_pair, make_generators, Convention, GeneratorPair, HamiltonianPair,
};
