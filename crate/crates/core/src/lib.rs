pub mod error;
pub mod funcs;
pub mod lazy;
pub mod logic;
pub mod oracle;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod seqcore;
pub mod vreal;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;
pub type Poly = poly::Polynomial<Rational>;
pub type RatFunc = ratfunc::RationalFunction<Rational>;
pub type LazySeq = lazy::LazySequence<f64>;
