pub mod arith;
pub mod chartab;
pub mod cyclo;
pub mod dessin;
pub mod error;
pub mod factor;
pub mod modp;
pub mod perm;
pub mod poly;
pub mod spectrum;
pub mod subfield;

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

pub use chartab::{character_table, CharacterTable};
pub use cyclo::Cyclo;
pub use dessin::{parse_dessin, Dessin, Passport};
pub use error::{Error, Result};
pub use perm::{enumerate_group, ConjugacyClass, GroupTable, Perm};
pub use poly::Poly;

/// Scalars the algebra is generic over: exact rationals in practice,
/// floating point where only approximate evaluation is wanted.
pub trait Field: Num + Clone + Debug + Neg<Output = Self> + FromPrimitive {}

impl<T> Field for T where T: Num + Clone + Debug + Neg<Output = T> + FromPrimitive {}

pub type Rational = num_rational::BigRational;
pub type RatPoly = Poly<Rational>;
pub type CycloNum = Cyclo<Rational>;
