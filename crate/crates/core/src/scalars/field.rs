use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Width the isolating interval is refined to at construction.
const CACHED_WIDTH_BITS: u32 = 64;

/// How irreducibility of the minimal polynomial was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    /// Proven: degree ≤ 3 with no rational root, or degree 1.
    Verified,
    /// Squarefree and without rational roots, but not proven irreducible.
    Trusted,
}

/// A real number field Q(α) given by a minimal polynomial and an interval
/// isolating the real root α.
pub struct NumberField {
    minpoly: Vec<BigInt>,
    declared: (BigRational, BigRational),
    monic: Poly,
    isolating: (BigRational, BigRational),
    lo_sign: i8,
    irreducibility: Irreducibility,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("minpoly", &self.minpoly.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .field("root_interval", &(self.declared.0.to_string(), self.declared.1.to_string()))
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.monic == other.monic && self.isolating == other.isolating
    }
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl NumberField {
    /// Builds and validates a field. The interval is closed.
    pub fn new(minpoly: Vec<BigInt>, root_interval: (BigRational, BigRational)) -> Result<Arc<Self>> {
        let p = poly::from_ints(&minpoly);
        let deg = poly::degree(&p)
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::FieldDefinition("minimal polynomial must have degree ≥ 1".into()))?;
        let mut minpoly = minpoly;
        minpoly.truncate(deg + 1);
        let (lo, hi) = root_interval.clone();
        if lo > hi {
            return Err(Error::FieldDefinition("root interval is reversed".into()));
        }
        let monic = poly::monic(&p);
        if deg == 1 {
            let r = -&monic[0];
            if r < lo || r > hi {
                return Err(Error::FieldDefinition("root interval does not contain the root".into()));
            }
            return Ok(Arc::new(NumberField {
                minpoly,
                declared: root_interval,
                monic,
                isolating: (r.clone(), r),
                lo_sign: 0,
                irreducibility: Irreducibility::Verified,
            }));
        }
        let sqf = poly::gcd(&p, &poly::derivative(&p));
        if poly::degree(&sqf) != Some(0) {
            return Err(Error::FieldDefinition("minimal polynomial is not squarefree".into()));
        }
        let irreducibility = match poly::rational_roots(&minpoly) {
            Some(roots) if !roots.is_empty() => {
                return Err(Error::FieldDefinition(format!(
                    "minimal polynomial has rational root {}",
                    roots[0]
                )))
            }
            Some(_) if deg <= 3 => Irreducibility::Verified,
            _ => Irreducibility::Trusted,
        };
        let at_lo = poly::eval(&monic, &lo);
        let at_hi = poly::eval(&monic, &hi);
        if at_lo.is_zero() || at_hi.is_zero() {
            return Err(Error::FieldDefinition("root interval endpoint is a root".into()));
        }
        let count = poly::count_roots(&monic, &lo, &hi);
        if count != 1 {
            return Err(Error::FieldDefinition(format!(
                "root interval contains {count} real roots, expected exactly 1"
            )));
        }
        let lo_sign = sign_of(&at_lo);
        let mut field = NumberField {
            minpoly,
            declared: root_interval,
            monic,
            isolating: (lo, hi),
            lo_sign,
            irreducibility,
        };
        let target = BigRational::new(BigInt::one(), BigInt::one() << CACHED_WIDTH_BITS);
        while &field.isolating.1 - &field.isolating.0 > target {
            field.isolating = field.bisect(&field.isolating)?;
        }
        Ok(Arc::new(field))
    }

    /// The field Q, presented as Q(0) with minimal polynomial x.
    pub fn rationals() -> Arc<Self> {
        let lo = BigRational::from_integer((-1).into());
        let hi = BigRational::from_integer(1.into());
        Self::new(vec![BigInt::zero(), BigInt::one()], (lo, hi)).expect("x is a valid minimal polynomial")
    }

    pub fn degree(&self) -> usize {
        self.monic.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn root_interval(&self) -> &(BigRational, BigRational) {
        &self.declared
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    pub(crate) fn monic(&self) -> &[BigRational] {
        &self.monic
    }

    pub(crate) fn isolating(&self) -> &(BigRational, BigRational) {
        &self.isolating
    }

    /// One bisection step keeping the root inside.
    pub(crate) fn bisect(&self, iv: &(BigRational, BigRational)) -> Result<(BigRational, BigRational)> {
        let mid = (&iv.0 + &iv.1) / BigRational::from_integer(2.into());
        let s = sign_of(&poly::eval(&self.monic, &mid));
        if s == 0 {
            return Err(Error::FieldDefinition(format!(
                "minimal polynomial has rational root {mid}"
            )));
        }
        Ok(if s == self.lo_sign {
            (mid, iv.1.clone())
        } else {
            (iv.0.clone(), mid)
        })
    }

    /// Reduces a polynomial in the generator to a coefficient vector of length `degree`.
    pub(crate) fn reduce(&self, p: &[BigRational]) -> Vec<BigRational> {
        let deg = self.degree();
        let mut r = p.to_vec();
        poly::trim(&mut r);
        let mut top = r.len();
        while top > deg {
            let c = r[top - 1].clone();
            if !c.is_zero() {
                let shift = top - 1 - deg;
                for (i, m) in self.monic.iter().enumerate() {
                    r[shift + i] -= &c * m;
                }
            }
            top -= 1;
        }
        r.truncate(deg);
        r.resize(deg, BigRational::zero());
        r
    }
}
