//! Exact arithmetic in a real number field Q(α), with float shadows.

mod field;
pub(crate) mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use field::{Irreducibility, NumberField};

use crate::error::{Error, Result};

/// Maximum number of extra bisections spent deciding a sign.
pub const SIGN_DEPTH: usize = 2048;

/// An element of a [`NumberField`], stored as coordinates in the power basis 1, α, …, α^{k−1}.
#[derive(Clone)]
pub struct Scalar {
    field: Arc<NumberField>,
    coeffs: Vec<BigRational>,
}

/// A float approximation with a rigorous absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shadow {
    pub value: f64,
    pub error_bound: f64,
}

fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Parses "p/q", "p" or a decimal literal such as "0.25".
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Ok(r) = BigRational::from_str(t) {
        if !r.denom().is_zero() {
            return Ok(r);
        }
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if let Ok(num) = BigInt::from_str(&digits) {
            let den = num_traits::pow(BigInt::from(10), frac.len());
            let r = BigRational::new(num, den);
            return Ok(if neg { -r } else { r });
        }
    }
    Err(Error::Parse(format!("not a rational number: {s:?}")))
}

impl Scalar {
    pub fn from_rational(field: &Arc<NumberField>, r: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); field.degree()];
        coeffs[0] = r;
        Scalar { field: field.clone(), coeffs }
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The generator α (the rational root itself for degree 1).
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &[BigRational::zero(), BigRational::one()])
    }

    /// Coordinates in the power basis; missing trailing entries are zero.
    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() > field.degree() {
            return Err(Error::Parse(format!(
                "scalar has {} coefficients but the field has degree {}",
                coeffs.len(),
                field.degree()
            )));
        }
        Ok(Self::from_poly(field, &coeffs))
    }

    fn from_poly(field: &Arc<NumberField>, p: &[BigRational]) -> Self {
        Scalar { field: field.clone(), coeffs: field.reduce(p) }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational, when it lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let (g, s) = poly::ext_gcd(&self.coeffs, self.field.monic());
        if g.len() != 1 {
            return Err(Error::FieldDefinition(
                "nonzero element is not invertible; minimal polynomial is reducible".into(),
            ));
        }
        Ok(Self::from_poly(&self.field, &s))
    }

    pub fn div(&self, other: &Scalar) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Exact sign of the represented real number.
    pub fn sign(&self) -> Result<i8> {
        if self.is_zero() {
            return Ok(0);
        }
        if let Some(r) = self.as_rational() {
            return Ok(if r.is_positive() { 1 } else { -1 });
        }
        let mut iv = self.field.isolating().clone();
        for _ in 0..=SIGN_DEPTH {
            let (lo, hi) = poly::eval_interval(&self.coeffs, &iv.0, &iv.1);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            iv = self.field.bisect(&iv)?;
        }
        let g = poly::gcd(&self.coeffs, self.field.monic());
        if g.len() > 1 {
            return Err(Error::FieldDefinition(
                "nonzero element vanishes at the root; minimal polynomial is reducible".into(),
            ));
        }
        Err(Error::SignDepthExceeded(SIGN_DEPTH))
    }

    pub fn cmp_exact(&self, other: &Scalar) -> Result<Ordering> {
        Ok((self - other).sign()?.cmp(&0))
    }

    pub fn abs(&self) -> Result<Self> {
        Ok(if self.sign()? < 0 { -self } else { self.clone() })
    }

    /// Float approximation refined until the enclosure half-width is at most
    /// 2^−precision times max(1, |value|). Precisions below 24 are raised to 24.
    pub fn float_shadow(&self, precision: u32) -> Shadow {
        let precision = precision.max(24);
        if let Some(r) = self.as_rational() {
            let value = rat_to_f64(r);
            let err = (BigRational::from_float(value).unwrap_or_default() - r).abs();
            let mut bound = rat_to_f64(&err);
            if bound > 0.0 || !err.is_zero() {
                bound = bound * (1.0 + 1e-15) + f64::MIN_POSITIVE;
            }
            return Shadow { value, error_bound: bound };
        }
        let scale = BigRational::new(BigInt::one(), BigInt::one() << precision);
        let mut iv = self.field.isolating().clone();
        let mut enc = poly::eval_interval(&self.coeffs, &iv.0, &iv.1);
        for _ in 0..(4 * SIGN_DEPTH) {
            let half = (&enc.1 - &enc.0) / BigRational::from_integer(2.into());
            let mag = enc.0.abs().max(enc.1.abs()).max(BigRational::one());
            if half <= &scale * &mag {
                break;
            }
            match self.field.bisect(&iv) {
                Ok(next) => iv = next,
                Err(_) => break,
            }
            enc = poly::eval_interval(&self.coeffs, &iv.0, &iv.1);
        }
        let two = BigRational::from_integer(2.into());
        let mid = (&enc.0 + &enc.1) / &two;
        let half = (&enc.1 - &enc.0) / &two;
        let maxabs = enc.0.abs().max(enc.1.abs());
        let value = rat_to_f64(&mid);
        let bound = (rat_to_f64(&half) + rat_to_f64(&maxabs) * f64::EPSILON) * (1.0 + 1e-12);
        Shadow { value, error_bound: bound }
    }

    /// Best double approximation.
    pub fn to_f64(&self) -> f64 {
        self.float_shadow(60).value
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> Result<BigInt> {
        if let Some(r) = self.as_rational() {
            return Ok(r.floor().to_integer());
        }
        let approx = self.float_shadow(64).value.floor();
        let mut m = BigRational::from_float(approx)
            .ok_or_else(|| Error::Domain("value is not finite".into()))?
            .to_integer();
        loop {
            let diff = self - &Scalar::from_rational(&self.field, BigRational::from_integer(m.clone()));
            if diff.sign()? < 0 {
                m -= 1;
                continue;
            }
            let next = &diff - &Scalar::one(&self.field);
            if next.sign()? >= 0 {
                m += 1;
                continue;
            }
            return Ok(m);
        }
    }

    /// Coordinates as "p/q" strings.
    pub fn to_strings(&self) -> Vec<String> {
        let mut out: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        while out.len() > 1 && out.last().is_some_and(|s| s == "0") {
            out.pop();
        }
        out
    }

    pub fn from_strings<S: AsRef<str>>(field: &Arc<NumberField>, parts: &[S]) -> Result<Self> {
        let coeffs = parts.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(field, coeffs)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field);
        self.coeffs == other.coeffs
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => c.to_string(),
                1 => format!("{c}*a"),
                _ => format!("{c}*a^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Scalar { field: self.field.clone(), coeffs }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Scalar { field: self.field.clone(), coeffs }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.field.degree() == 1 {
            return Scalar { field: self.field.clone(), coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]] };
        }
        Scalar::from_poly(&self.field, &poly::mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// ⟨a, b⟩ over the field.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero(a[0].field());
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = &acc + &(x * y);
    }
    acc
}


#[cfg(test)]
mod tests {
    use super::tests_support::{q, sqrt2};
    use super::*;

    #[test]
    fn sign_examples() {
        let f = sqrt2();
        let z = Scalar::zero(&f);
        assert_eq!(z.sign().unwrap(), 0);
        let s = Scalar::from_coeffs(&f, vec![q(-1, 1), q(1, 1)]).unwrap();
        assert_eq!(s.sign().unwrap(), 1);
        assert_eq!((-&s).sign().unwrap(), -1);
    }

    #[test]
    fn sign_close_to_zero() {
        // 99/70 and 665857/470832 lie above √2, 1393/985 below.
        let f = sqrt2();
        let s = Scalar::from_coeffs(&f, vec![q(-99, 70), q(1, 1)]).unwrap();
        assert_eq!(s.sign().unwrap(), -1);
        let s = Scalar::from_coeffs(&f, vec![q(-1393, 985), q(1, 1)]).unwrap();
        assert_eq!(s.sign().unwrap(), 1);
        let s = Scalar::from_coeffs(&f, vec![q(-665857, 470832), q(1, 1)]).unwrap();
        assert_eq!(s.sign().unwrap(), -1);
    }

    #[test]
    fn shadow_examples() {
        let f = NumberField::rationals();
        let s = Scalar::from_rational(&f, q(3, 2));
        assert_eq!(s.float_shadow(53), Shadow { value: 1.5, error_bound: 0.0 });
        let z = Scalar::zero(&f);
        assert_eq!(z.float_shadow(53), Shadow { value: 0.0, error_bound: 0.0 });
        let r2 = Scalar::generator(&sqrt2());
        for p in [24u32, 40, 52] {
            let sh = r2.float_shadow(p);
            assert!((sh.value - std::f64::consts::SQRT_2).abs() <= sh.error_bound + 1e-16);
            assert!(sh.error_bound <= 2f64.powi(-(p as i32)) * 4.0);
        }
    }

    #[test]
    fn inverse_and_division() {
        let f = sqrt2();
        let s = Scalar::from_coeffs(&f, vec![q(-1, 1), q(1, 1)]).unwrap();
        let inv = s.inv().unwrap();
        // 1/(√2 − 1) = √2 + 1
        assert_eq!(inv.coeffs(), &[q(1, 1), q(1, 1)]);
        assert!((&s * &inv).is_one());
        assert!(Scalar::zero(&f).inv().is_err());
    }

    #[test]
    fn field_validation() {
        let bad = NumberField::new(vec![(-2).into(), 0.into(), 1.into()], (q(-2, 1), q(2, 1)));
        assert!(matches!(bad, Err(Error::FieldDefinition(_))));
        let reducible = NumberField::new(vec![(-1).into(), 0.into(), 1.into()], (q(1, 2), q(2, 1)));
        assert!(matches!(reducible, Err(Error::FieldDefinition(_))));
        let quartic =
            NumberField::new(vec![(-2).into(), 0.into(), 0.into(), 0.into(), 1.into()], (q(1, 1), q(2, 1)))
                .unwrap();
        assert_eq!(quartic.irreducibility(), Irreducibility::Trusted);
        assert_eq!(sqrt2().irreducibility(), Irreducibility::Verified);
    }

    #[test]
    fn floor_of_irrationals() {
        let f = sqrt2();
        let r2 = Scalar::generator(&f);
        assert_eq!(r2.floor().unwrap(), BigInt::from(1));
        assert_eq!((-&r2).floor().unwrap(), BigInt::from(-2));
        let x = &r2 * &Scalar::from_int(&f, 100);
        assert_eq!(x.floor().unwrap(), BigInt::from(141));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
