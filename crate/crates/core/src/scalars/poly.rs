//! Dense univariate polynomials over Q, coefficients low degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Poly = Vec<BigRational>;

pub(crate) fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn from_ints(c: &[BigInt]) -> Poly {
    let mut p: Poly = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    trim(&mut p);
    p
}

pub(crate) fn sub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    let mut out: Poly = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[BigRational], s: &BigRational) -> Poly {
    let mut out: Poly = a.iter().map(|c| c * s).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[BigRational], b: &[BigRational]) -> Poly {
    divrem(a, b).1
}

pub(crate) fn monic(a: &[BigRational]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = a[d].recip();
            scale(a, &inv)
        }
    }
}

pub(crate) fn gcd(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Returns `(g, s)` with `s*a ≡ g (mod m)` and `g` monic.
pub(crate) fn ext_gcd(a: &[BigRational], m: &[BigRational]) -> (Poly, Poly) {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let d = degree(&r0).expect("gcd of nonzero input");
    let inv = r0[d].recip();
    (scale(&r0, &inv), scale(&s0, &inv))
}

pub(crate) fn derivative(p: &[BigRational]) -> Poly {
    let mut out: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn imul(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let c = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = c.iter().min().unwrap().clone();
    let hi = c.iter().max().unwrap().clone();
    (lo, hi)
}

/// Interval Horner enclosure of `p` over `[lo, hi]`.
pub(crate) fn eval_interval(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let x = (lo.clone(), hi.clone());
    let mut acc = (BigRational::zero(), BigRational::zero());
    for c in p.iter().rev() {
        let m = imul(&acc, &x);
        acc = (m.0 + c, m.1 + c);
    }
    acc
}

pub(crate) fn sturm_sequence(p: &[BigRational]) -> Vec<Poly> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.iter().map(|c| -c).collect());
    }
    seq
}

fn variations(seq: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = eval(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`.
pub(crate) fn count_roots(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> usize {
    let seq = sturm_sequence(p);
    variations(&seq, lo).saturating_sub(variations(&seq, hi))
}

fn small_divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let small: u64 = n.clone().try_into().ok()?;
    if small > limit {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= small {
        if small.is_multiple_of(i) {
            out.push(BigInt::from(i));
            if i * i != small {
                out.push(BigInt::from(small / i));
            }
        }
        i += 1;
    }
    Some(out)
}

/// Rational roots of an integer polynomial by the rational root test.
/// `None` when the coefficients are too large to enumerate divisors.
pub(crate) fn rational_roots(c: &[BigInt]) -> Option<Vec<BigRational>> {
    let p = from_ints(c);
    let mut roots = Vec::new();
    let low = c.iter().position(|x| !x.is_zero())?;
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let top = degree(&p)?;
    let lim = 1_000_000_000_000u64;
    let ps = small_divisors(&c[low], lim)?;
    let qs = small_divisors(&c[top], lim)?;
    for a in &ps {
        for b in &qs {
            if a.gcd(b) != BigInt::one() {
                continue;
            }
            for cand in [BigRational::new(a.clone(), b.clone()), BigRational::new(-a.clone(), b.clone())] {
                if eval(&p, &cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}
