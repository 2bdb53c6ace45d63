//! Rational enclosures of natural logarithms, independent of the f64
//! interval code used by the calculators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::setcore::int_rational;

/// Closed rational interval.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Span {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Span {
    pub fn exact(v: BigRational) -> Span {
        Span { lo: v.clone(), hi: v }
    }

    pub fn add(&self, o: &Span) -> Span {
        Span {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn mul(&self, o: &Span) -> Span {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        Span {
            lo: p.iter().min().unwrap().clone(),
            hi: p.iter().max().unwrap().clone(),
        }
    }

    /// Division by a strictly positive interval.
    pub fn div(&self, o: &Span) -> Span {
        assert!(o.lo.is_positive(), "divisor must be positive");
        self.mul(&Span {
            lo: o.hi.recip(),
            hi: o.lo.recip(),
        })
    }

    pub fn max(&self, o: &Span) -> Span {
        Span {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }
}

const TERMS: u32 = 48;

/// `atanh z` for `0 <= z <= 1/3`.
fn atanh(z: &BigRational) -> Span {
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = BigRational::zero();
    for i in 0..TERMS {
        sum += &power / int_rational(2 * i as i64 + 1);
        power = &power * &z2;
    }
    // remaining terms are below z^(2N+1) / ((2N+1)(1 - z^2))
    let tail = &power / (int_rational(2 * TERMS as i64 + 1) * (BigRational::one() - &z2));
    Span {
        hi: &sum + tail,
        lo: sum,
    }
}

/// `ln 2 = 2 atanh(1/3)`.
fn ln2() -> Span {
    let a = atanh(&BigRational::new(1.into(), 3.into()));
    Span {
        lo: &a.lo * int_rational(2),
        hi: &a.hi * int_rational(2),
    }
}

/// Enclosure of `ln x`, `x > 0`, of width far below `2^-100`.
pub(crate) fn ln(x: &BigRational) -> Span {
    assert!(x.is_positive(), "ln needs a positive argument");
    let two = int_rational(2);
    let mut y = x.clone();
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    if e > 0 {
        y /= BigRational::from_integer(BigInt::one() << e as usize);
    } else if e < 0 {
        y *= BigRational::from_integer(BigInt::one() << (-e) as usize);
    }
    while y >= two {
        y /= &two;
        e += 1;
    }
    while y < BigRational::one() {
        y *= &two;
        e -= 1;
    }
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let a = atanh(&z);
    let frac = Span {
        lo: &a.lo * &two,
        hi: &a.hi * &two,
    };
    Span::exact(int_rational(e)).mul(&ln2()).add(&frac)
}
