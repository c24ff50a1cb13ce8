use std::fmt::Debug;
use std::ops::Neg;

use num::{BigInt, BigRational, Complex, Num, One, Signed, Zero};

use crate::Error;

/// Rational numbers.
pub type Rational = BigRational;
/// Gaussian rationals, `Q(i)`.
pub type Gaussian = Complex<Rational>;

/// An exact field with a (possibly trivial) conjugation.
///
/// Everything in this crate is generic over this trait; the two instances are
/// [`Rational`] (trivial conjugation) and [`Gaussian`].
pub trait Field: Clone + PartialEq + Debug + Num + Neg<Output = Self> + 'static {
    fn conj(&self) -> Self;
    fn from_rational(q: Rational) -> Self;
    fn real_part(&self) -> Rational;
    fn imag_part(&self) -> Rational;
    fn parse_exact(s: &str) -> Result<Self, Error>;
    fn to_exact(&self) -> String;

    fn is_real(&self) -> bool {
        self.imag_part().is_zero()
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn gauss(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re, im)
}

/// `i` as a Gaussian rational.
pub fn imag_unit() -> Gaussian {
    Complex::new(Rational::zero(), Rational::one())
}

/// `i^k` for any integer `k`.
pub fn i_pow(k: i64) -> Gaussian {
    match k.rem_euclid(4) {
        0 => Gaussian::one(),
        1 => imag_unit(),
        2 => -Gaussian::one(),
        _ => -imag_unit(),
    }
}

pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        let t = t.trim();
        let t = t.strip_prefix('+').unwrap_or(t);
        t.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer `{t}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

impl Field for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn real_part(&self) -> Rational {
        self.clone()
    }
    fn imag_part(&self) -> Rational {
        Rational::zero()
    }
    fn parse_exact(s: &str) -> Result<Self, Error> {
        parse_rational(s)
    }
    fn to_exact(&self) -> String {
        self.to_string()
    }
}

impl Field for Gaussian {
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn from_rational(q: Rational) -> Self {
        Complex::new(q, Rational::zero())
    }
    fn real_part(&self) -> Rational {
        self.re.clone()
    }
    fn imag_part(&self) -> Rational {
        self.im.clone()
    }

    /// Accepts `p/q`, `r/s i`, `p/q+r/s i`, `p/q-r/s i`, `i`, `-i`.
    fn parse_exact(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Self::from_rational(parse_rational(&t)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (parse_rational(&body[..k])?, &body[k..]),
            None => (Rational::zero(), body),
        };
        let im = match im {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other)?,
        };
        Ok(Complex::new(re, im))
    }

    fn to_exact(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => self.re.to_string(),
            (true, false) => format!("{} i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                format!("{}{}{} i", self.re, sign, self.im.abs())
            }
        }
    }
}
