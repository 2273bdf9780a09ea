//! Coefficients of the skein module: fractions `num / (f1^d1 · f2^d2)`.
//!
//! The coefficient ring only ever inverts the unit `A` and the two fixed
//! factors `f1 = 1 + A^4` and `f2 = 1 + A^4 + A^8`, so denominators are
//! tracked as a pair of exponents over those factors instead of general
//! rational functions. Units `±A^k` always stay in the numerator; `δ` and
//! `μ` themselves are rewritten through `δ = -A^{-2}·f1` and `μ = A^{-4}·f2`.
//!
//! Canonical form: whenever `d1 > 0` the numerator is not divisible by `f1`,
//! and likewise for `d2`/`f2`. All constructors reduce to canonical form, so
//! equality is plain structural equality.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use crate::laurent::{self, IntLaurent};

/// `num / (f1^d1 · f2^d2)` in canonical (fully cancelled) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coefficient {
    num: IntLaurent,
    d1: u32,
    d2: u32,
}

impl Coefficient {
    /// Builds and canonicalizes a coefficient.
    pub fn new(num: IntLaurent, d1: u32, d2: u32) -> Self {
        let mut c = Coefficient { num, d1, d2 };
        c.reduce();
        c
    }

    /// A denominator-free coefficient.
    pub fn from_laurent(num: IntLaurent) -> Self {
        Coefficient { num, d1: 0, d2: 0 }
    }

    pub fn zero() -> Self {
        Coefficient::from_laurent(IntLaurent::zero())
    }

    pub fn one() -> Self {
        Coefficient::from_laurent(IntLaurent::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.d1 == 0 && self.d2 == 0 && self.num.is_one()
    }

    pub fn numerator(&self) -> &IntLaurent {
        &self.num
    }

    pub fn denominator_exponents(&self) -> (u32, u32) {
        (self.d1, self.d2)
    }

    /// Cancels `f1`/`f2` factors of the numerator against the denominator
    /// exponents until the canonical-form invariant holds. Idempotent.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.d1 = 0;
            self.d2 = 0;
            return;
        }
        let f1 = laurent::f1();
        while self.d1 > 0 {
            match self.num.exact_div(&f1) {
                Some(q) => {
                    self.num = q;
                    self.d1 -= 1;
                }
                None => break,
            }
        }
        let f2 = laurent::f2();
        while self.d2 > 0 {
            match self.num.exact_div(&f2) {
                Some(q) => {
                    self.num = q;
                    self.d2 -= 1;
                }
                None => break,
            }
        }
    }

    /// `1/δ = -A^2 / f1`.
    pub fn inv_delta() -> Self {
        Coefficient::new(IntLaurent::monomial(2, -1), 1, 0)
    }

    /// `1/μ = A^4 / f2`.
    pub fn inv_mu() -> Self {
        Coefficient::new(IntLaurent::monomial(4, 1), 0, 1)
    }

    /// `1/(δμ) = -A^6 / (f1·f2)`.
    pub fn inv_delta_mu() -> Self {
        Coefficient::new(IntLaurent::monomial(6, -1), 1, 1)
    }

    /// Multiplies by a plain Laurent polynomial.
    pub fn scale(&self, p: &IntLaurent) -> Self {
        Coefficient::new(&self.num * p, self.d1, self.d2)
    }

    /// Clears the denominator against the multiplier `f1^e1 · f2^e2`,
    /// returning the resulting Laurent polynomial when the multiplier covers
    /// the denominator exactly; `None` signals a residual denominator.
    pub fn clear_denominator(&self, e1: u32, e2: u32) -> Option<IntLaurent> {
        if self.num.is_zero() {
            return Some(IntLaurent::zero());
        }
        if e1 < self.d1 || e2 < self.d2 {
            return None;
        }
        let mut out = self.num.clone();
        out = &out * &laurent::f1().pow(e1 - self.d1);
        out = &out * &laurent::f2().pow(e2 - self.d2);
        Some(out)
    }

    /// Canonical text: `num` bare when denominator-free and a single term,
    /// `(num)` when denominator-free with several terms, otherwise
    /// `(num)/(f1^a f2^b)`.
    pub fn to_canonical_string(&self) -> String {
        let num = self.num.to_canonical_string();
        let num_terms = self.num.terms().count();
        if self.d1 == 0 && self.d2 == 0 {
            return if num_terms > 1 {
                alloc::format!("({})", num)
            } else {
                num
            };
        }
        let mut den = String::new();
        if self.d1 > 0 {
            den.push_str("f1");
            if self.d1 > 1 {
                den.push_str(&alloc::format!("^{}", self.d1));
            }
        }
        if self.d2 > 0 {
            if !den.is_empty() {
                den.push(' ');
            }
            den.push_str("f2");
            if self.d2 > 1 {
                den.push_str(&alloc::format!("^{}", self.d2));
            }
        }
        alloc::format!("({})/({})", num, den)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coefficient({})", self.to_canonical_string())
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let d1 = self.d1.max(rhs.d1);
        let d2 = self.d2.max(rhs.d2);
        let lift = |c: &Coefficient| -> IntLaurent {
            let mut n = c.num.clone();
            n = &n * &laurent::f1().pow(d1 - c.d1);
            n = &n * &laurent::f2().pow(d2 - c.d2);
            n
        };
        Coefficient::new(&lift(self) + &lift(rhs), d1, d2)
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        Coefficient::new(&self.num * &rhs.num, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            num: -&self.num,
            d1: self.d1,
            d2: self.d2,
        }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        *self = &*self + rhs;
    }
}

impl MulAssign<&Coefficient> for Coefficient {
    fn mul_assign(&mut self, rhs: &Coefficient) {
        *self = &*self * rhs;
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: Coefficient) -> Coefficient {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: &Coefficient) -> Coefficient {
                (&self).$method(rhs)
            }
        }
        impl $trait<Coefficient> for &Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: Coefficient) -> Coefficient {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{delta, f1, mu};

    #[test]
    fn full_cancellation() {
        // ((1+A^4)·A^2)/f1 reduces to A^2
        let c = Coefficient::new(&f1() * &IntLaurent::monomial(2, 1), 1, 0);
        assert_eq!(c, Coefficient::from_laurent(IntLaurent::monomial(2, 1)));
    }

    #[test]
    fn already_canonical_is_untouched() {
        let c = Coefficient::new(IntLaurent::monomial(2, 1), 1, 1);
        assert_eq!(c.denominator_exponents(), (1, 1));
        assert_eq!(c.numerator(), &IntLaurent::monomial(2, 1));
    }

    #[test]
    fn mu_as_numerator_cancels_f2() {
        // μ·A^4 = f2, so (μ·A^4)/f2 = 1
        let c = Coefficient::new(&mu() * &IntLaurent::monomial(4, 1), 0, 1);
        assert_eq!(c, Coefficient::one());
    }

    #[test]
    fn inverses_multiply_to_one() {
        let d = Coefficient::from_laurent(delta());
        assert_eq!(&d * &Coefficient::inv_delta(), Coefficient::one());
        let m = Coefficient::from_laurent(mu());
        assert_eq!(&m * &Coefficient::inv_mu(), Coefficient::one());
        let dm = &d * &m;
        assert_eq!(&dm * &Coefficient::inv_delta_mu(), Coefficient::one());
    }

    #[test]
    fn addition_over_common_denominator() {
        // 1/δ + 1/δ = 2/δ = -2A^2/f1
        let two_over_delta = &Coefficient::inv_delta() + &Coefficient::inv_delta();
        assert_eq!(
            two_over_delta,
            Coefficient::new(IntLaurent::monomial(2, -2), 1, 0)
        );
        // 1/δ − 1/δ = 0
        let z = &Coefficient::inv_delta() - &Coefficient::inv_delta();
        assert!(z.is_zero());
        assert_eq!(z.denominator_exponents(), (0, 0));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(Coefficient::one().to_canonical_string(), "1");
        assert_eq!(
            Coefficient::inv_delta().to_canonical_string(),
            "(-A^2)/(f1)"
        );
        assert_eq!(
            Coefficient::new(IntLaurent::monomial(4, 1), 2, 0).to_canonical_string(),
            "(A^4)/(f1^2)"
        );
        let c = Coefficient::new(
            IntLaurent::from_terms([(0i64, 1i64), (4, 2)]),
            1,
            2,
        );
        assert_eq!(c.to_canonical_string(), "(1 + 2A^4)/(f1 f2^2)");
    }
}
