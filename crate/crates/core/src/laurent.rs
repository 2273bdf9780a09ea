//! Exact sparse Laurent polynomials in the variable `A`.
//!
//! Coefficients are arbitrary-precision integers: bracket state sums multiply
//! long runs of binomial-like factors and fixed-width arithmetic would
//! overflow silently. Terms are kept in a `BTreeMap` from exponent to nonzero
//! coefficient, so iteration order (and therefore every serialized form) is
//! deterministic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial `Σ c_k · A^k` with integer coefficients.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl IntLaurent {
    /// The zero polynomial.
    pub fn zero() -> Self {
        IntLaurent {
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        IntLaurent::monomial(0, 1)
    }

    /// `c · A^exp`.
    pub fn monomial(exp: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        IntLaurent { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// duplicates and dropping zeros.
    pub fn from_terms<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = IntLaurent::zero();
        for (exp, c) in pairs {
            p.add_term(exp, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `true` iff the polynomial is exactly `1`.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&0)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// Iterates `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by the unit `A^k`.
    pub fn shifted(&self, k: i64) -> Self {
        IntLaurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The value at `A = 1`, i.e. the coefficient sum.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Raises to a nonnegative power by repeated multiplication.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = IntLaurent::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division in `Z[A^{±1}]`: returns `q` with `self = f · q`, or
    /// `None` when no such Laurent polynomial exists. `f` must be nonzero.
    ///
    /// Laurent units `A^k` are stripped off both operands (any quotient must
    /// then live in `Z[A]` with nonzero constant term), after which ordinary
    /// long division by leading terms runs in `Z[A]`; every leading-term
    /// coefficient division must be exact over the integers and the final
    /// remainder must vanish.
    pub fn exact_div(&self, f: &IntLaurent) -> Option<IntLaurent> {
        assert!(!f.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(IntLaurent::zero());
        }
        let shift = self.min_exp().unwrap() - f.min_exp().unwrap();
        let mut rem = self.shifted(-self.min_exp().unwrap());
        let div = f.shifted(-f.min_exp().unwrap());
        let div_deg = div.max_exp().unwrap();
        let div_lead = div.terms.get(&div_deg).unwrap().clone();
        let mut quot = IntLaurent::zero();
        while !rem.is_zero() {
            let rem_deg = rem.max_exp().unwrap();
            if rem_deg < div_deg {
                return None;
            }
            let r_lead = rem.terms.get(&rem_deg).unwrap();
            if (r_lead % &div_lead) != BigInt::zero() {
                return None;
            }
            let t = IntLaurent::monomial(rem_deg - div_deg, r_lead / &div_lead);
            rem -= &(&t * &div);
            quot += &t;
        }
        Some(quot.shifted(shift))
    }

    /// Canonical human-readable form: terms in ascending exponent order,
    /// e.g. `A^-12 + 2A^-8 + A^-4 + 1` or `-A^18 - A^10`.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (exp, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_part = if mag.is_one() && exp != 0 {
                String::new()
            } else {
                alloc::format!("{}", mag)
            };
            out.push_str(&coeff_part);
            if exp == 1 {
                out.push('A');
            } else if exp != 0 {
                out.push_str(&alloc::format!("A^{}", exp));
            }
        }
        out
    }

    /// JSON array form `[[exp, coeff], ...]`, exponents ascending. The
    /// coefficient is emitted as a bare (arbitrary-precision) integer.
    pub fn to_json_string(&self) -> String {
        let mut out = String::from("[");
        for (i, (exp, c)) in self.terms().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&alloc::format!("[{},{}]", exp, c));
        }
        out.push(']');
        out
    }
}

/// `δ = -A^2 - A^{-2}`, the value of a disjoint trivial circle.
pub fn delta() -> IntLaurent {
    IntLaurent::from_terms([(2i64, -1i32), (-2, -1)])
}

/// `μ = A^{-4} + 1 + A^4`; satisfies `δ² - 1 = μ`.
pub fn mu() -> IntLaurent {
    IntLaurent::from_terms([(-4i64, 1i32), (0, 1), (4, 1)])
}

/// `f1 = 1 + A^4`, the first invertible denominator factor.
pub fn f1() -> IntLaurent {
    IntLaurent::from_terms([(0i64, 1i32), (4, 1)])
}

/// `f2 = 1 + A^4 + A^8`, the second invertible denominator factor.
pub fn f2() -> IntLaurent {
    IntLaurent::from_terms([(0i64, 1i32), (4, 1), (8, 1)])
}

impl fmt::Debug for IntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntLaurent({})", self.to_canonical_string())
    }
}

impl fmt::Display for IntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl Add for &IntLaurent {
    type Output = IntLaurent;
    fn add(self, rhs: &IntLaurent) -> IntLaurent {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl AddAssign<&IntLaurent> for IntLaurent {
    fn add_assign(&mut self, rhs: &IntLaurent) {
        for (e, c) in rhs.terms.iter() {
            self.add_term(*e, c.clone());
        }
    }
}

impl Sub for &IntLaurent {
    type Output = IntLaurent;
    fn sub(self, rhs: &IntLaurent) -> IntLaurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&IntLaurent> for IntLaurent {
    fn sub_assign(&mut self, rhs: &IntLaurent) {
        for (e, c) in rhs.terms.iter() {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Mul for &IntLaurent {
    type Output = IntLaurent;
    fn mul(self, rhs: &IntLaurent) -> IntLaurent {
        let mut out = IntLaurent::zero();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in rhs.terms.iter() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl MulAssign<&IntLaurent> for IntLaurent {
    fn mul_assign(&mut self, rhs: &IntLaurent) {
        *self = &*self * rhs;
    }
}

impl Neg for &IntLaurent {
    type Output = IntLaurent;
    fn neg(self) -> IntLaurent {
        IntLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for IntLaurent {
            type Output = IntLaurent;
            fn $method(self, rhs: IntLaurent) -> IntLaurent {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&IntLaurent> for IntLaurent {
            type Output = IntLaurent;
            fn $method(self, rhs: &IntLaurent) -> IntLaurent {
                (&self).$method(rhs)
            }
        }
        impl $trait<IntLaurent> for &IntLaurent {
            type Output = IntLaurent;
            fn $method(self, rhs: IntLaurent) -> IntLaurent {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for IntLaurent {
    type Output = IntLaurent;
    fn neg(self) -> IntLaurent {
        -&self
    }
}

/// Convenience: `pairs.collect::<IntLaurent>()` style construction is not
/// provided; use [`IntLaurent::from_terms`].
#[allow(unused)]
fn _doc_anchor() {}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pairs: &[(i64, i64)]) -> IntLaurent {
        IntLaurent::from_terms(pairs.iter().copied())
    }

    #[test]
    fn addition_cancels_and_keeps_identity() {
        // (A^2 + 1) + (-1) = A^2
        let lhs = &p(&[(2, 1), (0, 1)]) + &p(&[(0, -1)]);
        assert_eq!(lhs, p(&[(2, 1)]));
        // p + 0 = p
        let q = p(&[(5, 3), (-1, -2)]);
        assert_eq!(&q + &IntLaurent::zero(), q);
        // (1+A^4) + (A^4+A^8) = 1 + 2A^4 + A^8
        assert_eq!(
            &f1() + &p(&[(4, 1), (8, 1)]),
            p(&[(0, 1), (4, 2), (8, 1)])
        );
    }

    #[test]
    fn delta_squared_minus_one_is_mu() {
        // δ·δ = A^4 + 2 + A^-4
        let d2 = &delta() * &delta();
        assert_eq!(d2, p(&[(4, 1), (0, 2), (-4, 1)]));
        // δ² − 1 = μ
        assert_eq!(&d2 - &IntLaurent::one(), mu());
        // p·1 = p
        let q = p(&[(3, 7), (0, -1)]);
        assert_eq!(&q * &IntLaurent::one(), q);
    }

    #[test]
    fn exact_division_examples() {
        // (1 + 2A^4 + A^8) / (1+A^4) = 1+A^4
        let num = p(&[(0, 1), (4, 2), (8, 1)]);
        assert_eq!(num.exact_div(&f1()), Some(f1()));
        // p / 1 = p
        let q = p(&[(9, 2), (-3, 5)]);
        assert_eq!(q.exact_div(&IntLaurent::one()), Some(q.clone()));
        // (1+A^4) / (1+A^4+A^8) fails
        assert_eq!(f1().exact_div(&f2()), None);
        // non-monic leading coefficient must divide
        assert_eq!(p(&[(0, 3)]).exact_div(&p(&[(0, 2)])), None);
        assert_eq!(p(&[(0, 6)]).exact_div(&p(&[(0, 2)])), Some(p(&[(0, 3)])));
    }

    #[test]
    fn exact_division_with_units_and_delta() {
        // δ = -A^{-2}·f1, so δ·f2 / f1 must come out exactly.
        let prod = &delta() * &f2();
        let q = prod.exact_div(&f1()).expect("divisible");
        assert_eq!(&q * &f1(), prod);
        // and dividing the product by δ itself recovers f2
        let q2 = prod.exact_div(&delta()).expect("divisible");
        assert_eq!(q2, f2());
    }

    #[test]
    fn delta_at_one_is_minus_two() {
        assert_eq!(delta().eval_at_one(), BigInt::from(-2));
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(IntLaurent::zero().to_canonical_string(), "0");
        assert_eq!(
            p(&[(-12, 1), (-8, 2), (-4, 1), (0, 1)]).to_canonical_string(),
            "A^-12 + 2A^-8 + A^-4 + 1"
        );
        assert_eq!(
            p(&[(18, -1), (10, -1)]).to_canonical_string(),
            "-A^10 - A^18"
        );
        assert_eq!(p(&[(1, 1), (0, -3)]).to_canonical_string(), "-3 + A");
        assert_eq!(delta().to_canonical_string(), "-A^-2 - A^2");
    }
}
