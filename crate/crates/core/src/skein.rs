//! Elements of the bonded skein module in the free basis `{Θ^m H^n}`.
//!
//! A [`SkeinValue`] is a finite sum `Σ p_{m,n} Θ^m H^n` with [`Coefficient`]
//! entries; the pair `(0,0)` is the empty-link unit. Multiplication is the
//! disjoint union of diagrams, i.e. degree-wise convolution, and is
//! commutative. [`BivariateLaurent`] is the denominator-free ring
//! `Z[A^{±1}, Θ, H]` in which the reduced invariant lives.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use crate::coeff::Coefficient;
use crate::laurent::{self, IntLaurent};

/// Basis degrees: `theta` powers of Θ, `h` powers of H.
pub type Degrees = (u32, u32);

/// A module element `Σ p_{m,n} Θ^m H^n`; no stored coefficient is zero.
///
/// The zero element is the empty term map; the empty-link unit `∅` is the
/// `(0,0)` basis term with coefficient one. The two are distinct values.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SkeinValue {
    terms: BTreeMap<Degrees, Coefficient>,
}

impl SkeinValue {
    pub fn zero() -> Self {
        SkeinValue {
            terms: BTreeMap::new(),
        }
    }

    /// The empty-link unit `∅ = Θ^0 H^0`.
    pub fn unit() -> Self {
        SkeinValue::basis_term(0, 0, Coefficient::one())
    }

    /// The generator Θ.
    pub fn theta() -> Self {
        SkeinValue::basis_term(1, 0, Coefficient::one())
    }

    /// The generator H.
    pub fn handcuff() -> Self {
        SkeinValue::basis_term(0, 1, Coefficient::one())
    }

    /// `c · Θ^m H^n`.
    pub fn basis_term(m: u32, n: u32, c: Coefficient) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((m, n), c);
        }
        SkeinValue { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Degrees, &Coefficient)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn coefficient(&self, m: u32, n: u32) -> Coefficient {
        self.terms
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    fn add_term(&mut self, d: Degrees, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Multiplies every term by a scalar coefficient.
    pub fn scale(&self, c: &Coefficient) -> Self {
        if c.is_zero() {
            return SkeinValue::zero();
        }
        let mut out = SkeinValue::zero();
        for (d, p) in self.terms() {
            out.add_term(d, p * c);
        }
        out
    }

    /// Multiplies every term by a Laurent unit or polynomial.
    pub fn scale_laurent(&self, p: &IntLaurent) -> Self {
        self.scale(&Coefficient::from_laurent(p.clone()))
    }

    /// Substitutes `H ↦ δ·Θ`, collapsing every term onto pure Θ powers.
    /// This is the passage to the topological module and is a ring
    /// homomorphism.
    pub fn subst_topological(&self) -> Self {
        let delta = Coefficient::from_laurent(laurent::delta());
        let mut out = SkeinValue::zero();
        for ((m, n), c) in self.terms() {
            let mut factor = c.clone();
            for _ in 0..n {
                factor *= &delta;
            }
            out.add_term((m + n, 0), factor);
        }
        out
    }

    /// `true` iff no term carries an H degree.
    pub fn is_theta_only(&self) -> bool {
        self.terms.keys().all(|(_, n)| *n == 0)
    }

    /// Canonical text form, e.g.
    /// `(A^-12 + 2A^-8 + A^-4 + 1)/(f1^2 f2^2) * T^3`. Terms are sorted by
    /// `(theta, h)` degree; Θ prints as `T` to stay ASCII-safe; a coefficient
    /// of exactly one is omitted in front of a nonempty monomial.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let rendered: Vec<String> = self
            .terms()
            .map(|((m, n), c)| {
                let mono = monomial_string(m, n);
                if mono.is_empty() {
                    c.to_canonical_string()
                } else if c.is_one() {
                    mono
                } else {
                    alloc::format!("{} * {}", c.to_canonical_string(), mono)
                }
            })
            .collect();
        rendered.join(" + ")
    }

    /// Canonical JSON form
    /// `{"terms":[{"theta":m,"h":n,"num":[[exp,coef],...],"d1":a,"d2":b}]}`.
    pub fn to_json_string(&self) -> String {
        let mut out = String::from("{\"terms\":[");
        for (i, ((m, n), c)) in self.terms().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let (d1, d2) = c.denominator_exponents();
            out.push_str(&alloc::format!(
                "{{\"theta\":{},\"h\":{},\"num\":{},\"d1\":{},\"d2\":{}}}",
                m,
                n,
                c.numerator().to_json_string(),
                d1,
                d2
            ));
        }
        out.push_str("]}");
        out
    }
}

fn monomial_string(m: u32, n: u32) -> String {
    let mut mono = String::new();
    if m == 1 {
        mono.push('T');
    } else if m > 1 {
        mono.push_str(&alloc::format!("T^{}", m));
    }
    if n >= 1 {
        if !mono.is_empty() {
            mono.push(' ');
        }
        if n == 1 {
            mono.push('H');
        } else {
            mono.push_str(&alloc::format!("H^{}", n));
        }
    }
    mono
}

impl fmt::Debug for SkeinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkeinValue({})", self.to_canonical_string())
    }
}

impl fmt::Display for SkeinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl Add for &SkeinValue {
    type Output = SkeinValue;
    fn add(self, rhs: &SkeinValue) -> SkeinValue {
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d, c.clone());
        }
        out
    }
}

impl Sub for &SkeinValue {
    type Output = SkeinValue;
    fn sub(self, rhs: &SkeinValue) -> SkeinValue {
        self + &(-rhs)
    }
}

impl Mul for &SkeinValue {
    type Output = SkeinValue;
    fn mul(self, rhs: &SkeinValue) -> SkeinValue {
        let mut out = SkeinValue::zero();
        for ((m1, n1), c1) in self.terms() {
            for ((m2, n2), c2) in rhs.terms() {
                out.add_term((m1 + m2, n1 + n2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SkeinValue {
    type Output = SkeinValue;
    fn neg(self) -> SkeinValue {
        SkeinValue {
            terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl Neg for SkeinValue {
    type Output = SkeinValue;
    fn neg(self) -> SkeinValue {
        -&self
    }
}

impl AddAssign<&SkeinValue> for SkeinValue {
    fn add_assign(&mut self, rhs: &SkeinValue) {
        for (d, c) in rhs.terms.iter() {
            self.add_term(*d, c.clone());
        }
    }
}

impl MulAssign<&SkeinValue> for SkeinValue {
    fn mul_assign(&mut self, rhs: &SkeinValue) {
        *self = &*self * rhs;
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for SkeinValue {
            type Output = SkeinValue;
            fn $method(self, rhs: SkeinValue) -> SkeinValue {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&SkeinValue> for SkeinValue {
            type Output = SkeinValue;
            fn $method(self, rhs: &SkeinValue) -> SkeinValue {
                (&self).$method(rhs)
            }
        }
        impl $trait<SkeinValue> for &SkeinValue {
            type Output = SkeinValue;
            fn $method(self, rhs: SkeinValue) -> SkeinValue {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// `α = (δH − Θ)/(δμ)`: the coefficient attached to the strand-preserving
/// bond removal in the extraction identity.
pub fn alpha() -> SkeinValue {
    let inv = Coefficient::inv_delta_mu();
    let delta = Coefficient::from_laurent(laurent::delta());
    let mut v = SkeinValue::basis_term(0, 1, &delta * &inv);
    v += &SkeinValue::basis_term(1, 0, -&inv);
    v
}

/// `β = (δΘ − H)/(δμ)`: the coefficient attached to the strand-merging bond
/// removal in the extraction identity.
pub fn beta() -> SkeinValue {
    let inv = Coefficient::inv_delta_mu();
    let delta = Coefficient::from_laurent(laurent::delta());
    let mut v = SkeinValue::basis_term(1, 0, &delta * &inv);
    v += &SkeinValue::basis_term(0, 1, -&inv);
    v
}

/// The named constants `(δ, μ, α, β)` of the extraction calculus.
pub fn constants() -> (IntLaurent, IntLaurent, SkeinValue, SkeinValue) {
    (laurent::delta(), laurent::mu(), alpha(), beta())
}

/// An element of `Z[A^{±1}, Θ, H]`: the codomain of the reduced invariant.
/// Stored grouped by `(theta, h)` degrees with Laurent coefficients; no zero
/// coefficients are kept.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivariateLaurent {
    terms: BTreeMap<Degrees, IntLaurent>,
}

impl BivariateLaurent {
    pub fn zero() -> Self {
        BivariateLaurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_parts<I>(parts: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), IntLaurent)>,
    {
        let mut out = BivariateLaurent::zero();
        for (d, p) in parts {
            out.insert(d, p);
        }
        out
    }

    pub fn insert(&mut self, d: Degrees, p: IntLaurent) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Degrees, &IntLaurent)> {
        self.terms.iter().map(|(d, p)| (*d, p))
    }

    pub fn coefficient(&self, m: u32, n: u32) -> IntLaurent {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(IntLaurent::zero)
    }

    /// Canonical text form mirroring [`SkeinValue::to_canonical_string`].
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let rendered: Vec<String> = self
            .terms()
            .map(|((m, n), p)| {
                let mono = monomial_string(m, n);
                let multi = p.terms().count() > 1;
                let coeff = if multi {
                    alloc::format!("({})", p.to_canonical_string())
                } else {
                    p.to_canonical_string()
                };
                if mono.is_empty() {
                    coeff
                } else if p.is_one() {
                    mono
                } else {
                    alloc::format!("{} * {}", coeff, mono)
                }
            })
            .collect();
        rendered.join(" + ")
    }

    /// Canonical JSON form sharing the [`SkeinValue`] schema (with
    /// denominator exponents pinned to zero).
    pub fn to_json_string(&self) -> String {
        let mut out = String::from("{\"terms\":[");
        for (i, ((m, n), p)) in self.terms().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&alloc::format!(
                "{{\"theta\":{},\"h\":{},\"num\":{},\"d1\":0,\"d2\":0}}",
                m,
                n,
                p.to_json_string()
            ));
        }
        out.push_str("]}");
        out
    }
}

impl fmt::Debug for BivariateLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivariateLaurent({})", self.to_canonical_string())
    }
}

impl fmt::Display for BivariateLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::delta;

    fn delta_power(k: u32) -> SkeinValue {
        SkeinValue::unit().scale_laurent(&delta().pow(k))
    }

    #[test]
    fn addition_examples() {
        let sum = &SkeinValue::theta() + &SkeinValue::handcuff();
        assert_eq!(sum.coefficient(1, 0), Coefficient::one());
        assert_eq!(sum.coefficient(0, 1), Coefficient::one());
        let u = SkeinValue::basis_term(2, 1, Coefficient::inv_delta());
        assert_eq!(&u + &SkeinValue::zero(), u);
        let z = &SkeinValue::theta() - &SkeinValue::theta();
        assert!(z.is_zero());
    }

    #[test]
    fn multiplication_examples() {
        let th = &SkeinValue::theta() * &SkeinValue::handcuff();
        assert_eq!(th, SkeinValue::basis_term(1, 1, Coefficient::one()));
        let u = SkeinValue::basis_term(3, 2, Coefficient::inv_mu());
        assert_eq!(&u * &SkeinValue::unit(), u);
        // (Θ+H)(Θ−H) = Θ² − H²
        let p = &SkeinValue::theta() + &SkeinValue::handcuff();
        let q = &SkeinValue::theta() - &SkeinValue::handcuff();
        let prod = &p * &q;
        let mut expect = SkeinValue::basis_term(2, 0, Coefficient::one());
        expect += &SkeinValue::basis_term(0, 2, -&Coefficient::one());
        assert_eq!(prod, expect);
    }

    #[test]
    fn substitution_examples() {
        // H ↦ δΘ
        let h = SkeinValue::handcuff().subst_topological();
        assert_eq!(
            h,
            SkeinValue::basis_term(1, 0, Coefficient::from_laurent(delta()))
        );
        // Θ^k fixed
        let t3 = SkeinValue::basis_term(3, 0, Coefficient::one());
        assert_eq!(t3.subst_topological(), t3);
    }

    #[test]
    fn extraction_constants_fix_the_generators() {
        // α·δ + β·δ² = Θ and α·δ² + β·δ = H
        let a = alpha();
        let b = beta();
        let lhs_theta = &a * &delta_power(1) + &b * &delta_power(2);
        assert_eq!(lhs_theta, SkeinValue::theta());
        let lhs_h = &a * &delta_power(2) + &b * &delta_power(1);
        assert_eq!(lhs_h, SkeinValue::handcuff());
    }

    #[test]
    fn substitution_is_ring_homomorphism_on_extraction_constants() {
        // α ↦ Θ/δ and β ↦ 0 under H = δΘ
        let a_top = alpha().subst_topological();
        assert_eq!(
            a_top,
            SkeinValue::basis_term(1, 0, Coefficient::inv_delta())
        );
        assert!(beta().subst_topological().is_zero());
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(SkeinValue::theta().to_canonical_string(), "T");
        assert_eq!(SkeinValue::handcuff().to_canonical_string(), "H");
        assert_eq!(SkeinValue::unit().to_canonical_string(), "1");
        assert_eq!(SkeinValue::zero().to_canonical_string(), "0");
        let v = SkeinValue::basis_term(3, 0, Coefficient::new(IntLaurent::monomial(4, 1), 2, 0));
        assert_eq!(v.to_canonical_string(), "(A^4)/(f1^2) * T^3");
        let w = SkeinValue::basis_term(1, 2, Coefficient::one());
        assert_eq!(w.to_canonical_string(), "T H^2");
    }

    #[test]
    fn json_form() {
        let v = SkeinValue::basis_term(1, 0, Coefficient::inv_delta());
        assert_eq!(
            v.to_json_string(),
            "{\"terms\":[{\"theta\":1,\"h\":0,\"num\":[[2,-1]],\"d1\":1,\"d2\":0}]}"
        );
    }
}
