//! Canonical phase-space functions.
//!
//! An [`Expr`] is a finite sum of terms `c · q^a · p^b · exp(i α·p)` with
//! Gaussian-rational `c`, non-negative integer exponents and rational
//! frequency vector `α`. The class is closed under products and partial
//! derivatives, and the representation is canonical: terms live in a
//! `BTreeMap` keyed by `(α, q-exponents, p-exponents)` and zero coefficients
//! are never stored, so structural equality is semantic equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::Ratio;
use num_traits::{CheckedAdd, One, Signed, Zero};

use crate::scalar::{fmt_rational, Coeff, ExactReal};

/// A canonical coordinate of `T*R³`, ordered `q1 < q2 < q3 < p1 < p2 < p3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Q1,
    Q2,
    Q3,
    P1,
    P2,
    P3,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::Q1, Var::Q2, Var::Q3, Var::P1, Var::P2, Var::P3];
    pub const POSITIONS: [Var; 3] = [Var::Q1, Var::Q2, Var::Q3];
    pub const MOMENTA: [Var; 3] = [Var::P1, Var::P2, Var::P3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    /// Position coordinate along `axis` (0-based).
    pub fn q(axis: usize) -> Var {
        Var::POSITIONS[axis]
    }

    /// Momentum coordinate along `axis` (0-based).
    pub fn p(axis: usize) -> Var {
        Var::MOMENTA[axis]
    }

    pub fn is_momentum(self) -> bool {
        self.index() >= 3
    }

    pub fn axis(self) -> usize {
        self.index() % 3
    }

    pub fn name(self) -> &'static str {
        ["q1", "q2", "q3", "p1", "p2", "p3"][self.index()]
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Frequency vector `α` of a momentum exponential `exp(i α·p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Freq(pub [Ratio<i64>; 3]);

impl Freq {
    pub const ZERO: Freq = Freq([Ratio::new_raw(0, 1); 3]);

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn checked_add(&self, other: &Freq) -> Freq {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0.iter()) {
            *o = o
                .checked_add(b)
                .expect("exponential frequency overflowed i64 rationals");
        }
        Freq(out)
    }
}

/// Multi-index of partial derivatives: how many times each coordinate is
/// differentiated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Deriv(pub [u8; 6]);

impl Deriv {
    pub const NONE: Deriv = Deriv([0; 6]);

    pub fn of(vars: &[Var]) -> Deriv {
        let mut d = Deriv::NONE;
        for v in vars {
            d.0[v.index()] += 1;
        }
        d
    }

    pub fn single(v: Var) -> Deriv {
        Deriv::of(&[v])
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn with(mut self, v: Var) -> Deriv {
        self.0[v.index()] += 1;
        self
    }

    /// The variables of the multi-index with repetition, in canonical order.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, self.0[v.index()] as usize))
            .collect()
    }
}

impl fmt::Display for Deriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars();
        if vars.is_empty() {
            return f.write_str("1");
        }
        let names: Vec<_> = vars.iter().map(|v| format!("d{}", v.name())).collect();
        f.write_str(&names.join(" "))
    }
}

/// Key of a single term: the frequency of the exponential factor and the
/// six polynomial exponents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub freq: Freq,
    pub exps: [u16; 6],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        freq: Freq::ZERO,
        exps: [0; 6],
    };

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = e.checked_add(*o).expect("monomial exponent overflow");
        }
        Monomial {
            freq: if other.freq.is_zero() {
                self.freq
            } else if self.freq.is_zero() {
                other.freq
            } else {
                self.freq.checked_add(&other.freq)
            },
            exps,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::ONE
    }

    fn depends_on_q(&self) -> bool {
        self.exps[..3].iter().any(|&e| e > 0)
    }

    fn depends_on_p(&self) -> bool {
        self.exps[3..].iter().any(|&e| e > 0) || !self.freq.is_zero()
    }
}

/// A canonical exact phase-space function.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr<C: Coeff> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for Expr<C> {
    fn default() -> Self {
        Expr::zero()
    }
}

impl<C: Coeff> Expr<C> {
    pub fn zero() -> Self {
        Expr {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Expr::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Expr::term(c, Monomial::ONE)
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(C::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Expr::constant(C::from_ratio(num, den))
    }

    /// The imaginary unit as a constant function.
    pub fn i() -> Self {
        Expr::constant(C::i())
    }

    pub fn var(v: Var) -> Self {
        let mut exps = [0; 6];
        exps[v.index()] = 1;
        Expr::term(C::one(), Monomial { freq: Freq::ZERO, exps })
    }

    /// `exp(i α·p)`.
    pub fn exp_i(freq: Freq) -> Self {
        Expr::term(C::one(), Monomial { freq, exps: [0; 6] })
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    /// Builds an expression from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(it: I) -> Self {
        let mut out = Expr::zero();
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// The value if this is a constant function.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn depends_on_q(&self) -> bool {
        self.terms.keys().any(Monomial::depends_on_q)
    }

    pub fn depends_on_p(&self) -> bool {
        self.terms.keys().any(Monomial::depends_on_p)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        !self.partial(v).is_zero()
    }

    /// True if no term carries momentum dependence.
    pub fn is_position_only(&self) -> bool {
        !self.depends_on_p()
    }

    pub fn is_momentum_only(&self) -> bool {
        !self.depends_on_q()
    }

    pub fn has_exponentials(&self) -> bool {
        self.terms.keys().any(|m| !m.freq.is_zero())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.mul_ref(s)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&C::from_ratio(num, den))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Expr::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Exact partial derivative.
    pub fn partial(&self, v: Var) -> Self {
        let k = v.index();
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let e = m.exps[k];
            if e > 0 {
                let mut dm = *m;
                dm.exps[k] -= 1;
                out.add_term(dm, c.mul_ref(&C::from_int(e as i64)));
            }
            if v.is_momentum() {
                let a = m.freq.0[v.axis()];
                if !a.is_zero() {
                    let factor = C::i().mul_ref(&C::from_ratio(*a.numer(), *a.denom()));
                    out.add_term(*m, c.mul_ref(&factor));
                }
            }
        }
        out
    }

    /// Applies every derivative of the multi-index.
    pub fn derive(&self, d: &Deriv) -> Self {
        let mut out = self.clone();
        for v in Var::ALL {
            for _ in 0..d.0[v.index()] {
                if out.is_zero() {
                    return out;
                }
                out = out.partial(v);
            }
        }
        out
    }

    /// Gradient in canonical variable order.
    pub fn gradient(&self) -> [Self; 6] {
        Var::ALL.map(|v| self.partial(v))
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        out
    }

    fn add_assign_impl(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    fn sub_assign_impl(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<C: Coeff> From<Var> for Expr<C> {
    fn from(v: Var) -> Self {
        Expr::var(v)
    }
}

impl<'a, C: Coeff> Add<&'a Expr<C>> for &'a Expr<C> {
    type Output = Expr<C>;
    fn add(self, rhs: &'a Expr<C>) -> Expr<C> {
        let mut out = self.clone();
        out.add_assign_impl(rhs);
        out
    }
}

impl<C: Coeff> Add for Expr<C> {
    type Output = Expr<C>;
    fn add(mut self, rhs: Expr<C>) -> Expr<C> {
        if self.len() < rhs.len() {
            let mut r = rhs;
            r.add_assign_impl(&self);
            return r;
        }
        self.add_assign_impl(&rhs);
        self
    }
}

impl<'a, C: Coeff> Sub<&'a Expr<C>> for &'a Expr<C> {
    type Output = Expr<C>;
    fn sub(self, rhs: &'a Expr<C>) -> Expr<C> {
        let mut out = self.clone();
        out.sub_assign_impl(rhs);
        out
    }
}

impl<C: Coeff> Sub for Expr<C> {
    type Output = Expr<C>;
    fn sub(mut self, rhs: Expr<C>) -> Expr<C> {
        self.sub_assign_impl(&rhs);
        self
    }
}

impl<'a, C: Coeff> Mul<&'a Expr<C>> for &'a Expr<C> {
    type Output = Expr<C>;
    fn mul(self, rhs: &'a Expr<C>) -> Expr<C> {
        self.mul_impl(rhs)
    }
}

impl<C: Coeff> Mul for Expr<C> {
    type Output = Expr<C>;
    fn mul(self, rhs: Expr<C>) -> Expr<C> {
        self.mul_impl(&rhs)
    }
}

impl<C: Coeff> Neg for Expr<C> {
    type Output = Expr<C>;
    fn neg(mut self) -> Expr<C> {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<C: Coeff> Neg for &Expr<C> {
    type Output = Expr<C>;
    fn neg(self) -> Expr<C> {
        -self.clone()
    }
}

impl<C: Coeff> AddAssign<&Expr<C>> for Expr<C> {
    fn add_assign(&mut self, rhs: &Expr<C>) {
        self.add_assign_impl(rhs);
    }
}

impl<C: Coeff> AddAssign for Expr<C> {
    fn add_assign(&mut self, rhs: Expr<C>) {
        self.add_assign_impl(&rhs);
    }
}

impl<C: Coeff> SubAssign<&Expr<C>> for Expr<C> {
    fn sub_assign(&mut self, rhs: &Expr<C>) {
        self.sub_assign_impl(rhs);
    }
}

impl<C: Coeff> SubAssign for Expr<C> {
    fn sub_assign(&mut self, rhs: Expr<C>) {
        self.sub_assign_impl(&rhs);
    }
}

impl<C: Coeff> std::iter::Sum for Expr<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut out = Expr::zero();
        for e in iter {
            out += e;
        }
        out
    }
}

impl<C: Coeff> Zero for Expr<C> {
    fn zero() -> Self {
        Expr::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for Expr<C> {
    fn one() -> Self {
        Expr::one()
    }
}

// Printing. The output is accepted by `parse_expr` and canonical: terms
// appear in key order, coefficients are reduced.

fn fmt_factors(m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    for v in Var::ALL {
        match m.exps[v.index()] {
            0 => {}
            1 => out.push(v.name().to_string()),
            e => out.push(format!("{}^{}", v.name(), e)),
        }
    }
    if !m.freq.is_zero() {
        let mut lin = String::new();
        for (axis, a) in m.freq.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let big = a.to_big();
            if !lin.is_empty() && !a.is_negative() {
                lin.push('+');
            }
            lin.push_str(&fmt_rational(&big));
            lin.push('*');
            lin.push_str(Var::p(axis).name());
        }
        out.push(format!("exp(i*({lin}))"));
    }
    out
}

/// Returns (negative, body) for one term.
fn fmt_term<C: Coeff>(m: &Monomial, c: &C) -> (bool, String) {
    let factors = fmt_factors(m);
    let re = c.re();
    let im = c.im();
    let (negative, coeff) = if im.is_zero() {
        (re.is_negative(), Some(fmt_rational(&re.abs())))
    } else if re.is_zero() {
        let mag = im.abs();
        let s = if mag.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rational(&mag))
        };
        (im.is_negative(), Some(s))
    } else {
        let sign = if im.is_negative() { '-' } else { '+' };
        let s = format!(
            "({}{}{}*i)",
            fmt_rational(&re),
            sign,
            fmt_rational(&im.abs())
        );
        (false, Some(s))
    };
    let coeff = coeff.unwrap();
    let body = if factors.is_empty() {
        coeff
    } else if coeff == "1" {
        factors.join("*")
    } else {
        format!("{}*{}", coeff, factors.join("*"))
    };
    (negative, body)
}

impl<C: Coeff> fmt::Display for Expr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // descending key order: p1^2+p2^2+p3^2
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, body) = fmt_term(m, c);
            match (k, neg) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str("+")?,
                (_, true) => f.write_str("-")?,
            }
            f.write_str(&body)?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Expr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_expr, Expr, Scalar};

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn classical_product_is_commutative() {
        assert!((&e("q1*p1") - &e("p1*q1")).is_zero());
        assert_eq!(&e("q1") * &e("p1"), e("q1*p1"));
    }

    #[test]
    fn exponentials_multiply_by_adding_frequencies() {
        let prod = &e("exp(i*(1*p1))") * &e("exp(i*(1*p2))");
        assert_eq!(prod.len(), 1);
        let (m, _) = prod.terms().next().unwrap();
        assert_eq!(m.freq.0, [Ratio::from(1), Ratio::from(1), Ratio::from(0)]);
        // inverse exponentials cancel to the constant 1
        assert_eq!(&e("exp(i*(1/2*p3))") * &e("exp(i*(-1/2*p3))"), Expr::one());
    }

    #[test]
    fn additive_inverse() {
        let f = e("q1^2*p3 + 3/4*i*exp(i*(2*p2)) - 7");
        assert!((&f + &f.scale(&-Scalar::one())).is_zero());
    }

    #[test]
    fn derivatives() {
        assert_eq!(e("q1^2").partial(Var::Q1), e("2*q1"));
        assert_eq!(e("exp(i*(2*p2))").partial(Var::P2), e("2*i*exp(i*(2*p2))"));
        assert_eq!(
            e("p1*exp(i*(1*p1))").partial(Var::P1),
            e("exp(i*(1*p1)) + i*p1*exp(i*(1*p1))")
        );
        assert!(e("exp(i*(1*p1))").partial(Var::Q1).is_zero());
        assert_eq!(
            e("q1^2*p2^3").derive(&Deriv::of(&[Var::Q1, Var::P2, Var::P2])),
            e("12*q1*p2")
        );
    }

    #[test]
    fn constants_and_dependence() {
        assert_eq!(e("2/3").as_constant(), Some(Scalar::from_ratio(2, 3)));
        assert_eq!(e("q1").as_constant(), None);
        assert!(e("q1*q2").is_position_only());
        assert!(!e("exp(i*(1*p1))").is_position_only());
        assert!(e("exp(i*(1*p1))").is_momentum_only());
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(e("p1^2+p3^2+p2^2").to_string(), "p1^2+p2^2+p3^2");
        assert_eq!(e("0*q1").to_string(), "0");
        assert_eq!(e("-q1 + 1/2*p1").to_string(), "-q1+1/2*p1");
        assert_eq!(e("(1+2*i)*q2").to_string(), "(1+2*i)*q2");
        assert_eq!(e("-i").to_string(), "-i");
        assert_eq!(
            e("exp(i*(1*p1-1/2*p3))*q1").to_string(),
            "q1*exp(i*(1*p1-1/2*p3))"
        );
    }

    #[test]
    fn derive_with_empty_index_is_identity() {
        let f = e("q1*p2^2 + exp(i*(3*p3))");
        assert_eq!(f.derive(&Deriv::NONE), f);
        assert_eq!(Deriv::of(&[Var::P1, Var::Q2, Var::P1]).order(), 3);
        assert_eq!(Deriv::of(&[Var::P1, Var::Q2, Var::P1]).vars(), vec![Var::Q2, Var::P1, Var::P1]);
    }
}
