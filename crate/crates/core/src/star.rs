//! Truncated λ-series and star products `f ⋆ g = Σ_j λ^j B_j(f, g)`.
//!
//! `B_0` is the pointwise product. `B_1` is the bracket, `B_2` the Weyl
//! coefficient built from the bivector, and `B_3` is pluggable (zero by
//! default). The deformation parameter relates to Planck's constant by
//! `λ = iħ/2`; it is never substituted.

use std::sync::Arc;

use thiserror::Error;

use crate::expr::{Deriv, Expr, Var};
use crate::operators::{BiDiffOp, Cochain, DiffOp};
use crate::scalar::Coeff;
use crate::structure::Bivector;

/// Highest supported truncation order.
pub const MAX_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    #[error("truncation order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooHigh(usize),
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("series of order {series} exceeds the product order {product}")]
    SeriesAboveProduct { series: usize, product: usize },
    #[error("coefficient B{0} must be a 2-cochain")]
    NotBilinear(usize),
    #[error("gauge operator must vanish on constants")]
    GaugeNotVanishingOnConstants,
}

/// A formal series `Σ_{j ≤ N} λ^j c_j` truncated at order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSeries<C: Coeff> {
    coeffs: Vec<Expr<C>>,
}

impl<C: Coeff> LambdaSeries<C> {
    pub fn new(coeffs: Vec<Expr<C>>) -> Result<Self, StarError> {
        assert!(!coeffs.is_empty(), "a series has at least one coefficient");
        if coeffs.len() > MAX_ORDER + 1 {
            return Err(StarError::OrderTooHigh(coeffs.len() - 1));
        }
        Ok(LambdaSeries { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        LambdaSeries {
            coeffs: vec![Expr::zero(); order + 1],
        }
    }

    /// `f` embedded at λ⁰.
    pub fn constant(f: Expr<C>, order: usize) -> Self {
        let mut s = LambdaSeries::zero(order);
        s.coeffs[0] = f;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `λ^j`; zero beyond the truncation order.
    pub fn coeff(&self, j: usize) -> Expr<C> {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Expr<C>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Expr::is_zero)
    }

    fn check(&self, other: &Self) -> Result<(), StarError> {
        if self.order() != other.order() {
            return Err(StarError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, StarError> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, StarError> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn map(&self, f: impl Fn(&Expr<C>) -> Expr<C>) -> Self {
        LambdaSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Multiplies by `λ^k`, dropping what falls beyond the order.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = LambdaSeries::zero(self.order());
        for j in 0..=self.order() {
            if j + k <= self.order() {
                out.coeffs[j + k] = self.coeffs[j].clone();
            }
        }
        out
    }

    fn zip(&self, other: &Self, f: impl Fn(&Expr<C>, &Expr<C>) -> Expr<C>) -> Self {
        LambdaSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

/// The bracket `{·,·}` as a bi-differential operator.
pub fn bracket_op<C: Coeff>(pi: &Bivector<C>) -> BiDiffOp<C> {
    let mut terms = Vec::new();
    for (a, b, c) in pi.nonzero_entries() {
        terms.push((c.clone(), Deriv::single(a), Deriv::single(b)));
    }
    BiDiffOp::from_terms(terms).expect("bivector entries depend on positions only")
}

/// Second Weyl coefficient for the expansion in `λ = iħ/2` with `B_1 = {·,·}`:
///
/// `B_2(f,g) = ½ Π^{IJ}Π^{KL} ∂_I∂_K f ∂_J∂_L g
///           + ⅓ Π^{IJ} ∂_JΠ^{KL} (∂_I∂_K f ∂_L g − ∂_K f ∂_I∂_L g)`.
pub fn weyl_b2<C: Coeff>(pi: &Bivector<C>) -> BiDiffOp<C> {
    let half = C::from_ratio(1, 2);
    let third = C::from_ratio(1, 3);
    let entries: Vec<(Var, Var, Expr<C>)> = pi
        .nonzero_entries()
        .map(|(a, b, c)| (a, b, c.clone()))
        .collect();
    let mut op = BiDiffOp::zero();
    let push = |op: &mut BiDiffOp<C>, c: Expr<C>, l: Deriv, r: Deriv| {
        op.add_term(c, l, r)
            .expect("bivector entries depend on positions only");
    };
    for (i, j, pij) in &entries {
        for (k, l, pkl) in &entries {
            push(
                &mut op,
                (pij * pkl).scale(&half),
                Deriv::of(&[*i, *k]),
                Deriv::of(&[*j, *l]),
            );
            let dpkl = pkl.partial(*j);
            if dpkl.is_zero() {
                continue;
            }
            let c = (pij * &dpkl).scale(&third);
            push(&mut op, c.clone(), Deriv::of(&[*i, *k]), Deriv::single(*l));
            push(&mut op, -c, Deriv::single(*k), Deriv::of(&[*i, *l]));
        }
    }
    op
}

/// A star product truncated at order `N ≤ 3`.
#[derive(Clone, Debug)]
pub struct StarProduct<C: Coeff> {
    bivector: Arc<Bivector<C>>,
    coeffs: [Cochain<C>; MAX_ORDER],
    order: usize,
}

impl<C: Coeff> StarProduct<C> {
    /// The Weyl product of `pi` with `B_3 = 0`.
    pub fn weyl(pi: &Bivector<C>, order: usize) -> Result<Self, StarError> {
        if order > MAX_ORDER {
            return Err(StarError::OrderTooHigh(order));
        }
        Ok(StarProduct {
            bivector: Arc::new(pi.clone()),
            coeffs: [
                bracket_op(pi).into(),
                weyl_b2(pi).into(),
                BiDiffOp::zero().into(),
            ],
            order,
        })
    }

    pub fn bivector(&self) -> &Bivector<C> {
        &self.bivector
    }

    /// The same coefficients truncated at another order.
    pub fn with_order(mut self, order: usize) -> Result<Self, StarError> {
        if order > MAX_ORDER {
            return Err(StarError::OrderTooHigh(order));
        }
        self.order = order;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `B_j` for `j ≥ 1`; `B_0` is the product cochain.
    pub fn b(&self, j: usize) -> Cochain<C> {
        match j {
            0 => Cochain::product(),
            1..=MAX_ORDER => self.coeffs[j - 1].clone(),
            _ => Cochain::zero(2),
        }
    }

    /// Replaces `B_j` (1 ≤ j ≤ 3).
    pub fn with_coeff(mut self, j: usize, b: Cochain<C>) -> Result<Self, StarError> {
        if !(1..=MAX_ORDER).contains(&j) {
            return Err(StarError::OrderTooHigh(j));
        }
        if b.arity() != 2 {
            return Err(StarError::NotBilinear(j));
        }
        self.coeffs[j - 1] = b;
        Ok(self)
    }

    pub fn with_b2(self, b: impl Into<Cochain<C>>) -> Result<Self, StarError> {
        self.with_coeff(2, b.into())
    }

    pub fn with_b3(self, b: impl Into<Cochain<C>>) -> Result<Self, StarError> {
        self.with_coeff(3, b.into())
    }

    /// `f ⋆ g` for plain functions, truncated at the product order.
    pub fn star(&self, f: &Expr<C>, g: &Expr<C>) -> LambdaSeries<C> {
        let coeffs = (0..=self.order).map(|j| self.b(j).eval2(f, g)).collect();
        LambdaSeries { coeffs }
    }

    pub fn lift(&self, f: &Expr<C>) -> LambdaSeries<C> {
        LambdaSeries::constant(f.clone(), self.order)
    }
}

/// Cauchy product: coefficient `j` is `Σ_{a+b+c=j} B_c(f_a, g_b)`.
pub fn star_multiply<C: Coeff>(
    sp: &StarProduct<C>,
    f: &LambdaSeries<C>,
    g: &LambdaSeries<C>,
) -> Result<LambdaSeries<C>, StarError> {
    f.check(g)?;
    let n = f.order();
    if n > sp.order() {
        return Err(StarError::SeriesAboveProduct {
            series: n,
            product: sp.order(),
        });
    }
    let mut out = LambdaSeries::zero(n);
    for a in 0..=n {
        if f.coeffs[a].is_zero() {
            continue;
        }
        for b in 0..=n - a {
            if g.coeffs[b].is_zero() {
                continue;
            }
            for c in 0..=n - a - b {
                out.coeffs[a + b + c] += sp.b(c).eval2(&f.coeffs[a], &g.coeffs[b]);
            }
        }
    }
    Ok(out)
}

/// `f ⋆ g − g ⋆ f`.
pub fn commutator<C: Coeff>(sp: &StarProduct<C>, f: &Expr<C>, g: &Expr<C>) -> LambdaSeries<C> {
    sp.star(f, g)
        .sub(&sp.star(g, f))
        .expect("equal orders")
}

/// `½ (f ⋆ g + g ⋆ f)`.
pub fn jordan<C: Coeff>(sp: &StarProduct<C>, f: &Expr<C>, g: &Expr<C>) -> LambdaSeries<C> {
    sp.star(f, g)
        .add(&sp.star(g, f))
        .expect("equal orders")
        .scale(&C::from_ratio(1, 2))
}

/// The equivalent product `f ⋆′ g = D(D⁻¹f ⋆ D⁻¹g)` for `D = id + λ D_1`.
pub fn gauge_transform<C: Coeff>(
    sp: &StarProduct<C>,
    d1: &DiffOp<C>,
) -> Result<StarProduct<C>, StarError> {
    if !d1.vanishes_on_constants() {
        return Err(StarError::GaugeNotVanishingOnConstants);
    }
    if d1.is_zero() {
        return Ok(sp.clone());
    }
    let n = sp.order();
    let base = Arc::new(sp.clone());
    let d1 = Arc::new(d1.clone());
    let series = {
        let (base, d1) = (base.clone(), d1.clone());
        Arc::new(move |f: &Expr<C>, g: &Expr<C>| -> LambdaSeries<C> {
            let inverse = |x: &Expr<C>| {
                let mut coeffs = vec![x.clone()];
                for k in 1..=n {
                    coeffs.push(-d1.apply(&coeffs[k - 1]));
                }
                LambdaSeries { coeffs }
            };
            let prod = star_multiply(&base, &inverse(f), &inverse(g)).expect("orders agree");
            prod.add(&prod.map(|c| d1.apply(c)).shift(1))
                .expect("orders agree")
        })
    };
    let mut out = sp.clone();
    for j in 1..=n {
        let series = series.clone();
        out.coeffs[j - 1] = Cochain::from_fn(2, move |a| series(&a[0], &a[1]).coeff(j));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::FieldConfig;
    use crate::{parse_expr, Expr, Scalar};

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn weyl(b: [&str; 3]) -> StarProduct<Scalar> {
        let cfg = FieldConfig::new(b.map(e)).unwrap();
        StarProduct::weyl(&Bivector::from_field(&cfg), 3).unwrap()
    }

    #[test]
    fn series_arithmetic() {
        let s = LambdaSeries::new(vec![e("p1"), e("q1"), e("0"), e("1")]).unwrap();
        assert_eq!(s.shift(1).coeffs(), &[e("0"), e("p1"), e("q1"), e("0")]);
        assert!(s.sub(&s).unwrap().is_zero());
        assert_eq!(
            s.add(&LambdaSeries::zero(2)).unwrap_err(),
            StarError::OrderMismatch { left: 3, right: 2 }
        );
        assert_eq!(
            LambdaSeries::<Scalar>::new(vec![Expr::zero(); 5]).unwrap_err(),
            StarError::OrderTooHigh(4)
        );
    }

    #[test]
    fn unit_is_neutral() {
        let sp = weyl(["q2", "q1*q3", "1/2*q1^2"]);
        let f = e("p1^2*q2 + exp(i*(1*p3))*p2");
        assert_eq!(sp.star(&Expr::one(), &f), sp.lift(&f));
        assert_eq!(sp.star(&f, &Expr::one()), sp.lift(&f));
    }

    #[test]
    fn canonical_commutators() {
        let sp = weyl(["1/3*q1", "1/3*q2", "1/3*q3"]);
        let two = |x: Expr| LambdaSeries::new(vec![Expr::zero(), x.scale_ratio(2, 1), Expr::zero(), Expr::zero()]).unwrap();
        assert!(commutator(&sp, &e("q1"), &e("q2")).is_zero());
        assert_eq!(commutator(&sp, &e("q2"), &e("p2")), two(Expr::one()));
        assert_eq!(commutator(&sp, &e("p1"), &e("p2")), two(e("1/3*q3")));
    }

    #[test]
    fn weyl_b2_matches_moyal_for_vanishing_field() {
        // for constant Π only the quadratic term survives
        let sp = weyl(["0", "0", "0"]);
        let pi = sp.bivector();
        let (f, g) = (e("q1^2*p1 + p2^3"), e("p1^2*q1 + p2*q2^2"));
        let mut expected = Expr::zero();
        for i in Var::ALL {
            for j in Var::ALL {
                for k in Var::ALL {
                    for l in Var::ALL {
                        let c = pi.entry(i, j) * pi.entry(k, l);
                        let df = f.partial(i).partial(k);
                        let dg = g.partial(j).partial(l);
                        expected += &(&c * &df) * &dg;
                    }
                }
            }
        }
        assert_eq!(sp.b(2).eval2(&f, &g), expected.scale_ratio(1, 2));
    }

    #[test]
    fn printed_sign_of_b2_breaks_associativity_without_field() {
        let sp = weyl(["0", "0", "0"]);
        let flipped = sp.clone().with_b2(weyl_b2(sp.bivector()).scale(&-Scalar::from_int(1))).unwrap();
        let (f, g, h) = (e("q1^2"), e("p1"), e("p1"));
        let assoc = |s: &StarProduct<Scalar>| {
            let l = star_multiply(s, &s.lift(&f), &s.star(&g, &h)).unwrap();
            let r = star_multiply(s, &s.star(&f, &g), &s.lift(&h)).unwrap();
            l.sub(&r).unwrap().coeff(2)
        };
        assert!(assoc(&sp).is_zero());
        assert!(!assoc(&flipped).is_zero());
    }

    #[test]
    fn jordan_is_symmetric() {
        let sp = weyl(["q2", "q3", "q1"]);
        let (f, g) = (e("p1*p2 + q3"), e("p3^2*q1"));
        assert_eq!(jordan(&sp, &f, &g), jordan(&sp, &g, &f));
        assert_eq!(jordan(&sp, &f, &f), sp.star(&f, &f));
        assert_eq!(commutator(&sp, &f, &g), commutator(&sp, &g, &f).scale(&-Scalar::from_int(1)));
    }

    #[test]
    fn star_multiply_rejects_mismatched_orders() {
        let sp = StarProduct::weyl(&Bivector::from_field(&FieldConfig::zero()), 2).unwrap();
        let f = LambdaSeries::constant(e("p1"), 3);
        assert_eq!(
            star_multiply(&sp, &f, &f).unwrap_err(),
            StarError::SeriesAboveProduct { series: 3, product: 2 }
        );
        assert_eq!(
            StarProduct::weyl(&Bivector::from_field(&FieldConfig::<Scalar>::zero()), 4).unwrap_err(),
            StarError::OrderTooHigh(4)
        );
    }

    #[test]
    fn gauge_identity_and_unit() {
        let sp = weyl(["q2", "q3", "q1"]);
        let f = e("p1^2*q2");
        let same = gauge_transform(&sp, &DiffOp::zero()).unwrap();
        assert_eq!(same.star(&f, &e("p3")), sp.star(&f, &e("p3")));
        let d1 = DiffOp::from_terms([(e("q1"), Deriv::of(&[Var::P1, Var::P1]))]).unwrap();
        let sp2 = gauge_transform(&sp, &d1).unwrap();
        assert_eq!(sp2.star(&Expr::one(), &f), sp2.lift(&f));
        let bad = DiffOp::from_terms([(e("1"), Deriv::NONE)]).unwrap();
        assert_eq!(
            gauge_transform(&sp, &bad).unwrap_err(),
            StarError::GaugeNotVanishingOnConstants
        );
    }
}
