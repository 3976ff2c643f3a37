//! Differential operators, multilinear cochains and the Hochschild
//! coboundary over the classical (pointwise) product.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::expr::{Deriv, Expr, Var};
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("operator coefficient {0} must depend on positions only")]
    CoefficientNotPositionOnly(String),
}

/// The six coordinate functions `x^I` in canonical order.
pub fn coordinates<C: Coeff>() -> [Expr<C>; 6] {
    Var::ALL.map(Expr::var)
}

/// A bi-differential operator
/// `(f, g) ↦ Σ c(q) · (∂_left f) · (∂_right g)`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiDiffOp<C: Coeff> {
    terms: BTreeMap<(Deriv, Deriv), Expr<C>>,
}

impl<C: Coeff> Default for BiDiffOp<C> {
    fn default() -> Self {
        BiDiffOp::zero()
    }
}

impl<C: Coeff> BiDiffOp<C> {
    pub fn zero() -> Self {
        BiDiffOp {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(terms: I) -> Result<Self, OperatorError>
    where
        I: IntoIterator<Item = (Expr<C>, Deriv, Deriv)>,
    {
        let mut op = BiDiffOp::zero();
        for (c, l, r) in terms {
            op.add_term(c, l, r)?;
        }
        Ok(op)
    }

    pub fn add_term(&mut self, coeff: Expr<C>, left: Deriv, right: Deriv) -> Result<(), OperatorError> {
        if !coeff.is_position_only() {
            return Err(OperatorError::CoefficientNotPositionOnly(coeff.to_string()));
        }
        self.push(coeff, left, right);
        Ok(())
    }

    fn push(&mut self, coeff: Expr<C>, left: Deriv, right: Deriv) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry((left, right)).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&(left, right));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expr<C>, &Deriv, &Deriv)> {
        self.terms.iter().map(|((l, r), c)| (c, l, r))
    }

    /// The set of `(|left|, |right|)` derivative orders present.
    pub fn degree_profile(&self) -> BTreeSet<(usize, usize)> {
        self.terms.keys().map(|(l, r)| (l.order(), r.order())).collect()
    }

    pub fn apply(&self, f: &Expr<C>, g: &Expr<C>) -> Expr<C> {
        if f.is_zero() || g.is_zero() {
            return Expr::zero();
        }
        let mut df: HashMap<Deriv, Expr<C>> = HashMap::new();
        let mut dg: HashMap<Deriv, Expr<C>> = HashMap::new();
        let mut out = Expr::zero();
        for ((l, r), c) in &self.terms {
            let a = df.entry(*l).or_insert_with(|| f.derive(l));
            if a.is_zero() {
                continue;
            }
            let b = dg.entry(*r).or_insert_with(|| g.derive(r));
            if b.is_zero() {
                continue;
            }
            out += &(c * a) * b;
        }
        out
    }

    /// The operator with its two slots exchanged.
    pub fn swapped(&self) -> Self {
        BiDiffOp {
            terms: self
                .terms
                .iter()
                .map(|((l, r), c)| ((*r, *l), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = BiDiffOp::zero();
        for ((l, r), c) in &self.terms {
            out.push(c.scale(s), *l, *r);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.push(c.clone(), *l, *r);
        }
        out
    }

    /// `(f, g) ↦ ½ (op(f, g) + op(g, f))`.
    pub fn sym_part(&self) -> Self {
        self.plus(&self.swapped()).scale(&C::from_ratio(1, 2))
    }

    /// `(f, g) ↦ ½ (op(f, g) - op(g, f))`.
    pub fn antisym_part(&self) -> Self {
        self.plus(&self.swapped().scale(&-C::one()))
            .scale(&C::from_ratio(1, 2))
    }

    /// Whether the antisymmetric part has a component of degree (1,1),
    /// decided by evaluating it on all coordinate pairs.
    pub fn has_11_part(&self) -> bool {
        let anti = self.antisym_part();
        let xs = coordinates::<C>();
        xs.iter()
            .any(|a| xs.iter().any(|b| !anti.apply(a, b).is_zero()))
    }
}

impl<C: Coeff> fmt::Debug for BiDiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for ((l, r), c) in &self.terms {
            list.entry(&format_args!("({c}) [{l}] ⊗ [{r}]"));
        }
        list.finish()
    }
}

/// A linear differential operator `f ↦ Σ c(q) ∂_d f`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiffOp<C: Coeff> {
    terms: BTreeMap<Deriv, Expr<C>>,
}

impl<C: Coeff> DiffOp<C> {
    pub fn zero() -> Self {
        DiffOp {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(terms: I) -> Result<Self, OperatorError>
    where
        I: IntoIterator<Item = (Expr<C>, Deriv)>,
    {
        let mut op = DiffOp::zero();
        for (c, d) in terms {
            if !c.is_position_only() {
                return Err(OperatorError::CoefficientNotPositionOnly(c.to_string()));
            }
            if c.is_zero() {
                continue;
            }
            let slot = op.terms.entry(d).or_default();
            *slot += c;
            if slot.is_zero() {
                op.terms.remove(&d);
            }
        }
        Ok(op)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no zeroth-order term is present.
    pub fn vanishes_on_constants(&self) -> bool {
        !self.terms.contains_key(&Deriv::NONE)
    }

    pub fn apply(&self, f: &Expr<C>) -> Expr<C> {
        self.terms
            .iter()
            .map(|(d, c)| {
                let df = f.derive(d);
                if df.is_zero() {
                    df
                } else {
                    c * &df
                }
            })
            .sum()
    }
}

impl<C: Coeff> fmt::Debug for DiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for (d, c) in &self.terms {
            list.entry(&format_args!("({c}) [{d}]"));
        }
        list.finish()
    }
}

type MapFn<C> = dyn Fn(&[Expr<C>]) -> Expr<C> + Send + Sync;

#[derive(Clone)]
enum Kind<C: Coeff> {
    /// Pointwise product of all arguments.
    Product,
    BiDiff(Arc<BiDiffOp<C>>),
    Diff(Arc<DiffOp<C>>),
    Map(Arc<MapFn<C>>),
}

/// An n-linear map `Exprⁿ → Expr`, represented by how it evaluates.
#[derive(Clone)]
pub struct Cochain<C: Coeff> {
    arity: usize,
    kind: Kind<C>,
}

impl<C: Coeff> fmt::Debug for Cochain<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            Kind::Product => "product".to_string(),
            Kind::BiDiff(op) => format!("{op:?}"),
            Kind::Diff(op) => format!("{op:?}"),
            Kind::Map(_) => "<map>".to_string(),
        };
        write!(f, "Cochain(arity {}, {kind})", self.arity)
    }
}

impl<C: Coeff> From<BiDiffOp<C>> for Cochain<C> {
    fn from(op: BiDiffOp<C>) -> Self {
        Cochain {
            arity: 2,
            kind: Kind::BiDiff(Arc::new(op)),
        }
    }
}

impl<C: Coeff> From<DiffOp<C>> for Cochain<C> {
    fn from(op: DiffOp<C>) -> Self {
        Cochain {
            arity: 1,
            kind: Kind::Diff(Arc::new(op)),
        }
    }
}

impl<C: Coeff> Cochain<C> {
    /// The classical product `B₀(f, g) = f·g`.
    pub fn product() -> Self {
        Cochain {
            arity: 2,
            kind: Kind::Product,
        }
    }

    pub fn zero(arity: usize) -> Self {
        Cochain::from_fn(arity, |_| Expr::zero())
    }

    pub fn from_fn<F>(arity: usize, f: F) -> Self
    where
        F: Fn(&[Expr<C>]) -> Expr<C> + Send + Sync + 'static,
    {
        assert!(arity > 0, "cochains take at least one argument");
        Cochain {
            arity,
            kind: Kind::Map(Arc::new(f)),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn as_bidiff(&self) -> Option<&BiDiffOp<C>> {
        match &self.kind {
            Kind::BiDiff(op) => Some(op),
            _ => None,
        }
    }

    /// Evaluates on exactly `arity` arguments.
    pub fn eval(&self, args: &[Expr<C>]) -> Expr<C> {
        assert_eq!(
            args.len(),
            self.arity,
            "cochain of arity {} applied to {} arguments",
            self.arity,
            args.len()
        );
        match &self.kind {
            Kind::Product => args.iter().fold(Expr::one(), |acc, a| &acc * a),
            Kind::BiDiff(op) => op.apply(&args[0], &args[1]),
            Kind::Diff(op) => op.apply(&args[0]),
            Kind::Map(f) => f(args),
        }
    }

    pub fn eval1(&self, f: &Expr<C>) -> Expr<C> {
        self.eval(std::slice::from_ref(f))
    }

    pub fn eval2(&self, f: &Expr<C>, g: &Expr<C>) -> Expr<C> {
        self.eval(&[f.clone(), g.clone()])
    }

    pub fn eval3(&self, f: &Expr<C>, g: &Expr<C>, h: &Expr<C>) -> Expr<C> {
        self.eval(&[f.clone(), g.clone(), h.clone()])
    }

    pub fn eval4(&self, f: &Expr<C>, g: &Expr<C>, h: &Expr<C>, k: &Expr<C>) -> Expr<C> {
        self.eval(&[f.clone(), g.clone(), h.clone(), k.clone()])
    }

    /// Arguments-swapped evaluation of a 2-cochain.
    pub fn swapped(&self) -> Self {
        assert_eq!(self.arity, 2);
        if let Kind::BiDiff(op) = &self.kind {
            return op.swapped().into();
        }
        let inner = self.clone();
        Cochain::from_fn(2, move |a| inner.eval(&[a[1].clone(), a[0].clone()]))
    }

    /// `½ (φ(f, g) - φ(g, f))`.
    pub fn antisym_part(&self) -> Self {
        assert_eq!(self.arity, 2);
        if let Kind::BiDiff(op) = &self.kind {
            return op.antisym_part().into();
        }
        let inner = self.clone();
        Cochain::from_fn(2, move |a| {
            (inner.eval(a) - inner.eval(&[a[1].clone(), a[0].clone()])).scale_ratio(1, 2)
        })
    }

    /// `½ (φ(f, g) + φ(g, f))`.
    pub fn sym_part(&self) -> Self {
        assert_eq!(self.arity, 2);
        if let Kind::BiDiff(op) = &self.kind {
            return op.sym_part().into();
        }
        let inner = self.clone();
        Cochain::from_fn(2, move |a| {
            (inner.eval(a) + inner.eval(&[a[1].clone(), a[0].clone()])).scale_ratio(1, 2)
        })
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        if let (Kind::BiDiff(a), Kind::BiDiff(b)) = (&self.kind, &other.kind) {
            return a.plus(b).into();
        }
        let (a, b) = (self.clone(), other.clone());
        Cochain::from_fn(self.arity, move |x| a.eval(x) + b.eval(x))
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-C::one()))
    }

    pub fn scaled(&self, s: C) -> Self {
        match &self.kind {
            Kind::BiDiff(op) => op.scale(&s).into(),
            _ => {
                let a = self.clone();
                Cochain::from_fn(self.arity, move |x| a.eval(x).scale(&s))
            }
        }
    }
}

/// The Hochschild coboundary with respect to the pointwise product:
///
/// `dφ(a₀,…,aₙ) = a₀·φ(a₁,…,aₙ) + Σ_j (-1)^{j+1} φ(…, a_j·a_{j+1}, …)
///               + (-1)^{n+1} φ(a₀,…,a_{n-1})·aₙ`.
pub fn hochschild_d<C: Coeff>(phi: &Cochain<C>) -> Cochain<C> {
    let n = phi.arity();
    let phi = phi.clone();
    Cochain::from_fn(n + 1, move |a| {
        let mut out = &a[0] * &phi.eval(&a[1..]);
        for j in 0..n {
            let mut args: Vec<Expr<C>> = Vec::with_capacity(n);
            args.extend_from_slice(&a[..j]);
            args.push(&a[j] * &a[j + 1]);
            args.extend_from_slice(&a[j + 2..]);
            let term = phi.eval(&args);
            if j % 2 == 0 {
                out -= term;
            } else {
                out += term;
            }
        }
        let last = &phi.eval(&a[..n]) * &a[n];
        if n.is_multiple_of(2) {
            out -= last;
        } else {
            out += last;
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_expr, Expr, Scalar};

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn d(vars: &[Var]) -> Deriv {
        Deriv::of(vars)
    }

    #[test]
    fn apply_single_term() {
        let op = BiDiffOp::from_terms([(Expr::one(), d(&[Var::Q1]), d(&[Var::P1]))]).unwrap();
        assert_eq!(op.apply(&e("q1^2"), &e("p1^2")), e("4*q1*p1"));
    }

    #[test]
    fn positive_left_degree_kills_constants() {
        let op = BiDiffOp::from_terms([
            (e("q2"), d(&[Var::P1]), d(&[Var::Q3])),
            (e("1 + q1^2"), d(&[Var::P2, Var::P3]), d(&[])),
        ])
        .unwrap();
        assert!(op.apply(&Expr::one(), &e("q3*p1^2 + p2")).is_zero());
    }

    #[test]
    fn momentum_dependent_coefficients_are_rejected() {
        let err = BiDiffOp::<Scalar>::from_terms([(e("p1"), d(&[Var::Q1]), d(&[Var::Q2]))]).unwrap_err();
        assert_eq!(err, OperatorError::CoefficientNotPositionOnly("p1".into()));
        assert!(DiffOp::<Scalar>::from_terms([(e("p2"), d(&[Var::Q1]))]).is_err());
    }

    #[test]
    fn symmetric_and_antisymmetric_parts() {
        let op = BiDiffOp::from_terms([
            (e("q1"), d(&[Var::P1]), d(&[Var::P2, Var::P2])),
            (e("2"), d(&[Var::Q3]), d(&[Var::P3])),
        ])
        .unwrap();
        let (f, g) = (e("p1*p2^2*q3 + p3"), e("q3^2*p2^3 + p1*p3"));
        let sym = op.sym_part();
        let anti = op.antisym_part();
        assert_eq!(&sym.apply(&f, &g) + &anti.apply(&f, &g), op.apply(&f, &g));
        assert!(sym.antisym_part().is_zero());
        assert!(sym.antisym_part().apply(&f, &g).is_zero());
        assert_eq!(anti.apply(&f, &g), -anti.apply(&g, &f));
        assert_eq!(op.degree_profile(), BTreeSet::from([(1, 1), (1, 2)]));
    }

    #[test]
    fn has_11_part_cases() {
        let bracket_like = BiDiffOp::from_terms([
            (Expr::one(), d(&[Var::Q1]), d(&[Var::P1])),
            (-Expr::one(), d(&[Var::P1]), d(&[Var::Q1])),
        ])
        .unwrap();
        assert!(bracket_like.has_11_part());
        assert!(!BiDiffOp::<Scalar>::zero().has_11_part());
        // symmetric (1,1) part does not count
        let sym = BiDiffOp::from_terms([
            (Expr::one(), d(&[Var::Q1]), d(&[Var::P1])),
            (Expr::one(), d(&[Var::P1]), d(&[Var::Q1])),
        ])
        .unwrap();
        assert!(!sym.has_11_part());
        let higher = BiDiffOp::from_terms([(e("q2"), d(&[Var::P1, Var::P1]), d(&[Var::P2]))])
            .unwrap()
            .antisym_part();
        assert!(!higher.has_11_part());
    }

    #[test]
    fn coboundary_of_low_arities() {
        let d1 = DiffOp::from_terms([(e("q1"), d(&[Var::P1])), (e("2"), d(&[Var::Q2, Var::P3]))]).unwrap();
        let phi: Cochain<Scalar> = d1.clone().into();
        let dphi = hochschild_d(&phi);
        let (f, g) = (e("p1^2*q2 + p3"), e("q2*p3^2 + p1"));
        // dD(f,g) = f·D(g) - D(f·g) + D(f)·g
        let expected = &(&f * &d1.apply(&g)) - &d1.apply(&(&f * &g)) + &d1.apply(&f) * &g;
        assert_eq!(dphi.eval2(&f, &g), expected);
        // vector fields are derivations, hence cocycles
        let field: Cochain<Scalar> = DiffOp::from_terms([(e("q3"), d(&[Var::P2]))]).unwrap().into();
        assert!(hochschild_d(&field).eval2(&f, &g).is_zero());
    }

    #[test]
    fn coboundary_arity_two_matches_formula() {
        let op = BiDiffOp::from_terms([(e("q1"), d(&[Var::P1, Var::P1]), d(&[Var::P2]))]).unwrap();
        let phi: Cochain<Scalar> = op.clone().into();
        let (f, g, h) = (e("p1^2"), e("p1*p2 + q1"), e("p2^2*q3"));
        let expected = &f * &op.apply(&g, &h) - op.apply(&(&f * &g), &h)
            + op.apply(&f, &(&g * &h))
            - &op.apply(&f, &g) * &h;
        assert_eq!(hochschild_d(&phi).eval3(&f, &g, &h), expected);
        assert!(hochschild_d(&hochschild_d(&phi))
            .eval4(&f, &g, &h, &e("p3 + q2*p1"))
            .is_zero());
    }

    #[test]
    fn generic_cochain_parts() {
        let c: Cochain<Scalar> = Cochain::from_fn(2, |a| &a[0] * &a[1].partial(Var::P1));
        let (f, g) = (e("p1^2"), e("p1*q2"));
        let sum = c.sym_part().eval2(&f, &g) + c.antisym_part().eval2(&f, &g);
        assert_eq!(sum, c.eval2(&f, &g));
        assert_eq!(c.swapped().eval2(&f, &g), c.eval2(&g, &f));
        assert_eq!(Cochain::<Scalar>::product().eval2(&f, &g), &f * &g);
    }
}
