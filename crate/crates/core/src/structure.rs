//! Magnetic fields, the twisted Poisson bivector they induce, its bracket and
//! the Jacobiator of that bracket.
//!
//! Conventions (electric charge set to one):
//!
//! * `Π^{q_i p_j} = δ_ij`, `Π^{q_i q_j} = 0`, `Π^{p_i p_j} = ε_ijk B^k(q)`;
//! * `{f, g} = Σ_{I,J} Π^{IJ} ∂_I f ∂_J g`, so `{q_i, p_j} = δ_ij` and
//!   `{p_i, p_j} = ε_ijk B^k`;
//! * with this normalization `{p1, {p2, p3}} + cyclic = -div B`.

use thiserror::Error;

use crate::expr::{Expr, Var};
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field component B{component} = {expr} must depend on positions only")]
    NotPositionOnly { component: usize, expr: String },
}

/// Levi-Civita symbol on 0-based axes.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// A polynomial magnetic field `B(q)` with its divergence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldConfig<C: Coeff> {
    components: [Expr<C>; 3],
    divergence: Expr<C>,
}

impl<C: Coeff> FieldConfig<C> {
    pub fn new(components: [Expr<C>; 3]) -> Result<Self, FieldError> {
        for (k, b) in components.iter().enumerate() {
            if !b.is_position_only() {
                return Err(FieldError::NotPositionOnly {
                    component: k + 1,
                    expr: b.to_string(),
                });
            }
        }
        let divergence = (0..3).map(|k| components[k].partial(Var::q(k))).sum();
        Ok(FieldConfig {
            components,
            divergence,
        })
    }

    /// The vanishing field.
    pub fn zero() -> Self {
        FieldConfig::new([Expr::zero(), Expr::zero(), Expr::zero()]).unwrap()
    }

    /// `B^k` for 0-based `k`.
    pub fn component(&self, k: usize) -> &Expr<C> {
        &self.components[k]
    }

    pub fn components(&self) -> &[Expr<C>; 3] {
        &self.components
    }

    pub fn divergence(&self) -> &Expr<C> {
        &self.divergence
    }

    /// True when the magnetic charge density is not identically zero.
    pub fn is_monopole(&self) -> bool {
        !self.divergence.is_zero()
    }

    /// `p·B`.
    pub fn momentum_dot(&self) -> Expr<C> {
        (0..3)
            .map(|k| &Expr::var(Var::p(k)) * &self.components[k])
            .sum()
    }
}

/// Magnetic charge density `div B`.
pub fn monopole_density<C: Coeff>(cfg: &FieldConfig<C>) -> Expr<C> {
    cfg.divergence().clone()
}

/// The twisted Poisson bivector in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivector<C: Coeff> {
    field: FieldConfig<C>,
    entries: [[Expr<C>; 6]; 6],
    nonzero: Vec<(Var, Var)>,
}

impl<C: Coeff> Bivector<C> {
    pub fn from_field(field: &FieldConfig<C>) -> Self {
        let mut entries: [[Expr<C>; 6]; 6] = Default::default();
        for i in 0..3 {
            entries[Var::q(i).index()][Var::p(i).index()] = Expr::one();
            entries[Var::p(i).index()][Var::q(i).index()] = -Expr::one();
            for j in 0..3 {
                let b: Expr<C> = (0..3)
                    .filter(|&k| levi_civita(i, j, k) != 0)
                    .map(|k| field.component(k).scale(&C::from_int(levi_civita(i, j, k))))
                    .sum();
                entries[Var::p(i).index()][Var::p(j).index()] = b;
            }
        }
        let nonzero = Var::ALL
            .iter()
            .flat_map(|&a| Var::ALL.iter().map(move |&b| (a, b)))
            .filter(|(a, b)| !entries[a.index()][b.index()].is_zero())
            .collect();
        Bivector {
            field: field.clone(),
            entries,
            nonzero,
        }
    }

    pub fn field(&self) -> &FieldConfig<C> {
        &self.field
    }

    /// `Π^{IJ}`.
    pub fn entry(&self, a: Var, b: Var) -> &Expr<C> {
        &self.entries[a.index()][b.index()]
    }

    /// Index pairs with a non-vanishing entry.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Var, Var, &Expr<C>)> + '_ {
        self.nonzero
            .iter()
            .map(move |&(a, b)| (a, b, self.entry(a, b)))
    }

    /// `{f, g}`.
    pub fn bracket(&self, f: &Expr<C>, g: &Expr<C>) -> Expr<C> {
        if f.is_zero() || g.is_zero() {
            return Expr::zero();
        }
        let df = f.gradient();
        let dg = g.gradient();
        let mut out = Expr::zero();
        for (a, b, pi) in self.nonzero_entries() {
            let (x, y) = (&df[a.index()], &dg[b.index()]);
            if x.is_zero() || y.is_zero() {
                continue;
            }
            out += &(pi * x) * y;
        }
        out
    }

    /// `{f,{g,h}} + {h,{f,g}} + {g,{h,f}}`.
    pub fn jacobiator(&self, f: &Expr<C>, g: &Expr<C>, h: &Expr<C>) -> Expr<C> {
        self.bracket(f, &self.bracket(g, h))
            + self.bracket(h, &self.bracket(f, g))
            + self.bracket(g, &self.bracket(h, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_expr, Expr, Scalar};

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn field(b: [&str; 3]) -> FieldConfig<Scalar> {
        FieldConfig::new(b.map(e)).unwrap()
    }

    #[test]
    fn momentum_dependent_fields_are_rejected() {
        let err = FieldConfig::new([e("q1"), e("p2"), e("0")]).unwrap_err();
        assert_eq!(
            err,
            FieldError::NotPositionOnly { component: 2, expr: "p2".into() }
        );
        assert!(FieldConfig::new([e("exp(i*(1*p1))"), e("0"), e("0")]).is_err());
    }

    #[test]
    fn densities() {
        let rho = e("5/7");
        let cfg = FieldConfig::new([
            &e("1/3*q1") * &rho,
            &e("1/3*q2") * &rho,
            &e("1/3*q3") * &rho,
        ])
        .unwrap();
        assert_eq!(monopole_density(&cfg), rho);
        assert_eq!(monopole_density(&field(["1/2*q1^2", "0", "0"])), e("q1"));
        let constant = field(["2", "-1/3", "i"]);
        assert!(monopole_density(&constant).is_zero());
        assert!(!constant.is_monopole());
    }

    #[test]
    fn bivector_is_antisymmetric_and_position_only() {
        let pi = Bivector::from_field(&field(["q2*q3", "q1^2", "q1+q3"]));
        for a in Var::ALL {
            for b in Var::ALL {
                assert_eq!(pi.entry(a, b), &-pi.entry(b, a));
                assert!(pi.entry(a, b).is_position_only());
            }
        }
    }

    #[test]
    fn canonical_brackets() {
        let cfg = field(["q2", "q1*q3", "1/2*q1^2"]);
        let pi = Bivector::from_field(&cfg);
        assert_eq!(pi.bracket(&e("q1"), &e("p1")), Expr::one());
        assert!(pi.bracket(&e("q1"), &e("p2")).is_zero());
        assert!(pi.bracket(&e("q1"), &e("q2")).is_zero());
        assert_eq!(pi.bracket(&e("p1"), &e("p2")), *cfg.component(2));
        assert_eq!(pi.bracket(&e("p2"), &e("p3")), *cfg.component(0));
        assert_eq!(pi.bracket(&e("p3"), &e("p1")), *cfg.component(1));
    }

    #[test]
    fn jacobiator_of_momenta_is_minus_divergence() {
        // {p1,{p2,p3}} = {p1, B1} = -d1 B1, and cyclically.
        let cfg = field(["q1", "0", "0"]);
        let pi = Bivector::from_field(&cfg);
        assert_eq!(pi.jacobiator(&e("p1"), &e("p2"), &e("p3")), e("-1"));
        let cfg = field(["q1^2*q2", "q2*q3", "q3^3"]);
        let pi = Bivector::from_field(&cfg);
        assert_eq!(
            pi.jacobiator(&e("p1"), &e("p2"), &e("p3")),
            -cfg.divergence().clone()
        );
    }

    #[test]
    fn jacobiator_vanishes_with_repeated_argument() {
        let pi = Bivector::from_field(&field(["q1*q2", "q3", "q1^2"]));
        let f = e("p1^2*q2 + q3*p3");
        let g = e("p2*p3 + q1");
        assert!(pi.jacobiator(&f, &f, &g).is_zero());
    }
}
