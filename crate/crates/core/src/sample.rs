//! Seeded random generators for functions and operators.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Deriv, Expr, Freq, Monomial, Var};
use crate::operators::{BiDiffOp, DiffOp};
use crate::scalar::Coeff;

/// Deterministic generator of test objects.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn small_coeff<C: Coeff>(&mut self) -> C {
        let num = loop {
            let n = self.rng.gen_range(-3i64..=3);
            if n != 0 {
                break n;
            }
        };
        let den = *[1i64, 1, 2, 3].choose(&mut self.rng).unwrap();
        let c = C::from_ratio(num, den);
        if self.rng.gen_bool(0.15) {
            c * C::i()
        } else {
            c
        }
    }

    fn monomial(&mut self, vars: &[Var], max_degree: u32) -> Monomial {
        let mut m = Monomial::ONE;
        let degree = self.rng.gen_range(0..=max_degree);
        for _ in 0..degree {
            let v = *vars.choose(&mut self.rng).unwrap();
            m.exps[v.index()] += 1;
        }
        m
    }

    /// A polynomial in all six coordinates with up to four terms of
    /// degree ≤ 3, occasionally carrying a momentum exponential.
    pub fn expr<C: Coeff>(&mut self) -> Expr<C> {
        loop {
            let n = self.rng.gen_range(1..=4);
            let mut terms = Vec::with_capacity(n);
            for _ in 0..n {
                let mut m = self.monomial(&Var::ALL, 3);
                if self.rng.gen_bool(0.1) {
                    let axis = self.rng.gen_range(0..3);
                    let mut alpha = [Ratio::from_integer(0); 3];
                    alpha[axis] = Ratio::new(self.rng.gen_range(1..=2), *[1, 2].choose(&mut self.rng).unwrap());
                    m.freq = Freq(alpha);
                }
                terms.push((m, self.small_coeff()));
            }
            let e = Expr::from_terms(terms);
            if !e.is_zero() && e.as_constant().is_none() {
                return e;
            }
        }
    }

    /// A polynomial in positions only, degree ≤ `max_degree`.
    pub fn position_poly<C: Coeff>(&mut self, max_degree: u32) -> Expr<C> {
        let n = self.rng.gen_range(1..=3);
        let terms: Vec<_> = (0..n)
            .map(|_| (self.monomial(&Var::POSITIONS, max_degree), self.small_coeff()))
            .collect();
        Expr::from_terms(terms)
    }

    fn deriv(&mut self, min: usize, max: usize) -> Deriv {
        let order = self.rng.gen_range(min..=max);
        let mut d = Deriv::NONE;
        for _ in 0..order {
            d = d.with(*Var::ALL.choose(&mut self.rng).unwrap());
        }
        d
    }

    /// A bi-differential operator of degree ≤ (3,3) with q-polynomial
    /// coefficients of degree ≤ 2, vanishing on constants in each slot.
    pub fn bidiff<C: Coeff>(&mut self) -> BiDiffOp<C> {
        let n = self.rng.gen_range(1..=4);
        let terms: Vec<_> = (0..n)
            .map(|_| (self.position_poly(2), self.deriv(1, 3), self.deriv(1, 3)))
            .collect();
        BiDiffOp::from_terms(terms).expect("position-only coefficients")
    }

    /// A differential operator of order 1..=3 vanishing on constants.
    pub fn diffop<C: Coeff>(&mut self) -> DiffOp<C> {
        let n = self.rng.gen_range(1..=3);
        let terms: Vec<_> = (0..n)
            .map(|_| (self.position_poly(2), self.deriv(1, 3)))
            .collect();
        DiffOp::from_terms(terms).expect("position-only coefficients")
    }

    /// An antisymmetric operator of pure degree (2,2).
    pub fn antisym_22<C: Coeff>(&mut self) -> BiDiffOp<C> {
        loop {
            let n = self.rng.gen_range(1..=3);
            let terms: Vec<_> = (0..n)
                .map(|_| (self.position_poly(1), self.deriv(2, 2), self.deriv(2, 2)))
                .collect();
            let op = BiDiffOp::from_terms(terms)
                .expect("position-only coefficients")
                .antisym_part();
            if !op.is_zero() {
                return op;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    #[test]
    fn deterministic_for_a_seed() {
        let a: Vec<Expr<Scalar>> = (0..5).map({
            let mut s = Sampler::new(7);
            move |_| s.expr()
        }).collect();
        let b: Vec<Expr<Scalar>> = (0..5).map({
            let mut s = Sampler::new(7);
            move |_| s.expr()
        }).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn generated_operators_respect_shape() {
        let mut s = Sampler::new(11);
        for _ in 0..20 {
            let op: BiDiffOp<Scalar> = s.bidiff();
            assert!(op.degree_profile().iter().all(|&(l, r)| (1..=3).contains(&l) && (1..=3).contains(&r)));
            assert!(op.apply(&Expr::one(), &s.expr()).is_zero());
            let d: DiffOp<Scalar> = s.diffop();
            assert!(d.vanishes_on_constants());
            let a: BiDiffOp<Scalar> = s.antisym_22();
            assert_eq!(a.degree_profile().into_iter().collect::<Vec<_>>(), vec![(2, 2)]);
        }
    }
}
