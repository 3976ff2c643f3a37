//! Associator expansions, the third-order obstruction, diagonal formulas for
//! `A_3(f,f,f)`, and the verdict-producing checks built on them.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{Expr, Freq, Var};
use crate::operators::{coordinates, hochschild_d, Cochain};
use crate::scalar::Coeff;
use crate::star::{star_multiply, LambdaSeries, StarProduct};
use crate::structure::Bivector;

/// `A(f,g,h) = f ⋆ (g ⋆ h) − (f ⋆ g) ⋆ h` order by order.
pub fn associator_series<C: Coeff>(
    sp: &StarProduct<C>,
    f: &Expr<C>,
    g: &Expr<C>,
    h: &Expr<C>,
) -> LambdaSeries<C> {
    series_associator(sp, &sp.lift(f), &sp.lift(g), &sp.lift(h))
}

fn series_associator<C: Coeff>(
    sp: &StarProduct<C>,
    f: &LambdaSeries<C>,
    g: &LambdaSeries<C>,
    h: &LambdaSeries<C>,
) -> LambdaSeries<C> {
    let left = star_multiply(sp, f, &star_multiply(sp, g, h).expect("orders agree"))
        .expect("orders agree");
    let right = star_multiply(sp, &star_multiply(sp, f, g).expect("orders agree"), h)
        .expect("orders agree");
    left.sub(&right).expect("orders agree")
}

/// The `λ^j` coefficient of the associator as a 3-cochain.
pub fn associator_coeff<C: Coeff>(sp: &StarProduct<C>, j: usize) -> Cochain<C> {
    let sp = sp.clone();
    Cochain::from_fn(3, move |a| associator_series(&sp, &a[0], &a[1], &a[2]).coeff(j))
}

/// `A_2 = dB_2 + B_1(f, B_1(g,h)) − B_1(B_1(f,g), h)` written out.
pub fn a2_cochain<C: Coeff>(sp: &StarProduct<C>) -> Cochain<C> {
    let (b1, b2) = (sp.b(1), sp.b(2));
    Cochain::from_fn(3, move |a| {
        let (f, g, h) = (&a[0], &a[1], &a[2]);
        f * &b2.eval2(g, h) - &b2.eval2(f, g) * h + b2.eval2(f, &(g * h))
            - b2.eval2(&(f * g), h)
            + b1.eval2(f, &b1.eval2(g, h))
            - b1.eval2(&b1.eval2(f, g), h)
    })
}

pub fn a2_formula<C: Coeff>(sp: &StarProduct<C>, f: &Expr<C>, g: &Expr<C>, h: &Expr<C>) -> Expr<C> {
    a2_cochain(sp).eval3(f, g, h)
}

/// `⅙ Σ_σ sgn(σ) φ(σ(f,g,h))`.
pub fn alternate<C: Coeff>(phi: &Cochain<C>, f: &Expr<C>, g: &Expr<C>, h: &Expr<C>) -> Expr<C> {
    let even = phi.eval3(f, g, h) + phi.eval3(g, h, f) + phi.eval3(h, f, g);
    let odd = phi.eval3(g, f, h) + phi.eval3(f, h, g) + phi.eval3(h, g, f);
    (even - odd).scale_ratio(1, 6)
}

pub fn a2_antisym<C: Coeff>(sp: &StarProduct<C>, f: &Expr<C>, g: &Expr<C>, h: &Expr<C>) -> Expr<C> {
    alternate(&a2_cochain(sp), f, g, h)
}

/// `A_3 = dB_3 + B_2(f,B_1(g,h)) − B_2(B_1(f,g),h) + B_1(f,B_2(g,h)) − B_1(B_2(f,g),h)`.
pub fn a3_direct_cochain<C: Coeff>(sp: &StarProduct<C>) -> Cochain<C> {
    let (b1, b2) = (sp.b(1), sp.b(2));
    let db3 = hochschild_d(&sp.b(3));
    Cochain::from_fn(3, move |a| {
        let (f, g, h) = (&a[0], &a[1], &a[2]);
        db3.eval(a) + b2.eval2(f, &b1.eval2(g, h)) - b2.eval2(&b1.eval2(f, g), h)
            + b1.eval2(f, &b2.eval2(g, h))
            - b1.eval2(&b2.eval2(f, g), h)
    })
}

pub fn a3_direct<C: Coeff>(sp: &StarProduct<C>, f: &Expr<C>, g: &Expr<C>, h: &Expr<C>) -> Expr<C> {
    a3_direct_cochain(sp).eval3(f, g, h)
}

/// Totally antisymmetric part of `A_3` from
/// `3A_3⁻ = Σ_cyc 2B_2⁻(f, B_1⁻(g,h)) + Σ_cyc 2B_1⁻(f, B_2⁻(g,h))`.
pub fn a3_antisym<C: Coeff>(sp: &StarProduct<C>, f: &Expr<C>, g: &Expr<C>, h: &Expr<C>) -> Expr<C> {
    let b1 = sp.b(1).antisym_part();
    let b2 = sp.b(2).antisym_part();
    let cyc = [(f, g, h), (h, f, g), (g, h, f)];
    let mut out = Expr::zero();
    for (x, y, z) in cyc {
        out += b2.eval2(x, &b1.eval2(y, z));
        out += b1.eval2(x, &b2.eval2(y, z));
    }
    out.scale_ratio(2, 3)
}

/// The five summands of
/// `O = A_2(f,g,B_1(h,k)) − A_2(f,B_1(g,h),k) + A_2(B_1(f,g),h,k)
///    + B_1(A_2(g,h,k),f) − B_1(A_2(f,g,h),k)`, signs included.
pub fn obstruction_summands<C: Coeff>(
    sp: &StarProduct<C>,
    f: &Expr<C>,
    g: &Expr<C>,
    h: &Expr<C>,
    k: &Expr<C>,
) -> [Expr<C>; 5] {
    let a2 = a2_cochain(sp);
    let b1 = sp.b(1);
    [
        a2.eval3(f, g, &b1.eval2(h, k)),
        -a2.eval3(f, &b1.eval2(g, h), k),
        a2.eval3(&b1.eval2(f, g), h, k),
        b1.eval2(&a2.eval3(g, h, k), f),
        -b1.eval2(&a2.eval3(f, g, h), k),
    ]
}

pub fn obstruction_o<C: Coeff>(
    sp: &StarProduct<C>,
    f: &Expr<C>,
    g: &Expr<C>,
    h: &Expr<C>,
    k: &Expr<C>,
) -> Expr<C> {
    obstruction_summands(sp, f, g, h, k).into_iter().sum()
}

/// `dA_3` computed three independent ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Da3Routes<C: Coeff> {
    /// Hochschild coboundary of the `λ³` associator coefficient.
    pub coboundary: Expr<C>,
    /// Minus the `λ³` part of the Pentagon combination of `λ² A_2`.
    pub pentagon: Expr<C>,
    /// Expansion through `dB_2`.
    pub appendix_b: Expr<C>,
}

impl<C: Coeff> Da3Routes<C> {
    pub fn agree(&self) -> bool {
        self.coboundary == self.pentagon && self.pentagon == self.appendix_b
    }
}

pub fn da3_routes<C: Coeff>(
    sp: &StarProduct<C>,
    f: &Expr<C>,
    g: &Expr<C>,
    h: &Expr<C>,
    k: &Expr<C>,
) -> Da3Routes<C> {
    let sp = &sp.clone().with_order(3).expect("order 3 is supported");
    let coboundary = hochschild_d(&associator_coeff(sp, 3)).eval4(f, g, h, k);
    Da3Routes {
        coboundary,
        pentagon: pentagon_route(sp, f, g, h, k),
        appendix_b: appendix_b_route(sp, f, g, h, k),
    }
}

fn pentagon_route<C: Coeff>(
    sp: &StarProduct<C>,
    f: &Expr<C>,
    g: &Expr<C>,
    h: &Expr<C>,
    k: &Expr<C>,
) -> Expr<C> {
    let n = 3;
    let sp3 = sp.clone().with_order(n).expect("order 3 is supported");
    let a2 = a2_cochain(&sp3);
    // λ² A_2 extended trilinearly to series arguments
    let lifted = |x: &LambdaSeries<C>, y: &LambdaSeries<C>, z: &LambdaSeries<C>| {
        let mut coeffs = vec![Expr::zero(); n + 1];
        for a in 0..=n {
            for b in 0..=n - a {
                for c in 0..=n - a - b {
                    if a + b + c + 2 <= n {
                        coeffs[a + b + c + 2] += a2.eval3(&x.coeff(a), &y.coeff(b), &z.coeff(c));
                    }
                }
            }
        }
        LambdaSeries::new(coeffs).expect("order within bounds")
    };
    let lift = |x: &Expr<C>| sp3.lift(x);
    let (sf, sg, sh, sk) = (lift(f), lift(g), lift(h), lift(k));
    let star = |x: &LambdaSeries<C>, y: &LambdaSeries<C>| star_multiply(&sp3, x, y).expect("orders agree");
    let terms = [
        star(&sf, &lifted(&sg, &sh, &sk)),
        star(&lifted(&sf, &sg, &sh), &sk),
        lifted(&star(&sf, &sg), &sh, &sk).scale(&-C::one()),
        lifted(&sf, &star(&sg, &sh), &sk),
        lifted(&sf, &sg, &star(&sh, &sk)).scale(&-C::one()),
    ];
    let total = terms
        .iter()
        .skip(1)
        .fold(terms[0].clone(), |acc, t| acc.add(t).expect("orders agree"));
    -total.coeff(3)
}

fn appendix_b_route<C: Coeff>(
    sp: &StarProduct<C>,
    f: &Expr<C>,
    g: &Expr<C>,
    h: &Expr<C>,
    k: &Expr<C>,
) -> Expr<C> {
    let b1 = sp.b(1);
    let db2 = hochschild_d(&sp.b(2));
    let ddb3 = hochschild_d(&hochschild_d(&sp.b(3)));
    ddb3.eval4(f, g, h, k) + db2.eval3(f, g, &b1.eval2(h, k)) - db2.eval3(f, &b1.eval2(g, h), k)
        + db2.eval3(&b1.eval2(f, g), h, k)
        + b1.eval2(&db2.eval3(g, h, k), f)
        - b1.eval2(&db2.eval3(f, g, h), k)
}

/// `f ⋆ A(g,h,k) + A(f,g,h) ⋆ k − A(f⋆g,h,k) + A(f,g⋆h,k) − A(f,g,h⋆k)`
/// with the full truncated associator; vanishes in every algebra.
pub fn pentagon_residual<C: Coeff>(
    sp: &StarProduct<C>,
    f: &Expr<C>,
    g: &Expr<C>,
    h: &Expr<C>,
    k: &Expr<C>,
) -> LambdaSeries<C> {
    let (sf, sg, sh, sk) = (sp.lift(f), sp.lift(g), sp.lift(h), sp.lift(k));
    let star = |x: &LambdaSeries<C>, y: &LambdaSeries<C>| star_multiply(sp, x, y).expect("orders agree");
    let assoc = |x: &LambdaSeries<C>, y: &LambdaSeries<C>, z: &LambdaSeries<C>| series_associator(sp, x, y, z);
    let pos = star(&sf, &assoc(&sg, &sh, &sk))
        .add(&star(&assoc(&sf, &sg, &sh), &sk))
        .and_then(|s| s.add(&assoc(&sf, &star(&sg, &sh), &sk)))
        .expect("orders agree");
    let neg = assoc(&star(&sf, &sg), &sh, &sk)
        .add(&assoc(&sf, &sg, &star(&sh, &sk)))
        .expect("orders agree");
    pos.sub(&neg).expect("orders agree")
}

struct Derivatives<C: Coeff> {
    grad: [Expr<C>; 6],
    hess: Vec<Vec<Expr<C>>>,
}

impl<C: Coeff> Derivatives<C> {
    fn of(f: &Expr<C>) -> Self {
        let grad = f.gradient();
        let hess = grad.iter().map(|g| g.gradient().to_vec()).collect();
        Derivatives { grad, hess }
    }
}

/// The four-term contraction for `A_3(f,f,f)` of the Weyl product:
///
/// `(2i/3)( Π^{LM} ∂_LΠ^{NO} ∂_NΠ^{PQ} ∂_M f ∂_P f ∂_O∂_Q f
///        − Π^{LM} ∂_LΠ^{NO} ∂_NΠ^{PQ} ∂_O f ∂_P f ∂_M∂_Q f
///        − 2 Π^{LM} Π^{NO} ∂_LΠ^{PQ} ∂_P f ∂_M∂_N f ∂_O∂_Q f
///        + Π^{LM} Π^{NO} ∂_LΠ^{PQ} ∂_M f ∂_N∂_P f ∂_O∂_Q f )`.
pub fn a3_cadabra<C: Coeff>(pi: &Bivector<C>, f: &Expr<C>) -> Expr<C> {
    let d = Derivatives::of(f);
    let entries: Vec<(usize, usize, &Expr<C>)> = pi
        .nonzero_entries()
        .map(|(a, b, e)| (a.index(), b.index(), e))
        .collect();
    // ∂_L Π^{NO}, sparse
    let mut dpi: Vec<(usize, usize, usize, Expr<C>)> = Vec::new();
    for l in Var::ALL {
        for &(n, o, e) in &entries {
            let de = e.partial(l);
            if !de.is_zero() {
                dpi.push((l.index(), n, o, de));
            }
        }
    }
    let mut t12 = Expr::zero();
    for &(l, m, plm) in &entries {
        for (l2, n, o, dno) in &dpi {
            if *l2 != l {
                continue;
            }
            let c = plm * dno;
            for (n2, p, q, dpq) in &dpi {
                if n2 != n {
                    continue;
                }
                let c = &c * dpq;
                let t1 = &(&d.grad[m] * &d.grad[*p]) * &d.hess[*o][*q];
                let t2 = &(&d.grad[*o] * &d.grad[*p]) * &d.hess[m][*q];
                t12 += &c * &(t1 - t2);
            }
        }
    }
    let mut t34 = Expr::zero();
    for &(l, m, plm) in &entries {
        for &(n, o, pno) in &entries {
            let c = plm * pno;
            for (l2, p, q, dpq) in &dpi {
                if *l2 != l {
                    continue;
                }
                let c = &c * dpq;
                let t3 = &(&d.grad[*p] * &d.hess[m][n]) * &d.hess[o][*q];
                let t4 = &(&d.grad[m] * &d.hess[n][*p]) * &d.hess[o][*q];
                t34 += &c * &(t4 - t3.scale_ratio(2, 1));
            }
        }
    }
    (t12 + t34).scale(&(C::i() * C::from_ratio(2, 3)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("closed form requires a function of momenta only, got dependence on {0}")]
    PositionDependence(Var),
    #[error("closed form requires vanishing mixed derivatives, but d{0}d{1} f = {2}")]
    MixedDerivative(Var, Var, String),
}

/// `(4/3) i (∂_{q1}Π^{p2p3} + ∂_{q2}Π^{p3p1} + ∂_{q3}Π^{p1p2})
///  · Σ_{σ∈Z_3} Π^{pσ1 pσ2} ∂_{pσ3} f ∂²_{pσ1} f ∂²_{pσ2} f`,
/// valid for momentum-only `f` without mixed second derivatives.
pub fn a3_closed_form<C: Coeff>(pi: &Bivector<C>, f: &Expr<C>) -> Result<Expr<C>, ClosedFormError> {
    if let Some(v) = Var::POSITIONS.into_iter().find(|&v| f.depends_on(v)) {
        return Err(ClosedFormError::PositionDependence(v));
    }
    let first: Vec<Expr<C>> = Var::MOMENTA.iter().map(|&v| f.partial(v)).collect();
    for (i, fi) in first.iter().enumerate() {
        for j in i + 1..3 {
            let mixed = fi.partial(Var::p(j));
            if !mixed.is_zero() {
                return Err(ClosedFormError::MixedDerivative(Var::p(i), Var::p(j), mixed.to_string()));
            }
        }
    }
    let second: Vec<Expr<C>> = (0..3).map(|i| first[i].partial(Var::p(i))).collect();
    let prefactor: Expr<C> = (0..3)
        .map(|i| pi.entry(Var::p((i + 1) % 3), Var::p((i + 2) % 3)).partial(Var::q(i)))
        .sum();
    let cyclic: Expr<C> = (0..3)
        .map(|s| {
            let (a, b, c) = (s, (s + 1) % 3, (s + 2) % 3);
            let t = pi.entry(Var::p(a), Var::p(b)) * &first[c];
            &(&t * &second[a]) * &second[b]
        })
        .sum();
    Ok((&prefactor * &cyclic).scale(&(C::i() * C::from_ratio(4, 3))))
}

/// `Σ_k exp(i α_k p_k)`.
pub fn exp_sum<C: Coeff>(alpha: [Ratio<i64>; 3]) -> Expr<C> {
    (0..3)
        .map(|k| {
            let mut freq = [Ratio::from_integer(0); 3];
            freq[k] = alpha[k];
            Expr::exp_i(Freq(freq))
        })
        .sum()
}

/// `−(4/3) α_1²α_2²α_3² exp(i α·p) (Σ_k B^k/α_k) div B`; every `α_k ≠ 0`.
pub fn exp_sum_prediction<C: Coeff>(pi: &Bivector<C>, alpha: [Ratio<i64>; 3]) -> Expr<C> {
    assert!(alpha.iter().all(|a| *a != Ratio::from_integer(0)), "frequencies must be nonzero");
    let field = pi.field();
    let ratio = |r: Ratio<i64>| C::from_ratio(*r.numer(), *r.denom());
    let weight: Expr<C> = (0..3)
        .map(|k| field.component(k).scale(&ratio(alpha[k].recip())))
        .sum();
    let sq = alpha.iter().fold(Ratio::from_integer(1), |acc, a| acc * a * a);
    let prefactor = ratio(sq) * C::from_ratio(-4, 3);
    (&(&Expr::exp_i(Freq(alpha)) * &weight) * field.divergence()).scale(&prefactor)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// What a check asserts about `lhs − rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    /// `lhs = rhs` on every case.
    Vanishes,
    /// `lhs ≠ rhs` on some case.
    Nonzero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub inputs: Vec<String>,
    pub difference: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) -> {}", self.inputs.join(", "), self.difference)?;
        match &self.note {
            Some(n) => write!(f, " [{n}]"),
            None => Ok(()),
        }
    }
}

/// Outcome of a check. `status` is `pass` iff `lhs = rhs` on all cases
/// tried; a `fail` always carries a witness with nonzero difference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check_id: String,
    pub claim: Claim,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    pub witness: Option<Witness>,
    pub cases: usize,
}

impl Verdict {
    /// Runs `cases` until the first one with `lhs ≠ rhs`.
    pub fn over<C, I>(check_id: &str, claim: Claim, cases: I) -> Verdict
    where
        C: Coeff,
        I: IntoIterator<Item = (Vec<Expr<C>>, Expr<C>, Expr<C>)>,
    {
        let mut first: Option<(String, String)> = None;
        let mut count = 0;
        for (inputs, lhs, rhs) in cases {
            count += 1;
            if lhs != rhs {
                let difference = (&lhs - &rhs).to_string();
                return Verdict {
                    check_id: check_id.to_string(),
                    claim,
                    status: Status::Fail,
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    witness: Some(Witness {
                        inputs: inputs.iter().map(ToString::to_string).collect(),
                        difference,
                        note: None,
                    }),
                    cases: count,
                };
            }
            first.get_or_insert((lhs.to_string(), rhs.to_string()));
        }
        let (lhs, rhs) = first.unwrap_or_else(|| ("0".into(), "0".into()));
        Verdict {
            check_id: check_id.to_string(),
            claim,
            status: Status::Pass,
            lhs,
            rhs,
            witness: None,
            cases: count,
        }
    }

    pub fn single<C: Coeff>(check_id: &str, claim: Claim, inputs: Vec<Expr<C>>, lhs: Expr<C>, rhs: Expr<C>) -> Verdict {
        Verdict::over(check_id, claim, [(inputs, lhs, rhs)])
    }

    /// Whether the asserted claim holds.
    pub fn holds(&self) -> bool {
        match self.claim {
            Claim::Vanishes => self.status == Status::Pass,
            Claim::Nonzero => self.status == Status::Fail,
        }
    }
}

fn momenta<C: Coeff>() -> [Expr<C>; 3] {
    Var::MOMENTA.map(Expr::var)
}

/// `|p|²`.
pub fn momentum_square<C: Coeff>() -> Expr<C> {
    momenta::<C>().iter().map(|p| p * p).sum()
}

/// Obstruction witness quadruple: `(p1,p2,p3,q3p3)` for constant
/// density, `(p2,p1,p3,p1)` otherwise.
pub fn obstruction_witness<C: Coeff>(constant_density: bool) -> [Expr<C>; 4] {
    let [p1, p2, p3] = momenta::<C>();
    if constant_density {
        let k = &Expr::var(Var::Q3) * &p3;
        [p1, p2, p3, k]
    } else {
        [p2, p1.clone(), p3, p1]
    }
}

type Case<C> = (Vec<Expr<C>>, Expr<C>, Expr<C>);

/// Searches the witness set for a violation of total antisymmetry of the
/// associator: repeated-argument `A_2`, the third-order obstruction, and
/// the diagonal `A_3(|p|²,|p|²,|p|²)`.
pub fn check_alternative<C: Coeff>(sp: &StarProduct<C>, fuzz: &[Expr<C>]) -> Verdict {
    let a2 = a2_cochain(sp);
    let xs = coordinates::<C>();
    let mut cases: Vec<Case<C>> = Vec::new();
    let pool: Vec<Expr<C>> = xs.iter().chain(fuzz).cloned().collect();
    for f in &pool {
        for g in &pool {
            cases.push((vec![f.clone(), f.clone(), g.clone()], a2.eval3(f, f, g), Expr::zero()));
            if cases.last().is_some_and(|c| !c.1.is_zero()) {
                return Verdict::over("alternative", Claim::Nonzero, cases);
            }
        }
    }
    let constant = sp.bivector().field().divergence().as_constant().is_some();
    let w = obstruction_witness::<C>(constant);
    let o = obstruction_o(sp, &w[0], &w[1], &w[2], &w[3]);
    cases.push((w.to_vec(), o, Expr::zero()));
    let f = momentum_square::<C>();
    let diag = a3_cadabra(sp.bivector(), &f);
    cases.push((vec![f.clone(), f.clone(), f], diag, Expr::zero()));
    Verdict::over("alternative", Claim::Nonzero, cases)
}

/// `A_2(f,g,f) = 0` on all pairs drawn from `fuzz`.
pub fn check_flexible2<C: Coeff>(sp: &StarProduct<C>, pairs: &[(Expr<C>, Expr<C>)]) -> Verdict {
    let a2 = a2_cochain(sp);
    Verdict::over(
        "flexible2",
        Claim::Vanishes,
        pairs
            .iter()
            .map(|(f, g)| (vec![f.clone(), g.clone()], a2.eval3(f, g, f), Expr::zero())),
    )
}

/// `A_3(f,f,f) ≠ 0` witnesses failure of `f⋆(f⋆f) = (f⋆f)⋆f` at `λ³`.
pub fn check_power_assoc<C: Coeff>(pi: &Bivector<C>, f: &Expr<C>) -> Verdict {
    Verdict::single(
        "power_assoc",
        Claim::Nonzero,
        vec![f.clone(), f.clone(), f.clone()],
        a3_cadabra(pi, f),
        Expr::zero(),
    )
}

/// The five conditions of a monopole star product.
pub fn validate_monopole<C: Coeff>(sp: &StarProduct<C>) -> Vec<Verdict> {
    let a2 = a2_cochain(sp);
    let b1 = sp.b(1);
    let b2m = sp.b(2).antisym_part();
    let xs = coordinates::<C>();
    let [p1, p2, p3] = momenta::<C>();
    let a2p = a2.eval3(&p1, &p2, &p3);
    let c1 = Verdict::single(
        "monopole.A2_p123_nonzero",
        Claim::Nonzero,
        vec![p1.clone(), p2.clone(), p3.clone()],
        a2p.clone(),
        Expr::zero(),
    );
    let mut cases2 = Vec::new();
    for q in Var::POSITIONS.map(Expr::var) {
        for x in &xs {
            for y in &xs {
                cases2.push((vec![q.clone(), x.clone(), y.clone()], a2.eval3(&q, x, y), Expr::zero()));
            }
        }
    }
    let c2 = Verdict::over("monopole.A2_q_vanish", Claim::Vanishes, cases2);
    let c3 = Verdict::over(
        "monopole.B1_q_A2",
        Claim::Vanishes,
        Var::POSITIONS.map(Expr::var).into_iter().map(|q| {
            let v = b1.eval2(&q, &a2p);
            (vec![q, a2p.clone()], v, Expr::zero())
        }),
    );
    let mut cases4 = Vec::new();
    for x in &xs {
        for y in &xs {
            for z in &xs {
                let v = a2.eval3(x, y, z);
                let alt = alternate(&a2, x, y, z);
                cases4.push((vec![x.clone(), y.clone(), z.clone()], v, alt));
            }
        }
    }
    let c4 = Verdict::over("monopole.A2_antisym", Claim::Vanishes, cases4);
    let mut cases5 = Vec::new();
    for x in &xs {
        for y in &xs {
            cases5.push((vec![x.clone(), y.clone()], b2m.eval2(x, y), Expr::zero()));
        }
    }
    let c5 = Verdict::over("monopole.dist", Claim::Vanishes, cases5);
    vec![c1, c2, c3, c4, c5]
}
