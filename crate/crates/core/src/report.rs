//! Run configuration, the check registry, and report assembly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::associator::{
    a2_antisym, a2_cochain, a3_antisym, a3_cadabra, a3_closed_form, a3_direct, a3_direct_cochain,
    alternate, associator_series, check_alternative, check_flexible2, check_power_assoc,
    da3_routes, exp_sum, exp_sum_prediction, momentum_square, obstruction_o, obstruction_summands,
    obstruction_witness, pentagon_residual, validate_monopole, ClosedFormError, Witness,
};
use crate::expr::Var;
use crate::operators::{coordinates, hochschild_d, Cochain};
use crate::parse::{parse_expr, ParseError};
use crate::sample::Sampler;
use crate::star::{commutator, gauge_transform, StarError};
use crate::structure::{levi_civita, FieldError};
use crate::{Bivector, Claim, Coeff, Expr, FieldConfig, Scalar, StarProduct, Status, Verdict};

pub const ENGINE: &str = "monostar";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    MalformedLine { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("invalid value `{value}` for {key}: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("in {key}: {source}")]
    Expr { key: String, source: ParseError },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("unknown check id `{0}` (see list-checks)")]
    UnknownCheck(String),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error("check `{id}` does not apply: {reason}")]
    NotApplicable { id: String, reason: String },
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("operation {op} takes {expected} argument(s), got {got}")]
    Arity { op: String, expected: usize, got: usize },
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
}

/// How `B_3` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum B3Mode {
    Zero,
    Random(u64),
    /// Two random operators from seeds `s` and `s + 1`.
    Pair(u64),
}

impl FromStr for B3Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let seed = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad seed `{t}`: {e}"));
        let s = s.trim();
        // `random:7` and `random(7)` are both accepted
        let split = s.split_once(':').or_else(|| {
            s.strip_suffix(')').and_then(|body| body.split_once('('))
        });
        match split {
            None if s == "zero" => Ok(B3Mode::Zero),
            Some(("random", t)) => seed(t).map(B3Mode::Random),
            Some(("pair" | "random_pair", t)) => seed(t).map(B3Mode::Pair),
            _ => Err("expected zero, random:<seed> or pair:<seed>".into()),
        }
    }
}

impl B3Mode {
    fn labels(self) -> Vec<(String, Option<u64>)> {
        match self {
            B3Mode::Zero => vec![("zero".into(), None)],
            B3Mode::Random(s) => vec![(format!("random:{s}"), Some(s))],
            B3Mode::Pair(s) => vec![
                (format!("random:{s}"), Some(s)),
                (format!("random:{}", s.wrapping_add(1)), Some(s.wrapping_add(1))),
            ],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            _ => Err("expected text or json".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckSelection {
    All,
    Ids(Vec<String>),
}

impl FromStr for CheckSelection {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        if s.trim() == "all" {
            return Ok(CheckSelection::All);
        }
        let ids: Vec<String> = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect();
        for id in &ids {
            if !CHECKS.iter().any(|c| c.id == id) {
                return Err(ConfigError::UnknownCheck(id.clone()));
            }
        }
        Ok(CheckSelection::Ids(ids))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub field: [String; 3],
    pub order: usize,
    pub b3_mode: B3Mode,
    pub checks: CheckSelection,
    pub functions: BTreeMap<String, String>,
    pub output: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: ["0".into(), "0".into(), "0".into()],
            order: 3,
            b3_mode: B3Mode::Zero,
            checks: CheckSelection::All,
            functions: BTreeMap::new(),
            output: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    /// Reads flat `key = value` lines over the defaults. `#` starts a comment.
    pub fn parse_kv(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::MalformedLine { line: n + 1 })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| match e {
                    ConfigError::UnknownKey { key, .. } => ConfigError::UnknownKey { line: n + 1, key },
                    other => other,
                })?;
        }
        Ok(cfg)
    }

    /// Sets one configuration key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |reason: String| ConfigError::BadValue {
            key: key.into(),
            value: value.into(),
            reason,
        };
        match key {
            "field.b1" => self.field[0] = value.into(),
            "field.b2" => self.field[1] = value.into(),
            "field.b3" => self.field[2] = value.into(),
            "order" => {
                let order: usize = value.parse().map_err(|e| bad(format!("{e}")))?;
                if order > crate::star::MAX_ORDER {
                    return Err(bad(format!("at most {}", crate::star::MAX_ORDER)));
                }
                self.order = order;
            }
            "b3_mode" => self.b3_mode = value.parse().map_err(bad)?,
            "checks" => self.checks = value.parse()?,
            "output" => self.output = value.parse().map_err(bad)?,
            _ => match key.strip_prefix("functions.") {
                Some(name) if !name.is_empty() => {
                    self.functions.insert(name.into(), value.into());
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line: 0,
                        key: key.into(),
                    })
                }
            },
        }
        Ok(())
    }

    pub fn field_config(&self) -> Result<FieldConfig, ConfigError> {
        let mut comps: [Expr; 3] = Default::default();
        for (k, text) in self.field.iter().enumerate() {
            comps[k] = parse_expr(text).map_err(|source| ConfigError::Expr {
                key: format!("field.b{}", k + 1),
                source,
            })?;
        }
        Ok(FieldConfig::new(comps)?)
    }

    fn parsed_functions(&self) -> Result<BTreeMap<String, Expr>, ConfigError> {
        self.functions
            .iter()
            .map(|(name, text)| {
                parse_expr(text)
                    .map(|e| (name.clone(), e))
                    .map_err(|source| ConfigError::Expr {
                        key: format!("functions.{name}"),
                        source,
                    })
            })
            .collect()
    }
}

/// Fixed data shared by all checks of one run.
pub struct Context {
    pub field: FieldConfig,
    pub pi: Bivector,
    /// Weyl product with `B_3 = 0`.
    pub base: StarProduct,
    /// Products with each configured `B_3`.
    pub variants: Vec<(String, StarProduct)>,
    pub functions: BTreeMap<String, Expr>,
    pub fuzz: Vec<Expr>,
}

const FUZZ_SEED: u64 = 0x5eed;
const FUZZ_SIZE: usize = 8;

impl Context {
    pub fn new(cfg: &RunConfig) -> Result<Context, RunError> {
        let field = cfg.field_config()?;
        let pi = Bivector::from_field(&field);
        let base = StarProduct::weyl(&pi, cfg.order)?;
        let variants = cfg
            .b3_mode
            .labels()
            .into_iter()
            .map(|(label, seed)| {
                let sp = match seed {
                    None => base.clone(),
                    Some(s) => base.clone().with_b3(Sampler::new(s).bidiff::<Scalar>())?,
                };
                Ok((label, sp))
            })
            .collect::<Result<Vec<_>, StarError>>()?;
        let functions = cfg.parsed_functions()?;
        let mut sampler = Sampler::new(FUZZ_SEED);
        let mut fuzz: Vec<Expr> = functions.values().cloned().collect();
        fuzz.extend((0..FUZZ_SIZE).map(|_| sampler.expr()));
        Ok(Context {
            field,
            pi,
            base,
            variants,
            functions,
            fuzz,
        })
    }

    fn constant_density(&self) -> bool {
        self.field.divergence().as_constant().is_some()
    }

    fn pairs(&self) -> Vec<(Expr, Expr)> {
        self.fuzz
            .iter()
            .zip(self.fuzz.iter().cycle().skip(1))
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect()
    }

    fn triples(&self) -> Vec<[Expr; 3]> {
        let n = self.fuzz.len();
        (0..n.min(6))
            .map(|i| [0, 1, 2].map(|k| self.fuzz[(i + k) % n].clone()))
            .collect()
    }

    fn quadruples(&self) -> Vec<[Expr; 4]> {
        let n = self.fuzz.len();
        (0..n.min(3))
            .map(|i| [0, 1, 2, 3].map(|k| self.fuzz[(i + 2 * k) % n].clone()))
            .collect()
    }
}

type Case = (Vec<Expr>, Expr, Expr);

pub struct CheckSpec {
    pub id: &'static str,
    pub claim: Claim,
    pub description: &'static str,
    run: fn(&Context) -> Result<Verdict, RunError>,
}

fn verdict(id: &str, claim: Claim, cases: Vec<Case>) -> Verdict {
    Verdict::over(id, claim, cases)
}

fn check_unit(ctx: &Context) -> Result<Verdict, RunError> {
    let mut cases = Vec::new();
    for (_, sp) in &ctx.variants {
        for f in &ctx.fuzz {
            let lifted = sp.lift(f);
            for s in [sp.star(&Expr::one(), f), sp.star(f, &Expr::one())] {
                for j in 0..=sp.order() {
                    cases.push((vec![f.clone()], s.coeff(j), lifted.coeff(j)));
                }
            }
        }
    }
    Ok(verdict("unit", Claim::Vanishes, cases))
}

fn check_grading(ctx: &Context) -> Result<Verdict, RunError> {
    let mut cases = Vec::new();
    for (_, sp) in &ctx.variants {
        for [f, g, h] in ctx.triples() {
            let s = associator_series(sp, &f, &g, &h);
            cases.push((vec![f.clone(), g.clone(), h.clone()], s.coeff(0), Expr::zero()));
            cases.push((vec![f, g, h], s.coeff(1), Expr::zero()));
        }
    }
    Ok(verdict("grading", Claim::Vanishes, cases))
}

fn check_commutators(ctx: &Context) -> Result<Verdict, RunError> {
    let sp = &ctx.base;
    let mut cases = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let targets = [
                (Var::q(i), Var::q(j), Expr::zero()),
                (
                    Var::q(i),
                    Var::p(j),
                    if i == j { Expr::int(2) } else { Expr::zero() },
                ),
                (
                    Var::p(i),
                    Var::p(j),
                    (0..3)
                        .map(|k| ctx.field.component(k).scale(&Scalar::from_int(2 * levi_civita(i, j, k))))
                        .sum(),
                ),
            ];
            for (a, b, lambda1) in targets {
                let (x, y) = (Expr::var(a), Expr::var(b));
                let c = commutator(sp, &x, &y);
                for k in 0..=sp.order() {
                    let want = if k == 1 { lambda1.clone() } else { Expr::zero() };
                    cases.push((vec![x.clone(), y.clone()], c.coeff(k), want));
                }
            }
        }
    }
    Ok(verdict("commutators", Claim::Vanishes, cases))
}

fn coordinate_pairs() -> Vec<(Expr, Expr)> {
    let xs = coordinates::<Scalar>();
    xs.iter()
        .flat_map(|a| xs.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

fn check_dist(ctx: &Context) -> Result<Verdict, RunError> {
    let cases = coordinate_pairs()
        .into_iter()
        .map(|(x, y)| {
            let c = commutator(&ctx.base, &x, &y).coeff(2);
            (vec![x, y], c, Expr::zero())
        })
        .collect();
    Ok(verdict("dist", Claim::Vanishes, cases))
}

fn check_jacobiator(ctx: &Context) -> Result<Verdict, RunError> {
    let [p1, p2, p3] = Var::MOMENTA.map(Expr::var);
    let j = ctx.pi.jacobiator(&p1, &p2, &p3);
    Ok(Verdict::single(
        "jacobiator_p123",
        Claim::Vanishes,
        vec![p1, p2, p3],
        j,
        -ctx.field.divergence().clone(),
    ))
}

fn check_b2_symmetric(ctx: &Context) -> Result<Verdict, RunError> {
    let b2 = ctx.base.b(2);
    let cases = coordinate_pairs()
        .into_iter()
        .chain(ctx.pairs())
        .map(|(f, g)| {
            let (l, r) = (b2.eval2(&f, &g), b2.eval2(&g, &f));
            (vec![f, g], l, r)
        })
        .collect();
    Ok(verdict("b2_symmetric", Claim::Vanishes, cases))
}

fn check_b2_no11(ctx: &Context) -> Result<Verdict, RunError> {
    let b2 = ctx.base.b(2);
    let cases = coordinate_pairs()
        .into_iter()
        .map(|(x, y)| {
            let v = b2.eval2(&x, &y);
            (vec![x, y], v, Expr::zero())
        })
        .collect();
    Ok(verdict("b2_no11", Claim::Vanishes, cases))
}

macro_rules! monopole_check {
    ($name:ident, $k:literal) => {
        fn $name(ctx: &Context) -> Result<Verdict, RunError> {
            Ok(validate_monopole(&ctx.base).swap_remove($k))
        }
    };
}

monopole_check!(monopole_a2_nonzero, 0);
monopole_check!(monopole_q_vanish, 1);
monopole_check!(monopole_b1_q, 2);
monopole_check!(monopole_antisym, 3);
monopole_check!(monopole_dist, 4);

fn coordinate_triples() -> Vec<[Expr; 3]> {
    let xs = coordinates::<Scalar>();
    let mut out = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                out.push([xs[a].clone(), xs[b].clone(), xs[c].clone()]);
            }
        }
    }
    out
}

fn check_a2_half_jacobiator(ctx: &Context) -> Result<Verdict, RunError> {
    let cases = coordinate_triples()
        .into_iter()
        .map(|[x, y, z]| {
            let l = a2_antisym(&ctx.base, &x, &y, &z);
            let r = ctx.pi.jacobiator(&x, &y, &z).scale_ratio(1, 2);
            (vec![x, y, z], l, r)
        })
        .collect();
    Ok(verdict("a2_antisym_half_jacobiator", Claim::Vanishes, cases))
}

fn check_flexible(ctx: &Context) -> Result<Verdict, RunError> {
    Ok(check_flexible2(&ctx.base, &ctx.pairs()))
}

const PERTURBATION_SEED: u64 = 0x22;

fn check_flexible2_perturbed(ctx: &Context) -> Result<Verdict, RunError> {
    let delta = Sampler::new(PERTURBATION_SEED).antisym_22::<Scalar>();
    let b2 = ctx.base.b(2).plus(&delta.into());
    let sp = ctx.base.clone().with_b2(b2)?;
    let mut v = check_flexible2(&sp, &ctx.pairs());
    v.check_id = "flexible2_perturbed".into();
    v.claim = Claim::Nonzero;
    Ok(v)
}

fn check_a3_antisym_formula(ctx: &Context) -> Result<Verdict, RunError> {
    let cases = ctx
        .triples()
        .into_iter()
        .map(|[f, g, h]| {
            let v = a3_antisym(&ctx.base, &f, &g, &h);
            (vec![f, g, h], v, Expr::zero())
        })
        .collect();
    Ok(verdict("a3_antisym_formula", Claim::Vanishes, cases))
}

fn check_a3_alternation(ctx: &Context) -> Result<Verdict, RunError> {
    let mut cases = Vec::new();
    for (_, sp) in &ctx.variants {
        let a3 = a3_direct_cochain(sp);
        for [f, g, h] in ctx.triples() {
            let v = alternate(&a3, &f, &g, &h);
            cases.push((vec![f, g, h], v, Expr::zero()));
        }
    }
    Ok(verdict("a3_alternation", Claim::Vanishes, cases))
}

fn check_obstruction_routes(ctx: &Context) -> Result<Verdict, RunError> {
    let quads = ctx.quadruples();
    let mut cases = Vec::new();
    for (_, sp) in &ctx.variants {
        for [f, g, h, k] in &quads {
            let o = obstruction_o(sp, f, g, h, k);
            let routes = da3_routes(sp, f, g, h, k);
            let inputs = vec![f.clone(), g.clone(), h.clone(), k.clone()];
            for route in [routes.coboundary, routes.pentagon, routes.appendix_b] {
                cases.push((inputs.clone(), route, o.clone()));
            }
        }
    }
    Ok(verdict("obstruction_routes", Claim::Vanishes, cases))
}

fn check_pentagon(ctx: &Context) -> Result<Verdict, RunError> {
    let mut cases = Vec::new();
    for (_, sp) in &ctx.variants {
        for [f, g, h, k] in ctx.quadruples() {
            let r = pentagon_residual(sp, &f, &g, &h, &k);
            for j in 0..=sp.order() {
                cases.push((vec![f.clone(), g.clone(), h.clone(), k.clone()], r.coeff(j), Expr::zero()));
            }
        }
    }
    Ok(verdict("pentagon", Claim::Vanishes, cases))
}

fn obstruction_verdict(ctx: &Context, id: &str, constant: bool) -> Result<Verdict, RunError> {
    if ctx.constant_density() != constant {
        return Err(RunError::NotApplicable {
            id: id.into(),
            reason: format!(
                "monopole density {} is {}constant",
                ctx.field.divergence(),
                if constant { "not " } else { "" }
            ),
        });
    }
    let w = obstruction_witness::<Scalar>(constant);
    let o = obstruction_o(&ctx.base, &w[0], &w[1], &w[2], &w[3]);
    let mut v = Verdict::single(id, Claim::Nonzero, w.to_vec(), o, Expr::zero());
    if let Some(witness) = v.witness.as_mut() {
        let a2 = a2_cochain(&ctx.base).eval3(&w[0], &w[1], &w[2]);
        witness.note = Some(format!("A2({}, {}, {}) = {a2}", w[0], w[1], w[2]));
    }
    Ok(v)
}

fn check_obstruction_constant(ctx: &Context) -> Result<Verdict, RunError> {
    obstruction_verdict(ctx, "obstruction_constant", true)
}

fn check_obstruction_nonconstant(ctx: &Context) -> Result<Verdict, RunError> {
    obstruction_verdict(ctx, "obstruction_nonconstant", false)
}

/// Which summands of the obstruction survive on the witness quadruple.
fn check_obstruction_terms(ctx: &Context) -> Result<Verdict, RunError> {
    let constant = ctx.constant_density();
    let w = obstruction_witness::<Scalar>(constant);
    let s = obstruction_summands(&ctx.base, &w[0], &w[1], &w[2], &w[3]);
    let o: Expr = s.iter().cloned().sum();
    // constant density: only the first summand; otherwise only -B1(A2(f,g,h),g)
    let keep = if constant { 0 } else { 4 };
    Ok(Verdict::single("obstruction_terms", Claim::Vanishes, w.to_vec(), o, s[keep].clone()))
}

fn check_a3_momentum_square(ctx: &Context) -> Result<Verdict, RunError> {
    let f = momentum_square::<Scalar>();
    let cadabra = a3_cadabra(&ctx.pi, &f);
    let closed = a3_closed_form(&ctx.pi, &f)?;
    let predicted = (&ctx.field.momentum_dot() * ctx.field.divergence())
        .scale(&(Scalar::i() * Scalar::from_ratio(32, 3)));
    Ok(verdict(
        "a3_momentum_square",
        Claim::Vanishes,
        vec![
            (vec![f.clone()], cadabra.clone(), predicted),
            (vec![f], closed, cadabra),
        ],
    ))
}

/// Frequency triples for the exponential example.
pub fn exp_sum_alphas() -> [[Ratio<i64>; 3]; 3] {
    let r = |n, d| Ratio::new(n, d);
    [
        [r(1, 1), r(1, 1), r(1, 1)],
        [r(1, 1), r(2, 1), r(-1, 2)],
        [r(-3, 1), r(1, 3), r(2, 1)],
    ]
}

fn check_a3_exp_sum(ctx: &Context) -> Result<Verdict, RunError> {
    let mut cases = Vec::new();
    for alpha in exp_sum_alphas() {
        let f = exp_sum::<Scalar>(alpha);
        let v = a3_cadabra(&ctx.pi, &f);
        let closed = a3_closed_form(&ctx.pi, &f)?;
        cases.push((vec![f.clone()], v.clone(), exp_sum_prediction(&ctx.pi, alpha)));
        cases.push((vec![f], closed, v));
    }
    Ok(verdict("a3_exp_sum", Claim::Vanishes, cases))
}

fn check_power(ctx: &Context) -> Result<Verdict, RunError> {
    let mut candidates = vec![momentum_square::<Scalar>()];
    candidates.extend(ctx.functions.values().cloned());
    let mut last = None;
    for f in candidates {
        let v = check_power_assoc(&ctx.pi, &f);
        if v.status == Status::Fail {
            return Ok(v);
        }
        last = Some(v);
    }
    Ok(last.expect("at least one candidate"))
}

fn check_alt(ctx: &Context) -> Result<Verdict, RunError> {
    Ok(check_alternative(&ctx.base, &ctx.fuzz))
}

const COCHAIN_SEED: u64 = 0xd0d0;

fn check_dd(ctx: &Context) -> Result<Verdict, RunError> {
    let mut s = Sampler::new(COCHAIN_SEED);
    let mut cases = Vec::new();
    let fz = &ctx.fuzz;
    for n in 0..4 {
        let d1: Cochain<Scalar> = s.diffop::<Scalar>().into();
        let b2: Cochain<Scalar> = s.bidiff::<Scalar>().into();
        let (f, g, h, k) = (&fz[n % fz.len()], &fz[(n + 1) % fz.len()], &fz[(n + 2) % fz.len()], &fz[(n + 3) % fz.len()]);
        let dd1 = hochschild_d(&hochschild_d(&d1)).eval3(f, g, h);
        let dd2 = hochschild_d(&hochschild_d(&b2)).eval4(f, g, h, k);
        cases.push((vec![f.clone(), g.clone(), h.clone()], dd1, Expr::zero()));
        cases.push((vec![f.clone(), g.clone(), h.clone(), k.clone()], dd2, Expr::zero()));
    }
    Ok(verdict("hochschild_dd", Claim::Vanishes, cases))
}

const GAUGE_SEED: u64 = 0x9a9e;

fn check_gauge(ctx: &Context) -> Result<Verdict, RunError> {
    let mut s = Sampler::new(GAUGE_SEED);
    let mut cases = Vec::new();
    for (f, g) in ctx.pairs().into_iter().take(4) {
        let d1 = s.diffop::<Scalar>();
        let sp = gauge_transform(&ctx.base, &d1)?;
        let dd1 = hochschild_d(&Cochain::from(d1.clone()));
        let want = ctx.base.b(1).eval2(&f, &g) - dd1.eval2(&f, &g);
        cases.push((vec![f.clone(), g.clone()], sp.b(1).eval2(&f, &g), want));
    }
    Ok(verdict("gauge", Claim::Vanishes, cases))
}

macro_rules! spec {
    ($id:literal, $claim:ident, $desc:literal, $run:expr) => {
        CheckSpec {
            id: $id,
            claim: Claim::$claim,
            description: $desc,
            run: $run,
        }
    };
}

/// Every check the verifier knows, in report order.
pub static CHECKS: &[CheckSpec] = &[
    spec!("unit", Vanishes, "1*f = f*1 = f order by order", check_unit),
    spec!("grading", Vanishes, "A0 and A1 vanish", check_grading),
    spec!("commutators", Vanishes, "[q,q]=0, [q_i,p_j]=2 lambda delta_ij, [p_i,p_j]=2 lambda eps_ijk B^k", check_commutators),
    spec!("dist", Vanishes, "lambda^2 part of coordinate commutators vanishes", check_dist),
    spec!("jacobiator_p123", Vanishes, "J(p1,p2,p3) = -div B", check_jacobiator),
    spec!("b2_symmetric", Vanishes, "B2(f,g) = B2(g,f)", check_b2_symmetric),
    spec!("b2_no11", Vanishes, "B2 vanishes on coordinate pairs", check_b2_no11),
    spec!("monopole.A2_p123_nonzero", Nonzero, "A2(p1,p2,p3) != 0", monopole_a2_nonzero),
    spec!("monopole.A2_q_vanish", Vanishes, "A2(q_i,x^I,x^J) = 0", monopole_q_vanish),
    spec!("monopole.B1_q_A2", Vanishes, "B1(q_i, A2(p1,p2,p3)) = 0", monopole_b1_q),
    spec!("monopole.A2_antisym", Vanishes, "A2 totally antisymmetric on coordinates", monopole_antisym),
    spec!("monopole.dist", Vanishes, "B2^-(x^I,x^J) = 0", monopole_dist),
    spec!("a2_antisym_half_jacobiator", Vanishes, "A2^-(x^I,x^J,x^K) = J/2 on coordinate triples", check_a2_half_jacobiator),
    spec!("flexible2", Vanishes, "A2(f,g,f) = 0", check_flexible),
    spec!("flexible2_perturbed", Nonzero, "antisymmetric (2,2) perturbation of B2 breaks flexibility", check_flexible2_perturbed),
    spec!("a3_antisym_formula", Vanishes, "cyclic formula for A3^- vanishes for symmetric B2", check_a3_antisym_formula),
    spec!("a3_alternation", Vanishes, "alternation of A3 vanishes for every B3", check_a3_alternation),
    spec!("obstruction_routes", Vanishes, "dA3 equals O by coboundary, Pentagon and dB2 expansion", check_obstruction_routes),
    spec!("pentagon", Vanishes, "Pentagon residual vanishes at every order", check_pentagon),
    spec!("obstruction_constant", Nonzero, "O(p1,p2,p3,q3 p3) != 0 for constant density", check_obstruction_constant),
    spec!("obstruction_nonconstant", Nonzero, "O(p2,p1,p3,p1) != 0 for varying density", check_obstruction_nonconstant),
    spec!("obstruction_terms", Vanishes, "only the expected summand of O survives on the witness", check_obstruction_terms),
    spec!("a3_momentum_square", Vanishes, "A3(|p|^2,|p|^2,|p|^2) = 32/3 i (p.B) div B", check_a3_momentum_square),
    spec!("a3_exp_sum", Vanishes, "A3 on sums of exponentials matches the bounded-function formula", check_a3_exp_sum),
    spec!("power_assoc", Nonzero, "A3(f,f,f) != 0", check_power),
    spec!("alternative", Nonzero, "a violation of total antisymmetry exists", check_alt),
    spec!("hochschild_dd", Vanishes, "d o d = 0 on 1- and 2-cochains", check_dd),
    spec!("gauge", Vanishes, "B1' = B1 - dD1", check_gauge),
];

/// `nonzero` for claims the theory predicts to be witnessed, `pass` otherwise.
pub fn expected_status(spec: &CheckSpec, field: &FieldConfig) -> Expected {
    match spec.claim {
        Claim::Vanishes => Expected::Pass,
        Claim::Nonzero if spec.id == "flexible2_perturbed" || field.is_monopole() => Expected::Nonzero,
        Claim::Nonzero => Expected::Pass,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Pass,
    Nonzero,
}

impl Expected {
    fn matches(self, status: Status) -> bool {
        matches!((self, status), (Expected::Pass, Status::Pass) | (Expected::Nonzero, Status::Fail))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictRecord {
    pub id: String,
    pub status: Status,
    pub expected: Expected,
    pub lhs: String,
    pub rhs: String,
    pub witness: Option<String>,
    pub cases: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldEcho {
    pub b1: String,
    pub b2: String,
    pub b3: String,
    pub div: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unexpected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Engine {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub conventions: BTreeMap<String, String>,
    pub field: FieldEcho,
    pub b3: Vec<String>,
    pub verdicts: Vec<VerdictRecord>,
    pub summary: Summary,
    pub engine: Engine,
}

impl Report {
    /// True when every verdict matches its expected status.
    pub fn reproduced(&self) -> bool {
        self.summary.unexpected == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.engine.name, self.engine.version);
        let _ = writeln!(
            out,
            "field: B1 = {}, B2 = {}, B3 = {}; div B = {}",
            self.field.b1, self.field.b2, self.field.b3, self.field.div
        );
        if self.field.div == "0" {
            let _ = writeln!(out, "note: associative-compatible field (div B = 0)");
        }
        let _ = writeln!(out, "B3: {}", self.b3.join(", "));
        let _ = writeln!(out, "conventions:");
        for (k, v) in &self.conventions {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for v in &self.verdicts {
            let mark = if v.expected.matches(v.status) { "ok " } else { "BAD" };
            let expected = match v.expected {
                Expected::Pass => "pass",
                Expected::Nonzero => "nonzero",
            };
            let _ = writeln!(out, "{mark} {:<28} status={} expected={expected} cases={}", v.id, v.status, v.cases);
            let _ = writeln!(out, "      lhs = {}", v.lhs);
            let _ = writeln!(out, "      rhs = {}", v.rhs);
            if let Some(w) = &v.witness {
                let _ = writeln!(out, "      witness {w}");
            }
        }
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} unexpected",
            self.summary.pass, self.summary.fail, self.summary.unexpected
        );
        out
    }
}

/// `a / b` when `a` is a constant multiple of nonzero `b`.
pub fn proportionality(a: &Expr, b: &Expr) -> Option<Scalar> {
    let (m, bc) = b.terms().next()?;
    let ac = a.terms().find(|(n, _)| *n == m).map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero);
    let norm = bc.re() * bc.re() + bc.im() * bc.im();
    let re = (ac.re() * bc.re() + ac.im() * bc.im()) / norm.clone();
    let im = (ac.im() * bc.re() - ac.re() * bc.im()) / norm;
    let r = Scalar::from_parts(&re, &im)?;
    (b.scale(&r) == *a).then_some(r)
}

fn fmt_scalar(s: &Scalar) -> String {
    Expr::constant(s.clone()).to_string()
}

fn conventions(ctx: &Context) -> BTreeMap<String, String> {
    let mut c = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        c.insert(k.to_string(), v);
    };
    put("bracket", "{f,g} = sum_IJ Pi^IJ d_I f d_J g; {q_i,p_j} = delta_ij; {p_i,p_j} = eps_ijk B^k".into());
    put("B1", "{f,g}".into());
    put("B2", "1/2 Pi^IJ Pi^KL d_IK f d_JL g + 1/3 Pi^IJ d_J Pi^KL (d_IK f d_L g - d_K f d_IL g)".into());
    put("lambda", "i*hbar/2".into());
    put("jordan", "(f*g + g*f)/2".into());
    put("hochschild", "df(a0..an) = a0 f(a1..) + sum_j (-1)^(j+1) f(..a_j a_(j+1)..) + (-1)^(n+1) f(..a_(n-1)) a_n".into());
    put("charge", "1".into());
    let [p1, p2, p3] = Var::MOMENTA.map(Expr::var);
    let div = ctx.field.divergence();
    if !div.is_zero() {
        let j = ctx.pi.jacobiator(&p1, &p2, &p3);
        let a2 = a2_cochain(&ctx.base).eval3(&p1, &p2, &p3);
        let show = |r: Option<Scalar>| r.as_ref().map(fmt_scalar).unwrap_or_else(|| "not proportional".into());
        put("jacobiator_p123/div", show(proportionality(&j, div)));
        put("A2_p123/div", show(proportionality(&a2, div)));
        put("A2_p123/jacobiator_p123", show(proportionality(&a2, &j)));
    }
    c
}

/// Runs the selected checks. Inapplicable checks are skipped under
/// `all` and rejected when named explicitly.
pub fn run(cfg: &RunConfig) -> Result<Report, RunError> {
    let ctx = Context::new(cfg)?;
    let (specs, explicit): (Vec<&CheckSpec>, bool) = match &cfg.checks {
        CheckSelection::All => (CHECKS.iter().collect(), false),
        CheckSelection::Ids(ids) => (
            ids.iter()
                .map(|id| {
                    CHECKS
                        .iter()
                        .find(|c| c.id == id)
                        .ok_or_else(|| ConfigError::UnknownCheck(id.clone()))
                })
                .collect::<Result<_, _>>()?,
            true,
        ),
    };
    let results: Vec<Result<Verdict, RunError>> = specs.par_iter().map(|s| (s.run)(&ctx)).collect();
    let mut verdicts = Vec::new();
    for (spec, result) in specs.iter().zip(results) {
        let v = match result {
            Ok(v) => v,
            Err(RunError::NotApplicable { .. }) if !explicit => continue,
            Err(e) => return Err(e),
        };
        let expected = expected_status(spec, &ctx.field);
        verdicts.push(VerdictRecord {
            id: v.check_id,
            status: v.status,
            expected,
            lhs: v.lhs,
            rhs: v.rhs,
            witness: v.witness.as_ref().map(Witness::to_string),
            cases: v.cases,
        });
    }
    let pass = verdicts.iter().filter(|v| v.status == Status::Pass).count();
    let unexpected = verdicts.iter().filter(|v| !v.expected.matches(v.status)).count();
    let [b1, b2, b3] = ctx.field.components().clone().map(|e| e.to_string());
    Ok(Report {
        conventions: conventions(&ctx),
        field: FieldEcho {
            b1,
            b2,
            b3,
            div: ctx.field.divergence().to_string(),
        },
        b3: ctx.variants.iter().map(|(l, _)| l.clone()).collect(),
        summary: Summary {
            pass,
            fail: verdicts.len() - pass,
            unexpected,
        },
        verdicts,
        engine: Engine {
            name: ENGINE,
            version: VERSION,
        },
    })
}

/// Names accepted by [`eval`], with their arities.
pub const OPS: &[(&str, usize)] = &[
    ("A2", 3),
    ("A2_antisym", 3),
    ("A3_direct", 3),
    ("A3_antisym", 3),
    ("O", 4),
    ("dA3", 4),
    ("A3_cadabra", 1),
    ("A3_closed_form", 1),
    ("bracket", 2),
    ("jacobiator", 3),
    ("commutator", 2),
];

/// Evaluates one named operation on expression arguments.
pub fn eval(op: &str, args: &[String], cfg: &RunConfig) -> Result<String, RunError> {
    let &(_, arity) = OPS
        .iter()
        .find(|(name, _)| *name == op)
        .ok_or_else(|| RunError::UnknownOp(op.into()))?;
    if args.len() != arity {
        return Err(RunError::Arity {
            op: op.into(),
            expected: arity,
            got: args.len(),
        });
    }
    let xs: Vec<Expr> = args
        .iter()
        .enumerate()
        .map(|(n, a)| {
            parse_expr(a).map_err(|source| ConfigError::Expr {
                key: format!("argument {}", n + 1),
                source,
            })
        })
        .collect::<Result<_, _>>()?;
    let ctx = Context::new(cfg)?;
    let sp = &ctx.variants[0].1;
    let out = match op {
        "A2" => a2_cochain(sp).eval(&xs),
        "A2_antisym" => a2_antisym(sp, &xs[0], &xs[1], &xs[2]),
        "A3_direct" => a3_direct(sp, &xs[0], &xs[1], &xs[2]),
        "A3_antisym" => a3_antisym(sp, &xs[0], &xs[1], &xs[2]),
        "O" => obstruction_o(sp, &xs[0], &xs[1], &xs[2], &xs[3]),
        "dA3" => {
            let r = da3_routes(sp, &xs[0], &xs[1], &xs[2], &xs[3]);
            if !r.agree() {
                return Ok(format!(
                    "coboundary: {}\npentagon: {}\nappendix_b: {}",
                    r.coboundary, r.pentagon, r.appendix_b
                ));
            }
            r.coboundary
        }
        "A3_cadabra" => a3_cadabra(&ctx.pi, &xs[0]),
        "A3_closed_form" => a3_closed_form(&ctx.pi, &xs[0])?,
        "bracket" => ctx.pi.bracket(&xs[0], &xs[1]),
        "jacobiator" => ctx.pi.jacobiator(&xs[0], &xs[1], &xs[2]),
        "commutator" => {
            let c = commutator(sp, &xs[0], &xs[1]);
            let lines: Vec<String> = c
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(j, e)| format!("lambda^{j}: {e}"))
                .collect();
            return Ok(if lines.is_empty() { "0".into() } else { lines.join("\n") });
        }
        _ => unreachable!("registry and dispatch agree"),
    };
    Ok(out.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(b: [&str; 3]) -> RunConfig {
        RunConfig {
            field: b.map(String::from),
            ..RunConfig::default()
        }
    }

    #[test]
    fn kv_config() {
        let text = "# sample\nfield.b1 = 1/3*q1\nfield.b2 = 1/3*q2\nfield.b3 = 1/3*q3\norder = 2\nb3_mode = pair:5\nchecks = unit, dist\nfunctions.f = p1^2\n";
        let c = RunConfig::parse_kv(text).unwrap();
        assert_eq!(c.order, 2);
        assert_eq!(c.b3_mode, B3Mode::Pair(5));
        assert_eq!(c.checks, CheckSelection::Ids(vec!["unit".into(), "dist".into()]));
        assert_eq!(c.functions["f"], "p1^2");
        assert!(matches!(
            RunConfig::parse_kv("colour = red"),
            Err(ConfigError::UnknownKey { line: 1, .. })
        ));
        assert!(matches!(RunConfig::parse_kv("\norder"), Err(ConfigError::MalformedLine { line: 2 })));
        assert!(matches!(RunConfig::parse_kv("checks = nope"), Err(ConfigError::UnknownCheck(_))));
        assert!(matches!(RunConfig::parse_kv("order = 4"), Err(ConfigError::BadValue { .. })));
    }

    #[test]
    fn expression_errors_name_their_source() {
        let err = cfg(["q1 + * p1", "0", "0"]).field_config().unwrap_err();
        assert_eq!(err.to_string(), "in field.b1: syntax error at position 5: unexpected character '*'");
        assert!(matches!(cfg(["p1", "0", "0"]).field_config(), Err(ConfigError::Field(_))));
    }

    #[test]
    fn b3_modes() {
        assert_eq!("zero".parse::<B3Mode>(), Ok(B3Mode::Zero));
        assert_eq!("random:3".parse::<B3Mode>(), Ok(B3Mode::Random(3)));
        assert_eq!("random_pair(4)".parse::<B3Mode>(), Ok(B3Mode::Pair(4)));
        assert_eq!("random(4)".parse::<B3Mode>(), Ok(B3Mode::Random(4)));
        assert!("pair:x".parse::<B3Mode>().is_err());
        assert!("pair(3".parse::<B3Mode>().is_err());
    }

    #[test]
    fn proportionality_constant() {
        let a = parse_expr::<Scalar>("-2/3*q1 + 4/3*i*q2").unwrap();
        let b = parse_expr::<Scalar>("q1 - 2*i*q2").unwrap();
        assert_eq!(proportionality(&a, &b), Some(Scalar::from_ratio(-2, 3)));
        assert_eq!(proportionality(&a, &parse_expr("q1").unwrap()), None);
    }

    #[test]
    fn explicit_inapplicable_check_is_an_error() {
        let mut c = cfg(["1/2*q1^2", "0", "0"]);
        c.checks = CheckSelection::Ids(vec!["obstruction_constant".into()]);
        assert!(matches!(run(&c), Err(RunError::NotApplicable { .. })));
    }

    #[test]
    fn eval_registry() {
        let c = cfg(["1/3*q1", "1/3*q2", "1/3*q3"]);
        assert_eq!(eval("bracket", &["p1".into(), "p2".into()], &c).unwrap(), "1/3*q3");
        assert_eq!(eval("jacobiator", &["q1".into(), "p1".into(), "p2".into()], &c).unwrap(), "0");
        assert!(matches!(eval("bracket", &["p1".into()], &c), Err(RunError::Arity { expected: 2, got: 1, .. })));
        assert!(matches!(eval("nope", &[], &c), Err(RunError::UnknownOp(_))));
        assert!(matches!(
            eval("A3_closed_form", &["p1*p2".into()], &c),
            Err(RunError::ClosedForm(ClosedFormError::MixedDerivative(..)))
        ));
    }
}
