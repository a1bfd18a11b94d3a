//! Dynamic rationals as nets with exact rational arithmetic.
//!
//! A [`Net`] assigns a rational to each index of ω or of a finite directed
//! frame. It may carry a Cauchy modulus, a target real with an error bound,
//! and (on ω) a declared eventual period. Convergence and equivalence checks
//! answer `Certified`, `Refuted` or `Unknown` and never guess: a modulus is
//! spot-checked, a period or a finite frame is decided exactly, and
//! separations are certified with interval arithmetic on exact endpoints.

mod interval;
mod rho;

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::devmodel::Frame;

pub use interval::Interval;
pub use rho::{
    abs_lt_text, equiv_formula, eval_equiv, eval_rho, eval_rho_omega, grid_model, grid_structure,
    lattice, plus_formula, rho_formula, small_grid, times_formula, ChainLine, GridModel, RhoReport,
    MAX_LATTICE,
};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn pow2(k: u32) -> Q {
    Q::from_integer(BigInt::one() << k)
}

/// Parses `a`, `-a`, `a/b` or a decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((i, f)) = s.split_once('.') {
        let neg = i.starts_with('-');
        let digits = format!("{}{f}", i.trim_start_matches('-'));
        let n: BigInt = digits.parse().ok()?;
        let v = Q::new(n, BigInt::from(10u32).pow(f.len() as u32));
        return Some(if neg { -v } else { v });
    }
    let v: Q = s.parse().ok()?;
    Some(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("nets are indexed by different frames")]
    FrameMismatch,
    #[error("net {0} carries no modulus")]
    NoModulus(String),
    #[error("could not separate {real} from {q} within {bits} bits")]
    Undecided { real: String, q: String, bits: u32 },
    #[error("unknown net preset {0:?}")]
    UnknownPreset(String),
    #[error("frame has no states")]
    EmptyFrame,
    #[error(transparent)]
    Check(#[from] crate::checker::CheckError),
    #[error(transparent)]
    Dev(#[from] crate::devmodel::DevError),
}

/// Precision cap when separating a real from a rational.
pub const MAX_BITS: u32 = 640;

type ApproxFn = Arc<dyn Fn(u32) -> Interval + Send + Sync>;

/// A computable real: `approx(k)` contains it and has width at most `2^-k`.
/// Reals with the same key denote the same number.
#[derive(Clone)]
pub struct Real {
    key: String,
    exact: Option<Q>,
    approx: ApproxFn,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.key)
    }
}

fn machin_terms(s: usize) -> (Q, Q) {
    let (mut a5, mut a239) = (Q::zero(), Q::zero());
    let (five, n239) = (BigInt::from(5), BigInt::from(239));
    for k in 0..=s {
        let e = 2 * k as u32 + 1;
        let t5 = Q::new(BigInt::one(), BigInt::from(e) * five.pow(e));
        let t239 = Q::new(BigInt::one(), BigInt::from(e) * n239.pow(e));
        if k % 2 == 0 {
            a5 += t5;
            a239 += t239;
        } else {
            a5 -= t5;
            a239 -= t239;
        }
    }
    (a5, a239)
}

fn machin_value(s: usize) -> Q {
    let (a5, a239) = machin_terms(s);
    qi(16) * a5 - qi(4) * a239
}

/// First omitted terms of both arctangent series after term `s`.
fn machin_bound(s: usize) -> Q {
    let e = 2 * s as u32 + 3;
    Q::new(BigInt::from(16), BigInt::from(e) * BigInt::from(5).pow(e))
        + Q::new(BigInt::from(4), BigInt::from(e) * BigInt::from(239).pow(e))
}

impl Real {
    pub fn rational(v: Q) -> Self {
        let p = v.clone();
        Real {
            key: v.to_string(),
            exact: Some(v),
            approx: Arc::new(move |_| Interval::point(p.clone())),
        }
    }

    /// π from Machin's formula with alternating-series bounds.
    pub fn pi() -> Self {
        Real {
            key: "pi".into(),
            exact: None,
            approx: Arc::new(|k| {
                let target = Q::new(BigInt::one(), BigInt::one() << (k + 1));
                let mut s = 0;
                while machin_bound(s) > target {
                    s += 1;
                }
                let (v, b) = (machin_value(s), machin_bound(s));
                Interval::new(&v - &b, v + b)
            }),
        }
    }

    /// √2 by integer square roots.
    pub fn sqrt2() -> Self {
        Real {
            key: "sqrt2".into(),
            exact: None,
            approx: Arc::new(|k| {
                let scale = BigInt::one() << k;
                let m = (BigInt::from(2) * &scale * &scale).sqrt();
                let den = Q::from_integer(scale);
                Interval::new(
                    Q::from_integer(m.clone()) / &den,
                    Q::from_integer(m + 1) / den,
                )
            }),
        }
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn exact(&self) -> Option<&Q> {
        self.exact.as_ref()
    }

    pub fn approx(&self, k: u32) -> Interval {
        (self.approx)(k)
    }

    fn combine(&self, other: &Real, op: char) -> Real {
        let (mut a, mut b) = (self.key.clone(), other.key.clone());
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let exact = match (&self.exact, &other.exact) {
            (Some(x), Some(y)) => Some(if op == '+' { x + y } else { x * y }),
            _ => None,
        };
        if let Some(v) = exact {
            return Real::rational(v);
        }
        let (x, y) = (self.clone(), other.clone());
        let approx: ApproxFn = if op == '+' {
            Arc::new(move |k| x.approx(k + 1).add(&y.approx(k + 1)))
        } else {
            let mag = |r: &Real| r.approx(0).abs_hi() + Q::one();
            let m = mag(&x).max(mag(&y));
            let extra = m.ceil().to_integer().bits() as u32 + 2;
            Arc::new(move |k| x.approx(k + extra).mul(&y.approx(k + extra)))
        };
        Real {
            key: format!("({a}{op}{b})"),
            exact: None,
            approx,
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        self.combine(other, '+')
    }

    pub fn mul(&self, other: &Real) -> Real {
        self.combine(other, '*')
    }

    /// Exact comparison with a rational, refining until separated.
    pub fn cmp_q(&self, v: &Q) -> Result<Ordering, NetError> {
        if let Some(e) = &self.exact {
            return Ok(e.cmp(v));
        }
        let mut k = 8;
        while k <= MAX_BITS {
            let i = self.approx(k);
            if i.hi < *v {
                return Ok(Ordering::Less);
            }
            if i.lo > *v {
                return Ok(Ordering::Greater);
            }
            k *= 2;
        }
        Err(NetError::Undecided {
            real: self.key.clone(),
            q: v.to_string(),
            bits: MAX_BITS,
        })
    }
}

/// Index set of a net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexFrame {
    Omega,
    Finite(Arc<Frame>),
}

type ValueFn = Arc<dyn Fn(usize) -> Q + Send + Sync>;
type ModulusFn = Arc<dyn Fn(&Q) -> usize + Send + Sync>;
type BoundFn = Arc<dyn Fn(usize) -> Q + Send + Sync>;

/// `|value(p) - real| <= bound(p)`, with `bound` nonincreasing along the
/// frame and tending to zero.
#[derive(Clone)]
pub struct Target {
    pub real: Real,
    pub bound: BoundFn,
}

/// A rational-valued net.
#[derive(Clone)]
pub struct Net {
    pub name: String,
    frame: IndexFrame,
    value: ValueFn,
    /// `modulus(eps) = N` promises `|value(p') - value(p'')| < eps` for all
    /// `p', p'' >= N`.
    modulus: Option<ModulusFn>,
    target: Option<Target>,
    /// Declared eventual period `(mu, pi)` of an ω-net.
    period: Option<(usize, usize)>,
}

impl fmt::Debug for Net {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Net({})", self.name)
    }
}

fn memo(f: impl Fn(usize, Option<&Q>) -> Q + Send + Sync + 'static) -> ValueFn {
    let cache: Mutex<Vec<Q>> = Mutex::new(Vec::new());
    Arc::new(move |s| {
        let mut c = cache.lock().expect("memo lock");
        while c.len() <= s {
            let i = c.len();
            let v = f(i, c.last());
            c.push(v);
        }
        c[s].clone()
    })
}

/// Least `N` with `2 * bound(N) < eps`, for a nonincreasing `bound`.
fn modulus_from_bound(bound: BoundFn) -> ModulusFn {
    Arc::new(move |eps: &Q| {
        let ok = |n: usize| Q::from_integer(BigInt::from(2)) * bound(n) < *eps;
        if ok(0) {
            return 0;
        }
        let mut hi = 1usize;
        while !ok(hi) {
            hi = hi.checked_mul(2).expect("bound tends to zero");
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    })
}

impl Net {
    /// An ω-net with no certificates.
    pub fn omega(name: &str, value: impl Fn(usize) -> Q + Send + Sync + 'static) -> Self {
        Net {
            name: name.into(),
            frame: IndexFrame::Omega,
            value: Arc::new(value),
            modulus: None,
            target: None,
            period: None,
        }
    }

    /// A net on a finite directed frame, given by its values per state.
    pub fn on_frame(name: &str, frame: Arc<Frame>, values: Vec<Q>) -> Self {
        assert_eq!(frame.len(), values.len(), "one value per state");
        let values = Arc::new(values);
        Net {
            name: name.into(),
            frame: IndexFrame::Finite(frame),
            value: Arc::new(move |s| values[s].clone()),
            modulus: None,
            target: None,
            period: None,
        }
    }

    /// Declares that the values from `mu` on repeat with period `pi`.
    pub fn with_period(mut self, mu: usize, pi: usize) -> Self {
        assert!(
            pi > 0 && self.frame == IndexFrame::Omega,
            "periods are declared on ω-nets"
        );
        self.period = Some((mu, pi));
        self
    }

    pub fn with_modulus(mut self, m: impl Fn(&Q) -> usize + Send + Sync + 'static) -> Self {
        self.modulus = Some(Arc::new(m));
        self
    }

    /// Attaches a target; a modulus is derived from the bound when none is
    /// present.
    pub fn with_target(
        mut self,
        real: Real,
        bound: impl Fn(usize) -> Q + Send + Sync + 'static,
    ) -> Self {
        let bound: BoundFn = Arc::new(bound);
        if self.modulus.is_none() && self.frame == IndexFrame::Omega {
            self.modulus = Some(modulus_from_bound(bound.clone()));
        }
        self.target = Some(Target { real, bound });
        self
    }

    pub fn frame(&self) -> &IndexFrame {
        &self.frame
    }

    pub fn value(&self, s: usize) -> Q {
        (self.value)(s)
    }

    pub fn modulus(&self, eps: &Q) -> Option<usize> {
        self.modulus.as_ref().map(|m| m(eps))
    }

    pub fn target(&self) -> Option<&Target> {
        self.target.as_ref()
    }

    pub fn bound(&self, s: usize) -> Option<Q> {
        self.target.as_ref().map(|t| (t.bound)(s))
    }

    pub fn period(&self) -> Option<(usize, usize)> {
        self.period
    }

    /// `(value, bound)` at states `0..n`.
    pub fn table(&self, n: usize) -> Vec<(Q, Option<Q>)> {
        (0..n).map(|s| (self.value(s), self.bound(s))).collect()
    }
}

/// Partial sums of `4/1 - 4/3 + 4/5 - ...` with error bound `4/(2s+3)`.
pub fn leibniz_net() -> Net {
    let value = memo(|s, prev| {
        let term = q(4, 2 * s as i64 + 1);
        let prev = prev.cloned().unwrap_or_else(Q::zero);
        if s % 2 == 0 {
            prev + term
        } else {
            prev - term
        }
    });
    let bound = |s: usize| q(4, 2 * s as i64 + 3);
    Net {
        name: "leibniz".into(),
        frame: IndexFrame::Omega,
        value,
        modulus: None,
        target: None,
        period: None,
    }
    .with_target(Real::pi(), bound)
    // partial sums from N on stay strictly within the first omitted term
    .with_modulus(|eps: &Q| {
        let n = (qi(4) / eps - qi(3)) / qi(2);
        n.ceil().to_integer().try_into().unwrap_or(0)
    })
}

/// Partial sums of `16 atan(1/5) - 4 atan(1/239)`.
pub fn machin_net() -> Net {
    let value = memo(|s, _| machin_value(s));
    Net {
        name: "machin".into(),
        frame: IndexFrame::Omega,
        value,
        modulus: None,
        target: None,
        period: None,
    }
    .with_target(Real::pi(), machin_bound)
}

pub fn const_net(v: Q) -> Net {
    let w = v.clone();
    Net::omega(&format!("const:{v}"), move |_| w.clone())
        .with_period(0, 1)
        .with_target(Real::rational(v), |_| Q::zero())
        .with_modulus(|_| 0)
}

/// Increasing finite grids with a mesh bound near the targets of interest.
/// `point(s, j)` is increasing in `j < len(s)`.
#[derive(Clone)]
pub struct GridChain {
    pub name: String,
    pub len: Arc<dyn Fn(usize) -> usize + Send + Sync>,
    pub point: Arc<dyn Fn(usize, usize) -> Q + Send + Sync>,
    pub mesh: BoundFn,
}

impl GridChain {
    /// `{lo + j / 2^s}` over `[lo, hi]`.
    pub fn dyadic(lo: i64, hi: i64) -> Self {
        GridChain {
            name: format!("dyadic[{lo},{hi}]"),
            len: Arc::new(move |s| (((hi - lo) as usize) << s) + 1),
            point: Arc::new(move |s, j| qi(lo) + Q::new(BigInt::from(j), BigInt::one() << s)),
            mesh: Arc::new(|s| Q::one() / pow2(s as u32)),
        }
    }

    pub fn grid(&self, s: usize) -> Vec<Q> {
        (0..(self.len)(s)).map(|j| (self.point)(s, j)).collect()
    }
}

/// The least element of `grid` among those closest to `r`.
pub fn best_approximant(r: &Real, grid: &[Q]) -> Result<Q, NetError> {
    let mut g: Vec<&Q> = grid.iter().collect();
    g.sort();
    g.dedup();
    best_in_sorted(r, g.len(), |j| g[j].clone())
}

/// [`best_approximant`] over `point(0) < ... < point(len - 1)`.
pub fn best_in_sorted(r: &Real, len: usize, point: impl Fn(usize) -> Q) -> Result<Q, NetError> {
    if len == 0 {
        return Err(NetError::EmptyFrame);
    }
    // index of the first grid point above r
    let (mut lo, mut hi) = (0usize, len);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if r.cmp_q(&point(mid))? == Ordering::Less {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if lo == 0 {
        return Ok(point(0));
    }
    let below = point(lo - 1);
    if lo == len || r.cmp_q(&below)? == Ordering::Equal {
        return Ok(below);
    }
    let above = point(lo);
    let midpoint = (&below + &above) / qi(2);
    Ok(match r.cmp_q(&midpoint)? {
        Ordering::Greater => above,
        // ties go to the least
        _ => below,
    })
}

/// `D_r`: at state `s` the least best approximant of `r` in the `s`-th
/// grid, with bound `mesh(s)`.
///
/// # Panics
/// When a value cannot be decided within [`MAX_BITS`] bits.
pub fn d_r_net(r: Real, chain: GridChain) -> Net {
    let (rr, c) = (r.clone(), chain.clone());
    let value = memo(move |s, _| {
        let point = &c.point;
        best_in_sorted(&rr, (c.len)(s), |j| point(s, j)).expect("grid point separable from target")
    });
    let mesh = chain.mesh.clone();
    Net {
        name: format!("D[{}; {}]", r.key(), chain.name),
        frame: IndexFrame::Omega,
        value,
        modulus: None,
        target: None,
        period: None,
    }
    .with_target(r, move |s| mesh(s))
}

/// Presets: `leibniz`, `machin`, `const:<q>`, `dyadic-sqrt2`.
pub fn preset(name: &str) -> Result<Net, NetError> {
    match name {
        "leibniz" => Ok(leibniz_net()),
        "machin" => Ok(machin_net()),
        "dyadic-sqrt2" => Ok(d_r_net(Real::sqrt2(), GridChain::dyadic(0, 2))),
        _ => match name.strip_prefix("const:").and_then(parse_rational) {
            Some(v) => Ok(const_net(v)),
            None => Err(NetError::UnknownPreset(name.into())),
        },
    }
}

fn common_upper(f: &Frame, a: usize, b: usize) -> usize {
    (0..f.len())
        .find(|&t| f.le(a, t) && f.le(b, t))
        .expect("frames of nets are directed")
}

fn lcm(a: usize, b: usize) -> usize {
    a / a.gcd(&b) * b
}

fn combine(a: &Net, b: &Net, op: char) -> Result<Net, NetError> {
    if a.frame != b.frame {
        return Err(NetError::FrameMismatch);
    }
    let (va, vb) = (a.value.clone(), b.value.clone());
    let value: ValueFn = if op == '+' {
        Arc::new(move |s| va(s) + vb(s))
    } else {
        Arc::new(move |s| va(s) * vb(s))
    };
    let period = match (a.period, b.period) {
        (Some((m1, p1)), Some((m2, p2))) => Some((m1.max(m2), lcm(p1, p2))),
        _ => None,
    };
    let frame = a.frame.clone();
    let join: Arc<dyn Fn(usize, usize) -> usize + Send + Sync> = match &frame {
        IndexFrame::Omega => Arc::new(|x: usize, y: usize| x.max(y)),
        IndexFrame::Finite(f) => {
            let f = f.clone();
            Arc::new(move |x, y| common_upper(&f, x, y))
        }
    };
    let modulus: Option<ModulusFn> = match (a.modulus.clone(), b.modulus.clone()) {
        (Some(m1), Some(m2)) if op == '+' => Some(Arc::new(move |eps: &Q| {
            let half = eps / qi(2);
            join(m1(&half), m2(&half))
        })),
        (Some(m1), Some(m2)) => {
            // beyond N(1) every value is within 1 of the value at N(1)
            let (va, vb) = (a.value.clone(), b.value.clone());
            Some(Arc::new(move |eps: &Q| {
                let (n1, n2) = (m1(&Q::one()), m2(&Q::one()));
                let b1 = va(n1).abs() + Q::one();
                let b2 = vb(n2).abs() + Q::one();
                let e1 = eps / (qi(2) * &b2);
                let e2 = eps / (qi(2) * &b1);
                join(join(n1, n2), join(m1(&e1), m2(&e2)))
            }))
        }
        _ => None,
    };
    let target = match (&a.target, &b.target) {
        (Some(t1), Some(t2)) => {
            let (b1, b2) = (t1.bound.clone(), t2.bound.clone());
            let bound: BoundFn = if op == '+' {
                Arc::new(move |s| b1(s) + b2(s))
            } else {
                // |xy - rs| <= |x||y - s| + |s||x - r| with |x| <= |r| + b1(0)
                let r_hi = t1.real.approx(0).abs_hi() + b1(0);
                let s_hi = t2.real.approx(0).abs_hi() + b2(0);
                Arc::new(move |p| &r_hi * b2(p) + &s_hi * b1(p))
            };
            let real = if op == '+' {
                t1.real.add(&t2.real)
            } else {
                t1.real.mul(&t2.real)
            };
            Some(Target { real, bound })
        }
        _ => None,
    };
    Ok(Net {
        name: format!("({}{op}{})", a.name, b.name),
        frame,
        value,
        modulus,
        target,
        period,
    })
}

pub fn add_nets(a: &Net, b: &Net) -> Result<Net, NetError> {
    combine(a, b, '+')
}

pub fn mul_nets(a: &Net, b: &Net) -> Result<Net, NetError> {
    combine(a, b, '*')
}

pub fn neg_net(a: &Net) -> Net {
    let mut n = a.clone();
    let v = a.value.clone();
    n.value = Arc::new(move |s| -v(s));
    n.name = format!("-{}", a.name);
    if let Some(t) = &a.target {
        n.target = Some(Target {
            real: t.real.mul(&Real::rational(qi(-1))),
            bound: t.bound.clone(),
        });
    }
    n
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Spot-checks or an exact decision support the property.
    Certified {
        detail: String,
    },
    /// Separation `eps` recurs beyond every index; `at` names a witnessing pair.
    Refuted {
        eps: String,
        at: (usize, usize),
    },
    Unknown {
        horizon: usize,
    },
    /// A supplied modulus or bound failed its own contract.
    BrokenCertificate {
        detail: String,
    },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

/// Tolerances at which a modulus is spot-checked.
pub fn spot_eps() -> Vec<Q> {
    vec![qi(1), q(1, 2), q(1, 10), q(1, 100)]
}

/// How far past `modulus(eps)` an ω-spot-check samples.
pub const SPOT_SPAN: usize = 24;

fn up_set(f: &Frame, p: usize) -> Vec<usize> {
    f.above(p).to_vec()
}

/// `min_p max_{p', p'' >= p} |g(p', p'')|` over a finite frame, with the
/// minimizing `p` and a maximizing pair.
fn finite_separation(f: &Frame, g: impl Fn(usize, usize) -> Q) -> (Q, usize, (usize, usize)) {
    let mut best: Option<(Q, usize, (usize, usize))> = None;
    for p in 0..f.len() {
        let up = up_set(f, p);
        let mut worst = (Q::zero(), (p, p));
        for &a in &up {
            for &b in &up {
                let d = g(a, b);
                if d > worst.0 {
                    worst = (d, (a, b));
                }
            }
        }
        if best.as_ref().is_none_or(|b| worst.0 < b.0) {
            best = Some((worst.0, p, worst.1));
        }
    }
    best.expect("frame has states")
}

pub fn cauchy_convergent(net: &Net, horizon: usize) -> Verdict {
    if let IndexFrame::Finite(f) = &net.frame {
        let (sep, p, at) = finite_separation(f, |a, b| (net.value(a) - net.value(b)).abs());
        return if sep.is_zero() {
            Verdict::Certified {
                detail: format!("constant above state {}", f.name(p)),
            }
        } else {
            Verdict::Refuted {
                eps: (sep / qi(2)).to_string(),
                at,
            }
        };
    }
    if let Some(m) = &net.modulus {
        for eps in spot_eps() {
            let n = m(&eps);
            for a in n..n + SPOT_SPAN {
                for b in a + 1..n + SPOT_SPAN {
                    if (net.value(a) - net.value(b)).abs() >= eps {
                        return Verdict::BrokenCertificate {
                            detail: format!("modulus({eps}) = {n} but |v({a}) - v({b})| >= {eps}"),
                        };
                    }
                }
            }
        }
        return Verdict::Certified {
            detail: format!("modulus spot-checked at {} tolerances", spot_eps().len()),
        };
    }
    if let Some((mu, pi)) = net.period {
        let cycle: Vec<Q> = (mu..mu + pi).map(|s| net.value(s)).collect();
        let mut worst = (Q::zero(), (mu, mu));
        for (i, a) in cycle.iter().enumerate() {
            for (j, b) in cycle.iter().enumerate() {
                let d = (a - b).abs();
                if d > worst.0 {
                    worst = (d, (mu + i, mu + j));
                }
            }
        }
        return if worst.0.is_zero() {
            Verdict::Certified {
                detail: format!("constant from state {mu}"),
            }
        } else {
            Verdict::Refuted {
                eps: (worst.0 / qi(2)).to_string(),
                at: worst.1,
            }
        };
    }
    Verdict::Unknown { horizon }
}

/// `|value(s) - target|` is within the bound, certified by refining the
/// target until the worst case distance fits.
pub fn check_target(net: &Net, s: usize) -> Result<bool, NetError> {
    let Some(t) = &net.target else {
        return Err(NetError::NoModulus(net.name.clone()));
    };
    let v = net.value(s);
    let b = (t.bound)(s);
    let mut k = 8;
    while k <= MAX_BITS {
        let i = t.real.approx(k);
        if i.dist_hi(&v) <= b {
            return Ok(true);
        }
        if i.dist_lo(&v) > b {
            return Ok(false);
        }
        k *= 2;
    }
    Err(NetError::Undecided {
        real: t.real.key.clone(),
        q: v.to_string(),
        bits: MAX_BITS,
    })
}

/// States at which [`cauchy_equiv`] spot-checks targets.
pub const TARGET_SAMPLES: usize = 12;

pub fn cauchy_equiv(a: &Net, b: &Net, horizon: usize) -> Result<Verdict, NetError> {
    if a.frame != b.frame {
        return Err(NetError::FrameMismatch);
    }
    if let IndexFrame::Finite(f) = &a.frame {
        let d = |s: usize| (a.value(s) - b.value(s)).abs();
        let (sep, p, at) = finite_separation(f, |x, _| d(x));
        return Ok(if sep.is_zero() {
            Verdict::Certified {
                detail: format!("equal above state {}", f.name(p)),
            }
        } else {
            Verdict::Refuted {
                eps: (sep / qi(2)).to_string(),
                at,
            }
        });
    }
    if let (Some(ta), Some(tb)) = (&a.target, &b.target) {
        for s in 0..TARGET_SAMPLES {
            for n in [a, b] {
                if !check_target(n, s)? {
                    return Ok(Verdict::BrokenCertificate {
                        detail: format!("{} misses its bound at {s}", n.name),
                    });
                }
            }
        }
        let same = match (ta.real.exact(), tb.real.exact()) {
            (Some(x), Some(y)) => x == y,
            _ => ta.real.key == tb.real.key,
        };
        if same {
            return Ok(Verdict::Certified {
                detail: format!("common target {}", ta.real.key),
            });
        }
        // disjoint target intervals with a gap g; past the state where both
        // bounds sum below g/2 the nets stay more than g/2 apart
        let mut k = 4;
        while k <= MAX_BITS {
            let (ia, ib) = (ta.real.approx(k), tb.real.approx(k));
            let gap = if ia.hi < ib.lo {
                Some(&ib.lo - &ia.hi)
            } else if ib.hi < ia.lo {
                Some(&ia.lo - &ib.hi)
            } else {
                None
            };
            if let Some(g) = gap {
                let half = &g / qi(2);
                for s in 0..=horizon {
                    if (ta.bound)(s) + (tb.bound)(s) < half {
                        return Ok(Verdict::Refuted {
                            eps: half.to_string(),
                            at: (s, s),
                        });
                    }
                }
                return Ok(Verdict::Unknown { horizon });
            }
            k *= 2;
        }
    }
    if let (Some((m1, p1)), Some((m2, p2))) = (a.period, b.period) {
        let (mu, pi) = (m1.max(m2), lcm(p1, p2));
        let mut worst = (Q::zero(), mu);
        for s in mu..mu + pi {
            let d = (a.value(s) - b.value(s)).abs();
            if d > worst.0 {
                worst = (d, s);
            }
        }
        return Ok(if worst.0.is_zero() {
            Verdict::Certified {
                detail: format!("equal from state {mu}"),
            }
        } else {
            Verdict::Refuted {
                eps: (worst.0 / qi(2)).to_string(),
                at: (worst.1, worst.1),
            }
        });
    }
    Ok(Verdict::Unknown { horizon })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leibniz_table() {
        let t = leibniz_net().table(4);
        let want = [
            (q(4, 1), q(4, 3)),
            (q(8, 3), q(4, 5)),
            (q(52, 15), q(4, 7)),
            (q(304, 105), q(4, 9)),
        ];
        for ((v, b), (wv, wb)) in t.iter().zip(want) {
            assert_eq!(*v, wv);
            assert_eq!(b.as_ref(), Some(&wb));
        }
        // 4 - 4/3 + 4/5 - 4/7 by hand
        assert_eq!(t[3].0, qi(4) - q(4, 3) + q(4, 5) - q(4, 7));
    }

    #[test]
    fn pi_and_sqrt2_intervals() {
        let pi = Real::pi().approx(64);
        assert!(pi.lo < q(314159266, 100000000) && pi.hi > q(314159265, 100000000));
        assert!(pi.width() <= Q::one() / pow2(64));
        let r = Real::sqrt2().approx(40);
        assert!(&r.lo * &r.lo <= qi(2) && &r.hi * &r.hi >= qi(2));
        assert_eq!(Real::sqrt2().cmp_q(&q(7, 5)).unwrap(), Ordering::Greater);
        assert_eq!(Real::pi().cmp_q(&q(22, 7)).unwrap(), Ordering::Less);
    }

    #[test]
    fn leibniz_modulus_matches_bound() {
        let n = leibniz_net();
        // 4/(2N+3) <= 1/10 first at N = 19
        assert_eq!(n.modulus(&q(1, 10)), Some(19));
        assert_eq!(n.modulus(&qi(4)), Some(0));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn convergence_verdicts() {
        assert!(cauchy_convergent(&leibniz_net(), 100).is_certified());
        let osc = Net::omega("osc", |s| if s % 2 == 0 { qi(1) } else { qi(-1) }).with_period(0, 2);
        assert_eq!(
            cauchy_convergent(&osc, 100),
            Verdict::Refuted {
                eps: "1".into(),
                at: (0, 1)
            }
        );
        let wild = Net::omega("wild", |s| qi(s as i64 % 7));
        assert_eq!(
            cauchy_convergent(&wild, 100),
            Verdict::Unknown { horizon: 100 }
        );
        let lying = Net::omega("lying", |s| qi(s as i64 % 2)).with_modulus(|_| 0);
        assert!(matches!(
            cauchy_convergent(&lying, 10),
            Verdict::BrokenCertificate { .. }
        ));
    }

    #[test]
    fn equivalence_verdicts() {
        let (l, m) = (leibniz_net(), machin_net());
        assert!(cauchy_equiv(&l, &l, 100).unwrap().is_certified());
        assert!(cauchy_equiv(&l, &m, 100).unwrap().is_certified());
        let v = cauchy_equiv(&l, &const_net(qi(3)), 1000).unwrap();
        let Verdict::Refuted { eps, at } = v else {
            panic!("{v:?}")
        };
        // past `at` leibniz stays within bound of pi, which is eps-far from 3
        let eps = parse_rational(&eps).unwrap();
        for s in at.0..at.0 + 200 {
            assert!((l.value(s) - qi(3)).abs() > eps);
        }
    }

    #[test]
    fn arithmetic_on_constants() {
        let s = add_nets(&const_net(qi(2)), &const_net(qi(3))).unwrap();
        assert_eq!(s.value(9), qi(5));
        assert_eq!(s.target().unwrap().real.exact(), Some(&qi(5)));
        let l = leibniz_net();
        let z = add_nets(&l, &const_net(Q::zero())).unwrap();
        assert!((0..30).all(|i| z.value(i) == l.value(i)));
    }

    #[test]
    fn best_approximants() {
        let g = [Q::zero(), q(1, 2)];
        assert_eq!(
            best_approximant(&Real::rational(q(1, 4)), &g).unwrap(),
            Q::zero()
        );
        assert_eq!(
            best_approximant(&Real::rational(q(1, 3)), &g).unwrap(),
            q(1, 2)
        );
        assert_eq!(
            best_approximant(&Real::rational(qi(5)), &g).unwrap(),
            q(1, 2)
        );
        assert_eq!(
            best_approximant(&Real::rational(qi(-5)), &g).unwrap(),
            Q::zero()
        );
        assert_eq!(
            best_approximant(&Real::sqrt2(), &[qi(1), q(3, 2), qi(2)]).unwrap(),
            q(3, 2)
        );
    }

    #[test]
    fn d_r_of_grid_member_is_eventually_constant() {
        let n = d_r_net(Real::rational(q(1, 2)), GridChain::dyadic(0, 2));
        assert!((1..20).all(|s| n.value(s) == q(1, 2)));
        assert_eq!(n.value(0), Q::zero());
    }

    #[test]
    fn presets() {
        assert!(preset("const:1/3").is_ok());
        assert!(preset("const:abc").is_err());
        assert!(preset("dyadic-sqrt2").is_ok());
        assert!(preset("nope").is_err());
    }
}
