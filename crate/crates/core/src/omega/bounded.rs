//! Three-valued checking over structure streams on the ω-frame.
//!
//! Top-level truth is checked at states `0..=H`; a modal operator at `n`
//! searches `n..=n+H`. A `dia` is true once a witness is found, and false
//! only when its body is false at `n` and that falsity provably persists. A
//! `box` is false on a counterexample, true by persistence when its body is
//! true and provably persists, and otherwise true on the horizon when every
//! searched state satisfies the body. Anything else is `Unknown(H)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::Ratio;
use serde::Serialize;

use super::{Lasso, OmegaError};
use crate::eval::Assignment;
use crate::logic::{manifest_rel, Formula, RelKind, Signature, STAT};
use crate::structures::{Elem, FiniteStructure};

/// A deterministic sequence of structures, one per natural number.
pub trait Stream: Sync {
    fn name(&self) -> String;
    fn signature(&self) -> Arc<Signature>;
    fn state(&self, n: usize) -> Arc<FiniteStructure>;
}

#[derive(Default)]
struct Cache(Mutex<HashMap<usize, Arc<FiniteStructure>>>);

impl Cache {
    fn get(&self, n: usize, build: impl FnOnce() -> FiniteStructure) -> Arc<FiniteStructure> {
        if let Some(u) = self.0.lock().expect("cache lock").get(&n) {
            return u.clone();
        }
        let u = Arc::new(build());
        self.0
            .lock()
            .expect("cache lock")
            .entry(n)
            .or_insert(u)
            .clone()
    }
}

/// `struct(n)`: the natural numbers `0..=n` with `Z`, `S`, `add`, `mul`, `le`, `lt`.
pub struct ArithBasic {
    sig: Arc<Signature>,
    cache: Cache,
}

impl Default for ArithBasic {
    fn default() -> Self {
        let sig = Signature::new()
            .with_relation("Z", &[STAT], RelKind::Static)
            .with_relation("S", &[STAT, STAT], RelKind::Static)
            .with_relation("add", &[STAT, STAT, STAT], RelKind::Static)
            .with_relation("mul", &[STAT, STAT, STAT], RelKind::Static)
            .with_relation("le", &[STAT, STAT], RelKind::Static)
            .with_relation("lt", &[STAT, STAT], RelKind::Static);
        ArithBasic {
            sig: Arc::new(sig),
            cache: Cache::default(),
        }
    }
}

fn num(i: usize) -> Elem {
    Elem::from(i.to_string())
}

impl Stream for ArithBasic {
    fn name(&self) -> String {
        "arith-basic".into()
    }

    fn signature(&self) -> Arc<Signature> {
        self.sig.clone()
    }

    fn state(&self, n: usize) -> Arc<FiniteStructure> {
        self.cache.get(n, || {
            let mut u = FiniteStructure::with_signature(self.sig.clone());
            for i in 0..=n {
                u.add_element(STAT, num(i)).expect("Stat");
            }
            u.add_tuple("Z", vec![num(0)]).expect("declared");
            for x in 0..=n {
                if x < n {
                    u.add_tuple("S", vec![num(x), num(x + 1)])
                        .expect("declared");
                }
                for y in 0..=n {
                    if x <= y {
                        u.add_tuple("le", vec![num(x), num(y)]).expect("declared");
                    }
                    if x < y {
                        u.add_tuple("lt", vec![num(x), num(y)]).expect("declared");
                    }
                    if x + y <= n {
                        u.add_tuple("add", vec![num(x), num(y), num(x + y)])
                            .expect("declared");
                    }
                    if x * y <= n {
                        u.add_tuple("mul", vec![num(x), num(y), num(x * y)])
                            .expect("declared");
                    }
                }
            }
            u
        })
    }
}

/// Rationals with denominator at most `k` in `[-n, n]`, with `zero`, `le`,
/// `lt` and `add`.
pub struct RationalsGrid {
    k: i64,
    sig: Arc<Signature>,
    cache: Cache,
}

impl RationalsGrid {
    pub fn new(k: usize) -> Self {
        let sig = Signature::new()
            .with_relation("zero", &[STAT], RelKind::Static)
            .with_relation("le", &[STAT, STAT], RelKind::Static)
            .with_relation("lt", &[STAT, STAT], RelKind::Static)
            .with_relation("add", &[STAT, STAT, STAT], RelKind::Static);
        RationalsGrid {
            k: k.max(1) as i64,
            sig: Arc::new(sig),
            cache: Cache::default(),
        }
    }
}

fn rat_elem(r: &Ratio<i64>) -> Elem {
    Elem::from(r.to_string())
}

impl Stream for RationalsGrid {
    fn name(&self) -> String {
        format!("rationals-grid:{}", self.k)
    }

    fn signature(&self) -> Arc<Signature> {
        self.sig.clone()
    }

    fn state(&self, n: usize) -> Arc<FiniteStructure> {
        self.cache.get(n, || {
            let n = n as i64;
            let mut vals: Vec<Ratio<i64>> = Vec::new();
            for q in 1..=self.k {
                for p in -n * q..=n * q {
                    let r = Ratio::new(p, q);
                    if *r.denom() == q {
                        vals.push(r);
                    }
                }
            }
            vals.sort();
            let index: HashMap<Ratio<i64>, Elem> = vals.iter().map(|r| (*r, rat_elem(r))).collect();
            let mut u = FiniteStructure::with_signature(self.sig.clone());
            for e in index.values() {
                u.add_element(STAT, e.clone()).expect("Stat");
            }
            u.add_tuple("zero", vec![index[&Ratio::from_integer(0)].clone()])
                .expect("declared");
            for a in &vals {
                for b in &vals {
                    if a <= b {
                        u.add_tuple("le", vec![index[a].clone(), index[b].clone()])
                            .expect("declared");
                    }
                    if a < b {
                        u.add_tuple("lt", vec![index[a].clone(), index[b].clone()])
                            .expect("declared");
                    }
                    if let Some(c) = index.get(&(a + b)) {
                        u.add_tuple("add", vec![index[a].clone(), index[b].clone(), c.clone()])
                            .expect("declared");
                    }
                }
            }
            u
        })
    }
}

/// A lasso read as a stream.
pub struct LassoStream(pub Lasso);

impl Stream for LassoStream {
    fn name(&self) -> String {
        format!("lasso({},{})", self.0.transient(), self.0.period())
    }

    fn signature(&self) -> Arc<Signature> {
        self.0.structures()[0].signature_arc().clone()
    }

    fn state(&self, n: usize) -> Arc<FiniteStructure> {
        self.0.state(n).clone()
    }
}

/// A stream preset by CLI name: `arith-basic` or `rationals-grid:<k>`.
pub fn preset(name: &str) -> Result<Box<dyn Stream>, OmegaError> {
    if name == "arith-basic" {
        return Ok(Box::new(ArithBasic::default()));
    }
    if let Some(k) = name.strip_prefix("rationals-grid:") {
        if let Ok(k) = k.parse::<usize>() {
            if k >= 1 {
                return Ok(Box::new(RationalsGrid::new(k)));
            }
        }
    }
    Err(OmegaError::UnknownPreset(name.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    True,
    False,
    Unknown(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CertKind {
    /// `dia` witnessed at a state.
    DiaWitness { at: usize },
    /// `dia` refuted: the body is false here and stays false.
    DiaPersistentFalse,
    /// `box` refuted at a state.
    BoxCounterexample { at: usize },
    /// `box` established: the body holds from here on by persistence.
    BoxPersistent { from: usize },
    /// `box` checked at every state up to the horizon.
    BoxHorizon { upto: usize },
    /// Truth at every parameter state, established at `from` by persistence.
    GlobalPersistent { from: usize },
    /// Truth checked at every parameter state up to the horizon.
    GlobalHorizon { upto: usize },
    /// `exists` witnessed by an element.
    ExistsWitness { elem: String },
    /// `forall` refuted by an element.
    ForallCounterexample { elem: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertEntry {
    pub state: usize,
    pub formula: String,
    pub assignment: Vec<(String, String)>,
    pub kind: CertKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedVerdict {
    pub verdict: Verdict,
    pub horizon: usize,
    /// Decisions behind a definite verdict, in the order they were made.
    pub certificate: Vec<CertEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum V3 {
    T,
    F,
    U,
}

impl V3 {
    fn not(self) -> V3 {
        match self {
            V3::T => V3::F,
            V3::F => V3::T,
            V3::U => V3::U,
        }
    }

    fn and(self, o: V3) -> V3 {
        match (self, o) {
            (V3::F, _) | (_, V3::F) => V3::F,
            (V3::T, V3::T) => V3::T,
            _ => V3::U,
        }
    }

    fn or(self, o: V3) -> V3 {
        self.not().and(o.not()).not()
    }
}

/// Whether truth (`positive`) or falsity of `phi` at a state is inherited by
/// every later state, given that its free variables denote present elements.
fn persists(sig: &Signature, phi: &Formula, positive: bool) -> bool {
    match phi {
        Formula::Atom { rel, .. } => sig.is_static(rel),
        Formula::Manifest { .. } => false,
        Formula::Eq(..) => true,
        Formula::Not(a) => persists(sig, a, !positive),
        Formula::And(a, b) | Formula::Or(a, b) => {
            persists(sig, a, positive) && persists(sig, b, positive)
        }
        Formula::Implies(a, b) => persists(sig, a, !positive) && persists(sig, b, positive),
        Formula::Iff(a, b) => {
            persists(sig, a, true)
                && persists(sig, a, false)
                && persists(sig, b, true)
                && persists(sig, b, false)
        }
        Formula::Exists(_, a) => positive && persists(sig, a, true),
        Formula::Forall(_, a) => !positive && persists(sig, a, false),
        Formula::Box(_) => positive,
        Formula::Dia(_) => !positive,
    }
}

/// No dynamic relation or manifestation occurs in `phi`. Only then does a
/// finite window carry evidence for a universal claim over later states.
fn static_content(sig: &Signature, phi: &Formula) -> bool {
    match phi {
        Formula::Atom { rel, .. } => sig.is_static(rel),
        Formula::Manifest { .. } => false,
        Formula::Eq(..) => true,
        _ => phi.children().into_iter().all(|c| static_content(sig, c)),
    }
}

struct Checker<'a> {
    stream: &'a dyn Stream,
    sig: Arc<Signature>,
    h: usize,
    states: HashMap<usize, Arc<FiniteStructure>>,
    memo: HashMap<(usize, usize, Vec<Elem>), V3>,
    free: HashMap<usize, Vec<(String, String)>>,
    cert: Vec<CertEntry>,
}

type Env = Vec<(String, Elem)>;

fn lookup<'e>(env: &'e Env, name: &str) -> &'e Elem {
    env.iter()
        .rev()
        .find(|(n, _)| n == name)
        .map(|(_, e)| e)
        .expect("free variables bound")
}

impl BoundedVerdict {
    /// The verdict rests on a window check rather than on persistence or a
    /// counterexample.
    pub fn uses_horizon(&self) -> bool {
        self.certificate.iter().any(|e| {
            matches!(
                e.kind,
                CertKind::BoxHorizon { .. } | CertKind::GlobalHorizon { .. }
            )
        })
    }
}

impl Checker<'_> {
    fn state(&mut self, n: usize) -> Arc<FiniteStructure> {
        let stream = self.stream;
        self.states
            .entry(n)
            .or_insert_with(|| stream.state(n))
            .clone()
    }

    fn free_of(&mut self, phi: &Formula) -> Vec<(String, String)> {
        let key = phi as *const Formula as usize;
        self.free
            .entry(key)
            .or_insert_with(|| {
                phi.free_vars()
                    .into_iter()
                    .map(|v| (v.name, v.sort))
                    .collect()
            })
            .clone()
    }

    fn present(&mut self, n: usize, phi: &Formula, env: &Env) -> bool {
        let u = self.state(n);
        self.free_of(phi)
            .iter()
            .all(|(name, sort)| u.domain(sort).contains(lookup(env, name)))
    }

    fn record(&mut self, n: usize, phi: &Formula, env: &Env, kind: CertKind) {
        let assignment = self
            .free_of(phi)
            .into_iter()
            .map(|(name, _)| {
                let e = lookup(env, &name).to_string();
                (name, e)
            })
            .collect();
        self.cert.push(CertEntry {
            state: n,
            formula: phi.to_string(),
            assignment,
            kind,
        });
    }

    fn go(&mut self, n: usize, phi: &Formula, env: &mut Env) -> V3 {
        match phi {
            Formula::Atom { rel, args } => {
                let t: Vec<Elem> = args.iter().map(|v| lookup(env, &v.name).clone()).collect();
                if self.state(n).holds(rel, &t) {
                    V3::T
                } else {
                    V3::F
                }
            }
            Formula::Manifest { args, dynamic } => {
                let mut t: Vec<Elem> = args.iter().map(|v| lookup(env, &v.name).clone()).collect();
                t.push(lookup(env, &dynamic.name).clone());
                if self.state(n).holds(&manifest_rel(args.len()), &t) {
                    V3::T
                } else {
                    V3::F
                }
            }
            Formula::Eq(a, b) => {
                if lookup(env, &a.name) == lookup(env, &b.name) {
                    V3::T
                } else {
                    V3::F
                }
            }
            Formula::Not(a) => self.go(n, a, env).not(),
            Formula::And(a, b) => {
                let x = self.go(n, a, env);
                if x == V3::F {
                    return V3::F;
                }
                x.and(self.go(n, b, env))
            }
            Formula::Or(a, b) => {
                let x = self.go(n, a, env);
                if x == V3::T {
                    return V3::T;
                }
                x.or(self.go(n, b, env))
            }
            Formula::Implies(a, b) => {
                let x = self.go(n, a, env).not();
                if x == V3::T {
                    return V3::T;
                }
                x.or(self.go(n, b, env))
            }
            Formula::Iff(a, b) => {
                let (x, y) = (self.go(n, a, env), self.go(n, b, env));
                match (x, y) {
                    (V3::U, _) | (_, V3::U) => V3::U,
                    _ if x == y => V3::T,
                    _ => V3::F,
                }
            }
            Formula::Exists(v, a) | Formula::Forall(v, a) => {
                let exists = matches!(phi, Formula::Exists(..));
                let decisive = if exists { V3::T } else { V3::F };
                let dom: Vec<Elem> = self.state(n).domain(&v.sort).iter().cloned().collect();
                let mut acc = if exists { V3::F } else { V3::T };
                for e in dom {
                    env.push((v.name.clone(), e.clone()));
                    let r = self.go(n, a, env);
                    env.pop();
                    if r == decisive {
                        let kind = if exists {
                            CertKind::ExistsWitness {
                                elem: e.to_string(),
                            }
                        } else {
                            CertKind::ForallCounterexample {
                                elem: e.to_string(),
                            }
                        };
                        self.record(n, phi, env, kind);
                        return decisive;
                    }
                    if r == V3::U {
                        acc = V3::U;
                    }
                }
                acc
            }
            Formula::Dia(a) | Formula::Box(a) => {
                let key_vals: Vec<Elem> = self
                    .free_of(phi)
                    .iter()
                    .map(|(name, _)| lookup(env, name).clone())
                    .collect();
                let key = (phi as *const Formula as usize, n, key_vals);
                if let Some(&v) = self.memo.get(&key) {
                    return v;
                }
                let v = if matches!(phi, Formula::Dia(_)) {
                    self.dia(n, phi, a, env)
                } else {
                    self.boxed(n, phi, a, env)
                };
                self.memo.insert(key, v);
                v
            }
        }
    }

    fn dia(&mut self, n: usize, phi: &Formula, a: &Formula, env: &mut Env) -> V3 {
        let mut all_false = true;
        for t in n..=n + self.h {
            match self.go(t, a, env) {
                V3::T => {
                    self.record(n, phi, env, CertKind::DiaWitness { at: t });
                    return V3::T;
                }
                V3::F if all_false && persists(&self.sig, a, false) && self.present(t, a, env) => {
                    self.record(n, phi, env, CertKind::DiaPersistentFalse);
                    return V3::F;
                }
                V3::F => {}
                V3::U => all_false = false,
            }
        }
        V3::U
    }

    fn boxed(&mut self, n: usize, phi: &Formula, a: &Formula, env: &mut Env) -> V3 {
        let mut all_true = true;
        let mut unknown = false;
        for t in n..=n + self.h {
            match self.go(t, a, env) {
                V3::F => {
                    self.record(n, phi, env, CertKind::BoxCounterexample { at: t });
                    return V3::F;
                }
                V3::T if all_true && persists(&self.sig, a, true) && self.present(t, a, env) => {
                    self.record(n, phi, env, CertKind::BoxPersistent { from: t });
                    return V3::T;
                }
                V3::T => {}
                V3::U => {
                    all_true = false;
                    unknown = true;
                }
            }
        }
        if unknown || !static_content(&self.sig, a) {
            V3::U
        } else {
            self.record(n, phi, env, CertKind::BoxHorizon { upto: n + self.h });
            V3::T
        }
    }
}

/// Three-valued `M |= phi[asg]` over the stream's ω-model with horizon `h`.
pub fn bounded_satisfies(
    stream: &dyn Stream,
    h: usize,
    phi: &Formula,
    asg: &Assignment,
) -> BoundedVerdict {
    let h = h.max(1);
    let mut c = Checker {
        stream,
        sig: stream.signature(),
        h,
        states: HashMap::new(),
        memo: HashMap::new(),
        free: HashMap::new(),
        cert: Vec::new(),
    };
    let mut env: Env = asg.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    if phi.free_vars().iter().any(|v| !asg.contains_key(&v.name)) {
        return BoundedVerdict {
            verdict: Verdict::Unknown(h),
            horizon: h,
            certificate: Vec::new(),
        };
    }
    // global truth is over the states where the parameters exist
    let mut acc = V3::T;
    let mut first = None;
    for n in 0..=h {
        if !c.present(n, phi, &env) {
            continue;
        }
        first.get_or_insert(n);
        match c.go(n, phi, &mut env) {
            V3::F => {
                acc = V3::F;
                break;
            }
            V3::U => acc = V3::U,
            V3::T => {}
        }
    }
    if acc == V3::T {
        match first {
            None => acc = V3::U,
            Some(n) if persists(&c.sig, phi, true) => {
                c.record(n, phi, &env, CertKind::GlobalPersistent { from: n })
            }
            // otherwise truth at every state rests on the window 0..=h
            Some(_) if static_content(&c.sig, phi) => {
                c.record(0, phi, &env, CertKind::GlobalHorizon { upto: h })
            }
            Some(_) => acc = V3::U,
        }
    }
    let verdict = match acc {
        V3::T => Verdict::True,
        V3::F => Verdict::False,
        V3::U => Verdict::Unknown(h),
    };
    let certificate = if matches!(verdict, Verdict::Unknown(_)) {
        Vec::new()
    } else {
        c.cert
    };
    BoundedVerdict {
        verdict,
        horizon: h,
        certificate,
    }
}

/// Re-run at `2h`: a definite verdict at `h` must not change.
pub fn check_bounded_soundness(
    stream: &dyn Stream,
    h: usize,
    phi: &Formula,
    asg: &Assignment,
) -> (Verdict, Verdict, bool) {
    let a = bounded_satisfies(stream, h, phi, asg).verdict;
    let b = bounded_satisfies(stream, 2 * h, phi, asg).verdict;
    let ok = matches!(a, Verdict::Unknown(_)) || a == b;
    (a, b, ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::omega::lasso_holds;

    fn arith() -> ArithBasic {
        ArithBasic::default()
    }

    #[test]
    fn arith_stream_is_a_valid_chain() {
        let s = arith();
        let u3 = s.state(3);
        assert_eq!(u3.stat().len(), 4);
        assert!(u3.holds("add", &crate::structures::tuple(&["1", "2", "3"])));
        let m = crate::devmodel::DevelopmentModel::new(
            crate::devmodel::Frame::chain(5),
            (0..5).map(|n| s.state(n)).collect(),
        )
        .unwrap();
        assert!(m.validate().is_valid());
    }

    #[test]
    fn successor_is_eventually_found() {
        let s = arith();
        let phi = parse_formula("box forall x. dia exists y. S(x, y)", &s.signature()).unwrap();
        let r = bounded_satisfies(&s, 10, &phi, &Assignment::new());
        assert_eq!(r.verdict, Verdict::True);
        // x = k at state k finds its successor at state k + 1
        assert!(r.certificate.iter().any(|c| c.state == 4
            && c.assignment == vec![("x".to_string(), "4".to_string())]
            && c.kind == CertKind::DiaWitness { at: 5 }));
    }

    #[test]
    fn each_state_has_a_maximum() {
        let s = arith();
        let phi = parse_formula("box exists y. forall x. le(x, y)", &s.signature()).unwrap();
        let r = bounded_satisfies(&s, 10, &phi, &Assignment::new());
        assert_eq!(r.verdict, Verdict::True);
        assert!(r
            .certificate
            .iter()
            .any(|c| c.state == 7 && c.kind == CertKind::ExistsWitness { elem: "7".into() }));
    }

    #[test]
    fn unwitnessed_dia_is_unknown() {
        let s = arith();
        let phi = parse_formula("dia exists x. (S(x, x))", &s.signature()).unwrap();
        // S(x, x) is static and false; its falsity persists only once x is bound
        let r = bounded_satisfies(&s, 10, &phi, &Assignment::new());
        assert_eq!(r.verdict, Verdict::Unknown(10));
        assert!(r.certificate.is_empty());
        let fixed = parse_formula("forall x. box not S(x, x)", &s.signature()).unwrap();
        assert_eq!(
            bounded_satisfies(&s, 10, &fixed, &Assignment::new()).verdict,
            Verdict::True
        );
    }

    #[test]
    fn persistence_certificates() {
        let s = arith();
        let never = parse_formula("forall x. not dia S(x, x)", &s.signature()).unwrap();
        let r = bounded_satisfies(&s, 3, &never, &Assignment::new());
        assert_eq!(r.verdict, Verdict::True);
        assert!(r
            .certificate
            .iter()
            .any(|c| c.kind == CertKind::DiaPersistentFalse));
        let grows = parse_formula("box exists y. lt(y, y) or Z(y)", &s.signature()).unwrap();
        let r = bounded_satisfies(&s, 3, &grows, &Assignment::new());
        assert_eq!(r.verdict, Verdict::True);
        assert!(r
            .certificate
            .iter()
            .any(|c| matches!(c.kind, CertKind::BoxPersistent { .. })));
        let refuted = parse_formula("box forall x. exists y. lt(x, y)", &s.signature()).unwrap();
        let r = bounded_satisfies(&s, 3, &refuted, &Assignment::new());
        assert_eq!(r.verdict, Verdict::False);
    }

    #[test]
    fn definite_verdicts_agree_with_exact_lasso_evaluation() {
        let sig = Signature::new().with_relation("T", &[STAT], RelKind::Dynamic);
        let base = FiniteStructure::new(sig).with_elements(STAT, &["l"]);
        let on = base.clone().with_tuples("T", &[&["l"]]);
        let l = Lasso::new(
            1,
            2,
            vec![Arc::new(on.clone()), Arc::new(base), Arc::new(on)],
        )
        .unwrap();
        let a: Assignment = [("l".to_string(), "l".into())].into_iter().collect();
        for text in [
            "dia T(l)",
            "box T(l)",
            "box dia not T(l)",
            "T(l) or dia not T(l)",
        ] {
            let phi = parse_formula(text, l.signature()).unwrap();
            let exact = lasso_holds(&l, &phi, &a).unwrap();
            let b = bounded_satisfies(&LassoStream(l.clone()), 4, &phi, &a);
            match b.verdict {
                Verdict::True => assert!(exact, "{text}"),
                Verdict::False => assert!(!exact, "{text}"),
                Verdict::Unknown(_) => {}
            }
        }
    }

    #[test]
    fn rationals_grid_preset() {
        let s = preset("rationals-grid:2").unwrap();
        let u = s.state(1);
        // -1, -1/2, 0, 1/2, 1
        assert_eq!(u.stat().len(), 5);
        assert!(u.holds("add", &crate::structures::tuple(&["1/2", "1/2", "1"])));
        assert!(preset("rationals-grid:0").is_err());
        assert!(preset("nope").is_err());
        let phi = parse_formula("box forall x. exists y. add(x, y, x)", &s.signature()).unwrap();
        assert_eq!(
            bounded_satisfies(s.as_ref(), 3, &phi, &Assignment::new()).verdict,
            Verdict::True
        );
    }
}
