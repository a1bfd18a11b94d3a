//! Compositional truth checks on finite sentence algebras.
//!
//! [`DepthFragment`] closes the atoms `T(name)` and base atoms under `not`,
//! `and`, `or` and `->` up to a connective depth. Revision is extended to it
//! by evaluating each fragment sentence under the hypothesis, and
//! [`uct_fragment_check`] confirms the one-step compositional clauses.
//!
//! [`battery`] is a check on a hypothesis alone: constraints that every
//! revised hypothesis `gamma(Q0)` must satisfy because of how the bodies are
//! built. [`image_tabulation`] compares it with membership in the image of
//! revision.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::format::show_body;
use super::{gamma, truth_table, Body, Hypothesis, RevisionError, SentenceNetwork};

/// Largest fragment [`DepthFragment::new`] will build.
pub const MAX_FRAGMENT: usize = 2_000_000;

/// Battery constraints compare truth tables, so networks are capped.
pub const MAX_BATTERY_NAMES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FragNode {
    T(usize),
    Base(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
}

/// All boolean combinations up to a connective depth, hash-consed and
/// indexed level by level.
#[derive(Clone, Debug)]
pub struct DepthFragment {
    depth: usize,
    nodes: Vec<FragNode>,
    /// `level_end[k]` is the number of sentences of depth at most `k`.
    level_end: Vec<usize>,
}

impl DepthFragment {
    pub fn new(net: &SentenceNetwork, depth: usize) -> Result<Self, RevisionError> {
        let mut size = net.len() + net.base().len();
        for _ in 0..depth {
            size = size
                .saturating_add(size)
                .saturating_add(size.saturating_mul(size).saturating_mul(3));
            if size > MAX_FRAGMENT {
                return Err(RevisionError::TooLarge {
                    found: size,
                    cap: MAX_FRAGMENT,
                });
            }
        }
        let mut nodes: Vec<FragNode> = (0..net.len()).map(FragNode::T).collect();
        nodes.extend((0..net.base().len()).map(FragNode::Base));
        let mut index: HashMap<FragNode, usize> =
            nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut level_end = vec![nodes.len()];
        for _ in 0..depth {
            let prev = nodes.len();
            let mut push = |n: FragNode, nodes: &mut Vec<FragNode>| {
                index.entry(n).or_insert_with(|| {
                    nodes.push(n);
                    nodes.len() - 1
                });
            };
            for a in 0..prev {
                push(FragNode::Not(a), &mut nodes);
            }
            for a in 0..prev {
                for b in 0..prev {
                    push(FragNode::And(a, b), &mut nodes);
                    push(FragNode::Or(a, b), &mut nodes);
                    push(FragNode::Implies(a, b), &mut nodes);
                }
            }
            level_end.push(nodes.len());
        }
        Ok(DepthFragment {
            depth,
            nodes,
            level_end,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[FragNode] {
        &self.nodes
    }

    /// Number of sentences of depth at most `k`.
    pub fn level_size(&self, k: usize) -> usize {
        self.level_end[k.min(self.depth)]
    }

    pub fn to_body(&self, i: usize) -> Body {
        let b = |j: usize| Box::new(self.to_body(j));
        match self.nodes[i] {
            FragNode::T(s) => Body::T(s),
            FragNode::Base(s) => Body::Base(s),
            FragNode::Not(a) => Body::Not(b(a)),
            FragNode::And(x, y) => Body::And(b(x), b(y)),
            FragNode::Or(x, y) => Body::Or(b(x), b(y)),
            FragNode::Implies(x, y) => Body::Implies(b(x), b(y)),
        }
    }

    pub fn show(&self, net: &SentenceNetwork, i: usize) -> String {
        show_body(&self.to_body(i), net.names(), net.base_names())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UctViolation {
    pub axiom: &'static str,
    pub sentence: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct UctReport {
    pub depth: usize,
    pub fragment_size: usize,
    pub checks: usize,
    pub violations: Vec<UctViolation>,
}

impl UctReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The compositional clauses for the pair `(q, gamma(q))` over the depth-`d`
/// fragment. The outer `T` of each clause is membership in the revision of
/// `q`; atoms additionally check `T(T(s))` against `q` and `T(b)` against
/// the base.
pub fn uct_fragment_check(
    net: &SentenceNetwork,
    q: Hypothesis,
    d: usize,
) -> Result<UctReport, RevisionError> {
    let frag = DepthFragment::new(net, d.max(1))?;
    // each fragment sentence is revised as a whole; the clauses then compare
    // it with the revisions of its immediate parts
    let r: Vec<bool> = (0..frag.len())
        .map(|i| frag.to_body(i).eval(q, net.base()))
        .collect();
    let g = gamma(net, q);
    let mut violations = Vec::new();
    let mut checks = 0;
    for (s, body) in net.bodies().iter().enumerate() {
        checks += 1;
        if body.eval(q, net.base()) != g.contains(s) {
            violations.push(UctViolation {
                axiom: "gamma",
                sentence: net.names()[s].clone(),
            });
        }
    }
    for (i, n) in frag.nodes.iter().enumerate() {
        checks += 1;
        let (axiom, ok) = match *n {
            FragNode::T(s) => ("T-atom", r[i] == q.contains(s)),
            FragNode::Base(b) => ("base-atom", r[i] == net.base()[b]),
            FragNode::Not(a) => ("UCT-not", r[i] == !r[a]),
            FragNode::And(a, b) => ("UCT-and", r[i] == (r[a] && r[b])),
            FragNode::Or(a, b) => ("UCT-or", r[i] == (r[a] || r[b])),
            FragNode::Implies(a, b) => ("UCT-implies", r[i] == (!r[a] || r[b])),
        };
        if !ok {
            violations.push(UctViolation {
                axiom,
                sentence: frag.show(net, i),
            });
        }
    }
    Ok(UctReport {
        depth: d.max(1),
        fragment_size: frag.len(),
        checks,
        violations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Arg {
    Name(usize),
    Const(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Not,
    And,
    Or,
    Implies,
    Iff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Constraint {
    Fixed(usize, bool),
    Same(usize, usize),
    Opposite(usize, usize),
    Compose(usize, Op, Arg, Arg),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatteryViolation {
    pub rule: &'static str,
    pub detail: String,
}

/// Truth function of a body as a table over the union `support`.
fn table_on(b: &Body, base: &[bool], support: u64) -> Vec<bool> {
    let mut out = Vec::new();
    let mut sub = 0u64;
    loop {
        out.push(b.eval(Hypothesis(sub), base));
        if sub == support {
            break;
        }
        sub = sub.wrapping_sub(support) & support;
    }
    out
}

fn equivalent(a: &Body, b: &Body, base: &[bool]) -> bool {
    let sup = a.t_support() | b.t_support();
    table_on(a, base, sup) == table_on(b, base, sup)
}

fn constant(b: &Body, base: &[bool]) -> Option<bool> {
    let t = truth_table(b, base);
    let first = *t.values().next()?;
    t.values().all(|&v| v == first).then_some(first)
}

fn arg_of(net: &SentenceNetwork, part: &Body) -> Option<Arg> {
    if let Some(c) = constant(part, net.base()) {
        return Some(Arg::Const(c));
    }
    net.bodies()
        .iter()
        .position(|b| equivalent(b, part, net.base()))
        .map(Arg::Name)
}

fn compile(net: &SentenceNetwork) -> Result<Vec<Constraint>, RevisionError> {
    if net.len() > MAX_BATTERY_NAMES {
        return Err(RevisionError::TooLarge {
            found: net.len(),
            cap: MAX_BATTERY_NAMES,
        });
    }
    let base = net.base();
    let mut out = Vec::new();
    for (s, bs) in net.bodies().iter().enumerate() {
        if let Some(c) = constant(bs, base) {
            out.push(Constraint::Fixed(s, c));
            continue;
        }
        for (t, bt) in net.bodies().iter().enumerate().skip(s + 1) {
            if equivalent(bs, bt, base) {
                out.push(Constraint::Same(s, t));
            } else if equivalent(&Body::Not(Box::new(bs.clone())), bt, base) {
                out.push(Constraint::Opposite(s, t));
            }
        }
        let split = match bs {
            Body::Not(a) => Some((Op::Not, a.as_ref(), None)),
            Body::And(a, b) => Some((Op::And, a.as_ref(), Some(b.as_ref()))),
            Body::Or(a, b) => Some((Op::Or, a.as_ref(), Some(b.as_ref()))),
            Body::Implies(a, b) => Some((Op::Implies, a.as_ref(), Some(b.as_ref()))),
            Body::Iff(a, b) => Some((Op::Iff, a.as_ref(), Some(b.as_ref()))),
            _ => None,
        };
        if let Some((op, a, b)) = split {
            let x = arg_of(net, a);
            let y = match b {
                Some(b) => arg_of(net, b),
                None => Some(Arg::Const(false)),
            };
            if let (Some(x), Some(y)) = (x, y) {
                out.push(Constraint::Compose(s, op, x, y));
            }
        }
    }
    Ok(out)
}

fn violations(net: &SentenceNetwork, cs: &[Constraint], q: Hypothesis) -> Vec<BatteryViolation> {
    let name = |i: usize| net.names()[i].as_str();
    let val = |a: Arg| match a {
        Arg::Name(i) => q.contains(i),
        Arg::Const(c) => c,
    };
    let mut out = Vec::new();
    for c in cs {
        let bad = match *c {
            Constraint::Fixed(s, v) => (q.contains(s) != v).then(|| BatteryViolation {
                rule: "constant",
                detail: format!("T({}) should be {v}", name(s)),
            }),
            Constraint::Same(s, t) => (q.contains(s) != q.contains(t)).then(|| BatteryViolation {
                rule: "extensional",
                detail: format!("{} and {} have equivalent bodies", name(s), name(t)),
            }),
            Constraint::Opposite(s, t) => {
                (q.contains(s) == q.contains(t)).then(|| BatteryViolation {
                    rule: "negation",
                    detail: format!("{} and {} have complementary bodies", name(s), name(t)),
                })
            }
            Constraint::Compose(s, op, x, y) => {
                let (x, y) = (val(x), val(y));
                let want = match op {
                    Op::Not => !x,
                    Op::And => x && y,
                    Op::Or => x || y,
                    Op::Implies => !x || y,
                    Op::Iff => x == y,
                };
                (q.contains(s) != want).then(|| BatteryViolation {
                    rule: "compositional",
                    detail: format!("T({}) should be {want} from its components", name(s)),
                })
            }
        };
        out.extend(bad);
    }
    out
}

/// Coherence constraints on `q` read off the bodies: constant bodies,
/// equivalent and complementary pairs, and bodies whose immediate components
/// are equivalent to other sentences or constants.
pub fn battery(
    net: &SentenceNetwork,
    q: Hypothesis,
) -> Result<Vec<BatteryViolation>, RevisionError> {
    Ok(violations(net, &compile(net)?, q))
}

pub fn image_of_gamma(net: &SentenceNetwork) -> BTreeSet<Hypothesis> {
    net.all_hypotheses().map(|q| gamma(net, q)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TabulationRow {
    pub q: String,
    pub in_image: bool,
    pub battery_pass: bool,
    pub uct_violations: usize,
}

/// Battery outcome against image membership for every hypothesis.
#[derive(Clone, Debug, Serialize)]
pub struct Tabulation {
    pub rows: Vec<TabulationRow>,
}

impl Tabulation {
    /// Hypotheses where the battery and image membership disagree.
    pub fn mismatches(&self) -> Vec<&TabulationRow> {
        self.rows
            .iter()
            .filter(|r| r.in_image != r.battery_pass)
            .collect()
    }

    /// Every revised hypothesis passes the battery.
    pub fn sound(&self) -> bool {
        self.rows.iter().all(|r| !r.in_image || r.battery_pass)
    }
}

pub fn image_tabulation(net: &SentenceNetwork, d: usize) -> Result<Tabulation, RevisionError> {
    let cs = compile(net)?;
    let image = image_of_gamma(net);
    let rows = net
        .all_hypotheses()
        .map(|q| {
            Ok(TabulationRow {
                q: q.show(net),
                in_image: image.contains(&q),
                battery_pass: violations(net, &cs, q).is_empty(),
                uct_violations: uct_fragment_check(net, q, d)?.violations.len(),
            })
        })
        .collect::<Result<_, RevisionError>>()?;
    Ok(Tabulation { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::revision::parse_network;

    #[test]
    fn fragment_sizes() {
        let liar = SentenceNetwork::liar();
        let f1 = DepthFragment::new(&liar, 1).unwrap();
        // T(l), not T(l), and three binary combinations of T(l) with itself
        assert_eq!(f1.len(), 5);
        let f2 = DepthFragment::new(&liar, 2).unwrap();
        assert_eq!(f2.level_size(1), 5);
        assert_eq!(f2.len(), 5 + 4 + 3 * 25 - 3);
        assert!(DepthFragment::new(&liar, 4).is_err());
    }

    #[test]
    fn fragment_clauses_hold() {
        let net =
            parse_network("base b = false\nname a : T(c) and b\nname c : not T(a)\n").unwrap();
        for q in net.all_hypotheses() {
            let r = uct_fragment_check(&net, q, 2).unwrap();
            assert!(r.passed(), "{:?}", r.violations);
            assert!(r.checks > r.fragment_size);
        }
        let r = uct_fragment_check(&SentenceNetwork::liar(), Hypothesis::empty(), 1).unwrap();
        assert_eq!(r.fragment_size, 5);
    }

    #[test]
    fn battery_matches_image_when_bodies_pin_everything() {
        let net = parse_network("name a : T(c)\nname b : not T(c)\nname c : true\n").unwrap();
        let t = image_tabulation(&net, 1).unwrap();
        assert!(t.sound());
        assert!(t.mismatches().is_empty());
        assert_eq!(image_of_gamma(&net).len(), 2);
    }

    #[test]
    fn battery_is_weaker_than_image_in_general() {
        // {a} is never a revision: a needs both a and b, b needs either
        let net = parse_network("name a : T(a) and T(b)\nname b : T(a) or T(b)\n").unwrap();
        let t = image_tabulation(&net, 1).unwrap();
        assert!(t.sound());
        let m = t.mismatches();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].q, "{a}");
    }

    #[test]
    fn battery_flags_broken_hypotheses() {
        let net =
            parse_network("base b = true\nname s : b\nname t : not T(s)\nname u : not T(s)\n")
                .unwrap();
        let q = net.hypothesis(&["t"]).unwrap();
        let rules: Vec<_> = battery(&net, q)
            .unwrap()
            .into_iter()
            .map(|v| v.rule)
            .collect();
        assert!(rules.contains(&"constant"));
        assert!(rules.contains(&"extensional"));
    }
}
