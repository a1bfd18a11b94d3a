//! Forcing at finite scale: hereditarily finite sets, finite posets with a
//! bottom, ideals, names and their valuations, and the development model in
//! which membership between names is a dynamic predicate.

mod format;
mod model;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use format::{parse_name, parse_poset, write_poset, PosetParseError};
pub use model::{
    d_tau, force_sweep, forcing_dev_model, generic_sweep, mostowski, tele_membership,
    theorem_check, ForceSweepReport, ForcingModel, GenericSweepReport, MembershipRoutes,
    TheoremCheck,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("not a partial order: {0}")]
    NotAPoset(String),
    #[error("{0} is not below every element")]
    NoBottom(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("membership is not well-founded: {}", cycle.join(" in "))]
    NotWellFounded { cycle: Vec<String> },
    #[error("{what} exceeds the cap of {cap}")]
    BoundsTooLarge { what: String, cap: usize },
    #[error("unknown poset element {0}")]
    UnknownElement(String),
}

/// A hereditarily finite set with canonically sorted, duplicate-free members.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HFSet(Arc<Vec<HFSet>>);

impl HFSet {
    pub fn empty() -> Self {
        HFSet(Arc::new(Vec::new()))
    }

    pub fn from_members(members: impl IntoIterator<Item = HFSet>) -> Self {
        let set: BTreeSet<HFSet> = members.into_iter().collect();
        HFSet(Arc::new(set.into_iter().collect()))
    }

    pub fn members(&self) -> &[HFSet] {
        &self.0
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|m| m.rank() + 1).max().unwrap_or(0)
    }

    /// `sum 2^code(m)` over members, when it fits.
    pub fn ackermann(&self) -> Option<u128> {
        let mut acc: u128 = 0;
        for m in self.0.iter() {
            let c = m.ackermann()?;
            if c >= 128 {
                return None;
            }
            acc |= 1u128 << c;
        }
        Some(acc)
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for HFSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite partial order with a least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    le: Vec<Vec<bool>>,
    bottom: usize,
}

impl Poset {
    /// Validates the order and the bottom. `le` must already be reflexive and
    /// transitive.
    pub fn new(
        labels: Vec<String>,
        le: Vec<Vec<bool>>,
        bottom: usize,
    ) -> Result<Self, ForcingError> {
        let n = labels.len();
        if le.len() != n || le.iter().any(|r| r.len() != n) || bottom >= n.max(1) {
            return Err(ForcingError::NotAPoset(
                "order matrix does not match the elements".into(),
            ));
        }
        for a in 0..n {
            if !le[a][a] {
                return Err(ForcingError::NotAPoset(format!(
                    "{} is not below itself",
                    labels[a]
                )));
            }
            for b in 0..n {
                if a != b && le[a][b] && le[b][a] {
                    return Err(ForcingError::NotAPoset(format!(
                        "{} and {} are equivalent",
                        labels[a], labels[b]
                    )));
                }
                for c in 0..n {
                    if le[a][b] && le[b][c] && !le[a][c] {
                        return Err(ForcingError::NotAPoset(format!(
                            "{} <= {} <= {} but not {} <= {}",
                            labels[a], labels[b], labels[c], labels[a], labels[c]
                        )));
                    }
                }
            }
        }
        if (0..n).any(|p| !le[bottom][p]) {
            return Err(ForcingError::NoBottom(labels[bottom].clone()));
        }
        Ok(Poset { labels, le, bottom })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&p| (0..self.len()).all(|q| !self.le[p][q] || p == q))
            .collect()
    }

    fn set_label(&self, set: &[usize]) -> String {
        let ls: Vec<&str> = set.iter().map(|&p| self.label(p)).collect();
        format!("{{{}}}", ls.join(","))
    }
}

/// Every poset on labels `p0..p(n-1)` with a bottom: a choice of bottom times
/// every partial order on the remaining labels.
pub fn enumerate_posets(n: usize) -> Vec<Poset> {
    if n == 0 {
        return Vec::new();
    }
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut out = Vec::new();
    for bottom in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&i| i != bottom).collect();
        let pairs: Vec<(usize, usize)> = rest
            .iter()
            .flat_map(|&a| rest.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
            .collect();
        'orders: for mask in 0u64..(1u64 << pairs.len()) {
            let mut le = vec![vec![false; n]; n];
            for (i, row) in le.iter_mut().enumerate() {
                row[i] = true;
            }
            for p in 0..n {
                le[bottom][p] = true;
            }
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if mask >> pairs.iter().position(|&q| q == (b, a)).expect("pair") & 1 == 1 {
                        continue 'orders;
                    }
                    le[a][b] = true;
                }
            }
            for &a in &rest {
                for &b in &rest {
                    for &c in &rest {
                        if le[a][b] && le[b][c] && !le[a][c] {
                            continue 'orders;
                        }
                    }
                }
            }
            out.push(Poset::new(labels.clone(), le, bottom).expect("constructed as a poset"));
        }
    }
    out
}

/// A down-set on which the order is directed. Ideals here are non-empty.
pub fn is_ideal(p: &Poset, set: &[usize]) -> bool {
    if set.is_empty() || set.iter().any(|&a| a >= p.len()) {
        return false;
    }
    let mem: BTreeSet<usize> = set.iter().copied().collect();
    let down = mem
        .iter()
        .all(|&a| (0..p.len()).all(|b| !p.le(b, a) || mem.contains(&b)));
    let directed = mem.iter().all(|&a| {
        mem.iter()
            .all(|&b| mem.iter().any(|&c| p.le(a, c) && p.le(b, c)))
    });
    down && directed
}

pub fn is_upward_dense(p: &Poset, set: &[usize]) -> bool {
    (0..p.len()).all(|a| set.iter().any(|&d| p.le(a, d)))
}

pub const MAX_POSET: usize = 12;

fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// All ideals, in increasing order of their bitmask.
pub fn ideals(p: &Poset) -> Result<Vec<Vec<usize>>, ForcingError> {
    if p.len() > MAX_POSET {
        return Err(ForcingError::BoundsTooLarge {
            what: format!("poset of size {}", p.len()),
            cap: MAX_POSET,
        });
    }
    Ok((1u64..(1u64 << p.len()))
        .map(|m| members(m, p.len()))
        .filter(|s| is_ideal(p, s))
        .collect())
}

/// An ideal meeting every upward-dense subset, checked over all subsets.
pub fn is_generic_ideal(p: &Poset, set: &[usize]) -> Result<bool, ForcingError> {
    if p.len() > MAX_POSET {
        return Err(ForcingError::BoundsTooLarge {
            what: format!("poset of size {}", p.len()),
            cap: MAX_POSET,
        });
    }
    if !is_ideal(p, set) {
        return Ok(false);
    }
    let mut inside = 0u64;
    for &a in set {
        inside |= 1 << a;
    }
    for d in 1u64..(1u64 << p.len()) {
        // only sets missing the ideal can witness non-genericity
        if d & inside != 0 {
            continue;
        }
        if is_upward_dense(p, &members(d, p.len())) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn contains_maximal(p: &Poset, set: &[usize]) -> bool {
    p.maximal().iter().any(|m| set.contains(m))
}

/// A name: a finite set of (name, condition) pairs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PName(Arc<BTreeSet<(PName, usize)>>);

impl PName {
    pub fn empty() -> Self {
        PName(Arc::new(BTreeSet::new()))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (PName, usize)>) -> Self {
        PName(Arc::new(pairs.into_iter().collect()))
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(PName, usize)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|(s, _)| s.rank() + 1).max().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, p: &'a Poset) -> NameDisplay<'a> {
        NameDisplay {
            name: self,
            poset: p,
        }
    }
}

impl fmt::Debug for PName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (s, q)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({s:?}, #{q})")?;
        }
        write!(f, "}}")
    }
}

pub struct NameDisplay<'a> {
    name: &'a PName,
    poset: &'a Poset,
}

impl fmt::Display for NameDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (s, q)) in self.name.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", s.display(self.poset), self.poset.label(*q))?;
        }
        write!(f, "}}")
    }
}

pub const MAX_NAMES: usize = 250_000;

fn choose(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All names of rank at most `rank` whose every level has at most `width`
/// pairs, sorted canonically.
pub fn gen_pnames(p: &Poset, rank: usize, width: usize) -> Result<Vec<PName>, ForcingError> {
    let mut level: Vec<PName> = vec![PName::empty()];
    for _ in 0..rank {
        let pairs: Vec<(PName, usize)> = level
            .iter()
            .flat_map(|s| (0..p.len()).map(move |q| (s.clone(), q)))
            .collect();
        let total: usize = (0..=width.min(pairs.len()))
            .map(|k| choose(pairs.len(), k))
            .fold(0, usize::saturating_add);
        if total > MAX_NAMES {
            return Err(ForcingError::BoundsTooLarge {
                what: format!("{total} names"),
                cap: MAX_NAMES,
            });
        }
        let mut next = BTreeSet::new();
        let mut stack: Vec<usize> = Vec::new();
        subsets(&pairs, width, 0, &mut stack, &mut next);
        level = next.into_iter().collect();
    }
    Ok(level)
}

fn subsets(
    pairs: &[(PName, usize)],
    width: usize,
    from: usize,
    stack: &mut Vec<usize>,
    out: &mut BTreeSet<PName>,
) {
    out.insert(PName::from_pairs(stack.iter().map(|&i| pairs[i].clone())));
    if stack.len() == width {
        return;
    }
    for i in from..pairs.len() {
        stack.push(i);
        subsets(pairs, width, i + 1, stack, out);
        stack.pop();
    }
}

/// `val_I(tau) = { val_I(sigma) : (sigma, q) in tau for some q in I }`.
pub fn val(tau: &PName, ideal: &[usize]) -> HFSet {
    let mut memo = HashMap::new();
    val_memo(tau, ideal, &mut memo)
}

pub(crate) fn val_memo(tau: &PName, ideal: &[usize], memo: &mut HashMap<PName, HFSet>) -> HFSet {
    if let Some(v) = memo.get(tau) {
        return v.clone();
    }
    let mut out = Vec::new();
    for (s, q) in tau.pairs() {
        if ideal.contains(q) {
            out.push(val_memo(s, ideal, memo));
        }
    }
    let v = HFSet::from_members(out);
    memo.insert(tau.clone(), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        let labels = (0..n).map(|i| format!("c{i}")).collect();
        let le = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Poset::new(labels, le, 0).unwrap()
    }

    fn val_plain(tau: &PName, ideal: &[usize]) -> HFSet {
        HFSet::from_members(
            tau.pairs()
                .filter(|(_, q)| ideal.contains(q))
                .map(|(s, _)| val_plain(s, ideal)),
        )
    }

    #[test]
    fn hf_sets_are_canonical() {
        let e = HFSet::empty();
        let one = HFSet::from_members([e.clone(), e.clone()]);
        assert_eq!(one.members().len(), 1);
        let two = HFSet::from_members([one.clone(), e.clone()]);
        assert_eq!(two, HFSet::from_members([e.clone(), one.clone()]));
        assert_eq!(two.rank(), 2);
        assert_eq!(two.ackermann(), Some(3));
        assert_eq!(two.to_string(), "{{},{{}}}");
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_posets(n).len()).collect();
        // labelled posets on n-1 points: 1, 1, 3, 19, 219
        assert_eq!(counts, vec![1, 2, 9, 76, 1095]);
    }

    #[test]
    fn bottom_ideal_is_not_generic_but_maximal_cones_are() {
        let p = chain(3);
        assert!(is_ideal(&p, &[0]));
        assert!(!is_generic_ideal(&p, &[0]).unwrap());
        assert!(is_generic_ideal(&p, &[0, 1, 2]).unwrap());
        assert!(is_upward_dense(&p, &[0, 1, 2]));
        assert!(!is_ideal(&p, &[1, 2]));
        assert_eq!(ideals(&p).unwrap().len(), 3);
        // a fork: {0,1,2} is a down-set but not directed
        let fork = Poset::new(
            vec!["z".into(), "a".into(), "b".into()],
            vec![
                vec![true, true, true],
                vec![false, true, false],
                vec![false, false, true],
            ],
            0,
        )
        .unwrap();
        assert!(!is_ideal(&fork, &[0, 1, 2]));
        assert!(is_generic_ideal(&fork, &[0, 1]).unwrap());
    }

    #[test]
    fn name_counts() {
        assert_eq!(gen_pnames(&chain(3), 0, 5).unwrap(), vec![PName::empty()]);
        assert_eq!(gen_pnames(&chain(2), 1, 1).unwrap().len(), 3);
        // rank <= 1 width <= 2 over four conditions: 1 + 4 + 6 names; then
        // 11 * 4 = 44 pairs give 1 + 44 + 946 names of rank <= 2
        assert_eq!(gen_pnames(&chain(4), 1, 2).unwrap().len(), 11);
        assert_eq!(gen_pnames(&chain(4), 2, 2).unwrap().len(), 991);
        assert!(matches!(
            gen_pnames(&chain(4), 3, 3),
            Err(ForcingError::BoundsTooLarge { .. })
        ));
    }

    #[test]
    fn valuation() {
        let e = PName::empty();
        assert_eq!(val(&e, &[0]), HFSet::empty());
        let t = PName::from_pairs([(e.clone(), 1)]);
        assert_eq!(val(&t, &[0, 1]), HFSet::from_members([HFSet::empty()]));
        assert_eq!(val(&t, &[0]), HFSet::empty());
        let p = chain(3);
        let names = gen_pnames(&p, 2, 2).unwrap();
        for ideal in ideals(&p).unwrap() {
            for n in &names {
                assert_eq!(val(n, &ideal), val_plain(n, &ideal));
            }
        }
    }
}
