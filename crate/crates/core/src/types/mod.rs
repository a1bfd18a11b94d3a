//! Type fragments over arithmetic, the least-realizer net `D_p`, its
//! teleological verdicts and the eventual-behavior check.
//!
//! Formulas are over the `arith-basic` signature. Numerals are written as
//! identifiers (`lt(5, x)`) and denote the numbers. Truth in the natural
//! numbers is taken in an initial segment sized to the formula: the largest
//! parameter plus one, doubled per quantifier level, or squared when the
//! formula mentions `mul`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::devmodel::FunctionalDynamicTuple;
use crate::eval::{eval, Assignment, Single};
use crate::logic::{parse_formula, Formula, ParseError, Signature};
use crate::omega::{ArithBasic, Stream, Verdict};
use crate::structures::Elem;

/// Candidate tuples examined per state before giving up.
pub const SEARCH_LIMIT: u64 = 1024;
/// Largest initial segment used to evaluate a formula.
pub const SEGMENT_CAP: u64 = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("line {line}: free variable {name} is neither a type variable nor a numeral")]
    FreeVariable { line: usize, name: String },
    #[error("no tuple among the first {searched} satisfies {{{}}} (prefix unrealizable at {s})", subset.join(", "))]
    PrefixUnrealizable {
        s: usize,
        subset: Vec<String>,
        searched: u64,
    },
    #[error("{formula} needs an initial segment of size {need}, above {cap}")]
    SegmentTooLarge {
        formula: String,
        need: u64,
        cap: u64,
    },
    #[error("unknown type preset {0}")]
    UnknownPreset(String),
}

fn numeral(name: &str) -> Option<u64> {
    name.parse().ok()
}

/// A type enumerated as explicit formulas followed by schema instances
/// (`{i}` replaced by `0, 1, 2, ...`, interleaved across schemas).
#[derive(Clone, Debug)]
pub struct TypeFragment {
    pub vars: Vec<String>,
    pub formulas: Vec<Formula>,
    pub schemas: Vec<String>,
    /// Length of the stored prefix.
    pub prefix: usize,
    sig: Arc<Signature>,
}

impl TypeFragment {
    pub fn new(
        vars: &[&str],
        formulas: &[&str],
        schemas: &[&str],
        prefix: usize,
    ) -> Result<Self, TypeError> {
        let sig = ArithBasic::default().signature();
        let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        let mut out = Vec::new();
        for (i, f) in formulas.iter().enumerate() {
            out.push(parse_in(&sig, &vars, f, i + 1)?);
        }
        let frag = TypeFragment {
            vars,
            formulas: out,
            schemas: schemas.iter().map(|s| s.to_string()).collect(),
            prefix,
            sig,
        };
        for (j, s) in frag.schemas.iter().enumerate() {
            parse_in(
                &frag.sig,
                &frag.vars,
                &s.replace("{i}", "0"),
                formulas.len() + j + 1,
            )?;
        }
        Ok(frag)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// Whether the enumeration never runs out.
    pub fn is_infinite(&self) -> bool {
        !self.schemas.is_empty()
    }

    /// `p_i`, or `None` once a finite type is exhausted.
    pub fn formula(&self, i: usize) -> Option<Formula> {
        if let Some(f) = self.formulas.get(i) {
            return Some(f.clone());
        }
        if self.schemas.is_empty() {
            return None;
        }
        let k = i - self.formulas.len();
        let s = &self.schemas[k % self.schemas.len()];
        let text = s.replace("{i}", &(k / self.schemas.len()).to_string());
        Some(parse_in(&self.sig, &self.vars, &text, 0).expect("schema instances parse"))
    }

    /// The stored prefix `p_0 .. p_{prefix-1}`.
    pub fn prefix_formulas(&self) -> Vec<Formula> {
        (0..self.prefix).map_while(|i| self.formula(i)).collect()
    }

    /// A formula over this fragment's variables and numerals.
    pub fn parse(&self, text: &str) -> Result<Formula, TypeError> {
        parse_in(&self.sig, &self.vars, text, 1)
    }
}

fn parse_in(
    sig: &Signature,
    vars: &[String],
    text: &str,
    line: usize,
) -> Result<Formula, TypeError> {
    let f = parse_formula(text, sig).map_err(|source| TypeError::Formula { line, source })?;
    for v in f.free_vars() {
        if !vars.contains(&v.name) && numeral(&v.name).is_none() {
            return Err(TypeError::FreeVariable { line, name: v.name });
        }
    }
    Ok(f)
}

/// Type files: `vars x y`, then one formula per line; a line starting with
/// `schema` holds a formula with `{i}`. `#` starts a comment.
pub fn parse_type(text: &str, prefix: usize) -> Result<TypeFragment, TypeError> {
    let mut vars: Option<Vec<String>> = None;
    let (mut formulas, mut schemas) = (Vec::new(), Vec::new());
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars ") {
            if vars.is_some() {
                return Err(TypeError::Syntax {
                    line: n + 1,
                    message: "duplicate vars line".into(),
                });
            }
            vars = Some(rest.split_whitespace().map(String::from).collect());
        } else if let Some(rest) = line.strip_prefix("schema ") {
            if !rest.contains("{i}") {
                return Err(TypeError::Syntax {
                    line: n + 1,
                    message: "schema without {i}".into(),
                });
            }
            schemas.push((n + 1, rest.trim().to_string()));
        } else {
            formulas.push((n + 1, line.to_string()));
        }
    }
    let vars = vars.ok_or(TypeError::Syntax {
        line: 1,
        message: "missing vars line".into(),
    })?;
    let sig = ArithBasic::default().signature();
    let mut parsed = Vec::new();
    for (line, f) in &formulas {
        parsed.push(parse_in(&sig, &vars, f, *line)?);
    }
    for (line, s) in &schemas {
        parse_in(&sig, &vars, &s.replace("{i}", "0"), *line)?;
    }
    Ok(TypeFragment {
        vars,
        formulas: parsed,
        schemas: schemas.into_iter().map(|(_, s)| s).collect(),
        prefix,
        sig,
    })
}

/// Presets: `n-less-x` (`{n < x}`), `zero` (`{x = 0}`), `contradiction`.
pub fn preset(name: &str, prefix: usize) -> Result<TypeFragment, TypeError> {
    match name {
        "n-less-x" => TypeFragment::new(&["x"], &[], &["lt({i}, x)"], prefix),
        "zero" => TypeFragment::new(&["x"], &["x = 0"], &[], prefix),
        "contradiction" => TypeFragment::new(&["x"], &["x = 0", "not x = 0"], &[], prefix),
        _ => Err(TypeError::UnknownPreset(name.into())),
    }
}

fn size_need(phi: &Formula, params: u64) -> u64 {
    let squares = phi.relations().contains("mul");
    let mut n = params + 1;
    for _ in 0..phi.quantifier_depth() {
        n = if squares {
            n.saturating_mul(n)
        } else {
            n.saturating_mul(2)
        };
    }
    n
}

/// Truth of formulas over initial segments of the natural numbers.
#[derive(Default)]
pub struct Ambient {
    arith: ArithBasic,
}

impl Ambient {
    pub fn holds(&self, phi: &Formula, vars: &[String], tuple: &[u64]) -> Result<bool, TypeError> {
        let mut asg = Assignment::new();
        let mut top = tuple.iter().copied().max().unwrap_or(0);
        for v in phi.free_vars() {
            let val = match vars.iter().position(|n| *n == v.name) {
                Some(i) => tuple[i],
                None => numeral(&v.name).expect("free variables are checked at parse time"),
            };
            top = top.max(val);
            asg.insert(v.name.clone(), Elem::from(val.to_string()));
        }
        let need = size_need(phi, top);
        if need > SEGMENT_CAP {
            return Err(TypeError::SegmentTooLarge {
                formula: phi.to_string(),
                need,
                cap: SEGMENT_CAP,
            });
        }
        // round up so that few segments are built
        let size = need.next_power_of_two().max(8) as usize;
        let u = self.arith.state(size);
        Ok(eval(&Single(&u), 0, phi, &asg).expect("well-sorted arithmetic formula"))
    }
}

/// Tuples of naturals ordered by maximum, then lexicographically.
fn tuples(arity: usize) -> impl Iterator<Item = Vec<u64>> {
    (0u64..).flat_map(move |m| {
        let all: Vec<Vec<u64>> = (0..arity).fold(vec![Vec::new()], |acc, _| {
            acc.into_iter()
                .flat_map(|p| (0..=m).map(move |v| [p.clone(), vec![v]].concat()))
                .collect()
        });
        all.into_iter()
            .filter(move |t| t.contains(&m) || arity == 0)
    })
}

/// `D_p(s)`: the least tuple satisfying `p_0, ..., p_s`. Once a finite type
/// is exhausted the value stays fixed.
pub struct DpNet {
    frag: TypeFragment,
    ambient: Ambient,
    values: Mutex<Vec<Vec<u64>>>,
}

impl fmt::Debug for DpNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DpNet({:?})", self.values.lock().expect("values lock"))
    }
}

pub fn d_p(frag: &TypeFragment) -> Result<DpNet, TypeError> {
    let net = DpNet {
        frag: frag.clone(),
        ambient: Ambient::default(),
        values: Mutex::new(Vec::new()),
    };
    if frag.prefix > 0 {
        net.at(frag.prefix - 1)?;
    }
    Ok(net)
}

impl DpNet {
    pub fn fragment(&self) -> &TypeFragment {
        &self.frag
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn at(&self, s: usize) -> Result<Vec<u64>, TypeError> {
        let mut vals = self.values.lock().expect("values lock");
        while vals.len() <= s {
            let n = vals.len();
            let v = match self.frag.formula(n) {
                None => vals
                    .last()
                    .cloned()
                    .unwrap_or_else(|| vec![0; self.frag.arity()]),
                Some(_) => self.search(n, vals.last())?,
            };
            vals.push(v);
        }
        Ok(vals[s].clone())
    }

    fn search(&self, s: usize, prev: Option<&Vec<u64>>) -> Result<Vec<u64>, TypeError> {
        let ps: Vec<Formula> = (0..=s).map_while(|i| self.frag.formula(i)).collect();
        let arity = self.frag.arity();
        // the least realizer of more formulas is never earlier
        let start = prev.filter(|_| arity == 1).map(|p| p[0]).unwrap_or(0);
        let mut searched = 0;
        for t in tuples(arity).skip_while(|t| arity == 1 && t[0] < start) {
            if searched >= SEARCH_LIMIT {
                break;
            }
            searched += 1;
            let mut ok = true;
            for p in &ps {
                if !self.ambient.holds(p, &self.frag.vars, &t)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(t);
            }
        }
        Err(TypeError::PrefixUnrealizable {
            s,
            subset: ps.iter().map(|f| f.to_string()).collect(),
            searched,
        })
    }

    /// The values at states `0..=h` as a dynamic tuple.
    pub fn dynamic_tuple(&self, h: usize) -> Result<FunctionalDynamicTuple, TypeError> {
        let values = (0..=h)
            .map(|s| {
                Ok(self
                    .at(s)?
                    .iter()
                    .map(|v| Elem::from(v.to_string()))
                    .collect())
            })
            .collect::<Result<_, TypeError>>()?;
        Ok(FunctionalDynamicTuple {
            arity: self.frag.arity(),
            values,
        })
    }
}

/// Teleological verdict for one formula of the prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TeleRow {
    pub index: usize,
    pub formula: String,
    pub verdict: Verdict,
    /// The state from which the formula is claimed.
    pub from: usize,
    pub checked_upto: usize,
    pub counterexample: Option<usize>,
}

/// `p_i` holds of `D_p(t)` for `t` in `[i, h]`; the certificate is the
/// construction, checked on the window.
pub fn tele_type(net: &DpNet, h: usize) -> Result<Vec<TeleRow>, TypeError> {
    tele_values(&net.frag, &net.ambient, |s| net.at(s), h)
}

/// As [`tele_type`] for arbitrary values, to catch corrupted nets.
pub fn tele_values(
    frag: &TypeFragment,
    ambient: &Ambient,
    values: impl Fn(usize) -> Result<Vec<u64>, TypeError>,
    h: usize,
) -> Result<Vec<TeleRow>, TypeError> {
    let mut rows = Vec::new();
    for (i, p) in frag.prefix_formulas().into_iter().enumerate() {
        let mut counterexample = None;
        for t in i..=h.max(i) {
            if !ambient.holds(&p, &frag.vars, &values(t)?)? {
                counterexample = Some(t);
                break;
            }
        }
        let verdict = if counterexample.is_none() {
            Verdict::True
        } else {
            Verdict::Unknown(h)
        };
        rows.push(TeleRow {
            index: i,
            formula: p.to_string(),
            verdict,
            from: i,
            checked_upto: h.max(i),
            counterexample,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PatternCert {
    /// The formula is `p_index`.
    InType { index: usize },
    /// Its negation is `p_index`.
    NegationInType { index: usize },
    /// `p_index` forces the value to at least `bound`, past which the
    /// quantifier-free formula is constant.
    Threshold { index: usize, bound: u64 },
    /// Periodicity declared by the caller, checked on the window.
    Declared,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EventualPattern {
    Finite {
        max: Option<usize>,
    },
    Cofinite {
        min: usize,
    },
    Periodic {
        mu: usize,
        pi: usize,
        cycle: Vec<bool>,
    },
    Unclassified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LosVerdict {
    Satisfied,
    Unsatisfied,
    UltrafilterDependent,
    Unclassified,
}

impl fmt::Display for LosVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LosVerdict::Satisfied => "Satisfied",
            LosVerdict::Unsatisfied => "Unsatisfied",
            LosVerdict::UltrafilterDependent => "UltrafilterDependent",
            LosVerdict::Unclassified => "Unclassified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LosReport {
    pub formula: String,
    /// States in `[0, h]` where the formula holds of the net.
    pub truth: Vec<bool>,
    pub pattern: EventualPattern,
    pub certificate: Option<PatternCert>,
    pub verdict: LosVerdict,
    /// Index in the stored prefix, if the formula is there.
    pub in_prefix: Option<usize>,
    /// Teleological truth on the window: true from some state through `h`.
    pub tele: bool,
    /// `in prefix => tele => Satisfied` on this case.
    pub chain_ok: bool,
}

/// Every value in `[0, bound)` fails `p`, so `p` forces `x >= bound`.
fn forces_at_least(
    amb: &Ambient,
    vars: &[String],
    p: &Formula,
    bound: u64,
) -> Result<bool, TypeError> {
    if p.quantifier_depth() > 0 || !p.is_modal_free() {
        return Ok(false);
    }
    for a in 0..bound {
        if amb.holds(p, vars, &[a])? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn max_numeral(phi: &Formula) -> u64 {
    phi.all_var_names()
        .iter()
        .filter_map(|n| numeral(n))
        .max()
        .unwrap_or(0)
}

fn from_truth_with_tail(truth: &[bool], tail: bool) -> EventualPattern {
    if tail {
        let min = truth.iter().rposition(|t| !t).map_or(0, |i| i + 1);
        EventualPattern::Cofinite { min }
    } else {
        EventualPattern::Finite {
            max: truth.iter().rposition(|t| *t),
        }
    }
}

/// Classifies `{ s : phi(D(s)) }` and reads off the verdict in every
/// non-principal ultrapower. `period` declares the truth set periodic from
/// `mu` with period `pi`.
pub fn eventual_los(
    net: &DpNet,
    phi: &Formula,
    period: Option<(usize, usize)>,
    h: usize,
) -> Result<LosReport, TypeError> {
    let frag = &net.frag;
    let amb = &net.ambient;
    let mut truth = Vec::with_capacity(h + 1);
    for s in 0..=h {
        truth.push(amb.holds(phi, &frag.vars, &net.at(s)?)?);
    }
    let prefix = frag.prefix_formulas();
    let in_prefix = prefix.iter().position(|p| p == phi);
    let neg = Formula::not(phi.clone());
    let mut pattern = EventualPattern::Unclassified;
    let mut certificate = None;
    let known = |i: usize| frag.formula(i);
    if let Some(index) = (0..=h).find(|&i| known(i).as_ref() == Some(phi)) {
        if truth[index..].iter().all(|t| *t) {
            pattern = from_truth_with_tail(&truth[..index], true);
            certificate = Some(PatternCert::InType { index });
        }
    } else if let Some(index) = (0..=h).find(|&i| known(i).as_ref() == Some(&neg)) {
        pattern = from_truth_with_tail(&truth[..index.min(truth.len())], false);
        certificate = Some(PatternCert::NegationInType { index });
    }
    if certificate.is_none()
        && frag.arity() == 1
        && phi.quantifier_depth() == 0
        && phi.is_modal_free()
    {
        // past max numeral + 1 every atom in one variable is constant
        let bound = max_numeral(phi) + 2;
        for index in 0..=h {
            let Some(p) = known(index) else { break };
            if forces_at_least(amb, &frag.vars, &p, bound)? {
                let tail = amb.holds(phi, &frag.vars, &[bound])?;
                pattern = from_truth_with_tail(&truth[..index], tail);
                certificate = Some(PatternCert::Threshold { index, bound });
                break;
            }
        }
    }
    if certificate.is_none() {
        if let Some((mu, pi)) = period {
            let pi = pi.max(1);
            let consistent = (mu..=h).all(|s| s + pi > h || truth[s] == truth[s + pi]);
            if mu + 2 * pi <= h + 1 && consistent {
                let cycle = truth[mu..mu + pi].to_vec();
                pattern = if cycle.iter().all(|t| *t) {
                    from_truth_with_tail(&truth[..mu], true)
                } else if cycle.iter().all(|t| !t) {
                    from_truth_with_tail(&truth[..mu], false)
                } else {
                    EventualPattern::Periodic { mu, pi, cycle }
                };
                certificate = Some(PatternCert::Declared);
            }
        }
    }
    let verdict = match pattern {
        EventualPattern::Cofinite { .. } => LosVerdict::Satisfied,
        EventualPattern::Finite { .. } => LosVerdict::Unsatisfied,
        EventualPattern::Periodic { .. } => LosVerdict::UltrafilterDependent,
        EventualPattern::Unclassified => LosVerdict::Unclassified,
    };
    let tele = match in_prefix {
        Some(i) => truth[i.min(h)..].iter().all(|t| *t),
        None => truth.last().copied().unwrap_or(false),
    };
    let chain_ok = verdict == LosVerdict::Unclassified
        || ((in_prefix.is_none() || tele)
            && (!tele || verdict != LosVerdict::Unsatisfied)
            && (in_prefix.is_none() || verdict == LosVerdict::Satisfied));
    Ok(LosReport {
        formula: phi.to_string(),
        truth,
        pattern,
        certificate,
        verdict,
        in_prefix,
        tele,
        chain_ok,
    })
}

/// Numerals occurring in a formula.
pub fn numerals(phi: &Formula) -> BTreeSet<u64> {
    phi.all_var_names()
        .iter()
        .filter_map(|n| numeral(n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_less_x() -> DpNet {
        d_p(&preset("n-less-x", 10).unwrap()).unwrap()
    }

    #[test]
    fn least_realizers() {
        let net = n_less_x();
        for s in 0..20 {
            assert_eq!(net.at(s).unwrap(), vec![s as u64 + 1]);
        }
        let z = d_p(&preset("zero", 3).unwrap()).unwrap();
        assert!((0..10).all(|s| z.at(s).unwrap() == vec![0]));
    }

    #[test]
    fn contradictory_prefix() {
        let e = d_p(&preset("contradiction", 2).unwrap()).unwrap_err();
        match e {
            TypeError::PrefixUnrealizable { s, subset, .. } => {
                assert_eq!(s, 1);
                assert_eq!(subset.len(), 2);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn pair_types_use_the_fixed_enumeration() {
        let f = TypeFragment::new(&["x", "y"], &["lt(x, y)", "lt(1, x)"], &[], 2).unwrap();
        let net = d_p(&f).unwrap();
        assert_eq!(net.at(0).unwrap(), vec![0, 1]);
        assert_eq!(net.at(1).unwrap(), vec![2, 3]);
        assert_eq!(net.dynamic_tuple(1).unwrap().values.len(), 2);
    }

    #[test]
    fn tele_rows_start_at_their_index() {
        let net = n_less_x();
        let rows = tele_type(&net, 20).unwrap();
        assert_eq!(rows.len(), 10);
        for r in &rows {
            assert_eq!(
                (r.verdict, r.from, r.counterexample),
                (Verdict::True, r.index, None)
            );
        }
        assert_eq!(rows[5].formula, "lt(5, x)");
    }

    #[test]
    fn corrupted_values_are_caught() {
        let net = n_less_x();
        let rows = tele_values(
            net.fragment(),
            net.ambient(),
            |s| Ok(vec![if s == 7 { 3 } else { s as u64 + 1 }]),
            20,
        )
        .unwrap();
        assert_eq!(rows[5].counterexample, Some(7));
        assert_eq!(rows[5].verdict, Verdict::Unknown(20));
        assert_eq!(rows[8].counterexample, None);
    }

    #[test]
    fn eventual_patterns() {
        let net = n_less_x();
        let frag = net.fragment().clone();
        let five = eventual_los(&net, &frag.parse("lt(5, x)").unwrap(), None, 20).unwrap();
        assert_eq!(five.pattern, EventualPattern::Cofinite { min: 5 });
        assert_eq!(five.verdict, LosVerdict::Satisfied);
        assert!(five.chain_ok && five.tele && five.in_prefix == Some(5));

        let three = eventual_los(&net, &frag.parse("x = 3").unwrap(), None, 20).unwrap();
        assert_eq!(three.pattern, EventualPattern::Finite { max: Some(2) });
        assert_eq!(
            three.certificate,
            Some(PatternCert::Threshold { index: 4, bound: 5 })
        );
        assert_eq!(three.verdict, LosVerdict::Unsatisfied);

        let even = frag.parse("exists y add(y, y, x)").unwrap();
        let e = eventual_los(&net, &even, Some((0, 2)), 20).unwrap();
        assert_eq!(
            e.pattern,
            EventualPattern::Periodic {
                mu: 0,
                pi: 2,
                cycle: vec![false, true]
            }
        );
        assert_eq!(e.verdict, LosVerdict::UltrafilterDependent);
        assert_eq!(
            eventual_los(&net, &even, None, 20).unwrap().verdict,
            LosVerdict::Unclassified
        );
        // a wrong declaration is rejected
        assert_eq!(
            eventual_los(&net, &even, Some((0, 3)), 20).unwrap().verdict,
            LosVerdict::Unclassified
        );
    }

    #[test]
    fn ambient_segments() {
        let amb = Ambient::default();
        let f = TypeFragment::new(&["x"], &[], &[], 0).unwrap();
        let succ = f.parse("exists y S(x, y)").unwrap();
        assert!(amb.holds(&succ, &f.vars, &[40]).unwrap());
        let sq = f.parse("exists y mul(y, y, x)").unwrap();
        assert!(amb.holds(&sq, &f.vars, &[36]).unwrap());
        assert!(!amb.holds(&sq, &f.vars, &[37]).unwrap());
        assert!(matches!(
            amb.holds(
                &f.parse("exists y exists z mul(y, z, x)").unwrap(),
                &f.vars,
                &[100]
            ),
            Err(TypeError::SegmentTooLarge { .. })
        ));
    }

    #[test]
    fn type_files() {
        let f = parse_type("# n < x\nvars x\nschema lt({i}, x)\nnot Z(x)\n", 4).unwrap();
        assert_eq!(
            f.prefix_formulas()
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>(),
            ["not Z(x)", "lt(0, x)", "lt(1, x)", "lt(2, x)"]
        );
        assert!(matches!(
            parse_type("vars x\nlt(y, x)\n", 2),
            Err(TypeError::FreeVariable { line: 2, .. })
        ));
        assert!(matches!(
            parse_type("lt(1, x)\n", 2),
            Err(TypeError::Syntax { .. })
        ));
    }
}
