use std::collections::BTreeSet;
use std::fs;

use clap::Args;
use serde_json::{json, to_value, Value};

use devmodal::checker::sweeps::{
    cmp_sweep, converge_sweep, dynsub_sweep, fork_g_check, mirroring_sweep, tele_sweep, SweepReport,
};
use devmodal::checker::{
    bind_by_name, curated_pairs, holds_everywhere, reflection_dev, satisfies, sigma2_certificate,
    tele as tele_report, verify_sigma2_exhaustive, ReflectionFormula, Schema, Sigma2Outcome,
};
use devmodal::devmodel::{parse_dev_model, DevelopmentModel};
use devmodal::eval::Assignment;
use devmodal::forcing::{force_sweep, generic_sweep};
use devmodal::logic::{
    classify, dyn_sort, dynamic_substitute, parse_formula, potentialist_translate, Formula,
    Signature, Var, WrapMode,
};
use devmodal::omega::sweeps::{bounded_soundness_sweep, lasso_exactness_sweep};
use devmodal::omega::{
    bounded_satisfies, cross_check_unrolled, lasso_holds, lasso_satisfies, parse_lasso, Lasso,
    Verdict as BVerdict,
};
use devmodal::reals::{
    cauchy_convergent, cauchy_equiv, eval_equiv, eval_rho, eval_rho_omega, grid_model,
    preset as real_preset, small_grid, Verdict,
};
use devmodal::revision::sweeps::revision_sweep;
use devmodal::revision::{
    bind_sentences, image_tabulation, multi_root, parse_network, revision_sequence,
    truth_signature, SentenceNetwork,
};
use devmodal::structures::{parse_structure, Elem, FiniteStructure};
use devmodal::types::{
    d_p, eventual_los, parse_type, preset as type_preset, tele_type, LosVerdict,
};

use crate::report::Report;
use crate::Common;

type Res = Result<Report, String>;

fn read(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
}

fn parse_in(text: &str, sig: &Signature) -> Result<Formula, String> {
    parse_formula(text, sig).map_err(|e| format!("formula {text:?}: {e}"))
}

fn sweep_line(r: &mut Report, s: &SweepReport) {
    let detail = format!(
        "{} checked, {} skipped, seed {}",
        s.checked, s.skipped, s.seed
    );
    r.verdict(&s.name, s.passed(), detail);
    for f in &s.failures {
        r.line(format!(
            "  witness: {} case {} seed {}: {}",
            s.name, f.case, s.seed, f.detail
        ));
    }
    if !s.notes.is_empty() {
        r.line(format!(
            "  {} notes outside the property's hypotheses",
            s.notes.len()
        ));
    }
}

#[derive(Args)]
pub struct ModelArgs {
    /// Development model file.
    #[arg(long, conflicts_with = "lasso")]
    pub model: Option<String>,
    /// Lasso file.
    #[arg(long)]
    pub lasso: Option<String>,
}

enum Loaded {
    Dev(DevelopmentModel),
    Lasso(Lasso),
}

impl ModelArgs {
    fn load(&self) -> Result<Loaded, String> {
        match (&self.model, &self.lasso) {
            (Some(p), _) => parse_dev_model(&read(p)?)
                .map(Loaded::Dev)
                .map_err(|e| format!("{p}: {e}")),
            (None, Some(p)) => parse_lasso(&read(p)?)
                .map(Loaded::Lasso)
                .map_err(|e| format!("{p}: {e}")),
            (None, None) => Err("one of --model or --lasso is required".into()),
        }
    }
}

#[derive(Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: ModelArgs,
    #[arg(long)]
    pub formula: String,
    /// Evaluate at one state (a name, or an index for lassos) instead of
    /// every state containing the parameters.
    #[arg(long)]
    pub state: Option<String>,
}

pub fn check(_c: &Common, a: &CheckArgs) -> Res {
    let mut r = Report::new("check");
    let (holds, where_) = match a.input.load()? {
        Loaded::Dev(m) => {
            let phi = parse_in(&a.formula, m.signature())?;
            let asg = bind_by_name(&m, &phi).map_err(|e| e.to_string())?;
            match &a.state {
                Some(s) => {
                    let i = m.frame().index_of(s).ok_or(format!("no state named {s}"))?;
                    (
                        satisfies(&m, i, &phi, &asg).map_err(|e| e.to_string())?,
                        format!("state {s}"),
                    )
                }
                None => (
                    holds_everywhere(&m, &phi, &asg).map_err(|e| e.to_string())?,
                    "all parameter states".into(),
                ),
            }
        }
        Loaded::Lasso(l) => {
            let phi = parse_in(&a.formula, l.signature())?;
            let asg = bind_by_name(&l, &phi).map_err(|e| e.to_string())?;
            match &a.state {
                Some(s) => {
                    let n: usize = s
                        .parse()
                        .map_err(|_| format!("lasso states are indices, got {s}"))?;
                    (
                        lasso_satisfies(&l, n, &phi, &asg).map_err(|e| e.to_string())?,
                        format!("state {n}"),
                    )
                }
                None => (
                    lasso_holds(&l, &phi, &asg).map_err(|e| e.to_string())?,
                    "all parameter states".into(),
                ),
            }
        }
    };
    r.line(format!("{} at {where_}: {holds}", a.formula));
    r.data = json!({ "formula": a.formula, "at": where_, "holds": holds });
    Ok(r)
}

pub fn validate(a: &ModelArgs) -> Res {
    let mut r = Report::new("validate");
    let v = match a.load()? {
        Loaded::Dev(m) => m.validate(),
        Loaded::Lasso(l) => l.validate(),
    };
    for x in &v.violations {
        r.line(format!("violation: {x}"));
    }
    for w in &v.warnings {
        r.line(format!("warning: {w}"));
    }
    r.verdict(
        "valid",
        v.is_valid(),
        format!(
            "{} violations, {} warnings",
            v.violations.len(),
            v.warnings.len()
        ),
    );
    r.data = to_value(&v).expect("serializable");
    Ok(r)
}

#[derive(Args)]
pub struct TranslateArgs {
    #[arg(long)]
    pub formula: Option<String>,
    /// Structure file supplying the signature.
    #[arg(long)]
    pub structure: Option<String>,
    #[command(flatten)]
    pub input: ModelArgs,
    /// Dynamic substitution `x,y:xi` instead of the potentialist translation.
    #[arg(long)]
    pub dynsub: Option<String>,
    /// Wrap every atom rather than only those mentioning the tuple.
    #[arg(long)]
    pub full: bool,
    /// Run the dynamic substitution sweep instead.
    #[arg(long)]
    pub sweep: bool,
}

pub fn translate(c: &Common, a: &TranslateArgs) -> Res {
    let mut r = Report::new("translate");
    if a.sweep {
        sweep_line(&mut r, &dynsub_sweep(c.seed, c.count.unwrap_or(500)));
        return Ok(r);
    }
    let text = a.formula.as_ref().ok_or("--formula is required")?;
    let sig: Signature = match (
        &a.structure,
        a.input.model.is_some() || a.input.lasso.is_some(),
    ) {
        (Some(p), _) => parse_structure(&read(p)?)
            .map_err(|e| format!("{p}: {e}"))?
            .signature()
            .clone(),
        (None, true) => match a.input.load()? {
            Loaded::Dev(m) => m.signature().clone(),
            Loaded::Lasso(l) => l.signature().clone(),
        },
        (None, false) => return Err("one of --structure, --model or --lasso is required".into()),
    };
    let phi = parse_in(text, &sig)?;
    let out = match &a.dynsub {
        None => potentialist_translate(&phi).map_err(|e| e.to_string())?,
        Some(spec) => {
            let (xs, xi) = spec.split_once(':').ok_or("--dynsub expects x,y:xi")?;
            let xs: Vec<Var> = xs.split(',').map(|x| Var::stat(x.trim())).collect();
            let xi = Var::new(xi.trim(), dyn_sort(xs.len()));
            let mode = if a.full {
                WrapMode::Full
            } else {
                WrapMode::Mentioning
            };
            dynamic_substitute(&phi, &xs, &xi, mode).map_err(|e| e.to_string())?
        }
    };
    let cl = classify(&phi, &sig);
    r.line(out.to_string());
    r.data = json!({
        "input": phi.to_string(),
        "output": out.to_string(),
        "literal": cl.literal,
        "sigma2": cl.sigma2,
        "static_language": cl.static_language,
    });
    Ok(r)
}

pub fn mirror(c: &Common) -> Report {
    let mut r = Report::new("mirror");
    let n = c.count.unwrap_or(1100);
    let m = mirroring_sweep(c.seed, n);
    let v = converge_sweep(c.seed, n);
    sweep_line(&mut r, &m);
    sweep_line(&mut r, &v);
    r.data = json!([m, v]);
    r
}

pub fn cmp(c: &Common) -> Res {
    let mut r = Report::new("cmp");
    let s = cmp_sweep(c.seed, c.count.unwrap_or(500));
    sweep_line(&mut r, &s);
    let fork = fork_g_check().map_err(|e| e.to_string())?;
    let g: Vec<_> = fork
        .violations
        .iter()
        .filter(|v| v.schema == Schema::G)
        .collect();
    r.verdict(
        "fork violates G",
        !g.is_empty(),
        format!("{} of {} instances", g.len(), fork.instances),
    );
    if let Some(v) = g.first() {
        r.line(format!("  {} at state {}", v.instance, v.state));
    }
    r.data = json!({ "sweep": s, "fork": fork });
    Ok(r)
}

#[derive(Args)]
pub struct TeleArgs {
    /// Development model for a single report; without it, run the sweep.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, requires = "model")]
    pub formula: Option<String>,
}

pub fn tele(c: &Common, a: &TeleArgs) -> Res {
    let mut r = Report::new("tele");
    let Some(path) = &a.model else {
        let s = tele_sweep(c.seed, c.count.unwrap_or(500));
        sweep_line(&mut r, &s);
        r.data = to_value(&s).expect("serializable");
        return Ok(r);
    };
    let m = parse_dev_model(&read(path)?).map_err(|e| format!("{path}: {e}"))?;
    let text = a
        .formula
        .as_ref()
        .ok_or("--formula is required with --model")?;
    let phi = parse_in(text, m.signature())?;
    let asg = bind_by_name(&m, &phi).map_err(|e| e.to_string())?;
    let t = tele_report(&m, &phi, &asg, Some(m.frame().names())).map_err(|e| e.to_string())?;
    r.table(
        &["state", "witness"],
        t.rows
            .iter()
            .map(|row| vec![row.state.clone(), row.witness.clone().unwrap_or("-".into())])
            .collect(),
    );
    r.line(format!("dia box {}: {}", t.formula, t.verdict));
    r.data = to_value(&t).expect("serializable");
    Ok(r)
}

#[derive(Args)]
pub struct Sigma2Args {
    /// Structure file; without it, run the curated pairs.
    #[arg(long)]
    pub structure: Option<String>,
    #[arg(long, requires = "structure")]
    pub formula: Option<String>,
}

pub fn sigma2(a: &Sigma2Args) -> Res {
    let mut r = Report::new("sigma2");
    let pairs: Vec<(String, FiniteStructure, Formula)> = match &a.structure {
        None => curated_pairs(),
        Some(p) => {
            let u = parse_structure(&read(p)?).map_err(|e| format!("{p}: {e}"))?;
            let phi = parse_in(
                a.formula
                    .as_ref()
                    .ok_or("--formula is required with --structure")?,
                u.signature(),
            )?;
            vec![(p.clone(), u, phi)]
        }
    };
    let mut rows = Vec::new();
    let mut data = Vec::new();
    let mut passed = 0;
    for (name, u, phi) in &pairs {
        let cert = sigma2_certificate(u, phi).map_err(|e| e.to_string())?;
        let verified = verify_sigma2_exhaustive(u, phi).map_err(|e| e.to_string())?;
        let (witness, state) = match &cert {
            Sigma2Outcome::Certificate(c) => {
                let w: Vec<String> = c
                    .witnesses
                    .iter()
                    .map(|(v, e)| format!("{v}={e}"))
                    .collect();
                (w.join(" "), c.state.clone())
            }
            Sigma2Outcome::NoCertificate => ("-".into(), "-".into()),
        };
        let ok = matches!(cert, Sigma2Outcome::Certificate(_)) && verified;
        passed += ok as usize;
        rows.push(vec![
            name.clone(),
            phi.to_string(),
            witness,
            state,
            (1usize << u.stat().len()).to_string(),
            if ok { "PASS" } else { "FAIL" }.into(),
        ]);
        data.push(json!({ "structure": name, "formula": phi.to_string(), "certificate": cert, "verified": verified }));
    }
    r.table(
        &[
            "structure",
            "formula",
            "witnesses",
            "state",
            "states_checked",
            "status",
        ],
        rows,
    );
    r.verdict(
        "sigma2",
        passed == pairs.len(),
        format!("{passed}/{} pairs", pairs.len()),
    );
    r.data = Value::Array(data);
    Ok(r)
}

#[derive(Args)]
pub struct ReflectArgs {
    #[arg(long)]
    pub structure: String,
    /// Chain of element sets separated by `;`, ending with the whole domain.
    #[arg(long)]
    pub chain: String,
    /// Formulas to reflect (repeatable).
    #[arg(long, required = true)]
    pub formula: Vec<String>,
    /// Free variables of the formulas read as parameters, comma separated.
    #[arg(long, default_value = "")]
    pub vars: String,
    /// Parameter elements, comma separated.
    #[arg(long, default_value = "")]
    pub params: String,
}

pub fn reflect(a: &ReflectArgs) -> Res {
    let mut r = Report::new("reflect");
    let u = parse_structure(&read(&a.structure)?).map_err(|e| format!("{}: {e}", a.structure))?;
    let chain: Vec<BTreeSet<Elem>> = a
        .chain
        .split(';')
        .map(|s| s.split_whitespace().map(Elem::new).collect())
        .collect();
    let list = |s: &str| -> Vec<String> {
        s.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    };
    let vars = list(&a.vars);
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    let gamma = a
        .formula
        .iter()
        .map(|f| Ok(ReflectionFormula::new(parse_in(f, u.signature())?, &vars)))
        .collect::<Result<Vec<_>, String>>()?;
    let elems: Vec<Elem> = list(&a.params).iter().map(|p| Elem::new(p)).collect();
    let rep = reflection_dev(&u, &chain, &gamma, &elems).map_err(|e| e.to_string())?;
    r.table(
        &["formula", "params", "teleological"],
        rep.tele
            .iter()
            .map(|t| vec![t.formula.clone(), t.params.join(" "), t.verdict.to_string()])
            .collect(),
    );
    r.line(format!("states: {}", rep.model.len()));
    r.verdict(
        "reflection",
        rep.all_teleological(),
        format!("{} instances", rep.tele.len()),
    );
    r.data = json!({ "states": rep.model.len(), "nu": rep.nu, "tele": rep.tele, "nu_relation": rep.nu_relation });
    Ok(r)
}

#[derive(Args)]
pub struct ForceArgs {
    /// Name width.
    #[arg(long, default_value_t = 2)]
    pub width: usize,
    /// Largest poset for the genericity sweep; defaults to one above
    /// `--max-poset`.
    #[arg(long)]
    pub generic_max: Option<usize>,
}

pub fn force(c: &Common, a: &ForceArgs) -> Res {
    let mut r = Report::new("force");
    let max = c.max_poset.unwrap_or(4);
    let rank = c.rank.unwrap_or(2);
    let s = force_sweep(max, rank, a.width).map_err(|e| e.to_string())?;
    let mos = s.pointwise_failures == 0 && s.names_checked > 0;
    r.verdict(
        "mostowski=val",
        mos,
        format!("{} instances", s.names_checked),
    );
    r.verdict(
        "image equality",
        s.image_failures == 0,
        format!("{} ideals", s.ideals),
    );
    r.verdict("membership routes", s.route_disagreements == 0, "");
    r.verdict(
        "models valid",
        s.validation_failures == 0,
        format!("{} posets", s.posets),
    );
    r.verdict("monotone in the ideal", s.monotonicity_failures == 0, "");
    r.verdict("d_tau", s.d_tau_failures == 0, "");
    for e in &s.examples {
        r.line(format!("  witness: {e}"));
    }
    let gmax = a.generic_max.unwrap_or(max + 1);
    let g = generic_sweep(gmax).map_err(|e| e.to_string())?;
    r.verdict(
        "generic iff contains a maximal element",
        g.disagreements.is_empty(),
        format!(
            "{} ideals over {} posets, {} generic",
            g.ideals, g.posets, g.generic
        ),
    );
    for d in g.disagreements.iter().take(10) {
        r.line(format!("  witness: {d}"));
    }
    r.data = json!({ "force": s, "generic": g });
    Ok(r)
}

#[derive(Args)]
pub struct ReviseArgs {
    /// Network file, or `liar` / `truth-teller`.
    #[arg(long)]
    pub net: Option<String>,
    /// Formulas over `T` and the sentence names (repeatable); each is
    /// checked boxed at every root.
    #[arg(long)]
    pub formula: Vec<String>,
    /// Require the first two formulas to split the roots between them.
    #[arg(long)]
    pub dichotomy: bool,
    /// Print the revision sequence from this hypothesis (comma separated
    /// names, possibly empty).
    #[arg(long)]
    pub p0: Option<String>,
    /// Tabulate the revision image against the compositional checks at
    /// `--depth`.
    #[arg(long)]
    pub tabulate: bool,
    /// Run the random network sweep instead.
    #[arg(long)]
    pub sweep: bool,
}

fn load_network(spec: &str) -> Result<SentenceNetwork, String> {
    match spec {
        "liar" => Ok(SentenceNetwork::liar()),
        "truth-teller" => Ok(SentenceNetwork::truth_teller()),
        p => parse_network(&read(p)?).map_err(|e| format!("{p}: {e}")),
    }
}

pub fn revise(c: &Common, a: &ReviseArgs) -> Res {
    let mut r = Report::new("revise");
    if a.sweep {
        let s = revision_sweep(c.seed, c.count.unwrap_or(200));
        sweep_line(&mut r, &s);
        r.data = to_value(&s).expect("serializable");
        return Ok(r);
    }
    let net = load_network(a.net.as_deref().ok_or("--net is required")?)?;
    let sig = truth_signature(&net);
    if let Some(p0) = &a.p0 {
        let names: Vec<&str> = p0
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let h = net.hypothesis(&names).map_err(|e| e.to_string())?;
        let seq = revision_sequence(&net, h);
        r.table(
            &["step", "hypothesis"],
            seq.hyps
                .iter()
                .enumerate()
                .map(|(i, h)| vec![i.to_string(), h.show(&net)])
                .collect(),
        );
        r.line(format!("transient {} period {}", seq.mu, seq.pi));
        r.data = json!({ "mu": seq.mu, "pi": seq.pi, "hyps": seq.hyps.iter().map(|h| h.show(&net)).collect::<Vec<_>>() });
        return Ok(r);
    }
    if a.tabulate {
        let t = image_tabulation(&net, c.depth.unwrap_or(1)).map_err(|e| e.to_string())?;
        r.table(
            &["hypothesis", "in_image", "battery", "clause_violations"],
            t.rows
                .iter()
                .map(|row| {
                    vec![
                        row.q.clone(),
                        row.in_image.to_string(),
                        row.battery_pass.to_string(),
                        row.uct_violations.to_string(),
                    ]
                })
                .collect(),
        );
        r.verdict(
            "battery sound",
            t.sound(),
            format!("{} mismatches", t.mismatches().len()),
        );
        r.data = to_value(&t).expect("serializable");
        return Ok(r);
    }
    if a.formula.is_empty() {
        return Err("give --formula, --p0, --tabulate or --sweep".into());
    }
    let formulas = a
        .formula
        .iter()
        .map(|f| parse_in(f, &sig))
        .collect::<Result<Vec<_>, _>>()?;
    for f in &formulas {
        bind_sentences(&net, f).map_err(|e| e.to_string())?;
    }
    let rep = multi_root(&net, &formulas).map_err(|e| e.to_string())?;
    let mut header = vec!["p0".to_string(), "mu".into(), "pi".into()];
    header.extend((0..formulas.len()).map(|i| format!("box phi{i}")));
    r.header = header;
    r.rows = rep
        .roots
        .iter()
        .map(|row| {
            let mut v = vec![row.p0.clone(), row.mu.to_string(), row.pi.to_string()];
            v.extend(row.boxed.iter().map(|b| b.to_string()));
            v
        })
        .collect();
    for (i, f) in rep.formulas.iter().enumerate() {
        r.line(format!("phi{i} = {f}"));
    }
    if a.dichotomy {
        if formulas.len() < 2 {
            return Err("--dichotomy needs two formulas".into());
        }
        r.verdict(
            "dichotomy",
            rep.dichotomy(0, 1),
            format!("{} roots", rep.roots.len()),
        );
    } else {
        for i in 0..formulas.len() {
            r.verdict(
                &format!("phi{i}"),
                rep.everywhere(i),
                format!("all {} roots", rep.roots.len()),
            );
        }
    }
    r.data = to_value(&rep).expect("serializable");
    Ok(r)
}

#[derive(Args)]
pub struct RealsArgs {
    /// Preset: leibniz, machin, const:<q>, dyadic-sqrt2.
    #[arg(long)]
    pub net: Option<String>,
    /// Print the first N values and bounds.
    #[arg(long)]
    pub table: Option<usize>,
    /// Also evaluate the convergence formula.
    #[arg(long)]
    pub rho: bool,
    /// Compare with another preset.
    #[arg(long)]
    pub equiv: Option<String>,
    /// Run the exhaustive check on the grid {0, 1/2, 1} instead.
    #[arg(long)]
    pub grid: bool,
}

fn show_verdict(v: &Verdict) -> String {
    match v {
        Verdict::Certified { detail } => format!("certified: {detail}"),
        Verdict::Refuted { eps, at } => {
            format!("refuted: spread >= {eps} at states {} and {}", at.0, at.1)
        }
        Verdict::Unknown { horizon } => format!("unknown up to {horizon}"),
        Verdict::BrokenCertificate { detail } => format!("broken certificate: {detail}"),
    }
}

pub fn reals(c: &Common, a: &RealsArgs) -> Res {
    let mut r = Report::new("reals");
    let h = c.horizon.unwrap_or(200);
    if a.grid {
        let g = grid_model(&small_grid()).map_err(|e| e.to_string())?;
        let all = g.all_individuals();
        let mut agree = 0;
        for d in &all {
            agree += eval_rho(&g, d).map_err(|e| e.to_string())?.agree() as usize;
        }
        r.verdict(
            "rho chain",
            agree == all.len(),
            format!("{agree}/{} individuals", all.len()),
        );
        let mut pairs = 0;
        let mut matched = 0;
        for x in &all {
            for y in &all {
                let (lit, v) = eval_equiv(&g, x, y).map_err(|e| e.to_string())?;
                pairs += 1;
                matched += (lit == v.is_certified()) as usize;
            }
        }
        r.verdict(
            "equivalence",
            matched == pairs,
            format!("{matched}/{pairs} pairs"),
        );
        return Ok(r);
    }
    let name = a.net.as_deref().ok_or("--net is required")?;
    let net = real_preset(name).map_err(|e| e.to_string())?;
    let n = a
        .table
        .unwrap_or(if a.rho || a.equiv.is_some() { 0 } else { 10 });
    if n > 0 {
        r.table(
            &["s", "value", "bound"],
            net.table(n)
                .into_iter()
                .enumerate()
                .map(|(s, (v, b))| {
                    vec![
                        s.to_string(),
                        v.to_string(),
                        b.map_or("-".into(), |b| b.to_string()),
                    ]
                })
                .collect(),
        );
    }
    let conv = cauchy_convergent(&net, h);
    r.line(format!("cauchy: {}", show_verdict(&conv)));
    if matches!(conv, Verdict::BrokenCertificate { .. }) {
        r.ok = false;
    }
    let mut data = json!({ "net": name, "cauchy": conv });
    if a.rho {
        let rho = eval_rho_omega(&net, h).map_err(|e| e.to_string())?;
        match rho.literal {
            Some(v) => r.line(format!("rho literal: {v}")),
            None => r.line("rho literal: no finite presentation"),
        }
        r.verdict(
            "rho agrees with the net",
            rho.agree(),
            show_verdict(&rho.verdict),
        );
        data["rho"] = to_value(&rho).expect("serializable");
    }
    if let Some(other) = &a.equiv {
        let o = real_preset(other).map_err(|e| e.to_string())?;
        let v = cauchy_equiv(&net, &o, h).map_err(|e| e.to_string())?;
        r.line(format!("{name} ~ {other}: {}", show_verdict(&v)));
        if matches!(v, Verdict::BrokenCertificate { .. }) {
            r.ok = false;
        }
        data["equiv"] = to_value(&v).expect("serializable");
    }
    r.data = data;
    Ok(r)
}

#[derive(Args)]
pub struct TypesArgs {
    /// Type file, or a preset: n-less-x, zero, contradiction.
    #[arg(long = "type")]
    pub type_: String,
    /// Length of the stored prefix.
    #[arg(long, default_value_t = 10)]
    pub prefix: usize,
    /// Formulas to classify along the net (repeatable).
    #[arg(long)]
    pub formula: Vec<String>,
    /// Declared periodicity `mu,pi` of truth sets not otherwise certified.
    #[arg(long)]
    pub period: Option<String>,
}

pub fn types(c: &Common, a: &TypesArgs) -> Res {
    let mut r = Report::new("types");
    let h = c.horizon.unwrap_or(20);
    let frag = match type_preset(&a.type_, a.prefix) {
        Ok(f) => f,
        Err(_) => {
            parse_type(&read(&a.type_)?, a.prefix).map_err(|e| format!("{}: {e}", a.type_))?
        }
    };
    let period = match &a.period {
        None => None,
        Some(p) => {
            let (m, q) = p.split_once(',').ok_or("--period expects mu,pi")?;
            Some((
                m.trim().parse().map_err(|_| "bad mu")?,
                q.trim().parse().map_err(|_| "bad pi")?,
            ))
        }
    };
    let net = d_p(&frag).map_err(|e| e.to_string())?;
    let vals = (0..=h)
        .map(|s| net.at(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let show = |t: &Vec<u64>| {
        t.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    r.line(format!(
        "D_p: {}",
        vals.iter().map(show).collect::<Vec<_>>().join(", ")
    ));
    let rows = tele_type(&net, h).map_err(|e| e.to_string())?;
    let mut table = Vec::new();
    for t in &rows {
        let v = match t.verdict {
            BVerdict::True => "True".to_string(),
            BVerdict::False => "False".into(),
            BVerdict::Unknown(h) => format!("Unknown({h})"),
        };
        table.push(vec![
            format!("p{}", t.index),
            t.formula.clone(),
            v,
            t.from.to_string(),
            t.counterexample.map_or("-".into(), |x| x.to_string()),
        ]);
    }
    r.table(
        &["index", "formula", "tele", "from", "counterexample"],
        table,
    );
    let all_true = rows.iter().all(|t| t.verdict == BVerdict::True);
    r.verdict(
        "tele",
        all_true,
        format!("{} prefix formulas up to {h}", rows.len()),
    );
    let mut los = Vec::new();
    for f in &a.formula {
        let phi = frag.parse(f).map_err(|e| e.to_string())?;
        let rep = eventual_los(&net, &phi, period, h).map_err(|e| e.to_string())?;
        let pattern = serde_json::to_string(&rep.pattern).expect("serializable");
        r.line(format!("{}: {} via {}", rep.formula, rep.verdict, pattern));
        r.verdict(&format!("chain for {}", rep.formula), rep.chain_ok, "");
        if rep.verdict == LosVerdict::Unclassified {
            r.line("  unclassified: declare --period or extend the horizon");
        }
        los.push(rep);
    }
    r.data = json!({ "values": vals, "tele": rows, "los": los });
    Ok(r)
}

#[derive(Args)]
pub struct OmegaArgs {
    #[arg(long)]
    pub lasso: Option<String>,
    /// Stream preset: arith-basic, rationals-grid:<k>.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub formula: Option<String>,
    /// Run the lasso and bounded-checker sweeps instead.
    #[arg(long)]
    pub sweep: bool,
}

pub fn omega(c: &Common, a: &OmegaArgs) -> Res {
    let mut r = Report::new("omega");
    let h = c.horizon.unwrap_or(25);
    if a.sweep {
        let n = c.count.unwrap_or(200);
        let l = lasso_exactness_sweep(c.seed, n, c.depth.unwrap_or(2));
        let b = bounded_soundness_sweep(c.seed, n, h);
        sweep_line(&mut r, &l);
        sweep_line(&mut r, &b);
        r.data = json!([l, b]);
        return Ok(r);
    }
    let text = a.formula.as_ref().ok_or("--formula is required")?;
    if let Some(p) = &a.lasso {
        let l = parse_lasso(&read(p)?).map_err(|e| format!("{p}: {e}"))?;
        let phi = parse_in(text, l.signature())?;
        let asg = bind_by_name(&l, &phi).map_err(|e| e.to_string())?;
        let holds = lasso_holds(&l, &phi, &asg).map_err(|e| e.to_string())?;
        let cross = cross_check_unrolled(&l, &phi, &asg).map_err(|e| e.to_string())?;
        r.line(format!("{text}: {holds}"));
        r.verdict(
            "unrolled agrees",
            cross.is_none(),
            cross.map_or(String::new(), |s| format!("state {s}")),
        );
        r.data = json!({ "holds": holds, "disagreement": cross });
        return Ok(r);
    }
    let name = a
        .preset
        .as_deref()
        .ok_or("one of --lasso or --preset is required")?;
    let stream = devmodal::omega::preset(name).map_err(|e| e.to_string())?;
    let phi = parse_in(text, &stream.signature())?;
    let mut asg = Assignment::new();
    for v in phi.free_vars() {
        asg.insert(v.name.clone(), Elem::new(&v.name));
    }
    let b = bounded_satisfies(stream.as_ref(), h, &phi, &asg);
    let verdict = match b.verdict {
        BVerdict::True => "True".to_string(),
        BVerdict::False => "False".into(),
        BVerdict::Unknown(h) => format!("Unknown({h})"),
    };
    r.table(
        &["state", "formula", "certificate"],
        b.certificate
            .iter()
            .take(20)
            .map(|e| {
                vec![
                    e.state.to_string(),
                    e.formula.clone(),
                    format!("{:?}", e.kind),
                ]
            })
            .collect(),
    );
    r.line(format!(
        "{text} on {name} at H={h}: {verdict} ({} certificate entries)",
        b.certificate.len()
    ));
    r.data = to_value(&b).expect("serializable");
    Ok(r)
}
