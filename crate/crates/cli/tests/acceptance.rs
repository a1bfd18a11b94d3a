//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;

use devmodal::checker::sweeps::{
    cmp_sweep, converge_sweep, fork_g_check, mirroring_sweep, tele_sweep,
};
use devmodal::checker::{
    curated_pairs, sigma2_certificate, verify_sigma2_exhaustive, Schema, Sigma2Outcome,
};
use devmodal::eval::Assignment;
use devmodal::forcing::{force_sweep, generic_sweep};
use devmodal::logic::parse_formula;
use devmodal::omega::{bounded_satisfies, preset as stream_preset, Verdict as BVerdict};
use devmodal::revision::sweeps::revision_sweep;
use devmodal::revision::{multi_root, truth_signature, SentenceNetwork};
use devmodal::types::{
    d_p, eventual_los, preset as type_preset, tele_type, EventualPattern, LosVerdict,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn devmodal(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_devmodal"))
        .args(args)
        .env("DEVMODAL_THREADS", "1")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    if e > limit {
        Err(format!("{what} took {e:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn ac01_leibniz_table() -> Outcome {
    let t = Instant::now();
    let (code, out) = devmodal(&[
        "reals", "--net", "leibniz", "--table", "4", "--format", "json",
    ]);
    within(t, Duration::from_secs(1), "table")?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let rows: Vec<(String, String)> = v["rows"]
        .as_array()
        .ok_or("no rows")?
        .iter()
        .map(|r| {
            (
                r[1].as_str().unwrap_or("").to_string(),
                r[2].as_str().unwrap_or("").to_string(),
            )
        })
        .collect();
    let want = [
        ("4", "4/3"),
        ("8/3", "4/5"),
        ("52/15", "4/7"),
        ("304/105", "4/9"),
    ];
    let want: Vec<(String, String)> = want
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    if code != 0 || rows != want {
        return Err(format!("exit {code}, rows {rows:?}"));
    }
    Ok("(4, 4/3) (8/3, 4/5) (52/15, 4/7) (304/105, 4/9)".into())
}

fn ac02_mirroring() -> Outcome {
    let t = Instant::now();
    let s = mirroring_sweep(0, 1100);
    within(t, Duration::from_secs(60), "sweep")?;
    if s.checked < 1000 || !s.passed() {
        return Err(format!(
            "{} checked, {} failures",
            s.checked,
            s.failures.len()
        ));
    }
    Ok(format!("{} cases, 0 disagreements", s.checked))
}

fn ac03_converge() -> Outcome {
    let s = converge_sweep(0, 1100);
    if s.checked < 1000 || !s.passed() {
        return Err(format!(
            "{} checked, {} failures",
            s.checked,
            s.failures.len()
        ));
    }
    Ok(format!("{} cases, 0 disagreements", s.checked))
}

fn ac04_cmp() -> Outcome {
    let s = cmp_sweep(0, 500);
    if s.checked < 500 || !s.passed() {
        return Err(format!(
            "{} checked, {} violations",
            s.checked,
            s.failures.len()
        ));
    }
    let fork = fork_g_check().map_err(|e| e.to_string())?;
    if !fork.violations.iter().any(|v| v.schema == Schema::G) {
        return Err("the fork frame validated G".into());
    }
    Ok(format!("{} models, fork violates G", s.checked))
}

fn ac05_tele() -> Outcome {
    let s = tele_sweep(0, 500);
    if s.checked == 0 || !s.passed() {
        return Err(format!(
            "{} checked, {} failures",
            s.checked,
            s.failures.len()
        ));
    }
    Ok(format!("{} models, 0 disagreements", s.checked))
}

fn ac06_forcing() -> Outcome {
    let t = Instant::now();
    let f = force_sweep(4, 2, 2).map_err(|e| e.to_string())?;
    if !f.passed() {
        return Err(format!("{:?}", f.examples));
    }
    let g = generic_sweep(5).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(300), "forcing")?;
    if !g.disagreements.is_empty() {
        return Err(format!(
            "genericity: {:?}",
            &g.disagreements[..g.disagreements.len().min(3)]
        ));
    }
    Ok(format!(
        "{} posets, {} ideals, {} names; genericity on {} ideals",
        f.posets, f.ideals, f.names_checked, g.ideals
    ))
}

fn ac07_revision() -> Outcome {
    let liar = SentenceNetwork::liar();
    let phi = parse_formula(
        "box (dia T(lambda) and dia not T(lambda))",
        &truth_signature(&liar),
    )
    .map_err(|e| e.to_string())?;
    let r = multi_root(&liar, &[phi]).map_err(|e| e.to_string())?;
    if r.roots.iter().any(|row| row.pi != 2 || !row.boxed[0]) {
        return Err(format!(
            "liar roots {:?}",
            r.roots
                .iter()
                .map(|x| (x.pi, x.boxed[0]))
                .collect::<Vec<_>>()
        ));
    }
    let tt = SentenceNetwork::truth_teller();
    let sig = truth_signature(&tt);
    let fs = ["box T(tau)", "box not T(tau)"]
        .iter()
        .map(|f| parse_formula(f, &sig))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let r = multi_root(&tt, &fs).map_err(|e| e.to_string())?;
    let xor = r.roots.iter().all(|row| row.boxed[0] != row.boxed[1]);
    if !xor || !r.dichotomy(0, 1) {
        return Err("truth-teller roots do not split".into());
    }
    let s = revision_sweep(0, 200);
    if s.checked < 200 || !s.passed() {
        return Err(format!(
            "sweep {} checked, {} failures",
            s.checked,
            s.failures.len()
        ));
    }
    Ok(format!(
        "liar period 2 from both roots; truth-teller splits; {} networks",
        s.checked
    ))
}

fn ac08_sigma2() -> Outcome {
    let pairs = curated_pairs();
    if pairs.len() != 20 {
        return Err(format!("{} pairs", pairs.len()));
    }
    for (name, u, phi) in &pairs {
        if u.stat().len() > 4 {
            return Err(format!("{name} has {} elements", u.stat().len()));
        }
        let cert = sigma2_certificate(u, phi).map_err(|e| e.to_string())?;
        if !matches!(cert, Sigma2Outcome::Certificate(_)) {
            return Err(format!("no certificate for {phi} on {name}"));
        }
        if !verify_sigma2_exhaustive(u, phi).map_err(|e| e.to_string())? {
            return Err(format!("exhaustive check fails for {phi} on {name}"));
        }
    }
    Ok("20/20 pairs certified and verified".into())
}

fn ac09_arith() -> Outcome {
    let s = stream_preset("arith-basic").map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for f in [
        "box forall x dia exists y S(x,y)",
        "box exists y forall x le(x,y)",
    ] {
        let phi = parse_formula(f, &s.signature()).map_err(|e| e.to_string())?;
        let b = bounded_satisfies(s.as_ref(), 25, &phi, &Assignment::new());
        if b.verdict != BVerdict::True || b.certificate.is_empty() {
            return Err(format!("{f}: {:?}", b.verdict));
        }
        sizes.push(b.certificate.len());
    }
    Ok(format!(
        "both True at H=25, certificates of {} and {} entries",
        sizes[0], sizes[1]
    ))
}

fn ac10_types() -> Outcome {
    let frag = type_preset("n-less-x", 10).map_err(|e| e.to_string())?;
    let net = d_p(&frag).map_err(|e| e.to_string())?;
    let rows = tele_type(&net, 20).map_err(|e| e.to_string())?;
    if rows.len() != 10
        || rows
            .iter()
            .any(|r| r.verdict != BVerdict::True || r.from != r.index)
    {
        return Err("tele rows not True from their own index".into());
    }
    let cases = [
        ("lt(5, x)", None, LosVerdict::Satisfied),
        ("x = 3", None, LosVerdict::Unsatisfied),
        (
            "exists y add(y, y, x)",
            Some((0, 2)),
            LosVerdict::UltrafilterDependent,
        ),
    ];
    for (f, period, want) in cases {
        let phi = frag.parse(f).map_err(|e| e.to_string())?;
        let r = eventual_los(&net, &phi, period, 20).map_err(|e| e.to_string())?;
        if r.verdict != want || !r.chain_ok {
            return Err(format!("{f}: {} (chain {})", r.verdict, r.chain_ok));
        }
        if f == "x = 3" && r.pattern != (EventualPattern::Finite { max: Some(2) }) {
            return Err(format!("x = 3: truth set {:?}", r.pattern));
        }
    }
    for i in 0..10 {
        let r = eventual_los(
            &net,
            frag.formula(i).as_ref().ok_or("missing p_i")?,
            None,
            20,
        )
        .map_err(|e| e.to_string())?;
        if r.in_prefix != Some(i) || r.verdict != LosVerdict::Satisfied || !r.chain_ok {
            return Err(format!("p{i}: {}", r.verdict));
        }
    }
    Ok("tele True from i for p_0..p_9; Satisfied, Unsatisfied, UltrafilterDependent".into())
}

fn ac11_determinism() -> Outcome {
    let runs: [&[&str]; 6] = [
        &[
            "mirror", "--count", "300", "--seed", "7", "--format", "json",
        ],
        &["cmp", "--count", "100", "--seed", "7", "--format", "json"],
        &[
            "revise", "--sweep", "--count", "100", "--seed", "7", "--format", "json",
        ],
        &[
            "omega", "--sweep", "--count", "100", "--seed", "7", "--format", "json",
        ],
        &[
            "force",
            "--max-poset",
            "3",
            "--rank",
            "2",
            "--format",
            "json",
        ],
        &[
            "types",
            "--type",
            "n-less-x",
            "--formula",
            "lt(5, x)",
            "--format",
            "csv",
        ],
    ];
    for args in runs {
        let a = devmodal(args);
        let b = devmodal(args);
        if a != b || a.0 != 0 {
            return Err(format!(
                "`devmodal {}` differs between runs or failed",
                args.join(" ")
            ));
        }
    }
    Ok(format!(
        "{} commands byte-identical across two runs",
        runs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("ac01 leibniz table", ac01_leibniz_table),
        ("ac02 semantic mirroring", ac02_mirroring),
        ("ac03 converge", ac03_converge),
        ("ac04 cmp validity", ac04_cmp),
        ("ac05 teleology collapse", ac05_tele),
        ("ac06 forcing", ac06_forcing),
        ("ac07 revision", ac07_revision),
        ("ac08 sigma2 certificates", ac08_sigma2),
        ("ac09 arithmetic potentialism", ac09_arith),
        ("ac10 types", ac10_types),
        ("ac11 determinism", ac11_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        match f() {
            Ok(detail) => println!(
                "{name}: PASS ({detail}) [{:.1}s]",
                t.elapsed().as_secs_f64()
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "{name}: FAIL ({detail}) [{:.1}s]",
                    t.elapsed().as_secs_f64()
                );
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", 11 - failed, 11);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
