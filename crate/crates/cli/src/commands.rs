use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;

use ivt_core::engine::{default_step_cap, iterate_trace};
use ivt_core::padic::{self, DigitString};
use ivt_core::preimage::{is_exactly_p_hops, PreimageResult};
use ivt_core::routing::{report_json, report_table};
use ivt_core::rule::{bijective_collatz_rules, census, enumerate_class, ClassFilter};
use ivt_core::topology::{
    canonical_form, export_dot, export_json, import_json, optimal_pairs, validate, NetworkDesign,
};
use ivt_core::{
    apply, build_network, phi, phi_k, simulate, trajectory, verify_phi, BigUint, DesignParams,
    Radix, RuleTable, Scenario,
};
use serde_json::{json, Value};

use crate::args::*;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or a domain error; exit 2.
    Invalid(String),
    /// A verification found failures; exit 3. Carries the report.
    Verification { report: String, failures: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Verification { .. } => 3,
        }
    }

    pub fn stdout(&self) -> Option<&str> {
        match self {
            CliError::Verification { report, .. } => Some(report),
            CliError::Invalid(_) => None,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) => f.write_str(msg),
            CliError::Verification { failures, .. } => write!(f, "verification failed ({failures} failures)"),
        }
    }
}

impl From<ivt_core::Error> for CliError {
    fn from(e: ivt_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<String> {
    match command {
        Command::Digits(a) => digits(a),
        Command::Rules(a) => rules(a),
        Command::Apply(a) => apply_cmd(a),
        Command::Iterate(a) => iterate(a),
        Command::Trajectory(a) => trajectory_cmd(a),
        Command::Preimage(a) => preimage(a),
        Command::Design(a) => design(a),
        Command::Pairs(a) => pairs(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Verify(a) => verify(a),
    }
}

fn number(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CliError::Invalid(format!("{s:?} is not a non-negative decimal integer")));
    }
    BigUint::from_str(s).map_err(|e| CliError::Invalid(e.to_string()))
}

fn radix(p: u32) -> Result<Radix> {
    Ok(Radix::new(p)?)
}

fn rule_from(p: Radix, index: Option<&String>, map: Option<&Vec<u8>>) -> Result<Option<RuleTable>> {
    match (index, map) {
        (Some(i), None) => Ok(Some(RuleTable::from_index(&number(i)?, p)?)),
        (None, Some(m)) => Ok(Some(RuleTable::from_map(m.clone(), p)?)),
        (None, None) => Ok(None),
        (Some(_), Some(_)) => Err(CliError::Invalid("--rule and --rule-map are exclusive".into())),
    }
}

fn required_rule(p: Radix, spec: &RuleSpec) -> Result<RuleTable> {
    rule_from(p, spec.rule.as_ref(), spec.rule_map.as_ref())?
        .ok_or_else(|| CliError::Invalid("one of --rule or --rule-map is required".into()))
}

fn map_text(rule: &RuleTable) -> String {
    rule.map().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

fn digits(a: DigitsArgs) -> Result<String> {
    let p = radix(a.p)?;
    let d = match (&a.x, &a.parse) {
        (Some(x), _) => DigitString::from_value(&number(x)?, p),
        (None, Some(text)) => padic::parse(text, p)?,
        (None, None) => return Err(CliError::Invalid("one of --x or --parse is required".into())),
    };
    let value = d.value();
    let msd = d.msd().ok();
    Ok(match a.format {
        Format::Json => pretty(&json!({
            "p": p.get(),
            "value": value.to_string(),
            "digits": d.render(),
            "digit_count": d.len(),
            "msd": msd,
        })),
        Format::Text if a.x.is_some() => format!("{}\n", d.render()),
        Format::Text => format!("{value}\n"),
    })
}

fn class_filter(c: ClassArg) -> ClassFilter {
    match c {
        ClassArg::All => ClassFilter::All,
        ClassArg::Bijective => ClassFilter::Bijective,
        ClassArg::CollatzLike => ClassFilter::CollatzLike,
        ClassArg::BijectiveCollatz => ClassFilter::BijectiveCollatz,
        ClassArg::BijectiveNonCollatz => ClassFilter::BijectiveNonCollatz,
        ClassArg::NonCollatz => ClassFilter::NonCollatz,
    }
}

fn rules(a: RulesArgs) -> Result<String> {
    let p = radix(a.p)?;
    if let Some(rule) = rule_from(p, a.rule.rule.as_ref(), a.rule.rule_map.as_ref())? {
        let class = rule.classify();
        let cycle = rule.zero_cycle().ok();
        return Ok(match a.format {
            Format::Json => pretty(&json!({
                "p": p.get(),
                "index": rule.index().to_string(),
                "map": rule.map(),
                "bijective": class.bijective,
                "collatz_like": class.collatz_like,
                "bijective_collatz": class.bijective_collatz,
                "zero_cycle": cycle.as_ref().map(|c| c.digits().to_vec()),
            })),
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "index: {}", rule.index());
                let _ = writeln!(out, "map: {}", map_text(&rule));
                let _ = writeln!(out, "bijective: {}", class.bijective);
                let _ = writeln!(out, "collatz_like: {}", class.collatz_like);
                let _ = writeln!(out, "bijective_collatz: {}", class.bijective_collatz);
                if let Some(c) = cycle {
                    let _ = writeln!(out, "zero_cycle: {c}");
                }
                out
            }
        });
    }

    if let Some(c) = a.class {
        let indices = enumerate_class(p, class_filter(c))?;
        return Ok(match a.format {
            Format::Json => pretty(&json!({
                "p": p.get(),
                "class": c.to_possible_value().map(|v| v.get_name().to_string()),
                "rules": indices.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
            })),
            Format::Text => indices.iter().map(|i| format!("{i}\n")).collect(),
        });
    }

    let c = census(p)?;
    Ok(match a.format {
        Format::Json => pretty(&json!({
            "p": p.get(),
            "total": c.total,
            "bijective": c.bijective,
            "collatz_like": c.collatz_like,
            "bijective_collatz": c.bijective_collatz,
            "bijective_non_collatz": c.bijective_non_collatz,
        })),
        Format::Text => format!(
            "p: {}\ntotal: {}\nbijective: {}\ncollatz_like: {}\nbijective_collatz: {}\nbijective_non_collatz: {}\n",
            p, c.total, c.bijective, c.collatz_like, c.bijective_collatz, c.bijective_non_collatz
        ),
    })
}

fn apply_cmd(a: ApplyArgs) -> Result<String> {
    let p = radix(a.p)?;
    let rule = required_rule(p, &a.rule)?;
    let x = number(&a.x)?;
    let y = apply(&rule, &x);
    Ok(match a.format {
        Format::Json => pretty(&json!({
            "p": p.get(),
            "rule": rule.index().to_string(),
            "x": x.to_string(),
            "value": y.to_string(),
            "x_digits": DigitString::from_value(&x, p).render(),
            "value_digits": DigitString::from_value(&y, p).render(),
        })),
        Format::Text => format!("{y}\n"),
    })
}

fn steps_output(p: Radix, values: &[BigUint], show_digits: bool, format: Format, extra: Value) -> String {
    match format {
        Format::Json => {
            let mut obj = extra;
            obj["values"] = values.iter().map(|v| v.to_string()).collect();
            obj["digits"] = values
                .iter()
                .map(|v| DigitString::from_value(v, p).render())
                .collect();
            pretty(&obj)
        }
        Format::Text => values
            .iter()
            .map(|v| {
                if show_digits {
                    format!("{v} ({})_{p}\n", DigitString::from_value(v, p))
                } else {
                    format!("{v}\n")
                }
            })
            .collect(),
    }
}

fn iterate(a: IterateArgs) -> Result<String> {
    let p = radix(a.p)?;
    let rule = required_rule(p, &a.rule)?;
    let x = number(&a.x)?;
    let values = iterate_trace(&rule, &x, a.k);
    let extra = json!({
        "p": p.get(),
        "rule": rule.index().to_string(),
        "k": a.k,
        "value": values.last().expect("k+1 values").to_string(),
    });
    Ok(steps_output(p, &values, a.digits, a.format, extra))
}

fn trajectory_cmd(a: TrajectoryArgs) -> Result<String> {
    let p = radix(a.p)?;
    let rule = required_rule(p, &a.rule)?;
    let x = number(&a.x)?;
    let cap = a.cap.unwrap_or_else(|| default_step_cap(&rule, &x));
    let t = trajectory(&rule, &x, cap)?;
    let extra = json!({
        "p": p.get(),
        "rule": rule.index().to_string(),
        "hops": t.len(),
    });
    let mut out = steps_output(p, &t.values, a.digits, a.format, extra);
    if a.format == Format::Text {
        let _ = writeln!(out, "hops: {}", t.len());
    }
    Ok(out)
}

fn preimage_json(r: &PreimageResult, verified: bool) -> Value {
    json!({
        "n": r.n.to_string(),
        "a": r.a.to_string(),
        "case": r.case.number(),
        "gamma": r.gamma,
        "alpha": r.alpha,
        "verified": verified,
    })
}

fn preimage(a: PreimageArgs) -> Result<String> {
    let p = radix(a.p)?;
    let rule = required_rule(p, &a.rule)?;
    let n = number(&a.n)?;
    if a.k == 0 {
        return Err(CliError::Invalid("--k must be at least 1".into()));
    }
    let chain = if a.k == 1 {
        vec![phi(&rule, &n)?]
    } else {
        phi_k(&rule, &n, a.k)?
    };
    let checked: Vec<(PreimageResult, bool)> = chain
        .into_iter()
        .map(|r| {
            let ok = verify_phi(&rule, &r) && is_exactly_p_hops(&rule, &r);
            (r, ok)
        })
        .collect();
    let failures = checked.iter().filter(|(_, ok)| !ok).count();
    let out = match a.format {
        Format::Json if a.k == 1 => pretty(&preimage_json(&checked[0].0, checked[0].1)),
        Format::Json => pretty(&Value::Array(
            checked.iter().map(|(r, ok)| preimage_json(r, *ok)).collect(),
        )),
        Format::Text => checked
            .iter()
            .map(|(r, ok)| {
                format!(
                    "n={} a={} case={} gamma={} alpha={} verified={}\n",
                    r.n, r.a, r.case, r.gamma, r.alpha, ok
                )
            })
            .collect(),
    };
    if failures > 0 {
        return Err(CliError::Verification { report: out, failures });
    }
    Ok(out)
}

fn design_params(p: Radix, rule: RuleTable, v: Option<usize>, phases: usize, roots: Option<&Vec<String>>) -> Result<DesignParams> {
    Ok(match roots {
        Some(roots) => {
            let roots = roots.iter().map(|r| number(r)).collect::<Result<Vec<_>>>()?;
            DesignParams::with_roots(rule, roots, phases)?
        }
        None => {
            let v = v.ok_or_else(|| CliError::Invalid(format!("--v is required for base {p}")))?;
            DesignParams::new(rule, v, phases)?
        }
    })
}

fn design_text(d: &NetworkDesign) -> Result<String> {
    let mut out = String::new();
    let params = &d.params;
    let _ = writeln!(
        out,
        "p={} rule={} map={} v={} n={}",
        params.radix(),
        d.rule().index(),
        map_text(d.rule()),
        params.v,
        params.n
    );
    let _ = writeln!(out, "nodes: {} (capacity {})", d.nodes.len(), params.capacity());
    let _ = writeln!(out, "{:>5} {:>5} {:>5} {:>24} {:>24}", "line", "phase", "hops", "address", "next_hop");
    for n in &d.nodes {
        let next = n.next_hop.as_ref().map(|h| h.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>5} {:>24} {:>24}",
            n.line,
            n.phase,
            n.hop_distance,
            n.address.to_string(),
            next
        );
    }
    let pairs: Vec<String> = d.pairs.iter().map(|p| p.to_string()).collect();
    let _ = writeln!(out, "pairs: {}", pairs.join(" "));
    let _ = writeln!(out, "canonical: {}", canonical_form(d)?);
    Ok(out)
}

fn design(a: DesignArgs) -> Result<String> {
    let p = radix(a.p)?;
    let rule = required_rule(p, &a.rule)?;
    let params = design_params(p, rule, a.v, a.phases, a.root.as_ref())?;
    let d = build_network(&params)?;
    let out = match a.format {
        DesignFormat::Text => design_text(&d)?,
        DesignFormat::Json => export_json(&d),
        DesignFormat::Dot => export_dot(&d),
        DesignFormat::Canonical => format!("{}\n", canonical_form(&d)?),
    };
    match a.output {
        Some(path) => {
            fs::write(&path, &out).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn load_design(src: &DesignSource) -> Result<NetworkDesign> {
    if let Some(path) = &src.design {
        return Ok(import_json(&read(path)?)?);
    }
    let p = radix(src.p.ok_or_else(|| CliError::Invalid("either --design or --p is required".into()))?)?;
    let rule = rule_from(p, src.rule.rule.as_ref(), src.rule.rule_map.as_ref())?
        .ok_or_else(|| CliError::Invalid("one of --rule or --rule-map is required".into()))?;
    let params = design_params(p, rule, src.v, src.phases.unwrap_or(0), src.root.as_ref())?;
    Ok(build_network(&params)?)
}

fn pairs(a: PairsArgs) -> Result<String> {
    let d = load_design(&a.source)?;
    let pairs = optimal_pairs(&d);
    Ok(match a.format {
        Format::Json => pretty(&Value::Array(
            pairs.iter().map(|p| json!([p.m.to_string(), p.a.to_string()])).collect(),
        )),
        Format::Text => pairs.iter().map(|p| format!("{p}\n")).collect(),
    })
}

fn simulate_cmd(a: SimulateArgs) -> Result<String> {
    let d = load_design(&a.source)?;
    let scenario = match (&a.scenario, &a.sources) {
        (Some(path), _) => Scenario::from_json(&read(path)?)?,
        (None, Some(list)) => Scenario::new(list.iter().map(|s| number(s)).collect::<Result<_>>()?),
        (None, None) => return Err(CliError::Invalid("one of --scenario or --sources is required".into())),
    };
    let report = simulate(&d, &scenario)?;
    Ok(match a.format {
        Format::Json => report_json(&report),
        Format::Text => report_table(&report),
    })
}

fn verify(a: VerifyArgs) -> Result<String> {
    if let Some(path) = &a.design {
        let d = import_json(&read(path)?)?;
        let violations = validate(&d);
        let out = match a.format {
            Format::Json => pretty(&json!({
                "valid": violations.is_empty(),
                "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            })),
            Format::Text if violations.is_empty() => "valid\n".to_string(),
            Format::Text => violations.iter().map(|v| format!("{v}\n")).collect(),
        };
        if violations.is_empty() {
            return Ok(out);
        }
        return Err(CliError::Verification {
            report: out,
            failures: violations.len(),
        });
    }

    let p = radix(a.p.expect("clap requires --p without --design"))?;
    let rules = match rule_from(p, a.rule.rule.as_ref(), a.rule.rule_map.as_ref())? {
        Some(r) => {
            if !r.is_bijective_collatz() {
                return Err(ivt_core::Error::NotCollatzBijective {
                    index: r.index(),
                    radix: p.get(),
                }
                .into());
            }
            vec![r]
        }
        None => bijective_collatz_rules(p)?,
    };
    let mut checked = 0u64;
    let mut failures: Vec<(BigUint, BigUint)> = Vec::new();
    for rule in &rules {
        for n in 1..=a.max {
            let n = BigUint::from(n);
            let res = phi(rule, &n)?;
            checked += 1;
            if !(verify_phi(rule, &res) && is_exactly_p_hops(rule, &res)) {
                failures.push((rule.index(), n));
            }
        }
    }
    let out = match a.format {
        Format::Json => pretty(&json!({
            "p": p.get(),
            "rules": rules.iter().map(|r| r.index().to_string()).collect::<Vec<_>>(),
            "max": a.max,
            "checked": checked,
            "failures": failures.iter().map(|(r, n)| json!({"rule": r.to_string(), "n": n.to_string()})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = format!("p={} rules={} n=1..={} checked={}\n", p, rules.len(), a.max, checked);
            for (r, n) in &failures {
                let _ = writeln!(out, "FAIL rule={r} n={n}");
            }
            if failures.is_empty() {
                out.push_str("ok\n");
            }
            out
        }
    };
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Verification {
            report: out,
            failures: failures.len(),
        })
    }
}
