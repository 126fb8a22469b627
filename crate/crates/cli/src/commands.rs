use std::collections::BTreeSet;
use std::str::FromStr;

use num::BigRational;
use serde_json::{json, Value as Json};
use strata::combinatorics::{
    find_homogeneous, find_k_ap, greedy_homogeneous, max_ap_free_subset, relative_density,
    replay_side_conditions, upper_banach_density, ColoringSpec, Density, IntSet,
};
use strata::formulas::{
    eval_formula, gt_instance, ho_instance, parse_formula, parse_formula_extended,
    parse_formula_file, render, Domains, Env, Formula, Value,
};
use strata::numbers::{classify, derivative, parse_number, shadow, RationalFn};
use strata::uflab::{
    all_ultrafilters, check_coherence, formula_family, is_ultrafilter, los_sweep,
    parse_los_formula, project_to_label, tensor, tensor_power, FamilyRecord, FiniteStructure,
    LosBatch, SetFamily,
};
use strata::{Label, Num, Scales};

use crate::{Cli, Command, EvalArgs, Failure, Outcome, RamseyArgs, UfCheckArgs, UfLosArgs, UfTensorArgs};

type Run = Result<Outcome, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure::Input {
        kind: "UsageError",
        message: message.into(),
    }
}

fn read(path: &str) -> Result<String, Failure> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| Failure::Input {
        kind: "IoError",
        message: format!("{path}: {e}"),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input {
        kind: "ParseError",
        message: format!("{path}: {e}"),
    })
}

fn label(text: &str) -> Result<Label, Failure> {
    Ok(Label::from_str(text)?)
}

fn plain(result: Json, text: String) -> Outcome {
    Outcome {
        result,
        witness: Json::Null,
        text,
    }
}

fn formula_outcome(f: &Formula) -> Outcome {
    let free: Vec<String> = f.free_variables().into_iter().collect();
    let text = render(f);
    Outcome {
        result: json!(text),
        witness: json!({ "free_variables": free }),
        text,
    }
}

fn num_outcome(x: &Num) -> Outcome {
    plain(json!(x.to_string()), x.to_string())
}

pub fn run(cli: &Cli) -> Run {
    let scales = Scales::new(cli.scales)?;
    let number = |text: &str| -> Result<Num, Failure> { Ok(parse_number(text, scales)?) };
    match &cli.command {
        Command::Parse(args) => match (&args.file, &args.formula) {
            (Some(path), _) => {
                let formulas = parse_formula_file(&read(path)?, args.extended)?;
                let rendered: Vec<String> = formulas.iter().map(render).collect();
                Ok(plain(json!(rendered), rendered.join("\n")))
            }
            (None, Some(text)) => {
                let f = if args.extended {
                    parse_formula_extended(text)?
                } else {
                    parse_formula(text)?
                };
                Ok(formula_outcome(&f))
            }
            (None, None) => Err(usage("a formula or --file is required")),
        },
        Command::Shift { r, formula } => Ok(formula_outcome(&parse_formula(formula)?.shift_up(*r)?)),
        Command::Ho { r, label: a, formula } => {
            Ok(formula_outcome(&ho_instance(&parse_formula(formula)?, *r, &label(a)?)?))
        }
        Command::Gt { label: a, formula } => Ok(formula_outcome(&gt_instance(
            &parse_formula_extended(formula)?,
            &label(a)?,
        )?)),
        Command::Eval(args) => eval(args, scales),
        Command::Num { expr } => {
            let x = number(expr)?;
            let mut out = num_outcome(&x);
            out.witness = json!({ "support": x.support().to_string() });
            Ok(out)
        }
        Command::Cmp { x, y } => {
            let word = match number(x)?.cmp(&number(y)?) {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            };
            Ok(plain(json!(word), word.to_string()))
        }
        Command::Shadow { r, x } => Ok(num_outcome(&shadow(&number(x)?, *r, scales)?)),
        Command::Classify { r, x } => {
            let c = classify(&number(x)?, *r, scales);
            Ok(plain(
                json!(c),
                format!("limited: {}, infinitesimal: {}", c.limited, c.infinitesimal),
            ))
        }
        Command::Level { label: a, x } => {
            let x = number(x)?;
            let support = x.support();
            match a {
                None => Ok(plain(json!(support.to_string()), support.to_string())),
                Some(a) => {
                    let inside = x.in_level(&label(a)?);
                    Ok(Outcome {
                        result: json!(inside),
                        witness: json!({ "support": support.to_string() }),
                        text: format!("{inside}\nsupport: {support}"),
                    })
                }
            }
        }
        Command::Embed { from, to, x } => {
            Ok(num_outcome(&number(x)?.embed(&label(from)?, &label(to)?)?))
        }
        Command::Deriv { f, at } => {
            let f = RationalFn::parse(f, scales)?;
            Ok(num_outcome(&derivative(&f, &number(at)?, scales)?))
        }
        Command::UfCheck(args) => uf_check(args),
        Command::UfTensor(args) => uf_tensor(args),
        Command::UfLos(args) => uf_los(args),
        Command::Ramsey(args) => ramsey(args),
        Command::Replay { n, p, samples } => {
            let report = replay_side_conditions(*n, *p, scales, *samples, cli.seed)?;
            let mut text = String::new();
            for c in &report.clauses {
                let mark = if c.passed { "pass" } else { "FAIL" };
                text.push_str(&format!("({}) {mark} [{} checks] {}\n", c.id, c.checked, c.description));
                if let Some(cx) = &c.counterexample {
                    text.push_str(&format!("    counterexample: {cx}\n"));
                }
            }
            text.push_str(if report.all_passed() { "all clauses pass" } else { "some clauses fail" });
            Ok(Outcome {
                result: json!(report.all_passed()),
                witness: json!(report),
                text,
            })
        }
        Command::Density { window, set } => {
            Ok(density_outcome(&upper_banach_density(&int_set(set)?, *window)?))
        }
        Command::RelDensity { window, set, ambient, tol } => {
            let tol = BigRational::from_str(tol)
                .map_err(|e| usage(format!("tolerance `{tol}`: {e}")))?;
            let d = relative_density(&int_set(set)?, &int_set(ambient)?, *window, &tol)?;
            Ok(density_outcome(&d))
        }
        Command::Ap { k, set } => match find_k_ap(&int_set(set)?, *k)? {
            Some((start, step)) => Ok(Outcome {
                result: json!({ "start": start, "step": step }),
                witness: json!((0..*k).map(|i| start + i * step).collect::<Vec<_>>()),
                text: format!("start {start}, step {step}"),
            }),
            None => Ok(plain(Json::Null, "none".into())),
        },
        Command::ApFree { n, k } => {
            let best = max_ap_free_subset(*n, *k)?;
            Ok(Outcome {
                result: json!(best.size),
                witness: json!(best.witness),
                text: format!("{}\nwitness: {}", best.size, best.witness),
            })
        }
    }
}

fn int_set(path: &str) -> Result<IntSet, Failure> {
    Ok(IntSet::parse_text(&read(path)?)?)
}

fn density_outcome(d: &Density) -> Outcome {
    let value = d.value.to_string();
    match d.window {
        Some(w) => Outcome {
            result: json!(value),
            witness: json!(w),
            text: format!("{value}\nwitness: ({},{})", w.start, w.len),
        },
        None => plain(json!(value), value.clone()),
    }
}

/// Splits at commas outside brackets.
fn split_top(text: &str) -> Vec<&str> {
    let (mut depth, mut start, mut parts) = (0i32, 0, Vec::new());
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts.retain(|p| !p.is_empty());
    parts
}

fn bracketed(text: &str) -> Option<&str> {
    text.trim().strip_prefix('[')?.strip_suffix(']')
}

fn value(text: &str, scales: Scales) -> Result<Value, Failure> {
    match bracketed(text) {
        Some(inner) => Ok(Value::Set(
            split_top(inner)
                .into_iter()
                .map(|t| parse_number(t, scales))
                .collect::<Result<BTreeSet<_>, _>>()?,
        )),
        None => Ok(Value::Num(parse_number(text.trim(), scales)?)),
    }
}

fn json_value(v: &Json, scales: Scales) -> Result<Value, Failure> {
    match v {
        Json::String(s) => Ok(Value::Num(parse_number(s, scales)?)),
        Json::Number(n) => Ok(Value::Num(parse_number(&n.to_string(), scales)?)),
        Json::Array(items) => {
            let mut set = BTreeSet::new();
            for item in items {
                match json_value(item, scales)? {
                    Value::Num(x) => set.insert(x),
                    Value::Set(_) => return Err(usage("sets of sets are not values")),
                };
            }
            Ok(Value::Set(set))
        }
        other => Err(usage(format!("{other} is not a number or a set"))),
    }
}

fn binding<'a>(text: &'a str, flag: &str) -> Result<(&'a str, &'a str), Failure> {
    text.split_once('=')
        .map(|(k, v)| (k.trim(), v))
        .ok_or_else(|| usage(format!("--{flag} expects NAME=VALUE, got `{text}`")))
}

fn eval(args: &EvalArgs, scales: Scales) -> Run {
    let f = parse_formula_extended(&args.formula)?;
    let mut env = Env::new();
    let mut domains = Domains::new();
    if let Some(path) = &args.context {
        let ctx: Json = read_json(path)?;
        if let Some(obj) = ctx.get("env").and_then(Json::as_object) {
            for (k, v) in obj {
                env.insert(k.clone(), json_value(v, scales)?);
            }
        }
        if let Some(obj) = ctx.get("domains").and_then(Json::as_object) {
            for (k, v) in obj {
                let items = v
                    .as_array()
                    .ok_or_else(|| usage(format!("domain of `{k}` must be a list")))?;
                let vals = items.iter().map(|x| json_value(x, scales)).collect::<Result<_, _>>()?;
                domains.insert(k.clone(), vals);
            }
        }
    }
    for b in &args.bindings {
        let (k, v) = binding(b, "let")?;
        env.insert(k.to_string(), value(v, scales)?);
    }
    for d in &args.domains {
        let (k, v) = binding(d, "domain")?;
        let inner = bracketed(v).unwrap_or(v);
        let vals = split_top(inner).into_iter().map(|t| value(t, scales)).collect::<Result<_, _>>()?;
        domains.insert(k.to_string(), vals);
    }
    let holds = eval_formula(&f, &env, &domains)?;
    Ok(plain(json!(holds), holds.to_string()))
}

fn ultrafilter(spec: &str) -> Result<SetFamily, Failure> {
    if let Some((k, i)) = spec.split_once(':') {
        if let (Ok(k), Ok(i)) = (k.parse(), i.parse()) {
            return Ok(SetFamily::principal(k, i)?);
        }
    }
    let record: FamilyRecord = read_json(spec)?;
    Ok(SetFamily::try_from(record)?)
}

fn family_json(f: &SetFamily) -> Json {
    let listed = FamilyRecord::try_from(f).ok();
    json!({
        "ground": f.ground(),
        "principal": f.principal_point(),
        "family": listed.map(|r| r.family),
    })
}

fn family_text(f: &SetFamily) -> String {
    match f.principal_point() {
        Some(p) => format!("principal at {p} on {} points", f.ground()),
        None => format!("non-principal family on {} points", f.ground()),
    }
}

fn uf_check(args: &UfCheckArgs) -> Run {
    if let Some(path) = &args.family {
        let f = ultrafilter(path)?;
        let ok = is_ultrafilter(&f);
        return Ok(Outcome {
            result: json!(ok),
            witness: json!({ "principal": f.principal_point() }),
            text: format!("{ok}\n{}", family_text(&f)),
        });
    }
    let k = args.ground.ok_or_else(|| usage("--ground or --family is required"))?;
    let all = all_ultrafilters(k, args.exhaustive)?;
    let points: Vec<Option<usize>> = all.iter().map(SetFamily::principal_point).collect();
    if let Some(pair) = &args.coherence {
        let (a, b) = (label(&pair[0])?, label(&pair[1])?);
        let mut failing = Vec::new();
        for u in &all {
            if !check_coherence(u, &a, &b)? {
                failing.push(u.principal_point());
            }
        }
        let ok = failing.is_empty();
        return Ok(Outcome {
            result: json!(ok),
            witness: json!({ "checked": all.len(), "failing": failing }),
            text: format!("{ok}\ncoherence of {a} in {b} over {} ultrafilters on {k} points", all.len()),
        });
    }
    let ok = all.iter().all(is_ultrafilter);
    let listed: Vec<String> = points
        .iter()
        .map(|p| p.map_or("?".into(), |p| p.to_string()))
        .collect();
    Ok(Outcome {
        result: json!(ok),
        witness: json!({ "count": all.len(), "principal": points }),
        text: format!(
            "{ok}\n{} ultrafilters on {k} points, principal at {}",
            all.len(),
            listed.join(", ")
        ),
    })
}

fn uf_tensor(args: &UfTensorArgs) -> Run {
    let u = ultrafilter(&args.u)?;
    let f = match (&args.v, args.power, &args.label) {
        (Some(v), _, _) => tensor(&u, &ultrafilter(v)?)?,
        (None, Some(n), Some(a)) => project_to_label(&u, &label(a)?, n)?,
        (None, Some(n), None) => tensor_power(&u, n)?,
        (None, None, _) => return Err(usage("--v or --power is required")),
    };
    Ok(Outcome {
        result: family_json(&f),
        witness: json!({ "ultrafilter": is_ultrafilter(&f) }),
        text: family_text(&f),
    })
}

fn uf_los(args: &UfLosArgs) -> Run {
    let m: FiniteStructure = read_json(&args.structure)?;
    m.validate()?;
    let u = ultrafilter(&args.u)?;
    let formulas = match &args.formula {
        Some(text) => vec![parse_los_formula(text)?],
        None => {
            let sig: Vec<(&str, usize)> = m.relations.iter().map(|(k, r)| (k.as_str(), r.arity)).collect();
            formula_family(&sig)
        }
    };
    let sweep = los_sweep(&m, &u, &LosBatch::new(formulas))?;
    let ok = sweep.failures.is_empty();
    let mut text = format!("{ok}\n{} formulas, {} cases", sweep.formulas, sweep.cases);
    for fail in &sweep.failures {
        text.push_str(&format!("\nfails: {fail}"));
    }
    Ok(Outcome {
        result: json!(ok),
        witness: json!({ "formulas": sweep.formulas, "cases": sweep.cases, "failures": sweep.failures }),
        text,
    })
}

fn ramsey(args: &RamseyArgs) -> Run {
    let spec = match (&args.coloring, &args.generator) {
        (Some(path), _) => read_json::<ColoringSpec>(path)?,
        (None, Some(g)) => ColoringSpec {
            n: args.n.unwrap_or(2),
            r: args.r,
            size: args.size.ok_or_else(|| usage("--size is required with --generator"))?,
            generator: Some(g.clone()),
            colors: None,
        },
        (None, None) => return Err(usage("--coloring or --generator is required")),
    };
    let c = spec.build()?;
    if args.greedy {
        let g = greedy_homogeneous(&c)?;
        return Ok(Outcome {
            result: json!(g.set),
            witness: json!({ "sentinels": g.sentinels, "color": g.color }),
            text: format!("{}\nsentinels: {}, color {}", g.set, g.sentinels, g.color),
        });
    }
    let h = args.h.ok_or_else(|| usage("--h is required"))?;
    if h < c.n() {
        return Err(Failure::Domain(strata::Error::Invalid(format!(
            "homogeneous sets of size {h} are below the tuple size {}",
            c.n()
        ))));
    }
    match find_homogeneous(&c, h) {
        Some(set) => {
            let first: Vec<usize> = set.iter().take(c.n()).collect();
            let color = c.color(&first);
            Ok(Outcome {
                result: json!(set),
                witness: json!({ "color": color }),
                text: format!("{set}\ncolor {color}"),
            })
        }
        None => Ok(plain(Json::Null, "none".into())),
    }
}
