use std::fs;
use std::io::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use hvir::checks::algebra_check;
use hvir::classify::{
    claim4_independence_induced, claim4_independence_verma, classify_module, dichotomy_probe,
    find_ghw_vectors, support_ray, InducedView, IntermediateView, ModuleWindowView, TrivialView,
    VermaView,
};
use hvir::induced::{
    double_factorial_bound, support_shape, table_csv, table_json, InducedModule, InducedWindow,
    QuotientRow, SplitGroup, SupportKind,
};
use hvir::intermediate::{prime_dims, uniform_bound_probe, IntermediateModule};
use hvir::verma::{m_prime_view, theorem22_probe, VermaModule, VermaWindow};
use hvir::{GroupElement, GroupSpec};

use crate::config::{element, parse_config, parse_parts, scalar, ConfigError, JobConfig, ModuleConfig};
use crate::{Common, Failure, Format};

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

fn cfg<T>(r: Result<T, hvir::Error>, field: &str) -> Result<T, Failure> {
    r.map_err(|e| Failure::Config(format!("field `{field}`: {e}")))
}

#[derive(Default)]
struct Outcome {
    results: Value,
    csv: Option<String>,
    table: Option<Value>,
    failures: Vec<String>,
}

pub fn run(command: &str, common: &Common) -> Result<(), Failure> {
    let src = fs::read_to_string(&common.config)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", common.config.display())))?;
    let mut job = parse_config(&src)?;
    if let Some(f) = common.format {
        job.format = Some(f);
    }
    let format = job.format.unwrap_or(Format::Json);
    if let Some(s) = common.seed {
        job.seed = Some(s);
    }
    if let Some(d) = common.depth {
        job.window.depth = Some(d);
    }
    if let Some(b) = common.box_radius {
        job.window.box_radius = Some(b);
    }
    if let Some(p) = &common.window_parts {
        job.window.parts = Some(parse_parts(p)?);
    }
    let start = Instant::now();
    let outcome = match command {
        "algebra-check" => cmd_algebra_check(&job)?,
        "build" => cmd_build(&job)?,
        "classify" => cmd_classify(&job)?,
        _ => cmd_probe(&job)?,
    };
    let report = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "job": job,
        "results": outcome.results,
        "failures": outcome.failures,
        "timing_ms": start.elapsed().as_millis() as u64,
    });
    let report_text = serde_json::to_string_pretty(&report).expect("serializable");
    match &common.out {
        Some(dir) => {
            let io = |e: std::io::Error| Failure::Config(format!("cannot write to {}: {e}", dir.display()));
            fs::create_dir_all(dir).map_err(io)?;
            fs::write(dir.join("report.json"), report_text + "\n").map_err(io)?;
            match format {
                Format::Csv => {
                    if let Some(csv) = &outcome.csv {
                        fs::write(dir.join("table.csv"), csv).map_err(io)?;
                    }
                }
                Format::Json => {
                    if let Some(t) = &outcome.table {
                        fs::write(dir.join("table.json"), serde_json::to_string_pretty(t).unwrap() + "\n")
                            .map_err(io)?;
                    }
                }
            }
        }
        None => match (format, &outcome.csv) {
            // A closed pipe (e.g. `| head`) is not an error of the job.
            (Format::Csv, Some(csv)) => {
                let _ = std::io::stdout().write_all(csv.as_bytes());
            }
            _ => {
                let _ = writeln!(std::io::stdout(), "{report_text}");
            }
        },
    }
    if outcome.failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(outcome.failures.join("; ")))
    }
}

fn cmd_algebra_check(job: &JobConfig) -> Result<Outcome, Failure> {
    let group = job.group_spec()?;
    let suites = algebra_check(&group, job.convention, job.seed.unwrap_or(0), job.triples.unwrap_or(300));
    let failures = suites
        .iter()
        .filter(|s| !s.passed())
        .map(|s| format!("{} suite: {} of {} cases fail", s.name, s.failures, s.cases))
        .collect();
    Ok(Outcome {
        results: json!({
            "status": if suites.iter().all(|s| s.passed()) { "PASS" } else { "FAIL" },
            "suites": suites,
        }),
        failures,
        ..Outcome::default()
    })
}

#[derive(Serialize)]
struct Row {
    weight_key: String,
    level: Option<i64>,
    dim_lower: usize,
    dim_upper: Option<u64>,
    status: String,
}

fn rows_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("UTF-8 fields")
}

fn box_points(n: usize, r: i64) -> Vec<GroupElement> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(GroupElement::new).collect()
}

fn intermediate(job: &JobConfig, group: &GroupSpec) -> Result<Option<IntermediateModule>, Failure> {
    Ok(match job.module()? {
        ModuleConfig::Intermediate { alpha, beta } => Some(IntermediateModule::new(
            group.clone(),
            scalar("module.alpha", alpha)?,
            scalar("module.beta", beta)?,
        )),
        _ => None,
    })
}

fn induced(job: &JobConfig, group: &GroupSpec) -> Result<Option<InducedModule>, Failure> {
    let ModuleConfig::Induced {
        alpha,
        beta,
        b,
        g0,
        level_functional,
    } = job.module()?
    else {
        return Ok(None);
    };
    let n = group.rank();
    let split = match (b, g0, level_functional) {
        (Some(b), Some(g0), None) => {
            let b = element("module.b", b, n)?;
            let g0 = g0
                .iter()
                .enumerate()
                .map(|(i, g)| element(&format!("module.g0[{i}]"), g, n))
                .collect::<Result<Vec<_>, _>>()?;
            cfg(SplitGroup::new(group.clone(), b, g0), "module.b")?
        }
        (None, None, Some(k)) => {
            element("module.level_functional", k, n)?;
            cfg(SplitGroup::canonical(group.clone(), k), "module.level_functional")?
        }
        _ => {
            return Err(Failure::Config(
                "field `module`: give either `b` and `g0`, or `level_functional`".into(),
            ))
        }
    };
    Ok(Some(InducedModule::build(
        scalar("module.alpha", alpha)?,
        scalar("module.beta", beta)?,
        split,
    )))
}

fn verma(job: &JobConfig, group: &GroupSpec) -> Result<Option<(VermaModule, VermaWindow)>, Failure> {
    let ModuleConfig::Verma { cdot, h } = job.module()? else {
        return Ok(None);
    };
    let order = job.order_spec(group)?;
    let module = cfg(
        VermaModule::new(group.clone(), order.clone(), scalar("module.cdot", cdot)?, scalar("module.h", h)?),
        "module",
    )?;
    let parts = job.window_parts(group.rank())?;
    let window = cfg(VermaWindow::new(&order, parts, job.window.length.unwrap_or(2)), "window.parts")?;
    Ok(Some((module, window)))
}

fn induced_rows(job: &JobConfig, m: &InducedModule) -> Result<(Vec<QuotientRow>, Vec<String>), Failure> {
    let depth = job.window.depth.unwrap_or(2);
    let r = job.window.box_radius.unwrap_or(1);
    let max_radius = job.window.max_radius.unwrap_or(4);
    let window = InducedWindow {
        depth,
        radius: max_radius,
    };
    let seed = job.seed.unwrap_or(0);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for level in 0..=depth {
        for a in m.g0_box(r) {
            let row = if level == 0 {
                let d = usize::from(m.prime().in_support(&GroupElement::new(a.clone())));
                QuotientRow {
                    level,
                    a,
                    history: Vec::new(),
                    dim_lower: d,
                    dim_upper: d as u64,
                    stabilized: true,
                    monotone: true,
                }
            } else {
                cfg(m.radical_quotient_dims(level, &a, 1..=max_radius, &window, seed), "window.depth")?
            };
            if !row.monotone {
                failures.push(format!("non-monotone dimensions at {}: {:?}", row.weight_key(), row.history));
            }
            if row.dim_lower as u64 > double_factorial_bound(level) {
                failures.push(format!("dimension bound exceeded at {}", row.weight_key()));
            }
            rows.push(row);
        }
    }
    Ok((rows, failures))
}

fn cmd_build(job: &JobConfig) -> Result<Outcome, Failure> {
    let group = job.group_spec()?;
    let n = group.rank();
    if let Some(m) = intermediate(job, &group)? {
        let r = job.window.box_radius.unwrap_or(2);
        let rows: Vec<Row> = box_points(n, r)
            .into_iter()
            .map(|y| Row {
                weight_key: format!("alpha+{y}"),
                level: Some(0),
                dim_lower: 1,
                dim_upper: Some(1),
                status: "exact".into(),
            })
            .collect();
        return Ok(Outcome {
            results: json!({
                "family": "intermediate",
                "rows": rows.len(),
                "reducibility": m.is_reducible(),
                "subquotient": m.irreducible_subquotient(),
            }),
            csv: Some(rows_csv(&rows)),
            table: Some(serde_json::to_value(&rows).unwrap()),
            failures: Vec::new(),
        });
    }
    if let Some(m) = induced(job, &group)? {
        let (rows, failures) = induced_rows(job, &m)?;
        return Ok(Outcome {
            results: json!({
                "family": "induced",
                "b": m.split().b(),
                "g0": m.split().g0(),
                "rows": rows.len(),
            }),
            csv: Some(table_csv(&rows)),
            table: Some(table_json(&rows)),
            failures,
        });
    }
    if let Some((m, w)) = verma(job, &group)? {
        let rows: Vec<Row> = w
            .labels_by_weight(n)
            .into_iter()
            .map(|(total, labels)| Row {
                weight_key: format!("h-{total}"),
                level: None,
                dim_lower: labels.len(),
                dim_upper: None,
                status: "window-count".into(),
            })
            .collect();
        return Ok(Outcome {
            results: json!({
                "family": "verma",
                "order": format!("{:?}", m.order().classify().map_err(|e| Failure::Config(e.to_string()))?),
                "labels": w.labels().len(),
                "weights": rows.len(),
            }),
            csv: Some(rows_csv(&rows)),
            table: Some(serde_json::to_value(&rows).unwrap()),
            failures: Vec::new(),
        });
    }
    let rows = vec![Row {
        weight_key: "0".into(),
        level: Some(0),
        dim_lower: 1,
        dim_upper: Some(1),
        status: "exact".into(),
    }];
    Ok(Outcome {
        results: json!({ "family": "trivial", "rows": 1 }),
        csv: Some(rows_csv(&rows)),
        table: Some(serde_json::to_value(&rows).unwrap()),
        failures: Vec::new(),
    })
}

fn view(job: &JobConfig, group: &GroupSpec) -> Result<Box<dyn ModuleWindowView>, Failure> {
    let r = job.window.box_radius;
    if let Some(m) = intermediate(job, group)? {
        return Ok(Box::new(IntermediateView {
            module: m.prime(),
            radius: r.unwrap_or(2),
        }));
    }
    if let Some(m) = induced(job, group)? {
        return Ok(Box::new(InducedView {
            module: m,
            depth: job.window.depth.unwrap_or(2),
            box_radius: r.unwrap_or(1),
            label_radius: job.window.label_radius.unwrap_or(2),
            seed: job.seed.unwrap_or(0),
        }));
    }
    if let Some((module, window)) = verma(job, group)? {
        return Ok(Box::new(VermaView { module, window }));
    }
    Ok(Box::new(TrivialView {
        group: group.clone(),
        radius: r.unwrap_or(1),
    }))
}

fn cmd_classify(job: &JobConfig) -> Result<Outcome, Failure> {
    let group = job.group_spec()?;
    let v = view(job, &group)?;
    let verdict = classify_module(v.as_ref());
    Ok(Outcome {
        results: json!({
            "provenance": v.provenance(),
            "verdict": verdict,
        }),
        ..Outcome::default()
    })
}

fn elements(field: &str, src: &Option<Vec<Vec<i64>>>, n: usize) -> Result<Option<Vec<GroupElement>>, Failure> {
    src.as_ref()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(i, c)| element(&format!("{field}[{i}]"), c, n).map_err(Failure::from))
                .collect()
        })
        .transpose()
}

fn cmd_probe(job: &JobConfig) -> Result<Outcome, Failure> {
    let group = job.group_spec()?;
    let n = group.rank();
    let p = &job.params;
    let mut results = serde_json::Map::new();
    let mut failures = Vec::new();
    if job.probes.is_empty() {
        return Err(Failure::Config("field `probes`: no probes requested".into()));
    }
    let v = view(job, &group)?;
    let units: Vec<GroupElement> = (0..n).map(|i| GroupElement::unit(n, i)).collect();
    let induced_module = induced(job, &group)?;
    for name in &job.probes {
        let value = match name.as_str() {
            "dichotomy" => json!(dichotomy_probe(v.as_ref(), None, None)),
            "ghw" => {
                let basis = match (elements("params.ghw_basis", &p.ghw_basis, n)?, &induced_module) {
                    (Some(b), _) => b,
                    (None, Some(m)) => {
                        let b = m.split().b();
                        std::iter::once(b.clone()).chain(m.split().g0().iter().map(|g| &b + g)).collect()
                    }
                    (None, None) => units.clone(),
                };
                let offsets: Option<Vec<GroupElement>> = induced_module.as_ref().map(|m| {
                    m.g0_box(job.window.box_radius.unwrap_or(1))
                        .into_iter()
                        .map(|a| {
                            let mut c = vec![0];
                            c.extend(a);
                            m.split().from_split(&GroupElement::new(c))
                        })
                        .collect()
                });
                let found = find_ghw_vectors(v.as_ref(), &basis, p.cone_depth.unwrap_or(2), offsets.as_deref());
                json!({ "basis": basis, "vectors": found })
            }
            "support_ray" => {
                let base = match &p.ray_base {
                    Some(c) => element("params.ray_base", c, n)?,
                    None => GroupElement::zero(n),
                };
                let dir = match (&p.ray_direction, &induced_module) {
                    (Some(c), _) => element("params.ray_direction", c, n)?,
                    (None, Some(m)) => m.split().b(),
                    (None, None) => units[0].clone(),
                };
                let r = support_ray(v.as_ref(), &base, &dir, p.ray_range.unwrap_or(3));
                if induced_module.is_some() && !r.downward_closed {
                    failures.push(format!("support along {dir} is not downward closed"));
                }
                json!(r)
            }
            "support_shape" => {
                let m = induced_module
                    .as_ref()
                    .ok_or_else(|| Failure::Config("probe `support_shape` needs an induced module".into()))?;
                let r = support_shape(
                    m,
                    job.window.depth.unwrap_or(2),
                    job.window.box_radius.unwrap_or(1),
                    job.window.label_radius.unwrap_or(2),
                );
                if r.kind == SupportKind::Inconclusive {
                    failures.push(format!("support holes at {:?}", r.missing));
                }
                json!(r)
            }
            "claim4" => {
                let gbar = element(
                    "params.gbar",
                    p.gbar.as_ref().ok_or_else(|| Failure::Config("field `params.gbar`: missing".into()))?,
                    n,
                )?;
                let k = p.k.unwrap_or(3);
                let report = if let Some(m) = &induced_module {
                    let t = GroupElement::new(p.top.clone().unwrap_or_else(|| vec![0; n - 1]));
                    cfg(claim4_independence_induced(m, &gbar, &t, k, job.seed.unwrap_or(0)), "params.gbar")?
                } else if let Some((m, _)) = verma(job, &group)? {
                    cfg(claim4_independence_verma(&m, &gbar, k), "params.gbar")?
                } else {
                    return Err(Failure::Config("probe `claim4` needs a Verma or induced module".into()));
                };
                json!(report)
            }
            "theorem22" => {
                let (m, w) = verma(job, &group)?
                    .ok_or_else(|| Failure::Config("probe `theorem22` needs a Verma module".into()))?;
                json!(cfg(theorem22_probe(&m, &w, job.window.levels.unwrap_or(3)), "module")?)
            }
            "m_prime" => {
                let (m, w) = verma(job, &group)?
                    .ok_or_else(|| Failure::Config("probe `m_prime` needs a Verma module".into()))?;
                let probes: Vec<GroupElement> = w.parts().iter().flat_map(|p| [p.clone(), -p]).collect();
                let r = cfg(m_prime_view(&m, &w, &probes), "module")?;
                if !r.closed {
                    failures.push(format!("M′ not closed: {:?}", r.escape));
                }
                json!(r)
            }
            "reducibility" => {
                let m = intermediate(job, &group)?
                    .ok_or_else(|| Failure::Config("probe `reducibility` needs an intermediate module".into()))?;
                json!({ "reducibility": m.is_reducible(), "subquotient": m.irreducible_subquotient() })
            }
            "uniform_bound" => {
                let m = intermediate(job, &group)?
                    .ok_or_else(|| Failure::Config("probe `uniform_bound` needs an intermediate module".into()))?;
                let window = box_points(n, job.window.box_radius.unwrap_or(2));
                let rays: Vec<GroupElement> = units.iter().flat_map(|u| [u.clone(), -u]).collect();
                json!(cfg(uniform_bound_probe(&prime_dims(&m.prime(), &window), &rays), "window")?)
            }
            other => return Err(Failure::Config(format!("field `probes`: unknown probe `{other}`"))),
        };
        results.insert(name.clone(), value);
    }
    Ok(Outcome {
        results: Value::Object(results),
        failures,
        ..Outcome::default()
    })
}
