//! One function per subcommand, each producing an [`Output`].

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sumsets_core::constructions::{product_params, stripe_geometry};
use sumsets_core::density::{
    alpha_of_group, default_tolerance, density_report, doubling_ratio_prefix,
};
use sumsets_core::folner::{doubling_overlap, shipped_suite, AppendixRow, AppendixTolerances};
use sumsets_core::ratio::{ratio, to_f64, within, Ratio};
use sumsets_core::search::{
    budget_from_env, certify_avoidance, find_witness, SearchProblem, SearchStatus, ShiftMode,
};
use sumsets_core::{FolnerSequence, GroupSpec};

use crate::config::ExperimentConfig;
use crate::construct::{self, Built};
use crate::report::{to_value, Output, Table};
use crate::UsageError;

/// Indices used when no `N` is given.
const DEFAULT_N: &[u64] = &[1, 2, 3];

fn required<'a>(value: &'a Option<String>, what: &str) -> Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| UsageError(format!("this command needs --{what}")).into())
}

fn spec_of(cfg: &ExperimentConfig) -> Result<GroupSpec> {
    Ok(required(&cfg.group, "group")?.parse()?)
}

/// The recipe, checked against `--group` when both are given.
fn folner_of(cfg: &ExperimentConfig) -> Result<FolnerSequence> {
    let f: FolnerSequence = required(&cfg.recipe, "recipe")?.parse()?;
    if let Some(g) = &cfg.group {
        let spec: GroupSpec = g.parse()?;
        if spec != *f.spec() {
            bail!(UsageError(format!(
                "recipe {f} lives in {}, not {spec}",
                f.spec()
            )));
        }
    }
    Ok(f)
}

fn built_of(cfg: &ExperimentConfig) -> Result<Built> {
    construct::build(
        required(&cfg.construction, "construct")?,
        cfg.group.as_deref(),
    )
}

fn rational(r: &Ratio) -> String {
    r.to_string()
}

fn opt_rational(r: &Option<Ratio>) -> Value {
    r.as_ref()
        .map_or(Value::Null, |r| Value::String(r.to_string()))
}

fn pair_table(pairs: &[(&str, String)]) -> Table {
    let mut t = Table::new(&["key", "value"]);
    for (k, v) in pairs {
        t.push(vec![(*k).to_string(), v.clone()]);
    }
    t
}

pub fn group_info(cfg: &ExperimentConfig) -> Result<Output> {
    let spec = spec_of(cfg)?;
    let fmt = |gs: Vec<sumsets_core::GroupElement>| -> Vec<String> {
        gs.iter().map(|g| spec.format_element(g)).collect()
    };
    let kernel = spec.kernel_elements().ok().map(fmt);
    let reps = spec.coset_reps().ok().map(fmt);
    let alpha = alpha_of_group(&spec);
    let report = json!({
        "group": spec.to_string(),
        "ell": spec.ell(),
        "r": spec.r(),
        "alpha_G": rational(&alpha),
        "doubling_is_trivial": spec.doubling_is_trivial(),
        "kernel": kernel,
        "coset_reps": reps,
    });
    let show = |v: &Option<Vec<String>>| v.as_ref().map_or("unlisted".to_string(), |v| v.join(" "));
    let table = pair_table(&[
        ("group", spec.to_string()),
        ("ell", spec.ell().to_string()),
        ("r", spec.r().map_or("infinite".into(), |r| r.to_string())),
        ("alpha_G", rational(&alpha)),
        ("kernel", show(&kernel)),
        ("coset_reps", show(&reps)),
    ]);
    Ok(Output {
        command: "group info",
        passed: true,
        budget_exhausted: false,
        report,
        csv: Some(table.to_csv()?),
    })
}

pub fn folner_defects(cfg: &ExperimentConfig) -> Result<Output> {
    let f = folner_of(cfg)?;
    let elements = f.default_test_elements()?;
    let mut reports = Vec::new();
    let mut table = Table::new(&[
        "N",
        "window_size",
        "quantity",
        "ratio_num",
        "ratio_den",
        "ratio_float",
    ]);
    for n in cfg.n_values(DEFAULT_N)? {
        let d = f.defects(n, &elements)?;
        let mut row = |q: String, r: &Ratio| {
            table.push(vec![
                n.to_string(),
                d.window_size.to_string(),
                q,
                r.numer().to_string(),
                r.denom().to_string(),
                to_f64(r).to_string(),
            ])
        };
        for t in &d.translation_defects {
            row(format!("translation {}", t.element), &t.defect);
        }
        row("doubling_overlap".into(), &d.doubling_overlap);
        reports.push(d);
    }
    Ok(Output {
        command: "folner defects",
        passed: true,
        budget_exhausted: false,
        report: json!({ "recipe": f.to_string(), "windows": to_value(&reports)? }),
        csv: Some(table.to_csv()?),
    })
}

pub fn alpha(cfg: &ExperimentConfig) -> Result<Output> {
    if cfg.recipe.is_none() {
        let spec = spec_of(cfg)?;
        let a = alpha_of_group(&spec);
        return Ok(Output {
            command: "alpha",
            passed: true,
            budget_exhausted: false,
            report: json!({ "group": spec.to_string(), "alpha_G": rational(&a) }),
            csv: Some(
                pair_table(&[("group", spec.to_string()), ("alpha_G", rational(&a))]).to_csv()?,
            ),
        });
    }
    let f = folner_of(cfg)?;
    let tol = cfg.tolerance_or(default_tolerance())?;
    let r = doubling_ratio_prefix(&f, &cfg.n_values(DEFAULT_N)?, tol)?;
    let passed = r.claimed_limit.is_none() || r.converged;
    Ok(Output {
        command: "alpha",
        passed,
        budget_exhausted: false,
        report: json!({
            "group": f.spec().to_string(),
            "recipe": f.to_string(),
            "alpha_G": rational(&alpha_of_group(f.spec())),
            "doubling": to_value(&r)?,
        }),
        csv: Some(r.to_csv()),
    })
}

/// The paired sequence unless `--recipe` overrides it; predictions only apply to the former.
fn density_folner(cfg: &ExperimentConfig, b: &Built) -> Result<(FolnerSequence, bool)> {
    match &cfg.recipe {
        Some(_) => {
            let f = folner_of(cfg)?;
            if f.spec() != b.set.spec() {
                bail!(UsageError(format!(
                    "recipe {f} does not live in {}",
                    b.set.spec()
                )));
            }
            Ok((f, false))
        }
        None => Ok((b.set.paired_folner.clone(), true)),
    }
}

pub fn density(cfg: &ExperimentConfig) -> Result<Output> {
    let b = built_of(cfg)?;
    let (f, paired) = density_folner(cfg, &b)?;
    let claim = if paired {
        b.set.predicted_density.clone()
    } else {
        None
    };
    let tol = cfg.tolerance_or(default_tolerance())?;
    let r = density_report(&b.set, &f, &cfg.n_values(DEFAULT_N)?, claim, tol)?;
    let passed = r.claimed_limit.is_none() || r.converged;
    Ok(Output {
        command: "density",
        passed,
        budget_exhausted: false,
        report: json!({
            "construction": b.set.name(),
            "folner": f.to_string(),
            "density": to_value(&r)?,
        }),
        csv: Some(r.to_csv()),
    })
}

pub fn construct(cfg: &ExperimentConfig) -> Result<Output> {
    let b = built_of(cfg)?;
    let f = b.set.paired_folner.clone();
    let ns = match &cfg.n {
        Some(_) => cfg.n_values(DEFAULT_N)?,
        None => DEFAULT_N
            .iter()
            .copied()
            .filter(|&n| f.window_count().is_none_or(|len| n <= len) && f.is_feasible(n))
            .collect(),
    };
    if ns.is_empty() {
        bail!(UsageError(format!(
            "no feasible window of {f} among {DEFAULT_N:?}"
        )));
    }
    let tol = cfg.tolerance_or(default_tolerance())?;
    let r = density_report(&b.set, &f, &ns, b.set.predicted_density.clone(), tol)?;
    Ok(Output {
        command: "construct",
        passed: true,
        budget_exhausted: false,
        report: json!({
            "name": b.set.name(),
            "group": b.set.spec().to_string(),
            "paired_folner": f.to_string(),
            "provenance": b.set.provenance,
            "predicted_density": opt_rational(&b.set.predicted_density),
            "predicted_alpha": opt_rational(&b.set.predicted_alpha),
            "trace": to_value(&b.trace)?,
            "density": to_value(&r)?,
        }),
        csv: Some(r.to_csv()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Expect {
    Found,
    Absent,
}

pub fn search(cfg: &ExperimentConfig, certify: bool, expect: Option<Expect>) -> Result<Output> {
    let b = built_of(cfg)?;
    let (f, _) = density_folner(cfg, &b)?;
    let n = *cfg.n_values(&[1])?.last().expect("nonempty range");
    let spec = *f.spec();
    let shift = match cfg.shift.as_deref().unwrap_or("none") {
        "none" => ShiftMode::None,
        s => match s.split_once(':') {
            Some(("fixed", lit)) => ShiftMode::Fixed(spec.parse_element(lit.trim())?),
            Some(("pool", m)) => {
                let m: u64 = m
                    .trim()
                    .parse()
                    .map_err(|_| UsageError(format!("shift pool index {m:?}")))?;
                ShiftMode::Pool(f.window(m)?)
            }
            _ => bail!(UsageError(format!(
                "shift {s:?}; expected none, fixed:<element> or pool:<N>"
            ))),
        },
    };
    let p = SearchProblem::new(b.set.clone(), f.window(n)?, cfg.k.unwrap_or(2))
        .with_shift(shift)
        .restricted(cfg.restricted.unwrap_or(false))
        .with_budget(cfg.budget.unwrap_or_else(budget_from_env));
    let (report, found, exhausted) = if certify {
        let c = certify_avoidance(&p)?;
        let found = c.max_achievable_k >= p.k;
        (to_value(&c)?, found, !c.completed)
    } else {
        let w = find_witness(&p)?;
        (
            to_value(&w)?,
            w.found,
            w.status == SearchStatus::Inconclusive,
        )
    };
    let passed = match expect {
        None => true,
        Some(Expect::Found) => found,
        Some(Expect::Absent) => !found && !exhausted,
    };
    Ok(Output {
        command: "search",
        passed,
        budget_exhausted: exhausted,
        report: json!({
            "construction": b.set.name(),
            "folner": f.to_string(),
            "N": n,
            "mode": if certify { "certify" } else { "witness" },
            "result": report,
        }),
        csv: None,
    })
}

fn appendix_table(rows: &[AppendixRow]) -> Table {
    let mut t = Table::new(&[
        "recipe",
        "N",
        "window_size",
        "double_ratio",
        "half_ratio",
        "half_over_even",
        "kernel_saturation",
        "overlap",
        "passed",
    ]);
    for r in rows {
        t.push(vec![
            r.recipe.clone(),
            r.n.to_string(),
            r.window_size.to_string(),
            rational(&r.double_ratio),
            rational(&r.half_ratio),
            r.half_over_even.as_ref().map_or(String::new(), rational),
            rational(&r.kernel_saturation),
            rational(&r.overlap),
            r.passed().to_string(),
        ]);
    }
    t
}

#[derive(Serialize)]
struct SuiteRow<'a> {
    #[serde(flatten)]
    row: &'a AppendixRow,
    passed: bool,
}

pub fn verify_appendix(cfg: &ExperimentConfig) -> Result<Output> {
    let tol = AppendixTolerances {
        limit: cfg.tolerance_or(AppendixTolerances::default().limit)?,
        ..AppendixTolerances::default()
    };
    let rows = match (&cfg.recipe, &cfg.n) {
        (None, _) => shipped_suite(&tol)?,
        (Some(_), Some(_)) => {
            let f = folner_of(cfg)?;
            cfg.n_values(DEFAULT_N)?
                .into_iter()
                .map(|n| f.appendix_row(n, &tol))
                .collect::<sumsets_core::Result<_>>()?
        }
        (Some(_), None) => folner_of(cfg)?.appendix_suite(16, &tol)?,
    };
    let passed = rows.iter().all(AppendixRow::passed);
    let listed: Vec<SuiteRow<'_>> = rows
        .iter()
        .map(|row| SuiteRow {
            row,
            passed: row.passed(),
        })
        .collect();
    Ok(Output {
        command: "verify appendix",
        passed,
        budget_exhausted: false,
        report: json!({ "tolerances": to_value(&tol)?, "rows": to_value(&listed)? }),
        csv: Some(appendix_table(&rows).to_csv()?),
    })
}

/// `(group, recipe, N, default tolerance)` for the four table entries.
pub const INTRO_ROWS: &[(&str, &str, u64, (i64, i64))] = &[
    ("F3^w", "fpw(3)", 10, (1, 100)),
    ("Z^1", "box(1)", 200, (1, 100)),
    ("T2^1", "dyadic(1)", 16, (1, 100)),
    ("Z^1 x T2^2", "tri_lless(1,2)", 2, (1, 10)),
];

#[derive(Serialize)]
struct IntroRow {
    group: String,
    recipe: String,
    n: u64,
    window_size: usize,
    measured: String,
    measured_float: f64,
    claim: String,
    tolerance: String,
    within: bool,
}

pub fn table_intro(cfg: &ExperimentConfig) -> Result<Output> {
    let mut rows = Vec::new();
    for &(group, recipe, n, (tn, td)) in INTRO_ROWS {
        let f: FolnerSequence = recipe.parse()?;
        let w = f
            .window(n)
            .with_context(|| format!("{recipe} at N = {n}"))?;
        let measured = doubling_overlap(&w);
        let claim = alpha_of_group(f.spec());
        let tol = cfg.tolerance_or(ratio(tn, td))?;
        rows.push(IntroRow {
            group: group.to_string(),
            recipe: recipe.to_string(),
            n,
            window_size: w.len(),
            measured_float: to_f64(&measured),
            within: within(&measured, &claim, &tol),
            measured: rational(&measured),
            claim: rational(&claim),
            tolerance: rational(&tol),
        });
    }
    let mut table = Table::new(&[
        "group",
        "recipe",
        "N",
        "window_size",
        "measured",
        "claim",
        "tolerance",
        "within",
    ]);
    for r in &rows {
        table.push(vec![
            r.group.clone(),
            r.recipe.clone(),
            r.n.to_string(),
            r.window_size.to_string(),
            r.measured.clone(),
            r.claim.clone(),
            r.tolerance.clone(),
            r.within.to_string(),
        ]);
    }
    Ok(Output {
        command: "table intro",
        passed: rows.iter().all(|r| r.within),
        budget_exhausted: false,
        report: json!({ "rows": to_value(&rows)? }),
        csv: Some(table.to_csv()?),
    })
}

pub fn plot_sec45(cfg: &ExperimentConfig) -> Result<Output> {
    let text = cfg.construction.as_deref().unwrap_or("product(1,1)");
    let b = construct::build(text, None)?;
    let params = product_params(&b.set)?;
    let max_n = *cfg
        .n_values(DEFAULT_N)?
        .iter()
        .max()
        .expect("nonempty range");
    let rows = stripe_geometry(params, max_n)?;
    let mut table = Table::new(&["N", "m", "interval", "level", "in_a"]);
    for r in &rows {
        table.push(vec![
            r.n.to_string(),
            r.m.to_string(),
            r.interval.to_string(),
            r.level.to_string(),
            r.in_a.to_string(),
        ]);
    }
    Ok(Output {
        command: "plot-data sec45",
        passed: true,
        budget_exhausted: false,
        report: json!({ "folner": params.to_string(), "rows": to_value(&rows)? }),
        csv: Some(table.to_csv()?),
    })
}
