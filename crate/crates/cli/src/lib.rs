//! Command-line front end for the `interline` library.
//!
//! [`run`] executes a parsed command and returns the payload together with
//! the exit code, so the binary only prints.

pub mod args;
mod load;
pub mod output;

use anyhow::{bail, Result};
use interline::axioms::{audit, AuditReport, AxiomId, TrialConfig};
use interline::game::{convexity_check, core_check, pessimistic_game, shapley};
use interline::iata::{prorate_by_mileage, settle, RegionalFactorTable, SettleOptions};
use interline::model::validate;
use interline::rules::{allocate, rule_r3};
use interline::{Allocation, Problem, RuleKind, RuleConfig};
use serde_json::json;

use args::{Choice, Cli, Command, Format};
use output::{amount, render_json, render_table};

/// Exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_AUDIT_DEFECT: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: EXIT_OK }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let format = cli.format;
    match &cli.command {
        Command::Validate { problem, weights } => {
            let weights = load::weights_file(weights.as_deref())?;
            let mut p = load::problem_file(problem)?.into_problem();
            if let Some(w) = weights.system() {
                p.weights = Some(w);
            }
            validate_command(&p, format)
        }
        Command::Allocate { problem, rule, weights } => {
            let weights = load::weights_file(weights.as_deref())?;
            let p = load::valid_problem(problem, &weights)?;
            allocate_command(&p, *rule, &weights, format)
        }
        Command::Audit {
            rule,
            axiom,
            all,
            trials,
            seed,
            tol,
        } => {
            if *trials == 0 {
                bail!("--trials must be at least 1");
            }
            let config = TrialConfig {
                seed: *seed,
                trials: *trials,
                tolerance: *tol,
                ..TrialConfig::default()
            };
            let (rule, axiom) = if *all { (Choice::All, Choice::All) } else { (*rule, *axiom) };
            audit_command(rule, axiom, &config, format)
        }
        Command::Spf {
            segments,
            factors,
            atbp,
            paper_table_mode,
            rounding,
        } => {
            let mut options = if *paper_table_mode {
                SettleOptions::printed_tables()
            } else {
                SettleOptions::default()
            };
            options.rounding = (*rounding).into();
            let segments = load::segments(segments)?.segments;
            let table = RegionalFactorTable::from_file(&load::factors(factors)?);
            spf_command(&segments, *atbp, &table, options, format)
        }
        Command::Game { problem, tol } => {
            let p = load::valid_problem(problem, &load::WeightsFile::default())?;
            game_command(&p, *tol, format)
        }
    }
}

fn validate_command(p: &Problem, format: Format) -> Result<Output> {
    let report = validate(p);
    let stdout = match format {
        Format::Json => render_json(&json!({
            "ok": report.ok,
            "violations": report.violations.iter().map(|v| json!({
                "kind": v.kind,
                "description": v.kind.description(),
                "detail": v.detail,
            })).collect::<Vec<_>>(),
        })),
        Format::Table if report.ok => "ok\n".to_owned(),
        Format::Table => render_table(
            &["violation", "detail"],
            &report
                .violations
                .iter()
                .map(|v| vec![v.kind.description().to_owned(), v.detail.clone()])
                .collect::<Vec<_>>(),
        ),
    };
    let code = if report.ok { EXIT_OK } else { EXIT_INVALID };
    Ok(Output { stdout, code })
}

fn allocate_command(
    p: &Problem,
    choice: Choice<RuleKind>,
    weights: &load::WeightsFile,
    format: Format,
) -> Result<Output> {
    let per_passenger = weights.per_passenger();
    let mut results: Vec<(RuleKind, Allocation<f64>)> = Vec::new();
    let mut skipped = Vec::new();
    for kind in choice.expand(&RuleKind::ALL) {
        let rule = match kind {
            RuleKind::R4 if per_passenger.is_empty() && choice == Choice::All => {
                skipped.push(kind.name());
                continue;
            }
            RuleKind::R4 => RuleConfig::R4(per_passenger.clone()),
            k => RuleConfig::from_kind(k),
        };
        results.push((kind, allocate(p, &rule)?));
    }
    let stdout = match format {
        Format::Json => {
            let entry = |(kind, a): &(RuleKind, Allocation<f64>)| {
                json!({"rule": kind.name(), "allocation": output::allocation(a), "total": a.total()})
            };
            let mut payload = match choice {
                Choice::One(_) => entry(&results[0]),
                Choice::All => json!({"allocations": results.iter().map(entry).collect::<Vec<_>>()}),
            };
            if !skipped.is_empty() {
                payload["skipped"] = json!(skipped);
            }
            render_json(&payload)
        }
        Format::Table => {
            let mut headers = vec!["airline"];
            headers.extend(results.iter().map(|(k, _)| k.name()));
            let mut rows: Vec<Vec<String>> = p
                .airlines
                .iter()
                .map(|&i| {
                    let mut row = vec![i.to_string()];
                    row.extend(results.iter().map(|(_, a)| amount(a.amount(i))));
                    row
                })
                .collect();
            let mut total = vec!["total".to_owned()];
            total.extend(results.iter().map(|(_, a)| amount(a.total())));
            rows.push(total);
            render_table(&headers, &rows)
        }
    };
    Ok(Output::ok(stdout))
}

fn audit_command(
    rules: Choice<RuleKind>,
    axioms: Choice<AxiomId>,
    config: &TrialConfig,
    format: Format,
) -> Result<Output> {
    let rules = rules.expand(&RuleKind::ALL);
    let axioms = axioms.expand(&AxiomId::ALL);
    let mut reports: Vec<AuditReport<f64>> = Vec::new();
    for &rule in &rules {
        for &axiom in &axioms {
            reports.push(audit(rule, axiom, config)?);
        }
    }
    let defects: Vec<&AuditReport<f64>> = reports.iter().filter(|r| r.defect()).collect();
    for r in &defects {
        eprintln!(
            "defect: {} fails {} in {} of {} trials although it is expected to satisfy it",
            r.rule, r.axiom, r.failures, r.trials
        );
    }
    let stdout = match format {
        Format::Json if reports.len() == 1 => render_json(&reports[0].to_json()),
        Format::Json => render_json(&json!({
            "seed": config.seed,
            "trials": config.trials,
            "defects": defects.len(),
            "reports": reports.iter().map(AuditReport::to_json).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let mut headers = vec!["axiom"];
            headers.extend(rules.iter().map(|r| r.name()));
            let rows: Vec<Vec<String>> = axioms
                .iter()
                .map(|&axiom| {
                    let mut row = vec![axiom.label().to_owned()];
                    for &rule in &rules {
                        let r = reports
                            .iter()
                            .find(|r| r.rule == rule && r.axiom == axiom)
                            .expect("every cell audited");
                        let verdict = if r.failures == 0 { "Yes" } else { "No" };
                        let flag = if r.defect() { " !" } else { "" };
                        row.push(format!("{verdict} {}/{}{flag}", r.failures, r.trials));
                    }
                    row
                })
                .collect();
            let mut out = render_table(&headers, &rows);
            out.push_str(&format!(
                "\ncells show failures/trials; ! marks a failure where the rule is expected to hold ({} cells)\n",
                defects.len()
            ));
            out
        }
    };
    let code = if defects.is_empty() { EXIT_OK } else { EXIT_AUDIT_DEFECT };
    Ok(Output { stdout, code })
}

fn spf_command(
    segments: &[interline::iata::Segment<f64>],
    atbp: f64,
    table: &RegionalFactorTable<f64>,
    options: SettleOptions,
    format: Format,
) -> Result<Output> {
    let settlement = settle(segments, atbp, table, options)?;
    let mileage = prorate_by_mileage(atbp, segments)?;
    let stdout = match format {
        Format::Json => render_json(&json!({
            "atbp": atbp,
            "allocation": output::allocation(&settlement.amounts),
            "tpm_only": output::allocation(&mileage),
            "segments": settlement.trace.iter().map(|r| json!({
                "from": r.segment.origin.as_str(),
                "to": r.segment.destination.as_str(),
                "airline": r.segment.airline.0,
                "tpm": r.segment.tpm,
                "worldwide_weight": r.worldwide_weight,
                "adjusted_tpm": r.adjusted_tpm,
                "regional_factor": r.regional_factor,
                "spf": r.spf,
                "published_spf": r.segment.published_spf,
                "applied_spf": r.applied_spf,
            })).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let rows: Vec<Vec<String>> = settlement
                .trace
                .iter()
                .map(|r| {
                    vec![
                        format!("{}-{}", r.segment.origin, r.segment.destination),
                        r.segment.airline.to_string(),
                        amount(r.segment.tpm),
                        amount(r.worldwide_weight),
                        amount(r.adjusted_tpm),
                        amount(r.regional_factor),
                        r.spf.to_string(),
                        r.applied_spf.to_string(),
                    ]
                })
                .collect();
            let mut out = render_table(
                &["segment", "airline", "tpm", "weight", "adjusted", "factor", "spf", "applied"],
                &rows,
            );
            out.push('\n');
            let amounts: Vec<Vec<String>> = settlement
                .amounts
                .iter()
                .map(|(i, x)| vec![i.to_string(), amount(*x), amount(mileage.amount(i))])
                .collect();
            out.push_str(&render_table(&["airline", "amount", "tpm_only"], &amounts));
            out
        }
    };
    Ok(Output::ok(stdout))
}

fn game_command(p: &Problem, tol: f64, format: Format) -> Result<Output> {
    let game = pessimistic_game(p)?;
    let phi = shapley(&game)?;
    let r3 = rule_r3(p);
    let convexity = convexity_check(&game, tol)?;
    let core = core_check(&game, &phi, tol)?;
    let equals_r3 = phi.approx_eq(&r3, tol);
    let stdout = match format {
        Format::Json => render_json(&json!({
            "shapley": output::allocation(&phi),
            "r3": output::allocation(&r3),
            "equals_r3": equals_r3,
            "convex": convexity.convex,
            "convexity_witness": convexity.witness.map(|w| json!({
                "player": w.player.0,
                "smaller": w.smaller.iter().map(|a| a.0).collect::<Vec<_>>(),
                "larger": w.larger.iter().map(|a| a.0).collect::<Vec<_>>(),
            })),
            "shapley_in_core": core.in_core,
            "violated_coalition": core.violated_coalition.map(|c| game.members(c).iter().map(|a| a.0).collect::<Vec<_>>()),
        })),
        Format::Table => {
            let rows: Vec<Vec<String>> = p
                .airlines
                .iter()
                .map(|&i| vec![i.to_string(), amount(phi.amount(i)), amount(r3.amount(i))])
                .collect();
            let mut out = render_table(&["airline", "shapley", "r3"], &rows);
            out.push_str(&format!(
                "\nequals_r3: {equals_r3}\nconvex: {}\nshapley_in_core: {}\n",
                convexity.convex, core.in_core
            ));
            out
        }
    };
    Ok(Output::ok(stdout))
}
