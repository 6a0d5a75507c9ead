use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

use gauss_sums_core::characters::value_ring;
use gauss_sums_core::field::factor_prime_power;
use gauss_sums_core::gauss_sums::{
    count_trace_closed, gl_gauss_bruteforce, gl_gauss_closed, sl_gauss_bruteforce, sl_gauss_closed,
    trace_histogram_bruteforce, verify_cell, GridCell,
};
use gauss_sums_core::{
    AdditiveCharacter, CaseLabel, CheckKind, CyclotomicInteger, CyclotomicRing, Error, Field,
    GridConfig, MatrixFq, MultiplicativeCharacter, SumReport, DEFAULT_ENUMERATION_BUDGET,
};
use serde_json::{json, Map, Value};

use crate::cli::{CountTraceArgs, EvalArgs, EvalGlArgs, FieldArgs, VerifyArgs};
use crate::error::{CliError, Status};
use crate::json;

pub const BUDGET_VAR: &str = "GAUSS_SUMS_BUDGET";

pub fn budget() -> Result<u64, CliError> {
    match std::env::var(BUDGET_VAR) {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            CliError::Usage(format!("{BUDGET_VAR}={raw:?} is not a nonnegative integer"))
        }),
        Err(_) => Ok(DEFAULT_ENUMERATION_BUDGET),
    }
}

pub fn field(args: FieldArgs) -> Result<Field, CliError> {
    Ok(Field::new(args.p, args.e)?)
}

/// Prime powers to `(p, e)`.
pub fn factor_fields(orders: &[u64]) -> Result<Vec<(u64, u32)>, CliError> {
    orders
        .iter()
        .map(|&q| {
            factor_prime_power(q)
                .ok_or_else(|| CliError::Usage(format!("{q} is not a prime power")))
        })
        .collect()
}

pub fn parse_matrix(field: &Field, text: &str, n: Option<usize>) -> Result<MatrixFq, CliError> {
    let rows: Vec<Vec<u64>> = serde_json::from_str(text)?;
    if let Some(n) = n {
        if rows.len() != n {
            return Err(CliError::Usage(format!(
                "--n {n} but --matrix has {} rows",
                rows.len()
            )));
        }
    }
    Ok(MatrixFq::from_rows(field, &rows)?)
}

/// Attaches the oracle value, or records why it was skipped.
fn with_oracle(
    mut report: SumReport,
    oracle: Option<Result<CyclotomicInteger, Error>>,
) -> Result<(Value, Status), CliError> {
    let mut skipped = None;
    match oracle {
        Some(Ok(v)) => report.oracle = Some(v),
        Some(Err(e @ Error::BudgetExceeded { .. })) => skipped = Some(e.to_string()),
        Some(Err(e)) => return Err(e.into()),
        None => {}
    }
    let status = Status::from_verified(report.verified() != Some(false));
    let mut value = json::report(&report);
    if let (Some(why), Value::Object(obj)) = (skipped, &mut value) {
        obj.insert("oracle_skipped".into(), why.into());
    }
    Ok((value, status))
}

fn lambda<'f>(
    field: &'f Field,
    ring: &Arc<CyclotomicRing>,
    a: u64,
) -> Result<AdditiveCharacter<'f>, CliError> {
    Ok(AdditiveCharacter::new(field, ring, field.element(a)?)?)
}

pub fn eval_gl(args: &EvalGlArgs) -> Result<(Value, Status), CliError> {
    let EvalGlArgs { eval, chi } = args;
    let field = field(eval.field)?;
    let ring = value_ring(&field)?;
    let u = parse_matrix(&field, &eval.matrix, eval.n)?;
    let lambda = lambda(&field, &ring, eval.lambda)?;
    let chi = MultiplicativeCharacter::new(&field, &ring, *chi)?;
    let closed = gl_gauss_closed(&u, &chi, &lambda)?;
    let rank = u.rank(&field);
    let report = SumReport {
        check: CheckKind::GlOracle,
        case: CaseLabel::for_gl(rank, u.dim(), chi.is_trivial()),
        n: u.dim(),
        p: field.p(),
        e: field.e(),
        q: field.q(),
        chi_index: Some(chi.index()),
        lambda_twist: lambda.twist().encoding(),
        rank,
        matrix: u.clone(),
        closed_form: closed,
        oracle: None,
    };
    let oracle = match eval.check {
        true => Some(gl_gauss_bruteforce(&u, &chi, &lambda, budget()?)),
        false => None,
    };
    with_oracle(report, oracle)
}

pub fn eval_sl(args: &EvalArgs) -> Result<(Value, Status), CliError> {
    let field = field(args.field)?;
    let ring = value_ring(&field)?;
    let u = parse_matrix(&field, &args.matrix, args.n)?;
    let lambda = lambda(&field, &ring, args.lambda)?;
    let closed = sl_gauss_closed(&u, &lambda)?;
    let rank = u.rank(&field);
    let report = SumReport {
        check: CheckKind::SlOracle,
        case: CaseLabel::for_sl(rank, u.dim()),
        n: u.dim(),
        p: field.p(),
        e: field.e(),
        q: field.q(),
        chi_index: None,
        lambda_twist: lambda.twist().encoding(),
        rank,
        matrix: u.clone(),
        closed_form: closed,
        oracle: None,
    };
    let oracle = match args.check {
        true => Some(sl_gauss_bruteforce(&u, &lambda, budget()?)),
        false => None,
    };
    with_oracle(report, oracle)
}

pub fn count_trace(args: &CountTraceArgs) -> Result<(Value, Status), CliError> {
    let field = field(args.field)?;
    if args.n == 0 {
        return Err(Error::InvalidDimension(0).into());
    }
    let betas = match args.beta {
        Some(b) => vec![field.element(b)?],
        None => field.elements().collect(),
    };
    let mut skipped = None;
    let histogram = if args.check {
        match trace_histogram_bruteforce(&field, args.n, budget()?) {
            Ok(h) => Some(h),
            Err(e @ Error::BudgetExceeded { .. }) => {
                skipped = Some(e.to_string());
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };

    let mut ok = true;
    let mut counts = Vec::with_capacity(betas.len());
    for beta in betas {
        let closed = count_trace_closed(&field, args.n, beta)?;
        let mut row = Map::new();
        row.insert("beta".into(), beta.encoding().into());
        row.insert("N_closed".into(), json::integer(&closed));
        if let Some(h) = &histogram {
            let brute = h[beta.encoding() as usize];
            ok &= closed == brute.into();
            row.insert("N_bruteforce".into(), brute.into());
        }
        counts.push(Value::Object(row));
    }

    let mut out = Map::new();
    out.insert("n".into(), args.n.into());
    out.insert("p".into(), field.p().into());
    out.insert("e".into(), field.e().into());
    out.insert("q".into(), field.q().into());
    out.insert("counts".into(), counts.into());
    if let Some(why) = skipped {
        out.insert("bruteforce_skipped".into(), why.into());
    }
    Ok((Value::Object(out), Status::from_verified(ok)))
}

pub fn grid_config(args: &VerifyArgs) -> Result<GridConfig, CliError> {
    Ok(GridConfig {
        max_n: args.max_n,
        fields: factor_fields(&args.fields)?,
        samples_per_rank: args.samples,
        chi_indices: args.chi.clone(),
        invariance_trials: args.invariance_trials,
        seed: args.seed,
        budget: budget()?,
    })
}

type CellResult = Result<Vec<SumReport>, Error>;

/// Runs every cell on a pool of scoped threads. Reports come back in cell
/// order whatever order the cells finish in.
pub fn run_grid(config: &GridConfig, threads: usize) -> Result<Vec<SumReport>, Error> {
    config.check_budget()?;
    let cells: Vec<GridCell> = config.cells();
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<CellResult>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let workers = threads.clamp(1, cells.len().max(1));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&cell) = cells.get(i) else { break };
                let result = verify_cell(config, cell);
                *slots[i]
                    .lock()
                    .expect("no worker panics while holding a slot") = Some(result);
            });
        }
    });
    let mut reports = Vec::new();
    for slot in slots {
        let result = slot
            .into_inner()
            .expect("workers finished")
            .expect("every cell ran");
        reports.extend(result?);
    }
    Ok(reports)
}

pub fn verify(args: &VerifyArgs) -> Result<(Value, Status), CliError> {
    let config = grid_config(args)?;
    let threads = args
        .threads
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, NonZeroUsize::get));
    let reports = run_grid(&config, threads)?;
    let passed = reports
        .iter()
        .filter(|r| r.verified() == Some(true))
        .count();
    let failed = reports.len() - passed;
    let out = json!({
        "reports": reports.iter().map(json::report).collect::<Vec<_>>(),
        "summary": {
            "cells": config.cells().len(),
            "passed": passed,
            "failed": failed,
        },
    });
    Ok((out, Status::from_verified(failed == 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gauss_sums_core::gauss_sums::verify_grid;

    #[test]
    fn fields_are_factored() {
        assert_eq!(
            factor_fields(&[2, 4, 9, 25]).unwrap(),
            vec![(2, 1), (2, 2), (3, 2), (5, 2)]
        );
        assert!(matches!(factor_fields(&[6]), Err(CliError::Usage(_))));
    }

    #[test]
    fn matrix_parsing() {
        let f = Field::new(3, 1).unwrap();
        let m = parse_matrix(&f, "[[1,2],[0,1]]", Some(2)).unwrap();
        assert_eq!(m.rows(), vec![vec![1, 2], vec![0, 1]]);
        assert!(matches!(
            parse_matrix(&f, "[[1,2],[0,1]]", Some(3)),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse_matrix(&f, "[[1,3],[0,1]]", None),
            Err(CliError::Core(_))
        ));
        assert!(matches!(
            parse_matrix(&f, "[[1,2],[0]]", None),
            Err(CliError::Core(_))
        ));
        assert!(matches!(
            parse_matrix(&f, "[1,2]", None),
            Err(CliError::MatrixJson(_))
        ));
    }

    #[test]
    fn parallel_grid_matches_sequential() {
        let config = GridConfig {
            max_n: 2,
            fields: vec![(2, 1), (3, 1), (2, 2)],
            invariance_trials: 3,
            ..GridConfig::default()
        };
        let sequential = verify_grid(&config).unwrap();
        for threads in [1, 2, 8] {
            assert_eq!(run_grid(&config, threads).unwrap(), sequential);
        }
    }
}
