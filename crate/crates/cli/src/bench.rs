//! Wall-clock timings, emitted as `operation,n,q,microseconds`.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use gauss_sums_core::characters::{kloosterman_bruteforce, kloosterman_table, value_ring};
use gauss_sums_core::gauss_sums::{
    gl_gauss_bruteforce, gl_gauss_closed, sl_gauss_bruteforce, sl_gauss_closed,
};
use gauss_sums_core::matrix::candidate_count;
use gauss_sums_core::{AdditiveCharacter, Field, MatrixFq, MultiplicativeCharacter};

use crate::cli::BenchArgs;
use crate::commands::{budget, factor_fields};
use crate::error::CliError;

pub const HEADER: &str = "operation,n,q,microseconds";

fn fastest<T>(repeats: usize, mut f: impl FnMut() -> T) -> Duration {
    (0..repeats.max(1))
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(f());
            start.elapsed()
        })
        .min()
        .expect("at least one repeat")
}

pub fn run(args: &BenchArgs) -> Result<String, CliError> {
    let budget = budget()?;
    let mut csv = String::from(HEADER);
    csv.push('\n');
    let mut row = |op: &str, n: usize, q: u64, t: Duration| {
        writeln!(csv, "{op},{n},{q},{}", t.as_micros()).expect("writing to a String");
    };

    for (p, e) in factor_fields(&args.fields)? {
        let field = Field::new(p, e)?;
        let q = field.q();
        let ring = value_ring(&field)?;
        let lambda = AdditiveCharacter::standard(&field, &ring)?;
        let chi = MultiplicativeCharacter::new(&field, &ring, 1 % (q - 1))?;
        let g = field.generator();
        for n in 1..=args.max_n {
            // full rank with det U = g, so the Kloosterman branch runs
            let mut u = MatrixFq::identity(n)?;
            u.set(n - 1, n - 1, g);

            row(
                "gl-closed",
                n,
                q,
                fastest(args.repeats, || gl_gauss_closed(&u, &chi, &lambda)),
            );
            row(
                "sl-closed",
                n,
                q,
                fastest(args.repeats, || sl_gauss_closed(&u, &lambda)),
            );
            if candidate_count(q, n) <= u128::from(budget) {
                let t = fastest(args.repeats, || {
                    gl_gauss_bruteforce(&u, &chi, &lambda, budget)
                });
                row("gl-oracle", n, q, t);
                let t = fastest(args.repeats, || sl_gauss_bruteforce(&u, &lambda, budget));
                row("sl-oracle", n, q, t);
            }
            row(
                "kloosterman-dp",
                n,
                q,
                fastest(args.repeats, || kloosterman_table(&lambda, n)),
            );
            let terms = u128::from(q - 1)
                .checked_pow(n as u32 - 1)
                .unwrap_or(u128::MAX);
            if terms <= u128::from(budget) {
                let t = fastest(args.repeats, || {
                    field
                        .units()
                        .map(|y| kloosterman_bruteforce(&lambda, n, y))
                        .collect::<Vec<_>>()
                });
                row("kloosterman-enum", n, q, t);
            }
        }
    }
    Ok(csv)
}
