//! `mteval validate`: re-check a benchmark directory from its files alone.

use mteval_core::bundled;
use mteval_core::validate::{load_benchmark, validate_benchmark, CheckStatus, ValidateOptions};

use crate::context::{CliError, Context};
use crate::ValidateArgs;

pub fn cmd(ctx: &Context, args: ValidateArgs) -> Result<(), CliError> {
    let benchmark = load_benchmark(&args.benchmark)?;
    let options = if args.expect_reference {
        ValidateOptions {
            reference_counts: Some(bundled::reference_counts().to_vec()),
            expected_totals: Some(bundled::REFERENCE_TOTALS),
        }
    } else {
        ValidateOptions::default()
    };
    let report = validate_benchmark(&benchmark, ctx.registry(), &options);
    print!("{}", report.render_text());
    if report.passed() {
        Ok(())
    } else {
        let failures = report
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .count();
        Err(CliError::Data(format!(
            "validation failed: {failures} of {} checks",
            report.checks.len()
        )))
    }
}
