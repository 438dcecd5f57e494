//! Chain output against the closed-form law: KS distance plus a moment
//! table.

use skewsim_core::analytic::{LawDescriptor, LawTransform};
use skewsim_core::chain::ChainSettings;
use skewsim_core::stats::{self, MomentRow, Shard};
use skewsim_core::{Error, RegimeTag, SkewConfig};

use crate::error::CliResult;
use crate::report::{ConfigEcho, MomentReport, ValidationReport};
use crate::runner;

/// One simulated draw, whichever regime produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRow {
    /// `U⋆`, or the local time `L` of the process started at 0 when both
    /// skewness parameters are negative.
    pub u_star: f64,
    pub censored: bool,
    pub jump_count: u64,
    pub second_local_time: f64,
}

/// Run `n` chains. Two negative parameters go through the two-stage
/// reduction, everything else through the direct chain.
pub fn chain_rows(
    cfg: &SkewConfig,
    settings: &ChainSettings,
    seed: u64,
    n: usize,
    threads: usize,
) -> CliResult<Vec<ChainRow>> {
    if cfg.regime().tag == RegimeTag::NegNeg {
        let s = runner::negneg_samples(cfg, settings, seed, n, threads)?;
        return Ok(s
            .iter()
            .map(|s| ChainRow {
                u_star: s.local_time,
                censored: s.hitting.censored,
                jump_count: s.hitting.jump_count,
                second_local_time: s.hitting.u_star,
            })
            .collect());
    }
    let s = runner::hitting_samples(cfg, settings, seed, n, threads)?;
    Ok(s
        .iter()
        .map(|s| ChainRow {
            u_star: s.u_star,
            censored: s.censored,
            jump_count: s.jump_count,
            second_local_time: s.second_local_time,
        })
        .collect())
}

pub fn censored_fraction(rows: &[ChainRow]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    rows.iter().filter(|r| r.censored).count() as f64 / rows.len() as f64
}

/// Name of the law and of the variable it governs.
pub fn law_name(law: &LawDescriptor) -> (String, String) {
    let (a, b) = (law.beta_a, law.beta_b);
    match law.transform {
        LawTransform::Reciprocal => (format!("Beta({a}, {b})"), "x/(beta1 U*)".into()),
        LawTransform::Direct => (format!("Beta({a}, {b})"), "beta1 U*/x".into()),
        LawTransform::ProductReciprocal { second_a, second_b } => (
            format!("Beta({a}, {b}) x Beta({second_a}, {second_b})"),
            "(1 - beta1 L/x)^-1".into(),
        ),
    }
}

fn row(quantity: &str, r: MomentRow) -> MomentReport {
    MomentReport {
        quantity: quantity.to_owned(),
        order: r.order,
        empirical: r.empirical,
        std_error: r.std_error,
        analytic: Some(r.analytic),
        pass: Some(r.pass),
        note: None,
    }
}

/// Moment rows of the Beta variable (always finite) and, for positive
/// `β1`, of `U⋆` itself where its moments exist.
pub fn moment_table(law: &LawDescriptor, values: &[f64]) -> skewsim_core::Result<Vec<MomentReport>> {
    let (_, quantity) = law_name(law);
    let beta: Vec<f64> = values.iter().map(|&v| law.beta_variable(v)).collect();
    let mut out = Vec::new();
    for k in 1..=2 {
        out.push(row(&quantity, stats::moment_check(&beta, Ok(law.beta_moment(k)), k)?));
    }
    if matches!(law.transform, LawTransform::ProductReciprocal { .. }) {
        return Ok(out);
    }
    for k in 1..=2 {
        match stats::moment_check(values, law.u_star_moment(k), k) {
            Ok(r) => out.push(row("U*", r)),
            Err(Error::InfiniteMoment { reason, .. }) => {
                let m = stats::moment(values, k)?;
                out.push(MomentReport {
                    quantity: "U*".into(),
                    order: k,
                    empirical: m.mean,
                    std_error: m.std_error,
                    analytic: None,
                    pass: None,
                    note: Some(reason),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// KS of the uncensored draws against the law of `cfg` plus the moment
/// table; passes when both do.
pub fn report_for(
    cfg: &SkewConfig,
    rows: &[ChainRow],
    seed: u64,
    bias_allowance: f64,
) -> CliResult<ValidationReport> {
    let law = LawDescriptor::for_config(cfg)?;
    let mut shard = Shard::default();
    for r in rows {
        shard.push(r.u_star, r.censored);
    }
    let mut cdf_error = None;
    let summary = shard.summarize(
        |v| {
            law.cdf(v).unwrap_or_else(|e| {
                cdf_error.get_or_insert(e);
                f64::NAN
            })
        },
        bias_allowance,
    )?;
    if let Some(e) = cdf_error {
        return Err(e.into());
    }
    let moments = moment_table(&law, &summary.sorted)?;
    let moments_ok = moments.iter().all(|m| m.pass != Some(false));
    let (name, quantity) = law_name(&law);
    Ok(ValidationReport {
        law: name,
        quantity,
        n: summary.n,
        ks: summary.ks,
        dkw99: summary.dkw99,
        bias_allowance,
        pass: summary.pass && moments_ok,
        moments,
        censored_fraction: summary.censored_fraction,
        seed,
        config: ConfigEcho::from(cfg),
    })
}

pub fn validate_chain(
    cfg: &SkewConfig,
    settings: &ChainSettings,
    seed: u64,
    n: usize,
    threads: usize,
    bias_allowance: f64,
) -> CliResult<ValidationReport> {
    // Refuse before simulating anything.
    LawDescriptor::for_config(cfg)?;
    let rows = chain_rows(cfg, settings, seed, n, threads)?;
    report_for(cfg, &rows, seed, bias_allowance)
}
