//! Batch checks of compiled strategies: a proof's machine against every
//! environment, a refutation's environment against a battery of machines.

use std::ops::RangeInclusive;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::search::adversary_runs;
use super::{compile_machine, counter_certificate, BatteryConfig, StrategyError};
use crate::calculus::{Proof, Refutation};
use crate::game::{GameState, Interpretation, Player, Valuation};
use crate::syntax::Var;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    /// (domain, valuation, table) combinations adjudicated.
    pub games: usize,
    /// Distinct settled runs explored, summed over domains and valuations.
    pub runs: usize,
    /// Human-readable description of each machine loss.
    pub losses: Vec<String>,
}

/// Tables to try at one domain size: all of them when there are at most
/// `2^max_bits`, otherwise `random_tables` seeded ones.
pub fn tables_for(
    sig: &crate::syntax::Signature,
    domain: u64,
    max_bits: usize,
    random_tables: usize,
    seed: u64,
) -> Vec<Interpretation> {
    Interpretation::enumerate(sig, domain, max_bits).unwrap_or_else(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ domain);
        (0..random_tables)
            .map(|_| Interpretation::random(sig, domain, &mut rng))
            .collect()
    })
}

/// Every valuation of `vars` over `0..domain`.
pub fn valuations(vars: &[Var], domain: u64) -> Vec<Valuation> {
    let mut out = vec![Valuation::new()];
    for x in vars {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..domain).map(move |c| {
                    let mut v = v.clone();
                    v.insert(x.clone(), c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Plays the proof's machine against exhaustive environment search.
/// Domains too small for the theorem's constants are skipped.
pub fn soundness_suite(
    proof: &Proof,
    domains: RangeInclusive<u64>,
    max_bits: usize,
    random_tables: usize,
    seed: u64,
) -> Result<SoundnessReport, StrategyError> {
    let f = proof
        .conclusion()
        .cloned()
        .ok_or_else(|| StrategyError::Certificate("empty proof".into()))?;
    let sig = f.signature();
    let vars: Vec<Var> = f.free_variables().into_iter().collect();
    let mut report = SoundnessReport::default();
    for d in domains {
        if f.constants().iter().any(|&c| c >= d) {
            continue;
        }
        let tables = tables_for(&sig, d, max_bits, random_tables, seed);
        for e in valuations(&vars, d) {
            let machine = compile_machine(proof, &e)?;
            let runs = adversary_runs(&machine, &f, d)?;
            report.runs += runs.len();
            for interp in &tables {
                let s = GameState::new(f.clone(), interp.clone(), e.clone())
                    .map_err(|err| StrategyError::Certificate(err.to_string()))?;
                report.games += 1;
                if let Some(r) = runs.iter().find(|r| s.wn_run(r) != Player::Machine) {
                    report.losses.push(format!(
                        "domain {d}, valuation {e}, table {}: run {:?}",
                        interp.to_json(),
                        r
                    ));
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletenessReport {
    pub machines: usize,
    /// Verified environment wins.
    pub defeated: usize,
    pub failures: Vec<String>,
}

/// Runs the refutation's environment against every machine of the battery
/// and verifies each counter-certificate.
pub fn completeness_suite(
    refutation: &Refutation,
    config: &BatteryConfig,
) -> Result<CompletenessReport, StrategyError> {
    let f = refutation
        .conclusion()
        .cloned()
        .ok_or_else(|| StrategyError::Certificate("empty refutation".into()))?;
    let valuation = super::compile_environment(refutation)?
        .initial_valuation()
        .clone();
    let mut report = CompletenessReport::default();
    for kind in config.machines() {
        let mut machine = kind.build(&f, &valuation, config.max_constant);
        report.machines += 1;
        match counter_certificate(refutation, machine.as_mut(), config.max_steps) {
            Ok(c) if c.winner() == Player::Environment => report.defeated += 1,
            Ok(c) => report
                .failures
                .push(format!("{}: machine wins {:?}", c.machine, c.run)),
            Err(e) => report.failures.push(format!("{}: {e}", machine.name())),
        }
    }
    Ok(report)
}
