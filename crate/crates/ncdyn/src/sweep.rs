//! Seeded parameter sweeps emitting CSV.
//!
//! A sweep file is one JSON object whose `kind` selects the experiment:
//!
//! ```json
//! {"kind": "quasi", "theta": 2, "intervals": [[0, 1], [1, 2]], "refine": [50, 100, 200]}
//! {"kind": "weyl", "dim": 4, "samples": 100}
//! {"kind": "oracle", "samples": 50, "max_rank": 3, "max_len": 3, "t_max": 4}
//! {"kind": "interaction", "max_q": 12}
//! ```

use ncdyn_core::cpdyn::DiscreteSemigroup;
use ncdyn_core::dilation::kraus_word_expectation;
use ncdyn_core::eigenlists::{interaction_lower_bound, l1_distance, EigenvalueList};
use ncdyn_core::moments::{moment, ordered_moment};
use ncdyn_core::offwhite::{default_delta, quasiorthogonality_diagnostic, CorrelationSpec, QuasiReport};
use ncdyn_core::opalg::trace_norm;
use ncdyn_core::{random, ComplexMatrix};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::json::csv_float;

fn default_dim() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SweepSpec {
    /// Quasiorthogonality diagnostic across refinements.
    Quasi {
        theta: f64,
        #[serde(default)]
        delta: Option<f64>,
        intervals: Vec<(f64, f64)>,
        refine: Vec<usize>,
    },
    /// ℓ¹ distance of spectra against trace distance for random state pairs.
    Weyl { dim: usize, samples: usize },
    /// Recursion, nested closed form and Kraus word sum on random inputs.
    Oracle {
        samples: usize,
        #[serde(default = "default_dim")]
        dim: usize,
        max_rank: usize,
        max_len: usize,
        t_max: u32,
    },
    /// Interaction bound for uniform lists against `2 − 2p²/q²`.
    Interaction { max_q: usize },
}

/// Runs the sweep; rows come out in a fixed order determined by `seed`.
pub fn run(spec: &SweepSpec, seed: u64) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec {
        SweepSpec::Quasi { theta, delta, intervals, refine } => {
            let c = CorrelationSpec::new(*theta, delta.unwrap_or_else(|| default_delta(*theta)))?;
            quasi_csv(&quasiorthogonality_diagnostic(&c, intervals, refine)?)
        }
        SweepSpec::Weyl { dim, samples } => {
            let mut rows = Vec::with_capacity(*samples);
            for s in 0..*samples {
                let rho = random::density(&mut rng, *dim);
                let sigma = random::density(&mut rng, *dim);
                let d = l1_distance(&rho.eigenvalue_list()?, &sigma.eigenvalue_list()?);
                let t = trace_norm(&(rho.matrix() - sigma.matrix()))?;
                rows.push(vec![s.to_string(), csv_float(d), csv_float(t), csv_float(t - d)]);
            }
            to_csv(&["sample", "l1_distance", "trace_distance", "slack"], rows)
        }
        SweepSpec::Oracle { samples, dim, max_rank, max_len, t_max } => {
            if *max_rank == 0 || *max_len == 0 {
                return Err(CliError::Invalid("max_rank and max_len must be positive".into()));
            }
            let mut rows = Vec::with_capacity(*samples);
            for s in 0..*samples {
                let r = 1 + random::index(&mut rng, *max_rank);
                let k = 1 + random::index(&mut rng, *max_len);
                let phi = random::unital_cp_map(&mut rng, *dim, r);
                let mut ints: Vec<u32> = (0..k).map(|_| random::index(&mut rng, *t_max as usize + 1) as u32).collect();
                ints.sort_unstable();
                let mats: Vec<ComplexMatrix> =
                    (0..k).map(|_| random::ginibre(&mut rng, *dim, *dim).scale_real(1.0 / (*dim as f64).sqrt())).collect();
                let times: Vec<f64> = ints.iter().map(|&t| t as f64).collect();
                let sg = DiscreteSemigroup::new(phi.clone());
                let a = moment(&sg, &times, &mats)?;
                let b = ordered_moment(&sg, &times, &mats)?;
                let c = kraus_word_expectation(&phi, &ints, &mats)?;
                let label = ints.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                rows.push(vec![s.to_string(), label, r.to_string(), csv_float(a.max_diff(&b)), csv_float(a.max_diff(&c))]);
            }
            to_csv(&["sample", "times", "r", "recursion_vs_nested", "recursion_vs_words"], rows)
        }
        SweepSpec::Interaction { max_q } => {
            let mut rows = Vec::new();
            for q in 2..=*max_q {
                for p in 1..q {
                    let bound = interaction_lower_bound(&EigenvalueList::uniform(p), &EigenvalueList::uniform(q))?;
                    let formula = 2.0 - 2.0 * (p * p) as f64 / (q * q) as f64;
                    rows.push(vec![p.to_string(), q.to_string(), csv_float(bound), csv_float(formula), csv_float((bound - formula).abs())]);
                }
            }
            to_csv(&["p", "q", "bound", "formula", "error"], rows)
        }
    }
}

/// CSV with header `n,sigma_min,hs_defect`.
pub fn quasi_csv(report: &QuasiReport) -> Result<String> {
    let rows = report.rows.iter().map(|r| vec![r.n.to_string(), csv_float(r.sigma_min), csv_float(r.hs_defect)]).collect();
    to_csv(&["n", "sigma_min", "hs_defect"], rows)
}

fn to_csv(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}
