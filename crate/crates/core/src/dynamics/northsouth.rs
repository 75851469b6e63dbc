//! The north–south experiment: trajectories of rational currents under a
//! map and its inverse representative, and the dichotomy constants.

use alloc::string::String;
use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::currents::{distance, stable_current, Provenance, WeightSystem};
use crate::error::{Error, Result};
use crate::map::GraphMap;
use crate::spectral::{map_pf, tt_metric, EdgeLengths, DEFAULT_TOL};

use super::cancellation::{bcc_estimate, DEFAULT_SEARCH_DEPTH};
use super::goodness::goodness_constant;
use super::packed::{PackedConfig, PackedIterator};

/// Header of the trajectory table.
pub const CSV_HEADER: &str =
    "seed,step,len_simplicial,len_tt,ilt,goodness,gen_goodness,dist_plus,dist_minus,flag";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NorthSouthConfig {
    pub depth: usize,
    pub steps: usize,
    pub eps: f64,
}

impl Default for NorthSouthConfig {
    fn default() -> Self {
        NorthSouthConfig {
            depth: 3,
            steps: 40,
            eps: 1e-2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    Fixed,
    Converged,
    NotConverged,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Fixed => "fixed",
            Flag::Converged => "converged",
            Flag::NotConverged => "not-converged",
        }
    }
}

/// One step of one seed.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub step: usize,
    pub len_simplicial: f64,
    pub len_tt: f64,
    pub ilt: u64,
    /// `γ([f^m(c)])` with respect to `f` and `C`.
    pub goodness: f64,
    /// `γ'([g^m(c)])` with respect to `g` and `C'`.
    pub gen_goodness: f64,
    pub dist_plus: f64,
    pub dist_minus: f64,
    pub flag: Flag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedRun {
    pub seed: String,
    pub fixed: bool,
    pub rows: Vec<Row>,
    /// First step with `dist_plus < ε`.
    pub first_plus: Option<usize>,
    pub first_minus: Option<usize>,
    /// Set when iteration stopped early; `rows` holds the steps before it.
    pub error: Option<Error>,
}

impl SeedRun {
    pub fn converged(&self) -> bool {
        self.error.is_none()
            && (self.fixed || (self.first_plus.is_some() && self.first_minus.is_some()))
    }
}

/// Normalized maps and the constants the experiment needs.
#[derive(Clone, Debug)]
pub struct NorthSouth {
    pub f: GraphMap,
    pub g: GraphMap,
    pub power_f: usize,
    pub power_g: usize,
    pub cf: usize,
    pub cg: usize,
    pub c: usize,
    pub c_prime: usize,
    /// PF eigenvalue of the normalized `f`.
    pub lambda: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub tt: EdgeLengths,
    pub mu_plus: WeightSystem<f64>,
    pub mu_minus: WeightSystem<f64>,
    pub config: NorthSouthConfig,
}

impl NorthSouth {
    /// Normalizes `f` and its inverse representative `g` and computes `μ±`.
    pub fn prepare(f: &GraphMap, g: &GraphMap, config: NorthSouthConfig) -> Result<NorthSouth> {
        if config.depth == 0 || config.eps <= 0.0 {
            return Err(Error::Invalid("depth and ε must be positive".into()));
        }
        let lambda_plus = map_pf(f, DEFAULT_TOL)?.lambda;
        let lambda_minus = map_pf(g, DEFAULT_TOL)?.lambda;
        let (power_f, fk) = f.normalize_power()?;
        let (power_g, gk) = g.normalize_power()?;
        let pf = map_pf(&fk, DEFAULT_TOL)?;
        let cf = bcc_estimate(&fk, DEFAULT_SEARCH_DEPTH).configured_bound;
        let cg = bcc_estimate(&gk, DEFAULT_SEARCH_DEPTH).configured_bound;
        let c = goodness_constant(cf, fk.min_image_len())?;
        let c_prime = goodness_constant(cg, gk.min_image_len())?;
        let mu_plus = stable_current(&fk, config.depth, DEFAULT_TOL, Provenance::Stable)?;
        let mu_minus = stable_current(&gk, config.depth, DEFAULT_TOL, Provenance::Unstable)?;
        Ok(NorthSouth {
            tt: tt_metric(&pf),
            lambda: pf.lambda,
            f: fk,
            g: gk,
            power_f,
            power_g,
            cf,
            cg,
            c,
            c_prime,
            lambda_plus,
            lambda_minus,
            mu_plus,
            mu_minus,
            config,
        })
    }

    /// Whether `η_c` is fixed: `[f(c)]` is `c` or `c^-1`.
    pub fn is_fixed(&self, c: &Circuit) -> Result<bool> {
        let image = self.f.apply_circuit(c)?;
        Ok(image == *c || image == c.inverse())
    }

    /// Trajectory of one seed; `cf` lives in the graph of `f`, `cg` is the
    /// same conjugacy class in the graph of `g`. Errors while iterating end
    /// the run early and are recorded in the result.
    pub fn run_seed(&self, seed: &str, cf: &Circuit, cg: &Circuit) -> Result<SeedRun> {
        let fixed = self.is_fixed(cf)?;
        let mut run = SeedRun {
            seed: seed.into(),
            fixed,
            rows: Vec::new(),
            first_plus: None,
            first_minus: None,
            error: None,
        };
        if let Err(e) = self.fill(&mut run, cf, cg) {
            run.error = Some(e);
        }
        Ok(run)
    }

    fn fill(&self, run: &mut SeedRun, cf: &Circuit, cg: &Circuit) -> Result<()> {
        let r = self.config.depth;
        let eps = self.config.eps;
        let mut fit = PackedIterator::new(&self.f, PackedConfig::new(r, self.cf))?;
        let mut git = PackedIterator::new(&self.g, PackedConfig::new(r, self.cg))?;
        let mut pf = fit.start(cf)?;
        let mut pg = git.start(cg)?;
        for step in 0..=self.config.steps {
            if step > 0 {
                pf = fit.step(&pf)?;
                pg = git.step(&pg)?;
            }
            let wf = fit.weight_system(&pf, r)?;
            let wg = git.weight_system(&pg, r)?;
            let dist_plus = distance(&wf, &self.mu_plus, r)?;
            let dist_minus = distance(&wg, &self.mu_minus, r)?;
            let len_tt = fit
                .edge_counts(&pf)?
                .iter()
                .zip(self.tt.as_slice())
                .map(|(&k, &l)| k * l)
                .sum();
            if run.first_plus.is_none() && dist_plus < eps {
                run.first_plus = Some(step);
            }
            if run.first_minus.is_none() && dist_minus < eps {
                run.first_minus = Some(step);
            }
            let flag = if run.fixed {
                Flag::Fixed
            } else if dist_plus < eps && dist_minus < eps {
                Flag::Converged
            } else {
                Flag::NotConverged
            };
            run.rows.push(Row {
                step,
                len_simplicial: pf.len(),
                len_tt,
                ilt: pf.ilt(),
                goodness: pf.goodness(self.c),
                gen_goodness: pg.goodness(self.c_prime),
                dist_plus,
                dist_minus,
                flag,
            });
        }
        Ok(())
    }
}

/// Empirical constants of the dichotomy: from step `m0` on, every seed has
/// either `γ >= δ1` throughout or `ILT_m / ILT_0 <= 1 - δ2` throughout.
#[derive(Clone, Debug, PartialEq)]
pub struct Dichotomy {
    pub delta1: f64,
    pub delta2: f64,
    pub m0: usize,
    /// Per seed: `true` for the goodness branch, `false` for the ILT branch.
    pub goodness_branch: Vec<bool>,
}

/// Searches `(δ1, δ2)` maximizing `min(δ1, δ2)` at the least `M0` for which
/// both constants are positive. Each seed is given as `(γ_m, ILT_m)` for
/// `m = 0..=n`.
pub fn dichotomy(trajectories: &[(Vec<f64>, Vec<u64>)]) -> Option<Dichotomy> {
    let n = trajectories.iter().map(|(g, _)| g.len()).min()?;
    for m0 in 0..n {
        // per seed: worst goodness and worst ILT ratio from m0 on
        let stats: Vec<(f64, f64)> = trajectories
            .iter()
            .map(|(g, ilt)| {
                let gs = g[m0..].iter().copied().fold(f64::INFINITY, f64::min);
                let rs = if ilt[0] == 0 {
                    f64::INFINITY
                } else {
                    ilt[m0..]
                        .iter()
                        .map(|&x| x as f64 / ilt[0] as f64)
                        .fold(0.0, f64::max)
                };
                (gs, rs)
            })
            .collect();
        let mut best: Option<(f64, f64, f64)> = None;
        let mut thresholds: Vec<f64> = stats.iter().map(|s| s.0).filter(|&x| x > 0.0).collect();
        thresholds.push(f64::INFINITY);
        for &t in &thresholds {
            let worst_ratio = stats
                .iter()
                .filter(|s| s.0 < t)
                .map(|s| s.1)
                .fold(0.0, f64::max);
            let d2 = 1.0 - worst_ratio;
            let d1 = if t.is_finite() {
                t
            } else {
                stats
                    .iter()
                    .map(|s| s.0)
                    .filter(|&x| x > 0.0)
                    .fold(1.0, f64::min)
            };
            if d1 > 0.0 && d2 > 0.0 {
                let score = d1.min(d2);
                if best.map_or(true, |b| score > b.0) {
                    best = Some((score, d1, d2));
                }
            }
        }
        if let Some((_, delta1, delta2)) = best {
            let goodness_branch = stats.iter().map(|s| s.0 >= delta1).collect();
            return Some(Dichotomy {
                delta1,
                delta2,
                m0,
                goodness_branch,
            });
        }
    }
    None
}
