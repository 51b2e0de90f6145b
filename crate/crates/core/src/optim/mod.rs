//! Multi-start simplex minimization of the open-curve lengths over the
//! admissible parameter region.

mod nelder_mead;

pub use nelder_mead::{nelder_mead, NelderMeadConfig, NelderMeadOutcome};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::family::{length_l2, length_l3, relaxed_lengths, validate_params, Condition, ParamTriple};

pub const DEFAULT_PENALTY_WEIGHT: f64 = 1e3;
pub const DEFAULT_BUDGET: usize = 4000;
/// Constraints with residual below this are reported as active.
pub const ACTIVE_TOL: f64 = 1e-3;
/// Simplex diameter at which a descent is considered converged.
pub const X_TOL: f64 = 1e-9;
const MAX_RESTARTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    L2,
    L3,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "L2" => Ok(Family::L2),
            "L3" => Ok(Family::L3),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub family: Family,
    pub penalty_weight: f64,
}

impl ObjectiveSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            penalty_weight: DEFAULT_PENALTY_WEIGHT,
        }
    }
}

/// Box from which the default starting lattice is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub c: (f64, f64),
}

impl Default for SearchBox {
    fn default() -> Self {
        Self {
            a: (0.55, 0.95),
            b: (0.01, 0.2),
            c: (0.6, 0.95),
        }
    }
}

impl SearchBox {
    /// Evenly spaced lattice with `counts[i]` levels per coordinate, `a` slowest.
    pub fn lattice(&self, counts: [usize; 3]) -> Vec<[f64; 3]> {
        let level = |(lo, hi): (f64, f64), n: usize, k: usize| {
            if n <= 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(counts.iter().product());
        for i in 0..counts[0] {
            for j in 0..counts[1] {
                for k in 0..counts[2] {
                    out.push([
                        level(self.a, counts[0], i),
                        level(self.b, counts[1], j),
                        level(self.c, counts[2], k),
                    ]);
                }
            }
        }
        out
    }

    /// `n` uniform random points, reproducible from `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<[f64; 3]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                [
                    rng.gen_range(self.a.0..self.a.1),
                    rng.gen_range(self.b.0..self.b.1),
                    rng.gen_range(self.c.0..self.c.1),
                ]
            })
            .collect()
    }
}

/// The default 16 starts: 4 levels of `a`, 2 of `b`, 2 of `c`.
pub fn default_starts() -> Vec<[f64; 3]> {
    SearchBox::default().lattice([4, 2, 2])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimResult {
    pub argmin: [f64; 3],
    pub min_length: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub active_constraints: Vec<Condition>,
    pub starts_used: usize,
}

fn exact_length(family: Family, p: &ParamTriple) -> Result<f64> {
    match family {
        Family::L2 => length_l2(p),
        Family::L3 => length_l3(p),
    }
}

fn violation(a: f64, b: f64, c: f64) -> f64 {
    Condition::ALL
        .iter()
        .map(|cond| {
            let r = cond.residual(a, b, c);
            if r.is_finite() {
                r.min(0.0).powi(2)
            } else {
                0.0
            }
        })
        .sum()
}

/// Length on the admissible set, and a relaxed length plus a quadratic
/// penalty elsewhere. Infinite where no length can be evaluated.
pub fn penalized_objective(spec: &ObjectiveSpec, a: f64, b: f64, c: f64) -> f64 {
    if ![a, b, c].iter().all(|x| x.is_finite()) || a <= 0.5 || c <= 0.0 {
        return f64::INFINITY;
    }
    if validate_params(a, b, c).is_empty() {
        if let Ok(len) = exact_length(spec.family, &ParamTriple::unchecked(a, b, c)) {
            return len;
        }
    }
    match relaxed_lengths(a, b, c) {
        Some((l2, l3)) => {
            let len = match spec.family {
                Family::L2 => l2,
                Family::L3 => l3,
            };
            len + spec.penalty_weight * violation(a, b, c)
        }
        None => f64::INFINITY,
    }
}

/// Conditions whose residual at `x` is below [`ACTIVE_TOL`].
pub fn active_constraints(x: [f64; 3]) -> Vec<Condition> {
    Condition::ALL
        .into_iter()
        .filter(|c| c.residual(x[0], x[1], x[2]) < ACTIVE_TOL)
        .collect()
}

/// Result of minimizing an arbitrary function from several starts.
#[derive(Debug, Clone, PartialEq)]
pub struct FnMinimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Restarted simplex descent from one start. The seed perturbs the initial
/// step sizes.
fn descend<F>(f: &F, x0: &[f64], base_steps: &[f64], budget: usize, seed: u64) -> FnMinimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps: Vec<f64> = base_steps
        .iter()
        .map(|s| s * (1.0 + 0.25 * rng.gen_range(-1.0..1.0)))
        .collect();
    let mut best = FnMinimum {
        x: x0.to_vec(),
        f: f(x0),
        iterations: 0,
        evaluations: 1,
        converged: false,
    };
    for _ in 0..MAX_RESTARTS {
        let left = budget.saturating_sub(best.evaluations);
        if left == 0 {
            break;
        }
        let cfg = NelderMeadConfig {
            max_evals: left,
            x_tol: X_TOL,
        };
        let out = nelder_mead(f, &best.x, &steps, &cfg);
        best.iterations += out.iterations;
        best.evaluations += out.evals;
        let improved = out.f < best.f;
        if improved {
            best.x = out.x;
            best.f = out.f;
        }
        best.converged = out.converged;
        if !out.converged || (!improved && best.converged) {
            break;
        }
        // restart with a fresh, smaller simplex to guard against collapse
        for s in &mut steps {
            *s *= 0.1;
        }
    }
    best
}

/// Minimizes `f` from each start and returns the best result, ties broken
/// lexicographically on the argument.
pub fn minimize_fn<F>(
    f: F,
    starts: &[Vec<f64>],
    steps: &[f64],
    budget: usize,
    seed: u64,
    exec: Execution,
) -> Option<FnMinimum>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let runs = exec.map_range(starts.len(), |i| {
        descend(&f, &starts[i], steps, budget, seed.wrapping_add(i as u64))
    });
    runs.into_iter().min_by(|a, b| {
        a.f.total_cmp(&b.f).then_with(|| {
            a.x.iter()
                .zip(&b.x)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    })
}

const BASE_STEPS: [f64; 3] = [0.02, 0.01, 0.02];

pub fn minimize(spec: &ObjectiveSpec, starts: &[[f64; 3]], budget: usize, seed: u64) -> Result<OptimResult> {
    minimize_with(spec, starts, budget, seed, Execution::default())
}

pub fn minimize_with(
    spec: &ObjectiveSpec,
    starts: &[[f64; 3]],
    budget: usize,
    seed: u64,
    exec: Execution,
) -> Result<OptimResult> {
    if starts.is_empty() {
        return Err(Error::InvalidArgument("no starting points".into()));
    }
    if budget < 100 {
        return Err(Error::InvalidArgument(format!(
            "budget {budget} is below the minimum of 100 evaluations"
        )));
    }
    if spec.penalty_weight.is_nan() || spec.penalty_weight <= 0.0 {
        return Err(Error::InvalidArgument("penalty weight must be positive".into()));
    }
    let objective = |x: &[f64]| penalized_objective(spec, x[0], x[1], x[2]);
    let runs = exec.map_range(starts.len(), |i| {
        descend(&objective, &starts[i], &BASE_STEPS, budget, seed.wrapping_add(i as u64))
    });
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();

    let mut admissible: Vec<&FnMinimum> = runs
        .iter()
        .filter(|r| validate_params(r.x[0], r.x[1], r.x[2]).is_empty() && r.f.is_finite())
        .collect();
    admissible.sort_by(|a, b| {
        a.f.total_cmp(&b.f).then_with(|| {
            a.x.iter()
                .zip(&b.x)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(match admissible.first() {
        Some(best) => {
            let argmin = [best.x[0], best.x[1], best.x[2]];
            OptimResult {
                argmin,
                min_length: best.f,
                iterations,
                evaluations,
                converged: best.converged,
                active_constraints: active_constraints(argmin),
                starts_used: starts.len(),
            }
        }
        None => OptimResult {
            argmin: [f64::NAN; 3],
            min_length: f64::INFINITY,
            iterations,
            evaluations,
            converged: false,
            active_constraints: Vec::new(),
            starts_used: starts.len(),
        },
    })
}

/// Nested 9x9x9 grid search around `center`, shrinking the radius by 4 per
/// level and recentring on the best admissible grid point.
pub fn grid_refine(spec: &ObjectiveSpec, center: [f64; 3], radius: f64, levels: usize) -> Result<OptimResult> {
    grid_refine_with(spec, center, radius, levels, Execution::default())
}

pub fn grid_refine_with(
    spec: &ObjectiveSpec,
    center: [f64; 3],
    radius: f64,
    levels: usize,
    exec: Execution,
) -> Result<OptimResult> {
    let violated = validate_params(center[0], center[1], center[2]);
    if !violated.is_empty() {
        return Err(Error::Inadmissible(violated));
    }
    if radius.is_nan() || radius < 0.0 {
        return Err(Error::InvalidArgument(format!("radius {radius} must be non-negative")));
    }
    const N: usize = 9;
    let mut best = (penalized_objective(spec, center[0], center[1], center[2]), center);
    let mut r = radius;
    let mut evaluations = 1;
    for _ in 0..levels {
        let c = best.1;
        let offset = |k: usize| r * (k as f64 - 4.0) / 4.0;
        let values = exec.map_range(N * N * N, |idx| {
            let x = [
                c[0] + offset(idx / (N * N)),
                c[1] + offset((idx / N) % N),
                c[2] + offset(idx % N),
            ];
            let ok = validate_params(x[0], x[1], x[2]).is_empty();
            (if ok { penalized_objective(spec, x[0], x[1], x[2]) } else { f64::INFINITY }, x)
        });
        evaluations += values.len();
        for (f, x) in values {
            if f < best.0 || (f == best.0 && x < best.1) {
                best = (f, x);
            }
        }
        r /= 4.0;
    }
    Ok(OptimResult {
        argmin: best.1,
        min_length: best.0,
        iterations: levels,
        evaluations,
        converged: true,
        active_constraints: active_constraints(best.1),
        starts_used: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{L2_PUBLISHED, L3_PUBLISHED};

    #[test]
    fn random_starts_are_reproducible_and_in_the_box() {
        let b = SearchBox::default();
        let s = b.sample(32, 9);
        assert_eq!(s, b.sample(32, 9));
        assert_ne!(s, b.sample(32, 10));
        assert!(s.iter().all(|x| (b.a.0..b.a.1).contains(&x[0])
            && (b.b.0..b.b.1).contains(&x[1])
            && (b.c.0..b.c.1).contains(&x[2])));
    }

    #[test]
    fn admissible_value_is_the_length() {
        let spec = ObjectiveSpec::new(Family::L3);
        let [a, b, c] = L3_PUBLISHED;
        let p = ParamTriple::new(a, b, c).unwrap();
        assert_eq!(penalized_objective(&spec, a, b, c), length_l3(&p).unwrap());
    }

    #[test]
    fn infeasible_points_are_penalized() {
        let spec = ObjectiveSpec::new(Family::L2);
        assert_eq!(penalized_objective(&spec, 0.4, 0.1, 0.9), f64::INFINITY);
        let published = penalized_objective(&spec, L2_PUBLISHED[0], L2_PUBLISHED[1], L2_PUBLISHED[2]);
        // c >= 1 violates (3)
        let v = penalized_objective(&spec, 0.78, 0.04, 1.2);
        assert!(v > published);
    }

    #[test]
    fn quadratic_hook() {
        let target = [0.3, -1.2, 2.5];
        let f = |x: &[f64]| {
            x.iter()
                .zip(target)
                .enumerate()
                .map(|(i, (x, t))| (i + 1) as f64 * (x - t).powi(2))
                .sum::<f64>()
        };
        let m = minimize_fn(f, &[vec![0.0; 3], vec![1.0; 3]], &[0.5; 3], 5000, 0, Execution::default()).unwrap();
        for (x, t) in m.x.iter().zip(target) {
            assert!((x - t).abs() < 1e-8);
        }
    }

    #[test]
    fn grid_refine_zero_radius_returns_center() {
        let spec = ObjectiveSpec::new(Family::L3);
        let r = grid_refine(&spec, L3_PUBLISHED, 0.0, 3).unwrap();
        assert_eq!(r.argmin, L3_PUBLISHED);
        assert_eq!(r.min_length, penalized_objective(&spec, L3_PUBLISHED[0], L3_PUBLISHED[1], L3_PUBLISHED[2]));
        assert!(grid_refine(&spec, [0.4, 0.1, 0.9], 0.1, 2).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        let spec = ObjectiveSpec::new(Family::L2);
        assert!(minimize(&spec, &[], 1000, 0).is_err());
        assert!(minimize(&spec, &default_starts(), 50, 0).is_err());
    }

    #[test]
    fn no_admissible_start_reports_failure() {
        let spec = ObjectiveSpec::new(Family::L2);
        let r = minimize(&spec, &[[0.3, 0.0, 0.5]], 200, 0).unwrap();
        assert!(!r.converged);
        assert!(r.min_length.is_infinite());
    }

    #[test]
    fn default_lattice_has_sixteen_starts_in_the_box() {
        let s = default_starts();
        assert_eq!(s.len(), 16);
        assert_eq!(s[0], [0.55, 0.01, 0.6]);
        assert_eq!(s[15], [0.95, 0.2, 0.95]);
    }
}
