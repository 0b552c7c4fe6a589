//! Bounded Nelder-Mead simplex search on the unit box.
//!
//! Works in normalized coordinates: every candidate vertex is projected back
//! into `[0, 1]^d` before evaluation, so the caller maps box bounds onto the
//! unit cube once and the simplex scale stays uniform across heterogeneous
//! variables. The search is fully deterministic and tracks the best point it
//! ever evaluated, so it can never return something worse than its start.

/// Standard simplex coefficients plus the termination rule.
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once every vertex lies within this max-norm distance of the best.
    pub diameter_tol: f64,
    /// Offset used to build the initial simplex around the start point.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            diameter_tol: 1e-6,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LocalMinimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

struct Tracker<'a, F> {
    objective: &'a mut F,
    evals: usize,
    budget: usize,
    best_point: Vec<f64>,
    best_value: f64,
}

impl<'a, F: FnMut(&[f64]) -> f64> Tracker<'a, F> {
    fn eval(&mut self, point: &[f64]) -> Option<f64> {
        if self.evals >= self.budget {
            return None;
        }
        self.evals += 1;
        let value = (self.objective)(point);
        if value < self.best_value {
            self.best_value = value;
            self.best_point = point.to_vec();
        }
        Some(value)
    }
}

fn clamp_unit(point: &mut [f64]) {
    for c in point.iter_mut() {
        *c = c.clamp(0.0, 1.0);
    }
}

/// Minimizes `objective` over `[0, 1]^d` starting from `start`, spending at
/// most `budget` evaluations.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    objective: &mut F,
    start: &[f64],
    budget: usize,
    options: &SimplexOptions,
) -> LocalMinimum {
    let dim = start.len();
    assert!(dim >= 1, "cannot optimize a zero-dimensional configuration");

    let mut start = start.to_vec();
    clamp_unit(&mut start);

    let mut tracker = Tracker {
        objective,
        evals: 0,
        budget,
        best_point: start.clone(),
        best_value: f64::INFINITY,
    };

    // Initial simplex: the start plus one offset vertex per dimension,
    // stepping away from the nearest box face.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    if let Some(v) = tracker.eval(&start) {
        simplex.push((start.clone(), v));
    }
    for i in 0..dim {
        let mut vertex = start.clone();
        vertex[i] += if vertex[i] + options.initial_step <= 1.0 {
            options.initial_step
        } else {
            -options.initial_step
        };
        clamp_unit(&mut vertex);
        match tracker.eval(&vertex) {
            Some(v) => simplex.push((vertex, v)),
            None => break,
        }
    }

    if simplex.len() < dim + 1 {
        // Budget exhausted during initialization.
        return LocalMinimum {
            point: tracker.best_point,
            value: tracker.best_value,
            evals: tracker.evals,
        };
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));

        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < options.diameter_tol || tracker.evals >= tracker.budget {
            break;
        }

        let worst = simplex.len() - 1;
        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..worst].iter().map(|(v, _)| v[k]).sum::<f64>() / worst as f64)
            .collect();
        let direction: Vec<f64> = (0..dim)
            .map(|k| centroid[k] - simplex[worst].0[k])
            .collect();

        let candidate = |scale: f64| {
            let mut point: Vec<f64> = (0..dim).map(|k| centroid[k] + scale * direction[k]).collect();
            clamp_unit(&mut point);
            point
        };

        let reflected = candidate(options.reflection);
        let Some(f_reflected) = tracker.eval(&reflected) else {
            break;
        };

        if f_reflected < simplex[0].1 {
            let expanded = candidate(options.reflection * options.expansion);
            match tracker.eval(&expanded) {
                Some(f_expanded) if f_expanded < f_reflected => {
                    simplex[worst] = (expanded, f_expanded);
                }
                _ => simplex[worst] = (reflected, f_reflected),
            }
            continue;
        }

        if f_reflected < simplex[worst - 1].1 {
            simplex[worst] = (reflected, f_reflected);
            continue;
        }

        // Contract toward the better of the worst vertex and its reflection.
        let (contracted, against) = if f_reflected < simplex[worst].1 {
            (candidate(options.reflection * options.contraction), f_reflected)
        } else {
            (candidate(-options.contraction), simplex[worst].1)
        };
        match tracker.eval(&contracted) {
            Some(f_contracted) if f_contracted <= against => {
                simplex[worst] = (contracted, f_contracted);
                continue;
            }
            None => break,
            _ => {}
        }

        // Shrink everything toward the best vertex.
        let best = simplex[0].0.clone();
        let mut exhausted = false;
        for entry in simplex.iter_mut().skip(1) {
            for (c, b) in entry.0.iter_mut().zip(&best) {
                *c = b + options.shrink * (*c - b);
            }
            clamp_unit(&mut entry.0);
            match tracker.eval(&entry.0) {
                Some(v) => entry.1 = v,
                None => {
                    exhausted = true;
                    break;
                }
            }
        }
        if exhausted {
            break;
        }
    }

    LocalMinimum {
        point: tracker.best_point,
        value: tracker.best_value,
        evals: tracker.evals,
    }
}
