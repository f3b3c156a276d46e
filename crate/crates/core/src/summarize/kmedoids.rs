//! PAM k-medoids (greedy BUILD followed by best-improvement SWAP) on a
//! precomputed squared-Euclidean distance matrix.

use crate::error::{Error, Result};
use crate::matrix::sq_dist;

/// Swap-iteration cap used by [`generate_summary`](super::generate_summary).
pub const DEFAULT_MAX_SWAPS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Selected point indices, ascending.
    pub medoids: Vec<usize>,
    /// Final objective.
    pub objective: f64,
    /// Objective after BUILD, then after every accepted swap.
    pub trace: Vec<f64>,
}

impl Clustering {
    pub fn swaps(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }
}

/// `sum_j min_{k in medoids} |x_j - x_k|^2`.
pub fn objective<P: AsRef<[f64]>>(points: &[P], medoids: &[usize]) -> Result<f64> {
    if medoids.is_empty() {
        return Err(Error::domain("medoid set is empty"));
    }
    if let Some(&bad) = medoids.iter().find(|&&m| m >= points.len()) {
        return Err(Error::domain(format!(
            "medoid index {bad} out of range for {} points",
            points.len()
        )));
    }
    check_points(points)?;
    Ok(points
        .iter()
        .map(|p| {
            medoids
                .iter()
                .map(|&m| sq_dist(p.as_ref(), points[m].as_ref()))
                .fold(f64::INFINITY, f64::min)
        })
        .sum())
}

fn check_points<P: AsRef<[f64]>>(points: &[P]) -> Result<()> {
    let Some(first) = points.first() else {
        return Ok(());
    };
    let dim = first.as_ref().len();
    for (i, p) in points.iter().enumerate() {
        let p = p.as_ref();
        if p.len() != dim {
            return Err(Error::shape(format!(
                "point {i} has {} coordinates, point 0 has {dim}",
                p.len()
            )));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "point {i} has a non-finite coordinate"
            )));
        }
    }
    Ok(())
}

struct DistMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistMatrix {
    fn new<P: AsRef<[f64]>>(points: &[P]) -> Self {
        let n = points.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = sq_dist(points[i].as_ref(), points[j].as_ref());
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        DistMatrix { n, d }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

/// Distance of every point to its nearest and second-nearest medoid, plus
/// which medoid is nearest.
struct Assignment {
    nearest: Vec<usize>,
    near: Vec<f64>,
    second: Vec<f64>,
}

impl Assignment {
    fn compute(dm: &DistMatrix, medoids: &[usize]) -> Self {
        let mut a = Assignment {
            nearest: vec![usize::MAX; dm.n],
            near: vec![f64::INFINITY; dm.n],
            second: vec![f64::INFINITY; dm.n],
        };
        for j in 0..dm.n {
            for &m in medoids {
                let d = dm.get(j, m);
                if d < a.near[j] {
                    a.second[j] = a.near[j];
                    a.near[j] = d;
                    a.nearest[j] = m;
                } else if d < a.second[j] {
                    a.second[j] = d;
                }
            }
        }
        a
    }

    fn total(&self) -> f64 {
        self.near.iter().sum()
    }
}

/// PAM k-medoids.
///
/// BUILD adds, one at a time, the point that lowers the objective most. SWAP
/// then repeatedly applies the single medoid/non-medoid exchange with the
/// largest strict decrease until none remains or `max_iters` swaps were made.
/// Ties always go to the lowest point index, so results are deterministic.
pub fn kmedoids<P: AsRef<[f64]>>(points: &[P], k: usize, max_iters: usize) -> Result<Clustering> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::domain(format!("k = {k} must lie in 1..={n}")));
    }
    check_points(points)?;
    let dm = DistMatrix::new(points);

    let mut medoids: Vec<usize> = Vec::with_capacity(k);
    let mut is_medoid = vec![false; n];
    let mut near = vec![f64::INFINITY; n];
    for _ in 0..k {
        let mut best: Option<(usize, f64)> = None;
        for c in (0..n).filter(|&c| !is_medoid[c]) {
            let cost: f64 = (0..n).map(|j| near[j].min(dm.get(j, c))).sum();
            if best.is_none_or(|(_, b)| cost < b) {
                best = Some((c, cost));
            }
        }
        let (c, _) = best.expect("k <= n leaves a candidate");
        medoids.push(c);
        is_medoid[c] = true;
        for (j, nj) in near.iter_mut().enumerate() {
            *nj = nj.min(dm.get(j, c));
        }
    }
    medoids.sort_unstable();

    let mut assign = Assignment::compute(&dm, &medoids);
    let mut current = assign.total();
    let mut trace = vec![current];
    for _ in 0..max_iters {
        let mut best: Option<(usize, usize, f64)> = None;
        for (slot, &m) in medoids.iter().enumerate() {
            for c in (0..n).filter(|&c| !is_medoid[c]) {
                let delta: f64 = (0..n)
                    .map(|j| {
                        let without = if assign.nearest[j] == m {
                            assign.second[j]
                        } else {
                            assign.near[j]
                        };
                        without.min(dm.get(j, c)) - assign.near[j]
                    })
                    .sum();
                if best.is_none_or(|(_, _, b)| delta < b) {
                    best = Some((slot, c, delta));
                }
            }
        }
        // Guard against accepting rounding noise as an improvement.
        let tol = current * 1e-12;
        match best {
            Some((slot, c, delta)) if delta < -tol => {
                is_medoid[medoids[slot]] = false;
                is_medoid[c] = true;
                medoids[slot] = c;
                medoids.sort_unstable();
                assign = Assignment::compute(&dm, &medoids);
                current = assign.total();
                trace.push(current);
            }
            _ => break,
        }
    }

    Ok(Clustering {
        medoids,
        objective: current,
        trace,
    })
}
