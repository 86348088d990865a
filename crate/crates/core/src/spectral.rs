//! Adjacency and signless Laplacian tensors of uniform hypergraphs.
//!
//! Tensors are never materialized. The adjacency tensor has entry `1/(k-1)!`
//! at every ordering of every edge, so a product `A x^{k-1}` collapses to one
//! term per incident edge:
//!
//! ```text
//! (A x^{k-1})_i = sum over edges e containing i of prod_{j in e, j != i} x_j
//! (Q x^{k-1})_i = d_i x_i^{k-1} + (A x^{k-1})_i
//! ```
//!
//! [`spectral_radius`] runs a shifted power iteration and returns the final
//! Collatz-Wielandt bracket `min_i (T x^{k-1})_i / x_i^{k-1} <= rho <= max_i ...`,
//! which encloses the spectral radius for any strictly positive `x`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("vector has length {got}, graph has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("hypergraph is disconnected")]
    Disconnected,
    #[error("no convergence after {iterations} iterations: bracket [{lower}, {upper}]")]
    NoConvergence {
        lower: f64,
        upper: f64,
        iterations: usize,
    },
    #[error("matrix oracle needs a 2-uniform graph, got k = {0}")]
    NotTwoUniform(usize),
    #[error("invalid solver options: {0}")]
    BadOptions(String),
}

/// Which tensor to work with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tensor {
    /// Signless Laplacian `Q = D + A`.
    #[serde(alias = "q")]
    Signless,
    /// Adjacency `A`.
    #[serde(alias = "a")]
    Adjacency,
}

impl std::str::FromStr for Tensor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "q" | "signless" => Ok(Tensor::Signless),
            "a" | "adjacency" => Ok(Tensor::Adjacency),
            other => Err(format!("unknown tensor `{other}` (expected q or a)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shift {
    /// `1 + max degree`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub shift: Shift,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: 1e-10,
            max_iterations: 200_000,
            shift: Shift::Auto,
        }
    }
}

impl SolverOptions {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        if !(self.tolerance > 0.0) {
            return Err(SpectralError::BadOptions(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(SpectralError::BadOptions("max_iterations must be at least 1".into()));
        }
        if let Shift::Fixed(s) = self.shift {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(SpectralError::BadOptions(format!(
                    "shift must be finite and nonnegative, got {s}"
                )));
            }
        }
        Ok(())
    }
}

/// Converged spectral radius with its certifying bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Principal eigenvector, normalized so that `sum x_i^k = 1`.
    pub eigenvector: Vec<f64>,
    /// `max_i |(T x^{k-1})_i - value * x_i^{k-1}|`.
    pub residual: f64,
    pub iterations: usize,
}

impl SpectralResult {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

fn check_len(g: &Hypergraph, x: &[f64]) -> Result<(), SpectralError> {
    if x.len() != g.n() {
        return Err(SpectralError::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    Ok(())
}

fn adjacency_into(g: &Hypergraph, x: &[f64], y: &mut [f64]) {
    y.iter_mut().for_each(|v| *v = 0.0);
    for edge in g.edges() {
        for (pos, &i) in edge.iter().enumerate() {
            let prod: f64 = edge
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &j)| x[j])
                .product();
            y[i] += prod;
        }
    }
}

fn apply_into(g: &Hypergraph, tensor: Tensor, x: &[f64], y: &mut [f64]) {
    adjacency_into(g, x, y);
    if tensor == Tensor::Signless {
        let p = (g.k() - 1) as i32;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += g.degree(i) as f64 * x[i].powi(p);
        }
    }
}

/// `A(G) x^{k-1}`.
pub fn apply_a(g: &Hypergraph, x: &[f64]) -> Result<Vec<f64>, SpectralError> {
    apply(g, Tensor::Adjacency, x)
}

/// `Q(G) x^{k-1}`.
pub fn apply_q(g: &Hypergraph, x: &[f64]) -> Result<Vec<f64>, SpectralError> {
    apply(g, Tensor::Signless, x)
}

pub fn apply(g: &Hypergraph, tensor: Tensor, x: &[f64]) -> Result<Vec<f64>, SpectralError> {
    check_len(g, x)?;
    let mut y = vec![0.0; g.n()];
    apply_into(g, tensor, x, &mut y);
    Ok(y)
}

/// `x^T (T x^{k-1})` evaluated edge by edge:
/// each edge contributes `sum_{i in e} x_i^k + k prod_{i in e} x_i` for `Q`,
/// and only the product term for `A`.
pub fn rayleigh(g: &Hypergraph, x: &[f64], tensor: Tensor) -> f64 {
    let k = g.k();
    g.edges()
        .iter()
        .map(|e| {
            let prod: f64 = e.iter().map(|&i| x[i]).product();
            let diag: f64 = match tensor {
                Tensor::Signless => e.iter().map(|&i| x[i].powi(k as i32)).sum(),
                Tensor::Adjacency => 0.0,
            };
            diag + k as f64 * prod
        })
        .sum()
}

fn k_normalize(x: &mut [f64], k: usize) {
    let norm: f64 = x.iter().map(|v| v.powi(k as i32)).sum::<f64>().powf(1.0 / k as f64);
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Collatz-Wielandt bracket for the current iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Stepwise shifted power iteration.
///
/// Each step evaluates `y = T x^{k-1} + s x^{[k-1]}`, records the bracket of
/// `y_i / x_i^{k-1} - s`, then moves to `x <- y^{[1/(k-1)]}` rescaled to unit
/// k-norm. The shift keeps the iteration map primitive on connected graphs.
pub struct PowerIteration<'g> {
    graph: &'g Hypergraph,
    tensor: Tensor,
    shift: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    iterations: usize,
}

impl<'g> PowerIteration<'g> {
    pub fn new(
        graph: &'g Hypergraph,
        tensor: Tensor,
        opts: &SolverOptions,
    ) -> Result<Self, SpectralError> {
        opts.validate()?;
        if !graph.is_connected() {
            return Err(SpectralError::Disconnected);
        }
        let shift = match opts.shift {
            Shift::Auto => 1.0 + graph.max_degree() as f64,
            Shift::Fixed(s) => s,
        };
        let n = graph.n();
        let start = (n as f64).powf(-1.0 / graph.k() as f64);
        Ok(PowerIteration {
            graph,
            tensor,
            shift,
            x: vec![start; n],
            y: vec![0.0; n],
            iterations: 0,
        })
    }

    pub fn iterate(&self) -> &[f64] {
        &self.x
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Bracket at the current iterate, without advancing.
    pub fn bracket(&mut self) -> Bracket {
        let p = (self.graph.k() - 1) as i32;
        apply_into(self.graph, self.tensor, &self.x, &mut self.y);
        let mut lower = f64::INFINITY;
        let mut upper = f64::NEG_INFINITY;
        for (yi, xi) in self.y.iter_mut().zip(&self.x) {
            let xp = xi.powi(p);
            *yi += self.shift * xp;
            let ratio = *yi / xp;
            lower = lower.min(ratio);
            upper = upper.max(ratio);
        }
        Bracket {
            lower: lower - self.shift,
            upper: upper - self.shift,
        }
    }

    /// Advances one step using the values left by the last [`bracket`](Self::bracket) call.
    fn advance(&mut self) {
        let root = 1.0 / (self.graph.k() - 1) as f64;
        for (xi, yi) in self.x.iter_mut().zip(&self.y) {
            *xi = yi.powf(root);
        }
        k_normalize(&mut self.x, self.graph.k());
        self.iterations += 1;
    }

    /// Evaluates the bracket at the current iterate and then advances.
    pub fn step(&mut self) -> Bracket {
        let b = self.bracket();
        self.advance();
        b
    }
}

/// Spectral radius of `Q(G)` or `A(G)` for a connected hypergraph.
///
/// ```
/// use supertree::hypergraph::Hypergraph;
/// use supertree::spectral::{spectral_radius, SolverOptions, Tensor};
///
/// let edge = Hypergraph::new(4, 4, [[0, 1, 2, 3]]).unwrap();
/// let r = spectral_radius(&edge, Tensor::Signless, &SolverOptions::default()).unwrap();
/// assert!((r.value - 2.0).abs() < 1e-9);
/// assert!(r.lower <= r.value && r.value <= r.upper);
/// ```
pub fn spectral_radius(
    g: &Hypergraph,
    tensor: Tensor,
    opts: &SolverOptions,
) -> Result<SpectralResult, SpectralError> {
    let mut it = PowerIteration::new(g, tensor, opts)?;
    if g.m() == 0 {
        return Ok(SpectralResult {
            value: 0.0,
            lower: 0.0,
            upper: 0.0,
            eigenvector: it.x.clone(),
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut last = it.bracket();
    loop {
        if last.width() <= opts.tolerance {
            let value = last.midpoint();
            let x = it.x.clone();
            let tx = apply(g, tensor, &x)?;
            let p = (g.k() - 1) as i32;
            let residual = tx
                .iter()
                .zip(&x)
                .map(|(t, xi)| (t - value * xi.powi(p)).abs())
                .fold(0.0, f64::max);
            return Ok(SpectralResult {
                value,
                lower: last.lower,
                upper: last.upper,
                eigenvector: x,
                residual,
                iterations: it.iterations,
            });
        }
        if it.iterations >= opts.max_iterations {
            return Err(SpectralError::NoConvergence {
                lower: last.lower,
                upper: last.upper,
                iterations: it.iterations,
            });
        }
        it.advance();
        last = it.bracket();
    }
}

/// Best value of `x^T Q x^{k-1}` over `{x >= 0, sum x_i^k = 1}` found by
/// projected gradient ascent from random starts.
///
/// This is a lower bound on `q(G)` that shares no code with the power
/// iteration: the gradient is differentiated straight from the edge-wise
/// Rayleigh sum.
pub fn oracle_rayleigh_max(g: &Hypergraph, restarts: usize, steps: usize) -> f64 {
    oracle_rayleigh_max_seeded(g, restarts, steps, 0x5eed_0f_0a11)
}

pub fn oracle_rayleigh_max_seeded(g: &Hypergraph, restarts: usize, steps: usize, seed: u64) -> f64 {
    let n = g.n();
    let k = g.k();
    if g.m() == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Fixed step, scaled down with the degree bound of the gradient.
    let step = 1.0 / (k as f64 * (g.max_degree() as f64 + 1.0));
    let mut best = 0.0_f64;
    for _ in 0..restarts.max(1) {
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        k_normalize(&mut x, k);
        let mut grad = vec![0.0; n];
        for _ in 0..steps {
            rayleigh_gradient(g, &x, &mut grad);
            // Project onto the tangent space of the k-sphere, whose normal is x^{[k-1]}.
            let (gn, nn) = x.iter().zip(&grad).fold((0.0, 0.0), |(gn, nn), (xi, gi)| {
                let normal = xi.powi(k as i32 - 1);
                (gn + gi * normal, nn + normal * normal)
            });
            let along = if nn > 0.0 { gn / nn } else { 0.0 };
            for (xi, gi) in x.iter_mut().zip(&grad) {
                let normal = xi.powi(k as i32 - 1);
                *xi = (*xi + step * (gi - along * normal)).max(0.0);
            }
            k_normalize(&mut x, k);
            best = best.max(rayleigh(g, &x, Tensor::Signless));
        }
        best = best.max(rayleigh(g, &x, Tensor::Signless));
    }
    best
}

fn rayleigh_gradient(g: &Hypergraph, x: &[f64], grad: &mut [f64]) {
    let k = g.k() as f64;
    grad.iter_mut().for_each(|v| *v = 0.0);
    for e in g.edges() {
        for &i in e {
            let others: f64 = e.iter().filter(|&&j| j != i).map(|&j| x[j]).product();
            grad[i] += k * x[i].powi(g.k() as i32 - 1) + k * others;
        }
    }
}

/// Largest eigenvalue of the signless Laplacian matrix `D + A` of a
/// 2-uniform graph, by cyclic Jacobi rotations on the dense matrix.
pub fn matrix_oracle_q(g: &Hypergraph) -> Result<f64, SpectralError> {
    if g.k() != 2 {
        return Err(SpectralError::NotTwoUniform(g.k()));
    }
    let n = g.n();
    let mut a = vec![vec![0.0_f64; n]; n];
    for e in g.edges() {
        let (u, v) = (e[0], e[1]);
        a[u][v] += 1.0;
        a[v][u] += 1.0;
        a[u][u] += 1.0;
        a[v][v] += 1.0;
    }
    Ok(jacobi_eigenvalues(a).into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[p][r];
                    let aqr = a[q][r];
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}
