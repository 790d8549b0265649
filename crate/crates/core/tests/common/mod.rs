//! Shared fixtures and independent oracles for the integration suites.
//!
//! The oracles deliberately avoid the crate's jet machinery: expressions are
//! evaluated by a plain recursive walk and differentiated by central finite
//! differences, and the connection and curvature oracles apply the textbook
//! formulas on top of those differences. Agreement between the two pipelines
//! is then evidence, not a tautology.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use walker_core::expr::Expr;
use walker_core::geometry::{algebra, MetricField};
use walker_core::sample::PointSampler;
use walker_core::walker::{
    extend_partial_metric, extend_partial_pairing, generate_walker_data,
    PartialFibreMetricAtPoint, PartialPairingAtPoint, WalkerData,
};

/// Central-difference step for first derivatives of metric entries.
pub const GAMMA_STEP: f64 = 1e-4;
/// Central-difference step for the outer derivative of the curvature oracle.
pub const CURVATURE_STEP: f64 = 1e-3;

/// The `(n, r)` pairs exercised by the acceptance criteria: every dimension
/// `2..=6` with every admissible plane rank `1..=n/2`.
pub const GRID: [(usize, usize); 9] = [
    (2, 1),
    (3, 1),
    (4, 1),
    (4, 2),
    (5, 1),
    (5, 2),
    (6, 1),
    (6, 2),
    (6, 3),
];

/// Deterministic corpus cycling through [`GRID`] with per-index seeds.
pub fn corpus(count: usize) -> Vec<WalkerData> {
    (0..count)
        .map(|i| {
            let (n, r) = GRID[i % GRID.len()];
            generate_walker_data(n, r, 1000 + i as u64).expect("grid dimensions are admissible")
        })
        .collect()
}

/// The plane-wave instance `n = 4`, `r = 1`, `A = I`, `H = 0`,
/// `B = [x2² − x3²]`: curvature does not vanish, but every slot the null
/// parallel plane constrains does.
pub fn pp_wave() -> WalkerData {
    let field = |text: &str| walker_core::expr::parse(text, 4).unwrap();
    WalkerData::new(
        4,
        1,
        vec![
            vec![field("1"), field("0")],
            vec![field("0"), field("1")],
        ],
        vec![vec![field("0")], vec![field("0")]],
        vec![vec![field("x2^2 - x3^2")]],
    )
    .unwrap()
}

/// Seeded points in `[-1, 1]ⁿ`.
pub fn points(seed: u64, n: usize, count: usize) -> Vec<Vec<f64>> {
    let mut sampler = PointSampler::new(seed, n);
    (0..count).map(|_| sampler.next_point()).collect()
}

/// Plain recursive evaluation of an expression tree — no jets involved.
pub fn plain_eval(e: &Expr, x: &[f64]) -> f64 {
    match e {
        Expr::Const(c) => *c,
        Expr::Coord(s) => x[*s],
        Expr::Add(a, b) => plain_eval(a, x) + plain_eval(b, x),
        Expr::Sub(a, b) => plain_eval(a, x) - plain_eval(b, x),
        Expr::Mul(a, b) => plain_eval(a, x) * plain_eval(b, x),
        Expr::Div(a, b) => plain_eval(a, x) / plain_eval(b, x),
        Expr::Pow(a, k) => plain_eval(a, x).powi(*k as i32),
        Expr::Neg(a) => -plain_eval(a, x),
        Expr::Sin(a) => plain_eval(a, x).sin(),
        Expr::Cos(a) => plain_eval(a, x).cos(),
        Expr::Exp(a) => plain_eval(a, x).exp(),
    }
}

/// Central finite difference `∂f/∂x_i` with the given step.
pub fn fd_partial(f: &dyn Fn(&[f64]) -> f64, x: &[f64], i: usize, step: f64) -> f64 {
    let mut hi = x.to_vec();
    let mut lo = x.to_vec();
    hi[i] += step;
    lo[i] -= step;
    (f(&hi) - f(&lo)) / (2.0 * step)
}

/// Central finite difference `∂²f/∂x_i∂x_j` (nested first differences).
pub fn fd_second(f: &dyn Fn(&[f64]) -> f64, x: &[f64], i: usize, j: usize, step: f64) -> f64 {
    fd_partial(&|y: &[f64]| fd_partial(f, y, j, step), x, i, step)
}

/// Christoffel symbols by finite differences of plainly evaluated metric
/// entries: `Γᵏᵢⱼ = ½ gᵏᵐ (∂_i g_mj + ∂_j g_mi − ∂_m g_ij)`.
pub struct FdConnection {
    n: usize,
    gamma: Vec<f64>,
}

impl FdConnection {
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[(k * self.n + i) * self.n + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

pub fn fd_christoffel(g: &MetricField, x: &[f64], step: f64) -> FdConnection {
    let n = g.n();
    let entry = |i: usize, j: usize, y: &[f64]| plain_eval(g.entry(i, j).ast(), y);
    let values = DMatrix::from_fn(n, n, |i, j| entry(i, j, x));
    let ginv = values.try_inverse().expect("oracle point must be nondegenerate");
    let mut dg = vec![0.0; n * n * n];
    for p in 0..n {
        for i in 0..n {
            for j in 0..n {
                dg[(p * n + i) * n + j] = fd_partial(&|y: &[f64]| entry(i, j, y), x, p, step);
            }
        }
    }
    let lower = |i: usize, j: usize, k: usize| {
        0.5 * (dg[(i * n + j) * n + k] + dg[(j * n + i) * n + k] - dg[(k * n + i) * n + j])
    };
    let mut gamma = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for m in 0..n {
                    acc += ginv[(k, m)] * lower(i, j, m);
                }
                gamma[(k * n + i) * n + j] = acc;
            }
        }
    }
    FdConnection { n, gamma }
}

/// Lowered curvature by finite differences over the FD connection, in the
/// same convention as the jet pipeline:
/// `Rˡ_ijk = ∂_j Γˡ_ik − ∂_i Γˡ_jk + Γᵐ_ik Γˡ_jm − Γᵐ_jk Γˡ_im`, then
/// `R_ijkl = g_lm Rᵐ_ijk`.
pub struct FdCurvature {
    n: usize,
    r: Vec<f64>,
}

impl FdCurvature {
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.r[((i * n + j) * n + k) * n + l]
    }

    pub fn max_abs(&self) -> f64 {
        self.r.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn fd_curvature(g: &MetricField, x: &[f64], gamma_step: f64, outer_step: f64) -> FdCurvature {
    let n = g.n();
    let entry = |i: usize, j: usize, y: &[f64]| plain_eval(g.entry(i, j).ast(), y);
    let values = DMatrix::from_fn(n, n, |i, j| entry(i, j, x));
    let base = fd_christoffel(g, x, gamma_step);

    // dgamma[p] = ∂_p Γ by a central difference of whole connections.
    let mut dgamma = Vec::with_capacity(n);
    for p in 0..n {
        let mut hi = x.to_vec();
        let mut lo = x.to_vec();
        hi[p] += outer_step;
        lo[p] -= outer_step;
        let chi = fd_christoffel(g, &hi, gamma_step);
        let clo = fd_christoffel(g, &lo, gamma_step);
        let mut d = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[(k * n + i) * n + j] =
                        (chi.gamma(k, i, j) - clo.gamma(k, i, j)) / (2.0 * outer_step);
                }
            }
        }
        dgamma.push(d);
    }
    let dg = |p: usize, l: usize, i: usize, k: usize| dgamma[p][(l * n + i) * n + k];

    let mut lowered = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut up = dg(j, l, i, k) - dg(i, l, j, k);
                    for m in 0..n {
                        up += base.gamma(m, i, k) * base.gamma(l, j, m)
                            - base.gamma(m, j, k) * base.gamma(l, i, m);
                    }
                    for low in 0..n {
                        lowered[((i * n + j) * n + k) * n + low] += values[(low, l)] * up;
                    }
                }
            }
        }
    }
    FdCurvature { n, r: lowered }
}

/// Uniform dyadic matrix entries in `[-2, 2]` (exact in binary floating
/// point, so placement identities can be asserted bitwise).
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    use rand::Rng;
    DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-16..=16) as f64 / 8.0)
}

/// A random symmetric matrix with dyadic entries.
pub fn random_symmetric(rng: &mut ChaCha8Rng, r: usize) -> DMatrix<f64> {
    use rand::Rng;
    let mut b = DMatrix::zeros(r, r);
    for i in 0..r {
        for j in i..r {
            let v = rng.gen_range(-16..=16) as f64 / 8.0;
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    b
}

/// A consistent random pairing prescription with the requested codimensions
/// `k`, `l` and value dimension `m`; the ambient dimensions exceed the
/// codimensions by random slack.
pub fn random_pairing(rng: &mut ChaCha8Rng, k: usize, l: usize, m: usize) -> PartialPairingAtPoint {
    use rand::Rng;
    let c = k + rng.gen_range(0..=2);
    let d = l + rng.gen_range(0..=2);
    let on_dprime: Vec<DMatrix<f64>> = (0..m).map(|_| random_matrix(rng, c, d - l)).collect();
    let on_cprime: Vec<DMatrix<f64>> = on_dprime
        .iter()
        .map(|full| {
            let mut piece = random_matrix(rng, c - k, d);
            for i in 0..c - k {
                for j in 0..d - l {
                    piece[(i, j)] = full[(i, j)];
                }
            }
            piece
        })
        .collect();
    PartialPairingAtPoint {
        dim_c: c,
        dim_d: d,
        dim_e: m,
        codim_cprime: k,
        codim_dprime: l,
        on_dprime,
        on_cprime,
    }
}

/// Brute-force rank of the linear part of the pairing extension: extend each
/// free-parameter basis element, subtract the zero extension, vectorise, and
/// count independent columns.
pub fn pairing_linear_rank(p: &PartialPairingAtPoint) -> usize {
    let (c, d, m) = (p.dim_c, p.dim_d, p.dim_e);
    let (k, l) = (p.codim_cprime, p.codim_dprime);
    let zero: Vec<DMatrix<f64>> = (0..m).map(|_| DMatrix::zeros(k, l)).collect();
    let base = extend_partial_pairing(p, &zero).expect("consistent prescription");
    let mut columns: Vec<DMatrix<f64>> = Vec::new();
    for e0 in 0..m {
        for i0 in 0..k {
            for j0 in 0..l {
                let mut unit = zero.clone();
                unit[e0][(i0, j0)] = 1.0;
                let out = extend_partial_pairing(p, &unit).expect("consistent prescription");
                let mut column = DMatrix::zeros(c * d * m, 1);
                for e in 0..m {
                    for i in 0..c {
                        for j in 0..d {
                            column[((e * c + i) * d + j, 0)] = out[e][(i, j)] - base[e][(i, j)];
                        }
                    }
                }
                columns.push(column);
            }
        }
    }
    if columns.is_empty() {
        return 0;
    }
    let mut matrix = DMatrix::zeros(c * d * m, columns.len());
    for (idx, col) in columns.iter().enumerate() {
        matrix.set_column(idx, &col.column(0));
    }
    algebra::rank_with_tol(&matrix, 1e-9)
}

/// A valid random partial-metric instance: canonical-form values at a
/// sampled point, pushed through a random diagonally dominant (hence
/// invertible) change of basis `S`. The plane basis is the first `r` columns
/// of `S`, the larger subspace the first `n − r`, and the prescription is
/// the corresponding rows of the transformed values.
pub fn random_partial_metric(seed: u64, n: usize, r: usize) -> PartialFibreMetricAtPoint {
    use rand::Rng;
    let data = generate_walker_data(n, r, seed).expect("admissible dimensions");
    let g = data.assemble().expect("generated data is valid");
    let x = points(seed ^ 0x5eed, n, 1).pop().unwrap();
    let g0 = g.eval_matrix(&x).expect("total expressions");

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(7));
    let s = DMatrix::from_fn(n, n, |i, j| {
        let noise: f64 = rng.gen_range(-0.25..0.25);
        if i == j {
            2.0 + noise
        } else {
            noise
        }
    });
    let s_inv = s.clone().try_inverse().expect("diagonally dominant");

    PartialFibreMetricAtPoint {
        n,
        r,
        p: s.view((0, 0), (n, r)).into_owned(),
        pprime: s.view((0, 0), (n, n - r)).into_owned(),
        alpha: g0.view((0, 0), (n - r, n)).into_owned() * s_inv,
    }
}

/// Brute-force rank of the linear part of the metric extension, in the same
/// style as [`pairing_linear_rank`], over the symmetric-matrix basis.
pub fn metric_linear_rank(pm: &PartialFibreMetricAtPoint) -> usize {
    let (n, r) = (pm.n, pm.r);
    let base = extend_partial_metric(pm, &DMatrix::zeros(r, r)).expect("valid instance");
    let mut columns = Vec::new();
    for i0 in 0..r {
        for j0 in i0..r {
            let mut unit = DMatrix::zeros(r, r);
            unit[(i0, j0)] = 1.0;
            unit[(j0, i0)] = 1.0;
            let out = extend_partial_metric(pm, &unit).expect("valid instance");
            let delta = &out.ambient - &base.ambient;
            let mut column = DMatrix::zeros(n * n, 1);
            for i in 0..n {
                for j in 0..n {
                    column[(i * n + j, 0)] = delta[(i, j)];
                }
            }
            columns.push(column);
        }
    }
    if columns.is_empty() {
        return 0;
    }
    let mut matrix = DMatrix::zeros(n * n, columns.len());
    for (idx, col) in columns.iter().enumerate() {
        matrix.set_column(idx, &col.column(0));
    }
    algebra::rank_with_tol(&matrix, 1e-9)
}
