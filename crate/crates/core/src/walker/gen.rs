//! Seeded random admissible block data.
//!
//! Entries are polynomials of degree ≤ 2 whose coefficients live on the
//! dyadic grid `k/16 ∈ [−2, 2]`, so every generated instance renders to text
//! and parses back without rounding. `A` and `H` draw their variables from
//! the permitted slots only, and `A` is made diagonally dominant — diagonal
//! magnitudes stay in `[1.25, 1.75]` while off-diagonal row sums stay below
//! `1/4` on the sample box `[−1, 1]ⁿ`, so every eigenvalue of `A` has
//! magnitude at least 1 and the assembled metric is nondegenerate everywhere
//! the verifier samples.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{Expr, ScalarField};

use super::data::WalkerData;
use super::WalkerError;

/// A coefficient from the dyadic grid `{k/16 : |k| ≤ sixteenths}`.
fn dyadic(rng: &mut ChaCha8Rng, sixteenths: i32) -> f64 {
    rng.gen_range(-sixteenths..=sixteenths) as f64 / 16.0
}

/// A monomial of the given degree in the permitted coordinate slots.
fn monomial(rng: &mut ChaCha8Rng, vars: &[usize], degree: usize) -> Expr {
    let mut factors = (0..degree).map(|_| Expr::coord(vars[rng.gen_range(0..vars.len())]));
    let first = factors.next().expect("degree ≥ 1");
    factors.fold(first, |acc, f| acc * f)
}

/// `coefficient · monomial`, or `None` when the drawn coefficient is zero.
fn term(rng: &mut ChaCha8Rng, vars: &[usize], degree: usize, sixteenths: i32) -> Option<Expr> {
    let c = dyadic(rng, sixteenths);
    if c == 0.0 {
        return None;
    }
    Some(Expr::number(c) * monomial(rng, vars, degree))
}

/// A random polynomial of degree ≤ 2 in the permitted slots, with
/// coefficients in `[−2, 2]`.
fn polynomial(rng: &mut ChaCha8Rng, vars: &[usize], n: usize) -> ScalarField {
    let mut parts: Vec<Expr> = Vec::new();
    if rng.gen_bool(0.5) {
        let c = dyadic(rng, 32);
        if c != 0.0 {
            parts.push(Expr::number(c));
        }
    }
    for degree in [1, 2] {
        if rng.gen_bool(0.7) {
            parts.extend(term(rng, vars, degree, 32));
        }
    }
    let ast = parts
        .into_iter()
        .reduce(|acc, p| acc + p)
        .unwrap_or_else(|| Expr::number(0.0));
    ScalarField::new(ast, n)
}

/// A diagonal `A` entry: `±(1.5 + 0.25·q)` with `|q| ≤ 1` on the sample box
/// (`q` is a dyadic constant or a monomial of degree ≤ 2).
fn dominant_diagonal(rng: &mut ChaCha8Rng, vars: &[usize], n: usize) -> ScalarField {
    let q = if rng.gen_bool(0.5) {
        Expr::number(dyadic(rng, 16))
    } else {
        let degree = rng.gen_range(1..=2);
        monomial(rng, vars, degree)
    };
    let magnitude = Expr::number(1.5) + Expr::number(0.25) * q;
    let ast = if rng.gen_bool(0.75) {
        magnitude
    } else {
        -magnitude
    };
    ScalarField::new(ast, n)
}

/// Deterministic random block data for the splitting `(n, r)`.
pub fn generate_walker_data(n: usize, r: usize, seed: u64) -> Result<WalkerData, WalkerError> {
    if n == 0 || 2 * r > n {
        return Err(WalkerError::RankRange { n, r });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = n - 2 * r;
    let free_vars: Vec<usize> = (r..n).collect();
    let all_vars: Vec<usize> = (0..n).collect();

    // |k/16| ≤ 1/(4s) keeps every Gershgorin disc of A away from zero.
    let off_diagonal_sixteenths = if s > 1 { (4 / s) as i32 } else { 0 };
    let mut a = vec![vec![ScalarField::zero(n); s]; s];
    #[allow(clippy::needless_range_loop)] // mirrored writes need both indices
    for i in 0..s {
        a[i][i] = dominant_diagonal(&mut rng, &free_vars, n);
        for j in i + 1..s {
            let degree = rng.gen_range(1..=2);
            let entry = term(&mut rng, &free_vars, degree, off_diagonal_sixteenths)
                .map(|ast| ScalarField::new(ast, n))
                .unwrap_or_else(|| ScalarField::zero(n));
            a[i][j] = entry.clone();
            a[j][i] = entry;
        }
    }

    let h = if r == 0 {
        Vec::new()
    } else {
        (0..s)
            .map(|_| (0..r).map(|_| polynomial(&mut rng, &free_vars, n)).collect())
            .collect()
    };

    let mut b = vec![vec![ScalarField::zero(n); r]; r];
    #[allow(clippy::needless_range_loop)] // mirrored writes need both indices
    for i in 0..r {
        for j in i..r {
            let entry = polynomial(&mut rng, &all_vars, n);
            b[i][j] = entry.clone();
            b[j][i] = entry;
        }
    }

    Ok(WalkerData::new(n, r, a, h, b).expect("generated blocks satisfy the invariants"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::PointSampler;
    use crate::walker::format::write_walker_text;

    #[test]
    fn generation_is_deterministic_per_seed() {
        let first = generate_walker_data(5, 2, 42).unwrap();
        let again = generate_walker_data(5, 2, 42).unwrap();
        let other = generate_walker_data(5, 2, 43).unwrap();
        assert_eq!(write_walker_text(&first), write_walker_text(&again));
        assert_ne!(write_walker_text(&first), write_walker_text(&other));
    }

    #[test]
    fn generated_instances_validate_and_stay_nondegenerate() {
        for (n, r, seed) in [(2, 1, 1), (4, 1, 2), (5, 2, 3), (6, 3, 4), (6, 1, 5), (3, 0, 6)] {
            let data = generate_walker_data(n, r, seed).unwrap();
            data.validate().unwrap();
            let g = data.assemble().unwrap();
            let mut sampler = PointSampler::new(99, n);
            for _ in 0..10 {
                let x = sampler.next_point();
                assert!(
                    g.nondegenerate_at(&x).unwrap(),
                    "degenerate point for n={n} r={r} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn out_of_range_requests_are_rejected() {
        assert!(generate_walker_data(4, 3, 1).is_err());
        assert!(generate_walker_data(0, 0, 1).is_err());
    }
}
