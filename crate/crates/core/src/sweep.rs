//! Seeded random sampling and data-parallel sweeps.
//!
//! Each item draws from its own ChaCha stream keyed by `(seed, index)`, so
//! results do not depend on scheduling and the sequential and parallel
//! strategies produce identical output.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::{admissible_l, hopf_check, standing_assumptions, AdmissibleSet};
use crate::curvature::defect_affine;
use crate::exact::{Float, Scalar};
use crate::frame::PointData;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[default]
    /// Uses rayon when the `parallel` feature is on, else runs sequentially.
    Parallel,
}

pub fn seq_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    seq_map(items, f)
}

pub fn map_with<T: Sync, R: Send>(strategy: Strategy, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    match strategy {
        Strategy::Sequential => seq_map(items, f),
        Strategy::Parallel => par_map(items, f),
    }
}

/// Generator for item `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A small rational `n/d` with `|n| <= 12`, `1 <= d <= 6`.
pub fn random_rational(rng: &mut impl Rng, nonzero: bool) -> BigRational {
    loop {
        let n: i64 = rng.gen_range(-12..=12);
        if nonzero && n == 0 {
            continue;
        }
        let d: i64 = rng.gen_range(1..=6);
        return BigRational::new(BigInt::from(n), BigInt::from(d));
    }
}

/// A non-Hopf point with every entry a nonzero random rational.
pub fn random_nonhopf(rng: &mut impl Rng) -> PointData<BigRational> {
    let mut r = || random_rational(rng, true);
    let (c, alpha, beta, gamma, delta, mu) = (r(), r(), r(), r(), r(), r());
    PointData::nonhopf(c, alpha, beta, gamma, delta, mu).expect("c and beta are nonzero")
}

/// A Hopf point with `c = ±4` satisfying `hopf_check = 0`, as floats.
pub fn random_hopf_float(rng: &mut impl Rng) -> PointData<Float> {
    loop {
        let c = if rng.gen_bool(0.5) { 4.0 } else { -4.0 };
        let alpha: f64 = rng.gen_range(-3.0..3.0);
        let lambda: f64 = rng.gen_range(-3.0..3.0);
        let den = lambda - alpha / 2.0;
        if den.abs() < 0.1 {
            continue;
        }
        let nu = (alpha * lambda / 2.0 + c / 4.0) / den;
        let f = Float::new;
        return PointData::hopf(f(c), f(alpha), f(lambda), f(nu)).expect("c is nonzero");
    }
}

/// Converts an exact point to the float ring.
pub fn to_float(p: &PointData<BigRational>) -> PointData<Float> {
    p.map(|x| Ok(Float::new(x.to_f64().expect("rationals convert"))))
        .expect("conversion keeps c and beta nonzero")
}

/// How many of `n` random non-Hopf points have an empty admissible set.
pub fn nonhopf_exclusion(seed: u64, n: usize, strategy: Strategy) -> usize {
    let idx: Vec<u64> = (0..n as u64).collect();
    map_with(strategy, &idx, |&i| {
        let p = random_nonhopf(&mut rng_for(seed, i));
        let d = defect_affine(&p).expect("valid point");
        admissible_l(&d, &standing_assumptions(&p)).is_empty()
    })
    .into_iter()
    .filter(|&e| e)
    .count()
}

/// Largest relative disagreement between exact and float defect entries,
/// over `n` random non-Hopf points and a random rational `L` each.
pub fn float_exact_agreement(seed: u64, n: usize, strategy: Strategy) -> f64 {
    let idx: Vec<u64> = (0..n as u64).collect();
    map_with(strategy, &idx, |&i| {
        let mut rng = rng_for(seed, i);
        let p = random_nonhopf(&mut rng);
        let l = random_rational(&mut rng, false);
        let exact = defect_affine(&p).expect("valid point").eval(&l);
        let float = defect_affine(&to_float(&p))
            .expect("valid point")
            .eval(&Float::new(l.to_f64().unwrap()));
        let scale = exact.iter().map(|x| x.to_f64().unwrap().abs()).fold(1.0f64, f64::max);
        exact
            .iter()
            .zip(&float)
            .map(|(a, b)| (a.to_f64().unwrap() - b.value()).abs() / scale)
            .fold(0.0f64, f64::max)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// Summary of a float Hopf sweep.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HopfSweep {
    pub points: usize,
    /// Largest `|hopf_check|` seen.
    pub max_hopf_residual: f64,
    /// Points with `l != 0` where `L = 0` is nevertheless admissible.
    pub semi_parallel: usize,
    /// Points with `l != 0` whose admissible set is a single value.
    pub single: usize,
}

pub fn hopf_float_sweep(seed: u64, n: usize, strategy: Strategy) -> HopfSweep {
    let idx: Vec<u64> = (0..n as u64).collect();
    let rows = map_with(strategy, &idx, |&i| {
        let p = random_hopf_float(&mut rng_for(seed, i));
        let crate::frame::Shape::Hopf { alpha, lambda, nu } = p.shape() else {
            unreachable!("sampled points are Hopf");
        };
        let residual = hopf_check(alpha, lambda, nu, p.c()).value().abs();
        let d = defect_affine(&p).expect("valid point");
        let semi = d.eval(&Float::new(0.0)).iter().all(Scalar::is_zero);
        let single = matches!(admissible_l(&d, &Default::default()), AdmissibleSet::Single { .. });
        (residual, semi, single)
    });
    rows.into_iter().fold(
        HopfSweep {
            points: n,
            ..Default::default()
        },
        |mut acc, (r, semi, single)| {
            acc.max_hopf_residual = acc.max_hopf_residual.max(r);
            acc.semi_parallel += semi as usize;
            acc.single += single as usize;
            acc
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = random_nonhopf(&mut rng_for(7, 3));
        let b = random_nonhopf(&mut rng_for(7, 3));
        let c = random_nonhopf(&mut rng_for(7, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn strategies_agree() {
        assert_eq!(
            nonhopf_exclusion(11, 12, Strategy::Sequential),
            nonhopf_exclusion(11, 12, Strategy::Parallel)
        );
        assert_eq!(
            hopf_float_sweep(11, 20, Strategy::Sequential),
            hopf_float_sweep(11, 20, Strategy::Parallel)
        );
    }

    #[test]
    fn small_sweeps() {
        assert_eq!(nonhopf_exclusion(1, 10, Strategy::Parallel), 10);
        assert!(float_exact_agreement(1, 10, Strategy::Parallel) < 1e-9);
        let h = hopf_float_sweep(1, 50, Strategy::Parallel);
        assert!(h.max_hopf_residual < 1e-12);
        assert_eq!(h.semi_parallel, 0);
    }
}
