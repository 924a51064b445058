//! The four one-dimensional benchmark problems.
//!
//! `I`  : (y − 1/2)²                         — smooth, convex
//! `II` : (y − 1/2)² + ½|y|                  — convex composite
//! `I+` : (y − 1/2)² + sin 4(y−1/2) + cos 2(y−1/2)        — non-convex
//! `II+`: the `I+` landscape plus ½|y|                    — non-convex composite

use ndarray::{Array1, ArrayView1};

use super::SmoothEnergy;
use crate::error::{Error, Result};

/// Global minimizer of the `I+` landscape on [−2, 3], located by a
/// 1e-6-resolution grid search refined by root-finding on the derivative.
pub const I_PLUS_MINIMIZER: f64 = 1.63238392870284;

/// Global minimizer of the `II+` objective on [−2, 3], same oracle.
pub const II_PLUS_MINIMIZER: f64 = 0.03282443643743872;

/// Benchmark identifiers; the CLI spells them "I", "II", "I+", "II+".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkId {
    I,
    II,
    IPlus,
    IIPlus,
}

impl BenchmarkId {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Self::I),
            "II" => Ok(Self::II),
            "I+" => Ok(Self::IPlus),
            "II+" => Ok(Self::IIPlus),
            other => Err(Error::InvalidArgument(format!(
                "unknown benchmark id '{other}' (expected I, II, I+ or II+)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::IPlus => "I+",
            Self::IIPlus => "II+",
        }
    }

    /// Global minimizer (analytic for I/II, grid-search oracle for I+/II+).
    pub fn minimizer(&self) -> f64 {
        match self {
            Self::I => 0.5,
            Self::II => 0.25,
            Self::IPlus => I_PLUS_MINIMIZER,
            Self::IIPlus => II_PLUS_MINIMIZER,
        }
    }
}

impl std::fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed-form 1-D smooth energies used by the benchmarks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarEnergy {
    /// `(y − center)²`
    Quadratic { center: f64 },
    /// `(y − 1/2)² + sin 4(y−1/2) + cos 2(y−1/2)`
    TrigQuadratic,
}

impl ScalarEnergy {
    fn value(&self, y: f64) -> f64 {
        match self {
            ScalarEnergy::Quadratic { center } => {
                let u = y - center;
                u * u
            }
            ScalarEnergy::TrigQuadratic => {
                let u = y - 0.5;
                u * u + (4.0 * u).sin() + (2.0 * u).cos()
            }
        }
    }

    fn slope(&self, y: f64) -> f64 {
        match self {
            ScalarEnergy::Quadratic { center } => 2.0 * (y - center),
            ScalarEnergy::TrigQuadratic => {
                let u = y - 0.5;
                2.0 * u + 4.0 * (4.0 * u).cos() - 2.0 * (2.0 * u).sin()
            }
        }
    }
}

impl SmoothEnergy for ScalarEnergy {
    fn dimension(&self) -> usize {
        1
    }

    fn energy(&self, y: ArrayView1<f64>) -> f64 {
        assert_eq!(y.len(), 1, "scalar energy takes a length-1 state");
        self.value(y[0])
    }

    fn gradient(&self, y: ArrayView1<f64>) -> Array1<f64> {
        assert_eq!(y.len(), 1, "scalar energy takes a length-1 state");
        Array1::from(vec![self.slope(y[0])])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::test_util::assert_gradient_matches;
    use crate::objectives::CompositeObjective;
    use ndarray::array;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid_minimizer(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> f64 {
        let mut best = f64::INFINITY;
        let mut arg = lo;
        let mut y = lo;
        while y <= hi {
            let v = f(y);
            if v < best {
                best = v;
                arg = y;
            }
            y += step;
        }
        arg
    }

    #[test]
    fn parse_round_trip() {
        for id in [BenchmarkId::I, BenchmarkId::II, BenchmarkId::IPlus, BenchmarkId::IIPlus] {
            assert_eq!(BenchmarkId::parse(id.as_str()).unwrap(), id);
        }
        assert!(BenchmarkId::parse("III").is_err());
    }

    #[test]
    fn problem_i_minimizer() {
        let obj = CompositeObjective::benchmark(BenchmarkId::I);
        assert_eq!(obj.objective_value(array![0.5].view()), 0.0);
        assert_eq!(BenchmarkId::I.minimizer(), 0.5);
    }

    #[test]
    fn problem_ii_minimizer_matches_grid_oracle() {
        let obj = CompositeObjective::benchmark(BenchmarkId::II);
        let arg = grid_minimizer(
            |y| obj.objective_value(array![y].view()),
            -2.0,
            2.0,
            1e-6,
        );
        assert!((arg - 0.25).abs() <= 2e-6, "grid minimizer {arg}");
    }

    #[test]
    fn nonconvex_minimizers_match_grid_oracle() {
        let ip = CompositeObjective::benchmark(BenchmarkId::IPlus);
        let arg = grid_minimizer(|y| ip.objective_value(array![y].view()), -2.0, 3.0, 1e-6);
        assert!(
            (arg - I_PLUS_MINIMIZER).abs() <= 2e-6,
            "I+ grid {arg} vs stored {I_PLUS_MINIMIZER}"
        );

        let iip = CompositeObjective::benchmark(BenchmarkId::IIPlus);
        let arg = grid_minimizer(|y| iip.objective_value(array![y].view()), -2.0, 3.0, 1e-6);
        assert!(
            (arg - II_PLUS_MINIMIZER).abs() <= 2e-6,
            "II+ grid {arg} vs stored {II_PLUS_MINIMIZER}"
        );
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for energy in [
            ScalarEnergy::Quadratic { center: 0.5 },
            ScalarEnergy::Quadratic { center: 6.0 },
            ScalarEnergy::TrigQuadratic,
        ] {
            for _ in 0..100 {
                let y = array![rng.gen_range(-3.0..3.0)];
                assert_gradient_matches(&energy, &y, 1e-5);
            }
        }
    }

    proptest! {
        #[test]
        fn convex_benchmarks_are_midpoint_convex(a in -5.0..5.0f64, b in -5.0..5.0f64) {
            for id in [BenchmarkId::I, BenchmarkId::II] {
                let obj = CompositeObjective::benchmark(id);
                let f = |y: f64| obj.objective_value(array![y].view());
                let mid = f(0.5 * (a + b));
                prop_assert!(mid <= 0.5 * f(a) + 0.5 * f(b) + 1e-12);
            }
        }
    }
}
