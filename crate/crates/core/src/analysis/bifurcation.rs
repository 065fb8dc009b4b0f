//! Bifurcations of the scheme applied to `y' = −∫_{x0}^{x} e^{−α(x−t)} y(t) dt`.
//!
//! For `j ≥ 1` the scheme obeys `y_{j+2} − b1·y_{j+1} + b2·y_j = 0`, whose
//! characteristic roots change character at three thresholds: at `α1` and
//! `α2` the roots coalesce (real ↔ complex) and at `α0` a complex pair
//! crosses the unit circle.

use std::fmt;

use thiserror::Error;

use super::complex::{quadratic_roots, Complex};

/// `a0, a1, a2` of the one-step relation
/// `y_{j+1} = −a0·e^{−αhj}·y0 − a1·Σ e^{−αh(j−i)}·y_i + a2·y_j`
/// and the coefficients `b1, b2` of the eliminated two-term recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

/// With `q = 1 − h²/4 + h⁴/16` (the DJM factor `1 + N + N²` for `N = −h²/4`)
/// and `E = e^{−αh}`:
/// `a0 = h²/4·q·(1+E)`, `a1 = h²/2·q·(1+E)`, `a2 = q·(1 − h²/4 − h²E/2)`,
/// `b1 = E + a2`, `b2 = (a1 + a2)·E = E·(1 + h⁶/64)`.
///
/// `b2` uses the closed form, since `a1 + a2` cancels badly when `E` is large.
pub fn bifurcation_coefficients(alpha: f64, h: f64) -> BifurcationCoefficients {
    let h2 = h * h;
    let q = 1.0 - h2 / 4.0 + h2 * h2 / 16.0;
    let e = (-alpha * h).exp();
    let a0 = h2 / 4.0 * q * (1.0 + e);
    let a1 = h2 / 2.0 * q * (1.0 + e);
    let a2 = q * (1.0 - h2 / 4.0 - h2 / 2.0 * e);
    BifurcationCoefficients {
        a0,
        a1,
        a2,
        b1: e + a2,
        b2: e * (1.0 + h2 * h2 * h2 / 64.0),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error("step size must satisfy 0 < h < 2, got {0}")]
    StepOutOfDomain(f64),
    #[error("threshold {name} is undefined at h = {h}: {condition}")]
    Undefined {
        name: &'static str,
        h: f64,
        condition: &'static str,
    },
    #[error(
        "thresholds at h = {h} violate alpha2 < alpha0 < alpha1 ({alpha2}, {alpha0}, {alpha1})"
    )]
    Ordering {
        h: f64,
        alpha0: f64,
        alpha1: f64,
        alpha2: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationThresholds {
    pub h: f64,
    /// Complex roots cross the unit circle.
    pub alpha0: f64,
    /// Real double root inside the unit disc.
    pub alpha1: f64,
    /// Real double root outside the unit disc.
    pub alpha2: f64,
}

impl BifurcationThresholds {
    pub fn new(h: f64) -> Result<Self, ThresholdError> {
        if !(h > 0.0 && h < 2.0) {
            return Err(ThresholdError::StepOutOfDomain(h));
        }
        let h2 = h * h;
        let (h4, h6, h8) = (h2 * h2, h2 * h2 * h2, h2 * h2 * h2 * h2);
        let radicand = 1024.0 + 8.0 * h6 - 2.0 * h8;
        if radicand <= 0.0 {
            return Err(ThresholdError::Undefined {
                name: "alpha1/alpha2",
                h,
                condition: "1024 + 8h^6 - 2h^8 must be positive",
            });
        }
        let root = 8.0 * h * radicand.sqrt();
        let denominator = (h2 - 4.0).powi(2) * (16.0 - 4.0 * h2 + h4);
        let poly = 128.0 + 160.0 * h2 - 32.0 * h4 + 8.0 * h6 - h8;
        let arg1 = 2.0 * (poly + root) / denominator;
        let arg2 = 2.0 * (poly - root) / denominator;
        let log = |name, arg: f64| {
            if arg > 0.0 && arg.is_finite() {
                Ok(arg.ln() / h)
            } else {
                Err(ThresholdError::Undefined {
                    name,
                    h,
                    condition: "logarithm argument must be positive and finite",
                })
            }
        };
        let alpha0 = (h6 / 64.0).ln_1p() / h;
        let alpha1 = log("alpha1", arg1)?;
        let alpha2 = log("alpha2", arg2)?;
        if !(alpha2 < alpha0 && alpha0 < alpha1) {
            return Err(ThresholdError::Ordering {
                h,
                alpha0,
                alpha1,
                alpha2,
            });
        }
        Ok(BifurcationThresholds {
            h,
            alpha0,
            alpha1,
            alpha2,
        })
    }
}

pub fn bifurcation_thresholds(h: f64) -> Result<BifurcationThresholds, ThresholdError> {
    BifurcationThresholds::new(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// α > α1: converges to zero without oscillation.
    I,
    /// α0 < α < α1: damped oscillation.
    II,
    /// α2 < α < α0: divergent oscillation.
    III,
    /// α < α2: unbounded without oscillation.
    IV,
    BoundaryOneTwo,
    /// α = α0, where the bifurcation occurs.
    BoundaryTwoThree,
    BoundaryThreeFour,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::BoundaryOneTwo => "boundary-I/II",
            Region::BoundaryTwoThree => "boundary-II/III",
            Region::BoundaryThreeFour => "boundary-III/IV",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Region::I | Region::BoundaryOneTwo => "converges to zero without oscillation",
            Region::II => "damped oscillation converging to zero",
            Region::III => "divergent unbounded oscillation",
            Region::IV | Region::BoundaryThreeFour => "unbounded without oscillation",
            Region::BoundaryTwoThree => "bounded oscillation of constant amplitude",
        }
    }

    /// Whether solutions keep changing sign.
    pub fn oscillates(self) -> bool {
        matches!(self, Region::II | Region::III | Region::BoundaryTwoThree)
    }

    /// Whether solutions converge to zero.
    pub fn converges(self) -> bool {
        matches!(self, Region::I | Region::II | Region::BoundaryOneTwo)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationReport {
    pub alpha: f64,
    pub h: f64,
    pub coefficients: BifurcationCoefficients,
    pub thresholds: BifurcationThresholds,
    /// Roots of `r² − b1·r + b2 = 0`.
    pub r1: Complex,
    pub r2: Complex,
    pub region: Region,
}

/// Region from thresholds alone; boundaries are bands of half-width `tol`.
pub fn region_of(alpha: f64, thresholds: &BifurcationThresholds, tol: f64) -> Region {
    let t = thresholds;
    if (alpha - t.alpha1).abs() <= tol {
        Region::BoundaryOneTwo
    } else if (alpha - t.alpha0).abs() <= tol {
        Region::BoundaryTwoThree
    } else if (alpha - t.alpha2).abs() <= tol {
        Region::BoundaryThreeFour
    } else if alpha > t.alpha1 {
        Region::I
    } else if alpha > t.alpha0 {
        Region::II
    } else if alpha > t.alpha2 {
        Region::III
    } else {
        Region::IV
    }
}

pub fn classify_bifurcation(
    alpha: f64,
    h: f64,
    tol: f64,
) -> Result<BifurcationReport, ThresholdError> {
    let thresholds = BifurcationThresholds::new(h)?;
    let coefficients = bifurcation_coefficients(alpha, h);
    let (r1, r2) = quadratic_roots(-coefficients.b1, coefficients.b2);
    Ok(BifurcationReport {
        alpha,
        h,
        coefficients,
        thresholds,
        r1,
        r2,
        region: region_of(alpha, &thresholds, tol),
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error("simulation needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
    #[error("iterate {index} is NaN")]
    NaN { index: usize },
}

/// Iterates `y_{j+2} = b1·y_{j+1} − b2·y_j`, returning `y_0..=y_steps`.
///
/// Iteration stops early once an iterate overflows to ±∞ (the returned
/// sequence then ends with that value), since the following iterate would be
/// `∞ − ∞`.
pub fn simulate_recurrence(
    b1: f64,
    b2: f64,
    y0: f64,
    y1: f64,
    steps: usize,
) -> Result<Vec<f64>, SimulationError> {
    if steps < 2 {
        return Err(SimulationError::TooFewSteps(steps));
    }
    let mut seq = Vec::with_capacity(steps + 1);
    seq.push(y0);
    seq.push(y1);
    for (index, &y) in seq.iter().enumerate() {
        if y.is_nan() {
            return Err(SimulationError::NaN { index });
        }
    }
    while seq.len() <= steps {
        let n = seq.len();
        let next = b1 * seq[n - 1] - b2 * seq[n - 2];
        if next.is_nan() {
            return Err(SimulationError::NaN { index: n });
        }
        seq.push(next);
        if next.is_infinite() {
            break;
        }
    }
    Ok(seq)
}

pub fn simulate_difference(
    alpha: f64,
    h: f64,
    y0: f64,
    y1: f64,
    steps: usize,
) -> Result<Vec<f64>, SimulationError> {
    let c = bifurcation_coefficients(alpha, h);
    simulate_recurrence(c.b1, c.b2, y0, y1, steps)
}

/// Qualitative behaviour read off a simulated sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObservedBehaviour {
    /// At least 3 sign changes in the final half (zeros skipped).
    pub oscillates: bool,
    /// Every value finite and the final half's peak below the first half's.
    pub decays: bool,
}

pub const MIN_TAIL_SIGN_CHANGES: usize = 3;

pub fn tail_sign_changes(seq: &[f64]) -> usize {
    let tail = &seq[seq.len() / 2..];
    let signs: Vec<bool> = tail
        .iter()
        .filter(|y| **y != 0.0)
        .map(|y| y.is_sign_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

pub fn observe_sequence(seq: &[f64]) -> ObservedBehaviour {
    let half = seq.len() / 2;
    let peak = |s: &[f64]| s.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let finite = seq.iter().all(|y| y.is_finite());
    ObservedBehaviour {
        oscillates: tail_sign_changes(seq) >= MIN_TAIL_SIGN_CHANGES,
        decays: finite && peak(&seq[half..]) < peak(&seq[..half]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_is_twice_a0() {
        for (alpha, h) in [(0.0, 0.1), (3.0, 0.5), (-2.0, 1.5), (7.0, 0.01)] {
            let c = bifurcation_coefficients(alpha, h);
            assert_eq!(c.a1, 2.0 * c.a0);
        }
    }

    #[test]
    fn coefficients_at_alpha_zero() {
        // scripted evaluation at E = 1, q = 0.99750625
        let c = bifurcation_coefficients(0.0, 0.1);
        assert!((c.a0 - 0.0049875312500000015).abs() < 1e-17);
        assert!((c.a1 - 0.009975062500000003).abs() < 1e-17);
        assert!((c.a2 - 0.990024953125).abs() < 1e-15);
        assert!((c.b1 - 1.990024953125).abs() < 1e-15);
        assert!((c.b2 - 1.000000015625).abs() < 1e-15);
    }

    #[test]
    fn b2_closed_form() {
        for (alpha, h) in [(0.3, 0.1), (-1.0, 0.4), (2.5, 1.2)] {
            let c = bifurcation_coefficients(alpha, h);
            let expected = (-alpha * h).exp() * (1.0 + h.powi(6) / 64.0);
            assert!((c.b2 - expected).abs() < 1e-14 * expected);
        }
    }

    #[test]
    fn small_step_limit() {
        let c = bifurcation_coefficients(0.0, 1e-9);
        assert!(c.a0.abs() < 1e-17 && c.a1.abs() < 1e-17);
        assert!((c.a2 - 1.0).abs() < 1e-15);
        assert!((c.b1 - 2.0).abs() < 1e-15);
        assert!((c.b2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn thresholds_values_and_limits() {
        let t = bifurcation_thresholds(0.1).unwrap();
        assert!((t.alpha0 - 1.5624999877929687e-7).abs() < 1e-20);
        let t = bifurcation_thresholds(0.01).unwrap();
        assert!(t.alpha0 < 1e-9);
        assert!((t.alpha1 - 2.0).abs() < 0.05);
        assert!((t.alpha2 + 2.0).abs() < 0.05);
        let t = bifurcation_thresholds(1e-3).unwrap();
        assert!(t.alpha0 < 1e-9);
        assert!((t.alpha1 - 2.0).abs() < 0.05);
        assert!((t.alpha2 + 2.0).abs() < 0.05);
    }

    #[test]
    fn thresholds_ordered_across_domain() {
        for k in 1..200 {
            let h = k as f64 * 0.01;
            let t = bifurcation_thresholds(h).unwrap_or_else(|e| panic!("h = {h}: {e}"));
            assert!(t.alpha2 < t.alpha0 && t.alpha0 < t.alpha1);
        }
    }

    #[test]
    fn thresholds_domain_errors() {
        for h in [0.0, -0.1, 2.0, 3.0, f64::NAN] {
            assert!(matches!(
                bifurcation_thresholds(h),
                Err(ThresholdError::StepOutOfDomain(_))
            ));
        }
        assert!(bifurcation_thresholds(0.0)
            .unwrap_err()
            .to_string()
            .contains("0 < h < 2"));
    }

    #[test]
    fn discriminant_vanishes_at_double_root_thresholds() {
        for h in [0.05, 0.1, 0.2] {
            let t = bifurcation_thresholds(h).unwrap();
            for alpha in [t.alpha1, t.alpha2] {
                let c = bifurcation_coefficients(alpha, h);
                assert!(
                    (c.b1 * c.b1 - 4.0 * c.b2).abs() < 1e-8,
                    "h {h} alpha {alpha}"
                );
            }
        }
    }

    #[test]
    fn unit_modulus_at_alpha0() {
        for h in [0.05, 0.1, 0.2] {
            let t = bifurcation_thresholds(h).unwrap();
            let report = classify_bifurcation(t.alpha0, h, 1e-9).unwrap();
            assert_eq!(report.region, Region::BoundaryTwoThree);
            assert!(!report.r1.is_real());
            assert!((report.r1.norm() - 1.0).abs() < 1e-10);
            assert!((report.r2.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn classification_examples() {
        // numpy.roots: 0.96227302, 0.76986284
        let report = classify_bifurcation(3.0, 0.1, 1e-9).unwrap();
        assert_eq!(report.region, Region::I);
        assert!(report.r1.is_real() && report.r2.is_real());
        assert!((report.r1.re - 0.96227302).abs() < 1e-8);
        assert!((report.r2.re - 0.76986284).abs() < 1e-8);

        // numpy.roots: 1.29893268, 1.03920615
        let report = classify_bifurcation(-3.0, 0.1, 1e-9).unwrap();
        assert_eq!(report.region, Region::IV);
        assert!((report.r1.re - 1.29893268).abs() < 1e-8);
        assert!((report.r2.re - 1.03920615).abs() < 1e-8);

        assert_eq!(
            classify_bifurcation(1.0, 0.1, 1e-9).unwrap().region,
            Region::II
        );
        assert_eq!(
            classify_bifurcation(-1.0, 0.1, 1e-9).unwrap().region,
            Region::III
        );
    }

    #[test]
    fn boundary_bands() {
        let t = bifurcation_thresholds(0.2).unwrap();
        let tol = 1e-3;
        assert_eq!(
            region_of(t.alpha1 + 0.5 * tol, &t, tol),
            Region::BoundaryOneTwo
        );
        assert_eq!(
            region_of(t.alpha2 - 0.5 * tol, &t, tol),
            Region::BoundaryThreeFour
        );
        assert_eq!(region_of(t.alpha1 + 2.0 * tol, &t, tol), Region::I);
        assert_eq!(region_of(t.alpha2 - 2.0 * tol, &t, tol), Region::IV);
    }

    #[test]
    fn roots_satisfy_bifurcation_polynomial() {
        for alpha in [-4.0, -2.0, -0.5, 0.0, 0.5, 1.9, 2.1, 5.0] {
            let report = classify_bifurcation(alpha, 0.3, 1e-9).unwrap();
            let c = report.coefficients;
            for r in [report.r1, report.r2] {
                let residual = (r * r - r.scale(c.b1) + c.b2).norm();
                assert!(residual < 1e-10 * (1.0 + r.norm_sqr()));
            }
        }
    }

    #[test]
    fn recurrence_with_overridden_coefficients() {
        let seq = simulate_recurrence(1.0, 0.0, 4.0, 4.0, 10).unwrap();
        assert_eq!(seq, vec![4.0; 11]);
        assert_eq!(
            simulate_recurrence(1.0, 0.0, 1.0, 1.0, 1),
            Err(SimulationError::TooFewSteps(1))
        );
        assert_eq!(
            simulate_recurrence(1.0, 0.0, f64::NAN, 1.0, 5),
            Err(SimulationError::NaN { index: 0 })
        );
    }

    #[test]
    fn overflow_stops_the_simulation() {
        let seq = simulate_recurrence(1e200, 0.0, 1.0, 1e200, 50).unwrap();
        assert!(seq.len() < 51);
        assert!(seq.last().unwrap().is_infinite());
        assert!(!observe_sequence(&seq).decays);
    }

    #[test]
    fn region_one_decays_monotonically() {
        let seq = simulate_difference(3.0, 0.1, 1.0, 1.0, 500).unwrap();
        assert_eq!(seq.len(), 501);
        let later = &seq[10..];
        assert!(later.windows(2).all(|w| w[0] * w[1] > 0.0));
        assert!(later.windows(2).all(|w| w[1].abs() <= w[0].abs()));
        assert_eq!(
            observe_sequence(&seq),
            ObservedBehaviour {
                oscillates: false,
                decays: true
            }
        );
    }

    #[test]
    fn region_two_oscillates_and_decays() {
        let seq = simulate_difference(1.0, 0.1, 1.0, 1.0, 500).unwrap();
        let sign_changes = seq.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
        assert!(sign_changes > 0);
        assert_eq!(
            observe_sequence(&seq),
            ObservedBehaviour {
                oscillates: true,
                decays: true
            }
        );
    }

    #[test]
    fn tail_sign_changes_skip_zeros() {
        assert_eq!(
            tail_sign_changes(&[9.0, 9.0, 9.0, 9.0, 9.0, 9.0, 1.0, 0.0, -1.0, 0.0, 1.0, -1.0]),
            3
        );
    }
}
