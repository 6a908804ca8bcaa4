//! Systematic-error model and infidelity sweeps.
//!
//! Durations and rotation angles carry relative errors,
//! `xi -> xi (1 + eps)`, `alpha -> alpha (1 + eps)`; axis azimuths carry
//! absolute ones, `phi -> phi + eps`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pulseseq::{PulseSequence, SequenceEvaluator};

pub const DEFAULT_RANGE: (f64, f64) = (-0.1, 0.1);
/// Odd, so that zero error is a grid point.
pub const DEFAULT_STEPS: usize = 41;

/// Half-width and point count of the small-error quadratic fit.
const FIT_HALF_WIDTH: f64 = 0.01;
const FIT_POINTS: usize = 11;
pub const FIT_LINEAR_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepParam {
    Xi1,
    Xi2,
    Alpha1,
    Alpha2,
    Alpha3,
    Phi1,
    Phi2,
    Phi3,
}

impl SweepParam {
    pub const ALL: [SweepParam; 8] = [
        SweepParam::Xi1,
        SweepParam::Xi2,
        SweepParam::Alpha1,
        SweepParam::Alpha2,
        SweepParam::Alpha3,
        SweepParam::Phi1,
        SweepParam::Phi2,
        SweepParam::Phi3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Xi1 => "xi1",
            SweepParam::Xi2 => "xi2",
            SweepParam::Alpha1 => "alpha1",
            SweepParam::Alpha2 => "alpha2",
            SweepParam::Alpha3 => "alpha3",
            SweepParam::Phi1 => "phi1",
            SweepParam::Phi2 => "phi2",
            SweepParam::Phi3 => "phi3",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownParameter(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ErrorVector {
    pub eps_xi: [f64; 2],
    pub eps_alpha: [f64; 3],
    /// Radians.
    pub eps_phi: [f64; 3],
}

impl ErrorVector {
    pub fn single(param: SweepParam, eps: f64) -> Self {
        let mut e = Self::default();
        e.set(param, eps);
        e
    }

    pub fn set(&mut self, param: SweepParam, eps: f64) {
        *self.slot(param) = eps;
    }

    pub fn get(&self, param: SweepParam) -> f64 {
        let mut copy = *self;
        *copy.slot(param)
    }

    fn slot(&mut self, param: SweepParam) -> &mut f64 {
        match param {
            SweepParam::Xi1 => &mut self.eps_xi[0],
            SweepParam::Xi2 => &mut self.eps_xi[1],
            SweepParam::Alpha1 => &mut self.eps_alpha[0],
            SweepParam::Alpha2 => &mut self.eps_alpha[1],
            SweepParam::Alpha3 => &mut self.eps_alpha[2],
            SweepParam::Phi1 => &mut self.eps_phi[0],
            SweepParam::Phi2 => &mut self.eps_phi[1],
            SweepParam::Phi3 => &mut self.eps_phi[2],
        }
    }
}

/// Perturbed copy of `base`. Azimuths are not re-wrapped; a duration driven
/// negative is an error rather than being clamped.
pub fn apply_errors(base: &PulseSequence, err: &ErrorVector) -> Result<PulseSequence> {
    let (xi, alpha, phi) = (base.xi(), base.alpha(), base.phi());
    PulseSequence::with_raw_axes(
        base.n_qubits(),
        base.target(),
        [0, 1].map(|i| xi[i] * (1.0 + err.eps_xi[i])),
        [0, 1, 2].map(|j| alpha[j] * (1.0 + err.eps_alpha[j])),
        [0, 1, 2].map(|j| phi[j] + err.eps_phi[j]),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(param: SweepParam, min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps < 3 {
            return Err(Error::TooFewSteps(steps));
        }
        if !min.is_finite() || !max.is_finite() || min >= max {
            return Err(Error::InvalidRange { min, max });
        }
        Ok(Self { param, min, max, steps })
    }

    pub fn default_for(param: SweepParam) -> Self {
        Self { param, min: DEFAULT_RANGE.0, max: DEFAULT_RANGE.1, steps: DEFAULT_STEPS }
    }

    /// Grid coordinate `i`; symmetric ranges with odd `steps` hit 0 exactly.
    pub fn value(&self, i: usize) -> f64 {
        let t = i as f64 / (self.steps - 1) as f64;
        self.min * (1.0 - t) + self.max * t
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

/// Infidelities `1 - F`; row-major over `(y, x)` for 2D grids.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub x: Axis,
    pub y: Option<Axis>,
    pub values: Vec<f64>,
}

impl SweepGrid {
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.x.steps + ix]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Every grid point as `(eps_x, eps_y, infidelity)`, in storage order.
    /// `eps_y` is 0 for 1D sweeps.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let ny = self.y.map_or(1, |a| a.steps);
        (0..ny).flat_map(move |iy| {
            let ey = self.y.map_or(0.0, |a| a.value(iy));
            (0..self.x.steps).map(move |ix| (self.x.value(ix), ey, self.get(ix, iy)))
        })
    }

    /// CSV with 17 significant digits and LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.y {
            None => {
                out.push_str("eps_x,infidelity\n");
                for (ex, _, v) in self.points() {
                    let _ = writeln!(out, "{ex:.16e},{v:.16e}");
                }
            }
            Some(_) => {
                out.push_str("eps_x,eps_y,infidelity\n");
                for (ex, ey, v) in self.points() {
                    let _ = writeln!(out, "{ex:.16e},{ey:.16e},{v:.16e}");
                }
            }
        }
        out
    }
}

fn infidelity_at(eval: &SequenceEvaluator, base: &PulseSequence, err: &ErrorVector) -> Result<f64> {
    Ok(eval.infidelity(&apply_errors(base, err)?))
}

pub fn sweep_1d(base: &PulseSequence, axis: Axis) -> Result<SweepGrid> {
    let axis = Axis::new(axis.param, axis.min, axis.max, axis.steps)?;
    let eval = SequenceEvaluator::new(base.n_qubits(), base.target())?;
    let values = (0..axis.steps)
        .into_par_iter()
        .map(|i| infidelity_at(&eval, base, &ErrorVector::single(axis.param, axis.value(i))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid { x: axis, y: None, values })
}

pub fn sweep_2d(base: &PulseSequence, x: Axis, y: Axis) -> Result<SweepGrid> {
    let x = Axis::new(x.param, x.min, x.max, x.steps)?;
    let y = Axis::new(y.param, y.min, y.max, y.steps)?;
    if x.param == y.param {
        return Err(Error::DuplicateAxis(x.param.name().to_string()));
    }
    let eval = SequenceEvaluator::new(base.n_qubits(), base.target())?;
    let values = (0..x.steps * y.steps)
        .into_par_iter()
        .map(|k| {
            let mut err = ErrorVector::single(x.param, x.value(k % x.steps));
            err.set(y.param, y.value(k / x.steps));
            infidelity_at(&eval, base, &err)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid { x, y: Some(y), values })
}

/// Second-order coefficient `c` of a least-squares fit
/// `1 - F = a + b eps + c eps^2` over `|eps| <= 0.01`. A linear term above
/// [`FIT_LINEAR_LIMIT`] means `base` is not an optimum and is reported as a
/// fit failure.
pub fn quadratic_coefficient(base: &PulseSequence, param: SweepParam) -> Result<f64> {
    let axis = Axis::new(param, -FIT_HALF_WIDTH, FIT_HALF_WIDTH, FIT_POINTS)?;
    let grid = sweep_1d(base, axis)?;
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for (e, _, v) in grid.points() {
        let row = Vector3::new(1.0, e, e * e);
        normal += row * row.transpose();
        rhs += row * v;
    }
    let coeffs = normal.lu().solve(&rhs).expect("distinct sample points give a regular system");
    let linear = coeffs[1];
    if linear.abs() > FIT_LINEAR_LIMIT {
        return Err(Error::FitFailure { param: param.name().to_string(), linear, limit: FIT_LINEAR_LIMIT });
    }
    Ok(coeffs[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulseseq::total_duration;
    use std::f64::consts::PI;

    fn reference() -> PulseSequence {
        PulseSequence::d3_2_reference()
    }

    #[test]
    fn names_round_trip() {
        for p in SweepParam::ALL {
            assert_eq!(p.name().parse::<SweepParam>().unwrap(), p);
        }
        let err = "beta1".parse::<SweepParam>().unwrap_err();
        assert!(err.to_string().contains("alpha1"));
    }

    #[test]
    fn zero_error_is_identity() {
        let s = reference();
        assert_eq!(apply_errors(&s, &ErrorVector::default()).unwrap(), s);
    }

    #[test]
    fn relative_and_absolute_errors() {
        let s = reference();
        let p = apply_errors(&s, &ErrorVector::single(SweepParam::Alpha1, 0.1)).unwrap();
        assert!((p.alpha()[0] - 0.825 * PI).abs() < 1e-14);
        let p = apply_errors(&s, &ErrorVector::single(SweepParam::Phi2, -0.1)).unwrap();
        assert_eq!(p.phi()[1], -0.1);
    }

    #[test]
    fn anti_diagonal_duration_errors_keep_total_duration() {
        let s = PulseSequence::d4_2_reference();
        let [x1, x2] = s.xi();
        let d = 0.07;
        let err = ErrorVector { eps_xi: [d, -d * x1 / x2], ..Default::default() };
        let p = apply_errors(&s, &err).unwrap();
        assert!((total_duration(&p) - total_duration(&s)).abs() < 1e-15);
    }

    #[test]
    fn negative_duration_is_rejected() {
        let err = ErrorVector::single(SweepParam::Xi1, -1.5);
        assert!(matches!(apply_errors(&reference(), &err), Err(Error::NegativeDuration(_))));
    }

    #[test]
    fn axis_validation_and_exact_zero() {
        assert!(matches!(Axis::new(SweepParam::Xi1, -0.1, 0.1, 2), Err(Error::TooFewSteps(2))));
        assert!(Axis::new(SweepParam::Xi1, 0.1, -0.1, 5).is_err());
        let a = Axis::default_for(SweepParam::Xi1);
        assert_eq!(a.value(20), 0.0);
        assert_eq!(a.value(0), -0.1);
        assert_eq!(a.value(40), 0.1);
    }

    #[test]
    fn sweep_contains_unperturbed_point() {
        let s = reference();
        let g = sweep_1d(&s, Axis::default_for(SweepParam::Xi1)).unwrap();
        assert_eq!(g.values.len(), DEFAULT_STEPS);
        assert!(g.values[20] <= 1e-9);
        assert_eq!(g.values[20], SequenceEvaluator::new(3, 2).unwrap().infidelity(&s));
        assert!(g.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn phi3_sweep_peaks_near_one_percent() {
        let g = sweep_1d(&reference(), Axis::default_for(SweepParam::Phi3)).unwrap();
        assert!((g.max() - 0.009).abs() <= 0.003, "{}", g.max());
    }

    #[test]
    fn grid_is_row_major_over_y_then_x() {
        let s = reference();
        let x = Axis::new(SweepParam::Alpha1, -0.1, 0.1, 5).unwrap();
        let y = Axis::new(SweepParam::Phi2, -0.05, 0.05, 3).unwrap();
        let g = sweep_2d(&s, x, y).unwrap();
        assert_eq!(g.values.len(), 15);
        let eval = SequenceEvaluator::new(3, 2).unwrap();
        let mut err = ErrorVector::single(SweepParam::Alpha1, x.value(3));
        err.set(SweepParam::Phi2, y.value(2));
        assert_eq!(g.get(3, 2), eval.infidelity(&apply_errors(&s, &err).unwrap()));
        assert_eq!(g.values[2 * 5 + 3], g.get(3, 2));
    }

    #[test]
    fn duplicate_axes_rejected() {
        let a = Axis::default_for(SweepParam::Phi1);
        assert!(matches!(sweep_2d(&reference(), a, a), Err(Error::DuplicateAxis(_))));
    }

    #[test]
    fn csv_layout() {
        let x = Axis::new(SweepParam::Xi2, -0.1, 0.1, 3).unwrap();
        let csv = sweep_1d(&reference(), x).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "eps_x,infidelity");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("-1.0000000000000001e-1,"));
        assert!(!csv.contains('\r'));

        let y = Axis::new(SweepParam::Xi1, -0.1, 0.1, 3).unwrap();
        let csv = sweep_2d(&reference(), x, y).unwrap().to_csv();
        assert_eq!(csv.lines().next(), Some("eps_x,eps_y,infidelity"));
        assert_eq!(csv.lines().count(), 10);
    }

    #[test]
    fn quadratic_fit_at_optimum() {
        let s = reference();
        let c: Vec<f64> = SweepParam::ALL.iter().map(|&p| quadratic_coefficient(&s, p).unwrap()).collect();
        assert!(c.iter().all(|&v| v > 0.0 && v.is_finite()));
        let top = c.iter().copied().enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
        assert_eq!(SweepParam::ALL[top], SweepParam::Alpha1);
    }

    #[test]
    fn quadratic_fit_fails_off_optimum() {
        let s = PulseSequence::new(3, 2, [0.4, 0.7], [1.0, -0.3, 0.6], [0.5, 0.2, 1.1]).unwrap();
        for p in SweepParam::ALL {
            assert!(matches!(quadratic_coefficient(&s, p), Err(Error::FitFailure { .. })), "{p}");
        }
    }
}
