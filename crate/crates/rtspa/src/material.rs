//! Hyperelastic pillow material: Ogden 1st-order uniaxial law, least-squares
//! fit to stress-strain data, and the pressure-to-expansion membrane
//! surrogate used by the chain kinematics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ActuatorGeometry;

/// Dimensionless large-deflection square-membrane coefficient in
/// p = c (E t / a^4) w^3. Calibration constant standing in for the FEM it
/// replaces.
pub const MEMBRANE_COEFF: f64 = 3.0;

/// Default peak membrane strain cap used by the wall-thickness selector.
pub const DEFAULT_STRAIN_CAP: f64 = 0.75;

/// Fit bounds: mu in (0, 10] MPa, alpha in [1, 8].
const MU_BOUNDS: (f64, f64) = (1e-4, 10.0);
const ALPHA_BOUNDS: (f64, f64) = (1.0, 8.0);

/// One uniaxial tension sample: stretch (>= 1 in tension) and nominal stress.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressStrainSample {
    pub lambda: f64,
    pub stress_mpa: f64,
}

/// Ogden 1st-order parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OgdenModel {
    pub mu: f64,
    pub alpha: f64,
}

impl Default for OgdenModel {
    /// Parameters of the fit to the bundled synthetic dataset
    /// (`data/stress_strain_default.csv`, generated from exactly these
    /// values with zero noise).
    fn default() -> Self {
        OgdenModel { mu: 0.8, alpha: 2.5 }
    }
}

impl OgdenModel {
    /// Incompressible uniaxial nominal stress:
    /// P(lambda) = mu (lambda^(alpha-1) - lambda^(-alpha/2 - 1)).
    /// Reduces to the neo-Hookean law mu (lambda - lambda^-2) at alpha = 2.
    pub fn uniaxial_stress(&self, lambda: f64) -> Result<f64> {
        if lambda <= 0.0 {
            return Err(Error::NonPositiveStretch(lambda));
        }
        Ok(self.mu * (lambda.powf(self.alpha - 1.0) - lambda.powf(-self.alpha / 2.0 - 1.0)))
    }

    /// Small-strain Young's modulus implied by the fit: E = 3 mu alpha / 2
    /// (shear modulus mu alpha / 2, incompressible).
    pub fn youngs_modulus(&self) -> f64 {
        1.5 * self.mu * self.alpha
    }
}

/// Ogden parameters plus the membrane constants derived from the geometry
/// (face side, wall thickness, rated pressure).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialModel {
    pub ogden: OgdenModel,
    pub face_side: f64,
    pub wall_thickness: f64,
    pub p_max: f64,
}

impl MaterialModel {
    pub fn new(ogden: OgdenModel, geom: &ActuatorGeometry) -> Self {
        MaterialModel {
            ogden,
            face_side: geom.face_side,
            wall_thickness: geom.wall_thickness,
            p_max: geom.p_max,
        }
    }

    /// Default material for the shipped geometry.
    pub fn default_for(geom: &ActuatorGeometry) -> Self {
        MaterialModel::new(OgdenModel::default(), geom)
    }

    /// Center deflection of one face at pressure `p` and wall thickness `t`:
    /// the root of p = c (E t / a^4) w^3 with a = face_side / 2.
    fn deflection(&self, p: f64, t: f64) -> f64 {
        let a = self.face_side / 2.0;
        let e = self.ogden.youngs_modulus();
        (p * a.powi(4) / (MEMBRANE_COEFF * e * t)).cbrt()
    }

    /// Unit expansion e(p) = 2 w(p): both faces deflect. Strictly increasing
    /// in p, strictly decreasing in wall thickness.
    pub fn expansion(&self, p: f64) -> Result<f64> {
        self.check_pressure(p)?;
        Ok(2.0 * self.deflection(p, self.wall_thickness))
    }

    /// Peak membrane strain estimate (w / a)^2 at pressure `p` for wall
    /// thickness `t`.
    pub fn peak_strain(&self, p: f64, t: f64) -> Result<f64> {
        self.check_pressure(p)?;
        let a = self.face_side / 2.0;
        let w = self.deflection(p, t);
        Ok((w / a).powi(2))
    }

    fn check_pressure(&self, p: f64) -> Result<()> {
        if !(0.0..=self.p_max + 1e-12).contains(&p) {
            return Err(Error::PressureOutOfRange { value: p, max: self.p_max });
        }
        Ok(())
    }
}

/// Fit outcome: parameters plus root-mean-square residual stress.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OgdenFit {
    pub model: OgdenModel,
    pub rmse_mpa: f64,
}

/// Sum of squares and the closed-form optimal mu at a fixed alpha. The
/// stress law is linear in mu, so mu is profiled out analytically (clamped
/// to its bounds) and only alpha needs a numeric search.
fn profiled_sse(samples: &[StressStrainSample], alpha: f64) -> (f64, f64) {
    let mut num = 0.0;
    let mut den = 0.0;
    for s in samples {
        let b = s.lambda.powf(alpha - 1.0) - s.lambda.powf(-alpha / 2.0 - 1.0);
        num += s.stress_mpa * b;
        den += b * b;
    }
    let mu = if den > 0.0 {
        (num / den).clamp(MU_BOUNDS.0, MU_BOUNDS.1)
    } else {
        MU_BOUNDS.0
    };
    let sse = samples
        .iter()
        .map(|s| {
            let b = s.lambda.powf(alpha - 1.0) - s.lambda.powf(-alpha / 2.0 - 1.0);
            (mu * b - s.stress_mpa).powi(2)
        })
        .sum();
    (mu, sse)
}

/// Least-squares fit of (mu, alpha) to uniaxial samples.
///
/// mu is linear in the stress law and eliminated in closed form; alpha is
/// found by a dense scan of its bounds followed by golden-section
/// refinement. Fully deterministic.
pub fn fit_ogden(samples: &[StressStrainSample]) -> Result<OgdenFit> {
    if samples.len() < 5 {
        return Err(Error::FitFailure(format!(
            "need at least 5 samples, got {}",
            samples.len()
        )));
    }
    for w in samples.windows(2) {
        if w[1].lambda <= w[0].lambda {
            return Err(Error::FitFailure(
                "samples must be strictly increasing in lambda".into(),
            ));
        }
    }
    if samples.iter().any(|s| s.lambda <= 0.0) {
        return Err(Error::FitFailure("stretches must be positive".into()));
    }
    let max_lambda = samples.last().unwrap().lambda;
    if max_lambda < 1.5 {
        return Err(Error::FitFailure(format!(
            "samples must span lambda up to at least 1.5, max is {max_lambda}"
        )));
    }

    // Dense alpha scan to bracket the global minimum of the profiled SSE.
    const SCAN_STEPS: usize = 700;
    let (a_lo, a_hi) = ALPHA_BOUNDS;
    let mut best_i = 0;
    let mut best_sse = f64::INFINITY;
    for i in 0..=SCAN_STEPS {
        let alpha = a_lo + (a_hi - a_lo) * i as f64 / SCAN_STEPS as f64;
        let (_, sse) = profiled_sse(samples, alpha);
        if sse < best_sse {
            best_sse = sse;
            best_i = i;
        }
    }
    let step = (a_hi - a_lo) / SCAN_STEPS as f64;
    let mut lo = (a_lo + step * best_i as f64 - step).max(a_lo);
    let mut hi = (a_lo + step * best_i as f64 + step).min(a_hi);

    // Golden-section refinement on the bracket.
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = profiled_sse(samples, c).1;
    let mut fd = profiled_sse(samples, d).1;
    for _ in 0..120 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = profiled_sse(samples, c).1;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = profiled_sse(samples, d).1;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let (mu, sse) = profiled_sse(samples, alpha);
    if !sse.is_finite() {
        return Err(Error::FitFailure("objective diverged".into()));
    }
    Ok(OgdenFit {
        model: OgdenModel { mu, alpha },
        rmse_mpa: (sse / samples.len() as f64).sqrt(),
    })
}

/// Returns the thinnest candidate whose predicted peak membrane strain at
/// `p_design` stays below `strain_cap`. Candidates are considered in
/// ascending thickness; strain decreases with thickness, so the first
/// feasible candidate is the thinnest.
pub fn select_wall_thickness(
    candidates: &[f64],
    mat: &MaterialModel,
    p_design: f64,
    strain_cap: f64,
) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::FitFailure("empty wall-thickness candidate list".into()));
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut strains = Vec::with_capacity(sorted.len());
    let mut chosen: Option<f64> = None;
    for &t in &sorted {
        let s = mat.peak_strain(p_design, t)?;
        strains.push((t, s));
        if chosen.is_none() && s <= strain_cap {
            chosen = Some(t);
        }
    }
    chosen.ok_or(Error::NoFeasibleThickness {
        strains,
        cap: strain_cap,
    })
}

/// Evaluates a model on an ascending stretch grid; used to build synthetic
/// datasets for the CLI and tests.
pub fn synthesize_samples(model: &OgdenModel, lambdas: &[f64]) -> Vec<StressStrainSample> {
    lambdas
        .iter()
        .map(|&l| StressStrainSample {
            lambda: l,
            stress_mpa: model.uniaxial_stress(l).unwrap(),
        })
        .collect()
}
