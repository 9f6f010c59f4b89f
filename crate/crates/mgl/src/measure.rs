//! The measure `η = ν + Σ αᵢ δ_{zᵢ}` on `(0, 1]`: a continuous part with
//! strictly increasing distribution function plus finitely many weighted
//! point masses, with validation, canonical rotation, and JSON ingestion.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Positions closer than this are treated as the same atom (exact equality
/// is required by validation; this constant is used when merging grid atoms
/// against true atoms in the discrete approximation).
pub const POSITION_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("measure must carry at least one atom")]
    NoAtoms,
    #[error("atom weight must be positive and finite, got {0}")]
    NonPositiveWeight(f64),
    #[error("atom position must lie in (0, 1], got {0}")]
    PositionOutOfRange(f64),
    #[error("duplicate atom position {0}")]
    DuplicatePosition(f64),
    #[error("evaluation point must lie in [0, 1], got {0}")]
    EvaluationOutOfRange(f64),
    #[error("piecewise-linear cdf needs at least two knots")]
    TooFewKnots,
    #[error("piecewise-linear cdf must start at (0, 0), got ({0}, {1})")]
    BadFirstKnot(f64, f64),
    #[error("piecewise-linear cdf must end at x = 1, got x = {0}")]
    BadLastKnot(f64),
    #[error(
        "piecewise-linear cdf knots must be strictly increasing in both coordinates near x = {0}"
    )]
    NonMonotoneKnots(f64),
    #[error("operation requires the canonical form (last atom at z = 1), got z_N = {0}")]
    NotCanonical(f64),
    #[error("invalid measure JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, MeasureError>;

/// The atomless part ν of the measure, described through its distribution
/// function F_ν. Only strictly increasing distribution functions are
/// representable, so F_ν is invertible on `[0, F_ν(1)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ContinuousPart {
    /// Lebesgue measure on (0, 1]; F_ν is the identity.
    Lebesgue,
    /// Strictly increasing piecewise-linear distribution function given by
    /// knots `(x, F(x))` with first knot `(0, 0)` and last knot `(1, mass)`.
    PiecewiseLinearCdf { knots: Vec<[f64; 2]> },
}

impl ContinuousPart {
    fn validate(&self) -> Result<()> {
        match self {
            ContinuousPart::Lebesgue => Ok(()),
            ContinuousPart::PiecewiseLinearCdf { knots } => {
                if knots.len() < 2 {
                    return Err(MeasureError::TooFewKnots);
                }
                let first = knots[0];
                if first[0] != 0.0 || first[1] != 0.0 {
                    return Err(MeasureError::BadFirstKnot(first[0], first[1]));
                }
                let last = knots[knots.len() - 1];
                if last[0] != 1.0 {
                    return Err(MeasureError::BadLastKnot(last[0]));
                }
                for w in knots.windows(2) {
                    // Negated comparisons also reject NaN knots.
                    #[allow(clippy::neg_cmp_op_on_partial_ord)]
                    if !(w[1][0] > w[0][0]) || !(w[1][1] > w[0][1]) {
                        return Err(MeasureError::NonMonotoneKnots(w[0][0]));
                    }
                }
                if !knots.iter().all(|k| k[0].is_finite() && k[1].is_finite()) {
                    return Err(MeasureError::NonMonotoneKnots(f64::NAN));
                }
                Ok(())
            }
        }
    }

    /// F_ν(x) for x in [0, 1].
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            ContinuousPart::Lebesgue => x,
            ContinuousPart::PiecewiseLinearCdf { knots } => {
                if x <= 0.0 {
                    return 0.0;
                }
                if x >= 1.0 {
                    return knots[knots.len() - 1][1];
                }
                let i = match knots.binary_search_by(|k| k[0].partial_cmp(&x).unwrap()) {
                    Ok(i) => return knots[i][1],
                    Err(i) => i,
                };
                let (lo, hi) = (knots[i - 1], knots[i]);
                lo[1] + (hi[1] - lo[1]) * (x - lo[0]) / (hi[0] - lo[0])
            }
        }
    }

    /// Total mass F_ν(1) of the continuous part.
    pub fn total_mass(&self) -> f64 {
        match self {
            ContinuousPart::Lebesgue => 1.0,
            ContinuousPart::PiecewiseLinearCdf { knots } => knots[knots.len() - 1][1],
        }
    }

    /// Linear pieces of the distribution function as `(x_lo, x_hi, f_lo, f_hi)`.
    pub fn pieces(&self) -> Vec<(f64, f64, f64, f64)> {
        match self {
            ContinuousPart::Lebesgue => vec![(0.0, 1.0, 0.0, 1.0)],
            ContinuousPart::PiecewiseLinearCdf { knots } => knots
                .windows(2)
                .map(|w| (w[0][0], w[1][0], w[0][1], w[1][1]))
                .collect(),
        }
    }

    /// Rotate the measure so that old position `z_n` becomes 1: the new
    /// distribution function of x is the mass of `((z_n, z_n + x]` taken
    /// cyclically on (0, 1].
    fn rotated(&self, z_n: f64) -> ContinuousPart {
        if z_n == 1.0 {
            return self.clone();
        }
        match self {
            ContinuousPart::Lebesgue => ContinuousPart::Lebesgue,
            ContinuousPart::PiecewiseLinearCdf { knots } => {
                let shift = 1.0 - z_n;
                let total = self.total_mass();
                let f_zn = self.cdf(z_n);
                let mut new_knots: Vec<[f64; 2]> = vec![[0.0, 0.0]];
                let mut push = |x: f64, f: f64| {
                    let last = *new_knots.last().unwrap();
                    if x > last[0] + POSITION_MERGE_TOL {
                        new_knots.push([x, f]);
                    }
                };
                for k in knots {
                    if k[0] > z_n && k[0] < 1.0 {
                        push(k[0] - z_n, k[1] - f_zn);
                    }
                }
                push(shift, total - f_zn);
                for k in knots {
                    if k[0] > 0.0 && k[0] < z_n {
                        push(k[0] + shift, total - f_zn + k[1]);
                    }
                }
                let last = new_knots.last_mut().unwrap();
                if (last[0] - 1.0).abs() <= POSITION_MERGE_TOL {
                    last[0] = 1.0;
                    last[1] = total;
                } else {
                    new_knots.push([1.0, total]);
                }
                ContinuousPart::PiecewiseLinearCdf { knots: new_knots }
            }
        }
    }
}

/// One weighted point mass `α δ_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    /// Position z in (0, 1].
    pub z: f64,
    /// Weight α > 0.
    pub alpha: f64,
}

/// A validated measure `η = ν + Σ αᵢ δ_{zᵢ}` with atoms sorted ascending.
///
/// Instances are immutable after validation; every operation on them is pure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct MeasureSpec {
    continuous: ContinuousPart,
    atoms: Vec<Atom>,
}

/// Wire format mirror of [`MeasureSpec`] before validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawMeasure {
    continuous: ContinuousPart,
    atoms: Vec<Atom>,
}

impl TryFrom<RawMeasure> for MeasureSpec {
    type Error = MeasureError;
    fn try_from(raw: RawMeasure) -> Result<Self> {
        MeasureSpec::new(raw.continuous, raw.atoms)
    }
}

impl From<MeasureSpec> for RawMeasure {
    fn from(spec: MeasureSpec) -> RawMeasure {
        RawMeasure {
            continuous: spec.continuous,
            atoms: spec.atoms,
        }
    }
}

impl MeasureSpec {
    /// Validate a raw measure description: atoms are sorted, positions must
    /// be distinct points of (0, 1], weights positive, and the continuous
    /// part must have a strictly increasing distribution function.
    pub fn new(continuous: ContinuousPart, mut atoms: Vec<Atom>) -> Result<Self> {
        continuous.validate()?;
        if atoms.is_empty() {
            return Err(MeasureError::NoAtoms);
        }
        for a in &atoms {
            // The negated comparison also rejects a NaN weight.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(a.alpha > 0.0) || !a.alpha.is_finite() {
                return Err(MeasureError::NonPositiveWeight(a.alpha));
            }
            if !(a.z > 0.0 && a.z <= 1.0) {
                return Err(MeasureError::PositionOutOfRange(a.z));
            }
        }
        atoms.sort_by(|a, b| a.z.partial_cmp(&b.z).unwrap());
        for w in atoms.windows(2) {
            if w[0].z == w[1].z {
                return Err(MeasureError::DuplicatePosition(w[0].z));
            }
        }
        Ok(MeasureSpec { continuous, atoms })
    }

    /// Convenience constructor for Lebesgue plus atoms given as `(z, α)`.
    pub fn lebesgue_with_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        MeasureSpec::new(
            ContinuousPart::Lebesgue,
            atoms.iter().map(|&(z, alpha)| Atom { z, alpha }).collect(),
        )
    }

    /// Parse and validate the JSON wire format.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| MeasureError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measure serializes")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn continuous(&self) -> &ContinuousPart {
        &self.continuous
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// F_ν(x) of the continuous part only; atoms never contribute.
    pub fn distribution_value(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) || x.is_nan() {
            return Err(MeasureError::EvaluationOutOfRange(x));
        }
        Ok(self.continuous.cdf(x))
    }

    /// Total mass of η: continuous mass plus all atom weights.
    pub fn total_mass(&self) -> f64 {
        self.continuous.total_mass() + self.atoms.iter().map(|a| a.alpha).sum::<f64>()
    }

    pub fn is_canonical(&self) -> bool {
        self.atoms.last().map(|a| a.z == 1.0).unwrap_or(false)
    }

    pub fn require_canonical(&self) -> Result<()> {
        if self.is_canonical() {
            Ok(())
        } else {
            Err(MeasureError::NotCanonical(self.atoms.last().unwrap().z))
        }
    }

    /// Rotate the measure so the last atom sits at z = 1 (`ẑᵢ = zᵢ + 1 − z_N`).
    /// The spectrum is invariant under this rotation; the recorded shift
    /// allows eigenfunctions of the canonical measure to be rotated back.
    pub fn to_canonical(&self) -> CanonicalForm {
        let z_n = self.atoms.last().unwrap().z;
        if z_n == 1.0 {
            return CanonicalForm {
                spec: self.clone(),
                shift: 0.0,
            };
        }
        let shift = 1.0 - z_n;
        let mut atoms: Vec<Atom> = self
            .atoms
            .iter()
            .take(self.atoms.len() - 1)
            .map(|a| Atom {
                z: a.z + shift,
                alpha: a.alpha,
            })
            .collect();
        atoms.push(Atom {
            z: 1.0,
            alpha: self.atoms.last().unwrap().alpha,
        });
        let spec = MeasureSpec::new(self.continuous.rotated(z_n), atoms)
            .expect("rotation preserves validity");
        CanonicalForm { spec, shift }
    }

    /// Cumulative F_ν at the segment boundaries: `[0, F(z_1), …, F(z_N)]`.
    /// Segment j (0-based) spans `(z_{j-1}, z_j]` in x, or the interval
    /// `(T_j, T_{j+1}]` of this vector in the F coordinate.
    pub fn segment_cdf_bounds(&self) -> Vec<f64> {
        let mut bounds = Vec::with_capacity(self.atoms.len() + 1);
        bounds.push(0.0);
        for a in &self.atoms {
            bounds.push(self.continuous.cdf(a.z));
        }
        bounds
    }

    /// Index of the segment owning x under the left-continuity convention:
    /// segment j covers `(z_{j-1}, z_j]`. Points at or below 0 belong to
    /// segment 0 through the periodic identification.
    pub fn segment_of(&self, x: f64) -> usize {
        self.atoms
            .iter()
            .position(|a| x <= a.z)
            .unwrap_or(self.atoms.len() - 1)
    }
}

/// A measure together with the rotation that brought its last atom to z = 1.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub spec: MeasureSpec,
    /// Amount `1 − z_N (mod 1)` by which positions were shifted, in [0, 1).
    pub shift: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn validates_one_atom_example() {
        let spec = MeasureSpec::lebesgue_with_atoms(&[(1.0, 1.0 / PI)]).unwrap();
        assert_eq!(spec.atom_count(), 1);
        assert!(spec.is_canonical());
    }

    #[test]
    fn rejects_duplicate_positions() {
        let err = MeasureSpec::lebesgue_with_atoms(&[(0.5, 0.3), (0.5, 0.2)]).unwrap_err();
        assert!(matches!(err, MeasureError::DuplicatePosition(_)));
    }

    #[test]
    fn rejects_non_positive_weight() {
        let err = MeasureSpec::lebesgue_with_atoms(&[(0.25, -1.0)]).unwrap_err();
        assert!(matches!(err, MeasureError::NonPositiveWeight(_)));
        let err = MeasureSpec::lebesgue_with_atoms(&[(0.25, 0.0)]).unwrap_err();
        assert!(matches!(err, MeasureError::NonPositiveWeight(_)));
    }

    #[test]
    fn rejects_out_of_range_positions() {
        for z in [0.0, -0.25, 1.25] {
            let err = MeasureSpec::lebesgue_with_atoms(&[(z, 1.0)]).unwrap_err();
            assert!(matches!(err, MeasureError::PositionOutOfRange(_)));
        }
    }

    #[test]
    fn rejects_empty_atom_list() {
        let err = MeasureSpec::new(ContinuousPart::Lebesgue, vec![]).unwrap_err();
        assert!(matches!(err, MeasureError::NoAtoms));
    }

    #[test]
    fn sorts_atoms_ascending() {
        let spec = MeasureSpec::lebesgue_with_atoms(&[(0.8, 1.0), (0.3, 2.0)]).unwrap();
        assert_eq!(spec.atoms()[0].z, 0.3);
        assert_eq!(spec.atoms()[1].z, 0.8);
    }

    #[test]
    fn rejects_non_monotone_cdf_knots() {
        let cont = ContinuousPart::PiecewiseLinearCdf {
            knots: vec![[0.0, 0.0], [0.5, 0.8], [1.0, 0.7]],
        };
        let err = MeasureSpec::new(cont, vec![Atom { z: 1.0, alpha: 1.0 }]).unwrap_err();
        assert!(matches!(err, MeasureError::NonMonotoneKnots(_)));
    }

    #[test]
    fn lebesgue_distribution_is_identity() {
        let spec = MeasureSpec::lebesgue_with_atoms(&[(1.0, 0.5)]).unwrap();
        assert_eq!(spec.distribution_value(0.5).unwrap(), 0.5);
        assert_eq!(spec.distribution_value(1.0).unwrap(), 1.0);
        assert_eq!(spec.distribution_value(0.0).unwrap(), 0.0);
        assert!(spec.distribution_value(1.5).is_err());
        assert!(spec.distribution_value(-0.1).is_err());
    }

    #[test]
    fn piecewise_linear_cdf_interpolates() {
        let cont = ContinuousPart::PiecewiseLinearCdf {
            knots: vec![[0.0, 0.0], [0.5, 0.8], [1.0, 1.0]],
        };
        let spec = MeasureSpec::new(cont, vec![Atom { z: 1.0, alpha: 1.0 }]).unwrap();
        assert!((spec.distribution_value(0.25).unwrap() - 0.4).abs() < 1e-15);
        assert!((spec.distribution_value(0.75).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn canonical_shift_matches_translation() {
        let spec = MeasureSpec::lebesgue_with_atoms(&[(0.3, 0.7), (0.8, 0.9)]).unwrap();
        let canon = spec.to_canonical();
        assert!((canon.shift - 0.2).abs() < 1e-15);
        let zs: Vec<f64> = canon.spec.atoms().iter().map(|a| a.z).collect();
        assert!((zs[0] - 0.5).abs() < 1e-15);
        assert_eq!(zs[1], 1.0);
        assert_eq!(canon.spec.atoms()[0].alpha, 0.7);
        assert_eq!(canon.spec.atoms()[1].alpha, 0.9);
    }

    #[test]
    fn canonical_three_atom_case() {
        let spec =
            MeasureSpec::lebesgue_with_atoms(&[(0.25, 1.0), (0.5, 2.0), (0.75, 3.0)]).unwrap();
        let canon = spec.to_canonical();
        assert!((canon.shift - 0.25).abs() < 1e-15);
        let zs: Vec<f64> = canon.spec.atoms().iter().map(|a| a.z).collect();
        assert!((zs[0] - 0.5).abs() < 1e-15);
        assert!((zs[1] - 0.75).abs() < 1e-15);
        assert_eq!(zs[2], 1.0);
    }

    #[test]
    fn to_canonical_is_idempotent() {
        let spec = MeasureSpec::lebesgue_with_atoms(&[(0.3, 0.7), (0.8, 0.9)]).unwrap();
        let once = spec.to_canonical();
        let twice = once.spec.to_canonical();
        assert_eq!(twice.shift, 0.0);
        assert_eq!(once.spec, twice.spec);
    }

    #[test]
    fn rotated_cdf_preserves_mass_and_monotonicity() {
        let cont = ContinuousPart::PiecewiseLinearCdf {
            knots: vec![[0.0, 0.0], [0.25, 0.1], [0.6, 0.7], [1.0, 1.0]],
        };
        let spec = MeasureSpec::new(
            cont,
            vec![
                Atom { z: 0.4, alpha: 0.5 },
                Atom {
                    z: 0.7,
                    alpha: 0.25,
                },
            ],
        )
        .unwrap();
        let canon = spec.to_canonical();
        let rot = canon.spec.continuous();
        assert!((rot.total_mass() - 1.0).abs() < 1e-15);
        // Segment masses between consecutive atoms are preserved cyclically:
        // the old gap (0.4, 0.7] becomes the last canonical segment.
        let orig_gap = spec.continuous().cdf(0.7) - spec.continuous().cdf(0.4);
        let new_gap = rot.total_mass() - rot.cdf(canon.spec.atoms()[0].z);
        assert!((orig_gap - new_gap).abs() < 1e-12);
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = rot.cdf(i as f64 / 100.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn total_mass_is_additive_under_atom_insertion() {
        let base = MeasureSpec::lebesgue_with_atoms(&[(1.0, 0.4)]).unwrap();
        let more = MeasureSpec::lebesgue_with_atoms(&[(0.5, 0.3), (1.0, 0.4)]).unwrap();
        assert!((more.total_mass() - base.total_mass() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip_and_field_names() {
        let text = r#"{
            "continuous": {"type": "piecewise_linear_cdf", "knots": [[0,0],[0.5,0.8],[1,1]]},
            "atoms": [{"z": 0.5, "alpha": 0.3}, {"z": 1.0, "alpha": 0.2}]
        }"#;
        let spec = MeasureSpec::from_json(text).unwrap();
        assert_eq!(spec.atom_count(), 2);
        let back = spec.to_json();
        assert!(back.contains("piecewise_linear_cdf"));
        assert!(back.contains("\"alpha\""));
        let again = MeasureSpec::from_json(&back).unwrap();
        assert_eq!(spec, again);

        let lebesgue = r#"{"continuous": {"type": "lebesgue"}, "atoms": [{"z": 1.0, "alpha": 0.31830988618367}]}"#;
        assert!(MeasureSpec::from_json(lebesgue).is_ok());
    }

    #[test]
    fn json_rejects_invalid_measure() {
        let bad = r#"{"continuous": {"type": "lebesgue"}, "atoms": [{"z": 0.5, "alpha": -1.0}]}"#;
        assert!(MeasureSpec::from_json(bad).is_err());
    }

    #[test]
    fn segment_lookup_is_left_continuous() {
        let spec = MeasureSpec::lebesgue_with_atoms(&[(0.5, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(spec.segment_of(0.25), 0);
        assert_eq!(spec.segment_of(0.5), 0);
        assert_eq!(spec.segment_of(0.500001), 1);
        assert_eq!(spec.segment_of(1.0), 1);
    }
}
