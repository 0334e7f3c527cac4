//! Non-fatal diagnostics attached to results.
//!
//! Functions that can detect a degraded but still computable configuration
//! return their warnings alongside the value instead of failing. Every warning
//! is also forwarded to the `log` facade when it is created.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// `kappa^2` lies within the soft threshold of a transverse eigenvalue.
    NearWoodAnomaly { index: usize, distance: f64 },
    /// The pole-basis column of the modified Hardy operators is large.
    SmallPole { zeta_abs: f64 },
    /// More than one mode qualifies for the pole basis; only one is used.
    MultipleCriticalModes { indices: Vec<usize> },
    /// Quadrature does not resolve the highest requested transverse mode.
    UnderResolved {
        points_per_oscillation: f64,
        aliasing_bound: f64,
    },
    /// A linear system is close to singular.
    IllConditioned { context: String, condition: f64 },
    /// `kappa^2` is on the negative real axis, so both square roots qualify.
    AmbiguousBranch { kappa_sq_re: f64 },
    /// Data was projected onto the discrete trace space before use.
    ProjectedTrace { defect: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NearWoodAnomaly { index, distance } => write!(
                f,
                "kappa^2 is {distance:e} from transverse eigenvalue {index}; consider the modified Hardy basis"
            ),
            Warning::SmallPole { zeta_abs } => write!(
                f,
                "pole parameter |zeta| = {zeta_abs:.3} is small; the modified system is badly conditioned"
            ),
            Warning::MultipleCriticalModes { indices } => {
                write!(f, "several critical modes {indices:?}; only the first is enriched")
            }
            Warning::UnderResolved {
                points_per_oscillation,
                aliasing_bound,
            } => write!(
                f,
                "trace quadrature has {points_per_oscillation:.1} points per oscillation (aliasing bound {aliasing_bound:e})"
            ),
            Warning::IllConditioned { context, condition } => {
                write!(f, "{context}: condition estimate {condition:e}")
            }
            Warning::AmbiguousBranch { kappa_sq_re } => {
                write!(f, "kappa^2 = {kappa_sq_re} on the negative real axis; both roots reported")
            }
            Warning::ProjectedTrace { defect } => {
                write!(f, "trace data projected onto the discrete space (defect {defect:e})")
            }
        }
    }
}

impl Warning {
    pub(crate) fn emit(self) -> Self {
        log::warn!("{self}");
        self
    }
}
