//! Scalar initial data and test functions shared by the solvers.

use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub enum Profile {
    Constant(f64),
    /// `amplitude * exp(-(x - center)² / (2 width²))`
    Gaussian {
        center: f64,
        width: f64,
        amplitude: f64,
    },
    /// Indicator of the closed interval `[lo, hi]`; either end may be infinite.
    Indicator { lo: f64, hi: f64 },
    /// `slope * x + intercept`
    Linear { slope: f64, intercept: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) => write!(f, "Constant({c})"),
            Profile::Gaussian {
                center,
                width,
                amplitude,
            } => write!(f, "Gaussian(center={center}, width={width}, amplitude={amplitude})"),
            Profile::Indicator { lo, hi } => write!(f, "Indicator[{lo}, {hi}]"),
            Profile::Linear { slope, intercept } => write!(f, "Linear({slope} x + {intercept})"),
            Profile::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl Profile {
    pub fn gaussian(center: f64, width: f64) -> Self {
        Profile::Gaussian {
            center,
            width,
            amplitude: 1.0,
        }
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile::Custom(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Gaussian {
                center,
                width,
                amplitude,
            } => {
                let z = (x - center) / width;
                amplitude * (-0.5 * z * z).exp()
            }
            Profile::Indicator { lo, hi } => {
                if x >= *lo && x <= *hi {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Linear { slope, intercept } => slope * x + intercept,
            Profile::Custom(f) => f(x),
        }
    }

    /// Points where the profile is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::Indicator { lo, hi } => [*lo, *hi].into_iter().filter(|x| x.is_finite()).collect(),
            _ => Vec::new(),
        }
    }

    /// Whether the profile is known to be bounded on the whole line.
    pub fn is_bounded(&self) -> bool {
        match self {
            Profile::Linear { slope, .. } => *slope == 0.0,
            _ => true,
        }
    }

    pub fn is_constant(&self) -> Option<f64> {
        match self {
            Profile::Constant(c) => Some(*c),
            Profile::Linear { slope, intercept } if *slope == 0.0 => Some(*intercept),
            _ => None,
        }
    }
}
