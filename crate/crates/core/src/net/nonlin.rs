use serde::{Deserialize, Serialize};

const SELU_LAMBDA: f64 = 1.050_700_987_355_480_5;
const SELU_ALPHA: f64 = 1.673_263_242_354_377_3;

/// `E[tanh(z)²]` for `z ~ N(0, 1)`, by quadrature. Regenerated in the tests.
pub const GAMMA_TANH: f64 = 0.394_294_490_397_841_2;

/// Entrywise nonlinearity applied after each layer's affine map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Nonlinearity {
    #[serde(alias = "ReLU")]
    Relu,
    #[serde(alias = "SELU")]
    Selu,
    Tanh,
    Identity,
}

impl Nonlinearity {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Nonlinearity::Relu => x.max(0.0),
            Nonlinearity::Selu => {
                if x > 0.0 {
                    SELU_LAMBDA * x
                } else {
                    SELU_LAMBDA * SELU_ALPHA * x.exp_m1()
                }
            }
            Nonlinearity::Tanh => x.tanh(),
            Nonlinearity::Identity => x,
        }
    }

    /// Derivative at `x`; the one-sided derivative from the left at kinks.
    #[inline]
    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Nonlinearity::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Nonlinearity::Selu => {
                if x > 0.0 {
                    SELU_LAMBDA
                } else {
                    SELU_LAMBDA * SELU_ALPHA * x.exp()
                }
            }
            Nonlinearity::Tanh => 1.0 - x.tanh().powi(2),
            Nonlinearity::Identity => 1.0,
        }
    }

    /// Gain `γ_σ` in the initialization variance: `E[σ(z)²] / E[z²]` for
    /// zero-mean `z` of the appropriate scale.
    pub fn gamma(self) -> f64 {
        match self {
            Nonlinearity::Relu => 0.5,
            Nonlinearity::Selu | Nonlinearity::Identity => 1.0,
            Nonlinearity::Tanh => GAMMA_TANH,
        }
    }

    /// `σ(−x) = −σ(x)`: only odd nonlinearities commute with sign flips.
    pub fn is_odd(self) -> bool {
        matches!(self, Nonlinearity::Tanh | Nonlinearity::Identity)
    }

    /// True where the derivative jumps.
    pub fn has_kink(self) -> bool {
        matches!(self, Nonlinearity::Relu | Nonlinearity::Selu)
    }
}

impl std::str::FromStr for Nonlinearity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "relu" => Ok(Nonlinearity::Relu),
            "selu" => Ok(Nonlinearity::Selu),
            "tanh" => Ok(Nonlinearity::Tanh),
            "identity" | "linear" | "none" => Ok(Nonlinearity::Identity),
            other => Err(format!("unknown nonlinearity {other:?}")),
        }
    }
}
