use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{NetError, Nonlinearity};
use crate::basis::{bias_basis, orbit_basis, EquivBasis};
use crate::group::Representation;

/// How coefficient variance is chosen at initialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    /// `Var(β) = m / (λ γ_σ)`: keeps activation variance constant forward.
    FanIn,
    /// `Var(β) = n / (λ γ_σ)`: keeps gradient variance constant backward.
    FanOut,
    /// Fixed standard deviation, ignoring layer shape.
    Constant { std: f64 },
}

impl std::str::FromStr for InitMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fan_in" | "fan-in" => Ok(InitMode::FanIn),
            "fan_out" | "fan-out" => Ok(InitMode::FanOut),
            other => match other.strip_prefix("constant:").map(str::parse::<f64>) {
                Some(Ok(std)) if std >= 0.0 => Ok(InitMode::Constant { std }),
                _ => Err(format!("unknown init mode {other:?}; expected fan_in, fan_out or constant:<std>")),
            },
        }
    }
}

/// Variance of the coefficients under `mode`. `λ = Σ_{ijk} Θ̄²_{ijk}` counts
/// the support of every non-zero-forced orbit.
pub fn init_variance(basis: &EquivBasis, nonlinearity: Nonlinearity, mode: InitMode) -> Result<f64, NetError> {
    let lambda = basis.lambda();
    if lambda == 0.0 {
        return Err(NetError::DegenerateBasis);
    }
    let gamma = nonlinearity.gamma();
    Ok(match mode {
        InitMode::FanIn => basis.m as f64 / (lambda * gamma),
        InitMode::FanOut => basis.n as f64 / (lambda * gamma),
        InitMode::Constant { std } => std * std,
    })
}

/// Draws `β_k ~ N(0, Var)` i.i.d. for every orbit of `basis`.
pub fn init_coeffs<R: Rng + ?Sized>(
    basis: &EquivBasis,
    nonlinearity: Nonlinearity,
    mode: InitMode,
    rng: &mut R,
) -> Result<Vec<f64>, NetError> {
    let var = init_variance(basis, nonlinearity, mode)?;
    let normal = Normal::new(0.0, var.sqrt()).expect("finite non-negative std");
    Ok((0..basis.rank()).map(|_| normal.sample(rng)).collect())
}

/// `y = σ(W x + b)` with `W` and `b` confined to the equivariant subspaces.
#[derive(Debug, Clone)]
pub struct EquivLayer {
    rep_in: Representation,
    rep_out: Representation,
    basis: EquivBasis,
    bias_basis: EquivBasis,
    coeffs: Vec<f64>,
    bias_coeffs: Vec<f64>,
    nonlinearity: Nonlinearity,
    weight: DMatrix<f64>,
    bias: DVector<f64>,
}

impl EquivLayer {
    /// Layer with all coefficients zero.
    pub fn new(rep_in: Representation, rep_out: Representation, nonlinearity: Nonlinearity) -> Result<Self, NetError> {
        if rep_out.is_signed() && !nonlinearity.is_odd() {
            return Err(NetError::SignedRepNeedsOddNonlinearity(nonlinearity));
        }
        let basis = orbit_basis(&rep_in, &rep_out)?;
        let bias_basis = bias_basis(&rep_out);
        let (m, n) = (rep_out.dim(), rep_in.dim());
        Ok(EquivLayer {
            coeffs: vec![0.0; basis.rank()],
            bias_coeffs: vec![0.0; bias_basis.rank()],
            rep_in,
            rep_out,
            basis,
            bias_basis,
            nonlinearity,
            weight: DMatrix::zeros(m, n),
            bias: DVector::zeros(m),
        })
    }

    pub fn rep_in(&self) -> &Representation {
        &self.rep_in
    }

    pub fn rep_out(&self) -> &Representation {
        &self.rep_out
    }

    pub fn basis(&self) -> &EquivBasis {
        &self.basis
    }

    /// Replaces the basis, e.g. with one loaded from disk. Coefficients reset to zero.
    pub fn set_basis(&mut self, basis: EquivBasis) -> Result<(), NetError> {
        if basis.m != self.rep_out.dim() || basis.n != self.rep_in.dim() {
            return Err(NetError::DimMismatch { expected: self.rep_out.dim() * self.rep_in.dim(), got: basis.m * basis.n });
        }
        basis.check_well_formed()?;
        self.coeffs = vec![0.0; basis.rank()];
        self.basis = basis;
        self.refresh();
        Ok(())
    }

    pub fn bias_basis(&self) -> &EquivBasis {
        &self.bias_basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn bias_coeffs(&self) -> &[f64] {
        &self.bias_coeffs
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        self.nonlinearity
    }

    pub fn weight(&self) -> &DMatrix<f64> {
        &self.weight
    }

    pub fn bias(&self) -> &DVector<f64> {
        &self.bias
    }

    pub fn num_params(&self) -> usize {
        self.coeffs.len() + self.bias_coeffs.len()
    }

    pub fn set_coeffs(&mut self, coeffs: Vec<f64>, bias_coeffs: Vec<f64>) -> Result<(), NetError> {
        if coeffs.len() != self.basis.rank() {
            return Err(NetError::DimMismatch { expected: self.basis.rank(), got: coeffs.len() });
        }
        if bias_coeffs.len() != self.bias_basis.rank() {
            return Err(NetError::DimMismatch { expected: self.bias_basis.rank(), got: bias_coeffs.len() });
        }
        self.coeffs = coeffs;
        self.bias_coeffs = bias_coeffs;
        self.refresh();
        Ok(())
    }

    /// Initializes weights per `mode` and zeroes the bias.
    pub fn init<R: Rng + ?Sized>(&mut self, mode: InitMode, rng: &mut R) -> Result<(), NetError> {
        let coeffs = init_coeffs(&self.basis, self.nonlinearity, mode, rng)?;
        let bias = vec![0.0; self.bias_basis.rank()];
        self.set_coeffs(coeffs, bias)
    }

    fn refresh(&mut self) {
        let (m, n) = (self.basis.m, self.basis.n);
        self.weight = DMatrix::from_row_slice(m, n, &self.basis.materialize(&self.coeffs));
        self.bias = DVector::from_vec(self.bias_basis.materialize(&self.bias_coeffs));
    }

    /// Pre-activations `W X + b` for a batch stored as columns.
    pub fn pre_activation(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut z = &self.weight * x;
        for mut col in z.column_iter_mut() {
            col += &self.bias;
        }
        z
    }

    pub fn activate(&self, z: &DMatrix<f64>) -> DMatrix<f64> {
        let s = self.nonlinearity;
        z.map(|v| s.apply(v))
    }
}
