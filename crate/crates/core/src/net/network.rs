use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{EquivLayer, InitMode, NetError, Nonlinearity};
use crate::group::{FiniteGroup, Representation};

/// A stack of equivariant layers sharing intermediate representations.
#[derive(Debug, Clone)]
pub struct EquivNet {
    layers: Vec<EquivLayer>,
}

/// Intermediate values of one forward pass.
#[derive(Debug, Clone)]
pub struct Forward {
    /// `activations[0]` is the input; `activations[l + 1]` is layer `l`'s output.
    pub activations: Vec<DVector<f64>>,
    pub pre_activations: Vec<DVector<f64>>,
}

impl Forward {
    pub fn output(&self) -> &DVector<f64> {
        self.activations.last().expect("input is always present")
    }
}

/// `dL/dβ` and `dL/d(bias coefficients)` for every layer.
#[derive(Debug, Clone, PartialEq)]
pub struct NetGradients {
    pub coeffs: Vec<Vec<f64>>,
    pub bias_coeffs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub samples: usize,
    pub max_violation: f64,
    /// `(g, sample)` of the largest violation.
    pub worst: Option<(usize, usize)>,
    pub tol: f64,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.max_violation <= self.tol
    }
}

impl EquivNet {
    /// Net through the interface representations `reps[0] -> reps[1] -> ...`.
    /// Hidden layers use `hidden`; the last layer uses `output`.
    pub fn new(reps: &[Representation], hidden: Nonlinearity, output: Nonlinearity) -> Result<Self, NetError> {
        if reps.len() < 2 {
            return Err(NetError::NoLayers);
        }
        let depth = reps.len() - 1;
        let layers = reps
            .windows(2)
            .enumerate()
            .map(|(l, pair)| {
                let sigma = if l + 1 == depth { output } else { hidden };
                EquivLayer::new(pair[0].clone(), pair[1].clone(), sigma).map_err(|e| e.at_layer(l))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EquivNet { layers })
    }

    /// Net whose hidden layers carry the regular representation tiled to each
    /// of `widths`.
    pub fn with_regular_hidden(
        rep_in: &Representation,
        rep_out: &Representation,
        widths: &[usize],
        hidden: Nonlinearity,
        output: Nonlinearity,
    ) -> Result<Self, NetError> {
        let group = rep_in.group();
        let mut reps = vec![rep_in.clone()];
        for &w in widths {
            reps.push(regular_of_width(group, w)?);
        }
        reps.push(rep_out.clone());
        Self::new(&reps, hidden, output)
    }

    pub fn layers(&self) -> &[EquivLayer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [EquivLayer] {
        &mut self.layers
    }

    pub fn rep_in(&self) -> &Representation {
        self.layers[0].rep_in()
    }

    pub fn rep_out(&self) -> &Representation {
        self.layers.last().expect("non-empty").rep_out()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.rep_in().group()
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(EquivLayer::num_params).sum()
    }

    /// Initializes every layer from one seeded stream, in layer order.
    pub fn init(&mut self, mode: InitMode, seed: u64) -> Result<(), NetError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (l, layer) in self.layers.iter_mut().enumerate() {
            layer.init(mode, &mut rng).map_err(|e| e.at_layer(l))?;
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Forward, NetError> {
        let n = self.rep_in().dim();
        if x.len() != n {
            return Err(NetError::DimMismatch { expected: n, got: x.len() });
        }
        let mut activations = vec![DVector::from_column_slice(x)];
        let mut pre_activations = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let z = layer.weight() * activations.last().expect("non-empty") + layer.bias();
            let s = layer.nonlinearity();
            activations.push(z.map(|v| s.apply(v)));
            pre_activations.push(z);
        }
        Ok(Forward { activations, pre_activations })
    }

    /// Outputs for a batch stored as columns.
    pub fn forward_batch(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>, NetError> {
        let n = self.rep_in().dim();
        if x.nrows() != n {
            return Err(NetError::DimMismatch { expected: n, got: x.nrows() });
        }
        let mut h = x.clone();
        for layer in &self.layers {
            h = layer.activate(&layer.pre_activation(&h));
        }
        Ok(h)
    }

    /// Backpropagates `dL/dy` through a forward pass. Weight gradients are
    /// contracted onto the shared coefficients orbit by orbit, never formed as
    /// full matrices.
    pub fn grad_coeffs(&self, fwd: &Forward, loss_grad_y: &[f64]) -> Result<NetGradients, NetError> {
        let m = self.rep_out().dim();
        if loss_grad_y.len() != m {
            return Err(NetError::DimMismatch { expected: m, got: loss_grad_y.len() });
        }
        let depth = self.layers.len();
        let mut coeffs = vec![Vec::new(); depth];
        let mut bias_coeffs = vec![Vec::new(); depth];
        let mut upstream = DVector::from_column_slice(loss_grad_y);
        for l in (0..depth).rev() {
            let layer = &self.layers[l];
            let s = layer.nonlinearity();
            let delta = upstream.zip_map(&fwd.pre_activations[l], |u, z| u * s.derivative(z));
            let x = &fwd.activations[l];
            let n = x.len();
            coeffs[l] = layer
                .basis()
                .orbits
                .iter()
                .map(|o| o.entries.iter().map(|&(idx, sg)| f64::from(sg) * delta[idx / n] * x[idx % n]).sum())
                .collect();
            bias_coeffs[l] = layer.bias_basis().contract(delta.as_slice());
            if l > 0 {
                upstream = layer.weight().tr_mul(&delta);
            }
        }
        Ok(NetGradients { coeffs, bias_coeffs })
    }

    /// Max over `samples` standard-normal inputs and all `g` of
    /// `‖ρ_out(g) f(x) − f(ρ_in(g) x)‖∞`.
    pub fn check_equivariance(&self, samples: usize, tol: f64, seed: u64) -> EquivarianceReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (rep_in, rep_out) = (self.rep_in(), self.rep_out());
        let n = rep_in.dim();
        let x = DMatrix::<f64>::from_fn(n, samples, |_, _| rng.sample(StandardNormal));
        let y = self.forward_batch(&x).expect("input dims match");
        let mut max_violation: f64 = 0.0;
        let mut worst = None;
        for g in self.group().elements() {
            let gx = permute_columns(rep_in, g, &x);
            let fgx = self.forward_batch(&gx).expect("input dims match");
            let gfx = permute_columns(rep_out, g, &y);
            for s in 0..samples {
                let v = (fgx.column(s) - gfx.column(s)).amax();
                if v > max_violation || worst.is_none() {
                    max_violation = max_violation.max(v);
                    worst = Some((g, s));
                }
            }
        }
        EquivarianceReport { samples, max_violation, worst, tol }
    }
}

/// `ρ(g)` applied to every column.
pub(crate) fn permute_columns(rep: &Representation, g: usize, x: &DMatrix<f64>) -> DMatrix<f64> {
    let p = rep.matrix(g);
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for i in 0..x.nrows() {
        let (t, s) = p.image(i);
        out.row_mut(t).copy_from(&(x.row(i) * f64::from(s)));
    }
    out
}

fn regular_of_width(group: &Arc<FiniteGroup>, width: usize) -> Result<Representation, NetError> {
    let order = group.order();
    if width == 0 || width % order != 0 {
        return Err(NetError::IncompatibleWidth { width, order });
    }
    Ok(Representation::regular_tiled(group.clone(), width / order))
}

/// Per-layer standard deviation of the pre-activations of a `depth`-layer,
/// `width`-wide net with regular hidden reps (input included), fed a
/// standard-normal batch. Every layer, including the last, applies `nonlinearity`.
pub fn activation_variance_profile(
    depth: usize,
    width: usize,
    group: &Arc<FiniteGroup>,
    nonlinearity: Nonlinearity,
    init: InitMode,
    batch: usize,
    seed: u64,
) -> Result<Vec<f64>, NetError> {
    if depth == 0 {
        return Err(NetError::NoLayers);
    }
    let rep = regular_of_width(group, width)?;
    let reps = vec![rep; depth + 1];
    let mut net = EquivNet::new(&reps, nonlinearity, nonlinearity)?;
    net.init(init, seed)?;
    // separate stream for the data so the weights do not depend on batch size
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_da7a);
    let mut h = DMatrix::<f64>::from_fn(width, batch, |_, _| rng.sample(StandardNormal));
    let mut stds = Vec::with_capacity(depth);
    for layer in net.layers() {
        let z = layer.pre_activation(&h);
        stds.push(std_dev(z.as_slice()));
        h = layer.activate(&z);
    }
    Ok(stds)
}

fn std_dev(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}
