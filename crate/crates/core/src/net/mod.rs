//! Equivariant multilayer perceptrons parameterized by basis coefficients.

mod file;
mod layer;
mod network;
mod nonlin;
mod train;

pub use file::{LayerWeights, NetSpec, NetWeights};
pub use layer::{init_coeffs, init_variance, EquivLayer, InitMode};
pub use network::{activation_variance_profile, EquivNet, EquivarianceReport, Forward, NetGradients};
pub use nonlin::{Nonlinearity, GAMMA_TANH};
pub use train::fit_teacher;

use thiserror::Error;

use crate::basis::BasisError;
use crate::group::GroupError;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("basis has no free coefficients (all orbits zero-forced)")]
    DegenerateBasis,
    #[error("width {width} is not a positive multiple of the group order {order}")]
    IncompatibleWidth { width: usize, order: usize },
    #[error("signed output representation needs an odd nonlinearity, got {0:?}")]
    SignedRepNeedsOddNonlinearity(Nonlinearity),
    #[error("a net needs at least one layer")]
    NoLayers,
    #[error("layer {layer}: {source}")]
    AtLayer {
        layer: usize,
        #[source]
        source: Box<NetError>,
    },
    #[error("layer {layer}: weights were saved against a different basis")]
    BasisHashMismatch { layer: usize },
    #[error("weights have {got} layers, net has {expected}")]
    LayerCountMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("parse error: {0}")]
    Parse(String),
}

impl NetError {
    pub(crate) fn at_layer(self, layer: usize) -> Self {
        match self {
            e @ NetError::AtLayer { .. } => e,
            e => NetError::AtLayer { layer, source: Box::new(e) },
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::group::{make_cyclic, make_klein_four};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn equivariant_for_any_seed(seed in any::<u64>(), which in 0usize..3, s in prop::sample::select(vec![Nonlinearity::Relu, Nonlinearity::Selu, Nonlinearity::Tanh])) {
            let (_, rep) = match which {
                0 => make_cyclic(2, 3),
                1 => make_cyclic(3, 2),
                _ => make_klein_four(2),
            };
            let order = rep.group().order();
            let mut net = EquivNet::with_regular_hidden(&rep, &rep, &[4 * order, 2 * order], s, Nonlinearity::Identity).unwrap();
            net.init(InitMode::FanIn, seed).unwrap();
            let report = net.check_equivariance(8, 1e-10, seed.wrapping_add(1));
            prop_assert!(report.passed(), "{:?}", report);
        }
    }
}
