use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{EquivNet, InitMode, NetError, Nonlinearity};
use crate::basis::EquivBasis;
use crate::group::{FiniteGroup, Representation};

fn identity() -> Nonlinearity {
    Nonlinearity::Identity
}

/// A net with regular-representation interfaces, as stored on disk.
///
/// `widths` lists every interface width from input to output; each must be a
/// multiple of the group order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetSpec {
    /// Built-in group name or path to a representation spec.
    pub group: String,
    pub widths: Vec<usize>,
    pub nonlinearity: Nonlinearity,
    #[serde(default = "identity")]
    pub output_nonlinearity: Nonlinearity,
    pub init: InitMode,
    pub seed: u64,
}

impl NetSpec {
    pub fn from_json(text: &str) -> Result<Self, NetError> {
        serde_json::from_str(text).map_err(|e| NetError::Parse(e.to_string()))
    }

    /// Builds and initializes the net over `group`.
    pub fn build(&self, group: &Arc<FiniteGroup>) -> Result<EquivNet, NetError> {
        let order = group.order();
        let reps = self
            .widths
            .iter()
            .map(|&width| {
                if width == 0 || width % order != 0 {
                    Err(NetError::IncompatibleWidth { width, order })
                } else {
                    Ok(Representation::regular_tiled(group.clone(), width / order))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut net = EquivNet::new(&reps, self.nonlinearity, self.output_nonlinearity)?;
        net.init(self.init, self.seed)?;
        Ok(net)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerWeights {
    /// Content hash of the orbit basis the coefficients refer to.
    pub basis_hash: String,
    pub coeffs: Vec<f64>,
    pub bias_coeffs: Vec<f64>,
    /// Basis stored alongside the coefficients. When present it replaces the
    /// computed basis on load and the hash is not checked against it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<EquivBasis>,
}

/// Trained coefficients of every layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetWeights {
    pub layers: Vec<LayerWeights>,
}

impl NetWeights {
    pub fn from_net(net: &EquivNet) -> Self {
        let layers = net
            .layers()
            .iter()
            .map(|l| LayerWeights {
                basis_hash: l.basis().content_hash(),
                coeffs: l.coeffs().to_vec(),
                bias_coeffs: l.bias_coeffs().to_vec(),
                basis: None,
            })
            .collect();
        NetWeights { layers }
    }

    /// Like [`NetWeights::from_net`] with each layer's basis embedded.
    pub fn with_bases(net: &EquivNet) -> Self {
        let mut w = Self::from_net(net);
        for (lw, l) in w.layers.iter_mut().zip(net.layers()) {
            lw.basis = Some(l.basis().clone());
        }
        w
    }

    pub fn from_json(text: &str) -> Result<Self, NetError> {
        serde_json::from_str(text).map_err(|e| NetError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("weights serialize")
    }

    /// Loads the coefficients into `net`. Layers without an embedded basis must
    /// match the net's computed basis hash.
    pub fn apply_to(&self, net: &mut EquivNet) -> Result<(), NetError> {
        if self.layers.len() != net.layers().len() {
            return Err(NetError::LayerCountMismatch { expected: net.layers().len(), got: self.layers.len() });
        }
        for (l, (w, layer)) in self.layers.iter().zip(net.layers_mut()).enumerate() {
            match &w.basis {
                Some(b) => layer.set_basis(b.clone()).map_err(|e| e.at_layer(l))?,
                None if w.basis_hash != layer.basis().content_hash() => {
                    return Err(NetError::BasisHashMismatch { layer: l })
                }
                None => {}
            }
            layer.set_coeffs(w.coeffs.clone(), w.bias_coeffs.clone()).map_err(|e| e.at_layer(l))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_group;

    #[test]
    fn spec_roundtrip_and_weights() {
        let spec = NetSpec::from_json(r#"{"group":"k4","widths":[8,16,4],"nonlinearity":"relu","init":"fan_in","seed":5}"#).unwrap();
        assert_eq!(spec.output_nonlinearity, Nonlinearity::Identity);
        let (g, _) = builtin_group(&spec.group).unwrap();
        let net = spec.build(&g).unwrap();
        let weights = NetWeights::from_net(&net);
        let mut fresh = NetSpec { seed: 6, ..spec.clone() }.build(&g).unwrap();
        assert_ne!(NetWeights::from_net(&fresh), weights);
        NetWeights::from_json(&weights.to_json()).unwrap().apply_to(&mut fresh).unwrap();
        assert_eq!(NetWeights::from_net(&fresh), weights);

        let constant = NetSpec::from_json(r#"{"group":"c2","widths":[2,2],"nonlinearity":"tanh","init":{"constant":{"std":0.05}},"seed":0}"#);
        assert_eq!(constant.unwrap().init, InitMode::Constant { std: 0.05 });
    }

    #[test]
    fn hash_mismatch_is_rejected() {
        let (g, _) = builtin_group("c2").unwrap();
        let spec = NetSpec {
            group: "c2".into(),
            widths: vec![2, 4],
            nonlinearity: Nonlinearity::Relu,
            output_nonlinearity: Nonlinearity::Identity,
            init: InitMode::FanIn,
            seed: 0,
        };
        let mut net = spec.build(&g).unwrap();
        let mut weights = NetWeights::from_net(&net);
        weights.layers[0].basis_hash = "00".into();
        assert!(matches!(weights.apply_to(&mut net), Err(NetError::BasisHashMismatch { layer: 0 })));
    }
}
