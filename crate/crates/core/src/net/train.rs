use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{EquivNet, NetError};

/// Full-batch gradient descent on `½·mean ‖f(x) − t(x)‖²` against a teacher
/// net with the same interfaces. Returns the loss before every step and after
/// the last one.
pub fn fit_teacher(
    student: &mut EquivNet,
    teacher: &EquivNet,
    samples: usize,
    steps: usize,
    lr: f64,
    seed: u64,
) -> Result<Vec<f64>, NetError> {
    let n = student.rep_in().dim();
    if teacher.rep_in().dim() != n || teacher.rep_out().dim() != student.rep_out().dim() {
        return Err(NetError::DimMismatch { expected: n, got: teacher.rep_in().dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = DMatrix::<f64>::from_fn(n, samples, |_, _| rng.sample(StandardNormal));
    let t = teacher.forward_batch(&x)?;
    let scale = 1.0 / samples.max(1) as f64;
    let mut losses = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        let mut loss = 0.0;
        let mut grad_w: Vec<Vec<f64>> = student.layers().iter().map(|l| vec![0.0; l.coeffs().len()]).collect();
        let mut grad_b: Vec<Vec<f64>> = student.layers().iter().map(|l| vec![0.0; l.bias_coeffs().len()]).collect();
        for s in 0..samples {
            let fwd = student.forward(x.column(s).as_slice())?;
            let err: Vec<f64> = fwd.output().iter().zip(t.column(s).iter()).map(|(y, t)| y - t).collect();
            loss += 0.5 * scale * err.iter().map(|e| e * e).sum::<f64>();
            if step == steps {
                continue;
            }
            let g = student.grad_coeffs(&fwd, &err)?;
            for (acc, g) in grad_w.iter_mut().zip(&g.coeffs).chain(grad_b.iter_mut().zip(&g.bias_coeffs)) {
                acc.iter_mut().zip(g).for_each(|(a, v)| *a += scale * v);
            }
        }
        losses.push(loss);
        if step == steps {
            break;
        }
        for (l, layer) in student.layers_mut().iter_mut().enumerate() {
            let w = layer.coeffs().iter().zip(&grad_w[l]).map(|(c, g)| c - lr * g).collect();
            let b = layer.bias_coeffs().iter().zip(&grad_b[l]).map(|(c, g)| c - lr * g).collect();
            layer.set_coeffs(w, b).map_err(|e| e.at_layer(l))?;
        }
    }
    Ok(losses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_klein_four;
    use crate::net::{InitMode, Nonlinearity};

    #[test]
    fn loss_decreases_and_net_stays_equivariant() {
        let (_, rep) = make_klein_four(2);
        let build = |seed| {
            let mut net = EquivNet::with_regular_hidden(&rep, &rep, &[16], Nonlinearity::Tanh, Nonlinearity::Identity).unwrap();
            net.init(InitMode::FanIn, seed).unwrap();
            net
        };
        let teacher = build(1);
        let mut student = build(2);
        let losses = fit_teacher(&mut student, &teacher, 64, 50, 0.05, 3).unwrap();
        assert_eq!(losses.len(), 51);
        assert!(losses[50] < 0.5 * losses[0], "{losses:?}");
        assert!(student.check_equivariance(8, 1e-12, 0).passed());
    }
}
