//! Central finite-difference check of the analytic gradients.

use ndarray::ArrayView2;

use super::network::Network;
use crate::error::Result;

/// Denominator floor for the relative error. Below it the comparison is
/// effectively absolute, since rounding in the difference quotient is of
/// order `eps * loss / h`.
pub const REL_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheck {
    /// Worst single-parameter relative error.
    pub max_rel_error: f64,
    /// Worst per-layer error `||a - n|| / max(||a||, ||n||)` over each layer's weights and biases.
    pub max_layer_rel_error: f64,
    pub max_abs_error: f64,
    pub checked: usize,
}

fn param_mut(net: &mut Network<f64>, layer: usize, k: usize) -> &mut f64 {
    let l = &mut net.layers_mut()[layer];
    let n_w = l.w.len();
    if k < n_w {
        &mut l.w.as_slice_mut().expect("standard layout")[k]
    } else {
        &mut l.b[k - n_w]
    }
}

/// Perturbs every parameter by `+-h` and compares the difference quotient with
/// the backpropagated gradient: `|a - n| / max(|a|, |n|, REL_FLOOR)`.
pub fn gradient_check(net: &Network<f64>, x: ArrayView2<f64>, y: ArrayView2<f64>, h: f64) -> Result<GradCheck> {
    let (_, grads) = net.backward(x, y)?;
    let mut probe = net.clone();
    let mut out = GradCheck {
        max_rel_error: 0.0,
        max_layer_rel_error: 0.0,
        max_abs_error: 0.0,
        checked: 0,
    };
    for (li, (gw, gb)) in grads.layers.iter().enumerate() {
        let (mut diff2, mut a2, mut n2) = (0.0, 0.0, 0.0);
        let analytic_all = gw.iter().chain(gb.iter()).copied();
        for (k, analytic) in analytic_all.enumerate() {
            let original = *param_mut(&mut probe, li, k);
            *param_mut(&mut probe, li, k) = original + h;
            let plus = probe.loss(x, y)?;
            *param_mut(&mut probe, li, k) = original - h;
            let minus = probe.loss(x, y)?;
            *param_mut(&mut probe, li, k) = original;
            let numeric = (plus - minus) / (2.0 * h);
            let abs = (analytic - numeric).abs();
            let rel = abs / analytic.abs().max(numeric.abs()).max(REL_FLOOR);
            out.max_abs_error = out.max_abs_error.max(abs);
            out.max_rel_error = out.max_rel_error.max(rel);
            out.checked += 1;
            diff2 += abs * abs;
            a2 += analytic * analytic;
            n2 += numeric * numeric;
        }
        let layer_rel = diff2.sqrt() / a2.sqrt().max(n2.sqrt()).max(REL_FLOOR);
        out.max_layer_rel_error = out.max_layer_rel_error.max(layer_rel);
    }
    Ok(out)
}
