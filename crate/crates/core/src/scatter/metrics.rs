use super::medium::{Medium, Operator};
use super::pattern::SpecklePattern;
use crate::error::{Error, Result};
use crate::numerics::{stats, RealGrid};
use crate::scalar::Real;

/// Slab thickness in units of the scattering mean free path.
pub fn optical_depth(thickness_mm: f64, ls_um: f64) -> Result<f64> {
    if !(ls_um > 0.0) {
        return Err(Error::Domain(format!("mean free path must be > 0, got {ls_um}")));
    }
    if !(thickness_mm >= 0.0) {
        return Err(Error::Domain(format!("thickness must be >= 0, got {thickness_mm}")));
    }
    Ok(thickness_mm * 1000.0 / ls_um)
}

/// `std(I) / mean(I)`; unity for fully developed speckle.
pub fn speckle_contrast<T: Real>(pattern: &SpecklePattern<T>) -> Result<f64> {
    let xs = pattern.grid().as_slice();
    if xs.len() < 2 {
        return Err(Error::Domain("speckle contrast needs at least two pixels".into()));
    }
    let mean = stats::mean(xs);
    if mean == 0.0 {
        return Err(Error::Domain("speckle contrast of a zero-mean pattern".into()));
    }
    Ok(stats::std_dev(xs) / mean)
}

/// Memory-effect probe: correlation between the speckle of a shifted object
/// and the (shift-compensated, thin regime) speckle of the original object.
///
/// The shift is circular on the grid the medium acts on: the object grid for
/// the thick regime, the speckle grid (after embedding) for the thin regime.
pub fn shift_correlation<T: Real>(medium: &Medium<T>, object: &RealGrid<T>, dx: isize, dy: isize) -> Result<f64> {
    medium.check_object(object)?;
    let spec = medium.spec();
    let limit = match medium.operator() {
        Operator::Thick(_) => spec.object_side,
        Operator::Thin(_) => spec.speckle_side,
    } as isize;
    if dx.abs() >= limit || dy.abs() >= limit {
        return Err(Error::Domain(format!(
            "shift ({dx}, {dy}) outside a {limit}-pixel grid"
        )));
    }
    let (a, b) = match medium.operator() {
        Operator::Thick(_) => {
            let shifted = medium.intensity(&object.roll(dy, dx))?;
            let reference = medium.intensity(object)?;
            (shifted.into_grid(), reference.into_grid())
        }
        Operator::Thin(_) => {
            let side = spec.speckle_side;
            let embedded = object.embed(side, side)?;
            let shifted = medium.thin_intensity(&embedded.roll(dy, dx))?;
            let reference = medium.thin_intensity(&embedded)?.into_grid().roll(dy, dx);
            (shifted.into_grid(), reference)
        }
    };
    stats::pearson(a.as_slice(), b.as_slice())
        .map_err(|_| Error::Domain("shift correlation of a constant pattern".into()))
}
