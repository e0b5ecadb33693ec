pub mod augment;
pub mod basis;
pub mod count;
pub mod net;
pub mod robot;

use std::path::Path;
use std::sync::Arc;

use dms_core::group::{close_jointly, FiniteGroup, Representation, DEFAULT_ORDER_CAP};

use crate::io::{read_rep, CliError};

/// Loads two representation files and closes them over one abstract group.
/// Generator `s` of one file is paired with generator `s` of the other.
pub fn load_rep_pair(rep_in: &Path, rep_out: &Path) -> Result<(Arc<FiniteGroup>, Representation, Representation), CliError> {
    let (a, b) = (read_rep(rep_in)?, read_rep(rep_out)?);
    if a.generators.len() != b.generators.len() {
        return Err(CliError::new(format!(
            "{} has {} generators but {} has {}; generators are paired by position",
            rep_in.display(),
            a.generators.len(),
            rep_out.display(),
            b.generators.len()
        )));
    }
    let (group, mut reps) = close_jointly(&[a.generators, b.generators], DEFAULT_ORDER_CAP)?;
    let out = reps.pop().expect("two reps");
    let inp = reps.pop().expect("two reps");
    Ok((group, inp, out))
}
