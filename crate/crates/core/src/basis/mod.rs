//! Bases of `G`-equivariant linear maps between generalized-permutation
//! representations.

mod count;
mod file;
mod oracle;
mod orbit;
mod validate;

pub use count::burnside_rank;
pub use file::OracleFile;
pub use oracle::{compare_with_oracle, dense_nullspace_oracle, OracleComparison, DEFAULT_ORACLE_CAP, DEFAULT_ORACLE_TOL};
pub use orbit::{bias_basis, orbit_basis, EquivBasis, SignedOrbit};
pub use validate::{validate_basis, BasisReport, Violation};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("representations belong to different groups")]
    GroupMismatch,
    #[error("oracle needs m*n = {mn} <= {cap}")]
    CapExceeded { mn: usize, cap: usize },
    #[error("orbit count {sum}/{order} is not a non-negative integer; input is not a representation")]
    NonIntegralRank { sum: i64, order: usize },
    #[error("malformed basis: {0}")]
    MalformedOrbit(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::group::{close_jointly, GenPerm, Representation};
    use proptest::prelude::*;

    fn signed_perm(dim: usize, signed: bool) -> impl Strategy<Value = GenPerm> {
        (Just((0..dim).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(prop::bool::ANY, dim)).prop_map(
            move |(t, s)| GenPerm::new(t, s.into_iter().map(|b| if b || !signed { 1 } else { -1 }).collect()).unwrap(),
        )
    }

    /// Two reps of one jointly generated group of order <= 512, with `mn <= 36`.
    fn rep_pair() -> impl Strategy<Value = (Representation, Representation)> {
        (1usize..=6, 1usize..=6, 1usize..=2, prop::bool::ANY).prop_flat_map(|(n, m, k, signed)| {
            (proptest::collection::vec(signed_perm(n, signed), k), proptest::collection::vec(signed_perm(m, signed), k))
                .prop_filter_map("group too large", |(a, b)| {
                    let (_, reps) = close_jointly(&[a, b], 512).ok()?;
                    Some((reps[0].clone(), reps[1].clone()))
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn orbit_basis_agrees_with_oracle_and_count((rep_in, rep_out) in rep_pair()) {
            let basis = orbit_basis(&rep_in, &rep_out).unwrap();
            let q = dense_nullspace_oracle(&rep_in, &rep_out, DEFAULT_ORACLE_TOL, DEFAULT_ORACLE_CAP).unwrap();
            let cmp = compare_with_oracle(&basis, &q);
            prop_assert!(cmp.agrees(1e-10), "{:?}", cmp);
            prop_assert_eq!(burnside_rank(&rep_in, &rep_out).unwrap(), basis.rank());
            prop_assert!(validate_basis(&basis, &rep_in, &rep_out, 1e-12).passed());
        }

        #[test]
        fn rank_bounds((rep_in, rep_out) in rep_pair()) {
            let basis = orbit_basis(&rep_in, &rep_out).unwrap();
            let mn = basis.m * basis.n;
            prop_assert!(basis.rank() <= mn);
            if !rep_in.is_signed() && !rep_out.is_signed() {
                prop_assert!(basis.rank() * rep_in.group().order() >= mn);
                prop_assert!(basis.zero_forced.is_empty());
            }
        }
    }
}
