use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// A signed permutation matrix: exactly one entry in `{-1, +1}` per row and
/// per column.
///
/// Stored column-wise: input coordinate `i` lands on row `target[i]` scaled by
/// `sign[i]`, so `(M x)[target[i]] = sign[i] * x[i]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGenPerm", into = "RawGenPerm")]
pub struct GenPerm {
    target: Vec<usize>,
    sign: Vec<i8>,
}

#[derive(Serialize, Deserialize)]
struct RawGenPerm {
    target: Vec<usize>,
    sign: Vec<i64>,
}

impl TryFrom<RawGenPerm> for GenPerm {
    type Error = GroupError;

    fn try_from(raw: RawGenPerm) -> Result<Self, Self::Error> {
        let sign = raw
            .sign
            .iter()
            .enumerate()
            .map(|(i, &s)| match s {
                1 => Ok(1i8),
                -1 => Ok(-1i8),
                other => Err(GroupError::InvalidSign { index: i, value: other }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        GenPerm::new(raw.target, sign)
    }
}

impl From<GenPerm> for RawGenPerm {
    fn from(p: GenPerm) -> Self {
        RawGenPerm { target: p.target, sign: p.sign.into_iter().map(i64::from).collect() }
    }
}

impl GenPerm {
    pub fn new(target: Vec<usize>, sign: Vec<i8>) -> Result<Self, GroupError> {
        let dim = target.len();
        if dim == 0 {
            return Err(GroupError::EmptyDimension);
        }
        if sign.len() != dim {
            return Err(GroupError::DimMismatch { expected: dim, got: sign.len() });
        }
        if let Some((i, &s)) = sign.iter().enumerate().find(|(_, s)| **s != 1 && **s != -1) {
            return Err(GroupError::InvalidSign { index: i, value: i64::from(s) });
        }
        let mut seen = vec![false; dim];
        for &t in &target {
            if t >= dim || seen[t] {
                return Err(GroupError::NotAPermutation { dim, entry: t });
            }
            seen[t] = true;
        }
        Ok(GenPerm { target, sign })
    }

    /// Unsigned permutation.
    pub fn permutation(target: Vec<usize>) -> Result<Self, GroupError> {
        let sign = vec![1; target.len()];
        Self::new(target, sign)
    }

    pub fn identity(dim: usize) -> Self {
        GenPerm { target: (0..dim).collect(), sign: vec![1; dim] }
    }

    /// Diagonal `±1` matrix.
    pub fn diagonal(sign: Vec<i8>) -> Result<Self, GroupError> {
        Self::new((0..sign.len()).collect(), sign)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.target.len()
    }

    #[inline]
    pub fn target(&self) -> &[usize] {
        &self.target
    }

    #[inline]
    pub fn sign(&self) -> &[i8] {
        &self.sign
    }

    pub fn is_identity(&self) -> bool {
        self.target.iter().enumerate().all(|(i, &t)| t == i) && self.sign.iter().all(|&s| s == 1)
    }

    pub fn is_unsigned(&self) -> bool {
        self.sign.iter().all(|&s| s == 1)
    }

    /// Matrix product `self * rhs`.
    pub fn compose(&self, rhs: &GenPerm) -> GenPerm {
        assert_eq!(self.dim(), rhs.dim(), "composing generalized permutations of different size");
        let (target, sign) = rhs
            .target
            .iter()
            .zip(&rhs.sign)
            .map(|(&t, &s)| (self.target[t], self.sign[t] * s))
            .unzip();
        GenPerm { target, sign }
    }

    /// The inverse, which for a signed permutation is also the transpose.
    pub fn inverse(&self) -> GenPerm {
        let mut target = vec![0; self.dim()];
        let mut sign = vec![1; self.dim()];
        for (i, (&t, &s)) in self.target.iter().zip(&self.sign).enumerate() {
            target[t] = i;
            sign[t] = s;
        }
        GenPerm { target, sign }
    }

    pub fn transpose(&self) -> GenPerm {
        self.inverse()
    }

    /// Signed trace: the sum of the diagonal entries.
    pub fn trace(&self) -> i64 {
        self.target
            .iter()
            .zip(&self.sign)
            .enumerate()
            .filter(|(i, (t, _))| *i == **t)
            .map(|(_, (_, &s))| i64::from(s))
            .sum()
    }

    /// Kronecker product `self ⊗ rhs` under row-major indexing `a * rhs.dim() + b`.
    pub fn kron(&self, rhs: &GenPerm) -> GenPerm {
        let n = rhs.dim();
        let mut target = Vec::with_capacity(self.dim() * n);
        let mut sign = Vec::with_capacity(self.dim() * n);
        for (&ta, &sa) in self.target.iter().zip(&self.sign) {
            for (&tb, &sb) in rhs.target.iter().zip(&rhs.sign) {
                target.push(ta * n + tb);
                sign.push(sa * sb);
            }
        }
        GenPerm { target, sign }
    }

    /// Block-diagonal sum `self ⊕ rhs`.
    pub fn direct_sum(&self, rhs: &GenPerm) -> GenPerm {
        let off = self.dim();
        let target = self.target.iter().copied().chain(rhs.target.iter().map(|t| t + off)).collect();
        let sign = self.sign.iter().chain(&rhs.sign).copied().collect();
        GenPerm { target, sign }
    }

    /// Restriction to the coordinate block `[start, start + len)`, which must be
    /// mapped onto itself.
    pub fn block(&self, start: usize, len: usize) -> Option<GenPerm> {
        let range = start..start + len;
        let mut target = Vec::with_capacity(len);
        for &t in &self.target[range.clone()] {
            if !range.contains(&t) {
                return None;
            }
            target.push(t - start);
        }
        Some(GenPerm { target, sign: self.sign[range].to_vec() })
    }

    /// Applies the matrix to `x` in `O(dim)`.
    pub fn apply<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Copy + Default + std::ops::Neg<Output = T>,
    {
        assert_eq!(x.len(), self.dim());
        let mut out = vec![T::default(); x.len()];
        for ((&t, &s), &v) in self.target.iter().zip(&self.sign).zip(x) {
            out[t] = if s < 0 { -v } else { v };
        }
        out
    }

    /// Dense `dim × dim` integer matrix, row-major.
    pub fn to_dense(&self) -> Vec<Vec<i32>> {
        let mut m = vec![vec![0; self.dim()]; self.dim()];
        for (i, (&t, &s)) in self.target.iter().zip(&self.sign).enumerate() {
            m[t][i] = i32::from(s);
        }
        m
    }

    /// Image of input coordinate `i`: `(row, sign)`.
    #[inline]
    pub fn image(&self, i: usize) -> (usize, i8) {
        (self.target[i], self.sign[i])
    }
}

impl fmt::Debug for GenPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("GenPerm[")?;
        for (i, (t, s)) in self.target.iter().zip(&self.sign).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}->{}{t}", if *s < 0 { "-" } else { "" })?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(a: &[Vec<i32>], b: &[Vec<i32>]) -> Vec<Vec<i32>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    #[test]
    fn rejects_non_bijective_target() {
        assert!(matches!(
            GenPerm::permutation(vec![0, 0]),
            Err(GroupError::NotAPermutation { entry: 0, .. })
        ));
        assert!(matches!(GenPerm::permutation(vec![0, 2]), Err(GroupError::NotAPermutation { .. })));
        assert!(matches!(GenPerm::new(vec![0, 1], vec![1, 0]), Err(GroupError::InvalidSign { index: 1, .. })));
    }

    #[test]
    fn signed_swap_matches_dense_product() {
        let p = GenPerm::new(vec![1, 0], vec![1, -1]).unwrap();
        let dense = p.to_dense();
        let x = [5, 7];
        let expected: Vec<i32> = dense.iter().map(|row| row[0] * x[0] + row[1] * x[1]).collect();
        assert_eq!(expected, vec![-7, 5]);
        assert_eq!(p.apply(&x), expected);
    }

    #[test]
    fn compose_matches_dense_product() {
        let a = GenPerm::new(vec![2, 0, 1], vec![1, -1, 1]).unwrap();
        let b = GenPerm::new(vec![1, 2, 0], vec![-1, -1, 1]).unwrap();
        assert_eq!(a.compose(&b).to_dense(), dense_mul(&a.to_dense(), &b.to_dense()));
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn transpose_is_dense_transpose() {
        let a = GenPerm::new(vec![2, 0, 1], vec![1, -1, -1]).unwrap();
        let d = a.to_dense();
        let t = a.transpose().to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d[i][j], t[j][i]);
            }
        }
    }

    #[test]
    fn kron_matches_dense_kronecker() {
        let a = GenPerm::new(vec![1, 0], vec![-1, 1]).unwrap();
        let b = GenPerm::new(vec![2, 0, 1], vec![1, 1, -1]).unwrap();
        let (da, db) = (a.to_dense(), b.to_dense());
        let k = a.kron(&b).to_dense();
        for r in 0..6 {
            for c in 0..6 {
                assert_eq!(k[r][c], da[r / 3][c / 3] * db[r % 3][c % 3]);
            }
        }
    }

    #[test]
    fn trace_counts_signed_fixed_points() {
        assert_eq!(GenPerm::diagonal(vec![1, -1, -1]).unwrap().trace(), -1);
        assert_eq!(GenPerm::permutation(vec![1, 0, 2]).unwrap().trace(), 1);
    }

    #[test]
    fn block_restriction() {
        let p = GenPerm::permutation(vec![1, 0]).unwrap().direct_sum(&GenPerm::diagonal(vec![-1]).unwrap());
        assert_eq!(p.block(2, 1).unwrap(), GenPerm::diagonal(vec![-1]).unwrap());
        assert!(p.block(1, 2).is_none());
    }

    #[test]
    fn serde_validates() {
        let p: GenPerm = serde_json::from_str(r#"{"target":[1,0],"sign":[1,-1]}"#).unwrap();
        assert_eq!(p.sign(), &[1, -1]);
        assert!(serde_json::from_str::<GenPerm>(r#"{"target":[1,1],"sign":[1,1]}"#).is_err());
        assert!(serde_json::from_str::<GenPerm>(r#"{"target":[1,0],"sign":[2,1]}"#).is_err());
    }
}
