// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Occupation-number basis states with their ladder operators, plus dense Fock-space operators.
//!
//! A basis state `|n_1, .., n_J>` is stored as a bit mask: bit `k` holds the
//! occupation of the level at position `k`. The ladder operators carry the
//! sign `(-1)^s` where `s` counts the occupied levels strictly below the level
//! acted on.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};

/// Hard cap on the number of levels a state or vector may have.
pub const MAX_LEVELS: usize = 16;

/// Largest level count for which dense `2^J x 2^J` operators are built.
pub const DENSE_MAX_LEVELS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Position of a level in the energy-ordered level list (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelIndex(pub usize);

impl LevelIndex {
    pub fn position(self) -> usize {
        self.0
    }

    fn check(self, levels: usize) -> Result<()> {
        if self.0 < levels {
            Ok(())
        } else {
            Err(Error::LevelOutOfRange {
                level: self.0,
                levels,
            })
        }
    }
}

impl From<usize> for LevelIndex {
    fn from(p: usize) -> Self {
        LevelIndex(p)
    }
}

fn check_levels(levels: usize, max: usize) -> Result<()> {
    if levels == 0 || levels > max {
        Err(Error::TooManyLevels { levels, max })
    } else {
        Ok(())
    }
}

/// One basis vector of Fock space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockState {
    bits: u32,
    levels: usize,
}

impl FockState {
    /// The vacuum over `levels` levels.
    pub fn vacuum(levels: usize) -> Result<Self> {
        Self::from_index(0, levels)
    }

    pub fn from_index(index: usize, levels: usize) -> Result<Self> {
        check_levels(levels, MAX_LEVELS)?;
        if index >> levels != 0 {
            return Err(Error::DimensionMismatch {
                expected: 1 << levels,
                found: index,
            });
        }
        Ok(FockState {
            bits: index as u32,
            levels,
        })
    }

    /// Build from occupations listed in level order, `occ[k]` for position `k`.
    pub fn from_occupations(occ: &[bool]) -> Result<Self> {
        check_levels(occ.len(), MAX_LEVELS)?;
        let bits = occ
            .iter()
            .enumerate()
            .fold(0u32, |acc, (k, &o)| acc | ((o as u32) << k));
        Ok(FockState {
            bits,
            levels: occ.len(),
        })
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn is_occupied(&self, level: LevelIndex) -> bool {
        (self.bits >> level.0) & 1 == 1
    }

    pub fn occupations(&self) -> Vec<bool> {
        (0..self.levels).map(|k| (self.bits >> k) & 1 == 1).collect()
    }

    pub fn particle_count(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Number of occupied levels strictly below `level`.
    pub fn occupied_below(&self, level: LevelIndex) -> u32 {
        (self.bits & ((1u32 << level.0) - 1)).count_ones()
    }
}

/// Result of applying a ladder operator to a basis state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignedState {
    Vanished,
    Signed { state: FockState, sign: i8 },
}

impl SignedState {
    pub fn is_vanished(&self) -> bool {
        matches!(self, SignedState::Vanished)
    }

    pub fn state(&self) -> Option<FockState> {
        match self {
            SignedState::Vanished => None,
            SignedState::Signed { state, .. } => Some(*state),
        }
    }

    pub fn sign(&self) -> Option<i8> {
        match self {
            SignedState::Vanished => None,
            SignedState::Signed { sign, .. } => Some(*sign),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Create,
    Annihilate,
}

/// Apply `a_j` or `a_j^+` to a basis state.
pub fn apply_ladder(kind: LadderKind, level: LevelIndex, s: FockState) -> Result<SignedState> {
    level.check(s.levels)?;
    let occupied = s.is_occupied(level);
    let allowed = match kind {
        LadderKind::Annihilate => occupied,
        LadderKind::Create => !occupied,
    };
    if !allowed {
        return Ok(SignedState::Vanished);
    }
    let sign = if s.occupied_below(level).is_multiple_of(2) { 1 } else { -1 };
    Ok(SignedState::Signed {
        state: FockState {
            bits: s.bits ^ (1 << level.0),
            levels: s.levels,
        },
        sign,
    })
}

pub fn apply_annihilate(level: LevelIndex, s: FockState) -> Result<SignedState> {
    apply_ladder(LadderKind::Annihilate, level, s)
}

pub fn apply_create(level: LevelIndex, s: FockState) -> Result<SignedState> {
    apply_ladder(LadderKind::Create, level, s)
}

/// Apply a word of ladder operators to a basis state. The word is applied
/// right to left, as it would be written: `[(Create, l), (Annihilate, n)]` is `a_l^+ a_n`.
pub fn apply_word(word: &[(LadderKind, LevelIndex)], s: FockState) -> Result<SignedState> {
    let mut state = s;
    let mut sign = 1i8;
    for &(kind, level) in word.iter().rev() {
        match apply_ladder(kind, level, state)? {
            SignedState::Vanished => return Ok(SignedState::Vanished),
            SignedState::Signed { state: next, sign: s } => {
                state = next;
                sign *= s;
            }
        }
    }
    Ok(SignedState::Signed { state, sign })
}

/// Complex amplitude vector over all `2^J` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amplitudes: DVector<Complex64>,
    levels: usize,
}

impl FockVector {
    pub fn zeros(levels: usize) -> Result<Self> {
        check_levels(levels, MAX_LEVELS)?;
        Ok(FockVector {
            amplitudes: DVector::zeros(1 << levels),
            levels,
        })
    }

    pub fn basis(state: FockState) -> Self {
        let mut amplitudes = DVector::zeros(1 << state.levels);
        amplitudes[state.index()] = ONE;
        FockVector {
            amplitudes,
            levels: state.levels,
        }
    }

    pub fn from_amplitudes(levels: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_levels(levels, MAX_LEVELS)?;
        if amplitudes.len() != 1 << levels {
            return Err(Error::DimensionMismatch {
                expected: 1 << levels,
                found: amplitudes.len(),
            });
        }
        Ok(FockVector {
            amplitudes: DVector::from_vec(amplitudes),
            levels,
        })
    }

    pub(crate) fn from_dvector(levels: usize, amplitudes: DVector<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << levels);
        FockVector { amplitudes, levels }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, state: FockState) -> Complex64 {
        self.amplitudes[state.index()]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        if self.levels != other.levels {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Apply a ladder operator straight from the basis action, without a dense
    /// matrix. Works up to [`MAX_LEVELS`].
    pub fn apply_ladder(&self, kind: LadderKind, level: LevelIndex) -> Result<FockVector> {
        level.check(self.levels)?;
        let mut out = DVector::zeros(self.dim());
        for (index, &amp) in self.amplitudes.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            let s = FockState {
                bits: index as u32,
                levels: self.levels,
            };
            if let SignedState::Signed { state, sign } = apply_ladder(kind, level, s)? {
                out[state.index()] += amp * f64::from(sign);
            }
        }
        Ok(FockVector::from_dvector(self.levels, out))
    }
}

/// Dense operator on the `2^J`-dimensional space over `J` binary modes.
///
/// Qubit-register operators reuse this type with `levels` equal to the qubit count.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    matrix: DMatrix<Complex64>,
    levels: usize,
}

impl Operator {
    pub fn zeros(levels: usize) -> Result<Self> {
        check_levels(levels, DENSE_MAX_LEVELS)?;
        let dim = 1 << levels;
        Ok(Operator {
            matrix: DMatrix::zeros(dim, dim),
            levels,
        })
    }

    pub fn identity(levels: usize) -> Result<Self> {
        check_levels(levels, DENSE_MAX_LEVELS)?;
        let dim = 1 << levels;
        Ok(Operator {
            matrix: DMatrix::identity(dim, dim),
            levels,
        })
    }

    pub fn from_matrix(levels: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_levels(levels, DENSE_MAX_LEVELS)?;
        let dim = 1 << levels;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Operator { matrix, levels })
    }

    /// Build column by column: `fill(col, column)` writes the image of basis state `col`.
    pub fn from_columns<F>(levels: usize, mode: ExecMode, fill: F) -> Result<Self>
    where
        F: Fn(usize, &mut [Complex64]) + Sync + Send,
    {
        let mut op = Operator::zeros(levels)?;
        let dim = op.dim();
        exec::for_each_chunk_mut(mode, op.matrix.as_mut_slice(), dim, fill);
        Ok(op)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            matrix: self.matrix.adjoint(),
            levels: self.levels,
        }
    }

    fn check_same(&self, other: &Operator) -> Result<()> {
        if self.levels != other.levels {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_same(other)?;
        Ok(Operator {
            matrix: &self.matrix + &other.matrix,
            levels: self.levels,
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check_same(other)?;
        Ok(Operator {
            matrix: &self.matrix - &other.matrix,
            levels: self.levels,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            matrix: &self.matrix * factor,
            levels: self.levels,
        }
    }

    /// `self * other`.
    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        self.mul_with(other, ExecMode::default())
    }

    pub fn mul_with(&self, other: &Operator, mode: ExecMode) -> Result<Operator> {
        self.check_same(other)?;
        let dim = self.dim();
        if mode == ExecMode::Sequential || dim < exec::PAR_THRESHOLD {
            return Ok(Operator {
                matrix: &self.matrix * &other.matrix,
                levels: self.levels,
            });
        }
        let mut out = DMatrix::zeros(dim, dim);
        exec::for_each_chunk_mut(mode, out.as_mut_slice(), dim, |k, col| {
            let c = &self.matrix * other.matrix.column(k);
            col.copy_from_slice(c.as_slice());
        });
        Ok(Operator {
            matrix: out,
            levels: self.levels,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// `||H - H^+||_F`.
    pub fn hermitian_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    /// `||U^+ U - I||_F`.
    pub fn unitary_residual(&self) -> f64 {
        let dim = self.dim();
        (self.matrix.adjoint() * &self.matrix - DMatrix::<Complex64>::identity(dim, dim)).norm()
    }

    pub fn is_diagonal(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|c| (0..dim).all(|r| r == c || self.matrix[(r, c)] == ZERO))
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.apply_with(v, ExecMode::default())
    }

    /// Matrix-vector product; the parallel mode splits the output into row blocks.
    pub fn apply_with(&self, v: &FockVector, mode: ExecMode) -> Result<FockVector> {
        if v.levels != self.levels {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        let dim = self.dim();
        if mode == ExecMode::Sequential || dim < exec::PAR_THRESHOLD {
            return Ok(FockVector::from_dvector(self.levels, &self.matrix * &v.amplitudes));
        }
        const BLOCK: usize = 32;
        let mut out = DVector::zeros(dim);
        exec::for_each_chunk_mut(mode, out.as_mut_slice(), BLOCK, |b, chunk| {
            let rows = self.matrix.rows(b * BLOCK, chunk.len());
            let part = rows * &v.amplitudes;
            chunk.copy_from_slice(part.as_slice());
        });
        Ok(FockVector::from_dvector(self.levels, out))
    }
}

/// Matrix-vector product `op * v`.
pub fn apply_operator(op: &Operator, v: &FockVector) -> Result<FockVector> {
    op.apply(v)
}

/// Dense matrix of `a_j` or `a_j^+` over `levels` levels.
pub fn ladder_matrix(kind: LadderKind, level: LevelIndex, levels: usize) -> Result<Operator> {
    ladder_matrix_with(kind, level, levels, ExecMode::default())
}

pub fn ladder_matrix_with(
    kind: LadderKind,
    level: LevelIndex,
    levels: usize,
    mode: ExecMode,
) -> Result<Operator> {
    check_levels(levels, DENSE_MAX_LEVELS)?;
    level.check(levels)?;
    Operator::from_columns(levels, mode, |col, column| {
        let s = FockState {
            bits: col as u32,
            levels,
        };
        if let Ok(SignedState::Signed { state, sign }) = apply_ladder(kind, level, s) {
            column[state.index()] = Complex64::new(f64::from(sign), 0.0);
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(occ: &[u8]) -> FockState {
        FockState::from_occupations(&occ.iter().map(|&b| b == 1).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn annihilate_examples() {
        assert_eq!(
            apply_annihilate(LevelIndex(0), st(&[1, 0])).unwrap(),
            SignedState::Signed {
                state: st(&[0, 0]),
                sign: 1
            }
        );
        assert_eq!(
            apply_annihilate(LevelIndex(1), st(&[1, 1])).unwrap(),
            SignedState::Signed {
                state: st(&[1, 0]),
                sign: -1
            }
        );
        assert!(apply_annihilate(LevelIndex(0), st(&[0, 1])).unwrap().is_vanished());
    }

    #[test]
    fn create_examples() {
        assert_eq!(
            apply_create(LevelIndex(0), st(&[0, 0])).unwrap(),
            SignedState::Signed {
                state: st(&[1, 0]),
                sign: 1
            }
        );
        assert_eq!(
            apply_create(LevelIndex(1), st(&[1, 0])).unwrap(),
            SignedState::Signed {
                state: st(&[1, 1]),
                sign: -1
            }
        );
        assert!(apply_create(LevelIndex(1), st(&[0, 1])).unwrap().is_vanished());
    }

    #[test]
    fn out_of_range_level() {
        assert!(matches!(
            apply_create(LevelIndex(2), st(&[0, 1])),
            Err(Error::LevelOutOfRange { level: 2, levels: 2 })
        ));
        assert!(ladder_matrix(LadderKind::Annihilate, LevelIndex(3), 3).is_err());
    }

    #[test]
    fn level_cap() {
        assert!(matches!(
            ladder_matrix(LadderKind::Create, LevelIndex(0), DENSE_MAX_LEVELS + 1),
            Err(Error::TooManyLevels { .. })
        ));
        assert!(FockState::vacuum(MAX_LEVELS).is_ok());
        assert!(FockState::vacuum(MAX_LEVELS + 1).is_err());
        assert!(FockState::from_index(4, 2).is_err());
    }

    #[test]
    fn ladder_matrix_examples() {
        let a = ladder_matrix(LadderKind::Annihilate, LevelIndex(0), 1).unwrap();
        assert_eq!(a.entry(0, 1), ONE);
        assert_eq!(a.matrix().iter().filter(|z| **z != ZERO).count(), 1);

        // |n1 n2> has index n1 + 2 n2
        let a2 = ladder_matrix(LadderKind::Annihilate, LevelIndex(1), 2).unwrap();
        assert_eq!(a2.entry(0b01, 0b11), -ONE);
        assert_eq!(a2.entry(0b00, 0b10), ONE);
        assert_eq!(a2.matrix().iter().filter(|z| **z != ZERO).count(), 2);
    }

    #[test]
    fn ladder_squares_vanish() {
        for levels in 1..=4 {
            for j in 0..levels {
                for kind in [LadderKind::Create, LadderKind::Annihilate] {
                    let a = ladder_matrix(kind, LevelIndex(j), levels).unwrap();
                    assert_eq!(a.mul(&a).unwrap().frobenius_norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn apply_operator_examples() {
        let v = FockVector::from_amplitudes(2, vec![ONE, ONE * 2.0, ONE * 3.0, ONE * 4.0]).unwrap();
        let id = Operator::identity(2).unwrap();
        assert_eq!(apply_operator(&id, &v).unwrap(), v);

        let a = ladder_matrix(LadderKind::Annihilate, LevelIndex(0), 1).unwrap();
        let one = FockVector::basis(st(&[1]));
        assert_eq!(apply_operator(&a, &one).unwrap(), FockVector::basis(st(&[0])));

        let ad = ladder_matrix(LadderKind::Create, LevelIndex(0), 1).unwrap();
        let number = ad.mul(&a).unwrap();
        let l0 = Complex64::new(0.3, -0.1);
        let l1 = Complex64::new(-0.7, 0.2);
        let psi = FockVector::from_amplitudes(1, vec![l0, l1]).unwrap();
        let out = apply_operator(&number, &psi).unwrap();
        assert_eq!(out.amplitudes().as_slice(), &[ZERO, l1]);

        let wrong = FockVector::zeros(3).unwrap();
        assert!(apply_operator(&id, &wrong).is_err());
    }

    #[test]
    fn annihilate_after_create_is_positive() {
        for index in 0..32 {
            let s = FockState::from_index(index, 5).unwrap();
            for j in (0..5).map(LevelIndex) {
                if s.is_occupied(j) {
                    continue;
                }
                let created = apply_create(j, s).unwrap();
                let back = apply_annihilate(j, created.state().unwrap()).unwrap();
                assert_eq!(back.state(), Some(s));
                assert_eq!(created.sign().unwrap() * back.sign().unwrap(), 1);
            }
        }
    }

    #[test]
    fn sparse_path_matches_dense() {
        let amps: Vec<Complex64> = (0..16)
            .map(|k| Complex64::new(k as f64 * 0.1, 1.0 - k as f64 * 0.05))
            .collect();
        let v = FockVector::from_amplitudes(4, amps).unwrap();
        for kind in [LadderKind::Create, LadderKind::Annihilate] {
            for j in 0..4 {
                let dense = ladder_matrix(kind, LevelIndex(j), 4).unwrap().apply(&v).unwrap();
                let sparse = v.apply_ladder(kind, LevelIndex(j)).unwrap();
                assert_eq!(dense, sparse);
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let a = ladder_matrix_with(LadderKind::Create, LevelIndex(3), 8, ExecMode::Parallel).unwrap();
        let b = ladder_matrix_with(LadderKind::Create, LevelIndex(3), 8, ExecMode::Sequential).unwrap();
        assert_eq!(a, b);
        let amps: Vec<Complex64> = (0..256).map(|k| Complex64::new((k % 7) as f64, (k % 3) as f64)).collect();
        let v = FockVector::from_amplitudes(8, amps).unwrap();
        let m = a.add(&a.adjoint()).unwrap();
        assert_eq!(
            m.apply_with(&v, ExecMode::Parallel).unwrap(),
            m.apply_with(&v, ExecMode::Sequential).unwrap()
        );
        let p = m.mul_with(&a, ExecMode::Parallel).unwrap();
        let s = m.mul_with(&a, ExecMode::Sequential).unwrap();
        assert!(p.sub(&s).unwrap().frobenius_norm() < 1e-12);
    }
}
