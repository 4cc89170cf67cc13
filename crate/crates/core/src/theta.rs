// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dual-rail embedding of an `n`-qubit register into Fock space over `2n` levels.
//!
//! Qubit `q` lives on pair `j = q + 1`: the `j`-th level below the Fermi bound
//! (position `n - j`) and the `j`-th level above it (position `n + j - 1`).
//! `|0>` means the lower level holds the particle, `|1>` the upper one. The
//! span of such states is the subspace `F`; every state in it carries exactly
//! `n` particles.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{apply_word, FockState, FockVector, LadderKind, LevelIndex, Operator, SignedState};

/// Largest supported qubit count (`2n` levels must fit [`crate::MAX_LEVELS`]).
pub const MAX_QUBITS: usize = 8;

/// Level pairing and the induced isometry from qubit space into `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EncodingFile", into = "EncodingFile")]
pub struct ThetaEncoding {
    pairs: Vec<(LevelIndex, LevelIndex)>,
    // fock_index of every qubit basis state, indexed by the qubit basis index
    basis_map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EncodingFile {
    pairs: Vec<(usize, usize)>,
}

impl TryFrom<EncodingFile> for ThetaEncoding {
    type Error = Error;
    fn try_from(f: EncodingFile) -> Result<Self> {
        ThetaEncoding::with_pairing(f.pairs)
    }
}

impl From<ThetaEncoding> for EncodingFile {
    fn from(e: ThetaEncoding) -> Self {
        EncodingFile {
            pairs: e.pairs.iter().map(|(l, u)| (l.0, u.0)).collect(),
        }
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::QubitCount { n, max: MAX_QUBITS })
    } else {
        Ok(())
    }
}

impl ThetaEncoding {
    /// Canonical pairing: `j`-th level below the Fermi bound with the `j`-th above.
    pub fn canonical(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Self::with_pairing((0..n).map(|q| (n - 1 - q, n + q)).collect())
    }

    /// Arbitrary perfect matching of the `2n` levels; entry `q` is `(lower, upper)` for qubit `q`.
    pub fn with_pairing(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = pairs.len();
        check_qubits(n)?;
        let mut seen = vec![false; 2 * n];
        for &(l, u) in &pairs {
            for p in [l, u] {
                if p >= 2 * n {
                    return Err(Error::InvalidPairing(format!(
                        "level {p} outside 0..{} for {n} pairs",
                        2 * n
                    )));
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::InvalidPairing(format!("level {p} used twice")));
                }
            }
        }
        let pairs: Vec<_> = pairs
            .into_iter()
            .map(|(l, u)| (LevelIndex(l), LevelIndex(u)))
            .collect();
        let basis_map = (0..1usize << n)
            .map(|x| {
                pairs.iter().enumerate().fold(0usize, |acc, (q, (l, u))| {
                    let level = if (x >> q) & 1 == 1 { u } else { l };
                    acc | (1 << level.0)
                })
            })
            .collect();
        Ok(ThetaEncoding { pairs, basis_map })
    }

    pub fn qubits(&self) -> usize {
        self.pairs.len()
    }

    pub fn levels(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Position of the Fermi bound: levels below it have positions `< fermi_position`.
    pub fn fermi_position(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(LevelIndex, LevelIndex)] {
        &self.pairs
    }

    pub fn pair(&self, qubit: usize) -> Result<(LevelIndex, LevelIndex)> {
        self.pairs.get(qubit).copied().ok_or(Error::InvalidCircuit(format!(
            "qubit {qubit} out of range for {} qubits",
            self.qubits()
        )))
    }

    /// Fock basis index of `theta(|x>)`.
    pub fn fock_index(&self, x: usize) -> usize {
        self.basis_map[x]
    }

    pub fn subspace(&self) -> SubspaceF {
        SubspaceF {
            encoding: self.clone(),
        }
    }
}

/// Canonical encoding of `n` qubits over `2n` levels.
pub fn make_encoding(n: usize) -> Result<ThetaEncoding> {
    ThetaEncoding::canonical(n)
}

/// The span of `theta`'s image inside Fock space.
#[derive(Clone, Debug)]
pub struct SubspaceF {
    encoding: ThetaEncoding,
}

impl SubspaceF {
    pub fn encoding(&self) -> &ThetaEncoding {
        &self.encoding
    }

    /// Fock basis indices spanning `F`, in qubit basis order.
    pub fn basis_map(&self) -> &[usize] {
        &self.encoding.basis_map
    }

    pub fn dim(&self) -> usize {
        self.encoding.basis_map.len()
    }

    pub fn contains_basis(&self, fock_index: usize) -> bool {
        self.encoding.pairs.iter().all(|(l, u)| {
            ((fock_index >> l.0) & 1) + ((fock_index >> u.0) & 1) == 1
        })
    }
}

/// Amplitudes over the `2^n` qubit basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitVector {
    amplitudes: DVector<Complex64>,
    qubits: usize,
}

impl QubitVector {
    pub fn basis(x: usize, qubits: usize) -> Result<Self> {
        check_qubits(qubits)?;
        if x >> qubits != 0 {
            return Err(Error::DimensionMismatch {
                expected: 1 << qubits,
                found: x,
            });
        }
        let mut amplitudes = DVector::zeros(1 << qubits);
        amplitudes[x] = Complex64::new(1.0, 0.0);
        Ok(QubitVector { amplitudes, qubits })
    }

    pub fn from_amplitudes(qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubits(qubits)?;
        if amplitudes.len() != 1 << qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << qubits,
                found: amplitudes.len(),
            });
        }
        Ok(QubitVector {
            amplitudes: DVector::from_vec(amplitudes),
            qubits,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn inner(&self, other: &QubitVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn apply(&self, op: &Operator) -> Result<QubitVector> {
        if op.levels() != self.qubits {
            return Err(Error::DimensionMismatch {
                expected: op.dim(),
                found: self.amplitudes.len(),
            });
        }
        Ok(QubitVector {
            amplitudes: op.matrix() * &self.amplitudes,
            qubits: self.qubits,
        })
    }
}

/// `theta(v)`.
pub fn encode(v: &QubitVector, enc: &ThetaEncoding) -> Result<FockVector> {
    if v.qubits != enc.qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << enc.qubits(),
            found: v.amplitudes.len(),
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << enc.levels()];
    for (x, &a) in v.amplitudes.iter().enumerate() {
        amps[enc.fock_index(x)] = a;
    }
    FockVector::from_amplitudes(enc.levels(), amps)
}

/// Preimage of the `F` component of a Fock vector, with the leaked weight.
#[derive(Clone, Debug)]
pub struct Decoded {
    /// Normalized projection onto `F`, pulled back to qubit space.
    pub qubits: QubitVector,
    /// `||(I - P_F) w||^2 / ||w||^2`.
    pub leakage: f64,
}

/// Leakage at or above this is treated as "entirely outside F".
pub const OUTSIDE_F_LEAKAGE: f64 = 1.0 - 1e-14;

pub fn decode(w: &FockVector, enc: &ThetaEncoding) -> Result<Decoded> {
    if w.levels() != enc.levels() {
        return Err(Error::DimensionMismatch {
            expected: 1 << enc.levels(),
            found: w.dim(),
        });
    }
    let total = w.amplitudes().norm_squared();
    let projected: Vec<Complex64> = enc.basis_map.iter().map(|&f| w.amplitudes()[f]).collect();
    let inside: f64 = projected.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return Err(Error::OutsideSubspace);
    }
    // summed directly, not as total - inside, so small leakage keeps its precision
    let f = enc.subspace();
    let outside: f64 = w
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(k, _)| !f.contains_basis(*k))
        .map(|(_, z)| z.norm_sqr())
        .sum();
    let leakage = (outside / total).clamp(0.0, 1.0);
    if leakage >= OUTSIDE_F_LEAKAGE || inside == 0.0 {
        return Err(Error::OutsideSubspace);
    }
    let scale = 1.0 / inside.sqrt();
    let qubits = QubitVector::from_amplitudes(
        enc.qubits(),
        projected.into_iter().map(|z| z * scale).collect(),
    )?;
    Ok(Decoded { qubits, leakage })
}

/// Orthogonal projector onto `F`.
pub fn projector_f(enc: &ThetaEncoding) -> Result<Operator> {
    let mut p = Operator::zeros(enc.levels())?.into_matrix();
    for &f in &enc.basis_map {
        p[(f, f)] = Complex64::new(1.0, 0.0);
    }
    Operator::from_matrix(enc.levels(), p)
}

/// Sign with which the hop `a_lower^+ a_upper` (or its adjoint) acts on each
/// `F` basis state, in qubit basis order.
pub fn tunneling_signs(qubit: usize, enc: &ThetaEncoding) -> Result<Vec<i8>> {
    let (lower, upper) = enc.pair(qubit)?;
    let down = [(LadderKind::Create, lower), (LadderKind::Annihilate, upper)];
    let up = [(LadderKind::Create, upper), (LadderKind::Annihilate, lower)];
    (0..1usize << enc.qubits())
        .map(|x| {
            let s = FockState::from_index(enc.fock_index(x), enc.levels())?;
            let word: &[_] = if (x >> qubit) & 1 == 1 { &down } else { &up };
            match apply_word(word, s)? {
                SignedState::Signed { sign, .. } => Ok(sign),
                SignedState::Vanished => unreachable!("F state has exactly one particle per pair"),
            }
        })
        .collect()
}

/// The common sign of the within-pair hop on `F`. Fails if the sign depends on
/// the state, which happens for pairings whose pairs cross.
pub fn tunneling_sign(qubit: usize, enc: &ThetaEncoding) -> Result<i8> {
    let signs = tunneling_signs(qubit, enc)?;
    let first = signs[0];
    if signs.iter().all(|&s| s == first) {
        Ok(first)
    } else {
        Err(Error::StateDependentSign { pair: qubit })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn canonical_layout() {
        let e = make_encoding(1).unwrap();
        assert_eq!(e.pairs(), &[(LevelIndex(0), LevelIndex(1))]);
        assert_eq!(e.levels(), 2);

        let e = make_encoding(2).unwrap();
        // order (2, 1, 1', 2')
        assert_eq!(
            e.pairs(),
            &[(LevelIndex(1), LevelIndex(2)), (LevelIndex(0), LevelIndex(3))]
        );
        assert_eq!(e.fermi_position(), 2);

        assert!(make_encoding(0).is_err());
        assert!(make_encoding(9).is_err());
        assert_eq!(make_encoding(8).unwrap().levels(), 16);
    }

    #[test]
    fn encode_examples() {
        let e = make_encoding(1).unwrap();
        let zero = encode(&QubitVector::basis(0, 1).unwrap(), &e).unwrap();
        // level 1 (position 0) occupied
        assert_eq!(zero.amplitudes()[0b01], c(1.0));

        let plus = QubitVector::from_amplitudes(1, vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let w = encode(&plus, &e).unwrap();
        assert_eq!(w.amplitudes()[0b01], c(FRAC_1_SQRT_2));
        assert_eq!(w.amplitudes()[0b10], c(FRAC_1_SQRT_2));

        // |010>: xi_1 = 0, xi_2 = 1, xi_3 = 0 -> qubit index 0b010
        let e3 = make_encoding(3).unwrap();
        let w = encode(&QubitVector::basis(0b010, 3).unwrap(), &e3).unwrap();
        let idx = (0..64).find(|&k| w.amplitudes()[k] != c(0.0)).unwrap();
        let occ = FockState::from_index(idx, 6).unwrap().occupations();
        // positions: 0:3 1:2 2:1 3:1' 4:2' 5:3'
        assert_eq!(occ, vec![true, false, true, false, true, false]);
    }

    #[test]
    fn decode_round_trip_and_leakage() {
        let e = make_encoding(2).unwrap();
        let v = QubitVector::from_amplitudes(2, vec![c(0.5), Complex64::new(0.0, 0.5), c(-0.5), c(0.5)]).unwrap();
        let d = decode(&encode(&v, &e).unwrap(), &e).unwrap();
        assert_eq!(d.leakage, 0.0);
        assert!((d.qubits.amplitudes() - v.amplitudes()).norm() < 1e-15);

        // both levels of qubit 0's pair occupied: 0b0110
        let outside = FockVector::basis(FockState::from_index(0b0110, 4).unwrap());
        assert!(matches!(decode(&outside, &e), Err(Error::OutsideSubspace)));

        let inside = encode(&v, &e).unwrap();
        let mixed: Vec<Complex64> = (0..16)
            .map(|k| inside.amplitudes()[k] * 0.8f64.sqrt() + outside.amplitudes()[k] * 0.2f64.sqrt())
            .collect();
        let d = decode(&FockVector::from_amplitudes(4, mixed).unwrap(), &e).unwrap();
        assert!((d.leakage - 0.2).abs() < 1e-15);
        assert!((d.qubits.amplitudes() - v.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn projector_properties() {
        let e = make_encoding(1).unwrap();
        let p = projector_f(&e).unwrap();
        assert_eq!(p.entry(0b01, 0b01), c(1.0));
        assert_eq!(p.entry(0b10, 0b10), c(1.0));
        assert_eq!(p.entry(0b00, 0b00), c(0.0));
        assert_eq!(p.entry(0b11, 0b11), c(0.0));

        let e = make_encoding(3).unwrap();
        let p = projector_f(&e).unwrap();
        assert_eq!(p.matrix().trace(), c(8.0));
        assert_eq!(p.mul(&p).unwrap(), p);
        let v = QubitVector::basis(5, 3).unwrap();
        let w = encode(&v, &e).unwrap();
        assert_eq!(p.apply(&w).unwrap(), w);
    }

    #[test]
    fn tunneling_sign_values() {
        assert_eq!(tunneling_sign(0, &make_encoding(1).unwrap()).unwrap(), 1);
        let e2 = make_encoding(2).unwrap();
        let signs = tunneling_signs(1, &e2).unwrap();
        assert_eq!(signs.len(), 4);
        assert!(signs.iter().all(|&s| s == signs[0]));
        let e4 = make_encoding(4).unwrap();
        for q in 0..4 {
            // one occupied level per inner pair lies between j and j'
            let expected = if q % 2 == 0 { 1 } else { -1 };
            assert_eq!(tunneling_sign(q, &e4).unwrap(), expected);
        }
    }

    #[test]
    fn crossing_pairs_have_state_dependent_sign() {
        let e = ThetaEncoding::with_pairing(vec![(0, 2), (1, 3)]).unwrap();
        assert!(matches!(tunneling_sign(0, &e), Err(Error::StateDependentSign { pair: 0 })));
        let nested = ThetaEncoding::with_pairing(vec![(0, 3), (1, 2)]).unwrap();
        assert!(tunneling_sign(0, &nested).is_ok());
    }

    #[test]
    fn pairing_validation_and_json() {
        assert!(ThetaEncoding::with_pairing(vec![(0, 0)]).is_err());
        assert!(ThetaEncoding::with_pairing(vec![(0, 1), (1, 2)]).is_err());
        assert!(ThetaEncoding::with_pairing(vec![(0, 4), (1, 2)]).is_err());
        let e = make_encoding(3).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(text, r#"{"pairs":[[2,3],[1,4],[0,5]]}"#);
        assert_eq!(serde_json::from_str::<ThetaEncoding>(&text).unwrap(), e);
    }

    #[test]
    fn subspace_membership() {
        let e = make_encoding(2).unwrap();
        let f = e.subspace();
        assert_eq!(f.dim(), 4);
        for &k in f.basis_map() {
            assert!(f.contains_basis(k));
            assert_eq!((k as u32).count_ones(), 2);
        }
        assert!(f.contains_basis(0b0011));
        assert!(!f.contains_basis(0b0110));
        assert!(!f.contains_basis(0b1001));
    }
}
