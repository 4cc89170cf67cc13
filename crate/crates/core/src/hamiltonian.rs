// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Hermitian Fock-space operators from coefficient tables.
//!
//! Three term families act on levels `i`, `j`:
//!
//! * external field `alpha_i a_i^+ a_i`
//! * diagonal interaction `beta_ij a_i^+ a_i a_j^+ a_j`, stored once per unordered pair
//! * tunneling `gamma_ij a_i^+ a_j + conj(gamma_ij) a_j^+ a_i`, stored with `i < j`
//!
//! plus general one-body `sum H_kl a_k^+ a_l` and two-body
//! `sum H_klmn a_l^+ a_k^+ a_m a_n` expansions (note the `l, k` order of the
//! creation operators).
//!
//! # JSON form
//!
//! ```json
//! { "J": 4,
//!   "alpha": [0.0, 1.5, 0.0, 0.0],
//!   "beta": [{"indices": [0, 3], "re": 2.0, "im": 0.0}],
//!   "gamma": [{"indices": [1, 2], "re": 0.0, "im": 1.0}],
//!   "one_body": [], "two_body": [{"indices": [0, 1, 1, 0], "re": 1.0, "im": 0.0}] }
//! ```
//!
//! Indices are 0-based level positions. `alpha` may be empty (all zero) or
//! have exactly `J` entries. Missing tables are empty.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::fock::{apply_word, FockState, LadderKind, LevelIndex, Operator, SignedState, MAX_LEVELS};

use LadderKind::{Annihilate as A, Create as C};

/// Coefficient tables defining a Hamiltonian over `levels` Fock levels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecFile", into = "SpecFile")]
pub struct HamiltonianSpec {
    levels: usize,
    alpha: Vec<f64>,
    beta: BTreeMap<(usize, usize), f64>,
    gamma: BTreeMap<(usize, usize), Complex64>,
    one_body: BTreeMap<(usize, usize), Complex64>,
    two_body: BTreeMap<[usize; 4], Complex64>,
}

fn finite(z: Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidCoefficient(format!("{what} coefficient is not finite")))
    }
}

impl HamiltonianSpec {
    pub fn new(levels: usize) -> Result<Self> {
        if levels == 0 || levels > MAX_LEVELS {
            return Err(Error::TooManyLevels {
                levels,
                max: MAX_LEVELS,
            });
        }
        Ok(HamiltonianSpec {
            levels,
            alpha: vec![0.0; levels],
            beta: BTreeMap::new(),
            gamma: BTreeMap::new(),
            one_body: BTreeMap::new(),
            two_body: BTreeMap::new(),
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.beta
    }

    pub fn gamma(&self) -> &BTreeMap<(usize, usize), Complex64> {
        &self.gamma
    }

    pub fn one_body(&self) -> &BTreeMap<(usize, usize), Complex64> {
        &self.one_body
    }

    pub fn two_body(&self) -> &BTreeMap<[usize; 4], Complex64> {
        &self.two_body
    }

    /// True when every coefficient is zero or absent.
    pub fn is_empty(&self) -> bool {
        self.alpha.iter().all(|a| *a == 0.0)
            && self.beta.values().all(|b| *b == 0.0)
            && self.gamma.values().all(|g| g.norm_sqr() == 0.0)
            && self.one_body.values().all(|h| h.norm_sqr() == 0.0)
            && self.two_body.values().all(|h| h.norm_sqr() == 0.0)
    }

    /// True when only field and diagonal terms are present.
    pub fn is_diagonal(&self) -> bool {
        self.gamma.values().all(|g| g.norm_sqr() == 0.0)
            && self
                .one_body
                .iter()
                .all(|((k, l), h)| k == l || h.norm_sqr() == 0.0)
            && self.two_body.values().all(|h| h.norm_sqr() == 0.0)
    }

    fn check(&self, level: usize) -> Result<()> {
        if level < self.levels {
            Ok(())
        } else {
            Err(Error::LevelOutOfRange {
                level,
                levels: self.levels,
            })
        }
    }

    fn check_pair(&self, i: usize, j: usize, what: &str) -> Result<()> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::InvalidCoefficient(format!(
                "{what} needs two distinct levels, got ({i}, {j})"
            )));
        }
        Ok(())
    }

    pub fn add_alpha(&mut self, i: usize, value: f64) -> Result<&mut Self> {
        self.check(i)?;
        finite(value.into(), "alpha")?;
        self.alpha[i] += value;
        Ok(self)
    }

    pub fn add_beta(&mut self, i: usize, j: usize, value: f64) -> Result<&mut Self> {
        self.check_pair(i, j, "beta")?;
        finite(value.into(), "beta")?;
        *self.beta.entry((i.min(j), i.max(j))).or_insert(0.0) += value;
        Ok(self)
    }

    /// Adds `value a_i^+ a_j + h.c.`; a pair given as `i > j` is stored as `(j, i)` with the conjugate.
    pub fn add_gamma(&mut self, i: usize, j: usize, value: Complex64) -> Result<&mut Self> {
        self.check_pair(i, j, "gamma")?;
        finite(value, "gamma")?;
        let (key, v) = if i < j { ((i, j), value) } else { ((j, i), value.conj()) };
        *self.gamma.entry(key).or_insert(Complex64::new(0.0, 0.0)) += v;
        Ok(self)
    }

    pub fn add_one_body(&mut self, k: usize, l: usize, value: Complex64) -> Result<&mut Self> {
        self.check(k)?;
        self.check(l)?;
        finite(value, "one-body")?;
        *self.one_body.entry((k, l)).or_insert(Complex64::new(0.0, 0.0)) += value;
        Ok(self)
    }

    pub fn add_two_body(&mut self, indices: [usize; 4], value: Complex64) -> Result<&mut Self> {
        for &i in &indices {
            self.check(i)?;
        }
        finite(value, "two-body")?;
        *self.two_body.entry(indices).or_insert(Complex64::new(0.0, 0.0)) += value;
        Ok(self)
    }

    /// Sum of two specs over the same level count.
    pub fn merged(&self, other: &HamiltonianSpec) -> Result<HamiltonianSpec> {
        if self.levels != other.levels {
            return Err(Error::DimensionMismatch {
                expected: self.levels,
                found: other.levels,
            });
        }
        let mut out = self.clone();
        for (i, a) in other.alpha.iter().enumerate() {
            out.alpha[i] += a;
        }
        for (&(i, j), &b) in &other.beta {
            out.add_beta(i, j, b)?;
        }
        for (&(i, j), &g) in &other.gamma {
            out.add_gamma(i, j, g)?;
        }
        for (&(k, l), &h) in &other.one_body {
            out.add_one_body(k, l, h)?;
        }
        for (&idx, &h) in &other.two_body {
            out.add_two_body(idx, h)?;
        }
        Ok(out)
    }

    /// Same spec with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> HamiltonianSpec {
        let mut out = self.clone();
        out.alpha.iter_mut().for_each(|a| *a *= factor);
        out.beta.values_mut().for_each(|b| *b *= factor);
        out.gamma.values_mut().for_each(|g| *g *= factor);
        out.one_body.values_mut().for_each(|h| *h *= factor);
        out.two_body.values_mut().for_each(|h| *h *= factor);
        out
    }

    /// `||H - H^+||` of the one-body table seen as a matrix.
    pub fn one_body_hermitian_residual(&self) -> f64 {
        let mut acc = 0.0;
        for (&(k, l), &h) in &self.one_body {
            let partner = self.one_body.get(&(l, k)).copied().unwrap_or_default();
            acc += (h - partner.conj()).norm_sqr();
        }
        acc.sqrt()
    }

    pub fn assemble(&self) -> Result<Operator> {
        assemble(self)
    }
}

// JSON layout

#[derive(Serialize, Deserialize)]
struct Entry {
    indices: Vec<usize>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(rename = "J")]
    levels: usize,
    #[serde(default)]
    alpha: Vec<f64>,
    #[serde(default)]
    beta: Vec<Entry>,
    #[serde(default)]
    gamma: Vec<Entry>,
    #[serde(default)]
    one_body: Vec<Entry>,
    #[serde(default)]
    two_body: Vec<Entry>,
}

fn entry<const N: usize>(e: &Entry, what: &str) -> Result<[usize; N]> {
    <[usize; N]>::try_from(e.indices.as_slice()).map_err(|_| {
        Error::InvalidCoefficient(format!("{what} entry needs {N} indices, got {}", e.indices.len()))
    })
}

fn duplicate(what: &str, idx: &[usize]) -> Error {
    Error::InvalidCoefficient(format!("duplicate {what} entry {idx:?}"))
}

impl TryFrom<SpecFile> for HamiltonianSpec {
    type Error = Error;

    fn try_from(f: SpecFile) -> Result<Self> {
        let mut spec = HamiltonianSpec::new(f.levels)?;
        if !f.alpha.is_empty() {
            if f.alpha.len() != f.levels {
                return Err(Error::DimensionMismatch {
                    expected: f.levels,
                    found: f.alpha.len(),
                });
            }
            for (i, a) in f.alpha.iter().enumerate() {
                spec.add_alpha(i, *a)?;
            }
        }
        for e in &f.beta {
            let [i, j] = entry::<2>(e, "beta")?;
            if e.im != 0.0 {
                return Err(Error::InvalidCoefficient(format!(
                    "beta ({i}, {j}) must be real, got im = {}",
                    e.im
                )));
            }
            if spec.beta.contains_key(&(i.min(j), i.max(j))) {
                return Err(duplicate("beta", &[i, j]));
            }
            spec.add_beta(i, j, e.re)?;
        }
        for e in &f.gamma {
            let [i, j] = entry::<2>(e, "gamma")?;
            if spec.gamma.contains_key(&(i.min(j), i.max(j))) {
                return Err(duplicate("gamma", &[i, j]));
            }
            spec.add_gamma(i, j, Complex64::new(e.re, e.im))?;
        }
        for e in &f.one_body {
            let [k, l] = entry::<2>(e, "one_body")?;
            if spec.one_body.contains_key(&(k, l)) {
                return Err(duplicate("one_body", &[k, l]));
            }
            spec.add_one_body(k, l, Complex64::new(e.re, e.im))?;
        }
        for e in &f.two_body {
            let idx = entry::<4>(e, "two_body")?;
            if spec.two_body.contains_key(&idx) {
                return Err(duplicate("two_body", &idx));
            }
            spec.add_two_body(idx, Complex64::new(e.re, e.im))?;
        }
        Ok(spec)
    }
}

impl From<HamiltonianSpec> for SpecFile {
    fn from(s: HamiltonianSpec) -> Self {
        let pair = |(i, j): (usize, usize), z: Complex64| Entry {
            indices: vec![i, j],
            re: z.re,
            im: z.im,
        };
        SpecFile {
            levels: s.levels,
            alpha: s.alpha,
            beta: s.beta.into_iter().map(|(k, b)| pair(k, b.into())).collect(),
            gamma: s.gamma.into_iter().map(|(k, g)| pair(k, g)).collect(),
            one_body: s.one_body.into_iter().map(|(k, h)| pair(k, h)).collect(),
            two_body: s
                .two_body
                .into_iter()
                .map(|(idx, h)| Entry {
                    indices: idx.to_vec(),
                    re: h.re,
                    im: h.im,
                })
                .collect(),
        }
    }
}

// Builders

fn occupation_energy(levels: usize, mode: ExecMode, energy: impl Fn(FockState) -> f64 + Sync + Send) -> Result<Operator> {
    Operator::from_columns(levels, mode, |col, column| {
        let s = FockState::from_index(col, levels).expect("index within dimension");
        column[col] = Complex64::new(energy(s), 0.0);
    })
}

/// Sum of `coeff * word` over basis columns, where each word is a ladder product.
fn word_sum(
    levels: usize,
    mode: ExecMode,
    terms: &[(Complex64, Vec<(LadderKind, LevelIndex)>)],
) -> Result<Operator> {
    Operator::from_columns(levels, mode, |col, column| {
        let s = FockState::from_index(col, levels).expect("index within dimension");
        for (coeff, word) in terms {
            if let Ok(SignedState::Signed { state, sign }) = apply_word(word, s) {
                column[state.index()] += coeff * f64::from(sign);
            }
        }
    })
}

fn check_index(i: usize, levels: usize) -> Result<()> {
    if i < levels {
        Ok(())
    } else {
        Err(Error::LevelOutOfRange { level: i, levels })
    }
}

fn check_distinct(i: usize, j: usize, levels: usize, what: &str) -> Result<()> {
    check_index(i, levels)?;
    check_index(j, levels)?;
    if i == j {
        return Err(Error::InvalidCoefficient(format!(
            "{what} needs two distinct levels, got ({i}, {j})"
        )));
    }
    Ok(())
}

/// `sum_i alpha_i a_i^+ a_i`.
pub fn build_external(alpha: &[f64], levels: usize) -> Result<Operator> {
    if alpha.len() != levels {
        return Err(Error::DimensionMismatch {
            expected: levels,
            found: alpha.len(),
        });
    }
    occupation_energy(levels, ExecMode::default(), |s| {
        alpha
            .iter()
            .enumerate()
            .filter(|(i, _)| s.is_occupied(LevelIndex(*i)))
            .map(|(_, a)| a)
            .sum()
    })
}

/// `sum beta_ij n_i n_j`, each listed pair applied once.
pub fn build_diagonal<I>(beta: I, levels: usize) -> Result<Operator>
where
    I: IntoIterator<Item = (usize, usize, f64)>,
{
    let terms: Vec<_> = beta.into_iter().collect();
    for &(i, j, b) in &terms {
        check_distinct(i, j, levels, "beta")?;
        if !b.is_finite() {
            return Err(Error::InvalidCoefficient("beta coefficient is not finite".into()));
        }
    }
    occupation_energy(levels, ExecMode::default(), |s| {
        terms
            .iter()
            .filter(|(i, j, _)| s.is_occupied(LevelIndex(*i)) && s.is_occupied(LevelIndex(*j)))
            .map(|(_, _, b)| b)
            .sum()
    })
}

/// `sum gamma_ij a_i^+ a_j + conj(gamma_ij) a_j^+ a_i`.
pub fn build_tunneling<I>(gamma: I, levels: usize) -> Result<Operator>
where
    I: IntoIterator<Item = (usize, usize, Complex64)>,
{
    let mut terms = Vec::new();
    for (i, j, g) in gamma {
        check_distinct(i, j, levels, "gamma")?;
        terms.push((g, vec![(C, LevelIndex(i)), (A, LevelIndex(j))]));
        terms.push((g.conj(), vec![(C, LevelIndex(j)), (A, LevelIndex(i))]));
    }
    word_sum(levels, ExecMode::default(), &terms)
}

/// `sum H_kl a_k^+ a_l`. Hermiticity is not assumed; check the result.
pub fn build_one_body<I>(table: I, levels: usize) -> Result<Operator>
where
    I: IntoIterator<Item = (usize, usize, Complex64)>,
{
    let mut terms = Vec::new();
    for (k, l, h) in table {
        check_index(k, levels)?;
        check_index(l, levels)?;
        terms.push((h, vec![(C, LevelIndex(k)), (A, LevelIndex(l))]));
    }
    word_sum(levels, ExecMode::default(), &terms)
}

/// `sum H_klmn a_l^+ a_k^+ a_m a_n`. Hermiticity is not assumed; check the result.
pub fn build_two_body<I>(table: I, levels: usize) -> Result<Operator>
where
    I: IntoIterator<Item = ([usize; 4], Complex64)>,
{
    let mut terms = Vec::new();
    for ([k, l, m, n], h) in table {
        for i in [k, l, m, n] {
            check_index(i, levels)?;
        }
        terms.push((
            h,
            vec![
                (C, LevelIndex(l)),
                (C, LevelIndex(k)),
                (A, LevelIndex(m)),
                (A, LevelIndex(n)),
            ],
        ));
    }
    word_sum(levels, ExecMode::default(), &terms)
}

/// Relative Hermiticity tolerance used by [`assemble`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Ladder words of every non-diagonal term in `spec`, with coefficients.
fn spec_words(spec: &HamiltonianSpec) -> Vec<(Complex64, Vec<(LadderKind, LevelIndex)>)> {
    let mut terms = Vec::new();
    for (&(i, j), &g) in &spec.gamma {
        terms.push((g, vec![(C, LevelIndex(i)), (A, LevelIndex(j))]));
        terms.push((g.conj(), vec![(C, LevelIndex(j)), (A, LevelIndex(i))]));
    }
    for (&(k, l), &h) in &spec.one_body {
        terms.push((h, vec![(C, LevelIndex(k)), (A, LevelIndex(l))]));
    }
    for (&[k, l, m, n], &h) in &spec.two_body {
        terms.push((
            h,
            vec![
                (C, LevelIndex(l)),
                (C, LevelIndex(k)),
                (A, LevelIndex(m)),
                (A, LevelIndex(n)),
            ],
        ));
    }
    terms
}

/// Field plus diagonal-interaction energy of a basis state.
fn diagonal_energy(spec: &HamiltonianSpec, s: FockState) -> f64 {
    let field: f64 = spec
        .alpha
        .iter()
        .enumerate()
        .filter(|(i, _)| s.is_occupied(LevelIndex(*i)))
        .map(|(_, a)| a)
        .sum();
    let diag: f64 = spec
        .beta
        .iter()
        .filter(|((i, j), _)| s.is_occupied(LevelIndex(*i)) && s.is_occupied(LevelIndex(*j)))
        .map(|(_, b)| b)
        .sum();
    field + diag
}

/// Image of basis state `s` under the spec's Hamiltonian, as `(row index, value)` pairs.
fn column_action(
    spec: &HamiltonianSpec,
    words: &[(Complex64, Vec<(LadderKind, LevelIndex)>)],
    s: FockState,
    mut emit: impl FnMut(usize, Complex64),
) {
    let e = diagonal_energy(spec, s);
    if e != 0.0 {
        emit(s.index(), Complex64::new(e, 0.0));
    }
    for (coeff, word) in words {
        if let Ok(SignedState::Signed { state, sign }) = apply_word(word, s) {
            emit(state.index(), coeff * f64::from(sign));
        }
    }
}

fn check_hermitian(residual: f64, norm: f64) -> Result<()> {
    if residual > HERMITIAN_TOL * norm.max(1.0) {
        Err(Error::NonHermitian { residual })
    } else {
        Ok(())
    }
}

/// Sum of all term builders for `spec`; fails if the result is not Hermitian.
pub fn assemble(spec: &HamiltonianSpec) -> Result<Operator> {
    assemble_with(spec, ExecMode::default())
}

pub fn assemble_with(spec: &HamiltonianSpec, mode: ExecMode) -> Result<Operator> {
    let levels = spec.levels;
    let words = spec_words(spec);
    let op = Operator::from_columns(levels, mode, |col, column| {
        let s = FockState::from_index(col, levels).expect("index within dimension");
        column_action(spec, &words, s, |row, v| column[row] += v);
    })?;
    check_hermitian(op.hermitian_residual(), op.frobenius_norm())?;
    Ok(op)
}

/// Basis states with a fixed particle number. Every term a spec can hold
/// conserves particle number, so a sector is invariant under all of them.
#[derive(Clone, Debug)]
pub struct Sector {
    levels: usize,
    particles: usize,
    basis: Vec<usize>,
    position: Vec<u32>,
}

impl Sector {
    pub fn new(levels: usize, particles: usize) -> Result<Self> {
        if levels == 0 || levels > MAX_LEVELS {
            return Err(Error::TooManyLevels {
                levels,
                max: MAX_LEVELS,
            });
        }
        let mut position = vec![u32::MAX; 1 << levels];
        let basis: Vec<usize> = (0..1usize << levels)
            .filter(|b| b.count_ones() as usize == particles)
            .collect();
        for (k, &b) in basis.iter().enumerate() {
            position[b] = k as u32;
        }
        Ok(Sector {
            levels,
            particles,
            basis,
            position,
        })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Fock basis indices of the sector, ascending.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn position_of(&self, fock_index: usize) -> Option<usize> {
        match self.position.get(fock_index) {
            Some(&p) if p != u32::MAX => Some(p as usize),
            _ => None,
        }
    }
}

/// The spec's Hamiltonian restricted to `sector`, in sector basis order.
pub fn assemble_sector(spec: &HamiltonianSpec, sector: &Sector) -> Result<DMatrix<Complex64>> {
    if spec.levels != sector.levels {
        return Err(Error::DimensionMismatch {
            expected: 1 << sector.levels,
            found: 1 << spec.levels,
        });
    }
    let dim = sector.dim();
    let words = spec_words(spec);
    let mut m = DMatrix::zeros(dim, dim);
    exec::for_each_chunk_mut(ExecMode::default(), m.as_mut_slice(), dim.max(1), |col, column| {
        let s = FockState::from_index(sector.basis[col], spec.levels).expect("sector index in range");
        column_action(spec, &words, s, |row, v| {
            let r = sector.position_of(row).expect("particle number conserved");
            column[r] += v;
        });
    });
    check_hermitian((&m - m.adjoint()).norm(), m.norm())?;
    Ok(m)
}
