// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lifting qubit operations to field and tunneling controls, and compiling
//! circuits into pulse schedules under a permanently acting diagonal interaction.
//!
//! A schedule is a list of segments. A segment with positive duration evolves
//! under its controls plus the fixed interaction. A zero-duration segment is an
//! impulsive pulse: its coefficients are pulse areas and it applies
//! `exp(-i H_controls)` with the fixed interaction negligible over its length.
//!
//! Entangling gates come from letting the fixed coupling `g n_{q'} n_{(q+1)'}`
//! run for `t = theta / g`. Other couplings are refocused: the qubits in a flip
//! set are inverted at the midpoint and restored at the end, which turns every
//! unwanted `x_p x_{p+1}` phase into local phases that a later field pulse removes.
//! Qubits that are not nearest neighbours are brought together with SWAPs built
//! from the same controlled-phase primitive.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, SMatrix, SVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, OneQubitGate};
use crate::error::{Error, Result};
use crate::evolution::{unitary, Propagator};
use crate::exec::{self, ExecMode};
use crate::fock::{FockVector, Operator};
use crate::hamiltonian::{assemble_sector, assemble_with, HamiltonianSpec, Sector};
use crate::theta::{tunneling_sign, QubitVector, ThetaEncoding};

type M2 = Matrix2<Complex64>;

const TAU: f64 = 2.0 * PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Wrap an angle into `(-pi, pi]`.
fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Hermitian 2x2 generator `[[d1, d], [conj(d), d2]]`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct OneQubitHamiltonian {
    pub d1: f64,
    pub d2: f64,
    pub d: Complex64,
}

impl OneQubitHamiltonian {
    pub fn new(d1: f64, d2: f64, d: Complex64) -> Self {
        OneQubitHamiltonian { d1, d2, d }
    }

    pub fn matrix(&self) -> M2 {
        M2::new(c(self.d1, 0.0), self.d, self.d.conj(), c(self.d2, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.d1 == 0.0 && self.d2 == 0.0 && self.d.norm_sqr() == 0.0
    }

    /// `exp(-i H)`.
    pub fn exp(&self) -> M2 {
        let m = self.matrix();
        let op = Operator::from_matrix(1, DMatrix::from_iterator(2, 2, m.iter().copied()))
            .expect("2x2 fits one level");
        let u = unitary(&op, 1.0).expect("generator is Hermitian by construction");
        M2::from_iterator(u.matrix().iter().copied())
    }
}

/// Unitarity tolerance for [`hamiltonian_log`].
pub const UNITARY_TOL: f64 = 1e-10;

/// Principal Hermitian logarithm: `H` with `exp(-i H) = u` and eigenvalues in
/// `(-pi, pi]`, ties at `+-pi` resolved to `+pi`.
pub fn hamiltonian_log(u: &M2) -> Result<OneQubitHamiltonian> {
    let residual = (u.adjoint() * u - M2::identity()).norm();
    if residual > UNITARY_TOL {
        return Err(Error::NonUnitary { residual });
    }
    let (a, b, cc, d) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let mean = (a + d) * 0.5;
    let half = (a - d) * 0.5;
    let disc = (half * half + b * cc).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;

    // eigenvalue e^{-i theta}
    let angle = |l: Complex64| {
        let t = -l.arg();
        if t <= -PI + 1e-12 {
            t + TAU
        } else {
            t
        }
    };
    let t1 = angle(l1);
    let mut t2 = angle(l2);
    let gap = l1 - l2;
    if gap.norm() < 1e-6 {
        // keep both logs on the same sheet so the divided difference stays bounded
        t2 = t1 + wrap(t2 - t1);
    }
    let slope = if gap.norm() == 0.0 {
        c(0.0, 1.0) / l1
    } else {
        c(t1 - t2, 0.0) / gap
    };
    let h = M2::identity() * c(t2, 0.0) + (u - M2::identity() * l2) * slope;
    let h = (h + h.adjoint()) * c(0.5, 0.0);
    Ok(OneQubitHamiltonian {
        d1: h[(0, 0)].re,
        d2: h[(1, 1)].re,
        d: h[(0, 1)],
    })
}

/// Field and tunneling controls on qubit `qubit`'s pair that act on `F` exactly as
/// `h` acts on that qubit.
pub fn lift_one_qubit(h: &OneQubitHamiltonian, qubit: usize, enc: &ThetaEncoding) -> Result<HamiltonianSpec> {
    let (lower, upper) = enc.pair(qubit)?;
    let mut spec = HamiltonianSpec::new(enc.levels())?;
    if h.d1 != 0.0 {
        spec.add_alpha(lower.0, h.d1)?;
    }
    if h.d2 != 0.0 {
        spec.add_alpha(upper.0, h.d2)?;
    }
    if h.d.norm_sqr() != 0.0 {
        let sign = tunneling_sign(qubit, enc)?;
        spec.add_gamma(lower.0, upper.0, h.d * f64::from(sign))?;
    }
    Ok(spec)
}

/// Field plus diagonal terms realizing a two-qubit phase gate, with the global
/// phase that was split off.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalLift {
    pub spec: HamiltonianSpec,
    /// `theta^{-1} exp(-i H) theta = e^{-i global_phase} diag(e^{i phases})`.
    pub global_phase: f64,
}

/// Solve for `(alpha, beta)` on the four levels of qubits `a` and `b` such that
/// unit-time evolution applies `e^{i phases[2x + y]}` on `F` up to a global
/// phase. The system is underdetermined; the minimum-norm solution is returned.
pub fn lift_diagonal(phases: &[f64; 4], (a, b): (usize, usize), enc: &ThetaEncoding) -> Result<DiagonalLift> {
    if a == b {
        return Err(Error::InvalidCircuit(format!("diag needs two distinct qubits, got {a} twice")));
    }
    let (la, ua) = enc.pair(a)?;
    let (lb, ub) = enc.pair(b)?;
    let global_phase = phases.iter().sum::<f64>() / 4.0;

    // unknowns: alpha_la, alpha_ua, alpha_lb, alpha_ub, beta_{la lb}, beta_{la ub}, beta_{ua lb}, beta_{ua ub}
    let mut design = SMatrix::<f64, 4, 8>::zeros();
    let mut energy = SVector::<f64, 4>::zeros();
    for x in 0..2 {
        for y in 0..2 {
            let row = 2 * x + y;
            let occ_a = [1 - x, x];
            let occ_b = [1 - y, y];
            design[(row, 0)] = occ_a[0] as f64;
            design[(row, 1)] = occ_a[1] as f64;
            design[(row, 2)] = occ_b[0] as f64;
            design[(row, 3)] = occ_b[1] as f64;
            design[(row, 4)] = (occ_a[0] * occ_b[0]) as f64;
            design[(row, 5)] = (occ_a[0] * occ_b[1]) as f64;
            design[(row, 6)] = (occ_a[1] * occ_b[0]) as f64;
            design[(row, 7)] = (occ_a[1] * occ_b[1]) as f64;
            energy[row] = -(phases[row] - global_phase);
        }
    }
    let gram = design * design.transpose();
    let solution = design.transpose()
        * gram
            .cholesky()
            .expect("design has full row rank")
            .solve(&energy);

    let mut spec = HamiltonianSpec::new(enc.levels())?;
    for (k, level) in [la, ua, lb, ub].iter().enumerate() {
        if solution[k] != 0.0 {
            spec.add_alpha(level.0, solution[k])?;
        }
    }
    for (k, (i, j)) in [(la, lb), (la, ub), (ua, lb), (ua, ub)].iter().enumerate() {
        if solution[4 + k] != 0.0 {
            spec.add_beta(i.0, j.0, solution[4 + k])?;
        }
    }
    Ok(DiagonalLift { spec, global_phase })
}

/// `theta` as a dense `2^{2n} x 2^n` isometry.
pub fn theta_matrix(enc: &ThetaEncoding) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(1 << enc.levels(), 1 << enc.qubits());
    for x in 0..1usize << enc.qubits() {
        m[(enc.fock_index(x), x)] = c(1.0, 0.0);
    }
    m
}

/// `theta` as columns over the basis of `sector` (which must hold `n` particles).
fn sector_theta(sector: &Sector, enc: &ThetaEncoding) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(sector.dim(), 1 << enc.qubits());
    for x in 0..1usize << enc.qubits() {
        let row = sector.position_of(enc.fock_index(x)).expect("F lies in the n-particle sector");
        m[(row, x)] = c(1.0, 0.0);
    }
    m
}

/// Images of the encoded basis states after a schedule, in sector coordinates.
#[derive(Clone, Debug)]
pub struct EncodedRun {
    encoding: ThetaEncoding,
    sector: Sector,
    states: DMatrix<Complex64>,
}

impl EncodedRun {
    /// `theta^+ E theta`: the action restricted to (and projected onto) `F`.
    pub fn restricted(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.encoding.qubits();
        DMatrix::from_fn(d, d, |y, x| {
            let row = self.sector.position_of(self.encoding.fock_index(y)).expect("F in sector");
            self.states[(row, x)]
        })
    }

    /// Weight outside `F` of the image of each encoded basis state.
    pub fn leakage(&self) -> Vec<f64> {
        let f = self.encoding.subspace();
        (0..self.states.ncols())
            .map(|x| {
                self.sector
                    .basis()
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| !f.contains_basis(b))
                    .map(|(r, _)| self.states[(r, x)].norm_sqr())
                    .sum()
            })
            .collect()
    }

    /// Largest leakage over all normalized encoded inputs: the top eigenvalue of
    /// `B^+ B`, where `B` holds the rows outside `F`.
    pub fn worst_leakage(&self) -> f64 {
        let f = self.encoding.subspace();
        let outside: Vec<usize> = (0..self.sector.dim())
            .filter(|&r| !f.contains_basis(self.sector.basis()[r]))
            .collect();
        let b = self.states.select_rows(outside.iter());
        let gram = b.adjoint() * b;
        nalgebra::SymmetricEigen::new(gram)
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, &e| m.max(e))
            .clamp(0.0, 1.0)
    }

    /// `|tr(U^+ M)| / 2^n` for the restricted action `M`: 1 exactly when the
    /// schedule equals `U` on `F` up to a global phase.
    pub fn fidelity(&self, target: &Operator) -> Result<f64> {
        let m = self.restricted();
        if target.dim() != m.nrows() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: target.dim(),
            });
        }
        let overlap = (target.matrix().adjoint() * &m).trace();
        Ok((overlap.norm() / m.nrows() as f64).min(1.0))
    }

    /// `|<theta(U v), E theta(v)>|` for one input state.
    pub fn state_fidelity(&self, target: &Operator, v: &QubitVector) -> Result<f64> {
        let m = self.restricted();
        let ideal = target.matrix() * v.amplitudes();
        let actual = m * v.amplitudes();
        Ok(ideal.dotc(&actual).norm().min(1.0))
    }
}

/// `||exp(-i H) theta - theta qubit_op||_F` for the Hamiltonian `spec`,
/// evaluated in the `n`-particle sector. Matches [`verify_diagram`] on the
/// dense propagator but scales to larger registers.
pub fn lifted_residual(spec: &HamiltonianSpec, qubit_op: &Operator, enc: &ThetaEncoding) -> Result<f64> {
    if qubit_op.levels() != enc.qubits() || spec.levels() != enc.levels() {
        return Err(Error::DimensionMismatch {
            expected: 1 << enc.qubits(),
            found: qubit_op.dim(),
        });
    }
    let sector = Sector::new(enc.levels(), enc.qubits())?;
    let theta = sector_theta(&sector, enc);
    let mut states = theta.clone();
    if !spec.is_empty() {
        Propagator::from_matrix(&assemble_sector(spec, &sector)?)?.apply(1.0, &mut states);
    }
    Ok((states - theta * qubit_op.matrix()).norm())
}

/// Frobenius norm of `fock_op * theta - theta * qubit_op`.
pub fn verify_diagram(qubit_op: &Operator, fock_op: &Operator, enc: &ThetaEncoding) -> Result<f64> {
    if qubit_op.levels() != enc.qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << enc.qubits(),
            found: qubit_op.dim(),
        });
    }
    if fock_op.levels() != enc.levels() {
        return Err(Error::DimensionMismatch {
            expected: 1 << enc.levels(),
            found: fock_op.dim(),
        });
    }
    let dim_q = qubit_op.dim();
    let parts = exec::map_indices(ExecMode::default(), dim_q, |x| {
        let mut col = fock_op.matrix().column(enc.fock_index(x)).clone_owned();
        for y in 0..dim_q {
            col[enc.fock_index(y)] -= qubit_op.entry(y, x);
        }
        col.norm_squared()
    });
    Ok(parts.iter().sum::<f64>().sqrt())
}

/// The fixed diagonal interaction. Only upper-level couplings between
/// neighbouring qubits (`beta_{q', (q+1)'}`) can be scheduled around.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedInteraction {
    levels: usize,
    beta: BTreeMap<(usize, usize), f64>,
}

impl FixedInteraction {
    pub fn new(levels: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        // reuse the spec's index and finiteness checks
        let mut spec = HamiltonianSpec::new(levels)?;
        for (i, j, b) in entries {
            spec.add_beta(i, j, b)?;
        }
        Ok(FixedInteraction {
            levels,
            beta: spec.beta().clone(),
        })
    }

    /// Coupling `g` between the upper levels of every pair of neighbouring qubits.
    pub fn nearest_neighbor(enc: &ThetaEncoding, g: f64) -> Result<Self> {
        let entries: Vec<_> = (0..enc.qubits().saturating_sub(1))
            .map(|q| (enc.pairs()[q].1 .0, enc.pairs()[q + 1].1 .0, g))
            .collect();
        Self::new(enc.levels(), entries)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn beta(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.beta
    }

    /// Which qubit pairs each nonzero entry couples, as `(q, q + 1)`.
    pub fn coupled_qubits(&self, enc: &ThetaEncoding) -> Result<Vec<(usize, usize)>> {
        self.validate(enc)?;
        Ok((0..enc.qubits().saturating_sub(1))
            .filter(|&q| self.coupling(enc, q) != 0.0)
            .map(|q| (q, q + 1))
            .collect())
    }

    /// `g` between qubits `q` and `q + 1`.
    pub fn coupling(&self, enc: &ThetaEncoding, q: usize) -> f64 {
        if q + 1 >= enc.qubits() {
            return 0.0;
        }
        let (i, j) = (enc.pairs()[q].1 .0, enc.pairs()[q + 1].1 .0);
        self.beta.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0)
    }

    /// Reject couplings the compiler cannot refocus.
    pub fn validate(&self, enc: &ThetaEncoding) -> Result<()> {
        if self.levels != enc.levels() {
            return Err(Error::UnsupportedTopology(format!(
                "interaction spans {} levels but the encoding has {}",
                self.levels,
                enc.levels()
            )));
        }
        let qubit_of_upper: BTreeMap<usize, usize> =
            enc.pairs().iter().enumerate().map(|(q, (_, u))| (u.0, q)).collect();
        for (&(i, j), &b) in &self.beta {
            if b == 0.0 {
                continue;
            }
            let ok = match (qubit_of_upper.get(&i), qubit_of_upper.get(&j)) {
                (Some(&p), Some(&q)) => p.abs_diff(q) == 1,
                _ => false,
            };
            if !ok {
                return Err(Error::UnsupportedTopology(format!(
                    "beta({i}, {j}) = {b} is not an upper-level coupling between neighbouring qubits"
                )));
            }
        }
        Ok(())
    }

    pub fn as_spec(&self) -> HamiltonianSpec {
        let mut spec = HamiltonianSpec::new(self.levels).expect("levels validated at construction");
        for (&(i, j), &b) in &self.beta {
            spec.add_beta(i, j, b).expect("entries validated at construction");
        }
        spec
    }
}

/// One control segment. There is no diagonal-interaction field: the controls
/// can only be external fields and tunneling.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    duration: f64,
    alpha: Vec<f64>,
    gamma: BTreeMap<(usize, usize), Complex64>,
}

impl Segment {
    /// Take the field and tunneling part of `controls`; anything else is an error.
    pub fn new(duration: f64, controls: &HamiltonianSpec) -> Result<Self> {
        if !duration.is_finite() || duration < 0.0 {
            return Err(Error::InvalidDuration(duration));
        }
        if !controls.beta().is_empty() || !controls.one_body().is_empty() || !controls.two_body().is_empty() {
            return Err(Error::InvalidSchedule(
                "controls may only set external fields and tunneling".into(),
            ));
        }
        Ok(Segment {
            duration,
            alpha: controls.alpha().to_vec(),
            gamma: controls.gamma().clone(),
        })
    }

    /// Free evolution under the fixed interaction alone.
    pub fn wait(levels: usize, duration: f64) -> Result<Self> {
        Segment::new(duration, &HamiltonianSpec::new(levels)?)
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn is_pulse(&self) -> bool {
        self.duration == 0.0
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn gamma(&self) -> &BTreeMap<(usize, usize), Complex64> {
        &self.gamma
    }

    pub fn controls(&self) -> HamiltonianSpec {
        let mut spec = HamiltonianSpec::new(self.alpha.len()).expect("segment levels are valid");
        for (i, &a) in self.alpha.iter().enumerate() {
            if a != 0.0 {
                spec.add_alpha(i, a).expect("in range");
            }
        }
        for (&(i, j), &g) in &self.gamma {
            spec.add_gamma(i, j, g).expect("in range");
        }
        spec
    }
}

/// Summary numbers for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleStats {
    pub segments: usize,
    pub pulses: usize,
    pub waits: usize,
    pub total_duration: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PulseSchedule {
    encoding: ThetaEncoding,
    fixed: FixedInteraction,
    segments: Vec<Segment>,
}

impl PulseSchedule {
    pub fn new(encoding: ThetaEncoding, fixed: FixedInteraction, segments: Vec<Segment>) -> Result<Self> {
        let s = PulseSchedule {
            encoding,
            fixed,
            segments,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn encoding(&self) -> &ThetaEncoding {
        &self.encoding
    }

    pub fn fixed(&self) -> &FixedInteraction {
        &self.fixed
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn stats(&self) -> ScheduleStats {
        let pulses = self.segments.iter().filter(|s| s.is_pulse()).count();
        ScheduleStats {
            segments: self.segments.len(),
            pulses,
            waits: self.segments.len() - pulses,
            total_duration: self.total_duration(),
        }
    }

    /// Structural checks: level counts agree, tunneling stays inside pairs.
    pub fn validate(&self) -> Result<()> {
        let levels = self.encoding.levels();
        if self.fixed.levels != levels {
            return Err(Error::InvalidSchedule(format!(
                "fixed interaction has {} levels, encoding has {levels}",
                self.fixed.levels
            )));
        }
        let pairs: Vec<(usize, usize)> = self
            .encoding
            .pairs()
            .iter()
            .map(|(l, u)| (l.0.min(u.0), l.0.max(u.0)))
            .collect();
        for (k, seg) in self.segments.iter().enumerate() {
            if seg.alpha.len() != levels {
                return Err(Error::InvalidSchedule(format!(
                    "segment {k} has {} field entries, expected {levels}",
                    seg.alpha.len()
                )));
            }
            if !seg.duration.is_finite() || seg.duration < 0.0 {
                return Err(Error::InvalidDuration(seg.duration));
            }
            for &(i, j) in seg.gamma.keys() {
                if !pairs.contains(&(i, j)) {
                    return Err(Error::InvalidSchedule(format!(
                        "segment {k} tunnels between levels {i} and {j}, which are not a pair"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Hamiltonian spec and evolution time for one segment.
    fn segment_generator(&self, seg: &Segment) -> Result<(HamiltonianSpec, f64)> {
        if seg.is_pulse() {
            Ok((seg.controls(), 1.0))
        } else {
            Ok((seg.controls().merged(&self.fixed.as_spec())?, seg.duration))
        }
    }

    /// Dense Fock-space unitary of one segment.
    pub fn segment_unitary(&self, index: usize) -> Result<Operator> {
        let (spec, t) = self.segment_generator(&self.segments[index])?;
        unitary(&assemble_with(&spec, ExecMode::default())?, t)
    }

    /// Evolve an arbitrary Fock vector through the whole schedule (dense path).
    pub fn execute(&self, v: &FockVector) -> Result<FockVector> {
        if v.levels() != self.encoding.levels() {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.encoding.levels(),
                found: v.dim(),
            });
        }
        let mut m = DMatrix::from_column_slice(v.dim(), 1, v.amplitudes().as_slice());
        for seg in &self.segments {
            let (spec, t) = self.segment_generator(seg)?;
            if spec.is_empty() {
                continue;
            }
            Propagator::new(&assemble_with(&spec, ExecMode::default())?)?.apply(t, &mut m);
        }
        FockVector::from_amplitudes(v.levels(), m.column(0).iter().copied().collect())
    }

    /// The schedule applied to every encoded qubit basis state. Runs in the
    /// `n`-particle sector, which contains `F` and is invariant under every segment.
    pub fn encoded_propagation(&self) -> Result<EncodedRun> {
        let sector = Sector::new(self.encoding.levels(), self.encoding.qubits())?;
        let mut states = sector_theta(&sector, &self.encoding);
        for seg in &self.segments {
            let (spec, t) = self.segment_generator(seg)?;
            if spec.is_empty() {
                continue;
            }
            Propagator::from_matrix(&assemble_sector(&spec, &sector)?)?.apply(t, &mut states);
        }
        Ok(EncodedRun {
            encoding: self.encoding.clone(),
            sector,
            states,
        })
    }
    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(ScheduleFile::from(self)).expect("schedule serializes")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ScheduleFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        validate_schedule_json(&value)?;
        let file: ScheduleFile = serde_json::from_value(value)?;
        file.try_into()
    }
}

// Schedule JSON

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaEntry {
    i: usize,
    j: usize,
    value: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GammaEntry {
    i: usize,
    j: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    levels: usize,
    pairs: Vec<(usize, usize)>,
    fixed_beta: Vec<BetaEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentFile {
    duration: f64,
    alpha: Vec<f64>,
    gamma: Vec<GammaEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    header: Header,
    segments: Vec<SegmentFile>,
}

impl From<&PulseSchedule> for ScheduleFile {
    fn from(s: &PulseSchedule) -> Self {
        ScheduleFile {
            header: Header {
                levels: s.encoding.levels(),
                pairs: s.encoding.pairs().iter().map(|(l, u)| (l.0, u.0)).collect(),
                fixed_beta: s
                    .fixed
                    .beta
                    .iter()
                    .map(|(&(i, j), &value)| BetaEntry { i, j, value })
                    .collect(),
            },
            segments: s
                .segments
                .iter()
                .map(|seg| SegmentFile {
                    duration: seg.duration,
                    alpha: seg.alpha.clone(),
                    gamma: seg
                        .gamma
                        .iter()
                        .map(|(&(i, j), g)| GammaEntry { i, j, re: g.re, im: g.im })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ScheduleFile> for PulseSchedule {
    type Error = Error;

    fn try_from(f: ScheduleFile) -> Result<Self> {
        let encoding = ThetaEncoding::with_pairing(f.header.pairs)?;
        if encoding.levels() != f.header.levels {
            return Err(Error::InvalidSchedule(format!(
                "header declares {} levels but pairs cover {}",
                f.header.levels,
                encoding.levels()
            )));
        }
        let fixed = FixedInteraction::new(
            f.header.levels,
            f.header.fixed_beta.iter().map(|b| (b.i, b.j, b.value)),
        )?;
        let segments = f
            .segments
            .into_iter()
            .map(|s| {
                let mut spec = HamiltonianSpec::new(f.header.levels)?;
                if s.alpha.len() != f.header.levels {
                    return Err(Error::InvalidSchedule(format!(
                        "segment has {} field entries, expected {}",
                        s.alpha.len(),
                        f.header.levels
                    )));
                }
                for (i, a) in s.alpha.iter().enumerate() {
                    spec.add_alpha(i, *a)?;
                }
                for g in &s.gamma {
                    spec.add_gamma(g.i, g.j, c(g.re, g.im))?;
                }
                Segment::new(s.duration, &spec)
            })
            .collect::<Result<Vec<_>>>()?;
        PulseSchedule::new(encoding, fixed, segments)
    }
}

const SEGMENT_KEYS: [&str; 3] = ["duration", "alpha", "gamma"];

/// Schema check on serialized schedules. Segments must consist of exactly a
/// duration plus field and tunneling arrays; a diagonal-interaction entry
/// (or anything else) inside a segment is rejected, as is tunneling between
/// levels that are not paired.
pub fn validate_schedule_json(value: &serde_json::Value) -> Result<()> {
    let bad = |msg: String| Error::InvalidSchedule(msg);
    let obj = value.as_object().ok_or_else(|| bad("schedule must be an object".into()))?;
    for key in obj.keys() {
        if key != "header" && key != "segments" {
            return Err(bad(format!("unexpected top-level key '{key}'")));
        }
    }
    let header = obj
        .get("header")
        .and_then(|h| h.as_object())
        .ok_or_else(|| bad("missing header".into()))?;
    let pairs: Vec<(u64, u64)> = header
        .get("pairs")
        .and_then(|p| p.as_array())
        .ok_or_else(|| bad("header lacks pairs".into()))?
        .iter()
        .map(|p| {
            let a = p.as_array().filter(|a| a.len() == 2);
            match a.map(|a| (a[0].as_u64(), a[1].as_u64())) {
                Some((Some(l), Some(u))) => Ok((l.min(u), l.max(u))),
                _ => Err(bad("malformed pair".into())),
            }
        })
        .collect::<Result<_>>()?;
    let segments = obj
        .get("segments")
        .and_then(|s| s.as_array())
        .ok_or_else(|| bad("segments must be an array".into()))?;
    for (k, seg) in segments.iter().enumerate() {
        let seg = seg.as_object().ok_or_else(|| bad(format!("segment {k} is not an object")))?;
        for key in seg.keys() {
            if !SEGMENT_KEYS.contains(&key.as_str()) {
                return Err(bad(format!("segment {k} has forbidden key '{key}'")));
            }
        }
        for key in SEGMENT_KEYS {
            if !seg.contains_key(key) {
                return Err(bad(format!("segment {k} lacks '{key}'")));
            }
        }
        let gammas = seg["gamma"]
            .as_array()
            .ok_or_else(|| bad(format!("segment {k} gamma is not an array")))?;
        for g in gammas {
            let (i, j) = match (g.get("i").and_then(|v| v.as_u64()), g.get("j").and_then(|v| v.as_u64())) {
                (Some(i), Some(j)) => (i.min(j), i.max(j)),
                _ => return Err(bad(format!("segment {k} has a malformed tunneling entry"))),
            };
            if !pairs.contains(&(i, j)) {
                return Err(bad(format!("segment {k} tunnels between unpaired levels {i} and {j}")));
            }
        }
    }
    Ok(())
}

// Compilation

/// Gates the scheduler handles directly.
#[derive(Clone, Debug)]
enum Native {
    Local(usize, M2),
    /// `e^{i theta x_q x_{q+1}}`.
    Coupled(usize, f64),
}

fn hadamard() -> M2 {
    OneQubitGate::H.matrix()
}

fn phase_gate(theta: f64) -> M2 {
    M2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, theta))
}

/// CNOT(control -> target) on neighbours, as H_t CZ H_t.
fn push_cnot(ops: &mut Vec<Native>, control: usize, target: usize) {
    ops.push(Native::Local(target, hadamard()));
    ops.push(Native::Coupled(control.min(target), PI));
    ops.push(Native::Local(target, hadamard()));
}

fn push_swap(ops: &mut Vec<Native>, q: usize) {
    push_cnot(ops, q, q + 1);
    push_cnot(ops, q + 1, q);
    push_cnot(ops, q, q + 1);
}

fn lower(circuit: &Circuit) -> Vec<Native> {
    let mut ops = Vec::new();
    for gate in circuit.gates() {
        match gate {
            Gate::One { target, gate } => ops.push(Native::Local(*target, gate.matrix())),
            Gate::Diag { a, b, phases } => {
                let (a, b) = (*a, *b);
                // e^{i phi_xy} = e^{i phi_00} e^{i u x} e^{i v y} e^{i theta x y}
                ops.push(Native::Local(a, phase_gate(phases[2] - phases[0])));
                ops.push(Native::Local(b, phase_gate(phases[1] - phases[0])));
                let theta = Gate::interaction_angle(phases);
                if wrap(theta).abs() < 1e-15 {
                    continue;
                }
                let (lo, hi) = (a.min(b), a.max(b));
                // walk `hi` down next to `lo`, interact, walk back
                let swaps: Vec<usize> = (lo + 1..hi).rev().collect();
                for &q in &swaps {
                    push_swap(&mut ops, q);
                }
                ops.push(Native::Coupled(lo, theta));
                for &q in swaps.iter().rev() {
                    push_swap(&mut ops, q);
                }
            }
        }
    }
    ops
}

fn is_scalar(u: &M2) -> bool {
    (u - M2::identity() * u[(0, 0)]).norm() < 1e-14
}

/// Flip pattern for refocusing every nonzero coupling except `target`:
/// neighbours across a refocused coupling get opposite flips, across the
/// target the same flip.
fn flip_set(couplings: &[f64], target: usize, n: usize) -> Vec<bool> {
    let mut flips = vec![false; n];
    for p in target + 1..n - 1 {
        flips[p + 1] = if couplings[p] != 0.0 { !flips[p] } else { false };
    }
    for p in (0..target).rev() {
        flips[p] = if couplings[p] != 0.0 { !flips[p + 1] } else { false };
    }
    flips
}

struct Scheduler<'a> {
    enc: &'a ThetaEncoding,
    couplings: Vec<f64>,
    pending: Vec<M2>,
    segments: Vec<Segment>,
}

impl Scheduler<'_> {
    fn flush(&mut self) -> Result<()> {
        let mut spec = HamiltonianSpec::new(self.enc.levels())?;
        for q in 0..self.pending.len() {
            let u = std::mem::replace(&mut self.pending[q], M2::identity());
            if is_scalar(&u) {
                continue;
            }
            let h = hamiltonian_log(&u)?;
            spec = spec.merged(&lift_one_qubit(&h, q, self.enc)?)?;
        }
        if !spec.is_empty() {
            self.segments.push(Segment::new(0.0, &spec)?);
        }
        Ok(())
    }

    fn flip_pulse(&self, flips: &[bool]) -> Result<Segment> {
        let x = hamiltonian_log(&OneQubitGate::X.matrix())?;
        let mut spec = HamiltonianSpec::new(self.enc.levels())?;
        for (q, _) in flips.iter().enumerate().filter(|(_, f)| **f) {
            spec = spec.merged(&lift_one_qubit(&x, q, self.enc)?)?;
        }
        Segment::new(0.0, &spec)
    }

    /// Diagonal energy the fixed couplings deposit on qubit state `x` over time `t`.
    fn coupling_energy(&self, x: usize, t: f64) -> f64 {
        self.couplings
            .iter()
            .enumerate()
            .map(|(p, g)| g * ((x >> p) & (x >> (p + 1)) & 1) as f64)
            .sum::<f64>()
            * t
    }

    fn coupled(&mut self, q: usize, theta: f64) -> Result<()> {
        let g = self.couplings.get(q).copied().unwrap_or(0.0);
        if g == 0.0 {
            return Err(Error::ZeroCoupling { a: q, b: q + 1 });
        }
        let period = TAU / g.abs();
        let t = (-theta / g).rem_euclid(period);
        if t < 1e-12 || period - t < 1e-12 {
            return Ok(());
        }
        self.flush()?;
        let n = self.pending.len();
        let flips = flip_set(&self.couplings, q, n);
        let mask: usize = flips.iter().enumerate().filter(|(_, f)| **f).map(|(p, _)| 1 << p).sum();
        let levels = self.enc.levels();
        if mask == 0 {
            self.segments.push(Segment::wait(levels, t)?);
        } else {
            self.segments.push(Segment::wait(levels, t / 2.0)?);
            self.segments.push(self.flip_pulse(&flips)?);
            self.segments.push(Segment::wait(levels, t / 2.0)?);
            for (p, _) in flips.iter().enumerate().filter(|(_, f)| **f) {
                self.pending[p] = OneQubitGate::X.matrix();
            }
        }

        // residual phase: wanted theta x_q x_{q+1}, got exp(-i E(x))
        let correction = |x: usize| {
            let energy = if mask == 0 {
                self.coupling_energy(x, t)
            } else {
                self.coupling_energy(x, t / 2.0) + self.coupling_energy(x ^ mask, t / 2.0)
            };
            theta * ((x >> q) & (x >> (q + 1)) & 1) as f64 + energy
        };
        let base = correction(0);
        let local: Vec<f64> = (0..n).map(|p| correction(1 << p) - base).collect();
        for x in 0..1usize << n {
            let affine: f64 = local.iter().enumerate().filter(|(p, _)| (x >> p) & 1 == 1).map(|(_, u)| u).sum();
            if wrap(correction(x) - base - affine).abs() > 1e-9 {
                return Err(Error::InvalidSchedule(format!(
                    "refocusing left a non-local phase on state {x:b}"
                )));
            }
        }
        for (p, u) in local.into_iter().enumerate() {
            if wrap(u) != 0.0 {
                self.pending[p] = phase_gate(u) * self.pending[p];
            }
        }
        Ok(())
    }
}

/// Compile a circuit into field and tunneling controls around a fixed interaction.
pub fn compile_circuit(circuit: &Circuit, fixed: &FixedInteraction, enc: &ThetaEncoding) -> Result<PulseSchedule> {
    if circuit.qubits() != enc.qubits() {
        return Err(Error::DimensionMismatch {
            expected: enc.qubits(),
            found: circuit.qubits(),
        });
    }
    fixed.validate(enc)?;
    let n = enc.qubits();
    let mut sched = Scheduler {
        enc,
        couplings: (0..n.saturating_sub(1)).map(|q| fixed.coupling(enc, q)).collect(),
        pending: vec![M2::identity(); n],
        segments: Vec::new(),
    };
    for op in lower(circuit) {
        match op {
            Native::Local(q, u) => sched.pending[q] = u * sched.pending[q],
            Native::Coupled(q, theta) => sched.coupled(q, theta)?,
        }
    }
    sched.flush()?;
    PulseSchedule::new(enc.clone(), fixed.clone(), sched.segments)
}

/// Compile many circuits, possibly concurrently.
pub fn compile_batch(
    circuits: &[Circuit],
    fixed: &FixedInteraction,
    enc: &ThetaEncoding,
    mode: ExecMode,
) -> Vec<Result<PulseSchedule>> {
    exec::map_coarse(mode, circuits, |c| compile_circuit(c, fixed, enc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{embed_diagonal, embed_one_qubit};
    use crate::hamiltonian::assemble;

    fn log_roundtrip(u: &M2) -> f64 {
        let h = hamiltonian_log(u).unwrap();
        (h.exp() - u).norm()
    }

    #[test]
    fn log_examples() {
        let h = hamiltonian_log(&M2::identity()).unwrap();
        assert!(h.d1.abs() < 1e-15 && h.d2.abs() < 1e-15 && h.d.norm() < 1e-15);

        let z = OneQubitGate::Z.matrix();
        let h = hamiltonian_log(&z).unwrap();
        assert!(h.d1.abs() < 1e-15);
        assert!((h.d2 - PI).abs() < 1e-15);
        assert!(h.d.norm() < 1e-15);
        assert!(log_roundtrip(&z) < 1e-12);

        let x = OneQubitGate::X.matrix();
        let h = hamiltonian_log(&x).unwrap();
        assert!((h.d1 - PI / 2.0).abs() < 1e-15);
        assert!((h.d2 - PI / 2.0).abs() < 1e-15);
        assert!((h.d - c(-PI / 2.0, 0.0)).norm() < 1e-15);
        assert!(log_roundtrip(&x) < 1e-12);

        assert!(matches!(
            hamiltonian_log(&(M2::identity() * c(2.0, 0.0))),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn log_near_degenerate() {
        for eps in [1e-3, 1e-7, 1e-10, 1e-13] {
            let h = OneQubitHamiltonian::new(PI - eps, PI, c(eps, eps));
            assert!(log_roundtrip(&h.exp()) < 1e-12, "eps {eps}");
            let h = OneQubitHamiltonian::new(0.3, 0.3 + eps, c(0.0, eps));
            assert!(log_roundtrip(&h.exp()) < 1e-12, "eps {eps}");
        }
        let minus = M2::identity() * c(-1.0, 0.0);
        let h = hamiltonian_log(&minus).unwrap();
        assert!((h.d1 - PI).abs() < 1e-15 && (h.d2 - PI).abs() < 1e-15);
    }

    #[test]
    fn lift_examples() {
        let enc = ThetaEncoding::canonical(1).unwrap();
        assert!(lift_one_qubit(&OneQubitHamiltonian::default(), 0, &enc).unwrap().is_empty());

        let h = OneQubitHamiltonian::new(0.0, PI, c(0.0, 0.0));
        let spec = lift_one_qubit(&h, 0, &enc).unwrap();
        // upper level 1' is position 1
        assert_eq!(spec.alpha(), &[0.0, PI]);
        let fock = unitary(&assemble(&spec).unwrap(), 1.0).unwrap();
        let qubit = embed_one_qubit(&h.exp(), 0, 1).unwrap();
        assert!(verify_diagram(&qubit, &fock, &enc).unwrap() < 1e-12);

        let enc2 = ThetaEncoding::canonical(2).unwrap();
        let h = OneQubitHamiltonian::new(0.0, 0.0, c(PI / 2.0, 0.0));
        let spec = lift_one_qubit(&h, 1, &enc2).unwrap();
        let sign = f64::from(tunneling_sign(1, &enc2).unwrap());
        assert_eq!(spec.gamma().get(&(0, 3)), Some(&c(sign * PI / 2.0, 0.0)));
        let fock = unitary(&assemble(&spec).unwrap(), 1.0).unwrap();
        let qubit = embed_one_qubit(&h.exp(), 1, 2).unwrap();
        assert!(verify_diagram(&qubit, &fock, &enc2).unwrap() < 1e-12);
    }

    #[test]
    fn diagonal_lift_examples() {
        let enc = ThetaEncoding::canonical(2).unwrap();
        let cz = [0.0, 0.0, 0.0, PI];
        let lift = lift_diagonal(&cz, (0, 1), &enc).unwrap();
        let fock = unitary(&assemble(&lift.spec).unwrap(), 1.0).unwrap();
        let qubit = embed_diagonal(&cz, 0, 1, 2).unwrap().scale(Complex64::from_polar(1.0, -lift.global_phase));
        assert!(verify_diagram(&qubit, &fock, &enc).unwrap() < 1e-12);

        // a single fixed-style term does the same job up to global phase
        let mut single = HamiltonianSpec::new(4).unwrap();
        single.add_beta(2, 3, PI).unwrap();
        let fock = unitary(&assemble(&single).unwrap(), 1.0).unwrap();
        let qubit = embed_diagonal(&cz, 0, 1, 2).unwrap();
        assert!(verify_diagram(&qubit, &fock, &enc).unwrap() < 1e-12);

        let zero = lift_diagonal(&[0.0; 4], (0, 1), &enc).unwrap();
        assert!(zero.spec.is_empty());
        assert_eq!(zero.global_phase, 0.0);

        let flat = lift_diagonal(&[0.4; 4], (1, 0), &enc).unwrap();
        assert!(flat.spec.is_empty());
        assert!((flat.global_phase - 0.4).abs() < 1e-15);
    }

    #[test]
    fn diagram_detects_mismatch() {
        let enc = ThetaEncoding::canonical(1).unwrap();
        let id_q = Operator::identity(1).unwrap();
        let id_f = Operator::identity(2).unwrap();
        assert_eq!(verify_diagram(&id_q, &id_f, &enc).unwrap(), 0.0);

        let z = hamiltonian_log(&OneQubitGate::Z.matrix()).unwrap();
        let fock_z = unitary(&assemble(&lift_one_qubit(&z, 0, &enc).unwrap()).unwrap(), 1.0).unwrap();
        let x = embed_one_qubit(&OneQubitGate::X.matrix(), 0, 1).unwrap();
        assert!(verify_diagram(&x, &fock_z, &enc).unwrap() >= 1.0);
        assert!(verify_diagram(&id_f, &fock_z, &enc).is_err());
    }

    #[test]
    fn fixed_interaction_topology() {
        let enc = ThetaEncoding::canonical(3).unwrap();
        let nn = FixedInteraction::nearest_neighbor(&enc, 1.0).unwrap();
        assert_eq!(nn.coupled_qubits(&enc).unwrap(), vec![(0, 1), (1, 2)]);
        assert_eq!(nn.coupling(&enc, 1), 1.0);

        // upper levels of qubits 0 and 2 are not neighbours
        let far = FixedInteraction::new(6, [(3, 5, 1.0)]).unwrap();
        assert!(matches!(far.validate(&enc), Err(Error::UnsupportedTopology(_))));
        let lower = FixedInteraction::new(6, [(1, 2, 1.0)]).unwrap();
        assert!(lower.validate(&enc).is_err());
    }

    #[test]
    fn flip_sets() {
        // chain of four, target between 1 and 2
        assert_eq!(flip_set(&[1.0, 1.0, 1.0], 1, 4), vec![true, false, false, true]);
        assert_eq!(flip_set(&[1.0, 1.0], 0, 3), vec![false, false, true]);
        assert_eq!(flip_set(&[1.0], 0, 2), vec![false, false]);
        assert_eq!(flip_set(&[1.0, 0.0, 1.0], 0, 4), vec![false, false, false, true]);
    }

    #[test]
    fn segment_rejects_beta() {
        let mut spec = HamiltonianSpec::new(2).unwrap();
        spec.add_beta(0, 1, 1.0).unwrap();
        assert!(Segment::new(1.0, &spec).is_err());
        assert!(Segment::wait(2, -1.0).is_err());
    }

    #[test]
    fn schema_rejects_beta_controls() {
        let good = r#"{"header": {"levels": 2, "pairs": [[0, 1]], "fixed_beta": []},
                       "segments": [{"duration": 0.0, "alpha": [0.0, 1.0], "gamma": [{"i": 0, "j": 1, "re": 1.0, "im": 0.0}]}]}"#;
        assert!(PulseSchedule::from_json(good).is_ok());
        let with_beta = r#"{"header": {"levels": 2, "pairs": [[0, 1]], "fixed_beta": []},
                       "segments": [{"duration": 1.0, "alpha": [0.0, 0.0], "gamma": [], "beta": [{"i": 0, "j": 1, "value": 1.0}]}]}"#;
        assert!(PulseSchedule::from_json(with_beta).is_err());
        let cross = r#"{"header": {"levels": 4, "pairs": [[1, 2], [0, 3]], "fixed_beta": []},
                       "segments": [{"duration": 1.0, "alpha": [0.0, 0.0, 0.0, 0.0], "gamma": [{"i": 0, "j": 1, "re": 1.0, "im": 0.0}]}]}"#;
        assert!(PulseSchedule::from_json(cross).is_err());
    }
}
