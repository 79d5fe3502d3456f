use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::hidden::HiddenVar;
use super::SupplementError;

/// Allowed deviation of `sum |a_i|^2` from 1.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Entrywise tolerance for `P = P^dagger`, `P^2 = P` and the realness of
/// `<psi|P|psi>`.
pub const PROJECTOR_TOLERANCE: f64 = 1e-10;
/// Digits of `r1` compared against `p` before giving up.
pub const COMPARISON_LIMIT: u64 = 256;

/// Normalized state vector of dimension at least 2.
#[derive(Clone, Debug, PartialEq)]
pub struct QState {
    amplitudes: Vec<Complex64>,
}

impl QState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, SupplementError> {
        if amplitudes.len() < 2 {
            return Err(SupplementError::Dimension(amplitudes.len()));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm.is_nan() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SupplementError::NotNormalized(norm));
        }
        Ok(QState { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// Projector `P` of a yes/no measurement, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryMeasurement {
    dim: usize,
    entries: Vec<Complex64>,
}

impl BinaryMeasurement {
    pub fn new(rows: Vec<Vec<Complex64>>) -> Result<Self, SupplementError> {
        let dim = rows.len();
        if dim < 2 {
            return Err(SupplementError::Dimension(dim));
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(SupplementError::NotSquare {
                rows: dim,
                row,
                len: r.len(),
            });
        }
        let p = BinaryMeasurement {
            dim,
            entries: rows.into_iter().flatten().collect(),
        };
        let mut herm = 0.0f64;
        let mut idem = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                herm = herm.max((p.at(i, j) - p.at(j, i).conj()).norm());
                let sq: Complex64 = (0..dim).map(|k| p.at(i, k) * p.at(k, j)).sum();
                idem = idem.max((sq - p.at(i, j)).norm());
            }
        }
        if herm.is_nan() || herm > PROJECTOR_TOLERANCE {
            return Err(SupplementError::NotHermitian(herm));
        }
        if idem.is_nan() || idem > PROJECTOR_TOLERANCE {
            return Err(SupplementError::NotIdempotent(idem));
        }
        Ok(p)
    }

    /// Diagonal projector; entries must be 0 or 1.
    pub fn diagonal(diag: &[f64]) -> Result<Self, SupplementError> {
        let n = diag.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Complex64::new(diag[i], 0.0) } else { Complex64::zero() })
                    .collect()
            })
            .collect();
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }
}

/// `<psi|P|psi>`, checked to be real and in `[0, 1]` within tolerance, then
/// clamped to `[0, 1]`.
pub fn born_probability(psi: &QState, meas: &BinaryMeasurement) -> Result<f64, SupplementError> {
    if psi.dim() != meas.dim() {
        return Err(SupplementError::DimensionMismatch {
            state: psi.dim(),
            projector: meas.dim(),
        });
    }
    let a = psi.amplitudes();
    let mut value = Complex64::zero();
    for i in 0..a.len() {
        let row: Complex64 = (0..a.len()).map(|j| meas.at(i, j) * a[j]).sum();
        value += a[i].conj() * row;
    }
    if value.im.abs() > PROJECTOR_TOLERANCE {
        return Err(SupplementError::ComplexExpectation(value.im));
    }
    if !(value.re >= -PROJECTOR_TOLERANCE && value.re <= 1.0 + PROJECTOR_TOLERANCE) {
        return Err(SupplementError::ProbabilityOutOfRange(value.re.to_string()));
    }
    Ok(value.re.clamp(0.0, 1.0))
}

/// Outcome of a binary measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

/// Outcome `+1` iff `r1 <= p`, where `r1` holds the odd-position digits of
/// `r`; the returned variable is `r2`, the even-position digits.
pub fn measure_binary(p: &BigRational, r: HiddenVar) -> Result<(Outcome, HiddenVar), SupplementError> {
    measure_binary_with_limit(p, r, COMPARISON_LIMIT)
}

/// [`measure_binary`] with an explicit bound on the digits of `r1` read.
pub fn measure_binary_with_limit(
    p: &BigRational,
    r: HiddenVar,
    limit: u64,
) -> Result<(Outcome, HiddenVar), SupplementError> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(SupplementError::ProbabilityOutOfRange(p.to_string()));
    }
    let (mut r1, r2) = r.split()?;
    if p.is_one() {
        return Ok((Outcome::Plus, r2));
    }
    let le = r1_le(&mut r1, p, limit)?;
    Ok((if le { Outcome::Plus } else { Outcome::Minus }, r2))
}

/// Exact `r1 <= p` for `p` in `[0, 1)`, reading digits of `r1` lazily.
fn r1_le(r1: &mut HiddenVar, p: &BigRational, limit: u64) -> Result<bool, SupplementError> {
    let one = BigRational::one();
    let mut rest = p.clone();
    let mut k = 0u64;
    loop {
        // A terminating r1 past its prefix equals its prefix value, and so
        // does p once its expansion has ended: the two are equal.
        if r1.is_terminating() && k >= r1.materialized().len() as u64 && rest.is_zero() {
            return Ok(true);
        }
        if k >= limit {
            return Err(SupplementError::Undecided { limit });
        }
        k += 1;
        rest *= BigRational::from_integer(2.into());
        let p_digit = rest >= one;
        if p_digit {
            rest -= &one;
        }
        let r_digit = r1.bit(k)?;
        if r_digit != p_digit {
            return Ok(p_digit);
        }
    }
}

/// Applies [`measure_binary`] to each probability in turn, threading the
/// hidden variable through.
pub fn run_measurement_sequence(
    ps: &[BigRational],
    r0: HiddenVar,
) -> Result<Vec<Outcome>, SupplementError> {
    let mut r = r0;
    let mut out = Vec::with_capacity(ps.len());
    for (step, p) in ps.iter().enumerate() {
        let (o, next) = measure_binary(p, r).map_err(|e| SupplementError::AtStep {
            step,
            source: Box::new(e),
        })?;
        out.push(o);
        r = next;
    }
    Ok(out)
}
