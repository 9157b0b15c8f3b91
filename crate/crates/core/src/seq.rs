//! Period-p sequences and the unitary operators acting on them: time shift,
//! phase shift, Fourier transform, chirp, scaling, and the Heisenberg
//! operator, plus shift-equivalence and scalar-multiple tests.
//!
//! Sequences carry double-precision values and, where every entry is a
//! monomial `theta^u * eta^v` in the (p-1)th and pth roots of unity, an
//! exact symbolic form alongside. The exact form makes equivalence-class
//! counting immune to floating-point ambiguity.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{legendre_symbol, mod_inv};

/// Absolute per-entry tolerance for numeric equivalence tests.
pub const EQ_TOL: f64 = 1e-9;

/// Tolerance binding the exact form to the numeric values.
pub const EXACT_TOL: f64 = 1e-12;

/// `exp(2*pi*i * (k mod order) / order)`, evaluated directly per exponent.
/// Never computed by repeated multiplication, so there is no drift.
pub fn unit_root(order: u64, k: u64) -> Complex64 {
    let k = k % order;
    let angle = 2.0 * PI * k as f64 / order as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// The (p-1)th primitive root of unity raised to `u`.
pub fn theta(p: u64, u: u64) -> Complex64 {
    unit_root(p - 1, u)
}

/// The pth primitive root of unity raised to `v`.
pub fn eta(p: u64, v: u64) -> Complex64 {
    unit_root(p, v)
}

/// One symbolic entry: zero, or `theta^u * eta^v` with exponents reduced
/// mod p-1 and mod p. The (u, v) representation of a nonzero value is
/// unique because gcd(p-1, p) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExactEntry {
    Zero,
    Monomial { u: u64, v: u64 },
}

/// Symbolic form of a whole sequence: a global real scale factor (1 for
/// unnormalized families, 1/sqrt(p-1) and friends for normalized ones)
/// times one monomial or zero per entry.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactForm {
    pub scale: f64,
    pub entries: Vec<ExactEntry>,
}

impl ExactEntry {
    pub fn value(&self, p: u64) -> Complex64 {
        match *self {
            ExactEntry::Zero => Complex64::new(0.0, 0.0),
            ExactEntry::Monomial { u, v } => theta(p, u) * eta(p, v),
        }
    }
}

/// A period-p complex sequence.
#[derive(Clone, Debug)]
pub struct Sequence {
    p: u64,
    values: Vec<Complex64>,
    exact: Option<ExactForm>,
    label: String,
}

impl Sequence {
    /// Wrap raw values; the period is the length.
    pub fn from_values(values: Vec<Complex64>, label: impl Into<String>) -> Self {
        Sequence {
            p: values.len() as u64,
            values,
            exact: None,
            label: label.into(),
        }
    }

    /// Build a sequence from its exact form; values are derived from it.
    pub fn from_exact(
        p: u64,
        scale: f64,
        entries: Vec<ExactEntry>,
        label: impl Into<String>,
    ) -> Self {
        debug_assert_eq!(entries.len() as u64, p);
        let values = entries.iter().map(|e| e.value(p) * scale).collect();
        Sequence {
            p,
            values,
            exact: Some(ExactForm { scale, entries }),
            label: label.into(),
        }
    }

    /// The basis sequence with a single 1 at index `i`.
    pub fn delta(p: u64, i: u64) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); p as usize];
        values[(i % p) as usize] = Complex64::new(1.0, 0.0);
        Sequence {
            p,
            values,
            exact: None,
            label: format!("delta_{}", i % p),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, i: u64) -> Complex64 {
        self.values[(i % self.p) as usize]
    }

    pub fn exact(&self) -> Option<&ExactForm> {
        self.exact.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Serialization DTO; see [`SequenceJson`] for the wire layout.
    pub fn to_json(&self) -> SequenceJson {
        SequenceJson {
            p: self.p,
            label: self.label.clone(),
            values: self.values.iter().map(|v| (v.re, v.im)).collect(),
            exact: self.exact.as_ref().map(|e| {
                e.entries
                    .iter()
                    .map(|entry| match *entry {
                        ExactEntry::Zero => None,
                        ExactEntry::Monomial { u, v } => Some((u, v)),
                    })
                    .collect()
            }),
            exact_scale: self.exact.as_ref().and_then(|e| {
                if e.scale == 1.0 {
                    None
                } else {
                    Some(e.scale)
                }
            }),
        }
    }

    pub fn from_json(json: &SequenceJson) -> Result<Self, Error> {
        if json.values.len() as u64 != json.p {
            return Err(Error::InvalidSequence(format!(
                "expected {} values, found {}",
                json.p,
                json.values.len()
            )));
        }
        let values: Vec<Complex64> = json
            .values
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect();
        let exact = match &json.exact {
            None => None,
            Some(entries) => {
                if entries.len() as u64 != json.p {
                    return Err(Error::InvalidSequence(format!(
                        "expected {} exact entries, found {}",
                        json.p,
                        entries.len()
                    )));
                }
                let scale = json.exact_scale.unwrap_or(1.0);
                let entries: Vec<ExactEntry> = entries
                    .iter()
                    .map(|e| match *e {
                        None => ExactEntry::Zero,
                        Some((u, v)) => ExactEntry::Monomial {
                            u: u % (json.p - 1),
                            v: v % json.p,
                        },
                    })
                    .collect();
                for (i, entry) in entries.iter().enumerate() {
                    let expect = entry.value(json.p) * scale;
                    if (expect - values[i]).norm() > EXACT_TOL {
                        return Err(Error::InvalidSequence(format!(
                            "exact form disagrees with values at index {i}"
                        )));
                    }
                }
                Some(ExactForm { scale, entries })
            }
        };
        Ok(Sequence {
            p: json.p,
            values,
            exact,
            label: json.label.clone(),
        })
    }
}

/// JSON layout for one sequence:
/// `{ "p": 5, "label": "...", "values": [[re, im], ...],
///    "exact": [null | [u, v], ...], "exact_scale": 0.5 }`
/// with `exact` and `exact_scale` present only when applicable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceJson {
    pub p: u64,
    pub label: String,
    pub values: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<Option<(u64, u64)>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_scale: Option<f64>,
}

fn check_periods(a: &Sequence, b: &Sequence) -> Result<u64, Error> {
    if a.p != b.p {
        return Err(Error::PeriodMismatch(a.p, b.p));
    }
    Ok(a.p)
}

fn check_range(name: &str, value: u64, p: u64) -> Result<(), Error> {
    if value >= p {
        return Err(Error::IndexOutOfRange(format!(
            "{name} = {value} not in [0, {}]",
            p - 1
        )));
    }
    Ok(())
}

/// `<phi, psi> = sum_i phi(i) * conj(psi(i))`.
pub fn inner_product(a: &Sequence, b: &Sequence) -> Result<Complex64, Error> {
    check_periods(a, b)?;
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x * y.conj())
        .sum())
}

/// Time shift: `result(i) = phi(i + t)`.
pub fn time_shift(s: &Sequence, t: u64) -> Result<Sequence, Error> {
    let p = s.p;
    check_range("t", t, p)?;
    let values = (0..p).map(|i| s.value(i + t)).collect();
    let exact = s.exact.as_ref().map(|e| ExactForm {
        scale: e.scale,
        entries: (0..p)
            .map(|i| e.entries[((i + t) % p) as usize])
            .collect(),
    });
    Ok(Sequence {
        p,
        values,
        exact,
        label: format!("L_{t}[{}]", s.label),
    })
}

/// Phase shift: `result(i) = eta^(w*i) * phi(i)`.
pub fn phase_shift(s: &Sequence, w: u64) -> Result<Sequence, Error> {
    let p = s.p;
    check_range("w", w, p)?;
    let values = (0..p)
        .map(|i| eta(p, w * i % p) * s.value(i))
        .collect();
    let exact = s.exact.as_ref().map(|e| ExactForm {
        scale: e.scale,
        entries: (0..p)
            .map(|i| match e.entries[i as usize] {
                ExactEntry::Zero => ExactEntry::Zero,
                ExactEntry::Monomial { u, v } => ExactEntry::Monomial {
                    u,
                    v: (v + w * i) % p,
                },
            })
            .collect(),
    });
    Ok(Sequence {
        p,
        values,
        exact,
        label: format!("M_{w}[{}]", s.label),
    })
}

/// Fourier transform: `result(j) = p^(-1/2) * sum_i eta^(j*i) * phi(i)`.
/// The output mixes entries, so the exact form is dropped.
pub fn fourier(s: &Sequence) -> Sequence {
    let p = s.p;
    let table: Vec<Complex64> = (0..p).map(|k| eta(p, k)).collect();
    let scale = 1.0 / (p as f64).sqrt();
    let values = (0..p)
        .map(|j| {
            let sum: Complex64 = (0..p)
                .map(|i| table[(j * i % p) as usize] * s.value(i))
                .sum();
            sum * scale
        })
        .collect();
    Sequence {
        p,
        values,
        exact: None,
        label: format!("F[{}]", s.label),
    }
}

/// Chirp: `result(i) = eta^(-(2^-1) * b * i^2) * phi(i)`.
pub fn chirp(s: &Sequence, b: u64) -> Result<Sequence, Error> {
    let p = s.p;
    check_range("b", b, p)?;
    let half = (p + 1) / 2;
    let exponent = |i: u64| (p - half * b % p * (i * i % p) % p) % p;
    let values = (0..p)
        .map(|i| eta(p, exponent(i)) * s.value(i))
        .collect();
    let exact = s.exact.as_ref().map(|e| ExactForm {
        scale: e.scale,
        entries: (0..p)
            .map(|i| match e.entries[i as usize] {
                ExactEntry::Zero => ExactEntry::Zero,
                ExactEntry::Monomial { u, v } => ExactEntry::Monomial {
                    u,
                    v: (v + exponent(i)) % p,
                },
            })
            .collect(),
    });
    Ok(Sequence {
        p,
        values,
        exact,
        label: format!("N_{b}[{}]", s.label),
    })
}

/// Scaling: `result(i) = legendre(a) * phi(a^-1 * i)`.
pub fn scale(s: &Sequence, a: u64) -> Result<Sequence, Error> {
    let p = s.p;
    check_range("a", a, p)?;
    if a == 0 {
        return Err(Error::ScaleByZero);
    }
    let sign = legendre_symbol(a, p);
    let signf = sign as f64;
    let ainv = mod_inv(a, p);
    let values = (0..p).map(|i| s.value(ainv * i % p) * signf).collect();
    // -1 = theta^((p-1)/2), so the sign folds into the exact exponent.
    let exact = s.exact.as_ref().map(|e| ExactForm {
        scale: e.scale,
        entries: (0..p)
            .map(|i| match e.entries[(ainv * i % p) as usize] {
                ExactEntry::Zero => ExactEntry::Zero,
                ExactEntry::Monomial { u, v } => ExactEntry::Monomial {
                    u: if sign == 1 { u } else { (u + (p - 1) / 2) % (p - 1) },
                    v,
                },
            })
            .collect(),
    });
    Ok(Sequence {
        p,
        values,
        exact,
        label: format!("S_{a}[{}]", s.label),
    })
}

/// Heisenberg operator: `result(i) = eta^(2^-1*t*w + z + w*i) * phi(i + t)`.
pub fn heisenberg(s: &Sequence, t: u64, w: u64, z: u64) -> Result<Sequence, Error> {
    let p = s.p;
    check_range("t", t, p)?;
    check_range("w", w, p)?;
    check_range("z", z, p)?;
    let half = (p + 1) / 2;
    let exponent = |i: u64| (half * t % p * w % p + z + w * i % p) % p;
    let values = (0..p)
        .map(|i| eta(p, exponent(i)) * s.value(i + t))
        .collect();
    let exact = s.exact.as_ref().map(|e| ExactForm {
        scale: e.scale,
        entries: (0..p)
            .map(|i| match e.entries[((i + t) % p) as usize] {
                ExactEntry::Zero => ExactEntry::Zero,
                ExactEntry::Monomial { u, v } => ExactEntry::Monomial {
                    u,
                    v: (v + exponent(i)) % p,
                },
            })
            .collect(),
    });
    Ok(Sequence {
        p,
        values,
        exact,
        label: format!("pi({t},{w},{z})[{}]", s.label),
    })
}

/// Fit the global scalar `c` with `target ~= c * reference`, taken from the
/// largest-magnitude entry of `reference` (ties broken by lowest index),
/// then report the worst absolute residual over all entries.
/// Returns `None` when `reference` is identically zero.
pub fn fit_global_scalar(
    reference: &Sequence,
    target: &Sequence,
) -> Result<Option<(Complex64, f64)>, Error> {
    let p = check_periods(reference, target)?;
    let mut best = 0usize;
    for i in 1..p as usize {
        if reference.values[i].norm() > reference.values[best].norm() {
            best = i;
        }
    }
    if reference.values[best].norm() <= EQ_TOL {
        return Ok(None);
    }
    let c = target.values[best] / reference.values[best];
    let residual = reference
        .values
        .iter()
        .zip(&target.values)
        .map(|(r, t)| (t - c * r).norm())
        .fold(0.0, f64::max);
    Ok(Some((c, residual)))
}

/// If `psi = c * phi` entrywise within `1e-9`, return `c`. With `unit_only`
/// the scalar must additionally lie on the unit circle within `1e-9`.
pub fn is_scalar_multiple(
    phi: &Sequence,
    psi: &Sequence,
    unit_only: bool,
) -> Result<Option<Complex64>, Error> {
    check_periods(phi, psi)?;
    if psi.values.iter().all(|v| v.norm() <= EQ_TOL) {
        // A zero target never has a well-defined scalar here.
        return Ok(None);
    }
    let fitted = fit_global_scalar(phi, psi)?;
    Ok(match fitted {
        Some((c, residual)) if residual <= EQ_TOL => {
            if unit_only && (c.norm() - 1.0).abs() > EQ_TOL {
                None
            } else {
                Some(c)
            }
        }
        _ => None,
    })
}

/// If `psi = M_w phi` entrywise within `1e-9`, return the unique such `w`.
/// The candidate is fit on the nonzero support and validated on all entries.
pub fn is_phase_shift_equiv(phi: &Sequence, psi: &Sequence) -> Result<Option<u64>, Error> {
    let p = check_periods(phi, psi)?;
    // Zero entries must match as zeros.
    for i in 0..p as usize {
        if (phi.values[i].norm() <= EQ_TOL) != (psi.values[i].norm() <= EQ_TOL) {
            return Ok(None);
        }
    }
    // Fit index: largest-magnitude entry with i >= 1 (index 0 carries no
    // phase information since eta^(w*0) = 1).
    let mut fit: Option<usize> = None;
    for i in 1..p as usize {
        if phi.values[i].norm() > EQ_TOL
            && fit.is_none_or(|j| phi.values[i].norm() > phi.values[j].norm())
        {
            fit = Some(i);
        }
    }
    let w = match fit {
        None => 0, // support is contained in {0}; every M_w acts trivially
        Some(i) => {
            let ratio = psi.values[i] / phi.values[i];
            let step = 2.0 * PI / p as f64;
            let k = (ratio.arg() / step).round() as i64;
            let k = k.rem_euclid(p as i64) as u64;
            k * mod_inv(i as u64, p) % p
        }
    };
    let ok = (0..p).all(|i| {
        (psi.value(i) - eta(p, w * i % p) * phi.value(i)).norm() <= EQ_TOL
    });
    Ok(if ok { Some(w) } else { None })
}

/// If `psi = L_t phi`, return such a `t` (the smallest when several fit).
/// When both operands carry exact forms the comparison is symbolic.
pub fn is_time_shift_equiv(phi: &Sequence, psi: &Sequence) -> Result<Option<u64>, Error> {
    let p = check_periods(phi, psi)?;
    if let (Some(ea), Some(eb)) = (&phi.exact, &psi.exact) {
        let scale_ok = (ea.scale - eb.scale).abs() <= EXACT_TOL * ea.scale.abs().max(1.0);
        if !scale_ok {
            return Ok(None);
        }
        for t in 0..p {
            if (0..p).all(|i| eb.entries[i as usize] == ea.entries[((i + t) % p) as usize]) {
                return Ok(Some(t));
            }
        }
        return Ok(None);
    }
    for t in 0..p {
        if (0..p).all(|i| (psi.value(i) - phi.value(i + t)).norm() <= EQ_TOL) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// A unitary operator on period-p sequences, kept as a composition of the
/// primitive generators rather than a materialized matrix.
#[derive(Clone, Debug)]
pub enum UnitaryOp {
    TimeShift(u64),
    PhaseShift(u64),
    Fourier,
    Chirp(u64),
    Scale(u64),
    Heisenberg { t: u64, w: u64, z: u64 },
    /// Operators listed in composition order: the last entry applies first,
    /// matching how `A . B . C` reads.
    Composed(Vec<UnitaryOp>),
}

impl UnitaryOp {
    pub fn apply(&self, s: &Sequence) -> Result<Sequence, Error> {
        match self {
            UnitaryOp::TimeShift(t) => time_shift(s, *t),
            UnitaryOp::PhaseShift(w) => phase_shift(s, *w),
            UnitaryOp::Fourier => Ok(fourier(s)),
            UnitaryOp::Chirp(b) => chirp(s, *b),
            UnitaryOp::Scale(a) => scale(s, *a),
            UnitaryOp::Heisenberg { t, w, z } => heisenberg(s, *t, *w, *z),
            UnitaryOp::Composed(ops) => {
                let mut out = s.clone();
                for op in ops.iter().rev() {
                    out = op.apply(&out)?;
                }
                Ok(out)
            }
        }
    }

    /// Materialize the operator as a p x p matrix, column j the image of
    /// the basis sequence `delta_j`. Intended for operator-level equality
    /// checks at small p.
    pub fn to_matrix(&self, p: u64) -> Result<Vec<Vec<Complex64>>, Error> {
        let mut cols = Vec::with_capacity(p as usize);
        for j in 0..p {
            cols.push(self.apply(&Sequence::delta(p, j))?.values);
        }
        let mut rows = vec![vec![Complex64::new(0.0, 0.0); p as usize]; p as usize];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                rows[i][j] = *v;
            }
        }
        Ok(rows)
    }
}

/// Deterministic pseudo-random sequence with entries uniform in [-1, 1)^2,
/// for operator identity and unitarity checks.
pub fn random_sequence(p: u64, rng: &mut impl rand::Rng) -> Sequence {
    let values = (0..p)
        .map(|_| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
        .collect();
    Sequence::from_values(values, "random")
}
