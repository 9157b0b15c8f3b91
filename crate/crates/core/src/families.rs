//! Sequence family generators: the omega family built from a multiplicative
//! character times a quadratic additive character, the split oscillator
//! system in closed form, its phase-shift extension, and the comparison
//! families (Chu, Alltop cubic, Heisenberg-representation sequences).
//!
//! Enumeration orders are fixed so dumps and reports are reproducible:
//! omega by ascending flat index n, the split system lexicographically by
//! (x, y, b), and the extension by (member index, w).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{mod_inv, reduce_i64, PrimeField};
use crate::seq::{eta, phase_shift, theta, ExactEntry, Sequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Omega,
    SplitOscillator,
    ExtendedSplit,
    Chu,
    AlltopCubic,
    Heisenberg,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 6] = [
        FamilyKind::Omega,
        FamilyKind::SplitOscillator,
        FamilyKind::ExtendedSplit,
        FamilyKind::Chu,
        FamilyKind::AlltopCubic,
        FamilyKind::Heisenberg,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Omega => "omega",
            FamilyKind::SplitOscillator => "split_oscillator",
            FamilyKind::ExtendedSplit => "extended_split",
            FamilyKind::Chu => "chu",
            FamilyKind::AlltopCubic => "alltop_cubic",
            FamilyKind::Heisenberg => "heisenberg",
        }
    }

    /// Smallest modulus the family is defined for.
    pub fn min_p(&self) -> u64 {
        match self {
            FamilyKind::Chu | FamilyKind::Heisenberg => 3,
            _ => 5,
        }
    }

    /// Members carry unit norm by construction.
    pub fn normalized(&self) -> bool {
        matches!(self, FamilyKind::SplitOscillator | FamilyKind::ExtendedSplit)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "omega" => Ok(FamilyKind::Omega),
            "split_oscillator" | "split" => Ok(FamilyKind::SplitOscillator),
            "extended_split" | "extended" => Ok(FamilyKind::ExtendedSplit),
            "chu" => Ok(FamilyKind::Chu),
            "alltop_cubic" | "alltop" => Ok(FamilyKind::AlltopCubic),
            "heisenberg" => Ok(FamilyKind::Heisenberg),
            other => Err(format!(
                "unknown family '{other}' (expected omega, split_oscillator, \
                 extended_split, chu, alltop_cubic, or heisenberg)"
            )),
        }
    }
}

/// Number of members the family has at modulus p.
pub fn family_size(kind: FamilyKind, p: u64) -> u64 {
    match kind {
        FamilyKind::Omega => p * p * (p - 2),
        FamilyKind::SplitOscillator => p * (p - 2) * (p + 1) / 2,
        FamilyKind::ExtendedSplit => p * family_size(FamilyKind::SplitOscillator, p),
        FamilyKind::Chu => p - 1,
        FamilyKind::AlltopCubic => p,
        FamilyKind::Heisenberg => p * p,
    }
}

/// Header record for family dumps and reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub family: FamilyKind,
    pub p: u64,
    pub generator: u64,
    pub size: u64,
    pub normalized: bool,
    pub index_ranges: BTreeMap<String, (u64, u64)>,
}

impl FamilyDescriptor {
    pub fn new(f: &PrimeField, kind: FamilyKind) -> Result<Self, Error> {
        let p = f.p();
        if p < kind.min_p() {
            return Err(Error::PTooSmall { p, min: kind.min_p() });
        }
        let mut index_ranges = BTreeMap::new();
        let mut range = |name: &str, lo: u64, hi: u64| {
            index_ranges.insert(name.to_string(), (lo, hi));
        };
        match kind {
            FamilyKind::Omega => {
                range("n", 0, p * p * (p - 2) - 1);
                range("x", 1, p - 2);
                range("y", 0, p - 1);
                range("z", 0, p - 1);
            }
            FamilyKind::SplitOscillator => {
                range("x", 1, p - 2);
                range("y", 0, p - 1);
                range("b", 0, (p - 1) / 2);
            }
            FamilyKind::ExtendedSplit => {
                range("x", 1, p - 2);
                range("y", 0, p - 1);
                range("b", 0, (p - 1) / 2);
                range("w", 0, p - 1);
            }
            FamilyKind::Chu => range("y", 1, p - 1),
            FamilyKind::AlltopCubic => range("y", 0, p - 1),
            FamilyKind::Heisenberg => {
                range("y", 0, p - 1);
                range("z", 0, p - 1);
            }
        }
        Ok(FamilyDescriptor {
            family: kind,
            p,
            generator: f.generator(),
            size: family_size(kind, p),
            normalized: kind.normalized(),
            index_ranges,
        })
    }
}

fn check_index(name: &str, value: u64, lo: u64, hi: u64) -> Result<(), Error> {
    if value < lo || value > hi {
        return Err(Error::IndexOutOfRange(format!(
            "{name} = {value} not in [{lo}, {hi}]"
        )));
    }
    Ok(())
}

fn require_p(f: &PrimeField, min: u64) -> Result<u64, Error> {
    let p = f.p();
    if p < min {
        return Err(Error::PTooSmall { p, min });
    }
    Ok(p)
}

/// Member n of the omega family: with n = (x-1)p^2 + yp + z, entry i is
/// `theta^(x*log_a i) * eta^(y*i^2 + z*i)` and entry 0 is zero.
pub fn omega_sequence(f: &PrimeField, n: u64) -> Result<Sequence, Error> {
    let p = require_p(f, 5)?;
    check_index("n", n, 0, p * p * (p - 2) - 1)?;
    let x = n / (p * p) + 1;
    let y = n / p % p;
    let z = n % p;
    omega_sequence_xyz(f, x, y, z)
}

/// Same as [`omega_sequence`] with the member named by (x, y, z) directly.
pub fn omega_sequence_xyz(f: &PrimeField, x: u64, y: u64, z: u64) -> Result<Sequence, Error> {
    let p = require_p(f, 5)?;
    check_index("x", x, 1, p - 2)?;
    check_index("y", y, 0, p - 1)?;
    check_index("z", z, 0, p - 1)?;
    let n = (x - 1) * p * p + y * p + z;
    let entries = (0..p)
        .map(|i| {
            if i == 0 {
                Ok(ExactEntry::Zero)
            } else {
                Ok(ExactEntry::Monomial {
                    u: x * f.dlog(i)? % (p - 1),
                    v: (y * (i * i % p) + z * i) % p,
                })
            }
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Sequence::from_exact(
        p,
        1.0,
        entries,
        format!("omega(n={n},x={x},y={y},z={z})"),
    ))
}

/// All p^2(p-2) omega members in ascending n order.
pub fn omega_family(f: &PrimeField) -> Result<impl Iterator<Item = Sequence> + '_, Error> {
    let p = require_p(f, 5)?;
    Ok((0..p * p * (p - 2)).map(move |n| omega_sequence(f, n).expect("n in range")))
}

/// Member (x, y, b) of the split oscillator system, normalized to unit norm.
///
/// For b = 0 the entries are `theta^(x*log_a i) * eta^(y*i^2) / sqrt(p-1)`
/// (zero at i = 0) and the exact form is kept with the norm factored out.
/// For b != 0 each entry is an exponential sum over the multiplicative
/// group, evaluated as a direct O(p) sum per entry so the code stays a
/// transparent transcription of the closed form; the independent check
/// against the operator pipeline lives in the `weil` module.
pub fn split_oscillator_sequence(
    f: &PrimeField,
    x: u64,
    y: u64,
    b: u64,
) -> Result<Sequence, Error> {
    let p = require_p(f, 5)?;
    check_index("x", x, 1, p - 2)?;
    check_index("y", y, 0, p - 1)?;
    check_index("b", b, 0, (p - 1) / 2)?;
    let label = format!("split(x={x},y={y},b={b})");
    if b == 0 {
        let entries = (0..p)
            .map(|i| {
                if i == 0 {
                    Ok(ExactEntry::Zero)
                } else {
                    Ok(ExactEntry::Monomial {
                        u: x * f.dlog(i)? % (p - 1),
                        v: y * (i * i % p) % p,
                    })
                }
            })
            .collect::<Result<Vec<_>, Error>>()?;
        return Ok(Sequence::from_exact(
            p,
            1.0 / ((p - 1) as f64).sqrt(),
            entries,
            label,
        ));
    }
    let inv2b = mod_inv(2 * b % p, p);
    let scale = 1.0 / ((p * (p - 1)) as f64).sqrt();
    let values = (0..p)
        .map(|i| {
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 1..p {
                let diff = reduce_i64(j as i64 - i as i64, p);
                let quad = inv2b * (diff * diff % p) % p;
                sum += theta(p, x * f.dlog(j).expect("j nonzero") % (p - 1))
                    * eta(p, (p - quad) % p);
            }
            sum * eta(p, y * (i * i % p) % p) * scale
        })
        .collect();
    Ok(Sequence::from_values(values, label))
}

/// The whole split oscillator system, lexicographic in (x, y, b).
pub fn split_oscillator_family(
    f: &PrimeField,
) -> Result<impl Iterator<Item = Sequence> + '_, Error> {
    let p = require_p(f, 5)?;
    Ok((1..=p - 2).flat_map(move |x| {
        (0..p).flat_map(move |y| {
            (0..=(p - 1) / 2).map(move |b| {
                split_oscillator_sequence(f, x, y, b).expect("indices in range")
            })
        })
    }))
}

/// Every phase shift of every split-system member, ordered by
/// (member index, w). The w = 0 slice is the split system itself.
pub fn extended_split_family(
    f: &PrimeField,
) -> Result<impl Iterator<Item = Sequence> + '_, Error> {
    let base = split_oscillator_family(f)?;
    let p = f.p();
    Ok(base.flat_map(move |s| {
        (0..p).map(move |w| phase_shift(&s, w).expect("w in range"))
    }))
}

/// Chu sequence: entry i is `eta^(y*i^2)`, y in [1, p-1].
pub fn chu_sequence(f: &PrimeField, y: u64) -> Result<Sequence, Error> {
    let p = f.p();
    check_index("y", y, 1, p - 1)?;
    let entries = (0..p)
        .map(|i| ExactEntry::Monomial { u: 0, v: y * (i * i % p) % p })
        .collect();
    Ok(Sequence::from_exact(p, 1.0, entries, format!("chu(y={y})")))
}

/// Alltop cubic sequence: entry i is `eta^(i^3 + y*i)`, y in [0, p-1].
pub fn alltop_cubic_sequence(f: &PrimeField, y: u64) -> Result<Sequence, Error> {
    let p = require_p(f, 5)?;
    check_index("y", y, 0, p - 1)?;
    let entries = (0..p)
        .map(|i| {
            let cube = i * i % p * i % p;
            ExactEntry::Monomial { u: 0, v: (cube + y * i) % p }
        })
        .collect();
    Ok(Sequence::from_exact(p, 1.0, entries, format!("alltop(y={y})")))
}

/// Heisenberg-representation sequence: entry i is `eta^(y*i^2 + z*i)`.
pub fn heisenberg_sequence(f: &PrimeField, y: u64, z: u64) -> Result<Sequence, Error> {
    let p = f.p();
    check_index("y", y, 0, p - 1)?;
    check_index("z", z, 0, p - 1)?;
    let entries = (0..p)
        .map(|i| ExactEntry::Monomial { u: 0, v: (y * (i * i % p) + z * i) % p })
        .collect();
    Ok(Sequence::from_exact(
        p,
        1.0,
        entries,
        format!("heisenberg(y={y},z={z})"),
    ))
}

/// Stream the family in its canonical enumeration order.
pub fn family_iter<'f>(
    f: &'f PrimeField,
    kind: FamilyKind,
) -> Result<Box<dyn Iterator<Item = Sequence> + 'f>, Error> {
    let p = require_p(f, kind.min_p())?;
    Ok(match kind {
        FamilyKind::Omega => Box::new(omega_family(f)?),
        FamilyKind::SplitOscillator => Box::new(split_oscillator_family(f)?),
        FamilyKind::ExtendedSplit => Box::new(extended_split_family(f)?),
        FamilyKind::Chu => {
            Box::new((1..p).map(move |y| chu_sequence(f, y).expect("y in range")))
        }
        FamilyKind::AlltopCubic => Box::new(
            (0..p).map(move |y| alltop_cubic_sequence(f, y).expect("y in range")),
        ),
        FamilyKind::Heisenberg => Box::new((0..p).flat_map(move |y| {
            (0..p).map(move |z| heisenberg_sequence(f, y, z).expect("indices in range"))
        })),
    })
}

/// Materialize the whole family. Fine at desk-scale p; dumps of large
/// families should prefer [`family_iter`].
pub fn family_members(f: &PrimeField, kind: FamilyKind) -> Result<Vec<Sequence>, Error> {
    Ok(family_iter(f, kind)?.collect())
}

/// The member at a flat enumeration index, without materializing the family.
pub fn family_member_by_index(
    f: &PrimeField,
    kind: FamilyKind,
    idx: u64,
) -> Result<Sequence, Error> {
    let p = require_p(f, kind.min_p())?;
    let size = family_size(kind, p);
    check_index("index", idx, 0, size - 1)?;
    match kind {
        FamilyKind::Omega => omega_sequence(f, idx),
        FamilyKind::SplitOscillator => {
            let per_x = p * ((p - 1) / 2 + 1);
            let per_y = (p - 1) / 2 + 1;
            split_oscillator_sequence(f, idx / per_x + 1, idx / per_y % p, idx % per_y)
        }
        FamilyKind::ExtendedSplit => {
            let base = family_member_by_index(f, FamilyKind::SplitOscillator, idx / p)?;
            phase_shift(&base, idx % p)
        }
        FamilyKind::Chu => chu_sequence(f, idx + 1),
        FamilyKind::AlltopCubic => alltop_cubic_sequence(f, idx),
        FamilyKind::Heisenberg => heisenberg_sequence(f, idx / p, idx % p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{inner_product, is_phase_shift_equiv, EQ_TOL};

    fn f5() -> PrimeField {
        PrimeField::new(5, Some(2)).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= EQ_TOL
    }

    #[test]
    fn omega_golden_members_at_p5() {
        let f = f5();
        let phi0 = omega_sequence(&f, 0).unwrap();
        let expect0 = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            theta(5, 1),
            theta(5, 3),
            theta(5, 2),
        ];
        for (i, &e) in expect0.iter().enumerate() {
            assert!(close(phi0.value(i as u64), e), "phi_0 entry {i}");
        }
        let phi74 = omega_sequence(&f, 74).unwrap();
        let expect74 = [
            Complex64::new(0.0, 0.0),
            eta(5, 3),
            theta(5, 3) * eta(5, 4),
            theta(5, 1) * eta(5, 3),
            theta(5, 2),
        ];
        for (i, &e) in expect74.iter().enumerate() {
            assert!(close(phi74.value(i as u64), e), "phi_74 entry {i}");
        }
        let phi1 = omega_sequence(&f, 1).unwrap();
        let expect1 = [
            Complex64::new(0.0, 0.0),
            eta(5, 1),
            theta(5, 1) * eta(5, 2),
            theta(5, 3) * eta(5, 3),
            theta(5, 2) * eta(5, 4),
        ];
        for (i, &e) in expect1.iter().enumerate() {
            assert!(close(phi1.value(i as u64), e), "phi_1 entry {i}");
        }
    }

    #[test]
    fn omega_family_counts() {
        let f = f5();
        let members: Vec<_> = omega_family(&f).unwrap().collect();
        assert_eq!(members.len(), 75);
        let first = omega_sequence(&f, 0).unwrap();
        assert_eq!(members[0].label(), first.label());
        let f7 = PrimeField::new(7, None).unwrap();
        assert_eq!(omega_family(&f7).unwrap().count(), 245);
        let f3 = PrimeField::new(3, None).unwrap();
        assert!(matches!(
            omega_family(&f3).err(),
            Some(Error::PTooSmall { p: 3, min: 5 })
        ));
        assert!(omega_sequence(&f, 75).is_err());
    }

    #[test]
    fn omega_magnitude_profile() {
        let f = f5();
        for s in omega_family(&f).unwrap() {
            assert!(s.value(0).norm() <= EQ_TOL);
            for i in 1..5 {
                assert!((s.value(i).norm() - 1.0).abs() <= EQ_TOL);
            }
            assert!((inner_product(&s, &s).unwrap().re - 4.0).abs() <= EQ_TOL);
        }
    }

    #[test]
    fn split_b0_matches_scaled_omega_slice() {
        let f = f5();
        let s = split_oscillator_sequence(&f, 1, 0, 0).unwrap();
        let phi0 = omega_sequence(&f, 0).unwrap();
        for i in 0..5 {
            assert!(close(s.value(i), phi0.value(i) * 0.5));
        }
        assert!(s.exact().is_some());
        assert!((s.exact().unwrap().scale - 0.5).abs() < 1e-15);
    }

    #[test]
    fn split_members_have_unit_norm() {
        let f = f5();
        for s in split_oscillator_family(&f).unwrap() {
            assert!(
                (s.norm() - 1.0).abs() <= EQ_TOL,
                "{} has norm {}",
                s.label(),
                s.norm()
            );
        }
        assert_eq!(split_oscillator_family(&f).unwrap().count(), 45);
    }

    #[test]
    fn extension_covers_base_family() {
        let f = f5();
        let ext: Vec<_> = extended_split_family(&f).unwrap().collect();
        assert_eq!(ext.len(), 225);
        let base: Vec<_> = split_oscillator_family(&f).unwrap().collect();
        // w = 0 slice reproduces the base family in order.
        for (k, b) in base.iter().enumerate() {
            let e = &ext[k * 5];
            for i in 0..5 {
                assert!(close(e.value(i), b.value(i)));
            }
        }
        for s in &ext {
            assert!((s.norm() - 1.0).abs() <= EQ_TOL);
        }
    }

    #[test]
    fn chu_golden_rows() {
        let f = f5();
        let y1 = chu_sequence(&f, 1).unwrap();
        let expect1 = [0u64, 1, 4, 4, 1];
        for (i, &v) in expect1.iter().enumerate() {
            assert!(close(y1.value(i as u64), eta(5, v)));
        }
        let y2 = chu_sequence(&f, 2).unwrap();
        let expect2 = [0u64, 2, 3, 3, 2];
        for (i, &v) in expect2.iter().enumerate() {
            assert!(close(y2.value(i as u64), eta(5, v)));
        }
        assert!(chu_sequence(&f, 0).is_err());
        for i in 0..5 {
            assert!((y1.value(i).norm() - 1.0).abs() <= EQ_TOL);
        }
    }

    #[test]
    fn alltop_golden_row() {
        let f = f5();
        let y0 = alltop_cubic_sequence(&f, 0).unwrap();
        let expect = [0u64, 1, 3, 2, 4];
        for (i, &v) in expect.iter().enumerate() {
            assert!(close(y0.value(i as u64), eta(5, v)));
        }
        assert!(close(y0.value(2), eta(5, 3)));
    }

    #[test]
    fn heisenberg_rows_and_overlaps() {
        let f = f5();
        let h00 = heisenberg_sequence(&f, 0, 0).unwrap();
        for i in 0..5 {
            assert!(close(h00.value(i), Complex64::new(1.0, 0.0)));
        }
        let h01 = heisenberg_sequence(&f, 0, 1).unwrap();
        for i in 0..5 {
            assert!(close(h01.value(i), eta(5, i)));
        }
        for y in 1..5 {
            let h = heisenberg_sequence(&f, y, 0).unwrap();
            let c = chu_sequence(&f, y).unwrap();
            for i in 0..5 {
                assert!(close(h.value(i), c.value(i)));
            }
        }
    }

    #[test]
    fn family_sizes_and_flat_indexing() {
        let f = PrimeField::new(7, None).unwrap();
        for kind in FamilyKind::ALL {
            let members = family_members(&f, kind).unwrap();
            assert_eq!(members.len() as u64, family_size(kind, 7), "{kind}");
            for (i, m) in members.iter().enumerate() {
                let by_index = family_member_by_index(&f, kind, i as u64).unwrap();
                assert_eq!(by_index.label(), m.label(), "{kind} index {i}");
            }
        }
    }

    #[test]
    fn descriptor_reports_ranges() {
        let f = f5();
        let d = FamilyDescriptor::new(&f, FamilyKind::Omega).unwrap();
        assert_eq!(d.size, 75);
        assert!(!d.normalized);
        assert_eq!(d.index_ranges["n"], (0, 74));
        assert_eq!(d.index_ranges["x"], (1, 3));
        let d = FamilyDescriptor::new(&f, FamilyKind::SplitOscillator).unwrap();
        assert_eq!(d.size, 45);
        assert!(d.normalized);
    }

    #[test]
    fn omega_phase_class_structure_p5() {
        // Same (x, y) differing in z: phase-shift equivalent with w = z'-z.
        // Different (x, y): phase-shift distinct. Exhaustive at p = 5; the
        // p = 7 sweep lives in the integration tests.
        let f = f5();
        let members: Vec<_> = omega_family(&f).unwrap().collect();
        for a in 0..members.len() {
            for b in 0..members.len() {
                let expect = if a / 5 == b / 5 {
                    Some(((b as u64 % 5) + 5 - (a as u64 % 5)) % 5)
                } else {
                    None
                };
                assert_eq!(
                    is_phase_shift_equiv(&members[a], &members[b]).unwrap(),
                    expect,
                    "members {a} and {b}"
                );
            }
        }
    }
}
