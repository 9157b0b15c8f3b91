//! Structural relations between the families: phase-class structure of the
//! omega family (validating the structural pair shortcut), the bridge from
//! the omega family to the normalized split system, transform-closure of the
//! measured bounds, and a couple of proptest invariants.

use proptest::prelude::*;

use seqlab_core::analysis::{
    ambiguity_surface, phase_classes, spectrum_max, time_shift_class_count, verify_family_with,
    CheckMode, PairMode, VerifySpec,
};
use seqlab_core::families::{
    family_members, omega_sequence, split_oscillator_sequence, FamilyKind,
};
use seqlab_core::field::PrimeField;
use seqlab_core::seq::{
    fourier, is_phase_shift_equiv, phase_shift, random_sequence, Sequence, SequenceJson, UnitaryOp,
};

const TOL: f64 = 1e-9;

#[test]
fn omega_phase_classes_match_generic_test_at_p7() {
    // The structural shortcut (same (x, y) block of p members) must agree
    // with the generic fit-and-validate test on every pair. p = 5 runs in
    // the unit tests; this covers p = 7 exhaustively.
    let f = PrimeField::new(7, None).unwrap();
    let members = family_members(&f, FamilyKind::Omega).unwrap();
    let classes = phase_classes(FamilyKind::Omega, 7, &members).unwrap();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let generic = is_phase_shift_equiv(&members[i], &members[j]).unwrap();
            assert_eq!(
                generic.is_some(),
                classes[i] == classes[j],
                "pair ({i}, {j})"
            );
            if let Some(w) = generic {
                // Same (x, y): the shift is the z difference.
                let expect = ((j as u64 % 7) + 7 - (i as u64 % 7)) % 7;
                assert_eq!(w, expect);
            }
        }
    }
}

#[test]
fn omega_is_scaled_phase_shifted_split_slice() {
    // phi_(x,y,z) = sqrt(p-1) * M_z(split(x, y, 0)), exhaustively at p = 5.
    let f = PrimeField::new(5, Some(2)).unwrap();
    let scale = 4f64.sqrt();
    for x in 1..=3u64 {
        for y in 0..5u64 {
            let base = split_oscillator_sequence(&f, x, y, 0).unwrap();
            for z in 0..5u64 {
                let omega = omega_sequence(&f, (x - 1) * 25 + y * 5 + z).unwrap();
                let shifted = phase_shift(&base, z).unwrap();
                for i in 0..5 {
                    assert!(
                        (omega.value(i) - shifted.value(i) * scale).norm() <= TOL,
                        "(x,y,z)=({x},{y},{z}), entry {i}"
                    );
                }
            }
        }
    }
}

#[test]
fn omega_time_shift_classes_are_all_distinct() {
    for p in [5u64, 7] {
        let f = PrimeField::new(p, None).unwrap();
        let members = family_members(&f, FamilyKind::Omega).unwrap();
        assert_eq!(
            time_shift_class_count(&members).unwrap(),
            p * p * (p - 2),
            "p = {p}"
        );
    }
}

#[test]
fn transform_closure_of_omega_bounds_at_p5() {
    // The transformed family {F(phi)} obeys the same (2 sqrt p, 4 sqrt p)
    // ambiguity bounds, with pair distinctness inherited from the originals.
    let f = PrimeField::new(5, Some(2)).unwrap();
    let members = family_members(&f, FamilyKind::Omega).unwrap();
    let transformed: Vec<Sequence> = members.iter().map(fourier).collect();
    let auto_bound = 2.0 * 5f64.sqrt() + 1e-6;
    let cross_bound = 4.0 * 5f64.sqrt() + 1e-6;
    for t in &transformed {
        let s = ambiguity_surface(t, t, true).unwrap();
        assert!(s.peak.magnitude <= auto_bound, "{}", t.label());
    }
    for i in 0..transformed.len() {
        for j in i + 1..transformed.len() {
            if i / 5 == j / 5 {
                continue; // phase-shift-equivalent originals
            }
            let s = ambiguity_surface(&transformed[i], &transformed[j], true).unwrap();
            assert!(
                s.peak.magnitude <= cross_bound,
                "transformed pair ({i}, {j}) reaches {}",
                s.peak.magnitude
            );
        }
    }
}

#[test]
fn split_family_bounds_hold_under_extension_at_p5() {
    // Phase-shifting every member leaves the measured maxima within the
    // same refined bounds as the base split system.
    let f = PrimeField::new(5, Some(2)).unwrap();
    let p = 5f64;
    let spec = VerifySpec {
        auto: CheckMode::Bound(2.0 * p.sqrt() / (p - 1.0)),
        cross: CheckMode::Bound(4.0 * p.sqrt() / (p - 1.0)),
        ft: CheckMode::Skip,
        count_time_shift_classes: false,
        pair_mode: PairMode::Exhaustive,
    };
    let report = verify_family_with(&f, FamilyKind::ExtendedSplit, &spec).unwrap();
    assert!(report.pass, "{:#?}", report.checks);
    assert_eq!(report.family_size, 225);
}

#[test]
fn split_spectrum_stays_in_system_scale() {
    // Members are unit norm; their spectra stay below 2/sqrt(p).
    for p in [5u64, 7] {
        let f = PrimeField::new(p, None).unwrap();
        for s in family_members(&f, FamilyKind::SplitOscillator).unwrap() {
            assert!(
                spectrum_max(&s) <= 2.0 / (p as f64).sqrt() + 1e-6,
                "{} at p={p}",
                s.label()
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_operators_are_unitary(seed in any::<u64>(), p_idx in 0usize..3) {
        let p = [5u64, 7, 11][p_idx];
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        use rand::{Rng, SeedableRng};
        let s = random_sequence(p, &mut rng);
        let ops = [
            UnitaryOp::TimeShift(rng.random_range(0..p)),
            UnitaryOp::PhaseShift(rng.random_range(0..p)),
            UnitaryOp::Fourier,
            UnitaryOp::Chirp(rng.random_range(0..p)),
            UnitaryOp::Scale(rng.random_range(1..p)),
            UnitaryOp::Heisenberg {
                t: rng.random_range(0..p),
                w: rng.random_range(0..p),
                z: rng.random_range(0..p),
            },
        ];
        for op in ops {
            let out = op.apply(&s).unwrap();
            prop_assert!((out.norm() - s.norm()).abs() <= 1e-9 * s.norm().max(1.0));
        }
    }

    #[test]
    fn prop_sequence_json_round_trips(seed in any::<u64>(), p_idx in 0usize..3) {
        let p = [5u64, 7, 11][p_idx];
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let s = random_sequence(p, &mut rng);
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let parsed: SequenceJson = serde_json::from_str(&text).unwrap();
        let back = Sequence::from_json(&parsed).unwrap();
        for i in 0..p {
            prop_assert_eq!(back.value(i), s.value(i));
        }
    }

    #[test]
    fn prop_fast_ambiguity_matches_naive(seed in any::<u64>(), p_idx in 0usize..2) {
        let p = [5u64, 7][p_idx];
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let a = random_sequence(p, &mut rng);
        let b = random_sequence(p, &mut rng);
        let fast = ambiguity_surface(&a, &b, true).unwrap();
        let naive = ambiguity_surface(&a, &b, false).unwrap();
        for t in 0..p {
            for w in 0..p {
                prop_assert!((fast.value(t, w) - naive.value(t, w)).norm() <= 1e-9);
            }
        }
    }
}
