use std::collections::BTreeSet;

use sl2rep::localfield::{self, ExtKind, Frac, QuadExt};
use sl2rep::meataxe;
use sl2rep::packets::*;
use sl2rep::reps::{self, Coeffs, IrrepLabel, Setting};
use sl2rep::Error;

const QS: [u64; 4] = [2, 3, 4, 5];
const CHARS: [u64; 5] = [0, 2, 3, 5, 7];

fn settings() -> impl Iterator<Item = (u64, u64)> {
    QS.into_iter().flat_map(|q| CHARS.into_iter().filter(move |&l| q % l.max(1) != 0 || l == 0).map(move |l| (q, l)))
}

fn dz(q: u64, char_r: u64, label: &str) -> Gl2ReplDescriptor {
    Gl2ReplDescriptor::new(q, char_r, Gl2Variant::DepthZeroSc { label: label.into() })
}

#[test]
fn depth_zero_size_four_at_p_odd() {
    // Cusp(2) at q = 3: theta^(q-1) has order 2
    let r = packet_report(&dz(3, 0, "Cusp(2)")).unwrap();
    assert_eq!(r.size, 4);
    assert_eq!(r.component_group, "Z/2 x Z/2");
    assert_eq!(r.e_pi.degree, 4);
    assert_eq!(r.e_pi.description, "biquadratic");
    assert_eq!(r.e_pi.norm_group.as_ref().unwrap().index, 4);
    assert_eq!(r.cuspidal_class, CuspidalClass::Supercuspidal);
    let g = germ_constant(&dz(3, 0, "Cusp(2)")).unwrap();
    assert_eq!((g.a_pi, g.per_packet()), (-2, "-1/2".to_string()));
    assert!(g.half_integer);
}

#[test]
fn depth_zero_at_p_two_has_size_two() {
    for q in [2, 4] {
        let c = Coeffs::new(q, 0).unwrap();
        for t in c.cusp_exponents() {
            let r = packet_report(&dz(q, 0, &format!("Cusp({t})"))).unwrap();
            assert_eq!((r.size, r.e_pi.description.as_str()), (2, "unramified quadratic"));
        }
    }
}

#[test]
fn cusp0_sizes() {
    let d = |q, l| Gl2ReplDescriptor::new(q, l, Gl2Variant::Cusp0Twist { chi: FChar::TRIVIAL });
    let r = packet_report(&d(3, 2)).unwrap();
    assert_eq!((r.size, r.component_group.as_str()), (4, "1"));
    assert_eq!(r.cuspidal_class, CuspidalClass::CuspidalNotSuper);
    let r = packet_report(&d(5, 3)).unwrap();
    assert_eq!((r.size, r.component_group.as_str()), (2, "Z/2"));
    assert!(matches!(packet_report(&d(5, 0)), Err(Error::InvalidInput(_))));
}

#[test]
fn principal_series_lengths() {
    let gen = FChar::unramified(Frac::new(1, 3));
    assert_eq!(principal_series_length_sl2(&gen, 5, 0).unwrap().length, 1);
    assert_eq!(principal_series_length_sl2(&FChar::q_power(1), 3, 2).unwrap().length, 6);
    assert_eq!(principal_series_length_sl2(&FChar::q_power(-1), 5, 3).unwrap().length, 4);
    assert_eq!(principal_series_length_sl2(&FChar::q_power(1), 5, 0).unwrap().length, 2);
    let eta_e = FChar { tame: Frac::new(1, 2), ..FChar::TRIVIAL };
    let r = principal_series_length_sl2(&eta_e, 5, 0).unwrap();
    assert_eq!((r.length, r.semisimple), (2, true));
    // char 2: the only reducible principal series is ind(1)
    assert_eq!(principal_series_length_sl2(&FChar::TRIVIAL, 3, 2).unwrap().length, 6);
    assert_eq!(principal_series_length_sl2(&FChar::unramified(Frac::new(1, 3)), 5, 2).unwrap().length, 1);
    // unramified eta_E is q^val when q = -1 in R
    assert_eq!(principal_series_length_sl2(&FChar::unramified(Frac::new(1, 2)), 5, 3).unwrap().length, 4);
}

#[test]
fn q_power_comparison_uses_residue_of_q() {
    let c = Coeffs::new(7, 2).unwrap();
    assert!(FChar::TRIVIAL.equals_q_power(&c).unwrap());
    let c = Coeffs::new(7, 3).unwrap();
    assert!(FChar::TRIVIAL.equals_q_power(&c).unwrap());
    let c = Coeffs::new(3, 5).unwrap();
    // 3 has order 4 mod 5: some primitive fourth root equals q or 1/q
    let hits = [1, 3].iter().filter(|&&k| FChar::unramified(Frac::new(k, 4)).equals_q_power(&c).unwrap()).count();
    assert_eq!(hits, 2);
    assert!(!FChar::unramified(Frac::new(1, 2)).equals_q_power(&c).unwrap());
}

#[test]
fn reductions_of_non_cuspidals() {
    use NonCuspidalSl2::*;
    assert_eq!(mod_ell_lengths_noncuspidal(&Steinberg, 3, 2).unwrap(), 5);
    assert_eq!(mod_ell_lengths_noncuspidal(&Steinberg, 5, 3).unwrap(), 3);
    assert_eq!(mod_ell_lengths_noncuspidal(&Steinberg, 5, 7).unwrap(), 1);
    assert_eq!(mod_ell_lengths_noncuspidal(&PiE { ramified: true }, 3, 2).unwrap(), 3);
    assert_eq!(mod_ell_lengths_noncuspidal(&PiE { ramified: false }, 5, 2).unwrap(), 3);
    assert_eq!(mod_ell_lengths_noncuspidal(&PiE { ramified: true }, 5, 3).unwrap(), 1);
    let ps = |eta| PrincipalSeries { eta, integral: true };
    // order 4 at the uniformizer, ell = 2
    assert_eq!(mod_ell_lengths_noncuspidal(&ps(FChar::unramified(Frac::new(1, 4))), 3, 2).unwrap(), 6);
    // ramified quadratic times a character of 3-power order, 3 | q + 1
    let eta = FChar { at_p: Frac::new(1, 3), tame: Frac::new(1, 2), wild_order: 1, qpow: 0 };
    assert_eq!(mod_ell_lengths_noncuspidal(&ps(eta), 5, 3).unwrap(), 2);
    // unramified eta_E times a 3-power character reduces to q^val
    let eta = FChar::unramified(Frac::new(1, 6));
    assert_eq!(mod_ell_lengths_noncuspidal(&ps(eta), 5, 3).unwrap(), 4);
    assert_eq!(mod_ell_lengths_noncuspidal(&ps(FChar::unramified(Frac::new(1, 5))), 7, 3).unwrap(), 1);
    let bad = PrincipalSeries { eta: FChar::unramified(Frac::new(1, 5)), integral: false };
    assert_eq!(mod_ell_lengths_noncuspidal(&bad, 7, 3), Err(Error::NotIntegral));
}

#[test]
fn germ_constants() {
    let ps = Gl2ReplDescriptor::new(5, 0, Gl2Variant::PrincipalSeries { eta: FChar::unramified(Frac::new(1, 3)) });
    assert_eq!(germ_constant(&ps).unwrap().a_pi, 0);
    let st = Gl2ReplDescriptor::new(5, 0, Gl2Variant::SteinbergTwist { chi: FChar::TRIVIAL });
    assert_eq!(germ_constant(&st).unwrap().a_pi, -1);
    let pos = |ramified, d2| Gl2ReplDescriptor::new(3, 0, Gl2Variant::PositiveLevelSc { ramified, depth2: Some(d2), character: None });
    assert_eq!(germ_constant(&pos(false, 4)).unwrap().a_pi, -18);
    assert_eq!(germ_constant(&pos(true, 3)).unwrap().a_pi, -12);
    let ch = Gl2ReplDescriptor::new(5, 0, Gl2Variant::FiniteDimChar { chi: FChar::TRIVIAL });
    assert!(matches!(germ_constant(&ch), Err(Error::InvalidInput(_))));
}

#[test]
fn ramified_positive_level_at_two_is_unsupported() {
    let d = Gl2ReplDescriptor::new(2, 0, Gl2Variant::PositiveLevelSc { ramified: true, depth2: None, character: None });
    assert!(matches!(packet_report(&d), Err(Error::Unsupported(_))));
}

#[test]
fn descriptor_json_round_trip() {
    let json = r#"{"q": 3, "char_r": 0, "variant": "depth_zero_sc", "label": "Cusp(2)"}"#;
    let d: Gl2ReplDescriptor = serde_json::from_str(json).unwrap();
    assert_eq!(d, dz(3, 0, "Cusp(2)"));
    let back: Gl2ReplDescriptor = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
    assert_eq!(back, d);
    let json = r#"{"q": 5, "variant": "principal_series", "eta": {"tame": "1/2"}}"#;
    let d: Gl2ReplDescriptor = serde_json::from_str(json).unwrap();
    assert_eq!(packet_report(&d).unwrap().size, 2);
}

/// Size trichotomy, size 4 only for cuspidals, one size-4 cuspidal class for p odd,
/// and the component group matches the size away from characteristic 2.
#[test]
fn exhaustive_grammar() {
    for (q, l) in settings() {
        let c = Coeffs::new(q, l).unwrap();
        let mut size4 = BTreeSet::new();
        for d in enumerate_descriptors(q, l).unwrap() {
            let r = packet_report(&d).unwrap();
            assert!([1, 2, 4].contains(&r.size), "{d:?}");
            if r.size == 4 {
                assert_ne!(r.cuspidal_class, CuspidalClass::NonCuspidal);
                let key = match &d.variant {
                    Gl2Variant::DepthZeroSc { label } => {
                        depth_zero_twist_class(&label.parse().unwrap(), &c).unwrap().to_string()
                    }
                    Gl2Variant::Cusp0Twist { .. } => "Pi_0".to_string(),
                    Gl2Variant::PositiveLevelSc { .. } if c.p == 2 => "positive level".to_string(),
                    v => panic!("unexpected size 4: {v:?}"),
                };
                size4.insert((key, r.cuspidal_class));
            }
            if l != 2 {
                let expect = ["1", "Z/2", "", "Z/2 x Z/2"][r.size - 1];
                assert_eq!(r.component_group, expect);
            } else {
                assert_eq!(r.component_group, "1");
            }
        }
        if c.p % 2 == 1 {
            assert_eq!(size4.len(), 1, "q={q} l={l}: {size4:?}");
            let want = if l == 2 { CuspidalClass::CuspidalNotSuper } else { CuspidalClass::Supercuspidal };
            assert_eq!(size4.iter().next().unwrap().1, want);
        } else {
            assert!(size4.iter().all(|(k, _)| k == "positive level"));
        }
    }
}

#[test]
fn depth_zero_size_matches_meataxe() {
    for (q, l) in settings() {
        let s = Setting::new(q, l).unwrap();
        for t in s.cusp_exponents() {
            let label = IrrepLabel::Cusp(t);
            let measured = meataxe::restriction_length_measured(&s, &label, 7).unwrap();
            let r = packet_report(&dz(q, l, &label.to_string())).unwrap();
            assert_eq!(r.size, 2 * measured, "q={q} l={l} {label}");
        }
    }
}

/// `lg(sigma-bar|) / lg(sigma|)` in closed form against the meataxe on reduced lattices.
#[test]
fn depth_zero_mod_ell_consistency() {
    for q in QS {
        let s0 = Setting::new(q, 0).unwrap();
        for ell in [2u64, 3, 5, 7].into_iter().filter(|l| q % l != 0) {
            let sl = Setting::new(q, ell).unwrap();
            for t in s0.cusp_exponents() {
                let label = IrrepLabel::Cusp(t);
                let lattice = reps::integral_model(&sl, &label).unwrap();
                let res = reps::restrict_to_sl2(&sl, &lattice).unwrap();
                let reduced = meataxe::composition_factors(&res, 11).unwrap().len();
                let lifted = meataxe::restriction_length_measured(&s0, &label, 11).unwrap();
                assert_eq!(depth_zero_mod_ell_length(&label, q, ell).unwrap(), reduced / lifted, "q={q} l={ell} {label}");
            }
        }
    }
}

#[test]
fn norm_groups_agree_with_local_fields() {
    for p in [3u64, 5, 7] {
        let u2 = localfield::non_residue(p);
        for (ramified, u) in [(false, 1), (true, 1), (true, u2)] {
            let kind = if ramified { ExtKind::Ramified { u } } else { ExtKind::Unramified };
            let ext = QuadExt::new(p, kind, 2).unwrap();
            let character = if ramified {
                ext.characters(2)
                    .into_iter()
                    .find(|x| localfield::galois_conjugate(x) != *x)
                    .map(|x| localfield::CharacterSpec::from_character(&x))
            } else {
                None
            };
            let d = Gl2ReplDescriptor::new(p, 0, Gl2Variant::PositiveLevelSc { ramified, depth2: None, character });
            let r = packet_report(&d).unwrap();
            let oracle = localfield::norm_group_index(&ext).unwrap();
            let mut ours = r.e_pi.norm_group.unwrap().norms;
            let mut theirs = oracle.norms;
            ours.sort();
            theirs.sort();
            assert_eq!(ours, theirs, "p={p} ramified={ramified} u={u}");
        }
    }
}

#[test]
fn positive_level_at_two_uses_x_sigma() {
    let ext = QuadExt::new(2, ExtKind::Unramified, 3).unwrap();
    let mut seen = BTreeSet::new();
    for x in ext.characters(2) {
        let Ok(xs) = localfield::x_sigma(&x) else { continue };
        let d = Gl2ReplDescriptor::new(
            2,
            0,
            Gl2Variant::PositiveLevelSc { ramified: false, depth2: None, character: Some(localfield::CharacterSpec::from_character(&x)) },
        );
        let r = packet_report(&d).unwrap();
        assert_eq!(r.size, xs.size);
        seen.insert(r.size);
    }
    assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![2, 4]);
}
