use std::sync::Arc;

use proptest::prelude::*;
use sl2rep::exactla::Fe;
use sl2rep::groups::{SubgroupHandle, SubgroupKind, M2};
use sl2rep::reps::{
    construct, fixed_vectors, fixed_vectors_by_trace, gelfand_graev, restrict_to_sl2, twist, Coeffs, IrrepLabel,
    Setting,
};
use sl2rep::Error;

enum Shape {
    Scalar(u32),
    Unipotent(u32),
    Split(u32, u32),
    Elliptic(Fe),
}

fn shape(s: &Setting, g: &M2) -> Shape {
    let r = &s.gl2.spec.ring;
    if g[1] == 0 && g[2] == 0 && g[0] == g[3] {
        return Shape::Scalar(g[0]);
    }
    let tr = r.add(g[0], g[3]);
    let det = s.gl2.spec.det(g);
    let roots: Vec<u32> =
        (0..s.q as u32).filter(|&x| r.add(r.sub(r.mul(x, x), r.mul(tr, x)), det) == 0).collect();
    match roots.as_slice() {
        [z] => Shape::Unipotent(*z),
        [a, d] => Shape::Split(*a, *d),
        [] => {
            let emb = s.fq.embedding_into(&s.fq2).unwrap();
            let lift = |x: u32| emb[s.fq.from_poly(x).0 as usize];
            let (t2, d2) = (lift(tr), lift(det));
            let f = &s.fq2;
            let y = f
                .elements()
                .find(|&y| f.add(f.sub(f.mul(y, y), f.mul(t2, y)), d2).is_zero())
                .expect("irreducible quadratic splits in F_{q^2}");
            Shape::Elliptic(y)
        }
        _ => unreachable!("a quadratic has at most two roots"),
    }
}

// classical character table of GL2(F_q), evaluated in the emulation field
fn character(s: &Setting, label: &IrrepLabel, g: &M2) -> Fe {
    let f = &s.field;
    let det = s.gl2.spec.det(g);
    let n = |k: i64| s.scalar(k);
    let q = s.q as i64;
    match (*label, shape(s, g)) {
        (IrrepLabel::Char(e), _) => s.chi(e, det),
        (IrrepLabel::StTwist(e), sh) => {
            let c = s.chi(e, det);
            match sh {
                Shape::Scalar(_) => f.mul(n(q), c),
                Shape::Unipotent(_) => Fe::ZERO,
                Shape::Elliptic(_) => f.neg(c),
                Shape::Split(..) => c,
            }
        }
        (IrrepLabel::Princ(a, b), sh) => match sh {
            Shape::Scalar(z) => f.mul(n(q + 1), f.mul(s.chi(a, z), s.chi(b, z))),
            Shape::Unipotent(z) => f.mul(s.chi(a, z), s.chi(b, z)),
            Shape::Split(x, y) => f.add(f.mul(s.chi(a, x), s.chi(b, y)), f.mul(s.chi(a, y), s.chi(b, x))),
            Shape::Elliptic(_) => Fe::ZERO,
        },
        (IrrepLabel::Cusp(t), sh) => match sh {
            Shape::Scalar(z) => f.mul(n(q - 1), s.theta_on_fq(t, z)),
            Shape::Unipotent(z) => f.neg(s.theta_on_fq(t, z)),
            Shape::Split(..) => Fe::ZERO,
            Shape::Elliptic(y) => f.neg(f.add(s.theta(t, y), s.theta(t, s.fq2.pow(y, s.q)))),
        },
        (IrrepLabel::Cusp0Twist(_), _) => unreachable!("not a characteristic-0 label"),
    }
}

#[test]
fn models_have_the_classical_characters() {
    for q in [2, 3, 4, 5] {
        let s = Setting::char0(q).unwrap();
        for label in s.labels() {
            let rep = construct(&s, &label).unwrap();
            assert_eq!(rep.dim, label.dim(q));
            let images = rep.all_images();
            for (i, g) in s.gl2.elems.iter().enumerate() {
                assert_eq!(images[i].trace(), character(&s, &label, g), "q={q} {label} at {g:?}");
            }
        }
    }
}

#[test]
fn label_census() {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let c = Coeffs::new(q, 0).unwrap();
        let labels = c.labels();
        assert_eq!(labels.len() as u64, q * q - 1, "q={q}");
        let sq: u64 = labels.iter().map(|l| (l.dim(q) as u64).pow(2)).sum();
        assert_eq!(sq, (q * q - 1) * (q * q - q));
        let by_kind = |k: &str| labels.iter().filter(|l| l.kind() == k).count() as u64;
        assert_eq!(by_kind("Char"), q - 1);
        assert_eq!(by_kind("St"), q - 1);
        assert_eq!(by_kind("Princ"), (q - 1) * (q - 2) / 2);
        assert_eq!(by_kind("Cusp"), q * (q - 1) / 2);
    }
}

#[test]
fn dimension_table() {
    let q = 7;
    assert_eq!(IrrepLabel::Char(0).dim(q), 1);
    assert_eq!(IrrepLabel::StTwist(0).dim(q), 7);
    assert_eq!(IrrepLabel::Princ(0, 1).dim(q), 8);
    assert_eq!(IrrepLabel::Cusp(1).dim(q), 6);
    assert_eq!(IrrepLabel::Cusp0Twist(0).dim(q), 6);
}

#[test]
fn label_normalization() {
    let c = Coeffs::new(3, 0).unwrap();
    assert_eq!(IrrepLabel::Princ(1, 0).normalize(&c).unwrap(), IrrepLabel::Princ(0, 1));
    // theta ~ theta^q
    assert_eq!(IrrepLabel::Cusp(3).normalize(&c).unwrap(), IrrepLabel::Cusp(1));
    assert!(matches!(IrrepLabel::Cusp(4).normalize(&c), Err(Error::InvalidInput(_))));
    assert!(matches!(IrrepLabel::Princ(1, 1).normalize(&c), Err(Error::InvalidInput(_))));
    assert!(matches!(IrrepLabel::Cusp0Twist(0).normalize(&c), Err(Error::InvalidInput(_))));
    let m = Coeffs::new(3, 2).unwrap();
    assert!(matches!(IrrepLabel::StTwist(0).normalize(&m), Err(Error::InvalidInput(_))));
    assert!(IrrepLabel::Cusp0Twist(0).normalize(&m).is_ok());
    for l in c.labels() {
        let text = l.to_string();
        assert_eq!(text.parse::<IrrepLabel>().unwrap(), l);
    }
}

#[test]
fn unipotent_fixed_vectors() {
    for q in [2, 3, 4, 5] {
        let s = Setting::char0(q).unwrap();
        let u = SubgroupHandle::new(&s.gl2.spec, SubgroupKind::Unipotent);
        for label in s.labels() {
            let rep = construct(&s, &label).unwrap();
            let expect = match label.kind() {
                "Char" | "St" => 1,
                "Princ" => 2,
                _ => 0,
            };
            assert_eq!(fixed_vectors(&rep, &u), expect, "q={q} {label}");
        }
    }
}

#[test]
fn fixed_vectors_agree_with_trace_average() {
    let s = Setting::char0(3).unwrap();
    let spec = &s.gl2.spec;
    let subs = [
        SubgroupKind::Borel,
        SubgroupKind::Unipotent,
        SubgroupKind::Torus,
        SubgroupKind::Center,
        SubgroupKind::SL2,
        SubgroupKind::Trivial,
    ];
    for label in s.labels() {
        let rep = construct(&s, &label).unwrap();
        for k in &subs {
            let h = SubgroupHandle::new(spec, k.clone());
            let by_trace = fixed_vectors_by_trace(&rep, &h).unwrap();
            assert_eq!(s.scalar(fixed_vectors(&rep, &h) as i64), by_trace, "{label} {k:?}");
        }
    }
}

#[test]
fn twisting_matches_label_twist() {
    for q in [3, 4, 5] {
        let s = Setting::char0(q).unwrap();
        for label in s.labels() {
            let rep = construct(&s, &label).unwrap();
            for c in 1..q - 1 {
                let tw = twist(&s, &rep, c);
                let target = label.twist(c, q).normalize(&*s).unwrap();
                for g in &s.gl2.elems {
                    assert_eq!(tw.trace_of(g), character(&s, &target, g), "q={q} {label} twisted by {c}");
                }
            }
        }
    }
}

#[test]
fn gelfand_graev_dimensions() {
    assert_eq!(gelfand_graev(&Setting::char0(2).unwrap()).unwrap().dim, 3);
    assert_eq!(gelfand_graev(&Setting::char0(3).unwrap()).unwrap().dim, 16);
}

#[test]
fn restriction_is_a_homomorphism() {
    let s = Setting::char0(5).unwrap();
    let rep = construct(&s, &IrrepLabel::Cusp(2)).unwrap();
    assert!(rep.check_homomorphism(50, 7));
    let res = restrict_to_sl2(&s, &rep).unwrap();
    assert!(Arc::ptr_eq(&res.group, &s.sl2));
    for g in &s.sl2.elems {
        assert_eq!(res.trace_of(g), rep.trace_of(g));
    }
    assert!(res.check_homomorphism(50, 8));
}

#[test]
fn modular_setting_rejects_bad_characteristics() {
    assert!(matches!(Setting::new(3, 3), Err(Error::InvalidInput(_))));
    assert!(matches!(Setting::new(6, 0), Err(Error::InvalidInput(_))));
    assert!(matches!(Setting::new(128, 0), Err(Error::ResourceLimit(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn models_are_homomorphisms(qi in 0usize..4, ell_i in 0usize..4, li in 0usize..64, seed in any::<u64>()) {
        let q = [2u64, 3, 4, 5][qi];
        let ell = [0u64, 2, 3, 7][ell_i];
        prop_assume!(ell == 0 || q % ell != 0);
        let s = Setting::new(q, ell).unwrap();
        let labels = s.labels();
        let label = labels[li % labels.len()];
        let rep = construct(&s, &label).unwrap();
        prop_assert_eq!(rep.dim, label.dim(q));
        prop_assert!(rep.check_homomorphism(20, seed));
    }

    #[test]
    fn dual_inverts_characters(qi in 0usize..3, li in 0usize..32) {
        let q = [3u64, 4, 5][qi];
        let s = Setting::char0(q).unwrap();
        let labels = s.labels();
        let rep = construct(&s, &labels[li % labels.len()]).unwrap();
        let d = rep.dual();
        for g in s.gl2.elems.iter().step_by(7) {
            prop_assert_eq!(d.trace_of(g), rep.trace_of(&s.gl2.spec.inv(g)));
        }
    }
}
