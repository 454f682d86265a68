//! Acceptance suite: one PASS/FAIL line per criterion. Every comparison is
//! exact; the only tolerances are the wall-clock budgets below.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use sl2rep::asymptotics::{
    bijection_check, census_formula, coset_census, germ_identity_check, invariant_dim, Family, InducingDatum,
    MPSubgroup, Parity,
};
use sl2rep::localfield::{galois_conjugate, mod_ell_sc_length, x_sigma, ExtKind, Frac, LocalCharacter, QuadExt};
use sl2rep::meataxe::{self, decompose, hom_dim, isomorphic_irreducibles};
use sl2rep::packets::{
    depth_zero_twist_class, enumerate_descriptors, packet_report, CuspidalClass, Gl2Variant,
};
use sl2rep::reps::{self, Coeffs, IrrepLabel, Setting};
use sl2rep::whittakerf2::{doubling_inclusion_check, lattice_exponent};

const SEED: u64 = 0x5eed;
const GERM_A0: i64 = 2;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn c1_classification() -> Result<String, String> {
    for q in [2u64, 3, 4, 5] {
        let s = e(Setting::char0(q))?;
        let labels = s.labels();
        let mut sq = 0usize;
        for l in &labels {
            let rep = e(reps::construct(&s, l))?;
            ensure(rep.dim == l.dim(q), || format!("q={q} {l}: dim {}", rep.dim))?;
            ensure(e(meataxe::is_irreducible(&rep, SEED))?, || format!("q={q} {l} is reducible"))?;
            sq += rep.dim * rep.dim;
        }
        ensure(labels.len() as u64 == q * q - 1, || format!("q={q}: {} labels", labels.len()))?;
        ensure(sq == s.gl2.order(), || format!("q={q}: sum of squares {sq} vs {}", s.gl2.order()))?;
    }
    Ok("q in {2,3,4,5}: q^2-1 irreducibles, sum dim^2 = |GL2|".into())
}

fn c2_restriction_lengths() -> Result<String, String> {
    let mut n = 0;
    for q in [2u64, 3, 4, 5] {
        for ell in [0u64, 2, 3, 5, 7] {
            if ell != 0 && q % ell == 0 {
                continue;
            }
            let s = e(Setting::new(q, ell))?;
            for l in s.labels() {
                let closed = l.restriction_length(&s);
                let measured = e(meataxe::restriction_length_measured(&s, &l, SEED))?;
                ensure(closed == measured, || format!("q={q} char={ell} {l}: closed {closed}, meataxe {measured}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} labels agree"))
}

fn c3_reduction() -> Result<String, String> {
    let mut st_cases = 0;
    let mut sigma0_cases = 0;
    for (q, ell) in [(3u64, 2u64), (2, 3)] {
        let s0 = e(Setting::char0(q))?;
        let sl = e(Setting::new(q, ell))?;
        for l in s0.labels() {
            let closed = e(l.reduction(&sl))?;
            let lattice = e(reps::integral_model(&sl, &l))?;
            let report = e(decompose(&lattice, SEED))?;
            ensure(report.constituents.len() == closed.len(), || format!("q={q} ell={ell} {l}: {:?}", report.dims()))?;
            for (target, m) in &closed {
                let rep = e(e(reps::construct(&sl, target))?.map_field(&report.field))?;
                let mut hit = false;
                for (c, cm) in &report.constituents {
                    hit |= cm == m && e(isomorphic_irreducibles(c, &rep))?;
                }
                ensure(hit, || format!("q={q} ell={ell} {l}: {target} x{m} missing"))?;
            }
            if matches!(l, IrrepLabel::StTwist(_)) && sl.ell_divides_q_plus_1() {
                // length 2 with the cuspidal factor as the submodule
                ensure(closed.len() == 2 && !report.semisimple, || format!("{l}: not a non-split length-2 reduction"))?;
                for (target, _) in &closed {
                    let rep = e(reps::construct(&sl, target))?;
                    let into = e(hom_dim(&rep, &lattice))?;
                    let cusp = target.is_cuspidal();
                    ensure((into > 0) == cusp, || format!("{l}: Hom({target}, reduction) = {into}"))?;
                }
                st_cases += 1;
            }
            if let (IrrepLabel::Cusp(_), [(IrrepLabel::Cusp0Twist(_), 1)]) = (l, closed.as_slice()) {
                sigma0_cases += 1;
            }
        }
    }
    ensure(st_cases > 0 && sigma0_cases > 0, || "the special cases were not exercised".into())?;
    Ok(format!("q=3 ell=2 and q=2 ell=3; {st_cases} Steinberg and {sigma0_cases} sigma_0 cases"))
}

fn c4_census() -> Result<String, String> {
    for p in [2u64, 3, 5] {
        for f in [Family::K, Family::I, Family::IHalf] {
            for j in 0..=3 {
                let got = e(coset_census(f, p, j))?;
                let want = census_formula(f, p, j);
                ensure(got == want, || format!("p={p} {f} j={j}: {got} vs {want}"))?;
                ensure(e(bijection_check(f, p, j))?, || format!("p={p} {f} j={j}: SL2 and GL2 counts differ"))?;
            }
        }
    }
    Ok("p in {2,3,5}, j <= 3, K/I/I-half".into())
}

fn c5_invariants() -> Result<String, String> {
    for q in [3u64, 5] {
        let s = e(Setting::char0(q))?;
        let qi = q as i64;
        for t in s.cusp_exponents() {
            let label = IrrepLabel::Cusp(t);
            let plus = e(InducingDatum::new(&s, &label, Parity::Plus))?;
            let minus = e(InducingDatum::new(&s, &label, Parity::Minus))?;
            for j in 1..=5u32 {
                let h = MPSubgroup::new(Family::K, j);
                let a = e(invariant_dim(&plus, &h))?.total as i64;
                let b = e(invariant_dim(&minus, &h))?.total as i64;
                let want_a = qi.pow(2 * ((j - 1) / 2) + 1) - 1;
                let want_b = if j == 1 { 0 } else { qi.pow(2 * (j / 2)) - 1 };
                ensure(a == want_a, || format!("q={q} {label} j={j}: Pi+ {a} vs {want_a}"))?;
                ensure(b == want_b, || format!("q={q} {label} j={j}: Pi- {b} vs {want_b}"))?;
            }
        }
    }
    let q = 3u64;
    let s = e(Setting::char0(q))?;
    let mut packets = 0;
    for t in s.cusp_exponents() {
        let label = IrrepLabel::Cusp(t);
        if label.restriction_length(&s) != 1 {
            continue;
        }
        let members = e(InducingDatum::packet_members(&s, &label, SEED))?;
        ensure(members.len() == 2, || format!("{label}: {} members", members.len()))?;
        for j in 0..=4u32 {
            let want = (-2 + 2 * q.pow(j) as i64) / 2;
            for m in &members {
                for f in [Family::I, Family::IHalf] {
                    let got = e(invariant_dim(m, &MPSubgroup::new(f, j)))?.total as i64;
                    ensure(got == want, || format!("{} {f} j={j}: {got} vs {want}", m.name))?;
                }
            }
        }
        packets += 1;
    }
    ensure(packets > 0, || "no size-2 packet at q = 3".into())?;
    Ok(format!("K'_j tables for q in {{3,5}}, j <= 5; Iwahori formula on {packets} size-2 packets"))
}

fn c6_trichotomy() -> Result<String, String> {
    let mut total = 0;
    for q in [2u64, 3, 4, 5] {
        for l in [0u64, 2, 3, 5, 7] {
            if l != 0 && q % l == 0 {
                continue;
            }
            let c = e(Coeffs::new(q, l))?;
            let mut size4 = BTreeSet::new();
            for d in e(enumerate_descriptors(q, l))? {
                let r = e(packet_report(&d))?;
                total += 1;
                ensure([1, 2, 4].contains(&r.size), || format!("{d:?}: size {}", r.size))?;
                if r.size == 4 {
                    ensure(r.cuspidal_class != CuspidalClass::NonCuspidal, || format!("{d:?}: size 4, not cuspidal"))?;
                    let key = match &d.variant {
                        Gl2Variant::DepthZeroSc { label } => {
                            let lab: IrrepLabel = e(label.parse())?;
                            ("depth zero", e(depth_zero_twist_class(&lab, &c))?.to_string())
                        }
                        Gl2Variant::Cusp0Twist { .. } => ("depth zero", "Pi_0".to_string()),
                        _ => ("positive level", String::new()),
                    };
                    if r.cuspidal_class == CuspidalClass::Supercuspidal || l == 2 {
                        size4.insert(key);
                    }
                }
                if l != 2 {
                    let s_pi = match r.component_group.as_str() {
                        "1" => 1,
                        "Z/2" => 2,
                        "Z/2 x Z/2" => 4,
                        g => return Err(format!("unknown component group {g}")),
                    };
                    ensure(s_pi == r.size, || format!("{d:?}: size {} but S_Pi {}", r.size, r.component_group))?;
                }
            }
            if c.p % 2 == 1 {
                ensure(size4.len() == 1, || format!("q={q} l={l}: size-4 classes {size4:?}"))?;
                ensure(size4.iter().all(|k| k.0 == "depth zero"), || format!("q={q} l={l}: {size4:?}"))?;
            }
        }
    }
    Ok(format!("{total} descriptors"))
}

fn ratio_order(chi: &LocalCharacter) -> u64 {
    let ext = &chi.ext;
    let mut ord = match ext.kind {
        ExtKind::Unramified => 1,
        ExtKind::Ramified { .. } => chi.eval_unit(&ext.minus_one()).order(),
    };
    for x in &ext.units.elems {
        ord = num_integer::lcm(ord, chi.eval_unit(&ext.tau(*x)).sub(chi.eval_unit(x)).order());
    }
    ord
}

fn c7_langlands_side() -> Result<String, String> {
    let mut tame = 0;
    for kind in [ExtKind::Unramified, ExtKind::Ramified { u: 1 }, ExtKind::Ramified { u: 2 }] {
        let ext = e(QuadExt::new(3, kind, 1))?;
        for chi in ext.characters(8).into_iter().filter(|c| c.order() <= 8) {
            if galois_conjugate(&chi) == chi {
                continue;
            }
            let size = e(x_sigma(&chi))?.size;
            let want = if ratio_order(&chi) == 2 { 4 } else { 2 };
            ensure(size == want, || format!("{chi:?}: x_sigma {size}, ratio criterion {want}"))?;
            tame += 1;
        }
    }
    let ext = e(QuadExt::new(2, ExtKind::Unramified, 4))?;
    let one = (1, 0);
    let b = *ext.units.elems.iter().find(|&&x| x != one && ext.pow(x, 3) == one).ok_or("no element of order 3")?;
    let mut criterion = 0;
    let mut checked = 0;
    for chi in ext.characters(2) {
        if galois_conjugate(&chi) == chi {
            continue;
        }
        let mut principal = 1;
        for x in ext.units.elems.iter().filter(|x| ext.is_principal_unit(x)) {
            principal = num_integer::lcm(principal, chi.eval_unit(&ext.tau(*x)).sub(chi.eval_unit(x)).order());
        }
        let vb: Frac = chi.eval_unit(&b);
        let want = if principal == 2 && !vb.is_zero() && vb.times(3).is_zero() { 2 } else { 1 };
        let got = e(mod_ell_sc_length(&chi, 3))?;
        ensure(got == want, || format!("{chi:?}: length {got}, criterion {want}"))?;
        criterion += (want == 2) as usize;
        checked += 1;
    }
    ensure(criterion > 0, || "criterion set is empty".into())?;
    Ok(format!("{tame} tame characters at p=3; {checked} level-4 characters at p=2 ({criterion} of length 2)"))
}

fn c8_lattices() -> Result<String, String> {
    let mut n = 0;
    for d in 1..=5u32 {
        for r in 0..d {
            let ex = e(lattice_exponent(d, r))?;
            ensure(ex == 1 << r, || format!("d={d} r={r}: exponent {ex}"))?;
            // the doubling inclusion 2 I_(r-1) in I_r needs r >= 1
            if r >= 1 {
                ensure(e(doubling_inclusion_check(d, r))?, || format!("d={d} r={r}: doubling fails"))?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} pairs (d, r)"))
}

fn c9_germ() -> Result<String, String> {
    let s = e(Setting::char0(3))?;
    let members = e(InducingDatum::packet_members(&s, &IrrepLabel::Cusp(2), SEED))?;
    ensure(members.len() == 4, || format!("{} members", members.len()))?;
    let full = e(germ_identity_check(&members, Family::I, 1..=4))?;
    ensure(full.a0 == Some(GERM_A0), || format!("a0 = {:?}, golden {GERM_A0}", full.a0))?;
    for drop in 0..4 {
        let partial: Vec<InducingDatum> =
            members.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, m)| m.clone()).collect();
        let g = e(germ_identity_check(&partial, Family::I, 1..=4))?;
        ensure(g.a0.is_none(), || format!("dropping member {drop} still stabilizes"))?;
    }
    Ok(format!("a0 = {GERM_A0} from j = {}; every 3-member control diverges", full.threshold.unwrap_or(0)))
}

fn main() {
    let criteria: [(u32, &str, Check, u64); 9] = [
        (1, "classification", c1_classification, 60),
        (2, "restriction lengths", c2_restriction_lengths, 300),
        (3, "mod-ell reduction", c3_reduction, 300),
        (4, "coset census", c4_census, 300),
        (5, "invariant dimensions", c5_invariants, 300),
        (6, "packet-size trichotomy", c6_trichotomy, 300),
        (7, "Langlands-side oracle", c7_langlands_side, 300),
        (8, "lattice lemmas", c8_lattices, 30),
        (9, "germ identity", c9_germ, 300),
    ];
    let mut failed = 0;
    for (n, name, f, budget) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > Duration::from_secs(budget) => Err(format!("{d}; over budget")),
            o => o,
        };
        let (verdict, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        failed += outcome.is_err() as usize;
        println!("criterion {n} ({name}): {verdict} [{:.2} s / {budget} s] {detail}", took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
