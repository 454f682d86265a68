use std::sync::Arc;

use super::{fixed_vectors, twist, IrrepLabel, MatRep, Setting};
use crate::error::{invalid, Error, Result};
use crate::exactla::{Echelon, Fe, Mat};
use crate::groups::{Group, SubgroupHandle, SubgroupKind, M2};

/// `ind_H^G(lambda)` for a one-dimensional `lambda` of `H`, on functions `f(hx) = lambda(h) f(x)`
/// with `(g f)(x) = f(xg)`; the basis is indexed by right cosets `H r` in canonical order.
pub fn induce_character(
    group: &Arc<Group>,
    field: &crate::exactla::FieldDesc,
    h: &SubgroupHandle,
    lambda: &dyn Fn(&M2) -> Fe,
) -> Result<MatRep> {
    let h_elems = group.subgroup_elements(h);
    let (reps, coset_of) = group.right_cosets(&h_elems);
    let n = reps.len();
    let spec = &group.spec;
    let mut gens = Vec::with_capacity(group.gens.len());
    for g in &group.gens {
        let mut m = Mat::zero(field, n, n);
        for (c2, &r2) in reps.iter().enumerate() {
            let x = spec.mul(&group.elems[r2 as usize], g);
            let xi = group.idx(&x).unwrap();
            let c = coset_of[xi as usize] as usize;
            let hh = spec.mul(&x, &spec.inv(&group.elems[reps[c] as usize]));
            m.set(c2, c, lambda(&hh));
        }
        gens.push(m);
    }
    MatRep::new(group.clone(), field.clone(), gens, None)
}

/// `ind_B^G(chi_a x chi_b)`, with raw (unreduced) exponents.
pub fn principal_series(s: &Arc<Setting>, a: u64, b: u64) -> Result<MatRep> {
    let borel = SubgroupHandle::new(&s.gl2.spec, SubgroupKind::Borel);
    let lam = |x: &M2| s.field.mul(s.chi(a, x[0]), s.chi(b, x[3]));
    let rep = induce_character(&s.gl2, &s.field, &borel, &lam)?;
    let label = IrrepLabel::Princ(a, b).normalize(s).ok();
    Ok(rep.with_label(label))
}

/// The Gelfand-Graev representation `ind_U^G(psi)`.
pub fn gelfand_graev(s: &Arc<Setting>) -> Result<MatRep> {
    let u = SubgroupHandle::new(&s.gl2.spec, SubgroupKind::Unipotent);
    let lam = |x: &M2| s.psi(x[1]);
    induce_character(&s.gl2, &s.field, &u, &lam)
}

fn column(m: &Mat, j: usize) -> Vec<Fe> {
    (0..m.rows).map(|i| m.get(i, j)).collect()
}

fn echelon_of(rep: &MatRep, w: &[Vec<Fe>]) -> Echelon {
    let mut e = Echelon::new();
    for v in w {
        e.insert(&rep.field, v.clone());
    }
    e
}

/// The subrepresentation on an invariant column subspace spanned by `w`.
pub fn sub_by(rep: &MatRep, w: &[Vec<Fe>]) -> Result<MatRep> {
    let f = &rep.field;
    let e = echelon_of(rep, w);
    let r = e.rank();
    let mut gens = Vec::new();
    for m in &rep.gens {
        let mut t = Mat::zero(f, r, r);
        for (i, b) in e.rows.iter().enumerate() {
            let img = m.vec_mul_col(b);
            let mut chk = img.clone();
            if !e.reduce(f, &mut chk) {
                return Err(Error::Internal("subspace is not invariant".into()));
            }
            for (j, c) in e.coords(&img).into_iter().enumerate() {
                t.set(j, i, c);
            }
        }
        gens.push(t);
    }
    MatRep::new(rep.group.clone(), f.clone(), gens, None)
}

/// The quotient representation by an invariant column subspace spanned by `w`.
pub fn quotient_by(rep: &MatRep, w: &[Vec<Fe>]) -> Result<MatRep> {
    let f = &rep.field;
    let e = echelon_of(rep, w);
    let free: Vec<usize> = (0..rep.dim).filter(|c| !e.pivots.contains(c)).collect();
    let r = free.len();
    let mut gens = Vec::new();
    for m in &rep.gens {
        let mut t = Mat::zero(f, r, r);
        for (i, &j) in free.iter().enumerate() {
            let mut img = column(m, j);
            e.reduce(f, &mut img);
            for (k, &jj) in free.iter().enumerate() {
                t.set(k, i, img[jj]);
            }
        }
        gens.push(t);
    }
    MatRep::new(rep.group.clone(), f.clone(), gens, None)
}

/// `ind_B^G(1) / constants`, twisted by `chi_e o det` (irreducible exactly when `q + 1 != 0` in R).
pub fn steinberg_model(s: &Arc<Setting>, e: u64) -> Result<MatRep> {
    let ind = principal_series(s, 0, 0)?;
    let ones = vec![vec![Fe::ONE; ind.dim]];
    let st = quotient_by(&ind, &ones)?;
    Ok(twist(s, &st, e).with_label(IrrepLabel::StTwist(e).normalize(s).ok()))
}

/// `Ker(sum) / constants` inside `ind_B^G(1)`, twisted by `chi_e o det`; needs `q + 1 = 0` in R.
pub fn cusp0_model(s: &Arc<Setting>, e: u64) -> Result<MatRep> {
    if !s.ell_divides_q_plus_1() {
        return invalid("sigma_0 exists only when q + 1 = 0 in R");
    }
    let ind = principal_series(s, 0, 0)?;
    let n = ind.dim;
    let f = &s.field;
    let kernel: Vec<Vec<Fe>> = (1..n)
        .map(|i| {
            let mut v = vec![Fe::ZERO; n];
            v[0] = f.neg(Fe::ONE);
            v[i] = Fe::ONE;
            v
        })
        .collect();
    let ker = sub_by(&ind, &kernel)?;
    // constants in the basis of the kernel echelon: the all-ones vector has coordinates
    // read at the kernel's pivot columns
    let e_ker = echelon_of(&ind, &kernel);
    let ones = e_ker.coords(&vec![Fe::ONE; n]);
    let cusp0 = quotient_by(&ker, &[ones])?;
    Ok(twist(s, &cusp0, e).with_label(Some(IrrepLabel::Cusp0Twist(s.canon(e, s.q - 1)))))
}

/// Kirillov model of the cuspidal representation attached to `theta_t`, on functions on `F_q^*`.
/// Exponents are raw, so the same formulas give the reduction mod `ell` of the integral model.
pub fn cusp_kirillov(s: &Arc<Setting>, t: u64) -> Result<MatRep> {
    let f = &s.field;
    let r = &s.gl2.spec.ring;
    let q = s.q;
    let fq2 = &s.fq2;
    let units: Vec<u32> = (1..q as u32).collect();
    let pos = |x: u32| (x - 1) as usize;
    let n = units.len();
    // j(u) = -(1/q) sum_{N y = u} psi(Tr y) theta(y)
    let qinv = f.inv(f.from_int(q as i64));
    if f.from_int(q as i64).is_zero() {
        return invalid("q must be invertible in the coefficient field");
    }
    let mut j = vec![Fe::ZERO; q as usize];
    for y in fq2.elements().filter(|y| !y.is_zero()) {
        let ny = s.fq2_to_fq(fq2.pow(y, q + 1)).unwrap();
        let tr = s.fq2_to_fq(fq2.add(y, fq2.pow(y, q))).unwrap();
        let v = f.mul(s.psi(tr), s.theta(t, y));
        j[ny as usize] = f.add(j[ny as usize], v);
    }
    for v in j.iter_mut() {
        *v = f.neg(f.mul(*v, qinv));
    }
    let borel = |a: u32, b: u32, d: u32| -> Mat {
        let mut m = Mat::zero(f, n, n);
        let dinv = r.inv(d).unwrap();
        for &y in &units {
            let x = r.mul(r.mul(a, y), dinv);
            let v = f.mul(s.theta_on_fq(t, d), s.psi(r.mul(r.mul(b, y), dinv)));
            m.set(pos(y), pos(x), v);
        }
        m
    };
    let mut w = Mat::zero(f, n, n);
    for &y in &units {
        for &x in &units {
            let v = f.div(j[r.mul(x, y) as usize], s.theta_on_fq(t, x));
            w.set(pos(y), pos(x), v);
        }
    }
    let image = |g: &M2| -> Mat {
        let [a, b, c, d] = *g;
        if c == 0 {
            return borel(a, b, d);
        }
        let cinv = r.inv(c).unwrap();
        let left = borel(1, r.mul(a, cinv), 1);
        let right = borel(r.neg(c), r.neg(d), r.mul(r.sub(r.mul(b, c), r.mul(a, d)), cinv));
        left.mul(&w).mul(&right)
    };
    let gens = s.gl2.gens.iter().map(image).collect();
    let label = IrrepLabel::Cusp(t).normalize(s).ok();
    MatRep::new(s.gl2.clone(), f.clone(), gens, label)
}

/// Character of a one-dimensional label evaluated as a representation.
pub fn character_rep(s: &Arc<Setting>, e: u64) -> Result<MatRep> {
    let f = &s.field;
    let gens = s.gl2.gens.iter().map(|g| Mat::scalar(f, 1, s.chi(e, s.gl2.spec.det(g)))).collect();
    MatRep::new(s.gl2.clone(), f.clone(), gens, Some(IrrepLabel::Char(s.canon(e, s.q - 1))))
}

/// The integral model of a characteristic-0 label, evaluated in the setting `s`
/// (in positive characteristic this is the reduction of the lattice).
pub fn integral_model(s: &Arc<Setting>, label: &IrrepLabel) -> Result<MatRep> {
    match *label {
        IrrepLabel::Char(e) => character_rep(s, e),
        IrrepLabel::StTwist(e) => steinberg_model(s, e),
        IrrepLabel::Princ(a, b) => principal_series(s, a, b),
        IrrepLabel::Cusp(t) => cusp_kirillov(s, t),
        IrrepLabel::Cusp0Twist(_) => invalid("sigma_0 has no characteristic-0 lattice of its own"),
    }
}

fn gg_constituents(s: &Arc<Setting>) -> Result<&Vec<MatRep>> {
    let cached = s.gg_cache().get_or_init(|| {
        let gg = gelfand_graev(s)?;
        crate::meataxe::composition_factors(&gg, 0x5eed)
    });
    cached.as_ref().map_err(|e| e.clone())
}

/// Cuspidal constituent of the Gelfand-Graev representation with the fingerprint of
/// `theta_t`: dimension `q - 1`, no `U`-fixed vectors, central character and trace
/// on the elliptic torus generator.
pub fn cusp_from_gelfand_graev(s: &Arc<Setting>, t: u64) -> Result<MatRep> {
    let f = &s.field;
    let q = s.q;
    let u = SubgroupHandle::new(&s.gl2.spec, SubgroupKind::Unipotent);
    let nu = s.nu();
    let z: M2 = [nu, 0, 0, nu];
    let central = s.theta_on_fq(t, nu);
    let g = s.fq2.generator();
    let trace = f.neg(f.add(s.theta(t, g), s.theta(t, s.fq2.pow(g, q))));
    let tg = s.torus_generator();
    for c in gg_constituents(s)? {
        if c.dim != (q - 1) as usize || c.field != *f {
            continue;
        }
        let zc = c.image_of(&z);
        if zc != Mat::scalar(f, c.dim, central) {
            continue;
        }
        if c.trace_of(&tg) != trace || fixed_vectors(c, &u) != 0 {
            continue;
        }
        return Ok(c.clone().with_label(IrrepLabel::Cusp(t).normalize(s).ok()));
    }
    Err(Error::Internal(format!("no Gelfand-Graev constituent matches Cusp({t})")))
}

pub(super) fn construct_normalized(s: &Arc<Setting>, label: &IrrepLabel) -> Result<MatRep> {
    match *label {
        IrrepLabel::Char(e) => character_rep(s, e),
        IrrepLabel::StTwist(e) => steinberg_model(s, e),
        IrrepLabel::Cusp0Twist(e) => cusp0_model(s, e),
        IrrepLabel::Princ(a, b) => principal_series(s, a, b),
        IrrepLabel::Cusp(t) => cusp_from_gelfand_graev(s, t),
    }
}
