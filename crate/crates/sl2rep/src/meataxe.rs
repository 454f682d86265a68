//! Meataxe-style decomposition: irreducibility testing, composition factors,
//! multiplicities and homomorphism spaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::exactla::{poly_roots, solve_sylvester, Echelon, Fe, FieldDesc, Mat};
use crate::reps::{IrrepLabel, MatRep, Setting};

/// Default cap on the dimension accepted by `decompose`.
pub const DIM_CAP: usize = 512;
const MAX_TRIES: usize = 60;
const MAX_EXTENSIONS: u32 = 3;

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    /// Pairwise non-isomorphic composition factors with multiplicities.
    pub constituents: Vec<(MatRep, usize)>,
    pub length: usize,
    /// The socle is everything.
    pub semisimple: bool,
    /// Field the constituents live over (the input field, possibly extended).
    pub field: FieldDesc,
}

impl DecompositionReport {
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> =
            self.constituents.iter().flat_map(|(r, m)| std::iter::repeat_n(r.dim, *m)).collect();
        d.sort();
        d
    }
}

enum Split {
    Irreducible,
    /// Row-invariant subspace, as an echelon basis.
    Proper(Echelon),
}

fn row_spin(f: &FieldDesc, gens: &[Mat], seeds: &[Vec<Fe>]) -> Echelon {
    let mut e = Echelon::new();
    let mut queue: Vec<Vec<Fe>> = Vec::new();
    for v in seeds {
        if e.insert(f, v.clone()) {
            queue.push(v.clone());
        }
    }
    let n = seeds.first().map_or(0, |v| v.len());
    while let Some(v) = queue.pop() {
        for g in gens {
            let w = g.vec_mul(&v);
            if e.insert(f, w.clone()) {
                queue.push(w);
                if e.rank() == n {
                    return e;
                }
            }
        }
    }
    e
}

fn random_element(gens: &[Mat], rng: &mut ChaCha8Rng) -> Mat {
    let f = &gens[0].field;
    let n = gens[0].rows;
    let mut acc = Mat::zero(f, n, n);
    let terms = rng.gen_range(2..=4);
    for _ in 0..terms {
        let len = rng.gen_range(1..=3);
        let mut w = gens[rng.gen_range(0..gens.len())].clone();
        for _ in 1..len {
            w = w.mul(&gens[rng.gen_range(0..gens.len())]);
        }
        let c = Fe(rng.gen_range(1..f.order() as u32));
        acc = acc.add(&w.scale(c));
    }
    acc
}

/// Find a proper invariant subspace or prove (absolute) irreducibility.
fn split(gens: &[Mat], rng: &mut ChaCha8Rng) -> Result<Split> {
    let f = &gens[0].field;
    let n = gens[0].rows;
    if n == 1 {
        return Ok(Split::Irreducible);
    }
    let transposed: Vec<Mat> = gens.iter().map(|g| g.transpose()).collect();
    for _ in 0..MAX_TRIES {
        let a = random_element(gens, rng);
        let cp = a.charpoly();
        let roots = poly_roots(f, &cp);
        for lam in roots.into_iter().take(4) {
            let b = a.add_scalar(f.neg(lam));
            let left = b.left_kernel();
            for v in left.iter().take(2) {
                let u = row_spin(f, gens, std::slice::from_ref(v));
                if u.rank() < n {
                    return Ok(Split::Proper(u));
                }
            }
            if left.len() == 1 {
                // Norton: the column module generated by the kernel of b on the other side
                let right = b.right_kernel();
                let w = row_spin(f, &transposed, &right[..1]);
                if w.rank() < n {
                    let ann = Mat::from_rows(f, &w.rows, n).right_kernel();
                    let mut e = Echelon::new();
                    for x in ann {
                        e.insert(f, x);
                    }
                    return Ok(Split::Proper(e));
                }
                return Ok(Split::Irreducible);
            }
        }
    }
    Err(Error::NeedsLargerField)
}

fn sub_action(f: &FieldDesc, gens: &[Mat], u: &Echelon) -> Vec<Mat> {
    let r = u.rank();
    gens.iter()
        .map(|g| {
            let rows: Vec<Vec<Fe>> = u.rows.iter().map(|b| u.coords(&g.vec_mul(b))).collect();
            Mat::from_rows(f, &rows, r)
        })
        .collect()
}

fn quotient_action(f: &FieldDesc, gens: &[Mat], u: &Echelon) -> Vec<Mat> {
    let n = gens[0].rows;
    let free: Vec<usize> = (0..n).filter(|c| !u.pivots.contains(c)).collect();
    gens.iter()
        .map(|g| {
            let rows: Vec<Vec<Fe>> = free
                .iter()
                .map(|&j| {
                    let mut v = g.row(j).to_vec();
                    u.reduce(f, &mut v);
                    free.iter().map(|&k| v[k]).collect()
                })
                .collect();
            Mat::from_rows(f, &rows, free.len())
        })
        .collect()
}

fn factors_in_field(rep: &MatRep, rng: &mut ChaCha8Rng) -> Result<Vec<MatRep>> {
    let f = &rep.field;
    let mut stack = vec![rep.gens.clone()];
    let mut out = Vec::new();
    while let Some(gens) = stack.pop() {
        match split(&gens, rng)? {
            Split::Irreducible => out.push(MatRep::new(rep.group.clone(), f.clone(), gens, None)?),
            Split::Proper(u) => {
                stack.push(quotient_action(f, &gens, &u));
                stack.push(sub_action(f, &gens, &u));
            }
        }
    }
    Ok(out)
}

fn extension_chain(rep: &MatRep, seed: u64) -> Result<(Vec<MatRep>, MatRep)> {
    let mut cur = rep.clone();
    for _ in 0..=MAX_EXTENSIONS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match factors_in_field(&cur, &mut rng) {
            Ok(v) => return Ok((v, cur)),
            Err(Error::NeedsLargerField) => {
                let f = &cur.field;
                let big = FieldDesc::new(f.characteristic(), 2 * f.degree())?;
                cur = cur.map_field(&big)?;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::NeedsLargerField)
}

/// Composition factors (with repetition), each absolutely irreducible.
pub fn composition_factors(rep: &MatRep, seed: u64) -> Result<Vec<MatRep>> {
    if rep.dim > DIM_CAP {
        return Err(Error::ResourceLimit(format!("dimension {} exceeds cap {DIM_CAP}", rep.dim)));
    }
    Ok(extension_chain(rep, seed)?.0)
}

pub fn is_irreducible(rep: &MatRep, seed: u64) -> Result<bool> {
    Ok(composition_factors(rep, seed)?.len() == 1)
}

/// Isomorphism test for absolutely irreducible representations.
pub fn isomorphic_irreducibles(a: &MatRep, b: &MatRep) -> Result<bool> {
    if a.dim != b.dim {
        return Ok(false);
    }
    if a.gens.iter().zip(&b.gens).any(|(x, y)| x.trace() != y.trace()) {
        return Ok(false);
    }
    Ok(hom_dim(a, b)? > 0)
}

/// Full decomposition report.
pub fn decompose(rep: &MatRep, seed: u64) -> Result<DecompositionReport> {
    if rep.dim > DIM_CAP {
        return Err(Error::ResourceLimit(format!("dimension {} exceeds cap {DIM_CAP}", rep.dim)));
    }
    let (factors, over) = extension_chain(rep, seed)?;
    let mut classes: Vec<(MatRep, usize)> = Vec::new();
    for c in factors {
        let mut found = false;
        for (r, m) in classes.iter_mut() {
            if isomorphic_irreducibles(r, &c)? {
                *m += 1;
                found = true;
                break;
            }
        }
        if !found {
            classes.push((c, 1));
        }
    }
    classes.sort_by_key(|(r, _)| r.dim);
    let mut socle = 0;
    for (r, _) in &classes {
        socle += r.dim * hom_dim(r, &over)?;
    }
    let length = classes.iter().map(|(_, m)| m).sum();
    Ok(DecompositionReport { semisimple: socle == over.dim, length, constituents: classes, field: over.field.clone() })
}

/// Column spin of one vector recording how each basis vector arose.
struct Cyclic {
    // basis vector i (i > 0) = M(gen) * basis[parent]
    recipe: Vec<(usize, usize)>,
    // coordinates of M(g) * basis[i] in the spun basis, per generator
    action: Vec<Vec<Vec<Fe>>>,
}

fn cyclic_structure(rep: &MatRep, v: Vec<Fe>) -> Option<Cyclic> {
    let f = &rep.field;
    let n = rep.dim;
    let mut ech = Echelon::new();
    let mut basis = vec![v.clone()];
    let mut recipe = vec![(0, 0)];
    ech.insert(f, v);
    let mut i = 0;
    while i < basis.len() && basis.len() < n {
        for (g, m) in rep.gens.iter().enumerate() {
            let w = m.vec_mul_col(&basis[i]);
            if ech.insert(f, w.clone()) {
                basis.push(w);
                recipe.push((i, g));
            }
        }
        i += 1;
    }
    if basis.len() < n {
        return None;
    }
    // coordinates in the raw basis via the inverse of the basis matrix (basis as columns)
    let bmat = Mat::from_rows(f, &basis, n).transpose();
    let binv = bmat.inverse()?;
    let action = rep
        .gens
        .iter()
        .map(|m| basis.iter().map(|b| binv.vec_mul_col(&m.vec_mul_col(b))).collect())
        .collect();
    Some(Cyclic { recipe, action })
}

/// `dim Hom_G(rep1, rep2)` (maps of column modules).
pub fn hom_dim(rep1: &MatRep, rep2: &MatRep) -> Result<usize> {
    if rep1.field != rep2.field || rep1.group.gens.len() != rep2.group.gens.len() || rep1.group.order() != rep2.group.order() {
        return invalid("hom_dim needs representations of the same group over the same field");
    }
    let f = &rep1.field;
    let n1 = rep1.dim;
    let n2 = rep2.dim;
    // a cyclic source lets us solve for the image of one generating vector
    let cyc = (0..n1.min(4)).find_map(|k| {
        let mut v = vec![Fe::ZERO; n1];
        v[k] = Fe::ONE;
        cyclic_structure(rep1, v)
    });
    let Some(cyc) = cyc else {
        let pairs: Vec<(Mat, Mat)> = rep2.gens.iter().cloned().zip(rep1.gens.iter().cloned()).collect();
        return Ok(solve_sylvester(&pairs)?.len());
    };
    // P_i maps phi(basis_0) to phi(basis_i)
    let mut p: Vec<Mat> = vec![Mat::identity(f, n2)];
    for &(par, g) in &cyc.recipe[1..] {
        p.push(rep2.gens[g].mul(&p[par]));
    }
    let mut ech = Echelon::new();
    for (g, m) in rep2.gens.iter().enumerate() {
        for (i, pi) in p.iter().enumerate() {
            let mut c = m.mul(pi);
            for (j, pj) in p.iter().enumerate() {
                let coef = cyc.action[g][i][j];
                if !coef.is_zero() {
                    c = c.sub(&pj.scale(coef));
                }
            }
            for r in 0..n2 {
                ech.insert(f, c.row(r).to_vec());
                if ech.rank() == n2 {
                    return Ok(0);
                }
            }
        }
    }
    Ok(n2 - ech.rank())
}

/// Length of the restriction to `SL2(F_q)`, in closed form.
pub fn restriction_length(label: &IrrepLabel, s: &Setting) -> usize {
    label.restriction_length(s)
}

/// Length of the restriction measured by decomposing the explicit model.
pub fn restriction_length_measured(s: &std::sync::Arc<Setting>, label: &IrrepLabel, seed: u64) -> Result<usize> {
    let rep = crate::reps::construct(s, label)?;
    let res = crate::reps::restrict_to_sl2(s, &rep)?;
    Ok(composition_factors(&res, seed)?.len())
}
