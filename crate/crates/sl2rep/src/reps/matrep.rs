use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IrrepLabel, Setting};
use crate::error::{invalid, Result};
use crate::exactla::{Fe, FieldDesc, Mat};
use crate::groups::{Group, SubgroupHandle, M2};

/// A matrix representation `g -> M(g)` with `M(gh) = M(g) M(h)`, given by the
/// images of the group's generators. The underlying module is the column space.
#[derive(Clone)]
pub struct MatRep {
    pub group: Arc<Group>,
    pub field: FieldDesc,
    pub dim: usize,
    pub gens: Vec<Mat>,
    pub label: Option<IrrepLabel>,
}

impl std::fmt::Debug for MatRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MatRep(dim {}, {:?}, {:?}, label {:?})", self.dim, self.group, self.field, self.label)
    }
}

impl MatRep {
    pub fn new(group: Arc<Group>, field: FieldDesc, gens: Vec<Mat>, label: Option<IrrepLabel>) -> Result<MatRep> {
        if gens.len() != group.gens.len() {
            return invalid("one image per generator required");
        }
        let dim = gens.first().map_or(0, |m| m.rows);
        if dim == 0 {
            return invalid("representations have positive dimension");
        }
        if gens.iter().any(|m| m.rows != dim || m.cols != dim || m.field != field) {
            return invalid("generator images must be square over a common field");
        }
        Ok(MatRep { group, field, dim, gens, label })
    }

    /// Image of the element with the given index, as a product along its word.
    pub fn image(&self, idx: u32) -> Mat {
        let mut m = Mat::identity(&self.field, self.dim);
        for g in self.group.word(idx) {
            m = m.mul(&self.gens[g]);
        }
        m
    }

    pub fn image_of(&self, x: &M2) -> Mat {
        self.image(self.group.idx(x).expect("element of the group"))
    }

    /// Images of all elements, indexed like the group.
    pub fn all_images(&self) -> Vec<Mat> {
        let n = self.group.order();
        let mut out: Vec<Option<Mat>> = vec![None; n];
        for i in self.group.bfs_order() {
            let m = match self.group.parent_of(i) {
                None => Mat::identity(&self.field, self.dim),
                Some((par, g)) => out[par as usize].as_ref().unwrap().mul(&self.gens[g]),
            };
            out[i as usize] = Some(m);
        }
        out.into_iter().map(|m| m.unwrap()).collect()
    }

    /// Check `M(x) M(y) = M(xy)` on random pairs (images through independent words).
    pub fn check_homomorphism(&self, samples: usize, seed: u64) -> bool {
        let imgs = self.all_images();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.group.order() as u32;
        (0..samples).all(|_| {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            imgs[x as usize].mul(&imgs[y as usize]) == imgs[self.group.mul_idx(x, y) as usize]
        })
    }

    pub fn map_field(&self, big: &FieldDesc) -> Result<MatRep> {
        if *big == self.field {
            return Ok(self.clone());
        }
        let table = self.field.embedding_into(big)?;
        Ok(MatRep {
            group: self.group.clone(),
            field: big.clone(),
            dim: self.dim,
            gens: self.gens.iter().map(|m| m.map_field(big, &table)).collect(),
            label: self.label,
        })
    }

    /// Dual representation `g -> M(g^{-1})^T`.
    pub fn dual(&self) -> MatRep {
        let gens = self.group.gens.iter().map(|g| self.image_of(&self.group.spec.inv(g)).transpose()).collect();
        MatRep { group: self.group.clone(), field: self.field.clone(), dim: self.dim, gens, label: None }
    }

    pub fn with_label(mut self, label: Option<IrrepLabel>) -> MatRep {
        self.label = label;
        self
    }

    pub fn trace_of(&self, x: &M2) -> Fe {
        self.image_of(x).trace()
    }
}

/// Restriction of a `GL2(F_q)` representation to `SL2(F_q)`.
pub fn restrict_to_sl2(s: &Setting, rep: &MatRep) -> Result<MatRep> {
    if !Arc::ptr_eq(&rep.group, &s.gl2) {
        return invalid("restriction expects a representation of the setting's GL2");
    }
    let gens = s.sl2.gens.iter().map(|g| rep.image_of(g)).collect();
    MatRep::new(s.sl2.clone(), rep.field.clone(), gens, None)
}

/// Twist by `chi_c o det`.
pub fn twist(s: &Setting, rep: &MatRep, c: u64) -> MatRep {
    let gens = rep
        .group
        .gens
        .iter()
        .zip(&rep.gens)
        .map(|(g, m)| m.scale(s.chi(c, rep.group.spec.det(g))))
        .collect();
    MatRep {
        group: rep.group.clone(),
        field: rep.field.clone(),
        dim: rep.dim,
        gens,
        label: rep.label.map(|l| l.twist(c, s.q)),
    }
}

/// Dimension of the `H`-fixed vectors: the common kernel of `M(h) - 1` over generators of `H`.
pub fn fixed_vectors(rep: &MatRep, h: &SubgroupHandle) -> usize {
    let f = &rep.field;
    let n = rep.dim;
    let mut stacked = Vec::new();
    for g in &h.gens {
        let m = rep.image_of(g).add_scalar(f.neg(Fe::ONE));
        stacked.extend(m.row_vecs());
    }
    if stacked.is_empty() {
        return n;
    }
    let rows = stacked.len();
    n - Mat::from_rows(f, &stacked, n).rank().min(n).min(rows)
}

/// `(1/|H|) sum_h tr M(h)` as a field element, or `None` when `|H|` is zero in the field.
pub fn fixed_vectors_by_trace(rep: &MatRep, h: &SubgroupHandle) -> Option<Fe> {
    let f = &rep.field;
    let elems = rep.group.subgroup_elements(h);
    let order = f.from_int((elems.len() as u64 % f.characteristic()) as i64);
    if order.is_zero() {
        return None;
    }
    let mut acc = Fe::ZERO;
    for &e in &elems {
        acc = f.add(acc, rep.image(e).trace());
    }
    Some(f.div(acc, order))
}
