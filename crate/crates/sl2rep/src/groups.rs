//! Explicit finite matrix groups `GL2`, `SL2` over `F_q` and `Z/p^n`, with
//! distinguished subgroups, conjugacy classes and double cosets.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::exactla::{is_prime, FieldDesc};

/// Default cap on enumerated group orders.
pub const GROUP_CAP: usize = 5_000_000;

/// 2x2 matrix `[a, b, c, d]` with entries given by their canonical integer lifts.
pub type M2 = [u32; 4];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Field(FieldDesc),
    Zpn { n: u32, modulus: u64 },
}

/// `F_p`, `F_q` or `Z/p^n`. Elements are canonical lifts in `0..size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    pub p: u64,
    pub kind: RingKind,
}

impl FiniteRing {
    pub fn field(p: u64, k: u32) -> Result<FiniteRing> {
        Ok(FiniteRing { p, kind: RingKind::Field(FieldDesc::new(p, k)?) })
    }
    pub fn prime_field(p: u64) -> Result<FiniteRing> {
        FiniteRing::field(p, 1)
    }
    pub fn zpn(p: u64, n: u32) -> Result<FiniteRing> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if n == 0 {
            return invalid("n must be at least 1");
        }
        let modulus = p.checked_pow(n).filter(|&m| m < (1 << 31)).ok_or_else(|| Error::ResourceLimit("p^n too large".into()))?;
        Ok(FiniteRing { p, kind: RingKind::Zpn { n, modulus } })
    }

    pub fn size(&self) -> u64 {
        match &self.kind {
            RingKind::Field(f) => f.order(),
            RingKind::Zpn { modulus, .. } => *modulus,
        }
    }

    pub fn field_desc(&self) -> Option<&FieldDesc> {
        match &self.kind {
            RingKind::Field(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, RingKind::Field(_))
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.kind {
            RingKind::Field(f) => f.to_poly(f.add(f.from_poly(a), f.from_poly(b))),
            RingKind::Zpn { modulus, .. } => ((a as u64 + b as u64) % modulus) as u32,
        }
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.kind {
            RingKind::Field(f) => f.to_poly(f.mul(f.from_poly(a), f.from_poly(b))),
            RingKind::Zpn { modulus, .. } => (a as u64 * b as u64 % modulus) as u32,
        }
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match &self.kind {
            RingKind::Field(f) => f.to_poly(f.neg(f.from_poly(a))),
            RingKind::Zpn { modulus, .. } => ((modulus - a as u64) % modulus) as u32,
        }
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    pub fn is_unit(&self, a: u32) -> bool {
        match &self.kind {
            RingKind::Field(_) => a != 0,
            RingKind::Zpn { .. } => a as u64 % self.p != 0,
        }
    }
    pub fn inv(&self, a: u32) -> Option<u32> {
        if !self.is_unit(a) {
            return None;
        }
        match &self.kind {
            RingKind::Field(f) => Some(f.to_poly(f.inv(f.from_poly(a)))),
            RingKind::Zpn { modulus, .. } => {
                let (mut t, mut nt) = (0i64, 1i64);
                let (mut r, mut nr) = (*modulus as i64, a as i64);
                while nr != 0 {
                    let q = r / nr;
                    (t, nt) = (nt, t - q * nt);
                    (r, nr) = (nr, r - q * nr);
                }
                Some(t.rem_euclid(*modulus as i64) as u32)
            }
        }
    }
    pub fn from_int(&self, n: i64) -> u32 {
        match &self.kind {
            RingKind::Field(f) => f.to_poly(f.from_int(n)),
            RingKind::Zpn { modulus, .. } => n.rem_euclid(*modulus as i64) as u32,
        }
    }
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32 % self.size() as u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// `p`-adic valuation of a lift in `Z/p^n`, capped at `n`; fields: 0 or 1 (for zero).
    pub fn valuation(&self, a: u32) -> u32 {
        match &self.kind {
            RingKind::Field(_) => u32::from(a == 0),
            RingKind::Zpn { n, .. } => {
                if a == 0 {
                    return *n;
                }
                let mut v = 0;
                let mut x = a as u64;
                while x % self.p == 0 {
                    x /= self.p;
                    v += 1;
                }
                v
            }
        }
    }

    pub fn level(&self) -> u32 {
        match &self.kind {
            RingKind::Field(_) => 1,
            RingKind::Zpn { n, .. } => *n,
        }
    }

    /// Generators of the additive group as a `Z`-module.
    pub fn additive_basis(&self) -> Vec<u32> {
        match &self.kind {
            RingKind::Field(f) => (0..f.degree()).map(|i| (f.characteristic() as u32).pow(i)).collect(),
            RingKind::Zpn { .. } => vec![1],
        }
    }

    pub fn units(&self) -> Vec<u32> {
        (0..self.size() as u32).filter(|&a| self.is_unit(a)).collect()
    }

    /// Generators of the subgroup `{u : u = 1 mod p^e}` of the unit group (`e = 0`: all units),
    /// chosen greedily in canonical order.
    pub fn unit_subgroup_generators(&self, e: u32) -> Vec<u32> {
        let members: Vec<u32> = self.units().into_iter().filter(|&u| e == 0 || self.valuation(self.sub(u, 1)) >= e).collect();
        let mut span: std::collections::HashSet<u32> = [1 % self.size() as u32].into_iter().collect();
        let mut gens = Vec::new();
        for &u in &members {
            if span.contains(&u) {
                continue;
            }
            gens.push(u);
            let mut frontier: Vec<u32> = span.iter().copied().collect();
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if span.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            if span.len() == members.len() {
                break;
            }
        }
        gens
    }

    pub fn unit_generators(&self) -> Vec<u32> {
        self.unit_subgroup_generators(0)
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            RingKind::Field(f) if f.degree() == 1 => format!("F_{}", self.p),
            RingKind::Field(f) => format!("F_{}", f.order()),
            RingKind::Zpn { n, .. } => format!("Z/{}^{}", self.p, n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    GL2,
    SL2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub ring: FiniteRing,
    pub kind: GroupKind,
}

impl GroupSpec {
    pub fn gl2(ring: FiniteRing) -> GroupSpec {
        GroupSpec { ring, kind: GroupKind::GL2 }
    }
    pub fn sl2(ring: FiniteRing) -> GroupSpec {
        GroupSpec { ring, kind: GroupKind::SL2 }
    }

    /// Closed-form group order.
    pub fn order_formula(&self) -> u128 {
        let p = self.ring.p as u128;
        let n = self.ring.level();
        let q = self.ring.size() as u128;
        match (&self.ring.kind, self.kind) {
            (RingKind::Field(_), GroupKind::GL2) => (q * q - 1) * (q * q - q),
            (RingKind::Field(_), GroupKind::SL2) => q * (q * q - 1),
            (RingKind::Zpn { .. }, GroupKind::GL2) => p.pow(4 * n - 4) * (p * p - 1) * (p * p - p),
            (RingKind::Zpn { .. }, GroupKind::SL2) => p.pow(3 * n - 2) * (p * p - 1),
        }
    }

    pub fn mul(&self, x: &M2, y: &M2) -> M2 {
        let r = &self.ring;
        [
            r.add(r.mul(x[0], y[0]), r.mul(x[1], y[2])),
            r.add(r.mul(x[0], y[1]), r.mul(x[1], y[3])),
            r.add(r.mul(x[2], y[0]), r.mul(x[3], y[2])),
            r.add(r.mul(x[2], y[1]), r.mul(x[3], y[3])),
        ]
    }

    pub fn det(&self, x: &M2) -> u32 {
        let r = &self.ring;
        r.sub(r.mul(x[0], x[3]), r.mul(x[1], x[2]))
    }

    pub fn inv(&self, x: &M2) -> M2 {
        let r = &self.ring;
        let di = r.inv(self.det(x)).expect("group element has unit determinant");
        [r.mul(x[3], di), r.neg(r.mul(x[1], di)), r.neg(r.mul(x[2], di)), r.mul(x[0], di)]
    }

    pub fn identity(&self) -> M2 {
        [1, 0, 0, 1]
    }

    pub fn contains(&self, x: &M2) -> bool {
        let d = self.det(x);
        match self.kind {
            GroupKind::GL2 => self.ring.is_unit(d),
            GroupKind::SL2 => d == 1,
        }
    }

    pub fn diag(&self, a: u32, d: u32) -> M2 {
        [a, 0, 0, d]
    }

    /// Standard generators: torus, elementary unipotents and a Weyl element.
    pub fn generators(&self) -> Vec<M2> {
        let r = &self.ring;
        let mut gens = Vec::new();
        match self.kind {
            GroupKind::GL2 => {
                for u in r.unit_generators() {
                    gens.push([u, 0, 0, 1]);
                    gens.push([1, 0, 0, u]);
                }
                for b in r.additive_basis() {
                    gens.push([1, b, 0, 1]);
                }
                gens.push([0, 1, 1, 0]);
            }
            GroupKind::SL2 => {
                for u in r.unit_generators() {
                    gens.push([u, 0, 0, r.inv(u).unwrap()]);
                }
                for b in r.additive_basis() {
                    gens.push([1, b, 0, 1]);
                }
                for b in r.additive_basis() {
                    gens.push([1, 0, b, 1]);
                }
                gens.push([0, 1, r.neg(1), 0]);
            }
        }
        gens.retain(|g| *g != [1, 0, 0, 1]);
        gens
    }

    pub fn describe(&self) -> String {
        format!("{:?}({})", self.kind, self.ring.describe())
    }
}

/// An enumerated group with a breadth-first word table over its generators.
pub struct Group {
    pub spec: GroupSpec,
    pub elems: Vec<M2>,
    pub index: HashMap<M2, u32>,
    pub gens: Vec<M2>,
    pub gen_idx: Vec<u32>,
    // element i = parent[i] * gens[parent_gen[i]]; the identity is its own parent
    parent: Vec<u32>,
    parent_gen: Vec<u16>,
    pub identity: u32,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group({}, order {})", self.spec.describe(), self.elems.len())
    }
}

impl Group {
    /// Enumerate the group generated by `gens` inside `spec`, sorted canonically.
    pub fn generated(spec: &GroupSpec, gens: &[M2], cap: usize) -> Result<Group> {
        let id = spec.identity();
        let mut bfs: Vec<M2> = vec![id];
        let mut bfs_parent = vec![0u32];
        let mut bfs_gen = vec![0u16];
        let mut seen: HashMap<M2, u32> = HashMap::new();
        seen.insert(id, 0);
        let mut i = 0;
        while i < bfs.len() {
            let x = bfs[i];
            for (gi, g) in gens.iter().enumerate() {
                let y = spec.mul(&x, g);
                if !seen.contains_key(&y) {
                    if bfs.len() >= cap {
                        return Err(Error::ResourceLimit(format!("group order exceeds cap {cap}")));
                    }
                    seen.insert(y, bfs.len() as u32);
                    bfs.push(y);
                    bfs_parent.push(i as u32);
                    bfs_gen.push(gi as u16);
                }
            }
            i += 1;
        }
        let mut order: Vec<u32> = (0..bfs.len() as u32).collect();
        order.sort_by_key(|&k| bfs[k as usize]);
        let mut new_of_old = vec![0u32; bfs.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old as usize] = new as u32;
        }
        let elems: Vec<M2> = order.iter().map(|&o| bfs[o as usize]).collect();
        let index: HashMap<M2, u32> = elems.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let mut parent = vec![0u32; elems.len()];
        let mut parent_gen = vec![0u16; elems.len()];
        for old in 0..bfs.len() {
            let new = new_of_old[old] as usize;
            parent[new] = new_of_old[bfs_parent[old] as usize];
            parent_gen[new] = bfs_gen[old];
        }
        let identity = index[&id];
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok(Group { spec: spec.clone(), elems, index, gens: gens.to_vec(), gen_idx, parent, parent_gen, identity })
    }

    /// Enumerate the full group of `spec`; the order is checked against its closed form.
    pub fn enumerate(spec: &GroupSpec, cap: usize) -> Result<Group> {
        let expected = spec.order_formula();
        if expected > cap as u128 {
            return Err(Error::ResourceLimit(format!("|{}| = {expected} exceeds cap {cap}", spec.describe())));
        }
        let g = Group::generated(spec, &spec.generators(), cap)?;
        if g.order() as u128 != expected {
            return Err(Error::Internal(format!("enumerated {} elements, expected {expected}", g.order())));
        }
        Ok(g)
    }

    pub fn new(spec: &GroupSpec) -> Result<Arc<Group>> {
        Ok(Arc::new(Group::enumerate(spec, GROUP_CAP)?))
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn idx(&self, x: &M2) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.index[&self.spec.mul(&self.elems[a as usize], &self.elems[b as usize])]
    }

    pub fn inv_idx(&self, a: u32) -> u32 {
        self.index[&self.spec.inv(&self.elems[a as usize])]
    }

    /// Generator word (indices into `gens`) whose product is the element.
    pub fn word(&self, mut i: u32) -> Vec<usize> {
        let mut w = Vec::new();
        while i != self.identity {
            w.push(self.parent_gen[i as usize] as usize);
            i = self.parent[i as usize];
        }
        w.reverse();
        w
    }

    pub fn parent_of(&self, i: u32) -> Option<(u32, usize)> {
        if i == self.identity {
            None
        } else {
            Some((self.parent[i as usize], self.parent_gen[i as usize] as usize))
        }
    }

    /// Elements in breadth-first order (parents before children).
    pub fn bfs_order(&self) -> Vec<u32> {
        let mut depth = vec![u32::MAX; self.order()];
        depth[self.identity as usize] = 0;
        fn d(g: &Group, depth: &mut Vec<u32>, i: u32) -> u32 {
            if depth[i as usize] != u32::MAX {
                return depth[i as usize];
            }
            let v = d(g, depth, g.parent[i as usize]) + 1;
            depth[i as usize] = v;
            v
        }
        for i in 0..self.order() as u32 {
            d(self, &mut depth, i);
        }
        let mut order: Vec<u32> = (0..self.order() as u32).collect();
        order.sort_by_key(|&i| (depth[i as usize], i));
        order
    }

    pub fn elem_order(&self, i: u32) -> u64 {
        let x = self.elems[i as usize];
        let mut y = x;
        let mut k = 1;
        while self.index[&y] != self.identity {
            y = self.spec.mul(&y, &x);
            k += 1;
        }
        k
    }

    /// Conjugacy classes as (representative, size), representatives canonical-minimal.
    pub fn conjugacy_classes(&self) -> Vec<(M2, usize)> {
        let n = self.order();
        let mut seen = vec![false; n];
        let inv_gens: Vec<M2> = self.gens.iter().map(|g| self.spec.inv(g)).collect();
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start as u32];
            let mut size = 0;
            while let Some(x) = stack.pop() {
                size += 1;
                let xm = self.elems[x as usize];
                for (g, gi) in self.gens.iter().zip(&inv_gens) {
                    let y = self.index[&self.spec.mul(&self.spec.mul(gi, &xm), g)];
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
            }
            out.push((self.elems[start], size));
        }
        out
    }

    /// Classes of elements of order prime to `ell`.
    pub fn regular_classes(&self, ell: u64) -> Vec<(M2, usize)> {
        self.conjugacy_classes().into_iter().filter(|(r, _)| self.elem_order(self.index[r]) % ell != 0).collect()
    }

    /// Enumerate a subgroup as a sorted list of indices.
    pub fn subgroup_elements(&self, h: &SubgroupHandle) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        seen[self.identity as usize] = true;
        let mut stack = vec![self.identity];
        let gens: Vec<M2> = h.gens.clone();
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = self.index[&self.spec.mul(&self.elems[x as usize], g)];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order() as u32).filter(|&i| seen[i as usize]).collect()
    }

    /// Double cosets `H x K` as (canonical-minimal representative, size).
    pub fn double_cosets(&self, h: &SubgroupHandle, k: &SubgroupHandle) -> Vec<(M2, usize)> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start as u32];
            let mut size = 0;
            while let Some(x) = stack.pop() {
                size += 1;
                let xm = self.elems[x as usize];
                for g in &h.gens {
                    let y = self.index[&self.spec.mul(g, &xm)];
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
                for g in &k.gens {
                    let y = self.index[&self.spec.mul(&xm, g)];
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
            }
            out.push((self.elems[start], size));
        }
        out
    }

    /// Right cosets `H g`: returns (representatives in canonical order, coset index of each element).
    pub fn right_cosets(&self, h_elems: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let n = self.order();
        let mut coset_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n as u32 {
            if coset_of[g as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(g);
            for &hh in h_elems {
                let y = self.mul_idx(hh, g);
                coset_of[y as usize] = c;
            }
        }
        (reps, coset_of)
    }
}

/// Named subgroups and their membership predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupKind {
    Borel,
    BorelMinus,
    Unipotent,
    UnipotentMinus,
    Torus,
    Center,
    SL2,
    BorelSL2,
    CenterSL2,
    Trivial,
    /// `{x : v(x11 - 1) >= e[0], v(x12) >= e[1], v(x21) >= e[2], v(x22 - 1) >= e[3]}`, with `det = 1` when `det1`.
    Box { e: [u32; 4], det1: bool },
    Generated,
}

#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    pub name: String,
    pub kind: SubgroupKind,
    pub gens: Vec<M2>,
}

impl SubgroupHandle {
    pub fn new(spec: &GroupSpec, kind: SubgroupKind) -> SubgroupHandle {
        let r = &spec.ring;
        let units = r.unit_generators();
        let basis = r.additive_basis();
        let upper: Vec<M2> = basis.iter().map(|&b| [1, b, 0, 1]).collect();
        let lower: Vec<M2> = basis.iter().map(|&b| [1, 0, b, 1]).collect();
        let torus: Vec<M2> = units.iter().flat_map(|&u| [[u, 0, 0, 1], [1, 0, 0, u]]).collect();
        let torus1: Vec<M2> = units.iter().map(|&u| [u, 0, 0, r.inv(u).unwrap()]).collect();
        let center: Vec<M2> = units.iter().map(|&u| [u, 0, 0, u]).collect();
        let (name, gens): (String, Vec<M2>) = match &kind {
            SubgroupKind::Borel => ("B".into(), [torus.clone(), upper.clone()].concat()),
            SubgroupKind::BorelMinus => ("B-".into(), [torus.clone(), lower.clone()].concat()),
            SubgroupKind::Unipotent => ("U".into(), upper.clone()),
            SubgroupKind::UnipotentMinus => ("U-".into(), lower.clone()),
            SubgroupKind::Torus => ("T".into(), torus.clone()),
            SubgroupKind::Center => ("Z".into(), center),
            SubgroupKind::SL2 => ("SL2".into(), GroupSpec::sl2(r.clone()).generators()),
            SubgroupKind::BorelSL2 => ("B'".into(), [torus1.clone(), upper.clone()].concat()),
            SubgroupKind::CenterSL2 => {
                let gens = r.units().into_iter().filter(|&u| r.mul(u, u) == 1).map(|u| [u, 0, 0, u]).collect();
                ("Z'".into(), gens)
            }
            SubgroupKind::Trivial => ("1".into(), Vec::new()),
            SubgroupKind::Box { e, det1 } => (format!("box{:?}{}", e, if *det1 { "'" } else { "" }), box_generators(r, *e, *det1)),
            SubgroupKind::Generated => ("generated".into(), Vec::new()),
        };
        let mut gens = gens;
        gens.retain(|g| *g != [1, 0, 0, 1]);
        SubgroupHandle { name, kind, gens }
    }

    pub fn from_gens(name: &str, gens: Vec<M2>) -> SubgroupHandle {
        SubgroupHandle { name: name.into(), kind: SubgroupKind::Generated, gens }
    }

    /// Membership predicate (None for subgroups only known by generators).
    pub fn contains(&self, spec: &GroupSpec, x: &M2) -> Option<bool> {
        let r = &spec.ring;
        let det = spec.det(x);
        let in_g = spec.contains(x);
        Some(
            in_g && match &self.kind {
                SubgroupKind::Borel => x[2] == 0,
                SubgroupKind::BorelMinus => x[1] == 0,
                SubgroupKind::Unipotent => x[0] == 1 && x[2] == 0 && x[3] == 1,
                SubgroupKind::UnipotentMinus => x[0] == 1 && x[1] == 0 && x[3] == 1,
                SubgroupKind::Torus => x[1] == 0 && x[2] == 0,
                SubgroupKind::Center => x[1] == 0 && x[2] == 0 && x[0] == x[3],
                SubgroupKind::SL2 => det == 1,
                SubgroupKind::BorelSL2 => x[2] == 0 && det == 1,
                SubgroupKind::CenterSL2 => x[1] == 0 && x[2] == 0 && x[0] == x[3] && det == 1,
                SubgroupKind::Trivial => *x == [1, 0, 0, 1],
                SubgroupKind::Box { e, det1 } => {
                    let n = r.level();
                    (!det1 || det == 1)
                        && r.valuation(r.sub(x[0], 1)) >= e[0].min(n)
                        && r.valuation(x[1]) >= e[1].min(n)
                        && r.valuation(x[2]) >= e[2].min(n)
                        && r.valuation(r.sub(x[3], 1)) >= e[3].min(n)
                }
                SubgroupKind::Generated => return None,
            },
        )
    }

    /// Check that the generator closure agrees with the membership predicate.
    pub fn verify(&self, g: &Group) -> bool {
        let elems = g.subgroup_elements(self);
        let mut member = vec![false; g.order()];
        for &e in &elems {
            member[e as usize] = true;
        }
        (0..g.order()).all(|i| match self.contains(&g.spec, &g.elems[i]) {
            Some(b) => b == member[i],
            None => true,
        })
    }
}

/// Generators of a valuation-box subgroup of `GL2`/`SL2` over `Z/p^n` (or a field).
pub fn box_generators(r: &FiniteRing, e: [u32; 4], det1: bool) -> Vec<M2> {
    let n = r.level();
    let p = r.p as u32;
    let pw = |k: u32| -> u32 { if k >= n { 0 } else { r.pow(p % r.size() as u32, k as u64) } };
    let mut gens = Vec::new();
    if r.is_field() {
        // over a field only valuations 0 and >= 1 matter
        for b in r.additive_basis() {
            if e[1] == 0 {
                gens.push([1, b, 0, 1]);
            }
            if e[2] == 0 {
                gens.push([1, 0, b, 1]);
            }
        }
    } else {
        gens.push([1, pw(e[1]), 0, 1]);
        gens.push([1, 0, pw(e[2]), 1]);
    }
    if det1 {
        debug_assert_eq!(e[0], e[3]);
        for u in r.unit_subgroup_generators(e[0].min(n)) {
            gens.push([u, 0, 0, r.inv(u).unwrap()]);
        }
    } else {
        for u in r.unit_subgroup_generators(e[0].min(n)) {
            gens.push([u, 0, 0, 1]);
        }
        for u in r.unit_subgroup_generators(e[3].min(n)) {
            gens.push([1, 0, 0, u]);
        }
    }
    gens.retain(|g| *g != [1, 0, 0, 1]);
    gens.sort();
    gens.dedup();
    gens
}
