//! Finite-level computations for `SL2(Q_p)`: double-coset census for the
//! Moy-Prasad filtration subgroups and invariant dimensions of depth-zero
//! compactly induced representations via an explicit Mackey sum.
//!
//! Everything reduces to orbits on `P^1(Z/p^N)`: since `B'\G'` is `P^1(F)` through
//! the bottom row, `B'\G'/H` is the set of `H`-orbits on `P^1(Z_p)`, and `H`
//! contains the principal congruence subgroup of its level.

use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::groups::{box_generators, FiniteRing, Group, SubgroupHandle, M2};
use crate::meataxe;
use crate::reps::{self, fixed_vectors, prime_power, IrrepLabel, MatRep, Setting};

/// Largest projective line we are willing to enumerate.
pub const P1_CAP: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `K'_j = 1 + p^j M2(O)` (and `K'_0 = SL2(O)`)
    K,
    /// `d K'_j d^-1` with `d = diag(1, p)`
    #[serde(rename = "dK")]
    KConj,
    /// `I'_j`
    I,
    /// `I'_{j+1/2}`
    #[serde(rename = "I-half")]
    IHalf,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "K" => Ok(Family::K),
            "dK" | "dKd" => Ok(Family::KConj),
            "I" => Ok(Family::I),
            "I-half" | "Ihalf" | "I_half" => Ok(Family::IHalf),
            _ => invalid(format!("unknown subgroup family {s:?} (expected K, dK, I, I-half)")),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::K => "K",
            Family::KConj => "dK",
            Family::I => "I",
            Family::IHalf => "I-half",
        })
    }
}

/// A filtration subgroup, indexed literally: `K'_j`, `dK'_jd^-1`, `I'_j` or `I'_{j+1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MPSubgroup {
    pub family: Family,
    pub j: u32,
}

impl MPSubgroup {
    pub fn new(family: Family, j: u32) -> MPSubgroup {
        MPSubgroup { family, j }
    }

    /// Valuations `(e11, e12, e21, e22)` of `x - 1` (diagonal) and `x` (off-diagonal).
    /// For the conjugated family this is the box before conjugating by `d`.
    pub fn box_exponents(&self) -> [u32; 4] {
        let j = self.j;
        match self.family {
            Family::K | Family::KConj => [j; 4],
            Family::I => [j, j + 1, j, j],
            Family::IHalf => [j + 1, j + 1, j, j + 1],
        }
    }

    pub fn level(&self) -> u32 {
        self.box_exponents().into_iter().max().unwrap_or(0)
    }

    /// Twice the filtration index.
    pub fn index2(&self) -> u32 {
        match self.family {
            Family::IHalf => 2 * self.j + 1,
            _ => 2 * self.j,
        }
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::K => format!("K'_{}", self.j),
            Family::KConj => format!("dK'_{}d^-1", self.j),
            Family::I => format!("I'_{}", self.j),
            Family::IHalf => format!("I'_{}+1/2", self.j),
        }
    }
}

/// Subgroup counted by census index `j`: the `K` families start at `K'_1`.
pub fn census_subgroup(family: Family, j: u32) -> MPSubgroup {
    match family {
        Family::K | Family::KConj => MPSubgroup::new(family, j + 1),
        _ => MPSubgroup::new(family, j),
    }
}

/// Closed form for the census: `(q+1)q^j` for the `K` families, `2q^j` for the Iwahori ones.
pub fn census_formula(family: Family, q: u64, j: u32) -> u64 {
    match family {
        Family::K | Family::KConj => (q + 1) * q.pow(j),
        Family::I | Family::IHalf => 2 * q.pow(j),
    }
}

/// `P^1(Z/p^n)`: points `(x:1)` get index `x`, points `(1:py)` get `p^n + y`.
struct P1 {
    p: u64,
    pn: u64,
}

impl P1 {
    fn new(p: u64, n: u32) -> Result<P1> {
        let pn = p.checked_pow(n).filter(|&v| v + v / p <= P1_CAP);
        match pn {
            Some(pn) => Ok(P1 { p, pn }),
            None => Err(Error::ResourceLimit(format!("P^1(Z/{p}^{n}) is too large to enumerate"))),
        }
    }

    fn size(&self) -> usize {
        if self.pn == 1 {
            1
        } else {
            (self.pn + self.pn / self.p) as usize
        }
    }

    fn point(&self, i: usize) -> (u64, u64) {
        let i = i as u64;
        if i < self.pn {
            (i, 1 % self.pn)
        } else {
            (1 % self.pn, (i - self.pn) * self.p % self.pn)
        }
    }

    fn index(&self, c: u64, d: u64) -> usize {
        let m = self.pn;
        if m == 1 {
            return 0;
        }
        if d % self.p != 0 {
            let di = reps::mod_inverse(d, m).expect("unit");
            (c * di % m) as usize
        } else {
            let ci = reps::mod_inverse(c, m).expect("primitive vector");
            (m + (d * ci % m) / self.p) as usize
        }
    }

    /// Right action on row vectors.
    fn act(&self, i: usize, g: &M2) -> usize {
        let m = self.pn;
        let (c, d) = self.point(i);
        let g = g.map(|x| x as u64 % m);
        self.index((c * g[0] + d * g[2]) % m, (c * g[1] + d * g[3]) % m)
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

fn ring(p: u64, n: u32) -> Result<FiniteRing> {
    FiniteRing::zpn(p, n.max(1))
}

/// Number of orbits of the group generated by `gens` on the subset `pts` (assumed stable).
fn orbits_on(line: &P1, gens: &[M2], pts: &[usize]) -> usize {
    let mut dsu = Dsu::new(line.size());
    for &i in pts {
        for g in gens {
            dsu.union(i, line.act(i, g));
        }
    }
    let roots: BTreeSet<usize> = pts.iter().map(|&i| dsu.find(i)).collect();
    roots.len()
}

fn orbit_of(line: &P1, gens: &[M2], start: usize) -> Vec<usize> {
    let mut seen = vec![false; line.size()];
    seen[start] = true;
    let mut out = vec![start];
    let mut k = 0;
    while k < out.len() {
        let x = out[k];
        for g in gens {
            let y = line.act(x, g);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
        k += 1;
    }
    out
}

fn check_prime(p: u64) -> Result<()> {
    match prime_power(p) {
        Some((_, 1)) => Ok(()),
        _ => invalid(format!("{p} is not a prime; finite-level models are over Q_p")),
    }
}

/// `|B'\G'/H|` (or `|B\G/H_GL2|` when `det1` is false) by orbit enumeration.
pub fn orbit_count(p: u64, h: &MPSubgroup, det1: bool) -> Result<u64> {
    check_prime(p)?;
    // conjugating by d intertwines the dK family with the K family on P^1(F)
    let n = h.level();
    let line = P1::new(p, n)?;
    let gens = box_generators(&ring(p, n)?, h.box_exponents(), det1);
    let all: Vec<usize> = (0..line.size()).collect();
    Ok(orbits_on(&line, &gens, &all) as u64)
}

/// `|B'\G'/H_j|` for the census subgroup of index `j`.
pub fn coset_census(family: Family, p: u64, j: u32) -> Result<u64> {
    orbit_count(p, &census_subgroup(family, j), true)
}

/// Whether `B\G/H_GL2 -> B'\G'/H` is a bijection, compared by cardinality
/// (the map is always surjective).
pub fn bijection_check(family: Family, p: u64, j: u32) -> Result<bool> {
    let h = census_subgroup(family, j);
    Ok(orbit_count(p, &h, true)? == orbit_count(p, &h, false)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    /// Cells of even determinant valuation: the part supported on `ZK_0 G'`.
    Plus,
    Minus,
    Both,
}

impl Parity {
    fn admits(self, a: i64) -> bool {
        match self {
            Parity::Plus => a % 2 == 0,
            Parity::Minus => a % 2 != 0,
            Parity::Both => true,
        }
    }
    fn flip(self) -> Parity {
        match self {
            Parity::Plus => Parity::Minus,
            Parity::Minus => Parity::Plus,
            Parity::Both => Parity::Both,
        }
    }
}

/// `c-ind_{ZK_0}^G lambda` for a cuspidal `lambda` of `GL2(F_p)` inflated to `K_0`,
/// restricted to `G'`, with the `K'_0` part of `lambda` replaced by `local`
/// (all of `lambda|SL2`, or one constituent).
#[derive(Clone, Debug)]
pub struct InducingDatum {
    pub setting: Arc<Setting>,
    pub label: IrrepLabel,
    pub local: MatRep,
    pub parity: Parity,
    /// Number of constituents of `lambda|SL2` sharing the invariants; `local` is one of them
    /// (1 when `local` is the whole restriction).
    pub pieces: usize,
    pub name: String,
}

impl InducingDatum {
    pub fn new(s: &Arc<Setting>, label: &IrrepLabel, parity: Parity) -> Result<InducingDatum> {
        let label = label.normalize(s)?;
        let local = reps::restrict_to_sl2(s, &reps::construct(s, &label)?)?;
        Self::with_local(s, &label, local, parity, 1, format!("{}{}", sign(parity), label))
    }

    fn with_local(s: &Arc<Setting>, label: &IrrepLabel, local: MatRep, parity: Parity, pieces: usize, name: String) -> Result<InducingDatum> {
        if s.q != s.p {
            return Err(Error::Unsupported("Mackey sums are implemented over Q_p only".into()));
        }
        let u = SubgroupHandle::from_gens("U", vec![[1, 1, 0, 1]]);
        if fixed_vectors(&local, &u) != 0 {
            return invalid(format!("{label} is not cuspidal: it has U-fixed vectors"));
        }
        Ok(InducingDatum { setting: s.clone(), label: label.clone(), local, parity, pieces, name })
    }

    /// The members of the `L`-packet of `c-ind lambda`: both parities times the
    /// constituents of `lambda|SL2(F_q)`.
    pub fn packet_members(s: &Arc<Setting>, label: &IrrepLabel, seed: u64) -> Result<Vec<InducingDatum>> {
        let label = label.normalize(s)?;
        let full = reps::restrict_to_sl2(s, &reps::construct(s, &label)?)?;
        let report = meataxe::decompose(&full, seed)?;
        if report.field != full.field {
            return Err(Error::Internal("restriction did not split over the coefficient field".into()));
        }
        let parts: Vec<MatRep> = report.constituents.into_iter().map(|(r, _)| r).collect();
        let mut out = Vec::new();
        for parity in [Parity::Plus, Parity::Minus] {
            if parts.len() == 1 {
                out.push(Self::with_local(s, &label, full.clone(), parity, 1, format!("{}{}", sign(parity), label))?);
            } else {
                for (i, r) in parts.iter().enumerate() {
                    let name = format!("{}{}[{}]", sign(parity), label, i + 1);
                    out.push(Self::with_local(s, &label, r.clone(), parity, parts.len(), name)?);
                }
            }
        }
        Ok(out)
    }

    /// Closed form for `dim Pi^H` with `a_Pi = -2`: `q^{2m+1} - 1` and `q^{2m} - 1` on the
    /// congruence subgroups, `(a_Pi + 2q^j)/2` per half on the Iwahori family, shared
    /// evenly between the constituents.
    pub fn formula(&self, h: &MPSubgroup) -> Option<i64> {
        let q = self.setting.q as i64;
        let j = h.j;
        let (family, parity) = match h.family {
            Family::KConj => (Family::K, self.parity.flip()),
            f => (f, self.parity),
        };
        let full = match family {
            Family::K => {
                if j == 0 {
                    return Some(0);
                }
                let plus = q.pow(2 * ((j - 1) / 2) + 1) - 1;
                let minus = if j == 1 { 0 } else { q.pow(2 * (j / 2)) - 1 };
                match parity {
                    Parity::Plus => plus,
                    Parity::Minus => minus,
                    Parity::Both => plus + minus,
                }
            }
            _ => {
                let both = -2 + 2 * q.pow(j);
                if parity == Parity::Both {
                    both
                } else {
                    both / 2
                }
            }
        };
        Some(full / self.pieces as i64)
    }
}

fn sign(p: Parity) -> &'static str {
    match p {
        Parity::Plus => "Pi+ ",
        Parity::Minus => "Pi- ",
        Parity::Both => "Pi ",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MackeyTerm {
    /// Cell `ZK_0 diag(p^a, 1) C`.
    pub a: i64,
    /// Double cosets in the cell.
    pub count: u64,
    /// Box of `t_a H t_a^-1 ∩ K'_0`.
    pub local_box: [u32; 4],
    /// Order of its image in `SL2(F_p)`.
    pub image_order: usize,
    pub local_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MackeySum {
    pub subgroup: String,
    pub terms: Vec<MackeyTerm>,
    pub total: u64,
    /// Cells outside this range were shown to contribute nothing: their local
    /// image contains a full unipotent radical.
    pub support: (i64, i64),
}

fn local_image(s: &Setting, e: [u32; 4]) -> Result<Vec<M2>> {
    let p = s.p;
    // the image mod p only sees which exponents vanish
    let r = FiniteRing::zpn(p, 2)?;
    let mut gens: Vec<M2> = box_generators(&r, e.map(|x| x.min(1)), true).into_iter().map(|g| g.map(|x| x % p as u32)).collect();
    gens.retain(|g| *g != [1, 0, 0, 1]);
    gens.sort();
    gens.dedup();
    Ok(gens)
}

/// `dim Pi^H` for a depth-zero datum, as a sum over Mackey cells.
pub fn invariant_dim(datum: &InducingDatum, h: &MPSubgroup) -> Result<MackeySum> {
    if h.family == Family::KConj {
        // conjugation by d swaps the two halves of Pi|G'
        let mut flipped = datum.clone();
        flipped.parity = datum.parity.flip();
        let mut out = invariant_dim(&flipped, &MPSubgroup::new(Family::K, h.j))?;
        out.subgroup = h.name();
        return Ok(out);
    }
    let s = &datum.setting;
    let p = s.p;
    let e = h.box_exponents();
    // the ambient parahoric normalising h
    let (c_box, negative) = match h.family {
        Family::K => ([0, 0, 0, 0], false),
        _ => ([0, 1, 0, 0], true),
    };
    // two cells past each boundary so both parities get a vanishing witness
    let lo = if negative { -(e[1] as i64) - 2 } else { 0 };
    let hi = e[2] as i64 + 2;
    let mut terms = Vec::new();
    let mut total = 0u64;
    let mut image_cache: std::collections::HashMap<[u32; 4], (usize, usize)> = Default::default();
    for a in lo..=hi {
        if !datum.parity.admits(a) {
            continue;
        }
        let lb = [e[0], (e[1] as i64 + a).max(0) as u32, (e[2] as i64 - a).max(0) as u32, e[3]];
        let (image_order, local_dim) = match image_cache.get(&lb) {
            Some(&v) => v,
            None => {
                let gens = local_image(s, lb)?;
                let order = Group::generated(&s.sl2.spec, &gens, s.sl2.order() + 1)?.order();
                let dim = fixed_vectors(&datum.local, &SubgroupHandle::from_gens("L", gens));
                image_cache.insert(lb, (order, dim));
                (order, dim)
            }
        };
        let count = if local_dim == 0 { 0 } else { cell_count(p, a, c_box, e)? };
        total += count * local_dim as u64;
        terms.push(MackeyTerm { a, count, local_box: lb, image_order, local_dim });
    }
    // the extreme cells must already be killed by a unipotent radical
    for t in terms.iter().filter(|t| (negative && t.a <= lo + 1) || t.a >= hi - 1) {
        let unipotent = t.local_box[1] == 0 || t.local_box[2] == 0;
        if !unipotent || t.local_dim != 0 {
            return Err(Error::Internal(format!("Mackey sum does not vanish at cell {}", t.a)));
        }
    }
    Ok(MackeySum { subgroup: h.name(), terms, total, support: (lo, hi) })
}

/// Double cosets of the cell `a`: `H`-orbits on the `C`-orbit of the base point in `P^1(Z/p^|a|)`.
fn cell_count(p: u64, a: i64, c_box: [u32; 4], h_box: [u32; 4]) -> Result<u64> {
    let n = a.unsigned_abs() as u32;
    if n == 0 {
        return Ok(1);
    }
    let line = P1::new(p, n)?;
    let r = ring(p, n)?;
    let x0 = if a > 0 { line.index(0, 1) } else { line.index(1, 0) };
    let orbit = orbit_of(&line, &box_generators(&r, c_box, true), x0);
    Ok(orbits_on(&line, &box_generators(&r, h_box, true), &orbit) as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermRow {
    pub j: u32,
    pub target: u64,
    pub members: Vec<u64>,
    pub difference: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermCheck {
    pub family: Family,
    pub members: Vec<String>,
    pub rows: Vec<GermRow>,
    /// Smallest `j` from which the difference is constant over the remaining range
    /// (at least two points).
    pub threshold: Option<u32>,
    pub a0: Option<i64>,
}

/// Compare `dim (ind_B'^G' 1)^H_j` with the summed invariants of the chosen packet
/// members. The target's invariants are the census `|B'\G'/H_j|`.
pub fn germ_identity_check(members: &[InducingDatum], family: Family, js: std::ops::RangeInclusive<u32>) -> Result<GermCheck> {
    let Some(first) = members.first() else {
        return invalid("germ check needs at least one packet member");
    };
    let p = first.setting.p;
    let mut rows = Vec::new();
    for j in js {
        let h = MPSubgroup::new(family, j);
        let target = orbit_count(p, &h, true)?;
        let dims: Vec<u64> = members.iter().map(|m| invariant_dim(m, &h).map(|x| x.total)).collect::<Result<_>>()?;
        let difference = target as i64 - dims.iter().sum::<u64>() as i64;
        rows.push(GermRow { j, target, members: dims, difference });
    }
    let mut threshold = None;
    if let Some(last) = rows.last() {
        let tail = rows.iter().rev().take_while(|r| r.difference == last.difference).count();
        if tail >= 2 {
            threshold = Some(rows[rows.len() - tail].j);
        }
    }
    let a0 = threshold.map(|_| rows.last().unwrap().difference);
    Ok(GermCheck { family, members: members.iter().map(|m| m.name.clone()).collect(), rows, threshold, a0 })
}
