//! Finite-level models of quadratic extensions `E/Q_p`: the ring `O_E/P_E^n`,
//! its unit group with an explicit presentation, Galois conjugation, norms and
//! finite-order characters of `E^*`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exactla::{gcd, is_prime, lcm, smith_normal_form, IntMat, Snf};

/// Default level `n`: characters are trivial on `1 + P_E^n`.
pub const DEFAULT_LEVEL: u32 = 4;
const UNIT_CAP: usize = 200_000;

/// An element of `Q/Z`, as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frac {
    pub num: u64,
    pub den: u64,
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };

    pub fn new(num: i64, den: u64) -> Frac {
        assert!(den > 0);
        let n = num.rem_euclid(den as i64) as u64;
        let g = gcd(n, den);
        Frac { num: n / g, den: den / g }
    }
    pub fn add(self, o: Frac) -> Frac {
        let d = lcm(self.den, o.den);
        let n = (self.num as u128 * (d / self.den) as u128 + o.num as u128 * (d / o.den) as u128) % d as u128;
        Frac::new(n as i64, d)
    }
    pub fn neg(self) -> Frac {
        Frac::new(-(self.num as i64), self.den)
    }
    pub fn sub(self, o: Frac) -> Frac {
        self.add(o.neg())
    }
    pub fn times(self, k: i64) -> Frac {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Frac::new(n as i64, self.den)
    }
    /// Order in `Q/Z`.
    pub fn order(self) -> u64 {
        self.den
    }
    pub fn is_zero(self) -> bool {
        self.num == 0
    }
    /// Component of prime-to-`ell` order (`ell = 0` keeps everything).
    pub fn ell_regular(self, ell: u64) -> Frac {
        if ell == 0 {
            return self;
        }
        let mr = crate::reps::regular_part(self.den, ell);
        let l = self.den / mr;
        if mr == 1 {
            return Frac::ZERO;
        }
        let linv = crate::reps::mod_inverse(l % mr, mr).expect("coprime");
        Frac::new(((self.num % mr) as u128 * linv as u128 % mr as u128) as i64, mr)
    }
}

impl Default for Frac {
    fn default() -> Frac {
        Frac::ZERO
    }
}

impl Serialize for Frac {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Frac {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Frac, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Frac {
    type Err = Error;
    fn from_str(s: &str) -> Result<Frac> {
        let bad = || Error::InvalidInput(format!("bad fraction {s:?}"));
        match s.trim().split_once('/') {
            Some((a, b)) => {
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                if b == 0 {
                    return Err(bad());
                }
                Ok(Frac::new(a, b))
            }
            None => {
                let a: i64 = s.trim().parse().map_err(|_| bad())?;
                Ok(Frac::new(a, 1))
            }
        }
    }
}

type Elem = (u64, u64);

/// A finite abelian group given by its full element list, with greedy generators,
/// a triangular relation matrix, discrete logs and the Smith form of the relations.
#[derive(Debug)]
pub struct FinAbGroup {
    pub elems: Vec<Elem>,
    index: HashMap<Elem, usize>,
    pub gens: Vec<Elem>,
    pub relations: IntMat,
    logs: Vec<Vec<u64>>,
    pub snf: Snf,
}

impl FinAbGroup {
    fn build(mut elems: Vec<Elem>, one: Elem, mul: &dyn Fn(Elem, Elem) -> Elem) -> Result<FinAbGroup> {
        if elems.len() > UNIT_CAP {
            return Err(Error::ResourceLimit(format!("unit group of order {} exceeds cap", elems.len())));
        }
        elems.sort();
        let index: HashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let n = elems.len();
        let mut logs: Vec<Option<Vec<u64>>> = vec![None; n];
        logs[index[&one]] = Some(Vec::new());
        let mut span = vec![index[&one]];
        let mut gens = Vec::new();
        let mut rel_rows: Vec<Vec<i64>> = Vec::new();
        for (gi, &g) in elems.iter().enumerate() {
            if logs[gi].is_some() {
                continue;
            }
            let j = gens.len();
            gens.push(g);
            // order of g modulo the current span
            let mut m = 1u64;
            let mut pw = g;
            while logs[index[&pw]].as_ref().is_none_or(|l| l.len() > j) {
                pw = mul(pw, g);
                m += 1;
            }
            let prev = logs[index[&pw]].clone().unwrap();
            let mut row = vec![0i64; j + 1];
            for (k, &c) in prev.iter().enumerate() {
                row[k] = -(c as i64);
            }
            row[j] = m as i64;
            rel_rows.push(row);
            let old_span = std::mem::take(&mut span);
            for &s in &old_span {
                let base = logs[s].clone().unwrap();
                let mut x = elems[s];
                for i in 0..m {
                    let xi = index[&x];
                    let mut l = base.clone();
                    l.resize(j, 0);
                    l.push(i);
                    if i > 0 {
                        logs[xi] = Some(l);
                    } else if let Some(e) = logs[xi].as_mut() {
                        e.resize(j + 1, 0);
                    }
                    span.push(xi);
                    x = mul(x, g);
                }
            }
            if span.len() == n {
                break;
            }
        }
        let k = gens.len();
        let logs: Vec<Vec<u64>> = logs
            .into_iter()
            .map(|l| {
                let mut l = l.expect("every element is in the span");
                l.resize(k, 0);
                l
            })
            .collect();
        let rows: Vec<Vec<i64>> = rel_rows
            .into_iter()
            .map(|mut r| {
                r.resize(k, 0);
                r
            })
            .collect();
        let relations = if k == 0 { IntMat::zero(0, 0) } else { IntMat::from_rows(&rows) };
        let snf = smith_normal_form(&relations);
        Ok(FinAbGroup { elems, index, gens, relations, logs, snf })
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn rank(&self) -> usize {
        self.gens.len()
    }
    pub fn contains(&self, x: &Elem) -> bool {
        self.index.contains_key(x)
    }
    /// Exponent vector of `x` against the greedy generators.
    pub fn log(&self, x: &Elem) -> Option<&[u64]> {
        self.index.get(x).map(|&i| self.logs[i].as_slice())
    }
    /// Invariant factors of the group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.snf.diag.iter().filter_map(|d| d.to_u64()).filter(|&d| d > 1).collect()
    }

    /// Value vectors satisfy every relation.
    pub fn respects_relations(&self, vals: &[Frac]) -> bool {
        (0..self.relations.rows).all(|r| {
            let mut acc = Frac::ZERO;
            for (j, v) in vals.iter().enumerate() {
                acc = acc.add(v.times(self.relations.get(r, j).to_i64().unwrap()));
            }
            acc.is_zero()
        })
    }

    /// All characters, as value vectors on the generators.
    pub fn characters(&self) -> Vec<Vec<Frac>> {
        let k = self.rank();
        let d: Vec<u64> = self.snf.diag.iter().map(|x| x.to_u64().unwrap()).collect();
        let mut out = Vec::new();
        let mut idx = vec![0u64; k];
        loop {
            let vals: Vec<Frac> = (0..k)
                .map(|j| {
                    let mut acc = Frac::ZERO;
                    for i in 0..k {
                        let v = self.snf.v.get(j, i).to_i64().unwrap();
                        acc = acc.add(Frac::new(idx[i] as i64, d[i]).times(v));
                    }
                    acc
                })
                .collect();
            out.push(vals);
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                idx[i] += 1;
                if idx[i] < d[i] {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    pub fn eval(&self, vals: &[Frac], x: &Elem) -> Frac {
        let l = self.log(x).expect("element of the group");
        let mut acc = Frac::ZERO;
        for (v, &e) in vals.iter().zip(l) {
            acc = acc.add(v.times(e as i64));
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtKind {
    Unramified,
    /// Uniformizer `x` with `x^2 = p u`.
    Ramified { u: u64 },
}

/// `E/Q_p` at level `n`, modelled on `O_E/P_E^n = {a + b x}` with `x^2 = s x + r`,
/// `a` modulo `p^ea` and `b` modulo `p^eb`.
#[derive(Debug)]
pub struct QuadExt {
    pub p: u64,
    pub kind: ExtKind,
    pub level: u32,
    ea: u32,
    eb: u32,
    s: i64,
    r: i64,
    pub units: FinAbGroup,
    /// Units of `Z_p` modulo `p^level_f`, the level at which norms of level-`n` units are defined.
    pub f_units: FinAbGroup,
    pub level_f: u32,
}

fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let mut r = 1u64;
    let mut b = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn non_residue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a, p) == -1).unwrap()
}

impl QuadExt {
    pub fn new(p: u64, kind: ExtKind, level: u32) -> Result<Arc<QuadExt>> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if level == 0 {
            return invalid("level must be at least 1");
        }
        let (ea, eb, s, r) = match kind {
            ExtKind::Unramified if p == 2 => (level, level, -1, -1),
            ExtKind::Unramified => (level, level, 0, non_residue(p) as i64),
            ExtKind::Ramified { .. } if p == 2 => {
                return Err(Error::Unsupported("ramified quadratic extensions of Q_2".into()));
            }
            ExtKind::Ramified { u } => {
                if u % p == 0 {
                    return invalid("the ramified unit class must be a unit");
                }
                (level.div_ceil(2), level / 2, 0, (p * u) as i64)
            }
        };
        let pa = p.checked_pow(ea).filter(|&x| x < 1 << 31).ok_or_else(|| Error::ResourceLimit("level too large".into()))?;
        let pb = p.pow(eb);
        let mut elems = Vec::new();
        for a in 0..pa {
            for b in 0..pb {
                let unit = match kind {
                    ExtKind::Unramified => a % p != 0 || b % p != 0,
                    ExtKind::Ramified { .. } => a % p != 0,
                };
                if unit {
                    elems.push((a, b));
                }
            }
            if elems.len() > UNIT_CAP {
                return Err(Error::ResourceLimit("unit group exceeds cap".into()));
            }
        }
        let level_f = ea;
        let mul = move |x: Elem, y: Elem| ring_mul(x, y, s, r, pa, pb);
        let units = FinAbGroup::build(elems, (1 % pa, 0), &mul)?;
        let f_elems: Vec<Elem> = (0..pa).filter(|a| a % p != 0).map(|a| (a, 0)).collect();
        let fmul = move |x: Elem, y: Elem| ((x.0 * y.0) % pa, 0);
        let f_units = FinAbGroup::build(f_elems, (1 % pa, 0), &fmul)?;
        Ok(Arc::new(QuadExt { p, kind, level, ea, eb, s, r, units, f_units, level_f }))
    }

    fn pa(&self) -> u64 {
        self.p.pow(self.ea)
    }
    fn pb(&self) -> u64 {
        self.p.pow(self.eb)
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        ring_mul(x, y, self.s, self.r, self.pa(), self.pb())
    }

    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut acc = (1 % self.pa(), 0);
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Galois conjugation `a + b x -> (a + b s) - b x`.
    pub fn tau(&self, x: Elem) -> Elem {
        let (pa, pb) = (self.pa() as i64, self.pb() as i64);
        let (a, b) = (x.0 as i64, x.1 as i64);
        ((a + b * self.s).rem_euclid(pa) as u64, (-b).rem_euclid(pb.max(1)) as u64)
    }

    /// Norm `a^2 + a b s - b^2 r` of a unit, in `(Z/p^level_f)^*`.
    pub fn norm(&self, x: Elem) -> Elem {
        let pa = self.pa() as i128;
        let (a, b) = (x.0 as i128, x.1 as i128);
        let s = self.s as i128;
        let r = self.r as i128;
        (((a * a + a * b * s - b * b * r).rem_euclid(pa)) as u64, 0)
    }

    /// Residue field size `q_E` (`p^2` unramified, `p` ramified) and `q = p` for `F`.
    pub fn residue_degree(&self) -> u32 {
        match self.kind {
            ExtKind::Unramified => 2,
            ExtKind::Ramified { .. } => 1,
        }
    }

    /// Units congruent to 1 modulo `P_E`.
    pub fn is_principal_unit(&self, x: &Elem) -> bool {
        let p = self.p;
        match self.kind {
            ExtKind::Unramified => x.0 % p == 1 % p && x.1 % p == 0,
            ExtKind::Ramified { .. } => x.0 % p == 1 % p,
        }
    }

    /// Teichmuller generator of the roots of unity of order `q_E - 1`.
    pub fn teichmuller_generator(&self) -> Elem {
        let qe = self.p.pow(self.residue_degree());
        let big = qe.pow(self.level);
        let order = qe - 1;
        for &x in &self.units.elems {
            let t = self.pow(x, big);
            // order exactly qe - 1
            let mut ok = self.pow(t, order) == (1 % self.pa(), 0);
            for d in crate::exactla::prime_factors(order) {
                if self.pow(t, order / d) == (1 % self.pa(), 0) {
                    ok = false;
                }
            }
            if ok {
                return t;
            }
        }
        unreachable!("the residue field has a generator")
    }

    pub fn minus_one(&self) -> Elem {
        ((self.pa() - 1) % self.pa(), 0)
    }

    pub fn describe(&self) -> String {
        match self.kind {
            ExtKind::Unramified => format!("unramified E/Q_{} at level {}", self.p, self.level),
            ExtKind::Ramified { u } => format!("Q_{}(sqrt({}*{})) at level {}", self.p, self.p, u, self.level),
        }
    }

    /// All characters of `E^*` trivial on `1 + P_E^level` whose value on the uniformizer
    /// has order dividing `unif_order`.
    pub fn characters(self: &Arc<QuadExt>, unif_order: u64) -> Vec<LocalCharacter> {
        let unit_chars = self.units.characters();
        let mut out = Vec::new();
        for k in 0..unif_order {
            for v in &unit_chars {
                out.push(LocalCharacter { ext: self.clone(), unif: Frac::new(k as i64, unif_order), vals: v.clone() });
            }
        }
        out
    }

    /// Characters `eta` of `F^*` at this level, with `eta(p)` of order dividing `unif_order`,
    /// as (value at p, values on generators of the `F`-units).
    pub fn f_characters(&self, unif_order: u64) -> Vec<(Frac, Vec<Frac>)> {
        let unit_chars = self.f_units.characters();
        let mut out = Vec::new();
        for k in 0..unif_order {
            for v in &unit_chars {
                out.push((Frac::new(k as i64, unif_order), v.clone()));
            }
        }
        out
    }

    /// `eta o N` as a character of `E^*`.
    pub fn compose_norm(self: &Arc<QuadExt>, eta_p: Frac, eta_units: &[Frac]) -> LocalCharacter {
        let vals = self.units.gens.iter().map(|&g| self.f_units.eval(eta_units, &self.norm(g))).collect();
        let unif = match self.kind {
            // N(p) = p^2
            ExtKind::Unramified => eta_p.times(2),
            // N(x) = -p u
            ExtKind::Ramified { u } => {
                let pa = self.pa();
                let w = ((pa - u % pa) % pa, 0);
                eta_p.add(self.f_units.eval(eta_units, &w))
            }
        };
        LocalCharacter { ext: self.clone(), unif, vals }
    }
}

fn ring_mul(x: Elem, y: Elem, s: i64, r: i64, pa: u64, pb: u64) -> Elem {
    let (a, b) = (x.0 as i128, x.1 as i128);
    let (c, d) = (y.0 as i128, y.1 as i128);
    let (s, r) = (s as i128, r as i128);
    let u = (a * c + b * d * r).rem_euclid(pa as i128) as u64;
    let v = (a * d + b * c + b * d * s).rem_euclid(pb as i128) as u64;
    (u, v)
}

/// A character of `E^*` trivial on `1 + P_E^level`: its value on the uniformizer
/// (`p` unramified, `x` ramified) and on the unit-group generators, in `Q/Z`.
#[derive(Clone)]
pub struct LocalCharacter {
    pub ext: Arc<QuadExt>,
    pub unif: Frac,
    pub vals: Vec<Frac>,
}

impl PartialEq for LocalCharacter {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.ext, &o.ext) && self.unif == o.unif && self.vals == o.vals
    }
}

impl fmt::Debug for LocalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vals.iter().map(|x| x.to_string()).collect();
        write!(f, "LocalCharacter({}; unif {}; gens [{}])", self.ext.describe(), self.unif, v.join(", "))
    }
}

impl LocalCharacter {
    pub fn new(ext: &Arc<QuadExt>, unif: Frac, vals: Vec<Frac>) -> Result<LocalCharacter> {
        if vals.len() != ext.units.rank() {
            return invalid(format!("expected {} generator values, got {}", ext.units.rank(), vals.len()));
        }
        if !ext.units.respects_relations(&vals) {
            return invalid("generator values violate the unit-group relations");
        }
        Ok(LocalCharacter { ext: ext.clone(), unif, vals })
    }

    pub fn trivial(ext: &Arc<QuadExt>) -> LocalCharacter {
        LocalCharacter { ext: ext.clone(), unif: Frac::ZERO, vals: vec![Frac::ZERO; ext.units.rank()] }
    }

    pub fn eval_unit(&self, x: &Elem) -> Frac {
        self.ext.units.eval(&self.vals, x)
    }

    pub fn order(&self) -> u64 {
        self.vals.iter().fold(self.unif.order(), |acc, v| lcm(acc, v.order()))
    }

    pub fn mul(&self, o: &LocalCharacter) -> LocalCharacter {
        LocalCharacter {
            ext: self.ext.clone(),
            unif: self.unif.add(o.unif),
            vals: self.vals.iter().zip(&o.vals).map(|(a, b)| a.add(*b)).collect(),
        }
    }
    pub fn inverse(&self) -> LocalCharacter {
        LocalCharacter { ext: self.ext.clone(), unif: self.unif.neg(), vals: self.vals.iter().map(|a| a.neg()).collect() }
    }
    pub fn div(&self, o: &LocalCharacter) -> LocalCharacter {
        self.mul(&o.inverse())
    }
    pub fn pow(&self, k: i64) -> LocalCharacter {
        LocalCharacter { ext: self.ext.clone(), unif: self.unif.times(k), vals: self.vals.iter().map(|a| a.times(k)).collect() }
    }
    pub fn is_trivial(&self) -> bool {
        self.unif.is_zero() && self.vals.iter().all(|v| v.is_zero())
    }

    /// Order of the restriction to a subgroup of units given by a predicate.
    pub fn order_on(&self, pred: &dyn Fn(&Elem) -> bool) -> u64 {
        self.ext.units.elems.iter().filter(|x| pred(x)).fold(1, |acc, x| lcm(acc, self.eval_unit(x).order()))
    }
}

/// `chi^tau = chi o tau`.
pub fn galois_conjugate(chi: &LocalCharacter) -> LocalCharacter {
    let ext = &chi.ext;
    let vals = ext.units.gens.iter().map(|&g| chi.eval_unit(&ext.tau(g))).collect();
    let unif = match ext.kind {
        ExtKind::Unramified => chi.unif,
        // tau(x) = -x
        ExtKind::Ramified { .. } => chi.unif.add(chi.eval_unit(&ext.minus_one())),
    };
    LocalCharacter { ext: ext.clone(), unif, vals }
}

/// A quadratic character of `F^*`, with the quadratic extension it cuts out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticCharacter {
    /// `eta(p)` as 0 or 1/2.
    pub at_p: String,
    /// Values on the generators of the `F`-units.
    pub on_units: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XSigma {
    /// `|X_sigma|`: 2 or 4.
    pub size: usize,
    /// `{1, eta_E}` or `{1, eta_E, eta_E', eta_E eta_E'}` (the trivial character omitted).
    pub characters: Vec<QuadraticCharacter>,
    pub biquadratic: bool,
}

fn quad_desc(at_p: Frac, units: &[Frac]) -> QuadraticCharacter {
    QuadraticCharacter { at_p: at_p.to_string(), on_units: units.iter().map(|v| v.to_string()).collect() }
}

/// Quadratic characters `eta` of `F^*` with `eta o N = target`.
fn quadratic_preimages(chi: &LocalCharacter, target: &LocalCharacter) -> Vec<(Frac, Vec<Frac>)> {
    let ext = &chi.ext;
    ext.f_characters(2)
        .into_iter()
        .filter(|(p, v)| p.times(2).is_zero() && v.iter().all(|x| x.times(2).is_zero()))
        .filter(|(p, v)| ext.compose_norm(*p, v) == *target)
        .collect()
}

/// `|X_sigma(E, chi)|`: 2 if `(chi/chi^tau)^2 != 1`, else 4 with the biquadratic data.
pub fn x_sigma(chi: &LocalCharacter) -> Result<XSigma> {
    let conj = galois_conjugate(chi);
    if conj == *chi {
        return Err(Error::NotRegular);
    }
    let trivial = LocalCharacter::trivial(&chi.ext);
    let etas_e = quadratic_preimages(chi, &trivial);
    let eta_e = etas_e
        .iter()
        .find(|(p, v)| !(p.is_zero() && v.iter().all(|x| x.is_zero())))
        .cloned()
        .ok_or_else(|| Error::Internal("no quadratic character cuts out E".into()))?;
    let rho = chi.div(&conj);
    if !rho.pow(2).is_trivial() {
        return Ok(XSigma { size: 2, characters: vec![quad_desc(eta_e.0, &eta_e.1)], biquadratic: false });
    }
    let pre = quadratic_preimages(chi, &rho);
    let (ep, ev) = pre.first().cloned().ok_or_else(|| Error::Internal("chi/chi^tau is not a norm character".into()))?;
    let prod_v: Vec<Frac> = ev.iter().zip(&eta_e.1).map(|(a, b)| a.add(*b)).collect();
    Ok(XSigma {
        size: 4,
        characters: vec![quad_desc(eta_e.0, &eta_e.1), quad_desc(ep, &ev), quad_desc(ep.add(eta_e.0), &prod_v)],
        biquadratic: true,
    })
}

/// `|X_sigma|` by enumerating quadratic characters `eta` of `F^*` with
/// `chi (eta o N)` equal to `chi` or `chi^tau`.
pub fn x_sigma_by_enumeration(chi: &LocalCharacter) -> usize {
    let ext = &chi.ext;
    let conj = galois_conjugate(chi);
    ext.f_characters(2)
        .into_iter()
        .filter(|(p, v)| p.times(2).is_zero() && v.iter().all(|x| x.times(2).is_zero()))
        .filter(|(p, v)| {
            let twisted = chi.mul(&ext.compose_norm(*p, v));
            twisted == *chi || twisted == conj
        })
        .count()
}

/// Length (1 or 2) of the reduction mod `ell` of the supercuspidal attached to `chi`.
pub fn mod_ell_sc_length(chi: &LocalCharacter, ell: u64) -> Result<usize> {
    let ext = &chi.ext;
    if !is_prime(ell) {
        return invalid(format!("{ell} is not prime"));
    }
    if ell == ext.p {
        return invalid("ell must differ from p");
    }
    let conj = galois_conjugate(chi);
    if conj == *chi {
        return Err(Error::NotRegular);
    }
    let q = ext.p;
    if ext.p != 2 || ext.kind != ExtKind::Unramified || (q + 1) % ell != 0 {
        return Ok(1);
    }
    let rho = conj.div(chi);
    if rho.order_on(&|x| ext.is_principal_unit(x)) != 2 {
        return Ok(1);
    }
    let omega = ext.teichmuller_generator();
    let b = ext.pow(omega, q - 1);
    let vb = chi.eval_unit(&b);
    let mut ls = 1;
    while (q + 1) % (ls * ell) == 0 {
        ls *= ell;
    }
    if !vb.is_zero() && vb.times(ls as i64).is_zero() {
        Ok(2)
    } else {
        Ok(1)
    }
}

/// Classes of `F^*/(F^*)^2` and which of them are norms from `E^*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormGroup {
    /// All square classes, named by a representative `p^k v`.
    pub classes: Vec<String>,
    pub norms: Vec<String>,
    pub index: usize,
}

/// Square class of `p^k v` for a unit `v` at the `F`-level of `ext`.
fn square_class(ext: &QuadExt, k: u32, v: u64) -> (u32, u64) {
    let p = ext.p;
    if p == 2 {
        (k % 2, v % 8)
    } else {
        (k % 2, if legendre(v, p) == 1 { 1 } else { non_residue(p) })
    }
}

/// The norm group `N(E^*)` inside `F^*/(F^*)^2`.
pub fn norm_group_index(ext: &QuadExt) -> Result<NormGroup> {
    if ext.p == 2 && ext.level_f < 3 {
        return invalid("square classes of Q_2 need level at least 3");
    }
    let mut norms = BTreeSet::new();
    let pa = ext.pa();
    for &u in &ext.units.elems {
        let n = ext.norm(u).0;
        norms.insert(square_class(ext, 0, n));
        let (k, w) = match ext.kind {
            ExtKind::Unramified => (2, n),
            // N(x u) = -p c N(u)
            ExtKind::Ramified { u: c } => (1, ((pa - c % pa) % pa) * n % pa),
        };
        norms.insert(square_class(ext, k, w));
    }
    let units: Vec<u64> = if ext.p == 2 { vec![1, 3, 5, 7] } else { vec![1, non_residue(ext.p)] };
    let mut classes = Vec::new();
    for k in 0..2 {
        for &v in &units {
            classes.push((k, v));
        }
    }
    let name = |(k, v): (u32, u64)| if k == 0 { format!("{v}") } else { format!("{v}p") };
    Ok(NormGroup {
        index: classes.len() / norms.len(),
        classes: classes.iter().map(|&c| name(c)).collect(),
        norms: norms.iter().map(|&c| name(c)).collect(),
    })
}

/// JSON character input: `{p, ramified, unit_class?, level, unif_value: "k/m", gen_values: ["k/m", ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterSpec {
    pub p: u64,
    pub ramified: bool,
    #[serde(default)]
    pub unit_class: Option<u64>,
    #[serde(default = "default_level")]
    pub level: u32,
    pub unif_value: String,
    pub gen_values: Vec<String>,
}

fn default_level() -> u32 {
    DEFAULT_LEVEL
}

impl CharacterSpec {
    pub fn from_character(chi: &LocalCharacter) -> CharacterSpec {
        let (ramified, unit_class) = match chi.ext.kind {
            ExtKind::Unramified => (false, None),
            ExtKind::Ramified { u } => (true, Some(u)),
        };
        CharacterSpec {
            p: chi.ext.p,
            ramified,
            unit_class,
            level: chi.ext.level,
            unif_value: chi.unif.to_string(),
            gen_values: chi.vals.iter().map(|v| v.to_string()).collect(),
        }
    }

    pub fn build(&self) -> Result<LocalCharacter> {
        let kind = if self.ramified { ExtKind::Ramified { u: self.unit_class.unwrap_or(1) } } else { ExtKind::Unramified };
        let ext = QuadExt::new(self.p, kind, self.level)?;
        let unif: Frac = self.unif_value.parse()?;
        let vals = self.gen_values.iter().map(|s| s.parse()).collect::<Result<Vec<Frac>>>()?;
        LocalCharacter::new(&ext, unif, vals)
    }
}
