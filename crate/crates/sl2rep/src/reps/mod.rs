//! Matrix models of the irreducible representations of `GL2(F_q)` and the
//! functors around them (induction, restriction, twisting, fixed vectors).
//!
//! All characters take values in powers of one fixed root of unity of the
//! coefficient field, so a construction written for characteristic 0 can be
//! re-evaluated in characteristic `ell`; this is exactly reduction of the
//! integral lattice spanned by the standard basis.

mod construct;
mod label;
mod matrep;

use std::sync::{Arc, OnceLock};

pub use construct::{
    cusp_kirillov, gelfand_graev, induce_character, integral_model, principal_series, quotient_by, steinberg_model,
    sub_by,
};
pub use label::IrrepLabel;
pub use matrep::{fixed_vectors, fixed_vectors_by_trace, restrict_to_sl2, twist, MatRep};

use crate::error::{invalid, Error, Result};
use crate::exactla::{is_prime, lcm, Fe, FieldDesc};
use crate::groups::{FiniteRing, Group, GroupSpec, M2};

/// Split `q` as `p^k`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut x = q;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    (x == 1).then_some((p, k))
}

/// Part of `n` prime to `ell` (`ell = 0`: all of `n`).
pub fn regular_part(n: u64, ell: u64) -> u64 {
    if ell == 0 {
        return n;
    }
    let mut m = n;
    while m % ell == 0 {
        m /= ell;
    }
    m
}

/// Smallest prime `l'` with `l' = 1 mod m` and `l'` prime to `order`.
pub fn splitting_prime(m: u64, order: u64) -> u64 {
    let mut c = m + 1;
    loop {
        if is_prime(c) && order % c != 0 {
            return c;
        }
        c += m;
    }
}

/// A multiplicative character of a cyclic group of order `n`, sending the
/// canonical generator to the `e`-th power of the canonical `n`-th root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultCharacter {
    pub n: u64,
    pub e: u64,
}

impl MultCharacter {
    pub fn new(n: u64, e: u64) -> MultCharacter {
        MultCharacter { n, e: e % n }
    }
    pub fn order(&self) -> u64 {
        self.n / crate::exactla::gcd(self.e, self.n)
    }
    pub fn mul(&self, o: &MultCharacter) -> MultCharacter {
        assert_eq!(self.n, o.n);
        MultCharacter::new(self.n, self.e + o.e)
    }
    pub fn inverse(&self) -> MultCharacter {
        MultCharacter::new(self.n, self.n - self.e)
    }
    pub fn pow(&self, k: u64) -> MultCharacter {
        MultCharacter::new(self.n, ((self.e as u128 * k as u128) % self.n as u128) as u64)
    }
}

/// The data labels depend on: `q` and the coefficient characteristic (0 or `ell`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coeffs {
    pub q: u64,
    pub p: u64,
    pub char_r: u64,
}

impl Coeffs {
    pub fn new(q: u64, char_r: u64) -> Result<Coeffs> {
        let (p, _) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        if char_r != 0 && (!is_prime(char_r) || char_r == p) {
            return invalid(format!("bad coefficient characteristic {char_r} for q = {q}"));
        }
        Ok(Coeffs { q, p, char_r })
    }

    /// `ell`-regular part of `n` in this setting.
    pub fn reg(&self, n: u64) -> u64 {
        regular_part(n, self.char_r)
    }

    /// Canonical representative of `e mod n` up to characters of `ell`-power order:
    /// congruent to `e` modulo the regular part of `n` and divisible by the rest.
    pub fn canon(&self, e: u64, n: u64) -> u64 {
        let nr = self.reg(n);
        let l = n / nr;
        if nr == 1 {
            return 0;
        }
        // l * k = e mod nr
        let linv = mod_inverse(l % nr, nr).expect("coprime");
        let k = (e % nr) as u128 * linv as u128 % nr as u128;
        (l as u128 * k % n as u128) as u64
    }

    /// `q + 1 = 0` in the coefficient field.
    pub fn ell_divides_q_plus_1(&self) -> bool {
        self.char_r != 0 && (self.q + 1) % self.char_r == 0
    }

    /// Characters of `F_q^*` up to reduction.
    pub fn fq_exponents(&self) -> Vec<u64> {
        let n = self.q - 1;
        let mut v: Vec<u64> = (0..n).map(|e| self.canon(e, n)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Regular characters of `F_{q^2}^*` up to reduction and `theta ~ theta^q`.
    pub fn cusp_exponents(&self) -> Vec<u64> {
        let n = self.q * self.q - 1;
        let mut v: Vec<u64> = (0..n)
            .map(|t| self.canon(t, n))
            .filter(|&t| t != self.canon(t * self.q, n))
            .map(|t| t.min(self.canon(t * self.q, n)))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// All irreducible labels in this setting.
    pub fn labels(&self) -> Vec<IrrepLabel> {
        let es = self.fq_exponents();
        let mut out: Vec<IrrepLabel> = es.iter().map(|&e| IrrepLabel::Char(e)).collect();
        if self.ell_divides_q_plus_1() {
            out.extend(es.iter().map(|&e| IrrepLabel::Cusp0Twist(e)));
        } else {
            out.extend(es.iter().map(|&e| IrrepLabel::StTwist(e)));
        }
        for (i, &a) in es.iter().enumerate() {
            for &b in &es[i + 1..] {
                out.push(IrrepLabel::Princ(a, b));
            }
        }
        out.extend(self.cusp_exponents().into_iter().map(IrrepLabel::Cusp));
        out
    }

}

/// Everything fixed for a given `q` and coefficient characteristic: the groups,
/// the fields `F_q` and `F_{q^2}`, the coefficient field and its root of unity.
pub struct Setting {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    pub fq: FieldDesc,
    pub fq2: FieldDesc,
    /// 0 for the characteristic-0 emulation, else the prime `ell`.
    pub char_r: u64,
    pub field: FieldDesc,
    /// `lcm(q^2 - 1, p)`: every character value is a power of a primitive `m`-th root of unity.
    pub m: u64,
    pub m_reg: u64,
    zeta: Fe,
    pub gl2: Arc<Group>,
    pub sl2: Arc<Group>,
    // log to the canonical generator G of F_{q^2}, indexed by F_q lifts
    logq: Vec<u64>,
    // F_{q^2} element (as lift of F_q) back to F_q lift, for elements of F_q
    from_fq2: std::collections::HashMap<u32, u32>,
    gg_constituents: OnceLock<std::result::Result<Vec<MatRep>, Error>>,
    coeffs: Coeffs,
}

impl std::ops::Deref for Setting {
    type Target = Coeffs;
    fn deref(&self) -> &Coeffs {
        &self.coeffs
    }
}

impl std::fmt::Debug for Setting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Setting(q={}, char={}, field={:?})", self.q, self.char_r, self.field)
    }
}

impl Setting {
    /// `char_r = 0` emulates characteristic 0 by a splitting prime.
    pub fn new(q: u64, char_r: u64) -> Result<Arc<Setting>> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        if q > 64 {
            return Err(Error::ResourceLimit(format!("q = {q} is beyond desk scale")));
        }
        let m = lcm(q * q - 1, p);
        let ring = FiniteRing::field(p, k)?;
        let gl2 = Group::new(&GroupSpec::gl2(ring.clone()))?;
        let sl2 = Group::new(&GroupSpec::sl2(ring))?;
        let (field, m_reg) = if char_r == 0 {
            let ell = splitting_prime(m, gl2.order() as u64);
            (FieldDesc::prime_field(ell)?, m)
        } else {
            if !is_prime(char_r) {
                return invalid(format!("{char_r} is not prime"));
            }
            if char_r == p {
                return invalid("the coefficient characteristic must differ from p");
            }
            let m_reg = regular_part(m, char_r);
            (crate::exactla::field_with_roots(char_r, &[m_reg])?, m_reg)
        };
        let zeta = field.root_of_unity(m_reg)?;
        let fq = FieldDesc::new(p, k)?;
        let fq2 = FieldDesc::new(p, 2 * k)?;
        let emb = fq.embedding_into(&fq2)?;
        let mut logq = vec![0u64; q as usize];
        let mut from_fq2 = std::collections::HashMap::new();
        for code in 0..q as u32 {
            let x = Fe(code);
            let lift = fq.to_poly(x);
            let y = emb[code as usize];
            if let Some(l) = fq2.log(y) {
                logq[lift as usize] = l;
            }
            from_fq2.insert(fq2.to_poly(y), lift);
        }
        Ok(Arc::new(Setting {
            q,
            p,
            k,
            fq,
            fq2,
            char_r,
            field,
            m,
            m_reg,
            zeta,
            gl2,
            sl2,
            logq,
            from_fq2,
            gg_constituents: OnceLock::new(),
            coeffs: Coeffs { q, p, char_r },
        }))
    }

    pub fn char0(q: u64) -> Result<Arc<Setting>> {
        Setting::new(q, 0)
    }

    /// `zeta_m^x` reduced to the coefficient field.
    pub fn root(&self, x: u128) -> Fe {
        let r = (x % self.m as u128) % self.m_reg as u128;
        self.field.pow(self.zeta, r as u64)
    }

    fn log_fq(&self, x: u32) -> u64 {
        debug_assert!(x != 0);
        self.logq[x as usize]
    }

    /// `chi_e(x)` for `x` a unit of `F_q` (given by its lift); the canonical
    /// generator of `F_q^*` is the norm of the canonical generator of `F_{q^2}^*`.
    pub fn chi(&self, e: u64, x: u32) -> Fe {
        let q = self.q as u128;
        self.root(e as u128 * self.log_fq(x) as u128 * (self.m as u128 / (q * q - 1)))
    }

    /// `theta_t(y)` for `y` a unit of `F_{q^2}`.
    pub fn theta(&self, t: u64, y: Fe) -> Fe {
        let q = self.q as u128;
        let l = self.fq2.log(y).expect("unit");
        self.root(t as u128 * l as u128 * (self.m as u128 / (q * q - 1)))
    }

    /// `theta_t` restricted to `F_q^*`.
    pub fn theta_on_fq(&self, t: u64, x: u32) -> Fe {
        let q = self.q as u128;
        self.root(t as u128 * self.log_fq(x) as u128 * (self.m as u128 / (q * q - 1)))
    }

    /// The additive character `psi(x) = zeta_p^{Tr(x)}`.
    pub fn psi(&self, x: u32) -> Fe {
        let tr = self.fq.trace_to_prime(self.fq.from_poly(x));
        self.root(tr as u128 * (self.m / self.p) as u128)
    }

    pub fn fq2_to_fq(&self, y: Fe) -> Option<u32> {
        self.from_fq2.get(&self.fq2.to_poly(y)).copied()
    }

    /// Lift of the generator `N(G)` of `F_q^*`.
    pub fn nu(&self) -> u32 {
        let g = self.fq2.generator();
        self.fq2_to_fq(self.fq2.pow(g, self.q + 1)).expect("norm lies in F_q")
    }

    /// Companion matrix of the canonical generator of `F_{q^2}^*`: an elliptic torus generator.
    pub fn torus_generator(&self) -> M2 {
        let f = &self.fq2;
        let g = f.generator();
        let n = f.pow(g, self.q + 1);
        let tr = f.add(g, f.pow(g, self.q));
        let n = self.fq2_to_fq(n).unwrap();
        let tr = self.fq2_to_fq(tr).unwrap();
        let r = &self.gl2.spec.ring;
        [0, 1, r.neg(n), tr]
    }

    /// Coefficient field element `n * 1`.
    pub fn scalar(&self, n: i64) -> Fe {
        self.field.from_int(n)
    }

    pub(crate) fn gg_cache(&self) -> &OnceLock<std::result::Result<Vec<MatRep>, Error>> {
        &self.gg_constituents
    }
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (m as i128, a as i128 % m as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    (r == 1).then(|| t.rem_euclid(m as i128) as u64)
}

/// Build the explicit representation named by `label` over the setting's field.
pub fn construct(s: &Arc<Setting>, label: &IrrepLabel) -> Result<MatRep> {
    let label = label.normalize(s)?;
    construct::construct_normalized(s, &label)
}
