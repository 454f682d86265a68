use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};

/// Largest field order we are willing to tabulate.
pub const FIELD_SIZE_CAP: u64 = 1 << 22;

/// A field element. Code 0 is zero; code `c > 0` is `g^(c-1)` for the
/// canonical primitive element `g` of the field it belongs to.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);
    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldData {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    // code -> polynomial integer (base-p digits are coefficients, low degree first)
    exp: Vec<u32>,
    // polynomial integer -> code
    log: Vec<u32>,
    // zech[n] = code of 1 + g^n
    zech: Vec<u32>,
    neg_one: Fe,
}

/// A finite field `F_{p^k}` with Zech-logarithm tables.
#[derive(Clone)]
pub struct FieldDesc(Arc<FieldData>);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k)
    }
}
impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.k)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

// ---- polynomial arithmetic over F_p, used only during construction ----

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = modpow(m[dm], p - 2, p);
    while r.len() > dm {
        let c = r[r.len() - 1] * inv_lead % p;
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    poly_rem(&c, m, p)
}

fn poly_powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn digits(mut n: u64, p: u64, k: usize) -> Vec<u64> {
    let mut d = vec![0u64; k];
    for di in d.iter_mut() {
        *di = n % p;
        n /= p;
    }
    d
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Irreducibility by `gcd(x^{p^i} - x, f) = 1` for `1 <= i < deg f`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 1..k {
        xp = poly_powmod(&xp, p, f, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree `k`:
/// lower coefficients are read as base-`p` digits and scanned upwards.
pub fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let total = p.pow(k as u32);
    for n in 0..total {
        let mut f = digits(n, p, k);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldDesc {
    /// Build `F_{p^k}` with the smallest irreducible modulus.
    pub fn new(p: u64, k: u32) -> Result<FieldDesc> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if k == 0 {
            return invalid("degree must be at least 1");
        }
        let q = (p as u128).pow(k);
        if q > FIELD_SIZE_CAP as u128 {
            return Err(Error::ResourceLimit(format!("field of order {q} exceeds cap")));
        }
        let q = q as u64;
        let modulus = smallest_irreducible(p, k);
        let ku = k as usize;
        // canonical primitive element: smallest polynomial integer of order q-1
        let factors = prime_factors(q - 1);
        let mut g = None;
        for cand in 1..q {
            let a = digits(cand, p, ku);
            let ok = factors.iter().all(|&r| {
                let pw = poly_powmod(&a, (q - 1) / r, &modulus, p);
                !(pw.len() == 1 && pw[0] == 1)
            }) && q > 1;
            if ok || q == 2 {
                g = Some(a);
                break;
            }
        }
        let g = g.expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; q as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u64];
        for c in 1..q {
            let mut full = cur.clone();
            full.resize(ku, 0);
            let n = undigits(&full, p) as u32;
            exp[c as usize] = n;
            log[n as usize] = c as u32;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }
        let mut zech = vec![0u32; (q - 1).max(1) as usize];
        for n in 0..(q - 1) as usize {
            let pn = exp[n + 1] as u64;
            let mut d = digits(pn, p, ku);
            d[0] = (d[0] + 1) % p;
            zech[n] = log[undigits(&d, p) as usize];
        }
        let neg_one = if p == 2 { Fe(1) } else { Fe(log[(p - 1) as usize]) };
        Ok(FieldDesc(Arc::new(FieldData {
            p: p as u32,
            k,
            q: q as u32,
            modulus: modulus.iter().map(|&x| x as u32).collect(),
            exp,
            log,
            zech,
            neg_one,
        })))
    }

    pub fn prime_field(p: u64) -> Result<FieldDesc> {
        FieldDesc::new(p, 1)
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }
    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.k
    }
    #[inline]
    pub fn order(&self) -> u64 {
        self.0.q as u64
    }
    pub fn modulus(&self) -> Vec<u64> {
        self.0.modulus.iter().map(|&x| x as u64).collect()
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe(0)
    }
    #[inline]
    pub fn one(&self) -> Fe {
        Fe(1)
    }
    /// The canonical primitive element.
    pub fn generator(&self) -> Fe {
        if self.0.q == 2 {
            Fe(1)
        } else {
            Fe(2)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let m = self.0.q - 1;
        let s = (a.0 - 1) + (b.0 - 1);
        Fe(if s >= m { s - m } else { s } + 1)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let m = self.0.q - 1;
        let n = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + m - a.0 };
        let z = self.0.zech[n as usize];
        if z == 0 {
            Fe(0)
        } else {
            self.mul(a, Fe(z))
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.mul(a, self.0.neg_one)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a.0 != 0, "inverse of zero");
        let m = self.0.q - 1;
        let l = a.0 - 1;
        Fe(if l == 0 { 0 } else { m - l } + 1)
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if a.0 == 0 {
            return if e == 0 { Fe(1) } else { Fe(0) };
        }
        let m = (self.0.q - 1) as u64;
        Fe(((a.0 as u64 - 1) * (e % m) % m) as u32 + 1)
    }

    /// `dst += c * src`
    #[inline]
    pub fn axpy(&self, dst: &mut [Fe], c: Fe, src: &[Fe]) {
        if c.0 == 0 {
            return;
        }
        for (d, &s) in dst.iter_mut().zip(src) {
            if s.0 != 0 {
                *d = self.add(*d, self.mul(c, s));
            }
        }
    }

    /// Discrete logarithm to the canonical generator.
    #[inline]
    pub fn log(&self, a: Fe) -> Option<u64> {
        if a.0 == 0 {
            None
        } else {
            Some((a.0 - 1) as u64)
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn elem_order(&self, a: Fe) -> u64 {
        let m = (self.0.q - 1) as u64;
        let l = self.log(a).expect("nonzero");
        m / gcd(l, m)
    }

    /// Image of an integer under `Z -> F_p -> F`.
    pub fn from_int(&self, n: i64) -> Fe {
        let p = self.0.p as i64;
        let r = n.rem_euclid(p) as usize;
        Fe(self.0.log[r])
    }

    /// Polynomial-integer encoding (canonical lift), used for ordering and printing.
    #[inline]
    pub fn to_poly(&self, a: Fe) -> u32 {
        self.0.exp[a.0 as usize]
    }
    #[inline]
    pub fn from_poly(&self, n: u32) -> Fe {
        Fe(self.0.log[n as usize])
    }

    /// Integer value of an element of the prime subfield.
    pub fn to_prime_int(&self, a: Fe) -> Option<u64> {
        let n = self.to_poly(a);
        if (n as u64) < self.characteristic() {
            Some(n as u64)
        } else {
            None
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    /// Elements in canonical (polynomial-integer) order.
    pub fn elements_canonical(&self) -> Vec<Fe> {
        (0..self.0.q).map(|n| self.from_poly(n)).collect()
    }

    /// Canonical primitive `n`-th root of unity `g^{(|F|-1)/n}`.
    pub fn root_of_unity(&self, n: u64) -> Result<Fe> {
        let m = self.order() - 1;
        if n == 0 || m % n != 0 {
            return Err(Error::InvalidField(format!("{self:?} has no primitive {n}-th root of unity")));
        }
        Ok(self.pow(self.generator(), m / n))
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.characteristic())
    }

    /// Absolute trace to the prime field, as an integer.
    pub fn trace_to_prime(&self, a: Fe) -> u64 {
        let mut acc = Fe(0);
        let mut x = a;
        for _ in 0..self.degree() {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        self.to_prime_int(acc).expect("trace lies in the prime field")
    }

    pub fn format(&self, a: Fe) -> String {
        if self.degree() == 1 {
            return format!("{}", self.to_poly(a));
        }
        let d = digits(self.to_poly(a) as u64, self.characteristic(), self.degree() as usize);
        let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// Build the code table of an embedding of `self` into `big`, sending the
    /// generator of the polynomial basis to the smallest root of our modulus.
    pub fn embedding_into(&self, big: &FieldDesc) -> Result<Vec<Fe>> {
        if big.characteristic() != self.characteristic() || big.degree() % self.degree() != 0 {
            return invalid(format!("{self:?} does not embed in {big:?}"));
        }
        let p = self.characteristic();
        let m = self.modulus();
        let eval = |x: Fe| {
            let mut acc = Fe(0);
            for &c in m.iter().rev() {
                acc = big.add(big.mul(acc, x), big.from_int(c as i64));
            }
            acc
        };
        let alpha = big
            .elements_canonical()
            .into_iter()
            .find(|&x| eval(x).is_zero())
            .ok_or_else(|| Error::Internal("no root of the modulus in the extension".into()))?;
        let k = self.degree() as usize;
        let mut table = vec![Fe(0); self.order() as usize];
        for code in 0..self.order() as u32 {
            let d = digits(self.to_poly(Fe(code)) as u64, p, k);
            let mut acc = Fe(0);
            let mut pw = Fe(1);
            for &c in &d {
                acc = big.add(acc, big.mul(big.from_int(c as i64), pw));
                pw = big.mul(pw, alpha);
            }
            table[code as usize] = acc;
        }
        Ok(table)
    }
}

/// Smallest-degree field of characteristic `ell` containing primitive roots of
/// unity of every order in `required_orders`.
pub fn field_with_roots(ell: u64, required_orders: &[u64]) -> Result<FieldDesc> {
    if !is_prime(ell) {
        return invalid(format!("{ell} is not prime"));
    }
    let mut l = 1u64;
    for &n in required_orders {
        if n == 0 {
            return invalid("orders must be positive");
        }
        if n % ell == 0 {
            return invalid(format!("order {n} is divisible by the characteristic {ell}"));
        }
        l = lcm(l, n);
    }
    let mut k = 1u32;
    let mut pk = ell as u128 % l as u128;
    loop {
        if (pk + l as u128 - 1) % l as u128 == 0 {
            return FieldDesc::new(ell, k);
        }
        k += 1;
        pk = pk * ell as u128 % l as u128;
        if k > 64 {
            return Err(Error::ResourceLimit("root-of-unity field too large".into()));
        }
    }
}
