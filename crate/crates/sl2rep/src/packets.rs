//! L-packets of `SL2(F)` read off from a classified representation of `GL2(F)`:
//! size, component group, `E_Pi`, level, cuspidal class, plus principal-series
//! lengths, lengths of reductions mod `ell` and the germ constant `a_Pi`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exactla::{field_with_roots, lcm};
use crate::localfield::{self, CharacterSpec, ExtKind, Frac, NormGroup, QuadExt, QuadraticCharacter};
use crate::reps::{Coeffs, IrrepLabel};

/// A smooth character of `F^*` as finite data: `q^(qpow val)` times a finite-order
/// character with value `exp(2 pi i at_p)` at the uniformizer, value `tame` on the
/// generator of `k_F^*` and order `wild_order` on `1 + P_F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FChar {
    #[serde(default)]
    pub qpow: i8,
    #[serde(default)]
    pub at_p: Frac,
    #[serde(default)]
    pub tame: Frac,
    #[serde(default = "one")]
    pub wild_order: u64,
}

fn one() -> u64 {
    1
}

impl Default for FChar {
    fn default() -> FChar {
        FChar::TRIVIAL
    }
}

impl FChar {
    pub const TRIVIAL: FChar = FChar { qpow: 0, at_p: Frac::ZERO, tame: Frac::ZERO, wild_order: 1 };

    /// The symbolic character `q^(sign val)`.
    pub fn q_power(sign: i8) -> FChar {
        FChar { qpow: sign.signum(), ..FChar::TRIVIAL }
    }

    pub fn unramified(at_p: Frac) -> FChar {
        FChar { at_p, ..FChar::TRIVIAL }
    }

    pub fn validate(&self, c: &Coeffs) -> Result<()> {
        if !(-1..=1).contains(&self.qpow) {
            return invalid("qpow must be -1, 0 or 1");
        }
        if self.qpow != 0 && (*self != FChar::q_power(self.qpow)) {
            return invalid("q^(+-val) is given without a finite-order factor");
        }
        if (c.q - 1) % self.tame.den != 0 {
            return invalid(format!("tame part {} does not factor through k_F^* of order {}", self.tame, c.q - 1));
        }
        let mut w = self.wild_order;
        while w > 1 && w % c.p == 0 {
            w /= c.p;
        }
        if w != 1 || self.wild_order == 0 {
            return invalid(format!("wild order {} is not a power of p = {}", self.wild_order, c.p));
        }
        if c.char_r != 0 && (self.at_p.den % c.char_r == 0 || self.tame.den % c.char_r == 0) {
            return invalid(format!("a character with values in characteristic {} has prime-to-{} order", c.char_r, c.char_r));
        }
        Ok(())
    }

    pub fn is_trivial(&self) -> bool {
        *self == FChar::TRIVIAL
    }

    pub fn is_unramified(&self) -> bool {
        self.tame.is_zero() && self.wild_order == 1
    }

    /// `eta != 1` and `eta^2 = 1`.
    pub fn is_nontrivial_quadratic(&self) -> bool {
        self.qpow == 0
            && !self.is_trivial()
            && self.at_p.times(2).is_zero()
            && self.tame.times(2).is_zero()
            && self.wild_order <= 2
    }

    /// Order of a finite-order character (`None` for `q^(+-val)`).
    pub fn order(&self) -> Option<u64> {
        (self.qpow == 0).then(|| lcm(lcm(self.at_p.den, self.tame.den), self.wild_order))
    }

    /// Reduction mod `ell` of a characteristic-0 character of finite order.
    pub fn reduce(&self, ell: u64) -> FChar {
        FChar { at_p: self.at_p.ell_regular(ell), tame: self.tame.ell_regular(ell), ..*self }
    }

    /// `eta = q^(+-val)` as `R`-characters. In characteristic `ell`, `at_p = k/m` means
    /// the `k`-th power of the canonical primitive `m`-th root of unity of `F_ell^ac`.
    pub fn equals_q_power(&self, c: &Coeffs) -> Result<bool> {
        if self.qpow != 0 {
            return Ok(true);
        }
        if c.char_r == 0 || !self.is_unramified() {
            return Ok(false);
        }
        let m = self.at_p.den;
        let f = field_with_roots(c.char_r, &[m])?;
        let v = f.pow(f.root_of_unity(m)?, self.at_p.num);
        let q = f.from_int((c.q % c.char_r) as i64);
        Ok(v == q || f.mul(v, q) == crate::exactla::Fe::ONE)
    }
}

/// The quadratic character `eta_E` of an unramified or ramified quadratic extension
/// (for `p = 2` only the unramified one is determined by this data).
fn eta_e(c: &Coeffs, ramified: bool) -> FChar {
    if !ramified {
        FChar::unramified(Frac::new(1, 2))
    } else if c.p == 2 {
        FChar { wild_order: 2, ..FChar::TRIVIAL }
    } else {
        FChar { tame: Frac::new(1, 2), ..FChar::TRIVIAL }
    }
}

/// `lg(ind_{B'}^{G'} 1)`.
pub fn ind_one_length(c: &Coeffs) -> usize {
    if !c.ell_divides_q_plus_1() {
        2
    } else if c.char_r != 2 {
        4
    } else {
        6
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsLength {
    pub length: usize,
    pub semisimple: bool,
    pub shape: String,
}

/// Length of `i_{B'}^{G'}(eta)` over `R` of characteristic `char_r`.
pub fn principal_series_length_sl2(eta: &FChar, q: u64, char_r: u64) -> Result<PsLength> {
    let c = Coeffs::new(q, char_r)?;
    eta.validate(&c)?;
    if eta.equals_q_power(&c)? {
        let length = ind_one_length(&c);
        let shape = match length {
            2 => "ind(1): trivial and st".to_string(),
            4 => "ind(1): trivial twice and the two components of Pi_0".to_string(),
            _ => "ind(1): trivial twice and the four components of Pi_0".to_string(),
        };
        return Ok(PsLength { length, semisimple: false, shape });
    }
    if char_r != 2 && eta.is_nontrivial_quadratic() {
        let kind = if eta.is_unramified() { "unramified" } else { "ramified" };
        return Ok(PsLength { length: 2, semisimple: true, shape: format!("pi_E^+ + pi_E^- with E {kind}") });
    }
    Ok(PsLength { length: 1, semisimple: true, shape: "irreducible".into() })
}

/// An irreducible non-cuspidal representation of `SL2(F)` over `Q_ell^ac`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonCuspidalSl2 {
    Trivial,
    Steinberg,
    /// Either component of `i(eta_E)`.
    PiE { ramified: bool },
    PrincipalSeries {
        eta: FChar,
        #[serde(default = "yes")]
        integral: bool,
    },
}

fn yes() -> bool {
    true
}

/// `lg r_ell(pi)`: the reduction of an integral principal series is the principal
/// series of the reduced character, whose length is read from `principal_series_length_sl2`.
pub fn mod_ell_lengths_noncuspidal(pi: &NonCuspidalSl2, q: u64, ell: u64) -> Result<usize> {
    let c = Coeffs::new(q, ell)?;
    if ell == 0 {
        return invalid("ell must be a prime");
    }
    let c0 = Coeffs::new(q, 0)?;
    Ok(match pi {
        NonCuspidalSl2::Trivial => 1,
        NonCuspidalSl2::Steinberg => ind_one_length(&c) - 1,
        NonCuspidalSl2::PiE { ramified } => {
            if *ramified && c.p == 2 {
                return Err(Error::Unsupported("ramified quadratic characters of Q_2 are not parametrized".into()));
            }
            let reduced = eta_e(&c, *ramified).reduce(ell);
            if reduced.equals_q_power(&c)? {
                ind_one_length(&c) / 2
            } else {
                1
            }
        }
        NonCuspidalSl2::PrincipalSeries { eta, integral } => {
            if !integral {
                return Err(Error::NotIntegral);
            }
            eta.validate(&c0)?;
            if eta.qpow != 0 || eta.is_nontrivial_quadratic() {
                return invalid("i(eta) is reducible in characteristic 0");
            }
            principal_series_length_sl2(&eta.reduce(ell), q, ell)?.length
        }
    })
}

/// A classified irreducible representation of `GL2(F)`, `F` with residue field of size `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gl2ReplDescriptor {
    pub q: u64,
    #[serde(default)]
    pub char_r: u64,
    #[serde(flatten)]
    pub variant: Gl2Variant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Gl2Variant {
    /// `chi o det`
    FiniteDimChar {
        #[serde(default)]
        chi: FChar,
    },
    /// `i_B^G(chi_1, chi_2)`; only `eta = chi_1 / chi_2` matters on `SL2`.
    PrincipalSeries { eta: FChar },
    SteinbergTwist {
        #[serde(default)]
        chi: FChar,
    },
    /// `Pi_0 (chi o det)`, induced from `sigma_0`; needs `q + 1 = 0` in `R`.
    Cusp0Twist {
        #[serde(default)]
        chi: FChar,
    },
    /// Induced from the inflation of the cuspidal `GL2(k_F)` label `Cusp(t)`.
    DepthZeroSc { label: String },
    /// Positive level, from an admissible pair `(E, xi)`; `depth2` is twice the depth.
    PositiveLevelSc {
        ramified: bool,
        #[serde(default)]
        depth2: Option<u32>,
        #[serde(default)]
        character: Option<CharacterSpec>,
    },
}

impl PartialEq for CharacterSpec {
    fn eq(&self, o: &CharacterSpec) -> bool {
        serde_json::to_value(self).ok() == serde_json::to_value(o).ok()
    }
}
impl Eq for CharacterSpec {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CuspidalClass {
    NonCuspidal,
    CuspidalNotSuper,
    Supercuspidal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    DepthZero,
    PositiveDepth,
}

/// The extension `E_Pi` cut out by the quadratic characters fixing `Pi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EPi {
    pub degree: usize,
    pub description: String,
    pub quadratic_characters: Vec<QuadraticCharacter>,
    pub norm_group: Option<NormGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketReport {
    pub size: usize,
    pub component_group: String,
    pub e_pi: EPi,
    pub level: Level,
    pub cuspidal_class: CuspidalClass,
}

pub fn component_group(size: usize, char_r: u64) -> &'static str {
    match (size, char_r == 2) {
        (_, true) | (1, _) => "1",
        (2, _) => "Z/2",
        _ => "Z/2 x Z/2",
    }
}

/// Quadratic character of `F^*` (`p` odd) as `(eta(p), eta(eps))`, `eps` a non-square unit.
type Quad = (Frac, Frac);

fn quad_desc((a, b): Quad) -> QuadraticCharacter {
    QuadraticCharacter { at_p: a.to_string(), on_units: vec![b.to_string()] }
}

/// Common kernel of quadratic characters inside `F^*/(F^*)^2`, `p` odd.
fn norm_group_odd(c: &Coeffs, chars: &[Quad]) -> NormGroup {
    let eps = if c.q == c.p { localfield::non_residue(c.p).to_string() } else { "eps".to_string() };
    let mut classes = Vec::new();
    let mut norms = Vec::new();
    for k in 0..2i64 {
        for e in 0..2i64 {
            let name = match (k, e) {
                (0, 0) => "1".to_string(),
                (0, _) => eps.clone(),
                (_, 0) => "1p".to_string(),
                _ => format!("{eps}p"),
            };
            if chars.iter().all(|(a, b)| a.times(k).add(b.times(e)).is_zero()) {
                norms.push(name.clone());
            }
            classes.push(name);
        }
    }
    NormGroup { index: classes.len() / norms.len(), classes, norms }
}

fn half() -> Frac {
    Frac::new(1, 2)
}

fn quadratic_e_pi(c: &Coeffs, chars: Vec<Quad>) -> EPi {
    let degree = 1 << chars.len().min(2);
    let description = match chars.as_slice() {
        [] => "F".to_string(),
        [(_, b)] if b.is_zero() => "unramified quadratic".to_string(),
        [_] => "ramified quadratic".to_string(),
        _ => "biquadratic".to_string(),
    };
    EPi {
        degree,
        description,
        norm_group: (!chars.is_empty()).then(|| norm_group_odd(c, &chars)),
        quadratic_characters: chars.into_iter().map(quad_desc).collect(),
    }
}

fn base_e_pi() -> EPi {
    EPi { degree: 1, description: "F".into(), quadratic_characters: vec![], norm_group: None }
}

fn unramified_e_pi(c: &Coeffs) -> Result<EPi> {
    if c.p != 2 {
        return Ok(quadratic_e_pi(c, vec![(half(), Frac::ZERO)]));
    }
    let norm_group = if c.q == 2 {
        Some(localfield::norm_group_index(&*QuadExt::new(2, ExtKind::Unramified, localfield::DEFAULT_LEVEL)?)?)
    } else {
        None
    };
    Ok(EPi {
        degree: 2,
        description: "unramified quadratic".into(),
        quadratic_characters: vec![QuadraticCharacter { at_p: "1/2".into(), on_units: vec![] }],
        norm_group,
    })
}

/// Ramified `E = F(sqrt(p u))`, `p` odd: `eta_E(-p u) = 1` and `eta_E` is non-trivial on units.
fn ramified_quad(c: &Coeffs, u: u64) -> Quad {
    let minus_u = (c.p - u % c.p) % c.p;
    let at_p = if is_square_mod(minus_u, c.p) { Frac::ZERO } else { half() };
    (at_p, half())
}

fn is_square_mod(a: u64, p: u64) -> bool {
    (1..p).any(|x| x * x % p == a % p)
}

/// The resolved data of a descriptor.
enum Resolved {
    Char,
    Ps(FChar),
    St,
    Cusp0,
    DepthZero(IrrepLabel),
    PosOdd { ramified: bool, u: u64, depth2: u32 },
    Pos2 { chi: Box<localfield::LocalCharacter>, depth2: u32 },
}

impl Gl2ReplDescriptor {
    pub fn new(q: u64, char_r: u64, variant: Gl2Variant) -> Gl2ReplDescriptor {
        Gl2ReplDescriptor { q, char_r, variant }
    }

    pub fn coeffs(&self) -> Result<Coeffs> {
        Coeffs::new(self.q, self.char_r)
    }

    fn resolve(&self) -> Result<(Coeffs, Resolved)> {
        let c = self.coeffs()?;
        let r = match &self.variant {
            Gl2Variant::FiniteDimChar { chi } => {
                chi.validate(&c)?;
                Resolved::Char
            }
            Gl2Variant::PrincipalSeries { eta } => {
                eta.validate(&c)?;
                if eta.equals_q_power(&c)? {
                    return invalid("i_B(chi_1, chi_2) is reducible when chi_1/chi_2 = q^(+-val)");
                }
                Resolved::Ps(*eta)
            }
            Gl2Variant::SteinbergTwist { chi } => {
                chi.validate(&c)?;
                if c.ell_divides_q_plus_1() {
                    return invalid("the Steinberg representation is reducible when q + 1 = 0 in R");
                }
                Resolved::St
            }
            Gl2Variant::Cusp0Twist { chi } => {
                chi.validate(&c)?;
                if !c.ell_divides_q_plus_1() {
                    return invalid("Pi_0 exists only when q + 1 = 0 in R");
                }
                Resolved::Cusp0
            }
            Gl2Variant::DepthZeroSc { label } => {
                let l: IrrepLabel = label.parse()?;
                if !matches!(l, IrrepLabel::Cusp(_)) {
                    return invalid("a depth-zero supercuspidal is named by a label Cusp(t)");
                }
                Resolved::DepthZero(l.normalize(&c)?)
            }
            Gl2Variant::PositiveLevelSc { ramified, depth2, character } => {
                if c.q != c.p {
                    return Err(Error::Unsupported("positive level is implemented over Q_p only".into()));
                }
                if *ramified && c.p == 2 {
                    return Err(Error::Unsupported("positive-level packets from ramified E over Q_2".into()));
                }
                let d2 = depth2.unwrap_or(if *ramified { 1 } else { 2 });
                if d2 == 0 || (d2 % 2 == 1) != *ramified {
                    return invalid("depth must be a positive integer (E unramified) or half-integer (E ramified)");
                }
                let chi = character.as_ref().map(|s| s.build()).transpose()?;
                if let Some(chi) = &chi {
                    if chi.ext.p != c.p || matches!(chi.ext.kind, ExtKind::Ramified { .. }) != *ramified {
                        return invalid("the character lives on a different extension");
                    }
                    if localfield::galois_conjugate(chi) == *chi {
                        return Err(Error::NotRegular);
                    }
                }
                if c.p == 2 {
                    let chi = chi.ok_or_else(|| Error::InvalidInput("p = 2 needs the character xi".into()))?;
                    Resolved::Pos2 { chi: Box::new(chi), depth2: d2 }
                } else {
                    let u = match chi.as_ref().map(|x| x.ext.kind) {
                        Some(ExtKind::Ramified { u }) => u,
                        _ => 1,
                    };
                    Resolved::PosOdd { ramified: *ramified, u, depth2: d2 }
                }
            }
        };
        Ok((c, r))
    }
}

/// Size, component group, `E_Pi`, level and cuspidal class of the `L`-packet of `Pi|_{SL2}`.
pub fn packet_report(d: &Gl2ReplDescriptor) -> Result<PacketReport> {
    let (c, r) = d.resolve()?;
    let char2 = c.char_r == 2;
    let tame = |chi: &FChar| chi.wild_order == 1;
    let (size, e_pi, level, class) = match &r {
        Resolved::Char => {
            let chi = match &d.variant {
                Gl2Variant::FiniteDimChar { chi } => *chi,
                _ => unreachable!(),
            };
            (1, base_e_pi(), tame(&chi), CuspidalClass::NonCuspidal)
        }
        Resolved::Ps(eta) => {
            if !char2 && eta.is_nontrivial_quadratic() {
                let e = if c.p == 2 {
                    EPi {
                        degree: 2,
                        description: if eta.is_unramified() { "unramified quadratic" } else { "ramified quadratic" }.into(),
                        quadratic_characters: vec![QuadraticCharacter {
                            at_p: eta.at_p.to_string(),
                            on_units: vec![format!("order {}", eta.wild_order)],
                        }],
                        norm_group: None,
                    }
                } else {
                    quadratic_e_pi(&c, vec![(eta.at_p, eta.tame)])
                };
                (2, e, tame(eta), CuspidalClass::NonCuspidal)
            } else {
                (1, base_e_pi(), tame(eta), CuspidalClass::NonCuspidal)
            }
        }
        Resolved::St => (1, base_e_pi(), true, CuspidalClass::NonCuspidal),
        Resolved::Cusp0 => {
            if char2 {
                (4, base_e_pi(), true, CuspidalClass::CuspidalNotSuper)
            } else {
                (2, unramified_e_pi(&c)?, true, CuspidalClass::CuspidalNotSuper)
            }
        }
        Resolved::DepthZero(l) => {
            let size = 2 * l.restriction_length(&c);
            let e = if char2 {
                base_e_pi()
            } else if size == 4 {
                let chars = vec![(half(), Frac::ZERO), ramified_quad(&c, 1), ramified_quad(&c, localfield::non_residue(c.p))];
                quadratic_e_pi(&c, chars)
            } else {
                unramified_e_pi(&c)?
            };
            (size, e, true, CuspidalClass::Supercuspidal)
        }
        Resolved::PosOdd { ramified, u, .. } => {
            let e = if char2 {
                base_e_pi()
            } else if *ramified {
                quadratic_e_pi(&c, vec![ramified_quad(&c, *u)])
            } else {
                quadratic_e_pi(&c, vec![(half(), Frac::ZERO)])
            };
            (2, e, false, CuspidalClass::Supercuspidal)
        }
        Resolved::Pos2 { chi, .. } => {
            let xs = localfield::x_sigma(chi)?;
            let e = if xs.size == 2 {
                let mut e = unramified_e_pi(&c)?;
                e.quadratic_characters = xs.characters;
                e
            } else {
                EPi { degree: 4, description: "biquadratic".into(), quadratic_characters: xs.characters, norm_group: None }
            };
            (xs.size, e, false, CuspidalClass::Supercuspidal)
        }
    };
    Ok(PacketReport {
        size,
        component_group: component_group(size, c.char_r).to_string(),
        e_pi,
        level: if level { Level::DepthZero } else { Level::PositiveDepth },
        cuspidal_class: class,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermConstant {
    pub a_pi: i64,
    pub packet_size: usize,
    /// `a_Pi / |L(Pi)|` as a reduced fraction.
    pub per_packet_num: i64,
    pub per_packet_den: u64,
    pub half_integer: bool,
}

impl GermConstant {
    pub fn per_packet(&self) -> String {
        if self.per_packet_den == 1 {
            self.per_packet_num.to_string()
        } else {
            format!("{}/{}", self.per_packet_num, self.per_packet_den)
        }
    }
}

/// `a_Pi` and `a_Pi / |L(Pi)|` for infinite-dimensional `Pi`.
pub fn germ_constant(d: &Gl2ReplDescriptor) -> Result<GermConstant> {
    let (c, r) = d.resolve()?;
    let q = c.q as i64;
    let cusp = |depth2: u32| -> i64 {
        if depth2 % 2 == 0 {
            -2 * q.pow(depth2 / 2)
        } else {
            -(q + 1) * q.pow((depth2 - 1) / 2)
        }
    };
    let a_pi = match r {
        Resolved::Char => return invalid("the germ constant is defined for infinite-dimensional representations"),
        Resolved::Ps(_) => 0,
        Resolved::St => -1,
        Resolved::Cusp0 | Resolved::DepthZero(_) => cusp(0),
        Resolved::PosOdd { depth2, .. } | Resolved::Pos2 { depth2, .. } => cusp(depth2),
    };
    let size = packet_report(d)?.size;
    let g = crate::exactla::gcd(a_pi.unsigned_abs(), size as u64).max(1);
    let (num, den) = (a_pi / g as i64, size as u64 / g);
    Ok(GermConstant { a_pi, packet_size: size, per_packet_num: num, per_packet_den: den, half_integer: den == 2 })
}

/// Representative of the class of a depth-zero label under twisting by characters of `F^*`
/// (twisting does not change the restriction to `SL2`).
pub fn depth_zero_twist_class(label: &IrrepLabel, c: &Coeffs) -> Result<IrrepLabel> {
    let IrrepLabel::Cusp(t) = label.normalize(c)? else {
        return invalid("expected a label Cusp(t)");
    };
    (0..c.q - 1)
        .map(|k| IrrepLabel::Cusp(t + k * (c.q + 1)).normalize(c))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().min().unwrap())
}

/// Finite-order characters of `F^*` small enough to enumerate: `at_p` of order at most 4,
/// every tame value, wild order 1 or `p`; those not valid over `R` are dropped.
pub fn character_grid(c: &Coeffs) -> Vec<FChar> {
    let mut out = Vec::new();
    for m in 1..=4u64 {
        for k in 0..m {
            if crate::exactla::gcd(k, m) != 1 && !(k == 0 && m == 1) {
                continue;
            }
            for t in 0..c.q - 1 {
                for wild_order in [1, c.p] {
                    let chi = FChar { qpow: 0, at_p: Frac::new(k as i64, m), tame: Frac::new(t as i64, c.q - 1), wild_order };
                    if chi.validate(c).is_ok() {
                        out.push(chi);
                    }
                }
            }
        }
    }
    out
}

/// Every descriptor of the finite grammar at `(q, char_r)`: characters from `character_grid`,
/// every depth-zero label, and positive level over `Q_p` (depths 1..4 for `p` odd, regular
/// characters of level 3 for `p = 2`; ramified `E` over `Q_2` is unsupported and omitted).
pub fn enumerate_descriptors(q: u64, char_r: u64) -> Result<Vec<Gl2ReplDescriptor>> {
    let c = Coeffs::new(q, char_r)?;
    let mk = |v| Gl2ReplDescriptor::new(q, char_r, v);
    let grid = character_grid(&c);
    let mut out = Vec::new();
    let twists: Vec<FChar> = grid.iter().copied().filter(|x| x.is_unramified() || x.wild_order == 1).take(4).collect();
    for &chi in &twists {
        out.push(mk(Gl2Variant::FiniteDimChar { chi }));
        if c.ell_divides_q_plus_1() {
            out.push(mk(Gl2Variant::Cusp0Twist { chi }));
        } else {
            out.push(mk(Gl2Variant::SteinbergTwist { chi }));
        }
    }
    for &eta in &grid {
        if !eta.equals_q_power(&c)? {
            out.push(mk(Gl2Variant::PrincipalSeries { eta }));
        }
    }
    for t in c.cusp_exponents() {
        out.push(mk(Gl2Variant::DepthZeroSc { label: IrrepLabel::Cusp(t).to_string() }));
    }
    if c.q == c.p {
        if c.p != 2 {
            for depth2 in 1..=4u32 {
                let ramified = depth2 % 2 == 1;
                let units: Vec<u64> = if ramified { vec![1, localfield::non_residue(c.p)] } else { vec![1] };
                for u in units {
                    let character = if ramified {
                        let ext = QuadExt::new(c.p, ExtKind::Ramified { u }, 2)?;
                        ext.characters(2)
                            .into_iter()
                            .find(|x| localfield::galois_conjugate(x) != *x && x.vals.iter().all(|v| char_r == 0 || v.den % char_r != 0))
                            .map(|x| CharacterSpec::from_character(&x))
                    } else {
                        None
                    };
                    out.push(mk(Gl2Variant::PositiveLevelSc { ramified, depth2: Some(depth2), character }));
                }
            }
        } else {
            let ext = QuadExt::new(2, ExtKind::Unramified, 3)?;
            for x in ext.characters(2) {
                if localfield::galois_conjugate(&x) == x {
                    continue;
                }
                if char_r != 0 && (x.unif.den % char_r == 0 || x.vals.iter().any(|v| v.den % char_r == 0)) {
                    continue;
                }
                out.push(mk(Gl2Variant::PositiveLevelSc {
                    ramified: false,
                    depth2: Some(2),
                    character: Some(CharacterSpec::from_character(&x)),
                }));
            }
        }
    }
    Ok(out)
}

/// `lg r_ell(pi)` for `pi` a member of the depth-zero supercuspidal packet of `Cusp(t)`:
/// `lg(sigma-bar|_{SL2(k_F)}) / lg(sigma|_{SL2(k_F)})`.
pub fn depth_zero_mod_ell_length(label: &IrrepLabel, q: u64, ell: u64) -> Result<usize> {
    if ell == 0 {
        return invalid("ell must be a prime");
    }
    let c0 = Coeffs::new(q, 0)?;
    let cl = Coeffs::new(q, ell)?;
    let l = label.normalize(&c0)?;
    if !matches!(l, IrrepLabel::Cusp(_)) {
        return invalid("expected a label Cusp(t)");
    }
    let reduced: usize = l.reduction(&cl)?.iter().map(|(x, m)| m * x.restriction_length(&cl)).sum();
    Ok(reduced / l.restriction_length(&c0))
}
