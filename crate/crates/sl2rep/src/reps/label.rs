use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Coeffs;
use crate::error::{invalid, Error, Result};

/// Name of an irreducible representation of `GL2(F_q)`.
///
/// Exponents refer to the canonical generators: `e` for characters of `F_q^*`
/// (taken mod `q - 1`) and `t` for characters of `F_{q^2}^*` (mod `q^2 - 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrrepLabel {
    /// `chi_e o det`
    Char(u64),
    /// Steinberg twisted by `chi_e o det`
    StTwist(u64),
    /// The cuspidal `sigma_0` (exists when `q + 1 = 0` in R) twisted by `chi_e o det`
    Cusp0Twist(u64),
    /// Principal series `ind_B(chi_e1 x chi_e2)`
    Princ(u64, u64),
    /// Cuspidal `sigma(theta_t)`
    Cusp(u64),
}

impl IrrepLabel {
    pub fn dim(&self, q: u64) -> usize {
        (match self {
            IrrepLabel::Char(_) => 1,
            IrrepLabel::StTwist(_) => q,
            IrrepLabel::Cusp0Twist(_) => q - 1,
            IrrepLabel::Princ(..) => q + 1,
            IrrepLabel::Cusp(_) => q - 1,
        }) as usize
    }

    pub fn kind(&self) -> &'static str {
        match self {
            IrrepLabel::Char(_) => "Char",
            IrrepLabel::StTwist(_) => "St",
            IrrepLabel::Cusp0Twist(_) => "Cusp0",
            IrrepLabel::Princ(..) => "Princ",
            IrrepLabel::Cusp(_) => "Cusp",
        }
    }

    pub fn is_cuspidal(&self) -> bool {
        matches!(self, IrrepLabel::Cusp(_) | IrrepLabel::Cusp0Twist(_))
    }

    /// Canonical form in the given setting; errors on labels that do not name an irreducible there.
    pub fn normalize(&self, s: &Coeffs) -> Result<IrrepLabel> {
        let n1 = s.q - 1;
        let n2 = s.q * s.q - 1;
        Ok(match *self {
            IrrepLabel::Char(e) => IrrepLabel::Char(s.canon(e, n1)),
            IrrepLabel::StTwist(e) => {
                if s.ell_divides_q_plus_1() {
                    return invalid("the Steinberg representation is reducible when q + 1 = 0 in R");
                }
                IrrepLabel::StTwist(s.canon(e, n1))
            }
            IrrepLabel::Cusp0Twist(e) => {
                if !s.ell_divides_q_plus_1() {
                    return invalid("sigma_0 exists only when q + 1 = 0 in R");
                }
                IrrepLabel::Cusp0Twist(s.canon(e, n1))
            }
            IrrepLabel::Princ(a, b) => {
                let (a, b) = (s.canon(a, n1), s.canon(b, n1));
                if a == b {
                    return invalid("principal series label needs two distinct characters");
                }
                IrrepLabel::Princ(a.min(b), a.max(b))
            }
            IrrepLabel::Cusp(t) => {
                let t = s.canon(t, n2);
                let tq = s.canon(t * s.q, n2);
                if t == tq {
                    return invalid("cuspidal label needs theta != theta^q");
                }
                IrrepLabel::Cusp(t.min(tq))
            }
        })
    }

    /// Twist by `chi_c o det`.
    pub fn twist(&self, c: u64, q: u64) -> IrrepLabel {
        let n1 = q - 1;
        let n2 = q * q - 1;
        match *self {
            IrrepLabel::Char(e) => IrrepLabel::Char((e + c) % n1),
            IrrepLabel::StTwist(e) => IrrepLabel::StTwist((e + c) % n1),
            IrrepLabel::Cusp0Twist(e) => IrrepLabel::Cusp0Twist((e + c) % n1),
            IrrepLabel::Princ(a, b) => IrrepLabel::Princ((a + c) % n1, (b + c) % n1),
            IrrepLabel::Cusp(t) => IrrepLabel::Cusp((t + c * (q + 1)) % n2),
        }
    }

    /// Length of the restriction to `SL2(F_q)`, in closed form.
    pub fn restriction_length(&self, s: &Coeffs) -> usize {
        let l = s.char_r;
        if s.p == 2 {
            return 1;
        }
        if l == 2 {
            return if matches!(self, IrrepLabel::Cusp0Twist(_)) { 2 } else { 1 };
        }
        let n1 = s.reg(s.q - 1);
        let n2 = s.reg(s.q * s.q - 1);
        match *self {
            IrrepLabel::Princ(a, b) => {
                let d = (a + (s.q - 1) - b) % (s.q - 1);
                if (2 * d) % n1 == 0 {
                    2
                } else {
                    1
                }
            }
            IrrepLabel::Cusp(t) => {
                if (2 * t as u128 * (s.q - 1) as u128) % n2 as u128 == 0 {
                    2
                } else {
                    1
                }
            }
            _ => 1,
        }
    }

    /// Composition factors of the reduction mod `ell` of a characteristic-0 label,
    /// with multiplicities, and for Steinberg at `ell | q + 1` the factor that is a submodule.
    pub fn reduction(&self, modular: &Coeffs) -> Result<Vec<(IrrepLabel, usize)>> {
        let s = modular;
        if s.char_r == 0 {
            return invalid("reduction needs a positive characteristic");
        }
        let n1 = s.q - 1;
        let n2 = s.q * s.q - 1;
        let c = |e: u64| s.canon(e, n1);
        Ok(match *self {
            IrrepLabel::Char(e) => vec![(IrrepLabel::Char(c(e)), 1)],
            IrrepLabel::StTwist(e) => {
                if s.ell_divides_q_plus_1() {
                    vec![(IrrepLabel::Cusp0Twist(c(e)), 1), (IrrepLabel::Char(c(e)), 1)]
                } else {
                    vec![(IrrepLabel::StTwist(c(e)), 1)]
                }
            }
            IrrepLabel::Princ(a, b) => {
                if c(a) != c(b) {
                    vec![(IrrepLabel::Princ(c(a), c(b)).normalize(s)?, 1)]
                } else if s.ell_divides_q_plus_1() {
                    vec![(IrrepLabel::Char(c(a)), 2), (IrrepLabel::Cusp0Twist(c(a)), 1)]
                } else {
                    vec![(IrrepLabel::Char(c(a)), 1), (IrrepLabel::StTwist(c(a)), 1)]
                }
            }
            IrrepLabel::Cusp(t) => {
                let tb = s.canon(t, n2);
                if tb != s.canon(tb * s.q, n2) {
                    vec![(IrrepLabel::Cusp(tb).normalize(s)?, 1)]
                } else {
                    // theta-bar = eta o N with eta = chi_c, i.e. c (q + 1) = t modulo the regular part
                    let nr = s.reg(n2);
                    let e = (0..n1)
                        .find(|&e| (e * (s.q + 1)) % nr == tb % nr)
                        .ok_or_else(|| Error::Internal("theta-bar does not factor through the norm".into()))?;
                    vec![(IrrepLabel::Cusp0Twist(c(e)), 1)]
                }
            }
            IrrepLabel::Cusp0Twist(_) => return invalid("sigma_0 is not a characteristic-0 label"),
        })
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Char(e) => write!(f, "Char({e})"),
            IrrepLabel::StTwist(e) => write!(f, "St({e})"),
            IrrepLabel::Cusp0Twist(e) => write!(f, "Cusp0({e})"),
            IrrepLabel::Princ(a, b) => write!(f, "Princ({a},{b})"),
            IrrepLabel::Cusp(t) => write!(f, "Cusp({t})"),
        }
    }
}

impl FromStr for IrrepLabel {
    type Err = Error;

    /// Accepts `Char(e)`, `St(e)`, `Cusp0(e)`, `Princ(e1,e2)`, `Cusp(t)`.
    fn from_str(s: &str) -> Result<IrrepLabel> {
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| Error::InvalidInput(format!("bad label {s:?}")))?;
        if !s.ends_with(')') {
            return invalid(format!("bad label {s:?}"));
        }
        let name = &s[..open];
        let args: Vec<u64> = s[open + 1..s.len() - 1]
            .split(',')
            .map(|a| a.trim().parse::<u64>().map_err(|_| Error::InvalidInput(format!("bad exponent in {s:?}"))))
            .collect::<Result<_>>()?;
        match (name, args.as_slice()) {
            ("Char", [e]) => Ok(IrrepLabel::Char(*e)),
            ("St" | "StTwist", [e]) => Ok(IrrepLabel::StTwist(*e)),
            ("Cusp0" | "Cusp0Twist", [e]) => Ok(IrrepLabel::Cusp0Twist(*e)),
            ("Princ", [a, b]) => Ok(IrrepLabel::Princ(*a, *b)),
            ("Cusp", [t]) => Ok(IrrepLabel::Cusp(*t)),
            _ => invalid(format!("bad label {s:?}")),
        }
    }
}
