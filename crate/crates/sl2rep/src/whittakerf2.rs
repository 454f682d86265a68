//! Combinatorics of affine subspaces of `V = F_2^d`: Whittaker decompositions,
//! and the lattices `I_r` spanned by indicators of `r`-dimensional affine subspaces.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exactla::{in_row_lattice, lattice_basis, smith_normal_form, IntMat};

pub const MAX_SPACE_DIM: u32 = 6;
pub const MAX_LATTICE_DIM: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2Space {
    pub d: u32,
}

impl F2Space {
    pub fn new(d: u32) -> Result<F2Space> {
        if d > MAX_SPACE_DIM {
            return Err(Error::ResourceLimit(format!("F_2^{d} exceeds the cap {MAX_SPACE_DIM}")));
        }
        Ok(F2Space { d })
    }

    pub fn size(&self) -> usize {
        1 << self.d
    }

    pub fn points(&self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.d)
    }

    /// Linear subspaces of dimension `k`, each as its reduced echelon basis.
    /// A row's pivot is its highest bit; pivot bits are cleared in the other rows.
    pub fn subspaces(&self, k: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if k > self.d {
            return out;
        }
        let d = self.d;
        for pivots in (0u32..(1 << d)).filter(|m| m.count_ones() == k) {
            let piv: Vec<u32> = (0..d).filter(|b| pivots >> b & 1 == 1).collect();
            // free positions of row i: non-pivot bits below its pivot
            let free: Vec<Vec<u32>> = piv.iter().map(|&pb| (0..pb).filter(|b| pivots >> b & 1 == 0).collect()).collect();
            let total: u32 = free.iter().map(|f| f.len() as u32).sum();
            for fill in 0u64..(1u64 << total) {
                let mut bit = 0;
                let mut rows = Vec::with_capacity(piv.len());
                for (i, &pb) in piv.iter().enumerate() {
                    let mut row = 1u32 << pb;
                    for &fb in &free[i] {
                        if fill >> bit & 1 == 1 {
                            row |= 1 << fb;
                        }
                        bit += 1;
                    }
                    rows.push(row);
                }
                rows.sort_unstable_by(|a, b| b.cmp(a));
                out.push(rows);
            }
        }
        out
    }

    /// All affine subspaces of dimension `r`.
    pub fn affine_subspaces(&self, r: u32) -> Vec<AffineSubspace> {
        self.subspaces(r).into_iter().flat_map(|w| cosets(self.d, &w)).collect()
    }
}

fn span(basis: &[u32]) -> Vec<u32> {
    let mut pts = vec![0u32];
    for &b in basis {
        let shifted: Vec<u32> = pts.iter().map(|&x| x ^ b).collect();
        pts.extend(shifted);
    }
    pts
}

fn cosets(d: u32, direction: &[u32]) -> Vec<AffineSubspace> {
    let w = span(direction);
    let mut seen = vec![false; 1 << d];
    let mut out = Vec::new();
    for x in 0..(1u32 << d) {
        if seen[x as usize] {
            continue;
        }
        for &y in &w {
            seen[(x ^ y) as usize] = true;
        }
        out.push(AffineSubspace { d, base: x, direction: direction.to_vec() });
    }
    out
}

/// `base + span(direction)`, with `base` the smallest point of the coset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineSubspace {
    pub d: u32,
    pub base: u32,
    pub direction: Vec<u32>,
}

impl AffineSubspace {
    /// Normalizes `direction` to a basis (dropping dependent vectors) and `base` to the coset minimum.
    pub fn new(d: u32, base: u32, direction: &[u32]) -> Result<AffineSubspace> {
        F2Space::new(d)?;
        let mask = (1u32 << d) - 1;
        if base & !mask != 0 || direction.iter().any(|v| v & !mask != 0) {
            return invalid(format!("vector outside F_2^{d}"));
        }
        let mut basis: Vec<u32> = Vec::new();
        for &v in direction {
            let mut x = v;
            for &b in &basis {
                x = x.min(x ^ b);
            }
            if x != 0 {
                basis.push(x);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        // reduce to echelon form with cleared pivots
        for i in 0..basis.len() {
            let top = 31 - basis[i].leading_zeros();
            for k in 0..basis.len() {
                if k != i && basis[k] >> top & 1 == 1 {
                    basis[k] ^= basis[i];
                }
            }
        }
        basis.sort_unstable_by(|a, b| b.cmp(a));
        let base = span(&basis).into_iter().map(|w| w ^ base).min().unwrap();
        Ok(AffineSubspace { d, base, direction: basis })
    }

    pub fn dim(&self) -> u32 {
        self.direction.len() as u32
    }

    pub fn points(&self) -> Vec<u32> {
        let mut v: Vec<u32> = span(&self.direction).into_iter().map(|w| w ^ self.base).collect();
        v.sort_unstable();
        v
    }

    pub fn contains(&self, x: u32) -> bool {
        self.points().contains(&x)
    }

    pub fn indicator(&self) -> Vec<i64> {
        let mut v = vec![0i64; 1 << self.d];
        for x in self.points() {
            v[x as usize] = 1;
        }
        v
    }

    pub fn translate(&self, t: u32) -> AffineSubspace {
        AffineSubspace::new(self.d, self.base ^ t, &self.direction).expect("same space")
    }
}

/// Number of nilpotent orbits in `M2(F)` under `H` when `dim V_H = d`.
pub fn nilpotent_orbit_count(d: u32) -> u64 {
    1 + (1u64 << d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhittakerPartition {
    pub direction: Vec<u32>,
    pub cells: Vec<AffineSubspace>,
}

/// Partitions of `V` into the `2^c` cosets of a codimension-`c` subspace, one per subspace.
pub fn whittaker_partitions(d: u32, c: u32) -> Result<Vec<WhittakerPartition>> {
    if c > 2 {
        return invalid(format!("codimension {c} exceeds 2: packets have at most 4 members"));
    }
    if d < c {
        return invalid(format!("codimension {c} is larger than dim {d}"));
    }
    let v = F2Space::new(d)?;
    Ok(v.subspaces(d - c).into_iter().map(|w| WhittakerPartition { cells: cosets(d, &w), direction: w }).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub d: u32,
    pub r: u32,
    pub generators: usize,
    pub rank: usize,
    /// Non-trivial invariant factors of `I_0 / I_r`.
    pub invariant_factors: Vec<u64>,
    pub exponent: u64,
}

fn check_lattice_dims(d: u32, r: u32) -> Result<()> {
    if d > MAX_LATTICE_DIM {
        return Err(Error::ResourceLimit(format!("lattice computations are capped at d = {MAX_LATTICE_DIM}")));
    }
    if r >= d {
        return invalid(format!("need 0 <= r < d, got r = {r}, d = {d}"));
    }
    Ok(())
}

fn lattice(d: u32, r: u32) -> (IntMat, Vec<Vec<i64>>) {
    let gens: Vec<Vec<i64>> = F2Space { d }.affine_subspaces(r).iter().map(|a| a.indicator()).collect();
    (lattice_basis(&gens, 1 << d), gens)
}

/// `I_0 / I_r` through the Smith form of `I_r`.
pub fn lattice_report(d: u32, r: u32) -> Result<LatticeReport> {
    check_lattice_dims(d, r)?;
    let (basis, gens) = lattice(d, r);
    let snf = smith_normal_form(&basis);
    let rank = snf.rank();
    if rank != 1 << d {
        return Err(Error::Internal(format!("I_{r} has rank {rank} < {}", 1 << d)));
    }
    let to_u64 = |x: &BigInt| x.abs().to_u64().ok_or_else(|| Error::Internal("invariant factor overflow".into()));
    let invariant_factors: Vec<u64> = snf.diag.iter().filter(|x| !x.is_one()).map(to_u64).collect::<Result<_>>()?;
    let exponent = snf.diag.iter().filter(|x| !x.is_zero()).last().map(to_u64).transpose()?.unwrap_or(1);
    Ok(LatticeReport { d, r, generators: gens.len(), rank, invariant_factors, exponent })
}

/// Exponent of `I_0 / I_r`.
pub fn lattice_exponent(d: u32, r: u32) -> Result<u64> {
    Ok(lattice_report(d, r)?.exponent)
}

/// Whether `2 I_{r-1}` lies in `I_r`, tested generator by generator.
pub fn doubling_inclusion_check(d: u32, r: u32) -> Result<bool> {
    if r == 0 {
        return invalid("doubling needs r > 0");
    }
    check_lattice_dims(d, r)?;
    let (basis, _) = lattice(d, r);
    let snf = smith_normal_form(&basis);
    Ok(F2Space { d }.affine_subspaces(r - 1).iter().all(|a| {
        let doubled: Vec<i64> = a.indicator().into_iter().map(|x| 2 * x).collect();
        in_row_lattice(&basis, &snf, &doubled)
    }))
}

/// The three `r`-dimensional subspaces `A ∪ A+e`, `A ∪ A+f`, `A+e ∪ A+f` and whether
/// their indicators satisfy `χ1 + χ2 - χ3 = 2χ_A`. `e`, `f` must span a plane
/// meeting the direction of `A` trivially.
pub fn three_term_identity(a: &AffineSubspace, e: u32, f: u32) -> Result<([AffineSubspace; 3], bool)> {
    let w = span(&a.direction);
    let independent = [e, f, e ^ f].iter().all(|x| !w.contains(x));
    if !independent {
        return invalid("e, f do not span a plane supplementary to the direction");
    }
    let mut dir_e = a.direction.clone();
    dir_e.push(e);
    let mut dir_f = a.direction.clone();
    dir_f.push(f);
    let mut dir_ef = a.direction.clone();
    dir_ef.push(e ^ f);
    let ae = AffineSubspace::new(a.d, a.base, &dir_e)?;
    let af = AffineSubspace::new(a.d, a.base, &dir_f)?;
    let b = AffineSubspace::new(a.d, a.base ^ e, &dir_ef)?;
    // the three sets are the claimed unions
    let union = |x: &AffineSubspace, y: &AffineSubspace| {
        let mut v: Vec<u32> = x.points().into_iter().chain(y.points()).collect();
        v.sort_unstable();
        v
    };
    let shapes = ae.points() == union(a, &a.translate(e))
        && af.points() == union(a, &a.translate(f))
        && b.points() == union(&a.translate(e), &a.translate(f));
    let (x, y, z, t) = (ae.indicator(), af.indicator(), b.indicator(), a.indicator());
    let holds = shapes && (0..x.len()).all(|i| x[i] + y[i] - z[i] == 2 * t[i]);
    Ok(([ae, af, b], holds))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallTraceBasis {
    pub d: u32,
    /// Rows are coordinates in the basis `F_0, F_x (x in V)` of nilpotent orbital integrals.
    pub names: Vec<String>,
    pub rows: Vec<Vec<i64>>,
    pub determinant: i64,
}

/// Germ coordinates of the trace basis for `d = 0` (trivial, Steinberg) and `d = 1`
/// (trivial, the two halves of the quadratic principal series). The constant
/// coefficients are 1, -1 and 0; the Whittaker parts are the indicator functions.
pub fn small_trace_basis(d: u32) -> Result<SmallTraceBasis> {
    let (names, rows): (Vec<&str>, Vec<Vec<i64>>) = match d {
        0 => (vec!["1", "St"], vec![vec![1, 0], vec![-1, 1]]),
        1 => (vec!["1", "pi_E+", "pi_E-"], vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        _ => return invalid("the explicit trace basis is only given for d = 0, 1"),
    };
    let m = IntMat::from_rows(&rows);
    let snf = smith_normal_form(&m);
    let mut det = BigInt::one();
    for x in &snf.diag {
        det *= x;
    }
    let determinant = if snf.rank() == rows.len() { det.to_i64().unwrap_or(0) } else { 0 };
    Ok(SmallTraceBasis { d, names: names.into_iter().map(String::from).collect(), rows, determinant })
}
