use proptest::prelude::*;
use sl2rep::exactla::{
    field_with_roots, in_row_lattice, smith_normal_form, solve_sylvester, verify_snf, Fe, FieldDesc, IntMat, Mat,
};
use sl2rep::Error;
use num_traits::Zero;

// Schoolbook arithmetic on base-p digit vectors, reduced by the field modulus.
fn digits(mut n: u64, p: u64, k: usize) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = n % p;
            n /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn poly_mul(f: &FieldDesc, a: u64, b: u64) -> u64 {
    let (p, k) = (f.characteristic(), f.degree() as usize);
    let m = f.modulus();
    let (a, b) = (digits(a, p, k), digits(b, p, k));
    let mut prod = vec![0u64; 2 * k];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
        }
    }
    for top in (k..2 * k).rev() {
        let c = prod[top];
        if c != 0 {
            for i in 0..=k {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + p * p - c * m[i] % p) % p;
            }
        }
    }
    undigits(&prod[..k], p)
}

fn poly_add(f: &FieldDesc, a: u64, b: u64) -> u64 {
    let (p, k) = (f.characteristic(), f.degree() as usize);
    let s: Vec<u64> = digits(a, p, k).iter().zip(digits(b, p, k)).map(|(x, y)| (x + y) % p).collect();
    undigits(&s, p)
}

const FIELDS: [(u64, u32); 8] = [(2, 1), (3, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4)];

#[test]
fn field_tables_match_polynomial_arithmetic() {
    for (p, k) in FIELDS {
        let f = FieldDesc::new(p, k).unwrap();
        let m = f.modulus();
        assert_eq!(m.len(), k as usize + 1);
        assert_eq!(m[k as usize], 1);
        let q = f.order();
        assert_eq!(q, p.pow(k));
        for a in 0..q {
            for b in 0..q {
                let (x, y) = (f.from_poly(a as u32), f.from_poly(b as u32));
                assert_eq!(f.to_poly(f.mul(x, y)) as u64, poly_mul(&f, a, b), "F_{q}: {a}*{b}");
                assert_eq!(f.to_poly(f.add(x, y)) as u64, poly_add(&f, a, b), "F_{q}: {a}+{b}");
            }
        }
    }
}

#[test]
fn generator_is_primitive_and_roots_of_unity_exist() {
    for (p, k) in FIELDS {
        let f = FieldDesc::new(p, k).unwrap();
        let q = f.order();
        assert_eq!(f.elem_order(f.generator()), q - 1);
        for n in 1..q {
            let r = f.root_of_unity(n);
            if (q - 1) % n == 0 {
                assert_eq!(f.elem_order(r.unwrap()), n);
            } else {
                assert!(matches!(r, Err(Error::InvalidField(_))));
            }
        }
    }
}

#[test]
fn field_constructor_rejects_bad_input() {
    assert!(matches!(FieldDesc::new(6, 1), Err(Error::InvalidInput(_))));
    assert!(matches!(FieldDesc::new(2, 0), Err(Error::InvalidInput(_))));
    assert!(matches!(FieldDesc::new(2, 40), Err(Error::ResourceLimit(_))));
}

#[test]
fn field_with_roots_examples() {
    let cases = [(7, vec![3], 1), (2, vec![3], 2), (7, vec![16], 2), (3, vec![8], 2), (5, vec![3, 4], 2)];
    for (ell, orders, deg) in cases {
        let f = field_with_roots(ell, &orders).unwrap();
        assert_eq!(f.characteristic(), ell);
        assert_eq!(f.degree(), deg, "ell={ell} orders={orders:?}");
        for n in orders {
            assert_eq!((f.order() - 1) % n, 0);
        }
    }
    assert!(field_with_roots(3, &[3]).is_err());
}

#[test]
fn embedding_respects_arithmetic() {
    let small = FieldDesc::new(2, 2).unwrap();
    let big = FieldDesc::new(2, 4).unwrap();
    let t = small.embedding_into(&big).unwrap();
    for a in small.elements() {
        for b in small.elements() {
            assert_eq!(t[small.mul(a, b).0 as usize], big.mul(t[a.0 as usize], t[b.0 as usize]));
            assert_eq!(t[small.add(a, b).0 as usize], big.add(t[a.0 as usize], t[b.0 as usize]));
        }
    }
    assert!(FieldDesc::new(2, 3).unwrap().embedding_into(&big).is_err());
}

#[test]
fn sylvester_examples() {
    let f = FieldDesc::prime_field(5).unwrap();
    let i2 = Mat::identity(&f, 2);
    assert_eq!(solve_sylvester(&[(i2.clone(), i2.clone())]).unwrap().len(), 4);
    // reflection rep of S_3: absolutely irreducible over F_5
    let r = Mat::from_ints(&f, 2, 2, &[0, -1, 1, -1]);
    let s = Mat::from_ints(&f, 2, 2, &[0, 1, 1, 0]);
    let end = solve_sylvester(&[(r.clone(), r.clone()), (s.clone(), s.clone())]).unwrap();
    assert_eq!(end.len(), 1);
    let one = Mat::identity(&f, 1);
    let sign = Mat::scalar(&f, 1, f.from_int(-1));
    let homs = solve_sylvester(&[(r.clone(), one.clone()), (s.clone(), sign)]).unwrap();
    assert_eq!(homs.len(), 0);
    assert!(solve_sylvester(&[]).is_err());
    for x in end {
        assert_eq!(r.mul(&x), x.mul(&r));
        assert_eq!(s.mul(&x), x.mul(&s));
    }
}

#[test]
fn snf_examples() {
    let s = smith_normal_form(&IntMat::identity(3));
    assert_eq!(s.diag, vec![1.into(), 1.into(), 1.into()]);
    let m = IntMat::from_rows(&[vec![2, 0], vec![0, 4]]);
    let s = smith_normal_form(&m);
    assert_eq!(s.diag, vec![2.into(), 4.into()]);
    let m = IntMat::from_rows(&[vec![2, 0], vec![0, 3]]);
    assert_eq!(smith_normal_form(&m).diag, vec![1.into(), 6.into()]);
    // indicators of the six affine lines in F_2^2, coordinates indexed by points
    let lines = IntMat::from_rows(&[
        vec![1, 1, 0, 0],
        vec![0, 0, 1, 1],
        vec![1, 0, 1, 0],
        vec![0, 1, 0, 1],
        vec![1, 0, 0, 1],
        vec![0, 1, 1, 0],
    ]);
    let s = smith_normal_form(&lines);
    assert!(verify_snf(&lines, &s));
    assert_eq!(s.rank(), 4);
    assert_eq!(s.diag.iter().max().unwrap(), &2.into());
    assert!(in_row_lattice(&lines, &s, &[2, 2, 2, 2]));
    assert!(in_row_lattice(&lines, &s, &[1, 1, 1, 1]));
    assert!(!in_row_lattice(&lines, &s, &[1, 0, 0, 0]));
    assert!(in_row_lattice(&lines, &s, &[2, 0, 0, 0]));
}

fn arb_mat(p: u64) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..6, 1usize..6).prop_flat_map(move |(r, c)| {
        (Just(r), Just(c), prop::collection::vec(0..p as i64, r * c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(idx in 0usize..FIELDS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let (p, k) = FIELDS[idx];
        let f = FieldDesc::new(p, k).unwrap();
        let q = f.order() as u32;
        let (a, b, c) = (Fe(a % q), Fe(b % q), Fe(c % q));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), f.one());
            prop_assert_eq!(f.div(f.mul(a, b), a), b);
        }
        prop_assert_eq!(f.pow(a, f.order()), a);
    }

    #[test]
    fn rank_nullity((r, c, vals) in arb_mat(3)) {
        let f = FieldDesc::prime_field(3).unwrap();
        let m = Mat::from_ints(&f, r, c, &vals);
        let ker = m.right_kernel();
        prop_assert_eq!(m.rank() + ker.len(), c);
        for v in &ker {
            prop_assert!(m.vec_mul_col(v).iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn inverse_when_square(n in 1usize..5, vals in prop::collection::vec(0i64..5, 16)) {
        let f = FieldDesc::prime_field(5).unwrap();
        let m = Mat::from_ints(&f, n, n, &vals[..n * n]);
        match m.inverse() {
            Some(inv) => {
                prop_assert!(m.mul(&inv).is_identity());
                prop_assert_eq!(m.rank(), n);
            }
            None => prop_assert!(m.rank() < n),
        }
    }

    #[test]
    fn snf_is_valid((r, c, vals) in arb_mat(7)) {
        let vals: Vec<i64> = vals.iter().map(|v| v - 3).collect();
        let m = IntMat::from_i64(r, c, &vals);
        let s = smith_normal_form(&m);
        prop_assert!(verify_snf(&m, &s));
        for w in s.diag.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }
}
