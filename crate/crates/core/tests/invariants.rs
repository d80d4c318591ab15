use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankint_core::code::rank_of;
use rankint_core::geometry::{hyperplane_weight_partition_solution, rank_weight_duality_check, weight_of, ExtSubspace};
use rankint_core::linalg::{complete_basis, ProjectiveIter};
use rankint_core::properties::singleton_bound;
use rankint_core::{ExtField, FqMatrix, FqSubspace, Fqm, RankCode};

const FIELDS: &[(u32, u32)] = &[(2, 1), (2, 3), (2, 5), (2, 8), (3, 3), (5, 2), (7, 2), (2, 17), (3, 11)];

fn fields() -> Vec<Arc<ExtField>> {
    FIELDS.iter().map(|&(q, m)| Arc::new(ExtField::new(q, m, None).unwrap())).collect()
}

fn random_elem(f: &ExtField, rng: &mut impl Rng) -> Fqm {
    f.element(rng.gen_range(0..f.order())).unwrap()
}

fn random_matrix(q: u32, rows: usize, cols: usize, rng: &mut impl Rng) -> FqMatrix {
    FqMatrix::new(q, rows, cols, (0..rows * cols).map(|_| rng.gen_range(0..q)).collect()).unwrap()
}

fn random_code(f: &Arc<ExtField>, k: usize, n: usize, rng: &mut impl Rng) -> RankCode {
    loop {
        let g = (0..k).map(|_| (0..n).map(|_| random_elem(f, rng)).collect()).collect();
        if let Ok(c) = RankCode::new(f.clone(), g) {
            return c;
        }
    }
}

/// Naive F_q-span by closure, for small ambient spaces.
fn brute_span(q: u32, vectors: &[Vec<u32>], n: usize) -> std::collections::BTreeSet<Vec<u32>> {
    let mut set = std::collections::BTreeSet::new();
    set.insert(vec![0u32; n]);
    for v in vectors {
        let cur: Vec<Vec<u32>> = set.iter().cloned().collect();
        for w in cur {
            for c in 1..q {
                set.insert(w.iter().zip(v).map(|(&a, &b)| (a + c * b) % q).collect());
            }
        }
    }
    set
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms(which in 0..FIELDS.len(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (q, m) = FIELDS[which];
        let f = ExtField::new(q, m, None).unwrap();
        let e = |x: u64| f.element(x % f.order()).unwrap();
        let (a, b, c) = (e(a), e(b), e(c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fqm::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, Fqm::ONE), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), Fqm::ONE);
            prop_assert_eq!(f.mul(f.div(b, a), a), b);
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(which in 0..FIELDS.len(), a in any::<u64>(), b in any::<u64>(), i in 0u32..20) {
        let (q, m) = FIELDS[which];
        let f = ExtField::new(q, m, None).unwrap();
        let e = |x: u64| f.element(x % f.order()).unwrap();
        let (a, b) = (e(a), e(b));
        prop_assert_eq!(f.frobenius(f.add(a, b), i), f.add(f.frobenius(a, i), f.frobenius(b, i)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), i), f.mul(f.frobenius(a, i), f.frobenius(b, i)));
        prop_assert_eq!(f.frobenius(a, i), f.pow(a, (q as u64).pow(i % m)));
        prop_assert_eq!(f.frobenius(a, m), a);
        // F_q is fixed.
        let c = f.from_prime(i % q);
        prop_assert_eq!(f.frobenius(c, 1), c);
    }
}

#[test]
fn expansion_is_f_q_linear_and_invertible() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for f in fields() {
        let q = f.q();
        for _ in 0..500 {
            let (a, b) = (random_elem(&f, &mut rng), random_elem(&f, &mut rng));
            let c = rng.gen_range(0..q);
            let lhs = f.expand(f.add(a, f.scale(b, c)));
            let rhs: Vec<u32> = f.expand(a).iter().zip(f.expand(b)).map(|(&x, y)| (x + c * y) % q).collect();
            assert_eq!(lhs, rhs);
            assert_eq!(f.lift(&f.expand(a)), a);
        }
    }
}

#[test]
fn rank_does_not_depend_on_the_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for &(q, m) in &[(2u32, 4u32), (3, 3), (2, 6), (5, 2)] {
        let f = ExtField::new(q, m, None).unwrap();
        let mut changed = 0;
        while changed < 20 {
            let gamma: Vec<Fqm> = (0..m).map(|_| random_elem(&f, &mut rng)).collect();
            let Ok(g) = f.with_basis(gamma.clone()) else { continue };
            changed += 1;
            for (j, &x) in gamma.iter().enumerate() {
                let mut e = vec![0u32; m as usize];
                e[j] = 1;
                assert_eq!(g.expand(x), e);
            }
            for _ in 0..50 {
                let n = rng.gen_range(1..8);
                let x: Vec<Fqm> = (0..n).map(|_| random_elem(&f, &mut rng)).collect();
                assert_eq!(rank_of(&f, &x), rank_of(&g, &x));
            }
        }
    }
}

#[test]
fn grassmann_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in 0..1500 {
        let q = [2, 3, 5][t % 3];
        let n = rng.gen_range(1..7);
        let gen = |rng: &mut ChaCha8Rng| -> Vec<Vec<u32>> {
            let r = rng.gen_range(0..=n);
            (0..r).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect()
        };
        let (a, b) = (gen(&mut rng), gen(&mut rng));
        let u = FqSubspace::span(q, n, &a).unwrap();
        let w = FqSubspace::span(q, n, &b).unwrap();
        let i = u.intersect(&w).unwrap();
        assert_eq!(u.dim() + w.dim(), u.sum_dim(&w).unwrap() + i.dim());
        assert!(i.is_subspace_of(&u) && i.is_subspace_of(&w));
        if (q as u64).pow(n as u32) <= 1024 {
            let su = brute_span(q, &a, n);
            let sw = brute_span(q, &b, n);
            assert_eq!(su.len() as u64, (q as u64).pow(u.dim() as u32));
            let common = su.intersection(&sw).count() as u64;
            assert_eq!(common, (q as u64).pow(i.dim() as u32));
            for v in su.iter().take(10) {
                assert!(u.contains(v));
            }
        }
    }
}

#[test]
fn rref_is_canonical() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..300 {
        let q = [2, 3, 7][rng.gen_range(0..3)];
        let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..7));
        let a = random_matrix(q, r, c, &mut rng);
        let p = loop {
            let p = random_matrix(q, r, r, &mut rng);
            if p.is_invertible() {
                break p;
            }
        };
        let pa = p.mul(&a).unwrap();
        assert_eq!(a.rref(), pa.rref());
        assert_eq!(a.rank(), a.transpose().rank());
        assert_eq!(FqSubspace::from_matrix(&a), FqSubspace::from_matrix(&pa));
        let ker = a.right_kernel();
        assert_eq!(ker.dim() + a.rank(), c);
        for row in ker.basis().row_vecs() {
            assert!(a.mul_vec(&row).iter().all(|&x| x == 0));
        }
        if a.rows() == a.cols() {
            match a.inverse() {
                Some(inv) => assert_eq!(a.mul(&inv).unwrap(), FqMatrix::identity(q, r)),
                None => assert!(a.rank() < r),
            }
        }
    }
}

#[test]
fn complete_basis_extends_independent_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let q = [2, 3][rng.gen_range(0..2)];
        let n = rng.gen_range(1..7);
        let r = rng.gen_range(0..=n);
        let b: Vec<Vec<u32>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
        let independent = FqSubspace::span(q, n, &b).unwrap().dim() == r;
        match complete_basis(q, n, &b) {
            Ok(full) => {
                assert!(independent);
                assert!(full.is_invertible());
                assert_eq!(&full.row_vecs()[..r], &b[..]);
            }
            Err(_) => assert!(!independent),
        }
    }
}

#[test]
fn equivalence_preserves_spectrum_and_composes() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = Arc::new(ExtField::new(2, 4, None).unwrap());
    for _ in 0..40 {
        let n = rng.gen_range(2..6);
        let k = rng.gen_range(1..=n.min(3));
        let c = random_code(&f, k, n, &mut rng);
        let inv = |rng: &mut ChaCha8Rng| loop {
            let a = random_matrix(2, n, n, rng);
            if a.is_invertible() {
                break a;
            }
        };
        let (a, b) = (inv(&mut rng), inv(&mut rng));
        let ca = c.apply_equivalence(&a).unwrap();
        assert_eq!(c.weight_spectrum(1 << 20).unwrap(), ca.weight_spectrum(1 << 20).unwrap());
        let cab = ca.apply_equivalence(&b).unwrap();
        assert_eq!(cab, c.apply_equivalence(&a.mul(&b).unwrap()).unwrap());
        assert_eq!(c.is_nondegenerate(), ca.is_nondegenerate());
        let singular = FqMatrix::zeros(2, n, n);
        assert!(c.apply_equivalence(&singular).is_err());
    }
}

#[test]
fn singleton_bound_holds_on_random_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &(q, m) in &[(2u32, 3u32), (2, 4), (3, 2), (2, 5)] {
        let f = Arc::new(ExtField::new(q, m, None).unwrap());
        for _ in 0..30 {
            let n = rng.gen_range(1..7);
            let k = rng.gen_range(1..=n.min(3));
            let c = random_code(&f, k, n, &mut rng);
            let d = c.distance().unwrap();
            assert!(d <= singleton_bound(q, m as usize, n, k), "d = {d} for [{n},{k}]_{q}^{m}");
            assert!(d <= n.min(m as usize));
        }
    }
}

#[test]
fn duality_on_random_nondegenerate_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for &(q, m, k, n) in &[(2u32, 4u32, 2usize, 5usize), (2, 3, 3, 6), (3, 3, 2, 4), (2, 5, 2, 6)] {
        let f = Arc::new(ExtField::new(q, m, None).unwrap());
        let mut done = 0;
        while done < 5 {
            let c = random_code(&f, k, n, &mut rng);
            if !c.is_nondegenerate() {
                continue;
            }
            done += 1;
            for u in ProjectiveIter::new(f.order(), k) {
                let (r, w) = rank_weight_duality_check(&c, &u).unwrap();
                assert_eq!(r, w);
            }
        }
    }
}

#[test]
fn hyperplane_weight_partition() {
    for &(q, m) in &[(2u32, 3u32), (2, 4), (2, 5), (3, 3), (3, 4), (3, 5), (5, 3)] {
        let (a, b) = hyperplane_weight_partition_solution(q, m).unwrap();
        assert_eq!((a, b), (q as u64 + 1, (q as u64).pow(m) - q as u64));
    }
}

/// Vectors of `U` outside a codimension-2 subspace `M` are split among the
/// hyperplanes through `M`.
#[test]
fn hyperplanes_through_a_codim_2_subspace_partition_u() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for &(q, m, k, n) in &[(2u32, 3u32, 2usize, 4usize), (3, 2, 2, 3), (2, 3, 3, 5), (2, 4, 3, 6), (3, 2, 3, 4)] {
        let f = Arc::new(ExtField::new(q, m, None).unwrap());
        let mut done = 0;
        while done < 6 {
            let c = random_code(&f, k, n, &mut rng);
            let Ok(u) = rankint_core::QSystem::of_code(&c) else { continue };
            done += 1;
            let qq = q as u64;
            let hs: Vec<Vec<Fqm>> = ProjectiveIter::new(f.order(), k).collect();
            // M = {0} for k = 2, a point for k = 3.
            let pts: Vec<Vec<Fqm>> = if k == 2 { vec![vec![]] } else { hs.clone() };
            for p in pts.iter().take(20) {
                let t = if p.is_empty() { 0 } else { weight_of(&u, &ExtSubspace::Span(vec![p.clone()])).unwrap() };
                let through: Vec<&Vec<Fqm>> = hs
                    .iter()
                    .filter(|h| h.iter().zip(p).fold(Fqm::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y))).is_zero())
                    .collect();
                assert_eq!(through.len() as u64, f.order() + 1);
                let sum: u64 = through.iter().map(|h| qq.pow(u.hyperplane_weight(h) as u32) - qq.pow(t as u32)).sum();
                assert_eq!(sum, qq.pow(n as u32) - qq.pow(t as u32));
            }
        }
    }
}

#[test]
fn subspace_weight_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = Arc::new(ExtField::new(2, 4, None).unwrap());
    for _ in 0..100 {
        let c = random_code(&f, 3, 6, &mut rng);
        let Ok(u) = rankint_core::QSystem::of_code(&c) else { continue };
        let v1: Vec<Fqm> = (0..3).map(|_| random_elem(&f, &mut rng)).collect();
        let v2: Vec<Fqm> = (0..3).map(|_| random_elem(&f, &mut rng)).collect();
        let small = weight_of(&u, &ExtSubspace::Span(vec![v1.clone()])).unwrap();
        let big = weight_of(&u, &ExtSubspace::Span(vec![v1, v2])).unwrap();
        assert!(small <= big && big <= u.n());
    }
}
