//! Independent routes to the values the engine computes.

use std::collections::BTreeSet;

use dpcount_core::{parse_class, DivisorClass, GwEngine, SurfaceModel};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Kontsevich's recursion for plane curves, written directly.
fn kontsevich(max_d: usize) -> Vec<u128> {
    fn choose(n: i64, r: i64) -> u128 {
        if r < 0 || r > n {
            return 0;
        }
        (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    }
    let mut n = vec![0u128; max_d + 1];
    n[1] = 1;
    for d in 2..=max_d {
        let mut total: i128 = 0;
        for d1 in 1..d {
            let d2 = d - d1;
            let (a, b) = (d1 as i128, d2 as i128);
            let (di, d1i) = (d as i64, d1 as i64);
            let term = a * a * b * b * choose(3 * di - 4, 3 * d1i - 2) as i128
                - a * a * a * b * choose(3 * di - 4, 3 * d1i - 1) as i128;
            total += (n[d1] * n[d2]) as i128 * term;
        }
        n[d] = total as u128;
    }
    n
}

#[test]
fn plane_counts_match_kontsevich() {
    let oracle = kontsevich(8);
    assert_eq!(&oracle[1..8], &[1, 1, 12, 620, 87304, 26312976, 14616808192]);
    let engine = GwEngine::new();
    let plane = SurfaceModel::new(0).unwrap();
    for (d, &expect) in oracle.iter().enumerate().skip(1) {
        let n = engine.n_beta(&plane, &DivisorClass::new(d as i64, vec![])).unwrap();
        assert_eq!(n, BigInt::from(expect), "d = {d}");
    }
}

/// Plain scan of a box strictly larger than the one the library searches.
fn brute_force_minus_one(k: usize) -> BTreeSet<DivisorClass> {
    let mut out = BTreeSet::new();
    let mut m = vec![-2i64; k];
    for d in -1..=8i64 {
        m.iter_mut().for_each(|x| *x = -2);
        loop {
            let sq: i64 = m.iter().map(|x| x * x).sum();
            let sum: i64 = m.iter().sum();
            if d * d - sq == -1 && 3 * d - sum == 1 {
                out.insert(DivisorClass::new(d, m.clone()));
            }
            let mut p = 0;
            while p < k && m[p] == 5 {
                m[p] = -2;
                p += 1;
            }
            if p == k {
                break;
            }
            m[p] += 1;
        }
    }
    out
}

#[test]
fn minus_one_classes_match_brute_force() {
    let expect_counts = [0, 1, 3, 6, 10, 16, 27, 56, 240];
    for (k, &count) in expect_counts.iter().enumerate() {
        let got = SurfaceModel::new(k).unwrap().minus_one_classes();
        let oracle = brute_force_minus_one(k);
        assert_eq!(got.len(), count, "k = {k}");
        assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), oracle, "k = {k}");
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(got, sorted, "output order at k = {k}");
    }
}

/// The cusp formula on the plane with every input taken from the Kontsevich oracle.
fn plane_cusp(d: i64, n: &[u128]) -> BigRational {
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let choose = |a: i64, b: i64| -> i64 {
        if b < 0 || b > a {
            0
        } else {
            (0..b).fold(1i64, |acc, i| acc * (a - i) / (i + 1))
        }
    };
    let delta = 3 * d - 1;
    let mut total = (r(3, 1) - r(9, 3 * d)) * BigRational::from_integer(BigInt::from(n[d as usize]));
    for d1 in 1..d {
        let d2 = d - d1;
        let weight = BigInt::from(choose(delta - 1, 3 * d1 - 1))
            * BigInt::from(n[d1 as usize])
            * BigInt::from(n[d2 as usize])
            * BigInt::from(d1 * d2);
        total += BigRational::from_integer(weight) * (r(9 * d1 * d2, 6 * d) - r(1, 1));
    }
    total
}

#[test]
fn plane_cusp_counts_match_direct_evaluation() {
    let n = kontsevich(7);
    let engine = GwEngine::new();
    let plane = SurfaceModel::new(0).unwrap();
    let expect = [(2, 0), (3, 24), (4, 2304), (5, 435168)];
    for (d, c) in expect {
        let oracle = plane_cusp(d, &n);
        assert_eq!(oracle, BigRational::from_integer(BigInt::from(c)), "oracle d = {d}");
        let got = engine.c_beta(&plane, &DivisorClass::new(d, vec![])).unwrap();
        assert_eq!(got.value, BigInt::from(c), "engine d = {d}");
    }
    for d in 6..=7 {
        let got = engine.c_beta(&plane, &DivisorClass::new(d, vec![])).unwrap();
        assert_eq!(BigRational::from_integer(got.value), plane_cusp(d, &n), "d = {d}");
    }
}

#[test]
fn quartic_boundary_splits_by_hand() {
    // 1395 + 202.5 + 202.5 + 504 for the splittings (1,3), (3,1), (2,2).
    let engine = GwEngine::new();
    let plane = SurfaceModel::new(0).unwrap();
    let q = DivisorClass::new(4, vec![]);
    let term = |a, b| {
        engine
            .splitting_term(&plane, &q, &DivisorClass::new(a, vec![]), &DivisorClass::new(b, vec![]))
            .unwrap()
    };
    let half = |x: i64| BigRational::new(x.into(), 2.into());
    assert_eq!(term(1, 3), half(405));
    assert_eq!(term(3, 1), half(405));
    assert_eq!(term(2, 2), half(1008));
}

#[test]
fn ordered_boundary_sum_doubles_unordered() {
    let engine = GwEngine::new();
    for text in ["5;", "4;1,1", "5;2,1,1", "6;2,2,1,1"] {
        let (s, beta) = parse_class(text).unwrap();
        let splits = engine.enumerate_splittings(&s, &beta).unwrap();
        let mut ordered = BigRational::from_integer(0.into());
        let mut off_diagonal = BigRational::from_integer(0.into());
        let mut diagonal = BigRational::from_integer(0.into());
        for (a, b) in &splits {
            let t = engine.splitting_term(&s, &beta, a, b).unwrap();
            assert_eq!(t, engine.splitting_term(&s, &beta, b, a).unwrap(), "summand symmetry");
            ordered += &t;
            match a.cmp(b) {
                std::cmp::Ordering::Less => off_diagonal += &t,
                std::cmp::Ordering::Equal => diagonal += &t,
                std::cmp::Ordering::Greater => {}
            }
        }
        assert_eq!(ordered, off_diagonal * BigRational::from_integer(2.into()) + diagonal, "{text}");
        assert_eq!(ordered, engine.boundary_term(&s, &beta).unwrap());
    }
}

#[test]
fn anticanonical_pencil_at_k7() {
    // 12 nodal members in the pencil of cubics through 8 points, now solved
    // by the relations rather than seeded.
    let engine = GwEngine::new();
    let (s, beta) = parse_class("3;1,1,1,1,1,1,1").unwrap();
    assert_eq!(engine.n_beta(&s, &beta).unwrap(), BigInt::from(12));
}

#[test]
fn derivable_seeds_agree_with_relations() {
    let engine = GwEngine::new();
    for k in 2..=4 {
        let s = SurfaceModel::new(k).unwrap();
        let mut m = vec![0; k];
        m[0] = 1;
        let beta = DivisorClass::new(1, m);
        let report = engine.consistency_check(&s, &beta, usize::MAX).unwrap();
        assert!(!report.entries.is_empty(), "k = {k}");
        assert!(report.entries.iter().all(|e| e.implied == BigInt::from(1)));
    }
}
