use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use glasner_core::cayley::{is_unipotent, unipotent_power_poly};
use glasner_core::intlinalg::{gcd_bound_factorize, image_gcd, smith_normal_form};
use glasner_core::matrix::{determinant, IntMatrix};
use glasner_core::polymat::{check_condition_1_1, condition_killer, freq_map, IntPolyMatrix};
use glasner_core::sampling::random_unipotent;
use glasner_core::torus::{min_torsion_order, torus_dist, torus_dist_exact, witness_is_valid};
use glasner_core::{is_eps_dense, DensityStatus, TorusPoint, TorusPointSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn frac() -> impl Strategy<Value = (i64, i64)> {
    (1i64..60).prop_flat_map(|q| (-3 * q..3 * q, Just(q)))
}

fn point(d: usize) -> impl Strategy<Value = TorusPoint> {
    prop::collection::vec(frac(), d).prop_map(|c| TorusPoint::from_fractions(&c).unwrap())
}

fn int_matrix(r: usize, c: usize, b: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-b..=b, c), r)
        .prop_map(|rows| IntMatrix::from_i64(&rows))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms(u in point(2), v in point(2), w in point(2)) {
        let duv = torus_dist(&u, &v).unwrap();
        prop_assert!((duv - torus_dist(&v, &u).unwrap()).abs() < 1e-12);
        prop_assert!(duv <= 0.5 + 1e-12);
        prop_assert!(duv <= torus_dist(&u, &w).unwrap() + torus_dist(&w, &v).unwrap() + 1e-12);
        prop_assert_eq!(torus_dist_exact(&u, &u).unwrap(), BigRational::zero());
        prop_assert!((torus_dist_exact(&u, &v).unwrap().to_string().parse::<BigRational>().is_ok()));
    }

    #[test]
    fn torsion_order_is_minimal(c in prop::collection::vec(frac(), 1..4)) {
        let x = TorusPoint::from_fractions(&c).unwrap();
        let q = min_torsion_order(&x).unwrap();
        let qi: i64 = q.to_string().parse().unwrap();
        let kills = |n: i64| c.iter().all(|&(a, b)| (n * a) % b == 0);
        prop_assert!(kills(qi));
        prop_assert!((1..qi).all(|n| !kills(n)));
    }

    #[test]
    fn snf_invariants(
        t in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| int_matrix(r, c, 9)),
        w0 in -50i64..50,
        qq in 1i64..5000,
    ) {
        let f = smith_normal_form(&t);
        prop_assert!(f.reconstructs(&t));
        prop_assert!(f.is_unimodular());
        prop_assert!(f.divisor_chain_holds());
        if !t.is_zero() {
            let g = gcd_bound_factorize(&t).unwrap();
            prop_assert!(g.t_is_injective() && g.r_is_surjective());
            prop_assert_eq!(&g.t * &g.r, t.clone());
            let q = BigInt::from(qq);
            let w: Vec<BigInt> = (0..g.rank()).map(|i| BigInt::from(if i == 0 { 1 } else { w0 * (i as i64 + 1) })).collect();
            prop_assert!(image_gcd(&g, &w, &q) <= g.q_bound);
        }
    }

    #[test]
    fn freq_map_is_linear(
        a in int_matrix(2, 2, 5), b in int_matrix(2, 2, 5),
        m in prop::collection::vec(-5i64..=5, 2),
        u in prop::collection::vec(-9i64..=9, 2), v in prop::collection::vec(-9i64..=9, 2),
        s in -4i64..=4,
    ) {
        prop_assume!(m.iter().any(|&x| x != 0));
        let p = IntPolyMatrix::new(vec![IntMatrix::identity(2), a, b]).unwrap();
        let mb: Vec<BigInt> = m.iter().map(|&x| x.into()).collect();
        let f = freq_map(&p, &mb).unwrap();
        let big = |x: &[i64]| x.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        let combo: Vec<i64> = u.iter().zip(&v).map(|(x, y)| x + s * y).collect();
        let lhs = f.apply(&big(&combo));
        let fu = f.apply(&big(&u));
        let fv = f.apply(&big(&v));
        let rhs: Vec<BigInt> = fu.iter().zip(&fv).map(|(x, y)| x + BigInt::from(s) * y).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn condition_matches_brute_force(
        a in int_matrix(2, 2, 3), b in int_matrix(2, 2, 3),
        diff in prop::collection::vec((-6i64..=6, 1i64..6), 2),
    ) {
        let p = IntPolyMatrix::new(vec![IntMatrix::zeros(2, 2), a.clone(), b.clone()]).unwrap();
        let dv: Vec<BigRational> = diff.iter().map(|&(n, d)| rat(n, d)).collect();
        prop_assume!(dv.iter().any(|x| !x.is_zero()));
        let holds = check_condition_1_1(&p, &dv).unwrap();
        let images = [a.to_rational().mul_vec(&dv), b.to_rational().mul_vec(&dv)];
        let kills = |v: &[i64]| images.iter().all(|w| {
            w.iter().zip(v).fold(BigRational::zero(), |acc, (x, &c)| acc + x * BigRational::from_integer(c.into())).is_zero()
        });
        let brute = (-6i64..=6).flat_map(|x| (-6i64..=6).map(move |y| [x, y])).filter(|v| *v != [0, 0]).any(|v| kills(&v));
        prop_assert_eq!(holds, !brute);
        match condition_killer(&p, &dv).unwrap() {
            Some(v) => {
                prop_assert!(!holds);
                let vi: Vec<i64> = v.iter().map(|x| x.to_string().parse().unwrap()).collect();
                prop_assert!(kills(&vi));
            }
            None => prop_assert!(holds),
        }
    }

    #[test]
    fn unipotent_power_polynomial(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unipotent(&mut rng, d, 3);
        prop_assert!(is_unipotent(&u));
        prop_assert_eq!(determinant(&u), BigInt::one());
        let p = unipotent_power_poly(&u).unwrap();
        // (I + N)^{-1} = Σ (−N)^k, finite since N is nilpotent
        let id = IntMatrix::identity(d);
        let minus_n = &id - &u;
        let inv = (1..d as u64).fold(id.clone(), |acc, k| &acc + &minus_n.pow(k));
        prop_assert!((&inv * &u).is_identity());
        for n in -3i64..=6 {
            let expected = if n >= 0 { u.pow(n as u64) } else { inv.pow((-n) as u64) };
            prop_assert_eq!(p.eval_integer(&BigInt::from(n)).unwrap(), expected);
        }
        prop_assert!((&p.eval_integer(&BigInt::from(-1)).unwrap() * &u).is_identity());
    }

    #[test]
    fn density_verdicts_are_sound(pts in prop::collection::vec(point(2), 1..30), eps in 0.05f64..0.45) {
        let y = TorusPointSet::new_dedup(2, pts).unwrap();
        let v = is_eps_dense(&y, eps, 5).unwrap();
        if v.status == DensityStatus::NotDense {
            prop_assert!(witness_is_valid(&y, v.witness.as_ref().unwrap(), eps).unwrap());
        }
        // a dense set stays dense when points are added
        if v.status == DensityStatus::Dense {
            let mut more = y.points().to_vec();
            more.push(TorusPoint::from_fractions(&[(1, 7), (2, 9)]).unwrap());
            prop_assert_eq!(is_eps_dense(&TorusPointSet::new_dedup(2, more).unwrap(), eps, 5).unwrap().status, DensityStatus::Dense);
        }
    }
}
