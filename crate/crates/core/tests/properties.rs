//! Randomized invariants of the exact layer, the orbit machinery, the
//! relation matrix, schedules and the relation probe.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use mahler::automata::{kernel_system_with_order, scalar_equation_search, unroll_series, Dfao};
use mahler::exact::ball::RealBall;
use mahler::exact::matrix::Matrix;
use mahler::exact::poly::{vars, MultiPolynomial};
use mahler::exact::ratfun::RationalFunction;
use mahler::exact::series::TruncatedSeries;
use mahler::exact::upoly::{RealAlgebraic, UPoly};
use mahler::exact::{int, max_norm, rat, Rational};
use mahler::lattice::{hnf, IVec};
use mahler::probe::{integer_relation, RelationSearch};
use mahler::purity::{monomial_basis, relation_matrix, relation_matrix_rf, schedule_from_radii};
use mahler::relations::{check_t_independence, exponent_lattice, orbit_relation_holds, power_product, TIndependence};
use mahler::system::eval::evaluate_at_depth;
use mahler::system::load::load_system;
use mahler::transform::{check_class_m, check_limit_zero, LimitZero, MonomialTransform};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=40).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |q| !q.is_zero())
}

/// Points with every coordinate in (0, 1).
fn unit_point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..=9, 2i64..=12).prop_filter("below one", |(a, b)| a < b).prop_map(|(a, b)| rat(a, b)), n)
}

fn transform(n: usize, hi: u64) -> impl Strategy<Value = MonomialTransform> {
    prop::collection::vec(prop::collection::vec(0..=hi, n), n).prop_map(|rows| MonomialTransform::from_u64(&rows).unwrap())
}

fn ivec(xs: &[i64]) -> IVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn upoly(vs: &mahler::exact::poly::Vars, coeffs: &[i64]) -> MultiPolynomial {
    MultiPolynomial::univariate(vs, &coeffs.iter().map(|&c| int(c)).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn normalization_is_idempotent(a in prop::collection::vec(-3i64..=3, 1..4), b in prop::collection::vec(-3i64..=3, 1..4), c in prop::collection::vec(-3i64..=3, 1..3)) {
        let v = vars(&["z"]);
        let common = upoly(&v, &c);
        let den = &upoly(&v, &b) * &common;
        prop_assume!(!den.is_zero());
        let r = RationalFunction::new(&upoly(&v, &a) * &common, den).unwrap();
        let again = RationalFunction::new(r.num().clone(), r.den().clone()).unwrap();
        prop_assert_eq!(&again, &r);
        prop_assert!(r.num().gcd(r.den()).is_constant());
    }

    #[test]
    fn ball_operations_enclose(a in small_rational(), b in nonzero_rational(), e in 0u64..6, prec in 16u32..200) {
        let x = RealBall::from_rational(&a, prec);
        let y = RealBall::from_rational(&b, prec);
        prop_assert!(x.add(&y, prec).contains_rational(&(&a + &b)));
        prop_assert!(x.sub(&y, prec).contains_rational(&(&a - &b)));
        prop_assert!(x.mul(&y, prec).contains_rational(&(&a * &b)));
        prop_assert!(x.div(&y, prec).unwrap().contains_rational(&(&a / &b)));
        prop_assert!(x.pow(e, prec).contains_rational(&mahler::exact::rat_pow(&a, &BigInt::from(e))));
        let sq = y.mul(&y, prec).sqrt(prec).unwrap();
        prop_assert!(sq.contains_rational(&b.abs()));
    }

    #[test]
    fn root_isolation_is_complete(roots in prop::collection::vec(-6i64..=6, 1..6)) {
        let mut p = UPoly::one();
        for r in &roots {
            p = p.mul(&UPoly::from_ints(&[-r, 1]));
        }
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let found = p.isolate_real_roots();
        prop_assert_eq!(found.len(), distinct.len());
        let sf = p.squarefree_part();
        for iv in &found {
            let inside = distinct.iter().filter(|&&r| iv.contains(&int(r))).count();
            prop_assert_eq!(inside, 1);
            if iv.lo != iv.hi {
                prop_assert!(sf.sign_at(&iv.lo) * sf.sign_at(&iv.hi) < 0);
            }
        }
    }

    #[test]
    fn transform_power_is_iterated_action(t in transform(2, 3), alpha in unit_point(2), k in 0u64..=6) {
        let direct = t.power(k).apply(&alpha).unwrap();
        let mut p = alpha.clone();
        for _ in 0..k {
            p = t.apply(&p).unwrap();
        }
        prop_assert_eq!(direct, p);
    }

    #[test]
    fn monomial_action_is_transposed(t in transform(3, 2), alpha in unit_point(3), mu in prop::collection::vec(-3i64..=3, 3)) {
        let mu = ivec(&mu);
        let rows = t.rows();
        let mu_t: IVec = (0..3).map(|j| (0..3).map(|i| &mu[i] * &rows[i][j]).sum()).collect();
        prop_assert_eq!(power_product(&alpha, &mu_t), power_product(&t.apply(&alpha).unwrap(), &mu));
    }

    #[test]
    fn class_m_ignores_relabeling(t in transform(3, 2), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let w = rat(1, 1 << 20);
        let a = check_class_m(&t, &w);
        let b = check_class_m(&t.permuted(&perm), &w);
        prop_assert_eq!(a.in_class_m, b.in_class_m);
        prop_assert_eq!(a.failed, b.failed);
    }

    #[test]
    fn limit_zero_certificates_reverify(t in transform(2, 3), alpha in unit_point(2)) {
        prop_assume!(t.is_nonsingular());
        if let LimitZero::Certificate(c) = check_limit_zero(&t, &alpha, 16).unwrap() {
            prop_assert!(c.verify(&t, &alpha).unwrap());
            let p = t.power(c.k0).apply(&alpha).unwrap();
            prop_assert!(max_norm(&p) < int(1));
        }
    }

    #[test]
    fn lattice_matches_brute_force(exps in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 3), signs in prop::collection::vec(any::<bool>(), 3)) {
        let primes = [2i64, 3, 5, 7];
        let alpha: Vec<Rational> = exps.iter().zip(&signs).map(|(e, &neg)| {
            let mut x = int(1);
            for (p, k) in primes.iter().zip(e) {
                x *= mahler::exact::rat_pow(&int(*p), &BigInt::from(*k));
            }
            if neg { -x } else { x }
        }).collect();
        let lat = exponent_lattice(&alpha).unwrap();
        for b in &lat.basis {
            prop_assert!(power_product(&alpha, b).is_one());
        }
        let base = hnf(&lat.basis);
        let mut found = false;
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let nu = ivec(&[a, b, c]);
                    if power_product(&alpha, &nu).is_one() {
                        found = true;
                        let mut with = lat.basis.clone();
                        with.push(nu);
                        prop_assert_eq!(hnf(&with), base.clone());
                    }
                }
            }
        }
        prop_assert!(!found || !lat.is_trivial());
        // a lattice with a short vector must be seen by the search
        let short = lat.basis.iter().any(|v| v.iter().all(|x| x.abs() <= BigInt::from(4)));
        prop_assert!(!short || found);
    }

    #[test]
    fn dependence_witnesses_persist(t in transform(2, 2), num in prop::collection::vec(1i64..=3, 2), den in 2i64..=4) {
        let alpha: Vec<Rational> = num.iter().map(|&n| rat(1, den.pow(n as u32))).collect();
        prop_assume!(t.is_nonsingular());
        if let TIndependence::Dependent { mu, a, b } = check_t_independence(&t, &alpha, 6).unwrap() {
            let mu: IVec = mu.iter().map(|s| s.parse().unwrap()).collect();
            for d in 0..=50u64 {
                prop_assert!(orbit_relation_holds(&t, &alpha, &mu, a + d * b).unwrap());
            }
        }
    }
}

fn block_diagonal(blocks: &[usize], entries: &[i64]) -> Matrix<Rational> {
    let mut it = entries.iter().cycle();
    let ms: Vec<Matrix<Rational>> = blocks.iter().map(|&m| Matrix::from_fn(m, m, |_, _| int(*it.next().unwrap()))).collect();
    Matrix::direct_sum(&ms)
}

fn block_shape() -> impl Strategy<Value = (Vec<usize>, Vec<u32>)> {
    prop::collection::vec((1usize..=3, 0u32..=3), 1..=2).prop_map(|v| v.into_iter().unzip())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn relation_matrix_is_multiplicative((blocks, degrees) in block_shape(), e1 in prop::collection::vec(-3i64..=3, 18), e2 in prop::collection::vec(-3i64..=3, 18)) {
        let idx = monomial_basis(&blocks, &degrees).unwrap();
        let b1 = block_diagonal(&blocks, &e1);
        let b2 = block_diagonal(&blocks, &e2);
        let lhs = relation_matrix(&b1.mul(&b2).unwrap(), &idx).unwrap();
        let rhs = relation_matrix(&b1, &idx).unwrap().mul(&relation_matrix(&b2, &idx).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn relation_matrix_respects_inverses((blocks, degrees) in block_shape(), e in prop::collection::vec(-3i64..=3, 18)) {
        let idx = monomial_basis(&blocks, &degrees).unwrap();
        let b = block_diagonal(&blocks, &e);
        prop_assume!(!b.det().unwrap().is_zero());
        let inv = b.inverse().unwrap();
        let r = relation_matrix(&b, &idx).unwrap().mul(&relation_matrix(&inv, &idx).unwrap()).unwrap();
        prop_assert!(r.is_identity());
    }

    #[test]
    fn schedule_stays_near_the_ray(r1 in 2i64..=9, r2 in 2i64..=9, l in 1u64..=400) {
        let rhos = [RealAlgebraic::from_rational(int(r1)), RealAlgebraic::from_rational(int(r2))];
        let s = schedule_from_radii(&rhos, l, None).unwrap();
        prop_assert!(s.verified);
        prop_assert_eq!(s.entries.len() as u64, l + 1);
        for (i, k) in s.entries.iter().enumerate() {
            for (j, &kj) in k.iter().enumerate() {
                let theta = 1.0 / (rhos[j].approx_f64()).ln();
                prop_assert!((kj as f64 - i as f64 * theta).abs() <= 1.0 + 1e-9);
            }
        }
        for w in s.entries.windows(2) {
            prop_assert!(w[0].iter().zip(&w[1]).all(|(a, b)| a <= b));
        }
    }
}

#[test]
fn relation_matrix_degree_bound() {
    // symbolic entries: every entry of R(B) has degree at most d_i in the
    // entries of block i
    let names: Vec<String> = (0..13).map(|i| format!("b{i}")).collect();
    let v = vars(&names);
    for (blocks, degrees) in [(vec![2usize, 1], vec![2u32, 3]), (vec![3], vec![2]), (vec![1, 2], vec![1, 1])] {
        let mut next = 0;
        let ms: Vec<Matrix<RationalFunction>> = blocks
            .iter()
            .map(|&m| {
                Matrix::from_fn(m, m, |_, _| {
                    next += 1;
                    RationalFunction::var(&v, next)
                })
            })
            .collect();
        let b = Matrix::direct_sum(&ms);
        let idx = monomial_basis(&blocks, &degrees).unwrap();
        let r = relation_matrix_rf(&b, &idx).unwrap();
        let mut ranges = Vec::new();
        let mut start = 1;
        for &m in &blocks {
            ranges.push(start..start + m * m);
            start += m * m;
        }
        for e in r.iter() {
            assert!(e.is_polynomial());
            for (mono, _) in e.num().terms() {
                for (range, &d) in ranges.iter().zip(&degrees) {
                    let deg: u32 = mono.0[range.clone()].iter().sum();
                    assert!(deg <= d, "{e}");
                }
            }
        }
    }
}

fn thue_morse_system() -> mahler::system::MahlerSystem {
    load_system(r#"{"vars":["z"],"transform":{"size":1,"rows":[[2]]},"matrix":[["1","0"],["z/(1-z^2)","1-z"]]}"#).unwrap().system
}

#[test]
fn relation_matrix_follows_the_cocycle() {
    let s = thue_morse_system();
    let idx = monomial_basis(&[2], &[2]).unwrap();
    let r = |m: &Matrix<RationalFunction>| relation_matrix_rf(m, &idx).unwrap();
    for k1 in 0..=2 {
        for k2 in 0..=2 {
            let lhs = r(&s.iterate(k1 + k2).unwrap());
            let rhs = r(&s.iterate(k1).unwrap()).mul(&r(&s.substitute(&s.iterate(k2).unwrap(), k1).unwrap())).unwrap();
            let rhs = rhs.try_map(|x| x.embed(s.vars())).unwrap();
            assert_eq!(lhs, rhs, "k1={k1} k2={k2}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn evaluation_is_depth_independent(n in 1i64..=4, d in 3i64..=9) {
        prop_assume!(2 * n < d);
        let s = thue_morse_system();
        let v = vars(&["z"]);
        let tm: Vec<Rational> = (0..64u32).map(|k| int((k.count_ones() % 2) as i64)).collect();
        let one: Vec<Rational> = (0..64).map(|k| int((k == 0) as i64)).collect();
        let series = vec![
            TruncatedSeries::univariate(&v, &one, Some(int(1))).unwrap(),
            TruncatedSeries::univariate(&v, &tm, Some(int(1))).unwrap(),
        ];
        let alpha = [rat(n, d)];
        let balls: Vec<RealBall> = (0..=8).map(|k| evaluate_at_depth(&s, &alpha, &series, k, 96).unwrap()[1].clone()).collect();
        for a in &balls {
            for b in &balls {
                prop_assert!(a.overlaps(b));
            }
        }
    }

    #[test]
    fn random_automata_are_sound(q in 2usize..=3, n in 1usize..=4, seed in prop::collection::vec(0usize..12, 16), outs in prop::collection::vec(0i64..=2, 4)) {
        let delta: Vec<Vec<usize>> = (0..n).map(|s| (0..q).map(|r| seed[(s * q + r) % seed.len()] % n).collect()).collect();
        let output: Vec<Rational> = (0..n).map(|s| int(outs[s])).collect();
        let d = Dfao::new(q, 0, delta, output).unwrap();
        let k = kernel_system_with_order(&d, 128).unwrap();
        let classes = d.equivalence_classes().into_iter().flatten().collect::<std::collections::BTreeSet<_>>().len();
        prop_assert!(k.system.size() <= classes + 1);
        let unrolled = unroll_series(&k.system, &k.initial_values, 128).unwrap();
        let main = k.main_component;
        let terms = d.terms_from(0, 128);
        match main {
            Some(c) => prop_assert_eq!(&unrolled[c], &terms),
            // the initial state is supported at n = 0 and folded into `one`
            None => prop_assert!(terms[1..].iter().all(Zero::is_zero)),
        }
    }

    #[test]
    fn found_scalar_equations_check_out(q in 2u64..=3, seed in prop::collection::vec(0usize..12, 9), outs in prop::collection::vec(0i64..=1, 3)) {
        let n_states = 3;
        let delta: Vec<Vec<usize>> = (0..n_states).map(|s| (0..q as usize).map(|r| seed[(s * 3 + r) % seed.len()] % n_states).collect()).collect();
        let d = Dfao::new(q as usize, 0, delta, outs.iter().map(|&o| int(o)).collect()).unwrap();
        let big_n = 40;
        let terms = d.terms_from(0, 2 * big_n);
        let z = vars(&["z"]);
        let series = TruncatedSeries::univariate(&z, &terms, None).unwrap();
        if let Some(eq) = scalar_equation_search(&series, q, 2, 2, big_n).unwrap() {
            // independent substitution: sum_i c_i(z) f(z^{q^i}) below 2N
            let mut acc = vec![int(0); 2 * big_n];
            let mut step = 1usize;
            for c in &eq.to_json().coeffs {
                let c = mahler::exact::parse::parse_polynomial(c, &z).unwrap();
                for (m, cm) in c.terms() {
                    let shift = m.0[0] as usize;
                    for (j, t) in terms.iter().enumerate() {
                        let e = shift + j * step;
                        if e < 2 * big_n {
                            acc[e] += cm * t;
                        }
                    }
                }
                step *= q as usize;
            }
            prop_assert!(acc.iter().all(Zero::is_zero));
        }
    }
}

fn ball_eval(p: &MultiPolynomial, xs: &[RealBall], prec: u32) -> RealBall {
    let mut acc = RealBall::zero();
    for (m, c) in p.terms() {
        let mut t = RealBall::from_rational(c, prec);
        for (x, &e) in xs.iter().zip(&m.0) {
            t = t.mul(&x.pow(e as u64, prec), prec);
        }
        acc = acc.add(&t, prec);
    }
    acc
}

fn sqrt_ball(n: i64, prec: u32) -> RealBall {
    RealBall::from_int(n).sqrt(prec).unwrap()
}

fn candidate_poly(r: &RelationSearch, n: usize) -> Option<MultiPolynomial> {
    let names = mahler::probe::value_names(n);
    r.polynomial().map(|s| mahler::exact::parse::parse_polynomial(s, &vars(&names)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn planted_relations_are_recovered_and_sound(n in 2i64..=30, a in -5i64..=5, b in 1i64..=5) {
        prop_assume!((1..=6).all(|k| k * k != n));
        let h = BigInt::from(1000);
        let prec = 1200;
        // x = sqrt(n), y = (a - x) / b  so  x + b y - a = 0
        let x = sqrt_ball(n, prec);
        let y = RealBall::from_int(a).sub(&x, prec).div(&RealBall::from_int(b), prec).unwrap();
        let r = integer_relation(&[x, y], 1, &h).unwrap();
        let p = candidate_poly(&r, 2);
        prop_assert!(p.is_some(), "no relation for n={} a={} b={}", n, a, b);
        let p = p.unwrap();
        // soundness at twice the precision
        let x2 = sqrt_ball(n, 2 * prec);
        let y2 = RealBall::from_int(a).sub(&x2, 2 * prec).div(&RealBall::from_int(b), 2 * prec).unwrap();
        prop_assert!(ball_eval(&p, &[x2, y2], 2 * prec).contains_zero());
        let r2 = integer_relation(&[sqrt_ball(n, prec)], 2, &h).unwrap();
        let want = format!("x^2 - {n}");
        prop_assert_eq!(r2.polynomial(), Some(want.as_str()));
    }

    #[test]
    fn no_relation_is_never_a_proof(p in 2i64..=40, q in 2i64..=40) {
        prop_assume!(p != q);
        let prec = 1400;
        let vals = [RealBall::from_int(p).ln(prec).unwrap(), RealBall::from_int(q).ln(prec).unwrap().mul(&RealBall::from_int(p).sqrt(prec).unwrap(), prec)];
        let h = BigInt::from(1_000_000);
        let r = integer_relation(&vals, 2, &h).unwrap();
        let again = integer_relation(&vals, 2, &h).unwrap();
        prop_assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
        let text = serde_json::to_string(&r).unwrap().to_lowercase();
        prop_assert!(!text.contains("independent") && !text.contains("proved") && !text.contains("transcendental"));
        if let Some(poly) = candidate_poly(&r, 2) {
            prop_assert!(ball_eval(&poly, &vals, prec).contains_zero());
        }
    }
}

#[test]
fn dependent_corpus_witnesses_hold_for_fifty_steps() {
    let t = MonomialTransform::scalar(2, 2);
    let alpha = [rat(1, 2), rat(1, 2)];
    match check_t_independence(&t, &alpha, 16).unwrap() {
        TIndependence::Dependent { mu, a, b } => {
            let mu: IVec = mu.iter().map(|s| s.parse().unwrap()).collect();
            assert!((0..=50).all(|d| orbit_relation_holds(&t, &alpha, &mu, a + d * b).unwrap()));
            assert_eq!(mu, ivec(&[1, -1]));
        }
        other => panic!("expected a dependence, got {other:?}"),
    }
}
