use binperf::catalog::{self, catalog, length, representation, two_mersenne_shape};
use binperf::factor::{factor_full, factor_over_family, is_irreducible, is_squarefree};
use binperf::search::{self, BaseSet, SearchConfig};
use binperf::sigma::{
    self, sigma, sigma_exponents, sigma_prime_power, sigma_prime_power_factored, ExponentTuple, SMALL_ODD_DOMAIN,
    U1_DOMAIN, U_DOMAIN,
};
use binperf::{FactorMap, Poly};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn catalog_primes() -> Vec<Poly> {
    let mut v = vec![Poly::x(), Poly::x_plus_one()];
    v.extend(catalog().family());
    v
}

#[test]
fn sigma_is_multiplicative_on_coprime_parts() {
    let primes = catalog_primes();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let mut shuffled = primes.clone();
        shuffled.shuffle(&mut rng);
        let part = |ps: &[Poly], rng: &mut ChaCha8Rng| {
            FactorMap::from_pairs(ps.iter().map(|p| (p.clone(), rng.gen_range(1..8)))).product()
        };
        let a = part(&shuffled[..3], &mut rng);
        let b = part(&shuffled[3..6], &mut rng);
        assert_eq!(sigma(&a.mul(&b)).unwrap(), sigma(&a).unwrap().mul(&sigma(&b).unwrap()));
    }
}

#[test]
fn sigma_preserves_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let p = Poly::from_u128(rng.gen::<u64>() as u128 | 1 << rng.gen_range(0..64));
        assert_eq!(sigma(&p).unwrap().degree(), p.degree());
    }
}

#[test]
fn mersenne_exponent_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut qs = catalog_primes();
    while qs.len() < 60 {
        let q = Poly::from_u128(rng.gen::<u32>() as u128 | 1);
        if q.degree().unwrap_or(0) > 0 && is_irreducible(&q).unwrap() {
            qs.push(q);
        }
    }
    for q in &qs {
        for t in 0..=5u32 {
            let e = (1u64 << t) - 1;
            let lhs = sigma_prime_power(q, e).unwrap();
            assert_eq!(lhs, q.add(&Poly::one()).pow(e).unwrap(), "{q} t={t}");
        }
        for e in [0u64, 1, 2, 5, 11, 23, 40, 63, 100] {
            let f = sigma_prime_power_factored(q, e).unwrap();
            assert_eq!(f.expand(), sigma_prime_power(q, e).unwrap(), "{q}^{e}");
            assert_eq!((1u64 << f.t) * f.s, e + 1);
        }
    }
}

#[test]
fn trivial_perfect_family() {
    for n in 1..=6u32 {
        let e = (1u64 << n) - 1;
        let a = Poly::x().pow(e).unwrap().mul(&Poly::x_plus_one().pow(e).unwrap());
        assert!(sigma::is_perfect(&a).unwrap(), "n={n}");
    }
}

#[test]
fn indecomposable_examples() {
    for t in catalog().perfect() {
        assert!(sigma::is_indecomposable_perfect(&t.poly).unwrap(), "{}", t.name);
    }
    // T1 * (trivial perfect over coprime primes) does not exist, but two
    // coprime perfect parts can be glued from T5 and a perfect part over
    // disjoint primes only when such a part exists; a decomposable one is
    // built from the same prime set with the split detected.
    let x = Poly::x();
    assert!(sigma::is_indecomposable_perfect(&x.mul(&Poly::x_plus_one())).unwrap());
}

fn random_tuple(rng: &mut ChaCha8Rng) -> ExponentTuple {
    let mut t = ExponentTuple {
        n: rng.gen_range(0..=4),
        u: *U_DOMAIN.choose(rng).unwrap(),
        m: rng.gen_range(0..=4),
        v: *U_DOMAIN.choose(rng).unwrap(),
        ..Default::default()
    };
    t.ni = [rng.gen_range(0..=4), rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=5), rng.gen_range(0..=5)];
    t.ui[0] = *U1_DOMAIN.choose(rng).unwrap();
    t.ui[1] = *SMALL_ODD_DOMAIN.choose(rng).unwrap();
    t.ui[2] = *SMALL_ODD_DOMAIN.choose(rng).unwrap();
    t.mj[0] = rng.gen_range(0..=3);
    t.vj[0] = *SMALL_ODD_DOMAIN.choose(rng).unwrap();
    for j in 1..8 {
        t.mj[j] = rng.gen_range(0..=1);
    }
    t
}

/// Closed-form exponents against the factorization of the actual sigma.
#[test]
fn sigma_exponents_match_factorization_on_random_tuples() {
    let cat = catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut family = catalog_primes();
    family.sort();
    let mut compared = 0;
    for _ in 0..10_000 {
        let t = random_tuple(&mut rng);
        let s = sigma_exponents(&t).unwrap();
        let mut pairs = vec![(Poly::x(), t.a()), (Poly::x_plus_one(), t.b())];
        for i in 1..=5 {
            pairs.push((cat.mersenne(i).poly.clone(), t.c(i)));
        }
        for j in 1..=8 {
            pairs.push((cat.two_mersenne(j).poly.clone(), t.d(j)));
        }
        let sig = FactorMap::from_pairs(pairs)
            .iter()
            .fold(Poly::one(), |acc, (p, e)| acc.mul(&sigma_prime_power(p, e).unwrap()));
        let mut predicted = vec![(Poly::x(), s.alpha), (Poly::x_plus_one(), s.beta)];
        for i in 1..=5 {
            predicted.push((cat.mersenne(i).poly.clone(), s.gamma[i - 1]));
        }
        for j in 1..=8 {
            predicted.push((cat.two_mersenne(j).poly.clone(), s.delta[j - 1]));
        }
        let predicted = FactorMap::from_pairs(predicted);
        if predicted.product() == sig {
            compared += 1;
            continue;
        }
        // a mismatch only counts when sigma actually factors over F
        if let Some(actual) = factor_over_family(&sig, &family).unwrap() {
            panic!("tuple {t:?}: formulas give {predicted:?}, factorization gives {actual:?}");
        }
    }
    assert_eq!(compared, 10_000);
}

#[test]
fn sigma_of_even_powers_is_odd_and_squarefree() {
    for s in catalog_primes() {
        for h in 1..=10 {
            let p = sigma_prime_power(&s, 2 * h).unwrap();
            assert!(p.is_odd(), "{s} h={h}");
            assert!(is_squarefree(&p).unwrap(), "{s} h={h}");
        }
    }
}

#[test]
fn m1_never_divides_sigma_of_two_mersenne_even_powers() {
    let m1 = catalog().mersenne(1).poly.clone();
    for s in catalog().f2() {
        for h in 1..=20 {
            let p = sigma_prime_power(&s, 2 * h).unwrap();
            assert!(m1.gcd(&p).is_one(), "{s} h={h}");
        }
    }
}

#[test]
fn catalog_lengths() {
    let cat = catalog();
    for m in cat.mersennes() {
        assert_eq!(length(&m.poly).unwrap(), 1, "{}", m.name);
    }
    for s in cat.two_mersennes() {
        // M1^3 and M1^5 do not split, so the iteration runs on past step two
        let expected = if s.name == "S7" || s.name == "S9" { 4 } else { 2 };
        assert_eq!(length(&s.poly).unwrap(), expected, "{}", s.name);
        let shape = two_mersenne_shape(&s.poly).unwrap().expect("1 + x^a (x+1)^b M^c");
        let (a, b, c) = s.two_mersenne_params.unwrap();
        assert_eq!((shape.a, shape.b, shape.c), (a, b, c), "{}", s.name);
        assert_eq!(shape.base, cat.mersenne(1).poly);
    }
    let s1 = &cat.two_mersenne(1).poly;
    assert_eq!(length(&s1.star().unwrap()).unwrap(), 1);
}

#[test]
fn length_is_conjugation_invariant() {
    for e in catalog().entries().iter().filter(|e| e.poly.is_odd()) {
        assert_eq!(length(&e.poly).unwrap(), length(&e.poly.bar()).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 500 {
        let p = Poly::from_u128(rng.gen::<u64>() as u128 >> rng.gen_range(0..60));
        if p.degree().unwrap_or(0) == 0 || !p.is_odd() {
            continue;
        }
        assert_eq!(length(&p).unwrap(), length(&p.bar()).unwrap(), "{p}");
        done += 1;
    }
}

#[test]
fn star_non_membership() {
    let cat = catalog();
    let fam = cat.family();
    let outside: Vec<&str> = cat
        .entries()
        .iter()
        .filter(|e| e.poly.is_odd() && e.name.starts_with(['M', 'S']))
        .filter(|e| !fam.contains(&e.poly.star().unwrap()))
        .map(|e| e.name.as_str())
        .collect();
    assert_eq!(outside, ["M9", "M10", "M11", "S7", "S8", "S11", "S12", "S13"]);
}

#[test]
fn representation_degree_sum_exhaustive() {
    let mut count = 0;
    for bits in 2u128..(1 << 17) {
        let p = Poly::from_u128(bits);
        if !p.is_odd() {
            continue;
        }
        let r = representation(&p).unwrap();
        let sum: u64 = r.pairs.iter().map(|(a, b)| a + b).sum();
        assert_eq!(sum as usize, p.degree().unwrap(), "{p}");
        assert!(r.pairs.iter().all(|&(a, b)| a >= 1 && b >= 1));
        count += 1;
    }
    assert!(count > 10_000);
}

#[test]
fn classify_k2_withholds_params_without_a_mersenne_power() {
    // length 2 with a cofactor that is not a prime power
    let m1 = catalog().mersenne(1).poly.clone();
    let m2 = catalog().mersenne(2).poly.clone();
    let p = Poly::x().mul(&Poly::x_plus_one()).mul(&m1).mul(&m2).add(&Poly::one());
    let c = catalog::classify(&p).unwrap();
    if c.k == 2 {
        assert!(c.two_mersenne.is_none());
    }
}

#[test]
fn table_invariants() {
    let tx = search::sigma_table(&Poly::x(), None);
    let tx1 = search::sigma_table(&Poly::x_plus_one(), None);
    assert_eq!(tx.rows.len(), tx1.rows.len());
    for (a, b) in tx.rows.iter().zip(&tx1.rows) {
        assert_eq!(a.h, b.h);
        assert_eq!(a.factors.product().bar(), b.factors.product());
    }
    for set in [BaseSet::XAndConjugate, BaseSet::F1, BaseSet::F2] {
        for t in search::sigma_factor_tables(set, None) {
            for r in &t.rows {
                assert!(r.factors.iter().all(|(_, e)| e == 1));
                assert_eq!(r.factors.product(), sigma_prime_power(&t.base, 2 * r.h).unwrap());
            }
        }
    }
}

#[test]
fn stage3_candidates_reproduce_their_tuples() {
    let cat = catalog();
    let cands = search::stage3_candidates(SearchConfig::default());
    assert!(!cands.is_empty());
    for c in &cands {
        let f = factor_full(&c.poly).unwrap();
        let t = &c.tuple;
        assert_eq!(f.exponent_of(&Poly::x()), t.a());
        assert_eq!(f.exponent_of(&Poly::x_plus_one()), t.b());
        for i in 1..=5 {
            assert_eq!(f.exponent_of(&cat.mersenne(i).poly), t.c(i));
        }
        for j in 1..=8 {
            assert_eq!(f.exponent_of(&cat.two_mersenne(j).poly), t.d(j));
        }
    }
}

#[test]
fn final_stage_is_catalog_perfect() {
    let cat = catalog();
    let res = search::run_search(search::Stage::Final, SearchConfig::default());
    let search::StageItems::Polys(ps) = &res.items else { panic!("polys expected") };
    for p in ps {
        assert!(sigma::is_perfect(p).unwrap());
        assert!(cat.perfect().iter().any(|t| t.poly == *p || t.poly.bar() == *p));
    }
}

#[test]
fn conjecture_rows_match_m1_table() {
    let cat = catalog();
    let m1 = cat.mersenne(1).poly.clone();
    let scan = search::conjecture_scan(&m1, 7).unwrap();
    let table = search::sigma_table(&m1, None);
    for h in [2u64, 3, 7] {
        let row = scan.rows.iter().find(|r| r.h == h).unwrap();
        let trow = table.rows.iter().find(|r| r.h == h).unwrap();
        assert_eq!(row.factors, trow.factors);
    }
    let w = |h: u64| scan.rows.iter().find(|r| r.h == h).unwrap().witness.clone().unwrap();
    assert_eq!(w(2), cat.two_mersenne(8).poly);
    assert_eq!(w(3), cat.two_mersenne(2).poly);
    assert!(search::conjecture_scan(&Poly::x(), 5).is_err());
    assert!(search::conjecture_scan(&cat.mersenne(4).poly, 2).unwrap().rows[0].witness.is_some());
}

#[test]
fn jobs_do_not_change_results() {
    let a = search::with_jobs(Some(1), || search::run_search(search::Stage::Two, SearchConfig::default())).unwrap();
    let b = search::with_jobs(Some(4), || search::run_search(search::Stage::Two, SearchConfig::default())).unwrap();
    assert_eq!(a.items, b.items);
    assert_eq!(a.filters, b.filters);
}
