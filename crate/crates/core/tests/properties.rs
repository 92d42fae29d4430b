use heiscurve::covers::{
    b3, b4, build_fermat_aut, fermat_genus, heisenberg_genus, rh_genus, stabilizer, Family, PointClass,
    RamificationData,
};
use heiscurve::elliptic::{classify_pair, Classification, Curve, Point};
use heiscurve::heisenberg::{enumerate, HeisenbergElement};
use heiscurve::poly::QPoly;
use heiscurve::quadratic::{rational, QuadNum};
use heiscurve::words::{eval_phi, eval_psi, in_ker_phi, in_ker_psi, Endo, Generator, Word};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((any::<bool>(), -4i64..=4), 0..max_len).prop_map(|letters| {
        Word::reduce(
            letters
                .into_iter()
                .map(|(is_a, e)| (if is_a { Generator::A } else { Generator::B }, e)),
        )
    })
}

fn element_strategy() -> impl Strategy<Value = HeisenbergElement> {
    (1u64..=12).prop_flat_map(|n| {
        (0..n as i64, 0..n as i64, 0..n as i64).prop_map(move |(x, y, z)| HeisenbergElement::new(n, x, y, z).unwrap())
    })
}

fn quad_strategy() -> impl Strategy<Value = QuadNum> {
    (-50i64..=50, 1i64..=12, -50i64..=50, 1i64..=12)
        .prop_map(|(a, b, c, d)| QuadNum::new(rational(a, b), rational(c, d), -3))
}

#[test]
fn heisenberg_group_axioms_exhaustive() {
    for n in 2..=8 {
        let all = enumerate(n, 16).unwrap();
        let e = HeisenbergElement::identity(n).unwrap();
        for g in &all {
            assert_eq!(g.mul(&e).unwrap(), *g);
            assert!(g.mul(&g.inverse()).unwrap().is_identity());
            for h in &all {
                let gh = g.mul(h).unwrap();
                assert!(g.commutator(h).unwrap().is_central());
                for k in all.iter().step_by(5) {
                    assert_eq!(gh.mul(k).unwrap(), g.mul(&h.mul(k).unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn abelianization_kernel_is_the_centre() {
    for n in 2..=10 {
        let kernel: Vec<_> = enumerate(n, 16)
            .unwrap()
            .into_iter()
            .filter(|g| g.abelianize() == (0, 0))
            .collect();
        assert_eq!(kernel.len() as u64, n);
        assert!(kernel.iter().all(|g| g.x() == 0 && g.y() == 0));
    }
}

#[test]
fn sigma_j_to_the_n_is_central() {
    for n in (2..=12).step_by(2) {
        let expected = HeisenbergElement::central(n, -(n as i64) / 2).unwrap();
        for j in 0..n as i64 {
            let sigma = HeisenbergElement::new(n, 1, 1, j).unwrap();
            assert_eq!(sigma.pow(n as i64), expected, "n = {n}, j = {j}");
        }
    }
}

#[test]
fn ker_phi_inside_ker_psi_on_many_words() {
    // words built from kernel generators and random conjugators land in ker phi
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    use proptest::strategy::ValueTree;
    let strat = (2u64..=8, word_strategy(12), word_strategy(12), 0usize..3);
    let mut hits = 0;
    for _ in 0..10_000 {
        let (n, u, v, pick) = strat.new_tree(&mut runner).unwrap().current();
        let gens = heiscurve::words::ker_phi_generators(n);
        let w = u.concat(&gens[pick]).concat(&u.inverse()).concat(&v);
        if in_ker_phi(&w, n).unwrap() {
            hits += 1;
            assert!(in_ker_psi(&w, n).unwrap());
        }
    }
    assert!(hits > 0);
}

proptest! {
    #[test]
    fn pow_matches_repeated_multiplication(g in element_strategy(), nu in 0i64..=24) {
        let mut acc = HeisenbergElement::identity(g.modulus()).unwrap();
        for _ in 0..nu {
            acc = acc.mul(&g).unwrap();
        }
        prop_assert_eq!(g.pow(nu), acc);
        prop_assert_eq!(g.pow(-nu), acc.inverse());
    }

    #[test]
    fn order_divides_twice_the_modulus(g in element_strategy()) {
        let d = g.order();
        prop_assert_eq!((2 * g.modulus()) % d, 0);
        prop_assert!(g.pow(d as i64).is_identity());
    }

    #[test]
    fn eval_is_a_homomorphism(u in word_strategy(16), v in word_strategy(16), n in 2u64..=8) {
        let uv = u.concat(&v);
        prop_assert_eq!(eval_phi(&uv, n).unwrap(), eval_phi(&u, n).unwrap().mul(&eval_phi(&v, n).unwrap()).unwrap());
        let (pu, pv, puv) = (eval_psi(&u, n).unwrap(), eval_psi(&v, n).unwrap(), eval_psi(&uv, n).unwrap());
        prop_assert_eq!(puv, ((pu.0 + pv.0) % n, (pu.1 + pv.1) % n));
    }

    #[test]
    fn psi_factors_through_phi(w in word_strategy(20), n in 2u64..=8) {
        prop_assert_eq!(eval_psi(&w, n).unwrap(), eval_phi(&w, n).unwrap().abelianize());
    }

    #[test]
    fn word_inverse_and_associativity(u in word_strategy(10), v in word_strategy(10), w in word_strategy(10)) {
        prop_assert!(u.concat(&u.inverse()).is_identity());
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        let printed = u.to_string();
        prop_assert_eq!(printed.parse::<Word>().unwrap(), u);
    }

    #[test]
    fn endomorphisms_respect_products(u in word_strategy(10), v in word_strategy(10)) {
        for e in [Endo::i1(), Endo::i2(), Endo::i1().compose(&Endo::i2())] {
            prop_assert_eq!(e.apply(&u.concat(&v)), e.apply(&u).concat(&e.apply(&v)));
        }
        // i1 is an involution; i2 squares to conjugation by b
        prop_assert_eq!(Endo::i1().apply(&Endo::i1().apply(&u)), u.clone());
        prop_assert_eq!(Endo::i2().apply(&Endo::i2().apply(&u)), Word::b().conjugate(&u));
    }

    #[test]
    fn field_axioms(x in quad_strategy(), y in quad_strategy(), z in quad_strategy()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
        prop_assert_eq!(x.norm(), (&x * &x.conj()).as_rational().unwrap().clone());
    }

    #[test]
    fn printed_field_elements_parse_back(x in quad_strategy()) {
        prop_assert_eq!(QuadNum::parse(&x.to_string(), -3).unwrap(), x);
    }

    #[test]
    fn square_roots_of_squares(x in quad_strategy()) {
        let r = x.square().sqrt().unwrap();
        prop_assert_eq!(r.square(), x.square());
        prop_assert!(r == x || r == -x.clone());
        prop_assert!(r.is_zero() || r.is_sign_normalized());
    }

    #[test]
    fn cube_roots_of_cubes(x in quad_strategy()) {
        prop_assume!(!x.is_zero());
        let roots = x.pow(3).cube_roots();
        prop_assert_eq!(roots.len(), 3);
        prop_assert!(roots.contains(&x));
        for r in roots {
            prop_assert_eq!(r.pow(3), x.pow(3));
        }
    }

    #[test]
    fn rational_roots_of_split_polynomials(roots in prop::collection::vec((-30i64..=30, 1i64..=9), 1..5)) {
        let mut p = QPoly::new(vec![BigRational::one()]);
        for &(a, b) in &roots {
            p = p.mul(&QPoly::new(vec![rational(-a, b), BigRational::one()]));
        }
        // an irreducible quadratic factor must not contribute roots
        p = p.mul(&QPoly::from_ints(&[2, 0, 1]));
        let mut expected: Vec<BigRational> = roots.iter().map(|&(a, b)| rational(a, b)).collect();
        expected.sort();
        expected.dedup();
        prop_assert_eq!(p.rational_roots(), expected);
    }

    #[test]
    fn classification_preserves_j(a in -20i64..=20, b in -20i64..=20, u in quad_strategy()) {
        prop_assume!(!u.is_zero());
        let Ok(e1) = Curve::from_ints(a, b, -3) else { return Ok(()); };
        let e2 = Curve::new(&u.pow(4) * e1.a(), &u.pow(6) * e1.b()).unwrap();
        match classify_pair(&e1, &e2).unwrap() {
            Classification::IsomorphicOverField { u: found } => {
                prop_assert_eq!(&found.pow(4) * e1.a(), e2.a().clone());
                prop_assert_eq!(&found.pow(6) * e1.b(), e2.b().clone());
                prop_assert_eq!(e1.j_invariant(), e2.j_invariant());
            }
            other => prop_assert!(false, "expected an isomorphism, got {:?}", other),
        }
    }
}

fn full_three_torsion(e: &Curve) -> Vec<Point> {
    let mut pts = vec![Point::Infinity];
    pts.extend(e.three_torsion().unwrap().points);
    pts
}

#[test]
fn group_law_is_associative_on_e3() {
    let e = Curve::fermat_cubic();
    let pts = full_three_torsion(&e);
    assert_eq!(pts.len(), 9);
    for p in &pts {
        for q in &pts {
            let pq = e.add(p, q).unwrap();
            assert!(pts.contains(&pq));
            assert_eq!(pq, e.add(q, p).unwrap());
            for r in &pts {
                assert_eq!(e.add(&pq, r).unwrap(), e.add(p, &e.add(q, r).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn velu_map_kills_exactly_the_kernel() {
    let e = Curve::fermat_cubic();
    let pts = full_three_torsion(&e);
    for kernel in e.three_torsion().unwrap().representatives() {
        let target = e.velu3(&kernel).unwrap();
        let to_zero = pts
            .iter()
            .filter(|q| e.velu3_map(&kernel, q).unwrap().is_infinity())
            .count();
        assert_eq!(to_zero, 3, "kernel {kernel}");
        for p in &pts {
            let fp = e.velu3_map(&kernel, p).unwrap();
            assert!(target.scalar_mul(&fp, 3).unwrap().is_infinity());
            for q in &pts {
                let lhs = e.velu3_map(&kernel, &e.add(p, q).unwrap()).unwrap();
                let rhs = target.add(&fp, &e.velu3_map(&kernel, q).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn velu_map_is_a_homomorphism_off_torsion() {
    // y^2 = x^3 + 9: (0, 3) has order 3 and (-2, 1) has infinite order
    let e = Curve::from_ints(0, 9, -3).unwrap();
    let int = |v| QuadNum::from_int(v, -3);
    let kernel = e.point(int(0), int(3)).unwrap();
    let q = e.point(int(-2), int(1)).unwrap();
    let target = e.velu3(&kernel).unwrap();
    let points: Vec<Point> = (-2..=3)
        .flat_map(|k| [e.scalar_mul(&q, k).unwrap(), e.add(&e.scalar_mul(&q, k).unwrap(), &kernel).unwrap()])
        .collect();
    for a in &points {
        for b in &points {
            let lhs = e.velu3_map(&kernel, &e.add(a, b).unwrap()).unwrap();
            let rhs = target
                .add(&e.velu3_map(&kernel, a).unwrap(), &e.velu3_map(&kernel, b).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
    // translating by the kernel does not change the image
    assert_eq!(
        e.velu3_map(&kernel, &e.add(&q, &kernel).unwrap()).unwrap(),
        e.velu3_map(&kernel, &q).unwrap()
    );
}

#[test]
fn genus_identities() {
    for n in (3..=11).step_by(2) {
        let gf = fermat_genus(n).unwrap();
        let d = RamificationData::new(gf, n, vec![]).unwrap();
        assert_eq!(rh_genus(&d).unwrap(), heisenberg_genus(n).unwrap());
    }
    for n in (2..=12).step_by(2) {
        let (gc, gf) = (heisenberg_genus(n).unwrap() as i64, fermat_genus(n).unwrap() as i64);
        let n = n as i64;
        assert_eq!(2 * gc - 2, n * (2 * gf - 2) + n * n / 2);
        let d = RamificationData::new(gf as u64, n as u64, vec![2; n as usize]).unwrap();
        assert_eq!(rh_genus(&d).unwrap() as i64, gc);
    }
}

#[test]
fn orbit_stabilizer() {
    for n in 1..=8 {
        for family in [Family::P, Family::Q, Family::QPrime] {
            for k in 0..n {
                let r = stabilizer(PointClass::new(family, k, n).unwrap(), n).unwrap();
                assert_eq!(r.stabilizer_order * r.orbit_size, n * n);
            }
        }
    }
}

#[test]
fn bounds_stay_below_one() {
    for n in (4..=400).step_by(2) {
        assert!(b3(n).unwrap() < BigRational::one());
        assert!(b4(n).unwrap() < BigRational::one());
    }
}

#[test]
fn fermat_aut_axioms_for_small_n() {
    for n in 3..=5 {
        let g = build_fermat_aut(n, 16).unwrap();
        assert!(g.axioms_checked());
        assert_eq!(g.elements().count() as u64, 6 * n * n);
    }
}
