use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use species_forge::catalog::{make_e_c, make_graphs, make_l, make_perm, make_pi, make_positive, make_x_c, LabeledPartitions};
use species_forge::ground::{compositions, decompositions, permutations, set_partitions};
use species_forge::species::transport_check;
use species_forge::vector::q;
use species_forge::{parse_species, Bijection, Element, GroundSet, SetSpecies, Species, TensorVector, Vector, Q};

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// B(n+1) = Σ C(n,k) B(k)
fn bell(n: usize) -> u64 {
    let mut b = vec![1u64];
    for m in 0..n {
        b.push((0..=m).map(|k| binom(m as u64, k as u64) * b[k]).sum());
    }
    b[n]
}

// F(n) = Σ_{k≥1} C(n,k) F(n-k)
fn fubini(n: usize) -> u64 {
    let mut f = vec![1u64];
    for m in 1..=n {
        f.push((1..=m).map(|k| binom(m as u64, k as u64) * f[m - k]).sum());
    }
    f[n]
}

#[test]
fn decomposition_counts() {
    for n in 0..=5 {
        let g = GroundSet::range(n);
        assert_eq!(decompositions(&g, 2, false).len(), 1 << n);
        // the empty set has only the composition with no parts, which is not listed
        assert_eq!(compositions(&g).len() as u64 + u64::from(n == 0), fubini(n));
        let by_k: usize = (1..=n).map(|k| decompositions(&g, k, true).len()).sum();
        assert_eq!(by_k, compositions(&g).len());
        assert_eq!(set_partitions(&g).len() as u64, bell(n));
    }
    assert_eq!((0..=4).map(fubini).collect::<Vec<_>>(), vec![1, 1, 3, 13, 75]);
    let three: usize = (1..=3).map(|k| decompositions(&GroundSet::range(3), k, true).len()).sum();
    assert_eq!(three, 13);
    assert_eq!(decompositions(&GroundSet::empty(), 1, false), vec![vec![GroundSet::empty()]]);
    assert!(decompositions(&GroundSet::range(2), 3, true).is_empty());
}

#[test]
fn decompositions_of_two_points_in_order() {
    let g = |v: &[u32]| GroundSet::new(v.iter().copied()).unwrap();
    let want = vec![
        vec![g(&[]), g(&[1, 2])],
        vec![g(&[1]), g(&[2])],
        vec![g(&[2]), g(&[1])],
        vec![g(&[1, 2]), g(&[])],
    ];
    assert_eq!(decompositions(&GroundSet::range(2), 2, false), want);
}

#[test]
fn builtin_species_transport_exhaustively() {
    let mut species: Vec<Species> = [make_e_c(1), make_e_c(2), make_x_c(2), make_pi(), make_perm(), make_l(), make_graphs()]
        .into_iter()
        .map(|e| e.species)
        .collect();
    species.push(parse_species("S(E_C:2)").unwrap().species);
    species.push(parse_species("S(Perm)").unwrap().species);
    for p in &species {
        for n in 0..=4 {
            assert_eq!(transport_check(p.as_ref(), &GroundSet::range(n), None), Ok(()), "{} {n}", p.name());
        }
    }
}

#[test]
fn sampled_transport_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert_eq!(transport_check(make_perm().species.as_ref(), &GroundSet::range(5), Some((200, &mut rng))), Ok(()));
}

/// Labeled partitions whose transport forgets the label of the first block.
struct Forgetful(LabeledPartitions);

impl SetSpecies for Forgetful {
    fn name(&self) -> String {
        "forgetful".into()
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        self.0.elements(ground)
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        let y = self.0.transport(sigma, x);
        if sigma.pairs().all(|(a, b)| a == b) {
            return y;
        }
        let Element::Labeled(mut bs) = y else { unreachable!() };
        if let Some((b, label)) = bs.first_mut() {
            *label = Element::Map(b.labels().iter().map(|&l| (l, 0)).collect());
        }
        Element::Labeled(bs)
    }
}

#[test]
fn broken_transport_is_caught_with_a_bijection() {
    let inner = make_positive(&make_e_c(2)).species;
    let p = Forgetful(LabeledPartitions { inner });
    let w = transport_check(&p, &GroundSet::range(2), None).unwrap_err();
    assert!(w.detail.contains("->"), "{}", w.detail);
}

#[test]
fn tensor_examples() {
    let x = Element::partition([GroundSet::singleton(1)]).unwrap();
    let y = Element::partition([GroundSet::singleton(2)]).unwrap();
    let tx = TensorVector::from_vector(&Vector::basis(x.clone()).scale(&q(2)));
    let ty = TensorVector::from_vector(&Vector::basis(y.clone()).scale(&q(3)));
    let t = tx.tensor(&ty).unwrap();
    assert_eq!(t.coeff(&[x.clone(), y.clone()]), q(6));
    assert_eq!(t.twist(&[1, 0]).unwrap().coeff(&[y.clone(), x.clone()]), q(6));
    let zero = TensorVector::from_vector(&Vector::zero(GroundSet::singleton(1)));
    assert!(zero.tensor(&ty).unwrap().is_zero());
    assert!(tx.tensor(&tx).is_err());
}

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..20, 1i64..7).prop_map(|(a, b)| Q::new(a.into(), b.into()))
}

fn vector() -> impl Strategy<Value = Vector> {
    let basis = set_partitions(&GroundSet::range(3));
    proptest::collection::vec(rational(), basis.len()).prop_map(move |cs| {
        let mut v = Vector::zero(GroundSet::range(3));
        for (b, c) in basis.iter().zip(cs) {
            v.add_term(Element::partition(b.iter().cloned()).unwrap(), c);
        }
        v
    })
}

fn bijection(n: usize) -> impl Strategy<Value = Bijection> {
    let perms = permutations(&(1..=n as u32).collect::<Vec<_>>());
    (0..perms.len()).prop_map(move |i| Bijection::new(GroundSet::range(n), perms[i].clone()).unwrap())
}

proptest! {
    #[test]
    fn vector_space_axioms(u in vector(), v in vector(), w in vector(), a in rational(), b in rational()) {
        prop_assert_eq!(u.add(&v), v.add(&u));
        prop_assert_eq!(u.add(&v).add(&w), u.add(&v.add(&w)));
        prop_assert!(u.sub(&u).is_zero());
        prop_assert_eq!(u.scale(&(a.clone() + b.clone())), u.scale(&a).add(&u.scale(&b)));
        prop_assert_eq!(u.add(&v).scale(&a), u.scale(&a).add(&v.scale(&a)));
        prop_assert_eq!(u.scale(&(a.clone() * b.clone())), u.scale(&b).scale(&a));
        prop_assert_eq!(u.scale(&q(1)), u.clone());
    }

    #[test]
    fn twist_is_invertible(u in vector(), v in vector()) {
        let shift = Bijection::new(GroundSet::range(3), vec![4, 5, 6]).unwrap();
        let mut moved = Vector::zero(GroundSet::new([4, 5, 6]).unwrap());
        for (x, c) in v.terms() {
            moved.add_term(x.relabel(&shift), c.clone());
        }
        let t = TensorVector::from_vector(&u).tensor(&TensorVector::from_vector(&moved)).unwrap();
        prop_assert_eq!(t.twist(&[1, 0]).unwrap().twist(&[1, 0]).unwrap(), t);
    }

    #[test]
    fn transport_is_functorial(s in bijection(5), t in bijection(5), k in 0usize..52) {
        let p = make_pi().species;
        let xs = p.elements(&GroundSet::range(5));
        let x = &xs[k];
        let st = s.compose(&t).unwrap();
        prop_assert_eq!(p.transport(&st, x), p.transport(&s, &p.transport(&t, x)));
    }

    #[test]
    fn union_is_natural(s in bijection(4), split in 0u32..16) {
        let e = make_pi();
        let mu = e.mu.as_ref().unwrap();
        let g = GroundSet::range(4);
        let a = GroundSet::new(g.labels().iter().copied().filter(|l| split >> (l - 1) & 1 == 1)).unwrap();
        let b = g.difference(&a);
        for x in e.species.elements(&a) {
            for y in e.species.elements(&b) {
                let lhs = mu.apply(&a, &b, &x, &y).relabel(&s);
                let rhs = mu.apply(&s.image(&a), &s.image(&b), &x.relabel(&s.restrict(&a)), &y.relabel(&s.restrict(&b)));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn naturality_of_catalog_systems() {
    for spec in ["E_C:2", "Perm", "Pi", "L", "S(X_C:2)"] {
        let e = parse_species(spec).unwrap();
        assert_eq!(e.mu.as_ref().unwrap().check_naturality(3), Ok(()), "{spec}");
        assert_eq!(e.pi.as_ref().unwrap().check_naturality(3), Ok(()), "{spec}");
    }
}

#[test]
fn positive_part_has_no_empty_element() {
    let e = make_positive(&make_pi());
    assert!(e.species.elements(&GroundSet::empty()).is_empty());
    assert_eq!(e.species.elements(&GroundSet::range(2)).len(), 2);
}
