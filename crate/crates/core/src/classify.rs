//! Primitive elements, the free commutative presentation S(Q) → P, the
//! isomorphism E_C → P for linearly self-dual coproducts, and the ∇_X(q)
//! direct sum decomposition.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::catalog::{make_e_c, LabeledPartitions};
use crate::element::Element;
use crate::ground::{decompositions, set_partitions, Bijection, GroundSet};
use crate::hopf::{check_axiom, Axiom, Engine, LinearizedHopf};
use crate::linalg::{echelon, rank, same_span, Coordinates};
use crate::report::{Verdict, Witness};
use crate::species::{ComultSystem, MultSystem, SetSpecies, Species};
use crate::vector::{TensorVector, Vector, Q};

/// A basis of the primitive elements over one ground set.
#[derive(Clone, Debug)]
pub struct PrimitiveSpace {
    pub ground: GroundSet,
    pub basis: Vec<Vector>,
}

impl PrimitiveSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// ∩ ker Δ_{S,T} over decompositions with S and T nonempty; zero over ∅.
pub fn primitives(h: &LinearizedHopf, ground: &GroundSet) -> PrimitiveSpace {
    primitives_with(&Engine::new(h), ground)
}

pub fn primitives_with(e: &Engine, ground: &GroundSet) -> PrimitiveSpace {
    if ground.is_empty() {
        return PrimitiveSpace { ground: ground.clone(), basis: Vec::new() };
    }
    let cols = e.elements(ground);
    let coords = Coordinates::new(cols.iter().cloned());
    // one row per (decomposition, basis tensor) pair
    let mut rows: BTreeMap<(usize, Vec<Element>), Vec<Q>> = BTreeMap::new();
    for (di, d) in decompositions(ground, 2, true).iter().enumerate() {
        for (j, z) in cols.iter().enumerate() {
            for (k, c) in e.coproduct_basis(&d[0], &d[1], z).terms() {
                rows.entry((di, k.clone())).or_insert_with(|| vec![Q::zero(); cols.len()])[j] = c.clone();
            }
        }
    }
    let rows: Vec<Vec<Q>> = rows.into_values().collect();
    let basis = echelon(&rows, cols.len()).kernel().iter().map(|k| coords.vector(ground, k)).collect();
    PrimitiveSpace { ground: ground.clone(), basis }
}

/// The elements of P lying in no proper μ-image.
pub struct PrimitiveBasis {
    pub mu: MultSystem,
}

impl SetSpecies for PrimitiveBasis {
    fn name(&self) -> String {
        format!("P({})", self.mu.species.name())
    }

    fn elements(&self, ground: &GroundSet) -> Vec<Element> {
        if ground.is_empty() {
            return Vec::new();
        }
        let p = &self.mu.species;
        let mut image = HashSet::new();
        for d in decompositions(ground, 2, true) {
            let ys = p.elements(&d[1]);
            for x in p.elements(&d[0]) {
                for y in &ys {
                    image.insert(self.mu.apply(&d[0], &d[1], &x, y));
                }
            }
        }
        p.elements(ground).into_iter().filter(|z| !image.contains(z)).collect()
    }

    fn transport(&self, sigma: &Bijection, x: &Element) -> Element {
        self.mu.species.transport(sigma, x)
    }
}

pub fn primitive_basis(mu: &MultSystem) -> Arc<PrimitiveBasis> {
    Arc::new(PrimitiveBasis { mu: mu.clone() })
}

/// The isomorphism S(Q) → P multiplying block labels, Q the primitive basis.
pub struct FMu {
    pub mu: MultSystem,
    pub q: Species,
    pub source: Species,
}

impl FMu {
    pub fn new(mu: &MultSystem) -> FMu {
        let q: Species = primitive_basis(mu);
        let source: Species = Arc::new(LabeledPartitions { inner: q.clone() });
        FMu { mu: mu.clone(), q, source }
    }

    fn fold<'a>(&self, blocks: impl Iterator<Item = &'a (GroundSet, Element)>) -> Element {
        let mut acc: Option<(GroundSet, Element)> = None;
        for (b, x) in blocks {
            acc = Some(match acc {
                None => (b.clone(), x.clone()),
                Some((g, y)) => (g.union(b), self.mu.apply(&g, b, &y, x)),
            });
        }
        match acc {
            Some((_, x)) => x,
            None => self.mu.species.elements(&GroundSet::empty()).into_iter().next().expect("connected species"),
        }
    }

    /// f(X) = λ1·λ2⋯λk with blocks taken in order of their minima.
    pub fn apply(&self, x: &Element) -> Element {
        let Element::Labeled(bs) = x else { panic!("{x} is not a labeled partition") };
        self.fold(bs.iter())
    }

    /// The same product taken with the blocks in reverse order.
    pub fn apply_reversed(&self, x: &Element) -> Element {
        let Element::Labeled(bs) = x else { panic!("{x} is not a labeled partition") };
        self.fold(bs.iter().rev())
    }

    /// The inverse of f over one ground set, found by enumeration.
    pub fn inverse_table(&self, ground: &GroundSet) -> HashMap<Element, Element> {
        self.source.elements(ground).into_iter().map(|x| (self.apply(&x), x)).collect()
    }

    /// Bijectivity, order independence, the one-block inclusion, and the two
    /// naturality squares, on {1..n} for n ≤ max_n.
    pub fn check(&self, max_n: usize) -> Verdict {
        let p = &self.mu.species;
        for n in 0..=max_n {
            let ground = GroundSet::range(n);
            let src = self.source.elements(&ground);
            let target: HashSet<Element> = p.elements(&ground).into_iter().collect();
            let mut seen: HashMap<Element, Element> = HashMap::new();
            for x in &src {
                let y = self.apply(x);
                if !target.contains(&y) {
                    return Err(Witness::new(format!("f({x}) = {y} is not in the species")).parts([&ground]));
                }
                if let Some(prev) = seen.insert(y.clone(), x.clone()) {
                    return Err(Witness::new(format!("f is not injective: {prev} and {x} both give {y}")).parts([&ground]));
                }
                let r = self.apply_reversed(x);
                if r != y {
                    return Err(Witness::new(format!("block order matters: {y} vs {r}")).parts([&ground]).elements([x]));
                }
            }
            if seen.len() != target.len() {
                let missing = target.iter().find(|z| !seen.contains_key(*z)).unwrap();
                return Err(Witness::new(format!("f is not surjective: {} of {} hit", seen.len(), target.len()))
                    .parts([&ground])
                    .elements([missing]));
            }
            if n > 0 {
                for qx in self.q.elements(&ground) {
                    let one = Element::Labeled(vec![(ground.clone(), qx.clone())]);
                    if self.apply(&one) != qx {
                        return Err(Witness::new("one-block partitions are not sent to their label").elements([&qx]));
                    }
                }
            }
            for sigma in Bijection::all_on(&ground) {
                for x in &src {
                    let a = self.apply(&self.source.transport(&sigma, x));
                    let b = p.transport(&sigma, &self.apply(x));
                    if a != b {
                        return Err(Witness::new(format!("f does not commute with {sigma}")).parts([&ground]).elements([x]));
                    }
                }
            }
            for d in decompositions(&ground, 2, false) {
                let (s, t) = (&d[0], &d[1]);
                let ys = self.source.elements(t);
                for x in self.source.elements(s) {
                    for y in &ys {
                        let u = crate::catalog::disjoint_union(&x, y);
                        let a = self.apply(&u);
                        let b = self.mu.apply(s, t, &self.apply(&x), &self.apply(y));
                        if a != b {
                            return Err(Witness::new(format!("f(X∪Y) = {a} but μ(fX, fY) = {b}")).parts(&d).elements([&x, y]));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The comultiplicative isomorphism (E_C, ρ) → (P, π), C = P[{1}], built as
/// f^μ ∘ S(g) ∘ (f^ν)^{-1} with μ the inverse of π and ν the union of maps.
pub struct FPi {
    pub pi: ComultSystem,
    pub colors: Vec<Element>,
    pub fmu: FMu,
    pub fnu: FMu,
    pub maps: crate::catalog::CatalogEntry,
}

impl FPi {
    /// Requires π coassociative, counital, cocommutative and bijective up to `max_n`.
    pub fn new(pi: &ComultSystem, max_n: usize) -> Result<FPi, Witness> {
        let h = LinearizedHopf::pi_pi(pi);
        for a in [Axiom::Coassociative, Axiom::Counital, Axiom::Cocommutative] {
            check_axiom(&h, a, max_n).map_err(|w| Witness { detail: format!("precondition {a}: {}", w.detail), ..w })?;
        }
        check_bijective(pi, max_n)?;
        let p = pi.species.clone();
        let inv = pi.clone();
        let mu = MultSystem::new(format!("inverse of {}", pi.name), p.clone(), move |s, t, x, y| {
            let mut hits = inv.species.elements(&s.union(t)).into_iter().filter(|z| inv.apply(s, t, z) == (x.clone(), y.clone()));
            let z = hits.next().expect("π is surjective");
            assert!(hits.next().is_none(), "π is injective");
            z
        });
        let colors = p.elements(&GroundSet::singleton(1));
        let maps = make_e_c(colors.len() as u32);
        let fnu = FMu::new(maps.mu.as_ref().unwrap());
        Ok(FPi { pi: pi.clone(), colors, fmu: FMu::new(&mu), fnu, maps })
    }

    /// g: the primitive singleton map {i ↦ j} goes to color j moved onto {i}.
    fn g(&self, block: &GroundSet, label: &Element) -> Element {
        let Element::Map(v) = label else { panic!("{label} is not a map") };
        let (i, j) = v[0];
        let sigma = Bijection::from_pairs([(1, i)]).unwrap();
        debug_assert_eq!(block, &GroundSet::singleton(i));
        self.pi.species.transport(&sigma, &self.colors[j as usize])
    }

    pub fn apply_with(&self, inverse_nu: &HashMap<Element, Element>, h: &Element) -> Element {
        let Element::Labeled(bs) = &inverse_nu[h] else { unreachable!() };
        let relabeled = Element::Labeled(bs.iter().map(|(b, l)| (b.clone(), self.g(b, l))).collect());
        self.fmu.apply(&relabeled)
    }

    pub fn apply(&self, h: &Element) -> Element {
        self.apply_with(&self.fnu.inverse_table(&h.ground()), h)
    }

    pub fn check(&self, max_n: usize) -> Verdict {
        let p = &self.pi.species;
        let rho = self.maps.pi.as_ref().unwrap();
        for n in 0..=max_n {
            let ground = GroundSet::range(n);
            // Q lives on singletons and g is a bijection onto it
            let q = self.fmu.q.elements(&ground);
            if n != 1 && !q.is_empty() {
                return Err(Witness::new("primitive basis of the inverse product is not concentrated on singletons")
                    .parts([&ground])
                    .elements(&q));
            }
            let inv = self.fnu.inverse_table(&ground);
            let maps = self.maps.species.elements(&ground);
            let image: HashMap<Element, Element> = maps.iter().map(|h| (self.apply_with(&inv, h), h.clone())).collect();
            let target: HashSet<Element> = p.elements(&ground).into_iter().collect();
            if image.len() != maps.len() || image.len() != target.len() || image.keys().any(|z| !target.contains(z)) {
                return Err(Witness::new(format!("f is not a bijection: {} maps, {} images, {} targets", maps.len(), image.len(), target.len()))
                    .parts([&ground]));
            }
            if n == 1 {
                for (j, c) in self.colors.iter().enumerate() {
                    let h = Element::Map(vec![(1, j as u32)]);
                    if &self.apply_with(&inv, &h) != c {
                        return Err(Witness::new("normalization f({1 ↦ c}) = c fails").elements([&h, c]));
                    }
                }
            }
            for sigma in Bijection::all_on(&ground) {
                for h in &maps {
                    if self.apply_with(&inv, &h.relabel(&sigma)) != p.transport(&sigma, &self.apply_with(&inv, h)) {
                        return Err(Witness::new(format!("f does not commute with {sigma}")).parts([&ground]).elements([h]));
                    }
                }
            }
            for d in decompositions(&ground, 2, false) {
                let (s, t) = (&d[0], &d[1]);
                for h in &maps {
                    let (a, b) = rho.apply(s, t, h);
                    let lhs = self.pi.apply(s, t, &self.apply_with(&inv, h));
                    let rhs = (self.apply(&a), self.apply(&b));
                    if lhs != rhs {
                        return Err(Witness::new("π∘f differs from (f×f)∘ρ").parts(&d).elements([h]));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Every π_{S,T} is a bijection P[S⊔T] → P[S]×P[T].
pub fn check_bijective(pi: &ComultSystem, max_n: usize) -> Verdict {
    let p = &pi.species;
    for n in 0..=max_n {
        for d in decompositions(&GroundSet::range(n), 2, false) {
            let zs = p.elements(&GroundSet::range(n));
            let images: HashSet<(Element, Element)> = zs.iter().map(|z| pi.apply(&d[0], &d[1], z)).collect();
            let pairs = p.elements(&d[0]).len() * p.elements(&d[1]).len();
            if images.len() != zs.len() || images.len() != pairs {
                return Err(Witness::new(format!(
                    "π is not bijective: {} elements, {} images, {} pairs",
                    zs.len(),
                    images.len(),
                    pairs
                ))
                .parts(&d));
            }
        }
    }
    Ok(())
}

/// Conditions for strong self-duality: the product sends basis pairs to
/// basis elements, and every basis element is a product or is killed by Δ.
pub fn check_redef(h: &LinearizedHopf, max_n: usize) -> Verdict {
    let e = Engine::new(h);
    for n in 0..=max_n {
        for d in decompositions(&GroundSet::range(n), 2, false) {
            let (s, t) = (&d[0], &d[1]);
            let mut image = HashSet::new();
            for x in e.elements(s).iter() {
                for y in e.elements(t).iter() {
                    let v = e.product_basis(s, t, x, y);
                    let mut terms = v.terms();
                    match (terms.next(), terms.next()) {
                        (Some((z, c)), None) if c.is_one() => {
                            image.insert(z.clone());
                        }
                        _ => return Err(Witness::new(format!("product is {v}, not a basis element")).parts(&d).elements([x, y])),
                    }
                }
            }
            for z in e.elements(&GroundSet::range(n)).iter() {
                if !image.contains(z) && !e.coproduct_basis(s, t, z).is_zero() {
                    return Err(Witness::new("basis element neither a product nor primitive for this split").parts(&d).elements([z]));
                }
            }
        }
    }
    Ok(())
}

/// One summand ∇_X(q) of the decomposition.
#[derive(Clone, Debug)]
pub struct Summand {
    pub blocks: Vec<GroundSet>,
    pub span: Vec<Vector>,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandCertificate {
    pub blocks: Vec<String>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct NablaXDecomposition {
    pub ground: GroundSet,
    pub summands: Vec<Summand>,
}

impl NablaXDecomposition {
    pub fn certificate(&self) -> Vec<SummandCertificate> {
        self.summands
            .iter()
            .map(|s| SummandCertificate { blocks: s.blocks.iter().map(|b| b.to_string()).collect(), dim: s.dim })
            .collect()
    }

    pub fn dims_by_type(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut out = BTreeMap::new();
        for s in &self.summands {
            let mut t: Vec<usize> = s.blocks.iter().map(|b| b.len()).collect();
            t.sort_unstable_by(|a, b| b.cmp(a));
            *out.entry(t).or_insert(0) += s.dim;
        }
        out
    }
}

struct Decomposer<'e, 'h> {
    e: &'e Engine<'h>,
    prim: HashMap<GroundSet, Vec<Vector>>,
    spans: HashMap<Vec<GroundSet>, Vec<Vector>>,
}

impl Decomposer<'_, '_> {
    fn prims(&mut self, b: &GroundSet) -> Vec<Vector> {
        if let Some(v) = self.prim.get(b) {
            return v.clone();
        }
        let v = primitives_with(self.e, b).basis;
        self.prim.insert(b.clone(), v.clone());
        v
    }

    /// Spanning vectors of ∇_X(q), multiplying blocks in the given order.
    fn span_ordered(&mut self, blocks: &[GroundSet]) -> Vec<Vector> {
        let mut tensors = vec![TensorVector::zero(Vec::new())];
        let mut first = true;
        for b in blocks {
            let basis = self.prims(b);
            let mut next = Vec::new();
            for t in &tensors {
                for v in &basis {
                    let tv = TensorVector::from_vector(v);
                    next.push(if first { tv } else { t.tensor(&tv).unwrap() });
                }
            }
            tensors = next;
            first = false;
        }
        if blocks.is_empty() {
            return vec![Vector::basis(self.e.unit().expect("connected"))];
        }
        tensors.iter().map(|t| self.e.iterate_nabla(t)).collect()
    }

    fn span(&mut self, blocks: &[GroundSet]) -> Vec<Vector> {
        let mut key = blocks.to_vec();
        key.sort();
        if let Some(v) = self.spans.get(&key) {
            return v.clone();
        }
        let v = self.span_ordered(&key);
        self.spans.insert(key, v.clone());
        v
    }
}

/// Builds ∇_X(q) for every set partition X of `ground` and certifies the
/// direct sum, the inverse isomorphisms ∇_{S,T}/Δ_{S,T} between summands, and
/// the description of ker Δ_{S,T} by partitions with a straddling block.
pub fn nabla_x_decompose(h: &LinearizedHopf, ground: &GroundSet) -> Result<NablaXDecomposition, Witness> {
    let max_n = ground.len();
    check_axiom(h, Axiom::Commutative, max_n).map_err(|w| Witness { detail: format!("precondition: {}", w.detail), ..w })?;
    let e = Engine::new(h);
    let mut dec = Decomposer { e: &e, prim: HashMap::new(), spans: HashMap::new() };
    let dim_p = e.elements(ground).len();

    // p = 1 + q + r
    if !ground.is_empty() {
        let mut gens = dec.prims(ground);
        for d in decompositions(ground, 2, true) {
            for x in e.elements(&d[0]).iter() {
                for y in e.elements(&d[1]).iter() {
                    gens.push(e.product_basis(&d[0], &d[1], x, y));
                }
            }
        }
        if rank(&gens) != dim_p {
            return Err(Witness::new("primitives and products do not span the component").parts([ground]));
        }
    }

    let mut summands = Vec::new();
    let mut all = Vec::new();
    for blocks in set_partitions(ground) {
        let span = dec.span(&blocks);
        let dim = rank(&span);
        let mut reversed = blocks.clone();
        reversed.reverse();
        if !same_span(&span, &dec.span_ordered(&reversed)) {
            return Err(Witness::new("reversing the block order changes ∇_X(q)").parts(&blocks));
        }
        all.extend(span.iter().cloned());
        summands.push(Summand { blocks, span, dim });
    }
    let total: usize = summands.iter().map(|s| s.dim).sum();
    if total != dim_p || rank(&all) != dim_p {
        return Err(Witness::new(format!("summand dimensions add to {total}, union has rank {}, component has dimension {dim_p}", rank(&all)))
            .parts([ground]));
    }

    for d in decompositions(ground, 2, true) {
        let (s, t) = (&d[0], &d[1]);
        // inverse isomorphisms between ∇_X(q)⊗∇_Y(q) and ∇_{X⊔Y}(q)
        for x in set_partitions(s) {
            for y in set_partitions(t) {
                let xy: Vec<GroundSet> = x.iter().chain(&y).cloned().collect();
                let target = dec.span(&xy);
                let (us, ws) = (dec.span(&x), dec.span(&y));
                let mut images = Vec::new();
                for u in &us {
                    for w in &ws {
                        let uw = TensorVector::from_vector(u).tensor(&TensorVector::from_vector(w)).unwrap();
                        let prod = e.nabla(s, t, &uw);
                        if e.delta(s, t, &prod) != uw {
                            return Err(Witness::new("Δ∇ is not the identity on ∇_X(q)⊗∇_Y(q)").parts(&xy));
                        }
                        images.push(prod);
                    }
                }
                if !same_span(&images, &target) {
                    return Err(Witness::new("∇ does not map ∇_X(q)⊗∇_Y(q) onto ∇_{X⊔Y}(q)").parts(&xy));
                }
            }
        }
        // ker Δ_{S,T} is the sum over partitions with a block meeting S and T
        let cols = e.elements(ground);
        let mut rows: BTreeMap<Vec<Element>, Vec<Q>> = BTreeMap::new();
        for (j, z) in cols.iter().enumerate() {
            for (k, c) in e.coproduct_basis(s, t, z).terms() {
                rows.entry(k.clone()).or_insert_with(|| vec![Q::zero(); cols.len()])[j] = c.clone();
            }
        }
        let kernel_dim = cols.len() - echelon(&rows.into_values().collect::<Vec<_>>(), cols.len()).rank();
        let mut straddling = 0;
        for sm in &summands {
            if !sm.blocks.iter().any(|b| !b.is_disjoint(s) && !b.is_disjoint(t)) {
                continue;
            }
            straddling += sm.dim;
            if let Some(v) = sm.span.iter().find(|v| !e.delta(s, t, v).is_zero()) {
                return Err(Witness::new(format!("{v} in a straddling summand is not killed by Δ")).parts(&d));
            }
        }
        if straddling != kernel_dim {
            return Err(Witness::new(format!("straddling summands have dimension {straddling}, kernel {kernel_dim}")).parts(&d));
        }
    }
    Ok(NablaXDecomposition { ground: ground.clone(), summands })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_e_c, make_perm, make_pi};

    fn h_mu(entry: &crate::catalog::CatalogEntry) -> LinearizedHopf {
        LinearizedHopf::mu_mu(entry.mu.as_ref().unwrap())
    }

    #[test]
    fn one_block_partition_is_primitive() {
        let h = h_mu(&make_pi());
        let p = primitives(&h, &GroundSet::range(2));
        assert_eq!(p.dim(), 1);
        assert_eq!(p.basis[0], Vector::basis(Element::partition([GroundSet::range(2)]).unwrap()));
    }

    #[test]
    fn three_cycles_are_the_primitive_basis() {
        let q = primitive_basis(make_perm().mu.as_ref().unwrap());
        let got = q.elements(&GroundSet::range(3));
        assert_eq!(got.len(), 2);
        assert!(got.iter().all(|x| x.cycles().unwrap().len() == 1));
    }

    #[test]
    fn fmu_on_small_cases() {
        for e in [make_pi(), make_perm(), make_e_c(2)] {
            assert_eq!(FMu::new(e.mu.as_ref().unwrap()).check(3), Ok(()), "{}", e.name);
        }
    }

    #[test]
    fn fpi_for_maps_is_identity() {
        let e = make_e_c(2);
        let f = FPi::new(e.pi.as_ref().unwrap(), 3).unwrap();
        assert_eq!(f.check(3), Ok(()));
        for h in e.species.elements(&GroundSet::range(3)) {
            assert_eq!(f.apply(&h), h);
        }
    }

    #[test]
    fn decomposition_for_partitions_of_two() {
        let d = nabla_x_decompose(&h_mu(&make_pi()), &GroundSet::range(2)).unwrap();
        assert_eq!(d.summands.len(), 2);
        assert!(d.summands.iter().all(|s| s.dim == 1));
    }
}
