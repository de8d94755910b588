//! The partial order generated by λ = μ∘π(λ′), its lower-interval lattices,
//! reconstruction of π from (μ, ≺), and the p/q bases.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::classify::FMu;
use crate::element::Element;
use crate::ground::{compositions, decompositions, set_partitions, Bijection, GroundSet};
use crate::hopf::{Engine, LinearizedHopf};
use crate::linalg::Coordinates;
use crate::report::{Verdict, Witness};
use crate::species::{ComultSystem, MultSystem, Species};
use crate::vector::{TensorVector, Vector, Q};

/// The strict order on one component, as a boolean matrix over its basis.
#[derive(Clone, Debug)]
pub struct OrderSlice {
    ground: GroundSet,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    less: Vec<Vec<bool>>,
}

impl OrderSlice {
    fn new(ground: GroundSet, elements: Vec<Element>, less: Vec<Vec<bool>>) -> Self {
        let index = elements.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        OrderSlice { ground, elements, index, less }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    fn idx(&self, x: &Element) -> usize {
        *self.index.get(x).unwrap_or_else(|| panic!("{x} is not over {}", self.ground))
    }

    pub fn lt(&self, a: &Element, b: &Element) -> bool {
        self.less[self.idx(a)][self.idx(b)]
    }

    pub fn le(&self, a: &Element, b: &Element) -> bool {
        a == b || self.lt(a, b)
    }

    /// All pairs (a, b) with a ≺ b.
    pub fn pairs(&self) -> Vec<(Element, Element)> {
        let n = self.elements.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| self.less[i][j]).map(move |j| (i, j)))
            .map(|(i, j)| (self.elements[i].clone(), self.elements[j].clone()))
            .collect()
    }

    /// {λ′ ⪯ λ}
    pub fn lower(&self, x: &Element) -> Vec<Element> {
        let j = self.idx(x);
        self.elements.iter().enumerate().filter(|&(i, _)| i == j || self.less[i][j]).map(|(_, y)| y.clone()).collect()
    }

    /// {λ′ ⪰ λ}
    pub fn upper(&self, x: &Element) -> Vec<Element> {
        let i = self.idx(x);
        self.elements.iter().enumerate().filter(|&(j, _)| i == j || self.less[i][j]).map(|(_, y)| y.clone()).collect()
    }

    /// Covering pairs: a ≺ b with nothing strictly between.
    pub fn covers(&self) -> Vec<(Element, Element)> {
        let n = self.elements.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.less[i][j] && !(0..n).any(|k| self.less[i][k] && self.less[k][j]) {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    pub fn to_dot(&self, species: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}_{}\" {{", species, self.ground.len());
        for x in &self.elements {
            let _ = writeln!(s, "  \"{x}\";");
        }
        for (a, b) in self.covers() {
            let _ = writeln!(s, "  \"{a}\" -> \"{b}\";");
        }
        s.push_str("}\n");
        s
    }

    /// Irreflexive, antisymmetric and transitive.
    pub fn check_partial_order(&self) -> Verdict {
        let n = self.elements.len();
        let e = &self.elements;
        for i in 0..n {
            if self.less[i][i] {
                return Err(Witness::new("not irreflexive").parts([&self.ground]).elements([&e[i]]));
            }
            for j in 0..n {
                if self.less[i][j] && self.less[j][i] {
                    return Err(Witness::new("not antisymmetric").parts([&self.ground]).elements([&e[i], &e[j]]));
                }
                for k in 0..n {
                    if self.less[i][j] && self.less[j][k] && !self.less[i][k] {
                        return Err(Witness::new("not transitive").parts([&self.ground]).elements([&e[i], &e[j], &e[k]]));
                    }
                }
            }
        }
        Ok(())
    }
}

fn closure(mut m: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    let n = m.len();
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                let via = m[k].clone();
                for (cell, &reach) in m[i].iter_mut().zip(&via) {
                    *cell |= reach;
                }
            }
        }
    }
    m
}

/// ≺ on P[I] from the k-fold formula, checked against the transitive closure
/// of the two-part relation and against the partial order axioms.
pub fn compute_order(mu: &MultSystem, pi: &ComultSystem, ground: &GroundSet) -> Result<OrderSlice, Witness> {
    let elements = mu.species.elements(ground);
    let index: HashMap<&Element, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let n = elements.len();
    let mut kfold = vec![vec![false; n]; n];
    let mut two = vec![vec![false; n]; n];
    for (j, y) in elements.iter().enumerate() {
        for parts in compositions(ground) {
            let x = mu.apply_iter(&parts, &pi.apply_iter(&parts, y));
            let i = *index.get(&x).ok_or_else(|| Witness::new(format!("μ∘π({y}) = {x} is not in the species")).parts(&parts))?;
            if i != j {
                kfold[i][j] = true;
                if parts.len() == 2 {
                    two[i][j] = true;
                }
            }
        }
    }
    let two = closure(two);
    for i in 0..n {
        for j in 0..n {
            if kfold[i][j] != two[i][j] {
                let which = if kfold[i][j] { "k-fold only" } else { "closure only" };
                return Err(Witness::new(format!("k-fold relation differs from the closure of the two-part relation ({which})"))
                    .parts([ground])
                    .elements([&elements[i], &elements[j]]));
            }
        }
    }
    let slice = OrderSlice::new(ground.clone(), elements, kfold);
    slice.check_partial_order()?;
    Ok(slice)
}

/// ≺ on every {1..n}, n ≤ max_n; other ground sets are answered by
/// transporting along the order-preserving bijection onto {1..|I|}.
#[derive(Clone)]
pub struct SpeciesOrder {
    pub species: Species,
    slices: Vec<OrderSlice>,
}

impl SpeciesOrder {
    pub fn new(mu: &MultSystem, pi: &ComultSystem, max_n: usize) -> Result<Self, Witness> {
        let slices = (0..=max_n).map(|n| compute_order(mu, pi, &GroundSet::range(n))).collect::<Result<_, _>>()?;
        Ok(SpeciesOrder { species: mu.species.clone(), slices })
    }

    /// Builds an order from explicit slices over {1..n}, n = 0, 1, ...
    pub fn from_slices(species: Species, slices: Vec<OrderSlice>) -> Self {
        SpeciesOrder { species, slices }
    }

    pub fn max_n(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn slice(&self, n: usize) -> &OrderSlice {
        &self.slices[n]
    }

    fn canonical(&self, ground: &GroundSet) -> Bijection {
        Bijection::order_preserving(ground, &GroundSet::range(ground.len())).expect("same size")
    }

    pub fn lt(&self, a: &Element, b: &Element) -> bool {
        let g = a.ground();
        let sigma = self.canonical(&g);
        self.slices[g.len()].lt(&self.species.transport(&sigma, a), &self.species.transport(&sigma, b))
    }

    pub fn le(&self, a: &Element, b: &Element) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn lower(&self, x: &Element) -> Vec<Element> {
        self.along(x, |s, y| s.lower(y))
    }

    pub fn upper(&self, x: &Element) -> Vec<Element> {
        self.along(x, |s, y| s.upper(y))
    }

    fn along(&self, x: &Element, f: impl Fn(&OrderSlice, &Element) -> Vec<Element>) -> Vec<Element> {
        let g = x.ground();
        let sigma = self.canonical(&g);
        let back = sigma.inverse();
        let mut v: Vec<Element> =
            f(&self.slices[g.len()], &self.species.transport(&sigma, x)).iter().map(|y| self.species.transport(&back, y)).collect();
        v.sort();
        v
    }
}

/// (λ, λ′) ∈ ≺ iff (σλ, σλ′) ∈ ≺ for every σ on {1..n} and for a shift onto
/// a disjoint label set, recomputed from scratch there.
pub fn check_transport_invariance(mu: &MultSystem, pi: &ComultSystem, n: usize) -> Verdict {
    let ground = GroundSet::range(n);
    let base = compute_order(mu, pi, &ground)?;
    let p = &mu.species;
    let pairs: HashSet<(Element, Element)> = base.pairs().into_iter().collect();
    for sigma in Bijection::all_on(&ground) {
        for (a, b) in &pairs {
            let moved = (p.transport(&sigma, a), p.transport(&sigma, b));
            if !pairs.contains(&moved) {
                return Err(Witness::new(format!("order not closed under {sigma}")).elements([a, b]));
            }
        }
    }
    let shifted = GroundSet::new((1..=n as u32).map(|l| l + 10)).unwrap();
    let tau = Bijection::order_preserving(&ground, &shifted).unwrap();
    let other: HashSet<(Element, Element)> = compute_order(mu, pi, &shifted)?.pairs().into_iter().collect();
    let moved: HashSet<(Element, Element)> = pairs.iter().map(|(a, b)| (p.transport(&tau, a), p.transport(&tau, b))).collect();
    if moved != other {
        return Err(Witness::new(format!("order on {shifted} differs from the transported order on {ground}")));
    }
    Ok(())
}

/// Both parts of the product/order lemma:
/// (a) μ(α,β) ⪰ λ iff λ = μ(α′,β′) with α′ ⪯ α, β′ ⪯ β;
/// (b) μ(α,β) ⪯ λ iff π(λ) = (α′,β′) with α′ ⪰ α, β′ ⪰ β.
pub fn check_order_lemma(order: &SpeciesOrder, mu: &MultSystem, pi: &ComultSystem, max_n: usize) -> Verdict {
    let p = &mu.species;
    for n in 0..=max_n {
        let ground = GroundSet::range(n);
        let all = p.elements(&ground);
        for d in decompositions(&ground, 2, false) {
            let (s, t) = (&d[0], &d[1]);
            let images: Vec<(Element, Element)> = all.iter().map(|l| pi.apply(s, t, l)).collect();
            for a in p.elements(s) {
                for b in p.elements(t) {
                    let m = mu.apply(s, t, &a, &b);
                    let below: HashSet<Element> = order.lower(&m).into_iter().collect();
                    let mut products = HashSet::new();
                    for a2 in order.lower(&a) {
                        for b2 in order.lower(&b) {
                            products.insert(mu.apply(s, t, &a2, &b2));
                        }
                    }
                    if below != products {
                        return Err(Witness::new("part (a): {λ ⪯ μ(α,β)} differs from μ({α′ ⪯ α} × {β′ ⪯ β})").parts(&d).elements([&a, &b]));
                    }
                    let above: HashSet<Element> = order.upper(&m).into_iter().collect();
                    let split_above: HashSet<Element> = all
                        .iter()
                        .zip(&images)
                        .filter(|(_, (x, y))| order.le(&a, x) && order.le(&b, y))
                        .map(|(l, _)| l.clone())
                        .collect();
                    if above != split_above {
                        return Err(Witness::new("part (b): {λ ⪰ μ(α,β)} differs from {λ : π(λ) ⪰ (α,β)}").parts(&d).elements([&a, &b]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Reads the shape of λ off the labeled partition f^{-1}(λ).
pub fn shapes(fmu: &FMu, ground: &GroundSet) -> HashMap<Element, Vec<GroundSet>> {
    fmu.inverse_table(ground)
        .into_iter()
        .map(|(y, x)| {
            let Element::Labeled(bs) = x else { unreachable!() };
            (y, bs.into_iter().map(|(b, _)| b).collect())
        })
        .collect()
}

/// X refines Y: every block of X lies inside a block of Y.
pub fn refines(x: &[GroundSet], y: &[GroundSet]) -> bool {
    x.iter().all(|b| y.iter().any(|c| b.is_subset(c)))
}

#[derive(Clone, Debug)]
pub struct LatticeReport {
    /// Every pair in the interval has a meet.
    pub lattice: Verdict,
    /// Comparability in the interval matches refinement of shapes, and the shape map is injective.
    pub shape: Verdict,
    /// A partition below sh(λ) that is not the shape of anything in the interval.
    pub missing_shape: Option<Vec<GroundSet>>,
    pub size: usize,
}

pub fn check_lower_lattice(slice: &OrderSlice, shape: &HashMap<Element, Vec<GroundSet>>, lambda: &Element) -> LatticeReport {
    let interval = slice.lower(lambda);
    let mut lattice = Ok(());
    'pairs: for (i, a) in interval.iter().enumerate() {
        for b in &interval[i + 1..] {
            let lbs: Vec<&Element> = interval.iter().filter(|c| slice.le(c, a) && slice.le(c, b)).collect();
            if !lbs.iter().any(|g| lbs.iter().all(|c| slice.le(c, g))) {
                lattice = Err(Witness::new("no greatest lower bound").parts([slice.ground()]).elements([lambda, a, b]));
                break 'pairs;
            }
        }
    }
    let mut shape_verdict = Ok(());
    let mut seen: HashMap<&Vec<GroundSet>, &Element> = HashMap::new();
    for a in &interval {
        if let Some(prev) = seen.insert(&shape[a], a) {
            shape_verdict = Err(Witness::new("two elements of the interval share a shape").elements([lambda, prev, a]));
            break;
        }
        for b in &interval {
            if slice.le(a, b) != refines(&shape[a], &shape[b]) {
                shape_verdict = Err(Witness::new("comparability does not match shape refinement").elements([lambda, a, b]));
            }
        }
        if shape_verdict.is_err() {
            break;
        }
    }
    let top = &shape[lambda];
    let missing_shape = set_partitions(slice.ground()).into_iter().find(|x| refines(x, top) && !seen.contains_key(x));
    LatticeReport { lattice, shape: shape_verdict, missing_shape, size: interval.len() }
}

/// (A) μ_{S,T} is a poset isomorphism of lower intervals; (B) each λ has a
/// unique maximal element of Image(μ_{S,T}) below it.
pub fn check_ab(order: &SpeciesOrder, mu: &MultSystem, max_n: usize) -> Verdict {
    let p = &mu.species;
    for n in 0..=max_n {
        let ground = GroundSet::range(n);
        for d in decompositions(&ground, 2, false) {
            let (s, t) = (&d[0], &d[1]);
            let mut image = Vec::new();
            for a in p.elements(s) {
                for b in p.elements(t) {
                    let m = mu.apply(s, t, &a, &b);
                    image.push(m.clone());
                    let pairs: Vec<(Element, Element)> =
                        order.lower(&a).into_iter().flat_map(|x| order.lower(&b).into_iter().map(move |y| (x.clone(), y))).collect();
                    let imgs: Vec<Element> = pairs.iter().map(|(x, y)| mu.apply(s, t, x, y)).collect();
                    let distinct: HashSet<&Element> = imgs.iter().collect();
                    let target: HashSet<Element> = order.lower(&m).into_iter().collect();
                    if distinct.len() != imgs.len() || distinct.len() != target.len() || imgs.iter().any(|z| !target.contains(z)) {
                        return Err(Witness::new("(A): μ is not a bijection of lower intervals").parts(&d).elements([&a, &b]));
                    }
                    for (i, (x1, y1)) in pairs.iter().enumerate() {
                        for (j, (x2, y2)) in pairs.iter().enumerate() {
                            if (order.le(x1, x2) && order.le(y1, y2)) != order.le(&imgs[i], &imgs[j]) {
                                return Err(Witness::new("(A): μ does not preserve and reflect the order")
                                    .parts(&d)
                                    .elements([x1, y1, x2, y2]));
                            }
                        }
                    }
                }
            }
            for l in p.elements(&ground) {
                let below: Vec<&Element> = image.iter().filter(|z| order.le(z, &l)).collect();
                let maximal: Vec<&&Element> = below.iter().filter(|z| !below.iter().any(|w| order.lt(z, w))).collect();
                if maximal.len() != 1 {
                    return Err(Witness::new(format!("(B): {} maximal elements of the image below", maximal.len()))
                        .parts(&d)
                        .elements([&l]));
                }
            }
        }
    }
    Ok(())
}

/// π_{S,T}(λ) = μ_{S,T}^{-1}(max{λ′ ∈ Image μ_{S,T} : λ′ ⪯ λ}). Panics if
/// (B) fails at the queried component; run `check_ab` first.
pub fn reconstruct_pi(order: Arc<SpeciesOrder>, mu: &MultSystem) -> ComultSystem {
    let m = mu.clone();
    ComultSystem::new("reconstructed from the order", mu.species.clone(), move |s, t, z| {
        let p = &m.species;
        let below: Vec<(Element, Element, Element)> = p
            .elements(s)
            .into_iter()
            .flat_map(|a| p.elements(t).into_iter().map(move |b| (a.clone(), b)))
            .map(|(a, b)| (m.apply(s, t, &a, &b), a, b))
            .filter(|(g, _, _)| order.le(g, z))
            .collect();
        let mut top = below.iter().filter(|(g, _, _)| !below.iter().any(|(h, _, _)| order.lt(g, h)));
        let (_, a, b) = top.next().expect("(B) gives a maximal element");
        assert!(top.next().is_none(), "(B) gives a unique maximal element");
        (a.clone(), b.clone())
    })
}

/// Elementwise equality of two comultiplicative systems on {1..n}, n ≤ max_n.
pub fn compare_pi(a: &ComultSystem, b: &ComultSystem, max_n: usize) -> Verdict {
    for n in 0..=max_n {
        let ground = GroundSet::range(n);
        for d in decompositions(&ground, 2, false) {
            for z in a.species.elements(&ground) {
                let (x, y) = (a.apply(&d[0], &d[1], &z), b.apply(&d[0], &d[1], &z));
                if x != y {
                    return Err(Witness::new(format!("({}, {}) vs ({}, {})", x.0, x.1, y.0, y.1)).parts(&d).elements([&z]));
                }
            }
        }
    }
    Ok(())
}

/// p_λ = Σ_{λ′ ⪰ λ} λ′ and q_λ = Σ_{λ′ ⪯ λ} p_{λ′} on one component.
#[derive(Clone, Debug)]
pub struct PQBasis {
    pub ground: GroundSet,
    pub p: BTreeMap<Element, Vector>,
    pub q: BTreeMap<Element, Vector>,
}

pub fn pq_tables(order: &SpeciesOrder, ground: &GroundSet) -> PQBasis {
    let elements = order.species.elements(ground);
    let mut p = BTreeMap::new();
    for l in &elements {
        let mut v = Vector::zero(ground.clone());
        for u in order.upper(l) {
            v.add_term(u, Q::one());
        }
        p.insert(l.clone(), v);
    }
    let mut q = BTreeMap::new();
    for l in &elements {
        let mut v = Vector::zero(ground.clone());
        for u in order.lower(l) {
            v.add_assign(&p[&u]);
        }
        q.insert(l.clone(), v);
    }
    PQBasis { ground: ground.clone(), p, q }
}

impl PQBasis {
    /// p is unitriangular in the standard basis and q in the p basis, both
    /// against ≺ (so against any linear extension of it).
    pub fn check_unitriangular(&self, order: &SpeciesOrder) -> Verdict {
        for (l, v) in &self.p {
            if v.coeff(l) != Q::one() || v.terms().any(|(u, _)| !order.le(l, u)) {
                return Err(Witness::new(format!("p_λ = {v} is not unitriangular")).elements([l]));
            }
        }
        for (l, v) in &self.q {
            let mut rest = v.clone();
            for u in order.lower(l) {
                rest = rest.sub(&self.p[&u]);
            }
            if !rest.is_zero() {
                return Err(Witness::new(format!("q_λ = {v} is not unitriangular in the p basis")).elements([l]));
            }
        }
        Ok(())
    }

    /// The linear map sending the basis vector `table[λ]` to λ, as images of the standard basis.
    pub fn change_of_basis(table: &BTreeMap<Element, Vector>) -> BTreeMap<Element, Vector> {
        let ground = table.values().next().map(|v| v.ground().clone()).unwrap_or_default();
        let coords = Coordinates::new(table.keys().cloned());
        let n = coords.len();
        // [M | I] → [I | M^{-1}] where column λ of M is table[λ]
        let mut m: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let x = &coords.elements()[i];
                let mut row: Vec<Q> = coords.elements().iter().map(|l| table[l].coeff(x)).collect();
                row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("change of basis is invertible");
            m.swap(c, p);
            let inv = Q::one() / m[c][c].clone();
            for x in m[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    let (pivot, other) = if r < c {
                        let (a, b) = m.split_at_mut(c);
                        (&b[0], &mut a[r])
                    } else {
                        let (a, b) = m.split_at_mut(r);
                        (&a[c], &mut b[0])
                    };
                    for (o, x) in other.iter_mut().zip(pivot) {
                        *o -= &f * x;
                    }
                }
            }
        }
        // column j of M^{-1} gives the coordinates of standard element j
        coords
            .elements()
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let col: Vec<Q> = (0..n).map(|i| m[i][n + j].clone()).collect();
                (x.clone(), coords.vector(&ground, &col))
            })
            .collect()
    }
}

fn apply_linear(map: &BTreeMap<Element, Vector>, v: &Vector) -> Vector {
    let mut out = Vector::zero(v.ground().clone());
    for (x, c) in v.terms() {
        out.add_scaled(&map[x], c);
    }
    out
}

fn apply_tensor(maps: &[&BTreeMap<Element, Vector>; 2], v: &TensorVector) -> TensorVector {
    let parts = v.parts().to_vec();
    let once = v.map_factor(0, &parts[..1], |x| TensorVector::from_vector(&maps[0][x]));
    once.map_factor(1, &parts[1..2], |y| TensorVector::from_vector(&maps[1][y]))
}

/// The four basis identities on every pair and element, for |S⊔T| ≤ max_n,
/// followed by the change-of-basis intertwining h → h′ (p) and h → h″ (q).
pub fn check_basis_theorem(order: &SpeciesOrder, mu: &MultSystem, pi: &ComultSystem, max_n: usize) -> Verdict {
    let h = LinearizedHopf::pi_mu(pi, mu);
    let h1 = LinearizedHopf::mu_mu(mu);
    let h2 = LinearizedHopf::mu_pi(mu, pi);
    let (e, e1, e2) = (Engine::new(&h), Engine::new(&h1), Engine::new(&h2));
    let mut tables: HashMap<GroundSet, PQBasis> = HashMap::new();
    let mut inverses: HashMap<GroundSet, [BTreeMap<Element, Vector>; 2]> = HashMap::new();
    for n in 0..=max_n {
        let ground = GroundSet::range(n);
        for g in ground.subsets() {
            tables.entry(g.clone()).or_insert_with(|| pq_tables(order, &g));
            let t = &tables[&g];
            inverses.entry(g).or_insert_with(|| [PQBasis::change_of_basis(&t.p), PQBasis::change_of_basis(&t.q)]);
        }
        let t = &tables[&ground];
        t.check_unitriangular(order)?;
        for d in decompositions(&ground, 2, false) {
            let (s, tt) = (&d[0], &d[1]);
            let (ts, tt_) = (&tables[s], &tables[tt]);
            for a in mu.species.elements(s) {
                for b in mu.species.elements(tt) {
                    let m = mu.apply(s, tt, &a, &b);
                    for (name, x, y, want) in [("p", &ts.p, &tt_.p, &t.p), ("q", &ts.q, &tt_.q, &t.q)] {
                        let xy = TensorVector::from_vector(&x[&a]).tensor(&TensorVector::from_vector(&y[&b])).unwrap();
                        if e.nabla(s, tt, &xy) != want[&m] {
                            return Err(Witness::new(format!("∇^π({name}_α ⊗ {name}_β) ≠ {name}_μ(α,β)")).parts(&d).elements([&a, &b]));
                        }
                    }
                }
            }
            for l in mu.species.elements(&ground) {
                let dp = e.delta(s, tt, &t.p[&l]);
                let pre = e1.coproduct_basis(s, tt, &l);
                let want = match pre.terms().next() {
                    Some((k, _)) => TensorVector::from_vector(&ts.p[&k[0]]).tensor(&TensorVector::from_vector(&tt_.p[&k[1]])).unwrap(),
                    None => TensorVector::zero(d.clone()),
                };
                if dp != want {
                    return Err(Witness::new("Δ^μ(p_λ) is not p_α ⊗ p_β (or 0)").parts(&d).elements([&l]));
                }
                let (l1, l2) = pi.apply(s, tt, &l);
                let want = TensorVector::from_vector(&ts.q[&l1]).tensor(&TensorVector::from_vector(&tt_.q[&l2])).unwrap();
                if e.delta(s, tt, &t.q[&l]) != want {
                    return Err(Witness::new("Δ^μ(q_λ) ≠ q_λ′ ⊗ q_λ″").parts(&d).elements([&l]));
                }
            }
            // φ(∇x⊗y) = ∇′(φx⊗φy) and (φ⊗φ)Δx = Δ′φx on the standard basis
            for (which, target, k) in [("h′", &e1, 0usize), ("h″", &e2, 1)] {
                let (fs, ft, fi) = (&inverses[s][k], &inverses[tt][k], &inverses[&ground][k]);
                for a in mu.species.elements(s) {
                    for b in mu.species.elements(tt) {
                        let lhs = apply_linear(fi, &e.product_basis(s, tt, &a, &b));
                        let xy = TensorVector::from_vector(&fs[&a]).tensor(&TensorVector::from_vector(&ft[&b])).unwrap();
                        if lhs != target.nabla(s, tt, &xy) {
                            return Err(Witness::new(format!("change of basis to {which} does not intertwine products")).parts(&d).elements([&a, &b]));
                        }
                    }
                }
                for l in mu.species.elements(&ground) {
                    let lhs = apply_tensor(&[fs, ft], &e.coproduct_basis(s, tt, &l));
                    if lhs != target.delta(s, tt, &fi[&l]) {
                        return Err(Witness::new(format!("change of basis to {which} does not intertwine coproducts")).parts(&d).elements([&l]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// μ-then-π over (R_1..R_k) and (S_1..S_ℓ) equals componentwise π, the
/// twist, then componentwise μ, for k, ℓ ≤ max_parts and parts possibly empty.
pub fn check_rectangle(mu: &MultSystem, pi: &ComultSystem, max_n: usize, max_parts: usize) -> Verdict {
    let p = &mu.species;
    for n in 0..=max_n {
        let ground = GroundSet::range(n);
        for k in 1..=max_parts {
            for r in decompositions(&ground, k, false) {
                let mut tuples: Vec<Vec<Element>> = vec![Vec::new()];
                for part in &r {
                    let xs = p.elements(part);
                    tuples = tuples.iter().flat_map(|t| xs.iter().map(move |x| [t.clone(), vec![x.clone()]].concat())).collect();
                }
                for l in 1..=max_parts {
                    for sp in decompositions(&ground, l, false) {
                        for xs in &tuples {
                            let top = pi.apply_iter(&sp, &mu.apply_iter(&r, xs));
                            let pieces: Vec<Vec<Element>> =
                                r.iter().zip(xs).map(|(ri, x)| pi.apply_iter(&sp.iter().map(|sj| ri.intersection(sj)).collect::<Vec<_>>(), x)).collect();
                            let bottom: Vec<Element> = sp
                                .iter()
                                .enumerate()
                                .map(|(j, sj)| {
                                    let parts: Vec<GroundSet> = r.iter().map(|ri| ri.intersection(sj)).collect();
                                    let col: Vec<Element> = pieces.iter().map(|row| row[j].clone()).collect();
                                    mu.apply_iter(&parts, &col)
                                })
                                .collect();
                            if top != bottom {
                                let mut parts = r.clone();
                                parts.extend(sp.iter().cloned());
                                return Err(Witness::new("π∘μ differs from μ∘twist∘π").parts(&parts).elements(xs));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_e_c, make_pi};

    fn pi_order(n: usize) -> SpeciesOrder {
        let e = make_pi();
        SpeciesOrder::new(e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap(), n).unwrap()
    }

    fn part(blocks: &[&[u32]]) -> Element {
        Element::partition(blocks.iter().map(|b| GroundSet::new(b.iter().copied()).unwrap())).unwrap()
    }

    #[test]
    fn finer_is_smaller() {
        let o = pi_order(2);
        assert!(o.lt(&part(&[&[1], &[2]]), &part(&[&[1, 2]])));
        assert!(!o.lt(&part(&[&[1, 2]]), &part(&[&[1], &[2]])));
    }

    #[test]
    fn pq_on_two_points() {
        let o = pi_order(2);
        let t = pq_tables(&o, &GroundSet::range(2));
        let (fine, coarse) = (part(&[&[1], &[2]]), part(&[&[1, 2]]));
        assert_eq!(t.p[&fine], Vector::basis(fine.clone()).add(&Vector::basis(coarse.clone())));
        assert_eq!(t.p[&coarse], Vector::basis(coarse.clone()));
        let want = Vector::basis(fine).add(&Vector::basis(coarse.clone()).scale(&crate::vector::q(2)));
        assert_eq!(t.q[&coarse], want);
    }

    #[test]
    fn maps_are_incomparable() {
        let e = make_e_c(2);
        let o = SpeciesOrder::new(e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap(), 3).unwrap();
        assert!(o.slice(3).pairs().is_empty());
    }

    #[test]
    fn change_of_basis_inverts() {
        let o = pi_order(3);
        let t = pq_tables(&o, &GroundSet::range(3));
        let inv = PQBasis::change_of_basis(&t.p);
        for (l, v) in &t.p {
            assert_eq!(apply_linear(&inv, v), Vector::basis(l.clone()));
        }
    }

    #[test]
    fn dot_has_graph_name_and_covers() {
        let dot = pi_order(2).slice(2).to_dot("Pi");
        assert!(dot.starts_with("digraph \"Pi_2\""));
        assert_eq!(dot.matches("->").count(), 1);
    }
}
