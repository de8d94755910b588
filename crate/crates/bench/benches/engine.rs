use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use species_forge::catalog::{make_perm, make_pi};
use species_forge::classify::primitives;
use species_forge::hopf::{check_axiom, takeuchi_antipode, Axiom, LinearizedHopf};
use species_forge::order::{compute_order, SpeciesOrder};
use species_forge::{GroundSet, Vector};

fn axioms(c: &mut Criterion) {
    let e = make_pi();
    let h = LinearizedHopf::mu_pi(e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap());
    let mut g = c.benchmark_group("axioms_pi_4");
    g.sample_size(10);
    for a in [Axiom::Associative, Axiom::Coassociative, Axiom::HopfCompatible] {
        g.bench_function(a.name(), |b| b.iter(|| check_axiom(black_box(&h), a, 4)));
    }
    g.finish();
}

fn order(c: &mut Criterion) {
    let e = make_perm();
    let (mu, pi) = (e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap());
    c.bench_function("compute_order_perm_4", |b| b.iter(|| compute_order(mu, pi, black_box(&GroundSet::range(4)))));
    let mut g = c.benchmark_group("species_order");
    g.sample_size(10);
    g.bench_function("pi_4", |b| {
        let p = make_pi();
        b.iter(|| SpeciesOrder::new(p.mu.as_ref().unwrap(), p.pi.as_ref().unwrap(), 4))
    });
    g.finish();
}

fn linear(c: &mut Criterion) {
    let e = make_perm();
    let h = LinearizedHopf::mu_mu(e.mu.as_ref().unwrap());
    c.bench_function("primitives_perm_4", |b| b.iter(|| primitives(black_box(&h), &GroundSet::range(4))));
    let p = make_pi();
    let hp = LinearizedHopf::mu_mu(p.mu.as_ref().unwrap());
    let top = Vector::basis(p.species.elements(&GroundSet::range(4)).pop().unwrap());
    c.bench_function("antipode_pi_4", |b| b.iter(|| takeuchi_antipode(black_box(&hp), &top)));
}

criterion_group!(benches, axioms, order, linear);
criterion_main!(benches);
