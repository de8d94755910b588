//! One line per acceptance criterion, then a single assertion over all of them.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use species_forge::catalog::{make_e, make_e_c, make_l, make_perm, make_pi, make_s, make_x_c, CatalogEntry};
use species_forge::classify::{primitive_basis, primitives, FMu, FPi};
use species_forge::controls::perturbed_systems;
use species_forge::ground::{permutations, set_partitions};
use species_forge::hopf::{
    check_antipode_axiom, check_axiom, check_fsd, check_delta_nabla_identity, compare_tables, dual_transpose, self_compat_both,
    takeuchi_antipode, Axiom, LinearizedHopf, ALL_AXIOMS,
};
use species_forge::linalg::same_span;
use species_forge::order::{
    check_ab, check_basis_theorem, check_lower_lattice, compare_pi, reconstruct_pi, refines, shapes, SpeciesOrder,
};
use species_forge::vector::q;
use species_forge::{parse_species, Element, GroundSet, SetSpecies, Vector};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn systems(e: &CatalogEntry) -> LinearizedHopf {
    LinearizedHopf::mu_pi(e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap())
}

fn order_of(e: &CatalogEntry, n: usize) -> SpeciesOrder {
    SpeciesOrder::new(e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap(), n).unwrap()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn axioms() -> Outcome {
    let start = Instant::now();
    for e in [make_e(), make_e_c(2), make_perm(), make_pi()] {
        let h = systems(&e);
        for a in ALL_AXIOMS {
            check_axiom(&h, a, 4).map_err(|w| format!("{} {a}: {w}", e.name))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    let h = systems(&make_l());
    for a in ALL_AXIOMS {
        match (a, check_axiom(&h, a, 4)) {
            (Axiom::Commutative, Err(w)) => ensure(w.size() == 2, || format!("witness size {}", w.size()))?,
            (Axiom::Commutative, Ok(())) => return Err("L passed commutativity".into()),
            (_, Err(w)) => return Err(format!("L failed {a}: {w}")),
            _ => {}
        }
    }
    Ok(())
}

fn self_compat_modes() -> Outcome {
    let catalog = [make_e(), make_e_c(2), make_e_c(3), make_perm(), make_pi(), make_l(), parse_species("S(E_C:2)").unwrap()];
    let mut disagreements = 0;
    for mu in catalog.iter().map(|e| e.mu.clone().unwrap()).chain(perturbed_systems(0, 50).into_iter().map(|c| c.mu)) {
        let o = self_compat_both(&mu, 3).map_err(|w| format!("{}: {w}", mu.name))?;
        disagreements += usize::from(!o.agree());
    }
    ensure(disagreements == 0, || format!("{disagreements} disagreements"))
}

fn delta_nabla() -> Outcome {
    let mut certified = Vec::new();
    for e in [make_e(), make_e_c(2), make_perm(), make_pi(), make_l()] {
        certified.push(systems(&e));
    }
    for e in [make_e(), make_e_c(2), make_perm(), make_pi(), parse_species("S(E_C:2)").unwrap()] {
        certified.push(LinearizedHopf::mu_mu(e.mu.as_ref().unwrap()));
    }
    for h in &certified {
        check_delta_nabla_identity(h, 4).map_err(|w| format!("{}: {w}", h.name))?;
    }
    Ok(())
}

fn fsd_cocommutative() -> Outcome {
    let mut fsd = 0;
    for e in [make_e(), make_e_c(2), make_perm(), make_pi(), make_l(), make_s(&make_x_c(2)).unwrap()] {
        let mu = e.mu.as_ref().unwrap();
        let mut hs = vec![LinearizedHopf::mu_mu(mu)];
        if let Some(pi) = &e.pi {
            hs.extend([LinearizedHopf::mu_pi(mu, pi), LinearizedHopf::pi_mu(pi, mu), LinearizedHopf::pi_pi(pi)]);
        }
        for h in hs {
            if check_fsd(&h, 4).verdict().is_ok() {
                fsd += 1;
                for a in [Axiom::Commutative, Axiom::Cocommutative] {
                    check_axiom(&h, a, 4).map_err(|w| format!("{} is FSD but fails {a}: {w}", h.name))?;
                }
            }
        }
    }
    ensure(fsd > 0, || "no freely self-dual triple found".into())
}

fn antipode() -> Outcome {
    let e = make_pi();
    let h = LinearizedHopf::mu_mu(e.mu.as_ref().unwrap());
    for n in 0..=4 {
        for x in e.species.elements(&GroundSet::range(n)) {
            let k = x.blocks().unwrap().len();
            let v = Vector::basis(x.clone());
            let want = v.scale(&if k % 2 == 0 { q(1) } else { q(-1) });
            ensure(takeuchi_antipode(&h, &v) == want, || format!("S({x}) is not (-1)^{k} {x}"))?;
        }
    }
    check_antipode_axiom(&h, 3).map_err(|w| w.to_string())
}

fn isomorphisms() -> Outcome {
    for spec in ["Pi", "Perm", "E_C:2", "S(E_C:2)"] {
        let e = parse_species(spec).unwrap();
        let f = FMu::new(e.mu.as_ref().unwrap());
        f.check(4).map_err(|w| format!("f^mu {spec}: {w}"))?;
        for n in 0..=4 {
            let g = GroundSet::range(n);
            let (a, b) = (f.source.elements(&g).len(), e.species.elements(&g).len());
            ensure(a == b, || format!("|S(Q)[{n}]| = {a} but |{spec}[{n}]| = {b}"))?;
        }
    }
    for spec in ["E_C:2", "S(X_C:2)"] {
        let e = parse_species(spec).unwrap();
        FPi::new(e.pi.as_ref().unwrap(), 3).and_then(|f| f.check(3)).map_err(|w| format!("f^pi {spec}: {w}"))?;
    }
    for n in 0..=5 {
        let sum: usize = set_partitions(&GroundSet::range(n)).iter().map(|p| p.iter().map(|b| factorial(b.len() - 1)).product::<usize>()).sum();
        ensure(sum == factorial(n), || format!("cycle count {sum} != {n}!"))?;
    }
    Ok(())
}

fn primitive_dims() -> Outcome {
    let cases = [(make_pi(), vec![1, 1, 1, 1]), (make_perm(), vec![1, 1, 2, 6]), (make_e_c(2), vec![2, 0, 0])];
    for (e, want) in cases {
        let h = LinearizedHopf::mu_mu(e.mu.as_ref().unwrap());
        let basis = primitive_basis(e.mu.as_ref().unwrap());
        let mut got = Vec::new();
        for n in 1..=want.len() {
            let g = GroundSet::range(n);
            let space = primitives(&h, &g);
            let set: Vec<Vector> = basis.elements(&g).into_iter().map(Vector::basis).collect();
            ensure(same_span(&set, &space.basis), || format!("{} n={n}: primitive_basis span differs", e.name))?;
            got.push(space.dim());
        }
        ensure(got == want, || format!("{}: dims {got:?}, expected {want:?}", e.name))?;
    }
    Ok(())
}

fn rotations(c: &[u32]) -> Vec<Vec<u32>> {
    (0..c.len()).map(|i| c[i..].iter().chain(&c[..i]).copied().collect()).collect()
}

// c is a cyclic shuffle of the given cycles
fn shuffle_of(c: &[u32], cycles: &[Vec<u32>]) -> bool {
    let same = |a: &[u32], b: &[u32]| a.len() == b.len() && rotations(a).iter().any(|r| r == b);
    match cycles {
        [] => c.is_empty(),
        [a] => same(c, a),
        [a, rest @ ..] => rotations(c).iter().any(|r| {
            (0u32..1 << r.len()).filter(|m| m.count_ones() as usize == a.len()).any(|m| {
                let (pick, left): (Vec<usize>, Vec<usize>) = (0..r.len()).partition(|&i| m >> i & 1 == 1);
                let sub: Vec<u32> = pick.iter().map(|&i| r[i]).collect();
                let other: Vec<u32> = left.iter().map(|&i| r[i]).collect();
                same(&sub, a) && shuffle_of(&other, rest)
            })
        }),
    }
}

fn shuffle_le(lo: &Element, hi: &Element) -> bool {
    let small = lo.cycles().unwrap();
    hi.cycles().unwrap().iter().all(|c| {
        let inside: Vec<Vec<u32>> = small.iter().filter(|a| a.iter().all(|x| c.contains(x))).cloned().collect();
        inside.iter().map(Vec::len).sum::<usize>() == c.len() && shuffle_of(c, &inside)
    })
}

fn order_theory() -> Outcome {
    let pi = order_of(&make_pi(), 4);
    for n in 0..=4 {
        let s = pi.slice(n);
        for a in s.elements() {
            for b in s.elements() {
                let want = a != b && refines(&a.blocks().unwrap(), &b.blocks().unwrap());
                ensure(s.lt(a, b) == want, || format!("Pi: {a} < {b} is {}", s.lt(a, b)))?;
            }
        }
    }
    let maps = order_of(&make_e_c(2), 4);
    ensure((0..=4).all(|n| maps.slice(n).pairs().is_empty()), || "E_C:2 has comparable elements".into())?;
    let perm = order_of(&make_perm(), 4);
    for n in 0..=4 {
        let s = perm.slice(n);
        for a in s.elements() {
            for b in s.elements() {
                ensure(s.le(a, b) == shuffle_le(a, b), || format!("Perm: {a} <= {b} disagrees with the shuffle oracle"))?;
            }
        }
    }
    let lambda = Element::perm_from_cycles(&[&[1, 2], &[3, 4]]).unwrap();
    let above: BTreeSet<Element> = perm.slice(4).upper(&lambda).into_iter().filter(|x| x.cycles().unwrap().len() == 1).collect();
    let listed: [&[u32]; 6] = [&[1, 2, 3, 4], &[1, 2, 4, 3], &[1, 3, 2, 4], &[1, 4, 2, 3], &[1, 3, 4, 2], &[1, 4, 3, 2]];
    let want: BTreeSet<Element> = listed.iter().map(|c| Element::perm_from_cycles(&[c]).unwrap()).collect();
    ensure(above == want, || format!("4-cycles above (12)(34): {above:?}"))?;
    for p in permutations(&[2, 3, 4]) {
        let c: Vec<u32> = std::iter::once(1).chain(p).collect();
        let listed = want.contains(&Element::perm_from_cycles(&[&c]).unwrap());
        ensure(shuffle_of(&c, &[vec![1, 2], vec![3, 4]]) == listed, || format!("shuffle oracle disagrees on {c:?}"))?;
    }
    for (e, o) in [(make_pi(), pi), (make_perm(), perm)] {
        let (mu, p) = (e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap());
        let fmu = FMu::new(mu);
        for n in 0..=4 {
            let sh = shapes(&fmu, &GroundSet::range(n));
            for l in o.slice(n).elements() {
                let r = check_lower_lattice(o.slice(n), &sh, l);
                r.lattice.and(r.shape).map_err(|w| format!("{} lower interval of {l}: {w}", e.name))?;
            }
        }
        let o = Arc::new(o);
        check_ab(&o, mu, 4).map_err(|w| format!("{} (A)/(B): {w}", e.name))?;
        compare_pi(p, &reconstruct_pi(o, mu), 4).map_err(|w| format!("{} round trip: {w}", e.name))?;
    }
    Ok(())
}

fn basis_theorem() -> Outcome {
    for e in [make_pi(), make_perm()] {
        let o = order_of(&e, 4);
        check_basis_theorem(&o, e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap(), 4).map_err(|w| format!("{}: {w}", e.name))?;
    }
    Ok(())
}

fn duality() -> Outcome {
    for e in [make_e(), make_e_c(2), make_e_c(3), make_perm(), make_pi(), make_s(&make_x_c(2)).unwrap()] {
        let (mu, pi) = (e.mu.as_ref().unwrap(), e.pi.as_ref().unwrap());
        let d = dual_transpose(&LinearizedHopf::mu_pi(mu, pi));
        compare_tables(&d, &LinearizedHopf::pi_mu(pi, mu), false, 4).map_err(|w| format!("{}: {w}", e.name))?;
    }
    Ok(())
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_species-forge"))
            .args(["check", "--suite", "full", "--species", "Pi", "--max-n", "4", "--output", "json"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    ensure(a.status.code() == Some(0), || format!("exit code {:?}", a.status.code()))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "outputs differ".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("seven axioms on E, E_C:2, Perm, Pi; L fails only commutativity", axioms),
        ("direct and local self-compatibility agree on catalog and 50 controls", self_compat_modes),
        ("delta after nabla is the identity on certified triples", delta_nabla),
        ("freely self-dual triples are commutative and cocommutative", fsd_cocommutative),
        ("partition antipode is (-1)^blocks and satisfies the antipode axiom", antipode),
        ("f^mu and f^pi are isomorphisms with matching cardinalities", isomorphisms),
        ("primitive dimensions by kernel intersection", primitive_dims),
        ("order: refinement, empty, shuffles, lattices, (A)/(B), round trip", order_theory),
        ("basis theorem identities and change of basis on Pi and Perm", basis_theorem),
        ("dual transpose swaps the systems", duality),
        ("full Pi report is byte-identical across runs", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (desc, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(()) => println!("criterion {}: PASS {desc}", i + 1),
            Err(e) => {
                println!("criterion {}: FAIL {desc}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
