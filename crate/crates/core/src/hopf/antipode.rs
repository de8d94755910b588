//! Takeuchi's alternating-sum antipode and the convolution identity.

use super::{Engine, LinearizedHopf};
use crate::ground::{compositions, decompositions, GroundSet};
use crate::report::{Verdict, Witness};
use crate::vector::{q, TensorVector, Vector};

/// S_I(v) = Σ (-1)^k ∇_{S1..Sk} Δ_{S1..Sk}(v) over ordered decompositions of I
/// into nonempty parts; S_∅ is the identity.
pub fn takeuchi_antipode(h: &LinearizedHopf, v: &Vector) -> Vector {
    takeuchi_with(&Engine::new(h), v)
}

pub(crate) fn takeuchi_with(e: &Engine, v: &Vector) -> Vector {
    let ground = v.ground().clone();
    if ground.is_empty() {
        return v.clone();
    }
    let mut out = Vector::zero(ground.clone());
    for parts in compositions(&ground) {
        let sign = if parts.len() % 2 == 0 { q(1) } else { q(-1) };
        let term = e.iterate_nabla(&e.iterate_delta(&parts, v));
        out.add_scaled(&term, &sign);
    }
    out
}

/// Σ_{S⊔T=I} ∇(S⊗id)Δ and Σ ∇(id⊗S)Δ both equal the unit-counit projection.
pub fn check_antipode_axiom(h: &LinearizedHopf, max_n: usize) -> Verdict {
    let e = Engine::new(h);
    for n in 0..=max_n {
        let ground = GroundSet::range(n);
        for x in e.elements(&ground).iter() {
            let want = if n == 0 { Vector::basis(x.clone()) } else { Vector::zero(ground.clone()) };
            for side in 0..2 {
                let mut total = Vector::zero(ground.clone());
                for d in decompositions(&ground, 2, false) {
                    let (s, t) = (&d[0], &d[1]);
                    let dx = e.coproduct_basis(s, t, x);
                    let part = &d[side];
                    let twisted = dx.map_factor(side, std::slice::from_ref(part), |y| {
                        TensorVector::from_vector(&e.antipode_basis(y))
                    });
                    total.add_assign(&e.nabla(s, t, &twisted));
                }
                if total != want {
                    let which = if side == 0 { "∇(S⊗id)Δ" } else { "∇(id⊗S)Δ" };
                    return Err(Witness::new(format!("{which} = {total}")).parts([&ground]).elements([x]));
                }
            }
        }
    }
    Ok(())
}
