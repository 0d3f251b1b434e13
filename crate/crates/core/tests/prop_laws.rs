//! Symmetric monoidal and discard laws on every backend, on random morphisms.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use streamprop::backend::{invert_perm, Backend};
use streamprop::classical::{FinSet, IntLin};
use streamprop::cpm::Cpm;
use streamprop::dsl::{self, print};
use streamprop::random::{random_diagram, Kind, RandomMor};

fn tol<B: Backend>(be: &B) -> f64 {
    if be.name() == "cpm" {
        1e-9
    } else {
        0.0
    }
}

fn arity(rng: &mut ChaCha8Rng) -> usize {
    rng.gen_range(0..=1)
}

fn laws<B: RandomMor>(be: &B, seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = tol(be);
    let (a, b, c, d) = (arity(&mut rng), arity(&mut rng), arity(&mut rng), arity(&mut rng));
    let f = be.random_mor(&mut rng, a, b, Kind::Any);
    let g = be.random_mor(&mut rng, b, c, Kind::Any);
    let h = be.random_mor(&mut rng, c, d, Kind::Any);

    let left = be.compose(&h, &be.compose(&g, &f).unwrap()).unwrap();
    let right = be.compose(&be.compose(&h, &g).unwrap(), &f).unwrap();
    prop_assert!(be.equal(&left, &right, t), "associativity");

    prop_assert!(be.equal(&be.compose(&f, &be.identity(a)).unwrap(), &f, t), "right unit");
    prop_assert!(be.equal(&be.compose(&be.identity(b), &f).unwrap(), &f, t), "left unit");

    // (g ⊗ h) ∘ (f ⊗ g') = (g ∘ f) ⊗ (h ∘ g')
    let g2 = be.random_mor(&mut rng, d, c, Kind::Any);
    let lhs = be.compose(&be.tensor(&g, &h), &be.tensor(&f, &g2)).unwrap();
    let rhs = be.tensor(&be.compose(&g, &f).unwrap(), &be.compose(&h, &g2).unwrap());
    prop_assert!(be.equal(&lhs, &rhs, t), "interchange");

    // swap naturality and involution
    let sw_in = be.swap(a, d);
    let sw_out = be.swap(b, c);
    let lhs = be.compose(&sw_out, &be.tensor(&f, &g2)).unwrap();
    let rhs = be.compose(&be.tensor(&g2, &f), &sw_in).unwrap();
    prop_assert!(be.equal(&lhs, &rhs, t), "swap naturality");
    let twice = be.compose(&be.swap(d, a), &sw_in).unwrap();
    prop_assert!(be.equal(&twice, &be.identity(a + d), t), "swap involution");

    // a permutation followed by its inverse
    let n = rng.gen_range(0..=3);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let p = be.permutation(&perm);
    let q = be.permutation(&invert_perm(&perm));
    prop_assert!(be.equal(&be.compose(&q, &p).unwrap(), &be.identity(n), t), "permutation inverse");

    // discard is natural for causal maps, and discards are monoidal
    let k = be.random_mor(&mut rng, a, b, Kind::Causal);
    prop_assert!(be.equal(&be.compose(&be.discard(b), &k).unwrap(), &be.discard(a), t), "causal discard");
    prop_assert!(be.equal(&be.tensor(&be.discard(a), &be.discard(d)), &be.discard(a + d), t), "discard tensor");

    let e = be.random_mor(&mut rng, a, a, Kind::Idempotent);
    prop_assert!(be.is_idempotent(&e, t.max(1e-12)).unwrap(), "idempotent sample");
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cpm_laws(seed in any::<u64>()) {
        laws(&Cpm, seed)?;
    }

    #[test]
    fn finset_laws(seed in any::<u64>()) {
        laws(&FinSet, seed)?;
    }

    #[test]
    fn intlin_laws(seed in any::<u64>()) {
        laws(&IntLin, seed)?;
    }

    #[test]
    fn diagrams_print_and_parse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_diagram(&FinSet, &mut rng);
        let gens = s.register(&FinSet);
        let text = print(&s.diagram);
        let back = dsl::parse(&text, &gens).unwrap();
        prop_assert_eq!(back, s.diagram);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Cpm.random_mor(&mut rng, 1, 1, Kind::Any);
        prop_assert_eq!(Cpm.from_json(&Cpm.to_json(&f)).unwrap(), f);
        let g = IntLin.random_mor(&mut rng, 2, 1, Kind::Any);
        prop_assert_eq!(IntLin.from_json(&IntLin.to_json(&g)).unwrap(), g);
        let h = FinSet.random_mor(&mut rng, 2, 2, Kind::Any);
        prop_assert_eq!(FinSet.from_json(&FinSet.to_json(&h)).unwrap(), h);
    }
}
