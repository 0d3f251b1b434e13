//! Unfolding respects composition and tensor, and bounded equivalence
//! finds the first tick where two sequences part ways.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use streamprop::backend::{block_perm_vec, invert_perm, Backend, Gens};
use streamprop::classical::{FinSet, IntLin};
use streamprop::cpm::{gates::gate, Cpm};
use streamprop::demos::{parse_for, source};
use streamprop::diagram::Diagram;
use streamprop::random::{boundary_context, random_diagram, Pool, RandomMor};
use streamprop::rewrite::coinductive_equal;
use streamprop::stateful::{self, Verdict};

fn seq_functor<B: RandomMor>(be: &B, trials: usize, k: usize, tol: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let s = random_diagram(be, &mut rng);
        let mut p = Pool::new(be);
        p.gens = s.gens.clone();
        let ctx = boundary_context(&mut p, &mut rng, s.diagram.cod());
        let whole = Diagram::seq(vec![s.diagram.clone(), ctx.clone()]).unwrap();
        let sample = p.finish(whole.clone());
        let gens = sample.register(be);
        let fa = |d: &Diagram| stateful::fa_at(be, &stateful::unfold(&gens, d).unwrap(), k).unwrap();
        let composed = be.compose(&fa(&ctx), &fa(&s.diagram)).unwrap();
        assert!(be.equal(&fa(&whole), &composed, tol), "trial {trial}: {:?}", s.diagram);
    }
}

#[test]
fn unfolding_preserves_composition() {
    seq_functor(&FinSet, 40, 4, 0.0, 1);
    seq_functor(&IntLin, 40, 4, 0.0, 2);
    seq_functor(&Cpm, 20, 3, 1e-9, 3);
}

/// `fa_k(f ⊗ g)` is `fa_k f ⊗ fa_k g` with the wires of each tick brought together.
fn tensor_functor<B: RandomMor>(be: &B, other: &str, trials: usize, k: usize, tol: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let s = random_diagram(be, &mut rng);
        let gens = s.register(be);
        let g = parse_for(&gens, source(other).unwrap()).unwrap();
        let both = Diagram::par(vec![s.diagram.clone(), g.clone()]);
        let sf = stateful::unfold(&gens, &s.diagram).unwrap();
        let sg = stateful::unfold(&gens, &g).unwrap();
        let sb = stateful::unfold(&gens, &both).unwrap();
        let blocks = |a: &dyn Fn(usize) -> usize, b: &dyn Fn(usize) -> usize| -> Vec<usize> {
            (1..=k).map(a).chain((1..=k).map(b)).collect()
        };
        let order: Vec<usize> = (0..k).flat_map(|t| [t, k + t]).collect();
        let ins = blocks(&|t| sf.in_arity(t), &|t| sg.in_arity(t));
        let outs = blocks(&|t| sf.out_arity(t), &|t| sg.out_arity(t));
        let to_blocks = be.permutation(&invert_perm(&block_perm_vec(&ins, &order)));
        let to_ticks = be.permutation(&block_perm_vec(&outs, &order));
        let fa_f = stateful::fa_at(be, &sf, k).unwrap();
        let fa_g = stateful::fa_at(be, &sg, k).unwrap();
        let expect = be.compose(&to_ticks, &be.compose(&be.tensor(&fa_f, &fa_g), &to_blocks).unwrap()).unwrap();
        let got = stateful::fa_at(be, &sb, k).unwrap();
        assert!(be.equal(&got, &expect, tol), "trial {trial}: {:?}", s.diagram);
    }
}

#[test]
fn unfolding_preserves_tensor() {
    tensor_functor(&FinSet, "parity-mealy", 40, 4, 0.0, 4);
    tensor_functor(&IntLin, "fibonacci", 40, 3, 0.0, 5);
}

#[test]
fn a_scalar_at_tick_five_is_seen_at_tick_five() {
    let half = Cpm.compose(&gate("bra0").unwrap(), &gate("mix").unwrap()).unwrap();
    let gens = Gens::new(&Cpm).with("half", half);
    let late = Diagram::gen_iota("half", 4, 0, 0);
    let none = Diagram::par(vec![]);
    assert_eq!(coinductive_equal(&gens, &late, &none, 4, 1e-9).unwrap(), Verdict::EqualUpTo(4));
    assert_eq!(coinductive_equal(&gens, &late, &none, 8, 1e-9).unwrap(), Verdict::DifferAt(5));
}

#[test]
fn storing_forever_is_discarding() {
    let gens = Gens::new(&Cpm);
    let store = parse_for(&gens, source("store-forever").unwrap()).unwrap();
    let discard = parse_for(&gens, source("discard").unwrap()).unwrap();
    assert_eq!(coinductive_equal(&gens, &store, &discard, 8, 1e-9).unwrap(), Verdict::EqualUpTo(8));
}

#[test]
fn parity_mealy_tracks_running_parity() {
    let gens = Gens::new(&FinSet);
    let d = parse_for(&gens, source("parity-mealy").unwrap()).unwrap();
    let s = stateful::unfold(&gens, &d).unwrap();
    let bits = [true, true, false, true, false, false, true];
    let fa = stateful::fa_at(&FinSet, &s, bits.len()).unwrap();
    let mut acc = false;
    let expect: Vec<bool> = bits
        .iter()
        .map(|&b| {
            acc ^= b;
            acc
        })
        .collect();
    assert_eq!(fa.eval_bits(&bits), expect);
}
