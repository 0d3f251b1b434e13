//! Finite approximations of the bundled examples against matrices built
//! directly from their circuit descriptions.

mod support;

use num_bigint::BigInt;
use streamprop::approx::{self, Mode};
use streamprop::backend::{Backend, Gens};
use streamprop::classical::IntLin;
use streamprop::cpm::{ChoiMorphism, Cpm};
use streamprop::demos::{parse_for, source};
use streamprop::stateful;
use support::{bell_closed_form, bell_oracle, cnot_oracle, fibonacci_oracle, rel};

fn cpm_fa(name: &str, k: usize) -> ChoiMorphism {
    let gens = Gens::new(&Cpm);
    let d = parse_for(&gens, source(name).unwrap()).unwrap();
    let s = stateful::unfold(&gens, &d).unwrap();
    stateful::fa_at(&Cpm, &s, k).unwrap()
}

#[test]
fn cnot_cascade_matches_dense_circuit() {
    for k in 1..=5 {
        let fa = cpm_fa("cnot-cascade", k);
        assert_eq!((fa.n_in, fa.n_out), (k, k));
        let e = rel(&fa.choi, &cnot_oracle(k));
        assert!(e <= 1e-9, "k={k}: relative error {e:e}");
    }
}

#[test]
fn bell_postselection_matches_dense_state() {
    for k in 1..=4 {
        let fa = cpm_fa("bell-postselect", k);
        assert_eq!((fa.n_in, fa.n_out), (0, k));
        assert!(rel(&bell_oracle(k), &bell_closed_form(k)) <= 1e-12);
        let e = rel(&fa.choi, &bell_oracle(k));
        assert!(e <= 1e-9, "k={k}: relative error {e:e}");
    }
}

#[test]
fn bell_postselection_is_lax_but_not_strict() {
    let gens = Gens::new(&Cpm);
    let d = parse_for(&gens, source("bell-postselect").unwrap()).unwrap();
    let s = approx::seq_of_diagram(&gens, &d).unwrap();
    let lax = approx::check_monotone(&Cpm, &s, 4, Mode::Lax, 1e-9).unwrap();
    assert!(lax.monotone, "{lax:?}");
    let eq = approx::check_monotone(&Cpm, &s, 4, Mode::Eq, 1e-9).unwrap();
    assert_eq!(eq.failures, vec![1, 2, 3]);
}

#[test]
fn fibonacci_from_an_impulse() {
    let gens = Gens::new(&IntLin);
    let d = parse_for(&gens, source("fibonacci").unwrap()).unwrap();
    let s = stateful::unfold(&gens, &d).unwrap();
    let fa = stateful::fa_at(&IntLin, &s, 6).unwrap();
    let input: Vec<BigInt> = [1, 0, 0, 0, 0, 0].map(BigInt::from).to_vec();
    let out = fa.apply(&input);
    assert_eq!(out, fibonacci_oracle(&[1, 0, 0, 0, 0, 0]));
    assert_eq!(out, [0, 1, 1, 2, 3, 5].map(BigInt::from).to_vec());
    assert_eq!(IntLin.dom(&fa), 6);
}
