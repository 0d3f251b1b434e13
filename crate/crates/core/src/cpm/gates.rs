//! The fixed qubit gate table.

use super::linalg::{CMat, C64};
use super::{permutation_op, ChoiMorphism};

pub const NAMES: [&str; 8] = ["ket0", "bra0", "discard", "mix", "bellpair", "cnot", "swap", "measure"];

fn real(rows: usize, cols: usize, v: &[f64]) -> CMat {
    CMat::from_row_slice(rows, cols, &v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
}

pub fn cnot_unitary() -> CMat {
    real(4, 4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.])
}

pub fn gate(name: &str) -> Option<ChoiMorphism> {
    Some(match name {
        "ket0" => ChoiMorphism::new(0, 1, real(2, 2, &[1., 0., 0., 0.])),
        "bra0" => ChoiMorphism::new(1, 0, real(2, 2, &[1., 0., 0., 0.])),
        "discard" => ChoiMorphism::new(1, 0, CMat::identity(2, 2)),
        "mix" => ChoiMorphism::new(0, 1, real(2, 2, &[0.5, 0., 0., 0.5])),
        "bellpair" => ChoiMorphism::new(
            0,
            2,
            real(4, 4, &[0.5, 0., 0., 0.5, 0., 0., 0., 0., 0., 0., 0., 0., 0.5, 0., 0., 0.5]),
        ),
        "cnot" => ChoiMorphism::from_pure(2, 2, &cnot_unitary()),
        "swap" => ChoiMorphism::from_pure(2, 2, &permutation_op(&[1, 0])),
        "measure" => {
            let p0 = real(2, 2, &[1., 0., 0., 0.]);
            let p1 = real(2, 2, &[0., 0., 0., 1.]);
            ChoiMorphism::from_kraus(1, 1, &[p0, p1])
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Backend;
    use crate::cpm::Cpm;

    #[test]
    fn bell_pair_matrix() {
        let b = gate("bellpair").unwrap();
        let expect = [[1., 0., 0., 1.], [0., 0., 0., 0.], [0., 0., 0., 0.], [1., 0., 0., 1.]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(b.choi[(i, j)], C64::new(expect[i][j] / 2.0, 0.0));
            }
        }
    }

    #[test]
    fn cnot_acts_on_basis() {
        // |x y⟩ ↦ |x, x⊕y⟩
        let u = cnot_unitary();
        for x in 0..2 {
            for y in 0..2 {
                let inp = 2 * x + y;
                let out = 2 * x + (x ^ y);
                assert_eq!(u[(out, inp)], C64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn half_scalar() {
        let c = Cpm;
        let s = c.compose(&gate("bra0").unwrap(), &gate("mix").unwrap()).unwrap();
        assert!((s.scalar().unwrap() - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn discarding_half_a_bell_pair_gives_mix() {
        let c = Cpm;
        let d = c.tensor(&c.discard(1), &c.identity(1));
        let r = c.compose(&d, &gate("bellpair").unwrap()).unwrap();
        assert!(c.equal(&r, &gate("mix").unwrap(), 1e-12));
    }

    #[test]
    fn cnot_is_an_involution() {
        let c = Cpm;
        let g = gate("cnot").unwrap();
        assert!(c.equal(&c.compose(&g, &g).unwrap(), &c.identity(2), 1e-12));
    }

    #[test]
    fn causality_of_gates() {
        let c = Cpm;
        for name in ["ket0", "discard", "mix", "bellpair", "cnot", "swap", "measure"] {
            assert!(c.is_causal(&gate(name).unwrap(), 1e-9), "{name}");
        }
        assert!(!c.is_causal(&gate("bra0").unwrap(), 1e-9));
    }

    #[test]
    fn idempotence_of_gates() {
        let c = Cpm;
        assert!(c.is_idempotent(&gate("measure").unwrap(), 1e-9).unwrap());
        assert!(!c.is_idempotent(&gate("cnot").unwrap(), 1e-9).unwrap());
        assert!(c.is_idempotent(&c.identity(2), 1e-9).unwrap());
    }
}
