//! Loewner and lax orders on Choi matrices.

use super::linalg::{self, frob, CMat, C64};
use super::ChoiMorphism;

pub const CP_TOL: f64 = 1e-9;
/// Eigenvalues of a unit-norm Choi matrix below this count as zero. Kept far
/// below the residual tolerance: tensor products of well-conditioned maps
/// have genuinely tiny eigenvalues, and dropping them invents range defects.
pub const RANGE_CUTOFF: f64 = 1e-12;
/// Largest out-of-range residual, relative to the norm of `f`, still
/// accepted as contained.
pub const RANGE_TOL: f64 = 1e-8;

pub fn is_cp(f: &ChoiMorphism) -> bool {
    let scale = frob(&f.choi).max(1.0);
    linalg::min_eigenvalue(&f.choi) >= -CP_TOL * scale
}

/// `g − f` completely positive.
pub fn loewner_leq(f: &ChoiMorphism, g: &ChoiMorphism) -> bool {
    f.n_in == g.n_in && f.n_out == g.n_out && is_cp(&g.sub(f))
}

/// Orthonormal basis of the numerical range of a PSD matrix.
pub fn range_basis(m: &CMat, cutoff: f64) -> CMat {
    let (_, v) = linalg::psd_factor(m, cutoff);
    linalg::orthonormalize(&v, 1e-6)
}

/// `f ⪯ g`: the range of `choi(f)` lies in the range of `choi(g)`.
pub fn lax_leq(f: &ChoiMorphism, g: &ChoiMorphism) -> bool {
    if f.n_in != g.n_in || f.n_out != g.n_out {
        return false;
    }
    let nf = frob(&f.choi);
    let ng = frob(&g.choi);
    if nf == 0.0 {
        return true;
    }
    if ng == 0.0 {
        return false;
    }
    let a = &f.choi * C64::new(1.0 / nf, 0.0);
    let b = &g.choi * C64::new(1.0 / ng, 0.0);
    let q = range_basis(&b, RANGE_CUTOFF);
    if q.ncols() == b.nrows() {
        return true;
    }
    let proj = &q * (q.adjoint() * &a);
    frob(&(a - proj)) <= RANGE_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpm::gates::gate;

    fn state(v: [f64; 4]) -> ChoiMorphism {
        ChoiMorphism::state(1, CMat::from_row_slice(2, 2, &v.map(|x| C64::new(x, 0.0))))
    }

    #[test]
    fn lax_examples() {
        let zero = gate("ket0").unwrap();
        let mix = gate("mix").unwrap();
        assert!(lax_leq(&zero, &zero));
        assert!(lax_leq(&zero, &mix));
        assert!(!lax_leq(&mix, &zero));
        assert!(!lax_leq(&state([0., 0., 0., 1.]), &zero));
    }

    #[test]
    fn loewner_examples() {
        let half_zero = gate("ket0").unwrap().scaled(0.5);
        let mix = gate("mix").unwrap();
        assert!(loewner_leq(&half_zero, &mix));
        assert!(loewner_leq(&mix, &mix));
        assert!(!loewner_leq(&gate("ket0").unwrap(), &mix));
    }

    #[test]
    fn transpose_is_not_cp() {
        // Choi of the transpose map is the swap operator.
        let t = ChoiMorphism::new(1, 1, crate::cpm::permutation_op(&[1, 0]));
        assert!(!is_cp(&t));
    }
}
