//! Causal connecting maps between two purifications, by Dykstra's alternating
//! projections between an affine subspace and the PSD cone.

use super::linalg::{self, dim, frob, CMat, C64};
use super::{ChoiMorphism, Cpm};
use crate::backend::{BResult, Backend, BackendError};

pub const MAX_ITER: usize = 10_000;
pub const TARGET: f64 = 1e-7;

fn unvec(x: &[C64], d: usize) -> CMat {
    CMat::from_column_slice(d, d, x)
}

fn psd_project(m: &CMat) -> CMat {
    let (vals, vecs) = linalg::hermitian_eigen(m);
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for (i, &l) in vals.iter().enumerate() {
        if l > 0.0 {
            let v = vecs.column(i);
            out += v * v.adjoint() * C64::new(l, 0.0);
        }
    }
    out
}

struct Affine {
    m: CMat,
    pinv: CMat,
    y: nalgebra::DVector<C64>,
}

impl Affine {
    fn project(&self, x: &nalgebra::DVector<C64>) -> nalgebra::DVector<C64> {
        let r = &self.m * x - &self.y;
        x - &self.pinv * r
    }

    fn residual(&self, x: &nalgebra::DVector<C64>) -> f64 {
        (&self.m * x - &self.y).norm() / self.y.norm().max(1.0)
    }
}

/// Find a causal `c: X2 → X1` with `(id_B ⊗ c) ∘ p2 = p1`, where the first
/// `shared` outputs of `p1` and `p2` form `B`.
pub fn connect_causal(p1: &ChoiMorphism, p2: &ChoiMorphism, shared: usize) -> BResult<ChoiMorphism> {
    if p1.n_in != p2.n_in || p1.n_out < shared || p2.n_out < shared {
        return Err(BackendError::ArityMismatch { expected: p1.n_in, found: p2.n_in });
    }
    let x1 = p1.n_out - shared;
    let x2 = p2.n_out - shared;
    let dc = dim(x1 + x2);
    let n = dc * dc;
    let target = p1.choi.as_slice();
    let rows_eq = target.len();
    let d2 = dim(x2);
    let rows = rows_eq + d2 * d2;
    let mut m = CMat::zeros(rows, n);
    for col in 0..n {
        let mut e = CMat::zeros(dc, dc);
        e[(col % dc, col / dc)] = C64::new(1.0, 0.0);
        let c = ChoiMorphism::new(x2, x1, e.clone());
        let img = Cpm.apply_at(p2, &c, shared)?;
        for (r, v) in img.choi.as_slice().iter().enumerate() {
            m[(r, col)] = *v;
        }
        let tp = linalg::partial_trace_tail(&e, x2, x1);
        for (r, v) in tp.as_slice().iter().enumerate() {
            m[(rows_eq + r, col)] = *v;
        }
    }
    let mut y = nalgebra::DVector::zeros(rows);
    for (r, v) in target.iter().enumerate() {
        y[r] = *v;
    }
    let eye = CMat::identity(d2, d2);
    for (r, v) in eye.as_slice().iter().enumerate() {
        y[rows_eq + r] = *v;
    }
    let aff = Affine { pinv: linalg::pinv(&m, 1e-10), m, y };

    let mut x = nalgebra::DVector::<C64>::zeros(n);
    let mut p = nalgebra::DVector::<C64>::zeros(n);
    let mut q = nalgebra::DVector::<C64>::zeros(n);
    let mut res = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let yk = aff.project(&(&x + &p));
        p = &x + &p - &yk;
        let h = linalg::hermitize(&unvec((&yk + &q).as_slice(), dc));
        let xk = nalgebra::DVector::from_column_slice(psd_project(&h).as_slice());
        q = &yk + &q - &xk;
        x = xk;
        res = aff.residual(&x);
        if res < TARGET {
            break;
        }
    }
    let c = ChoiMorphism::new(x2, x1, unvec(x.as_slice(), dc));
    let back = Cpm.apply_at(p2, &c, shared)?;
    let scale = frob(&p1.choi).max(1.0);
    let err = frob(&(&back.choi - &p1.choi)) / scale;
    let tp = linalg::partial_trace_tail(&c.choi, x2, x1);
    let tp_err = frob(&(tp - eye));
    let worst = err.max(tp_err).max(res);
    if worst > TARGET * 10.0 {
        return Err(BackendError::NoSolution(worst));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpm::gates::gate;

    #[test]
    fn equal_purifications_connect() {
        let (p, _) = crate::cpm::purify::stinespring_purify(&gate("measure").unwrap()).unwrap();
        let c = connect_causal(&p, &p, 1).unwrap();
        assert!(Cpm.is_causal(&c, 1e-6));
        let back = Cpm.apply_at(&p, &c, 1).unwrap();
        assert!(Cpm.equal(&back, &p, 1e-6));
    }

    #[test]
    fn extra_ancilla_is_absorbed() {
        let (p1, _) = crate::cpm::purify::stinespring_purify(&gate("measure").unwrap()).unwrap();
        let p2 = Cpm.tensor(&p1, &gate("ket0").unwrap());
        let c = connect_causal(&p1, &p2, 1).unwrap();
        assert_eq!((c.n_in, c.n_out), (2, 1));
        assert!(Cpm.is_causal(&c, 1e-6));
        assert!(Cpm.equal(&Cpm.apply_at(&p2, &c, 1).unwrap(), &p1, 1e-6));
    }
}
