//! Stateful layers from a finite approximation sequence, solved on Kraus
//! operators: each step finds `X` with `(id ⊗ X) ∘ W = T`, where `W` dilates
//! the previous approximation and `T` the next one.

use super::linalg::{dim, frob, kron, pinv, CMat, C64};
use super::purify::stinespring_op;
use super::ChoiMorphism;
use crate::backend::{BResult, BackendError};

pub const RESIDUAL: f64 = 1e-7;

pub fn layers(
    fs: &[ChoiMorphism],
    g_irreg: &ChoiMorphism,
    a: &[usize],
    b: &[usize],
    m_out: usize,
) -> BResult<Vec<ChoiMorphism>> {
    let n = fs.len() + 1;
    let mut out = Vec::with_capacity(n);
    let mut g_prev = CMat::from_element(1, 1, C64::new(1.0, 0.0));
    let (mut a_before, mut b_before, mut m_prev) = (0usize, 0usize, 0usize);
    for k in 0..n {
        let last = k + 1 == n;
        let target = if last { g_irreg } else { &fs[k] };
        let (t, e) = stinespring_op(target)?;
        let w = kron(&g_prev, &CMat::identity(dim(a[k]), dim(a[k])));
        let (db, dm, da) = (dim(b_before), dim(m_prev), dim(a[k]));
        let dcols = dim(a_before + a[k]);
        let rest = b[k] + if last { m_out } else { 0 } + e;
        let dr = dim(rest);
        if t.ncols() != dcols || t.nrows() != db * dr {
            return Err(BackendError::ArityMismatch { expected: db * dr, found: t.nrows() });
        }
        let mut w_hat = CMat::zeros(da * dm, db * dcols);
        let mut t_hat = CMat::zeros(dr, db * dcols);
        for beta in 0..db {
            for col in 0..dcols {
                let c = beta * dcols + col;
                for mm in 0..dm {
                    for ak in 0..da {
                        w_hat[(ak * dm + mm, c)] = w[((beta * dm + mm) * da + ak, col)];
                    }
                }
                for r in 0..dr {
                    t_hat[(r, c)] = t[(beta * dr + r, col)];
                }
            }
        }
        let x = &t_hat * pinv(&w_hat, 1e-10);
        let res = frob(&(&x * &w_hat - &t_hat));
        if res > RESIDUAL * frob(&t_hat).max(1.0) {
            return Err(BackendError::NoSolution(res));
        }
        if !last {
            out.push(ChoiMorphism::from_pure(a[k] + m_prev, b[k] + e, &x));
            g_prev = t;
            m_prev = e;
        } else {
            let de = dim(e);
            let dk = dim(b[k] + m_out);
            let kraus: Vec<CMat> = (0..de)
                .map(|ee| CMat::from_fn(dk, da * dm, |r, c| x[(r * de + ee, c)]))
                .collect();
            out.push(ChoiMorphism::from_kraus(a[k] + m_prev, b[k] + m_out, &kraus));
        }
        a_before += a[k];
        b_before += b[k];
    }
    Ok(out)
}
