//! Kraus decompositions, Stinespring dilations and shadows.

use super::linalg::{self, dim, frob, CMat, C64, ZERO};
use super::order::is_cp;
use super::ChoiMorphism;
use crate::backend::{BResult, BackendError};

pub const KRAUS_CUTOFF: f64 = 1e-10;

/// Kraus operators `d_out × d_in` from the eigendecomposition of the Choi matrix.
pub fn kraus_of(f: &ChoiMorphism) -> BResult<Vec<CMat>> {
    let scale = frob(&f.choi).max(1.0);
    if f.choi.nrows() <= 256 && !is_cp(f) {
        return Err(BackendError::NotCP);
    }
    let (_, v) = linalg::psd_factor(&f.choi, KRAUS_CUTOFF * scale);
    let (din, dout) = (dim(f.n_in), dim(f.n_out));
    Ok((0..v.ncols())
        .map(|c| {
            let col: Vec<C64> = v.column(c).iter().copied().collect();
            linalg::vec_to_op(&col, din, dout)
        })
        .collect())
}

/// `V = Σᵢ Kᵢ ⊗ |i⟩` as an operator `d_in → d_out · 2^aux`, auxiliary register
/// last and padded to a power of two.
pub fn stinespring_op(f: &ChoiMorphism) -> BResult<(CMat, usize)> {
    let ops = kraus_of(f)?;
    let (din, dout) = (dim(f.n_in), dim(f.n_out));
    let r = ops.len().max(1);
    let aux = r.next_power_of_two().trailing_zeros() as usize;
    let de = dim(aux);
    let mut v = CMat::zeros(dout * de, din);
    for (e, k) in ops.iter().enumerate() {
        for o in 0..dout {
            for i in 0..din {
                v[(o * de + e, i)] = k[(o, i)];
            }
        }
    }
    Ok((v, aux))
}

pub fn stinespring_purify(f: &ChoiMorphism) -> BResult<(ChoiMorphism, usize)> {
    let (v, aux) = stinespring_op(f)?;
    Ok((ChoiMorphism::from_pure(f.n_in, f.n_out + aux, &v), aux))
}

/// The single Kraus operator of a pure map, or `None` for the zero map.
pub fn pure_op(f: &ChoiMorphism) -> BResult<Option<CMat>> {
    let ops = kraus_of(f)?;
    match ops.len() {
        0 => Ok(None),
        1 => Ok(Some(ops.into_iter().next().unwrap())),
        _ => Err(BackendError::NotPure),
    }
}

/// Idempotent causal channel on the last `f.n_out - split` output qubits that
/// fixes the image of `f` there.
pub fn shadow_of_pure(f: &ChoiMorphism, split: usize) -> BResult<ChoiMorphism> {
    assert!(split <= f.n_out);
    let q1 = f.n_out - split;
    let d1 = dim(q1);
    let Some(op) = pure_op(f)? else {
        return Ok(ChoiMorphism::new(q1, q1, CMat::zeros(d1 * d1, d1 * d1)));
    };
    let rho = &op * op.adjoint();
    let reduced = linalg::partial_trace_head(&rho, split, q1);
    let (vals, vecs) = linalg::hermitian_eigen(&reduced);
    let top = vals.iter().cloned().fold(0.0, f64::max);
    // descending, so the image vectors come first
    let mut order: Vec<usize> = (0..d1).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let k = order.iter().filter(|&&i| vals[i] > KRAUS_CUTOFF * top.max(1e-300)).count();
    let beta: Vec<Vec<C64>> = order.iter().map(|&i| vecs.column(i).iter().copied().collect()).collect();
    // P βᵢ = βᵢ ⊗ β₁ (i ≤ k), β₁ ⊗ βᵢ (i > k)
    let mut p = CMat::zeros(d1 * d1, d1);
    for (i, bi) in beta.iter().enumerate() {
        let (x, y) = if i < k { (bi, &beta[0]) } else { (&beta[0], bi) };
        for u in 0..d1 {
            for w in 0..d1 {
                let amp = x[u] * y[w];
                if amp == ZERO {
                    continue;
                }
                for c in 0..d1 {
                    p[(u * d1 + w, c)] += amp * bi[c].conj();
                }
            }
        }
    }
    // π = (id ⊗ Tr) ∘ P: Kraus operators are the slices ⟨w| on the second factor
    let kraus: Vec<CMat> = (0..d1)
        .map(|w| CMat::from_fn(d1, d1, |u, c| p[(u * d1 + w, c)]))
        .collect();
    Ok(ChoiMorphism::from_kraus(q1, q1, &kraus))
}
