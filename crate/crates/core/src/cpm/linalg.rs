//! Dense kernels on qubit-indexed complex matrices.
//!
//! Indices are big-endian: qubit 0 is the most significant bit.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn dim(qubits: usize) -> usize {
    1usize << qubits
}

/// Number of qubits of a power-of-two dimension.
pub fn qubits_of(d: usize) -> usize {
    assert!(d.is_power_of_two(), "dimension {d} is not a power of two");
    d.trailing_zeros() as usize
}

pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let diff = a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    diff <= tol * frob(a).max(frob(b)).max(1e-3)
}

/// Index map for a qubit reordering: `order[j]` is the old qubit placed at
/// new position `j`. Returns `old_index[new_index]`.
fn index_map(order: &[usize]) -> Vec<usize> {
    let n = order.len();
    let mut map = vec![0usize; 1 << n];
    for (x, slot) in map.iter_mut().enumerate() {
        let mut old = 0usize;
        for (j, &q) in order.iter().enumerate() {
            let bit = (x >> (n - 1 - j)) & 1;
            old |= bit << (n - 1 - q);
        }
        *slot = old;
    }
    map
}

/// Conjugate a square matrix on `order.len()` qubits by a qubit reordering.
pub fn permute_qubits(m: &CMat, order: &[usize]) -> CMat {
    if order.iter().enumerate().all(|(i, &q)| i == q) {
        return m.clone();
    }
    let map = index_map(order);
    let d = map.len();
    assert_eq!(m.nrows(), d);
    CMat::from_fn(d, d, |i, j| m[(map[i], map[j])])
}

/// Reorder the row qubits of a (possibly rectangular) matrix.
pub fn permute_rows(m: &CMat, order: &[usize]) -> CMat {
    let map = index_map(order);
    assert_eq!(m.nrows(), map.len());
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(map[i], j)])
}

pub fn permute_cols(m: &CMat, order: &[usize]) -> CMat {
    let map = index_map(order);
    assert_eq!(m.ncols(), map.len());
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, map[j])])
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// `R[(r,c),(r',c')] = Σ_{s,s'} F[(r,s),(r',s')] G[(s,c),(s',c')]`
/// where `F` lives on `rq + sq` qubits and `G` on `sq + tq` qubits.
pub fn contract_tail(f: &CMat, rq: usize, sq: usize, g: &CMat, tq: usize) -> CMat {
    let (rd, sd, td) = (dim(rq), dim(sq), dim(tq));
    assert_eq!(f.nrows(), rd * sd);
    assert_eq!(g.nrows(), sd * td);
    let mut out = CMat::zeros(rd * td, rd * td);
    let fs = f.as_slice();
    let gs = g.as_slice();
    let fr = rd * sd;
    let gr = sd * td;
    let or = rd * td;
    let os = out.as_mut_slice();
    for rp in 0..rd {
        for sp in 0..sd {
            let fcol = (rp * sd + sp) * fr;
            for r in 0..rd {
                for s in 0..sd {
                    let v = fs[fcol + r * sd + s];
                    if v.re == 0.0 && v.im == 0.0 {
                        continue;
                    }
                    for cp in 0..td {
                        let gcol = (sp * td + cp) * gr + s * td;
                        let ocol = (rp * td + cp) * or + r * td;
                        for c in 0..td {
                            os[ocol + c] += v * gs[gcol + c];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Trace out the last `tq` qubits of a square matrix on `kq + tq` qubits.
pub fn partial_trace_tail(m: &CMat, kq: usize, tq: usize) -> CMat {
    let (kd, td) = (dim(kq), dim(tq));
    CMat::from_fn(kd, kd, |i, j| (0..td).map(|t| m[(i * td + t, j * td + t)]).sum())
}

/// Trace out the first `tq` qubits.
pub fn partial_trace_head(m: &CMat, tq: usize, kq: usize) -> CMat {
    let (td, kd) = (dim(tq), dim(kq));
    CMat::from_fn(kd, kd, |i, j| (0..td).map(|t| m[(t * kd + i, t * kd + j)]).sum())
}

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let e = hermitize(m).symmetric_eigen();
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(m.nrows(), idx.len(), |r, c| e.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    hermitian_eigen(m).0[0]
}

/// Pivoted Cholesky of a PSD matrix: `m ≈ L L†` with `L` of shape `n × r`,
/// stopping once every remaining diagonal entry is `<= tol`.
pub fn pivoted_cholesky(m: &CMat, tol: f64) -> CMat {
    let n = m.nrows();
    let mut diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut cols: Vec<Vec<C64>> = Vec::new();
    let mut used = vec![false; n];
    while let Some((p, &dp)) = diag.iter().enumerate().filter(|(i, _)| !used[*i]).max_by(|a, b| a.1.total_cmp(b.1)) {
        if dp <= tol {
            break;
        }
        used[p] = true;
        let s = dp.sqrt();
        let mut col: Vec<C64> = (0..n).map(|i| m[(i, p)]).collect();
        for prev in &cols {
            let c = prev[p].conj();
            for i in 0..n {
                col[i] -= prev[i] * c;
            }
        }
        for v in col.iter_mut() {
            *v /= s;
        }
        for i in 0..n {
            diag[i] -= col[i].norm_sqr();
        }
        cols.push(col);
    }
    CMat::from_fn(n, cols.len(), |i, j| cols[j][i])
}

/// Eigenpairs of a PSD matrix with eigenvalue above `cutoff`, computed from a
/// low-rank factor. Columns of the returned matrix are `√λ`-scaled
/// eigenvectors, so `m ≈ V V†`.
pub fn psd_factor(m: &CMat, cutoff: f64) -> (Vec<f64>, CMat) {
    let l = pivoted_cholesky(&hermitize(m), cutoff * 1e-3);
    if l.ncols() == 0 {
        return (Vec::new(), CMat::zeros(m.nrows(), 0));
    }
    let gram = l.adjoint() * &l;
    let (vals, w) = hermitian_eigen(&gram);
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > cutoff).rev().collect();
    let lw = &l * &w;
    let v = CMat::from_fn(m.nrows(), keep.len(), |r, c| lw[(r, keep[c])]);
    (keep.iter().map(|&i| vals[i]).collect(), v)
}

/// Orthonormal basis of the span of the columns (modified Gram-Schmidt, two passes).
pub fn orthonormalize(v: &CMat, tol: f64) -> CMat {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for j in 0..v.ncols() {
        let mut x: Vec<C64> = v.column(j).iter().copied().collect();
        let n0 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for q in &basis {
                let dot: C64 = q.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi -= dot * qi;
                }
            }
        }
        let n = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > tol * n0.max(1e-300) && n > 1e-300 {
            basis.push(x.into_iter().map(|z| z / n).collect());
        }
    }
    CMat::from_fn(v.nrows(), basis.len(), |i, j| basis[j][i])
}

/// Moore-Penrose pseudo-inverse with relative singular-value cutoff.
pub fn pinv(m: &CMat, rcond: f64) -> CMat {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMat::zeros(m.ncols(), m.nrows());
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    svd.pseudo_inverse(rcond * smax.max(1e-300)).expect("svd with u and v")
}

/// `|v⟩⟨v|`-style Choi vector of an operator `k: d_in → d_out`:
/// `v[i·d_out + o] = k[o, i]`.
pub fn op_to_vec(k: &CMat) -> Vec<C64> {
    let (dout, din) = k.shape();
    let mut v = vec![ZERO; din * dout];
    for i in 0..din {
        for o in 0..dout {
            v[i * dout + o] = k[(o, i)];
        }
    }
    v
}

pub fn vec_to_op(v: &[C64], din: usize, dout: usize) -> CMat {
    CMat::from_fn(dout, din, |o, i| v[i * dout + o])
}

/// `Σ_k |k⟩⟩⟨⟨k|` for a list of operators of equal shape.
pub fn choi_of_ops(ops: &[CMat], din: usize, dout: usize) -> CMat {
    let n = din * dout;
    let mut j = CMat::zeros(n, n);
    for k in ops {
        let v = nalgebra::DVector::from_vec(op_to_vec(k));
        j += &v * v.adjoint();
    }
    j
}
