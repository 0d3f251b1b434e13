//! Completely positive maps on qubit registers, represented by Choi matrices.
//!
//! Convention: `J[(i,o),(j,o')] = ⟨o| f(|i⟩⟨j|) |o'⟩`, input qubits first,
//! big-endian indices.

pub mod connect;
pub mod gates;
pub mod linalg;
pub mod order;
pub mod purify;
pub mod reconstruct;

use serde_json::{json, Value};

use crate::backend::{check_arity, BResult, Backend, BackendError, Capabilities};
use linalg::{close, contract_tail, dim, kron, permute_qubits, CMat, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMorphism {
    pub n_in: usize,
    pub n_out: usize,
    pub choi: CMat,
}

impl ChoiMorphism {
    pub fn new(n_in: usize, n_out: usize, choi: CMat) -> Self {
        let d = dim(n_in + n_out);
        assert_eq!(choi.shape(), (d, d), "choi shape for {n_in} -> {n_out}");
        ChoiMorphism { n_in, n_out, choi }
    }

    /// The channel `ρ ↦ Σ K ρ K†`.
    pub fn from_kraus(n_in: usize, n_out: usize, ops: &[CMat]) -> Self {
        ChoiMorphism::new(n_in, n_out, linalg::choi_of_ops(ops, dim(n_in), dim(n_out)))
    }

    pub fn from_pure(n_in: usize, n_out: usize, op: &CMat) -> Self {
        ChoiMorphism::from_kraus(n_in, n_out, std::slice::from_ref(op))
    }

    /// A state on `n` qubits, i.e. a map `0 → n`.
    pub fn state(n: usize, rho: CMat) -> Self {
        ChoiMorphism::new(0, n, rho)
    }

    pub fn scaled(&self, s: f64) -> Self {
        ChoiMorphism::new(self.n_in, self.n_out, &self.choi * C64::new(s, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        ChoiMorphism::new(self.n_in, self.n_out, &self.choi - &other.choi)
    }

    /// For a map `0 → 0`, its value.
    pub fn scalar(&self) -> Option<C64> {
        (self.n_in == 0 && self.n_out == 0).then(|| self.choi[(0, 0)])
    }

    /// Apply to an input density matrix.
    pub fn apply(&self, rho: &CMat) -> CMat {
        let state = ChoiMorphism::state(self.n_in, rho.clone());
        compose(self, &state).expect("input dimension").choi
    }
}

pub fn compose(g: &ChoiMorphism, f: &ChoiMorphism) -> BResult<ChoiMorphism> {
    check_arity(f.n_out, g.n_in)?;
    let c = contract_tail(&f.choi, f.n_in, f.n_out, &g.choi, g.n_out);
    Ok(ChoiMorphism::new(f.n_in, g.n_out, c))
}

pub fn tensor(f: &ChoiMorphism, g: &ChoiMorphism) -> ChoiMorphism {
    let k = kron(&f.choi, &g.choi);
    let (fi, fo, gi, go) = (f.n_in, f.n_out, g.n_in, g.n_out);
    // (in_f, out_f, in_g, out_g) → (in_f, in_g, out_f, out_g)
    let order: Vec<usize> = (0..fi)
        .chain(fi + fo..fi + fo + gi)
        .chain(fi..fi + fo)
        .chain(fi + fo + gi..fi + fo + gi + go)
        .collect();
    ChoiMorphism::new(fi + gi, fo + go, permute_qubits(&k, &order))
}

/// Qubit reordering as a unitary: input qubit `i` lands at output `perm[i]`.
pub fn permutation_op(perm: &[usize]) -> CMat {
    let n = perm.len();
    let d = dim(n);
    let mut u = CMat::zeros(d, d);
    for x in 0..d {
        let mut y = 0usize;
        for (i, &p) in perm.iter().enumerate() {
            let bit = (x >> (n - 1 - i)) & 1;
            y |= bit << (n - 1 - p);
        }
        u[(y, x)] = linalg::ONE;
    }
    u
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Cpm;

impl Backend for Cpm {
    type Mor = ChoiMorphism;

    fn name(&self) -> &'static str {
        "cpm"
    }

    fn caps(&self) -> Capabilities {
        Capabilities { has_lax_order: true, has_purification: true, has_shadows: true, all_causal: false }
    }

    fn dom(&self, f: &ChoiMorphism) -> usize {
        f.n_in
    }

    fn cod(&self, f: &ChoiMorphism) -> usize {
        f.n_out
    }

    fn identity(&self, n: usize) -> ChoiMorphism {
        ChoiMorphism::from_pure(n, n, &CMat::identity(dim(n), dim(n)))
    }

    fn permutation(&self, perm: &[usize]) -> ChoiMorphism {
        ChoiMorphism::from_pure(perm.len(), perm.len(), &permutation_op(perm))
    }

    fn discard(&self, n: usize) -> ChoiMorphism {
        ChoiMorphism::new(n, 0, CMat::identity(dim(n), dim(n)))
    }

    fn compose(&self, g: &ChoiMorphism, f: &ChoiMorphism) -> BResult<ChoiMorphism> {
        compose(g, f)
    }

    fn tensor(&self, f: &ChoiMorphism, g: &ChoiMorphism) -> ChoiMorphism {
        tensor(f, g)
    }

    fn apply_at(&self, f: &ChoiMorphism, g: &ChoiMorphism, offset: usize) -> BResult<ChoiMorphism> {
        let (fi, fo) = (f.n_in, f.n_out);
        if offset + g.n_in > fo {
            return Err(BackendError::ArityMismatch { expected: fo, found: offset + g.n_in });
        }
        let s = g.n_in;
        let b1 = fo - offset - s;
        // f qubits: (in, b0, s, b1) → (in, b0, b1, s)
        let order: Vec<usize> = (0..fi + offset)
            .chain(fi + offset + s..fi + fo)
            .chain(fi + offset..fi + offset + s)
            .collect();
        let fp = permute_qubits(&f.choi, &order);
        let r = contract_tail(&fp, fi + offset + b1, s, &g.choi, g.n_out);
        // (in, b0, b1, t) → (in, b0, t, b1)
        let t = g.n_out;
        let head = fi + offset;
        let back: Vec<usize> = (0..head)
            .chain(head + b1..head + b1 + t)
            .chain(head..head + b1)
            .collect();
        Ok(ChoiMorphism::new(fi, offset + t + b1, permute_qubits(&r, &back)))
    }

    fn equal(&self, f: &ChoiMorphism, g: &ChoiMorphism, tol: f64) -> bool {
        f.n_in == g.n_in && f.n_out == g.n_out && close(&f.choi, &g.choi, tol)
    }

    fn is_causal(&self, f: &ChoiMorphism, tol: f64) -> bool {
        let t = linalg::partial_trace_tail(&f.choi, f.n_in, f.n_out);
        close(&t, &CMat::identity(dim(f.n_in), dim(f.n_in)), tol.max(1e-9))
    }

    fn leq(&self, f: &ChoiMorphism, g: &ChoiMorphism, _tol: f64) -> BResult<bool> {
        check_arity(f.n_in, g.n_in)?;
        check_arity(f.n_out, g.n_out)?;
        Ok(order::lax_leq(f, g))
    }

    fn purify(&self, f: &ChoiMorphism) -> BResult<(ChoiMorphism, usize)> {
        purify::stinespring_purify(f)
    }

    fn connect_causal(&self, p1: &ChoiMorphism, p2: &ChoiMorphism, shared: usize, _tol: f64) -> BResult<ChoiMorphism> {
        connect::connect_causal(p1, p2, shared)
    }

    fn generator(&self, name: &str) -> Option<ChoiMorphism> {
        gates::gate(name)
    }

    fn generator_names(&self) -> Vec<String> {
        gates::NAMES.iter().map(|s| s.to_string()).collect()
    }

    fn to_json(&self, f: &ChoiMorphism) -> Value {
        let rows: Vec<Value> = (0..f.choi.nrows())
            .map(|i| Value::Array((0..f.choi.ncols()).map(|j| json!([f.choi[(i, j)].re, f.choi[(i, j)].im])).collect()))
            .collect();
        json!({ "n_in": f.n_in, "n_out": f.n_out, "choi": rows })
    }

    fn from_json(&self, v: &Value) -> BResult<ChoiMorphism> {
        let bad = |m: &str| BackendError::Payload(m.to_string());
        let n_in = v["n_in"].as_u64().ok_or_else(|| bad("n_in"))? as usize;
        let n_out = v["n_out"].as_u64().ok_or_else(|| bad("n_out"))? as usize;
        let rows = v["choi"].as_array().ok_or_else(|| bad("choi"))?;
        let d = dim(n_in + n_out);
        if rows.len() != d {
            return Err(bad("choi row count"));
        }
        let mut m = CMat::zeros(d, d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == d).ok_or_else(|| bad("choi row"))?;
            for (j, z) in row.iter().enumerate() {
                let re = z[0].as_f64().ok_or_else(|| bad("entry"))?;
                let im = z[1].as_f64().ok_or_else(|| bad("entry"))?;
                m[(i, j)] = C64::new(re, im);
            }
        }
        Ok(ChoiMorphism::new(n_in, n_out, m))
    }

    fn reconstruct_layers(
        &self,
        fs: &[ChoiMorphism],
        g_irreg: &ChoiMorphism,
        a: &[usize],
        b: &[usize],
        m_out: usize,
    ) -> BResult<Vec<ChoiMorphism>> {
        reconstruct::layers(fs, g_irreg, a, b, m_out)
    }
}
