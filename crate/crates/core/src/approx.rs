//! Finite approximation sequences: materialization, monotonicity, and the
//! reconstruction of a stateful sequence from them.

use serde::Serialize;
use thiserror::Error;

use crate::backend::{Backend, BackendError, Gens};
use crate::diagram::Diagram;
use crate::stateful::{self, FaChain, Layer, RegStatefulSeq, StatefulError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("sequence is not monotone at tick {0}")]
    NotMonotone(usize),
    #[error(transparent)]
    Stateful(#[from] StatefulError),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

pub type AResult<T> = Result<T, ApproxError>;

/// `f_k` explicit for `k < n`; from `n` on generated by
/// `g_irreg: A≤n → B≤n + M` followed by copies of `g_reg: (A', M) → (B', M)`,
/// with the final memory discarded.
#[derive(Clone, Debug, PartialEq)]
pub struct FinApproxSeq<M> {
    pub explicit: Vec<M>,
    pub g_irreg: M,
    pub g_reg: M,
    /// Input arities of ticks `1..=n`.
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub a_tail: usize,
    pub b_tail: usize,
    pub mem: usize,
}

impl<M: Clone> FinApproxSeq<M> {
    pub fn n(&self) -> usize {
        self.explicit.len() + 1
    }

    pub fn in_arity(&self, k: usize) -> usize {
        *self.a.get(k - 1).unwrap_or(&self.a_tail)
    }

    pub fn out_arity(&self, k: usize) -> usize {
        *self.b.get(k - 1).unwrap_or(&self.b_tail)
    }
}

impl<M: Clone> FinApproxSeq<M> {
    /// A sequence given by its first `fs.len()` entries; later ticks carry no wires.
    pub fn from_explicit<B: Backend<Mor = M>>(be: &B, fs: Vec<M>, a: Vec<usize>, b: Vec<usize>) -> Self {
        assert!(!fs.is_empty());
        let mut explicit = fs;
        let g_irreg = explicit.pop().unwrap();
        FinApproxSeq { explicit, g_irreg, g_reg: be.identity(0), a, b, a_tail: 0, b_tail: 0, mem: 0 }
    }
}

/// Materialize `f_1 … f_K`.
pub fn at_upto<B: Backend>(be: &B, s: &FinApproxSeq<B::Mor>, k_max: usize) -> AResult<Vec<B::Mor>> {
    let n = s.n();
    let mut out: Vec<B::Mor> = s.explicit.iter().take(k_max).cloned().collect();
    if k_max < n {
        return Ok(out);
    }
    let mut open = s.g_irreg.clone();
    let mut b_before: usize = s.b.iter().take(n).sum();
    out.push(be.apply_at(&open, &be.discard(s.mem), b_before)?);
    let layer = be.compose(&s.g_reg, &be.swap(s.mem, s.a_tail))?;
    for _ in n + 1..=k_max {
        let widened = be.tensor(&open, &be.identity(s.a_tail));
        open = be.apply_at(&widened, &layer, b_before)?;
        b_before += s.b_tail;
        out.push(be.apply_at(&open, &be.discard(s.mem), b_before)?);
    }
    Ok(out)
}

pub fn at<B: Backend>(be: &B, s: &FinApproxSeq<B::Mor>, k: usize) -> AResult<B::Mor> {
    assert!(k >= 1, "ticks start at 1");
    Ok(at_upto(be, s, k)?.pop().unwrap())
}

/// Package the finite approximations of a stateful sequence.
pub fn from_stateful<B: Backend>(be: &B, s: &RegStatefulSeq<B::Mor>) -> AResult<FinApproxSeq<B::Mor>> {
    let n = s.prefix_len();
    let mut chain = FaChain::new(be, s);
    let mut explicit = Vec::new();
    for _ in 1..n {
        chain.step()?;
        explicit.push(chain.current_fa()?);
    }
    let g_irreg = chain.step()?.clone();
    Ok(FinApproxSeq {
        explicit,
        g_irreg,
        g_reg: s.reg.f.clone(),
        a: (1..=n).map(|k| s.in_arity(k)).collect(),
        b: (1..=n).map(|k| s.out_arity(k)).collect(),
        a_tail: s.reg.a,
        b_tail: s.reg.b,
        mem: s.reg.m_in,
    })
}

pub fn seq_of_diagram<B: Backend>(gens: &Gens<B>, d: &Diagram) -> AResult<FinApproxSeq<B::Mor>> {
    let s = stateful::unfold(gens, d)?;
    from_stateful(gens.backend, &s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Eq,
    Lax,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneVerdict {
    pub monotone: bool,
    pub mode: Mode,
    pub first_failure: Option<usize>,
    /// Every `k` whose step fails.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<usize>,
}

/// Compare `(id ⊗ ⊤_{B_{k+1}}) ∘ f_{k+1}` with `f_k ⊗ ⊤_{A_{k+1}}` for `k < K`:
/// the later approximation must refine the earlier one.
pub fn check_monotone<B: Backend>(
    be: &B,
    s: &FinApproxSeq<B::Mor>,
    k_max: usize,
    mode: Mode,
    tol: f64,
) -> AResult<MonotoneVerdict> {
    let fs = at_upto(be, s, k_max)?;
    check_monotone_list(be, &fs, |k| s.in_arity(k), |k| s.out_arity(k), mode, tol)
}

pub fn check_monotone_list<B: Backend>(
    be: &B,
    fs: &[B::Mor],
    a: impl Fn(usize) -> usize,
    b: impl Fn(usize) -> usize,
    mode: Mode,
    tol: f64,
) -> AResult<MonotoneVerdict> {
    let mut failures = Vec::new();
    let mut b_upto = 0;
    for k in 1..fs.len() {
        b_upto += b(k);
        let later = be.apply_at(&fs[k], &be.discard(b(k + 1)), b_upto)?;
        let earlier = be.tensor(&fs[k - 1], &be.discard(a(k + 1)));
        let ok = match mode {
            Mode::Eq => be.equal(&later, &earlier, tol),
            Mode::Lax => be.leq(&later, &earlier, tol)?,
        };
        if !ok {
            failures.push(k);
        }
    }
    Ok(MonotoneVerdict { monotone: failures.is_empty(), mode, first_failure: failures.first().copied(), failures })
}

/// A stateful sequence whose finite approximations are those of `s`.
pub fn reconstruct<B: Backend>(be: &B, s: &FinApproxSeq<B::Mor>, tol: f64) -> AResult<RegStatefulSeq<B::Mor>> {
    let n = s.n();
    let mode = if be.caps().all_causal { Mode::Eq } else { Mode::Lax };
    let v = check_monotone(be, s, n, mode, tol)?;
    if let Some(k) = v.first_failure {
        return Err(ApproxError::NotMonotone(k));
    }
    if !be.caps().has_purification {
        return Err(BackendError::Unsupported("purification").into());
    }
    let fs = be.reconstruct_layers(&s.explicit, &s.g_irreg, &s.a[..n], &s.b[..n], s.mem)?;
    let mut layers = Vec::with_capacity(n);
    let mut m_prev = 0;
    for (k, f) in fs.into_iter().enumerate() {
        let m_out = be.cod(&f) - s.b[k];
        layers.push(Layer { f, a: s.a[k], m_in: m_prev, b: s.b[k], m_out });
        m_prev = m_out;
    }
    let reg = Layer { f: s.g_reg.clone(), a: s.a_tail, m_in: s.mem, b: s.b_tail, m_out: s.mem };
    Ok(RegStatefulSeq { layers, reg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{FinSet, IntLin, IntMat};

    #[test]
    fn omega_identity_is_identity_everywhere() {
        let b = IntLin;
        let gens = Gens::new(&b);
        let s = seq_of_diagram(&gens, &Diagram::gen_omega("id", 0, 1, 1)).unwrap();
        for (k, f) in at_upto(&b, &s, 4).unwrap().iter().enumerate() {
            assert_eq!(f, &b.identity(k + 1));
        }
    }

    #[test]
    fn explicit_entries_verbatim() {
        let b = IntLin;
        let f1 = IntMat::from_i64(1, 1, &[&[3]]);
        let f2 = IntMat::from_i64(2, 2, &[&[3, 0], &[1, 1]]);
        let s = FinApproxSeq::from_explicit(&b, vec![f1.clone(), f2.clone()], vec![1, 1], vec![1, 1]);
        assert_eq!(at(&b, &s, 1).unwrap(), f1);
        assert_eq!(at(&b, &s, 2).unwrap(), f2);
        let v = check_monotone(&b, &s, 2, Mode::Eq, 0.0).unwrap();
        assert!(v.monotone);
    }

    #[test]
    fn identity_reconstructs_without_memory_growth() {
        let b = FinSet;
        let gens = Gens::new(&b);
        let s = seq_of_diagram(&gens, &Diagram::gen_omega("id", 0, 1, 1)).unwrap();
        let r = reconstruct(&b, &s, 0.0).unwrap();
        assert_eq!(r.reg.m_in, 0);
        assert_eq!(r.layers[0].f, b.identity(1));
    }
}
