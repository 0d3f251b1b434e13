//! The discard-prop interface every base theory implements.

use std::collections::BTreeMap;
use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("unsupported by this backend: {0}")]
    Unsupported(&'static str),
    #[error("no solution found (residual {0:.3e})")]
    NoSolution(f64),
    #[error("morphism is not completely positive")]
    NotCP,
    #[error("morphism is not pure")]
    NotPure,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed morphism payload: {0}")]
    Payload(String),
}

pub type BResult<T> = Result<T, BackendError>;

pub fn check_arity(expected: usize, found: usize) -> BResult<()> {
    if expected == found {
        Ok(())
    } else {
        Err(BackendError::ArityMismatch { expected, found })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Capabilities {
    pub has_lax_order: bool,
    pub has_purification: bool,
    pub has_shadows: bool,
    pub all_causal: bool,
}

pub trait Backend: Send + Sync {
    type Mor: Clone + Debug + PartialEq + Send + Sync;

    fn name(&self) -> &'static str;
    fn caps(&self) -> Capabilities;

    fn dom(&self, f: &Self::Mor) -> usize;
    fn cod(&self, f: &Self::Mor) -> usize;

    fn identity(&self, n: usize) -> Self::Mor;
    /// Input wire `i` is sent to output position `perm[i]`.
    fn permutation(&self, perm: &[usize]) -> Self::Mor;
    fn discard(&self, n: usize) -> Self::Mor;

    /// `g ∘ f`
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> BResult<Self::Mor>;
    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;

    fn swap(&self, n: usize, m: usize) -> Self::Mor {
        let perm: Vec<usize> = (0..n).map(|i| i + m).chain(0..m).collect();
        self.permutation(&perm)
    }

    /// `(id_offset ⊗ g ⊗ id_rest) ∘ f`
    fn apply_at(&self, f: &Self::Mor, g: &Self::Mor, offset: usize) -> BResult<Self::Mor> {
        let total = self.cod(f);
        if offset + self.dom(g) > total {
            return Err(BackendError::ArityMismatch { expected: total, found: offset + self.dom(g) });
        }
        let rest = total - offset - self.dom(g);
        let mid = self.tensor(&self.tensor(&self.identity(offset), g), &self.identity(rest));
        self.compose(&mid, f)
    }

    fn equal(&self, f: &Self::Mor, g: &Self::Mor, tol: f64) -> bool;

    fn is_causal(&self, f: &Self::Mor, tol: f64) -> bool {
        match self.compose(&self.discard(self.cod(f)), f) {
            Ok(d) => self.equal(&d, &self.discard(self.dom(f)), tol),
            Err(_) => false,
        }
    }

    fn is_idempotent(&self, f: &Self::Mor, tol: f64) -> BResult<bool> {
        check_arity(self.dom(f), self.cod(f))?;
        Ok(self.equal(&self.compose(f, f)?, f, tol))
    }

    /// The lax order. Backends without one fall back to equality when every
    /// morphism is causal.
    fn leq(&self, f: &Self::Mor, g: &Self::Mor, tol: f64) -> BResult<bool> {
        check_arity(self.dom(f), self.dom(g))?;
        check_arity(self.cod(f), self.cod(g))?;
        if self.caps().all_causal {
            Ok(self.equal(f, g, tol))
        } else {
            Err(BackendError::Unsupported("lax order"))
        }
    }

    /// A pseudo-purification `p: A → B + X` and the auxiliary arity `X`.
    fn purify(&self, _f: &Self::Mor) -> BResult<(Self::Mor, usize)> {
        Err(BackendError::Unsupported("purification"))
    }

    /// Causal `c: X2 → X1` with `(id_B ⊗ c) ∘ p2 = p1`, where `B` is the first
    /// `shared` output wires of both.
    fn connect_causal(&self, _p1: &Self::Mor, _p2: &Self::Mor, _shared: usize, _tol: f64) -> BResult<Self::Mor> {
        Err(BackendError::Unsupported("connect_causal"))
    }

    fn generator(&self, name: &str) -> Option<Self::Mor>;
    fn generator_names(&self) -> Vec<String>;

    fn to_json(&self, f: &Self::Mor) -> serde_json::Value;
    fn from_json(&self, v: &serde_json::Value) -> BResult<Self::Mor>;

    /// Layers `α₁ … αₙ` of a stateful sequence whose finite approximations are
    /// `fs[0], …, fs[n-2]` and whose open `n`-th chain is `g_irreg`
    /// (`A≤n → B≤n + M`). Layer `k` has wires `(a_k, m_{k-1}) → (b_k, m_k)`
    /// with `m_n = M`.
    ///
    /// The default is the pairing construction: memory holds every input seen
    /// so far. It is only valid when `purify` returns `(f, id)`.
    fn reconstruct_layers(
        &self,
        fs: &[Self::Mor],
        g_irreg: &Self::Mor,
        a: &[usize],
        b: &[usize],
        m_out: usize,
    ) -> BResult<Vec<Self::Mor>> {
        let n = fs.len() + 1;
        let mut layers = Vec::with_capacity(n);
        let mut a_before = 0;
        let mut b_before = 0;
        for k in 0..n {
            // (a_k, A<k) → (A<k, a_k)
            let perm: Vec<usize> = (0..a[k]).map(|i| a_before + i).chain(0..a_before).collect();
            let reorder = self.permutation(&perm);
            let (core, keep_aux) = if k + 1 < n {
                let (p, aux) = self.purify(&fs[k])?;
                check_arity(a_before + a[k], aux)?;
                (p, aux)
            } else {
                (g_irreg.clone(), m_out)
            };
            let body = self.compose(&core, &reorder)?;
            let drop = self.tensor(&self.discard(b_before), &self.identity(b[k] + keep_aux));
            layers.push(self.compose(&drop, &body)?);
            a_before += a[k];
            b_before += b[k];
        }
        Ok(layers)
    }
}

/// Generator lookup: the backend's own table plus named extras (random
/// morphisms in tests, user-supplied payloads in the CLI).
pub struct Gens<'a, B: Backend> {
    pub backend: &'a B,
    pub extra: BTreeMap<String, B::Mor>,
}

impl<'a, B: Backend> Gens<'a, B> {
    pub fn new(backend: &'a B) -> Self {
        Gens { backend, extra: BTreeMap::new() }
    }

    pub fn with(mut self, name: &str, f: B::Mor) -> Self {
        self.extra.insert(name.to_string(), f);
        self
    }

    pub fn insert(&mut self, name: &str, f: B::Mor) {
        self.extra.insert(name.to_string(), f);
    }

    pub fn lookup(&self, name: &str) -> BResult<B::Mor> {
        if let Some(f) = self.extra.get(name) {
            return Ok(f.clone());
        }
        self.backend
            .generator(name)
            .ok_or_else(|| BackendError::UnknownGenerator(name.to_string()))
    }

    pub fn arity(&self, name: &str) -> Option<(usize, usize)> {
        self.lookup(name).ok().map(|f| (self.backend.dom(&f), self.backend.cod(&f)))
    }
}

/// Permutation `(X, Y) → (Y, X)` on blocks of sizes `x`, `y`.
pub fn block_swap<B: Backend>(b: &B, x: usize, y: usize) -> B::Mor {
    b.swap(x, y)
}

/// Arbitrary block permutation: `blocks[i]` is the size of input block `i`,
/// `order[j]` the input block placed at output position `j`.
pub fn block_permutation<B: Backend>(b: &B, blocks: &[usize], order: &[usize]) -> B::Mor {
    b.permutation(&block_perm_vec(blocks, order))
}

pub fn block_perm_vec(blocks: &[usize], order: &[usize]) -> Vec<usize> {
    let mut starts = Vec::with_capacity(blocks.len());
    let mut s = 0;
    for &n in blocks {
        starts.push(s);
        s += n;
    }
    let mut perm = vec![0; s];
    let mut pos = 0;
    for &blk in order {
        for i in 0..blocks[blk] {
            perm[starts[blk] + i] = pos;
            pos += 1;
        }
    }
    perm
}

pub fn is_identity_perm(perm: &[usize]) -> bool {
    perm.iter().enumerate().all(|(i, &p)| i == p)
}

pub fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}
