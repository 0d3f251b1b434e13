//! Regular stateful morphism sequences and the compiler from diagrams.
//!
//! Layer `k` has wires `(a_k, m_{k-1}) → (b_k, m_k)`. Finite approximations
//! order their inputs and outputs tick-major.

use serde_json::{json, Value};
use thiserror::Error;

use crate::backend::{BackendError, Backend, Gens};
use crate::diagram::{Diagram, DiagramError, Node};
use crate::types::StreamType;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatefulError {
    #[error("profile mismatch at tick {tick}: {what}")]
    ProfileMismatch { tick: usize, what: String },
    #[error("generator `{name}` has arity {found:?} in the backend but {expected:?} in the diagram")]
    GeneratorArity { name: String, expected: (usize, usize), found: (usize, usize) },
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

pub type SResult<T> = Result<T, StatefulError>;

#[derive(Clone, Debug, PartialEq)]
pub struct Layer<M> {
    pub f: M,
    pub a: usize,
    pub m_in: usize,
    pub b: usize,
    pub m_out: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegStatefulSeq<M> {
    /// Explicit layers `f₁ … fₙ`, never empty.
    pub layers: Vec<Layer<M>>,
    /// Repeated for every tick after the explicit prefix.
    pub reg: Layer<M>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    EqualUpTo(usize),
    DifferAt(usize),
}

impl Verdict {
    pub fn is_equal(self) -> bool {
        matches!(self, Verdict::EqualUpTo(_))
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::EqualUpTo(k) => write!(f, "EqualUpTo({k})"),
            Verdict::DifferAt(k) => write!(f, "DifferAt({k})"),
        }
    }
}

fn layer_of<B: Backend>(b: &B, f: B::Mor, a: usize, m_in: usize, bb: usize, m_out: usize) -> Layer<B::Mor> {
    debug_assert_eq!(b.dom(&f), a + m_in);
    debug_assert_eq!(b.cod(&f), bb + m_out);
    Layer { f, a, m_in, b: bb, m_out }
}

fn empty_layer<B: Backend>(b: &B) -> Layer<B::Mor> {
    layer_of(b, b.identity(0), 0, 0, 0, 0)
}

fn plain_layer<B: Backend>(b: &B, f: B::Mor) -> Layer<B::Mor> {
    let (i, o) = (b.dom(&f), b.cod(&f));
    layer_of(b, f, i, 0, o, 0)
}

impl<M: Clone> RegStatefulSeq<M> {
    pub fn prefix_len(&self) -> usize {
        self.layers.len()
    }

    /// Layer at tick `k ≥ 1`.
    pub fn layer(&self, k: usize) -> &Layer<M> {
        assert!(k >= 1, "ticks start at 1");
        self.layers.get(k - 1).unwrap_or(&self.reg)
    }

    pub fn in_arity(&self, k: usize) -> usize {
        self.layer(k).a
    }

    pub fn out_arity(&self, k: usize) -> usize {
        self.layer(k).b
    }

    pub fn mem_arity(&self, k: usize) -> usize {
        self.layer(k).m_out
    }

    fn check_chain(&self) -> bool {
        let mut m = 0;
        for l in self.layers.iter().chain(std::iter::once(&self.reg)) {
            if l.m_in != m {
                return false;
            }
            m = l.m_out;
        }
        self.reg.m_in == self.reg.m_out
    }
}

impl<M: Clone> RegStatefulSeq<M> {
    pub fn is_well_formed(&self) -> bool {
        !self.layers.is_empty() && self.check_chain()
    }
}

/// Constant sequence repeating a memoryless `f`.
pub fn constant<B: Backend>(b: &B, f: B::Mor) -> RegStatefulSeq<B::Mor> {
    let l = plain_layer(b, f);
    RegStatefulSeq { layers: vec![l.clone()], reg: l }
}

pub fn identity_seq<B: Backend>(b: &B, n: usize) -> RegStatefulSeq<B::Mor> {
    constant(b, b.identity(n))
}

fn compose_layer<B: Backend>(b: &B, g: &Layer<B::Mor>, f: &Layer<B::Mor>) -> SResult<Layer<B::Mor>> {
    // (a, mf, mg) → f ⊗ id → (c, mf', mg) → (c, mg, mf') → g ⊗ id → (d, mg', mf') → (d, mf', mg')
    let step1 = b.tensor(&f.f, &b.identity(g.m_in));
    let mid_perm = crate::backend::block_permutation(b, &[f.b, f.m_out, g.m_in], &[0, 2, 1]);
    let step2 = b.compose(&mid_perm, &step1)?;
    let step3 = b.compose(&b.tensor(&g.f, &b.identity(f.m_out)), &step2)?;
    let out_perm = crate::backend::block_permutation(b, &[g.b, g.m_out, f.m_out], &[0, 2, 1]);
    let h = b.compose(&out_perm, &step3)?;
    Ok(layer_of(b, h, f.a, f.m_in + g.m_in, g.b, f.m_out + g.m_out))
}

fn tensor_layer<B: Backend>(b: &B, f: &Layer<B::Mor>, g: &Layer<B::Mor>) -> SResult<Layer<B::Mor>> {
    // (a_f, a_g, mf, mg) → (a_f, mf, a_g, mg) → f ⊗ g → (b_f, mf', b_g, mg') → (b_f, b_g, mf', mg')
    let inp = crate::backend::block_permutation(b, &[f.a, g.a, f.m_in, g.m_in], &[0, 2, 1, 3]);
    let body = b.compose(&b.tensor(&f.f, &g.f), &inp)?;
    let out = crate::backend::block_permutation(b, &[f.b, f.m_out, g.b, g.m_out], &[0, 2, 1, 3]);
    let h = b.compose(&out, &body)?;
    Ok(layer_of(b, h, f.a + g.a, f.m_in + g.m_in, f.b + g.b, f.m_out + g.m_out))
}

/// `g ∘ f`, layer by layer with concatenated memories `(m_f, m_g)`.
pub fn seq_compose<B: Backend>(
    b: &B,
    g: &RegStatefulSeq<B::Mor>,
    f: &RegStatefulSeq<B::Mor>,
) -> SResult<RegStatefulSeq<B::Mor>> {
    let n = f.prefix_len().max(g.prefix_len());
    for k in 1..=n + 1 {
        if f.out_arity(k) != g.in_arity(k) {
            return Err(StatefulError::ProfileMismatch {
                tick: k,
                what: format!("{} outputs feed {} inputs", f.out_arity(k), g.in_arity(k)),
            });
        }
    }
    let layers = (1..=n).map(|k| compose_layer(b, g.layer(k), f.layer(k))).collect::<SResult<_>>()?;
    Ok(RegStatefulSeq { layers, reg: compose_layer(b, &g.reg, &f.reg)? })
}

pub fn seq_tensor<B: Backend>(
    b: &B,
    f: &RegStatefulSeq<B::Mor>,
    g: &RegStatefulSeq<B::Mor>,
) -> SResult<RegStatefulSeq<B::Mor>> {
    let n = f.prefix_len().max(g.prefix_len());
    let layers = (1..=n).map(|k| tensor_layer(b, f.layer(k), g.layer(k))).collect::<SResult<_>>()?;
    Ok(RegStatefulSeq { layers, reg: tensor_layer(b, &f.reg, &g.reg)? })
}

/// `(∂f)₁ = id₀`, `(∂f)_k = f_{k-1}`.
pub fn seq_delay<B: Backend>(b: &B, f: &RegStatefulSeq<B::Mor>) -> RegStatefulSeq<B::Mor> {
    let mut layers = vec![empty_layer(b)];
    layers.extend(f.layers.iter().cloned());
    RegStatefulSeq { layers, reg: f.reg.clone() }
}

fn profile_layers<B: Backend>(
    b: &B,
    dom: &StreamType,
    cod: &StreamType,
    per_tick: impl Fn(usize) -> B::Mor,
) -> RegStatefulSeq<B::Mor> {
    let stable = dom.stable_from().max(cod.stable_from());
    let layers = (1..stable).map(|k| plain_layer(b, per_tick(k))).collect();
    RegStatefulSeq { layers, reg: plain_layer(b, per_tick(stable)) }
}

/// Compile a diagram to a regular stateful sequence.
pub fn unfold<B: Backend>(gens: &Gens<B>, d: &Diagram) -> SResult<RegStatefulSeq<B::Mor>> {
    let b = gens.backend;
    match d.node() {
        Node::GenIota { name, delay, ins, outs } | Node::GenOmega { name, delay, ins, outs } => {
            let g = gens.lookup(name)?;
            let found = (b.dom(&g), b.cod(&g));
            if found != (*ins, *outs) {
                return Err(StatefulError::GeneratorArity { name: name.clone(), expected: (*ins, *outs), found });
            }
            let mut layers: Vec<_> = (0..*delay).map(|_| empty_layer(b)).collect();
            layers.push(plain_layer(b, g.clone()));
            let reg = if matches!(d.node(), Node::GenOmega { .. }) { plain_layer(b, g) } else { empty_layer(b) };
            Ok(RegStatefulSeq { layers, reg })
        }
        Node::Id(a) => Ok(profile_layers(b, a, a, |k| b.identity(a.arity_at(k)))),
        Node::Init(_) | Node::Deriv(_) => {
            let dom = d.dom().clone();
            Ok(profile_layers(b, &dom, d.cod(), |k| b.identity(dom.arity_at(k))))
        }
        Node::Swap(x, y) => Ok(profile_layers(b, d.dom(), d.cod(), |k| b.swap(x.arity_at(k), y.arity_at(k)))),
        Node::Seq(children) => {
            let mut acc = unfold(gens, &children[0])?;
            for c in &children[1..] {
                acc = seq_compose(b, &unfold(gens, c)?, &acc)?;
            }
            Ok(acc)
        }
        Node::Par(children) => {
            if children.is_empty() {
                return Ok(identity_seq(b, 0));
            }
            let mut acc = unfold(gens, &children[0])?;
            for c in &children[1..] {
                acc = seq_tensor(b, &acc, &unfold(gens, c)?)?;
            }
            Ok(acc)
        }
        Node::DTrace(c, body) => {
            let inner = unfold(gens, body)?;
            let (a, bt) = (d.dom(), d.cod());
            let p = inner
                .prefix_len()
                .max(a.degree() + 1)
                .max(bt.degree() + 1)
                .max(c.degree() + 2);
            let retype = |k: usize, l: &Layer<B::Mor>| -> Layer<B::Mor> {
                let c_prev = if k == 1 { 0 } else { c.arity_at(k - 1) };
                Layer {
                    f: l.f.clone(),
                    a: a.arity_at(k),
                    m_in: c_prev + l.m_in,
                    b: bt.arity_at(k),
                    m_out: c.arity_at(k) + l.m_out,
                }
            };
            let layers = (1..=p).map(|k| retype(k, inner.layer(k))).collect();
            let reg = retype(p + 1, &inner.reg);
            Ok(RegStatefulSeq { layers, reg })
        }
        Node::Delay(_) => unfold(gens, &d.desugar()),
    }
}

/// Running composites `G_k` and finite approximations `fa_k`.
pub struct FaChain<'s, B: Backend> {
    backend: &'s B,
    seq: &'s RegStatefulSeq<B::Mor>,
    open: Option<B::Mor>,
    tick: usize,
    b_before: usize,
}

impl<'s, B: Backend> FaChain<'s, B> {
    pub fn new(backend: &'s B, seq: &'s RegStatefulSeq<B::Mor>) -> Self {
        FaChain { backend, seq, open: None, tick: 0, b_before: 0 }
    }

    /// Advance one tick and return the open composite `A≤k → B≤k + m_k`.
    pub fn step(&mut self) -> SResult<&B::Mor> {
        let b = self.backend;
        let k = self.tick + 1;
        let l = self.seq.layer(k);
        let next = match &self.open {
            None => {
                if l.m_in != 0 {
                    return Err(StatefulError::ProfileMismatch { tick: 1, what: "initial memory must be empty".into() });
                }
                l.f.clone()
            }
            Some(g) => {
                let widened = b.tensor(g, &b.identity(l.a));
                let layer = b.compose(&l.f, &b.swap(l.m_in, l.a))?;
                b.apply_at(&widened, &layer, self.b_before)?
            }
        };
        self.open = Some(next);
        self.tick = k;
        self.b_before += l.b;
        Ok(self.open.as_ref().unwrap())
    }

    pub fn tick(&self) -> usize {
        self.tick
    }

    pub fn open(&self) -> Option<&B::Mor> {
        self.open.as_ref()
    }

    /// `fa_k` for the current tick.
    pub fn current_fa(&self) -> SResult<B::Mor> {
        let b = self.backend;
        let g = self.open.as_ref().expect("call step first");
        let m = self.seq.layer(self.tick).m_out;
        Ok(b.apply_at(g, &b.discard(m), self.b_before)?)
    }
}

pub fn fa_upto<B: Backend>(b: &B, s: &RegStatefulSeq<B::Mor>, k: usize) -> SResult<Vec<B::Mor>> {
    let mut chain = FaChain::new(b, s);
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        chain.step()?;
        out.push(chain.current_fa()?);
    }
    Ok(out)
}

pub fn fa_at<B: Backend>(b: &B, s: &RegStatefulSeq<B::Mor>, k: usize) -> SResult<B::Mor> {
    assert!(k >= 1, "ticks start at 1");
    Ok(fa_upto(b, s, k)?.pop().unwrap())
}

/// Total input and output arity up to tick `k`.
pub fn boundary_upto<M: Clone>(s: &RegStatefulSeq<M>, k: usize) -> (usize, usize) {
    (1..=k).fold((0, 0), |(i, o), t| (i + s.in_arity(t), o + s.out_arity(t)))
}

pub fn seq_equiv<B: Backend>(
    b: &B,
    s: &RegStatefulSeq<B::Mor>,
    t: &RegStatefulSeq<B::Mor>,
    k_max: usize,
    tol: f64,
) -> SResult<Verdict> {
    for k in 1..=k_max {
        if s.in_arity(k) != t.in_arity(k) || s.out_arity(k) != t.out_arity(k) {
            return Err(StatefulError::ProfileMismatch {
                tick: k,
                what: format!(
                    "{}→{} versus {}→{}",
                    s.in_arity(k),
                    s.out_arity(k),
                    t.in_arity(k),
                    t.out_arity(k)
                ),
            });
        }
    }
    let mut cs = FaChain::new(b, s);
    let mut ct = FaChain::new(b, t);
    for k in 1..=k_max {
        cs.step()?;
        ct.step()?;
        if !b.equal(&cs.current_fa()?, &ct.current_fa()?, tol) {
            return Ok(Verdict::DifferAt(k));
        }
    }
    Ok(Verdict::EqualUpTo(k_max))
}

fn layer_json<B: Backend>(b: &B, l: &Layer<B::Mor>) -> Value {
    json!({ "a": l.a, "m_in": l.m_in, "b": l.b, "m_out": l.m_out, "f": b.to_json(&l.f) })
}

pub fn to_json<B: Backend>(b: &B, s: &RegStatefulSeq<B::Mor>) -> Value {
    let prof = |f: &dyn Fn(&Layer<B::Mor>) -> usize| -> Value {
        json!({
            "prefix": s.layers.iter().map(f).collect::<Vec<_>>(),
            "tail": f(&s.reg),
        })
    };
    json!({
        "backend": b.name(),
        "in_profile": prof(&|l| l.a),
        "out_profile": prof(&|l| l.b),
        "mem_profile": prof(&|l| l.m_out),
        "layers": s.layers.iter().map(|l| layer_json(b, l)).collect::<Vec<_>>(),
        "reg_layer": layer_json(b, &s.reg),
    })
}
