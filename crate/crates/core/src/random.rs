//! Random morphisms for every backend and random well-typed diagrams built
//! from a few templates (memoryless gates, initialized and uninitialized
//! memories, post-selection loops, single-tick heads).

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::backend::{Backend, Gens};
use crate::classical::{FinFun, FinSet, IntLin, IntMat};
use crate::cpm::linalg::{dim, frob, hermitian_eigen, CMat, C64};
use crate::cpm::{ChoiMorphism, Cpm};
use crate::diagram::Diagram;
use crate::types::{Color, StreamType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Anything the backend allows; in CPM usually not causal.
    Any,
    Causal,
    /// Requires `ins == outs`.
    Idempotent,
    Pure,
}

/// How large random diagram templates may get: wires per tick (inputs plus
/// outputs) and memory width.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub tick_wires: usize,
    pub memory: usize,
}

pub trait RandomMor: Backend {
    fn random_mor<R: Rng + ?Sized>(&self, rng: &mut R, ins: usize, outs: usize, kind: Kind) -> Self::Mor;
    fn budget(&self) -> Budget;
}

// ---------------------------------------------------------------- CPM

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Haar-distributed unitary on `n` qubits.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let d = dim(n);
    let qr = gaussian(rng, d, d).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMat::from_fn(d, d, |i, j| if i == j { r[(i, i)] / r[(i, i)].norm() } else { C64::new(0.0, 0.0) });
    q * phases
}

/// `S^{-1/2}` for a positive definite `S`.
fn inv_sqrt(s: &CMat) -> CMat {
    let (vals, v) = hermitian_eigen(s);
    let d = CMat::from_fn(vals.len(), vals.len(), |i, j| {
        if i == j {
            C64::new(1.0 / vals[i].max(1e-300).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    &v * d * v.adjoint()
}

/// Trace-preserving map with `rank` Kraus operators (raised if needed so that
/// the normalization exists).
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, ins: usize, outs: usize, rank: usize) -> ChoiMorphism {
    let (din, dout) = (dim(ins), dim(outs));
    let r = rank.max(din.div_ceil(dout));
    let ops: Vec<CMat> = (0..r).map(|_| gaussian(rng, dout, din)).collect();
    let s = ops.iter().fold(CMat::zeros(din, din), |acc, k| acc + k.adjoint() * k);
    let n = inv_sqrt(&s);
    let ops: Vec<CMat> = ops.iter().map(|k| k * &n).collect();
    ChoiMorphism::from_kraus(ins, outs, &ops)
}

/// CP map of the given Kraus rank whose Choi matrix has a random support and
/// eigenvalues in `[0.25, 1]` there, scaled to a random norm in `[0.5, 2]`.
/// The bounded spectrum keeps numerical ranks unambiguous after many tensor
/// products.
pub fn random_cp<R: Rng + ?Sized>(rng: &mut R, ins: usize, outs: usize, rank: usize) -> ChoiMorphism {
    let d = dim(ins + outs);
    let u = random_unitary(rng, ins + outs);
    let mut choi = CMat::zeros(d, d);
    for c in 0..rank.min(d) {
        let lam = rng.gen_range(0.25..1.0);
        let v = u.column(c);
        choi += (v * v.adjoint()) * C64::new(lam, 0.0);
    }
    let f = ChoiMorphism::new(ins, outs, choi);
    let target = rng.gen_range(0.5..2.0);
    f.scaled(target / frob(&f.choi))
}

/// Density matrix on `n` qubits of the given rank.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ChoiMorphism {
    let f = random_cp(rng, 0, n, rank);
    let tr: f64 = (0..dim(n)).map(|i| f.choi[(i, i)].re).sum();
    f.scaled(1.0 / tr)
}

/// Projective measurement in a random basis with randomly grouped outcomes:
/// an idempotent channel.
pub fn random_idempotent_channel<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ChoiMorphism {
    let d = dim(n);
    let u = random_unitary(rng, n);
    let blocks = rng.gen_range(1..=d);
    let mut label: Vec<usize> = (0..d).map(|i| i % blocks).collect();
    label.shuffle(rng);
    let ops: Vec<CMat> = (0..blocks)
        .map(|b| {
            let p = CMat::from_fn(d, d, |i, j| {
                if i == j && label[i] == b {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            &u * p * u.adjoint()
        })
        .collect();
    ChoiMorphism::from_kraus(n, n, &ops)
}

impl RandomMor for Cpm {
    fn random_mor<R: Rng + ?Sized>(&self, rng: &mut R, ins: usize, outs: usize, kind: Kind) -> ChoiMorphism {
        let rank = rng.gen_range(1..=2);
        match kind {
            Kind::Any => random_cp(rng, ins, outs, rank),
            Kind::Causal => random_channel(rng, ins, outs, rank),
            Kind::Pure => random_cp(rng, ins, outs, 1),
            Kind::Idempotent => {
                assert_eq!(ins, outs, "idempotents are endomorphisms");
                random_idempotent_channel(rng, ins)
            }
        }
    }

    fn budget(&self) -> Budget {
        Budget { tick_wires: 2, memory: 1 }
    }
}

// ---------------------------------------------------------------- FinSet

pub fn random_function<R: Rng + ?Sized>(rng: &mut R, ins: usize, outs: usize) -> FinFun {
    let table = (0..1u64 << ins).map(|_| if outs == 0 { 0 } else { rng.gen_range(0..1u64 << outs) }).collect();
    FinFun::new(ins, outs, table)
}

/// A retraction onto a random nonempty subset.
pub fn random_idempotent_function<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FinFun {
    let size = 1usize << n;
    let mut image: Vec<u64> = (0..size as u64).filter(|_| rng.gen_bool(0.5)).collect();
    if image.is_empty() {
        image.push(rng.gen_range(0..size as u64));
    }
    let table = (0..size as u64)
        .map(|x| if image.contains(&x) { x } else { *image.choose(rng).unwrap() })
        .collect();
    FinFun::new(n, n, table)
}

impl RandomMor for FinSet {
    fn random_mor<R: Rng + ?Sized>(&self, rng: &mut R, ins: usize, outs: usize, kind: Kind) -> FinFun {
        match kind {
            Kind::Idempotent => {
                assert_eq!(ins, outs, "idempotents are endomorphisms");
                random_idempotent_function(rng, ins)
            }
            _ => random_function(rng, ins, outs),
        }
    }

    fn budget(&self) -> Budget {
        Budget { tick_wires: 4, memory: 2 }
    }
}

// ---------------------------------------------------------------- IntLin

pub fn random_intmat<R: Rng + ?Sized>(rng: &mut R, ins: usize, outs: usize) -> IntMat {
    let rows = (0..outs).map(|_| (0..ins).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect()).collect();
    IntMat::new(ins, outs, rows)
}

/// `U D U⁻¹` with `D` a 0/1 diagonal and `U` a product of elementary
/// unimodular matrices, so everything stays integral.
pub fn random_idempotent_intmat<R: Rng + ?Sized>(rng: &mut R, n: usize) -> IntMat {
    let be = IntLin;
    let mut u = be.identity(n);
    let mut u_inv = be.identity(n);
    if n > 1 {
        for _ in 0..n {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let c = rng.gen_range(-2i64..=2);
            let mut e = be.identity(n);
            e.rows[i][j] = BigInt::from(c);
            let mut e_inv = be.identity(n);
            e_inv.rows[i][j] = BigInt::from(-c);
            u = be.compose(&e, &u).unwrap();
            u_inv = be.compose(&u_inv, &e_inv).unwrap();
        }
    }
    let mut d = IntMat::zeros(n, n);
    for i in 0..n {
        if rng.gen_bool(0.5) {
            d.rows[i][i] = BigInt::from(1);
        }
    }
    be.compose(&u, &be.compose(&d, &u_inv).unwrap()).unwrap()
}

impl RandomMor for IntLin {
    fn random_mor<R: Rng + ?Sized>(&self, rng: &mut R, ins: usize, outs: usize, kind: Kind) -> IntMat {
        match kind {
            Kind::Idempotent => {
                assert_eq!(ins, outs, "idempotents are endomorphisms");
                random_idempotent_intmat(rng, ins)
            }
            _ => random_intmat(rng, ins, outs),
        }
    }

    fn budget(&self) -> Budget {
        Budget { tick_wires: 4, memory: 2 }
    }
}

// ---------------------------------------------------------------- diagrams

/// A diagram together with the random generators it refers to.
#[derive(Clone, Debug)]
pub struct Sample<M> {
    pub diagram: Diagram,
    pub gens: Vec<(String, M)>,
}

impl<M: Clone> Sample<M> {
    pub fn register<'a, B: Backend<Mor = M>>(&self, be: &'a B) -> Gens<'a, B> {
        let mut g = Gens::new(be);
        for (n, f) in &self.gens {
            g.insert(n, f.clone());
        }
        g
    }
}

/// Fresh generator names and their morphisms.
pub struct Pool<'b, B: RandomMor> {
    pub be: &'b B,
    pub gens: Vec<(String, B::Mor)>,
}

impl<'b, B: RandomMor> Pool<'b, B> {
    pub fn new(be: &'b B) -> Self {
        Pool { be, gens: Vec::new() }
    }

    pub fn fresh<R: Rng + ?Sized>(&mut self, rng: &mut R, ins: usize, outs: usize, kind: Kind) -> String {
        let name = format!("r{}", self.gens.len());
        let f = self.be.random_mor(rng, ins, outs, kind);
        self.gens.push((name.clone(), f));
        name
    }

    pub fn omega<R: Rng + ?Sized>(&mut self, rng: &mut R, delay: usize, ins: usize, outs: usize, kind: Kind) -> Diagram {
        let n = self.fresh(rng, ins, outs, kind);
        Diagram::gen_omega(&n, delay, ins, outs)
    }

    pub fn iota<R: Rng + ?Sized>(&mut self, rng: &mut R, delay: usize, ins: usize, outs: usize, kind: Kind) -> Diagram {
        let n = self.fresh(rng, ins, outs, kind);
        Diagram::gen_iota(&n, delay, ins, outs)
    }

    pub fn finish(self, diagram: Diagram) -> Sample<B::Mor> {
        Sample { diagram, gens: self.gens }
    }
}

fn w() -> StreamType {
    StreamType::omega(0)
}

fn dw() -> StreamType {
    StreamType::omega(1)
}

/// `∂ω → ω`: a fresh single-tick state followed by `init`.
pub fn init_with(state: Diagram) -> Diagram {
    Diagram::seq(vec![Diagram::par(vec![state, Diagram::id(dw())]), Diagram::init(0)]).expect("init typing")
}

/// A memory cell: `Tr(w, (id ⊗ init s) ; r)` with `r: 2 → 2`.
fn mealy<B: RandomMor, R: Rng + ?Sized>(p: &mut Pool<B>, rng: &mut R) -> Diagram {
    let s = p.iota(rng, 0, 0, 1, Kind::Any);
    let r = p.omega(rng, 0, 2, 2, Kind::Any);
    let body = Diagram::seq(vec![Diagram::par(vec![Diagram::id(w()), init_with(s)]), r]).unwrap();
    Diagram::dtrace(w(), body).unwrap()
}

/// `∂ω`-typed head: the first tick goes through a single-tick generator.
fn head<B: RandomMor, R: Rng + ?Sized>(p: &mut Pool<B>, rng: &mut R) -> Diagram {
    let g = p.iota(rng, 0, 1, 1, Kind::Any);
    Diagram::seq(vec![Diagram::deriv(0), Diagram::par(vec![g, Diagram::id(dw())]), Diagram::init(0)]).unwrap()
}

/// `0 → ω`: emit half of a fresh pair every tick, post-select the stored half.
fn postselect<B: RandomMor, R: Rng + ?Sized>(p: &mut Pool<B>, rng: &mut R) -> Diagram {
    let e = p.omega(rng, 1, 1, 0, Kind::Any);
    let s = p.omega(rng, 0, 0, 2, Kind::Any);
    Diagram::dtrace(w(), Diagram::par(vec![e, s])).unwrap()
}

/// `ω → ∂ω` through an uninitialized memory.
fn store<B: RandomMor, R: Rng + ?Sized>(p: &mut Pool<B>, rng: &mut R) -> Diagram {
    let q = p.omega(rng, 1, 1, 1, Kind::Any);
    let r = p.omega(rng, 0, 1, 1, Kind::Any);
    let body = Diagram::seq(vec![Diagram::swap(w(), dw()), Diagram::par(vec![q, r])]).unwrap();
    Diagram::dtrace(w(), body).unwrap()
}

/// A random `ω → ω` piece that keeps within `budget`.
fn endo<B: RandomMor, R: Rng + ?Sized>(p: &mut Pool<B>, rng: &mut R, allow_memory: bool) -> Diagram {
    let choice = rng.gen_range(0..if allow_memory { 4 } else { 2 });
    match choice {
        0 => p.omega(rng, 0, 1, 1, Kind::Any),
        1 => head(p, rng),
        2 => mealy(p, rng),
        _ => {
            let d = Diagram::delay(w());
            let back = p.omega(rng, 1, 1, 1, Kind::Any);
            // a one-tick register whose first output is a fresh state
            let s = p.iota(rng, 0, 0, 1, Kind::Any);
            Diagram::seq(vec![d, back, Diagram::par(vec![s, Diagram::id(dw())]), Diagram::init(0)]).unwrap()
        }
    }
}

/// A random well-typed diagram whose unfolding fits the backend's budget.
pub fn random_diagram<B: RandomMor, R: Rng + ?Sized>(be: &B, rng: &mut R) -> Sample<B::Mor> {
    let mut p = Pool::new(be);
    let wide = be.budget().tick_wires >= 4;
    let d = match rng.gen_range(0..6) {
        0 => endo(&mut p, rng, true),
        1 => postselect(&mut p, rng),
        2 => store(&mut p, rng),
        3 => {
            let a = endo(&mut p, rng, true);
            let b = endo(&mut p, rng, false);
            Diagram::seq(vec![a, b]).unwrap()
        }
        4 => {
            let a = postselect(&mut p, rng);
            let b = endo(&mut p, rng, false);
            Diagram::seq(vec![a, b]).unwrap()
        }
        _ if wide => {
            let a = endo(&mut p, rng, true);
            let b = if rng.gen_bool(0.5) { store(&mut p, rng) } else { endo(&mut p, rng, true) };
            Diagram::par(vec![a, b])
        }
        _ => {
            let a = store(&mut p, rng);
            let b = p.omega(rng, 1, 1, 1, Kind::Any);
            Diagram::seq(vec![a, b]).unwrap()
        }
    };
    p.finish(d)
}

/// `ω`-typed context for a boundary: one fresh `1 → 1` generator per color.
pub fn boundary_context<B: RandomMor, R: Rng + ?Sized>(p: &mut Pool<B>, rng: &mut R, t: &StreamType) -> Diagram {
    Diagram::par(
        t.colors()
            .iter()
            .map(|c| match *c {
                Color::Base(n) => p.iota(rng, n, 1, 1, Kind::Any),
                Color::Omega(n) => p.omega(rng, n, 1, 1, Kind::Any),
            })
            .collect(),
    )
}
