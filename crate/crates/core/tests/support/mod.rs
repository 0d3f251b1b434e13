//! Reference computations shared by the integration tests and the
//! acceptance runner. Nothing here calls the library's own linear algebra.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use streamprop::approx::{self, Mode};
use streamprop::cpm::ChoiMorphism;
use streamprop::dsl;
use streamprop::random::{gaussian, random_cp, random_diagram, random_unitary, RandomMor};
use streamprop::stateful;

pub type M = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn bit(x: usize, i: usize, n: usize) -> usize {
    (x >> (n - 1 - i)) & 1
}

pub fn rel(a: &M, b: &M) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn quads(d: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..d).flat_map(move |a| (0..d).flat_map(move |b| (0..d).flat_map(move |c| (0..d).map(move |e| (a, b, c, e)))))
}

/// Choi matrix `J[(i,o),(i',o')] = Σ K[o,i] conj(K[o',i'])`, entry by entry.
pub fn choi_of(ks: &[M], di: usize, d_o: usize) -> M {
    let mut j = M::zeros(di * d_o, di * d_o);
    for k in ks {
        for i in 0..di {
            for o in 0..d_o {
                for i2 in 0..di {
                    for o2 in 0..d_o {
                        j[(i * d_o + o, i2 * d_o + o2)] += k[(o, i)] * k[(o2, i2)].conj();
                    }
                }
            }
        }
    }
    j
}

/// Wires q0 (starts in |0⟩) and q1..qk (inputs). Tick t applies CNOT with
/// control q(t-1) and target qt and emits q(t-1); qk is left over.
pub fn cnot_oracle(k: usize) -> M {
    let d = 1usize << k;
    // one Kraus operator per value of the leftover wire
    let mut kraus = vec![M::zeros(d, d); 2];
    for x in 0..d {
        let mut q: Vec<usize> = std::iter::once(0).chain((0..k).map(|i| bit(x, i, k))).collect();
        for t in 1..=k {
            q[t] ^= q[t - 1];
        }
        let o = q[..k].iter().fold(0, |acc, b| 2 * acc + b);
        kraus[q[k]][(o, x)] = c(1.0);
    }
    let mut j = M::zeros(d * d, d * d);
    for kr in &kraus {
        for (i, o, i2, o2) in quads(d) {
            j[(i * d + o, i2 * d + o2)] += kr[(o, i)] * kr[(o2, i2)].conj();
        }
    }
    j
}

/// k Bell pairs (a_t, b_t); b_1..b_{k-1} post-selected on |0⟩, b_k traced out.
pub fn bell_oracle(k: usize) -> M {
    let n = 2 * k;
    let amp = c(0.5f64.sqrt().powi(k as i32));
    let mut psi = vec![c(0.0); 1 << n];
    for a in 0..(1usize << k) {
        // a_t = b_t in every pair
        let idx = (0..k).fold(0, |acc, t| (acc << 2) | (bit(a, t, k) * 3));
        psi[idx] = amp;
    }
    let d = 1usize << k;
    let mut rho = M::zeros(d, d);
    for x in 0..(1usize << n) {
        for y in 0..(1usize << n) {
            let bx: Vec<usize> = (0..k).map(|t| bit(x, 2 * t + 1, n)).collect();
            let by: Vec<usize> = (0..k).map(|t| bit(y, 2 * t + 1, n)).collect();
            if bx[..k - 1].iter().any(|&b| b != 0) || by[..k - 1].iter().any(|&b| b != 0) || bx[k - 1] != by[k - 1] {
                continue;
            }
            let ax = (0..k).fold(0, |acc, t| 2 * acc + bit(x, 2 * t, n));
            let ay = (0..k).fold(0, |acc, t| 2 * acc + bit(y, 2 * t, n));
            rho[(ax, ay)] += psi[x] * psi[y].conj();
        }
    }
    rho
}

/// (1/2)^(k-1) |0⟩⟨0|^(k-1) ⊗ I/2.
pub fn bell_closed_form(k: usize) -> M {
    let d = 1usize << k;
    let s = 0.5f64.powi(k as i32);
    M::from_fn(d, d, |r, col| if r == col && r >> 1 == 0 { c(s) } else { c(0.0) })
}

/// y_t = y_{t-1} + y_{t-2} + x_{t-1}, starting from rest.
pub fn fibonacci_oracle(input: &[i64]) -> Vec<BigInt> {
    let mut y = vec![BigInt::from(0); input.len()];
    for t in 1..input.len() {
        let back2 = if t >= 2 { y[t - 2].clone() } else { BigInt::from(0) };
        y[t] = &y[t - 1] + back2 + BigInt::from(input[t - 1]);
    }
    y
}

fn min_eig(m: &M) -> f64 {
    let h = (m + m.adjoint()) * c(0.5);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Is there a λ ≤ 1e6 with λ·g − f ⪰ 0? Bisects on λ over unit-norm matrices.
pub fn lambda_oracle(f: &ChoiMorphism, g: &ChoiMorphism) -> bool {
    let a = &f.choi / c(f.choi.norm());
    let b = &g.choi / c(g.choi.norm());
    // rounding in λ·b grows with λ
    let ok = |l: f64| min_eig(&(&b * c(l) - &a)) >= -1e-11 * (1.0 + l);
    let (mut lo, mut hi) = (0.0, 1e6);
    if !ok(hi) {
        return false;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi < 1e6
}

/// A pair of CP maps on at most two qubits in total, mixing contained and
/// non-contained cases.
pub fn random_cp_pair(rng: &mut ChaCha8Rng) -> (ChoiMorphism, ChoiMorphism) {
    let total = rng.gen_range(1..=2);
    let n_in = rng.gen_range(0..=total);
    let n_out = total - n_in;
    let (di, d_o) = (1usize << n_in, 1usize << n_out);
    let full = di * d_o;
    let mk = |ks: &[M]| ChoiMorphism::new(n_in, n_out, choi_of(ks, di, d_o));
    match rng.gen_range(0..4) {
        // f's Kraus operators are combinations of g's
        0 => {
            let r = rng.gen_range(1..=full);
            let gk: Vec<M> = (0..r).map(|_| gaussian(rng, d_o, di)).collect();
            let fk: Vec<M> = (0..rng.gen_range(1..=r))
                .map(|_| {
                    let mut k = M::zeros(d_o, di);
                    for g in &gk {
                        k += g * Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    }
                    k
                })
                .collect();
            (mk(&fk), mk(&gk))
        }
        // g rank-deficient, f independent
        1 if full > 1 => {
            let r = rng.gen_range(1..full);
            let gk: Vec<M> = (0..r).map(|_| gaussian(rng, d_o, di)).collect();
            let fk: Vec<M> = (0..rng.gen_range(1..=full)).map(|_| gaussian(rng, d_o, di)).collect();
            (mk(&fk), mk(&gk))
        }
        // f wider than g: never contained
        2 if full > 1 => {
            let r = rng.gen_range(1..full);
            let g = random_cp(rng, n_in, n_out, r);
            let rf = rng.gen_range(r + 1..=full);
            (random_cp(rng, n_in, n_out, rf), g)
        }
        _ => {
            let (rf, rg) = (rng.gen_range(1..=full), rng.gen_range(1..=full));
            let f = random_cp(rng, n_in, n_out, rf);
            (f, random_cp(rng, n_in, n_out, rg))
        }
    }
}

/// Traces out the last `aux` output qubits of a Choi matrix.
pub fn trace_aux(f: &ChoiMorphism, aux: usize) -> M {
    let di = 1usize << f.n_in;
    let d_o = 1usize << (f.n_out - aux);
    let de = 1usize << aux;
    let dt = d_o * de;
    M::from_fn(di * d_o, di * d_o, |r, col| {
        let (i, o) = (r / d_o, r % d_o);
        let (j, p) = (col / d_o, col % d_o);
        (0..de).map(|e| f.choi[(i * dt + o * de + e, j * dt + p * de + e)]).sum()
    })
}

/// A pure map `ins → outs` whose image may be smaller than its codomain.
pub fn random_pure(rng: &mut ChaCha8Rng, ins: usize, outs: usize) -> ChoiMorphism {
    let (di, d_o) = (1usize << ins, 1usize << outs);
    let u = random_unitary(rng, outs);
    let w = random_unitary(rng, ins);
    let cols = rng.gen_range(1..=di.min(d_o));
    let mut k = M::zeros(d_o, di);
    for col in 0..cols {
        let scale = rng.gen_range(0.3..1.0);
        k += u.column(col) * w.column(col).adjoint() * c(scale);
    }
    ChoiMorphism::from_pure(ins, outs, &k)
}

/// Checks `n` random diagrams for monotone finite approximations.
pub fn monotone_corpus<B: RandomMor>(be: &B, n: usize, ticks: usize, mode: Mode, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        let s = random_diagram(be, &mut rng);
        let gens = s.register(be);
        let seq = approx::seq_of_diagram(&gens, &s.diagram).map_err(|e| e.to_string())?;
        let v = approx::check_monotone(be, &seq, ticks, mode, 1e-9).map_err(|e| e.to_string())?;
        if !v.monotone {
            return Err(format!("#{i} {}: {v:?}", dsl::print(&s.diagram)));
        }
    }
    Ok(())
}

/// Rebuilds `n` random diagrams from their finite approximations and
/// compares the approximations of the result.
pub fn round_trip_corpus<B: RandomMor>(be: &B, n: usize, ticks: usize, tol: f64, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        let s = random_diagram(be, &mut rng);
        let gens = s.register(be);
        let text = dsl::print(&s.diagram);
        let seq = approx::seq_of_diagram(&gens, &s.diagram).map_err(|e| e.to_string())?;
        let rebuilt = approx::reconstruct(be, &seq, tol).map_err(|e| format!("#{i} {text}: {e}"))?;
        if !rebuilt.is_well_formed() {
            return Err(format!("#{i} {text}: malformed reconstruction"));
        }
        let want = approx::at_upto(be, &seq, ticks).map_err(|e| e.to_string())?;
        let got = stateful::fa_upto(be, &rebuilt, ticks).map_err(|e| e.to_string())?;
        for (k, (g, w)) in got.iter().zip(&want).enumerate() {
            if !be.equal(g, w, tol) {
                return Err(format!("#{i} tick {}: {text}", k + 1));
            }
        }
    }
    Ok(())
}
