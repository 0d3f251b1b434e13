//! The bundled demo corpus. Each demo knows its backend and checks its own
//! expected output.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::approx::{self, Mode};
use crate::backend::{Backend, Gens};
use crate::classical::{FinSet, IntLin};
use crate::cpm::linalg::{close, dim, CMat, C64};
use crate::cpm::{ChoiMorphism, Cpm};
use crate::diagram::Diagram;
use crate::dsl::{self, DslError};
use crate::rewrite::{coinductive_equal, RewriteError};
use crate::stateful::{self, StatefulError, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Cpm,
    FinSet,
    IntLin,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Cpm => "cpm",
            BackendKind::FinSet => "finset",
            BackendKind::IntLin => "intlin",
        }
    }

    pub fn from_name(s: &str) -> Option<BackendKind> {
        [BackendKind::Cpm, BackendKind::FinSet, BackendKind::IntLin].into_iter().find(|b| b.name() == s)
    }
}

pub struct DemoSpec {
    pub name: &'static str,
    pub backend: BackendKind,
    pub source: &'static str,
    pub about: &'static str,
}

pub const DEMOS: [DemoSpec; 7] = [
    DemoSpec {
        name: "half-scalar",
        backend: BackendKind::Cpm,
        source: include_str!("../demos/half-scalar.sexp"),
        about: "measuring a mixed qubit against |0> yields the scalar 1/2 per tick",
    },
    DemoSpec {
        name: "cnot-cascade",
        backend: BackendKind::Cpm,
        source: include_str!("../demos/cnot-cascade.sexp"),
        about: "CNots on consecutive qubits; on basis inputs the outputs are prefix parities",
    },
    DemoSpec {
        name: "bell-postselect",
        backend: BackendKind::Cpm,
        source: include_str!("../demos/bell-postselect.sexp"),
        about: "post-selected Bell halves: monotone in the lax order only",
    },
    DemoSpec {
        name: "store-forever",
        backend: BackendKind::Cpm,
        source: include_str!("../demos/store-forever.sexp"),
        about: "storing the input forever is the same as discarding it",
    },
    DemoSpec {
        name: "fibonacci",
        backend: BackendKind::IntLin,
        source: include_str!("../demos/fibonacci.sexp"),
        about: "on the input 1,0,0,... the outputs are the Fibonacci numbers",
    },
    DemoSpec {
        name: "parity-mealy",
        backend: BackendKind::FinSet,
        source: include_str!("../demos/parity-mealy.sexp"),
        about: "a one-bit machine emitting the running parity of its input",
    },
    DemoSpec {
        name: "s5-unsound",
        backend: BackendKind::IntLin,
        source: include_str!("../demos/s5-unsound.sexp"),
        about: "a zero-initialized register differs from a wire at the first tick",
    },
];

/// Auxiliary sources the demos compare against.
pub const EXTRA_SOURCES: [(&str, &str); 2] =
    [("discard", include_str!("../demos/discard.sexp")), ("identity", include_str!("../demos/identity.sexp"))];

pub fn spec(name: &str) -> Option<&'static DemoSpec> {
    DEMOS.iter().find(|d| d.name == name)
}

/// Source text of a demo or auxiliary file by stem.
pub fn source(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".sexp").unwrap_or(name);
    spec(stem).map(|d| d.source).or_else(|| EXTRA_SOURCES.iter().find(|(n, _)| *n == stem).map(|(_, s)| *s))
}

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("unknown demo `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Stateful(#[from] StatefulError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Approx(#[from] approx::ApproxError),
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoOutcome {
    pub name: &'static str,
    pub backend: BackendKind,
    pub ticks: usize,
    pub output: Value,
    pub expected: Value,
    /// The output meets the expectation.
    pub ok: bool,
    /// The demo's verdict is negative by design.
    pub negative: bool,
}

/// Fixed input bits for the classical and basis-state demos.
pub const INPUT_BITS: [bool; 8] = [true, false, true, true, false, true, false, false];

pub fn parse_for<B: Backend>(gens: &Gens<B>, src: &str) -> Result<Diagram, DslError> {
    dsl::parse(src, gens)
}

pub fn run(name: &str, ticks: usize, tol: f64) -> Result<DemoOutcome, DemoError> {
    let d = spec(name).ok_or_else(|| DemoError::Unknown(name.to_string()))?;
    let mut out = DemoOutcome {
        name: d.name,
        backend: d.backend,
        ticks,
        output: Value::Null,
        expected: Value::Null,
        ok: false,
        negative: false,
    };
    match d.name {
        "half-scalar" => {
            let gens = Gens::new(&Cpm);
            let s = stateful::unfold(&gens, &parse_for(&gens, d.source)?)?;
            let got: Vec<f64> =
                stateful::fa_upto(&Cpm, &s, ticks)?.iter().map(|f| f.scalar().map_or(f64::NAN, |c| c.re)).collect();
            let want: Vec<f64> = (1..=ticks as i32).map(|k| 0.5f64.powi(k)).collect();
            out.ok = got.iter().zip(&want).all(|(g, w)| (g - w).abs() <= 1e-12);
            out.output = json!(got);
            out.expected = json!(want);
        }
        "cnot-cascade" => {
            let gens = Gens::new(&Cpm);
            let s = stateful::unfold(&gens, &parse_for(&gens, d.source)?)?;
            let fa = stateful::fa_at(&Cpm, &s, ticks)?;
            let bits = cycle_bits(ticks);
            let got = basis_response(&fa, &bits);
            let mut want = Vec::with_capacity(ticks);
            let mut parity = false;
            for &b in &bits {
                want.push(parity);
                parity ^= b;
            }
            out.ok = got.as_deref() == Some(&want[..]);
            out.output = json!({ "input": bits_str(&bits), "output": got.as_deref().map(bits_str) });
            out.expected = json!({ "output": bits_str(&want) });
        }
        "bell-postselect" => {
            let gens = Gens::new(&Cpm);
            let seq = approx::seq_of_diagram(&gens, &parse_for(&gens, d.source)?)?;
            let fas = approx::at_upto(&Cpm, &seq, ticks)?;
            let matches: Vec<bool> = fas.iter().enumerate().map(|(i, f)| close(&f.choi, &bell_expected(i + 1).choi, tol)).collect();
            let lax = approx::check_monotone(&Cpm, &seq, ticks, Mode::Lax, tol)?;
            let eq = approx::check_monotone(&Cpm, &seq, ticks, Mode::Eq, tol)?;
            let eq_fails_everywhere = eq.failures == (1..ticks).collect::<Vec<_>>();
            out.ok = matches.iter().all(|&m| m) && lax.monotone && eq_fails_everywhere;
            let traces: Vec<f64> = fas.iter().map(|f| f.choi.trace().re).collect();
            out.output = json!({ "trace": traces, "matches_formula": matches, "lax": lax, "eq": eq });
            out.expected =
                json!({ "trace": (1..=ticks as i32).map(|k| 0.5f64.powi(k - 1)).collect::<Vec<_>>(), "lax": true, "eq_failures": (1..ticks).collect::<Vec<_>>() });
        }
        "store-forever" => {
            let gens = Gens::new(&Cpm);
            let a = parse_for(&gens, d.source)?;
            let b = parse_for(&gens, source("discard").unwrap())?;
            let v = coinductive_equal(&gens, &a, &b, ticks, tol)?;
            out.ok = v == Verdict::EqualUpTo(ticks);
            out.output = json!(v);
            out.expected = json!(Verdict::EqualUpTo(ticks));
        }
        "fibonacci" => {
            let gens = Gens::new(&IntLin);
            let s = stateful::unfold(&gens, &parse_for(&gens, d.source)?)?;
            let fa = stateful::fa_at(&IntLin, &s, ticks)?;
            let mut input = vec![BigInt::from(0); ticks];
            if ticks > 0 {
                input[0] = BigInt::from(1);
            }
            let got: Vec<i64> = fa.apply(&input).iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect();
            let mut want = Vec::with_capacity(ticks);
            let (mut a, mut b) = (0i64, 1i64);
            for _ in 0..ticks {
                want.push(a);
                (a, b) = (b, a + b);
            }
            out.ok = got == want;
            out.output = json!(got);
            out.expected = json!(want);
        }
        "parity-mealy" => {
            let gens = Gens::new(&FinSet);
            let s = stateful::unfold(&gens, &parse_for(&gens, d.source)?)?;
            let fa = stateful::fa_at(&FinSet, &s, ticks)?;
            let bits = cycle_bits(ticks);
            let got = fa.eval_bits(&bits);
            let want: Vec<bool> = bits.iter().scan(false, |p, &b| {
                *p ^= b;
                Some(*p)
            }).collect();
            out.ok = got == want;
            out.output = json!({ "input": bits_str(&bits), "output": bits_str(&got) });
            out.expected = json!({ "output": bits_str(&want) });
        }
        "s5-unsound" => {
            let gens = Gens::new(&IntLin);
            let a = parse_for(&gens, d.source)?;
            let b = parse_for(&gens, source("identity").unwrap())?;
            let v = coinductive_equal(&gens, &a, &b, ticks, tol)?;
            out.ok = v == Verdict::DifferAt(1);
            out.negative = true;
            out.output = json!(v);
            out.expected = json!(Verdict::DifferAt(1));
        }
        _ => unreachable!("every listed demo is handled"),
    }
    Ok(out)
}

fn cycle_bits(n: usize) -> Vec<bool> {
    INPUT_BITS.iter().copied().cycle().take(n).collect()
}

fn bits_str(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

/// If `f` sends the basis state `|bits⟩` to a basis state, that state.
pub fn basis_response(f: &ChoiMorphism, bits: &[bool]) -> Option<Vec<bool>> {
    let x = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let mut rho = CMat::zeros(dim(f.n_in), dim(f.n_in));
    rho[(x, x)] = C64::new(1.0, 0.0);
    let out = f.apply(&rho);
    let (y, p) = (0..out.nrows()).map(|i| (i, out[(i, i)].re)).max_by(|a, b| a.1.total_cmp(&b.1))?;
    if (p - 1.0).abs() > 1e-9 {
        return None;
    }
    Some((0..f.n_out).map(|i| (y >> (f.n_out - 1 - i)) & 1 == 1).collect())
}

/// `(1/2)^{k-1} |0⟩⟨0|^{⊗(k-1)} ⊗ I/2` as a state on `k` qubits.
pub fn bell_expected(k: usize) -> ChoiMorphism {
    let d = dim(k);
    let mut m = CMat::zeros(d, d);
    let s = 0.5f64.powi(k as i32);
    m[(0, 0)] = C64::new(s, 0.0);
    m[(1, 1)] = C64::new(s, 0.0);
    ChoiMorphism::state(k, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_demo_meets_its_expectation() {
        for d in DEMOS {
            let o = run(d.name, 4, 1e-9).unwrap();
            assert!(o.ok, "{}: {:?}", d.name, o);
            assert_eq!(o.negative, d.name == "s5-unsound");
        }
    }

    #[test]
    fn corpus_round_trips_through_the_printer() {
        for d in DEMOS {
            let src = d.source;
            let check = |src: &str| match d.backend {
                BackendKind::Cpm => {
                    let g = Gens::new(&Cpm);
                    let a = parse_for(&g, src).unwrap();
                    assert_eq!(parse_for(&g, &dsl::print(&a)).unwrap(), a);
                }
                BackendKind::FinSet => {
                    let g = Gens::new(&FinSet);
                    let a = parse_for(&g, src).unwrap();
                    assert_eq!(parse_for(&g, &dsl::print(&a)).unwrap(), a);
                }
                BackendKind::IntLin => {
                    let g = Gens::new(&IntLin);
                    let a = parse_for(&g, src).unwrap();
                    assert_eq!(parse_for(&g, &dsl::print(&a)).unwrap(), a);
                }
            };
            check(src);
        }
    }
}
