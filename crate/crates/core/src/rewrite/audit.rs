//! Randomized soundness audit: build random members of a rule family over
//! random generators, put them in a random context, check that the engine
//! finds and applies the rule, and compare both sides semantically.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::rules::{self, Direction, Instance, RuleId};
use super::{apply, coinductive_equal, find_sites, Oracle, SideConditions, Unchecked};
use crate::diagram::Diagram;
use crate::dsl;
use crate::random::{boundary_context, init_with, Kind, Pool, RandomMor};
use crate::stateful::Verdict;
use crate::types::StreamType;

#[derive(Clone, Copy, Debug)]
pub struct AuditConfig {
    pub trials: usize,
    pub ticks: usize,
    pub tol: f64,
    /// When false, instances use arbitrary generators where the rule asks for
    /// causal or idempotent ones, and the engine skips its checks.
    pub side_conditions: bool,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { trials: 100, ticks: 4, tol: 1e-9, side_conditions: true, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Option<Verdict>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleReport {
    pub rule: RuleId,
    pub backend: &'static str,
    pub trials: usize,
    pub ticks: usize,
    pub side_conditions: bool,
    pub failures: usize,
    /// Earliest tick at which any trial differed.
    pub earliest_tick: Option<usize>,
    pub counterexample: Option<Counterexample>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn w() -> StreamType {
    StreamType::omega(0)
}

fn dw() -> StreamType {
    StreamType::omega(1)
}

/// A delayed-trace body `a + ∂ω → b + ω` of one of five shapes.
fn random_body<B: RandomMor, R: Rng>(p: &mut Pool<B>, rng: &mut R, shape: usize) -> Diagram {
    match shape {
        // mealy cell
        0 => {
            let s = p.iota(rng, 0, 0, 1, Kind::Any);
            let r = p.omega(rng, 0, 2, 2, Kind::Any);
            Diagram::seq(vec![Diagram::par(vec![Diagram::id(w()), init_with(s)]), r]).unwrap()
        }
        // uninitialized memory, output delayed
        1 => {
            let q = p.omega(rng, 1, 1, 1, Kind::Any);
            let r = p.omega(rng, 0, 1, 1, Kind::Any);
            Diagram::seq(vec![Diagram::swap(w(), dw()), Diagram::par(vec![q, r])]).unwrap()
        }
        // sink: no output
        2 => {
            let s = p.iota(rng, 0, 0, 1, Kind::Any);
            let r = p.omega(rng, 0, 2, 1, Kind::Any);
            Diagram::seq(vec![Diagram::par(vec![Diagram::id(w()), init_with(s)]), r]).unwrap()
        }
        // source: no input
        3 => {
            let s = p.iota(rng, 0, 0, 1, Kind::Any);
            let r = p.omega(rng, 0, 1, 2, Kind::Any);
            Diagram::seq(vec![init_with(s), r]).unwrap()
        }
        // post-selection loop
        _ => {
            let e = p.omega(rng, 1, 1, 0, Kind::Any);
            let s = p.omega(rng, 0, 0, 2, Kind::Any);
            Diagram::par(vec![e, s])
        }
    }
}

fn pick<T: Copy, R: Rng>(rng: &mut R, v: &[T]) -> T {
    *v.choose(rng).unwrap()
}

fn random_instance<B: RandomMor, R: Rng>(
    rule: RuleId,
    p: &mut Pool<B>,
    rng: &mut R,
    side_conditions: bool,
) -> Instance {
    let wide = p.be.budget().tick_wires >= 4;
    let n = rng.gen_range(0..=1);
    let omega_arities: &[(usize, usize)] =
        if wide { &[(1, 1), (0, 1), (1, 0), (2, 1), (1, 2), (2, 2)] } else { &[(1, 1), (0, 1), (1, 0)] };
    let iota_arities: &[(usize, usize)] = &[(1, 1), (0, 1), (1, 0), (2, 1), (1, 2), (2, 2)];
    let special = |k: Kind| if side_conditions { k } else { Kind::Any };
    let w = w();
    match rule {
        RuleId::Elim => rules::elim(n),
        RuleId::Exp => rules::exp(n),
        RuleId::DelayInit => rules::delay_init(n),
        RuleId::DelayDeriv => rules::delay_deriv(n),
        RuleId::DistInit | RuleId::DistDeriv => {
            let (k, m) = pick(rng, omega_arities);
            let g = p.fresh(rng, k, m, Kind::Any);
            if rule == RuleId::DistInit {
                rules::dist_init(&g, n, k, m)
            } else {
                rules::dist_deriv(&g, n, k, m)
            }
        }
        RuleId::DelaySwap => {
            let singles = [StreamType::base(0), StreamType::base(1), w.clone(), dw()];
            let (a, b) = if wide {
                let wide_types = [StreamType::base(0), w.clone(), dw(), w.concat(&w)];
                (wide_types.choose(rng).unwrap().clone(), wide_types.choose(rng).unwrap().clone())
            } else {
                // at most one of the two carries a wire every tick
                let a = singles.choose(rng).unwrap().clone();
                let b = if a.colors()[0].is_omega() { StreamType::base(rng.gen_range(0..=1)) } else { singles.choose(rng).unwrap().clone() };
                if rng.gen_bool(0.5) {
                    (a, b)
                } else {
                    (b, a)
                }
            };
            rules::delay_swap(&a, &b)
        }
        RuleId::DelayCausal | RuleId::DelayCausalW => {
            let omega = rule == RuleId::DelayCausalW;
            let (i, o) = pick(rng, if omega { omega_arities } else { iota_arities });
            let g = p.fresh(rng, i, o, special(Kind::Causal));
            rules::delay_causal(&g, omega, n, i, o)
        }
        RuleId::DelayIdem | RuleId::DelayIdemW => {
            let omega = rule == RuleId::DelayIdemW;
            let m = if omega && !wide { 1 } else { rng.gen_range(1..=2) };
            let g = p.fresh(rng, m, m, special(Kind::Idempotent));
            rules::delay_idem(&g, omega, n, m)
        }
        RuleId::TrNatL => {
            let shape = rng.gen_range(0..5);
            let body = random_body(p, rng, shape);
            let t = Diagram::dtrace(w.clone(), body.clone()).unwrap();
            let g = boundary_context(p, rng, t.cod());
            rules::tr_nat_l(&w, &body, &g).unwrap()
        }
        RuleId::TrNatR => {
            let shape = rng.gen_range(0..5);
            let body = random_body(p, rng, shape);
            let t = Diagram::dtrace(w.clone(), body.clone()).unwrap();
            let f = boundary_context(p, rng, t.dom());
            rules::tr_nat_r(&w, &body, &f).unwrap()
        }
        RuleId::TrTens => {
            let (shape, h) = if wide {
                let h = p.omega(rng, 0, 1, 1, Kind::Any);
                (rng.gen_range(0..5), h)
            } else if rng.gen_bool(0.5) {
                (2, p.omega(rng, 0, 0, 1, Kind::Any))
            } else {
                (rng.gen_range(3..5), p.omega(rng, 0, 1, 0, Kind::Any))
            };
            let body = random_body(p, rng, shape);
            rules::tr_tens(&w, &body, &h).unwrap()
        }
        RuleId::TrSlide => {
            let body = if wide {
                let s1 = p.iota(rng, 0, 0, 1, Kind::Any);
                let s2 = p.iota(rng, 0, 0, 1, Kind::Any);
                let r = p.omega(rng, 0, 3, 3, Kind::Any);
                Diagram::seq(vec![Diagram::par(vec![Diagram::id(w.clone()), init_with(s1), init_with(s2)]), r]).unwrap()
            } else if rng.gen_bool(0.5) {
                let s1 = p.iota(rng, 0, 0, 1, Kind::Any);
                let s2 = p.iota(rng, 0, 0, 1, Kind::Any);
                let r = p.omega(rng, 0, 2, 3, Kind::Any);
                Diagram::seq(vec![Diagram::par(vec![init_with(s1), init_with(s2)]), r]).unwrap()
            } else {
                let e = p.omega(rng, 1, 2, 1, Kind::Any);
                let s = p.omega(rng, 0, 0, 2, Kind::Any);
                Diagram::par(vec![e, s])
            };
            rules::tr_slide(&w, &w, &body).unwrap()
        }
        RuleId::Interchange => {
            // narrow backends get one wire in and one out per tick
            let (ai, am, ao, bi, bm, bo) = if wide { (1, 1, 1, 1, 1, 1) } else { (1, 1, 0, 0, 1, 1) };
            let a1 = p.omega(rng, 0, ai, am, Kind::Any);
            let a2 = p.omega(rng, 0, am, ao, Kind::Any);
            let b1 = p.omega(rng, 0, bi, bm, Kind::Any);
            let b2 = p.omega(rng, 0, bm, bo, Kind::Any);
            rules::interchange(&a1, &a2, &b1, &b2).unwrap()
        }
        RuleId::S5 => {
            let z = p.fresh(rng, 0, 1, Kind::Any);
            rules::s5(&z)
        }
    }
}

fn printed(v: &[Diagram]) -> String {
    v.iter().map(dsl::print).collect::<Vec<_>>().join(" ; ")
}

/// Run `cfg.trials` random instances of `rule` on backend `be`.
pub fn verify_rule_soundness<B: RandomMor>(be: &B, rule: RuleId, cfg: &AuditConfig) -> RuleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (rule as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut report = RuleReport {
        rule,
        backend: be.name(),
        trials: cfg.trials,
        ticks: cfg.ticks,
        side_conditions: cfg.side_conditions,
        failures: 0,
        earliest_tick: None,
        counterexample: None,
    };
    for trial in 0..cfg.trials {
        let mut p = Pool::new(be);
        let inst = random_instance(rule, &mut p, &mut rng, cfg.side_conditions);
        let (dom, cod) = (inst.lhs[0].dom().clone(), inst.lhs.last().unwrap().cod().clone());
        let pre = boundary_context(&mut p, &mut rng, &dom);
        let post = boundary_context(&mut p, &mut rng, &cod);
        let sample = p.finish(Diagram::id(StreamType::unit()));
        let gens = sample.register(be);
        let wrap = |mid: &[Diagram]| {
            let mut v = vec![pre.clone()];
            v.extend(mid.iter().cloned());
            v.push(post.clone());
            Diagram::seq_raw(v).expect("instance sides share boundaries")
        };
        let (l, r) = (wrap(&inst.lhs), wrap(&inst.rhs));
        let oracle = Oracle { gens: &gens, tol: cfg.tol };
        let sides: &dyn SideConditions = if cfg.side_conditions { &oracle } else { &Unchecked };
        let mut fail = |verdict: Option<Verdict>, reason: String| {
            report.failures += 1;
            if let Some(Verdict::DifferAt(k)) = verdict {
                report.earliest_tick = Some(report.earliest_tick.map_or(k, |e| e.min(k)));
            }
            if report.counterexample.is_none() {
                report.counterexample = Some(Counterexample {
                    trial,
                    lhs: printed(&inst.lhs),
                    rhs: printed(&inst.rhs),
                    verdict,
                    reason,
                });
            }
        };
        if l.type_of() != r.type_of() {
            fail(None, "sides have different types".into());
            continue;
        }
        let mut engine_ok = true;
        // S5 cannot be applied right to left: the state is not determined
        let dirs: &[_] = if rule == RuleId::S5 {
            &[(Direction::Forward, &l, &r)]
        } else {
            &[(Direction::Forward, &l, &r), (Direction::Backward, &r, &l)]
        };
        for &(dir, from, to) in dirs {
            let hit = find_sites(rule, dir, from, sides)
                .iter()
                .any(|s| s.path.is_empty() && s.start == 1 && apply(from, s).as_ref() == Ok(to));
            engine_ok &= hit;
        }
        if !engine_ok {
            fail(None, "engine did not reproduce the instance".into());
            continue;
        }
        match coinductive_equal(&gens, &l, &r, cfg.ticks, cfg.tol) {
            Ok(v @ Verdict::DifferAt(_)) => fail(Some(v), "finite approximations differ".into()),
            Ok(_) => {}
            Err(e) => fail(None, e.to_string()),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{FinSet, IntLin};
    use crate::cpm::Cpm;

    fn quick(trials: usize) -> AuditConfig {
        AuditConfig { trials, ticks: 3, ..AuditConfig::default() }
    }

    #[test]
    fn elim_never_fails() {
        let r = verify_rule_soundness(&Cpm, RuleId::Elim, &quick(5));
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn s5_is_caught_early() {
        let r = verify_rule_soundness(&IntLin, RuleId::S5, &quick(10));
        assert!(r.failures > 0);
        assert!(r.earliest_tick.unwrap() <= 3);
    }

    #[test]
    fn idempotence_negative_control() {
        let cfg = AuditConfig { side_conditions: false, ..quick(20) };
        let r = verify_rule_soundness(&FinSet, RuleId::DelayIdem, &cfg);
        assert!(r.failures > 0, "{r:?}");
    }
}
