//! Rule patterns. Every rule is a family of pairs `(lhs, rhs)` of diagram
//! lists, meant as consecutive steps of a sequential composition. Matching
//! guesses the family parameters from the window, rebuilds both sides
//! canonically and compares structurally.

use serde::Serialize;

use crate::diagram::{Diagram, Node};
use crate::types::{Color, StreamType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RuleId {
    #[serde(rename = "TR-NAT-L")]
    TrNatL,
    #[serde(rename = "TR-NAT-R")]
    TrNatR,
    #[serde(rename = "TR-TENS")]
    TrTens,
    #[serde(rename = "TR-SLIDE")]
    TrSlide,
    #[serde(rename = "ELIM")]
    Elim,
    #[serde(rename = "EXP")]
    Exp,
    #[serde(rename = "DIST-INIT")]
    DistInit,
    #[serde(rename = "DIST-DERIV")]
    DistDeriv,
    #[serde(rename = "DELAY-INIT")]
    DelayInit,
    #[serde(rename = "DELAY-DERIV")]
    DelayDeriv,
    #[serde(rename = "DELAY-SWAP")]
    DelaySwap,
    #[serde(rename = "DELAY-CAUSAL")]
    DelayCausal,
    #[serde(rename = "DELAY-CAUSAL-W")]
    DelayCausalW,
    #[serde(rename = "DELAY-IDEM")]
    DelayIdem,
    #[serde(rename = "DELAY-IDEM-W")]
    DelayIdemW,
    /// Parallel/sequential interchange, `(a;b) ⊗ (c;d) = (a⊗c);(b⊗d)`. A prop
    /// law rather than an axiom, handy for derivations.
    #[serde(rename = "INTERCHANGE")]
    Interchange,
    /// Replacing a zero-initialized register by a wire. Unsound; kept as the
    /// audit's negative control.
    #[serde(rename = "S5")]
    S5,
}

pub const AX: [RuleId; 15] = [
    RuleId::TrNatL,
    RuleId::TrNatR,
    RuleId::TrTens,
    RuleId::TrSlide,
    RuleId::Elim,
    RuleId::Exp,
    RuleId::DistInit,
    RuleId::DistDeriv,
    RuleId::DelayInit,
    RuleId::DelayDeriv,
    RuleId::DelaySwap,
    RuleId::DelayCausal,
    RuleId::DelayCausalW,
    RuleId::DelayIdem,
    RuleId::DelayIdemW,
];

pub const ALL: [RuleId; 17] = [
    RuleId::TrNatL,
    RuleId::TrNatR,
    RuleId::TrTens,
    RuleId::TrSlide,
    RuleId::Elim,
    RuleId::Exp,
    RuleId::DistInit,
    RuleId::DistDeriv,
    RuleId::DelayInit,
    RuleId::DelayDeriv,
    RuleId::DelaySwap,
    RuleId::DelayCausal,
    RuleId::DelayCausalW,
    RuleId::DelayIdem,
    RuleId::DelayIdemW,
    RuleId::Interchange,
    RuleId::S5,
];

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::TrNatL => "TR-NAT-L",
            RuleId::TrNatR => "TR-NAT-R",
            RuleId::TrTens => "TR-TENS",
            RuleId::TrSlide => "TR-SLIDE",
            RuleId::Elim => "ELIM",
            RuleId::Exp => "EXP",
            RuleId::DistInit => "DIST-INIT",
            RuleId::DistDeriv => "DIST-DERIV",
            RuleId::DelayInit => "DELAY-INIT",
            RuleId::DelayDeriv => "DELAY-DERIV",
            RuleId::DelaySwap => "DELAY-SWAP",
            RuleId::DelayCausal => "DELAY-CAUSAL",
            RuleId::DelayCausalW => "DELAY-CAUSAL-W",
            RuleId::DelayIdem => "DELAY-IDEM",
            RuleId::DelayIdemW => "DELAY-IDEM-W",
            RuleId::Interchange => "INTERCHANGE",
            RuleId::S5 => "S5",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            RuleId::Elim => "▷◁",
            RuleId::Exp => "◁▷",
            RuleId::DistInit => "▶",
            RuleId::DistDeriv => "◀",
            RuleId::DelayInit => "◁",
            RuleId::DelayDeriv => "▷",
            RuleId::DelaySwap => "σ",
            RuleId::DelayCausal | RuleId::DelayCausalW => "ground",
            RuleId::DelayIdem | RuleId::DelayIdemW => "π",
            _ => "",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleId> {
        let up = s.to_ascii_uppercase();
        ALL.iter().copied().find(|r| r.name() == up || (!r.symbol().is_empty() && r.symbol() == s))
    }

    pub fn is_sound(self) -> bool {
        self != RuleId::S5
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A side condition on a named generator, decided by the backend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Causal(String),
    Idempotent(String),
}

/// One member of a rule family.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub lhs: Vec<Diagram>,
    pub rhs: Vec<Diagram>,
    pub side: Option<Side>,
}

impl Instance {
    fn plain(lhs: Vec<Diagram>, rhs: Vec<Diagram>) -> Instance {
        Instance { lhs, rhs, side: None }
    }

    pub fn oriented(&self, dir: Direction) -> (&[Diagram], &[Diagram]) {
        match dir {
            Direction::Forward => (&self.lhs, &self.rhs),
            Direction::Backward => (&self.rhs, &self.lhs),
        }
    }
}

// ------------------------------------------------------------ canonical pieces

/// `∂ⁿ1 + ∂ⁿ⁺¹ω`
pub fn split_type(n: usize) -> StreamType {
    StreamType::new(vec![Color::Base(n), Color::Omega(n + 1)])
}

fn is_unit_id(d: &Diagram) -> bool {
    matches!(d.node(), Node::Id(t) if t.is_empty())
}

/// `par` without unit identities.
pub fn par_c(v: Vec<Diagram>) -> Diagram {
    Diagram::par(v.into_iter().filter(|d| !is_unit_id(d)).collect())
}

/// `seq` without identity steps.
pub fn seq_c(v: Vec<Diagram>) -> Diagram {
    let dom = v[0].dom().clone();
    let kept: Vec<Diagram> = v.into_iter().filter(|d| !matches!(d.node(), Node::Id(_))).collect();
    Diagram::seq_or_id(kept, dom).expect("rule pieces compose")
}

pub fn swap_c(a: &StreamType, b: &StreamType) -> Diagram {
    if a.is_empty() || b.is_empty() {
        Diagram::id(a.concat(b))
    } else {
        Diagram::swap(a.clone(), b.clone())
    }
}

/// Reorder wires of the given colors so that output `j` carries input
/// `order[j]`, as a sequence of adjacent single-wire swaps.
pub fn perm_diagram(colors: &[Color], order: &[usize]) -> Option<Diagram> {
    let mut cur: Vec<usize> = (0..colors.len()).collect();
    let rank: Vec<usize> = {
        let mut r = vec![0; order.len()];
        for (j, &i) in order.iter().enumerate() {
            r[i] = j;
        }
        r
    };
    let mut steps = Vec::new();
    while let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| rank[cur[i]] > rank[cur[i + 1]]) {
        let ty = |ix: &[usize]| StreamType::new(ix.iter().map(|&k| colors[k]).collect());
        steps.push(par_c(vec![
            Diagram::id(ty(&cur[..i])),
            Diagram::swap(ty(&cur[i..i + 1]), ty(&cur[i + 1..i + 2])),
            Diagram::id(ty(&cur[i + 2..])),
        ]));
        cur.swap(i, i + 1);
    }
    if steps.is_empty() {
        None
    } else {
        Some(Diagram::seq(steps).expect("swap steps compose"))
    }
}

/// `(∂ⁿ1 + ∂ⁿ⁺¹ω)^k → (∂ⁿ1)^k + (∂ⁿ⁺¹ω)^k`
fn group(n: usize, k: usize) -> Option<Diagram> {
    let colors: Vec<Color> = (0..k).flat_map(|_| [Color::Base(n), Color::Omega(n + 1)]).collect();
    let order: Vec<usize> = (0..k).map(|i| 2 * i).chain((0..k).map(|i| 2 * i + 1)).collect();
    perm_diagram(&colors, &order)
}

/// Inverse of [`group`].
fn ungroup(n: usize, k: usize) -> Option<Diagram> {
    let colors: Vec<Color> = (0..k).map(|_| Color::Base(n)).chain((0..k).map(|_| Color::Omega(n + 1))).collect();
    let order: Vec<usize> = (0..k).flat_map(|i| [i, k + i]).collect();
    perm_diagram(&colors, &order)
}

fn gen(name: &str, omega: bool, n: usize, i: usize, o: usize) -> Diagram {
    if omega {
        Diagram::gen_omega(name, n, i, o)
    } else {
        Diagram::gen_iota(name, n, i, o)
    }
}

// ------------------------------------------------------------ families

pub fn elim(n: usize) -> Instance {
    Instance::plain(vec![Diagram::init(n), Diagram::deriv(n)], vec![Diagram::id(split_type(n))])
}

pub fn exp(n: usize) -> Instance {
    Instance::plain(vec![Diagram::deriv(n), Diagram::init(n)], vec![Diagram::id(StreamType::omega(n))])
}

pub fn dist_init(g: &str, n: usize, k: usize, m: usize) -> Instance {
    let mut lhs = Vec::new();
    if k > 0 {
        lhs.push(Diagram::par(vec![Diagram::init(n); k]));
    }
    lhs.push(Diagram::gen_omega(g, n, k, m));
    let mut rhs: Vec<Diagram> = group(n, k).into_iter().collect();
    rhs.push(Diagram::par(vec![Diagram::gen_iota(g, n, k, m), Diagram::gen_omega(g, n + 1, k, m)]));
    rhs.extend(ungroup(n, m));
    if m > 0 {
        rhs.push(Diagram::par(vec![Diagram::init(n); m]));
    }
    Instance::plain(lhs, rhs)
}

pub fn dist_deriv(g: &str, n: usize, k: usize, m: usize) -> Instance {
    let mut lhs = vec![Diagram::gen_omega(g, n, k, m)];
    if m > 0 {
        lhs.push(Diagram::par(vec![Diagram::deriv(n); m]));
    }
    let mut rhs = Vec::new();
    if k > 0 {
        rhs.push(Diagram::par(vec![Diagram::deriv(n); k]));
    }
    rhs.extend(group(n, k));
    rhs.push(Diagram::par(vec![Diagram::gen_iota(g, n, k, m), Diagram::gen_omega(g, n + 1, k, m)]));
    rhs.extend(ungroup(n, m));
    Instance::plain(lhs, rhs)
}

pub fn delay_init(n: usize) -> Instance {
    Instance::plain(
        vec![Diagram::delay(split_type(n)), Diagram::init(n + 1)],
        vec![Diagram::init(n), Diagram::delay(StreamType::omega(n))],
    )
}

pub fn delay_deriv(n: usize) -> Instance {
    Instance::plain(
        vec![Diagram::delay(StreamType::omega(n)), Diagram::deriv(n + 1)],
        vec![Diagram::deriv(n), Diagram::delay(split_type(n))],
    )
}

pub fn delay_swap(a: &StreamType, b: &StreamType) -> Instance {
    Instance::plain(
        vec![Diagram::delay(a.concat(b)), Diagram::swap(a.delayed(1), b.delayed(1))],
        vec![Diagram::swap(a.clone(), b.clone()), Diagram::delay(b.concat(a))],
    )
}

pub fn delay_causal(g: &str, omega: bool, n: usize, i: usize, o: usize) -> Instance {
    let f = gen(g, omega, n, i, o);
    let (dom, cod) = f.type_of();
    Instance {
        lhs: vec![f, Diagram::delay(cod)],
        rhs: vec![Diagram::delay(dom), gen(g, omega, n + 1, i, o)],
        side: Some(Side::Causal(g.to_string())),
    }
}

pub fn delay_idem(g: &str, omega: bool, n: usize, m: usize) -> Instance {
    let f = gen(g, omega, n, m, m);
    let d = Diagram::delay(f.cod().clone());
    Instance {
        lhs: vec![f.clone(), d.clone()],
        rhs: vec![f, d, gen(g, omega, n + 1, m, m)],
        side: Some(Side::Idempotent(g.to_string())),
    }
}

pub fn tr_nat_l(c: &StreamType, body: &Diagram, g: &Diagram) -> Option<Instance> {
    let t = Diagram::dtrace(c.clone(), body.clone()).ok()?;
    Diagram::seq(vec![t.clone(), g.clone()]).ok()?;
    let nb = Diagram::seq(vec![body.clone(), Diagram::par(vec![g.clone(), Diagram::id(c.clone())])]).ok()?;
    Some(Instance::plain(vec![t, g.clone()], vec![Diagram::dtrace(c.clone(), nb).ok()?]))
}

pub fn tr_nat_r(c: &StreamType, body: &Diagram, f: &Diagram) -> Option<Instance> {
    let t = Diagram::dtrace(c.clone(), body.clone()).ok()?;
    Diagram::seq(vec![f.clone(), t.clone()]).ok()?;
    let nb = Diagram::seq(vec![Diagram::par(vec![f.clone(), Diagram::id(c.delayed(1))]), body.clone()]).ok()?;
    Some(Instance::plain(vec![f.clone(), t], vec![Diagram::dtrace(c.clone(), nb).ok()?]))
}

pub fn tr_tens(c: &StreamType, body: &Diagram, h: &Diagram) -> Option<Instance> {
    let t = Diagram::dtrace(c.clone(), body.clone()).ok()?;
    let (a, b) = t.type_of();
    let (a2, b2) = h.type_of();
    let dc = c.delayed(1);
    let pre = par_c(vec![Diagram::id(a), swap_c(&a2, &dc)]);
    let post = par_c(vec![Diagram::id(b), swap_c(c, &b2)]);
    let nb = seq_c(vec![pre, Diagram::par(vec![body.clone(), h.clone()]), post]);
    Some(Instance::plain(vec![Diagram::par(vec![t, h.clone()])], vec![Diagram::dtrace(c.clone(), nb).ok()?]))
}

/// `body: a + ∂y + ∂x → b + x + y`.
pub fn tr_slide(x: &StreamType, y: &StreamType, body: &Diagram) -> Option<Instance> {
    if x.is_empty() || y.is_empty() {
        return None;
    }
    let (dom, cod) = body.type_of();
    let c_in = y.concat(x).delayed(1);
    let c_out = x.concat(y);
    if !dom.ends_with(&c_in) || !cod.ends_with(&c_out) {
        return None;
    }
    let a = dom.split_at(dom.len() - c_in.len()).0;
    let b = cod.split_at(cod.len() - c_out.len()).0;
    let left_body = seq_c(vec![body.clone(), par_c(vec![Diagram::id(b), Diagram::swap(x.clone(), y.clone())])]);
    let right_body = seq_c(vec![par_c(vec![Diagram::id(a), Diagram::swap(x.delayed(1), y.delayed(1))]), body.clone()]);
    Some(Instance::plain(
        vec![Diagram::dtrace(y.concat(x), left_body).ok()?],
        vec![Diagram::dtrace(x.concat(y), right_body).ok()?],
    ))
}

pub fn interchange(a1: &Diagram, a2: &Diagram, b1: &Diagram, b2: &Diagram) -> Option<Instance> {
    let l = Diagram::par(vec![Diagram::seq(vec![a1.clone(), a2.clone()]).ok()?, Diagram::seq(vec![b1.clone(), b2.clone()]).ok()?]);
    Some(Instance::plain(
        vec![l],
        vec![Diagram::par(vec![a1.clone(), b1.clone()]), Diagram::par(vec![a2.clone(), b2.clone()])],
    ))
}

/// `Delay ω ; (z ⊗ id) ; init` against the bare wire, for a state `z`.
pub fn s5(z: &str) -> Instance {
    let w = StreamType::omega(0);
    Instance::plain(
        vec![
            Diagram::delay(w.clone()),
            Diagram::par(vec![Diagram::gen_iota(z, 0, 0, 1), Diagram::id(w.delayed(1))]),
            Diagram::init(0),
        ],
        vec![Diagram::id(w)],
    )
}

// ------------------------------------------------------------ guessing

fn all_nodes(window: &[Diagram]) -> Vec<&Diagram> {
    fn walk<'a>(d: &'a Diagram, out: &mut Vec<&'a Diagram>) {
        out.push(d);
        for c in d.children() {
            walk(c, out);
        }
    }
    let mut out = Vec::new();
    for d in window {
        walk(d, &mut out);
    }
    out
}

fn gens_in(window: &[Diagram]) -> Vec<(String, bool, usize, usize, usize)> {
    let mut v = Vec::new();
    for d in all_nodes(window) {
        match d.node() {
            Node::GenIota { name, delay, ins, outs } => v.push((name.clone(), false, *delay, *ins, *outs)),
            Node::GenOmega { name, delay, ins, outs } => v.push((name.clone(), true, *delay, *ins, *outs)),
            _ => {}
        }
    }
    v.dedup();
    v
}

fn levels(window: &[Diagram]) -> Vec<usize> {
    let mut v = Vec::new();
    for d in all_nodes(window) {
        match d.node() {
            Node::Init(n) | Node::Deriv(n) => {
                v.push(*n);
                if *n > 0 {
                    v.push(n - 1);
                }
            }
            Node::Id(t) | Node::Delay(t) => v.extend(t.colors().iter().map(|c| c.delay())),
            _ => {}
        }
    }
    v.sort();
    v.dedup();
    v
}

/// A trace node's parts.
fn as_trace(d: &Diagram) -> Option<(&StreamType, &Diagram)> {
    match d.node() {
        Node::DTrace(c, b) => Some((c, b)),
        _ => None,
    }
}

fn seq_children(d: &Diagram) -> Vec<&Diagram> {
    match d.node() {
        Node::Seq(v) => v.iter().collect(),
        _ => vec![d],
    }
}

fn par_children(d: &Diagram) -> Option<(&Diagram, &Diagram)> {
    match d.node() {
        Node::Par(v) if v.len() == 2 => Some((&v[0], &v[1])),
        _ => None,
    }
}

/// Every member of `rule`'s family that could match `window` in either
/// direction.
pub fn candidates(rule: RuleId, window: &[Diagram]) -> Vec<Instance> {
    let mut out = Vec::new();
    match rule {
        RuleId::Elim => out.extend(levels(window).into_iter().map(elim)),
        RuleId::Exp => out.extend(levels(window).into_iter().map(exp)),
        RuleId::DelayInit => out.extend(levels(window).into_iter().map(delay_init)),
        RuleId::DelayDeriv => out.extend(levels(window).into_iter().map(delay_deriv)),
        RuleId::DistInit | RuleId::DistDeriv => {
            for (g, _, n, k, m) in gens_in(window) {
                if k + m == 0 {
                    continue;
                }
                for n in [Some(n), n.checked_sub(1)].into_iter().flatten() {
                    out.push(if rule == RuleId::DistInit { dist_init(&g, n, k, m) } else { dist_deriv(&g, n, k, m) });
                }
            }
        }
        RuleId::DelaySwap => {
            for d in all_nodes(window) {
                if let Node::Swap(a, b) = d.node() {
                    out.push(delay_swap(a, b));
                    if let (Some(a), Some(b)) = (a.undelayed(), b.undelayed()) {
                        out.push(delay_swap(&a, &b));
                    }
                }
            }
        }
        RuleId::DelayCausal | RuleId::DelayCausalW | RuleId::DelayIdem | RuleId::DelayIdemW => {
            let want_omega = matches!(rule, RuleId::DelayCausalW | RuleId::DelayIdemW);
            for (g, omega, n, i, o) in gens_in(window) {
                if omega != want_omega {
                    continue;
                }
                for n in [Some(n), n.checked_sub(1)].into_iter().flatten() {
                    match rule {
                        RuleId::DelayCausal | RuleId::DelayCausalW => out.push(delay_causal(&g, omega, n, i, o)),
                        _ if i == o => out.push(delay_idem(&g, omega, n, i)),
                        _ => {}
                    }
                }
            }
        }
        RuleId::TrNatL => {
            if let [t, g] = window {
                if let Some((c, body)) = as_trace(t) {
                    out.extend(tr_nat_l(c, body, g));
                }
            }
            if let [t] = window {
                if let Some((c, body)) = as_trace(t) {
                    if let [d, p] = seq_children(body)[..] {
                        if let Some((g, _)) = par_children(p) {
                            out.extend(tr_nat_l(c, d, g));
                        }
                    }
                }
            }
        }
        RuleId::TrNatR => {
            if let [f, t] = window {
                if let Some((c, body)) = as_trace(t) {
                    out.extend(tr_nat_r(c, body, f));
                }
            }
            if let [t] = window {
                if let Some((c, body)) = as_trace(t) {
                    if let [p, d] = seq_children(body)[..] {
                        if let Some((f, _)) = par_children(p) {
                            out.extend(tr_nat_r(c, d, f));
                        }
                    }
                }
            }
        }
        RuleId::TrTens => {
            if let [p] = window {
                if let Some((t, h)) = par_children(p) {
                    if let Some((c, body)) = as_trace(t) {
                        out.extend(tr_tens(c, body, h));
                    }
                }
                if let Some((c, body)) = as_trace(p) {
                    for s in seq_children(body) {
                        if let Some((d, h)) = par_children(s) {
                            out.extend(tr_tens(c, d, h));
                        }
                    }
                }
            }
        }
        RuleId::TrSlide => {
            if let [t] = window {
                if let Some((_, body)) = as_trace(t) {
                    let kids = seq_children(body);
                    if kids.len() == 2 {
                        for (k, d) in [(1usize, kids[0]), (0, kids[1])] {
                            let sw = match kids[k].node() {
                                Node::Swap(x, y) => Some((x.clone(), y.clone())),
                                Node::Par(v) => match v.last().map(|s| s.node()) {
                                    Some(Node::Swap(x, y)) => Some((x.clone(), y.clone())),
                                    _ => None,
                                },
                                _ => None,
                            };
                            let Some((x, y)) = sw else { continue };
                            if k == 1 {
                                out.extend(tr_slide(&x, &y, d));
                            } else if let (Some(x), Some(y)) = (x.undelayed(), y.undelayed()) {
                                out.extend(tr_slide(&x, &y, d));
                            }
                        }
                    }
                }
            }
        }
        RuleId::Interchange => {
            if let [p] = window {
                if let Some((l, r)) = par_children(p) {
                    if let ([a1, a2], [b1, b2]) = (&seq_children(l)[..], &seq_children(r)[..]) {
                        out.extend(interchange(a1, a2, b1, b2));
                    }
                }
            }
            if let [p, q] = window {
                if let (Some((a1, b1)), Some((a2, b2))) = (par_children(p), par_children(q)) {
                    out.extend(interchange(a1, a2, b1, b2));
                }
            }
        }
        RuleId::S5 => {
            for (g, omega, n, i, o) in gens_in(window) {
                if !omega && n == 0 && i == 0 && o == 1 {
                    out.push(s5(&g));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both_sides_typecheck(inst: &Instance) {
        let l = Diagram::seq(inst.lhs.clone()).unwrap();
        let r = Diagram::seq(inst.rhs.clone()).unwrap();
        assert_eq!(l.type_of(), r.type_of(), "{l:?}\n{r:?}");
    }

    #[test]
    fn families_typecheck() {
        let w = StreamType::omega(0);
        for n in 0..3 {
            both_sides_typecheck(&elim(n));
            both_sides_typecheck(&exp(n));
            both_sides_typecheck(&delay_init(n));
            both_sides_typecheck(&delay_deriv(n));
            for (k, m) in [(0, 1), (1, 0), (1, 1), (2, 1), (1, 2), (2, 3)] {
                both_sides_typecheck(&dist_init("g", n, k, m));
                both_sides_typecheck(&dist_deriv("g", n, k, m));
                both_sides_typecheck(&delay_causal("g", true, n, k, m));
                both_sides_typecheck(&delay_causal("g", false, n, k, m));
            }
            both_sides_typecheck(&delay_idem("g", true, n, 2));
            both_sides_typecheck(&delay_swap(&StreamType::base(n), &w));
        }
        both_sides_typecheck(&s5("z"));
    }

    #[test]
    fn permutation_steps_regroup() {
        let g = group(0, 2).unwrap();
        assert_eq!(g.dom(), &split_type(0).concat(&split_type(0)));
        assert_eq!(g.cod().colors(), &[Color::Base(0), Color::Base(0), Color::Omega(1), Color::Omega(1)]);
        assert!(group(0, 1).is_none());
    }

    #[test]
    fn names_round_trip() {
        for r in ALL {
            assert_eq!(RuleId::from_name(r.name()), Some(r));
        }
        assert_eq!(RuleId::from_name("▷◁"), Some(RuleId::Elim));
    }
}
