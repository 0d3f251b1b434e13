//! The axioms as position-addressed, bidirectional rewrite rules, bounded
//! semantic equivalence, and a randomized soundness audit.

pub mod audit;
pub mod rules;

use serde::Serialize;
use thiserror::Error;

use crate::backend::{Backend, Gens};
use crate::diagram::{Diagram, DiagramError, Node, Path};
use crate::stateful::{self, StatefulError, Verdict};
use crate::types::{types_equivalent, StreamType};

pub use audit::{verify_rule_soundness, AuditConfig, RuleReport};
pub use rules::{Direction, Instance, RuleId, Side, ALL, AX};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("the site does not match the diagram")]
    InvalidSite,
    #[error("boundary types differ: {0} versus {1}")]
    TypeMismatch(StreamType, StreamType),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Stateful(#[from] StatefulError),
}

/// Decides side conditions on named generators.
pub trait SideConditions {
    fn holds(&self, side: &Side) -> bool;
}

/// Side conditions decided by the backend's denotations.
pub struct Oracle<'g, 'b, B: Backend> {
    pub gens: &'g Gens<'b, B>,
    pub tol: f64,
}

impl<B: Backend> SideConditions for Oracle<'_, '_, B> {
    fn holds(&self, side: &Side) -> bool {
        let be = self.gens.backend;
        match side {
            Side::Causal(g) => self.gens.lookup(g).map(|f| be.is_causal(&f, self.tol)).unwrap_or(false),
            Side::Idempotent(g) => self
                .gens
                .lookup(g)
                .ok()
                .and_then(|f| be.is_idempotent(&f, self.tol).ok())
                .unwrap_or(false),
        }
    }
}

/// Accepts every side condition; for negative controls.
pub struct Unchecked;

impl SideConditions for Unchecked {
    fn holds(&self, _: &Side) -> bool {
        true
    }
}

/// Where a rule applies: `len` consecutive children of the `Seq` at `path`
/// starting at `start`, or the whole node at `path` when `in_seq` is false.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleSite {
    pub rule: RuleId,
    pub direction: Direction,
    pub path: Path,
    pub in_seq: bool,
    pub start: usize,
    pub len: usize,
    #[serde(skip)]
    pub from: Vec<Diagram>,
    #[serde(skip)]
    pub to: Vec<Diagram>,
}

fn match_window(rule: RuleId, dir: Direction, window: &[Diagram], sides: &dyn SideConditions) -> Option<Vec<Diagram>> {
    rules::candidates(rule, window).into_iter().find_map(|inst| {
        let (from, to) = inst.oriented(dir);
        if from != window {
            return None;
        }
        if let Some(s) = &inst.side {
            if !sides.holds(s) {
                return None;
            }
        }
        Some(to.to_vec())
    })
}

const MAX_WINDOW: usize = 4;

fn walk(
    d: &Diagram,
    path: &mut Path,
    parent_is_seq: bool,
    rule: RuleId,
    dir: Direction,
    sides: &dyn SideConditions,
    out: &mut Vec<RuleSite>,
) {
    if let Node::Seq(kids) = d.node() {
        for start in 0..kids.len() {
            for len in 1..=MAX_WINDOW.min(kids.len() - start) {
                let w = &kids[start..start + len];
                if let Some(to) = match_window(rule, dir, w, sides) {
                    out.push(RuleSite {
                        rule,
                        direction: dir,
                        path: path.clone(),
                        in_seq: true,
                        start,
                        len,
                        from: w.to_vec(),
                        to,
                    });
                }
            }
        }
    } else if !parent_is_seq {
        let w = std::slice::from_ref(d);
        if let Some(to) = match_window(rule, dir, w, sides) {
            out.push(RuleSite { rule, direction: dir, path: path.clone(), in_seq: false, start: 0, len: 1, from: w.to_vec(), to });
        }
    }
    let is_seq = matches!(d.node(), Node::Seq(_));
    for (i, c) in d.children().into_iter().enumerate() {
        path.push(i);
        walk(c, path, is_seq, rule, dir, sides, out);
        path.pop();
    }
}

/// Every place where `rule` applies in direction `dir`, in pre-order.
pub fn find_sites(rule: RuleId, dir: Direction, d: &Diagram, sides: &dyn SideConditions) -> Vec<RuleSite> {
    let mut out = Vec::new();
    walk(d, &mut Vec::new(), false, rule, dir, sides, &mut out);
    out
}

/// Sites in both directions.
pub fn find_all_sites(rule: RuleId, d: &Diagram, sides: &dyn SideConditions) -> Vec<RuleSite> {
    let mut v = find_sites(rule, Direction::Forward, d, sides);
    v.extend(find_sites(rule, Direction::Backward, d, sides));
    v
}

fn wrap(v: Vec<Diagram>) -> Result<Diagram, DiagramError> {
    if v.len() == 1 {
        Ok(v.into_iter().next().unwrap())
    } else {
        Diagram::seq_raw(v)
    }
}

/// Rewrite `d` at `site`. The window must still match what the site recorded.
pub fn apply(d: &Diagram, site: &RuleSite) -> Result<Diagram, RewriteError> {
    let node = d.get(&site.path).ok_or(RewriteError::InvalidSite)?;
    if site.in_seq {
        let Node::Seq(kids) = node.node() else { return Err(RewriteError::InvalidSite) };
        if site.start + site.len > kids.len() || kids[site.start..site.start + site.len] != site.from[..] {
            return Err(RewriteError::InvalidSite);
        }
        let whole = site.len == kids.len();
        let f = |n: &Diagram| -> Result<Diagram, DiagramError> {
            let Node::Seq(kids) = n.node() else { unreachable!() };
            if whole {
                return wrap(site.to.clone());
            }
            let mut v = kids[..site.start].to_vec();
            v.extend(site.to.iter().cloned());
            v.extend(kids[site.start + site.len..].iter().cloned());
            Diagram::seq_raw(v)
        };
        Ok(d.replace_at(&site.path, &f)?)
    } else {
        if site.from.len() != 1 || node != &site.from[0] {
            return Err(RewriteError::InvalidSite);
        }
        Ok(d.replace_at(&site.path, &|_| wrap(site.to.clone()))?)
    }
}

/// Bounded observational equivalence: unfold both sides and compare finite
/// approximations for ticks `1..=k`.
pub fn coinductive_equal<B: Backend>(
    gens: &Gens<B>,
    s: &Diagram,
    t: &Diagram,
    k: usize,
    tol: f64,
) -> Result<Verdict, RewriteError> {
    for (a, b) in [(s.dom(), t.dom()), (s.cod(), t.cod())] {
        if !types_equivalent(a, b) {
            return Err(RewriteError::TypeMismatch(a.clone(), b.clone()));
        }
    }
    let ss = stateful::unfold(gens, s)?;
    let ts = stateful::unfold(gens, t)?;
    Ok(stateful::seq_equiv(gens.backend, &ss, &ts, k, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpm::Cpm;
    use crate::types::StreamType;

    #[test]
    fn elim_finds_one_site() {
        let d = Diagram::seq(vec![Diagram::init(0), Diagram::deriv(0)]).unwrap();
        let sites = find_sites(RuleId::Elim, Direction::Forward, &d, &Unchecked);
        assert_eq!(sites.len(), 1);
        let r = apply(&d, &sites[0]).unwrap();
        assert_eq!(r, Diagram::id(rules::split_type(0)));
        let back = find_sites(RuleId::Elim, Direction::Backward, &r, &Unchecked);
        assert_eq!(apply(&r, &back[0]).unwrap(), d);
    }

    #[test]
    fn causal_side_condition_consults_backend() {
        let be = Cpm;
        let gens = Gens::new(&be);
        let oracle = Oracle { gens: &gens, tol: 1e-9 };
        let with = |g: &str, i, o| {
            Diagram::seq(vec![Diagram::gen_iota(g, 0, i, o), Diagram::delay(StreamType::repeat(crate::Color::Base(0), o))])
                .unwrap()
        };
        let cnot = with("cnot", 2, 2);
        assert_eq!(find_sites(RuleId::DelayCausal, Direction::Forward, &cnot, &oracle).len(), 1);
        let bra = with("bra0", 1, 0);
        assert!(find_sites(RuleId::DelayCausal, Direction::Forward, &bra, &oracle).is_empty());
        assert_eq!(find_sites(RuleId::DelayCausal, Direction::Forward, &bra, &Unchecked).len(), 1);
    }

    #[test]
    fn stale_site_is_rejected() {
        let d = Diagram::seq(vec![Diagram::init(0), Diagram::deriv(0)]).unwrap();
        let site = find_sites(RuleId::Elim, Direction::Forward, &d, &Unchecked).remove(0);
        let other = Diagram::seq(vec![Diagram::deriv(0), Diagram::init(0)]).unwrap();
        assert_eq!(apply(&other, &site), Err(RewriteError::InvalidSite));
    }
}
