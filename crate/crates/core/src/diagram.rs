//! The diagram IR: generator instances, structural wires, stream init/derivative,
//! sequential and parallel composition, and the delayed trace.

use thiserror::Error;

use crate::types::{Color, StreamType};

/// Position of a node: child indices from the root.
pub type Path = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("type mismatch at {path:?}: expected {expected}, found {found}")]
    TypeMismatch {
        path: Path,
        expected: StreamType,
        found: StreamType,
    },
    #[error("no node at {0:?}")]
    BadPath(Path),
}

impl DiagramError {
    pub fn prefixed(self, prefix: &[usize]) -> Self {
        match self {
            DiagramError::TypeMismatch { path, expected, found } => {
                let mut p = prefix.to_vec();
                p.extend(path);
                DiagramError::TypeMismatch { path: p, expected, found }
            }
            DiagramError::BadPath(path) => {
                let mut p = prefix.to_vec();
                p.extend(path);
                DiagramError::BadPath(p)
            }
        }
    }
}

fn mismatch(path: Path, expected: &StreamType, found: &StreamType) -> DiagramError {
    DiagramError::TypeMismatch { path, expected: expected.clone(), found: found.clone() }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    /// A base generator living at the single tick `delay + 1`.
    GenIota { name: String, delay: usize, ins: usize, outs: usize },
    /// A base generator repeated at every tick from `delay + 1` on.
    GenOmega { name: String, delay: usize, ins: usize, outs: usize },
    Id(StreamType),
    Swap(StreamType, StreamType),
    /// `∂ⁿ1 + ∂ⁿ⁺¹ω → ∂ⁿω`
    Init(usize),
    /// `∂ⁿω → ∂ⁿ1 + ∂ⁿ⁺¹ω`
    Deriv(usize),
    Seq(Vec<Diagram>),
    Par(Vec<Diagram>),
    DTrace(StreamType, Box<Diagram>),
    Delay(StreamType),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    node: Node,
    dom: StreamType,
    cod: StreamType,
}

impl Diagram {
    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn dom(&self) -> &StreamType {
        &self.dom
    }

    pub fn cod(&self) -> &StreamType {
        &self.cod
    }

    pub fn type_of(&self) -> (StreamType, StreamType) {
        (self.dom.clone(), self.cod.clone())
    }

    pub fn gen_iota(name: &str, delay: usize, ins: usize, outs: usize) -> Diagram {
        Diagram {
            node: Node::GenIota { name: name.to_string(), delay, ins, outs },
            dom: StreamType::repeat(Color::Base(delay), ins),
            cod: StreamType::repeat(Color::Base(delay), outs),
        }
    }

    pub fn gen_omega(name: &str, delay: usize, ins: usize, outs: usize) -> Diagram {
        Diagram {
            node: Node::GenOmega { name: name.to_string(), delay, ins, outs },
            dom: StreamType::repeat(Color::Omega(delay), ins),
            cod: StreamType::repeat(Color::Omega(delay), outs),
        }
    }

    pub fn id(a: StreamType) -> Diagram {
        Diagram { dom: a.clone(), cod: a.clone(), node: Node::Id(a) }
    }

    pub fn swap(a: StreamType, b: StreamType) -> Diagram {
        Diagram { dom: a.concat(&b), cod: b.concat(&a), node: Node::Swap(a, b) }
    }

    pub fn init(n: usize) -> Diagram {
        Diagram {
            node: Node::Init(n),
            dom: StreamType::new(vec![Color::Base(n), Color::Omega(n + 1)]),
            cod: StreamType::omega(n),
        }
    }

    pub fn deriv(n: usize) -> Diagram {
        Diagram {
            node: Node::Deriv(n),
            dom: StreamType::omega(n),
            cod: StreamType::new(vec![Color::Base(n), Color::Omega(n + 1)]),
        }
    }

    pub fn delay(c: StreamType) -> Diagram {
        Diagram { dom: c.clone(), cod: c.delayed(1), node: Node::Delay(c) }
    }

    /// Sequential composition, left to right. An empty list is rejected
    /// because its type is unknown; use [`Diagram::seq_or_id`].
    pub fn seq(children: Vec<Diagram>) -> Result<Diagram, DiagramError> {
        assert!(!children.is_empty(), "empty seq has no type; use seq_or_id");
        for i in 1..children.len() {
            if children[i - 1].cod != children[i].dom {
                return Err(mismatch(vec![i], &children[i - 1].cod, &children[i].dom));
            }
        }
        if children.len() == 1 {
            return Ok(children.into_iter().next().unwrap());
        }
        let dom = children[0].dom.clone();
        let cod = children[children.len() - 1].cod.clone();
        Ok(Diagram { node: Node::Seq(children), dom, cod })
    }

    pub fn seq_or_id(children: Vec<Diagram>, a: StreamType) -> Result<Diagram, DiagramError> {
        if children.is_empty() {
            return Ok(Diagram::id(a));
        }
        if children[0].dom != a {
            return Err(mismatch(vec![0], &a, &children[0].dom));
        }
        Diagram::seq(children)
    }

    /// Like `seq` but keeps a single child wrapped, so that paths stay stable.
    pub fn seq_raw(children: Vec<Diagram>) -> Result<Diagram, DiagramError> {
        if children.len() == 1 {
            let c = children[0].clone();
            return Ok(Diagram { dom: c.dom.clone(), cod: c.cod.clone(), node: Node::Seq(children) });
        }
        Diagram::seq(children)
    }

    pub fn par(children: Vec<Diagram>) -> Diagram {
        if children.is_empty() {
            return Diagram::id(StreamType::unit());
        }
        if children.len() == 1 {
            return children.into_iter().next().unwrap();
        }
        let mut dom = StreamType::unit();
        let mut cod = StreamType::unit();
        for c in &children {
            dom = dom.concat(&c.dom);
            cod = cod.concat(&c.cod);
        }
        Diagram { node: Node::Par(children), dom, cod }
    }

    pub fn par_raw(children: Vec<Diagram>) -> Diagram {
        if children.len() == 1 {
            let c = children[0].clone();
            return Diagram { dom: c.dom.clone(), cod: c.cod.clone(), node: Node::Par(children) };
        }
        Diagram::par(children)
    }

    /// `Tr∂_c(body)` with `body: a + ∂c → b + c`, giving `a → b`.
    pub fn dtrace(c: StreamType, body: Diagram) -> Result<Diagram, DiagramError> {
        let dc = c.delayed(1);
        if !body.dom.ends_with(&dc) {
            let n = body.dom.len().min(dc.len());
            let found = body.dom.split_at(body.dom.len() - n).1;
            return Err(mismatch(vec![0], &dc, &found));
        }
        if !body.cod.ends_with(&c) {
            let n = body.cod.len().min(c.len());
            let found = body.cod.split_at(body.cod.len() - n).1;
            return Err(mismatch(vec![0], &c, &found));
        }
        let dom = body.dom.split_at(body.dom.len() - dc.len()).0;
        let cod = body.cod.split_at(body.cod.len() - c.len()).0;
        Ok(Diagram { node: Node::DTrace(c, Box::new(body)), dom, cod })
    }

    pub fn children(&self) -> Vec<&Diagram> {
        match &self.node {
            Node::Seq(v) | Node::Par(v) => v.iter().collect(),
            Node::DTrace(_, b) => vec![b.as_ref()],
            _ => Vec::new(),
        }
    }

    pub fn get(&self, path: &[usize]) -> Option<&Diagram> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Rebuild with `f` applied to the node at `path`; types are re-checked
    /// along the spine.
    pub fn replace_at(
        &self,
        path: &[usize],
        f: &dyn Fn(&Diagram) -> Result<Diagram, DiagramError>,
    ) -> Result<Diagram, DiagramError> {
        let Some((&i, rest)) = path.split_first() else {
            return f(self);
        };
        let err = || DiagramError::BadPath(path.to_vec());
        match &self.node {
            Node::Seq(v) => {
                let mut v = v.clone();
                let c = v.get(i).ok_or_else(err)?.replace_at(rest, f).map_err(|e| e.prefixed(&[i]))?;
                v[i] = c;
                Diagram::seq_raw(v)
            }
            Node::Par(v) => {
                let mut v = v.clone();
                let c = v.get(i).ok_or_else(err)?.replace_at(rest, f).map_err(|e| e.prefixed(&[i]))?;
                v[i] = c;
                Ok(Diagram::par_raw(v))
            }
            Node::DTrace(c, b) if i == 0 => {
                let nb = b.replace_at(rest, f).map_err(|e| e.prefixed(&[0]))?;
                Diagram::dtrace(c.clone(), nb)
            }
            _ => Err(err()),
        }
    }

    /// Replace every `Delay(c)` by `DTrace(c, Swap(c, ∂c))`.
    pub fn desugar(&self) -> Diagram {
        match &self.node {
            Node::Delay(c) => {
                Diagram::dtrace(c.clone(), Diagram::swap(c.clone(), c.delayed(1))).expect("delay typing")
            }
            Node::Seq(v) => Diagram::seq(v.iter().map(|d| d.desugar()).collect()).expect("seq typing"),
            Node::Par(v) => Diagram::par(v.iter().map(|d| d.desugar()).collect()),
            Node::DTrace(c, b) => Diagram::dtrace(c.clone(), b.desugar()).expect("trace typing"),
            _ => self.clone(),
        }
    }

    /// `∂ᵏ d`: every color and generator shifted `k` ticks later.
    pub fn delayed(&self, k: usize) -> Diagram {
        if k == 0 {
            return self.clone();
        }
        match &self.node {
            Node::GenIota { name, delay, ins, outs } => Diagram::gen_iota(name, delay + k, *ins, *outs),
            Node::GenOmega { name, delay, ins, outs } => Diagram::gen_omega(name, delay + k, *ins, *outs),
            Node::Id(a) => Diagram::id(a.delayed(k)),
            Node::Swap(a, b) => Diagram::swap(a.delayed(k), b.delayed(k)),
            Node::Init(n) => Diagram::init(n + k),
            Node::Deriv(n) => Diagram::deriv(n + k),
            Node::Seq(v) => Diagram::seq_raw(v.iter().map(|d| d.delayed(k)).collect()).expect("seq typing"),
            Node::Par(v) => Diagram::par_raw(v.iter().map(|d| d.delayed(k)).collect()),
            Node::DTrace(c, b) => Diagram::dtrace(c.delayed(k), b.delayed(k)).expect("trace typing"),
            Node::Delay(c) => Diagram::delay(c.delayed(k)),
        }
    }

    /// Largest color delay occurring anywhere in the term.
    pub fn max_delay(&self) -> usize {
        let own = match &self.node {
            Node::GenIota { delay, .. } | Node::GenOmega { delay, .. } => *delay,
            Node::Init(n) | Node::Deriv(n) => n + 1,
            Node::DTrace(c, _) => c.degree() + 1,
            Node::Delay(c) => c.degree() + 1,
            _ => 0,
        };
        let kids = self.children().iter().map(|c| c.max_delay()).max().unwrap_or(0);
        own.max(kids).max(self.dom.degree()).max(self.cod.degree())
    }

    /// Generator names used, with their arities, in first-occurrence order.
    pub fn generators(&self) -> Vec<(String, usize, usize)> {
        let mut out = Vec::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut Vec<(String, usize, usize)>) {
        match &self.node {
            Node::GenIota { name, ins, outs, .. } | Node::GenOmega { name, ins, outs, .. } => {
                let e = (name.clone(), *ins, *outs);
                if !out.contains(&e) {
                    out.push(e);
                }
            }
            _ => {
                for c in self.children() {
                    c.collect_generators(out);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

pub fn type_of(d: &Diagram) -> (StreamType, StreamType) {
    d.type_of()
}

/// Adjacent swap of the single colors at positions `i` and `i + 1`.
fn adjacent_swap(t: &StreamType, i: usize) -> Diagram {
    let (pre, rest) = t.split_at(i);
    let (pair, post) = rest.split_at(2);
    let x = StreamType::new(vec![pair.colors()[0]]);
    let y = StreamType::new(vec![pair.colors()[1]]);
    Diagram::par(
        [Diagram::id(pre), Diagram::swap(x, y), Diagram::id(post)]
            .into_iter()
            .filter(|d| !(matches!(d.node, Node::Id(ref a) if a.is_empty())))
            .collect(),
    )
}

/// `∂ʲω` unfolded into `∂ʲ1 + … + ∂ᵈ⁻¹1 + ∂ᵈω`.
fn derive_up_to(j: usize, d: usize) -> Diagram {
    let mut steps = Vec::new();
    let mut prefix = StreamType::unit();
    for n in j..d {
        steps.push(Diagram::par(
            [Diagram::id(prefix.clone()), Diagram::deriv(n)]
                .into_iter()
                .filter(|x| !x.dom.is_empty() || !x.cod.is_empty())
                .collect(),
        ));
        prefix = prefix.concat(&StreamType::base(n));
    }
    Diagram::seq(steps).expect("derivative chain typing")
}

fn strat_key(c: Color) -> (u8, usize) {
    match c {
        Color::Base(n) => (0, n),
        Color::Omega(n) => (1, n),
    }
}

/// The stratified form of `a` and a map `a → ā` made of derivatives and swaps.
pub fn stratify(a: &StreamType) -> (StreamType, Diagram) {
    let d = a.degree();
    let mut steps: Vec<Diagram> = Vec::new();
    let mut cur = a.clone();
    if a.colors().iter().any(|c| matches!(c, Color::Omega(j) if *j < d)) {
        let mut parts = Vec::new();
        let mut colors = Vec::new();
        for &c in a.colors() {
            match c {
                Color::Omega(j) if j < d => {
                    parts.push(derive_up_to(j, d));
                    colors.extend((j..d).map(Color::Base));
                    colors.push(Color::Omega(d));
                }
                _ => {
                    parts.push(Diagram::id(StreamType::new(vec![c])));
                    colors.push(c);
                }
            }
        }
        steps.push(Diagram::par(parts));
        cur = StreamType::new(colors);
    }
    let mut v = cur.colors().to_vec();
    loop {
        let mut swapped = false;
        for i in 0..v.len().saturating_sub(1) {
            if strat_key(v[i]) > strat_key(v[i + 1]) {
                steps.push(adjacent_swap(&StreamType::new(v.clone()), i));
                v.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    let target = StreamType::new(v);
    let diagram = Diagram::seq_or_id(steps, a.clone()).expect("stratification typing");
    (target, diagram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{disjoint, types_equivalent};
    use Color::*;

    fn t(v: &[Color]) -> StreamType {
        StreamType::new(v.to_vec())
    }

    #[test]
    fn basic_typing() {
        assert_eq!(Diagram::init(0).type_of(), (t(&[Base(0), Omega(1)]), t(&[Omega(0)])));
        assert_eq!(Diagram::id(StreamType::unit()).type_of(), (t(&[]), t(&[])));
        let d = Diagram::dtrace(t(&[Base(0)]), Diagram::swap(t(&[Base(0)]), t(&[Base(1)]))).unwrap();
        assert_eq!(d.type_of(), (t(&[Base(0)]), t(&[Base(1)])));
    }

    #[test]
    fn seq_mismatch_reports_position() {
        let e = Diagram::seq(vec![Diagram::init(0), Diagram::init(0)]).unwrap_err();
        assert_eq!(
            e,
            DiagramError::TypeMismatch { path: vec![1], expected: t(&[Omega(0)]), found: t(&[Base(0), Omega(1)]) }
        );
    }

    #[test]
    fn trace_boundary_checked() {
        let body = Diagram::id(t(&[Omega(0)]));
        assert!(Diagram::dtrace(t(&[Omega(0)]), body).is_err());
    }

    #[test]
    fn delay_desugars() {
        let c = t(&[Omega(0), Base(2)]);
        let d = Diagram::delay(c.clone());
        let s = d.desugar();
        assert!(matches!(s.node(), Node::DTrace(..)));
        assert_eq!(s.type_of(), (c.clone(), c.delayed(1)));
    }

    #[test]
    fn stratify_examples() {
        let (s, m) = stratify(&t(&[Base(1), Base(0)]));
        assert_eq!(s, t(&[Base(0), Base(1)]));
        assert_eq!(m.type_of(), (t(&[Base(1), Base(0)]), s.clone()));
        assert!(matches!(m.node(), Node::Swap(..)));

        let a = t(&[Omega(0), Base(1)]);
        let (s, m) = stratify(&a);
        assert_eq!(s, t(&[Base(0), Base(1), Omega(1)]));
        assert_eq!(m.type_of(), (a.clone(), s.clone()));
        assert!(types_equivalent(&a, &s));
        let text = format!("{:?}", m);
        assert_eq!(text.matches("Deriv(0)").count(), 1);
        assert_eq!(text.matches("Swap(").count(), 1);

        let a = t(&[Base(0), Omega(0)]);
        let (s, m) = stratify(&a);
        assert_eq!(s, a);
        assert_eq!(m, Diagram::id(a));
    }

    #[test]
    fn delayed_shifts_types() {
        let d = Diagram::seq(vec![Diagram::deriv(0), Diagram::init(0)]).unwrap();
        let e = d.delayed(2);
        assert_eq!(e.dom(), &t(&[Omega(2)]));
        assert_eq!(e.cod(), &t(&[Omega(2)]));
        assert!(disjoint(&t(&[Base(0)]), &t(&[Base(2), Omega(3)])));
    }

    #[test]
    fn replace_rechecks_types() {
        let d = Diagram::seq(vec![Diagram::deriv(0), Diagram::init(0)]).unwrap();
        let ok = d.replace_at(&[1], &|_| Ok(Diagram::init(0))).unwrap();
        assert_eq!(ok, d);
        let bad = d.replace_at(&[1], &|_| Ok(Diagram::deriv(0)));
        assert!(bad.is_err());
    }
}
