//! Functions between tuples of bits, as exhaustive tables.

use serde_json::{json, Value};

use crate::backend::{check_arity, BResult, Backend, BackendError, Capabilities};

/// `table[x]` is the output for input `x`; wire 0 is the most significant bit
/// on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinFun {
    pub n_in: usize,
    pub n_out: usize,
    pub table: Vec<u64>,
}

pub const NAMES: [&str; 11] =
    ["copy", "xor", "and", "or", "not", "const0", "const1", "discard", "swap", "id", "delta"];

impl FinFun {
    pub fn new(n_in: usize, n_out: usize, table: Vec<u64>) -> Self {
        assert_eq!(table.len(), 1 << n_in);
        assert!(n_out == 64 || table.iter().all(|&y| y < (1u64 << n_out)));
        FinFun { n_in, n_out, table }
    }

    pub fn from_fn(n_in: usize, n_out: usize, f: impl Fn(u64) -> u64) -> Self {
        FinFun::new(n_in, n_out, (0..1u64 << n_in).map(f).collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.table[x as usize]
    }

    /// Evaluate on a bit vector, wire order.
    pub fn eval_bits(&self, bits: &[bool]) -> Vec<bool> {
        assert_eq!(bits.len(), self.n_in);
        let x = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        let y = self.eval(x);
        (0..self.n_out).map(|i| (y >> (self.n_out - 1 - i)) & 1 == 1).collect()
    }
}

fn bit(x: u64, n: usize, i: usize) -> u64 {
    (x >> (n - 1 - i)) & 1
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FinSet;

impl Backend for FinSet {
    type Mor = FinFun;

    fn name(&self) -> &'static str {
        "finset"
    }

    fn caps(&self) -> Capabilities {
        Capabilities { has_lax_order: false, has_purification: true, has_shadows: false, all_causal: true }
    }

    fn dom(&self, f: &FinFun) -> usize {
        f.n_in
    }

    fn cod(&self, f: &FinFun) -> usize {
        f.n_out
    }

    fn identity(&self, n: usize) -> FinFun {
        FinFun::from_fn(n, n, |x| x)
    }

    fn permutation(&self, perm: &[usize]) -> FinFun {
        let n = perm.len();
        FinFun::from_fn(n, n, |x| {
            perm.iter().enumerate().fold(0, |y, (i, &p)| y | (bit(x, n, i) << (n - 1 - p)))
        })
    }

    fn discard(&self, n: usize) -> FinFun {
        FinFun::from_fn(n, 0, |_| 0)
    }

    fn compose(&self, g: &FinFun, f: &FinFun) -> BResult<FinFun> {
        check_arity(f.n_out, g.n_in)?;
        Ok(FinFun::from_fn(f.n_in, g.n_out, |x| g.eval(f.eval(x))))
    }

    fn tensor(&self, f: &FinFun, g: &FinFun) -> FinFun {
        let mask = (1u64 << g.n_in) - 1;
        FinFun::from_fn(f.n_in + g.n_in, f.n_out + g.n_out, |x| {
            (f.eval(x >> g.n_in) << g.n_out) | g.eval(x & mask)
        })
    }

    fn equal(&self, f: &FinFun, g: &FinFun, _tol: f64) -> bool {
        f == g
    }

    fn is_causal(&self, _f: &FinFun, _tol: f64) -> bool {
        true
    }

    /// The pairing `(f, id)`.
    fn purify(&self, f: &FinFun) -> BResult<(FinFun, usize)> {
        let n = f.n_in;
        Ok((FinFun::from_fn(n, f.n_out + n, |x| (f.eval(x) << n) | x), n))
    }

    fn connect_causal(&self, p1: &FinFun, p2: &FinFun, shared: usize, _tol: f64) -> BResult<FinFun> {
        check_arity(p1.n_in, p2.n_in)?;
        let x1 = p1.n_out - shared;
        let x2 = p2.n_out - shared;
        let mut table: Vec<Option<u64>> = vec![None; 1 << x2];
        let m1 = (1u64 << x1) - 1;
        let m2 = (1u64 << x2) - 1;
        for a in 0..(1u64 << p1.n_in) {
            let (y1, y2) = (p1.eval(a), p2.eval(a));
            if y1 >> x1 != y2 >> x2 {
                return Err(BackendError::NoSolution(1.0));
            }
            let slot = &mut table[(y2 & m2) as usize];
            match slot {
                Some(v) if *v != y1 & m1 => return Err(BackendError::NoSolution(1.0)),
                _ => *slot = Some(y1 & m1),
            }
        }
        Ok(FinFun::new(x2, x1, table.into_iter().map(|v| v.unwrap_or(0)).collect()))
    }

    fn generator(&self, name: &str) -> Option<FinFun> {
        Some(match name {
            "copy" | "delta" => FinFun::from_fn(1, 2, |x| x * 3),
            "xor" => FinFun::from_fn(2, 1, |x| (x >> 1) ^ (x & 1)),
            "and" => FinFun::from_fn(2, 1, |x| (x >> 1) & (x & 1)),
            "or" => FinFun::from_fn(2, 1, |x| (x >> 1) | (x & 1)),
            "not" => FinFun::from_fn(1, 1, |x| 1 - x),
            "const0" => FinFun::new(0, 1, vec![0]),
            "const1" => FinFun::new(0, 1, vec![1]),
            "discard" => self.discard(1),
            "swap" => self.swap(1, 1),
            "id" => self.identity(1),
            _ => return None,
        })
    }

    fn generator_names(&self) -> Vec<String> {
        NAMES.iter().map(|s| s.to_string()).collect()
    }

    fn to_json(&self, f: &FinFun) -> Value {
        json!({ "n_in": f.n_in, "n_out": f.n_out, "table": f.table })
    }

    fn from_json(&self, v: &Value) -> BResult<FinFun> {
        let bad = |m: &str| BackendError::Payload(m.to_string());
        let n_in = v["n_in"].as_u64().ok_or_else(|| bad("n_in"))? as usize;
        let n_out = v["n_out"].as_u64().ok_or_else(|| bad("n_out"))? as usize;
        let table: Vec<u64> = v["table"]
            .as_array()
            .ok_or_else(|| bad("table"))?
            .iter()
            .map(|x| x.as_u64().ok_or_else(|| bad("table entry")))
            .collect::<BResult<_>>()?;
        if table.len() != 1 << n_in || table.iter().any(|&y| n_out < 64 && y >> n_out != 0) {
            return Err(bad("table shape"));
        }
        Ok(FinFun::new(n_in, n_out, table))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_after_copy_is_zero() {
        let b = FinSet;
        let f = b.compose(&b.generator("xor").unwrap(), &b.generator("copy").unwrap()).unwrap();
        assert_eq!(f.table, vec![0, 0]);
    }

    #[test]
    fn swap_exchanges_bits() {
        let s = FinSet.swap(1, 2);
        // input bits (a | b c) → (b c | a)
        assert_eq!(s.eval_bits(&[true, false, true]), vec![false, true, true]);
    }

    #[test]
    fn pairing_connects_to_any_pairing() {
        let b = FinSet;
        let f = b.generator("and").unwrap();
        let (p2, _) = b.purify(&f).unwrap();
        let g1 = b.generator("xor").unwrap();
        // p1 = (f, g1)
        let p1 = FinFun::from_fn(2, 2, |x| (f.eval(x) << 1) | g1.eval(x));
        let c = b.connect_causal(&p1, &p2, 1, 0.0).unwrap();
        assert_eq!(c, g1);
    }

    #[test]
    fn tensor_of_discards() {
        let b = FinSet;
        assert_eq!(b.tensor(&b.discard(1), &b.discard(2)), b.discard(3));
        assert_eq!(b.discard(0), b.identity(0));
    }
}
