//! Integer matrices: linear maps between tuples of integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::backend::{check_arity, BResult, Backend, BackendError, Capabilities};

/// `rows[i][j]` is the coefficient of input `j` in output `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    pub n_in: usize,
    pub n_out: usize,
    pub rows: Vec<Vec<BigInt>>,
}

impl IntMat {
    pub fn new(n_in: usize, n_out: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert_eq!(rows.len(), n_out);
        assert!(rows.iter().all(|r| r.len() == n_in));
        IntMat { n_in, n_out, rows }
    }

    pub fn from_i64(n_in: usize, n_out: usize, rows: &[&[i64]]) -> Self {
        IntMat::new(n_in, n_out, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn zeros(n_in: usize, n_out: usize) -> Self {
        IntMat::new(n_in, n_out, vec![vec![BigInt::zero(); n_in]; n_out])
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n_in);
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct IntLin;

pub const NAMES: [&str; 8] = ["add", "copy", "zero", "neg", "discard", "swap", "id", "scale<k>"];

impl Backend for IntLin {
    type Mor = IntMat;

    fn name(&self) -> &'static str {
        "intlin"
    }

    fn caps(&self) -> Capabilities {
        Capabilities { has_lax_order: false, has_purification: true, has_shadows: false, all_causal: true }
    }

    fn dom(&self, f: &IntMat) -> usize {
        f.n_in
    }

    fn cod(&self, f: &IntMat) -> usize {
        f.n_out
    }

    fn identity(&self, n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    fn permutation(&self, perm: &[usize]) -> IntMat {
        let n = perm.len();
        let mut m = IntMat::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            m.rows[p][i] = BigInt::one();
        }
        m
    }

    fn discard(&self, n: usize) -> IntMat {
        IntMat::zeros(n, 0)
    }

    fn compose(&self, g: &IntMat, f: &IntMat) -> BResult<IntMat> {
        check_arity(f.n_out, g.n_in)?;
        let rows = g
            .rows
            .iter()
            .map(|gr| {
                (0..f.n_in)
                    .map(|j| gr.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| x * &f.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(IntMat::new(f.n_in, g.n_out, rows))
    }

    fn tensor(&self, f: &IntMat, g: &IntMat) -> IntMat {
        let mut m = IntMat::zeros(f.n_in + g.n_in, f.n_out + g.n_out);
        for (i, r) in f.rows.iter().enumerate() {
            m.rows[i][..f.n_in].clone_from_slice(r);
        }
        for (i, r) in g.rows.iter().enumerate() {
            m.rows[f.n_out + i][f.n_in..].clone_from_slice(r);
        }
        m
    }

    fn equal(&self, f: &IntMat, g: &IntMat, _tol: f64) -> bool {
        f == g
    }

    fn is_causal(&self, _f: &IntMat, _tol: f64) -> bool {
        true
    }

    /// `[F; I]`
    fn purify(&self, f: &IntMat) -> BResult<(IntMat, usize)> {
        let mut rows = f.rows.clone();
        rows.extend(self.identity(f.n_in).rows);
        Ok((IntMat::new(f.n_in, f.n_out + f.n_in, rows), f.n_in))
    }

    /// Solves `C · X2 = X1` over the rationals and insists on an integer answer.
    fn connect_causal(&self, p1: &IntMat, p2: &IntMat, shared: usize, _tol: f64) -> BResult<IntMat> {
        check_arity(p1.n_in, p2.n_in)?;
        if p1.rows[..shared] != p2.rows[..shared] {
            return Err(BackendError::NoSolution(1.0));
        }
        let x1 = &p1.rows[shared..];
        let x2 = &p2.rows[shared..];
        let n2 = x2.len();
        // each row c of C solves x2ᵀ cᵀ = row of x1
        let mut out = Vec::with_capacity(x1.len());
        for target in x1 {
            let c = solve_left(x2, target).ok_or(BackendError::NoSolution(1.0))?;
            out.push(c);
        }
        Ok(IntMat::new(n2, x1.len(), out))
    }

    fn generator(&self, name: &str) -> Option<IntMat> {
        Some(match name {
            "add" => IntMat::from_i64(2, 1, &[&[1, 1]]),
            "copy" => IntMat::from_i64(1, 2, &[&[1], &[1]]),
            "zero" => IntMat::zeros(0, 1),
            "neg" => IntMat::from_i64(1, 1, &[&[-1]]),
            "discard" => self.discard(1),
            "swap" => self.swap(1, 1),
            "id" => self.identity(1),
            _ => {
                let k: i64 = name.strip_prefix("scale")?.parse().ok()?;
                IntMat::from_i64(1, 1, &[&[k]])
            }
        })
    }

    fn generator_names(&self) -> Vec<String> {
        NAMES.iter().map(|s| s.to_string()).collect()
    }

    fn to_json(&self, f: &IntMat) -> Value {
        let rows: Vec<Value> = f
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| x.to_i64().map(Value::from).unwrap_or_else(|| json!(x.to_string()))).collect()))
            .collect();
        json!({ "n_in": f.n_in, "n_out": f.n_out, "matrix": rows })
    }

    fn from_json(&self, v: &Value) -> BResult<IntMat> {
        let bad = |m: &str| BackendError::Payload(m.to_string());
        let n_in = v["n_in"].as_u64().ok_or_else(|| bad("n_in"))? as usize;
        let n_out = v["n_out"].as_u64().ok_or_else(|| bad("n_out"))? as usize;
        let rows = v["matrix"].as_array().ok_or_else(|| bad("matrix"))?;
        if rows.len() != n_out {
            return Err(bad("row count"));
        }
        let mut out = Vec::new();
        for r in rows {
            let r = r.as_array().filter(|r| r.len() == n_in).ok_or_else(|| bad("row"))?;
            let mut row = Vec::new();
            for x in r {
                let n = match x {
                    Value::Number(n) => n.as_i64().map(BigInt::from),
                    Value::String(s) => s.parse().ok(),
                    _ => None,
                };
                row.push(n.ok_or_else(|| bad("entry"))?);
            }
            out.push(row);
        }
        Ok(IntMat::new(n_in, n_out, out))
    }
}

/// Integer `c` with `Σᵢ c[i]·x2[i][j] = target[j]` for all `j`, taking free
/// variables as zero.
fn solve_left(x2: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = x2.len();
    let m = target.len();
    // augmented system: m equations in n unknowns
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..n).map(|i| BigRational::from_integer(x2[i][j].clone())).collect();
            row.push(BigRational::from_integer(target[j].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for k in col..=n {
                    let v = &a[r][k] * &f;
                    a[i][k] = &a[i][k] - v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut c = vec![BigInt::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        let v = &a[i][n];
        if !v.is_integer() {
            return None;
        }
        c[col] = v.to_integer();
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_after_copy_is_scale_two() {
        let b = IntLin;
        let f = b.compose(&b.generator("add").unwrap(), &b.generator("copy").unwrap()).unwrap();
        assert_eq!(f, b.generator("scale2").unwrap());
    }

    #[test]
    fn zero_state_and_swap() {
        let b = IntLin;
        assert_eq!(b.generator("zero").unwrap(), IntMat::from_i64(0, 1, &[&[]]));
        assert_eq!(b.swap(1, 1), IntMat::from_i64(2, 2, &[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn connect_recovers_coefficients() {
        let b = IntLin;
        let f = IntMat::from_i64(2, 1, &[&[1, 2]]);
        let (p2, _) = b.purify(&f).unwrap();
        let g1 = IntMat::from_i64(2, 1, &[&[3, -1]]);
        let mut rows = f.rows.clone();
        rows.extend(g1.rows.clone());
        let p1 = IntMat::new(2, 2, rows);
        let c = b.connect_causal(&p1, &p2, 1, 0.0).unwrap();
        assert_eq!(c, g1);
    }
}
