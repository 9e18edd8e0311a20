//! Finite-dimensional algebras and dialgebras given by structure constants.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{invert, SparseVec};
use crate::scalar::Scalar;
use crate::term::Op;

pub type Table = Vec<Vec<SparseVec>>;

/// An algebra over ℚ with basis `e_0..e_{n-1}`. `product[i][j]` is
/// `e_i ∘ e_j` (or `e_i ⊢ e_j`); `product2`, when present, is `e_i ⊣ e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureAlgebra {
    pub basis: Vec<String>,
    pub product: Table,
    pub product2: Option<Table>,
}

impl StructureAlgebra {
    pub fn new(basis: Vec<String>, product: Table) -> Self {
        StructureAlgebra { basis, product, product2: None }
    }

    pub fn new_di(basis: Vec<String>, vdash: Table, dashv: Table) -> Self {
        StructureAlgebra { basis, product: vdash, product2: Some(dashv) }
    }

    pub fn zero(dim: usize) -> Self {
        let basis = (1..=dim).map(|i| format!("e{i}")).collect();
        StructureAlgebra::new(basis, vec![vec![SparseVec::zero(); dim]; dim])
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_di(&self) -> bool {
        self.product2.is_some()
    }

    /// The product tables available, keyed by the symbol they interpret.
    pub fn ops(&self) -> Vec<Op> {
        if self.is_di() {
            vec![Op::Vdash, Op::Dashv]
        } else {
            vec![Op::Circ]
        }
    }

    fn table(&self, op: Op) -> Result<&Table> {
        match (op, &self.product2) {
            (Op::Circ, None) => Ok(&self.product),
            (Op::Vdash, Some(_)) => Ok(&self.product),
            (Op::Dashv, Some(t)) => Ok(t),
            (op, _) => Err(Error::UnknownOp(op.symbol().to_string())),
        }
    }

    /// Basis product `e_i op e_j`.
    pub fn basis_mul(&self, op: Op, i: usize, j: usize) -> Result<&SparseVec> {
        Ok(&self.table(op)?[i][j])
    }

    /// Bilinear product of two vectors.
    pub fn mul_op(&self, op: Op, a: &SparseVec, b: &SparseVec) -> Result<SparseVec> {
        let t = self.table(op)?;
        Ok(a.bilinear(b, |&i, &j| t[i][j].clone()))
    }

    /// The primary product (`∘`, or `⊢` for dialgebras).
    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        a.bilinear(b, |&i, &j| self.product[i][j].clone())
    }

    pub fn e(&self, i: usize) -> SparseVec {
        SparseVec::basis(i)
    }

    /// Plain algebra with the `⊢` table as its product.
    pub fn forget_dashv(&self) -> StructureAlgebra {
        StructureAlgebra::new(self.basis.clone(), self.product.clone())
    }

    /// Transports the structure to the basis `f_j = Σ_i p[i][j] e_i`.
    pub fn change_basis(&self, p: &[Vec<Scalar>]) -> Result<StructureAlgebra> {
        let n = self.dim();
        let inv = invert(p).ok_or_else(|| Error::Algebra("change of basis is singular".into()))?;
        let col = |j: usize| -> SparseVec { (0..n).map(|i| (i, p[i][j].clone())).collect() };
        let to_new = |v: &SparseVec| -> SparseVec {
            let mut out = SparseVec::zero();
            for (&i, c) in v.iter() {
                for (k, row) in inv.iter().enumerate() {
                    out.add_term(k, &row[i] * c);
                }
            }
            out
        };
        let transport = |t: &Table| -> Table {
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            let v = col(a).bilinear(&col(b), |&i, &j| t[i][j].clone());
                            to_new(&v)
                        })
                        .collect()
                })
                .collect()
        };
        Ok(StructureAlgebra {
            basis: (1..=n).map(|i| format!("f{i}")).collect(),
            product: transport(&self.product),
            product2: self.product2.as_ref().map(transport),
        })
    }

    /// Direct sum; the summands annihilate each other.
    pub fn direct_sum(&self, other: &StructureAlgebra) -> Result<StructureAlgebra> {
        if self.is_di() != other.is_di() {
            return Err(Error::Algebra("cannot sum an algebra with a dialgebra".into()));
        }
        let (n, m) = (self.dim(), other.dim());
        let join = |a: &Table, b: &Table| -> Table {
            let mut t = vec![vec![SparseVec::zero(); n + m]; n + m];
            for i in 0..n {
                for j in 0..n {
                    t[i][j] = a[i][j].clone();
                }
            }
            for i in 0..m {
                for j in 0..m {
                    t[n + i][n + j] = b[i][j].map_basis(|&k| k + n);
                }
            }
            t
        };
        let basis = (1..=n + m).map(|i| format!("e{i}")).collect();
        Ok(StructureAlgebra {
            basis,
            product: join(&self.product, &other.product),
            product2: match (&self.product2, &other.product2) {
                (Some(a), Some(b)) => Some(join(a, b)),
                _ => None,
            },
        })
    }

    pub fn format_vector(&self, v: &SparseVec) -> String {
        let named: crate::lincomb::LinComb<String> = v.map_basis(|&i| self.basis[i].clone());
        named.to_string()
    }

    /// Dense coefficient strings of `v`.
    pub fn dense(&self, v: &SparseVec) -> Vec<String> {
        (0..self.dim()).map(|i| v.coeff(&i).to_string()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let quote = |x: &str| serde_json::to_string(x).expect("string");
        s.push_str("{\n");
        let _ = writeln!(s, "  \"dim\": {},", self.dim());
        let names: Vec<String> = self.basis.iter().map(|b| quote(b)).collect();
        let _ = write!(s, "  \"basis\": [{}]", names.join(", "));
        let table = |s: &mut String, key: &str, t: &Table| {
            let _ = write!(s, ",\n  \"{key}\": [\n");
            for (i, row) in t.iter().enumerate() {
                let cells: Vec<String> = row
                    .iter()
                    .map(|v| {
                        let d: Vec<String> = self.dense(v).iter().map(|c| quote(c)).collect();
                        format!("[{}]", d.join(", "))
                    })
                    .collect();
                let _ = write!(s, "    [{}]", cells.join(", "));
                s.push_str(if i + 1 < t.len() { ",\n" } else { "\n" });
            }
            s.push_str("  ]");
        };
        table(&mut s, "product", &self.product);
        if let Some(t) = &self.product2 {
            table(&mut s, "product2", t);
        }
        s.push_str("\n}\n");
        s
    }

    pub fn parse(src: &str) -> Result<StructureAlgebra> {
        let v: Value = serde_json::from_str(src).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<StructureAlgebra> {
        let bad = |m: String| Error::Algebra(m);
        let obj = v.as_object().ok_or_else(|| bad("top level must be an object".into()))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer `dim`".into()))? as usize;
        let basis: Vec<String> = match obj.get("basis") {
            None => (1..=dim).map(|i| format!("e{i}")).collect(),
            Some(b) => b
                .as_array()
                .ok_or_else(|| bad("`basis` must be an array".into()))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("basis names must be strings".into())))
                .collect::<Result<_>>()?,
        };
        if basis.len() != dim {
            return Err(bad(format!("`basis` has {} names but dim is {dim}", basis.len())));
        }
        let mut seen = BTreeSet::new();
        for b in &basis {
            if !seen.insert(b) {
                return Err(bad(format!("duplicate basis name `{b}`")));
            }
        }
        let table = |key: &str| -> Result<Option<Table>> {
            let Some(t) = obj.get(key) else { return Ok(None) };
            let rows = t.as_array().ok_or_else(|| bad(format!("`{key}` must be an array")))?;
            if rows.len() != dim {
                return Err(bad(format!("`{key}` has {} rows, expected {dim}", rows.len())));
            }
            let mut out = Vec::with_capacity(dim);
            for (i, row) in rows.iter().enumerate() {
                let cells = row.as_array().ok_or_else(|| bad(format!("`{key}`[{i}] must be an array")))?;
                if cells.len() != dim {
                    return Err(bad(format!("`{key}`[{i}] has {} entries, expected {dim}", cells.len())));
                }
                let mut r = Vec::with_capacity(dim);
                for (j, cell) in cells.iter().enumerate() {
                    let coeffs = cell.as_array().ok_or_else(|| bad(format!("`{key}`[{i}][{j}] must be an array")))?;
                    if coeffs.len() != dim {
                        return Err(bad(format!("`{key}`[{i}][{j}] has {} coefficients, expected {dim}", coeffs.len())));
                    }
                    let mut v = SparseVec::zero();
                    for (k, c) in coeffs.iter().enumerate() {
                        let s: Scalar = match c {
                            Value::String(s) => s.parse()?,
                            Value::Number(n) if n.is_i64() => Scalar::from_int(n.as_i64().unwrap()),
                            other => return Err(Error::Scalar(other.to_string())),
                        };
                        v.add_term(k, s);
                    }
                    r.push(v);
                }
                out.push(r);
            }
            Ok(Some(out))
        };
        let product = table("product")?.ok_or_else(|| bad("missing `product`".into()))?;
        let product2 = table("product2")?;
        Ok(StructureAlgebra { basis, product, product2 })
    }
}

/// `(i, j, [(k, c)])`: `e_i e_j = Σ c e_k`.
pub type TableEntry<'a> = (usize, usize, &'a [(usize, i64)]);

/// Builds a product table from sparse entries.
pub fn table_from(dim: usize, entries: &[TableEntry<'_>]) -> Table {
    let mut t = vec![vec![SparseVec::zero(); dim]; dim];
    for &(i, j, v) in entries {
        for &(k, c) in v {
            t[i][j].add_term(k, Scalar::from_int(c));
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_dim() -> StructureAlgebra {
        StructureAlgebra::new(vec!["e1".into()], table_from(1, &[(0, 0, &[(0, 1)])]))
    }

    #[test]
    fn text_roundtrip_byte_identical() {
        let a = one_dim();
        let text = a.to_text();
        assert_eq!(
            text,
            "{\n  \"dim\": 1,\n  \"basis\": [\"e1\"],\n  \"product\": [\n    [[\"1\"]]\n  ]\n}\n"
        );
        let back = StructureAlgebra::parse(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_errors() {
        let neg = "{\"dim\":1,\"basis\":[\"e\"],\"product\":[[[\"1/-2\"]]]}";
        assert!(matches!(StructureAlgebra::parse(neg), Err(Error::Scalar(_))));
        let ragged = "{\"dim\":2,\"basis\":[\"a\",\"b\"],\"product\":[[[\"1\",\"0\"],[\"0\",\"0\"]],[[\"0\",\"0\"]]]}";
        assert!(matches!(StructureAlgebra::parse(ragged), Err(Error::Algebra(_))));
        let dup = "{\"dim\":2,\"basis\":[\"a\",\"a\"],\"product\":[[[\"0\",\"0\"],[\"0\",\"0\"]],[[\"0\",\"0\"],[\"0\",\"0\"]]]}";
        assert!(StructureAlgebra::parse(dup).unwrap_err().to_string().contains("duplicate"));
        assert!(matches!(StructureAlgebra::parse("{\"dim\":1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn change_basis_scales_product() {
        // e∘e = e; in the basis f = 2e we get f∘f = 4e = 2f
        let a = one_dim();
        let b = a.change_basis(&[vec![Scalar::from_int(2)]]).unwrap();
        assert_eq!(b.product[0][0], SparseVec::term(0, Scalar::from_int(2)));
        assert!(a.change_basis(&[vec![Scalar::zero()]]).is_err());
    }
}
