//! The free differential Perm-algebra and its commutative quotient.
//!
//! A Perm monomial is an associative word modulo `xyz = yxz`: everything but
//! the last letter commutes, so the normal form is a sorted prefix together
//! with a distinguished last letter.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::Scalar;
use crate::term::{MagmaTerm, Op};

/// The derivative `x^(order)` of a generator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffGen {
    pub generator: Arc<str>,
    pub order: u32,
}

impl DiffGen {
    pub fn new(generator: &str, order: u32) -> Self {
        DiffGen { generator: Arc::from(generator), order }
    }

    /// `x_i` as a zeroth-order letter named `x{i}`.
    pub fn var(i: usize) -> Self {
        DiffGen::new(&format!("x{i}"), 0)
    }

    pub fn derived(&self) -> Self {
        DiffGen { generator: self.generator.clone(), order: self.order + 1 }
    }

    pub fn weight(&self) -> i64 {
        self.order as i64 - 1
    }
}

impl fmt::Display for DiffGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order <= 3 {
            write!(f, "{}{}", self.generator, "'".repeat(self.order as usize))
        } else {
            write!(f, "{}^({})", self.generator, self.order)
        }
    }
}

impl fmt::Debug for DiffGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DiffGen {
    type Err = Error;

    /// Accepts `x3''` or `x3^(2)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 1, column: 1, msg: format!("malformed letter `{s}`") };
        if let Some((name, rest)) = s.split_once("^(") {
            let n = rest.strip_suffix(')').ok_or_else(bad)?;
            let order = n.parse().map_err(|_| bad())?;
            if name.is_empty() {
                return Err(bad());
            }
            return Ok(DiffGen::new(name, order));
        }
        let name = s.trim_end_matches('\'');
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || "[]|'".contains(c)) {
            return Err(bad());
        }
        Ok(DiffGen::new(name, (s.len() - name.len()) as u32))
    }
}

/// Anything with an additive weight.
pub trait Weight {
    fn weight(&self) -> i64;
}

/// Basis monomial of the free Perm-algebra on differentiated generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermMonomial {
    prefix: Vec<DiffGen>,
    last: DiffGen,
}

impl PermMonomial {
    pub fn new(mut prefix: Vec<DiffGen>, last: DiffGen) -> Self {
        prefix.sort();
        PermMonomial { prefix, last }
    }

    pub fn letter(g: DiffGen) -> Self {
        PermMonomial { prefix: Vec::new(), last: g }
    }

    pub fn prefix(&self) -> &[DiffGen] {
        &self.prefix
    }

    pub fn last(&self) -> &DiffGen {
        &self.last
    }

    pub fn degree(&self) -> usize {
        self.prefix.len() + 1
    }

    pub fn letters(&self) -> impl Iterator<Item = &DiffGen> {
        self.prefix.iter().chain(std::iter::once(&self.last))
    }

    /// `self · other`: every letter of `self` joins the commuting prefix.
    pub fn mul(&self, other: &PermMonomial) -> PermMonomial {
        let mut prefix = Vec::with_capacity(self.prefix.len() + other.prefix.len() + 1);
        prefix.extend(self.prefix.iter().cloned());
        prefix.push(self.last.clone());
        prefix.extend(other.prefix.iter().cloned());
        PermMonomial::new(prefix, other.last.clone())
    }
}

impl Weight for PermMonomial {
    fn weight(&self) -> i64 {
        self.letters().map(DiffGen::weight).sum()
    }
}

impl fmt::Display for PermMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for g in &self.prefix {
            write!(f, "{g} ")?;
        }
        write!(f, "| {}]", self.last)
    }
}

impl fmt::Debug for PermMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PermMonomial {
    type Err = Error;

    /// Parses `[a b | c]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 1, column: 1, msg: format!("malformed Perm monomial `{s}`") };
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let (pre, last) = inner.split_once('|').ok_or_else(bad)?;
        let prefix = pre.split_whitespace().map(str::parse).collect::<Result<Vec<DiffGen>>>()?;
        let last: DiffGen = last.trim().parse()?;
        Ok(PermMonomial::new(prefix, last))
    }
}

/// Basis monomial of the polynomial algebra on differentiated generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CommMonomial {
    letters: Vec<DiffGen>,
}

impl CommMonomial {
    pub fn new(mut letters: Vec<DiffGen>) -> Self {
        letters.sort();
        CommMonomial { letters }
    }

    pub fn letters(&self) -> &[DiffGen] {
        &self.letters
    }

    pub fn mul(&self, other: &CommMonomial) -> CommMonomial {
        let mut l = self.letters.clone();
        l.extend(other.letters.iter().cloned());
        CommMonomial::new(l)
    }
}

impl Weight for CommMonomial {
    fn weight(&self) -> i64 {
        self.letters.iter().map(DiffGen::weight).sum()
    }
}

impl fmt::Display for CommMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, g) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for CommMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type PermPoly = LinComb<PermMonomial>;
pub type CommPoly = LinComb<CommMonomial>;

pub fn generator(i: usize) -> PermPoly {
    PermPoly::basis(PermMonomial::letter(DiffGen::var(i)))
}

pub fn letter(g: DiffGen) -> PermPoly {
    PermPoly::basis(PermMonomial::letter(g))
}

pub fn perm_mul(f: &PermPoly, g: &PermPoly) -> PermPoly {
    f.bilinear(g, |a, b| LinComb::basis(a.mul(b)))
}

fn derive_monomial(m: &PermMonomial) -> PermPoly {
    let mut out = PermPoly::zero();
    for i in 0..m.prefix.len() {
        let mut prefix = m.prefix.clone();
        prefix[i] = prefix[i].derived();
        out.add_term(PermMonomial::new(prefix, m.last.clone()), Scalar::one());
    }
    out.add_term(PermMonomial::new(m.prefix.clone(), m.last.derived()), Scalar::one());
    out
}

/// The derivation `d` extended from `d(x^(n)) = x^(n+1)` by the Leibniz rule.
pub fn derive(f: &PermPoly) -> PermPoly {
    f.map_linear(derive_monomial)
}

/// `f ∘ g = f · d(g)`
pub fn derived_product(f: &PermPoly, g: &PermPoly) -> PermPoly {
    perm_mul(f, &derive(g))
}

/// `(f ⊢ g, f ⊣ g) = (f · d(g), d(g) · f)`
pub fn dialgebra_products(f: &PermPoly, g: &PermPoly) -> (PermPoly, PermPoly) {
    let dg = derive(g);
    (perm_mul(f, &dg), perm_mul(&dg, f))
}

pub fn weight<M: Weight>(m: &M) -> i64 {
    m.weight()
}

/// Ways of reading a single-product term inside the free differential Perm-algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interpretation {
    /// `∘` is `f · d(g)`.
    Derived,
    /// `⊢` is `f · d(g)` and `⊣` is `d(g) · f`.
    Dialgebra,
    /// `∘` is the Perm product itself.
    Plain,
    /// `⊢` is `f · g` and `⊣` is `g · f`.
    PlainDi,
}

impl Interpretation {
    pub fn apply(self, op: Op, f: &PermPoly, g: &PermPoly) -> Result<PermPoly> {
        use Interpretation::*;
        match (self, op) {
            (Derived, Op::Circ) => Ok(derived_product(f, g)),
            (Dialgebra, Op::Vdash) => Ok(perm_mul(f, &derive(g))),
            (Dialgebra, Op::Dashv) => Ok(perm_mul(&derive(g), f)),
            (Plain, Op::Circ) => Ok(perm_mul(f, g)),
            (PlainDi, Op::Vdash) => Ok(perm_mul(f, g)),
            (PlainDi, Op::Dashv) => Ok(perm_mul(g, f)),
            (_, op) => Err(Error::UnknownOp(op.symbol().to_string())),
        }
    }
}

/// Evaluates a term with `x_i ↦ values[i - 1]`.
pub fn eval_term(t: &MagmaTerm, values: &[PermPoly], interp: Interpretation) -> Result<PermPoly> {
    match t {
        MagmaTerm::Var(i) => values
            .get(*i - 1)
            .cloned()
            .ok_or_else(|| Error::Mismatch(format!("no value for x{i}"))),
        MagmaTerm::Node(op, l, r) => {
            let a = eval_term(l, values, interp)?;
            let b = eval_term(r, values, interp)?;
            interp.apply(*op, &a, &b)
        }
    }
}

/// `τ(x) = x`, `τ(f ∘ g) = τ(f) τ(g)'`, with `x_i` read as the generator `x{i}`.
pub fn tau(t: &MagmaTerm) -> PermPoly {
    let n = t.leaves().into_iter().max().unwrap_or(0);
    let values: Vec<PermPoly> = (1..=n).map(generator).collect();
    eval_term(t, &values, Interpretation::Derived).expect("single-product term")
}

/// Forgets the distinguished last letter.
pub fn abelianize(f: &PermPoly) -> CommPoly {
    f.map_basis(|m| CommMonomial::new(m.letters().cloned().collect()))
}

pub fn comm_mul(f: &CommPoly, g: &CommPoly) -> CommPoly {
    f.bilinear(g, |a, b| LinComb::basis(a.mul(b)))
}

/// Distributions of `total` derivatives over `slots` letters.
fn compositions(total: u32, slots: usize) -> Vec<Vec<u32>> {
    if slots == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, slots - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Monomials of weight −1 in `x1..xn` whose last letter has positive order
/// (just `x1` when `n = 1`). With `multilinear` each generator occurs once;
/// otherwise all degree-`n` monomials over `x1..xn` are listed.
pub fn enumerate_sls_basis(n: usize, multilinear: bool) -> Vec<PermMonomial> {
    assert!(n >= 1, "arity must be positive");
    if n == 1 {
        return vec![PermMonomial::letter(DiffGen::var(1))];
    }
    // letter multisets: generator index per slot, sorted
    let mut gen_multisets: Vec<Vec<usize>> = Vec::new();
    if multilinear {
        gen_multisets.push((1..=n).collect());
    } else {
        fn rec(start: usize, left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for g in start..=n {
                cur.push(g);
                rec(g, left - 1, n, cur, out);
                cur.pop();
            }
        }
        rec(1, n, n, &mut Vec::new(), &mut gen_multisets);
    }
    let total = (n - 1) as u32;
    let mut out = std::collections::BTreeSet::new();
    for gens in &gen_multisets {
        for orders in compositions(total, n) {
            let letters: Vec<DiffGen> = gens
                .iter()
                .zip(&orders)
                .map(|(&g, &o)| DiffGen::new(&format!("x{g}"), o))
                .collect();
            for k in 0..n {
                if letters[k].order == 0 {
                    continue;
                }
                let mut prefix = letters.clone();
                let last = prefix.remove(k);
                out.insert(PermMonomial::new(prefix, last));
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{mul, var};

    fn x(i: usize) -> PermPoly {
        generator(i)
    }

    fn mono(s: &str) -> PermPoly {
        PermPoly::basis(s.parse().unwrap())
    }

    #[test]
    fn perm_product_examples() {
        let (a, b, c) = (x(1), x(2), x(3));
        assert_eq!(perm_mul(&a, &perm_mul(&b, &c)), perm_mul(&perm_mul(&a, &b), &c));
        let abc = perm_mul(&perm_mul(&a, &b), &c);
        let bac = perm_mul(&perm_mul(&b, &a), &c);
        assert!((abc - bac).is_zero());
        assert_ne!(perm_mul(&a, &b), perm_mul(&b, &a));
    }

    #[test]
    fn derive_examples() {
        assert_eq!(derive(&x(1)), mono("[| x1']"));
        assert_eq!(derive(&perm_mul(&x(1), &x(2))), mono("[x1' | x2]") + mono("[x1 | x2']"));
        let xx = perm_mul(&x(1), &x(1));
        assert_eq!(derive(&xx), mono("[x1' | x1]") + mono("[x1 | x1']"));
    }

    #[test]
    fn derived_and_di_products() {
        assert_eq!(derived_product(&x(1), &x(2)), mono("[x1 | x2']"));
        let (l, r) = dialgebra_products(&x(1), &x(2));
        assert_eq!(l, mono("[x1 | x2']"));
        assert_eq!(r, mono("[x2' | x1]"));
        assert!(!(l.clone() - r.clone()).is_zero());
        assert!(abelianize(&(l - r)).is_zero());
    }

    #[test]
    fn weights() {
        let m = |s: &str| s.parse::<PermMonomial>().unwrap().weight();
        assert_eq!(m("[| x]"), -1);
        assert_eq!(m("[x | y']"), -1);
        assert_eq!(m("[x y | z'']"), -1);
        assert_eq!(weight(&CommMonomial::new(vec![DiffGen::new("x", 3)])), 2);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&var(1)), x(1));
        assert_eq!(tau(&mul(var(1), var(2))), mono("[x1 | x2']"));
        // (x1∘x2)∘x3 = x1·x2'·x3'
        assert_eq!(tau(&mul(mul(var(1), var(2)), var(3))), mono("[x1 x2' | x3']"));
        // x1∘(x2∘x3) = x1·d(x2 x3') = x1 x2' x3' + x1 x2 x3''
        assert_eq!(
            tau(&mul(var(1), mul(var(2), var(3)))),
            mono("[x1 x2' | x3']") + mono("[x1 x2 | x3'']")
        );
    }

    #[test]
    fn letter_syntax() {
        assert_eq!("x3''".parse::<DiffGen>().unwrap(), DiffGen::new("x3", 2));
        assert_eq!("x3^(2)".parse::<DiffGen>().unwrap(), DiffGen::new("x3", 2));
        assert_eq!(DiffGen::new("y", 5).to_string(), "y^(5)");
        let m: PermMonomial = "[b a | c']".parse().unwrap();
        assert_eq!(m.to_string(), "[a b | c']");
        assert!("[a b c]".parse::<PermMonomial>().is_err());
    }

    #[test]
    fn sls_basis_small() {
        assert_eq!(enumerate_sls_basis(1, true).len(), 1);
        let b2 = enumerate_sls_basis(2, true);
        assert_eq!(b2.len(), 2);
        assert!(b2.contains(&"[x1 | x2']".parse().unwrap()));
        assert!(b2.contains(&"[x2 | x1']".parse().unwrap()));
        assert!(b2.iter().all(|m| m.weight() == -1 && m.last().order > 0));
        // x1, x2: x1 x1', x1 x2', x2 x1', x2 x2'
        assert_eq!(enumerate_sls_basis(2, false).len(), 4);
    }
}
