//! Multilinear identities: evaluation, consequence spaces and the dimensions
//! of multilinear components of relatively free algebras.

use std::collections::HashMap;

use crate::algebra::StructureAlgebra;
use crate::diffperm::{eval_term, generator, Interpretation, PermPoly};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::replicate::replicate_variety;
use crate::term::{mul, node, var, Identity, MagmaTerm, Op};

/// A variety given by its product symbols and multilinear defining identities.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietyPresentation {
    pub name: String,
    pub ops: Vec<Op>,
    pub identities: Vec<Identity>,
}

impl VarietyPresentation {
    pub fn new(name: &str, ops: Vec<Op>, identities: Vec<Identity>) -> Result<Self> {
        for id in &identities {
            if let Some(op) = id.ops().into_iter().find(|o| !ops.contains(o)) {
                return Err(Error::UnknownOp(op.symbol().to_string()));
            }
        }
        Ok(VarietyPresentation { name: name.to_string(), ops, identities })
    }

    /// Presentation from parsed identities; the alphabet is inferred.
    pub fn from_identities(name: &str, identities: Vec<Identity>) -> Result<Self> {
        let di = identities.iter().any(Identity::is_di);
        let ops = if di { vec![Op::Vdash, Op::Dashv] } else { vec![Op::Circ] };
        Self::new(name, ops, identities)
    }
}

/// `(a,b,c) = (a∘b)∘c − a∘(b∘c)` as terms, with coefficient signs.
fn associator(a: MagmaTerm, b: MagmaTerm, c: MagmaTerm) -> [(i64, MagmaTerm); 2] {
    [(1, mul(mul(a.clone(), b.clone()), c.clone())), (-1, mul(a, mul(b, c)))]
}

pub fn left_symmetry() -> Identity {
    let (x1, x2, x3) = (var(1), var(2), var(3));
    let mut t: Vec<(i64, MagmaTerm)> = associator(x1.clone(), x2.clone(), x3.clone()).to_vec();
    t.extend(associator(x2, x1, x3).into_iter().map(|(c, m)| (-c, m)));
    Identity::from_terms(t)
}

pub fn right_commutativity() -> Identity {
    let (x1, x2, x3) = (var(1), var(2), var(3));
    Identity::from_terms([(1, mul(mul(x1.clone(), x2.clone()), x3.clone())), (-1, mul(mul(x1, x3), x2))])
}

pub fn associativity() -> Identity {
    Identity::from_terms(associator(var(1), var(2), var(3)))
}

pub fn left_commutativity() -> Identity {
    let (x1, x2, x3) = (var(1), var(2), var(3));
    Identity::from_terms([(1, mul(mul(x1.clone(), x2.clone()), x3.clone())), (-1, mul(mul(x2, x1), x3))])
}

pub fn commutativity() -> Identity {
    Identity::from_terms([(1, mul(var(1), var(2))), (-1, mul(var(2), var(1)))])
}

/// `((x1∘x2)∘x3)∘x4 − ((x1∘x3)∘x2)∘x4`
pub fn sls1() -> Identity {
    let x = |i| var(i);
    Identity::from_terms([
        (1, mul(mul(mul(x(1), x(2)), x(3)), x(4))),
        (-1, mul(mul(mul(x(1), x(3)), x(2)), x(4))),
    ])
}

/// `(x1, x2∘x3, x4) − (x2, x1∘x3, x4)`
pub fn sls2() -> Identity {
    let x = |i| var(i);
    let mut t: Vec<(i64, MagmaTerm)> = associator(x(1), mul(x(2), x(3)), x(4)).to_vec();
    t.extend(associator(x(2), mul(x(1), x(3)), x(4)).into_iter().map(|(c, m)| (-c, m)));
    Identity::from_terms(t)
}

pub const BUILTIN_NAMES: [&str; 7] = ["com", "perm", "lsym", "nov", "sls", "dilsym", "dinov"];

/// Built-in presentations: `com`, `perm`, `lsym`, `nov`, `sls`, `dilsym`, `dinov`.
pub fn builtin(name: &str) -> Result<VarietyPresentation> {
    let one = |ids: Vec<Identity>| VarietyPresentation::new(name, vec![Op::Circ], ids);
    match name {
        "com" => one(vec![commutativity(), associativity()]),
        "perm" => one(vec![associativity(), left_commutativity()]),
        "lsym" => one(vec![left_symmetry()]),
        "nov" => one(vec![left_symmetry(), right_commutativity()]),
        "sls" => one(vec![left_symmetry(), sls1(), sls2()]),
        "dilsym" => replicate_variety(&builtin("lsym")?),
        "dinov" => replicate_variety(&builtin("nov")?),
        other => Err(Error::UnknownVariety(other.to_string())),
    }
}

/// Substitutes distinct free generators and expands; the identity holds in
/// the free differential Perm-algebra iff the result is zero.
pub fn eval_in_free_perm(id: &Identity, interp: Interpretation) -> Result<PermPoly> {
    let values: Vec<PermPoly> = (1..=id.arity).map(generator).collect();
    let mut out = PermPoly::zero();
    for (t, c) in id.body.iter() {
        out.add_scaled(&eval_term(t, &values, interp)?, c);
    }
    Ok(out)
}

/// A basis tuple on which an identity does not vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub tuple: Vec<usize>,
    pub value: SparseVec,
}

struct TermEvaluator<'a> {
    alg: &'a StructureAlgebra,
    cache: HashMap<(*const MagmaTerm, Vec<usize>), SparseVec>,
}

impl TermEvaluator<'_> {
    fn eval(&mut self, t: &MagmaTerm, tuple: &[usize], top: bool) -> Result<SparseVec> {
        match t {
            MagmaTerm::Var(i) => Ok(SparseVec::basis(tuple[*i - 1])),
            MagmaTerm::Node(op, l, r) => {
                let key = if top {
                    None
                } else {
                    let k = (t as *const MagmaTerm, t.leaves().iter().map(|&i| tuple[i - 1]).collect());
                    if let Some(v) = self.cache.get(&k) {
                        return Ok(v.clone());
                    }
                    Some(k)
                };
                let a = self.eval(l, tuple, false)?;
                let b = if a.is_zero() { SparseVec::zero() } else { self.eval(r, tuple, false)? };
                let v = if b.is_zero() { b } else { self.alg.mul_op(*op, &a, &b)? };
                if let Some(k) = key {
                    self.cache.insert(k, v.clone());
                }
                Ok(v)
            }
        }
    }
}

fn check_alphabet(id: &Identity, a: &StructureAlgebra) -> Result<()> {
    let ops = a.ops();
    match id.ops().into_iter().find(|o| !ops.contains(o)) {
        Some(op) => Err(Error::Mismatch(format!(
            "identity uses `{op}` but the {} has products {:?}",
            if a.is_di() { "dialgebra" } else { "algebra" },
            ops.iter().map(|o| o.symbol()).collect::<Vec<_>>()
        ))),
        None => Ok(()),
    }
}

/// First basis tuple (in lexicographic order) where the identity fails.
pub fn find_violation(id: &Identity, a: &StructureAlgebra) -> Result<Option<Violation>> {
    check_alphabet(id, a)?;
    let n = a.dim();
    if n == 0 || id.arity == 0 {
        return Ok(None);
    }
    let mut ev = TermEvaluator { alg: a, cache: HashMap::new() };
    let mut tuple = vec![0usize; id.arity];
    loop {
        let mut total = SparseVec::zero();
        for (t, c) in id.body.iter() {
            total.add_scaled(&ev.eval(t, &tuple, true)?, c);
        }
        if !total.is_zero() {
            return Ok(Some(Violation { tuple, value: total }));
        }
        // odometer, last variable fastest
        let mut k = id.arity;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < n {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// True iff the identity vanishes on every basis tuple (hence everywhere).
pub fn eval_in_structure_algebra(id: &Identity, a: &StructureAlgebra) -> Result<bool> {
    Ok(find_violation(id, a)?.is_none())
}

/// First identity of `v` violated in `a`, if any.
pub fn check_presentation(v: &VarietyPresentation, a: &StructureAlgebra) -> Result<Option<(usize, Violation)>> {
    for (k, id) in v.identities.iter().enumerate() {
        if let Some(w) = find_violation(id, a)? {
            return Ok(Some((k, w)));
        }
    }
    Ok(None)
}

/// All multilinear monomials in `x1..xn` over the given products, sorted.
pub fn enumerate_monomials(n: usize, ops: &[Op]) -> Vec<MagmaTerm> {
    fn build(mask: u32, ops: &[Op], memo: &mut HashMap<u32, Vec<MagmaTerm>>) -> Vec<MagmaTerm> {
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let out = if mask.count_ones() == 1 {
            vec![var(mask.trailing_zeros() as usize + 1)]
        } else {
            let mut out = Vec::new();
            // proper nonempty submasks
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                let ls = build(sub, ops, memo);
                let rs = build(mask & !sub, ops, memo);
                for l in &ls {
                    for r in &rs {
                        for &op in ops {
                            out.push(node(op, l.clone(), r.clone()));
                        }
                    }
                }
                sub = (sub - 1) & mask;
            }
            out
        };
        memo.insert(mask, out.clone());
        out
    }
    if n == 0 {
        return Vec::new();
    }
    let mut v = build((1u32 << n) - 1, ops, &mut HashMap::new());
    v.sort();
    v
}

/// Number of multilinear monomials of arity `n` with `k` products.
pub fn monomial_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    // n! · Catalan(n−1) · k^(n−1)
    let mut fact: u128 = 1;
    for i in 1..=n as u128 {
        fact *= i;
    }
    let m = (n - 1) as u128;
    let mut cat: u128 = 1;
    for i in 0..m {
        cat = cat * 2 * (2 * i + 1) / (i + 2);
    }
    fact * cat * (k as u128).pow(m as u32)
}

/// Limit on the size of multilinear spaces we are willing to row-reduce.
#[derive(Clone, Copy, Debug)]
pub struct ResourceBound {
    pub max_monomials: u128,
}

impl Default for ResourceBound {
    fn default() -> Self {
        ResourceBound { max_monomials: 40_000 }
    }
}

/// The multilinear component of arity `n` of the free algebra of `v`
/// together with the row-reduced span of all consequences of `v`.
pub struct ConsequenceSpace {
    pub arity: usize,
    pub monomials: Vec<MagmaTerm>,
    pub index: HashMap<MagmaTerm, usize>,
    pub relations: Echelon,
}

impl ConsequenceSpace {
    pub fn build(v: &VarietyPresentation, n: usize, bound: ResourceBound) -> Result<Self> {
        let count = monomial_count(n, v.ops.len());
        if count > bound.max_monomials {
            return Err(Error::ArityBound { got: n, max: max_arity(v.ops.len(), bound) });
        }
        let monomials = enumerate_monomials(n, &v.ops);
        let index: HashMap<MagmaTerm, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let ids: Vec<Identity> = v.identities.iter().filter(|f| f.arity <= n && !f.body.is_zero()).map(Identity::monic).collect();
        let mut relations = Echelon::new();
        for m in &monomials {
            for pos in 0..m.size() {
                let sub = m.subterm(pos);
                for f in &ids {
                    if f.arity > sub.arity() {
                        continue;
                    }
                    let (pattern, _) = f.body.leading().expect("nonzero identity");
                    let mut subs = vec![None; f.arity];
                    if !sub.match_pattern(pattern, &mut subs) {
                        continue;
                    }
                    let subs: Vec<MagmaTerm> = subs.into_iter().map(|s| s.expect("multilinear pattern")).collect();
                    let mut row = SparseVec::zero();
                    for (t, c) in f.body.iter() {
                        let inst = m.replace_at(pos, &t.substitute(&subs));
                        row.add_term(index[&inst], c.clone());
                    }
                    relations.insert(row);
                }
            }
        }
        relations.compress();
        Ok(ConsequenceSpace { arity: n, monomials, index, relations })
    }

    pub fn dim(&self) -> usize {
        self.monomials.len() - self.relations.rank()
    }

    pub fn vector(&self, body: &crate::lincomb::LinComb<MagmaTerm>) -> Result<SparseVec> {
        let mut v = SparseVec::zero();
        for (t, c) in body.iter() {
            let k = self
                .index
                .get(t)
                .ok_or_else(|| Error::Mismatch(format!("term {t} is not a multilinear monomial of arity {}", self.arity)))?;
            v.add_term(*k, c.clone());
        }
        Ok(v)
    }

    pub fn contains(&self, id: &Identity) -> Result<bool> {
        Ok(self.relations.contains(&self.vector(&id.body)?))
    }
}

fn max_arity(k: usize, bound: ResourceBound) -> usize {
    (1..).take_while(|&n| monomial_count(n, k) <= bound.max_monomials).last().unwrap_or(0)
}

/// Dimension of the arity-`n` multilinear component of the free `v`-algebra.
pub fn multilinear_dim(v: &VarietyPresentation, n: usize) -> Result<usize> {
    multilinear_dim_bounded(v, n, ResourceBound::default())
}

pub fn multilinear_dim_bounded(v: &VarietyPresentation, n: usize, bound: ResourceBound) -> Result<usize> {
    Ok(ConsequenceSpace::build(v, n, bound)?.dim())
}

/// True iff `candidate` follows from the identities of `v`.
pub fn is_consequence(candidate: &Identity, v: &VarietyPresentation) -> Result<bool> {
    let space = ConsequenceSpace::build(v, candidate.arity, ResourceBound::default())?;
    space.contains(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::table_from;
    use crate::term::parse_identity;

    #[test]
    fn monomial_counts() {
        assert_eq!(enumerate_monomials(3, &[Op::Circ]).len(), 12);
        assert_eq!(monomial_count(3, 1), 12);
        assert_eq!(monomial_count(5, 1), 1680);
        assert_eq!(enumerate_monomials(3, &[Op::Vdash, Op::Dashv]).len(), 48);
        assert_eq!(monomial_count(6, 1), 30240);
    }

    #[test]
    fn free_perm_evaluation() {
        let lsym = left_symmetry();
        assert!(eval_in_free_perm(&lsym, Interpretation::Derived).unwrap().is_zero());
        assert!(eval_in_free_perm(&sls1(), Interpretation::Derived).unwrap().is_zero());
        assert!(eval_in_free_perm(&sls2(), Interpretation::Derived).unwrap().is_zero());
        assert!(!eval_in_free_perm(&associativity(), Interpretation::Derived).unwrap().is_zero());
        assert!(matches!(
            eval_in_free_perm(&lsym, Interpretation::Dialgebra),
            Err(Error::UnknownOp(_))
        ));
    }

    #[test]
    fn structure_algebra_evaluation() {
        // e1∘e1 = e1, everything else zero
        let a = StructureAlgebra::new(vec!["e1".into(), "e2".into()], table_from(2, &[(0, 0, &[(0, 1)])]));
        assert!(eval_in_structure_algebra(&left_symmetry(), &a).unwrap());
        assert!(eval_in_structure_algebra(&right_commutativity(), &a).unwrap());
        let z = StructureAlgebra::zero(3);
        assert!(eval_in_structure_algebra(&associativity(), &z).unwrap());
        // e1∘e2 = e2 only: (e1 e2) e1 = 0 but e1 (e2 e1) = 0; (e1 e1) e2 = 0 vs e1 (e1 e2) = e2
        let b = StructureAlgebra::new(vec!["e1".into(), "e2".into()], table_from(2, &[(0, 1, &[(1, 1)])]));
        let v = find_violation(&associativity(), &b).unwrap().unwrap();
        assert_eq!(v.tuple, vec![0, 0, 1]);
        let di = parse_identity("x1|-x2 - x1-|x2").unwrap();
        assert!(eval_in_structure_algebra(&di, &a).is_err());
    }

    #[test]
    fn small_dimensions() {
        let perm = builtin("perm").unwrap();
        for n in 1..=4 {
            assert_eq!(multilinear_dim(&perm, n).unwrap(), n);
        }
        let lsym = builtin("lsym").unwrap();
        assert_eq!(multilinear_dim(&lsym, 3).unwrap(), 9);
        let nov = builtin("nov").unwrap();
        assert_eq!(multilinear_dim(&nov, 3).unwrap(), 6);
        assert_eq!(multilinear_dim(&builtin("com").unwrap(), 3).unwrap(), 1);
    }

    #[test]
    fn presentations_contain_their_identities() {
        for name in BUILTIN_NAMES {
            let v = builtin(name).unwrap();
            for id in &v.identities {
                assert!(is_consequence(id, &v).unwrap(), "{name}: {id}");
            }
        }
    }

    #[test]
    fn resource_bound_is_enforced() {
        let lsym = builtin("lsym").unwrap();
        assert!(matches!(multilinear_dim(&lsym, 7), Err(Error::ArityBound { .. })));
    }
}
