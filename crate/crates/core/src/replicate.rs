//! Passing from a variety with one product to its dialgebra variety.
//!
//! Each identity `f(x1..xn)` yields `f_i` for every `i`: in every monomial the
//! product is replaced by `⊢` or `⊣` so that the dash points towards `x_i`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::identity::VarietyPresentation;
use crate::lincomb::LinComb;
use crate::term::{node, var, Identity, MagmaTerm, Op};

/// `(x1⊣x2)⊢x3 − (x1⊢x2)⊢x3` and `x1⊣(x2⊢x3) − x1⊣(x2⊣x3)`.
pub fn zero_identities() -> Vec<Identity> {
    let (x1, x2, x3) = (var(1), var(2), var(3));
    vec![
        Identity::from_terms([
            (1, node(Op::Vdash, node(Op::Dashv, x1.clone(), x2.clone()), x3.clone())),
            (-1, node(Op::Vdash, node(Op::Vdash, x1.clone(), x2.clone()), x3.clone())),
        ]),
        Identity::from_terms([
            (1, node(Op::Dashv, x1.clone(), node(Op::Vdash, x2.clone(), x3.clone()))),
            (-1, node(Op::Dashv, x1, node(Op::Dashv, x2, x3))),
        ]),
    ]
}

/// Where the distinguished variable sits relative to the node being rewritten.
#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn dash_toward(t: &MagmaTerm, center: usize, outside: Side) -> MagmaTerm {
    match t {
        MagmaTerm::Var(j) => MagmaTerm::Var(*j),
        MagmaTerm::Node(_, l, r) => {
            let (op, lside, rside) = if l.contains_var(center) {
                (Op::Dashv, outside, Side::Left)
            } else if r.contains_var(center) {
                (Op::Vdash, Side::Right, outside)
            } else {
                match outside {
                    Side::Left => (Op::Dashv, Side::Left, Side::Left),
                    Side::Right => (Op::Vdash, Side::Right, Side::Right),
                }
            };
            node(op, dash_toward(l, center, lside), dash_toward(r, center, rside))
        }
    }
}

/// Rewrites a one-product term so every dash points at `x_center`. Nodes not
/// containing `x_center` point to the side where it lies, which is the
/// canonical choice modulo the 0-identities.
pub fn replicate_term(t: &MagmaTerm, center: usize) -> MagmaTerm {
    // the root contains the center, so the outside side is irrelevant
    dash_toward(t, center, Side::Left)
}

/// The variable a dialgebra monomial is centred at: follow `⊢` to the right
/// and `⊣` to the left.
pub fn center(t: &MagmaTerm) -> Option<usize> {
    match t {
        MagmaTerm::Var(i) => Some(*i),
        MagmaTerm::Node(Op::Vdash, _, r) => center(r),
        MagmaTerm::Node(Op::Dashv, l, _) => center(l),
        MagmaTerm::Node(Op::Circ, _, _) => None,
    }
}

/// Normal form of a dialgebra monomial modulo the 0-identities.
pub fn di_normal_form(t: &MagmaTerm) -> Option<MagmaTerm> {
    let c = center(t)?;
    Some(replicate_term(&t.map_ops(&|_| Op::Circ), c))
}

pub fn replicate(f: &Identity, i: usize) -> Result<Identity> {
    if i == 0 || i > f.arity {
        return Err(Error::Mismatch(format!("variable x{i} out of range 1..={}", f.arity)));
    }
    if f.ops().iter().any(|o| o.is_di()) {
        return Err(Error::Mismatch("replication needs a one-product identity".into()));
    }
    if f.body.keys().any(|t| !t.is_multilinear(f.arity)) {
        return Err(Error::Mismatch("identity is not multilinear".into()));
    }
    let body = f.body.map_basis(|t| replicate_term(t, i));
    Identity::new(body)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n);
            out.push(q);
        }
    }
    out
}

/// Canonical representative of an identity up to renaming variables and
/// scaling; dialgebra monomials are first put in 0-identity normal form.
pub fn canonical_key(id: &Identity) -> Identity {
    let body: LinComb<MagmaTerm> = if id.is_di() {
        id.body.map_basis(|t| di_normal_form(t).expect("dialgebra term"))
    } else {
        id.body.clone()
    };
    permutations(id.arity)
        .into_iter()
        .map(|p| {
            let b = body.map_basis(|t| t.relabel(&|v| p[v - 1]));
            Identity { arity: id.arity, body: b }.monic()
        })
        .min()
        .unwrap_or(Identity { arity: id.arity, body })
}

/// The dialgebra presentation: the 0-identities, then every `f_i` that is new
/// up to variable renaming, scaling and 0-identity rewriting.
pub fn replicate_variety(v: &VarietyPresentation) -> Result<VarietyPresentation> {
    if v.ops != [Op::Circ] {
        return Err(Error::Mismatch(format!("`{}` is not a one-product presentation", v.name)));
    }
    let mut ids = zero_identities();
    let mut seen = BTreeSet::new();
    for f in &v.identities {
        for i in 1..=f.arity {
            let fi = replicate(f, i)?;
            let key = canonical_key(&fi);
            if key.body.is_zero() {
                continue;
            }
            if seen.insert(key) {
                ids.push(fi);
            }
        }
    }
    Ok(VarietyPresentation {
        name: format!("di{}", v.name),
        ops: vec![Op::Vdash, Op::Dashv],
        identities: ids,
    })
}
