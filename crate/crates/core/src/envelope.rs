//! The enveloping left-symmetric dialgebra on the tensor algebra of a
//! finite-dimensional left-symmetric algebra, truncated at a word length.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::algebra::StructureAlgebra;
use crate::error::{Error, Result};
use crate::identity::{builtin, check_presentation};
use crate::replicate::replicate_variety;
use crate::linalg::SparseVec;
use crate::lincomb::LinComb;
use crate::scalar::Scalar;
use crate::term::{MagmaTerm, Op};

/// Nonempty sequence of basis indices.
pub type Word = Vec<usize>;
pub type TensorElement = LinComb<Word>;

/// Maximum word length `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationBound(pub usize);

impl TruncationBound {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Algebra("truncation bound must be positive".into()));
        }
        Ok(TruncationBound(d))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Largest word length occurring in `u` (0 for the zero element).
pub fn grade(u: &TensorElement) -> usize {
    u.keys().map(Vec::len).max().unwrap_or(0)
}

/// Homogeneous component of `u` of the given length.
pub fn component(u: &TensorElement, k: usize) -> TensorElement {
    u.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (w.clone(), c.clone())).collect()
}

pub fn embed(v: &SparseVec) -> TensorElement {
    v.map_basis(|&i| vec![i])
}

pub fn letter(i: usize) -> TensorElement {
    TensorElement::basis(vec![i])
}

/// Concatenation product of `T(A)`.
pub fn concat(u: &TensorElement, v: &TensorElement) -> TensorElement {
    u.bilinear(v, |a, b| {
        let mut w = a.clone();
        w.extend_from_slice(b);
        TensorElement::basis(w)
    })
}

/// `D(A)` for a left-symmetric `A`, words up to length `D`.
pub struct Envelope<'a> {
    alg: &'a StructureAlgebra,
    bound: TruncationBound,
    // e_i ⊢ word
    cache: RefCell<HashMap<(usize, Word), TensorElement>>,
}

impl<'a> Envelope<'a> {
    pub fn new(alg: &'a StructureAlgebra, bound: TruncationBound) -> Result<Self> {
        if alg.is_di() {
            return Err(Error::Mismatch("the envelope takes a one-product algebra".into()));
        }
        Ok(Envelope { alg, bound, cache: RefCell::new(HashMap::new()) })
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        self.alg
    }

    pub fn bound(&self) -> usize {
        self.bound.0
    }

    fn check(&self, got: usize) -> Result<()> {
        if got > self.bound.0 {
            return Err(Error::Overflow { got, bound: self.bound.0 });
        }
        Ok(())
    }

    /// Left-normed evaluation `((a_1∘a_2)∘…)∘a_n`.
    pub fn m_word(&self, w: &[usize]) -> SparseVec {
        let Some((&first, rest)) = w.split_first() else {
            return SparseVec::zero();
        };
        let mut acc = SparseVec::basis(first);
        for &a in rest {
            if acc.is_zero() {
                break;
            }
            acc = acc.map_linear(|&i| self.alg.product[i][a].clone());
        }
        acc
    }

    pub fn m(&self, u: &TensorElement) -> SparseVec {
        let mut out = SparseVec::zero();
        for (w, c) in u.iter() {
            out.add_scaled(&self.m_word(w), c);
        }
        out
    }

    fn vdash_basis(&self, i: usize, w: &[usize]) -> TensorElement {
        let key = (i, w.to_vec());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let (&a, head) = w.split_last().expect("nonempty word");
        let ia = &self.alg.product[i][a];
        let out = if head.is_empty() {
            embed(ia)
        } else {
            let head_el = TensorElement::basis(head.to_vec());
            let mut out = concat(&self.vdash_basis(i, head), &letter(a));
            out = out + concat(&head_el, &embed(ia));
            let mut hia = head.to_vec();
            hia.extend([i, a]);
            out.add_term(hia, -Scalar::one());
            out
        };
        self.cache.borrow_mut().insert(key, out.clone());
        out
    }

    /// `x ⊢ w` for `x ∈ A`; same as `u ⊢ w` whenever `M(u) = x`.
    pub fn vdash_from(&self, x: &SparseVec, w: &TensorElement) -> Result<TensorElement> {
        self.check(grade(w) + 1)?;
        let mut out = TensorElement::zero();
        for (&i, ci) in x.iter() {
            for (word, cw) in w.iter() {
                out.add_scaled(&self.vdash_basis(i, word), &(ci * cw));
            }
        }
        Ok(out)
    }

    pub fn vdash(&self, u: &TensorElement, w: &TensorElement) -> Result<TensorElement> {
        self.vdash_from(&self.m(u), w)
    }

    /// `u ⊣ w = u M(w)`.
    pub fn dashv(&self, u: &TensorElement, w: &TensorElement) -> Result<TensorElement> {
        self.check(grade(u) + 1)?;
        Ok(concat(u, &embed(&self.m(w))))
    }

    pub fn apply(&self, op: Op, u: &TensorElement, w: &TensorElement) -> Result<TensorElement> {
        match op {
            Op::Vdash => self.vdash(u, w),
            Op::Dashv => self.dashv(u, w),
            Op::Circ => Err(Error::UnknownOp(op.symbol().into())),
        }
    }

    /// Evaluates a dialgebra term with `x_i ↦ values[i-1]`.
    pub fn eval_term(&self, t: &MagmaTerm, values: &[TensorElement]) -> Result<TensorElement> {
        match t {
            MagmaTerm::Var(i) => Ok(values[i - 1].clone()),
            MagmaTerm::Node(op, l, r) => {
                let a = self.eval_term(l, values)?;
                let b = self.eval_term(r, values)?;
                self.apply(*op, &a, &b)
            }
        }
    }

    /// Left-hand side minus right-hand side of an identity at `values`.
    pub fn eval_identity(&self, id: &crate::term::Identity, values: &[TensorElement]) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        for (t, c) in id.body.iter() {
            out.add_scaled(&self.eval_term(t, values)?, c);
        }
        Ok(out)
    }
}

/// Homomorphism `D(A) → B` extending `tau: A → (B, ⊢)`.
pub struct UniversalMap<'a> {
    b: &'a StructureAlgebra,
    tau: Vec<SparseVec>,
}

impl<'a> UniversalMap<'a> {
    /// `tau[i]` is the image of the `i`-th basis vector of `a`.
    pub fn new(a: &StructureAlgebra, tau: Vec<SparseVec>, b: &'a StructureAlgebra) -> Result<Self> {
        if !b.is_di() {
            return Err(Error::Mismatch("target must be a dialgebra".into()));
        }
        if tau.len() != a.dim() {
            return Err(Error::BasisMismatch(tau.len(), a.dim()));
        }
        if let Some((k, v)) = check_presentation(&builtin("dilsym")?, b)? {
            return Err(Error::Violated(format!(
                "target fails left-symmetric dialgebra identity #{} at {:?}",
                k + 1,
                v.tuple
            )));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = a.product[i][j].map_linear(|&k| tau[k].clone());
                let rhs = b.mul_op(Op::Vdash, &tau[i], &tau[j])?;
                if lhs != rhs {
                    return Err(Error::Violated(format!(
                        "tau(e{0}∘e{1}) != tau(e{0})⊢tau(e{1})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(UniversalMap { b, tau })
    }

    /// `φ(a_1…a_n) = (…(τa_1 ⊣ τa_2) ⊣ …) ⊣ τa_n`.
    pub fn apply(&self, u: &TensorElement) -> Result<SparseVec> {
        let mut out = SparseVec::zero();
        for (w, c) in u.iter() {
            let mut acc = self.tau[w[0]].clone();
            for &a in &w[1..] {
                acc = self.b.mul_op(Op::Dashv, &acc, &self.tau[a])?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }
}

pub fn universal_map(
    u: &TensorElement,
    a: &StructureAlgebra,
    tau: Vec<SparseVec>,
    b: &StructureAlgebra,
) -> Result<SparseVec> {
    UniversalMap::new(a, tau, b)?.apply(u)
}

/// Upper bound on the grade of `t` for arguments of the given lengths, or
/// `None` if some product would leave the bound.
fn formal_grade(t: &MagmaTerm, lens: &[usize], d: usize) -> Option<usize> {
    match t {
        MagmaTerm::Var(i) => Some(lens[i - 1]),
        MagmaTerm::Node(op, l, r) => {
            let (gl, gr) = (formal_grade(l, lens, d)?, formal_grade(r, lens, d)?);
            let g = match op {
                Op::Vdash => gr + 1,
                _ => gl + 1,
            };
            (g <= d).then_some(g)
        }
    }
}

/// True if every occurrence of `x_v` lies in a left factor of `⊢` or a right
/// factor of `⊣`. Those factors enter only through `M`, and `M` of a product
/// depends only on `M` of its factors, so such an argument enters only
/// through `M`.
fn through_m_only(t: &MagmaTerm, v: usize) -> bool {
    match t {
        MagmaTerm::Var(i) => *i != v,
        MagmaTerm::Node(op, l, r) => {
            let l_ok = *op == Op::Vdash || through_m_only(l, v);
            let r_ok = *op == Op::Dashv || through_m_only(r, v);
            l_ok && r_ok
        }
    }
}

fn words_of_len(n: usize, len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![vec![]];
    for _ in 0..len {
        out = out.iter().flat_map(|w| (0..n).map(move |y| [w.as_slice(), &[y]].concat())).collect();
    }
    out
}

/// Results of the envelope checks on one algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnvelopeSuite {
    pub bound: usize,
    pub pairs: usize,
    pub mprod_failures: Vec<String>,
    pub grade_failures: Vec<String>,
    pub triples: usize,
    pub identity_failures: Vec<String>,
}

impl EnvelopeSuite {
    pub fn passed(&self) -> bool {
        self.mprod_failures.is_empty() && self.grade_failures.is_empty() && self.identity_failures.is_empty()
    }
}

/// `u⊢w = M(u)⊢w`, `u⊣w = u⊣M(w)`, `M(u⊢w) = M(u⊣w) = M(u)∘M(w)` and the
/// grade law on random word pairs; every replicated left-symmetric identity
/// on every basis-word triple whose formal grades stay within the bound.
/// An argument that enters only through `M` contributes `M(word) ∈ A`, so
/// by linearity it ranges over basis letters only.
pub fn envelope_suite(alg: &StructureAlgebra, d: usize, pairs: usize, seed: u64) -> Result<EnvelopeSuite> {
    use rand::{Rng, SeedableRng};
    if d < 2 {
        return Err(Error::Algebra("truncation bound must be at least 2".into()));
    }
    let lsym = builtin("lsym")?;
    if let Some((_, v)) = check_presentation(&lsym, alg)? {
        return Err(Error::Violated(format!("not left-symmetric at {:?}", v.tuple)));
    }
    let env = Envelope::new(alg, TruncationBound::new(d)?)?;
    let n = alg.dim();
    let mut out = EnvelopeSuite { bound: d, pairs, ..Default::default() };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let mut pick = || -> Word {
            let len = rng.gen_range(1..d);
            (0..len).map(|_| rng.gen_range(0..n)).collect()
        };
        let (wu, ww) = (pick(), pick());
        let (u, w) = (TensorElement::basis(wu.clone()), TensorElement::basis(ww.clone()));
        let (mu, mw) = (embed(&env.m(&u)), embed(&env.m(&w)));
        let vd = env.vdash(&u, &w)?;
        let dv = env.dashv(&u, &w)?;
        let prod = alg.mul(&env.m(&u), &env.m(&w));
        let checks = [
            ("u⊢w = M(u)⊢w", vd == env.vdash(&mu, &w)?),
            ("u⊣w = u⊣M(w)", dv == env.dashv(&u, &mw)?),
            ("M(u⊢w) = M(u)∘M(w)", env.m(&vd) == prod),
            ("M(u⊣w) = M(u)∘M(w)", env.m(&dv) == prod),
        ];
        for (name, ok) in checks {
            if !ok {
                out.mprod_failures.push(format!("{name} at u={wu:?}, w={ww:?}"));
            }
        }
        if !vd.keys().all(|x| x.len() <= ww.len() + 1) || !dv.keys().all(|x| x.len() == wu.len() + 1) {
            out.grade_failures.push(format!("u={wu:?}, w={ww:?}"));
        }
    }
    let by_len: Vec<Vec<Word>> = (0..=d).map(|k| words_of_len(n, k)).collect();
    let di = replicate_variety(&lsym)?;
    for id in &di.identities {
        let max_len: Vec<usize> = (1..=3).map(|v| if id.body.keys().all(|t| through_m_only(t, v)) { 1 } else { d }).collect();
        for l1 in 1..=max_len[0] {
            for l2 in 1..=max_len[1] {
                for l3 in 1..=max_len[2] {
                    let lens = [l1, l2, l3];
                    if id.body.keys().any(|t| formal_grade(t, &lens[..id.arity], d).is_none()) {
                        continue;
                    }
                    for x in &by_len[l1] {
                        for y in &by_len[l2] {
                            for z in &by_len[l3] {
                                let vals = [x, y, z].map(|w| TensorElement::basis(w.clone()));
                                out.triples += 1;
                                if !env.eval_identity(id, &vals[..id.arity])?.is_zero() {
                                    out.identity_failures.push(format!("{id} at {x:?}, {y:?}, {z:?}"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
