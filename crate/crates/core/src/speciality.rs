//! Niceness of SLS-algebras and the ideals `K`, `I`, `V`, `J` of the
//! enveloping dialgebra, computed exactly up to a word-length bound.
//!
//! `I = A⊗K`, so `T(A)/I` embeds into `A ⊕ A⊗Hom(A, A/R)` where `R` is the
//! right annihilator `{z : z∘A = 0}`: a word `c w` maps to
//! `c ⊗ (a ↦ M(a w) mod R)`. Membership in `I` and `J` is decided there.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use crate::algebra::StructureAlgebra;
use crate::envelope::{concat, embed, grade, letter, Envelope, TensorElement, TruncationBound, Word};
use crate::error::{Error, Result};
use crate::fixtures::rng;
use crate::identity::{builtin, find_violation, Violation};
use crate::linalg::{express, kernel, Echelon, SparseVec};
use crate::replicate::replicate_variety;
use crate::scalar::Scalar;
use crate::term::Identity;

/// `Σ α a_i ⊗ b_i` as `(i, j, α)` triples.
pub type Relation = Vec<(usize, usize, Scalar)>;

#[derive(Clone, Debug, PartialEq)]
pub struct NiceWitness {
    pub relation: Relation,
    pub multiplier: usize,
    /// `Σ α (a_i∘x)∘b_i`, nonzero.
    pub value: SparseVec,
}

/// `μ_x` on the basis `e_i∘e_j` of `A∘A` listed in the report.
#[derive(Clone, Debug, PartialEq)]
pub struct MuMap {
    pub x: usize,
    pub images: Vec<SparseVec>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NicenessReport {
    pub nice: bool,
    pub relations_dim: usize,
    pub witness: Option<NiceWitness>,
    pub square_basis: Vec<(usize, usize)>,
    pub mu: Vec<MuMap>,
}

fn product_of(a: &StructureAlgebra, rel: &Relation) -> SparseVec {
    let mut out = SparseVec::zero();
    for (i, j, c) in rel {
        out.add_scaled(&a.product[*i][*j], c);
    }
    out
}

fn twisted_product(a: &StructureAlgebra, rel: &Relation, x: usize) -> SparseVec {
    let mut out = SparseVec::zero();
    for (i, j, c) in rel {
        let ix = &a.product[*i][x];
        out.add_scaled(&a.mul(ix, &a.e(*j)), c);
    }
    out
}

/// First SLS identity failing in `a`, with its failing tuple.
pub fn sls_violation(a: &StructureAlgebra) -> Result<Option<(Identity, Violation)>> {
    for id in builtin("sls")?.identities {
        if let Some(v) = find_violation(&id, a)? {
            return Ok(Some((id, v)));
        }
    }
    Ok(None)
}

fn require_sls(a: &StructureAlgebra) -> Result<()> {
    if let Some((id, v)) = sls_violation(a)? {
        let names: Vec<&str> = v.tuple.iter().map(|&i| a.basis[i].as_str()).collect();
        return Err(Error::Violated(format!("not an SLS-algebra: `{id}` fails at ({})", names.join(", "))));
    }
    Ok(())
}

pub fn check_nice(a: &StructureAlgebra) -> Result<NicenessReport> {
    if a.is_di() {
        return Err(Error::Mismatch("niceness is defined for one-product algebras".into()));
    }
    require_sls(a)?;
    let n = a.dim();
    let images: Vec<SparseVec> = (0..n * n).map(|p| a.product[p / n][p % n].clone()).collect();
    let rels = kernel(&images);
    let mut candidates: Vec<Relation> =
        (0..n * n).filter(|&p| images[p].is_zero()).map(|p| vec![(p / n, p % n, Scalar::one())]).collect();
    candidates.extend(rels.iter().map(|r| r.iter().map(|(&p, c)| (p / n, p % n, c.clone())).collect()));
    for rel in candidates {
        for x in 0..n {
            let value = twisted_product(a, &rel, x);
            if !value.is_zero() {
                return Ok(NicenessReport {
                    nice: false,
                    relations_dim: rels.len(),
                    witness: Some(NiceWitness { relation: rel, multiplier: x, value }),
                    square_basis: vec![],
                    mu: vec![],
                });
            }
        }
    }
    let mut ech = Echelon::new();
    let square_basis: Vec<(usize, usize)> =
        (0..n * n).filter(|&p| ech.insert(images[p].clone())).map(|p| (p / n, p % n)).collect();
    let mu = (0..n)
        .map(|x| MuMap {
            x,
            images: square_basis.iter().map(|&(i, j)| a.mul(&a.product[i][x], &a.e(j))).collect(),
        })
        .collect();
    Ok(NicenessReport { nice: true, relations_dim: rels.len(), witness: None, square_basis, mu })
}

impl NicenessReport {
    fn squares(&self, a: &StructureAlgebra) -> Vec<SparseVec> {
        self.square_basis.iter().map(|&(i, j)| a.product[i][j].clone()).collect()
    }

    /// `μ_x(v)` for `v ∈ A∘A`.
    pub fn mu_apply(&self, a: &StructureAlgebra, x: usize, v: &SparseVec) -> Option<SparseVec> {
        let coords = express(&self.squares(a), v)?;
        let mut out = SparseVec::zero();
        for (c, img) in coords.iter().zip(&self.mu[x].images) {
            out.add_scaled(img, c);
        }
        Some(out)
    }

    /// Re-checks the report against `a` from scratch.
    pub fn verify(&self, a: &StructureAlgebra) -> Result<()> {
        let n = a.dim();
        let fail = |m: String| Err(Error::Violated(m));
        if let Some(w) = &self.witness {
            if self.nice {
                return fail("a nice verdict cannot carry a witness".into());
            }
            if w.relation.iter().any(|&(i, j, _)| i >= n || j >= n) || w.multiplier >= n {
                return Err(Error::BasisMismatch(n, n));
            }
            if !product_of(a, &w.relation).is_zero() {
                return fail("witness relation does not vanish".into());
            }
            let v = twisted_product(a, &w.relation, w.multiplier);
            if v.is_zero() || v != w.value {
                return fail("witness value does not match".into());
            }
            return Ok(());
        }
        if !self.nice {
            return fail("not-nice verdict without a witness".into());
        }
        let squares = self.squares(a);
        let mut ech = Echelon::new();
        if !squares.iter().all(|s| ech.insert(s.clone())) {
            return fail("square basis is dependent".into());
        }
        if self.mu.len() != n || self.mu.iter().enumerate().any(|(x, m)| m.x != x || m.images.len() != squares.len()) {
            return fail("mu maps have the wrong shape".into());
        }
        for i in 0..n {
            for j in 0..n {
                let ij = &a.product[i][j];
                if !ech.contains(ij) {
                    return fail(format!("e{}∘e{} is outside the square span", i + 1, j + 1));
                }
                for x in 0..n {
                    let want = a.mul(&a.product[i][x], &a.e(j));
                    if self.mu_apply(a, x, ij).as_ref() != Some(&want) {
                        return fail(format!("mu_{} fails on e{}∘e{}", x + 1, i + 1, j + 1));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Dimension counts of the truncated ideals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDims {
    pub bound: usize,
    /// `dim K_k` for homogeneous grades `k = 1..=D`.
    pub k_dims: Vec<u64>,
    /// `dim (K ∩ T_{≤D-1})`; `K` is not graded.
    pub k_trunc_dim: u64,
    pub i_dim: u64,
    /// Span of the generators `(a∘b)x − (a∘x)∘b`.
    pub w_dim: usize,
    /// Known when the generators meet `A` trivially.
    pub v_dim: Option<u64>,
    pub v_mod_i_dim: usize,
    pub j_dim: u64,
}

/// `K`, `I = A⊗K`, `V` and `J = I + V` inside `T_{≤D}(A)`.
pub struct IdealSpan<'a> {
    alg: &'a StructureAlgebra,
    env: Envelope<'a>,
    n: usize,
    r: Echelon,
    psi: RefCell<HashMap<Word, Vec<SparseVec>>>,
    qv: Echelon,
    w_basis: Vec<TensorElement>,
    w_cap_a: Vec<SparseVec>,
    pub dims: IdealDims,
}

fn pow(n: usize, k: usize) -> u64 {
    (n as u64).pow(k as u32)
}

pub fn compute_ideals(a: &StructureAlgebra, d: usize) -> Result<IdealSpan<'_>> {
    if d < 2 {
        return Err(Error::Algebra("truncation bound must be at least 2".into()));
    }
    require_sls(a)?;
    let n = a.dim();
    let env = Envelope::new(a, TruncationBound::new(d)?)?;
    let ann: Vec<SparseVec> = (0..n)
        .map(|i| {
            let mut v = SparseVec::zero();
            for b in 0..n {
                for (&k, c) in a.product[i][b].iter() {
                    v.add_term(b * n + k, c.clone());
                }
            }
            v
        })
        .collect();
    let mut r = Echelon::new();
    for z in kernel(&ann) {
        r.insert(z);
    }
    let mut span = IdealSpan {
        alg: a,
        env,
        n,
        r,
        psi: RefCell::new(HashMap::new()),
        qv: Echelon::new(),
        w_basis: vec![],
        w_cap_a: vec![],
        dims: IdealDims {
            bound: d,
            k_dims: vec![],
            k_trunc_dim: 0,
            i_dim: 0,
            w_dim: 0,
            v_dim: None,
            v_mod_i_dim: 0,
            j_dim: 0,
        },
    };
    let (k_dims, k_trunc_dim) = span.build_k(d);
    span.dims.k_dims = k_dims;
    span.dims.k_trunc_dim = k_trunc_dim;
    span.dims.i_dim = n as u64 * k_trunc_dim;
    span.build_v(d);
    Ok(span)
}

impl<'a> IdealSpan<'a> {
    pub fn algebra(&self) -> &StructureAlgebra {
        self.alg
    }

    pub fn envelope(&self) -> &Envelope<'a> {
        &self.env
    }

    pub fn bound(&self) -> usize {
        self.dims.bound
    }

    fn right_mul(&self, v: &SparseVec, y: usize) -> SparseVec {
        self.r.reduce(&v.map_linear(|&i| self.alg.product[i][y].clone()))
    }

    /// `a ↦ M(e_a w) mod R`.
    fn psi(&self, w: &[usize]) -> Vec<SparseVec> {
        if let Some(v) = self.psi.borrow().get(w) {
            return v.clone();
        }
        let (&y, head) = w.split_last().expect("nonempty word");
        let out: Vec<SparseVec> = if head.is_empty() {
            (0..self.n).map(|a| self.r.reduce(&self.alg.product[a][y])).collect()
        } else {
            self.psi(head).iter().map(|v| self.right_mul(v, y)).collect()
        };
        self.psi.borrow_mut().insert(w.to_vec(), out.clone());
        out
    }

    fn flatten(&self, slots: &[SparseVec]) -> SparseVec {
        let mut out = SparseVec::zero();
        for (a, v) in slots.iter().enumerate() {
            for (&k, c) in v.iter() {
                out.add_term(a * self.n + k, c.clone());
            }
        }
        out
    }

    fn a_block(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Image in `T(A)/I`; zero exactly on `I`.
    pub fn quotient(&self, x: &TensorElement) -> SparseVec {
        let n = self.n;
        let mut out = SparseVec::zero();
        for (w, c) in x.iter() {
            if w.len() == 1 {
                out.add_term(self.a_block() + w[0], c.clone());
            } else {
                for (k, v) in self.flatten(&self.psi(&w[1..])).iter() {
                    out.add_term(w[0] * n * n + k, v * c);
                }
            }
        }
        out
    }

    /// `q(x) ↦ q(x·e_y)`.
    fn act(&self, v: &SparseVec, y: usize) -> SparseVec {
        let n = self.n;
        let mut slots: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        let mut out = SparseVec::zero();
        let first = self.psi(&[y]);
        for (&k, c) in v.iter() {
            if k >= self.a_block() {
                let g = k - self.a_block();
                for (j, v) in self.flatten(&first).iter() {
                    out.add_term(g * n * n + j, v * c);
                }
            } else {
                slots.entry((k / (n * n), (k / n) % n)).or_default().add_term(k % n, c.clone());
            }
        }
        for ((g, a), v) in slots {
            for (&k, c) in self.right_mul(&v, y).iter() {
                out.add_term(g * n * n + a * n + k, c.clone());
            }
        }
        out
    }

    fn build_k(&self, d: usize) -> (Vec<u64>, u64) {
        let n = self.n;
        let mut total = Echelon::new();
        let mut layer: Vec<SparseVec> = (0..n).map(|y| self.flatten(&self.psi(&[y]))).collect();
        let mut trunc_rank = 0;
        let mut k_dims = Vec::new();
        for k in 1..=d {
            let mut ech = Echelon::new();
            for v in layer {
                ech.insert(v);
            }
            k_dims.push(pow(n, k) - ech.rank() as u64);
            for v in ech.rows() {
                total.insert(v.clone());
            }
            if k + 1 == d {
                trunc_rank = total.rank();
            }
            layer = ech
                .rows()
                .flat_map(|v| {
                    let slots: Vec<SparseVec> = (0..n)
                        .map(|a| v.iter().filter(|(&i, _)| i / n == a).map(|(&i, c)| (i % n, c.clone())).collect())
                        .collect();
                    (0..n).map(move |y| slots.iter().map(|s| self.right_mul(s, y)).collect::<Vec<_>>())
                })
                .map(|s| self.flatten(&s))
                .collect();
        }
        let t_dim: u64 = (1..d).map(|k| pow(n, k)).sum();
        (k_dims, t_dim - trunc_rank as u64)
    }

    /// `(e_a∘e_b)e_x − (e_a∘e_x)∘e_b`.
    pub fn w_generator(&self, a: usize, b: usize, x: usize) -> TensorElement {
        let alg = self.alg;
        concat(&embed(&alg.product[a][b]), &letter(x)) - embed(&alg.mul(&alg.product[a][x], &alg.e(b)))
    }

    fn build_v(&mut self, d: usize) {
        let n = self.n;
        // grade-2 words first so that pivots in the A block mean W ∩ A
        let encode = |x: &TensorElement| -> SparseVec {
            x.iter().map(|(w, c)| (if w.len() == 2 { w[0] * n + w[1] } else { n * n + w[0] }, c.clone())).collect()
        };
        let decode = |v: &SparseVec| -> TensorElement {
            v.iter().map(|(&k, c)| (if k < n * n { vec![k / n, k % n] } else { vec![k - n * n] }, c.clone())).collect()
        };
        let mut ech = Echelon::new();
        for a in 0..n {
            for b in 0..n {
                for x in 0..n {
                    ech.insert(encode(&self.w_generator(a, b, x)));
                }
            }
        }
        ech.compress();
        self.w_basis = ech.rows().map(decode).collect();
        self.w_cap_a = ech
            .rows()
            .filter(|r| r.leading().is_some_and(|(&k, _)| k >= n * n))
            .map(|r| r.map_basis(|&k| k - n * n))
            .collect();
        self.dims.w_dim = self.w_basis.len();
        if self.w_cap_a.is_empty() {
            let words: u64 = (0..=d - 2).map(|m| pow(n, m)).sum();
            self.dims.v_dim = Some(self.dims.w_dim as u64 * words);
        }
        let mut layer = Echelon::new();
        for w in &self.w_basis {
            layer.insert(self.quotient(w));
        }
        for _ in 0..d - 2 {
            let mut next = Echelon::new();
            for v in layer.rows() {
                self.qv.insert(v.clone());
                for y in 0..n {
                    next.insert(self.act(v, y));
                }
            }
            layer = next;
        }
        for v in layer.rows() {
            self.qv.insert(v.clone());
        }
        self.qv.compress();
        self.dims.v_mod_i_dim = self.qv.rank();
        self.dims.j_dim = self.dims.i_dim + self.qv.rank() as u64;
    }

    pub fn w_basis(&self) -> &[TensorElement] {
        &self.w_basis
    }

    /// Basis of `W ∩ A`, hence of `V_{≤2} ∩ A`.
    pub fn w_cap_a(&self) -> &[SparseVec] {
        &self.w_cap_a
    }

    fn in_bound(&self, x: &TensorElement) -> Result<()> {
        let g = grade(x);
        if g > self.bound() {
            return Err(Error::Overflow { got: g, bound: self.bound() });
        }
        Ok(())
    }

    pub fn in_k(&self, f: &TensorElement) -> bool {
        let mut acc = vec![SparseVec::zero(); self.n];
        for (w, c) in f.iter() {
            for (slot, v) in acc.iter_mut().zip(self.psi(w)) {
                slot.add_scaled(&v, c);
            }
        }
        acc.iter().all(SparseVec::is_zero)
    }

    pub fn in_i(&self, x: &TensorElement) -> Result<bool> {
        self.in_bound(x)?;
        Ok(self.quotient(x).is_zero())
    }

    pub fn in_j(&self, x: &TensorElement) -> Result<bool> {
        self.in_bound(x)?;
        Ok(self.qv.contains(&self.quotient(x)))
    }

    /// Elements of `K` supported on the given words.
    pub fn k_elements(&self, words: &[Word]) -> Vec<TensorElement> {
        let images: Vec<SparseVec> = words.iter().map(|w| self.flatten(&self.psi(w))).collect();
        kernel(&images).iter().map(|v| v.map_basis(|&i| words[i].clone())).collect()
    }
}

/// `dim (A ∩ J_{≤D})` with a basis of the intersection.
#[derive(Clone, Debug, PartialEq)]
pub struct Intersection {
    pub bound: usize,
    pub dim: usize,
    pub basis: Vec<SparseVec>,
}

pub fn check_intersection(span: &IdealSpan<'_>) -> Intersection {
    let start = span.a_block();
    let basis: Vec<SparseVec> = span
        .qv
        .rows()
        .filter(|r| r.leading().is_some_and(|(&k, _)| k >= start))
        .map(|r| r.map_basis(|&k| k - start))
        .collect();
    Intersection { bound: span.bound(), dim: basis.len(), basis }
}

/// Outcome of a sampled membership suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleCheck {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SampleCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn random_word(rng: &mut impl Rng, n: usize, len: usize) -> Word {
    (0..len).map(|_| rng.gen_range(0..n)).collect()
}

fn show(a: &StructureAlgebra, w: &[usize]) -> String {
    w.iter().map(|&i| a.basis[i].as_str()).collect::<Vec<_>>().join("·")
}

fn require_bound(span: &IdealSpan<'_>, min: usize) -> Result<()> {
    if span.bound() < min {
        return Err(Error::Algebra(format!("this check needs a truncation bound of at least {min}")));
    }
    Ok(())
}

/// `(u⊣v)⊣w − (u⊣w)⊣v`, `(u⊢v)⊢w − (u⊢w)⊣v` and every replicated Novikov
/// identity at sampled word triples lie in `J`.
pub fn check_novikov_quotient(span: &IdealSpan<'_>, samples: usize, seed: u64) -> Result<SampleCheck> {
    require_bound(span, 3)?;
    let (env, a, n, d) = (span.envelope(), span.algebra(), span.n, span.bound());
    let di = replicate_variety(&builtin("nov")?)?;
    let mut rng = rng(seed);
    let mut out = SampleCheck { checked: 0, failures: vec![] };
    let mut triples = 0;
    let mut attempts = 0;
    while triples < samples {
        attempts += 1;
        if attempts > 100 * samples.max(1) {
            return Err(Error::Algebra("no in-bound triples found".into()));
        }
        let t: Vec<Word> = (0..3).map(|_| {
            let len = rng.gen_range(1..=d - 2);
            random_word(&mut rng, n, len)
        }).collect();
        let [u, v, w] = [0, 1, 2].map(|i| TensorElement::basis(t[i].clone()));
        let eval = || -> Result<Vec<(String, TensorElement)>> {
            let mut rels = vec![
                ("(u⊣v)⊣w − (u⊣w)⊣v".to_string(), env.dashv(&env.dashv(&u, &v)?, &w)? - env.dashv(&env.dashv(&u, &w)?, &v)?),
                ("(u⊢v)⊢w − (u⊢w)⊣v".to_string(), env.vdash(&env.vdash(&u, &v)?, &w)? - env.dashv(&env.vdash(&u, &w)?, &v)?),
            ];
            for id in &di.identities {
                rels.push((id.to_string(), env.eval_identity(id, &[u.clone(), v.clone(), w.clone()])?));
            }
            Ok(rels)
        };
        let rels = match eval() {
            Ok(r) => r,
            Err(Error::Overflow { .. }) => continue,
            Err(e) => return Err(e),
        };
        triples += 1;
        for (name, x) in rels {
            let ok = span.in_j(&x)?;
            out.record(ok, || {
                format!("{name} at u={}, v={}, w={}", show(a, &t[0]), show(a, &t[1]), show(a, &t[2]))
            });
        }
    }
    Ok(out)
}

/// `a⊢(uv) ≡ (a⊢u)v + u(a⊢v) − uav (mod I)` at sampled `(a, u, v)`.
pub fn check_poisson(span: &IdealSpan<'_>, samples: usize, seed: u64) -> Result<SampleCheck> {
    require_bound(span, 3)?;
    let (env, alg, n, d) = (span.envelope(), span.algebra(), span.n, span.bound());
    let mut rng = rng(seed);
    let mut out = SampleCheck { checked: 0, failures: vec![] };
    for _ in 0..samples {
        let a = rng.gen_range(0..n);
        let lu = rng.gen_range(1..=d - 2);
        let lv = rng.gen_range(1..=d - 1 - lu);
        let (wu, wv) = (random_word(&mut rng, n, lu), random_word(&mut rng, n, lv));
        let (x, u, v) = (letter(a), TensorElement::basis(wu.clone()), TensorElement::basis(wv.clone()));
        let lhs = env.vdash(&x, &concat(&u, &v))?;
        let rhs = concat(&env.vdash(&x, &u)?, &v) + concat(&u, &env.vdash(&x, &v)?) - concat(&concat(&u, &x), &v);
        let ok = span.in_i(&(lhs - rhs))?;
        out.record(ok, || format!("a={}, u={}, v={}", alg.basis[a], show(alg, &wu), show(alg, &wv)));
    }
    Ok(out)
}

/// Products of sampled elements of `J` with basis letters, on both sides
/// and for both operations, stay in `J`; sampled `I`-elements lie in `K`.
pub fn check_j_closure(span: &IdealSpan<'_>, samples: usize, seed: u64) -> Result<SampleCheck> {
    let (env, n, d) = (span.envelope(), span.n, span.bound());
    let mut rng = rng(seed);
    let mut out = SampleCheck { checked: 0, failures: vec![] };
    let mut elements: Vec<TensorElement> = Vec::new();
    if d >= 3 {
        let words: Vec<Word> = (0..16).map(|_| {
            let len = rng.gen_range(1..=d - 2);
            random_word(&mut rng, n, len)
        }).collect();
        for f in span.k_elements(&words).into_iter().take(samples / 2) {
            let x = concat(&letter(rng.gen_range(0..n)), &f);
            out.record(span.in_k(&x), || format!("{x:?} is not in K"));
            elements.push(x);
        }
    }
    let ws = span.w_basis();
    while !ws.is_empty() && elements.len() < samples {
        let g = &ws[rng.gen_range(0..ws.len())];
        let m = rng.gen_range(0..=d.saturating_sub(3));
        elements.push(concat(g, &TensorElement::basis(random_word(&mut rng, n, m))));
    }
    for x in &elements {
        let b = letter(rng.gen_range(0..n));
        for (name, y) in [
            ("b⊢x", env.vdash(&b, x)?),
            ("x⊢b", env.vdash(x, &b)?),
            ("b⊣x", env.dashv(&b, x)?),
            ("x⊣b", env.dashv(x, &b)?),
        ] {
            let ok = span.in_j(&y)?;
            out.record(ok, || format!("{name} leaves J for x = {x:?}"));
        }
    }
    Ok(out)
}

/// Comparison of `V` built from `(a∘b)x − (a∘x)∘b` with `V` built from
/// `s x − μ_x(s)`, `s` running over a basis of `A∘A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuComparison {
    pub generators_equal: bool,
    pub rank_w: usize,
    pub rank_mu: usize,
    /// Comparison of the explicit spans `a x_1…x_m − μ_{x_m}…μ_{x_1}(a)`
    /// at the bound, when small enough to enumerate.
    pub spans_equal: Option<bool>,
}

const EXPLICIT_LIMIT: u64 = 20_000;

fn word_index(n: usize, w: &[usize]) -> usize {
    let offset: usize = (1..w.len()).map(|k| n.pow(k as u32)).sum();
    offset + w.iter().fold(0, |acc, &c| acc * n + c)
}

fn encode(n: usize, x: &TensorElement) -> SparseVec {
    x.iter().map(|(w, c)| (word_index(n, w), c.clone())).collect()
}

fn same_span(u: &[SparseVec], v: &[SparseVec]) -> (bool, usize, usize) {
    let mut eu = Echelon::new();
    let mut ev = Echelon::new();
    u.iter().for_each(|x| {
        eu.insert(x.clone());
    });
    v.iter().for_each(|x| {
        ev.insert(x.clone());
    });
    let both = u.iter().all(|x| ev.contains(x)) && v.iter().all(|x| eu.contains(x));
    (both, eu.rank(), ev.rank())
}

pub fn compare_mu_span(span: &IdealSpan<'_>, report: &NicenessReport) -> Result<MuComparison> {
    if !report.nice {
        return Err(Error::Algebra("the μ-based span needs a nice algebra".into()));
    }
    let (a, n, d) = (span.algebra(), span.n, span.bound());
    let squares: Vec<SparseVec> = report.squares(a);
    let g = |k: usize, x: usize| -> TensorElement {
        concat(&embed(&squares[k]), &letter(x)) - embed(&report.mu[x].images[k])
    };
    let mu_gens: Vec<TensorElement> = (0..squares.len()).flat_map(|k| (0..n).map(move |x| (k, x))).map(|(k, x)| g(k, x)).collect();
    let w: Vec<SparseVec> = span.w_basis().iter().map(|x| encode(n, x)).collect();
    let m: Vec<SparseVec> = mu_gens.iter().map(|x| encode(n, x)).collect();
    let (generators_equal, rank_w, rank_mu) = same_span(&w, &m);
    let size: u64 = (1..=d).map(|k| pow(n, k)).sum();
    let spans_equal = if size > EXPLICIT_LIMIT {
        None
    } else {
        let mut words: Vec<Word> = vec![vec![]];
        let mut all_words: Vec<Word> = vec![vec![]];
        for _ in 0..d - 2 {
            words = words.iter().flat_map(|w| (0..n).map(move |y| [w.as_slice(), &[y]].concat())).collect();
            all_words.extend(words.iter().cloned());
        }
        let vw: Vec<SparseVec> = span
            .w_basis()
            .iter()
            .flat_map(|g| all_words.iter().map(move |u| encode(n, &concat(g, &TensorElement::basis(u.clone())))))
            .collect();
        let mut vm = Vec::new();
        for (k, s) in squares.iter().enumerate() {
            let mut stack: Vec<(Word, SparseVec)> = (0..n).map(|x| (vec![x], report.mu[x].images[k].clone())).collect();
            while let Some((xs, image)) = stack.pop() {
                let mut t = concat(&embed(s), &TensorElement::basis(xs.clone()));
                t = t - embed(&image);
                vm.push(encode(n, &t));
                if xs.len() + 1 < d {
                    for y in 0..n {
                        let next = report
                            .mu_apply(a, y, &image)
                            .ok_or_else(|| Error::Algebra("μ applied outside A∘A".into()))?;
                        stack.push(([xs.as_slice(), &[y]].concat(), next));
                    }
                }
            }
        }
        Some(same_span(&vw, &vm).0)
    };
    Ok(MuComparison { generators_equal, rank_w, rank_mu, spans_equal })
}

/// Verdict of the speciality criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialVerdict {
    pub special: bool,
    pub sls_violation: Option<(Identity, Violation)>,
    pub niceness: Option<NicenessReport>,
    pub intersection: Option<Intersection>,
}

/// Special iff SLS and nice. With a bound, nice inputs also get the
/// `A ∩ J` computation for the enveloping construction.
pub fn decide_special(a: &StructureAlgebra, bound: Option<usize>) -> Result<SpecialVerdict> {
    if let Some(v) = sls_violation(a)? {
        return Ok(SpecialVerdict { special: false, sls_violation: Some(v), niceness: None, intersection: None });
    }
    let report = check_nice(a)?;
    let intersection = match (report.nice, bound) {
        (true, Some(d)) => Some(check_intersection(&compute_ideals(a, d)?)),
        _ => None,
    };
    Ok(SpecialVerdict { special: report.nice, sls_violation: None, niceness: Some(report), intersection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_change_of_basis, random_novikov, sample, sls1, sls2q, truncated_word_algebra};
    use crate::linalg::{intersect_dim, Matrix};

    // x, y, z, xy, yz, xyz: x∘z = 0 while (x∘y)∘z ≠ 0
    fn small_not_nice() -> StructureAlgebra {
        let k: [&[usize]; 7] = [&[0, 0], &[0, 2], &[1, 0], &[1, 1], &[2, 0], &[2, 1], &[2, 2]];
        truncated_word_algebra(&["x", "y", "z"], 3, &k)
    }

    fn index_of(a: &StructureAlgebra, name: &str) -> usize {
        a.basis.iter().position(|b| b == name).unwrap()
    }

    fn all_words(n: usize, max: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut layer: Vec<Word> = vec![vec![]];
        for _ in 0..max {
            layer = layer.iter().flat_map(|w| (0..n).map(move |y| [w.as_slice(), &[y]].concat())).collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    #[test]
    fn small_fixture_shape() {
        let a = small_not_nice();
        assert_eq!(a.basis, ["x", "y", "z", "xy", "yz", "xyz"]);
    }

    #[test]
    fn sls1_is_nice() {
        let a = sls1();
        let r = check_nice(&a).unwrap();
        assert!(r.nice);
        r.verify(&a).unwrap();
    }

    #[test]
    fn sls2q_witness() {
        let a = sls2q();
        let r = check_nice(&a).unwrap();
        assert!(!r.nice);
        let w = r.witness.as_ref().unwrap();
        let (x, y, z) = (index_of(&a, "x"), index_of(&a, "y"), index_of(&a, "z"));
        assert_eq!(w.relation, vec![(x, z, Scalar::one())]);
        assert_eq!(w.multiplier, y);
        assert_eq!(w.value, SparseVec::basis(index_of(&a, "xyz")));
        r.verify(&a).unwrap();
    }

    #[test]
    fn novikov_mu_is_right_multiplication() {
        for a in sample(11, 10, random_novikov) {
            let r = check_nice(&a).unwrap();
            assert!(r.nice);
            r.verify(&a).unwrap();
            for (k, &(i, j)) in r.square_basis.iter().enumerate() {
                for x in 0..3 {
                    assert_eq!(r.mu[x].images[k], a.mul(&a.product[i][j], &a.e(x)));
                }
            }
        }
    }

    #[test]
    fn tampered_reports_are_rejected() {
        let a = small_not_nice();
        let mut r = check_nice(&a).unwrap();
        r.witness.as_mut().unwrap().multiplier = 0;
        assert!(r.verify(&a).is_err());
        let b = sls1();
        let mut r = check_nice(&b).unwrap();
        r.mu[0].images[0] = SparseVec::basis(0);
        assert!(r.verify(&b).is_err());
    }

    #[test]
    fn non_sls_input_is_reported() {
        // left-symmetric but failing the SLS identities
        let a = StructureAlgebra::new(
            vec!["a".into(), "b".into()],
            crate::algebra::table_from(2, &[(0, 0, &[(1, 2)]), (1, 0, &[(0, 1)]), (1, 1, &[(1, 2)])]),
        );
        assert!(crate::identity::check_presentation(&builtin("lsym").unwrap(), &a).unwrap().is_none());
        assert!(sls_violation(&a).unwrap().is_some());
        assert!(matches!(check_nice(&a), Err(Error::Violated(_))));
        let v = decide_special(&a, None).unwrap();
        assert!(!v.special && v.sls_violation.is_some());
    }

    #[test]
    fn verdict_is_basis_independent() {
        let mut r = rng(5);
        for a in [small_not_nice(), sample(4, 1, random_novikov).remove(0)] {
            let want = check_nice(&a).unwrap().nice;
            for _ in 0..3 {
                let b = a.change_basis(&random_change_of_basis(&mut r, a.dim())).unwrap();
                let got = check_nice(&b).unwrap();
                assert_eq!(got.nice, want);
                got.verify(&b).unwrap();
            }
        }
    }

    #[test]
    fn k_examples() {
        let a = sample(21, 1, random_novikov).remove(0);
        let span = compute_ideals(&a, 4).unwrap();
        let (x, y, z) = (0, 1, 2);
        let w = |s: &[usize]| TensorElement::basis(s.to_vec());
        assert!(span.in_k(&(w(&[x, y]) - w(&[y, x]))));
        let xz = a.product[x][z].clone();
        let h = w(&[x, y, z]) + embed(&a.mul(&xz, &a.e(y)))
            - concat(&embed(&a.product[x][y]), &w(&[z]))
            - concat(&embed(&xz), &w(&[y]));
        assert!(span.in_k(&h));
        for u in [w(&[0]), w(&[2, 1])] {
            let t = concat(&u, &(w(&[x, y]) - w(&[y, x])));
            assert!(span.in_i(&t).unwrap());
        }
        assert!(!span.in_i(&w(&[x])).unwrap());
    }

    #[test]
    fn zero_algebra_k_is_everything() {
        let a = StructureAlgebra::zero(2);
        let span = compute_ideals(&a, 3).unwrap();
        assert_eq!(span.dims.k_dims, vec![2, 4, 8]);
        assert_eq!(span.dims.k_trunc_dim, 6);
        assert_eq!(span.dims.i_dim, 12);
        assert_eq!(check_intersection(&span).dim, 0);
    }

    #[test]
    fn bound_below_two_is_rejected() {
        assert!(compute_ideals(&sls1(), 1).is_err());
    }

    /// Spans of I, V and J written out word by word in T_{≤D}.
    fn explicit(a: &StructureAlgebra, d: usize) -> (usize, usize, usize) {
        let n = a.dim();
        let span = compute_ideals(a, d).unwrap();
        let k = span.k_elements(&all_words(n, d - 1));
        let i: Vec<SparseVec> =
            (0..n).flat_map(|c| k.iter().map(move |f| (c, f))).map(|(c, f)| encode(n, &concat(&letter(c), f))).collect();
        let gens: Vec<TensorElement> = (0..n)
            .flat_map(|p| (0..n).flat_map(move |q| (0..n).map(move |x| (p, q, x))))
            .map(|(p, q, x)| span.w_generator(p, q, x))
            .collect();
        let mut tails = all_words(n, d - 2);
        tails.push(vec![]);
        let v: Vec<SparseVec> = gens
            .iter()
            .flat_map(|g| tails.iter().map(move |u| encode(n, &concat(g, &TensorElement::basis(u.clone())))))
            .collect();
        let cols: usize = (1..=d).map(|k| n.pow(k as u32)).sum();
        let im = Matrix::new(cols, i.clone());
        let jm = Matrix::new(cols, i.into_iter().chain(v).collect());
        let am = Matrix::new(cols, (0..n).map(|c| SparseVec::basis(word_index(n, &[c]))).collect());
        (im.rank(), jm.rank(), intersect_dim(&am, &jm).unwrap())
    }

    #[test]
    fn quotient_agrees_with_explicit_spans() {
        let cases: Vec<(StructureAlgebra, usize)> = vec![
            (sample(31, 1, random_novikov).remove(0), 4),
            (sample(32, 1, random_novikov).remove(0), 3),
            (small_not_nice(), 3),
            (truncated_word_algebra(&["x", "y"], 2, &[]), 3),
        ];
        for (a, d) in cases {
            let span = compute_ideals(&a, d).unwrap();
            let (i, j, cap) = explicit(&a, d);
            assert_eq!(span.dims.i_dim, i as u64, "{}", a.to_text());
            assert_eq!(span.dims.j_dim, j as u64);
            assert_eq!(check_intersection(&span).dim, cap);
        }
    }

    #[test]
    fn not_nice_meets_v() {
        let a = small_not_nice();
        let span = compute_ideals(&a, 3).unwrap();
        let xyz = SparseVec::basis(index_of(&a, "xyz"));
        let cap = span.w_cap_a();
        assert_eq!(cap.len(), 1);
        assert_eq!(cap[0], xyz);
        let inter = check_intersection(&span);
        assert!(inter.dim >= 1);
        assert!(inter.basis.contains(&xyz));
        // −xyz = w(x, z, y)
        let (x, y, z) = (0, 1, 2);
        assert_eq!(span.w_generator(x, z, y), -embed(&xyz));
    }

    #[test]
    fn novikov_envelope_suite() {
        for (s, a) in sample(41, 4, random_novikov).iter().enumerate() {
            let report = check_nice(a).unwrap();
            let span = compute_ideals(a, 4).unwrap();
            assert_eq!(check_intersection(&span).dim, 0);
            assert!(span.w_cap_a().is_empty());
            let cmp = compare_mu_span(&span, &report).unwrap();
            assert!(cmp.generators_equal && cmp.spans_equal == Some(true), "{cmp:?}");
            let q = check_novikov_quotient(&span, 30, s as u64).unwrap();
            assert!(q.holds(), "{:?}", q.failures);
            assert!(check_poisson(&span, 20, s as u64).unwrap().holds());
            let c = check_j_closure(&span, 20, s as u64).unwrap();
            assert!(c.holds() && c.checked >= 40, "{c:?}");
        }
    }

    #[test]
    fn sls1_intersection_is_zero() {
        let a = sls1();
        let span = compute_ideals(&a, 4).unwrap();
        assert_eq!(check_intersection(&span).dim, 0);
        assert!(check_poisson(&span, 20, 1).unwrap().holds());
        assert!(check_novikov_quotient(&span, 20, 1).unwrap().holds());
    }

    #[test]
    fn decide_special_examples() {
        let v = decide_special(&sls1(), Some(3)).unwrap();
        assert!(v.special);
        assert_eq!(v.intersection.unwrap().dim, 0);
        assert!(!decide_special(&small_not_nice(), Some(3)).unwrap().special);
        assert!(decide_special(&sample(7, 1, random_novikov)[0], None).unwrap().special);
    }
}
