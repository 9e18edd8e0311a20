//! Novikov dialgebras into current dialgebras: the quotient by
//! `N₀ = span{a⊢b − a⊣b}`, the split null extension `N̂ = N̄ ⋉ N`, the
//! current dialgebra over `span{1, T}` and the embedding `a ↦ 1⊗ā + T⊗a`.

use crate::algebra::{StructureAlgebra, Table};
use crate::error::{Error, Result};
use crate::identity::{builtin, check_presentation};
use crate::linalg::{Echelon, SparseVec};
use crate::term::Op;

/// `N̄ ⊕ N` with `ā∘b̄ = π(a⊢b)`, `ā∘b = a⊢b`, `a∘b̄ = a⊣b`, `N∘N = 0`.
#[derive(Clone, Debug)]
pub struct SplitExtension {
    pub source: StructureAlgebra,
    /// Reduced echelon basis of `N₀`.
    pub n0: Vec<SparseVec>,
    /// `N̄` has basis the images of `e_k`, `k ∈ section`.
    pub section: Vec<usize>,
    pub hat: StructureAlgebra,
    n0_ech: Echelon,
}

/// `1⊗one + T⊗t` with `one, t ∈ N̂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurElement {
    pub one: SparseVec,
    pub t: SparseVec,
}

fn diff(n: &StructureAlgebra, i: usize, j: usize) -> Result<SparseVec> {
    Ok(n.basis_mul(Op::Vdash, i, j)? - n.basis_mul(Op::Dashv, i, j)?)
}

fn require(v: &crate::identity::VarietyPresentation, a: &StructureAlgebra, what: &str) -> Result<()> {
    if let Some((k, w)) = check_presentation(v, a)? {
        let names: Vec<&str> = w.tuple.iter().map(|&i| a.basis[i].as_str()).collect();
        return Err(Error::Violated(format!(
            "{what} fails `{}` at ({})",
            v.identities[k],
            names.join(", ")
        )));
    }
    Ok(())
}

impl SplitExtension {
    pub fn bar_dim(&self) -> usize {
        self.section.len()
    }

    /// `π: N → N̄`, in section coordinates.
    pub fn project(&self, a: &SparseVec) -> SparseVec {
        let r = self.n0_ech.reduce(a);
        r.map_basis(|k| self.section.iter().position(|s| s == k).expect("reduced vectors live on the section"))
    }

    /// `a ∈ N` as the second summand of `N̂`.
    pub fn lift(&self, a: &SparseVec) -> SparseVec {
        a.map_basis(|&k| self.bar_dim() + k)
    }

    /// `ā ∈ N̄` as the first summand of `N̂`.
    pub fn bar(&self, a: &SparseVec) -> SparseVec {
        self.project(a)
    }
}

pub fn build_split_extension(n: &StructureAlgebra) -> Result<SplitExtension> {
    if !n.is_di() {
        return Err(Error::Mismatch("expected a dialgebra with `product2`".into()));
    }
    require(&builtin("dinov")?, n, "input dialgebra")?;
    let d = n.dim();
    let mut ech = Echelon::new();
    for i in 0..d {
        for j in 0..d {
            ech.insert(diff(n, i, j)?);
        }
    }
    ech.compress();
    let n0: Vec<SparseVec> = ech.rows().cloned().collect();
    for z in &n0 {
        for x in 0..d {
            let e = SparseVec::basis(x);
            for op in [Op::Vdash, Op::Dashv] {
                for p in [n.mul_op(op, &e, z)?, n.mul_op(op, z, &e)?] {
                    if !ech.contains(&p) {
                        return Err(Error::Violated(format!("N₀ is not an ideal: {} ∉ N₀", n.format_vector(&p))));
                    }
                }
            }
            // representatives may be shifted by N₀
            if !n.mul_op(Op::Vdash, z, &e)?.is_zero() || !n.mul_op(Op::Dashv, &e, z)?.is_zero() {
                return Err(Error::Violated("N₀⊢N or N⊣N₀ is nonzero".into()));
            }
        }
    }
    let section: Vec<usize> = (0..d).filter(|k| !ech.is_pivot(*k)).collect();
    let m = section.len();
    let mut ext = SplitExtension {
        source: n.clone(),
        n0,
        section: section.clone(),
        hat: StructureAlgebra::zero(0),
        n0_ech: ech,
    };
    let h = m + d;
    let mut table: Table = vec![vec![SparseVec::zero(); h]; h];
    for (p, &a) in section.iter().enumerate() {
        for (q, &b) in section.iter().enumerate() {
            table[p][q] = ext.bar(n.basis_mul(Op::Vdash, a, b)?);
        }
        for b in 0..d {
            table[p][m + b] = ext.lift(n.basis_mul(Op::Vdash, a, b)?);
            table[m + b][p] = ext.lift(n.basis_mul(Op::Dashv, b, a)?);
        }
    }
    let mut basis: Vec<String> = section.iter().map(|&k| format!("{}_bar", n.basis[k])).collect();
    basis.extend(n.basis.iter().cloned());
    ext.hat = StructureAlgebra::new(basis, table);
    require(&builtin("nov")?, &ext.hat, "split null extension")?;
    Ok(ext)
}

pub fn cur_products(x: &CurElement, y: &CurElement, ext: &SplitExtension) -> (CurElement, CurElement) {
    let h = &ext.hat;
    let vdash = CurElement { one: h.mul(&x.one, &y.one), t: h.mul(&x.one, &y.t) };
    let dashv = CurElement { one: h.mul(&x.one, &y.one), t: h.mul(&x.t, &y.one) };
    (vdash, dashv)
}

impl CurElement {
    /// Coordinates in `Cur N̂` with basis `1⊗f_0, …, T⊗f_0, …`.
    pub fn flat(&self, hat_dim: usize) -> SparseVec {
        self.one.clone() + self.t.map_basis(|&k| hat_dim + k)
    }

    pub fn unflat(v: &SparseVec, hat_dim: usize) -> CurElement {
        CurElement {
            one: v.iter().filter(|(&k, _)| k < hat_dim).map(|(&k, c)| (k, c.clone())).collect(),
            t: v.iter().filter(|(&k, _)| k >= hat_dim).map(|(&k, c)| (k - hat_dim, c.clone())).collect(),
        }
    }
}

/// `Cur N̂` as a structure-constant dialgebra.
pub fn cur_algebra(ext: &SplitExtension) -> StructureAlgebra {
    let h = ext.hat.dim();
    let basis_el = |k: usize| CurElement::unflat(&SparseVec::basis(k), h);
    let mut vdash: Table = vec![vec![SparseVec::zero(); 2 * h]; 2 * h];
    let mut dashv = vdash.clone();
    for i in 0..2 * h {
        for j in 0..2 * h {
            let (v, d) = cur_products(&basis_el(i), &basis_el(j), ext);
            vdash[i][j] = v.flat(h);
            dashv[i][j] = d.flat(h);
        }
    }
    let mut basis: Vec<String> = ext.hat.basis.iter().map(|b| format!("1⊗{b}")).collect();
    basis.extend(ext.hat.basis.iter().map(|b| format!("T⊗{b}")));
    StructureAlgebra::new_di(basis, vdash, dashv)
}

/// `â = 1⊗ā + T⊗a`.
pub fn hat_embed(a: &SparseVec, ext: &SplitExtension) -> CurElement {
    CurElement { one: ext.bar(a), t: ext.lift(a) }
}

/// Outcome of the full verification for one input dialgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurReport {
    pub dim_n: usize,
    pub dim_n0: usize,
    pub dim_bar: usize,
    pub dim_hat: usize,
    pub dim_cur: usize,
    pub hat_is_novikov: bool,
    pub cur_is_dinov: bool,
    pub embedding_rank: usize,
    pub vdash_preserved: bool,
    pub dashv_preserved: bool,
}

impl CurReport {
    pub fn passed(&self) -> bool {
        self.hat_is_novikov
            && self.cur_is_dinov
            && self.embedding_rank == self.dim_n
            && self.vdash_preserved
            && self.dashv_preserved
    }
}

pub fn verify_cur(n: &StructureAlgebra) -> Result<CurReport> {
    let ext = build_split_extension(n)?;
    let cur = cur_algebra(&ext);
    let h = ext.hat.dim();
    let d = n.dim();
    let hats: Vec<CurElement> = (0..d).map(|i| hat_embed(&SparseVec::basis(i), &ext)).collect();
    let mut ech = Echelon::new();
    for x in &hats {
        ech.insert(x.flat(h));
    }
    let image = |v: &SparseVec| hat_embed(v, &ext);
    let mut vdash_ok = true;
    let mut dashv_ok = true;
    for i in 0..d {
        for j in 0..d {
            let (v, w) = cur_products(&hats[i], &hats[j], &ext);
            vdash_ok &= v == image(n.basis_mul(Op::Vdash, i, j)?);
            dashv_ok &= w == image(n.basis_mul(Op::Dashv, i, j)?);
        }
    }
    Ok(CurReport {
        dim_n: d,
        dim_n0: ext.n0.len(),
        dim_bar: ext.bar_dim(),
        dim_hat: h,
        dim_cur: cur.dim(),
        hat_is_novikov: check_presentation(&builtin("nov")?, &ext.hat)?.is_none(),
        cur_is_dinov: check_presentation(&builtin("dinov")?, &cur)?.is_none(),
        embedding_rank: ech.rank(),
        vdash_preserved: vdash_ok,
        dashv_preserved: dashv_ok,
    })
}
