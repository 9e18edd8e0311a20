//! Concrete test algebras: truncated word algebras with interior symmetry,
//! and seeded random left-symmetric, Novikov and Novikov dialgebra samples.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{table_from, StructureAlgebra, Table};
use crate::linalg::{invert, SparseVec};
use crate::scalar::Scalar;

/// Normal form of a word modulo permutations of its interior letters.
fn canonical(w: &[usize]) -> Vec<usize> {
    let mut w = w.to_vec();
    if w.len() > 2 {
        let n = w.len();
        w[1..n - 1].sort_unstable();
    }
    w
}

fn all_arrangements(w: &[usize], out: &mut Vec<Vec<usize>>) {
    if w.len() <= 3 {
        out.push(w.to_vec());
        return;
    }
    let n = w.len();
    let mut mid = w[1..n - 1].to_vec();
    mid.sort_unstable();
    loop {
        let mut v = vec![w[0]];
        v.extend(&mid);
        v.push(w[n - 1]);
        out.push(v);
        if !next_permutation(&mut mid) {
            break;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `T(V)` modulo interior permutations, modulo the ideal generated by the
/// `killed` words, and modulo all words longer than `max_len`.
pub fn truncated_word_algebra(gens: &[&str], max_len: usize, killed: &[&[usize]]) -> StructureAlgebra {
    let g = gens.len();
    let in_ideal = |w: &[usize]| {
        let mut reps = Vec::new();
        all_arrangements(w, &mut reps);
        reps.iter().any(|r| killed.iter().any(|k| r.windows(k.len()).any(|win| win == *k)))
    };
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..g {
                let mut v = w.clone();
                v.push(a);
                if canonical(&v) == v {
                    next.push(v);
                }
            }
        }
        next.sort();
        words.extend(next.iter().filter(|w| !in_ideal(w)).cloned());
        layer = next;
    }
    let index: BTreeMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let n = words.len();
    let mut product: Table = vec![vec![SparseVec::zero(); n]; n];
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            let mut w = u.clone();
            w.extend(v);
            if let Some(&k) = index.get(&canonical(&w)) {
                product[i][j] = SparseVec::basis(k);
            }
        }
    }
    let basis = words.iter().map(|w| w.iter().map(|&a| gens[a]).collect::<String>()).collect();
    StructureAlgebra::new(basis, product)
}

/// Two generators, words of length at most 3.
pub fn sls1() -> StructureAlgebra {
    truncated_word_algebra(&["x", "y"], 3, &[])
}

/// Three generators modulo the ideal `(xz)`, words of length at most 3.
pub fn sls2q() -> StructureAlgebra {
    truncated_word_algebra(&["x", "y", "z"], 3, &[&[0, 2]])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut impl Rng) -> i64 {
    rng.gen_range(-2..=2)
}

/// Invertible integer matrix with entries in `-2..=2`.
pub fn random_change_of_basis(rng: &mut impl Rng, n: usize) -> Vec<Vec<Scalar>> {
    loop {
        let p: Vec<Vec<Scalar>> = (0..n).map(|_| (0..n).map(|_| Scalar::from_int(small(rng))).collect()).collect();
        if invert(&p).is_some() {
            return p;
        }
    }
}

fn named(n: usize, t: Table) -> StructureAlgebra {
    StructureAlgebra::new((1..=n).map(|i| format!("e{i}")).collect(), t)
}

/// `span{t^k : lo ≤ k < hi}` inside `ℚ[t]/(t^hi)`, with `a∘b = a·d(b)`
/// where `d(t) = Σ dt[k] t^k` (`dt` starts at `t^1`).
fn truncated_poly_novikov(lo: usize, hi: usize, dt: &[i64]) -> StructureAlgebra {
    let n = hi - lo;
    let mut t = vec![vec![SparseVec::zero(); n]; n];
    for i in lo..hi {
        for j in lo..hi {
            if j == 0 {
                continue;
            }
            // t^i · j t^{j-1} · d(t)
            let mut v = SparseVec::zero();
            for (k, &c) in dt.iter().enumerate() {
                let deg = i + j - 1 + k + 1;
                if deg < hi && c != 0 {
                    v.add_term(deg - lo, Scalar::from_int(c * j as i64));
                }
            }
            t[i - lo][j - lo] = v;
        }
    }
    named(n, t)
}

/// `span{t^k : lo ≤ k < hi}` in `ℚ[t]/(t^hi)` with the ordinary product.
fn poly_algebra(lo: usize, hi: usize) -> StructureAlgebra {
    let n = hi - lo;
    let mut t = vec![vec![SparseVec::zero(); n]; n];
    for i in lo..hi {
        for j in lo..hi {
            if i + j < hi {
                t[i - lo][j - lo] = SparseVec::basis(i + j - lo);
            }
        }
    }
    named(n, t)
}

fn one_dim(lambda: i64) -> StructureAlgebra {
    named(1, table_from(1, &[(0, 0, &[(0, lambda)])]))
}

/// Random three-dimensional Novikov algebra.
pub fn random_novikov(rng: &mut impl Rng) -> StructureAlgebra {
    let base = match rng.gen_range(0..4) {
        0 => truncated_poly_novikov(1, 4, &[small(rng), small(rng), small(rng)]),
        1 => truncated_poly_novikov(0, 3, &[small(rng), small(rng)]),
        2 => truncated_poly_novikov(1, 3, &[small(rng), small(rng)])
            .direct_sum(&one_dim(rng.gen_range(0..=1)))
            .unwrap(),
        _ => match rng.gen_range(0..3) {
            0 => poly_algebra(0, 3),
            1 => poly_algebra(1, 4),
            _ => one_dim(1).direct_sum(&one_dim(1)).unwrap().direct_sum(&one_dim(rng.gen_range(0..=1))).unwrap(),
        },
    };
    base.change_basis(&random_change_of_basis(rng, 3)).unwrap()
}

fn lsym_seeds() -> Vec<StructureAlgebra> {
    vec![
        // upper triangular 2×2 matrices
        named(
            3,
            table_from(3, &[(0, 0, &[(0, 1)]), (0, 1, &[(1, 1)]), (1, 2, &[(1, 1)]), (2, 2, &[(2, 1)])]),
        ),
        named(3, table_from(3, &[(1, 0, &[(0, 1)]), (1, 1, &[(2, 2)]), (2, 0, &[(0, -1)])])),
        named(3, table_from(3, &[(0, 0, &[(1, 1)]), (1, 2, &[(2, -1)])])),
        named(3, table_from(3, &[(2, 0, &[(1, -1)]), (2, 2, &[(2, 1)])])),
        named(3, table_from(3, &[(1, 0, &[(0, -1)]), (1, 1, &[(1, 2), (2, 2)])])),
    ]
}

fn lsym2_seeds() -> Vec<StructureAlgebra> {
    vec![
        named(2, table_from(2, &[(0, 0, &[(0, 1)]), (0, 1, &[(1, 2)])])),
        named(2, table_from(2, &[(1, 0, &[(0, 2)]), (1, 1, &[(1, 1)])])),
        named(2, table_from(2, &[(1, 0, &[(0, 2)]), (1, 1, &[(0, -1), (1, 2)])])),
        named(2, table_from(2, &[(1, 0, &[(0, 1)]), (1, 1, &[(0, 2), (1, 1)])])),
    ]
}

/// Random three-dimensional left-symmetric algebra.
pub fn random_lsym(rng: &mut impl Rng) -> StructureAlgebra {
    let base = match rng.gen_range(0..4) {
        0 => lsym_seeds().choose(rng).unwrap().clone(),
        1 => lsym2_seeds().choose(rng).unwrap().direct_sum(&one_dim(rng.gen_range(0..=1))).unwrap(),
        2 => return random_novikov(rng),
        _ => lsym_seeds()[rng.gen_range(1..5)].clone(),
    };
    base.change_basis(&random_change_of_basis(rng, 3)).unwrap()
}

fn cur_one_dim(lambda: i64) -> StructureAlgebra {
    // basis 1⊗e, T⊗e
    let l = lambda;
    let vdash = table_from(2, &[(0, 0, &[(0, l)]), (0, 1, &[(1, l)])]);
    let dashv = table_from(2, &[(0, 0, &[(0, l)]), (1, 0, &[(1, l)])]);
    StructureAlgebra::new_di(vec!["e1".into(), "e2".into()], vdash, dashv)
}

fn collapsed(a: &StructureAlgebra) -> StructureAlgebra {
    StructureAlgebra::new_di(a.basis.clone(), a.product.clone(), a.product.clone())
}

/// `x⊢y = φ(x)d(y)`, `x⊣y = 0` on `ℚ³`, from the Perm product `x·y = φ(x)y`
/// with `φ = e1*` and a derivation `d` whose image lies in `ker φ`.
fn perm_derived(rng: &mut impl Rng) -> StructureAlgebra {
    let d: Vec<SparseVec> = (0..3)
        .map(|_| [(1, small(rng)), (2, small(rng))].into_iter().map(|(k, c)| (k, Scalar::from_int(c))).collect())
        .collect();
    let mut vdash = vec![vec![SparseVec::zero(); 3]; 3];
    vdash[0] = d;
    let dashv = vec![vec![SparseVec::zero(); 3]; 3];
    StructureAlgebra::new_di((1..=3).map(|i| format!("e{i}")).collect(), vdash, dashv)
}

/// Random three-dimensional Novikov dialgebra.
pub fn random_dinov(rng: &mut impl Rng) -> StructureAlgebra {
    let base = match rng.gen_range(0..3) {
        0 => collapsed(&random_novikov(rng)),
        1 => cur_one_dim(rng.gen_range(1..=2)).direct_sum(&collapsed(&one_dim(rng.gen_range(0..=1)))).unwrap(),
        _ => perm_derived(rng),
    };
    base.change_basis(&random_change_of_basis(rng, 3)).unwrap()
}

/// `count` samples from a generator, seeded once.
pub fn sample(seed: u64, count: usize, gen: fn(&mut ChaCha8Rng) -> StructureAlgebra) -> Vec<StructureAlgebra> {
    let mut r = rng(seed);
    (0..count).map(|_| gen(&mut r)).collect()
}
