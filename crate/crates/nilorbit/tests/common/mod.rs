//! Oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nilorbit::diagrams::{GroupKind, Row, Sign, SignedDiagram};
use nilorbit::exact::field::{int, rat};
use nilorbit::exact::mat::unit_vec;
use nilorbit::filtrations::{relative_monodromy_filtration, Filtration};
use nilorbit::weight2::{j_ab, Dims, LeviElement};
use nilorbit::{Mat, QMat, QSubspace, Rational, Subspace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Independent enumeration: every multiset of rows (length, label) of the
/// given total size, kept when the symplectic or orthogonal rules hold.
pub fn brute_force_real(kind: GroupKind) -> BTreeSet<SignedDiagram> {
    let n = kind.dim();
    let signed_len_parity = match kind {
        GroupKind::SpReal { .. } => 0,
        _ => 1,
    };
    let target = match kind {
        GroupKind::SpReal { n } => (n as u64 / 2, n as u64 / 2),
        GroupKind::OReal { a, b } => (a as u64, b as u64),
        _ => unreachable!(),
    };
    let mut kinds = Vec::new();
    for len in 1..=n {
        for sign in [Sign::Plus, Sign::Minus, Sign::Blank] {
            kinds.push(Row::new(len, sign));
        }
    }
    let mut out = BTreeSet::new();
    let mut stack: Vec<(usize, u32, Vec<Row>)> = vec![(0, 0, Vec::new())];
    while let Some((from, size, rows)) = stack.pop() {
        if size == n {
            let ok_labels = rows.iter().all(|r| (r.len % 2 == signed_len_parity) == (r.sign != Sign::Blank));
            let ok_mult = rows
                .iter()
                .filter(|r| r.sign == Sign::Blank)
                .all(|r| rows.iter().filter(|s| s.len == r.len).count() % 2 == 0);
            if ok_labels && ok_mult {
                // count signs box by box
                let (mut pos, mut neg, mut blank) = (0u64, 0u64, 0u64);
                for r in &rows {
                    for b in 0..r.len {
                        match r.sign {
                            Sign::Blank => blank += 1,
                            s => {
                                let plus = (s == Sign::Plus) == (b % 2 == 0);
                                if plus {
                                    pos += 1
                                } else {
                                    neg += 1
                                }
                            }
                        }
                    }
                }
                if (pos + blank / 2, neg + blank / 2) == target {
                    out.insert(SignedDiagram::new(rows));
                }
            }
            continue;
        }
        for (k, row) in kinds.iter().enumerate().skip(from) {
            if size + row.len <= n {
                let mut next = rows.clone();
                next.push(*row);
                stack.push((k, size + row.len, next));
            }
        }
    }
    out
}

/// `N M_k ⊆ M_{k-2}` and `N^l : Gr^M_{k+l} Gr^W_k ≅ Gr^M_{k-l} Gr^W_k`,
/// written out directly on quotient spaces.
pub fn satisfies_axioms(n: &QMat, w: &Filtration<Rational>, m: &Filtration<Rational>) -> bool {
    let lo = m.lowest() - 1;
    let hi = m.highest() + 1;
    for k in lo..=hi {
        if !m.get(k).image(n).is_subspace_of(&m.get(k - 2)) {
            return false;
        }
    }
    for k in w.lowest()..=w.highest() {
        let (wk, wk1) = (w.get(k), w.get(k - 1));
        let piece = |j: i64| m.get(j).intersect(&wk).sum(&wk1);
        for l in 0..=(hi - lo) {
            let nl = n.pow(l as u32);
            let (src, src1) = (piece(k + l), piece(k + l - 1));
            let (dst, dst1) = (piece(k - l), piece(k - l - 1));
            if src.dim() - src1.dim() != dst.dim() - dst1.dim() {
                return false;
            }
            // injective: x in src with N^l x in dst1 must lie in src1
            let bad = dst1.preimage(&nl).intersect(&src);
            if !bad.is_subspace_of(&src1) {
                return false;
            }
            if !src.image(&nl).is_subspace_of(&dst) {
                return false;
            }
        }
    }
    true
}

/// Dimensions of `M_j` forced by the Jordan types of `N` on each `Gr^W_k`:
/// on `Gr^W_k` a string of length `l + 1` has weights `k + l, ..., k - l`.
pub fn forced_dims(n: &QMat, w: &Filtration<Rational>) -> BTreeMap<i64, usize> {
    let mut per_weight: BTreeMap<i64, usize> = BTreeMap::new();
    let d = n.rows();
    for k in w.lowest()..=w.highest() {
        let (wk, wk1) = (w.get(k), w.get(k - 1));
        let g = wk.dim() - wk1.dim();
        if g == 0 {
            continue;
        }
        // rank of N^i on Gr^W_k
        let r = |i: u32| wk.image(&n.pow(i)).sum(&wk1).dim() - wk1.dim();
        let ranks: Vec<usize> = (0..=d as u32 + 1).map(r).collect();
        for len in 1..=d {
            // strings of length >= len: ranks[len-1] - ranks[len]
            let at_least = |t: usize| ranks[t - 1] - ranks[t];
            let exact = at_least(len) - if len < d { at_least(len + 1) } else { 0 };
            let l = len as i64 - 1;
            for a in 0..len as i64 {
                *per_weight.entry(k + l - 2 * a).or_insert(0) += exact;
            }
        }
    }
    let mut out = BTreeMap::new();
    let mut acc = 0;
    let lo = *per_weight.keys().next().unwrap_or(&0);
    let hi = *per_weight.keys().last().unwrap_or(&0);
    for j in lo - 1..=hi {
        acc += per_weight.get(&j).copied().unwrap_or(0);
        out.insert(j, acc);
    }
    out
}

/// All `N`-invariant subspaces spanned by `N`-orbits of vectors in `seeds`.
pub fn invariant_subspaces(n: &QMat, seeds: &[Vec<Rational>]) -> Vec<QSubspace> {
    let d = n.rows();
    let orbit = |v: &Vec<Rational>| {
        let mut vs = vec![v.clone()];
        for _ in 0..d {
            let next = n.apply(vs.last().unwrap());
            vs.push(next);
        }
        Subspace::span(d, &vs)
    };
    let gens: Vec<QSubspace> = seeds.iter().map(orbit).collect();
    let mut seen: BTreeSet<Vec<Vec<Rational>>> = BTreeSet::new();
    let mut out = vec![Subspace::zero(d)];
    seen.insert(Vec::new());
    let mut frontier = vec![Subspace::zero(d)];
    while let Some(s) = frontier.pop() {
        for g in &gens {
            let t = s.sum(g);
            if seen.insert(t.basis().to_vec()) {
                out.push(t.clone());
                frontier.push(t);
            }
        }
    }
    out
}

/// Every filtration with the forced dimensions built from `subspaces`
/// that satisfies both axioms.
pub fn exhaustive_solutions(n: &QMat, w: &Filtration<Rational>, subspaces: &[QSubspace]) -> Vec<Filtration<Rational>> {
    let dims = forced_dims(n, w);
    let weights: Vec<i64> = dims.keys().copied().collect();
    let d = n.rows();
    let mut out = Vec::new();
    // choose from the top weight down
    #[allow(clippy::too_many_arguments)]
    fn go(
        idx: usize,
        weights: &[i64],
        dims: &BTreeMap<i64, usize>,
        subspaces: &[QSubspace],
        chosen: &mut Vec<QSubspace>,
        n: &QMat,
        w: &Filtration<Rational>,
        d: usize,
        out: &mut Vec<Filtration<Rational>>,
    ) {
        if idx == weights.len() {
            let mut steps: Vec<(i64, QSubspace)> =
                weights.iter().rev().cloned().zip(chosen.iter().cloned()).collect();
            steps.push((weights.last().unwrap() + 1, Subspace::full(d)));
            if let Ok(m) = Filtration::from_steps(d, &steps) {
                if satisfies_axioms(n, w, &m) {
                    out.push(m);
                }
            }
            return;
        }
        let k = weights[weights.len() - 1 - idx];
        let want = dims[&k];
        for s in subspaces {
            if s.dim() != want {
                continue;
            }
            if let Some(above) = chosen.last() {
                if !s.is_subspace_of(above) {
                    continue;
                }
            }
            if chosen.len() >= 2 && !chosen[chosen.len() - 2].image(n).is_subspace_of(s) {
                continue;
            }
            chosen.push(s.clone());
            go(idx + 1, weights, dims, subspaces, chosen, n, w, d, out);
            chosen.pop();
        }
    }
    let mut chosen = Vec::new();
    go(0, &weights, &dims, subspaces, &mut chosen, n, w, d, &mut out);
    out.dedup();
    out
}

/// Coordinate instance: strings `N e_i = e_j` respecting the weights.
pub struct Instance {
    pub n: QMat,
    pub w: Filtration<Rational>,
    pub seeds: Vec<Vec<Rational>>,
}

pub fn coordinate_instance(rng: &mut ChaCha8Rng, d: usize) -> Instance {
    let wt: Vec<i64> = (0..d).map(|_| rng.gen_range(0..3)).collect();
    let mut n = QMat::zeros(d, d);
    let mut hit = vec![false; d];
    for i in 0..d {
        if rng.gen_bool(0.6) {
            let targets: Vec<usize> = (0..d).filter(|&j| j != i && !hit[j] && wt[j] <= wt[i]).collect();
            if !targets.is_empty() {
                let j = targets[rng.gen_range(0..targets.len())];
                n.set(j, i, int(1));
                hit[j] = true;
            }
        }
    }
    // keep it nilpotent by dropping any cycle
    while !n.is_nilpotent() {
        let i = rng.gen_range(0..d);
        for j in 0..d {
            n.set(j, i, int(0));
        }
    }
    let steps: Vec<(i64, QSubspace)> = (0..3)
        .map(|k| {
            let idx: Vec<usize> = (0..d).filter(|&i| wt[i] <= k).collect();
            (k, Subspace::coordinate(d, &idx))
        })
        .chain([(-1, Subspace::zero(d))])
        .collect();
    let w = Filtration::from_steps(d, &steps).unwrap();
    let mut seeds: Vec<Vec<Rational>> = (0..d).map(|i| unit_vec(d, i)).collect();
    for i in 0..d {
        for j in i + 1..d {
            let mut v = unit_vec::<Rational>(d, i);
            v[j] = int(1);
            seeds.push(v.clone());
            v[j] = int(-1);
            seeds.push(v);
        }
    }
    Instance { n, w, seeds }
}

/// Compares the construction against the exhaustive search. `Err` names
/// the disagreement.
pub fn compare_with_search(inst: &Instance) -> Result<(), String> {
    let subs = invariant_subspaces(&inst.n, &inst.seeds);
    let found = exhaustive_solutions(&inst.n, &inst.w, &subs);
    if found.len() > 1 {
        return Err(format!("uniqueness fails: {} solutions", found.len()));
    }
    match relative_monodromy_filtration(&inst.n, &inst.w).map_err(|e| e.to_string())? {
        Some(m) if !satisfies_axioms(&inst.n, &inst.w, &m) => Err("construction fails the axioms".into()),
        Some(m) if found.len() != 1 || found[0] != m => Err("search disagrees with the construction".into()),
        None if !found.is_empty() => Err("search found a filtration the construction missed".into()),
        _ => Ok(()),
    }
}

pub fn check_instance(inst: &Instance) {
    if let Err(e) = compare_with_search(inst) {
        panic!("{e}");
    }
}

/// `(1 + S)(1 - S)^{-1}` for `S` in the Lie algebra of the group.
pub fn cayley(s: &QMat) -> Option<QMat> {
    let i = Mat::identity(s.rows());
    Some(&(&i + s) * &(&i - s).inverse()?)
}

pub fn skew(n: usize, v: &[i64]) -> QMat {
    let mut s = Mat::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            s.set(i, j, rat(v[k], 2));
            s.set(j, i, rat(-v[k], 2));
            k += 1;
        }
    }
    s
}

pub fn gl(n: usize, v: &[i64]) -> Option<QMat> {
    let g = &Mat::identity(n) + &Mat::from_fn(n, n, |i, j| int(v[i * n + j]));
    g.inverse().map(|_| g)
}

pub fn random_levi(k: Dims, v: &[i64]) -> Option<LeviElement> {
    let d = gl(k.c, &v[0..])?;
    let e1 = gl(k.a, &v[9..])?;
    let n = k.a + k.b;
    let j = j_ab(k.a, k.b);
    let e2 = cayley(&(&j * &skew(n, &v[18..])))?;
    let o = cayley(&skew(k.d, &v[28..]))?;
    Some(LeviElement { d, e1, e2, o })
}

pub fn sym(n: usize, v: &[i64]) -> QMat {
    let mut s = Mat::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            s.set(i, j, int(v[k]));
            s.set(j, i, int(v[k]));
            k += 1;
        }
    }
    s
}
