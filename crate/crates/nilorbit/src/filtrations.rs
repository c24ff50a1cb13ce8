//! Increasing and decreasing filtrations, gradings, monodromy and relative
//! monodromy filtrations, and the Deligne bigrading of a mixed Hodge structure.

use std::collections::BTreeMap;

use num::{Signed, ToPrimitive, Zero};

use crate::classify::require_nilpotent;
use crate::exact::mat::dot;
use crate::exact::{Field, Gaussian, Mat, Rational, Solution, Subspace};
use crate::Error;

/// An increasing filtration `W_k` of `T^n`. `W_k = 0` for `k < lo` and
/// `W_k = T^n` for `k >= hi`; steps in between are stored explicitly.
#[derive(Clone, PartialEq, Debug)]
pub struct Filtration<T> {
    ambient: usize,
    lo: i64,
    steps: Vec<Subspace<T>>,
}

impl<T: Field> Filtration<T> {
    /// Pure of weight `k`: `W_{k-1} = 0`, `W_k = T^n`.
    pub fn pure(ambient: usize, k: i64) -> Self {
        Filtration { ambient, lo: k, steps: vec![Subspace::full(ambient)] }
    }

    /// From jumps `(k, W_k)`: unlisted indices take the value of the nearest
    /// listed index below (zero below the first); the last listed space must be
    /// everything.
    pub fn from_steps(ambient: usize, steps: &[(i64, Subspace<T>)]) -> Result<Self, Error> {
        let mut sorted: Vec<(i64, Subspace<T>)> = steps.to_vec();
        sorted.sort_by_key(|(k, _)| *k);
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Precondition("repeated filtration index".into()));
        }
        let Some((last_k, last)) = sorted.last() else {
            return Ok(Self::pure(ambient, 0));
        };
        if !last.is_full() || last.ambient() != ambient {
            return Err(Error::Precondition("top filtration step must be the whole space".into()));
        }
        if sorted.windows(2).any(|w| !w[0].1.is_subspace_of(&w[1].1)) {
            return Err(Error::Precondition("filtration is not increasing".into()));
        }
        let lo = sorted[0].0;
        let mut out = Vec::new();
        let mut cur = Subspace::zero(ambient);
        let mut it = sorted.iter().peekable();
        for k in lo..=*last_k {
            if let Some((_, s)) = it.next_if(|(j, _)| *j == k) {
                cur = s.clone();
            }
            out.push(cur.clone());
        }
        Ok(Self::normalized(ambient, lo, out))
    }

    fn normalized(ambient: usize, mut lo: i64, mut steps: Vec<Subspace<T>>) -> Self {
        while steps.len() > 1 && steps[0].is_zero() {
            steps.remove(0);
            lo += 1;
        }
        while steps.len() > 1 && steps[steps.len() - 2].is_full() {
            steps.pop();
        }
        if steps.is_empty() {
            steps.push(Subspace::full(ambient));
        }
        Filtration { ambient, lo, steps }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn get(&self, k: i64) -> Subspace<T> {
        if k < self.lo {
            return Subspace::zero(self.ambient);
        }
        let i = (k - self.lo) as usize;
        self.steps.get(i).cloned().unwrap_or_else(|| Subspace::full(self.ambient))
    }

    /// Smallest index with a non-zero step (for non-zero ambient).
    pub fn lowest(&self) -> i64 {
        self.lo
    }

    /// Smallest index with `W_k` everything.
    pub fn highest(&self) -> i64 {
        self.lo + self.steps.len() as i64 - 1
    }

    pub fn gr_dim(&self, k: i64) -> usize {
        self.get(k).dim() - self.get(k - 1).dim()
    }

    /// Non-zero graded dimensions.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        (self.lo..=self.highest())
            .map(|k| (k, self.gr_dim(k)))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.graded_dims().into_keys().collect()
    }

    pub fn is_pure(&self) -> bool {
        self.graded_dims().len() <= 1
    }

    /// `W[s]_k = W_{k+s}`.
    pub fn shift(&self, s: i64) -> Self {
        Filtration { ambient: self.ambient, lo: self.lo - s, steps: self.steps.clone() }
    }

    pub fn is_preserved_by(&self, a: &Mat<T>) -> bool {
        (self.lo..self.highest()).all(|k| self.get(k).is_invariant(a))
    }

    /// `a W_k ⊆ W_{k-d}` for every `k`.
    pub fn is_lowered_by(&self, a: &Mat<T>, d: i64) -> bool {
        (self.lo - d.abs() - 1..=self.highest() + d.abs() + 1)
            .all(|k| self.get(k).image(a).is_subspace_of(&self.get(k - d)))
    }

    pub fn map_field<U: Field>(&self, f: impl Fn(&T) -> U + Copy) -> Filtration<U> {
        Filtration {
            ambient: self.ambient,
            lo: self.lo,
            steps: self.steps.iter().map(|s| s.map_field(f)).collect(),
        }
    }

    /// A grading of this filtration built from successive complements.
    pub fn some_grading(&self) -> Grading<T> {
        let mut spaces = BTreeMap::new();
        for k in self.weights() {
            let c = self.get(k).complement_of(&self.get(k - 1));
            spaces.insert(k, Subspace::span(self.ambient, &c));
        }
        Grading { ambient: self.ambient, spaces }
    }
}

impl Filtration<Rational> {
    pub fn complexify(&self) -> Filtration<Gaussian> {
        self.map_field(|x| Gaussian::from_rational(x.clone()))
    }
}

/// A decreasing filtration `F^p`, stored as the increasing filtration
/// `G_k = F^{-k}`.
#[derive(Clone, PartialEq, Debug)]
pub struct HodgeFiltration<T>(Filtration<T>);

impl<T: Field> HodgeFiltration<T> {
    /// From jumps `(p, F^p)`; the first listed space must be everything.
    pub fn from_steps(ambient: usize, steps: &[(i64, Subspace<T>)]) -> Result<Self, Error> {
        let neg: Vec<(i64, Subspace<T>)> = steps.iter().map(|(p, s)| (-p, s.clone())).collect();
        Ok(HodgeFiltration(Filtration::from_steps(ambient, &neg)?))
    }

    pub fn get(&self, p: i64) -> Subspace<T> {
        self.0.get(-p)
    }

    pub fn ambient(&self) -> usize {
        self.0.ambient
    }

    /// Largest `p` with `F^p = T^n`.
    pub fn lowest(&self) -> i64 {
        -self.0.highest()
    }

    /// Largest `p` with `F^p != 0`.
    pub fn highest(&self) -> i64 {
        -self.0.lowest()
    }

    pub fn conj(&self) -> Self {
        HodgeFiltration(self.0.map_field(|x| x.conj()))
    }

    /// `a F^p ⊆ F^{p+d}`.
    pub fn is_shifted_by(&self, a: &Mat<T>, d: i64) -> bool {
        (self.lowest() - d.abs() - 1..=self.highest() + d.abs() + 1)
            .all(|p| self.get(p).image(a).is_subspace_of(&self.get(p + d)))
    }

    pub fn image(&self, g: &Mat<T>) -> Self {
        let steps: Vec<(i64, Subspace<T>)> =
            (self.lowest()..=self.highest()).map(|p| (p, self.get(p).image(g))).collect();
        HodgeFiltration::from_steps(self.ambient(), &steps).expect("image of a filtration")
    }

    /// `F ∩ U` for a subspace `U`.
    pub fn intersect(&self, u: &Subspace<T>) -> Vec<(i64, Subspace<T>)> {
        (self.lowest()..=self.highest() + 1).map(|p| (p, self.get(p).intersect(u))).collect()
    }
}

/// A splitting `T^n = ⊕ E_k` with integer labels.
#[derive(Clone, PartialEq, Debug)]
pub struct Grading<T> {
    ambient: usize,
    spaces: BTreeMap<i64, Subspace<T>>,
}

impl<T: Field> Grading<T> {
    pub fn new(ambient: usize, spaces: BTreeMap<i64, Subspace<T>>) -> Result<Self, Error> {
        let spaces: BTreeMap<i64, Subspace<T>> =
            spaces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        let total: usize = spaces.values().map(|s| s.dim()).sum();
        let sum = spaces.values().fold(Subspace::zero(ambient), |a, s| a.sum(s));
        if total != ambient || !sum.is_full() {
            return Err(Error::Precondition("spaces do not form a direct sum decomposition".into()));
        }
        Ok(Grading { ambient, spaces })
    }

    /// Gradings are semisimple operators with integer eigenvalues.
    pub fn from_matrix(y: &Mat<T>) -> Result<Self, Error> {
        if !y.is_square() {
            return Err(Error::Dimension("grading must be square".into()));
        }
        let n = y.rows();
        // every eigenvalue is bounded by the largest absolute row sum
        let bound = (0..n)
            .map(|i| {
                (0..n).fold(Rational::zero(), |a, j| {
                    let x = y.get(i, j);
                    a + x.real_part().abs() + x.imag_part().abs()
                })
            })
            .max()
            .unwrap_or_else(Rational::zero);
        let b = bound.floor().to_integer().to_i64().unwrap_or(i64::MAX / 4);
        let mut spaces = BTreeMap::new();
        let mut total = 0;
        for k in -b..=b {
            let shifted = y - &Mat::scalar(n, T::from_int(k));
            let ker = shifted.kernel();
            if !ker.is_empty() {
                total += ker.len();
                spaces.insert(k, Subspace::span(n, &ker));
            }
            if total == n {
                break;
            }
        }
        if total != n {
            return Err(Error::Precondition(
                "operator is not semisimple with integer eigenvalues".into(),
            ));
        }
        Ok(Grading { ambient: n, spaces })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn eigenspace(&self, k: i64) -> Subspace<T> {
        self.spaces.get(&k).cloned().unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    pub fn labels(&self) -> Vec<i64> {
        self.spaces.keys().copied().collect()
    }

    pub fn spaces(&self) -> &BTreeMap<i64, Subspace<T>> {
        &self.spaces
    }

    fn adapted_basis(&self) -> (Vec<Vec<T>>, Vec<i64>) {
        let mut b = Vec::new();
        let mut w = Vec::new();
        for (&k, s) in &self.spaces {
            for v in s.basis() {
                b.push(v.clone());
                w.push(k);
            }
        }
        (b, w)
    }

    pub fn matrix(&self) -> Mat<T> {
        let (b, w) = self.adapted_basis();
        let images: Vec<Vec<T>> =
            b.iter().zip(&w).map(|(v, &k)| v.iter().map(|x| T::from_int(k) * x.clone()).collect()).collect();
        Mat::from_action(&b, &images).expect("adapted basis")
    }

    /// Projection onto `E_k` along the other eigenspaces.
    pub fn projector(&self, k: i64) -> Mat<T> {
        let (b, w) = self.adapted_basis();
        let images: Vec<Vec<T>> = b
            .iter()
            .zip(&w)
            .map(|(v, &j)| if j == k { v.clone() } else { vec![T::zero(); self.ambient] })
            .collect();
        Mat::from_action(&b, &images).expect("adapted basis")
    }

    /// `W_k = ⊕_{j <= k} E_j`.
    pub fn filtration(&self) -> Filtration<T> {
        let mut acc = Subspace::zero(self.ambient);
        let mut steps = Vec::new();
        for (&k, s) in &self.spaces {
            acc = acc.sum(s);
            steps.push((k, acc.clone()));
        }
        if steps.is_empty() {
            return Filtration::pure(self.ambient, 0);
        }
        Filtration::from_steps(self.ambient, &steps).expect("graded filtration")
    }

    pub fn grades(&self, w: &Filtration<T>) -> bool {
        self.filtration() == *w
    }
}

/// Component of `a` of eigenvalue `w` for `ad Y`, in the decomposition of
/// `End(V)` induced by the grading.
pub fn ad_component<T: Field>(a: &Mat<T>, y: &Grading<T>, w: i64) -> Mat<T> {
    let mut out = Mat::zeros(a.rows(), a.cols());
    for i in y.labels() {
        let j = i - w;
        if !y.spaces.contains_key(&j) {
            continue;
        }
        out = &out + &(&(&y.projector(i) * a) * &y.projector(j));
    }
    out
}

/// All non-zero `ad Y` components of `a`.
pub fn ad_components<T: Field>(a: &Mat<T>, y: &Grading<T>) -> BTreeMap<i64, Mat<T>> {
    let labels = y.labels();
    let mut out = BTreeMap::new();
    for &i in &labels {
        for &j in &labels {
            let c = &(&y.projector(i) * a) * &y.projector(j);
            if c.is_zero() {
                continue;
            }
            let e = out.entry(i - j).or_insert_with(|| Mat::zeros(a.rows(), a.cols()));
            *e = &*e + &c;
        }
    }
    out
}

/// The grading of `W(N)` centered at `center` built from an `N`-string basis:
/// `N^a v` in a string of length `l + 1` gets weight `center + l - 2a`.
pub fn monodromy_grading<T: Field>(n: &Mat<T>, center: i64) -> Result<Grading<T>, Error> {
    let sb = crate::classify::string_decomposition(n)?;
    let mut by: BTreeMap<i64, Vec<Vec<T>>> = BTreeMap::new();
    for (k, a, v) in sb.vectors(n) {
        let l = sb.strings[k].len as i64 - 1;
        by.entry(center + l - 2 * a as i64).or_default().push(v);
    }
    let spaces = by.into_iter().map(|(k, vs)| (k, Subspace::span(n.rows(), &vs))).collect();
    Grading::new(n.rows(), spaces)
}

/// The monodromy weight filtration `W(N)` centered at `center`.
pub fn monodromy_filtration<T: Field>(n: &Mat<T>, center: i64) -> Result<Filtration<T>, Error> {
    Ok(monodromy_grading(n, center)?.filtration())
}

/// Strings of `N` acting on `U / A` (`A ⊆ U` both `N`-stable); tops are
/// representatives in `U`.
fn quotient_strings<T: Field>(
    n: &Mat<T>,
    u: &Subspace<T>,
    a: &Subspace<T>,
) -> Vec<(Vec<T>, usize)> {
    let dim = n.rows();
    let mut ks: Vec<Subspace<T>> = vec![a.clone()];
    let mut p = Mat::identity(dim);
    loop {
        p = &p * n;
        let k = a.preimage(&p).intersect(u);
        let done = k == *u;
        ks.push(k);
        if done {
            break;
        }
    }
    ks.push(u.clone());
    let top = ks.len() - 2;
    let mut out = Vec::new();
    for len in (1..=top).rev() {
        let lower = ks[len - 1].sum(&ks[len + 1].image(n));
        for v in ks[len].complement_of(&lower) {
            out.push((v, len));
        }
    }
    out
}

/// `M = M(N, W)`, built step by step up the filtration `W`. Returns a basis
/// of lifts with their `M`-weights (a splitting of `M`), or `None` when no
/// relative monodromy filtration exists.
pub fn relative_monodromy_splitting<T: Field>(
    n: &Mat<T>,
    w: &Filtration<T>,
) -> Result<Option<Vec<(Vec<T>, i64)>>, Error> {
    require_nilpotent(n)?;
    if n.rows() != w.ambient() {
        return Err(Error::Dimension("operator and filtration sizes differ".into()));
    }
    if !w.is_preserved_by(n) {
        return Err(Error::Precondition("N does not preserve W".into()));
    }
    let dim = n.rows();
    let mut lifts: Vec<(Vec<T>, i64)> = Vec::new();
    let m_at = |lifts: &[(Vec<T>, i64)], k: i64| -> Subspace<T> {
        let vs: Vec<Vec<T>> =
            lifts.iter().filter(|(_, j)| *j <= k).map(|(v, _)| v.clone()).collect();
        Subspace::span(dim, &vs)
    };
    for b in w.weights() {
        let a = w.get(b - 1);
        let u = w.get(b);
        let a_basis = a.basis().to_vec();
        for (v0, len) in quotient_strings(n, &u, &a) {
            let l = len as i64 - 1;
            let nl = n.pow(len as u32);
            let target = m_at(&lifts, b - l - 2);
            // find alpha in A with N^len (v0 + alpha) in target
            let eqs = target.equations();
            let lifted = if eqs.is_empty() || a_basis.is_empty() {
                let ok = eqs.iter().all(|e| dot(e, &nl.apply(&v0)).is_zero());
                if !ok {
                    return Ok(None);
                }
                v0.clone()
            } else {
                let na: Vec<Vec<T>> = a_basis.iter().map(|x| nl.apply(x)).collect();
                let coef = Mat::from_fn(eqs.len(), a_basis.len(), |i, j| dot(&eqs[i], &na[j]));
                let nv = nl.apply(&v0);
                let rhs: Vec<T> = eqs.iter().map(|e| -dot(e, &nv)).collect();
                match coef.solve(&rhs) {
                    Solution::Inconsistent { .. } => return Ok(None),
                    Solution::Solvable { particular, .. } => {
                        let mut v = v0.clone();
                        for (c, x) in particular.iter().zip(&a_basis) {
                            for (vi, xi) in v.iter_mut().zip(x) {
                                *vi = vi.clone() + c.clone() * xi.clone();
                            }
                        }
                        v
                    }
                }
            };
            let mut v = lifted;
            for i in 0..len as i64 {
                lifts.push((v.clone(), b + l - 2 * i));
                v = n.apply(&v);
            }
        }
    }
    Ok(Some(lifts))
}

/// The relative monodromy filtration `M(N, W)`, or `None` if it does not
/// exist. The result is checked against both defining axioms.
pub fn relative_monodromy_filtration<T: Field>(
    n: &Mat<T>,
    w: &Filtration<T>,
) -> Result<Option<Filtration<T>>, Error> {
    let Some(lifts) = relative_monodromy_splitting(n, w)? else {
        return Ok(None);
    };
    let m = splitting_filtration(n.rows(), &lifts);
    if let Err(why) = check_relative_monodromy(n, w, &m) {
        return Err(Error::Precondition(format!("constructed filtration fails: {why}")));
    }
    Ok(Some(m))
}

fn splitting_filtration<T: Field>(dim: usize, lifts: &[(Vec<T>, i64)]) -> Filtration<T> {
    let mut by: BTreeMap<i64, Vec<Vec<T>>> = BTreeMap::new();
    for (v, k) in lifts {
        by.entry(*k).or_default().push(v.clone());
    }
    let spaces = by.into_iter().map(|(k, vs)| (k, Subspace::span(dim, &vs))).collect();
    Grading::new(dim, spaces).expect("lifts form a basis").filtration()
}

/// Check `M` against `N M_k ⊆ M_{k-2}` and the isomorphisms
/// `N^l : Gr^M_{k+l} Gr^W_k -> Gr^M_{k-l} Gr^W_k`.
pub fn check_relative_monodromy<T: Field>(
    n: &Mat<T>,
    w: &Filtration<T>,
    m: &Filtration<T>,
) -> Result<(), String> {
    if !m.is_lowered_by(n, 2) {
        return Err("N M_k is not contained in M_{k-2}".into());
    }
    let dim = n.rows() as i64;
    for k in w.weights() {
        let wk = w.get(k);
        let wk1 = w.get(k - 1);
        let x = |j: i64| m.get(j).intersect(&wk).sum(&wk1);
        for l in 0..=dim {
            let top = x(k + l);
            let top1 = x(k + l - 1);
            let bot = x(k - l);
            let bot1 = x(k - l - 1);
            let dt = top.dim() - top1.dim();
            let db = bot.dim() - bot1.dim();
            if dt != db {
                return Err(format!("dim Gr^M_{} Gr^W_{k} != dim Gr^M_{} Gr^W_{k}", k + l, k - l));
            }
            let nl = n.pow(l as u32);
            if !top.image(&nl).is_subspace_of(&bot) {
                return Err(format!("N^{l} does not map M_{} into M_{} on Gr^W_{k}", k + l, k - l));
            }
            let kernel = bot1.preimage(&nl).intersect(&top);
            if !kernel.is_subspace_of(&top1) {
                return Err(format!("N^{l} is not injective on Gr^M_{} Gr^W_{k}", k + l));
            }
        }
    }
    Ok(())
}

/// Coordinates with respect to a basis of an invariant subspace `U`.
#[derive(Clone, Debug)]
pub struct Restriction<T> {
    basis: Vec<Vec<T>>,
    sub: Subspace<T>,
    ambient: usize,
}

impl<T: Field> Restriction<T> {
    pub fn new(u: &Subspace<T>) -> Self {
        Restriction { basis: u.basis().to_vec(), sub: u.clone(), ambient: u.ambient() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, v: &[T]) -> Option<Vec<T>> {
        self.sub.coordinates(v)
    }

    /// Matrix of `a|U`; fails if `U` is not `a`-stable.
    pub fn op(&self, a: &Mat<T>) -> Result<Mat<T>, Error> {
        let cols: Vec<Vec<T>> = self
            .basis
            .iter()
            .map(|b| {
                self.coords(&a.apply(b))
                    .ok_or_else(|| Error::Precondition("subspace is not invariant".into()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Mat::from_cols(self.dim(), &cols))
    }

    pub fn space(&self, s: &Subspace<T>) -> Subspace<T> {
        let i = s.intersect(&self.sub);
        let cs: Vec<Vec<T>> = i.basis().iter().map(|v| self.coords(v).expect("inside U")).collect();
        Subspace::span(self.dim(), &cs)
    }

    pub fn filtration(&self, w: &Filtration<T>) -> Filtration<T> {
        let steps: Vec<(i64, Subspace<T>)> =
            (w.lowest()..=w.highest()).map(|k| (k, self.space(&w.get(k)))).collect();
        Filtration::from_steps(self.dim(), &steps).expect("restricted filtration")
    }

    pub fn hodge(&self, f: &HodgeFiltration<T>) -> HodgeFiltration<T> {
        let steps: Vec<(i64, Subspace<T>)> =
            (f.lowest()..=f.highest() + 1).map(|p| (p, self.space(&f.get(p)))).collect();
        HodgeFiltration::from_steps(self.dim(), &steps).expect("restricted filtration")
    }

    /// Inverse of `coords`.
    pub fn lift(&self, c: &[T]) -> Vec<T> {
        let mut v = vec![T::zero(); self.ambient];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = vi.clone() + ci.clone() * bi.clone();
            }
        }
        v
    }
}

/// Deligne's splitting `I^{p,q}` of a mixed Hodge structure `(F, W)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Bigrading {
    pub pieces: BTreeMap<(i64, i64), Subspace<Gaussian>>,
    ambient: usize,
}

impl Bigrading {
    pub fn piece(&self, p: i64, q: i64) -> Subspace<Gaussian> {
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// `conj(I^{p,q}) = I^{q,p}` for all `p, q`.
    pub fn is_real_split(&self) -> bool {
        self.pieces.iter().all(|(&(p, q), s)| s.conj() == self.piece(q, p))
    }

    /// Grading `Y` acting by `p + q` on `I^{p,q}`.
    pub fn weight_grading(&self) -> Grading<Gaussian> {
        self.grading_by(|p, q| p + q)
    }

    /// Grading acting by `p` on `I^{p,q}`.
    pub fn hodge_grading(&self) -> Grading<Gaussian> {
        self.grading_by(|p, _| p)
    }

    fn grading_by(&self, f: impl Fn(i64, i64) -> i64) -> Grading<Gaussian> {
        let mut by: BTreeMap<i64, Subspace<Gaussian>> = BTreeMap::new();
        for (&(p, q), s) in &self.pieces {
            let e = by.entry(f(p, q)).or_insert_with(|| Subspace::zero(self.ambient));
            *e = e.sum(s);
        }
        Grading::new(self.ambient, by).expect("bigrading is a direct sum")
    }

    /// The real grading `Y_(F,W)`, available when the splitting is real.
    pub fn real_weight_grading(&self) -> Option<Mat<Rational>> {
        let y = self.weight_grading().matrix();
        y.is_real().then(|| y.map(|x| x.real_part()))
    }

    /// Non-zero dimensions `h^{p,q}`.
    pub fn hodge_numbers(&self) -> BTreeMap<(i64, i64), usize> {
        self.pieces.iter().map(|(&k, s)| (k, s.dim())).filter(|&(_, d)| d > 0).collect()
    }
}

/// Check that `(F, W)` is a mixed Hodge structure: `F` induces a pure
/// structure of weight `k` on every `Gr^W_k`.
pub fn check_mhs(f: &HodgeFiltration<Gaussian>, w: &Filtration<Rational>) -> Result<(), String> {
    if f.ambient() != w.ambient() {
        return Err("F and W live on different spaces".into());
    }
    let wc = w.complexify();
    let fb = f.conj();
    for k in w.weights() {
        let wk = wc.get(k);
        let wk1 = wc.get(k - 1);
        for p in f.lowest() - 1..=f.highest() + 1 {
            let x = f.get(p).intersect(&wk).sum(&wk1);
            let y = fb.get(k - p + 1).intersect(&wk).sum(&wk1);
            if x.sum(&y) != wk || x.intersect(&y) != wk1 {
                return Err(format!("Gr^W_{k} is not a Hodge structure of weight {k} (p = {p})"));
            }
        }
    }
    Ok(())
}

/// Deligne's bigrading of a mixed Hodge structure.
pub fn deligne_bigrading(
    f: &HodgeFiltration<Gaussian>,
    w: &Filtration<Rational>,
) -> Result<Bigrading, Error> {
    check_mhs(f, w).map_err(Error::Precondition)?;
    let n = f.ambient();
    let wc = w.complexify();
    let fb = f.conj();
    let (plo, phi) = (f.lowest(), f.highest());
    let wts = w.weights();
    let mut pieces = BTreeMap::new();
    if let (Some(&kmin), Some(&kmax)) = (wts.first(), wts.last()) {
        for p in plo..=phi {
            for q in plo.min(kmin - phi)..=phi.max(kmax - plo) {
                let k = p + q;
                if k < kmin || k > kmax {
                    continue;
                }
                let mut rhs = fb.get(q).intersect(&wc.get(k));
                for j in 2..=(kmax - kmin + 1) {
                    rhs = rhs.sum(&fb.get(q - j + 1).intersect(&wc.get(k - j)));
                }
                let s = f.get(p).intersect(&wc.get(k)).intersect(&rhs);
                if !s.is_zero() {
                    pieces.insert((p, q), s);
                }
            }
        }
    }
    let total: usize = pieces.values().map(|s: &Subspace<Gaussian>| s.dim()).sum();
    let sum = pieces.values().fold(Subspace::zero(n), |a, s| a.sum(s));
    if total != n || !sum.is_full() {
        return Err(Error::Precondition("bigrading does not split the space".into()));
    }
    Ok(Bigrading { pieces, ambient: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::int;
    use crate::exact::mat::unit_vec;

    fn e(n: usize, k: usize) -> Vec<Rational> {
        unit_vec(n, k)
    }

    #[test]
    fn two_block_centered_at_zero() {
        // basis (e, f), N e = f
        let mut n = Mat::<Rational>::zeros(2, 2);
        n.set(1, 0, int(1));
        let w = monodromy_filtration(&n, 0).unwrap();
        let f = Subspace::span(2, &[e(2, 1)]);
        assert_eq!(w.get(-1), f);
        assert_eq!(w.get(0), f);
        assert!(w.get(1).is_full());
        assert!(w.get(-2).is_zero());
    }

    #[test]
    fn three_dim_relative_filtration_does_not_exist() {
        // x -> y -> z, W_0 = <z>, W_1 = V
        let mut n = Mat::<Rational>::zeros(3, 3);
        n.set(1, 0, int(1));
        n.set(2, 1, int(1));
        let w = Filtration::from_steps(
            3,
            &[(0, Subspace::span(3, &[e(3, 2)])), (1, Subspace::full(3))],
        )
        .unwrap();
        assert_eq!(relative_monodromy_filtration(&n, &w).unwrap(), None);
    }

    #[test]
    fn pure_case_is_shifted_monodromy() {
        let mut n = Mat::<Rational>::zeros(3, 3);
        n.set(1, 0, int(1));
        n.set(2, 1, int(1));
        let w = Filtration::pure(3, 5);
        let m = relative_monodromy_filtration(&n, &w).unwrap().unwrap();
        assert_eq!(m, monodromy_filtration(&n, 5).unwrap());
        assert_eq!(m.graded_dims(), BTreeMap::from([(3, 1), (5, 1), (7, 1)]));
    }

    #[test]
    fn grading_from_matrix() {
        let y = Mat::diag(&[int(2), int(0), int(2), int(-1)]);
        let g = Grading::from_matrix(&y).unwrap();
        assert_eq!(g.labels(), vec![-1, 0, 2]);
        assert_eq!(g.matrix(), y);
        let mut j = Mat::<Rational>::identity(2);
        j.set(0, 1, int(1));
        assert!(Grading::from_matrix(&j).is_err());
    }

    #[test]
    fn hodge_filtration_indexing() {
        let f = HodgeFiltration::from_steps(
            2,
            &[(0, Subspace::<Rational>::full(2)), (1, Subspace::span(2, &[e(2, 0)])), (2, Subspace::zero(2))],
        )
        .unwrap();
        assert!(f.get(-3).is_full());
        assert_eq!(f.get(1).dim(), 1);
        assert!(f.get(2).is_zero());
        assert_eq!((f.lowest(), f.highest()), (0, 1));
    }
}
