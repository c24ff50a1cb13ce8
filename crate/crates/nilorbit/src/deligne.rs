//! Deligne systems: the grading `Y'(N, Y)`, the chain of gradings of an
//! r-variable system, `sl2`-types, the coordinates `(Y0, N_-)` on systems of a
//! fixed type, deformation spaces, assembly from smaller systems, Kato's
//! substitutions, and morphism checks.

use std::collections::BTreeMap;

use num::Signed;

use crate::classify::require_nilpotent;
use crate::exact::mat::dot;
use crate::exact::{Field, Gaussian, Mat, Rational, Subspace};
use crate::filtrations::{
    ad_component, ad_components, relative_monodromy_filtration, Bigrading, Filtration, Grading,
    HodgeFiltration, Restriction,
};
use crate::report::Report;
use crate::sl2::{complete_triple, joint_weight_basis, Sl2Triple};
use crate::Error;

/// `(W, N, Y)`: `N` preserves `W`, `M = M(N, W)` exists, and `Y` is a grading
/// of `M` preserving `W` with `[Y, N] = -2N`.
#[derive(Clone, PartialEq, Debug)]
pub struct DeligneSystem1<T> {
    pub w: Filtration<T>,
    pub n: Mat<T>,
    pub y: Mat<T>,
}

impl<T: Field> DeligneSystem1<T> {
    pub fn new(w: Filtration<T>, n: Mat<T>, y: Mat<T>) -> Result<Self, Error> {
        let s = DeligneSystem1 { w, n, y };
        s.validate()?;
        Ok(s)
    }

    /// Check the axioms; returns `M(N, W)`.
    pub fn validate(&self) -> Result<Filtration<T>, Error> {
        let d = self.w.ambient();
        if self.n.rows() != d || self.y.rows() != d || !self.n.is_square() || !self.y.is_square() {
            return Err(Error::Dimension("W, N and Y have different sizes".into()));
        }
        require_nilpotent(&self.n)?;
        if !self.w.is_preserved_by(&self.n) {
            return Err(Error::Precondition("N does not preserve W".into()));
        }
        let m = relative_monodromy_filtration(&self.n, &self.w)?
            .ok_or_else(|| Error::Precondition("M(N, W) does not exist".into()))?;
        if !Grading::from_matrix(&self.y)?.grades(&m) {
            return Err(Error::Precondition("Y is not a grading of M(N, W)".into()));
        }
        if !self.w.is_preserved_by(&self.y) {
            return Err(Error::Precondition("Y does not preserve W".into()));
        }
        if Mat::commutator(&self.y, &self.n) != self.n.scale(&T::from_int(-2)) {
            return Err(Error::Precondition("[Y, N] != -2N".into()));
        }
        Ok(m)
    }
}

/// Output of Deligne's construction.
#[derive(Clone, PartialEq, Debug)]
pub struct DeligneGrading<T> {
    pub y_prime: Mat<T>,
    /// Components `N_{-k}` of `N` under `ad Y'` (keyed by `-k`).
    pub components: BTreeMap<i64, Mat<T>>,
    pub n0: Mat<T>,
    pub n0_plus: Mat<T>,
    /// Number of corrections `Ad(1 - gamma)` applied.
    pub steps: usize,
}

/// A grading of `W` commuting with `Y`: inside every eigenspace of `Y`, a
/// complement of `W_{k-1}` in `W_k` is given weight `k`.
pub fn seed_grading<T: Field>(w: &Filtration<T>, y: &Mat<T>) -> Result<Mat<T>, Error> {
    let yg = Grading::from_matrix(y)?;
    if !w.is_preserved_by(y) {
        return Err(Error::Precondition("Y does not preserve W".into()));
    }
    let d = w.ambient();
    let mut by: BTreeMap<i64, Vec<Vec<T>>> = BTreeMap::new();
    for e in yg.spaces().values() {
        for k in w.lowest()..=w.highest() {
            let lower = w.get(k - 1).intersect(e);
            let upper = w.get(k).intersect(e);
            by.entry(k).or_default().extend(upper.complement_of(&lower));
        }
    }
    let spaces = by.into_iter().map(|(k, vs)| (k, Subspace::span(d, &vs))).collect();
    Ok(Grading::new(d, spaces)?.matrix())
}

/// A second seed, `Ad(1 + alpha) Y'_0` with `alpha` the sum of a basis of the
/// operators lowering `Y'_0` and commuting with `Y`.
pub fn shifted_seed<T: Field>(w: &Filtration<T>, y: &Mat<T>) -> Result<Mat<T>, Error> {
    let y0 = seed_grading(w, y)?;
    let d = w.ambient();
    let g0 = Grading::from_matrix(&y0)?;
    let yg = Grading::from_matrix(y)?;
    let mut alpha = Mat::zeros(d, d);
    for k in 1..=(w.highest() - w.lowest()) {
        for b in joint_weight_basis(&[(&g0, -k), (&yg, 0)], d)? {
            alpha = &alpha + &b;
        }
    }
    let g = &Mat::identity(d) + &alpha;
    y0.conjugate_by(&g)
}

/// `Y'(N, Y)` from the default seed.
pub fn deligne_grading<T: Field>(
    w: &Filtration<T>,
    n: &Mat<T>,
    y: &Mat<T>,
) -> Result<DeligneGrading<T>, Error> {
    deligne_grading_from(w, n, y, &seed_grading(w, y)?)
}

/// `Y'(N, Y)` starting from any grading `seed` of `W` commuting with `Y`. At
/// each step the first component `N_{-k}` which is not of highest weight
/// `k - 2` for `(N_0, Y - Y')` is split as `[N_0, gamma] + N'` and `Y'` is
/// replaced by `Ad(1 - gamma) Y'`.
pub fn deligne_grading_from<T: Field>(
    w: &Filtration<T>,
    n: &Mat<T>,
    y: &Mat<T>,
    seed: &Mat<T>,
) -> Result<DeligneGrading<T>, Error> {
    DeligneSystem1 { w: w.clone(), n: n.clone(), y: y.clone() }.validate()?;
    let d = w.ambient();
    if !Grading::from_matrix(seed)?.grades(w) || !Mat::commutator(seed, y).is_zero() {
        return Err(Error::Precondition("seed is not a grading of W commuting with Y".into()));
    }
    let bound = (w.highest() - w.lowest() + 1).max(1) as usize;
    let mut yp = seed.clone();
    let mut steps = 0;
    loop {
        let g = Grading::from_matrix(&yp)?;
        let comps = ad_components(n, &g);
        let n0 = comps.get(&0).cloned().unwrap_or_else(|| Mat::zeros(d, d));
        let h = y - &yp;
        let triple = complete_triple(&n0, &h)?;
        let bad = comps
            .iter()
            .rev()
            .find(|(k, c)| **k < 0 && !Mat::commutator(&triple.n_plus, c).is_zero());
        let Some((&mk, c)) = bad else {
            let out = DeligneGrading { y_prime: yp, components: comps, n0, n0_plus: triple.n_plus, steps };
            check_deligne_grading(w, n, y, &out).map_err(Error::Precondition)?;
            return Ok(out);
        };
        if steps >= bound {
            return Err(Error::Precondition(format!(
                "Deligne's construction did not stabilize within {bound} steps"
            )));
        }
        let k = -mk;
        let hg = Grading::from_matrix(&h)?;
        let space = joint_weight_basis(&[(&hg, k), (&g, -k)], d)?;
        let gamma = highest_weight_split(c, &triple, &space)
            .ok_or_else(|| Error::Precondition(format!("N_{{-{k}}} has no highest-weight split")))?;
        // the new N_{-k} is c + [N_0, -gamma]
        yp = yp.conjugate_by(&(&Mat::identity(d) - &gamma))?;
        steps += 1;
    }
}

/// `gamma` in the span of `space` with `[N+, c - [N, gamma]] = 0`.
fn highest_weight_split<T: Field>(c: &Mat<T>, t: &Sl2Triple<T>, space: &[Mat<T>]) -> Option<Mat<T>> {
    let d = c.rows();
    let rhs = Mat::commutator(&t.n_plus, c).to_vec();
    if space.is_empty() {
        return rhs.iter().all(|x| x.is_zero()).then(|| Mat::zeros(d, d));
    }
    let cols: Vec<Vec<T>> = space
        .iter()
        .map(|b| Mat::commutator(&t.n_plus, &Mat::commutator(&t.n, b)).to_vec())
        .collect();
    let sol = Mat::from_cols(d * d, &cols).solve(&rhs);
    let x = sol.particular()?;
    Some(space.iter().zip(x).fold(Mat::zeros(d, d), |acc, (b, xi)| &acc + &b.scale(xi)))
}

/// Verify the defining properties of `Y'(N, Y)`: `Y'` grades `W`,
/// `[Y', Y] = 0`, `[N - N_0, N_0+] = 0`, and `N_{-1} = 0`.
pub fn check_deligne_grading<T: Field>(
    w: &Filtration<T>,
    n: &Mat<T>,
    y: &Mat<T>,
    out: &DeligneGrading<T>,
) -> Result<(), String> {
    let g = Grading::from_matrix(&out.y_prime).map_err(|e| e.to_string())?;
    if !g.grades(w) {
        return Err("Y' is not a grading of W".into());
    }
    if !Mat::commutator(&out.y_prime, y).is_zero() {
        return Err("[Y', Y] != 0".into());
    }
    let n0 = ad_component(n, &g, 0);
    let t = complete_triple(&n0, &(y - &out.y_prime)).map_err(|e| e.to_string())?;
    if !Mat::commutator(&(n - &n0), &t.n_plus).is_zero() {
        return Err("[N - N_0, N_0+] != 0".into());
    }
    if !ad_component(n, &g, -1).is_zero() {
        return Err("N_{-1} != 0".into());
    }
    if ad_components(n, &g).keys().any(|&k| k > 0) {
        return Err("N has positive ad Y' weights".into());
    }
    Ok(())
}

/// `(W, N_1, ..., N_r; Y^r)`.
#[derive(Clone, PartialEq, Debug)]
pub struct DeligneSystemR<T> {
    pub w: Filtration<T>,
    pub ns: Vec<Mat<T>>,
    pub yr: Mat<T>,
}

/// Check the pre-Deligne conditions (a)-(d); also returns `W^0, ..., W^r` when
/// all the relative filtrations exist.
pub fn pre_deligne_report<T: Field>(
    w: &Filtration<T>,
    ns: &[Mat<T>],
) -> (Report, Option<Vec<Filtration<T>>>) {
    let mut rep = Report::new();
    let d = w.ambient();
    if ns.iter().any(|n| n.rows() != d || !n.is_square()) {
        rep.record("(a)", Err("operators have the wrong size".into()));
        return (rep, None);
    }
    for (i, n) in ns.iter().enumerate() {
        rep.require("(a)", n.is_nilpotent(), || format!("N_{} is not nilpotent", i + 1));
        rep.require("(a)", w.is_preserved_by(n), || format!("N_{} does not preserve W^0", i + 1));
        for (j, m) in ns.iter().enumerate().skip(i + 1) {
            rep.require("(a)", Mat::commutator(n, m).is_zero(), || {
                format!("[N_{}, N_{}] != 0", i + 1, j + 1)
            });
        }
    }
    if !rep.passed() {
        return (rep, None);
    }
    let mut ws = vec![w.clone()];
    for (j, n) in ns.iter().enumerate() {
        match relative_monodromy_filtration(n, &ws[j]) {
            Ok(Some(m)) => ws.push(m),
            Ok(None) => {
                rep.record("(b)", Err(format!("M(N_{}, W^{j}) does not exist", j + 1)));
                return (rep, None);
            }
            Err(e) => {
                rep.record("(b)", Err(e.to_string()));
                return (rep, None);
            }
        }
    }
    rep.record("(b)", Ok(()));
    for j in 1..=ns.len() {
        for k in 0..j.saturating_sub(1) {
            for l in ws[k].weights() {
                let u = ws[k].get(l);
                let res = Restriction::new(&u);
                let outcome = (|| {
                    let nu = res.op(&ns[j - 1]).map_err(|_| format!("W^{k}_{l} is not N_{j}-stable"))?;
                    let m = relative_monodromy_filtration(&nu, &res.filtration(&ws[j - 1]))
                        .map_err(|e| e.to_string())?
                        .ok_or_else(|| format!("no relative filtration of N_{j} on W^{k}_{l}"))?;
                    if m != res.filtration(&ws[j]) {
                        return Err(format!("W^{j} restricted to W^{k}_{l} is not M(N_{j}|U, W^{}|U)", j - 1));
                    }
                    Ok(())
                })();
                rep.record("(c)", outcome);
            }
        }
    }
    for (j, n) in ns.iter().enumerate() {
        let j = j + 1;
        for (k, wk) in ws.iter().enumerate() {
            let drop = if k >= j { 2 } else { 0 };
            rep.require("(d)", wk.is_lowered_by(n, drop), || {
                format!("N_{j} does not map W^{k}_l into W^{k}_(l-{drop})")
            });
        }
    }
    (rep, Some(ws))
}

impl<T: Field> DeligneSystemR<T> {
    pub fn new(w: Filtration<T>, ns: Vec<Mat<T>>, yr: Mat<T>) -> Result<Self, Error> {
        let s = DeligneSystemR { w, ns, yr };
        s.filtrations()?;
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.ns.len()
    }

    /// Conditions (a)-(e), plus `Y^r` grading `W^r`.
    pub fn report(&self) -> (Report, Option<Vec<Filtration<T>>>) {
        let (mut rep, ws) = pre_deligne_report(&self.w, &self.ns);
        if let Some(ws) = &ws {
            let d = self.w.ambient();
            if self.yr.rows() != d || !self.yr.is_square() {
                rep.record("(e)", Err("Y^r has the wrong size".into()));
                return (rep, None);
            }
            let grades = Grading::from_matrix(&self.yr).map(|g| g.grades(&ws[self.rank()]));
            rep.require("(e)", grades == Ok(true), || "Y^r is not a grading of W^r".into());
            for (j, wj) in ws.iter().enumerate() {
                rep.require("(e)", wj.is_preserved_by(&self.yr), || {
                    format!("Y^r does not preserve W^{j}")
                });
            }
            for (j, n) in self.ns.iter().enumerate() {
                rep.require("(e)", Mat::commutator(&self.yr, n) == n.scale(&T::from_int(-2)), || {
                    format!("[Y^r, N_{}] != -2 N_{}", j + 1, j + 1)
                });
            }
        }
        (rep, ws)
    }

    /// `W^0, ..., W^r` of a valid system.
    pub fn filtrations(&self) -> Result<Vec<Filtration<T>>, Error> {
        let (rep, ws) = self.report();
        match (rep.passed(), ws) {
            (true, Some(ws)) => Ok(ws),
            _ => {
                let why: Vec<String> =
                    rep.failures().iter().map(|c| format!("{} {}", c.name, c.detail)).collect();
                Err(Error::Precondition(format!("not a Deligne system: {}", why.join("; "))))
            }
        }
    }

    /// `(W^0, N_1, ..., N_j; Y^j)` for a chain computed from this system.
    pub fn prefix(&self, chain: &Chain<T>, j: usize) -> DeligneSystemR<T> {
        DeligneSystemR { w: self.w.clone(), ns: self.ns[..j].to_vec(), yr: chain.gradings[j].clone() }
    }
}

/// Gradings `Y^0, ..., Y^r`, filtrations `W^0, ..., W^r` and pairs
/// `(N^_j, H_j)` of a Deligne system.
#[derive(Clone, PartialEq, Debug)]
pub struct Chain<T> {
    pub filtrations: Vec<Filtration<T>>,
    pub gradings: Vec<Mat<T>>,
    pub n_hats: Vec<Mat<T>>,
    pub hs: Vec<Mat<T>>,
}

impl<T: Field> Chain<T> {
    pub fn rank(&self) -> usize {
        self.n_hats.len()
    }

    /// Triple completing the `j`-th pair (1-based).
    pub fn triple(&self, j: usize) -> Result<Sl2Triple<T>, Error> {
        complete_triple(&self.n_hats[j - 1], &self.hs[j - 1])
    }

    /// All gradings commute, the pairs are `sl2`-pairs, and cross brackets of
    /// different pairs vanish.
    pub fn check(&self) -> Result<(), String> {
        let c = Mat::commutator;
        for (i, a) in self.gradings.iter().enumerate() {
            for (j, b) in self.gradings.iter().enumerate().skip(i + 1) {
                if !c(a, b).is_zero() {
                    return Err(format!("[Y^{i}, Y^{j}] != 0"));
                }
            }
        }
        for j in 1..=self.rank() {
            self.triple(j).map_err(|e| format!("pair {j}: {e}"))?;
        }
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if i == j {
                    continue;
                }
                let ok = c(&self.n_hats[i], &self.n_hats[j]).is_zero()
                    && c(&self.n_hats[i], &self.hs[j]).is_zero()
                    && c(&self.hs[i], &self.hs[j]).is_zero();
                if !ok {
                    return Err(format!("pairs {} and {} do not commute", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }
}

/// Iterate `Y^{j-1} = Y'(N_j, Y^j)` down from `Y^r`.
pub fn build_chain<T: Field>(s: &DeligneSystemR<T>) -> Result<Chain<T>, Error> {
    let ws = s.filtrations()?;
    let r = s.rank();
    let mut gradings = vec![s.yr.clone(); r + 1];
    let mut n_hats = vec![Mat::zeros(0, 0); r];
    let mut hs = vec![Mat::zeros(0, 0); r];
    for j in (1..=r).rev() {
        let yj = gradings[j].clone();
        let dg = deligne_grading(&ws[j - 1], &s.ns[j - 1], &yj)?;
        n_hats[j - 1] = dg.n0.clone();
        hs[j - 1] = &yj - &dg.y_prime;
        gradings[j - 1] = dg.y_prime;
    }
    let chain = Chain { filtrations: ws, gradings, n_hats, hs };
    chain.check().map_err(Error::Precondition)?;
    Ok(chain)
}

/// `(W, (N^_1, H_1), ..., (N^_r, H_r))`.
#[derive(Clone, PartialEq, Debug)]
pub struct Sl2Type<T> {
    pub w: Filtration<T>,
    pub pairs: Vec<(Mat<T>, Mat<T>)>,
}

impl<T: Field> Sl2Type<T> {
    /// For `W` pure of weight `k`: `Y^j = k Id + H_1 + ... + H_j`.
    pub fn pure_gradings(&self) -> Option<Vec<Mat<T>>> {
        if !self.w.is_pure() {
            return None;
        }
        let d = self.w.ambient();
        let mut acc = Mat::scalar(d, T::from_int(self.w.lowest()));
        let mut out = vec![acc.clone()];
        for (_, h) in &self.pairs {
            acc = &acc + h;
            out.push(acc.clone());
        }
        Some(out)
    }
}

pub fn sl2_type<T: Field>(s: &DeligneSystemR<T>) -> Result<Sl2Type<T>, Error> {
    let c = build_chain(s)?;
    Ok(Sl2Type { w: s.w.clone(), pairs: c.n_hats.into_iter().zip(c.hs).collect() })
}

/// Image `(Y^0, N_-)` of a one-variable system, together with its type
/// `(N^, H)`.
#[derive(Clone, PartialEq, Debug)]
pub struct PsiImage<T> {
    pub y0: Mat<T>,
    pub n_minus: Mat<T>,
    pub n_hat: Mat<T>,
    pub h: Mat<T>,
}

pub fn psi<T: Field>(s: &DeligneSystem1<T>) -> Result<PsiImage<T>, Error> {
    let dg = deligne_grading(&s.w, &s.n, &s.y)?;
    let d = s.w.ambient();
    let n_minus = dg
        .components
        .iter()
        .filter(|(k, _)| **k <= -2)
        .fold(Mat::zeros(d, d), |acc, (_, c)| &acc + c);
    Ok(PsiImage { h: &s.y - &dg.y_prime, y0: dg.y_prime, n_minus, n_hat: dg.n0 })
}

/// Membership of `(Y^0, N_-)` in the bundle over gradings of `W` commuting
/// with `(N^, H)`: every component `N_{-k}` under `ad Y^0` has `k >= 2` and is
/// of highest weight `k - 2`.
pub fn check_psi_image<T: Field>(w: &Filtration<T>, p: &PsiImage<T>) -> Result<(), String> {
    let c = Mat::commutator;
    let g = Grading::from_matrix(&p.y0).map_err(|e| e.to_string())?;
    if !g.grades(w) {
        return Err("Y^0 is not a grading of W".into());
    }
    if !c(&p.y0, &p.n_hat).is_zero() || !c(&p.y0, &p.h).is_zero() {
        return Err("Y^0 does not commute with the pair".into());
    }
    let t = complete_triple(&p.n_hat, &p.h).map_err(|e| e.to_string())?;
    for (k, comp) in ad_components(&p.n_minus, &g) {
        if k > -2 {
            return Err(format!("N_- has a component of ad Y^0 weight {k}"));
        }
        if c(&p.h, &comp) != comp.scale(&T::from_int(-k - 2)) {
            return Err(format!("N_{{{k}}} does not have H-weight {}", -k - 2));
        }
        if !c(&t.n_plus, &comp).is_zero() {
            return Err(format!("N_{{{k}}} is not of highest weight"));
        }
    }
    Ok(())
}

/// `N = N^ + N_-`, `Y^1 = Y^0 + H`; the result is validated and mapped back.
pub fn psi_inverse<T: Field>(w: &Filtration<T>, p: &PsiImage<T>) -> Result<DeligneSystem1<T>, Error> {
    check_psi_image(w, p).map_err(Error::Precondition)?;
    let s = DeligneSystem1::new(w.clone(), &p.n_hat + &p.n_minus, &p.y0 + &p.h)?;
    if psi(&s)? != *p {
        return Err(Error::Precondition("reconstructed system does not map back".into()));
    }
    Ok(s)
}

/// Extra linear conditions on a deformation `eta`.
#[derive(Clone, Debug, Default)]
pub struct DeformationConstraints {
    /// `eta` is an infinitesimal isometry of this form.
    pub isometry_of: Option<Mat<Rational>>,
    /// `eta` commutes with each of these.
    pub commute_with: Vec<Mat<Rational>>,
    /// `eta` maps `I^{p,q}` into `I^{p-1,q-1}`.
    pub morphism_of: Option<Bigrading>,
}

/// Basis of the deformations `eta = sum_{l >= 2} eta_{-l}` at slot `j`
/// (1-based): `eta_{-l}` has `ad Y^{j-1}`-weight `-l` and is of highest weight
/// `l - 2` for `(N^_j, H_j)`, subject to the extra constraints.
pub fn deformation_space(
    chain: &Chain<Rational>,
    j: usize,
    cons: &DeformationConstraints,
) -> Result<Vec<Mat<Rational>>, Error> {
    if j == 0 || j > chain.rank() {
        return Err(Error::Precondition(format!("slot {j} out of range")));
    }
    let d = chain.gradings[0].rows();
    let yg = Grading::from_matrix(&chain.gradings[j - 1])?;
    let hg = Grading::from_matrix(&chain.hs[j - 1])?;
    let t = chain.triple(j)?;
    let mut space = Vec::new();
    for l in 2..=(2 * d as i64 + 2) {
        space.extend(joint_weight_basis(&[(&yg, -l), (&hg, l - 2)], d)?);
    }
    let conds = |eta: &Mat<Rational>| -> Vec<Rational> {
        let mut out = Mat::commutator(&t.n_plus, eta).to_vec();
        if let Some(q) = &cons.isometry_of {
            out.extend((&(&eta.transpose() * q) + &(q * eta)).to_vec());
        }
        for c in &cons.commute_with {
            out.extend(Mat::commutator(eta, c).to_vec());
        }
        if let Some(bg) = &cons.morphism_of {
            out.extend(morphism_equations(bg, eta, -1));
        }
        out
    };
    Ok(linear_kernel(&space, conds))
}

/// Combinations of `basis` killed by the linear map `f`.
pub fn linear_kernel<T: Field>(basis: &[Mat<T>], f: impl Fn(&Mat<T>) -> Vec<T>) -> Vec<Mat<T>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<T>> = basis.iter().map(&f).collect();
    let rows = cols[0].len();
    let (r, c) = (basis[0].rows(), basis[0].cols());
    let ker = if rows == 0 {
        (0..basis.len()).map(|k| crate::exact::mat::unit_vec(basis.len(), k)).collect()
    } else {
        Mat::from_cols(rows, &cols).kernel()
    };
    let out: Vec<Mat<T>> = ker
        .iter()
        .map(|x| basis.iter().zip(x).fold(Mat::zeros(r, c), |acc, (b, xi)| &acc + &b.scale(xi)))
        .collect();
    // normalize to an echelon basis of the span
    let flat: Vec<Vec<T>> = out.iter().map(|m| m.to_vec()).collect();
    Subspace::span(r * c, &flat).basis().iter().map(|v| Mat::from_vec(r, c, v.clone())).collect()
}

/// Real and imaginary parts of the equations saying `eta(I^{p,q})` lies in
/// `I^{p+s,q+s}`.
pub fn morphism_equations(bg: &Bigrading, eta: &Mat<Rational>, s: i64) -> Vec<Rational> {
    let e = eta.complexify();
    let mut out = Vec::new();
    for (&(p, q), piece) in &bg.pieces {
        let target = bg.piece(p + s, q + s);
        let eqs = target.equations();
        for u in piece.basis() {
            let v = e.apply(u);
            for row in &eqs {
                let z = dot(row, &v);
                out.push(z.re.clone());
                out.push(z.im.clone());
            }
        }
    }
    out
}

/// Where an operator sits relative to an `sl2`-pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct WeightProfile {
    /// `ad H`-weight, when homogeneous.
    pub weight: Option<i64>,
    /// Killed by `ad N+`.
    pub highest: bool,
    /// Killed by `ad N`.
    pub lowest: bool,
}

pub fn weight_profile<T: Field>(eta: &Mat<T>, n: &Mat<T>, h: &Mat<T>) -> Result<WeightProfile, Error> {
    let t = complete_triple(n, h)?;
    let comps = ad_components(eta, &t.grading());
    let weight = match comps.len() {
        1 => comps.keys().next().copied(),
        0 => Some(0),
        _ => None,
    };
    Ok(WeightProfile {
        weight,
        highest: Mat::commutator(&t.n_plus, eta).is_zero(),
        lowest: Mat::commutator(&t.n, eta).is_zero(),
    })
}

/// Outcome of gluing `S' = (W, N_1..N_{r-1}; Y^{r-1})` and
/// `S'' = (W^{r-1}, N_r, Y^r)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Assembly<T> {
    pub report: Report,
    pub system: Option<DeligneSystemR<T>>,
}

/// Check conditions (I)-(IV) and assemble `(W, N_1, ..., N_r; Y^r)`.
pub fn assemble_r<T: Field>(prefix: &DeligneSystemR<T>, last: &DeligneSystem1<T>) -> Assembly<T> {
    let mut rep = Report::new();
    let fail = |mut rep: Report, name: &str, e: String| {
        rep.record(name, Err(e));
        Assembly { report: rep, system: None }
    };
    let chain = match build_chain(prefix) {
        Ok(c) => c,
        Err(e) => return fail(rep, "prefix", e.to_string()),
    };
    rep.record("prefix", Ok(()));
    if let Err(e) = last.validate() {
        return fail(rep, "last", e.to_string());
    }
    let r1 = prefix.rank();
    rep.require("last", last.w == chain.filtrations[r1], || {
        "last system is not based on W^(r-1)".into()
    });
    match deligne_grading(&last.w, &last.n, &last.y) {
        Ok(dg) => rep.require("fiber", dg.y_prime == prefix.yr, || {
            "Y'(N_r, Y^r) != Y^(r-1)".into()
        }),
        Err(e) => rep.record("fiber", Err(e.to_string())),
    }
    let c = Mat::commutator;
    for (j, yj) in chain.gradings.iter().enumerate() {
        rep.require("(I)", c(&last.y, yj).is_zero(), || format!("[Y^r, Y^{j}] != 0"));
    }
    for (j, yj) in chain.gradings.iter().enumerate() {
        let nonpos = Grading::from_matrix(yj)
            .map(|g| ad_components(&last.n, &g).keys().all(|&k| k <= 0))
            .unwrap_or(false);
        rep.require("(II)", nonpos, || format!("N_r has a positive ad Y^{j} eigenvalue"));
    }
    for (j, nj) in prefix.ns.iter().enumerate() {
        rep.require("(III)", c(&last.n, nj).is_zero(), || format!("[N_r, N_{}] != 0", j + 1));
    }
    let minus2 = T::from_int(-2);
    for (j, nj) in prefix.ns.iter().chain(std::iter::once(&last.n)).enumerate() {
        rep.require("(IV)", c(&last.y, nj) == nj.scale(&minus2), || {
            format!("[Y^r, N_{}] != -2 N_{}", j + 1, j + 1)
        });
    }
    if !rep.passed() {
        return Assembly { report: rep, system: None };
    }
    let mut ns = prefix.ns.clone();
    ns.push(last.n.clone());
    let s = DeligneSystemR { w: prefix.w.clone(), ns, yr: last.y.clone() };
    let (full, _) = s.report();
    let ok = full.passed();
    rep.require("(a)-(e)", ok, || {
        full.failures().iter().map(|c| format!("{} {}", c.name, c.detail)).collect::<Vec<_>>().join("; ")
    });
    Assembly { report: rep, system: ok.then_some(s) }
}

fn check_commuting_nilpotents<T: Field>(ns: &[Mat<T>]) -> Result<(), Error> {
    for (i, n) in ns.iter().enumerate() {
        require_nilpotent(n)?;
        for m in &ns[i + 1..] {
            if !Mat::commutator(n, m).is_zero() {
                return Err(Error::Precondition("operators do not commute".into()));
            }
        }
    }
    Ok(())
}

/// Kato's `phi^a`: `N'_j = sum_{k=0}^{j-1} a^k / k! N_{j-k}`.
pub fn kato_phi<T: Field>(a: &T, ns: &[Mat<T>]) -> Result<Vec<Mat<T>>, Error> {
    if !a.is_real() || a.real_part().is_negative() {
        return Err(Error::Precondition("phi^a needs a real a >= 0".into()));
    }
    check_commuting_nilpotents(ns)?;
    let mut out = Vec::new();
    for j in 0..ns.len() {
        let mut acc = Mat::zeros(ns[j].rows(), ns[j].cols());
        let mut coef = T::one();
        for k in 0..=j {
            if k > 0 {
                coef = coef * a.clone() / T::from_int(k as i64);
            }
            acc = &acc + &ns[j - k].scale(&coef);
        }
        out.push(acc);
    }
    Ok(out)
}

/// `N'_j = sum_{k <= j} a_{j,k} N_k` with every `a_{j,k} > 0`.
pub fn triangular_substitution<T: Field>(
    coeffs: &[Vec<T>],
    ns: &[Mat<T>],
) -> Result<Vec<Mat<T>>, Error> {
    check_commuting_nilpotents(ns)?;
    if coeffs.len() != ns.len() || coeffs.iter().enumerate().any(|(j, row)| row.len() != j + 1) {
        return Err(Error::Dimension("coefficients must form a lower triangle".into()));
    }
    if coeffs.iter().flatten().any(|c| !c.is_real() || !c.real_part().is_positive()) {
        return Err(Error::Precondition("coefficients must be positive".into()));
    }
    Ok(coeffs
        .iter()
        .map(|row| {
            row.iter()
                .zip(ns)
                .fold(Mat::zeros(ns[0].rows(), ns[0].cols()), |acc, (c, n)| &acc + &n.scale(c))
        })
        .collect())
}

/// Coefficients `a^{j-k} / (j-k)!` turning `triangular_substitution` into `phi^a`.
pub fn phi_coefficients<T: Field>(a: &T, r: usize) -> Vec<Vec<T>> {
    (0..r)
        .map(|j| {
            (0..=j)
                .map(|k| {
                    let e = (j - k) as u32;
                    let mut p = T::one();
                    for _ in 0..e {
                        p = p * a.clone();
                    }
                    p / T::from_rational(crate::exact::field::factorial(e))
                })
                .collect()
        })
        .collect()
}

/// `T: V -> V~` with `T(W^j_i) ⊆ W~^j_i`, `T N_j = N~_j T`, `T Y^r = Y~^r T`.
pub fn is_morphism<T: Field>(
    t: &Mat<T>,
    s: &DeligneSystemR<T>,
    st: &DeligneSystemR<T>,
) -> Result<bool, Error> {
    if t.cols() != s.w.ambient() || t.rows() != st.w.ambient() || s.rank() != st.rank() {
        return Err(Error::Dimension("incompatible systems".into()));
    }
    let ws = s.filtrations()?;
    let wt = st.filtrations()?;
    for (a, b) in ws.iter().zip(&wt) {
        let lo = a.lowest().min(b.lowest()) - 1;
        let hi = a.highest().max(b.highest()) + 1;
        if (lo..=hi).any(|i| !a.get(i).image(t).is_subspace_of(&b.get(i))) {
            return Ok(false);
        }
    }
    let ok_n = s.ns.iter().zip(&st.ns).all(|(n, m)| &(t * n) == &(m * t));
    Ok(ok_n && &(t * &s.yr) == &(&st.yr * t))
}

/// `T Y^i = Y~^i T` for every grading of the two chains.
pub fn intertwines_chain<T: Field>(t: &Mat<T>, a: &Chain<T>, b: &Chain<T>) -> bool {
    a.gradings.iter().zip(&b.gradings).all(|(x, y)| &(t * x) == &(y * t))
}

/// `(Ad(g) N_j; Ad(g) Y^r)` on `g(W)`.
pub fn conjugate_system<T: Field>(g: &Mat<T>, s: &DeligneSystemR<T>) -> Result<DeligneSystemR<T>, Error> {
    let ns = s.ns.iter().map(|n| n.conjugate_by(g)).collect::<Result<Vec<_>, _>>()?;
    let steps: Vec<(i64, Subspace<T>)> =
        (s.w.lowest()..=s.w.highest()).map(|k| (k, s.w.get(k).image(g))).collect();
    Ok(DeligneSystemR { w: Filtration::from_steps(s.w.ambient(), &steps)?, ns, yr: s.yr.conjugate_by(g)? })
}

/// `g(F) = F`, `Ad(g) N^_j = N^_j` and `Ad(g) H_j = H_j` for every pair.
pub fn preserves_sl2_data(
    g: &Mat<Rational>,
    s: &DeligneSystemR<Rational>,
    f: &HodgeFiltration<Gaussian>,
) -> Result<bool, Error> {
    let chain = build_chain(s)?;
    let gc = g.complexify();
    if f.image(&gc) != *f {
        return Ok(false);
    }
    for (n, h) in chain.n_hats.iter().zip(&chain.hs) {
        if n.conjugate_by(g)? != *n || h.conjugate_by(g)? != *h {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same filtrations, chain gradings and `N^_j`.
pub fn same_sl2_data<T: Field>(a: &Chain<T>, b: &Chain<T>) -> bool {
    a.filtrations == b.filtrations && a.gradings == b.gradings && a.n_hats == b.n_hats
}
