//! Mixed Hodge layer: axioms of Deligne-Hodge systems and infinitesimal mixed
//! Hodge modules with split limits, exact polarizability with certificates,
//! and the signed Young diagram of a split polarized mixed Hodge structure.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::classify::leading_sign;
use crate::deligne::{build_chain, pre_deligne_report, DeligneSystemR};
use crate::diagrams::{Row, Sign, SignedDiagram};
use crate::exact::cone::{strict_cone, StrictCone};
use crate::exact::field::{factorial, i_pow};
use crate::exact::mat::{dot, unit_vec};
use crate::exact::text::mat_to_json;
use crate::exact::{Field, Gaussian, Mat, Rational, Solution, Subspace};
use crate::filtrations::{
    check_mhs, deligne_bigrading, monodromy_filtration, relative_monodromy_filtration, Bigrading,
    Filtration, HodgeFiltration, Restriction,
};
use crate::fixtures::Fixture;
use crate::report::Report;
use crate::{Error, GMat, QMat, QSubspace};

fn cx_space(s: &QSubspace) -> Subspace<Gaussian> {
    s.map_field(|x| Gaussian::from_rational(x.clone()))
}

/// `(W, N_1, ..., N_r; F)` on `Q^n` with its real structure.
#[derive(Clone, Debug)]
pub struct DeligneHodgeSystem {
    pub w: Filtration<Rational>,
    pub ns: Vec<QMat>,
    pub f: HodgeFiltration<Gaussian>,
    /// Basis names, used in certificates.
    pub names: Vec<String>,
}

impl DeligneHodgeSystem {
    pub fn new(w: Filtration<Rational>, ns: Vec<QMat>, f: HodgeFiltration<Gaussian>) -> Result<Self, Error> {
        let d = w.ambient();
        if f.ambient() != d || ns.iter().any(|n| n.rows() != d || !n.is_square()) {
            return Err(Error::Dimension("W, F and the N_j live on different spaces".into()));
        }
        let names = (1..=d).map(|i| format!("v{i}")).collect();
        Ok(DeligneHodgeSystem { w, ns, f, names })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim());
        self.names = names;
        self
    }

    pub fn from_fixture(fx: &Fixture) -> Self {
        DeligneHodgeSystem { w: fx.w.clone(), ns: fx.ns.clone(), f: fx.f.clone(), names: fx.basis.clone() }
    }

    pub fn dim(&self) -> usize {
        self.w.ambient()
    }

    /// `W^0, ..., W^r`.
    pub fn limit_filtrations(&self) -> Result<Vec<Filtration<Rational>>, Error> {
        let (rep, ws) = pre_deligne_report(&self.w, &self.ns);
        ws.ok_or_else(|| {
            let why: Vec<String> = rep.failures().iter().map(|c| format!("{} {}", c.name, c.detail)).collect();
            Error::Precondition(format!("not a pre-Deligne system: {}", why.join("; ")))
        })
    }

    /// Deligne splitting of `(F, W^r)`.
    pub fn limit(&self) -> Result<Bigrading, Error> {
        let ws = self.limit_filtrations()?;
        deligne_bigrading(&self.f, ws.last().expect("W^0"))
    }

    /// `(W, N_1, ..., N_r; Y_(F, W^r))`; the limit must be split over `R`.
    pub fn deligne_system(&self) -> Result<DeligneSystemR<Rational>, Error> {
        let bg = self.limit()?;
        if !bg.is_real_split() {
            return Err(Error::Unsupported("non-split input: the limit (F, W^r) is not split over R".into()));
        }
        let yr = bg.real_weight_grading().expect("split limit has a real grading");
        DeligneSystemR::new(self.w.clone(), self.ns.clone(), yr)
    }

    /// The induced system on `Gr^W_k`.
    pub fn graded_piece(&self, k: i64) -> DeligneHodgeSystem {
        let gp = GradedPiece::new(&self.w, k);
        let names = (1..=gp.dim()).map(|i| format!("gr{k}_{i}")).collect();
        DeligneHodgeSystem {
            w: Filtration::pure(gp.dim(), k),
            ns: self.ns.iter().map(|n| gp.op(n)).collect(),
            f: gp.hodge(&self.f),
            names,
        }
    }
}

/// `Gr^W_k` in the coordinates of a complement of `W_{k-1}` in `W_k`.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub weight: i64,
    comp: Vec<Vec<Rational>>,
    cols: QMat,
    top: QSubspace,
}

impl GradedPiece {
    pub fn new(w: &Filtration<Rational>, k: i64) -> Self {
        let top = w.get(k);
        let bottom = w.get(k - 1);
        let comp = top.complement_of(&bottom);
        let mut all = comp.clone();
        all.extend(bottom.basis().iter().cloned());
        let cols = Mat::from_cols(w.ambient(), &all);
        GradedPiece { weight: k, comp, cols, top }
    }

    pub fn dim(&self) -> usize {
        self.comp.len()
    }

    /// Class in `Gr^W_k` of a vector of `W_k`.
    pub fn coords<T: Field>(&self, v: &[T]) -> Vec<T> {
        let a = self.cols.map(|x| T::from_rational(x.clone()));
        let x = a.solve(v).particular().cloned().expect("vector lies in W_k");
        x[..self.dim()].to_vec()
    }

    pub fn op(&self, a: &QMat) -> QMat {
        let cols: Vec<Vec<Rational>> = self.comp.iter().map(|c| self.coords(&a.apply(c))).collect();
        Mat::from_cols(self.dim(), &cols)
    }

    fn space<T: Field>(&self, s: &Subspace<T>, top: &Subspace<T>) -> Subspace<T> {
        let vs: Vec<Vec<T>> = s.intersect(top).basis().iter().map(|v| self.coords(v)).collect();
        Subspace::span(self.dim(), &vs)
    }

    pub fn filtration(&self, f: &Filtration<Rational>) -> Filtration<Rational> {
        let steps: Vec<(i64, QSubspace)> =
            (f.lowest()..=f.highest()).map(|k| (k, self.space(&f.get(k), &self.top))).collect();
        Filtration::from_steps(self.dim(), &steps).expect("induced filtration")
    }

    pub fn hodge(&self, f: &HodgeFiltration<Gaussian>) -> HodgeFiltration<Gaussian> {
        let top = cx_space(&self.top);
        let steps: Vec<(i64, Subspace<Gaussian>)> =
            (f.lowest()..=f.highest() + 1).map(|p| (p, self.space(&f.get(p), &top))).collect();
        HodgeFiltration::from_steps(self.dim(), &steps).expect("induced filtration")
    }

    /// Gram matrix of `q` on the chosen complement.
    pub fn form(&self, q: &QMat) -> QMat {
        Mat::from_fn(self.dim(), self.dim(), |i, j| dot(&self.comp[i], &q.apply(&self.comp[j])))
    }
}

/// Pre-Deligne conditions (a)-(d) and the Hodge conditions (f1), (f2).
pub fn check_dh(s: &DeligneHodgeSystem) -> Report {
    let (mut rep, ws) = pre_deligne_report(&s.w, &s.ns);
    for (j, n) in s.ns.iter().enumerate() {
        rep.require("(f1)", s.f.is_shifted_by(&n.complexify(), -1), || format!("N_{} F^p is not in F^(p-1)", j + 1));
    }
    if s.ns.is_empty() {
        rep.record("(f1)", Ok(()));
    }
    let Some(ws) = ws else {
        rep.record("(f2)", Err("the relative weight filtrations do not exist".into()));
        return rep;
    };
    let wr = ws.last().expect("W^0");
    rep.record("(f2)", check_mhs(&s.f, wr).map_err(|e| format!("(F, W^r): {e}")));
    for (k, wk) in ws.iter().enumerate().take(ws.len() - 1) {
        for w in wk.lowest()..=wk.highest() {
            let u = wk.get(w);
            if u.is_zero() {
                continue;
            }
            let ru = Restriction::new(&u);
            let fu = Restriction::new(&cx_space(&u)).hodge(&s.f);
            let outcome = check_mhs(&fu, &ru.filtration(wr)).map_err(|e| format!("U = W^{k}_{w}: {e}"));
            rep.record("(f2)", outcome);
        }
    }
    rep
}

/// An unknown real form of parity `(-1)^k`: one parameter per entry on or
/// above (symmetric) or strictly above (alternating) the diagonal, in
/// row-major order.
#[derive(Clone, Debug)]
pub struct FormUnknowns {
    dim: usize,
    skew: bool,
    index: Vec<(usize, usize)>,
}

impl FormUnknowns {
    pub fn new(dim: usize, weight: i64) -> Self {
        let skew = weight.rem_euclid(2) == 1;
        let index = (0..dim)
            .flat_map(|m| (m..dim).map(move |n| (m, n)))
            .filter(|(m, n)| !skew || m != n)
            .collect();
        FormUnknowns { dim, skew, index }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn index(&self) -> &[(usize, usize)] {
        &self.index
    }

    /// Coefficients of `Q(u, v)` in the parameters.
    pub fn pairing(&self, u: &[Gaussian], v: &[Gaussian]) -> Vec<Gaussian> {
        let s = if self.skew { -Gaussian::one() } else { Gaussian::one() };
        self.index
            .iter()
            .map(|&(m, n)| {
                if m == n {
                    u[m].clone() * v[m].clone()
                } else {
                    u[m].clone() * v[n].clone() + s.clone() * u[n].clone() * v[m].clone()
                }
            })
            .collect()
    }

    pub fn matrix(&self, t: &[Rational]) -> QMat {
        let mut q = Mat::zeros(self.dim, self.dim);
        for (&(m, n), x) in self.index.iter().zip(t) {
            q.set(m, n, x.clone());
            if m != n {
                q.set(n, m, if self.skew { -x.clone() } else { x.clone() });
            }
        }
        q
    }

    /// Parameters of a given form of the right parity.
    pub fn params(&self, q: &QMat) -> Vec<Rational> {
        self.index.iter().map(|&(m, n)| q.get(m, n).clone()).collect()
    }

    /// A functional on the parameters written as a combination of `Q(b_m, b_n)`.
    pub fn describe(&self, c: &[Rational], names: &[String]) -> String {
        let mut out = String::new();
        for (&(m, n), x) in self.index.iter().zip(c) {
            if x.is_zero() {
                continue;
            }
            let term = format!("Q({},{})", names[m], names[n]);
            let mag = x.abs();
            let coef = if mag.is_one() { String::new() } else { format!("{mag} ") };
            if out.is_empty() {
                out = format!("{}{coef}{term}", if x.is_negative() { "-" } else { "" });
            } else {
                out.push_str(&format!(" {} {coef}{term}", if x.is_negative() { "-" } else { "+" }));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// Primitive part `P^{p,q} = I^{p,q} ∩ ker N^(l+1)` of a split mixed Hodge
/// structure `(F, W(N)[k])`, where `l = p + q - k`, carrying the Hermitian
/// form `h(u, v) = i^(p-q) Q(u, N^l conj(v))` that a polarization makes
/// positive definite.
#[derive(Clone, Debug)]
pub struct PrimitiveBlock {
    pub layer: String,
    pub p: i64,
    pub q: i64,
    pub l: i64,
    pub basis: Vec<Vec<Gaussian>>,
    nl: GMat,
}

impl PrimitiveBlock {
    fn weil(&self) -> Gaussian {
        i_pow(self.p - self.q)
    }

    fn partner(&self, v: &[Gaussian]) -> Vec<Gaussian> {
        let c: Vec<Gaussian> = v.iter().map(|x| x.conj()).collect();
        self.nl.apply(&c)
    }

    /// `h(u, v)` as a functional on the unknowns.
    pub fn pairing(&self, fu: &FormUnknowns, u: &[Gaussian], v: &[Gaussian]) -> Vec<Gaussian> {
        let w = self.weil();
        fu.pairing(u, &self.partner(v)).into_iter().map(|c| c * w.clone()).collect()
    }

    /// Gram matrix of `h` for a given form.
    pub fn gram(&self, q: &QMat) -> GMat {
        let qc = q.complexify();
        let w = self.weil();
        Mat::from_fn(self.basis.len(), self.basis.len(), |a, b| {
            w.clone() * dot(&self.basis[a], &qc.apply(&self.partner(&self.basis[b])))
        })
    }

    pub fn label(&self) -> String {
        format!("{}: P^({},{}), l = {}", self.layer, self.p, self.q, self.l)
    }

    pub fn vector(&self, c: &[Gaussian]) -> Vec<Gaussian> {
        let mut v = vec![Gaussian::zero(); self.nl.rows()];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x = x.clone() + ci.clone() * y.clone();
            }
        }
        v
    }
}

/// Primitive blocks of `(F, W)` for `N`, requiring `W = W(N)[k]` and a split limit.
pub fn primitive_blocks(
    f: &HodgeFiltration<Gaussian>,
    w: &Filtration<Rational>,
    n: &QMat,
    k: i64,
    layer: &str,
) -> Result<Vec<PrimitiveBlock>, Error> {
    if &monodromy_filtration(n, k)? != w {
        return Err(Error::Precondition(format!("{layer}: W is not the weight filtration of N centered at {k}")));
    }
    let bg = deligne_bigrading(f, w).map_err(|e| Error::Precondition(format!("{layer}: {e}")))?;
    if !bg.is_real_split() {
        return Err(Error::Unsupported(format!("non-split input: {layer} is not split over R")));
    }
    let nc = n.complexify();
    let d = n.rows();
    let mut out = Vec::new();
    for (&(p, q), piece) in &bg.pieces {
        let l = p + q - k;
        if l < 0 {
            continue;
        }
        let ker = Subspace::span(d, &nc.pow(l as u32 + 1).kernel());
        let prim = piece.intersect(&ker);
        if prim.is_zero() {
            continue;
        }
        out.push(PrimitiveBlock { layer: layer.into(), p, q, l, basis: prim.basis().to_vec(), nl: nc.pow(l as u32) });
    }
    Ok(out)
}

/// Blocks whose positivity says that `Q` polarizes the `SL_2`-orbit of a pure
/// split system of weight `k`: for `j = 1..r` the structure
/// `(exp(i (N^_{j+1} + ... + N^_r)) F, W^j)` is polarized by `N^_1 + ... + N^_j`.
/// Also returns the `N^_j`.
pub fn sl2_blocks(s: &DeligneHodgeSystem, k: i64) -> Result<(Vec<PrimitiveBlock>, Vec<QMat>), Error> {
    let d = s.dim();
    if s.ns.is_empty() {
        return Ok((primitive_blocks(&s.f, &s.w, &Mat::zeros(d, d), k, "layer 0")?, Vec::new()));
    }
    let chain = build_chain(&s.deligne_system()?)?;
    let r = s.ns.len();
    let sum = |ms: &[QMat]| ms.iter().fold(Mat::zeros(d, d), |a, m| &a + m);
    let mut out = Vec::new();
    for j in 1..=r {
        let head = sum(&chain.n_hats[..j]);
        let tail = sum(&chain.n_hats[j..]).complexify().scale(&i_pow(1));
        let fj = s.f.image(&tail.exp_nilpotent()?);
        out.extend(primitive_blocks(&fj, &chain.filtrations[j], &head, k, &format!("layer {j}"))?);
    }
    Ok((out, chain.n_hats))
}

/// `None` if the Hermitian matrix `h` is positive definite, otherwise
/// coordinates `z` with `z* h z <= 0` (or any `z` when `h` is not Hermitian).
pub fn hermitian_witness(h: &GMat) -> Option<Vec<Gaussian>> {
    let n = h.rows();
    if h.conj_transpose() != *h {
        return Some(unit_vec(n, 0));
    }
    let hv = |x: &[Gaussian], y: &[Gaussian]| -> Gaussian {
        let hy: Vec<Gaussian> = h.apply(&y.iter().map(|c| c.conj()).collect::<Vec<_>>());
        dot(x, &hy)
    };
    let mut basis: Vec<Vec<Gaussian>> = (0..n).map(|k| unit_vec(n, k)).collect();
    for k in 0..n {
        let d = hv(&basis[k], &basis[k]);
        if !d.real_part().is_positive() {
            return Some(basis[k].clone());
        }
        for j in k + 1..n {
            let c = hv(&basis[j], &basis[k]) / d.clone();
            let bk = basis[k].clone();
            for (x, y) in basis[j].iter_mut().zip(&bk) {
                *x = x.clone() - c.clone() * y.clone();
            }
        }
    }
    None
}

/// Outcome of the polarizability decision for a pure system.
#[derive(Clone, PartialEq, Debug)]
pub enum PolarizationCertificate {
    Feasible {
        q: QMat,
        /// Number of positivity cuts added beyond the diagonal conditions.
        cuts: usize,
    },
    Infeasible(Obstruction),
}

/// A non-negative combination of required positive quantities which the
/// linear constraints force to vanish.
#[derive(Clone, PartialEq, Debug)]
pub struct Obstruction {
    /// Labels of the linear constraints imposed on `Q`.
    pub constraints: Vec<String>,
    /// Requirements `Re h(u, u) > 0` as functionals on the unknowns.
    pub required: Vec<(String, Vec<Rational>)>,
    pub multipliers: Vec<Rational>,
    /// `Σ multipliers_i required_i`, zero on every admissible form.
    pub forced: Vec<Rational>,
    pub forced_text: String,
}

impl PolarizationCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PolarizationCertificate::Feasible { .. })
    }

    pub fn summary(&self) -> String {
        match self {
            PolarizationCertificate::Feasible { .. } => "FEASIBLE".into(),
            PolarizationCertificate::Infeasible(o) => {
                format!("INFEASIBLE (forced {}=0, required >0)", o.forced_text.replace(' ', ""))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            PolarizationCertificate::Feasible { q, cuts } => {
                json!({"status": "feasible", "q": mat_to_json(q), "cuts": cuts})
            }
            PolarizationCertificate::Infeasible(o) => {
                let req: Vec<Value> = o
                    .required
                    .iter()
                    .zip(&o.multipliers)
                    .filter(|(_, m)| !m.is_zero())
                    .map(|((l, _), m)| json!({"requirement": l, "multiplier": m.to_string()}))
                    .collect();
                json!({
                    "status": "infeasible",
                    "constraints": o.constraints,
                    "forced": format!("{} = 0", o.forced_text),
                    "required": format!("{} > 0", o.forced_text),
                    "combination": req,
                })
            }
        }
    }
}

const MAX_CUTS: usize = 200;

/// Linear conditions on an unknown polarization: each `N_j` and `N^_j` is an
/// infinitesimal isometry, and `Q(exp(N(z)) F^p, exp(N(z)) F^(k-p+1)) = 0`
/// coefficientwise for `N(z) = Σ z_j N_j` and for `Σ z_j N^_j`.
fn linear_constraints(
    s: &DeligneHodgeSystem,
    k: i64,
    fu: &FormUnknowns,
    n_hats: &[QMat],
) -> Vec<(String, Vec<Gaussian>)> {
    let d = s.dim();
    let mut eqs = Vec::new();
    let basis: Vec<Vec<Gaussian>> = (0..d).map(|i| unit_vec(d, i)).collect();
    for (name, ops) in [("N", &s.ns), ("N^", &n_hats.to_vec())] {
        for (j, n) in ops.iter().enumerate() {
            let nc = n.complexify();
            let label = format!("{name}_{} is an infinitesimal isometry", j + 1);
            for a in 0..d {
                for b in a..d {
                    let x = fu.pairing(&nc.apply(&basis[a]), &basis[b]);
                    let y = fu.pairing(&basis[a], &nc.apply(&basis[b]));
                    eqs.push((label.clone(), x.iter().zip(&y).map(|(p, q)| p.clone() + q.clone()).collect()));
                }
            }
        }
        eqs.extend(isotropy(s, k, fu, ops, name));
    }
    eqs
}

fn isotropy(
    s: &DeligneHodgeSystem,
    k: i64,
    fu: &FormUnknowns,
    ops: &[QMat],
    name: &str,
) -> Vec<(String, Vec<Gaussian>)> {
    let d = s.dim();
    let label = format!("Q(exp({name}(z)) F^p, exp({name}(z)) F^(k-p+1)) = 0");
    let nus: Vec<u32> = ops.iter().map(|n| n.nilpotency_index().unwrap_or(1).max(1)).collect();
    let mut alphas: Vec<Vec<u32>> = vec![Vec::new()];
    for &nu in &nus {
        alphas = alphas.into_iter().flat_map(|a| (0..nu).map(move |e| [a.clone(), vec![e]].concat())).collect();
    }
    // N^alpha / alpha!
    let mono: Vec<QMat> = alphas
        .iter()
        .map(|a| {
            a.iter().zip(ops).fold(Mat::identity(d), |m, (&e, n)| {
                &m * &n.pow(e).scale(&factorial(e).recip())
            })
        })
        .map(|m: QMat| m)
        .collect();
    let mut eqs = Vec::new();
    for p in s.f.lowest()..=s.f.highest() {
        let fp = s.f.get(p);
        let fq = s.f.get(k - p + 1);
        for u in fp.basis() {
            for v in fq.basis() {
                let mut acc: BTreeMap<Vec<u32>, Vec<Gaussian>> = BTreeMap::new();
                for (a, ma) in alphas.iter().zip(&mono) {
                    let mu = ma.complexify().apply(u);
                    for (b, mb) in alphas.iter().zip(&mono) {
                        let g: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        let c = fu.pairing(&mu, &mb.complexify().apply(v));
                        let e = acc.entry(g).or_insert_with(|| vec![Gaussian::zero(); fu.len()]);
                        for (x, y) in e.iter_mut().zip(c) {
                            *x = x.clone() + y;
                        }
                    }
                }
                eqs.extend(acc.into_values().map(|c| (label.clone(), c)));
            }
        }
    }
    eqs
}

fn real_rows(eqs: &[(String, Vec<Gaussian>)]) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for (_, e) in eqs {
        for part in [e.iter().map(|x| x.real_part()).collect::<Vec<_>>(), e.iter().map(|x| x.imag_part()).collect()] {
            if part.iter().any(|x| !x.is_zero()) {
                rows.push(part);
            }
        }
    }
    rows
}

/// Decide whether a pure split Deligne-Hodge system of weight `k` admits a
/// polarization: a real form of parity `(-1)^k` such that every `N_j` is an
/// infinitesimal isometry and the associated `SL_2`-orbit is polarized.
///
/// Linear conditions are imposed exactly; the positivity of the Hermitian
/// forms on primitive pieces is decided by strict linear feasibility on
/// diagonal values, refined by cuts `h(z, z) > 0` at any sample where a form
/// fails to be definite.
pub fn polarization_feasibility(s: &DeligneHodgeSystem, k: i64) -> Result<PolarizationCertificate, Error> {
    if !s.w.is_pure() || s.w.lowest() != k {
        return Err(Error::Precondition(format!(
            "W is not pure of weight {k}; decide each graded piece separately"
        )));
    }
    let d = s.dim();
    let fu = FormUnknowns::new(d, k);
    let (blocks, n_hats) = sl2_blocks(s, k)?;
    let mut eqs = linear_constraints(s, k, &fu, &n_hats);
    for b in &blocks {
        for x in 0..b.basis.len() {
            for y in x..b.basis.len() {
                let hxy = b.pairing(&fu, &b.basis[x], &b.basis[y]);
                let hyx = b.pairing(&fu, &b.basis[y], &b.basis[x]);
                let e = hxy.iter().zip(&hyx).map(|(p, q)| p.clone() - q.conj()).collect();
                eqs.push((format!("{} is Hermitian", b.label()), e));
            }
        }
    }
    let mut constraints: Vec<String> = eqs.iter().map(|(l, _)| l.clone()).collect();
    constraints.dedup();
    let emat = real_rows(&eqs);
    let kernel: Vec<Vec<Rational>> = if emat.is_empty() {
        (0..fu.len()).map(|i| unit_vec(fu.len(), i)).collect()
    } else {
        Mat::from_rows(emat)?.kernel()
    };
    let mut required: Vec<(String, Vec<Rational>)> = Vec::new();
    for b in &blocks {
        for (x, v) in b.basis.iter().enumerate() {
            let h = b.pairing(&fu, v, v);
            required.push((format!("{}, basis vector {}", b.label(), x + 1), h.iter().map(|c| c.real_part()).collect()));
        }
    }
    for cuts in 0..=MAX_CUTS {
        let rows: Vec<Vec<Rational>> =
            required.iter().map(|(_, r)| kernel.iter().map(|kv| dot(r, kv)).collect()).collect();
        match strict_cone(&rows, kernel.len()) {
            StrictCone::Empty(y) => {
                let mut forced = vec![Rational::zero(); fu.len()];
                for ((_, r), c) in required.iter().zip(&y) {
                    for (f, x) in forced.iter_mut().zip(r) {
                        *f = f.clone() + c.clone() * x.clone();
                    }
                }
                let forced_text = fu.describe(&forced, &s.names);
                return Ok(PolarizationCertificate::Infeasible(Obstruction {
                    constraints,
                    required,
                    multipliers: y,
                    forced,
                    forced_text,
                }));
            }
            StrictCone::Point(t) => {
                let params: Vec<Rational> = (0..fu.len())
                    .map(|i| kernel.iter().zip(&t).map(|(kv, c)| kv[i].clone() * c.clone()).sum())
                    .collect();
                let q = fu.matrix(&params);
                let mut cut = false;
                for b in &blocks {
                    if let Some(z) = hermitian_witness(&b.gram(&q)) {
                        let v = b.vector(&z);
                        let h = b.pairing(&fu, &v, &v);
                        required.push((format!("{}, cut {}", b.label(), cuts + 1), h.iter().map(|c| c.real_part()).collect()));
                        cut = true;
                    }
                }
                if !cut {
                    if q.det().is_zero() {
                        return Err(Error::Precondition("sample form is degenerate".into()));
                    }
                    return Ok(PolarizationCertificate::Feasible { q, cuts });
                }
            }
        }
    }
    Err(Error::Unsupported(format!("positivity search did not settle within {MAX_CUTS} cuts")))
}

/// Polarizability of every graded piece `Gr^W_k`.
pub fn check_graded_polarizable(
    s: &DeligneHodgeSystem,
) -> Result<(bool, Vec<(i64, PolarizationCertificate)>), Error> {
    let mut out = Vec::new();
    for k in s.w.weights() {
        let piece = s.graded_piece(k);
        if piece.dim() == 0 {
            continue;
        }
        out.push((k, polarization_feasibility(&piece, k)?));
    }
    Ok((out.iter().all(|(_, c)| c.is_feasible()), out))
}

/// Data of an infinitesimal mixed Hodge module.
#[derive(Clone, Debug)]
pub struct ImhmData {
    pub w: Filtration<Rational>,
    /// Forms on `V` which on `W_k` descend to `Q_k` on `Gr^W_k`.
    pub forms: BTreeMap<i64, QMat>,
    pub f: HodgeFiltration<Gaussian>,
    pub ns: Vec<QMat>,
}

impl ImhmData {
    pub fn pure(k: i64, q: QMat, f: HodgeFiltration<Gaussian>, ns: Vec<QMat>) -> Self {
        ImhmData { w: Filtration::pure(q.rows(), k), forms: BTreeMap::from([(k, q)]), f, ns }
    }
}

fn is_isometry(n: &QMat, q: &QMat) -> bool {
    (&(&n.transpose() * q) + &(q * n)).is_zero()
}

/// Axioms (1)-(3) and (a)-(c). Positivity in (b) is tested on the split
/// `SL_2`-orbit and on the limit polarized by `N_1 + ... + N_r`; non-split
/// limits are rejected.
pub fn check_imhm(data: &ImhmData) -> Result<Report, Error> {
    let mut rep = Report::new();
    let d = data.w.ambient();
    let s = DeligneHodgeSystem::new(data.w.clone(), data.ns.clone(), data.f.clone())?;
    let weights: Vec<i64> = data.w.weights().into_iter().filter(|&k| data.w.gr_dim(k) > 0).collect();
    for &k in &weights {
        let Some(q) = data.forms.get(&k) else {
            rep.record("(1)", Err(format!("no form on Gr^W_{k}")));
            continue;
        };
        let gp = GradedPiece::new(&data.w, k);
        let qk = gp.form(q);
        let parity = if k.rem_euclid(2) == 0 { qk.transpose() == qk } else { qk.transpose() == -&qk };
        rep.require("(1)", parity, || format!("Q_{k} does not have parity (-1)^{k}"));
        rep.require("(1)", !qk.det().is_zero(), || format!("Q_{k} is degenerate"));
        let (top, low) = (data.w.get(k), data.w.get(k - 1));
        let descends = top.basis().iter().all(|u| {
            low.basis().iter().all(|v| dot(u, &q.apply(v)).is_zero() && dot(v, &q.apply(u)).is_zero())
        });
        rep.require("(1)", descends, || format!("Q_{k} does not vanish on W_{} x W_{k}", k - 1));
    }
    for (j, n) in data.ns.iter().enumerate() {
        rep.require("(3)", n.is_nilpotent() && data.w.is_preserved_by(n), || {
            format!("N_{} is not a nilpotent endomorphism preserving W", j + 1)
        });
        rep.require("(a)", data.f.is_shifted_by(&n.complexify(), -1), || format!("N_{} F^p is not in F^(p-1)", j + 1));
    }
    if data.ns.is_empty() {
        rep.record("(3)", Ok(()));
        rep.record("(a)", Ok(()));
    }
    if !rep.item_passed("(3)") {
        return Ok(rep);
    }
    let limit = s.limit_filtrations().and_then(|ws| {
        let bg = deligne_bigrading(&data.f, ws.last().expect("W^0"))?;
        Ok((ws, bg))
    });
    match limit {
        Err(e) => rep.record("(b)", Err(e.to_string())),
        Ok((_, bg)) if !bg.is_real_split() => {
            return Err(Error::Unsupported("non-split input: the limit (F, W^r) is not split over R".into()))
        }
        Ok(_) => {
            for &k in &weights {
                let Some(q) = data.forms.get(&k) else { continue };
                let gp = GradedPiece::new(&data.w, k);
                rep.record("(b)", graded_positivity(&s.graded_piece(k), &gp.form(q), k));
            }
        }
    }
    let r = data.ns.len();
    for mask in 1u32..(1 << r) {
        let sub: Vec<usize> = (0..r).filter(|j| mask & (1 << j) != 0).collect();
        let nj = sub.iter().fold(Mat::zeros(d, d), |a, &j| &a + &data.ns[j]);
        let label: Vec<String> = sub.iter().map(|j| (j + 1).to_string()).collect();
        match relative_monodromy_filtration(&nj, &data.w) {
            Ok(Some(m)) => {
                for &j in &sub {
                    rep.require("(c)", m.is_lowered_by(&data.ns[j], 2), || {
                        format!("N_{} does not lower M({{{}}}) by 2", j + 1, label.join(","))
                    });
                }
            }
            Ok(None) => rep.record("(c)", Err(format!("M({{{}}}) does not exist", label.join(",")))),
            Err(e) => rep.record("(c)", Err(e.to_string())),
        }
    }
    Ok(rep)
}

/// Condition (b) on one pure graded piece with its form.
fn graded_positivity(piece: &DeligneHodgeSystem, q: &QMat, k: i64) -> Result<(), String> {
    for (j, n) in piece.ns.iter().enumerate() {
        if !is_isometry(n, q) {
            return Err(format!("Gr_{k}: N_{} is not an infinitesimal isometry of Q_{k}", j + 1));
        }
    }
    let qc = q.complexify();
    for p in piece.f.lowest()..=piece.f.highest() {
        for u in piece.f.get(p).basis() {
            for v in piece.f.get(k - p + 1).basis() {
                if !dot(u, &qc.apply(v)).is_zero() {
                    return Err(format!("Gr_{k}: Q_{k}(F^{p}, F^{}) != 0", k - p + 1));
                }
            }
        }
    }
    let (mut blocks, _) = sl2_blocks(piece, k).map_err(|e| format!("Gr_{k}: {e}"))?;
    let d = piece.dim();
    let total = piece.ns.iter().fold(Mat::zeros(d, d), |a, n| &a + n);
    let wr = piece.limit_filtrations().map_err(|e| e.to_string())?.pop().expect("W^0");
    blocks.extend(
        primitive_blocks(&piece.f, &wr, &total, k, "cone element N_1 + ... + N_r")
            .map_err(|e| format!("Gr_{k}: {e}"))?,
    );
    for b in &blocks {
        if hermitian_witness(&b.gram(q)).is_some() {
            return Err(format!("Gr_{k}: {} is not positive definite", b.label()));
        }
    }
    Ok(())
}

/// Dimensions `h^{p,q}` of the bigrading of a split mixed Hodge structure
/// `(F, W(N)[w])`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HodgeDiamond {
    pub weight: i64,
    pub numbers: BTreeMap<(i64, i64), usize>,
}

impl HodgeDiamond {
    pub fn new(weight: i64, numbers: BTreeMap<(i64, i64), usize>) -> Result<Self, Error> {
        let d = HodgeDiamond { weight, numbers: numbers.into_iter().filter(|&(_, n)| n > 0).collect() };
        d.validate()?;
        Ok(d)
    }

    pub fn from_bigrading(bg: &Bigrading, weight: i64) -> Result<Self, Error> {
        Self::new(weight, bg.hodge_numbers())
    }

    pub fn h(&self, p: i64, q: i64) -> usize {
        self.numbers.get(&(p, q)).copied().unwrap_or(0)
    }

    /// `dim P^{p,q}` for `p + q >= w`.
    pub fn primitive(&self, p: i64, q: i64) -> usize {
        self.h(p, q) - self.h(p + 1, q + 1)
    }

    pub fn dim(&self) -> usize {
        self.numbers.values().sum()
    }

    fn validate(&self) -> Result<(), Error> {
        let w = self.weight;
        for &(p, q) in self.numbers.keys() {
            let n = self.h(p, q);
            if self.h(q, p) != n {
                return Err(Error::Precondition(format!("h^({p},{q}) != h^({q},{p})")));
            }
            if self.h(w - q, w - p) != n {
                return Err(Error::Precondition(format!("h^({p},{q}) != h^({},{})", w - q, w - p)));
            }
            if p + q >= w && self.h(p + 1, q + 1) > n {
                return Err(Error::Precondition(format!("h^({},{}) > h^({p},{q})", p + 1, q + 1)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let m: serde_json::Map<String, Value> =
            self.numbers.iter().map(|(&(p, q), &n)| (format!("{p},{q}"), json!(n))).collect();
        json!({"weight": self.weight, "h": m})
    }
}

/// The signed Young diagram of a polarized split mixed Hodge structure with
/// this diamond: every primitive piece contributes strings of length `l + 1`
/// with the sign read off from `i^(p-q) Q(u, N^l conj u) > 0`.
pub fn chromosome(d: &HodgeDiamond) -> Result<SignedDiagram, Error> {
    d.validate()?;
    let w = d.weight;
    let mut rows = Vec::new();
    for &(p, q) in d.numbers.keys() {
        let l = p + q - w;
        if l < 0 || p < q {
            continue;
        }
        let m = d.primitive(p, q);
        let len = l as u32 + 1;
        let sign = match leading_sign(w, l as usize) {
            None => Sign::Blank,
            Some(s) if (p - q).rem_euclid(4) == 2 => s.flip(),
            Some(s) => s,
        };
        let copies = if p == q { m } else { 2 * m };
        rows.extend(std::iter::repeat(Row::new(len, sign)).take(copies));
    }
    Ok(SignedDiagram::new(rows))
}

/// Diamond of `(F, W(N)[w])`, for a polarized split orbit given by `(F, N)`.
pub fn diamond_of(f: &HodgeFiltration<Gaussian>, n: &QMat, weight: i64) -> Result<HodgeDiamond, Error> {
    let bg = deligne_bigrading(f, &monodromy_filtration(n, weight)?)?;
    if !bg.is_real_split() {
        return Err(Error::Unsupported("non-split input".into()));
    }
    HodgeDiamond::from_bigrading(&bg, weight)
}

/// A complement of the sub-object `h` which is again a sub-object (stable
/// under every `N_j` and compatible with the bigrading of the limit), or
/// `None` if there is none.
///
/// Decided exactly: complements correspond to projections onto `h` commuting
/// with the `N_j` and the bigrading projectors, a linear problem.
pub fn invariant_complement(s: &DeligneHodgeSystem, h: &QSubspace) -> Result<Option<QSubspace>, Error> {
    let d = s.dim();
    let bg = s.limit()?;
    let hc = cx_space(h);
    let mut ops: Vec<GMat> = s.ns.iter().map(|n| n.complexify()).collect();
    for g in [bg.weight_grading(), bg.hodge_grading()] {
        for l in g.labels() {
            ops.push(g.projector(l));
        }
    }
    let rh = Restriction::new(&hc);
    let restricted: Vec<GMat> = ops
        .iter()
        .map(|a| rh.op(a))
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Precondition("not a sub-object".into()))?;
    let m = h.dim();
    let b = Mat::from_cols(d, hc.basis());
    // unknown X (m x d) with X A = A_H X for every A and X B = 1
    let lin = |x: &GMat| -> Vec<Gaussian> {
        let mut out = Vec::new();
        for (a, ah) in ops.iter().zip(&restricted) {
            out.extend((&(x * a) - &(ah * x)).to_vec());
        }
        out.extend((x * &b).to_vec());
        out
    };
    let cols: Vec<Vec<Gaussian>> = (0..m * d)
        .map(|i| lin(&Mat::from_vec(m, d, unit_vec(m * d, i))))
        .collect();
    let mut rhs = vec![Gaussian::zero(); cols[0].len() - m * m];
    rhs.extend(Mat::<Gaussian>::identity(m).to_vec());
    let sys = Mat::from_cols(rhs.len(), &cols);
    let Solution::Solvable { particular, .. } = sys.solve(&rhs) else {
        return Ok(None);
    };
    let p = &b * &Mat::from_vec(m, d, particular);
    let pr: QMat = p.map(|x| x.real_part());
    let k = Subspace::span(d, &pr.kernel());
    Ok(Some(k))
}

/// Every diamond of a polarized split mixed Hodge structure whose limit has
/// Hodge numbers `hodge[j] = h^{w-j, j}` of a pure structure of weight `w`,
/// including the trivial one (`N = 0`).
pub fn split_diamonds(weight: i64, hodge: &[usize]) -> Result<Vec<HodgeDiamond>, Error> {
    if weight < 0 || hodge.len() != weight as usize + 1 {
        return Err(Error::Dimension(format!("need {} Hodge numbers for weight {weight}", weight + 1)));
    }
    if (0..hodge.len()).any(|j| hodge[j] != hodge[hodge.len() - 1 - j]) {
        return Err(Error::Precondition("Hodge numbers must be symmetric".into()));
    }
    // primitive slots (p, q), p >= q, with strings staying inside the square
    let mut slots = Vec::new();
    for l in 0..=weight {
        for q in l..=weight {
            let p = weight + l - q;
            if p >= q && p <= weight {
                slots.push((p, q, l));
            }
        }
    }
    let mut out = Vec::new();
    let mut budget: Vec<i64> = hodge.iter().rev().map(|&h| h as i64).collect(); // indexed by p
    let mut mult = vec![0usize; slots.len()];
    diamond_search(weight, &slots, 0, &mut budget, &mut mult, &mut out);
    out.sort_by(|a, b| a.numbers.cmp(&b.numbers));
    Ok(out)
}

fn slot_use(p: i64, q: i64, l: i64) -> Vec<i64> {
    let mut us: Vec<i64> = (0..=l).map(|j| p - j).collect();
    if p != q {
        us.extend((0..=l).map(|j| q - j));
    }
    us
}

fn diamond_search(
    weight: i64,
    slots: &[(i64, i64, i64)],
    at: usize,
    budget: &mut [i64],
    mult: &mut [usize],
    out: &mut Vec<HodgeDiamond>,
) {
    if at == slots.len() {
        if budget.iter().any(|&b| b != 0) {
            return;
        }
        let mut numbers = BTreeMap::new();
        for (&(p, q, l), &m) in slots.iter().zip(mult.iter()) {
            for j in 0..=l {
                *numbers.entry((p - j, q - j)).or_insert(0) += m;
                if p != q {
                    *numbers.entry((q - j, p - j)).or_insert(0) += m;
                }
            }
        }
        if let Ok(d) = HodgeDiamond::new(weight, numbers) {
            out.push(d);
        }
        return;
    }
    let (p, q, l) = slots[at];
    let uses = slot_use(p, q, l);
    let mut m = 0;
    loop {
        mult[at] = m;
        diamond_search(weight, slots, at + 1, budget, mult, out);
        for &u in &uses {
            budget[u as usize] -= 1;
        }
        m += 1;
        if budget.iter().any(|&b| b < 0) {
            for &u in &uses {
                budget[u as usize] += m as i64;
            }
            mult[at] = 0;
            return;
        }
    }
}
