use std::collections::BTreeMap;

use nilorbit::classify::signed_diagram_of;
use nilorbit::diagrams::{Row, Sign, SignedDiagram};
use nilorbit::exact::field::{gauss, int, rat};
use nilorbit::exact::mat::{dot, unit_vec};
use nilorbit::filtrations::{Filtration, HodgeFiltration};
use nilorbit::fixtures::*;
use nilorbit::hodge::*;
use nilorbit::{Gaussian, Mat, QMat, Rational, Subspace};

fn g(re: i64, im: i64) -> Gaussian {
    gauss(int(re), int(im))
}

fn real_vec(d: usize, k: usize) -> Vec<Gaussian> {
    unit_vec(d, k)
}

fn sys(fx: &Fixture) -> DeligneHodgeSystem {
    DeligneHodgeSystem::from_fixture(fx)
}

/// The unpolarizable pair with `N_2` replaced by `a N_1 + N_2`.
fn with_cone_shift(a: Rational) -> DeligneHodgeSystem {
    let fx = unpolarizable_pair();
    let n2 = &fx.ns[1] + &fx.ns[0].scale(&a);
    DeligneHodgeSystem::new(fx.w.clone(), vec![fx.ns[0].clone(), n2], fx.f.clone())
        .unwrap()
        .with_names(fx.basis.clone())
}

/// A weight-2 Hodge structure on `Q^1` of type `(1,1)`, or a weight-1 one on
/// `Q^2` with `e1 + i e2` of type `(1,0)`.
fn pure_hs(weight: i64) -> (HodgeFiltration<Gaussian>, QMat) {
    match weight {
        2 => {
            let f = hodge(1, &[(2, vec![]), (1, vec![real_vec(1, 0)])]);
            (f, Mat::diag(&[int(1)]))
        }
        1 => {
            let f = hodge(2, &[(1, vec![vec![g(1, 0), g(0, 1)]]), (0, vec![real_vec(2, 0), real_vec(2, 1)])]);
            (f, form(2, &[(0, 1, int(1))], -1))
        }
        _ => unreachable!(),
    }
}

fn forms_of(fx: &Fixture) -> ImhmData {
    ImhmData::pure(fx.weight, fx.q.clone().unwrap(), fx.f.clone(), fx.ns.clone())
}

#[test]
fn counterexample_satisfies_every_axiom() {
    let rep = check_dh(&sys(&unpolarizable_pair()));
    assert!(rep.passed(), "{:?}", rep.failures());
    for item in ["(a)", "(b)", "(c)", "(d)", "(f1)", "(f2)"] {
        assert!(rep.item_passed(item), "{item}");
    }
}

#[test]
fn polarized_orbits_are_systems() {
    for fx in all_fixtures() {
        let rep = check_dh(&sys(&fx));
        assert!(rep.passed(), "{} {:?}", fx.name, rep.failures());
    }
}

#[test]
fn real_hodge_step_breaks_f2() {
    let fx = unpolarizable_pair();
    let f = hodge(4, &[(1, vec![real_vec(4, 0), real_vec(4, 3)]), (0, (0..4).map(|k| real_vec(4, k)).collect())]);
    let s = DeligneHodgeSystem::new(fx.w.clone(), fx.ns.clone(), f).unwrap();
    let rep = check_dh(&s);
    assert!(!rep.item_passed("(f2)"));
    for item in ["(a)", "(b)", "(c)", "(d)", "(f1)"] {
        assert!(rep.item_passed(item), "{item}");
    }
}

#[test]
fn forgetting_horizontality_breaks_f1() {
    // F^1 = <e1, e2>, F^0 = <e1, e2, f1>: N_2 e1 = f2 leaves F^0.
    let fx = unpolarizable_pair();
    let d = 4;
    let f = hodge(
        d,
        &[
            (1, vec![real_vec(d, 0), real_vec(d, 2)]),
            (0, vec![real_vec(d, 0), real_vec(d, 2), real_vec(d, 1)]),
            (-1, (0..d).map(|k| real_vec(d, k)).collect()),
        ],
    );
    let s = DeligneHodgeSystem::new(fx.w.clone(), fx.ns.clone(), f).unwrap();
    assert!(!check_dh(&s).item_passed("(f1)"));
}

/// Linear conditions on a skew form on the unpolarizable pair, derived
/// directly: isometry of `N_1`, `N_2` entrywise, and isotropy of
/// `exp(z_1 N_1 + z_2 N_2) F^1` sampled on a grid of real `z`.
fn counterexample_constraint_rows(fu: &FormUnknowns, ns: &[QMat]) -> Vec<Vec<Rational>> {
    let basis: Vec<QMat> = (0..fu.len()).map(|t| fu.matrix(&unit_vec(fu.len(), t))).collect();
    let mut rows = Vec::new();
    for n in ns {
        for a in 0..4 {
            for b in 0..4 {
                rows.push(basis.iter().map(|e| (&(&n.transpose() * e) + &(e * n)).get(a, b).clone()).collect());
            }
        }
    }
    let f1 = [unit_vec::<Rational>(4, 0), unit_vec(4, 2)];
    for z1 in 0..3 {
        for z2 in 0..3 {
            let nz = &ns[0].scale(&int(z1)) + &ns[1].scale(&int(z2));
            let e = nz.exp_nilpotent().unwrap();
            for u in &f1 {
                for v in &f1 {
                    let (eu, ev) = (e.apply(u), e.apply(v));
                    rows.push(basis.iter().map(|m| dot(&eu, &m.apply(&ev))).collect());
                }
            }
        }
    }
    rows
}

fn rank_of(rows: &[Vec<Rational>]) -> usize {
    Mat::from_rows(rows.to_vec()).unwrap().rank()
}

#[test]
fn counterexample_is_not_polarizable() {
    let fx = unpolarizable_pair();
    let cert = polarization_feasibility(&sys(&fx), 1).unwrap();
    let PolarizationCertificate::Infeasible(ob) = &cert else { panic!("{cert:?}") };
    assert_eq!(ob.forced_text, "Q(e2,f2)");
    assert_eq!(cert.summary(), "INFEASIBLE (forced Q(e2,f2)=0, required >0)");

    let fu = FormUnknowns::new(4, 1);
    let at = fu.index().iter().position(|&p| p == (2, 3)).unwrap();
    assert_eq!(ob.forced, unit_vec(fu.len(), at));

    // the forced functional is a combination of required positive values
    assert!(ob.multipliers.iter().all(|y| *y >= int(0)));
    let mut comb = vec![int(0); fu.len()];
    for ((_, r), y) in ob.required.iter().zip(&ob.multipliers) {
        for (c, x) in comb.iter_mut().zip(r) {
            *c = c.clone() + y.clone() * x.clone();
        }
    }
    assert_eq!(comb, ob.forced);

    // and it vanishes on all forms satisfying the linear conditions alone
    let rows = counterexample_constraint_rows(&fu, &fx.ns);
    let mut with = rows.clone();
    with.push(ob.forced.clone());
    assert_eq!(rank_of(&with), rank_of(&rows));
}

#[test]
fn cone_shift_is_not_polarizable() {
    for a in [int(1), rat(1, 3), int(5)] {
        let cert = polarization_feasibility(&with_cone_shift(a), 1).unwrap();
        assert_eq!(cert.summary(), "INFEASIBLE (forced Q(e2,f2)=0, required >0)");
    }
}

#[test]
fn cone_shift_fails_b_for_every_candidate() {
    let fx = unpolarizable_pair();
    let fu = FormUnknowns::new(4, 1);
    let rows = counterexample_constraint_rows(&fu, &fx.ns);
    let kernel = Mat::from_rows(rows).unwrap().kernel();
    let mut candidates: Vec<QMat> = kernel.iter().map(|t| fu.matrix(t)).collect();
    candidates.push(kernel.iter().fold(Mat::zeros(4, 4), |acc, t| &acc + &fu.matrix(t)));
    candidates.push(form(4, &[(0, 1, int(1)), (2, 3, int(1))], -1));
    candidates.push(form(4, &[(0, 1, int(1)), (2, 3, int(-1))], -1));
    candidates.push(form(4, &[(0, 1, int(2)), (2, 3, int(1)), (0, 3, int(1)), (2, 1, int(1))], -1));
    for a in [int(1), rat(1, 2)] {
        let s = with_cone_shift(a);
        for q in &candidates {
            let d = ImhmData::pure(1, q.clone(), s.f.clone(), s.ns.clone());
            let rep = check_imhm(&d).unwrap();
            assert!(!rep.item_passed("(b)"), "{q:?}");
        }
    }
}

fn block_ratio(q: &QMat, given: &QMat, block: &[usize]) -> Option<Rational> {
    let mut ratio = None;
    for &i in block {
        for j in 0..q.cols() {
            let (x, y) = (q.get(i, j), given.get(i, j));
            if *y == int(0) {
                if *x != int(0) && block.contains(&j) {
                    return None;
                }
                continue;
            }
            let r = x.clone() / y.clone();
            match &ratio {
                None => ratio = Some(r),
                Some(r0) if *r0 != r => return None,
                _ => {}
            }
        }
    }
    ratio
}

#[test]
fn feasible_forms_pass_positivity() {
    for fx in all_fixtures().into_iter().filter(|f| f.q.is_some()) {
        let s = sys(&fx);
        let cert = polarization_feasibility(&s, fx.weight).unwrap();
        let PolarizationCertificate::Feasible { q, .. } = &cert else { panic!("{}: {cert:?}", fx.name) };
        let d = ImhmData::pure(fx.weight, q.clone(), fx.f.clone(), fx.ns.clone());
        let rep = check_imhm(&d).unwrap();
        assert!(rep.passed(), "{} {:?}", fx.name, rep.failures());
    }
}

#[test]
fn vanishing_cycle_form_is_blockwise_proportional() {
    let fx = vanishing_cycle_pair();
    let PolarizationCertificate::Feasible { q, .. } = polarization_feasibility(&sys(&fx), 1).unwrap() else {
        panic!()
    };
    let given = fx.q.clone().unwrap();
    for block in [[0, 1], [2, 3], [4, 5]] {
        let r = block_ratio(&q, &given, &block).expect("proportional block");
        assert!(r > int(0));
    }
    // no cross terms between blocks
    for (i, j) in [(0, 2), (0, 4), (1, 3), (1, 5), (2, 4), (3, 5), (0, 3), (1, 2)] {
        assert!(*q.get(i, j) == int(0));
    }
}

#[test]
fn trivial_orbit_is_polarizable() {
    for (w, dim) in [(2, 1), (1, 2)] {
        let (f, q) = pure_hs(w);
        for ns in [vec![], vec![Mat::zeros(dim, dim)]] {
            let s = DeligneHodgeSystem::new(Filtration::pure(dim, w), ns.clone(), f.clone()).unwrap();
            assert!(check_dh(&s).passed());
            let cert = polarization_feasibility(&s, w).unwrap();
            assert!(cert.is_feasible(), "{cert:?}");
            let rep = check_imhm(&ImhmData::pure(w, q.clone(), f.clone(), ns)).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures());
        }
    }
}

#[test]
fn negative_form_fails_positivity() {
    let (f, q) = pure_hs(1);
    let rep = check_imhm(&ImhmData::pure(1, -&q, f, vec![Mat::zeros(2, 2)])).unwrap();
    assert!(!rep.item_passed("(b)"));
    assert!(rep.item_passed("(1)") && rep.item_passed("(a)") && rep.item_passed("(c)"));
}

#[test]
fn vanishing_cycle_pair_is_an_imhm() {
    let rep = check_imhm(&forms_of(&vanishing_cycle_pair())).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures());
    for item in ["(1)", "(3)", "(a)", "(b)", "(c)"] {
        assert!(rep.item_passed(item), "{item}");
    }
}

#[test]
fn non_split_limit_is_rejected() {
    // W_{-2} = <b>, W_0 = <a, b>, F^0 = <a + i b>
    let w = Filtration::from_steps(
        2,
        &[(-3, Subspace::zero(2)), (-2, Subspace::coordinate(2, &[1])), (0, Subspace::full(2))],
    )
    .unwrap();
    let f = hodge(2, &[(1, vec![]), (0, vec![vec![g(1, 0), g(0, 1)]]), (-1, vec![real_vec(2, 0), real_vec(2, 1)])]);
    let forms = BTreeMap::from([(0, Mat::diag(&[int(1), int(0)])), (-2, Mat::diag(&[int(0), int(1)]))]);
    let d = ImhmData { w, forms, f, ns: vec![] };
    let err = check_imhm(&d).unwrap_err();
    assert!(err.to_string().contains("non-split input"), "{err}");
}

#[test]
fn graded_polarizability() {
    let (ok, certs) = check_graded_polarizable(&sys(&unpolarizable_pair())).unwrap();
    assert!(!ok);
    assert_eq!(certs.len(), 1);
    assert!(!certs[0].1.is_feasible());

    let (ok, _) = check_graded_polarizable(&sys(&two_quadratic_strings())).unwrap();
    assert!(ok);
}

/// Vanishing-cycle pair in weight 1 plus a weight-2 Hodge class.
fn two_step_sum() -> DeligneHodgeSystem {
    let fx = vanishing_cycle_pair();
    let d = 7;
    let pad = |v: &Vec<Gaussian>| {
        let mut w = v.clone();
        w.push(g(0, 0));
        w
    };
    let w = Filtration::from_steps(d, &[(0, Subspace::zero(d)), (1, Subspace::coordinate(d, &(0..6).collect::<Vec<_>>())), (2, Subspace::full(d))])
        .unwrap();
    let ns: Vec<QMat> = fx.ns.iter().map(|n| Mat::block_diag(&[n.clone(), Mat::zeros(1, 1)])).collect();
    let f1: Vec<Vec<Gaussian>> = fx.f.get(1).basis().iter().map(pad).chain([real_vec(d, 6)]).collect();
    let f = hodge(d, &[(2, vec![]), (1, f1), (0, (0..d).map(|k| real_vec(d, k)).collect())]);
    DeligneHodgeSystem::new(w, ns, f).unwrap()
}

#[test]
fn two_step_sum_is_graded_polarizable() {
    let s = two_step_sum();
    assert!(check_dh(&s).passed(), "{:?}", check_dh(&s).failures());
    let (ok, certs) = check_graded_polarizable(&s).unwrap();
    assert!(ok);
    assert_eq!(certs.iter().map(|(k, _)| *k).collect::<Vec<_>>(), vec![1, 2]);
    assert!(polarization_feasibility(&s, 1).is_err());

    let fx = vanishing_cycle_pair();
    let q = Mat::block_diag(&[fx.q.clone().unwrap(), Mat::zeros(1, 1)]);
    let q2 = Mat::block_diag(&[Mat::zeros(6, 6), Mat::diag(&[int(1)])]);
    let d = ImhmData { w: s.w.clone(), forms: BTreeMap::from([(1, q), (2, q2)]), f: s.f.clone(), ns: s.ns.clone() };
    let rep = check_imhm(&d).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures());
}

#[test]
fn graded_piece_of_pure_system_is_itself() {
    let fx = cubic_and_linear_strings();
    let gp = sys(&fx).graded_piece(3);
    assert_eq!(gp.ns, fx.ns);
    assert_eq!(gp.f, fx.f);
}

#[test]
fn counterexample_subobject_has_no_complement() {
    let fx = unpolarizable_pair();
    let h = fx.span(&["e2", "f2"]);
    assert!(h.is_invariant(&fx.ns[0]) && h.is_invariant(&fx.ns[1]));
    assert_eq!(invariant_complement(&sys(&fx), &h).unwrap(), None);
}

#[test]
fn orthogonal_block_has_a_complement() {
    let fx = vanishing_cycle_pair();
    let h = fx.span(&["a1'", "a1"]);
    let k = invariant_complement(&sys(&fx), &h).unwrap().expect("complement");
    assert_eq!(k.dim(), 4);
    assert!(k.intersect(&h).is_zero());
    for n in &fx.ns {
        assert!(k.is_invariant(n));
    }
}

#[test]
fn chromosome_of_single_class() {
    let d = HodgeDiamond::new(2, BTreeMap::from([((1, 1), 1)])).unwrap();
    assert_eq!(chromosome(&d).unwrap(), SignedDiagram::new(vec![Row::new(1, Sign::Plus)]));
}

#[test]
fn chromosome_matches_string_signatures() {
    for fx in all_fixtures().into_iter().filter(|f| f.q.is_some()) {
        let d = fx.dim();
        let total = fx.ns.iter().fold(Mat::zeros(d, d), |a, n| &a + n);
        let diamond = diamond_of(&fx.f, &total, fx.weight).unwrap();
        let q = fx.q.as_ref().unwrap();
        assert_eq!(chromosome(&diamond).unwrap(), signed_diagram_of(&total, q, fx.weight).unwrap(), "{}", fx.name);
    }
}

#[test]
fn chromosome_is_conjugation_invariant() {
    let fx = two_quadratic_strings();
    let q = fx.q.clone().unwrap();
    let total = &fx.ns[0] + &fx.ns[1];
    let before = chromosome(&diamond_of(&fx.f, &total, 2).unwrap()).unwrap();
    for x in [fx.extra("eta1").clone(), &fx.extra("eta2").scale(&int(3)) + fx.extra("eta4")] {
        let g = x.exp_nilpotent().unwrap();
        assert_eq!(&(&g.transpose() * &q) * &g, q);
        let n = total.conjugate_by(&g).unwrap();
        let f = fx.f.image(&g.complexify());
        assert_eq!(chromosome(&diamond_of(&f, &n, 2).unwrap()).unwrap(), before);
        assert_eq!(signed_diagram_of(&n, &q, 2).unwrap(), before);
    }
}

#[test]
fn inconsistent_diamond_is_rejected() {
    assert!(HodgeDiamond::new(2, BTreeMap::from([((2, 0), 1)])).is_err());
    assert!(HodgeDiamond::new(1, BTreeMap::from([((1, 1), 1), ((0, 0), 2)])).is_err());
}

#[test]
fn chromosome_of_paired_pieces() {
    // weight 1, h^{1,0} = h^{0,1} = 1 with N = 0: one pair of blank boxes
    let d = HodgeDiamond::new(1, BTreeMap::from([((1, 0), 1), ((0, 1), 1)])).unwrap();
    assert_eq!(chromosome(&d).unwrap(), SignedDiagram::new(vec![Row::new(1, Sign::Blank); 2]));
    // weight 2, h^{2,0} = h^{0,2} = 1: i^2 Q(u, conj u) > 0 gives minus signs
    let d = HodgeDiamond::new(2, BTreeMap::from([((2, 0), 1), ((0, 2), 1)])).unwrap();
    assert_eq!(chromosome(&d).unwrap(), SignedDiagram::new(vec![Row::new(1, Sign::Minus); 2]));
}

#[test]
fn certificates_serialize() {
    let cert = polarization_feasibility(&sys(&unpolarizable_pair()), 1).unwrap();
    let j = cert.to_json();
    assert_eq!(j["status"], "infeasible");
    assert_eq!(j["forced"], "Q(e2,f2) = 0");
    let cert = polarization_feasibility(&sys(&vanishing_cycle_pair()), 1).unwrap();
    assert_eq!(cert.to_json()["status"], "feasible");
}
