use std::collections::BTreeSet;

mod common;
use common::*;

use nilorbit::diagrams::*;
use nilorbit::hodge::{chromosome, split_diamonds};
use proptest::prelude::*;

fn d(s: &str) -> SignedDiagram {
    s.parse().unwrap()
}

fn real_labels(kind: GroupKind) -> Vec<SignedDiagram> {
    enumerate(kind)
        .unwrap()
        .into_iter()
        .map(|o| match o {
            OrbitLabel::Real(x) => x,
            other => panic!("{other:?}"),
        })
        .collect()
}

#[test]
fn diagram_signatures() {
    assert_eq!(d("3+").signature().unwrap(), (2, 1));
    assert_eq!(d("2+ 2+ 1 1").signature().unwrap(), (3, 3));
    assert!(d("1").signature().is_err());
}

#[test]
fn reductions() {
    assert_eq!(d("3+").reduce(), d("2+"));
    assert_eq!(d("2+ 2-").reduce(), d("1+ 1-"));
    assert_eq!(d("").reduce(), d(""));
}

#[test]
fn complex_sp6_and_o7() {
    let sp6: Vec<String> =
        enumerate(GroupKind::SpComplex { n: 6 }).unwrap().iter().map(|o| o.to_string()).collect();
    assert_eq!(sp6, ["[6]", "[4,2]", "[4,1^2]", "[3^2]", "[2^3]", "[2^2,1^2]", "[2,1^4]", "[1^6]"]);
    let o7: Vec<String> = enumerate(GroupKind::OComplex { n: 7 }).unwrap().iter().map(|o| o.to_string()).collect();
    assert_eq!(o7, ["[7]", "[5,1^2]", "[3^2,1]", "[3,2^2]", "[3,1^4]", "[2^2,1^3]", "[1^7]"]);
}

#[test]
fn complex_enumeration_matches_parity_filter() {
    for n in 1..=10u32 {
        for (ortho, kind) in [(false, GroupKind::SpComplex { n }), (true, GroupKind::OComplex { n })] {
            if !ortho && n % 2 == 1 {
                continue;
            }
            let got: Vec<Partition> = enumerate(kind)
                .unwrap()
                .into_iter()
                .map(|o| match o {
                    OrbitLabel::Complex(c) => c.partition,
                    other => panic!("{other:?}"),
                })
                .collect();
            // symplectic: odd parts with even multiplicity; orthogonal: even parts
            let bad = if ortho { 0 } else { 1 };
            let want: Vec<Partition> = Partition::all(n)
                .into_iter()
                .filter(|p| p.parts().iter().filter(|&&x| x % 2 == bad).all(|&x| p.multiplicity(x) % 2 == 0))
                .collect();
            assert_eq!(got, want, "n = {n}");
        }
    }
}

#[test]
fn real_symplectic_four_matches_brute_force() {
    let got = real_labels(GroupKind::SpReal { n: 4 });
    let want = brute_force_real(GroupKind::SpReal { n: 4 });
    assert_eq!(got.iter().cloned().collect::<BTreeSet<_>>(), want);
    assert_eq!(got.len(), want.len());
    assert_eq!(got.len(), 8);
}

#[test]
fn real_enumeration_matches_brute_force() {
    let mut kinds: Vec<GroupKind> = (1..=4).map(|m| GroupKind::SpReal { n: 2 * m }).collect();
    for a in 0..=5u32 {
        for b in 0..=5u32 {
            if (1..=6).contains(&(a + b)) {
                kinds.push(GroupKind::OReal { a, b });
            }
        }
    }
    for kind in kinds {
        let got = real_labels(kind);
        let set: BTreeSet<_> = got.iter().cloned().collect();
        assert_eq!(set.len(), got.len(), "{kind:?} has duplicates");
        assert_eq!(set, brute_force_real(kind), "{kind:?}");
    }
}

#[test]
fn admissible_signatures_are_fixed() {
    for m in 1..=4u32 {
        for x in real_labels(GroupKind::SpReal { n: 2 * m }) {
            assert_eq!(x.signature().unwrap(), (m as u64, m as u64));
        }
    }
    for x in real_labels(GroupKind::OReal { a: 3, b: 4 }) {
        assert_eq!(x.signature().unwrap(), (3, 4));
    }
}

fn assert_partial_order(xs: &[SignedDiagram]) {
    for a in xs {
        assert!(dokovic_leq(a, a));
        for b in xs {
            if a != b && dokovic_leq(a, b) {
                assert!(!dokovic_leq(b, a), "{a} and {b}");
            }
            for c in xs {
                if dokovic_leq(a, b) && dokovic_leq(b, c) {
                    assert!(dokovic_leq(a, c), "{a} <= {b} <= {c}");
                }
            }
        }
    }
}

#[test]
fn order_is_partial_on_every_enumeration() {
    let mut kinds: Vec<GroupKind> = (1..=4).map(|m| GroupKind::SpReal { n: 2 * m }).collect();
    for a in 0..=8u32 {
        for b in 0..=(8 - a) {
            if a + b > 0 {
                kinds.push(GroupKind::OReal { a, b });
            }
        }
    }
    for kind in kinds {
        assert_partial_order(&real_labels(kind));
    }
}

/// Nontrivial diamonds of a period domain and their chromosomes.
fn classes(weight: i64, hodge: &[usize]) -> Vec<SignedDiagram> {
    split_diamonds(weight, hodge)
        .unwrap()
        .iter()
        .map(|x| chromosome(x).unwrap())
        .filter(|c| c.rows().iter().any(|r| r.len > 1))
        .collect()
}

fn strict(a: &SignedDiagram, b: &SignedDiagram) -> bool {
    a != b && dokovic_leq(a, b)
}

#[test]
fn weight_two_five_types() {
    // h = (2, 5, 2)
    let cl = classes(2, &[2, 5, 2]);
    let (i, ii, iii, iv, v) = (d("2 2 1+ 1+ 1+ 1- 1-"), d("3- 1+ 1+ 1+ 1+ 1- 1-"), d("2 2 2 2 1+"), d("3- 2 2 1+ 1+"), d("3- 3- 1+ 1+ 1+"));
    let set: BTreeSet<_> = cl.iter().cloned().collect();
    assert_eq!(set, BTreeSet::from([i.clone(), ii.clone(), iii.clone(), iv.clone(), v.clone()]));
    assert!(strict(&i, &ii) && strict(&i, &iii));
    assert!(!dokovic_leq(&ii, &iii) && !dokovic_leq(&iii, &ii));
    assert!(strict(&ii, &iv) && strict(&iii, &iv) && strict(&iv, &v));
    let labels = [i, ii, iii, iv, v];
    let mut edges = hasse(&labels, dokovic_leq);
    edges.sort();
    assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]);
}

#[test]
fn orthogonal_three_six_chain() {
    // h = (3, 3, 3): five nontrivial classes in a total order
    let cl = classes(2, &[3, 3, 3]);
    assert_eq!(cl.len(), 5);
    let mut sorted = cl.clone();
    sorted.sort_by(|a, b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if dokovic_leq(a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    for w in sorted.windows(2) {
        assert!(strict(&w[0], &w[1]), "{} < {}", w[0], w[1]);
    }
    let chain: Vec<String> = sorted.iter().map(|x| x.to_string()).collect();
    assert_eq!(chain, ["2 2 1+ 1- 1- 1- 1-", "3- 1+ 1+ 1- 1- 1- 1-", "3- 2 2 1- 1-", "3- 3- 1+ 1- 1-", "3- 3- 3-"]);
    for x in &cl {
        assert!(admissible_diagram(GroupKind::OReal { a: 3, b: 6 }, x));
    }
}

#[test]
fn symplectic_six_relations() {
    // h = (1, 1, 1, 1, 1, 1): seven nontrivial classes
    let cl: BTreeSet<_> = classes(5, &[1; 6]).into_iter().collect();
    let named = [
        ("A", "2+ 1 1 1 1"),
        ("B", "2- 2- 1 1"),
        ("C", "2+ 2+ 1 1"),
        ("D", "2+ 2+ 2+"),
        ("E", "3 3"),
        ("F", "4- 1 1"),
        ("G", "6+"),
    ];
    let labels: Vec<SignedDiagram> = named.iter().map(|(_, s)| d(s)).collect();
    assert_eq!(cl, labels.iter().cloned().collect());
    let mut edges: Vec<(String, String)> = hasse(&labels, dokovic_leq)
        .into_iter()
        .map(|(a, b)| (named[a].0.to_string(), named[b].0.to_string()))
        .collect();
    edges.sort();
    let want: Vec<(String, String)> =
        [("A", "C"), ("A", "F"), ("B", "E"), ("B", "F"), ("C", "D"), ("C", "E"), ("D", "G"), ("E", "G"), ("F", "G")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
    assert_eq!(edges, want);
    for x in &labels {
        assert!(admissible_diagram(GroupKind::SpReal { n: 6 }, x));
    }
}

#[test]
fn single_diagram_has_no_edges() {
    assert!(hasse(&[d("2+ 2-")], dokovic_leq).is_empty());
}

#[test]
fn dot_output_is_sorted_and_stable() {
    let xs = real_labels(GroupKind::SpReal { n: 4 });
    let labels: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    let edges = hasse(&xs, dokovic_leq);
    let mut rev = edges.clone();
    rev.reverse();
    assert_eq!(to_dot("sp4", &labels, &edges), to_dot("sp4", &labels, &rev));
    assert!(to_dot("sp4", &labels, &edges).starts_with("digraph \"sp4\""));
}

fn arb_diagram() -> impl Strategy<Value = SignedDiagram> {
    prop::collection::vec((1u32..6, 0u8..3), 0..6).prop_map(|rows| {
        SignedDiagram::new(
            rows.into_iter()
                .map(|(l, s)| Row::new(l, [Sign::Plus, Sign::Minus, Sign::Blank][s as usize]))
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn longest_row_reductions_empty(x in arb_diagram()) {
        let longest = x.rows().iter().map(|r| r.len).max().unwrap_or(0);
        let mut y = x.clone();
        for _ in 0..longest {
            y = y.reduce();
        }
        prop_assert!(y.is_empty());
    }

    #[test]
    fn text_round_trips(x in arb_diagram()) {
        prop_assert_eq!(x.to_string().parse::<SignedDiagram>().unwrap(), x);
    }
}
