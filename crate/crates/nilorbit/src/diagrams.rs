//! Partitions, signed Young diagrams, admissibility, the Đoković order and
//! Hasse diagrams.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// A partition, parts in non-increasing order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn multiplicity(&self, part: u32) -> usize {
        self.0.iter().filter(|&&p| p == part).count()
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=max.min(n)).rev() {
                cur.push(p);
                go(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Dominance order.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0u32, 0u32);
        for k in 0..self.0.len().max(other.0.len()) {
            a += self.0.get(k).copied().unwrap_or(0);
            b += other.0.get(k).copied().unwrap_or(0);
            if a > b {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    /// Exponential notation, e.g. `[4,1^2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut groups: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match groups.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => groups.push((p, 1)),
            }
        }
        let body: Vec<String> = groups
            .iter()
            .map(|&(p, m)| if m == 1 { p.to_string() } else { format!("{p}^{m}") })
            .collect();
        write!(f, "[{}]", body.join(","))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
    Blank,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Blank => Sign::Blank,
        }
    }
}

/// One row: its length and the label of its first box.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Row {
    pub len: u32,
    pub sign: Sign,
}

impl Row {
    pub fn new(len: u32, sign: Sign) -> Self {
        Row { len, sign }
    }

    /// Twice the (plus, minus) box counts.
    fn doubled_counts(&self) -> (u64, u64) {
        let l = self.len as u64;
        match self.sign {
            Sign::Blank => (l, l),
            Sign::Plus => (2 * l.div_ceil(2), 2 * (l / 2)),
            Sign::Minus => (2 * (l / 2), 2 * l.div_ceil(2)),
        }
    }
}

/// A signed Young diagram: rows alternate signs starting from the label of
/// their first box; blank rows contribute equally to both signs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct SignedDiagram {
    rows: Vec<Row>,
}

impl SignedDiagram {
    pub fn new(mut rows: Vec<Row>) -> Self {
        rows.retain(|r| r.len > 0);
        rows.sort_by(|a, b| b.len.cmp(&a.len).then(a.sign.cmp(&b.sign)));
        SignedDiagram { rows }
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn size(&self) -> u32 {
        self.rows.iter().map(|r| r.len).sum()
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.rows.iter().map(|r| r.len).collect())
    }

    fn doubled_signature(&self) -> (u64, u64) {
        self.rows.iter().fold((0, 0), |(p, n), r| {
            let (a, b) = r.doubled_counts();
            (p + a, n + b)
        })
    }

    /// `(s+, s-)` with `s± = b± + b0`, where `2 b0` is the number of blank boxes.
    pub fn signature(&self) -> Result<(u64, u64), Error> {
        let (p, n) = self.doubled_signature();
        if p % 2 != 0 || n % 2 != 0 {
            return Err(Error::Precondition(format!(
                "diagram `{self}` has an odd number of blank boxes"
            )));
        }
        Ok((p / 2, n / 2))
    }

    /// Remove the last box of every row.
    pub fn reduce(&self) -> SignedDiagram {
        SignedDiagram::new(self.rows.iter().map(|r| Row::new(r.len - 1, r.sign)).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl fmt::Display for SignedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .rows
            .iter()
            .map(|r| match r.sign {
                Sign::Plus => format!("{}+", r.len),
                Sign::Minus => format!("{}-", r.len),
                Sign::Blank => r.len.to_string(),
            })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

impl FromStr for SignedDiagram {
    type Err = Error;

    /// Parses `"3+ 2 2 1-"`; `"0"` or the empty string is the empty diagram.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut rows = Vec::new();
        for tok in s.split_whitespace() {
            let (num, sign) = match tok.strip_suffix('+') {
                Some(n) => (n, Sign::Plus),
                None => match tok.strip_suffix('-') {
                    Some(n) => (n, Sign::Minus),
                    None => (tok, Sign::Blank),
                },
            };
            let len: u32 = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad diagram row `{tok}`")))?;
            rows.push(Row::new(len, sign));
        }
        Ok(SignedDiagram::new(rows))
    }
}

/// The four classical families handled here.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GroupKind {
    /// `Sp(2m, C)`, given by `2m`.
    SpComplex { n: u32 },
    /// `O(n, C)`.
    OComplex { n: u32 },
    /// `Sp(2m, R)`, given by `2m`.
    SpReal { n: u32 },
    /// `O(a, b)`.
    OReal { a: u32, b: u32 },
}

impl GroupKind {
    pub fn dim(&self) -> u32 {
        match *self {
            GroupKind::SpComplex { n }
            | GroupKind::OComplex { n }
            | GroupKind::SpReal { n } => n,
            GroupKind::OReal { a, b } => a + b,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        match *self {
            GroupKind::SpComplex { n } | GroupKind::SpReal { n } if n % 2 != 0 => {
                Err(Error::Precondition(format!("symplectic group needs even dimension, got {n}")))
            }
            _ => Ok(()),
        }
    }

    /// Row-length parity whose rows carry signs in the real case (symplectic:
    /// even rows; orthogonal: odd rows).
    fn signed_parity(&self) -> u32 {
        match self {
            GroupKind::SpComplex { .. } | GroupKind::SpReal { .. } => 0,
            GroupKind::OComplex { .. } | GroupKind::OReal { .. } => 1,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, GroupKind::SpReal { .. } | GroupKind::OReal { .. })
    }
}

/// Whether a partition labels a nilpotent orbit of the complex group.
pub fn admissible_partition(kind: GroupKind, p: &Partition) -> bool {
    if p.size() != kind.dim() {
        return false;
    }
    let restricted = 1 - kind.signed_parity();
    p.parts()
        .iter()
        .filter(|&&x| x % 2 == restricted)
        .all(|&x| p.multiplicity(x) % 2 == 0)
}

/// All parts even (orthogonal case): the orbit splits in two.
pub fn is_very_even(p: &Partition) -> bool {
    !p.parts().is_empty() && p.parts().iter().all(|x| x % 2 == 0)
}

/// Whether a signed diagram labels a nilpotent orbit of the real group.
pub fn admissible_diagram(kind: GroupKind, d: &SignedDiagram) -> bool {
    if !kind.is_real() || d.size() != kind.dim() {
        return false;
    }
    let sp = kind.signed_parity();
    for r in d.rows() {
        let signed = r.len % 2 == sp;
        if signed == (r.sign == Sign::Blank) {
            return false;
        }
    }
    let blank_even = d
        .partition()
        .parts()
        .iter()
        .filter(|&&x| x % 2 != sp)
        .all(|&x| d.rows().iter().filter(|r| r.len == x).count() % 2 == 0);
    if !blank_even {
        return false;
    }
    let target = match kind {
        GroupKind::SpReal { n } => (n as u64 / 2, n as u64 / 2),
        GroupKind::OReal { a, b } => (a as u64, b as u64),
        _ => unreachable!(),
    };
    d.signature().map(|s| s == target).unwrap_or(false)
}

/// A complex orbit label.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComplexOrbit {
    pub partition: Partition,
    /// Orthogonal very-even partitions label two orbits.
    pub very_even: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum OrbitLabel {
    Complex(ComplexOrbit),
    Real(SignedDiagram),
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Complex(c) if c.very_even => write!(f, "{} (very even)", c.partition),
            OrbitLabel::Complex(c) => write!(f, "{}", c.partition),
            OrbitLabel::Real(d) => write!(f, "{d}"),
        }
    }
}

/// Nilpotent orbits of a classical group, in a fixed deterministic order.
pub fn enumerate(kind: GroupKind) -> Result<Vec<OrbitLabel>, Error> {
    kind.validate()?;
    let parts: Vec<Partition> = Partition::all(kind.dim())
        .into_iter()
        .filter(|p| admissible_partition(kind, p))
        .collect();
    if !kind.is_real() {
        let ortho = matches!(kind, GroupKind::OComplex { .. });
        return Ok(parts
            .into_iter()
            .map(|p| {
                let very_even = ortho && is_very_even(&p);
                OrbitLabel::Complex(ComplexOrbit { partition: p, very_even })
            })
            .collect());
    }
    let mut out = BTreeSet::new();
    for p in parts {
        for d in sign_assignments(kind, &p) {
            if admissible_diagram(kind, &d) {
                out.insert(d);
            }
        }
    }
    // reverse so that longer rows come first
    Ok(out.into_iter().rev().map(OrbitLabel::Real).collect())
}

/// Every way of labelling the signed rows of `p` (rows of equal length are
/// interchangeable, so only the number of `+` rows per length matters).
fn sign_assignments(kind: GroupKind, p: &Partition) -> Vec<SignedDiagram> {
    let sp = kind.signed_parity();
    let mut lengths: Vec<u32> = p.parts().to_vec();
    lengths.dedup();
    let mut acc: Vec<Vec<Row>> = vec![Vec::new()];
    for len in lengths {
        let m = p.multiplicity(len);
        let mut next = Vec::new();
        for rows in &acc {
            if len % 2 == sp {
                for plus in 0..=m {
                    let mut r = rows.clone();
                    r.extend(std::iter::repeat(Row::new(len, Sign::Plus)).take(plus));
                    r.extend(std::iter::repeat(Row::new(len, Sign::Minus)).take(m - plus));
                    next.push(r);
                }
            } else {
                let mut r = rows.clone();
                r.extend(std::iter::repeat(Row::new(len, Sign::Blank)).take(m));
                next.push(r);
            }
        }
        acc = next;
    }
    acc.into_iter().map(SignedDiagram::new).collect()
}

/// Đoković order: `a <= b` iff for every `k`, the signature of the `k`-fold
/// reduction of `a` is componentwise at most that of `b`.
pub fn dokovic_leq(a: &SignedDiagram, b: &SignedDiagram) -> bool {
    let (mut x, mut y) = (a.clone(), b.clone());
    loop {
        let (sa, sb) = (x.doubled_signature(), y.doubled_signature());
        if sa.0 > sb.0 || sa.1 > sb.1 {
            return false;
        }
        if x.is_empty() && y.is_empty() {
            return true;
        }
        x = x.reduce();
        y = y.reduce();
    }
}

/// Covering relations `(i, j)` (`i < j`, nothing strictly between) of a
/// partial order given by `leq`. Equal elements are treated as one.
pub fn hasse<E>(elems: &[E], leq: impl Fn(&E, &E) -> bool) -> Vec<(usize, usize)> {
    let n = elems.len();
    let lt: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && leq(&elems[i], &elems[j]) && !leq(&elems[j], &elems[i])).collect())
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lt[i][j] && !(0..n).any(|k| lt[i][k] && lt[k][j]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Deterministic DOT rendering of a Hasse diagram (edges point upward).
pub fn to_dot(name: &str, labels: &[String], edges: &[(usize, usize)]) -> String {
    let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
    let mut s = format!("digraph \"{}\" {{\n  rankdir=BT;\n", esc(name));
    for (i, l) in labels.iter().enumerate() {
        s.push_str(&format!("  n{i} [label=\"{}\"];\n", esc(l)));
    }
    let mut e = edges.to_vec();
    e.sort_unstable();
    for (i, j) in e {
        s.push_str(&format!("  n{i} -> n{j};\n"));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> SignedDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn signatures() {
        assert_eq!(d("3+").signature().unwrap(), (2, 1));
        assert_eq!(d("2+ 2+ 1 1").signature().unwrap(), (3, 3));
        assert!(d("1").signature().is_err());
    }

    #[test]
    fn text_round_trip() {
        let x = d("1- 2 3+ 2");
        assert_eq!(x.to_string(), "3+ 2 2 1-");
        assert_eq!(d(&x.to_string()), x);
    }

    #[test]
    fn reduction_drops_last_boxes() {
        assert_eq!(d("3+ 2 2 1-").reduce(), d("2+ 1 1"));
    }

    #[test]
    fn complex_counts() {
        let sp6: Vec<String> = enumerate(GroupKind::SpComplex { n: 6 })
            .unwrap()
            .iter()
            .map(|o| o.to_string())
            .collect();
        assert_eq!(
            sp6,
            ["[6]", "[4,2]", "[4,1^2]", "[3^2]", "[2^3]", "[2^2,1^2]", "[2,1^4]", "[1^6]"]
        );
        let o7: Vec<String> = enumerate(GroupKind::OComplex { n: 7 })
            .unwrap()
            .iter()
            .map(|o| o.to_string())
            .collect();
        assert_eq!(o7, ["[7]", "[5,1^2]", "[3^2,1]", "[3,2^2]", "[3,1^4]", "[2^2,1^3]", "[1^7]"]);
    }

    #[test]
    fn very_even_flag() {
        let o4 = enumerate(GroupKind::OComplex { n: 4 }).unwrap();
        let flagged: Vec<String> = o4
            .iter()
            .filter(|o| matches!(o, OrbitLabel::Complex(c) if c.very_even))
            .map(|o| o.to_string())
            .collect();
        assert_eq!(flagged, ["[2^2] (very even)"]);
    }

    #[test]
    fn odd_symplectic_is_rejected() {
        assert!(enumerate(GroupKind::SpReal { n: 5 }).is_err());
    }

    #[test]
    fn order_is_reflexive_on_samples() {
        for s in ["3+ 2 2 1-", "6+", "1 1"] {
            assert!(dokovic_leq(&d(s), &d(s)));
        }
        assert!(dokovic_leq(&d("1 1"), &d("2+")));
        assert!(!dokovic_leq(&d("2+"), &d("1 1")));
    }

    #[test]
    fn dot_is_deterministic() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let x = to_dot("g", &labels, &[(0, 1)]);
        assert_eq!(x, to_dot("g", &labels, &[(0, 1)]));
        assert!(x.contains("n0 -> n1;"));
    }
}
