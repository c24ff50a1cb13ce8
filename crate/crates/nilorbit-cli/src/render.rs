//! Text rendering of vectors and operators in a named basis.

use nilorbit::exact::Field;
use nilorbit::{QMat, Rational};
use num::{One, Signed, Zero};

/// `2 a1 - 1/2 b0`; `0` for the zero vector.
pub fn vector(v: &[Rational], names: &[String]) -> String {
    let mut s = String::new();
    for (c, n) in v.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let coef = if mag.is_one() { String::new() } else { format!("{} ", mag.to_exact()) };
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        s.push_str(&coef);
        s.push_str(n);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// `a2 -> 2 a1, a1 -> a0`, listing non-zero images only.
pub fn operator(m: &QMat, names: &[String]) -> String {
    let parts: Vec<String> = (0..m.cols())
        .filter_map(|j| {
            let col: Vec<Rational> = (0..m.rows()).map(|i| m.get(i, j).clone()).collect();
            col.iter().any(|c| !c.is_zero()).then(|| format!("{} -> {}", names[j], vector(&col, names)))
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(", ")
    }
}
