//! Naive reference implementations. They work on plain term lists and
//! position subsets and share no code with the engine beyond table lookups.

#![allow(dead_code)]

use sgzs_core::Semigroup;

pub fn add(s: &Semigroup, a: usize, b: usize) -> usize {
    s.table()[a * s.order() + b]
}

pub fn identity(s: &Semigroup) -> Option<usize> {
    (0..s.order()).find(|&e| (0..s.order()).all(|a| add(s, e, a) == a))
}

/// Sum of the terms at the positions selected by `mask`, `None` for the empty
/// selection without an identity.
pub fn subset_sum(s: &Semigroup, terms: &[usize], mask: u64) -> Option<usize> {
    let mut acc: Option<usize> = None;
    for (i, &t) in terms.iter().enumerate() {
        if mask >> i & 1 == 1 {
            acc = Some(match acc {
                None => t,
                Some(x) => add(s, x, t),
            });
        }
    }
    acc.or_else(|| identity(s))
}

pub fn full_mask(len: usize) -> u64 {
    (1u64 << len) - 1
}

pub fn reducible(s: &Semigroup, terms: &[usize]) -> bool {
    let full = subset_sum(s, terms, full_mask(terms.len()));
    (0..full_mask(terms.len())).any(|mask| subset_sum(s, terms, mask) == full)
}

/// Shortest equal-sum selection (the small Davenport quantity of `terms`).
pub fn shortest_equal_sum(s: &Semigroup, terms: &[usize]) -> usize {
    let full = subset_sum(s, terms, full_mask(terms.len()));
    (0..=full_mask(terms.len()))
        .filter(|&mask| subset_sum(s, terms, mask) == full)
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

pub fn balanced(s: &Semigroup, terms: &[usize], gap: usize) -> bool {
    if gap > terms.len() {
        return false;
    }
    let keep = terms.len() - gap;
    let full = subset_sum(s, terms, full_mask(terms.len()));
    (0..=full_mask(terms.len()))
        .filter(|mask| mask.count_ones() as usize == keep)
        .any(|mask| subset_sum(s, terms, mask) == full)
}

/// All non-decreasing term lists of length `len` over `0..n`.
pub fn multisets(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, len: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for a in from..n {
            cur.push(a);
            go(n, len, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, len, 0, &mut Vec::new(), &mut out);
    out
}

/// Least `ℓ` with every length-`ℓ` term list reducible.
pub fn davenport(s: &Semigroup) -> usize {
    (1..)
        .find(|&len| multisets(s.order(), len).iter().all(|t| reducible(s, t)))
        .unwrap()
}

pub fn period(s: &Semigroup, a: usize) -> usize {
    let mut seen = vec![a];
    loop {
        let next = add(s, *seen.last().unwrap(), a);
        if let Some(pos) = seen.iter().position(|&x| x == next) {
            return seen.len() - pos;
        }
        seen.push(next);
    }
}

pub fn exponent(s: &Semigroup) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (0..s.order())
        .map(|a| period(s, a))
        .fold(1, |acc, p| acc / gcd(acc, p) * p)
}

pub fn kappa(s: &Semigroup) -> usize {
    let e = exponent(s);
    s.order().div_ceil(e) * e
}

/// `E(S)` straight from its definition: the least `ℓ ≥ 1` with every
/// length-`ℓ` term list balanced for gap `κ`. `None` past `cap`.
pub fn egz(s: &Semigroup, cap: usize) -> Option<usize> {
    let k = kappa(s);
    (1..=cap).find(|&len| multisets(s.order(), len).iter().all(|t| balanced(s, t, k)))
}
