//! Functions from symbols to values, represented as lists of disjoint guards.

use super::guard::{uncovered, Guard};

/// Extends disjoint `entries` to a total partition, mapping uncovered symbols
/// to `default`.
pub(crate) fn complete<T: Copy>(width: usize, entries: &[(Guard, T)], default: T) -> Vec<(Guard, T)> {
    let mut out = entries.to_vec();
    out.extend(uncovered(width, entries.iter().map(|(g, _)| g)).into_iter().map(|g| (g, default)));
    out
}

/// Pairwise-disjointness of a guard list.
pub(crate) fn disjoint<T>(entries: &[(Guard, T)]) -> bool {
    for (i, (a, _)) in entries.iter().enumerate() {
        if entries[i + 1..].iter().any(|(b, _)| a.overlaps(b)) {
            return false;
        }
    }
    true
}

/// Number of symbols covered by pairwise-disjoint guards.
pub(crate) fn covered_count<T>(entries: &[(Guard, T)]) -> u128 {
    entries.iter().map(|(g, _)| g.count()).sum()
}

pub(crate) fn is_total<T>(width: usize, entries: &[(Guard, T)]) -> bool {
    covered_count(entries) == 1u128 << width
}

fn first_cared_bit<T>(entries: &[(Guard, T)], from: usize, width: usize) -> Option<usize> {
    (from..width).find(|&b| entries.iter().any(|(g, _)| g.cares(b)))
}

type Entries<T> = Vec<(Guard, T)>;

fn split<T: Copy>(entries: &[(Guard, T)], bit: usize) -> (Entries<T>, Entries<T>) {
    let low = entries.iter().filter(|(g, _)| g.bit(bit) != Some(true)).copied().collect();
    let high = entries.iter().filter(|(g, _)| g.bit(bit) != Some(false)).copied().collect();
    (low, high)
}

const LEAF: u32 = u32::MAX;

/// Canonical encoding of a total function given as disjoint guards: a
/// reduced ordered decision tree in prefix form. Two partitions denote the
/// same function iff their keys are equal.
pub(crate) fn canonical_key(width: usize, entries: &[(Guard, u32)]) -> Vec<u32> {
    let mut out = Vec::new();
    key_rec(width, entries, 0, &mut out);
    out
}

fn key_rec(width: usize, entries: &[(Guard, u32)], from: usize, out: &mut Vec<u32>) {
    let first = entries[0].1;
    if entries.iter().all(|&(_, v)| v == first) {
        out.extend([LEAF, first]);
        return;
    }
    let bit = first_cared_bit(entries, from, width).expect("total partition with distinct values");
    let (low, high) = split(entries, bit);
    let mut lk = Vec::new();
    key_rec(width, &low, bit + 1, &mut lk);
    let mut hk = Vec::new();
    key_rec(width, &high, bit + 1, &mut hk);
    if lk == hk {
        out.extend(lk);
    } else {
        out.push(bit as u32);
        out.extend(lk);
        out.extend(hk);
    }
}

/// Rewrites a disjoint partition into a compact, deterministic form: split
/// along a decision tree, then greedily merge cubes that differ in a single
/// fixed position and share a value. The result is sorted by guard.
pub(crate) fn compact<T: Copy + Ord>(width: usize, entries: &[(Guard, T)]) -> Vec<(Guard, T)> {
    if entries.is_empty() {
        return Vec::new();
    }
    let mut paths = Vec::new();
    paths_rec(width, entries, 0, Guard::full(width), &mut paths);
    merge_adjacent(&mut paths);
    paths.sort();
    paths
}

fn paths_rec<T: Copy + Ord>(
    width: usize,
    entries: &[(Guard, T)],
    from: usize,
    acc: Guard,
    out: &mut Vec<(Guard, T)>,
) {
    if entries.is_empty() {
        return;
    }
    // A single cube restricted to `acc` is `acc ∩ cube`.
    if entries.len() == 1 {
        if let Some(g) = acc.intersect(&entries[0].0) {
            out.push((g, entries[0].1));
        }
        return;
    }
    let first = entries[0].1;
    let same = entries.iter().all(|&(_, v)| v == first);
    let total = {
        let restricted: u128 = entries
            .iter()
            .filter_map(|(g, _)| acc.intersect(g))
            .map(|g| g.count())
            .sum();
        restricted == acc.count()
    };
    if same && total {
        out.push((acc, first));
        return;
    }
    let Some(bit) = first_cared_bit(entries, from, width) else {
        // No remaining position distinguishes the cubes, so they all coincide
        // with `acc` on this subspace; disjointness leaves at most one.
        out.push((acc, first));
        return;
    };
    let (low, high) = split(entries, bit);
    paths_rec(width, &low, bit + 1, acc.with(bit, false), out);
    paths_rec(width, &high, bit + 1, acc.with(bit, true), out);
}

fn merge_adjacent<T: Copy + Ord>(cubes: &mut Vec<(Guard, T)>) {
    loop {
        let mut merged = false;
        'outer: for i in 0..cubes.len() {
            for j in i + 1..cubes.len() {
                let (a, va) = cubes[i];
                let (b, vb) = cubes[j];
                if va != vb || a.care_mask() != b.care_mask() {
                    continue;
                }
                let diff = a.value_mask() ^ b.value_mask();
                if diff.count_ones() == 1 {
                    let pos = diff.trailing_zeros() as usize;
                    let mut g = Guard::full(a.width());
                    for p in 0..a.width() {
                        if p != pos {
                            if let Some(bit) = a.bit(p) {
                                g = g.with(p, bit);
                            }
                        }
                    }
                    cubes[i] = (g, va);
                    cubes.swap_remove(j);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::guard::BitString;

    fn g(s: &str) -> Guard {
        Guard::parse(s).unwrap()
    }

    fn eval<T: Copy>(entries: &[(Guard, T)], s: BitString) -> Option<T> {
        entries.iter().find(|(g, _)| g.matches(s)).map(|&(_, v)| v)
    }

    #[test]
    fn keys_identify_equal_functions() {
        let a = vec![(g("0*"), 1), (g("1*"), 1)];
        let b = vec![(g("**"), 1)];
        assert_eq!(canonical_key(2, &a), canonical_key(2, &b));
        let c = vec![(g("*0"), 1), (g("01"), 2), (g("11"), 2)];
        let d = vec![(g("*1"), 2), (g("*0"), 1)];
        assert_eq!(canonical_key(2, &c), canonical_key(2, &d));
        let e = vec![(g("*1"), 1), (g("*0"), 2)];
        assert_ne!(canonical_key(2, &c), canonical_key(2, &e));
    }

    #[test]
    fn compact_preserves_function_and_merges() {
        let entries = vec![(g("000"), 'a'), (g("100"), 'a'), (g("010"), 'b'), (g("110"), 'b'), (g("**1"), 'c')];
        let out = compact(3, &entries);
        assert!(disjoint(&out));
        for raw in 0..8 {
            let s = BitString::new(raw, 3);
            assert_eq!(eval(&entries, s), eval(&out, s));
        }
        assert_eq!(out.len(), 3);
        assert!(out.contains(&(g("*00"), 'a')));
    }

    #[test]
    fn complete_fills_gaps() {
        let out = complete(2, &[(g("01"), 7)], 0);
        assert!(is_total(2, &out));
        assert!(disjoint(&out));
        assert_eq!(eval(&out, BitString::parse("01").unwrap()), Some(7));
        assert_eq!(eval(&out, BitString::parse("11").unwrap()), Some(0));
    }
}
