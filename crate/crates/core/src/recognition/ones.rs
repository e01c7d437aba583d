//! Consecutive-ones and circular-ones orderings for small 0/1 matrices.
//!
//! Rows are sets of column indices in `0..n`. The consecutive-ones search
//! splits the rows into components of the overlap graph (two rows overlap when
//! they intersect and neither contains the other). Within one component the
//! admissible orderings are fixed up to reversal and permutation inside
//! blocks, so the component can be built by ordered partition refinement,
//! adding rows in breadth-first overlap order. Components whose union lies in
//! a block of a larger component are then placed recursively inside that block.
//!
//! Circular ones reduce to consecutive ones by complementing every row that
//! contains column 0 (Tucker).

use fixedbitset::FixedBitSet;

fn overlaps(a: &FixedBitSet, b: &FixedBitSet) -> bool {
    !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a)
}

/// An ordering of `0..n` in which every row is contiguous, if one exists.
pub fn consecutive_ones(n: usize, rows: &[FixedBitSet]) -> Option<Vec<usize>> {
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    let rows = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.grow(n);
            r
        })
        .collect();
    arrange(&all, rows)
}

/// A cyclic ordering of `0..n` in which every row is a contiguous arc, if one exists.
pub fn circular_ones(n: usize, rows: &[FixedBitSet]) -> Option<Vec<usize>> {
    if n <= 3 {
        return Some((0..n).collect());
    }
    let flipped: Vec<FixedBitSet> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.grow(n);
            if r.contains(0) {
                r.toggle_range(..);
            }
            r
        })
        .collect();
    consecutive_ones(n, &flipped)
}

fn arrange(elems: &FixedBitSet, rows: Vec<FixedBitSet>) -> Option<Vec<usize>> {
    let size = elems.count_ones(..);
    let mut rows: Vec<FixedBitSet> = rows
        .into_iter()
        .filter(|r| {
            let c = r.count_ones(..);
            c >= 2 && c < size
        })
        .collect();
    rows.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    rows.dedup();
    if rows.is_empty() {
        return Some(elems.ones().collect());
    }

    // overlap components, each listed in breadth-first order
    let mut comp_of = vec![usize::MAX; rows.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for seed in 0..rows.len() {
        if comp_of[seed] != usize::MAX {
            continue;
        }
        let id = comps.len();
        comp_of[seed] = id;
        let mut members = vec![seed];
        let mut head = 0;
        while head < members.len() {
            let cur = members[head];
            head += 1;
            for other in 0..rows.len() {
                if comp_of[other] == usize::MAX && overlaps(&rows[cur], &rows[other]) {
                    comp_of[other] = id;
                    members.push(other);
                }
            }
        }
        comps.push(members);
    }

    let unions: Vec<FixedBitSet> = comps
        .iter()
        .map(|c| {
            let mut u = FixedBitSet::with_capacity(elems.len());
            for &i in c {
                u.union_with(&rows[i]);
            }
            u
        })
        .collect();

    let is_top = |c: usize| {
        (0..comps.len()).all(|d| {
            if d == c || !unions[c].is_subset(&unions[d]) {
                return true;
            }
            // equal unions: a lone row equal to another component's union is redundant
            unions[c] == unions[d] && !(comps[c].len() == 1 && comps[d].len() > 1)
        })
    };
    let mut tops: Vec<usize> = (0..comps.len()).filter(|&c| is_top(c)).collect();
    tops.sort_by_key(|&c| unions[c].minimum());

    let mut placed = FixedBitSet::with_capacity(elems.len());
    let mut out = Vec::with_capacity(size);
    for c in tops {
        let members: Vec<&FixedBitSet> = comps[c].iter().map(|&i| &rows[i]).collect();
        for block in refine_component(&members)? {
            let inner: Vec<FixedBitSet> =
                rows.iter().filter(|r| r.is_subset(&block)).cloned().collect();
            out.extend(arrange(&block, inner)?);
        }
        placed.union_with(&unions[c]);
    }
    out.extend(elems.ones().filter(|&e| !placed.contains(e)));
    Some(out)
}

fn split(seq: &mut Vec<FixedBitSet>, at: usize, row: &FixedBitSet, row_part_first: bool) {
    let inside = &seq[at] & row;
    let mut outside = seq[at].clone();
    outside.difference_with(row);
    let (x, y) = if row_part_first { (inside, outside) } else { (outside, inside) };
    seq[at] = x;
    seq.insert(at + 1, y);
}

/// Ordered block partition of one overlap component; rows must come in an
/// order where each row overlaps an earlier one.
fn refine_component(rows: &[&FixedBitSet]) -> Option<Vec<FixedBitSet>> {
    let mut seq = vec![rows[0].clone()];
    let mut union = rows[0].clone();
    for &r in &rows[1..] {
        let mut fresh = r.clone();
        fresh.difference_with(&union);
        let hits: Vec<usize> = (0..seq.len()).filter(|&i| !seq[i].is_disjoint(r)).collect();
        let (a, b) = (*hits.first()?, *hits.last()?);
        if hits.len() != b - a + 1 {
            return None;
        }
        let full: Vec<bool> = seq.iter().map(|blk| blk.is_subset(r)).collect();
        if (a + 1..b).any(|i| !full[i]) {
            return None;
        }
        if fresh.is_clear() {
            debug_assert!(a < b, "row inside a single block cannot overlap a placed row");
            if !full[b] {
                split(&mut seq, b, r, true);
            }
            if !full[a] {
                split(&mut seq, a, r, false);
            }
        } else {
            let last = seq.len() - 1;
            let right = b == last && (a + 1..=b).all(|i| full[i]);
            let left = a == 0 && (a..b).all(|i| full[i]);
            if right {
                if !full[a] {
                    split(&mut seq, a, r, false);
                }
                seq.push(fresh);
            } else if left {
                if !full[b] {
                    split(&mut seq, b, r, true);
                }
                seq.insert(0, fresh);
            } else {
                return None;
            }
        }
        union.union_with(r);
    }
    Some(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn set(n: usize, items: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        s.extend(items.iter().copied());
        s
    }

    fn contiguous(order: &[usize], row: &FixedBitSet) -> bool {
        let pos: Vec<usize> = order.iter().enumerate().filter(|(_, e)| row.contains(**e)).map(|(p, _)| p).collect();
        pos.is_empty() || pos[pos.len() - 1] - pos[0] + 1 == pos.len()
    }

    fn circular(order: &[usize], row: &FixedBitSet) -> bool {
        let n = order.len();
        let k = order.iter().filter(|e| row.contains(**e)).count();
        k == 0 || k == n || (0..n).any(|s| (0..k).all(|t| row.contains(order[(s + t) % n])))
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == cur.len() {
                out.push(cur.clone());
                return;
            }
            for i in k..cur.len() {
                cur.swap(k, i);
                rec(k + 1, cur, out);
                cur.swap(k, i);
            }
        }
        rec(0, &mut cur, &mut out);
        out
    }

    #[test]
    fn classic_positive_and_negative() {
        let rows = vec![set(4, &[0, 1]), set(4, &[1, 2]), set(4, &[2, 3])];
        let order = consecutive_ones(4, &rows).unwrap();
        assert!(rows.iter().all(|r| contiguous(&order, r)));
        // star: every pair through the centre cannot be consecutive
        let star = vec![set(4, &[0, 1]), set(4, &[0, 2]), set(4, &[0, 3])];
        assert!(consecutive_ones(4, &star).is_none());
        assert!(circular_ones(4, &star).is_none());
        // a cycle of pairs is circular but not linear
        let ring = vec![set(4, &[0, 1]), set(4, &[1, 2]), set(4, &[2, 3]), set(4, &[3, 0])];
        assert!(consecutive_ones(4, &ring).is_none());
        let cyc = circular_ones(4, &ring).unwrap();
        assert!(ring.iter().all(|r| circular(&cyc, r)));
    }

    #[test]
    fn matches_permutation_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let perms: Vec<Vec<Vec<usize>>> = (0..=7).map(permutations).collect();
        for trial in 0..3000 {
            let n = rng.gen_range(2..=7);
            let nrows = rng.gen_range(1..=6);
            let rows: Vec<FixedBitSet> = (0..nrows)
                .map(|_| {
                    let mut r = FixedBitSet::with_capacity(n);
                    for e in 0..n {
                        if rng.gen_bool(0.45) {
                            r.insert(e);
                        }
                    }
                    r
                })
                .collect();
            let brute_lin = perms[n].iter().any(|o| rows.iter().all(|r| contiguous(o, r)));
            let brute_circ = perms[n].iter().any(|o| rows.iter().all(|r| circular(o, r)));
            match consecutive_ones(n, &rows) {
                Some(o) => {
                    assert!(brute_lin, "trial {trial}");
                    assert!(rows.iter().all(|r| contiguous(&o, r)), "trial {trial}: {rows:?} {o:?}");
                }
                None => assert!(!brute_lin, "trial {trial}: missed ordering for {rows:?}"),
            }
            match circular_ones(n, &rows) {
                Some(o) => {
                    assert!(brute_circ, "trial {trial}");
                    assert!(rows.iter().all(|r| circular(&o, r)), "trial {trial}");
                }
                None => assert!(!brute_circ, "trial {trial}: missed cyclic ordering"),
            }
        }
    }
}
