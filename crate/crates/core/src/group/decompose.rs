use super::{Group, Subgroup};
use crate::error::{Error, Result};
use std::collections::HashMap;

type Bits = Vec<u64>;

fn bit_set(b: &mut Bits, i: usize) -> bool {
    let (w, m) = (i / 64, 1u64 << (i % 64));
    let was = b[w] & m != 0;
    b[w] |= m;
    !was
}

fn bit_get(b: &Bits, i: usize) -> bool {
    b[i / 64] & (1u64 << (i % 64)) != 0
}

fn popcount(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn is_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn meet_count(a: &Bits, b: &Bits) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Closure of `start` under right multiplication by one fixed element
/// (`right`, as a permutation of positions) and conjugation by generators.
/// For normal `start` this is `start · ⟨class of that element⟩`.
fn close(start: &Bits, n: usize, right: &[u32], conj: &[Vec<u32>]) -> Bits {
    let mut bits = start.clone();
    let mut queue: Vec<usize> = (0..n).filter(|&i| bit_get(start, i)).collect();
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let y = right[x] as usize;
        if bit_set(&mut bits, y) {
            queue.push(y);
        }
        for c in conj {
            let y = c[x] as usize;
            if bit_set(&mut bits, y) {
                queue.push(y);
            }
        }
    }
    bits
}

fn to_subgroup(all: &Subgroup, b: &Bits) -> Subgroup {
    Subgroup::from_elements((0..all.order()).filter(|&i| bit_get(b, i)).map(|i| all.elements()[i].clone()).collect())
}

/// Searches for a nontrivial internal direct decomposition `G = A × B`.
///
/// The lattice of normal subgroups is generated under joins by the normal
/// closures of single elements; it is built incrementally and every new
/// member is tested against the members of complementary order.
pub fn direct_factor_search(g: &Group, bound: usize) -> Result<Option<(Subgroup, Subgroup)>> {
    if g.ops().order_hint().is_some_and(|n| n > bound as u128) {
        return Err(Error::ResourceLimit { limit: bound });
    }
    let all = g.enumerate()?;
    let n = all.order();
    if n > bound {
        return Err(Error::ResourceLimit { limit: bound });
    }
    if n == 1 {
        return Ok(None);
    }
    let words = n.div_ceil(64);
    let pos = |x: &super::GroupElement| all.position(x).expect("closed under multiplication") as u32;

    let gens = g.generator_elements();
    let conj: Vec<Vec<u32>> = gens
        .iter()
        .map(|h| {
            let hi = g.inv(h);
            all.iter().map(|x| pos(&g.mul(&hi, &g.mul(x, h)))).collect()
        })
        .collect();

    // conjugacy classes as orbits of the generator conjugations
    let mut class_rep = vec![u32::MAX; n];
    let mut reps = Vec::new();
    for start in 0..n {
        if class_rep[start] != u32::MAX {
            continue;
        }
        reps.push(start);
        class_rep[start] = start as u32;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for c in &conj {
                let y = c[x] as usize;
                if class_rep[y] == u32::MAX {
                    class_rep[y] = start as u32;
                    stack.push(y);
                }
            }
        }
    }

    let id = all.position(&g.identity()).expect("identity");
    let mut trivial = vec![0u64; words];
    bit_set(&mut trivial, id);

    let right_table = |r: usize| -> Vec<u32> {
        let h = &all.elements()[r];
        all.iter().map(|x| pos(&g.mul(x, h))).collect()
    };

    // distinct normal closures of single elements
    let mut closures: Vec<(Bits, usize)> = Vec::new();
    let mut seen: HashMap<Bits, ()> = HashMap::new();
    for &r in reps.iter().filter(|&&r| r != id) {
        let table = right_table(r);
        let b = close(&trivial, n, &table, &conj);
        if seen.insert(b.clone(), ()).is_none() {
            closures.push((b, r));
        }
    }
    closures.sort_by(|a, b| popcount(&a.0).cmp(&popcount(&b.0)).then_with(|| a.0.cmp(&b.0)));

    let mut lattice: Vec<(Bits, usize)> = vec![(trivial.clone(), 1)];
    let mut index: HashMap<Bits, usize> = HashMap::from([(trivial, 0)]);
    let mut by_size: HashMap<usize, Vec<usize>> = HashMap::from([(1, vec![0])]);

    for (nb, r) in &closures {
        let table = right_table(*r);
        let snapshot = lattice.len();
        for xi in 0..snapshot {
            if is_subset(nb, &lattice[xi].0) {
                continue;
            }
            let y = close(&lattice[xi].0, n, &table, &conj);
            if index.contains_key(&y) {
                continue;
            }
            let size = popcount(&y);
            if size != n && n % size == 0 {
                if let Some(cands) = by_size.get(&(n / size)) {
                    for &zi in cands {
                        let z = &lattice[zi].0;
                        if lattice[zi].1 != 1 && meet_count(&y, z) == 1 {
                            return Ok(Some((to_subgroup(&all, &y), to_subgroup(&all, z))));
                        }
                    }
                }
            }
            let k = lattice.len();
            index.insert(y.clone(), k);
            by_size.entry(size).or_default().push(k);
            lattice.push((y, size));
        }
    }
    Ok(None)
}
