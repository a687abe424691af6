use crate::constructions::GroupDescription;
use crate::Limits;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A small family instance, its order, and a central element of order p
/// written as `generator^exponent`.
struct PoolEntry {
    desc: GroupDescription,
    order: u64,
    central: (&'static str, u64),
}

fn pool(p: u64) -> Vec<PoolEntry> {
    use GroupDescription::*;
    let e = |desc, order, gen, exp| PoolEntry { desc, order, central: (gen, exp) };
    match p {
        2 => vec![
            e(Dc { p: 2, c: 3 }, 32, "x", 4),
            e(Dc { p: 2, c: 4 }, 128, "x", 8),
            e(Mc { p: 2, c: 2 }, 8, "s2", 1),
            e(Mc { p: 2, c: 3 }, 16, "s3", 1),
            e(Mc { p: 2, c: 4 }, 32, "s4", 1),
            e(Cyclic { p: 2, e: 1 }, 2, "d", 1),
            e(Cyclic { p: 2, e: 2 }, 4, "d", 2),
            e(Homocyclic { p: 2, k: 1, e: 2, s: 0 }, 16, "a1", 2),
        ],
        3 => vec![
            e(Dc { p: 3, c: 2 }, 81, "x", 3),
            e(Mc { p: 3, c: 2 }, 27, "s2", 1),
            e(Mc { p: 3, c: 3 }, 81, "s3", 1),
            e(Cyclic { p: 3, e: 1 }, 3, "d", 1),
            e(Cyclic { p: 3, e: 2 }, 9, "d", 3),
            e(B2 { p: 3, k: 2 }, 27, "d", 1),
            e(Homocyclic { p: 3, k: 2, e: 1, s: 0 }, 81, "a2", 1),
            e(Homocyclic { p: 3, k: 1, e: 2, s: 0 }, 81, "a1", 3),
        ],
        _ => vec![
            e(Dc { p: 5, c: 2 }, 625, "x", 5),
            e(Mc { p: 5, c: 2 }, 125, "s2", 1),
            e(Cyclic { p: 5, e: 1 }, 5, "d", 1),
            e(B2 { p: 5, k: 2 }, 125, "d", 1),
        ],
    }
}

/// Products of 2–3 family instances and central quotients of products of
/// two, all of order at most `max_order` and with a valid quotient word.
pub fn random_recipes(seed: u64, count: usize, max_order: u64) -> Vec<GroupDescription> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lim = Limits::default();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let p = *[2u64, 3, 5].choose(&mut rng).unwrap();
        let pool = pool(p);
        let quotient = rng.gen_bool(0.5);
        let n = if quotient { 2 } else { rng.gen_range(2..=3) };
        let picks: Vec<&PoolEntry> = (0..n).map(|_| pool.choose(&mut rng).unwrap()).collect();
        let order: u64 = picks.iter().map(|e| e.order).product();
        if order > max_order {
            continue;
        }
        let product = GroupDescription::Product(picks.iter().map(|e| e.desc.clone()).collect());
        let desc = if quotient {
            let word: Vec<String> = picks
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let j = rng.gen_range(1..p);
                    format!("f{i}.{}^{}", e.central.0, e.central.1 * j)
                })
                .collect();
            GroupDescription::CentralQuotient { group: Box::new(product), word: word.join("*") }
        } else {
            product
        };
        // a recipe only counts if it builds
        if matches!(&desc, GroupDescription::CentralQuotient { .. }) && desc.build(&lim).is_err() {
            continue;
        }
        out.push(desc);
    }
    out
}

/// Seeded pairs of small family instances sharing a prime.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(GroupDescription, GroupDescription)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = *[2u64, 3, 5].choose(&mut rng).unwrap();
            let pool = pool(p);
            let a = pool.choose(&mut rng).unwrap().desc.clone();
            let b = pool.choose(&mut rng).unwrap().desc.clone();
            (a, b)
        })
        .collect()
}
