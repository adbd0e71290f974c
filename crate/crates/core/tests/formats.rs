use admg::oracle::{brute_force_m_separated, random_admg, RandomSpec};
use admg::{parse_admg, parse_json, to_admg_string, to_json_string, Admg, VertexSet};
use proptest::prelude::*;

fn graphs() -> impl Strategy<Value = Admg> {
    (1usize..=9, any::<u64>(), 0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(n, seed, p_directed, p_bidirected)| {
        random_admg(&RandomSpec {
            n,
            p_directed,
            p_bidirected,
            seed,
        })
        .unwrap()
    })
}

fn labelled() -> impl Strategy<Value = Admg> {
    (graphs(), proptest::collection::vec("[a-z][a-z0-9_]{0,5}", 9)).prop_filter_map("labels collide", |(g, mut names)| {
        names.truncate(g.n());
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return None;
        }
        Some(Admg::with_labels(names, g.directed_edges(), g.bidirected_edges()).unwrap())
    })
}

/// Three disjoint sets over `0..n`, the first two nonempty when `n >= 2`.
fn split(n: usize, codes: &[u8]) -> (VertexSet, VertexSet, VertexSet) {
    let mut sets = [VertexSet::EMPTY; 4];
    for (v, &c) in codes.iter().take(n).enumerate() {
        sets[c as usize % 4].insert(v);
    }
    (sets[0], sets[1], sets[2])
}

proptest! {
    #[test]
    fn text_format_round_trips(g in labelled()) {
        let text = to_admg_string(&g);
        prop_assert_eq!(parse_admg(&text).unwrap(), g.clone());
        prop_assert_eq!(to_admg_string(&parse_admg(&text).unwrap()), text);
    }

    #[test]
    fn json_format_round_trips(g in labelled()) {
        let text = to_json_string(&g);
        prop_assert_eq!(parse_json(&text).unwrap(), g);
    }

    #[test]
    fn m_separation_is_symmetric_and_decomposes(g in graphs(), codes in proptest::collection::vec(any::<u8>(), 9)) {
        let (x, y, z) = split(g.n(), &codes);
        prop_assume!(!x.is_empty() && !y.is_empty());
        let sep = g.is_m_separated(x, y, z).unwrap();
        prop_assert_eq!(sep, g.is_m_separated(y, x, z).unwrap());
        prop_assert_eq!(sep, brute_force_m_separated(&g, x, y, z).unwrap());
        if sep {
            for part in y.subsets().filter(|s| !s.is_empty()) {
                prop_assert!(g.is_m_separated(x, part, z).unwrap());
            }
        }
    }

    #[test]
    fn vertex_set_algebra(a in any::<u64>(), b in any::<u64>(), values in any::<u64>()) {
        let (s, t) = (VertexSet::from_bits(a), VertexSet::from_bits(b));
        prop_assert_eq!((s | t).len() + (s & t).len(), s.len() + t.len());
        prop_assert_eq!((s - t) | (s & t), s);
        prop_assert!((s - t).is_disjoint(t));
        prop_assert_eq!(s.is_subset(t), (s & t) == s);
        let members: Vec<usize> = s.iter().collect();
        prop_assert!(members.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(s.iter().rev().collect::<Vec<_>>(), members.iter().rev().copied().collect::<Vec<_>>());
        prop_assert_eq!(members.iter().collect::<VertexSet>(), s);
        prop_assert_eq!(s.min(), members.first().copied());
        prop_assert_eq!(s.expand(s.compress(values)), values & a);
        prop_assert_eq!(s.compress(s.expand(values)), values & ((1u128 << s.len()) - 1) as u64);
    }

    #[test]
    fn subsets_enumerate_the_power_set(a in any::<u16>()) {
        let s = VertexSet::from_bits(a as u64);
        let subs: Vec<VertexSet> = s.subsets().collect();
        prop_assert_eq!(subs.len(), 1 << s.len());
        prop_assert!(subs.iter().all(|x| x.is_subset(s)));
        prop_assert!(subs.windows(2).all(|w| w[0].bits() < w[1].bits()));
    }
}
