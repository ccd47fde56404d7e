//! Seeded instance generators. Identical (kind, params, seed) inputs
//! produce byte-identical files.

use crate::formats::{format_instance, format_tree};
use knap_core::{EdgeWeight, Item, KnapsackInstance, Multiplicity, SplitMix64, WeightedTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// 0/1 items, values in [0, v_max], sizes in [1, t.max(1)].
    BoundedValue,
    /// 0/1 items, sizes in [1, s_max], arbitrary values in [0, v_max].
    BoundedSize,
    /// Unbounded multiplicities, sizes in [1, s_max].
    Unbounded,
    /// Random finite multiplicities in [1, m_max].
    Mult,
    /// Uniform random labeled tree with weights in [0, w_max].
    Tree,
}

impl GenKind {
    pub fn parse(s: &str) -> Option<GenKind> {
        Some(match s {
            "bounded-value" => GenKind::BoundedValue,
            "bounded-size" => GenKind::BoundedSize,
            "unbounded" => GenKind::Unbounded,
            "mult" => GenKind::Mult,
            "tree" => GenKind::Tree,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenParams {
    pub n: u64,
    pub t: u64,
    pub s_max: u64,
    pub v_max: u64,
    pub m_max: u64,
    pub w_max: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 16,
            t: 64,
            s_max: 8,
            v_max: 8,
            m_max: 4,
            w_max: 8,
        }
    }
}

pub fn gen_instance(kind: GenKind, params: &GenParams, seed: u64) -> Result<String, String> {
    if params.s_max == 0 {
        return Err("s_max must be >= 1".into());
    }
    let mut rng = SplitMix64::derive(seed, &[kind as u64]);
    match kind {
        GenKind::Tree => {
            let tree = random_tree(params.n as usize, params.w_max, &mut rng)?;
            Ok(format_tree(&tree))
        }
        _ => {
            let size_cap = match kind {
                GenKind::BoundedValue => params.t.max(1),
                _ => params.s_max,
            };
            let items = (0..params.n)
                .map(|_| {
                    let size = rng.next_range(1, size_cap);
                    let value = rng.next_below(params.v_max + 1);
                    let mult = match kind {
                        GenKind::Unbounded => Multiplicity::Unbounded,
                        GenKind::Mult => Multiplicity::Bounded(rng.next_range(1, params.m_max.max(1))),
                        _ => Multiplicity::Bounded(1),
                    };
                    Item { size, value, mult }
                })
                .collect();
            let inst = KnapsackInstance::new(params.t, items).map_err(|e| e.to_string())?;
            Ok(format_instance(&inst))
        }
    }
}

/// Uniform random labeled tree by decoding a uniform code sequence
/// (each sequence of length n-2 over the vertex labels corresponds to
/// exactly one labeled tree).
pub fn random_tree(n: usize, w_max: u64, rng: &mut SplitMix64) -> Result<WeightedTree, String> {
    if n == 0 {
        return Err("trees need at least one vertex".into());
    }
    if n == 1 {
        return WeightedTree::new(1, vec![]).map_err(|e| e.to_string());
    }
    let code: Vec<usize> = (0..n.saturating_sub(2))
        .map(|_| rng.next_below(n as u64) as usize)
        .collect();
    let mut degree = vec![1usize; n];
    for &v in &code {
        degree[v] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("decode invariant");
        edges.push((leaf, v, EdgeWeight::Finite(rng.next_below(w_max + 1))));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.push(std::cmp::Reverse(v));
        }
    }
    let std::cmp::Reverse(u) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(v) = leaves.pop().expect("two leaves remain");
    debug_assert!(leaves.is_empty());
    edges.push((u, v, EdgeWeight::Finite(rng.next_below(w_max + 1))));
    WeightedTree::new(n, edges).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{parse_instance, parse_tree};

    #[test]
    fn generation_is_deterministic() {
        let params = GenParams::default();
        for kind in [
            GenKind::BoundedValue,
            GenKind::BoundedSize,
            GenKind::Unbounded,
            GenKind::Mult,
            GenKind::Tree,
        ] {
            let a = gen_instance(kind, &params, 7).unwrap();
            let b = gen_instance(kind, &params, 7).unwrap();
            assert_eq!(a, b);
            let c = gen_instance(kind, &params, 8).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn bounded_size_respects_bound() {
        let params = GenParams {
            n: 50,
            s_max: 5,
            ..Default::default()
        };
        let text = gen_instance(GenKind::BoundedSize, &params, 3).unwrap();
        let inst = parse_instance(&text).unwrap();
        assert!(inst.items.iter().all(|it| (1..=5).contains(&it.size)));
    }

    #[test]
    fn trees_decode_connected() {
        for n in 1..30usize {
            let params = GenParams {
                n: n as u64,
                ..Default::default()
            };
            let text = gen_instance(GenKind::Tree, &params, n as u64).unwrap();
            let tree = parse_tree(&text).unwrap(); // constructor validates connectivity
            assert_eq!(tree.vertex_count(), n);
            assert_eq!(tree.edges().len(), n.saturating_sub(1));
        }
    }
}
