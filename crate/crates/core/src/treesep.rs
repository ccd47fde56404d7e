//! Tree separability: minimum total weight of edges crossing a
//! size-constrained vertex bipartition of a weighted tree.
//!
//! Provides an exhaustive oracle, a subtree-profile dynamic program
//! with either plain child-by-child merging or heavy-path organized
//! merging (so the summed convolution lengths stay near-linear), a
//! bounded-weight variant routed through the packed convolution kernel,
//! the constructive balanced-partition bound, and a three-path gadget
//! coupling separability to convolution upper-bound queries.

use crate::bounded::bounded_range_conv;
use crate::error::{domain, Error, Result};
use crate::maxplus::{naive_conv, ExtVal, MaxPlusVec};

/// Infeasible marker inside (min,+) profiles.
const INF: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeWeight {
    Finite(u64),
    Infinite,
}

/// An undirected tree on vertices `0..n` with non-negative edge
/// weights (or infinite sentinels).
#[derive(Debug, Clone)]
pub struct WeightedTree {
    n: usize,
    edges: Vec<(usize, usize, EdgeWeight)>,
}

impl WeightedTree {
    pub fn new(n: usize, edges: Vec<(usize, usize, EdgeWeight)>) -> Result<Self> {
        if n == 0 {
            return Err(domain("trees must have at least one vertex"));
        }
        if edges.len() != n - 1 {
            return Err(domain("a tree on n vertices has exactly n-1 edges"));
        }
        for &(u, v, _) in &edges {
            if u >= n || v >= n || u == v {
                return Err(domain("edge endpoints out of range"));
            }
        }
        let tree = WeightedTree { n, edges };
        // Connectivity: n-1 edges + connected = tree.
        let adj = tree.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(to, _) in &adj[v] {
                if !seen[to] {
                    seen[to] = true;
                    count += 1;
                    stack.push(to);
                }
            }
        }
        if count != n {
            return Err(domain("edges do not form a connected tree"));
        }
        Ok(tree)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, EdgeWeight)] {
        &self.edges
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n];
        for &(u, v, _) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    fn adjacency(&self) -> Vec<Vec<(usize, EdgeWeight)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(to, _)| to);
        }
        adj
    }

    /// Replaces infinite sentinels with a finite weight strictly larger
    /// than any threshold the gadget construction compares against:
    /// `1 + 7 * n * max(1, largest finite weight)`.
    pub fn resolved_weights(&self) -> Result<Vec<(usize, usize, u64)>> {
        let max_finite = self
            .edges
            .iter()
            .filter_map(|&(_, _, w)| match w {
                EdgeWeight::Finite(f) => Some(f),
                EdgeWeight::Infinite => None,
            })
            .max()
            .unwrap_or(0)
            .max(1);
        let big = (7u64)
            .checked_mul(self.n as u64)
            .and_then(|x| x.checked_mul(max_finite))
            .and_then(|x| x.checked_add(1))
            .ok_or(Error::Overflow("infinite-weight sentinel"))?;
        Ok(self
            .edges
            .iter()
            .map(|&(u, v, w)| {
                (
                    u,
                    v,
                    match w {
                        EdgeWeight::Finite(f) => f,
                        EdgeWeight::Infinite => big,
                    },
                )
            })
            .collect())
    }
}

fn add_cost(a: u64, b: u64) -> u64 {
    if a == INF || b == INF {
        INF
    } else {
        a.checked_add(b).expect("separability cost overflow")
    }
}

/// Exhaustive minimum crossing weight over all bipartitions of sizes
/// `(m, n - m)`; intended for `n <= 22`.
pub fn brute_separability(tree: &WeightedTree, m: usize) -> Result<u64> {
    let n = tree.vertex_count();
    if n > 22 {
        return Err(domain("exhaustive separability is limited to n <= 22"));
    }
    if m > n {
        return Err(domain("part size exceeds vertex count"));
    }
    if m == 0 || m == n {
        return Ok(0);
    }
    let edges = tree.resolved_weights()?;
    let mut best = INF;
    // All masks of popcount m via Gosper's hack.
    let mut mask: u64 = (1u64 << m) - 1;
    let limit: u64 = 1u64 << n;
    while mask < limit {
        let mut cost = 0u64;
        for &(u, v, w) in &edges {
            if (mask >> u & 1) != (mask >> v & 1) {
                cost = cost.saturating_add(w);
            }
        }
        best = best.min(cost);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    Ok(best)
}

/// Merge organization for the subtree-profile dynamic program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SepStrategy {
    /// Fold children into the parent profile one at a time.
    NaiveDp,
    /// Organize merges along heavy paths; the summed convolution
    /// lengths stay `O(n log n)`.
    Spine,
}

#[derive(Clone, Copy)]
enum ConvBackend {
    Naive,
    /// (min,+) through the packed (max,+) kernel after negating and
    /// shifting into `[0, bound]`; profile entries above `bound` are
    /// clamped to infinity (they can never underlie an optimal
    /// solution when the final optimum is at most `bound`).
    Bounded { bound: u64 },
}

fn min_conv(a: &[u64], b: &[u64], backend: ConvBackend) -> Result<Vec<u64>> {
    match backend {
        ConvBackend::Naive => {
            let mut out = vec![INF; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == INF {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    if y == INF {
                        continue;
                    }
                    let s = add_cost(x, y);
                    if s < out[i + j] {
                        out[i + j] = s;
                    }
                }
            }
            Ok(out)
        }
        ConvBackend::Bounded { bound } => {
            let map = |v: &[u64]| -> Result<MaxPlusVec> {
                MaxPlusVec::new(
                    v.iter()
                        .map(|&x| {
                            if x > bound {
                                ExtVal::NegInf
                            } else {
                                ExtVal::Finite((bound - x) as i64)
                            }
                        })
                        .collect(),
                )
            };
            let c = bounded_range_conv(&map(a)?, &map(b)?, bound)?;
            Ok(c
                .iter()
                .map(|x| match x {
                    ExtVal::NegInf => INF,
                    ExtVal::Finite(f) => {
                        let v = 2 * bound as u128 - *f as u128;
                        if v > bound as u128 {
                            INF
                        } else {
                            v as u64
                        }
                    }
                    ExtVal::PosInf => unreachable!("inputs are finite or absent"),
                })
                .collect())
        }
    }
}

/// Clamp (bounded backend only): entries above the bound become
/// infeasible before feeding the next merge.
fn clamp(profile: &mut [u64], backend: ConvBackend) {
    if let ConvBackend::Bounded { bound } = backend {
        for v in profile.iter_mut() {
            if *v != INF && *v > bound {
                *v = INF;
            }
        }
    }
}

/// Child profile as seen from the parent across an edge of weight `w`:
/// either the child root stays on the parent's side (index keeps the
/// child's own root-side count) or it does not (count flips, edge
/// crosses).
fn child_through_edge(child: &[u64], w: u64) -> Vec<u64> {
    let size = child.len() - 1;
    (0..=size)
        .map(|k| {
            let same = child[k];
            let cross = add_cost(child[size - k], w);
            same.min(cross)
        })
        .collect()
}

struct TreeDp<'a> {
    children: &'a [Vec<(usize, u64)>],
    subtree_size: &'a [usize],
    preorder: &'a [usize],
    backend: ConvBackend,
}

impl TreeDp<'_> {
    /// Profile of the subtree at `v`: index = vertices on `v`'s side,
    /// including `v` itself (so index 0 is infeasible).
    fn solve(&self, v: usize, strategy: SepStrategy) -> Result<Vec<u64>> {
        match strategy {
            SepStrategy::NaiveDp => self.solve_naive(v),
            SepStrategy::Spine => self.solve_spine(v),
        }
    }

    // Bottom-up over reverse pre-order; no recursion, so deep trees are
    // fine.
    fn solve_naive(&self, root: usize) -> Result<Vec<u64>> {
        let mut profiles: Vec<Option<Vec<u64>>> = vec![None; self.children.len()];
        for &v in self.preorder.iter().rev() {
            let mut profile = vec![INF, 0];
            for &(child, w) in &self.children[v] {
                let sub = profiles[child].take().expect("children precede parents");
                let through = child_through_edge(&sub, w);
                let mut merged = min_conv(&profile, &through, self.backend)?;
                clamp(&mut merged, self.backend);
                profile = merged;
            }
            profiles[v] = Some(profile);
        }
        Ok(profiles[root].take().unwrap())
    }

    fn solve_spine(&self, v: usize) -> Result<Vec<u64>> {
        // Walk the heavy path from v; fold light children locally, then
        // combine the path nodes divide-and-conquer.
        let mut path_locals = Vec::new();
        let mut path_edges = Vec::new();
        let mut cur = v;
        loop {
            let heavy = self
                .children[cur]
                .iter()
                .max_by_key(|&&(c, _)| self.subtree_size[c])
                .copied();
            let mut local = vec![INF, 0];
            for &(child, w) in &self.children[cur] {
                if Some((child, w)) == heavy {
                    continue;
                }
                let sub = self.solve_spine(child)?;
                let through = child_through_edge(&sub, w);
                let mut merged = min_conv(&local, &through, self.backend)?;
                clamp(&mut merged, self.backend);
                local = merged;
            }
            path_locals.push(local);
            match heavy {
                Some((child, w)) => {
                    path_edges.push(w);
                    cur = child;
                }
                None => break,
            }
        }
        let seg = self.combine_segment(&path_locals, &path_edges, 0, path_locals.len() - 1)?;
        Ok(seg
            .same
            .iter()
            .zip(&seg.diff)
            .map(|(&a, &b)| a.min(b))
            .collect())
    }

    /// Segment profiles over path nodes `[lo, hi]`: `same[c]` /
    /// `diff[c]` is the minimum cost with `c` segment vertices on the
    /// segment top's side and the segment bottom on the same/other
    /// side as the top.
    fn combine_segment(
        &self,
        locals: &[Vec<u64>],
        edges: &[u64],
        lo: usize,
        hi: usize,
    ) -> Result<Segment> {
        if lo == hi {
            return Ok(Segment {
                same: locals[lo].clone(),
                diff: vec![INF; locals[lo].len()],
            });
        }
        let mid = (lo + hi) / 2;
        let left = self.combine_segment(locals, edges, lo, mid)?;
        let right = self.combine_segment(locals, edges, mid + 1, hi)?;
        self.join(left, right, edges[mid])
    }

    fn join(&self, left: Segment, right: Segment, w: u64) -> Result<Segment> {
        let rsize = right.same.len() - 1;
        let out_len = left.same.len() + rsize;
        let mut out = Segment {
            same: vec![INF; out_len],
            diff: vec![INF; out_len],
        };
        // s: left bottom vs left top; r: right bottom vs right top;
        // cross: does the joining edge cross?
        for s in 0..2 {
            let lvec = if s == 0 { &left.same } else { &left.diff };
            if lvec.iter().all(|&v| v == INF) {
                continue;
            }
            for r in 0..2 {
                let rvec = if r == 0 { &right.same } else { &right.diff };
                if rvec.iter().all(|&v| v == INF) {
                    continue;
                }
                for cross in 0..2 {
                    // right top relative to left top
                    let tau = s ^ cross;
                    let new_state = tau ^ r;
                    let mut operand: Vec<u64> = if tau == 0 {
                        rvec.clone()
                    } else {
                        (0..=rsize).map(|c| rvec[rsize - c]).collect()
                    };
                    if cross == 1 {
                        for v in operand.iter_mut() {
                            *v = add_cost(*v, w);
                        }
                        clamp(&mut operand, self.backend);
                    }
                    let conv = min_conv(lvec, &operand, self.backend)?;
                    let target = if new_state == 0 {
                        &mut out.same
                    } else {
                        &mut out.diff
                    };
                    for (z, &v) in conv.iter().enumerate() {
                        if v < target[z] {
                            target[z] = v;
                        }
                    }
                }
            }
        }
        clamp(&mut out.same, self.backend);
        clamp(&mut out.diff, self.backend);
        Ok(out)
    }
}

struct Segment {
    same: Vec<u64>,
    diff: Vec<u64>,
}

/// (children with edge weights, subtree sizes, pre-order) of the tree
/// rooted at vertex 0.
type RootedStructure = (Vec<Vec<(usize, u64)>>, Vec<usize>, Vec<usize>);

fn rooted_structure(tree: &WeightedTree) -> Result<RootedStructure> {
    let weights = tree.resolved_weights()?;
    let n = tree.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in &weights {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    for list in &mut adj {
        list.sort_by_key(|&(to, _)| to);
    }
    let mut children = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(to, w) in &adj[v] {
            if !seen[to] {
                seen[to] = true;
                parent[to] = v;
                children[v].push((to, w));
                stack.push(to);
            }
        }
    }
    let mut subtree_size = vec![1usize; n];
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            subtree_size[parent[v]] += subtree_size[v];
        }
    }
    Ok((children, subtree_size, order))
}

fn profile_from_root(root_profile: &[u64], n: usize) -> Vec<u64> {
    (0..=n)
        .map(|m| root_profile[m].min(root_profile[n - m]))
        .collect()
}

/// Minimum crossing weight for every part size `m = 0..=n`, by subtree
/// dynamic programming with (min,+) merges.
pub fn separability_profile(tree: &WeightedTree, strategy: SepStrategy) -> Result<Vec<u64>> {
    separability_profile_impl(tree, strategy, ConvBackend::Naive)
}

fn separability_profile_impl(
    tree: &WeightedTree,
    strategy: SepStrategy,
    backend: ConvBackend,
) -> Result<Vec<u64>> {
    let n = tree.vertex_count();
    if n == 1 {
        return Ok(vec![0, 0]);
    }
    let (children, subtree_size, preorder) = rooted_structure(tree)?;
    let dp = TreeDp {
        children: &children,
        subtree_size: &subtree_size,
        preorder: &preorder,
        backend,
    };
    let root = dp.solve(0, strategy)?;
    debug_assert_eq!(root.len(), n + 1);
    Ok(profile_from_root(&root, n))
}

/// Bound used by [`bounded_separability`]: every part size admits a
/// partition with at most `2 * d_max * ceil(log2 n)` crossing edges.
pub fn separability_bound(tree: &WeightedTree) -> Result<u64> {
    let w_max = tree
        .resolved_weights()?
        .iter()
        .map(|&(_, _, w)| w)
        .max()
        .unwrap_or(0);
    let n = tree.vertex_count() as u64;
    let ceil_log = n.next_power_of_two().trailing_zeros() as u64;
    (2u64)
        .checked_mul(tree.max_degree() as u64)
        .and_then(|x| x.checked_mul(w_max))
        .and_then(|x| x.checked_mul(ceil_log.max(1)))
        .ok_or(Error::Overflow("separability bound"))
}

/// Separability profile with all merges routed through the packed
/// bounded-range kernel at the balanced-partition bound. Errors if a
/// final profile value exceeds the bound (which would contradict the
/// constructive partition).
pub fn bounded_separability(tree: &WeightedTree) -> Result<Vec<u64>> {
    let bound = separability_bound(tree)?;
    let profile =
        separability_profile_impl(tree, SepStrategy::Spine, ConvBackend::Bounded { bound })?;
    for (m, &v) in profile.iter().enumerate() {
        if v != INF && v > bound {
            return Err(domain(format!(
                "separability value {v} at m={m} exceeds the structural bound {bound}"
            )));
        }
        if v == INF {
            return Err(domain(format!(
                "no partition within the structural bound at m={m}"
            )));
        }
    }
    Ok(profile)
}

/// A size-(m, n-m) bipartition with at most `2 * d_max * ceil(log2 n)`
/// crossing edges, built by removing a balanced-split vertex and
/// packing its components greedily, recursing into the first component
/// that does not fit. Returns the m-part as a membership mask.
pub fn centroid_partition(tree: &WeightedTree, m: usize) -> Result<Vec<bool>> {
    let n = tree.vertex_count();
    if m == 0 || m >= n {
        return Err(domain("part size must satisfy 1 <= m < n"));
    }
    let adj = tree.adjacency();
    let mut in_part = vec![false; n];
    let all: Vec<usize> = (0..n).collect();
    partition_component(&adj, &all, m, &mut in_part);
    Ok(in_part)
}

/// Vertex of the component whose removal leaves pieces of size at most
/// `2/3 |component|`; ties broken toward the smallest vertex id.
fn find_balanced_vertex(
    adj: &[Vec<(usize, EdgeWeight)>],
    component: &[usize],
) -> (usize, Vec<Vec<usize>>) {
    let in_comp: std::collections::HashSet<usize> = component.iter().copied().collect();
    let nc = component.len();
    // Root the component anywhere, compute subtree sizes, and read off
    // each vertex's largest removal piece.
    let root = component[0];
    let mut parent: std::collections::HashMap<usize, usize> = Default::default();
    let mut order = Vec::with_capacity(nc);
    let mut stack = vec![root];
    parent.insert(root, root);
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(to, _) in &adj[v] {
            if in_comp.contains(&to) && !parent.contains_key(&to) {
                parent.insert(to, v);
                stack.push(to);
            }
        }
    }
    let mut size: std::collections::HashMap<usize, usize> =
        component.iter().map(|&v| (v, 1)).collect();
    for &v in order.iter().rev() {
        if v != root {
            *size.get_mut(&parent[&v]).unwrap() += size[&v];
        }
    }
    let mut best: Option<usize> = None;
    for &cand in component {
        let mut largest = nc - size[&cand];
        for &(to, _) in &adj[cand] {
            if in_comp.contains(&to) && parent[&to] == cand {
                largest = largest.max(size[&to]);
            }
        }
        if largest * 3 <= nc * 2 {
            best = Some(match best {
                None => cand,
                Some(prev) => prev.min(cand),
            });
        }
    }
    let center = best.expect("every tree has a balanced-split vertex");
    // Components of component \ {center}, ordered by entry neighbor id.
    let mut comps = Vec::new();
    let mut seen: std::collections::HashSet<usize> = Default::default();
    seen.insert(center);
    for &(start, _) in &adj[center] {
        if !in_comp.contains(&start) || seen.contains(&start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &(to, _) in &adj[v] {
                if in_comp.contains(&to) && !seen.contains(&to) {
                    seen.insert(to);
                    stack.push(to);
                }
            }
        }
        comps.push(comp);
    }
    (center, comps)
}

fn partition_component(
    adj: &[Vec<(usize, EdgeWeight)>],
    component: &[usize],
    m: usize,
    in_part: &mut [bool],
) {
    debug_assert!(m >= 1 && m < component.len());
    let (center, comps) = find_balanced_vertex(adj, component);
    in_part[center] = true;
    let mut need = m - 1;
    for comp in comps {
        if need == 0 {
            return;
        }
        if comp.len() <= need {
            for &v in &comp {
                in_part[v] = true;
            }
            need -= comp.len();
        } else {
            partition_component(adj, &comp, need, in_part);
            return;
        }
    }
}

/// Crossing-edge count of a membership mask.
pub fn crossing_edges(tree: &WeightedTree, in_part: &[bool]) -> usize {
    tree.edges()
        .iter()
        .filter(|&&(u, v, _)| in_part[u] != in_part[v])
        .count()
}

/// Does `(a * b)_i > c_i` hold anywhere? Ground truth for the gadget.
pub fn maxcov_upperbound(a: &MaxPlusVec, b: &MaxPlusVec, c: &MaxPlusVec) -> Result<bool> {
    if a.len() != b.len() || c.len() != 2 * a.len() - 1 {
        return Err(domain("upper-bound query needs |a| = |b| and |c| = 2n-1"));
    }
    let prod = naive_conv(a, b)?;
    Ok((0..c.len()).any(|i| prod.get(i) > c.get(i)))
}

/// Three-path tree whose separability at part size `4n - 1` dips below
/// `3M` exactly when `(a * b)_i > c_i` for some `i`; sound for
/// non-decreasing `a` and `b` (the solution-profile shape). Returns
/// the tree, the part size, and the threshold `3M`.
///
/// Geometry: each of the `a`/`b` branches is a 3n-vertex path with an
/// n+1 infinite prefix, the n value edges, and an n-1 infinite tail;
/// the `c` branch carries its 2n-1 value edges directly. Detaching the
/// tail behind value edge `i` of the `a` branch frees `2n-1-i`
/// vertices, so a three-cut part of size `4n-1` picks `(i, j, k)` with
/// `i + j + k = 2n-2` and costs `3M - a_i - b_j + c_(i+j)`; all other
/// cheap part shapes are size-infeasible, which is what the infinite
/// chain placement is for.
pub fn maxcov_gadget(
    a: &MaxPlusVec,
    b: &MaxPlusVec,
    c: &MaxPlusVec,
) -> Result<(WeightedTree, usize, u64)> {
    let n = a.len();
    if b.len() != n || c.len() != 2 * n - 1 {
        return Err(domain("gadget needs |a| = |b| and |c| = 2n-1"));
    }
    let av = a.finite_values("maxcov_gadget")?;
    let bv = b.finite_values("maxcov_gadget")?;
    let cv = c.finite_values("maxcov_gadget")?;
    let mag = av
        .iter()
        .chain(&bv)
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap_or(0)
        .max(1);
    let m_big = 10i128 * mag as i128;

    // Vertex ids: root, then the three paths.
    let root = 0usize;
    let a_path: Vec<usize> = (0..3 * n).map(|i| 1 + i).collect();
    let b_path: Vec<usize> = (0..3 * n).map(|i| 1 + 3 * n + i).collect();
    let c_path: Vec<usize> = (0..2 * n - 1).map(|i| 1 + 6 * n + i).collect();
    let total = 8 * n;

    let finite = |w: i128| -> Result<EdgeWeight> {
        if w < 0 {
            return Err(domain(
                "gadget weights must stay non-negative; upper-bound entries are too small",
            ));
        }
        u64::try_from(w)
            .map(EdgeWeight::Finite)
            .map_err(|_| Error::Overflow("gadget weight"))
    };

    // Value edges occupy positions [n+1, 2n] of the a/b branches.
    let mut edges = Vec::with_capacity(total - 1);
    for (path, vals) in [(&a_path, &av), (&b_path, &bv)] {
        for (i, &vertex) in path.iter().enumerate() {
            let prev = if i == 0 { root } else { path[i - 1] };
            let weight = if (n + 1..=2 * n).contains(&i) {
                finite(m_big - vals[i - n - 1] as i128)?
            } else {
                EdgeWeight::Infinite
            };
            edges.push((prev, vertex, weight));
        }
    }
    for (i, &vertex) in c_path.iter().enumerate() {
        let prev = if i == 0 { root } else { c_path[i - 1] };
        edges.push((prev, vertex, finite(m_big + cv[2 * n - 2 - i] as i128)?));
    }

    let tree = WeightedTree::new(total, edges)?;
    let threshold = u64::try_from(3 * m_big).map_err(|_| Error::Overflow("gadget threshold"))?;
    Ok((tree, 4 * n - 1, threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn path3() -> WeightedTree {
        WeightedTree::new(
            3,
            vec![
                (0, 1, EdgeWeight::Finite(1)),
                (1, 2, EdgeWeight::Finite(5)),
            ],
        )
        .unwrap()
    }

    fn random_tree(rng: &mut SplitMix64, n: usize, w_max: u64) -> WeightedTree {
        // Uniform random tree by attaching each vertex to an earlier one.
        let edges = (1..n)
            .map(|v| {
                let u = rng.next_below(v as u64) as usize;
                (u, v, EdgeWeight::Finite(rng.next_below(w_max + 1)))
            })
            .collect();
        WeightedTree::new(n, edges).unwrap()
    }

    #[test]
    fn tree_validation() {
        assert!(WeightedTree::new(0, vec![]).is_err());
        assert!(WeightedTree::new(2, vec![]).is_err());
        assert!(WeightedTree::new(
            3,
            vec![
                (0, 1, EdgeWeight::Finite(1)),
                (0, 1, EdgeWeight::Finite(1)),
            ]
        )
        .is_err());
        assert!(WeightedTree::new(1, vec![]).is_ok());
    }

    #[test]
    fn brute_examples() {
        let t = path3();
        assert_eq!(brute_separability(&t, 1).unwrap(), 1);
        assert_eq!(brute_separability(&t, 0).unwrap(), 0);
        assert_eq!(brute_separability(&t, 3).unwrap(), 0);
    }

    #[test]
    fn profile_examples() {
        let t = path3();
        assert_eq!(
            separability_profile(&t, SepStrategy::NaiveDp).unwrap(),
            vec![0, 1, 1, 0]
        );
        assert_eq!(
            separability_profile(&t, SepStrategy::Spine).unwrap(),
            vec![0, 1, 1, 0]
        );
        assert_eq!(bounded_separability(&t).unwrap(), vec![0, 1, 1, 0]);

        let single = WeightedTree::new(1, vec![]).unwrap();
        assert_eq!(
            separability_profile(&single, SepStrategy::NaiveDp).unwrap(),
            vec![0, 0]
        );

        let star = WeightedTree::new(
            4,
            (1..4).map(|v| (0, v, EdgeWeight::Finite(1))).collect(),
        )
        .unwrap();
        assert_eq!(brute_separability(&star, 1).unwrap(), 1);
        assert_eq!(bounded_separability(&star).unwrap()[1], 1);
    }

    #[test]
    fn profiles_match_brute_and_are_symmetric() {
        let mut rng = SplitMix64::new(0x7EE);
        for round in 0..120 {
            let n = 1 + rng.next_below(13) as usize;
            let tree = random_tree(&mut rng, n, 6);
            let brute: Vec<u64> = (0..=n)
                .map(|m| brute_separability(&tree, m).unwrap())
                .collect();
            let naive = separability_profile(&tree, SepStrategy::NaiveDp).unwrap();
            let spine = separability_profile(&tree, SepStrategy::Spine).unwrap();
            let bounded = bounded_separability(&tree).unwrap();
            assert_eq!(naive, brute, "round {round}");
            assert_eq!(spine, brute, "round {round}");
            assert_eq!(bounded, brute, "round {round}");
            for m in 0..=n {
                assert_eq!(naive[m], naive[n - m]);
            }
        }
    }

    #[test]
    fn bounded_on_larger_low_degree_trees() {
        let mut rng = SplitMix64::new(0x8EE);
        for _ in 0..6 {
            // Low-degree random tree: attach to one of the last few vertices.
            let n = 96 + rng.next_below(33) as usize;
            let edges = (1..n)
                .map(|v| {
                    let lo = v.saturating_sub(3);
                    let u = lo + rng.next_below((v - lo) as u64) as usize;
                    (u, v, EdgeWeight::Finite(rng.next_below(5)))
                })
                .collect();
            let tree = WeightedTree::new(n, edges).unwrap();
            assert_eq!(
                bounded_separability(&tree).unwrap(),
                separability_profile(&tree, SepStrategy::NaiveDp).unwrap()
            );
        }
    }

    #[test]
    fn long_path_and_caterpillar_profiles() {
        // Deep trees stress the heavy-path organization and the
        // iterative child-by-child fold alike.
        let mut rng = SplitMix64::new(0xF00);
        let n = 220;
        let path = WeightedTree::new(
            n,
            (1..n)
                .map(|v| (v - 1, v, EdgeWeight::Finite(rng.next_below(5))))
                .collect(),
        )
        .unwrap();
        let naive = separability_profile(&path, SepStrategy::NaiveDp).unwrap();
        let spine = separability_profile(&path, SepStrategy::Spine).unwrap();
        let bounded = bounded_separability(&path).unwrap();
        assert_eq!(naive, spine);
        assert_eq!(naive, bounded);

        // Caterpillar: spine plus a leaf at every second vertex.
        let mut edges: Vec<(usize, usize, EdgeWeight)> = (1..100)
            .map(|v| (v - 1, v, EdgeWeight::Finite(rng.next_below(4))))
            .collect();
        let mut next = 100;
        for v in (0..100).step_by(2) {
            edges.push((v, next, EdgeWeight::Finite(rng.next_below(4))));
            next += 1;
        }
        let cat = WeightedTree::new(next, edges).unwrap();
        assert_eq!(
            separability_profile(&cat, SepStrategy::NaiveDp).unwrap(),
            separability_profile(&cat, SepStrategy::Spine).unwrap()
        );
    }

    #[test]
    fn centroid_partition_examples() {
        let path4 = WeightedTree::new(
            4,
            (1..4).map(|v| (v - 1, v, EdgeWeight::Finite(1))).collect(),
        )
        .unwrap();
        let part = centroid_partition(&path4, 2).unwrap();
        assert_eq!(part.iter().filter(|&&b| b).count(), 2);
        assert!(crossing_edges(&path4, &part) <= 8);

        let star = WeightedTree::new(
            5,
            (1..5).map(|v| (0, v, EdgeWeight::Finite(1))).collect(),
        )
        .unwrap();
        let part = centroid_partition(&star, 4).unwrap();
        assert_eq!(part.iter().filter(|&&b| b).count(), 4);
        assert!(crossing_edges(&star, &part) <= 4);
    }

    #[test]
    fn centroid_partition_respects_bound() {
        let mut rng = SplitMix64::new(0x9EE);
        for _ in 0..200 {
            let n = 2 + rng.next_below(64) as usize;
            let tree = random_tree(&mut rng, n, 3);
            let d_max = tree.max_degree() as u64;
            let ceil_log = (n as u64).next_power_of_two().trailing_zeros() as u64;
            let m = 1 + rng.next_below(n as u64 - 1) as usize;
            let part = centroid_partition(&tree, m).unwrap();
            assert_eq!(part.iter().filter(|&&b| b).count(), m);
            assert!(
                (crossing_edges(&tree, &part) as u64) <= 2 * d_max * ceil_log.max(1),
                "n={n} m={m}"
            );
        }
    }

    #[test]
    fn balanced_vertex_leaves_small_components() {
        let mut rng = SplitMix64::new(0xAEE);
        for _ in 0..100 {
            let n = 2 + rng.next_below(40) as usize;
            let tree = random_tree(&mut rng, n, 1);
            let adj = tree.adjacency();
            let all: Vec<usize> = (0..n).collect();
            let (_, comps) = find_balanced_vertex(&adj, &all);
            for comp in comps {
                assert!(comp.len() * 3 <= 2 * n);
            }
        }
    }

    fn fv(vals: &[i64]) -> MaxPlusVec {
        MaxPlusVec::from_finite(vals).unwrap()
    }

    #[test]
    fn gadget_examples() {
        let a = fv(&[1, 2]);
        let b = fv(&[3, 4]);

        let c = fv(&[4, 5, 6]);
        let (tree, m, threshold) = maxcov_gadget(&a, &b, &c).unwrap();
        assert_eq!(tree.vertex_count(), 16);
        assert!(!maxcov_upperbound(&a, &b, &c).unwrap());
        assert!(brute_separability(&tree, m).unwrap() >= threshold);

        let c = fv(&[4, 5, 5]);
        let (tree, m, threshold) = maxcov_gadget(&a, &b, &c).unwrap();
        assert!(maxcov_upperbound(&a, &b, &c).unwrap());
        assert!(brute_separability(&tree, m).unwrap() < threshold);

        // Boundary: c equal to the product everywhere.
        let c = naive_conv(&a, &b).unwrap();
        let (tree, m, threshold) = maxcov_gadget(&a, &b, &c).unwrap();
        assert!(brute_separability(&tree, m).unwrap() >= threshold);
    }

    #[test]
    fn upperbound_examples() {
        let a = fv(&[1, 2]);
        let b = fv(&[3, 4]);
        assert!(!maxcov_upperbound(&a, &b, &fv(&[4, 5, 6])).unwrap());
        assert!(maxcov_upperbound(&a, &b, &fv(&[3, 4, 5])).unwrap());
        assert!(!maxcov_upperbound(&a, &b, &fv(&[1000, 1000, 1000])).unwrap());
        assert!(maxcov_upperbound(&a, &b, &fv(&[4, 5])).is_err());
    }

    /// Sorted (profile-shaped) operand; the gadget is specified for
    /// non-decreasing `a` and `b`.
    pub(crate) fn monotone_operand(rng: &mut SplitMix64, len: usize) -> MaxPlusVec {
        let mut vals: Vec<i64> = (0..len).map(|_| rng.next_below(17) as i64 - 8).collect();
        vals.sort_unstable();
        fv(&vals)
    }

    #[test]
    fn gadget_agrees_with_direct_evaluation() {
        let mut rng = SplitMix64::new(0xBEE);
        for round in 0..150 {
            let n = 1 + rng.next_below(2) as usize;
            let a = monotone_operand(&mut rng, n);
            let b = monotone_operand(&mut rng, n);
            let c = fv(&(0..2 * n - 1)
                .map(|_| rng.next_below(24) as i64 - 9)
                .collect::<Vec<_>>());
            let want = maxcov_upperbound(&a, &b, &c).unwrap();
            let (tree, m, threshold) = maxcov_gadget(&a, &b, &c).unwrap();
            let got = brute_separability(&tree, m).unwrap() < threshold;
            assert_eq!(got, want, "round {round}");
            // The dynamic program agrees with the brute oracle on the gadget.
            let profile = separability_profile(&tree, SepStrategy::NaiveDp).unwrap();
            assert_eq!(profile[m] < threshold, want, "round {round}");
        }
    }
}
