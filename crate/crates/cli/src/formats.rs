//! Text file formats: vectors, knapsack instances, weighted trees, and
//! the FNV-1a result checksum.
//!
//! All formats are whitespace/line oriented UTF-8 with `#` comments.
//!
//! * vector: whitespace-separated tokens, each an integer or
//!   `-inf`/`+inf`.
//! * instance: header `n t`, then `n` lines `size value [mult]`;
//!   a missing multiplicity means 1, `inf` means unbounded.
//! * tree: header `n`, then `n-1` lines `u v weight` with 0-based
//!   vertex ids and integer or `inf` weights.

use knap_core::{
    EdgeWeight, ExtVal, Item, KnapsackInstance, MaxPlusVec, Multiplicity, SolutionProfile,
    WeightedTree, WindowedProfile,
};

/// Strips `#` comments and splits into tokens.
fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split_whitespace())
}

pub fn parse_vector(text: &str) -> Result<MaxPlusVec, String> {
    let elems: Vec<ExtVal> = tokens(text)
        .map(|tok| match tok {
            "-inf" => Ok(ExtVal::NegInf),
            "+inf" | "inf" => Ok(ExtVal::PosInf),
            _ => tok
                .parse::<i64>()
                .map(ExtVal::Finite)
                .map_err(|_| format!("bad vector element {tok:?}")),
        })
        .collect::<Result<_, _>>()?;
    MaxPlusVec::new(elems).map_err(|e| e.to_string())
}

pub fn format_vector(v: &MaxPlusVec) -> String {
    v.to_string()
}

pub fn parse_instance(text: &str) -> Result<KnapsackInstance, String> {
    let mut toks = tokens(text);
    let n: usize = toks
        .next()
        .ok_or("missing item count")?
        .parse()
        .map_err(|_| "bad item count".to_string())?;
    let t: u64 = toks
        .next()
        .ok_or("missing capacity")?
        .parse()
        .map_err(|_| "bad capacity".to_string())?;
    // Re-walk line by line so the optional multiplicity column stays
    // unambiguous.
    let mut items = Vec::with_capacity(n);
    let mut body = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .filter(|line| !line.trim().is_empty());
    body.next(); // header
    for line in body {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        if cols.len() < 2 || cols.len() > 3 {
            return Err(format!("bad item line {line:?}"));
        }
        let size: u64 = cols[0]
            .parse()
            .map_err(|_| format!("bad size in {line:?}"))?;
        let value: u64 = cols[1]
            .parse()
            .map_err(|_| format!("bad value in {line:?}"))?;
        let mult = match cols.get(2) {
            None => Multiplicity::Bounded(1),
            Some(&"inf") => Multiplicity::Unbounded,
            Some(tok) => Multiplicity::Bounded(
                tok.parse()
                    .map_err(|_| format!("bad multiplicity in {line:?}"))?,
            ),
        };
        items.push(Item { size, value, mult });
    }
    if items.len() != n {
        return Err(format!("header says {n} items, found {}", items.len()));
    }
    KnapsackInstance::new(t, items).map_err(|e| e.to_string())
}

pub fn format_instance(inst: &KnapsackInstance) -> String {
    let mut out = format!("{} {}\n", inst.items.len(), inst.capacity);
    for item in &inst.items {
        match item.mult {
            Multiplicity::Bounded(1) => out.push_str(&format!("{} {}\n", item.size, item.value)),
            Multiplicity::Bounded(m) => {
                out.push_str(&format!("{} {} {}\n", item.size, item.value, m))
            }
            Multiplicity::Unbounded => {
                out.push_str(&format!("{} {} inf\n", item.size, item.value))
            }
        }
    }
    out
}

pub fn parse_tree(text: &str) -> Result<WeightedTree, String> {
    let mut toks = tokens(text);
    let n: usize = toks
        .next()
        .ok_or("missing vertex count")?
        .parse()
        .map_err(|_| "bad vertex count".to_string())?;
    let rest: Vec<&str> = toks.collect();
    if rest.len() != 3 * n.saturating_sub(1) {
        return Err(format!(
            "expected {} edge tokens, found {}",
            3 * n.saturating_sub(1),
            rest.len()
        ));
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for chunk in rest.chunks(3) {
        let u: usize = chunk[0]
            .parse()
            .map_err(|_| format!("bad vertex id {:?}", chunk[0]))?;
        let v: usize = chunk[1]
            .parse()
            .map_err(|_| format!("bad vertex id {:?}", chunk[1]))?;
        let w = match chunk[2] {
            "inf" | "+inf" => EdgeWeight::Infinite,
            tok => EdgeWeight::Finite(
                tok.parse()
                    .map_err(|_| format!("bad edge weight {tok:?}"))?,
            ),
        };
        edges.push((u, v, w));
    }
    WeightedTree::new(n, edges).map_err(|e| e.to_string())
}

pub fn format_tree(tree: &WeightedTree) -> String {
    let mut out = format!("{}\n", tree.vertex_count());
    for &(u, v, w) in tree.edges() {
        match w {
            EdgeWeight::Finite(f) => out.push_str(&format!("{u} {v} {f}\n")),
            EdgeWeight::Infinite => out.push_str(&format!("{u} {v} inf\n")),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// FNV-1a checksums over result sequences
// ---------------------------------------------------------------------------

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[derive(Debug, Clone, Copy)]
pub struct Fnv1a(u64);

impl Fnv1a {
    pub fn new() -> Self {
        Fnv1a(FNV_OFFSET)
    }

    pub fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }

    pub fn finish(self) -> u64 {
        self.0
    }
}

impl Default for Fnv1a {
    fn default() -> Self {
        Self::new()
    }
}

pub fn checksum_vector(v: &MaxPlusVec) -> u64 {
    let mut h = Fnv1a::new();
    for x in v.iter() {
        match x {
            ExtVal::NegInf => h.write(&[0]),
            ExtVal::PosInf => h.write(&[2]),
            ExtVal::Finite(f) => {
                h.write(&[1]);
                h.write(&f.to_le_bytes());
            }
        }
    }
    h.finish()
}

pub fn checksum_profile(p: &SolutionProfile) -> u64 {
    checksum_u64s(p.values())
}

pub fn checksum_u64s(values: &[u64]) -> u64 {
    let mut h = Fnv1a::new();
    for &v in values {
        h.write(&v.to_le_bytes());
    }
    h.finish()
}

pub fn checksum_window(value: u64, w: &WindowedProfile) -> u64 {
    let mut h = Fnv1a::new();
    h.write(&value.to_le_bytes());
    h.write(&w.offset.to_le_bytes());
    for &v in &w.values {
        h.write(&v.to_le_bytes());
    }
    h.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip() {
        let v = parse_vector("1 2 -inf +inf 42 # trailing comment\n").unwrap();
        assert_eq!(format_vector(&v), "1 2 -inf +inf 42");
        assert!(parse_vector("").is_err());
        assert!(parse_vector("abc").is_err());
    }

    #[test]
    fn instance_round_trip() {
        let text = "3 10\n2 3\n4 5 2\n1 1 inf\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.capacity, 10);
        assert_eq!(inst.items.len(), 3);
        assert_eq!(inst.items[1].mult, Multiplicity::Bounded(2));
        assert_eq!(inst.items[2].mult, Multiplicity::Unbounded);
        assert_eq!(format_instance(&inst), text);
        assert!(parse_instance("2 5\n1 1\n").is_err()); // count mismatch
    }

    #[test]
    fn tree_round_trip() {
        let text = "3\n0 1 5\n1 2 inf\n";
        let tree = parse_tree(text).unwrap();
        assert_eq!(tree.vertex_count(), 3);
        assert_eq!(format_tree(&tree), text);
        assert!(parse_tree("3\n0 1 5\n").is_err());
    }

    #[test]
    fn fnv_reference_values() {
        // Standard FNV-1a test vectors.
        let mut h = Fnv1a::new();
        h.write(b"");
        assert_eq!(h.finish(), 0xcbf29ce484222325);
        let mut h = Fnv1a::new();
        h.write(b"a");
        assert_eq!(h.finish(), 0xaf63dc4c8601ec8c);
        let mut h = Fnv1a::new();
        h.write(b"foobar");
        assert_eq!(h.finish(), 0x85944171f73967e8);
    }
}
