//! Type-B set partitions on `{-n,...,-1,1,...,n}`: validation, enumeration by
//! class, block/arc extraction, the statistics used by the moment formulas,
//! extended (marked) partitions, and the projection onto type A.
//!
//! A partition is valid when it is invariant under negation and no block
//! contains both `k` and `-k` (equivalently, no arc equals its own
//! reflection). Blocks then come in reflection pairs; the positive block of a
//! pair is the one containing the positive element of maximal absolute value.
//!
//! Arcs connect elements that are consecutive *in absolute value* within a
//! block; an arc drawn this way is negative exactly when it crosses the
//! center, i.e. its endpoints have opposite signs. The statistics in
//! [`TypeBPartition::statistics`] and [`ExtendedTypeBPartition::minmax`]
//! count drawn arcs in this convention.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default cap for enumeration by class.
pub const DEFAULT_ENUM_CAP: usize = 6;

/// A bar-invariant partition of `{-n,...,-1,1,...,n}` with no self-reflected
/// arc, in canonical form: elements ascending within blocks, blocks sorted by
/// minimum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeBPartition {
    n: usize,
    blocks: Vec<Vec<i64>>,
}

/// One drawn arc pair of a partition.
///
/// `pos` is the representative whose right endpoint is positive (for a
/// center-crossing pair, the one drawn inside the positive block), `neg` its
/// mirror image. The arc is negative exactly when it crosses the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BArc {
    pub pos: (i64, i64),
    pub neg: (i64, i64),
    pub negative: bool,
}

/// A reflection pair of blocks, both listed in increasing absolute value.
///
/// `positive[j] = -negative[j]`, and the last entry of `positive` is the
/// positive element of maximal absolute value in the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBlock {
    pub positive: Vec<i64>,
    pub negative: Vec<i64>,
}

impl BBlock {
    /// Largest absolute value in the pair; unique over a partition, so it
    /// doubles as the block-pair identifier.
    pub fn key(&self) -> i64 {
        *self.positive.last().expect("nonempty block")
    }

    pub fn size(&self) -> usize {
        self.positive.len()
    }
}

/// Arc/block decomposition of a partition.
#[derive(Clone, Debug)]
pub struct BStructure {
    /// All drawn arc pairs.
    pub arcs: Vec<BArc>,
    /// Positive elements of the singleton pairs.
    pub singletons: Vec<i64>,
    /// Reflection block pairs with at least two elements.
    pub blocks: Vec<BBlock>,
}

/// The three per-partition statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StatRecord {
    /// Number of negative (center-crossing) arcs.
    pub na: usize,
    /// Restricted crossing count.
    pub rc: usize,
    /// Singleton cover count.
    pub cs: usize,
}

/// Enumeration classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionClass {
    /// All type-B partitions.
    B,
    /// Only positive arcs (blocks do not mix signs).
    A,
    /// Every block is a pair.
    PairB,
    /// No singleton blocks.
    NoSingletonB,
    /// Noncrossing type B.
    NcB,
    /// Noncrossing with only positive arcs.
    NcA,
}

impl FromStr for PartitionClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" => Ok(Self::B),
            "A" => Ok(Self::A),
            "pairB" => Ok(Self::PairB),
            "noSingletonB" => Ok(Self::NoSingletonB),
            "ncB" => Ok(Self::NcB),
            "ncA" => Ok(Self::NcA),
            other => Err(Error::Parse(format!("unknown partition class `{other}`"))),
        }
    }
}

impl TypeBPartition {
    /// Validate and canonicalize a block list.
    pub fn canonicalize(blocks: Vec<Vec<i64>>, n: usize) -> Result<Self> {
        let mut seen: BTreeSet<i64> = BTreeSet::new();
        let mut canon: Vec<Vec<i64>> = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &v in &block {
                if v == 0 || v.unsigned_abs() as usize > n {
                    return Err(Error::InvalidPartition(format!(
                        "element {v} outside ±1..±{n}"
                    )));
                }
                if !seen.insert(v) {
                    return Err(Error::InvalidPartition(format!("duplicate element {v}")));
                }
            }
            for &v in &block {
                if block.binary_search(&-v).is_ok() {
                    return Err(Error::InvalidPartition(format!(
                        "self-reflected arc: block contains both {v} and {}",
                        -v
                    )));
                }
            }
            canon.push(block);
        }
        if seen.len() != 2 * n {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {} of {} elements",
                seen.len(),
                2 * n
            )));
        }
        let block_set: BTreeSet<&Vec<i64>> = canon.iter().collect();
        for block in &canon {
            let mut mirror: Vec<i64> = block.iter().map(|&v| -v).collect();
            mirror.sort_unstable();
            if !block_set.contains(&mirror) {
                return Err(Error::InvalidPartition(format!(
                    "not bar-invariant: reflection of {block:?} missing"
                )));
            }
        }
        canon.sort_unstable();
        Ok(TypeBPartition { n, blocks: canon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Blocks in canonical order.
    pub fn blocks(&self) -> &[Vec<i64>] {
        &self.blocks
    }

    /// Split the blocks into reflection pairs, singletons and arcs.
    pub fn b_structure(&self) -> BStructure {
        let mut singletons = Vec::new();
        let mut blocks = Vec::new();
        let mut done: BTreeSet<&Vec<i64>> = BTreeSet::new();
        for block in &self.blocks {
            if done.contains(block) {
                continue;
            }
            let mut mirror: Vec<i64> = block.iter().map(|&v| -v).collect();
            mirror.sort_unstable();
            let mirror_ref = self
                .blocks
                .iter()
                .find(|b| **b == mirror)
                .expect("validated partition");
            done.insert(block);
            done.insert(mirror_ref);
            // The positive block holds the positive element of max |.|.
            let max_abs = block.iter().map(|v| v.abs()).max().expect("nonempty");
            let positive_raw = if block.contains(&max_abs) {
                block
            } else {
                mirror_ref
            };
            let mut positive: Vec<i64> = positive_raw.clone();
            positive.sort_unstable_by_key(|v| v.abs());
            let negative: Vec<i64> = positive.iter().map(|&v| -v).collect();
            if positive.len() == 1 {
                singletons.push(positive[0]);
            } else {
                blocks.push(BBlock { positive, negative });
            }
        }
        singletons.sort_unstable();
        blocks.sort_unstable_by_key(BBlock::key);
        let mut arcs = Vec::new();
        for pair in &blocks {
            for j in 0..pair.size() - 1 {
                arcs.push(make_arc(pair.positive[j], pair.positive[j + 1]));
            }
        }
        BStructure {
            arcs,
            singletons,
            blocks,
        }
    }

    /// Negative-arc, restricted-crossing and singleton-cover counts.
    pub fn statistics(&self) -> StatRecord {
        let s = self.b_structure();
        let na = s.arcs.iter().filter(|a| a.negative).count();
        let mut rc = 0;
        for (i, w) in s.arcs.iter().enumerate() {
            for w2 in &s.arcs[i + 1..] {
                rc += usize::from(crosses(w.pos, w2.pos));
                rc += usize::from(crosses(w.neg, w2.pos));
            }
        }
        let mut cs = 0;
        for &s_elem in &s.singletons {
            cs += covering_arcs(&s.arcs, s_elem);
        }
        StatRecord { na, rc, cs }
    }

    /// Rewrite every negative arc as a positive one and rebuild the blocks.
    ///
    /// Requires a noncrossing input. Returns the image partition, the number
    /// of outer arcs of the image, and the preimage count `2^outer`.
    pub fn project_to_type_a(&self) -> Result<(TypeBPartition, usize, u64)> {
        let s = self.b_structure();
        let stats = self.statistics();
        if stats.rc != 0 {
            return Err(Error::CrossingPartition);
        }
        // Edges with uniform signs: |lo|,|hi| on the positive side, mirrored.
        let mut adjacency: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        let add_edge = |a: i64, b: i64, adjacency: &mut BTreeMap<i64, Vec<i64>>| {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        };
        for arc in &s.arcs {
            let a = arc.pos.0.abs().min(arc.pos.1.abs());
            let b = arc.pos.0.abs().max(arc.pos.1.abs());
            add_edge(a, b, &mut adjacency);
            add_edge(-b, -a, &mut adjacency);
        }
        let mut blocks = Vec::new();
        let mut visited: BTreeSet<i64> = BTreeSet::new();
        for start in (1..=self.n as i64).flat_map(|k| [k, -k]) {
            if visited.contains(&start) {
                continue;
            }
            let mut component = vec![start];
            visited.insert(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                    if visited.insert(w) {
                        component.push(w);
                        stack.push(w);
                    }
                }
            }
            blocks.push(component);
        }
        let image = TypeBPartition::canonicalize(blocks, self.n)?;
        debug_assert_eq!(image.statistics().rc, 0);
        let outer = image.outer_arc_count();
        Ok((image, outer, 1u64 << outer))
    }

    /// Number of positive-side arcs not strictly covered by another
    /// positive-side arc. Meaningful for partitions with only positive arcs.
    pub fn outer_arc_count(&self) -> usize {
        let s = self.b_structure();
        let pos_arcs: Vec<(i64, i64)> = s.arcs.iter().map(|a| a.pos).collect();
        pos_arcs
            .iter()
            .filter(|&&(i, j)| {
                !pos_arcs
                    .iter()
                    .any(|&(i2, j2)| i2 < i && j < j2)
            })
            .count()
    }

    /// Enumerate a partition class in deterministic order.
    pub fn enumerate(n: usize, class: PartitionClass) -> Result<Vec<TypeBPartition>> {
        Self::enumerate_with_cap(n, class, DEFAULT_ENUM_CAP)
    }

    /// [`TypeBPartition::enumerate`] with an explicit cap.
    pub fn enumerate_with_cap(
        n: usize,
        class: PartitionClass,
        cap: usize,
    ) -> Result<Vec<TypeBPartition>> {
        if n == 0 {
            return Err(Error::Precondition("order must be at least 1".into()));
        }
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        let all = enumerate_type_b(n);
        let keep = |p: &TypeBPartition| -> bool {
            match class {
                PartitionClass::B => true,
                PartitionClass::A => p.statistics().na == 0,
                PartitionClass::PairB => p.blocks.iter().all(|b| b.len() == 2),
                PartitionClass::NoSingletonB => p.blocks.iter().all(|b| b.len() >= 2),
                PartitionClass::NcB => p.statistics().rc == 0,
                PartitionClass::NcA => {
                    let st = p.statistics();
                    st.rc == 0 && st.na == 0
                }
            }
        };
        Ok(all.into_iter().filter(keep).collect())
    }
}

fn make_arc(a: i64, b: i64) -> BArc {
    let seg = (a.min(b), a.max(b));
    let mirror = ((-seg.1).min(-seg.0), (-seg.1).max(-seg.0));
    let negative = seg.0 < 0 && seg.1 > 0;
    // Pick the representative with positive right endpoint; a crossing pair
    // keeps the one drawn inside the positive block.
    let (pos, neg) = if negative || seg.1 > 0 {
        (seg, mirror)
    } else {
        (mirror, seg)
    };
    BArc { pos, neg, negative }
}

fn crosses(a: (i64, i64), b: (i64, i64)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

fn covering_arcs(arcs: &[BArc], point: i64) -> usize {
    arcs.iter()
        .map(|a| {
            usize::from(a.pos.0 < point && point < a.pos.1)
                + usize::from(a.neg.0 < point && point < a.neg.1)
        })
        .sum()
}

/// Recursive enumeration: insert the pair `{-n, n}` into every partition of
/// the smaller ground set, either as a new singleton pair or by joining an
/// existing block pair on one of its two sides.
fn enumerate_type_b(n: usize) -> Vec<TypeBPartition> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![TypeBPartition {
            n: 1,
            blocks: vec![vec![-1], vec![1]],
        }];
    }
    let smaller = enumerate_type_b(n - 1);
    let mut out = Vec::new();
    let k = n as i64;
    for p in &smaller {
        let lifted: Vec<Vec<i64>> = p.blocks.clone();
        // New singleton pair.
        let mut with_singletons = lifted.clone();
        with_singletons.push(vec![-k]);
        with_singletons.push(vec![k]);
        out.push(TypeBPartition::canonicalize(with_singletons, n).expect("valid by construction"));
        // Join an existing pair: +n goes to one side, -n to the mirror.
        let structure = p.b_structure();
        let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = structure
            .singletons
            .iter()
            .map(|&s| (vec![-s], vec![s]))
            .collect();
        pairs.extend(structure.blocks.iter().map(|b| {
            let mut neg = b.negative.clone();
            let mut pos = b.positive.clone();
            neg.sort_unstable();
            pos.sort_unstable();
            (neg, pos)
        }));
        pairs.sort_unstable();
        for (neg, pos) in pairs {
            for flip in [false, true] {
                let mut blocks: Vec<Vec<i64>> = lifted
                    .iter()
                    .filter(|b| **b != neg && **b != pos)
                    .cloned()
                    .collect();
                let (mut to_pos, mut to_neg) = (pos.clone(), neg.clone());
                if flip {
                    to_pos.push(-k);
                    to_neg.push(k);
                } else {
                    to_pos.push(k);
                    to_neg.push(-k);
                }
                blocks.push(to_pos);
                blocks.push(to_neg);
                out.push(
                    TypeBPartition::canonicalize(blocks, n).expect("valid by construction"),
                );
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Letters labelling operator positions in the Wick formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsLetter {
    /// Creation position: starts a block.
    Create,
    /// Annihilation position: closes a regular block.
    Act,
    /// Gauge position: continues a block.
    Gauge,
}

impl FromStr for EpsLetter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "create" | "*" => Ok(Self::Create),
            "act" | "1" => Ok(Self::Act),
            "gauge" | "E" => Ok(Self::Gauge),
            other => Err(Error::Parse(format!("unknown letter `{other}`"))),
        }
    }
}

/// A type-B partition with marked block pairs.
///
/// Marks are identified by the block-pair key (positive extreme element).
/// Every singleton pair is marked; a pair is marked together with its mirror.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedTypeBPartition {
    base: TypeBPartition,
    extended: BTreeSet<i64>,
}

impl ExtendedTypeBPartition {
    /// Build from a base partition and the keys of the marked pairs.
    /// Singletons are marked automatically.
    pub fn new(base: TypeBPartition, marks: BTreeSet<i64>) -> Result<Self> {
        let structure = base.b_structure();
        let block_keys: BTreeSet<i64> = structure.blocks.iter().map(BBlock::key).collect();
        for &m in &marks {
            if !block_keys.contains(&m) {
                return Err(Error::InvalidPartition(format!(
                    "mark {m} does not name a block pair"
                )));
            }
        }
        let mut extended = marks;
        extended.extend(structure.singletons.iter().copied());
        Ok(ExtendedTypeBPartition { base, extended })
    }

    pub fn base(&self) -> &TypeBPartition {
        &self.base
    }

    /// Keys of the marked pairs (singletons included).
    pub fn extended_keys(&self) -> &BTreeSet<i64> {
        &self.extended
    }

    pub fn is_extended(&self, key: i64) -> bool {
        self.extended.contains(&key)
    }

    /// Number of (extended pair, covering drawn arc) incidences, counted at
    /// the positive extreme element of each marked pair.
    pub fn minmax(&self) -> usize {
        let s = self.base.b_structure();
        self.extended
            .iter()
            .map(|&key| covering_arcs(&s.arcs, key))
            .sum()
    }

    /// All markings of all partitions (singletons always marked).
    pub fn enumerate_all(n: usize) -> Result<Vec<ExtendedTypeBPartition>> {
        let mut out = Vec::new();
        for base in TypeBPartition::enumerate(n, PartitionClass::B)? {
            let keys: Vec<i64> = base.b_structure().blocks.iter().map(BBlock::key).collect();
            for mask in 0..(1u32 << keys.len()) {
                let marks: BTreeSet<i64> = keys
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &k)| k)
                    .collect();
                out.push(ExtendedTypeBPartition::new(base.clone(), marks)?);
            }
        }
        Ok(out)
    }

    /// Partitions compatible with a letter sequence: reading each pair in
    /// increasing absolute value, the first position is `Create`, middle
    /// positions are `Gauge`, and the last is `Act` for a regular pair or
    /// `Gauge` for a marked one. Singletons sit on `Create` positions.
    pub fn enumerate_for_letters(eps: &[EpsLetter]) -> Result<Vec<ExtendedTypeBPartition>> {
        let n = eps.len();
        let mut out = Vec::new();
        'outer: for base in TypeBPartition::enumerate(n, PartitionClass::B)? {
            let structure = base.b_structure();
            let letter = |e: i64| eps[(e.unsigned_abs() as usize) - 1];
            for &s in &structure.singletons {
                if letter(s) != EpsLetter::Create {
                    continue 'outer;
                }
            }
            let mut marks = BTreeSet::new();
            for block in &structure.blocks {
                let seq = &block.positive;
                if letter(seq[0]) != EpsLetter::Create {
                    continue 'outer;
                }
                if seq[1..seq.len() - 1]
                    .iter()
                    .any(|&e| letter(e) != EpsLetter::Gauge)
                {
                    continue 'outer;
                }
                match letter(seq[seq.len() - 1]) {
                    EpsLetter::Act => {}
                    EpsLetter::Gauge => {
                        marks.insert(block.key());
                    }
                    EpsLetter::Create => continue 'outer,
                }
            }
            out.push(ExtendedTypeBPartition::new(base, marks)?);
        }
        Ok(out)
    }
}

impl fmt::Display for TypeBPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.blocks, None)
    }
}

impl fmt::Display for ExtendedTypeBPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.base.blocks, Some(&self.extended))
    }
}

fn write_blocks(
    f: &mut fmt::Formatter<'_>,
    blocks: &[Vec<i64>],
    marks: Option<&BTreeSet<i64>>,
) -> fmt::Result {
    write!(f, "{{")?;
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        let parts: Vec<String> = block.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))?;
        if let Some(marked) = marks {
            let key = block.iter().map(|v| v.abs()).max().expect("nonempty");
            if marked.contains(&key) {
                write!(f, "E")?;
            }
        }
    }
    write!(f, "}}")
}

impl FromStr for TypeBPartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (blocks, marks) = parse_blocks(s)?;
        if !marks.is_empty() {
            return Err(Error::Parse("unexpected E mark on a plain partition".into()));
        }
        let n = infer_n(&blocks)?;
        TypeBPartition::canonicalize(blocks, n)
    }
}

impl FromStr for ExtendedTypeBPartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (blocks, marked_blocks) = parse_blocks(s)?;
        let n = infer_n(&blocks)?;
        let base = TypeBPartition::canonicalize(blocks, n)?;
        let marks: BTreeSet<i64> = marked_blocks
            .iter()
            .map(|b| b.iter().map(|v| v.abs()).max().expect("nonempty"))
            .collect();
        ExtendedTypeBPartition::new(base, marks)
    }
}

fn infer_n(blocks: &[Vec<i64>]) -> Result<usize> {
    blocks
        .iter()
        .flatten()
        .map(|v| v.unsigned_abs() as usize)
        .max()
        .ok_or_else(|| Error::Parse("empty partition".into()))
}

#[allow(clippy::type_complexity)]
fn parse_blocks(s: &str) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse("partition must be wrapped in { }".into()))?;
    let mut blocks = Vec::new();
    let mut marked = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected `(` at `{rest}`")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::Parse("unclosed block".into()))?;
        let body = &open[..close];
        let mut block = Vec::new();
        for part in body.split(',') {
            let v: i64 = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad element `{part}`")))?;
            block.push(v);
        }
        rest = open[close + 1..].trim_start();
        if let Some(after) = rest.strip_prefix('E') {
            marked.push(block.clone());
            rest = after.trim_start();
        }
        blocks.push(block);
        if let Some(after) = rest.strip_prefix(',') {
            rest = after.trim_start();
        } else if !rest.is_empty() {
            return Err(Error::Parse(format!("unexpected trailing `{rest}`")));
        }
    }
    Ok((blocks, marked))
}
