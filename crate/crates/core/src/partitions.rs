//! Partitions of the even-weight words of length 8 into extended 1-perfect
//! classes, and the doubling construction that turns two such partitions and
//! a permutation into an extended 1-perfect code of length 16.
//!
//! Every extended 1-perfect code of length 8 is a coset of one of the thirty
//! such codes through the zero word, so the class pool is finite: 240 cosets.
//! Partition search is a deterministic exact-cover walk over that pool.

use crate::bitcode::{is_extended_perfect, Code, Subspace};
use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

/// All 128 even-weight words of length 8, in increasing order.
pub fn even_words() -> Vec<u16> {
    (0u16..256).filter(|w| w.count_ones() % 2 == 0).collect()
}

/// A permutation of the class indices 0..7.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    images: [u8; 8],
}

impl Permutation {
    pub fn new(images: [u8; 8]) -> Result<Self> {
        let mut seen = [false; 8];
        for &i in &images {
            if i >= 8 || seen[i as usize] {
                return Err(Error::NotAPermutation(images.to_vec()));
            }
            seen[i as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity() -> Self {
        Permutation {
            images: [0, 1, 2, 3, 4, 5, 6, 7],
        }
    }

    /// Parses a comma-separated image list such as `0,1,2,3,4,5,7,6`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<u8> = text
            .split(',')
            .map(|p| p.trim().parse::<u8>().map_err(|_| Error::NotAPermutation(vec![])))
            .collect::<Result<_>>()?;
        let images: [u8; 8] = parts
            .clone()
            .try_into()
            .map_err(|_| Error::NotAPermutation(parts))?;
        Permutation::new(images)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u8; 8] {
        &self.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A perfect matching on the eight coordinates 0..7, stored as four disjoint
/// weight-2 masks in increasing order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PairMatching {
    pair_masks: [u16; 4],
}

impl PairMatching {
    pub fn from_pair_masks(mut masks: [u16; 4]) -> Result<Self> {
        let mut union = 0u16;
        for &m in &masks {
            if m.count_ones() != 2 || m & 0xff != m {
                return Err(Error::NotAMatching(masks.iter().filter(|&&x| x != 0).count()));
            }
            union |= m;
        }
        if union != 0xff {
            return Err(Error::NotAMatching(4));
        }
        masks.sort_unstable();
        Ok(PairMatching { pair_masks: masks })
    }

    pub fn from_pairs(pairs: [(usize, usize); 4]) -> Result<Self> {
        let mut masks = [0u16; 4];
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if a >= 8 {
                return Err(Error::BadCoordinate(a, 8));
            }
            if b >= 8 {
                return Err(Error::BadCoordinate(b, 8));
            }
            masks[k] = (1 << a) | (1 << b);
        }
        PairMatching::from_pair_masks(masks)
    }

    pub fn pair_masks(&self) -> [u16; 4] {
        self.pair_masks
    }

    /// The four pairs as coordinate tuples, each increasing, in increasing
    /// order of their lower coordinate.
    pub fn pairs(&self) -> [(usize, usize); 4] {
        let mut out = [(0usize, 0usize); 4];
        for (k, &m) in self.pair_masks.iter().enumerate() {
            let a = m.trailing_zeros() as usize;
            let b = (15 - m.leading_zeros()) as usize;
            out[k] = (a, b);
        }
        out.sort_unstable();
        out
    }

    /// The coordinate matched with `x`.
    pub fn partner_of(&self, x: usize) -> usize {
        assert!(x < 8, "matching coordinates run over 0..7");
        for &m in &self.pair_masks {
            if m & (1 << x) != 0 {
                return (m & !(1 << x)).trailing_zeros() as usize;
            }
        }
        unreachable!("a perfect matching covers every coordinate")
    }

    pub fn label(&self) -> MatchingLabel {
        MatchingLabel::of(self)
    }
}

impl fmt::Display for PairMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs()
            .iter()
            .map(|&(a, b)| format!("{a}{b}"))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The three-digit label of a matching: the partner of 0, then (as subscript)
/// the partner of the least coordinate not yet named, then (as superscript)
/// the partner of the next least. The fourth pair is determined by the rest,
/// so the label identifies the matching. Rendered as e.g. `1_3^5`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MatchingLabel {
    pub alpha: u8,
    pub sub: u8,
    pub sup: u8,
}

impl MatchingLabel {
    pub fn of(m: &PairMatching) -> Self {
        let mut named = 1u16; // coordinate 0
        let alpha = m.partner_of(0) as u8;
        named |= 1 << alpha;

        let x = named.trailing_ones() as usize;
        let sub = m.partner_of(x) as u8;
        named |= (1 << x) | (1 << sub);

        let y = named.trailing_ones() as usize;
        let sup = m.partner_of(y) as u8;

        MatchingLabel { alpha, sub, sup }
    }
}

impl fmt::Display for MatchingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}^{}", self.alpha, self.sub, self.sup)
    }
}

/// A partition of the 128 even-weight words of length 8 into eight extended
/// 1-perfect classes. Classes are kept in increasing order of their least
/// word, so equal partitions compare equal regardless of input order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtendedPartition {
    classes: [Code; 8],
}

impl ExtendedPartition {
    pub fn from_classes(classes: Vec<Code>) -> Result<Self> {
        validate_partition(&classes)?;
        let mut classes = classes;
        classes.sort_by_key(|c| c.masks()[0]);
        let classes: [Code; 8] = classes
            .try_into()
            .expect("validated partitions have eight classes");
        Ok(ExtendedPartition { classes })
    }

    pub fn classes(&self) -> &[Code; 8] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &Code {
        &self.classes[i]
    }

    /// An order-independent digest of the partition's class contents.
    pub fn fingerprint(&self) -> u64 {
        partition_fingerprint(self)
    }
}

/// Checks that `classes` form a partition of the even-weight words of
/// length 8 into eight extended 1-perfect codes.
pub fn validate_partition(classes: &[Code]) -> Result<()> {
    if classes.len() != 8 {
        return Err(Error::InvalidPartition(format!(
            "expected 8 classes, got {}",
            classes.len()
        )));
    }
    let mut covered: BTreeSet<u16> = BTreeSet::new();
    for (i, class) in classes.iter().enumerate() {
        if class.len() != 8 {
            return Err(Error::InvalidPartition(format!(
                "class {i} has length {}, expected 8",
                class.len()
            )));
        }
        if !is_extended_perfect(class)? {
            return Err(Error::InvalidPartition(format!(
                "class {i} is not an extended 1-perfect code"
            )));
        }
        for &w in class.masks() {
            if !covered.insert(w) {
                return Err(Error::InvalidPartition(format!(
                    "word {w:02x} appears in two classes"
                )));
            }
        }
    }
    if covered.len() != 128 || covered.iter().any(|w| w.count_ones() % 2 != 0) {
        return Err(Error::InvalidPartition(
            "classes do not cover the even-weight words exactly once".into(),
        ));
    }
    Ok(())
}

/// All extended 1-perfect codes of length 8 that contain the zero word,
/// found by backtracking over even-weight words with pairwise distance at
/// least 4. Returned in increasing lexicographic order of their word lists.
pub fn enumerate_unit_codes() -> Vec<Code> {
    let candidates: Vec<u16> = (1u16..256)
        .filter(|w| w.count_ones() % 2 == 0 && w.count_ones() >= 4)
        .collect();
    let mut found = Vec::new();
    let mut chosen = vec![0u16];
    extend_unit(&candidates, 0, &mut chosen, &mut found);
    found
}

fn extend_unit(candidates: &[u16], from: usize, chosen: &mut Vec<u16>, found: &mut Vec<Code>) {
    if chosen.len() == 16 {
        found.push(Code::from_masks(chosen.clone(), 8).expect("searched words fit length 8"));
        return;
    }
    for idx in from..candidates.len() {
        if chosen.len() + (candidates.len() - idx) < 16 {
            return;
        }
        let w = candidates[idx];
        if chosen.iter().all(|&c| (c ^ w).count_ones() >= 4) {
            chosen.push(w);
            extend_unit(candidates, idx + 1, chosen, found);
            chosen.pop();
        }
    }
}

/// The partition of the even-weight words into the eight cosets of the
/// extended Hamming code of the fixed frame.
pub fn linear_partition() -> ExtendedPartition {
    let h = crate::fano::extended_hamming_code();
    let mut classes = Vec::new();
    let mut covered: BTreeSet<u16> = BTreeSet::new();
    for w in even_words() {
        if !covered.contains(&w) {
            let class = h.translate(w).expect("even translate stays in range");
            covered.extend(class.masks());
            classes.push(class);
        }
    }
    ExtendedPartition::from_classes(classes).expect("Hamming cosets partition the even words")
}

/// All 240 extended 1-perfect codes of length 8 (every even-weight coset of
/// every unit code), each as a sorted word list, deduplicated and in
/// increasing lexicographic order.
pub fn coset_pool() -> Vec<Code> {
    let units = enumerate_unit_codes();
    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    for unit in &units {
        for w in even_words() {
            let coset = unit.translate(w).expect("even translate stays in range");
            seen.insert(coset.masks().to_vec());
        }
    }
    seen.into_iter()
        .map(|masks| Code::from_masks(masks, 8).expect("pool words fit length 8"))
        .collect()
}

/// Deterministically enumerates partitions that contain `first_class`,
/// stopping after `limit` of them. The walk is an exact cover over
/// [`coset_pool`], always branching on the least uncovered word, so the
/// output order is reproducible.
pub fn search_partitions(first_class: &Code, limit: usize) -> Result<Vec<ExtendedPartition>> {
    if first_class.len() != 8 {
        return Err(Error::BadLength(first_class.len()));
    }
    if !is_extended_perfect(first_class)? {
        return Err(Error::NotExtendedPerfect(
            "first class is not an extended 1-perfect code".into(),
        ));
    }

    let pool = coset_pool();
    // Bit index of each even word, for 128-bit cover masks.
    let mut index = [0usize; 256];
    for (i, w) in even_words().into_iter().enumerate() {
        index[w as usize] = i;
    }
    let to_bits = |code: &Code| -> u128 {
        code.masks()
            .iter()
            .fold(0u128, |acc, &w| acc | (1u128 << index[w as usize]))
    };
    let pool_bits: Vec<u128> = pool.iter().map(to_bits).collect();
    let first_bits = to_bits(first_class);

    let mut out = Vec::new();
    let mut classes = vec![first_class.clone()];
    search_cover(
        &pool,
        &pool_bits,
        first_bits,
        &mut classes,
        limit,
        &mut out,
    );
    Ok(out)
}

fn search_cover(
    pool: &[Code],
    pool_bits: &[u128],
    covered: u128,
    classes: &mut Vec<Code>,
    limit: usize,
    out: &mut Vec<ExtendedPartition>,
) {
    if out.len() >= limit {
        return;
    }
    if classes.len() == 8 {
        let p = ExtendedPartition::from_classes(classes.clone())
            .expect("exact cover yields a valid partition");
        out.push(p);
        return;
    }
    let next_bit = covered.trailing_ones();
    debug_assert!(next_bit < 128);
    let need = 1u128 << next_bit;
    for (i, &bits) in pool_bits.iter().enumerate() {
        if bits & need != 0 && bits & covered == 0 {
            classes.push(pool[i].clone());
            search_cover(pool, pool_bits, covered | bits, classes, limit, out);
            classes.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
}

/// The matching between two classes of a partition: the set of weight-2
/// differences `x + y` over `x` in one class and `y` in the other. When the
/// two classes are cosets of a common linear code this is always four
/// disjoint pairs; otherwise the difference set need not be a matching and
/// the number of weight-2 differences found is reported in the error.
pub fn class_matching(p: &ExtendedPartition, i: usize, j: usize) -> Result<PairMatching> {
    let mut diffs: BTreeSet<u16> = BTreeSet::new();
    for &x in p.class(i).masks() {
        for &y in p.class(j).masks() {
            let d = x ^ y;
            if d.count_ones() == 2 {
                diffs.insert(d);
            }
        }
    }
    if diffs.len() != 4 {
        return Err(Error::NotAMatching(diffs.len()));
    }
    let masks: Vec<u16> = diffs.into_iter().collect();
    PairMatching::from_pair_masks(masks.try_into().expect("length checked"))
}

/// The doubling construction: every word `(x, y)` with `x` in class `i` of
/// `left` and `y` in class `sigma(i)` of `right`, over all `i`. The result is
/// an extended 1-perfect code of length 16 with 2048 words.
pub fn double(
    left: &ExtendedPartition,
    right: &ExtendedPartition,
    sigma: &Permutation,
) -> Result<Code> {
    let mut words = Vec::with_capacity(2048);
    for i in 0..8 {
        let target = right.class(sigma.apply(i));
        for &x in left.class(i).masks() {
            for &y in target.masks() {
                words.push(x | (y << 8));
            }
        }
    }
    Code::from_masks(words, 16)
}

/// Recovers the two partitions and the pairing permutation from a doubled
/// code: grouping codeword left halves by right half yields the left classes,
/// and symmetrically for the right. Fails with [`Error::NotADoubling`] when
/// the code is not a product-of-classes union.
pub fn decompose_doubling(code: &Code) -> Result<(ExtendedPartition, ExtendedPartition, Permutation)> {
    if code.len() != 16 {
        return Err(Error::BadLength(code.len()));
    }
    if code.size() != 2048 {
        return Err(Error::NotADoubling(format!(
            "expected 2048 words, found {}",
            code.size()
        )));
    }
    let mut lefts_of: std::collections::BTreeMap<u16, BTreeSet<u16>> = Default::default();
    let mut rights_of: std::collections::BTreeMap<u16, BTreeSet<u16>> = Default::default();
    for &w in code.masks() {
        let (l, r) = (w & 0x00ff, w >> 8);
        lefts_of.entry(r).or_default().insert(l);
        rights_of.entry(l).or_default().insert(r);
    }
    let distinct = |groups: std::collections::BTreeMap<u16, BTreeSet<u16>>| -> Result<Vec<Code>> {
        let sets: BTreeSet<Vec<u16>> = groups
            .into_values()
            .map(|s| s.into_iter().collect())
            .collect();
        if sets.len() != 8 {
            return Err(Error::NotADoubling(format!(
                "expected 8 half-word classes, found {}",
                sets.len()
            )));
        }
        sets.into_iter().map(|m| Code::from_masks(m, 8)).collect()
    };
    let left = ExtendedPartition::from_classes(distinct(lefts_of)?)
        .map_err(|e| Error::NotADoubling(format!("left halves: {e}")))?;
    let right = ExtendedPartition::from_classes(distinct(rights_of)?)
        .map_err(|e| Error::NotADoubling(format!("right halves: {e}")))?;

    let mut images = [8u8; 8];
    for i in 0..8 {
        let x = left.class(i).masks()[0];
        let rights = &rights_of_class(code, x);
        let j = (0..8)
            .find(|&j| right.class(j).masks() == &rights[..])
            .ok_or_else(|| {
                Error::NotADoubling(format!("left class {i} does not pair with a right class"))
            })?;
        images[i] = j as u8;
    }
    let sigma = Permutation::new(images)
        .map_err(|_| Error::NotADoubling("left classes pair with repeated right classes".into()))?;

    // The eight blocks account for 8 * 16 * 16 = 2048 words, and every
    // codeword lies in one of them by construction, so the match is exact.
    Ok((left, right, sigma))
}

fn rights_of_class(code: &Code, left_word: u16) -> Vec<u16> {
    code.masks()
        .iter()
        .filter(|&&w| w & 0x00ff == left_word)
        .map(|&w| w >> 8)
        .collect()
}

/// The subspace of words that fix every class of the partition under
/// translation — equivalently the intersection of the classes' underlying
/// linear codes. Its dimension runs from 1 (the zero word and the all-ones
/// word only) to 4 (all classes are cosets of one code).
pub fn partition_core(p: &ExtendedPartition) -> Subspace {
    let fixers: Vec<u16> = (0u16..256)
        .filter(|&t| {
            t.count_ones() % 2 == 0
                && p.classes().iter().all(|c| {
                    c.translate(t)
                        .map(|shifted| shifted == *c)
                        .unwrap_or(false)
                })
        })
        .collect();
    Subspace::span(fixers, 8).expect("class stabilizers form a subspace")
}

/// Deterministically enumerates partitions whose classes are all cosets of
/// the given codes, up to `limit` of them. With two or more codes with small
/// pairwise intersections this produces partitions whose [`partition_core`]
/// drops below dimension 4.
pub fn mixed_cover_partitions(units: &[&Code], limit: usize) -> Result<Vec<ExtendedPartition>> {
    let mut pool: Vec<Code> = Vec::new();
    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    for unit in units {
        if unit.len() != 8 {
            return Err(Error::BadLength(unit.len()));
        }
        if !is_extended_perfect(unit)? {
            return Err(Error::NotExtendedPerfect(
                "cover class is not an extended 1-perfect code".into(),
            ));
        }
        for w in even_words() {
            let coset = unit.translate(w).expect("even translate stays in range");
            if seen.insert(coset.masks().to_vec()) {
                pool.push(coset);
            }
        }
    }
    let mut index = [0usize; 256];
    for (i, w) in even_words().into_iter().enumerate() {
        index[w as usize] = i;
    }
    let pool_bits: Vec<u128> = pool
        .iter()
        .map(|c| {
            c.masks()
                .iter()
                .fold(0u128, |acc, &w| acc | (1u128 << index[w as usize]))
        })
        .collect();
    let mut out = Vec::new();
    let mut classes = Vec::new();
    search_cover(&pool, &pool_bits, 0, &mut classes, limit, &mut out);
    Ok(out)
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut h: u64, bytes: impl IntoIterator<Item = u8>) -> u64 {
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// A stable, class-order-independent digest of a partition: each class is
/// hashed over its sorted word list, the class digests are sorted, and the
/// result is hashed again. Stable across runs and platforms.
pub fn partition_fingerprint(p: &ExtendedPartition) -> u64 {
    let mut digests: Vec<u64> = p
        .classes()
        .iter()
        .map(|c| fnv1a(FNV_OFFSET, c.masks().iter().flat_map(|w| w.to_le_bytes())))
        .collect();
    digests.sort_unstable();
    fnv1a(FNV_OFFSET, digests.iter().flat_map(|d| d.to_le_bytes()))
}
