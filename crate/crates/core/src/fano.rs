//! The fixed Fano-plane frame used by the length-16 verifier.
//!
//! All quadruple bookkeeping in the quotient-graph analysis is phrased
//! against one concrete extended Hamming code of length 8: the one whose
//! weight-4 words are `{0} ∪ L` for the seven lines `L` of a Fano plane on
//! points 1..7, together with their complements. This module owns that frame:
//! the three canonical quadruple families (low-octet words through 0, their
//! complements, and the mirror image of both in the high octet), the named
//! sub-blocks they split into, and the matching products whose lexicographic
//! quarters label quotient-graph links.

use crate::bitcode::{Code, Quadruple};
use crate::error::{Error, Result};
use crate::partitions::PairMatching;
use std::fmt;

/// Lines of the Fano plane on points 1..7, as bitmasks.
pub const FANO_LINES: [u16; 7] = [
    0b0000_1110, // {1,2,3}
    0b0011_0010, // {1,4,5}
    0b1100_0010, // {1,6,7}
    0b1001_0100, // {2,4,7}
    0b0110_0100, // {2,5,6}
    0b0101_1000, // {3,4,6}
    0b1010_1000, // {3,5,7}
];

/// The extended Hamming code of length 8 attached to [`FANO_LINES`]:
/// zero, the all-ones word, the seven weight-4 words `{0} ∪ L`, and their
/// complements.
pub fn extended_hamming_code() -> Code {
    let mut masks = vec![0u16, 0xff];
    for &line in &FANO_LINES {
        masks.push(line | 1);
        masks.push(!(line | 1) & 0xff);
    }
    Code::from_masks(masks, 8).expect("fixed masks fit length 8")
}

/// Labels for the named quadruple blocks used in quotient-graph tables.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BlockId {
    X,
    Y,
    Z,
    A,
    B,
    APrime,
    BPrime,
    A0,
    A1,
    B0,
    B1,
    A0Prime,
    A1Prime,
    B0Prime,
    B1Prime,
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BlockId::X => "X",
            BlockId::Y => "Y",
            BlockId::Z => "Z",
            BlockId::A => "A",
            BlockId::B => "B",
            BlockId::APrime => "A'",
            BlockId::BPrime => "B'",
            BlockId::A0 => "A0",
            BlockId::A1 => "A1",
            BlockId::B0 => "B0",
            BlockId::B1 => "B1",
            BlockId::A0Prime => "A0'",
            BlockId::A1Prime => "A1'",
            BlockId::B0Prime => "B0'",
            BlockId::B1Prime => "B1'",
        };
        f.write_str(s)
    }
}

/// The canonical quadruple families of the fixed frame.
///
/// * `through_zero` — the seven low-octet quadruples `{0} ∪ L` (block `X`),
///   in increasing support order;
/// * `line_complements` — their complements inside the low octet (block `Y`),
///   listed in decreasing support order, which pairs index `i` with
///   `through_zero[i]`;
/// * `high_mirror` — the image of both families under the coordinate
///   reflection `x -> 15 - x`, which lands in the high octet (block `Z`).
#[derive(Clone, Debug)]
pub struct FanoBlocks {
    pub through_zero: Vec<Quadruple>,
    pub line_complements: Vec<Quadruple>,
    pub high_mirror: Vec<Quadruple>,
}

/// Sorts quadruples by their support tuple (the order their textual forms
/// sort in), which differs from raw mask order.
pub fn sort_by_support(quads: &mut [Quadruple]) {
    quads.sort_by_key(|q| q.support());
}

impl FanoBlocks {
    /// Quadruples of the named block, each sorted by support.
    pub fn block(&self, id: BlockId) -> Vec<Quadruple> {
        let x = &self.through_zero;
        let y_desc = &self.line_complements; // decreasing support order
        match id {
            BlockId::X => x.clone(),
            BlockId::Y => {
                let mut v = y_desc.clone();
                sort_by_support(&mut v);
                v
            }
            BlockId::Z => self.high_mirror.clone(),
            BlockId::A => x[0..3].to_vec(),
            BlockId::B => x[3..7].to_vec(),
            BlockId::A0 => x[0..1].to_vec(),
            BlockId::A1 => x[1..3].to_vec(),
            BlockId::B0 => x[3..5].to_vec(),
            BlockId::B1 => x[5..7].to_vec(),
            BlockId::APrime => y_desc[0..3].to_vec(),
            BlockId::BPrime => {
                let mut v = y_desc[3..7].to_vec();
                sort_by_support(&mut v);
                v
            }
            BlockId::A0Prime => y_desc[0..1].to_vec(),
            BlockId::A1Prime => {
                let mut v = y_desc[1..3].to_vec();
                sort_by_support(&mut v);
                v
            }
            BlockId::B0Prime => {
                let mut v = y_desc[3..5].to_vec();
                sort_by_support(&mut v);
                v
            }
            BlockId::B1Prime => {
                let mut v = y_desc[5..7].to_vec();
                sort_by_support(&mut v);
                v
            }
        }
    }
}

/// Builds the canonical quadruple families of the fixed frame.
pub fn build_fano_sets() -> FanoBlocks {
    let mut through_zero: Vec<Quadruple> = FANO_LINES
        .iter()
        .map(|&line| Quadruple::new(line | 1).expect("line plus zero has weight 4"))
        .collect();
    sort_by_support(&mut through_zero);

    // Complements pair up with the X order: the complement of the least X
    // quadruple is the greatest Y quadruple.
    let line_complements: Vec<Quadruple> = through_zero
        .iter()
        .map(|q| Quadruple::new(!q.mask() & 0xff).expect("octet complement has weight 4"))
        .collect();

    let mut high_mirror: Vec<Quadruple> = through_zero
        .iter()
        .chain(line_complements.iter())
        .map(|q| Quadruple::new(q.mask().reverse_bits()).expect("mirror keeps weight"))
        .collect();
    sort_by_support(&mut high_mirror);

    FanoBlocks {
        through_zero,
        line_complements,
        high_mirror,
    }
}

/// The variant of the high-octet mirror family that circulates with two
/// entries replaced (`8ade -> 8ace`, `9bde -> 9bce`). The verifier tries both
/// variants against a computed loop once and locks whichever matches; see
/// `verify::lock_mirror_variant`.
pub fn high_mirror_alt() -> Vec<Quadruple> {
    let mut quads = build_fano_sets().high_mirror;
    for q in quads.iter_mut() {
        let text = q.to_string();
        if text == "8ade" {
            *q = Quadruple::parse("8ace").unwrap();
        } else if text == "9bde" {
            *q = Quadruple::parse("9bce").unwrap();
        }
    }
    sort_by_support(&mut quads);
    quads
}

/// Replaces every coordinate `x` of every quadruple by `s - x`.
///
/// Only `s = 7` (reflection of the low octet) and `s = 15` (reflection of the
/// full coordinate range) are meaningful here; every coordinate must satisfy
/// `x <= s`.
pub fn s_supplement(quads: &[Quadruple], s: usize) -> Result<Vec<Quadruple>> {
    if s != 7 && s != 15 {
        return Err(Error::BadCoordinate(s, 16));
    }
    let mut out = Vec::with_capacity(quads.len());
    for q in quads {
        let mut mask = 0u16;
        for x in q.support() {
            if x > s {
                return Err(Error::BadCoordinate(x, s + 1));
            }
            mask |= 1 << (s - x);
        }
        out.push(Quadruple::new(mask)?);
    }
    sort_by_support(&mut out);
    Ok(out)
}

/// Complements each quadruple within its own octet: a low-octet quadruple
/// maps to `[0,7]` minus itself, a high-octet one to `[8,15]` minus itself.
pub fn complement_in_octet(quads: &[Quadruple]) -> Result<Vec<Quadruple>> {
    let mut out = Vec::with_capacity(quads.len());
    for q in quads {
        let m = q.mask();
        let octet = if m & 0xff == m {
            0x00ffu16
        } else if m & 0xff00 == m {
            0xff00u16
        } else {
            return Err(Error::BadMask(m, 4));
        };
        out.push(Quadruple::new(octet & !m)?);
    }
    sort_by_support(&mut out);
    Ok(out)
}

/// The blocks of the descending partition of the complement family `Y` used
/// by the loop schedule, coarsest first. The number of blocks is
/// `2^max(0, 7 - kappa)` and the *last* block is the one scheduled into the
/// loop at that kernel dimension.
pub fn descending_y_blocks(kappa: usize) -> Result<Vec<BlockId>> {
    match kappa {
        7..=9 => Ok(vec![BlockId::Y]),
        6 => Ok(vec![BlockId::BPrime, BlockId::APrime]),
        5 => Ok(vec![
            BlockId::B0Prime,
            BlockId::B1Prime,
            BlockId::A1Prime,
            BlockId::A0Prime,
        ]),
        k => Err(Error::KappaOutOfRange(k)),
    }
}

/// The blocks of the ascending partition of the through-zero family `X` that
/// may appear as structural link blocks, smallest first. Empty for kernel
/// dimensions 8 and 9, where all of `X` sits in the loop.
pub fn ascending_x_blocks(kappa: usize) -> Result<Vec<BlockId>> {
    match kappa {
        8..=9 => Ok(vec![]),
        7 => Ok(vec![BlockId::X]),
        6 => Ok(vec![BlockId::A, BlockId::B]),
        5 => Ok(vec![BlockId::A0, BlockId::A1, BlockId::B0, BlockId::B1]),
        k => Err(Error::KappaOutOfRange(k)),
    }
}

/// What the quotient graph of a doubled code must look like at a given
/// kernel dimension: vertex count, loop multiplicity and composition, and
/// the link decomposition rule.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub kappa: usize,
    /// `2^(11 - kappa)`.
    pub expected_vertices: usize,
    /// 44, 28, 21, 17 or 15 for kernel dimensions 9 down to 5.
    pub loop_multiplicity: usize,
    /// Named blocks whose union the loop must equal, besides the product
    /// part at kernel dimension 9.
    pub loop_blocks: Vec<BlockId>,
    /// Whether the loop additionally carries one whole matching product.
    pub loop_has_product: bool,
    /// Whole matching products required per link (kernel dimension 8 and 9);
    /// zero when links carry partial products instead.
    pub whole_products_per_link: usize,
    /// Inclusive range of quarters a partial product may contribute to a
    /// link when `whole_products_per_link` is zero.
    pub loqs_per_product: (usize, usize),
    /// Structural blocks a link may carry, at most one per link.
    pub structural_blocks: Vec<BlockId>,
}

/// The schedule for each kernel dimension handled by the verifier.
pub fn block_schedule(kappa: usize) -> Result<Schedule> {
    let mut y_blocks = descending_y_blocks(kappa)?;
    let loop_y = y_blocks.pop().expect("the descending partition is nonempty");
    let mut structural_blocks = y_blocks;
    structural_blocks.extend(ascending_x_blocks(kappa)?);

    let (loop_multiplicity, loop_blocks, loop_has_product, whole) = match kappa {
        9 => (44, vec![BlockId::Z, loop_y, BlockId::X], true, 2),
        8 => (28, vec![BlockId::Z, loop_y, BlockId::X], false, 1),
        7 => (21, vec![BlockId::Z, loop_y], false, 0),
        6 => (17, vec![BlockId::Z, loop_y], false, 0),
        5 => (15, vec![BlockId::Z, loop_y], false, 0),
        k => return Err(Error::KappaOutOfRange(k)),
    };
    Ok(Schedule {
        kappa,
        expected_vertices: 1 << (11 - kappa),
        loop_multiplicity,
        loop_blocks,
        loop_has_product,
        whole_products_per_link: whole,
        loqs_per_product: (1, 3),
        structural_blocks,
    })
}

/// The 16 quadruples pairing each left pair with each right pair of two
/// perfect matchings, the left one on the low octet and the right one on the
/// high octet.
#[derive(Clone, Debug)]
pub struct MatchingProduct {
    pub left: PairMatching,
    pub right: PairMatching,
    /// All 16 union quadruples in increasing support order.
    pub quads: Vec<Quadruple>,
}

/// Forms the product of a low-octet matching with a high-octet matching
/// (`right` is given on 0..7 and shifted up by 8).
pub fn matching_product(left: &PairMatching, right: &PairMatching) -> MatchingProduct {
    let mut quads = Vec::with_capacity(16);
    for lp in left.pair_masks() {
        for rp in right.pair_masks() {
            let mask = lp | (rp << 8);
            quads.push(Quadruple::new(mask).expect("disjoint pairs give weight 4"));
        }
    }
    sort_by_support(&mut quads);
    MatchingProduct {
        left: left.clone(),
        right: right.clone(),
        quads,
    }
}

/// One lexicographically ordered quarter of a matching product: the four
/// quadruples sharing a single left pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loq {
    /// Low-octet pair mask shared by the four quadruples.
    pub left_pair: u16,
    /// The four quadruples, sorted by support.
    pub quads: [Quadruple; 4],
}

/// Splits a product into its four quarters. Because every quadruple's support
/// starts with its left pair, sorting the sixteen quadruples by support lists
/// each quarter contiguously; the quarters come back in that order.
pub fn loq_blocks(product: &MatchingProduct) -> [Loq; 4] {
    let q = &product.quads;
    debug_assert_eq!(q.len(), 16);
    std::array::from_fn(|i| {
        let chunk: [Quadruple; 4] = std::array::from_fn(|j| q[4 * i + j]);
        let left_pair = chunk[0].mask() & 0xff;
        debug_assert!(chunk.iter().all(|c| c.mask() & 0xff == left_pair));
        Loq {
            left_pair,
            quads: chunk,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcode::is_extended_perfect;
    use std::collections::BTreeSet;

    fn texts(quads: &[Quadruple]) -> Vec<String> {
        quads.iter().map(|q| q.to_string()).collect()
    }

    #[test]
    fn frame_code_is_extended_perfect() {
        let h = extended_hamming_code();
        assert_eq!(h.size(), 16);
        assert!(is_extended_perfect(&h).unwrap());
        assert!(h.contains(0));
        assert!(h.contains(0xff));
    }

    #[test]
    fn family_sizes_and_disjointness() {
        let fb = build_fano_sets();
        assert_eq!(fb.through_zero.len(), 7);
        assert_eq!(fb.line_complements.len(), 7);
        assert_eq!(fb.high_mirror.len(), 14);
        let all: BTreeSet<_> = fb
            .through_zero
            .iter()
            .chain(&fb.line_complements)
            .chain(&fb.high_mirror)
            .collect();
        assert_eq!(all.len(), 28, "the three families are pairwise disjoint");
    }

    #[test]
    fn through_zero_matches_line_list() {
        let fb = build_fano_sets();
        assert_eq!(
            texts(&fb.through_zero),
            ["0123", "0145", "0167", "0247", "0256", "0346", "0357"]
        );
        assert_eq!(
            texts(&fb.line_complements),
            ["4567", "2367", "2345", "1356", "1347", "1257", "1246"]
        );
    }

    #[test]
    fn mirror_is_shift_of_low_families() {
        // The low families are invariant under x -> 7 - x, so the mirror
        // equals the plain shift by 8 of X ∪ Y.
        let fb = build_fano_sets();
        let mut shifted: Vec<Quadruple> = fb
            .through_zero
            .iter()
            .chain(&fb.line_complements)
            .map(|q| Quadruple::new(q.mask() << 8).unwrap())
            .collect();
        sort_by_support(&mut shifted);
        assert_eq!(fb.high_mirror, shifted);
    }

    #[test]
    fn mirror_variants_differ_in_exactly_two_entries() {
        let a: BTreeSet<String> = texts(&build_fano_sets().high_mirror).into_iter().collect();
        let b: BTreeSet<String> = texts(&high_mirror_alt()).into_iter().collect();
        let only_a: Vec<_> = a.difference(&b).cloned().collect();
        let only_b: Vec<_> = b.difference(&a).cloned().collect();
        assert_eq!(only_a, ["8ade", "9bde"]);
        assert_eq!(only_b, ["8ace", "9bce"]);
    }

    #[test]
    fn supplement_is_an_involution() {
        let fb = build_fano_sets();
        let sup = s_supplement(&fb.through_zero, 7).unwrap();
        let back = s_supplement(&sup, 7).unwrap();
        let mut x = fb.through_zero.clone();
        sort_by_support(&mut x);
        assert_eq!(back, x);

        let up = s_supplement(&fb.through_zero, 15).unwrap();
        assert!(up.iter().all(|q| q.mask() & 0x00ff == 0));
        let down = s_supplement(&up, 15).unwrap();
        assert_eq!(down, x);
    }

    #[test]
    fn supplement_rejects_out_of_range() {
        let q = Quadruple::parse("89ab").unwrap();
        assert!(s_supplement(&[q], 7).is_err());
    }

    #[test]
    fn octet_complement_blocks() {
        let fb = build_fano_sets();
        let a = fb.block(BlockId::A);
        assert_eq!(texts(&a), ["0123", "0145", "0167"]);
        let a_prime = complement_in_octet(&a).unwrap();
        assert_eq!(texts(&a_prime), ["2345", "2367", "4567"]);
        let mut expected = fb.block(BlockId::APrime);
        sort_by_support(&mut expected);
        assert_eq!(a_prime, expected);

        let b_prime = complement_in_octet(&fb.block(BlockId::B)).unwrap();
        assert_eq!(texts(&b_prime), ["1246", "1257", "1347", "1356"]);

        // Complementing twice gives the original back.
        let again = complement_in_octet(&a_prime).unwrap();
        assert_eq!(texts(&again), ["0123", "0145", "0167"]);
    }

    #[test]
    fn sub_blocks_partition_their_families() {
        let fb = build_fano_sets();
        let union: BTreeSet<_> = [BlockId::A0, BlockId::A1, BlockId::B0, BlockId::B1]
            .iter()
            .flat_map(|&id| fb.block(id))
            .collect();
        assert_eq!(union.len(), 7);
        let x: BTreeSet<_> = fb.block(BlockId::X).into_iter().collect();
        assert_eq!(union, x);

        let union_y: BTreeSet<_> = [
            BlockId::A0Prime,
            BlockId::A1Prime,
            BlockId::B0Prime,
            BlockId::B1Prime,
        ]
        .iter()
        .flat_map(|&id| fb.block(id))
        .collect();
        let y: BTreeSet<_> = fb.block(BlockId::Y).into_iter().collect();
        assert_eq!(union_y, y);
    }

    #[test]
    fn schedule_multiplicities_are_block_sums() {
        let fb = build_fano_sets();
        for kappa in 5..=9 {
            let s = block_schedule(kappa).unwrap();
            let block_sum: usize = s.loop_blocks.iter().map(|&b| fb.block(b).len()).sum();
            let product_part = if s.loop_has_product { 16 } else { 0 };
            assert_eq!(
                s.loop_multiplicity,
                block_sum + product_part,
                "kappa {kappa}"
            );
            assert_eq!(s.expected_vertices, 1 << (11 - kappa));
        }
        assert_eq!(block_schedule(9).unwrap().loop_multiplicity, 44);
        assert_eq!(block_schedule(8).unwrap().loop_multiplicity, 28);
        assert_eq!(block_schedule(7).unwrap().loop_multiplicity, 21);
        assert_eq!(block_schedule(6).unwrap().loop_multiplicity, 17);
        assert_eq!(block_schedule(5).unwrap().loop_multiplicity, 15);
        assert!(block_schedule(4).is_err());
        assert!(block_schedule(10).is_err());
    }

    #[test]
    fn y_partitions_descend_and_x_partitions_ascend() {
        let fb = build_fano_sets();
        for kappa in 5..=9 {
            let y = descending_y_blocks(kappa).unwrap();
            let sizes: Vec<usize> = y.iter().map(|&b| fb.block(b).len()).collect();
            assert!(sizes.windows(2).all(|w| w[0] >= w[1]), "kappa {kappa}");
            assert_eq!(sizes.iter().sum::<usize>(), 7, "the blocks partition Y");
            assert_eq!(y.len(), 1 << 7usize.saturating_sub(kappa.min(7)));

            let x = ascending_x_blocks(kappa).unwrap();
            let sizes: Vec<usize> = x.iter().map(|&b| fb.block(b).len()).collect();
            assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "kappa {kappa}");
            if kappa <= 7 {
                assert_eq!(sizes.iter().sum::<usize>(), 7, "the blocks partition X");
            }
        }
    }

    #[test]
    fn product_and_quarters() {
        let left = PairMatching::from_pair_masks([0b0000_0011, 0b0000_1100, 0b0011_0000, 0b1100_0000])
            .unwrap();
        let right = PairMatching::from_pair_masks([0b0000_0011, 0b0000_1100, 0b0011_0000, 0b1100_0000])
            .unwrap();
        let prod = matching_product(&left, &right);
        assert_eq!(prod.quads.len(), 16);
        let t = texts(&prod.quads);
        assert!(t.contains(&"0189".to_string()));
        assert!(t.contains(&"67ef".to_string()));

        let loqs = loq_blocks(&prod);
        assert_eq!(
            texts(&loqs[0].quads),
            ["0189", "01ab", "01cd", "01ef"],
            "first quarter pairs the least left pair with every right pair"
        );
        // The quarters partition the product.
        let all: BTreeSet<_> = loqs.iter().flat_map(|l| l.quads).collect();
        assert_eq!(all.len(), 16);
    }
}
