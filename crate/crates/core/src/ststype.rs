//! Pasch-configuration signatures and type classification of the Steiner
//! triple systems derived from codeword neighborhoods.
//!
//! Every codeword of an extended 1-perfect code of length 16 induces a
//! Steiner quadruple system on 16 points; fixing a point and keeping the
//! quadruples through it yields a derived Steiner triple system on the other
//! 15. Counting Pasch configurations — four triples on six points, every
//! point on exactly two of them — both in total and through each point gives
//! a signature that separates the triple-system types arising this way. The
//! classification table below lists the signatures of the eleven types that
//! occur, keyed by their position in the standard enumeration of the 80
//! triple systems on 15 points.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rand::Rng;

use crate::bitcode::{kernel, Code, Quadruple, Triple};
use crate::error::{Error, Result};
use crate::sqsgraph::codeword_sqs;

/// The triples of the derived triple system at point `p`: quadruples of the
/// system through `p`, with `p` removed. The 15 remaining coordinates keep
/// their original labels.
pub fn derived_sts(quads: &[Quadruple], p: usize) -> Result<Vec<Triple>> {
    if p >= 16 {
        return Err(Error::BadCoordinate(p, 16));
    }
    let bit = 1u16 << p;
    quads
        .iter()
        .filter(|q| q.mask() & bit != 0)
        .map(|q| Triple::new(q.mask() & !bit))
        .collect()
}

/// The derived triple system of the codeword `v` at coordinate `p`.
pub fn codeword_sts(code: &Code, v: u16, p: usize) -> Result<Vec<Triple>> {
    derived_sts(&codeword_sqs(code, v)?, p)
}

/// Pasch count of a triple system, total and through each point, the
/// per-point counts sorted in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaschSignature {
    pub total: usize,
    pub per_point: Vec<usize>,
}

impl std::fmt::Display for PaschSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pp: Vec<String> = self.per_point.iter().map(|c| c.to_string()).collect();
        write!(f, "{}({})", self.total, pp.join(","))
    }
}

/// Third-point lookup: `third[a][b]` is the point completing the unique
/// triple through `a` and `b`.
fn third_point_table(triples: &[Triple]) -> Result<[[u8; 16]; 16]> {
    const NONE: u8 = u8::MAX;
    let mut third = [[NONE; 16]; 16];
    for t in triples {
        let [a, b, c] = t.support();
        for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
            if third[x][y] != NONE {
                return Err(Error::NotSteiner(format!(
                    "points {x} and {y} lie in more than one triple"
                )));
            }
            third[x][y] = z as u8;
            third[y][x] = z as u8;
        }
    }
    Ok(third)
}

/// Computes the Pasch signature, validating that the triples form a Steiner
/// triple system on the points they cover.
///
/// The counting walks ordered pairs of triples sharing exactly one point and
/// completes each of the two cross pairings through the third-point table;
/// every configuration arises from 12 ordered pairs (6 shared points, 2
/// orders), and from 2 with a fixed shared point.
pub fn pasch_signature(triples: &[Triple]) -> Result<PaschSignature> {
    let union: u16 = triples.iter().fold(0, |m, t| m | t.mask());
    let v = union.count_ones() as usize;
    if triples.len() * 6 != v * (v - 1) {
        return Err(Error::NotSteiner(format!(
            "{} triples cannot cover the {} point pairs exactly once",
            triples.len(),
            v * (v - 1) / 2
        )));
    }
    let third = third_point_table(triples)?;

    let mut raw = [0usize; 16];
    for (i, s) in triples.iter().enumerate() {
        for (j, t) in triples.iter().enumerate() {
            if i == j {
                continue;
            }
            let common = s.mask() & t.mask();
            if common.count_ones() != 1 {
                continue;
            }
            let a = common.trailing_zeros() as usize;
            let [b, c] = two_points(s.mask() & !common);
            let [d, e] = two_points(t.mask() & !common);
            for (p1, p2) in [((b, d), (c, e)), ((b, e), (c, d))] {
                let f1 = third[p1.0][p1.1];
                let f2 = third[p2.0][p2.1];
                if f1 != u8::MAX && f1 == f2 && f1 as usize != a {
                    raw[a] += 1;
                }
            }
        }
    }
    let mut per_point: Vec<usize> = (0..16)
        .filter(|&p| union & (1 << p) != 0)
        .map(|p| raw[p] / 2)
        .collect();
    let sum: usize = per_point.iter().sum();
    debug_assert_eq!(sum % 6, 0);
    per_point.sort_unstable_by(|a, b| b.cmp(a));
    Ok(PaschSignature {
        total: sum / 6,
        per_point,
    })
}

fn two_points(mask: u16) -> [usize; 2] {
    let a = mask.trailing_zeros() as usize;
    let b = (15 - mask.leading_zeros()) as usize;
    [a, b]
}

/// Counts Pasch configurations by testing all four-subsets of triples: a
/// subset qualifies exactly when its masks cancel and cover six points.
/// Quadratic-free reference for [`pasch_signature`].
pub fn pasch_count_brute(triples: &[Triple]) -> usize {
    let masks: Vec<u16> = triples.iter().map(|t| t.mask()).collect();
    let n = masks.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            let mij = masks[i] ^ masks[j];
            for k in j + 1..n {
                let mijk = mij ^ masks[k];
                for &ml in &masks[k + 1..] {
                    if mijk == ml && (masks[i] | masks[j] | masks[k] | ml).count_ones() == 6 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// A triple-system type: its number in the standard enumeration of the 80
/// systems on 15 points, or unclassified when the signature matches no row
/// of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StsType {
    Known(u8),
    Unclassified,
}

impl StsType {
    /// Single-character label: the digit for types 1..=8, then `c`, `d`, `g`
    /// for types 13, 14, 16, and `?` when unclassified.
    pub fn letter(&self) -> char {
        match self {
            StsType::Known(n @ 1..=8) => (b'0' + n) as char,
            StsType::Known(13) => 'c',
            StsType::Known(14) => 'd',
            StsType::Known(16) => 'g',
            _ => '?',
        }
    }
}

impl std::fmt::Display for StsType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Signature rows of the eleven types arising from codeword neighborhoods.
/// Two tabulated rows come with one per-point value missing; it is recovered
/// from the identity 6·total = Σ per-point, which holds because every
/// configuration contains exactly six points.
const RAW_ROWS: &[(u8, usize, &[usize])] = &[
    (1, 105, &[42, 42, 42, 42, 42, 42, 42, 42, 42, 42, 42, 42, 42, 42, 42]),
    (2, 73, &[42, 30, 30, 30, 30, 30, 30, 30, 30, 26, 26, 26, 26, 26, 26]),
    (3, 57, &[26, 26, 26, 24, 24, 24, 24, 24, 24, 24, 24, 18, 18, 18, 18]),
    (4, 49, &[30, 26, 22, 20, 20, 20, 20, 18, 18, 18, 18, 18, 18, 14, 14]),
    (5, 49, &[26, 26, 20, 20, 20, 20, 18, 18, 18, 18, 18, 18, 18, 18]),
    (6, 37, &[22, 22, 22, 14, 14, 14, 14, 14, 14, 12, 12, 12, 12, 12, 12]),
    (7, 33, &[18, 18, 18, 12, 12, 12, 12, 12, 12, 12, 12, 12, 12, 12, 12]),
    (8, 37, &[18, 18, 18, 15, 15, 15, 15, 14, 14, 14, 14, 14, 14, 14, 10]),
    (13, 33, &[20, 16, 16, 14, 14, 12, 12, 12, 12, 12, 12, 12, 12, 10]),
    (14, 37, &[24, 16, 16, 16, 15, 15, 15, 15, 14, 14, 14, 12, 12, 12, 12]),
    (16, 49, &[21, 21, 21, 21, 21, 21, 21, 21, 18, 18, 18, 18, 18, 18, 18]),
];

/// The classification table mapping Pasch signatures to type numbers.
pub struct StsTypeTable {
    rows: Vec<(u8, PaschSignature)>,
}

impl StsTypeTable {
    pub fn new() -> Self {
        let rows = RAW_ROWS
            .iter()
            .map(|&(number, total, given)| {
                let mut per_point = given.to_vec();
                if per_point.len() == 14 {
                    let sum: usize = per_point.iter().sum();
                    per_point.push(6 * total - sum);
                }
                per_point.sort_unstable_by(|a, b| b.cmp(a));
                assert_eq!(per_point.len(), 15);
                assert_eq!(per_point.iter().sum::<usize>(), 6 * total);
                (number, PaschSignature { total, per_point })
            })
            .collect();
        StsTypeTable { rows }
    }

    /// The signature of a type number, if tabulated.
    pub fn signature_of(&self, number: u8) -> Option<&PaschSignature> {
        self.rows.iter().find(|(n, _)| *n == number).map(|(_, s)| s)
    }

    pub fn classify(&self, sig: &PaschSignature) -> StsType {
        self.rows
            .iter()
            .find(|(_, s)| s == sig)
            .map(|(n, _)| StsType::Known(*n))
            .unwrap_or(StsType::Unclassified)
    }
}

impl Default for StsTypeTable {
    fn default() -> Self {
        Self::new()
    }
}

fn table() -> &'static StsTypeTable {
    static TABLE: OnceLock<StsTypeTable> = OnceLock::new();
    TABLE.get_or_init(StsTypeTable::new)
}

/// Classifies a signature against the shared table.
pub fn sts_type(sig: &PaschSignature) -> StsType {
    table().classify(sig)
}

/// The sixteen derived-system types of one codeword neighborhood, in
/// coordinate order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodewordProfile {
    pub representative: u16,
    pub letters: String,
}

impl CodewordProfile {
    /// Letter multiset, sorted, for comparisons that ignore coordinates.
    pub fn sorted_letters(&self) -> String {
        let mut chars: Vec<char> = self.letters.chars().collect();
        chars.sort_unstable();
        chars.into_iter().collect()
    }
}

/// Computes one profile per coset of the kernel in the code.
///
/// The quadruple system of a codeword is invariant under translation by
/// kernel elements — the translation fixes the code and the neighborhood
/// differences — so the profile is computed once per coset; the invariance
/// itself is re-checked on a second coset member.
pub fn code_type_profile(code: &Code) -> Result<Vec<CodewordProfile>> {
    let k = kernel(code);
    let mut seen: BTreeSet<u16> = BTreeSet::new();
    let kernel_elements = k.elements();
    let witness = kernel_elements.iter().copied().find(|&x| x != 0);
    let mut profiles = Vec::new();
    for &v in code.masks() {
        if seen.contains(&v) {
            continue;
        }
        for &x in &kernel_elements {
            seen.insert(v ^ x);
        }
        let quads = codeword_sqs(code, v)?;
        if let Some(w) = witness {
            let again = codeword_sqs(code, v ^ w)?;
            if quads != again {
                return Err(Error::NotSteiner(format!(
                    "codeword systems differ across the kernel coset of {v:#06x}"
                )));
            }
        }
        let mut letters = String::with_capacity(16);
        for p in 0..16 {
            let sig = pasch_signature(&derived_sts(&quads, p)?)?;
            letters.push(sts_type(&sig).letter());
        }
        profiles.push(CodewordProfile {
            representative: v,
            letters,
        });
    }
    Ok(profiles)
}

/// Homogeneity of a code under the derived-system types of its codewords.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    /// One type everywhere: every codeword, every coordinate.
    StsHomogeneous,
    /// Every codeword carries the same multiset of sixteen types.
    SqsHomogeneous,
    Heterogeneous,
}

impl std::fmt::Display for Homogeneity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Homogeneity::StsHomogeneous => "STS-homogeneous",
            Homogeneity::SqsHomogeneous => "SQS-homogeneous",
            Homogeneity::Heterogeneous => "heterogeneous",
        })
    }
}

/// Classifies homogeneity from the per-coset profiles.
pub fn homogeneity_class(profiles: &[CodewordProfile]) -> Homogeneity {
    let multisets: BTreeSet<String> = profiles.iter().map(|p| p.sorted_letters()).collect();
    if multisets.len() != 1 {
        return Homogeneity::Heterogeneous;
    }
    let only = multisets.iter().next().expect("nonempty");
    let distinct: BTreeSet<char> = only.chars().collect();
    if distinct.len() == 1 {
        Homogeneity::StsHomogeneous
    } else {
        Homogeneity::SqsHomogeneous
    }
}

/// Builds a uniformly scrambled Steiner triple system on 15 points by
/// hill climbing: repeatedly pick a point with uncovered pairs and two
/// fresh partners, inserting the triple and evicting the one colliding on
/// the partner pair, until all 35 triples are placed. The walk never
/// decreases the triple count and finishes quickly at this size.
pub fn random_sts15<R: Rng + ?Sized>(rng: &mut R) -> Vec<Triple> {
    const V: usize = 15;
    const NONE: usize = usize::MAX;
    let mut third = [[NONE; V]; V];
    let mut covered = [0usize; V];
    let mut blocks = 0usize;

    let set = |third: &mut [[usize; V]; V], covered: &mut [usize; V], a: usize, b: usize, c: usize, on: bool| {
        for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
            if on {
                third[x][y] = z;
                third[y][x] = z;
            } else {
                third[x][y] = NONE;
                third[y][x] = NONE;
            }
        }
        for p in [a, b, c] {
            if on {
                covered[p] += 2;
            } else {
                covered[p] -= 2;
            }
        }
    };

    while blocks < 35 {
        let x = loop {
            let x = rng.gen_range(0..V);
            if covered[x] < 14 {
                break x;
            }
        };
        let y = loop {
            let y = rng.gen_range(0..V);
            if y != x && third[x][y] == NONE {
                break y;
            }
        };
        let z = loop {
            let z = rng.gen_range(0..V);
            if z != x && z != y && third[x][z] == NONE {
                break z;
            }
        };
        let w = third[y][z];
        if w != NONE {
            set(&mut third, &mut covered, w, y, z, false);
            blocks -= 1;
        }
        set(&mut third, &mut covered, x, y, z, true);
        blocks += 1;
    }

    let mut triples = Vec::with_capacity(35);
    for a in 0..V {
        for b in a + 1..V {
            let c = third[a][b];
            if c != NONE && c > b {
                triples.push(
                    Triple::new((1 << a) | (1 << b) | (1 << c)).expect("three distinct points"),
                );
            }
        }
    }
    triples
}

/// Renders profiles and the homogeneity verdict, one line per coset.
pub fn render_profiles(profiles: &[CodewordProfile]) -> String {
    let mut out = String::new();
    for p in profiles {
        out.push_str(&format!("{:04x} {}\n", p.representative, p.letters));
    }
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for p in profiles {
        *tally.entry(p.sorted_letters()).or_insert(0) += 1;
    }
    out.push_str("distribution:\n");
    for (letters, count) in &tally {
        out.push_str(&format!("  {letters} x{count}\n"));
    }
    out.push_str(&format!("verdict: {}\n", homogeneity_class(profiles)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{double, linear_partition, Permutation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn linear_code() -> Code {
        let p = linear_partition();
        double(&p, &p, &Permutation::identity()).unwrap()
    }

    #[test]
    fn table_rows_are_consistent() {
        let table = StsTypeTable::new();
        for &(number, total, _) in RAW_ROWS {
            let sig = table.signature_of(number).unwrap();
            assert_eq!(sig.total, total);
            assert_eq!(sig.per_point.len(), 15);
            assert_eq!(sig.per_point.iter().sum::<usize>(), 6 * total);
            assert!(sig.per_point.windows(2).all(|w| w[0] >= w[1]));
        }
        // The repaired entries: type 5 gains a ninth 18, type 13 a ninth 12.
        let five = table.signature_of(5).unwrap();
        assert_eq!(five.per_point.iter().filter(|&&c| c == 18).count(), 9);
        let thirteen = table.signature_of(13).unwrap();
        assert_eq!(thirteen.per_point.iter().filter(|&&c| c == 12).count(), 9);
    }

    #[test]
    fn linear_code_is_type_1_everywhere() {
        let code = linear_code();
        let triples = codeword_sts(&code, 0, 3).unwrap();
        assert_eq!(triples.len(), 35);
        let sig = pasch_signature(&triples).unwrap();
        assert_eq!(sig.total, 105);
        assert!(sig.per_point.iter().all(|&c| c == 42));
        assert_eq!(sts_type(&sig), StsType::Known(1));

        let profiles = code_type_profile(&code).unwrap();
        assert_eq!(profiles.len(), 1);
        assert_eq!(profiles[0].letters, "1".repeat(16));
        assert_eq!(homogeneity_class(&profiles), Homogeneity::StsHomogeneous);
    }

    #[test]
    fn fast_count_matches_brute_force_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let triples = random_sts15(&mut rng);
            assert_eq!(triples.len(), 35);
            let sig = pasch_signature(&triples).unwrap();
            assert_eq!(sig.total, pasch_count_brute(&triples));
            assert_eq!(sig.per_point.iter().sum::<usize>(), 6 * sig.total);
        }
    }

    #[test]
    fn exemplar_doublings_are_sts_homogeneous() {
        let p = linear_partition();
        let c9 = double(&p, &p, &Permutation::new([0, 1, 2, 3, 4, 5, 7, 6]).unwrap()).unwrap();
        let profiles = code_type_profile(&c9).unwrap();
        assert_eq!(profiles.len(), 4);
        assert!(profiles.iter().all(|x| x.letters == "2".repeat(16)));
        assert_eq!(homogeneity_class(&profiles), Homogeneity::StsHomogeneous);

        let c8 = double(&p, &p, &Permutation::new([1, 2, 0, 3, 4, 5, 6, 7]).unwrap()).unwrap();
        let profiles = code_type_profile(&c8).unwrap();
        assert_eq!(profiles.len(), 8);
        assert!(profiles.iter().all(|x| x.letters == "3".repeat(16)));
        assert_eq!(homogeneity_class(&profiles), Homogeneity::StsHomogeneous);
    }

    #[test]
    fn untabulated_signatures_come_back_unclassified() {
        use crate::partitions::{enumerate_unit_codes, partition_core, search_partitions};
        // A doubling over a partition with a one-dimensional translation
        // core realizes derived systems whose signatures fall outside the
        // table; they must classify as unknown, not be forced to a row.
        let units = enumerate_unit_codes();
        let mut found = None;
        'outer: for u in &units {
            for q in search_partitions(u, 40).unwrap() {
                if partition_core(&q).dimension() == 1 {
                    found = Some(q);
                    break 'outer;
                }
            }
        }
        let p = linear_partition();
        let code = double(&found.unwrap(), &p, &Permutation::identity()).unwrap();

        let triples = codeword_sts(&code, 0x0056, 8).unwrap();
        let sig = pasch_signature(&triples).unwrap();
        assert_eq!(
            sig.to_string(),
            "31(20,18,14,14,12,12,12,12,11,11,11,11,10,9,9)"
        );
        assert_eq!(pasch_count_brute(&triples), 31);
        assert_eq!(sts_type(&sig), StsType::Unclassified);
        assert_eq!(sts_type(&sig).letter(), '?');

        let letters = |v: u16| -> String {
            (0..16)
                .map(|p| {
                    sts_type(&pasch_signature(&codeword_sts(&code, v, p).unwrap()).unwrap())
                        .letter()
                })
                .collect()
        };
        let a = CodewordProfile {
            representative: 0,
            letters: letters(0),
        };
        let b = CodewordProfile {
            representative: 0x0056,
            letters: letters(0x0056),
        };
        assert!(b.letters.contains('?'));
        assert_ne!(a.sorted_letters(), b.sorted_letters());
        assert_eq!(homogeneity_class(&[a, b]), Homogeneity::Heterogeneous);
    }

    #[test]
    fn signature_rejects_broken_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut triples = random_sts15(&mut rng);
        triples.pop();
        assert!(matches!(
            pasch_signature(&triples),
            Err(Error::NotSteiner(_))
        ));
        // Duplicate a triple: a pair is now covered twice.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut triples = random_sts15(&mut rng);
        triples[0] = triples[1];
        assert!(matches!(
            pasch_signature(&triples),
            Err(Error::NotSteiner(_))
        ));
    }
}
