//! Binary words, codes and GF(2) subspaces on at most 16 coordinates.
//!
//! Words are stored as `u16` bitmasks: bit `i` of the integer is coordinate
//! `i`. All of the heavy counting done elsewhere in the crate (kernels,
//! minimum-distance graphs, quotient multiplicities) reduces to XORs and
//! popcounts on these masks, so the representation is kept deliberately flat.
//!
//! A *code* here is just a set of words of one common length; an *extended
//! 1-perfect* code of length `n ∈ {8, 16}` is an even-weight code of size
//! `2^n / 2n` and minimum distance 4. Length 8 gives 16 words (the extended
//! Hamming parameters), length 16 gives 2048.

use crate::error::{Error, Result};
use std::fmt;

/// A binary word of fixed length `len <= 16`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    bits: u16,
    len: u8,
}

impl Word {
    /// Wraps a bitmask, rejecting bits outside `0..len`.
    pub fn new(bits: u16, len: usize) -> Result<Self> {
        if len == 0 || len > 16 {
            return Err(Error::BadLength(len));
        }
        if len < 16 && bits >> len != 0 {
            return Err(Error::WordOutOfRange { word: bits, len });
        }
        Ok(Word {
            bits,
            len: len as u8,
        })
    }

    pub fn bits(self) -> u16 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    /// Hamming weight.
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Coordinates carrying a 1, in increasing order.
    pub fn support(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..16).filter(move |i| bits >> i & 1 == 1)
    }

    /// Parses the zero-padded hexadecimal form used in code files.
    pub fn parse_hex(text: &str, len: usize) -> Result<Self> {
        let digits = hex_width(len);
        if text.len() != digits || !text.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::WordOutOfRange {
                word: 0,
                len, // reported precisely by the file parser, which has line context
            });
        }
        let bits = u16::from_str_radix(text, 16).map_err(|_| Error::BadLength(len))?;
        Word::new(bits, len)
    }
}

/// Number of hex digits used to print a word of the given length.
pub fn hex_width(len: usize) -> usize {
    len.div_ceil(4)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$x}", self.bits, width = hex_width(self.len()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self}, n={})", self.len)
    }
}

/// Hamming distance between two words of equal length.
pub fn distance(u: Word, v: Word) -> Result<u32> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok((u.bits ^ v.bits).count_ones())
}

/// A set of distinct words sharing one length, kept sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct Code {
    len: usize,
    words: Vec<u16>,
}

impl Code {
    /// Builds a code from masks; duplicates collapse, order is normalized.
    pub fn from_masks(masks: impl IntoIterator<Item = u16>, len: usize) -> Result<Self> {
        if len == 0 || len > 16 {
            return Err(Error::BadLength(len));
        }
        let mut words: Vec<u16> = masks.into_iter().collect();
        if len < 16 {
            if let Some(&w) = words.iter().find(|&&w| w >> len != 0) {
                return Err(Error::WordOutOfRange { word: w, len });
            }
        }
        words.sort_unstable();
        words.dedup();
        Ok(Code { len, words })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Number of codewords.
    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Sorted masks of the codewords.
    pub fn masks(&self) -> &[u16] {
        &self.words
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        let len = self.len;
        self.words.iter().map(move |&b| Word { bits: b, len: len as u8 })
    }

    pub fn contains(&self, mask: u16) -> bool {
        self.words.binary_search(&mask).is_ok()
    }

    /// Translates the whole code by `mask` (XOR on every word).
    pub fn translate(&self, mask: u16) -> Result<Code> {
        Code::from_masks(self.words.iter().map(|&w| w ^ mask), self.len)
    }

    /// Membership bitset over all 2^len masks, for hot loops.
    pub fn bitset(&self) -> CodeBitset {
        let mut set = vec![0u64; (1usize << self.len).div_ceil(64)];
        for &w in &self.words {
            set[(w as usize) >> 6] |= 1u64 << (w & 63);
        }
        CodeBitset { set }
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code(n={}, |C|={})", self.len, self.words.len())
    }
}

/// Flat membership bitset for one code.
pub struct CodeBitset {
    set: Vec<u64>,
}

impl CodeBitset {
    #[inline]
    pub fn contains(&self, mask: u16) -> bool {
        self.set[(mask as usize) >> 6] >> (mask & 63) & 1 == 1
    }
}

/// A GF(2) subspace of F_2^len, kept as a row-echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    len: usize,
    /// Echelon basis, sorted by leading bit (descending mask order).
    basis: Vec<u16>,
}

impl Subspace {
    /// Spans the given masks.
    pub fn span(masks: impl IntoIterator<Item = u16>, len: usize) -> Result<Self> {
        if len == 0 || len > 16 {
            return Err(Error::BadLength(len));
        }
        let mut s = Subspace { len, basis: Vec::new() };
        for m in masks {
            if len < 16 && m >> len != 0 {
                return Err(Error::WordOutOfRange { word: m, len });
            }
            s.insert(m);
        }
        Ok(s)
    }

    fn insert(&mut self, mut m: u16) {
        for &b in &self.basis {
            if (m ^ b) < m {
                m ^= b;
            }
        }
        if m != 0 {
            self.basis.push(m);
            self.basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u16] {
        &self.basis
    }

    /// Reduces `m` against the basis; zero means membership.
    pub fn contains(&self, mut m: u16) -> bool {
        for &b in &self.basis {
            if (m ^ b) < m {
                m ^= b;
            }
        }
        m == 0
    }

    /// Enumerates all 2^dim elements (small dimensions only).
    pub fn elements(&self) -> Vec<u16> {
        let mut out = vec![0u16];
        for &b in &self.basis {
            let mut more: Vec<u16> = out.iter().map(|&x| x ^ b).collect();
            out.append(&mut more);
        }
        out.sort_unstable();
        out
    }

    /// All subspaces of the given codimension (0, 1 or 2), as bases.
    ///
    /// Codimension 1 subspaces are kernels of nonzero functionals on the
    /// space; codimension 2 subspaces are kernels of pairs of independent
    /// functionals, and each is produced exactly once.
    pub fn subspaces_of_codim(&self, codim: usize) -> Vec<Subspace> {
        let d = self.dimension();
        let els = self.elements();
        match codim {
            0 => vec![self.clone()],
            1 => {
                if d == 0 {
                    return Vec::new();
                }
                // Functionals live on the coordinates of the basis: express
                // each element in basis coordinates and keep those with zero
                // dot product.
                (1..1u32 << d)
                    .map(|f| self.functional_kernel(&els, f))
                    .collect()
            }
            2 => {
                if d < 2 {
                    return Vec::new();
                }
                let mut out = Vec::new();
                // Unordered pairs {f, g, f^g} of nonzero functionals give the
                // same codim-2 subspace; enumerate each once via f < g < f^g.
                for f in 1..1u32 << d {
                    for g in (f + 1)..1u32 << d {
                        if f ^ g > g {
                            out.push(self.functionals_kernel(&els, &[f, g]));
                        }
                    }
                }
                out
            }
            _ => panic!("codimension {codim} not supported"),
        }
    }

    fn coords_of(&self, mut m: u16) -> u32 {
        let mut c = 0u32;
        for (i, &b) in self.basis.iter().enumerate() {
            if (m ^ b) < m {
                m ^= b;
                c |= 1 << i;
            }
        }
        debug_assert_eq!(m, 0, "element not in subspace");
        c
    }

    fn functional_kernel(&self, els: &[u16], f: u32) -> Subspace {
        self.functionals_kernel(els, &[f])
    }

    fn functionals_kernel(&self, els: &[u16], fs: &[u32]) -> Subspace {
        let keep = els.iter().filter(|&&e| {
            let c = self.coords_of(e);
            fs.iter().all(|&f| (c & f).count_ones() % 2 == 0)
        });
        Subspace::span(keep.copied(), self.len).expect("kernel of functional spans")
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, dim={})", self.len, self.dimension())
    }
}

/// Dimension of the GF(2) span of the codewords.
pub fn rank(code: &Code) -> usize {
    Subspace::span(code.masks().iter().copied(), code.len())
        .expect("code words fit their length")
        .dimension()
}

/// Kernel of a code: all words `x` with `x + C = C`.
///
/// Every candidate translation is tried directly against a membership bitset.
/// The kernel of a nonempty code is always a subspace; when `0 ∈ C` it is a
/// subcode of `C`.
pub fn kernel(code: &Code) -> Subspace {
    let n = code.len();
    let set = code.bitset();
    let mut members = Vec::new();
    'cand: for x in 0..1u32 << n {
        let x = x as u16;
        for &c in code.masks() {
            if !set.contains(c ^ x) {
                continue 'cand;
            }
        }
        members.push(x);
    }
    Subspace::span(members, n).expect("kernel members fit length")
}

/// Removes coordinate `i` from every word, keeping multiplicity collapsed.
pub fn puncture(code: &Code, i: usize) -> Result<Code> {
    if i >= code.len() {
        return Err(Error::BadCoordinate(i, code.len()));
    }
    let low = (1u16 << i) - 1;
    let punctured = code
        .masks()
        .iter()
        .map(|&w| (w & low) | ((w >> 1) & !low));
    Code::from_masks(punctured, code.len() - 1)
}

/// Appends a parity coordinate at the highest index, making weights even.
pub fn extend_parity(code: &Code) -> Result<Code> {
    let n = code.len();
    if n >= 16 {
        return Err(Error::BadLength(n + 1));
    }
    let extended = code
        .masks()
        .iter()
        .map(|&w| w | (((w.count_ones() as u16) & 1) << n));
    Code::from_masks(extended, n + 1)
}

/// Tests the extended 1-perfect property for lengths 8 and 16:
/// size 2^n/(2n), all weights even, minimum distance 4.
pub fn is_extended_perfect(code: &Code) -> Result<bool> {
    let n = code.len();
    if n != 8 && n != 16 {
        return Err(Error::BadLength(n));
    }
    let expected = (1usize << n) / (2 * n);
    if code.size() != expected {
        return Ok(false);
    }
    if code.masks().iter().any(|w| w.count_ones() % 2 == 1) {
        return Ok(false);
    }
    // Minimum distance over all pairs; 16 or 2048 words keep this cheap.
    let words = code.masks();
    for (a, &u) in words.iter().enumerate() {
        for &v in &words[a + 1..] {
            if (u ^ v).count_ones() < 4 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A 4-subset of coordinates, stored as a weight-4 mask.
///
/// Textual form is the sorted support in hex digits: bits {0,1,8,9} print as
/// `0189`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quadruple {
    mask: u16,
}

impl Quadruple {
    pub fn new(mask: u16) -> Result<Self> {
        if mask.count_ones() != 4 {
            return Err(Error::BadMask(mask, 4));
        }
        Ok(Quadruple { mask })
    }

    pub fn mask(self) -> u16 {
        self.mask
    }

    pub fn support(self) -> [usize; 4] {
        let mut out = [0usize; 4];
        let mut k = 0;
        for i in 0..16 {
            if self.mask >> i & 1 == 1 {
                out[k] = i;
                k += 1;
            }
        }
        out
    }

    /// Parses four hex digits, e.g. `"9ace"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut mask = 0u16;
        for ch in text.chars() {
            let d = ch.to_digit(16).ok_or(Error::BadMask(0, 4))? as u16;
            mask |= 1 << d;
        }
        Quadruple::new(mask)
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.support() {
            write!(f, "{i:x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quadruple({self})")
    }
}

/// A 3-subset of coordinates on 15 points, stored as a weight-3 mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    mask: u16,
}

impl Triple {
    pub fn new(mask: u16) -> Result<Self> {
        if mask.count_ones() != 3 {
            return Err(Error::BadMask(mask, 3));
        }
        Ok(Triple { mask })
    }

    pub fn mask(self) -> u16 {
        self.mask
    }

    pub fn support(self) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut k = 0;
        for i in 0..16 {
            if self.mask >> i & 1 == 1 {
                out[k] = i;
                k += 1;
            }
        }
        out
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.support() {
            write!(f, "{i:x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Triple({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn even_space(n: usize) -> Code {
        Code::from_masks((0..1u32 << n).map(|w| w as u16).filter(|w| w.count_ones() % 2 == 0), n)
            .unwrap()
    }

    #[test]
    fn distance_counts_differing_coordinates() {
        let u = Word::new(0b0000_1111, 8).unwrap();
        let v = Word::new(0b0011_1100, 8).unwrap();
        assert_eq!(distance(u, v).unwrap(), 4);
        assert_eq!(distance(u, u).unwrap(), 0);
    }

    #[test]
    fn distance_rejects_length_mismatch() {
        let u = Word::new(1, 8).unwrap();
        let v = Word::new(1, 16).unwrap();
        assert!(distance(u, v).is_err());
    }

    #[test]
    fn word_hex_roundtrip() {
        let w = Word::new(0x0189, 16).unwrap();
        assert_eq!(w.to_string(), "0189");
        assert_eq!(Word::parse_hex("0189", 16).unwrap(), w);
        let v = Word::new(0x0f, 8).unwrap();
        assert_eq!(v.to_string(), "0f");
    }

    #[test]
    fn kernel_of_linear_code_is_itself() {
        // The even-weight code of length 4 is linear, so it is its own kernel.
        let c = even_space(4);
        let k = kernel(&c);
        assert_eq!(k.dimension(), 3);
        for &w in c.masks() {
            assert!(k.contains(w));
        }
    }

    #[test]
    fn kernel_of_singleton_nonzero_is_trivial() {
        let c = Code::from_masks([0b0110u16], 4).unwrap();
        assert_eq!(kernel(&c).dimension(), 0);
    }

    #[test]
    fn kernel_of_translate_matches_original() {
        let c = even_space(4);
        let t = c.translate(0b0001).unwrap(); // odd-weight coset
        assert_eq!(kernel(&t).dimension(), 3);
    }

    #[test]
    fn rank_of_even_space() {
        assert_eq!(rank(&even_space(5)), 4);
    }

    #[test]
    fn puncture_then_extend_recovers_even_code() {
        let c = even_space(6);
        let p = puncture(&c, 5).unwrap();
        assert_eq!(p.len(), 5);
        let back = extend_parity(&p).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn puncture_middle_coordinate_shifts_high_bits() {
        let c = Code::from_masks([0b101u16], 3).unwrap();
        let p = puncture(&c, 1).unwrap();
        assert_eq!(p.masks(), &[0b11]);
    }

    #[test]
    fn subspace_span_and_membership() {
        let s = Subspace::span([0b0011u16, 0b0110], 4).unwrap();
        assert_eq!(s.dimension(), 2);
        let els = s.elements();
        assert_eq!(els, vec![0b0000, 0b0011, 0b0101, 0b0110]);
        for w in 0..16u16 {
            assert_eq!(s.contains(w), els.contains(&w), "word {w:04b}");
        }
    }

    #[test]
    fn codim_subspace_counts() {
        let s = Subspace::span([1u16, 2, 4, 8], 4).unwrap();
        assert_eq!(s.subspaces_of_codim(1).len(), 15); // 2^4 - 1 functionals
        assert_eq!(s.subspaces_of_codim(2).len(), 35); // (15 * 14 / 2) / 3
        for t in s.subspaces_of_codim(2) {
            assert_eq!(t.dimension(), 2);
        }
    }

    #[test]
    fn quadruple_display_and_parse() {
        let q = Quadruple::new(0b0000_0011_0000_0011).unwrap();
        assert_eq!(q.to_string(), "0189");
        assert_eq!(Quadruple::parse("0189").unwrap(), q);
        assert_eq!(Quadruple::parse("9ace").unwrap().to_string(), "9ace");
    }

    #[test]
    fn quadruple_rejects_wrong_weight() {
        assert!(Quadruple::new(0b0111).is_err());
    }
}
