//! Minimum-distance graphs, per-codeword Steiner quadruple systems, and
//! quotient graphs over kernel subspaces.
//!
//! For an extended 1-perfect code of length 16, the codewords at distance 4
//! from a fixed codeword `v` have difference supports forming a Steiner
//! quadruple system on 16 points (140 quadruples). A subspace `L` of the
//! kernel partitions the code into cosets; because translation by kernel
//! words preserves the code, the quadruple labels between two cosets are the
//! same from every member (this is checked, not assumed), so the
//! minimum-distance graph folds onto a quotient multigraph on the cosets
//! whose edges carry quadruple sets. The multiplicities incident to each
//! quotient vertex, loop included, always sum to 140.

use crate::bitcode::{Code, Quadruple, Subspace};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// The minimum-distance graph of a code: one vertex per codeword, one edge
/// per pair at Hamming distance 4, labeled by the support of the pair's
/// difference.
#[derive(Clone, Debug)]
pub struct MinDistGraph {
    code: Code,
    /// `adjacency[i]` lists `(codeword, label)` for every codeword at
    /// distance 4 from the `i`-th codeword, in increasing codeword order.
    adjacency: Vec<Vec<(u16, Quadruple)>>,
}

impl MinDistGraph {
    pub fn code(&self) -> &Code {
        &self.code
    }

    /// Neighbors of the `i`-th codeword (code order).
    pub fn neighbors(&self, i: usize) -> &[(u16, Quadruple)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }
}

/// Builds the minimum-distance graph. Quadratic in the code size;
/// parallelized over codewords.
pub fn min_dist_graph(code: &Code) -> Result<MinDistGraph> {
    if !crate::bitcode::is_extended_perfect(code)? {
        return Err(Error::NotExtendedPerfect(
            "minimum-distance graph expects an extended 1-perfect code".into(),
        ));
    }
    let masks = code.masks();
    let adjacency: Vec<Vec<(u16, Quadruple)>> = masks
        .par_iter()
        .map(|&v| {
            masks
                .iter()
                .filter(|&&w| (v ^ w).count_ones() == 4)
                .map(|&w| (w, Quadruple::new(v ^ w).expect("distance-4 difference")))
                .collect()
        })
        .collect();
    Ok(MinDistGraph {
        code: code.clone(),
        adjacency,
    })
}

/// The Steiner quadruple system induced at codeword `v`: the supports of the
/// differences to all codewords at distance 4, sorted by support.
pub fn codeword_sqs(code: &Code, v: u16) -> Result<Vec<Quadruple>> {
    if !code.contains(v) {
        return Err(Error::NotACodeword(v));
    }
    let mut quads: Vec<Quadruple> = code
        .masks()
        .iter()
        .filter(|&&w| (v ^ w).count_ones() == 4)
        .map(|&w| Quadruple::new(v ^ w).expect("distance-4 difference"))
        .collect();
    crate::fano::sort_by_support(&mut quads);
    Ok(quads)
}

/// Checks the quadruple-system axiom on 16 points: every one of the 560
/// triples lies in exactly one quadruple.
pub fn is_sqs(quads: &[Quadruple]) -> bool {
    if quads.len() != 140 {
        return false;
    }
    let mut covered = vec![false; 1 << 16];
    for q in quads {
        let m = q.mask();
        for x in q.support() {
            let t = (m & !(1 << x)) as usize;
            if covered[t] {
                return false;
            }
            covered[t] = true;
        }
    }
    true
}

/// A code partitioned into cosets of a subspace of its kernel.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    code: Code,
    subspace: Subspace,
    /// Cosets in increasing order of their least member, which serves as the
    /// representative.
    cosets: Vec<Code>,
}

impl CosetSystem {
    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn cosets(&self) -> &[Code] {
        &self.cosets
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Representatives (least members), in increasing order.
    pub fn reps(&self) -> Vec<u16> {
        self.cosets.iter().map(|c| c.masks()[0]).collect()
    }

    /// Index of the coset containing `word`.
    pub fn index_of(&self, word: u16) -> Option<usize> {
        self.cosets.iter().position(|c| c.contains(word))
    }
}

/// Partitions `code` into cosets of `l`, verifying `l ⊆ kernel(code)` by
/// translating the code along each basis word.
pub fn cosets(code: &Code, l: &Subspace) -> Result<CosetSystem> {
    if code.len() != l.len() {
        return Err(Error::LengthMismatch(code.len(), l.len()));
    }
    for &b in l.basis() {
        if code.translate(b)? != *code {
            return Err(Error::NotInKernel(b));
        }
    }
    let elements: Vec<u16> = l.elements();
    let mut seen = vec![false; 1 << code.len()];
    let mut cosets = Vec::with_capacity(code.size() / elements.len());
    for &w in code.masks() {
        if seen[w as usize] {
            continue;
        }
        let members: Vec<u16> = elements.iter().map(|&e| w ^ e).collect();
        for &m in &members {
            seen[m as usize] = true;
        }
        cosets.push(Code::from_masks(members, code.len())?);
    }
    Ok(CosetSystem {
        code: code.clone(),
        subspace: l.clone(),
        cosets,
    })
}

/// Verifies that the quadruple labels between every coset pair look the same
/// from every member: for cosets `U`, `V`, each `u ∈ U` must see label set
/// `{supp(u ⊕ v) : v ∈ V, d(u,v) = 4}` equal to the weight-4 part of the
/// difference coset `U ⊕ V`. Returns the offending word and coset pair on
/// failure. Parallelized over coset pairs.
pub fn check_foldable(code: &Code, l: &Subspace) -> Result<()> {
    let sys = cosets(code, l)?;
    check_foldable_on(&sys)
}

fn expected_labels(u: &Code, v: &Code) -> Vec<u16> {
    // The difference set of two cosets of L is itself a coset of L, so it
    // can be read off from the representatives alone.
    let rep = u.masks()[0];
    let mut quads: Vec<u16> = v
        .masks()
        .iter()
        .map(|&w| w ^ rep)
        .filter(|m| m.count_ones() == 4)
        .collect();
    quads.sort_unstable();
    quads.dedup();
    quads
}

fn check_foldable_on(sys: &CosetSystem) -> Result<()> {
    let n = sys.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let u = sys.cosets()[i].masks();
            let v = &sys.cosets()[j];
            let expected = expected_labels(&sys.cosets()[i], v);
            // Distinct words of `v` give distinct differences from a fixed
            // member, and every weight-4 difference lies in the difference
            // coset by construction, so the member's label set equals the
            // expected set exactly when the label count matches.
            for &member in u {
                let seen = v
                    .masks()
                    .iter()
                    .filter(|&&w| (member ^ w).count_ones() == 4)
                    .count();
                if seen != expected.len() {
                    return Err(Error::NotFoldable {
                        word: member,
                        pair: (i, j),
                    });
                }
            }
            Ok(())
        })
        .collect::<Result<Vec<()>>>()?;
    Ok(())
}

/// The quotient multigraph of a code over a kernel subspace: vertices are
/// cosets, and the edge between two cosets (a loop when they coincide)
/// carries the weight-4 part of their difference coset as its quadruple set.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    cosets: CosetSystem,
    /// Keyed by vertex index pair `(i, j)` with `i <= j`; only nonempty
    /// quadruple sets are stored. Quadruples are sorted by support.
    edges: BTreeMap<(usize, usize), Vec<Quadruple>>,
}

impl QuotientGraph {
    pub fn coset_system(&self) -> &CosetSystem {
        &self.cosets
    }

    pub fn vertex_count(&self) -> usize {
        self.cosets.len()
    }

    pub fn reps(&self) -> Vec<u16> {
        self.cosets.reps()
    }

    /// Quadruple set of the edge between vertices `i` and `j` (empty slice
    /// if there is no edge).
    pub fn edge_quads(&self, i: usize, j: usize) -> &[Quadruple] {
        let key = (i.min(j), i.max(j));
        self.edges.get(&key).map_or(&[], |v| v.as_slice())
    }

    pub fn loop_quads(&self, i: usize) -> &[Quadruple] {
        self.edge_quads(i, i)
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> usize {
        self.edge_quads(i, j).len()
    }

    /// All stored edges as `(i, j, quads)` with `i <= j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &[Quadruple])> {
        self.edges.iter().map(|(&(i, j), q)| (i, j, q.as_slice()))
    }

    /// Loop multiplicity plus link multiplicities at vertex `i`. Equals 140
    /// for quotients of extended 1-perfect codes of length 16.
    pub fn vertex_multiplicity_sum(&self, i: usize) -> usize {
        (0..self.vertex_count())
            .map(|j| self.multiplicity(i, j))
            .sum()
    }

    /// Renders the edge list: one line `repU repV mult q1,q2,...` per edge,
    /// loops first key order, quadruples sorted.
    pub fn render(&self) -> String {
        let reps = self.reps();
        let width = crate::bitcode::hex_width(self.cosets.code().len());
        let mut out = String::new();
        for (i, j, quads) in self.edges() {
            let list: Vec<String> = quads.iter().map(|q| q.to_string()).collect();
            let _ = writeln!(
                out,
                "{:0w$x} {:0w$x} {} {}",
                reps[i],
                reps[j],
                quads.len(),
                list.join(","),
                w = width
            );
        }
        out
    }
}

/// Folds the code over `l` and builds the quotient graph. Foldability is
/// verified first and its failure propagated, so the quadruple sets stored on
/// edges are guaranteed to be what every coset member sees.
pub fn quotient_graph(code: &Code, l: &Subspace) -> Result<QuotientGraph> {
    let sys = cosets(code, l)?;
    check_foldable_on(&sys)?;
    let n = sys.len();
    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            let d = sys.cosets()[i].masks()[0] ^ sys.cosets()[j].masks()[0];
            let mut quads: Vec<Quadruple> = sys.subspace()
                .elements()
                .into_iter()
                .map(|e| e ^ d)
                .filter(|m| m.count_ones() == 4)
                .map(|m| Quadruple::new(m).expect("filtered to weight 4"))
                .collect();
            if quads.is_empty() {
                continue;
            }
            crate::fano::sort_by_support(&mut quads);
            edges.insert((i, j), quads);
        }
    }
    Ok(QuotientGraph { cosets: sys, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcode::kernel;
    use crate::partitions::{double, linear_partition, Permutation};

    fn linear_code() -> Code {
        let p = linear_partition();
        double(&p, &p, &Permutation::identity()).unwrap()
    }

    fn swap_code() -> Code {
        let p = linear_partition();
        let sigma = Permutation::parse("0,1,2,3,4,5,7,6").unwrap();
        double(&p, &p, &sigma).unwrap()
    }

    #[test]
    fn sqs_at_zero_of_linear_code() {
        let c = linear_code();
        let quads = codeword_sqs(&c, 0).unwrap();
        assert_eq!(quads.len(), 140);
        assert!(is_sqs(&quads));
        // At the zero codeword the SQS is exactly the weight-4 codewords.
        for q in &quads {
            assert!(c.contains(q.mask()));
        }
        assert!(codeword_sqs(&c, 1).is_err());
    }

    #[test]
    fn min_dist_graph_degrees() {
        let c = linear_code();
        let g = min_dist_graph(&c).unwrap();
        for i in 0..c.size() {
            assert_eq!(g.degree(i), 140);
        }
    }

    #[test]
    fn sqs_is_translation_invariant_under_kernel() {
        let c = swap_code();
        let k = kernel(&c);
        let v = c.masks()[17];
        let kword = k.elements()[3];
        let a = codeword_sqs(&c, v).unwrap();
        let b = codeword_sqs(&c, v ^ kword).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cosets_of_trivial_subspace_are_singletons() {
        let c = linear_code();
        let l = Subspace::span([], 16).unwrap();
        let sys = cosets(&c, &l).unwrap();
        assert_eq!(sys.len(), 2048);
        assert_eq!(sys.reps(), c.masks());
    }

    #[test]
    fn cosets_reject_non_kernel_subspace() {
        let c = swap_code();
        // 0x0003 has weight 2, so it cannot lie in the kernel of a
        // distance-4 code.
        let l = Subspace::span([0x0003], 16).unwrap();
        assert!(matches!(cosets(&c, &l), Err(Error::NotInKernel(0x0003))));
    }

    #[test]
    fn linear_code_quotient_is_one_loop_of_140() {
        let c = linear_code();
        let k = kernel(&c);
        assert_eq!(k.dimension(), 11);
        let g = quotient_graph(&c, &k).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.multiplicity(0, 0), 140);
        assert!(is_sqs(g.loop_quads(0)));
        assert_eq!(g.vertex_multiplicity_sum(0), 140);
    }

    #[test]
    fn swap_code_quotient_sums_to_140_everywhere() {
        let c = swap_code();
        let k = kernel(&c);
        assert_eq!(k.dimension(), 9);
        let g = quotient_graph(&c, &k).unwrap();
        assert_eq!(g.vertex_count(), 4);
        for i in 0..4 {
            assert_eq!(g.vertex_multiplicity_sum(i), 140);
        }
        // Loop quadruple sets at every vertex coincide (they are the
        // weight-4 kernel words).
        let base = g.loop_quads(0).to_vec();
        for i in 1..4 {
            assert_eq!(g.loop_quads(i), base.as_slice());
        }
    }

    #[test]
    fn foldability_holds_on_kernel_and_subspaces() {
        let c = swap_code();
        let k = kernel(&c);
        check_foldable(&c, &k).unwrap();
        for sub in k.subspaces_of_codim(1) {
            check_foldable(&c, &sub).unwrap();
        }
    }

    #[test]
    fn quotient_render_format() {
        let c = linear_code();
        let k = kernel(&c);
        let g = quotient_graph(&c, &k).unwrap();
        let text = g.render();
        assert!(text.starts_with("0000 0000 140 "));
        assert!(text.contains("cdef"));
    }
}
