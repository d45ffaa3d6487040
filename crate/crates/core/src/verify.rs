//! Mechanical verification of the scheduled quotient-graph structure of
//! doubled codes.
//!
//! For a doubled code whose kernel has dimension 5..=9, the verifier
//! recovers the two length-8 partitions and the pairing permutation, builds
//! the kernel quotient of the minimum-distance graph, and checks the computed
//! loops and links against [`crate::fano::block_schedule`]: vertex counts,
//! the frozen loop multiplicities, loop composition out of the named frame
//! blocks, and the decomposition of every link into whole quarters of
//! matching products plus at most one structural block. Every check is
//! reported individually, so a failing code yields a precise account of
//! which parts of the schedule it violates and what it realizes instead.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::bitcode::{is_extended_perfect, kernel, rank, Code, Quadruple, Subspace};
use crate::error::{Error, Result};
use crate::fano::{block_schedule, build_fano_sets, high_mirror_alt, BlockId};
use crate::partitions::{
    class_matching, decompose_doubling, double, linear_partition, ExtendedPartition, PairMatching,
    Permutation,
};
use crate::sqsgraph::quotient_graph;

/// One named check of the verifier, with a human-readable detail line.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The full outcome of verifying one code against the schedule.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub kappa: usize,
    pub rank: usize,
    pub vertices: usize,
    pub loop_multiplicity: usize,
    /// Whether the two halves were swapped before analysis to put the
    /// larger translation core on the high octet.
    pub swapped_halves: bool,
    pub checks: Vec<Check>,
    loops_section: String,
    links_section: String,
    tables_section: String,
}

impl VerifyReport {
    /// True when every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// The check with the given name, if present.
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Renders the report deterministically.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "VERDICT: {}", if self.passed() { "PASS" } else { "FAIL" });
        let _ = writeln!(
            out,
            "kappa={} rank={} vertices={} loop={} halves_swapped={}",
            self.kappa,
            self.rank,
            self.vertices,
            self.loop_multiplicity,
            if self.swapped_halves { "yes" } else { "no" }
        );
        let _ = writeln!(out, "CHECKS:");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  [{}] {}: {}",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        out.push_str(&self.loops_section);
        out.push_str(&self.links_section);
        out.push_str(&self.tables_section);
        out
    }
}

/// Swaps the two octets of every codeword.
fn swap_halves(code: &Code) -> Code {
    let masks: Vec<u16> = code.masks().iter().map(|&w| w.rotate_left(8)).collect();
    Code::from_masks(masks, 16).expect("octet swap keeps length 16")
}

/// Applies a permutation of 0..=7 to the set bits of a low-octet mask.
fn apply_octet_perm(mask: u16, perm: &[u8; 8]) -> u16 {
    let mut out = 0u16;
    for i in 0..8 {
        if mask & (1 << i) != 0 {
            out |= 1 << perm[i];
        }
    }
    out
}

/// Iterates all 40320 permutations of 0..=7 and returns the first accepted
/// by the predicate.
fn find_octet_perm(mut accept: impl FnMut(&[u8; 8]) -> bool) -> Option<[u8; 8]> {
    let mut perm: [u8; 8] = [0, 1, 2, 3, 4, 5, 6, 7];
    // Heap's algorithm, iterative form.
    let mut c = [0usize; 8];
    if accept(&perm) {
        return Some(perm);
    }
    let mut i = 0;
    while i < 8 {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if accept(&perm) {
                return Some(perm);
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    None
}

fn maps_onto(src: &[u16], dst: &BTreeSet<u16>, perm: &[u8; 8]) -> bool {
    src.len() == dst.len() && src.iter().all(|&m| dst.contains(&apply_octet_perm(m, perm)))
}

/// Splits weight-4 masks by octet: entirely low, entirely high (returned
/// shifted down to 0..=7), or mixed two-and-two.
fn split_quads(masks: impl IntoIterator<Item = u16>) -> (Vec<u16>, Vec<u16>, Vec<u16>) {
    let (mut low, mut high, mut mixed) = (Vec::new(), Vec::new(), Vec::new());
    for m in masks {
        if m & 0xff00 == 0 {
            low.push(m);
        } else if m & 0x00ff == 0 {
            high.push(m >> 8);
        } else {
            mixed.push(m);
        }
    }
    (low, high, mixed)
}

fn quad_texts(masks: &[u16]) -> String {
    let mut quads: Vec<Quadruple> = masks
        .iter()
        .map(|&m| Quadruple::new(m).expect("weight-4 masks"))
        .collect();
    crate::fano::sort_by_support(&mut quads);
    let texts: Vec<String> = quads.iter().map(|q| q.to_string()).collect();
    texts.join(" ")
}

/// True when the set is closed under complement within the low octet.
fn complement_closed(masks: &[u16]) -> bool {
    let set: BTreeSet<u16> = masks.iter().copied().collect();
    set.iter().all(|&m| set.contains(&(!m & 0xff)))
}

/// A link's mixed quadruples grouped into matching products: each product is
/// a full right matching paired with the left pairs that carry it.
struct ProductPart {
    right: PairMatching,
    left_pairs: Vec<u16>,
    /// Left pairs extend to a full matching present in the link.
    whole: bool,
}

/// Decomposition of one link.
struct LinkPart {
    u: usize,
    v: usize,
    mult: usize,
    low: Vec<u16>,
    high: Vec<u16>,
    products: Vec<ProductPart>,
    /// Mixed masks that failed to group into products.
    residue: Vec<u16>,
}

fn decompose_link(u: usize, v: usize, quads: &[Quadruple]) -> LinkPart {
    let (low, high, mixed) = split_quads(quads.iter().map(|q| q.mask()));
    let mut by_left: BTreeMap<u16, BTreeSet<u16>> = BTreeMap::new();
    for &m in &mixed {
        by_left.entry(m & 0xff).or_default().insert(m >> 8);
    }
    let mut by_right: BTreeMap<[u16; 4], Vec<u16>> = BTreeMap::new();
    let mut residue = Vec::new();
    for (left_pair, rights) in by_left {
        let masks: Vec<u16> = rights.iter().copied().collect();
        match <[u16; 4]>::try_from(masks.clone()).ok().and_then(|m| PairMatching::from_pair_masks(m).ok()) {
            Some(matching) => by_right
                .entry(matching.pair_masks())
                .or_default()
                .push(left_pair),
            None => residue.extend(masks.iter().map(|&r| left_pair | (r << 8))),
        }
    }
    let mut products = Vec::new();
    for (right_masks, left_pairs) in by_right {
        let right = PairMatching::from_pair_masks(right_masks).expect("grouped by valid matching");
        let whole = left_pairs.len() == 4
            && <[u16; 4]>::try_from(left_pairs.clone())
                .ok()
                .map(|m| PairMatching::from_pair_masks(m).is_ok())
                .unwrap_or(false);
        let disjoint = {
            let union: u16 = left_pairs.iter().fold(0, |a, &b| a | b);
            union.count_ones() as usize == 2 * left_pairs.len()
        };
        if disjoint {
            products.push(ProductPart {
                right,
                left_pairs,
                whole,
            });
        } else {
            for &lp in &left_pairs {
                residue.extend(right.pair_masks().iter().map(|&r| lp | (r << 8)));
            }
        }
    }
    LinkPart {
        u,
        v,
        mult: quads.len(),
        low,
        high,
        products,
        residue,
    }
}

/// Which mirror-image family the computed loops of a plainly constructed
/// kernel-dimension-8 code realize: returns `"standard"` when the loop's
/// high part maps onto the frame's own mirror family under a coordinate
/// relabeling and `"variant"` when it instead maps onto the two-entry
/// variant of [`high_mirror_alt`]. Used as a runtime lock: the schedule is
/// trusted only because this comes back `"standard"`.
pub fn lock_mirror_variant() -> Result<&'static str> {
    let p = linear_partition();
    let sigma = Permutation::new([1, 2, 0, 3, 4, 5, 6, 7])?;
    let code = double(&p, &p, &sigma)?;
    let k = kernel(&code);
    let g = quotient_graph(&code, &k)?;
    let (_, high, _) = split_quads(g.loop_quads(0).iter().map(|q| q.mask()));

    let fb = build_fano_sets();
    let standard: BTreeSet<u16> = fb.high_mirror.iter().map(|q| q.mask() >> 8).collect();
    let alt: BTreeSet<u16> = high_mirror_alt().iter().map(|q| q.mask() >> 8).collect();
    if find_octet_perm(|p| maps_onto(&high, &standard, p)).is_some() {
        Ok("standard")
    } else if find_octet_perm(|p| maps_onto(&high, &alt, p)).is_some() {
        Ok("variant")
    } else {
        Err(Error::NotExtendedPerfect(
            "computed loop matches neither mirror family".into(),
        ))
    }
}

fn push(checks: &mut Vec<Check>, name: &'static str, passed: bool, detail: String) {
    checks.push(Check {
        name,
        passed,
        detail,
    });
}

/// Verifies a doubled code against the schedule for its kernel dimension.
///
/// Returns an error when the code is not an extended 1-perfect doubling or
/// its kernel dimension falls outside 5..=9; otherwise returns the report,
/// whose [`VerifyReport::passed`] answers whether every check succeeded.
pub fn verify_code(code: &Code) -> Result<VerifyReport> {
    if code.len() != 16 {
        return Err(Error::BadLength(code.len()));
    }
    if !is_extended_perfect(code)? {
        return Err(Error::NotExtendedPerfect(
            "verification applies to extended 1-perfect codes of length 16".into(),
        ));
    }
    let k0 = kernel(code);
    let kappa = k0.dimension();
    if !(5..=9).contains(&kappa) {
        return Err(Error::KappaOutOfRange(kappa));
    }
    let schedule = block_schedule(kappa)?;

    // Put the side with the larger translation core on the high octet, where
    // the schedule expects the full mirror family.
    let core_dims = |k: &Subspace| -> (usize, usize) {
        let els = k.elements();
        let left: Vec<u16> = els
            .iter()
            .filter(|&&w| w & 0xff00 == 0)
            .map(|&w| w & 0xff)
            .collect();
        let right: Vec<u16> = els
            .iter()
            .filter(|&&w| w & 0x00ff == 0)
            .map(|&w| w >> 8)
            .collect();
        (
            Subspace::span(left, 8).expect("projection spans").dimension(),
            Subspace::span(right, 8).expect("projection spans").dimension(),
        )
    };
    let (dim_l, dim_r) = core_dims(&k0);
    let swapped = dim_r < dim_l;
    let working = if swapped { swap_halves(code) } else { code.clone() };
    let k = if swapped { kernel(&working) } else { k0 };

    let (left_partition, right_partition, sigma) = decompose_doubling(&working)?;
    let graph = quotient_graph(&working, &k)?;
    let reps = graph.reps();
    let n = reps.len();
    let mut checks = Vec::new();

    push(
        &mut checks,
        "vertex count",
        n == schedule.expected_vertices,
        format!("{} vertices, schedule expects {}", n, schedule.expected_vertices),
    );

    let sums: BTreeSet<usize> = (0..n).map(|i| graph.vertex_multiplicity_sum(i)).collect();
    push(
        &mut checks,
        "vertex multiplicity sums",
        sums == BTreeSet::from([140]),
        format!("sums {:?}, schedule expects all 140", sums),
    );

    let loop_mults: BTreeSet<usize> = (0..n).map(|i| graph.multiplicity(i, i)).collect();
    let loop_mult = *loop_mults.iter().next().expect("at least one vertex");
    push(
        &mut checks,
        "loop multiplicity constant",
        loop_mults.len() == 1,
        format!("distinct per-vertex loop multiplicities {:?}", loop_mults),
    );
    push(
        &mut checks,
        "loop multiplicity",
        loop_mult == schedule.loop_multiplicity,
        format!(
            "computed {}, schedule expects {}",
            loop_mult, schedule.loop_multiplicity
        ),
    );

    // Loop composition.
    let fb = build_fano_sets();
    let (loop_low, loop_high, loop_mixed) = split_quads(graph.loop_quads(0).iter().map(|q| q.mask()));
    let z_set: BTreeSet<u16> = fb.high_mirror.iter().map(|q| q.mask() >> 8).collect();
    let scheduled_low: BTreeSet<u16> = schedule
        .loop_blocks
        .iter()
        .filter(|&&b| b != BlockId::Z)
        .flat_map(|&b| fb.block(b))
        .map(|q| q.mask())
        .collect();

    let right_map = find_octet_perm(|p| maps_onto(&loop_high, &z_set, p));
    let left_loop_map = find_octet_perm(|p| maps_onto(&loop_low, &scheduled_low, p));

    let class_of_left: Vec<Option<usize>> = {
        let mut v = vec![None; 256];
        for (i, c) in left_partition.classes().iter().enumerate() {
            for &w in c.masks() {
                v[w as usize] = Some(i);
            }
        }
        v
    };
    let kernel_elements = k.elements();
    let classes_of_vertex = |u: usize| -> BTreeSet<usize> {
        kernel_elements
            .iter()
            .filter_map(|&ke| class_of_left[((reps[u] ^ ke) & 0xff) as usize])
            .collect()
    };

    // The loop's mixed part must be empty, or exactly one whole matching
    // product of two class matchings when the schedule says so.
    let loop_product = {
        let fake = decompose_link(0, 0, graph.loop_quads(0));
        let mut label = None;
        if schedule.loop_has_product {
            if let [p] = &fake.products[..] {
                if p.whole && fake.residue.is_empty() {
                    let left = PairMatching::from_pair_masks(
                        <[u16; 4]>::try_from(p.left_pairs.clone()).expect("whole product"),
                    )
                    .expect("whole product");
                    label = Some(format!("{} x {}", left.label(), p.right.label()));
                }
            }
        }
        label
    };
    let mixed_ok = if schedule.loop_has_product {
        loop_product.is_some() && loop_mixed.len() == 16
    } else {
        loop_mixed.is_empty()
    };

    let composition_ok = right_map.is_some() && left_loop_map.is_some() && mixed_ok;
    let loop_block_names = schedule
        .loop_blocks
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join(" ∪ ");
    push(
        &mut checks,
        "loop composition",
        composition_ok,
        format!(
            "scheduled {}{}: high part {} of 14 onto Z ({}), low part {} of {} onto the rest ({}), mixed part {} ({})",
            loop_block_names,
            if schedule.loop_has_product {
                " ∪ one matching product"
            } else {
                ""
            },
            loop_high.len(),
            if right_map.is_some() { "mapped" } else { "no map" },
            loop_low.len(),
            scheduled_low.len(),
            if left_loop_map.is_some() { "mapped" } else { "no map" },
            loop_mixed.len(),
            match (&loop_product, schedule.loop_has_product) {
                (Some(l), _) => format!("product {l}"),
                (None, true) => "no whole product".into(),
                (None, false) =>
                    if loop_mixed.is_empty() {
                        "none scheduled".into()
                    } else {
                        "unscheduled".into()
                    },
            }
        ),
    );

    // Link decomposition.
    let mut links: Vec<LinkPart> = Vec::new();
    for (u, v, quads) in graph.edges() {
        if u != v {
            links.push(decompose_link(u, v, quads));
        }
    }
    links.sort_by_key(|l| (l.u, l.v));

    let structural_sizes: BTreeMap<usize, Vec<BlockId>> = {
        let mut m: BTreeMap<usize, Vec<BlockId>> = BTreeMap::new();
        for &b in &schedule.structural_blocks {
            m.entry(fb.block(b).len()).or_default().push(b);
        }
        m
    };

    let mut split_ok = true;
    let mut split_notes: Vec<String> = Vec::new();
    for l in &links {
        if !l.high.is_empty() {
            split_ok = false;
            split_notes.push(format!(
                "link {}-{} carries {} high-octet quadruples",
                l.u,
                l.v,
                l.high.len()
            ));
        }
        if !l.residue.is_empty() {
            split_ok = false;
            split_notes.push(format!(
                "link {}-{} has {} mixed quadruples outside whole right matchings",
                l.u,
                l.v,
                l.residue.len()
            ));
        }
        if !l.low.is_empty() && structural_sizes.is_empty() {
            split_ok = false;
            split_notes.push(format!(
                "link {}-{} carries a structural part of size {} but the schedule allows none",
                l.u,
                l.v,
                l.low.len()
            ));
        }
    }
    push(
        &mut checks,
        "link decomposition",
        split_ok,
        if split_notes.is_empty() {
            "every link splits into matching-product quarters plus at most one structural part".into()
        } else {
            split_notes.join("; ")
        },
    );

    // Quarter-count rule per kernel dimension.
    let mut rule_ok = true;
    let mut rule_notes: Vec<String> = Vec::new();
    for l in &links {
        if schedule.whole_products_per_link > 0 {
            let whole = l.products.iter().filter(|p| p.whole).count();
            if whole != schedule.whole_products_per_link
                || l.products.len() != schedule.whole_products_per_link
                || !l.low.is_empty()
            {
                rule_ok = false;
                rule_notes.push(format!(
                    "link {}-{}: {} whole products of {} expected, structural part {}",
                    l.u,
                    l.v,
                    whole,
                    schedule.whole_products_per_link,
                    l.low.len()
                ));
            }
        } else {
            let (lo, hi) = schedule.loqs_per_product;
            for p in &l.products {
                if p.whole || !(lo..=hi).contains(&p.left_pairs.len()) {
                    rule_ok = false;
                    rule_notes.push(format!(
                        "link {}-{}: product with {} quarters outside {}..={}",
                        l.u,
                        l.v,
                        p.left_pairs.len(),
                        lo,
                        hi
                    ));
                }
            }
            if l.products.is_empty() && l.low.is_empty() {
                rule_ok = false;
                rule_notes.push(format!("link {}-{} is empty", l.u, l.v));
            }
        }
    }
    if rule_notes.len() > 6 {
        let extra = rule_notes.len() - 6;
        rule_notes.truncate(6);
        rule_notes.push(format!("... and {extra} more"));
    }
    push(
        &mut checks,
        "link quarter rule",
        rule_ok,
        if rule_notes.is_empty() {
            match schedule.whole_products_per_link {
                0 => format!(
                    "every product contributes {}..={} quarters per link",
                    schedule.loqs_per_product.0, schedule.loqs_per_product.1
                ),
                w => format!("every link is exactly {w} whole matching product(s)"),
            }
        } else {
            rule_notes.join("; ")
        },
    );

    // Structural blocks: one left-octet relabeling must carry the loop's low
    // part onto the scheduled loop blocks and every structural link part onto
    // a scheduled block simultaneously.
    let structural_parts: Vec<&LinkPart> = links.iter().filter(|l| !l.low.is_empty()).collect();
    let allowed_blocks: Vec<BTreeSet<u16>> = schedule
        .structural_blocks
        .iter()
        .map(|&b| fb.block(b).iter().map(|q| q.mask()).collect())
        .collect();
    let joint_left_map = if structural_parts.is_empty() {
        left_loop_map
    } else {
        find_octet_perm(|p| {
            maps_onto(&loop_low, &scheduled_low, p)
                && structural_parts.iter().all(|l| {
                    allowed_blocks
                        .iter()
                        .any(|blk| maps_onto(&l.low, blk, p))
                })
        })
    };
    let observed_sizes: Vec<String> = {
        let mut tally: BTreeMap<String, usize> = BTreeMap::new();
        for l in &structural_parts {
            let key = format!(
                "{}{}",
                l.low.len(),
                if complement_closed(&l.low) { "cc" } else { "" }
            );
            *tally.entry(key).or_insert(0) += 1;
        }
        tally.iter().map(|(k, c)| format!("{k} x{c}")).collect()
    };
    push(
        &mut checks,
        "structural blocks scheduled",
        joint_left_map.is_some(),
        format!(
            "allowed blocks {:?} (sizes {:?}); observed structural parts [{}] ({}; cc = closed under octet complement)",
            schedule
                .structural_blocks
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>(),
            structural_sizes.keys().collect::<Vec<_>>(),
            observed_sizes.join(", "),
            if joint_left_map.is_some() {
                "jointly mapped with the loop"
            } else {
                "no joint relabeling exists"
            }
        ),
    );

    // Kernel dimension 9: some index-2 subspace of the kernel must fold the
    // code onto the 8-vertex quotient whose loops realize the whole frame.
    if kappa == 9 {
        let mut found = 0usize;
        for l in k.subspaces_of_codim(1) {
            let (low, high, mixed) = split_quads(
                l.elements()
                    .into_iter()
                    .filter(|m| m.count_ones() == 4),
            );
            if low.len() == 14 && high.len() == 14 && mixed.is_empty() {
                let fits_z = find_octet_perm(|p| maps_onto(&high, &z_set, p)).is_some();
                let xy: BTreeSet<u16> = fb
                    .through_zero
                    .iter()
                    .chain(&fb.line_complements)
                    .map(|q| q.mask())
                    .collect();
                let fits_xy = find_octet_perm(|p| maps_onto(&low, &xy, p)).is_some();
                if fits_z && fits_xy {
                    found += 1;
                }
            }
        }
        push(
            &mut checks,
            "index-2 subspace",
            found > 0,
            format!(
                "{found} of 511 index-2 kernel subspaces give the 8-vertex quotient with loop 28 composed of the whole frame"
            ),
        );
    }

    // ---- report sections ----

    // Vertex labels: class of the representative's left half, then a running
    // index among the vertices sharing that class.
    let mut labels = vec![String::new(); n];
    {
        let mut counters: BTreeMap<usize, usize> = BTreeMap::new();
        for u in 0..n {
            let klass = *classes_of_vertex(u).iter().next().expect("nonempty class set");
            let c = counters.entry(klass).or_insert(0);
            labels[u] = format!("{}_{}", klass, c);
            *c += 1;
        }
    }

    let mut loops_section = String::new();
    let _ = writeln!(loops_section, "LOOPS:");
    let _ = writeln!(
        loops_section,
        "  every vertex: multiplicity {} = low {} + high {} + mixed {}",
        loop_mult,
        loop_low.len(),
        loop_high.len(),
        loop_mixed.len()
    );
    let _ = writeln!(loops_section, "  low  {{{}}}", quad_texts(&loop_low));
    let _ = writeln!(
        loops_section,
        "  high {{{}}}",
        quad_texts(&loop_high.iter().map(|&m| m << 8).collect::<Vec<_>>())
    );
    if let Some(label) = &loop_product {
        let _ = writeln!(loops_section, "  mixed: whole product {label}");
    } else if !loop_mixed.is_empty() {
        let _ = writeln!(loops_section, "  mixed {{{}}}", quad_texts(&loop_mixed));
    }
    if let Some(p) = right_map {
        let _ = writeln!(
            loops_section,
            "  right relabeling onto Z: {}",
            p.map(|x| x.to_string()).join(",")
        );
    }
    if let Some(p) = joint_left_map.or(left_loop_map) {
        let _ = writeln!(
            loops_section,
            "  left relabeling onto the scheduled low blocks: {}",
            p.map(|x| x.to_string()).join(",")
        );
    }

    let mut links_section = String::new();
    let _ = writeln!(links_section, "LINKS:");
    for l in &links {
        let mut parts: Vec<String> = Vec::new();
        if !l.low.is_empty() {
            let block_name = joint_left_map
                .and_then(|p| {
                    schedule
                        .structural_blocks
                        .iter()
                        .find(|&&b| {
                            let blk: BTreeSet<u16> =
                                fb.block(b).iter().map(|q| q.mask()).collect();
                            maps_onto(&l.low, &blk, &p)
                        })
                        .map(|b| b.to_string())
                })
                .unwrap_or_else(|| {
                    format!(
                        "unscheduled size {}{}",
                        l.low.len(),
                        if complement_closed(&l.low) {
                            ", complement-closed"
                        } else {
                            ""
                        }
                    )
                });
            parts.push(format!("structural [{}] {{{}}}", block_name, quad_texts(&l.low)));
        }
        for p in &l.products {
            let (label, classes) = product_label(
                p,
                &classes_of_vertex(l.u),
                &classes_of_vertex(l.v),
                &left_partition,
                &right_partition,
                &sigma,
            );
            let quarters: Vec<String> = p
                .left_pairs
                .iter()
                .map(|&lp| {
                    let a = lp.trailing_zeros();
                    let b = 15 - lp.leading_zeros();
                    format!("{a}{b}")
                })
                .collect();
            parts.push(format!(
                "product {label}{} [{}]{}",
                if p.whole {
                    " whole".to_string()
                } else {
                    format!(" quarters {{{}}}", quarters.join(","))
                },
                4 * p.left_pairs.len(),
                classes.map(|s| format!(" classes {s}")).unwrap_or_default()
            ));
        }
        if !l.residue.is_empty() {
            parts.push(format!("unstructured {{{}}}", quad_texts(&l.residue)));
        }
        let _ = writeln!(
            links_section,
            "  {}-{} ({:04x}-{:04x}) mult {}: {}",
            labels[l.u],
            labels[l.v],
            reps[l.u],
            reps[l.v],
            l.mult,
            parts.join(" + ")
        );
    }

    // Tables: the multiplicity matrix (full when small, per-class blocks and
    // a cross-class summary otherwise) and the quarter assignment strings.
    let mut tables_section = String::new();
    let _ = writeln!(tables_section, "TABLES:");
    let _ = writeln!(
        tables_section,
        "  vertices: {}",
        (0..n)
            .map(|u| format!("{}={:04x}", labels[u], reps[u]))
            .collect::<Vec<_>>()
            .join(" ")
    );
    if n <= 8 {
        let _ = writeln!(
            tables_section,
            "  multiplicities:\n{}",
            render_matrix(&labels, |u, v| graph.multiplicity(u, v))
        );
    } else {
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for u in 0..n {
            let klass = *classes_of_vertex(u).iter().next().expect("nonempty");
            by_class.entry(klass).or_default().push(u);
        }
        for (klass, vs) in &by_class {
            let sub_labels: Vec<String> = vs.iter().map(|&u| labels[u].clone()).collect();
            let _ = writeln!(
                tables_section,
                "  class {} block:\n{}",
                klass,
                render_matrix(&sub_labels, |a, b| graph.multiplicity(vs[a], vs[b]))
            );
        }
        let mut cross: BTreeMap<(usize, usize), BTreeMap<usize, usize>> = BTreeMap::new();
        for l in &links {
            let ku = *classes_of_vertex(l.u).iter().next().expect("nonempty");
            let kv = *classes_of_vertex(l.v).iter().next().expect("nonempty");
            if ku != kv {
                *cross
                    .entry((ku.min(kv), ku.max(kv)))
                    .or_default()
                    .entry(l.mult)
                    .or_insert(0) += 1;
            }
        }
        for ((a, b), mults) in cross {
            let parts: Vec<String> = mults
                .iter()
                .map(|(m, c)| format!("{m} x{c}"))
                .collect();
            let _ = writeln!(
                tables_section,
                "  classes {a}-{b}: link multiplicities {}",
                parts.join(", ")
            );
        }
    }
    // Quarter assignment per product label: which left pairs are present.
    let mut assignment: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for l in &links {
        for p in &l.products {
            if p.whole {
                continue;
            }
            let (label, _) = product_label(
                p,
                &classes_of_vertex(l.u),
                &classes_of_vertex(l.v),
                &left_partition,
                &right_partition,
                &sigma,
            );
            let full = full_left_matching(p, &classes_of_vertex(l.u), &classes_of_vertex(l.v), &left_partition, &sigma, &right_partition);
            let bits = match full {
                Some(m) => m
                    .pair_masks()
                    .iter()
                    .map(|pm| {
                        if p.left_pairs.contains(pm) {
                            '1'
                        } else {
                            '0'
                        }
                    })
                    .collect::<String>(),
                None => format!("{} quarters", p.left_pairs.len()),
            };
            assignment
                .entry(label)
                .or_default()
                .push(format!("{}-{}: {}", labels[l.u], labels[l.v], bits));
        }
    }
    if !assignment.is_empty() {
        let _ = writeln!(tables_section, "  quarter assignment:");
        for (label, rows) in assignment {
            let _ = writeln!(tables_section, "    {label}: {}", rows.join("  "));
        }
    }

    Ok(VerifyReport {
        kappa,
        rank: rank(&working),
        vertices: n,
        loop_multiplicity: loop_mult,
        swapped_halves: swapped,
        checks,
        loops_section,
        links_section,
        tables_section,
    })
}

/// The full left class matching a partial product belongs to, when the
/// classes met by the two vertices identify one.
fn full_left_matching(
    p: &ProductPart,
    cu: &BTreeSet<usize>,
    cv: &BTreeSet<usize>,
    left: &ExtendedPartition,
    sigma: &Permutation,
    right: &ExtendedPartition,
) -> Option<PairMatching> {
    for &i in cu {
        for &j in cv {
            if class_matching(right, sigma.apply(i), sigma.apply(j))
                .map(|m| m == p.right)
                .unwrap_or(false)
            {
                if let Ok(m) = class_matching(left, i, j) {
                    if p.left_pairs.iter().all(|lp| m.pair_masks().contains(lp)) {
                        return Some(m);
                    }
                }
            }
        }
    }
    None
}

/// Label of a product part: left matching label (or raw pairs when the left
/// side does not extend to a class matching) times the right matching label,
/// plus the class pair realizing it when identifiable.
fn product_label(
    p: &ProductPart,
    cu: &BTreeSet<usize>,
    cv: &BTreeSet<usize>,
    left: &ExtendedPartition,
    right: &ExtendedPartition,
    sigma: &Permutation,
) -> (String, Option<String>) {
    let mut classes = None;
    for &i in cu {
        for &j in cv {
            let right_match = class_matching(right, sigma.apply(i), sigma.apply(j))
                .map(|m| m == p.right)
                .unwrap_or(false);
            if right_match {
                classes = Some(format!("({i},{j})->({},{})", sigma.apply(i), sigma.apply(j)));
                break;
            }
        }
        if classes.is_some() {
            break;
        }
    }
    let left_label = if p.whole {
        let m = PairMatching::from_pair_masks(
            <[u16; 4]>::try_from(p.left_pairs.clone()).expect("whole product"),
        )
        .expect("whole product");
        m.label().to_string()
    } else if let Some(m) = full_left_matching(p, cu, cv, left, sigma, right) {
        m.label().to_string()
    } else {
        let pairs: Vec<String> = p
            .left_pairs
            .iter()
            .map(|&lp| {
                let a = lp.trailing_zeros();
                let b = 15 - lp.leading_zeros();
                format!("{a}{b}")
            })
            .collect();
        format!("{{{}}}", pairs.join(","))
    };
    (format!("{left_label} x {}", p.right.label()), classes)
}

fn render_matrix(labels: &[String], mult: impl Fn(usize, usize) -> usize) -> String {
    let n = labels.len();
    let w = labels
        .iter()
        .map(|l| l.len())
        .chain(std::iter::once(3))
        .max()
        .unwrap_or(3)
        + 1;
    let mut out = String::new();
    let _ = write!(out, "    {:>w$}", "");
    for l in labels {
        let _ = write!(out, "{l:>w$}");
    }
    out.push('\n');
    for u in 0..n {
        let _ = write!(out, "    {:>w$}", labels[u]);
        for v in 0..n {
            let _ = write!(out, "{:>w$}", mult(u, v));
        }
        out.push('\n');
    }
    out
}
