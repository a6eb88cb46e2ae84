//! Strict total orders on `P^k_*(N)`, the nonempty coalitions of at most `k`
//! players.
//!
//! An order is kept twice: as the increasing sequence and as a dense rank
//! table indexed by mask, so that comparisons are a pair of lookups.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::subset::{GroundSet, Subset};

const UNRANKED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetOrder {
    ground: GroundSet,
    k: usize,
    sequence: Vec<Subset>,
    rank: Vec<u32>,
}

impl SubsetOrder {
    /// Builds an order from its increasing sequence, which must list every
    /// member of `P^k_*(N)` exactly once.
    pub fn from_sequence(ground: GroundSet, k: usize, sequence: Vec<Subset>) -> Result<Self> {
        check_k(ground, k)?;
        let mut rank = vec![UNRANKED; ground.size()];
        for (pos, s) in sequence.iter().enumerate() {
            if s.is_empty() || !ground.contains(*s) || s.len() > k {
                return Err(Error::input(format!("{s} is not in P^{k}_*(N) for n = {}", ground.n())));
            }
            if rank[s.index()] != UNRANKED {
                return Err(Error::input(format!("{s} appears twice in the order")));
            }
            rank[s.index()] = pos as u32;
        }
        if let Some(missing) = ground.bounded_subsets(k).find(|s| rank[s.index()] == UNRANKED) {
            return Err(Error::input(format!("order is missing {missing}")));
        }
        Ok(SubsetOrder {
            ground,
            k,
            sequence,
            rank,
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// The members of `P^k_*(N)` in increasing order.
    pub fn sequence(&self) -> &[Subset] {
        &self.sequence
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.index() < self.rank.len() && self.rank[s.index()] != UNRANKED
    }

    /// 0-based position of `s`, or `None` when `s` is not ranked.
    pub fn rank(&self, s: Subset) -> Option<usize> {
        self.rank
            .get(s.index())
            .copied()
            .filter(|&r| r != UNRANKED)
            .map(|r| r as usize)
    }

    /// Position of a member; panics for sets outside `P^k_*(N)`.
    pub fn rank_of(&self, s: Subset) -> usize {
        self.rank(s)
            .unwrap_or_else(|| panic!("{s} is not ranked by this order"))
    }

    pub fn compare(&self, a: Subset, b: Subset) -> Ordering {
        self.rank_of(a).cmp(&self.rank_of(b))
    }

    pub fn precedes(&self, a: Subset, b: Subset) -> bool {
        self.rank_of(a) < self.rank_of(b)
    }

    /// Players listed by the rank of their singletons.
    pub fn player_sequence(&self) -> Vec<usize> {
        self.sequence
            .iter()
            .filter(|s| s.len() == 1)
            .flat_map(|s| s.elements())
            .collect()
    }

    /// The order restricted to singletons, as `rank[player]` (index 0 unused).
    pub fn player_ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.ground.n() + 1];
        for (pos, i) in self.player_sequence().into_iter().enumerate() {
            ranks[i] = pos;
        }
        ranks
    }

    pub fn classify(&self) -> CompatibilityReport {
        classify(self)
    }
}

fn check_k(ground: GroundSet, k: usize) -> Result<()> {
    if k < 1 || k > ground.n() {
        return Err(Error::domain(format!("k must lie in 1..={}, got {k}", ground.n())));
    }
    Ok(())
}

fn check_permutation(n: usize, perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; n + 1];
    if perm.len() != n {
        return Err(Error::domain(format!(
            "permutation of {n} players has {} entries",
            perm.len()
        )));
    }
    for &p in perm {
        if p < 1 || p > n || seen[p] {
            return Err(Error::domain(format!("{perm:?} is not a permutation of 1..={n}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// The binary order: coalitions ranked by the integer whose bits are their
/// indicator, restricted to `P^k_*(N)`.
pub fn binary_order(ground: GroundSet, k: usize) -> Result<SubsetOrder> {
    check_k(ground, k)?;
    SubsetOrder::from_sequence(ground, k, ground.bounded_subsets(k).collect())
}

/// The order on singletons `{perm[0]} ≺ {perm[1]} ≺ ...`, with `k = 1`.
pub fn order_from_permutation(perm: &[usize]) -> Result<SubsetOrder> {
    let ground = GroundSet::new(perm.len())?;
    check_permutation(perm.len(), perm)?;
    SubsetOrder::from_sequence(ground, 1, perm.iter().map(|&i| Subset::singleton(i)).collect())
}

/// Sort key for "by cardinality, then lexicographic under `positions`".
fn block_key(s: Subset, positions: &[usize]) -> (usize, Vec<usize>) {
    let mut pos: Vec<usize> = s.elements().map(|i| positions[i]).collect();
    pos.sort_unstable();
    (s.len(), pos)
}

/// Coalitions ordered by increasing size, ties broken lexicographically with
/// players compared through `base_perm`.
pub fn lexicographic_block_order(ground: GroundSet, k: usize, base_perm: &[usize]) -> Result<SubsetOrder> {
    check_k(ground, k)?;
    check_permutation(ground.n(), base_perm)?;
    let mut positions = vec![0; ground.n() + 1];
    for (p, &i) in base_perm.iter().enumerate() {
        positions[i] = p;
    }
    let mut seq: Vec<Subset> = ground.bounded_subsets(k).collect();
    seq.sort_by_key(|s| block_key(*s, &positions));
    SubsetOrder::from_sequence(ground, k, seq)
}

/// The order used to exhibit a violated interval `[lower, upper]` when a game
/// fails to be `(k+1)`-monotone.
///
/// Players of `upper \ lower` come first, then those of `lower`, both in
/// label order; call `i` the first player of `lower` and `B = lower \ i`.
/// Members of `P^k_*(upper)` are ranked by size then lexicographically, with
/// `B` moved to the very end. Coalitions meeting `N \ upper` follow, grouped
/// by their outside part `D` (binary order on `D`), each group repeating the
/// previous sequence (with `∅` in front) united with `D`.
pub fn necessity_order(ground: GroundSet, k: usize, lower: Subset, upper: Subset) -> Result<SubsetOrder> {
    check_k(ground, k)?;
    if !lower.is_subset_of(upper) || !ground.contains(upper) {
        return Err(Error::domain("necessity order needs lower ⊆ upper ⊆ N"));
    }
    if lower.len() < 2 || lower.len() > k + 1 {
        return Err(Error::domain(format!("lower set must have 2..={} players", k + 1)));
    }
    let inside: Vec<usize> = upper.difference(lower).elements().chain(lower.elements()).collect();
    let first_of_lower = lower.elements().next().expect("lower is nonempty");
    let moved = lower.without(first_of_lower);

    let mut positions = vec![usize::MAX; ground.n() + 1];
    for (p, &i) in inside.iter().enumerate() {
        positions[i] = p;
    }
    let mut head: Vec<Subset> = upper
        .subsets()
        .filter(|s| !s.is_empty() && s.len() <= k && *s != moved)
        .collect();
    head.sort_by_key(|s| block_key(*s, &positions));
    head.push(moved);

    let mut seq = head.clone();
    let outside = ground.full().difference(upper);
    for d in outside.subsets().skip(1) {
        seq.push(d);
        seq.extend(head.iter().map(|s| s.union(d)).filter(|s| s.len() <= k));
    }
    // D itself may exceed k players, in which case it is not ranked
    seq.retain(|s| s.len() <= k);
    SubsetOrder::from_sequence(ground, k, seq)
}

/// A pair `(A, B)` with `A ≺ B` and a set `C` disjoint from both such that
/// `B ∪ C ≺ A ∪ C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompatibilityViolation {
    pub lower: Subset,
    pub upper: Subset,
    pub added: Subset,
}

/// `A ⊂ B` but `B ≺ A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusionViolation {
    pub subset: Subset,
    pub superset: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub subset_compatible: bool,
    pub compatible: bool,
    pub strongly_compatible: bool,
    pub compatibility_witness: Option<CompatibilityViolation>,
    pub inclusion_witness: Option<InclusionViolation>,
}

/// One instance `(A, B, A ∪ C, B ∪ C)` of the compatibility condition, with
/// `A` before `B` in binary order and `C` nonempty.
#[derive(Debug, Clone, Copy)]
struct Quad {
    a: Subset,
    b: Subset,
    ac: Subset,
    bc: Subset,
}

fn compatibility_quads(ground: GroundSet, k: usize) -> Vec<Quad> {
    let members: Vec<Subset> = ground.bounded_subsets(k).collect();
    let mut quads = Vec::new();
    for (ia, &a) in members.iter().enumerate() {
        for &b in &members[ia + 1..] {
            let free = ground.full().difference(a.union(b));
            for c in free.subsets().skip(1) {
                let (ac, bc) = (a.union(c), b.union(c));
                if ac.len() <= k && bc.len() <= k {
                    quads.push(Quad { a, b, ac, bc });
                }
            }
        }
    }
    quads
}

/// Decides compatibility (both directions of the defining equivalence) and
/// ⊆-compatibility by scanning every triple.
pub fn classify(order: &SubsetOrder) -> CompatibilityReport {
    let mut compatibility_witness = None;
    for q in compatibility_quads(order.ground, order.k) {
        let before = order.precedes(q.a, q.b);
        let after = order.precedes(q.ac, q.bc);
        if before != after {
            let (lower, upper) = if before { (q.a, q.b) } else { (q.b, q.a) };
            compatibility_witness = Some(CompatibilityViolation {
                lower,
                upper,
                added: q.ac.difference(q.a),
            });
            break;
        }
    }
    let mut inclusion_witness = None;
    'outer: for &sup in &order.sequence {
        for sub in sup.subsets().filter(|s| !s.is_empty() && *s != sup) {
            if order.precedes(sup, sub) {
                inclusion_witness = Some(InclusionViolation {
                    subset: sub,
                    superset: sup,
                });
                break 'outer;
            }
        }
    }
    let compatible = compatibility_witness.is_none();
    let subset_compatible = inclusion_witness.is_none();
    CompatibilityReport {
        subset_compatible,
        compatible,
        strongly_compatible: compatible && subset_compatible,
        compatibility_witness,
        inclusion_witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderFilter {
    All,
    Compatible,
    StronglyCompatible,
}

impl OrderFilter {
    pub fn accepts(self, report: &CompatibilityReport) -> bool {
        match self {
            OrderFilter::All => true,
            OrderFilter::Compatible => report.compatible,
            OrderFilter::StronglyCompatible => report.strongly_compatible,
        }
    }
}

/// Size limits for order enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationGuard {
    /// Up to this many ranked coalitions every permutation is visited and
    /// filtered afterwards, and no cap is required.
    pub full_limit: usize,
    /// Hard limit on `|P^k_*(N)|` for pruned backtracking.
    pub search_limit: usize,
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        EnumerationGuard {
            full_limit: 7,
            search_limit: 63,
        }
    }
}

impl EnumerationGuard {
    pub fn relaxed() -> Self {
        EnumerationGuard {
            full_limit: 7,
            search_limit: usize::MAX,
        }
    }
}

/// Streams the orders on `P^k_*(N)` accepted by `filter`, in lexicographic
/// order of their rank tables (the rank of `{1}` first, then `{2}`, `{1,2}`,
/// ... in binary order).
pub fn enumerate_orders(
    ground: GroundSet,
    k: usize,
    filter: OrderFilter,
    cap: Option<usize>,
    guard: EnumerationGuard,
) -> Result<OrderStream> {
    check_k(ground, k)?;
    let members: Vec<Subset> = ground.bounded_subsets(k).collect();
    let size = members.len();
    if size > guard.search_limit {
        return Err(Error::guard(format!(
            "|P^{k}_*(N)| = {size} exceeds the enumeration limit {}",
            guard.search_limit
        )));
    }
    let exhaustive = size <= guard.full_limit;
    if !exhaustive && cap.is_none() {
        return Err(Error::guard(format!(
            "|P^{k}_*(N)| = {size} is above {}; a cap is required",
            guard.full_limit
        )));
    }

    let mut index = vec![usize::MAX; ground.size()];
    for (i, s) in members.iter().enumerate() {
        index[s.index()] = i;
    }
    let mut quads_by_last: Vec<Vec<[usize; 4]>> = vec![Vec::new(); size];
    let mut subsets_by_last: Vec<Vec<usize>> = vec![Vec::new(); size];
    if !exhaustive {
        if filter != OrderFilter::All {
            for q in compatibility_quads(ground, k) {
                let ids = [q.a, q.b, q.ac, q.bc].map(|s| index[s.index()]);
                let last = *ids.iter().max().expect("four ids");
                quads_by_last[last].push(ids);
            }
        }
        if filter == OrderFilter::StronglyCompatible {
            // covering pairs suffice; binary order already ranks subsets first
            for (j, s) in members.iter().enumerate() {
                if s.len() > 1 {
                    subsets_by_last[j].extend(s.elements().map(|i| index[s.without(i).index()]));
                }
            }
        }
    }

    Ok(OrderStream {
        ground,
        k,
        filter,
        members,
        exhaustive,
        quads_by_last,
        subsets_by_last,
        ranks: vec![0; size],
        used: vec![false; size],
        next_rank: vec![0; size + 1],
        depth: 0,
        finished: size == 0,
        cap,
        emitted: 0,
        truncated: false,
    })
}

/// Iterator returned by [`enumerate_orders`].
pub struct OrderStream {
    ground: GroundSet,
    k: usize,
    filter: OrderFilter,
    members: Vec<Subset>,
    exhaustive: bool,
    quads_by_last: Vec<Vec<[usize; 4]>>,
    subsets_by_last: Vec<Vec<usize>>,
    ranks: Vec<usize>,
    used: Vec<bool>,
    next_rank: Vec<usize>,
    depth: usize,
    finished: bool,
    cap: Option<usize>,
    emitted: usize,
    truncated: bool,
}

impl OrderStream {
    /// True once the cap was reached while further qualifying orders exist.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    fn consistent_at(&self, j: usize) -> bool {
        let r = &self.ranks;
        self.subsets_by_last[j].iter().all(|&sub| r[sub] < r[j])
            && self.quads_by_last[j]
                .iter()
                .all(|&[a, b, ac, bc]| (r[a] < r[b]) == (r[ac] < r[bc]))
    }

    /// Next complete rank assignment passing the pruning checks.
    fn advance(&mut self) -> Option<Vec<usize>> {
        let size = self.members.len();
        while !self.finished {
            if self.depth == size {
                let found = self.ranks.clone();
                self.depth -= 1;
                self.used[self.ranks[self.depth]] = false;
                return Some(found);
            }
            let d = self.depth;
            let mut placed = false;
            let mut r = self.next_rank[d];
            while r < size {
                if !self.used[r] {
                    self.ranks[d] = r;
                    if self.consistent_at(d) {
                        self.next_rank[d] = r + 1;
                        self.used[r] = true;
                        self.depth += 1;
                        self.next_rank[self.depth] = 0;
                        placed = true;
                        break;
                    }
                }
                r += 1;
            }
            if !placed {
                if d == 0 {
                    self.finished = true;
                } else {
                    self.depth -= 1;
                    self.used[self.ranks[self.depth]] = false;
                }
            }
        }
        None
    }

    fn next_qualifying(&mut self) -> Option<SubsetOrder> {
        while let Some(ranks) = self.advance() {
            let mut seq = vec![Subset::EMPTY; ranks.len()];
            for (i, &r) in ranks.iter().enumerate() {
                seq[r] = self.members[i];
            }
            let order = SubsetOrder::from_sequence(self.ground, self.k, seq)
                .expect("enumerated sequences are permutations of P^k_*");
            if !self.exhaustive || self.filter.accepts(&classify(&order)) {
                return Some(order);
            }
        }
        None
    }
}

impl Iterator for OrderStream {
    type Item = SubsetOrder;

    fn next(&mut self) -> Option<SubsetOrder> {
        if let Some(cap) = self.cap {
            if self.emitted >= cap {
                if !self.truncated && !self.finished && self.next_qualifying().is_some() {
                    self.truncated = true;
                }
                self.finished = true;
                return None;
            }
        }
        let order = self.next_qualifying()?;
        self.emitted += 1;
        Some(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    /// Parses compact labels such as "13" (single-digit players only).
    pub(crate) fn sets(list: &str) -> Vec<Subset> {
        list.split_whitespace()
            .map(|w| Subset::from_elements(w.chars().map(|c| c.to_digit(10).unwrap() as usize)))
            .collect()
    }

    fn order(n: usize, k: usize, list: &str) -> SubsetOrder {
        SubsetOrder::from_sequence(g(n), k, sets(list)).unwrap()
    }

    fn compact(order: &SubsetOrder) -> String {
        order
            .sequence()
            .iter()
            .map(|s| s.elements().map(|i| i.to_string()).collect::<String>())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Independent scan of the compatibility definition over explicit
    /// triples, both directions of the equivalence.
    fn brute_compatible(o: &SubsetOrder) -> bool {
        let members = o.sequence().to_vec();
        for &a in &members {
            for &b in &members {
                if a == b {
                    continue;
                }
                for c in o.ground().subsets() {
                    if !c.is_disjoint(a) || !c.is_disjoint(b) {
                        continue;
                    }
                    let (ac, bc) = (a.union(c), b.union(c));
                    if !o.contains(ac) || !o.contains(bc) {
                        continue;
                    }
                    if o.precedes(a, b) && !o.precedes(ac, bc) {
                        return false;
                    }
                    if o.precedes(ac, bc) && !o.precedes(a, b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn binary_order_examples() {
        let o = binary_order(g(4), 4).unwrap();
        assert_eq!(&compact(&o)[..22], "1 2 12 3 13 23 123 4 1");
        let five = binary_order(g(5), 2).unwrap();
        assert!(five.precedes(Subset::from_elements([1, 3]), Subset::singleton(4)));
        assert_eq!(compact(&binary_order(g(3), 1).unwrap()), "1 2 3");
        assert!(binary_order(g(3), 0).is_err());
        assert!(binary_order(g(3), 4).is_err());
    }

    #[test]
    fn binary_orders_are_strongly_compatible() {
        for n in 2..=5 {
            for k in 1..=n {
                let o = binary_order(g(n), k).unwrap();
                assert!(classify(&o).strongly_compatible, "n={n} k={k}");
                assert!(brute_compatible(&o));
            }
        }
    }

    #[test]
    fn non_compatible_example_order() {
        let o = order(4, 2, "1 3 2 12 23 13 4 14 24 34");
        let report = classify(&o);
        assert!(!report.compatible);
        assert!(report.subset_compatible);
        let w = report.compatibility_witness.unwrap();
        assert!(o.precedes(w.lower, w.upper));
        assert!(o.precedes(w.upper.union(w.added), w.lower.union(w.added)));
    }

    #[test]
    fn three_player_example_is_compatible_but_not_inclusion_compatible() {
        let o = order(3, 2, "1 2 12 13 23 3");
        let report = classify(&o);
        assert!(report.compatible);
        assert!(!report.subset_compatible);
        assert!(!report.strongly_compatible);
        let w = report.inclusion_witness.unwrap();
        assert!(w.subset.is_proper_subset_of(w.superset));
        assert!(o.precedes(w.superset, w.subset));
    }

    #[test]
    fn permutations_give_singleton_orders() {
        let id = order_from_permutation(&[1, 2, 3, 4]).unwrap();
        assert_eq!(compact(&id), "1 2 3 4");
        let rev = order_from_permutation(&[4, 3, 2, 1]).unwrap();
        assert_eq!(compact(&rev), "4 3 2 1");
        assert!(classify(&rev).strongly_compatible);
        assert!(order_from_permutation(&[1, 1, 2]).is_err());
        assert!(order_from_permutation(&[1, 4, 2]).is_err());
    }

    #[test]
    fn every_singleton_order_is_strongly_compatible() {
        for n in 1..=5 {
            let stream = enumerate_orders(g(n), 1, OrderFilter::All, Some(200), EnumerationGuard::default()).unwrap();
            let mut count = 0;
            for o in stream {
                assert!(classify(&o).strongly_compatible);
                count += 1;
            }
            assert_eq!(count, (1..=n).product::<usize>());
        }
    }

    #[test]
    fn block_orders() {
        let o = lexicographic_block_order(g(3), 2, &[1, 2, 3]).unwrap();
        assert_eq!(compact(&o), "1 2 3 12 13 23");
        assert!(classify(&o).strongly_compatible);
        let p = lexicographic_block_order(g(3), 2, &[3, 1, 2]).unwrap();
        assert_eq!(compact(&p), "3 1 2 13 23 12");
        for n in 2..=4 {
            for k in 1..=n {
                let perm: Vec<usize> = (1..=n).rev().collect();
                let o = lexicographic_block_order(g(n), k, &perm).unwrap();
                assert!(classify(&o).strongly_compatible);
            }
        }
    }

    #[test]
    fn necessity_order_prefix() {
        let o = necessity_order(
            g(5),
            3,
            Subset::from_elements([3, 4]),
            Subset::from_elements([1, 2, 3, 4]),
        )
        .unwrap();
        let text = compact(&o);
        assert!(
            text.starts_with("1 2 3 12 13 14 23 24 34 123 124 134 234 4 5 15 25"),
            "{text}"
        );
        assert_eq!(o.len(), 25);
        // 12 ≺ 4 but 34 ≺ 123: the construction breaks compatibility here
        let report = classify(&o);
        assert!(!report.compatible);
    }

    #[test]
    fn enumeration_counts_three_players() {
        let all: Vec<_> = enumerate_orders(g(3), 2, OrderFilter::All, None, EnumerationGuard::default())
            .unwrap()
            .collect();
        assert_eq!(all.len(), 720);
        let strong_by_scan = all.iter().filter(|o| classify(o).strongly_compatible).count();
        let compat_by_scan = all.iter().filter(|o| brute_compatible(o)).count();
        let strong: Vec<_> = enumerate_orders(
            g(3),
            2,
            OrderFilter::StronglyCompatible,
            None,
            EnumerationGuard::default(),
        )
        .unwrap()
        .collect();
        let compat: Vec<_> = enumerate_orders(g(3), 2, OrderFilter::Compatible, None, EnumerationGuard::default())
            .unwrap()
            .collect();
        assert_eq!(strong.len(), strong_by_scan);
        assert_eq!(compat.len(), compat_by_scan);
        assert!(compat.iter().all(|o| all.contains(o)));
        assert!(strong.iter().all(|o| compat.contains(o)));
        assert!(!strong.is_empty());
    }

    #[test]
    fn emission_order_is_lexicographic_in_rank_tables() {
        let all: Vec<_> = enumerate_orders(g(3), 2, OrderFilter::All, None, EnumerationGuard::default())
            .unwrap()
            .collect();
        let tables: Vec<Vec<usize>> = all
            .iter()
            .map(|o| g(3).bounded_subsets(2).map(|s| o.rank_of(s)).collect())
            .collect();
        assert!(tables.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(compact(&all[0]), "1 2 12 3 13 23");
    }

    #[test]
    fn pruned_search_matches_filtered_scan() {
        // force pruning on a case small enough to also scan exhaustively
        let pruned = EnumerationGuard {
            full_limit: 0,
            search_limit: 63,
        };
        for filter in [OrderFilter::Compatible, OrderFilter::StronglyCompatible] {
            let a: Vec<_> = enumerate_orders(g(3), 2, filter, Some(10_000), pruned)
                .unwrap()
                .collect();
            let b: Vec<_> = enumerate_orders(g(3), 2, filter, None, EnumerationGuard::default())
                .unwrap()
                .collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn cap_and_guards() {
        let mut stream = enumerate_orders(
            g(4),
            2,
            OrderFilter::StronglyCompatible,
            Some(100),
            EnumerationGuard::default(),
        )
        .unwrap();
        let got: Vec<_> = stream.by_ref().collect();
        assert_eq!(got.len(), 100);
        assert!(stream.truncated());
        assert!(got
            .iter()
            .all(|o| classify(o).strongly_compatible && brute_compatible(o)));
        assert!(matches!(
            enumerate_orders(g(4), 2, OrderFilter::All, None, EnumerationGuard::default()),
            Err(Error::Guard(_))
        ));
        let tight = EnumerationGuard {
            full_limit: 7,
            search_limit: 9,
        };
        assert!(matches!(
            enumerate_orders(g(4), 2, OrderFilter::All, Some(1), tight),
            Err(Error::Guard(_))
        ));
        let mut small = enumerate_orders(g(3), 1, OrderFilter::All, Some(6), EnumerationGuard::default()).unwrap();
        assert_eq!(small.by_ref().count(), 6);
        assert!(!small.truncated());
    }

    #[test]
    fn sequence_validation() {
        assert!(SubsetOrder::from_sequence(g(3), 2, sets("1 2 12 3 13")).is_err());
        assert!(SubsetOrder::from_sequence(g(3), 2, sets("1 2 12 3 13 13")).is_err());
        assert!(SubsetOrder::from_sequence(g(3), 2, sets("1 2 12 3 13 123")).is_err());
        let o = order(3, 2, "3 1 2 13 23 12");
        assert_eq!(o.player_sequence(), vec![3, 1, 2]);
        assert_eq!(o.player_ranks()[3], 0);
    }
}
