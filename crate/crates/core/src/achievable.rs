//! Achievable families.
//!
//! For an order `≺` on `P^k_*(N)` and a centre `B`, the achievable family
//! `A(B)` collects every coalition `A ⊇ B` whose ranked subsets all come no
//! later than `B`. Nonempty families partition the nonempty coalitions; under
//! compatibility each is the Boolean interval `[B, B̌]` below its top `B̌`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::orders::SubsetOrder;
use crate::subset::{GroundSet, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyStatus {
    Empty,
    /// Closed under union; `top` is the largest member.
    Lattice {
        top: Subset,
    },
    NonLattice,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AchievableFamily {
    center: Subset,
    /// Members in binary order.
    members: Vec<Subset>,
    status: FamilyStatus,
}

impl AchievableFamily {
    pub fn center(&self) -> Subset {
        self.center
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn status(&self) -> FamilyStatus {
        self.status
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_lattice(&self) -> bool {
        matches!(self.status, FamilyStatus::Lattice { .. })
    }

    pub fn top(&self) -> Option<Subset> {
        match self.status {
            FamilyStatus::Lattice { top } => Some(top),
            _ => None,
        }
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }
}

/// `A(b)` computed from the definition: every superset of `b` is tested
/// against all of its ranked subsets.
pub fn achievable_family(order: &SubsetOrder, b: Subset) -> Result<AchievableFamily> {
    let Some(b_rank) = order.rank(b) else {
        return Err(Error::domain(format!("{b} is not in P^{}_*(N)", order.k())));
    };
    let k = order.k();
    let full = order.ground().full();
    let members: Vec<Subset> = b
        .supersets_within(full)
        .filter(|a| {
            a.subsets()
                .filter(|s| !s.is_empty() && s.len() <= k)
                .all(|s| order.rank_of(s) <= b_rank)
        })
        .collect();
    let status = if members.is_empty() {
        FamilyStatus::Empty
    } else {
        let union = members.iter().fold(Subset::EMPTY, |acc, s| acc.union(*s));
        let expected = 1usize << union.difference(b).len();
        if members.binary_search(&union).is_ok() && members.len() == expected {
            FamilyStatus::Lattice { top: union }
        } else {
            FamilyStatus::NonLattice
        }
    };
    Ok(AchievableFamily {
        center: b,
        members,
        status,
    })
}

/// All achievable families of an order, checked to partition the nonempty
/// coalitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyAtlas {
    order: SubsetOrder,
    /// Aligned with `order.sequence()`.
    families: Vec<AchievableFamily>,
}

impl FamilyAtlas {
    pub fn order(&self) -> &SubsetOrder {
        &self.order
    }

    pub fn ground(&self) -> GroundSet {
        self.order.ground()
    }

    /// Families in `≺`-increasing order of their centres.
    pub fn families(&self) -> &[AchievableFamily] {
        &self.families
    }

    pub fn family(&self, b: Subset) -> &AchievableFamily {
        &self.families[self.order.rank_of(b)]
    }

    pub fn nonempty(&self) -> impl Iterator<Item = &AchievableFamily> {
        self.families.iter().filter(|f| !f.is_empty())
    }

    pub fn all_lattices(&self) -> bool {
        self.nonempty().all(|f| f.is_lattice())
    }

    /// Centre of the family containing the nonempty coalition `a`.
    pub fn owner(&self, a: Subset) -> Option<Subset> {
        self.nonempty().find(|f| f.contains(a)).map(|f| f.center())
    }

    /// Whether `{A(C) : C ⊆ B̌ ranked, A(C) ≠ ∅}` partitions the nonempty
    /// subsets of `B̌`, for a lattice family `A(b)`.
    pub fn top_partition_holds(&self, b: Subset) -> bool {
        let Some(top) = self.family(b).top() else {
            return false;
        };
        let k = self.order.k();
        let mut covered = vec![0u32; 1 << self.ground().n()];
        for c in top.subsets().filter(|c| !c.is_empty() && c.len() <= k) {
            for &a in self.family(c).members() {
                if !a.is_subset_of(top) {
                    return false;
                }
                covered[a.index()] += 1;
            }
        }
        top.subsets().skip(1).all(|a| covered[a.index()] == 1)
    }
}

pub fn build_atlas(order: &SubsetOrder) -> Result<FamilyAtlas> {
    let families = order
        .sequence()
        .iter()
        .map(|&b| achievable_family(order, b))
        .collect::<Result<Vec<_>>>()?;
    let ground = order.ground();
    let mut owner_count = vec![0u32; ground.size()];
    for f in &families {
        for &a in f.members() {
            owner_count[a.index()] += 1;
        }
    }
    if let Some(bad) = ground.nonempty_subsets().find(|a| owner_count[a.index()] != 1) {
        return Err(Error::internal(format!(
            "achievable families do not partition the coalitions: {bad} lies in {} families",
            owner_count[bad.index()]
        )));
    }
    Ok(FamilyAtlas {
        order: order.clone(),
        families,
    })
}

/// Every nonempty family equals the full interval `[B, B̌]`.
pub fn check_interval_property(atlas: &FamilyAtlas) -> bool {
    atlas.nonempty().all(|f| match f.top() {
        Some(top) => {
            let interval: Vec<Subset> = f.center().supersets_within(top).collect();
            interval == f.members()
        }
        None => false,
    })
}

/// The set of tops `B̌` of the nonempty families.
pub fn top_collection(atlas: &FamilyAtlas) -> Result<BTreeSet<Subset>> {
    atlas
        .nonempty()
        .map(|f| {
            f.top()
                .ok_or_else(|| Error::structure(format!("A({}) is not a lattice", f.center())))
        })
        .collect()
}

/// Tops predicted for a strongly compatible order whose singletons are ranked
/// `players[0] ≺ players[1] ≺ ...`: every `{σ(1..l)} ∪ J` with
/// `l = 1..n-k+1` and `J` a `(k-1)`-subset of the later players, plus every
/// nonempty coalition of fewer than `k` players.
pub fn predicted_top_collection(ground: GroundSet, k: usize, players: &[usize]) -> BTreeSet<Subset> {
    let n = ground.n();
    let mut tops: BTreeSet<Subset> = ground.nonempty_subsets().filter(|s| s.len() < k).collect();
    for l in 1..=(n + 1).saturating_sub(k) {
        let prefix = Subset::from_elements(players[..l].iter().copied());
        let later = Subset::from_elements(players[l..].iter().copied());
        for j in later.subsets().filter(|j| j.len() == k - 1) {
            tops.insert(prefix.union(j));
        }
    }
    tops
}

/// For a lattice family, whether its centre consists of the last `|B|`
/// players of its top, players being compared by their singleton ranks.
pub fn check_suffix_property(order: &SubsetOrder, family: &AchievableFamily) -> bool {
    let Some(top) = family.top() else {
        return false;
    };
    let mut members: Vec<usize> = top.elements().collect();
    members.sort_by_key(|&i| order.rank_of(Subset::singleton(i)));
    let tail = &members[members.len() - family.center().len()..];
    Subset::from_elements(tail.iter().copied()) == family.center()
}
