//! k-additive cores and their vertices.
//!
//! A k-additive game `v*` is described by its Möbius coefficients on
//! `P^k_*(N)`, listed in binary order; those are the variables of every
//! [`ConstraintSystem`]. Points are certified as vertices by exact rank
//! computation on their tight rows.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::achievable::{build_atlas, FamilyAtlas};
use crate::error::{Error, Result};
use crate::linalg;
use crate::orders::{classify, enumerate_orders, EnumerationGuard, OrderFilter, SubsetOrder};
use crate::rational::Rational;
use crate::setfn::{inverse_mobius, is_k_monotone, GameTable, MobiusVector};
use crate::subset::{GroundSet, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoreVariant {
    /// Dominance and efficiency only: `C^k(v)`.
    Plain,
    /// Adds monotonicity of `v*`: `MC^k(v)`.
    Monotone,
    /// Adds `m*(K) ≥ 0` for `|K| ≥ 2`: `C^k_∞(v)`.
    Infinite,
}

impl CoreVariant {
    pub fn name(self) -> &'static str {
        match self {
            CoreVariant::Plain => "plain",
            CoreVariant::Monotone => "monotone",
            CoreVariant::Infinite => "infinite",
        }
    }
}

impl fmt::Display for CoreVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoreVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(CoreVariant::Plain),
            "monotone" => Ok(CoreVariant::Monotone),
            "infinite" => Ok(CoreVariant::Infinite),
            other => Err(Error::input(format!(
                "unknown core variant {other:?} (expected plain, monotone or infinite)"
            ))),
        }
    }
}

/// Where a constraint row comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowTag {
    /// `v*(A) ≥ v(A)` for a proper nonempty coalition `A`.
    Dominance(Subset),
    /// `v*(N) = v(N)`.
    Efficiency,
    /// Interval sum of `m*` over `[{player}, coalition]` is nonnegative.
    Monotonicity { player: usize, coalition: Subset },
    /// `m*(K) ≥ 0`.
    Nonnegativity(Subset),
    /// Row of a hand-built system.
    Custom(usize),
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowTag::Dominance(a) => write!(f, "dominance {a}"),
            RowTag::Efficiency => write!(f, "efficiency"),
            RowTag::Monotonicity { player, coalition } => write!(f, "monotonicity [{player}, {coalition}]"),
            RowTag::Nonnegativity(k) => write!(f, "nonnegativity {k}"),
            RowTag::Custom(i) => write!(f, "row {i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    AtLeast,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintRow {
    pub tag: RowTag,
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl ConstraintRow {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        linalg::dot(&self.coeffs, x)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::AtLeast => lhs >= self.rhs,
            Relation::Equal => lhs == self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.lhs(x) == self.rhs
    }
}

/// A polyhedron `{x : rows}` over `num_vars` rational variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    num_vars: usize,
    /// Variable labels (binary order on `P^k_*(N)`); empty for custom systems.
    vars: Vec<Subset>,
    rows: Vec<ConstraintRow>,
    origin: Option<(GroundSet, usize, CoreVariant)>,
}

impl ConstraintSystem {
    /// A system not tied to any game, mainly for exercising the oracle.
    pub fn custom(num_vars: usize, rows: Vec<(Vec<Rational>, Relation, Rational)>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, (coeffs, relation, rhs))| {
                if coeffs.len() != num_vars {
                    return Err(Error::domain(format!(
                        "row {i} has {} coefficients, expected {num_vars}",
                        coeffs.len()
                    )));
                }
                Ok(ConstraintRow {
                    tag: RowTag::Custom(i),
                    coeffs,
                    relation,
                    rhs,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConstraintSystem {
            num_vars,
            vars: Vec::new(),
            rows,
            origin: None,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn vars(&self) -> &[Subset] {
        &self.vars
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    pub fn ground(&self) -> Option<GroundSet> {
        self.origin.map(|o| o.0)
    }

    pub fn k(&self) -> Option<usize> {
        self.origin.map(|o| o.1)
    }

    pub fn variant(&self) -> Option<CoreVariant> {
        self.origin.map(|o| o.2)
    }

    pub fn equality_count(&self) -> usize {
        self.rows.iter().filter(|r| r.relation == Relation::Equal).count()
    }

    pub fn inequality_count(&self) -> usize {
        self.rows.len() - self.equality_count()
    }

    /// Index of the first violated row, if any.
    pub fn first_violation(&self, x: &[Rational]) -> Option<usize> {
        self.rows.iter().position(|r| !r.is_satisfied(x))
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        self.first_violation(x).is_none()
    }

    pub fn tight_rows(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].is_tight(x)).collect()
    }

    /// Whether the direction `d` is in the recession cone.
    pub fn is_recession_direction(&self, d: &[Rational]) -> bool {
        self.rows.iter().all(|r| {
            let lhs = r.lhs(d);
            match r.relation {
                Relation::AtLeast => !lhs.is_negative(),
                Relation::Equal => lhs.is_zero(),
            }
        })
    }

    /// Coordinates of a Möbius vector in this system's variable order.
    pub fn coords_of(&self, m: &MobiusVector) -> Vec<Rational> {
        self.vars.iter().map(|s| m.coeff(*s).clone()).collect()
    }

    /// The Möbius vector with the given coordinates; `None` for custom systems.
    pub fn point_of(&self, coords: &[Rational]) -> Option<MobiusVector> {
        let (ground, k, _) = self.origin?;
        MobiusVector::from_bounded_coords(ground, k, coords).ok()
    }
}

/// The system of `C^k(v)`, `MC^k(v)` or `C^k_∞(v)`.
pub fn core_constraints(v: &GameTable, k: usize, variant: CoreVariant) -> Result<ConstraintSystem> {
    let ground = v.ground();
    let n = ground.n();
    if k < 1 || k > n {
        return Err(Error::domain(format!("k must lie in 1..={n}, got {k}")));
    }
    let vars: Vec<Subset> = ground.bounded_subsets(k).collect();
    let full = ground.full();
    let indicator = |pred: &dyn Fn(Subset) -> bool| -> Vec<Rational> {
        vars.iter()
            .map(|&s| if pred(s) { Rational::one() } else { Rational::zero() })
            .collect()
    };
    let mut rows = Vec::new();
    for a in ground.nonempty_subsets().filter(|&a| a != full) {
        rows.push(ConstraintRow {
            tag: RowTag::Dominance(a),
            coeffs: indicator(&|s| s.is_subset_of(a)),
            relation: Relation::AtLeast,
            rhs: v.value(a).clone(),
        });
    }
    rows.push(ConstraintRow {
        tag: RowTag::Efficiency,
        coeffs: indicator(&|_| true),
        relation: Relation::Equal,
        rhs: v.grand().clone(),
    });
    match variant {
        CoreVariant::Plain => {}
        CoreVariant::Monotone => {
            for player in ground.players() {
                let i = Subset::singleton(player);
                for coalition in i.supersets_within(full) {
                    rows.push(ConstraintRow {
                        tag: RowTag::Monotonicity { player, coalition },
                        coeffs: indicator(&|s| i.is_subset_of(s) && s.is_subset_of(coalition)),
                        relation: Relation::AtLeast,
                        rhs: Rational::zero(),
                    });
                }
            }
        }
        CoreVariant::Infinite => {
            for &s in vars.iter().filter(|s| s.len() >= 2) {
                rows.push(ConstraintRow {
                    tag: RowTag::Nonnegativity(s),
                    coeffs: indicator(&|t| t == s),
                    relation: Relation::AtLeast,
                    rhs: Rational::zero(),
                });
            }
        }
    }
    Ok(ConstraintSystem {
        num_vars: vars.len(),
        vars,
        rows,
        origin: Some((ground, k, variant)),
    })
}

/// `m_≺` computed from a prebuilt atlas and the Möbius transform of `v`.
pub fn induced_from_atlas(atlas: &FamilyAtlas, m: &MobiusVector) -> MobiusVector {
    let mut out = MobiusVector::zero(atlas.ground());
    for f in atlas.nonempty() {
        let sum: Rational = f.members().iter().map(|a| m.coeff(*a)).sum();
        out.set(f.center(), sum);
    }
    out
}

/// The k-additive game `v_≺` induced by an order, as a Möbius vector:
/// `m_≺(B)` sums `m` over the achievable family of `B`.
pub fn induced_game(order: &SubsetOrder, v: &GameTable) -> Result<MobiusVector> {
    same_ground(order.ground(), v.ground())?;
    let atlas = build_atlas(order)?;
    Ok(induced_from_atlas(&atlas, &v.mobius()))
}

fn same_ground(a: GroundSet, b: GroundSet) -> Result<()> {
    if a != b {
        return Err(Error::domain(format!(
            "ground sets differ: {} vs {} players",
            a.n(),
            b.n()
        )));
    }
    Ok(())
}

/// Whether `v_≺(B̌) = v(B̌)` at every top. Every nonempty family must be a
/// lattice.
pub fn check_top_equalities(order: &SubsetOrder, v: &GameTable) -> Result<bool> {
    same_ground(order.ground(), v.ground())?;
    let atlas = build_atlas(order)?;
    let induced = inverse_mobius(&induced_from_atlas(&atlas, &v.mobius()));
    for f in atlas.nonempty() {
        let top = f
            .top()
            .ok_or_else(|| Error::structure(format!("A({}) is not a lattice", f.center())))?;
        if induced.value(top) != v.value(top) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `v*(A) ≥ v(A)` for all `A`, with equality at `N`.
pub fn dominates(v_star: &GameTable, v: &GameTable) -> Result<bool> {
    same_ground(v_star.ground(), v.ground())?;
    if v_star.grand() != v.grand() {
        return Ok(false);
    }
    Ok(v.ground().subsets().all(|a| v_star.value(a) >= v.value(a)))
}

/// A compatible order whose induced game fails to dominate `v`, together with
/// a coalition where it falls short. Such an order exists exactly when `v` is
/// not `(k+1)`-monotone.
pub fn find_domination_violation(
    v: &GameTable,
    k: usize,
    cap: Option<usize>,
    guard: EnumerationGuard,
) -> Result<Option<(SubsetOrder, Subset)>> {
    let m = v.mobius();
    for order in enumerate_orders(v.ground(), k, OrderFilter::Compatible, cap, guard)? {
        let atlas = build_atlas(&order)?;
        let induced = inverse_mobius(&induced_from_atlas(&atlas, &m));
        if let Some(a) = v.ground().subsets().find(|&a| induced.value(a) < v.value(a)) {
            return Ok(Some((order, a)));
        }
    }
    Ok(None)
}

/// Outcome of testing a point for vertexhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCertificate {
    pub point: MobiusVector,
    pub k: usize,
    pub variant: CoreVariant,
    pub feasible: bool,
    /// First violated row when infeasible.
    pub violated: Option<RowTag>,
    /// Indices into the rows of [`core_constraints`].
    pub tight_rows: Vec<usize>,
    pub tight_tags: Vec<RowTag>,
    pub rank: usize,
    pub num_vars: usize,
    pub is_vertex: bool,
}

/// Checks `m_star` against the chosen core: feasibility, then whether its
/// tight rows have full rank `N(k)`.
pub fn verify_vertex(
    m_star: &MobiusVector,
    v: &GameTable,
    k: usize,
    variant: CoreVariant,
) -> Result<VertexCertificate> {
    same_ground(m_star.ground(), v.ground())?;
    if m_star.max_support_size() > k {
        return Err(Error::domain(format!(
            "point has a nonzero coefficient on a coalition of more than {k} players"
        )));
    }
    let system = core_constraints(v, k, variant)?;
    Ok(certify_in(&system, m_star))
}

fn certify_in(system: &ConstraintSystem, m_star: &MobiusVector) -> VertexCertificate {
    let x = system.coords_of(m_star);
    let violated = system.first_violation(&x).map(|i| system.rows()[i].tag);
    let tight_rows = system.tight_rows(&x);
    let tight_matrix: Vec<Vec<Rational>> = tight_rows.iter().map(|&i| system.rows()[i].coeffs.clone()).collect();
    let rank = linalg::rank(&tight_matrix);
    let feasible = violated.is_none();
    VertexCertificate {
        point: m_star.clone(),
        k: system.k().unwrap_or(0),
        variant: system.variant().unwrap_or(CoreVariant::Plain),
        feasible,
        violated,
        tight_tags: tight_rows.iter().map(|&i| system.rows()[i].tag).collect(),
        tight_rows,
        rank,
        num_vars: system.num_vars(),
        is_vertex: feasible && rank == system.num_vars(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderRequirement {
    /// Strongly compatible orders, certified against `C^k(v)`.
    Strong,
    /// Compatible orders, certified against `C^k_∞(v)`.
    Compatible,
}

impl OrderRequirement {
    pub fn filter(self) -> OrderFilter {
        match self {
            OrderRequirement::Strong => OrderFilter::StronglyCompatible,
            OrderRequirement::Compatible => OrderFilter::Compatible,
        }
    }

    pub fn variant(self) -> CoreVariant {
        match self {
            OrderRequirement::Strong => CoreVariant::Plain,
            OrderRequirement::Compatible => CoreVariant::Infinite,
        }
    }
}

/// One distinct order-induced point.
#[derive(Debug, Clone)]
pub struct OrderVertex {
    pub certificate: VertexCertificate,
    /// First order (in emission order) inducing the point.
    pub order: SubsetOrder,
    /// Number of scanned orders inducing the point.
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct OrderVertexReport {
    pub vertices: Vec<OrderVertex>,
    /// Whether `v` is `(k+1)`-monotone, i.e. whether vertexhood is guaranteed.
    pub guaranteed: bool,
    pub orders_scanned: usize,
    pub truncated: bool,
}

/// Points `v_≺` over all (strongly) compatible orders, deduplicated and
/// certified. Vertices are listed in the order their first order was emitted.
pub fn order_vertices(
    v: &GameTable,
    k: usize,
    require: OrderRequirement,
    cap: Option<usize>,
    guard: EnumerationGuard,
) -> Result<OrderVertexReport> {
    let ground = v.ground();
    let n = ground.n();
    if k < 1 || k > n {
        return Err(Error::domain(format!("k must lie in 1..={n}, got {k}")));
    }
    let guaranteed = k >= n || is_k_monotone(v, k + 1);
    let mut stream = enumerate_orders(ground, k, require.filter(), cap, guard)?;
    let orders: Vec<SubsetOrder> = stream.by_ref().collect();
    let truncated = stream.truncated();
    let m = v.mobius();
    let points: Vec<MobiusVector> = orders
        .par_iter()
        .map(|o| build_atlas(o).map(|atlas| induced_from_atlas(&atlas, &m)))
        .collect::<Result<Vec<_>>>()?;

    let mut first_seen: BTreeMap<&MobiusVector, (usize, usize)> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        first_seen.entry(p).or_insert((i, 0)).1 += 1;
    }
    let mut distinct: Vec<(usize, usize)> = first_seen.values().copied().collect();
    distinct.sort();

    let system = core_constraints(v, k, require.variant())?;
    let vertices = distinct
        .par_iter()
        .map(|&(i, multiplicity)| OrderVertex {
            certificate: certify_in(&system, &points[i]),
            order: orders[i].clone(),
            multiplicity,
        })
        .collect();
    Ok(OrderVertexReport {
        vertices,
        guaranteed,
        orders_scanned: orders.len(),
        truncated,
    })
}

/// Solves `v*(B̌) = v(B̌)` over the variables `m*(B)` with nonempty `A(B)`
/// by forward substitution, after checking the system is lower triangular
/// when variables follow the binary order with players relabelled by their
/// singleton ranks. Variables with empty families are zero.
pub fn triangular_solve(order: &SubsetOrder, v: &GameTable) -> Result<MobiusVector> {
    same_ground(order.ground(), v.ground())?;
    let atlas = build_atlas(order)?;
    let ranks = order.player_ranks();
    let relabel = |s: Subset| -> u32 { s.elements().map(|i| 1u32 << ranks[i]).sum() };

    let mut vars: Vec<(Subset, Subset)> = Vec::new();
    for f in atlas.nonempty() {
        let top = f
            .top()
            .ok_or_else(|| Error::structure(format!("A({}) is not a lattice", f.center())))?;
        vars.push((f.center(), top));
    }
    vars.sort_by_key(|&(b, _)| relabel(b));
    let position: BTreeMap<Subset, usize> = vars.iter().enumerate().map(|(i, &(b, _))| (b, i)).collect();

    let mut solution = MobiusVector::zero(order.ground());
    for (row, &(b, top)) in vars.iter().enumerate() {
        let mut rhs = v.value(top).clone();
        let mut has_diagonal = false;
        for c in top.subsets() {
            let Some(&col) = position.get(&c) else { continue };
            if col > row {
                return Err(Error::structure(format!(
                    "equation for top {top} of {b} uses {c}, which comes later"
                )));
            }
            if col == row {
                has_diagonal = true;
            } else {
                rhs -= solution.coeff(c);
            }
        }
        if !has_diagonal {
            return Err(Error::structure(format!("zero diagonal entry for {b}")));
        }
        solution.set(b, rhs);
    }
    Ok(solution)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrandSign {
    Positive,
    Zero,
    Negative,
}

/// Expected number of vertices of `C^{n-1}(v)`.
pub fn n_minus_1_vertex_count(n: usize, sign: GrandSign) -> usize {
    let half = 1usize << (n - 1);
    let odd = n % 2 == 1;
    match sign {
        GrandSign::Zero => 1,
        GrandSign::Positive if odd => half - 1,
        GrandSign::Positive => half,
        GrandSign::Negative if odd => half - 1,
        GrandSign::Negative => half - 2,
    }
}

#[derive(Debug, Clone)]
pub struct ClosedFormVertex {
    /// The coalition whose dominance row is left slack; `None` when
    /// `m(N) = 0` and the only vertex is `v`.
    pub slack: Option<Subset>,
    pub certificate: VertexCertificate,
}

/// All vertices of `C^{n-1}(v)` from the closed form, each certified.
///
/// For `m(N) ≠ 0` every proper nonempty `B₀` with `|N \ B₀|` odd (if
/// `m(N) > 0`) or even (if `m(N) < 0`) yields the point
/// `m*(K) = m(K) ± (-1)^{|K \ B₀|} m(N)` for `K ⊇ B₀`, `m(K)` otherwise.
pub fn vertices_n_minus_1(v: &GameTable) -> Result<Vec<ClosedFormVertex>> {
    let ground = v.ground();
    let n = ground.n();
    if n < 2 {
        return Err(Error::domain("the k = n - 1 closed form needs at least 2 players"));
    }
    let k = n - 1;
    let full = ground.full();
    let m = v.mobius();
    let grand = m.coeff(full).clone();
    let system = core_constraints(v, k, CoreVariant::Plain)?;
    if grand.is_zero() {
        let certificate = certify_in(&system, &m);
        return Ok(vec![ClosedFormVertex {
            slack: None,
            certificate,
        }]);
    }
    let positive = grand.is_positive();
    let wanted_parity = if positive { 1 } else { 0 };
    let mut out = Vec::new();
    for b0 in ground.nonempty_subsets().filter(|&b| b != full) {
        if full.difference(b0).len() % 2 != wanted_parity {
            continue;
        }
        let mut point = m.clone();
        for kset in b0.supersets_within(full) {
            let sign_flip = kset.difference(b0).len() % 2 == 1;
            // (-1)^{|K \ B0|} m(N), negated again when m(N) < 0
            let delta = if sign_flip == positive {
                -grand.clone()
            } else {
                grand.clone()
            };
            let updated = m.coeff(kset) + delta;
            point.set(kset, updated);
        }
        if !point.coeff(full).is_zero() {
            return Err(Error::internal(format!(
                "closed-form point for B0 = {b0} keeps a nonzero coefficient on N"
            )));
        }
        out.push(ClosedFormVertex {
            slack: Some(b0),
            certificate: certify_in(&system, &point),
        });
    }
    Ok(out)
}

pub fn grand_sign(v: &GameTable) -> GrandSign {
    let m = v.mobius();
    let g = m.coeff(v.ground().full());
    if g.is_positive() {
        GrandSign::Positive
    } else if g.is_negative() {
        GrandSign::Negative
    } else {
        GrandSign::Zero
    }
}

/// An extreme ray of `C^k(v)`, normalised so its first nonzero coordinate is
/// `±1`, or `None` when the core is bounded. The recession cone does not
/// involve `v` beyond its ground set.
pub fn find_ray(v: &GameTable, k: usize) -> Result<Option<MobiusVector>> {
    let system = core_constraints(v, k, CoreVariant::Plain)?;
    let rays = crate::oracle::extreme_rays(&system, crate::oracle::OracleGuard::default())?;
    Ok(rays.into_iter().next().and_then(|d| system.point_of(&d)))
}

/// Whether every nonempty achievable family of `order` is a lattice, the
/// condition [`triangular_solve`] and the vertex certificates rely on.
pub fn all_families_lattices(order: &SubsetOrder) -> Result<bool> {
    Ok(build_atlas(order)?.all_lattices())
}

/// Convenience: whether the point `v_≺` of a strongly compatible order is a
/// vertex of `C^k(v)`, or of `C^k_∞(v)` for a merely compatible one.
pub fn certify_order(order: &SubsetOrder, v: &GameTable) -> Result<VertexCertificate> {
    let report = classify(order);
    if !report.compatible {
        return Err(Error::structure("order is not compatible"));
    }
    let variant = if report.strongly_compatible {
        CoreVariant::Plain
    } else {
        CoreVariant::Infinite
    };
    let point = induced_game(order, v)?;
    verify_vertex(&point, v, order.k(), variant)
}
