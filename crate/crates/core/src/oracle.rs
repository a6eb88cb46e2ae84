//! Brute-force vertex and extreme-ray enumeration.
//!
//! Vertices are found by trying every choice of linearly independent
//! inequality rows that, together with the equality rows, pins down a unique
//! point; the point is kept when it satisfies the whole system. Extreme rays
//! come from the same search on the recession cone, one row short of full
//! rank. A nontrivial lineality space is split off first so that the
//! remaining polyhedron is pointed.
//!
//! The work is exponential in the number of rows and is meant as an
//! independent reference on small instances only.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::corevert::{ConstraintSystem, Relation};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;

/// Caps the number of row subsets the oracle may examine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleGuard {
    pub max_candidates: u128,
}

impl Default for OracleGuard {
    fn default() -> Self {
        OracleGuard {
            max_candidates: 5_000_000,
        }
    }
}

impl OracleGuard {
    pub fn relaxed() -> Self {
        OracleGuard {
            max_candidates: u128::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVertex {
    pub point: Vec<Rational>,
    /// First (lexicographically smallest) set of inequality rows that,
    /// with the equality rows, determines the point.
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedronSummary {
    pub feasible: bool,
    pub bounded: bool,
    pub vertices: Vec<OracleVertex>,
    /// Extreme rays, each scaled so its first nonzero entry is `±1`. Both
    /// signs of every lineality direction are included.
    pub rays: Vec<Vec<Rational>>,
    /// Basis of the lineality space.
    pub lineality: Vec<Vec<Rational>>,
}

impl PolyhedronSummary {
    pub fn vertex_points(&self) -> BTreeSet<Vec<Rational>> {
        self.vertices.iter().map(|v| v.point.clone()).collect()
    }

    pub fn ray_set(&self) -> BTreeSet<Vec<Rational>> {
        self.rays.iter().cloned().collect()
    }
}

/// Rows in echelon form, each augmented with its right-hand side. Row `i`
/// vanishes on the pivots of rows before it, so rows can be pushed and popped
/// as a stack during the search.
#[derive(Debug, Clone)]
struct Echelon {
    width: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

enum Added {
    Independent,
    Dependent { consistent: bool },
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn push(&mut self, coeffs: &[Rational], rhs: &Rational) -> Added {
        let mut r: Vec<Rational> = coeffs.to_vec();
        r.push(rhs.clone());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let Some(p) = (0..self.width).find(|&c| !r[c].is_zero()) else {
            return Added::Dependent {
                consistent: r[self.width].is_zero(),
            };
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        Added::Independent
    }

    fn pop(&mut self) {
        self.rows.pop();
        self.pivots.pop();
    }

    /// Back-substitution with the given free values; rows are solved last to
    /// first since each only involves pivots of later rows.
    fn back_substitute(&self, mut x: Vec<Rational>, homogeneous: bool) -> Vec<Rational> {
        for (row, &p) in self.rows.iter().zip(&self.pivots).rev() {
            let mut acc = if homogeneous {
                Rational::zero()
            } else {
                row[self.width].clone()
            };
            for (c, a) in row[..self.width].iter().enumerate() {
                if c != p && !a.is_zero() && !x[c].is_zero() {
                    acc -= a * &x[c];
                }
            }
            x[p] = acc;
        }
        x
    }

    /// The unique solution once the rank equals the width.
    fn solution(&self) -> Vec<Rational> {
        self.back_substitute(vec![Rational::zero(); self.width], false)
    }

    /// The kernel generator once the rank is one less than the width.
    fn kernel(&self) -> Vec<Rational> {
        let free = (0..self.width)
            .find(|c| !self.pivots.contains(c))
            .expect("rank below width");
        let mut d = vec![Rational::zero(); self.width];
        d[free] = Rational::from_integer(1.into());
        self.back_substitute(d, true)
    }
}

struct Prepared<'a> {
    system: &'a ConstraintSystem,
    inequalities: Vec<usize>,
    lineality: Vec<Vec<Rational>>,
    /// Equality rows plus lineality cuts; `None` when they are inconsistent.
    point_base: Option<Echelon>,
    cone_base: Echelon,
}

impl<'a> Prepared<'a> {
    fn new(system: &'a ConstraintSystem) -> Self {
        let width = system.num_vars();
        let rows = system.rows();
        let all: Vec<Vec<Rational>> = rows.iter().map(|r| r.coeffs.clone()).collect();
        let lineality = linalg::nullspace(&all, width);
        let inequalities = (0..rows.len())
            .filter(|&i| rows[i].relation == Relation::AtLeast)
            .collect();

        let zero = Rational::zero();
        let mut point_base = Some(Echelon::new(width));
        let mut cone_base = Echelon::new(width);
        let equalities = rows
            .iter()
            .filter(|r| r.relation == Relation::Equal)
            .map(|r| (&r.coeffs, &r.rhs))
            .chain(lineality.iter().map(|d| (d, &zero)));
        for (coeffs, rhs) in equalities {
            if let Some(base) = point_base.as_mut() {
                if let Added::Dependent { consistent: false } = base.push(coeffs, rhs) {
                    point_base = None;
                }
            }
            cone_base.push(coeffs, &zero);
        }
        Prepared {
            system,
            inequalities,
            lineality,
            point_base,
            cone_base,
        }
    }

    fn width(&self) -> usize {
        self.system.num_vars()
    }

    fn candidate_count(&self) -> u128 {
        let m = self.inequalities.len() as u128;
        let r = self.cone_base.rank();
        let w = self.width();
        let vertex_need = w.saturating_sub(r) as u128;
        let ray_need = w.saturating_sub(r + 1) as u128;
        binomial(m, vertex_need).saturating_add(if r < w { binomial(m, ray_need) } else { 0 })
    }

    /// Depth-first search over increasing inequality indices, keeping the
    /// chosen rows independent. For each basis of rank `target`, `visit`
    /// may return a vector, which is collected with the rows that produced it.
    fn search<F>(
        &self,
        base: &Echelon,
        target: usize,
        homogeneous: bool,
        first_only: bool,
        visit: &F,
    ) -> Vec<(Vec<Rational>, Vec<usize>)>
    where
        F: Fn(&Echelon) -> Option<Vec<Rational>> + Sync,
    {
        let stop = Search {
            first_only,
            done: AtomicBool::new(false),
        };
        if base.rank() >= target {
            if base.rank() == target {
                if let Some(x) = visit(base) {
                    return vec![(x, Vec::new())];
                }
            }
            return Vec::new();
        }
        let need = target - base.rank();
        let m = self.inequalities.len();
        if need > m {
            return Vec::new();
        }
        (0..=m - need)
            .into_par_iter()
            .map(|first| {
                let mut found = Vec::new();
                let mut chosen = Vec::new();
                let mut echelon = base.clone();
                self.extend(
                    &mut echelon,
                    first,
                    target,
                    homogeneous,
                    &mut chosen,
                    &mut found,
                    visit,
                    &stop,
                );
                found
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn extend<F>(
        &self,
        echelon: &mut Echelon,
        pick: usize,
        target: usize,
        homogeneous: bool,
        chosen: &mut Vec<usize>,
        found: &mut Vec<(Vec<Rational>, Vec<usize>)>,
        visit: &F,
        stop: &Search,
    ) where
        F: Fn(&Echelon) -> Option<Vec<Rational>> + Sync,
    {
        if stop.done.load(Ordering::Relaxed) {
            return;
        }
        let row = &self.system.rows()[self.inequalities[pick]];
        let zero = Rational::zero();
        let rhs = if homogeneous { &zero } else { &row.rhs };
        let Added::Independent = echelon.push(&row.coeffs, rhs) else {
            return;
        };
        chosen.push(self.inequalities[pick]);
        if echelon.rank() == target {
            if let Some(x) = visit(echelon) {
                found.push((x, chosen.clone()));
                if stop.first_only {
                    stop.done.store(true, Ordering::Relaxed);
                }
            }
        } else {
            let need = target - echelon.rank();
            let m = self.inequalities.len();
            for j in pick + 1..m {
                if m - j < need {
                    break;
                }
                self.extend(echelon, j, target, homogeneous, chosen, found, visit, stop);
            }
        }
        chosen.pop();
        echelon.pop();
    }

    fn vertices(&self, first_only: bool) -> Vec<OracleVertex> {
        let Some(base) = &self.point_base else {
            return Vec::new();
        };
        let visit = |e: &Echelon| {
            let x = e.solution();
            self.system.is_feasible_point(&x).then_some(x)
        };
        let hits = self.search(base, self.width(), false, first_only, &visit);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (point, basis) in hits {
            if seen.insert(point.clone()) {
                out.push(OracleVertex { point, basis });
            }
        }
        out
    }

    /// Extreme rays of the pointed part of the recession cone.
    fn pointed_rays(&self) -> Vec<Vec<Rational>> {
        let w = self.width();
        if self.cone_base.rank() >= w {
            return Vec::new();
        }
        let visit = |e: &Echelon| self.oriented(&e.kernel());
        let hits = self.search(&self.cone_base, w - 1, true, false, &visit);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (d, _) in hits {
            let d = linalg::normalize_direction(&d);
            if seen.insert(d.clone()) {
                out.push(d);
            }
        }
        out
    }

    /// `d` or `-d`, whichever satisfies every inequality of the cone.
    fn oriented(&self, d: &[Rational]) -> Option<Vec<Rational>> {
        let rows = self.system.rows();
        let values: Vec<Rational> = self.inequalities.iter().map(|&i| rows[i].lhs(d)).collect();
        if values.iter().all(|x| !x.is_negative()) {
            Some(d.to_vec())
        } else if values.iter().all(|x| !x.is_positive()) {
            Some(d.iter().map(|x| -x).collect())
        } else {
            None
        }
    }
}

struct Search {
    first_only: bool,
    done: AtomicBool,
}

fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for j in 0..r {
        acc = match acc.checked_mul(n - j) {
            Some(x) => x / (j + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn check_guard(prepared: &Prepared<'_>, guard: OracleGuard) -> Result<()> {
    let count = prepared.candidate_count();
    if count > guard.max_candidates {
        return Err(Error::guard(format!(
            "oracle would examine up to {count} row subsets ({} variables, {} inequalities); limit is {}",
            prepared.width(),
            prepared.inequalities.len(),
            guard.max_candidates
        )));
    }
    Ok(())
}

/// Upper bound on the number of row subsets the oracle examines.
pub fn candidate_count(system: &ConstraintSystem) -> u128 {
    Prepared::new(system).candidate_count()
}

/// Every vertex and extreme ray of the polyhedron.
pub fn enumerate_vertices(system: &ConstraintSystem, guard: OracleGuard) -> Result<PolyhedronSummary> {
    let prepared = Prepared::new(system);
    check_guard(&prepared, guard)?;
    let vertices = prepared.vertices(false);
    let feasible = !vertices.is_empty();
    let rays = if feasible { all_rays(&prepared) } else { Vec::new() };
    Ok(PolyhedronSummary {
        feasible,
        bounded: rays.is_empty(),
        vertices,
        rays,
        lineality: prepared.lineality.clone(),
    })
}

fn all_rays(prepared: &Prepared<'_>) -> Vec<Vec<Rational>> {
    let mut rays = prepared.pointed_rays();
    for d in &prepared.lineality {
        let neg: Vec<Rational> = d.iter().map(|x| -x).collect();
        rays.push(linalg::normalize_direction(d));
        rays.push(linalg::normalize_direction(&neg));
    }
    rays
}

/// Extreme rays of the recession cone, whether or not the polyhedron itself
/// is empty.
pub fn extreme_rays(system: &ConstraintSystem, guard: OracleGuard) -> Result<Vec<Vec<Rational>>> {
    let prepared = Prepared::new(system);
    check_guard(&prepared, guard)?;
    Ok(all_rays(&prepared))
}

/// Whether the polyhedron is nonempty. After the lineality space is cut away
/// the polyhedron is pointed, so it is nonempty exactly when it has a vertex.
pub fn is_feasible(system: &ConstraintSystem, guard: OracleGuard) -> Result<bool> {
    let prepared = Prepared::new(system);
    check_guard(&prepared, guard)?;
    Ok(!prepared.vertices(true).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corevert::{core_constraints, verify_vertex, CoreVariant};
    use crate::rational::{frac, int};
    use crate::setfn::{GameTable, MobiusVector};
    use crate::subset::GroundSet;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn example_game() -> GameTable {
        let entries = g(3)
            .nonempty_subsets()
            .map(|a| (a, [frac(1, 10), frac(1, 5), frac(1, 10)][a.len() - 1].clone()));
        MobiusVector::from_entries(g(3), entries).unwrap().to_game()
    }

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn square_has_four_vertices() {
        let sys = ConstraintSystem::custom(
            2,
            vec![
                (ints(&[1, 0]), Relation::AtLeast, int(0)),
                (ints(&[0, 1]), Relation::AtLeast, int(0)),
                (ints(&[-1, 0]), Relation::AtLeast, int(-1)),
                (ints(&[0, -1]), Relation::AtLeast, int(-1)),
            ],
        )
        .unwrap();
        let s = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
        assert!(s.feasible && s.bounded);
        let expected: BTreeSet<Vec<Rational>> = [ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])]
            .into_iter()
            .collect();
        assert_eq!(s.vertex_points(), expected);
    }

    #[test]
    fn orthant_ray_and_lineality() {
        // x >= 0 in the plane: a half-plane with lineality along y
        let sys = ConstraintSystem::custom(2, vec![(ints(&[1, 0]), Relation::AtLeast, int(0))]).unwrap();
        let s = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
        assert!(s.feasible && !s.bounded);
        assert_eq!(s.lineality.len(), 1);
        let rays = s.ray_set();
        assert!(rays.contains(&ints(&[1, 0])));
        assert!(rays.contains(&ints(&[0, 1])) && rays.contains(&ints(&[0, -1])));
    }

    #[test]
    fn empty_system_on_one_variable_is_feasible() {
        let sys = ConstraintSystem::custom(1, vec![]).unwrap();
        assert!(is_feasible(&sys, OracleGuard::default()).unwrap());
        let s = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
        assert!(!s.bounded);
    }

    #[test]
    fn inconsistent_equalities() {
        let sys = ConstraintSystem::custom(
            1,
            vec![
                (ints(&[1]), Relation::Equal, int(0)),
                (ints(&[2]), Relation::Equal, int(1)),
            ],
        )
        .unwrap();
        assert!(!is_feasible(&sys, OracleGuard::default()).unwrap());
        let s = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
        assert!(!s.feasible && s.vertices.is_empty() && s.bounded);
    }

    #[test]
    fn example_core_is_unbounded_with_documented_ray() {
        let v = example_game();
        let sys = core_constraints(&v, 2, CoreVariant::Plain).unwrap();
        let s = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
        assert!(s.feasible && !s.bounded);
        assert!(s.lineality.is_empty());
        // variables in binary order 1, 2, 12, 3, 13, 23
        assert!(s.ray_set().contains(&ints(&[1, 0, -1, 0, 0, 0])));
        for r in &s.rays {
            assert!(sys.is_recession_direction(r));
            let total: Rational = r.iter().sum();
            assert!(total.is_zero());
        }
        for variant in [CoreVariant::Monotone, CoreVariant::Infinite] {
            let sys = core_constraints(&v, 2, variant).unwrap();
            let s = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
            assert!(s.feasible && s.bounded, "{variant}");
        }
    }

    #[test]
    fn oracle_vertices_are_certified_and_vice_versa() {
        let v = example_game();
        for variant in [CoreVariant::Plain, CoreVariant::Monotone, CoreVariant::Infinite] {
            for k in 1..=3 {
                let sys = core_constraints(&v, k, variant).unwrap();
                let s = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
                for vert in &s.vertices {
                    let m = sys.point_of(&vert.point).unwrap();
                    assert!(verify_vertex(&m, &v, k, variant).unwrap().is_vertex);
                }
            }
        }
    }

    #[test]
    fn majority_game_has_empty_classical_core() {
        let v = GameTable::from_fn(g(3), |a| if a.len() >= 2 { int(1) } else { int(0) }).unwrap();
        let k1 = core_constraints(&v, 1, CoreVariant::Plain).unwrap();
        assert!(!is_feasible(&k1, OracleGuard::default()).unwrap());
        for k in 2..=3 {
            let sys = core_constraints(&v, k, CoreVariant::Plain).unwrap();
            assert!(is_feasible(&sys, OracleGuard::default()).unwrap());
        }
    }

    #[test]
    fn k_equals_n_core_is_the_game() {
        let v = example_game();
        let sys = core_constraints(&v, 3, CoreVariant::Plain).unwrap();
        let s = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
        assert_eq!(s.vertices.len(), 1);
        assert_eq!(sys.point_of(&s.vertices[0].point).unwrap(), v.mobius());
        // v* may exceed v anywhere below N
        assert!(!s.bounded);
    }

    #[test]
    fn guard_refuses_large_searches() {
        let v = GameTable::from_fn(g(4), |a| int(a.len() as i64)).unwrap();
        let sys = core_constraints(&v, 3, CoreVariant::Monotone).unwrap();
        assert!(candidate_count(&sys) > OracleGuard::default().max_candidates);
        assert!(matches!(
            enumerate_vertices(&sys, OracleGuard::default()),
            Err(Error::Guard(_))
        ));
        let small = core_constraints(&v, 3, CoreVariant::Plain).unwrap();
        assert!(enumerate_vertices(&small, OracleGuard::default()).is_ok());
    }

    #[test]
    fn rays_ignore_the_game() {
        let a = example_game();
        let b = GameTable::from_fn(g(3), |s| int((s.bits() as i64 * 7) % 5)).unwrap();
        let ra: BTreeSet<_> = extreme_rays(
            &core_constraints(&a, 2, CoreVariant::Plain).unwrap(),
            OracleGuard::default(),
        )
        .unwrap()
        .into_iter()
        .collect();
        let rb: BTreeSet<_> = extreme_rays(
            &core_constraints(&b, 2, CoreVariant::Plain).unwrap(),
            OracleGuard::default(),
        )
        .unwrap()
        .into_iter()
        .collect();
        assert!(!ra.is_empty());
        assert_eq!(ra, rb);
    }

    #[test]
    fn binomial_saturates() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(binomial(300, 150), u128::MAX);
    }
}
