//! End-to-end acceptance checks, each run against a wall-clock bound.
//!
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kcore::achievable::{build_atlas, check_interval_property, FamilyAtlas};
use kcore::corevert::{
    core_constraints, find_domination_violation, induced_game, order_vertices, triangular_solve, verify_vertex,
    vertices_n_minus_1, CoreVariant, OrderRequirement,
};
use kcore::oracle::{enumerate_vertices, extreme_rays, OracleGuard};
use kcore::orders::{classify, enumerate_orders, EnumerationGuard, OrderFilter, SubsetOrder};
use kcore::rational::{frac, int, Rational};
use kcore::setfn::{
    is_k_monotone, mobius_bounds, random_monotone_game, random_totally_monotone_game, GameTable, MobiusVector,
};
use kcore::{GroundSet, Subset};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn g(n: usize) -> GroundSet {
    GroundSet::new(n).unwrap()
}

fn s(word: &str) -> Subset {
    Subset::from_elements(word.chars().map(|c| c.to_digit(10).unwrap() as usize))
}

fn sets(list: &str) -> BTreeSet<Subset> {
    list.split_whitespace().map(s).collect()
}

fn order(n: usize, k: usize, list: &str) -> SubsetOrder {
    SubsetOrder::from_sequence(g(n), k, list.split_whitespace().map(s).collect()).unwrap()
}

fn family(atlas: &FamilyAtlas, b: &str) -> BTreeSet<Subset> {
    atlas.family(s(b)).members().iter().copied().collect()
}

fn game_from_mobius(n: usize, entries: &[(&str, Rational)]) -> GameTable {
    MobiusVector::from_entries(g(n), entries.iter().map(|(w, q)| (s(w), q.clone())))
        .unwrap()
        .to_game()
}

/// m = 1/10, 1/5, 1/10 on singletons, pairs and N.
fn example_game() -> GameTable {
    let entries = g(3)
        .nonempty_subsets()
        .map(|a| (a, [frac(1, 10), frac(1, 5), frac(1, 10)][a.len() - 1].clone()));
    MobiusVector::from_entries(g(3), entries).unwrap().to_game()
}

/// 2-monotone but not 3-monotone.
fn bad_game() -> GameTable {
    game_from_mobius(3, &[("12", int(1)), ("13", int(1)), ("23", int(1)), ("123", int(-1))])
}

fn all_orders(filter: OrderFilter) -> Vec<SubsetOrder> {
    enumerate_orders(g(3), 2, filter, None, EnumerationGuard::default())
        .unwrap()
        .collect()
}

fn oracle_points(v: &GameTable, k: usize, variant: CoreVariant) -> BTreeSet<MobiusVector> {
    let sys = core_constraints(v, k, variant).unwrap();
    let summary = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
    summary
        .vertices
        .iter()
        .map(|x| sys.point_of(&x.point).unwrap())
        .collect()
}

/// Direct check of `v* >= v` with equality on `N`.
fn dominates_directly(v_star: &GameTable, v: &GameTable) -> Option<Subset> {
    let full = v.ground().full();
    if v_star.value(full) != v.value(full) {
        return Some(full);
    }
    v.ground().nonempty_subsets().find(|&a| v_star.value(a) < v.value(a))
}

fn same_direction(a: &[Rational], b: &[Rational]) -> bool {
    let Some(i) = a.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if b[i].is_zero() {
        return false;
    }
    let ratio = &b[i] / &a[i];
    ratio.is_positive() && a.iter().zip(b).all(|(x, y)| &(x * &ratio) == y)
}

fn atlas_examples() -> Outcome {
    let atlas = build_atlas(&order(3, 2, "1 2 12 13 23 3")).unwrap();
    for (b, want) in [
        ("1", "1"),
        ("2", "2"),
        ("12", "12"),
        ("13", ""),
        ("23", ""),
        ("3", "3 13 23 123"),
    ] {
        ensure!(family(&atlas, b) == sets(want), "n=3: A({b}) = {:?}", family(&atlas, b));
    }
    for list in ["2 3 24 12 4 13 34 1 23 14", "3 4 34 2 24 1 13 12 23 14"] {
        let atlas = build_atlas(&order(4, 2, list)).unwrap();
        ensure!(
            family(&atlas, "23") == sets("23 123 234"),
            "order {list}: A(23) = {:?}",
            family(&atlas, "23")
        );
    }
    let atlas = build_atlas(&order(4, 2, "1 3 2 12 23 13 4 14 24 34")).unwrap();
    ensure!(
        family(&atlas, "34") == sets("34 134 234 1234"),
        "lattice example: A(34) wrong"
    );
    Ok("three examples reproduced".into())
}

fn partition() -> Outcome {
    let orders = all_orders(OrderFilter::All);
    ensure!(orders.len() == 720, "{} orders enumerated", orders.len());
    for o in &orders {
        let atlas = build_atlas(o).unwrap();
        let mut count = vec![0usize; 8];
        for f in atlas.nonempty() {
            for a in f.members() {
                count[a.index()] += 1;
            }
        }
        ensure!(
            count[1..].iter().all(|&c| c == 1),
            "order {:?}: coverage {:?}",
            o.sequence(),
            count
        );
    }
    Ok("720 orders, no violations".into())
}

fn interval() -> Outcome {
    let orders = all_orders(OrderFilter::Compatible);
    for o in &orders {
        let atlas = build_atlas(o).unwrap();
        for f in atlas.nonempty() {
            let members: BTreeSet<Subset> = f.members().iter().copied().collect();
            let union = members.iter().fold(Subset::EMPTY, |acc, &a| acc.union(a));
            let interval: BTreeSet<Subset> = f.center().supersets_within(union).collect();
            ensure!(
                members == interval,
                "order {:?}: A({}) is not an interval",
                o.sequence(),
                f.center()
            );
        }
        ensure!(
            check_interval_property(&atlas),
            "library disagrees on {:?}",
            o.sequence()
        );
    }
    let counter = order(4, 2, "3 4 34 2 24 1 13 12 23 14");
    ensure!(
        classify(&counter).subset_compatible,
        "counterexample is not ⊆-compatible"
    );
    ensure!(
        !check_interval_property(&build_atlas(&counter).unwrap()),
        "counterexample reported as interval"
    );
    Ok(format!(
        "{} compatible orders, counterexample non-interval",
        orders.len()
    ))
}

fn classical_core() -> Outcome {
    let v = random_totally_monotone_game(11, 4, 4).unwrap();
    ensure!(is_k_monotone(&v, 2), "instance is not convex");
    let ground = g(4);
    let mut marginals = BTreeSet::new();
    let mut perm = vec![1, 2, 3, 4];
    permutohedron_each(&mut perm, &mut |p| {
        let mut prefix = Subset::EMPTY;
        let mut m = MobiusVector::zero(ground);
        for &i in p.iter() {
            let next = prefix.with(i);
            m.set(Subset::singleton(i), v.value(next) - v.value(prefix));
            prefix = next;
        }
        marginals.insert(m);
    });
    let oracle = oracle_points(&v, 1, CoreVariant::Plain);
    ensure!(
        marginals == oracle,
        "{} marginal vectors vs {} oracle vertices",
        marginals.len(),
        oracle.len()
    );
    Ok(format!("{} vertices", oracle.len()))
}

/// Heap's algorithm.
fn permutohedron_each(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    fn go(k: usize, items: &mut [usize], f: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            f(items);
            return;
        }
        for i in 0..k - 1 {
            go(k - 1, items, f);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
        go(k - 1, items, f);
    }
    let len = items.len();
    go(len, items, f);
}

fn domination() -> Outcome {
    let v = example_game();
    ensure!(is_k_monotone(&v, 3), "instance is not 3-monotone");
    let orders = all_orders(OrderFilter::Compatible);
    for o in &orders {
        let vs = induced_game(o, &v).unwrap().to_game();
        if let Some(a) = dominates_directly(&vs, &v) {
            return Err(format!("order {:?} fails at {a}", o.sequence()));
        }
    }
    let bad = bad_game();
    ensure!(
        is_k_monotone(&bad, 2) && !is_k_monotone(&bad, 3),
        "necessity game has wrong monotonicity"
    );
    let Some((o, a)) = find_domination_violation(&bad, 2, None, EnumerationGuard::default()).unwrap() else {
        return Err("no violating order found".into());
    };
    ensure!(classify(&o).compatible, "witness order is not compatible");
    let vs = induced_game(&o, &bad).unwrap().to_game();
    ensure!(
        dominates_directly(&vs, &bad).is_some(),
        "witness does not violate domination"
    );
    Ok(format!(
        "{} compatible orders dominate; witness fails at {a}",
        orders.len()
    ))
}

fn strong_vertices() -> Outcome {
    let v = example_game();
    let report = order_vertices(&v, 2, OrderRequirement::Strong, None, EnumerationGuard::default()).unwrap();
    let mut points = BTreeSet::new();
    for x in &report.vertices {
        let cert = verify_vertex(&x.certificate.point, &v, 2, CoreVariant::Plain).unwrap();
        ensure!(
            cert.is_vertex && cert.rank == 6,
            "point {:?} has rank {}",
            x.certificate.point,
            cert.rank
        );
        points.insert(x.certificate.point.clone());
    }
    ensure!(
        !points.is_empty() && points.len() <= 3,
        "{} distinct points",
        points.len()
    );
    Ok(format!(
        "{} orders, {} distinct vertices",
        report.orders_scanned,
        points.len()
    ))
}

fn triangular() -> Outcome {
    let orders = all_orders(OrderFilter::Compatible);
    let games = [example_game(), bad_game()];
    for v in &games {
        for o in &orders {
            let solved = triangular_solve(o, v).map_err(|e| e.to_string())?;
            ensure!(solved == induced_game(o, v).unwrap(), "mismatch on {:?}", o.sequence());
        }
    }
    Ok(format!("{} order/game pairs", orders.len() * games.len()))
}

fn unbounded() -> Outcome {
    let v = example_game();
    let sys = core_constraints(&v, 2, CoreVariant::Plain).unwrap();
    let summary = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
    ensure!(
        summary.feasible && !summary.bounded,
        "feasible={} bounded={}",
        summary.feasible,
        summary.bounded
    );
    let ray = MobiusVector::from_entries(g(3), [(s("1"), int(1)), (s("12"), int(-1))]).unwrap();
    let target = sys.coords_of(&ray);
    ensure!(
        summary.rays.iter().any(|r| same_direction(&target, r)),
        "ray not found among {:?}",
        summary.rays
    );
    for variant in [CoreVariant::Monotone, CoreVariant::Infinite] {
        let sys = core_constraints(&v, 2, variant).unwrap();
        let summary = enumerate_vertices(&sys, OracleGuard::default()).unwrap();
        ensure!(
            summary.feasible && summary.bounded,
            "{variant} variant is not bounded and feasible"
        );
    }
    Ok(format!(
        "{} rays; monotone and infinite variants bounded",
        summary.rays.len()
    ))
}

fn n_minus_1() -> Outcome {
    let cases: [(usize, Rational, usize, usize); 4] = [
        (3, frac(1, 2), 3, 1),
        (3, int(0), 1, 0),
        (3, frac(-1, 3), 3, 0),
        (4, frac(2, 5), 8, 1),
    ];
    let mut notes = Vec::new();
    for (n, grand, expected, parity) in cases {
        let full = g(n).full();
        let entries: Vec<(Subset, Rational)> = g(n)
            .nonempty_subsets()
            .map(|a| {
                let q = if a == full {
                    grand.clone()
                } else {
                    frac((a.bits() as i64 * 5) % 7 - 2, 3)
                };
                (a, q)
            })
            .collect();
        let v = MobiusVector::from_entries(g(n), entries).unwrap().to_game();
        let closed = vertices_n_minus_1(&v).unwrap();
        let points: BTreeSet<MobiusVector> = closed.iter().map(|x| x.certificate.point.clone()).collect();
        ensure!(
            closed.iter().all(|x| x.certificate.is_vertex),
            "n={n}: a closed-form point does not certify"
        );
        ensure!(
            points.len() == expected,
            "n={n} m(N)={grand}: {} vertices",
            points.len()
        );
        if grand.is_zero() {
            ensure!(points == BTreeSet::from([v.mobius()]), "m(N)=0: vertex is not v");
        } else {
            for x in &closed {
                let b0 = x.slack.expect("slack set");
                ensure!(
                    full.difference(b0).len() % 2 == parity,
                    "n={n}: B0={b0} has the wrong parity"
                );
            }
        }
        let oracle = oracle_points(&v, n - 1, CoreVariant::Plain);
        ensure!(points == oracle, "n={n} m(N)={grand}: closed form differs from oracle");
        if n == 4 {
            let big: BTreeSet<MobiusVector> = closed
                .iter()
                .filter(|x| x.slack.is_some_and(|b| b.len() == 3))
                .map(|x| x.certificate.point.clone())
                .collect();
            let report = order_vertices(
                &v,
                3,
                OrderRequirement::Strong,
                Some(200_000),
                EnumerationGuard::default(),
            )
            .unwrap();
            let strong: BTreeSet<MobiusVector> = report
                .vertices
                .iter()
                .filter(|x| x.certificate.is_vertex)
                .map(|x| x.certificate.point.clone())
                .collect();
            ensure!(big.len() == 4, "{} vertices with |B0| = 3", big.len());
            ensure!(big == strong, "|B0| = 3 vertices differ from strong-order vertices");
        }
        notes.push(format!("n={n}:{}", points.len()));
    }
    Ok(notes.join(" "))
}

fn ray_invariance() -> Outcome {
    let a = example_game();
    let b = game_from_mobius(3, &[("1", int(2)), ("23", frac(-1, 4)), ("123", frac(3, 2))]);
    ensure!(a != b, "games coincide");
    let rays = |v: &GameTable| -> BTreeSet<Vec<Rational>> {
        let sys = core_constraints(v, 2, CoreVariant::Plain).unwrap();
        extreme_rays(&sys, OracleGuard::default())
            .unwrap()
            .into_iter()
            .collect()
    };
    let (ra, rb) = (rays(&a), rays(&b));
    ensure!(!ra.is_empty(), "no rays found");
    ensure!(ra == rb, "ray sets differ: {} vs {}", ra.len(), rb.len());
    Ok(format!("{} rays in both", ra.len()))
}

fn mobius_bound_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..1000 {
        let v = random_monotone_game(&mut rng, 4).unwrap();
        ensure!(v.is_monotone(), "trial {trial}: game is not monotone");
        let m = v.mobius();
        for a in g(4).nonempty_subsets() {
            let bound = mobius_bounds(a.len(), v.grand()).unwrap();
            ensure!(
                bound.contains(m.coeff(a)),
                "trial {trial}: m({a}) = {} out of bounds",
                m.coeff(a)
            );
        }
    }
    Ok("1000 games".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("atlas examples", 1, atlas_examples),
        ("partition of nonempty coalitions", 5, partition),
        ("interval families under compatibility", 10, interval),
        ("k=1 core vertices are marginal vectors", 30, classical_core),
        ("domination by induced games", 30, domination),
        ("strongly compatible orders give vertices", 10, strong_vertices),
        ("triangular solve matches induced game", 10, triangular),
        ("unbounded example core and its ray", 10, unbounded),
        ("k = n-1 vertices in every sign case", 60, n_minus_1),
        ("rays independent of the game", 10, ray_invariance),
        ("Möbius bounds for monotone games", 30, mobius_bound_property),
    ];
    let mut failed = 0;
    for (i, (name, bound, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(*bound);
        let (status, detail) = match outcome {
            Ok(d) if elapsed < limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; exceeded {bound} s")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} {:>2} {name} ({:.2} s / {bound} s): {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    } else {
        println!("all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    }
}
