//! Games, Möbius transforms and the monotonicity classifiers.
//!
//! A game is stored densely over all `2^n` coalitions. Its Möbius transform
//! (the dividends) is stored the same way with the empty-set slot pinned to
//! zero. Both transforms run as in-place butterflies over the `n` coordinate
//! bits, `O(n 2^n)` exact additions.
//!
//! Monotonicity and k-monotonicity are decided through interval sums of the
//! Möbius transform: a game is monotone iff every `[i, B]` interval sums to a
//! nonnegative value, and k-monotone iff every `[A, B]` with `2 <= |A| <= k`
//! does.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::subset::{binomial, GroundSet, Subset};

/// A game `v : 2^N -> Q` with `v(∅) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTable {
    ground: GroundSet,
    values: Vec<Rational>,
}

impl GameTable {
    pub fn new(ground: GroundSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != ground.size() {
            return Err(Error::domain(format!(
                "game on {} players needs {} values, got {}",
                ground.n(),
                ground.size(),
                values.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(Error::input("a game must vanish on the empty coalition"));
        }
        Ok(GameTable { ground, values })
    }

    pub fn from_fn(ground: GroundSet, mut f: impl FnMut(Subset) -> Rational) -> Result<Self> {
        let values = ground.subsets().map(&mut f).collect();
        GameTable::new(ground, values)
    }

    pub fn zero(ground: GroundSet) -> Self {
        GameTable {
            ground,
            values: vec![Rational::zero(); ground.size()],
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn value(&self, s: Subset) -> &Rational {
        &self.values[s.index()]
    }

    pub fn grand(&self) -> &Rational {
        self.value(self.ground.full())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn mobius(&self) -> MobiusVector {
        mobius_transform(self)
    }

    /// Monotonicity via the Möbius interval condition on `[i, B]`.
    pub fn is_monotone(&self) -> bool {
        is_monotone(self)
    }

    pub fn is_k_monotone(&self, k: usize) -> bool {
        is_k_monotone(self, k)
    }
}

/// Möbius coefficients `m(A)` for every coalition; `m(∅) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MobiusVector {
    ground: GroundSet,
    coeffs: Vec<Rational>,
}

impl MobiusVector {
    pub fn new(ground: GroundSet, mut coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != ground.size() {
            return Err(Error::domain(format!(
                "Möbius vector on {} players needs {} coefficients, got {}",
                ground.n(),
                ground.size(),
                coeffs.len()
            )));
        }
        coeffs[0] = Rational::zero();
        Ok(MobiusVector { ground, coeffs })
    }

    pub fn zero(ground: GroundSet) -> Self {
        MobiusVector {
            ground,
            coeffs: vec![Rational::zero(); ground.size()],
        }
    }

    /// Builds a vector from `(subset, coefficient)` pairs; unlisted subsets are 0.
    pub fn from_entries<I>(ground: GroundSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, Rational)>,
    {
        let mut m = MobiusVector::zero(ground);
        for (s, q) in entries {
            if s.is_empty() || !ground.contains(s) {
                return Err(Error::domain(format!(
                    "coefficient index {s} not a nonempty subset of N"
                )));
            }
            m.coeffs[s.index()] = q;
        }
        Ok(m)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn coeff(&self, s: Subset) -> &Rational {
        &self.coeffs[s.index()]
    }

    pub fn set(&mut self, s: Subset, q: Rational) {
        assert!(!s.is_empty(), "m(∅) is fixed at 0");
        self.coeffs[s.index()] = q;
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Nonzero coefficients in binary order.
    pub fn support(&self) -> impl Iterator<Item = (Subset, &Rational)> {
        self.ground
            .nonempty_subsets()
            .map(move |s| (s, &self.coeffs[s.index()]))
            .filter(|(_, q)| !q.is_zero())
    }

    pub fn degree(&self) -> Result<usize> {
        additivity_degree(self)
    }

    /// Largest `|A|` with a nonzero coefficient, or 0 for the zero vector.
    pub fn max_support_size(&self) -> usize {
        self.support().map(|(s, _)| s.len()).max().unwrap_or(0)
    }

    /// Copy with every coefficient above cardinality `k` set to zero.
    pub fn truncated(&self, k: usize) -> MobiusVector {
        let mut out = self.clone();
        for s in self.ground.nonempty_subsets().filter(|s| s.len() > k) {
            out.coeffs[s.index()] = Rational::zero();
        }
        out
    }

    /// `v(A) = Σ_{B ⊆ A} m(B)` at a single coalition.
    pub fn game_value(&self, a: Subset) -> Rational {
        a.subsets().map(|b| &self.coeffs[b.index()]).sum()
    }

    pub fn to_game(&self) -> GameTable {
        inverse_mobius(self)
    }

    /// Coefficients listed over `P^k_*(N)` in binary order.
    pub fn bounded_coords(&self, k: usize) -> Vec<Rational> {
        self.ground
            .bounded_subsets(k)
            .map(|s| self.coeffs[s.index()].clone())
            .collect()
    }

    /// Inverse of [`MobiusVector::bounded_coords`].
    pub fn from_bounded_coords(ground: GroundSet, k: usize, coords: &[Rational]) -> Result<Self> {
        let vars: Vec<Subset> = ground.bounded_subsets(k).collect();
        if vars.len() != coords.len() {
            return Err(Error::domain(format!(
                "expected {} coordinates over P^{k}_*, got {}",
                vars.len(),
                coords.len()
            )));
        }
        MobiusVector::from_entries(ground, vars.into_iter().zip(coords.iter().cloned()))
    }
}

/// `m(A) = Σ_{B ⊆ A} (-1)^{|A \ B|} v(B)`.
pub fn mobius_transform(v: &GameTable) -> MobiusVector {
    let mut a = v.values.clone();
    let size = a.len();
    for bit in 0..v.n() {
        let step = 1usize << bit;
        for mask in 0..size {
            if mask & step != 0 {
                let lower = a[mask ^ step].clone();
                a[mask] -= lower;
            }
        }
    }
    MobiusVector {
        ground: v.ground,
        coeffs: a,
    }
}

/// `v(A) = Σ_{B ⊆ A} m(B)`.
pub fn inverse_mobius(m: &MobiusVector) -> GameTable {
    let mut a = m.coeffs.clone();
    let size = a.len();
    for bit in 0..m.n() {
        let step = 1usize << bit;
        for mask in 0..size {
            if mask & step != 0 {
                let lower = a[mask ^ step].clone();
                a[mask] += lower;
            }
        }
    }
    GameTable {
        ground: m.ground,
        values: a,
    }
}

/// All interval sums `Σ_{L ∈ [lower, B]} m(L)` for `B ⊇ lower`, as
/// `(B, sum)` pairs in increasing numeric order of `B`.
pub fn interval_sums(m: &MobiusVector, lower: Subset) -> Vec<(Subset, Rational)> {
    let rest = m.ground.full().difference(lower);
    // submasks of `rest` come out in the same order as their compressed index
    let uppers: Vec<Subset> = rest.subsets().map(|c| lower.union(c)).collect();
    let mut sums: Vec<Rational> = uppers.iter().map(|s| m.coeff(*s).clone()).collect();
    let r = rest.len();
    for bit in 0..r {
        let step = 1usize << bit;
        for idx in 0..sums.len() {
            if idx & step != 0 {
                let lower_val = sums[idx ^ step].clone();
                sums[idx] += lower_val;
            }
        }
    }
    uppers.into_iter().zip(sums).collect()
}

pub fn is_monotone(v: &GameTable) -> bool {
    let m = mobius_transform(v);
    v.ground.players().all(|i| {
        interval_sums(&m, Subset::singleton(i))
            .iter()
            .all(|(_, q)| !q.is_negative())
    })
}

/// Plain definitional check: `v(A) <= v(A ∪ i)` for every coalition and
/// player, which by transitivity covers every pair `A ⊆ B`.
pub fn is_monotone_by_definition(v: &GameTable) -> bool {
    v.ground.subsets().all(|a| {
        v.ground
            .players()
            .filter(|&i| !a.contains(i))
            .all(|i| v.value(a) <= v.value(a.with(i)))
    })
}

/// k-monotonicity for `k >= 2`. Values of `k` above `n` behave like `n`:
/// there are no coalitions larger than `N` to constrain.
pub fn is_k_monotone(v: &GameTable, k: usize) -> bool {
    assert!(k >= 2, "k-monotonicity is defined for k >= 2");
    let m = mobius_transform(v);
    is_k_monotone_mobius(&m, k)
}

pub(crate) fn is_k_monotone_mobius(m: &MobiusVector, k: usize) -> bool {
    let k = k.min(m.n());
    m.ground
        .nonempty_subsets()
        .filter(|a| a.len() >= 2 && a.len() <= k)
        .all(|a| interval_sums(m, a).iter().all(|(_, q)| !q.is_negative()))
}

/// k-monotone for every `k >= 2`; equivalent to `n`-monotonicity, i.e.
/// `m(A) >= 0` for all `|A| >= 2`.
pub fn is_infinitely_monotone(v: &GameTable) -> bool {
    if v.n() < 2 {
        return true;
    }
    is_k_monotone(v, v.n())
}

pub fn additivity_degree(m: &MobiusVector) -> Result<usize> {
    match m.max_support_size() {
        0 => Err(Error::DegreeUndefined),
        k => Ok(k),
    }
}

/// `u_A(B) = 1` iff `B ⊇ A`.
pub fn unanimity_game(ground: GroundSet, a: Subset) -> Result<GameTable> {
    if a.is_empty() || !ground.contains(a) {
        return Err(Error::domain("unanimity game needs a nonempty centre inside N"));
    }
    GameTable::from_fn(ground, |b| if a.is_subset_of(b) { int(1) } else { int(0) })
}

/// Bounds on the Möbius coefficient of a coalition of size `a` in a monotone
/// game with grand-coalition worth `grand`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusBound {
    pub cardinality: usize,
    /// Binomial index for the upper bound, `C(a-1, l)`.
    pub l: i64,
    /// Binomial index for the lower bound, `C(a-1, l')`.
    pub l_prime: i64,
    /// Second admissible `l` when `a ≡ 3 (mod 4)`.
    pub l_alt: Option<i64>,
    /// Second admissible `l'` when `a ≡ 1 (mod 4)`.
    pub l_prime_alt: Option<i64>,
    pub lower: Rational,
    pub upper: Rational,
}

impl MobiusBound {
    pub fn contains(&self, q: &Rational) -> bool {
        &self.lower <= q && q <= &self.upper
    }
}

fn binomial_signed(n: i64, r: i64) -> u64 {
    if r < 0 || n < 0 || r > n {
        0
    } else {
        binomial(n as u64, r as u64)
    }
}

pub fn mobius_bounds(a: usize, grand: &Rational) -> Result<MobiusBound> {
    if a < 1 {
        return Err(Error::domain("Möbius bounds need a coalition size of at least 1"));
    }
    let s = a as i64;
    let (l, l_alt, l_prime, l_prime_alt) = match a % 4 {
        0 => (s / 2, None, s / 2 - 1, None),
        1 => ((s - 1) / 2, None, (s - 3) / 2, Some((s + 1) / 2)),
        2 => (s / 2 - 1, None, s / 2, None),
        _ => ((s - 3) / 2, Some((s + 1) / 2), (s - 1) / 2, None),
    };
    let upper = Rational::from_integer(binomial_signed(s - 1, l).into()) * grand;
    let lower = -(Rational::from_integer(binomial_signed(s - 1, l_prime).into()) * grand);
    Ok(MobiusBound {
        cardinality: a,
        l,
        l_prime,
        l_alt,
        l_prime_alt,
        lower,
        upper,
    })
}

fn random_positive(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(1..=30);
    let den: i64 = rng.gen_range(1..=8);
    crate::rational::frac(num, den)
}

/// Game whose Möbius coefficients are positive random rationals on every
/// coalition of size `1..=k_cap` and zero above. Such games are monotone and
/// infinitely monotone.
pub fn random_totally_monotone_game(seed: u64, n: usize, k_cap: usize) -> Result<GameTable> {
    let ground = GroundSet::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = MobiusVector::zero(ground);
    for s in ground.bounded_subsets(k_cap) {
        m.set(s, random_positive(&mut rng));
    }
    Ok(inverse_mobius(&m))
}

/// [`random_monotone_game`] from a fresh generator seeded with `seed`.
pub fn seeded_monotone_game(seed: u64, n: usize) -> Result<GameTable> {
    random_monotone_game(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

/// Random monotone game with `v(N) = 1`.
///
/// Every other draw is a 0/1 game built from a random up-closed family; those
/// are the extreme monotone games, where the Möbius coefficients are largest
/// in magnitude. The rest add random nonnegative increments along coalition
/// size and are normalised by `v(N)`.
pub fn random_monotone_game(rng: &mut ChaCha8Rng, n: usize) -> Result<GameTable> {
    let ground = GroundSet::new(n)?;
    let full = ground.full();
    let mut values = vec![Rational::zero(); ground.size()];
    if rng.gen_bool(0.5) {
        let density: f64 = rng.gen_range(0.1..0.9);
        // coalitions visited by increasing size so that supersets see their
        // subsets' final value first
        let mut order: Vec<Subset> = ground.nonempty_subsets().collect();
        order.sort_by_key(|s| (s.len(), s.bits()));
        for s in order {
            let forced = s.elements().any(|i| values[s.without(i).index()] == int(1));
            let winning = s == full || forced || rng.gen_bool(density);
            values[s.index()] = if winning { int(1) } else { int(0) };
        }
    } else {
        let mut order: Vec<Subset> = ground.nonempty_subsets().collect();
        order.sort_by_key(|s| (s.len(), s.bits()));
        for s in order {
            let floor = s
                .elements()
                .map(|i| values[s.without(i).index()].clone())
                .max()
                .unwrap_or_else(Rational::zero);
            let bump = if rng.gen_bool(0.3) {
                Rational::zero()
            } else {
                crate::rational::frac(rng.gen_range(0..=12), rng.gen_range(1..=6))
            };
            values[s.index()] = floor + bump;
        }
        let grand = values[full.index()].clone();
        if grand.is_zero() {
            values[full.index()] = int(1);
        } else {
            for q in values.iter_mut() {
                *q /= grand.clone();
            }
        }
    }
    GameTable::new(ground, values)
}
