//! Exact models of the finite groups behind the presentations, and counts
//! that predict ring ranks independently of any presentation.
//!
//! The rank prediction is the number of conjugacy classes of commuting
//! `s`-tuples of 2-power-order elements (the Euler-characteristic count of
//! the Hopkins–Kuhn–Ravenel character theory).

pub mod quad;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use num_rational::Ratio;
use thiserror::Error;

pub use quad::{QuadRational, Quaternion, Rational};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("closure produced more than the expected {expected} elements")]
    ClosureExceeded { expected: usize },
    #[error("closure produced {found} elements, expected {expected}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("enumeration budget exceeded: more than {limit} tuples")]
    BudgetExceeded { limit: usize },
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("element index {0} is not in the group")]
    ForeignElement(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Generalized quaternion group of order `2^{m+2}` (`Q(1)` is `Q_8`).
    Q(u32),
    TwoT,
    TwoO,
    TwoI,
    /// `Z/2^k`.
    Cyclic(u32),
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Q(m) => write!(f, "Q_{}", 1u64 << (m + 2)),
            GroupKind::TwoT => write!(f, "2T"),
            GroupKind::TwoO => write!(f, "2O"),
            GroupKind::TwoI => write!(f, "2I"),
            GroupKind::Cyclic(k) => write!(f, "Z/{}", 1u64 << k),
        }
    }
}

/// A group element in one of the concrete models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Quat(Quaternion),
    /// `a^power · b^flip` in `⟨a, b | a^{2n}, b² = a^n, bab⁻¹ = a⁻¹⟩`.
    Dicyclic { power: u32, flip: bool },
    Cyclic(u32),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Quat(q) => write!(f, "{q}"),
            GroupElement::Dicyclic { power, flip } => {
                write!(f, "a^{power}{}", if *flip { "·b" } else { "" })
            }
            GroupElement::Cyclic(n) => write!(f, "{n}"),
        }
    }
}

/// A finite group as an element list with a full multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub kind: GroupKind,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    table: Vec<Vec<u32>>,
    identity: usize,
    inverse: Vec<usize>,
    orders: Vec<u32>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, e: &GroupElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g·x·g⁻¹`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverse[g])
    }

    pub fn element_order(&self, a: usize) -> u32 {
        self.orders[a]
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.commute(a, b)))
    }

    /// Multiplication-table dump: `order N`, then `N` rows of
    /// space-separated product indices (row `a`, column `b` holds `a·b`).
    pub fn table_dump(&self) -> String {
        let mut out = format!("order {}\n", self.order());
        for row in &self.table {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    fn from_elements(kind: GroupKind, elements: Vec<GroupElement>, mul: impl Fn(&GroupElement, &GroupElement) -> GroupElement) -> Result<Self, OracleError> {
        let n = elements.len();
        let index: HashMap<GroupElement, usize> = elements.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut table = vec![vec![0u32; n]; n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let p = mul(a, b);
                let k = *index.get(&p).ok_or(OracleError::ClosureExceeded { expected: n })?;
                table[i][j] = k as u32;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| OracleError::InvalidParameter("no identity element".into()))?;
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] as usize == identity))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| OracleError::InvalidParameter("element without inverse".into()))?;
        let orders = (0..n)
            .map(|a| {
                let (mut x, mut k) = (a, 1u32);
                while x != identity {
                    x = table[x][a] as usize;
                    k += 1;
                }
                k
            })
            .collect();
        Ok(FiniteGroup { kind, elements, index, table, identity, inverse, orders })
    }
}

/// Parses a [`FiniteGroup::table_dump`] back into rows.
pub fn parse_table_dump(src: &str) -> Result<Vec<Vec<u32>>, OracleError> {
    let bad = |m: &str| OracleError::InvalidParameter(format!("malformed table dump: {m}"));
    let mut lines = src.lines();
    let n: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("order "))
        .and_then(|n| n.trim().parse().ok())
        .ok_or_else(|| bad("missing order line"))?;
    let rows = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|c| c.parse::<u32>().map_err(|_| bad(l))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad("row count or width does not match order"));
    }
    Ok(rows)
}

fn closure<T: Clone + Eq + Hash>(
    identity: T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
    expected: usize,
) -> Result<Vec<T>, OracleError> {
    let mut seen: HashSet<T> = HashSet::new();
    let mut out = vec![identity.clone()];
    seen.insert(identity);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let p = mul(&out[i], g);
            if seen.insert(p.clone()) {
                out.push(p);
                if out.len() > expected {
                    return Err(OracleError::ClosureExceeded { expected });
                }
                queue.push_back(out.len() - 1);
            }
        }
    }
    if out.len() != expected {
        return Err(OracleError::OrderMismatch { expected, found: out.len() });
    }
    Ok(out)
}

fn q(c: [QuadRational; 4]) -> GroupElement {
    GroupElement::Quat(Quaternion::from_coords(c))
}

/// `i` and `ω = -½(1 + i + j + k)`, which generate the 24 Hurwitz units.
pub fn hurwitz_generators(root: u8) -> [GroupElement; 2] {
    let z = QuadRational::int(0, root);
    let o = QuadRational::int(1, root);
    let mh = QuadRational::half(-1, root);
    [q([z, o, z, z]), q([mh, mh, mh, mh])]
}

/// `(1 + i)/√2`, the extra generator of the binary octahedral group.
pub fn octahedral_generator() -> GroupElement {
    let z = QuadRational::int(0, 2);
    let r = QuadRational::new(Rational::from_integer(0), Ratio::new(1, 2), 2);
    q([r, r, z, z])
}

/// `½(φ + φ⁻¹·i + j)`, an even coordinate permutation of `½(0, 1, φ⁻¹, φ)`.
pub fn icosahedral_generator() -> GroupElement {
    let z = QuadRational::int(0, 5);
    let half_phi = QuadRational::new(Ratio::new(1, 4), Ratio::new(1, 4), 5);
    let half_inv = QuadRational::new(Ratio::new(-1, 4), Ratio::new(1, 4), 5);
    q([half_phi, half_inv, QuadRational::half(1, 5), z])
}

fn quat_mul(a: &GroupElement, b: &GroupElement) -> GroupElement {
    match (a, b) {
        (GroupElement::Quat(x), GroupElement::Quat(y)) => GroupElement::Quat(*x * *y),
        _ => panic!("mixed element models"),
    }
}

/// Builds the group by closure from exact generators.
pub fn build_group(kind: GroupKind) -> Result<FiniteGroup, OracleError> {
    match kind {
        GroupKind::Q(m) | GroupKind::Cyclic(m) if m == 0 || m > 12 => {
            return Err(OracleError::InvalidParameter(format!("{kind:?}: parameter must be in 1..=12")))
        }
        _ => {}
    }
    match kind {
        GroupKind::Q(m) => {
            let half = 1u32 << m;
            let n = 2 * half;
            let mul = move |a: &GroupElement, b: &GroupElement| match (*a, *b) {
                (GroupElement::Dicyclic { power: i, flip: e }, GroupElement::Dicyclic { power: j, flip: d }) => {
                    match (e, d) {
                        (false, _) => GroupElement::Dicyclic { power: (i + j) % n, flip: d },
                        (true, false) => GroupElement::Dicyclic { power: (i + n - j) % n, flip: true },
                        (true, true) => GroupElement::Dicyclic { power: (i + n - j + half) % n, flip: false },
                    }
                }
                _ => panic!("mixed element models"),
            };
            let id = GroupElement::Dicyclic { power: 0, flip: false };
            let gens = [GroupElement::Dicyclic { power: 1, flip: false }, GroupElement::Dicyclic { power: 0, flip: true }];
            let els = closure(id, &gens, mul, 2 * n as usize)?;
            FiniteGroup::from_elements(kind, els, mul)
        }
        GroupKind::Cyclic(k) => {
            let n = 1u32 << k;
            let mul = move |a: &GroupElement, b: &GroupElement| match (*a, *b) {
                (GroupElement::Cyclic(x), GroupElement::Cyclic(y)) => GroupElement::Cyclic((x + y) % n),
                _ => panic!("mixed element models"),
            };
            let els = closure(GroupElement::Cyclic(0), &[GroupElement::Cyclic(1 % n)], mul, n as usize)?;
            FiniteGroup::from_elements(kind, els, mul)
        }
        GroupKind::TwoT | GroupKind::TwoO | GroupKind::TwoI => {
            let (root, expected) = match kind {
                GroupKind::TwoT => (2, 24),
                GroupKind::TwoO => (2, 48),
                _ => (5, 120),
            };
            let mut gens = hurwitz_generators(root).to_vec();
            match kind {
                GroupKind::TwoO => gens.push(octahedral_generator()),
                GroupKind::TwoI => gens.push(icosahedral_generator()),
                _ => {}
            }
            let id = GroupElement::Quat(Quaternion::one(root));
            let els = closure(id, &gens, quat_mul, expected)?;
            FiniteGroup::from_elements(kind, els, quat_mul)
        }
    }
}

/// Conjugacy classes, each sorted, listed by smallest member.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut class: Vec<usize> = (0..n).map(|h| g.conj(h, x)).collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            seen[y] = true;
        }
        classes.push(class);
    }
    classes
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn is_power_of(mut n: u32, p: u32) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Elements whose order is a power of `p` (the identity included).
pub fn p_elements(g: &FiniteGroup, p: u32) -> Vec<usize> {
    (0..g.order()).filter(|&a| is_power_of(g.element_order(a), p)).collect()
}

/// Number of orbits, under simultaneous conjugation, of `s`-tuples of
/// pairwise-commuting `p`-elements. At most `max_tuples` tuples are visited.
pub fn commuting_tuple_classes(g: &FiniteGroup, s: u32, p: u32, max_tuples: usize) -> Result<u64, OracleError> {
    if !is_prime(p) {
        return Err(OracleError::NotPrime(p));
    }
    if s == 0 {
        return Err(OracleError::InvalidParameter("tuple length must be at least 1".into()));
    }
    let pel = p_elements(g, p);
    let mut reps: HashSet<Vec<u32>> = HashSet::new();
    let mut visited = 0usize;
    let mut tuple: Vec<usize> = Vec::with_capacity(s as usize);
    extend_tuples(g, &pel, s as usize, &mut tuple, &mut visited, max_tuples, &mut reps)?;
    Ok(reps.len() as u64)
}

fn extend_tuples(
    g: &FiniteGroup,
    pel: &[usize],
    s: usize,
    tuple: &mut Vec<usize>,
    visited: &mut usize,
    limit: usize,
    reps: &mut HashSet<Vec<u32>>,
) -> Result<(), OracleError> {
    if tuple.len() == s {
        *visited += 1;
        if *visited > limit {
            return Err(OracleError::BudgetExceeded { limit });
        }
        let canon = (0..g.order())
            .map(|h| tuple.iter().map(|&t| g.conj(h, t) as u32).collect::<Vec<u32>>())
            .min()
            .expect("nonempty group");
        reps.insert(canon);
        return Ok(());
    }
    for &x in pel {
        if tuple.iter().all(|&t| g.commute(t, x)) {
            tuple.push(x);
            extend_tuples(g, pel, s, tuple, visited, limit, reps)?;
            tuple.pop();
        }
    }
    Ok(())
}

/// Subgroup generated by the given element indices, as a sorted index list.
pub fn subgroup_closure(g: &FiniteGroup, gens: &[usize]) -> Result<Vec<usize>, OracleError> {
    if let Some(&bad) = gens.iter().find(|&&x| x >= g.order()) {
        return Err(OracleError::ForeignElement(bad));
    }
    let mut seen = vec![false; g.order()];
    seen[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &y in gens {
            let p = g.mul(x, y);
            if !seen[p] {
                seen[p] = true;
                queue.push_back(p);
            }
        }
    }
    Ok((0..g.order()).filter(|&i| seen[i]).collect())
}

/// `|G| / |⟨gens⟩|`.
pub fn subgroup_index(g: &FiniteGroup, gens: &[usize]) -> Result<u64, OracleError> {
    let h = subgroup_closure(g, gens)?;
    Ok((g.order() / h.len()) as u64)
}

/// One Sylow `p`-subgroup, grown one normalizing `p`-element at a time.
pub fn sylow_subgroup(g: &FiniteGroup, p: u32) -> Result<Vec<usize>, OracleError> {
    if !is_prime(p) {
        return Err(OracleError::NotPrime(p));
    }
    let mut target = 1usize;
    while g.order().is_multiple_of(target * p as usize) {
        target *= p as usize;
    }
    let mut sub = vec![g.identity()];
    while sub.len() < target {
        let members: HashSet<usize> = sub.iter().copied().collect();
        let next = (0..g.order()).find(|&x| {
            !members.contains(&x)
                && is_power_of(g.element_order(x), p)
                && sub.iter().all(|&y| members.contains(&g.conj(x, y)))
        });
        let Some(x) = next else {
            return Err(OracleError::InvalidParameter("no normalizing p-element found".into()));
        };
        let mut gens = sub.clone();
        gens.push(x);
        sub = subgroup_closure(g, &gens)?;
    }
    Ok(sub)
}

pub fn sylow_conjugates(g: &FiniteGroup, p: u32) -> Result<u64, OracleError> {
    let sub = sylow_subgroup(g, p)?;
    let mut conjugates: HashSet<Vec<usize>> = HashSet::new();
    for h in 0..g.order() {
        let mut c: Vec<usize> = sub.iter().map(|&x| g.conj(h, x)).collect();
        c.sort_unstable();
        conjugates.insert(c);
    }
    Ok(conjugates.len() as u64)
}

/// Number of conjugates of a Sylow 2-subgroup.
pub fn sylow2_conjugates(g: &FiniteGroup) -> Result<u64, OracleError> {
    sylow_conjugates(g, 2)
}
