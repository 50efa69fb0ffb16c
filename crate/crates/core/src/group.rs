//! The group family `G_n = N ⋊ B` with `N = (Z/2)^(2n)` and `B = <b> = Z/3`.
//!
//! Elements are kept in the normal form `(v, i) = v * b^i` with `v` a bit
//! vector (bit `j` is the coefficient of the generator `a_{j+1}`) and
//! `i ∈ {0,1,2}` the twist. Multiplication pulls `b` past translations with
//! the block-diagonal automorphism `beta`:
//!
//! ```text
//! (u, i) * (v, j) = (u ^ beta^i(v), i + j mod 3)
//! ```
//!
//! Per 2-bit block `beta` sends the first generator to the sum of the pair
//! and the second to the first, so `beta^3 = id`, `beta` fixes only 0, and
//! `1 + beta + beta^2 = 0` over F_2. With this convention `b^2 * a3 * b = a4`
//! holds on the nose (see the unit tests), and in the chosen basis the matrix
//! of `beta` is symmetric, so the dual action on characters is again `beta`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::f2::{self, NSubspace};
use crate::MAX_N;

/// Hard ceiling for operations that enumerate all of `G` (cosets, classes,
/// closures). Group arithmetic itself works for every `n <= MAX_N`.
pub const ENUM_LIMIT: u64 = 1 << 22;

const LO_BLOCK: u32 = 0x5555_5555; // bits 0,2,4,... = first generator of each block

/// Group parameters. Copy-cheap; all element operations that need `n` go
/// through this or through the `n` stored in the element itself.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    n: u32,
}

/// An element `(v, i) = v * b^i` of `G_n`. Carries `n` so that mixing
/// elements of different groups is detectable.
///
/// The derived ordering is the canonical one used everywhere for output:
/// twist first, then the translation bits read as an integer.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    n: u8,
    twist: u8,
    bits: u32,
}

impl Group {
    pub fn new(n: u32) -> Result<Group> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidParam { n, max: MAX_N });
        }
        Ok(Group { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `|G| = 3 * 4^n`.
    pub fn order(&self) -> u64 {
        3u64 << (2 * self.n)
    }

    /// `m = (4^n - 1) / 3`, the number of degree-3 irreducibles.
    pub fn m(&self) -> u64 {
        ((1u64 << (2 * self.n)) - 1) / 3
    }

    /// Dimension of the translation part as an F_2 vector space.
    pub fn translation_dim(&self) -> u32 {
        2 * self.n
    }

    /// `|N| = 4^n`.
    pub fn translation_count(&self) -> u64 {
        1u64 << (2 * self.n)
    }

    fn bits_mask(&self) -> u32 {
        f2::ones(2 * self.n)
    }

    /// The block-diagonal automorphism of `N` given by conjugation by `b`.
    pub fn beta(&self, v: u32) -> u32 {
        let lo = LO_BLOCK & self.bits_mask();
        let x = v & lo;
        let y = (v >> 1) & lo;
        (x ^ y) | (x << 1)
    }

    /// `beta^k` for any `k` (reduced mod 3).
    pub fn beta_pow(&self, v: u32, k: i64) -> u32 {
        match k.rem_euclid(3) {
            0 => v,
            1 => self.beta(v),
            _ => self.beta(self.beta(v)),
        }
    }

    /// Dual action on characters of `N`. The matrix of `beta` is symmetric
    /// in this basis, so the transpose action coincides with `beta`; kept as
    /// its own name so call sites say what they mean.
    pub fn beta_dual(&self, w: u32) -> u32 {
        self.beta(w)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { n: self.n as u8, twist: 0, bits: 0 }
    }

    /// Build `(bits, twist)`. Panics if `bits` has stray high bits or the
    /// twist is out of range; those are programmer errors, not data errors.
    pub fn element(&self, bits: u32, twist: u8) -> GroupElement {
        assert!(bits & !self.bits_mask() == 0, "translation bits out of range for n = {}", self.n);
        assert!(twist < 3, "twist must be 0, 1 or 2");
        GroupElement { n: self.n as u8, twist, bits }
    }

    /// The generator `a_j`, 1-indexed (`1 <= j <= 2n`).
    pub fn gen_a(&self, j: u32) -> GroupElement {
        assert!(j >= 1 && j <= 2 * self.n, "generator index a_{j} out of range");
        self.element(1 << (j - 1), 0)
    }

    /// The distinguished order-3 generator `b`.
    pub fn gen_b(&self) -> GroupElement {
        self.element(0, 1)
    }

    /// All elements in canonical order (twist-major, then bits ascending).
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let count = self.translation_count();
        (0..self.order()).map(move |idx| {
            let twist = (idx / count) as u8;
            let bits = (idx % count) as u32;
            GroupElement { n: self.n as u8, twist, bits }
        })
    }

    /// Canonical index of an element: `twist * 4^n + bits`.
    pub fn element_index(&self, g: GroupElement) -> u64 {
        debug_assert_eq!(g.n as u32, self.n);
        g.twist as u64 * self.translation_count() + g.bits as u64
    }

    pub fn element_from_index(&self, idx: u64) -> GroupElement {
        assert!(idx < self.order());
        let count = self.translation_count();
        GroupElement { n: self.n as u8, twist: (idx / count) as u8, bits: (idx % count) as u32 }
    }

    /// The subgroup `N` as a handle.
    pub fn subgroup_n(&self) -> SubgroupHandle {
        SubgroupHandle::Nsub(NSubspace::full(2 * self.n))
    }

    /// The subgroup `B = <b>` as a handle.
    pub fn subgroup_b(&self) -> SubgroupHandle {
        SubgroupHandle::Bsub
    }

    /// Conjugacy classes in canonical order (by least representative).
    ///
    /// Orbit computation under conjugation by the standard generators; no
    /// structural shortcuts, so tests can compare against the closed-form
    /// class list independently.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        assert!(self.order() <= ENUM_LIMIT, "group too large to enumerate classes");
        let order = self.order() as usize;
        let gens = self.standard_generators();
        let mut seen = vec![false; order];
        let mut classes = Vec::new();
        for idx in 0..order as u64 {
            if seen[idx as usize] {
                continue;
            }
            let rep = self.element_from_index(idx);
            let mut stack = vec![rep];
            seen[idx as usize] = true;
            let mut size = 0u64;
            while let Some(x) = stack.pop() {
                size += 1;
                for &g in &gens {
                    let y = x.conjugated_by(g);
                    let yi = self.element_index(y) as usize;
                    if !seen[yi] {
                        seen[yi] = true;
                        stack.push(y);
                    }
                }
            }
            classes.push(ConjugacyClass { representative: rep, size });
        }
        classes
    }

    /// All elements conjugate to `g`, sorted.
    pub fn conjugacy_class_of(&self, g: GroupElement) -> Vec<GroupElement> {
        let gens = self.standard_generators();
        let mut seen = HashSet::new();
        let mut stack = vec![g];
        seen.insert(g);
        while let Some(x) = stack.pop() {
            for &h in &gens {
                let y = x.conjugated_by(h);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        let mut out: Vec<GroupElement> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    pub fn standard_generators(&self) -> Vec<GroupElement> {
        let mut gens: Vec<GroupElement> = (1..=2 * self.n).map(|j| self.gen_a(j)).collect();
        gens.push(self.gen_b());
        gens
    }

    /// Canonical representatives of the left cosets `gH`, in scan order
    /// (the representative is the least element of its coset).
    pub fn left_coset_reps(&self, h: &SubgroupHandle) -> Vec<GroupElement> {
        assert!(self.order() <= ENUM_LIMIT, "group too large to enumerate cosets");
        let mut seen = vec![false; self.order() as usize];
        let h_elems = h.elements(self);
        let mut reps = Vec::with_capacity((self.order() / h.order(self)) as usize);
        for g in self.elements() {
            if seen[self.element_index(g) as usize] {
                continue;
            }
            reps.push(g);
            for &x in &h_elems {
                seen[self.element_index(g * x) as usize] = true;
            }
        }
        reps
    }

    /// Same for right cosets `Hg`.
    pub fn right_coset_reps(&self, h: &SubgroupHandle) -> Vec<GroupElement> {
        assert!(self.order() <= ENUM_LIMIT, "group too large to enumerate cosets");
        let mut seen = vec![false; self.order() as usize];
        let h_elems = h.elements(self);
        let mut reps = Vec::with_capacity((self.order() / h.order(self)) as usize);
        for g in self.elements() {
            if seen[self.element_index(g) as usize] {
                continue;
            }
            reps.push(g);
            for &x in &h_elems {
                seen[self.element_index(x * g) as usize] = true;
            }
        }
        reps
    }

    /// Double cosets `H g K` in canonical order; the representative of each
    /// is its least element.
    pub fn double_cosets(&self, h: &SubgroupHandle, k: &SubgroupHandle) -> Vec<DoubleCoset> {
        assert!(self.order() <= ENUM_LIMIT, "group too large to enumerate double cosets");
        let h_elems = h.elements(self);
        let k_elems = k.elements(self);
        let mut seen = vec![false; self.order() as usize];
        let mut out = Vec::new();
        for g in self.elements() {
            if seen[self.element_index(g) as usize] {
                continue;
            }
            let mut members = Vec::new();
            for &x in &h_elems {
                let xg = x * g;
                for &y in &k_elems {
                    let z = xg * y;
                    let zi = self.element_index(z) as usize;
                    if !seen[zi] {
                        seen[zi] = true;
                        members.push(z);
                    }
                }
            }
            members.sort_unstable();
            out.push(DoubleCoset { representative: members[0], elements: members });
        }
        out
    }

    /// True iff `G` has no subgroup of index 2, i.e. iff `beta + 1` is
    /// invertible over F_2 (an index-2 subgroup would be the kernel of a
    /// homomorphism to Z/2, forcing a nonzero `beta`-fixed functional).
    /// For `n <= 2` the determinant test is additionally cross-checked by
    /// exhaustive subgroup enumeration.
    pub fn verify_no_index2(&self) -> bool {
        let d = 2 * self.n;
        let rows: Vec<u32> = (0..d).map(|j| self.beta(1 << j) ^ (1 << j)).collect();
        let det_ok = f2::rank(&rows) as u32 == d;
        if self.n <= 2 {
            let half = self.order() / 2;
            let enum_ok = self.all_subgroups().iter().all(|s| s.len() as u64 != half);
            return det_ok && enum_ok;
        }
        det_ok
    }

    /// Every subgroup, as sorted element lists. Exhaustive lattice walk
    /// (close the current subgroup with one extra element until nothing new
    /// appears), so it is only allowed for tiny groups.
    pub fn all_subgroups(&self) -> Vec<Vec<GroupElement>> {
        assert!(self.order() <= 48, "exhaustive subgroup enumeration is for n <= 2 only");
        let trivial = vec![self.identity()];
        let mut known: HashSet<Vec<GroupElement>> = HashSet::new();
        known.insert(trivial.clone());
        let mut queue = vec![trivial];
        while let Some(h) = queue.pop() {
            for g in self.elements() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens: Vec<GroupElement> = h.clone();
                gens.push(g);
                let bigger = closure(self, &gens);
                if known.insert(bigger.clone()) {
                    queue.push(bigger);
                }
            }
        }
        let mut out: Vec<Vec<GroupElement>> = known.into_iter().collect();
        out.sort_unstable_by_key(|s| (s.len(), s.clone()));
        out
    }
}

/// Closure of a generating set, as a sorted element list.
pub fn closure(group: &Group, gens: &[GroupElement]) -> Vec<GroupElement> {
    assert!(group.order() <= ENUM_LIMIT);
    let mut seen = vec![false; group.order() as usize];
    let id = group.identity();
    seen[group.element_index(id) as usize] = true;
    let mut members = vec![id];
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = x * g;
            let yi = group.element_index(y) as usize;
            if !seen[yi] {
                seen[yi] = true;
                members.push(y);
                queue.push(y);
            }
        }
    }
    members.sort_unstable();
    members
}

impl GroupElement {
    pub fn n(&self) -> u32 {
        self.n as u32
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn twist(&self) -> u8 {
        self.twist
    }

    pub fn is_identity(&self) -> bool {
        self.bits == 0 && self.twist == 0
    }

    pub fn group(&self) -> Group {
        Group { n: self.n as u32 }
    }

    /// Multiplication with an error instead of a panic on mismatched `n`.
    pub fn checked_mul(self, rhs: GroupElement) -> Result<GroupElement> {
        if self.n != rhs.n {
            return Err(Error::GroupMismatch(self.n as u32, rhs.n as u32));
        }
        Ok(self * rhs)
    }

    pub fn inverse(self) -> GroupElement {
        let g = self.group();
        let twist = (3 - self.twist) % 3;
        GroupElement { n: self.n, twist, bits: g.beta_pow(self.bits, -(self.twist as i64)) }
    }

    /// `g * self * g^{-1}`.
    pub fn conjugated_by(self, g: GroupElement) -> GroupElement {
        g * self * g.inverse()
    }

    pub fn pow(self, k: i64) -> GroupElement {
        let e = k.rem_euclid(self.order() as i64);
        let mut acc = self.group().identity();
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }

    /// Element order: twist != 0 gives order 3 (because `1 + beta + beta^2 = 0`),
    /// nonzero translations are involutions.
    pub fn order(self) -> u64 {
        if self.twist != 0 {
            3
        } else if self.bits != 0 {
            2
        } else {
            1
        }
    }

    /// Canonical word in the generators, e.g. `a1*a4*b^2`; identity is `1`.
    pub fn to_word(self) -> String {
        if self.is_identity() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for j in 0..(2 * self.n as u32) {
            if self.bits & (1 << j) != 0 {
                parts.push(format!("a{}", j + 1));
            }
        }
        match self.twist {
            0 => {}
            1 => parts.push("b".to_string()),
            _ => parts.push("b^2".to_string()),
        }
        parts.join("*")
    }

    /// Parse a word in the generators: `*`-separated factors `aJ`, `b`, `1`,
    /// each optionally raised with `^k`. Factors multiply left to right, so
    /// non-normal-form words like `b^2*a4*a1` are accepted.
    pub fn from_word(group: &Group, word: &str) -> Result<GroupElement> {
        let word = word.trim();
        if word.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        let mut acc = group.identity();
        for factor in word.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => {
                    let exp: i64 = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                    (b.trim(), exp)
                }
                None => (factor, 1),
            };
            let g = if base == "1" {
                group.identity()
            } else if base == "b" {
                group.gen_b()
            } else if let Some(j) = base.strip_prefix('a') {
                let j: u32 =
                    j.parse().map_err(|_| Error::Parse(format!("bad generator `{base}`")))?;
                if j < 1 || j > 2 * group.n() {
                    return Err(Error::Parse(format!(
                        "generator a{j} out of range for n = {}",
                        group.n()
                    )));
                }
                group.gen_a(j)
            } else {
                return Err(Error::Parse(format!("unknown factor `{base}`")));
            };
            acc = acc * g.pow(exp);
        }
        Ok(acc)
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        assert_eq!(self.n, rhs.n, "elements from different groups");
        let g = self.group();
        GroupElement {
            n: self.n,
            twist: (self.twist + rhs.twist) % 3,
            bits: self.bits ^ g.beta_pow(rhs.bits, self.twist as i64),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:b}, {})", self.bits, self.twist)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: GroupElement,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub representative: GroupElement,
    pub elements: Vec<GroupElement>,
}

impl DoubleCoset {
    pub fn size(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Involutions inside the coset, sorted.
    pub fn involutions(&self) -> Vec<GroupElement> {
        self.elements.iter().copied().filter(|g| g.order() == 2).collect()
    }
}

/// A subgroup of `G`, stored structurally where the structure is known.
///
/// * `Nsub` covers every subgroup of the translation part (including `N`
///   itself and the intermediate `L` and `U` subspaces).
/// * `Msub(U)` is `U * B` for a `beta`-invariant `U`; the constructor is the
///   lattice module, which guarantees invariance.
/// * `ElementSet` is the catch-all, kept sorted and closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupHandle {
    Trivial,
    FullGroup,
    Nsub(NSubspace),
    Bsub,
    Msub(NSubspace),
    ElementSet(Vec<GroupElement>),
}

impl SubgroupHandle {
    /// Closure of a set of generators, as an `ElementSet`.
    pub fn from_generators(group: &Group, gens: &[GroupElement]) -> SubgroupHandle {
        SubgroupHandle::ElementSet(closure(group, gens))
    }

    pub fn order(&self, group: &Group) -> u64 {
        match self {
            SubgroupHandle::Trivial => 1,
            SubgroupHandle::FullGroup => group.order(),
            SubgroupHandle::Nsub(s) => s.size(),
            SubgroupHandle::Bsub => 3,
            SubgroupHandle::Msub(u) => 3 * u.size(),
            SubgroupHandle::ElementSet(v) => v.len() as u64,
        }
    }

    pub fn index(&self, group: &Group) -> u64 {
        group.order() / self.order(group)
    }

    pub fn contains(&self, group: &Group, g: GroupElement) -> bool {
        debug_assert_eq!(g.n(), group.n());
        match self {
            SubgroupHandle::Trivial => g.is_identity(),
            SubgroupHandle::FullGroup => true,
            SubgroupHandle::Nsub(s) => g.twist() == 0 && s.contains(g.bits()),
            SubgroupHandle::Bsub => g.bits() == 0,
            SubgroupHandle::Msub(u) => u.contains(g.bits()),
            SubgroupHandle::ElementSet(v) => v.binary_search(&g).is_ok(),
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self, group: &Group) -> Vec<GroupElement> {
        match self {
            SubgroupHandle::Trivial => vec![group.identity()],
            SubgroupHandle::FullGroup => group.elements().collect(),
            SubgroupHandle::Nsub(s) => {
                s.elements_sorted().into_iter().map(|v| group.element(v, 0)).collect()
            }
            SubgroupHandle::Bsub => (0..3).map(|i| group.element(0, i)).collect(),
            SubgroupHandle::Msub(u) => {
                let vs = u.elements_sorted();
                let mut out = Vec::with_capacity(3 * vs.len());
                for i in 0..3u8 {
                    out.extend(vs.iter().map(|&v| group.element(v, i)));
                }
                out
            }
            SubgroupHandle::ElementSet(v) => v.clone(),
        }
    }
}
