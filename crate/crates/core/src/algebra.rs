//! The rational group algebra `Q[G]` and the exact identities the
//! decomposition results rest on.
//!
//! Coefficients are arbitrary-precision rationals throughout; every check in
//! this module is an exact equality of algebra elements. Elements over small
//! groups (`|G| <= 768`, i.e. `n <= 4`) are stored as dense coefficient
//! arrays indexed by the canonical element index; larger groups fall back to
//! an ordered sparse map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chars::{self, CharKind, IrrChar};
use crate::error::{Error, Result};
use crate::f2::{self, NSubspace};
use crate::group::{DoubleCoset, Group, GroupElement, SubgroupHandle};
use crate::lattice::LatticeEntry;

/// Largest group order stored densely.
const DENSE_LIMIT: u64 = 768;

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Dense(Vec<BigRational>),
    Sparse(BTreeMap<u64, BigRational>),
}

/// An element of `Q[G]`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    group: Group,
    repr: Repr,
}

impl AlgebraElement {
    pub fn zero(group: &Group) -> Self {
        let repr = if group.order() <= DENSE_LIMIT {
            Repr::Dense(vec![BigRational::zero(); group.order() as usize])
        } else {
            Repr::Sparse(BTreeMap::new())
        };
        AlgebraElement { group: *group, repr }
    }

    /// The basis element `1 * g`.
    pub fn basis(group: &Group, g: GroupElement) -> Self {
        let mut out = Self::zero(group);
        out.add_assign_index(group.element_index(g), &BigRational::one());
        out
    }

    /// The multiplicative unit.
    pub fn one(group: &Group) -> Self {
        Self::basis(group, group.identity())
    }

    pub fn from_terms<I>(group: &Group, terms: I) -> Self
    where
        I: IntoIterator<Item = (GroupElement, BigRational)>,
    {
        let mut out = Self::zero(group);
        for (g, c) in terms {
            out.add_assign_index(group.element_index(g), &c);
        }
        out
    }

    pub fn group(&self) -> Group {
        self.group
    }

    fn add_assign_index(&mut self, idx: u64, delta: &BigRational) {
        if delta.is_zero() {
            return;
        }
        match &mut self.repr {
            Repr::Dense(v) => v[idx as usize] += delta,
            Repr::Sparse(map) => {
                let entry = map.entry(idx).or_insert_with(BigRational::zero);
                *entry += delta;
                if entry.is_zero() {
                    map.remove(&idx);
                }
            }
        }
    }

    /// Visit the nonzero terms in canonical index order.
    fn for_each(&self, mut f: impl FnMut(u64, &BigRational)) {
        match &self.repr {
            Repr::Dense(v) => {
                for (idx, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        f(idx as u64, c);
                    }
                }
            }
            Repr::Sparse(map) => {
                for (&idx, c) in map {
                    f(idx, c);
                }
            }
        }
    }

    /// Nonzero terms as `(element, coefficient)` pairs, canonical order.
    pub fn terms(&self) -> Vec<(GroupElement, BigRational)> {
        let mut out = Vec::new();
        self.for_each(|idx, c| out.push((self.group.element_from_index(idx), c.clone())));
        out
    }

    pub fn coeff(&self, g: GroupElement) -> BigRational {
        let idx = self.group.element_index(g);
        match &self.repr {
            Repr::Dense(v) => v[idx as usize].clone(),
            Repr::Sparse(map) => map.get(&idx).cloned().unwrap_or_else(BigRational::zero),
        }
    }

    pub fn support_size(&self) -> usize {
        let mut count = 0;
        self.for_each(|_, _| count += 1);
        count
    }

    pub fn is_zero(&self) -> bool {
        self.support_size() == 0
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group, "elements from different group algebras");
        let mut out = self.clone();
        rhs.for_each(|idx, c| out.add_assign_index(idx, c));
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::zero(&self.group);
        if s.is_zero() {
            return out;
        }
        self.for_each(|idx, c| out.add_assign_index(idx, &(c * s)));
        out
    }

    /// Support as `(index, integer numerator)` over one common denominator.
    fn scaled_terms(&self) -> (Vec<(u64, BigInt)>, BigInt) {
        let mut den = BigInt::one();
        self.for_each(|_, c| den = den.lcm(c.denom()));
        let mut terms = Vec::new();
        self.for_each(|idx, c| terms.push((idx, c.numer() * (&den / c.denom()))));
        (terms, den)
    }

    /// Bilinear product extending the group multiplication. The convolution
    /// runs on scaled integers and normalizes once per output entry, which
    /// is much cheaper than reducing a rational per term pair.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group, "elements from different group algebras");
        let group = self.group;
        let (sa, da) = self.scaled_terms();
        let (sb, db) = rhs.scaled_terms();
        let den = da * db;
        if group.order() <= DENSE_LIMIT {
            let mut acc = vec![BigInt::zero(); group.order() as usize];
            for (i, ai) in &sa {
                let gi = group.element_from_index(*i);
                for (j, bj) in &sb {
                    let k = group.element_index(gi * group.element_from_index(*j));
                    acc[k as usize] += ai * bj;
                }
            }
            let coeffs = acc
                .into_iter()
                .map(|v| {
                    if v.is_zero() {
                        BigRational::zero()
                    } else {
                        BigRational::new(v, den.clone())
                    }
                })
                .collect();
            AlgebraElement { group, repr: Repr::Dense(coeffs) }
        } else {
            let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
            for (i, ai) in &sa {
                let gi = group.element_from_index(*i);
                for (j, bj) in &sb {
                    let k = group.element_index(gi * group.element_from_index(*j));
                    *acc.entry(k).or_default() += ai * bj;
                }
            }
            let map = acc
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| (k, BigRational::new(v, den.clone())))
                .collect();
            AlgebraElement { group, repr: Repr::Sparse(map) }
        }
    }

    /// Like [`mul`](Self::mul) but with an error instead of a panic when the
    /// operands live in different group algebras.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.group != rhs.group {
            return Err(Error::GroupMismatch(self.group.n(), rhs.group.n()));
        }
        Ok(self.mul(rhs))
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// Does the element commute with all of `Q[G]`? Checked on generators.
    pub fn is_central(&self) -> bool {
        self.group.standard_generators().iter().all(|&g| {
            let b = Self::basis(&self.group, g);
            b.mul(self) == self.mul(&b)
        })
    }

    /// JSON form: a list of `{"element": "<bits>/<twist>", "coeff": "p/q"}`
    /// objects in canonical element order.
    pub fn to_json(&self) -> Value {
        let d = self.group.translation_dim();
        let items: Vec<Value> = self
            .terms()
            .into_iter()
            .map(|(g, c)| {
                json!({
                    "element": format!("{}/{}", f2::bits_to_string(g.bits(), d), g.twist()),
                    "coeff": format!("{}/{}", c.numer(), c.denom()),
                })
            })
            .collect();
        Value::Array(items)
    }

    pub fn from_json(group: &Group, v: &Value) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Parse("algebra element must be a JSON array".into()))?;
        let mut out = Self::zero(group);
        for item in items {
            let elem_s = item["element"]
                .as_str()
                .ok_or_else(|| Error::Parse("missing element field".into()))?;
            let coeff_s = item["coeff"]
                .as_str()
                .ok_or_else(|| Error::Parse("missing coeff field".into()))?;
            let (bits_s, twist_s) = elem_s
                .rsplit_once('/')
                .ok_or_else(|| Error::Parse(format!("bad element `{elem_s}`")))?;
            let bits = f2::bits_from_string(bits_s)
                .filter(|_| bits_s.len() as u32 == group.translation_dim())
                .ok_or_else(|| Error::Parse(format!("bad bit string `{bits_s}`")))?;
            let twist: u8 = twist_s
                .parse()
                .ok()
                .filter(|&t| t < 3)
                .ok_or_else(|| Error::Parse(format!("bad twist `{twist_s}`")))?;
            let coeff = parse_rational(coeff_s)?;
            out.add_assign_index(group.element_index(group.element(bits, twist)), &coeff);
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let numer: BigInt =
        num_s.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let denom: BigInt =
        den_s.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if denom <= BigInt::zero() {
        return Err(Error::Parse(format!("denominator must be positive in `{s}`")));
    }
    Ok(BigRational::new(numer, denom))
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (g, c)) in self.terms().into_iter().enumerate() {
            if k == 0 {
                write!(f, "{c}*{g}")?;
            } else if c.is_negative() {
                write!(f, " - {}*{g}", -c)?;
            } else {
                write!(f, " + {c}*{g}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::add(self, rhs)
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::sub(self, rhs)
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::mul(self, rhs)
    }
}

/// The averaging idempotent `p_H = (1/|H|) sum_{h in H} h`.
pub fn p_of(group: &Group, h: &SubgroupHandle) -> AlgebraElement {
    let inv = BigRational::new(1.into(), h.order(group).into());
    AlgebraElement::from_terms(group, h.elements(group).into_iter().map(|g| (g, inv.clone())))
}

/// A rational irreducible representation: the trivial one, the sum `psi` of
/// the two conjugate linear characters, or a degree-3 `theta` (already
/// rational). These index the central idempotents and the isotypical
/// factors.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RationalIrrep {
    Trivial,
    Psi,
    Theta(u32),
}

impl RationalIrrep {
    pub fn label(&self, group: &Group) -> String {
        match self {
            RationalIrrep::Trivial => "chi_0".into(),
            RationalIrrep::Psi => "psi".into(),
            RationalIrrep::Theta(w) => IrrChar::induced(*group, *w).label(),
        }
    }

    /// Dimension of the associated isotypical component of `Q[G]` over `Q`
    /// (`dim_C V * [K:Q] * dim of V` ... spelled out per case below).
    pub fn rational_degree(&self) -> u64 {
        match self {
            RationalIrrep::Trivial => 1,
            RationalIrrep::Psi => 2,
            RationalIrrep::Theta(_) => 3,
        }
    }
}

/// All rational irreducibles in canonical order.
pub fn rational_irreps(group: &Group) -> Vec<RationalIrrep> {
    let mut out = vec![RationalIrrep::Trivial, RationalIrrep::Psi];
    out.extend(chars::dual_orbits(group).into_iter().map(RationalIrrep::Theta));
    out
}

/// The central idempotent `e_W = (dim V / |G|) sum_g tr_{K/Q}(chi_V(g^{-1})) g`
/// attached to a rational irreducible `W` with complex constituent `V`.
pub fn central_idempotent(group: &Group, irr: &RationalIrrep) -> AlgebraElement {
    let order_inv = BigRational::new(1.into(), group.order().into());
    match irr {
        RationalIrrep::Trivial => p_of(group, &SubgroupHandle::FullGroup),
        RationalIrrep::Psi => {
            // tr(chi_1(g^{-1})) = 2 on N and -1 off it
            AlgebraElement::from_terms(
                group,
                group.elements().map(|g| {
                    let t = if g.twist() == 0 { 2 } else { -1 };
                    (g, &order_inv * BigInt::from(t))
                }),
            )
        }
        RationalIrrep::Theta(w) => {
            let theta = IrrChar::induced(*group, *w);
            let scale = &order_inv * BigInt::from(3);
            AlgebraElement::from_terms(
                group,
                group.elements().filter(|g| g.twist() == 0).map(|g| {
                    // g^{-1} = g on N
                    (g, &scale * BigInt::from(theta.induced_value(g)))
                }),
            )
        }
    }
}

/// Verify that the central idempotents cut `Q[G]` into a direct sum: each is
/// a central idempotent, selected pairs multiply to zero, and they sum to 1.
/// Pair selection follows `plan`; everything else is always exhaustive.
pub fn verify_idempotent_partition(group: &Group, plan: SamplingPlan) -> Result<()> {
    let irrs = rational_irreps(group);
    let es: Vec<AlgebraElement> =
        irrs.iter().map(|w| central_idempotent(group, w)).collect();

    let mut sum = AlgebraElement::zero(group);
    for e in &es {
        sum = sum.add(e);
    }
    if sum != AlgebraElement::one(group) {
        return Err(Error::IdentityViolation(
            "central idempotents do not sum to 1".into(),
        ));
    }
    for (w, e) in irrs.iter().zip(&es) {
        if !e.is_idempotent() {
            return Err(Error::IdentityViolation(format!(
                "e[{}] is not idempotent",
                w.label(group)
            )));
        }
        if !e.is_central() {
            return Err(Error::IdentityViolation(format!(
                "e[{}] is not central",
                w.label(group)
            )));
        }
    }
    for (i, j) in plan.unordered_pairs(es.len()) {
        if !es[i].mul(&es[j]).is_zero() {
            return Err(Error::IdentityViolation(format!(
                "e[{}] * e[{}] != 0",
                irrs[i].label(group),
                irrs[j].label(group)
            )));
        }
    }
    Ok(())
}

/// The Hecke basis of `p_H Q[G] p_H`: one averaged element per double coset.
pub struct HeckeBasis {
    pub cosets: Vec<DoubleCoset>,
    pub q: Vec<AlgebraElement>,
}

pub fn hecke_basis(group: &Group, h: &SubgroupHandle) -> HeckeBasis {
    let cosets = group.double_cosets(h, h);
    debug_assert!(cosets[0].representative.is_identity());
    let inv = BigRational::new(1.into(), h.order(group).into());
    let q = cosets
        .iter()
        .map(|c| {
            AlgebraElement::from_terms(
                group,
                c.elements.iter().map(|&g| (g, inv.clone())),
            )
        })
        .collect();
    HeckeBasis { cosets, q }
}

/// Eigenvalue data for the Hecke algebra of `B`: the double cosets, one
/// involution representative per nontrivial coset, and the matrix
/// `matrix[k][i] = theta_k(q_i)`, computed by averaging over the coset and
/// cross-checked against the involution-representative shortcut
/// `theta_k(q_i) = theta_k(j_i)`.
pub struct HeckeCharData {
    pub cosets: Vec<DoubleCoset>,
    /// least involution of each nontrivial double coset (index shifted: entry
    /// `i - 1` belongs to coset `i`)
    pub involution_reps: Vec<GroupElement>,
    pub matrix: Vec<Vec<i64>>,
}

pub fn hecke_char_matrix(group: &Group) -> Result<HeckeCharData> {
    let b = group.subgroup_b();
    let cosets = group.double_cosets(&b, &b);
    let m = group.m() as usize;
    if cosets.len() != m + 1 {
        return Err(Error::Inconsistency(format!(
            "expected {} double cosets of B, found {}",
            m + 1,
            cosets.len()
        )));
    }
    if cosets[0].size() != 3 || cosets[1..].iter().any(|c| c.size() != 9) {
        return Err(Error::Inconsistency(
            "double cosets of B must have sizes 3, 9, ..., 9".into(),
        ));
    }
    let mut involution_reps = Vec::with_capacity(m);
    for c in &cosets[1..] {
        let invs = c.involutions();
        if invs.len() != 3 {
            return Err(Error::Inconsistency(format!(
                "double coset of {} carries {} involutions, expected 3",
                c.representative,
                invs.len()
            )));
        }
        involution_reps.push(invs[0]);
    }

    let thetas: Vec<IrrChar> =
        chars::dual_orbits(group).into_iter().map(|w| IrrChar::induced(*group, w)).collect();
    let mut matrix = Vec::with_capacity(thetas.len());
    for theta in &thetas {
        let mut row = Vec::with_capacity(cosets.len());
        for (i, c) in cosets.iter().enumerate() {
            // averaged value: theta(q_i) = (1/3) sum over the coset
            let sum: i64 = c.elements.iter().map(|&g| theta.induced_value(g)).sum();
            if sum % 3 != 0 {
                return Err(Error::Inconsistency(format!(
                    "{} is not integral on a Hecke basis element",
                    theta.label()
                )));
            }
            let averaged = sum / 3;
            // shortcut: 1 on the identity coset, theta(j_i) elsewhere
            let shortcut = if i == 0 {
                1
            } else {
                theta.induced_value(involution_reps[i - 1])
            };
            if averaged != shortcut {
                return Err(Error::IdentityViolation(format!(
                    "{}(q_{i}) = {averaged} but {}(j_{i}) = {shortcut}",
                    theta.label(),
                    theta.label()
                )));
            }
            row.push(averaged);
        }
        matrix.push(row);
    }
    Ok(HeckeCharData { cosets, involution_reps, matrix })
}

/// Outcome of [`verify_f_decomposition`]: the pieces `f_{H,W} = p_H e_W` for
/// the rational irreducibles appearing in the permutation representation on
/// `G/H`.
pub struct FDecomposition {
    pub p: AlgebraElement,
    pub terms: Vec<(RationalIrrep, AlgebraElement)>,
}

/// Verify that `p_H` splits as the sum of the pairwise-orthogonal
/// idempotents `f_{H,W} = p_H e_W` over the rational irreducibles `W`
/// occurring in `G/H`, and that `p_H` commutes with every `e_W`. The
/// commutation, idempotency, and sum checks always run in full; `plan`
/// selects which of the quadratically many orthogonality pairs to verify.
pub fn verify_f_decomposition(
    group: &Group,
    h: &SubgroupHandle,
    plan: SamplingPlan,
) -> Result<FDecomposition> {
    let perm = chars::permutation_character(group, h)?;
    let mut mult: BTreeMap<RationalIrrep, u64> = BTreeMap::new();
    for (irr, m) in &perm.decomposition {
        let key = match irr.kind() {
            CharKind::Linear(0) => RationalIrrep::Trivial,
            CharKind::Linear(_) => RationalIrrep::Psi,
            CharKind::Induced(w) => RationalIrrep::Theta(w),
        };
        *mult.entry(key).or_insert(0) += m;
    }
    // the two conjugate linear characters must appear together
    if let Some(&psi_mult) = mult.get(&RationalIrrep::Psi) {
        if psi_mult % 2 != 0 {
            return Err(Error::Inconsistency(
                "conjugate linear characters appear with unequal multiplicities".into(),
            ));
        }
    }

    let p = p_of(group, h);
    let mut terms = Vec::new();
    for irr in rational_irreps(group) {
        if !mult.contains_key(&irr) {
            continue;
        }
        let e = central_idempotent(group, &irr);
        let pe = p.mul(&e);
        if pe != e.mul(&p) {
            return Err(Error::IdentityViolation(format!(
                "p_H does not commute with e[{}]",
                irr.label(group)
            )));
        }
        if pe.is_zero() {
            return Err(Error::Inconsistency(format!(
                "f[{}] vanishes although the character occurs in G/H",
                irr.label(group)
            )));
        }
        if !pe.is_idempotent() {
            return Err(Error::IdentityViolation(format!(
                "f[{}] is not idempotent",
                irr.label(group)
            )));
        }
        terms.push((irr, pe));
    }
    for (i, j) in plan.unordered_pairs(terms.len()) {
        if !terms[i].1.mul(&terms[j].1).is_zero() {
            return Err(Error::IdentityViolation(format!(
                "f[{}] * f[{}] != 0",
                terms[i].0.label(group),
                terms[j].0.label(group)
            )));
        }
    }
    let mut sum = AlgebraElement::zero(group);
    for (_, f) in &terms {
        sum = sum.add(f);
    }
    if sum != p {
        return Err(Error::IdentityViolation(
            "the f-pieces do not sum to p_H".into(),
        ));
    }
    Ok(FDecomposition { p, terms })
}

/// How many of a quadratic family of identities to check.
#[derive(Clone, Copy, Debug)]
pub enum SamplingPlan {
    Full,
    Sample { seed: u64, count: usize },
}

impl SamplingPlan {
    /// Unordered pairs `i < j` from `0..k`.
    pub fn unordered_pairs(&self, k: usize) -> Vec<(usize, usize)> {
        let all = k * k.saturating_sub(1) / 2;
        match self {
            SamplingPlan::Full => {
                (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
            }
            SamplingPlan::Sample { count, .. } if *count >= all => {
                (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
            }
            SamplingPlan::Sample { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut picked = BTreeSet::new();
                while picked.len() < *count {
                    let i = rng.gen_range(0..k);
                    let j = rng.gen_range(0..k);
                    if i < j {
                        picked.insert((i, j));
                    }
                }
                picked.into_iter().collect()
            }
        }
    }

    /// Ordered pairs `i != j` from `0..k`.
    pub fn distinct_pairs(&self, k: usize) -> Vec<(usize, usize)> {
        let all = k * k.saturating_sub(1);
        match self {
            SamplingPlan::Full => (0..k)
                .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
                .collect(),
            SamplingPlan::Sample { count, .. } if *count >= all => (0..k)
                .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
                .collect(),
            SamplingPlan::Sample { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut picked = BTreeSet::new();
                while picked.len() < *count {
                    let i = rng.gen_range(0..k);
                    let j = rng.gen_range(0..k);
                    if i != j {
                        picked.insert((i, j));
                    }
                }
                picked.into_iter().collect()
            }
        }
    }

    /// Grid cells from `0..rows x 0..cols`.
    pub fn grid(&self, rows: usize, cols: usize) -> Vec<(usize, usize)> {
        let all = rows * cols;
        match self {
            SamplingPlan::Full => {
                (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect()
            }
            SamplingPlan::Sample { count, .. } if *count >= all => {
                (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect()
            }
            SamplingPlan::Sample { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut picked = BTreeSet::new();
                while picked.len() < *count {
                    picked.insert((rng.gen_range(0..rows), rng.gen_range(0..cols)));
                }
                picked.into_iter().collect()
            }
        }
    }
}

/// Outcome of [`verify_hecke_eigenvalues`].
pub struct HeckeEigenReport {
    pub matrix: Vec<Vec<i64>>,
    pub identities_checked: usize,
}

/// Verify the eigenvalue identities `q_i * f_{B,theta_k} = theta_k(j_i) *
/// f_{B,theta_k}` in exact arithmetic, for the `(i, k)` pairs selected by
/// `plan`. Preconditions checked along the way: each `theta` occurs exactly
/// once in `G/B` (so the `theta`-block of the Hecke algebra is a line), the
/// basis elements satisfy `p_B q_i p_B = q_i`, and the character matrix
/// agrees with its involution shortcut.
pub fn verify_hecke_eigenvalues(group: &Group, plan: SamplingPlan) -> Result<HeckeEigenReport> {
    let b = group.subgroup_b();
    let data = hecke_char_matrix(group)?;
    let basis = hecke_basis(group, &b);
    let p_b = p_of(group, &b);

    for (j, q) in basis.q.iter().enumerate() {
        if p_b.mul(q).mul(&p_b) != *q {
            return Err(Error::IdentityViolation(format!(
                "q_{j} does not lie in p_B Q[G] p_B"
            )));
        }
    }

    let perm = chars::permutation_character(group, &b)?;
    let orbits = chars::dual_orbits(group);
    for &w in &orbits {
        if perm.multiplicity_of(&IrrChar::induced(*group, w)) != 1 {
            return Err(Error::Inconsistency(
                "each theta must occur exactly once in G/B".into(),
            ));
        }
    }

    let fs: Vec<AlgebraElement> = orbits
        .iter()
        .map(|&w| p_b.mul(&central_idempotent(group, &RationalIrrep::Theta(w))))
        .collect();

    let pairs = plan.grid(basis.q.len(), fs.len());
    for &(i, k) in &pairs {
        let lhs = basis.q[i].mul(&fs[k]);
        let lambda = BigRational::from_integer(data.matrix[k][i].into());
        let rhs = fs[k].scale(&lambda);
        if lhs != rhs {
            return Err(Error::IdentityViolation(format!(
                "q_{i} * f[theta_{}] != {} * f[theta_{}]",
                k + 1,
                data.matrix[k][i],
                k + 1
            )));
        }
    }
    Ok(HeckeEigenReport { matrix: data.matrix, identities_checked: pairs.len() })
}

/// `epsilon_L = (1/|N|) sum_{v in N} psi(v) v` for the sign character `psi`
/// with kernel `L` (a codimension-1 subspace of `N`).
pub fn epsilon_for(group: &Group, l: &NSubspace) -> Result<AlgebraElement> {
    let d = group.translation_dim();
    if l.ambient() != d || l.dim() != d - 1 {
        return Err(Error::InvalidInput(format!(
            "epsilon needs a codimension-1 subspace of F_2^{d}"
        )));
    }
    let w = l.orthogonal_complement().basis()[0];
    let inv_n = BigRational::new(1.into(), group.translation_count().into());
    Ok(AlgebraElement::from_terms(
        group,
        (0..group.translation_count() as u32).map(|v| {
            let sign = if f2::dot(w, v) == 0 { inv_n.clone() } else { -inv_n.clone() };
            (group.element(v, 0), sign)
        }),
    ))
}

/// `Phi_L = (sum_{h in L} h) * (1 + b + b^2)`.
pub fn phi_for(group: &Group, l: &NSubspace) -> AlgebraElement {
    AlgebraElement::from_terms(
        group,
        l.elements_sorted().into_iter().flat_map(|v| {
            (0..3u8).map(move |i| (v, i))
        }).map(|(v, i)| (group.element(v, i), BigRational::one())),
    )
}

/// Outcome of [`verify_isogeny_scalar`].
pub struct IsogenyScalarReport {
    /// `2^(2n-1)`
    pub scalar: u64,
    pub entries_checked: usize,
    pub cross_pairs_checked: usize,
}

/// The multiplication-by-`2^(2n-1)` identity and its supporting facts, per
/// lattice entry `i` (using the canonical `L_i`):
///
/// * `Phi_i * epsilon_i = 2^(2n-1) * epsilon_i`,
/// * `|L_i ∩ beta^k(L_i)| = 2^(2n-2)` for `k = 1, 2` (the half-overlap that
///   makes the twisted summands cancel),
/// * `Phi_j * epsilon_i = 0` for `j != i` (cross terms vanish; pair
///   selection follows `plan`).
pub fn verify_isogeny_scalar(
    group: &Group,
    entries: &[LatticeEntry],
    plan: SamplingPlan,
) -> Result<IsogenyScalarReport> {
    let scalar = 1u64 << (2 * group.n() - 1);
    let scalar_q = BigRational::from_integer(scalar.into());
    let half_overlap = 2 * group.n() - 2;

    let eps: Vec<AlgebraElement> = entries
        .iter()
        .map(|e| epsilon_for(group, &e.l_canonical))
        .collect::<Result<_>>()?;
    let phis: Vec<AlgebraElement> =
        entries.iter().map(|e| phi_for(group, &e.l_canonical)).collect();

    for (e, (eps_i, phi_i)) in entries.iter().zip(eps.iter().zip(&phis)) {
        if phi_i.mul(eps_i) != eps_i.scale(&scalar_q) {
            return Err(Error::IdentityViolation(format!(
                "Phi * epsilon != {scalar} * epsilon at lattice entry {}",
                e.index
            )));
        }
        for k in 1..3i64 {
            let conj = e.l_canonical.map(|v| group.beta_pow(v, k));
            if e.l_canonical.intersect(&conj).dim() != half_overlap {
                return Err(Error::IdentityViolation(format!(
                    "|L ∩ beta^{k}(L)| != 2^{half_overlap} at lattice entry {}",
                    e.index
                )));
            }
        }
    }

    let pairs = plan.distinct_pairs(entries.len());
    for &(j, i) in &pairs {
        if !phis[j].mul(&eps[i]).is_zero() {
            return Err(Error::IdentityViolation(format!(
                "cross term Phi_{} * epsilon_{} does not vanish",
                entries[j].index, entries[i].index
            )));
        }
    }
    Ok(IsogenyScalarReport {
        scalar,
        entries_checked: entries.len(),
        cross_pairs_checked: pairs.len(),
    })
}
