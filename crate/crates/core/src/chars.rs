//! Character theory of `G_n`.
//!
//! The irreducible complex characters come in two families:
//!
//! * three linear characters `chi_j` factoring through `G/N = Z/3`, with
//!   `chi_j(v, i) = w^(j*i)`;
//! * `m = (4^n - 1)/3` characters `theta` of degree 3, one per orbit of the
//!   dual action of `b` on the nontrivial characters of `N`. Each `theta` is
//!   supported on `N`, where it is the orbit sum of three sign characters;
//!   its values are `3` on `ker theta`, `-1` on the rest of `N`, and `0`
//!   outside `N` — in particular integers, and `theta` is realisable over
//!   `Q` (it equals the permutation character of `G/(UB)` minus the trivial
//!   one; the lattice module checks this).
//!
//! The rational irreducibles are `chi_0`, `psi = chi_1 + chi_2`, and the
//! `theta`s themselves.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::f2::{self, NSubspace};
use crate::group::{ConjugacyClass, Group, GroupElement, SubgroupHandle};

/// A sign character `psi_w(v) = (-1)^(w . v)` of the translation subgroup.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCharacter {
    group: Group,
    w: u32,
}

impl NCharacter {
    pub fn new(group: Group, w: u32) -> Self {
        NCharacter { group, w: w & f2::ones(group.translation_dim()) }
    }

    pub fn dual_vector(&self) -> u32 {
        self.w
    }

    /// `+1` or `-1`.
    pub fn sign(&self, v: u32) -> i64 {
        if f2::dot(self.w, v) == 0 {
            1
        } else {
            -1
        }
    }

    /// The conjugate character `psi^b(v) = psi(b v b^{-1})`, whose dual
    /// vector is the transpose action applied to `w`.
    pub fn conjugated_by_b(&self) -> NCharacter {
        NCharacter { group: self.group, w: self.group.beta_dual(self.w) }
    }

    pub fn kernel(&self) -> NSubspace {
        NSubspace::nullspace(self.group.translation_dim(), &[self.w])
    }
}

/// An irreducible complex character of `G_n`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharKind {
    /// `chi_j`, `j in {0,1,2}`.
    Linear(u8),
    /// Degree-3 character attached to the dual orbit of `w != 0`; stored
    /// with the least vector of its orbit.
    Induced(u32),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct IrrChar {
    group: Group,
    kind: CharKind,
}

impl IrrChar {
    pub fn linear(group: Group, j: u8) -> Self {
        assert!(j < 3);
        IrrChar { group, kind: CharKind::Linear(j) }
    }

    /// The degree-3 character of the orbit of `w`; any orbit member works.
    pub fn induced(group: Group, w: u32) -> Self {
        let w = w & f2::ones(group.translation_dim());
        assert!(w != 0, "induced characters need a nontrivial orbit");
        let orbit_min = w.min(group.beta_dual(w)).min(group.beta_dual(group.beta_dual(w)));
        IrrChar { group, kind: CharKind::Induced(orbit_min) }
    }

    pub fn kind(&self) -> CharKind {
        self.kind
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn degree(&self) -> u64 {
        match self.kind {
            CharKind::Linear(_) => 1,
            CharKind::Induced(_) => 3,
        }
    }

    pub fn value(&self, g: GroupElement) -> Cyclotomic {
        match self.kind {
            CharKind::Linear(j) => Cyclotomic::omega_pow(j as i64 * g.twist() as i64),
            CharKind::Induced(_) => Cyclotomic::from_integer(self.induced_value(g)),
        }
    }

    /// Integer value of a degree-3 character (0 off `N`, `3` or `-1` on it).
    /// Panics on linear characters with non-real values; use [`value`].
    ///
    /// [`value`]: IrrChar::value
    pub fn induced_value(&self, g: GroupElement) -> i64 {
        let w = match self.kind {
            CharKind::Induced(w) => w,
            CharKind::Linear(0) => return 1,
            CharKind::Linear(_) => panic!("character is not integer-valued"),
        };
        if g.twist() != 0 {
            return 0;
        }
        let mut sum = 0i64;
        let mut wk = w;
        for _ in 0..3 {
            sum += NCharacter::new(self.group, wk).sign(g.bits());
            wk = self.group.beta_dual(wk);
        }
        sum
    }

    pub fn is_integer_valued(&self) -> bool {
        matches!(self.kind, CharKind::Induced(_) | CharKind::Linear(0))
    }

    /// `chi_0`, `chi_1`, `chi_2` or `theta_k` with `k` the 1-based position
    /// of the orbit in [`dual_orbits`].
    pub fn label(&self) -> String {
        match self.kind {
            CharKind::Linear(j) => format!("chi_{j}"),
            CharKind::Induced(w) => {
                let orbits = cached_dual_orbits(&self.group);
                let k = orbits.binary_search(&w).expect("orbit representative is canonical") + 1;
                format!("theta_{k}")
            }
        }
    }
}

/// [`dual_orbits`] memoised per `n`: the orbit list is a pure function of
/// the group size, and labelling even one character needs the whole list,
/// so callers that label in a loop would otherwise pay `4^n` per call.
fn cached_dual_orbits(group: &Group) -> std::sync::Arc<Vec<u32>> {
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<std::collections::BTreeMap<u32, Arc<Vec<u32>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Mutex::default);
    let mut map = cache.lock().expect("orbit cache is never poisoned");
    map.entry(group.n()).or_insert_with(|| Arc::new(dual_orbits(group))).clone()
}

/// Least representatives of the orbits of the dual action on the nonzero
/// vectors, ascending. There are exactly `m` of them.
pub fn dual_orbits(group: &Group) -> Vec<u32> {
    let count = group.translation_count();
    assert!(
        group.n() <= crate::MAX_ENUM_N,
        "dual orbit enumeration is for n <= {}",
        crate::MAX_ENUM_N
    );
    let mut seen = vec![false; count as usize];
    let mut reps = Vec::with_capacity(group.m() as usize);
    for w in 1..count as u32 {
        if seen[w as usize] {
            continue;
        }
        reps.push(w);
        let mut wk = w;
        for _ in 0..3 {
            seen[wk as usize] = true;
            wk = group.beta_dual(wk);
        }
    }
    reps
}

/// All irreducibles in canonical order: `chi_0, chi_1, chi_2, theta_1, ...`.
pub fn irreducibles(group: &Group) -> Vec<IrrChar> {
    let mut out: Vec<IrrChar> = (0..3).map(|j| IrrChar::linear(*group, j)).collect();
    out.extend(dual_orbits(group).into_iter().map(|w| IrrChar { group: *group, kind: CharKind::Induced(w) }));
    out
}

/// `<f, g> = (1/|G|) sum f(x) conj(g(x))`, summed class-wise. Both arguments
/// must be class functions.
pub fn inner_product_fn(
    group: &Group,
    classes: &[ConjugacyClass],
    f: impl Fn(GroupElement) -> Cyclotomic,
    g: impl Fn(GroupElement) -> Cyclotomic,
) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for cl in classes {
        let size = Cyclotomic::from_integer(cl.size as i64);
        acc += size * f(cl.representative) * g(cl.representative).conj();
    }
    let inv_order = BigRational::new(1.into(), group.order().into());
    acc * &inv_order
}

/// Inner product of two characters; always a rational number.
pub fn inner_product(group: &Group, x: &IrrChar, y: &IrrChar) -> BigRational {
    let classes = group.conjugacy_classes();
    inner_product_fn(group, &classes, |g| x.value(g), |g| y.value(g))
        .as_rational()
        .expect("inner products of characters are rational")
        .clone()
}

/// The permutation character of `G` acting on the left cosets `G/H`,
/// together with its decomposition into irreducibles.
#[derive(Clone, Debug)]
pub struct PermutationCharacter {
    pub degree: u64,
    pub classes: Vec<ConjugacyClass>,
    /// fixed-coset counts, aligned with `classes`
    pub values: Vec<i64>,
    /// (irreducible, multiplicity), zero multiplicities omitted
    pub decomposition: Vec<(IrrChar, u64)>,
}

/// Fixed-coset counts of `G` on `G/H` at each class representative, without
/// the (more expensive) decomposition into irreducibles.
pub fn permutation_values(
    group: &Group,
    h: &SubgroupHandle,
    classes: &[ConjugacyClass],
) -> Vec<i64> {
    let reps = group.left_coset_reps(h);
    classes
        .iter()
        .map(|cl| {
            reps.iter()
                .filter(|&&r| h.contains(group, r.inverse() * cl.representative * r))
                .count() as i64
        })
        .collect()
}

pub fn permutation_character(group: &Group, h: &SubgroupHandle) -> Result<PermutationCharacter> {
    let classes = group.conjugacy_classes();
    let degree = group.left_coset_reps(h).len() as u64;
    let values = permutation_values(group, h, &classes);

    let mut decomposition = Vec::new();
    let mut dim_sum = 0u64;
    for irr in irreducibles(group) {
        let ip = inner_product_fn(
            group,
            &classes,
            |g| {
                let idx = class_index(&classes, group, g);
                Cyclotomic::from_integer(values[idx])
            },
            |g| irr.value(g),
        );
        let mult = ip
            .as_rational()
            .filter(|r| r.is_integer() && !r.is_negative())
            .and_then(|r| r.to_integer().to_u64())
            .ok_or_else(|| {
                Error::Inconsistency(format!(
                    "multiplicity of {} in a permutation character is not a natural number",
                    irr.label()
                ))
            })?;
        if mult > 0 {
            dim_sum += mult * irr.degree();
            decomposition.push((irr, mult));
        }
    }
    if dim_sum != degree {
        return Err(Error::Inconsistency(format!(
            "permutation character of degree {degree} decomposed into total degree {dim_sum}"
        )));
    }
    Ok(PermutationCharacter { degree, classes, values, decomposition })
}

fn class_index(classes: &[ConjugacyClass], group: &Group, g: GroupElement) -> usize {
    // class representatives are the least members, so the lookup is cheap
    let rep = *group.conjugacy_class_of(g).first().expect("class is nonempty");
    classes
        .iter()
        .position(|c| c.representative == rep)
        .expect("every element lies in some class")
}

impl PermutationCharacter {
    pub fn multiplicity_of(&self, irr: &IrrChar) -> u64 {
        self.decomposition.iter().find(|(x, _)| x == irr).map_or(0, |(_, m)| *m)
    }

    pub fn value_at(&self, group: &Group, g: GroupElement) -> i64 {
        self.values[class_index(&self.classes, group, g)]
    }
}

/// `ker theta = ker psi_w ∩ ker psi_w^b`, a `beta`-invariant subspace of
/// codimension 2.
pub fn kernel_of_theta(group: &Group, w: u32) -> Result<NSubspace> {
    let d = group.translation_dim();
    let w = w & f2::ones(d);
    if w == 0 {
        return Err(Error::InvalidInput("the trivial character has no induced theta".into()));
    }
    let ns = NSubspace::nullspace(d, &[w, group.beta_dual(w)]);
    if ns.dim() != d - 2 {
        return Err(Error::Inconsistency(format!(
            "kernel of theta should have codimension 2, got dim {}",
            ns.dim()
        )));
    }
    debug_assert!(ns.is_invariant_under(|v| group.beta(v)));
    Ok(ns)
}

/// The full character table, rows in canonical irreducible order and columns
/// in canonical class order.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group: Group,
    pub classes: Vec<ConjugacyClass>,
    pub irreducibles: Vec<IrrChar>,
    pub values: Vec<Vec<Cyclotomic>>,
}

pub fn character_table(group: &Group) -> CharacterTable {
    let classes = group.conjugacy_classes();
    let irreducibles = irreducibles(group);
    let values = irreducibles
        .iter()
        .map(|irr| classes.iter().map(|cl| irr.value(cl.representative)).collect())
        .collect();
    CharacterTable { group: *group, classes, irreducibles, values }
}

impl CharacterTable {
    /// First and second orthogonality relations plus the degree identity,
    /// all exact.
    pub fn verify_orthogonality(&self) -> Result<()> {
        let order = BigRational::from_integer(self.group.order().into());
        let deg_sq: u64 = self.irreducibles.iter().map(|x| x.degree() * x.degree()).sum();
        if deg_sq != self.group.order() {
            return Err(Error::IdentityViolation(format!(
                "sum of squared degrees is {deg_sq}, expected {}",
                self.group.order()
            )));
        }
        for (r, row_r) in self.values.iter().enumerate() {
            for (s, row_s) in self.values.iter().enumerate().skip(r) {
                let mut acc = Cyclotomic::zero();
                for (c, cl) in self.classes.iter().enumerate() {
                    acc += Cyclotomic::from_integer(cl.size as i64)
                        * row_r[c].clone()
                        * row_s[c].conj();
                }
                let expect = if r == s {
                    Cyclotomic::from_rational(order.clone())
                } else {
                    Cyclotomic::zero()
                };
                if acc != expect {
                    return Err(Error::IdentityViolation(format!(
                        "row orthogonality fails for {} and {}",
                        self.irreducibles[r].label(),
                        self.irreducibles[s].label()
                    )));
                }
            }
        }
        for (c, cl_c) in self.classes.iter().enumerate() {
            for (d, _) in self.classes.iter().enumerate().skip(c) {
                let mut acc = Cyclotomic::zero();
                for row in &self.values {
                    acc += row[c].clone() * row[d].conj();
                }
                let expect = if c == d {
                    Cyclotomic::from_rational(BigRational::new(
                        self.group.order().into(),
                        cl_c.size.into(),
                    ))
                } else {
                    Cyclotomic::zero()
                };
                if acc != expect {
                    return Err(Error::IdentityViolation(format!(
                        "column orthogonality fails for classes of {} and {}",
                        self.classes[c].representative, self.classes[d].representative
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut header = vec!["".to_string()];
        header.extend(self.classes.iter().map(|c| c.representative.to_word()));
        let mut size_row = vec!["|class|".to_string()];
        size_row.extend(self.classes.iter().map(|c| c.size.to_string()));
        let mut rows: Vec<Vec<String>> = vec![header, size_row];
        for (irr, vals) in self.irreducibles.iter().zip(&self.values) {
            let mut row = vec![irr.label()];
            row.extend(vals.iter().map(|v| v.to_string()));
            rows.push(row);
        }

        let cols = rows[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap())
            .collect();
        let mut out = String::new();
        for row in &rows {
            for (c, cell) in row.iter().enumerate() {
                if c > 0 {
                    out.push_str("  ");
                }
                out.push_str(&format!("{:>width$}", cell, width = widths[c]));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.group.n(),
            "order": self.group.order(),
            "classes": self.classes.iter().map(|c| json!({
                "representative": c.representative.to_word(),
                "size": c.size,
            })).collect::<Vec<_>>(),
            "irreducibles": self.irreducibles.iter().map(|x| json!({
                "label": x.label(),
                "degree": x.degree(),
            })).collect::<Vec<_>>(),
            "values": self.values.iter().map(|row| {
                row.iter().map(|v| v.to_string()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_orbit_counts() {
        for (n, m) in [(1u32, 1u64), (2, 5), (3, 21), (4, 85)] {
            let g = Group::new(n).unwrap();
            assert_eq!(dual_orbits(&g).len() as u64, m);
            assert_eq!(g.m(), m);
        }
    }

    #[test]
    fn degree_identity_formula_level() {
        // 3 * 1^2 + m * 3^2 = |G| without enumerating anything
        for n in 1..=8u32 {
            let g = Group::new(n).unwrap();
            assert_eq!(3 + 9 * g.m(), g.order());
        }
    }

    #[test]
    fn dual_action_has_no_fixed_characters() {
        for n in 1..=4u32 {
            let g = Group::new(n).unwrap();
            for w in 1..g.translation_count() as u32 {
                assert_ne!(g.beta_dual(w), w);
            }
        }
    }

    #[test]
    fn theta_values_n1() {
        // frozen: the orbit sum of the three nontrivial sign characters of
        // V_4 is -1 at every nonzero vector (one +1 and two -1 each), 3 at 0
        let g = Group::new(1).unwrap();
        let theta = IrrChar::induced(g, 1);
        assert_eq!(theta.induced_value(g.identity()), 3);
        for v in 1..4u32 {
            assert_eq!(theta.induced_value(g.element(v, 0)), -1);
        }
        for v in 0..4u32 {
            for i in 1..3u8 {
                assert_eq!(theta.induced_value(g.element(v, i)), 0);
            }
        }
    }

    #[test]
    fn theta_values_land_in_minus_one_three() {
        let g = Group::new(3).unwrap();
        for w in dual_orbits(&g) {
            let theta = IrrChar::induced(g, w);
            for v in 1..g.translation_count() as u32 {
                let val = theta.induced_value(g.element(v, 0));
                assert!(val == -1 || val == 3, "theta(involution) = {val}");
            }
        }
    }

    #[test]
    fn induced_orbit_members_are_identified() {
        let g = Group::new(2).unwrap();
        let w = 0b0110u32;
        assert_eq!(IrrChar::induced(g, w), IrrChar::induced(g, g.beta_dual(w)));
    }

    #[test]
    fn kernel_of_theta_n2_frozen() {
        // dual vector of a_1: the kernel is spanned by the second block,
        // brute-force checked against the two sign conditions
        let g = Group::new(2).unwrap();
        let u = kernel_of_theta(&g, 0b0001).unwrap();
        assert_eq!(u.basis(), &[0b0100, 0b1000]);
        let brute: Vec<u32> = (0..16u32)
            .filter(|&v| {
                f2::dot(0b0001, v) == 0 && f2::dot(g.beta_dual(0b0001), v) == 0
            })
            .collect();
        assert_eq!(u.elements_sorted(), brute);
        assert!(kernel_of_theta(&g, 0).is_err());
    }

    #[test]
    fn inner_products_match_elementwise_summation() {
        // class-wise evaluation against a brute-force sum over all elements
        for n in 1..=2u32 {
            let g = Group::new(n).unwrap();
            let irrs = irreducibles(&g);
            for x in &irrs {
                for y in &irrs {
                    let mut acc = Cyclotomic::zero();
                    for e in g.elements() {
                        acc += x.value(e) * y.value(e).conj();
                    }
                    let brute = acc * &BigRational::new(1.into(), g.order().into());
                    let fast = Cyclotomic::from_rational(inner_product(&g, x, y));
                    assert_eq!(brute, fast);
                    let expect = if x == y { Cyclotomic::one() } else { Cyclotomic::zero() };
                    assert_eq!(fast, expect, "<{}, {}>", x.label(), y.label());
                }
            }
        }
    }

    #[test]
    fn table_orthogonality_small() {
        for n in 1..=2u32 {
            let g = Group::new(n).unwrap();
            character_table(&g).verify_orthogonality().unwrap();
        }
    }

    #[test]
    fn regular_and_transitive_permutation_characters() {
        let g = Group::new(2).unwrap();
        // G/G is the trivial character
        let triv = permutation_character(&g, &SubgroupHandle::FullGroup).unwrap();
        assert_eq!(triv.decomposition, vec![(IrrChar::linear(g, 0), 1)]);
        // G/1 is the regular character: multiplicities equal degrees
        let reg = permutation_character(&g, &SubgroupHandle::Trivial).unwrap();
        for (irr, mult) in &reg.decomposition {
            assert_eq!(*mult, irr.degree());
        }
        assert_eq!(reg.decomposition.len(), 3 + g.m() as usize);
    }

    #[test]
    fn rho_n_and_rho_b_decompositions() {
        let g = Group::new(2).unwrap();
        let rho_n = permutation_character(&g, &g.subgroup_n()).unwrap();
        let expect: Vec<(IrrChar, u64)> =
            (0..3).map(|j| (IrrChar::linear(g, j), 1)).collect();
        assert_eq!(rho_n.decomposition, expect);

        let rho_b = permutation_character(&g, &g.subgroup_b()).unwrap();
        let mut expect = vec![(IrrChar::linear(g, 0), 1)];
        expect.extend(dual_orbits(&g).into_iter().map(|w| (IrrChar::induced(g, w), 1)));
        assert_eq!(rho_b.decomposition, expect);
    }

    #[test]
    fn labels() {
        let g = Group::new(2).unwrap();
        let irrs = irreducibles(&g);
        assert_eq!(irrs[0].label(), "chi_0");
        assert_eq!(irrs[2].label(), "chi_2");
        assert_eq!(irrs[3].label(), "theta_1");
        assert_eq!(irrs[7].label(), "theta_5");
    }

    #[test]
    fn table_renders() {
        let g = Group::new(1).unwrap();
        let table = character_table(&g);
        let text = table.to_text();
        assert!(text.contains("theta_1"));
        assert!(text.contains("chi_2"));
        let j = table.to_json();
        assert_eq!(j["order"], 12);
        assert_eq!(j["values"].as_array().unwrap().len(), 4);
    }
}
