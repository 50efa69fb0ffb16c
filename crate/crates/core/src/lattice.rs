//! The subgroup/character lattice attached to the degree-3 irreducibles.
//!
//! For each dual orbit `{w, bw, b^2 w}` of a nontrivial sign character there
//! is one lattice entry consisting of
//!
//! * `U = ker theta`, a `beta`-invariant subspace of codimension 2 in `N`
//!   (normal in `G` of index 4 in `N`),
//! * the three codimension-1 subspaces `L` strictly between `U` and `N`
//!   (the kernels of the three sign characters in the orbit), permuted
//!   cyclically by `beta`,
//! * `M = U * B`, a subgroup of index 4 in `G` containing `B`,
//! * `theta` itself.
//!
//! `U <-> M <-> theta` are mutually inverse bijections (`M ∩ N = U`,
//! `ker theta = U`), so all three families have the same count `m`.

use serde_json::{json, Value};

use crate::chars::{self, IrrChar};
use crate::error::{Error, Result};
use crate::f2::NSubspace;
use crate::group::{Group, SubgroupHandle};

#[derive(Clone, Debug)]
pub struct LatticeEntry {
    /// 1-based position after sorting by `u`.
    pub index: usize,
    /// `ker theta`, dimension `2n - 2`.
    pub u: NSubspace,
    /// `ker psi^(b^k)` for `k = 0, 1, 2`, where `psi` is the orbit-least
    /// sign character vanishing on `u`.
    pub l_choices: [NSubspace; 3],
    /// The least of the three choices; reports and the isogeny-scalar
    /// checks use this one.
    pub l_canonical: NSubspace,
    /// `U * B`.
    pub m_sub: SubgroupHandle,
    pub theta: IrrChar,
}

/// All `m` lattice entries, sorted by the canonical basis of `u`.
pub fn enumerate_lattice(group: &Group) -> Vec<LatticeEntry> {
    let d = group.translation_dim();
    let mut entries: Vec<LatticeEntry> = chars::dual_orbits(group)
        .into_iter()
        .map(|w| {
            let theta = IrrChar::induced(*group, w);
            let u = chars::kernel_of_theta(group, w).expect("orbit representatives are nonzero");
            let l_choices = [
                NSubspace::nullspace(d, &[w]),
                NSubspace::nullspace(d, &[group.beta_dual(w)]),
                NSubspace::nullspace(d, &[group.beta_dual(group.beta_dual(w))]),
            ];
            let l_canonical = l_choices.iter().min().unwrap().clone();
            let m_sub = SubgroupHandle::Msub(u.clone());
            LatticeEntry { index: 0, u, l_choices, l_canonical, m_sub, theta }
        })
        .collect();
    entries.sort_by(|a, b| a.u.cmp(&b.u));
    for (i, e) in entries.iter_mut().enumerate() {
        e.index = i + 1;
    }
    entries
}

/// The three codimension-1 subspaces strictly between a `beta`-invariant
/// codimension-2 subspace `u` and `N`. They are the kernels of the three
/// nonzero functionals vanishing on `u`, which form a single dual orbit, so
/// `beta` permutes the outputs cyclically.
pub fn l_subgroups(group: &Group, u: &NSubspace) -> Result<[NSubspace; 3]> {
    let d = group.translation_dim();
    if u.ambient() != d || u.dim() != d - 2 {
        return Err(Error::InvalidInput(format!(
            "expected a codimension-2 subspace of F_2^{d}, got dim {} in F_2^{}",
            u.dim(),
            u.ambient()
        )));
    }
    if !u.is_invariant_under(|v| group.beta(v)) {
        return Err(Error::InvalidInput(
            "subspace is not invariant under the order-3 action".into(),
        ));
    }
    let w0 = u.orthogonal_complement().elements_sorted()[1]; // least nonzero
    let l0 = NSubspace::nullspace(d, &[w0]);
    let l1 = NSubspace::nullspace(d, &[group.beta_dual(w0)]);
    let l2 = NSubspace::nullspace(d, &[group.beta_dual(group.beta_dual(w0))]);
    for l in [&l0, &l1, &l2] {
        debug_assert!(u.is_subspace_of(l));
    }
    Ok([l0, l1, l2])
}

/// JSON dump of the whole lattice: subspace bases as bit strings (leftmost
/// character = coefficient of `a1`), plus the character labels.
pub fn lattice_json(group: &Group) -> Value {
    let entries: Vec<Value> = enumerate_lattice(group)
        .iter()
        .map(|e| {
            json!({
                "index": e.index,
                "u_basis": e.u.basis_strings(),
                "l_canonical": e.l_canonical.basis_strings(),
                "l_choices": e.l_choices.iter().map(|l| l.basis_strings()).collect::<Vec<_>>(),
                "m_order": e.m_sub.order(group),
                "m_index": e.m_sub.index(group),
                "theta": e.theta.label(),
            })
        })
        .collect();
    json!({
        "n": group.n(),
        "m": group.m(),
        "entries": entries,
    })
}
