//! Linear algebra over F_2 on bit-vector rows.
//!
//! Vectors live in `F_2^d` for `d <= 32` and are stored as the low `d` bits
//! of a `u32` (bit `j` = coordinate `j`). Subspaces are kept in reduced row
//! echelon form with the *lowest* set bit of each row as its pivot and rows
//! sorted by pivot, which makes the basis canonical: two subspaces are equal
//! iff their `basis` vectors are equal.

/// Parity of the standard bilinear form `<w, v> = sum w_j v_j` over F_2.
#[inline]
pub fn dot(w: u32, v: u32) -> u32 {
    (w & v).count_ones() & 1
}

/// Reduced row echelon form, in place. Returns the rank. Rows end up sorted
/// by pivot position with all non-pivot entries in pivot columns cleared;
/// zero rows are dropped.
pub fn rref(rows: &mut Vec<u32>) -> usize {
    let mut basis: Vec<u32> = Vec::with_capacity(rows.len());
    for mut v in rows.drain(..) {
        for &r in &basis {
            let pivot = r & r.wrapping_neg(); // lowest set bit
            if v & pivot != 0 {
                v ^= r;
            }
        }
        if v != 0 {
            // clear this vector's pivot column in the existing rows
            let pivot = v & v.wrapping_neg();
            for r in basis.iter_mut() {
                if *r & pivot != 0 {
                    *r ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_unstable_by_key(|r| r & r.wrapping_neg());
    *rows = basis;
    rows.len()
}

/// Rank of a list of row vectors.
pub fn rank(rows: &[u32]) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work)
}

/// A subspace of `F_2^ambient` in canonical (RREF) basis form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NSubspace {
    ambient: u32,
    basis: Vec<u32>,
}

impl NSubspace {
    /// Span of the given vectors inside `F_2^ambient`.
    pub fn span(ambient: u32, vectors: &[u32]) -> Self {
        assert!(ambient <= 32, "ambient dimension must fit in u32 bits");
        let mask = ones(ambient);
        let mut rows: Vec<u32> = vectors.iter().map(|v| v & mask).collect();
        rref(&mut rows);
        NSubspace { ambient, basis: rows }
    }

    pub fn zero(ambient: u32) -> Self {
        NSubspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: u32) -> Self {
        let rows: Vec<u32> = (0..ambient).map(|j| 1 << j).collect();
        NSubspace { ambient, basis: rows }
    }

    /// Solution space of `dot(row, v) = 0` for every given row.
    pub fn nullspace(ambient: u32, constraint_rows: &[u32]) -> Self {
        let mask = ones(ambient);
        let mut rows: Vec<u32> = constraint_rows.iter().map(|r| r & mask).collect();
        rref(&mut rows);
        let pivot_mask: u32 = rows.iter().map(|r| r & r.wrapping_neg()).fold(0, |a, b| a | b);
        let mut basis = Vec::with_capacity(ambient as usize - rows.len());
        for j in 0..ambient {
            let ej = 1u32 << j;
            if pivot_mask & ej != 0 {
                continue; // pivot column, not free
            }
            let mut v = ej;
            for &r in &rows {
                if r & ej != 0 {
                    v |= r & r.wrapping_neg();
                }
            }
            basis.push(v);
        }
        // already independent; normalise to the canonical form anyway
        rref(&mut basis);
        NSubspace { ambient, basis }
    }

    /// `{ w : dot(w, v) = 0 for all v in self }`.
    pub fn orthogonal_complement(&self) -> Self {
        Self::nullspace(self.ambient, &self.basis)
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn size(&self) -> u64 {
        1u64 << self.dim()
    }

    /// Canonical RREF basis, sorted by pivot.
    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    /// Canonical coset representative of `v` modulo this subspace.
    pub fn reduce(&self, v: u32) -> u32 {
        let mut v = v & ones(self.ambient);
        for &r in &self.basis {
            if v & (r & r.wrapping_neg()) != 0 {
                v ^= r;
            }
        }
        v
    }

    pub fn is_subspace_of(&self, other: &NSubspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|&v| other.contains(v))
    }

    /// Is the subspace invariant under the linear map `f`?
    pub fn is_invariant_under(&self, f: impl Fn(u32) -> u32) -> bool {
        self.basis.iter().all(|&v| self.contains(f(v)))
    }

    /// Image of the subspace under the linear map `f`.
    pub fn map(&self, f: impl Fn(u32) -> u32) -> Self {
        let rows: Vec<u32> = self.basis.iter().map(|&v| f(v)).collect();
        Self::span(self.ambient, &rows)
    }

    /// Intersection via the Zassenhaus trick: echelonise rows `(a | a)` for
    /// `a` in self and `(b | 0)` for `b` in other; rows whose left half is
    /// zero have right halves spanning the intersection.
    pub fn intersect(&self, other: &NSubspace) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let d = self.ambient;
        let mut rows: Vec<u64> = self
            .basis
            .iter()
            .map(|&a| ((a as u64) << d) | a as u64)
            .chain(other.basis.iter().map(|&b| (b as u64) << d))
            .collect();
        // elimination on the left half only (pivots chosen among bits d..2d)
        let mut basis: Vec<u64> = Vec::new();
        let left = ones(d) as u64; // mask of the *right* half bits 0..d
        for mut v in rows.drain(..) {
            for &r in &basis {
                let hi = r >> d;
                if hi != 0 {
                    let pivot = hi & hi.wrapping_neg();
                    if (v >> d) & pivot != 0 {
                        v ^= r;
                    }
                }
            }
            if v >> d != 0 {
                basis.push(v);
            } else if v & left != 0 {
                basis.push(v); // left half zero: right half lies in A ∩ B
            }
        }
        let inter_rows: Vec<u32> =
            basis.iter().filter(|&&r| r >> d == 0).map(|&r| (r & left) as u32).collect();
        Self::span(d, &inter_rows)
    }

    /// All `2^dim` vectors, ascending. Only sensible for small subspaces.
    pub fn elements_sorted(&self) -> Vec<u32> {
        assert!(self.dim() <= 24, "subspace too large to enumerate");
        let mut out = Vec::with_capacity(1 << self.dim());
        for mask in 0u32..(1 << self.dim()) {
            let mut v = 0u32;
            for (i, &b) in self.basis.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    v ^= b;
                }
            }
            out.push(v);
        }
        out.sort_unstable();
        out
    }

    /// Bit-string form of the basis, leftmost character = coordinate 0.
    pub fn basis_strings(&self) -> Vec<String> {
        self.basis.iter().map(|&v| bits_to_string(v, self.ambient)).collect()
    }
}

/// Mask with the low `d` bits set.
#[inline]
pub fn ones(d: u32) -> u32 {
    if d >= 32 {
        u32::MAX
    } else {
        (1u32 << d) - 1
    }
}

/// Render `v` as a `d`-character bit string, coordinate 0 first.
pub fn bits_to_string(v: u32, d: u32) -> String {
    (0..d).map(|j| if v & (1 << j) != 0 { '1' } else { '0' }).collect()
}

/// Inverse of [`bits_to_string`].
pub fn bits_from_string(s: &str) -> Option<u32> {
    if s.is_empty() || s.len() > 32 {
        return None;
    }
    let mut v = 0u32;
    for (j, ch) in s.chars().enumerate() {
        match ch {
            '1' => v |= 1 << j,
            '0' => {}
            _ => return None,
        }
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_is_canonical() {
        // two generating sets of the same subspace of F_2^4
        let a = NSubspace::span(4, &[0b0011, 0b0110]);
        let b = NSubspace::span(4, &[0b0101, 0b0110, 0b0011]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(0b0101));
        assert!(!a.contains(0b0001));
    }

    #[test]
    fn nullspace_annihilates_rows() {
        let rows = [0b1011u32, 0b0110];
        let ns = NSubspace::nullspace(5, &rows);
        assert_eq!(ns.dim(), 3);
        for v in ns.elements_sorted() {
            for &r in &rows {
                assert_eq!(dot(r, v), 0);
            }
        }
    }

    #[test]
    fn complement_dimensions_add_up() {
        let s = NSubspace::span(6, &[0b000111, 0b101010]);
        let c = s.orthogonal_complement();
        assert_eq!(s.dim() + c.dim(), 6);
        for &v in s.basis() {
            for &w in c.basis() {
                assert_eq!(dot(v, w), 0);
            }
        }
    }

    #[test]
    fn intersect_matches_enumeration() {
        let a = NSubspace::span(6, &[0b000011, 0b001100, 0b110000]);
        let b = NSubspace::span(6, &[0b000011, 0b111100]);
        let i = a.intersect(&b);
        let brute: Vec<u32> =
            a.elements_sorted().into_iter().filter(|&v| b.contains(v)).collect();
        let expect = NSubspace::span(6, &brute);
        assert_eq!(i, expect);
        assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
    }

    #[test]
    fn full_and_zero() {
        assert_eq!(NSubspace::full(4).size(), 16);
        assert_eq!(NSubspace::zero(4).size(), 1);
        assert!(NSubspace::full(4).contains(0b1111));
    }

    #[test]
    fn bit_strings_round_trip() {
        for v in [0u32, 1, 0b1010, 0b1111] {
            let s = bits_to_string(v, 4);
            assert_eq!(bits_from_string(&s), Some(v));
        }
        assert_eq!(bits_to_string(0b0001, 4), "1000"); // coordinate 0 leftmost
        assert_eq!(bits_from_string("10x1"), None);
    }
}
