use super::{Mat, Poly, Rational, Ring};

/// A tridiagonal matrix with polynomial diagonal and scalar off-diagonals.
///
/// Indices are 0-based. `sup[i]` sits at `(i, i+1)` and `sub[i]` at
/// `(i+1, i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagSpec<C: Ring = Rational> {
    pub diag: Vec<Poly<C>>,
    pub sup: Vec<C>,
    pub sub: Vec<C>,
}

impl<C: Ring> TridiagSpec<C> {
    pub fn new(diag: Vec<Poly<C>>, sup: Vec<C>, sub: Vec<C>) -> Self {
        let n = diag.len();
        assert!(
            sup.len() + 1 == n.max(1) && sub.len() == sup.len(),
            "off-diagonals must have length n - 1"
        );
        TridiagSpec { diag, sup, sub }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// `x Id - L` for the periodic Toda operator with the two
    /// `h`-dependent corners dropped: diagonal `x - b_i`, superdiagonal
    /// `-a_i`, subdiagonal `-1`.
    pub fn toda(a: &[C], b: &[C]) -> Self {
        let n = b.len();
        TridiagSpec::new(
            b.iter().map(|bi| Poly::linear_root(bi.clone())).collect(),
            a.iter().take(n.saturating_sub(1)).map(|ai| -ai.clone()).collect(),
            vec![-C::one(); n.saturating_sub(1)],
        )
    }
}

/// Determinant of the principal minor obtained by deleting the rows and
/// columns in `removed` (0-based).
///
/// The surviving indices split into runs of consecutive indices; the minor is
/// block diagonal over those runs and each block is expanded by the
/// three-term recursion `D_k = d_k D_{k-1} - sup_{k-1} sub_{k-1} D_{k-2}`.
/// The empty minor has determinant 1.
pub fn tridiag_minor_det<C: Ring>(m: &TridiagSpec<C>, removed: &[usize]) -> Poly<C> {
    let n = m.size();
    let keep: Vec<bool> = (0..n).map(|i| !removed.contains(&i)).collect();
    let mut total = Poly::one();
    let mut i = 0;
    while i < n {
        if !keep[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && keep[i] {
            i += 1;
        }
        total = &total * &block_det(m, start, i);
    }
    total
}

fn block_det<C: Ring>(m: &TridiagSpec<C>, start: usize, end: usize) -> Poly<C> {
    let mut prev = Poly::one();
    let mut cur = m.diag[start].clone();
    for k in start + 1..end {
        let coupling = m.sup[k - 1].clone() * m.sub[k - 1].clone();
        let next = &(&m.diag[k] * &cur) - &prev.scale(&coupling);
        prev = cur;
        cur = next;
    }
    cur
}

/// The full matrix of the minor, for cross-checks against a generic
/// determinant.
pub fn minor_matrix<C: Ring>(m: &TridiagSpec<C>, removed: &[usize]) -> Mat<Poly<C>> {
    let n = m.size();
    let keep: Vec<usize> = (0..n).filter(|i| !removed.contains(i)).collect();
    Mat::from_fn(keep.len(), keep.len(), |r, c| {
        let (i, j) = (keep[r], keep[c]);
        if i == j {
            m.diag[i].clone()
        } else if j == i + 1 {
            Poly::constant(m.sup[i].clone())
        } else if i == j + 1 {
            Poly::constant(m.sub[j].clone())
        } else {
            Poly::zero()
        }
    })
}

/// Generic dense determinant of a polynomial matrix.
pub fn dense_det<C: Ring>(m: &Mat<Poly<C>>) -> Poly<C> {
    if m.rows() == 0 {
        return Poly::one();
    }
    m.det()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, QPoly};

    fn spec2() -> TridiagSpec {
        // a1 = 3, b = (1, 2)
        TridiagSpec::toda(&[int(3), int(1)], &[int(1), int(2)])
    }

    #[test]
    fn two_by_two_minors() {
        let m = spec2();
        let full = tridiag_minor_det(&m, &[]);
        // (x - 1)(x - 2) - 3
        assert_eq!(full, QPoly::from_ints(&[-1, -3, 1]));
        assert_eq!(tridiag_minor_det(&m, &[0]), QPoly::from_ints(&[-2, 1]));
        assert_eq!(tridiag_minor_det(&m, &[0, 1]), QPoly::one());
        let d1 = tridiag_minor_det(&m, &[0]);
        let d2 = tridiag_minor_det(&m, &[1]);
        let lhs = &(&d1 * &d2) - &full;
        assert_eq!(lhs, QPoly::constant(int(3)));
    }

    #[test]
    fn three_by_three_km() {
        let m = TridiagSpec::toda(&[int(1), int(1), int(1)], &[int(0), int(0), int(0)]);
        assert_eq!(tridiag_minor_det(&m, &[]), QPoly::from_ints(&[0, -2, 0, 1]));
        assert_eq!(tridiag_minor_det(&m, &[2]), QPoly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn split_blocks_multiply() {
        let m = TridiagSpec::toda(
            &[int(2), int(3), int(5), int(7), int(1)],
            &[int(1), int(-1), int(2), int(0), int(4)],
        );
        let removed = [2];
        let dense = dense_det(&minor_matrix(&m, &removed));
        assert_eq!(tridiag_minor_det(&m, &removed), dense);
        let expected = &tridiag_minor_det(&m, &[2, 3, 4]) * &tridiag_minor_det(&m, &[0, 1, 2]);
        assert_eq!(tridiag_minor_det(&m, &removed), expected);
    }
}
