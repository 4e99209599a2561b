//! Finite groups as validated Cayley tables.

use thiserror::Error;

/// Default limit on group order. The convolution algebra has dimension
/// `|G|·dim(A)`, so exact linear algebra grows quickly with the order.
pub const DEFAULT_ORDER_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("table is not square (row {row} has length {len}, expected {order})")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry ({row}, {col}) = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("group order {order} exceeds cap {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NotAssociative(usize, usize, usize),
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
}

/// A finite group on the elements `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table with the default order cap.
    pub fn validate_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::validate_table_with_cap(table, DEFAULT_ORDER_CAP)
    }

    pub fn validate_table_with_cap(table: &[Vec<usize>], cap: usize) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > cap {
            return Err(GroupError::OrderCap { order: n, cap });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    order: n,
                });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::OutOfRange { row, col, value });
            }
        }
        let flat: Vec<usize> = table.iter().flatten().copied().collect();
        let mul = |a: usize, b: usize| flat[a * n + b];
        for x in 0..n {
            for y in 0..n {
                let xy = mul(x, y);
                for z in 0..n {
                    if mul(xy, z) != mul(x, mul(y, z)) {
                        return Err(GroupError::NotAssociative(x, y, z));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let inverses = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                    .ok_or(GroupError::NoInverse(x))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroup {
            order: n,
            table: flat,
            identity,
            inverses,
        })
    }

    fn from_mul(order: usize, identity: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let table: Vec<usize> = (0..order)
            .flat_map(|a| (0..order).map(move |b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        let inverses = (0..order)
            .map(|x| {
                (0..order)
                    .find(|&y| table[x * order + y] == identity)
                    .expect("constructed group has inverses")
            })
            .collect();
        FiniteGroup {
            order,
            table,
            identity,
            inverses,
        }
    }

    /// ℤ_n with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n ≥ 1");
        Self::from_mul(n, 0, |a, b| (a + b) % n)
    }

    /// `G × H`, with the pair `(g, h)` at index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let m = h.order;
        let identity = g.identity * m + h.identity;
        Self::from_mul(g.order * m, identity, |a, b| {
            g.mul(a / m, b / m) * m + h.mul(a % m, b % m)
        })
    }

    /// Dihedral group of order `2n`; `r^k s^e` sits at index `k + n·e`, with
    /// `s r s = r⁻¹`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1, "dihedral group needs n ≥ 1");
        Self::from_mul(2 * n, 0, |a, b| {
            let (k1, e1) = (a % n, a / n);
            let (k2, e2) = (b % n, b / n);
            // r^k1 s^e1 r^k2 s^e2 = r^(k1 ± k2) s^(e1+e2)
            let k = if e1 == 0 { k1 + k2 } else { k1 + n - k2 } % n;
            k + n * ((e1 + e2) % 2)
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// First pair `(x, y)` with `xy ≠ yx`, if any.
    pub fn non_commuting_pair(&self) -> Option<(usize, usize)> {
        self.elements()
            .flat_map(|x| self.elements().map(move |y| (x, y)))
            .find(|&(x, y)| self.mul(x, y) != self.mul(y, x))
    }

    pub fn is_abelian(&self) -> bool {
        self.non_commuting_pair().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_table_validates() {
        let g = FiniteGroup::validate_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inverses(), &[0, 1]);
    }

    #[test]
    fn degenerate_table_rejected() {
        let err = FiniteGroup::validate_table(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::NoInverse(1) | GroupError::NoIdentity));
    }

    #[test]
    fn non_associative_latin_square_gives_witness() {
        // x∘y = (-x - y) mod 3 is a Latin square but not associative
        let t: Vec<Vec<usize>> = (0..3)
            .map(|x| (0..3).map(|y| (6 - x - y) % 3).collect())
            .collect();
        match FiniteGroup::validate_table(&t) {
            Err(GroupError::NotAssociative(x, y, z)) => {
                assert_ne!(t[t[x][y]][z], t[x][t[y][z]]);
            }
            other => panic!("expected NotAssociative, got {other:?}"),
        }
    }

    #[test]
    fn shape_errors() {
        assert_eq!(FiniteGroup::validate_table(&[]), Err(GroupError::Empty));
        assert!(matches!(
            FiniteGroup::validate_table(&[vec![0, 1], vec![1]]),
            Err(GroupError::NotSquare { row: 1, .. })
        ));
        assert!(matches!(
            FiniteGroup::validate_table(&[vec![0, 2], vec![1, 0]]),
            Err(GroupError::OutOfRange { row: 0, col: 1, value: 2 })
        ));
        let big = FiniteGroup::cyclic(5).table();
        assert!(matches!(
            FiniteGroup::validate_table_with_cap(&big, 4),
            Err(GroupError::OrderCap { order: 5, cap: 4 })
        ));
    }

    #[test]
    fn user_table_with_nonzero_identity() {
        // ℤ2 relabelled so that 1 is the identity
        let g = FiniteGroup::validate_table(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inv(0), 0);
    }

    #[test]
    fn named_constructors() {
        let c4 = FiniteGroup::cyclic(4);
        assert_eq!(c4.inv(1), 3);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert_eq!(v4.order(), 4);
        assert!(v4.elements().all(|x| v4.inv(x) == x));
        let d3 = FiniteGroup::dihedral(3);
        assert_eq!(d3.order(), 6);
        let (x, y) = d3.non_commuting_pair().expect("D3 is non-abelian");
        assert_ne!(d3.mul(x, y), d3.mul(y, x));
        for g in [c4, v4, d3, FiniteGroup::dihedral(1), FiniteGroup::dihedral(4)] {
            let re = FiniteGroup::validate_table(&g.table()).unwrap();
            assert_eq!(re, g);
        }
    }

    #[test]
    fn product_order_multiplies() {
        let g = FiniteGroup::direct_product(&FiniteGroup::dihedral(3), &FiniteGroup::cyclic(4));
        assert_eq!(g.order(), 24);
        assert!(g.elements().all(|x| g.mul(x, g.inv(x)) == g.identity()));
    }
}
