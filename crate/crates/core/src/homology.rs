//! Abelian invariants and second homology from the bar complex.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{prime_power_exponent, Elem, FiniteGroup, Subgroup};
use crate::snf::{smith_normal_form, IntegerMatrix};

/// Default largest group order accepted by [`h2_bar`].
pub const H2_BAR_BOUND: usize = 32;

/// A finite abelian group in invariant-factor form `d1 | d2 | ... | dk`,
/// every `di > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants(Vec<u64>);

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants(Vec::new())
    }

    /// Normal form of a direct sum of cyclic groups of the given orders.
    pub fn from_cyclic_orders(orders: impl IntoIterator<Item = u64>) -> Self {
        // primary decomposition then recombination
        let mut primary: Vec<(u64, Vec<u64>)> = Vec::new();
        for n in orders {
            assert!(n > 0, "cyclic factor of order zero");
            let mut m = n;
            let mut p = 2;
            while m > 1 {
                if p * p > m {
                    p = m;
                }
                if m % p == 0 {
                    let mut q = 1;
                    while m % p == 0 {
                        m /= p;
                        q *= p;
                    }
                    match primary.iter_mut().find(|e| e.0 == p) {
                        Some(e) => e.1.push(q),
                        None => primary.push((p, vec![q])),
                    }
                }
                p += 1;
            }
        }
        let len = primary.iter().map(|e| e.1.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (_, powers) in &mut primary {
            powers.sort_unstable();
            for (i, &q) in powers.iter().rev().enumerate() {
                factors[len - 1 - i] *= q;
            }
        }
        AbelianInvariants(factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.0
    }

    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    /// `1` for the trivial group, otherwise e.g. `C2 x C4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "C{d}")?;
        }
        Ok(())
    }
}

/// Invariants of the abelian quotient `A/B` for `B <= A`. Fails unless `B`
/// is normal in `A` with abelian quotient. Determined by counting the
/// solutions of `x^(p^k) ∈ B` in `A`.
pub fn abelian_invariants_of_quotient(
    g: &FiniteGroup,
    a: &Subgroup,
    b: &Subgroup,
) -> Result<AbelianInvariants> {
    if !b.is_subset(a) {
        return Err(Error::NotSubgroup);
    }
    let gens = a.generators();
    for &x in gens {
        if b.generators()
            .iter()
            .any(|&y| !b.contains(g.conjugate(y, x)))
        {
            return Err(Error::NotNormal);
        }
    }
    for (i, &x) in gens.iter().enumerate() {
        for &y in &gens[i + 1..] {
            if !b.contains(g.commutator(x, y)) {
                return Err(Error::NotAbelian);
            }
        }
    }
    let mut cyclic: Vec<u64> = Vec::new();
    let mut rest = (a.order() / b.order()) as u64;
    let mut p = 2;
    while rest > 1 {
        if p * p > rest {
            p = rest;
        }
        if !rest.is_multiple_of(p) {
            p += 1;
            continue;
        }
        let mut full = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            full += 1;
        }
        // e[k] = log_p |(A/B)[p^k]|
        let mut e: Vec<u32> = vec![0];
        let mut q: u64 = 1;
        while *e.last().unwrap() < full {
            q *= p;
            let count = a
                .elements()
                .iter()
                .filter(|&&x| b.contains(g.pow(x, q as i64)))
                .count()
                / b.order();
            e.push(prime_power_exponent(count as u64, p).expect("p-torsion count is a power of p"));
        }
        // r[k] = number of cyclic factors of order >= p^(k+1)
        let r: Vec<u32> = (1..e.len()).map(|k| e[k] - e[k - 1]).collect();
        for k in 0..r.len() {
            let exactly = r[k] - r.get(k + 1).copied().unwrap_or(0);
            for _ in 0..exactly {
                cyclic.push(p.pow(k as u32 + 1));
            }
        }
        p += 1;
    }
    Ok(AbelianInvariants::from_cyclic_orders(cyclic))
}

/// Invariants of an abelian subgroup.
pub fn abelian_invariants(g: &FiniteGroup, a: &Subgroup) -> Result<AbelianInvariants> {
    abelian_invariants_of_quotient(g, a, &g.trivial())
}

/// Invariants of `G/G'`.
pub fn abelianization(g: &FiniteGroup) -> AbelianInvariants {
    abelian_invariants_of_quotient(g, &g.whole(), &g.derived_subgroup()).expect("G/G' is abelian")
}

/// `H2(G, Z)` as the torsion of `ker d2 / im d3` in the normalized bar
/// complex, for groups of order at most `bound`.
pub fn h2_bar_with_bound(g: &FiniteGroup, bound: usize) -> Result<AbelianInvariants> {
    let n = g.order();
    if n > bound {
        return Err(Error::TooLarge { order: n, bound });
    }
    let m = n - 1;
    if m == 0 {
        return Ok(AbelianInvariants::trivial());
    }
    let table: Vec<Elem> = (0..n * n)
        .map(|i| g.mul(Elem((i / n) as u32), Elem((i % n) as u32)))
        .collect();
    let mul = |a: usize, b: usize| table[a * n + b].index();
    let idx2 = |a: usize, b: usize| (a - 1) * m + (b - 1);
    let mut d3 = IntegerMatrix::new(m * m, m * m * m);
    let mut col = 0;
    for a in 1..n {
        for b in 1..n {
            let ab = mul(a, b);
            for c in 1..n {
                let bc = mul(b, c);
                d3.add(idx2(b, c), col, 1);
                if ab != 0 {
                    d3.add(idx2(ab, c), col, -1);
                }
                if bc != 0 {
                    d3.add(idx2(a, bc), col, 1);
                }
                d3.add(idx2(a, b), col, -1);
                col += 1;
            }
        }
    }
    // coker d3 = Z^(rank of free part) + torsion; the torsion lies in ker d2
    // because im d2 is free
    let snf = smith_normal_form(&d3);
    let torsion = snf
        .torsion()
        .into_iter()
        .map(|d| u64::try_from(&d).expect("homology factor fits in u64"));
    Ok(AbelianInvariants::from_cyclic_orders(torsion))
}

pub fn h2_bar(g: &FiniteGroup) -> Result<AbelianInvariants> {
    h2_bar_with_bound(g, H2_BAR_BOUND)
}

/// `A ∧ A` for an abelian group `A`: the sum of `C_gcd(di, dj)` over `i < j`.
pub fn exterior_square_abelian(a: &AbelianInvariants) -> AbelianInvariants {
    let d = a.factors();
    let mut parts = Vec::new();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            parts.push(d[i].gcd(&d[j]));
        }
    }
    AbelianInvariants::from_cyclic_orders(parts)
}

/// Whether `a` is isomorphic to a quotient of `m`: after right-aligning the
/// invariant factors, each factor of `a` divides the matching one of `m`.
pub fn is_abelian_quotient(a: &AbelianInvariants, m: &AbelianInvariants) -> bool {
    let (da, dm) = (a.factors(), m.factors());
    if da.len() > dm.len() {
        return false;
    }
    let off = dm.len() - da.len();
    da.iter().enumerate().all(|(i, &x)| dm[off + i] % x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::sync::Arc;

    fn group(text: &str) -> Arc<FiniteGroup> {
        let p = crate::parse_presentation(text).unwrap();
        let t = crate::enumerate(&p, &[], &crate::EnumerationLimits::default()).unwrap();
        Arc::new(FiniteGroup::regular_representation(&p, &t).unwrap())
    }

    fn inv(v: &[u64]) -> AbelianInvariants {
        AbelianInvariants::from_cyclic_orders(v.iter().copied())
    }

    #[test]
    fn normal_form() {
        assert_eq!(inv(&[2, 3]).factors(), &[6]);
        assert_eq!(inv(&[4, 2, 1]).factors(), &[2, 4]);
        assert_eq!(inv(&[6, 10]).factors(), &[2, 30]);
        assert_eq!(inv(&[1]).factors(), &[] as &[u64]);
        assert_eq!(inv(&[2, 2]).to_string(), "C2 x C2");
    }

    #[test]
    fn exterior_and_quotients() {
        assert!(exterior_square_abelian(&inv(&[4])).is_trivial());
        assert_eq!(exterior_square_abelian(&inv(&[2, 4])).factors(), &[2]);
        assert_eq!(
            exterior_square_abelian(&inv(&[3, 3, 3])).factors(),
            &[3, 3, 3]
        );
        assert_eq!(
            exterior_square_abelian(&inv(&[2, 4, 4])).factors(),
            &[2, 2, 4]
        );
        assert!(is_abelian_quotient(&inv(&[2]), &inv(&[2, 2])));
        assert!(!is_abelian_quotient(&inv(&[4]), &inv(&[2, 2])));
        assert!(!is_abelian_quotient(&inv(&[2, 2]), &inv(&[4])));
        assert!(is_abelian_quotient(&inv(&[4]), &inv(&[2, 4])));
        assert!(is_abelian_quotient(&inv(&[2, 2]), &inv(&[2, 4])));
        assert!(is_abelian_quotient(
            &AbelianInvariants::trivial(),
            &inv(&[3])
        ));
    }

    #[test]
    fn invariants_by_counting() {
        let g = group("gens a,b; rels a^4, b^2, [a,b]");
        assert_eq!(
            abelian_invariants(&g, &g.whole()).unwrap().factors(),
            &[2, 4]
        );
        let d8 = group("gens a,b; rels a^4, b^2, (a*b)^2");
        assert_eq!(abelianization(&d8).factors(), &[2, 2]);
        assert_eq!(abelian_invariants(&d8, &d8.whole()), Err(Error::NotAbelian));
    }

    #[test]
    fn h2_small_groups() {
        assert!(h2_bar(&group("gens a; rels a^4")).unwrap().is_trivial());
        assert_eq!(
            h2_bar(&group("gens a,b; rels a^2,b^2,[a,b]"))
                .unwrap()
                .factors(),
            &[2]
        );
        assert_eq!(
            h2_bar(&group("gens a,b; rels a^4,b^2,(a*b)^2"))
                .unwrap()
                .factors(),
            &[2]
        );
        assert!(h2_bar(&group("gens a,b; rels a^4, a^2*b^-2, a^b*a"))
            .unwrap()
            .is_trivial());
        assert_eq!(
            h2_bar(&group("gens a,b; rels a^3,b^3,[a,b]"))
                .unwrap()
                .factors(),
            &[3]
        );
        assert!(h2_bar(&group("gens a; rels a")).unwrap().is_trivial());
    }

    #[test]
    fn h2_bound() {
        let g = group("gens a; rels a^33");
        assert_eq!(
            h2_bar(&g),
            Err(Error::TooLarge {
                order: 33,
                bound: 32
            })
        );
    }
}
