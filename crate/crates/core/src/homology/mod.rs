//! Cellular cohomology over the integers, induced endomorphisms and their
//! direct limits.

mod hull;
mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::apcomplex::{CWComplex, ChainMaps};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub use hull::{hull_cohomology, DegreeReport, HullCohomologyReport};
pub use snf::{smith_normal_form, SnfResult};

/// A finitely generated abelian group `Z^rank + Z/d1 + ... + Z/dk`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub rank: usize,
    #[serde(serialize_with = "crate::matrix::serialize_ints")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Self {
        AbelianGroup { rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// One cohomology group with an adapted basis.
///
/// Generators are cocycles, torsion generators first. `coords` sends a
/// cocycle to its coordinates in that basis; torsion coordinates are
/// meaningful modulo the corresponding order.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub group: AbelianGroup,
    pub generators: IntMatrix,
    pub coords: IntMatrix,
}

impl CohomologyGroup {
    pub fn len(&self) -> usize {
        self.generators.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn torsion_count(&self) -> usize {
        self.group.torsion.len()
    }

    /// Reduces torsion coordinates of each column into `0..d`.
    fn reduce(&self, mut m: IntMatrix) -> IntMatrix {
        for (i, d) in self.group.torsion.iter().enumerate() {
            for j in 0..m.cols() {
                m[(i, j)] = m[(i, j)].mod_floor(d);
            }
        }
        m
    }
}

/// The coboundary `C^k -> C^(k+1)` of a complex, for k in 0..=2.
pub fn coboundary(c: &CWComplex, k: usize) -> IntMatrix {
    match k {
        0 => c.boundary1.transpose(),
        1 => c.boundary2.transpose(),
        _ => IntMatrix::zeros(0, c.cell_count(k)),
    }
}

fn cohomology_group(c: &CWComplex, k: usize) -> CohomologyGroup {
    let n = c.cell_count(k);
    let delta = coboundary(c, k);
    let prev = if k == 0 {
        IntMatrix::zeros(n, 0)
    } else {
        coboundary(c, k - 1)
    };
    let s = smith_normal_form(&delta);
    let r = s.rank();
    let kernel = s.v.col_range(r, n);
    let left_inv = s.v_inv.row_range(r, n);
    let image = &left_inv * &prev;
    let t = smith_normal_form(&image);
    let basis = &kernel * &t.u_inv;
    let coords = &t.u * &left_inv;
    let m = n - r;
    let mut keep = Vec::new();
    let mut torsion = Vec::new();
    for (i, d) in t.invariants.iter().enumerate() {
        if !d.is_one() {
            keep.push(i);
            torsion.push(d.clone());
        }
    }
    keep.extend(t.rank()..m);
    let all_rows: Vec<usize> = (0..n).collect();
    let all_cols: Vec<usize> = (0..n).collect();
    CohomologyGroup {
        degree: k,
        group: AbelianGroup::new(m - t.rank(), torsion),
        generators: basis.select(&all_rows, &keep),
        coords: coords.select(&keep, &all_cols),
    }
}

/// `H^0`, `H^1`, `H^2` of the cochain complex dual to `c`.
pub fn cohomology(c: &CWComplex) -> [CohomologyGroup; 3] {
    [0, 1, 2].map(|k| cohomology_group(c, k))
}

/// The matrix of the map induced on `h` by the cochain map `f`, in the
/// adapted basis of `h`.
pub fn induced_map(c: &CWComplex, h: &CohomologyGroup, f: &IntMatrix) -> Result<IntMatrix> {
    let k = h.degree;
    let n = c.cell_count(k);
    if f.rows() != n || f.cols() != n {
        return Err(Error::Derivation(format!(
            "cochain map on degree {k} is {}x{}, expected {n}x{n}",
            f.rows(),
            f.cols()
        )));
    }
    let image = f * &h.generators;
    if !(&coboundary(c, k) * &image).is_zero() {
        return Err(Error::Derivation(format!(
            "degree {k}: the map does not send cocycles to cocycles"
        )));
    }
    let m = h.reduce(&h.coords * &image);
    let t = h.torsion_count();
    for i in t..m.rows() {
        for j in 0..t {
            if !m[(i, j)].is_zero() {
                return Err(Error::Derivation(format!(
                    "degree {k}: torsion generator {j} maps to a non-torsion class"
                )));
            }
        }
    }
    Ok(m)
}

/// Maps induced on `H^0`, `H^1`, `H^2` by the cochain maps dual to `m`.
pub fn induced_endomorphisms(
    c: &CWComplex,
    h: &[CohomologyGroup; 3],
    m: &ChainMaps,
) -> Result<[IntMatrix; 3]> {
    Ok([
        induced_map(c, &h[0], &m.s0)?,
        induced_map(c, &h[1], &m.s1)?,
        induced_map(c, &h[2], &m.s2)?,
    ])
}

/// Matrix product followed by torsion reduction in the basis of `h`.
pub fn compose_induced(h: &CohomologyGroup, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    h.reduce(a * b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralReport {
    /// Power of the free part at which the reports are taken.
    pub power: u32,
    /// Smith invariants of that power of the free part.
    #[serde(serialize_with = "crate::matrix::serialize_ints")]
    pub free_power_invariants: Vec<BigInt>,
    /// Characteristic polynomial of the free part with factors of `x`
    /// removed, lowest degree first.
    #[serde(serialize_with = "crate::matrix::serialize_ints")]
    pub reduced_charpoly: Vec<BigInt>,
    /// Whether the free part of the limit is a lattice `Z^r`.
    pub free_limit_is_lattice: bool,
    /// Primes inverted in the free part of the limit.
    pub denominator_primes: Vec<u64>,
    /// A factor of the reduced constant term left after trial division.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unfactored: Option<String>,
    /// Invariants of the eventual image of the torsion subgroup.
    #[serde(serialize_with = "crate::matrix::serialize_ints")]
    pub torsion_limit: Vec<BigInt>,
    pub torsion_stabilization_index: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectLimitResult {
    pub rational_dim: usize,
    pub stabilization_index: u32,
    pub integral: IntegralReport,
    pub description: String,
}

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

fn prime_factors(n: &BigInt) -> (Vec<u64>, Option<BigInt>) {
    let mut n = n.abs();
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_BOUND && BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        if n.is_multiple_of(&bp) {
            primes.push(p);
            while n.is_multiple_of(&bp) {
                n /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        return (primes, None);
    }
    if BigInt::from(p) * BigInt::from(p) > n {
        primes.push(
            n.to_u64()
                .expect("remaining prime below the trial bound squared"),
        );
        primes.sort_unstable();
        (primes, None)
    } else {
        (primes, Some(n))
    }
}

/// Invariants of the group generated by the columns of `m` in `Z^t / D`,
/// where `D = diag(orders)`.
fn image_in_torsion(m: &IntMatrix, orders: &[BigInt]) -> Vec<BigInt> {
    let t = orders.len();
    if t == 0 {
        return Vec::new();
    }
    let d = IntMatrix::diagonal(orders);
    let s = smith_normal_form(&m.hstack(&d));
    // The columns of u_inv * diag(e) span the image lattice; express the
    // lattice of `d` in that basis.
    let ud = &s.u * &d;
    let c = IntMatrix::from_fn(t, t, |i, j| {
        let (q, r) = ud[(i, j)].div_rem(&s.invariants[i]);
        debug_assert!(r.is_zero());
        q
    });
    smith_normal_form(&c)
        .invariants
        .into_iter()
        .filter(|x| !x.is_one())
        .collect()
}

fn order(invariants: &[BigInt]) -> BigInt {
    invariants.iter().product()
}

/// Direct limit of `group` under the endomorphism `m`, given in a basis with
/// the torsion generators first.
///
/// ```
/// use tilespace::homology::{direct_limit, AbelianGroup};
/// use tilespace::matrix::IntMatrix;
///
/// let r = direct_limit(&AbelianGroup::free(1), &IntMatrix::from_rows(&[vec![2]]));
/// assert_eq!(r.rational_dim, 1);
/// assert!(!r.integral.free_limit_is_lattice);
/// assert_eq!(r.integral.denominator_primes, vec![2]);
/// ```
pub fn direct_limit(group: &AbelianGroup, m: &IntMatrix) -> DirectLimitResult {
    let t = group.torsion.len();
    let g = t + group.rank;
    assert!(
        m.rows() == g && m.cols() == g,
        "endomorphism does not match the group"
    );
    let free = m.select(&(t..g).collect::<Vec<_>>(), &(t..g).collect::<Vec<_>>());
    let tors = m.select(&(0..t).collect::<Vec<_>>(), &(0..t).collect::<Vec<_>>());

    let mut n = 1u32;
    let mut power = free.clone();
    let mut next = &power * &free;
    while power.rank() != next.rank() {
        n += 1;
        power = next;
        next = &power * &free;
    }
    let rational_dim = power.rank();

    let cp = free.charpoly();
    let lead_zeros = cp.iter().take_while(|c| c.is_zero()).count();
    let reduced: Vec<BigInt> = cp[lead_zeros..].to_vec();
    let constant = reduced[0].clone();
    let free_limit_is_lattice = constant.abs().is_one();
    let (denominator_primes, unfactored) = prime_factors(&constant);

    let mut tn = 1u32;
    let mut tpow = tors.clone();
    let mut image = image_in_torsion(&tpow, &group.torsion);
    loop {
        let npow = &tpow * &tors;
        let nimage = image_in_torsion(&npow, &group.torsion);
        if order(&nimage) == order(&image) {
            break;
        }
        tn += 1;
        tpow = npow;
        image = nimage;
    }

    let free_text = if rational_dim == 0 {
        "0".to_string()
    } else if free_limit_is_lattice {
        AbelianGroup::free(rational_dim).to_string()
    } else {
        let inv: Vec<String> = denominator_primes.iter().map(u64::to_string).collect();
        let mut s = format!(
            "rank {rational_dim} subgroup of Q^{rational_dim} with denominators at {{{}}}",
            inv.join(", ")
        );
        if let Some(u) = &unfactored {
            s.push_str(&format!(" and the factors of {u}"));
        }
        s
    };
    let tors_text = AbelianGroup::new(0, image.clone()).to_string();
    let description = if image.is_empty() {
        free_text
    } else {
        format!("free part: {free_text}; torsion: {tors_text}")
    };

    DirectLimitResult {
        rational_dim,
        stabilization_index: n,
        integral: IntegralReport {
            power: n,
            free_power_invariants: smith_normal_form(&power).invariants,
            reduced_charpoly: reduced,
            free_limit_is_lattice,
            denominator_primes,
            unfactored: unfactored.map(|u| u.to_string()),
            torsion_limit: image,
            torsion_stabilization_index: tn,
        },
        description,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    pub(crate) fn circle() -> CWComplex {
        CWComplex::new(IntMatrix::from_rows(&[vec![0]]), IntMatrix::zeros(1, 0)).unwrap()
    }

    fn two_triangles() -> CWComplex {
        let mut b1 = IntMatrix::zeros(6, 6);
        for tri in 0..2 {
            for k in 0..3 {
                let e = 3 * tri + k;
                b1[(3 * tri + k, e)] = BigInt::from(-1);
                b1[(3 * tri + (k + 1) % 3, e)] = BigInt::from(1);
            }
        }
        CWComplex::new(b1, IntMatrix::zeros(6, 0)).unwrap()
    }

    fn sphere() -> CWComplex {
        CWComplex::new(
            IntMatrix::from_rows(&[vec![0]]),
            IntMatrix::from_rows(&[vec![1, 1]]),
        )
        .unwrap()
    }

    fn projective_plane() -> CWComplex {
        CWComplex::new(
            IntMatrix::from_rows(&[vec![0]]),
            IntMatrix::from_rows(&[vec![2]]),
        )
        .unwrap()
    }

    fn groups(c: &CWComplex) -> Vec<String> {
        cohomology(c).iter().map(|h| h.group.to_string()).collect()
    }

    #[test]
    fn fixtures() {
        assert_eq!(groups(&circle()), ["Z", "Z", "0"]);
        assert_eq!(groups(&two_triangles()), ["Z^2", "Z^2", "0"]);
        assert_eq!(groups(&sphere()), ["Z", "0", "Z"]);
        assert_eq!(groups(&projective_plane()), ["Z", "0", "Z/2"]);
        let empty = CWComplex::new(IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0)).unwrap();
        assert_eq!(groups(&empty), ["0", "0", "0"]);
    }

    #[test]
    fn generators_are_cocycles_and_coords_invert() {
        for c in [circle(), two_triangles(), sphere(), projective_plane()] {
            for h in cohomology(&c) {
                assert!((&coboundary(&c, h.degree) * &h.generators).is_zero());
                assert!((&h.coords * &h.generators).is_identity());
            }
        }
    }

    #[test]
    fn identity_maps_induce_identities() {
        for c in [circle(), two_triangles(), sphere(), projective_plane()] {
            let h = cohomology(&c);
            let id = ChainMaps::identity(&c);
            for m in induced_endomorphisms(&c, &h, &id).unwrap() {
                assert!(m.is_identity());
            }
        }
    }

    #[test]
    fn degree_two_map_on_projective_plane() {
        let c = projective_plane();
        let h = cohomology(&c);
        let f = IntMatrix::from_rows(&[vec![3]]);
        let m = induced_map(&c, &h[2], &f).unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[vec![1]]));
        let r = direct_limit(&h[2].group, &m);
        assert_eq!(r.rational_dim, 0);
        assert_eq!(r.integral.torsion_limit, z(&[2]));
        let r = direct_limit(&h[2].group, &IntMatrix::from_rows(&[vec![0]]));
        assert!(r.integral.torsion_limit.is_empty());
    }

    #[test]
    fn direct_limit_examples() {
        let r = direct_limit(&AbelianGroup::free(2), &IntMatrix::identity(2));
        assert_eq!((r.rational_dim, r.stabilization_index), (2, 1));
        assert!(r.integral.free_limit_is_lattice);
        assert_eq!(r.description, "Z^2");

        let r = direct_limit(&AbelianGroup::free(1), &IntMatrix::from_rows(&[vec![0]]));
        assert_eq!(r.rational_dim, 0);
        assert_eq!(r.description, "0");

        let nil = IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        let r = direct_limit(&AbelianGroup::free(3), &nil);
        assert_eq!((r.rational_dim, r.stabilization_index), (0, 3));

        let r = direct_limit(&AbelianGroup::free(1), &IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(r.rational_dim, 1);
        assert!(!r.integral.free_limit_is_lattice);
        assert_eq!(r.integral.denominator_primes, vec![2]);
    }

    #[test]
    fn doubling_limit_has_every_power_of_two_denominator() {
        // Stage-k element 1 of Z -2-> Z -2-> ... is 1/2^k. It never comes
        // from stage 0, so the limit is not generated by stage 0.
        for k in 0..=8u32 {
            let scale = 1i64 << k;
            let hit = (-512i64..=512).any(|y| y * scale == 1);
            assert_eq!(hit, k == 0);
        }
        let r = direct_limit(&AbelianGroup::free(1), &IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(r.integral.denominator_primes, vec![2]);
    }

    #[test]
    fn prime_factorization() {
        assert_eq!(prime_factors(&BigInt::from(360)), (vec![2, 3, 5], None));
        assert_eq!(prime_factors(&BigInt::from(-97)), (vec![97], None));
        assert_eq!(prime_factors(&BigInt::from(1)), (vec![], None));
    }
}
