//! Evaluation codes of a polygon over a finite field.
//!
//! A polygon in the box `[0, q−2]²` (after translation) defines, for each of
//! its lattice points `u`, the vector of monomial values `ε^(i·u₁ + j·u₂)`
//! over all torus points `(ε^i, ε^j)`. These vectors are the rows of the
//! generator matrix; the code has block length `n = (q−1)²` and dimension
//! `k = |P ∩ M|`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::gf::Field;
use crate::point::Point;
use crate::polygon::Polygon;
use crate::unimodular::UnimodularMap;

/// A `k × n` generator matrix over `F_q`, with its row and column labels.
///
/// Columns are indexed by torus exponent pairs `(i, j)`, `0 ≤ i, j ≤ q−2`,
/// in lexicographic order with `i` outer. Rows are indexed by the lattice
/// points of the (corner-translated) polygon in lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorMatrix {
    q: u16,
    n: usize,
    k: usize,
    row_points: Vec<Point>,
    data: Vec<u8>,
}

impl GeneratorMatrix {
    /// Assemble a matrix from raw row-major entries (codes in `[0, q)`).
    /// Row labels are empty; used for synthetic codes and dump ingestion.
    pub fn from_parts(q: u16, n: usize, k: usize, data: Vec<u8>) -> GeneratorMatrix {
        assert_eq!(data.len(), k * n);
        debug_assert!(data.iter().all(|&e| (e as u16) < q));
        GeneratorMatrix { q, n, k, row_points: Vec::new(), data }
    }

    #[inline]
    pub fn q(&self) -> u16 {
        self.q
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Lattice points labelling the rows.
    pub fn row_points(&self) -> &[Point] {
        &self.row_points
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.data.chunks_exact(self.n)
    }

    /// Codeword of a full message vector (length `k`).
    pub fn encode(&self, f: &Field, message: &[u8]) -> Vec<u8> {
        debug_assert_eq!(message.len(), self.k);
        let mut out = vec![0u8; self.n];
        for (i, &c) in message.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, g));
            }
        }
        out
    }
}

fn matrix_from_points(points: &[Point], f: &Field) -> GeneratorMatrix {
    let q = f.q();
    let qm1 = (q - 1) as i64;
    let n = (qm1 * qm1) as usize;
    let k = points.len();
    let mut data = vec![0u8; k * n];
    for (r, u) in points.iter().enumerate() {
        let row = &mut data[r * n..(r + 1) * n];
        let mut idx = 0;
        for i in 0..qm1 {
            let base = (i * u.x).rem_euclid(qm1);
            for j in 0..qm1 {
                row[idx] = f.epsilon_pow(base + j * u.y);
                idx += 1;
            }
        }
    }
    GeneratorMatrix { q, n, k, row_points: points.to_vec(), data }
}

/// Generator matrix of the code of `p` over `f`.
///
/// The polygon is first translated so its bounding box corner is the origin;
/// this changes the code only up to monomial equivalence and makes the output
/// deterministic. Fails with `BoxTooBig` when the bounding square exceeds
/// `q − 2`.
pub fn generator_matrix(p: &Polygon, f: &Field) -> Result<GeneratorMatrix, Error> {
    let size = p.bounding_square_size();
    if size as i64 > f.q() as i64 - 2 {
        return Err(Error::BoxTooBig { box_size: size, q: f.q() });
    }
    let points = p.to_corner().lattice_points();
    Ok(matrix_from_points(&points, f))
}

/// Row submatrix on a chosen subset of the polygon's lattice points.
///
/// The subset is given in the corner-translated coordinates and must be
/// nonempty and contained in `P ∩ M`.
pub fn generalized_generator_matrix(
    p: &Polygon,
    f: &Field,
    subset: &[Point],
) -> Result<GeneratorMatrix, Error> {
    let size = p.bounding_square_size();
    if size as i64 > f.q() as i64 - 2 {
        return Err(Error::BoxTooBig { box_size: size, q: f.q() });
    }
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let corner = p.to_corner();
    for &s in subset {
        if !corner.contains(s) {
            return Err(Error::NotInPolygon { x: s.x, y: s.y });
        }
    }
    let mut points = subset.to_vec();
    points.sort_unstable();
    points.dedup();
    Ok(matrix_from_points(&points, f))
}

/// Rank over `F_q`, by Gaussian elimination on a copy.
pub fn rank(g: &GeneratorMatrix, f: &Field) -> usize {
    let mut m: Vec<Vec<u8>> = g.rows().map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for col in 0..g.n() {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = f.inv(m[rank][col]).expect("pivot is nonzero");
        for x in m[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let c = m[r][col];
                for j in 0..g.n() {
                    let s = f.mul(c, m[rank][j]);
                    m[r][j] = f.sub(m[r][j], s);
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Full weight enumerator: `out[w]` = number of codewords of weight `w`.
///
/// Exhaustive over `q^k` messages; callers must keep `k` small.
pub fn weight_enumerator(g: &GeneratorMatrix, f: &Field) -> Vec<u64> {
    let mut counts = vec![0u64; g.n() + 1];
    counts[0] = 1; // zero codeword
    let each = |wt: u32, mult: u64, counts: &mut Vec<u64>| counts[wt as usize] += mult;
    // Scalar classes: each nonzero codeword class has q − 1 members of equal
    // weight, so enumerate with the first nonzero coefficient fixed to 1.
    crate::dist::for_each_low_support_weight(g, f, g.k() as u32, &mut |wt, _, _| {
        each(wt, (f.q() - 1) as u64, &mut counts);
        true
    });
    counts
}

/// Weight multiset over codewords supported on at most `r` rows, as a sorted
/// `(weight, count)` list. Equal for monomially equivalent codes, and far
/// cheaper than the full enumerator.
pub fn low_support_weight_profile(g: &GeneratorMatrix, f: &Field, r: u32) -> Vec<(u32, u64)> {
    let mut counts = vec![0u64; g.n() + 1];
    crate::dist::for_each_low_support_weight(g, f, r, &mut |wt, _, _| {
        counts[wt as usize] += 1;
        true
    });
    counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(w, c)| (w as u32, c))
        .collect()
}

/// Decide monomial equivalence of the codes of `p` and its image under `map`.
///
/// Compares `(n, k)` and then weight data: the full weight enumerator when
/// the message space is at most `budget`, otherwise the weight multiset of
/// codewords supported on at most 3 rows.
pub fn monomial_equivalence_check(
    p: &Polygon,
    map: &UnimodularMap,
    f: &Field,
    budget: u64,
) -> Result<bool, Error> {
    let g1 = generator_matrix(p, f)?;
    let g2 = generator_matrix(&map.apply(p), f)?;
    if g1.n() != g2.n() || g1.k() != g2.k() {
        return Ok(false);
    }
    let messages = (f.q() as u128).checked_pow(g1.k() as u32);
    if messages.is_some_and(|m| m <= budget as u128) {
        Ok(weight_enumerator(&g1, f) == weight_enumerator(&g2, f))
    } else {
        Ok(low_support_weight_profile(&g1, f, 3) == low_support_weight_profile(&g2, f, 3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::box_polygon;

    fn poly(list: &[(i64, i64)]) -> Polygon {
        let pts: Vec<Point> = list.iter().map(|&(x, y)| Point::new(x, y)).collect();
        Polygon::hull(&pts).unwrap()
    }

    #[test]
    fn unit_square_over_f3() {
        let f = Field::new(3).unwrap();
        let g = generator_matrix(&box_polygon(1), &f).unwrap();
        assert_eq!((g.n(), g.k()), (4, 4));
        // Rows for (0,0), (0,1), (1,0), (1,1) over columns (i,j) in lex order.
        assert_eq!(g.row_points(), &[
            Point::new(0, 0), Point::new(0, 1), Point::new(1, 0), Point::new(1, 1),
        ]);
        assert_eq!(g.row(0), &[1, 1, 1, 1]);
        assert_eq!(g.row(2), &[1, 1, 2, 2]);
        assert_eq!(g.row(1), &[1, 2, 1, 2]);
        assert_eq!(g.row(3), &[1, 2, 2, 1]);
        assert_eq!(rank(&g, &f), 4);
    }

    #[test]
    fn all_ones_row_for_origin() {
        let f = Field::new(7).unwrap();
        let p = poly(&[(0, 0), (3, 1), (1, 4)]);
        let g = generator_matrix(&p, &f).unwrap();
        assert_eq!(g.n(), 36);
        let origin_row = g.row_points().iter().position(|&u| u == Point::ORIGIN).unwrap();
        assert!(g.row(origin_row).iter().all(|&e| e == 1));
    }

    #[test]
    fn box_gate() {
        let f = Field::new(3).unwrap();
        assert_eq!(
            generator_matrix(&box_polygon(2), &f),
            Err(Error::BoxTooBig { box_size: 2, q: 3 })
        );
        assert!(generator_matrix(&box_polygon(1), &f).is_ok());
    }

    #[test]
    fn subset_rows() {
        let f = Field::new(3).unwrap();
        let square = box_polygon(1);
        let full = generator_matrix(&square, &f).unwrap();
        let sub = generalized_generator_matrix(
            &square,
            &f,
            &[Point::new(0, 0), Point::new(1, 1)],
        )
        .unwrap();
        assert_eq!(sub.k(), 2);
        assert_eq!(sub.row(0), full.row(0));
        assert_eq!(sub.row(1), full.row(3));
        assert_eq!(sub.row(1), &[1, 2, 2, 1]);
        // Whole-point-set subset reproduces the full matrix.
        let all = generalized_generator_matrix(&square, &f, &square.lattice_points()).unwrap();
        assert_eq!(all.rows().collect::<Vec<_>>(), full.rows().collect::<Vec<_>>());
        assert_eq!(
            generalized_generator_matrix(&square, &f, &[]),
            Err(Error::EmptySubset)
        );
        assert_eq!(
            generalized_generator_matrix(&square, &f, &[Point::new(5, 5)]),
            Err(Error::NotInPolygon { x: 5, y: 5 })
        );
    }

    #[test]
    fn character_multiplicativity() {
        // Row(u) ∘ Row(u') = Row(u + u') entrywise whenever u + u' stays inside.
        let f = Field::new(5).unwrap();
        let p = poly(&[(0, 0), (3, 0), (0, 3)]);
        let g = generator_matrix(&p, &f).unwrap();
        let pos = |pt: Point| g.row_points().iter().position(|&u| u == pt).unwrap();
        let (a, b, c) = (pos(Point::new(1, 0)), pos(Point::new(0, 2)), pos(Point::new(1, 2)));
        for j in 0..g.n() {
            assert_eq!(f.mul(g.entry(a, j), g.entry(b, j)), g.entry(c, j));
        }
    }

    #[test]
    fn rank_equals_point_count() {
        let f = Field::new(5).unwrap();
        for p in [
            box_polygon(3),
            poly(&[(0, 0), (3, 0), (0, 3)]),
            poly(&[(0, 0), (2, 1), (1, 3)]),
        ] {
            let g = generator_matrix(&p, &f).unwrap();
            assert_eq!(rank(&g, &f), p.lattice_point_count() as usize);
        }
    }

    #[test]
    fn monomial_equivalence_small() {
        let f = Field::new(5).unwrap();
        let tri = poly(&[(0, 0), (1, 0), (0, 1)]);
        let shear = UnimodularMap::linear(1, 1, 0, 1).unwrap();
        assert!(monomial_equivalence_check(&tri, &shear, &f, 1 << 20).unwrap());
        let translation = UnimodularMap::translation(Point::new(1, 1));
        assert!(monomial_equivalence_check(&tri, &translation, &f, 1 << 20).unwrap());
    }
}
