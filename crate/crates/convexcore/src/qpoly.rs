use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::CoreError;

/// Compact rational polytope in ambient dimension ≤ 3 with cross-validated
/// V- and H-representations.
///
/// Dimensions 1 and 2 are exact; dimension 3 builds its hull in floating
/// point (collinearity tolerance 1e-9) and marks the result `numeric`, which
/// every downstream report propagates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPolytope {
    dim: usize,
    vertices: Vec<Vec<BigRational>>,
    halfspaces: Vec<(Vec<BigRational>, BigRational)>,
    numeric: bool,
}

pub(crate) fn qzero() -> BigRational {
    BigRational::zero()
}

/// Scale a rational vector to a primitive integer vector (same direction).
pub(crate) fn primitive_direction(v: &[BigRational]) -> Vec<BigRational> {
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|c| (c * BigRational::from(lcm.clone())).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    if gcd.is_zero() {
        return v.iter().map(|_| qzero()).collect();
    }
    ints.iter()
        .map(|i| BigRational::from(i / &gcd))
        .collect()
}

fn dedupe_points(points: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for p in points {
        if !out.contains(p) {
            out.push(p.clone());
        }
    }
    out
}

/// 2-D cross product of (b−a) and (c−a).
pub(crate) fn orient2d(a: &[BigRational], b: &[BigRational], c: &[BigRational]) -> BigRational {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

/// Counterclockwise convex hull of 2-D rational points (monotone chain).
/// Collinear points are dropped; output vertices are in ccw order.
pub(crate) fn hull2d(points: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut pts = dedupe_points(points);
    pts.sort();
    if pts.len() <= 2 {
        return pts;
    }
    let mut build = |iter: &mut dyn Iterator<Item = &Vec<BigRational>>| {
        let mut chain: Vec<Vec<BigRational>> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && !orient2d(&chain[chain.len() - 2], &chain[chain.len() - 1], p).is_positive()
            {
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain
    };
    let lower = build(&mut pts.iter());
    let upper = build(&mut pts.iter().rev());
    let mut hull = lower;
    hull.pop();
    hull.extend(upper.into_iter().take(pts.len()).skip(0));
    hull.pop();
    // all-collinear input collapses to the two extremes
    if hull.len() < 3 {
        return vec![pts.first().unwrap().clone(), pts.last().unwrap().clone()];
    }
    hull
}

impl QPolytope {
    /// Build from points: dedupe, hull, derive and cross-validate the H-rep.
    pub fn from_vertices(dim: usize, points: &[Vec<BigRational>]) -> Result<Self, CoreError> {
        if points.is_empty() {
            return Err(CoreError::DegenerateInput("no vertices".into()));
        }
        for p in points {
            if p.len() != dim {
                return Err(CoreError::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        match dim {
            1 => Self::build_1d(points),
            2 => Self::build_2d(points),
            3 => Self::build_3d_numeric(points),
            d => Err(CoreError::UnsupportedDimension(d)),
        }
    }

    fn build_1d(points: &[Vec<BigRational>]) -> Result<Self, CoreError> {
        let lo = points.iter().map(|p| &p[0]).min().unwrap().clone();
        let hi = points.iter().map(|p| &p[0]).max().unwrap().clone();
        let vertices = if lo == hi {
            vec![vec![lo.clone()]]
        } else {
            vec![vec![lo.clone()], vec![hi.clone()]]
        };
        let halfspaces = vec![
            (vec![BigRational::one()], hi),
            (vec![-BigRational::one()], -lo),
        ];
        Ok(QPolytope {
            dim: 1,
            vertices,
            halfspaces,
            numeric: false,
        })
    }

    fn build_2d(points: &[Vec<BigRational>]) -> Result<Self, CoreError> {
        let hull = hull2d(points);
        let mut halfspaces: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
        match hull.len() {
            1 => {
                let p = &hull[0];
                for (i, sign) in [(0usize, 1i64), (0, -1), (1, 1), (1, -1)] {
                    let mut n = vec![qzero(), qzero()];
                    n[i] = BigRational::from(BigInt::from(sign));
                    let off = &n[0] * &p[0] + &n[1] * &p[1];
                    halfspaces.push((n, off));
                }
            }
            2 => {
                let (a, b) = (&hull[0], &hull[1]);
                let d = primitive_direction(&[&b[0] - &a[0], &b[1] - &a[1]]);
                let n = vec![d[1].clone(), -d[0].clone()];
                let off = &n[0] * &a[0] + &n[1] * &a[1];
                halfspaces.push((n.clone(), off.clone()));
                halfspaces.push((vec![-n[0].clone(), -n[1].clone()], -off));
                // caps at both endpoints
                let cap = |p: &Vec<BigRational>, s: i64| {
                    let dir: Vec<BigRational> = d
                        .iter()
                        .map(|c| c * BigRational::from(BigInt::from(s)))
                        .collect();
                    let off = &dir[0] * &p[0] + &dir[1] * &p[1];
                    (dir, off)
                };
                halfspaces.push(cap(b, 1));
                halfspaces.push(cap(a, -1));
            }
            _ => {
                let k = hull.len();
                for i in 0..k {
                    let a = &hull[i];
                    let b = &hull[(i + 1) % k];
                    // ccw polygon: outward normal of edge a→b is (dy, −dx)
                    let n = primitive_direction(&[&b[1] - &a[1], &a[0] - &b[0]]);
                    let off = &n[0] * &a[0] + &n[1] * &a[1];
                    halfspaces.push((n, off));
                }
            }
        }
        let poly = QPolytope {
            dim: 2,
            vertices: hull,
            halfspaces,
            numeric: false,
        };
        poly.cross_validate()?;
        Ok(poly)
    }

    /// Dim-3 hull in floating point; H-rep facets found by brute force over
    /// point triples with 1e-9 side tolerance, then stored as exact rationals
    /// recovered from the floats. Marked numeric.
    fn build_3d_numeric(points: &[Vec<BigRational>]) -> Result<Self, CoreError> {
        let pts = dedupe_points(points);
        let f: Vec<[f64; 3]> = pts
            .iter()
            .map(|p| {
                [
                    exactlog::rational_to_f64(&p[0]),
                    exactlog::rational_to_f64(&p[1]),
                    exactlog::rational_to_f64(&p[2]),
                ]
            })
            .collect();
        let tol = 1e-9;
        let mut halfspaces: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
        let mut on_hull = vec![false; pts.len()];
        let n = pts.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let u = [f[j][0] - f[i][0], f[j][1] - f[i][1], f[j][2] - f[i][2]];
                    let v = [f[k][0] - f[i][0], f[k][1] - f[i][1], f[k][2] - f[i][2]];
                    let nrm = [
                        u[1] * v[2] - u[2] * v[1],
                        u[2] * v[0] - u[0] * v[2],
                        u[0] * v[1] - u[1] * v[0],
                    ];
                    let scale = (nrm[0].powi(2) + nrm[1].powi(2) + nrm[2].powi(2)).sqrt();
                    if scale < tol {
                        continue;
                    }
                    let nrm = [nrm[0] / scale, nrm[1] / scale, nrm[2] / scale];
                    let off = nrm[0] * f[i][0] + nrm[1] * f[i][1] + nrm[2] * f[i][2];
                    let mut above = false;
                    let mut below = false;
                    for q in &f {
                        let s = nrm[0] * q[0] + nrm[1] * q[1] + nrm[2] * q[2] - off;
                        if s > tol {
                            above = true;
                        } else if s < -tol {
                            below = true;
                        }
                    }
                    if above && below {
                        continue;
                    }
                    let (nrm, off) = if above { ([-nrm[0], -nrm[1], -nrm[2]], -off) } else { (nrm, off) };
                    for (qi, q) in f.iter().enumerate() {
                        let s = nrm[0] * q[0] + nrm[1] * q[1] + nrm[2] * q[2] - off;
                        if s.abs() <= tol {
                            on_hull[qi] = true;
                        }
                    }
                    let hs = (
                        vec![
                            exactlog::f64_to_rational(nrm[0]).unwrap(),
                            exactlog::f64_to_rational(nrm[1]).unwrap(),
                            exactlog::f64_to_rational(nrm[2]).unwrap(),
                        ],
                        exactlog::f64_to_rational(off + tol).unwrap(),
                    );
                    if !halfspaces.iter().any(|(hn, ho)| {
                        hn.iter().zip(&hs.0).all(|(a, b)| {
                            (exactlog::rational_to_f64(a) - exactlog::rational_to_f64(b)).abs() < 1e-6
                        }) && (exactlog::rational_to_f64(ho) - exactlog::rational_to_f64(&hs.1)).abs()
                            < 1e-6
                    }) {
                        halfspaces.push(hs);
                    }
                }
            }
        }
        if halfspaces.is_empty() {
            return Err(CoreError::DegenerateInput(
                "3-D point set is degenerate; lower-dimensional polytopes are exact-path only".into(),
            ));
        }
        let vertices = pts
            .into_iter()
            .enumerate()
            .filter(|(i, _)| on_hull[*i])
            .map(|(_, p)| p)
            .collect();
        Ok(QPolytope {
            dim: 3,
            vertices,
            halfspaces,
            numeric: true,
        })
    }

    /// V/H agreement: vertices re-enumerated from the H-rep must match.
    fn cross_validate(&self) -> Result<(), CoreError> {
        if self.dim != 2 {
            return Ok(());
        }
        let mut seen: Vec<Vec<BigRational>> = Vec::new();
        let m = self.halfspaces.len();
        for i in 0..m {
            for j in (i + 1)..m {
                let (a, ka) = &self.halfspaces[i];
                let (b, kb) = &self.halfspaces[j];
                let det = &a[0] * &b[1] - &a[1] * &b[0];
                if det.is_zero() {
                    continue;
                }
                let x = vec![
                    (ka * &b[1] - &a[1] * kb) / det.clone(),
                    (&a[0] * kb - ka * &b[0]) / det.clone(),
                ];
                if self.contains(&x) && !seen.contains(&x) {
                    seen.push(x);
                }
            }
        }
        let mut want = self.vertices.clone();
        want.sort();
        seen.sort();
        if want != seen {
            return Err(CoreError::DegenerateInput(
                "H-rep does not reproduce the vertex set".into(),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_numeric(&self) -> bool {
        self.numeric
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[(Vec<BigRational>, BigRational)] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.halfspaces.iter().all(|(n, c)| {
            let s: BigRational = n.iter().zip(x).map(|(a, b)| a * b).sum();
            s <= *c
        })
    }

    /// Indices of halfspaces tight at `x` (which must lie in the polytope).
    pub fn tight_at(&self, x: &[BigRational]) -> Result<Vec<usize>, CoreError> {
        if !self.contains(x) {
            return Err(CoreError::PointOutsideDomain);
        }
        Ok(self
            .halfspaces
            .iter()
            .enumerate()
            .filter(|(_, (n, c))| {
                let s: BigRational = n.iter().zip(x).map(|(a, b)| a * b).sum();
                s == **c
            })
            .map(|(i, _)| i)
            .collect())
    }

    pub fn vertex_average(&self) -> Vec<BigRational> {
        let k = BigRational::from(BigInt::from(self.vertices.len() as i64));
        (0..self.dim)
            .map(|d| {
                let s: BigRational = self.vertices.iter().map(|v| v[d].clone()).sum();
                s / k.clone()
            })
            .collect()
    }

    pub fn is_vertex_point(&self, x: &[BigRational]) -> bool {
        self.vertices.iter().any(|v| v.as_slice() == x)
    }

    /// Affine dimension of the vertex set.
    pub fn affine_dim(&self) -> usize {
        if self.vertices.len() <= 1 {
            return 0;
        }
        let v0 = &self.vertices[0];
        let diffs: Vec<Vec<BigRational>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        rank(&diffs)
    }

    /// Clip the line `⟨a,x⟩ = b` (2-D) against the polytope; returns the
    /// segment endpoints (equal for a touching point), or `None` if disjoint.
    pub fn clip_line(
        &self,
        a: &[BigRational],
        b: &BigRational,
    ) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
        assert_eq!(self.dim, 2);
        let norm2 = &a[0] * &a[0] + &a[1] * &a[1];
        if norm2.is_zero() {
            return None;
        }
        // base point: b·a/|a|², direction: rot90(a)
        let x0 = vec![b * &a[0] / norm2.clone(), b * &a[1] / norm2];
        let d = vec![-a[1].clone(), a[0].clone()];
        let mut t_lo: Option<BigRational> = None;
        let mut t_hi: Option<BigRational> = None;
        for (n, c) in &self.halfspaces {
            let nd = &n[0] * &d[0] + &n[1] * &d[1];
            let rhs = c - (&n[0] * &x0[0] + &n[1] * &x0[1]);
            if nd.is_zero() {
                if rhs.is_negative() {
                    return None;
                }
                continue;
            }
            let t = &rhs / &nd;
            if nd.is_positive() {
                if t_hi.as_ref().is_none_or(|h| t < *h) {
                    t_hi = Some(t);
                }
            } else if t_lo.as_ref().is_none_or(|l| t > *l) {
                t_lo = Some(t);
            }
        }
        let (lo, hi) = (t_lo?, t_hi?);
        if lo > hi {
            return None;
        }
        let at = |t: &BigRational| vec![&x0[0] + t * &d[0], &x0[1] + t * &d[1]];
        Some((at(&lo), at(&hi)))
    }

    /// Largest r with the ℓ¹-ball of radius r around `center` inside the
    /// polytope: min over halfspaces of slack / ‖normal‖_∞.
    pub fn inscribed_ball_radius_l1(&self, center: &[BigRational]) -> BigRational {
        self.halfspaces
            .iter()
            .map(|(n, c)| {
                let slack = c - n.iter().zip(center).map(|(a, b)| a * b).sum::<BigRational>();
                let ninf = n.iter().map(|a| a.abs()).max().unwrap();
                slack / ninf
            })
            .min()
            .unwrap()
    }

    /// Set equality (canonical irredundant vertex sets).
    pub fn set_eq(&self, other: &QPolytope) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let mut a = self.vertices.clone();
        let mut b = other.vertices.clone();
        a.sort();
        b.sort();
        a == b
    }
}

/// Rank of a small rational matrix (rows).
pub(crate) fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        if let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) {
            m.swap(r, pivot);
            let pv = m[r][c].clone();
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let factor = &m[i][c] / &pv;
                    for j in 0..cols {
                        let sub = &factor * &m[r][j];
                        m[i][j] = &m[i][j] - &sub;
                    }
                }
            }
            r += 1;
        }
    }
    r
}

/// Solve a 2×2 rational system A·x = rhs; `None` when singular.
pub(crate) fn solve2(
    a: &[Vec<BigRational>; 2],
    rhs: &[BigRational; 2],
) -> Option<Vec<BigRational>> {
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    if det.is_zero() {
        return None;
    }
    Some(vec![
        (&rhs[0] * &a[1][1] - &a[0][1] * &rhs[1]) / det.clone(),
        (&a[0][0] * &rhs[1] - &rhs[0] * &a[1][0]) / det,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactlog::{qi, qr};

    fn pt(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn interval_polytope() {
        let p = QPolytope::from_vertices(1, &[pt(&[0]), pt(&[1]), pt(&[0])]).unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert!(p.contains(&[qr(1, 2)]));
        assert!(!p.contains(&[qi(2)]));
        assert_eq!(p.vertex_average(), vec![qr(1, 2)]);
    }

    #[test]
    fn square_hull_and_tightness() {
        let p = QPolytope::from_vertices(
            2,
            &[pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1]), pt(&[0, 1]), pt(&[0, 0])],
        )
        .unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.halfspaces().len(), 4);
        assert!(p.contains(&pt(&[0, 0])));
        assert!(p.contains(&[qr(1, 2), qr(1, 3)]));
        assert_eq!(p.tight_at(&pt(&[0, 0])).unwrap().len(), 2);
        assert_eq!(p.tight_at(&[qr(1, 2), qi(0)]).unwrap().len(), 1);
        assert!(p.tight_at(&[qr(1, 2), qr(1, 2)]).unwrap().is_empty());
        assert!(p.is_vertex_point(&pt(&[1, 1])));
        assert!(!p.is_vertex_point(&[qr(1, 2), qi(0)]));
    }

    #[test]
    fn interior_points_are_dropped() {
        let p = QPolytope::from_vertices(
            2,
            &[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2]), pt(&[1, 1]), pt(&[0, 1])],
        )
        .unwrap();
        // (1,1) lies on the hypotenuse, (0,1) on an edge: both non-vertices
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn segment_in_plane() {
        let p = QPolytope::from_vertices(2, &[pt(&[0, 0]), pt(&[2, 2]), pt(&[1, 1])]).unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert!(p.contains(&[qr(1, 2), qr(1, 2)]));
        assert!(!p.contains(&[qr(1, 2), qr(1, 3)]));
        assert_eq!(p.affine_dim(), 1);
    }

    #[test]
    fn single_point_in_plane() {
        let p = QPolytope::from_vertices(2, &[pt(&[3, 4])]).unwrap();
        assert!(p.contains(&pt(&[3, 4])));
        assert!(!p.contains(&pt(&[3, 5])));
        assert_eq!(p.affine_dim(), 0);
    }

    #[test]
    fn clip_line_against_triangle() {
        let p =
            QPolytope::from_vertices(2, &[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])]).unwrap();
        // x = 1 cuts the triangle between (1,0) and (1,1)
        let (a, b) = p.clip_line(&[qi(1), qi(0)], &qi(1)).unwrap();
        let mut ends = [a, b];
        ends.sort();
        assert_eq!(ends[0], pt(&[1, 0]));
        assert_eq!(ends[1], pt(&[1, 1]));
        // x = 3 misses
        assert!(p.clip_line(&[qi(1), qi(0)], &qi(3)).is_none());
        // x + y = 2 touches the hypotenuse (whole edge)
        let (a, b) = p.clip_line(&[qi(1), qi(1)], &qi(2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn inscribed_radius_of_simplex() {
        let p =
            QPolytope::from_vertices(2, &[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        let c = p.vertex_average();
        let r = p.inscribed_ball_radius_l1(&c);
        assert!(r > qzero());
        // ℓ¹ ball of radius r must fit: r ≤ distance to x+y≤1 with ‖(1,1)‖∞=1
        assert!(r <= qi(1) - (&c[0] + &c[1]));
    }

    #[test]
    fn numeric_3d_tetrahedron() {
        let p = QPolytope::from_vertices(
            3,
            &[pt(&[0, 0, 0]), pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])],
        )
        .unwrap();
        assert!(p.is_numeric());
        assert_eq!(p.vertices().len(), 4);
        assert!(p.contains(&[qr(1, 10), qr(1, 10), qr(1, 10)]));
    }

    #[test]
    fn rank_and_solve() {
        assert_eq!(rank(&[pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])]), 2);
        assert_eq!(rank(&[pt(&[2, 4]), pt(&[1, 2])]), 1);
        let x = solve2(
            &[pt(&[2, 1]), pt(&[1, -1])],
            &[qi(3), qi(0)],
        )
        .unwrap();
        assert_eq!(x, vec![qi(1), qi(1)]);
        assert!(solve2(&[pt(&[1, 2]), pt(&[2, 4])], &[qi(1), qi(2)]).is_none());
    }
}
