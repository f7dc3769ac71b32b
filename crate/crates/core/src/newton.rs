//! Newton polyhedra of mixed polynomials: faces for a weight vector, the
//! planar Newton boundary, convenience, and the dual Newton diagram.

use crate::error::{precondition, Result};
use crate::linalg;
use crate::mixedpoly::{MixedPolynomial, Positivity, WeightVector};

/// A lattice point `nu + mu` together with the terms that map to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPoint {
    pub point: Vec<i64>,
    pub term_indices: Vec<usize>,
}

impl SupportPoint {
    pub fn is_simple(&self) -> bool {
        self.term_indices.len() == 1
    }
}

/// The face `Δ(P; f)`: where `rdeg_P` attains its minimum `d(P; f)` on the
/// support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    /// Every support point on the face, sorted.
    pub points: Vec<SupportPoint>,
    pub weight: WeightVector,
    pub d_value: i64,
    /// `(nu, mu)` of the terms on the face.
    pub mixed_face: Vec<(Vec<i64>, Vec<i64>)>,
}

impl Face {
    /// Extreme points for faces of dimension at most one; all points otherwise.
    pub fn vertices(&self) -> Vec<&SupportPoint> {
        match self.dim {
            0 => vec![&self.points[0]],
            1 => vec![&self.points[0], self.points.last().unwrap()],
            _ => self.points.iter().collect(),
        }
    }
}

/// Group the terms of `f` by support point (sorted by point).
pub fn support(f: &MixedPolynomial) -> Vec<SupportPoint> {
    let mut out: Vec<SupportPoint> = Vec::new();
    let mut pts: Vec<(Vec<i64>, usize)> =
        f.terms().iter().enumerate().map(|(i, t)| (t.point(), i)).collect();
    pts.sort();
    for (p, i) in pts {
        match out.last_mut() {
            Some(sp) if sp.point == p => sp.term_indices.push(i),
            _ => out.push(SupportPoint { point: p, term_indices: vec![i] }),
        }
    }
    out
}

/// `d(P; f)`, the minimum radial degree over the terms.
pub fn min_degree(f: &MixedPolynomial, p: &WeightVector) -> Option<i64> {
    f.terms().iter().map(|t| t.rdeg(p)).min()
}

pub fn face(f: &MixedPolynomial, p: &WeightVector) -> Result<Face> {
    if p.entries.len() != f.nvars() {
        return precondition("weight length differs from the number of variables");
    }
    if p.positivity() != Positivity::Strict {
        return precondition(format!("weight {p} is not strictly positive"));
    }
    let Some(d) = min_degree(f, p) else {
        return precondition("empty Newton boundary");
    };
    let points: Vec<SupportPoint> =
        support(f).into_iter().filter(|sp| linalg::dot(&p.entries, &sp.point) == d).collect();
    let diffs: Vec<Vec<i64>> = points
        .iter()
        .map(|sp| sp.point.iter().zip(&points[0].point).map(|(a, b)| a - b).collect())
        .collect();
    let dim = linalg::rank(&diffs, f.nvars());
    let mut mixed_face = Vec::new();
    for sp in &points {
        for &i in &sp.term_indices {
            let t = &f.terms()[i];
            mixed_face.push((t.nu.clone(), t.mu.clone()));
        }
    }
    mixed_face.sort();
    Ok(Face { dim, points, weight: p.clone(), d_value: d, mixed_face })
}

/// `f_P`: the sum of the terms on `Δ(P; f)`.
pub fn face_function(f: &MixedPolynomial, p: &WeightVector) -> Result<MixedPolynomial> {
    let fc = face(f, p)?;
    Ok(terms_on(f, &fc))
}

pub(crate) fn terms_on(f: &MixedPolynomial, fc: &Face) -> MixedPolynomial {
    MixedPolynomial::from_terms(
        f.nvars(),
        fc.points.iter().flat_map(|sp| {
            sp.term_indices.iter().map(|&i| {
                let t = &f.terms()[i];
                (t.coeff.clone(), t.nu.clone(), t.mu.clone())
            })
        }),
    )
}

/// The compact part of `Γ(f)` for two variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonBoundary2D {
    /// Vertices in descending order of the first coordinate.
    pub vertices: Vec<SupportPoint>,
    /// `edges[i]` joins `vertices[i]` and `vertices[i + 1]`.
    pub edges: Vec<Face>,
}

impl NewtonBoundary2D {
    /// Both end vertices lie on the coordinate axes.
    pub fn is_convenient(&self) -> bool {
        let first = &self.vertices[0].point;
        let last = &self.vertices.last().unwrap().point;
        first[1] == 0 && last[0] == 0
    }

    /// A primitive weight whose face is exactly `vertices[i]`.
    pub fn vertex_weight(&self, i: usize) -> WeightVector {
        let r = self.edges.len();
        if r == 0 {
            return WeightVector::new(vec![1, 1]);
        }
        let left = if i == 0 { vec![0, 1] } else { self.edges[i - 1].weight.entries.clone() };
        let right = if i == r { vec![1, 0] } else { self.edges[i].weight.entries.clone() };
        WeightVector::new(linalg::primitive(&[left[0] + right[0], left[1] + right[1]]))
    }

    pub fn simple_vertices(&self) -> bool {
        self.vertices.iter().all(SupportPoint::is_simple)
    }

    /// The first vertex that carries several terms, if any.
    pub fn first_multiple_vertex(&self) -> Option<&SupportPoint> {
        self.vertices.iter().find(|v| !v.is_simple())
    }
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

pub fn boundary2d(f: &MixedPolynomial) -> Result<NewtonBoundary2D> {
    if f.nvars() != 2 {
        return precondition(format!(
            "full Newton boundary enumeration needs n = 2 (got n = {}); query faces by weight instead",
            f.nvars()
        ));
    }
    let sup = support(f);
    if sup.is_empty() {
        return precondition("empty Newton boundary");
    }
    let xa = sup.iter().map(|s| s.point[0]).min().unwrap();
    let ya = sup.iter().filter(|s| s.point[0] == xa).map(|s| s.point[1]).min().unwrap();
    let yb = sup.iter().map(|s| s.point[1]).min().unwrap();
    let xb = sup.iter().filter(|s| s.point[1] == yb).map(|s| s.point[0]).min().unwrap();
    // Lower convex hull from (xa, ya) to (xb, yb), scanning by increasing x.
    let mut cand: Vec<&SupportPoint> = sup
        .iter()
        .filter(|s| s.point[0] <= xb && (s.point[0] > xa || s.point[1] == ya))
        .collect();
    cand.sort_by(|a, b| a.point.cmp(&b.point));
    let mut hull: Vec<&SupportPoint> = Vec::new();
    for s in cand {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2].point, &hull[hull.len() - 1].point, &s.point) <= 0
        {
            hull.pop();
        }
        hull.push(s);
    }
    // Keep the strictly decreasing part ending at the lowest point.
    let end = hull.iter().position(|s| s.point == vec![xb, yb]).unwrap();
    hull.truncate(end + 1);
    hull.reverse();
    let vertices: Vec<SupportPoint> = hull.into_iter().cloned().collect();
    let mut edges = Vec::new();
    for w in vertices.windows(2) {
        let dx = w[0].point[0] - w[1].point[0];
        let dy = w[1].point[1] - w[0].point[1];
        let weight = WeightVector::new(linalg::primitive(&[dy, dx]));
        edges.push(face(f, &weight)?);
    }
    Ok(NewtonBoundary2D { vertices, edges })
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << n)).map(move |mask| (0..n).filter(|j| mask & (1 << j) != 0).collect())
}

/// Index sets `I` (0-based) with `f^I ≢ 0`.
pub fn nv_sets(f: &MixedPolynomial) -> Vec<Vec<usize>> {
    subsets(f.nvars()).filter(|s| !f.restrict(s).is_zero()).collect()
}

/// `f^J ≢ 0` for every `J` with `|J| = n - k`.
pub fn is_k_convenient(f: &MixedPolynomial, k: usize) -> bool {
    let n = f.nvars();
    if k > n {
        return false;
    }
    subsets(n).filter(|s| s.len() == n - k).all(|s| !f.restrict(&s).is_zero())
}

pub fn is_convenient(f: &MixedPolynomial) -> bool {
    f.nvars() > 0 && is_k_convenient(f, f.nvars() - 1)
}

/// Whether the vertex at `point` carries exactly one term.
pub fn is_simple_vertex(f: &MixedPolynomial, point: &[i64]) -> Result<bool> {
    let b = boundary2d(f)?;
    match b.vertices.iter().find(|v| v.point == point) {
        Some(v) => Ok(v.is_simple()),
        None => precondition(format!("{point:?} is not a vertex of the Newton boundary")),
    }
}

/// Signed polar sections `(a_1, a_2)`: `nu - mu` of the simple axis monomial
/// on `z_2 = 0` and on `z_1 = 0`, absent when the boundary misses that axis.
pub fn polar_sections(f: &MixedPolynomial) -> Result<(Option<i64>, Option<i64>)> {
    let b = boundary2d(f)?;
    let section = |v: &SupportPoint, axis: usize| -> Result<Option<i64>> {
        if v.point[1 - axis] != 0 {
            return Ok(None);
        }
        if !v.is_simple() {
            return precondition(format!("axis vertex {:?} is not simple", v.point));
        }
        let t = &f.terms()[v.term_indices[0]];
        Ok(Some(t.nu[axis] - t.mu[axis]))
    };
    let a1 = section(&b.vertices[0], 0)?;
    let a2 = section(b.vertices.last().unwrap(), 1)?;
    Ok((a1, a2))
}

/// Primitive inward normals of the compact edges, ordered by angle from
/// `E1 = (1, 0)` towards `E2 = (0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualDiagram2D {
    pub rays: Vec<WeightVector>,
}

pub fn dual_diagram(f: &MixedPolynomial) -> Result<DualDiagram2D> {
    let b = boundary2d(f)?;
    let mut rays: Vec<WeightVector> = b.edges.iter().map(|e| e.weight.clone()).collect();
    rays.reverse();
    Ok(DualDiagram2D { rays })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MixedPolynomial {
        MixedPolynomial::parse_with(s, Some(2)).unwrap()
    }

    fn w(a: i64, b: i64) -> WeightVector {
        WeightVector::new(vec![a, b])
    }

    #[test]
    fn example_boundary() {
        let f = p("z1^3*zb1^2 + z1^2*z2^2 + z2^3*zb2");
        let b = boundary2d(&f).unwrap();
        let pts: Vec<_> = b.vertices.iter().map(|v| v.point.clone()).collect();
        assert_eq!(pts, vec![vec![5, 0], vec![2, 2], vec![0, 4]]);
        let ws: Vec<_> = b.edges.iter().map(|e| (e.weight.clone(), e.d_value)).collect();
        assert_eq!(ws, vec![(w(2, 3), 10), (w(1, 1), 4)]);
        assert_eq!(face_function(&f, &w(2, 3)).unwrap(), p("z1^3*zb1^2 + z1^2*z2^2"));
        assert_eq!(face_function(&f, &w(1, 1)).unwrap(), p("z1^2*z2^2 + z2^3*zb2"));
        assert!(b.is_convenient());
        let rays = dual_diagram(&f).unwrap().rays;
        assert_eq!(rays, vec![w(1, 1), w(2, 3)]);
    }

    #[test]
    fn vertex_weights_isolate_vertices() {
        let f = p("z1^3*zb1^2 + z1^2*z2^2 + z2^3*zb2");
        let b = boundary2d(&f).unwrap();
        for i in 0..b.vertices.len() {
            let fc = face(&f, &b.vertex_weight(i)).unwrap();
            assert_eq!(fc.dim, 0);
            assert_eq!(fc.points[0].point, b.vertices[i].point);
        }
    }

    #[test]
    fn face_functions_with_parameter() {
        for m in 2..6 {
            let f = p(&format!("z1^5 + z1^2*zb2^2 + z2^{m}*zb2^2"));
            assert_eq!(face_function(&f, &w(2, 3)).unwrap(), p("z1^5 + z1^2*zb2^2"));
            assert_eq!(face_function(&f, &w(m, 2)).unwrap(), p(&format!("z1^2*zb2^2 + z2^{m}*zb2^2")));
        }
    }

    #[test]
    fn single_monomial_has_no_edges() {
        let b = boundary2d(&p("z1*z2")).unwrap();
        assert_eq!(b.vertices.len(), 1);
        assert!(b.edges.is_empty());
        assert!(!b.is_convenient());
    }

    #[test]
    fn collinear_interior_point_is_not_a_vertex() {
        let f = p("-2z1^2*zb1 + z2^2*zb2 + 3z1^2*zb2");
        let b = boundary2d(&f).unwrap();
        assert_eq!(b.vertices.len(), 2);
        assert_eq!(b.edges.len(), 1);
        assert_eq!(b.edges[0].points.len(), 3);
    }

    #[test]
    fn zero_polynomial_and_higher_n() {
        assert!(boundary2d(&MixedPolynomial::zero(2)).is_err());
        let g = MixedPolynomial::parse("z1^2 + z2^2 + z3^2").unwrap();
        assert!(boundary2d(&g).is_err());
        let fc = face(&g, &WeightVector::new(vec![1, 1, 1])).unwrap();
        assert_eq!(fc.dim, 2);
        assert!(face(&g, &WeightVector::new(vec![1, 0, 1])).is_err());
    }

    #[test]
    fn convenience() {
        let f = p("z1^3 + z1*z2 + z2^3");
        assert!(is_convenient(&f));
        assert_eq!(nv_sets(&f), vec![vec![0], vec![1], vec![0, 1]]);
        let g = p("z1^2*z2 + z2^3");
        assert!(!is_convenient(&g));
        assert!(is_k_convenient(&g, 0));
    }

    #[test]
    fn polar_sections_of_examples() {
        assert_eq!(polar_sections(&p("z2^2 - z1^3")).unwrap(), (Some(3), Some(2)));
        let ft = p("-2z1^2*zb1 + z2^2*zb2 + 3z1^2*zb2");
        assert_eq!(polar_sections(&ft).unwrap(), (Some(1), Some(1)));
        assert_eq!(polar_sections(&p("z1^2*z2 + z2^3")).unwrap(), (None, Some(3)));
        assert!(polar_sections(&p("z1^3 + z1^2*zb1 + z2^2")).is_err());
    }

    #[test]
    fn multiple_vertex_detection() {
        let f = p("z1^3 + 2z1^2*zb1 + z2^2");
        let b = boundary2d(&f).unwrap();
        assert_eq!(b.first_multiple_vertex().unwrap().point, vec![3, 0]);
        assert!(!is_simple_vertex(&f, &[3, 0]).unwrap());
        assert!(is_simple_vertex(&f, &[0, 2]).unwrap());
        assert!(is_simple_vertex(&f, &[1, 1]).is_err());
    }
}
