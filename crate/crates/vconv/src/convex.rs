//! Convex function handles, the discrete Monge-Ampere measure of max-affine
//! functions via subdifferential volumes, and support bodies.

use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};
use crate::symmat::SymMatrixQ;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConvexError {
    #[error("operation requires a {expected} handle")]
    WrongKind { expected: &'static str },
    #[error("discrete Monge-Ampere only implemented for dimension <= 3, got {0}")]
    DimensionTooLarge(usize),
    #[error("quadratic part is not positive semi-definite")]
    NotConvex,
}

/// Affine piece `<a, x> + b` with exact rational data.
pub type AffinePiece = (Vec<Rational>, Rational);

#[derive(Clone)]
pub enum ConvexFunctionHandle {
    /// f(x) = x^T A x / 2 + <b, x> + c
    Quadratic {
        a: SymMatrixQ,
        b: Vec<Scalar>,
        c: Scalar,
    },
    /// Smooth function presented through its Hessian field.
    SmoothSampled {
        dim: usize,
        hessian: Rc<dyn Fn(&[f64]) -> Vec<Vec<f64>>>,
    },
    /// max_i (<a_i, x> + b_i), nonempty.
    MaxAffine { pieces: Vec<AffinePiece> },
}

impl ConvexFunctionHandle {
    pub fn quadratic(a: SymMatrixQ, b: Vec<Scalar>, c: Scalar) -> Self {
        ConvexFunctionHandle::Quadratic { a, b, c }
    }

    /// Quadratic handle validated convex (PSD quadratic part).
    pub fn quadratic_convex(a: SymMatrixQ, b: Vec<Scalar>, c: Scalar) -> Result<Self, ConvexError> {
        if !a.is_psd() {
            return Err(ConvexError::NotConvex);
        }
        Ok(ConvexFunctionHandle::Quadratic { a, b, c })
    }

    /// x^T x / 2 in dimension n.
    pub fn half_norm_squared(dim: usize) -> Self {
        ConvexFunctionHandle::Quadratic {
            a: SymMatrixQ::identity(dim),
            b: vec![Scalar::zero(); dim],
            c: Scalar::zero(),
        }
    }

    pub fn smooth<F>(dim: usize, hessian: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<Vec<f64>> + 'static,
    {
        ConvexFunctionHandle::SmoothSampled {
            dim,
            hessian: Rc::new(hessian),
        }
    }

    pub fn max_affine(pieces: Vec<AffinePiece>) -> Self {
        assert!(!pieces.is_empty(), "max-affine handle needs pieces");
        ConvexFunctionHandle::MaxAffine { pieces }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexFunctionHandle::Quadratic { a, .. } => a.dim(),
            ConvexFunctionHandle::SmoothSampled { dim, .. } => *dim,
            ConvexFunctionHandle::MaxAffine { pieces } => pieces[0].0.len(),
        }
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self, ConvexFunctionHandle::Quadratic { .. })
    }

    pub fn is_max_affine(&self) -> bool {
        matches!(self, ConvexFunctionHandle::MaxAffine { .. })
    }

    /// Hessian at a point; max-affine handles have none.
    pub fn hessian_at(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, ConvexError> {
        match self {
            ConvexFunctionHandle::Quadratic { a, .. } => Ok(a.to_f64()),
            ConvexFunctionHandle::SmoothSampled { hessian, .. } => Ok(hessian(x)),
            ConvexFunctionHandle::MaxAffine { .. } => Err(ConvexError::WrongKind {
                expected: "smooth or quadratic",
            }),
        }
    }

    /// Adds an affine function; Hessian data is untouched.
    pub fn add_affine(&self, a: &[Rational], b: &Rational) -> ConvexFunctionHandle {
        match self {
            ConvexFunctionHandle::Quadratic { a: q, b: lin, c } => ConvexFunctionHandle::Quadratic {
                a: q.clone(),
                b: lin
                    .iter()
                    .zip(a)
                    .map(|(l, extra)| l + &Scalar::from_rational(extra.clone()))
                    .collect(),
                c: c + &Scalar::from_rational(b.clone()),
            },
            ConvexFunctionHandle::SmoothSampled { dim, hessian } => {
                ConvexFunctionHandle::SmoothSampled {
                    dim: *dim,
                    hessian: hessian.clone(),
                }
            }
            ConvexFunctionHandle::MaxAffine { pieces } => ConvexFunctionHandle::MaxAffine {
                pieces: pieces
                    .iter()
                    .map(|(ai, bi)| {
                        (
                            ai.iter().zip(a).map(|(x, y)| x + y).collect(),
                            bi + b,
                        )
                    })
                    .collect(),
            },
        }
    }

    /// t * f for t >= 0 rational.
    pub fn scale(&self, t: &Rational) -> ConvexFunctionHandle {
        let ts = Scalar::from_rational(t.clone());
        match self {
            ConvexFunctionHandle::Quadratic { a, b, c } => ConvexFunctionHandle::Quadratic {
                a: a.scale(&ts),
                b: b.iter().map(|x| x * &ts).collect(),
                c: c * &ts,
            },
            ConvexFunctionHandle::SmoothSampled { dim, hessian } => {
                let h = hessian.clone();
                let tf = t.to_f64().unwrap();
                ConvexFunctionHandle::SmoothSampled {
                    dim: *dim,
                    hessian: Rc::new(move |x| {
                        h(x).into_iter()
                            .map(|row| row.into_iter().map(|v| v * tf).collect())
                            .collect()
                    }),
                }
            }
            ConvexFunctionHandle::MaxAffine { pieces } => ConvexFunctionHandle::MaxAffine {
                pieces: pieces
                    .iter()
                    .map(|(a, b)| (a.iter().map(|x| x * t).collect(), b * t))
                    .collect(),
            },
        }
    }

    /// Linear combination of smooth/quadratic handles (Hessian sum).
    pub fn linear_combination(coeffs: &[f64], handles: &[ConvexFunctionHandle]) -> ConvexFunctionHandle {
        assert_eq!(coeffs.len(), handles.len());
        let dim = handles[0].dim();
        let owned: Vec<ConvexFunctionHandle> = handles.to_vec();
        let cs = coeffs.to_vec();
        ConvexFunctionHandle::SmoothSampled {
            dim,
            hessian: Rc::new(move |x| {
                let mut acc = vec![vec![0.0; dim]; dim];
                for (c, h) in cs.iter().zip(&owned) {
                    if *c == 0.0 {
                        continue;
                    }
                    let hess = h.hessian_at(x).expect("combination needs smooth handles");
                    for i in 0..dim {
                        for j in 0..dim {
                            acc[i][j] += c * hess[i][j];
                        }
                    }
                }
                acc
            }),
        }
    }

    /// Pointwise maximum of two max-affine functions.
    pub fn max_affine_max(&self, other: &ConvexFunctionHandle) -> Result<ConvexFunctionHandle, ConvexError> {
        match (self, other) {
            (
                ConvexFunctionHandle::MaxAffine { pieces: p },
                ConvexFunctionHandle::MaxAffine { pieces: q },
            ) => {
                let mut pieces = p.clone();
                pieces.extend(q.iter().cloned());
                Ok(ConvexFunctionHandle::MaxAffine { pieces })
            }
            _ => Err(ConvexError::WrongKind {
                expected: "max_affine",
            }),
        }
    }

    /// Sum of two max-affine functions (pieces combine pairwise).
    pub fn max_affine_sum(&self, other: &ConvexFunctionHandle) -> Result<ConvexFunctionHandle, ConvexError> {
        match (self, other) {
            (
                ConvexFunctionHandle::MaxAffine { pieces: p },
                ConvexFunctionHandle::MaxAffine { pieces: q },
            ) => {
                let mut pieces = Vec::with_capacity(p.len() * q.len());
                for (a1, b1) in p {
                    for (a2, b2) in q {
                        pieces.push((
                            a1.iter().zip(a2).map(|(x, y)| x + y).collect(),
                            b1 + b2,
                        ));
                    }
                }
                Ok(ConvexFunctionHandle::MaxAffine { pieces })
            }
            _ => Err(ConvexError::WrongKind {
                expected: "max_affine",
            }),
        }
    }

    /// Exact value of a max-affine function at a rational point.
    pub fn max_affine_value(&self, x: &[Rational]) -> Result<Rational, ConvexError> {
        match self {
            ConvexFunctionHandle::MaxAffine { pieces } => Ok(pieces
                .iter()
                .map(|(a, b)| {
                    a.iter()
                        .zip(x)
                        .fold(b.clone(), |acc, (ai, xi)| acc + ai * xi)
                })
                .max()
                .unwrap()),
            _ => Err(ConvexError::WrongKind {
                expected: "max_affine",
            }),
        }
    }
}

/// Finitely supported nonnegative measure with exact data.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    pub atoms: Vec<(Vec<Rational>, Rational)>,
}

impl DiscreteMeasure {
    pub fn total_mass(&self) -> Rational {
        self.atoms
            .iter()
            .fold(Rational::zero(), |acc, (_, w)| acc + w)
    }
}

/// Discrete Monge-Ampere measure of a max-affine function in dimension at
/// most 3: an atom sits at each point where enough pieces are active, with
/// weight the volume of the convex hull of the active gradients.
pub fn discrete_ma(f: &ConvexFunctionHandle) -> Result<DiscreteMeasure, ConvexError> {
    let ConvexFunctionHandle::MaxAffine { pieces } = f else {
        return Err(ConvexError::WrongKind {
            expected: "max_affine",
        });
    };
    let n = pieces[0].0.len();
    if n > 3 {
        return Err(ConvexError::DimensionTooLarge(n));
    }
    let mut atoms: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut seen: Vec<Vec<Rational>> = Vec::new();

    let mut candidates: Vec<Vec<Rational>> = Vec::new();
    match n {
        1 => {
            // crossing of every pair of pieces
            for i in 0..pieces.len() {
                for j in i + 1..pieces.len() {
                    let (a1, b1) = &pieces[i];
                    let (a2, b2) = &pieces[j];
                    let da = &a1[0] - &a2[0];
                    if da.is_zero() {
                        continue;
                    }
                    candidates.push(vec![(b2 - b1) / da]);
                }
            }
        }
        _ => {
            // common point of each (n+1)-subset of pieces
            for subset in crate::symmat::subsets_of_size(pieces.len(), n + 1) {
                let base = subset[0];
                let rows: Vec<Vec<Scalar>> = subset[1..]
                    .iter()
                    .map(|&i| {
                        (0..n)
                            .map(|d| {
                                Scalar::from_rational(&pieces[base].0[d] - &pieces[i].0[d])
                            })
                            .collect()
                    })
                    .collect();
                let rhs: Vec<Scalar> = subset[1..]
                    .iter()
                    .map(|&i| Scalar::from_rational(&pieces[i].1 - &pieces[base].1))
                    .collect();
                let mat = Matrix::from_rows(rows.clone());
                if let Some(x) = mat.solve(&rhs) {
                    // require a genuine solution of the square system
                    let consistent = rows
                        .iter()
                        .zip(&rhs)
                        .all(|(row, b)| {
                            let mut acc = Scalar::zero();
                            for (r, xi) in row.iter().zip(&x) {
                                acc += &(r * xi);
                            }
                            acc == *b
                        });
                    if consistent {
                        candidates.push(x.into_iter().map(|v| v.re).collect());
                    }
                }
            }
        }
    }

    for x in candidates {
        if seen.contains(&x) {
            continue;
        }
        seen.push(x.clone());
        // active pieces at x
        let values: Vec<Rational> = pieces
            .iter()
            .map(|(a, b)| {
                a.iter()
                    .zip(&x)
                    .fold(b.clone(), |acc, (ai, xi)| acc + ai * xi)
            })
            .collect();
        let max = values.iter().max().unwrap().clone();
        let grads: Vec<Vec<Rational>> = pieces
            .iter()
            .zip(&values)
            .filter(|(_, v)| **v == max)
            .map(|((a, _), _)| a.clone())
            .collect();
        if grads.len() < n + 1 {
            continue;
        }
        let w = hull_volume(&grads);
        if !w.is_zero() {
            atoms.push((x, w));
        }
    }
    atoms.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(DiscreteMeasure { atoms })
}

/// Volume of the convex hull of rational points in dimension 1, 2, or 3
/// (exact). Used both for atom weights and as the gradient-image oracle.
pub fn hull_volume(points: &[Vec<Rational>]) -> Rational {
    if points.is_empty() {
        return Rational::zero();
    }
    match points[0].len() {
        1 => {
            let min = points.iter().map(|p| p[0].clone()).min().unwrap();
            let max = points.iter().map(|p| p[0].clone()).max().unwrap();
            max - min
        }
        2 => hull_area_2d(points),
        3 => hull_volume_3d(points),
        d => panic!("hull volume only implemented for dimension <= 3, got {d}"),
    }
}

fn cross_2d(o: &[Rational], a: &[Rational], b: &[Rational]) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Convex hull by monotone chain; returns the boundary in counterclockwise
/// order without repetition (collinear boundary points dropped).
pub fn hull_2d(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut pts: Vec<Vec<Rational>> = points.to_vec();
    pts.sort();
    pts.dedup();
    let m = pts.len();
    if m <= 2 {
        return pts;
    }
    let mut lower: Vec<Vec<Rational>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross_2d(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<Rational>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross_2d(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn hull_area_2d(points: &[Vec<Rational>]) -> Rational {
    let hull = hull_2d(points);
    if hull.len() < 3 {
        return Rational::zero();
    }
    let mut acc = Rational::zero();
    for i in 0..hull.len() {
        let a = &hull[i];
        let b = &hull[(i + 1) % hull.len()];
        acc += &a[0] * &b[1] - &a[1] * &b[0];
    }
    acc.abs() / Rational::from_integer(2.into())
}

fn sub3(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    (0..3).map(|i| &a[i] - &b[i]).collect()
}

fn cross3(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot3(a: &[Rational], b: &[Rational]) -> Rational {
    (0..3).fold(Rational::zero(), |acc, i| acc + &a[i] * &b[i])
}

fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    dot3(a, &cross3(b, c))
}

/// Exact 3D hull volume: enumerate supporting planes through point triples,
/// then sum cone volumes over facets from the centroid.
fn hull_volume_3d(points: &[Vec<Rational>]) -> Rational {
    let mut pts: Vec<Vec<Rational>> = points.to_vec();
    pts.sort();
    pts.dedup();
    let m = pts.len();
    if m < 4 {
        return Rational::zero();
    }
    let centroid: Vec<Rational> = (0..3)
        .map(|d| {
            pts.iter().fold(Rational::zero(), |acc, p| acc + &p[d])
                / Rational::from_integer((m as i64).into())
        })
        .collect();
    let mut volume = Rational::zero();
    let mut seen_planes: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let normal = cross3(&sub3(&pts[j], &pts[i]), &sub3(&pts[k], &pts[i]));
                if normal.iter().all(|v| v.is_zero()) {
                    continue;
                }
                let offset = dot3(&normal, &pts[i]);
                let mut pos = false;
                let mut neg = false;
                for p in &pts {
                    let side = dot3(&normal, p) - &offset;
                    if side.is_positive() {
                        pos = true;
                    } else if side.is_negative() {
                        neg = true;
                    }
                    if pos && neg {
                        break;
                    }
                }
                if pos && neg {
                    continue;
                }
                // orient outward
                let (normal, offset) = if pos {
                    (
                        normal.iter().map(|v| -v.clone()).collect::<Vec<_>>(),
                        -offset,
                    )
                } else {
                    (normal, offset)
                };
                // canonical form for dedup
                let canon = canonical_plane(&normal, &offset);
                if seen_planes.contains(&canon) {
                    continue;
                }
                seen_planes.push(canon);
                // facet polygon: points on the plane
                let on_plane: Vec<Vec<Rational>> = pts
                    .iter()
                    .filter(|p| dot3(&normal, p) == offset)
                    .cloned()
                    .collect();
                if on_plane.len() < 3 {
                    continue;
                }
                let polygon = order_polygon_3d(&on_plane, &normal);
                for t in 1..polygon.len() - 1 {
                    let v = det3(
                        &sub3(&polygon[0], &centroid),
                        &sub3(&polygon[t], &centroid),
                        &sub3(&polygon[t + 1], &centroid),
                    );
                    volume += v.abs();
                }
            }
        }
    }
    volume / Rational::from_integer(6.into())
}

fn canonical_plane(normal: &[Rational], offset: &Rational) -> (Vec<Rational>, Rational) {
    // scale so the first nonzero normal entry is +1
    let lead = normal.iter().find(|v| !v.is_zero()).unwrap().clone();
    (
        normal.iter().map(|v| v / &lead).collect(),
        offset / &lead,
    )
}

/// Orders coplanar points along their 2D hull boundary (projecting out the
/// largest normal coordinate).
fn order_polygon_3d(points: &[Vec<Rational>], normal: &[Rational]) -> Vec<Vec<Rational>> {
    let drop_axis = (0..3)
        .max_by(|&a, &b| normal[a].abs().cmp(&normal[b].abs()))
        .unwrap();
    let axes: Vec<usize> = (0..3).filter(|&a| a != drop_axis).collect();
    let projected: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| vec![p[axes[0]].clone(), p[axes[1]].clone()])
        .collect();
    let hull2 = hull_2d(&projected);
    hull2
        .into_iter()
        .map(|q| {
            points
                .iter()
                .find(|p| p[axes[0]] == q[0] && p[axes[1]] == q[1])
                .unwrap()
                .clone()
        })
        .collect()
}

/// Total gradient-image volume: the hull of all gradients. Inessential
/// pieces have gradients inside the hull of essential ones, so this is
/// exactly the total Monge-Ampere mass.
pub fn gradient_image_volume(f: &ConvexFunctionHandle) -> Result<Rational, ConvexError> {
    let ConvexFunctionHandle::MaxAffine { pieces } = f else {
        return Err(ConvexError::WrongKind {
            expected: "max_affine",
        });
    };
    let grads: Vec<Vec<Rational>> = pieces.iter().map(|(a, _)| a.clone()).collect();
    Ok(hull_volume(&grads))
}

/// Compact convex reference bodies with closed-form support functions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SupportBody {
    Box { center: Vec<f64>, half_widths: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Polytope { vertices: Vec<Vec<f64>> },
}

impl SupportBody {
    pub fn support_function(&self, y: &[f64]) -> f64 {
        match self {
            SupportBody::Box {
                center,
                half_widths,
            } => {
                let mut acc = 0.0;
                for i in 0..y.len() {
                    acc += y[i] * center[i] + y[i].abs() * half_widths[i];
                }
                acc
            }
            SupportBody::Ball { center, radius } => {
                let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                let dot: f64 = y.iter().zip(center).map(|(a, b)| a * b).sum();
                radius * norm + dot
            }
            SupportBody::Polytope { vertices } => vertices
                .iter()
                .map(|v| v.iter().zip(y).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// True if the box is contained in the body (vertex check for boxes and
    /// polytope-free bodies).
    pub fn contains_box(&self, domain: &crate::quad::BoxDomain) -> bool {
        let dim = domain.dim();
        let mut vertex = vec![0.0; dim];
        let mut idx = vec![0u8; dim];
        loop {
            for d in 0..dim {
                vertex[d] = if idx[d] == 0 { domain.lo[d] } else { domain.hi[d] };
            }
            if !self.contains_point(&vertex) {
                return false;
            }
            let mut d = 0;
            loop {
                if d == dim {
                    return true;
                }
                idx[d] += 1;
                if idx[d] < 2 {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        match self {
            SupportBody::Box {
                center,
                half_widths,
            } => x
                .iter()
                .zip(center.iter().zip(half_widths))
                .all(|(v, (c, h))| (v - c).abs() <= *h + 1e-12),
            SupportBody::Ball { center, radius } => {
                let d2: f64 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                d2.sqrt() <= radius + 1e-12
            }
            SupportBody::Polytope { .. } => {
                unimplemented!("point membership for polytopes is not needed")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn pieces_1d(data: &[(i64, i64)]) -> ConvexFunctionHandle {
        ConvexFunctionHandle::max_affine(
            data.iter().map(|&(a, b)| (vec![r(a)], r(b))).collect(),
        )
    }

    #[test]
    fn abs_value_has_weight_two_at_zero() {
        let f = pieces_1d(&[(1, 0), (-1, 0)]);
        let ma = discrete_ma(&f).unwrap();
        assert_eq!(ma.atoms.len(), 1);
        assert_eq!(ma.atoms[0].0, vec![r(0)]);
        assert_eq!(ma.atoms[0].1, r(2));
    }

    #[test]
    fn relu_has_weight_one() {
        let f = pieces_1d(&[(0, 0), (1, 0)]);
        let ma = discrete_ma(&f).unwrap();
        assert_eq!(ma.atoms, vec![(vec![r(0)], r(1))]);
    }

    #[test]
    fn cross_polytope_max_in_2d() {
        // max(+-x1 +- x2): atom at 0, weight = area of hull{(+-1, +-1)} = 4
        let f = ConvexFunctionHandle::max_affine(vec![
            (vec![r(1), r(1)], r(0)),
            (vec![r(1), r(-1)], r(0)),
            (vec![r(-1), r(1)], r(0)),
            (vec![r(-1), r(-1)], r(0)),
        ]);
        let ma = discrete_ma(&f).unwrap();
        assert_eq!(ma.atoms.len(), 1);
        assert_eq!(ma.atoms[0].0, vec![r(0), r(0)]);
        assert_eq!(ma.atoms[0].1, r(4));
        assert_eq!(gradient_image_volume(&f).unwrap(), r(4));
    }

    #[test]
    fn total_mass_matches_gradient_image() {
        // shifted pieces in 2D with several vertices
        let f = ConvexFunctionHandle::max_affine(vec![
            (vec![r(0), r(0)], r(0)),
            (vec![r(2), r(0)], r(-1)),
            (vec![r(0), r(2)], r(-1)),
            (vec![r(2), r(2)], r(-3)),
        ]);
        let ma = discrete_ma(&f).unwrap();
        assert_eq!(ma.total_mass(), gradient_image_volume(&f).unwrap());
        assert_eq!(ma.total_mass(), r(4));
    }

    #[test]
    fn octahedron_in_3d() {
        // max over (+-1, +-1, +-1): single vertex at origin, weight = cube volume 8
        let mut pieces = Vec::new();
        for sx in [-1i64, 1] {
            for sy in [-1i64, 1] {
                for sz in [-1i64, 1] {
                    pieces.push((vec![r(sx), r(sy), r(sz)], r(0)));
                }
            }
        }
        let f = ConvexFunctionHandle::max_affine(pieces);
        let ma = discrete_ma(&f).unwrap();
        assert_eq!(ma.total_mass(), r(8));
        assert_eq!(gradient_image_volume(&f).unwrap(), r(8));
    }

    #[test]
    fn valuation_identity_relu_pair() {
        // f = max(0, x), h = max(0, -x): f v h = |x|, f ^ h = 0
        let f = pieces_1d(&[(0, 0), (1, 0)]);
        let h = pieces_1d(&[(0, 0), (-1, 0)]);
        let max = f.max_affine_max(&h).unwrap();
        let mass_f = discrete_ma(&f).unwrap().total_mass();
        let mass_h = discrete_ma(&h).unwrap().total_mass();
        let mass_max = discrete_ma(&max).unwrap().total_mass();
        // min is identically zero
        assert_eq!(mass_max.clone() + r(0), &mass_f + &mass_h);
        assert_eq!(mass_max, r(2));
    }

    #[test]
    fn epi_translation_invariance_max_affine() {
        let f = ConvexFunctionHandle::max_affine(vec![
            (vec![r(1), r(0)], r(0)),
            (vec![r(-1), r(2)], r(1)),
            (vec![r(0), r(-2)], r(-1)),
        ]);
        let shifted = f.add_affine(&[r(3), r(-1)], &r(5));
        let ma = discrete_ma(&f).unwrap();
        let ma_shifted = discrete_ma(&shifted).unwrap();
        // same atoms, same weights
        assert_eq!(ma.atoms.len(), ma_shifted.atoms.len());
        for (a, b) in ma.atoms.iter().zip(&ma_shifted.atoms) {
            assert_eq!(a.0, b.0);
            assert_eq!(a.1, b.1);
        }
    }

    #[test]
    fn support_functions() {
        let ball = SupportBody::Ball {
            center: vec![0.0, 0.0],
            radius: 1.0,
        };
        assert!((ball.support_function(&[1.0, 0.0]) - 1.0).abs() < 1e-14);
        let cube = SupportBody::Box {
            center: vec![0.0; 3],
            half_widths: vec![1.0; 3],
        };
        assert!((cube.support_function(&[1.0, 1.0, 1.0]) - 3.0).abs() < 1e-14);
        // subadditivity on a few samples
        let body = SupportBody::Polytope {
            vertices: vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![-1.0, -1.0]],
        };
        let ys = [
            (vec![1.0, 2.0], vec![-0.5, 0.3]),
            (vec![0.0, -1.0], vec![2.0, 2.0]),
        ];
        for (y1, y2) in ys {
            let sum: Vec<f64> = y1.iter().zip(&y2).map(|(a, b)| a + b).collect();
            assert!(
                body.support_function(&sum)
                    <= body.support_function(&y1) + body.support_function(&y2) + 1e-12
            );
        }
    }

    #[test]
    fn quadratic_convexity_validation() {
        let ok = ConvexFunctionHandle::quadratic_convex(
            SymMatrixQ::identity(2),
            vec![Scalar::zero(); 2],
            Scalar::zero(),
        );
        assert!(ok.is_ok());
        let bad = ConvexFunctionHandle::quadratic_convex(
            SymMatrixQ::diagonal(&[1, -1]),
            vec![Scalar::zero(); 2],
            Scalar::zero(),
        );
        assert!(bad.is_err());
    }
}
