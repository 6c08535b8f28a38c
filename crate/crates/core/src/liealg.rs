//! so(2n+1) and SO(2n+1) as real matrices.
//!
//! Skew matrices are also handled as vectors of length `n(2n+1)`: entry
//! `(i, j)` with `i < j` becomes `√2·Y_ij`, in row-major order. The map is a
//! Frobenius isometry, so SVD ranks of stacked coordinate vectors are
//! subspace dimensions. Torus block `j` occupies rows and columns `2j, 2j+1`
//! and the last index `2n` carries the fixed eigenvalue 1.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use nalgebra::{Complex, DMatrix, DVector, Schur, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::rootsys::{positive_roots_unchecked, Angle, Root, RootKind, TorusElement};
use crate::{Error, Result};

pub const SKEW_TOL: f64 = 1e-12;
pub const ORTHO_TOL: f64 = 1e-10;

/// Side length `2n+1` of the matrices for rank `n`.
pub fn matrix_size(n: usize) -> usize {
    2 * n + 1
}

/// `dim so(2n+1) = n(2n+1)`.
pub fn algebra_dim(n: usize) -> usize {
    n * (2 * n + 1)
}

fn rank_of_size(size: usize) -> Result<usize> {
    if size.is_multiple_of(2) || size < 3 {
        return Err(Error::BadShape { rows: size, cols: size });
    }
    Ok((size - 1) / 2)
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, &b| a.max(b.abs()))
}

/// Element of so(2n+1).
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    n: usize,
    m: DMatrix<f64>,
}

impl AlgebraElement {
    /// Checks `Mᵀ = -M` to [`SKEW_TOL`] relative to the largest entry, then
    /// antisymmetrizes exactly.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::BadShape { rows: m.nrows(), cols: m.ncols() });
        }
        let n = rank_of_size(m.nrows())?;
        let residual = max_abs(&(&m + m.transpose()));
        if residual > SKEW_TOL * max_abs(&m).max(1.0) {
            return Err(Error::NotSkew(residual));
        }
        let m = (&m - m.transpose()) * 0.5;
        Ok(AlgebraElement { n, m })
    }

    pub fn zero(n: usize) -> Self {
        let s = matrix_size(n);
        AlgebraElement { n, m: DMatrix::zeros(s, s) }
    }

    pub fn from_coordinates(n: usize, c: &DVector<f64>) -> Self {
        let s = matrix_size(n);
        assert_eq!(c.len(), algebra_dim(n), "coordinate vector has the wrong length");
        let mut m = DMatrix::zeros(s, s);
        let mut k = 0;
        for i in 0..s {
            for j in i + 1..s {
                m[(i, j)] = c[k] / SQRT_2;
                m[(j, i)] = -c[k] / SQRT_2;
                k += 1;
            }
        }
        AlgebraElement { n, m }
    }

    pub fn coordinates(&self) -> DVector<f64> {
        skew_coordinates(&self.m)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn scale(&self, t: f64) -> Self {
        AlgebraElement { n: self.n, m: &self.m * t }
    }

    /// Random element with independent standard normal coordinates.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let c = DVector::from_fn(algebra_dim(n), |_, _| rng.sample::<f64, _>(StandardNormal));
        Self::from_coordinates(n, &c)
    }
}

fn skew_coordinates(m: &DMatrix<f64>) -> DVector<f64> {
    let s = m.nrows();
    let mut c = DVector::zeros(s * (s - 1) / 2);
    let mut k = 0;
    for i in 0..s {
        for j in i + 1..s {
            c[k] = m[(i, j)] * SQRT_2;
            k += 1;
        }
    }
    c
}

/// Element of SO(2n+1).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    n: usize,
    m: DMatrix<f64>,
}

impl GroupElement {
    /// Checks `gᵀg = I` and `det g = 1` to [`ORTHO_TOL`].
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::BadShape { rows: m.nrows(), cols: m.ncols() });
        }
        let n = rank_of_size(m.nrows())?;
        let s = m.nrows();
        let residual = max_abs(&(m.transpose() * &m - DMatrix::identity(s, s)));
        let det_residual = (m.determinant() - 1.0).abs();
        if residual > ORTHO_TOL || det_residual > ORTHO_TOL {
            return Err(Error::NotSpecialOrthogonal(residual.max(det_residual)));
        }
        Ok(GroupElement { n, m })
    }

    pub fn identity(n: usize) -> Self {
        let s = matrix_size(n);
        GroupElement { n, m: DMatrix::identity(s, s) }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        GroupElement { n: self.n, m: self.m.transpose() }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        check_rank(self.n, other.n)?;
        Ok(GroupElement { n: self.n, m: &self.m * &other.m })
    }

    /// `g x gᵀ`.
    pub fn conjugate(&self, x: &GroupElement) -> Result<GroupElement> {
        check_rank(self.n, x.n)?;
        Ok(GroupElement { n: self.n, m: &self.m * &x.m * self.m.transpose() })
    }
}

fn check_rank(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::RankMismatch(a, b));
    }
    Ok(())
}

/// `(cos θ, sin θ)`, exact at multiples of π/2.
fn cos_sin(a: Angle) -> (f64, f64) {
    let r = a.reduce_two_pi().pi_fraction();
    match (*r.numer(), *r.denom()) {
        (0, _) => (1.0, 0.0),
        (1, 2) => (0.0, 1.0),
        (1, 1) => (-1.0, 0.0),
        (3, 2) => (0.0, -1.0),
        _ => {
            let t = a.radians();
            (libm::cos(t), libm::sin(t))
        }
    }
}

/// Block rotation matrix with the given block angles and a final 1.
pub fn torus_matrix_from_coordinates(coords: &[Angle]) -> GroupElement {
    let n = coords.len();
    let s = matrix_size(n);
    let mut m = DMatrix::identity(s, s);
    for (j, &a) in coords.iter().enumerate() {
        let (c, sn) = cos_sin(a);
        m[(2 * j, 2 * j)] = c;
        m[(2 * j, 2 * j + 1)] = -sn;
        m[(2 * j + 1, 2 * j)] = sn;
        m[(2 * j + 1, 2 * j + 1)] = c;
    }
    GroupElement { n, m }
}

pub fn torus_matrix(x: &TorusElement) -> GroupElement {
    torus_matrix_from_coordinates(&x.coordinates())
}

/// Real torus generator `Σ θ_j T_j`.
pub fn torus_algebra_element(theta: &[f64]) -> AlgebraElement {
    let n = theta.len();
    let s = matrix_size(n);
    let mut m = DMatrix::zeros(s, s);
    for (j, &t) in theta.iter().enumerate() {
        m[(2 * j, 2 * j + 1)] = -t;
        m[(2 * j + 1, 2 * j)] = t;
    }
    AlgebraElement { n, m }
}

pub fn lift_coordinates(coords: &[Angle]) -> AlgebraElement {
    let theta: Vec<f64> = coords.iter().map(|a| a.radians()).collect();
    torus_algebra_element(&theta)
}

/// The generator `X_x` with `exp X_x = x`.
pub fn lift(x: &TorusElement) -> AlgebraElement {
    lift_coordinates(&x.coordinates())
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn exp_alg(y: &AlgebraElement) -> GroupElement {
    let s = y.m.nrows();
    let norm = y.m.norm();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = &y.m * scale;
    let mut result = DMatrix::identity(s, s);
    let mut term = DMatrix::identity(s, s);
    for k in 1..40 {
        term = &term * &a / k as f64;
        result += &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    GroupElement { n: y.n, m: result }
}

/// Checked variant of [`exp_alg`] for raw matrices.
pub fn exp_matrix(m: DMatrix<f64>) -> Result<GroupElement> {
    Ok(exp_alg(&AlgebraElement::new(m)?))
}

/// `Ad(g)Y = g Y gᵀ`.
pub fn adjoint(g: &GroupElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    check_rank(g.n, y.n)?;
    let m = &g.m * &y.m * g.m.transpose();
    Ok(AlgebraElement { n: y.n, m: (&m - m.transpose()) * 0.5 })
}

/// `ad(M)Y = MY - YM`.
pub fn ad(m: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    check_rank(m.n, y.n)?;
    Ok(AlgebraElement { n: y.n, m: &m.m * &y.m - &y.m * &m.m })
}

/// Coordinate basis vector `e_k` as an algebra element.
pub fn basis_element(n: usize, k: usize) -> AlgebraElement {
    let mut c = DVector::zeros(algebra_dim(n));
    c[k] = 1.0;
    AlgebraElement::from_coordinates(n, &c)
}

/// `Ad(g)` as an `n(2n+1)` square matrix in coordinates.
pub fn adjoint_matrix(g: &GroupElement) -> DMatrix<f64> {
    let d = algebra_dim(g.n);
    let mut out = DMatrix::zeros(d, d);
    for k in 0..d {
        let e = basis_element(g.n, k);
        let col = skew_coordinates(&(&g.m * &e.m * g.m.transpose()));
        out.set_column(k, &col);
    }
    out
}

/// `ad(M)` in coordinates; skew-symmetric since ad is Frobenius
/// skew-adjoint.
pub fn ad_matrix(m: &AlgebraElement) -> DMatrix<f64> {
    let d = algebra_dim(m.n);
    let mut out = DMatrix::zeros(d, d);
    for k in 0..d {
        let e = basis_element(m.n, k);
        let col = skew_coordinates(&(&m.m * &e.m - &e.m * &m.m));
        out.set_column(k, &col);
    }
    out
}

/// Complex eigenvalues of a real square matrix. nalgebra's unbounded default
/// iteration can stall on orthogonal matrices with repeated eigenvalues, so
/// this bounds it and retries with looser thresholds.
pub fn eigenvalues(m: DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    for eps in [1e-15, 1e-14, 1e-13, 1e-12] {
        if let Some(s) = Schur::try_new(m.clone(), eps, 10_000) {
            return Ok(s.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::EigenSolve)
}

/// Number of singular values above `tol` times the largest one.
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// Default relative threshold for span computations.
pub const SPAN_TOL: f64 = 1e-8;

/// Orthonormal basis of a subspace of `R^d`, stored as matrix columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    basis: DMatrix<f64>,
}

impl SubspaceBasis {
    pub fn empty(ambient_dim: usize) -> Self {
        SubspaceBasis { basis: DMatrix::zeros(ambient_dim, 0) }
    }

    /// Orthonormalizes the columns of `m`, dropping directions whose singular
    /// value is at most `tol` times the largest.
    pub fn from_columns(m: &DMatrix<f64>, tol: f64) -> Self {
        let d = m.nrows();
        if m.ncols() == 0 {
            return Self::empty(d);
        }
        let svd = m.clone().svd(true, false);
        let u = svd.u.expect("requested U");
        let max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        if max == 0.0 {
            return Self::empty(d);
        }
        let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > tol * max).collect();
        let mut basis = DMatrix::zeros(d, keep.len());
        for (c, &i) in keep.iter().enumerate() {
            basis.set_column(c, &u.column(i));
        }
        SubspaceBasis { basis }
    }

    pub fn from_vectors(d: usize, vectors: &[DVector<f64>], tol: f64) -> Self {
        if vectors.is_empty() {
            return Self::empty(d);
        }
        Self::from_columns(&DMatrix::from_columns(vectors), tol)
    }

    pub fn span_of(parts: &[&SubspaceBasis], tol: f64) -> Self {
        let d = parts.first().map_or(0, |p| p.ambient_dim());
        let cols: Vec<DVector<f64>> =
            parts.iter().flat_map(|p| p.basis.column_iter().map(|c| c.into_owned())).collect();
        Self::from_vectors(d, &cols, tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<DVector<f64>> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.basis * (self.basis.transpose() * v)
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Largest residual over the basis of `other`; the sine of the largest
    /// principal angle when `other` is not larger than `self`.
    pub fn containment_residual(&self, other: &SubspaceBasis) -> f64 {
        other.basis.column_iter().map(|c| self.residual(&c.into_owned())).fold(0.0, f64::max)
    }

    pub fn contains(&self, other: &SubspaceBasis, tol: f64) -> bool {
        self.containment_residual(other) <= tol
    }

    /// Sine of the largest principal angle; 1 when dimensions differ.
    pub fn max_principal_sine(&self, other: &SubspaceBasis) -> f64 {
        if self.dim() != other.dim() {
            return 1.0;
        }
        self.containment_residual(other).max(other.containment_residual(self))
    }

    /// Image under a linear map given in coordinates.
    pub fn map(&self, a: &DMatrix<f64>, tol: f64) -> SubspaceBasis {
        SubspaceBasis::from_columns(&(a * &self.basis), tol)
    }

    /// Orthogonal complement in the ambient space.
    pub fn complement(&self) -> SubspaceBasis {
        let d = self.ambient_dim();
        let p = DMatrix::identity(d, d) - &self.basis * self.basis.transpose();
        SubspaceBasis::from_columns(&p, 1e-6)
    }
}

/// Two Frobenius-orthonormal skew matrices spanning the real root plane of
/// `alpha`, on which `ad(H)` rotates by `α(H)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSpaceBasis {
    pub alpha: Root,
    pub basis: [AlgebraElement; 2],
}

/// Numerically computed root-space decomposition of so(2n+1).
#[derive(Clone, Debug)]
pub struct RootFrame {
    n: usize,
    roots: Vec<Root>,
    planes: Vec<[DVector<f64>; 2]>,
    torus: Vec<DVector<f64>>,
    generic: Vec<f64>,
}

const GOLDEN_CONSTANT: f64 = 0.7390851332;
const PRIMES: [f64; 16] = [2., 3., 5., 7., 11., 13., 17., 19., 23., 29., 31., 37., 41., 43., 47., 53.];

/// Smallest pairwise gap between the values `|α(H)|` (and their distance to
/// zero) over positive roots.
fn separation(roots: &[Root], theta: &[f64]) -> f64 {
    let mut vals: Vec<f64> = roots.iter().map(|r| r.evaluate_real(theta).abs()).collect();
    vals.push(0.0);
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    vals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

impl RootFrame {
    pub const MAX_RANK: usize = PRIMES.len();

    pub fn new(n: usize) -> Result<Self> {
        if !(2..=Self::MAX_RANK).contains(&n) {
            return Err(Error::InvalidRank { rank: n, min: 2, max: Self::MAX_RANK });
        }
        let roots = positive_roots_unchecked(n);
        for attempt in 0..8 {
            let c = GOLDEN_CONSTANT * (1.0 + 0.0137 * attempt as f64);
            let theta: Vec<f64> = (0..n).map(|j| c * libm::sqrt(PRIMES[j])).collect();
            if separation(&roots, &theta) < 1e-6 {
                continue;
            }
            if let Some(frame) = Self::build(n, &roots, theta) {
                return Ok(frame);
            }
        }
        Err(Error::SpectralSeparation)
    }

    fn build(n: usize, roots: &[Root], theta: Vec<f64>) -> Option<Self> {
        let d = algebra_dim(n);
        let h = torus_algebra_element(&theta);
        let adh = ad_matrix(&h);
        let sym = -(&adh * &adh);
        let eig = SymmetricEigen::new((&sym + sym.transpose()) * 0.5);
        let gap = separation(roots, &theta);
        let mut planes = Vec::with_capacity(roots.len());
        for r in roots {
            let a = r.evaluate_real(&theta);
            let target = a * a;
            let width = 0.5 * gap * a.abs();
            let idx: Vec<usize> = (0..d).filter(|&i| (eig.eigenvalues[i] - target).abs() < width).collect();
            if idx.len() != 2 {
                return None;
            }
            let mut p = DMatrix::zeros(d, d);
            for &i in &idx {
                let v = eig.eigenvectors.column(i);
                p += v * v.transpose();
            }
            let k = (0..d).find(|&k| p.column(k).norm() > 1e-3)?;
            let b1 = p.column(k).normalize();
            let b2 = &adh * &b1 / a;
            planes.push([b1, b2]);
        }
        let torus = (0..n)
            .map(|j| {
                let mut t = alloc::vec![0.0; n];
                t[j] = 1.0;
                torus_algebra_element(&t).coordinates().normalize()
            })
            .collect();
        Some(RootFrame { n, roots: roots.to_vec(), planes, torus, generic: theta })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        algebra_dim(self.n)
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    /// The generic torus coordinates used to separate root values.
    pub fn generic_torus(&self) -> &[f64] {
        &self.generic
    }

    fn index(&self, alpha: Root) -> Result<usize> {
        let alpha = alpha.positive();
        if alpha.max_index() >= self.n {
            return Err(Error::IndexOutOfRange { index: alpha.max_index(), rank: self.n });
        }
        Ok(self.roots.iter().position(|&r| r == alpha).expect("positive root is enumerated"))
    }

    /// Coordinate vectors of the root plane of `alpha` (or `-alpha`).
    pub fn plane(&self, alpha: Root) -> Result<&[DVector<f64>; 2]> {
        Ok(&self.planes[self.index(alpha)?])
    }

    /// Unit coordinate vector of the torus generator `T_j`.
    pub fn torus_vector(&self, j: usize) -> &DVector<f64> {
        &self.torus[j]
    }

    pub fn torus_span(&self) -> SubspaceBasis {
        SubspaceBasis::from_vectors(self.ambient_dim(), &self.torus, SPAN_TOL)
    }

    pub fn root_space(&self, alpha: Root) -> Result<RootSpaceBasis> {
        let [b1, b2] = self.plane(alpha)?;
        Ok(RootSpaceBasis {
            alpha: alpha.positive(),
            basis: [AlgebraElement::from_coordinates(self.n, b1), AlgebraElement::from_coordinates(self.n, b2)],
        })
    }

    /// Span of the planes of the given roots.
    pub fn planes_span<'a, I: IntoIterator<Item = &'a Root>>(&self, roots: I) -> Result<SubspaceBasis> {
        let mut cols = Vec::new();
        for &r in roots {
            let [b1, b2] = self.plane(r)?;
            cols.push(b1.clone());
            cols.push(b2.clone());
        }
        Ok(SubspaceBasis::from_vectors(self.ambient_dim(), &cols, SPAN_TOL))
    }

    /// Roots not annihilated by the torus point with these coordinates.
    pub fn nonannihilating_roots(&self, coords: &[Angle]) -> Vec<Root> {
        self.roots.iter().copied().filter(|r| !r.evaluate(coords).is_multiple_of_two_pi()).collect()
    }

    /// `sp N_x` for the torus point with these coordinates.
    pub fn nonannihilating_span_coords(&self, coords: &[Angle]) -> Result<SubspaceBasis> {
        check_rank(self.n, coords.len())?;
        self.planes_span(&self.nonannihilating_roots(coords))
    }

    pub fn nonannihilating_span(&self, x: &TorusElement) -> Result<SubspaceBasis> {
        self.nonannihilating_span_coords(&x.coordinates())
    }

    /// `Ad(g) sp N_x`.
    pub fn tangent_space(&self, x: &TorusElement, g: &GroupElement) -> Result<SubspaceBasis> {
        check_rank(self.n, g.rank())?;
        Ok(self.nonannihilating_span(x)?.map(&adjoint_matrix(g), SPAN_TOL))
    }

    /// Planes of the non-annihilated roots involving the coordinate removed
    /// by reduction, with that coordinate moved to the front.
    pub fn omega_span(&self, x: &TorusElement) -> Result<SubspaceBasis> {
        check_rank(self.n, x.rank())?;
        let coords = crate::eligibility::reduction_coordinates(x)?;
        let roots: Vec<Root> = self.nonannihilating_roots(&coords).into_iter().filter(|r| r.involves(0)).collect();
        self.planes_span(&roots)
    }

    /// Planes of every root involving the first coordinate.
    pub fn omega_full(&self) -> SubspaceBasis {
        let roots: Vec<Root> = self.roots.iter().copied().filter(|r| r.involves(0)).collect();
        self.planes_span(&roots).expect("roots of this rank")
    }

    /// Embedded `g_{n-1}`: everything not touching the first torus block.
    pub fn embedded_subalgebra(&self) -> SubspaceBasis {
        let d = self.ambient_dim();
        let s = matrix_size(self.n);
        let mut cols = Vec::new();
        let mut k = 0;
        for i in 0..s {
            for _ in i + 1..s {
                if i >= 2 {
                    let mut e = DVector::zeros(d);
                    e[k] = 1.0;
                    cols.push(e);
                }
                k += 1;
            }
        }
        SubspaceBasis::from_vectors(d, &cols, SPAN_TOL)
    }
}

/// Image of `I - Ad(x̂)` on so(2n+1). Equals `sp N_x` and gives a route to
/// the tangent space independent of the root planes.
pub fn image_of_one_minus_ad(x: &GroupElement, tol: f64) -> SubspaceBasis {
    let d = algebra_dim(x.rank());
    SubspaceBasis::from_columns(&(DMatrix::identity(d, d) - adjoint_matrix(x)), tol)
}

/// Places a rank `n-1` element in the lower-right block.
pub fn embed(y: &AlgebraElement) -> AlgebraElement {
    let s = y.m.nrows();
    let mut m = DMatrix::zeros(s + 2, s + 2);
    m.view_mut((2, 2), (s, s)).copy_from(&y.m);
    AlgebraElement { n: y.n + 1, m }
}

pub fn embed_group(g: &GroupElement) -> GroupElement {
    let s = g.m.nrows();
    let mut m = DMatrix::identity(s + 2, s + 2);
    m.view_mut((2, 2), (s, s)).copy_from(&g.m);
    GroupElement { n: g.n + 1, m }
}

/// Haar-distributed element of SO(2n+1): QR of a Gaussian matrix with the
/// signs of `R`'s diagonal moved into `Q`, then one column negated when the
/// determinant is -1.
pub fn haar_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GroupElement {
    let s = matrix_size(n);
    let a = DMatrix::from_fn(s, s, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..s {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    GroupElement { n, m: q }
}

/// Result of checking the bracket relations between root planes.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketReport {
    pub rank: usize,
    pub pairs_checked: usize,
    /// Largest component of `[V_α, V_β]` outside the planes of `α ± β` (and
    /// the torus when `α = β`).
    pub max_residual: f64,
    /// Smallest component that must be nonzero.
    pub min_asserted: f64,
    pub asserted_components: usize,
    pub failures: Vec<BracketFailure>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketFailure {
    pub alpha: Root,
    pub beta: Root,
    pub residual: f64,
    pub min_component: f64,
}

impl BracketReport {
    pub fn passed(&self, residual_tol: f64, nonzero_tol: f64) -> bool {
        self.max_residual < residual_tol && self.min_asserted > nonzero_tol
    }
}

fn root_sum(a: Root, b: Root, n: usize, sign: i64) -> Option<Root> {
    let ca = a.coefficients(n);
    let cb = b.coefficients(n);
    let c: Vec<i64> = ca.iter().zip(&cb).map(|(x, y)| x + sign * y).collect();
    Root::from_coefficients(&c)
}

/// Checks `[V_α, V_β] ⊆ V_{α+β} + V_{α-β}` (plus the torus when `α = β`)
/// for every ordered pair of positive roots, and that the component in
/// each summand that is a root (or the torus) does not vanish.
pub fn weyl_bracket_check(frame: &RootFrame) -> BracketReport {
    let n = frame.rank();
    let d = frame.ambient_dim();
    let torus = frame.torus_span();
    let mut report = BracketReport {
        rank: n,
        pairs_checked: 0,
        max_residual: 0.0,
        min_asserted: f64::INFINITY,
        asserted_components: 0,
        failures: Vec::new(),
    };
    let elements: Vec<[AlgebraElement; 2]> =
        frame.roots().iter().map(|&r| frame.root_space(r).expect("enumerated root").basis).collect();
    for (ia, &a) in frame.roots().iter().enumerate() {
        for (ib, &b) in frame.roots().iter().enumerate() {
            let brackets: Vec<DVector<f64>> = elements[ia]
                .iter()
                .flat_map(|x| elements[ib].iter().map(move |y| ad(x, y).expect("same rank").coordinates()))
                .collect();
            let mut targets: Vec<SubspaceBasis> = Vec::new();
            for sign in [1, -1] {
                if let Some(g) = root_sum(a, b, n, sign) {
                    targets.push(frame.planes_span(&[g]).expect("root of this rank"));
                }
            }
            if a == b {
                targets.push(torus.clone());
            }
            let refs: Vec<&SubspaceBasis> = targets.iter().collect();
            let total = if refs.is_empty() { SubspaceBasis::empty(d) } else { SubspaceBasis::span_of(&refs, SPAN_TOL) };
            let residual = brackets.iter().map(|v| total.residual(v)).fold(0.0, f64::max);
            let mut min_component = f64::INFINITY;
            for t in &targets {
                let comp = libm::sqrt(brackets.iter().map(|v| t.project(v).norm_squared()).sum::<f64>());
                min_component = min_component.min(comp);
                report.asserted_components += 1;
            }
            report.pairs_checked += 1;
            report.max_residual = report.max_residual.max(residual);
            report.min_asserted = report.min_asserted.min(min_component);
            if residual >= 1e-8 || min_component <= 1e-10 {
                report.failures.push(BracketFailure { alpha: a, beta: b, residual, min_component });
            }
        }
    }
    report
}

/// Closed-form coordinate vectors of the root plane of a positive root,
/// for checking the numerical construction.
pub fn closed_form_plane(n: usize, alpha: Root) -> [DVector<f64>; 2] {
    let s = matrix_size(n);
    let unit = |pairs: &[(usize, usize, f64)]| {
        let mut m = DMatrix::zeros(s, s);
        for &(i, j, v) in pairs {
            m[(i, j)] += v;
            m[(j, i)] -= v;
        }
        let c = skew_coordinates(&m);
        c.normalize()
    };
    let last = 2 * n;
    match alpha.positive().kind() {
        RootKind::Short(k) => [unit(&[(2 * k, last, 1.0)]), unit(&[(2 * k + 1, last, 1.0)])],
        RootKind::Diff(i, j) => [
            unit(&[(2 * i, 2 * j, 1.0), (2 * i + 1, 2 * j + 1, 1.0)]),
            unit(&[(2 * i, 2 * j + 1, 1.0), (2 * i + 1, 2 * j, -1.0)]),
        ],
        RootKind::Sum(i, j) => [
            unit(&[(2 * i, 2 * j, 1.0), (2 * i + 1, 2 * j + 1, -1.0)]),
            unit(&[(2 * i, 2 * j + 1, 1.0), (2 * i + 1, 2 * j, 1.0)]),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{conjugacy_class_dim, ElementType};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(u: usize, v: usize, parts: &[usize]) -> TorusElement {
        ElementType::new(u, v, parts.to_vec()).canonical_element()
    }

    #[test]
    fn coordinates_round_trip_and_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = AlgebraElement::random(3, &mut rng);
        let c = y.coordinates();
        assert_eq!(c.len(), 21);
        assert!((c.norm() - y.norm()).abs() < 1e-12);
        assert_eq!(AlgebraElement::from_coordinates(3, &c), y);
    }

    #[test]
    fn validation() {
        assert!(matches!(AlgebraElement::new(DMatrix::identity(5, 5)), Err(Error::NotSkew(_))));
        assert!(matches!(AlgebraElement::new(DMatrix::zeros(4, 4)), Err(Error::BadShape { .. })));
        let mut m = DMatrix::identity(5, 5);
        m[(0, 0)] = -1.0;
        assert!(matches!(GroupElement::new(m), Err(Error::NotSpecialOrthogonal(_))));
        assert!(matches!(
            adjoint(&GroupElement::identity(2), &AlgebraElement::zero(3)),
            Err(Error::RankMismatch(2, 3))
        ));
    }

    #[test]
    fn torus_matrix_eigenvalues() {
        let x = el(0, 2, &[]);
        let m = torus_matrix(&x);
        let eig = m.matrix().clone().complex_eigenvalues();
        assert_eq!(eig.iter().filter(|z| (z.re + 1.0).abs() < 1e-12 && z.im.abs() < 1e-12).count(), 4);
        let y = TorusElement::new(1, 0, alloc::vec![crate::AngleGroup { angle: Angle::new(1, 3).unwrap(), mult: 1 }])
            .unwrap();
        let eig = torus_matrix(&y).matrix().clone().complex_eigenvalues();
        let ones = eig.iter().filter(|z| (z.re - 1.0).abs() < 1e-12 && z.im.abs() < 1e-12).count();
        let rot = eig
            .iter()
            .filter(|z| (z.re - 0.5).abs() < 1e-12 && (z.im.abs() - libm::sqrt(3.0) / 2.0).abs() < 1e-12)
            .count();
        assert_eq!((ones, rot), (3, 2));
        assert_eq!(torus_matrix(&TorusElement::identity(3)), GroupElement::identity(3));
    }

    #[test]
    fn exp_inverts_and_matches_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let y = AlgebraElement::random(2, &mut rng);
            let p = exp_alg(&y).matrix() * exp_alg(&y.scale(-1.0)).matrix();
            assert!((p - DMatrix::identity(5, 5)).norm() < 1e-10);
        }
        for n in 2..=4 {
            for t in ElementType::enumerate(n) {
                let x = t.canonical_element();
                let diff = exp_alg(&lift(&x)).matrix() - torus_matrix(&x).matrix();
                assert!(diff.norm() < 1e-10, "{t}");
            }
        }
        let g = exp_alg(&torus_algebra_element(&[0.3, 0.0]));
        assert!((g.matrix()[(0, 0)] - libm::cos(0.3)).abs() < 1e-14);
        assert!((g.matrix()[(1, 0)] - libm::sin(0.3)).abs() < 1e-14);
        assert!(GroupElement::new(g.matrix().clone()).is_ok());
    }

    #[test]
    fn adjoint_of_exp_is_exp_of_ad() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let m = AlgebraElement::random(2, &mut rng);
            let m = m.scale(0.9 / m.norm());
            let lhs = adjoint_matrix(&exp_alg(&m));
            let a = ad_matrix(&m);
            let mut series = DMatrix::identity(10, 10);
            let mut term = DMatrix::identity(10, 10);
            let mut k = 1;
            while term.norm() >= 1e-14 {
                term = &term * &a / k as f64;
                series += &term;
                k += 1;
            }
            assert!((lhs - series).norm() < 1e-10);
        }
    }

    #[test]
    fn brackets_are_a_lie_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let (x, y, z) = (
                AlgebraElement::random(3, &mut rng),
                AlgebraElement::random(3, &mut rng),
                AlgebraElement::random(3, &mut rng),
            );
            let br = |a: &AlgebraElement, b: &AlgebraElement| ad(a, b).unwrap();
            let jacobi = br(&x, &br(&y, &z)).matrix() + br(&y, &br(&z, &x)).matrix() + br(&z, &br(&x, &y)).matrix();
            assert!(jacobi.norm() < 1e-10);
            assert!((br(&x, &y).matrix() + br(&y, &x).matrix()).norm() < 1e-12);
            assert!(br(&x, &x).norm() == 0.0);
            let g = haar_sample(3, &mut rng);
            assert!((adjoint(&g, &x).unwrap().norm() - x.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_samples_are_special_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=4 {
            for _ in 0..20 {
                let g = haar_sample(n, &mut rng);
                assert!(GroupElement::new(g.matrix().clone()).is_ok());
            }
        }
    }

    #[test]
    fn root_planes_match_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 2..=5 {
            let frame = RootFrame::new(n).unwrap();
            let d = algebra_dim(n);
            let mut all = Vec::new();
            for &r in frame.roots() {
                let [b1, b2] = frame.plane(r).unwrap();
                assert!((b1.norm() - 1.0).abs() < 1e-10 && (b2.norm() - 1.0).abs() < 1e-10);
                assert!(b1.dot(b2).abs() < 1e-10);
                let numeric = SubspaceBasis::from_vectors(d, &[b1.clone(), b2.clone()], SPAN_TOL);
                let closed = closed_form_plane(n, r);
                let exact = SubspaceBasis::from_vectors(d, &closed, SPAN_TOL);
                assert!(numeric.max_principal_sine(&exact) < 1e-8, "{r}");
                let theta: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                let adh = ad_matrix(&torus_algebra_element(&theta));
                let a = r.evaluate_real(&theta);
                for b in [b1, b2] {
                    assert!((&adh * &(&adh * b) + b * (a * a)).norm() < 1e-8);
                }
                // ad(H) acts on (b1, b2) as rotation by α(H).
                let img = &adh * b1;
                assert!((img.dot(b1)).abs() < 1e-8 && (img.dot(b2).abs() - a.abs()).abs() < 1e-8);
                all.push(b1.clone());
                all.push(b2.clone());
            }
            for j in 0..n {
                all.push(frame.torus_vector(j).clone());
            }
            assert_eq!(all.len(), d);
            assert_eq!(numerical_rank(&DMatrix::from_columns(&all), 1e-8), d);
        }
    }

    #[test]
    fn brackets_respect_grading() {
        for n in 2..=3 {
            let report = weyl_bracket_check(&RootFrame::new(n).unwrap());
            assert!(report.passed(1e-8, 1e-10), "{report:?}");
            assert_eq!(report.pairs_checked, n * n * n * n);
        }
        let frame = RootFrame::new(2).unwrap();
        let [x, y] = frame.root_space(Root::short(0)).unwrap().basis;
        let t = ad(&x, &y).unwrap().coordinates();
        assert!(frame.torus_span().residual(&t) < 1e-10 && t.norm() > 1e-3);
    }

    #[test]
    fn tangent_spans_have_class_dimension() {
        for n in 2..=4 {
            let frame = RootFrame::new(n).unwrap();
            for t in ElementType::enumerate(n) {
                let x = t.canonical_element();
                let span = frame.nonannihilating_span(&x).unwrap();
                let other = image_of_one_minus_ad(&torus_matrix(&x), SPAN_TOL);
                assert_eq!(span.dim(), conjugacy_class_dim(&x), "{t}");
                assert!(span.max_principal_sine(&other) < 1e-8, "{t}");
            }
        }
        let frame = RootFrame::new(3).unwrap();
        assert_eq!(frame.nonannihilating_span(&el(0, 0, &[1, 1, 1])).unwrap().dim(), 18);
        assert_eq!(frame.nonannihilating_span(&TorusElement::identity(3)).unwrap().dim(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let frame = RootFrame::new(2).unwrap();
        for _ in 0..20 {
            let g = haar_sample(2, &mut rng);
            assert_eq!(frame.tangent_space(&el(0, 2, &[]), &g).unwrap().dim(), 4);
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let a = AlgebraElement::random(2, &mut rng);
            let b = AlgebraElement::random(2, &mut rng);
            let lhs = embed(&ad(&a, &b).unwrap());
            let rhs = ad(&embed(&a), &embed(&b)).unwrap();
            assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-12);
            let e = exp_alg(&embed(&a)).matrix() - embed_group(&exp_alg(&a)).matrix();
            assert!(e.norm() < 1e-10);
        }
        assert_eq!(embed(&AlgebraElement::zero(2)), AlgebraElement::zero(3));
        let small = RootFrame::new(2).unwrap();
        let big = RootFrame::new(3).unwrap();
        for &r in small.roots() {
            let shifted = Root::from_coefficients(&[&[0][..], &r.coefficients(2)[..]].concat()).unwrap();
            let [b1, b2] = small.plane(r).unwrap();
            let img: Vec<DVector<f64>> =
                [b1, b2].iter().map(|b| embed(&AlgebraElement::from_coordinates(2, b)).coordinates()).collect();
            let span = SubspaceBasis::from_vectors(21, &img, SPAN_TOL);
            assert!(span.max_principal_sine(&big.planes_span(&[shifted]).unwrap()) < 1e-8);
        }
    }

    #[test]
    fn omega_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 3..=5 {
            let frame = RootFrame::new(n).unwrap();
            let sub = frame.embedded_subalgebra();
            assert_eq!(sub.dim(), algebra_dim(n - 1));
            let full = frame.omega_full();
            assert_eq!(full.dim(), 4 * n - 2);
            for t in ElementType::enumerate_non_central(n) {
                let x = t.canonical_element();
                let omega = frame.omega_span(&x).unwrap();
                let xr = crate::eligibility::reduce(&x).unwrap();
                assert_eq!(omega.dim(), conjugacy_class_dim(&x) - conjugacy_class_dim(&xr), "{t}");
                assert!(full.contains(&omega, 1e-8));
            }
            // sp Ω is invariant under the embedded subalgebra.
            let h = embed(&AlgebraElement::random(n - 1, &mut rng));
            let mapped = full.map(&ad_matrix(&h), SPAN_TOL);
            assert!(full.contains(&mapped, 1e-8));
        }
        let frame = RootFrame::new(3).unwrap();
        assert!(frame.omega_span(&TorusElement::identity(3)).is_err());
    }
}
