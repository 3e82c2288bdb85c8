//! Labelled vector spaces and exact linear algebra over [`Scalar`].
//!
//! Everything structural here is exact: matrices hold rational-function
//! entries, kernels and images are computed by exact elimination over the
//! scalar field, and tensor products follow the row-major Kronecker
//! convention, so `(A ⊗ B)(v ⊗ w)` indexes the product basis as
//! `i = i_A * dim_B + i_B`.
//!
//! Floating point enters only at the very end, through
//! [`eig_sym_float`] / [`psd_check`]: an operator is evaluated at a rational
//! value of `mu = q^2` (exactly, up to one final square root) and its
//! spectrum is computed numerically.  Operators that are Hermitian only with
//! respect to a weighted scalar product are handled by passing the
//! corresponding [`HermitianForm`]; the plain case uses
//! [`HermitianForm::standard`].

use crate::scalars::Scalar;
use crate::{Error, Report};
use nalgebra::DMatrix;
use num::complex::Complex64;
use num::BigRational;
use serde::ser::SerializeStruct;

/// A finite-dimensional vector space with an ordered, labelled basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    basis: Vec<String>,
}

impl Space {
    /// Creates a space from its basis tags.  Tags must be unique.
    pub fn new(basis: Vec<String>) -> Space {
        for (i, a) in basis.iter().enumerate() {
            for b in basis.iter().skip(i + 1) {
                assert_ne!(a, b, "basis tags must be unique");
            }
        }
        Space { basis }
    }

    /// Convenience constructor from string slices.
    pub fn from_tags(tags: &[&str]) -> Space {
        Space::new(tags.iter().map(|s| s.to_string()).collect())
    }

    /// The dimension (= number of basis tags).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The ordered basis tags.
    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    /// Tensor product space, with row-major product tags `a⊗b`.
    pub fn tensor(&self, o: &Space) -> Space {
        let mut basis = Vec::with_capacity(self.dim() * o.dim());
        for a in &self.basis {
            for b in &o.basis {
                basis.push(format!("{a}⊗{b}"));
            }
        }
        Space { basis }
    }

    /// The `n`-fold tensor power (the 0-th power is a line spanned by `1`).
    pub fn tensor_power(&self, n: usize) -> Space {
        let mut s = Space::from_tags(&["1"]);
        for _ in 0..n {
            s = s.tensor(self);
        }
        if n > 0 {
            // strip the leading "1⊗" introduced by the seed line
            let basis = s
                .basis
                .iter()
                .map(|t| t.strip_prefix("1⊗").unwrap_or(t).to_string())
                .collect();
            s = Space { basis };
        }
        s
    }
}

impl serde::Serialize for Space {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Space", 2)?;
        st.serialize_field("dimension", &self.dim())?;
        st.serialize_field("basis", &self.basis)?;
        st.end()
    }
}

/// A dense matrix of exact scalars, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    /// The zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix entry-by-entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from rows (all rows must have equal length).
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Entry at `(r, c)`.
    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    /// Overwrites the entry at `(r, c)`.
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// True when every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Entry-wise sum.
    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Entry-wise difference.
    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Entry-wise negation.
    pub fn neg(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    /// Multiplies every entry by `s`.
    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Matrix product.
    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "inner dimensions must match");
        let mut out = Mat::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(r, c) + a * b;
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Kronecker product in the row-major convention.
    pub fn kron(&self, o: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * o.rows, self.cols * o.cols);
        for ra in 0..self.rows {
            for ca in 0..self.cols {
                let a = self.at(ra, ca);
                if a.is_zero() {
                    continue;
                }
                for rb in 0..o.rows {
                    for cb in 0..o.cols {
                        let b = o.at(rb, cb);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(ra * o.rows + rb, ca * o.cols + cb, a * b);
                    }
                }
            }
        }
        out
    }

    /// Transpose.
    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    /// Entry-wise scalar conjugation (`i -> -i`, `q` fixed).
    pub fn conj_entries(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Mat {
        self.conj_entries().transpose()
    }

    /// Applies the matrix to a coordinate vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for c in 0..self.cols {
                    if !self.at(r, c).is_zero() && !v[c].is_zero() {
                        acc += self.at(r, c) * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }

    /// Float evaluation at a rational `mu = q^2`.
    pub fn eval_at_mu(&self, mu0: &BigRational) -> Result<DMatrix<Complex64>, Error> {
        let mut out = DMatrix::from_element(self.rows, self.cols, Complex64::new(0.0, 0.0));
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self.at(r, c).eval_at_mu(mu0)?;
            }
        }
        Ok(out)
    }

    /// Entrywise exact substitution `mu := mu0` (see
    /// [`Scalar::specialize_mu`]): the same matrix with every entry replaced
    /// by its exact value at the given deformation parameter.
    pub fn specialize_mu(&self, mu0: &BigRational) -> Result<Mat, Error> {
        let mut out = Mat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c).specialize_mu(mu0)?);
            }
        }
        Ok(out)
    }

    /// Exact reduced row echelon form; returns the reduced matrix and the
    /// pivot column indices.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.at(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a.at(r, c).inv();
            for j in c..a.cols {
                let v = a.at(r, j) * &inv;
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.at(i, c).is_zero() {
                    continue;
                }
                let f = a.at(i, c).clone();
                for j in c..a.cols {
                    let v = a.at(i, j) - &f * a.at(r, j);
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Rank over the scalar field.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact basis of the null space.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut piv_of_col = vec![None; self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            piv_of_col[col] = Some(row);
        }
        for free in 0..self.cols {
            if piv_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (col, piv) in piv_of_col.iter().enumerate() {
                if let Some(row) = piv {
                    v[col] = -r.at(*row, free);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Exact basis of the column space: the pivot columns of the original
    /// matrix.
    pub fn image(&self) -> Vec<Vec<Scalar>> {
        let (_, pivots) = self.rref();
        pivots
            .iter()
            .map(|&c| (0..self.rows).map(|r| self.at(r, c).clone()).collect())
            .collect()
    }

    /// Exact inverse, if the matrix is square and invertible.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Mat::from_fn(n, n, |r, c| red.at(r, n + c).clone()))
    }

    /// Solves `self * x = b` exactly; free variables are set to zero.
    /// Returns `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last().is_some_and(|&c| c == self.cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = red.at(row, self.cols).clone();
        }
        Some(x)
    }
}

/// A generalized permutation matrix: each column has at most one nonzero
/// entry.  Braidings of diagonal type (and all their permutation lifts) have
/// this shape, which makes long products cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenPerm {
    dim: usize,
    /// `to_row[j]` is the row of the single nonzero entry of column `j`.
    to_row: Vec<usize>,
    /// `coeff[j]` is that entry.
    coeff: Vec<Scalar>,
}

impl GenPerm {
    /// The identity.
    pub fn identity(dim: usize) -> GenPerm {
        GenPerm {
            dim,
            to_row: (0..dim).collect(),
            coeff: vec![Scalar::one(); dim],
        }
    }

    /// Detects the generalized-permutation shape of a square matrix.
    pub fn from_mat(m: &Mat) -> Option<GenPerm> {
        if m.nrows() != m.ncols() {
            return None;
        }
        let dim = m.ncols();
        let mut to_row = Vec::with_capacity(dim);
        let mut coeff = Vec::with_capacity(dim);
        for c in 0..dim {
            let mut hit = None;
            for r in 0..dim {
                if !m.at(r, c).is_zero() {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(r);
                }
            }
            let r = hit?; // a zero column is not invertible: give up
            to_row.push(r);
            coeff.push(m.at(r, c).clone());
        }
        Some(GenPerm { dim, to_row, coeff })
    }

    /// Dense form.
    pub fn to_mat(&self) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            m.set(self.to_row[j], j, self.coeff[j].clone());
        }
        m
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GenPerm) -> GenPerm {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut to_row = Vec::with_capacity(self.dim);
        let mut coeff = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mid = other.to_row[j];
            to_row.push(self.to_row[mid]);
            coeff.push(&other.coeff[j] * &self.coeff[mid]);
        }
        GenPerm {
            dim: self.dim,
            to_row,
            coeff,
        }
    }

    /// Kronecker product, row-major convention.
    pub fn kron(&self, other: &GenPerm) -> GenPerm {
        let dim = self.dim * other.dim;
        let mut to_row = Vec::with_capacity(dim);
        let mut coeff = Vec::with_capacity(dim);
        for ja in 0..self.dim {
            for jb in 0..other.dim {
                to_row.push(self.to_row[ja] * other.dim + other.to_row[jb]);
                coeff.push(&self.coeff[ja] * &other.coeff[jb]);
            }
        }
        GenPerm { dim, to_row, coeff }
    }

    /// Accumulates `sign * self` into a dense matrix.
    pub fn add_into(&self, acc: &mut Mat, sign: &Scalar) {
        for j in 0..self.dim {
            let v = acc.at(self.to_row[j], j) + sign * &self.coeff[j];
            acc.set(self.to_row[j], j, v);
        }
    }
}

/// A linear map between labelled spaces, with an exact matrix in the
/// codomain×domain convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    /// Source space.
    pub domain: Space,
    /// Target space.
    pub codomain: Space,
    /// `codomain.dim() × domain.dim()` matrix of scalars.
    pub mat: Mat,
}

impl Operator {
    /// Wraps a matrix as an operator; shapes must match the spaces.
    pub fn new(domain: Space, codomain: Space, mat: Mat) -> Operator {
        assert_eq!(mat.nrows(), codomain.dim(), "row count != codomain dim");
        assert_eq!(mat.ncols(), domain.dim(), "col count != domain dim");
        Operator {
            domain,
            codomain,
            mat,
        }
    }

    /// Identity on a space.
    pub fn identity(space: &Space) -> Operator {
        Operator::new(space.clone(), space.clone(), Mat::identity(space.dim()))
    }

    /// Zero map between two spaces.
    pub fn zero(domain: &Space, codomain: &Space) -> Operator {
        Operator::new(
            domain.clone(),
            codomain.clone(),
            Mat::zeros(codomain.dim(), domain.dim()),
        )
    }

    /// Composition `self ∘ other` (apply `other` first).  Defined only when
    /// `other.codomain` equals `self.domain`.
    pub fn compose(&self, other: &Operator) -> Operator {
        assert_eq!(
            other.codomain, self.domain,
            "composition needs matching spaces"
        );
        Operator::new(
            other.domain.clone(),
            self.codomain.clone(),
            self.mat.mul(&other.mat),
        )
    }

    /// Sum of two parallel operators.
    pub fn add(&self, o: &Operator) -> Operator {
        assert_eq!(self.domain, o.domain);
        assert_eq!(self.codomain, o.codomain);
        Operator::new(
            self.domain.clone(),
            self.codomain.clone(),
            self.mat.add(&o.mat),
        )
    }

    /// Difference of two parallel operators.
    pub fn sub(&self, o: &Operator) -> Operator {
        assert_eq!(self.domain, o.domain);
        assert_eq!(self.codomain, o.codomain);
        Operator::new(
            self.domain.clone(),
            self.codomain.clone(),
            self.mat.sub(&o.mat),
        )
    }

    /// Scalar multiple.
    pub fn scale(&self, s: &Scalar) -> Operator {
        Operator::new(
            self.domain.clone(),
            self.codomain.clone(),
            self.mat.scale(s),
        )
    }

    /// Plain conjugate-transpose (adjoint for the standard form).
    pub fn dagger(&self) -> Operator {
        Operator::new(
            self.codomain.clone(),
            self.domain.clone(),
            self.mat.dagger(),
        )
    }

    /// Applies the operator to a coordinate vector of the domain.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.mat.apply(v)
    }

    /// True when the underlying matrix is zero.
    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }
}

/// Kronecker product of operators, row-major basis order of product tags.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator::new(
        a.domain.tensor(&b.domain),
        a.codomain.tensor(&b.codomain),
        a.mat.kron(&b.mat),
    )
}

/// Exact bases of the kernel and the image of an operator.
///
/// Kernel vectors are domain coordinates, image vectors codomain
/// coordinates; `kernel.len() + image.len() == domain.dim()` always holds.
pub fn kernel_image(a: &Operator) -> (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>) {
    (a.mat.kernel(), a.mat.image())
}

/// A sesquilinear scalar product on a space, given by its Gram matrix
/// (antilinear in the first argument): `⟨x, y⟩ = xᴴ G y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    /// The carrier space.
    pub space: Space,
    /// Exact Gram matrix; equals its conjugate transpose.
    pub gram: Mat,
}

impl HermitianForm {
    /// Builds a form, checking the Hermitian symmetry of the Gram matrix.
    pub fn new(space: Space, gram: Mat) -> HermitianForm {
        assert_eq!(gram.nrows(), space.dim());
        assert_eq!(gram.ncols(), space.dim());
        assert_eq!(gram, gram.dagger(), "Gram matrix must be Hermitian");
        HermitianForm { space, gram }
    }

    /// The standard form (identity Gram; the plain scalar product).
    pub fn standard(space: &Space) -> HermitianForm {
        HermitianForm {
            space: space.clone(),
            gram: Mat::identity(space.dim()),
        }
    }

    /// A diagonal form with the given weights.
    pub fn diagonal(space: &Space, weights: Vec<Scalar>) -> HermitianForm {
        assert_eq!(weights.len(), space.dim());
        let n = weights.len();
        let mut gram = Mat::zeros(n, n);
        for (i, w) in weights.into_iter().enumerate() {
            gram.set(i, i, w);
        }
        HermitianForm::new(space.clone(), gram)
    }

    /// Exact pairing `⟨x, y⟩` of two coordinate vectors.
    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let gy = self.gram.apply(y);
        x.iter()
            .zip(gy)
            .map(|(xi, gyi)| xi.conj() * gyi)
            .sum()
    }
}

/// Exact adjoint of `a` with respect to forms on its domain and codomain:
/// the unique operator with `⟨a x, y⟩_cod = ⟨x, adjoint(a) y⟩_dom`.
pub fn adjoint_wrt(a: &Operator, dom: &HermitianForm, cod: &HermitianForm) -> Operator {
    assert_eq!(a.domain, dom.space);
    assert_eq!(a.codomain, cod.space);
    let gd_inv = dom
        .gram
        .inverse()
        .expect("domain Gram matrix must be invertible");
    Operator::new(
        cod.space.clone(),
        dom.space.clone(),
        gd_inv.mul(&a.mat.dagger()).mul(&cod.gram),
    )
}

fn hermitian_square_roots(
    w: &DMatrix<Complex64>,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>), Error> {
    let eig = nalgebra::linalg::SymmetricEigen::new(w.clone());
    for &v in eig.eigenvalues.iter() {
        if v <= 1e-12 {
            return Err(Error::Domain {
                detail: format!("form is not positive definite (eigenvalue {v:.3e})"),
            });
        }
    }
    let u = &eig.eigenvectors;
    let mk = |f: fn(f64) -> f64| {
        let d = DMatrix::from_fn(w.nrows(), w.ncols(), |r, c| {
            if r == c {
                Complex64::new(f(eig.eigenvalues[r]), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        u * d * u.adjoint()
    };
    Ok((mk(f64::sqrt), mk(|x| 1.0 / x.sqrt())))
}

/// Float spectrum of an operator that is Hermitian with respect to `form`,
/// evaluated at a rational `mu = q^2`.
///
/// The operator is conjugated into the standard form via `W^{1/2} A W^{-1/2}`
/// (with `W` the evaluated Gram matrix), which must be Hermitian within
/// `1e-10`; otherwise the contract violation is reported.  Eigenvalues are
/// returned in ascending order (with multiplicity), which makes downstream
/// output deterministic.
pub fn eig_sym_float(
    a: &Operator,
    mu0: &BigRational,
    form: &HermitianForm,
) -> Result<Vec<f64>, Error> {
    if a.domain != a.codomain || a.domain != form.space {
        return Err(Error::Shape {
            detail: "eig_sym_float needs an endomorphism and a form on its space".into(),
        });
    }
    let af = a.mat.eval_at_mu(mu0)?;
    let wf = form.gram.eval_at_mu(mu0)?;
    let (ws, wsi) = hermitian_square_roots(&wf)?;
    let b = &ws * af * wsi;
    let resid = (&b - b.adjoint()).map(|z| z.norm()).max();
    if resid > 1e-10 {
        return Err(Error::NotHermitian {
            detail: format!("residual {resid:.3e} at mu = {mu0}"),
        });
    }
    let sym = (&b + b.adjoint()).map(|z| z * 0.5);
    let eig = nalgebra::linalg::SymmetricEigen::new(sym);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(vals)
}

/// Positive-semidefiniteness report for an operator that is Hermitian with
/// respect to `form` as an exact matrix: at every sample `mu`, the minimum
/// eigenvalue must be at least `-1e-10`.
pub fn psd_check(
    a: &Operator,
    samples: &[BigRational],
    form: &HermitianForm,
) -> Result<Report, Error> {
    // Exact Hermiticity with respect to the form: G A = Aᴴ G.
    let lhs = form.gram.mul(&a.mat);
    let rhs = a.mat.dagger().mul(&form.gram);
    if lhs != rhs {
        return Err(Error::NotHermitian {
            detail: "G·A != Aᴴ·G as exact matrices".into(),
        });
    }
    let mut report = Report::new();
    for mu0 in samples {
        let vals = eig_sym_float(a, mu0, form)?;
        let min = vals.first().copied().unwrap_or(0.0);
        report.push(
            format!("psd at mu={mu0}"),
            min >= -1e-10,
            format!("min eigenvalue {min:.3e}"),
        );
    }
    Ok(report)
}

/// The projector onto `im(a)` along `ker(a)` for an endomorphism whose
/// kernel and image are complementary (as is the case for operators
/// Hermitian with respect to a positive form).
pub fn projector_onto_image(a: &Operator) -> Operator {
    assert_eq!(a.domain, a.codomain, "projector needs an endomorphism");
    let (ker, im) = kernel_image(a);
    let n = a.domain.dim();
    assert_eq!(ker.len() + im.len(), n, "rank-nullity violated");
    let mut s = Mat::zeros(n, n);
    for (j, v) in im.iter().chain(ker.iter()).enumerate() {
        for (i, x) in v.iter().enumerate() {
            s.set(i, j, x.clone());
        }
    }
    let s_inv = s
        .inverse()
        .expect("kernel and image must be complementary");
    let mut d = Mat::zeros(n, n);
    for j in 0..im.len() {
        d.set(j, j, Scalar::one());
    }
    Operator::new(a.domain.clone(), a.domain.clone(), s.mul(&d).mul(&s_inv))
}

impl serde::Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut entries: Vec<(usize, usize, String)> = Vec::new();
        for r in 0..self.mat.nrows() {
            for c in 0..self.mat.ncols() {
                let v = self.mat.at(r, c);
                if !v.is_zero() {
                    entries.push((r, c, v.to_string()));
                }
            }
        }
        let mut st = s.serialize_struct("Operator", 3)?;
        st.serialize_field("domain", &self.domain)?;
        st.serialize_field("codomain", &self.codomain)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}
