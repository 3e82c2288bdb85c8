//! Braided exterior algebras and their cliffordization: the graded carrier
//! cut out by the braided antisymmetrizers, wedge and Clifford products, the
//! deconcatenation coproduct, contraction operators, the volume element with
//! its pairing, the Hodge star, and spinor representations of the resulting
//! Clifford algebra.
//!
//! # Storage convention
//!
//! The degree-`n` component of the exterior algebra is identified with
//! `im(Aⁿ) ⊆ V^⊗n`, the column span of the degree-`n` braided
//! antisymmetrizer. The identification sends the class of a tensor `a` to
//! `Aⁿ(a)`, so a *stored* vector is the antisymmetrizer image of any of its
//! representatives. Products, pairings, and contractions are the abstract
//! quotient operations transported through this identification:
//!
//! * wedge: `α ∧ β = A(R(α) ⊗ R(β))` where `R` is the partial inverse of the
//!   antisymmetrizer on its image (it recovers a canonical representative);
//! * extended metric on grades: `g_∧(α, β) = g(R(α), β)`, which descends to
//!   the quotient because the antisymmetrizers are self-adjoint for `g`;
//! * coproduct: deconcatenation of the stored tensor, whose legs land in the
//!   stored form of the lower grades automatically;
//! * contraction: `ι[x]ψ = (g ⊗ id^{n−1})(x ⊗ ψ)` directly on the stored
//!   tensor.
//!
//! # The two stars
//!
//! Every grade carries two natural antilinear involutions. The *plain* star
//! is inherited from the tensor algebra (`(ξ₁⊗…⊗ξ_n)* = ξ_n*⊗…⊗ξ₁*`); it is
//! antimultiplicative for both the wedge and the Clifford product and is the
//! star of the Clifford *-algebra. The *graded* star differs from it by
//! `(−1)^{n(n−1)/2}` on grade `n` and is the differential-form convention.
//! The scalar product `⟨α, β⟩_∧ = g_∧(α*, β)`, its positivity, and the
//! adjointness package of the Hodge star (`★† = ★`, `ι[e] = ★⁻¹(e∧·)★`,
//! `[x∧·]† = ι[x*]`) all use the plain star; the graded star governs the
//! alternative volume normalization and the sign in the conjugation rule of
//! the volume pairing. [`VolumeData`] records both normalizations.

use crate::braiding::antisymmetrizer;
use crate::linalg::Mat;
use crate::quantum_metric::{
    apply_mat, positivity, QuantumMetric, Realization, SigmaElement, SigmaMat, SigmaVec,
};
use crate::scalars::Scalar;
use crate::{Error, Report};
use num::BigRational;

/// Applies a Σ-valued matrix to a Σ-coefficient vector (Σ is commutative
/// here, so no twist bookkeeping is required at this level).
fn apply_sigma(m: &SigmaMat, v: &[SigmaElement]) -> SigmaVec {
    assert_eq!(m.ncols(), v.len(), "Σ-matrix application shape mismatch");
    (0..m.nrows())
        .map(|r| {
            let mut acc = SigmaElement::zero();
            for (c, vc) in v.iter().enumerate() {
                if !vc.is_zero() && !m.at(r, c).is_zero() {
                    acc = &acc + &(m.at(r, c) * vc);
                }
            }
            acc
        })
        .collect()
}

/// Extracts the constant (degree-zero) part of a Σ-element that must not
/// depend on the metric generator.
fn constant_of(s: &SigmaElement) -> Result<Scalar, Error> {
    if !s.is_constant() {
        return Err(Error::Domain {
            detail: format!("expected a constant Σ-element, found {s}"),
        });
    }
    Ok(s.coefficient(0))
}

/// Entry-wise equality of scalar matrices.
fn mat_eq(a: &Mat, b: &Mat) -> bool {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return false;
    }
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            if !(a.at(r, c) - b.at(r, c)).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Entry-wise equality of Σ-coefficient vectors.
fn vecs_equal(a: &[SigmaElement], b: &[SigmaElement]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).is_zero())
}

/// Greedy pivot-row selection: rows of `m` forming an invertible square
/// block, together with that block's inverse.
fn pivot_left_inverse(m: &Mat) -> Result<(Vec<usize>, Mat), Error> {
    let cols = m.ncols();
    let mut sel: Vec<usize> = Vec::new();
    for r in 0..m.nrows() {
        if sel.len() == cols {
            break;
        }
        let mut cand = sel.clone();
        cand.push(r);
        let sub = Mat::from_fn(cand.len(), cols, |i, j| m.at(cand[i], j).clone());
        if sub.rank() == cand.len() {
            sel = cand;
        }
    }
    if sel.len() != cols {
        return Err(Error::Domain {
            detail: "matrix does not have full column rank".into(),
        });
    }
    let sub = Mat::from_fn(cols, cols, |i, j| m.at(sel[i], j).clone());
    let inv = sub.inverse().ok_or_else(|| Error::Domain {
        detail: "pivot block is not invertible".into(),
    })?;
    Ok((sel, inv))
}

/// A left inverse of a full-column-rank matrix, padded with zeros off the
/// pivot rows: applying it to any vector in the column span recovers the
/// coordinates.
fn padded_left_inverse(m: &Mat) -> Result<Mat, Error> {
    let (sel, inv) = pivot_left_inverse(m)?;
    let mut fw = Mat::zeros(m.ncols(), m.nrows());
    for (k, &row) in sel.iter().enumerate() {
        for i in 0..m.ncols() {
            fw.set(i, row, inv.at(i, k).clone());
        }
    }
    Ok(fw)
}

/// Stored data for one grade of the exterior algebra.
#[derive(Clone, Debug)]
struct GradeData {
    /// The antisymmetrizer matrix `Aⁿ` on `V^⊗n` (identity for `n ≤ 1`).
    a_mat: Mat,
    /// `dⁿ × dim` basis of `im(Aⁿ)`; grade coordinates refer to its columns.
    basis: Mat,
    /// `dim × dⁿ` padded left inverse of `basis`: word vectors in the image
    /// back to grade coordinates.
    fw: Mat,
    /// Partial inverse `R` of `Aⁿ` with `Aⁿ∘R = id` on `im(Aⁿ)`; picks the
    /// canonical tensor representative of a stored element.
    r_mat: Mat,
    /// Σ-bimodule twist exponent of each basis column (uniform over the
    /// column's support by construction).
    twist_charges: Vec<i64>,
    /// Structure-group charge of each basis column — twice the twist
    /// exponent, matching how [`QuantumMetric`] stores the bimodule data.
    coaction_charges: Vec<i64>,
}

impl GradeData {
    /// Builds the grade data from an antisymmetrizer matrix; `None` when the
    /// image is zero (the grade above the top).
    fn new(metric: &QuantumMetric, n: usize, a_mat: Mat) -> Result<Option<GradeData>, Error> {
        let words = a_mat.ncols();
        let image = a_mat.image();
        if image.is_empty() {
            return Ok(None);
        }
        let dim = image.len();
        let mut basis = Mat::zeros(words, dim);
        for (c, col) in image.iter().enumerate() {
            for (r, entry) in col.iter().enumerate() {
                basis.set(r, c, entry.clone());
            }
        }
        let fw = padded_left_inverse(&basis)?;
        let ab = a_mat.mul(&basis);
        let fw_ab = padded_left_inverse(&ab).map_err(|_| Error::Domain {
            detail: format!("degree-{n} antisymmetrizer is not invertible on its image"),
        })?;
        let r_mat = basis.mul(&fw_ab);
        if !mat_eq(&a_mat.mul(&r_mat).mul(&basis), &basis) {
            return Err(Error::Domain {
                detail: format!("degree-{n} antisymmetrizer image is not a direct summand"),
            });
        }
        let mut twist_charges = Vec::with_capacity(dim);
        for c in 0..dim {
            let mut charge: Option<i64> = None;
            for r in 0..words {
                if basis.at(r, c).is_zero() {
                    continue;
                }
                let ch = metric.word_charge(&metric.word(r, n));
                match charge {
                    None => charge = Some(ch),
                    Some(c0) if c0 != ch => {
                        return Err(Error::Domain {
                            detail: format!(
                                "grade-{n} basis column {c} mixes structure-group charges"
                            ),
                        })
                    }
                    _ => {}
                }
            }
            twist_charges.push(charge.expect("image column is nonzero"));
        }
        let coaction_charges = twist_charges.iter().map(|e| 2 * e).collect();
        Ok(Some(GradeData {
            a_mat,
            basis,
            fw,
            r_mat,
            twist_charges,
            coaction_charges,
        }))
    }

    fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// A braided exterior algebra over a quantum metric: the graded carrier
/// `⊕ₙ im(Aⁿ)` together with the machinery for its wedge product,
/// cliffordization, pairings, and Hodge theory.
#[derive(Clone, Debug)]
pub struct ExteriorAlgebra {
    /// The underlying quantum metric (coordinate space, braiding, star,
    /// bimodule twists).
    pub metric: QuantumMetric,
    top: usize,
    grades: Vec<GradeData>,
}

/// An element of the (braided) Clifford algebra carried by the exterior
/// algebra: one grade-coordinate vector per grade, coefficients in Σ acting
/// from the left.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement {
    /// `components[n]` holds the grade-`n` coordinates.
    pub components: Vec<SigmaVec>,
}

impl CliffordElement {
    /// True when every grade component vanishes.
    pub fn is_zero(&self) -> bool {
        self.components
            .iter()
            .all(|g| g.iter().all(SigmaElement::is_zero))
    }

    /// Component-wise sum.
    pub fn add(&self, other: &CliffordElement) -> CliffordElement {
        assert_eq!(self.components.len(), other.components.len());
        CliffordElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    /// Component-wise difference.
    pub fn sub(&self, other: &CliffordElement) -> CliffordElement {
        assert_eq!(self.components.len(), other.components.len());
        CliffordElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        }
    }

    /// Left multiplication by a Σ-coefficient.
    pub fn scale(&self, q: &SigmaElement) -> CliffordElement {
        CliffordElement {
            components: self
                .components
                .iter()
                .map(|g| g.iter().map(|c| q * c).collect())
                .collect(),
        }
    }
}

/// The volume element of the top grade in both normalizations, together with
/// the derived structure constants: the structure-group charge, the modular
/// functional value on the group generator, the top-grade twist exponent,
/// the braid-transport operator `T` and its star conjugate, and the
/// grade-preserving pairing symmetrizer `⧫`.
#[derive(Clone, Debug)]
pub struct VolumeData {
    /// Stored word vector of the volume element `w`, normalized to be
    /// self-adjoint for the plain star. All pairing and Hodge data refer to
    /// this normalization.
    pub words: SigmaVec,
    /// The volume normalized to be self-adjoint for the graded star.
    pub graded_words: SigmaVec,
    /// `w = phase · b` against the stored top-grade basis column `b`.
    pub phase: Scalar,
    /// `w_graded = graded_phase · b`.
    pub graded_phase: Scalar,
    /// Structure-group charge of the volume element.
    pub coaction_charge: i64,
    /// True when the charge vanishes, i.e. the quantum determinant is
    /// trivial and the geometry is oriented.
    pub oriented: bool,
    /// Twist exponent of the top grade: `w·q = S(q)·w` with
    /// `S = twist^{exponent}`.
    pub twist_exponent: i64,
    /// Value `λ(U)` of the modular functional on the group generator,
    /// from `w∘U = λ(U)·w`.
    pub lambda_u: Scalar,
    /// `T` with `σ(w ⊗ x) = T(x) ⊗ w`.
    pub t_matrix: Mat,
    /// `T*` with `σ(y ⊗ w) = w ⊗ T*(y)`; equals `star ∘ T ∘ star`.
    pub t_star_matrix: Mat,
    /// Grade-preserving maps `⧫` solving
    /// `j(y, x) = (−1)^{∂x·∂y} j(⧫x, y)`, one Σ-matrix per grade.
    pub diamond: Vec<SigmaMat>,
}

/// The Hodge star in grade-coordinate form: `mats[k]` maps grade `k` to
/// grade `m−k`, `inv_mats[k]` undoes it. `graded_factor` rescales to the
/// star built on the graded-normalized volume.
#[derive(Clone, Debug)]
pub struct HodgeStar {
    /// `★` per source grade.
    pub mats: Vec<SigmaMat>,
    /// `★⁻¹` back onto each source grade.
    pub inv_mats: Vec<SigmaMat>,
    /// `★_graded = graded_factor · ★`.
    pub graded_factor: Scalar,
}

/// The circle action `∘U` of the structure-group generator: every letter of
/// a coordinate form is scaled by `form_factor` and every Σ-coefficient is
/// twisted by `coefficient_exponent`.
#[derive(Clone, Debug)]
pub struct CircleAction {
    /// Scale picked up by each coordinate one-form.
    pub form_factor: Scalar,
    /// Twist applied to metric coefficients (`G ↦ μ^{2e}·G`).
    pub coefficient_exponent: i64,
}

/// The circle action of the quantum-sphere instance: `η± ∘ U = μ⁻¹ η±` and
/// `G ∘ U = μ⁻² G`.
pub fn hopf_circle_action() -> CircleAction {
    CircleAction {
        form_factor: Scalar::mu_pow(-1),
        coefficient_exponent: -1,
    }
}

/// The trivial circle action of a classical instance.
pub fn classical_circle_action() -> CircleAction {
    CircleAction {
        form_factor: Scalar::one(),
        coefficient_exponent: 0,
    }
}

/// A finite-dimensional representation of the braided Clifford algebra:
/// images of the coordinate one-forms plus the structure-group charges of
/// the spinor basis vectors.
#[derive(Clone, Debug)]
pub struct SpinorRep {
    /// `gamma[i]` is the image of the `i`-th coordinate one-form.
    pub gamma: Vec<Mat>,
    /// Structure-group charge of each spinor basis vector.
    pub charges: Vec<i64>,
}

/// The spinor representation family of the quantum-sphere instance:
/// `γ(η₊) = μ^{1/2+k}·E₁₂` and `γ(η₋) = μ^{−1/2+k}·E₂₁` on `𝕊 = ℂ²` with
/// charges `(+1, −1)`; `k = 0` is the canonical member.
pub fn hopf_spinor_rep(k: i64) -> SpinorRep {
    let mut plus = Mat::zeros(2, 2);
    plus.set(0, 1, Scalar::q_pow(1 + 2 * k));
    let mut minus = Mat::zeros(2, 2);
    minus.set(1, 0, Scalar::q_pow(-1 + 2 * k));
    SpinorRep {
        gamma: vec![plus, minus],
        charges: vec![1, -1],
    }
}

/// The exterior algebra of the quantum-sphere metric.
pub fn hopf_exterior() -> Result<ExteriorAlgebra, Error> {
    ExteriorAlgebra::build(crate::quantum_metric::hopf_metric(), 3)
}

/// The exterior algebra of the classical Euclidean metric on `d` generators.
pub fn classical_exterior(d: usize) -> Result<ExteriorAlgebra, Error> {
    ExteriorAlgebra::build(crate::quantum_metric::classical_metric(d), d + 1)
}

impl ExteriorAlgebra {
    /// Builds the graded carrier from the antisymmetrizers of the metric
    /// braiding, searching for the vanishing degree up to `max_grade`.
    ///
    /// Errors when no grade vanishes below the bound, when an
    /// antisymmetrizer image fails to be a direct summand, when a basis
    /// column mixes structure-group charges, or when the top grade is not
    /// one-dimensional.
    pub fn build(metric: QuantumMetric, max_grade: usize) -> Result<ExteriorAlgebra, Error> {
        let d = metric.space.dim();
        let mut grades = vec![
            GradeData::new(&metric, 0, Mat::identity(1))?.expect("grade zero"),
            GradeData::new(&metric, 1, Mat::identity(d))?.expect("grade one"),
        ];
        let mut top = None;
        for n in 2..=max_grade {
            let a = antisymmetrizer(&metric.sigma, n).mat;
            match GradeData::new(&metric, n, a)? {
                Some(g) => grades.push(g),
                None => {
                    top = Some(n - 1);
                    break;
                }
            }
        }
        let top = top.ok_or_else(|| Error::Domain {
            detail: format!("no vanishing exterior degree up to {max_grade}"),
        })?;
        if grades[top].dim() != 1 {
            return Err(Error::Domain {
                detail: format!(
                    "top grade {top} has dimension {}, expected 1",
                    grades[top].dim()
                ),
            });
        }
        Ok(ExteriorAlgebra { metric, top, grades })
    }

    /// The top (volume) grade.
    pub fn top_grade(&self) -> usize {
        self.top
    }

    /// Dimensions of the grades `0, …, m`.
    pub fn grade_dims(&self) -> Vec<usize> {
        self.grades.iter().map(GradeData::dim).collect()
    }

    /// Dimension of grade `n`.
    pub fn grade_dim(&self, n: usize) -> usize {
        self.grades[n].dim()
    }

    /// Σ-bimodule twist exponent of each grade-`n` basis column.
    pub fn twist_charges(&self, n: usize) -> &[i64] {
        &self.grades[n].twist_charges
    }

    /// Structure-group charge of each grade-`n` basis column.
    pub fn coaction_charges(&self, n: usize) -> &[i64] {
        &self.grades[n].coaction_charges
    }

    /// Grade coordinates to stored word coordinates.
    pub fn to_words(&self, n: usize, coords: &[SigmaElement]) -> SigmaVec {
        apply_mat(&self.grades[n].basis, coords)
    }

    /// Word coordinates back to grade coordinates, verifying that the vector
    /// actually lies in the braided-antisymmetric subspace.
    pub fn from_words(&self, n: usize, words: &[SigmaElement]) -> Result<SigmaVec, Error> {
        let coords = apply_mat(&self.grades[n].fw, words);
        let back = apply_mat(&self.grades[n].basis, &coords);
        if !vecs_equal(&back, words) {
            return Err(Error::Domain {
                detail: format!("vector is not braided-antisymmetric at grade {n}"),
            });
        }
        Ok(coords)
    }

    /// The zero element.
    pub fn zero_element(&self) -> CliffordElement {
        CliffordElement {
            components: (0..=self.top)
                .map(|n| vec![SigmaElement::zero(); self.grades[n].dim()])
                .collect(),
        }
    }

    /// A Σ-coefficient in grade zero.
    pub fn scalar_element(&self, q: SigmaElement) -> CliffordElement {
        let mut out = self.zero_element();
        out.components[0][0] = q;
        out
    }

    /// The algebra unit.
    pub fn unit(&self) -> CliffordElement {
        self.scalar_element(SigmaElement::one())
    }

    /// The `i`-th basis element of grade `n`.
    pub fn basis_element(&self, n: usize, i: usize) -> CliffordElement {
        let mut out = self.zero_element();
        out.components[n][i] = SigmaElement::one();
        out
    }

    /// A one-form from word coordinates on the coordinate space.
    pub fn one_form(&self, coords: &[SigmaElement]) -> Result<CliffordElement, Error> {
        let mut out = self.zero_element();
        out.components[1] = self.from_words(1, coords)?;
        Ok(out)
    }

    /// Word vector with a single unit entry, used for coordinate one-forms.
    fn unit_words(&self, i: usize) -> SigmaVec {
        let d = self.metric.space.dim();
        let mut v = vec![SigmaElement::zero(); d];
        v[i] = SigmaElement::one();
        v
    }

    /// The grade-`p+q−2k` words of the `k`-fold contracted product of a
    /// grade-`p` and a grade-`q` element (grade coordinates in, stored words
    /// out). `k = 0` is the wedge product; summing over `k` gives the
    /// Clifford product.
    fn product_words(
        &self,
        p: usize,
        q: usize,
        k: usize,
        xc: &[SigmaElement],
        yc: &[SigmaElement],
    ) -> SigmaVec {
        let d = self.metric.space.dim();
        let xw = self.to_words(p, xc);
        let yw = self.to_words(q, yc);
        // Canonical representatives: R on the left legs of x (both the part
        // that survives and the part that gets paired) and on the right leg
        // of y; the paired leg of y stays stored.
        let xr = apply_mat(
            &self.grades[p - k].r_mat.kron(&self.grades[k].r_mat),
            &xw,
        );
        let dk = d.pow(k as u32);
        let yr = apply_mat(&Mat::identity(dk).kron(&self.grades[q - k].r_mat), &yw);
        let dqk = d.pow((q - k) as u32);
        let g = p + q - 2 * k;
        let mut out = vec![SigmaElement::zero(); d.pow(g as u32)];
        for (us, cx) in xr.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            let u = us / dk;
            let s = us % dk;
            let ch_u = self.metric.word_charge(&self.metric.word(u, p - k));
            let s_word = self.metric.word(s, k);
            let ch_s = self.metric.word_charge(&s_word);
            for (tv, cy) in yr.iter().enumerate() {
                if cy.is_zero() {
                    continue;
                }
                let t = tv / dqk;
                let v = tv % dqk;
                let pairing = self.metric.pair_words(&s_word, &self.metric.word(t, k));
                if pairing.is_zero() {
                    continue;
                }
                // The inner pairing value and the surviving right coefficient
                // move left across the paired and leading letters of x.
                let inner = &cy.twist(ch_s) * &pairing;
                let coef = cx * &inner.twist(ch_u);
                let idx = u * dqk + v;
                out[idx] = &out[idx] + &coef;
            }
        }
        apply_mat(&self.grades[g].a_mat, &out)
    }

    /// The wedge product.
    pub fn wedge(
        &self,
        x: &CliffordElement,
        y: &CliffordElement,
    ) -> Result<CliffordElement, Error> {
        let mut out = self.zero_element();
        for p in 0..=self.top {
            if x.components[p].iter().all(SigmaElement::is_zero) {
                continue;
            }
            for q in 0..=self.top {
                if p + q > self.top || y.components[q].iter().all(SigmaElement::is_zero) {
                    continue;
                }
                let words = self.product_words(p, q, 0, &x.components[p], &y.components[q]);
                let coords = self.from_words(p + q, &words)?;
                for (o, c) in out.components[p + q].iter_mut().zip(coords) {
                    *o = &*o + &c;
                }
            }
        }
        Ok(out)
    }

    /// The Clifford product: the wedge product deformed by the extended
    /// metric pairing of adjacent legs, one term per contraction depth.
    pub fn clifford_mul(
        &self,
        x: &CliffordElement,
        y: &CliffordElement,
    ) -> Result<CliffordElement, Error> {
        let mut out = self.zero_element();
        for p in 0..=self.top {
            if x.components[p].iter().all(SigmaElement::is_zero) {
                continue;
            }
            for q in 0..=self.top {
                if y.components[q].iter().all(SigmaElement::is_zero) {
                    continue;
                }
                for k in 0..=p.min(q) {
                    let g = p + q - 2 * k;
                    if g > self.top {
                        continue;
                    }
                    let words = self.product_words(p, q, k, &x.components[p], &y.components[q]);
                    let coords = self.from_words(g, &words)?;
                    for (o, c) in out.components[g].iter_mut().zip(coords) {
                        *o = &*o + &c;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Deconcatenation coproduct of a grade-`n` element: for every split
    /// `i + (n−i) = n` the Σ-matrix of grade-coordinate pairs, so that the
    /// element equals `Σ_{a,b} P[a,b] · β_a ⊗ β_b` for each split.
    pub fn coproduct_splits(
        &self,
        n: usize,
        coords: &[SigmaElement],
    ) -> Result<Vec<(usize, SigmaMat)>, Error> {
        let d = self.metric.space.dim();
        let words = self.to_words(n, coords);
        let mut out = Vec::new();
        for i in 0..=n {
            let j = n - i;
            let dj = d.pow(j as u32);
            let (gi, gj) = (&self.grades[i], &self.grades[j]);
            let mut p = SigmaMat::zeros(gi.dim(), gj.dim());
            for a in 0..gi.dim() {
                for b in 0..gj.dim() {
                    let mut acc = SigmaElement::zero();
                    for (w, wv) in words.iter().enumerate() {
                        if wv.is_zero() {
                            continue;
                        }
                        let coeff = gi.fw.at(a, w / dj) * gj.fw.at(b, w % dj);
                        if coeff.is_zero() {
                            continue;
                        }
                        acc = &acc + &wv.scale(&coeff);
                    }
                    p.set(a, b, acc);
                }
            }
            // The legs must reconstruct the split tensor exactly: the
            // antisymmetrizer factorizes through the tensor square of its
            // lower-degree companions, so the deconcatenated legs lie in the
            // stored subspaces.
            for (w, wv) in words.iter().enumerate() {
                let mut acc = SigmaElement::zero();
                for a in 0..gi.dim() {
                    for b in 0..gj.dim() {
                        let coeff = gi.basis.at(w / dj, a) * gj.basis.at(w % dj, b);
                        if coeff.is_zero() || p.at(a, b).is_zero() {
                            continue;
                        }
                        acc = &acc + &p.at(a, b).scale(&coeff);
                    }
                }
                if !(&acc - wv).is_zero() {
                    return Err(Error::Domain {
                        detail: format!("coproduct legs do not reconstruct the split {i}+{j}"),
                    });
                }
            }
            out.push((i, p));
        }
        Ok(out)
    }

    /// The counit: the grade-zero coefficient.
    pub fn counit(&self, x: &CliffordElement) -> SigmaElement {
        x.components[0][0].clone()
    }

    /// The extended metric pairing of two stored grade-`n` word vectors,
    /// `g_∧(α, β) = g(R α, β)`.
    pub fn g_wedge_words(&self, n: usize, a: &[SigmaElement], b: &[SigmaElement]) -> SigmaElement {
        self.metric
            .extended_metric(&apply_mat(&self.grades[n].r_mat, a), b)
    }

    /// The extended metric pairing of two elements (grades pair diagonally;
    /// mismatched grades contribute zero).
    pub fn g_wedge(&self, x: &CliffordElement, y: &CliffordElement) -> SigmaElement {
        let mut acc = SigmaElement::zero();
        for n in 0..=self.top {
            if x.components[n].iter().all(SigmaElement::is_zero)
                || y.components[n].iter().all(SigmaElement::is_zero)
            {
                continue;
            }
            let xw = self.to_words(n, &x.components[n]);
            let yw = self.to_words(n, &y.components[n]);
            acc = &acc + &self.g_wedge_words(n, &xw, &yw);
        }
        acc
    }

    /// The sesquilinear scalar product `⟨x, y⟩_∧ = g_∧(x*, y)` (plain star).
    pub fn wedge_scalar_product(&self, x: &CliffordElement, y: &CliffordElement) -> SigmaElement {
        let mut acc = SigmaElement::zero();
        for n in 0..=self.top {
            if x.components[n].iter().all(SigmaElement::is_zero)
                || y.components[n].iter().all(SigmaElement::is_zero)
            {
                continue;
            }
            let xw = self.metric.plain_star(&self.to_words(n, &x.components[n]));
            let yw = self.to_words(n, &y.components[n]);
            acc = &acc + &self.g_wedge_words(n, &xw, &yw);
        }
        acc
    }

    /// The plain (tensor-inherited, antimultiplicative) star.
    pub fn star_plain(&self, x: &CliffordElement) -> Result<CliffordElement, Error> {
        let mut out = self.zero_element();
        for n in 0..=self.top {
            let starred = self.metric.plain_star(&self.to_words(n, &x.components[n]));
            out.components[n] = self.from_words(n, &starred)?;
        }
        Ok(out)
    }

    /// The graded (differential-form) star: the plain star times
    /// `(−1)^{n(n−1)/2}` on grade `n`.
    pub fn star_graded(&self, x: &CliffordElement) -> Result<CliffordElement, Error> {
        let mut out = self.zero_element();
        for n in 0..=self.top {
            let starred = self
                .metric
                .graded_star(&self.to_words(n, &x.components[n]));
            out.components[n] = self.from_words(n, &starred)?;
        }
        Ok(out)
    }

    /// Contraction `ι[x]ψ = (g ⊗ id^{n−1})(x ⊗ ψ)` by a one-form given in
    /// word coordinates, applied to the stored tensors grade by grade.
    pub fn contraction(
        &self,
        x: &[SigmaElement],
        psi: &CliffordElement,
    ) -> Result<CliffordElement, Error> {
        let d = self.metric.space.dim();
        let mut out = self.zero_element();
        for n in 1..=self.top {
            if psi.components[n].iter().all(SigmaElement::is_zero) {
                continue;
            }
            let pw = self.to_words(n, &psi.components[n]);
            let t = self.metric.tensor_product(x, &pw);
            let dn1 = d.pow((n - 1) as u32);
            let mut words = vec![SigmaElement::zero(); dn1];
            for (idx, c) in t.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let i = idx / (d * dn1);
                let jj = (idx / dn1) % d;
                let rest = idx % dn1;
                let gval = self.metric.entries.at(i, jj);
                if gval.is_zero() {
                    continue;
                }
                words[rest] = &words[rest] + &(c * gval);
            }
            let coords = self.from_words(n - 1, &words)?;
            for (o, c) in out.components[n - 1].iter_mut().zip(coords) {
                *o = &*o + &c;
            }
        }
        Ok(out)
    }

    /// The action `x ↦ x∘U` of the structure-group generator.
    pub fn circ_u(&self, circ: &CircleAction, x: &CliffordElement) -> CliffordElement {
        let mut out = x.clone();
        for (n, comp) in out.components.iter_mut().enumerate() {
            let ff = circ.form_factor.pow(n as i64);
            for c in comp.iter_mut() {
                *c = c.twist(circ.coefficient_exponent).scale(&ff);
            }
        }
        out
    }

    /// Solves the phase `ζ ∈ {1, i}` making `ζ·b` self-adjoint, given
    /// `b* = c·b` with `c = ±1`.
    fn phase_for(c: &Scalar) -> Result<Scalar, Error> {
        if (c - &Scalar::one()).is_zero() {
            Ok(Scalar::one())
        } else if (c + &Scalar::one()).is_zero() {
            Ok(Scalar::i())
        } else {
            Err(Error::Domain {
                detail: format!("volume star phase {c} is not ±1"),
            })
        }
    }

    /// The braid product moving the last tensor leg to the front of a
    /// degree-`(m+1)` tensor.
    fn braid_to_front(&self) -> Mat {
        let d = self.metric.space.dim();
        let m = self.top;
        let sigma = &self.metric.sigma.op.mat;
        let mut b = Mat::identity(d.pow((m + 1) as u32));
        // The factor at position m−1 acts first, then m−2, …, then 0, so it
        // sits rightmost in the matrix product.
        for i in 0..m {
            let factor = Mat::identity(d.pow(i as u32))
                .kron(&sigma.kron(&Mat::identity(d.pow((m - 1 - i) as u32))));
            b = if i == 0 { factor } else { b.mul(&factor) };
        }
        b
    }

    /// The braid product moving the first tensor leg to the back.
    fn braid_to_back(&self) -> Mat {
        let d = self.metric.space.dim();
        let m = self.top;
        let sigma = &self.metric.sigma.op.mat;
        let mut b = Mat::identity(d.pow((m + 1) as u32));
        // Apply the factor at position 0 first, then 1, …, then m−1.
        for i in 0..m {
            let factor = Mat::identity(d.pow(i as u32))
                .kron(&sigma.kron(&Mat::identity(d.pow((m - 1 - i) as u32))));
            b = if i == 0 { factor } else { factor.mul(&b) };
        }
        b
    }

    /// Decomposes `out = Σ_i T[i,j] · (e_i ⊗ w)` (or `w ⊗ e_i` when `front`
    /// is false), returning column `j` of the transport matrix.
    fn transport_column(
        &self,
        out: &[SigmaElement],
        w: &[SigmaElement],
        front: bool,
    ) -> Result<Vec<Scalar>, Error> {
        let d = self.metric.space.dim();
        let dm = w.len();
        let r0 = w
            .iter()
            .position(|c| !c.is_zero())
            .expect("volume element is nonzero");
        let w0 = constant_of(&w[r0])?;
        let mut col = Vec::with_capacity(d);
        for i in 0..d {
            let entry = if front {
                &out[i * dm + r0]
            } else {
                &out[r0 * d + i]
            };
            let t = constant_of(&entry.scale(&w0.inv()))?;
            // Consistency across the whole support of w.
            for (r, wr) in w.iter().enumerate() {
                let e = if front { &out[i * dm + r] } else { &out[r * d + i] };
                if !(e - &wr.scale(&t)).is_zero() {
                    return Err(Error::Domain {
                        detail: "braiding does not transport the volume line".into(),
                    });
                }
            }
            col.push(t);
        }
        Ok(col)
    }

    /// Builds the volume element and its derived pairing data.
    ///
    /// The volume is the top-grade basis column normalized self-adjoint for
    /// the plain star (phase in `{1, i}`); the graded normalization is
    /// recorded alongside. Errors when the star does not preserve the top
    /// line up to `±1` or when the pairing degenerates.
    pub fn volume(&self, circ: &CircleAction) -> Result<VolumeData, Error> {
        let m = self.top;
        let d = self.metric.space.dim();
        let gtop = &self.grades[m];
        let b: SigmaVec = (0..b_len(gtop))
            .map(|r| SigmaElement::from_scalar(gtop.basis.at(r, 0).clone()))
            .collect();
        let sb = self.metric.plain_star(&b);
        let r0 = b
            .iter()
            .position(|c| !c.is_zero())
            .expect("top grade basis column is nonzero");
        let c_plain = &constant_of(&sb[r0])? * &constant_of(&b[r0])?.inv();
        for (x, y) in sb.iter().zip(&b) {
            if !(x - &y.scale(&c_plain)).is_zero() {
                return Err(Error::Domain {
                    detail: "plain star does not preserve the top grade line".into(),
                });
            }
        }
        let phase = Self::phase_for(&c_plain)?;
        let graded_sign = if (m * (m.saturating_sub(1)) / 2) % 2 == 1 {
            -Scalar::one()
        } else {
            Scalar::one()
        };
        let graded_phase = Self::phase_for(&(&c_plain * &graded_sign))?;
        let words: SigmaVec = b.iter().map(|c| c.scale(&phase)).collect();
        let graded_words: SigmaVec = b.iter().map(|c| c.scale(&graded_phase)).collect();

        let coaction_charge = gtop.coaction_charges[0];
        let twist_exponent = gtop.twist_charges[0];
        let lambda_u = circ.form_factor.pow(m as i64);

        // Transport of the volume line through the braiding.
        let front = self.braid_to_front();
        let back = self.braid_to_back();
        let mut t_matrix = Mat::zeros(d, d);
        let mut t_star_matrix = Mat::zeros(d, d);
        for j in 0..d {
            let unit = self.unit_words(j);
            let out_f = apply_mat(&front, &self.metric.tensor_product(&words, &unit));
            for (i, v) in self
                .transport_column(&out_f, &words, true)?
                .into_iter()
                .enumerate()
            {
                t_matrix.set(i, j, v);
            }
            let out_b = apply_mat(&back, &self.metric.tensor_product(&unit, &words));
            for (i, v) in self
                .transport_column(&out_b, &words, false)?
                .into_iter()
                .enumerate()
            {
                t_star_matrix.set(i, j, v);
            }
        }

        // The grade-preserving pairing symmetrizer ⧫ per grade, solved from
        // j(y, x) = (−1)^{∂x·∂y} j(⧫x, y).
        let mut vol = VolumeData {
            words,
            graded_words,
            phase,
            graded_phase,
            coaction_charge,
            oriented: coaction_charge == 0,
            twist_exponent,
            lambda_u,
            t_matrix,
            t_star_matrix,
            diamond: Vec::new(),
        };
        let mut diamond = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let (dk, dmk) = (self.grades[k].dim(), self.grades[m - k].dim());
            if dk != dmk {
                return Err(Error::Domain {
                    detail: format!("grades {k} and {} are not paired", m - k),
                });
            }
            let mut xt = SigmaMat::zeros(dmk, dk);
            let mut y = SigmaMat::zeros(dmk, dk);
            for t in 0..dk {
                for yy in 0..dmk {
                    xt.set(
                        yy,
                        t,
                        self.j_pair_basis(&vol, k, t, yy)?,
                    );
                    y.set(yy, t, self.j_pair_basis(&vol, m - k, yy, t)?);
                }
            }
            let xinv = xt.inverse_monomial().ok_or_else(|| Error::Domain {
                detail: format!("volume pairing degenerates at grade {k}"),
            })?;
            let mut dmat = xinv.mul(&y);
            if (k * (m - k)) % 2 == 1 {
                dmat = dmat.scale(&SigmaElement::from_scalar(-Scalar::one()));
            }
            diamond.push(dmat);
        }
        vol.diamond = diamond;
        Ok(vol)
    }

    /// `j(β_x^{(k)}, β_y^{(m−k)})` for basis columns.
    fn j_pair_basis(
        &self,
        vol: &VolumeData,
        k: usize,
        x: usize,
        y: usize,
    ) -> Result<SigmaElement, Error> {
        let xe = self.basis_element(k, x);
        let ye = self.basis_element(self.top - k, y);
        self.j_pair(vol, &xe, &ye)
    }

    /// The volume pairing `j` on complementary grades: `x ∧ y = j(x, y)·w`.
    pub fn j_pair(
        &self,
        vol: &VolumeData,
        x: &CliffordElement,
        y: &CliffordElement,
    ) -> Result<SigmaElement, Error> {
        let prod = self.wedge(x, y)?;
        Ok(prod.components[self.top][0].scale(&vol.phase.inv()))
    }

    /// The volume pairing in the graded normalization,
    /// `x ∧ y = j_gr(x, y)·w_graded`.
    pub fn j_pair_graded(
        &self,
        vol: &VolumeData,
        x: &CliffordElement,
        y: &CliffordElement,
    ) -> Result<SigmaElement, Error> {
        let prod = self.wedge(x, y)?;
        Ok(prod.components[self.top][0].scale(&vol.graded_phase.inv()))
    }

    /// The volume element as an algebra element.
    pub fn volume_element(&self, vol: &VolumeData) -> Result<CliffordElement, Error> {
        let mut out = self.zero_element();
        out.components[self.top] = self.from_words(self.top, &vol.words)?;
        Ok(out)
    }

    /// Builds the Hodge star from `g_∧(x, y) = j(x, ★y)`, solving one
    /// Σ-linear system per grade. Errors when the pairing matrix is not
    /// invertible (degenerate metric/pairing combination).
    pub fn hodge_star(&self, vol: &VolumeData) -> Result<HodgeStar, Error> {
        let m = self.top;
        let mut mats = Vec::with_capacity(m + 1);
        let mut inv_mats = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let dk = self.grades[k].dim();
            let dmk = self.grades[m - k].dim();
            // Row-untwisted pairing and metric matrices: the unknown
            // Σ-coefficients of ★ pass the twist of the row label before
            // meeting j, so both sides are untwisted per row first.
            let mut jp = SigmaMat::zeros(dk, dmk);
            let mut gp = SigmaMat::zeros(dk, dk);
            for x in 0..dk {
                let tcx = self.grades[k].twist_charges[x];
                for z in 0..dmk {
                    jp.set(x, z, self.j_pair_basis(vol, k, x, z)?.twist(-tcx));
                }
                let bx = self.to_words(k, &unit_coords(dk, x));
                for y in 0..dk {
                    let by = self.to_words(k, &unit_coords(dk, y));
                    gp.set(x, y, self.g_wedge_words(k, &bx, &by).twist(-tcx));
                }
            }
            let jinv = jp.inverse_monomial().ok_or_else(|| Error::Domain {
                detail: format!("Hodge system is singular at grade {k}"),
            })?;
            let c = jinv.mul(&gp);
            let cinv = c.inverse_monomial().ok_or_else(|| Error::Domain {
                detail: format!("Hodge star is not invertible at grade {k}"),
            })?;
            mats.push(c);
            inv_mats.push(cinv);
        }
        Ok(HodgeStar {
            mats,
            inv_mats,
            graded_factor: &vol.graded_phase * &vol.phase.inv(),
        })
    }

    /// Applies the Hodge star grade by grade.
    pub fn apply_hodge(&self, hs: &HodgeStar, x: &CliffordElement) -> CliffordElement {
        let mut out = self.zero_element();
        for k in 0..=self.top {
            if x.components[k].iter().all(SigmaElement::is_zero) {
                continue;
            }
            let img = apply_sigma(&hs.mats[k], &x.components[k]);
            for (o, c) in out.components[self.top - k].iter_mut().zip(img) {
                *o = &*o + &c;
            }
        }
        out
    }

    /// Applies the inverse Hodge star grade by grade.
    pub fn apply_hodge_inverse(&self, hs: &HodgeStar, x: &CliffordElement) -> CliffordElement {
        let mut out = self.zero_element();
        for k in 0..=self.top {
            if x.components[self.top - k].iter().all(SigmaElement::is_zero) {
                continue;
            }
            let img = apply_sigma(&hs.inv_mats[k], &x.components[self.top - k]);
            for (o, c) in out.components[k].iter_mut().zip(img) {
                *o = &*o + &c;
            }
        }
        out
    }

    /// Structural checks of the graded carrier: top grade, self-dual grade
    /// dimensions, star stability of each grade, associativity and unitality
    /// of the wedge, coproduct counit/coassociativity laws, and vanishing of
    /// braiding-fixed squares.
    pub fn exterior_report(&self) -> Report {
        let mut rep = Report::new();
        let m = self.top;
        rep.push(
            "top_grade_one_dimensional",
            self.grades[m].dim() == 1,
            format!("grade dimensions {:?}", self.grade_dims()),
        );
        rep.require(
            "grade_dimensions_self_dual",
            (0..=m).all(|k| self.grades[k].dim() == self.grades[m - k].dim()),
        );
        let mut star_ok = true;
        for n in 0..=m {
            for i in 0..self.grades[n].dim() {
                if self.star_plain(&self.basis_element(n, i)).is_err()
                    || self.star_graded(&self.basis_element(n, i)).is_err()
                {
                    star_ok = false;
                }
            }
        }
        rep.require("stars_preserve_grades", star_ok);

        let basis = self.all_basis_elements();
        let mut assoc = true;
        let mut unital = true;
        for x in &basis {
            let u = self.unit();
            if let (Ok(l), Ok(r)) = (self.wedge(&u, x), self.wedge(x, &u)) {
                unital &= l.sub(x).is_zero() && r.sub(x).is_zero();
            } else {
                unital = false;
            }
            for y in &basis {
                for z in &basis {
                    let lhs = self
                        .wedge(&self.wedge(x, y).unwrap(), z)
                        .expect("wedge stays in the carrier");
                    let rhs = self
                        .wedge(x, &self.wedge(y, z).unwrap())
                        .expect("wedge stays in the carrier");
                    assoc &= lhs.sub(&rhs).is_zero();
                }
            }
        }
        rep.require("wedge_associative", assoc);
        rep.require("wedge_unital", unital);

        let mut counit_ok = true;
        let mut splits_ok = true;
        for n in 0..=m {
            for i in 0..self.grades[n].dim() {
                let coords = unit_coords(self.grades[n].dim(), i);
                match self.coproduct_splits(n, &coords) {
                    // A failing reconstruction means the deconcatenated legs
                    // left the stored subspaces.
                    Err(_) => splits_ok = false,
                    Ok(splits) => {
                        // (ε⊗id) and (id⊗ε) recover the element.
                        let left = &splits[0].1;
                        let right = &splits[n].1;
                        for (c, coord) in coords.iter().enumerate() {
                            counit_ok &= (left.at(0, c) - coord).is_zero()
                                && (right.at(c, 0) - coord).is_zero();
                        }
                    }
                }
            }
        }
        rep.require("coproduct_counit", counit_ok);
        rep.require("coproduct_splits_valid", splits_ok);

        let d = self.metric.space.dim();
        let sigma = &self.metric.sigma.op.mat;
        let mut squares_ok = true;
        for i in 0..d {
            let col = i * d + i;
            let fixed = (0..d * d).all(|r| {
                let expected = if r == col { Scalar::one() } else { Scalar::zero() };
                (sigma.at(r, col) - &expected).is_zero()
            });
            if fixed {
                let e = self.basis_element(1, i);
                let sq = self.wedge(&e, &e).map(|s| s.is_zero()).unwrap_or(false);
                squares_ok &= sq;
            }
        }
        rep.require("braiding_fixed_squares_vanish", squares_ok);
        rep
    }

    /// All graded basis elements.
    fn all_basis_elements(&self) -> Vec<CliffordElement> {
        let mut out = Vec::new();
        for n in 0..=self.top {
            for i in 0..self.grades[n].dim() {
                out.push(self.basis_element(n, i));
            }
        }
        out
    }

    /// Algebraic checks of the cliffordization: unit, associativity on all
    /// graded basis triples, star antimultiplicativity, the counit/pairing
    /// compatibility `ε(x*·y) = ⟨x,y⟩_∧`, adjointability of the left regular
    /// representation, projectability of the extended pairing, and strict
    /// positivity of the grade Gram matrices at the sampled `μ`.
    pub fn clifford_report(&self, samples: &[BigRational]) -> Result<Report, Error> {
        let mut rep = Report::new();
        let basis = self.all_basis_elements();

        let u = self.unit();
        let mut unital = true;
        for x in &basis {
            unital &= self.clifford_mul(&u, x)?.sub(x).is_zero()
                && self.clifford_mul(x, &u)?.sub(x).is_zero();
        }
        rep.require("clifford_unital", unital);

        let mut assoc = true;
        for x in &basis {
            for y in &basis {
                let xy = self.clifford_mul(x, y)?;
                for z in &basis {
                    let lhs = self.clifford_mul(&xy, z)?;
                    let rhs = self.clifford_mul(x, &self.clifford_mul(y, z)?)?;
                    assoc &= lhs.sub(&rhs).is_zero();
                }
            }
        }
        rep.require("clifford_associative", assoc);

        let mut star_anti = true;
        for x in &basis {
            for y in &basis {
                let lhs = self.star_plain(&self.clifford_mul(x, y)?)?;
                let rhs = self.clifford_mul(&self.star_plain(y)?, &self.star_plain(x)?)?;
                star_anti &= lhs.sub(&rhs).is_zero();
            }
        }
        rep.require("clifford_star_antimultiplicative", star_anti);

        let mut counit_pairing = true;
        let mut left_regular = true;
        for x in &basis {
            let xs = self.star_plain(x)?;
            for y in &basis {
                let eps = self.counit(&self.clifford_mul(&xs, y)?);
                let sp = self.wedge_scalar_product(x, y);
                counit_pairing &= (&eps - &sp).is_zero();
                for t in &basis {
                    let lhs =
                        self.wedge_scalar_product(&self.clifford_mul(t, x)?, y);
                    let rhs = self
                        .wedge_scalar_product(x, &self.clifford_mul(&self.star_plain(t)?, y)?);
                    left_regular &= (&lhs - &rhs).is_zero();
                }
            }
        }
        rep.require("counit_recovers_scalar_product", counit_pairing);
        rep.require("left_regular_adjointable", left_regular);

        // g(k, Aⁿ·x) = 0 for kernel vectors k: the extended pairing only
        // sees classes.
        let d = self.metric.space.dim();
        let mut projectable = true;
        for n in 2..=self.top {
            let a = &self.grades[n].a_mat;
            for k in a.kernel() {
                let kv: SigmaVec = k.iter().cloned().map(SigmaElement::from_scalar).collect();
                for w in 0..d.pow(n as u32) {
                    let mut unit = vec![SigmaElement::zero(); d.pow(n as u32)];
                    unit[w] = SigmaElement::one();
                    let img = apply_mat(a, &unit);
                    projectable &= self.metric.extended_metric(&kv, &img).is_zero();
                }
            }
        }
        rep.require("pairing_kills_antisymmetrizer_kernel", projectable);

        for mu0 in samples {
            let mut positive = true;
            for n in 0..=self.top {
                let dimn = self.grades[n].dim();
                let mut gram = SigmaMat::zeros(dimn, dimn);
                for x in 0..dimn {
                    for y in 0..dimn {
                        gram.set(
                            x,
                            y,
                            self.wedge_scalar_product(
                                &self.basis_element(n, x),
                                &self.basis_element(n, y),
                            ),
                        );
                    }
                }
                let realized = gram.realize(&Realization::Spinor)?;
                positive &= positivity(&realized, mu0, true)?;
            }
            rep.push(
                format!("grade_grams_positive at mu={mu0}"),
                positive,
                String::new(),
            );
        }
        Ok(rep)
    }

    /// The Hodge-theoretic property suite: volume self-adjointness in both
    /// normalizations, orientation, modular data, braid transport of the
    /// volume line, the `⧫` laws, conjugation between wedge and contraction,
    /// the twisted self-adjointness of `★` and `T`, charge equivariance, and
    /// circle covariance.
    pub fn hodge_property_suite(&self, circ: &CircleAction) -> Result<Report, Error> {
        let mut rep = Report::new();
        let vol = self.volume(circ)?;
        let hs = self.hodge_star(&vol)?;
        let m = self.top;
        let d = self.metric.space.dim();
        let w_el = self.volume_element(&vol)?;

        rep.require(
            "volume_plain_selfadjoint",
            vecs_equal(&self.metric.plain_star(&vol.words), &vol.words),
        );
        rep.require(
            "volume_graded_selfadjoint",
            vecs_equal(&self.metric.graded_star(&vol.graded_words), &vol.graded_words),
        );
        rep.push(
            "volume_oriented",
            vol.oriented,
            format!("structure-group charge {}", vol.coaction_charge),
        );
        rep.require(
            "modular_value_real",
            (&vol.lambda_u.conj() - &vol.lambda_u).is_zero(),
        );
        {
            let circled = self.circ_u(circ, &w_el);
            let expected = w_el.scale(&SigmaElement::from_scalar(vol.lambda_u.clone()));
            rep.require("volume_circ_eigenvector", circled.sub(&expected).is_zero());
        }
        rep.require("transport_invertible", vol.t_matrix.inverse().is_some());
        {
            let star = &self.metric.star;
            let conj_t = star
                .mul(&vol.t_matrix.conj_entries())
                .mul(&star.conj_entries());
            rep.require(
                "transport_star_conjugate",
                mat_eq(&conj_t, &vol.t_star_matrix),
            );
        }

        // T† = T and the twist rule S{⟨x,y⟩} = ⟨T⁻¹x, Ty⟩ on one-forms.
        {
            let tinv = vol.t_matrix.inverse().expect("transport is invertible");
            let mut t_self = true;
            let mut s_rule = true;
            for a in 0..d {
                let ea = self.unit_words(a);
                for b in 0..d {
                    let eb = self.unit_words(b);
                    let t_eb = apply_mat(&vol.t_matrix, &eb);
                    let t_ea = apply_mat(&vol.t_matrix, &ea);
                    let lhs = self.metric.sigma_scalar_product(&ea, &t_eb);
                    let rhs = self
                        .metric
                        .sigma_scalar_product(&t_ea, &eb)
                        .twist(vol.twist_exponent);
                    t_self &= (&lhs - &rhs).is_zero();
                    let pair = self
                        .metric
                        .sigma_scalar_product(&ea, &eb)
                        .twist(vol.twist_exponent);
                    let tw = self
                        .metric
                        .sigma_scalar_product(&apply_mat(&tinv, &ea), &t_eb);
                    s_rule &= (&pair - &tw).is_zero();
                }
            }
            rep.require("transport_selfadjoint_twisted", t_self);
            rep.require("twist_rule_for_metric_pairing", s_rule);
        }

        rep.require(
            "hodge_star_of_unit_is_volume",
            self.apply_hodge(&hs, &self.unit()).sub(&w_el).is_zero(),
        );
        rep.require(
            "hodge_grade_bijective",
            (0..=m).all(|k| hs.mats[k].nrows() == self.grades[m - k].dim()),
        );
        {
            let mut roundtrip = true;
            for x in self.all_basis_elements() {
                roundtrip &= self
                    .apply_hodge_inverse(&hs, &self.apply_hodge(&hs, &x))
                    .sub(&x)
                    .is_zero();
            }
            rep.require("hodge_roundtrip", roundtrip);
        }

        // ⟨x, ★y⟩ = S⁻¹{⟨★x, y⟩} on complementary basis pairs.
        {
            let mut adj = true;
            for k in 0..=m {
                for x in 0..self.grades[m - k].dim() {
                    let ex = self.basis_element(m - k, x);
                    let sx = self.apply_hodge(&hs, &ex);
                    for y in 0..self.grades[k].dim() {
                        let ey = self.basis_element(k, y);
                        let sy = self.apply_hodge(&hs, &ey);
                        let lhs = self.wedge_scalar_product(&ex, &sy);
                        let rhs = self
                            .wedge_scalar_product(&sx, &ey)
                            .twist(-vol.twist_exponent);
                        adj &= (&lhs - &rhs).is_zero();
                    }
                }
            }
            rep.require("hodge_selfadjoint_twisted", adj);
        }

        // Charge equivariance: ★ shifts the structure-group charge by the
        // charge of the volume element.
        {
            let mut equi = true;
            for k in 0..=m {
                for z in 0..self.grades[k].dim() {
                    for t in 0..self.grades[m - k].dim() {
                        if hs.mats[k].at(t, z).is_zero() {
                            continue;
                        }
                        equi &= self.grades[m - k].coaction_charges[t]
                            == self.grades[k].coaction_charges[z] + vol.coaction_charge;
                    }
                }
            }
            rep.require("hodge_charge_equivariant", equi);
        }

        // λ(U)·★(x∘U) = ★(x)∘U.
        {
            let lam = SigmaElement::from_scalar(vol.lambda_u.clone());
            let mut cov = true;
            for x in self.all_basis_elements() {
                let lhs = self
                    .apply_hodge(&hs, &self.circ_u(circ, &x))
                    .scale(&lam);
                let rhs = self.circ_u(circ, &self.apply_hodge(&hs, &x));
                cov &= lhs.sub(&rhs).is_zero();
            }
            rep.require("hodge_circle_covariant", cov);
        }

        // ι[e] = ★⁻¹ ∘ (e ∧ ·) ∘ ★ for every coordinate one-form.
        {
            let mut conj = true;
            for e in 0..d {
                let ew = self.unit_words(e);
                let ef = self.one_form(&ew)?;
                for x in self.all_basis_elements() {
                    let lhs = self.contraction(&ew, &x)?;
                    let rhs =
                        self.apply_hodge_inverse(&hs, &self.wedge(&ef, &self.apply_hodge(&hs, &x))?);
                    conj &= lhs.sub(&rhs).is_zero();
                }
            }
            rep.require("contraction_is_hodge_conjugate_of_wedge", conj);
        }

        // ⟨e∧a, b⟩ = ⟨a, ι[e*]b⟩.
        {
            let mut adj = true;
            for e in 0..d {
                let ef = self.one_form(&self.unit_words(e))?;
                let estar = self.metric.plain_star(&self.unit_words(e));
                for a in self.all_basis_elements() {
                    let ea = self.wedge(&ef, &a)?;
                    for b in self.all_basis_elements() {
                        let lhs = self.wedge_scalar_product(&ea, &b);
                        let rhs = self.wedge_scalar_product(&a, &self.contraction(&estar, &b)?);
                        adj &= (&lhs - &rhs).is_zero();
                    }
                }
            }
            rep.require("wedge_adjoint_is_contraction", adj);
        }

        // Braided Leibniz rule: ι[x](y∧β) + Σ_α y_α ∧ ι[x_α]β = g(x,y)·β
        // where σ(x⊗y) = Σ_α y_α ⊗ x_α.
        {
            let sigma = &self.metric.sigma.op.mat;
            let mut leibniz = true;
            for x in 0..d {
                let xw = self.unit_words(x);
                for y in 0..d {
                    let yf = self.one_form(&self.unit_words(y))?;
                    for beta in self.all_basis_elements() {
                        let mut lhs = self.contraction(&xw, &self.wedge(&yf, &beta)?)?;
                        for a in 0..d {
                            for bb in 0..d {
                                let coeff = sigma.at(a * d + bb, x * d + y);
                                if coeff.is_zero() {
                                    continue;
                                }
                                let term = self
                                    .wedge(
                                        &self.one_form(&self.unit_words(a))?,
                                        &self.contraction(&self.unit_words(bb), &beta)?,
                                    )?
                                    .scale(&SigmaElement::from_scalar(coeff.clone()));
                                lhs = lhs.add(&term);
                            }
                        }
                        let rhs = beta.scale(&self.metric.entries.at(x, y).clone());
                        leibniz &= lhs.sub(&rhs).is_zero();
                    }
                }
            }
            rep.require("contraction_braided_leibniz", leibniz);
        }

        // ⧫ laws: the defining relation on all complementary pairs, and
        // star∘⧫∘star = ⧫⁻¹.
        {
            let mut defining = true;
            let mut star_conj = true;
            for k in 0..=m {
                let dk = self.grades[k].dim();
                let dmk = self.grades[m - k].dim();
                let sign = if (k * (m - k)) % 2 == 1 {
                    -Scalar::one()
                } else {
                    Scalar::one()
                };
                let dinv = vol.diamond[k].inverse_monomial().ok_or_else(|| {
                    Error::Domain {
                        detail: format!("⧫ is singular at grade {k}"),
                    }
                })?;
                for z in 0..dk {
                    let ez = self.basis_element(k, z);
                    let dz_coords = apply_sigma(&vol.diamond[k], &ez.components[k]);
                    let mut dz = self.zero_element();
                    dz.components[k] = dz_coords;
                    for yy in 0..dmk {
                        let ey = self.basis_element(m - k, yy);
                        let lhs = self.j_pair(&vol, &ey, &ez)?;
                        let rhs = self.j_pair(&vol, &dz, &ey)?.scale(&sign);
                        defining &= (&lhs - &rhs).is_zero();
                    }
                    // star ⧫ star applied to the basis element.
                    let sz = self.star_plain(&ez)?;
                    let mut dsz = self.zero_element();
                    dsz.components[k] = apply_sigma(&vol.diamond[k], &sz.components[k]);
                    let lhs = self.star_plain(&dsz)?;
                    let mut rhs = self.zero_element();
                    rhs.components[k] = apply_sigma(&dinv, &ez.components[k]);
                    star_conj &= lhs.sub(&rhs).is_zero();
                }
            }
            rep.require("diamond_defining_relation", defining);
            rep.require("diamond_star_conjugate_inverse", star_conj);
        }

        // Conjugation rule of the pairing in the graded convention:
        // conj j(x,y) = (−1)^{∂x·∂y} j(y*, x*) with graded stars and the
        // graded-normalized volume.
        {
            let mut conj_rule = true;
            for k in 0..=m {
                let sign = if (k * (m - k)) % 2 == 1 {
                    -Scalar::one()
                } else {
                    Scalar::one()
                };
                for x in 0..self.grades[k].dim() {
                    let ex = self.basis_element(k, x);
                    for y in 0..self.grades[m - k].dim() {
                        let ey = self.basis_element(m - k, y);
                        let lhs = self.j_pair_graded(&vol, &ex, &ey)?.conj();
                        let rhs = self
                            .j_pair_graded(&vol, &self.star_graded(&ey)?, &self.star_graded(&ex)?)?
                            .scale(&sign);
                        conj_rule &= (&lhs - &rhs).is_zero();
                    }
                }
            }
            rep.require("pairing_conjugation_graded", conj_rule);
        }

        // j(x∘U, y∘U) = λ(U) · (j(x,y)∘U).
        {
            let mut inv = true;
            for k in 0..=m {
                for x in 0..self.grades[k].dim() {
                    let ex = self.basis_element(k, x);
                    for y in 0..self.grades[m - k].dim() {
                        let ey = self.basis_element(m - k, y);
                        let lhs =
                            self.j_pair(&vol, &self.circ_u(circ, &ex), &self.circ_u(circ, &ey))?;
                        let rhs = self
                            .j_pair(&vol, &ex, &ey)?
                            .twist(circ.coefficient_exponent)
                            .scale(&vol.lambda_u);
                        inv &= (&lhs - &rhs).is_zero();
                    }
                }
            }
            rep.require("pairing_circle_invariant", inv);
        }

        Ok(rep)
    }

    /// Induces the representation image of the metric generator from the
    /// quadratic Clifford relations (the kernel of the degree-2
    /// antisymmetrizer) and verifies every relation against it.
    fn metric_image(&self, rep: &SpinorRep) -> Result<Mat, Error> {
        let d = self.metric.space.dim();
        if rep.gamma.len() != d {
            return Err(Error::Shape {
                detail: format!("{} generator images for {d} one-forms", rep.gamma.len()),
            });
        }
        if self.top < 2 {
            return Err(Error::Domain {
                detail: "no quadratic relations below grade two".into(),
            });
        }
        let sdim = rep.charges.len();
        let mut pairs = Vec::new();
        for rel in self.grades[2].a_mat.kernel() {
            let mut lhs = Mat::zeros(sdim, sdim);
            let mut rhs = SigmaElement::zero();
            for i in 0..d {
                for j in 0..d {
                    let c = &rel[i * d + j];
                    if c.is_zero() {
                        continue;
                    }
                    lhs = lhs.add(&rep.gamma[i].mul(&rep.gamma[j]).scale(c));
                    rhs = &rhs + &self.metric.entries.at(i, j).scale(c);
                }
            }
            pairs.push((lhs, rhs));
        }
        let mut gg: Option<Mat> = None;
        for (lhs, rhs) in &pairs {
            if rhs.degrees() == vec![1] {
                let cand = lhs.scale(&rhs.coefficient(1).inv());
                match &gg {
                    None => gg = Some(cand),
                    Some(prev) => {
                        if !mat_eq(prev, &cand) {
                            return Err(Error::Domain {
                                detail: "quadratic relations give inconsistent metric images"
                                    .into(),
                            });
                        }
                    }
                }
            }
        }
        let gg = gg.ok_or_else(|| Error::Domain {
            detail: "no quadratic relation determines the metric generator image".into(),
        })?;
        let gg_inv = gg.inverse();
        for (lhs, rhs) in &pairs {
            let image = represent_sigma(rhs, &gg, gg_inv.as_ref(), sdim)?;
            if !mat_eq(lhs, &image) {
                return Err(Error::Domain {
                    detail: "a quadratic Clifford relation is violated".into(),
                });
            }
        }
        Ok(gg)
    }

    /// Represents an element of grade at most two through the generator
    /// images, using the canonical tensor representatives and the quadratic
    /// correction `γ(η_i ∧ η_j) = γ_i γ_j − γ[g_ij]`.
    pub fn represent(&self, rep: &SpinorRep, x: &CliffordElement) -> Result<Mat, Error> {
        let gg = self.metric_image(rep)?;
        let gg_inv = gg.inverse();
        let sdim = rep.charges.len();
        let d = self.metric.space.dim();
        let mut out = Mat::zeros(sdim, sdim);
        for n in 0..=self.top {
            if x.components[n].iter().all(SigmaElement::is_zero) {
                continue;
            }
            if n > 2 {
                return Err(Error::Domain {
                    detail: "representation of grades above two is not implemented".into(),
                });
            }
            let a = apply_mat(&self.grades[n].r_mat, &self.to_words(n, &x.components[n]));
            match n {
                0 => out = out.add(&represent_sigma(&a[0], &gg, gg_inv.as_ref(), sdim)?),
                1 => {
                    for (i, c) in a.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let coeff = represent_sigma(c, &gg, gg_inv.as_ref(), sdim)?;
                        out = out.add(&coeff.mul(&rep.gamma[i]));
                    }
                }
                _ => {
                    for i in 0..d {
                        for j in 0..d {
                            let c = &a[i * d + j];
                            if c.is_zero() {
                                continue;
                            }
                            let coeff = represent_sigma(c, &gg, gg_inv.as_ref(), sdim)?;
                            let quad = rep.gamma[i].mul(&rep.gamma[j]).add(
                                &represent_sigma(
                                    self.metric.entries.at(i, j),
                                    &gg,
                                    gg_inv.as_ref(),
                                    sdim,
                                )?
                                .scale(&-Scalar::one()),
                            );
                            out = out.add(&coeff.mul(&quad));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Checks a spinor representation: the quadratic Clifford relations, the
    /// bimodule exchange with the metric generator, charge additivity of the
    /// generator images, irreducibility (trivial commutant), and star
    /// compatibility `γ(x*) = γ(x)†`.
    pub fn spinor_rep_check(&self, rep: &SpinorRep) -> Report {
        let mut report = Report::new();
        let d = self.metric.space.dim();
        let sdim = rep.charges.len();
        let gg = match self.metric_image(rep) {
            Ok(g) => {
                report.push("clifford_relations", true, String::new());
                Some(g)
            }
            Err(e) => {
                report.push("clifford_relations", false, format!("{e}"));
                None
            }
        };

        if let Some(gg) = &gg {
            report.require("metric_image_invertible", gg.inverse().is_some());
            let mut exchange = true;
            for i in 0..d {
                let lhs = rep.gamma[i].mul(gg);
                let rhs = gg
                    .mul(&rep.gamma[i])
                    .scale(&Scalar::mu_pow(2 * self.metric.twist_exponents[i]));
                exchange &= mat_eq(&lhs, &rhs);
            }
            report.require("bimodule_exchange", exchange);
        }

        let mut charges_ok = true;
        for i in 0..d {
            let expected = 2 * self.metric.twist_exponents[i];
            for a in 0..sdim {
                for b in 0..sdim {
                    if rep.gamma[i].at(a, b).is_zero() {
                        continue;
                    }
                    charges_ok &= rep.charges[a] - rep.charges[b] == expected;
                }
            }
        }
        report.require("charge_additive", charges_ok);

        {
            let mut gens: Vec<&Mat> = rep.gamma.iter().collect();
            if let Some(g) = &gg {
                gens.push(g);
            }
            let rows = gens.len() * sdim * sdim;
            let mut sys = Mat::zeros(rows, sdim * sdim);
            for (gi, g) in gens.iter().enumerate() {
                for a in 0..sdim {
                    for b in 0..sdim {
                        let row = gi * sdim * sdim + a * sdim + b;
                        for cc in 0..sdim {
                            // (g·X − X·g)[a,b] in the unknowns X[c,d].
                            let idx1 = cc * sdim + b;
                            let v1 = sys.at(row, idx1) + g.at(a, cc);
                            sys.set(row, idx1, v1);
                            let idx2 = a * sdim + cc;
                            let v2 = sys.at(row, idx2) - g.at(cc, b);
                            sys.set(row, idx2, v2);
                        }
                    }
                }
            }
            report.push(
                "commutant_trivial",
                sys.kernel().len() == 1,
                format!("commutant dimension {}", sys.kernel().len()),
            );
        }

        {
            let mut star_ok = true;
            for i in 0..d {
                let mut lhs = Mat::zeros(sdim, sdim);
                for k in 0..d {
                    if self.metric.star.at(k, i).is_zero() {
                        continue;
                    }
                    lhs = lhs.add(&rep.gamma[k].scale(self.metric.star.at(k, i)));
                }
                star_ok &= mat_eq(&lhs, &rep.gamma[i].dagger());
            }
            report.require("star_is_adjoint", star_ok);
        }

        report
    }
}

/// Length of a grade's word space.
fn b_len(g: &GradeData) -> usize {
    g.basis.nrows()
}

/// Grade-coordinate unit vector.
fn unit_coords(dim: usize, i: usize) -> SigmaVec {
    let mut v = vec![SigmaElement::zero(); dim];
    v[i] = SigmaElement::one();
    v
}

/// Represents a Σ-element through a chosen image of the generator.
fn represent_sigma(
    s: &SigmaElement,
    gg: &Mat,
    gg_inv: Option<&Mat>,
    dim: usize,
) -> Result<Mat, Error> {
    let mut out = Mat::zeros(dim, dim);
    for (k, c) in s.terms() {
        let mut pow = Mat::identity(dim);
        if k >= 0 {
            for _ in 0..k {
                pow = pow.mul(gg);
            }
        } else {
            let inv = gg_inv.ok_or_else(|| Error::Domain {
                detail: "metric generator image is not invertible".into(),
            })?;
            for _ in 0..(-k) {
                pow = pow.mul(inv);
            }
        }
        out = out.add(&pow.scale(c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::big_rat;
    use num::Zero;

    /// Shorthand for μ-power Σ-coefficients.
    fn mu(k: i64) -> SigmaElement {
        SigmaElement::from_scalar(Scalar::mu_pow(k))
    }

    fn g_times(c: Scalar) -> SigmaElement {
        SigmaElement::monomial(1, c)
    }

    /// The stored words of η₊∧η₋ on the quantum sphere.
    fn z_words() -> SigmaVec {
        vec![
            SigmaElement::zero(),
            SigmaElement::one(),
            SigmaElement::from_scalar(-Scalar::mu_pow(2)),
            SigmaElement::zero(),
        ]
    }

    #[test]
    fn the_quantum_sphere_carrier_has_the_expected_grades_and_relations() {
        let alg = hopf_exterior().unwrap();
        assert_eq!(alg.grade_dims(), vec![1, 2, 1]);
        assert_eq!(alg.top_grade(), 2);
        assert_eq!(alg.twist_charges(1), &[1, -1]);
        assert_eq!(alg.coaction_charges(1), &[2, -2]);

        let ep = alg.basis_element(1, 0);
        let em = alg.basis_element(1, 1);
        assert!(alg.wedge(&ep, &ep).unwrap().is_zero());
        assert!(alg.wedge(&em, &em).unwrap().is_zero());

        // η₊∧η₋ + μ²·η₋∧η₊ = 0 and the stored representative of η₊∧η₋.
        let pm = alg.wedge(&ep, &em).unwrap();
        let mp = alg.wedge(&em, &ep).unwrap();
        assert!(pm.add(&mp.scale(&mu(2))).is_zero());
        assert!(vecs_equal(&alg.to_words(2, &pm.components[2]), &z_words()));

        // The unit is neutral.
        let u = alg.unit();
        assert!(alg.wedge(&u, &ep).unwrap().sub(&ep).is_zero());
    }

    #[test]
    fn classical_carriers_have_binomial_grade_dimensions() {
        assert_eq!(classical_exterior(2).unwrap().grade_dims(), vec![1, 2, 1]);
        assert_eq!(
            classical_exterior(3).unwrap().grade_dims(),
            vec![1, 3, 3, 1]
        );
    }

    #[test]
    fn the_exterior_reports_are_green() {
        assert!(hopf_exterior().unwrap().exterior_report().all_passed());
        assert!(classical_exterior(2)
            .unwrap()
            .exterior_report()
            .all_passed());
        assert!(classical_exterior(3)
            .unwrap()
            .exterior_report()
            .all_passed());
    }

    #[test]
    fn deconcatenation_splits_the_volume_into_its_legs() {
        let alg = hopf_exterior().unwrap();
        let splits = alg
            .coproduct_splits(2, &unit_coords(1, 0))
            .unwrap();
        assert_eq!(splits.len(), 3);
        // (0,2) and (2,0) legs carry the unit coefficient.
        assert!((splits[0].1.at(0, 0) - &SigmaElement::one()).is_zero());
        assert!((splits[2].1.at(0, 0) - &SigmaElement::one()).is_zero());
        // The middle split reproduces the word matrix of the top basis
        // column: e₊⊗e₋ − μ²·e₋⊗e₊.
        let mid = &splits[1].1;
        assert!(mid.at(0, 0).is_zero());
        assert!((mid.at(0, 1) - &SigmaElement::one()).is_zero());
        assert!((mid.at(1, 0) + &mu(2)).is_zero());
        assert!(mid.at(1, 1).is_zero());

        // One-form splits are trivial.
        let s1 = alg
            .coproduct_splits(1, &[SigmaElement::one(), SigmaElement::zero()])
            .unwrap();
        assert!((s1[0].1.at(0, 0) - &SigmaElement::one()).is_zero());
        assert!(s1[0].1.at(0, 1).is_zero());
    }

    #[test]
    fn the_extended_pairing_is_unital_and_kills_the_kernel() {
        let alg = hopf_exterior().unwrap();
        let one = vec![SigmaElement::one()];
        assert!((&alg.g_wedge_words(0, &one, &one) - &SigmaElement::one()).is_zero());

        // Degree mismatch pairs to zero.
        let u = alg.unit();
        let ep = alg.basis_element(1, 0);
        assert!(alg.g_wedge(&u, &ep).is_zero());

        // The kernel vector e₊⊗e₊ pairs to zero against the stored grade.
        let mut k = vec![SigmaElement::zero(); 4];
        k[0] = SigmaElement::one();
        assert!(alg.metric.extended_metric(&k, &z_words()).is_zero());
        assert!(alg.g_wedge_words(2, &z_words(), &z_words()).is_zero() == false);
    }

    #[test]
    fn the_clifford_product_recovers_the_metric_and_associates() {
        let alg = hopf_exterior().unwrap();
        let ep = alg.basis_element(1, 0);
        let em = alg.basis_element(1, 1);

        // η₊·̃η₋ splits into the wedge part and the metric part.
        let pm = alg.clifford_mul(&ep, &em).unwrap();
        assert!(vecs_equal(&alg.to_words(2, &pm.components[2]), &z_words()));
        assert!((&pm.components[0][0] - &g_times(Scalar::one())).is_zero());

        // η₊·̃η₋ + μ²·η₋·̃η₊ = 2g₊₋.
        let mp = alg.clifford_mul(&em, &ep).unwrap();
        let rel = pm.add(&mp.scale(&mu(2)));
        let expected = alg.scalar_element(g_times(Scalar::from_int(2)));
        assert!(rel.sub(&expected).is_zero());

        // An associativity instance.
        let lhs = alg.clifford_mul(&pm, &ep).unwrap();
        let rhs = alg.clifford_mul(&ep, &alg.clifford_mul(&em, &ep).unwrap()).unwrap();
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn the_anticommutation_defect_vanishes_in_the_classical_limit() {
        let alg = hopf_exterior().unwrap();
        let ep = alg.basis_element(1, 0);
        let em = alg.basis_element(1, 1);
        // η₊·̃η₋ + η₋·̃η₊ − 2g₊₋ is a μ-deformation artifact: every
        // coefficient vanishes at μ = 1 and survives at μ = 1/2.
        let rel = alg
            .clifford_mul(&ep, &em)
            .unwrap()
            .add(&alg.clifford_mul(&em, &ep).unwrap())
            .sub(&alg.scalar_element(g_times(Scalar::from_int(2))));
        assert!(!rel.is_zero());
        let one = big_rat(1, 1);
        let half = big_rat(1, 2);
        let mut survives = false;
        for comp in &rel.components {
            for c in comp {
                for (_, coeff) in c.terms() {
                    let (p, r) = coeff.eval_at_mu_exact(&one).unwrap();
                    assert!(p.re.is_zero() && p.im.is_zero());
                    assert!(r.re.is_zero() && r.im.is_zero());
                    let (p, r) = coeff.eval_at_mu_exact(&half).unwrap();
                    survives |= !(p.re.is_zero()
                        && p.im.is_zero()
                        && r.re.is_zero()
                        && r.im.is_zero());
                }
            }
        }
        assert!(survives);
    }

    #[test]
    fn contraction_drops_one_grade_through_the_metric() {
        let alg = hopf_exterior().unwrap();
        let em = alg.basis_element(1, 1);
        let ep_words = alg.unit_words(0);

        // ι[η₊](η₋) = g₊₋ = G.
        let out = alg.contraction(&ep_words, &em).unwrap();
        assert!(out.sub(&alg.scalar_element(g_times(Scalar::one()))).is_zero());

        // ι[x](1) = 0.
        assert!(alg.contraction(&ep_words, &alg.unit()).unwrap().is_zero());

        // ι[η₊] of the volume: −μ²G·η₊.
        let circ = hopf_circle_action();
        let vol = alg.volume(&circ).unwrap();
        let w = alg.volume_element(&vol).unwrap();
        let out = alg.contraction(&ep_words, &w).unwrap();
        let expected = alg
            .basis_element(1, 0)
            .scale(&g_times(-Scalar::mu_pow(2)));
        assert!(out.sub(&expected).is_zero());
    }

    #[test]
    fn the_volume_data_of_the_quantum_sphere_is_pinned() {
        let alg = hopf_exterior().unwrap();
        let vol = alg.volume(&hopf_circle_action()).unwrap();

        // Plain normalization is the stored η₊∧η₋ itself; the graded one
        // carries the phase i.
        assert!(vecs_equal(&vol.words, &z_words()));
        assert!((&vol.phase - &Scalar::one()).is_zero());
        assert!((&vol.graded_phase - &Scalar::i()).is_zero());
        let iz: SigmaVec = z_words().iter().map(|c| c.scale(&Scalar::i())).collect();
        assert!(vecs_equal(&vol.graded_words, &iz));

        assert_eq!(vol.coaction_charge, 0);
        assert!(vol.oriented);
        assert_eq!(vol.twist_exponent, 0);
        assert!((&vol.lambda_u - &Scalar::mu_pow(-2)).is_zero());

        // σ(w⊗x) = T(x)⊗w with T = diag(μ⁻², μ²), and the star conjugate.
        let t = &vol.t_matrix;
        assert!((t.at(0, 0) - &Scalar::mu_pow(-2)).is_zero());
        assert!((t.at(1, 1) - &Scalar::mu_pow(2)).is_zero());
        assert!(t.at(0, 1).is_zero() && t.at(1, 0).is_zero());
        let ts = &vol.t_star_matrix;
        assert!((ts.at(0, 0) - &Scalar::mu_pow(2)).is_zero());
        assert!((ts.at(1, 1) - &Scalar::mu_pow(-2)).is_zero());

        // ⧫ is trivial on grades 0 and 2 and diag(μ⁻², μ²) in the middle.
        assert!((vol.diamond[0].at(0, 0) - &SigmaElement::one()).is_zero());
        assert!((vol.diamond[2].at(0, 0) - &SigmaElement::one()).is_zero());
        assert!((vol.diamond[1].at(0, 0) - &mu(-2)).is_zero());
        assert!((vol.diamond[1].at(1, 1) - &mu(2)).is_zero());
        assert!(vol.diamond[1].at(0, 1).is_zero());
    }

    #[test]
    fn the_volume_pairing_values_are_pinned() {
        let alg = hopf_exterior().unwrap();
        let vol = alg.volume(&hopf_circle_action()).unwrap();
        let ep = alg.basis_element(1, 0);
        let em = alg.basis_element(1, 1);
        let u = alg.unit();
        let w = alg.volume_element(&vol).unwrap();

        assert!((&alg.j_pair(&vol, &ep, &em).unwrap() - &SigmaElement::one()).is_zero());
        assert!((&alg.j_pair(&vol, &em, &ep).unwrap() + &mu(-2)).is_zero());
        assert!((&alg.j_pair(&vol, &u, &w).unwrap() - &SigmaElement::one()).is_zero());
        assert!((&alg.j_pair(&vol, &w, &u).unwrap() - &SigmaElement::one()).is_zero());

        // Graded normalization rescales by the relative phase.
        let jg = alg.j_pair_graded(&vol, &ep, &em).unwrap();
        assert!((&jg - &SigmaElement::from_scalar(-Scalar::i())).is_zero());

        // ⟨w, w⟩_∧ = G².
        let sp = alg.wedge_scalar_product(&w, &w);
        assert!((&sp - &SigmaElement::monomial(2, Scalar::one())).is_zero());
    }

    #[test]
    fn the_hodge_star_of_the_quantum_sphere_is_pinned() {
        let alg = hopf_exterior().unwrap();
        let vol = alg.volume(&hopf_circle_action()).unwrap();
        let hs = alg.hodge_star(&vol).unwrap();
        let u = alg.unit();
        let ep = alg.basis_element(1, 0);
        let em = alg.basis_element(1, 1);
        let w = alg.volume_element(&vol).unwrap();

        assert!(alg.apply_hodge(&hs, &u).sub(&w).is_zero());
        let sp = alg.apply_hodge(&hs, &ep);
        assert!(sp.sub(&ep.scale(&g_times(-Scalar::mu_pow(2)))).is_zero());
        let sm = alg.apply_hodge(&hs, &em);
        assert!(sm.sub(&em.scale(&g_times(Scalar::mu_pow(-2)))).is_zero());
        let sw = alg.apply_hodge(&hs, &w);
        assert!(sw
            .sub(&alg.scalar_element(SigmaElement::monomial(2, Scalar::one())))
            .is_zero());

        // The graded-normalized star carries the i factors.
        assert!((&hs.graded_factor - &Scalar::i()).is_zero());
    }

    #[test]
    fn the_hodge_property_suite_is_green_on_the_quantum_sphere() {
        let alg = hopf_exterior().unwrap();
        let report = alg.hodge_property_suite(&hopf_circle_action()).unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn the_hodge_property_suite_is_green_classically_and_rotates_one_forms() {
        let alg = classical_exterior(2).unwrap();
        let circ = classical_circle_action();
        let report = alg.hodge_property_suite(&circ).unwrap();
        assert!(report.all_passed(), "{report}");

        // The plain-star volume carries the phase i classically; the graded
        // normalization is the bare top column.
        let vol = alg.volume(&circ).unwrap();
        assert!((&vol.phase - &Scalar::i()).is_zero());
        assert!((&vol.graded_phase - &Scalar::one()).is_zero());

        // In the graded normalization the star is the 90° rotation on
        // one-forms: ★e₁ = e₂ and ★e₂ = −e₁.
        let hs = alg.hodge_star(&vol).unwrap();
        let rot = SigmaElement::from_scalar(hs.graded_factor.clone());
        let e1 = alg.basis_element(1, 0);
        let e2 = alg.basis_element(1, 1);
        let s1 = alg.apply_hodge(&hs, &e1).scale(&rot);
        let s2 = alg.apply_hodge(&hs, &e2).scale(&rot);
        assert!(s1.sub(&e2).is_zero());
        assert!(s2.add(&e1).is_zero());
    }

    #[test]
    fn the_clifford_reports_are_green() {
        let samples = [big_rat(1, 4), big_rat(1, 2), big_rat(3, 4)];
        let alg = hopf_exterior().unwrap();
        let report = alg.clifford_report(&samples).unwrap();
        assert!(report.all_passed(), "{report}");
        let alg = classical_exterior(2).unwrap();
        let report = alg.clifford_report(&samples).unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn the_spinor_representation_family_passes_and_pins_the_metric_image() {
        let alg = hopf_exterior().unwrap();
        for k in -2..=2 {
            let rep = hopf_spinor_rep(k);
            let report = alg.spinor_rep_check(&rep);
            assert!(report.all_passed(), "family member {k}: {report}");
        }

        // γ[g₊₋] = ½·diag(1, μ²).
        let half_mu2 = &Scalar::from_ratio(1, 2) * &Scalar::mu_pow(2);
        let gg = alg.metric_image(&hopf_spinor_rep(0)).unwrap();
        assert!((gg.at(0, 0) - &Scalar::from_ratio(1, 2)).is_zero());
        assert!((gg.at(1, 1) - &half_mu2).is_zero());
        assert!(gg.at(0, 1).is_zero() && gg.at(1, 0).is_zero());

        // The represented volume element: ½·diag(1, −μ²).
        let vol = alg.volume(&hopf_circle_action()).unwrap();
        let w = alg.volume_element(&vol).unwrap();
        let gw = alg.represent(&hopf_spinor_rep(0), &w).unwrap();
        assert!((gw.at(0, 0) - &Scalar::from_ratio(1, 2)).is_zero());
        assert!((gw.at(1, 1) + &half_mu2).is_zero());
    }

    #[test]
    fn a_triangular_assignment_fails_the_spinor_checks() {
        let alg = hopf_exterior().unwrap();
        let mut plus = Mat::zeros(2, 2);
        plus.set(0, 1, Scalar::q_pow(1));
        let mut minus = Mat::zeros(2, 2);
        minus.set(0, 1, Scalar::q_pow(-1));
        let rep = SpinorRep {
            gamma: vec![plus, minus],
            charges: vec![1, -1],
        };
        let report = alg.spinor_rep_check(&rep);
        assert!(!report.all_passed());
    }

    #[test]
    fn hodge_data_survives_the_classical_three_dimensional_carrier() {
        // d = 3 has grade dimensions (1,3,3,1); the full Hodge suite runs on
        // it unchanged.
        let alg = classical_exterior(3).unwrap();
        let report = alg.hodge_property_suite(&classical_circle_action()).unwrap();
        assert!(report.all_passed(), "{report}");
    }
}
