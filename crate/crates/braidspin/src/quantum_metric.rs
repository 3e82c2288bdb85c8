//! The noncommutative metric-coefficient algebra Σ, the quantum metric,
//! the bimodule twist, and the Σ-valued scalar products.
//!
//! A quantum metric here is a map `g: V⊗V → Σ` whose values live in a
//! coefficient *-algebra Σ rather than in the scalars.  For the quantum
//! sphere Σ is the commutative *-algebra of Laurent polynomials in the
//! single positive generator `G = g₊₋` ([`SigmaElement`]); the classical
//! case is the degree-zero subalgebra.  Σ acts on tensor powers of `V` from
//! both sides, the two actions differing by the twist `θᵢ·q = ν(q)ᵢⱼ·θⱼ`;
//! concretely every basis vector carries a twist exponent `e` with
//! `θ·c(G) = c(μ^{2e}G)·θ`.
//!
//! The module provides:
//!
//! * exact Σ-arithmetic and three concrete realizations of Σ by matrices
//!   (2×2 spinor, truncated ℓ²(ℤ) diagonal, classical scalars),
//! * the extended metric on `V^{⊗n}` defined inductively by
//!   `g{(ψ⊗x)⊗(y⊗ξ)} = g(ψ, g(x,y)·ξ)`,
//! * the sesquilinear Σ-valued scalar product `⟨ψ,ξ⟩ = g(ψ*,ξ)` and its
//!   Gram matrices,
//! * the twist [`NuTwist`] reconstructed from its defining identity
//!   `ν(id⊗g) = (g⊗id)(id⊗σ)(σ⁻¹⊗id)`,
//! * [`QuantumMetric::axiom_report`], which checks braided symmetry,
//!   reality, the two-line σ-compatibility of `g⊗g`, weak and strict
//!   positivity in a realization, invertibility and minimality, the twist
//!   properties, and positivity of the braided antisymmetrizers.

use crate::braiding::{antisymmetrizer, classical_flip, BraidOperator};
use crate::linalg::{eig_sym_float, psd_check, HermitianForm, Mat, Operator, Space};
use crate::scalars::{format_scalar_monomial, Scalar};
use crate::{Error, Report};
use num::{BigInt, BigRational, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element of Σ: a Laurent polynomial `Σ_k c_k G^k` in the positive
/// metric generator `G` with [`Scalar`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SigmaElement {
    terms: BTreeMap<i64, Scalar>,
}

impl SigmaElement {
    /// The zero element.
    pub fn zero() -> SigmaElement {
        SigmaElement {
            terms: BTreeMap::new(),
        }
    }

    /// The unit.
    pub fn one() -> SigmaElement {
        SigmaElement::from_scalar(Scalar::one())
    }

    /// The generator `G`.
    pub fn generator() -> SigmaElement {
        SigmaElement::monomial(1, Scalar::one())
    }

    /// A degree-zero element.
    pub fn from_scalar(c: Scalar) -> SigmaElement {
        SigmaElement::monomial(0, c)
    }

    /// The monomial `c·G^k`.
    pub fn monomial(k: i64, c: Scalar) -> SigmaElement {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        SigmaElement { terms }
    }

    /// True iff this is 0.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff every term has degree zero.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    /// The coefficient of `G^k`.
    pub fn coefficient(&self, k: i64) -> Scalar {
        self.terms.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Degrees with nonzero coefficient, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    /// The terms `(degree, coefficient)`, ascending in degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    fn insert_term(&mut self, k: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Scalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, c: &Scalar) -> SigmaElement {
        let mut out = SigmaElement::zero();
        for (&k, v) in &self.terms {
            out.insert_term(k, v * c);
        }
        out
    }

    /// The substitution `G ↦ μ^{2e}·G` produced by moving this element
    /// across a basis vector with twist exponent `e`.
    pub fn twist(&self, e: i64) -> SigmaElement {
        let mut out = SigmaElement::zero();
        for (&k, v) in &self.terms {
            out.insert_term(k, v * &Scalar::mu_pow(2 * e * k));
        }
        out
    }

    /// The *-conjugate: coefficients are conjugated, `G* = G`.
    pub fn conj(&self) -> SigmaElement {
        let mut out = SigmaElement::zero();
        for (&k, v) in &self.terms {
            out.insert_term(k, v.conj());
        }
        out
    }

    /// The inverse, defined when the element is a single monomial.
    pub fn inv_monomial(&self) -> Option<SigmaElement> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&k, c) = self.terms.iter().next().unwrap();
        Some(SigmaElement::monomial(-k, c.inv()))
    }
}

impl Add for &SigmaElement {
    type Output = SigmaElement;
    fn add(self, o: &SigmaElement) -> SigmaElement {
        let mut out = self.clone();
        for (&k, v) in &o.terms {
            out.insert_term(k, v.clone());
        }
        out
    }
}

impl Sub for &SigmaElement {
    type Output = SigmaElement;
    fn sub(self, o: &SigmaElement) -> SigmaElement {
        self + &(-o)
    }
}

impl Mul for &SigmaElement {
    type Output = SigmaElement;
    fn mul(self, o: &SigmaElement) -> SigmaElement {
        let mut out = SigmaElement::zero();
        for (&k1, c1) in &self.terms {
            for (&k2, c2) in &o.terms {
                out.insert_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SigmaElement {
    type Output = SigmaElement;
    fn neg(self) -> SigmaElement {
        let mut out = SigmaElement::zero();
        for (&k, v) in &self.terms {
            out.insert_term(k, -v.clone());
        }
        out
    }
}

impl Neg for SigmaElement {
    type Output = SigmaElement;
    fn neg(self) -> SigmaElement {
        -&self
    }
}

macro_rules! sigma_forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for SigmaElement {
            type Output = SigmaElement;
            fn $m(self, o: SigmaElement) -> SigmaElement {
                (&self).$m(&o)
            }
        }
        impl $tr<&SigmaElement> for SigmaElement {
            type Output = SigmaElement;
            fn $m(self, o: &SigmaElement) -> SigmaElement {
                (&self).$m(o)
            }
        }
        impl $tr<SigmaElement> for &SigmaElement {
            type Output = SigmaElement;
            fn $m(self, o: SigmaElement) -> SigmaElement {
                self.$m(&o)
            }
        }
    };
}

sigma_forward_binop!(Add, add);
sigma_forward_binop!(Sub, sub);
sigma_forward_binop!(Mul, mul);

impl fmt::Display for SigmaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (&k, c)) in self.terms.iter().enumerate() {
            let piece = format_scalar_monomial(c, "G", k);
            if i == 0 {
                out.push_str(&piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&piece);
            }
        }
        write!(f, "{out}")
    }
}

/// Evaluation of the canonical faithful state ω on Σ, normalized trace of
/// the spinor realization: `ω(G^k) = ((1/2)^k + (μ²/2)^k)/2`.
pub fn omega_state(s: &SigmaElement) -> Scalar {
    let half = Scalar::from_ratio(1, 2);
    let mut out = Scalar::zero();
    for (k, c) in s.terms() {
        let a = half.pow(k);
        let b = (&half * &Scalar::mu_pow(2)).pow(k);
        out = &out + &(c * &((&a + &b) * &half));
    }
    out
}

/// A concrete matrix realization of Σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    /// `G ↦ ½·diag(1, μ²)` on the two-dimensional spinor space.
    Spinor,
    /// `G ↦ ½·diag(μ^{2k})`, `k ∈ [−k_max, k_max]`, the truncation of the
    /// canonical action on ℓ²(ℤ).
    L2Z {
        /// Truncation radius.
        k_max: i64,
    },
    /// Σ = scalars; only degree-zero elements are representable.
    Classical,
}

impl Realization {
    /// Dimension of the representation space.
    pub fn dim(&self) -> usize {
        match self {
            Realization::Spinor => 2,
            Realization::L2Z { k_max } => (2 * k_max + 1) as usize,
            Realization::Classical => 1,
        }
    }

    /// The matrix of `G^k`.
    pub fn generator_power(&self, k: i64) -> Result<Mat, Error> {
        let half = Scalar::from_ratio(1, 2);
        match self {
            Realization::Spinor => {
                let mut m = Mat::zeros(2, 2);
                m.set(0, 0, half.pow(k));
                m.set(1, 1, (&half * &Scalar::mu_pow(2)).pow(k));
                Ok(m)
            }
            Realization::L2Z { k_max } => {
                let dim = self.dim();
                let mut m = Mat::zeros(dim, dim);
                for (row, j) in (-k_max..=*k_max).enumerate() {
                    m.set(row, row, (&half * &Scalar::mu_pow(2 * j)).pow(k));
                }
                Ok(m)
            }
            Realization::Classical => {
                if k != 0 {
                    return Err(Error::Domain {
                        detail: "classical Σ has no nonscalar generators".into(),
                    });
                }
                Ok(Mat::identity(1))
            }
        }
    }

    /// The matrix of an arbitrary Σ-element.
    pub fn represent(&self, s: &SigmaElement) -> Result<Mat, Error> {
        let dim = self.dim();
        let mut out = Mat::zeros(dim, dim);
        for (k, c) in s.terms() {
            out = out.add(&self.generator_power(k)?.scale(c));
        }
        Ok(out)
    }
}

/// A rectangular matrix with Σ entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaMat {
    rows: usize,
    cols: usize,
    data: Vec<SigmaElement>,
}

impl SigmaMat {
    /// The zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> SigmaMat {
        SigmaMat {
            rows,
            cols,
            data: vec![SigmaElement::zero(); rows * cols],
        }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> SigmaMat {
        let mut m = SigmaMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, SigmaElement::one());
        }
        m
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> SigmaElement,
    ) -> SigmaMat {
        let mut m = SigmaMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Lifts a scalar matrix to constant Σ entries.
    pub fn from_scalar_mat(m: &Mat) -> SigmaMat {
        SigmaMat::from_fn(m.nrows(), m.ncols(), |r, c| {
            SigmaElement::from_scalar(m.at(r, c).clone())
        })
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Entry access.
    pub fn at(&self, r: usize, c: usize) -> &SigmaElement {
        &self.data[r * self.cols + c]
    }

    /// Entry assignment.
    pub fn set(&mut self, r: usize, c: usize, v: SigmaElement) {
        self.data[r * self.cols + c] = v;
    }

    /// True iff all entries vanish.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SigmaElement::is_zero)
    }

    /// Entrywise sum.
    pub fn add(&self, o: &SigmaMat) -> SigmaMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        SigmaMat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + o.at(r, c))
    }

    /// Matrix product.
    pub fn mul(&self, o: &SigmaMat) -> SigmaMat {
        assert_eq!(self.cols, o.rows);
        SigmaMat::from_fn(self.rows, o.cols, |r, c| {
            let mut acc = SigmaElement::zero();
            for k in 0..self.cols {
                acc = &acc + &(self.at(r, k) * o.at(k, c));
            }
            acc
        })
    }

    /// Scales every entry.
    pub fn scale(&self, s: &SigmaElement) -> SigmaMat {
        SigmaMat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * s)
    }

    /// Conjugate transpose (Σ-conjugation entrywise).
    pub fn dagger(&self) -> SigmaMat {
        SigmaMat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    /// Exact inverse for generalized-permutation matrices with monomial
    /// entries (every row and column holds at most one nonzero entry).
    pub fn inverse_monomial(&self) -> Option<SigmaMat> {
        if self.rows != self.cols {
            return None;
        }
        let mut out = SigmaMat::zeros(self.rows, self.cols);
        let mut used_rows = vec![false; self.rows];
        for c in 0..self.cols {
            let mut hit = None;
            for r in 0..self.rows {
                if !self.at(r, c).is_zero() {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(r);
                }
            }
            let r = hit?;
            if used_rows[r] {
                return None;
            }
            used_rows[r] = true;
            out.set(c, r, self.at(r, c).inv_monomial()?);
        }
        Some(out)
    }

    /// Realizes every entry, producing a block matrix.
    pub fn realize(&self, rel: &Realization) -> Result<Mat, Error> {
        let b = rel.dim();
        let mut out = Mat::zeros(self.rows * b, self.cols * b);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let block = rel.represent(self.at(r, c))?;
                for i in 0..b {
                    for j in 0..b {
                        out.set(r * b + i, c * b + j, block.at(i, j).clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

/// An element of `V_Σ^{⊗n}`: coordinates over Σ in the word basis, with all
/// coefficients written on the left.
pub type SigmaVec = Vec<SigmaElement>;

/// Applies a scalar matrix to a Σ-coordinate vector.
pub fn apply_mat(m: &Mat, v: &[SigmaElement]) -> SigmaVec {
    assert_eq!(m.ncols(), v.len());
    (0..m.nrows())
        .map(|r| {
            let mut acc = SigmaElement::zero();
            for c in 0..m.ncols() {
                if !m.at(r, c).is_zero() && !v[c].is_zero() {
                    acc = &acc + &v[c].scale(m.at(r, c));
                }
            }
            acc
        })
        .collect()
}

/// The twist `ν: Σ → M_d(Σ)` defining the right Σ-action on `V_Σ` by
/// `θᵢ·q = Σⱼ ν(q)ᵢⱼ·θⱼ`.
#[derive(Clone, Debug)]
pub struct NuTwist {
    /// The underlying space `V`.
    pub space: Space,
    /// The image `ν(G)`.
    pub gen_image: SigmaMat,
}

impl NuTwist {
    /// Extends `ν` from the generator to an arbitrary Laurent element by
    /// multiplicativity.
    pub fn apply(&self, s: &SigmaElement) -> Result<SigmaMat, Error> {
        let d = self.space.dim();
        let inv = self.gen_image.inverse_monomial();
        let mut out = SigmaMat::zeros(d, d);
        for (k, c) in s.terms() {
            let mut pow = SigmaMat::identity(d);
            let factor = if k >= 0 {
                self.gen_image.clone()
            } else {
                inv.clone().ok_or_else(|| Error::Domain {
                    detail: "twist image of G is not invertible".into(),
                })?
            };
            for _ in 0..k.unsigned_abs() {
                pow = pow.mul(&factor);
            }
            out = out.add(&pow.scale(&SigmaElement::from_scalar(c.clone())));
        }
        Ok(out)
    }

    /// Checks unitality and multiplicativity on powers of the generator up
    /// to the given exponent.
    pub fn is_unital_and_multiplicative(&self, max_power: i64) -> bool {
        let d = self.space.dim();
        if self.apply(&SigmaElement::one()).ok() != Some(SigmaMat::identity(d)) {
            return false;
        }
        for a in -max_power..=max_power {
            for b in -max_power..=max_power {
                let ga = SigmaElement::monomial(a, Scalar::one());
                let gb = SigmaElement::monomial(b, Scalar::one());
                let (Ok(ma), Ok(mb), Ok(mab)) =
                    (self.apply(&ga), self.apply(&gb), self.apply(&(&ga * &gb)))
                else {
                    return false;
                };
                if ma.mul(&mb) != mab {
                    return false;
                }
            }
        }
        true
    }

    /// Checks `∗ν∗ = ν⁻¹` on the generators `G` and `G⁻¹`: conjugating the
    /// twist by the two *-structures and composing with `ν` itself must
    /// give back `q·id`.
    pub fn star_conjugate_is_inverse(&self, star: &Mat) -> bool {
        let d = self.space.dim();
        for k in [1i64, -1] {
            let q = SigmaElement::monomial(k, Scalar::one());
            let Ok(nu_qstar) = self.apply(&q.conj()) else {
                return false;
            };
            // L_{li} = Σ_{k,j} conj(J_{ki})·J_{lj}·(ν(q*)_{kj})*
            let mut l = SigmaMat::zeros(d, d);
            for li in 0..d {
                for i in 0..d {
                    let mut acc = SigmaElement::zero();
                    for kk in 0..d {
                        for j in 0..d {
                            let coef = &star.at(kk, i).conj() * star.at(li, j);
                            if coef.is_zero() {
                                continue;
                            }
                            acc = &acc + &nu_qstar.at(kk, j).conj().scale(&coef);
                        }
                    }
                    l.set(li, i, acc);
                }
            }
            // ν applied back must contract to δ_{im}·q.
            for i in 0..d {
                for m in 0..d {
                    let mut acc = SigmaElement::zero();
                    for li in 0..d {
                        let Ok(nl) = self.apply(l.at(li, i)) else {
                            return false;
                        };
                        acc = &acc + nl.at(li, m);
                    }
                    let expected = if i == m { q.clone() } else { SigmaElement::zero() };
                    if acc != expected {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A quantum metric: the Σ-valued pairing on `V⊗V` together with the braid
/// operator it is symmetric under, the *-structure on `V`, and the twist
/// exponents of the basis vectors.
#[derive(Clone, Debug)]
pub struct QuantumMetric {
    /// The coordinate space `V`.
    pub space: Space,
    /// `entries[i][j] = g(θᵢ, θⱼ)`.
    pub entries: SigmaMat,
    /// The metric braiding σ.
    pub sigma: BraidOperator,
    /// The *-structure: `θᵢ* = Σ_k J_{ki}·θ_k`.
    pub star: Mat,
    /// Twist exponents: `θᵢ·c(G) = c(μ^{2eᵢ}G)·θᵢ`.
    pub twist_exponents: Vec<i64>,
}

/// The braid operator σ of the quantum sphere on the basis
/// `(η₊, η₋)` of one-forms.
pub fn hopf_sigma() -> BraidOperator {
    let v = Space::from_tags(&["+", "-"]);
    let vv = v.tensor(&v);
    let mut m = Mat::zeros(4, 4);
    m.set(0, 0, Scalar::one());
    m.set(1, 2, Scalar::mu_pow(-2));
    m.set(2, 1, Scalar::mu_pow(2));
    m.set(3, 3, Scalar::one());
    BraidOperator::new(v, Operator::new(vv.clone(), vv, m))
}

/// The auxiliary braid operator τ of the quantum sphere, induced by the
/// adjoint coaction charges of `η±`.
pub fn hopf_tau() -> BraidOperator {
    let v = Space::from_tags(&["+", "-"]);
    let vv = v.tensor(&v);
    let mut m = Mat::zeros(4, 4);
    m.set(0, 0, Scalar::mu_pow(-2));
    m.set(1, 2, Scalar::mu_pow(-2));
    m.set(2, 1, Scalar::mu_pow(2));
    m.set(3, 3, Scalar::mu_pow(2));
    BraidOperator::new(v, Operator::new(vv.clone(), vv, m))
}

/// The quantum-sphere metric: `g₊₋ = G`, `g₋₊ = μ⁻²G`, `g₊₊ = g₋₋ = 0`,
/// with `η₊* = μη₋`, `η₋* = μ⁻¹η₊` and twist exponents `±1`.
pub fn hopf_metric() -> QuantumMetric {
    let space = Space::from_tags(&["+", "-"]);
    let mut entries = SigmaMat::zeros(2, 2);
    entries.set(0, 1, SigmaElement::generator());
    entries.set(1, 0, SigmaElement::monomial(1, Scalar::mu_pow(-2)));
    let mut star = Mat::zeros(2, 2);
    star.set(1, 0, Scalar::mu_pow(1));
    star.set(0, 1, Scalar::mu_pow(-1));
    QuantumMetric {
        space,
        entries,
        sigma: hopf_sigma(),
        star,
        twist_exponents: vec![1, -1],
    }
}

/// The classical Euclidean metric on a `d`-dimensional space: `g = δ`,
/// σ = flip, Σ = scalars, trivial star and twists.
pub fn classical_metric(d: usize) -> QuantumMetric {
    let tags: Vec<String> = (1..=d).map(|i| format!("e{i}")).collect();
    let space = Space::new(tags);
    QuantumMetric {
        space: space.clone(),
        entries: SigmaMat::identity(d),
        sigma: classical_flip(&space),
        star: Mat::identity(d),
        twist_exponents: vec![0; d],
    }
}

impl QuantumMetric {
    fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Tensor degree of a coordinate vector of the given length.
    fn degree_of(&self, len: usize) -> usize {
        let d = self.dim();
        let mut n = 0;
        let mut size = 1;
        while size < len {
            size *= d;
            n += 1;
        }
        assert_eq!(size, len, "length is not a power of dim");
        n
    }

    /// The letters of the basis word with the given index (most significant
    /// factor first, matching Kronecker order).
    pub fn word(&self, mut index: usize, n: usize) -> Vec<usize> {
        let d = self.dim();
        let mut w = vec![0; n];
        for slot in (0..n).rev() {
            w[slot] = index % d;
            index /= d;
        }
        w
    }

    /// Total twist exponent of a word.
    pub fn word_charge(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.twist_exponents[i]).sum()
    }

    /// The extended metric on basis words: pairs the last letter of `a`
    /// with the first letter of `b` and recurses outwards, the inner values
    /// passing through the twists of the remaining prefix of `a`.
    pub fn pair_words(&self, a: &[usize], b: &[usize]) -> SigmaElement {
        assert_eq!(a.len(), b.len());
        if a.is_empty() {
            return SigmaElement::one();
        }
        let inner = self.pair_words(&a[1..], &b[..b.len() - 1]);
        let outer = self.entries.at(a[0], b[b.len() - 1]);
        &inner.twist(self.twist_exponents[a[0]]) * outer
    }

    /// The extended metric `g: V_Σ^{⊗n} ⊗_Σ V_Σ^{⊗n} → Σ` on coordinate
    /// vectors; tensors of different degree pair to zero.
    pub fn extended_metric(&self, x: &[SigmaElement], y: &[SigmaElement]) -> SigmaElement {
        if x.len() != y.len() {
            return SigmaElement::zero();
        }
        let n = self.degree_of(x.len());
        let mut acc = SigmaElement::zero();
        for (wi, cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            let w = self.word(wi, n);
            let charge = self.word_charge(&w);
            for (vi, cy) in y.iter().enumerate() {
                if cy.is_zero() {
                    continue;
                }
                let v = self.word(vi, n);
                let pair = self.pair_words(&w, &v);
                if pair.is_zero() {
                    continue;
                }
                acc = &acc + &(&(cx * &cy.twist(charge)) * &pair);
            }
        }
        acc
    }

    /// Tensor product of coordinate vectors: coefficients of the right
    /// factor move left across the words of the left factor.
    pub fn tensor_product(&self, x: &[SigmaElement], y: &[SigmaElement]) -> SigmaVec {
        let n = self.degree_of(x.len());
        let mut out = vec![SigmaElement::zero(); x.len() * y.len()];
        for (wi, cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            let charge = self.word_charge(&self.word(wi, n));
            for (vi, cy) in y.iter().enumerate() {
                if cy.is_zero() {
                    continue;
                }
                out[wi * y.len() + vi] = cx * &cy.twist(charge);
            }
        }
        out
    }

    /// The plain antimultiplicative star on `V_Σ^{⊗n}`:
    /// `(ξ₁⊗…⊗ξ_n)* = ξ_n*⊗…⊗ξ₁*`, coefficients conjugated and moved back
    /// to the left through the twists of the starred word.
    pub fn plain_star(&self, x: &[SigmaElement]) -> SigmaVec {
        let n = self.degree_of(x.len());
        let mut out = vec![SigmaElement::zero(); x.len()];
        for (wi, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = self.word(wi, n);
            for ti in 0..x.len() {
                let t = self.word(ti, n);
                let mut coef = Scalar::one();
                for (j, &tj) in t.iter().enumerate() {
                    coef = &coef * self.star.at(tj, w[n - 1 - j]);
                    if coef.is_zero() {
                        break;
                    }
                }
                if coef.is_zero() {
                    continue;
                }
                let charge = self.word_charge(&t);
                out[ti] = &out[ti] + &c.conj().twist(charge).scale(&coef);
            }
        }
        out
    }

    /// The graded star: plain star times `(−1)^{n(n−1)/2}`.
    pub fn graded_star(&self, x: &[SigmaElement]) -> SigmaVec {
        let n = self.degree_of(x.len());
        let sign = if (n * n.saturating_sub(1) / 2) % 2 == 0 {
            1
        } else {
            -1
        };
        self.plain_star(x)
            .into_iter()
            .map(|c| c.scale(&Scalar::from_int(sign)))
            .collect()
    }

    /// The Σ-valued scalar product `⟨ψ,ξ⟩ = g(ψ*,ξ)`, antilinear in the
    /// first slot; different degrees pair to zero.
    pub fn sigma_scalar_product(&self, x: &[SigmaElement], y: &[SigmaElement]) -> SigmaElement {
        if x.len() != y.len() {
            return SigmaElement::zero();
        }
        self.extended_metric(&self.plain_star(x), y)
    }

    /// The Σ-valued Gram matrix of `⟨⟩` on the degree-`n` word basis.
    pub fn gram(&self, n: usize) -> SigmaMat {
        let size = self.dim().pow(n as u32);
        SigmaMat::from_fn(size, size, |r, c| {
            let mut x = vec![SigmaElement::zero(); size];
            x[r] = SigmaElement::one();
            let mut y = vec![SigmaElement::zero(); size];
            y[c] = SigmaElement::one();
            self.sigma_scalar_product(&x, &y)
        })
    }

    /// The numeric Hermitian form `ω∘⟨⟩` on degree-`n` tensors.
    pub fn omega_form(&self, n: usize) -> HermitianForm {
        let g = self.gram(n);
        let mat = Mat::from_fn(g.nrows(), g.ncols(), |r, c| omega_state(g.at(r, c)));
        HermitianForm::new(self.space.tensor_power(n), mat)
    }

    /// Exact check that σ is Hermitian for the Σ-valued scalar product:
    /// `⟨ψ, σξ⟩ = ⟨σψ, ξ⟩` on all of `V⊗V`.
    pub fn hermiticity_of_sigma(&self) -> bool {
        let gram = self.gram(2);
        let s = &self.sigma.op.mat;
        let lhs = gram.mul(&SigmaMat::from_scalar_mat(s));
        let rhs = SigmaMat::from_scalar_mat(&s.dagger()).mul(&gram);
        lhs == rhs
    }

    /// Reconstructs the twist from its defining identity
    /// `ν(id⊗g) = (g⊗id)(id⊗σ)(σ⁻¹⊗id)` and checks consistency across all
    /// nonvanishing metric entries.
    pub fn build_nu_twist(&self) -> Result<NuTwist, Error> {
        let d = self.dim();
        let sigma_inv = self.sigma.inverse();
        let pre = Mat::identity(d)
            .kron(&self.sigma.op.mat)
            .mul(&sigma_inv.op.mat.kron(&Mat::identity(d)));
        let mut candidate: Option<SigmaMat> = None;
        let mut constant_consistent = true;
        for k in 0..d {
            for l in 0..d {
                let gkl = self.entries.at(k, l);
                if gkl.is_zero() {
                    continue;
                }
                // ν(g_kl)_{ij} from the image of θ_i ⊗ θ_k ⊗ θ_l.
                let mut m = SigmaMat::zeros(d, d);
                for i in 0..d {
                    let col = (i * d + k) * d + l;
                    for row in 0..d * d * d {
                        let coef = pre.at(row, col);
                        if coef.is_zero() {
                            continue;
                        }
                        let (a, rest) = (row / (d * d), row % (d * d));
                        let (b, j) = (rest / d, rest % d);
                        let contrib = self.entries.at(a, b).scale(coef);
                        m.set(i, j, m.at(i, j) + &contrib);
                    }
                }
                // Express m = ν(g_kl); infer ν(G) when g_kl has degree 1,
                // or check consistency directly for constants.
                let degs = gkl.degrees();
                match degs.as_slice() {
                    [0] => {
                        let c = gkl.coefficient(0);
                        let expected = SigmaMat::identity(d)
                            .scale(&SigmaElement::from_scalar(c));
                        if m != expected {
                            constant_consistent = false;
                        }
                    }
                    [1] => {
                        let c = gkl.coefficient(1);
                        let scaled = m.scale(&SigmaElement::from_scalar(c.inv()));
                        match &candidate {
                            None => candidate = Some(scaled),
                            Some(prev) if *prev != scaled => {
                                return Err(Error::Domain {
                                    detail: "twist defined by the metric is inconsistent"
                                        .into(),
                                })
                            }
                            _ => {}
                        }
                    }
                    _ => {
                        return Err(Error::Domain {
                            detail: format!(
                                "metric entry {gkl} is not a monomial of degree 0 or 1"
                            ),
                        })
                    }
                }
            }
        }
        if !constant_consistent {
            return Err(Error::Domain {
                detail: "twist defined by the metric is inconsistent".into(),
            });
        }
        let gen_image = candidate.unwrap_or_else(|| {
            SigmaMat::identity(d).scale(&SigmaElement::generator())
        });
        // The inferred twist must reproduce the stored exponents.
        let expected = SigmaMat::from_fn(d, d, |r, c| {
            if r == c {
                SigmaElement::monomial(1, Scalar::mu_pow(2 * self.twist_exponents[r]))
            } else {
                SigmaElement::zero()
            }
        });
        if gen_image != expected {
            return Err(Error::Domain {
                detail: "twist defined by the metric contradicts the stored exponents".into(),
            });
        }
        Ok(NuTwist {
            space: self.space.clone(),
            gen_image,
        })
    }

    /// The conjugation operator `C` of the *-structure with respect to the
    /// auxiliary orthonormal form: `(x*, y*) = (y, Cx)`, i.e. `C = (JᴴJ)ᵀ`.
    pub fn kappa_operator(&self) -> Mat {
        self.star.dagger().mul(&self.star).transpose()
    }

    /// Star-compatibility of a coupled braid pair with the *-structure:
    /// `∗σ = σ∗` and `∗τ∗ = τ⁻¹` on `V⊗V`.
    pub fn star_compatibility_report(&self, tau: &BraidOperator) -> Report {
        let mut rep = Report::new();
        let d = self.dim();
        // The star on V⊗V as S·conj with S = (J⊗J)·reversal.
        let mut rev = Mat::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                rev.set(j * d + i, i * d + j, Scalar::one());
            }
        }
        let s2 = self.star.kron(&self.star).mul(&rev);
        let sig = &self.sigma.op.mat;
        rep.require(
            "star_sigma_commute",
            sig.mul(&s2) == s2.mul(&sig.conj_entries()),
        );
        let t = &tau.op.mat;
        let conjugated = s2.mul(&t.conj_entries()).mul(&s2.conj_entries());
        rep.require(
            "star_tau_star_is_inverse",
            Some(conjugated) == t.inverse(),
        );
        rep
    }

    /// Exact check of the two-line compatibility of `g⊗g` with σ:
    /// `g⊗g = (g⊗g)(id⊗σ⊗id)(σ^{∓1}⊗σ^{±1})(id⊗σ⁻¹⊗id)`.
    fn funny_compatibility(&self) -> (bool, bool) {
        let d = self.dim();
        let id = Mat::identity(d);
        let s = &self.sigma.op.mat;
        let s_inv = self.sigma.inverse().op.mat;
        let mid = |m: &Mat| id.kron(m).kron(&id);
        let quad = |a: &Mat, b: &Mat| a.kron(b);
        let line = |middle: &Mat| {
            mid(s)
                .mul(middle)
                .mul(&mid(&s_inv))
        };
        let m1 = line(&quad(&s_inv, s));
        let m2 = line(&quad(s, &s_inv));
        // Compare (g⊗g)∘M with g⊗g as Σ-valued functionals on V^{⊗4}.
        let gg = |col: usize| -> SigmaElement {
            let w = self.word(col, 4);
            let front = self.entries.at(w[0], w[1]);
            let back = self.entries.at(w[2], w[3]);
            front * back
        };
        let check = |m: &Mat| -> bool {
            for col in 0..d * d * d * d {
                let mut acc = SigmaElement::zero();
                for row in 0..d * d * d * d {
                    let c = m.at(row, col);
                    if !c.is_zero() {
                        acc = &acc + &gg(row).scale(c);
                    }
                }
                if acc != gg(col) {
                    return false;
                }
            }
            true
        };
        (check(&m1), check(&m2))
    }

    /// Exact check of the left/right module exchange identity
    /// `(id⊗g)(σ⊗id) = (g⊗id)(id⊗σ)` on `V^{⊗3}` (values compared with all
    /// coefficients moved to the left).
    fn module_exchange(&self) -> bool {
        let d = self.dim();
        let id = Mat::identity(d);
        let lhs_mat = self.sigma.op.mat.kron(&id);
        let rhs_mat = id.kron(&self.sigma.op.mat);
        for col in 0..d * d * d {
            // LHS: apply σ⊗id, contract factors 2,3 with g; the value lands
            // right of factor 1 and twists back to the left.
            let mut lhs = vec![SigmaElement::zero(); d];
            for row in 0..d * d * d {
                let c = lhs_mat.at(row, col);
                if c.is_zero() {
                    continue;
                }
                let w = self.word(row, 3);
                let val = self.entries.at(w[1], w[2]).scale(c);
                lhs[w[0]] =
                    &lhs[w[0]] + &val.twist(self.twist_exponents[w[0]]);
            }
            // RHS: apply id⊗σ, contract factors 1,2; value is already left.
            let mut rhs = vec![SigmaElement::zero(); d];
            for row in 0..d * d * d {
                let c = rhs_mat.at(row, col);
                if c.is_zero() {
                    continue;
                }
                let w = self.word(row, 3);
                let val = self.entries.at(w[0], w[1]).scale(c);
                rhs[w[2]] = &rhs[w[2]] + &val;
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Verifies the full axiom suite in the given realization at the given
    /// sample points.
    pub fn axiom_report(&self, rel: &Realization, samples: &[BigRational]) -> Report {
        let mut rep = Report::new();
        let d = self.dim();

        // Braided symmetry g∘σ = g.
        let mut symmetric = true;
        for i in 0..d {
            for j in 0..d {
                let col = i * d + j;
                let mut acc = SigmaElement::zero();
                for row in 0..d * d {
                    let c = self.sigma.op.mat.at(row, col);
                    if !c.is_zero() {
                        acc = &acc + &self.entries.at(row / d, row % d).scale(c);
                    }
                }
                if acc != *self.entries.at(i, j) {
                    symmetric = false;
                }
            }
        }
        rep.require("braided_symmetric", symmetric);

        // Reality: g(x,y)* = g(y*,x*).
        let mut reality = true;
        for i in 0..d {
            for j in 0..d {
                let mut rhs = SigmaElement::zero();
                for k in 0..d {
                    for l in 0..d {
                        let coef = self.star.at(k, j) * self.star.at(l, i);
                        if !coef.is_zero() {
                            rhs = &rhs + &self.entries.at(k, l).scale(&coef);
                        }
                    }
                }
                if self.entries.at(i, j).conj() != rhs {
                    reality = false;
                }
            }
        }
        rep.require("reality", reality);

        let (f1, f2) = self.funny_compatibility();
        rep.require("sigma_compatibility_line1", f1);
        rep.require("sigma_compatibility_line2", f2);
        rep.require("module_exchange", self.module_exchange());

        // Invertibility and minimality.
        let inverse = self.entries.inverse_monomial();
        rep.push(
            "metric_invertible",
            inverse.is_some(),
            "exact inverse over Σ",
        );
        if let Some(inv) = &inverse {
            let mut degs: Vec<i64> = Vec::new();
            for m in [&self.entries, inv] {
                for r in 0..d {
                    for c in 0..d {
                        degs.extend(m.at(r, c).degrees());
                    }
                }
            }
            let gcd = degs
                .iter()
                .fold(0i64, |acc, &x| num::integer::gcd(acc, x.abs()));
            let trivial = degs.iter().all(|&x| x == 0);
            rep.push(
                "sigma_minimal",
                trivial || gcd == 1,
                "entries of g and g⁻¹ generate Σ",
            );
        } else {
            rep.push("sigma_minimal", false, "no inverse");
        }

        // Twist existence and properties.
        match self.build_nu_twist() {
            Ok(nu) => {
                rep.push("nu_twist_consistent", true, format!("ν(G) inferred on {d} basis vectors"));
                rep.require(
                    "nu_twist_unital_multiplicative",
                    nu.is_unital_and_multiplicative(3),
                );
                rep.require(
                    "nu_twist_star_inverse",
                    nu.star_conjugate_is_inverse(&self.star),
                );
            }
            Err(e) => rep.push("nu_twist_consistent", false, e.to_string()),
        }

        // Conjugation operator bookkeeping.
        let kappa = self.kappa_operator();
        match kappa.inverse() {
            Some(kinv) => {
                rep.require("kappa_trace_balanced", kappa.trace() == kinv.trace());
                let star_conj = self
                    .star
                    .mul(&kappa.conj_entries())
                    .mul(&self.star.conj_entries());
                rep.require("kappa_star_inverse", star_conj == kinv);
            }
            None => rep.push("kappa_trace_balanced", false, "C is singular"),
        }

        // Positivity in the realization.
        match self.gram(1).realize(rel) {
            Ok(g1) => {
                for mu0 in samples {
                    match positivity(&g1, mu0, false) {
                        Ok(ok) => rep.push(
                            format!("weak_positivity at mu={mu0}"),
                            ok,
                            "degree-1 Gram is PSD",
                        ),
                        Err(e) => rep.push(
                            format!("weak_positivity at mu={mu0}"),
                            false,
                            e.to_string(),
                        ),
                    }
                }
                for mu0 in samples {
                    match positivity(&g1, mu0, true) {
                        Ok(ok) => rep.push(
                            format!("strict_positivity_deg1 at mu={mu0}"),
                            ok,
                            "",
                        ),
                        Err(e) => rep.push(
                            format!("strict_positivity_deg1 at mu={mu0}"),
                            false,
                            e.to_string(),
                        ),
                    }
                }
            }
            Err(e) => rep.push("weak_positivity", false, e.to_string()),
        }
        match self.gram(2).realize(rel) {
            Ok(g2) => {
                for mu0 in samples {
                    match positivity(&g2, mu0, true) {
                        Ok(ok) => rep.push(
                            format!("strict_positivity_deg2 at mu={mu0}"),
                            ok,
                            "",
                        ),
                        Err(e) => rep.push(
                            format!("strict_positivity_deg2 at mu={mu0}"),
                            false,
                            e.to_string(),
                        ),
                    }
                }
            }
            Err(e) => rep.push("strict_positivity_deg2", false, e.to_string()),
        }

        // Positivity of the braided antisymmetrizers for the numeric form.
        for n in 2..=4usize {
            let a = antisymmetrizer(&self.sigma, n);
            match psd_check(&a, samples, &self.omega_form(n)) {
                Ok(sub) => rep.absorb(&format!("antisymmetrizer_n{n}"), sub),
                Err(e) => rep.push(
                    format!("antisymmetrizer_n{n}"),
                    false,
                    e.to_string(),
                ),
            }
        }

        rep.require("sigma_hermitian", self.hermiticity_of_sigma());
        rep
    }
}

/// Decides positivity of a Hermitian matrix at a rational `mu`: exact signs
/// for diagonal matrices, floating symmetric eigenvalues otherwise.
pub(crate) fn positivity(m: &Mat, mu0: &BigRational, strict: bool) -> Result<bool, Error> {
    let n = m.nrows();
    let mut diagonal = true;
    'scan: for r in 0..n {
        for c in 0..n {
            if r != c && !m.at(r, c).is_zero() {
                diagonal = false;
                break 'scan;
            }
        }
    }
    if diagonal {
        for r in 0..n {
            let (p, rad) = m.at(r, r).eval_at_mu_exact(mu0)?;
            if !p.im.is_zero() || !rad.im.is_zero() {
                return Err(Error::NotHermitian {
                    detail: format!("diagonal entry {} is not real", m.at(r, r)),
                });
            }
            let sign = real_radical_sign(&p.re, &rad.re, mu0);
            if sign < 0 || (strict && sign == 0) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let space = Space::new((0..n).map(|i| format!("b{i}")).collect());
    let op = Operator::new(space.clone(), space.clone(), m.clone());
    let vals = eig_sym_float(&op, mu0, &HermitianForm::standard(&space))?;
    let min = vals.first().copied().unwrap_or(0.0);
    Ok(if strict { min > 1e-10 } else { min > -1e-10 })
}

/// Exact sign of `p + r·√mu` for rational `p, r` and positive rational `mu`.
fn real_radical_sign(p: &BigRational, r: &BigRational, mu0: &BigRational) -> i32 {
    let sgn = |x: &BigRational| -> i32 {
        if x.is_zero() {
            0
        } else if x < &BigRational::from(BigInt::from(0)) {
            -1
        } else {
            1
        }
    };
    let (sp, sr) = (sgn(p), sgn(r));
    if sr == 0 {
        return sp;
    }
    if sp == 0 || sp == sr {
        return sr;
    }
    // Opposite signs: compare p² with mu·r².
    let p2 = p * p;
    let mr2 = mu0 * &(r * r);
    match p2.cmp(&mr2) {
        std::cmp::Ordering::Greater => sp,
        std::cmp::Ordering::Less => sr,
        std::cmp::Ordering::Equal => 0,
    }
}

/// Σ presented through a realization: the ordered generating family (the
/// metric entries and their inverses) as concrete matrices.
#[derive(Clone, Debug)]
pub struct SigmaAlgebra {
    /// The chosen realization.
    pub realization: Realization,
    /// Named abstract generators.
    pub generators: Vec<(String, SigmaElement)>,
}

impl SigmaAlgebra {
    /// Collects the nonzero entries of `g` and `g⁻¹` as generators.
    pub fn from_metric(g: &QuantumMetric, realization: Realization) -> Result<SigmaAlgebra, Error> {
        let d = g.space.dim();
        let inv = g.entries.inverse_monomial().ok_or_else(|| Error::Domain {
            detail: "metric is not invertible over Σ".into(),
        })?;
        let mut generators = Vec::new();
        let tags = g.space.basis();
        for (mat, prefix) in [(&g.entries, "g"), (&inv, "ginv")] {
            for r in 0..d {
                for c in 0..d {
                    if !mat.at(r, c).is_zero() {
                        generators.push((
                            format!("{prefix}_{}{}", tags[r], tags[c]),
                            mat.at(r, c).clone(),
                        ));
                    }
                }
            }
        }
        Ok(SigmaAlgebra {
            realization,
            generators,
        })
    }

    /// The generators as concrete matrices.
    pub fn realized_generators(&self) -> Result<Vec<(String, Mat)>, Error> {
        self.generators
            .iter()
            .map(|(n, s)| Ok((n.clone(), self.realization.represent(s)?)))
            .collect()
    }

    /// Checks that realizing is multiplicative on all generator words up to
    /// the given length, i.e. that products of generator matrices coincide
    /// with the realizations of the abstract products.
    pub fn representation_multiplicative(&self, max_len: usize) -> Result<bool, Error> {
        let dim = self.realization.dim();
        let mut words: Vec<(SigmaElement, Mat)> =
            vec![(SigmaElement::one(), Mat::identity(dim))];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (abs, mat) in &words {
                for (_, gen) in &self.generators {
                    let abs2 = abs * gen;
                    let mat2 = mat.mul(&self.realization.represent(gen)?);
                    if self.realization.represent(&abs2)? != mat2 {
                        return Ok(false);
                    }
                    next.push((abs2, mat2));
                }
            }
            words = next;
        }
        Ok(true)
    }

    /// The star on generators agrees with conjugate transposition in the
    /// realization.
    pub fn star_is_adjoint(&self) -> Result<bool, Error> {
        for (_, s) in &self.generators {
            if self.realization.represent(&s.conj())? != self.realization.represent(s)?.dagger() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::big_rat;
    use proptest::prelude::*;

    fn samples() -> Vec<BigRational> {
        vec![big_rat(1, 4), big_rat(1, 2), big_rat(3, 4)]
    }

    #[test]
    fn hopf_axiom_report_is_green_in_the_spinor_realization() {
        let g = hopf_metric();
        let rep = g.axiom_report(&Realization::Spinor, &samples());
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn hopf_axiom_report_is_green_in_the_l2z_realization() {
        let g = hopf_metric();
        let rep = g.axiom_report(&Realization::L2Z { k_max: 16 }, &samples());
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn classical_metric_report_is_green() {
        let g = classical_metric(2);
        let rep = g.axiom_report(&Realization::Classical, &samples());
        assert!(rep.all_passed(), "{rep}");
        let g3 = classical_metric(3);
        let rep3 = g3.axiom_report(&Realization::Classical, &[big_rat(1, 2)]);
        assert!(rep3.all_passed(), "{rep3}");
    }

    #[test]
    fn degree_one_gram_matches_the_displayed_values() {
        let g = hopf_metric();
        let gram = g.gram(1);
        // ⟨η₊,η₊⟩ = μ·g₋₊ = μ⁻¹·g₊₋ and likewise for η₋; off-diagonal zero.
        let expected = SigmaElement::monomial(1, Scalar::mu_pow(-1));
        assert_eq!(gram.at(0, 0), &expected);
        assert_eq!(gram.at(1, 1), &expected);
        assert!(gram.at(0, 1).is_zero());
        assert!(gram.at(1, 0).is_zero());
        // Spinor realization: ½·diag(μ⁻¹, μ).
        let m = Realization::Spinor.represent(&expected).unwrap();
        assert_eq!(m.at(0, 0), &(Scalar::from_ratio(1, 2) * Scalar::mu_pow(-1)));
        assert_eq!(m.at(1, 1), &(Scalar::from_ratio(1, 2) * Scalar::mu_pow(1)));
    }

    #[test]
    fn degree_two_gram_is_the_expected_diagonal() {
        let g = hopf_metric();
        let gram = g.gram(2);
        let g2 = &SigmaElement::generator() * &SigmaElement::generator();
        let weights = [
            Scalar::mu_pow(-4),
            Scalar::one(),
            Scalar::mu_pow(-4),
            Scalar::one(),
        ];
        for (i, w) in weights.iter().enumerate() {
            assert_eq!(gram.at(i, i), &g2.scale(w), "slot {i}");
            for j in 0..4 {
                if i != j {
                    assert!(gram.at(i, j).is_zero());
                }
            }
        }
        // ⟨z,z⟩ = 2G² for z = η₊⊗η₋ − μ²·η₋⊗η₊.
        let z = vec![
            SigmaElement::zero(),
            SigmaElement::one(),
            SigmaElement::from_scalar(-Scalar::mu_pow(2)),
            SigmaElement::zero(),
        ];
        let zz = g.sigma_scalar_product(&z, &z);
        assert_eq!(zz, g2.scale(&Scalar::from_int(2)));
    }

    #[test]
    fn scalar_product_satisfies_the_sesquilinearity_identities() {
        let g = hopf_metric();
        let a = SigmaElement::monomial(1, Scalar::from_int(2))
            + SigmaElement::from_scalar(Scalar::i());
        let x = vec![
            SigmaElement::generator(),
            SigmaElement::from_scalar(Scalar::mu_pow(3)),
        ];
        let y = vec![
            SigmaElement::monomial(-1, Scalar::one()),
            SigmaElement::one(),
        ];
        // ⟨ψ, ξ·a⟩ = ⟨ψ,ξ⟩·a  (right action: ξ·a twists per word).
        let xa: SigmaVec = y
            .iter()
            .enumerate()
            .map(|(i, c)| c * &a.twist(g.twist_exponents[i]))
            .collect();
        assert_eq!(
            g.sigma_scalar_product(&x, &xa),
            &g.sigma_scalar_product(&x, &y) * &a
        );
        // ⟨ψ·a, ξ⟩ = a*·⟨ψ,ξ⟩.
        let psi_a: SigmaVec = x
            .iter()
            .enumerate()
            .map(|(i, c)| c * &a.twist(g.twist_exponents[i]))
            .collect();
        assert_eq!(
            g.sigma_scalar_product(&psi_a, &y),
            &a.conj() * &g.sigma_scalar_product(&x, &y)
        );
        // ⟨ψ, a·ξ⟩ = ⟨a*·ψ, ξ⟩.
        let ay: SigmaVec = y.iter().map(|c| &a * c).collect();
        let astar_x: SigmaVec = x.iter().map(|c| &a.conj() * c).collect();
        assert_eq!(
            g.sigma_scalar_product(&x, &ay),
            g.sigma_scalar_product(&astar_x, &y)
        );
        // ⟨ψ,ξ⟩* = ⟨ξ,ψ⟩.
        assert_eq!(
            g.sigma_scalar_product(&x, &y).conj(),
            g.sigma_scalar_product(&y, &x)
        );
        // Different degrees are orthogonal.
        let one_tensor = vec![SigmaElement::one(), SigmaElement::zero()];
        let two_tensor = vec![
            SigmaElement::one(),
            SigmaElement::zero(),
            SigmaElement::zero(),
            SigmaElement::zero(),
        ];
        assert!(g.sigma_scalar_product(&one_tensor, &two_tensor).is_zero());
    }

    #[test]
    fn plain_star_is_involutive_and_antimultiplicative() {
        let g = hopf_metric();
        let x = vec![
            SigmaElement::monomial(2, Scalar::i()),
            SigmaElement::one(),
        ];
        let xss = g.plain_star(&g.plain_star(&x));
        assert_eq!(xss, x);
        // (x⊗y)* = y*⊗x* on two sample vectors.
        let y = vec![
            SigmaElement::generator(),
            SigmaElement::from_scalar(Scalar::from_int(3)),
        ];
        let lhs = g.plain_star(&g.tensor_product(&x, &y));
        let rhs = g.tensor_product(&g.plain_star(&y), &g.plain_star(&x));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn hermiticity_of_sigma_holds_for_hopf_and_fails_for_broken_pairs() {
        assert!(hopf_metric().hermiticity_of_sigma());
        assert!(classical_metric(2).hermiticity_of_sigma());
        // Break the braiding: i·flip is anti-Hermitian for the same Gram.
        let mut broken = classical_metric(2);
        let scaled = broken.sigma.op.scale(&Scalar::i());
        broken.sigma = BraidOperator::new(broken.space.clone(), scaled);
        assert!(!broken.hermiticity_of_sigma());
    }

    #[test]
    fn nu_twist_matches_the_charge_pattern() {
        let g = hopf_metric();
        let nu = g.build_nu_twist().unwrap();
        let expected = SigmaMat::from_fn(2, 2, |r, c| {
            if r == c {
                SigmaElement::monomial(1, Scalar::mu_pow(if r == 0 { 2 } else { -2 }))
            } else {
                SigmaElement::zero()
            }
        });
        assert_eq!(nu.gen_image, expected);
        assert!(nu.is_unital_and_multiplicative(3));
        assert!(nu.star_conjugate_is_inverse(&g.star));

        let cg = classical_metric(2);
        let nu_c = cg.build_nu_twist().unwrap();
        assert_eq!(
            nu_c.gen_image,
            SigmaMat::identity(2).scale(&SigmaElement::generator())
        );
        assert!(nu_c.star_conjugate_is_inverse(&cg.star));
    }

    #[test]
    fn kappa_operator_is_the_expected_diagonal() {
        let g = hopf_metric();
        let kappa = g.kappa_operator();
        let mut expected = Mat::zeros(2, 2);
        expected.set(0, 0, Scalar::mu_pow(2));
        expected.set(1, 1, Scalar::mu_pow(-2));
        assert_eq!(kappa, expected);
    }

    #[test]
    fn star_compatibility_of_the_hopf_braid_pair() {
        let g = hopf_metric();
        let rep = g.star_compatibility_report(&hopf_tau());
        assert!(rep.all_passed(), "{rep}");
        let c = classical_metric(2);
        let rep = c.star_compatibility_report(&classical_flip(&c.space));
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn sigma_algebra_realizations_are_multiplicative_star_representations() {
        let g = hopf_metric();
        for rel in [Realization::Spinor, Realization::L2Z { k_max: 16 }] {
            let alg = SigmaAlgebra::from_metric(&g, rel).unwrap();
            assert!(alg.representation_multiplicative(3).unwrap());
            assert!(alg.star_is_adjoint().unwrap());
        }
        let c = classical_metric(2);
        let alg = SigmaAlgebra::from_metric(&c, Realization::Classical).unwrap();
        assert!(alg.representation_multiplicative(3).unwrap());
    }

    #[test]
    fn omega_state_values() {
        // ω(1) = 1, ω(G) = (1+μ²)/4, ω(G⁻¹) = 1 + μ⁻².
        assert_eq!(omega_state(&SigmaElement::one()), Scalar::one());
        let expected_g = (Scalar::one() + Scalar::mu_pow(2)) * Scalar::from_ratio(1, 4);
        assert_eq!(omega_state(&SigmaElement::generator()), expected_g);
        let expected_ginv = Scalar::one() + Scalar::mu_pow(-2);
        assert_eq!(
            omega_state(&SigmaElement::monomial(-1, Scalar::one())),
            expected_ginv
        );
    }

    #[test]
    fn sigma_element_display() {
        let a = SigmaElement::monomial(1, Scalar::one() + Scalar::mu_pow(2));
        assert_eq!(a.to_string(), "(1+mu^2)*G");
        let b = SigmaElement::monomial(2, -(Scalar::from_int(2) * Scalar::i()));
        assert_eq!(b.to_string(), "-2*i*G^2");
        let c = SigmaElement::from_scalar(Scalar::from_int(1))
            + SigmaElement::monomial(1, -Scalar::one());
        assert_eq!(c.to_string(), "1 - G");
        assert_eq!(SigmaElement::zero().to_string(), "0");
    }

    #[test]
    fn classical_realization_rejects_nonconstant_elements() {
        let err = Realization::Classical.represent(&SigmaElement::generator());
        assert!(err.is_err());
    }

    proptest! {
        #[test]
        fn twist_is_an_algebra_endomorphism(
            k1 in -3i64..4, k2 in -3i64..4,
            a in -4i64..5, b in -4i64..5, e in -2i64..3,
        ) {
            let x = SigmaElement::monomial(k1, Scalar::from_int(a))
                + SigmaElement::monomial(k2, Scalar::i());
            let y = SigmaElement::monomial(k2, Scalar::from_int(b))
                + SigmaElement::one();
            prop_assert_eq!(
                (&x * &y).twist(e),
                &x.twist(e) * &y.twist(e)
            );
        }

        #[test]
        fn omega_is_a_positive_state(k in -3i64..4, a in -5i64..6, b in -5i64..6) {
            let x = SigmaElement::monomial(k, Scalar::from_int(a))
                + SigmaElement::from_scalar(Scalar::from_int(b) * Scalar::i());
            let val = omega_state(&(&x.conj() * &x))
                .eval_at_mu(&big_rat(1, 2))
                .unwrap();
            prop_assert!(val.re >= -1e-12);
            prop_assert!(val.im.abs() < 1e-12);
        }
    }
}
