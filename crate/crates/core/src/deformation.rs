//! Truncated restricted formal deformations.
//!
//! A deformation of order `N` is a pair of series `m_t = sum t^k m_k` and
//! `omega_t = sum t^k omega_k` computed modulo `t^(N+1)`, with `(m_0, omega_0)`
//! the bracket and p-map of the base algebra. Each `m_k` is an alternating
//! 2-cochain with values in `L`, each `omega_k` is given on the basis.
//!
//! `omega_t` is evaluated on `L[[t]]` by Jacobson's formula for the bracket
//! `m_t`, using `omega_t(t^a e_j) = t^(ap) omega_t(e_j)`. For plain vectors of
//! `L` this is the only meaningful extension; for general series it is needed
//! to conjugate by formal automorphisms. In characteristic 2 it reduces to
//!
//! ```text
//! omega_t(sum t^i x_i) = sum t^(2i) omega_t(x_i) + sum_(i<j) t^(i+j) m_t(x_i, x_j).
//! ```

use crate::algebra::{pmap_fold, RestrictedLieAlgebra, RestrictedModule};
use crate::cohomology_ce::{ce_diff, CeCochain};
use crate::cohomology_char2::{
    char2_cocycle_oracle, d_star2, d_star2_matrix, Char2Cochain, TupleWitness,
};
use crate::cohomology_restricted::{
    cochain_to_matrix, cocycle_oracle, d_star_1_matrix, d_star_2, ind1, matrix_to_cochain,
    PairWitness, StarCochain2,
};
use crate::error::{Error, Result};
use crate::gf::{FpMatrix, FpVector, PrimeField};
use crate::sweep::Sweep;

/// Largest supported truncation order.
pub const MAX_DEFORMATION_ORDER: usize = 8;

/// A truncated series `sum_(k <= N) t^k v_k`; entry `k` is `v_k`.
pub type Series = Vec<FpVector>;

fn bracket_cochain(alg: &RestrictedLieAlgebra) -> CeCochain {
    let lie = alg.lie();
    CeCochain::from_fn(alg.field(), alg.dim(), alg.dim(), 2, |t| {
        lie.basis_bracket(t[0], t[1]).to_vec()
    })
}

fn table_of(c: &CeCochain) -> Vec<FpVector> {
    let n = c.algebra_dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (c.field().unit_vec(n, i), c.field().unit_vec(n, j));
            out.push(c.eval(&[&ei, &ej]));
        }
    }
    out
}

fn bilinear(f: PrimeField, table: &[FpVector], x: &[u32], y: &[u32], out: &mut [u32]) {
    let n = x.len();
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            if b != 0 {
                f.axpy(out, f.mul(a, b), &table[i * n + j]);
            }
        }
    }
}

fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&a| a == 0)
}

/// A restricted formal deformation modulo `t^(N+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedDeformation {
    base: RestrictedLieAlgebra,
    /// `m_0, .., m_N`.
    brackets: Vec<CeCochain>,
    /// `omega_0, .., omega_N` on the basis.
    pmaps: Vec<Vec<FpVector>>,
    /// `tables[k][i * n + j] = m_k(e_i, e_j)`.
    tables: Vec<Vec<FpVector>>,
}

impl TruncatedDeformation {
    /// The deformation with `terms[k - 1] = (m_k, omega_k)`.
    pub fn new(base: RestrictedLieAlgebra, terms: Vec<(CeCochain, Vec<FpVector>)>) -> Result<Self> {
        if terms.len() > MAX_DEFORMATION_ORDER {
            return Err(Error::DegreeTooLarge {
                degree: terms.len(),
                cap: MAX_DEFORMATION_ORDER,
            });
        }
        let f = base.field();
        let n = base.dim();
        let mut d = TruncatedDeformation {
            brackets: vec![bracket_cochain(&base)],
            pmaps: vec![base.pmap_images().to_vec()],
            tables: Vec::new(),
            base,
        };
        for (k, (m, w)) in terms.into_iter().enumerate() {
            if m.degree() != 2 || m.algebra_dim() != n || m.module_dim() != n || m.field() != f {
                return Err(Error::InvalidInput(format!(
                    "m_{} is not an L-valued 2-cochain on L",
                    k + 1
                )));
            }
            if w.len() != n
                || w.iter()
                    .any(|v| v.len() != n || v.iter().any(|&a| a >= f.p()))
            {
                return Err(Error::InvalidInput(format!(
                    "omega_{} needs {n} reduced images of length {n}",
                    k + 1
                )));
            }
            d.brackets.push(m);
            d.pmaps.push(w);
        }
        d.tables = d.brackets.iter().map(table_of).collect();
        Ok(d)
    }

    /// The base algebra seen as a deformation of order `order` with zero terms.
    pub fn trivial(base: RestrictedLieAlgebra, order: usize) -> Result<Self> {
        let n = base.dim();
        let f = base.field();
        let terms = (0..order)
            .map(|_| (CeCochain::zero(f, n, n, 2), vec![vec![0; n]; n]))
            .collect();
        Self::new(base, terms)
    }

    /// An order-1 deformation `(m + t m_1, omega + t omega_1)`.
    pub fn first_order(
        base: RestrictedLieAlgebra,
        m1: CeCochain,
        omega1: Vec<FpVector>,
    ) -> Result<Self> {
        Self::new(base, vec![(m1, omega1)])
    }

    pub fn base(&self) -> &RestrictedLieAlgebra {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.brackets.len() - 1
    }

    pub fn field(&self) -> PrimeField {
        self.base.field()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// `m_k`, zero beyond the truncation order.
    pub fn bracket_term(&self, k: usize) -> CeCochain {
        self.brackets
            .get(k)
            .cloned()
            .unwrap_or_else(|| CeCochain::zero(self.field(), self.dim(), self.dim(), 2))
    }

    /// `omega_k` on the basis, zero beyond the truncation order.
    pub fn pmap_term(&self, k: usize) -> Vec<FpVector> {
        self.pmaps
            .get(k)
            .cloned()
            .unwrap_or_else(|| vec![vec![0; self.dim()]; self.dim()])
    }

    /// The terms `(m_k, omega_k)` for `k >= 1`.
    pub fn terms(&self) -> Vec<(CeCochain, Vec<FpVector>)> {
        (1..=self.order())
            .map(|k| (self.bracket_term(k), self.pmap_term(k)))
            .collect()
    }

    /// `(m_1, omega_1)`.
    pub fn infinitesimal(&self) -> (CeCochain, Vec<FpVector>) {
        (self.bracket_term(1), self.pmap_term(1))
    }

    /// The same deformation modulo `t^(q+1)`.
    pub fn truncated(&self, q: usize) -> Self {
        let mut terms = self.terms();
        terms.truncate(q);
        Self::new(self.base.clone(), terms).expect("shorter than a valid deformation")
    }

    /// Append `(m_(N+1), omega_(N+1))`.
    pub fn extended(&self, m: CeCochain, omega: Vec<FpVector>) -> Result<Self> {
        let mut terms = self.terms();
        terms.push((m, omega));
        Self::new(self.base.clone(), terms)
    }

    pub fn zero_series(&self) -> Series {
        vec![vec![0; self.dim()]; self.order() + 1]
    }

    /// `x` as a constant series.
    pub fn constant(&self, x: &[u32]) -> Series {
        let mut s = self.zero_series();
        s[0] = x.to_vec();
        s
    }

    /// `m_k(x, y)` for vectors.
    pub fn bracket_at(&self, k: usize, x: &[u32], y: &[u32]) -> FpVector {
        let mut out = vec![0; self.dim()];
        if let Some(t) = self.tables.get(k) {
            bilinear(self.field(), t, x, y, &mut out);
        }
        out
    }

    /// `m_t(a, b)` for series.
    pub fn bracket_t(&self, a: &Series, b: &Series) -> Series {
        let f = self.field();
        let big_n = self.order();
        let mut out = self.zero_series();
        for (i, x) in a.iter().enumerate() {
            if is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(big_n + 1 - i) {
                if is_zero(y) {
                    continue;
                }
                for (k, t) in self.tables.iter().enumerate().take(big_n + 1 - i - j) {
                    bilinear(f, t, x, y, &mut out[i + j + k]);
                }
            }
        }
        out
    }

    /// `m_t(x, y)` for vectors.
    pub fn bracket_t_vectors(&self, x: &[u32], y: &[u32]) -> Series {
        (0..=self.order())
            .map(|k| self.bracket_at(k, x, y))
            .collect()
    }

    /// `omega_t(e_j)` as a series.
    pub fn pmap_t_basis(&self, j: usize) -> Series {
        self.pmaps.iter().map(|w| w[j].clone()).collect()
    }

    fn flatten(&self, s: &Series) -> FpVector {
        s.concat()
    }

    fn unflatten(&self, v: &[u32]) -> Series {
        v.chunks(self.dim()).map(|c| c.to_vec()).collect()
    }

    /// `omega_t(a)` for a series `a`.
    pub fn pmap_t(&self, a: &Series) -> Series {
        let f = self.field();
        let n = self.dim();
        let big_n = self.order();
        let p = f.p() as usize;
        let mut images = Vec::with_capacity(n * (big_n + 1));
        for k in 0..=big_n {
            for j in 0..n {
                let mut s = self.zero_series();
                if k * p <= big_n {
                    for (q, w) in self.pmaps.iter().enumerate().take(big_n + 1 - k * p) {
                        s[k * p + q] = w[j].clone();
                    }
                }
                images.push(self.flatten(&s));
            }
        }
        let bracket = |x: &[u32], y: &[u32]| {
            self.flatten(&self.bracket_t(&self.unflatten(x), &self.unflatten(y)))
        };
        self.unflatten(&pmap_fold(f, &self.flatten(a), &images, bracket))
    }

    /// `omega_t(x)` for a vector `x`.
    pub fn pmap_t_vector(&self, x: &[u32]) -> Series {
        self.pmap_t(&self.constant(x))
    }

    /// `m_t[x, y, .., y]` with `p` copies of `y`.
    pub fn p_fold_bracket(&self, x: &Series, y: &Series) -> Series {
        let mut acc = x.clone();
        for _ in 0..self.field().p() {
            acc = self.bracket_t(&acc, y);
        }
        acc
    }

    /// `m_t[a, b, .., b] - m_t(a, omega_t(b))`; vanishes for a restricted structure.
    fn pmap_defect(&self, a: &Series, b: &Series, wb: &Series) -> Series {
        let f = self.field();
        let lhs = self.p_fold_bracket(a, b);
        let rhs = self.bracket_t(a, wb);
        lhs.iter().zip(&rhs).map(|(u, v)| f.sub_vec(u, v)).collect()
    }

    /// `m_t(x, m_t(y, z)) + m_t(y, m_t(z, x)) + m_t(z, m_t(x, y))`.
    fn jacobi_defect(&self, x: &Series, y: &Series, z: &Series) -> Series {
        let f = self.field();
        let mut out = self.bracket_t(x, &self.bracket_t(y, z));
        for (a, b) in out.iter_mut().zip(self.bracket_t(y, &self.bracket_t(z, x))) {
            f.add_assign(a, &b);
        }
        for (a, b) in out.iter_mut().zip(self.bracket_t(z, &self.bracket_t(x, y))) {
            f.add_assign(a, &b);
        }
        out
    }
}

/// Failures collected for one power of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderReport {
    pub order: usize,
    /// A basis triple where the Jacobi coefficient is non-zero.
    pub jacobi: Option<[usize; 3]>,
    /// A pair `(x, y)` where `m_t(x, omega_t(y))` and `m_t[x, y, .., y]` differ.
    pub pmap: Option<PairWitness>,
    /// Characteristic 2: a pair violating
    /// `omega_t(x + y) = omega_t(x) + omega_t(y) + m_t(x, y)`.
    pub additivity: Option<PairWitness>,
}

impl OrderReport {
    fn new(order: usize) -> Self {
        OrderReport {
            order,
            jacobi: None,
            pmap: None,
            additivity: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.jacobi.is_none() && self.pmap.is_none() && self.additivity.is_none()
    }
}

/// Outcome of [`verify_deformation`], one entry per power of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationReport {
    pub orders: Vec<OrderReport>,
    /// Whether `y` ran over every vector of `L`.
    pub exhaustive: bool,
}

impl DeformationReport {
    pub fn passed(&self) -> bool {
        self.orders.iter().all(OrderReport::passed)
    }

    pub fn passed_through(&self, q: usize) -> bool {
        self.orders.iter().take(q + 1).all(OrderReport::passed)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.orders.iter().find(|r| !r.passed()).map(|r| r.order)
    }
}

/// Check the deformed Jacobi identity on basis triples and the deformed p-map
/// identity `m_t(x, omega_t(y)) = m_t[x, y, .., y]` with `x` on the basis
/// (both sides are linear in `x`) and `y` over the sweep, coefficient by
/// coefficient. In characteristic 2 the additivity of `omega_t` is also
/// checked on pairs from the sweep.
pub fn verify_deformation(d: &TruncatedDeformation, sweep: &Sweep) -> DeformationReport {
    let f = d.field();
    let n = d.dim();
    let mut orders: Vec<OrderReport> = (0..=d.order()).map(OrderReport::new).collect();
    let basis: Vec<Series> = (0..n).map(|i| d.constant(&f.unit_vec(n, i))).collect();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for (q, c) in d
                    .jacobi_defect(&basis[i], &basis[j], &basis[k])
                    .iter()
                    .enumerate()
                {
                    if !is_zero(c) && orders[q].jacobi.is_none() {
                        orders[q].jacobi = Some([i, j, k]);
                    }
                }
            }
        }
    }
    for y in sweep.vectors(f, n) {
        let ys = d.constant(&y);
        let wy = d.pmap_t(&ys);
        for (i, x) in basis.iter().enumerate() {
            for (q, c) in d.pmap_defect(x, &ys, &wy).iter().enumerate() {
                if !is_zero(c) && orders[q].pmap.is_none() {
                    orders[q].pmap = Some(PairWitness {
                        x: f.unit_vec(n, i),
                        y: y.clone(),
                    });
                }
            }
        }
    }
    if f.p() == 2 {
        for (x, y) in sweep.pairs(f, n) {
            let lhs = d.pmap_t_vector(&f.add_vec(&x, &y));
            let wx = d.pmap_t_vector(&x);
            let wy = d.pmap_t_vector(&y);
            let mxy = d.bracket_t_vectors(&x, &y);
            for q in 0..=d.order() {
                let mut rhs = f.add_vec(&wx[q], &wy[q]);
                f.add_assign(&mut rhs, &mxy[q]);
                if lhs[q] != rhs && orders[q].additivity.is_none() {
                    orders[q].additivity = Some(PairWitness {
                        x: x.clone(),
                        y: y.clone(),
                    });
                }
            }
        }
    }
    DeformationReport {
        orders,
        exhaustive: sweep.is_exhaustive(f, &[n]),
    }
}

/// Coordinates of `(m_1, omega_1)`: values of `m_1` on increasing pairs, then
/// `omega_1(e_i)`. The layout is shared by both characteristics.
fn pair_coords(m: &CeCochain, omega: &[FpVector]) -> FpVector {
    let mut out = m.coords().to_vec();
    for w in omega {
        out.extend_from_slice(w);
    }
    out
}

/// Whether `(m_1, omega_1)` is a restricted 2-cocycle, basis conditions only.
fn is_cocycle(module: &RestrictedModule, m: &CeCochain, omega: &[FpVector]) -> Result<bool> {
    if module.algebra().p() == 2 {
        let c = Char2Cochain::from_coords(module, 2, &pair_coords(m, omega))?;
        Ok(d_star2(module, &c)?.is_zero())
    } else {
        let c = StarCochain2 {
            phi: m.clone(),
            omega: omega.to_vec(),
        };
        Ok(d_star_2(module, &c)?.is_zero())
    }
}

/// Solve `(m_1, omega_1) = d^1_*(psi)`; `None` when the class is non-trivial.
/// The input must be a restricted 2-cocycle.
pub fn is_trivial_infinitesimal(
    alg: &RestrictedLieAlgebra,
    m1: &CeCochain,
    omega1: &[FpVector],
) -> Result<Option<FpMatrix>> {
    let module = RestrictedModule::adjoint(alg);
    let f = alg.field();
    let n = alg.dim();
    if m1.degree() != 2 || m1.algebra_dim() != n || m1.module_dim() != n || omega1.len() != n {
        return Err(Error::InvalidInput(
            "expected an adjoint restricted 2-cochain".into(),
        ));
    }
    if !is_cocycle(&module, m1, omega1)? {
        return Err(Error::NotCocycle);
    }
    let d1 = if alg.p() == 2 {
        d_star2_matrix(&module, 1)?
    } else {
        d_star_1_matrix(&module)?
    };
    Ok(d1.solve(&pair_coords(m1, omega1)).into_vector().map(|v| {
        let psi = CeCochain::from_coords(f, n, n, 1, v).expect("1-cochain coordinates");
        cochain_to_matrix(&psi)
    }))
}

/// Outcome of [`infinitesimal_cocycle_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinitesimalCheck {
    /// `(m_1, omega_1)` is a restricted 2-cocycle, on the basis and on all
    /// vectors of the sweep.
    pub cocycle: bool,
    /// When the class is trivial, some `psi` with `(m_1, omega_1) = d^1_*(psi)`.
    pub coboundary: Option<FpMatrix>,
}

impl InfinitesimalCheck {
    pub fn is_trivial(&self) -> bool {
        self.coboundary.is_some()
    }
}

/// Decide whether `(m_1, omega_1)` is a restricted 2-cocycle and whether its
/// class vanishes. The basis conditions and the all-vector oracle of the
/// cohomology module must agree, otherwise [`Error::OracleMismatch`].
pub fn infinitesimal_cocycle_check(
    d: &TruncatedDeformation,
    sweep: &Sweep,
) -> Result<InfinitesimalCheck> {
    let module = RestrictedModule::adjoint(d.base());
    let (m1, w1) = d.infinitesimal();
    let basis = is_cocycle(&module, &m1, &w1)?;
    let oracle = if d.field().p() == 2 {
        let c = Char2Cochain::from_coords(&module, 2, &pair_coords(&m1, &w1))?;
        char2_cocycle_oracle(&module, &c, sweep)?.is_none()
    } else {
        let c = StarCochain2 {
            phi: m1.clone(),
            omega: w1.clone(),
        };
        cocycle_oracle(&module, &c, sweep)?.is_none()
    };
    if basis != oracle {
        return Err(Error::OracleMismatch(format!(
            "infinitesimal: basis conditions say {basis}, vector sweep says {oracle}"
        )));
    }
    let coboundary = if basis {
        is_trivial_infinitesimal(d.base(), &m1, &w1)?
    } else {
        None
    };
    Ok(InfinitesimalCheck {
        cocycle: basis,
        coboundary,
    })
}

/// A formal automorphism `phi = sum t^i phi_i` of `L[[t]]` with `phi_0 = id`,
/// modulo `t^(N+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalAutomorphism {
    terms: Vec<FpMatrix>,
}

impl FormalAutomorphism {
    /// `terms[i] = phi_i`; `terms[0]` must be the identity.
    pub fn new(terms: Vec<FpMatrix>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::InvalidInput(
                "a formal automorphism needs phi_0".into(),
            ));
        };
        let n = first.rows();
        if first != &FpMatrix::identity(first.field(), n) {
            return Err(Error::InvalidInput("phi_0 must be the identity".into()));
        }
        if terms.len() > MAX_DEFORMATION_ORDER + 1 {
            return Err(Error::DegreeTooLarge {
                degree: terms.len() - 1,
                cap: MAX_DEFORMATION_ORDER,
            });
        }
        if let Some(bad) = terms.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.rows().max(bad.cols()),
            });
        }
        Ok(FormalAutomorphism { terms })
    }

    pub fn identity(field: PrimeField, n: usize, order: usize) -> Self {
        let mut terms = vec![FpMatrix::zeros(field, n, n); order + 1];
        terms[0] = FpMatrix::identity(field, n);
        FormalAutomorphism { terms }
    }

    /// `id + t psi`, truncated at `order >= 1`.
    pub fn linear(psi: FpMatrix, order: usize) -> Result<Self> {
        let f = psi.field();
        let n = psi.rows();
        let mut terms = vec![FpMatrix::zeros(f, n, n); order.max(1) + 1];
        terms[0] = FpMatrix::identity(f, n);
        terms[1] = psi;
        Self::new(terms)
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, k: usize) -> &FpMatrix {
        &self.terms[k]
    }

    /// `phi(a)` for a series of the same truncation order.
    pub fn apply(&self, a: &Series) -> Series {
        let f = self.terms[0].field();
        let big_n = self.order();
        let mut out = vec![vec![0; self.terms[0].rows()]; big_n + 1];
        for (i, x) in a.iter().enumerate().take(big_n + 1) {
            for (j, m) in self.terms.iter().enumerate().take(big_n + 1 - i) {
                f.add_assign(&mut out[i + j], &m.mul_vec(x));
            }
        }
        out
    }

    /// The inverse series: `chi_0 = id`, `chi_k = -sum_(j=1..k) phi_j chi_(k-j)`.
    pub fn inverse(&self) -> Self {
        let f = self.terms[0].field();
        let n = self.terms[0].rows();
        let mut inv = vec![FpMatrix::identity(f, n)];
        for k in 1..=self.order() {
            let mut acc = FpMatrix::zeros(f, n, n);
            for j in 1..=k {
                acc = acc.sub(&self.terms[j].mul(&inv[k - j]));
            }
            inv.push(acc);
        }
        FormalAutomorphism { terms: inv }
    }

    /// The deformation `D'` with `m'_t(x, y) = phi^-1 m_t(phi x, phi y)` and
    /// `omega'_t(x) = phi^-1 omega_t(phi x)`, so that `phi: D' -> D`.
    pub fn conjugate(&self, d: &TruncatedDeformation) -> Result<TruncatedDeformation> {
        if self.order() != d.order() || self.terms[0].rows() != d.dim() {
            return Err(Error::InvalidInput(
                "automorphism and deformation differ in order or dimension".into(),
            ));
        }
        let f = d.field();
        let n = d.dim();
        let inv = self.inverse();
        let images: Vec<Series> = (0..n)
            .map(|i| self.apply(&d.constant(&f.unit_vec(n, i))))
            .collect();
        let mut brackets: Vec<CeCochain> = (0..=d.order())
            .map(|_| CeCochain::zero(f, n, n, 2))
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                let v = inv.apply(&d.bracket_t(&images[i], &images[j]));
                for (k, c) in brackets.iter_mut().enumerate() {
                    c.set(&[i, j], &v[k]);
                }
            }
        }
        let mut pmaps = vec![vec![vec![0; n]; n]; d.order() + 1];
        for (i, img) in images.iter().enumerate() {
            let v = inv.apply(&d.pmap_t(img));
            for (k, w) in pmaps.iter_mut().enumerate() {
                w[i] = v[k].clone();
            }
        }
        let terms = brackets.into_iter().zip(pmaps).skip(1).collect();
        TruncatedDeformation::new(d.base().clone(), terms)
    }
}

/// Outcome of [`check_equivalence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// `(i, j, q)`: `m_t(phi e_i, phi e_j)` and `phi(m'_t(e_i, e_j))` differ at `t^q`.
    pub bracket: Option<(usize, usize, usize)>,
    /// `(x, q)`: `omega_t(phi x)` and `phi(omega'_t(x))` differ at `t^q`.
    pub pmap: Option<(FpVector, usize)>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.bracket.is_none() && self.pmap.is_none()
    }
}

fn first_difference(a: &Series, b: &Series) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}

/// Check that `phi` maps `D'` to `D`: `m_t(phi x, phi y) = phi(m'_t(x, y))` on
/// basis pairs and `omega_t(phi x) = phi(omega'_t(x))` for every `x` of the sweep.
pub fn check_equivalence(
    d: &TruncatedDeformation,
    d_prime: &TruncatedDeformation,
    phi: &FormalAutomorphism,
    sweep: &Sweep,
) -> Result<EquivalenceReport> {
    if d.base() != d_prime.base() {
        return Err(Error::InvalidInput(
            "deformations of different base algebras".into(),
        ));
    }
    if d.order() != d_prime.order() || phi.order() != d.order() || phi.term(0).rows() != d.dim() {
        return Err(Error::InvalidInput(
            "truncation orders or dimensions differ".into(),
        ));
    }
    let f = d.field();
    let n = d.dim();
    let mut report = EquivalenceReport {
        bracket: None,
        pmap: None,
    };
    let images: Vec<Series> = (0..n)
        .map(|i| phi.apply(&d.constant(&f.unit_vec(n, i))))
        .collect();
    'pairs: for i in 0..n {
        for j in i + 1..n {
            let lhs = d.bracket_t(&images[i], &images[j]);
            let rhs = phi.apply(&d_prime.bracket_t_vectors(&f.unit_vec(n, i), &f.unit_vec(n, j)));
            if let Some(q) = first_difference(&lhs, &rhs) {
                report.bracket = Some((i, j, q));
                break 'pairs;
            }
        }
    }
    for x in sweep.vectors(f, n) {
        let lhs = d.pmap_t(&phi.apply(&d.constant(&x)));
        let rhs = phi.apply(&d_prime.pmap_t_vector(&x));
        if let Some(q) = first_difference(&lhs, &rhs) {
            report.pmap = Some((x, q));
            break;
        }
    }
    Ok(report)
}

/// The obstruction `(Obs^(1)_(n+1), Obs^(2)_(n+1))` of an order-`n` deformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    /// An alternating 3-cochain.
    pub obs1: CeCochain,
    /// `obs2[i * n + j] = Obs^(2)(e_i, e_j)`; in characteristic 2 the first
    /// argument is the quadratic one.
    pub obs2: Vec<FpVector>,
}

impl Obstruction {
    pub fn is_zero(&self) -> bool {
        self.obs1.is_zero() && self.obs2.iter().all(|v| is_zero(v))
    }

    /// `obs1` coordinates followed by `obs2`, the layout of restricted
    /// 3-cochains in both characteristics.
    pub fn coords(&self) -> FpVector {
        pair_coords(&self.obs1, &self.obs2)
    }
}

/// `d` padded with a zero term of order `n + 1`.
fn padded(d: &TruncatedDeformation) -> Result<TruncatedDeformation> {
    let n = d.dim();
    d.extended(CeCochain::zero(d.field(), n, n, 2), vec![vec![0; n]; n])
}

fn obs1_eval(pad: &TruncatedDeformation, x: &[u32], y: &[u32], z: &[u32]) -> FpVector {
    let q = pad.order();
    pad.jacobi_defect(&pad.constant(x), &pad.constant(y), &pad.constant(z))[q].clone()
}

/// `Obs^(2)(x, y)`: the top coefficient of `m_t[x, y, .., y] - m_t(x, omega_t(y))`
/// for `p > 2`, and of `m_t(m_t(y, x), x) + m_t(y, omega_t(x))` for `p = 2`.
fn obs2_eval(
    d: &TruncatedDeformation,
    pad: &TruncatedDeformation,
    x: &[u32],
    y: &[u32],
) -> FpVector {
    let (a, b) = if d.field().p() == 2 { (y, x) } else { (x, y) };
    let mut wb = d.pmap_t_vector(b);
    wb.push(vec![0; d.dim()]);
    let q = pad.order();
    pad.pmap_defect(&pad.constant(a), &pad.constant(b), &wb)[q].clone()
}

/// `Obs^(1)` on basis triples and `Obs^(2)` on basis pairs. In characteristic
/// 2 the law `Obs2(x1 + x2, y) = Obs2(x1, y) + Obs2(x2, y) + Obs1(x1, x2, y)` is
/// checked on the sweep; a failure is an [`Error::OracleMismatch`].
pub fn obstruction(d: &TruncatedDeformation, sweep: &Sweep) -> Result<Obstruction> {
    let f = d.field();
    let n = d.dim();
    let pad = padded(d)?;
    let obs1 = CeCochain::from_fn(f, n, n, 3, |t| {
        obs1_eval(
            &pad,
            &f.unit_vec(n, t[0]),
            &f.unit_vec(n, t[1]),
            &f.unit_vec(n, t[2]),
        )
    });
    let mut obs2 = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            obs2.push(obs2_eval(d, &pad, &f.unit_vec(n, i), &f.unit_vec(n, j)));
        }
    }
    if f.p() == 2 {
        if let Some(w) = obstruction_additivity(d, sweep)? {
            return Err(Error::OracleMismatch(format!(
                "Obs2 additivity fails at {w:?}"
            )));
        }
    }
    Ok(Obstruction { obs1, obs2 })
}

/// First triple `(x1, x2, y)` of the sweep where
/// `Obs2(x1 + x2, y) != Obs2(x1, y) + Obs2(x2, y) + Obs1(x1, x2, y)`; characteristic 2 only.
pub fn obstruction_additivity(
    d: &TruncatedDeformation,
    sweep: &Sweep,
) -> Result<Option<TupleWitness>> {
    let f = d.field();
    if f.p() != 2 {
        return Err(Error::Characteristic {
            p: f.p(),
            reason: "the additivity law of Obs2 is a characteristic 2 statement",
        });
    }
    let n = d.dim();
    let pad = padded(d)?;
    for t in sweep.tuples(f, &[n, n, n]) {
        let (x1, x2, y) = (&t[0], &t[1], &t[2]);
        let lhs = obs2_eval(d, &pad, &f.add_vec(x1, x2), y);
        let mut rhs = f.add_vec(&obs2_eval(d, &pad, x1, y), &obs2_eval(d, &pad, x2, y));
        f.add_assign(&mut rhs, &obs1_eval(&pad, x1, x2, y));
        if lhs != rhs {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Whether `(m_(n+1), omega_(n+1))` extends `d` to order `n + 1`, decided by
/// `d^2_*(m_(n+1), omega_(n+1)) = (Obs^(1), Obs^(2))`. The extended deformation
/// is verified independently; disagreement is an [`Error::OracleMismatch`].
pub fn extend_order(
    d: &TruncatedDeformation,
    m_next: &CeCochain,
    omega_next: &[FpVector],
    sweep: &Sweep,
) -> Result<bool> {
    let module = RestrictedModule::adjoint(d.base());
    let extended = d.extended(m_next.clone(), omega_next.to_vec())?;
    let obs = obstruction(d, sweep)?;
    let image = if d.field().p() == 2 {
        let c = Char2Cochain::from_coords(&module, 2, &pair_coords(m_next, omega_next))?;
        d_star2(&module, &c)?.coords()
    } else {
        let c = StarCochain2 {
            phi: m_next.clone(),
            omega: omega_next.to_vec(),
        };
        d_star_2(&module, &c)?.coords()
    };
    let matches = image == obs.coords();
    let top = verify_deformation(&extended, sweep).orders[extended.order()].passed();
    if matches != top {
        return Err(Error::OracleMismatch(format!(
            "obstruction equation says {matches}, order {} verification says {top}",
            extended.order()
        )));
    }
    Ok(matches)
}

/// `[x, y]_N = [N x, y] + [x, N y] - N [x, y]`.
pub fn nijenhuis_bracket(
    alg: &RestrictedLieAlgebra,
    n: &FpMatrix,
    x: &[u32],
    y: &[u32],
) -> FpVector {
    let f = alg.field();
    let mut out = alg.bracket(&n.mul_vec(x), y);
    f.add_assign(&mut out, &alg.bracket(x, &n.mul_vec(y)));
    f.sub_assign(&mut out, &n.mul_vec(&alg.bracket(x, y)));
    out
}

/// `x^[p]_N = N(x^[p]) - ad_x^(p-1) N(x)`.
pub fn nijenhuis_pmap(alg: &RestrictedLieAlgebra, n: &FpMatrix, x: &[u32]) -> FpVector {
    let f = alg.field();
    let module = RestrictedModule::adjoint(alg);
    let ad = module.act_power(x, &n.mul_vec(x), f.p() as usize - 1);
    f.sub_vec(&n.mul_vec(&alg.pmap(x)), &ad)
}

/// A linear map `N` satisfying
/// `N([N x, y] + [x, N y] - N [x, y]) = [N x, N y]` and
/// `N(N(x^[p]) - ad_x^(p-1) N(x)) = N(x)^[p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NijenhuisOperator {
    matrix: FpMatrix,
}

impl NijenhuisOperator {
    /// The first identity is bilinear and checked on basis pairs, the second
    /// on every vector of the sweep.
    pub fn new(alg: &RestrictedLieAlgebra, matrix: FpMatrix, sweep: &Sweep) -> Result<Self> {
        let f = alg.field();
        let n = alg.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.rows().max(matrix.cols()),
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                let (x, y) = (f.unit_vec(n, i), f.unit_vec(n, j));
                let lhs = matrix.mul_vec(&nijenhuis_bracket(alg, &matrix, &x, &y));
                if lhs != alg.bracket(&matrix.mul_vec(&x), &matrix.mul_vec(&y)) {
                    return Err(Error::NotNijenhuis {
                        identity: 1,
                        witness: format!("(e{i}, e{j})"),
                    });
                }
            }
        }
        for x in sweep.vectors(f, n) {
            if matrix.mul_vec(&nijenhuis_pmap(alg, &matrix, &x)) != alg.pmap(&matrix.mul_vec(&x)) {
                return Err(Error::NotNijenhuis {
                    identity: 2,
                    witness: format!("{x:?}"),
                });
            }
        }
        Ok(NijenhuisOperator { matrix })
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }
}

/// The maps attached to a Nijenhuis operator and the trivial deformation they
/// generate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NijenhuisDeformation {
    /// `[., .]_N`.
    pub bracket: CeCochain,
    /// `x^[p]_N` on the basis.
    pub pmap: Vec<FpVector>,
    /// `m_1 = [., .]_N`, `omega_1 = -(.)^[p]_N`.
    pub deformation: TruncatedDeformation,
    /// `id + t N`, mapping `deformation` to the undeformed algebra.
    pub automorphism: FormalAutomorphism,
    /// `psi` with `(m_1, omega_1) = d^1_*(psi)`.
    pub coboundary: FpMatrix,
}

/// Build `([., .]_N, (.)^[p]_N)`, check it against `(-d_CE N, ind^1 N)` and
/// certify that the order-1 deformation `(m + t [., .]_N, omega - t (.)^[p]_N)`
/// is trivial: `id + t N` is an equivalence with the undeformed algebra and
/// the infinitesimal is a coboundary.
pub fn nijenhuis_deformation(
    alg: &RestrictedLieAlgebra,
    op: &NijenhuisOperator,
    sweep: &Sweep,
) -> Result<NijenhuisDeformation> {
    let f = alg.field();
    let n = alg.dim();
    let module = RestrictedModule::adjoint(alg);
    let nm = op.matrix();
    let bracket = CeCochain::from_fn(f, n, n, 2, |t| {
        nijenhuis_bracket(alg, nm, &f.unit_vec(n, t[0]), &f.unit_vec(n, t[1]))
    });
    let pmap: Vec<FpVector> = (0..n)
        .map(|i| nijenhuis_pmap(alg, nm, &f.unit_vec(n, i)))
        .collect();
    let psi = matrix_to_cochain(&module, nm);
    if !bracket.add(&ce_diff(&module, &psi)).is_zero() {
        return Err(Error::OracleMismatch(
            "[., .]_N differs from -d_CE N".into(),
        ));
    }
    if pmap != ind1(&module, nm) {
        return Err(Error::OracleMismatch(
            "(.)^[p]_N differs from ind^1 N".into(),
        ));
    }
    let omega1: Vec<FpVector> = pmap.iter().map(|v| f.neg_vec(v)).collect();
    let deformation =
        TruncatedDeformation::first_order(alg.clone(), bracket.clone(), omega1.clone())?;
    let automorphism = FormalAutomorphism::linear(nm.clone(), 1)?;
    let base = TruncatedDeformation::trivial(alg.clone(), 1)?;
    let report = check_equivalence(&base, &deformation, &automorphism, sweep)?;
    if !report.holds() {
        return Err(Error::OracleMismatch(format!(
            "id + tN is not an equivalence: {report:?}"
        )));
    }
    let coboundary = is_trivial_infinitesimal(alg, &bracket, &omega1)?.ok_or_else(|| {
        Error::OracleMismatch("Nijenhuis infinitesimal is not a coboundary".into())
    })?;
    Ok(NijenhuisDeformation {
        bracket,
        pmap,
        deformation,
        automorphism,
        coboundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::cohomology_char2::h_n_star2;
    use crate::cohomology_restricted::{d_star_1, h2_star};
    use crate::sweep::RandomSource;

    fn sweep() -> Sweep {
        Sweep::default()
    }

    fn pair_from(alg: &RestrictedLieAlgebra, coords: &[u32]) -> (CeCochain, Vec<FpVector>) {
        let n = alg.dim();
        let k = n * (n - 1) / 2 * n;
        let m = CeCochain::from_coords(alg.field(), n, n, 2, coords[..k].to_vec()).unwrap();
        let w = coords[k..].chunks(n).map(|c| c.to_vec()).collect();
        (m, w)
    }

    fn random_automorphism(
        rng: &mut RandomSource,
        f: PrimeField,
        n: usize,
        order: usize,
    ) -> FormalAutomorphism {
        let mut terms = vec![FpMatrix::identity(f, n)];
        for _ in 0..order {
            terms.push(FpMatrix::new(f, n, n, rng.vector(f, n * n)).unwrap());
        }
        FormalAutomorphism::new(terms).unwrap()
    }

    #[test]
    fn base_alone_passes() {
        for alg in [
            catalog::sl2(3).unwrap(),
            catalog::heisenberg(2, [0, 0, 1]).unwrap(),
        ] {
            let d = TruncatedDeformation::trivial(alg, 0).unwrap();
            assert!(verify_deformation(&d, &sweep()).passed());
            assert!(obstruction(&d, &sweep()).unwrap().is_zero());
        }
    }

    #[test]
    fn order_is_capped() {
        let alg = catalog::heisenberg(3, [0, 0, 0]).unwrap();
        assert!(matches!(
            TruncatedDeformation::trivial(alg, MAX_DEFORMATION_ORDER + 1),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn heisenberg_example_is_a_nontrivial_deformation() {
        let d = catalog::heisenberg_deformation(5).unwrap();
        let r = verify_deformation(&d, &sweep());
        assert!(r.passed() && r.exhaustive);
        let c = infinitesimal_cocycle_check(&d, &sweep()).unwrap();
        assert!(c.cocycle && !c.is_trivial());
        let o = obstruction(&d, &sweep()).unwrap();
        assert!(o.is_zero());
    }

    #[test]
    fn heisenberg_example_extends_by_cocycles() {
        let d = catalog::heisenberg_deformation(5).unwrap();
        let module = RestrictedModule::adjoint(d.base());
        let h2 = h2_star(&module, &sweep()).unwrap();
        for c in h2.cocycles(&module) {
            assert!(extend_order(&d, &c.phi, &c.omega, &sweep()).unwrap());
        }
        let n = 3;
        let (zero_m, zero_w) = (CeCochain::zero(d.field(), n, n, 2), vec![vec![0; n]; n]);
        assert!(extend_order(&d, &zero_m, &zero_w, &sweep()).unwrap());
        let mut bad = zero_m.clone();
        bad.set(&[0, 2], &d.field().unit_vec(n, 0));
        assert!(!extend_order(&d, &bad, &zero_w, &sweep()).unwrap());
    }

    #[test]
    fn char2_example_is_a_nontrivial_deformation() {
        let d = catalog::heisenberg_deformation(2).unwrap();
        assert!(verify_deformation(&d, &sweep()).passed());
        let c = infinitesimal_cocycle_check(&d, &sweep()).unwrap();
        assert!(c.cocycle && !c.is_trivial());
        assert!(obstruction(&d, &sweep()).unwrap().is_zero());
        let module = RestrictedModule::adjoint(d.base());
        for c in h_n_star2(&module, 2, &sweep()).unwrap().cocycles(&module) {
            let (m, w) = pair_from(d.base(), &c.coords());
            assert!(extend_order(&d, &m, &w, &sweep()).unwrap());
        }
    }

    #[test]
    fn obstruction_additivity_char2() {
        let mut rng = RandomSource::new(7);
        for theta in [[0, 0, 0], [0, 0, 1], [1, 1, 0]] {
            let alg = catalog::heisenberg(2, theta).unwrap();
            let f = alg.field();
            for _ in 0..4 {
                let terms = (0..2)
                    .map(|_| {
                        let m = CeCochain::from_coords(f, 3, 3, 2, rng.vector(f, 9)).unwrap();
                        let w = (0..3).map(|_| rng.vector(f, 3)).collect();
                        (m, w)
                    })
                    .collect();
                let d = TruncatedDeformation::new(alg.clone(), terms).unwrap();
                assert_eq!(obstruction_additivity(&d, &sweep()).unwrap(), None);
            }
        }
    }

    #[test]
    fn char2_series_pmap_matches_closed_form() {
        let d = catalog::heisenberg_deformation(2).unwrap();
        let f = d.field();
        let mut rng = RandomSource::new(11);
        let d = d
            .extended(CeCochain::zero(f, 3, 3, 2), vec![vec![0; 3]; 3])
            .unwrap();
        let d = d
            .extended(CeCochain::zero(f, 3, 3, 2), vec![vec![0; 3]; 3])
            .unwrap();
        for _ in 0..30 {
            let a: Series = (0..=d.order()).map(|_| rng.vector(f, 3)).collect();
            let b: Series = (0..=d.order()).map(|_| rng.vector(f, 3)).collect();
            let mut expected = d.zero_series();
            for (i, x) in a.iter().enumerate() {
                let mut shifted = d.zero_series();
                shifted[i] = x.clone();
                let w = d.pmap_t_vector(x);
                for (q, v) in w.iter().enumerate() {
                    if 2 * i + q <= d.order() {
                        f.add_assign(&mut expected[2 * i + q], v);
                    }
                }
                for (j, y) in a.iter().enumerate().skip(i + 1) {
                    for (q, v) in d.bracket_t_vectors(x, y).iter().enumerate() {
                        if i + j + q <= d.order() {
                            f.add_assign(&mut expected[i + j + q], v);
                        }
                    }
                }
            }
            assert_eq!(d.pmap_t(&a), expected);
            let sum: Series = a.iter().zip(&b).map(|(x, y)| f.add_vec(x, y)).collect();
            let mut rhs = d.pmap_t(&a);
            for (r, (u, v)) in rhs
                .iter_mut()
                .zip(d.pmap_t(&b).iter().zip(d.bracket_t(&a, &b)))
            {
                f.add_assign(r, u);
                f.add_assign(r, &v);
            }
            assert_eq!(d.pmap_t(&sum), rhs);
        }
    }

    #[test]
    fn conjugates_of_the_base_are_valid_and_equivalent() {
        let mut rng = RandomSource::new(5);
        let algs = [
            catalog::heisenberg(3, [0, 0, 0]).unwrap(),
            catalog::heisenberg(3, [1, 0, 0]).unwrap(),
            catalog::heisenberg(5, [0, 0, 1]).unwrap(),
            catalog::sl2(3).unwrap(),
            catalog::heisenberg(2, [0, 0, 1]).unwrap(),
        ];
        for alg in algs {
            let f = alg.field();
            let base = TruncatedDeformation::trivial(alg.clone(), 3).unwrap();
            let phi = random_automorphism(&mut rng, f, alg.dim(), 3);
            let d = phi.conjugate(&base).unwrap();
            let r = verify_deformation(&d, &sweep());
            assert!(r.passed(), "{:?}", r.first_failure());
            assert!(check_equivalence(&base, &d, &phi, &sweep())
                .unwrap()
                .holds());
            assert!(infinitesimal_cocycle_check(&d, &sweep())
                .unwrap()
                .is_trivial());
        }
    }

    #[test]
    fn equivalent_infinitesimals_differ_by_a_coboundary() {
        let mut rng = RandomSource::new(9);
        let d = catalog::heisenberg_deformation(5).unwrap();
        let module = RestrictedModule::adjoint(d.base());
        let f = d.field();
        for _ in 0..5 {
            let psi = FpMatrix::new(f, 3, 3, rng.vector(f, 9)).unwrap();
            let phi = FormalAutomorphism::linear(psi.clone(), 1).unwrap();
            let d2 = phi.conjugate(&d).unwrap();
            assert!(verify_deformation(&d2, &sweep()).passed());
            assert!(check_equivalence(&d, &d2, &phi, &sweep()).unwrap().holds());
            let (m1, w1) = d.infinitesimal();
            let (m1p, w1p) = d2.infinitesimal();
            let expected = d_star_1(&module, &psi).unwrap();
            assert_eq!(m1.sub(&m1p), expected.phi);
            let diff: Vec<FpVector> = w1.iter().zip(&w1p).map(|(a, b)| f.sub_vec(a, b)).collect();
            assert_eq!(diff, expected.omega);
            // first-order identities on all vectors
            let alg = d.base();
            for x in f.all_vectors(3) {
                let px = psi.mul_vec(&x);
                let mut rhs = psi.mul_vec(&alg.pmap(&x));
                f.sub_assign(&mut rhs, &alg.lie().bracket_power(&px, &x, 4));
                let lhs = f.sub_vec(&d.pmap_t_vector(&x)[1], &d2.pmap_t_vector(&x)[1]);
                assert_eq!(lhs, rhs);
                for y in f.all_vectors(3).step_by(7) {
                    let mut rhs = psi.mul_vec(&alg.bracket(&x, &y));
                    f.sub_assign(&mut rhs, &alg.bracket(&x, &psi.mul_vec(&y)));
                    f.sub_assign(&mut rhs, &alg.bracket(&px, &y));
                    assert_eq!(f.sub_vec(&m1.eval(&[&x, &y]), &m1p.eval(&[&x, &y])), rhs);
                }
            }
        }
    }

    #[test]
    fn identity_series_is_an_equivalence() {
        let d = catalog::heisenberg_deformation(5).unwrap();
        let phi = FormalAutomorphism::identity(d.field(), 3, 1);
        assert!(check_equivalence(&d, &d, &phi, &sweep()).unwrap().holds());
        let other = TruncatedDeformation::trivial(d.base().clone(), 1).unwrap();
        assert!(!check_equivalence(&d, &other, &phi, &sweep())
            .unwrap()
            .holds());
    }

    #[test]
    fn automorphism_needs_identity_constant_term() {
        let f = PrimeField::new(5).unwrap();
        let two = FpMatrix::identity(f, 3).scale(2);
        assert!(matches!(
            FormalAutomorphism::new(vec![two, FpMatrix::zeros(f, 3, 3)]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn inverse_series() {
        let mut rng = RandomSource::new(2);
        let f = PrimeField::new(7).unwrap();
        let phi = random_automorphism(&mut rng, f, 3, 4);
        let inv = phi.inverse();
        for _ in 0..10 {
            let a: Series = (0..5).map(|_| rng.vector(f, 3)).collect();
            assert_eq!(inv.apply(&phi.apply(&a)), a);
            assert_eq!(phi.apply(&inv.apply(&a)), a);
        }
    }

    #[test]
    fn trivial_infinitesimals() {
        let mut rng = RandomSource::new(4);
        for alg in [
            catalog::heisenberg(3, [0, 0, 1]).unwrap(),
            catalog::heisenberg(2, [0, 0, 0]).unwrap(),
        ] {
            let f = alg.field();
            let module = RestrictedModule::adjoint(&alg);
            let zero_m = CeCochain::zero(f, 3, 3, 2);
            let zero_w = vec![vec![0; 3]; 3];
            assert!(is_trivial_infinitesimal(&alg, &zero_m, &zero_w)
                .unwrap()
                .is_some());
            for _ in 0..5 {
                let psi = FpMatrix::new(f, 3, 3, rng.vector(f, 9)).unwrap();
                let (m, w) = if f.p() == 2 {
                    let c = crate::cohomology_char2::d1_star2(
                        &module,
                        &matrix_to_cochain(&module, &psi),
                    )
                    .unwrap();
                    pair_from(&alg, &c.coords())
                } else {
                    let c = d_star_1(&module, &psi).unwrap();
                    (c.phi, c.omega)
                };
                let witness = is_trivial_infinitesimal(&alg, &m, &w).unwrap().unwrap();
                let again = if f.p() == 2 {
                    let c = crate::cohomology_char2::d1_star2(
                        &module,
                        &matrix_to_cochain(&module, &witness),
                    )
                    .unwrap();
                    pair_from(&alg, &c.coords())
                } else {
                    let c = d_star_1(&module, &witness).unwrap();
                    (c.phi, c.omega)
                };
                assert_eq!(again, (m, w));
            }
            let mut bad = zero_m.clone();
            bad.set(&[0, 2], &f.unit_vec(3, 0));
            assert_eq!(
                is_trivial_infinitesimal(&alg, &bad, &zero_w),
                Err(Error::NotCocycle)
            );
        }
    }

    #[test]
    fn order_one_passes_iff_cocycle() {
        let mut rng = RandomSource::new(13);
        let alg = catalog::heisenberg(3, [0, 0, 1]).unwrap();
        let f = alg.field();
        let module = RestrictedModule::adjoint(&alg);
        let (mut yes, mut no) = (0, 0);
        for _ in 0..60 {
            let coords = if rng.index(2) == 0 {
                rng.vector(f, 18)
            } else {
                let h2 = h2_star(&module, &sweep()).unwrap();
                let mut acc = vec![0; 18];
                for v in &h2.space.cocycles {
                    f.axpy(&mut acc, rng.element(f), v);
                }
                acc
            };
            let (m, w) = pair_from(&alg, &coords);
            let d = TruncatedDeformation::first_order(alg.clone(), m, w).unwrap();
            let passed = verify_deformation(&d, &sweep()).passed();
            assert_eq!(
                passed,
                infinitesimal_cocycle_check(&d, &sweep()).unwrap().cocycle
            );
            if passed {
                yes += 1;
            } else {
                no += 1;
            }
        }
        assert!(yes > 0 && no > 0);
    }

    #[test]
    fn zero_terms_have_zero_obstruction() {
        for alg in [
            catalog::sl2(5).unwrap(),
            catalog::heisenberg(2, [0, 0, 1]).unwrap(),
        ] {
            let d = TruncatedDeformation::trivial(alg, 2).unwrap();
            assert!(obstruction(&d, &sweep()).unwrap().is_zero());
        }
    }

    #[test]
    fn nijenhuis_examples() {
        let alg = catalog::sl2(5).unwrap();
        let f = alg.field();
        let zero = NijenhuisOperator::new(&alg, FpMatrix::zeros(f, 3, 3), &sweep()).unwrap();
        let nd = nijenhuis_deformation(&alg, &zero, &sweep()).unwrap();
        assert!(nd.bracket.is_zero() && nd.pmap.iter().all(|v| is_zero(v)));

        let id = NijenhuisOperator::new(&alg, FpMatrix::identity(f, 3), &sweep()).unwrap();
        let nd = nijenhuis_deformation(&alg, &id, &sweep()).unwrap();
        assert_eq!(nd.bracket, bracket_cochain(&alg));
        assert_eq!(nd.pmap, alg.pmap_images().to_vec());
        assert!(verify_deformation(&nd.deformation, &sweep()).passed());

        // with the p-map term added instead of subtracted the result is not restricted
        let literal =
            TruncatedDeformation::first_order(alg.clone(), nd.bracket.clone(), nd.pmap.clone())
                .unwrap();
        assert_eq!(
            verify_deformation(&literal, &sweep()).first_failure(),
            Some(1)
        );

        let h = catalog::heisenberg(3, [0, 0, 0]).unwrap();
        for lambda in 0..3 {
            let m = FpMatrix::identity(h.field(), 3).scale(lambda);
            let op = NijenhuisOperator::new(&h, m, &sweep()).unwrap();
            assert!(nijenhuis_deformation(&h, &op, &sweep()).is_ok());
        }
    }

    #[test]
    fn nijenhuis_rejections() {
        let alg = catalog::sl2(5).unwrap();
        let f = alg.field();
        let m = FpMatrix::from_rows(f, &[vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        assert!(matches!(
            NijenhuisOperator::new(&alg, m, &sweep()),
            Err(Error::NotNijenhuis { .. })
        ));
        // 2 id satisfies the bracket identity but not the p-map one
        let two = FpMatrix::identity(f, 3).scale(2);
        assert!(matches!(
            NijenhuisOperator::new(&alg, two, &sweep()),
            Err(Error::NotNijenhuis { identity: 2, .. })
        ));
    }

    #[test]
    fn nijenhuis_char2() {
        let alg = catalog::heisenberg(2, [0, 0, 1]).unwrap();
        let f = alg.field();
        for data in f.all_vectors(9).step_by(5) {
            let m = FpMatrix::new(f, 3, 3, data).unwrap();
            if let Ok(op) = NijenhuisOperator::new(&alg, m, &sweep()) {
                let nd = nijenhuis_deformation(&alg, &op, &sweep()).unwrap();
                assert!(verify_deformation(&nd.deformation, &sweep()).passed());
            }
        }
    }
}
