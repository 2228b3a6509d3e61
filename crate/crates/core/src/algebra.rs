//! Lie algebras given by structure constants, p-maps given on a basis, and
//! restricted modules.
//!
//! A p-map is stored only through its values `e_i^[p]` on the basis. Its value
//! on any other vector comes from folding the basis expansion with
//!
//! ```text
//! (u + a e_i)^[p] = u^[p] + a^p e_i^[p] + sum_k s_k(u, a e_i)
//! ```
//!
//! where `k s_k(x, y)` is the coefficient of `Z^(k-1)` in `ad(Zx + y)^(p-1)(x)`.
//! Jacobson's criterion `ad(e_i)^p = ad(e_i^[p])` guarantees the fold is well
//! defined, and [`verify_restricted`] checks exactly that criterion.

use crate::error::{Error, Result};
use crate::gf::{FpMatrix, FpVector, LinearSystem, PrimeField};
use crate::sweep::Sweep;

/// A finite-dimensional Lie algebra over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    field: PrimeField,
    names: Vec<String>,
    /// `c[(i * n + j) * n + k]` is the coefficient of `e_k` in `[e_i, e_j]`.
    c: Vec<u32>,
}

impl LieAlgebra {
    /// Build an algebra from the brackets `[e_i, e_j] = v` for some pairs.
    /// Pairs not listed (in either order) bracket to zero; `[e_j, e_i]` is
    /// filled in by antisymmetry.
    pub fn new(
        field: PrimeField,
        names: Vec<String>,
        brackets: &[(usize, usize, FpVector)],
    ) -> Result<Self> {
        let n = names.len();
        let mut c = vec![0u32; n * n * n];
        let mut set = vec![false; n * n];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "bracket index ({i}, {j}) out of range for dimension {n}"
                )));
            }
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            let v: FpVector = v.iter().map(|&a| a % field.p()).collect();
            if i == j {
                if v.iter().any(|&a| a != 0) {
                    return Err(Error::NotAlternating { i, j });
                }
                continue;
            }
            let neg = field.neg_vec(&v);
            for (slot, val) in [((i, j), &v), ((j, i), &neg)] {
                let at = slot.0 * n + slot.1;
                let dst = &mut c[at * n..(at + 1) * n];
                if set[at] && dst != val.as_slice() {
                    return Err(Error::NotAlternating { i, j });
                }
                dst.copy_from_slice(val);
                set[at] = true;
            }
        }
        let lie = LieAlgebra { field, names, c };
        lie.check_jacobi()?;
        Ok(lie)
    }

    /// Build from the full tensor of structure constants, checking that it is
    /// alternating and satisfies Jacobi.
    pub fn from_structure_constants(
        field: PrimeField,
        names: Vec<String>,
        c: Vec<u32>,
    ) -> Result<Self> {
        let n = names.len();
        if c.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: c.len(),
            });
        }
        let c: Vec<u32> = c.into_iter().map(|a| a % field.p()).collect();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let a = c[(i * n + j) * n + k];
                    let b = c[(j * n + i) * n + k];
                    if field.add(a, b) != 0 || (i == j && a != 0) {
                        return Err(Error::NotAlternating { i, j });
                    }
                }
            }
        }
        let lie = LieAlgebra { field, names, c };
        lie.check_jacobi()?;
        Ok(lie)
    }

    /// The abelian algebra of dimension `n` with basis `e0, e1, ...`.
    pub fn abelian(field: PrimeField, n: usize) -> Self {
        LieAlgebra {
            field,
            names: default_names(n),
            c: vec![0; n * n * n],
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Coefficient of `e_k` in `[e_i, e_j]`.
    #[inline]
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> u32 {
        let n = self.dim();
        self.c[(i * n + j) * n + k]
    }

    pub fn structure_constants(&self) -> &[u32] {
        &self.c
    }

    /// `[e_i, e_j]` as a coordinate slice.
    #[inline]
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[u32] {
        let n = self.dim();
        &self.c[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn basis_vector(&self, i: usize) -> FpVector {
        self.field.unit_vec(self.dim(), i)
    }

    pub fn zero(&self) -> FpVector {
        vec![0; self.dim()]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|&a| a == 0)
    }

    /// The bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[u32], y: &[u32]) -> FpVector {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector length");
        assert_eq!(y.len(), n, "vector length");
        let f = self.field;
        let mut out = vec![0; n];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 || i == j {
                    continue;
                }
                f.axpy(&mut out, f.mul(a, b), self.basis_bracket(i, j));
            }
        }
        out
    }

    /// `[..[[x, y], y], .., y]` with `k` copies of `y`.
    pub fn bracket_power(&self, x: &[u32], y: &[u32], k: usize) -> FpVector {
        let mut acc = x.to_vec();
        for _ in 0..k {
            acc = self.bracket(&acc, y);
        }
        acc
    }

    /// Matrix of `ad_x = [x, -]`; column `j` is `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[u32]) -> FpMatrix {
        let n = self.dim();
        let cols: Vec<FpVector> = (0..n)
            .map(|j| self.bracket(x, &self.basis_vector(j)))
            .collect();
        FpMatrix::from_columns(self.field, n, &cols)
    }

    /// Checks Jacobi on every basis triple `i < j < k`.
    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        let f = self.field;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (
                        self.basis_vector(i),
                        self.basis_vector(j),
                        self.basis_vector(k),
                    );
                    let mut s = self.bracket(&ei, self.basis_bracket(j, k));
                    f.add_assign(&mut s, &self.bracket(&ej, self.basis_bracket(k, i)));
                    f.add_assign(&mut s, &self.bracket(&ek, self.basis_bracket(i, j)));
                    if s.iter().any(|&a| a != 0) {
                        return Err(Error::JacobiFails { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// The corrections `s_1(x, y), .., s_{p-1}(x, y)` of the p-map additivity law.
    pub fn s_terms(&self, x: &[u32], y: &[u32]) -> Vec<FpVector> {
        s_terms_with(self.field, x, y, |a, b| self.bracket(a, b))
    }

    /// The center `{v : [v, e_i] = 0 for all i}`, as a basis.
    pub fn center(&self) -> Vec<FpVector> {
        let n = self.dim();
        let mut sys = LinearSystem::new(self.field, n);
        for i in 0..n {
            for k in 0..n {
                let row: FpVector = (0..n).map(|j| self.structure_constant(j, i, k)).collect();
                sys.push(&row);
            }
        }
        sys.kernel_basis()
    }

    /// A basis of the derivation algebra, as `n x n` matrices acting on columns.
    pub fn derivations(&self) -> Vec<FpMatrix> {
        let n = self.dim();
        let sys = self.derivation_system();
        sys.kernel_basis()
            .into_iter()
            .map(|v| FpMatrix::new(self.field, n, n, v).expect("n*n entries"))
            .collect()
    }

    /// Linear equations on the `n^2` entries of `D` (row-major) saying that
    /// `D[e_i, e_j] = [D e_i, e_j] + [e_i, D e_j]`.
    fn derivation_system(&self) -> LinearSystem {
        let n = self.dim();
        let f = self.field;
        let mut sys = LinearSystem::new(f, n * n);
        let var = |row: usize, col: usize| row * n + col;
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let mut eq = vec![0u32; n * n];
                    for l in 0..n {
                        let a = self.structure_constant(i, j, l);
                        eq[var(k, l)] = f.add(eq[var(k, l)], a);
                        let b = self.structure_constant(l, j, k);
                        eq[var(l, i)] = f.sub(eq[var(l, i)], b);
                        let c = self.structure_constant(i, l, k);
                        eq[var(l, j)] = f.sub(eq[var(l, j)], c);
                    }
                    sys.push(&eq);
                }
            }
        }
        sys
    }

    /// A basis of the inner derivations `ad_x`.
    pub fn inner_derivations(&self) -> Vec<FpMatrix> {
        let n = self.dim();
        let ads: Vec<FpMatrix> = (0..n)
            .map(|i| self.ad_matrix(&self.basis_vector(i)))
            .collect();
        independent_matrices(self.field, &ads)
    }
}

/// A maximal linearly independent subfamily, keeping the earliest members.
pub fn independent_matrices(field: PrimeField, ms: &[FpMatrix]) -> Vec<FpMatrix> {
    let mut kept: Vec<FpMatrix> = Vec::new();
    let mut rows: Vec<FpVector> = Vec::new();
    for m in ms {
        rows.push(m.entries().to_vec());
        let len = m.entries().len();
        if crate::gf::span_rank(field, len, &rows) > kept.len() {
            kept.push(m.clone());
        } else {
            rows.pop();
        }
    }
    kept
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// A vector-valued polynomial in a formal variable `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPolynomialVector {
    /// `coefficients[k]` multiplies `Z^k`.
    pub coefficients: Vec<FpVector>,
}

impl ZPolynomialVector {
    /// Expand `ad(Zx + y)^(p-1)(x)` for the bilinear bracket `bracket`, where
    /// `ad(u)(v) = [u, v]`.
    pub fn ad_power<B>(field: PrimeField, x: &[u32], y: &[u32], bracket: B) -> Self
    where
        B: Fn(&[u32], &[u32]) -> FpVector,
    {
        let p = field.p() as usize;
        let len = x.len();
        let mut coeffs: Vec<FpVector> = vec![x.to_vec()];
        for _ in 0..p - 1 {
            let mut next = vec![vec![0u32; len]; coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                if c.iter().all(|&a| a == 0) {
                    continue;
                }
                field.add_assign(&mut next[k], &bracket(y, c));
                field.add_assign(&mut next[k + 1], &bracket(x, c));
            }
            coeffs = next;
        }
        ZPolynomialVector {
            coefficients: coeffs,
        }
    }
}

/// [`LieAlgebra::s_terms`] for an arbitrary bilinear bracket on `F^d`.
pub fn s_terms_with<B>(field: PrimeField, x: &[u32], y: &[u32], bracket: B) -> Vec<FpVector>
where
    B: Fn(&[u32], &[u32]) -> FpVector,
{
    let p = field.p() as usize;
    let poly = ZPolynomialVector::ad_power(field, x, y, bracket);
    (1..p)
        .map(|i| {
            let inv = field.inv(i as u32).expect("1 <= i < p");
            field.scale(inv, &poly.coefficients[i - 1])
        })
        .collect()
}

/// Evaluate a p-map on `v` by folding over its coordinates in `order`.
///
/// `images[i]` is the value on the `i`-th basis vector of `F^d`; `bracket`
/// is the bilinear bracket on `F^d`.
pub fn pmap_fold_in_order<B>(
    field: PrimeField,
    v: &[u32],
    images: &[FpVector],
    order: &[usize],
    bracket: B,
) -> FpVector
where
    B: Fn(&[u32], &[u32]) -> FpVector,
{
    let d = v.len();
    let p = field.order();
    let mut u = vec![0u32; d];
    let mut acc = vec![0u32; d];
    for &i in order {
        let a = v[i];
        if a == 0 {
            continue;
        }
        field.axpy(&mut acc, field.pow(a, p), &images[i]);
        if u.iter().any(|&b| b != 0) {
            let mut w = vec![0u32; d];
            w[i] = a;
            for s in s_terms_with(field, &u, &w, &bracket) {
                field.add_assign(&mut acc, &s);
            }
        }
        u[i] = a;
    }
    acc
}

/// [`pmap_fold_in_order`] in the natural basis order.
pub fn pmap_fold<B>(field: PrimeField, v: &[u32], images: &[FpVector], bracket: B) -> FpVector
where
    B: Fn(&[u32], &[u32]) -> FpVector,
{
    let order: Vec<usize> = (0..v.len()).collect();
    pmap_fold_in_order(field, v, images, &order, bracket)
}

/// One line of a [`JacobsonReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobsonEntry {
    pub index: usize,
    pub holds: bool,
}

/// Result of checking `ad(e_j)^p = ad(e_j^[p])` for every basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobsonReport {
    pub entries: Vec<JacobsonEntry>,
}

impl JacobsonReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.entries.iter().find(|e| !e.holds).map(|e| e.index)
    }
}

/// Jacobson's criterion for the proposed basis images of a p-map.
pub fn verify_restricted(lie: &LieAlgebra, images: &[FpVector]) -> JacobsonReport {
    let p = lie.field().order();
    let entries = (0..lie.dim())
        .map(|j| {
            let lhs = lie.ad_matrix(&lie.basis_vector(j)).pow(p);
            let rhs = lie.ad_matrix(&images[j]);
            JacobsonEntry {
                index: j,
                holds: lhs == rhs,
            }
        })
        .collect();
    JacobsonReport { entries }
}

/// A Lie algebra together with a p-map, stored on the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedLieAlgebra {
    lie: LieAlgebra,
    images: Vec<FpVector>,
}

impl RestrictedLieAlgebra {
    /// Attach the p-map with `e_i^[p] = images[i]`, checking Jacobson's criterion.
    pub fn new(lie: LieAlgebra, images: Vec<FpVector>) -> Result<Self> {
        let n = lie.dim();
        if images.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: images.len(),
            });
        }
        let p = lie.field().p();
        let mut reduced = Vec::with_capacity(n);
        for v in images {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            reduced.push(v.into_iter().map(|a| a % p).collect::<FpVector>());
        }
        if let Some(index) = verify_restricted(&lie, &reduced).first_failure() {
            return Err(Error::NotRestricted { index });
        }
        Ok(RestrictedLieAlgebra {
            lie,
            images: reduced,
        })
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.lie.field()
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.lie.field().p()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn pmap_images(&self) -> &[FpVector] {
        &self.images
    }

    pub fn bracket(&self, x: &[u32], y: &[u32]) -> FpVector {
        self.lie.bracket(x, y)
    }

    /// `v^[p]`.
    pub fn pmap(&self, v: &[u32]) -> FpVector {
        assert_eq!(v.len(), self.dim(), "vector length");
        pmap_fold(self.field(), v, &self.images, |a, b| self.lie.bracket(a, b))
    }

    /// `v^[p]`, folding the coordinates in the given order.
    pub fn pmap_in_order(&self, v: &[u32], order: &[usize]) -> FpVector {
        pmap_fold_in_order(self.field(), v, &self.images, order, |a, b| {
            self.lie.bracket(a, b)
        })
    }

    /// `v^[p]` for every `v`, indexed by [`PrimeField::index_of`].
    pub fn pmap_table(&self) -> Vec<FpVector> {
        self.field()
            .all_vectors(self.dim())
            .map(|v| self.pmap(&v))
            .collect()
    }

    /// A basis of the restricted derivations: derivations `D` with
    /// `D(v^[p]) = ad_v^(p-1)(D v)` for every `v` of the sweep.
    pub fn restricted_derivations(&self, sweep: &Sweep) -> Vec<FpMatrix> {
        let n = self.dim();
        let f = self.field();
        let p = f.order();
        let mut sys = self.lie.derivation_system();
        for v in sweep.vectors(f, n) {
            let w = self.pmap(&v);
            let a = self.lie.ad_matrix(&v).pow(p - 1);
            for k in 0..n {
                let mut eq = vec![0u32; n * n];
                for l in 0..n {
                    eq[k * n + l] = f.add(eq[k * n + l], w[l]);
                    let akl = a.get(k, l);
                    if akl == 0 {
                        continue;
                    }
                    for (m, &vm) in v.iter().enumerate() {
                        let idx = l * n + m;
                        eq[idx] = f.sub(eq[idx], f.mul(akl, vm));
                    }
                }
                sys.push(&eq);
            }
        }
        sys.kernel_basis()
            .into_iter()
            .map(|v| FpMatrix::new(f, n, n, v).expect("n*n entries"))
            .collect()
    }
}

/// Result of [`is_isomorphic_restricted`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    /// `T` with `T[x, y] = [Tx, Ty]` and `T(x^[p]) = (Tx)^[p]`; column `j` is `T e_j`.
    Isomorphic(FpMatrix),
    NotIsomorphic,
    /// The candidate space is too large to enumerate.
    SearchInfeasible {
        candidates: u64,
    },
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

/// Largest number of candidate matrices the generic search will enumerate.
pub const MAX_ISO_CANDIDATES: u64 = 10_000_000;

/// Whether the algebra has the shape `[e0, e1] = e2`, all other brackets zero.
pub fn is_heisenberg_shaped(lie: &LieAlgebra) -> bool {
    if lie.dim() != 3 {
        return false;
    }
    let f = lie.field();
    (0..3).all(|i| {
        (0..3).all(|j| {
            let expected = match (i, j) {
                (0, 1) => f.unit_vec(3, 2),
                (1, 0) => f.neg_vec(&f.unit_vec(3, 2)),
                _ => vec![0; 3],
            };
            lie.basis_bracket(i, j) == expected.as_slice()
        })
    })
}

struct IsoChecker<'a> {
    r1: &'a RestrictedLieAlgebra,
    r2: &'a RestrictedLieAlgebra,
    table1: Vec<FpVector>,
    table2: Vec<FpVector>,
}

impl IsoChecker<'_> {
    fn check(&self, t: &FpMatrix) -> bool {
        let f = self.r1.field();
        let n = self.r1.dim();
        let images: Vec<FpVector> = t.columns();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = t.mul_vec(self.r1.lie().basis_bracket(i, j));
                if lhs != self.r2.bracket(&images[i], &images[j]) {
                    return false;
                }
            }
        }
        for (i, img) in images.iter().enumerate() {
            if t.mul_vec(&self.r1.pmap_images()[i]) != self.table2[f.index_of(img)] {
                return false;
            }
        }
        // the p-map is not linear, so compare on every vector
        f.all_vectors(n).enumerate().all(|(idx, v)| {
            let tv = t.mul_vec(&v);
            t.mul_vec(&self.table1[idx]) == self.table2[f.index_of(&tv)]
        })
    }
}

/// Search for a restricted isomorphism `R1 -> R2`.
///
/// Heisenberg-shaped pairs are searched over the maps
/// `x -> ax + by + cz`, `y -> dx + ey + fz`, `z -> (ae - bd) z`;
/// other pairs over all invertible matrices when there are at most
/// [`MAX_ISO_CANDIDATES`] of them. The first match in lexicographic order of
/// the parameters is returned.
pub fn is_isomorphic_restricted(
    r1: &RestrictedLieAlgebra,
    r2: &RestrictedLieAlgebra,
) -> Result<IsoOutcome> {
    let f = r1.field();
    if f != r2.field() {
        return Err(Error::FieldMismatch(f.p(), r2.p()));
    }
    let n = r1.dim();
    if n != r2.dim() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: r2.dim(),
        });
    }
    let heis = is_heisenberg_shaped(r1.lie()) && is_heisenberg_shaped(r2.lie());
    let candidates = if heis {
        f.count_vectors(6)
    } else {
        f.count_vectors(n * n)
    };
    if candidates > MAX_ISO_CANDIDATES {
        return Ok(IsoOutcome::SearchInfeasible { candidates });
    }
    let checker = IsoChecker {
        r1,
        r2,
        table1: r1.pmap_table(),
        table2: r2.pmap_table(),
    };
    // an isomorphism maps the zero set of the p-map bijectively
    let zeros = |t: &[FpVector]| t.iter().filter(|v| v.iter().all(|&a| a == 0)).count();
    if zeros(&checker.table1) != zeros(&checker.table2) {
        return Ok(IsoOutcome::NotIsomorphic);
    }
    if heis {
        for params in f.all_vectors(6) {
            let [a, b, c, d, e, g] = params[..] else {
                unreachable!()
            };
            let u = f.sub(f.mul(a, e), f.mul(b, d));
            if u == 0 {
                continue;
            }
            let t = FpMatrix::from_columns(f, 3, &[vec![a, b, c], vec![d, e, g], vec![0, 0, u]]);
            if checker.check(&t) {
                return Ok(IsoOutcome::Isomorphic(t));
            }
        }
    } else {
        for entries in f.all_vectors(n * n) {
            let t = FpMatrix::new(f, n, n, entries).expect("n*n entries");
            if t.det() != 0 && checker.check(&t) {
                return Ok(IsoOutcome::Isomorphic(t));
            }
        }
    }
    Ok(IsoOutcome::NotIsomorphic)
}

/// Whether `t` is a restricted isomorphism `R1 -> R2`.
pub fn is_restricted_isomorphism(
    r1: &RestrictedLieAlgebra,
    r2: &RestrictedLieAlgebra,
    t: &FpMatrix,
) -> bool {
    if t.rows() != r2.dim() || t.cols() != r1.dim() || t.det() == 0 {
        return false;
    }
    IsoChecker {
        r1,
        r2,
        table1: r1.pmap_table(),
        table2: r2.pmap_table(),
    }
    .check(t)
}

/// A restricted module: matrices `rho[i]` giving the action of `e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedModule {
    algebra: RestrictedLieAlgebra,
    dim: usize,
    rho: Vec<FpMatrix>,
}

impl RestrictedModule {
    /// Checks `rho([e_i, e_j]) = [rho(e_i), rho(e_j)]` and
    /// `rho(e_i^[p]) = rho(e_i)^p`.
    pub fn new(algebra: RestrictedLieAlgebra, rho: Vec<FpMatrix>) -> Result<Self> {
        let n = algebra.dim();
        if rho.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.len(),
            });
        }
        let dim = rho.first().map_or(0, |m| m.rows());
        for (i, m) in rho.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidModule(format!(
                    "rho[{i}] is not {dim} x {dim}"
                )));
            }
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch(algebra.p(), m.field().p()));
            }
        }
        let module = RestrictedModule { algebra, dim, rho };
        let p = module.algebra.field().order();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = module.action_matrix(module.algebra.lie().basis_bracket(i, j));
                let rhs = module.rho[i]
                    .mul(&module.rho[j])
                    .sub(&module.rho[j].mul(&module.rho[i]));
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "not a representation on basis pair ({i}, {j})"
                    )));
                }
            }
            let lhs = module.action_matrix(&module.algebra.pmap_images()[i].clone());
            if lhs != module.rho[i].pow(p) {
                return Err(Error::InvalidModule(format!(
                    "rho(e{i}^[p]) differs from rho(e{i})^p"
                )));
            }
        }
        Ok(module)
    }

    /// The adjoint module `L`.
    pub fn adjoint(algebra: &RestrictedLieAlgebra) -> Self {
        let lie = algebra.lie();
        let rho = (0..lie.dim())
            .map(|i| lie.ad_matrix(&lie.basis_vector(i)))
            .collect();
        RestrictedModule {
            algebra: algebra.clone(),
            dim: lie.dim(),
            rho,
        }
    }

    /// The trivial module of dimension `m`.
    pub fn trivial(algebra: &RestrictedLieAlgebra, m: usize) -> Self {
        let f = algebra.field();
        RestrictedModule {
            algebra: algebra.clone(),
            dim: m,
            rho: (0..algebra.dim())
                .map(|_| FpMatrix::zeros(f, m, m))
                .collect(),
        }
    }

    pub fn algebra(&self) -> &RestrictedLieAlgebra {
        &self.algebra
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> &[FpMatrix] {
        &self.rho
    }

    /// `rho(x) = sum_i x_i rho[i]`.
    pub fn action_matrix(&self, x: &[u32]) -> FpMatrix {
        let f = self.algebra.field();
        let mut acc = FpMatrix::zeros(f, self.dim, self.dim);
        for (i, &a) in x.iter().enumerate() {
            if a != 0 {
                acc = acc.add(&self.rho[i].scale(a));
            }
        }
        acc
    }

    /// `x . v`.
    pub fn act(&self, x: &[u32], v: &[u32]) -> FpVector {
        let f = self.algebra.field();
        let mut out = vec![0; self.dim];
        for (i, &a) in x.iter().enumerate() {
            if a != 0 {
                f.axpy(&mut out, a, &self.rho[i].mul_vec(v));
            }
        }
        out
    }

    /// `e_i . v`.
    pub fn act_basis(&self, i: usize, v: &[u32]) -> FpVector {
        self.rho[i].mul_vec(v)
    }

    /// `x . (x . (... v))` with `k` actions.
    pub fn act_power(&self, x: &[u32], v: &[u32], k: usize) -> FpVector {
        let mut acc = v.to_vec();
        for _ in 0..k {
            acc = self.act(x, &acc);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis(p: u32, theta: [u32; 3]) -> RestrictedLieAlgebra {
        let f = PrimeField::new(p).unwrap();
        let lie = LieAlgebra::new(
            f,
            vec!["x".into(), "y".into(), "z".into()],
            &[(0, 1, vec![0, 0, 1])],
        )
        .unwrap();
        let images = theta.iter().map(|&t| vec![0, 0, t % p]).collect();
        RestrictedLieAlgebra::new(lie, images).unwrap()
    }

    #[test]
    fn heisenberg_bracket() {
        let h = heis(5, [0, 0, 0]);
        assert_eq!(h.bracket(&[1, 0, 0], &[0, 1, 0]), vec![0, 0, 1]);
        assert_eq!(h.bracket(&[0, 1, 0], &[1, 0, 0]), vec![0, 0, 4]);
        let v = vec![3, 1, 4];
        assert_eq!(h.bracket(&v, &v), vec![0, 0, 0]);
    }

    #[test]
    fn rejects_bad_data() {
        let f = PrimeField::new(3).unwrap();
        let names: Vec<String> = (0..3).map(|i| format!("e{i}")).collect();
        assert_eq!(
            LieAlgebra::new(f, names.clone(), &[(1, 1, vec![1, 0, 0])]),
            Err(Error::NotAlternating { i: 1, j: 1 })
        );
        // [e0,e1]=e1, [e1,e2]=e0, [e0,e2]=0 is not Jacobi
        let bad = LieAlgebra::new(f, names, &[(0, 1, vec![0, 1, 0]), (1, 2, vec![1, 0, 0])]);
        assert_eq!(bad, Err(Error::JacobiFails { i: 0, j: 1, k: 2 }));
    }

    #[test]
    fn s_terms_match_closed_forms_at_p3() {
        let f = PrimeField::new(3).unwrap();
        // sl2-like nonnilpotent algebra to make both terms nonzero
        let names = vec!["X".into(), "Y".into(), "H".into()];
        let lie = LieAlgebra::new(
            f,
            names,
            &[
                (0, 1, vec![0, 0, 1]),
                (2, 0, vec![2, 0, 0]),
                (2, 1, vec![0, f.neg(2), 0]),
            ],
        )
        .unwrap();
        let x = vec![1, 2, 0];
        let y = vec![0, 1, 1];
        let s = lie.s_terms(&x, &y);
        let xy = lie.bracket(&x, &y);
        assert_eq!(s[0], lie.bracket(&xy, &y));
        assert_eq!(s[1], f.scale(2, &lie.bracket(&xy, &x)));
    }

    #[test]
    fn s_terms_at_p2_is_the_bracket() {
        let h = heis(2, [0, 0, 0]);
        let s = h.lie().s_terms(&[1, 0, 0], &[0, 1, 0]);
        assert_eq!(s, vec![vec![0, 0, 1]]);
    }

    #[test]
    fn heisenberg_pmap_formula() {
        for p in [3u32, 5] {
            let f = PrimeField::new(p).unwrap();
            let theta = [1, 2 % p, 1];
            let h = heis(p, theta);
            for v in f.all_vectors(3) {
                let t = (0..3).fold(0, |acc, i| {
                    f.add(acc, f.mul(f.pow(v[i], p as u64), theta[i]))
                });
                assert_eq!(h.pmap(&v), vec![0, 0, t]);
            }
        }
        let h2 = heis(2, [0, 0, 0]);
        assert_eq!(h2.pmap(&[1, 1, 0]), vec![0, 0, 1]);
        assert_eq!(h2.pmap(&[0, 0, 0]), vec![0, 0, 0]);
    }

    #[test]
    fn jacobson_rejects_noncentral_image() {
        let f = PrimeField::new(3).unwrap();
        let lie = heis(3, [0, 0, 0]).lie().clone();
        let images = vec![vec![1, 0, 0], vec![0, 0, 0], vec![0, 0, 0]];
        let report = verify_restricted(&lie, &images);
        assert!(!report.passed());
        assert_eq!(report.first_failure(), Some(0));
        assert_eq!(
            RestrictedLieAlgebra::new(lie, images),
            Err(Error::NotRestricted { index: 0 })
        );
        let _ = f;
    }

    #[test]
    fn center_and_derivations() {
        let h = heis(3, [0, 0, 0]);
        assert_eq!(h.lie().center(), vec![vec![0, 0, 1]]);
        let f = h.field();
        let ab = LieAlgebra::abelian(f, 3);
        assert_eq!(ab.center().len(), 3);
        assert_eq!(ab.derivations().len(), 9);
        assert_eq!(h.lie().inner_derivations().len(), 2);
        // Der(h) has dimension 6 in any characteristic
        assert_eq!(h.lie().derivations().len(), 6);
    }

    #[test]
    fn iso_examples_at_p3() {
        let x = heis(3, [1, 0, 0]);
        let y = heis(3, [0, 1, 0]);
        let zero = heis(3, [0, 0, 0]);
        assert!(is_isomorphic_restricted(&x, &y).unwrap().is_isomorphic());
        assert_eq!(
            is_isomorphic_restricted(&zero, &x).unwrap(),
            IsoOutcome::NotIsomorphic
        );
        let IsoOutcome::Isomorphic(t) = is_isomorphic_restricted(&x, &x).unwrap() else {
            panic!("self isomorphism")
        };
        assert_eq!(t, FpMatrix::identity(x.field(), 3));
    }

    #[test]
    fn adjoint_module_is_restricted() {
        let h = heis(5, [0, 0, 1]);
        let ad = RestrictedModule::adjoint(&h);
        assert!(RestrictedModule::new(h.clone(), ad.rho().to_vec()).is_ok());
        assert_eq!(ad.act(&[1, 0, 0], &[0, 1, 0]), vec![0, 0, 1]);
    }
}
