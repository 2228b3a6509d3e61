//! Commutative algebras and (restricted) Lie-Rinehart structures.

use std::fmt;

use crate::algebra::{default_names, pmap_fold, LieAlgebra, RestrictedLieAlgebra};
use crate::cohomology_ce::CeCochain;
use crate::deformation::{verify_deformation, DeformationReport, TruncatedDeformation};
use crate::error::{Error, Result};
use crate::gf::{FpMatrix, FpVector, LinearSystem, PrimeField};
use crate::sweep::Sweep;

/// A commutative, associative, unital algebra given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociativeAlgebra {
    field: PrimeField,
    dim: usize,
    /// `table[i * n + j] = e_i e_j`.
    table: Vec<FpVector>,
    unit: usize,
}

impl AssociativeAlgebra {
    /// `table[i * n + j]` is the product `e_i e_j`; `e_unit` is the unit.
    pub fn new(field: PrimeField, table: Vec<FpVector>, unit: usize) -> Result<Self> {
        let dim = (table.len() as f64).sqrt().round() as usize;
        if dim * dim != table.len() {
            return Err(Error::InvalidInput(
                "multiplication table is not square".into(),
            ));
        }
        if unit >= dim.max(1) {
            return Err(Error::InvalidInput(format!(
                "unit index {unit} out of range"
            )));
        }
        let mut reduced = Vec::with_capacity(table.len());
        for v in table {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            reduced.push(v.into_iter().map(|a| a % field.p()).collect::<FpVector>());
        }
        let a = AssociativeAlgebra {
            field,
            dim,
            table: reduced,
            unit,
        };
        a.check_axioms()?;
        Ok(a)
    }

    /// The one-dimensional algebra `F`.
    pub fn ground(field: PrimeField) -> Self {
        AssociativeAlgebra {
            field,
            dim: 1,
            table: vec![vec![1]],
            unit: 0,
        }
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            let e = self.basis_vector(i);
            if self.mul(&self.unit_vector(), &e) != e {
                return Err(Error::InvalidInput(format!(
                    "e{} is not a unit for e{i}",
                    self.unit
                )));
            }
            for j in 0..n {
                if self.basis_product(i, j) != self.basis_product(j, i) {
                    return Err(Error::InvalidInput(format!(
                        "not commutative at (e{i}, e{j})"
                    )));
                }
                for k in 0..n {
                    let l = self.mul(self.basis_product(i, j), &self.basis_vector(k));
                    let r = self.mul(&self.basis_vector(i), self.basis_product(j, k));
                    if l != r {
                        return Err(Error::InvalidInput(format!(
                            "not associative at (e{i}, e{j}, e{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn unit_vector(&self) -> FpVector {
        self.field.unit_vec(self.dim, self.unit)
    }

    pub fn basis_vector(&self, i: usize) -> FpVector {
        self.field.unit_vec(self.dim, i)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &FpVector {
        &self.table[i * self.dim + j]
    }

    pub fn table(&self) -> &[FpVector] {
        &self.table
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> FpVector {
        let f = self.field;
        let mut out = vec![0; self.dim];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    f.axpy(&mut out, f.mul(x, y), self.basis_product(i, j));
                }
            }
        }
        out
    }

    /// `a^k`, with `a^0` the unit.
    pub fn power(&self, a: &[u32], k: u64) -> FpVector {
        let mut acc = self.unit_vector();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Matrix of multiplication by `a`.
    pub fn mul_matrix(&self, a: &[u32]) -> FpMatrix {
        let cols: Vec<FpVector> = (0..self.dim)
            .map(|j| self.mul(a, &self.basis_vector(j)))
            .collect();
        FpMatrix::from_columns(self.field, self.dim, &cols)
    }

    /// Whether the square matrix `d` satisfies `D(ab) = D(a) b + a D(b)` on basis pairs.
    pub fn is_derivation(&self, d: &FpMatrix) -> bool {
        let f = self.field;
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let lhs = d.mul_vec(self.basis_product(i, j));
                let mut rhs = self.mul(&d.column(i), &self.basis_vector(j));
                f.add_assign(&mut rhs, &self.mul(&self.basis_vector(i), &d.column(j)));
                lhs == rhs
            })
        })
    }

    /// Whether `eps` (values on the basis) is an algebra morphism `A -> F`.
    pub fn is_augmentation(&self, eps: &[u32]) -> bool {
        let f = self.field;
        eps.len() == self.dim
            && eps[self.unit] == 1
            && (0..self.dim).all(|i| {
                (0..self.dim).all(|j| f.dot(eps, self.basis_product(i, j)) == f.mul(eps[i], eps[j]))
            })
    }

    /// All algebra morphisms `A -> F`.
    pub fn augmentations(&self) -> Vec<FpVector> {
        self.field
            .all_vectors(self.dim)
            .filter(|e| self.is_augmentation(e))
            .collect()
    }

    /// A basis of `Der(A)`.
    pub fn derivations(&self) -> Vec<FpMatrix> {
        let n = self.dim;
        let f = self.field;
        let mut sys = LinearSystem::new(f, n * n);
        // unknown D[r][c] at index r * n + c; D e_c = column c
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let mut eq = vec![0u32; n * n];
                    for (l, &c) in self.basis_product(i, j).iter().enumerate() {
                        eq[k * n + l] = f.add(eq[k * n + l], c);
                    }
                    // D(e_i) e_j = sum_l D[l][i] e_l e_j
                    for l in 0..n {
                        let a = self.basis_product(l, j)[k];
                        eq[l * n + i] = f.sub(eq[l * n + i], a);
                        let b = self.basis_product(i, l)[k];
                        eq[l * n + j] = f.sub(eq[l * n + j], b);
                    }
                    sys.push(&eq);
                }
            }
        }
        sys.kernel_basis()
            .into_iter()
            .map(|v| FpMatrix::new(f, n, n, v).expect("n*n entries"))
            .collect()
    }
}

/// The action `a . u = eps(a) u` of `A` on a space of dimension `n`,
/// `action[i]` being the matrix of `e_i`.
pub fn scalar_action(a: &AssociativeAlgebra, eps: &[u32], n: usize) -> Result<Vec<FpMatrix>> {
    if !a.is_augmentation(eps) {
        return Err(Error::InvalidInput(format!(
            "{eps:?} is not an algebra morphism to F"
        )));
    }
    let f = a.field();
    Ok(eps
        .iter()
        .map(|&e| FpMatrix::identity(f, n).scale(e))
        .collect())
}

/// The axioms checked by [`verify_lie_rinehart`] and [`verify_multiderivation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `(ab) . x = a . (b . x)` and `1 . x = x`.
    ModuleAction,
    /// Each `rho(e_j)` is a derivation of `A`.
    AnchorInDer,
    /// `rho([x, y]) = [rho(x), rho(y)]`.
    AnchorLieMorphism,
    /// `rho(a . x) = a rho(x)`.
    AnchorLinear,
    /// `[x, a . y] = rho_x(a) . y + a . [x, y]`.
    Leibniz,
    /// `rho(x^[p]) = rho(x)^p`.
    AnchorRestricted,
    /// `(a . x)^[p] = a^p . x^[p] + rho(a . x)^(p-1)(a) . x`.
    Hochschild,
    /// Jacobi identity of the bracket.
    Jacobi,
    /// `[x, y^[p]] = [x, y, .., y]` with `p` copies of `y`.
    PFold,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::ModuleAction => "module action",
            Axiom::AnchorInDer => "anchor lands in Der(A)",
            Axiom::AnchorLieMorphism => "anchor is a Lie morphism",
            Axiom::AnchorLinear => "anchor is A-linear",
            Axiom::Leibniz => "Leibniz condition",
            Axiom::AnchorRestricted => "anchor respects p-maps",
            Axiom::Hochschild => "Hochschild condition",
            Axiom::Jacobi => "Jacobi identity",
            Axiom::PFold => "p-fold bracket identity",
        };
        f.write_str(s)
    }
}

/// One line of a [`LieRinehartReport`]. The witness lists the arguments of
/// the first failure in the order they appear in the axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub witness: Option<Vec<FpVector>>,
    /// False when the arguments were sampled.
    pub exhaustive: bool,
}

impl AxiomCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieRinehartReport {
    pub checks: Vec<AxiomCheck>,
}

impl LieRinehartReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::holds)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.holds())
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn holds(&self, axiom: Axiom) -> bool {
        self.check(axiom).is_some_and(AxiomCheck::holds)
    }
}

fn check_shapes(
    a: &AssociativeAlgebra,
    n: usize,
    action: &[FpMatrix],
    anchor: &[FpMatrix],
) -> Result<()> {
    let f = a.field();
    if action.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: action.len(),
        });
    }
    if anchor.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: anchor.len(),
        });
    }
    for (m, d) in action
        .iter()
        .map(|m| (m, n))
        .chain(anchor.iter().map(|m| (m, a.dim())))
    {
        if m.field() != f {
            return Err(Error::FieldMismatch(f.p(), m.field().p()));
        }
        if m.rows() != d || m.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.rows().max(m.cols()),
            });
        }
    }
    Ok(())
}

/// The data shared by a Lie-Rinehart structure and a restricted
/// multiderivation: `A`, its action on `L`, a bracket, a p-map and an anchor.
struct RawStructure<'a> {
    a: &'a AssociativeAlgebra,
    n: usize,
    action: &'a [FpMatrix],
    anchor: &'a [FpMatrix],
    bracket: &'a dyn Fn(&[u32], &[u32]) -> FpVector,
    pmap: &'a dyn Fn(&[u32]) -> FpVector,
}

impl RawStructure<'_> {
    fn field(&self) -> PrimeField {
        self.a.field()
    }

    fn act(&self, a: &[u32], u: &[u32]) -> FpVector {
        let f = self.field();
        let mut out = vec![0; self.n];
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut out, c, &self.action[i].mul_vec(u));
            }
        }
        out
    }

    fn combine(&self, ms: &[FpMatrix], x: &[u32], d: usize) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.field(), d, d);
        for (j, &c) in x.iter().enumerate() {
            if c != 0 {
                out = out.add(&ms[j].scale(c));
            }
        }
        out
    }

    fn anchor_of(&self, x: &[u32]) -> FpMatrix {
        self.combine(self.anchor, x, self.a.dim())
    }

    fn l(&self, i: usize) -> FpVector {
        self.field().unit_vec(self.n, i)
    }

    fn check(&self, axiom: Axiom, sweep: &Sweep) -> AxiomCheck {
        let f = self.field();
        let (n, da) = (self.n, self.a.dim());
        let p = f.order();
        let mut exhaustive = true;
        let witness = match axiom {
            Axiom::ModuleAction => {
                let unit = self.a.unit_index();
                if self.action[unit] != FpMatrix::identity(f, n) {
                    Some(vec![self.a.unit_vector()])
                } else {
                    pairs(da).find_map(|(i, j)| {
                        let lhs = self.combine(self.action, self.a.basis_product(i, j), n);
                        (lhs != self.action[i].mul(&self.action[j]))
                            .then(|| vec![self.a.basis_vector(i), self.a.basis_vector(j)])
                    })
                }
            }
            Axiom::AnchorInDer => (0..n)
                .find(|&j| !self.a.is_derivation(&self.anchor[j]))
                .map(|j| vec![self.l(j)]),
            Axiom::AnchorLieMorphism => pairs(n).find_map(|(i, j)| {
                let lhs = self.anchor_of(&(self.bracket)(&self.l(i), &self.l(j)));
                let rhs = self.anchor[i]
                    .mul(&self.anchor[j])
                    .sub(&self.anchor[j].mul(&self.anchor[i]));
                (lhs != rhs).then(|| vec![self.l(i), self.l(j)])
            }),
            Axiom::AnchorLinear => {
                (0..da)
                    .flat_map(|k| (0..n).map(move |j| (k, j)))
                    .find_map(|(k, j)| {
                        let a = self.a.basis_vector(k);
                        let lhs = self.anchor_of(&self.act(&a, &self.l(j)));
                        let rhs = self.a.mul_matrix(&a).mul(&self.anchor[j]);
                        (lhs != rhs).then(|| vec![a, self.l(j)])
                    })
            }
            Axiom::Leibniz => (0..n)
                .flat_map(|i| (0..da).flat_map(move |k| (0..n).map(move |j| (i, k, j))))
                .find_map(|(i, k, j)| {
                    let (x, a, y) = (self.l(i), self.a.basis_vector(k), self.l(j));
                    let lhs = (self.bracket)(&x, &self.act(&a, &y));
                    let mut rhs = self.act(&self.anchor[i].mul_vec(&a), &y);
                    f.add_assign(&mut rhs, &self.act(&a, &(self.bracket)(&x, &y)));
                    (lhs != rhs).then(|| vec![x, a, y])
                }),
            Axiom::Jacobi => (0..n)
                .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
                .find_map(|(i, j, k)| {
                    let (x, y, z) = (self.l(i), self.l(j), self.l(k));
                    let b = self.bracket;
                    let mut s = b(&b(&x, &y), &z);
                    f.add_assign(&mut s, &b(&b(&y, &z), &x));
                    f.add_assign(&mut s, &b(&b(&z, &x), &y));
                    s.iter().any(|&c| c != 0).then(|| vec![x, y, z])
                }),
            Axiom::PFold => {
                exhaustive = sweep.is_exhaustive(f, &[n]);
                sweep.vectors(f, n).find_map(|y| {
                    let wy = (self.pmap)(&y);
                    (0..n).find_map(|i| {
                        let x = self.l(i);
                        let mut acc = x.clone();
                        for _ in 0..p {
                            acc = (self.bracket)(&acc, &y);
                        }
                        ((self.bracket)(&x, &wy) != acc).then(|| vec![x, y.clone()])
                    })
                })
            }
            Axiom::AnchorRestricted => {
                exhaustive = sweep.is_exhaustive(f, &[n]);
                sweep.vectors(f, n).find_map(|x| {
                    (self.anchor_of(&(self.pmap)(&x)) != self.anchor_of(&x).pow(p)).then(|| vec![x])
                })
            }
            Axiom::Hochschild => {
                exhaustive = sweep.is_exhaustive(f, &[da, n]);
                sweep.tuples(f, &[da, n]).find_map(|t| {
                    let (a, x) = (&t[0], &t[1]);
                    let ax = self.act(a, x);
                    let lhs = (self.pmap)(&ax);
                    let mut rhs = self.act(&self.a.power(a, p), &(self.pmap)(x));
                    let coeff = self.anchor_of(&ax).pow(p - 1).mul_vec(a);
                    f.add_assign(&mut rhs, &self.act(&coeff, x));
                    (lhs != rhs).then(|| t.clone())
                })
            }
        };
        AxiomCheck {
            axiom,
            witness,
            exhaustive,
        }
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

/// A restricted Lie-Rinehart structure: `A` acts on `L` through `action`
/// (`action[i]` is the matrix of `u -> e_i . u`) and `anchor[j] = rho(e_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieRinehartStructure {
    algebra: AssociativeAlgebra,
    lie: RestrictedLieAlgebra,
    action: Vec<FpMatrix>,
    anchor: Vec<FpMatrix>,
}

impl LieRinehartStructure {
    /// Assemble a structure, checking only shapes and fields; see
    /// [`verify_lie_rinehart`] for the axioms.
    pub fn new(
        algebra: AssociativeAlgebra,
        lie: RestrictedLieAlgebra,
        action: Vec<FpMatrix>,
        anchor: Vec<FpMatrix>,
    ) -> Result<Self> {
        if algebra.field() != lie.field() {
            return Err(Error::FieldMismatch(algebra.field().p(), lie.p()));
        }
        check_shapes(&algebra, lie.dim(), &action, &anchor)?;
        Ok(LieRinehartStructure {
            algebra,
            lie,
            action,
            anchor,
        })
    }

    /// The structure with anchor zero.
    pub fn null_anchor(
        algebra: AssociativeAlgebra,
        lie: RestrictedLieAlgebra,
        action: Vec<FpMatrix>,
    ) -> Result<Self> {
        let zero = FpMatrix::zeros(algebra.field(), algebra.dim(), algebra.dim());
        let anchor = vec![zero; lie.dim()];
        Self::new(algebra, lie, action, anchor)
    }

    pub fn algebra(&self) -> &AssociativeAlgebra {
        &self.algebra
    }

    pub fn lie(&self) -> &RestrictedLieAlgebra {
        &self.lie
    }

    pub fn action(&self) -> &[FpMatrix] {
        &self.action
    }

    pub fn anchor(&self) -> &[FpMatrix] {
        &self.anchor
    }

    /// `a . u`.
    pub fn act(&self, a: &[u32], u: &[u32]) -> FpVector {
        self.with_raw(|r| r.act(a, u))
    }

    /// `rho(x)`.
    pub fn anchor_of(&self, x: &[u32]) -> FpMatrix {
        self.with_raw(|r| r.anchor_of(x))
    }

    fn with_raw<T>(&self, body: impl FnOnce(&RawStructure) -> T) -> T {
        let bracket = |x: &[u32], y: &[u32]| self.lie.bracket(x, y);
        let pmap = |x: &[u32]| self.lie.pmap(x);
        body(&RawStructure {
            a: &self.algebra,
            n: self.lie.dim(),
            action: &self.action,
            anchor: &self.anchor,
            bracket: &bracket,
            pmap: &pmap,
        })
    }
}

const LR_AXIOMS: [Axiom; 7] = [
    Axiom::ModuleAction,
    Axiom::AnchorInDer,
    Axiom::AnchorLieMorphism,
    Axiom::AnchorLinear,
    Axiom::Leibniz,
    Axiom::AnchorRestricted,
    Axiom::Hochschild,
];

const MULTIDERIVATION_AXIOMS: [Axiom; 8] = [
    Axiom::ModuleAction,
    Axiom::AnchorInDer,
    Axiom::AnchorLinear,
    Axiom::Leibniz,
    Axiom::AnchorRestricted,
    Axiom::Hochschild,
    Axiom::Jacobi,
    Axiom::PFold,
];

/// Check every restricted Lie-Rinehart axiom. Multilinear axioms run on basis
/// tuples; the p-map conditions run over the sweep.
pub fn verify_lie_rinehart(s: &LieRinehartStructure, sweep: &Sweep) -> LieRinehartReport {
    s.with_raw(|r| LieRinehartReport {
        checks: LR_AXIOMS.iter().map(|&a| r.check(a, sweep)).collect(),
    })
}

/// A bracket `m`, a p-map `omega` given on the basis and a symbol map
/// `sigma[j] = sigma(e_j)` on an `A`-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedMultiderivation {
    pub names: Vec<String>,
    pub m: CeCochain,
    pub omega: Vec<FpVector>,
    pub sigma: Vec<FpMatrix>,
}

impl RestrictedMultiderivation {
    pub fn new(m: CeCochain, omega: Vec<FpVector>, sigma: Vec<FpMatrix>) -> Result<Self> {
        let n = m.algebra_dim();
        if m.degree() != 2 || m.module_dim() != n {
            return Err(Error::InvalidInput(
                "m must be a 2-cochain with values in L".into(),
            ));
        }
        if omega.len() != n || sigma.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: omega.len().min(sigma.len()),
            });
        }
        if let Some(w) = omega.iter().find(|w| w.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.len(),
            });
        }
        let omega = omega
            .into_iter()
            .map(|w| w.into_iter().map(|c| c % m.field().p()).collect())
            .collect();
        Ok(RestrictedMultiderivation {
            names: default_names(n),
            m,
            omega,
            sigma,
        })
    }

    pub fn dim(&self) -> usize {
        self.m.algebra_dim()
    }

    pub fn field(&self) -> PrimeField {
        self.m.field()
    }

    pub fn bracket(&self, x: &[u32], y: &[u32]) -> FpVector {
        self.m.eval(&[x, y])
    }

    /// `omega(x)`, extended from the basis by Jacobson's formula for `m`.
    pub fn pmap(&self, x: &[u32]) -> FpVector {
        pmap_fold(self.field(), x, &self.omega, |a, b| self.bracket(a, b))
    }

    fn with_raw<T>(
        &self,
        a: &AssociativeAlgebra,
        action: &[FpMatrix],
        body: impl FnOnce(&RawStructure) -> T,
    ) -> T {
        let bracket = |x: &[u32], y: &[u32]| self.bracket(x, y);
        let pmap = |x: &[u32]| self.pmap(x);
        body(&RawStructure {
            a,
            n: self.dim(),
            action,
            anchor: &self.sigma,
            bracket: &bracket,
            pmap: &pmap,
        })
    }
}

/// Check the symbol-map conditions on `(m, omega, sigma)` together with the
/// Jacobi identity and the p-fold identity.
pub fn verify_multiderivation(
    a: &AssociativeAlgebra,
    action: &[FpMatrix],
    md: &RestrictedMultiderivation,
    sweep: &Sweep,
) -> Result<LieRinehartReport> {
    if a.field() != md.field() {
        return Err(Error::FieldMismatch(a.field().p(), md.field().p()));
    }
    check_shapes(a, md.dim(), action, &md.sigma)?;
    Ok(md.with_raw(a, action, |r| LieRinehartReport {
        checks: MULTIDERIVATION_AXIOMS
            .iter()
            .map(|&x| r.check(x, sweep))
            .collect(),
    }))
}

/// The Lie-Rinehart structure defined by a restricted multiderivation.
pub fn multiderivation_to_structure(
    a: &AssociativeAlgebra,
    action: &[FpMatrix],
    md: &RestrictedMultiderivation,
    sweep: &Sweep,
) -> Result<LieRinehartStructure> {
    let report = verify_multiderivation(a, action, md, sweep)?;
    if let Some(c) = report.first_failure() {
        return Err(Error::NotMultiderivation {
            axiom: c.axiom.to_string(),
            witness: format!(
                "{:?}",
                c.witness.as_ref().expect("failing check has a witness")
            ),
        });
    }
    let n = md.dim();
    let f = md.field();
    let mut c = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            c.extend(md.bracket(&f.unit_vec(n, i), &f.unit_vec(n, j)));
        }
    }
    let lie = LieAlgebra::from_structure_constants(f, md.names.clone(), c)?;
    let lie = RestrictedLieAlgebra::new(lie, md.omega.clone())?;
    LieRinehartStructure::new(a.clone(), lie, action.to_vec(), md.sigma.clone())
}

/// The restricted multiderivation `(bracket, p-map, anchor)` of a structure.
pub fn structure_to_multiderivation(s: &LieRinehartStructure) -> RestrictedMultiderivation {
    let lie = s.lie();
    let n = lie.dim();
    let m = CeCochain::from_fn(lie.field(), n, n, 2, |t| {
        lie.lie().basis_bracket(t[0], t[1]).to_vec()
    });
    RestrictedMultiderivation {
        names: lie.lie().names().to_vec(),
        m,
        omega: lie.pmap_images().to_vec(),
        sigma: s.anchor().to_vec(),
    }
}

/// `Der(A)` as a restricted Lie algebra, with the derivation matrices of its basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationAlgebra {
    lie: RestrictedLieAlgebra,
    basis: Vec<FpMatrix>,
    solver: Option<FpMatrix>,
}

impl DerivationAlgebra {
    pub fn lie(&self) -> &RestrictedLieAlgebra {
        &self.lie
    }

    pub fn basis(&self) -> &[FpMatrix] {
        &self.basis
    }

    /// Coordinates of a matrix in the derivation basis, if it is a derivation.
    pub fn coords(&self, d: &FpMatrix) -> Option<FpVector> {
        match &self.solver {
            None => d.is_zero().then(Vec::new),
            Some(m) => m.solve(d.entries()).into_vector(),
        }
    }

    /// The derivation with coordinates `v`.
    pub fn matrix(&self, v: &[u32]) -> FpMatrix {
        let a = &self.basis;
        let f = self.lie.field();
        let n = a.first().map_or(0, FpMatrix::rows);
        let mut out = FpMatrix::zeros(f, n, n);
        for (c, d) in v.iter().zip(a) {
            out = out.add(&d.scale(*c));
        }
        out
    }
}

/// `Der(A)` with the commutator bracket and the p-th matrix power as p-map.
pub fn derivation_algebra(a: &AssociativeAlgebra) -> Result<DerivationAlgebra> {
    let f = a.field();
    let basis = a.derivations();
    let k = basis.len();
    let solver = (k > 0).then(|| {
        let cols: Vec<FpVector> = basis.iter().map(|d| d.entries().to_vec()).collect();
        FpMatrix::from_columns(f, a.dim() * a.dim(), &cols)
    });
    let mut der = DerivationAlgebra {
        lie: RestrictedLieAlgebra::new(LieAlgebra::abelian(f, 0), Vec::new())?,
        basis,
        solver,
    };
    let coords = |d: &FpMatrix| {
        der.coords(d).ok_or_else(|| {
            Error::OracleMismatch("Der(A) is not closed under the bracket or p-th power".into())
        })
    };
    let mut c = Vec::with_capacity(k * k * k);
    for i in 0..k {
        for j in 0..k {
            let (x, y) = (&der.basis[i], &der.basis[j]);
            c.extend(coords(&x.mul(y).sub(&y.mul(x)))?);
        }
    }
    let images = der
        .basis
        .iter()
        .map(|d| coords(&d.pow(f.order())))
        .collect::<Result<Vec<_>>>()?;
    let names = (0..k).map(|i| format!("D{i}")).collect();
    let lie = LieAlgebra::from_structure_constants(f, names, c)?;
    der.lie = RestrictedLieAlgebra::new(lie, images)?;
    Ok(der)
}

/// `(A, Der(A))` with the identity anchor and `(a . D)(b) = a D(b)`.
pub fn derivation_structure(
    a: &AssociativeAlgebra,
) -> Result<(DerivationAlgebra, LieRinehartStructure)> {
    let der = derivation_algebra(a)?;
    let k = der.basis.len();
    let f = a.field();
    let mut action = Vec::with_capacity(a.dim());
    for i in 0..a.dim() {
        let mul = a.mul_matrix(&a.basis_vector(i));
        let cols = der
            .basis
            .iter()
            .map(|d| der.coords(&mul.mul(d)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::OracleMismatch("Der(A) is not an A-module".into()))?;
        action.push(FpMatrix::from_columns(f, k, &cols));
    }
    let s = LieRinehartStructure::new(a.clone(), der.lie.clone(), action, der.basis.clone())?;
    Ok((der, s))
}

/// Result of [`anchor_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorSearch {
    pub candidates: u64,
    /// Anchors for which every restricted Lie-Rinehart axiom holds.
    pub survivors: Vec<Vec<FpMatrix>>,
}

/// Every linear map `L -> Der(A)` that makes `(A, L, action)` a restricted
/// Lie-Rinehart algebra. Fails when there are more than `sweep.max_points` maps.
pub fn anchor_search(
    a: &AssociativeAlgebra,
    lie: &RestrictedLieAlgebra,
    action: &[FpMatrix],
    sweep: &Sweep,
) -> Result<AnchorSearch> {
    let f = a.field();
    let ders = a.derivations();
    let n = lie.dim();
    let k = ders.len();
    let candidates = f.count_vectors(n * k);
    if candidates > sweep.max_points {
        return Err(Error::InvalidInput(format!(
            "{candidates} candidate anchors exceed the sweep limit {}",
            sweep.max_points
        )));
    }
    let mut survivors = Vec::new();
    for coeffs in f.all_vectors(n * k) {
        let anchor: Vec<FpMatrix> = (0..n)
            .map(|j| {
                let mut d = FpMatrix::zeros(f, a.dim(), a.dim());
                for (l, m) in ders.iter().enumerate() {
                    d = d.add(&m.scale(coeffs[j * k + l]));
                }
                d
            })
            .collect();
        let s = LieRinehartStructure::new(a.clone(), lie.clone(), action.to_vec(), anchor)?;
        if verify_lie_rinehart(&s, sweep).passed() {
            survivors.push(s.anchor);
        }
    }
    Ok(AnchorSearch {
        candidates,
        survivors,
    })
}

/// Classification of a deformation of a restricted Lie-Rinehart structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrDeformationClass {
    /// The bracket, p-map and symbol conditions hold at every order.
    Full,
    /// The restricted Lie algebra deforms but the symbol maps are not
    /// compatible with the deformed p-map.
    Weak,
    Invalid,
}

/// Report of [`verify_lr_deformation`]. Witnesses are `(order, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LrDeformationReport {
    pub class: LrDeformationClass,
    pub lie: DeformationReport,
    /// First order `k >= 1` at which `(m_k, sigma_k)` fails a linear symbol condition.
    pub symbol: Option<(usize, AxiomCheck)>,
    /// `sum_i sigma_i(omega_(k-i)(x)) = sum sigma_(i_1)(x) .. sigma_(i_p)(x)`.
    pub anchor_pmap: Option<(usize, FpVector)>,
    /// `sigma_k(x)^(p-1) = sum sigma_(i_1)(x) .. sigma_(i_(p-1))(x)`, taken literally.
    pub anchor_power: Option<(usize, FpVector)>,
    pub exhaustive: bool,
}

/// Coefficient of `t^k`, `k <= N`, in `S(t)^e` for `S(t) = sum_i t^i s[i]`.
fn series_power(s: &[FpMatrix], e: u64) -> Vec<FpMatrix> {
    let f = s[0].field();
    let d = s[0].rows();
    let mut acc = vec![FpMatrix::zeros(f, d, d); s.len()];
    acc[0] = FpMatrix::identity(f, d);
    for _ in 0..e {
        let mut next = vec![FpMatrix::zeros(f, d, d); s.len()];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in s.iter().enumerate().take(s.len() - i) {
                next[i + j] = next[i + j].add(&a.mul(b));
            }
        }
        acc = next;
    }
    acc
}

/// Classify a truncated deformation of `s` with symbol maps `sigmas[k-1] = sigma_k`
/// (missing orders are zero). The base anchor is `sigma_0`.
pub fn verify_lr_deformation(
    s: &LieRinehartStructure,
    d: &TruncatedDeformation,
    sigmas: &[Vec<FpMatrix>],
    sweep: &Sweep,
) -> Result<LrDeformationReport> {
    if d.base() != s.lie() {
        return Err(Error::InvalidInput(
            "the deformation is not based on the structure's Lie algebra".into(),
        ));
    }
    if sigmas.len() > d.order() {
        return Err(Error::InvalidInput(format!(
            "{} symbol maps given for a deformation of order {}",
            sigmas.len(),
            d.order()
        )));
    }
    let a = s.algebra();
    let f = a.field();
    let n = d.dim();
    let zero = vec![FpMatrix::zeros(f, a.dim(), a.dim()); n];
    let mut all = vec![s.anchor().to_vec()];
    for sg in sigmas {
        check_shapes(a, n, s.action(), sg)?;
        all.push(sg.clone());
    }
    all.resize(d.order() + 1, zero);

    let lie = verify_deformation(d, sweep);
    let mut symbol = None;
    for (k, sg) in all.iter().enumerate().skip(1) {
        let m = d.bracket_term(k);
        let bracket = |x: &[u32], y: &[u32]| m.eval(&[x, y]);
        let pmap = |_: &[u32]| vec![0; n];
        let raw = RawStructure {
            a,
            n,
            action: s.action(),
            anchor: sg,
            bracket: &bracket,
            pmap: &pmap,
        };
        let failed = [Axiom::AnchorInDer, Axiom::AnchorLinear, Axiom::Leibniz]
            .into_iter()
            .map(|ax| raw.check(ax, sweep))
            .find(|c| !c.holds());
        if let Some(c) = failed {
            symbol = Some((k, c));
            break;
        }
    }

    let sigma_of = |k: usize, x: &[u32]| {
        let mut out = FpMatrix::zeros(f, a.dim(), a.dim());
        for (j, &c) in x.iter().enumerate() {
            if c != 0 {
                out = out.add(&all[k][j].scale(c));
            }
        }
        out
    };
    let p = f.order();
    let mut anchor_pmap = None;
    let mut anchor_power = None;
    for x in sweep.vectors(f, n) {
        let sx: Vec<FpMatrix> = (0..all.len()).map(|k| sigma_of(k, &x)).collect();
        let wx = d.pmap_t_vector(&x);
        let pow_p = series_power(&sx, p);
        let pow_p1 = series_power(&sx, p - 1);
        for k in 0..all.len() {
            if anchor_pmap.is_none() {
                let mut lhs = FpMatrix::zeros(f, a.dim(), a.dim());
                for i in 0..=k {
                    lhs = lhs.add(&sigma_of(i, &wx[k - i]));
                }
                if lhs != pow_p[k] {
                    anchor_pmap = Some((k, x.clone()));
                }
            }
            if anchor_power.is_none() && sx[k].pow(p - 1) != pow_p1[k] {
                anchor_power = Some((k, x.clone()));
            }
        }
        if anchor_pmap.is_some() && anchor_power.is_some() {
            break;
        }
    }
    let class = if !lie.passed() || symbol.is_some() {
        LrDeformationClass::Invalid
    } else if anchor_pmap.is_none() && anchor_power.is_none() {
        LrDeformationClass::Full
    } else {
        LrDeformationClass::Weak
    };
    Ok(LrDeformationReport {
        class,
        lie,
        symbol,
        anchor_pmap,
        anchor_power,
        exhaustive: sweep.is_exhaustive(f, &[n]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_restricted_isomorphism;
    use crate::catalog;
    use proptest::prelude::*;

    fn sweep() -> Sweep {
        Sweep::default()
    }

    fn small_algebras() -> Vec<AssociativeAlgebra> {
        vec![
            AssociativeAlgebra::ground(PrimeField::new(3).unwrap()),
            catalog::dual_numbers(3).unwrap(),
            catalog::dual_numbers(5).unwrap(),
            catalog::truncated_polynomials(3).unwrap(),
            catalog::truncated_polynomials(5).unwrap(),
            catalog::assoc_dim2(catalog::Dim2Variant::A0).unwrap(),
            catalog::assoc_dim2(catalog::Dim2Variant::A1).unwrap(),
            catalog::assoc_dim2(catalog::Dim2Variant::A2).unwrap(),
        ]
    }

    #[test]
    fn augmentations_of_small_algebras() {
        let a1 = catalog::assoc_dim2(catalog::Dim2Variant::A1).unwrap();
        assert_eq!(a1.augmentations(), vec![vec![1, 1]]);
        assert_eq!(
            catalog::dual_numbers(5).unwrap().augmentations(),
            vec![vec![1, 0]]
        );
        let a2 = catalog::assoc_dim2(catalog::Dim2Variant::A2).unwrap();
        assert_eq!(a2.augmentations(), vec![vec![1, 0], vec![1, 1]]);
        assert!(scalar_action(&a1, &[1, 0], 3).is_err());
    }

    #[test]
    fn derivations_of_the_ground_field_vanish() {
        for p in [2, 3, 5] {
            let der = derivation_algebra(&AssociativeAlgebra::ground(PrimeField::new(p).unwrap()))
                .unwrap();
            assert_eq!(der.lie().dim(), 0);
        }
    }

    #[test]
    fn derivations_of_a1_match_brute_force() {
        let a = catalog::assoc_dim2(catalog::Dim2Variant::A1).unwrap();
        let f = a.field();
        let count = f
            .all_vectors(4)
            .filter(|e| a.is_derivation(&FpMatrix::new(f, 2, 2, e.clone()).unwrap()))
            .count();
        let der = derivation_algebra(&a).unwrap();
        assert_eq!(1 << der.lie().dim(), count);
        assert_eq!(der.lie().dim(), 2);
        // D_a: e2 -> e1 and D_b: e2 -> e2 give [D_a, D_b] = D_a, D_a^2 = 0, D_b^2 = D_b
        let da = FpMatrix::new(f, 2, 2, vec![0, 1, 0, 0]).unwrap();
        let db = FpMatrix::new(f, 2, 2, vec![0, 0, 0, 1]).unwrap();
        let (ca, cb) = (der.coords(&da).unwrap(), der.coords(&db).unwrap());
        assert_eq!(der.lie().bracket(&ca, &cb), ca);
        assert_eq!(der.lie().pmap(&ca), vec![0, 0]);
        assert_eq!(der.lie().pmap(&cb), cb);
    }

    /// The derivation of `F[x]/(x^p - 1)` sending `x` to `v`.
    fn derivation_from_image(a: &AssociativeAlgebra, v: &[u32]) -> FpMatrix {
        let f = a.field();
        let n = a.dim();
        let cols: Vec<FpVector> = (0..n)
            .map(|k| {
                if k == 0 {
                    return vec![0; n];
                }
                let xk1 = a.power(&a.basis_vector(1), k as u64 - 1);
                f.scale(f.from_int(k as i64), &a.mul(&xk1, v))
            })
            .collect();
        FpMatrix::from_columns(f, n, &cols)
    }

    #[test]
    fn derivations_of_truncated_polynomials_form_witt() {
        let a = catalog::truncated_polynomials(5).unwrap();
        let f = a.field();
        let der = derivation_algebra(&a).unwrap();
        assert_eq!(der.lie().dim(), 5);
        let witt = catalog::witt(5).unwrap();
        // e_i -> (x - 1)^(i+1) d/dx
        let mut u = a.basis_vector(1);
        f.sub_assign(&mut u, &a.unit_vector());
        let cols: Vec<FpVector> = (0..5)
            .map(|i| {
                let d = derivation_from_image(&a, &a.power(&u, i));
                assert!(a.is_derivation(&d));
                der.coords(&d).unwrap()
            })
            .collect();
        let t = FpMatrix::from_columns(f, 5, &cols);
        assert!(is_restricted_isomorphism(&witt, der.lie(), &t));
    }

    #[test]
    fn derivation_structure_is_lie_rinehart() {
        for a in [
            catalog::truncated_polynomials(5).unwrap(),
            catalog::truncated_polynomials(3).unwrap(),
        ] {
            let (_, s) = derivation_structure(&a).unwrap();
            let r = verify_lie_rinehart(&s, &sweep());
            assert!(r.passed(), "{:?}", r.first_failure());
        }
        let (_, s) = derivation_structure(&catalog::truncated_polynomials(3).unwrap()).unwrap();
        assert!(verify_lie_rinehart(&s, &sweep())
            .checks
            .iter()
            .all(|c| c.exhaustive));
    }

    #[test]
    fn null_anchor_with_scalar_action_passes() {
        let lies = |p: u32| {
            let mut v = vec![
                catalog::heisenberg(p, [0, 0, 0]).unwrap(),
                catalog::heisenberg(p, [0, 0, 1]).unwrap(),
            ];
            if p > 2 {
                v.push(catalog::sl2(p).unwrap());
            }
            v
        };
        for a in small_algebras() {
            for lie in lies(a.field().p()) {
                for eps in a.augmentations() {
                    let action = scalar_action(&a, &eps, lie.dim()).unwrap();
                    let s =
                        LieRinehartStructure::null_anchor(a.clone(), lie.clone(), action).unwrap();
                    assert!(verify_lie_rinehart(&s, &sweep()).passed());
                }
            }
        }
    }

    #[test]
    fn anchor_breaking_the_pmap_is_caught() {
        // L = F e with e^[p] = 0, rho(e)(e_2) = e_2 over the dual numbers
        let a = catalog::dual_numbers(5).unwrap();
        let f = a.field();
        let lie = catalog::abelian(5, vec![vec![0]]).unwrap();
        let action = scalar_action(&a, &[1, 0], 1).unwrap();
        let mut d = FpMatrix::zeros(f, 2, 2);
        d.set(1, 1, 1);
        let s = LieRinehartStructure::new(a, lie, action, vec![d]).unwrap();
        let r = verify_lie_rinehart(&s, &sweep());
        let bad: Vec<Axiom> = r
            .checks
            .iter()
            .filter(|c| !c.holds())
            .map(|c| c.axiom)
            .collect();
        assert_eq!(bad, vec![Axiom::AnchorRestricted]);
        assert_eq!(
            r.check(Axiom::AnchorRestricted).unwrap().witness,
            Some(vec![vec![1]])
        );
    }

    #[test]
    fn leibniz_failure_has_a_witness() {
        let (_, s) = derivation_structure(&catalog::truncated_polynomials(3).unwrap()).unwrap();
        let mut anchor = s.anchor().to_vec();
        anchor[0] = anchor[0].scale(2);
        let s = LieRinehartStructure::new(
            s.algebra().clone(),
            s.lie().clone(),
            s.action().to_vec(),
            anchor,
        )
        .unwrap();
        let r = verify_lie_rinehart(&s, &sweep());
        let c = r.check(Axiom::Leibniz).unwrap();
        assert_eq!(c.witness.as_ref().map(Vec::len), Some(3));
    }

    #[test]
    fn heisenberg_structures_over_dual_numbers() {
        for gamma in 0..5 {
            let s = catalog::heisenberg_rinehart(5, gamma).unwrap();
            let md = structure_to_multiderivation(&s);
            let back =
                multiderivation_to_structure(s.algebra(), s.action(), &md, &sweep()).unwrap();
            assert_eq!(back, s);
            let r = verify_lie_rinehart(&s, &sweep());
            // rho([x, y]) = rho(z) while [rho(x), rho(y)] = 0
            assert_eq!(r.holds(Axiom::AnchorLieMorphism), gamma == 0);
            assert_eq!(
                r.checks.iter().filter(|c| !c.holds()).count(),
                usize::from(gamma != 0)
            );
        }
    }

    #[test]
    fn round_trips() {
        let a = catalog::dual_numbers(3).unwrap();
        let lie = catalog::heisenberg(3, [1, 0, 0]).unwrap();
        let action = scalar_action(&a, &[1, 0], 3).unwrap();
        let null = LieRinehartStructure::null_anchor(a, lie, action).unwrap();
        let (_, der) = derivation_structure(&catalog::truncated_polynomials(3).unwrap()).unwrap();
        for s in [null, der] {
            let md = structure_to_multiderivation(&s);
            let back =
                multiderivation_to_structure(s.algebra(), s.action(), &md, &sweep()).unwrap();
            assert_eq!(back, s);
            assert_eq!(structure_to_multiderivation(&back), md);
            assert!(verify_lie_rinehart(&back, &sweep()).passed());
        }
    }

    #[test]
    fn multiderivation_rejections() {
        let a = catalog::dual_numbers(5).unwrap();
        let f = a.field();
        let action = scalar_action(&a, &[1, 0], 3).unwrap();
        let zero = vec![FpMatrix::zeros(f, 2, 2); 3];
        let mut m = CeCochain::zero(f, 3, 3, 2);
        m.set(&[0, 1], &f.unit_vec(3, 1));
        m.set(&[0, 2], &f.unit_vec(3, 2));
        m.set(&[1, 2], &f.unit_vec(3, 0));
        let md = RestrictedMultiderivation::new(m, vec![vec![0; 3]; 3], zero.clone()).unwrap();
        match multiderivation_to_structure(&a, &action, &md, &sweep()) {
            Err(Error::NotMultiderivation { axiom, .. }) => {
                assert_eq!(axiom, Axiom::Jacobi.to_string())
            }
            other => panic!("{other:?}"),
        }
        // Heisenberg bracket with x^[p] = x violates the p-fold identity
        let mut m = CeCochain::zero(f, 3, 3, 2);
        m.set(&[0, 1], &f.unit_vec(3, 2));
        let md =
            RestrictedMultiderivation::new(m, vec![f.unit_vec(3, 0), vec![0; 3], vec![0; 3]], zero)
                .unwrap();
        let r = verify_multiderivation(&a, &action, &md, &sweep()).unwrap();
        assert_eq!(r.first_failure().unwrap().axiom, Axiom::PFold);
        assert!(multiderivation_to_structure(&a, &action, &md, &sweep()).is_err());
    }

    #[test]
    fn char2_anchor_search_keeps_only_zero() {
        let s = catalog::char2_rinehart().unwrap();
        let search = anchor_search(s.algebra(), s.lie(), s.action(), &sweep()).unwrap();
        assert_eq!(search.candidates, 64);
        assert_eq!(search.survivors, vec![s.anchor().to_vec()]);
        assert!(s.anchor().iter().all(FpMatrix::is_zero));
    }

    #[test]
    fn anchor_search_survivors_are_sound() {
        let a = catalog::dual_numbers(3).unwrap();
        for theta in [[0, 0, 0], [0, 0, 1], [1, 0, 0]] {
            let lie = catalog::heisenberg(3, theta).unwrap();
            let action = scalar_action(&a, &[1, 0], 3).unwrap();
            let search = anchor_search(&a, &lie, &action, &sweep()).unwrap();
            assert_eq!(search.candidates, 27);
            assert!(!search.survivors.is_empty());
            for anchor in search.survivors {
                let s = LieRinehartStructure::new(a.clone(), lie.clone(), action.clone(), anchor)
                    .unwrap();
                let md = structure_to_multiderivation(&s);
                let back = multiderivation_to_structure(&a, &action, &md, &sweep()).unwrap();
                assert!(verify_lie_rinehart(&back, &sweep()).passed());
            }
        }
    }

    #[test]
    fn heisenberg_deformation_is_full_iff_gamma_is_zero() {
        let d = catalog::heisenberg_deformation(5).unwrap();
        for gamma in 0..5 {
            let s = catalog::heisenberg_rinehart(5, gamma).unwrap();
            let r = verify_lr_deformation(&s, &d, &[], &sweep()).unwrap();
            assert!(r.lie.passed() && r.symbol.is_none() && r.exhaustive);
            assert!(r.anchor_power.is_none());
            if gamma == 0 {
                assert_eq!(r.class, LrDeformationClass::Full);
            } else {
                assert_eq!(r.class, LrDeformationClass::Weak);
                assert_eq!(r.anchor_pmap.as_ref().map(|w| w.0), Some(1));
            }
        }
    }

    #[test]
    fn zero_deformations_are_full() {
        for s in [
            catalog::heisenberg_rinehart(5, 2).unwrap(),
            catalog::char2_rinehart().unwrap(),
        ] {
            let d = TruncatedDeformation::trivial(s.lie().clone(), 2).unwrap();
            let r = verify_lr_deformation(&s, &d, &[], &sweep()).unwrap();
            assert_eq!(r.class, LrDeformationClass::Full);
        }
    }

    #[test]
    fn char2_deformation_with_symbol() {
        let s = catalog::char2_rinehart().unwrap();
        let d = catalog::heisenberg_deformation(2).unwrap();
        let sigma = catalog::char2_symbol().unwrap();
        let r = verify_lr_deformation(&s, &d, std::slice::from_ref(&sigma), &sweep()).unwrap();
        assert_eq!(r.class, LrDeformationClass::Full);
        // symbols must take values in the annihilator of e_1 + e_2
        let mut bad = sigma;
        bad[0] = FpMatrix::new(s.algebra().field(), 2, 2, vec![0, 0, 0, 1]).unwrap();
        let r = verify_lr_deformation(&s, &d, &[bad], &sweep()).unwrap();
        assert_eq!(r.class, LrDeformationClass::Invalid);
        assert_eq!(r.symbol.as_ref().map(|(k, _)| *k), Some(1));
    }

    #[test]
    fn deformation_must_match_the_structure() {
        let s = catalog::heisenberg_rinehart(5, 0).unwrap();
        let d =
            TruncatedDeformation::trivial(catalog::heisenberg(5, [0, 0, 0]).unwrap(), 1).unwrap();
        assert!(verify_lr_deformation(&s, &d, &[], &sweep()).is_err());
        let d = catalog::heisenberg_deformation(5).unwrap();
        let two = vec![s.anchor().to_vec(), s.anchor().to_vec()];
        assert!(verify_lr_deformation(&s, &d, &two, &sweep()).is_err());
    }

    #[test]
    fn hochschild_at_the_unit() {
        let (_, s) = derivation_structure(&catalog::truncated_polynomials(3).unwrap()).unwrap();
        let a = s.algebra();
        let p = a.field().order();
        for x in a.field().all_vectors(s.lie().dim()) {
            let one = a.unit_vector();
            let coeff = s.anchor_of(&s.act(&one, &x)).pow(p - 1).mul_vec(&one);
            assert!(coeff.iter().all(|&c| c == 0));
            assert_eq!(
                s.act(&a.power(&one, p), &s.lie().pmap(&x)),
                s.lie().pmap(&x)
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn pth_power_of_a_derivation_is_a_derivation(idx in 0usize..8, seed in any::<u64>()) {
            let a = &small_algebras()[idx];
            let ders = a.derivations();
            let mut rng = crate::sweep::RandomSource::new(seed);
            let f = a.field();
            let mut d = FpMatrix::zeros(f, a.dim(), a.dim());
            for m in &ders {
                d = d.add(&m.scale(rng.element(f)));
            }
            prop_assert!(a.is_derivation(&d));
            prop_assert!(a.is_derivation(&d.pow(f.order())));
        }
    }
}
