//! The restricted complex in characteristic 2.
//!
//! A cochain of degree `n >= 2` is a pair `(phi, omega)` with `phi` an
//! alternating `n`-form and `omega` a map of `n - 1` arguments
//! `omega(x, z_2, .., z_(n-1))`: quadratic in `x` with polarisation `phi`,
//!
//! ```text
//! omega(x + y, z..) = omega(x, z..) + omega(y, z..) + phi(x, y, z..)
//! ```
//!
//! and linear in every `z`. `omega` is stored on basis tuples: the first index
//! is the quadratic slot, the other `n - 2` indices range over all tuples
//! (no symmetry is imposed on them).
//!
//! In degrees 0 and 1 cochains are ordinary CE cochains and `omega` is empty.

use crate::algebra::{
    verify_restricted, JacobsonReport, LieAlgebra, RestrictedLieAlgebra, RestrictedModule,
};
use crate::cohomology_ce::{binomial, ce_diff, ce_matrix, CeCochain, CohomologySpace};
use crate::error::{Error, Result};
use crate::gf::{FpMatrix, FpVector};
use crate::sweep::Sweep;

/// Largest degree for which [`h_n_star2`] is offered.
pub const MAX_CHAR2_DEGREE: usize = 4;

fn require_char2(p: u32) -> Result<()> {
    if p != 2 {
        return Err(Error::Characteristic {
            p,
            reason: "this complex exists only in characteristic 2",
        });
    }
    Ok(())
}

/// A cochain `(phi, omega)` of the characteristic 2 complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Char2Cochain {
    pub phi: CeCochain,
    /// `omega[((i * n^(k)) + r) * m ..]` for quadratic index `i` and the
    /// `r`-th `k`-tuple in base-`n` order, `k = degree - 2`.
    omega: Vec<u32>,
}

fn omega_len(n: usize, m: usize, degree: usize) -> usize {
    if degree < 2 {
        0
    } else {
        n.pow(degree as u32 - 1) * m
    }
}

/// Coordinate length of `C^n_{*2}(L, M)`.
pub fn char2_len(module: &RestrictedModule, degree: usize) -> usize {
    let n = module.algebra().dim();
    binomial(n, degree) * module.dim() + omega_len(n, module.dim(), degree)
}

impl Char2Cochain {
    pub fn zero(module: &RestrictedModule, degree: usize) -> Self {
        let n = module.algebra().dim();
        Char2Cochain {
            phi: CeCochain::for_module(module, degree),
            omega: vec![0; omega_len(n, module.dim(), degree)],
        }
    }

    /// Coordinates: `phi` on increasing tuples, then `omega` on basis tuples.
    pub fn from_coords(module: &RestrictedModule, degree: usize, coords: &[u32]) -> Result<Self> {
        let f = module.algebra().field();
        let n = module.algebra().dim();
        let m = module.dim();
        let split = binomial(n, degree) * m;
        let total = split + omega_len(n, m, degree);
        if coords.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: coords.len(),
            });
        }
        Ok(Char2Cochain {
            phi: CeCochain::from_coords(f, n, m, degree, coords[..split].to_vec())?,
            omega: coords[split..].iter().map(|&a| a % 2).collect(),
        })
    }

    /// The degree-1 cochain `psi`, or a degree-0 vector.
    pub fn from_ce(phi: CeCochain) -> Result<Self> {
        if phi.degree() >= 2 {
            return Err(Error::InvalidInput(
                "a CE cochain of degree >= 2 needs omega".into(),
            ));
        }
        Ok(Char2Cochain {
            phi,
            omega: Vec::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.phi.degree()
    }

    pub fn coords(&self) -> FpVector {
        let mut out = self.phi.coords().to_vec();
        out.extend_from_slice(&self.omega);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero() && self.omega.iter().all(|&a| a == 0)
    }

    fn index(&self, x: usize, zs: &[usize]) -> usize {
        let n = self.phi.algebra_dim();
        zs.iter().fold(x, |acc, &z| acc * n + z)
    }

    /// `omega(e_x, e_zs..)`.
    pub fn omega_on_basis(&self, x: usize, zs: &[usize]) -> FpVector {
        assert_eq!(
            zs.len() + 2,
            self.degree(),
            "omega takes degree - 1 arguments"
        );
        let m = self.phi.module_dim();
        let r = self.index(x, zs);
        self.omega[r * m..(r + 1) * m].to_vec()
    }

    pub fn set_omega(&mut self, x: usize, zs: &[usize], v: &[u32]) {
        assert_eq!(
            zs.len() + 2,
            self.degree(),
            "omega takes degree - 1 arguments"
        );
        let m = self.phi.module_dim();
        let r = self.index(x, zs);
        self.omega[r * m..(r + 1) * m].copy_from_slice(v);
    }

    /// `omega(e_x, z..)`, linear in the vectors `zs`.
    fn omega_linear(
        &self,
        x: usize,
        zs: &[&[u32]],
        fixed: &mut Vec<usize>,
        coeff: u32,
        out: &mut FpVector,
    ) {
        let f = self.phi.field();
        if fixed.len() == zs.len() {
            if coeff != 0 {
                f.axpy(out, coeff, &self.omega_on_basis(x, fixed));
            }
            return;
        }
        let k = fixed.len();
        for (i, &a) in zs[k].iter().enumerate() {
            if a == 0 {
                continue;
            }
            fixed.push(i);
            self.omega_linear(x, zs, fixed, f.mul(coeff, a), out);
            fixed.pop();
        }
    }

    /// `omega(x, z..)` on vectors: `sum a_i^2 omega(e_i, z..) + sum_(i<j) a_i a_j phi(e_i, e_j, z..)`.
    pub fn omega_eval(&self, x: &[u32], zs: &[&[u32]]) -> FpVector {
        let f = self.phi.field();
        let n = self.phi.algebra_dim();
        let m = self.phi.module_dim();
        let mut out = vec![0; m];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            self.omega_linear(
                i,
                zs,
                &mut Vec::with_capacity(zs.len()),
                f.mul(a, a),
                &mut out,
            );
            for (j, &b) in x.iter().enumerate().skip(i + 1) {
                if b == 0 {
                    continue;
                }
                let (ei, ej) = (f.unit_vec(n, i), f.unit_vec(n, j));
                let mut args: Vec<&[u32]> = vec![&ei, &ej];
                args.extend_from_slice(zs);
                f.axpy(&mut out, f.mul(a, b), &self.phi.eval(&args));
            }
        }
        out
    }

    pub fn add(&self, other: &Char2Cochain) -> Char2Cochain {
        let f = self.phi.field();
        Char2Cochain {
            phi: self.phi.add(&other.phi),
            omega: f.add_vec(&self.omega, &other.omega),
        }
    }
}

fn without(zs: &[&[u32]], skip: &[usize]) -> Vec<Vec<u32>> {
    zs.iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, z)| z.to_vec())
        .collect()
}

fn refs(v: &[Vec<u32>]) -> Vec<&[u32]> {
    v.iter().map(|z| z.as_slice()).collect()
}

/// `delta^n omega(x, z_2, .., z_n)` on vectors, for a cochain of degree `n >= 2`:
///
/// ```text
/// x . phi(x, z..) + sum_i z_i . omega(x, ..^z_i..) + phi(x^[2], z..)
///   + sum_i phi([x, z_i], x, ..^z_i..) + sum_(2<=i<j) omega(x, [z_i, z_j], ..^z_i..^z_j..)
/// ```
pub fn delta_eval(
    module: &RestrictedModule,
    c: &Char2Cochain,
    x: &[u32],
    zs: &[&[u32]],
) -> FpVector {
    let alg = module.algebra();
    let f = alg.field();
    assert!(c.degree() >= 2, "delta is defined from degree 2");
    assert_eq!(zs.len() + 1, c.degree(), "delta^n omega takes n arguments");
    let mut args: Vec<&[u32]> = vec![x];
    args.extend_from_slice(zs);
    let mut out = module.act(x, &c.phi.eval(&args));
    let x2 = alg.pmap(x);
    args[0] = &x2;
    f.add_assign(&mut out, &c.phi.eval(&args));
    for i in 0..zs.len() {
        let rest = without(zs, &[i]);
        let rest = refs(&rest);
        f.add_assign(&mut out, &module.act(zs[i], &c.omega_eval(x, &rest)));
        let xz = alg.bracket(x, zs[i]);
        let mut a: Vec<&[u32]> = vec![&xz, x];
        a.extend_from_slice(&rest);
        f.add_assign(&mut out, &c.phi.eval(&a));
        for j in i + 1..zs.len() {
            let br = alg.bracket(zs[i], zs[j]);
            let rest = without(zs, &[i, j]);
            let mut a: Vec<&[u32]> = vec![&br];
            a.extend(rest.iter().map(|z| z.as_slice()));
            f.add_assign(&mut out, &c.omega_eval(x, &a));
        }
    }
    out
}

/// All `k`-tuples of `0..n` in base-`n` order.
fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// `d^1_{*2}(psi) = (d_CE psi, x -> psi(x^[2]) + x . psi(x))`.
pub fn d1_star2(module: &RestrictedModule, psi: &CeCochain) -> Result<Char2Cochain> {
    let alg = module.algebra();
    require_char2(alg.p())?;
    if psi.degree() != 1 {
        return Err(Error::InvalidInput("d1_star2 takes a 1-cochain".into()));
    }
    let f = alg.field();
    let mut out = Char2Cochain {
        phi: ce_diff(module, psi),
        omega: Vec::new(),
    };
    for i in 0..alg.dim() {
        let e = f.unit_vec(alg.dim(), i);
        let v = f.add_vec(
            &psi.eval(&[&alg.pmap(&e)]),
            &module.act(&e, &psi.eval(&[&e])),
        );
        out.omega.extend_from_slice(&v);
    }
    Ok(out)
}

/// `d^n_{*2}` for any `n`: `d_CE` in degree 0, [`d1_star2`] in degree 1 and
/// `(d_CE phi, delta^n omega)` from degree 2.
pub fn d_star2(module: &RestrictedModule, c: &Char2Cochain) -> Result<Char2Cochain> {
    require_char2(module.algebra().p())?;
    match c.degree() {
        0 => Char2Cochain::from_ce(ce_diff(module, &c.phi)),
        1 => d1_star2(module, &c.phi),
        k => {
            let f = module.algebra().field();
            let n = module.algebra().dim();
            let mut out = Char2Cochain {
                phi: ce_diff(module, &c.phi),
                omega: Vec::with_capacity(omega_len(n, module.dim(), k + 1)),
            };
            let basis: Vec<FpVector> = (0..n).map(|i| f.unit_vec(n, i)).collect();
            for x in 0..n {
                for t in all_tuples(n, k - 1) {
                    let zs: Vec<&[u32]> = t.iter().map(|&i| basis[i].as_slice()).collect();
                    out.omega.extend(delta_eval(module, c, &basis[x], &zs));
                }
            }
            Ok(out)
        }
    }
}

/// Matrix of `d^n_{*2}` on coordinates.
pub fn d_star2_matrix(module: &RestrictedModule, degree: usize) -> Result<FpMatrix> {
    require_char2(module.algebra().p())?;
    if degree == 0 {
        return ce_matrix(module, 0);
    }
    let f = module.algebra().field();
    let len = char2_len(module, degree);
    let mut cols = Vec::with_capacity(len);
    for c in 0..len {
        let chain = Char2Cochain::from_coords(module, degree, &f.unit_vec(len, c))?;
        cols.push(d_star2(module, &chain)?.coords());
    }
    Ok(FpMatrix::from_columns(
        f,
        char2_len(module, degree + 1),
        &cols,
    ))
}

/// First argument tuple `(x, z_2, ..)` where a check failed.
pub type TupleWitness = Vec<FpVector>;

/// All-vector check that `c` is a cocycle: `d_CE phi = 0` and the `omega`
/// part of the differential vanishes on every argument tuple of the sweep.
pub fn char2_cocycle_oracle(
    module: &RestrictedModule,
    c: &Char2Cochain,
    sweep: &Sweep,
) -> Result<Option<TupleWitness>> {
    let alg = module.algebra();
    require_char2(alg.p())?;
    let f = alg.field();
    let n = alg.dim();
    let k = c.degree();
    if k >= 1 && !ce_diff(module, &c.phi).is_zero() {
        return Ok(Some(Vec::new()));
    }
    match k {
        0 => Ok(None),
        1 => {
            for x in sweep.vectors(f, n) {
                let v = f.add_vec(
                    &c.phi.eval(&[&alg.pmap(&x)]),
                    &module.act(&x, &c.phi.eval(&[&x])),
                );
                if v.iter().any(|&a| a != 0) {
                    return Ok(Some(vec![x]));
                }
            }
            Ok(None)
        }
        _ => {
            for t in sweep.tuples(f, &vec![n; k]) {
                let zs: Vec<&[u32]> = t[1..].iter().map(|v| v.as_slice()).collect();
                if delta_eval(module, c, &t[0], &zs).iter().any(|&a| a != 0) {
                    return Ok(Some(t));
                }
            }
            Ok(None)
        }
    }
}

/// First argument tuple violating the cochain laws of `omega` (2-homogeneity,
/// polarisation by `phi`, linearity in the `z` slots).
pub fn check_cochain_laws(c: &Char2Cochain, sweep: &Sweep) -> Option<TupleWitness> {
    let k = c.degree();
    if k < 2 {
        return None;
    }
    let f = c.phi.field();
    let n = c.phi.algebra_dim();
    for t in sweep.tuples(f, &vec![n; k]) {
        let (x, y) = (&t[0], &t[1]);
        let zs: Vec<&[u32]> = t[2..].iter().map(|v| v.as_slice()).collect();
        let mut args: Vec<&[u32]> = vec![x, y];
        args.extend_from_slice(&zs);
        let mut expected = f.add_vec(&c.omega_eval(x, &zs), &c.omega_eval(y, &zs));
        f.add_assign(&mut expected, &c.phi.eval(&args));
        let mut ok = c.omega_eval(&f.add_vec(x, y), &zs) == expected;
        ok &= c.omega_eval(&vec![0; n], &zs).iter().all(|&a| a == 0);
        if let Some(z0) = zs.first() {
            // additivity in the first z slot, with y as the second summand
            let mut zy: Vec<&[u32]> = zs.clone();
            let sum = f.add_vec(z0, y);
            zy[0] = &sum;
            let mut only_y = zs.clone();
            only_y[0] = y;
            ok &=
                c.omega_eval(x, &zy) == f.add_vec(&c.omega_eval(x, &zs), &c.omega_eval(x, &only_y));
        }
        if !ok {
            return Some(t);
        }
    }
    None
}

/// `H^n_{*2}(L, M)` together with the outcome of the all-vector oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Char2Cohomology {
    pub space: CohomologySpace,
    pub oracle_exhaustive: bool,
}

impl Char2Cohomology {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn cocycles(&self, module: &RestrictedModule) -> Vec<Char2Cochain> {
        let deg = self.space.degree;
        self.space
            .cocycles
            .iter()
            .map(|v| Char2Cochain::from_coords(module, deg, v).expect("cocycle coordinates"))
            .collect()
    }
}

/// `H^n_{*2}(L, M)` for `n <= 4`. Each cocycle basis vector is re-checked on
/// all argument tuples (or a sample); a disagreement is an
/// [`Error::OracleMismatch`].
pub fn h_n_star2(
    module: &RestrictedModule,
    degree: usize,
    sweep: &Sweep,
) -> Result<Char2Cohomology> {
    require_char2(module.algebra().p())?;
    if degree > MAX_CHAR2_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree,
            cap: MAX_CHAR2_DEGREE,
        });
    }
    let d_out = d_star2_matrix(module, degree)?;
    let d_in = if degree == 0 {
        None
    } else {
        Some(d_star2_matrix(module, degree - 1)?)
    };
    let space = CohomologySpace::from_differentials(degree, &d_out, d_in.as_ref());
    for v in &space.cocycles {
        let c = Char2Cochain::from_coords(module, degree, v)?;
        if let Some(w) = char2_cocycle_oracle(module, &c, sweep)? {
            return Err(Error::OracleMismatch(format!(
                "basis cocycle {v:?} fails at {w:?}"
            )));
        }
    }
    let f = module.algebra().field();
    let n = module.algebra().dim();
    Ok(Char2Cohomology {
        space,
        oracle_exhaustive: sweep.is_exhaustive(f, &vec![n; degree.max(1)]),
    })
}

/// A truncated series `sum_(k <= N) t^k x_k` with coefficients in `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Char2PowerSeriesElement {
    coefficients: Vec<FpVector>,
}

impl Char2PowerSeriesElement {
    /// `coefficients[k]` multiplies `t^k`; the truncation order is `len - 1`.
    pub fn new(coefficients: Vec<FpVector>) -> Result<Self> {
        let Some(first) = coefficients.first() else {
            return Err(Error::InvalidInput(
                "a series needs at least the constant term".into(),
            ));
        };
        let d = first.len();
        if let Some(bad) = coefficients.iter().find(|c| c.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Ok(Char2PowerSeriesElement { coefficients })
    }

    pub fn constant(x: FpVector, order: usize) -> Self {
        let d = x.len();
        let mut coefficients = vec![vec![0; d]; order + 1];
        coefficients[0] = x;
        Char2PowerSeriesElement { coefficients }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[FpVector] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> &[u32] {
        &self.coefficients[k]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x + y) % 2).collect())
            .collect();
        Char2PowerSeriesElement { coefficients }
    }

    /// `sum_(i + j <= N) t^(i+j) [x_i, y_j]`.
    pub fn bracket(&self, lie: &LieAlgebra, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        let f = lie.field();
        let n = self.order();
        let mut coefficients = vec![vec![0; lie.dim()]; n + 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate().take(n + 1 - i) {
                f.add_assign(&mut coefficients[i + j], &lie.bracket(a, b));
            }
        }
        Char2PowerSeriesElement { coefficients }
    }
}

/// The 2-map of `L[[t]]`:
/// `(sum t^i x_i)^[2] = sum t^(2i) x_i^[2] + sum_(i<j) t^(i+j) [x_i, x_j]`,
/// truncated at the order of the input.
pub fn two_map_extend(
    alg: &RestrictedLieAlgebra,
    s: &Char2PowerSeriesElement,
) -> Result<Char2PowerSeriesElement> {
    require_char2(alg.p())?;
    let f = alg.field();
    let n = s.order();
    let mut coefficients = vec![vec![0; alg.dim()]; n + 1];
    for (i, a) in s.coefficients.iter().enumerate() {
        if 2 * i <= n {
            f.add_assign(&mut coefficients[2 * i], &alg.pmap(a));
        }
        for (j, b) in s.coefficients.iter().enumerate().skip(i + 1) {
            if i + j <= n {
                f.add_assign(&mut coefficients[i + j], &alg.bracket(a, b));
            }
        }
    }
    Ok(Char2PowerSeriesElement { coefficients })
}

/// The candidate algebra `L + F c` built from a scalar pair `(phi, omega)`,
/// with the checks that decide whether it is restricted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralExtensionReport {
    /// `phi` is a CE 2-cocycle, i.e. the bracket satisfies Jacobi.
    pub jacobi: bool,
    /// Jacobson's criterion for the proposed 2-map on the extension; absent
    /// when Jacobi already fails.
    pub jacobson: Option<JacobsonReport>,
    /// The extension, when both checks pass. `c` is the last basis vector.
    pub algebra: Option<RestrictedLieAlgebra>,
}

impl CentralExtensionReport {
    pub fn passed(&self) -> bool {
        self.algebra.is_some()
    }
}

/// Build `g = L + F c` with `[x + uc, y + vc] = [x, y] + phi(x, y) c` and
/// `(x + uc)^[2] = x^[2] + omega(x) c`, `c^[2] = 0`. `phi` is a scalar
/// 2-cochain and `omega` its values on the basis of `L`.
pub fn central_extension(
    alg: &RestrictedLieAlgebra,
    phi: &CeCochain,
    omega: &[u32],
) -> Result<CentralExtensionReport> {
    require_char2(alg.p())?;
    let n = alg.dim();
    if phi.degree() != 2 || phi.module_dim() != 1 || phi.algebra_dim() != n {
        return Err(Error::InvalidInput(
            "phi must be a scalar 2-cochain on L".into(),
        ));
    }
    if omega.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: omega.len(),
        });
    }
    let f = alg.field();
    let d = n + 1;
    let lie = alg.lie();
    let mut c = vec![0u32; d * d * d];
    for i in 0..n {
        for j in 0..n {
            let at = (i * d + j) * d;
            c[at..at + n].copy_from_slice(lie.basis_bracket(i, j));
            c[at + n] = phi.on_basis(&[i, j])[0];
        }
    }
    let mut names = lie.names().to_vec();
    names.push("c".into());
    let ext = match LieAlgebra::from_structure_constants(f, names, c) {
        Ok(l) => l,
        Err(Error::JacobiFails { .. }) => {
            return Ok(CentralExtensionReport {
                jacobi: false,
                jacobson: None,
                algebra: None,
            })
        }
        Err(e) => return Err(e),
    };
    let mut images: Vec<FpVector> = alg
        .pmap_images()
        .iter()
        .zip(omega)
        .map(|(v, &w)| {
            let mut v = v.clone();
            v.push(w % 2);
            v
        })
        .collect();
    images.push(vec![0; d]);
    let report = verify_restricted(&ext, &images);
    let algebra = if report.passed() {
        Some(RestrictedLieAlgebra::new(ext, images)?)
    } else {
        None
    };
    Ok(CentralExtensionReport {
        jacobi: true,
        jacobson: Some(report),
        algebra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::cohomology_ce::ce_cohomology_dim;
    use crate::gf::{span_rank, PrimeField};
    use crate::sweep::RandomSource;

    fn heis(theta: [u32; 3]) -> RestrictedModule {
        RestrictedModule::adjoint(&catalog::heisenberg(2, theta).unwrap())
    }

    fn random_cochain(
        md: &RestrictedModule,
        degree: usize,
        rng: &mut RandomSource,
    ) -> Char2Cochain {
        let f = md.algebra().field();
        Char2Cochain::from_coords(md, degree, &rng.vector(f, char2_len(md, degree))).unwrap()
    }

    #[test]
    fn delta_two_closed_form() {
        let mut rng = RandomSource::new(1);
        for theta in [[0, 0, 0], [0, 0, 1], [1, 1, 0]] {
            let md = heis(theta);
            let alg = md.algebra();
            let f = alg.field();
            for _ in 0..20 {
                let c = random_cochain(&md, 2, &mut rng);
                let (x, z) = (rng.vector(f, 3), rng.vector(f, 3));
                let mut expected = md.act(&x, &c.phi.eval(&[&x, &z]));
                f.add_assign(&mut expected, &md.act(&z, &c.omega_eval(&x, &[])));
                f.add_assign(&mut expected, &c.phi.eval(&[&alg.pmap(&x), &z]));
                f.add_assign(&mut expected, &c.phi.eval(&[&alg.bracket(&x, &z), &x]));
                assert_eq!(delta_eval(&md, &c, &x, &[&z]), expected);
            }
        }
    }

    #[test]
    fn differentials_square_to_zero() {
        let algebras = [
            catalog::heisenberg(2, [0, 0, 0]).unwrap(),
            catalog::heisenberg(2, [0, 0, 1]).unwrap(),
            catalog::heisenberg(2, [1, 1, 0]).unwrap(),
            catalog::abelian(2, vec![vec![0, 1], vec![0, 0]]).unwrap(),
        ];
        for alg in algebras {
            for md in [
                RestrictedModule::adjoint(&alg),
                RestrictedModule::trivial(&alg, 1),
            ] {
                for n in 0..4 {
                    let d0 = d_star2_matrix(&md, n).unwrap();
                    let d1 = d_star2_matrix(&md, n + 1).unwrap();
                    assert!(d1.mul(&d0).is_zero(), "degree {n}");
                }
            }
        }
    }

    #[test]
    fn delta_is_a_cochain() {
        // delta^n omega polarises to d_CE phi
        let mut rng = RandomSource::new(9);
        let md = heis([0, 0, 1]);
        let sweep = Sweep::default().with_max_points(300);
        for n in 2..5 {
            for _ in 0..3 {
                let c = random_cochain(&md, n, &mut rng);
                assert_eq!(check_cochain_laws(&c, &sweep), None);
                let d = d_star2(&md, &c).unwrap();
                assert_eq!(check_cochain_laws(&d, &sweep), None, "degree {n}");
                for t in sweep.tuples(md.algebra().field(), &vec![3; n]) {
                    let zs: Vec<&[u32]> = t[1..].iter().map(|v| v.as_slice()).collect();
                    assert_eq!(delta_eval(&md, &c, &t[0], &zs), d.omega_eval(&t[0], &zs));
                }
            }
        }
    }

    #[test]
    fn d1_examples() {
        let md = heis([0, 0, 1]);
        let f = md.algebra().field();
        let zero = CeCochain::for_module(&md, 1);
        assert!(d1_star2(&md, &zero).unwrap().is_zero());
        let proj = CeCochain::from_fn(f, 3, 3, 1, |t| {
            if t[0] == 2 {
                vec![0, 0, 1]
            } else {
                vec![0, 0, 0]
            }
        });
        let d = d1_star2(&md, &proj).unwrap();
        assert_eq!(d.omega_on_basis(0, &[]), vec![0, 0, 0]);
        assert_eq!(d.omega_on_basis(2, &[]), vec![0, 0, 1]);
    }

    fn coords(phi: [[u32; 3]; 3], omega: [[u32; 3]; 3]) -> FpVector {
        phi.iter().chain(omega.iter()).flatten().copied().collect()
    }

    #[test]
    fn heisenberg_second_cohomology() {
        let sweep = Sweep::default();
        let (x, y, z, o) = ([1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]);
        let f = PrimeField::new(2).unwrap();
        for (theta, dim) in [([0, 0, 0], 3), ([0, 0, 1], 2)] {
            let md = heis(theta);
            let h = h_n_star2(&md, 2, &sweep).unwrap();
            assert_eq!(h.dim(), dim);
            assert!(h.oracle_exhaustive);
            let star = theta[2] == 1;
            // a, b, c, f, i, gamma, epsilon, kappa
            let cocycles = vec![
                coords([x, o, o], [o, y, o]),
                coords([y, o, o], [x, o, o]),
                coords([z, o, o], [o; 3]),
                coords([o, z, o], [x, o, if star { y } else { o }]),
                coords([o, o, z], [o, y, if star { x } else { o }]),
                coords([o; 3], [z, o, o]),
                coords([o; 3], [o, z, o]),
                coords([o; 3], [o, o, z]),
            ];
            let len = char2_len(&md, 2);
            assert_eq!(span_rank(f, len, &cocycles), h.space.cocycles.len());
            let mut joint = cocycles.clone();
            joint.extend(h.space.cocycles.iter().cloned());
            assert_eq!(span_rank(f, len, &joint), h.space.cocycles.len());
            // A = G, B = H, C, D, E (+ I)
            let mut cob = vec![
                coords([x, o, z], [o, o, if star { x } else { o }]),
                coords([y, z, o], [o, o, if star { y } else { o }]),
                coords([z, o, o], [o; 3]),
                coords([o; 3], [o, z, o]),
                coords([o; 3], [z, o, o]),
            ];
            if star {
                cob.push(coords([o; 3], [o, o, z]));
            }
            assert_eq!(span_rank(f, len, &cob), h.space.coboundaries.len());
            let mut joint = cob.clone();
            joint.extend(h.space.coboundaries.iter().cloned());
            assert_eq!(span_rank(f, len, &joint), h.space.coboundaries.len());
        }
    }

    #[test]
    fn low_degrees() {
        let sweep = Sweep::default();
        for theta in [[0, 0, 0], [0, 0, 1]] {
            let md = heis(theta);
            assert_eq!(
                h_n_star2(&md, 0, &sweep).unwrap().dim(),
                ce_cohomology_dim(&md, 0).unwrap()
            );
            let h1 = h_n_star2(&md, 1, &sweep).unwrap();
            let restricted = md.algebra().restricted_derivations(&sweep);
            let inner = md.algebra().lie().inner_derivations();
            assert_eq!(h1.space.cocycles.len(), restricted.len());
            assert_eq!(h1.dim(), restricted.len() - inner.len());
            for n in 3..=4 {
                h_n_star2(&md, n, &sweep).unwrap();
            }
        }
        assert!(matches!(
            h_n_star2(&heis([0, 0, 0]), 5, &sweep),
            Err(Error::DegreeTooLarge { .. })
        ));
        let odd = RestrictedModule::adjoint(&catalog::heisenberg(3, [0, 0, 0]).unwrap());
        assert!(matches!(
            h_n_star2(&odd, 2, &sweep),
            Err(Error::Characteristic { .. })
        ));
    }

    #[test]
    fn two_map_on_series() {
        let alg = catalog::heisenberg(2, [0, 0, 1]).unwrap();
        let x = vec![1, 0, 0];
        let y = vec![0, 1, 1];
        let c = Char2PowerSeriesElement::constant(y.clone(), 3);
        assert_eq!(
            two_map_extend(&alg, &c).unwrap(),
            Char2PowerSeriesElement::constant(alg.pmap(&y), 3)
        );
        let s = Char2PowerSeriesElement::new(vec![x.clone(), y.clone(), vec![0; 3], vec![0; 3]])
            .unwrap();
        let sq = two_map_extend(&alg, &s).unwrap();
        assert_eq!(sq.coefficient(0), alg.pmap(&x).as_slice());
        assert_eq!(sq.coefficient(1), alg.bracket(&x, &y).as_slice());
        assert_eq!(sq.coefficient(2), alg.pmap(&y).as_slice());
        assert_eq!(sq.coefficient(3), &[0, 0, 0]);
    }

    #[test]
    fn two_map_regrouped() {
        let alg = catalog::heisenberg(2, [1, 0, 1]).unwrap();
        let f = alg.field();
        let mut rng = RandomSource::new(3);
        for _ in 0..20 {
            let s =
                Char2PowerSeriesElement::new((0..6).map(|_| rng.vector(f, 3)).collect()).unwrap();
            let sq = two_map_extend(&alg, &s).unwrap();
            for n in 0..6 {
                let mut expected = if n % 2 == 0 {
                    alg.pmap(s.coefficient(n / 2))
                } else {
                    vec![0; 3]
                };
                for i in 0..n {
                    let j = n - i;
                    if i < j {
                        f.add_assign(
                            &mut expected,
                            &alg.bracket(s.coefficient(i), s.coefficient(j)),
                        );
                    }
                }
                assert_eq!(sq.coefficient(n), expected.as_slice());
            }
        }
    }

    #[test]
    fn heisenberg_is_a_central_extension() {
        let ab = catalog::abelian(2, vec![vec![0, 0], vec![0, 0]]).unwrap();
        let f = ab.field();
        let phi = CeCochain::from_coords(f, 2, 1, 2, vec![1]).unwrap();
        let r = central_extension(&ab, &phi, &[0, 0]).unwrap();
        let ext = r.algebra.expect("cocycle");
        let h = catalog::heisenberg(2, [0, 0, 0]).unwrap();
        assert_eq!(
            ext.lie().structure_constants(),
            h.lie().structure_constants()
        );
        assert_eq!(ext.pmap_images(), h.pmap_images());

        let zero = CeCochain::from_coords(f, 2, 1, 2, vec![0]).unwrap();
        assert!(central_extension(&ab, &zero, &[1, 0]).unwrap().passed());
    }

    #[test]
    fn central_extension_iff_cocycle() {
        let mut rng = RandomSource::new(6);
        for theta in [[0, 0, 0], [0, 0, 1], [1, 0, 0]] {
            let alg = catalog::heisenberg(2, theta).unwrap();
            let md = RestrictedModule::trivial(&alg, 1);
            let d2 = d_star2_matrix(&md, 2).unwrap();
            let (mut seen_pass, mut seen_fail) = (false, false);
            for _ in 0..40 {
                let c = random_cochain(&md, 2, &mut rng);
                let is_cocycle = d2.mul_vec(&c.coords()).iter().all(|&a| a == 0);
                let omega: Vec<u32> = (0..3).map(|i| c.omega_on_basis(i, &[])[0]).collect();
                let r = central_extension(&alg, &c.phi, &omega).unwrap();
                assert_eq!(r.passed(), is_cocycle);
                seen_pass |= is_cocycle;
                seen_fail |= !is_cocycle;
            }
            assert!(seen_pass && seen_fail);
        }
    }

    #[test]
    fn degree_four_cocycles_need_unsymmetric_slots() {
        let md = heis([0, 0, 0]);
        let h = h_n_star2(&md, 4, &Sweep::default()).unwrap();
        let symmetric = |c: &Char2Cochain| {
            (0..3).all(|x| {
                (0..3).all(|i| {
                    (0..3).all(|j| c.omega_on_basis(x, &[i, j]) == c.omega_on_basis(x, &[j, i]))
                })
            })
        };
        let cocycles = h.cocycles(&md);
        assert!(cocycles.iter().any(|c| !symmetric(c)));
        assert!(cocycles.iter().any(symmetric));
    }
}
