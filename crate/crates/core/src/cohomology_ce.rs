//! Chevalley-Eilenberg cochains and differential.
//!
//! An `m`-cochain with values in a module `M` is stored by its values on the
//! increasing basis tuples `i_1 < .. < i_m`, listed in lexicographic order.
//! The coordinate vector of a cochain is the concatenation of those values,
//! so `dim C^m = C(n, m) * dim M`.
//!
//! The differential is
//!
//! ```text
//! d phi(x_1, .., x_{m+1}) = sum_{i<j} (-1)^(i+j-1) phi([x_i, x_j], x_1, .., ^x_i, .., ^x_j, ..)
//!                         + sum_i (-1)^i x_i . phi(x_1, .., ^x_i, ..)
//! ```
//!
//! which is the negative of the other common convention; kernels and images
//! do not depend on the choice.

use crate::algebra::RestrictedModule;
use crate::error::{Error, Result};
use crate::gf::{in_span, FpMatrix, FpVector, PrimeField};

/// Largest cochain degree for which matrices are assembled.
pub const MAX_CE_DEGREE: usize = 6;

/// All increasing `m`-tuples from `0..n`, in lexicographic order.
pub fn increasing_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(n: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, m, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, m, 0, &mut cur, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Position of an increasing tuple in [`increasing_tuples`].
pub fn tuple_rank(n: usize, t: &[usize]) -> usize {
    let m = t.len();
    let mut rank = 0;
    let mut prev = 0;
    for (i, &ti) in t.iter().enumerate() {
        for v in prev..ti {
            rank += binomial(n - 1 - v, m - 1 - i);
        }
        prev = ti + 1;
    }
    rank
}

/// Sort a tuple of distinct indices, returning the sign parity of the
/// sorting permutation, or `None` if an index repeats.
pub fn sort_with_parity(t: &[usize]) -> Option<(Vec<usize>, usize)> {
    let mut s = t.to_vec();
    let mut swaps = 0;
    for i in 1..s.len() {
        let mut j = i;
        while j > 0 && s[j - 1] > s[j] {
            s.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
        if j > 0 && s[j - 1] == s[j] {
            return None;
        }
    }
    Some((s, swaps))
}

/// An alternating multilinear map `L^m -> M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeCochain {
    field: PrimeField,
    n: usize,
    m: usize,
    degree: usize,
    values: Vec<u32>,
}

impl CeCochain {
    pub fn zero(field: PrimeField, n: usize, m: usize, degree: usize) -> Self {
        CeCochain {
            field,
            n,
            m,
            degree,
            values: vec![0; binomial(n, degree) * m],
        }
    }

    /// Wrap a coordinate vector (see the module docs for the layout).
    pub fn from_coords(
        field: PrimeField,
        n: usize,
        m: usize,
        degree: usize,
        coords: FpVector,
    ) -> Result<Self> {
        let expected = binomial(n, degree) * m;
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coords.len(),
            });
        }
        let values = coords.into_iter().map(|a| a % field.p()).collect();
        Ok(CeCochain {
            field,
            n,
            m,
            degree,
            values,
        })
    }

    /// The cochain with `f(e_t)` for every increasing tuple `t`.
    pub fn from_fn(
        field: PrimeField,
        n: usize,
        m: usize,
        degree: usize,
        f: impl Fn(&[usize]) -> FpVector,
    ) -> Self {
        let mut c = Self::zero(field, n, m, degree);
        for (r, t) in increasing_tuples(n, degree).iter().enumerate() {
            let v = f(t);
            assert_eq!(v.len(), m, "value length");
            c.values[r * m..(r + 1) * m].copy_from_slice(&v);
        }
        c
    }

    pub fn for_module(module: &RestrictedModule, degree: usize) -> Self {
        Self::zero(
            module.algebra().field(),
            module.algebra().dim(),
            module.dim(),
            degree,
        )
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Dimension of the algebra.
    #[inline]
    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    /// Dimension of the module.
    #[inline]
    pub fn module_dim(&self) -> usize {
        self.m
    }

    pub fn coords(&self) -> &[u32] {
        &self.values
    }

    pub fn into_coords(self) -> FpVector {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&a| a == 0)
    }

    /// Set the value on an increasing tuple.
    pub fn set(&mut self, t: &[usize], v: &[u32]) {
        let (s, parity) = sort_with_parity(t).expect("distinct indices");
        let r = tuple_rank(self.n, &s);
        let v = if parity % 2 == 0 {
            v.to_vec()
        } else {
            self.field.neg_vec(v)
        };
        self.values[r * self.m..(r + 1) * self.m].copy_from_slice(&v);
    }

    /// Value on a basis tuple in any order; zero on repeated indices.
    pub fn on_basis(&self, t: &[usize]) -> FpVector {
        let Some((s, parity)) = sort_with_parity(t) else {
            return vec![0; self.m];
        };
        let r = tuple_rank(self.n, &s);
        let v = &self.values[r * self.m..(r + 1) * self.m];
        if parity % 2 == 0 {
            v.to_vec()
        } else {
            self.field.neg_vec(v)
        }
    }

    /// Value on arbitrary vectors, by multilinear extension.
    pub fn eval(&self, args: &[&[u32]]) -> FpVector {
        assert_eq!(args.len(), self.degree, "argument count");
        let mut out = vec![0; self.m];
        let mut idx = Vec::with_capacity(self.degree);
        self.eval_rec(args, 1 % self.field.p(), &mut idx, &mut out);
        out
    }

    fn eval_rec(&self, args: &[&[u32]], coeff: u32, idx: &mut Vec<usize>, out: &mut FpVector) {
        let k = idx.len();
        if k == args.len() {
            let v = self.on_basis(idx);
            self.field.axpy(out, coeff, &v);
            return;
        }
        for (i, &a) in args[k].iter().enumerate() {
            if a == 0 || idx.contains(&i) {
                continue;
            }
            idx.push(i);
            self.eval_rec(args, self.field.mul(coeff, a), idx, out);
            idx.pop();
        }
    }

    pub fn add(&self, other: &CeCochain) -> CeCochain {
        assert_eq!(
            (self.n, self.m, self.degree),
            (other.n, other.m, other.degree)
        );
        let mut out = self.clone();
        self.field.add_assign(&mut out.values, &other.values);
        out
    }

    pub fn sub(&self, other: &CeCochain) -> CeCochain {
        assert_eq!(
            (self.n, self.m, self.degree),
            (other.n, other.m, other.degree)
        );
        let mut out = self.clone();
        self.field.sub_assign(&mut out.values, &other.values);
        out
    }

    pub fn scale(&self, s: u32) -> CeCochain {
        let mut out = self.clone();
        out.values = self.field.scale(s, &self.values);
        out
    }

    pub fn neg(&self) -> CeCochain {
        self.scale(self.field.neg(1))
    }
}

/// The differential `C^m -> C^(m+1)` applied to one cochain.
pub fn ce_diff(module: &RestrictedModule, phi: &CeCochain) -> CeCochain {
    let lie = module.algebra().lie();
    let f = lie.field();
    let n = lie.dim();
    let m = phi.degree();
    assert_eq!(phi.algebra_dim(), n, "cochain algebra dimension");
    assert_eq!(phi.module_dim(), module.dim(), "cochain module dimension");
    CeCochain::from_fn(f, n, module.dim(), m + 1, |t| {
        let mut out = vec![0; module.dim()];
        // bracket terms, 1-based positions i < j
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                let br = lie.basis_bracket(t[a], t[b]);
                if br.iter().all(|&c| c == 0) {
                    continue;
                }
                let rest: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != a && k != b)
                    .map(|(_, &v)| v)
                    .collect();
                let mut val = vec![0; module.dim()];
                for (k, &c) in br.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut args = vec![k];
                    args.extend_from_slice(&rest);
                    f.axpy(&mut val, c, &phi.on_basis(&args));
                }
                // (-1)^(i+j-1) with i = a+1, j = b+1
                f.axpy(&mut out, f.sign(a + b + 1), &val);
            }
        }
        for a in 0..t.len() {
            let rest: Vec<usize> = t
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != a)
                .map(|(_, &v)| v)
                .collect();
            let val = module.act_basis(t[a], &phi.on_basis(&rest));
            f.axpy(&mut out, f.sign(a + 1), &val);
        }
        out
    })
}

/// Matrix of `d^m` on coordinates: `dim C^(m+1)` rows, `dim C^m` columns.
pub fn ce_matrix(module: &RestrictedModule, m: usize) -> Result<FpMatrix> {
    if m + 1 > MAX_CE_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: m + 1,
            cap: MAX_CE_DEGREE,
        });
    }
    let f = module.algebra().field();
    let n = module.algebra().dim();
    let md = module.dim();
    let cols = binomial(n, m) * md;
    let rows = binomial(n, m + 1) * md;
    let columns: Vec<FpVector> = (0..cols)
        .map(|c| {
            let phi = CeCochain::from_coords(f, n, md, m, f.unit_vec(cols, c))
                .expect("coordinate length");
            ce_diff(module, &phi).into_coords()
        })
        .collect();
    Ok(FpMatrix::from_columns(f, rows, &columns))
}

/// Kernel, image and cohomology dimension in one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyDims {
    pub degree: usize,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
}

impl CohomologyDims {
    pub fn cohomology(&self) -> usize {
        self.cocycles - self.coboundaries
    }
}

/// `dim Z^m`, `dim B^m` and hence `dim H^m_CE(L, M)`.
pub fn ce_cohomology(module: &RestrictedModule, m: usize) -> Result<CohomologyDims> {
    let d = ce_matrix(module, m)?;
    let coboundaries = if m == 0 {
        0
    } else {
        ce_matrix(module, m - 1)?.rank()
    };
    Ok(CohomologyDims {
        degree: m,
        cochains: d.cols(),
        cocycles: d.cols() - d.rank(),
        coboundaries,
    })
}

/// `dim H^m_CE(L, M)`.
pub fn ce_cohomology_dim(module: &RestrictedModule, m: usize) -> Result<usize> {
    Ok(ce_cohomology(module, m)?.cohomology())
}

/// Matrix whose column `c` is `f(e_c)` for a linear map given as a closure.
pub fn matrix_of(
    field: PrimeField,
    cols: usize,
    rows: usize,
    f: impl Fn(FpVector) -> FpVector,
) -> FpMatrix {
    let columns: Vec<FpVector> = (0..cols).map(|c| f(field.unit_vec(cols, c))).collect();
    FpMatrix::from_columns(field, rows, &columns)
}

/// Cocycles, coboundaries and a set of classes completing the coboundaries
/// to the cocycles, all as coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologySpace {
    pub degree: usize,
    pub cochain_dim: usize,
    pub cocycles: Vec<FpVector>,
    pub coboundaries: Vec<FpVector>,
    pub classes: Vec<FpVector>,
}

impl CohomologySpace {
    /// `d_out` is the differential leaving the degree, `d_in` the one entering it.
    pub fn from_differentials(degree: usize, d_out: &FpMatrix, d_in: Option<&FpMatrix>) -> Self {
        let f = d_out.field();
        let cocycles = d_out.kernel_basis();
        let coboundaries = d_in.map(image_basis).unwrap_or_default();
        let mut span = coboundaries.clone();
        let mut classes = Vec::new();
        for z in &cocycles {
            if !in_span(f, &span, z) {
                span.push(z.clone());
                classes.push(z.clone());
            }
        }
        CohomologySpace {
            degree,
            cochain_dim: d_out.cols(),
            cocycles,
            coboundaries,
            classes,
        }
    }

    pub fn dim(&self) -> usize {
        self.cocycles.len() - self.coboundaries.len()
    }
}

/// A basis of the column space: the columns at the pivot positions.
pub fn image_basis(m: &FpMatrix) -> Vec<FpVector> {
    m.rref().pivots.iter().map(|&c| m.column(c)).collect()
}
