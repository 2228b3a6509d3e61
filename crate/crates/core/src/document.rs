//! JSON documents describing restricted Lie algebras and the data built on them.
//!
//! Every coefficient is a plain integer already reduced mod `p`; matrices are
//! lists of rows. Semantics are index-based and basis names are cosmetic.
//!
//! ```json
//! {
//!   "p": 5,
//!   "dim": 3,
//!   "basis": ["x", "y", "z"],
//!   "brackets": [{ "i": 0, "j": 1, "coeffs": [0, 0, 1] }],
//!   "pmap": [[0, 0, 0], [0, 0, 0], [0, 0, 1]]
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::algebra::{LieAlgebra, RestrictedLieAlgebra, RestrictedModule};
use crate::cohomology_ce::CeCochain;
use crate::deformation::TruncatedDeformation;
use crate::error::Error;
use crate::gf::{FpMatrix, PrimeField};
use crate::rinehart::{scalar_action, AssociativeAlgebra, LieRinehartStructure};

/// A matrix as a list of rows.
pub type MatrixRows = Vec<Vec<u32>>;

/// `[e_i, e_j] = coeffs` (or `e_i e_j` for an associative table).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDocument {
    pub dim: usize,
    /// `rho[i]` is the matrix of `e_i`.
    pub rho: Vec<MatrixRows>,
}

/// A commutative unital algebra; products not listed are zero and `e_j e_i`
/// is filled in from `e_i e_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssociativeDocument {
    pub dim: usize,
    pub unit: usize,
    pub products: Vec<BracketEntry>,
}

/// `A`, its action on `L` and the anchor. The action is given either by
/// matrices (`action[i]` for `e_i` of `A`) or by an augmentation `eps`, meaning
/// `a . u = eps(a) u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RinehartDocument {
    pub algebra: AssociativeDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<MatrixRows>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<Vec<u32>>,
    /// `anchor[j]` is the matrix of `rho(e_j)` on `A`.
    pub anchor: Vec<MatrixRows>,
}

/// The order-`k` terms `m_k`, `omega_k` and optionally `sigma_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationTerm {
    #[serde(default)]
    pub m: Vec<BracketEntry>,
    pub omega: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<MatrixRows>>,
}

/// `terms[k - 1]` holds the order-`k` terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationDocument {
    pub order: usize,
    pub terms: Vec<DeformationTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub p: u32,
    pub dim: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    pub pmap: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rinehart: Option<RinehartDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformationDocument>,
}

/// A malformed document, located by a JSON path such as `$.brackets[2].coeffs`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct DocumentError {
    pub path: String,
    pub message: String,
}

fn err(path: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError {
        path: path.into(),
        message: message.into(),
    }
}

fn check_vector(path: &str, v: &[u32], len: usize, p: u32) -> Result<(), DocumentError> {
    if v.len() != len {
        return Err(err(
            path,
            format!("expected {len} entries, found {}", v.len()),
        ));
    }
    if let Some(k) = v.iter().position(|&c| c >= p) {
        return Err(err(
            format!("{path}[{k}]"),
            format!("{} is not reduced mod {p}", v[k]),
        ));
    }
    Ok(())
}

fn check_matrix(
    path: &str,
    m: &MatrixRows,
    rows: usize,
    cols: usize,
    p: u32,
) -> Result<(), DocumentError> {
    if m.len() != rows {
        return Err(err(
            path,
            format!("expected {rows} rows, found {}", m.len()),
        ));
    }
    for (r, row) in m.iter().enumerate() {
        check_vector(&format!("{path}[{r}]"), row, cols, p)?;
    }
    Ok(())
}

fn check_matrices(
    path: &str,
    ms: &[MatrixRows],
    count: usize,
    d: usize,
    p: u32,
) -> Result<(), DocumentError> {
    if ms.len() != count {
        return Err(err(
            path,
            format!("expected {count} matrices, found {}", ms.len()),
        ));
    }
    for (k, m) in ms.iter().enumerate() {
        check_matrix(&format!("{path}[{k}]"), m, d, d, p)?;
    }
    Ok(())
}

fn check_entries(
    path: &str,
    entries: &[BracketEntry],
    n: usize,
    p: u32,
    alternating: bool,
) -> Result<(), DocumentError> {
    for (k, e) in entries.iter().enumerate() {
        let at = format!("{path}[{k}]");
        if e.i >= n || e.j >= n {
            return Err(err(at, format!("index out of range for dimension {n}")));
        }
        check_vector(&format!("{at}.coeffs"), &e.coeffs, n, p)?;
        if alternating && e.i == e.j && e.coeffs.iter().any(|&c| c != 0) {
            return Err(err(at, "a bracket [e_i, e_i] must vanish"));
        }
        let normal = |x: &BracketEntry| {
            if alternating && x.i > x.j {
                ((x.j, x.i), x.coeffs.iter().map(|&c| (p - c) % p).collect())
            } else {
                ((x.i.min(x.j), x.i.max(x.j)), x.coeffs.clone())
            }
        };
        let (key, value): ((usize, usize), Vec<u32>) = normal(e);
        if entries[..k]
            .iter()
            .map(normal)
            .any(|(k2, v2)| k2 == key && v2 != value)
        {
            return Err(err(at, "conflicts with an earlier entry for the same pair"));
        }
    }
    Ok(())
}

fn matrix(f: PrimeField, m: &MatrixRows) -> FpMatrix {
    let cols = m.first().map_or(0, Vec::len);
    FpMatrix::new(f, m.len(), cols, m.concat()).expect("validated shape")
}

fn rows(m: &FpMatrix) -> MatrixRows {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn sparse_cochain(c: &CeCochain) -> Vec<BracketEntry> {
    let n = c.algebra_dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = c.on_basis(&[i, j]);
            if v.iter().any(|&a| a != 0) {
                out.push(BracketEntry { i, j, coeffs: v });
            }
        }
    }
    out
}

fn cochain_from_entries(f: PrimeField, n: usize, entries: &[BracketEntry]) -> CeCochain {
    let mut c = CeCochain::zero(f, n, n, 2);
    for e in entries {
        if e.i < e.j {
            c.set(&[e.i, e.j], &e.coeffs);
        } else if e.i > e.j {
            c.set(&[e.j, e.i], &f.neg_vec(&e.coeffs));
        }
    }
    c
}

impl AlgebraDocument {
    /// Parse and validate, reporting the JSON path of the first problem.
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: AlgebraDocument = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." {
                "$".to_string()
            } else {
                format!("$.{path}")
            };
            err(path, e.into_inner().to_string())
        })?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Ranges, lengths and reduction mod `p`.
    pub fn validate(&self) -> Result<(), DocumentError> {
        let (p, n) = (self.p, self.dim);
        if PrimeField::new(p).is_err() {
            return Err(err("$.p", format!("{p} is not prime")));
        }
        if !self.basis.is_empty() && self.basis.len() != n {
            return Err(err(
                "$.basis",
                format!("expected {n} names, found {}", self.basis.len()),
            ));
        }
        check_entries("$.brackets", &self.brackets, n, p, true)?;
        if self.pmap.len() != n {
            return Err(err(
                "$.pmap",
                format!("expected {n} images, found {}", self.pmap.len()),
            ));
        }
        for (k, v) in self.pmap.iter().enumerate() {
            check_vector(&format!("$.pmap[{k}]"), v, n, p)?;
        }
        if let Some(m) = &self.module {
            check_matrices("$.module.rho", &m.rho, n, m.dim, p)?;
        }
        let mut dim_a = None;
        if let Some(r) = &self.rinehart {
            let a = &r.algebra;
            if a.unit >= a.dim {
                return Err(err("$.rinehart.algebra.unit", "unit index out of range"));
            }
            check_entries("$.rinehart.algebra.products", &a.products, a.dim, p, false)?;
            match (&r.action, &r.augmentation) {
                (Some(action), None) => check_matrices("$.rinehart.action", action, a.dim, n, p)?,
                (None, Some(eps)) => check_vector("$.rinehart.augmentation", eps, a.dim, p)?,
                _ => {
                    return Err(err(
                        "$.rinehart",
                        "give exactly one of action and augmentation",
                    ))
                }
            }
            check_matrices("$.rinehart.anchor", &r.anchor, n, a.dim, p)?;
            dim_a = Some(a.dim);
        }
        if let Some(d) = &self.deformation {
            if d.terms.len() != d.order {
                return Err(err(
                    "$.deformation.terms",
                    format!("expected {} terms, found {}", d.order, d.terms.len()),
                ));
            }
            for (k, t) in d.terms.iter().enumerate() {
                let at = format!("$.deformation.terms[{k}]");
                check_entries(&format!("{at}.m"), &t.m, n, p, true)?;
                if t.omega.len() != n {
                    return Err(err(format!("{at}.omega"), format!("expected {n} images")));
                }
                for (j, v) in t.omega.iter().enumerate() {
                    check_vector(&format!("{at}.omega[{j}]"), v, n, p)?;
                }
                if let Some(s) = &t.sigma {
                    let da = dim_a.ok_or_else(|| {
                        err(format!("{at}.sigma"), "symbol maps need a rinehart section")
                    })?;
                    check_matrices(&format!("{at}.sigma"), s, n, da, p)?;
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated prime")
    }

    fn names(&self) -> Vec<String> {
        if self.basis.is_empty() {
            (0..self.dim).map(|i| format!("e{i}")).collect()
        } else {
            self.basis.clone()
        }
    }

    /// The Lie algebra without its p-map; fails on Jacobi.
    pub fn lie_algebra(&self) -> crate::Result<LieAlgebra> {
        let f = self.field();
        let c = cochain_from_entries(f, self.dim, &self.brackets);
        let brackets: Vec<_> = (0..self.dim)
            .flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, c.on_basis(&[i, j])))
            .collect();
        LieAlgebra::new(f, self.names(), &brackets)
    }

    pub fn restricted_algebra(&self) -> crate::Result<RestrictedLieAlgebra> {
        RestrictedLieAlgebra::new(self.lie_algebra()?, self.pmap.clone())
    }

    /// The module section, if any.
    pub fn restricted_module(
        &self,
        alg: &RestrictedLieAlgebra,
    ) -> Option<crate::Result<RestrictedModule>> {
        let f = self.field();
        self.module.as_ref().map(|m| {
            RestrictedModule::new(alg.clone(), m.rho.iter().map(|r| matrix(f, r)).collect())
        })
    }

    pub fn rinehart_structure(
        &self,
        alg: &RestrictedLieAlgebra,
    ) -> Option<crate::Result<LieRinehartStructure>> {
        let f = self.field();
        self.rinehart.as_ref().map(|r| {
            let n = r.algebra.dim;
            let mut table = vec![vec![0; n]; n * n];
            for e in &r.algebra.products {
                table[e.i * n + e.j] = e.coeffs.clone();
                table[e.j * n + e.i] = e.coeffs.clone();
            }
            let a = AssociativeAlgebra::new(f, table, r.algebra.unit)?;
            let action = match (&r.action, &r.augmentation) {
                (Some(action), _) => action.iter().map(|m| matrix(f, m)).collect(),
                (None, Some(eps)) => scalar_action(&a, eps, self.dim)?,
                (None, None) => {
                    return Err(Error::InvalidInput("rinehart section has no action".into()))
                }
            };
            let anchor = r.anchor.iter().map(|m| matrix(f, m)).collect();
            LieRinehartStructure::new(a, alg.clone(), action, anchor)
        })
    }

    /// The deformation section together with its symbol maps `sigma_1..sigma_N`
    /// (zero where not given).
    pub fn truncated_deformation(
        &self,
        alg: &RestrictedLieAlgebra,
    ) -> Option<crate::Result<(TruncatedDeformation, Vec<Vec<FpMatrix>>)>> {
        let f = self.field();
        let n = self.dim;
        let da = self.rinehart.as_ref().map(|r| r.algebra.dim);
        self.deformation.as_ref().map(|d| {
            let terms = d
                .terms
                .iter()
                .map(|t| (cochain_from_entries(f, n, &t.m), t.omega.clone()))
                .collect();
            let sigmas = match da {
                None => Vec::new(),
                Some(da) => d
                    .terms
                    .iter()
                    .map(|t| match &t.sigma {
                        Some(s) => s.iter().map(|m| matrix(f, m)).collect(),
                        None => vec![FpMatrix::zeros(f, da, da); n],
                    })
                    .collect(),
            };
            Ok((TruncatedDeformation::new(alg.clone(), terms)?, sigmas))
        })
    }

    /// The document of a restricted Lie algebra.
    pub fn from_algebra(alg: &RestrictedLieAlgebra) -> Self {
        let lie = alg.lie();
        let n = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = lie.basis_bracket(i, j);
                if v.iter().any(|&a| a != 0) {
                    brackets.push(BracketEntry {
                        i,
                        j,
                        coeffs: v.to_vec(),
                    });
                }
            }
        }
        AlgebraDocument {
            p: alg.p(),
            dim: n,
            basis: lie.names().to_vec(),
            brackets,
            pmap: alg.pmap_images().to_vec(),
            module: None,
            rinehart: None,
            deformation: None,
        }
    }

    pub fn with_module(mut self, m: &RestrictedModule) -> Self {
        self.module = Some(ModuleDocument {
            dim: m.dim(),
            rho: m.rho().iter().map(rows).collect(),
        });
        self
    }

    pub fn with_rinehart(mut self, s: &LieRinehartStructure) -> Self {
        let a = s.algebra();
        let n = a.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in i..n {
                let v = a.basis_product(i, j);
                if v.iter().any(|&c| c != 0) {
                    products.push(BracketEntry {
                        i,
                        j,
                        coeffs: v.clone(),
                    });
                }
            }
        }
        self.rinehart = Some(RinehartDocument {
            algebra: AssociativeDocument {
                dim: n,
                unit: a.unit_index(),
                products,
            },
            action: Some(s.action().iter().map(rows).collect()),
            augmentation: None,
            anchor: s.anchor().iter().map(rows).collect(),
        });
        self
    }

    /// Attach deformation terms; `sigmas[k - 1]` is stored with order `k` when present.
    pub fn with_deformation(mut self, d: &TruncatedDeformation, sigmas: &[Vec<FpMatrix>]) -> Self {
        let terms = (1..=d.order())
            .map(|k| DeformationTerm {
                m: sparse_cochain(&d.bracket_term(k)),
                omega: d.pmap_term(k),
                sigma: sigmas.get(k - 1).map(|s| s.iter().map(rows).collect()),
            })
            .collect();
        self.deformation = Some(DeformationDocument {
            order: d.order(),
            terms,
        });
        self
    }
}
