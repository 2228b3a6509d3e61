//! Built-in algebras and the classification of restricted Heisenberg algebras.
//!
//! Every constructor runs the full verification of its output (Jacobi,
//! Jacobson's criterion, associativity for the associative examples), so a
//! value returned from here is known to be well formed.
//!
//! Catalog entries are also addressable by name, e.g.
//! `heisenberg:p=3:theta=z*`, `sl2:p=5`, `witt:p=5`,
//! `filiform:p=5:lambda=0,0,0,0,1`, `abelian:p=3:n=2`.

use std::collections::HashMap;

use crate::algebra::{is_isomorphic_restricted, IsoOutcome, LieAlgebra, RestrictedLieAlgebra};
use crate::cohomology_ce::CeCochain;
use crate::deformation::TruncatedDeformation;
use crate::error::{Error, Result};
use crate::gf::{FpMatrix, FpVector, PrimeField};
use crate::rinehart::{scalar_action, AssociativeAlgebra, LieRinehartStructure};

fn field(p: u32) -> Result<PrimeField> {
    PrimeField::new(p)
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// The Heisenberg algebra `[x, y] = z` with p-map `v^[p] = theta(v) z`.
///
/// `theta` lists `theta(x), theta(y), theta(z)`.
pub fn heisenberg(p: u32, theta: [u32; 3]) -> Result<RestrictedLieAlgebra> {
    let f = field(p)?;
    let lie = LieAlgebra::new(f, names(&["x", "y", "z"]), &[(0, 1, vec![0, 0, 1])])?;
    let images = theta.iter().map(|&t| vec![0, 0, t % p]).collect();
    RestrictedLieAlgebra::new(lie, images)
}

/// The three linear forms that appear throughout: `0`, `x*` and `z*`, plus `y*`.
pub fn theta_named(name: &str) -> Result<[u32; 3]> {
    match name {
        "0" => Ok([0, 0, 0]),
        "x*" => Ok([1, 0, 0]),
        "y*" => Ok([0, 1, 0]),
        "z*" => Ok([0, 0, 1]),
        other => {
            let parts: Vec<&str> = other.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidInput(format!(
                    "unknown linear form '{other}'"
                )));
            }
            let mut out = [0u32; 3];
            for (slot, s) in out.iter_mut().zip(parts) {
                *slot = s.trim().parse().map_err(|_| {
                    Error::InvalidInput(format!("bad coefficient '{s}' in '{other}'"))
                })?;
            }
            Ok(out)
        }
    }
}

/// Printable name of a linear form on the Heisenberg basis.
pub fn theta_name(theta: [u32; 3]) -> String {
    match theta {
        [0, 0, 0] => "0".into(),
        [1, 0, 0] => "x*".into(),
        [0, 1, 0] => "y*".into(),
        [0, 0, 1] => "z*".into(),
        [a, b, c] => format!("{a},{b},{c}"),
    }
}

/// `sl2` with basis `X, Y, H`, `[X, Y] = H`, `[H, X] = 2X`, `[H, Y] = -2Y`,
/// and `X^[p] = Y^[p] = 0`, `H^[p] = 2^(p-1) H`.
pub fn sl2(p: u32) -> Result<RestrictedLieAlgebra> {
    if p < 3 {
        return Err(Error::Characteristic {
            p,
            reason: "sl2 needs p >= 3",
        });
    }
    let f = field(p)?;
    let two = f.from_int(2);
    let lie = LieAlgebra::new(
        f,
        names(&["X", "Y", "H"]),
        &[
            (0, 1, vec![0, 0, 1]),
            (2, 0, vec![two, 0, 0]),
            (2, 1, vec![0, f.neg(two), 0]),
        ],
    )?;
    let h = f.pow(2, p as u64 - 1);
    RestrictedLieAlgebra::new(lie, vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, h]])
}

/// The Witt algebra `W(1)`: basis `e_-1, .., e_(p-2)`,
/// `[e_i, e_j] = (j - i) e_(i+j)` when `i + j` is in range, `e_0^[p] = e_0`.
pub fn witt(p: u32) -> Result<RestrictedLieAlgebra> {
    if p < 5 {
        return Err(Error::Characteristic {
            p,
            reason: "the Witt algebra is built for p >= 5",
        });
    }
    let f = field(p)?;
    let n = p as usize;
    let deg = |idx: usize| idx as i64 - 1;
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let s = deg(i) + deg(j);
            if (-1..=p as i64 - 2).contains(&s) {
                let mut v = vec![0; n];
                v[(s + 1) as usize] = f.from_int(deg(j) - deg(i));
                brackets.push((i, j, v));
            }
        }
    }
    let names = (0..n).map(|i| format!("e{}", deg(i))).collect();
    let lie = LieAlgebra::new(f, names, &brackets)?;
    let mut images = vec![vec![0; n]; n];
    images[1][1] = 1;
    RestrictedLieAlgebra::new(lie, images)
}

/// The filiform algebra of dimension `p`: basis `e_1, .., e_p`,
/// `[e_1, e_i] = e_(i+1)` for `2 <= i <= p-1`, and `e_k^[p] = lambda_k e_p`.
pub fn filiform(p: u32, lambda: &[u32]) -> Result<RestrictedLieAlgebra> {
    if p < 5 {
        return Err(Error::Characteristic {
            p,
            reason: "the filiform example is built for p >= 5",
        });
    }
    let n = p as usize;
    if lambda.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: lambda.len(),
        });
    }
    let f = field(p)?;
    let brackets: Vec<_> = (1..n - 1).map(|i| (0, i, f.unit_vec(n, i + 1))).collect();
    let names = (1..=n).map(|i| format!("e{i}")).collect();
    let lie = LieAlgebra::new(f, names, &brackets)?;
    let images = lambda
        .iter()
        .map(|&l| {
            let mut v = vec![0; n];
            v[n - 1] = l % p;
            v
        })
        .collect();
    RestrictedLieAlgebra::new(lie, images)
}

/// The abelian algebra of dimension `images.len()` with the p-semilinear
/// p-map `e_i^[p] = images[i]`.
pub fn abelian(p: u32, images: Vec<FpVector>) -> Result<RestrictedLieAlgebra> {
    let f = field(p)?;
    RestrictedLieAlgebra::new(LieAlgebra::abelian(f, images.len()), images)
}

/// The two-dimensional commutative unital algebras in characteristic 2:
/// `e_1` is the unit and `e_2 e_2` is `0` (A0), `e_1` (A1) or `e_2` (A2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim2Variant {
    A0,
    A1,
    A2,
}

pub fn assoc_dim2(variant: Dim2Variant) -> Result<AssociativeAlgebra> {
    let f = field(2)?;
    let sq = match variant {
        Dim2Variant::A0 => vec![0, 0],
        Dim2Variant::A1 => vec![1, 0],
        Dim2Variant::A2 => vec![0, 1],
    };
    AssociativeAlgebra::new(f, vec![vec![1, 0], vec![0, 1], vec![0, 1], sq], 0)
}

/// Truncated polynomials `F[x]/(x^p - 1)` with basis `1, x, .., x^(p-1)`.
pub fn truncated_polynomials(p: u32) -> Result<AssociativeAlgebra> {
    let f = field(p)?;
    let n = p as usize;
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(f.unit_vec(n, (i + j) % n));
        }
    }
    AssociativeAlgebra::new(f, table, 0)
}

/// The dual numbers `F[e]/(e^2)`: basis `e_1` (unit) and `e_2` with `e_2 e_2 = 0`.
pub fn dual_numbers(p: u32) -> Result<AssociativeAlgebra> {
    let f = field(p)?;
    AssociativeAlgebra::new(f, vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![0, 0]], 0)
}

/// `(h, z*)` over the dual numbers, `A` acting through `e_1 -> 1, e_2 -> 0`,
/// with anchor `rho(x) = rho(y) = 0` and `rho(z)(e_2) = gamma e_2`.
pub fn heisenberg_rinehart(p: u32, gamma: u32) -> Result<LieRinehartStructure> {
    let a = dual_numbers(p)?;
    let lie = heisenberg(p, [0, 0, 1])?;
    let f = a.field();
    let action = scalar_action(&a, &[1, 0], 3)?;
    let zero = FpMatrix::zeros(f, 2, 2);
    let mut rz = zero.clone();
    rz.set(1, 1, gamma % p);
    LieRinehartStructure::new(a, lie, action, vec![zero.clone(), zero, rz])
}

/// `(h, z*)` in characteristic 2 over `A_1`, `A_1` acting through its unique
/// augmentation, with anchor zero.
pub fn char2_rinehart() -> Result<LieRinehartStructure> {
    let a = assoc_dim2(Dim2Variant::A1)?;
    let eps = a
        .augmentations()
        .pop()
        .ok_or_else(|| Error::InvalidInput("A1 has no augmentation".into()))?;
    let lie = heisenberg(2, [0, 0, 1])?;
    let action = scalar_action(&a, &eps, 3)?;
    LieRinehartStructure::null_anchor(a, lie, action)
}

/// First-order symbol map for [`heisenberg_deformation`] at `p = 2`:
/// `sigma_1(x)(e_2) = sigma_1(y)(e_2) = e_1 + e_2`, `sigma_1(z) = 0`.
pub fn char2_symbol() -> Result<Vec<FpMatrix>> {
    let f = field(2)?;
    let mut s = FpMatrix::zeros(f, 2, 2);
    s.set(0, 1, 1);
    s.set(1, 1, 1);
    Ok(vec![s.clone(), s, FpMatrix::zeros(f, 2, 2)])
}

/// A first-order deformation of `(h, z*)`: `m_1(x, y) = x`, `omega_1(y) = z`
/// for odd `p`, and `m_1(x, y) = y`, `omega_1(x) = x` for `p = 2`.
pub fn heisenberg_deformation(p: u32) -> Result<TruncatedDeformation> {
    let alg = heisenberg(p, [0, 0, 1])?;
    let f = alg.field();
    let mut m1 = CeCochain::zero(f, 3, 3, 2);
    let mut w1 = vec![vec![0; 3]; 3];
    if p == 2 {
        m1.set(&[0, 1], &f.unit_vec(3, 1));
        w1[0] = f.unit_vec(3, 0);
    } else {
        m1.set(&[0, 1], &f.unit_vec(3, 0));
        w1[1] = f.unit_vec(3, 2);
    }
    TruncatedDeformation::first_order(alg, m1, w1)
}

fn parse_kv(parts: &[&str]) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for part in parts {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got '{part}'")))?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

fn get_p(kv: &HashMap<String, String>) -> Result<u32> {
    kv.get("p")
        .ok_or_else(|| Error::InvalidInput("missing p=".into()))?
        .parse()
        .map_err(|_| Error::InvalidInput("p must be an integer".into()))
}

fn parse_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad list entry '{x}'")))
        })
        .collect()
}

/// Look up a restricted Lie algebra by catalog name.
pub fn from_name(name: &str) -> Result<RestrictedLieAlgebra> {
    let parts: Vec<&str> = name.split(':').collect();
    let kv = parse_kv(&parts[1..])?;
    let p = get_p(&kv)?;
    match parts[0] {
        "heisenberg" => {
            let theta = theta_named(kv.get("theta").map_or("0", |s| s.as_str()))?;
            heisenberg(p, theta)
        }
        "sl2" => sl2(p),
        "witt" => witt(p),
        "filiform" => {
            let lambda = match kv.get("lambda") {
                Some(s) => parse_list(s)?,
                None => vec![0; p as usize],
            };
            filiform(p, &lambda)
        }
        "abelian" => {
            let n: usize = kv
                .get("n")
                .ok_or_else(|| Error::InvalidInput("abelian needs n=".into()))?
                .parse()
                .map_err(|_| Error::InvalidInput("n must be an integer".into()))?;
            abelian(p, vec![vec![0; n]; n])
        }
        other => Err(Error::InvalidInput(format!(
            "unknown catalog entry '{other}'"
        ))),
    }
}

/// One isomorphism class of restricted Heisenberg algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergClass {
    pub representative: [u32; 3],
    pub members: Vec<[u32; 3]>,
}

/// Partition all `p^3` linear forms `theta` into isomorphism classes of
/// `(h, theta)`.
///
/// Forms are visited in increasing `theta(x) + p theta(y) + p^2 theta(z)`;
/// each new form is compared with the representatives found so far, so a
/// representative is the first form of its class in that order.
pub fn classify_heisenberg(p: u32) -> Result<Vec<HeisenbergClass>> {
    let f = field(p)?;
    let mut classes: Vec<(HeisenbergClass, RestrictedLieAlgebra)> = Vec::new();
    for rev in f.all_vectors(3) {
        let theta = [rev[2], rev[1], rev[0]];
        let alg = heisenberg(p, theta)?;
        let mut placed = false;
        for (class, rep) in classes.iter_mut() {
            match is_isomorphic_restricted(&alg, rep)? {
                IsoOutcome::Isomorphic(_) => {
                    class.members.push(theta);
                    placed = true;
                    break;
                }
                IsoOutcome::NotIsomorphic => {}
                IsoOutcome::SearchInfeasible { candidates } => {
                    return Err(Error::InvalidInput(format!(
                        "isomorphism search over {candidates} candidates is infeasible"
                    )))
                }
            }
        }
        if !placed {
            classes.push((
                HeisenbergClass {
                    representative: theta,
                    members: vec![theta],
                },
                alg,
            ));
        }
    }
    Ok(classes.into_iter().map(|(c, _)| c).collect())
}
