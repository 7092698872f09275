//! Determinantal integral-dependence certificates.
//!
//! The builder finds the relations by lifting and evaluates the
//! characteristic polynomial through a subset expansion. The verifier only
//! multiplies and adds: it rechecks every relation and recomputes the
//! determinant by the permutation expansion.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::lift;
use crate::ideal::IdealHandle;
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{PolyRing, RingContext};

use super::same_context;

/// A polynomial in an auxiliary variable `U` with coefficients in `S`,
/// stored by ascending power of `U`.
type UPoly = Vec<Polynomial>;

#[derive(Clone, Debug)]
pub struct IntegralDependenceCertificate {
    pub u: Polynomial,
    pub ideal: IdealHandle,
    pub j_gens: Vec<Polynomial>,
    /// `matrix[s][t] = i_{s,t}` with `u*j_s = Σ_t i_{s,t} j_t` in `R`.
    pub matrix: Vec<Vec<Polynomial>>,
    /// `i_{s,t} = Σ_a membership[s][t][a] * I.generators()[a]`.
    pub membership: Vec<Vec<Vec<Polynomial>>>,
    /// `u*j_s - Σ_t i_{s,t} j_t = Σ_f relation_witness[s][f] * F_f`.
    pub relation_witness: Vec<Vec<Polynomial>>,
    /// Coefficients of `det(U*Id - M)` by ascending power of `U`; monic.
    pub charpoly: Vec<Polynomial>,
    /// `charpoly(u)` reduced modulo the defining ideal.
    pub residue: Polynomial,
    /// `charpoly(u) = Σ_f residue_witness[f] * F_f` when the residue vanishes.
    pub residue_witness: Option<Vec<Polynomial>>,
    pub valid: bool,
}

fn ambient_limits(ctx: &RingContext) -> crate::limits::GbLimits {
    *ctx.limits()
}

fn u_add(a: &UPoly, b: &UPoly, ring: &Arc<PolyRing>) -> UPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| ring.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| ring.zero());
            &x + &y
        })
        .collect()
}

fn u_mul(a: &UPoly, b: &UPoly, ring: &Arc<PolyRing>) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// `det(U*Id - M)` by dynamic programming over column subsets.
fn charpoly(matrix: &[Vec<Polynomial>], ring: &Arc<PolyRing>) -> UPoly {
    let k = matrix.len();
    let entry = |r: usize, c: usize| -> UPoly {
        let neg = -&matrix[r][c];
        if r == c {
            vec![neg, ring.one()]
        } else {
            vec![neg]
        }
    };
    let mut dp: Vec<Option<UPoly>> = vec![None; 1 << k];
    dp[0] = Some(vec![ring.one()]);
    for mask in 0usize..(1 << k) {
        let Some(cur) = dp[mask].take() else { continue };
        let r = mask.count_ones() as usize;
        if r == k {
            dp[mask] = Some(cur);
            continue;
        }
        for c in 0..k {
            if mask & (1 << c) != 0 {
                continue;
            }
            let inversions = (mask >> (c + 1)).count_ones();
            let mut term = u_mul(&cur, &entry(r, c), ring);
            if inversions % 2 == 1 {
                term = term.iter().map(|t| -t).collect();
            }
            let slot = &mut dp[mask | (1 << c)];
            *slot = Some(match slot.take() {
                Some(acc) => u_add(&acc, &term, ring),
                None => term,
            });
        }
        dp[mask] = Some(cur);
    }
    let mut out = dp[(1 << k) - 1].take().unwrap_or_else(|| vec![ring.one()]);
    out.resize(k + 1, ring.zero());
    out
}

fn evaluate(coeffs: &[Polynomial], u: &Polynomial) -> Polynomial {
    let mut acc = u.ring().zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * u) + c;
    }
    acc
}

fn lift_in(
    ctx: &RingContext,
    f: &Polynomial,
    gens: &[Polynomial],
) -> Result<Option<Vec<Polynomial>>> {
    lift(f, gens, MonomialOrder::Grevlex, &ambient_limits(ctx))
}

struct Relations {
    /// Coefficients of the optional `v*j_t` block.
    v_block: Vec<Vec<Polynomial>>,
    matrix: Vec<Vec<Polynomial>>,
    membership: Vec<Vec<Vec<Polynomial>>>,
    witness: Vec<Vec<Polynomial>>,
}

/// Expresses each `u*j_s` over `{v*j_t} ∪ {i_a*j_t} ∪ F`.
fn relations(
    ctx: &RingContext,
    u: &Polynomial,
    v: Option<&Polynomial>,
    i_gens: &[Polynomial],
    j_gens: &[Polynomial],
) -> Result<Relations> {
    let k = j_gens.len();
    let na = i_gens.len();
    let defining = ctx.defining_ideal();
    let mut gens = Vec::new();
    if let Some(v) = v {
        gens.extend(j_gens.iter().map(|j| v * j));
    }
    for j in j_gens {
        gens.extend(i_gens.iter().map(|i| i * j));
    }
    gens.extend(defining.iter().cloned());
    let offset = if v.is_some() { k } else { 0 };
    let mut out = Relations {
        v_block: Vec::new(),
        matrix: Vec::new(),
        membership: Vec::new(),
        witness: Vec::new(),
    };
    for (s, j) in j_gens.iter().enumerate() {
        let target = u * j;
        let Some(cof) = lift_in(ctx, &target, &gens)? else {
            return Err(Error::HypothesisFails {
                index: s,
                detail: format!("u*j_{s} is not in the required ideal"),
            });
        };
        if v.is_some() {
            out.v_block.push(cof[..k].to_vec());
        }
        let mut row = Vec::with_capacity(k);
        let mut mem = Vec::with_capacity(k);
        for t in 0..k {
            let block = cof[offset + t * na..offset + (t + 1) * na].to_vec();
            let mut a = u.ring().zero();
            for (b, i) in block.iter().zip(i_gens) {
                a = &a + &(b * i);
            }
            row.push(a);
            mem.push(block);
        }
        out.matrix.push(row);
        out.membership.push(mem);
        out.witness.push(cof[offset + k * na..].to_vec());
    }
    Ok(out)
}

fn check_inputs(ideal: &IdealHandle, polys: &[&Polynomial], j_gens: &[Polynomial]) -> Result<()> {
    same_context(ideal, polys)?;
    same_context(ideal, &j_gens.iter().collect::<Vec<_>>())?;
    if j_gens.is_empty() {
        return Err(Error::IllPosed(
            "at least one J generator is required".into(),
        ));
    }
    Ok(())
}

/// Builds the certificate that `u` satisfies a monic degree-`k` equation of
/// integral dependence over `I`, from `u*J ⊆ I*J` with `J = (j_1..j_k)`.
pub fn strong_test_certificate(
    u: &Polynomial,
    ideal: &IdealHandle,
    j_gens: &[Polynomial],
) -> Result<IntegralDependenceCertificate> {
    check_inputs(ideal, &[u], j_gens)?;
    let ctx = ideal.context();
    let ring = ctx.ambient();
    let rel = relations(ctx, u, None, ideal.generators(), j_gens)?;
    let chi = charpoly(&rel.matrix, ring);
    let value = evaluate(&chi, u);
    let residue = IdealHandle::zero(ctx).reduce(&value)?;
    let valid = residue.is_zero();
    let residue_witness = if valid {
        lift_in(ctx, &value, ctx.defining_ideal())?
    } else {
        None
    };
    Ok(IntegralDependenceCertificate {
        u: u.clone(),
        ideal: ideal.clone(),
        j_gens: j_gens.to_vec(),
        matrix: rel.matrix,
        membership: rel.membership,
        relation_witness: rel.witness,
        charpoly: chi,
        residue,
        residue_witness,
        valid,
    })
}

fn leibniz_det(m: &[Vec<Polynomial>], ring: &Arc<PolyRing>) -> Polynomial {
    fn go(
        m: &[Vec<Polynomial>],
        row: usize,
        used: &mut Vec<bool>,
        sign: bool,
        acc: Polynomial,
        out: &mut Polynomial,
    ) {
        let k = m.len();
        if row == k {
            *out = if sign { &*out - &acc } else { &*out + &acc };
            return;
        }
        for c in 0..k {
            if used[c] || m[row][c].is_zero() {
                continue;
            }
            let flips = used[c + 1..].iter().filter(|&&b| b).count() % 2 == 1;
            used[c] = true;
            go(m, row + 1, used, sign ^ flips, &acc * &m[row][c], out);
            used[c] = false;
        }
    }
    let mut out = ring.zero();
    go(m, 0, &mut vec![false; m.len()], false, ring.one(), &mut out);
    out
}

fn combination(coeffs: &[Polynomial], gens: &[Polynomial], ring: &Arc<PolyRing>) -> Polynomial {
    let mut acc = ring.zero();
    for (a, g) in coeffs.iter().zip(gens) {
        acc = &acc + &(a * g);
    }
    acc
}

fn fail(msg: String) -> Result<()> {
    Err(Error::VerificationFailed(msg))
}

/// Re-verifies a certificate from its data using only ring arithmetic.
pub fn verify_certificate(cert: &IntegralDependenceCertificate) -> Result<()> {
    let ctx = cert.ideal.context();
    let ring = ctx.ambient();
    let k = cert.j_gens.len();
    let defining = ctx.defining_ideal();
    let i_gens = cert.ideal.generators();
    if cert.matrix.len() != k || cert.matrix.iter().any(|r| r.len() != k) {
        return fail("matrix is not k x k".into());
    }
    for s in 0..k {
        for t in 0..k {
            if combination(&cert.membership[s][t], i_gens, ring) != cert.matrix[s][t] {
                return fail(format!(
                    "entry ({s},{t}) is not the stated combination of I"
                ));
            }
        }
        let lhs = &cert.u * &cert.j_gens[s];
        let rhs = &combination(&cert.matrix[s], &cert.j_gens, ring)
            + &combination(&cert.relation_witness[s], defining, ring);
        if lhs != rhs {
            return fail(format!("relation {s} does not hold"));
        }
    }
    if cert.charpoly.len() != k + 1 || !cert.charpoly[k].is_one() {
        return fail("characteristic polynomial is not monic of degree k".into());
    }
    let shifted: Vec<Vec<Polynomial>> = (0..k)
        .map(|s| {
            (0..k)
                .map(|t| {
                    if s == t {
                        &cert.u - &cert.matrix[s][t]
                    } else {
                        -&cert.matrix[s][t]
                    }
                })
                .collect()
        })
        .collect();
    let det = leibniz_det(&shifted, ring);
    if evaluate(&cert.charpoly, &cert.u) != det {
        return fail("characteristic polynomial does not evaluate to det(u*Id - M)".into());
    }
    if cert.valid {
        let Some(w) = &cert.residue_witness else {
            return fail("valid certificate lacks a residue witness".into());
        };
        if combination(w, defining, ring) != det {
            return fail("determinant is not the stated combination of the defining ideal".into());
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct TwoVariableCertificate {
    pub u: Polynomial,
    pub v: Polynomial,
    pub ideal: IdealHandle,
    pub j_gens: Vec<Polynomial>,
    /// `u*j_s = Σ_t (r[s][t]*v + i[s][t]) j_t` modulo `F`.
    pub r: Vec<Vec<Polynomial>>,
    pub i: Vec<Vec<Polynomial>>,
    pub membership: Vec<Vec<Vec<Polynomial>>>,
    pub relation_witness: Vec<Vec<Polynomial>>,
    /// `P(U,V) = Σ_a coeffs[a] * U^a * V^(k-a)`; `coeffs[k] = 1`.
    pub coeffs: Vec<Polynomial>,
    /// `P(u,v)` over `I'.generators()` followed by `F`.
    pub value_witness: Vec<Polynomial>,
}

fn evaluate_homogeneous(coeffs: &[Polynomial], u: &Polynomial, v: &Polynomial) -> Polynomial {
    let k = coeffs.len() - 1;
    let ring = u.ring();
    let mut acc = ring.zero();
    for (a, c) in coeffs.iter().enumerate() {
        acc = &acc + &(&(c * &u.pow(a as u64)) * &v.pow((k - a) as u64));
    }
    acc
}

/// From `J*u ⊆ J*v + J*I'`, the degree-`k` form `P(U,V)` monic in `U` with
/// `P(u,v) ∈ I'`. `P` is the top homogeneous part of
/// `det(U*Id - (r*V + i))`, which equals `det(U*Id - r*V)`.
pub fn two_variable_certificate(
    u: &Polynomial,
    v: &Polynomial,
    ideal: &IdealHandle,
    j_gens: &[Polynomial],
) -> Result<TwoVariableCertificate> {
    check_inputs(ideal, &[u, v], j_gens)?;
    let ctx = ideal.context();
    let ring = ctx.ambient();
    let rel = relations(ctx, u, Some(v), ideal.generators(), j_gens)?;
    let coeffs = charpoly(&rel.v_block, ring);
    let value = evaluate_homogeneous(&coeffs, u, v);
    let mut gens = ideal.generators().to_vec();
    gens.extend(ctx.defining_ideal().iter().cloned());
    let Some(value_witness) = lift_in(ctx, &value, &gens)? else {
        return Err(Error::VerificationFailed("P(u,v) is not in I'".into()));
    };
    Ok(TwoVariableCertificate {
        u: u.clone(),
        v: v.clone(),
        ideal: ideal.clone(),
        j_gens: j_gens.to_vec(),
        r: rel.v_block,
        i: rel.matrix,
        membership: rel.membership,
        relation_witness: rel.witness,
        coeffs,
        value_witness,
    })
}

pub fn verify_two_variable(cert: &TwoVariableCertificate) -> Result<()> {
    let ctx = cert.ideal.context();
    let ring = ctx.ambient();
    let k = cert.j_gens.len();
    let defining = ctx.defining_ideal();
    let i_gens = cert.ideal.generators();
    for s in 0..k {
        for t in 0..k {
            if combination(&cert.membership[s][t], i_gens, ring) != cert.i[s][t] {
                return fail(format!(
                    "entry ({s},{t}) is not the stated combination of I'"
                ));
            }
        }
        let mixed: Vec<Polynomial> = (0..k)
            .map(|t| &(&cert.r[s][t] * &cert.v) + &cert.i[s][t])
            .collect();
        let lhs = &cert.u * &cert.j_gens[s];
        let rhs = &combination(&mixed, &cert.j_gens, ring)
            + &combination(&cert.relation_witness[s], defining, ring);
        if lhs != rhs {
            return fail(format!("relation {s} does not hold"));
        }
    }
    if cert.coeffs.len() != k + 1 || !cert.coeffs[k].is_one() {
        return fail("P is not monic of degree k in U".into());
    }
    // P(u,v) = det(u*Id - v*r)
    let shifted: Vec<Vec<Polynomial>> = (0..k)
        .map(|s| {
            (0..k)
                .map(|t| {
                    let rv = &cert.r[s][t] * &cert.v;
                    if s == t {
                        &cert.u - &rv
                    } else {
                        -&rv
                    }
                })
                .collect()
        })
        .collect();
    let value = leibniz_det(&shifted, ring);
    if evaluate_homogeneous(&cert.coeffs, &cert.u, &cert.v) != value {
        return fail("P(u,v) does not match det(u*Id - v*r)".into());
    }
    let mut gens = i_gens.to_vec();
    gens.extend(defining.iter().cloned());
    if combination(&cert.value_witness, &gens, ring) != value {
        return fail("P(u,v) is not the stated combination of I'".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn ctx(p: u64, vars: &[&str], defining: &[&str]) -> Arc<RingContext> {
        let ring =
            PolyRing::new(PrimeField::new(p).unwrap(), vars, MonomialOrder::Grevlex).unwrap();
        let f = defining
            .iter()
            .map(|s| crate::parse::parse_poly(s, &ring).unwrap())
            .collect();
        RingContext::quotient(ring, f).unwrap()
    }

    fn polys(c: &RingContext, gens: &[&str]) -> Vec<Polynomial> {
        gens.iter().map(|s| c.parse(s).unwrap()).collect()
    }

    #[test]
    fn charpoly_matches_leibniz() {
        let c = ctx(5, &["x", "y"], &[]);
        let ring = c.ambient();
        let m: Vec<Vec<Polynomial>> = vec![
            polys(&c, &["x", "y", "1"]),
            polys(&c, &["0", "x*y", "2"]),
            polys(&c, &["y^2", "3", "x+y"]),
        ];
        let chi = charpoly(&m, ring);
        assert!(chi[3].is_one());
        for t in ["x", "y^3 + 1", "2*x*y"] {
            let t = c.parse(t).unwrap();
            let shifted: Vec<Vec<Polynomial>> = (0..3)
                .map(|s| {
                    (0..3)
                        .map(|r| if s == r { &t - &m[s][r] } else { -&m[s][r] })
                        .collect()
                })
                .collect();
            assert_eq!(evaluate(&chi, &t), leibniz_det(&shifted, ring));
        }
    }

    #[test]
    fn fermat_cubic_certificate() {
        let c = ctx(7, &["z", "u", "v"], &["z^3+u^3+v^3"]);
        let i = IdealHandle::new(&c, polys(&c, &["u", "v"])).unwrap();
        let cert =
            strong_test_certificate(&c.parse("z^2").unwrap(), &i, &polys(&c, &["z", "u", "v"]))
                .unwrap();
        assert!(cert.valid);
        assert!(cert.residue.is_zero());
        verify_certificate(&cert).unwrap();
    }

    #[test]
    fn member_gives_certificate() {
        let c = ctx(5, &["x", "y"], &[]);
        let i = IdealHandle::new(&c, polys(&c, &["x"])).unwrap();
        let cert =
            strong_test_certificate(&c.parse("x*y").unwrap(), &i, &polys(&c, &["x", "y"])).unwrap();
        assert!(cert.valid);
        verify_certificate(&cert).unwrap();
    }

    #[test]
    fn hypothesis_failure_names_generator() {
        let c = ctx(7, &["z", "u", "v"], &["z^3+u^3+v^3"]);
        let i = IdealHandle::new(&c, polys(&c, &["u", "v"])).unwrap();
        let err = strong_test_certificate(&c.parse("z").unwrap(), &i, &polys(&c, &["u", "z"]))
            .unwrap_err();
        assert!(
            matches!(err, Error::HypothesisFails { index: 1, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let c = ctx(7, &["z", "u", "v"], &["z^3+u^3+v^3"]);
        let i = IdealHandle::new(&c, polys(&c, &["u", "v"])).unwrap();
        let mut cert =
            strong_test_certificate(&c.parse("z^2").unwrap(), &i, &polys(&c, &["z", "u", "v"]))
                .unwrap();
        cert.charpoly[0] = &cert.charpoly[0] + &c.parse("u").unwrap();
        assert!(verify_certificate(&cert).is_err());
    }

    #[test]
    fn two_variable_cases() {
        let c = ctx(5, &["x", "y"], &[]);
        let i = IdealHandle::new(&c, polys(&c, &["x^2"])).unwrap();
        // u = x*y lies in (v) with v = x: P = U - y*V
        let cert = two_variable_certificate(
            &c.parse("x*y").unwrap(),
            &c.parse("x").unwrap(),
            &i,
            &polys(&c, &["1"]),
        )
        .unwrap();
        assert_eq!(
            cert.coeffs
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>(),
            ["4*y", "1"]
        );
        verify_two_variable(&cert).unwrap();
        // v = 0 degenerates to the one-variable case
        let cert = two_variable_certificate(
            &c.parse("x^2").unwrap(),
            &c.parse("0").unwrap(),
            &i,
            &polys(&c, &["x", "y"]),
        )
        .unwrap();
        verify_two_variable(&cert).unwrap();

        let f = ctx(7, &["z", "u", "v"], &["z^3+u^3+v^3"]);
        let ip = IdealHandle::new(&f, polys(&f, &["v"])).unwrap();
        let cert = two_variable_certificate(
            &f.parse("z^2").unwrap(),
            &f.parse("u").unwrap(),
            &ip,
            &polys(&f, &["z", "u", "v"]),
        )
        .unwrap();
        verify_two_variable(&cert).unwrap();
    }
}
