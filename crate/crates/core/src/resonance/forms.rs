//! Closed-form perfect-tunnelling conditions and their audits.
//!
//! Each closed form is checked against the composed transfer matrix, which is
//! the reference: a form "passes" only if it vanishes at every numerically
//! found perfect-tunnelling point and every one of its own roots tunnels.

use std::f64::consts::PI;

use serde::Serialize;

use super::search::{find_zeros, symmetric_transfer, SearchOptions};
use crate::error::{Error, Result};
use crate::transfer::transmission;

/// A residual counts as vanishing below this magnitude.
pub const AGREE_TOL: f64 = 1e-9;
/// A root counts as perfect tunnelling when `1 − T` is below this.
const TUNNEL_TOL: f64 = 1e-10;

/// Perfect-tunnelling residual for an equal pair, from `|m22| = 1`:
/// `(4+λ²) + (4−λ²)·cos θ + 4λ·sin θ` with `θ = 2k(x2 − x1)`.
///
/// Nonnegative; it touches zero once per period at `θ = π + 2·atan(λ/2)`.
/// At `λ = 0` it only vanishes at `θ = π` although the free pair always
/// transmits, so `λ = 0` is outside its useful domain.
pub fn qbs_residual_n2(lambda: f64, theta: f64) -> f64 {
    let l2 = lambda * lambda;
    (4.0 + l2) + (4.0 - l2) * theta.cos() + 4.0 * lambda * theta.sin()
}

/// Commonly quoted pair condition `tan(2k(x1−x2)) = 4λ²/(4+λ²)` as a residual
/// in `θ = 2k(x2 − x1)`. Kept for auditing; it does not locate the pair's
/// perfect-tunnelling points.
pub fn qbs_residual_n2_printed(lambda: f64, theta: f64) -> Result<f64> {
    if theta.cos().abs() < 1e-12 {
        return Err(Error::TanPole(theta));
    }
    let l2 = lambda * lambda;
    Ok((-theta).tan() - 4.0 * l2 / (4.0 + l2))
}

/// Symmetric equal-strength triple (positions `0, x2, 2·x2`):
/// `cos(2kx2) − (2 + λ² + 4λ·sin(2kx2)) / (λ² − 4)`.
pub fn qbs_residual_n3(lambda: f64, kx2: f64) -> Result<f64> {
    let l2 = lambda * lambda;
    if (l2 - 4.0).abs() < 1e-12 {
        return Err(Error::Pole);
    }
    let s2 = 2.0 * kx2;
    Ok(s2.cos() - (2.0 + l2 + 4.0 * lambda * s2.sin()) / (l2 - 4.0))
}

/// Quoted closed form for the symmetric equal-strength quadruple
/// (positions `0, x2, 2·x2, 3·x2`):
/// `4cos(2kx2) + 6λ²sin(kx2) − λ·tan(kx2)·(2 − 12cos²(kx2) − λ²sin²(kx2))`.
pub fn qbs_residual_n4(lambda: f64, kx2: f64) -> Result<f64> {
    let (s, c) = kx2.sin_cos();
    if c.abs() < 1e-12 {
        return Err(Error::TanPole(kx2));
    }
    let l2 = lambda * lambda;
    Ok(4.0 * (2.0 * kx2).cos() + 6.0 * l2 * s
        - lambda * (s / c) * (2.0 - 12.0 * c * c - l2 * s * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditedRoot {
    /// Phase in the form's own variable.
    pub phase: f64,
    pub transmission: f64,
    /// Residual of the audited form at this phase (`None` at a pole).
    pub residual: Option<f64>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormAudit {
    pub form: &'static str,
    /// Perfect-tunnelling points from the transfer matrix, with the form's residual.
    pub at_oracle_roots: Vec<AuditedRoot>,
    /// The form's own roots, with the transfer-matrix transmission there.
    pub at_form_roots: Vec<AuditedRoot>,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairAudit {
    pub lambda: f64,
    pub derived: FormAudit,
    pub printed: FormAudit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricAudit {
    pub n: usize,
    pub lambda: f64,
    pub printed: FormAudit,
}

/// Sign-change roots of `f` on `(lo, hi)`, refined by bisection. Brackets that
/// straddle a pole are dropped by requiring a small residual at the end.
fn sign_change_roots(f: impl Fn(f64) -> Option<f64>, lo: f64, hi: f64, grid: usize) -> Vec<f64> {
    let step = (hi - lo) / grid as f64;
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..grid {
        let x = lo + step * i as f64;
        let Some(fx) = f(x) else {
            prev = None;
            continue;
        };
        if fx == 0.0 {
            roots.push(x);
        } else if let Some((xp, fp)) = prev {
            if fp != 0.0 && fp.signum() != fx.signum() {
                let (mut a, mut b, fa_neg) = (xp, x, fp < 0.0);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    match f(m) {
                        Some(fm) if (fm < 0.0) == fa_neg => a = m,
                        Some(_) => b = m,
                        None => break,
                    }
                }
                let r = 0.5 * (a + b);
                if f(r).is_some_and(|v| v.abs() < AGREE_TOL) {
                    roots.push(r);
                }
            }
        }
        prev = Some((x, fx));
    }
    roots
}

fn oracle_phases(n: usize, lambda: f64, opts: SearchOptions) -> Result<Vec<f64>> {
    let margin = 1e-9;
    super::search::symmetric_phase_roots(n, lambda, margin, PI - margin, opts)
        .map(|v| v.into_iter().map(|(s, _, _)| s).collect())
}

fn tunnels(n: usize, lambda: f64, s: f64) -> (f64, bool) {
    let t = transmission(&symmetric_transfer(n, lambda, s));
    (t, (1.0 - t).abs() <= TUNNEL_TOL)
}

fn audit_form(
    form: &'static str,
    n: usize,
    lambda: f64,
    oracle: &[f64],
    to_phase: impl Fn(f64) -> f64,
    from_phase: impl Fn(f64) -> f64,
    residual: impl Fn(f64) -> Option<f64>,
    form_roots: Vec<f64>,
) -> FormAudit {
    let at_oracle_roots: Vec<AuditedRoot> = oracle
        .iter()
        .map(|&s| {
            let phase = to_phase(s);
            let r = residual(phase);
            AuditedRoot {
                phase,
                transmission: tunnels(n, lambda, s).0,
                residual: r,
                agrees: r.is_some_and(|v| v.abs() <= AGREE_TOL),
            }
        })
        .collect();
    let at_form_roots: Vec<AuditedRoot> = form_roots
        .into_iter()
        .map(|phase| {
            let (t, ok) = tunnels(n, lambda, from_phase(phase));
            AuditedRoot { phase, transmission: t, residual: residual(phase), agrees: ok }
        })
        .collect();
    let passes = at_oracle_roots.iter().chain(&at_form_roots).all(|r| r.agrees);
    FormAudit { form, at_oracle_roots, at_form_roots, passes }
}

/// Audits both pair conditions at fixed `lambda` over `θ ∈ (0, 2π)`.
pub fn audit_pair(lambda: f64, opts: SearchOptions) -> Result<PairAudit> {
    let oracle = oracle_phases(2, lambda, opts)?;
    let (lo, hi) = (1e-9, 2.0 * PI - 1e-9);

    let derived_roots = find_zeros(|t| qbs_residual_n2(lambda, t), lo, hi, SearchOptions {
        grid: opts.grid,
        tol: AGREE_TOL,
    })?
    .0
    .into_iter()
    .map(|(t, _, _)| t)
    .collect();
    let derived = audit_form(
        "pair_derived",
        2,
        lambda,
        &oracle,
        |s| 2.0 * s,
        |t| 0.5 * t,
        |t| Some(qbs_residual_n2(lambda, t)),
        derived_roots,
    );

    let printed_fn = |t: f64| qbs_residual_n2_printed(lambda, t).ok();
    let printed_roots = sign_change_roots(printed_fn, lo, hi, opts.grid);
    let printed = audit_form(
        "pair_printed",
        2,
        lambda,
        &oracle,
        |s| 2.0 * s,
        |t| 0.5 * t,
        printed_fn,
        printed_roots,
    );
    Ok(PairAudit { lambda, derived, printed })
}

/// Audits the quoted closed form for the symmetric equal-strength triple
/// (`n = 3`) or quadruple (`n = 4`) at fixed `lambda` over `kx2 ∈ (0, π)`.
pub fn audit_symmetric(n: usize, lambda: f64, opts: SearchOptions) -> Result<SymmetricAudit> {
    let residual: fn(f64, f64) -> Result<f64> = match n {
        3 => qbs_residual_n3,
        4 => qbs_residual_n4,
        _ => return Err(Error::InvalidInput(format!("no closed form for n = {n}"))),
    };
    let oracle = oracle_phases(n, lambda, opts)?;
    let f = |s: f64| residual(lambda, s).ok();
    let form_roots = sign_change_roots(f, 1e-9, PI - 1e-9, opts.grid);
    let name = if n == 3 { "triple_printed" } else { "quadruple_printed" };
    let printed = audit_form(name, n, lambda, &oracle, |s| s, |s| s, f, form_roots);
    Ok(SymmetricAudit { n, lambda, printed })
}
