//! Named constructions and parameter validation: the balanced-colored
//! family (top rainbow skeleta for the first `s` members, one lower for
//! the rest), the empty-Kneser-graph counterexample family, and the
//! theorem-level parameter reports.

use serde::Serialize;

use crate::complex::{
    rainbow_complex, Coloring, ComplexFamily, Parameters, SimplicialComplex,
};
use crate::error::{Error, Result};

/// `K_i = ColΔ^{(k)}` for `i <= s`, `K_i = ColΔ^{(k-1)}` for `i > s`, on
/// the contiguous coloring with `k+1` blocks of `2r-1` vertices.
pub fn make_bct_family(r: u32, k: u32, s: u32) -> Result<(Parameters, Coloring, ComplexFamily)> {
    let params = bct_parameters(r, k, s)?;
    let coloring = Coloring::contiguous_blocks(r, k)?;
    let top = rainbow_complex(&coloring, k as i32);
    let lower = rainbow_complex(&coloring, k as i32 - 1);
    let members =
        (0..r).map(|i| if i < s { top.clone() } else { lower.clone() }).collect();
    Ok((params, coloring, ComplexFamily::new(members)?))
}

/// Solves `r(k-1)+s = (r-1)d` for `d` and fixes `m = (2r-1)(k+1)`.
pub fn bct_parameters(r: u32, k: u32, s: u32) -> Result<Parameters> {
    if r < 2 || s == 0 || s > r {
        return Err(Error::InvalidInput(format!("need r >= 2 and 0 < s <= r, got r={r}, s={s}")));
    }
    let num = r as i64 * (k as i64 - 1) + s as i64;
    if num <= 0 || num % (r as i64 - 1) != 0 {
        return Err(Error::InvalidInput(format!(
            "no integer d >= 1 satisfies r(k-1)+s = (r-1)d for r={r}, k={k}, s={s}"
        )));
    }
    let d = (num / (r as i64 - 1)) as u32;
    let params = Parameters { r, d, k, s, m: (2 * r - 1) * (k + 1) };
    params.validate_ctcruc()?;
    Ok(params)
}

/// The family with `K_i = Δ^{(k)}_[m]` on `m = (k+2)(r-s+1)+1` vertices:
/// its Kneser graph is empty yet `(r,s)`-unavoidability fails.
pub fn make_remark_counterexample(r: u32, s: u32, k: u32) -> Result<(u32, ComplexFamily)> {
    if r < 2 || s == 0 || s > r {
        return Err(Error::InvalidInput(format!("need r >= 2 and 0 < s <= r, got r={r}, s={s}")));
    }
    let m = (k + 2) * (r - s + 1) + 1;
    let member = SimplicialComplex::full_simplex(m)?.skeleton(k as i32);
    let members = vec![member; r as usize];
    Ok((m, ComplexFamily::new(members)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub theorem: String,
    pub checks: Vec<IdentityCheck>,
    /// All `(s, d)` pairs compatible with the given `(r, k)` under the
    /// colored identity.
    pub compatible_sd: Vec<(u32, u32)>,
    /// For the monochromatic identity: feasible `k` values are unpinned,
    /// so we list every `(s, k)` with a balanced family shape for `d`.
    pub feasible_k: Vec<u32>,
    pub ok: bool,
}

/// Enumerates `(s, d)` with `0 < s <= r`, `d >= 1` solving `r(k-1)+s = (r-1)d`.
pub fn compatible_sd(r: u32, k: u32, d_max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for s in 1..=r {
        for d in 1..=d_max {
            if r as i64 * (k as i64 - 1) + s as i64 == (r as i64 - 1) * d as i64 {
                out.push((s, d));
            }
        }
    }
    out
}

pub fn validate_parameters(params: &Parameters, theorem: &str) -> Result<ValidationReport> {
    let mut checks = Vec::new();
    let pp = Parameters::prime_power(params.r);
    checks.push(IdentityCheck {
        name: "r = p^nu".into(),
        holds: pp.is_some(),
        detail: match pp {
            Some((p, nu)) => format!("r = {} = {p}^{nu}", params.r),
            None => format!("r = {} is not a prime power", params.r),
        },
    });
    let mut feasible_k = Vec::new();
    match theorem {
        "ctcruc" | "bct" => {
            let identity = params.validate_ctcruc();
            checks.push(IdentityCheck {
                name: "r(k-1)+s = (r-1)d and m = (2r-1)(k+1)".into(),
                holds: identity.is_ok(),
                detail: identity.err().map(|e| e.to_string()).unwrap_or_else(|| "holds".into()),
            });
        }
        "ttrsu" => {
            let identity = params.validate_ttrsu();
            checks.push(IdentityCheck {
                name: "N = (r-1)(d+2)-s+1".into(),
                holds: identity.is_ok(),
                detail: identity.err().map(|e| e.to_string()).unwrap_or_else(|| "holds".into()),
            });
            // k is not pinned by the monochromatic statement; list the k
            // for which a balanced family can exist on [m]
            for k in 0..params.m {
                if k + 1 <= params.m {
                    feasible_k.push(k);
                }
            }
        }
        other => {
            return Err(Error::InvalidInput(format!("unknown theorem tag {other}")));
        }
    }
    let ok = checks.iter().all(|c| c.holds);
    Ok(ValidationReport {
        theorem: theorem.to_string(),
        checks,
        compatible_sd: compatible_sd(params.r, params.k, 100),
        feasible_k,
        ok,
    })
}
