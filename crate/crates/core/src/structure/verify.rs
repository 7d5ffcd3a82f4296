//! Independent re-checking of a certificate, with an optional exhaustive pass
//! over every projection of the configuration with simplex image.

use crate::alpha::minimal_direct_quotient;
use crate::cayley::{decompose_along, enumerate_simplex_projections, is_join_type, join_type_wrt, CayleyStructure};
use crate::config::PointConfig;
use crate::linalg::{kernel_basis_int, RationalSubspace};
use crate::sampling::SamplingParams;
use crate::tangency::{defect_oracle, TangencyProblem};

use super::{fiber_map, kernel_space, rows_in, StructureCertificate};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<(String, bool)>,
    /// Human-readable remarks, such as skipped checks.
    pub notes: Vec<String>,
    /// Number of projections examined by the exhaustive pass.
    pub projections_examined: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(n, _)| n == name).map(|(_, ok)| *ok)
    }

    fn push(&mut self, name: &str, ok: bool) {
        self.checks.push((name.to_string(), ok));
    }
}

fn sorted_partition(parts: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.sort_unstable();
            q
        })
        .collect();
    out.sort();
    out
}

/// Re-checks `cert` against `a` from scratch. The oracle is rerun with seed
/// `cert.seed + 1`. With `exhaustive` and `#a ≤ limit`, every projection with
/// simplex image is enumerated to check the lower bound `r′ − c′ ≤ δ`, the
/// kernel chain for competing certificates, and stability of join type under
/// coarsening.
pub fn verify_certificate(a: &PointConfig, cert: &StructureCertificate, exhaustive: bool, limit: usize) -> VerifyReport {
    let mut report = VerifyReport::default();
    let n = a.dim();
    let shapes_ok = cert.n == n
        && cert.r >= cert.c
        && cert.pi1.domain_rank() == n
        && cert.pi1.codomain_rank() + cert.c == n
        && cert.pi2.domain_rank() == cert.pi1.codomain_rank()
        && cert.pi2.codomain_rank() == cert.r
        && cert.p.domain_rank() + cert.r == n
        && cert.p.codomain_rank() + cert.r + cert.c == n;
    report.push("shapes", shapes_ok);
    report.push("delta_eq_r_minus_c", cert.r >= cert.c && cert.delta == cert.r - cert.c);
    let mut covered: Vec<usize> = cert.grouping.iter().flatten().copied().collect();
    covered.sort_unstable();
    report.push("grouping_is_partition", covered == (0..a.len()).collect::<Vec<_>>());
    if !shapes_ok {
        report.notes.push("map shapes are inconsistent; structural checks skipped".into());
        return report;
    }
    report.push("pi1_surjective", cert.pi1.is_surjective());
    report.push("pi1_kernel_rank", cert.pi1.kernel().rows() == cert.c);
    report.push("kernel_chain", rows_in(&cert.pi1.kernel(), &kernel_space(&cert.pi())));

    let pi = cert.pi();
    let decomposition = decompose_along(a, &pi);
    let simplex_ok = decomposition
        .as_ref()
        .map(|d| sorted_partition(&d.parts) == sorted_partition(&cert.grouping))
        .unwrap_or(false);
    report.push("simplex_image", simplex_ok);
    report.push("join_type_wrt", join_type_wrt(a, &cert.pi1, &cert.pi2).unwrap_or(false));
    let p_ok = decomposition
        .as_ref()
        .ok()
        .and_then(|d| fiber_map(d, &cert.pi1, &cert.pi2).ok())
        .map(|p| p == cert.p)
        .unwrap_or(false);
    report.push("p_matches", p_ok);

    let fresh = SamplingParams { seed: cert.params.seed.wrapping_add(1), ..cert.params };
    let oracle = defect_oracle(&TangencyProblem::new(a.clone(), fresh));
    let oracle_ok = match oracle.delta() {
        Some(d) => d == cert.delta,
        None => cert.delta == 0 && cert.r == 0,
    };
    report.push("oracle_agrees", oracle_ok);

    if exhaustive {
        if a.len() > limit {
            report.notes.push(format!("exhaustive checks skipped: {} points exceed limit {limit}", a.len()));
        } else {
            // an empty dual has defect #A − 1 by the usual convention dim ∅ = −1
            let delta = oracle.delta().unwrap_or(a.len() - 1);
            match enumerate_simplex_projections(a, limit) {
                Ok(all) => exhaustive_checks(&mut report, cert, &all, delta, oracle.delta().is_some()),
                Err(e) => {
                    report.push("exhaustive", false);
                    report.notes.push(format!("enumeration failed: {e}"));
                }
            }
        }
    }
    report
}

fn exhaustive_checks(
    report: &mut VerifyReport,
    cert: &StructureCertificate,
    all: &[CayleyStructure],
    delta: usize,
    check_minimality: bool,
) {
    let n = cert.n;
    let ker_pi1 = kernel_space(&cert.pi1);
    let ker_pi = kernel_space(&cert.pi());
    let mut lower_ok = true;
    let mut minimal_ok = true;
    let mut competitors = 0;
    for cs in all {
        let spans = cs.part_spans();
        let w = minimal_direct_quotient(n, &spans);
        let bound = cs.r as i64 - w.dim() as i64;
        if bound > delta as i64 {
            lower_ok = false;
            report.notes.push(format!("projection with parts {:?} gives r − c = {bound} > δ = {delta}", cs.parts));
        }
        if check_minimality && bound == delta as i64 {
            // the only quotient for this projection that can satisfy δ = r′ − c′
            competitors += 1;
            let ker_pi_prime = RationalSubspace::span_int(&kernel_basis_int(cs.pi.matrix()));
            let chain = ker_pi1.is_subspace_of(&w) && w.is_subspace_of(&ker_pi_prime) && ker_pi_prime.is_subspace_of(&ker_pi);
            if !chain {
                minimal_ok = false;
                report.notes.push(format!("projection with parts {:?} breaks the kernel chain", cs.parts));
            }
        }
    }
    report.push("lower_bound", lower_ok);
    if check_minimality {
        report.push("minimality", minimal_ok);
    }
    report.push("coarsening", coarsening_ok(all));
    report.projections_examined = all.len();
    report.notes.push(format!(
        "exhaustive pass examined {} projections, {} competing certificates",
        all.len(),
        competitors
    ));
}

/// If a partition is of join type, so is every coarser one.
fn coarsening_ok(all: &[CayleyStructure]) -> bool {
    let join: Vec<bool> = all.iter().map(|cs| is_join_type(&cs.fibers)).collect();
    let labels: Vec<Vec<usize>> = all.iter().map(CayleyStructure::labels).collect();
    for (i, fine) in labels.iter().enumerate() {
        if !join[i] {
            continue;
        }
        for (j, coarse) in labels.iter().enumerate() {
            if i != j && refines(fine, coarse) && !join[j] {
                return false;
            }
        }
    }
    true
}

/// Whether the partition `fine` refines `coarse` (both given as labels).
fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    let mut map: Vec<Option<usize>> = vec![None; fine.len()];
    for (f, c) in fine.iter().zip(coarse) {
        match map[*f] {
            Some(x) if x != *c => return false,
            _ => map[*f] = Some(*c),
        }
    }
    true
}
