use serde_json::{json, Value};

use crate::bloch::{self, bloch_expand, gell_mann_basis, optimize_diag_2sector, scan_bases};
use crate::cli::{Checks, RunReport, Worst};
use crate::decomp::{joint_diag, joint_svd, reduction_spectra_gap, schmidt};
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::majorization::{inequality_chain, majorization_witness, offdiag_2sector_closed_form, offdiag_2sector_exact};
use crate::purity;
use crate::random::HaarSampler;
use crate::state::{apply_local, outer, overlap, reduce_rank1, BipartiteState, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelftestMode {
    Quick,
    Full,
}

struct Scale {
    decomp_states: usize,
    decomp_dims: &'static [usize],
    diag_dims: &'static [usize],
    purity_tuples: usize,
    bloch_dims: &'static [usize],
    bloch_states: usize,
    bloch_unitaries: usize,
    scan_states: usize,
    scan_samples: usize,
    opt_states: usize,
    opt_restarts: usize,
    appendix_states: usize,
    appendix_bases: usize,
}

const QUICK: Scale = Scale {
    decomp_states: 10,
    decomp_dims: &[2, 3, 4, 6, 8],
    diag_dims: &[2, 3, 4, 6],
    purity_tuples: 20,
    bloch_dims: &[2, 3, 4],
    bloch_states: 3,
    bloch_unitaries: 10,
    scan_states: 2,
    scan_samples: 100,
    opt_states: 1,
    opt_restarts: 2,
    appendix_states: 5,
    appendix_bases: 3,
};

const FULL: Scale = Scale {
    decomp_states: 100,
    decomp_dims: &[2, 3, 4, 6, 8],
    diag_dims: &[2, 3, 4, 6, 8],
    purity_tuples: 100,
    bloch_dims: &[2, 3, 4, 6, 8],
    bloch_states: 10,
    bloch_unitaries: 50,
    scan_states: 20,
    scan_samples: 500,
    opt_states: 20,
    opt_restarts: 3,
    appendix_states: 100,
    appendix_bases: 20,
};

const SMALL_DIMS: [usize; 3] = [2, 3, 4];

fn schmidt_round_trip(rng: &mut HaarSampler, s: &Scale, c: &mut Checks) -> Result<Value> {
    let (mut recon, mut purity) = (Worst::new(), Worst::new());
    for &d in s.decomp_dims {
        for _ in 0..s.decomp_states {
            let psi = rng.state(d, d)?;
            recon.add(max_abs_diff(&schmidt(&psi).reconstruct_grid(), psi.amplitudes()));
            purity.add((psi.purity(Side::TracedOverA) - psi.purity(Side::TracedOverB)).abs());
        }
    }
    c.gap("reconstruction", recon.0, 1e-9);
    c.gap("purity_equal", purity.0, 1e-10);
    Ok(json!({ "states": s.decomp_states * s.decomp_dims.len() }))
}

fn joint_svd_suite(rng: &mut HaarSampler, s: &Scale, c: &mut Checks) -> Result<Value> {
    let mut w = [Worst::new(); 5];
    for &d in s.decomp_dims {
        for _ in 0..s.decomp_states {
            let (psi, phi) = (rng.state(d, d)?, rng.state(d, d)?);
            let dec = joint_svd(&psi, &phi, Side::TracedOverB)?;
            let (p, f) = dec.reconstruct();
            w[0].add(dec.duality_residual());
            w[1].add((dec.mu.iter().sum::<f64>() - 1.0).abs());
            w[2].add((dec.nu.iter().sum::<f64>() - 1.0).abs());
            w[3].add((dec.overlap_sum() - overlap(&psi, &phi)?).norm());
            w[4].add(
                max_abs_diff(p.amplitudes(), psi.amplitudes()).max(max_abs_diff(f.amplitudes(), phi.amplitudes())),
            );
        }
    }
    c.gap("duality", w[0].0, 1e-9);
    c.gap("weights_mu", w[1].0, 1e-10);
    c.gap("weights_nu", w[2].0, 1e-10);
    c.gap("overlap", w[3].0, 1e-9);
    c.gap("reconstruction", w[4].0, 1e-9);
    Ok(json!({ "pairs": s.decomp_states * s.decomp_dims.len() }))
}

fn joint_diag_suite(rng: &mut HaarSampler, s: &Scale, c: &mut Checks) -> Result<Value> {
    let mut w = [Worst::new(); 4];
    let (mut accepted, mut rejected) = (0, 0);
    for &d in s.diag_dims {
        for _ in 0..s.decomp_states {
            let (psi, phi) = (rng.state(d, d)?, rng.state(d, d)?);
            match joint_diag(&psi, &phi, Side::TracedOverB) {
                Ok(dec) => {
                    accepted += 1;
                    let (p, f) = dec.reconstruct();
                    w[0].add(dec.s_duality_residual().max(dec.t_duality_residual()));
                    w[1].add(dec.weight_residual());
                    w[2].add(
                        max_abs_diff(p.amplitudes(), psi.amplitudes())
                            .max(max_abs_diff(f.amplitudes(), phi.amplitudes())),
                    );
                    w[3].add(reduction_spectra_gap(&psi, &phi)?);
                }
                Err(Error::NotDiagonalizable(_)) => rejected += 1,
                Err(e) => return Err(e),
            }
        }
    }
    let a = BipartiteState::basis(2, 2, 0, 0)?;
    let b = BipartiteState::basis(2, 2, 1, 0)?;
    let defective_accepted =
        usize::from(!matches!(joint_diag(&a, &b, Side::TracedOverB), Err(Error::NotDiagonalizable(_))));
    c.gap("dual_bases", w[0].0, 1e-8);
    c.gap("weights", w[1].0, 1e-8);
    c.gap("reconstruction", w[2].0, 1e-8);
    c.gap("spectra", w[3].0, 1e-8);
    c.zero("defective_accepted", defective_accepted);
    c.zero("no_pair_accepted", usize::from(accepted == 0));
    Ok(json!({ "accepted": accepted, "rejected": rejected }))
}

fn purity_suite(rng: &mut HaarSampler, s: &Scale, c: &mut Checks) -> Result<Value> {
    let mut w = [Worst::new(); 3];
    for d in SMALL_DIMS {
        for _ in 0..s.purity_tuples {
            let t = (0..4).map(|_| rng.state(d, d)).collect::<Result<Vec<_>>>()?;
            w[0].add(purity::reduction_square_identity(&t[0], &t[1])?.abs_gap);
            w[1].add(purity::cross_purity_identity(&t[0], &t[1])?.abs_gap);
            w[2].add(purity::four_state_identity(&t[0], &t[1], &t[2], &t[3])?.abs_gap);
        }
    }
    c.gap("reduction_square", w[0].0, 1e-10);
    c.gap("cross_purity", w[1].0, 1e-9);
    c.gap("four_state", w[2].0, 1e-10);
    Ok(json!({ "tuples": s.purity_tuples * SMALL_DIMS.len() }))
}

fn bloch_budget(rng: &mut HaarSampler, s: &Scale, c: &mut Checks) -> Result<Value> {
    let mut w = [Worst::new(); 3];
    for &d in s.bloch_dims {
        let basis = gell_mann_basis(d)?;
        for _ in 0..s.bloch_states {
            let psi = rng.state(d, d)?;
            let r = bloch::sector_contributions_with(&psi, &basis, "current")?;
            w[0].add((r.lengths().total() - (d * d) as f64 * psi.norm().powi(4)).abs());
            let phi = rng.state(d, d)?;
            w[1].add((bloch_expand(&outer(&psi, &phi)?, &basis)?.total_length() - (d * d) as f64).abs());
            for _ in 0..s.bloch_unitaries {
                let (ua, ub) = rng.local_pair(d, d)?;
                let moved = bloch::sector_contributions_with(&apply_local(&psi, &ua, &ub)?, &basis, "moved")?;
                w[2].add(moved.lengths().max_diff(&r.lengths()));
            }
        }
    }
    c.gap("sector_sum", w[0].0, 1e-8);
    c.gap("rank_one_total", w[1].0, 1e-8);
    c.gap("local_unitary_invariance", w[2].0, 1e-8);
    Ok(json!({ "states": s.bloch_states * s.bloch_dims.len(), "unitaries_per_state": s.bloch_unitaries }))
}

fn schmidt_structure(rng: &mut HaarSampler, s: &Scale, c: &mut Checks) -> Result<Value> {
    let mut w = [Worst::new(); 2];
    for &d in s.bloch_dims {
        for _ in 0..s.bloch_states {
            let psi = rng.state(d, d)?;
            let r = bloch::schmidt_basis_contributions(&psi)?;
            w[0].add(r.offdiag_1);
            w[1].add((r.offdiag_2 - bloch::concurrence_sq(&psi) / 2.0).abs());
        }
    }
    let bell = bloch::sector_contributions(&BipartiteState::maximally_entangled(2)?)?;
    let expected = bloch::SectorLengths { len0: 1.0, len1a: 0.0, len1b: 0.0, len2: 3.0 };
    c.gap("offdiag_1", w[0].0, 1e-9);
    c.gap("offdiag_2_half_concurrence", w[1].0, 1e-8);
    c.gap("bell_sectors", bell.lengths().max_diff(&expected), 1e-12);
    c.gap("bell_offdiag_2", (bell.offdiag_2 - 0.5).abs(), 1e-12);
    Ok(json!({ "bell": bell }))
}

fn extremality(rng: &mut HaarSampler, s: &Scale, c: &mut Checks) -> Result<Value> {
    let (mut violations, mut excess, mut margin) = (0, f64::NEG_INFINITY, f64::INFINITY);
    let mut opt_gap = Worst::new();
    let mut opt_excess = Worst::new();
    for d in SMALL_DIMS {
        for i in 0..s.scan_states {
            let psi = rng.state(d, d)?;
            let pairs = (0..s.scan_samples).map(|_| rng.local_pair(d, d)).collect::<Result<Vec<_>>>()?;
            let scan = scan_bases(&psi, &pairs)?;
            violations += scan.violations;
            excess = excess.max(scan.max_diag_2_excess);
            margin = margin.min(scan.min_offdiag_2_margin);
            if i < s.opt_states {
                let opt = optimize_diag_2sector(&psi, s.opt_restarts, 200, d as u64 + i as u64)?;
                opt_gap.add(opt.gap.abs());
                opt_excess.add((-opt.gap).max(0.0));
            }
        }
    }
    c.zero("scan_violations", violations);
    c.gap("optimizer_gap", opt_gap.0, 1e-6);
    c.gap("optimizer_excess", opt_excess.0, 1e-8);
    Ok(json!({
        "states": s.scan_states * SMALL_DIMS.len(),
        "samples_per_state": s.scan_samples,
        "max_diag_2_excess": excess,
        "min_offdiag_2_margin": margin,
    }))
}

fn appendix_chain(rng: &mut HaarSampler, s: &Scale, c: &mut Checks) -> Result<(Value, f64)> {
    let (mut not_majorized, mut broken, mut loose) = (0, 0, 0);
    let mut w = [Worst::new(); 3];
    let mut literal = Worst::new();
    for d in SMALL_DIMS {
        for _ in 0..s.appendix_states {
            let psi = rng.state(d, d)?;
            for _ in 0..s.appendix_bases {
                let (ua, ub) = rng.local_pair(d, d)?;
                let v = apply_local(&psi, &ua, &ub)?;
                for side in [Side::TracedOverB, Side::TracedOverA] {
                    let wit = majorization_witness(&v, side)?;
                    not_majorized += usize::from(!wit.majorizes);
                    w[0].add(wit.stochastic_defect);
                }
                let chain = inequality_chain(&v)?;
                broken += usize::from(!chain.holds);
                loose += usize::from(!chain.tight_in_schmidt_basis);
                w[1].add(chain.schmidt_gap.abs());
                w[2].add((offdiag_2sector_exact(&v) - chain.bloch_offdiag_2).abs());
                literal.add((offdiag_2sector_closed_form(&v) - chain.bloch_offdiag_2).abs());
            }
        }
    }
    c.zero("majorization_failures", not_majorized);
    c.gap("transfer_doubly_stochastic", w[0].0, 1e-10);
    c.gap("closed_form_vs_bloch", w[2].0, 1e-8);
    c.zero("chain_violations", broken);
    c.zero("chain_not_tight", loose);
    c.gap("chain_schmidt_gap", w[1].0, 1e-9);
    Ok((json!({ "states": s.appendix_states * SMALL_DIMS.len(), "bases_per_state": s.appendix_bases }), literal.0))
}

/// Runs every property suite with seeds derived from `seed`. The report
/// contains no timings, so equal arguments give byte-identical output.
pub fn cmd_selftest(mode: SelftestMode, seed: u64, tol: Option<f64>) -> Result<RunReport> {
    let scale = match mode {
        SelftestMode::Quick => &QUICK,
        SelftestMode::Full => &FULL,
    };
    type Suite = fn(&mut HaarSampler, &Scale, &mut Checks) -> Result<Value>;
    let suites: [(&str, Suite); 7] = [
        ("schmidt_round_trip", schmidt_round_trip),
        ("joint_svd", joint_svd_suite),
        ("joint_diag", joint_diag_suite),
        ("purity_identities", purity_suite),
        ("bloch_budget", bloch_budget),
        ("schmidt_basis_structure", schmidt_structure),
        ("extremality", extremality),
    ];
    let mut criteria = Vec::new();
    let mut failures = Vec::new();
    let mut record = |id: usize, name: &str, checks: Checks, summary: Value| {
        for mut f in checks.failures() {
            f.name = format!("{name}.{}", f.name);
            failures.push(f);
        }
        let passed = checks.items().iter().all(|c| c.passed);
        criteria
            .push(json!({ "id": id, "name": name, "passed": passed, "summary": summary, "checks": checks.items() }));
    };
    for (i, (name, suite)) in suites.iter().enumerate() {
        let mut rng = HaarSampler::new(seed.wrapping_add(1000 * (i as u64 + 1)));
        let mut checks = Checks::new(tol);
        let summary = suite(&mut rng, scale, &mut checks)?;
        record(i + 1, name, checks, summary);
    }
    let mut rng = HaarSampler::new(seed.wrapping_add(8000));
    let mut checks = Checks::new(tol);
    let (summary, literal_gap) = appendix_chain(&mut rng, scale, &mut checks)?;
    record(8, "appendix_chain", checks, summary);

    let reduction_check =
        reduce_rank1(&BipartiteState::basis(2, 2, 0, 0)?, &BipartiteState::basis(2, 2, 1, 1)?, Side::TracedOverB)?;
    let results = json!({
        "mode": match mode { SelftestMode::Quick => "quick", SelftestMode::Full => "full" },
        "criteria": criteria,
        "known_discrepancies": [{
            "name": "offdiag_2sector_weight_only_vs_bloch",
            "worst_gap": literal_gap,
            "tolerance": 1e-8,
            "note": "informational: the weight-only closed form omits coherent 1-sector terms; the exact closed form is the one checked above",
        }],
        "disjoint_support_reduction_vanishes": reduction_check.is_zero(),
    });
    Ok(RunReport::new("selftest", vec![], Some(seed), results, failures))
}
