use std::cell::RefCell;
use std::f64::consts::PI;
use std::io;

use serde::Serialize;

use crate::bloch::gell_mann::gell_mann_basis;
use crate::bloch::sectors::{self, diag_2sector_fast, SectorReport};
use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{CMatrix, C64};
use crate::random::HaarSampler;
use crate::state::{apply_local, BipartiteState};
use crate::tol;

/// One sampled local basis, in the column layout of the CSV output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub sample: usize,
    pub diag_0: f64,
    pub diag_1: f64,
    pub diag_2: f64,
    pub offdiag_1: f64,
    pub offdiag_2: f64,
}

impl ScanRow {
    fn from_report(sample: usize, r: &SectorReport) -> Self {
        Self {
            sample,
            diag_0: r.diag_0,
            diag_1: r.diag_1,
            diag_2: r.diag_2,
            offdiag_1: r.offdiag_1,
            offdiag_2: r.offdiag_2,
        }
    }
}

/// Diag/offdiag 2-sector contributions over many local bases compared with
/// the Schmidt-basis reference.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub reference: SectorReport,
    pub half_concurrence_sq: f64,
    pub max_diag_2: f64,
    pub min_offdiag_2: f64,
    /// `max(diag_2) − diag_2*`; never positive beyond the slack.
    pub max_diag_2_excess: f64,
    /// `min(offdiag_2) − offdiag_2*`; never negative beyond the slack.
    pub min_offdiag_2_margin: f64,
    /// Samples with `diag_2 > diag_2* + slack` or `offdiag_2 < offdiag_2* − slack`.
    pub violations: usize,
    pub slack: f64,
    #[serde(skip)]
    pub rows: Vec<ScanRow>,
}

/// Evaluates the sector contributions of `(U_A ⊗ U_B)|ψ⟩` for each given
/// pair. Unitaries act on the padded state.
pub fn scan_bases(state: &BipartiteState, pairs: &[(CMatrix, CMatrix)]) -> Result<ScanReport> {
    let d = state.dim_a().max(state.dim_b()).max(2);
    let basis = gell_mann_basis(d)?;
    let padded = state.padded(d)?;
    let reference = sectors::schmidt_basis_contributions(state)?;
    let slack = tol::EXTREMAL_SLACK;

    let mut rows = Vec::with_capacity(pairs.len());
    let mut violations = 0;
    for (i, (ua, ub)) in pairs.iter().enumerate() {
        let r = sectors::sector_contributions_with(&apply_local(&padded, ua, ub)?, &basis, "sample")?;
        if r.diag_2 > reference.diag_2 + slack || r.offdiag_2 < reference.offdiag_2 - slack {
            violations += 1;
        }
        rows.push(ScanRow::from_report(i, &r));
    }
    let max_diag_2 = rows.iter().map(|r| r.diag_2).fold(f64::NEG_INFINITY, f64::max);
    let min_offdiag_2 = rows.iter().map(|r| r.offdiag_2).fold(f64::INFINITY, f64::min);
    Ok(ScanReport {
        samples: rows.len(),
        seed: None,
        half_concurrence_sq: sectors::concurrence_sq(state) / 2.0,
        max_diag_2,
        min_offdiag_2,
        max_diag_2_excess: max_diag_2 - reference.diag_2,
        min_offdiag_2_margin: min_offdiag_2 - reference.offdiag_2,
        violations,
        slack,
        reference,
        rows,
    })
}

/// Scan over `n_samples` Haar-random local unitary pairs.
pub fn extremal_scan(state: &BipartiteState, n_samples: usize, seed: u64) -> Result<ScanReport> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
    }
    let d = state.dim_a().max(state.dim_b()).max(2);
    let mut rng = HaarSampler::new(seed);
    let pairs = (0..n_samples).map(|_| rng.local_pair(d, d)).collect::<Result<Vec<_>>>()?;
    let mut report = scan_bases(state, &pairs)?;
    report.seed = Some(seed);
    Ok(report)
}

/// Writes scan rows as CSV with a header line.
pub fn write_scan_csv<W: io::Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizeResult {
    /// Largest diag 2-sector contribution found.
    pub best: f64,
    /// Value in the Schmidt basis.
    pub reference: f64,
    /// `reference − best`.
    pub gap: f64,
    #[serde(serialize_with = "json::matrix")]
    pub u_a: CMatrix,
    #[serde(serialize_with = "json::matrix")]
    pub u_b: CMatrix,
    pub restarts: usize,
    /// Sweeps used by the restart that produced `best`.
    pub sweeps: usize,
    /// Some restart stopped on the sweep limit while still improving.
    pub hit_iteration_limit: bool,
}

const COARSE: usize = 8;
const REFINE_ROUNDS: usize = 2;
const GOLDEN_STEPS: usize = 32;
const SWEEP_TOL: f64 = 1e-12;

/// `R(θ, α) = [[cos θ, −e^{iα} sin θ], [e^{−iα} sin θ, cos θ]]` applied to
/// rows `p, q` (party A) or columns `p, q` (party B) of `m`.
fn rotate(m: &mut CMatrix, rows: bool, p: usize, q: usize, theta: f64, alpha: f64) {
    let (s, c) = theta.sin_cos();
    let e = C64::from_polar(1.0, alpha);
    let n = if rows { m.ncols() } else { m.nrows() };
    for i in 0..n {
        let (ip, iq) = if rows { ((p, i), (q, i)) } else { ((i, p), (i, q)) };
        let (x, y) = (m[ip], m[iq]);
        m[ip] = x * c - e * y * s;
        m[iq] = e.conj() * x * s + y * c;
    }
}

fn golden<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn rotation_matrix(d: usize, p: usize, q: usize, theta: f64, alpha: f64) -> CMatrix {
    let mut r = CMatrix::identity(d, d);
    rotate(&mut r, true, p, q, theta, alpha);
    r
}

/// Plane moves tried for every index pair. The joint moves rotate both
/// parties at once, `R(θ, α)` on A with `R(±θ, −α)` on B; near a diagonal
/// grid with close weights they follow directions along which single-party
/// rotations only zigzag.
#[derive(Clone, Copy)]
enum Move {
    A,
    B,
    JointSame,
    JointOpposite,
}

/// `(theta, alpha)` of one rotation, `None` for no rotation.
type Rotation = Option<(f64, f64)>;

impl Move {
    const ALL: [Move; 4] = [Move::A, Move::B, Move::JointSame, Move::JointOpposite];

    /// Rotation parameters for `(A, B)`; `None` leaves that party alone.
    fn params(self, theta: f64, alpha: f64) -> (Rotation, Rotation) {
        match self {
            Move::A => (Some((theta, alpha)), None),
            Move::B => (None, Some((theta, alpha))),
            Move::JointSame => (Some((theta, alpha)), Some((theta, -alpha))),
            Move::JointOpposite => (Some((theta, alpha)), Some((-theta, -alpha))),
        }
    }

    fn apply(self, m: &mut CMatrix, p: usize, q: usize, theta: f64, alpha: f64) {
        let (a, b) = self.params(theta, alpha);
        if let Some((t, al)) = a {
            rotate(m, true, p, q, t, al);
        }
        if let Some((t, al)) = b {
            rotate(m, false, p, q, t, al);
        }
    }
}

/// Best parameters for one move on one index pair: coarse grid over
/// `(θ, α)` followed by alternating golden-section refinement. `(0, 0)` is on
/// the grid, so the value never decreases.
fn best_rotation(m: &CMatrix, mv: Move, p: usize, q: usize) -> (f64, f64, f64) {
    let scratch = RefCell::new(m.clone());
    let eval = |theta: f64, alpha: f64| {
        let mut t = scratch.borrow_mut();
        t.copy_from(m);
        mv.apply(&mut t, p, q, theta, alpha);
        diag_2sector_fast(&t)
    };
    let step = PI / COARSE as f64;
    let mut best = (0.0, 0.0, eval(0.0, 0.0));
    for i in 0..COARSE {
        for j in 0..COARSE {
            let (theta, alpha) = (-PI / 2.0 + i as f64 * step, j as f64 * step);
            let v = eval(theta, alpha);
            if v > best.2 {
                best = (theta, alpha, v);
            }
        }
    }
    let half = step / 2.0;
    for _ in 0..REFINE_ROUNDS {
        let (t, v) = golden(|x| eval(x, best.1), best.0 - half, best.0 + half);
        if v > best.2 {
            best = (t, best.1, v);
        }
        let (a, v) = golden(|x| eval(best.0, x), best.1 - half, best.1 + half);
        if v > best.2 {
            best = (best.0, a, v);
        }
    }
    best
}

struct Run {
    value: f64,
    u_a: CMatrix,
    u_b: CMatrix,
    sweeps: usize,
    at_limit: bool,
}

fn ascend(grid: &CMatrix, mut u_a: CMatrix, mut u_b: CMatrix, max_sweeps: usize) -> Run {
    let d = grid.nrows();
    let mut m = &u_a * grid * u_b.transpose();
    let mut value = diag_2sector_fast(&m);
    let mut sweeps = 0;
    let mut at_limit = true;
    while sweeps < max_sweeps {
        sweeps += 1;
        let start = value;
        for mv in Move::ALL {
            for p in 0..d {
                for q in (p + 1)..d {
                    let (theta, alpha, v) = best_rotation(&m, mv, p, q);
                    if v > value {
                        mv.apply(&mut m, p, q, theta, alpha);
                        let (a, b) = mv.params(theta, alpha);
                        if let Some((t, al)) = a {
                            u_a = rotation_matrix(d, p, q, t, al) * &u_a;
                        }
                        if let Some((t, al)) = b {
                            u_b = rotation_matrix(d, p, q, t, al) * &u_b;
                        }
                        value = diag_2sector_fast(&m);
                    }
                }
            }
        }
        if value - start < SWEEP_TOL {
            at_limit = false;
            break;
        }
    }
    Run { value, u_a, u_b, sweeps, at_limit }
}

/// Maximizes the diag 2-sector contribution over local unitaries by Jacobi
/// sweeps of complex plane rotations. Restart 0 starts from the current
/// basis, the others from Haar-random local bases.
pub fn optimize_diag_2sector(
    state: &BipartiteState,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<OptimizeResult> {
    if restarts == 0 || iters == 0 {
        return Err(Error::InvalidParameter("restarts and iters must be positive".into()));
    }
    let d = state.dim_a().max(state.dim_b()).max(2);
    let grid = state.padded(d)?.amplitudes().clone();
    let reference = sectors::schmidt_basis_contributions(state)?.diag_2;
    let mut rng = HaarSampler::new(seed);

    let mut best: Option<Run> = None;
    let mut hit_iteration_limit = false;
    for r in 0..restarts {
        let (ua, ub) = if r == 0 { (CMatrix::identity(d, d), CMatrix::identity(d, d)) } else { rng.local_pair(d, d)? };
        let run = ascend(&grid, ua, ub, iters);
        hit_iteration_limit |= run.at_limit;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let run = best.expect("at least one restart");
    Ok(OptimizeResult {
        best: run.value,
        reference,
        gap: reference - run.value,
        u_a: run.u_a,
        u_b: run.u_b,
        restarts,
        sweeps: run.sweeps,
        hit_iteration_limit,
    })
}
