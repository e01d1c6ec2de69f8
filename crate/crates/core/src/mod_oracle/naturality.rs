//! Joint search for invertible canonical-map candidates `ψ_F : lim F → colim F`
//! subject to `colim(η)·ψ_F = ψ_G·lim(η)`.

use super::{colimit_map, lim_colim_vect, limit_map, LimColimVect, VectFunctor, VectNatTransform};
use crate::category::FinCategory;
use crate::linalg::MatrixFp;
use crate::rng::XorShift64Star;

/// Largest solution space enumerated point by point.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000;
/// Random points tried when the space is too large to enumerate.
pub const SAMPLING_TRIALS: usize = 10_000;
const SAMPLING_SEED: u64 = 0x5EED;

/// Functors and natural transformations between them; a transform is
/// `(source index, target index, η)`.
#[derive(Clone, Debug)]
pub struct NaturalityProblem {
    pub p: u64,
    pub functors: Vec<VectFunctor>,
    pub transforms: Vec<(usize, usize, VectNatTransform)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NaturalityOutcome {
    /// One invertible `ψ_F` per functor.
    Feasible(Vec<MatrixFp>),
    Infeasible(String),
    /// Sampling found nothing and nothing was proved.
    Inconclusive { solution_dim: usize, trials: usize },
}

impl NaturalityOutcome {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, NaturalityOutcome::Infeasible(_))
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, NaturalityOutcome::Feasible(_))
    }
}

struct Layout {
    /// `(offset, rows, cols)` of each unknown matrix in the unknown vector.
    blocks: Vec<(usize, usize, usize)>,
}

impl Layout {
    fn matrices(&self, p: u64, x: &[u64]) -> Vec<MatrixFp> {
        self.blocks
            .iter()
            .map(|&(off, r, c)| MatrixFp::new(p, r, c, x[off..off + r * c].to_vec()).expect("prime"))
            .collect()
    }
}

fn all_invertible(ms: &[MatrixFp]) -> bool {
    ms.iter().all(MatrixFp::is_invertible)
}

fn combine(p: u64, basis: &MatrixFp, coeffs: &[u64]) -> Vec<u64> {
    basis.mul_vec(coeffs).unwrap_or_else(|_| vec![0; basis.rows()]).iter().map(|x| x % p).collect()
}

/// Whether every matrix in the span of `gens` (all `r × c`, `r == c > 0`)
/// is singular because of a shared kernel or cokernel vector.
fn common_degeneracy(p: u64, rows: usize, cols: usize, gens: &[MatrixFp]) -> Option<&'static str> {
    let mut stacked = MatrixFp::zeros(p, 0, cols).expect("prime");
    let mut side = MatrixFp::zeros(p, rows, 0).expect("prime");
    for g in gens {
        stacked = stacked.vstack(g).expect("same width");
        side = side.hstack(g).expect("same height");
    }
    if gens.iter().all(MatrixFp::is_zero) {
        Some("forced to zero")
    } else if stacked.rank() < cols {
        Some("has a kernel vector common to all solutions")
    } else if side.rank() < rows {
        Some("misses a cokernel direction common to all solutions")
    } else {
        None
    }
}

/// Solves the linear constraints on all `ψ_F` jointly, then looks for a
/// point of the solution space where every `ψ_F` is invertible: first by
/// detecting degeneracies shared by the whole space, then by exhaustive
/// enumeration up to [`EXHAUSTIVE_LIMIT`] points, then by
/// [`SAMPLING_TRIALS`] random points.
pub fn solve_naturality(cat: &FinCategory, problem: &NaturalityProblem) -> NaturalityOutcome {
    let p = problem.p;
    let data: Vec<LimColimVect> = problem.functors.iter().map(|f| lim_colim_vect(cat, f)).collect();
    let mut blocks = Vec::with_capacity(data.len());
    let mut total = 0;
    for (k, d) in data.iter().enumerate() {
        let (a, b) = (d.limit.cols(), d.colimit.dim());
        if a != b {
            return NaturalityOutcome::Infeasible(format!(
                "functor {k}: limit has dimension {a}, colimit {b}"
            ));
        }
        blocks.push((total, b, a));
        total += a * b;
    }
    let layout = Layout { blocks };

    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (s, t, eta) in &problem.transforms {
        let (fs, ft) = (&problem.functors[*s], &problem.functors[*t]);
        let lm = limit_map(eta, (fs, &data[*s].limit), (ft, &data[*t].limit));
        let cm = colimit_map(eta, (fs, &data[*s].colimit), (ft, &data[*t].colimit));
        let (os, bs, as_) = layout.blocks[*s];
        let (ot, _, at) = layout.blocks[*t];
        for r in 0..cm.rows() {
            for c in 0..as_ {
                let mut row = vec![0u64; total];
                for m in 0..bs {
                    let idx = os + m * as_ + c;
                    row[idx] = (row[idx] + cm.get(r, m)) % p;
                }
                for m in 0..at {
                    let idx = ot + r * at + m;
                    row[idx] = (row[idx] + p - lm.get(m, c)) % p;
                }
                rows.push(row);
            }
        }
    }
    let constraints = if rows.is_empty() {
        MatrixFp::zeros(p, 0, total).expect("prime")
    } else {
        let flat: Vec<u64> = rows.iter().flatten().copied().collect();
        MatrixFp::new(p, rows.len(), total, flat).expect("prime")
    };
    let basis = constraints.nullspace();
    let d = basis.cols();

    for (k, &(off, r, c)) in layout.blocks.iter().enumerate() {
        if r == 0 {
            continue;
        }
        let gens: Vec<MatrixFp> = basis
            .columns()
            .iter()
            .map(|v| MatrixFp::new(p, r, c, v[off..off + r * c].to_vec()).expect("prime"))
            .collect();
        if let Some(why) = common_degeneracy(p, r, c, &gens) {
            return NaturalityOutcome::Infeasible(format!("functor {k}: ψ {why}"));
        }
    }

    let points = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&n| n <= EXHAUSTIVE_LIMIT));
    if let Some(points) = points {
        let mut coeffs = vec![0u64; d];
        for _ in 0..points {
            let ms = layout.matrices(p, &combine(p, &basis, &coeffs));
            if all_invertible(&ms) {
                return NaturalityOutcome::Feasible(ms);
            }
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
        return NaturalityOutcome::Infeasible(format!(
            "none of the {points} solutions is invertible everywhere"
        ));
    }

    let mut rng = XorShift64Star::new(SAMPLING_SEED);
    for _ in 0..SAMPLING_TRIALS {
        let coeffs: Vec<u64> = (0..d).map(|_| rng.below(p)).collect();
        let ms = layout.matrices(p, &combine(p, &basis, &coeffs));
        if all_invertible(&ms) {
            return NaturalityOutcome::Feasible(ms);
        }
    }
    NaturalityOutcome::Inconclusive {
        solution_dim: d,
        trials: SAMPLING_TRIALS,
    }
}
