//! Jacobian-rank spot check at rational points.

use super::kernel::{self, CompiledPoly};
use super::{embedded_generator, Backend, CountConfig, GeomError, VarietySpec};
use crate::ff::FieldOps;
use crate::with_backend;

fn rank<F: FieldOps>(ops: &F, mut rows: Vec<Vec<F::E>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(k) = (rank..rows.len()).find(|&k| !ops.is_zero(rows[k][c])) else {
            continue;
        };
        rows.swap(rank, k);
        let inv = ops.inv(rows[rank][c]);
        for k in 0..rows.len() {
            if k != rank && !ops.is_zero(rows[k][c]) {
                let f = ops.mul(rows[k][c], inv);
                for j in 0..ncols {
                    let t = ops.mul(f, rows[rank][j]);
                    rows[k][j] = ops.sub(rows[k][j], t);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// True iff at every `F_{q^r}`-point the Jacobian of the equations has rank
/// equal to the number of equations. Advisory only.
pub fn smoothness_spot_check(v: &VarietySpec, r: u32, cfg: &CountConfig) -> Result<bool, GeomError> {
    let factor = v
        .as_factor()
        .ok_or_else(|| GeomError::Unsupported("smoothness check needs a single affine or projective variety".into()))?;
    if factor.equations.is_empty() {
        return Ok(true);
    }
    let ext = v.base.extension(r)?;
    let gen_idx = embedded_generator(&v.base, &ext);
    let backend = Backend::new(&ext);
    with_backend!(&backend, ops => {
        let gen = ops.from_index(gen_idx);
        let k = kernel::FactorKernel::new(ops, factor, gen);
        kernel::check_budget(k.prefix_count(), cfg.budget)?;
        let jac: Vec<Vec<CompiledPoly<_>>> = factor
            .equations
            .iter()
            .map(|f| (0..factor.ncoords()).map(|i| CompiledPoly::new(ops, &f.derivative(i), gen)).collect())
            .collect();
        Ok(k.points().iter().all(|pt| {
            let rows = jac.iter().map(|row| row.iter().map(|d| d.eval_at(ops, pt)).collect()).collect();
            rank(ops, rows) == factor.equations.len()
        }))
    })
}
